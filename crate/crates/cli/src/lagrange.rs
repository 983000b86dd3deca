//! Lagrange multiplier systems for polynomial optimization.

use polysolve_core::poly::format_polynomial;
use polysolve_core::{PolySystem, Polynomial, Rational};

use crate::CliError;

/// Name of the `i`-th multiplier, 1-based.
pub fn multiplier_name(i: usize) -> String {
    format!("lambda{i}")
}

/// From `g, h_1, …, h_l` in `x_1, …, x_k`, the square system
/// `∂L/∂x_1 = ⋯ = ∂L/∂x_k = h_1 = ⋯ = h_l = 0` with `L = g - Σ λ_i h_i`
/// in the variables `x_1, …, x_k, λ_1, …, λ_l`.
pub fn lagrange_system(input: &PolySystem<Rational>) -> Result<PolySystem<Rational>, CliError> {
    let k = input.nvars();
    let (objective, constraints) = input.polys().split_first().ok_or_else(|| CliError::Input("no objective".into()))?;
    let l = constraints.len();
    let mut vars = input.vars().to_vec();
    for i in 1..=l {
        let name = multiplier_name(i);
        if vars.contains(&name) {
            return Err(CliError::Input(format!("variable `{name}` is reserved for a Lagrange multiplier")));
        }
        vars.push(name);
    }
    let n = k + l;
    let positions: Vec<usize> = (0..k).collect();
    let g = objective.embed(n, &positions);
    let hs: Vec<Polynomial<Rational>> = constraints.iter().map(|h| h.embed(n, &positions)).collect();
    let mut lagrangian = g;
    for (i, h) in hs.iter().enumerate() {
        lagrangian = &lagrangian - &(&Polynomial::var(n, k + i) * h);
    }
    let mut polys = Vec::with_capacity(n);
    for j in 0..k {
        polys.push(lagrangian.differentiate(j)?);
    }
    polys.extend(hs);
    Ok(PolySystem::new(vars, polys)?)
}

/// A system in the input file format.
pub fn system_text(system: &PolySystem<Rational>) -> String {
    let mut out = format!("vars: {}\n", system.vars().join(", "));
    for p in system.polys() {
        out.push_str(&format_polynomial(p, system.vars()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use polysolve_core::poly::{parse_polynomial, parse_system};

    #[test]
    fn unconstrained_is_the_gradient() {
        let sf = parse_system("vars: x\nx^2\n").unwrap();
        let sys = lagrange_system(&sf.system).unwrap();
        assert_eq!(sys.vars(), ["x"]);
        assert_eq!(sys.polys(), [parse_polynomial("2*x", &["x".to_string()]).unwrap()]);
    }

    #[test]
    fn multiplier_collision() {
        let sf = parse_system("vars: x, lambda1\nx^2 + lambda1\nx - 1\n").unwrap();
        assert!(matches!(lagrange_system(&sf.system), Err(CliError::Input(_))));
    }

    #[test]
    fn text_round_trips() {
        let sf = parse_system("vars: x1, x2\n(x1 - 2)^2 + (x2 - 3)^2\nx1^2 + x2^2 - 1\n").unwrap();
        let sys = lagrange_system(&sf.system).unwrap();
        let again = parse_system(&system_text(&sys)).unwrap().system;
        assert_eq!(again, sys);
    }
}
