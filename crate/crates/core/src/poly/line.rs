//! Lines on surfaces: substituting `x_i = a_i + t*b_i` into a cubic.

use super::{parse_polynomial, PolyError, PolySystem, Polynomial};
use crate::scalar::Rational;

/// Coefficients of `t^3, t^2, t, 1` after substituting the line
/// `(a1 + t*b1, a2 + t*b2, a3 + t*b3)`, as polynomials in
/// `(a1, a2, a3, b1, b2, b3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCoefficients {
    pub coefficients: [Polynomial<Rational>; 4],
}

pub const LINE_VARS: [&str; 6] = ["a1", "a2", "a3", "b1", "b2", "b3"];

pub fn substitute_line(f: &Polynomial<Rational>) -> Result<LineCoefficients, PolyError> {
    if f.nvars() != 3 {
        return Err(PolyError::DimensionMismatch { expected: 3, got: f.nvars() });
    }
    // Ring (a1, a2, a3, b1, b2, b3, t).
    let t = Polynomial::<Rational>::var(7, 6);
    let images: Vec<_> = (0..3)
        .map(|i| &Polynomial::var(7, i) + &(&Polynomial::var(7, i + 3) * &t))
        .collect();
    let g = f.compose(&images, 7)?;
    let tdeg = g.degree_in(6) as usize;
    if tdeg > 3 {
        return Err(PolyError::LineDegree(tdeg));
    }
    let mut buckets: [Polynomial<Rational>; 4] = std::array::from_fn(|_| Polynomial::zero(6));
    for (m, c) in g.terms() {
        let e = m.exponents();
        let slot = 3 - e[6] as usize;
        let mono = super::Monomial::new(e[..6].to_vec());
        buckets[slot].add_term(mono, c.clone());
    }
    Ok(LineCoefficients { coefficients: buckets })
}

impl LineCoefficients {
    pub fn var_names() -> Vec<String> {
        LINE_VARS.iter().map(|s| s.to_string()).collect()
    }

    /// Eliminates `a3` and `b3` through affine expressions in `(a1, a2, b1, b2)`,
    /// giving a square system in those four unknowns.
    pub fn reduce(&self, a3: &Polynomial<Rational>, b3: &Polynomial<Rational>) -> Result<PolySystem<Rational>, PolyError> {
        let v = |i| Polynomial::<Rational>::var(4, i);
        let images = [v(0), v(1), a3.clone(), v(2), v(3), b3.clone()];
        let polys = self
            .coefficients
            .iter()
            .map(|p| p.compose(&images, 4))
            .collect::<Result<Vec<_>, _>>()?;
        PolySystem::new(reduced_names(), polys)
    }
}

fn reduced_names() -> Vec<String> {
    ["a1", "a2", "b1", "b2"].iter().map(|s| s.to_string()).collect()
}

/// The Clebsch diagonal cubic surface in `x, y, z`.
pub fn clebsch_cubic() -> Polynomial<Rational> {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    parse_polynomial(
        "81*(x^3 + y^3 + z^3) - 189*(x^2*y + x^2*z + y^2*x + y^2*z + x*z^2 + y*z^2) + 54*x*y*z \
         + 126*(x*y + x*z + y*z) - 9*(x^2 + y^2 + z^2) - 9*(x + y + z) + 1",
        &names,
    )
    .expect("Clebsch cubic parses")
}

/// Four equations in `(a1, a2, b1, b2)` whose solutions are the lines on the
/// Clebsch surface, after `a3 = -(7 + a1 + 3*a2)/5`, `b3 = -(11 + 3*b1 + 5*b2)/7`.
pub fn clebsch_lines_system() -> PolySystem<Rational> {
    let names = reduced_names();
    let a3 = parse_polynomial("-7/5 - 1/5*a1 - 3/5*a2", &names).unwrap();
    let b3 = parse_polynomial("-11/7 - 3/7*b1 - 5/7*b2", &names).unwrap();
    substitute_line(&clebsch_cubic())
        .and_then(|lc| lc.reduce(&a3, &b3))
        .expect("Clebsch line system")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::rat;

    fn xyz(s: &str) -> Polynomial<Rational> {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &names).unwrap()
    }

    fn ab(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s, &LineCoefficients::var_names()).unwrap()
    }

    #[test]
    fn linear_and_cubic_monomials() {
        let lc = substitute_line(&xyz("x")).unwrap();
        assert!(lc.coefficients[0].is_zero());
        assert!(lc.coefficients[1].is_zero());
        assert_eq!(lc.coefficients[2], ab("b1"));
        assert_eq!(lc.coefficients[3], ab("a1"));
        let lc = substitute_line(&xyz("x^3")).unwrap();
        assert_eq!(lc.coefficients[0], ab("b1^3"));
        assert_eq!(lc.coefficients[1], ab("3*a1*b1^2"));
        assert_eq!(lc.coefficients[2], ab("3*a1^2*b1"));
        assert_eq!(lc.coefficients[3], ab("a1^3"));
        assert!(matches!(substitute_line(&xyz("x^4")), Err(PolyError::LineDegree(4))));
    }

    #[test]
    fn clebsch_system_shape() {
        let f = clebsch_cubic();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.coefficient(&Monomial::new(vec![1, 1, 1])), rat(54, 1));
        let sys = clebsch_lines_system();
        assert_eq!(sys.nvars(), 4);
        assert_eq!(sys.len(), 4);
        assert_eq!(sys.degrees(), vec![3, 3, 3, 3]);
    }

    #[test]
    fn coefficients_recombine_to_the_cubic() {
        // f(a + t b) at t = 2 equals 8 f1 + 4 f2 + 2 f3 + f4.
        let f = clebsch_cubic();
        let lc = substitute_line(&f).unwrap();
        let pt: Vec<Rational> = [1, -2, 3, 2, 5, -1].iter().map(|&v| rat(v, 1)).collect();
        let t = rat(2, 1);
        let combined = lc.coefficients.iter().fold(rat(0, 1), |acc, c| acc * t.clone() + c.evaluate(&pt).unwrap());
        let on_line: Vec<Rational> = (0..3).map(|i| pt[i].clone() + t.clone() * pt[i + 3].clone()).collect();
        assert_eq!(combined, f.evaluate(&on_line).unwrap());
    }
}
