use super::{default_names, PolyError, Polynomial};
use crate::scalar::{Complex, Scalar};

/// A system `f1 = … = fs = 0` with named variables.
#[derive(Clone, PartialEq)]
pub struct PolySystem<C> {
    vars: Vec<String>,
    polys: Vec<Polynomial<C>>,
}

impl<C: Scalar> PolySystem<C> {
    pub fn new(vars: Vec<String>, polys: Vec<Polynomial<C>>) -> Result<Self, PolyError> {
        if polys.is_empty() {
            return Err(PolyError::EmptySystem);
        }
        if let Some(bad) = polys.iter().find(|p| p.nvars() != vars.len()) {
            return Err(PolyError::DimensionMismatch {
                expected: vars.len(),
                got: bad.nvars(),
            });
        }
        Ok(PolySystem { vars, polys })
    }

    /// System with default variable names `x1, …, xn`.
    pub fn unnamed(polys: Vec<Polynomial<C>>) -> Result<Self, PolyError> {
        let n = polys.first().ok_or(PolyError::EmptySystem)?.nvars();
        Self::new(default_names(n), polys)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.vars.len()
    }

    pub fn polys(&self) -> &[Polynomial<C>] {
        &self.polys
    }

    /// Total degrees, `-1` for zero polynomials.
    pub fn degrees(&self) -> Vec<i64> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    pub fn evaluate(&self, point: &[C]) -> Result<Vec<C>, PolyError> {
        self.polys.iter().map(|p| p.evaluate(point)).collect()
    }

    pub fn to_complex(&self) -> PolySystem<Complex> {
        PolySystem {
            vars: self.vars.clone(),
            polys: self.polys.iter().map(|p| p.to_complex()).collect(),
        }
    }

    /// `max_i |f_i(z)|` at a complex point.
    pub fn residual(&self, point: &[Complex]) -> Result<f64, PolyError> {
        let mut worst: f64 = 0.0;
        for p in &self.polys {
            let v = p.to_complex().evaluate(point)?;
            worst = worst.max(v.norm());
        }
        Ok(worst)
    }

    /// `max_i Σ_α |c_α| |z^α|`, the magnitude scale of the residual at `point`.
    pub fn residual_scale(&self, point: &[Complex]) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.polys {
            let mut s = 0.0;
            for (m, c) in p.terms() {
                let mut t = c.magnitude();
                for (z, &e) in point.iter().zip(m.exponents()) {
                    t *= z.norm().powi(e as i32);
                }
                s += t;
            }
            worst = worst.max(s);
        }
        worst
    }
}

impl<C: Scalar> std::fmt::Debug for PolySystem<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(", "))?;
        for p in &self.polys {
            writeln!(f, "{}", p.display(&self.vars))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::Rational;

    #[test]
    fn construction_checks() {
        let names = vec!["x".to_string(), "y".to_string()];
        let f = parse_polynomial("x^2 + y^2 - 2", &names).unwrap();
        let g = parse_polynomial("3*x^2 - y^2 - 2", &names).unwrap();
        let sys = PolySystem::new(names.clone(), vec![f.clone(), g]).unwrap();
        assert!(sys.is_square());
        assert_eq!(sys.degrees(), vec![2, 2]);
        assert!(PolySystem::<Rational>::new(names.clone(), vec![]).is_err());
        let h = Polynomial::<Rational>::var(3, 0);
        assert!(PolySystem::new(names, vec![f, h]).is_err());
        let r = sys.residual(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]).unwrap();
        assert_eq!(r, 0.0);
    }
}
