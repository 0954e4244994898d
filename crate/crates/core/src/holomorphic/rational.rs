use super::poly::Poly;
use crate::geometry::PlanarDomain;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `num / den` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

impl RationalFunction {
    pub fn polynomial(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn derivative(&self) -> RationalFunction {
        let (n, d) = (&self.num, &self.den);
        if d.degree() == 0 {
            return RationalFunction { num: n.derivative().scale(1.0 / d.coeffs[0]), den: Poly::one() };
        }
        let top = n.derivative().mul(d).add(&n.mul(&d.derivative()).scale(Complex64::new(-1.0, 0.0)));
        RationalFunction { num: top, den: d.mul(d) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn to_json(&self) -> String {
        let conv = |p: &Poly| p.coeffs.iter().map(|c| [c.re, c.im]).collect();
        serde_json::to_string(&RationalJson { num: conv(&self.num), den: conv(&self.den) }).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: RationalJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("rational function json: {e}")))?;
        let conv = |v: &[[f64; 2]]| Poly::new(v.iter().map(|c| Complex64::new(c[0], c[1])).collect());
        if r.den.iter().all(|c| c[0] == 0.0 && c[1] == 0.0) {
            return Err(Error::InvalidInput("rational function has zero denominator".into()));
        }
        Ok(RationalFunction { num: conv(&r.num), den: conv(&r.den) })
    }
}

/// Formal sum of points with integer multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Divisor {
    pub entries: Vec<(Complex64, i32)>,
}

impl Divisor {
    pub fn degree(&self) -> i32 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// `∏ (z - p_i)^{n_i} / (z - q)^{max(0, deg d)}`. Negative multiplicities go
/// to the denominator. `q` must lie outside the closed domain.
pub fn meromorphic_with_divisor(d: &Divisor, q: Complex64, domain: &PlanarDomain) -> Result<RationalFunction> {
    let qp = [q.re, q.im];
    if domain.contains(qp) || domain.distance_to_boundary(qp) < 1e-12 {
        return Err(Error::InvalidInput(format!("pole {q} must lie outside the closed domain")));
    }
    let mut num = Poly::one();
    let mut den = Poly::one();
    for &(p, n) in &d.entries {
        let factor = Poly::from_roots(&vec![p; n.unsigned_abs() as usize]);
        if n >= 0 {
            num = num.mul(&factor);
        } else {
            den = den.mul(&factor);
        }
    }
    let deg = d.degree().max(0) as usize;
    den = den.mul(&Poly::from_roots(&vec![q; deg]));
    Ok(RationalFunction { num, den })
}
