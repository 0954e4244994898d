use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Complex64::new(1.0, 0.0))
    }

    /// `∏ (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Poly::one(), |p, &r| p.mul(&Poly::new(vec![-r, Complex64::new(1.0, 0.0)])))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Antiderivative vanishing at the origin.
    pub fn antiderivative(&self) -> Poly {
        let mut c = vec![Complex64::new(0.0, 0.0)];
        c.extend(self.coeffs.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
        Poly::new(c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Poly::new((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    /// Lagrange interpolation through `(z_k, w_k)`.
    pub fn interpolate(data: &[(Complex64, Complex64)]) -> Poly {
        let mut acc = Poly::constant(Complex64::new(0.0, 0.0));
        for (k, &(zk, wk)) in data.iter().enumerate() {
            let others: Vec<Complex64> =
                data.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &(z, _))| z).collect();
            let basis = Poly::from_roots(&others);
            let denom = basis.eval(zk);
            acc = acc.add(&basis.scale(wk / denom));
        }
        acc
    }
}
