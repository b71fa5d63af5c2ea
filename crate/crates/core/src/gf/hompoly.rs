//! Homogeneous bivariate polynomials in x1, x2 over F_p.
//!
//! A polynomial of (formal) degree d is stored as d+1 coefficients indexed
//! by x1-degree: `coeffs[i]` multiplies `x1^i * x2^(d-i)`. The zero
//! polynomial of formal degree d is the all-zero vector, kept around so that
//! determinants of singular square pencils stay representable.

use super::{poly_factor, Poly, Prime};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomPoly {
    coeffs: Vec<u64>,
    p: Prime,
}

impl HomPoly {
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Validation(
                "homogeneous polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(HomPoly {
            coeffs: coeffs.into_iter().map(|c| p.reduce(c)).collect(),
            p,
        })
    }

    pub fn zero(p: Prime, degree: usize) -> Self {
        HomPoly {
            coeffs: vec![0; degree + 1],
            p,
        }
    }

    pub fn one(p: Prime) -> Self {
        HomPoly {
            coeffs: vec![1],
            p,
        }
    }

    /// x1
    pub fn x1(p: Prime) -> Self {
        HomPoly {
            coeffs: vec![0, 1],
            p,
        }
    }

    /// x2
    pub fn x2(p: Prime) -> Self {
        HomPoly {
            coeffs: vec![1, 0],
            p,
        }
    }

    /// Homogenize a nonzero univariate polynomial to total degree `degree`
    /// (which must be at least its degree): f(x) becomes x2^(degree-deg f)
    /// times f(x1/x2) x2^(deg f).
    pub fn homogenize(f: &Poly, degree: usize) -> Result<Self> {
        let d = f.degree().ok_or(Error::Validation(
            "cannot homogenize the zero polynomial".into(),
        ))?;
        if d > degree {
            return Err(Error::Validation(format!(
                "degree {d} exceeds formal degree {degree}"
            )));
        }
        let mut coeffs = vec![0u64; degree + 1];
        coeffs[..=d].copy_from_slice(f.coeffs());
        Ok(HomPoly {
            coeffs,
            p: f.modulus(),
        })
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    /// Total (formal) degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients indexed by x1-degree.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Highest power of x1 with nonzero coefficient.
    pub fn x1_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// Multiplicity of x2 as a factor (degree minus x1-degree).
    pub fn x2_valuation(&self) -> Option<usize> {
        self.x1_degree().map(|d| self.degree() - d)
    }

    /// The dehomogenization g(x, 1).
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.p, self.coeffs.clone())
    }

    /// Leading coefficient with respect to x1.
    pub fn leading_x1(&self) -> u64 {
        self.x1_degree().map(|d| self.coeffs[d]).unwrap_or(0)
    }

    /// Unital: x2 itself, or leading x1-coefficient equal to 1.
    pub fn is_unital(&self) -> bool {
        *self == HomPoly::x2(self.p) || self.leading_x1() == 1
    }

    /// Scale so the leading x1-coefficient becomes 1 (zero stays zero).
    pub fn normalize_unital(&self) -> HomPoly {
        if self.is_zero() || self.leading_x1() == 1 {
            return self.clone();
        }
        let inv = self.p.inv(self.leading_x1()).expect("nonzero leading");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> HomPoly {
        let c = self.p.reduce(c);
        HomPoly {
            coeffs: self.coeffs.iter().map(|&a| self.p.mul(a, c)).collect(),
            p: self.p,
        }
    }

    pub fn mul(&self, rhs: &HomPoly) -> HomPoly {
        let p = self.p;
        let mut coeffs = vec![0u64; self.degree() + rhs.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = p.add(coeffs[i + j], p.mul(a, b));
            }
        }
        HomPoly { coeffs, p }
    }

    pub fn pow(&self, e: usize) -> HomPoly {
        let mut acc = HomPoly::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division; errors if the division leaves a remainder.
    pub fn div_exact(&self, rhs: &HomPoly) -> Result<HomPoly> {
        if rhs.is_zero() {
            return Err(Error::Singular);
        }
        if self.is_zero() {
            return Err(Error::Validation("dividing the zero polynomial".into()));
        }
        let va = self.x2_valuation().unwrap();
        let vb = rhs.x2_valuation().unwrap();
        if va < vb || self.degree() < rhs.degree() {
            return Err(Error::Validation("inexact homogeneous division".into()));
        }
        let ua = self.dehomogenize();
        let ub = rhs.dehomogenize();
        let (q, r) = ua.divmod(&ub)?;
        if !r.is_zero() {
            return Err(Error::Validation("inexact homogeneous division".into()));
        }
        let deg = self.degree() - rhs.degree();
        HomPoly::homogenize(&q, deg)
    }

    /// gcd of two homogeneous polynomials, unital-normalized: the x2 part
    /// and the dehomogenized part are combined.
    pub fn gcd(&self, rhs: &HomPoly) -> Option<HomPoly> {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => None,
            (true, false) => Some(rhs.normalize_unital()),
            (false, true) => Some(self.normalize_unital()),
            (false, false) => {
                let v = self.x2_valuation().unwrap().min(rhs.x2_valuation().unwrap());
                let g = self.dehomogenize().gcd(&rhs.dehomogenize());
                let d = g.degree().expect("gcd of nonzero polynomials");
                Some(HomPoly::homogenize(&g, d + v).unwrap())
            }
        }
    }

    /// Factor a nonzero homogeneous polynomial into unital irreducible
    /// powers: the x2 part plus the factorization of g(x, 1). A scalar unit
    /// is discarded, so the input is treated up to scale.
    pub fn factor(&self) -> Result<Vec<(HomPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::Validation("cannot factor zero".into()));
        }
        let mut out = Vec::new();
        let v = self.x2_valuation().unwrap();
        if v > 0 {
            out.push((HomPoly::x2(self.p), v));
        }
        let u = self.dehomogenize().monic();
        if u.degree().map(|d| d >= 1).unwrap_or(false) {
            for (q, m) in poly_factor(&u)? {
                let d = q.degree().unwrap();
                out.push((HomPoly::homogenize(&q, d)?, m));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Irreducible as a homogeneous polynomial: degree 1 and nonzero, or
    /// x2-free with irreducible dehomogenization.
    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.degree();
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        if self.x2_valuation() != Some(0) {
            return false;
        }
        match poly_factor(&self.dehomogenize().monic()) {
            Ok(f) => f.len() == 1 && f[0].1 == 1,
            Err(_) => false,
        }
    }

    /// Substitute x1 -> q11*x1 + q12*x2, x2 -> q21*x1 + q22*x2 where
    /// `q = [[q11, q12], [q21, q22]]`. Degree is preserved.
    pub fn substitute(&self, q: [[u64; 2]; 2]) -> HomPoly {
        let p = self.p;
        let d = self.degree();
        let mut out = vec![0u64; d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // (q11 x1 + q12 x2)^i * (q21 x1 + q22 x2)^(d-i)
            let a = binomial_expand(p, q[0][0], q[0][1], i);
            let b = binomial_expand(p, q[1][0], q[1][1], d - i);
            for (s, &ca) in a.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (t, &cb) in b.iter().enumerate() {
                    out[s + t] = p.add(out[s + t], p.mul(c, p.mul(ca, cb)));
                }
            }
        }
        HomPoly { coeffs: out, p }
    }
}

/// Coefficients of (a*x1 + b*x2)^e by x1-degree.
fn binomial_expand(p: Prime, a: u64, b: u64, e: usize) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..e {
        let mut next = vec![0u64; acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i + 1] = p.add(next[i + 1], p.mul(c, a));
            next[i] = p.add(next[i], p.mul(c, b));
        }
        acc = next;
    }
    acc
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let j = d - i;
            let mut parts = Vec::new();
            if c != 1 || (i == 0 && j == 0) {
                parts.push(format!("{c}"));
            }
            match i {
                0 => {}
                1 => parts.push("x1".into()),
                _ => parts.push(format!("x1^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("x2".into()),
                _ => parts.push(format!("x2^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
