//! Univariate polynomials over F_p: dense, lowest degree first.
//!
//! Factorization is deterministic trial division against enumerated
//! irreducibles; everything here runs at desk scale.

use super::Prime;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// Dense univariate polynomial. `coeffs[i]` is the coefficient of `x^i`;
/// trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: Prime,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| p.reduce(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn zero(p: Prime) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn one(p: Prime) -> Self {
        Poly::new(p, vec![1])
    }

    pub fn constant(p: Prime, c: u64) -> Self {
        Poly::new(p, vec![c])
    }

    pub fn x(p: Prime) -> Self {
        Poly::new(p, vec![0, 1])
    }

    /// `x^k`
    pub fn monomial(p: Prime, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Poly { p, coeffs }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = p.add(p.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| p.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(p, coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| p.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(p, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let p = self.p;
        Poly::new(p, self.coeffs.iter().map(|&c| p.neg(c)).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p;
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = p.add(coeffs[i + j], p.mul(a, b));
            }
        }
        Poly::new(p, coeffs)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let p = self.p;
        let c = p.reduce(c);
        Poly::new(p, self.coeffs.iter().map(|&a| p.mul(a, c)).collect())
    }

    /// Euclidean division; the divisor may have any nonzero leading
    /// coefficient.
    pub fn divmod(&self, div: &Poly) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(Error::Singular);
        }
        let p = self.p;
        let dd = div.degree().unwrap();
        let lead_inv = p.inv(div.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(p), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = p.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (i, &dc) in div.coeffs.iter().enumerate() {
                rem[k - dd + i] = p.sub(rem[k - dd + i], p.mul(c, dc));
            }
        }
        Ok((Poly::new(p, quot), Poly::new(p, rem)))
    }

    pub fn rem(&self, div: &Poly) -> Result<Poly> {
        Ok(self.divmod(div)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Normalize to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.p.inv(self.leading()).expect("nonzero leading");
        self.scale(inv)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut acc = Poly::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Ordering key: degree first, then the coefficient vector read from the
    /// top down (i.e. numeric base-p order).
    pub fn order_key(&self) -> (usize, Vec<u64>) {
        let mut rev = self.coeffs.clone();
        rev.reverse();
        (self.coeffs.len(), rev)
    }

    pub fn cmp_order(&self, other: &Poly) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// All monic irreducible polynomials of exactly degree `d`, in order.
/// Degree-1 polynomials are all irreducible; higher degrees are sieved by
/// trial division against lower-degree irreducibles.
pub fn irreducibles_of_degree(p: Prime, d: usize, limit: u128) -> Result<Vec<Poly>> {
    let layers = irreducible_layers(p, d, limit)?;
    Ok(layers.into_iter().nth(d - 1).unwrap_or_default())
}

/// All monic irreducible polynomials of degree `<= d`, deduplicated and
/// sorted by (degree, numeric coefficient order).
pub fn irreducibles_up_to(p: Prime, d: usize, limit: u128) -> Result<Vec<Poly>> {
    let layers = irreducible_layers(p, d, limit)?;
    Ok(layers.into_iter().flatten().collect())
}

fn irreducible_layers(p: Prime, d: usize, limit: u128) -> Result<Vec<Vec<Poly>>> {
    if d == 0 {
        return Ok(vec![]);
    }
    let needed = (p.get() as u128).pow(d as u32);
    if needed > limit {
        return Err(Error::ResourceGuard { needed, limit });
    }
    let mut layers: Vec<Vec<Poly>> = Vec::with_capacity(d);
    for deg in 1..=d {
        let mut layer = Vec::new();
        // Enumerate lower coefficients of monic degree-`deg` polynomials in
        // base-p counting order, which keeps the layer sorted.
        let total = p.get().pow(deg as u32);
        for code in 0..total {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                coeffs.push(c % p.get());
                c /= p.get();
            }
            coeffs.reverse(); // counting order = top coefficient first
            coeffs.reverse(); // back to little-endian for Poly::new
            let mut little = coeffs;
            little.push(1);
            let cand = Poly::new(p, little);
            let half = deg / 2;
            let mut irreducible = true;
            'outer: for lower in layers.iter().take(half) {
                for q in lower {
                    if q.divides(&cand) {
                        irreducible = false;
                        break 'outer;
                    }
                }
            }
            if irreducible {
                layer.push(cand);
            }
        }
        layer.sort_by(|a, b| a.cmp_order(b));
        layers.push(layer);
    }
    Ok(layers)
}

/// Factor a monic polynomial of degree >= 1 into monic irreducible powers,
/// sorted by (degree, numeric coefficient order). The product of the factors
/// with multiplicities equals the input.
pub fn poly_factor(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() || !f.is_monic() || f.degree() == Some(0) {
        return Err(Error::NonMonic);
    }
    let p = f.modulus();
    let mut rest = f.clone();
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let mut deg = 1usize;
    while rest.degree().map(|d| d >= 2 * deg).unwrap_or(false) {
        // Any factor of degree <= deg(rest)/2 is caught here; the final
        // remainder is irreducible by elimination.
        let layer = irreducibles_of_degree(p, deg, u128::MAX)?;
        for q in layer {
            let mut mult = 0usize;
            while q.divides(&rest) {
                rest = rest.divmod(&q).unwrap().0;
                mult += 1;
            }
            if mult > 0 {
                out.push((q, mult));
            }
        }
        deg += 1;
    }
    if rest.degree().map(|d| d >= 1).unwrap_or(false) {
        out.push((rest, 1));
    }
    out.sort_by(|a, b| a.0.cmp_order(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DEFAULT_ENUM_LIMIT;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn divmod_roundtrip() {
        let p = Prime::new(5).unwrap();
        let f = Poly::new(p, vec![1, 2, 3, 4, 1]);
        let g = Poly::new(p, vec![2, 0, 1]);
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree().unwrap_or(0) < g.degree().unwrap());
    }

    #[test]
    fn factor_difference_of_squares() {
        // x^2 - 1 = (x+1)(x+2) over F_3
        let f = Poly::new(p3(), vec![2, 0, 1]);
        let factors = poly_factor(&f).unwrap();
        assert_eq!(
            factors,
            vec![
                (Poly::new(p3(), vec![1, 1]), 1),
                (Poly::new(p3(), vec![2, 1]), 1),
            ]
        );
    }

    #[test]
    fn factor_x_is_itself() {
        let f = Poly::x(p3());
        assert_eq!(poly_factor(&f).unwrap(), vec![(Poly::x(p3()), 1)]);
    }

    #[test]
    fn x_squared_plus_one_irreducible_over_f3() {
        // Oracle: exhaustive root check shows no root, and degree 2 with no
        // root means irreducible.
        let f = Poly::new(p3(), vec![1, 0, 1]);
        for x in 0..3 {
            assert_ne!(f.eval(x), 0);
        }
        assert_eq!(poly_factor(&f).unwrap(), vec![(f.clone(), 1)]);
    }

    #[test]
    fn rejects_non_monic_and_zero() {
        let f = Poly::new(p3(), vec![1, 2]);
        assert!(poly_factor(&f).is_err());
        assert!(poly_factor(&Poly::zero(p3())).is_err());
        assert!(poly_factor(&Poly::one(p3())).is_err());
    }

    #[test]
    fn irreducibles_degree_one_over_f3() {
        let irr = irreducibles_up_to(p3(), 1, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(
            irr,
            vec![
                Poly::x(p3()),
                Poly::new(p3(), vec![1, 1]),
                Poly::new(p3(), vec![2, 1]),
            ]
        );
    }

    #[test]
    fn irreducible_quadratics_over_f3() {
        let irr = irreducibles_of_degree(p3(), 2, DEFAULT_ENUM_LIMIT).unwrap();
        // Necklace count: (p^2 - p) / 2 = 3.
        assert_eq!(irr.len(), 3);
        assert!(irr.contains(&Poly::new(p3(), vec![1, 0, 1])));
        for q in &irr {
            for x in 0..3 {
                assert_ne!(q.eval(x), 0, "{q} has a root");
            }
        }
    }

    #[test]
    fn enumeration_guard() {
        let p = Prime::new(101).unwrap();
        assert!(matches!(
            irreducibles_up_to(p, 4, DEFAULT_ENUM_LIMIT),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn factor_remultiplies_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e_37);
        for &pv in &[3u64, 5, 7] {
            let p = Prime::new(pv).unwrap();
            for _ in 0..340 {
                let deg = rng.random_range(1..=6);
                let mut coeffs: Vec<u64> =
                    (0..deg).map(|_| rng.random_range(0..pv)).collect();
                coeffs.push(1);
                let f = Poly::new(p, coeffs);
                let factors = poly_factor(&f).unwrap();
                let mut prod = Poly::one(p);
                for (q, m) in &factors {
                    assert!(q.is_monic());
                    prod = prod.mul(&q.pow(*m));
                }
                assert_eq!(prod, f);
                // factors pairwise distinct
                for i in 0..factors.len() {
                    for j in i + 1..factors.len() {
                        assert_ne!(factors[i].0, factors[j].0);
                    }
                }
            }
        }
    }
}
