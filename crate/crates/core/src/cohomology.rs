//! Normalized 2-cocycles on an elementary abelian p-group with values in
//! F_p^n, the correspondence with skew-symmetric forms, and coboundaries.
//!
//! Cocycles are dense tables over the p^m group elements, guarded to desk
//! scale; the symbolic bilinear formula behind `cocycle_from_form` is also
//! exposed directly for the group model, which must work past the table
//! guard.

use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::linalg::{Matrix, SkewTuple};

/// Hard guard for dense tables: p^(2m) may not exceed 3^8.
pub const TABLE_GUARD: u128 = 6561;

/// An element of the elementary top: m coordinates in F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopVector {
    p: Prime,
    coords: Vec<u64>,
}

impl TopVector {
    pub fn new(p: Prime, coords: Vec<u64>) -> Self {
        TopVector {
            p,
            coords: coords.into_iter().map(|c| p.reduce(c)).collect(),
        }
    }

    pub fn zero(p: Prime, m: usize) -> Self {
        TopVector {
            p,
            coords: vec![0; m],
        }
    }

    pub fn basis(p: Prime, m: usize, i: usize) -> Self {
        let mut v = Self::zero(p, m);
        v.coords[i] = 1;
        v
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn add(&self, rhs: &TopVector) -> TopVector {
        TopVector {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(&a, &b)| self.p.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> TopVector {
        TopVector {
            p: self.p,
            coords: self.coords.iter().map(|&a| self.p.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> TopVector {
        TopVector {
            p: self.p,
            coords: self.coords.iter().map(|&a| self.p.mul(a, c)).collect(),
        }
    }

    /// Mixed-radix index, base p, little-endian: coordinate 0 is the least
    /// significant digit.
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for &c in self.coords.iter().rev() {
            idx = idx * self.p.get() as usize + c as usize;
        }
        idx
    }

    pub fn from_index(p: Prime, m: usize, mut idx: usize) -> Self {
        let mut coords = Vec::with_capacity(m);
        for _ in 0..m {
            coords.push((idx % p.get() as usize) as u64);
            idx /= p.get() as usize;
        }
        TopVector { p, coords }
    }
}

/// A tuple of skew matrices read as a bilinear skew map t(x, y) in F_p^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm(pub SkewTuple);

impl SkewForm {
    pub fn modulus(&self) -> Prime {
        self.0.modulus()
    }

    pub fn top_rank(&self) -> usize {
        self.0.size()
    }

    pub fn bottom_rank(&self) -> usize {
        self.0.len()
    }

    /// t(x, y) = (x^T A_1 y, ..., x^T A_n y).
    pub fn value(&self, x: &TopVector, y: &TopVector) -> Vec<u64> {
        let p = self.modulus();
        self.0
            .mats()
            .iter()
            .map(|a| {
                let mut acc = 0u64;
                for (i, &xi) in x.coords().iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.coords().iter().enumerate() {
                        acc = p.add(acc, p.mul(p.mul(xi, yj), a.get(i, j)));
                    }
                }
                acc
            })
            .collect()
    }

    /// The standard cocycle value mu(x, y) = sum_{i<j} x_i y_j t_ij, without
    /// building a table.
    pub fn mu(&self, x: &TopVector, y: &TopVector) -> Vec<u64> {
        let p = self.modulus();
        self.0
            .mats()
            .iter()
            .map(|a| {
                let mut acc = 0u64;
                for i in 0..self.top_rank() {
                    let xi = x.coords()[i];
                    if xi == 0 {
                        continue;
                    }
                    for j in i + 1..self.top_rank() {
                        let yj = y.coords()[j];
                        if yj != 0 {
                            acc = p.add(acc, p.mul(p.mul(xi, yj), a.get(i, j)));
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// Dense table of a map H_m x H_m -> F_p^n, indexed by the mixed-radix
/// encodings of the two arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    p: Prime,
    m: usize,
    n: usize,
    /// Flattened: entry (x, y) occupies n consecutive values at
    /// (x * p^m + y) * n.
    table: Vec<u64>,
}

impl Cocycle {
    pub fn from_table(p: Prime, m: usize, n: usize, table: Vec<u64>) -> Result<Self> {
        let size = table_size(p, m)?;
        if table.len() != size * size * n {
            return Err(Error::Validation("cocycle table has wrong length".into()));
        }
        Ok(Cocycle {
            p,
            m,
            n,
            table: table.into_iter().map(|v| p.reduce(v)).collect(),
        })
    }

    pub fn zero(p: Prime, m: usize, n: usize) -> Result<Self> {
        let size = table_size(p, m)?;
        Ok(Cocycle {
            p,
            m,
            n,
            table: vec![0; size * size * n],
        })
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn top_rank(&self) -> usize {
        self.m
    }

    pub fn bottom_rank(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> usize {
        (self.p.get() as usize).pow(self.m as u32)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &[u64] {
        let s = self.elements();
        &self.table[(x * s + y) * self.n..(x * s + y) * self.n + self.n]
    }

    pub fn set(&mut self, x: usize, y: usize, value: &[u64]) {
        let s = self.elements();
        let off = (x * s + y) * self.n;
        for (k, &v) in value.iter().enumerate() {
            self.table[off + k] = self.p.reduce(v);
        }
    }

    pub fn value(&self, x: &TopVector, y: &TopVector) -> &[u64] {
        self.get(x.index(), y.index())
    }

    /// mu(0, x) = mu(x, 0) = 0 for all x.
    pub fn is_normalized(&self) -> bool {
        let s = self.elements();
        (0..s).all(|x| {
            self.get(0, x).iter().all(|&v| v == 0) && self.get(x, 0).iter().all(|&v| v == 0)
        })
    }

    /// The cocycle identity over every triple; `violating_triple` reports
    /// the first failure as witness indices.
    pub fn is_cocycle(&self) -> bool {
        self.violating_triple().is_none()
    }

    pub fn violating_triple(&self) -> Option<(usize, usize, usize)> {
        let p = self.p;
        let s = self.elements();
        // Cache the index-level addition table once.
        let mut sum = vec![0usize; s * s];
        for x in 0..s {
            let xv = TopVector::from_index(p, self.m, x);
            for y in 0..s {
                sum[x * s + y] = xv.add(&TopVector::from_index(p, self.m, y)).index();
            }
        }
        for x in 0..s {
            for y in 0..s {
                for z in 0..s {
                    let lhs1 = self.get(y, z);
                    let lhs2 = self.get(x, sum[y * s + z]);
                    let rhs1 = self.get(sum[x * s + y], z);
                    let rhs2 = self.get(x, y);
                    for k in 0..self.n {
                        if p.add(lhs1[k], lhs2[k]) != p.add(rhs1[k], rhs2[k]) {
                            return Some((x, y, z));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        let s = self.elements();
        (0..s).all(|x| (x..s).all(|y| self.get(x, y) == self.get(y, x)))
    }
}

fn table_size(p: Prime, m: usize) -> Result<usize> {
    let needed = (p.get() as u128).pow(2 * m as u32);
    if needed > TABLE_GUARD {
        return Err(Error::ResourceGuard {
            needed,
            limit: TABLE_GUARD,
        });
    }
    Ok((p.get() as usize).pow(m as u32))
}

/// The normalized cocycle mu(x, y) = sum_{i<j} x_i y_j t_ij attached to a
/// skew form, as a dense table.
pub fn cocycle_from_form(t: &SkewForm) -> Result<Cocycle> {
    let p = t.modulus();
    let m = t.top_rank();
    let n = t.bottom_rank();
    let mut mu = Cocycle::zero(p, m, n)?;
    let s = mu.elements();
    for x in 0..s {
        let xv = TopVector::from_index(p, m, x);
        for y in 0..s {
            let yv = TopVector::from_index(p, m, y);
            let value = t.mu(&xv, &yv);
            mu.set(x, y, &value);
        }
    }
    Ok(mu)
}

/// The skew form t(x, y) = mu(x, y) - mu(y, x), read off the generator
/// pairs. Rejects tables that fail the cocycle identity.
pub fn tau(mu: &Cocycle) -> Result<SkewForm> {
    if let Some((x, y, z)) = mu.violating_triple() {
        return Err(Error::Validation(format!(
            "not a cocycle: identity fails at indices ({x}, {y}, {z})"
        )));
    }
    let p = mu.modulus();
    let m = mu.top_rank();
    let n = mu.bottom_rank();
    let mut mats = vec![Matrix::zeros(p, m, m); n];
    for i in 0..m {
        for j in i + 1..m {
            let hi = TopVector::basis(p, m, i).index();
            let hj = TopVector::basis(p, m, j).index();
            let forward = mu.get(hi, hj).to_vec();
            let backward = mu.get(hj, hi).to_vec();
            for (k, mat) in mats.iter_mut().enumerate() {
                let v = p.sub(forward[k], backward[k]);
                mat.set(i, j, v);
                mat.set(j, i, p.neg(v));
            }
        }
    }
    Ok(SkewForm(SkewTuple::new(p, m, mats)?))
}

/// The coboundary of a normalized function gamma: H_m -> F_p^n given as a
/// dense table over element indices: (d gamma)(x, y) = g(x) + g(y) - g(x+y).
pub fn coboundary(p: Prime, m: usize, n: usize, gamma: &[Vec<u64>]) -> Result<Cocycle> {
    let size = table_size(p, m)?;
    if gamma.len() != size {
        return Err(Error::Validation("gamma table has wrong length".into()));
    }
    if gamma[0].iter().any(|&v| p.reduce(v) != 0) {
        return Err(Error::Validation("gamma must vanish at zero".into()));
    }
    let mut out = Cocycle::zero(p, m, n)?;
    for x in 0..size {
        let xv = TopVector::from_index(p, m, x);
        for y in 0..size {
            let yv = TopVector::from_index(p, m, y);
            let s = xv.add(&yv).index();
            let value: Vec<u64> = (0..n)
                .map(|k| p.sub(p.add(gamma[x][k], gamma[y][k]), gamma[s][k]))
                .collect();
            out.set(x, y, &value);
        }
    }
    Ok(out)
}

/// Solve d gamma = mu by linear algebra; `None` when mu is not a
/// coboundary. The unknowns are gamma(x) for x != 0.
pub fn solve_coboundary(mu: &Cocycle) -> Option<Vec<Vec<u64>>> {
    let p = mu.modulus();
    let m = mu.top_rank();
    let n = mu.bottom_rank();
    let s = mu.elements();
    let unknowns = s - 1; // gamma(0) = 0
    let mut sys = Matrix::zeros(p, s * s, unknowns);
    let mut rhs = Matrix::zeros(p, s * s, n);
    for x in 0..s {
        let xv = TopVector::from_index(p, m, x);
        for y in 0..s {
            let yv = TopVector::from_index(p, m, y);
            let sum = xv.add(&yv).index();
            let row = x * s + y;
            for (idx, sign_pos) in [(x, true), (y, true), (sum, false)] {
                if idx == 0 {
                    continue;
                }
                let col = idx - 1;
                let cur = sys.get(row, col);
                let v = if sign_pos { p.add(cur, 1) } else { p.sub(cur, 1) };
                sys.set(row, col, v);
            }
            let val = mu.get(x, y).to_vec();
            for k in 0..n {
                rhs.set(row, k, val[k]);
            }
        }
    }
    let sol = sys.solve(&rhs)?;
    let mut gamma = vec![vec![0u64; n]; s];
    for x in 1..s {
        for k in 0..n {
            gamma[x][k] = sol.get(x - 1, k);
        }
    }
    Some(gamma)
}

/// Solve d gamma = mu with gamma allowed to take values a / p^2; returns
/// the numerators modulo p^2 (gamma(x) is numerator(x) / p^2). Every
/// symmetric normalized cocycle valued in the p-torsion is such a
/// coboundary even when no p-torsion-valued gamma exists, because the
/// commutative extension it classifies has exponent dividing p^2.
///
/// The mod-p^2 system is solved by a digit lift: a particular solution
/// and kernel of the mod-p system, then one joint mod-p solve for the
/// second digit together with the kernel coefficients.
pub fn solve_coboundary_mod_p2(mu: &Cocycle) -> Option<Vec<Vec<u64>>> {
    let p = mu.modulus();
    let pv = p.get();
    let p2 = pv * pv;
    let m = mu.top_rank();
    let n = mu.bottom_rank();
    let s = mu.elements();
    let unknowns = s - 1;

    // The coefficient matrix of the boundary operator (entries are small
    // integers reduced mod p; the same integer matrix is reused mod p^2).
    let mut coeff = vec![vec![0i64; unknowns]; s * s];
    let mut rhs_int = vec![vec![0u64; n]; s * s];
    for x in 0..s {
        let xv = TopVector::from_index(p, m, x);
        for y in 0..s {
            let yv = TopVector::from_index(p, m, y);
            let sum = xv.add(&yv).index();
            let row = x * s + y;
            for (idx, sign) in [(x, 1i64), (y, 1), (sum, -1)] {
                if idx != 0 {
                    coeff[row][idx - 1] += sign;
                }
            }
            let val = mu.get(x, y);
            for k in 0..n {
                // target in Z/p^2: p * mu since mu-values are a/p and
                // gamma-values are a/p^2
                rhs_int[row][k] = pv * val[k];
            }
        }
    }
    let red = |v: i64, modulus: u64| -> u64 { v.rem_euclid(modulus as i64) as u64 };

    // Stage 1: mod p.
    let mut sys_p = Matrix::zeros(p, s * s, unknowns);
    let mut rhs_p = Matrix::zeros(p, s * s, n);
    for row in 0..s * s {
        for col in 0..unknowns {
            sys_p.set(row, col, red(coeff[row][col], pv));
        }
        for k in 0..n {
            rhs_p.set(row, k, rhs_int[row][k] % pv);
        }
    }
    let x0 = sys_p.solve(&rhs_p)?;
    let kernel = sys_p.kernel();
    let kdim = kernel.cols();

    // Stage 2: joint mod-p system for the second digit x1 and the kernel
    // coefficients t: A x1 + (A K / p) t = (b - A x0) / p.
    let mut sys2 = Matrix::zeros(p, s * s * n, (unknowns + kdim) * n);
    let mut rhs2 = Matrix::zeros(p, s * s * n, 1);
    for row in 0..s * s {
        for k in 0..n {
            let r2 = row * n + k;
            // residual (b - A x0) / p over the integers mod p^2
            let mut ax0 = 0u64;
            for col in 0..unknowns {
                ax0 = (ax0 + red(coeff[row][col], p2) * x0.get(col, k)) % p2;
            }
            let resid = (rhs_int[row][k] % p2 + p2 - ax0) % p2;
            debug_assert_eq!(resid % pv, 0);
            rhs2.set(r2, 0, (resid / pv) % pv);
            for col in 0..unknowns {
                sys2.set(r2, k * unknowns + col, red(coeff[row][col], pv));
            }
            for t in 0..kdim {
                let mut akt = 0u64;
                for col in 0..unknowns {
                    akt = (akt + red(coeff[row][col], p2) * kernel.get(col, t)) % p2;
                }
                debug_assert_eq!(akt % pv, 0);
                sys2.set(r2, n * unknowns + k * kdim + t, (akt / pv) % pv);
            }
        }
    }
    let sol2 = sys2.solve(&rhs2)?;

    // Assemble gamma numerators mod p^2: x0 + K t + p x1.
    let mut gamma = vec![vec![0u64; n]; s];
    for x in 1..s {
        for k in 0..n {
            let mut c = x0.get(x - 1, k);
            for t in 0..kdim {
                c = (c + kernel.get(x - 1, t) * sol2.get(n * unknowns + k * kdim + t, 0)) % p2;
            }
            c = (c + pv * sol2.get(k * unknowns + (x - 1), 0)) % p2;
            gamma[x][k] = c;
        }
    }
    // Verify before returning.
    for x in 0..s {
        let xv = TopVector::from_index(p, m, x);
        for y in 0..s {
            let yv = TopVector::from_index(p, m, y);
            let sum = xv.add(&yv).index();
            let val = mu.get(x, y);
            for k in 0..n {
                let lhs = (gamma[x][k] + gamma[y][k] + p2 - gamma[sum][k]) % p2;
                if lhs != (pv * val[k]) % p2 {
                    return None;
                }
            }
        }
    }
    Some(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn random_form(rng: &mut ChaCha8Rng, p: Prime, m: usize, n: usize) -> SkewForm {
        let mats = (0..n)
            .map(|_| {
                let mut a = Matrix::zeros(p, m, m);
                for i in 0..m {
                    for j in i + 1..m {
                        let v = rng.random_range(0..p.get());
                        a.set(i, j, v);
                        a.set(j, i, p.neg(v));
                    }
                }
                a
            })
            .collect();
        SkewForm(SkewTuple::new(p, m, mats).unwrap())
    }

    #[test]
    fn zero_form_gives_zero_cocycle() {
        let p = p3();
        let t = SkewForm(SkewTuple::zero(p, 2, 1));
        let mu = cocycle_from_form(&t).unwrap();
        assert!(mu.is_normalized());
        assert!(mu.is_cocycle());
        assert!(mu.table.iter().all(|&v| v == 0));
    }

    #[test]
    fn single_entry_form_two_generators() {
        // m = 2, t_12 = a_1: mu(h1, h2) = a_1 while mu(h2, h1) = 0.
        let p = p3();
        let j = Matrix::from_rows(p, vec![vec![0, 1], vec![2, 0]]).unwrap();
        let t = SkewForm(SkewTuple::new(p, 2, vec![j]).unwrap());
        let mu = cocycle_from_form(&t).unwrap();
        let h1 = TopVector::basis(p, 2, 0);
        let h2 = TopVector::basis(p, 2, 1);
        assert_eq!(mu.value(&h1, &h2), &[1]);
        assert_eq!(mu.value(&h2, &h1), &[0]);
    }

    #[test]
    fn cocycle_identity_randomized_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let p = p3();
        for m in 1..=3 {
            for n in 1..=2 {
                let t = random_form(&mut rng, p, m, n);
                let mu = cocycle_from_form(&t).unwrap();
                assert!(mu.is_normalized());
                assert!(mu.is_cocycle());
            }
        }
    }

    #[test]
    fn tau_roundtrip_small() {
        let p = p3();
        // every skew form with m = 2, n = 1 (single off-diagonal entry)
        for v in 0..3u64 {
            let mut a = Matrix::zeros(p, 2, 2);
            a.set(0, 1, v);
            a.set(1, 0, p.neg(v));
            let t = SkewForm(SkewTuple::new(p, 2, vec![a]).unwrap());
            let mu = cocycle_from_form(&t).unwrap();
            assert_eq!(tau(&mu).unwrap(), t);
        }
    }

    #[test]
    fn tau_of_coboundary_is_zero() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for m in 1..=2usize {
            let s = 3usize.pow(m as u32);
            for _ in 0..50 {
                let mut gamma = vec![vec![0u64; 1]; s];
                for g in gamma.iter_mut().skip(1) {
                    g[0] = rng.random_range(0..3);
                }
                let mu = coboundary(p, m, 1, &gamma).unwrap();
                assert!(mu.is_symmetric());
                assert!(mu.is_cocycle());
                let t = tau(&mu).unwrap();
                assert!(t.0.mats().iter().all(|a| a.is_zero()));
            }
        }
    }

    #[test]
    fn tau_rejects_non_cocycle() {
        let p = p3();
        let t = SkewForm(SkewTuple::zero(p, 2, 1));
        let mut mu = cocycle_from_form(&t).unwrap();
        // flip one interior entry
        mu.set(4, 5, &[1]);
        assert!(!mu.is_cocycle());
        assert!(mu.violating_triple().is_some());
        assert!(tau(&mu).is_err());
    }

    #[test]
    fn coboundary_solver_roundtrip() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..30 {
            let s = 9usize;
            let mut gamma = vec![vec![0u64; 2]; s];
            for g in gamma.iter_mut().skip(1) {
                g[0] = rng.random_range(0..3);
                g[1] = rng.random_range(0..3);
            }
            let mu = coboundary(p, 2, 2, &gamma).unwrap();
            let solved = solve_coboundary(&mu).expect("coboundary solvable");
            let rebuilt = coboundary(p, 2, 2, &solved).unwrap();
            assert_eq!(rebuilt, mu);
        }
    }

    #[test]
    fn carry_cocycle_needs_the_lift() {
        // The carry cocycle of the cyclic extension of order p^2: symmetric,
        // normalized, not a coboundary of any p-torsion gamma, but solvable
        // with denominators p^2.
        let p = p3();
        let mut mu = Cocycle::zero(p, 1, 1).unwrap();
        for x in 0..3usize {
            for y in 0..3usize {
                mu.set(x, y, &[u64::from(x + y >= 3)]);
            }
        }
        assert!(mu.is_cocycle() && mu.is_symmetric() && mu.is_normalized());
        assert!(solve_coboundary(&mu).is_none());
        let gamma = solve_coboundary_mod_p2(&mu).expect("mod p^2 solvable");
        // gamma(x) = x / 9 works: numerators 0, 1, 2 up to a linear shift
        assert_eq!(gamma[0], vec![0]);
    }

    #[test]
    fn table_guard_enforced() {
        let p = Prime::new(5).unwrap();
        assert!(matches!(
            Cocycle::zero(p, 3, 1),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn index_roundtrip() {
        let p = p3();
        for idx in 0..27 {
            let v = TopVector::from_index(p, 3, idx);
            assert_eq!(v.index(), idx);
        }
        // little-endian: coordinate 0 is the least significant digit
        let v = TopVector::new(p, vec![1, 2, 0]);
        assert_eq!(v.index(), 1 + 2 * 3);
    }
}
