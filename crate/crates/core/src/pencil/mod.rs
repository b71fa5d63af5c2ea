//! Representations of the Kronecker quiver with the duality that encodes
//! skew-symmetric form pairs: duals, the self-dual doubling, the canonical
//! indecomposables, and their invariants.
//!
//! Tuples of length three or more are deliberately not canonicalized here:
//! that classification contains the conjugacy problem for pairs of square
//! matrices, so no normal form is attempted.

mod kronecker;
mod transform;

pub use kronecker::{canonical_pair, kronecker_invariants, skew_pair_invariants, KroneckerData};
pub use transform::congruence_transform;

use crate::error::{Error, Result};
use crate::gf::{HomPoly, Poly, Prime};
use crate::linalg::{frobenius_matrix, poly_det, Matrix, SkewTuple};
use crate::weakcong::ProjPoint;

/// One canonical block: the singular block of exponent d when the point is
/// `Eps`, otherwise the point block R(g, d). The serialized kinds are
/// "eps" and "point".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSpec {
    pub point: ProjPoint,
    pub d: usize,
}

impl BlockSpec {
    pub fn new(point: ProjPoint, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("block exponent must be >= 1".into()));
        }
        Ok(BlockSpec { point, d })
    }

    pub fn eps(d: usize) -> Result<Self> {
        BlockSpec::new(ProjPoint::Eps, d)
    }

    /// Matrix size of the doubled block: 2d - 1 for eps, 2 d deg(g) for a
    /// point block.
    pub fn size(&self) -> usize {
        match &self.point {
            ProjPoint::Eps => 2 * self.d - 1,
            ProjPoint::Point(g) => 2 * self.d * g.degree(),
        }
    }
}

/// A representation of the n-arrow Kronecker quiver: n matrices of size
/// d2 x d1 describing linear maps from a d1- to a d2-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    p: Prime,
    d1: usize,
    d2: usize,
    maps: Vec<Matrix>,
}

impl QuiverRep {
    pub fn new(p: Prime, d1: usize, d2: usize, maps: Vec<Matrix>) -> Result<Self> {
        for m in &maps {
            p.same_as(m.modulus())?;
            if m.rows() != d2 || m.cols() != d1 {
                return Err(Error::Dimension(format!(
                    "map is {}x{}, expected {d2}x{d1}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(QuiverRep { p, d1, d2, maps })
    }

    pub fn zero(p: Prime, d1: usize, d2: usize, n: usize) -> Self {
        QuiverRep {
            p,
            d1,
            d2,
            maps: (0..n).map(|_| Matrix::zeros(p, d2, d1)).collect(),
        }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn arrows(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &Matrix {
        &self.maps[i]
    }

    pub fn direct_sum(&self, rhs: &QuiverRep) -> Result<QuiverRep> {
        self.p.same_as(rhs.p)?;
        if self.arrows() != rhs.arrows() {
            return Err(Error::Dimension("arrow counts differ".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&rhs.maps)
            .map(|(a, b)| {
                let z12 = Matrix::zeros(self.p, a.rows(), b.cols());
                let z21 = Matrix::zeros(self.p, b.rows(), a.cols());
                Matrix::from_blocks(self.p, &[vec![a, &z12], vec![&z21, b]])
            })
            .collect::<Result<Vec<_>>>()?;
        QuiverRep::new(self.p, self.d1 + rhs.d1, self.d2 + rhs.d2, maps)
    }
}

/// The dual representation: vertices swap and each map becomes its negated
/// transpose. An involution.
pub fn dual(r: &QuiverRep) -> QuiverRep {
    QuiverRep {
        p: r.p,
        d1: r.d2,
        d2: r.d1,
        maps: r.maps.iter().map(|m| m.transpose().neg()).collect(),
    }
}

/// The self-dual doubling: each map B becomes the skew-symmetric matrix
/// [[0, B], [-B^T, 0]] of size d2 + d1. Odd characteristic only.
pub fn double(r: &QuiverRep) -> Result<SkewTuple> {
    r.p.require_odd()?;
    let s = r.d1 + r.d2;
    let mats = r
        .maps
        .iter()
        .map(|b| {
            let mut m = Matrix::zeros(r.p, s, s);
            for i in 0..r.d2 {
                for j in 0..r.d1 {
                    m.set(i, r.d2 + j, b.get(i, j));
                    m.set(r.d2 + j, i, r.p.neg(b.get(i, j)));
                }
            }
            m
        })
        .collect();
    SkewTuple::new(r.p, s, mats)
}

/// The canonical indecomposable pencil for a block spec:
/// - eps(d): maps of size (d-1) x d with identity stripes,
/// - point x2, d: (F(x^d), I_d),
/// - finite point g, d: (I, F(g(x,1)^d)).
pub fn indecomposable(p: Prime, spec: &BlockSpec) -> Result<QuiverRep> {
    match &spec.point {
        ProjPoint::Eps => {
            let d = spec.d;
            let a1 = Matrix::from_fn(p, d - 1, d, |i, j| u64::from(j == i));
            let a2 = Matrix::from_fn(p, d - 1, d, |i, j| u64::from(j == i + 1));
            QuiverRep::new(p, d, d - 1, vec![a1, a2])
        }
        ProjPoint::Point(g) => {
            p.same_as(g.modulus())?;
            if *g == HomPoly::x2(p) {
                let f = Poly::monomial(p, spec.d);
                let a1 = frobenius_matrix(&f)?;
                let a2 = Matrix::identity(p, spec.d);
                QuiverRep::new(p, spec.d, spec.d, vec![a1, a2])
            } else {
                let f = g.dehomogenize().pow(spec.d);
                let size = f.degree().unwrap();
                let a1 = Matrix::identity(p, size);
                let a2 = frobenius_matrix(&f)?;
                QuiverRep::new(p, size, size, vec![a1, a2])
            }
        }
    }
}

/// The transposed singular block (the dual of eps(d) up to isomorphism):
/// maps of size d x (d-1).
pub fn plus_rep(p: Prime, d: usize) -> QuiverRep {
    let a1 = Matrix::from_fn(p, d, d - 1, |i, j| u64::from(i == j));
    let a2 = Matrix::from_fn(p, d, d - 1, |i, j| u64::from(i == j + 1));
    QuiverRep::new(p, d - 1, d, vec![a1, a2]).expect("stripe dimensions")
}

/// The representation whose doubling is the canonical block for `spec`:
/// the transposed stripe for eps blocks so the doubled matrices carry the
/// relation pattern the presentations use, the plain indecomposable for
/// point blocks.
pub fn canonical_rep(p: Prime, spec: &BlockSpec) -> Result<QuiverRep> {
    match &spec.point {
        ProjPoint::Eps => Ok(plus_rep(p, spec.d)),
        _ => indecomposable(p, spec),
    }
}

/// The canonical doubled block for `spec`.
pub fn canonical_block(p: Prime, spec: &BlockSpec) -> Result<SkewTuple> {
    double(&canonical_rep(p, spec)?)
}

/// Homogeneous characteristic polynomial det(x1 R1 - x2 R2) of a square
/// pencil, normalized unital; the zero polynomial (flagged by `is_zero`)
/// for singular square pencils.
pub fn hom_char_poly(r: &QuiverRep) -> Result<HomPoly> {
    if r.arrows() != 2 {
        return Err(Error::Dimension("characteristic polynomial needs a pencil".into()));
    }
    if r.d1 != r.d2 {
        return Err(Error::Dimension("non-square pencil".into()));
    }
    let p = r.p;
    let d = r.d1;
    let grid: Vec<Vec<Poly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    // substitute x2 = 1: x * R1[i,j] - R2[i,j]
                    Poly::new(p, vec![p.neg(r.maps[1].get(i, j)), r.maps[0].get(i, j)])
                })
                .collect()
        })
        .collect();
    let u = poly_det(p, grid);
    if u.is_zero() {
        return Ok(HomPoly::zero(p, d));
    }
    Ok(HomPoly::homogenize(&u.monic(), d)?)
}

/// Basis of the space of morphisms (f1, f2) from `r` to `s`: all pairs with
/// f2 r(a_i) = s(a_i) f1 for every arrow.
pub fn morphism_space(r: &QuiverRep, s: &QuiverRep) -> Result<Vec<(Matrix, Matrix)>> {
    r.p.same_as(s.p)?;
    if r.arrows() != s.arrows() {
        return Err(Error::Dimension("arrow counts differ".into()));
    }
    let p = r.p;
    let v1 = s.d1 * r.d1; // f1 is s.d1 x r.d1
    let v2 = s.d2 * r.d2; // f2 is s.d2 x r.d2
    let unknowns = v1 + v2;
    let eqs = r.arrows() * s.d2 * r.d1;
    let mut sys = Matrix::zeros(p, eqs, unknowns);
    let mut row = 0usize;
    for t in 0..r.arrows() {
        for a in 0..s.d2 {
            for b in 0..r.d1 {
                // (f2 R_t - S_t f1)[a][b] = 0
                for c in 0..r.d2 {
                    sys.set(row, v1 + a * r.d2 + c, r.maps[t].get(c, b));
                }
                for c in 0..s.d1 {
                    let cur = sys.get(row, c * r.d1 + b);
                    sys.set(row, c * r.d1 + b, p.sub(cur, s.maps[t].get(a, c)));
                }
                row += 1;
            }
        }
    }
    let kernel = sys.kernel();
    let mut basis = Vec::with_capacity(kernel.cols());
    for k in 0..kernel.cols() {
        let f1 = Matrix::from_fn(p, s.d1, r.d1, |i, j| kernel.get(i * r.d1 + j, k));
        let f2 = Matrix::from_fn(p, s.d2, r.d2, |i, j| kernel.get(v1 + i * r.d2 + j, k));
        basis.push((f1, f2));
    }
    Ok(basis)
}

/// Basis of the endomorphism algebra of `r`.
pub fn endomorphism_space(r: &QuiverRep) -> Result<Vec<(Matrix, Matrix)>> {
    morphism_space(r, r)
}

/// Search the morphism space for an isomorphism by sweeping deterministic
/// combinations of basis elements; `None` when the sweep finds none.
pub fn find_isomorphism(r: &QuiverRep, s: &QuiverRep) -> Result<Option<(Matrix, Matrix)>> {
    if r.d1 != s.d1 || r.d2 != s.d2 {
        return Ok(None);
    }
    let basis = morphism_space(r, s)?;
    for combo in combination_sweep(r.p, basis.len(), 2000) {
        let mut f1 = Matrix::zeros(r.p, s.d1, r.d1);
        let mut f2 = Matrix::zeros(r.p, s.d2, r.d2);
        for (i, &c) in combo.iter().enumerate() {
            if c != 0 {
                f1 = f1.add(&basis[i].0.scale(c))?;
                f2 = f2.add(&basis[i].1.scale(c))?;
            }
        }
        if f1.inverse().is_ok() && f2.inverse().is_ok() {
            return Ok(Some((f1, f2)));
        }
    }
    Ok(None)
}

/// Deterministic sweep over coefficient vectors: single basis elements,
/// then pairs, then a seeded pseudo-random tail. Used wherever an element
/// of a solution space with an open condition is needed.
pub(crate) fn combination_sweep(p: Prime, len: usize, cap: usize) -> Vec<Vec<u64>> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    for i in 0..len {
        for c in 1..p.get() {
            let mut v = vec![0u64; len];
            v[i] = c;
            out.push(v);
            if out.len() >= cap {
                return out;
            }
        }
    }
    for i in 0..len {
        for j in i + 1..len {
            for ci in 1..p.get() {
                for cj in 1..p.get() {
                    let mut v = vec![0u64; len];
                    v[i] = ci;
                    v[j] = cj;
                    out.push(v);
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x70656e63);
    while out.len() < cap {
        out.push((0..len).map(|_| rng.random_range(0..p.get())).collect());
    }
    out
}
