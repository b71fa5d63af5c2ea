//! Transformation-free Kronecker invariants of pencils.
//!
//! Minimal indices come from kernel-dimension sequences of the striped
//! matrices built from the pencil; elementary divisors come from gcds of
//! all j x j minors of the pencil, tracked as a univariate part plus an
//! x2-valuation. Both are deterministic and never construct a base change.

use super::{canonical_block, BlockSpec, QuiverRep};
use crate::error::{Error, Result};
use crate::gf::{poly_factor, HomPoly, Poly, Prime};
use crate::linalg::{block_diag, poly_det, poly_rank, Matrix, SkewTuple};
use crate::weakcong::{ClassFunction, ProjPoint};
use std::collections::BTreeMap;

/// Complete strict-equivalence invariants of a pencil: column and row
/// minimal indices (with repetition, sorted) and elementary divisors, each
/// a power of a unital irreducible homogeneous polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerData {
    pub col_min_indices: Vec<usize>,
    pub row_min_indices: Vec<usize>,
    pub elem_divisors: Vec<(HomPoly, usize)>,
}

impl KroneckerData {
    /// Total size accounted for by the invariants, as (rows, cols):
    /// a column index e contributes an (e) x (e+1) block, a row index the
    /// transpose, a divisor g^k a square block of size k deg(g).
    pub fn block_sizes(&self) -> (usize, usize) {
        let mut rows = 0;
        let mut cols = 0;
        for &e in &self.col_min_indices {
            rows += e;
            cols += e + 1;
        }
        for &e in &self.row_min_indices {
            rows += e + 1;
            cols += e;
        }
        for (g, k) in &self.elem_divisors {
            let s = g.degree() * k;
            rows += s;
            cols += s;
        }
        (rows, cols)
    }
}

/// The univariate dehomogenization x R1 - R2 of the pencil x1 R1 - x2 R2,
/// as a grid of linear polynomials.
pub(crate) fn pencil_grid(r: &QuiverRep) -> Vec<Vec<Poly>> {
    let p = r.modulus();
    (0..r.d2())
        .map(|i| {
            (0..r.d1())
                .map(|j| {
                    Poly::new(
                        p,
                        vec![p.neg(r.map(1).get(i, j)), r.map(0).get(i, j)],
                    )
                })
                .collect()
        })
        .collect()
}

/// Striped matrix whose kernel collects homogeneous degree-eps polynomial
/// solutions v of (x1 R1 - x2 R2) v = 0: block row 0 is R2, block row j
/// couples R1 at column j-1 with -R2 at column j, block row eps+1 is R1.
pub(crate) fn striped(r: &QuiverRep, eps: usize) -> Matrix {
    let p = r.modulus();
    let (d1, d2) = (r.d1(), r.d2());
    let mut m = Matrix::zeros(p, (eps + 2) * d2, (eps + 1) * d1);
    for i in 0..d2 {
        for j in 0..d1 {
            let a1 = r.map(0).get(i, j);
            let a2 = r.map(1).get(i, j);
            m.set(i, j, a2);
            for blk in 1..=eps {
                m.set(blk * d2 + i, (blk - 1) * d1 + j, a1);
                m.set(blk * d2 + i, blk * d1 + j, p.neg(a2));
            }
            m.set((eps + 1) * d2 + i, eps * d1 + j, a1);
        }
    }
    m
}

/// Multiset of column minimal indices, sorted. The count of indices <= eps
/// is the first difference of the striped-kernel dimension sequence.
fn column_minimal_indices(r: &QuiverRep, normal_rank: usize) -> Vec<usize> {
    let expected = r.d1() - normal_rank;
    let mut out = Vec::with_capacity(expected);
    if expected == 0 {
        return out;
    }
    let mut prev_kernel = 0usize;
    let mut prev_count = 0usize;
    let mut eps = 0usize;
    loop {
        let k = striped(r, eps);
        let kernel = (eps + 1) * r.d1() - k.rank();
        let count = kernel - prev_kernel; // number of indices <= eps
        for _ in 0..count.saturating_sub(prev_count) {
            out.push(eps);
        }
        if out.len() == expected {
            return out;
        }
        assert!(
            eps <= r.d1() + r.d2(),
            "minimal index search exceeded pencil size"
        );
        prev_kernel = kernel;
        prev_count = count;
        eps += 1;
    }
}

fn transpose_rep(r: &QuiverRep) -> QuiverRep {
    QuiverRep::new(
        r.modulus(),
        r.d2(),
        r.d1(),
        r.maps().iter().map(|m| m.transpose()).collect(),
    )
    .expect("transposed dimensions")
}

/// Determinantal divisor of level j: monic gcd of the dehomogenized j x j
/// minors together with the minimal x2-valuation j - deg(minor).
fn determinantal_divisor(
    p: Prime,
    grid: &[Vec<Poly>],
    rows: usize,
    cols: usize,
    j: usize,
) -> (Poly, usize) {
    let mut gcd = Poly::zero(p);
    let mut val = usize::MAX;
    let row_sets = combinations(rows, j);
    let col_sets = combinations(cols, j);
    for rs in &row_sets {
        for cs in &col_sets {
            let sub: Vec<Vec<Poly>> = rs
                .iter()
                .map(|&ri| cs.iter().map(|&ci| grid[ri][ci].clone()).collect())
                .collect();
            let minor = poly_det(p, sub);
            if minor.is_zero() {
                continue;
            }
            val = val.min(j - minor.degree().unwrap());
            gcd = gcd.gcd(&minor);
            if gcd.degree() == Some(0) && val == 0 {
                return (Poly::one(p), 0);
            }
        }
    }
    (gcd, val)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// The complete Kronecker data of a pencil: the standard blocks indexed by
/// these invariants direct-sum to a representation isomorphic to the input.
pub fn kronecker_invariants(r: &QuiverRep) -> Result<KroneckerData> {
    if r.arrows() != 2 {
        return Err(Error::Dimension("Kronecker invariants need a pencil".into()));
    }
    let p = r.modulus();
    let grid = pencil_grid(r);
    let normal_rank = poly_rank(p, grid.clone());
    let col_min_indices = column_minimal_indices(r, normal_rank);
    let row_min_indices = column_minimal_indices(&transpose_rep(r), normal_rank);

    // Elementary divisors from invariant factors D_j / D_{j-1}.
    let mut elem_divisors: Vec<(HomPoly, usize)> = Vec::new();
    let mut prev = (Poly::one(p), 0usize);
    for j in 1..=normal_rank {
        let (u, v) = determinantal_divisor(p, &grid, r.d2(), r.d1(), j);
        debug_assert!(!u.is_zero(), "level {j} below normal rank has a nonzero minor");
        let (qf, rem) = u.divmod(&prev.0)?;
        if !rem.is_zero() || v < prev.1 {
            return Err(Error::Internal(
                "determinantal divisors failed to divide".into(),
            ));
        }
        let x2_power = v - prev.1;
        if x2_power > 0 {
            elem_divisors.push((HomPoly::x2(p), x2_power));
        }
        if qf.degree().map(|d| d >= 1).unwrap_or(false) {
            for (q, mult) in poly_factor(&qf)? {
                let e = q.degree().unwrap();
                elem_divisors.push((HomPoly::homogenize(&q, e)?, mult));
            }
        }
        prev = (u, v);
    }
    elem_divisors.sort();

    let data = KroneckerData {
        col_min_indices,
        row_min_indices,
        elem_divisors,
    };
    let (rows, cols) = data.block_sizes();
    if rows != r.d2() || cols != r.d1() {
        return Err(Error::Internal(format!(
            "invariant sizes account for {rows}x{cols}, pencil is {}x{}",
            r.d2(),
            r.d1()
        )));
    }
    Ok(data)
}

pub(crate) fn pair_as_rep(a: &SkewTuple) -> Result<QuiverRep> {
    a.require_pair()?;
    QuiverRep::new(a.modulus(), a.size(), a.size(), a.mats().to_vec())
}

/// The unique class function describing the congruence class of a skew
/// pair: singular blocks are read off the minimal indices, point blocks
/// from halved elementary-divisor multiplicities. The pairing forced by
/// the doubled-block structure is checked and any violation reported as an
/// internal inconsistency (unreachable for validated skew input).
pub fn skew_pair_invariants(a: &SkewTuple) -> Result<ClassFunction> {
    let p = a.modulus();
    p.require_odd()?;
    let kron = kronecker_invariants(&pair_as_rep(a)?)?;
    if kron.col_min_indices != kron.row_min_indices {
        return Err(Error::Internal(
            "column and row minimal indices differ on a skew pair".into(),
        ));
    }
    let mut rho = ClassFunction::new(p);
    let mut index_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &e in &kron.col_min_indices {
        *index_counts.entry(e).or_insert(0) += 1;
    }
    for (e, count) in index_counts {
        rho.add(BlockSpec::eps(e + 1)?, count);
    }
    let mut divisor_counts: BTreeMap<(HomPoly, usize), usize> = BTreeMap::new();
    for (g, k) in &kron.elem_divisors {
        *divisor_counts.entry((g.clone(), *k)).or_insert(0) += 1;
    }
    for ((g, k), count) in divisor_counts {
        if count % 2 != 0 {
            return Err(Error::Internal(format!(
                "elementary divisor {g}^{k} occurs with odd multiplicity {count}"
            )));
        }
        rho.add(BlockSpec::new(ProjPoint::point(g)?, k)?, count / 2);
    }
    if rho.total_size() != a.size() {
        return Err(Error::Internal(format!(
            "class function accounts for size {}, pair has size {}",
            rho.total_size(),
            a.size()
        )));
    }
    Ok(rho)
}

/// The canonical block-diagonal pair for a class function, blocks in the
/// fixed serialization order (eps blocks by exponent, then point blocks).
pub fn canonical_pair(rho: &ClassFunction) -> Result<SkewTuple> {
    let p = rho.modulus();
    p.require_odd()?;
    let mut blocks = Vec::new();
    for (spec, mult) in rho.iter() {
        let block = canonical_block(p, spec)?;
        for _ in 0..mult {
            blocks.push(block.clone());
        }
    }
    if blocks.is_empty() {
        return Ok(SkewTuple::zero(p, 0, 2));
    }
    block_diag(&blocks)
}
