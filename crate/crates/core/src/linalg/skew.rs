//! Tuples of skew-symmetric matrices and the two group actions on them.

use super::{Invertible, Matrix};
use crate::error::{Error, Result};
use crate::gf::Prime;

/// An n-tuple of m x m skew-symmetric matrices over F_p.
///
/// Construction validates skewness *and* the zero diagonal; the diagonal
/// condition is independent at p = 2, so it is checked explicitly rather
/// than derived. There is no silent symmetrization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewTuple {
    p: Prime,
    m: usize,
    mats: Vec<Matrix>,
}

impl SkewTuple {
    pub fn new(p: Prime, m: usize, mats: Vec<Matrix>) -> Result<Self> {
        for (idx, a) in mats.iter().enumerate() {
            p.same_as(a.modulus())?;
            if a.rows() != m || a.cols() != m {
                return Err(Error::Dimension(format!(
                    "matrix {idx} is {}x{}, expected {m}x{m}",
                    a.rows(),
                    a.cols()
                )));
            }
            for i in 0..m {
                if a.get(i, i) != 0 {
                    return Err(Error::NotSkew(format!(
                        "matrix {idx} has nonzero diagonal entry at ({i},{i})"
                    )));
                }
                for j in 0..i {
                    if a.get(i, j) != p.neg(a.get(j, i)) {
                        return Err(Error::NotSkew(format!(
                            "matrix {idx} violates A^T = -A at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(SkewTuple { p, m, mats })
    }

    /// The n-tuple of zero matrices.
    pub fn zero(p: Prime, m: usize, n: usize) -> Self {
        SkewTuple {
            p,
            m,
            mats: (0..n).map(|_| Matrix::zeros(p, m, m)).collect(),
        }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    /// Matrix size m.
    pub fn size(&self) -> usize {
        self.m
    }

    /// Tuple length n.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn mat(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    /// The value vector (A_1[i,j], ..., A_n[i,j]).
    pub fn entry(&self, i: usize, j: usize) -> Vec<u64> {
        self.mats.iter().map(|a| a.get(i, j)).collect()
    }

    pub fn require_pair(&self) -> Result<()> {
        if self.len() == 2 {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "expected a pair of forms, got a {}-tuple",
                self.len()
            )))
        }
    }
}

/// Congruence action: P acting as (P A_1 P^T, ..., P A_n P^T).
pub fn congr_act(p_mat: &Invertible, a: &SkewTuple) -> Result<SkewTuple> {
    let p = a.modulus();
    p.same_as(p_mat.modulus())?;
    if p_mat.size() != a.size() {
        return Err(Error::Dimension(format!(
            "transform is {}x{}, tuple size is {}",
            p_mat.size(),
            p_mat.size(),
            a.size()
        )));
    }
    let pt = p_mat.matrix().transpose();
    let mats = a
        .mats()
        .iter()
        .map(|m| p_mat.matrix().mul(m)?.mul(&pt))
        .collect::<Result<Vec<_>>>()?;
    SkewTuple::new(p, a.size(), mats)
}

/// Recombination action: A'_j = sum_i q_ij A_i for an invertible n x n Q.
pub fn tuple_act(a: &SkewTuple, q: &Invertible) -> Result<SkewTuple> {
    let p = a.modulus();
    p.same_as(q.modulus())?;
    let n = a.len();
    if q.size() != n {
        return Err(Error::Dimension(format!(
            "recombination is {}x{}, tuple length is {n}",
            q.size(),
            q.size()
        )));
    }
    let m = a.size();
    let mut mats = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Matrix::zeros(p, m, m);
        for i in 0..n {
            let c = q.matrix().get(i, j);
            if c != 0 {
                acc = acc.add(&a.mat(i).scale(c))?;
            }
        }
        mats.push(acc);
    }
    SkewTuple::new(p, m, mats)
}

/// Block-diagonal direct sum; all summands must share p and tuple length.
/// An empty list is rejected because the tuple length would be undefined;
/// use `SkewTuple::zero(p, 0, n)` for an explicit empty sum.
pub fn block_diag(tuples: &[SkewTuple]) -> Result<SkewTuple> {
    let first = tuples
        .first()
        .ok_or_else(|| Error::Validation("empty direct sum needs an explicit shape".into()))?;
    let p = first.modulus();
    let n = first.len();
    let mut m = 0usize;
    for t in tuples {
        p.same_as(t.modulus())?;
        if t.len() != n {
            return Err(Error::Dimension("mixed tuple lengths in direct sum".into()));
        }
        m += t.size();
    }
    let mut mats = Vec::with_capacity(n);
    for k in 0..n {
        let mut big = Matrix::zeros(p, m, m);
        let mut off = 0usize;
        for t in tuples {
            let b = t.mat(k);
            for i in 0..t.size() {
                for j in 0..t.size() {
                    big.set(off + i, off + j, b.get(i, j));
                }
            }
            off += t.size();
        }
        mats.push(big);
    }
    SkewTuple::new(p, m, mats)
}
