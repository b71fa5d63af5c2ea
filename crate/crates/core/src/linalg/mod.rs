//! Exact dense matrices over F_p with the usual elimination toolkit.

mod skew;

pub use skew::{block_diag, congr_act, tuple_act, SkewTuple};

use crate::error::{Error, Result};
use crate::gf::{Fp, Poly, Prime};
use std::fmt;

/// Dense row-major matrix over F_p. Entries are canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: Prime,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: Prime, rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for &e in row {
                data.push(p.reduce(e));
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            p,
            data,
        })
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Matrix::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = self.p.reduce(v);
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn neg(&self) -> Matrix {
        let p = self.p;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            p,
            data: self.data.iter().map(|&e| p.neg(e)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_same_shape(rhs)?;
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            p,
            data,
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let p = self.p;
        let c = p.reduce(c);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            p,
            data: self.data.iter().map(|&e| p.mul(e, c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.p.same_as(rhs.p)?;
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p;
        let mut out = Matrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = p.add(out.get(i, j), p.mul(a, rhs.get(k, j)));
                    out.data[i * rhs.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    /// Apply to a coordinate vector.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length".into()));
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = p.add(acc, p.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect())
    }

    fn check_same_shape(&self, rhs: &Matrix) -> Result<()> {
        self.p.same_as(rhs.p)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.p.same_as(rhs.p)?;
        if self.rows != rhs.rows {
            return Err(Error::Dimension("hstack row counts differ".into()));
        }
        Ok(Matrix::from_fn(self.p, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        }))
    }

    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.p.same_as(rhs.p)?;
        if self.cols != rhs.cols {
            return Err(Error::Dimension("vstack column counts differ".into()));
        }
        Ok(Matrix::from_fn(self.p, self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                rhs.get(i - self.rows, j)
            }
        }))
    }

    /// Columns `cols` gathered into a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.p, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Assemble from a grid of blocks; rows of blocks must agree in height,
    /// columns in width.
    pub fn from_blocks(p: Prime, grid: &[Vec<&Matrix>]) -> Result<Matrix> {
        let row_heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let col_widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let total_r: usize = row_heights.iter().sum();
        let total_c: usize = col_widths.iter().sum();
        let mut out = Matrix::zeros(p, total_r, total_c);
        let mut roff = 0;
        for (bi, brow) in grid.iter().enumerate() {
            if brow.len() != col_widths.len() {
                return Err(Error::Dimension("ragged block grid".into()));
            }
            let mut coff = 0;
            for (bj, blk) in brow.iter().enumerate() {
                if blk.rows != row_heights[bi] || blk.cols != col_widths[bj] {
                    return Err(Error::Dimension("block size mismatch".into()));
                }
                for i in 0..blk.rows {
                    for j in 0..blk.cols {
                        out.set(roff + i, coff + j, blk.get(i, j));
                    }
                }
                coff += blk.cols;
            }
            roff += row_heights[bi];
        }
        Ok(out)
    }

    /// Row echelon form; returns (reduced matrix, pivot column per pivot row).
    fn echelon(&self) -> (Matrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = p.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = p.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right kernel, one column per basis vector.
    pub fn kernel(&self) -> Matrix {
        let (e, pivots) = self.echelon();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, p.neg(e.get(r, fc)));
            }
        }
        basis
    }

    /// Solve `self * x = rhs` for all columns of `rhs` at once; `None` when
    /// inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        if rhs.rows != self.rows {
            return None;
        }
        let aug = self.hstack(rhs).ok()?;
        let (e, pivots) = aug.echelon();
        let p = self.p;
        // Inconsistent if any pivot falls in the rhs block.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(p, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, e.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.p, n))?;
        let (e, pivots) = aug.echelon();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(self.p, n, n, |i, j| e.get(i, n + j)))
    }

    pub fn det(&self) -> Result<Fp> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let p = self.p;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return Ok(p.elem(0));
            };
            if pr != c {
                for j in 0..n {
                    let (a, b) = (m.get(c, j), m.get(pr, j));
                    m.set(c, j, b);
                    m.set(pr, j, a);
                }
                det = p.neg(det);
            }
            let piv = m.get(c, c);
            det = p.mul(det, piv);
            let inv = p.inv(piv).unwrap();
            for i in c + 1..n {
                let f = p.mul(m.get(i, c), inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(p.elem(det))
    }

    /// Characteristic polynomial det(xI - M), computed by the Faddeev-
    /// LeVerrier-free route: expansion of the polynomial matrix via
    /// fraction-free elimination.
    pub fn char_poly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial".into()));
        }
        let p = self.p;
        let n = self.rows;
        let grid: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = if i == j { Poly::x(p) } else { Poly::zero(p) };
                        diag.sub(&Poly::constant(p, self.get(i, j)))
                    })
                    .collect()
            })
            .collect();
        Ok(poly_det(p, grid))
    }
}

/// Determinant of a square matrix of polynomials, by fraction-free
/// (Bareiss) elimination; exact over F_p[x].
pub fn poly_det(p: Prime, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(p);
    }
    let mut sign = false;
    let mut prev = Poly::one(p);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero(p);
            };
            m.swap(k, sw);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = num.divmod(&prev).expect("Bareiss divisor nonzero");
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = Poly::zero(p);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Rank of a matrix of polynomials over the rational function field,
/// by fraction-free elimination.
pub fn poly_rank(p: Prime, mut m: Vec<Vec<Poly>>) -> usize {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let _ = p;
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        for i in row + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            // row_i := pivot * row_i - m[i][col] * row_pivot
            let f = m[i][col].clone();
            let piv = m[row][col].clone();
            for j in col..cols {
                m[i][j] = piv.mul(&m[i][j]).sub(&f.mul(&m[row][j]));
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// An invertible matrix with its inverse cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invertible {
    mat: Matrix,
    inv: Matrix,
}

impl Invertible {
    pub fn new(mat: Matrix) -> Result<Self> {
        let inv = mat.inverse()?;
        Ok(Invertible { mat, inv })
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let id = Matrix::identity(p, n);
        Invertible {
            mat: id.clone(),
            inv: id,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inv
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn modulus(&self) -> Prime {
        self.mat.modulus()
    }
}

/// Companion ("Frobenius") matrix of a monic polynomial: ones on the first
/// subdiagonal, negated coefficients of f in the last column. Its
/// characteristic polynomial is f.
pub fn frobenius_matrix(f: &Poly) -> Result<Matrix> {
    if f.is_zero() || !f.is_monic() || f.degree() == Some(0) {
        return Err(Error::NonMonic);
    }
    let p = f.modulus();
    let d = f.degree().unwrap();
    let mut m = Matrix::zeros(p, d, d);
    for i in 0..d {
        if i + 1 < d {
            m.set(i + 1, i, 1);
        }
        m.set(i, d - 1, p.neg(f.coeff(i)));
    }
    Ok(m)
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, p: Prime, r: usize, c: usize) -> Matrix {
        Matrix::from_fn(p, r, c, |_, _| rng.random_range(0..p.get()))
    }

    #[test]
    fn rank_of_zero_and_j() {
        let p = p5();
        assert_eq!(Matrix::zeros(p, 3, 3).rank(), 0);
        let j = Matrix::from_rows(p, vec![vec![0, 1], vec![4, 0]]).unwrap();
        assert_eq!(j.rank(), 2);
        assert_eq!(j.det().unwrap().value(), 1);
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let p = p5();
        let m = Matrix::from_rows(p, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(p, 2));
        let s = Matrix::from_rows(p, vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn kernel_dimension_theorem() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = p5();
        for _ in 0..100 {
            let m = random_matrix(&mut rng, p, 4, 6);
            let k = m.kernel();
            assert_eq!(m.rank() + k.cols(), m.cols());
            if k.cols() > 0 {
                assert!(m.mul(&k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn solve_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = p5();
        for _ in 0..100 {
            let m = random_matrix(&mut rng, p, 4, 3);
            let x = random_matrix(&mut rng, p, 3, 2);
            let b = m.mul(&x).unwrap();
            let sol = m.solve(&b).expect("consistent system");
            assert_eq!(m.mul(&sol).unwrap(), b);
        }
    }

    #[test]
    fn companion_matrix_convention() {
        let p = Prime::new(3).unwrap();
        // F(x) is the 1x1 zero matrix.
        let f = Poly::x(p);
        assert_eq!(frobenius_matrix(&f).unwrap(), Matrix::zeros(p, 1, 1));
        // F(x^2) has a one on the first subdiagonal only.
        let f = Poly::monomial(p, 2);
        assert_eq!(
            frobenius_matrix(&f).unwrap(),
            Matrix::from_rows(p, vec![vec![0, 0], vec![1, 0]]).unwrap()
        );
        assert!(frobenius_matrix(&Poly::new(p, vec![1, 2])).is_err());
    }

    #[test]
    fn companion_char_poly_oracle() {
        // char-poly computed by an independent polynomial-determinant route.
        let p = Prime::new(5).unwrap();
        let f = Poly::new(p, vec![1, 1, 1]); // x^2 + x + 1
        let c = frobenius_matrix(&f).unwrap();
        assert_eq!(c.char_poly().unwrap(), f);
    }

    #[test]
    fn companion_char_poly_exhaustive_f3() {
        let p = Prime::new(3).unwrap();
        for d in 1..=4usize {
            let total = 3u64.pow(d as u32);
            for code in 0..total {
                let mut coeffs: Vec<u64> = Vec::new();
                let mut c = code;
                for _ in 0..d {
                    coeffs.push(c % 3);
                    c /= 3;
                }
                coeffs.push(1);
                let f = Poly::new(p, coeffs);
                let m = frobenius_matrix(&f).unwrap();
                assert_eq!(m.char_poly().unwrap(), f, "failed for {f}");
            }
        }
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Prime::new(3).unwrap();
            let r = rng.random_range(1..6usize);
            let c = rng.random_range(1..6usize);
            let m = random_matrix(&mut rng, p, r, c);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
