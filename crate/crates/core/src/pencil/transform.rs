//! Constructive congruence reduction of a skew pair to its canonical form.
//!
//! One canonical block is split off at a time. Singular blocks come from a
//! minimal-degree polynomial kernel chain of the pencil; point blocks from
//! a chain solving the block's intertwining equations, selected by a
//! deterministic sweep of the solution space. The partner half of a block
//! is solved for under the dual intertwining equations, which pins it to
//! the same direct summand as the chain. Every split is verified
//! entry-for-entry before recursing, and the assembled transform is checked
//! against the canonical pair before it is returned, so a wrong answer is
//! never produced.

use super::kronecker::{pair_as_rep, pencil_grid, striped};
use super::{
    canonical_block, canonical_pair, canonical_rep, combination_sweep, skew_pair_invariants,
    BlockSpec, QuiverRep,
};
use crate::error::{Error, Result};
use crate::linalg::{congr_act, poly_rank, Invertible, Matrix, SkewTuple};
use crate::weakcong::ClassFunction;

const CANDIDATE_CAP: usize = 200;

/// Find P with `congr_act(P, A)` equal, entry for entry, to
/// `canonical_pair` of the invariants of A. The postcondition is re-checked
/// before returning.
pub fn congruence_transform(a: &SkewTuple) -> Result<(Invertible, ClassFunction)> {
    let p = a.modulus();
    p.require_odd()?;
    a.require_pair()?;
    let rho = skew_pair_invariants(a)?;
    let target = canonical_pair(&rho)?;

    let peel = reduce(a)?;
    let basis = reorder_to_canonical(peel);
    let pm = Invertible::new(basis.transpose())?;
    let transformed = congr_act(&pm, a)?;
    if transformed != target {
        return Err(Error::Internal(
            "assembled transform does not reach the canonical pair".into(),
        ));
    }
    Ok((pm, rho))
}

struct Peel {
    /// Columns form the new basis; basis^T A basis is block diagonal with
    /// the listed blocks in order.
    basis: Matrix,
    blocks: Vec<BlockSpec>,
}

/// Permute whole block segments of the peeled basis into the canonical
/// block order (stable for equal specs).
fn reorder_to_canonical(peel: Peel) -> Matrix {
    let mut offsets = Vec::with_capacity(peel.blocks.len());
    let mut off = 0usize;
    for spec in &peel.blocks {
        offsets.push((spec.clone(), off, spec.size()));
        off += spec.size();
    }
    let mut order: Vec<usize> = (0..offsets.len()).collect();
    order.sort_by(|&i, &j| offsets[i].0.cmp(&offsets[j].0).then(i.cmp(&j)));
    let mut cols = Vec::with_capacity(off);
    for &i in &order {
        let (_, start, size) = offsets[i];
        cols.extend(start..start + size);
    }
    peel.basis.select_columns(&cols)
}

fn reduce(a: &SkewTuple) -> Result<Peel> {
    let p = a.modulus();
    let m = a.size();
    if m == 0 {
        return Ok(Peel {
            basis: Matrix::identity(p, 0),
            blocks: vec![],
        });
    }
    let rep = pair_as_rep(a)?;
    let normal_rank = poly_rank(p, pencil_grid(&rep));
    if normal_rank < m {
        return split_singular(a, &rep);
    }
    split_point(a)
}

/// Split off one singular block from a pencil with minimal column index
/// eps: any minimal-degree kernel chain spans the first half of an eps
/// block of exponent eps + 1.
fn split_singular(a: &SkewTuple, rep: &QuiverRep) -> Result<Peel> {
    let p = a.modulus();
    let m = a.size();
    for eps in 0..=m {
        let kernel = striped(rep, eps).kernel();
        if kernel.cols() == 0 {
            continue;
        }
        let d = eps + 1;
        let spec = BlockSpec::eps(d)?;
        // Chain candidates: columns of the kernel, then small combinations.
        for combo in combination_sweep(p, kernel.cols(), CANDIDATE_CAP) {
            let mut stacked = vec![0u64; (eps + 1) * m];
            for (c, &coef) in combo.iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                for r in 0..(eps + 1) * m {
                    stacked[r] = p.add(stacked[r], p.mul(coef, kernel.get(r, c)));
                }
            }
            let v = Matrix::from_fn(p, m, d, |i, j| stacked[j * m + i]);
            if v.rank() != d {
                continue;
            }
            if let Ok(peel) = try_split(a, &spec, &v) {
                return Ok(peel);
            }
        }
        return Err(Error::Internal(format!(
            "no minimal chain of degree {eps} admits a splitting"
        )));
    }
    Err(Error::Internal("singular pencil without kernel chain".into()))
}

/// Split off one point block from a regular pencil. The invariants of the
/// remaining pair say which point and exponent to target; the chain space
/// is the solution space of A_t V = Phi R_t^T.
fn split_point(a: &SkewTuple) -> Result<Peel> {
    let p = a.modulus();
    let rho = skew_pair_invariants(a)?;
    let mut chosen: Option<BlockSpec> = None;
    for (spec, _) in rho.iter() {
        match &chosen {
            None => chosen = Some(spec.clone()),
            Some(c) if c.point == spec.point && spec.d > c.d => chosen = Some(spec.clone()),
            Some(c) if c.point == spec.point => {}
            Some(_) => break,
        }
    }
    let spec =
        chosen.ok_or_else(|| Error::Internal("regular pencil with empty invariants".into()))?;
    let rep = canonical_rep(p, &spec)?;
    let v_parts = chain_solution_space(a, &rep)?;
    let d2 = rep.d2();
    for combo in combination_sweep(p, v_parts.len(), CANDIDATE_CAP) {
        let mut v = Matrix::zeros(p, a.size(), d2);
        for (i, &c) in combo.iter().enumerate() {
            if c != 0 {
                v = v.add(&v_parts[i].scale(c))?;
            }
        }
        if v.rank() != d2 {
            continue;
        }
        if let Ok(peel) = try_split(a, &spec, &v) {
            return Ok(peel);
        }
    }
    Err(Error::Internal(format!(
        "no chain for block {spec:?} admits a splitting"
    )))
}

/// Solution space of { A_t V = Phi R_t^T : t = 1, 2 } in (V, Phi),
/// projected to the V component. V is m x d2, Phi is m x d1. In the
/// canonical block the first-half basis solves this with Phi supported on
/// the second half, so the solutions are exactly the candidate chains.
fn chain_solution_space(a: &SkewTuple, rep: &QuiverRep) -> Result<Vec<Matrix>> {
    let p = a.modulus();
    let m = a.size();
    let (d1, d2) = (rep.d1(), rep.d2());
    let nv = m * d2;
    let unknowns = nv + m * d1;
    let mut sys = Matrix::zeros(p, 2 * m * d2, unknowns);
    let mut row = 0usize;
    for t in 0..2 {
        for i in 0..m {
            for j in 0..d2 {
                // (A_t V)[i][j] - (Phi R_t^T)[i][j] = 0
                for r in 0..m {
                    sys.set(row, r * d2 + j, a.mat(t).get(i, r));
                }
                for l in 0..d1 {
                    let cur = sys.get(row, nv + i * d1 + l);
                    sys.set(row, nv + i * d1 + l, p.sub(cur, rep.map(t).get(j, l)));
                }
                row += 1;
            }
        }
    }
    let kernel = sys.kernel();
    let mut out = Vec::new();
    for k in 0..kernel.cols() {
        let v = Matrix::from_fn(p, m, d2, |i, j| kernel.get(i * d2 + j, k));
        if !v.is_zero() {
            out.push(v);
        }
    }
    Ok(out)
}

/// Partner solutions: pairs (W, Psi) with A_t W = Psi R_t and the pairing
/// targets V^T A_t W = R_t. The intertwining half keeps W inside the same
/// direct summand as the chain; returns the particular solution and the
/// W-parts of the homogeneous space.
fn partner_space(
    a: &SkewTuple,
    rep: &QuiverRep,
    v: &Matrix,
) -> Option<(Matrix, Vec<Matrix>)> {
    let p = a.modulus();
    let m = a.size();
    let (d1, d2) = (rep.d1(), rep.d2());
    let nw = m * d1;
    let unknowns = nw + m * d2;
    let rows = 2 * m * d1 + 2 * d2 * d1;
    let mut sys = Matrix::zeros(p, rows, unknowns);
    let mut rhs = Matrix::zeros(p, rows, 1);
    let mut row = 0usize;
    let vt = v.transpose();
    let va = [vt.mul(a.mat(0)).ok()?, vt.mul(a.mat(1)).ok()?];
    for t in 0..2 {
        // A_t W - Psi R_t = 0
        for i in 0..m {
            for j in 0..d1 {
                for r in 0..m {
                    sys.set(row, r * d1 + j, a.mat(t).get(i, r));
                }
                for l in 0..d2 {
                    let cur = sys.get(row, nw + i * d2 + l);
                    sys.set(row, nw + i * d2 + l, p.sub(cur, rep.map(t).get(l, j)));
                }
                row += 1;
            }
        }
        // V^T A_t W = R_t
        for i in 0..d2 {
            for j in 0..d1 {
                for r in 0..m {
                    sys.set(row, r * d1 + j, va[t].get(i, r));
                }
                rhs.set(row, 0, rep.map(t).get(i, j));
                row += 1;
            }
        }
    }
    let particular = sys.solve(&rhs)?;
    let w0 = Matrix::from_fn(p, m, d1, |i, j| particular.get(i * d1 + j, 0));
    let kernel = sys.kernel();
    let mut hom = Vec::new();
    for k in 0..kernel.cols() {
        let w = Matrix::from_fn(p, m, d1, |i, j| kernel.get(i * d1 + j, k));
        if !w.is_zero() {
            hom.push(w);
        }
    }
    Some((w0, hom))
}

/// Complete a chain V into an exact copy of the canonical block for
/// `spec`, split it off, and recurse on the complement.
fn try_split(a: &SkewTuple, spec: &BlockSpec, v: &Matrix) -> Result<Peel> {
    let p = a.modulus();
    let m = a.size();
    let rep = canonical_rep(p, spec)?;
    let block = canonical_block(p, spec)?;
    let (d1, d2) = (rep.d1(), rep.d2());

    let u = if d1 == 0 {
        v.clone()
    } else {
        let (w0, hom) = partner_space(a, &rep, v)
            .ok_or_else(|| Error::Internal("partner system for chain is inconsistent".into()))?;
        let w = correct_partners(a, &rep, v, &w0, &hom)
            .ok_or_else(|| Error::Internal("isotropy correction unsolvable".into()))?;
        v.hstack(&w)?
    };

    let s = d1 + d2;
    let ut = u.transpose();
    for t in 0..2 {
        if ut.mul(a.mat(t))?.mul(&u)? != *block.mat(t) {
            return Err(Error::Internal("split block is not canonical".into()));
        }
    }

    // Everything pairing trivially with the split block.
    let pairings = ut.mul(a.mat(0))?.vstack(&ut.mul(a.mat(1))?)?;
    let comp_space = pairings.kernel();
    let comp = greedy_completion(&u, &comp_space, m - s)
        .ok_or_else(|| Error::Internal("no complementary subspace".into()))?;
    let ct = comp.transpose();
    let rest = SkewTuple::new(
        p,
        m - s,
        vec![
            ct.mul(a.mat(0))?.mul(&comp)?,
            ct.mul(a.mat(1))?.mul(&comp)?,
        ],
    )?;
    let sub = reduce(&rest)?;
    let basis = u.hstack(&comp.mul(&sub.basis)?)?;
    let mut blocks = vec![spec.clone()];
    blocks.extend(sub.blocks);
    Ok(Peel { basis, blocks })
}

/// Make the partner vectors isotropic without disturbing the pairing
/// targets: correct by homogeneous partner solutions and by chain columns.
/// Only the terms linear in the unknowns are solved for; the caller's
/// exact block check rejects any candidate whose quadratic residue
/// survives.
fn correct_partners(
    a: &SkewTuple,
    rep: &QuiverRep,
    v: &Matrix,
    w0: &Matrix,
    hom: &[Matrix],
) -> Option<Matrix> {
    let p = a.modulus();
    let (d1, d2) = (rep.d1(), rep.d2());
    if d1 < 2 {
        return Some(w0.clone());
    }
    let h = hom.len();
    let unknowns = h + d2 * d1;
    let pairs: Vec<(usize, usize)> = (0..d1)
        .flat_map(|j| (j + 1..d1).map(move |k| (j, k)))
        .collect();
    let rows = 2 * pairs.len();
    let mut sys = Matrix::zeros(p, rows, unknowns);
    let mut rhs = Matrix::zeros(p, rows, 1);
    let w0t = w0.transpose();
    for t in 0..2usize {
        let w0a = w0t.mul(a.mat(t)).ok()?;
        let beta = w0a.mul(w0).ok()?;
        let cross: Vec<Matrix> = hom.iter().map(|k| w0a.mul(k).unwrap()).collect();
        for (pi, &(j, k)) in pairs.iter().enumerate() {
            let row = t * pairs.len() + pi;
            for (b, m_t) in cross.iter().enumerate() {
                // theta_b * (M[j][k] - M[k][j])
                sys.set(row, b, p.sub(m_t.get(j, k), m_t.get(k, j)));
            }
            // C-part: c_j^T R_t[:,k] - c_k^T R_t[:,j]
            for i in 0..d2 {
                let cur_j = sys.get(row, h + i * d1 + j);
                sys.set(row, h + i * d1 + j, p.add(cur_j, rep.map(t).get(i, k)));
                let cur_k = sys.get(row, h + i * d1 + k);
                sys.set(row, h + i * d1 + k, p.sub(cur_k, rep.map(t).get(i, j)));
            }
            rhs.set(row, 0, p.neg(beta.get(j, k)));
        }
    }
    let sol = sys.solve(&rhs)?;
    let mut w = w0.clone();
    for (b, k) in hom.iter().enumerate() {
        let c = sol.get(b, 0);
        if c != 0 {
            w = w.add(&k.scale(c)).ok()?;
        }
    }
    let cmat = Matrix::from_fn(p, d2, d1, |i, j| sol.get(h + i * d1 + j, 0));
    w = w.add(&v.mul(&cmat).ok()?).ok()?;
    Some(w)
}

/// Greedily pick `need` columns of `cand` that extend the column span of
/// `u` to the whole space.
fn greedy_completion(u: &Matrix, cand: &Matrix, need: usize) -> Option<Matrix> {
    let m = u.rows();
    let mut chosen = Vec::with_capacity(need);
    let mut current = u.clone();
    let mut rank = current.rank();
    for c in 0..cand.cols() {
        if chosen.len() == need {
            break;
        }
        let trial = current.hstack(&cand.select_columns(&[c])).ok()?;
        if trial.rank() > rank {
            rank += 1;
            current = trial;
            chosen.push(c);
        }
    }
    if chosen.len() == need && rank == m {
        Some(cand.select_columns(&chosen))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Prime;
    use crate::linalg::tuple_act;
    use crate::weakcong::ProjPoint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn random_skew_pair(rng: &mut ChaCha8Rng, p: Prime, m: usize) -> SkewTuple {
        let mats = (0..2)
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
        SkewTuple::new(p, m, mats).unwrap()
    }

    #[test]
    fn transform_on_canonical_input() {
        let pr = p(3);
        let mut rho = ClassFunction::new(pr);
        rho.add(BlockSpec::eps(2).unwrap(), 1);
        rho.add(BlockSpec::new(ProjPoint::infinity(pr), 1).unwrap(), 1);
        let a = canonical_pair(&rho).unwrap();
        let (pm, got) = congruence_transform(&a).unwrap();
        assert_eq!(got, rho);
        assert_eq!(congr_act(&pm, &a).unwrap(), a);
    }

    #[test]
    fn transform_self_verifies_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for pv in [3u64, 5] {
            let pr = p(pv);
            for _ in 0..60 {
                let m = rng.random_range(0..=6usize);
                let a = random_skew_pair(&mut rng, pr, m);
                let (pm, rho) = congruence_transform(&a).unwrap();
                let canonical = canonical_pair(&rho).unwrap();
                assert_eq!(congr_act(&pm, &a).unwrap(), canonical);
            }
        }
    }

    #[test]
    fn transform_exhaustive_p3_m3() {
        let pr = p(3);
        for code in 0..3u64.pow(6) {
            let mut digits = Vec::new();
            let mut c = code;
            for _ in 0..6 {
                digits.push(c % 3);
                c /= 3;
            }
            let mut mats = Vec::new();
            for t in 0..2 {
                let mut a = Matrix::zeros(pr, 3, 3);
                let mut idx = 3 * t;
                for i in 0..3 {
                    for j in i + 1..3 {
                        a.set(i, j, digits[idx]);
                        a.set(j, i, pr.neg(digits[idx]));
                        idx += 1;
                    }
                }
                mats.push(a);
            }
            let a = SkewTuple::new(pr, 3, mats).unwrap();
            let (pm, rho) = congruence_transform(&a).unwrap();
            assert_eq!(
                congr_act(&pm, &a).unwrap(),
                canonical_pair(&rho).unwrap(),
                "failed at code {code}"
            );
        }
    }

    #[test]
    fn transform_of_twisted_canonical() {
        // Weakly twisted inputs still reduce: congruence by P changes
        // nothing about the class, recombination by Q moves the point.
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let pr = p(3);
        let mut rho = ClassFunction::new(pr);
        rho.add(BlockSpec::new(ProjPoint::infinity(pr), 2).unwrap(), 1);
        let a = canonical_pair(&rho).unwrap();
        for _ in 0..20 {
            let q = loop {
                let cand = Matrix::from_fn(pr, 2, 2, |_, _| rng.random_range(0..3));
                if let Ok(inv) = Invertible::new(cand) {
                    break inv;
                }
            };
            let twisted = tuple_act(&a, &q).unwrap();
            let (pm, rho2) = congruence_transform(&twisted).unwrap();
            assert_eq!(
                congr_act(&pm, &twisted).unwrap(),
                canonical_pair(&rho2).unwrap()
            );
            assert_eq!(rho2.total_size(), 4);
        }
    }
}
