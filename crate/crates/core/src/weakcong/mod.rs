//! The GL(2, F_p) action on closed points of the projective line and on
//! class functions, orbit canonicalization, and enumeration of
//! weak-congruence classes.

use crate::error::{Error, Result};
use crate::gf::{irreducibles_of_degree, HomPoly, Prime, DEFAULT_ENUM_LIMIT};
use crate::linalg::{Invertible, Matrix, SkewTuple};
use crate::pencil::{skew_pair_invariants, BlockSpec};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Guard for whole-group enumeration: refuse when p(p^2 - 1) exceeds this.
pub const DEFAULT_ORBIT_LIMIT: u128 = 10_000_000;

/// A closed point of the projective line, or the singular marker `Eps`.
/// Points are unital homogeneous irreducible polynomials in x1, x2; the
/// point at infinity is the polynomial x2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Eps,
    Point(HomPoly),
}

impl ProjPoint {
    pub fn point(g: HomPoly) -> Result<Self> {
        if !g.is_unital() || !g.is_irreducible() {
            return Err(Error::Validation(format!(
                "{g} is not a unital irreducible homogeneous polynomial"
            )));
        }
        Ok(ProjPoint::Point(g))
    }

    pub fn infinity(p: Prime) -> Self {
        ProjPoint::Point(HomPoly::x2(p))
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, ProjPoint::Eps)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            ProjPoint::Eps => None,
            ProjPoint::Point(g) => Some(g.degree()),
        }
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Eps, ProjPoint::Eps) => Ordering::Equal,
            (ProjPoint::Eps, _) => Ordering::Less,
            (_, ProjPoint::Eps) => Ordering::Greater,
            (ProjPoint::Point(a), ProjPoint::Point(b)) => {
                (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs()))
            }
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Eps => write!(f, "eps"),
            ProjPoint::Point(g) => write!(f, "{g}"),
        }
    }
}

/// Finitely supported multiplicity function on (point, block exponent)
/// pairs. Equality and ordering follow the canonical block order, so the
/// derived order doubles as the serialization order used for orbit minima.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassFunction {
    p: Prime,
    map: BTreeMap<BlockSpec, usize>,
}

impl ClassFunction {
    pub fn new(p: Prime) -> Self {
        ClassFunction {
            p,
            map: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn add(&mut self, spec: BlockSpec, mult: usize) {
        if mult == 0 {
            return;
        }
        *self.map.entry(spec).or_insert(0) += mult;
    }

    pub fn remove(&mut self, spec: &BlockSpec) -> usize {
        self.map.remove(spec).unwrap_or(0)
    }

    pub fn get(&self, spec: &BlockSpec) -> usize {
        self.map.get(spec).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BlockSpec, usize)> {
        self.map.iter().map(|(k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.map.len()
    }

    /// Total matrix size of the canonical pair this function encodes.
    pub fn total_size(&self) -> usize {
        self.map.iter().map(|(s, &m)| s.size() * m).sum()
    }

    /// Right action (rho * Q)(g, d) = rho(Q * g, d).
    pub fn act(&self, q: &Invertible) -> Result<ClassFunction> {
        let mut out = ClassFunction::new(self.p);
        for (spec, mult) in self.iter() {
            let moved = BlockSpec::new(act_point(q, &spec.point)?, spec.d)?;
            out.add(moved, mult);
        }
        Ok(out)
    }
}

/// The action of an invertible 2x2 matrix on a point: substitute
/// x1 -> q11 x1 + q12 x2, x2 -> q21 x1 + q22 x2 and rescale to unital.
/// Eps is a fixed point. The convention is the right action:
/// `act_point(q1, act_point(q2, g)) == act_point(q2 * q1, g)`.
pub fn act_point(q: &Invertible, g: &ProjPoint) -> Result<ProjPoint> {
    if q.size() != 2 {
        return Err(Error::Dimension("point action needs a 2x2 matrix".into()));
    }
    match g {
        ProjPoint::Eps => Ok(ProjPoint::Eps),
        ProjPoint::Point(poly) => {
            let m = q.matrix();
            let sub = [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]];
            let moved = poly.substitute(sub).normalize_unital();
            debug_assert_eq!(moved.degree(), poly.degree());
            ProjPoint::point(moved)
        }
    }
}

/// (rho * Q)(g, d) = rho(Q * g, d); support is permuted, sizes unchanged.
pub fn act_function(q: &Invertible, rho: &ClassFunction) -> Result<ClassFunction> {
    rho.act(q)
}

/// All of GL(2, F_p), in reading order of the entries.
pub fn gl2(p: Prime, limit: u128) -> Result<Vec<Invertible>> {
    let pv = p.get() as u128;
    let needed = (pv * pv - 1) * (pv * pv - pv);
    if needed > limit {
        return Err(Error::ResourceGuard { needed, limit });
    }
    let n = p.get();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mat = Matrix::from_rows(p, vec![vec![a, b], vec![c, d]]).unwrap();
                    if let Ok(inv) = Invertible::new(mat) {
                        out.push(inv);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One representative per scalar class of GL(2, F_p): the first nonzero
/// entry in reading order is normalized to 1.
pub fn pgl2(p: Prime, limit: u128) -> Result<Vec<Invertible>> {
    let pv = p.get() as u128;
    let needed = pv * (pv * pv - 1);
    if needed > limit {
        return Err(Error::ResourceGuard { needed, limit });
    }
    let n = p.get();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let entries = [a, b, c, d];
                    let first = entries.iter().position(|&e| e != 0);
                    if first.map(|i| entries[i] != 1).unwrap_or(true) {
                        continue;
                    }
                    let mat = Matrix::from_rows(p, vec![vec![a, b], vec![c, d]]).unwrap();
                    if let Ok(inv) = Invertible::new(mat) {
                        out.push(inv);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Lexicographically minimal element of the GL(2) orbit of `rho` under the
/// fixed serialization order. Idempotent and constant on orbits.
pub fn orbit_canonical(rho: &ClassFunction, limit: u128) -> Result<ClassFunction> {
    rho.modulus().require_odd()?;
    // The action only moves points; a function supported on eps alone is
    // already canonical, which keeps large p usable for such inputs.
    if rho.iter().all(|(s, _)| s.point.is_eps()) {
        return Ok(rho.clone());
    }
    let group = pgl2(rho.modulus(), limit)?;
    orbit_canonical_in(rho, &group)
}

fn orbit_canonical_in(rho: &ClassFunction, group: &[Invertible]) -> Result<ClassFunction> {
    let mut best = rho.clone();
    for q in group {
        let cand = rho.act(q)?;
        if cand < best {
            best = cand;
        }
    }
    Ok(best)
}

/// Complete invariant of weak congruence for a pair of skew forms.
pub fn weak_canonicalize(a: &SkewTuple, limit: u128) -> Result<ClassFunction> {
    let rho = skew_pair_invariants(a)?;
    orbit_canonical(&rho, limit)
}

/// Exactly one canonical class function per weak-congruence class of
/// m x m skew pairs, sorted in serialization order.
pub fn enumerate_classes(p: Prime, m: usize, limit: u128) -> Result<Vec<ClassFunction>> {
    p.require_odd()?;
    // Point blocks exist whenever m >= 2, and canonicalizing them sweeps
    // the whole group; guard before any enumeration is materialized.
    if m >= 2 {
        let pv = p.get() as u128;
        let needed = pv * (pv * pv - 1);
        if needed > limit {
            return Err(Error::ResourceGuard { needed, limit });
        }
    }
    let specs = available_blocks(p, m)?;
    let mut all = Vec::new();
    let mut current = ClassFunction::new(p);
    fill(&specs, 0, m, &mut current, &mut all);
    let need_group = all
        .iter()
        .any(|rho| rho.iter().any(|(s, _)| !s.point.is_eps()));
    let group = if need_group { pgl2(p, limit)? } else { Vec::new() };
    let mut seen = BTreeSet::new();
    for rho in all {
        let canon = if group.is_empty() {
            rho
        } else {
            orbit_canonical_in(&rho, &group)?
        };
        seen.insert(canon);
    }
    Ok(seen.into_iter().collect())
}

pub fn count_classes(p: Prime, m: usize, limit: u128) -> Result<usize> {
    Ok(enumerate_classes(p, m, limit)?.len())
}

/// Every block of size <= m: eps blocks, and point blocks over points of
/// degree at most m/2 (a point block of degree e has size 2ed >= 2e).
pub(crate) fn available_blocks(p: Prime, m: usize) -> Result<Vec<BlockSpec>> {
    let mut specs = Vec::new();
    let mut d = 1usize;
    while 2 * d - 1 <= m {
        specs.push(BlockSpec::new(ProjPoint::Eps, d)?);
        d += 1;
    }
    for e in 1..=m / 2 {
        let mut points = Vec::new();
        if e == 1 {
            points.push(ProjPoint::infinity(p));
        }
        for q in irreducibles_of_degree(p, e, DEFAULT_ENUM_LIMIT)? {
            points.push(ProjPoint::point(HomPoly::homogenize(&q, e)?)?);
        }
        for point in points {
            let mut d = 1usize;
            while 2 * e * d <= m {
                specs.push(BlockSpec::new(point.clone(), d)?);
                d += 1;
            }
        }
    }
    specs.sort();
    Ok(specs)
}

fn fill(
    specs: &[BlockSpec],
    idx: usize,
    remaining: usize,
    current: &mut ClassFunction,
    out: &mut Vec<ClassFunction>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    if idx == specs.len() {
        return;
    }
    let size = specs[idx].size();
    let max_mult = remaining / size;
    for mult in 0..=max_mult {
        if mult > 0 {
            current.add(specs[idx].clone(), 1);
        }
        fill(specs, idx + 1, remaining - mult * size, current, out);
    }
    if max_mult > 0 {
        current.remove(&specs[idx]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn inv2(p: Prime, rows: [[u64; 2]; 2]) -> Invertible {
        Invertible::new(
            Matrix::from_rows(p, vec![rows[0].to_vec(), rows[1].to_vec()]).unwrap(),
        )
        .unwrap()
    }

    fn all_points_up_to(p: Prime, deg: usize) -> Vec<ProjPoint> {
        let mut pts = vec![ProjPoint::infinity(p)];
        for e in 1..=deg {
            for q in irreducibles_of_degree(p, e, DEFAULT_ENUM_LIMIT).unwrap() {
                pts.push(ProjPoint::point(HomPoly::homogenize(&q, e).unwrap()).unwrap());
            }
        }
        pts
    }

    #[test]
    fn identity_fixes_points_eps_fixed_by_all() {
        let p = p3();
        let id = Invertible::identity(p, 2);
        for pt in all_points_up_to(p, 2) {
            assert_eq!(act_point(&id, &pt).unwrap(), pt);
        }
        for q in pgl2(p, DEFAULT_ORBIT_LIMIT).unwrap() {
            assert_eq!(act_point(&q, &ProjPoint::Eps).unwrap(), ProjPoint::Eps);
        }
    }

    #[test]
    fn swap_sends_infinity_to_x1() {
        let p = p3();
        let swap = inv2(p, [[0, 1], [1, 0]]);
        let moved = act_point(&swap, &ProjPoint::infinity(p)).unwrap();
        assert_eq!(moved, ProjPoint::Point(HomPoly::x1(p)));
    }

    #[test]
    fn right_action_law_exhaustive() {
        // act(Q1, act(Q2, g)) == act(Q2*Q1, g) over all of PGL(2, F_3) on
        // every point of degree <= 2.
        let p = p3();
        let group = pgl2(p, DEFAULT_ORBIT_LIMIT).unwrap();
        assert_eq!(group.len(), 24);
        let pts = all_points_up_to(p, 2);
        assert_eq!(pts.len(), 1 + 3 + 3);
        for q1 in &group {
            for q2 in &group {
                let prod =
                    Invertible::new(q2.matrix().mul(q1.matrix()).unwrap()).unwrap();
                for g in &pts {
                    let lhs = act_point(q1, &act_point(q2, g).unwrap()).unwrap();
                    let rhs = act_point(&prod, g).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn degree_preserved() {
        let p = p3();
        for q in pgl2(p, DEFAULT_ORBIT_LIMIT).unwrap() {
            for g in all_points_up_to(p, 2) {
                assert_eq!(act_point(&q, &g).unwrap().degree(), g.degree());
            }
        }
    }

    #[test]
    fn act_function_moves_support() {
        let p = p3();
        let mut rho = ClassFunction::new(p);
        rho.add(BlockSpec::new(ProjPoint::infinity(p), 1).unwrap(), 1);
        let swap = inv2(p, [[0, 1], [1, 0]]);
        let moved = act_function(&swap, &rho).unwrap();
        let mut expect = ClassFunction::new(p);
        expect.add(
            BlockSpec::new(ProjPoint::Point(HomPoly::x1(p)), 1).unwrap(),
            1,
        );
        assert_eq!(moved, expect);
        assert_eq!(moved.total_size(), rho.total_size());
    }

    #[test]
    fn size_preserved_randomized() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let group = pgl2(p, DEFAULT_ORBIT_LIMIT).unwrap();
        let pts = all_points_up_to(p, 2);
        for _ in 0..500 {
            let mut rho = ClassFunction::new(p);
            for _ in 0..rng.random_range(0..4usize) {
                let pt = pts[rng.random_range(0..pts.len())].clone();
                let d = rng.random_range(1..3usize);
                rho.add(BlockSpec::new(pt, d).unwrap(), rng.random_range(1..3usize));
            }
            let q = &group[rng.random_range(0..group.len())];
            assert_eq!(rho.act(q).unwrap().total_size(), rho.total_size());
        }
    }

    #[test]
    fn orbit_canonical_trivial_and_transitive_degree_one() {
        let p = p3();
        // empty function
        let zero = ClassFunction::new(p);
        assert_eq!(orbit_canonical(&zero, DEFAULT_ORBIT_LIMIT).unwrap(), zero);
        // PGL(2) is transitive on degree-1 points: (x1 - x2, 1) and (x2, 1)
        // share a canonical form.
        let x1mx2 = HomPoly::new(p, vec![2, 1]).unwrap();
        let mut a = ClassFunction::new(p);
        a.add(BlockSpec::new(ProjPoint::point(x1mx2).unwrap(), 1).unwrap(), 1);
        let mut b = ClassFunction::new(p);
        b.add(BlockSpec::new(ProjPoint::infinity(p), 1).unwrap(), 1);
        assert_eq!(
            orbit_canonical(&a, DEFAULT_ORBIT_LIMIT).unwrap(),
            orbit_canonical(&b, DEFAULT_ORBIT_LIMIT).unwrap()
        );
    }

    #[test]
    fn orbit_canonical_constant_on_orbits() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let group = pgl2(p, DEFAULT_ORBIT_LIMIT).unwrap();
        let pts = all_points_up_to(p, 2);
        for _ in 0..200 {
            let mut rho = ClassFunction::new(p);
            for _ in 0..rng.random_range(1..3usize) {
                let pt = pts[rng.random_range(0..pts.len())].clone();
                rho.add(BlockSpec::new(pt, rng.random_range(1..3usize)).unwrap(), 1);
            }
            let q = &group[rng.random_range(0..group.len())];
            let canon = orbit_canonical(&rho, DEFAULT_ORBIT_LIMIT).unwrap();
            assert_eq!(
                orbit_canonical(&rho.act(q).unwrap(), DEFAULT_ORBIT_LIMIT).unwrap(),
                canon
            );
            // idempotent
            assert_eq!(orbit_canonical(&canon, DEFAULT_ORBIT_LIMIT).unwrap(), canon);
        }
    }

    #[test]
    fn weak_canonical_of_zero_pair() {
        // The zero m x m pair is m plain eps blocks, already canonical.
        let p = p3();
        for m in 0..4usize {
            let a = crate::linalg::SkewTuple::zero(p, m, 2);
            let canon = weak_canonicalize(&a, DEFAULT_ORBIT_LIMIT).unwrap();
            let mut expect = ClassFunction::new(p);
            if m > 0 {
                expect.add(crate::pencil::BlockSpec::eps(1).unwrap(), m);
            }
            assert_eq!(canon, expect);
        }
    }

    #[test]
    fn weak_canonical_invariant_under_both_actions() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let group = crate::weakcong::gl2(p, DEFAULT_ORBIT_LIMIT).unwrap();
        for _ in 0..300 {
            let m = rng.random_range(1..=4usize);
            let mut mats = Vec::new();
            for _ in 0..2 {
                let mut a = Matrix::zeros(p, m, m);
                for i in 0..m {
                    for j in i + 1..m {
                        let v = rng.random_range(0..3);
                        a.set(i, j, v);
                        a.set(j, i, p.neg(v));
                    }
                }
                mats.push(a);
            }
            let a = crate::linalg::SkewTuple::new(p, m, mats).unwrap();
            let canon = weak_canonicalize(&a, DEFAULT_ORBIT_LIMIT).unwrap();
            let q = &group[rng.random_range(0..group.len())];
            let pm = loop {
                let cand = Matrix::from_fn(p, m, m, |_, _| rng.random_range(0..3));
                if let Ok(inv) = Invertible::new(cand) {
                    break inv;
                }
            };
            let twisted =
                crate::linalg::congr_act(&pm, &crate::linalg::tuple_act(&a, q).unwrap()).unwrap();
            assert_eq!(
                weak_canonicalize(&twisted, DEFAULT_ORBIT_LIMIT).unwrap(),
                canon
            );
        }
    }

    #[test]
    fn guard_trips_for_large_p() {
        let p = Prime::new(1009).unwrap();
        assert!(matches!(
            pgl2(p, DEFAULT_ORBIT_LIMIT),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn class_counts_small() {
        let p = p3();
        assert_eq!(count_classes(p, 1, DEFAULT_ORBIT_LIMIT).unwrap(), 1);
        assert_eq!(count_classes(p, 2, DEFAULT_ORBIT_LIMIT).unwrap(), 2);
        assert_eq!(count_classes(p, 3, DEFAULT_ORBIT_LIMIT).unwrap(), 3);
    }
}
