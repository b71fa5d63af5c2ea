//! Brute-force ground truth for tiny parameters: exhaustive orbit
//! partitions of all skew pairs under congruence and weak congruence,
//! computed by union-find over generator moves. These are the reference
//! partitions the classification code is validated against.

use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::linalg::{congr_act, tuple_act, Invertible, Matrix, SkewTuple};

/// Guard on the enumerated space: p^(m(m-1)) states.
pub const DEFAULT_SPACE_LIMIT: u128 = 10_000_000;
/// Guard on |GL(m, p)| for the congruence moves.
pub const DEFAULT_GROUP_LIMIT: u128 = 1_000_000;

/// A partition of the full space of skew pairs into orbits. Orbits hold
/// the dense indices of their members, sorted; orbits are sorted by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub p: u64,
    pub m: usize,
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn total(&self) -> usize {
        self.orbits.iter().map(Vec::len).sum()
    }

    /// Index of the orbit containing a state.
    pub fn orbit_of(&self, index: usize) -> Option<usize> {
        self.orbits
            .iter()
            .position(|orbit| orbit.binary_search(&index).is_ok())
    }

    /// One representative pair per orbit, smallest index first.
    pub fn representatives(&self, prime: Prime) -> Vec<SkewTuple> {
        self.orbits
            .iter()
            .map(|orbit| pair_from_index(prime, self.m, orbit[0]))
            .collect()
    }

    /// Summary for golden files: orbit count plus one representative each.
    pub fn summary_json(&self, prime: Prime) -> serde_json::Value {
        let reps: Vec<serde_json::Value> = self
            .representatives(prime)
            .iter()
            .map(crate::io::skew_tuple_to_json)
            .collect();
        serde_json::json!({
            "p": self.p,
            "m": self.m,
            "orbit_count": self.orbit_count(),
            "orbit_sizes": self.orbits.iter().map(Vec::len).collect::<Vec<_>>(),
            "representatives": reps,
        })
    }
}

fn free_entries(m: usize) -> usize {
    m * (m - 1) / 2
}

fn space_size(p: Prime, m: usize) -> u128 {
    (p.get() as u128).pow((2 * free_entries(m)) as u32)
}

/// Dense index of a pair: the strict upper triangles of both matrices as
/// base-p digits, first matrix least significant, entries in row-major
/// order of the upper triangle.
pub fn pair_index(a: &SkewTuple) -> usize {
    let p = a.modulus().get() as usize;
    let m = a.size();
    let mut idx = 0usize;
    for t in (0..2).rev() {
        for i in (0..m).rev() {
            for j in (i + 1..m).rev() {
                idx = idx * p + a.mat(t).get(i, j) as usize;
            }
        }
    }
    idx
}

/// Inverse of `pair_index`.
pub fn pair_from_index(p: Prime, m: usize, mut idx: usize) -> SkewTuple {
    let base = p.get() as usize;
    let mut mats = Vec::with_capacity(2);
    for _ in 0..2 {
        let mut a = Matrix::zeros(p, m, m);
        for i in 0..m {
            for j in i + 1..m {
                let v = (idx % base) as u64;
                idx /= base;
                a.set(i, j, v);
                a.set(j, i, p.neg(v));
            }
        }
        mats.push(a);
    }
    SkewTuple::new(p, m, mats).expect("skew by construction")
}

/// Every valid skew pair of size m, exactly once, in index order.
pub fn all_skew_pairs(p: Prime, m: usize, limit: u128) -> Result<Vec<SkewTuple>> {
    let needed = space_size(p, m);
    if needed > limit {
        return Err(Error::ResourceGuard { needed, limit });
    }
    Ok((0..needed as usize)
        .map(|idx| pair_from_index(p, m, idx))
        .collect())
}

fn gl_order(p: Prime, m: usize) -> u128 {
    let q = p.get() as u128;
    let qm = q.pow(m as u32);
    (0..m as u32).map(|i| qm - q.pow(i)).product()
}

/// Generators of GL(m, p): all transvections I + c E_ij (i != j, c != 0)
/// plus the dilation diag(g, 1, ..., 1) for a generator g of F_p^*.
fn gl_generators(p: Prime, m: usize) -> Vec<Invertible> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for c in 1..p.get() {
                let mut t = Matrix::identity(p, m);
                t.set(i, j, c);
                out.push(Invertible::new(t).expect("transvection invertible"));
            }
        }
    }
    if let Some(g) = primitive_element(p) {
        let mut d = Matrix::identity(p, m);
        d.set(0, 0, g);
        out.push(Invertible::new(d).expect("dilation invertible"));
    }
    out
}

fn primitive_element(p: Prime) -> Option<u64> {
    let n = p.get();
    if n == 2 {
        return None;
    }
    (2..n).find(|&g| {
        let mut seen = 1u64;
        let mut acc = g;
        while acc != 1 {
            acc = p.mul(acc, g);
            seen += 1;
        }
        seen == n - 1
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn orbits(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut buckets: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..n {
            let r = self.find(x);
            buckets.entry(r).or_default().push(x);
        }
        buckets.into_values().collect()
    }
}

fn partition_with_moves(
    p: Prime,
    m: usize,
    congruence_moves: &[Invertible],
    recombination_moves: &[Invertible],
    limit: u128,
) -> Result<OrbitPartition> {
    let needed = space_size(p, m);
    if needed > limit {
        return Err(Error::ResourceGuard { needed, limit });
    }
    let total = needed as usize;
    let mut uf = UnionFind::new(total);
    for idx in 0..total {
        let a = pair_from_index(p, m, idx);
        for g in congruence_moves {
            let moved = congr_act(g, &a).expect("dimensions match");
            uf.union(idx, pair_index(&moved));
        }
        for q in recombination_moves {
            let moved = tuple_act(&a, q).expect("dimensions match");
            uf.union(idx, pair_index(&moved));
        }
    }
    let orbits = uf.orbits();
    Ok(OrbitPartition {
        p: p.get(),
        m,
        orbits,
    })
}

/// Orbits of all skew pairs under congruence by GL(m, p).
pub fn brute_congruence_partition(
    p: Prime,
    m: usize,
    space_limit: u128,
    group_limit: u128,
) -> Result<OrbitPartition> {
    let order = gl_order(p, m);
    if order > group_limit {
        return Err(Error::ResourceGuard {
            needed: order,
            limit: group_limit,
        });
    }
    partition_with_moves(p, m, &gl_generators(p, m), &[], space_limit)
}

/// Orbits of all skew pairs under congruence combined with recombination
/// by GL(2, p).
pub fn brute_weak_partition(
    p: Prime,
    m: usize,
    space_limit: u128,
    group_limit: u128,
) -> Result<OrbitPartition> {
    let order = gl_order(p, m) * gl_order(p, 2);
    if order > group_limit {
        return Err(Error::ResourceGuard {
            needed: order,
            limit: group_limit,
        });
    }
    let recomb = crate::weakcong::gl2(p, group_limit)?;
    partition_with_moves(p, m, &gl_generators(p, m), &recomb, space_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn space_sizes() {
        assert_eq!(all_skew_pairs(p3(), 2, DEFAULT_SPACE_LIMIT).unwrap().len(), 9);
        assert_eq!(
            all_skew_pairs(p3(), 3, DEFAULT_SPACE_LIMIT).unwrap().len(),
            729
        );
        assert_eq!(
            all_skew_pairs(Prime::new(5).unwrap(), 2, DEFAULT_SPACE_LIMIT)
                .unwrap()
                .len(),
            25
        );
    }

    #[test]
    fn index_roundtrip() {
        for (idx, pair) in all_skew_pairs(p3(), 3, DEFAULT_SPACE_LIMIT)
            .unwrap()
            .iter()
            .enumerate()
        {
            assert_eq!(pair_index(pair), idx);
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(
            all_skew_pairs(p3(), 6, DEFAULT_SPACE_LIMIT),
            Err(Error::ResourceGuard { .. })
        ));
        assert!(matches!(
            brute_congruence_partition(p3(), 5, u128::MAX, DEFAULT_GROUP_LIMIT),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn m1_partitions_trivial() {
        let part = brute_congruence_partition(p3(), 1, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT)
            .unwrap();
        assert_eq!(part.orbit_count(), 1);
        let weak =
            brute_weak_partition(p3(), 1, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        assert_eq!(weak.orbit_count(), 1);
    }

    #[test]
    fn weak_orbit_counts_small() {
        let w2 = brute_weak_partition(p3(), 2, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        assert_eq!(w2.orbit_count(), 2);
        let w3 = brute_weak_partition(p3(), 3, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        assert_eq!(w3.orbit_count(), 3);
    }

    #[test]
    fn summary_dump_shape() {
        let part =
            brute_weak_partition(p3(), 2, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        let json = part.summary_json(p3());
        assert_eq!(json["orbit_count"], 2);
        assert_eq!(json["representatives"].as_array().unwrap().len(), 2);
        assert_eq!(json["orbit_sizes"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn congruence_refines_weak_and_sizes_divide_group_order() {
        let p = p3();
        let m = 3;
        let cong =
            brute_congruence_partition(p, m, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        let weak = brute_weak_partition(p, m, DEFAULT_SPACE_LIMIT, DEFAULT_GROUP_LIMIT).unwrap();
        assert_eq!(cong.total(), 729);
        assert_eq!(weak.total(), 729);
        // refinement: every congruence orbit lies inside one weak orbit
        for orbit in &cong.orbits {
            let target = weak.orbit_of(orbit[0]).unwrap();
            for &x in orbit {
                assert_eq!(weak.orbit_of(x), Some(target));
            }
        }
        // orbit sizes divide the order of the acting group
        let order = gl_order(p, m);
        for orbit in &cong.orbits {
            assert_eq!(order % orbit.len() as u128, 0);
        }
    }
}
