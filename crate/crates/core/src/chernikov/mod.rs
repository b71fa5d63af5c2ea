//! Executable model of the nilpotent groups presented by a tuple of skew
//! forms: quasi-cyclic bottoms, cocycle-twisted addition, commutators,
//! presentations, and the isomorphism decision through weak congruence.

mod presentation;

pub use presentation::{
    build_presentation, presentation_n1, verify_presentation, Presentation, Relation,
    VerifyReport,
};

use crate::cohomology::{coboundary, solve_coboundary, SkewForm, TopVector};
use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::linalg::{Invertible, SkewTuple};
use crate::weakcong::{weak_canonicalize, DEFAULT_ORBIT_LIMIT};

/// An element a / p^k of the quasi-cyclic group Z(p^inf), normalized so
/// that 0 <= a < p^k and p does not divide a unless the element is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PruferElem {
    p: Prime,
    num: u64,
    exp: u32,
}

impl PruferElem {
    pub fn new(p: Prime, num: u64, exp: u32) -> Result<Self> {
        let modulus = p
            .get()
            .checked_pow(exp)
            .ok_or_else(|| Error::Validation("exponent overflow".into()))?;
        Ok(Self::reduce(p, num % modulus, exp))
    }

    fn reduce(p: Prime, mut num: u64, mut exp: u32) -> Self {
        if num == 0 {
            return PruferElem { p, num: 0, exp: 0 };
        }
        while exp > 0 && num % p.get() == 0 {
            num /= p.get();
            exp -= 1;
        }
        if exp == 0 {
            num = 0;
        }
        PruferElem { p, num, exp }
    }

    pub fn zero(p: Prime) -> Self {
        PruferElem { p, num: 0, exp: 0 }
    }

    /// The generator a_i of order p: the fraction 1/p.
    pub fn unit(p: Prime) -> Self {
        PruferElem { p, num: 1, exp: 1 }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.exp == 0
    }

    pub fn add(self, rhs: PruferElem) -> PruferElem {
        let p = self.p;
        let exp = self.exp.max(rhs.exp);
        let modulus = p.get().pow(exp);
        let a = self.num * p.get().pow(exp - self.exp);
        let b = rhs.num * p.get().pow(exp - rhs.exp);
        PruferElem::reduce(p, (a + b) % modulus, exp)
    }

    pub fn neg(self) -> PruferElem {
        if self.is_zero() {
            self
        } else {
            PruferElem {
                p: self.p,
                num: self.p.get().pow(self.exp) - self.num,
                exp: self.exp,
            }
        }
    }

    /// Multiply by an integer scalar (the lift of a residue).
    pub fn scale(self, c: u64) -> PruferElem {
        if self.is_zero() {
            return self;
        }
        let modulus = self.p.get().pow(self.exp);
        PruferElem::reduce(self.p, (self.num * (c % modulus)) % modulus, self.exp)
    }

    /// Order as a power of p: p^exp.
    pub fn order(self) -> u128 {
        (self.p.get() as u128).pow(self.exp)
    }
}

/// An element of the bottom M^(n): one Prufer fraction per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PruferVector {
    p: Prime,
    comps: Vec<PruferElem>,
}

impl PruferVector {
    pub fn zero(p: Prime, n: usize) -> Self {
        PruferVector {
            p,
            comps: vec![PruferElem::zero(p); n],
        }
    }

    pub fn new(p: Prime, comps: Vec<PruferElem>) -> Self {
        PruferVector { p, comps }
    }

    /// Embed a residue vector through the order-p units: value c at
    /// coordinate i becomes c/p.
    pub fn from_residues(p: Prime, values: &[u64]) -> Self {
        PruferVector {
            p,
            comps: values
                .iter()
                .map(|&c| PruferElem::unit(p).scale(c))
                .collect(),
        }
    }

    pub fn comps(&self) -> &[PruferElem] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &PruferVector) -> PruferVector {
        PruferVector {
            p: self.p,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(&a, &b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> PruferVector {
        PruferVector {
            p: self.p,
            comps: self.comps.iter().map(|&a| a.neg()).collect(),
        }
    }
}

/// A group element: a bottom vector plus a top coordinate vector for the
/// chosen representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub bottom: PruferVector,
    pub top: TopVector,
}

/// Order of an element: always a power of p here; the unbounded marker is
/// part of the contract but never produced by this model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u128),
    Unbounded,
}

/// The group G(A) defined by a tuple of skew forms: bottom M^(n), top
/// H_m, addition twisted by the standard cocycle of the form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupModel {
    form: SkewForm,
}

impl GroupModel {
    pub fn new(tuple: SkewTuple) -> Result<Self> {
        tuple.modulus().require_odd()?;
        Ok(GroupModel {
            form: SkewForm(tuple),
        })
    }

    pub fn modulus(&self) -> Prime {
        self.form.modulus()
    }

    /// Number of top generators m.
    pub fn top_rank(&self) -> usize {
        self.form.top_rank()
    }

    /// Number of quasi-cyclic bottom summands n.
    pub fn bottom_rank(&self) -> usize {
        self.form.bottom_rank()
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            bottom: PruferVector::zero(self.modulus(), self.bottom_rank()),
            top: TopVector::zero(self.modulus(), self.top_rank()),
        }
    }

    /// The representative of top generator i.
    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement {
            bottom: PruferVector::zero(self.modulus(), self.bottom_rank()),
            top: TopVector::basis(self.modulus(), self.top_rank(), i),
        }
    }

    /// The bottom unit a_i of order p.
    pub fn bottom_unit(&self, i: usize) -> GroupElement {
        let mut values = vec![0u64; self.bottom_rank()];
        values[i] = 1;
        GroupElement {
            bottom: PruferVector::from_residues(self.modulus(), &values),
            top: TopVector::zero(self.modulus(), self.top_rank()),
        }
    }

    pub fn element(&self, bottom: PruferVector, top: TopVector) -> Result<GroupElement> {
        if bottom.len() != self.bottom_rank() || top.len() != self.top_rank() {
            return Err(Error::Dimension("element does not fit the model".into()));
        }
        Ok(GroupElement { bottom, top })
    }

    fn check(&self, u: &GroupElement) -> Result<()> {
        if u.bottom.len() != self.bottom_rank() || u.top.len() != self.top_rank() {
            return Err(Error::Dimension("element from a different model".into()));
        }
        Ok(())
    }

    /// Twisted addition: (b1, h1) + (b2, h2)
    /// = (b1 + b2 + mu(h1, h2), h1 + h2).
    pub fn add(&self, u: &GroupElement, v: &GroupElement) -> Result<GroupElement> {
        self.check(u)?;
        self.check(v)?;
        let twist = PruferVector::from_residues(self.modulus(), &self.form.mu(&u.top, &v.top));
        Ok(GroupElement {
            bottom: u.bottom.add(&v.bottom).add(&twist),
            top: u.top.add(&v.top),
        })
    }

    pub fn neg(&self, u: &GroupElement) -> Result<GroupElement> {
        self.check(u)?;
        // -(b, h) = (-b - mu(-h, h)... solved directly: the inverse has top
        // -h and bottom fixed by (b,h) + inv = 0.
        let twist = PruferVector::from_residues(
            self.modulus(),
            &self.form.mu(&u.top, &u.top.neg()),
        );
        Ok(GroupElement {
            bottom: u.bottom.neg().add(&twist.neg()),
            top: u.top.neg(),
        })
    }

    pub fn commutator(&self, u: &GroupElement, v: &GroupElement) -> Result<GroupElement> {
        let s = self.add(u, v)?;
        let minus = self.add(&self.neg(u)?, &self.neg(v)?)?;
        self.add(&s, &minus)
    }

    /// Least k > 0 with k * u = 0, computed along the p-power chain:
    /// every order here is a power of p.
    pub fn element_order(&self, u: &GroupElement) -> Result<ElementOrder> {
        self.check(u)?;
        let zero = self.zero();
        let mut current = u.clone();
        let mut order: u128 = 1;
        // bound: bottom exponents + 1 extra p for the top
        let bound = u
            .bottom
            .comps()
            .iter()
            .map(|c| c.exponent())
            .max()
            .unwrap_or(0)
            + 2;
        for _ in 0..=bound {
            if current == zero {
                return Ok(ElementOrder::Finite(order));
            }
            // current := p * current
            let mut acc = current.clone();
            for _ in 1..self.modulus().get() {
                acc = self.add(&acc, &current)?;
            }
            current = acc;
            order *= self.modulus().get() as u128;
        }
        // unreachable for this model; kept so the contract stays total
        Ok(ElementOrder::Unbounded)
    }

    /// Scalar multiple k * u by repeated addition.
    pub fn multiple(&self, u: &GroupElement, k: u64) -> Result<GroupElement> {
        let mut acc = self.zero();
        for _ in 0..k {
            acc = self.add(&acc, u)?;
        }
        Ok(acc)
    }
}

/// Two tuples present isomorphic groups exactly when they are weakly
/// congruent: compare canonical class functions. Sizes may differ; the
/// class functions then differ too.
pub fn decide_isomorphic(a: &SkewTuple, b: &SkewTuple) -> Result<bool> {
    decide_isomorphic_with_limit(a, b, DEFAULT_ORBIT_LIMIT)
}

pub fn decide_isomorphic_with_limit(a: &SkewTuple, b: &SkewTuple, limit: u128) -> Result<bool> {
    a.modulus().same_as(b.modulus())?;
    a.modulus().require_odd()?;
    Ok(weak_canonicalize(a, limit)? == weak_canonicalize(b, limit)?)
}

/// Search for an explicit weak-congruence certificate (P, Q) with
/// `b = congr_act(P, tuple_act(a, Q))`: sweep Q over GL(2, p), match
/// invariants, and compose the two congruence transforms. `None` when the
/// tuples are not weakly congruent.
pub fn weak_congruence_certificate(
    a: &SkewTuple,
    b: &SkewTuple,
    limit: u128,
) -> Result<Option<(Invertible, Invertible)>> {
    use crate::linalg::{congr_act, tuple_act};
    use crate::pencil::{congruence_transform, skew_pair_invariants};
    a.modulus().same_as(b.modulus())?;
    a.modulus().require_odd()?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let rho_b = skew_pair_invariants(b)?;
    let (pb, _) = congruence_transform(b)?;
    for q in crate::weakcong::gl2(a.modulus(), limit)? {
        let twisted = tuple_act(a, &q)?;
        if skew_pair_invariants(&twisted)? != rho_b {
            continue;
        }
        let (pa, _) = congruence_transform(&twisted)?;
        // pa (A*Q) pa^T = C = pb B pb^T, so P = pb^{-1} pa.
        let p_mat = Invertible::new(pb.inverse().mul(pa.matrix())?)?;
        if &congr_act(&p_mat, &twisted)? == b {
            return Ok(Some((p_mat, q)));
        }
    }
    Ok(None)
}

/// An explicit isomorphism G -> F built from a certificate (P, Qbar):
/// the top map is x -> P x, the bottom map lifts Qbar entrywise to integer
/// scalars acting on Prufer fractions, and a correction gamma repairs the
/// representative choice. Requires P^T F_k P = sum_l Qbar[k][l] G_l.
#[derive(Debug, Clone)]
pub struct IsoMap {
    theta: Invertible,
    sigma: Invertible,
    gamma: Vec<Vec<u64>>,
}

pub fn isomorphism_map(
    g: &GroupModel,
    f: &GroupModel,
    p_mat: &Invertible,
    q_bar: &Invertible,
) -> Result<IsoMap> {
    let p = g.modulus();
    p.same_as(f.modulus())?;
    let m = g.top_rank();
    let n = g.bottom_rank();
    if f.top_rank() != m || f.bottom_rank() != n {
        return Err(Error::InvalidCertificate("rank mismatch".into()));
    }
    if p_mat.size() != m || q_bar.size() != n {
        return Err(Error::InvalidCertificate("certificate size mismatch".into()));
    }
    // P^T F_k P must equal sum_l Qbar[k][l] G_l for every k.
    let pt = p_mat.matrix().transpose();
    for k in 0..n {
        let lhs = pt.mul(f.form().0.mat(k))?.mul(p_mat.matrix())?;
        let mut rhs = crate::linalg::Matrix::zeros(p, m, m);
        for l in 0..n {
            let c = q_bar.matrix().get(k, l);
            if c != 0 {
                rhs = rhs.add(&g.form().0.mat(l).scale(c))?;
            }
        }
        if lhs != rhs {
            return Err(Error::InvalidCertificate(format!(
                "form transport fails at coordinate {k}"
            )));
        }
    }
    // Correction: delta(x, y) = sigma(mu_G(x, y)) - mu_F(theta x, theta y)
    // is a symmetric normalized cocycle, hence a coboundary; solve for it.
    let size = (p.get() as usize).pow(m as u32);
    let mut delta = crate::cohomology::Cocycle::zero(p, m, n)?;
    for x in 0..size {
        let xv = TopVector::from_index(p, m, x);
        let txv = TopVector::new(p, p_mat.matrix().apply(xv.coords())?);
        for y in 0..size {
            let yv = TopVector::from_index(p, m, y);
            let tyv = TopVector::new(p, p_mat.matrix().apply(yv.coords())?);
            let mg = g.form().mu(&xv, &yv);
            let sigma_mg: Vec<u64> = (0..n)
                .map(|k| {
                    let mut acc = 0u64;
                    for (l, &v) in mg.iter().enumerate() {
                        acc = p.add(acc, p.mul(q_bar.matrix().get(k, l), v));
                    }
                    acc
                })
                .collect();
            let mf = f.form().mu(&txv, &tyv);
            let value: Vec<u64> = (0..n).map(|k| p.sub(sigma_mg[k], mf[k])).collect();
            delta.set(x, y, &value);
        }
    }
    let gamma = solve_coboundary(&delta).ok_or_else(|| {
        Error::Internal("representative correction is not a coboundary".into())
    })?;
    debug_assert_eq!(coboundary(p, m, n, &gamma).unwrap(), delta);
    Ok(IsoMap {
        theta: p_mat.clone(),
        sigma: q_bar.clone(),
        gamma,
    })
}

impl IsoMap {
    /// Apply: (b, h) -> (sigma(b) + gamma(h), theta(h)).
    pub fn apply(&self, g: &GroupModel, u: &GroupElement) -> Result<GroupElement> {
        let p = g.modulus();
        let n = g.bottom_rank();
        let mut comps = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = PruferElem::zero(p);
            for l in 0..n {
                acc = acc.add(u.bottom.comps()[l].scale(self.sigma.matrix().get(k, l)));
            }
            comps.push(acc);
        }
        let correction =
            PruferVector::from_residues(p, &self.gamma[u.top.index()]);
        let bottom = PruferVector::new(p, comps).add(&correction);
        let top = TopVector::new(p, self.theta.matrix().apply(u.top.coords())?);
        Ok(GroupElement { bottom, top })
    }

    /// Exhaustively verify the homomorphism property on all pairs of
    /// elements with bottom exponent at most `max_exp`.
    pub fn verify_hom(
        &self,
        g: &GroupModel,
        f: &GroupModel,
        max_exp: u32,
    ) -> Result<bool> {
        let elements = bounded_elements(g, max_exp);
        for u in &elements {
            for v in &elements {
                let lhs = self.apply(g, &g.add(u, v)?)?;
                let rhs = f.add(&self.apply(g, u)?, &self.apply(g, v)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// All elements whose bottom coordinates have exponent at most `max_exp`.
pub fn bounded_elements(g: &GroupModel, max_exp: u32) -> Vec<GroupElement> {
    let p = g.modulus();
    let n = g.bottom_rank();
    let m = g.top_rank();
    let bottom_range = p.get().pow(max_exp);
    let tops = (p.get() as usize).pow(m as u32);
    let bottoms = (bottom_range as usize).pow(n as u32);
    let mut out = Vec::with_capacity(tops * bottoms);
    for b in 0..bottoms {
        let mut idx = b as u64;
        let comps: Vec<PruferElem> = (0..n)
            .map(|_| {
                let num = idx % bottom_range;
                idx /= bottom_range;
                PruferElem::new(p, num, max_exp).unwrap()
            })
            .collect();
        for t in 0..tops {
            out.push(GroupElement {
                bottom: PruferVector::new(p, comps.clone()),
                top: TopVector::from_index(p, m, t),
            });
        }
    }
    out
}

/// Finite-factor data of a class function: the count of plain order-p
/// generators (eps blocks of exponent 1), the remaining function, and the
/// decomposable-product shape (k, l) when the remainder is supported on
/// the two linear points x1 and x2 with exponent 1.
pub fn finite_factor_split(
    rho: &crate::weakcong::ClassFunction,
) -> (usize, crate::weakcong::ClassFunction, Option<(usize, usize)>) {
    use crate::pencil::BlockSpec;
    use crate::weakcong::ProjPoint;
    let p = rho.modulus();
    let mut rest = rho.clone();
    let k_finite = rest.remove(&BlockSpec::eps(1).expect("valid spec"));
    let x1 = BlockSpec::new(
        ProjPoint::point(crate::gf::HomPoly::x1(p)).expect("x1 is a point"),
        1,
    )
    .expect("valid spec");
    let x2 = BlockSpec::new(ProjPoint::infinity(p), 1).expect("valid spec");
    let special = if !rest.is_empty()
        && rest.iter().all(|(s, _)| *s == x1 || *s == x2)
    {
        Some((rest.get(&x1), rest.get(&x2)))
    } else {
        None
    };
    (k_finite, rest, special)
}
