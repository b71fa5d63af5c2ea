//! Exact classification of pairs of skew-symmetric bilinear forms over a
//! prime field F_p up to congruence and weak congruence, together with an
//! executable model of the nilpotent groups such pairs present.
//!
//! The crate is organized around:
//! - [`gf`]: field and polynomial arithmetic,
//! - [`linalg`]: dense exact matrices, skew tuples, and the two actions,
//! - [`pencil`]: Kronecker invariants, canonical pairs, and constructive
//!   congruence transforms,
//! - [`weakcong`]: the projective-line action and weak-congruence classes,
//! - [`cohomology`]: two-cocycles on elementary tops and the skew-form
//!   correspondence,
//! - [`chernikov`]: the group model, presentations, and isomorphism
//!   decisions,
//! - [`oracle`]: brute-force orbit partitions used as ground truth,
//! - [`io`]: the JSON formats shared with the command-line front end.

pub mod chernikov;
pub mod cohomology;
pub mod error;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pencil;
pub mod weakcong;

pub use error::{Error, Result};
pub use gf::{Fp, HomPoly, Poly, Prime};
pub use linalg::{
    block_diag, congr_act, frobenius_matrix, tuple_act, Invertible, Matrix, SkewTuple,
};
pub use pencil::{
    canonical_pair, congruence_transform, dual, double, endomorphism_space, hom_char_poly,
    indecomposable, kronecker_invariants, morphism_space, skew_pair_invariants, BlockSpec,
    KroneckerData, QuiverRep,
};
pub use weakcong::{
    act_function, act_point, count_classes, enumerate_classes, gl2, orbit_canonical, pgl2,
    weak_canonicalize, ClassFunction, ProjPoint,
};
