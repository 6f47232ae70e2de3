//! Exact computations for the connective complex K-theory of elementary
//! abelian 2-groups `V = F₂^r`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactla`]: bit-packed F₂ matrices, big-integer Smith normal form,
//!   finite abelian groups.
//! * [`polyalg`]: monomial bases of `S^n`, `Λ^a`, `Λ^a ⊗ S^b`, the odd-exponent
//!   filtration of `S`.
//! * [`milnor`]: Milnor derivations `Qᵢ`, Koszul differentials `τᵢ`, the
//!   functors `K`, `L`, `L̃`, `𝔎`, `𝔏` and the bicomplexes `B(i)`, `D(i)`.
//! * [`groupring`]: powers of the augmentation ideal of `ℤ[V]`.
//! * [`kumod`]: the graded answer tables for `HZ` and `ku`.
//! * [`localcoh`]: graded local cohomology of finitely presented modules.
//! * [`ss`]: assembly of the local cohomology spectral sequences.
//! * [`verify`]: the verification suites.
//!
//! Everything is exact: F₂ or arbitrary-precision integers. Dimensions are
//! always of functors evaluated on `F₂^r`.

pub mod exactla;
pub mod groupring;
pub mod kumod;
pub mod localcoh;
pub mod milnor;
pub mod polyalg;
pub mod ss;
pub mod verify;

pub use exactla::{
    cokernel_structure, f2_decompose, homology_dims, smith_normal_form, F2Matrix, F2Vec,
    FinAbGroup, GradedDim, GradedMap, IntMatrix,
};
pub use groupring::{FiltrationReport, GroupRingLattice};
pub use kumod::{KuCohomTable, KuHomTable, QfrakTables};
pub use localcoh::{LocalCohomologyTable, ModulePresentation, ModuleSpec};
pub use milnor::{Bicomplex, BicomplexKind, ChainComplex, SubquotientSpace};
pub use polyalg::{binomial, BasisDescriptor, ExpVec, ExtMask};
pub use ss::{AbutmentReport, SSPage};

/// Errors surfaced by the computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("composite of consecutive maps is nonzero in degree {degree}")]
    NonzeroComposite { degree: i64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("generators do not lie in the ambient lattice")]
    NotSublattice,
    #[error("local cohomology H^{cohom_degree} did not stabilize in degree {degree} (tried k up to {max_k})")]
    Stabilization { degree: i64, cohom_degree: usize, max_k: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("inconsistent spectral sequence data: {0}")]
    Inconsistent(String),
}

/// `dim p_d Ī(F^r) = Σ_{j=1}^{min(d,r)} C(r,j)`, the length-`d` piece of the
/// injective envelope of `Λ¹`. Also the dimension of `q_d P̄(F^r)`.
#[must_use]
pub fn p_dim(r: usize, d: usize) -> usize {
    (1..=d.min(r)).map(|j| binomial(r, j) as usize).sum()
}
