//! Exact homology of ample groupoids attached to commuting integer matrices:
//! k-graph groupoids, through Evans' complex, and Deaconu–Renault groupoids
//! of `ℤ^k` actions on finite sets, plus the K-theory that homology
//! determines in ranks 1 and 2.
//!
//! The linear algebra and the Koszul engine are generic over the integer
//! type (see [`Scalar`]); the aliases below fix it to [`BigInt`], which is
//! what the graph-level APIs use.

pub mod abelian;
pub mod dr_finite;
pub mod kgraph;
pub mod koszul;
pub mod linalg;
pub mod scalar;

pub use num_bigint::BigInt;

pub use abelian::{kunneth, FgAbGroup, HomologyProfile};
pub use dr_finite::{orbit_oracle, ActionError, ZkAction};
pub use kgraph::{
    cubical_homology_rank1, groupoid_homology, hk_report, ktheory, product,
    single_vertex_closed_form, Finding, HkReport, HkStatus, KGraphError, KGraphSkeleton,
    KTheoryMethod, KTheoryResult,
};
pub use koszul::{Koszul, KoszulError};
pub use linalg::{LinalgError, Matrix, Smith, SmithStats};
pub use scalar::Scalar;

/// Arbitrary-precision integer matrix.
pub type IntMatrix = Matrix<BigInt>;
/// Smith normal form over arbitrary-precision integers.
pub type SnfResult = Smith<BigInt>;
pub type KoszulComplex = Koszul<BigInt>;

/// Machine-word variants; arithmetic panics on overflow.
pub type IntMatrix64 = Matrix<i64>;
pub type KoszulComplex64 = Koszul<i64>;
