//! Weighted simplicial complexes and their higher-order random walks.
//!
//! The crate is organized around one central object, [`WeightedComplex`]: a
//! pure simplicial complex whose top-level faces carry positive weights, with
//! the marginal distribution on every lower level derived from them. On top
//! of that it provides
//!
//! - [`operators`]: dense up/down averaging operators and the down-up,
//!   up-down, non-lazy and long composite walks, all row-stochastic and
//!   self-adjoint in the appropriate weighted inner products;
//! - [`spectral`]: weighted eigendecomposition, the link-eigenvalue profile,
//!   and numeric certificates for the eigenvalue bounds that relate global
//!   walk gaps to local link expansion (including conductance, Cheeger, and
//!   mixing-time budgets);
//! - [`builders`]: the fixed-size independent-set complex of a graph and the
//!   common-independent-set complex of two partition matroids, together with
//!   the structural checks that feed their spectral-gap guarantees;
//! - [`sampler`]: an implicit (matrix-free) down-up-walk MCMC over both
//!   families with seeded, reproducible traces and total-variation
//!   validation against exact enumeration.
//!
//! Levels are indexed by dimension `j` with `-1 <= j <= d`; the empty face is
//! the unique face at level `-1`.

pub mod builders;
pub mod complex;
pub mod operators;
pub mod random;
pub mod report;
pub mod sampler;
pub mod spectral;

pub use builders::{Graph, PartitionMatroid};
pub use complex::{Face, LinkGraph, WeightedComplex};
pub use operators::{WalkKind, WalkOperators, WeightedOperator};
pub use sampler::{ChainState, ChainTrace, SampleTarget, SamplerConfig};
pub use spectral::GammaProfile;

/// Absolute tolerances used by the invariant checks and certificates.
///
/// Everything here is stochastic with entries in `[0, 1]` and desk-scale
/// dimensions, so absolute (not relative) tolerances are used throughout.
pub mod tol {
    /// Distribution identities checked at complex build time.
    pub const BUILD: f64 = 1e-12;
    /// Row sums and self-adjointness of materialized operators.
    pub const OPERATOR: f64 = 1e-12;
    /// Eigenvalue comparisons and bound certificates.
    pub const SPECTRAL: f64 = 1e-9;
    /// Local-decomposition identity pairs evaluated on random vectors.
    pub const GARLAND: f64 = 1e-10;
}
