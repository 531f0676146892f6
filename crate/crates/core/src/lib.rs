//! Pluricomplex Green functions with singularities along complex subspaces
//! cut out by polynomial generator tuples.
//!
//! The library computes and certifies values of the Green function `G_A` of
//! an ideal `A = (psi_1, ..., psi_m)` on the unit polydisc or ball:
//!
//! * exact one-dimensional theory on the disc (Green kernel, weighted pole
//!   sums, Blaschke/Poisson-Jensen checks) in [`green1d`];
//! * the analytic-disc functional and its envelope optimization, which
//!   produce certified upper bounds with witness discs, in [`disc`] and
//!   [`envelope`];
//! * closed-form model oracles, the product property, and proper-map
//!   pushforward/pullback operators in [`models`];
//! * numerical membership checks (negativity, plurisubharmonicity, the
//!   uniform `log|psi|` bound) and radial Lelong numbers in [`verify`];
//! * randomized generator reduction with empirical equivalence reports in
//!   [`ideal`].

pub mod disc;
pub mod envelope;
pub mod error;
pub mod green1d;
pub mod grid;
pub mod ideal;
pub mod models;
pub mod poly;
pub mod roots;
pub mod sampling;
pub mod simplex;
pub mod value;
pub mod verify;

pub use disc::{compose_with_disc, AnalyticDisc, EstimateKind, GreenEstimate, Witness};
pub use envelope::{optimize_envelope, EnvelopeOptions};
pub use error::{CoreError, Result};
pub use green1d::{PoissonJensen, WeightedZeroSet};
pub use grid::{CoordRange, GridSpec};
pub use ideal::{DomainKind, DomainSpec, IdealSpec, ProbeSpec, ProperMapSpec, ReduceReport};
pub use models::{match_model, ModelId};
pub use poly::{MultiPoly, UniPoly, VanishingOrder};
pub use value::GreenValue;
pub use verify::{FunctionHandle, LelongReport};
