//! Finite-section operator geometry for subspaces `φH²` of `L²` of the circle.
//!
//! Symbols are built from structural pieces (characters, Blaschke products,
//! atomic singular inner functions, exponentials, outer functions and raw
//! Fourier series). From them the crate assembles Toeplitz, Hankel and
//! multiplication sections, decides whether two subspaces are joined by a
//! geodesic of the Grassmann manifold, builds the geodesic exponent, and
//! classifies subspaces into components of the restricted Grassmannian.

pub mod circle_fourier;
pub mod cli;
pub mod config;
pub mod error;
pub mod index_classify;
pub mod linalg;
pub mod report;
pub mod symbols;
pub mod testgen;
pub mod toeplitz_ops;
pub mod two_projections;

pub use circle_fourier::{GridSamples, TrigSeries};
pub use config::{Discretization, Tolerances};
pub use error::{HgeoError, Result};
pub use linalg::{cx, CMat, Cx, SchattenP};
pub use symbols::{parse_symbol, SymbolExpr};
