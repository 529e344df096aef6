//! Discrete exterior calculus on a 4-dimensional cubical double complex,
//! with the discrete Dirac-Kähler operator and its chirality structure.
//!
//! The model lives on a finite lattice of hypercubes. Two identical copies
//! of the cochain complex (the "plain" and "tilde" copies) are linked by a
//! combinatorial star map, which makes a genuinely involutive Hodge star
//! possible while keeping the Lorentz signature: the star sign of a channel
//! is negative exactly when the channel carries an edge along axis 0 (time).
//!
//! Layout:
//! - [`lattice`]: lattice geometry, direction sets and the sign tables.
//! - [`chain`]: sparse chains, the boundary operator, the chain-level star,
//!   the volume double chain and the chain-cochain pairing.
//! - [`form`]: dense complex cochains (discrete forms) and seeded random
//!   form generation.
//! - [`calculus`]: coboundary, cup product, Hodge star, codifferential,
//!   Lorentz inner product, Laplacian and the Green-formula residual.
//! - [`dirac_kahler`]: the operator `i(d + δ)`, the modified star playing
//!   the role of γ⁵, and self-dual / anti-self-dual projections.
//! - [`spectral`]: explicit matrix assembly on periodic lattices, Fourier
//!   symbols, kernels, spectra and the chirality certifications.
//!
//! All core types are generic over the real scalar via [`Scalar`];
//! `*64` / `*32` aliases are exported at the crate root. The dense solver
//! paths in [`spectral`] are `f64` only.

pub mod calculus;
pub mod chain;
pub mod dirac_kahler;
pub mod error;
pub mod form;
pub mod lattice;
pub mod scalar;
pub mod spectral;

pub use error::Error;
pub use lattice::{BoundaryMode, DirectionSet, LatticeSpec, SiteIndex};
pub use scalar::Scalar;

/// Double-precision forms; the default throughout the solver paths.
pub type Form64 = form::Form<f64>;
pub type InhomogeneousForm64 = form::InhomogeneousForm<f64>;
pub type Chain64 = chain::Chain<f64>;
pub type DoubleChain64 = chain::DoubleChain<f64>;

/// Single-precision variants, for callers that trade accuracy for memory.
pub type Form32 = form::Form<f32>;
pub type InhomogeneousForm32 = form::InhomogeneousForm<f32>;
pub type Chain32 = chain::Chain<f32>;
pub type DoubleChain32 = chain::DoubleChain<f32>;

pub type Result<T> = std::result::Result<T, Error>;
