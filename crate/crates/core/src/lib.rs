//! Numerical construction and verification of an electromagnetic wormhole device.
//!
//! The library builds, at desk scale, the three objects the device rests on:
//!
//! * the abstract wormhole manifold `M = M₁ # M₂` — Euclidean space with two
//!   flattened balls removed, glued to a handle `S²_flat × [-1, L+1]`;
//! * the device region `N = ℝ³ ∖ K` around a thick-walled tube `K`, together
//!   with the singular deformation map `F : M ∖ γ → N`;
//! * the material tensors `ε̃ = μ̃ = det(g̃)^{1/2} g̃^{jk}` obtained by pushing
//!   the manifold metric through `F`, singular on the cloaking surface `Σ = ∂K`.
//!
//! Everything the equivalence between `(M, ε, μ)` and `(N, ε̃, μ̃)` relies on —
//! Jacobian structure, singular-value scaling, boundary-normal length elements,
//! SH trace decay, finite collar energies, geodesic equivalence under `F` — is
//! exposed as a computable check; `verify` drives the whole suite.

pub mod deformation;
pub mod error;
pub mod export;
pub mod forms;
pub mod geometry;
pub mod materials;
pub mod par;
pub mod raytrace;
pub mod verify;

pub use deformation::DeformationMap;
pub use error::CoreError;
pub use geometry::{CylCoords, HandleCoords, ManifoldPoint, WormholeParams};
