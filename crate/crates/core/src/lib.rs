//! Numerical laboratory for scalar quantum fields on two-dimensional
//! de Sitter space: the one-particle space over the Cauchy circle, the
//! unitary SO₀(1,2) representation, modular localization of real
//! subspaces, finite speed of light, and the truncated interacting Fock
//! dynamics L = L₀ + V.
//!
//! Layout follows the objects, bottom up:
//!
//! * [`specfun`] — complex Γ, the Legendre function of complex degree,
//!   model parameters (ζ, r) → (ν, s±, c_ν);
//! * [`geometry`] — exact hyperboloid causal geometry: rotations, boosts,
//!   wedges, double cones, causal shadows on the Cauchy circle;
//! * [`oneparticle`] — spectral weights ω̃(k), the inner product
//!   ⟨h, (2ω)⁻¹h′⟩, the position-space kernel c_ν P_{s⁺}(−cos θ) with its
//!   Fourier cross-check, Sobolev multiplier bounds, Cauchy-data packing;
//! * [`representation`] — rotation, boost and reflection operators on the
//!   truncated space, so(1,2) structure-constant verification;
//! * [`modloc`] — real subspaces, symplectic complements, Tomita
//!   residuals, wedge duality, microcausality, additivity, standardness,
//!   finite speed of light;
//! * [`fock`] — truncated bosonic Fock layer: fields, coherent vectors,
//!   second quantization, normal ordering, the interacting generator;
//! * [`xprec`] — extended-precision (≥ 50 digit) path for the full-vector
//!   modular residual at small cutoff.

pub mod error;
pub mod fock;
pub mod geometry;
pub mod modloc;



pub mod oneparticle;
pub mod quadrature;
pub mod representation;

pub mod specfun;
pub mod xprec;


pub use error::{Error, Result};
