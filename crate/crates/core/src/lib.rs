//! Explicit resurgence of the Gamma-function normalization
//! `λ(z) = Γ(z) / (√(2π) z^(z−1/2) e^(−z))`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactseries`] exact rational series: Bernoulli numbers, the Stirling
//!   series, the `a_k` recursion, Puiseux expansions of the two roots of
//!   `q − ln q − 1 = ξ`.
//! * [`lambertw`] complex Lambert W on every branch.
//! * [`quadrature`] adaptive Gauss–Kronrod panels (rayon-parallel behind the
//!   `parallel` feature, deterministic summation either way).
//! * [`reference`] independent Γ / λ / ν oracle.
//! * [`borelplane`] minors and natural-majors on the Riemann surface of the
//!   logarithm, analytic continuation and alien operators.
//! * [`laplace`] directional, Hankel and real-major Laplace transforms.
//! * [`realmajor`] the `Q`-integral real-major and its continuation.

pub mod borelplane;
pub mod cli;
pub mod exactseries;
pub mod lambertw;
pub mod laplace;
pub mod quadrature;
pub mod realmajor;
pub mod records;
pub mod reference;
pub mod surface;
pub mod verify;

pub use num_complex::Complex64;
pub use surface::SurfacePoint;
