//! Parallel transport of Quillen superconnections along superpaths.
//!
//! A Quillen superconnection on a Z/2-graded bundle `E` over a chart `M ⊆ ℝⁿ`
//! is an odd operator `A = A0 + A1 + A2 + ...` mixing form degrees. This crate
//! computes the parallel transport operator `T(t,θ) = T0(t) + θ·T1(t)` along
//! superpaths `x(t) + θη(t)` in two ways:
//!
//! * [`transport::transport_split`] — split the superconnection into a
//!   connection plus an endomorphism-valued form and pull both back along the
//!   path (the transport depends on the chosen splitting);
//! * [`transport::transport_pullback`] — reinterpret the form part as a
//!   connection on the pullback bundle over the odd tangent bundle ΠTM and
//!   pull that back along the canonical lift (no splitting enters).
//!
//! Both reduce the resulting half-order equation `Dψ + Mψ = 0`,
//! `D = ∂_θ + θ∂_t`, to an ordinary linear ODE that is integrated with a
//! fixed-step RK4 scheme over Grassmann-valued matrices. The
//! [`recovery`] module inverts the construction: it reconstructs the
//! superconnection coefficients from a black-box transport.
//!
//! Scalars throughout are elements of the real exterior algebra Λ_N on `N`
//! anticommuting generators ([`grassmann::GrassmannElement`]); odd probe
//! directions and θ-like nilpotents live there.

pub mod error;
pub mod grassmann;
pub mod graded;
pub mod superfield;
pub mod bundle;
pub mod transport;
pub mod recovery;
pub mod oracle;
pub mod acceptance;

pub use error::{Error, Result, Violation};
pub use graded::{GradedMatrix, GradedVector, Ranks};
pub use grassmann::{GrassmannElement, Parity};
