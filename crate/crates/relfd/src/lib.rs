//! Evaluation of the relativistic Fermi-Dirac integral
//!
//! ```text
//! F_q(η,β) = ∫₀^∞ x^q √(1 + βx/2) / (e^{x−η} + 1) dx,   q ≥ 0, β ≥ 0, η ∈ ℝ,
//! ```
//!
//! and of the standard integral F_q(η) (the β = 0 case), to near double
//! precision across all parameter regimes.
//!
//! Every regime is covered by a dedicated expansion:
//!
//! * η < 0 — a convergent series over Kummer U values ([`fd_relativistic::fd_rel_neg_eta`]);
//! * η → +∞ — complete asymptotic expansions, in separate analytic forms for
//!   generic and half-integer order q ([`fd_relativistic::fd_rel_large_eta_generic`],
//!   [`fd_relativistic::fd_rel_large_eta_halfint`]);
//! * β → 0 — a series over standard Fermi-Dirac integrals ([`fd_relativistic::fd_rel_small_beta`]);
//! * β → ∞ — expansions over logistic-derivative and analytically continued
//!   auxiliary functions ([`fd_relativistic::fd_rel_large_beta_generic`],
//!   [`fd_relativistic::fd_rel_large_beta_halfint`]);
//! * everywhere — adaptive Gauss-Kronrod quadrature of the defining integral
//!   ([`oracle`]), used as the reference in tests and sweeps.
//!
//! [`fd_relativistic::fd_rel_eval`] dispatches among these automatically.

// `!(x > 0.0)` guards intentionally reject NaN; quadrature and Lanczos
// constants keep their published digit counts.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod config;
pub mod error;
pub mod scalar_special;
pub mod kummer;
pub mod coefficients;
pub(crate) mod quad;
pub mod fd_standard;
pub mod fd_relativistic;
pub mod oracle;

pub use config::EvalConfig;
pub use error::{FdError, Result};
pub use fd_relativistic::{EvalResult, FdParams, Method};
pub use kummer::QClass;
