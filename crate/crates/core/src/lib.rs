//! Analysis and simulation of grouping-based, self-sustainable reconfigurable
//! intelligent surface (RIS) links.
//!
//! The surface is split into `B` groups of `M` spatially correlated elements.
//! Each group harvests the energy it needs for phase shifting either by power
//! splitting (PS) or time switching (TS), and one group is scheduled per slot.
//! The crate provides:
//!
//! * [`specfun`]: incomplete gamma/beta, modified Bessel, sinc correlation,
//!   adaptive quadrature.
//! * [`channel`]: correlated Rician channels, composite group channels and the
//!   moment-matched Gamma law of the end-to-end product gain.
//! * [`energy`]: linear and saturating harvesting laws, PS/TS energy budgets.
//! * [`bounds`]: feasible intervals for the splitting factor `ρ` and the
//!   switching fraction `ζ`.
//! * [`selection`]: SNR/rate, eligibility, k-th best order statistics and
//!   closed-form outage for random, SNR-based and energy-based selection.
//! * [`evt`]: Gumbel-limit outage for many groups.
//! * [`sim`]: a seeded, reproducible Monte Carlo engine used to cross-check
//!   every closed form.
//! * [`cli`]: scenario files, sweeps and CSV output behind the `ris-select`
//!   binary.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod energy;
pub mod error;
pub mod evt;
pub mod selection;
pub mod sim;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
