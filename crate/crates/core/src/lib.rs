//! Decay of a two-level emitter monitored by photon counting, fixed local
//! oscillator interference, or an adaptive local oscillator that heralds a
//! jump into the fully excited state.
//!
//! The crate is split into
//! - [`state`]: parameter bundles and the emitter state representations,
//! - [`detection`]: jump operators, rates and the no-jump propagator,
//! - [`engine`]: Monte Carlo wavefunction trajectories and ensemble statistics,
//! - [`analytic`]: closed-form no-jump solutions and event-sequence probabilities,
//! - [`quadrature`] and [`optimize`]: numerical building blocks for `analytic`.

pub mod analytic;
pub mod detection;
pub mod engine;
mod error;
pub mod optimize;
pub mod quadrature;
pub mod state;

pub use error::{Error, Result};
pub use state::{DetectionScheme, Detector, EmitterState, Params, UnnormalizedDensity};
