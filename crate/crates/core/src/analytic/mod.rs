//! Analytic side of the adaptive protocol: closed-form no-click evolution,
//! event-sequence probabilities and their accumulated bounds, and the
//! transmission optimizer. These serve as the reference the Monte Carlo
//! engine is checked against.

pub mod closed_form;
mod mu;
mod nojump;
mod sequences;
mod table;

pub use mu::{optimize_mu, scan_mu, scan_spacing, MuOptimum, MU_RANGE, MU_TOLERANCE};
pub use nojump::{
    a_jump_density, b_jump_density, counting_conditional_population, exponent, nojump_density,
    nojump_ode_residual, p0, p0_of_t, post_b_rebase, ClosedFormConstants,
};
pub use sequences::{p_a, p_sequence, Ending, EventSequence, P_A_TOLERANCE, SEQUENCE_TOLERANCE};
pub use table::{accumulate, ProbabilityRow, ProbabilityTable, INVARIANT_TOLERANCE};
