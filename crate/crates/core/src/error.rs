use thiserror::Error;

use crate::state::Detector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is out of range ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,

    #[error("adaptive local oscillator diverges: ground population {0:e} is below the floor")]
    AlphaDivergence(f64),

    #[error("jump requested on detector {0} whose rate is zero")]
    ZeroRateJump(Detector),

    #[error("unsupported event sequence `{0}`")]
    UnsupportedSequence(String),

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("probability invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}
