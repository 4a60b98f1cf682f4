use thiserror::Error;

use crate::fock::Statistics;
use crate::mode::{ModeLabel, ModeSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode {mode} is not in the active mode set {active}")]
    ModeSetMismatch { mode: ModeLabel, active: ModeSet },

    #[error("states have different active mode sets: {left} vs {right}")]
    ActiveSetMismatch { left: ModeSet, right: ModeSet },

    #[error("states have different statistics: {left} vs {right}")]
    StatisticsMismatch { left: Statistics, right: Statistics },

    #[error("state norm {norm:e} is below the degenerate-state tolerance (impossible post-selection branch)")]
    DegenerateState { norm: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("beam splitter violates |alpha|^2 + |beta|^2 = 1 (got {value})")]
    NotUnitary { value: f64 },

    #[error("mode map is not unitary (deviation {deviation:e})")]
    NonUnitaryMap { deviation: f64 },

    #[error("spin content does not factor out of the path patterns")]
    SpinPathEntangled,

    #[error("configuration does not hold {expected} particles on side {side}")]
    SideOccupancy { side: u8, expected: u32 },

    #[error("invalid mode label {0:?}")]
    InvalidModeLabel(String),

    #[error("invalid sign {0:?}, expected one of ++, +-, -+, --")]
    InvalidSigns(String),

    #[error("invalid complex number {0:?}, expected RE,IM")]
    InvalidComplex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
