//! Second-quantized simulation of two entangled spin-1/2 pairs whose members
//! meet at per-side beam splitters.
//!
//! The sparse pipeline is [`scenario::initial_state`] ->
//! [`optics::apply_mode_map`] -> [`measurement`] projectors ->
//! [`entanglement`] entropies, summarized by [`report::evaluate`]. The
//! [`oracle`] module recomputes the same report with dense linear algebra.

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod mode;
pub mod optics;
pub mod oracle;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use fock::{label_overlap, FockState, Occupation, Statistics};
pub use mode::{ModeLabel, ModeSet, Path, Side, Spin};
pub use optics::{BeamSplitter, ModeMap};
pub use report::Report;
pub use scenario::{ScenarioSpec, Sign, Signs};
