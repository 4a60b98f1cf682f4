//! Post-selection on per-side spin sectors and path patterns.
//!
//! Spin projections never look at path labels and path projections never look
//! at spins.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{FockState, Occupation, DEGENERATE_TOL};
use crate::mode::{Path, Side, Spin};
use crate::optics::{apply_mode_map, spin_x_rotation};

/// Number of particles each side must hold for the projectors below.
pub const PARTICLES_PER_SIDE: u32 = 2;

/// Where the two particles on one side left the splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathPattern {
    /// One particle in C, one in D.
    Antibunch,
    /// Both in C or both in D.
    Bunch,
    BunchC,
    BunchD,
}

impl PathPattern {
    /// The three mutually exclusive patterns.
    pub const EXCLUSIVE: [PathPattern; 3] =
        [PathPattern::Antibunch, PathPattern::BunchC, PathPattern::BunchD];

    /// Pattern of `side` in `occ`, if the side holds one particle in each of
    /// C and D or two in one of them.
    pub fn classify(occ: &Occupation, side: Side) -> Option<PathPattern> {
        let (mut c, mut d) = (0, 0);
        for (m, n) in occ.occupied().filter(|(m, _)| m.side == side) {
            match m.path {
                Path::C => c += n,
                Path::D => d += n,
                Path::A | Path::B => return None,
            }
        }
        match (c, d) {
            (1, 1) => Some(PathPattern::Antibunch),
            (2, 0) => Some(PathPattern::BunchC),
            (0, 2) => Some(PathPattern::BunchD),
            _ => None,
        }
    }

    pub fn matches(self, occ: &Occupation, side: Side) -> bool {
        match (self, PathPattern::classify(occ, side)) {
            (_, None) => false,
            (PathPattern::Bunch, Some(p)) => p != PathPattern::Antibunch,
            (want, Some(p)) => want == p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PathPattern::Antibunch => "antibunch",
            PathPattern::Bunch => "bunch",
            PathPattern::BunchC => "bunch_C",
            PathPattern::BunchD => "bunch_D",
        }
    }
}

impl fmt::Display for PathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathPattern {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "antibunch" => Ok(PathPattern::Antibunch),
            "bunch" => Ok(PathPattern::Bunch),
            "bunch_C" => Ok(PathPattern::BunchC),
            "bunch_D" => Ok(PathPattern::BunchD),
            _ => Err(format!("unknown path pattern {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinObservable {
    /// `|S_z|` of the side's pair, in `{0, 1}`.
    SzAbs,
    /// `S_x` of the side's pair, in `{-1, 0, 1}`.
    SxTotal,
}

impl SpinObservable {
    pub fn sectors(self) -> &'static [i32] {
        match self {
            SpinObservable::SzAbs => &[0, 1],
            SpinObservable::SxTotal => &[-1, 0, 1],
        }
    }
}

/// A per-side spin sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSector {
    pub observable: SpinObservable,
    pub value: i32,
}

/// Branch probability and the normalized post-selected state. Impossible
/// branches carry probability zero and no state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub probability: f64,
    pub state: Option<FockState>,
}

impl MeasurementOutcome {
    fn zero() -> Self {
        Self {
            probability: 0.0,
            state: None,
        }
    }

    /// Builds the outcome for a projected (unnormalized) branch of `parent`.
    fn from_branch(parent: &FockState, kept: FockState) -> Self {
        let total = parent.norm_sqr();
        if kept.norm() < DEGENERATE_TOL || total == 0.0 {
            return Self::zero();
        }
        let probability = kept.norm_sqr() / total;
        let (state, _) = kept.normalize().expect("norm checked above");
        Self {
            probability,
            state: Some(state),
        }
    }

    pub fn is_impossible(&self) -> bool {
        self.state.is_none()
    }
}

fn check_two_per_side(state: &FockState) -> Result<()> {
    for occ in state.configurations() {
        for side in Side::ALL {
            if occ.side_total(side) != PARTICLES_PER_SIDE {
                return Err(Error::SideOccupancy {
                    side: side.number(),
                    expected: PARTICLES_PER_SIDE,
                });
            }
        }
    }
    Ok(())
}

/// Twice the spin projection of `side`, with up/down read from the mode spin
/// slots.
fn twice_spin(occ: &Occupation, side: Side) -> i32 {
    occ.occupied()
        .filter(|(m, _)| m.side == side)
        .map(|(m, n)| m.spin.twice_sz() * n as i32)
        .sum()
}

/// `|S_z|` of each side.
pub fn sz_abs(occ: &Occupation) -> [i32; 2] {
    Side::ALL.map(|side| twice_spin(occ, side).abs() / 2)
}

/// Keeps configurations whose per-side `|S_z|` equals `values`.
pub fn project_sz_sectors(state: &FockState, values: [i32; 2]) -> Result<MeasurementOutcome> {
    check_two_per_side(state)?;
    let kept = state.filter(|occ| sz_abs(occ) == values);
    Ok(MeasurementOutcome::from_branch(state, kept))
}

/// Both sides in the `|S_z| = value` component: `0` keeps anti-aligned pairs,
/// `1` aligned pairs.
pub fn project_sz_component(state: &FockState, value: i32) -> Result<MeasurementOutcome> {
    project_sz_sectors(state, [value, value])
}

/// Projects both sides onto the given total-`S_x` sectors by rotating the
/// spins into the x basis, filtering, and rotating back.
pub fn project_sx(state: &FockState, values: [i32; 2]) -> Result<MeasurementOutcome> {
    check_two_per_side(state)?;
    let rotation = spin_x_rotation(state.active_modes());
    let rotated = apply_mode_map(state, &rotation)?;
    let kept = rotated.filter(|occ| Side::ALL.map(|s| twice_spin(occ, s) / 2) == values);
    if kept.norm() < DEGENERATE_TOL {
        return Ok(MeasurementOutcome::zero());
    }
    let back = apply_mode_map(&kept, &rotation)?;
    Ok(MeasurementOutcome::from_branch(state, back))
}

/// `S_x = 0` on both sides.
pub fn project_sx_zero(state: &FockState) -> Result<MeasurementOutcome> {
    project_sx(state, [0, 0])
}

/// Keeps configurations whose side-1 and side-2 path patterns match.
pub fn project_path(state: &FockState, patterns: [PathPattern; 2]) -> Result<MeasurementOutcome> {
    check_two_per_side(state)?;
    let kept = state.filter(|occ| {
        patterns[0].matches(occ, Side::One) && patterns[1].matches(occ, Side::Two)
    });
    Ok(MeasurementOutcome::from_branch(state, kept))
}

/// Whether every occupied mode on `side` carries the same spin.
pub fn side_spins_aligned(occ: &Occupation, side: Side) -> bool {
    let mut spins = occ
        .occupied()
        .filter(|(m, _)| m.side == side)
        .map(|(m, _)| m.spin);
    match spins.next() {
        None => true,
        Some(first) => spins.all(|s| s == first),
    }
}

/// `(n_up, n_down)` of one side.
pub fn spin_content(occ: &Occupation, side: Side) -> (u8, u8) {
    occ.occupied()
        .filter(|(m, _)| m.side == side)
        .fold((0, 0), |(u, d), (m, n)| match m.spin {
            Spin::Up => (u + n, d),
            Spin::Down => (u, d + n),
        })
}
