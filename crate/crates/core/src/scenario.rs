//! The two-pair source state and scenario configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, Statistics};
use crate::mode::{ModeLabel, ModeSet, Path, Side, Spin};
use crate::optics::{apply_mode_map, beam_splitter_map, BeamSplitter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Relative signs of the two pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signs {
    pub pair_a: Sign,
    pub pair_b: Sign,
}

impl Signs {
    pub const ALL: [Signs; 4] = [
        Signs::new(Sign::Plus, Sign::Plus),
        Signs::new(Sign::Plus, Sign::Minus),
        Signs::new(Sign::Minus, Sign::Plus),
        Signs::new(Sign::Minus, Sign::Minus),
    ];

    pub const fn new(pair_a: Sign, pair_b: Sign) -> Self {
        Self { pair_a, pair_b }
    }

    /// `(+,+)` for equal signs, `(+,-)` otherwise.
    pub fn class_representative(self) -> Signs {
        if self.pair_a == self.pair_b {
            Signs::new(Sign::Plus, Sign::Plus)
        } else {
            Signs::new(Sign::Plus, Sign::Minus)
        }
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.pair_a.symbol(), self.pair_b.symbol())
    }
}

impl FromStr for Signs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sign = |c| match c {
            '+' | 'p' => Ok(Sign::Plus),
            '-' | 'm' => Ok(Sign::Minus),
            _ => Err(Error::InvalidSigns(s.to_string())),
        };
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            [a, b] => Ok(Signs::new(sign(*a)?, sign(*b)?)),
            _ => Err(Error::InvalidSigns(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub statistics: Statistics,
    pub signs: Signs,
    pub bs: BeamSplitter,
}

impl ScenarioSpec {
    pub fn new(statistics: Statistics, signs: Signs, bs: BeamSplitter) -> Self {
        Self {
            statistics,
            signs,
            bs,
        }
    }

    /// Every (statistics, signs) combination with the given splitter.
    pub fn all_with(bs: BeamSplitter) -> impl Iterator<Item = ScenarioSpec> {
        Statistics::ALL.into_iter().flat_map(move |stats| {
            Signs::ALL
                .into_iter()
                .map(move |signs| ScenarioSpec::new(stats, signs, bs))
        })
    }
}

/// One pair: `(1/sqrt(2)) (a+(p1 up) a+(p2 dn) +- a+(p1 dn) a+(p2 up))`.
fn pair_terms(path: Path, sign: Sign) -> [(f64, [ModeLabel; 2]); 2] {
    let m = |side, spin| ModeLabel::new(side, path, spin);
    [
        (1.0, [m(Side::One, Spin::Up), m(Side::Two, Spin::Down)]),
        (sign.value(), [m(Side::One, Spin::Down), m(Side::Two, Spin::Up)]),
    ]
}

/// The normalized four-particle source state over the input modes.
///
/// Operators are taken in the written order: the pair on path A before the
/// pair on path B, and within a pair the side-1 operator first.
pub fn initial_state(spec: &ScenarioSpec) -> FockState {
    let mut terms = Vec::with_capacity(4);
    for (ca, ma) in pair_terms(Path::A, spec.signs.pair_a) {
        for (cb, mb) in pair_terms(Path::B, spec.signs.pair_b) {
            let modes = vec![ma[0], ma[1], mb[0], mb[1]];
            terms.push((Complex64::new(0.5 * ca * cb, 0.0), modes));
        }
    }
    FockState::build_over(&terms, spec.statistics, ModeSet::inputs())
        .expect("source modes are all inputs")
}

/// The state after both beam splitters.
pub fn output_state(spec: &ScenarioSpec) -> FockState {
    let mut state = initial_state(spec);
    for side in Side::ALL {
        state = apply_mode_map(&state, &beam_splitter_map(side, &spec.bs))
            .expect("splitter inputs are active");
    }
    state
}

/// Mutual information (bits) between the side-1 path occupancy and the side-1
/// spin content `(n_up, n_down)`, read from configuration probabilities.
pub fn spin_space_correlation_check(state: &FockState) -> f64 {
    let mut joint: BTreeMap<([u8; 4], [u8; 2]), f64> = BTreeMap::new();
    let total = state.norm_sqr();
    if total == 0.0 {
        return 0.0;
    }
    for (occ, amp) in state.iter() {
        let mut paths = [0u8; 4];
        let mut spins = [0u8; 2];
        for (m, n) in occ.occupied().filter(|(m, _)| m.side == Side::One) {
            paths[m.path.index()] += n;
            spins[m.spin.index()] += n;
        }
        *joint.entry((paths, spins)).or_default() += amp.norm_sqr() / total;
    }
    let mut p_path: BTreeMap<[u8; 4], f64> = BTreeMap::new();
    let mut p_spin: BTreeMap<[u8; 2], f64> = BTreeMap::new();
    for (&(path, spin), &p) in &joint {
        *p_path.entry(path).or_default() += p;
        *p_spin.entry(spin).or_default() += p;
    }
    joint
        .iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|(&(path, spin), &p)| p * (p / (p_path[&path] * p_spin[&spin])).log2())
        .sum::<f64>()
        .max(0.0)
}
