//! Random generators shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use spinspace::optics::ModeMap;
use spinspace::{BeamSplitter, FockState, ModeLabel, ModeSet, Path, Side, Spin, Statistics};

pub const TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Haar-random SU(2) element.
pub fn random_splitter(rng: &mut impl Rng) -> BeamSplitter {
    BeamSplitter::from_unit_cube(rng.gen(), rng.gen(), rng.gen())
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn modes_on(paths: &[Path]) -> ModeSet {
    ModeLabel::all().filter(|m| paths.contains(&m.path)).collect()
}

/// Unnormalized superposition of up to `terms` random configurations over
/// `active`, each holding `particles` particles (any side split).
pub fn random_state(
    rng: &mut impl Rng,
    statistics: Statistics,
    active: ModeSet,
    particles: usize,
    terms: usize,
) -> FockState {
    let modes: Vec<ModeLabel> = active.iter().collect();
    let mut monomials = Vec::new();
    for _ in 0..terms {
        let picked: Vec<ModeLabel> = match statistics {
            Statistics::Fermion => modes.choose_multiple(rng, particles).copied().collect(),
            Statistics::Boson => (0..particles)
                .map(|_| *modes.choose(rng).expect("nonempty mode set"))
                .collect(),
        };
        monomials.push((random_complex(rng), picked));
    }
    FockState::build_over(&monomials, statistics, active).expect("modes drawn from active set")
}

/// Normalized state with exactly two particles on each side, over `paths`.
pub fn random_two_per_side(
    rng: &mut impl Rng,
    statistics: Statistics,
    paths: &[Path],
    terms: usize,
) -> FockState {
    let active = modes_on(paths);
    let side_modes = |side: Side| active.iter().filter(|m| m.side == side).collect::<Vec<_>>();
    let (one, two) = (side_modes(Side::One), side_modes(Side::Two));
    loop {
        let mut monomials = Vec::new();
        for _ in 0..terms {
            let mut picked = Vec::new();
            for modes in [&one, &two] {
                match statistics {
                    Statistics::Fermion => picked.extend(modes.choose_multiple(rng, 2).copied()),
                    Statistics::Boson => {
                        picked.push(*modes.choose(rng).unwrap());
                        picked.push(*modes.choose(rng).unwrap());
                    }
                }
            }
            picked.shuffle(rng);
            monomials.push((random_complex(rng), picked));
        }
        let state = FockState::build_over(&monomials, statistics, active).unwrap();
        if let Ok((unit, _)) = state.normalize() {
            return unit;
        }
    }
}

/// Random SU(2) mixing of paths `p` and `q` on one side, the same for both
/// spins.
pub fn path_unitary(rng: &mut impl Rng, side: Side, p: Path, q: Path) -> ModeMap {
    let [[a, b], [c, d]] = random_splitter(rng).matrix();
    let mut map = ModeMap::new();
    for spin in Spin::ALL {
        let at = |path| ModeLabel::new(side, path, spin);
        map.insert(at(p), vec![(at(p), a), (at(q), b)]);
        map.insert(at(q), vec![(at(p), c), (at(q), d)]);
    }
    map
}

/// `|<a|b>|`, defined for states of matching statistics and mode set.
pub fn overlap_magnitude(a: &FockState, b: &FockState) -> f64 {
    a.inner_product(b).expect("compatible states").norm()
}

/// Largest amplitude-wise difference between two states.
pub fn max_difference(a: &FockState, b: &FockState) -> f64 {
    a.configurations()
        .chain(b.configurations())
        .map(|o| (a.amplitude(o) - b.amplitude(o)).norm())
        .fold(0.0, f64::max)
}
