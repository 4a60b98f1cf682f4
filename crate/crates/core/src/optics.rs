//! Single-particle mode transformations and their action on Fock states.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, Statistics};
use crate::mode::{ModeLabel, ModeSet, Path, Side, Spin};

/// Tolerance on `|alpha|^2 + |beta|^2 = 1` and on map unitarity.
pub const UNITARY_TOL: f64 = 1e-12;

/// The SU(2) matrix `[[alpha, beta], [-conj(beta), conj(alpha)]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    alpha: Complex64,
    beta: Complex64,
}

impl BeamSplitter {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let value = alpha.norm_sqr() + beta.norm_sqr();
        if !value.is_finite() || (value - 1.0).abs() > UNITARY_TOL {
            return Err(Error::NotUnitary { value });
        }
        Ok(Self { alpha, beta })
    }

    /// `alpha = 1/sqrt(2)`, `beta = -i/sqrt(2)`.
    pub fn fifty_fifty() -> Self {
        Self {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(0.0, -FRAC_1_SQRT_2),
        }
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    /// `alpha = cos(theta)`, `beta = -i sin(theta)`.
    pub fn from_mixing_angle(theta: f64) -> Self {
        Self {
            alpha: Complex64::new(theta.cos(), 0.0),
            beta: Complex64::new(0.0, -theta.sin()),
        }
    }

    /// Maps three uniform numbers in `[0, 1)` onto a Haar-distributed SU(2)
    /// element.
    pub fn from_unit_cube(u: f64, phi: f64, chi: f64) -> Self {
        let tau = std::f64::consts::TAU;
        let cos = u.sqrt();
        let sin = (1.0 - u).sqrt();
        Self {
            alpha: Complex64::from_polar(cos, tau * phi),
            beta: Complex64::from_polar(sin, tau * chi),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Row-major 2x2 matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [self.alpha, self.beta],
            [-self.beta.conj(), self.alpha.conj()],
        ]
    }
}

/// A linear substitution `a+(in) -> sum_k c_k a+(out_k)` on creation operators.
/// Modes without a row are left unchanged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeMap {
    rows: BTreeMap<ModeLabel, Vec<(ModeLabel, Complex64)>>,
}

impl ModeMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, input: ModeLabel, images: Vec<(ModeLabel, Complex64)>) {
        self.rows.insert(input, images);
    }

    pub fn image(&self, input: ModeLabel) -> Option<&[(ModeLabel, Complex64)]> {
        self.rows.get(&input).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&ModeLabel, &Vec<(ModeLabel, Complex64)>)> {
        self.rows.iter()
    }

    pub fn inputs(&self) -> ModeSet {
        self.rows.keys().copied().collect()
    }

    pub fn outputs(&self) -> ModeSet {
        self.rows
            .values()
            .flat_map(|imgs| imgs.iter().map(|(m, _)| *m))
            .collect()
    }

    /// Largest entry of `M M^dagger - I` together with the input/output
    /// dimension mismatch; zero for a unitary map.
    pub fn unitarity_deviation(&self) -> f64 {
        let inputs: Vec<ModeLabel> = self.inputs().iter().collect();
        if inputs.len() != self.outputs().len() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (i, a) in inputs.iter().enumerate() {
            for b in &inputs[i..] {
                let ra = &self.rows[a];
                let rb = &self.rows[b];
                let mut dot = Complex64::default();
                for (ma, ca) in ra {
                    for (mb, cb) in rb {
                        if ma == mb {
                            dot += ca * cb.conj();
                        }
                    }
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn check_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitaryMap { deviation });
        }
        Ok(())
    }
}

/// The per-side beam splitter: path A feeds the first matrix row and path B
/// the second, identically for both spins.
pub fn beam_splitter_map(side: Side, bs: &BeamSplitter) -> ModeMap {
    let [[a, b], [c, d]] = bs.matrix();
    let mut map = ModeMap::new();
    for spin in Spin::ALL {
        let at = |path| ModeLabel::new(side, path, spin);
        map.insert(at(Path::A), vec![(at(Path::C), a), (at(Path::D), b)]);
        map.insert(at(Path::B), vec![(at(Path::C), c), (at(Path::D), d)]);
    }
    map
}

/// Beam splitter with the row assignment swapped (B feeds the first row).
pub fn swapped_beam_splitter_map(side: Side, bs: &BeamSplitter) -> ModeMap {
    let [[a, b], [c, d]] = bs.matrix();
    let mut map = ModeMap::new();
    for spin in Spin::ALL {
        let at = |path| ModeLabel::new(side, path, spin);
        map.insert(at(Path::B), vec![(at(Path::C), a), (at(Path::D), b)]);
        map.insert(at(Path::A), vec![(at(Path::C), c), (at(Path::D), d)]);
    }
    map
}

/// Applies the same 2x2 unitary to the spin of every path listed, on one side.
/// `matrix[s][s']` is the amplitude of spin `s'` in the image of spin `s`.
pub fn spin_unitary_map(side: Side, paths: &[Path], matrix: [[Complex64; 2]; 2]) -> ModeMap {
    let mut map = ModeMap::new();
    for &path in paths {
        let at = |spin| ModeLabel::new(side, path, spin);
        for (row, spin) in Spin::ALL.into_iter().enumerate() {
            map.insert(
                at(spin),
                vec![(at(Spin::Up), matrix[row][0]), (at(Spin::Down), matrix[row][1])],
            );
        }
    }
    map
}

/// Rewrites z-basis spins into the x basis `x+- = (up +- down)/sqrt(2)`, with
/// `x+` stored in the up slot and `x-` in the down slot. The map is its own
/// inverse.
pub fn spin_x_rotation(active: ModeSet) -> ModeMap {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut map = ModeMap::new();
    for side in Side::ALL {
        let paths: Vec<Path> = Path::ALL
            .into_iter()
            .filter(|&p| {
                active.contains(ModeLabel::new(side, p, Spin::Up))
                    && active.contains(ModeLabel::new(side, p, Spin::Down))
            })
            .collect();
        for (input, image) in spin_unitary_map(side, &paths, [[h, h], [h, -h]]).rows {
            map.insert(input, image);
        }
    }
    map
}

/// Substitutes every creation operator in each configuration's monomial by its
/// image under `map` and re-expands.
///
/// Mapped input modes that are not also outputs leave the active set; output
/// modes join it.
pub fn apply_mode_map(state: &FockState, map: &ModeMap) -> Result<FockState> {
    let active = state.active_modes();
    if let Some(m) = map.inputs().iter().find(|m| !active.contains(*m)) {
        return Err(Error::ModeSetMismatch { mode: m, active });
    }
    let inputs = map.inputs();
    let outputs = map.outputs();
    let mut next_active = active;
    for m in inputs.iter() {
        if !outputs.contains(m) {
            next_active.remove(m);
        }
    }
    let next_active = next_active.union(outputs);
    let work_active = active.union(outputs);
    let statistics = state.statistics();

    let mut out = FockState::zero(statistics, work_active);
    for (occ, &amp) in state.iter() {
        let scale = match statistics {
            Statistics::Boson => amp / occ.bosonic_monomial_norm(),
            Statistics::Fermion => amp,
        };
        let mut term = FockState::vacuum(statistics, work_active);
        for op in occ.creation_sequence().into_iter().rev() {
            term = match map.image(op) {
                None => term.apply_creation(op)?,
                Some(images) => {
                    let mut acc = FockState::zero(statistics, work_active);
                    for &(target, coefficient) in images {
                        acc.add_scaled(&term.apply_creation(target)?, coefficient)?;
                    }
                    acc
                }
            };
        }
        out.add_scaled(&term, scale)?;
    }
    out.with_active_modes(next_active)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Occupation;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_unitary_parameters() {
        assert!(matches!(
            BeamSplitter::new(c(1.0, 0.0), c(0.5, 0.0)),
            Err(Error::NotUnitary { .. })
        ));
        assert!(BeamSplitter::new(c(0.6, 0.0), c(0.0, 0.8)).is_ok());
    }

    #[test]
    fn identity_splitter_relabels_a_to_c_and_b_to_d() {
        let map = beam_splitter_map(Side::One, &BeamSplitter::identity());
        for spin in Spin::ALL {
            let a = ModeLabel::new(Side::One, Path::A, spin);
            let img = map.image(a).unwrap();
            assert_eq!(img[0], (a.with_path(Path::C), c(1.0, 0.0)));
            assert_eq!(img[1].1, c(0.0, 0.0));
        }
    }

    #[test]
    fn fifty_fifty_map_is_balanced_and_unitary() {
        let map = beam_splitter_map(Side::Two, &BeamSplitter::fifty_fifty());
        map.check_unitary().unwrap();
        for (_, imgs) in map.rows() {
            for (_, coefficient) in imgs {
                assert!((coefficient.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn splitter_preserves_side_and_spin() {
        let bs = BeamSplitter::from_unit_cube(0.3, 0.7, 0.1);
        for side in Side::ALL {
            for (input, imgs) in beam_splitter_map(side, &bs).rows() {
                for (out, _) in imgs {
                    assert_eq!(out.side, input.side);
                    assert_eq!(out.spin, input.spin);
                    assert!(!out.path.is_input());
                }
            }
        }
    }

    #[test]
    fn non_square_map_is_not_unitary() {
        let mut map = ModeMap::new();
        let a: ModeLabel = "A1up".parse().unwrap();
        map.insert(
            a,
            vec![
                ("C1up".parse().unwrap(), c(FRAC_1_SQRT_2, 0.0)),
                ("D1up".parse().unwrap(), c(FRAC_1_SQRT_2, 0.0)),
            ],
        );
        assert!(map.check_unitary().is_err());
    }

    #[test]
    fn x_rotation_is_an_involution() {
        let active = ModeSet::outputs();
        let rot = spin_x_rotation(active);
        rot.check_unitary().unwrap();
        let occ = Occupation::from_modes(["C1up".parse().unwrap(), "D1dn".parse().unwrap()]);
        for stats in Statistics::ALL {
            let st = FockState::from_amplitudes(stats, active, [(occ, c(1.0, 0.0))]).unwrap();
            let once = apply_mode_map(&st, &rot).unwrap();
            assert_eq!(once.len(), 4);
            let twice = apply_mode_map(&once, &rot).unwrap();
            assert_eq!(twice.len(), 1);
            assert!((twice.amplitude(&occ) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn unmapped_modes_pass_through() {
        let active = ModeSet::inputs();
        let occ = Occupation::from_modes(["A1up".parse().unwrap(), "A2dn".parse().unwrap()]);
        let st = FockState::from_amplitudes(Statistics::Fermion, active, [(occ, c(1.0, 0.0))])
            .unwrap();
        let out = apply_mode_map(&st, &beam_splitter_map(Side::One, &BeamSplitter::identity()))
            .unwrap();
        let expected = Occupation::from_modes(["C1up".parse().unwrap(), "A2dn".parse().unwrap()]);
        assert!((out.amplitude(&expected) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out.active_modes().contains("A2dn".parse().unwrap()));
        assert!(!out.active_modes().contains("A1up".parse().unwrap()));
    }
}
