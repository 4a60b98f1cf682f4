//! Occupation-number basis and sparse Fock states.
//!
//! Basis vectors are normalized occupation states `|n_1, n_2, ...>` over the
//! canonical mode order. A product of creation operators acting on the vacuum
//! therefore picks up `sqrt(n!)` factors for bosons and a Jordan-Wigner sign
//! for fermions.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mode::{ModeLabel, ModeSet, Side, NUM_MODES};

/// Amplitudes below this magnitude are dropped after every linear operation.
pub const PRUNE_TOL: f64 = 1e-12;
/// Norms below this are treated as the zero state.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Allowed deviation of `<psi|psi>` from one for a normalized state.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    pub const ALL: [Statistics; 2] = [Statistics::Boson, Statistics::Fermion];

    /// Sign picked up when two distinct creation operators are swapped.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Occupancy of every mode, indexed canonically.
///
/// The derived ordering (lexicographic on the occupancy vector) is the
/// canonical configuration order used for serialization and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Occupation([u8; NUM_MODES]);

impl Occupation {
    pub fn vacuum() -> Self {
        Occupation([0; NUM_MODES])
    }

    pub fn from_counts(counts: [u8; NUM_MODES]) -> Self {
        Occupation(counts)
    }

    /// Builds a configuration from a list of (possibly repeated) modes.
    pub fn from_modes<I: IntoIterator<Item = ModeLabel>>(modes: I) -> Self {
        let mut occ = Occupation::vacuum();
        for m in modes {
            occ.0[m.index()] += 1;
        }
        occ
    }

    pub fn counts(&self) -> &[u8; NUM_MODES] {
        &self.0
    }

    pub fn get(&self, mode: ModeLabel) -> u8 {
        self.0[mode.index()]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    pub fn side_total(&self, side: Side) -> u32 {
        self.side_counts(side).iter().map(|&n| n as u32).sum()
    }

    /// The eight occupancies belonging to one side, in canonical order.
    pub fn side_counts(&self, side: Side) -> [u8; 8] {
        let start = side.index() * 8;
        let mut out = [0; 8];
        out.copy_from_slice(&self.0[start..start + 8]);
        out
    }

    /// Occupied modes in canonical order, repeated by occupancy.
    pub fn creation_sequence(&self) -> Vec<ModeLabel> {
        let mut ops = Vec::with_capacity(self.total() as usize);
        for (i, &n) in self.0.iter().enumerate() {
            for _ in 0..n {
                ops.push(ModeLabel::from_index(i));
            }
        }
        ops
    }

    /// `(mode, count)` for every occupied mode, canonical order.
    pub fn occupied(&self) -> impl Iterator<Item = (ModeLabel, u8)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (ModeLabel::from_index(i), n))
    }

    /// Canonical `mode:count` strings.
    pub fn labels(&self) -> Vec<String> {
        self.occupied().map(|(m, n)| format!("{m}:{n}")).collect()
    }

    /// Modes that are occupied.
    pub fn support(&self) -> ModeSet {
        self.occupied().map(|(m, _)| m).collect()
    }

    /// Number of occupied modes strictly before `mode` in canonical order.
    fn occupied_before(&self, mode: ModeLabel) -> u32 {
        self.0[..mode.index()].iter().map(|&n| n as u32).sum()
    }

    /// `sqrt(prod n_i!)`, the norm of the bosonic monomial for this configuration.
    pub fn bosonic_monomial_norm(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| (1..=n as u64).product::<u64>() as f64)
            .product::<f64>()
            .sqrt()
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels().join(", "))
    }
}

/// A sparse superposition of occupation configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    statistics: Statistics,
    active: ModeSet,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl FockState {
    /// The zero vector over `active`.
    pub fn zero(statistics: Statistics, active: ModeSet) -> Self {
        Self {
            statistics,
            active,
            amplitudes: BTreeMap::new(),
        }
    }

    /// `|0>` with amplitude one.
    pub fn vacuum(statistics: Statistics, active: ModeSet) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(Occupation::vacuum(), Complex64::new(1.0, 0.0));
        Self {
            statistics,
            active,
            amplitudes,
        }
    }

    /// Assembles a state from raw amplitudes. Small amplitudes are pruned and
    /// repeated configurations are summed.
    pub fn from_amplitudes<I>(statistics: Statistics, active: ModeSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut state = Self::zero(statistics, active);
        for (occ, amp) in terms {
            if let Some((m, _)) = occ.occupied().find(|(m, _)| !active.contains(*m)) {
                return Err(Error::ModeSetMismatch { mode: m, active });
            }
            if statistics == Statistics::Fermion && occ.counts().iter().any(|&n| n > 1) {
                continue;
            }
            *state.amplitudes.entry(occ).or_default() += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn active_modes(&self) -> ModeSet {
        self.active
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amplitudes.get(occ).copied().unwrap_or_default()
    }

    /// Configurations and amplitudes in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn configurations(&self) -> impl Iterator<Item = &Occupation> {
        self.amplitudes.keys()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_TOL);
    }

    /// Applies the creation operator for `mode`.
    pub fn apply_creation(&self, mode: ModeLabel) -> Result<FockState> {
        if !self.active.contains(mode) {
            return Err(Error::ModeSetMismatch {
                mode,
                active: self.active,
            });
        }
        let mut out = FockState::zero(self.statistics, self.active);
        for (occ, &amp) in &self.amplitudes {
            let n = occ.get(mode);
            let factor = match self.statistics {
                Statistics::Boson => ((n as f64) + 1.0).sqrt(),
                Statistics::Fermion => {
                    if n > 0 {
                        continue;
                    }
                    if occ.occupied_before(mode) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            let mut next = *occ;
            next.0[mode.index()] += 1;
            *out.amplitudes.entry(next).or_default() += amp * factor;
        }
        out.prune();
        Ok(out)
    }

    /// `sum_k c_k a+(m_k1) ... a+(m_kn) |0>`; operators act right to left.
    ///
    /// The active mode set is every mode that appears in `terms`. The result is
    /// not renormalized.
    pub fn build_from_monomials(
        terms: &[(Complex64, Vec<ModeLabel>)],
        statistics: Statistics,
    ) -> FockState {
        let active: ModeSet = terms.iter().flat_map(|(_, ms)| ms.iter().copied()).collect();
        Self::build_over(terms, statistics, active)
            .expect("active set covers every mode in the monomials")
    }

    /// Like [`FockState::build_from_monomials`] with an explicit active set.
    pub fn build_over(
        terms: &[(Complex64, Vec<ModeLabel>)],
        statistics: Statistics,
        active: ModeSet,
    ) -> Result<FockState> {
        let mut out = FockState::zero(statistics, active);
        for (coefficient, modes) in terms {
            let mut term = FockState::vacuum(statistics, active);
            for &m in modes.iter().rev() {
                term = term.apply_creation(m)?;
            }
            out.add_scaled(&term, *coefficient)?;
        }
        Ok(out)
    }

    /// `self += coefficient * other`.
    pub fn add_scaled(&mut self, other: &FockState, coefficient: Complex64) -> Result<()> {
        self.check_compatible(other)?;
        for (occ, &amp) in &other.amplitudes {
            *self.amplitudes.entry(*occ).or_default() += amp * coefficient;
        }
        self.prune();
        Ok(())
    }

    pub fn scaled(&self, coefficient: Complex64) -> FockState {
        let mut out = self.clone();
        for a in out.amplitudes.values_mut() {
            *a *= coefficient;
        }
        out.prune();
        out
    }

    fn check_compatible(&self, other: &FockState) -> Result<()> {
        if self.statistics != other.statistics {
            return Err(Error::StatisticsMismatch {
                left: self.statistics,
                right: other.statistics,
            });
        }
        if self.active != other.active {
            return Err(Error::ActiveSetMismatch {
                left: self.active,
                right: other.active,
            });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &FockState) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(label_overlap(self, other))
    }

    /// Returns the unit-norm state and the original norm.
    pub fn normalize(&self) -> Result<(FockState, f64)> {
        let norm = self.norm();
        if norm < DEGENERATE_TOL {
            return Err(Error::DegenerateState { norm });
        }
        Ok((self.scaled(Complex64::new(1.0 / norm, 0.0)), norm))
    }

    /// Keeps only configurations satisfying `keep`.
    pub fn filter<F: Fn(&Occupation) -> bool>(&self, keep: F) -> FockState {
        let amplitudes = self
            .amplitudes
            .iter()
            .filter(|(occ, _)| keep(occ))
            .map(|(o, a)| (*o, *a))
            .collect();
        FockState {
            statistics: self.statistics,
            active: self.active,
            amplitudes,
        }
    }

    /// Same amplitudes over a different active set.
    pub fn with_active_modes(&self, active: ModeSet) -> Result<FockState> {
        FockState::from_amplitudes(
            self.statistics,
            active,
            self.amplitudes.iter().map(|(o, a)| (*o, *a)),
        )
    }

    /// Total particle count held on `side`, if every configuration agrees.
    pub fn definite_side_count(&self, side: Side) -> Option<u32> {
        let mut counts = self.amplitudes.keys().map(|o| o.side_total(side));
        let first = counts.next()?;
        counts.all(|c| c == first).then_some(first)
    }
}

/// Overlap of two amplitude vectors, pairing them by occupation configuration
/// and ignoring the statistics tag and active set.
///
/// For two states of the same statistics this is the inner product. Across
/// statistics it compares the occupation-number descriptions of the states.
pub fn label_overlap(a: &FockState, b: &FockState) -> Complex64 {
    let (small, large, flip) = if a.len() <= b.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let mut sum = Complex64::default();
    for (occ, amp) in &small.amplitudes {
        if let Some(other) = large.amplitudes.get(occ) {
            sum += if flip {
                other.conj() * amp
            } else {
                amp.conj() * other
            };
        }
    }
    sum
}
