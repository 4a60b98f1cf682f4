//! Side-1 / side-2 Schmidt decomposition and entanglement entropy.
//!
//! All side-1 modes precede all side-2 modes canonically, so a configuration
//! `|n1, n2>` is exactly the product of the side-1 monomial and the side-2
//! monomial and splitting it carries no fermionic sign.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, Occupation, DEGENERATE_TOL};
use crate::mode::{ModeLabel, ModeSet, Side, NUM_MODES};

/// Schmidt coefficients below this are treated as zero.
pub const SCHMIDT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SchmidtResult {
    /// Nonincreasing, all above [`SCHMIDT_TOL`].
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<FockState>,
    pub right_vectors: Vec<FockState>,
}

impl SchmidtResult {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `sum_i lambda_i |left_i> (x) |right_i>` over the union of both mode sets.
    pub fn reconstruct(&self) -> Result<FockState> {
        let (Some(l0), Some(r0)) = (self.left_vectors.first(), self.right_vectors.first()) else {
            return Err(Error::DegenerateState { norm: 0.0 });
        };
        let stats = l0.statistics();
        let active = l0.active_modes().union(r0.active_modes());
        let mut terms = Vec::new();
        for ((lambda, left), right) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for (lo, la) in left.iter() {
                for (ro, ra) in right.iter() {
                    terms.push((join(lo, ro), la * ra * *lambda));
                }
            }
        }
        FockState::from_amplitudes(stats, active, terms)
    }
}

fn side_part(occ: &Occupation, side: Side) -> Occupation {
    let mut counts = [0u8; NUM_MODES];
    let start = side.index() * 8;
    counts[start..start + 8].copy_from_slice(&occ.side_counts(side));
    Occupation::from_counts(counts)
}

fn join(left: &Occupation, right: &Occupation) -> Occupation {
    let mut counts = *left.counts();
    for (c, r) in counts.iter_mut().zip(right.counts()) {
        *c += r;
    }
    Occupation::from_counts(counts)
}

fn side_modes(active: ModeSet, side: Side) -> ModeSet {
    active.iter().filter(|m: &ModeLabel| m.side == side).collect()
}

fn require_normalized(state: &FockState) -> Result<()> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized { norm: state.norm() });
    }
    Ok(())
}

/// Schmidt decomposition across the side-1 / side-2 cut.
pub fn schmidt(state: &FockState) -> Result<SchmidtResult> {
    require_normalized(state)?;
    let mut rows: BTreeMap<Occupation, usize> = BTreeMap::new();
    let mut cols: BTreeMap<Occupation, usize> = BTreeMap::new();
    for occ in state.configurations() {
        let n = rows.len();
        rows.entry(side_part(occ, Side::One)).or_insert(n);
        let n = cols.len();
        cols.entry(side_part(occ, Side::Two)).or_insert(n);
    }
    let mut matrix = Mat::<Complex64>::zeros(rows.len(), cols.len());
    for (occ, amp) in state.iter() {
        let r = rows[&side_part(occ, Side::One)];
        let c = cols[&side_part(occ, Side::Two)];
        matrix[(r, c)] = *amp;
    }
    let svd = matrix.svd().map_err(|_| Error::DegenerateState { norm: state.norm() })?;
    let (u, v, sigma) = (svd.U(), svd.V(), svd.S().column_vector());
    // faer returns singular values in nonincreasing order.
    let order: Vec<usize> = (0..sigma.nrows())
        .filter(|&i| sigma[i].re > SCHMIDT_TOL)
        .collect();

    let stats = state.statistics();
    let left_active = side_modes(state.active_modes(), Side::One);
    let right_active = side_modes(state.active_modes(), Side::Two);
    let mut result = SchmidtResult {
        coefficients: Vec::with_capacity(order.len()),
        left_vectors: Vec::with_capacity(order.len()),
        right_vectors: Vec::with_capacity(order.len()),
    };
    for i in order {
        result.coefficients.push(sigma[i].re);
        let left = rows.iter().map(|(occ, &r)| (*occ, u[(r, i)]));
        let right = cols.iter().map(|(occ, &c)| (*occ, v[(c, i)].conj()));
        result
            .left_vectors
            .push(FockState::from_amplitudes(stats, left_active, left)?);
        result
            .right_vectors
            .push(FockState::from_amplitudes(stats, right_active, right)?);
    }
    Ok(result)
}

/// Von Neumann entropy in bits: `-sum lambda^2 log2 lambda^2`.
pub fn entropy_ebits(result: &SchmidtResult) -> f64 {
    shannon_bits(result.coefficients.iter().map(|l| l * l))
}

/// `-sum p log2 p`, skipping zeros.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(probabilities: I) -> f64 {
    let h: f64 = probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Side-1 / side-2 entropy of a normalized state.
pub fn state_entropy_ebits(state: &FockState) -> Result<f64> {
    Ok(entropy_ebits(&schmidt(state)?))
}

type PatternPair = ([u8; 4], [u8; 4]);

/// Per-side path occupancy `(n_A, n_B, n_C, n_D)`.
fn path_counts(occ: &Occupation, side: Side) -> [u8; 4] {
    let mut counts = [0u8; 4];
    for (m, n) in occ.occupied().filter(|(m, _)| m.side == side) {
        counts[m.path.index()] += n;
    }
    counts
}

/// Entanglement carried by the path patterns alone.
///
/// Configurations are grouped into blocks by the pair of per-side path
/// patterns. When the spin content is a common factor, every block carries the
/// same internal Schmidt spectrum and the total entropy splits into that
/// internal part plus the entropy of the pattern amplitudes; the latter is
/// returned. Blocks with differing spectra mean spin and path do not factor,
/// which is reported as [`Error::SpinPathEntangled`].
pub fn spatial_entropy_ebits(state: &FockState) -> Result<f64> {
    require_normalized(state)?;
    let mut blocks: BTreeMap<PatternPair, Vec<(Occupation, Complex64)>> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let key = (path_counts(occ, Side::One), path_counts(occ, Side::Two));
        blocks.entry(key).or_default().push((*occ, *amp));
    }
    let mut spectrum: Option<Vec<f64>> = None;
    for terms in blocks.into_values() {
        let block =
            FockState::from_amplitudes(state.statistics(), state.active_modes(), terms)?;
        if block.norm() < DEGENERATE_TOL {
            continue;
        }
        let (unit, _) = block.normalize()?;
        let probs: Vec<f64> = schmidt(&unit)?.coefficients.iter().map(|l| l * l).collect();
        match &spectrum {
            None => spectrum = Some(probs),
            Some(first) => {
                let same = first.len() == probs.len()
                    && first.iter().zip(&probs).all(|(a, b)| (a - b).abs() <= SCHMIDT_TOL);
                if !same {
                    return Err(Error::SpinPathEntangled);
                }
            }
        }
    }
    let internal = shannon_bits(spectrum.unwrap_or_default());
    let total = state_entropy_ebits(state)?;
    let spatial = total - internal;
    if spatial < -SCHMIDT_TOL {
        return Err(Error::SpinPathEntangled);
    }
    Ok(spatial.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Statistics;
    use crate::optics::BeamSplitter;
    use crate::scenario::{initial_state, ScenarioSpec};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn mode(s: &str) -> ModeLabel {
        s.parse().unwrap()
    }

    fn monomials(stats: Statistics, terms: &[(f64, [&str; 4])]) -> FockState {
        let terms: Vec<(Complex64, Vec<ModeLabel>)> = terms
            .iter()
            .map(|(c, ms)| (Complex64::new(*c, 0.0), ms.map(mode).to_vec()))
            .collect();
        FockState::build_over(&terms, stats, ModeSet::outputs()).unwrap()
    }

    #[test]
    fn product_state_has_rank_one() {
        let st = monomials(
            Statistics::Fermion,
            &[
                (FRAC_1_SQRT_2, ["C1up", "D1dn", "C2up", "C2dn"]),
                (FRAC_1_SQRT_2, ["C1dn", "D1up", "C2up", "C2dn"]),
            ],
        );
        let r = schmidt(&st).unwrap();
        assert_eq!(r.rank(), 1);
        assert!(entropy_ebits(&r).abs() < 1e-12);
    }

    #[test]
    fn initial_state_has_four_equal_coefficients() {
        for spec in ScenarioSpec::all_with(BeamSplitter::identity()) {
            let r = schmidt(&initial_state(&spec)).unwrap();
            assert_eq!(r.rank(), 4);
            for l in &r.coefficients {
                assert!((l - 0.5).abs() < 1e-12);
            }
            assert!((entropy_ebits(&r) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn three_equal_coefficients_give_log2_3() {
        let s = 1.0 / 3f64.sqrt();
        let r = SchmidtResult {
            coefficients: vec![s, s, s],
            left_vectors: vec![],
            right_vectors: vec![],
        };
        assert!((entropy_ebits(&r) - 1.584962500721156).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let st = monomials(Statistics::Boson, &[(2.0, ["C1up", "D1dn", "C2up", "D2dn"])]);
        assert!(matches!(schmidt(&st), Err(Error::NotNormalized { .. })));
        assert!(matches!(
            spatial_entropy_ebits(&st),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn reconstruction_matches_input() {
        let spec = ScenarioSpec::new(
            Statistics::Boson,
            "+-".parse().unwrap(),
            BeamSplitter::fifty_fifty(),
        );
        let st = crate::scenario::output_state(&spec);
        let rebuilt = schmidt(&st).unwrap().reconstruct().unwrap();
        for (occ, amp) in st.iter() {
            assert!((rebuilt.amplitude(occ) - amp).norm() < 1e-9);
        }
        assert_eq!(rebuilt.len(), st.len());
    }

    #[test]
    fn bunched_product_has_no_spatial_entropy() {
        let st = monomials(Statistics::Boson, &[(1.0, ["C1up", "C1dn", "C2up", "C2dn"])]);
        assert_eq!(spatial_entropy_ebits(&st).unwrap(), 0.0);
    }

    #[test]
    fn spatial_entropy_of_a_path_bell_state() {
        // (|CC>|CC> + |DD>|DD>)/sqrt(2) with the same spin pair everywhere.
        let st = monomials(
            Statistics::Fermion,
            &[
                (FRAC_1_SQRT_2, ["C1up", "C1dn", "C2up", "C2dn"]),
                (FRAC_1_SQRT_2, ["D1up", "D1dn", "D2up", "D2dn"]),
            ],
        );
        assert!((spatial_entropy_ebits(&st).unwrap() - 1.0).abs() < 1e-12);
        assert!((state_entropy_ebits(&st).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_entanglement_inside_one_pattern_is_not_spatial() {
        let st = monomials(
            Statistics::Fermion,
            &[
                (FRAC_1_SQRT_2, ["C1up", "D1up", "C2dn", "D2dn"]),
                (FRAC_1_SQRT_2, ["C1dn", "D1dn", "C2up", "D2up"]),
            ],
        );
        assert!((state_entropy_ebits(&st).unwrap() - 1.0).abs() < 1e-12);
        assert!(spatial_entropy_ebits(&st).unwrap().abs() < 1e-12);
    }

    #[test]
    fn mismatched_block_spectra_are_rejected() {
        let h = 0.5;
        let st = monomials(
            Statistics::Fermion,
            &[
                (h, ["C1up", "D1up", "C2dn", "D2dn"]),
                (h, ["C1dn", "D1dn", "C2up", "D2up"]),
                (FRAC_1_SQRT_2, ["C1up", "C1dn", "C2up", "C2dn"]),
            ],
        );
        assert_eq!(spatial_entropy_ebits(&st), Err(Error::SpinPathEntangled));
    }

    #[test]
    fn degenerate_block_matrix_decomposes_exactly() {
        // Block-structured coefficient matrix with a fourfold degenerate
        // spectrum on which some complex SVD routines lose accuracy.
        let bs = BeamSplitter::new(
            Complex64::new(0.301623441960029, 0.28859008226016414),
            Complex64::new(-0.6192282121960853, 0.6650529940551331),
        )
        .unwrap();
        let spec = ScenarioSpec::new(Statistics::Boson, "+-".parse().unwrap(), bs);
        let out = crate::scenario::output_state(&spec);
        let result = schmidt(&out).unwrap();
        assert_eq!(result.rank(), 4);
        for c in &result.coefficients {
            assert!((c - 0.5).abs() < 1e-12, "{c}");
        }
        let rebuilt = result.reconstruct().unwrap();
        for (occ, amp) in out.iter() {
            assert!((rebuilt.amplitude(occ) - amp).norm() < 1e-12);
        }
    }
}
