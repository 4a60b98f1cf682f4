//! Dense brute-force cross-check of the sparse pipeline.
//!
//! Works in an eight-mode "port" space per scenario: `(side, port, spin)` with
//! port 0 standing for A before the splitter and C after it, port 1 for B / D.
//! The many-body splitter matrix on the four-particle sector is built entry by
//! entry from permanents (bosons) or determinants (fermions) of the
//! single-particle matrix, the `S_x` projectors come from diagonalizing the
//! one-body `S_x` operator, and entropies from reduced density matrices.
//! Only mode labels and the configuration order are shared with the rest of
//! the crate.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fock::{Occupation, Statistics};
use crate::mode::{ModeLabel, Path, Side, Spin};
use crate::report::{Branch, Report, Sector};
use crate::scenario::{ScenarioSpec, Sign};

const PORTS: usize = 8;
const PARTICLES: u8 = 4;
/// Eigenvalues (squared Schmidt coefficients) below this are discarded.
const EIGEN_TOL: f64 = 1e-15;
/// Branch probabilities below this count as impossible.
const ZERO_PROBABILITY: f64 = 1e-18;

type Ports = [u8; PORTS];

fn port(side: usize, port: usize, spin: usize) -> usize {
    side * 4 + port * 2 + spin
}

fn label(p: usize, output: bool) -> ModeLabel {
    let side = Side::ALL[p / 4];
    let path = match ((p / 2) % 2, output) {
        (0, false) => Path::A,
        (1, false) => Path::B,
        (0, true) => Path::C,
        _ => Path::D,
    };
    ModeLabel::new(side, path, Spin::ALL[p % 2])
}

fn to_occupation(cfg: &Ports, output: bool) -> Occupation {
    Occupation::from_modes(
        (0..PORTS).flat_map(|p| std::iter::repeat_n(label(p, output), cfg[p] as usize)),
    )
}

/// The four-particle sector in canonical configuration order.
#[derive(Debug, Clone)]
pub struct DenseBasis {
    pub statistics: Statistics,
    configs: Vec<Ports>,
    index: HashMap<Ports, usize>,
}

impl DenseBasis {
    pub fn new(statistics: Statistics) -> Self {
        let cap = match statistics {
            Statistics::Boson => PARTICLES,
            Statistics::Fermion => 1,
        };
        let mut configs = Vec::new();
        let mut cur = [0u8; PORTS];
        fn rec(i: usize, left: u8, cap: u8, cur: &mut Ports, out: &mut Vec<Ports>) {
            if i == PORTS {
                if left == 0 {
                    out.push(*cur);
                }
                return;
            }
            for n in 0..=left.min(cap) {
                cur[i] = n;
                rec(i + 1, left - n, cap, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, PARTICLES, cap, &mut cur, &mut configs);
        configs.sort_by_key(|c| to_occupation(c, true));
        let index = configs.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Self {
            statistics,
            configs,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[Ports] {
        &self.configs
    }
}

/// A dense amplitude vector over [`DenseBasis`].
#[derive(Debug, Clone)]
pub struct DenseState {
    pub vector: DVector<Complex64>,
}

fn modes_of(cfg: &Ports) -> Vec<usize> {
    (0..PORTS)
        .flat_map(|p| std::iter::repeat_n(p, cfg[p] as usize))
        .collect()
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

/// Many-body matrix of the single-particle map `u` (`u[out][in]`) on the
/// sector, by permanent / determinant of the selected sub-matrix.
pub fn many_body_matrix(basis: &DenseBasis, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let perms = permutations(PARTICLES as usize);
    let dim = basis.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, cin) in basis.configs.iter().enumerate() {
        let ins = modes_of(cin);
        let in_norm: f64 = cin.iter().map(|&n| factorial(n)).product();
        for (row, cout) in basis.configs.iter().enumerate() {
            let outs = modes_of(cout);
            let mut sum = Complex64::default();
            for (p, sign) in &perms {
                let mut prod = Complex64::new(1.0, 0.0);
                for (b, &a) in p.iter().enumerate() {
                    prod *= u[(outs[a], ins[b])];
                }
                sum += match basis.statistics {
                    Statistics::Fermion => prod * *sign,
                    Statistics::Boson => prod,
                };
            }
            if basis.statistics == Statistics::Boson {
                let out_norm: f64 = cout.iter().map(|&n| factorial(n)).product();
                sum /= (in_norm * out_norm).sqrt();
            }
            m[(row, col)] = sum;
        }
    }
    m
}

/// Single-particle port matrix of both splitters: port 0 (A) feeds the first
/// row of the SU(2) matrix, port 1 (B) the second.
pub fn splitter_port_matrix(alpha: Complex64, beta: Complex64) -> DMatrix<Complex64> {
    let mut u = DMatrix::<Complex64>::zeros(PORTS, PORTS);
    for side in 0..2 {
        for spin in 0..2 {
            let (a, b) = (port(side, 0, spin), port(side, 1, spin));
            u[(a, a)] = alpha;
            u[(b, a)] = beta;
            u[(a, b)] = -beta.conj();
            u[(b, b)] = alpha.conj();
        }
    }
    u
}

/// Hadamard on every spin pair: up -> (x+ + x-)/sqrt 2, down -> (x+ - x-)/sqrt 2.
fn spin_hadamard_port_matrix() -> DMatrix<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut u = DMatrix::<Complex64>::zeros(PORTS, PORTS);
    for side in 0..2 {
        for p in 0..2 {
            let (up, dn) = (port(side, p, 0), port(side, p, 1));
            u[(up, up)] = h;
            u[(dn, up)] = h;
            u[(up, dn)] = h;
            u[(dn, dn)] = -h;
        }
    }
    u
}

/// Source state: expand each written monomial and sort it into canonical
/// order, counting transpositions for fermions.
pub fn dense_initial_state(basis: &DenseBasis, spec: &ScenarioSpec) -> DenseState {
    let s = |sign: Sign| if sign == Sign::Plus { 1.0 } else { -1.0 };
    let mut v = DVector::<Complex64>::zeros(basis.dim());
    for (ca, sa) in [(1.0, 0usize), (s(spec.signs.pair_a), 1)] {
        for (cb, sb) in [(1.0, 0usize), (s(spec.signs.pair_b), 1)] {
            // a+(A1, sa) a+(A2, !sa) a+(B1, sb) a+(B2, !sb)
            let written = [
                port(0, 0, sa),
                port(1, 0, 1 - sa),
                port(0, 1, sb),
                port(1, 1, 1 - sb),
            ];
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| written[i] > written[j])
                .count();
            let sign = match basis.statistics {
                Statistics::Fermion if inversions % 2 == 1 => -1.0,
                _ => 1.0,
            };
            let mut cfg = [0u8; PORTS];
            for p in written {
                cfg[p] += 1;
            }
            v[basis.index[&cfg]] += Complex64::new(0.5 * ca * cb * sign, 0.0);
        }
    }
    DenseState { vector: v }
}

/// `a+_to a_from` on a basis configuration; `None` if it annihilates.
fn hop(cfg: &Ports, to: usize, from: usize, statistics: Statistics) -> Option<(Ports, f64)> {
    if cfg[from] == 0 {
        return None;
    }
    let mut next = *cfg;
    let mut coeff = (cfg[from] as f64).sqrt();
    let before = |c: &Ports, m: usize| c[..m].iter().map(|&n| n as u32).sum::<u32>();
    let mut sign = before(&next, from);
    next[from] -= 1;
    if statistics == Statistics::Fermion && next[to] > 0 {
        return None;
    }
    sign += before(&next, to);
    coeff *= (next[to] as f64 + 1.0).sqrt();
    next[to] += 1;
    if statistics == Statistics::Fermion && sign % 2 == 1 {
        coeff = -coeff;
    }
    Some((next, coeff))
}

/// One-body `S_x` of one side: `(1/2) sum_p (a+_{p up} a_{p dn} + h.c.)`.
pub fn sx_operator(basis: &DenseBasis, side: usize) -> DMatrix<Complex64> {
    let dim = basis.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, cfg) in basis.configs.iter().enumerate() {
        for p in 0..2 {
            let (up, dn) = (port(side, p, 0), port(side, p, 1));
            for (to, from) in [(up, dn), (dn, up)] {
                if let Some((next, c)) = hop(cfg, to, from, basis.statistics) {
                    m[(basis.index[&next], col)] += Complex64::new(0.5 * c, 0.0);
                }
            }
        }
    }
    m
}

/// Spectral projectors of a Hermitian matrix onto each of `values`.
fn eigen_projectors(op: &DMatrix<Complex64>, values: &[f64]) -> Vec<DMatrix<Complex64>> {
    let eig = op.clone().symmetric_eigen();
    let dim = op.nrows();
    values
        .iter()
        .map(|&value| {
            let mut p = DMatrix::<Complex64>::zeros(dim, dim);
            for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                if (lambda - value).abs() < 1e-6 {
                    let v = eig.eigenvectors.column(k);
                    p += v * v.adjoint();
                }
            }
            p
        })
        .collect()
}

/// Per-side `S_x` projectors for eigenvalues -1, 0, 1. They do not depend on
/// the splitter, so they are computed once per statistics.
fn sx_projectors(statistics: Statistics) -> &'static [Vec<DMatrix<Complex64>>; 2] {
    static BOSON: OnceLock<[Vec<DMatrix<Complex64>>; 2]> = OnceLock::new();
    static FERMION: OnceLock<[Vec<DMatrix<Complex64>>; 2]> = OnceLock::new();
    let cell = match statistics {
        Statistics::Boson => &BOSON,
        Statistics::Fermion => &FERMION,
    };
    cell.get_or_init(|| {
        let basis = DenseBasis::new(statistics);
        [0, 1].map(|side| eigen_projectors(&sx_operator(&basis, side), &[-1.0, 0.0, 1.0]))
    })
}

fn diagonal_projector<F: Fn(&Ports) -> bool>(basis: &DenseBasis, keep: F) -> DMatrix<Complex64> {
    let dim = basis.dim();
    let mut p = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, cfg) in basis.configs.iter().enumerate() {
        if keep(cfg) {
            p[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

fn side_spin_twice(cfg: &Ports, side: usize) -> i32 {
    (0..2)
        .map(|p| cfg[port(side, p, 0)] as i32 - cfg[port(side, p, 1)] as i32)
        .sum()
}

/// Joint `S_x` projector from the operator eigendecomposition.
pub fn sx_projector_by_eigen(basis: &DenseBasis, values: [i32; 2]) -> DMatrix<Complex64> {
    let [p1, p2] = [0, 1].map(|side| {
        eigen_projectors(&sx_operator(basis, side), &[values[side] as f64]).remove(0)
    });
    p1 * p2
}

/// Joint `S_x` projector by rotating into the x basis, filtering, rotating back.
pub fn sx_projector_by_rotation(basis: &DenseBasis, values: [i32; 2]) -> DMatrix<Complex64> {
    let r = many_body_matrix(basis, &spin_hadamard_port_matrix());
    let d = diagonal_projector(basis, |c| {
        side_spin_twice(c, 0) == 2 * values[0] && side_spin_twice(c, 1) == 2 * values[1]
    });
    r.adjoint() * d * r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DensePattern {
    Antibunch,
    BunchC,
    BunchD,
}

fn side_pattern(cfg: &Ports, side: usize) -> Option<DensePattern> {
    let c = cfg[port(side, 0, 0)] + cfg[port(side, 0, 1)];
    let d = cfg[port(side, 1, 0)] + cfg[port(side, 1, 1)];
    match (c, d) {
        (1, 1) => Some(DensePattern::Antibunch),
        (2, 0) => Some(DensePattern::BunchC),
        (0, 2) => Some(DensePattern::BunchD),
        _ => None,
    }
}

fn pattern_matches(sector: &str, p: Option<DensePattern>) -> bool {
    matches!(
        (sector, p),
        ("antibunch", Some(DensePattern::Antibunch))
            | ("bunch", Some(DensePattern::BunchC | DensePattern::BunchD))
            | ("bunch_C", Some(DensePattern::BunchC))
            | ("bunch_D", Some(DensePattern::BunchD))
    )
}

fn split_side(cfg: &Ports) -> (u16, u16) {
    let key = |s: &[u8]| s.iter().fold(0u16, |acc, &n| acc * 5 + n as u16);
    (key(&cfg[..4]), key(&cfg[4..]))
}

/// Eigenvalues of the side-1 reduced density matrix of a normalized vector,
/// restricted to `rows`.
fn reduced_spectrum(basis: &DenseBasis, v: &DVector<Complex64>, rows: &[usize]) -> Vec<f64> {
    let mut left: HashMap<u16, usize> = HashMap::new();
    let mut right: HashMap<u16, usize> = HashMap::new();
    for &i in rows {
        let (l, r) = split_side(&basis.configs[i]);
        let n = left.len();
        left.entry(l).or_insert(n);
        let n = right.len();
        right.entry(r).or_insert(n);
    }
    let mut psi = DMatrix::<Complex64>::zeros(left.len(), right.len());
    for &i in rows {
        let (l, r) = split_side(&basis.configs[i]);
        psi[(left[&l], right[&r])] = v[i];
    }
    let rho = &psi * psi.adjoint();
    let mut eig: Vec<f64> = rho
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .filter(|&p| p > EIGEN_TOL)
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}

fn entropy(spectrum: &[f64]) -> f64 {
    spectrum.iter().map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

fn dense_entropy(basis: &DenseBasis, v: &DVector<Complex64>) -> f64 {
    let rows: Vec<usize> = (0..basis.dim()).filter(|&i| v[i].norm() > 0.0).collect();
    entropy(&reduced_spectrum(basis, v, &rows))
}

/// Total entropy minus the common per-path-block entropy; `None` when the
/// blocks disagree.
fn dense_spatial_entropy(basis: &DenseBasis, v: &DVector<Complex64>) -> Option<f64> {
    let mut blocks: HashMap<([u8; 2], [u8; 2]), Vec<usize>> = HashMap::new();
    for (i, cfg) in basis.configs.iter().enumerate() {
        if v[i].norm() > 0.0 {
            let counts = |s| {
                [
                    cfg[port(s, 0, 0)] + cfg[port(s, 0, 1)],
                    cfg[port(s, 1, 0)] + cfg[port(s, 1, 1)],
                ]
            };
            blocks.entry((counts(0), counts(1))).or_default().push(i);
        }
    }
    let mut first: Option<Vec<f64>> = None;
    for rows in blocks.values() {
        let weight: f64 = rows.iter().map(|&i| v[i].norm_sqr()).sum();
        if weight.sqrt() < 1e-9 {
            continue;
        }
        let scaled = v / Complex64::new(weight.sqrt(), 0.0);
        let spec = reduced_spectrum(basis, &scaled, rows);
        match &first {
            None => first = Some(spec),
            Some(f) => {
                let same =
                    f.len() == spec.len() && f.iter().zip(&spec).all(|(a, b)| (a - b).abs() <= 1e-9);
                if !same {
                    return None;
                }
            }
        }
    }
    let spatial = dense_entropy(basis, v) - entropy(&first.unwrap_or_default());
    (spatial >= -1e-9).then_some(spatial.max(0.0))
}

fn dense_branch(
    basis: &DenseBasis,
    kept: DVector<Complex64>,
    observable: &str,
    sector: Sector,
) -> Branch {
    let probability = kept.norm_squared();
    if probability < ZERO_PROBABILITY {
        return Branch::impossible(observable, sector);
    }
    let mut post = kept / Complex64::new(probability.sqrt(), 0.0);
    for a in post.iter_mut() {
        if a.norm() < 1e-12 {
            *a = Complex64::default();
        }
    }
    Branch {
        observable: observable.to_string(),
        sector,
        probability,
        post_state_entropy_ebits: Some(dense_entropy(basis, &post)),
        spatial_entropy_ebits: dense_spatial_entropy(basis, &post),
    }
}

fn diagonal_filter<F: Fn(&Ports) -> bool>(
    basis: &DenseBasis,
    psi: &DVector<Complex64>,
    keep: F,
) -> DVector<Complex64> {
    DVector::from_iterator(
        basis.dim(),
        basis
            .configs
            .iter()
            .zip(psi.iter())
            .map(|(c, a)| if keep(c) { *a } else { Complex64::default() }),
    )
}

/// Every branch probability and entropy computed by the dense route.
pub fn dense_evaluate(spec: &ScenarioSpec) -> Report {
    let basis = DenseBasis::new(spec.statistics);
    let u = splitter_port_matrix(spec.bs.alpha(), spec.bs.beta());
    let psi0 = dense_initial_state(&basis, spec);
    let psi = many_body_matrix(&basis, &u) * &psi0.vector;

    let mut branches = Vec::new();
    for s1 in [0, 1] {
        for s2 in [0, 1] {
            let kept = diagonal_filter(&basis, &psi, |c| {
                side_spin_twice(c, 0).abs() == 2 * s1 && side_spin_twice(c, 1).abs() == 2 * s2
            });
            branches.push(dense_branch(&basis, kept, "sz_abs", Sector::spin(s1, s2)));
        }
    }
    let sx = sx_projectors(spec.statistics);
    for (i1, s1) in [-1, 0, 1].into_iter().enumerate() {
        for (i2, s2) in [-1, 0, 1].into_iter().enumerate() {
            let kept = &sx[0][i1] * (&sx[1][i2] * &psi);
            branches.push(dense_branch(&basis, kept, "sx", Sector::spin(s1, s2)));
        }
    }
    for (observable, names) in [
        ("path", &["antibunch", "bunch"][..]),
        ("path_detail", &["antibunch", "bunch_C", "bunch_D"][..]),
    ] {
        for a in names {
            for b in names {
                let kept = diagonal_filter(&basis, &psi, |c| {
                    pattern_matches(a, side_pattern(c, 0)) && pattern_matches(b, side_pattern(c, 1))
                });
                branches.push(dense_branch(&basis, kept, observable, Sector::paths(a, b)));
            }
        }
    }
    Report::new(spec, dense_entropy(&basis, &psi), branches)
}

/// Dense state after both splitters, for direct comparison with the sparse
/// route (amplitudes keyed by full occupation).
pub fn dense_output_amplitudes(spec: &ScenarioSpec) -> Vec<(Occupation, Complex64)> {
    let basis = DenseBasis::new(spec.statistics);
    let u = splitter_port_matrix(spec.bs.alpha(), spec.bs.beta());
    let psi = many_body_matrix(&basis, &u) * dense_initial_state(&basis, spec).vector;
    basis
        .configs
        .iter()
        .zip(psi.iter())
        .map(|(c, a)| (to_occupation(c, true), *a))
        .collect()
}

/// One mismatch between two reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub branch: String,
    pub field: &'static str,
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: {:?} vs {:?}",
            self.branch, self.field, self.left, self.right
        )
    }
}

/// Lists every probability or entropy that differs by more than `tol`.
pub fn compare(sparse: &Report, dense: &Report, tol: f64) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    let mut check = |branch: &str, field: &'static str, a: Option<f64>, b: Option<f64>| {
        let ok = match (a, b) {
            (Some(x), Some(y)) => (x - y).abs() <= tol,
            (None, None) => true,
            _ => false,
        };
        if !ok {
            out.push(Discrepancy {
                branch: branch.to_string(),
                field,
                left: a,
                right: b,
            });
        }
    };
    check(
        "total",
        "entropy",
        Some(sparse.total_entropy_ebits),
        Some(dense.total_entropy_ebits),
    );
    let dense_by_key: HashMap<String, &Branch> =
        dense.branches.iter().map(|b| (b.key(), b)).collect();
    for b in &sparse.branches {
        let key = b.key();
        match dense_by_key.get(&key) {
            None => check(&key, "presence", Some(1.0), None),
            Some(d) => {
                check(&key, "probability", Some(b.probability), Some(d.probability));
                check(
                    &key,
                    "post_state_entropy",
                    b.post_state_entropy_ebits,
                    d.post_state_entropy_ebits,
                );
                check(
                    &key,
                    "spatial_entropy",
                    b.spatial_entropy_ebits,
                    d.spatial_entropy_ebits,
                );
            }
        }
    }
    let sparse_keys: std::collections::HashSet<String> =
        sparse.branches.iter().map(Branch::key).collect();
    for d in &dense.branches {
        if !sparse_keys.contains(&d.key()) {
            check(&d.key(), "presence", None, Some(1.0));
        }
    }
    out
}
