//! Scenario reports: every branch probability and entropy for one scenario,
//! with deterministic JSON / CSV / text rendering.
//!
//! JSON is the canonical form. Numbers are written with 17 significant digits
//! in exponent notation so repeated runs are byte-identical.

use std::fmt::Write as _;

use serde_json::{json, Map, Number, Value};

use crate::entanglement::{spatial_entropy_ebits, state_entropy_ebits};
use crate::error::Result;
use crate::fock::FockState;
use crate::measurement::{
    project_path, project_sx, project_sz_sectors, sz_abs, MeasurementOutcome, PathPattern,
};
use crate::scenario::{output_state, ScenarioSpec};

/// Completeness groups, in report order.
pub const OBSERVABLES: [&str; 4] = ["sz_abs", "sx", "path", "path_detail"];

/// Per-side sector label, written `side1:side2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sector(pub String);

impl Sector {
    pub fn spin(side1: i32, side2: i32) -> Self {
        Sector(format!("{side1}:{side2}"))
    }

    pub fn paths(side1: &str, side2: &str) -> Self {
        Sector(format!("{side1}:{side2}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub observable: String,
    pub sector: Sector,
    pub probability: f64,
    pub post_state_entropy_ebits: Option<f64>,
    /// `None` when the branch is impossible or spin does not factor out.
    pub spatial_entropy_ebits: Option<f64>,
}

impl Branch {
    pub fn impossible(observable: &str, sector: Sector) -> Self {
        Self {
            observable: observable.to_string(),
            sector,
            probability: 0.0,
            post_state_entropy_ebits: None,
            spatial_entropy_ebits: None,
        }
    }

    pub fn key(&self) -> String {
        format!("{}[{}]", self.observable, self.sector.as_str())
    }

    fn from_outcome(observable: &str, sector: Sector, outcome: MeasurementOutcome) -> Self {
        match outcome.state {
            None => Branch::impossible(observable, sector),
            Some(state) => Branch {
                observable: observable.to_string(),
                sector,
                probability: outcome.probability,
                post_state_entropy_ebits: state_entropy_ebits(&state).ok(),
                spatial_entropy_ebits: spatial_entropy_ebits(&state).ok(),
            },
        }
    }
}

/// One configuration of a term listing.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub amplitude_re: f64,
    pub amplitude_im: f64,
    pub configuration: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub statistics: String,
    pub signs: String,
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub total_entropy_ebits: f64,
    pub branches: Vec<Branch>,
    pub terms: Option<Vec<Term>>,
}

impl Report {
    pub fn new(spec: &ScenarioSpec, total_entropy_ebits: f64, branches: Vec<Branch>) -> Self {
        let (a, b) = (spec.bs.alpha(), spec.bs.beta());
        Self {
            statistics: spec.statistics.name().to_string(),
            signs: spec.signs.to_string(),
            alpha: (a.re, a.im),
            beta: (b.re, b.im),
            total_entropy_ebits,
            branches,
            terms: None,
        }
    }

    pub fn branch(&self, observable: &str, sector: &str) -> Option<&Branch> {
        self.branches
            .iter()
            .find(|b| b.observable == observable && b.sector.as_str() == sector)
    }

    /// Sum of branch probabilities for one completeness group.
    pub fn group_total(&self, observable: &str) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.observable == observable)
            .map(|b| b.probability)
            .sum()
    }

    pub fn to_json_value(&self) -> Value {
        let mut root = Map::new();
        root.insert(
            "scenario".into(),
            json!({
                "statistics": self.statistics,
                "signs": self.signs,
                "alpha": { "re": num(self.alpha.0), "im": num(self.alpha.1) },
                "beta": { "re": num(self.beta.0), "im": num(self.beta.1) },
            }),
        );
        root.insert("total_entropy_ebits".into(), num(self.total_entropy_ebits));
        let branches = self
            .branches
            .iter()
            .map(|b| {
                json!({
                    "observable": b.observable,
                    "sector": b.sector.as_str(),
                    "probability": num(b.probability),
                    "post_state_entropy_ebits": opt_num(b.post_state_entropy_ebits),
                    "spatial_entropy_ebits": opt_num(b.spatial_entropy_ebits),
                })
            })
            .collect();
        root.insert("branches".into(), Value::Array(branches));
        if let Some(terms) = &self.terms {
            root.insert("phase_note".into(), Value::String(PHASE_NOTE.into()));
            root.insert("terms".into(), terms_json(terms));
        }
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value())
            .expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "statistics,signs,alpha_re,alpha_im,beta_re,beta_im,observable,sector,probability,post_state_entropy_ebits,spatial_entropy_ebits\n",
        );
        let prefix = format!(
            "{},{},{},{},{},{}",
            self.statistics,
            self.signs,
            fmt_f64(self.alpha.0),
            fmt_f64(self.alpha.1),
            fmt_f64(self.beta.0),
            fmt_f64(self.beta.1)
        );
        let _ = writeln!(
            out,
            "{prefix},total,all,{},{},",
            fmt_f64(1.0),
            fmt_f64(self.total_entropy_ebits)
        );
        for b in &self.branches {
            let _ = writeln!(
                out,
                "{prefix},{},{},{},{},{}",
                b.observable,
                b.sector.as_str(),
                fmt_f64(b.probability),
                fmt_opt(b.post_state_entropy_ebits),
                fmt_opt(b.spatial_entropy_ebits)
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "statistics {}  signs {}  alpha {}{:+}i  beta {}{:+}i",
            self.statistics, self.signs, self.alpha.0, self.alpha.1, self.beta.0, self.beta.1
        );
        let _ = writeln!(
            out,
            "total entropy: {} e-bits",
            fmt_f64(self.total_entropy_ebits)
        );
        let _ = writeln!(
            out,
            "{:<12} {:<22} {:<24} {:<24} {:<24}",
            "observable", "sector", "probability", "entropy", "spatial"
        );
        for b in &self.branches {
            let _ = writeln!(
                out,
                "{:<12} {:<22} {:<24} {:<24} {:<24}",
                b.observable,
                b.sector.as_str(),
                fmt_f64(b.probability),
                fmt_opt(b.post_state_entropy_ebits),
                fmt_opt(b.spatial_entropy_ebits)
            );
        }
        out
    }
}

pub const PHASE_NOTE: &str =
    "amplitudes use a fixed convention; the global phase is conventional";

/// Fixed 17-significant-digit rendering with a signed exponent, e.g.
/// `6.6666666666666663e-1`, `2.0000000000000000e+0`. `-0` is written as `0`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn num(x: f64) -> Value {
    let n: Number = fmt_f64(x).parse().expect("formatted float is valid JSON");
    Value::Number(n)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

fn terms_json(terms: &[Term]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| {
                json!({
                    "amplitude_re": num(t.amplitude_re),
                    "amplitude_im": num(t.amplitude_im),
                    "configuration": t.configuration,
                })
            })
            .collect(),
    )
}

/// Term listing of a state, canonical configuration order.
pub fn terms_of(state: &FockState) -> Vec<Term> {
    state
        .iter()
        .map(|(occ, amp)| Term {
            amplitude_re: amp.re,
            amplitude_im: amp.im,
            configuration: occ.labels(),
        })
        .collect()
}

/// Which `|S_z|` component a term listing keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Sz0,
    Sz1,
    All,
}

impl Component {
    pub fn keeps(self, state: &FockState) -> FockState {
        match self {
            Component::All => state.clone(),
            Component::Sz0 => state.filter(|o| sz_abs(o) == [0, 0]),
            Component::Sz1 => state.filter(|o| sz_abs(o) == [1, 1]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Sz0 => "sz0",
            Component::Sz1 => "sz1",
            Component::All => "all",
        }
    }
}

/// Post-splitter configurations of `spec`, filtered by spin-z component and
/// not renormalized.
pub fn term_listing(spec: &ScenarioSpec, component: Component) -> Vec<Term> {
    terms_of(&component.keeps(&output_state(spec)))
}

/// The term-listing document printed by the `terms` command.
pub fn terms_document(spec: &ScenarioSpec, component: Component) -> Value {
    let report = Report::new(spec, 0.0, Vec::new());
    let scenario = report.to_json_value()["scenario"].clone();
    json!({
        "scenario": scenario,
        "component": component.name(),
        "phase_note": PHASE_NOTE,
        "terms": terms_json(&term_listing(spec, component)),
    })
}

/// Evaluates every branch of `spec` along the sparse route.
pub fn evaluate(spec: &ScenarioSpec) -> Result<Report> {
    let state = output_state(spec);
    let total = state_entropy_ebits(&state)?;
    let mut branches = Vec::new();
    for s1 in [0, 1] {
        for s2 in [0, 1] {
            let out = project_sz_sectors(&state, [s1, s2])?;
            branches.push(Branch::from_outcome("sz_abs", Sector::spin(s1, s2), out));
        }
    }
    for s1 in [-1, 0, 1] {
        for s2 in [-1, 0, 1] {
            let out = project_sx(&state, [s1, s2])?;
            branches.push(Branch::from_outcome("sx", Sector::spin(s1, s2), out));
        }
    }
    let coarse = [PathPattern::Antibunch, PathPattern::Bunch];
    for (observable, patterns) in [("path", &coarse[..]), ("path_detail", &PathPattern::EXCLUSIVE[..])] {
        for &a in patterns {
            for &b in patterns {
                let out = project_path(&state, [a, b])?;
                branches.push(Branch::from_outcome(
                    observable,
                    Sector::paths(a.name(), b.name()),
                    out,
                ));
            }
        }
    }
    Ok(Report::new(spec, total, branches))
}

/// Sweep columns: `theta`, total entropy, then probability and entropy of
/// every branch.
pub fn sweep_header(sample: &Report) -> String {
    let mut cols = vec!["theta".to_string(), "total_entropy_ebits".to_string()];
    for b in &sample.branches {
        cols.push(format!("{}_probability", b.key()));
        cols.push(format!("{}_entropy_ebits", b.key()));
    }
    cols.join(",")
}

pub fn sweep_row(theta: f64, report: &Report) -> String {
    let mut cols = vec![fmt_f64(theta), fmt_f64(report.total_entropy_ebits)];
    for b in &report.branches {
        cols.push(fmt_f64(b.probability));
        cols.push(fmt_opt(b.post_state_entropy_ebits));
    }
    cols.join(",")
}
