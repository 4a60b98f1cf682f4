use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use spinspace::oracle::{compare, dense_evaluate};
use spinspace::report::{
    evaluate, sweep_header, sweep_row, terms_document, Component, Report,
};
use spinspace::{BeamSplitter, Error, ScenarioSpec, Signs, Statistics};

const EXIT_INVALID: u8 = 2;
const EXIT_ORACLE_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "spinspace", version, about = "Entangled pairs at beam splitters, in second quantization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Branch probabilities and entropies for one scenario.
    Scenario(ScenarioArgs),
    /// Post-splitter configurations and amplitudes.
    Terms {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "all")]
        component: ComponentArg,
    },
    /// Branch table over the mixing angle theta in [0, pi/2].
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        grid: usize,
    },
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    #[arg(long, value_enum, default_value = "fermion")]
    statistics: StatisticsArg,
    /// One of ++, +-, -+, -- (pass as --signs=-- if the shell needs it).
    #[arg(long, default_value = "++", allow_hyphen_values = true)]
    signs: String,
    /// Complex alpha as RE,IM.
    #[arg(long, allow_hyphen_values = true, requires = "beta", conflicts_with = "bs")]
    alpha: Option<String>,
    /// Complex beta as RE,IM.
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<String>,
    /// Named splitter; only 50/50 is defined.
    #[arg(long, value_parser = ["50/50"])]
    bs: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Recompute with the dense oracle; exit 3 on any mismatch.
    #[arg(long)]
    check_oracle: bool,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticsArg {
    Boson,
    Fermion,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComponentArg {
    Sz0,
    Sz1,
    All,
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let bad = || Error::InvalidComplex(s.to_string());
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

impl ScenarioArgs {
    fn statistics(&self) -> Statistics {
        match self.statistics {
            StatisticsArg::Boson => Statistics::Boson,
            StatisticsArg::Fermion => Statistics::Fermion,
        }
    }

    fn spec(&self) -> Result<ScenarioSpec, Error> {
        let signs: Signs = self.signs.parse()?;
        let bs = match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => BeamSplitter::new(parse_complex(a)?, parse_complex(b)?)?,
            _ => BeamSplitter::fifty_fifty(),
        };
        Ok(ScenarioSpec::new(self.statistics(), signs, bs))
    }
}

enum Failure {
    Invalid(String),
    Oracle(String),
    Io(String),
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    }
}

fn oracle_check(spec: &ScenarioSpec, report: &Report) -> Result<(), Failure> {
    let diffs = compare(report, &dense_evaluate(spec), 1e-9);
    if diffs.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = diffs.iter().map(|d| d.to_string()).collect();
    Err(Failure::Oracle(format!(
        "oracle mismatch for {} {}:\n{}",
        spec.statistics,
        spec.signs,
        lines.join("\n")
    )))
}

fn cmd_scenario(args: &ScenarioArgs) -> Result<(), Failure> {
    let spec = args.spec().map_err(|e| Failure::Invalid(e.to_string()))?;
    let report = evaluate(&spec).map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(&render(&report, args.format), &args.out)?;
    if args.check_oracle {
        oracle_check(&spec, &report)?;
    }
    Ok(())
}

fn cmd_terms(args: &ScenarioArgs, component: ComponentArg) -> Result<(), Failure> {
    let spec = args.spec().map_err(|e| Failure::Invalid(e.to_string()))?;
    let component = match component {
        ComponentArg::Sz0 => Component::Sz0,
        ComponentArg::Sz1 => Component::Sz1,
        ComponentArg::All => Component::All,
    };
    let doc = terms_document(&spec, component);
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("terms serialize");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let sep = if args.format == Format::Csv { "," } else { "  " };
            let mut s = if args.format == Format::Csv {
                String::from("amplitude_re,amplitude_im,configuration\n")
            } else {
                format!("# {}\n", spinspace::report::PHASE_NOTE)
            };
            for t in doc["terms"].as_array().into_iter().flatten() {
                let cfg: Vec<&str> = t["configuration"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .filter_map(|c| c.as_str())
                    .collect();
                s.push_str(&format!(
                    "{}{sep}{}{sep}{}\n",
                    t["amplitude_re"],
                    t["amplitude_im"],
                    cfg.join(" ")
                ));
            }
            s
        }
    };
    emit(&text, &args.out)?;
    if args.check_oracle {
        let report = evaluate(&spec).map_err(|e| Failure::Invalid(e.to_string()))?;
        oracle_check(&spec, &report)?;
    }
    Ok(())
}

fn cmd_sweep(args: &ScenarioArgs, grid: usize) -> Result<(), Failure> {
    if grid < 2 {
        return Err(Failure::Invalid(format!("--grid must be at least 2 (got {grid})")));
    }
    let base = args.spec().map_err(|e| Failure::Invalid(e.to_string()))?;
    let thetas: Vec<f64> = (0..grid)
        .map(|k| FRAC_PI_2 * k as f64 / (grid - 1) as f64)
        .collect();
    let rows: Vec<Result<(f64, ScenarioSpec, Report), Failure>> = thetas
        .par_iter()
        .map(|&theta| {
            let spec = ScenarioSpec {
                bs: BeamSplitter::from_mixing_angle(theta),
                ..base
            };
            let report = evaluate(&spec).map_err(|e| Failure::Invalid(e.to_string()))?;
            Ok((theta, spec, report))
        })
        .collect();
    let rows: Vec<(f64, ScenarioSpec, Report)> = rows.into_iter().collect::<Result<_, _>>()?;
    let mut text = format!("{}\n", sweep_header(&rows[0].2));
    for (theta, _, report) in &rows {
        text.push_str(&sweep_row(*theta, report));
        text.push('\n');
    }
    emit(&text, &args.out)?;
    if args.check_oracle {
        for (_, spec, report) in &rows {
            oracle_check(spec, report)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scenario(args) => cmd_scenario(args),
        Command::Terms {
            scenario,
            component,
        } => cmd_terms(scenario, *component),
        Command::Sweep { scenario, grid } => cmd_sweep(scenario, *grid),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Oracle(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_ORACLE_MISMATCH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
