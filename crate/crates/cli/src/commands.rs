use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use fsg::exec::Exec;
use fsg::formulas::{parse_ml, parse_ml2, parse_mu};
use fsg::game::Player;
use fsg::kripke::{KripkeModel, PointedModel};
use fsg::ml_game::{MLPosition, MLSolver, SolverConfig, Synthesizer};
use fsg::semantics::{bisimilar, denote_ml, denote_mu, eval_ml2, n_bisimilar, Valuation, WorldSet};
use fsg::succinctness::{
    chromatic_number, experiment_fo_ml2_sizes, experiment_ml_lower_bound, experiment_mu_lower_bound, experiment_notbisim, rows_to_csv,
    rows_to_json, size_table, size_table_csv, ExperimentConfig, Status,
};

use crate::error::{CliError, CliResult};
use crate::input::{load_graph, load_model, load_models};

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Logic {
    Ml,
    Mu,
    Ml2,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub logic: Logic,
    #[arg(long)]
    pub formula: String,
    #[arg(long)]
    pub model: PathBuf,
    /// Evaluate here instead of at the model's point.
    #[arg(long)]
    pub point: Option<String>,
    /// Second coordinate for two-dimensional formulas; defaults to the point.
    #[arg(long)]
    pub point2: Option<String>,
}

fn world_set(m: &KripkeModel, s: &WorldSet) -> String {
    let names: Vec<&str> = s.ones().map(|w| m.name(w as u32)).collect();
    format!("{{{}}}", names.join(", "))
}

fn world(m: &KripkeModel, name: &str) -> CliResult<u32> {
    m.world(name).ok_or_else(|| CliError::Input(format!("unknown world `{name}`")))
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut pm = load_model(&args.model)?;
    if let Some(w) = &args.point {
        pm = PointedModel::new(pm.model.clone(), w)?;
    }
    let m = &pm.model;
    let at = pm.point_name().to_string();
    match args.logic {
        Logic::Ml => {
            let f = parse_ml(&args.formula)?;
            let s = denote_ml(&f, m);
            writeln!(out, "denotation: {}", world_set(m, &s))?;
            writeln!(out, "at {at}: {}", s.contains(pm.point as usize))?;
        }
        Logic::Mu => {
            let f = parse_mu(&args.formula)?;
            let s = denote_mu(&f, m, &mut Valuation::new())?;
            writeln!(out, "denotation: {}", world_set(m, &s))?;
            writeln!(out, "at {at}: {}", s.contains(pm.point as usize))?;
        }
        Logic::Ml2 => {
            let f = parse_ml2(&args.formula)?;
            let v = match &args.point2 {
                Some(name) => world(m, name)?,
                None => pm.point,
            };
            let mut pairs = Vec::new();
            for a in m.worlds() {
                for b in m.worlds() {
                    if eval_ml2(&f, m, a, b) {
                        pairs.push(format!("({}, {})", m.name(a), m.name(b)));
                    }
                }
            }
            writeln!(out, "denotation: {{{}}}", pairs.join(", "))?;
            writeln!(out, "at ({at}, {}): {}", m.name(v), eval_ml2(&f, m, pm.point, v))?;
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct BisimArgs {
    /// Depth of the bisimulation check.
    #[arg(long, required_unless_present = "full")]
    pub n: Option<usize>,
    /// Full bisimilarity instead of a bounded depth.
    #[arg(long)]
    pub full: bool,
    pub first: PathBuf,
    pub second: PathBuf,
}

pub fn bisim(args: &BisimArgs, out: &mut dyn Write) -> CliResult<()> {
    let a = load_model(&args.first)?;
    let b = load_model(&args.second)?;
    match (args.full, args.n) {
        (false, Some(n)) => writeln!(out, "{n}-bisimilar: {}", n_bisimilar(&a, &b, n))?,
        _ => writeln!(out, "bisimilar: {}", bisimilar(&a, &b))?,
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SidesArgs {
    /// Models that must satisfy the formula; files or directories.
    #[arg(long = "a", num_args = 1.., required = true)]
    pub a: Vec<PathBuf>,
    /// Models that must falsify it.
    #[arg(long = "b", num_args = 1.., required = true)]
    pub b: Vec<PathBuf>,
}

impl SidesArgs {
    pub fn load(&self) -> CliResult<(Vec<PointedModel>, Vec<PointedModel>)> {
        Ok((load_models(&self.a)?, load_models(&self.b)?))
    }
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    pub sides: SidesArgs,
    #[arg(long)]
    pub max: usize,
}

pub fn synth(args: &SynthArgs, exec: Exec, out: &mut dyn Write) -> CliResult<()> {
    let (a, b) = args.sides.load()?;
    match Synthesizer::new(&a, &b, exec).min_separator(args.max) {
        Some((f, size)) => {
            writeln!(out, "{f}")?;
            writeln!(out, "size: {size}")?;
        }
        None => writeln!(out, "none ≤ {}", args.max)?,
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub sides: SidesArgs,
    /// Positions the solver may expand before giving up.
    #[arg(long, default_value_t = SolverConfig::default().node_budget)]
    pub budget: u64,
}

pub fn solve_ml(args: &SolveArgs, exec: Exec, out: &mut dyn Write) -> CliResult<()> {
    let (a, b) = args.sides.load()?;
    let p = MLPosition::new(args.k, a, b);
    let v = MLSolver::for_position(&p, SolverConfig { node_budget: args.budget, exec }).solve(&p)?;
    writeln!(out, "{} wins", v.winner)?;
    if let Some(r) = v.reason {
        writeln!(out, "reason: {}", serde_json::to_value(r).expect("serializes").as_str().unwrap_or_default())?;
    }
    if let (Player::Spoiler, Some(f)) = (v.winner, &v.witness) {
        writeln!(out, "witness: {f}")?;
        writeln!(out, "size: {}", f.size())?;
    }
    Ok(())
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    MlLowerBound,
    MuLowerBound,
    FoMl2Sizes,
    Notbisim,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    /// The size table; only for `fo-ml2-sizes`, where it is the default.
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Family level; for `fo-ml2-sizes` the largest level in the table.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plays of the coloring duplicator against the solver spoiler.
    #[arg(long, default_value_t = ExperimentConfig::default().plays)]
    pub plays: usize,
    /// Node budget of the bounded spoiler search.
    #[arg(long, default_value_t = ExperimentConfig::default().mu_node_budget)]
    pub mu_budget: u64,
    /// Ways to split a set that the bounded spoiler search tries; by
    /// default exact at levels 1 and 2 and a sample of 16 at level 3.
    #[arg(long)]
    pub max_parts: Option<usize>,
}

pub fn experiment(args: &ExperimentArgs, exec: Exec, out: &mut dyn Write) -> CliResult<()> {
    let cfg = ExperimentConfig {
        exec,
        seed: args.seed,
        plays: args.plays,
        mu_node_budget: args.mu_budget,
        mu_max_parts: args.max_parts,
        ..ExperimentConfig::default()
    };
    let format = args.format.unwrap_or(if args.suite == Suite::FoMl2Sizes { Format::Table } else { Format::Csv });
    let text = if format == Format::Table {
        if args.suite != Suite::FoMl2Sizes {
            return Err(CliError::Usage("--format table is only available for fo-ml2-sizes".into()));
        }
        size_table_csv(&size_table(args.n)?)
    } else {
        let rows = match args.suite {
            Suite::MlLowerBound => experiment_ml_lower_bound(args.n, &cfg)?,
            Suite::MuLowerBound => experiment_mu_lower_bound(args.n, &cfg)?,
            Suite::FoMl2Sizes => experiment_fo_ml2_sizes(args.n)?,
            Suite::Notbisim => experiment_notbisim(args.n)?,
        };
        let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
        if failed > 0 {
            eprintln!("{failed} of {} checks failed", rows.len());
        }
        match format {
            Format::Json => rows_to_json(&rows) + "\n",
            _ => rows_to_csv(&rows).map_err(|e| CliError::Internal(e.to_string()))?,
        }
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ChromaArgs {
    pub graph: PathBuf,
}

pub fn chroma(args: &ChromaArgs, out: &mut dyn Write) -> CliResult<()> {
    let (g, names) = load_graph(&args.graph)?;
    let (chi, colors) = chromatic_number(&g)?;
    writeln!(out, "chromatic number: {chi}")?;
    let assignment: Vec<String> = names.iter().zip(&colors).map(|(v, c)| format!("{v}={c}")).collect();
    writeln!(out, "coloring: {}", assignment.join(" "))?;
    Ok(())
}
