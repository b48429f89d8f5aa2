//! `play-ml` and `play-mu`.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};

use fsg::exec::Exec;
use fsg::formulas::parse_mu;
use fsg::game::Branch;
use fsg::ml_game::{
    exhaustive_duplicator as ml_exhaustive, play_observed, BisimDuplicator, ColoringDuplicator, Labeller, MLPosition, MLSolver,
    MlDuplicator, MlSpoiler, RandomDuplicator, SolverConfig, SolverSpoiler,
};
use fsg::mu_game::{
    exhaustive_duplicator as mu_exhaustive, initial_position, play_mu_with, BisimilarMuDuplicator, GreedyMuDuplicator, MuDuplicator,
    MuPosition, MuSpoiler, PlayOptions, RandomMuSpoiler, ResponseMode, SpoilerAlphabet, SuccinctnessMuDuplicator, UniformStrategy,
};

use crate::commands::SidesArgs;
use crate::error::{CliError, CliResult};
use crate::interactive::{ChoiceSource, MenuMlDuplicator, MenuMlSpoiler, MenuMuDuplicator, MenuMuSpoiler};
use crate::render;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum SpoilerKind {
    Auto,
    Human,
    Script,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum DuplicatorKind {
    Auto,
    Human,
    Script,
    /// Every duplicator answer against the automatic spoiler.
    Exhaustive,
}

#[derive(Args, Debug)]
pub struct PlayersArgs {
    #[arg(long = "s", value_enum, default_value = "auto")]
    pub spoiler: SpoilerKind,
    #[arg(long = "d", value_enum, default_value = "auto")]
    pub duplicator: DuplicatorKind,
    /// Menu indices for `--s script`, one per line.
    #[arg(long)]
    pub s_script: Option<PathBuf>,
    /// Menu indices for `--d script`, one per line.
    #[arg(long)]
    pub d_script: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the transcript as JSON instead of streaming positions.
    #[arg(long)]
    pub json: bool,
    /// Node budget for the solver or the exhaustive search.
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: u64,
}

impl PlayersArgs {
    fn source(&self, script: &Option<PathBuf>, flag: &str) -> CliResult<ChoiceSource> {
        match script {
            Some(path) => ChoiceSource::script(path),
            None => Err(CliError::Usage(format!("script mode needs {flag} FILE"))),
        }
    }
}

#[derive(Args, Debug)]
pub struct PlayMlArgs {
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub sides: SidesArgs,
    #[command(flatten)]
    pub players: PlayersArgs,
}

fn branch_name(b: Option<Branch>) -> &'static str {
    match b {
        Some(Branch::First) => "first",
        Some(Branch::Second) => "second",
        None => "-",
    }
}

pub fn play_ml(args: &PlayMlArgs, exec: Exec, out: &mut dyn Write) -> CliResult<()> {
    let (a, b) = args.sides.load()?;
    let p = MLPosition::new(args.k, a, b);
    let pl = &args.players;
    let labels = Labeller::for_position(p.models());
    let solver = || Arc::new(MLSolver::for_position(&p, SolverConfig { node_budget: pl.budget, exec }));

    if pl.duplicator == DuplicatorKind::Exhaustive {
        if pl.spoiler != SpoilerKind::Auto {
            return Err(CliError::Usage("--d exhaustive needs --s auto".into()));
        }
        let r = ml_exhaustive(&p, &SolverSpoiler::new(solver(), pl.seed))?;
        writeln!(out, "plays: {}", r.plays)?;
        writeln!(out, "spoiler wins: {}", r.spoiler_wins)?;
        writeln!(out, "duplicator wins: {}", r.duplicator_wins)?;
        return Ok(());
    }

    let mut s: Box<dyn MlSpoiler> = match pl.spoiler {
        SpoilerKind::Auto => Box::new(SolverSpoiler::new(solver(), pl.seed)),
        SpoilerKind::Human => Box::new(MenuMlSpoiler { source: ChoiceSource::Human, labels: labels.clone() }),
        SpoilerKind::Script => Box::new(MenuMlSpoiler { source: pl.source(&pl.s_script, "--s-script")?, labels: labels.clone() }),
    };
    let mut d: Box<dyn MlDuplicator> = match pl.duplicator {
        DuplicatorKind::Auto => match ColoringDuplicator::new(&p) {
            Ok(c) => Box::new(c),
            Err(_) => match BisimDuplicator::find(&p) {
                Ok(bd) => Box::new(bd),
                Err(_) => Box::new(RandomDuplicator::new(pl.seed)),
            },
        },
        DuplicatorKind::Human => Box::new(MenuMlDuplicator { source: ChoiceSource::Human, labels: labels.clone() }),
        DuplicatorKind::Script => Box::new(MenuMlDuplicator { source: pl.source(&pl.d_script, "--d-script")?, labels: labels.clone() }),
        DuplicatorKind::Exhaustive => unreachable!("handled above"),
    };

    let mut view = labels;
    let mut io_err = None;
    let json = pl.json;
    let t = play_observed(&p, s.as_mut(), d.as_mut(), &mut |pos, step| {
        if json || io_err.is_some() {
            return;
        }
        let mv = serde_json::to_string(&step.mv).expect("records serialize");
        let r = writeln!(out, "{}", render::ml_position(pos, &mut view))
            .and_then(|_| writeln!(out, "  S: {mv}"))
            .and_then(|_| writeln!(out, "  D: {}", branch_name(step.response)));
        io_err = r.err();
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&t).expect("transcript serializes"))?;
    } else {
        writeln!(out, "winner: {} ({})", t.outcome.winner, t.outcome.reason)?;
    }
    Ok(())
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Responses {
    /// Full subsets and the largest clocks only.
    Dominant,
    All,
}

#[derive(Args, Debug)]
pub struct PlayMuArgs {
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub sides: SidesArgs,
    /// Separating formula for the automatic spoiler; without it the
    /// automatic spoiler plays at random.
    #[arg(long)]
    pub formula: Option<String>,
    #[command(flatten)]
    pub players: PlayersArgs,
    /// Duplicator answers offered to a person, a script or the exhaustive search.
    #[arg(long, value_enum, default_value = "dominant")]
    pub responses: Responses,
    /// Ways to split a set offered to a spoiler menu.
    #[arg(long, default_value_t = 64)]
    pub max_parts: usize,
    /// Include full position dumps in the JSON transcript.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Clone)]
enum AutoMuSpoiler {
    Uniform(UniformStrategy),
    Random(RandomMuSpoiler),
}

impl MuSpoiler for AutoMuSpoiler {
    fn choose(&mut self, p: &MuPosition) -> Result<fsg::mu_game::MuMove, fsg::game::GameError> {
        match self {
            AutoMuSpoiler::Uniform(u) => u.choose(p),
            AutoMuSpoiler::Random(r) => r.choose(p),
        }
    }

    fn positional(&self) -> bool {
        match self {
            AutoMuSpoiler::Uniform(u) => u.positional(),
            AutoMuSpoiler::Random(r) => r.positional(),
        }
    }
}

pub fn play_mu(args: &PlayMuArgs, exec: Exec, out: &mut dyn Write) -> CliResult<()> {
    let (a, b) = args.sides.load()?;
    let p0 = initial_position(&a, &b, args.k);
    let pl = &args.players;
    let mode = match args.responses {
        Responses::Dominant => ResponseMode::Dominant,
        Responses::All => ResponseMode::All,
    };
    let auto = || -> CliResult<AutoMuSpoiler> {
        Ok(match &args.formula {
            Some(text) => AutoMuSpoiler::Uniform(UniformStrategy::new(&parse_mu(text)?, &a, &b, args.k)?),
            None => AutoMuSpoiler::Random(RandomMuSpoiler::new(pl.seed)),
        })
    };

    if pl.duplicator == DuplicatorKind::Exhaustive {
        if pl.spoiler != SpoilerKind::Auto {
            return Err(CliError::Usage("--d exhaustive needs --s auto".into()));
        }
        let r = mu_exhaustive(&p0, &auto()?, mode, pl.budget, exec)?;
        writeln!(out, "plays: {}", r.plays)?;
        writeln!(out, "spoiler wins: {}", r.spoiler_wins)?;
        writeln!(out, "duplicator wins: {}", r.duplicator_wins)?;
        writeln!(out, "nodes: {}", r.nodes)?;
        return Ok(());
    }

    let labels = render::mu_labeller(&p0);
    let alphabet = SpoilerAlphabet { max_parts: args.max_parts, skip_hopeless: false, ..SpoilerAlphabet::default() };
    let mut s: Box<dyn MuSpoiler> = match pl.spoiler {
        SpoilerKind::Auto => Box::new(auto()?),
        SpoilerKind::Human => Box::new(MenuMuSpoiler { source: ChoiceSource::Human, labels: labels.clone(), alphabet }),
        SpoilerKind::Script => {
            Box::new(MenuMuSpoiler { source: pl.source(&pl.s_script, "--s-script")?, labels: labels.clone(), alphabet })
        }
    };
    let mut d: Box<dyn MuDuplicator> = match pl.duplicator {
        DuplicatorKind::Auto => match SuccinctnessMuDuplicator::new(&p0, true) {
            Ok(sd) => Box::new(sd),
            Err(_) => match BisimilarMuDuplicator::new(&p0) {
                Ok(bd) => Box::new(bd),
                Err(_) => Box::new(GreedyMuDuplicator),
            },
        },
        DuplicatorKind::Human => Box::new(MenuMuDuplicator { source: ChoiceSource::Human, labels: labels.clone(), mode }),
        DuplicatorKind::Script => {
            Box::new(MenuMuDuplicator { source: pl.source(&pl.d_script, "--d-script")?, labels: labels.clone(), mode })
        }
        DuplicatorKind::Exhaustive => unreachable!("handled above"),
    };

    let mut view = labels;
    let mut io_err = None;
    let json = pl.json;
    let opts = PlayOptions { dump_positions: args.dump, ..PlayOptions::default() };
    let t = play_mu_with(&p0, s.as_mut(), d.as_mut(), opts, &mut |pos| {
        if json || io_err.is_some() {
            return;
        }
        io_err = writeln!(out, "{}", render::mu_position(pos, &mut view)).err();
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&t).expect("transcript serializes"))?;
    } else {
        writeln!(out, "winner: {} ({})", t.outcome.winner, t.outcome.reason)?;
    }
    Ok(())
}
