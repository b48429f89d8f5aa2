//! Agents that take their choices from a person at the terminal or from a
//! script file. Menus are numbered from 0; a menu with a single entry is
//! taken without asking.

use std::collections::VecDeque;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use fsg::game::{Branch, Fault, GameError};
use fsg::ml_game::{legal_moves, Labeller, MLMove, MLPosition, MlDuplicator, MlSpoiler, MoveMode, MoveRecord};
use fsg::mu_game::{
    d_responses, legal_s_moves, Expect, MuDuplicator, MuMove, MuMoveRecord, MuPosition, MuResponse, MuResponseRecord, MuSpoiler,
    ResponseMode, SpoilerAlphabet,
};

use crate::error::{CliError, CliResult};
use crate::render;

pub enum ChoiceSource {
    Human,
    Script { lines: VecDeque<String>, name: String },
}

impl ChoiceSource {
    /// Script lines are menu indices; blank lines and `#` comments are skipped.
    pub fn script(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Ok(ChoiceSource::Script { lines, name: path.display().to_string() })
    }

    fn pick(&mut self, fault: Fault, header: &str, menu: &[String]) -> Result<usize, GameError> {
        let illegal = |reason: String| GameError::Illegal { fault, reason };
        if menu.is_empty() {
            return Err(GameError::Invariant("empty menu".into()));
        }
        if menu.len() == 1 {
            return Ok(0);
        }
        match self {
            ChoiceSource::Script { lines, name } => {
                let line = lines.pop_front().ok_or_else(|| illegal(format!("script {name} ran out of choices")))?;
                match line.parse::<usize>() {
                    Ok(i) if i < menu.len() => Ok(i),
                    _ => Err(illegal(format!("script {name}: `{line}` is not an index below {}", menu.len()))),
                }
            }
            ChoiceSource::Human => {
                let stderr = io::stderr();
                let mut err = stderr.lock();
                let _ = writeln!(err, "{header}");
                for (i, item) in menu.iter().enumerate() {
                    let _ = writeln!(err, "  [{i}] {item}");
                }
                let stdin = io::stdin();
                let mut input = stdin.lock();
                loop {
                    let _ = write!(err, "{} > ", fault);
                    let _ = err.flush();
                    let mut line = String::new();
                    if input.read_line(&mut line).map_err(|e| illegal(e.to_string()))? == 0 {
                        return Err(illegal("input closed".into()));
                    }
                    match line.trim().parse::<usize>() {
                        Ok(i) if i < menu.len() => return Ok(i),
                        _ => {
                            let _ = writeln!(err, "enter an index below {}", menu.len());
                        }
                    }
                }
            }
        }
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("records serialize")
}

pub struct MenuMlSpoiler {
    pub source: ChoiceSource,
    pub labels: Labeller,
}

impl MlSpoiler for MenuMlSpoiler {
    fn choose(&mut self, p: &MLPosition) -> Result<MLMove, GameError> {
        let moves = legal_moves(p, MoveMode::Pruned)?;
        let menu: Vec<String> = moves.iter().map(|m| json(&MoveRecord::new(m, &mut self.labels))).collect();
        let header = format!("spoiler at {}", render::ml_position(p, &mut self.labels));
        let i = self.source.pick(Fault::Spoiler, &header, &menu)?;
        Ok(moves[i].clone())
    }
}

pub struct MenuMlDuplicator {
    pub source: ChoiceSource,
    pub labels: Labeller,
}

impl MlDuplicator for MenuMlDuplicator {
    fn respond(&mut self, p: &MLPosition, m: &MLMove) -> Result<Option<Branch>, GameError> {
        if !m.needs_branch() {
            return Ok(None);
        }
        let header = format!(
            "duplicator at {} against {}",
            render::ml_position(p, &mut self.labels),
            json(&MoveRecord::new(m, &mut self.labels))
        );
        let i = self.source.pick(Fault::Duplicator, &header, &["first".to_string(), "second".to_string()])?;
        Ok(Some(if i == 0 { Branch::First } else { Branch::Second }))
    }
}

pub struct MenuMuSpoiler {
    pub source: ChoiceSource,
    pub labels: Labeller,
    pub alphabet: SpoilerAlphabet,
}

impl MuSpoiler for MenuMuSpoiler {
    fn choose(&mut self, p: &MuPosition) -> Result<MuMove, GameError> {
        let moves = legal_s_moves(p, self.alphabet)?;
        if moves.is_empty() {
            return Err(GameError::spoiler("no legal move"));
        }
        let menu: Vec<String> = moves.iter().map(|m| json(&MuMoveRecord::new(m, &mut self.labels))).collect();
        let header = format!("spoiler at {}", render::mu_position(p, &mut self.labels));
        let i = self.source.pick(Fault::Spoiler, &header, &menu)?;
        Ok(moves[i].clone())
    }
}

pub struct MenuMuDuplicator {
    pub source: ChoiceSource,
    pub labels: Labeller,
    pub mode: ResponseMode,
}

impl MenuMuDuplicator {
    fn choose(&mut self, p: &MuPosition, m: Option<&MuMove>) -> Result<MuResponse, GameError> {
        let rs = d_responses(p, m, self.mode)?;
        let menu: Vec<String> = rs.iter().map(|r| json(&MuResponseRecord::new(r, &mut self.labels))).collect();
        let against = m.map_or("the opening".to_string(), |m| json(&MuMoveRecord::new(m, &mut self.labels)));
        let header = format!("duplicator at {} against {against}", render::mu_position(p, &mut self.labels));
        let i = self.source.pick(Fault::Duplicator, &header, &menu)?;
        Ok(rs[i].clone())
    }
}

impl MuDuplicator for MenuMuDuplicator {
    fn initial(&mut self, p: &MuPosition) -> Result<MuResponse, GameError> {
        self.choose(p, None)
    }

    fn respond(&mut self, p: &MuPosition, m: &MuMove, e: &Expect) -> Result<MuResponse, GameError> {
        if matches!(e, Expect::Terminal(_)) {
            return Ok(MuResponse::Nothing);
        }
        self.choose(p, Some(m))
    }
}
