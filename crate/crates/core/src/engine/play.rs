//! Full-game orchestration and replayable logs.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::rng::{derive_seed, GameRng};

use super::{new_game, Action, EngineError, Event, GameConfig, GameState, Phase};

/// A per-player decision callback. Implementations report internal
/// fallbacks (parse failures, policy errors) through `take_error_count` so
/// match results can account for them.
pub trait Decider {
    fn name(&self) -> &str;

    fn decide(&mut self, state: &GameState, legal: &[Action]) -> Action;

    /// Errors absorbed internally since the last call (decider-specific:
    /// model parse fallbacks, policy runtime errors). Defaults to none.
    fn take_error_count(&mut self) -> u32 {
        0
    }
}

/// Per-game outcome summary; the unit all metrics aggregate over.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MatchResult {
    pub winner: Option<usize>,
    /// Total victory points including hidden cards, per player.
    pub vp: [u32; 2],
    pub turns: u32,
    pub turn_capped: bool,
    pub settlements: [u32; 2],
    pub cities: [u32; 2],
    pub road_pieces: [u32; 2],
    pub longest_road_held: [bool; 2],
    pub largest_army_held: [bool; 2],
    pub dev_vp: [u32; 2],
    /// Actions rejected as illegal and replaced by the random fallback.
    pub illegal_actions: [u32; 2],
    /// Errors the deciders absorbed internally (parse/policy fallbacks).
    pub decider_errors: [u32; 2],
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_path: Option<String>,
}

impl MatchResult {
    fn from_state(state: &GameState, seed: u64, illegal: [u32; 2], errors: [u32; 2]) -> Self {
        let turns = if state.turn_capped {
            state.config.max_turns
        } else {
            state.turn_index + 1
        };
        MatchResult {
            winner: state.winner,
            vp: [state.victory_points(0, true), state.victory_points(1, true)],
            turns,
            turn_capped: state.turn_capped,
            settlements: [
                state.players[0].settlement_count(),
                state.players[1].settlement_count(),
            ],
            cities: [state.players[0].city_count(), state.players[1].city_count()],
            road_pieces: [state.players[0].road_count(), state.players[1].road_count()],
            longest_road_held: [
                state.longest_road_holder == Some(0),
                state.longest_road_holder == Some(1),
            ],
            largest_army_held: [
                state.largest_army_holder == Some(0),
                state.largest_army_holder == Some(1),
            ],
            dev_vp: [
                state.players[0].hidden_vp_cards(),
                state.players[1].hidden_vp_cards(),
            ],
            illegal_actions: illegal,
            decider_errors: errors,
            seed,
            log_path: None,
        }
    }
}

/// A finished game: everything needed to replay it bit-exactly.
#[derive(Clone, PartialEq, Debug)]
pub struct GameLog {
    pub config: GameConfig,
    pub seed: u64,
    pub events: Vec<Event>,
    pub result: MatchResult,
}

#[derive(Serialize, Deserialize)]
struct LogHeader {
    config: GameConfig,
    seed: u64,
}

impl GameLog {
    /// Write as JSON lines: a header line with (config, seed), one event
    /// per line, and the match result as the final line. Byte-exact replay
    /// of this file is a contract.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = LogHeader {
            config: self.config.clone(),
            seed: self.seed,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for e in &self.events {
            writeln!(w, "{}", serde_json::to_string(e)?)?;
        }
        writeln!(w, "{}", serde_json::to_string(&self.result)?)?;
        Ok(())
    }

    pub fn write_to_path(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        std::fs::write(path, buf)
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> std::io::Result<GameLog> {
        let mut lines = r.lines();
        let bad = |m: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, m.to_string());
        let header: LogHeader = serde_json::from_str(
            &lines.next().ok_or_else(|| bad("empty log"))??,
        )?;
        let mut rows: Vec<String> = lines.collect::<Result<_, _>>()?;
        let result_line = rows.pop().ok_or_else(|| bad("log has no result line"))?;
        let events = rows
            .iter()
            .map(|l| serde_json::from_str(l))
            .collect::<Result<Vec<Event>, _>>()?;
        Ok(GameLog {
            config: header.config,
            seed: header.seed,
            events,
            result: serde_json::from_str(&result_line)?,
        })
    }

    pub fn read_from_path(path: &Path) -> std::io::Result<GameLog> {
        let file = std::fs::File::open(path)?;
        Self::read_jsonl(std::io::BufReader::new(file))
    }
}

/// Re-apply a logged action stream from a fresh game; returns the final
/// state, which must match the live game's final state exactly.
pub fn replay(config: &GameConfig, seed: u64, events: &[Event]) -> Result<GameState, EngineError> {
    let mut state = new_game(config, seed);
    for e in events {
        state.apply_mut(&e.action)?;
    }
    Ok(state)
}

/// Run one game to completion. A decider returning an illegal action is
/// replaced by a seeded uniformly random legal one and counted in the
/// result. Hitting the turn cap yields `winner: None` flagged
/// `turn_capped`.
pub fn play_game(
    deciders: [&mut dyn Decider; 2],
    config: &GameConfig,
    seed: u64,
) -> Result<(MatchResult, GameLog), EngineError> {
    let mut state = new_game(config, seed);
    let mut fallback_rng = GameRng::seed_from_u64(derive_seed(seed, 0xfa11, 0));
    let mut illegal = [0u32; 2];

    while state.phase != Phase::Terminal {
        let legal = state.legal_actions()?;
        debug_assert!(!legal.is_empty(), "legal actions must be non-empty");
        let actor = state.acting_player();
        let mut action = deciders[actor].decide(&state, &legal);
        if !legal.contains(&action) {
            illegal[actor] += 1;
            action = legal
                .choose(&mut fallback_rng)
                .expect("legal is non-empty")
                .clone();
        }
        state.apply_mut(&action)?;
    }

    let errors = [
        deciders[0].take_error_count(),
        deciders[1].take_error_count(),
    ];
    let result = MatchResult::from_state(&state, seed, illegal, errors);
    let log = GameLog {
        config: state.config.clone(),
        seed,
        events: state.log.to_vec(),
        result: result.clone(),
    };
    Ok((result, log))
}
