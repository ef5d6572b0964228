//! Built-in baseline players: uniform random and depth-2 alpha-beta with a
//! heuristic evaluation, plus an unpruned minimax used as a test oracle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    apply_search, token_probability, Action, Building, Decider, GameState, Phase,
};
use crate::rng::GameRng;

/// Weights for the positional evaluation. The defaults are calibration
/// values tuned so the baseline tournament bands hold; they can be
/// overridden from the workbench config.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct HeuristicWeights {
    pub w_vp: f64,
    pub w_production: f64,
    pub w_expansion_spots: f64,
    pub w_dev_cards: f64,
    pub w_army: f64,
    pub w_road_length: f64,
    pub w_hand_penalty: f64,
}

impl Default for HeuristicWeights {
    fn default() -> Self {
        Self {
            w_vp: 10.0,
            w_production: 1.0,
            w_expansion_spots: 0.3,
            w_dev_cards: 0.3,
            w_army: 0.5,
            w_road_length: 0.2,
            w_hand_penalty: -0.1,
        }
    }
}

/// Uniform random choice among the legal actions.
pub fn random_decide(legal: &[Action], rng: &mut GameRng) -> Action {
    legal
        .choose(rng)
        .expect("legal actions are never empty")
        .clone()
}

/// Positional score of `player`: weighted sum of public victory points,
/// expected production per roll, open expansion spots, hidden development
/// cards, knights played, trail length, and an over-threshold hand term.
/// Terminal states collapse to +/-infinity sentinels for win/loss.
pub fn evaluate(state: &GameState, player: usize, weights: &HeuristicWeights) -> f64 {
    if state.phase == Phase::Terminal {
        if let Some(w) = state.winner {
            return if w == player {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
    }
    let p = &state.players[player];

    let mut production = 0.0;
    for (&node, building) in &p.buildings {
        let payout = match building {
            Building::Settlement => 1.0,
            Building::City => 2.0,
        };
        for (tile, spec) in state.board.node_tiles(node).expect("building on board") {
            if tile != state.robber {
                production += payout * token_probability(spec.token);
            }
        }
    }

    let expansion_spots = expansion_spot_count(state, player);
    let hand = p.resources.total() as f64;
    let over_hand = (hand - state.config.discard_threshold as f64).max(0.0);

    weights.w_vp * state.victory_points(player, false) as f64
        + weights.w_production * production
        + weights.w_expansion_spots * expansion_spots as f64
        + weights.w_dev_cards * p.hidden_dev_total() as f64
        + weights.w_army * p.knights_played as f64
        + weights.w_road_length * state.road_length(player) as f64
        + weights.w_hand_penalty * over_hand
}

/// Nodes where the player could legally place a settlement right now,
/// ignoring cost and remaining pieces.
fn expansion_spot_count(state: &GameState, player: usize) -> usize {
    let mut candidates: Vec<_> = state.players[player]
        .roads
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&node| {
            state.building_at(node).is_none()
                && state
                    .board
                    .neighbors(node)
                    .iter()
                    .all(|&n| state.building_at(n).is_none())
        })
        .count()
}

fn search_value(
    state: &GameState,
    depth: u32,
    root: usize,
    mut alpha: f64,
    mut beta: f64,
    weights: &HeuristicWeights,
) -> f64 {
    if state.phase == Phase::Terminal || depth == 0 {
        return evaluate(state, root, weights);
    }
    let legal = state.legal_actions().expect("non-terminal state");
    let maximizing = state.acting_player() == root;
    let mut value = if maximizing {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    for action in &legal {
        let child = apply_search(state, action).expect("legal action applies");
        let v = search_value(&child, depth - 1, root, alpha, beta, weights);
        if maximizing {
            value = value.max(v);
            alpha = alpha.max(value);
            if value >= beta {
                break;
            }
        } else {
            value = value.min(v);
            beta = beta.min(value);
            if value <= alpha {
                break;
            }
        }
    }
    value
}

/// Depth-limited alpha-beta choice for the acting player. A ply is one
/// action; rolls advance by expectation and steals resolve
/// deterministically (see [`apply_search`]), so the search is exact and
/// reproducible. Ties break to the earliest action in canonical order.
pub fn alphabeta_decide(state: &GameState, depth: u32, weights: &HeuristicWeights) -> Action {
    let (action, _) = alphabeta_root(state, depth, weights);
    action
}

fn alphabeta_root(state: &GameState, depth: u32, weights: &HeuristicWeights) -> (Action, f64) {
    let legal = state.legal_actions().expect("decide on live state");
    assert!(!legal.is_empty());
    let root = state.acting_player();
    let mut best = legal[0].clone();
    let mut best_value = f64::NEG_INFINITY;
    let mut alpha = f64::NEG_INFINITY;
    let mut first = true;
    for action in &legal {
        let child = apply_search(state, action).expect("legal action applies");
        let v = search_value(&child, depth.saturating_sub(1), root, alpha, f64::INFINITY, weights);
        if first || v > best_value {
            best_value = v;
            best = action.clone();
            first = false;
        }
        alpha = alpha.max(v);
    }
    (best, best_value)
}

/// Exhaustive depth-limited minimax without pruning — the soundness oracle
/// for [`alphabeta_decide`]. Same transition model and tie-break; at depth
/// 0 it returns no action and the static evaluation.
pub fn minimax_oracle(
    state: &GameState,
    depth: u32,
    weights: &HeuristicWeights,
) -> (Option<Action>, f64) {
    let root = state.acting_player();
    fn value_of(state: &GameState, depth: u32, root: usize, weights: &HeuristicWeights) -> f64 {
        if state.phase == Phase::Terminal || depth == 0 {
            return evaluate(state, root, weights);
        }
        let legal = state.legal_actions().expect("non-terminal state");
        let maximizing = state.acting_player() == root;
        let mut best: Option<f64> = None;
        for action in &legal {
            let child = apply_search(state, action).expect("legal action applies");
            let v = value_of(&child, depth - 1, root, weights);
            best = Some(match best {
                None => v,
                Some(b) if maximizing => b.max(v),
                Some(b) => b.min(v),
            });
        }
        best.expect("legal actions are never empty")
    }

    if depth == 0 || state.phase == Phase::Terminal {
        return (None, evaluate(state, root, weights));
    }
    let legal = state.legal_actions().expect("non-terminal state");
    let mut best_action = None;
    let mut best_value = f64::NEG_INFINITY;
    for action in &legal {
        let child = apply_search(state, action).expect("legal action applies");
        let v = value_of(&child, depth - 1, root, weights);
        if best_action.is_none() || v > best_value {
            best_value = v;
            best_action = Some(action.clone());
        }
    }
    (best_action, best_value)
}

/// Decider wrapper around [`random_decide`] with its own seeded stream.
pub struct RandomBot {
    rng: GameRng,
}

impl RandomBot {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: GameRng::seed_from_u64(seed),
        }
    }
}

impl Decider for RandomBot {
    fn name(&self) -> &str {
        "RANDOM"
    }

    fn decide(&mut self, _state: &GameState, legal: &[Action]) -> Action {
        random_decide(legal, &mut self.rng)
    }
}

/// Decider wrapper around [`alphabeta_decide`].
pub struct AlphaBetaBot {
    pub depth: u32,
    pub weights: HeuristicWeights,
}

impl AlphaBetaBot {
    pub fn new(depth: u32, weights: HeuristicWeights) -> Self {
        Self { depth, weights }
    }
}

impl Default for AlphaBetaBot {
    fn default() -> Self {
        Self::new(2, HeuristicWeights::default())
    }
}

impl Decider for AlphaBetaBot {
    fn name(&self) -> &str {
        "ALPHABETA"
    }

    fn decide(&mut self, state: &GameState, _legal: &[Action]) -> Action {
        alphabeta_decide(state, self.depth, &self.weights)
    }
}
