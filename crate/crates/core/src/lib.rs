//! Settlers of Catan simulation core: board generation, the two-player
//! rules engine with replayable logs, and the built-in baseline bots.

pub mod board;
pub mod bots;
pub mod engine;
pub mod rng;

pub use board::{
    edge, generate_board, longest_trail, Board, BoardError, EdgeId, HexCoord, MapTemplate, NodeId,
    PortKind, Resource, Terrain, TileSpec, RESOURCES,
};
pub use engine::{
    apply, apply_search, new_game, play_game, replay, Action, Awaiting, Building, Decider,
    DevCard, DevSet, EngineError, Event, EventLog, GameConfig, GameLog, GameState, MatchResult,
    Payout, Phase, PlayerState, ResourceSet, CITY_COST, DEV_CARDS, DEV_CARD_COST, NUM_PLAYERS,
    ROAD_COST, SETTLEMENT_COST,
};
pub use bots::{
    alphabeta_decide, evaluate, minimax_oracle, random_decide, AlphaBetaBot, HeuristicWeights,
    RandomBot,
};
pub use rng::{derive_seed, GameRng};
