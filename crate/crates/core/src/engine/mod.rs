//! Two-player rules engine: game state, legal-action enumeration, pure
//! transitions, and full-game orchestration with replayable logs.

mod apply;
mod event;
mod legal;
mod play;

pub use apply::{apply, apply_search, token_probability};
pub use event::{Event, EventLog, Payout};
pub use play::{play_game, replay, Decider, GameLog, MatchResult};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{
    generate_board, Board, EdgeId, HexCoord, MapTemplate, NodeId, Resource, RESOURCES,
};
use crate::rng::{derive_seed, GameRng};

pub const NUM_PLAYERS: usize = 2;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("game is over")]
    Terminal,
    #[error("illegal action: {rule}")]
    Illegal { rule: String },
}

impl EngineError {
    pub(crate) fn illegal(rule: impl Into<String>) -> Self {
        EngineError::Illegal { rule: rule.into() }
    }
}

/// Multiset of resources, indexed by [`Resource`]. Used for hands, the
/// bank, build costs, and discard/trade bundles.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Serialize, Deserialize)]
pub struct ResourceSet(pub [u8; 5]);

impl ResourceSet {
    pub const fn new(wood: u8, brick: u8, sheep: u8, wheat: u8, ore: u8) -> Self {
        Self([wood, brick, sheep, wheat, ore])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    pub fn get(&self, r: Resource) -> u8 {
        self.0[r.index()]
    }

    pub fn add(&mut self, r: Resource, n: u8) {
        self.0[r.index()] += n;
    }

    pub fn remove(&mut self, r: Resource, n: u8) -> Result<(), EngineError> {
        let c = &mut self.0[r.index()];
        *c = c
            .checked_sub(n)
            .ok_or_else(|| EngineError::illegal(format!("not enough {r}")))?;
        Ok(())
    }

    pub fn contains(&self, other: &ResourceSet) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a >= b)
    }

    pub fn add_set(&mut self, other: &ResourceSet) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }

    pub fn remove_set(&mut self, other: &ResourceSet) -> Result<(), EngineError> {
        if !self.contains(other) {
            return Err(EngineError::illegal("cannot afford cost"));
        }
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a -= b;
        }
        Ok(())
    }

    /// The resource held in the greatest quantity (lowest index on ties);
    /// `None` for an empty set.
    pub fn most_abundant(&self) -> Option<Resource> {
        let (i, &c) = self
            .0
            .iter()
            .enumerate()
            .max_by_key(|(i, &c)| (c, std::cmp::Reverse(*i)))?;
        (c > 0).then_some(RESOURCES[i])
    }

    /// The `idx`-th card when the hand is laid out in resource order.
    pub fn nth_card(&self, idx: u32) -> Option<Resource> {
        let mut rest = idx;
        for r in RESOURCES {
            let c = self.get(r) as u32;
            if rest < c {
                return Some(r);
            }
            rest -= c;
        }
        None
    }
}

impl Index<Resource> for ResourceSet {
    type Output = u8;
    fn index(&self, r: Resource) -> &u8 {
        &self.0[r.index()]
    }
}

impl IndexMut<Resource> for ResourceSet {
    fn index_mut(&mut self, r: Resource) -> &mut u8 {
        &mut self.0[r.index()]
    }
}

impl fmt::Display for ResourceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in RESOURCES {
            if self.get(r) > 0 {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}x{}", self.get(r), r)?;
                first = false;
            }
        }
        if first {
            write!(f, "nothing")?;
        }
        Ok(())
    }
}

pub const ROAD_COST: ResourceSet = ResourceSet::new(1, 1, 0, 0, 0);
pub const SETTLEMENT_COST: ResourceSet = ResourceSet::new(1, 1, 1, 1, 0);
pub const CITY_COST: ResourceSet = ResourceSet::new(0, 0, 0, 2, 3);
pub const DEV_CARD_COST: ResourceSet = ResourceSet::new(0, 0, 1, 1, 1);

/// Development card kinds. Deck composition at game start: 14 knights,
/// 5 victory points, 2 of each progress card.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DevCard {
    Knight,
    VictoryPoint,
    RoadBuilding,
    YearOfPlenty,
    Monopoly,
}

pub const DEV_CARDS: [DevCard; 5] = [
    DevCard::Knight,
    DevCard::VictoryPoint,
    DevCard::RoadBuilding,
    DevCard::YearOfPlenty,
    DevCard::Monopoly,
];

impl DevCard {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DevCard::Knight => "knight",
            DevCard::VictoryPoint => "victory point",
            DevCard::RoadBuilding => "road building",
            DevCard::YearOfPlenty => "year of plenty",
            DevCard::Monopoly => "monopoly",
        }
    }
}

/// Multiset of development cards, indexed by [`DevCard`].
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Serialize, Deserialize)]
pub struct DevSet(pub [u8; 5]);

impl DevSet {
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    pub fn get(&self, c: DevCard) -> u8 {
        self.0[c.index()]
    }

    pub fn add(&mut self, c: DevCard) {
        self.0[c.index()] += 1;
    }

    pub fn remove(&mut self, c: DevCard) -> Result<(), EngineError> {
        let n = &mut self.0[c.index()];
        *n = n
            .checked_sub(1)
            .ok_or_else(|| EngineError::illegal(format!("no {} card to play", c.name())))?;
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Building {
    Settlement,
    City,
}

/// Every legal move a player can emit.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Roll,
    MoveRobber {
        tile: HexCoord,
        victim: Option<usize>,
    },
    Discard {
        cards: ResourceSet,
    },
    BuildRoad {
        edge: EdgeId,
    },
    BuildSettlement {
        node: NodeId,
    },
    BuildCity {
        node: NodeId,
    },
    BuyDevCard,
    PlayKnight {
        tile: HexCoord,
        victim: Option<usize>,
    },
    PlayRoadBuilding {
        first: EdgeId,
        second: Option<EdgeId>,
    },
    PlayYearOfPlenty {
        first: Resource,
        second: Resource,
    },
    PlayMonopoly {
        resource: Resource,
    },
    MaritimeTrade {
        give: Resource,
        give_count: u8,
        get: Resource,
    },
    EndTurn,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Roll => write!(f, "roll the dice"),
            Action::MoveRobber { tile, victim } => match victim {
                Some(v) => write!(f, "move robber to ({tile}) and steal from player {v}"),
                None => write!(f, "move robber to ({tile})"),
            },
            Action::Discard { cards } => write!(f, "discard {cards}"),
            Action::BuildRoad { edge } => write!(f, "build road on edge {}-{}", edge.0, edge.1),
            Action::BuildSettlement { node } => write!(f, "build settlement on node {node}"),
            Action::BuildCity { node } => write!(f, "upgrade settlement at node {node} to a city"),
            Action::BuyDevCard => write!(f, "buy a development card"),
            Action::PlayKnight { tile, victim } => match victim {
                Some(v) => write!(f, "play knight: robber to ({tile}), steal from player {v}"),
                None => write!(f, "play knight: robber to ({tile})"),
            },
            Action::PlayRoadBuilding { first, second } => match second {
                Some(s) => write!(
                    f,
                    "play road building: edges {}-{} and {}-{}",
                    first.0, first.1, s.0, s.1
                ),
                None => write!(f, "play road building: edge {}-{}", first.0, first.1),
            },
            Action::PlayYearOfPlenty { first, second } => {
                write!(f, "play year of plenty: take {first} and {second}")
            }
            Action::PlayMonopoly { resource } => write!(f, "play monopoly on {resource}"),
            Action::MaritimeTrade {
                give,
                give_count,
                get,
            } => write!(f, "trade {give_count} {give} for 1 {get}"),
            Action::EndTurn => write!(f, "end turn"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Setup,
    Play,
    Terminal,
}

/// Sub-phase within a turn.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Awaiting {
    Roll,
    Main,
    RobberPlacement,
    Discard(usize),
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GameConfig {
    pub template: MapTemplate,
    pub vp_target: u32,
    pub max_turns: u32,
    pub discard_threshold: u32,
    pub seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            template: MapTemplate::Full,
            vp_target: 10,
            max_turns: 500,
            discard_threshold: 7,
            seed: 0,
        }
    }
}

impl GameConfig {
    pub fn with_template(template: MapTemplate) -> Self {
        Self {
            template,
            ..Self::default()
        }
    }
}

/// Per-player holdings and pieces.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PlayerState {
    pub resources: ResourceSet,
    pub dev_hidden: DevSet,
    pub dev_played: DevSet,
    pub dev_bought_this_turn: DevSet,
    pub knights_played: u8,
    pub settlements_left: u8,
    pub cities_left: u8,
    pub roads_left: u8,
    pub buildings: BTreeMap<NodeId, Building>,
    pub roads: BTreeSet<EdgeId>,
}

impl Default for PlayerState {
    fn default() -> Self {
        Self {
            resources: ResourceSet::default(),
            dev_hidden: DevSet::default(),
            dev_played: DevSet::default(),
            dev_bought_this_turn: DevSet::default(),
            knights_played: 0,
            settlements_left: 5,
            cities_left: 4,
            roads_left: 15,
            buildings: BTreeMap::new(),
            roads: BTreeSet::new(),
        }
    }
}

impl PlayerState {
    pub fn settlement_count(&self) -> u32 {
        self.buildings
            .values()
            .filter(|b| **b == Building::Settlement)
            .count() as u32
    }

    pub fn city_count(&self) -> u32 {
        self.buildings
            .values()
            .filter(|b| **b == Building::City)
            .count() as u32
    }

    pub fn road_count(&self) -> u32 {
        self.roads.len() as u32
    }

    /// Hidden victory-point cards, including ones bought this turn.
    pub fn hidden_vp_cards(&self) -> u32 {
        (self.dev_hidden.get(DevCard::VictoryPoint) + self.dev_bought_this_turn.get(DevCard::VictoryPoint))
            as u32
    }

    pub fn hidden_dev_total(&self) -> u32 {
        self.dev_hidden.total() + self.dev_bought_this_turn.total()
    }
}

/// Setup placement order: snake for two players (P0, P1, P1, P0), each slot
/// a settlement followed by a road.
pub(crate) const SETUP_SEQ: [(usize, SetupStep); 8] = [
    (0, SetupStep::Settlement),
    (0, SetupStep::Road),
    (1, SetupStep::Settlement),
    (1, SetupStep::Road),
    (1, SetupStep::Settlement),
    (1, SetupStep::Road),
    (0, SetupStep::Settlement),
    (0, SetupStep::Road),
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum SetupStep {
    Settlement,
    Road,
}

/// Complete authoritative game situation. Values are immutable between
/// transitions: [`apply`] clones, mutates the clone, and returns it, so
/// states can be shared freely across threads.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GameState {
    pub config: GameConfig,
    pub board: Arc<Board>,
    pub players: Vec<PlayerState>,
    pub bank: ResourceSet,
    pub dev_deck: Vec<DevCard>,
    pub phase: Phase,
    pub turn_index: u32,
    pub current_player: usize,
    pub awaiting: Awaiting,
    pub robber: HexCoord,
    pub setup_placed: u8,
    pub last_setup_settlement: Option<NodeId>,
    pub dev_played_this_turn: bool,
    pub pending_discards: Vec<usize>,
    pub longest_road_holder: Option<usize>,
    pub largest_army_holder: Option<usize>,
    pub winner: Option<usize>,
    pub turn_capped: bool,
    pub rng: GameRng,
    pub log: EventLog,
}

/// Create a fresh game in the setup phase. The board, dev deck order, and
/// all later dice rolls are a deterministic function of `seed` (the seed
/// argument overrides `config.seed`).
pub fn new_game(config: &GameConfig, seed: u64) -> GameState {
    assert!(config.vp_target >= 3, "vp_target must be at least 3");
    assert!(config.max_turns >= 1, "max_turns must be at least 1");

    let board = generate_board(config.template, seed);
    let mut rng = GameRng::seed_from_u64(derive_seed(seed, 0x6761_6d65, 0));

    let mut dev_deck = Vec::with_capacity(25);
    for (card, n) in [
        (DevCard::Knight, 14),
        (DevCard::VictoryPoint, 5),
        (DevCard::RoadBuilding, 2),
        (DevCard::YearOfPlenty, 2),
        (DevCard::Monopoly, 2),
    ] {
        dev_deck.extend(std::iter::repeat(card).take(n));
    }
    dev_deck.shuffle(&mut rng);

    let robber = board.robber_tile;
    GameState {
        config: GameConfig {
            seed,
            ..config.clone()
        },
        board: Arc::new(board),
        players: vec![PlayerState::default(), PlayerState::default()],
        bank: ResourceSet::new(19, 19, 19, 19, 19),
        dev_deck,
        phase: Phase::Setup,
        turn_index: 0,
        current_player: 0,
        awaiting: Awaiting::Main,
        robber,
        setup_placed: 0,
        last_setup_settlement: None,
        dev_played_this_turn: false,
        pending_discards: Vec::new(),
        longest_road_holder: None,
        largest_army_holder: None,
        winner: None,
        turn_capped: false,
        rng,
        log: EventLog::default(),
    }
}

impl GameState {
    /// The player expected to act next (the discarding player during a
    /// discard sub-phase, the setup-order player during setup).
    pub fn acting_player(&self) -> usize {
        match self.phase {
            Phase::Setup => SETUP_SEQ[self.setup_placed as usize].0,
            _ => match self.awaiting {
                Awaiting::Discard(p) => p,
                _ => self.current_player,
            },
        }
    }

    pub fn opponent_of(&self, player: usize) -> usize {
        1 - player
    }

    /// Building at a node, if any, with its owner.
    pub fn building_at(&self, node: NodeId) -> Option<(usize, Building)> {
        self.players
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.buildings.get(&node).map(|b| (i, *b)))
    }

    pub fn road_at(&self, e: EdgeId) -> Option<usize> {
        self.players
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.roads.contains(&e).then_some(i))
    }

    /// Total victory points for a player: settlements x1, cities x2, plus 2
    /// for each held award, plus hidden victory-point cards when
    /// `include_hidden`.
    pub fn victory_points(&self, player: usize, include_hidden: bool) -> u32 {
        let p = &self.players[player];
        let mut vp = p.settlement_count() + 2 * p.city_count();
        if self.longest_road_holder == Some(player) {
            vp += 2;
        }
        if self.largest_army_holder == Some(player) {
            vp += 2;
        }
        if include_hidden {
            vp += p.hidden_vp_cards();
        }
        vp
    }

    /// Current longest-trail length of a player's road network, with
    /// opponent buildings interrupting continuity.
    pub fn road_length(&self, player: usize) -> u32 {
        let roads: Vec<EdgeId> = self.players[player].roads.iter().copied().collect();
        let blocked: BTreeSet<NodeId> = self
            .players
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != player)
            .flat_map(|(_, p)| p.buildings.keys().copied())
            .collect();
        crate::board::longest_trail(&roads, &blocked)
    }

    /// Best maritime trade ratio for a player giving `resource`: 2 with a
    /// matching 2:1 port, 3 with a generic port, otherwise 4.
    pub fn trade_ratio(&self, player: usize, resource: Resource) -> u8 {
        let mut ratio = 4;
        for node in self.players[player].buildings.keys() {
            if let Some(kind) = self.board.ports.get(node) {
                match kind.two_to_one() {
                    Some(r) if r == resource => return 2,
                    None => ratio = ratio.min(3),
                    _ => {}
                }
            }
        }
        ratio
    }
}
