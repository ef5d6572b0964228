//! Legal-action enumeration in a deterministic canonical order.
//!
//! Canonical order within a sub-phase: Roll, then builds (roads by edge,
//! settlements and cities by node), BuyDevCard, development-card plays
//! (knight, road building, year of plenty, monopoly), maritime trades
//! (by give then get), and EndTurn last. Robber placements are ordered by
//! tile coordinate, discards lexicographically by resource vector.

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::board::{EdgeId, HexCoord, NodeId, RESOURCES};
use crate::rng::GameRng;

use super::{
    Action, Awaiting, Building, DevCard, EngineError, GameState, Phase, ResourceSet, SetupStep,
    CITY_COST, DEV_CARD_COST, ROAD_COST, SETTLEMENT_COST, SETUP_SEQ,
};

/// Discard actions are capped at this many canonical multisets; beyond it a
/// seeded lexicographic sample keeps the branching factor bounded.
pub const MAX_DISCARD_ACTIONS: usize = 64;

impl GameState {
    /// All legal actions for the acting player, canonically ordered and
    /// never empty. Errors on a terminal state.
    pub fn legal_actions(&self) -> Result<Vec<Action>, EngineError> {
        match self.phase {
            Phase::Terminal => Err(EngineError::Terminal),
            Phase::Setup => Ok(self.setup_actions()),
            Phase::Play => Ok(match self.awaiting {
                Awaiting::Roll => self.roll_actions(),
                Awaiting::Main => self.main_actions(),
                Awaiting::RobberPlacement => self
                    .robber_moves()
                    .into_iter()
                    .map(|(tile, victim)| Action::MoveRobber { tile, victim })
                    .collect(),
                Awaiting::Discard(p) => self.discard_actions(p),
            }),
        }
    }

    fn setup_actions(&self) -> Vec<Action> {
        let (player, step) = SETUP_SEQ[self.setup_placed as usize];
        match step {
            SetupStep::Settlement => self
                .settlement_nodes(player, false)
                .into_iter()
                .map(|node| Action::BuildSettlement { node })
                .collect(),
            SetupStep::Road => {
                let anchor = self
                    .last_setup_settlement
                    .expect("setup road follows a settlement");
                self.board
                    .edges
                    .iter()
                    .copied()
                    .filter(|&e| (e.0 == anchor || e.1 == anchor) && self.road_at(e).is_none())
                    .map(|edge| Action::BuildRoad { edge })
                    .collect()
            }
        }
    }

    fn roll_actions(&self) -> Vec<Action> {
        let mut actions = vec![Action::Roll];
        actions.extend(self.dev_play_actions());
        actions
    }

    fn main_actions(&self) -> Vec<Action> {
        let p = self.current_player;
        let player = &self.players[p];
        let mut actions = Vec::new();

        if player.roads_left > 0 && player.resources.contains(&ROAD_COST) {
            actions.extend(
                self.road_edges(p)
                    .into_iter()
                    .map(|edge| Action::BuildRoad { edge }),
            );
        }
        if player.settlements_left > 0 && player.resources.contains(&SETTLEMENT_COST) {
            actions.extend(
                self.settlement_nodes(p, true)
                    .into_iter()
                    .map(|node| Action::BuildSettlement { node }),
            );
        }
        if player.cities_left > 0 && player.resources.contains(&CITY_COST) {
            actions.extend(
                player
                    .buildings
                    .iter()
                    .filter(|(_, b)| **b == Building::Settlement)
                    .map(|(node, _)| Action::BuildCity { node: *node }),
            );
        }
        if !self.dev_deck.is_empty() && player.resources.contains(&DEV_CARD_COST) {
            actions.push(Action::BuyDevCard);
        }
        actions.extend(self.dev_play_actions());
        actions.extend(self.maritime_trades(p));
        actions.push(Action::EndTurn);
        actions
    }

    /// Development-card plays available right now: at most one card per
    /// turn, never a card bought this turn. Allowed pre-roll and in the
    /// main sub-phase.
    fn dev_play_actions(&self) -> Vec<Action> {
        let p = self.current_player;
        let player = &self.players[p];
        let mut actions = Vec::new();
        if self.dev_played_this_turn {
            return actions;
        }

        if player.dev_hidden.get(DevCard::Knight) > 0 {
            actions.extend(
                self.robber_moves()
                    .into_iter()
                    .map(|(tile, victim)| Action::PlayKnight { tile, victim }),
            );
        }
        if player.dev_hidden.get(DevCard::RoadBuilding) > 0 && player.roads_left > 0 {
            actions.extend(self.road_building_plays(p));
        }
        if player.dev_hidden.get(DevCard::YearOfPlenty) > 0 {
            for (i, first) in RESOURCES.into_iter().enumerate() {
                for second in RESOURCES.into_iter().skip(i) {
                    let mut need = ResourceSet::default();
                    need.add(first, 1);
                    need.add(second, 1);
                    if self.bank.contains(&need) {
                        actions.push(Action::PlayYearOfPlenty { first, second });
                    }
                }
            }
        }
        if player.dev_hidden.get(DevCard::Monopoly) > 0 {
            actions.extend(RESOURCES.map(|resource| Action::PlayMonopoly { resource }));
        }
        actions
    }

    /// Robber destinations: every tile except the current one, paired with
    /// each adjacent opponent holding at least one card (or no victim when
    /// nothing can be stolen there).
    pub(super) fn robber_moves(&self) -> Vec<(HexCoord, Option<usize>)> {
        let me = self.current_player;
        let mut moves = Vec::new();
        for &tile in self.board.tiles.keys() {
            if tile == self.robber {
                continue;
            }
            let corners = self.board.tile_nodes(tile).expect("tile exists");
            let mut victims: Vec<usize> = Vec::new();
            for &node in corners {
                if let Some((owner, _)) = self.building_at(node) {
                    if owner != me
                        && self.players[owner].resources.total() > 0
                        && !victims.contains(&owner)
                    {
                        victims.push(owner);
                    }
                }
            }
            victims.sort_unstable();
            if victims.is_empty() {
                moves.push((tile, None));
            } else {
                moves.extend(victims.into_iter().map(|v| (tile, Some(v))));
            }
        }
        moves
    }

    /// Edges where `player` may place a road: empty, on the board, and
    /// connected to the player's network without passing through an
    /// opponent building.
    pub(super) fn road_edges(&self, player: usize) -> Vec<EdgeId> {
        self.board
            .edges
            .iter()
            .copied()
            .filter(|&e| self.road_at(e).is_none() && self.road_connects(player, e))
            .collect()
    }

    fn road_connects(&self, player: usize, e: EdgeId) -> bool {
        [e.0, e.1].into_iter().any(|node| {
            match self.building_at(node) {
                Some((owner, _)) => owner == player,
                // An unoccupied endpoint connects if one of the player's
                // roads already touches it.
                None => self.players[player]
                    .roads
                    .iter()
                    .any(|&(a, b)| a == node || b == node),
            }
        })
    }

    /// Nodes where `player` may place a settlement: empty, distance-2 rule
    /// satisfied, and (outside setup) touching one of the player's roads.
    pub(super) fn settlement_nodes(&self, player: usize, require_connection: bool) -> Vec<NodeId> {
        self.board
            .nodes
            .iter()
            .copied()
            .filter(|&node| {
                self.building_at(node).is_none()
                    && self
                        .board
                        .neighbors(node)
                        .iter()
                        .all(|&n| self.building_at(n).is_none())
                    && (!require_connection
                        || self.players[player]
                            .roads
                            .iter()
                            .any(|&(a, b)| a == node || b == node))
            })
            .collect()
    }

    /// Road-building plays: all distinct placements of one or two free
    /// roads, deduplicated as unordered pairs. A single-road play is
    /// offered when only one piece or no second placement is available.
    fn road_building_plays(&self, player: usize) -> Vec<Action> {
        let firsts = self.road_edges(player);
        if self.players[player].roads_left == 1 {
            return firsts
                .into_iter()
                .map(|first| Action::PlayRoadBuilding {
                    first,
                    second: None,
                })
                .collect();
        }
        let mut seen: Vec<(EdgeId, EdgeId)> = Vec::new();
        let mut actions = Vec::new();
        for &first in &firsts {
            // Seconds are evaluated in a state where `first` is placed.
            let mut with_first = self.clone();
            with_first.players[player].roads.insert(first);
            let seconds = with_first.road_edges(player);
            if seconds.is_empty() {
                actions.push(Action::PlayRoadBuilding {
                    first,
                    second: None,
                });
                continue;
            }
            for second in seconds {
                let key = if first <= second {
                    (first, second)
                } else {
                    (second, first)
                };
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                actions.push(Action::PlayRoadBuilding {
                    first,
                    second: Some(second),
                });
            }
        }
        actions
    }

    /// Maritime trades at the player's best ratio per resource (4:1 bank,
    /// 3:1 generic port, 2:1 resource port).
    fn maritime_trades(&self, player: usize) -> Vec<Action> {
        let hand = &self.players[player].resources;
        let mut actions = Vec::new();
        for give in RESOURCES {
            let ratio = self.trade_ratio(player, give);
            if hand.get(give) < ratio {
                continue;
            }
            for get in RESOURCES {
                if get != give && self.bank.get(get) > 0 {
                    actions.push(Action::MaritimeTrade {
                        give,
                        give_count: ratio,
                        get,
                    });
                }
            }
        }
        actions
    }

    /// Discard multisets of exactly half the hand (rounded down), in
    /// lexicographic order, sampled down to [`MAX_DISCARD_ACTIONS`] when the
    /// exact enumeration is larger.
    pub(super) fn discard_actions(&self, player: usize) -> Vec<Action> {
        let hand = self.players[player].resources;
        let k = hand.total() / 2;
        let mut all = Vec::new();
        enumerate_discards(&hand, k, 0, ResourceSet::default(), &mut all);

        if all.len() > MAX_DISCARD_ACTIONS {
            // Seeded sample, pure in the state: the seed mixes the hand and
            // turn so repeated calls on one state agree.
            let mut seed = 0xcbf2_9ce4_8422_2325u64;
            for b in hand
                .0
                .iter()
                .copied()
                .chain(self.turn_index.to_le_bytes())
                .chain([player as u8])
            {
                seed = (seed ^ b as u64).wrapping_mul(0x1000_0000_01b3);
            }
            let mut idx: Vec<usize> = (0..all.len()).collect();
            idx.shuffle(&mut GameRng::seed_from_u64(seed));
            idx.truncate(MAX_DISCARD_ACTIONS);
            idx.sort_unstable();
            all = idx.into_iter().map(|i| all[i].clone()).collect();
        }
        all
    }
}

fn enumerate_discards(
    hand: &ResourceSet,
    remaining: u32,
    idx: usize,
    acc: ResourceSet,
    out: &mut Vec<Action>,
) {
    if remaining == 0 {
        out.push(Action::Discard { cards: acc });
        return;
    }
    if idx >= RESOURCES.len() {
        return;
    }
    let left_after: u32 = (idx + 1..RESOURCES.len())
        .map(|i| hand.0[i] as u32)
        .sum();
    let max_here = (hand.0[idx] as u32).min(remaining);
    let min_here = remaining.saturating_sub(left_after);
    for take in min_here..=max_here {
        let mut next = acc;
        next.0[idx] = take as u8;
        enumerate_discards(hand, remaining - take, idx + 1, next, out);
    }
}
