//! Action application: validation, state transition, payouts, awards, and
//! victory detection.

use rand::Rng;

use crate::board::{EdgeId, HexCoord, NodeId, Resource, RESOURCES};

use super::{
    Action, Awaiting, Building, DevCard, EngineError, Event, GameState, Payout, Phase,
    ResourceSet, SetupStep, CITY_COST, DEV_CARD_COST, ROAD_COST, SETTLEMENT_COST, SETUP_SEQ,
};

/// How stochastic effects resolve.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(super) enum Mode {
    /// Real play: dice and steals draw from the state's RNG, events are
    /// logged.
    Play,
    /// Adversarial lookahead: a roll just advances to the main sub-phase
    /// (production is valued by the evaluation's expectation term and
    /// 7-handling is skipped), steals take the victim's most abundant
    /// card, and nothing is logged.
    Search,
}

/// Pure transition: validates the action, returns the successor state, and
/// leaves the input untouched. The applied event is appended to the
/// successor's log.
pub fn apply(state: &GameState, action: &Action) -> Result<GameState, EngineError> {
    let mut next = state.clone();
    next.transition(action, Mode::Play)?;
    Ok(next)
}

/// Transition used inside adversarial search: deterministic (expectation
/// model for rolls, fixed steal rule) and unlogged, otherwise identical to
/// [`apply`].
pub fn apply_search(state: &GameState, action: &Action) -> Result<GameState, EngineError> {
    let mut next = state.clone();
    next.transition(action, Mode::Search)?;
    Ok(next)
}

impl GameState {
    /// In-place transition; used by [`apply`] and the game loop.
    pub(crate) fn apply_mut(&mut self, action: &Action) -> Result<(), EngineError> {
        self.transition(action, Mode::Play)
    }

    fn transition(&mut self, action: &Action, mode: Mode) -> Result<(), EngineError> {
        if self.phase == Phase::Terminal {
            return Err(EngineError::Terminal);
        }
        let actor = self.acting_player();
        let mut dice = None;
        let mut payouts = None;

        match self.phase {
            Phase::Setup => self.apply_setup(action)?,
            Phase::Play => match action {
                Action::Roll => {
                    let (d, p) = self.apply_roll(mode)?;
                    dice = d;
                    payouts = p;
                }
                Action::MoveRobber { tile, victim } => {
                    if self.awaiting != Awaiting::RobberPlacement {
                        return Err(EngineError::illegal("robber is not awaiting placement"));
                    }
                    self.move_robber(*tile, *victim, mode)?;
                    self.awaiting = Awaiting::Main;
                }
                Action::Discard { cards } => self.apply_discard(actor, cards)?,
                Action::BuildRoad { edge } => {
                    self.require_main()?;
                    self.check_road_site(actor, *edge)?;
                    self.pay(actor, &ROAD_COST)?;
                    self.place_road(actor, *edge);
                }
                Action::BuildSettlement { node } => {
                    self.require_main()?;
                    self.check_settlement_site(actor, *node, true)?;
                    if self.players[actor].settlements_left == 0 {
                        return Err(EngineError::illegal("no settlement pieces left"));
                    }
                    self.pay(actor, &SETTLEMENT_COST)?;
                    self.place_settlement(actor, *node);
                }
                Action::BuildCity { node } => {
                    self.require_main()?;
                    self.apply_build_city(actor, *node)?;
                }
                Action::BuyDevCard => {
                    self.require_main()?;
                    if self.dev_deck.is_empty() {
                        return Err(EngineError::illegal("development deck is empty"));
                    }
                    self.pay(actor, &DEV_CARD_COST)?;
                    let card = self.dev_deck.pop().expect("deck checked non-empty");
                    self.players[actor].dev_bought_this_turn.add(card);
                }
                Action::PlayKnight { tile, victim } => {
                    self.check_dev_playable(actor, DevCard::Knight)?;
                    self.move_robber(*tile, *victim, mode)?;
                    let p = &mut self.players[actor];
                    p.dev_hidden.remove(DevCard::Knight)?;
                    p.dev_played.add(DevCard::Knight);
                    p.knights_played += 1;
                    self.dev_played_this_turn = true;
                    self.update_largest_army(actor);
                }
                Action::PlayRoadBuilding { first, second } => {
                    self.check_dev_playable(actor, DevCard::RoadBuilding)?;
                    self.apply_road_building(actor, *first, *second)?;
                }
                Action::PlayYearOfPlenty { first, second } => {
                    self.check_dev_playable(actor, DevCard::YearOfPlenty)?;
                    let mut take = ResourceSet::default();
                    take.add(*first, 1);
                    take.add(*second, 1);
                    if !self.bank.contains(&take) {
                        return Err(EngineError::illegal("bank cannot supply those resources"));
                    }
                    self.bank.remove_set(&take)?;
                    self.players[actor].resources.add_set(&take);
                    self.players[actor].dev_hidden.remove(DevCard::YearOfPlenty)?;
                    self.players[actor].dev_played.add(DevCard::YearOfPlenty);
                    self.dev_played_this_turn = true;
                }
                Action::PlayMonopoly { resource } => {
                    self.check_dev_playable(actor, DevCard::Monopoly)?;
                    let opp = self.opponent_of(actor);
                    let n = self.players[opp].resources.get(*resource);
                    self.players[opp].resources.remove(*resource, n)?;
                    self.players[actor].resources.add(*resource, n);
                    self.players[actor].dev_hidden.remove(DevCard::Monopoly)?;
                    self.players[actor].dev_played.add(DevCard::Monopoly);
                    self.dev_played_this_turn = true;
                }
                Action::MaritimeTrade {
                    give,
                    give_count,
                    get,
                } => {
                    self.require_main()?;
                    self.apply_trade(actor, *give, *give_count, *get)?;
                }
                Action::EndTurn => {
                    self.require_main()?;
                    self.apply_end_turn();
                }
            },
            Phase::Terminal => unreachable!("checked above"),
        }

        self.check_victory(actor);
        if mode == Mode::Play {
            let vp_after = [self.victory_points(0, true), self.victory_points(1, true)];
            self.log.push(Event {
                turn: self.turn_for_log(action),
                player: actor,
                action: action.clone(),
                dice,
                payouts,
                vp_after,
            });
        }
        Ok(())
    }

    // EndTurn advances turn_index before the event is logged; report the
    // turn the action belonged to.
    fn turn_for_log(&self, action: &Action) -> u32 {
        match action {
            Action::EndTurn => self.turn_index.saturating_sub(1),
            _ => self.turn_index,
        }
    }

    fn require_main(&self) -> Result<(), EngineError> {
        if self.awaiting != Awaiting::Main {
            return Err(EngineError::illegal("not in the main sub-phase"));
        }
        Ok(())
    }

    fn pay(&mut self, player: usize, cost: &ResourceSet) -> Result<(), EngineError> {
        self.players[player].resources.remove_set(cost)?;
        self.bank.add_set(cost);
        Ok(())
    }

    fn apply_setup(&mut self, action: &Action) -> Result<(), EngineError> {
        let (player, step) = SETUP_SEQ[self.setup_placed as usize];
        match (step, action) {
            (SetupStep::Settlement, Action::BuildSettlement { node }) => {
                self.check_settlement_site(player, *node, false)?;
                self.place_settlement(player, *node);
                self.last_setup_settlement = Some(*node);
                // The second settlement pays out one card per adjacent
                // producing tile.
                let second = matches!(self.setup_placed, 4 | 6);
                if second {
                    for (_, spec) in self.board.node_tiles(*node).expect("validated node") {
                        if let Some(r) = spec.terrain.resource() {
                            if self.bank.get(r) > 0 {
                                self.bank.remove(r, 1)?;
                                self.players[player].resources.add(r, 1);
                            }
                        }
                    }
                }
            }
            (SetupStep::Road, Action::BuildRoad { edge }) => {
                let anchor = self
                    .last_setup_settlement
                    .expect("setup road follows a settlement");
                if edge.0 != anchor && edge.1 != anchor {
                    return Err(EngineError::illegal(
                        "setup road must touch the settlement just placed",
                    ));
                }
                if !self.board.contains_edge(*edge) {
                    return Err(EngineError::illegal("edge is not on the board"));
                }
                if self.road_at(*edge).is_some() {
                    return Err(EngineError::illegal("edge is occupied"));
                }
                self.place_road(player, *edge);
            }
            _ => {
                return Err(EngineError::illegal(format!(
                    "setup expects a {} placement",
                    match step {
                        SetupStep::Settlement => "settlement",
                        SetupStep::Road => "road",
                    }
                )))
            }
        }
        self.setup_placed += 1;
        if self.setup_placed as usize == SETUP_SEQ.len() {
            self.phase = Phase::Play;
            self.current_player = 0;
            self.awaiting = Awaiting::Roll;
        } else {
            self.current_player = SETUP_SEQ[self.setup_placed as usize].0;
        }
        Ok(())
    }

    fn apply_roll(&mut self, mode: Mode) -> Result<(Option<u8>, Option<Vec<Payout>>), EngineError> {
        if self.awaiting != Awaiting::Roll {
            return Err(EngineError::illegal("dice were already rolled"));
        }
        if mode == Mode::Search {
            self.awaiting = Awaiting::Main;
            return Ok((None, None));
        }
        let sum = self.rng.gen_range(1..=6u8) + self.rng.gen_range(1..=6u8);
        if sum == 7 {
            self.pending_discards = (0..self.players.len())
                .filter(|&p| self.players[p].resources.total() > self.config.discard_threshold)
                .collect();
            self.awaiting = match self.pending_discards.first() {
                Some(&p) => Awaiting::Discard(p),
                None => Awaiting::RobberPlacement,
            };
            Ok((Some(sum), None))
        } else {
            let payouts = self.produce(sum);
            self.awaiting = Awaiting::Main;
            Ok((Some(sum), Some(payouts)))
        }
    }

    /// Pay production for a roll. If the bank cannot fully pay a resource
    /// demanded by more than one player, no one receives that resource; a
    /// single claimant takes what remains.
    fn produce(&mut self, roll: u8) -> Vec<Payout> {
        let mut demand = [[0u32; 2]; 5];
        for (&tile, spec) in self.board.tiles.iter() {
            if spec.token != Some(roll) || tile == self.robber {
                continue;
            }
            let resource = spec.terrain.resource().expect("tokened tiles produce");
            for &node in self.board.tile_nodes(tile).expect("tile exists") {
                if let Some((owner, building)) = self.building_at(node) {
                    let amount = match building {
                        Building::Settlement => 1,
                        Building::City => 2,
                    };
                    demand[resource.index()][owner] += amount;
                }
            }
        }

        let mut payouts = Vec::new();
        for r in RESOURCES {
            let wanted = demand[r.index()];
            let claimants: Vec<usize> = (0..2).filter(|&p| wanted[p] > 0).collect();
            if claimants.is_empty() {
                continue;
            }
            let total: u32 = wanted.iter().sum();
            let available = self.bank.get(r) as u32;
            let grants: Vec<(usize, u32)> = if total <= available {
                claimants.iter().map(|&p| (p, wanted[p])).collect()
            } else if claimants.len() == 1 {
                vec![(claimants[0], available.min(wanted[claimants[0]]))]
            } else {
                Vec::new()
            };
            for (p, amount) in grants {
                if amount == 0 {
                    continue;
                }
                self.bank.remove(r, amount as u8).expect("bank checked");
                self.players[p].resources.add(r, amount as u8);
                payouts.push(Payout {
                    player: p,
                    resource: r,
                    amount: amount as u8,
                });
            }
        }
        payouts
    }

    fn apply_discard(&mut self, actor: usize, cards: &ResourceSet) -> Result<(), EngineError> {
        match self.awaiting {
            Awaiting::Discard(p) if p == actor => {}
            _ => return Err(EngineError::illegal("no discard is pending")),
        }
        let hand = self.players[actor].resources;
        let required = hand.total() / 2;
        if cards.total() != required {
            return Err(EngineError::illegal(format!(
                "must discard exactly {required} cards"
            )));
        }
        if !hand.contains(cards) {
            return Err(EngineError::illegal("cannot discard cards not in hand"));
        }
        self.players[actor].resources.remove_set(cards)?;
        self.bank.add_set(cards);
        self.pending_discards.retain(|&p| p != actor);
        self.awaiting = match self.pending_discards.first() {
            Some(&p) => Awaiting::Discard(p),
            None => Awaiting::RobberPlacement,
        };
        Ok(())
    }

    fn move_robber(
        &mut self,
        tile: HexCoord,
        victim: Option<usize>,
        mode: Mode,
    ) -> Result<(), EngineError> {
        if !self.board.tiles.contains_key(&tile) {
            return Err(EngineError::illegal("robber target is not a tile"));
        }
        if tile == self.robber {
            return Err(EngineError::illegal("robber must move to a new tile"));
        }
        self.robber = tile;
        if let Some(v) = victim {
            let me = self.current_player;
            if v == me || v >= self.players.len() {
                return Err(EngineError::illegal("invalid steal victim"));
            }
            let adjacent = self
                .board
                .tile_nodes(tile)
                .expect("tile exists")
                .iter()
                .any(|&n| matches!(self.building_at(n), Some((owner, _)) if owner == v));
            if !adjacent {
                return Err(EngineError::illegal("victim has no building on that tile"));
            }
            let hand = self.players[v].resources;
            let stolen = match mode {
                Mode::Play => {
                    let total = hand.total();
                    if total == 0 {
                        return Err(EngineError::illegal("victim has no cards"));
                    }
                    hand.nth_card(self.rng.gen_range(0..total))
                        .expect("index within hand")
                }
                Mode::Search => hand
                    .most_abundant()
                    .ok_or_else(|| EngineError::illegal("victim has no cards"))?,
            };
            self.players[v].resources.remove(stolen, 1)?;
            self.players[me].resources.add(stolen, 1);
        }
        Ok(())
    }

    fn check_dev_playable(&self, actor: usize, card: DevCard) -> Result<(), EngineError> {
        if !matches!(self.awaiting, Awaiting::Roll | Awaiting::Main) {
            return Err(EngineError::illegal(
                "development cards play before the roll or in the main sub-phase",
            ));
        }
        if self.dev_played_this_turn {
            return Err(EngineError::illegal(
                "already played a development card this turn",
            ));
        }
        if self.players[actor].dev_hidden.get(card) == 0 {
            return Err(EngineError::illegal(format!(
                "no playable {} card (cards bought this turn wait a turn)",
                card.name()
            )));
        }
        Ok(())
    }

    fn check_road_site(&self, player: usize, e: EdgeId) -> Result<(), EngineError> {
        if self.players[player].roads_left == 0 {
            return Err(EngineError::illegal("no road pieces left"));
        }
        if !self.board.contains_edge(e) {
            return Err(EngineError::illegal("edge is not on the board"));
        }
        if self.road_at(e).is_some() {
            return Err(EngineError::illegal("edge is occupied"));
        }
        if !self.road_edges(player).contains(&e) {
            return Err(EngineError::illegal("road does not connect to your network"));
        }
        Ok(())
    }

    fn check_settlement_site(
        &self,
        player: usize,
        node: NodeId,
        require_connection: bool,
    ) -> Result<(), EngineError> {
        if !self.board.contains_node(node) {
            return Err(EngineError::illegal("node is not on the board"));
        }
        if self.building_at(node).is_some() {
            return Err(EngineError::illegal("node is occupied"));
        }
        if self
            .board
            .neighbors(node)
            .iter()
            .any(|&n| self.building_at(n).is_some())
        {
            return Err(EngineError::illegal(
                "distance rule: adjacent node is occupied",
            ));
        }
        if require_connection
            && !self.players[player]
                .roads
                .iter()
                .any(|&(a, b)| a == node || b == node)
        {
            return Err(EngineError::illegal("settlement must touch one of your roads"));
        }
        Ok(())
    }

    fn place_settlement(&mut self, player: usize, node: NodeId) {
        let p = &mut self.players[player];
        p.settlements_left -= 1;
        p.buildings.insert(node, Building::Settlement);
        // A new settlement can cut an opponent trail.
        self.update_longest_road();
    }

    fn place_road(&mut self, player: usize, e: EdgeId) {
        let p = &mut self.players[player];
        p.roads_left -= 1;
        p.roads.insert(e);
        self.update_longest_road();
    }

    fn apply_build_city(&mut self, actor: usize, node: NodeId) -> Result<(), EngineError> {
        match self.players[actor].buildings.get(&node) {
            Some(Building::Settlement) => {}
            Some(Building::City) => return Err(EngineError::illegal("node already has a city")),
            None => return Err(EngineError::illegal("you have no settlement on that node")),
        }
        if self.players[actor].cities_left == 0 {
            return Err(EngineError::illegal("no city pieces left"));
        }
        self.pay(actor, &CITY_COST)?;
        let p = &mut self.players[actor];
        p.buildings.insert(node, Building::City);
        p.cities_left -= 1;
        p.settlements_left += 1;
        Ok(())
    }

    fn apply_road_building(
        &mut self,
        actor: usize,
        first: EdgeId,
        second: Option<EdgeId>,
    ) -> Result<(), EngineError> {
        if self.players[actor].roads_left == 0 {
            return Err(EngineError::illegal("no road pieces left"));
        }
        if !self.road_edges(actor).contains(&first) {
            return Err(EngineError::illegal("first road placement is invalid"));
        }
        self.place_road(actor, first);
        if let Some(second) = second {
            if self.players[actor].roads_left == 0 {
                return Err(EngineError::illegal("no road pieces left for second road"));
            }
            if !self.road_edges(actor).contains(&second) {
                return Err(EngineError::illegal("second road placement is invalid"));
            }
            self.place_road(actor, second);
        }
        self.players[actor].dev_hidden.remove(DevCard::RoadBuilding)?;
        self.players[actor].dev_played.add(DevCard::RoadBuilding);
        self.dev_played_this_turn = true;
        Ok(())
    }

    fn apply_trade(
        &mut self,
        actor: usize,
        give: Resource,
        give_count: u8,
        get: Resource,
    ) -> Result<(), EngineError> {
        let ratio = self.trade_ratio(actor, give);
        if give_count != ratio {
            return Err(EngineError::illegal(format!(
                "trade ratio for {give} is {ratio}:1"
            )));
        }
        if give == get {
            return Err(EngineError::illegal("cannot trade a resource for itself"));
        }
        if self.bank.get(get) == 0 {
            return Err(EngineError::illegal("bank is out of that resource"));
        }
        self.players[actor].resources.remove(give, give_count)?;
        self.bank.add(give, give_count);
        self.bank.remove(get, 1)?;
        self.players[actor].resources.add(get, 1);
        Ok(())
    }

    fn apply_end_turn(&mut self) {
        let actor = self.current_player;
        let bought = self.players[actor].dev_bought_this_turn;
        for (i, &n) in bought.0.iter().enumerate() {
            self.players[actor].dev_hidden.0[i] += n;
        }
        self.players[actor].dev_bought_this_turn = Default::default();
        self.dev_played_this_turn = false;
        self.turn_index += 1;
        if self.turn_index >= self.config.max_turns {
            self.phase = Phase::Terminal;
            self.turn_capped = true;
            return;
        }
        self.current_player = self.opponent_of(actor);
        self.awaiting = Awaiting::Roll;
    }

    /// Longest Road: held by the strictly longest trail of length >= 5,
    /// transferred only when strictly beaten, lost when broken below 5.
    fn update_longest_road(&mut self) {
        let lengths: Vec<u32> = (0..self.players.len())
            .map(|p| self.road_length(p))
            .collect();
        let qualified = |p: usize| lengths[p] >= 5;
        self.longest_road_holder = match self.longest_road_holder {
            Some(h) if qualified(h) => {
                let o = self.opponent_of(h);
                if qualified(o) && lengths[o] > lengths[h] {
                    Some(o)
                } else {
                    Some(h)
                }
            }
            _ => {
                let candidates: Vec<usize> =
                    (0..self.players.len()).filter(|&p| qualified(p)).collect();
                match candidates.as_slice() {
                    [] => None,
                    [p] => Some(*p),
                    // Both qualify at once (a settlement broke the previous
                    // holder): strictly longer wins, exact tie seats no one.
                    _ => {
                        let (a, b) = (candidates[0], candidates[1]);
                        match lengths[a].cmp(&lengths[b]) {
                            std::cmp::Ordering::Greater => Some(a),
                            std::cmp::Ordering::Less => Some(b),
                            std::cmp::Ordering::Equal => None,
                        }
                    }
                }
            }
        };
    }

    /// Largest Army: first to 3 knights, transferred only by strictly more.
    fn update_largest_army(&mut self, actor: usize) {
        let knights = self.players[actor].knights_played;
        if knights < 3 {
            return;
        }
        match self.largest_army_holder {
            None => self.largest_army_holder = Some(actor),
            Some(h) if h != actor && knights > self.players[h].knights_played => {
                self.largest_army_holder = Some(actor)
            }
            _ => {}
        }
    }

    fn check_victory(&mut self, actor: usize) {
        if self.phase == Phase::Terminal {
            return;
        }
        for p in [actor, self.opponent_of(actor)] {
            if self.victory_points(p, true) >= self.config.vp_target {
                self.phase = Phase::Terminal;
                self.winner = Some(p);
                return;
            }
        }
    }
}

/// Tile production probability: the chance of rolling this token with two
/// dice (0 for untokened tiles).
pub fn token_probability(token: Option<u8>) -> f64 {
    match token {
        Some(t) if (2..=12).contains(&t) && t != 7 => (6 - (t as i32 - 7).abs()) as f64 / 36.0,
        _ => 0.0,
    }
}
