use catanlab_core::bots::RandomBot;
use catanlab_core::engine::{play_game, GameConfig};

#[test]
fn random_game_completes() {
    let config = GameConfig::default();
    let mut a = RandomBot::new(1);
    let mut b = RandomBot::new(2);
    let (result, log) = play_game([&mut a, &mut b], &config, 42).unwrap();
    println!(
        "winner={:?} vp={:?} turns={} capped={} events={}",
        result.winner,
        result.vp,
        result.turns,
        result.turn_capped,
        log.events.len()
    );
    assert!(result.turns >= 1);
}

#[test]
fn random_series_stats() {
    let config = GameConfig::default();
    let n = 60;
    let mut turns_sum = 0u64;
    let mut capped = 0;
    let mut wins = [0u32; 2];
    let start = std::time::Instant::now();
    for g in 0..n {
        let mut a = RandomBot::new(1000 + g);
        let mut b = RandomBot::new(2000 + g);
        let (result, _) = play_game([&mut a, &mut b], &config, g).unwrap();
        turns_sum += result.turns as u64;
        if result.turn_capped {
            capped += 1;
        }
        if let Some(w) = result.winner {
            wins[w] += 1;
        }
    }
    let dt = start.elapsed();
    println!(
        "{} games in {:?} ({:.1} games/s): avg turns {:.1}, capped {}, wins {:?}",
        n,
        dt,
        n as f64 / dt.as_secs_f64(),
        turns_sum as f64 / n as f64,
        capped,
        wins
    );
}

#[test]
fn alphabeta_series_stats() {
    use catanlab_core::bots::AlphaBetaBot;
    let config = GameConfig::default();
    let n = 10;
    let mut turns_sum = 0u64;
    let mut ab_wins = 0;
    let mut rand_vp_sum = 0u64;
    let start = std::time::Instant::now();
    for g in 0..n {
        let mut a = RandomBot::new(1000 + g);
        let mut b = AlphaBetaBot::default();
        let (result, _) = play_game([&mut a, &mut b], &config, g).unwrap();
        turns_sum += result.turns as u64;
        if result.winner == Some(1) {
            ab_wins += 1;
        }
        rand_vp_sum += result.vp[0] as u64;
        println!(
            "  game {g}: winner={:?} vp={:?} turns={} capped={}",
            result.winner, result.vp, result.turns, result.turn_capped
        );
    }
    let dt = start.elapsed();
    println!(
        "AB series: {} games in {:?}: ab wins {}, avg turns {:.1}, random avg vp {:.2}",
        n,
        dt,
        ab_wins,
        turns_sum as f64 / n as f64,
        rand_vp_sum as f64 / n as f64
    );
}

#[test]
fn alphabeta_action_mix() {
    use catanlab_core::bots::AlphaBetaBot;
    use catanlab_core::engine::Action;
    use std::collections::BTreeMap;
    let config = GameConfig::default();
    let mut mix: BTreeMap<&'static str, u32> = BTreeMap::new();
    for g in 0..3u64 {
        let mut a = RandomBot::new(1000 + g);
        let mut b = AlphaBetaBot::default();
        let (result, log) = play_game([&mut a, &mut b], &config, g).unwrap();
        for e in &log.events {
            if e.player == 1 {
                let k = match e.action {
                    Action::Roll => "roll",
                    Action::MoveRobber { .. } => "robber",
                    Action::Discard { .. } => "discard",
                    Action::BuildRoad { .. } => "road",
                    Action::BuildSettlement { .. } => "settle",
                    Action::BuildCity { .. } => "city",
                    Action::BuyDevCard => "buy_dev",
                    Action::PlayKnight { .. } => "knight",
                    Action::PlayRoadBuilding { .. } => "rb",
                    Action::PlayYearOfPlenty { .. } => "yop",
                    Action::PlayMonopoly { .. } => "mono",
                    Action::MaritimeTrade { .. } => "trade",
                    Action::EndTurn => "end",
                };
                *mix.entry(k).or_default() += 1;
            }
        }
        println!(
            "game {g}: winner={:?} turns={} ab settles={} cities={} roads={} devs_played={:?}",
            result.winner,
            result.turns,
            result.settlements[1],
            result.cities[1],
            result.road_pieces[1],
            result.dev_vp[1]
        );
    }
    println!("AB action mix: {mix:?}");
}
