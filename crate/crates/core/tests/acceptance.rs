//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cardtable::agents::{
    qlearn_train, CfrSolver, ExternalSamplingMccfr, PolicyAgent, PolicyTable, QAgent, QParams, RandomAgent,
};
use cardtable::env::{make, Agent, Env, EnvConfig, GameId};
use cardtable::eval::{
    best_response, best_response_by_posteriors, count_info_sets, exploitability, tournament, winrate_vs_random,
    GameTree, Units, DEFAULT_NODE_LIMIT,
};
use cardtable::games::doudizhu::{dd_decode, dd_legal_actions, dd_legal_moves, table, NUM_ACTIONS};
use cardtable::games::{BlackjackGame, DoudizhuGame, LeducGame, LimitGame, UnoGame};
use cardtable::parallel::{bench, rollout_parallel, BenchReport, RolloutSpec};
use cardtable::{Game, Rng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn randoms(n: usize) -> Vec<Arc<dyn Agent>> {
    (0..n).map(|_| Arc::new(RandomAgent) as Arc<dyn Agent>).collect()
}

fn env_config(game: GameId, seed: u64) -> EnvConfig {
    let config = EnvConfig::new(game, seed);
    match game {
        GameId::Doudizhu => config.with_param("variant", "full"),
        GameId::MiniDoudizhu => config.with_param("variant", "mini"),
        _ => config,
    }
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for game in GameId::ALL {
        let mut logs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{game}-{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_cardtable"))
                .args(["selfplay", "--game", game.as_str(), "--games", "1000", "--seed", "7", "--out"])
                .arg(&out)
                .env_remove("CARDTABLE_SEED")
                .output()
                .unwrap()
                .status;
            if !status.success() {
                failures.push(format!("{game}: exit {status}"));
            }
            logs.push(std::fs::read(out.join("trajectories.csv")).unwrap_or_default());
        }
        if logs[0].is_empty() || logs[0] != logs[1] {
            failures.push(format!("{game}: logs differ"));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(120);
    outcome(
        failures.is_empty() && fast,
        format!("6 games x 2 runs identical={} in {:.1}s {}", failures.is_empty(), elapsed.as_secs_f64(), failures.join("; ")),
    )
}

fn probe_step_back<G: Game>(config: EnvConfig, probes: usize, rng: &mut Rng) -> bool {
    let mut env = Env::<G>::new(config).unwrap();
    let mut done = 0;
    while done < probes {
        env.init_game();
        while !env.is_over() && done < probes {
            let seat = env.current_player().unwrap();
            let obs = env.extract_state(seat);
            let before = env.game().clone();
            let decisions = env.decisions();
            let a = obs.legal_actions[rng.below(obs.legal_actions.len())];
            env.step(a).unwrap();
            if !env.step_back() || env.game() != &before || env.decisions() != decisions || env.extract_state(seat) != obs {
                return false;
            }
            // Continue along a different random branch.
            let b = obs.legal_actions[rng.below(obs.legal_actions.len())];
            env.step(b).unwrap();
            done += 1;
        }
    }
    true
}

fn step_back_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(2);
    let n = 10_000;
    let results = [
        ("blackjack", probe_step_back::<BlackjackGame>(env_config(GameId::Blackjack, 1), n, &mut rng)),
        ("leduc", probe_step_back::<LeducGame>(env_config(GameId::Leduc, 1), n, &mut rng)),
        ("limit_holdem", probe_step_back::<LimitGame>(env_config(GameId::LimitHoldem, 1), n, &mut rng)),
        ("uno", probe_step_back::<UnoGame>(env_config(GameId::Uno, 1), n, &mut rng)),
        ("doudizhu", probe_step_back::<DoudizhuGame>(env_config(GameId::Doudizhu, 1), n, &mut rng)),
        ("mini_doudizhu", probe_step_back::<DoudizhuGame>(env_config(GameId::MiniDoudizhu, 1), n, &mut rng)),
    ];
    let bad: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(300),
        format!("{n} probes x 6 games in {:.1}s, failing: {bad:?}", elapsed.as_secs_f64()),
    )
}

fn zero_sum() -> Outcome {
    let n = 10_000;
    let mut bad = 0usize;
    let mut env = Env::<LeducGame>::new(env_config(GameId::Leduc, 3)).unwrap();
    env.set_agents(randoms(2)).unwrap();
    for _ in 0..n {
        let (p, _) = env.play(false).unwrap();
        let g = env.game();
        let chips = [g.players()[0].chips as f64, g.players()[1].chips as f64];
        // Every chip put in comes back out: stakes plus winnings equal the pot.
        let settled = chips[0] + p[0] + chips[1] + p[1];
        if p[0] + p[1] != 0.0 || settled != g.pot() as f64 {
            bad += 1;
        }
    }
    let mut env = Env::<LimitGame>::new(env_config(GameId::LimitHoldem, 3)).unwrap();
    env.set_agents(randoms(2)).unwrap();
    for _ in 0..n {
        let (p, _) = env.play(false).unwrap();
        let g = env.game();
        let payouts = g.payouts().unwrap();
        let conserved = payouts.iter().sum::<f64>() == g.pot() as f64
            && g.players().iter().zip(&payouts).zip(&p).all(|((pl, won), x)| (won - pl.chips as f64) / 2.0 == *x);
        if p.iter().sum::<f64>() != 0.0 || !conserved {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{n} leduc + {n} limit games, violations={bad}"))
}

fn doudizhu_abstraction() -> Outcome {
    let entries = table().len();
    let distinct: BTreeSet<_> = table().entries().iter().collect();

    // Encode/decode over states sampled from random full-deck games.
    let mut env = Env::<DoudizhuGame>::new(env_config(GameId::Doudizhu, 11)).unwrap();
    let mut rng = Rng::new(12);
    let mut states = 0;
    let mut broken = 0;
    while states < 100_000 {
        env.init_game();
        while let Some(seat) = env.current_player() {
            let g = env.game();
            let hand = g.hand(seat);
            let to_beat = g.to_beat().copied();
            let ids = env.extract_state(seat).legal_actions;
            let decoded: Vec<_> = ids.iter().map(|&id| g.decode_action(id).unwrap()).collect();
            let concrete: BTreeSet<_> = dd_legal_moves(hand, to_beat.as_ref()).into_iter().collect();
            let ids_of_concrete: BTreeSet<_> = concrete.iter().map(|m| g.encode_move(m)).collect();
            let ok = ids == dd_legal_actions(hand, to_beat.as_ref())
                && decoded.iter().zip(&ids).all(|(m, &id)| g.encode_move(m) == id && concrete.contains(m))
                && decoded.iter().collect::<BTreeSet<_>>().len() == ids.len()
                && ids_of_concrete == ids.iter().copied().collect()
                && ids.iter().all(|&id| dd_decode(id, hand, to_beat.as_ref()).ok() == g.decode_action(id).ok());
            if !ok {
                broken += 1;
            }
            states += 1;
            let a = ids[rng.below(ids.len())];
            env.step(a).unwrap();
        }
    }

    // Brute-force oracle on random hands.
    let mut rng = Rng::new(13);
    let mut mismatches = 0;
    let hands = 1000;
    for i in 0..hands {
        let hand = common::random_hand(&mut rng, [5, 9, 17, 20][i % 4]);
        let to_beat = common::random_to_beat(&mut rng);
        let want = common::brute_force_legal(&hand, to_beat.as_ref());
        let tb = to_beat.as_ref().map(common::to_move);
        let got: BTreeSet<_> = dd_legal_moves(&hand, tb.as_ref()).iter().map(common::reading_of).collect();
        if got != want {
            mismatches += 1;
        }
    }
    outcome(
        entries == 309 && NUM_ACTIONS == 309 && distinct.len() == 309 && broken == 0 && mismatches == 0,
        format!("table={entries} states={states} broken={broken} oracle_hands={hands} mismatches={mismatches}"),
    )
}

fn census() -> Outcome {
    let start = Instant::now();
    let bj = count_info_sets::<BlackjackGame>(&Default::default(), DEFAULT_NODE_LIMIT).unwrap();
    let leduc = count_info_sets::<LeducGame>(&Default::default(), DEFAULT_NODE_LIMIT).unwrap();
    let shape = make(&env_config(GameId::Doudizhu, 0)).unwrap().extract_state(0).planes.shape;
    let bj_ok = (10f64.powf(2.5)..=10f64.powf(3.5)).contains(&(bj.info_sets as f64));
    let leduc_ok = (10f64.powf(1.5)..=10f64.powf(3.5)).contains(&(leduc.info_sets as f64));
    let elapsed = start.elapsed();
    outcome(
        bj_ok && leduc_ok && shape == vec![6, 5, 15] && elapsed < Duration::from_secs(300),
        format!(
            "blackjack={} leduc={} doudizhu_shape={:?} in {:.1}s",
            bj.info_sets,
            leduc.info_sets,
            shape,
            elapsed.as_secs_f64()
        ),
    )
}

struct Trained {
    tree: GameTree<f64>,
    cfr: PolicyTable<f64>,
    cfr_exploitability: f64,
}

fn cfr_convergence() -> (Outcome, Trained) {
    let start = Instant::now();
    let tree = GameTree::<f64>::compile::<LeducGame>(&Default::default(), DEFAULT_NODE_LIMIT).unwrap();
    let expl = |p: &PolicyTable<f64>| exploitability(&tree, p, Units::BigBlindsPerHand).unwrap().exploitability;
    let uniform = expl(&PolicyTable::new());

    let mut cfr = CfrSolver::<f64>::from_tree(tree.clone());
    let mut cfr_curve = Vec::new();
    for target in [100, 1_000, 10_000] {
        cfr.run(target - cfr.iterations());
        cfr_curve.push(expl(&cfr.average_policy()));
    }

    // A sampled iteration visits one trajectory per opponent decision, far
    // less than a full tree pass, so its schedule runs ten times longer.
    let mut env = Env::<LeducGame>::new(env_config(GameId::Leduc, 21)).unwrap();
    let mut rng = Rng::new(22);
    let mut mccfr = ExternalSamplingMccfr::<f64>::new();
    let mut mccfr_curve = Vec::new();
    for target in [1_000, 10_000, 100_000] {
        mccfr.run(&mut env, target - mccfr.iterations(), &mut rng).unwrap();
        mccfr_curve.push(expl(&mccfr.average_policy()));
    }

    let e = cfr_curve[2];
    let decreasing = cfr_curve.windows(2).all(|w| w[1] < w[0]);
    let agree = (mccfr_curve[2] - e).abs() <= 0.05;
    let elapsed = start.elapsed();
    let pass = e < uniform / 10.0 && decreasing && agree && elapsed < Duration::from_secs(900);
    let detail = format!(
        "uniform={uniform:.6} cfr@1e2,1e3,1e4={:.6},{:.6},{:.6} mccfr@1e3,1e4,1e5={:.6},{:.6},{:.6} gap={:.6} in {:.1}s",
        cfr_curve[0],
        cfr_curve[1],
        cfr_curve[2],
        mccfr_curve[0],
        mccfr_curve[1],
        mccfr_curve[2],
        (mccfr_curve[2] - e).abs(),
        elapsed.as_secs_f64()
    );
    let trained = Trained {
        cfr: cfr.average_policy(),
        cfr_exploitability: e,
        tree,
    };
    (outcome(pass, detail), trained)
}

fn tournament_direction(t: &Trained) -> Outcome {
    let config = env_config(GameId::Leduc, 31);
    let deals = 5_000;
    let cfr: Arc<dyn Agent> = Arc::new(PolicyAgent::new(t.cfr.clone()));

    let mut env = make(&config.clone().with_seed(32)).unwrap();
    env.set_single_agent(0, randoms(2)).unwrap();
    let params = QParams {
        rotate_seats: true,
        ..QParams::default()
    };
    let q = qlearn_train::<f64>(env.as_mut(), 200_000, &params, &mut Rng::new(33)).unwrap();
    let q: Arc<dyn Agent> = Arc::new(QAgent::new(q));

    let vs_random = tournament(&config, &[cfr.clone(), Arc::new(RandomAgent)], deals).unwrap();
    let vs_q = tournament(&config, &[cfr, q], deals).unwrap();
    let (a, b) = (vs_random.mean_per_agent[0], vs_q.mean_per_agent[0]);
    outcome(
        a > 0.0 && b > 0.0 && vs_random.games == 10_000 && vs_q.games == 10_000,
        format!("cfr vs random {a:+.4} bb/hand, cfr vs q {b:+.4} bb/hand, {} games each", vs_random.games),
    )
}

fn best_response_cross_check(t: &Trained) -> Outcome {
    let uniform = PolicyTable::new();
    let mut gap: f64 = 0.0;
    let mut values = Vec::new();
    for p in 0..2 {
        let a = best_response(&t.tree, &uniform, p).unwrap().value;
        let b = best_response_by_posteriors::<LeducGame>(&Default::default(), &uniform, p).unwrap().value;
        gap = gap.max((a - b).abs());
        values.push(a);
    }
    let e_uniform = (values[0] + values[1]) / 2.0;
    outcome(
        gap <= 1e-9 && t.cfr_exploitability >= 0.0,
        format!("uniform={e_uniform:.12} method_gap={gap:.2e} cfr={:.6}", t.cfr_exploitability),
    )
}

fn single_agent() -> Outcome {
    let start = Instant::now();
    let eval = env_config(GameId::Blackjack, 41);
    let hands = 100_000;
    let baseline = winrate_vs_random(Arc::new(RandomAgent), &eval, hands).unwrap().mean_payoff;

    let mut env = make(&env_config(GameId::Blackjack, 42)).unwrap();
    env.set_single_agent(0, randoms(1)).unwrap();
    let q = qlearn_train::<f64>(env.as_mut(), 200_000, &QParams::default(), &mut Rng::new(43)).unwrap();
    let trained = winrate_vs_random(Arc::new(QAgent::new(q)), &eval, hands).unwrap().mean_payoff;
    let elapsed = start.elapsed();
    outcome(
        trained >= baseline + 0.2 && elapsed < Duration::from_secs(600),
        format!(
            "random={baseline:+.4} q={trained:+.4} margin={:+.4} over {hands} hands in {:.1}s",
            trained - baseline,
            elapsed.as_secs_f64()
        ),
    )
}

fn throughput() -> Outcome {
    let mut rows = vec![BenchReport::CSV_HEADER.to_owned()];
    let mut all_ran = true;
    for game in GameId::ALL {
        match bench(game, 10_000, 1, 3, 51) {
            Ok(r) => {
                all_ran &= r.games == 30_000;
                rows.push(r.csv_row());
            }
            Err(e) => {
                all_ran = false;
                rows.push(format!("{game},error={e}"));
            }
        }
    }
    for row in &rows {
        println!("    {row}");
    }

    let mut config = env_config(GameId::Doudizhu, 52);
    config.allow_step_back = false;
    let spec = RolloutSpec::new(config, randoms(3), 10_000);
    let timed = |workers: usize| {
        let start = Instant::now();
        let r = rollout_parallel(&spec.clone().with_workers(workers)).unwrap();
        (r, start.elapsed().as_secs_f64())
    };
    let (one, t1) = timed(1);
    let (four, t4) = timed(4);
    let identical = one.payoff_sums == four.payoff_sums && one.records == four.records;
    let speedup = t1 / t4;
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    outcome(
        all_ran && identical && speedup > 1.0,
        format!(
            "bench rows={} identical_1v4={identical} doudizhu 1w={t1:.3}s 4w={t4:.3}s speedup={speedup:.3} cpus={cpus}",
            rows.len() - 1
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |id: usize, name: &'static str, o: Outcome| {
        println!("{} {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "determinism", determinism());
    record(2, "step_back round trip", step_back_round_trip());
    record(3, "zero-sum conservation", zero_sum());
    record(4, "dou dizhu abstraction", doudizhu_abstraction());
    record(5, "info-set census", census());
    let (o, trained) = cfr_convergence();
    record(6, "cfr convergence", o);
    record(7, "tournament direction", tournament_direction(&trained));
    record(8, "best-response cross-check", best_response_cross_check(&trained));
    record(9, "single-agent q-learning", single_agent());
    record(10, "throughput", throughput());
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
