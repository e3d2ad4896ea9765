//! Seat-rotated tournaments and win rates against random play.
//!
//! Deal `i` of a tournament is seeded with `split(master_seed, i)` and
//! replayed under every cyclic seat rotation: in rotation `r` seat `s` is
//! taken by agent `(s + r) % n`. Role-swapped blocks therefore share deals.
//! Agents act through `sample_step`.

use std::io::Write;
use std::sync::Arc;

use crate::env::{make, Agent, EnvConfig, GameId};
use crate::error::{Error, Result};
use crate::game::Seat;
use crate::parallel::map_games;
use crate::rng::split_seed;

pub const SEAT_SCHEME: &str = "cyclic-rotation";

#[derive(Debug, Clone, PartialEq)]
pub struct SeatBlock {
    pub rotation: usize,
    /// Agent index sitting in each seat.
    pub assignment: Vec<usize>,
    pub mean_per_seat: Vec<f64>,
    pub var_per_seat: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TournamentResult {
    pub game: GameId,
    pub deals: usize,
    pub games: usize,
    pub scheme: &'static str,
    pub mean_per_agent: Vec<f64>,
    pub var_per_agent: Vec<f64>,
    pub mean_per_seat: Vec<f64>,
    pub var_per_seat: Vec<f64>,
    /// One block per rotation, reported separately.
    pub blocks: Vec<SeatBlock>,
}

#[derive(Default, Clone)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn add(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }
    fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }
    /// Population variance.
    fn var(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let m = self.mean();
        (self.sum_sq / self.n as f64 - m * m).max(0.0)
    }
}

fn assignment(n: usize, rotation: usize) -> Vec<usize> {
    (0..n).map(|s| (s + rotation) % n).collect()
}

fn play_one(config: &EnvConfig, agents: &[Arc<dyn Agent>], seats: &[usize], seed: u64) -> Result<Vec<f64>> {
    let mut env = make(&config.clone().with_seed(seed))?;
    env.set_agents(seats.iter().map(|&a| agents[a].clone()).collect())?;
    Ok(env.play(true)?.0)
}

/// Plays `n_deals` deals under every seat rotation (`n_deals * seats`
/// games) on one worker.
pub fn tournament(config: &EnvConfig, agents: &[Arc<dyn Agent>], n_deals: usize) -> Result<TournamentResult> {
    tournament_with_workers(config, agents, n_deals, 1)
}

pub fn tournament_with_workers(
    config: &EnvConfig,
    agents: &[Arc<dyn Agent>],
    n_deals: usize,
    n_workers: usize,
) -> Result<TournamentResult> {
    let n = make(config)?.num_players();
    if agents.len() != n {
        return Err(Error::SeatMismatch {
            expected: n,
            got: agents.len(),
        });
    }
    if n_deals == 0 {
        return Err(Error::InvalidParam("a tournament needs at least one game".into()));
    }
    let seatings: Vec<Vec<usize>> = (0..n).map(|r| assignment(n, r)).collect();
    let payoffs = map_games(n_deals * n, n_workers, |g| {
        let (deal, rotation) = (g / n, g % n);
        play_one(config, agents, &seatings[rotation], split_seed(config.seed, deal as u64))
    })?;
    let mut per_agent = vec![Moments::default(); n];
    let mut per_seat = vec![Moments::default(); n];
    let mut per_block = vec![vec![Moments::default(); n]; n];
    for (g, p) in payoffs.iter().enumerate() {
        let rotation = g % n;
        for (seat, &x) in p.iter().enumerate() {
            per_agent[seatings[rotation][seat]].add(x);
            per_seat[seat].add(x);
            per_block[rotation][seat].add(x);
        }
    }
    Ok(TournamentResult {
        game: config.game,
        deals: n_deals,
        games: payoffs.len(),
        scheme: SEAT_SCHEME,
        mean_per_agent: per_agent.iter().map(Moments::mean).collect(),
        var_per_agent: per_agent.iter().map(Moments::var).collect(),
        mean_per_seat: per_seat.iter().map(Moments::mean).collect(),
        var_per_seat: per_seat.iter().map(Moments::var).collect(),
        blocks: per_block
            .iter()
            .enumerate()
            .map(|(r, m)| SeatBlock {
                rotation: r,
                assignment: seatings[r].clone(),
                mean_per_seat: m.iter().map(Moments::mean).collect(),
                var_per_seat: m.iter().map(Moments::var).collect(),
            })
            .collect(),
    })
}

impl TournamentResult {
    pub const CSV_HEADER: &'static str = "scope,index,label,mean,variance,games";

    /// One row per agent, per seat, and per (rotation, seat).
    pub fn write_csv<W: Write>(&self, labels: &[String], mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        let per_agent_games = self.games;
        for (i, (m, v)) in self.mean_per_agent.iter().zip(&self.var_per_agent).enumerate() {
            writeln!(out, "agent,{i},{},{m:.9},{v:.9},{per_agent_games}", labels[i])?;
        }
        for (s, (m, v)) in self.mean_per_seat.iter().zip(&self.var_per_seat).enumerate() {
            writeln!(out, "seat,{s},seat{s},{m:.9},{v:.9},{}", self.games)?;
        }
        for b in &self.blocks {
            for (s, (m, v)) in b.mean_per_seat.iter().zip(&b.var_per_seat).enumerate() {
                let label = &labels[b.assignment[s]];
                writeln!(out, "rotation{},{s},{label},{m:.9},{v:.9},{}", b.rotation, self.deals)?;
            }
        }
        Ok(())
    }

    /// `key=value` summary lines.
    pub fn write_summary<W: Write>(&self, labels: &[String], mut out: W) -> Result<()> {
        writeln!(out, "game={}", self.game)?;
        writeln!(out, "deals={}", self.deals)?;
        writeln!(out, "games={}", self.games)?;
        writeln!(out, "scheme={}", self.scheme)?;
        writeln!(out, "units={}", if self.game.is_betting() { "bb/hand" } else { "payoff" })?;
        for (i, m) in self.mean_per_agent.iter().enumerate() {
            writeln!(out, "agent.{i}.label={}", labels[i])?;
            writeln!(out, "agent.{i}.mean={m:.9}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VsRandom {
    /// Mean payoff of the evaluated agent (bb/hand in betting games).
    pub mean_payoff: f64,
    /// Fraction of games with a positive payoff.
    pub win_rate: f64,
    pub games: usize,
    /// Seats the agent occupied.
    pub seats: Vec<Seat>,
}

impl VsRandom {
    /// Headline number: bb/hand for betting games, win rate otherwise.
    pub fn headline(&self, game: GameId) -> f64 {
        if game.is_betting() {
            self.mean_payoff
        } else {
            self.win_rate
        }
    }
}

/// Evaluates `agent` against random opponents. In Dou Dizhu the agent is
/// the landlord (seat 0, with the default landlord rule); elsewhere it
/// takes every seat in turn on each deal.
pub fn winrate_vs_random(agent: Arc<dyn Agent>, config: &EnvConfig, n_games: usize) -> Result<VsRandom> {
    let n = make(config)?.num_players();
    let seats: Vec<Seat> = if config.game.is_role_asymmetric() { vec![0] } else { (0..n).collect() };
    let random: Arc<dyn Agent> = Arc::new(crate::agents::RandomAgent);
    let mut moments = Moments::default();
    let mut wins = 0usize;
    for deal in 0..n_games {
        for &seat in &seats {
            let lineup: Vec<Arc<dyn Agent>> = (0..n)
                .map(|s| if s == seat { agent.clone() } else { random.clone() })
                .collect();
            let mut env = make(&config.clone().with_seed(split_seed(config.seed, deal as u64)))?;
            env.set_agents(lineup)?;
            let x = env.play(true)?.0[seat];
            moments.add(x);
            if x > 0.0 {
                wins += 1;
            }
        }
    }
    Ok(VsRandom {
        mean_payoff: moments.mean(),
        win_rate: if moments.n == 0 { 0.0 } else { wins as f64 / moments.n as f64 },
        games: moments.n,
        seats,
    })
}
