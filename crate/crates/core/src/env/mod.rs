//! Uniform environment wrapper around the game engines.
//!
//! [`Env`] drives one engine: `run` plays a whole game with the configured
//! agents and assembles per-player trajectories, `step`/`step_back` expose
//! tree traversal, and `reset`/`sa_step` give the single-agent mode where
//! every seat but the learner is auto-played.
//!
//! Seeds fan out deterministically from [`EnvConfig::seed`]:
//! game `k` of an environment is dealt with `split(split(seed, 0), k)` and the
//! agent in seat `s` draws from `Rng::new(split(split(seed, 1), s))`.

mod observation;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use observation::{
    write_trajectories, InfoSetKey, NextState, Observation, Planes, RawView, Trajectory,
    Transition,
};

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, Node, Seat};
use crate::games::{BlackjackGame, DoudizhuGame, LeducGame, LimitGame, UnoGame};
use crate::rng::{split_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameId {
    Blackjack,
    Leduc,
    LimitHoldem,
    Uno,
    Doudizhu,
    MiniDoudizhu,
}

impl GameId {
    pub const ALL: [GameId; 6] = [
        GameId::Blackjack,
        GameId::Leduc,
        GameId::LimitHoldem,
        GameId::Uno,
        GameId::Doudizhu,
        GameId::MiniDoudizhu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Blackjack => "blackjack",
            GameId::Leduc => "leduc",
            GameId::LimitHoldem => "limit_holdem",
            GameId::Uno => "uno",
            GameId::Doudizhu => "doudizhu",
            GameId::MiniDoudizhu => "mini_doudizhu",
        }
    }

    /// Betting games report rewards in big blinds per hand, the others in
    /// win rate.
    pub fn is_betting(self) -> bool {
        matches!(self, GameId::Leduc | GameId::LimitHoldem)
    }

    /// Games whose seats play different roles (landlord vs peasants).
    pub fn is_role_asymmetric(self) -> bool {
        matches!(self, GameId::Doudizhu | GameId::MiniDoudizhu)
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameId {
    type Err = Error;
    fn from_str(s: &str) -> Result<GameId> {
        GameId::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnknownGame(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    pub game: GameId,
    pub seed: u64,
    pub num_players: Option<usize>,
    pub params: BTreeMap<String, String>,
    /// Keep snapshots so `step_back` works. Disable for raw throughput.
    pub allow_step_back: bool,
}

impl EnvConfig {
    pub fn new(game: GameId, seed: u64) -> EnvConfig {
        EnvConfig {
            game,
            seed,
            num_players: None,
            params: BTreeMap::new(),
            allow_step_back: true,
        }
    }

    pub fn with_players(mut self, n: usize) -> EnvConfig {
        self.num_players = Some(n);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> EnvConfig {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> EnvConfig {
        self.seed = seed;
        self
    }
}

/// A policy that picks an action id from an observation.
///
/// Both methods receive the seat's random stream; greedy agents ignore it.
pub trait Agent: Send + Sync {
    /// Best action under the agent's current knowledge.
    fn eval_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId;
    /// Action drawn from the agent's behaviour policy.
    fn sample_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId;
}

pub type PlanesHook<G> = Arc<dyn Fn(&G, Seat) -> Planes + Send + Sync>;
pub type DecodeHook<G> = Arc<dyn Fn(&G, ActionId) -> Result<<G as Game>::Move> + Send + Sync>;
pub type PayoffHook<G> = Arc<dyn Fn(&G) -> Vec<f64> + Send + Sync>;

/// Overridable conversions between the engine and the learner.
pub struct Hooks<G: Game> {
    /// Replaces the feature planes; legal action ids are never affected.
    pub extract_state: Option<PlanesHook<G>>,
    pub decode_action: Option<DecodeHook<G>>,
    pub get_payoffs: Option<PayoffHook<G>>,
}

impl<G: Game> Default for Hooks<G> {
    fn default() -> Self {
        Hooks {
            extract_state: None,
            decode_action: None,
            get_payoffs: None,
        }
    }
}

impl<G: Game> Clone for Hooks<G> {
    fn clone(&self) -> Self {
        Hooks {
            extract_state: self.extract_state.clone(),
            decode_action: self.decode_action.clone(),
            get_payoffs: self.get_payoffs.clone(),
        }
    }
}

#[derive(Clone)]
struct SingleAgent {
    learner: Seat,
    agents: Vec<Arc<dyn Agent>>,
}

#[derive(Clone)]
pub struct Env<G: Game> {
    config: EnvConfig,
    params: G::Params,
    game: G,
    history: Vec<G>,
    game_stream: u64,
    next_episode: u64,
    game_seed: u64,
    agent_rngs: Vec<Rng>,
    agents: Option<Vec<Arc<dyn Agent>>>,
    single: Option<SingleAgent>,
    hooks: Hooks<G>,
    decisions: usize,
    /// The game dealt by `new` has not been touched yet.
    fresh: bool,
}

impl<G: Game> fmt::Debug for Env<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Env")
            .field("config", &self.config)
            .field("game", &self.game)
            .field("decisions", &self.decisions)
            .finish_non_exhaustive()
    }
}

impl<G: Game> Env<G> {
    pub fn new(config: EnvConfig) -> Result<Env<G>> {
        let params = G::parse_params(config.num_players, &config.params)?;
        let game_stream = split_seed(config.seed, 0);
        let game_seed = split_seed(game_stream, 0);
        let mut game = G::new_game(&params, &mut Rng::new(game_seed));
        game.settle_chance();
        let agent_stream = split_seed(config.seed, 1);
        let agent_rngs = (0..game.num_players())
            .map(|s| Rng::new(split_seed(agent_stream, s as u64)))
            .collect();
        Ok(Env {
            config,
            params,
            game,
            history: Vec::new(),
            game_stream,
            next_episode: 0,
            game_seed,
            agent_rngs,
            agents: None,
            single: None,
            hooks: Hooks::default(),
            decisions: 0,
            fresh: true,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }
    pub fn params(&self) -> &G::Params {
        &self.params
    }
    pub fn game(&self) -> &G {
        &self.game
    }
    pub fn num_players(&self) -> usize {
        self.game.num_players()
    }
    pub fn num_actions(&self) -> usize {
        G::num_actions(&self.params)
    }
    /// Seed that dealt the current game.
    pub fn game_seed(&self) -> u64 {
        self.game_seed
    }
    /// Seed of the random stream handed to the agent in `seat`.
    pub fn agent_seed(&self, seat: Seat) -> u64 {
        split_seed(split_seed(self.config.seed, 1), seat as u64)
    }
    /// Decisions taken in the current game.
    pub fn decisions(&self) -> usize {
        self.decisions
    }

    pub fn set_hooks(&mut self, hooks: Hooks<G>) {
        self.hooks = hooks;
    }

    pub fn set_agents(&mut self, agents: Vec<Arc<dyn Agent>>) -> Result<()> {
        if agents.len() != self.num_players() {
            return Err(Error::SeatMismatch {
                expected: self.num_players(),
                got: agents.len(),
            });
        }
        self.agents = Some(agents);
        Ok(())
    }

    /// Switches to single-agent mode. `agents` covers every seat; the
    /// learner's entry is ignored.
    pub fn set_single_agent(&mut self, learner: Seat, agents: Vec<Arc<dyn Agent>>) -> Result<()> {
        if learner >= self.num_players() {
            return Err(Error::InvalidSeat(learner));
        }
        if agents.len() != self.num_players() {
            return Err(Error::SeatMismatch {
                expected: self.num_players(),
                got: agents.len(),
            });
        }
        self.single = Some(SingleAgent { learner, agents });
        Ok(())
    }

    /// Moves the learner of single-agent mode to `seat`.
    pub fn set_learner(&mut self, seat: Seat) -> Result<()> {
        if seat >= self.num_players() {
            return Err(Error::InvalidSeat(seat));
        }
        let single = self.single.as_mut().ok_or(Error::NotSingleAgentMode)?;
        single.learner = seat;
        Ok(())
    }

    /// Deals the next game and returns the first decision's observation.
    pub fn init_game(&mut self) -> (Observation, Seat) {
        self.game_seed = split_seed(self.game_stream, self.next_episode);
        // Game 0 was already dealt by `new`; dealing is deterministic.
        if !(self.fresh && self.next_episode == 0) {
            self.game = G::new_game(&self.params, &mut Rng::new(self.game_seed));
            self.game.settle_chance();
        }
        self.fresh = false;
        self.next_episode += 1;
        self.history.clear();
        self.decisions = 0;
        let seat = self.game.current_player().unwrap_or(0);
        (self.extract_state(seat), seat)
    }

    pub fn is_over(&self) -> bool {
        self.game.is_over()
    }

    pub fn current_player(&self) -> Option<Seat> {
        self.game.current_player()
    }

    /// Observation of `seat`; legal actions are empty off-turn.
    pub fn extract_state(&self, seat: Seat) -> Observation {
        let legal_actions = if self.game.node() == Node::Decision(seat) {
            self.game.legal_actions()
        } else {
            Vec::new()
        };
        let planes = match &self.hooks.extract_state {
            Some(hook) => hook(&self.game, seat),
            None => self.game.planes(seat),
        };
        Observation {
            player: seat,
            legal_actions,
            planes,
            raw: self.game.raw_view(seat),
        }
    }

    pub fn decode_action(&self, action: ActionId) -> Result<G::Move> {
        if self.game.is_over() {
            return Err(Error::GameOver);
        }
        match &self.hooks.decode_action {
            Some(hook) => hook(&self.game, action),
            None => self.game.decode_action(action),
        }
    }

    pub fn get_payoffs(&self) -> Result<Vec<f64>> {
        if !self.game.is_over() {
            return Err(Error::GameNotOver);
        }
        match &self.hooks.get_payoffs {
            Some(hook) => Ok(hook(&self.game)),
            None => self.game.payoffs(),
        }
    }

    fn advance(&mut self, action: ActionId) -> Result<Seat> {
        let seat = match self.game.node() {
            Node::Decision(s) => s,
            _ => return Err(Error::GameOver),
        };
        let mv = self.decode_action(action)?;
        self.fresh = false;
        if self.config.allow_step_back {
            self.history.push(self.game.clone());
        }
        if let Err(e) = self.game.apply(&mv) {
            if self.config.allow_step_back {
                self.history.pop();
            }
            return Err(e);
        }
        self.game.settle_chance();
        self.decisions += 1;
        Ok(seat)
    }

    /// Applies `action` for the current player, deals any forced chance
    /// events, and returns the observation of whoever acts next (the acting
    /// seat's final view when the game ends).
    pub fn step(&mut self, action: ActionId) -> Result<(Observation, Seat)> {
        if self.game.is_over() {
            return Err(Error::GameOver);
        }
        if !self.game.legal_actions().contains(&action) {
            return Err(Error::IllegalAction(action));
        }
        let acted = self.advance(action)?;
        let seat = self.game.current_player().unwrap_or(acted);
        Ok((self.extract_state(seat), seat))
    }

    /// Restores the engine state before the last `step`. False at the root.
    pub fn step_back(&mut self) -> bool {
        match self.history.pop() {
            Some(prev) => {
                self.game = prev;
                self.decisions -= 1;
                true
            }
            None => false,
        }
    }

    fn pick(&mut self, agent: &dyn Agent, obs: &Observation, training: bool) -> Result<ActionId> {
        let rng = &mut self.agent_rngs[obs.player];
        let a = if training {
            agent.sample_step(obs, rng)
        } else {
            agent.eval_step(obs, rng)
        };
        if obs.legal_actions.binary_search(&a).is_err() {
            return Err(Error::IllegalAction(a));
        }
        Ok(a)
    }

    /// Plays one full game and returns every seat's trajectory and payoff.
    ///
    /// A seat's transition is completed when that seat next observes the
    /// game, or at the terminal with the payoff as reward.
    pub fn run(&mut self, training: bool) -> Result<(Vec<Trajectory>, Vec<f64>)> {
        let agents = self.agents.clone().ok_or(Error::AgentsNotSet)?;
        self.init_game();
        let n = self.num_players();
        let mut trajectories: Vec<Trajectory> = (0..n).map(Trajectory::new).collect();
        let mut pending: Vec<Option<(Observation, ActionId, usize)>> = vec![None; n];
        while let Node::Decision(seat) = self.game.node() {
            let obs = self.extract_state(seat);
            if let Some((state, action, step_index)) = pending[seat].take() {
                trajectories[seat].transitions.push(Transition {
                    state,
                    action,
                    reward: 0.0,
                    next_state: NextState::State(obs.clone()),
                    done: false,
                    step_index,
                });
            }
            let action = self.pick(agents[seat].as_ref(), &obs, training)?;
            let step_index = self.decisions;
            self.advance(action)?;
            pending[seat] = Some((obs, action, step_index));
        }
        let payoffs = self.get_payoffs()?;
        for (seat, slot) in pending.iter_mut().enumerate() {
            if let Some((state, action, step_index)) = slot.take() {
                trajectories[seat].transitions.push(Transition {
                    state,
                    action,
                    reward: payoffs[seat],
                    next_state: NextState::Terminal(self.game.raw_view(seat)),
                    done: true,
                    step_index,
                });
            }
        }
        Ok((trajectories, payoffs))
    }

    /// Plays one full game without recording trajectories. Returns payoffs
    /// and the number of decisions taken.
    pub fn play(&mut self, training: bool) -> Result<(Vec<f64>, usize)> {
        let agents = self.agents.clone().ok_or(Error::AgentsNotSet)?;
        self.init_game();
        while let Node::Decision(seat) = self.game.node() {
            let obs = self.extract_state(seat);
            let action = self.pick(agents[seat].as_ref(), &obs, training)?;
            self.advance(action)?;
        }
        Ok((self.get_payoffs()?, self.decisions))
    }

    fn auto_play(&mut self) -> Result<()> {
        let single = self.single.clone().ok_or(Error::NotSingleAgentMode)?;
        while let Node::Decision(seat) = self.game.node() {
            if seat == single.learner {
                break;
            }
            let obs = self.extract_state(seat);
            let action = self.pick(single.agents[seat].as_ref(), &obs, true)?;
            self.advance(action)?;
        }
        Ok(())
    }

    /// Single-agent mode: starts a new game and plays the other seats up to
    /// the learner's first decision.
    pub fn reset(&mut self) -> Result<Observation> {
        let learner = self.single.as_ref().ok_or(Error::NotSingleAgentMode)?.learner;
        self.init_game();
        self.auto_play()?;
        Ok(self.extract_state(learner))
    }

    /// Single-agent mode: applies the learner's action, plays the other
    /// seats, and returns `(observation, reward, done)`.
    pub fn sa_step(&mut self, action: ActionId) -> Result<(Observation, f64, bool)> {
        let learner = self.single.as_ref().ok_or(Error::NotSingleAgentMode)?.learner;
        match self.game.node() {
            Node::Decision(s) if s == learner => {}
            Node::Terminal => return Err(Error::GameOver),
            _ => return Err(Error::IllegalAction(action)),
        }
        if !self.game.legal_actions().contains(&action) {
            return Err(Error::IllegalAction(action));
        }
        self.advance(action)?;
        self.auto_play()?;
        let obs = self.extract_state(learner);
        if self.game.is_over() {
            let reward = self.get_payoffs()?[learner];
            Ok((obs, reward, true))
        } else {
            Ok((obs, 0.0, false))
        }
    }
}

/// Object-safe view of an [`Env`], used where the game is chosen at runtime.
pub trait Environment: Send {
    fn game_id(&self) -> GameId;
    fn config(&self) -> &EnvConfig;
    fn num_players(&self) -> usize;
    fn num_actions(&self) -> usize;
    fn set_agents(&mut self, agents: Vec<Arc<dyn Agent>>) -> Result<()>;
    fn set_single_agent(&mut self, learner: Seat, agents: Vec<Arc<dyn Agent>>) -> Result<()>;
    fn set_learner(&mut self, seat: Seat) -> Result<()>;
    fn init_game(&mut self) -> (Observation, Seat);
    fn step(&mut self, action: ActionId) -> Result<(Observation, Seat)>;
    fn step_back(&mut self) -> bool;
    fn is_over(&self) -> bool;
    fn current_player(&self) -> Option<Seat>;
    fn extract_state(&self, seat: Seat) -> Observation;
    fn get_payoffs(&self) -> Result<Vec<f64>>;
    /// Human-readable literal of the concrete move behind `action`.
    fn describe_action(&self, action: ActionId) -> Result<String>;
    fn run(&mut self, training: bool) -> Result<(Vec<Trajectory>, Vec<f64>)>;
    fn play(&mut self, training: bool) -> Result<(Vec<f64>, usize)>;
    fn reset(&mut self) -> Result<Observation>;
    fn sa_step(&mut self, action: ActionId) -> Result<(Observation, f64, bool)>;
    fn game_seed(&self) -> u64;
    fn agent_seed(&self, seat: Seat) -> u64;
}

impl<G: Game> Environment for Env<G> {
    fn game_id(&self) -> GameId {
        self.config.game
    }
    fn config(&self) -> &EnvConfig {
        &self.config
    }
    fn num_players(&self) -> usize {
        Env::num_players(self)
    }
    fn num_actions(&self) -> usize {
        Env::num_actions(self)
    }
    fn set_agents(&mut self, agents: Vec<Arc<dyn Agent>>) -> Result<()> {
        Env::set_agents(self, agents)
    }
    fn set_single_agent(&mut self, learner: Seat, agents: Vec<Arc<dyn Agent>>) -> Result<()> {
        Env::set_single_agent(self, learner, agents)
    }
    fn set_learner(&mut self, seat: Seat) -> Result<()> {
        Env::set_learner(self, seat)
    }
    fn init_game(&mut self) -> (Observation, Seat) {
        Env::init_game(self)
    }
    fn step(&mut self, action: ActionId) -> Result<(Observation, Seat)> {
        Env::step(self, action)
    }
    fn step_back(&mut self) -> bool {
        Env::step_back(self)
    }
    fn is_over(&self) -> bool {
        Env::is_over(self)
    }
    fn current_player(&self) -> Option<Seat> {
        Env::current_player(self)
    }
    fn extract_state(&self, seat: Seat) -> Observation {
        Env::extract_state(self, seat)
    }
    fn get_payoffs(&self) -> Result<Vec<f64>> {
        Env::get_payoffs(self)
    }
    fn describe_action(&self, action: ActionId) -> Result<String> {
        Ok(self.decode_action(action)?.to_string())
    }
    fn run(&mut self, training: bool) -> Result<(Vec<Trajectory>, Vec<f64>)> {
        Env::run(self, training)
    }
    fn play(&mut self, training: bool) -> Result<(Vec<f64>, usize)> {
        Env::play(self, training)
    }
    fn reset(&mut self) -> Result<Observation> {
        Env::reset(self)
    }
    fn sa_step(&mut self, action: ActionId) -> Result<(Observation, f64, bool)> {
        Env::sa_step(self, action)
    }
    fn game_seed(&self) -> u64 {
        Env::game_seed(self)
    }
    fn agent_seed(&self, seat: Seat) -> u64 {
        Env::agent_seed(self, seat)
    }
}

/// Builds the environment named by `config.game`.
pub fn make(config: &EnvConfig) -> Result<Box<dyn Environment>> {
    let config = config.clone();
    Ok(match config.game {
        GameId::Blackjack => Box::new(Env::<BlackjackGame>::new(config)?),
        GameId::Leduc => Box::new(Env::<LeducGame>::new(config)?),
        GameId::LimitHoldem => Box::new(Env::<LimitGame>::new(config)?),
        GameId::Uno => Box::new(Env::<UnoGame>::new(config)?),
        GameId::Doudizhu => {
            check_variant(&config, "full")?;
            Box::new(Env::<DoudizhuGame>::new(with_variant(config, "full"))?)
        }
        GameId::MiniDoudizhu => {
            check_variant(&config, "mini")?;
            Box::new(Env::<DoudizhuGame>::new(with_variant(config, "mini"))?)
        }
    })
}

fn check_variant(config: &EnvConfig, expected: &str) -> Result<()> {
    match config.params.get("variant") {
        Some(v) if v != expected => Err(Error::InvalidParam(format!(
            "variant={v} conflicts with game {}",
            config.game
        ))),
        _ => Ok(()),
    }
}

fn with_variant(mut config: EnvConfig, variant: &str) -> EnvConfig {
    config.params.insert("variant".into(), variant.into());
    config
}
