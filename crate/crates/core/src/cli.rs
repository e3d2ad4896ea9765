//! Command-line front end.
//!
//! Every command writes its artifacts into `--out` (default
//! `runs/<command>-<game>-<seed>`) together with `manifest.txt`, a
//! `key=value` record of the merged configuration, the toolkit version and
//! the SHA-256 of each output file.
//!
//! Configuration files use the same flat format: one `key=value` per line,
//! `#` starts a comment. Recognized keys are the flag names (`game`, `seed`,
//! `algo`, `iters`, `episodes`, `games`, `workers`, `agents`, `out`) and
//! `param.<name>` for game parameters. Flags override file values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::agents::{
    cfr_train, mccfr_external_train, qlearn_train, PolicyAgent, PolicyTable, QParams, RandomAgent,
};
use crate::env::{make, write_trajectories, Agent, EnvConfig, GameId};
use crate::error::Error;
use crate::eval::{
    count_info_sets, exploitability, tournament_with_workers, GameTree, Units, DEFAULT_NODE_LIMIT,
};
use crate::game::Game;
use crate::games::{BlackjackGame, DoudizhuGame, LeducGame, LimitGame, UnoGame};
use crate::parallel::{bench, rollout_parallel, BenchReport, RolloutSpec};
use crate::rng::{split_seed, Rng};

pub const SEED_ENV: &str = "CARDTABLE_SEED";
pub const POLICY_FILE: &str = "policy";
pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cardtable", version, about = "Card-game environments, solvers and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum CommandKind {
    Selfplay,
    Train,
    Tournament,
    Exploit,
    Census,
    Bench,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play games between agents and log trajectories.
    Selfplay(Flags),
    /// Train a tabular agent and save its policy.
    Train(Flags),
    /// Seat-rotated tournament between agents.
    Tournament(Flags),
    /// Exploitability of a policy in an enumerable game.
    Exploit(Flags),
    /// Exhaustive info-set count.
    Census(Flags),
    /// Random-agent throughput benchmark.
    Bench(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Cfr,
    Mccfr,
    Qlearn,
    Random,
}

impl Algo {
    fn as_str(self) -> &'static str {
        match self {
            Algo::Cfr => "cfr",
            Algo::Mccfr => "mccfr",
            Algo::Qlearn => "qlearn",
            Algo::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    games: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Comma list of `random` or policy file paths, one per seat.
    #[arg(long)]
    agents: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Game parameter, repeatable.
    #[arg(long = "param", value_name = "K=V", value_parser = parse_kv)]
    params: Vec<(String, String)>,
    /// `key=value` configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_kv(s: &str) -> std::result::Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_owned(), v.trim().to_owned())),
        _ => Err(format!("expected key=value, got `{s}`")),
    }
}

/// Merged configuration of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub game: Option<GameId>,
    pub seed: u64,
    pub algo: Option<Algo>,
    pub iters: Option<usize>,
    pub episodes: Option<usize>,
    pub games: Option<usize>,
    pub workers: Option<usize>,
    pub agents: Option<String>,
    pub out: Option<PathBuf>,
    pub params: BTreeMap<String, String>,
    /// Keys whose file value was replaced by a flag.
    pub overridden: Vec<String>,
}

const FILE_KEYS: [&str; 9] = ["game", "seed", "algo", "iters", "episodes", "games", "workers", "agents", "out"];

/// Reads a `key=value` configuration file.
pub fn read_config_file(path: &Path) -> crate::Result<BTreeMap<String, String>> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: origin.clone(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: origin.clone(),
            line: i + 1,
            message,
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if !FILE_KEYS.contains(&k) && !k.starts_with("param.") {
            return Err(err(format!("unknown key `{k}`")));
        }
        if k == "algo" && Algo::from_str(v, false).is_err() {
            return Err(err(format!("unknown algo `{v}`")));
        }
        if ["seed", "iters", "episodes", "games", "workers"].contains(&k) && v.parse::<u64>().is_err() {
            return Err(err(format!("`{k}` expects an integer, got `{v}`")));
        }
        if k == "game" && v.parse::<GameId>().is_err() {
            return Err(err(format!("unknown game `{v}`")));
        }
        map.insert(k.to_owned(), v.to_owned());
    }
    Ok(map)
}

fn load_config(flags: &Flags) -> CliResult<RunConfig> {
    let file = match &flags.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let mut overridden = Vec::new();
    let mut pick = |key: &str, flag: Option<String>| -> Option<String> {
        match (flag, file.get(key)) {
            (Some(f), Some(_)) => {
                overridden.push(key.to_owned());
                Some(f)
            }
            (Some(f), None) => Some(f),
            (None, v) => v.cloned(),
        }
    };
    let game = pick("game", flags.game.clone());
    let seed = pick("seed", flags.seed.map(|s| s.to_string()));
    let algo = pick("algo", flags.algo.map(|a| a.as_str().to_owned()));
    let iters = pick("iters", flags.iters.map(|x| x.to_string()));
    let episodes = pick("episodes", flags.episodes.map(|x| x.to_string()));
    let games = pick("games", flags.games.map(|x| x.to_string()));
    let workers = pick("workers", flags.workers.map(|x| x.to_string()));
    let agents = pick("agents", flags.agents.clone());
    let out = pick("out", flags.out.as_ref().map(|p| p.display().to_string()));

    let mut params: BTreeMap<String, String> = file
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("param.").map(|k| (k.to_owned(), v.clone())))
        .collect();
    for (k, v) in &flags.params {
        if params.insert(k.clone(), v.clone()).is_some() {
            overridden.push(format!("param.{k}"));
        }
    }

    let seed = match seed {
        Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad seed `{s}`")))?,
        None => match std::env::var(SEED_ENV) {
            Ok(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{s}` is not an integer")))?,
            Err(_) => 0,
        },
    };
    let count = |v: Option<String>| -> Option<usize> { v.and_then(|s| s.parse().ok()) };
    overridden.sort();
    Ok(RunConfig {
        game: game.map(|g| g.parse()).transpose().map_err(|e: Error| CliError::Usage(e.to_string()))?,
        seed,
        algo: algo.map(|a| Algo::from_str(&a, false).expect("validated")),
        iters: count(iters),
        episodes: count(episodes),
        games: count(games),
        workers: count(workers),
        agents,
        out: out.map(PathBuf::from),
        params,
        overridden,
    })
}

impl RunConfig {
    fn game(&self) -> CliResult<GameId> {
        self.game.ok_or_else(|| CliError::Usage("--game is required".into()))
    }

    fn env_config(&self) -> CliResult<EnvConfig> {
        let mut c = EnvConfig::new(self.game()?, self.seed);
        c.params = self.params.clone();
        Ok(c)
    }

    fn out_dir(&self, command: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let game = self.game.map_or("all", GameId::as_str);
            PathBuf::from("runs").join(format!("{command}-{game}-{}", self.seed))
        })
    }
}

/// Collects output files and writes the manifest last.
struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    fn new(dir: PathBuf) -> CliResult<Self> {
        std::fs::create_dir_all(&dir).map_err(Error::from)?;
        Ok(Artifacts { dir, files: Vec::new() })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        std::fs::write(self.path(name), bytes).map_err(Error::from)?;
        self.record(name);
        Ok(())
    }

    fn record(&mut self, name: &str) {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_owned());
        }
    }

    fn finish(mut self, command: &str, config: &RunConfig) -> CliResult<PathBuf> {
        let mut m = String::new();
        let _ = writeln!(m, "tool=cardtable");
        let _ = writeln!(m, "version={}", crate::VERSION);
        let _ = writeln!(m, "command={command}");
        if let Some(g) = config.game {
            let _ = writeln!(m, "game={g}");
        }
        let _ = writeln!(m, "seed={}", config.seed);
        let optional = [
            ("algo", config.algo.map(|a| a.as_str().to_owned())),
            ("iters", config.iters.map(|x| x.to_string())),
            ("episodes", config.episodes.map(|x| x.to_string())),
            ("games", config.games.map(|x| x.to_string())),
            ("workers", config.workers.map(|x| x.to_string())),
            ("agents", config.agents.clone()),
        ];
        for (k, v) in optional {
            if let Some(v) = v {
                let _ = writeln!(m, "{k}={v}");
            }
        }
        for (k, v) in &config.params {
            let _ = writeln!(m, "param.{k}={v}");
        }
        if !config.overridden.is_empty() {
            let _ = writeln!(m, "overridden={}", config.overridden.join(","));
        }
        self.files.sort();
        for f in &self.files {
            let bytes = std::fs::read(self.path(f)).map_err(Error::from)?;
            let _ = writeln!(m, "sha256.{f}={}", hex(&Sha256::digest(&bytes)));
        }
        std::fs::write(self.path(MANIFEST_FILE), m).map_err(Error::from)?;
        Ok(self.dir)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn seat_count(config: &EnvConfig) -> CliResult<usize> {
    Ok(make(config)?.num_players())
}

fn load_agents(spec: Option<&str>, seats: usize) -> CliResult<(Vec<Arc<dyn Agent>>, Vec<String>)> {
    let names: Vec<String> = match spec {
        None => vec!["random".to_owned(); seats],
        Some(s) => s.split(',').map(|x| x.trim().to_owned()).collect(),
    };
    if names.len() != seats {
        return Err(Error::SeatMismatch {
            expected: seats,
            got: names.len(),
        }
        .into());
    }
    let agents = names
        .iter()
        .map(|n| -> CliResult<Arc<dyn Agent>> {
            if n == "random" {
                Ok(Arc::new(RandomAgent))
            } else {
                Ok(Arc::new(PolicyAgent::new(load_policy(n)?)))
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((agents, names))
}

/// A policy path may name the file or the run directory holding it.
fn load_policy(path: &str) -> CliResult<PolicyTable<f64>> {
    let p = Path::new(path);
    let file = if p.is_dir() { p.join(POLICY_FILE) } else { p.to_path_buf() };
    Ok(PolicyTable::load(&file)?)
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Diagnostics go to stderr.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("cardtable: {e}");
            e.exit_code()
        }
    }
}

/// Like [`parse_and_dispatch`] but writes the report to `out` and returns
/// the error instead of printing it.
pub fn run_to<I, T>(argv: I, out: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    dispatch(cli.command, out)
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let (kind, flags) = match command {
        Command::Selfplay(f) => (CommandKind::Selfplay, f),
        Command::Train(f) => (CommandKind::Train, f),
        Command::Tournament(f) => (CommandKind::Tournament, f),
        Command::Exploit(f) => (CommandKind::Exploit, f),
        Command::Census(f) => (CommandKind::Census, f),
        Command::Bench(f) => (CommandKind::Bench, f),
    };
    let config = load_config(&flags)?;
    let map_usage = |e: CliError| match e {
        CliError::Runtime(Error::InvalidParam(m)) => CliError::Usage(m),
        CliError::Runtime(Error::UnknownGame(g)) => CliError::Usage(format!("unknown game `{g}`")),
        other => other,
    };
    match kind {
        CommandKind::Selfplay => selfplay(&config, out),
        CommandKind::Train => train(&config, out),
        CommandKind::Tournament => run_tournament(&config, out),
        CommandKind::Exploit => exploit(&config, out),
        CommandKind::Census => census(&config, out),
        CommandKind::Bench => run_bench(&config, out),
    }
    .map_err(map_usage)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Runtime(e.into())
}

fn selfplay(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let env_config = config.env_config()?;
    let seats = seat_count(&env_config)?;
    let (agents, _) = load_agents(config.agents.as_deref(), seats)?;
    let mut spec = RolloutSpec::new(env_config.clone(), agents, config.games.unwrap_or(1));
    spec.n_workers = config.workers.unwrap_or(1);
    spec.collect_trajectories = true;
    let result = rollout_parallel(&spec)?;
    let mut log = Vec::new();
    for r in &result.records {
        let t = r.trajectories.as_deref().unwrap_or_default();
        write_trajectories(&mut log, env_config.game.as_str(), r.seed, t).map_err(io)?;
    }
    let mut art = Artifacts::new(config.out_dir("selfplay"))?;
    art.write("trajectories.csv", &log)?;
    let dir = art.finish("selfplay", config)?;
    writeln!(out, "game={} games={} steps={}", env_config.game, result.games, result.steps).map_err(io)?;
    let means: Vec<String> = result.mean_payoffs().iter().map(|m| format!("{m:.6}")).collect();
    writeln!(out, "mean_payoffs={}", means.join(",")).map_err(io)?;
    writeln!(out, "artifacts={}", dir.display()).map_err(io)?;
    Ok(())
}

fn train_cfr<G: Game>(env_config: &EnvConfig, iters: usize) -> CliResult<PolicyTable<f64>> {
    let params = G::parse_params(env_config.num_players, &env_config.params)?;
    Ok(cfr_train::<G, f64>(&params, iters)?)
}

fn train_mccfr<G: Game>(env_config: &EnvConfig, iters: usize) -> CliResult<PolicyTable<f64>> {
    let mut rng = Rng::new(split_seed(env_config.seed, 2));
    Ok(mccfr_external_train::<G, f64>(env_config, iters, &mut rng)?)
}

fn train(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let env_config = config.env_config()?;
    let algo = config.algo.ok_or_else(|| CliError::Usage("--algo is required".into()))?;
    let iters = config.iters.unwrap_or(1000);
    let game = env_config.game;
    let policy = match algo {
        Algo::Cfr => match game {
            GameId::Leduc => train_cfr::<LeducGame>(&env_config, iters)?,
            GameId::Blackjack => train_cfr::<BlackjackGame>(&env_config, iters)?,
            _ => return Err(Error::GameTooLarge { limit: DEFAULT_NODE_LIMIT }.into()),
        },
        Algo::Mccfr => {
            let mut c = env_config.clone();
            match game {
                GameId::Blackjack => train_mccfr::<BlackjackGame>(&c, iters)?,
                GameId::Leduc => train_mccfr::<LeducGame>(&c, iters)?,
                GameId::LimitHoldem => train_mccfr::<LimitGame>(&c, iters)?,
                GameId::Uno => train_mccfr::<UnoGame>(&c, iters)?,
                GameId::Doudizhu | GameId::MiniDoudizhu => {
                    let variant = if game == GameId::Doudizhu { "full" } else { "mini" };
                    c.params.insert("variant".into(), variant.into());
                    train_mccfr::<DoudizhuGame>(&c, iters)?
                }
            }
        }
        Algo::Qlearn => {
            let episodes = config.episodes.unwrap_or(10_000);
            let mut env = make(&env_config)?;
            let n = env.num_players();
            let random: Vec<Arc<dyn Agent>> = (0..n).map(|_| Arc::new(RandomAgent) as Arc<dyn Agent>).collect();
            env.set_single_agent(0, random)?;
            let params = QParams {
                rotate_seats: n > 1,
                ..QParams::default()
            };
            let mut rng = Rng::new(split_seed(env_config.seed, 3));
            qlearn_train::<f64>(env.as_mut(), episodes, &params, &mut rng)?.to_policy()
        }
        // The empty table plays uniformly everywhere.
        Algo::Random => PolicyTable::new(),
    };
    let mut art = Artifacts::new(config.out_dir("train"))?;
    art.write(POLICY_FILE, policy.to_text().as_bytes())?;
    let dir = art.finish("train", config)?;
    writeln!(out, "game={game} algo={} info_sets={}", algo.as_str(), policy.len()).map_err(io)?;
    writeln!(out, "policy={}", dir.join(POLICY_FILE).display()).map_err(io)?;
    Ok(())
}

fn run_tournament(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let env_config = config.env_config()?;
    let seats = seat_count(&env_config)?;
    let (agents, labels) = load_agents(config.agents.as_deref(), seats)?;
    let deals = config.games.unwrap_or(1000);
    let result = tournament_with_workers(&env_config, &agents, deals, config.workers.unwrap_or(1))?;
    let mut csv = Vec::new();
    result.write_csv(&labels, &mut csv)?;
    let mut summary = Vec::new();
    result.write_summary(&labels, &mut summary)?;
    out.write_all(&csv).map_err(io)?;
    let mut art = Artifacts::new(config.out_dir("tournament"))?;
    art.write("tournament.csv", &csv)?;
    art.write("summary.txt", &summary)?;
    let dir = art.finish("tournament", config)?;
    writeln!(out, "artifacts={}", dir.display()).map_err(io)?;
    Ok(())
}

fn exploit(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let env_config = config.env_config()?;
    if env_config.game != GameId::Leduc {
        return Err(CliError::Usage(format!(
            "exploitability needs a two-player enumerable game; `{}` is not supported",
            env_config.game
        )));
    }
    let params = LeducGame::parse_params(env_config.num_players, &env_config.params)?;
    let policy = match config.agents.as_deref() {
        None | Some("random") => PolicyTable::new(),
        Some(p) => load_policy(p)?,
    };
    let tree = GameTree::<f64>::compile::<LeducGame>(&params, DEFAULT_NODE_LIMIT)?;
    let report = exploitability(&tree, &policy, Units::BigBlindsPerHand)?;
    let text = format!(
        "game={}\nunits={}\nbr_value.0={:.12}\nbr_value.1={:.12}\nexploitability={:.12}\n",
        env_config.game,
        report.units.as_str(),
        report.br_values[0],
        report.br_values[1],
        report.exploitability
    );
    out.write_all(text.as_bytes()).map_err(io)?;
    let mut art = Artifacts::new(config.out_dir("exploit"))?;
    art.write("exploitability.txt", text.as_bytes())?;
    art.finish("exploit", config)?;
    Ok(())
}

fn census(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let env_config = config.env_config()?;
    let game = env_config.game;
    let census = match game {
        GameId::Blackjack => Some(count_info_sets::<BlackjackGame>(
            &BlackjackGame::parse_params(None, &env_config.params)?,
            DEFAULT_NODE_LIMIT,
        )?),
        GameId::Leduc => Some(count_info_sets::<LeducGame>(
            &LeducGame::parse_params(None, &env_config.params)?,
            DEFAULT_NODE_LIMIT,
        )?),
        _ => None,
    };
    let env = make(&env_config)?;
    let obs = env.extract_state(0);
    let shape: Vec<String> = obs.planes.shape.iter().map(|d| d.to_string()).collect();
    let mut text = format!(
        "game={game}\nnum_actions={}\nobservation_shape={}\n",
        env.num_actions(),
        shape.join("x")
    );
    match census {
        Some(c) => {
            let per: Vec<String> = c.per_player.iter().map(|x| x.to_string()).collect();
            let _ = write!(
                text,
                "info_sets={}\ninfo_sets_per_player={}\ndecision_states={}\navg_states_per_info_set={:.3}\n",
                c.info_sets,
                per.join(","),
                c.decision_states,
                c.avg_states_per_info_set
            );
        }
        None => text.push_str("info_sets=not-enumerable\n"),
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    let mut art = Artifacts::new(config.out_dir("census"))?;
    art.write("census.txt", text.as_bytes())?;
    art.finish("census", config)?;
    Ok(())
}

fn run_bench(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let games: Vec<GameId> = match config.game {
        Some(g) => vec![g],
        None => GameId::ALL.to_vec(),
    };
    let mut rows = String::new();
    let _ = writeln!(rows, "{}", BenchReport::CSV_HEADER);
    for g in games {
        let r = bench(
            g,
            config.games.unwrap_or(1000),
            config.workers.unwrap_or(1),
            3,
            config.seed,
        )?;
        let _ = writeln!(rows, "{}", r.csv_row());
    }
    out.write_all(rows.as_bytes()).map_err(io)?;
    let mut art = Artifacts::new(config.out_dir("bench"))?;
    art.write("bench.csv", rows.as_bytes())?;
    art.finish("bench", config)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliResult<String> {
        let mut out = Vec::new();
        let argv = std::iter::once("cardtable").chain(args.iter().copied());
        run_to(argv, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert_eq!(parse_and_dispatch(["cardtable", "census", "--bogus"]), 2);
        assert_eq!(parse_and_dispatch(["cardtable"]), 2);
    }

    #[test]
    fn missing_game_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let err = run(&["census", "--out", out]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run(&["census", "--game", "mahjong", "--out", out]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "# leduc run\ngame=leduc\nseed=5\nparam.x=1\n").unwrap();
        let flags = Flags {
            config: Some(cfg.clone()),
            seed: Some(9),
            ..Flags::default()
        };
        let c = load_config(&flags).unwrap();
        assert_eq!(c.game, Some(GameId::Leduc));
        assert_eq!(c.seed, 9);
        assert_eq!(c.overridden, vec!["seed".to_owned()]);
        assert_eq!(c.params.get("x").map(String::as_str), Some("1"));

        std::fs::write(&cfg, "game=leduc\nseed=five\n").unwrap();
        match read_config_file(&cfg) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let missing = dir.path().join("nope.cfg");
        match read_config_file(&missing) {
            Err(Error::Parse { path, .. }) => assert!(path.ends_with("nope.cfg")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn train_then_tournament() {
        let dir = tempfile::tempdir().unwrap();
        let run1 = dir.path().join("run1");
        let run1s = run1.to_str().unwrap();
        run(&["train", "--game", "leduc", "--algo", "cfr", "--iters", "50", "--seed", "7", "--out", run1s]).unwrap();
        let manifest = std::fs::read_to_string(run1.join(MANIFEST_FILE)).unwrap();
        assert!(manifest.contains("algo=cfr\n"));
        assert!(manifest.contains("sha256.policy="));
        let agents = format!("{},random", run1.join("policy").display());
        let tdir = dir.path().join("t");
        let text = run(&["tournament", "--game", "leduc", "--agents", &agents, "--games", "50", "--out", tdir.to_str().unwrap()])
            .unwrap();
        assert!(text.starts_with("scope,index,label,mean,variance,games\n"));
        assert!(tdir.join("tournament.csv").exists());
        assert!(tdir.join("summary.txt").exists());
    }

    #[test]
    fn fixed_raise_param_reaches_the_engine() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        run(&["selfplay", "--game", "limit_holdem", "--param", "fixed_raise=2", "--games", "3", "--out", out]).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(manifest.contains("param.fixed_raise=2\n"));
        let err = run(&["selfplay", "--game", "limit_holdem", "--param", "fixed_raise=x", "--out", out]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
