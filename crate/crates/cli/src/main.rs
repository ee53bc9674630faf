use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gtc_core::attacks::{run_attack, AttackMethod};
use gtc_core::platform::Platform;
use gtc_core::protocols::{run_session, semidirect_closed_form, Protocol, SessionParams};
use gtc_core::rng::seeded;
use gtc_core::transcript::Transcript;
use gtc_core::wordenc::{run_trials, EveCase, TrialConfig};

mod examples;
mod keys;
mod solve;

#[derive(Parser)]
#[command(name = "gtc", version, about = "Group-theoretic key exchange, encryption and attack toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Seed shared by every randomized command.
#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// RNG seed; falls back to $GTC_SEED, then 1
    #[arg(long, env = "GTC_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run one key-exchange session and write its transcript
    Simulate(SimulateArgs),
    /// Run an attack against a transcript file
    Attack(AttackArgs),
    /// Replay the scripted chain and encryption against the golden values
    PaperExamples,
    /// Trick-and-treat trials with a word-problem oracle for Eve
    Montecarlo(MontecarloArgs),
    /// Trick-and-treat encryption of single bits
    #[command(subcommand)]
    WpEncrypt(keys::WpCommand),
    /// Homomorphic encryption through a disguised presentation
    #[command(subcommand)]
    Hom(keys::HomCommand),
    /// Bounded solvers for the decision problems
    #[command(subcommand)]
    Solve(solve::SolveCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum PlatformKind {
    Free,
    Dprod,
    Cyclic,
    Perm,
    Matrix,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    protocol: String,
    /// Platform family; the protocol's default platform when omitted
    #[arg(long, value_enum)]
    platform: Option<PlatformKind>,
    /// Matrix size
    #[arg(long)]
    n: Option<usize>,
    /// Prime modulus (cyclic, matrix)
    #[arg(long)]
    p: Option<u64>,
    /// Generator of the cyclic group
    #[arg(long)]
    g: Option<u64>,
    /// Free rank, or permutation degree
    #[arg(long)]
    rank: Option<usize>,
    /// Direct product factor ranks
    #[arg(long)]
    left: Option<usize>,
    #[arg(long)]
    right: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    /// Transcript file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    transcript: PathBuf,
    #[arg(long)]
    method: String,
    /// Search bound (exponent for dlog, word length otherwise)
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Report file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MontecarloArgs {
    #[arg(long, default_value_t = 5000)]
    trials: u64,
    #[arg(long, default_value_t = 3)]
    rank: usize,
    #[arg(long, default_value_t = 6)]
    chain_len: usize,
    #[arg(long, default_value_t = 16)]
    min_len: usize,
    #[arg(long, default_value_t = 32)]
    max_len: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn platform_for(args: &SimulateArgs, protocol: Protocol) -> Result<Platform> {
    let default = protocol.default_platform();
    let Some(kind) = args.platform else {
        // family fixed by the protocol, parameters still overridable
        return Ok(match default {
            Platform::Cyclic { p, g, .. } => Platform::cyclic(args.p.unwrap_or(p), args.g.unwrap_or(g))?,
            Platform::Matrix { n, p } => Platform::matrix(args.n.unwrap_or(n), args.p.unwrap_or(p))?,
            Platform::Free { rank } => Platform::free(args.rank.unwrap_or(rank))?,
            other => other,
        });
    };
    let pf = match kind {
        PlatformKind::Free => Platform::free(args.rank.unwrap_or(4))?,
        PlatformKind::Dprod => Platform::direct_product(args.left.unwrap_or(2), args.right.unwrap_or(2))?,
        PlatformKind::Cyclic => Platform::cyclic(args.p.unwrap_or(23), args.g.unwrap_or(5))?,
        PlatformKind::Perm => Platform::permutation(args.rank.unwrap_or(6))?,
        PlatformKind::Matrix => Platform::matrix(args.n.unwrap_or(4), args.p.unwrap_or(5))?,
    };
    Ok(pf)
}

fn simulate(args: &SimulateArgs) -> Result<u8> {
    let protocol: Protocol = args.protocol.parse()?;
    let pf = platform_for(args, protocol)?;
    let mut rng = seeded(args.seed.seed);
    let out = run_session(protocol, &pf, &SessionParams::default(), &mut rng)?;
    emit(args.out.as_deref(), &out.transcript.to_text())?;
    let mut summary = format!(
        "protocol={protocol} platform=\"{pf}\" seed={} messages={} message_bytes={} keys_equal={}",
        args.seed.seed,
        out.transcript.records().len(),
        out.transcript.message_bytes(),
        out.keys_agree()
    );
    let mut ok = out.keys_agree();
    if protocol == Protocol::Semidirect {
        if let Ok(h) = out.transcript.public_value("h") {
            let g = out.transcript.public_value("g")?;
            let k = out.exponent_value("m") + out.exponent_value("n");
            let matches = semidirect_closed_form(g, h, k) == out.key_alice;
            summary.push_str(&format!(" closed_form={}", if matches { "match" } else { "mismatch" }));
            ok &= matches;
        }
    }
    for w in &out.warnings {
        summary.push_str(&format!(" warning=\"{w}\""));
    }
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(if ok { 0 } else { 1 })
}

fn attack(args: &AttackArgs) -> Result<u8> {
    let method: AttackMethod = args.method.parse()?;
    if args.bound == 0 {
        bail!("bound must be positive");
    }
    let t: Transcript = read(&args.transcript)?.parse().context("unparseable transcript")?;
    let report = run_attack(&t, method, args.bound)?;
    emit(args.out.as_deref(), &report.to_text())?;
    Ok(0)
}

fn montecarlo(args: &MontecarloArgs) -> Result<u8> {
    if args.trials == 0 {
        bail!("trials must be at least 1");
    }
    if args.min_len > args.max_len {
        bail!("min-len exceeds max-len");
    }
    let cfg = TrialConfig {
        trials: args.trials,
        rank: args.rank,
        chain_len: args.chain_len,
        len_range: args.min_len..=args.max_len,
        seed: args.seed.seed,
    };
    let s = run_trials(&cfg)?;
    let line = format!(
        "trials={} seed={} alice_accuracy={:.4} eve_accuracy={:.4} case1={:.4} case2={:.4} case3={:.4}\n",
        s.trials,
        cfg.seed,
        s.alice_accuracy(),
        s.eve_accuracy(),
        s.case_frequency(EveCase::Both),
        s.case_frequency(EveCase::FirstOnly),
        s.case_frequency(EveCase::SecondOnly),
    );
    if let Some(p) = &args.out {
        emit(Some(p), &line)?;
    }
    print!("{line}");
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Attack(a) => attack(&a),
        Command::PaperExamples => examples::run(),
        Command::Montecarlo(a) => montecarlo(&a),
        Command::WpEncrypt(c) => keys::wp_encrypt(c),
        Command::Hom(c) => keys::hom(c),
        Command::Solve(c) => solve::run(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
