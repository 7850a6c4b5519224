//! `tugames` — exact coalitional-game calculations from the shell.
//!
//! Subcommands: `eval` (run an allocation rule on a game file), `audit`
//! (check a rule against the manipulation-immunity axioms on seeded
//! samples), `manipulate` (search for a profitable rewrite by a
//! coalition), `transform` (worths ⇄ dividends, modular shifts), and
//! `random` (seeded game generation).
//!
//! Exit codes: 0 success / no violation, 1 a violation or profitable
//! manipulation was found, 2 usage or parse errors.

mod gamefile;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use tugames::audit::{self, AxiomId, SearchConfig};
use tugames::game::{CoalitionalGame, Domain, ModularShift};
use tugames::manipulate::{self, Budget, ManipulationQuery, Mode};
use tugames::ratio;
use tugames::rules::{AllocationRule, RuleId};

use gamefile::GameFile;

#[derive(Parser)]
#[command(
    name = "tugames",
    version,
    about = "Exact-arithmetic toolkit for transferable-utility coalitional games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an allocation rule on a game file
    Eval(EvalArgs),
    /// Audit a rule against manipulation-immunity axioms on seeded samples
    Audit(AuditArgs),
    /// Search for a profitable manipulation by a coalition
    Manipulate(ManipulateArgs),
    /// Convert between worth and dividend form, or apply a modular shift
    Transform(TransformArgs),
    /// Generate seeded random game files
    Random(RandomArgs),
}

#[derive(Args)]
struct RuleSelect {
    /// One of: shapley, equal-division, weighted-shapley,
    /// egalitarian-shapley, nucleolus, null-value, phi-two-player, phi-w
    #[arg(long)]
    rule: String,
    /// Comma-separated positive weights (weighted-shapley only)
    #[arg(long)]
    weights: Option<String>,
    /// Mixing coefficient in [0, 1] (egalitarian-shapley only)
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Game file (JSON)
    file: PathBuf,
    #[command(flatten)]
    rule: RuleSelect,
    /// Emit canonical JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    rule: RuleSelect,
    /// Comma-separated axioms (A,E,N,S,R+,R,W,CMono,M+,M,CMarg,M-);
    /// defaults to every axiom the expectation table pins for the rule
    #[arg(long)]
    axioms: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per axiom cell
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Comma-separated player counts to audit at
    #[arg(long, default_value = "3")]
    players: String,
    /// unrestricted | superadditive
    #[arg(long, default_value = "unrestricted")]
    domain: String,
    /// Lattice numerator bound for perturbations
    #[arg(long, default_value_t = 12)]
    radius: i64,
    /// Lattice denominator for perturbations
    #[arg(long, default_value_t = 1)]
    denom: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ManipulateArgs {
    /// Game file (JSON)
    file: PathBuf,
    /// Comma-separated player names forming the manipulating coalition
    #[arg(long)]
    coalition: String,
    /// internal-reallocation | underreport | strong-reallocation
    #[arg(long)]
    mode: String,
    #[command(flatten)]
    rule: RuleSelect,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate evaluation budget
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 12)]
    radius: i64,
    #[arg(long, default_value_t = 1)]
    denom: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransformKind {
    /// Emit the game's Harsanyi dividends
    #[arg(long)]
    to_dividends: bool,
    /// Reconstruct the game from a dividends file
    #[arg(long)]
    from_dividends: bool,
    /// Apply a modular shift: comma-separated per-player amounts
    #[arg(long)]
    shift: Option<String>,
}

#[derive(Args)]
struct TransformArgs {
    /// Game file (JSON)
    file: PathBuf,
    #[command(flatten)]
    kind: TransformKind,
}

#[derive(Args)]
struct RandomArgs {
    /// Player count (1..=16)
    #[arg(long)]
    players: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// unrestricted | superadditive
    #[arg(long, default_value = "unrestricted")]
    domain: String,
    /// How many games to generate
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Worth/dividend lattice bound
    #[arg(long, default_value_t = 12)]
    radius: i64,
    #[arg(long, default_value_t = 1)]
    denom: i64,
    /// Superadditive generator: nonneg-dividends (constructive) or
    /// rejection (sample unrestricted games until superadditive)
    #[arg(long, default_value = "nonneg-dividends")]
    generator: String,
    /// Write game-NNNN.json files here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: 2 }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Manipulate(args) => cmd_manipulate(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Random(args) => cmd_random(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_game_file(path: &PathBuf) -> Result<GameFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    gamefile::parse_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_rule(select: &RuleSelect, n: u8) -> Result<RuleId, Failure> {
    let rule = match select.rule.as_str() {
        "shapley" => RuleId::Shapley,
        "equal-division" => RuleId::EqualDivision,
        "weighted-shapley" => {
            let raw = select
                .weights
                .as_ref()
                .ok_or_else(|| usage("weighted-shapley needs --weights"))?;
            let weights = raw
                .split(',')
                .map(ratio::parse)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| usage(format!("--weights: {e}")))?;
            if weights.len() != n as usize {
                return Err(usage(format!(
                    "--weights lists {} entries for an {n}-player game",
                    weights.len()
                )));
            }
            RuleId::WeightedShapley(weights)
        }
        "egalitarian-shapley" => {
            let raw = select
                .alpha
                .as_ref()
                .ok_or_else(|| usage("egalitarian-shapley needs --alpha"))?;
            let alpha = ratio::parse(raw).map_err(|e| usage(format!("--alpha: {e}")))?;
            RuleId::EgalitarianShapley(alpha)
        }
        "nucleolus" => RuleId::Nucleolus,
        "null-value" => RuleId::NullValue,
        "phi-two-player" => RuleId::PhiTwoPlayer,
        "phi-w" => RuleId::PhiW,
        other => return Err(usage(format!("unknown rule {other:?}"))),
    };
    if select.weights.is_some() && !matches!(rule, RuleId::WeightedShapley(_)) {
        return Err(usage("--weights only applies to weighted-shapley"));
    }
    if select.alpha.is_some() && !matches!(rule, RuleId::EgalitarianShapley(_)) {
        return Err(usage("--alpha only applies to egalitarian-shapley"));
    }
    Ok(rule)
}

fn parse_domain(text: &str) -> Result<Domain, Failure> {
    match text {
        "unrestricted" => Ok(Domain::Unrestricted),
        "superadditive" => Ok(Domain::Superadditive),
        other => Err(usage(format!("unknown domain {other:?}"))),
    }
}

fn cmd_eval(args: EvalArgs) -> CmdResult {
    let file = load_game_file(&args.file)?;
    let rule = parse_rule(&args.rule, file.player_count())?;
    let game = file.game();
    let alloc = rule.allocate(&game).map_err(|e| usage(e.to_string()))?;
    if args.json {
        report::print_value(&report::eval_value(&rule.to_string(), &file.players, &alloc));
    } else {
        print!("{}", report::eval_text(&rule.to_string(), &file.players, &alloc));
    }
    Ok(0)
}

fn cmd_audit(args: AuditArgs) -> CmdResult {
    let domain = parse_domain(&args.domain)?;
    let counts: Vec<u8> = args
        .players
        .split(',')
        .map(|p| p.trim().parse::<u8>().map_err(|e| usage(format!("--players: {e}"))))
        .collect::<Result<_, _>>()?;
    if counts.is_empty() || counts.iter().any(|&n| n == 0 || n > 16) {
        return Err(usage("--players must list counts between 1 and 16"));
    }
    let mut reports = Vec::new();
    for &n in &counts {
        let rule = parse_rule(&args.rule, n)?;
        let axioms: Vec<AxiomId> = match &args.axioms {
            Some(list) => list
                .split(',')
                .map(|a| AxiomId::from_str(a).map_err(|e| usage(e.to_string())))
                .collect::<Result<_, _>>()?,
            None => AxiomId::ALL
                .iter()
                .copied()
                .filter(|&axiom| audit::expected_verdict(&rule, axiom).is_some())
                .collect(),
        };
        if axioms.is_empty() {
            return Err(usage("no axioms to audit"));
        }
        let cfg = SearchConfig {
            seed: args.seed,
            samples: args.samples,
            n,
            domain,
            radius: args.radius,
            denom: args.denom,
        };
        let report = audit::run_audit(&rule, &axioms, &cfg)
            .map_err(|e| usage(e.to_string()))?;
        reports.push((n, report));
    }
    let rendering = report::render_audit(&reports);
    if args.json {
        report::print_value(&rendering.value);
    } else {
        print!("{}", rendering.text);
    }
    Ok(if rendering.unexpected_violation { 1 } else { 0 })
}

fn cmd_manipulate(args: ManipulateArgs) -> CmdResult {
    let file = load_game_file(&args.file)?;
    let rule = parse_rule(&args.rule, file.player_count())?;
    let names: Vec<String> =
        args.coalition.split(',').map(|s| s.trim().to_owned()).collect();
    let coalition = file.coalition(&names).map_err(|e| usage(e.to_string()))?;
    let mode = match args.mode.as_str() {
        "internal-reallocation" | "internal" => Mode::InternalReallocation,
        "underreport" => Mode::Underreport,
        "strong-reallocation" | "strong" => Mode::StrongReallocation,
        other => return Err(usage(format!("unknown mode {other:?}"))),
    };
    let query = ManipulationQuery {
        rule: rule.clone(),
        game: file.game(),
        coalition,
        mode,
        budget: Budget {
            radius: args.radius,
            denom: args.denom,
            samples: args.samples,
            seed: args.seed,
        },
    };
    let result = manipulate::optimize(&query).map_err(|e| usage(e.to_string()))?;
    let diff = result
        .best_w
        .as_ref()
        .map(|w| manipulate::diff(&query.game, w, &rule))
        .transpose()
        .map_err(|e| usage(e.to_string()))?;
    let witness = result
        .best_w
        .as_ref()
        .map(|w| GameFile::from_game(file.players.clone(), w.clone()));
    if args.json {
        report::print_value(&report::manipulate_value(
            &file.players,
            &result,
            diff.as_ref(),
            witness.as_ref(),
        ));
    } else {
        print!("{}", report::manipulate_text(&file.players, &result, diff.as_ref()));
    }
    Ok(u8::from(result.gain > tugames::ratio::int(0)))
}

fn cmd_transform(args: TransformArgs) -> CmdResult {
    let file = load_game_file(&args.file)?;
    let players = file.players.clone();
    let out = if args.kind.to_dividends {
        let game = file.game();
        GameFile::from_dividends(players, game.dividends(), game.domain())
    } else if args.kind.from_dividends {
        match &file.content {
            gamefile::Content::Dividends { .. } => {
                GameFile::from_game(players, file.game())
            }
            gamefile::Content::Worths(_) => {
                return Err(usage("--from-dividends expects a dividends file"))
            }
        }
    } else {
        let raw = args.kind.shift.as_ref().expect("clap enforces the group");
        let amounts = raw
            .split(',')
            .map(ratio::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("--shift: {e}")))?;
        let shift = ModularShift::new(amounts);
        let shifted = file.game().add_modular(&shift).map_err(|e| usage(e.to_string()))?;
        GameFile::from_game(players, shifted)
    };
    print!("{}", gamefile::to_string(&out));
    Ok(0)
}

fn cmd_random(args: RandomArgs) -> CmdResult {
    let domain = parse_domain(&args.domain)?;
    if args.players == 0 || args.players > 16 {
        return Err(usage("--players must be between 1 and 16"));
    }
    if args.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let players = gamefile::default_players(args.players);
    let mut games: Vec<CoalitionalGame> = Vec::with_capacity(args.count);
    let cfg = SearchConfig {
        seed: args.seed,
        samples: 0,
        n: args.players,
        domain,
        radius: args.radius,
        denom: args.denom,
    };
    let mut rng = audit::search_rng(args.seed);
    match (domain, args.generator.as_str()) {
        (_, "nonneg-dividends") | (Domain::Unrestricted, "rejection") => {
            for _ in 0..args.count {
                games.push(audit::sample_game(&mut rng, &cfg));
            }
        }
        (Domain::Superadditive, "rejection") => {
            let relaxed = SearchConfig { domain: Domain::Unrestricted, ..cfg.clone() };
            for _ in 0..args.count {
                let mut found = None;
                for _ in 0..100_000 {
                    let candidate = audit::sample_game(&mut rng, &relaxed);
                    if let Ok(tagged) = candidate.with_domain(Domain::Superadditive) {
                        found = Some(tagged);
                        break;
                    }
                }
                games.push(found.ok_or_else(|| {
                    usage("rejection sampling found no superadditive game; widen --radius")
                })?);
            }
        }
        (_, other) => return Err(usage(format!("unknown generator {other:?}"))),
    }

    let files: Vec<GameFile> =
        games.into_iter().map(|g| GameFile::from_game(players.clone(), g)).collect();
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
            for (k, file) in files.iter().enumerate() {
                let path = dir.join(format!("game-{:04}.json", k + 1));
                std::fs::write(&path, gamefile::to_string(file))
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                println!("{}", path.display());
            }
        }
        None => {
            if files.len() == 1 {
                print!("{}", gamefile::to_string(&files[0]));
            } else {
                let values: Vec<serde_json::Value> =
                    files.iter().map(gamefile::to_value).collect();
                let mut text = serde_json::to_string_pretty(&serde_json::Value::Array(values))
                    .expect("serializable");
                text.push('\n');
                print!("{text}");
            }
        }
    }
    Ok(0)
}
