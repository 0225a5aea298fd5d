//! `cogplex`: structural complexity, surprise and lottery experiments from the
//! command line.
//!
//! Exit codes: 0 success, 1 internal error (or a failed `lottery table1`
//! check), 2 usage or parse error, 3 capability limit.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cogplex_core::config::parse_cost_model;
use cogplex_core::lottery::{
    avoidance_probability, check_table1, estimate_avoidance, generate_bulletin, parse_combinations,
    rank_combinations, render_combinations, simulate_subjects, ChoiceModel, ExperimentConfig,
};
use cogplex_core::oracle::ORACLE_SOFT_LIMIT;
use cogplex_core::surprise::{surprise_number, surprise_sequence, ExpectationTemplate, PoolSampler};
use cogplex_core::{analyze, oracle_min_cost, CostModel, Error, OperatorKind, SearchBudget};

#[derive(Parser, Debug)]
#[command(name = "cogplex", version, about = "Structural complexity and subjective probability of numeric sequences")]
struct Cli {
    /// Cost-model file (flat key = value, decimal bits).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the description program.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
    /// Plain output with the description program.
    Trace,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complexity of a sequence (space- or comma-separated integers).
    Complexity {
        #[arg(required = true, allow_negative_numbers = true)]
        tokens: Vec<String>,
        /// Cross-check against the exhaustive oracle (at most 8 tokens).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        mirror: bool,
    },
    /// Exhaustive minimal description (at most 8 tokens).
    Oracle {
        #[arg(required = true, allow_negative_numbers = true)]
        tokens: Vec<String>,
        #[arg(long)]
        mirror: bool,
    },
    /// Unexpectedness and subjective probability. A single token is read as a
    /// number; several tokens as a sequence.
    Surprise {
        #[arg(required = true, allow_negative_numbers = true)]
        tokens: Vec<String>,
        /// kdigit:K, fixed:BITS or pool:N (Monte-Carlo over 6-of-49 draws).
        #[arg(long)]
        template: Option<String>,
    },
    /// Lottery combinations.
    Lottery {
        #[command(subcommand)]
        command: LotteryCommand,
    },
}

#[derive(Subcommand, Debug)]
enum LotteryCommand {
    /// Rank combinations read from a file or stdin, one per line.
    Rank {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Print a shuffled 14-combination bulletin (requires --seed).
    Bulletin {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate subjects choosing from bulletins (requires --seed).
    Experiment {
        #[arg(long, default_value_t = 26)]
        subjects: usize,
        /// uniform, or weighted[:TAU] (TAU in bits, default 7).
        #[arg(long, default_value = "weighted")]
        model: String,
        /// Directory receiving histogram.csv and summary.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Monte-Carlo replications for the uniform avoidance estimate.
        #[arg(long, default_value_t = 1_000_000)]
        replications: u64,
    },
    /// Compare against the tabulated simple structures; exit 0 iff the order holds.
    Table1,
}

enum Failure {
    Usage(String),
    Capability(String),
    Internal(String),
    /// The command ran but its check did not pass.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse { .. } | Error::Config { .. } => Failure::Usage(e.to_string()),
            Error::Budget(_) => Failure::Capability(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if cli.format == Format::Trace {
        cli.format = Format::Plain;
        cli.trace = true;
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Capability(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let model = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            parse_cost_model(&text)?
        }
        None => CostModel::default(),
    };
    match &cli.command {
        Command::Complexity { tokens, oracle, mirror } => cmd_complexity(&cli, &model, tokens, *oracle, *mirror),
        Command::Oracle { tokens, mirror } => cmd_oracle(&cli, &model, tokens, *mirror),
        Command::Surprise { tokens, template } => cmd_surprise(&cli, &model, tokens, template.as_deref()),
        Command::Lottery { command } => match command {
            LotteryCommand::Rank { file } => cmd_rank(&cli, &model, file.as_ref()),
            LotteryCommand::Bulletin { out } => cmd_bulletin(&cli, out.as_ref()),
            LotteryCommand::Experiment { subjects, model: choice, out_dir, replications } => {
                cmd_experiment(&cli, &model, *subjects, choice, out_dir, *replications)
            }
            LotteryCommand::Table1 => cmd_table1(&cli, &model),
        },
    }
}

fn parse_tokens(raw: &[String]) -> Result<Vec<u64>, Failure> {
    let seq = raw
        .iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Failure::Usage(format!("bad token {t:?}: expected a nonnegative integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    if seq.is_empty() {
        return Err(Failure::Usage("no tokens given".into()));
    }
    Ok(seq)
}

fn joined(seq: &[u64]) -> String {
    seq.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn oracle_budget(len: usize, mirror: bool) -> Result<SearchBudget, Failure> {
    if len > ORACLE_SOFT_LIMIT {
        return Err(Failure::Capability(format!("the oracle handles at most {ORACLE_SOFT_LIMIT} tokens, got {len}")));
    }
    let budget = SearchBudget::default_for(len);
    Ok(if mirror { budget.with(OperatorKind::Mirror) } else { budget })
}

fn cmd_complexity(cli: &Cli, model: &CostModel, tokens: &[String], oracle: bool, mirror: bool) -> CliResult {
    let seq = parse_tokens(tokens)?;
    let budget = if oracle { Some(oracle_budget(seq.len(), mirror)?) } else { None };
    let program = analyze(&seq, model, mirror)?;
    let checked = match budget {
        Some(b) => Some(oracle_min_cost(&seq, model, &b)?.0.value()),
        None => None,
    };
    match cli.format {
        Format::Json => {
            let mut v = json!({ "sequence": seq, "cost": program.total_cost });
            if let Some(o) = checked {
                v["oracle"] = json!(o);
                v["agree"] = json!((o - program.total_cost).abs() <= 1e-9);
            }
            if cli.trace {
                v["trace"] = json!(program.trace());
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Csv => {
            let mut out = String::from("sequence,cost");
            if checked.is_some() {
                out.push_str(",oracle");
            }
            let _ = write!(out, "\n{},{:.6}", joined(&seq), program.total_cost);
            if let Some(o) = checked {
                let _ = write!(out, ",{o:.6}");
            }
            println!("{out}");
        }
        Format::Plain | Format::Trace => {
            if cli.trace {
                print!("{}", program.trace());
            }
            match checked {
                Some(o) => {
                    println!("analyzer: {:.6}", program.total_cost);
                    println!("oracle:   {o:.6}");
                    println!("agree:    {}", if (o - program.total_cost).abs() <= 1e-9 { "yes" } else { "no" });
                }
                None => println!("cost: {:.6}", program.total_cost),
            }
        }
    }
    Ok(())
}

fn cmd_oracle(cli: &Cli, model: &CostModel, tokens: &[String], mirror: bool) -> CliResult {
    let seq = parse_tokens(tokens)?;
    let budget = oracle_budget(seq.len(), mirror)?;
    let (cost, program) = oracle_min_cost(&seq, model, &budget)?;
    match cli.format {
        Format::Json => {
            let mut v = json!({ "sequence": seq, "cost": cost.value() });
            if cli.trace {
                v["trace"] = json!(program.trace());
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Csv => println!("sequence,cost\n{},{:.6}", joined(&seq), cost.value()),
        Format::Plain | Format::Trace => {
            if cli.trace {
                print!("{}", program.trace());
            }
            println!("cost: {:.6}", cost.value());
        }
    }
    Ok(())
}

fn parse_template(spec: &str, seed: u64) -> Result<ExpectationTemplate, Failure> {
    let bad = || Failure::Usage(format!("invalid template {spec:?}: expected kdigit:K, fixed:BITS or pool:N"));
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "kdigit" => Ok(ExpectationTemplate::KDigitNumber(arg.parse().map_err(|_| bad())?)),
        "fixed" => {
            let bits: f64 = arg.parse().map_err(|_| bad())?;
            Ok(ExpectationTemplate::Fixed(bits))
        }
        "pool" => Ok(ExpectationTemplate::MonteCarloPool {
            sampler: PoolSampler::Lottery6of49,
            n_samples: arg.parse().map_err(|_| bad())?,
            seed,
        }),
        _ => Err(bad()),
    }
}

fn cmd_surprise(cli: &Cli, model: &CostModel, tokens: &[String], template: Option<&str>) -> CliResult {
    let seq = parse_tokens(tokens)?;
    let seed = cli.seed.unwrap_or(1);
    let report = if let [n] = seq[..] {
        let default = format!("kdigit:{}", n.to_string().len());
        surprise_number(n, parse_template(template.unwrap_or(&default), seed)?, model)?
    } else {
        surprise_sequence(&seq, parse_template(template.unwrap_or("pool:10000"), seed)?, model)?
    };
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => println!("c_exp,c_obs,u,p\n{:.6},{:.6},{:.6},{:e}", report.c_exp, report.c_obs, report.u, report.p),
        Format::Plain | Format::Trace => {
            if cli.trace {
                if let Some(w) = &report.witness {
                    print!("{w}");
                }
            }
            println!("c_exp: {:.6}", report.c_exp);
            println!("c_obs: {:.6}", report.c_obs);
            println!("u:     {:.6}", report.u);
            println!("p:     {:e}{}", report.p, if report.p_exceeds_one { "  (p > 1)" } else { "" });
        }
    }
    Ok(())
}

fn cmd_rank(cli: &Cli, model: &CostModel, file: Option<&PathBuf>) -> CliResult {
    let text = match file {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Internal(e.to_string()))?;
            s
        }
    };
    let ranked = rank_combinations(&parse_combinations(&text)?, model)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&ranked).expect("json")),
        Format::Csv => {
            println!("rank,complexity,combination");
            for (i, r) in ranked.iter().enumerate() {
                println!("{},{:.6},{}", i + 1, r.complexity, r.combination);
            }
        }
        Format::Plain | Format::Trace => {
            for (i, r) in ranked.iter().enumerate() {
                println!("{:>3} {:>10.6}  {}", i + 1, r.complexity, r.combination);
            }
        }
    }
    Ok(())
}

fn require_seed(cli: &Cli) -> Result<u64, Failure> {
    cli.seed.ok_or_else(|| Failure::Usage("--seed is required for this command".into()))
}

fn cmd_bulletin(cli: &Cli, out: Option<&PathBuf>) -> CliResult {
    let config = ExperimentConfig { seed: require_seed(cli)?, ..ExperimentConfig::default() };
    let text = render_combinations(&generate_bulletin(&config)?);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_choice_model(spec: &str) -> Result<ChoiceModel, Failure> {
    let bad = || Failure::Usage(format!("invalid model {spec:?}: expected uniform or weighted[:TAU]"));
    match spec.split_once(':') {
        None if spec == "uniform" => Ok(ChoiceModel::Uniform),
        None if spec == "weighted" => Ok(ChoiceModel::ComplexityWeighted { tau: 7.0 }),
        Some(("weighted", tau)) => Ok(ChoiceModel::ComplexityWeighted { tau: tau.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

fn cmd_experiment(
    cli: &Cli,
    model: &CostModel,
    subjects: usize,
    choice: &str,
    out_dir: &PathBuf,
    replications: u64,
) -> CliResult {
    let seed = require_seed(cli)?;
    let choice_model = parse_choice_model(choice)?;
    let config = ExperimentConfig { seed, n_subjects: subjects, choice_model, ..ExperimentConfig::default() };
    let result = simulate_subjects(&config, model)?;
    let (n_total, n_choices) = (config.bulletin_size(), config.n_choices_per_subject);
    let exact = avoidance_probability(n_total, n_choices, 2, subjects)?;
    let mc = estimate_avoidance(n_total, n_choices, 2, subjects, replications, seed)?;
    let avoiders = result.avoided_all_simplest.iter().filter(|&&a| a).count();
    let (model_name, tau) = match choice_model {
        ChoiceModel::Uniform => ("uniform", None),
        ChoiceModel::ComplexityWeighted { tau } => ("weighted", Some(tau)),
    };
    let histogram: serde_json::Map<String, serde_json::Value> =
        result.histogram.iter().map(|(b, c)| (b.to_string(), json!(c))).collect();
    let summary = json!({
        "seed": seed,
        "subjects": subjects,
        "choices_per_subject": n_choices,
        "bulletin_size": n_total,
        "model": model_name,
        "tau": tau,
        "histogram": histogram,
        "subjects_avoiding_simplest": avoiders,
        "all_avoided_simplest": avoiders == subjects,
        "uniform_fallbacks": result.uniform_fallbacks,
        "exact_avoidance_probability": exact,
        "monte_carlo_avoidance": mc,
    });
    let summary_text = serde_json::to_string_pretty(&summary).expect("json");
    fs::create_dir_all(out_dir).map_err(|e| Failure::Internal(format!("{}: {e}", out_dir.display())))?;
    let write = |name: &str, body: &str| {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
    };
    write("histogram.csv", &result.histogram_csv())?;
    write("summary.json", &format!("{summary_text}\n"))?;
    match cli.format {
        Format::Json => println!("{summary_text}"),
        Format::Csv => print!("{}", result.histogram_csv()),
        Format::Plain | Format::Trace => {
            println!("subjects: {subjects} ({model_name}), seed {seed}");
            println!("subjects avoiding the two simplest: {avoiders}/{subjects}");
            println!("exact avoidance probability (uniform): {exact:.3e}");
            println!(
                "monte-carlo estimate ({} replications): {:.3e} +- {:.1e}",
                mc.replications, mc.estimate, mc.std_error
            );
            println!("histogram (bits: choices):");
            for (bin, count) in &result.histogram {
                println!("{bin:>4}: {count}");
            }
        }
    }
    Ok(())
}

fn cmd_table1(cli: &Cli, model: &CostModel) -> CliResult {
    // exit status reflects rank order only; separation is reported alongside
    let check = check_table1(model, 1.0, f64::NEG_INFINITY)?;
    let separated = check_table1(model, 1.0, 2.0)?.passed();
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json!({
            "rows": check.rows.iter().map(|(r, c)| json!({
                "combination": r.combination.to_string(),
                "reported": r.reported,
                "complexity": c,
            })).collect::<Vec<_>>(),
            "passed": check.passed(),
            "simplest_two_separated": separated,
            "failures": check.failures,
        })).expect("json")),
        Format::Csv => {
            println!("combination,reported,complexity");
            for (r, c) in &check.rows {
                println!("{},{},{:.6}", r.combination, r.reported, c);
            }
        }
        Format::Plain | Format::Trace => {
            println!("{:<22} {:>8} {:>10}", "combination", "reported", "ours");
            for (r, c) in &check.rows {
                println!("{:<22} {:>8} {:>10.3}", r.combination.to_string(), r.reported, c);
            }
            for f in &check.failures {
                println!("violation: {f}");
            }
            println!("two simplest >= 2 bits below the rest: {}", if separated { "yes" } else { "no" });
            println!("{}", if check.passed() { "PASS" } else { "FAIL" });
        }
    }
    if check.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
