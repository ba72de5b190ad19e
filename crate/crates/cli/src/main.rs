//! `voteprob`: winning probabilities under random voter attendance.
//!
//! Every successful invocation prints one JSON object on a single line.
//! Exit codes: 0 on success, 1 when a computation is refused (size limits,
//! unsupported rule/method, table budget), 2 on malformed input or usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};
use voteprob_core::exact::brute_force_win_prob;
use voteprob_core::generators::{
    gen_condorcet_from_x3c, gen_kapproval_from_matching, gen_kveto_from_edgecover,
    gen_maximin_from_x3c, GeneratedInstance,
};
use voteprob_core::io::{parse_graph, parse_profile, parse_rule, parse_set_system, write_profile};
use voteprob_core::zeroness::{
    ccauv_count_brute, ccauv_decide, ccauv_to_probabilistic, is_binary_rule,
    win_positive_with_witness, CcauvInstance,
};
use voteprob_core::{
    klm_lose_prob, mc_win_prob_additive, rules, win_prob_exact, EstimatorConfig,
    ProbabilisticProfile, Rule, WinnerSemantics, DEFAULT_BRUTE_FORCE_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "voteprob",
    version,
    about = "Election outcome probabilities under random voter attendance"
)]
struct Cli {
    /// Worker threads for parallel loops (1 = single-threaded).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winners of the full profile (probabilities are ignored).
    Winners {
        file: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long)]
        unique: bool,
    },
    /// Probability that a candidate wins.
    WinProb {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = WinMethod::Exact)]
        method: WinMethod,
        /// Largest voter count brute force will enumerate.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
        limit: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Multiplicative estimate of the probability that a candidate loses.
    LoseProb {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run exactly this many trials instead of the derived count.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Whether a candidate wins with positive probability.
    WinPositive {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
        limit: usize,
    },
    /// Control by adding unregistered voters.
    Ccauv {
        #[arg(long)]
        registered: PathBuf,
        #[arg(long)]
        unregistered: PathBuf,
        #[command(flatten)]
        target: Target,
        /// Count the successful sub-lists instead of deciding.
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
        limit: usize,
    },
    /// Generate a reduction instance from a graph or set-system file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Output prefix; writes `<prefix>.registered.txt` and `<prefix>.unregistered.txt`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    rule: String,
    /// Candidate name.
    #[arg(long)]
    candidate: String,
    #[arg(long)]
    unique: bool,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WinMethod {
    Exact,
    Brute,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    MatchingKapproval,
    EdgecoverKveto,
    X3cCondorcet,
    X3cMaximin,
}

/// A failed invocation: message plus exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn refused(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<voteprob_core::Error> for Failure {
    fn from(e: voteprob_core::Error) -> Self {
        if e.is_validation() {
            Failure::invalid(e.to_string())
        } else {
            Failure::refused(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Default)]
struct Record(Map<String, Value>);

impl Record {
    fn new(command: &str) -> Self {
        let mut r = Record::default();
        r.set("command", command);
        r
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    /// Writes `p` with 17 significant digits.
    fn probability(&mut self, p: f64) -> &mut Self {
        let text = format!("{p:.16e}");
        let number: Number = text.parse().expect("formatted float is valid JSON");
        self.set("probability", Value::Number(number))
    }

    fn line(&self) -> String {
        serde_json::to_string(&self.0).expect("records serialize")
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_profile(path: &Path) -> CliResult<ProbabilisticProfile> {
    parse_profile(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn semantics(unique: bool) -> WinnerSemantics {
    if unique {
        WinnerSemantics::Unique
    } else {
        WinnerSemantics::CoWinner
    }
}

/// Resolves the rule and candidate of `target` against `pp`.
fn resolve(target: &Target, pp: &ProbabilisticProfile) -> CliResult<(Rule, usize)> {
    let rule = parse_rule(&target.rule)?;
    let c = pp
        .candidates()
        .index_of(&target.candidate)
        .ok_or_else(|| Failure::invalid(format!("unknown candidate '{}'", target.candidate)))?;
    Ok((rule, c))
}

fn target_record(command: &str, rule: &Rule, name: &str, unique: bool) -> Record {
    let mut r = Record::new(command);
    r.set("rule", rule.to_string())
        .set("candidate", name)
        .set("semantics", if unique { "unique" } else { "co-winner" });
    r
}

fn winners(file: &Path, rule: &str, unique: bool) -> CliResult<Record> {
    let pp = load_profile(file)?;
    let rule = parse_rule(rule)?;
    let won = rules::winners(&rule, pp.profile(), semantics(unique))?;
    let names: Vec<Value> = won
        .iter()
        .map(|&c| Value::from(pp.candidates().name(c)))
        .collect();
    let mut r = Record::new("winners");
    r.set("rule", rule.to_string())
        .set("semantics", if unique { "unique" } else { "co-winner" })
        .set("winners", names);
    Ok(r)
}

fn win_prob(
    file: &Path,
    target: &Target,
    method: WinMethod,
    limit: usize,
    sampling: &Sampling,
) -> CliResult<Record> {
    let pp = load_profile(file)?;
    let (rule, c) = resolve(target, &pp)?;
    let sem = semantics(target.unique);
    let mut r = target_record("win-prob", &rule, &target.candidate, target.unique);
    match method {
        WinMethod::Exact => {
            let p = win_prob_exact(&pp, &rule, c, sem).ok_or_else(|| {
                Failure::refused("exact method supports plurality and veto only")
            })??;
            r.set("method", "exact").probability(p);
        }
        WinMethod::Brute => {
            let p = brute_force_win_prob(&pp, &rule, c, sem, limit)?;
            r.set("method", "brute").probability(p);
        }
        WinMethod::Mc => {
            let mut config = EstimatorConfig::new(sampling.epsilon, sampling.delta, sampling.seed)?;
            if let Some(t) = sampling.trials {
                config = config.with_trials(t)?;
            }
            let est = mc_win_prob_additive(&pp, &rule, c, sem, &config)?;
            r.set("method", est.method.to_string())
                .probability(est.value)
                .set("trials", est.trials)
                .set("seed", sampling.seed);
        }
    }
    Ok(r)
}

fn lose_prob(
    file: &Path,
    target: &Target,
    epsilon: f64,
    delta: f64,
    seed: u64,
    trials: Option<u64>,
) -> CliResult<Record> {
    let pp = load_profile(file)?;
    let (rule, c) = resolve(target, &pp)?;
    if rule == Rule::Maximin {
        return Err(Failure::refused("no FPRAS implemented (open problem)"));
    }
    if target.unique {
        return Err(Failure::refused(
            "the losing-probability estimator uses co-winner semantics only",
        ));
    }
    let mut config = EstimatorConfig::new(epsilon, delta, seed)?;
    if let Some(t) = trials {
        config = config.with_trials(t)?;
    }
    let est = klm_lose_prob(&pp, &rule, c, &config)?;
    let mut r = target_record("lose-prob", &rule, &target.candidate, false);
    r.set("method", est.method.to_string())
        .probability(est.value)
        .set("trials", est.trials)
        .set("seed", seed);
    Ok(r)
}

fn decision_record(r: &mut Record, possible: bool, witness: Option<Vec<usize>>) {
    r.set("decision", possible);
    if let Some(w) = witness {
        r.set("witness", w);
    }
}

fn win_positive(file: &Path, target: &Target, limit: usize) -> CliResult<Record> {
    let pp = load_profile(file)?;
    let (rule, c) = resolve(target, &pp)?;
    let binary = is_binary_rule(&rule, pp.num_candidates())?;
    let d = win_positive_with_witness(&pp, &rule, c, semantics(target.unique), limit)?;
    let mut r = target_record("win-positive", &rule, &target.candidate, target.unique);
    r.set("method", if binary { "binary" } else { "brute" });
    decision_record(&mut r, d.possible, d.witness);
    Ok(r)
}

fn ccauv(
    registered: &Path,
    unregistered: &Path,
    target: &Target,
    count: bool,
    limit: usize,
) -> CliResult<Record> {
    let m = load_profile(registered)?;
    let q = load_profile(unregistered)?;
    if m.candidates().names() != q.candidates().names() {
        return Err(Failure::invalid(
            "registered and unregistered files list different candidates",
        ));
    }
    let (rule, c) = resolve(target, &m)?;
    let instance = CcauvInstance::new(m.profile().clone(), q.profile().clone(), c)?;
    let sem = semantics(target.unique);
    let mut r = target_record("ccauv", &rule, &target.candidate, target.unique);
    if count {
        let alpha = ccauv_count_brute(&instance, &rule, sem, limit)?;
        r.set("method", "brute").set("count", alpha);
    } else {
        let binary = is_binary_rule(&rule, instance.candidates().len())?;
        let d = ccauv_decide(&instance, &rule, sem, limit)?;
        r.set("method", if binary { "binary" } else { "brute" });
        decision_record(&mut r, d.possible, d.witness);
    }
    Ok(r)
}

fn gen(kind: GenKind, input: &Path, k: usize, out: &Path) -> CliResult<Record> {
    let text = read(input)?;
    let wrap = |e: voteprob_core::Error| Failure::invalid(format!("{}: {e}", input.display()));
    let generated: GeneratedInstance = match kind {
        GenKind::MatchingKapproval => {
            gen_kapproval_from_matching(&parse_graph(&text).map_err(wrap)?, k)?
        }
        GenKind::EdgecoverKveto => gen_kveto_from_edgecover(&parse_graph(&text).map_err(wrap)?, k)?,
        GenKind::X3cCondorcet => gen_condorcet_from_x3c(&parse_set_system(&text).map_err(wrap)?)?,
        GenKind::X3cMaximin => gen_maximin_from_x3c(&parse_set_system(&text).map_err(wrap)?)?,
    };
    let inst = &generated.instance;
    let target = inst.candidates().name(inst.target()).to_string();
    let mut meta = vec![
        format!("count: {}", generated.count),
        format!("rule: {}", generated.rule),
        format!("target: {target}"),
    ];
    meta.extend(generated.notes.iter().map(|n| format!("note: {n}")));

    let combined = ccauv_to_probabilistic(inst)?;
    let nm = inst.registered().len();
    let all: Vec<usize> = (0..combined.len()).collect();
    let registered = combined.select(&all[..nm])?;
    let unregistered = combined.select(&all[nm..])?;

    let path_for = |suffix: &str| {
        let mut s = out.as_os_str().to_os_string();
        s.push(suffix);
        PathBuf::from(s)
    };
    let reg_path = path_for(".registered.txt");
    let unreg_path = path_for(".unregistered.txt");
    for (path, pp, role) in [
        (&reg_path, &registered, "registered"),
        (&unreg_path, &unregistered, "unregistered"),
    ] {
        let mut comments = meta.clone();
        comments.push(format!("voters: {role}"));
        fs::write(path, write_profile(pp, &comments))
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut r = Record::new("gen");
    r.set(
        "kind",
        kind.to_possible_value().map(|v| v.get_name().to_string()),
    )
    .set("rule", generated.rule.to_string())
    .set("candidate", target)
    .set("count_kind", generated.count.name())
    .set("registered", reg_path.display().to_string())
    .set("unregistered", unreg_path.display().to_string());
    Ok(r)
}

fn run(cli: Cli) -> CliResult<Record> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::refused(format!("cannot configure threads: {e}")))?;
    }
    match cli.command {
        Command::Winners { file, rule, unique } => winners(&file, &rule, unique),
        Command::WinProb {
            file,
            target,
            method,
            limit,
            sampling,
        } => win_prob(&file, &target, method, limit, &sampling),
        Command::LoseProb {
            file,
            target,
            epsilon,
            delta,
            seed,
            trials,
        } => lose_prob(&file, &target, epsilon, delta, seed, trials),
        Command::WinPositive {
            file,
            target,
            limit,
        } => win_positive(&file, &target, limit),
        Command::Ccauv {
            registered,
            unregistered,
            target,
            count,
            limit,
        } => ccauv(&registered, &unregistered, &target, count, limit),
        Command::Gen {
            kind,
            input,
            k,
            out,
        } => gen(kind, &input, k, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(record) => {
            println!("{}", record.line());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("voteprob: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
