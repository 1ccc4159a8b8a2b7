//! Command-line front end for exact matroid base polytope volumes.
//!
//! JSON in, JSON out: matroid documents follow the schema of
//! `matroid_volume::document`, results are printed as JSON objects with
//! exact integer entries (floats appear only under `--approx`).  Output is
//! byte-for-byte deterministic for a fixed invocation.
//!
//! Exit codes: 0 success, 1 invalid input, 2 precondition violation,
//! 3 oracle budget exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use matroid_volume::chains::build_chain_poset;
use matroid_volume::descent::{self, BinarySequence};
use matroid_volume::matroid::{elements_from_mask, mask_from_elements, Matroid};
use matroid_volume::oracle::{self, DEFAULT_ORACLE_BUDGET};
use matroid_volume::volume::{self, ExactVolume};
use matroid_volume::{ChainError, DocumentError, MatroidDocument, OracleError, SequenceError, VolumeError};

mod selftest;

/// Environment variable overriding the default oracle ground-size cap.
pub const ORACLE_BUDGET_ENV: &str = "VOLUME_ORACLE_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "matroid-volume",
    version,
    about = "Exact normalized volumes of matroid base polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact volume via the cyclic-flat chain expansion.
    Volume {
        #[command(flatten)]
        input: InputArgs,
        /// Emit the full chain ledger (chain, sequence, Möbius weight,
        /// ideal count per row).
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        format: FormatArgs,
        /// Parallelism hint; results are identical for any value.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exact volume via lattice-point counting (independent oracle).
    OracleVolume {
        #[command(flatten)]
        input: InputArgs,
        /// Cap on the ground size (default 10; env VOLUME_ORACLE_BUDGET
        /// overrides the default, this flag overrides both).
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        format: FormatArgs,
        /// Parallelism hint; results are identical for any value.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the cyclic flats with their ranks.
    CyclicFlats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// The poset of anchored cyclic-flat chains with Möbius weights.
    Chains {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Build the Schubert matroid of a sequence and report its volume.
    Schubert {
        /// Binary sequence such as 11010 (starts with 1, ends with 0).
        #[arg(long)]
        bits: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Closed-form sparse paving volume, optionally cross-checked against
    /// a constructed matroid.
    SparsePaving {
        /// Ground set is {0..n}.
        #[arg(long)]
        n: usize,
        /// Rank is d+1.
        #[arg(long)]
        d: usize,
        /// Number of circuit-hyperplanes (formula only, unless --random).
        #[arg(long)]
        alpha: Option<usize>,
        /// Explicit circuit-hyperplanes as a JSON list of lists, e.g.
        /// [[0,1,2],[0,3,4]]; builds the matroid and cross-checks.
        #[arg(long, conflicts_with_all = ["alpha", "random"])]
        hyperplanes: Option<String>,
        /// Pick a random admissible circuit-hyperplane family.
        #[arg(long, requires = "seed")]
        random: bool,
        /// RNG seed for --random (required with it).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Relax a circuit-hyperplane and compare predicted and recomputed
    /// volumes.
    Relax {
        #[command(flatten)]
        input: InputArgs,
        /// Circuit-hyperplane as comma-separated elements, e.g. 0,1,3.
        #[arg(long)]
        hyperplane: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Descent statistics of a binary sequence.
    Delta {
        /// Binary sequence such as 11010.
        #[arg(long)]
        bits: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Structural facts about a matroid.
    Info {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Run the built-in invariant suites and report pass/fail.
    Selftest {
        /// Largest n exercised by the descent-statistics suites.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Path to a matroid JSON document; '-' reads standard input.
    #[arg(value_name = "INPUT", required_unless_present = "json", conflicts_with = "json")]
    input: Option<String>,
    /// Inline matroid JSON document.
    #[arg(long, value_name = "JSON")]
    json: Option<String>,
}

#[derive(Args, Debug)]
struct FormatArgs {
    /// Aligned human-readable output instead of JSON.
    #[arg(long)]
    human: bool,
    /// Include f64 approximations alongside exact values.
    #[arg(long)]
    approx: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Exit 1: the input could not be parsed or is not a matroid.
    Invalid(String),
    /// Exit 2: the input is valid but the operation's precondition fails.
    Precondition(String),
    /// Exit 3: the oracle budget was exceeded.
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Precondition(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SequenceError> for CliError {
    fn from(e: SequenceError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<VolumeError> for CliError {
    fn from(e: VolumeError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Budget(e.to_string())
    }
}

/// Parse `args` (including the program name) and execute, writing results
/// to `out` and diagnostics to `err`.  Returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match cli.command {
        Command::Volume { input, trace, format, threads } => {
            cmd_volume(&input, trace, &format, threads)?
        }
        Command::OracleVolume { input, budget, format, threads } => {
            cmd_oracle_volume(&input, budget, &format, threads)?
        }
        Command::CyclicFlats { input, format } => cmd_cyclic_flats(&input, &format)?,
        Command::Chains { input, format } => cmd_chains(&input, &format)?,
        Command::Schubert { bits, format } => cmd_schubert(&bits, &format)?,
        Command::SparsePaving { n, d, alpha, hyperplanes, random, seed, format } => {
            cmd_sparse_paving(n, d, alpha, hyperplanes.as_deref(), random, seed, &format)?
        }
        Command::Relax { input, hyperplane, format } => cmd_relax(&input, &hyperplane, &format)?,
        Command::Delta { bits, format } => cmd_delta(&bits, &format)?,
        Command::Info { input, format } => cmd_info(&input, &format)?,
        Command::Selftest { max_n } => {
            let ok = selftest::run_suites(max_n, out);
            return if ok {
                Ok(())
            } else {
                Err(CliError::Invalid("selftest failed".into()))
            };
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Invalid(e.to_string()))
}

fn load_matroid(input: &InputArgs) -> Result<Matroid, CliError> {
    let text = match (&input.json, &input.input) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) if path == "-" => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Invalid(format!("cannot read stdin: {e}")))?;
            buf
        }
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {path}: {e}")))?,
        (None, None) => unreachable!("clap enforces one input source"),
    };
    let doc = MatroidDocument::from_json(&text)?;
    Ok(doc.build()?)
}

// -- JSON helpers -----------------------------------------------------------

fn int_value(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal is valid JSON")
}

fn uint_value(x: &BigUint) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal is valid JSON")
}

fn mask_value(mask: u32) -> Value {
    json!(elements_from_mask(mask))
}

fn render(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable output");
    s.push('\n');
    s
}

/// Insert numerator/denominator (and friends) for a volume.
fn volume_fields(map: &mut Map<String, Value>, v: &ExactVolume, normalized_n: Option<usize>, approx: bool) {
    map.insert("numerator".into(), int_value(v.numerator()));
    map.insert("denominator".into(), int_value(v.denominator()));
    if let Some(n) = normalized_n {
        if let Some(scaled) = v.scaled_by_factorial(n) {
            map.insert("normalized_numerator".into(), int_value(&scaled));
        }
    }
    if approx {
        map.insert("approx".into(), json!(v.to_f64()));
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Invalid(format!("cannot build thread pool: {e}"))),
    }
}

// -- commands ----------------------------------------------------------------

fn cmd_volume(input: &InputArgs, trace: bool, format: &FormatArgs, threads: Option<usize>) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let connected = m.is_connected();
    let vol = with_pool(threads, || volume::volume(&m))??;
    let normalized_n = connected.then(|| m.ground_size() - 1);

    let trace_rows = if trace {
        Some(volume::volume_connected_trace(&m)?.1)
    } else {
        None
    };

    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "ground size      {}", m.ground_size());
        let _ = writeln!(s, "rank             {}", m.rank());
        let _ = writeln!(s, "connected        {}", if connected { "yes" } else { "no" });
        let _ = writeln!(s, "volume           {vol}");
        if let Some(n) = normalized_n {
            if let Some(scaled) = vol.scaled_by_factorial(n) {
                let _ = writeln!(s, "{}! x volume      {scaled}", n);
            }
        }
        if format.approx {
            let _ = writeln!(s, "approx           {}", vol.to_f64());
        }
        if let Some(rows) = &trace_rows {
            let _ = writeln!(s, "{:<24} {:<12} {:>8} {:>12}", "chain", "sequence", "mobius", "delta_leq");
            for r in rows {
                let chain = if r.chain.is_empty() {
                    "(empty)".to_string()
                } else {
                    r.chain
                        .flat_sets()
                        .iter()
                        .map(|f| format!("{f:?}"))
                        .collect::<Vec<_>>()
                        .join(" < ")
                };
                let _ = writeln!(s, "{:<24} {:<12} {:>8} {:>12}", chain, r.sequence.to_string(), r.mobius, r.delta_leq);
            }
        }
        return Ok(s);
    }

    let mut map = Map::new();
    map.insert("ground_size".into(), json!(m.ground_size()));
    map.insert("rank".into(), json!(m.rank()));
    map.insert("connected".into(), json!(connected));
    volume_fields(&mut map, &vol, normalized_n, format.approx);
    if let Some(rows) = trace_rows {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "chain": r.chain.flat_sets(),
                    "sequence": r.sequence.to_string(),
                    "mobius": int_value(&r.mobius),
                    "delta_leq": uint_value(&r.delta_leq),
                })
            })
            .collect();
        map.insert("trace".into(), Value::Array(rows));
    }
    Ok(render(Value::Object(map)))
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(ORACLE_BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{ORACLE_BUDGET_ENV} must be an integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_ORACLE_BUDGET),
    }
}

fn cmd_oracle_volume(
    input: &InputArgs,
    budget: Option<usize>,
    format: &FormatArgs,
    threads: Option<usize>,
) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let budget = resolve_budget(budget)?;
    let connected = m.is_connected();
    let result = with_pool(threads, || oracle::oracle_volume(&m, budget))??;
    let normalized_n = connected.then(|| m.ground_size() - 1);

    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "ground size      {}", m.ground_size());
        let _ = writeln!(s, "rank             {}", m.rank());
        let _ = writeln!(s, "connected        {}", if connected { "yes" } else { "no" });
        let _ = writeln!(s, "dimension        {}", result.dimension);
        let _ = writeln!(s, "ehrhart counts   {:?}", result.counts);
        let _ = writeln!(s, "lattice volume   {}", result.lattice_volume);
        let _ = writeln!(s, "volume           {}", result.volume);
        if format.approx {
            let _ = writeln!(s, "approx           {}", result.volume.to_f64());
        }
        return Ok(s);
    }

    let mut map = Map::new();
    map.insert("ground_size".into(), json!(m.ground_size()));
    map.insert("rank".into(), json!(m.rank()));
    map.insert("connected".into(), json!(connected));
    map.insert("dimension".into(), json!(result.dimension));
    map.insert("ehrhart_counts".into(), json!(result.counts));
    map.insert("lattice_volume".into(), int_value(&result.lattice_volume));
    volume_fields(&mut map, &result.volume, normalized_n, format.approx);
    Ok(render(Value::Object(map)))
}

fn cmd_cyclic_flats(input: &InputArgs, format: &FormatArgs) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let flats = m.cyclic_flats();
    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "{:<6} {:<6} elements", "rank", "size");
        for f in &flats {
            let _ = writeln!(s, "{:<6} {:<6} {:?}", f.rank, f.elements.count_ones(), f.element_set());
        }
        return Ok(s);
    }
    let rows: Vec<Value> = flats
        .iter()
        .map(|f| json!({"elements": f.element_set(), "rank": f.rank}))
        .collect();
    Ok(render(json!({
        "ground_size": m.ground_size(),
        "rank": m.rank(),
        "cyclic_flats": rows,
    })))
}

fn cmd_chains(input: &InputArgs, format: &FormatArgs) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let poset = build_chain_poset(&m)?;
    let sequences: Vec<BinarySequence> = poset
        .entries()
        .iter()
        .map(|e| matroid_volume::chains::chain_to_sequence(&m, &e.chain))
        .collect::<Result<_, _>>()?;
    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "{:<24} {:<12} {:>8}", "chain", "sequence", "mobius");
        for (e, seq) in poset.entries().iter().zip(&sequences) {
            let chain = if e.chain.is_empty() {
                "(empty)".to_string()
            } else {
                e.chain
                    .flat_sets()
                    .iter()
                    .map(|f| format!("{f:?}"))
                    .collect::<Vec<_>>()
                    .join(" < ")
            };
            let _ = writeln!(s, "{:<24} {:<12} {:>8}", chain, seq.to_string(), e.mobius);
        }
        let _ = writeln!(s, "mobius sum: {}", poset.mobius_sum());
        return Ok(s);
    }
    let rows: Vec<Value> = poset
        .entries()
        .iter()
        .zip(&sequences)
        .map(|(e, seq)| {
            json!({
                "chain": e.chain.flat_sets(),
                "sequence": seq.to_string(),
                "mobius": int_value(&e.mobius),
            })
        })
        .collect();
    Ok(render(json!({
        "ground_size": m.ground_size(),
        "rank": m.rank(),
        "chains": rows,
        "mobius_sum": int_value(&poset.mobius_sum()),
    })))
}

fn cmd_schubert(bits: &str, format: &FormatArgs) -> Result<String, CliError> {
    let b: BinarySequence = bits.parse()?;
    let m = Matroid::schubert(&b).map_err(|e| CliError::Invalid(e.to_string()))?;
    let vol = volume::schubert_volume(&b)?;
    let ideal_count = descent::delta_leq(&b);
    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "bits             {b}");
        let _ = writeln!(s, "ground size      {}", m.ground_size());
        let _ = writeln!(s, "rank             {}", m.rank());
        let _ = writeln!(s, "bases            {:?}", m.basis_sets());
        let _ = writeln!(s, "delta_leq        {ideal_count}");
        let _ = writeln!(s, "volume           {vol}");
        if format.approx {
            let _ = writeln!(s, "approx           {}", vol.to_f64());
        }
        return Ok(s);
    }
    let mut map = Map::new();
    map.insert("bits".into(), json!(b.to_string()));
    map.insert("ground_size".into(), json!(m.ground_size()));
    map.insert("rank".into(), json!(m.rank()));
    map.insert("bases".into(), json!(m.basis_sets()));
    map.insert("delta_leq".into(), uint_value(&ideal_count));
    volume_fields(&mut map, &vol, Some(b.n()), format.approx);
    Ok(render(Value::Object(map)))
}

fn parse_hyperplanes(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Invalid(format!("--hyperplanes must be a JSON list of lists: {e}")))?;
    let arr = value
        .as_array()
        .ok_or_else(|| CliError::Invalid("--hyperplanes must be a JSON list of lists".into()))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::Invalid("--hyperplanes must be a JSON list of lists".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| CliError::Invalid("hyperplane elements must be non-negative integers".into()))
                })
                .collect()
        })
        .collect()
}

fn random_family(n: usize, d: usize, target: Option<usize>, seed: u64) -> Result<Vec<Vec<usize>>, CliError> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut pick = Vec::new();
    fn subsets(from: usize, n: usize, left: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(pick.clone());
            return;
        }
        for e in from..=(n + 1 - left) {
            pick.push(e);
            subsets(e + 1, n, left - 1, pick, out);
            pick.pop();
        }
    }
    subsets(0, n, d + 1, &mut pick, &mut candidates);
    candidates.shuffle(&mut rng);
    let mut family: Vec<Vec<usize>> = Vec::new();
    for c in candidates {
        if family.len() == target.unwrap_or(usize::MAX) {
            break;
        }
        let compatible = family.iter().all(|g| {
            d >= 1 && g.iter().filter(|e| c.contains(e)).count() <= d - 1
        });
        if compatible {
            family.push(c);
        }
    }
    if let Some(t) = target {
        if family.len() < t {
            return Err(CliError::Precondition(format!(
                "could not assemble {t} pairwise-compatible circuit-hyperplanes for n={n}, d={d}"
            )));
        }
    }
    for f in &mut family {
        f.sort_unstable();
    }
    family.sort();
    Ok(family)
}

fn cmd_sparse_paving(
    n: usize,
    d: usize,
    alpha: Option<usize>,
    hyperplanes: Option<&str>,
    random: bool,
    seed: Option<u64>,
    format: &FormatArgs,
) -> Result<String, CliError> {
    if n == 0 || d >= n {
        return Err(CliError::Invalid(format!("need 0 <= d < n, got n={n}, d={d}")));
    }
    let family: Option<Vec<Vec<usize>>> = if let Some(text) = hyperplanes {
        Some(parse_hyperplanes(text)?)
    } else if random {
        let seed = seed.expect("clap requires --seed with --random");
        Some(random_family(n, d, alpha, seed)?)
    } else {
        None
    };

    let alpha = match (&family, alpha) {
        (Some(f), _) => f.len(),
        (None, Some(a)) => a,
        (None, None) => {
            return Err(CliError::Invalid(
                "need one of --alpha, --hyperplanes, or --random".into(),
            ))
        }
    };
    let closed_form = volume::sparse_paving_volume(n, d, alpha)?;

    // Cross-check against the constructed matroid when we have one.
    let cross = match &family {
        None => None,
        Some(f) => {
            let m = Matroid::sparse_paving(n, d, f).map_err(|e| CliError::Invalid(e.to_string()))?;
            if !m.is_connected() {
                return Err(CliError::Precondition(
                    "the constructed sparse paving matroid is disconnected; the closed form does not apply".into(),
                ));
            }
            let engine = volume::volume_connected(&m)?;
            let chs = m.circuit_hyperplanes();
            let listed: Result<Vec<u32>, _> = f.iter().map(|h| mask_from_elements(h, n + 1)).collect();
            let listed = listed.map_err(|e| CliError::Invalid(e.to_string()))?;
            let mut listed_sorted = listed;
            listed_sorted.sort_unstable();
            if chs != listed_sorted {
                return Err(CliError::Precondition(
                    "constructed matroid's circuit-hyperplanes differ from the given family".into(),
                ));
            }
            Some(engine)
        }
    };
    let matches = cross.as_ref().map(|engine| engine == &closed_form);
    if matches == Some(false) {
        return Err(CliError::Precondition(
            "closed form and chain engine disagree; preconditions violated".into(),
        ));
    }

    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "n                {n}");
        let _ = writeln!(s, "d                {d}");
        let _ = writeln!(s, "alpha            {alpha}");
        let _ = writeln!(s, "volume           {closed_form}");
        if let Some(scaled) = closed_form.scaled_by_factorial(n) {
            let _ = writeln!(s, "{n}! x volume      {scaled}");
        }
        if let Some(f) = &family {
            let _ = writeln!(s, "hyperplanes      {f:?}");
        }
        if let Some(engine) = &cross {
            let _ = writeln!(s, "engine volume    {engine} (match)");
        }
        if format.approx {
            let _ = writeln!(s, "approx           {}", closed_form.to_f64());
        }
        return Ok(s);
    }

    let mut map = Map::new();
    map.insert("n".into(), json!(n));
    map.insert("d".into(), json!(d));
    map.insert("alpha".into(), json!(alpha));
    volume_fields(&mut map, &closed_form, Some(n), format.approx);
    if let Some(f) = &family {
        map.insert("hyperplanes".into(), json!(f));
    }
    if let Some(engine) = &cross {
        let mut e = Map::new();
        volume_fields(&mut e, engine, Some(n), false);
        map.insert("engine".into(), Value::Object(e));
        map.insert("match".into(), json!(true));
    }
    Ok(render(Value::Object(map)))
}

fn cmd_relax(input: &InputArgs, hyperplane: &str, format: &FormatArgs) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let elements: Vec<usize> = hyperplane
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("--hyperplane element {s:?} is not an integer")))
        })
        .collect::<Result<_, _>>()?;
    let h = mask_from_elements(&elements, m.ground_size()).map_err(|e| CliError::Invalid(e.to_string()))?;

    let original = volume::volume(&m)?;
    let predicted = volume::relaxation_volume(&m, h)?;
    let relaxed = m.relax(h).map_err(|e| CliError::Precondition(e.to_string()))?;
    let recomputed = volume::volume(&relaxed)?;
    let n = m.ground_size() - 1;
    let matches = predicted == recomputed;
    if !matches {
        return Err(CliError::Precondition(
            "relaxation prediction and recomputed volume disagree; preconditions violated".into(),
        ));
    }

    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "hyperplane       {elements:?}");
        let _ = writeln!(s, "volume before    {original}");
        let _ = writeln!(s, "predicted after  {predicted}");
        let _ = writeln!(s, "recomputed after {recomputed} (match)");
        if format.approx {
            let _ = writeln!(s, "approx after     {}", recomputed.to_f64());
        }
        return Ok(s);
    }

    let mut map = Map::new();
    map.insert("ground_size".into(), json!(m.ground_size()));
    map.insert("rank".into(), json!(m.rank()));
    map.insert("hyperplane".into(), json!(elements));
    let mut before = Map::new();
    volume_fields(&mut before, &original, Some(n), format.approx);
    map.insert("before".into(), Value::Object(before));
    let mut pred = Map::new();
    volume_fields(&mut pred, &predicted, Some(n), format.approx);
    map.insert("predicted".into(), Value::Object(pred));
    let mut after = Map::new();
    volume_fields(&mut after, &recomputed, Some(n), format.approx);
    map.insert("recomputed".into(), Value::Object(after));
    map.insert("match".into(), json!(true));
    Ok(render(Value::Object(map)))
}

fn cmd_delta(bits: &str, format: &FormatArgs) -> Result<String, CliError> {
    let b: BinarySequence = bits.parse()?;
    let count = descent::delta(&b);
    let ideal_count = descent::delta_leq(&b);
    let ideal = descent::down_set(&b);
    let dual = b.dual();
    let partition = b.to_partition();
    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "bits             {b}");
        let _ = writeln!(s, "n, d             {}, {}", b.n(), b.d());
        let _ = writeln!(s, "delta            {count}");
        let _ = writeln!(s, "delta_leq        {ideal_count}");
        let _ = writeln!(s, "down set         {:?}", ideal.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        let _ = writeln!(s, "dual             {dual}");
        let _ = writeln!(s, "partition        {:?}", partition.parts());
        return Ok(s);
    }
    Ok(render(json!({
        "bits": b.to_string(),
        "n": b.n(),
        "d": b.d(),
        "delta": uint_value(&count),
        "delta_leq": uint_value(&ideal_count),
        "down_set_size": ideal.len(),
        "down_set": ideal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "dual": dual.to_string(),
        "partition": partition.parts(),
    })))
}

fn cmd_info(input: &InputArgs, format: &FormatArgs) -> Result<String, CliError> {
    let m = load_matroid(input)?;
    let components: Vec<Value> = m.connected_components().iter().map(|&c| mask_value(c)).collect();
    let cyclic = m.cyclic_flats();
    let chs = m.circuit_hyperplanes();
    if format.human {
        let mut s = String::new();
        let _ = writeln!(s, "ground size          {}", m.ground_size());
        let _ = writeln!(s, "rank                 {}", m.rank());
        let _ = writeln!(s, "bases                {}", m.bases().len());
        let _ = writeln!(s, "loops                {:?}", elements_from_mask(m.loops()));
        let _ = writeln!(s, "coloops              {:?}", elements_from_mask(m.coloops()));
        let _ = writeln!(s, "connected            {}", m.is_connected());
        let _ = writeln!(s, "components           {}", components.len());
        let _ = writeln!(s, "cyclic flats         {}", cyclic.len());
        let _ = writeln!(s, "circuit-hyperplanes  {}", chs.len());
        let _ = writeln!(s, "sparse paving        {}", m.is_sparse_paving());
        return Ok(s);
    }
    Ok(render(json!({
        "ground_size": m.ground_size(),
        "rank": m.rank(),
        "bases": m.bases().len(),
        "loops": elements_from_mask(m.loops()),
        "coloops": elements_from_mask(m.coloops()),
        "connected": m.is_connected(),
        "components": components,
        "cyclic_flats": cyclic.len(),
        "circuit_hyperplanes": chs.len(),
        "sparse_paving": m.is_sparse_paving(),
    })))
}

// Re-exported for integration tests.
pub use selftest::run_suites;
