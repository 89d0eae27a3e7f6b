//! `ultraseq` command-line front end. Every subcommand prints one JSON
//! document on stdout, except the raw `--format dot|newick|csv` exports.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 resource cap.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ultraseq::clustertree::{build_tree_with_progress, default_max_n};
use ultraseq::debruijn::DEFAULT_MAX_LENGTH;
use ultraseq::freqspace::gamma_max;
use ultraseq::seqcore::enumerate_necklaces_capped;
use ultraseq::twofold::{
    assemble, count_twofold_exact, phi_table_capped, twofold_table_capped, DEFAULT_MAX_P,
    EXACT_MAX_P,
};
use ultraseq::{
    count_debruijn_sequences, count_eulerian_cycles, lower, necklace_count, project, raise,
    Alphabet, CyclicSequence, DeBruijnGraph, Error, ExportFormat, FrequencyVector, Multigraph,
    TreeOptions,
};

#[derive(Parser)]
#[command(name = "ultraseq", version, about = "Ultrametric cluster structure of cyclic sequences")]
struct Cli {
    /// Worker threads for parallel stages (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count (and optionally list) necklaces of length n.
    Necklaces {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// Also list the canonical representatives.
        #[arg(long)]
        list: bool,
        /// Largest n accepted by --list.
        #[arg(long)]
        max_n: Option<u64>,
    },
    /// Level-p frequency vector of a sequence.
    Project {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
    },
    /// Apply the raising operator once.
    Raise(FreqInput),
    /// Ultrametric distance between two sequences of equal length.
    Distance {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
    },
    /// All level-(p+1) vectors realized under a level-p vector.
    Lower(FreqInput),
    /// Sequences sharing a frequency vector.
    Members {
        #[command(flatten)]
        input: FreqInput,
        /// Largest sequence length to enumerate.
        #[arg(long, default_value_t = DEFAULT_MAX_LENGTH)]
        max_n: u64,
    },
    /// Cluster tree of all necklaces of length n.
    Tree {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// Keep only level-1 clusters with at most n/2 ones (binary only).
        #[arg(long)]
        half: bool,
        /// Stop refining at this level.
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
    },
    /// Number of de Bruijn sequences of order p, closed form and BEST count.
    DebruijnCount {
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long)]
        p: u32,
        /// Largest graph (in vertices) handed to the determinant.
        #[arg(long, default_value_t = 1024)]
        max_vertices: u64,
    },
    /// Eulerian circuits of a multigraph given as `t-h` edge pairs.
    EulerCount {
        /// Comma-separated edges, e.g. `0-1,1-0,0-0`.
        #[arg(long)]
        edges: String,
    },
    /// Two-fold de Bruijn sequence count.
    Twofold {
        #[arg(long)]
        p: usize,
        /// Include the k, PermNo, Φ, Co rows.
        #[arg(long)]
        table: bool,
        /// Also report the per-configuration exact count.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_P)]
        max_p: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Φ(k): connected two-fold configurations with k uniform blocks.
    PhiTable {
        #[arg(long)]
        p: usize,
        /// Test every configuration, including the ones known to be disconnected.
        #[arg(long)]
        no_prune: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_P)]
        max_p: usize,
    },
}

#[derive(Args)]
struct FreqInput {
    /// Frequency vector as JSON (`{"p":..,"n":..,"l":..,"dense":[..]}`), or `-` for stdin.
    #[arg(long, conflicts_with = "dense", required_unless_present = "dense")]
    freq: Option<String>,
    /// Dense entries, comma separated; the level follows from the length.
    #[arg(long, value_delimiter = ',')]
    dense: Option<Vec<u64>>,
    /// Alphabet size for --dense.
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Json,
    Dot,
    Newick,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) => 2,
            Error::Domain(_) => 3,
            Error::Resource(_) => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

enum Output {
    Json(Value),
    Text(String),
}

fn alphabet(size: usize) -> Result<Alphabet, Failure> {
    Ok(Alphabet::new(size)?)
}

fn sequence(text: &str, size: usize) -> Result<CyclicSequence, Failure> {
    Ok(CyclicSequence::parse(text, alphabet(size)?)?)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

impl FreqInput {
    fn read(&self) -> Result<FrequencyVector, Failure> {
        if let Some(dense) = &self.dense {
            return Ok(FrequencyVector::from_dense_auto(alphabet(self.alphabet)?, dense)?);
        }
        let text = match self.freq.as_deref() {
            Some("-") => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
                buf
            }
            Some(text) => text.to_string(),
            None => return Err(usage("one of --freq or --dense is required")),
        };
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid frequency vector: {e}")))
    }
}

fn parse_edges(text: &str) -> Result<Multigraph, Failure> {
    let mut edges = Vec::new();
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (t, h) = pair
            .split_once('-')
            .ok_or_else(|| usage(format!("edge `{pair}` is not of the form t-h")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| usage(format!("bad vertex in `{pair}`")));
        edges.push((parse(t)?, parse(h)?));
    }
    if edges.is_empty() {
        return Err(usage("no edges given"));
    }
    let vertices = edges.iter().map(|&(t, h)| t.max(h)).max().unwrap_or(0) + 1;
    Ok(Multigraph::new(vertices, edges)?)
}

fn run(command: Command) -> Result<Output, Failure> {
    let out = match command {
        Command::Necklaces { n, alphabet: size, list, max_n } => {
            let a = alphabet(size)?;
            let mut doc = json!({ "n": n, "l": size, "count": necklace_count(n, size as u64).to_string() });
            if list {
                let bits = ultraseq::seqcore::DEFAULT_ENUMERATION_BITS;
                let cap = max_n.unwrap_or((bits / (size as f64).log2()).floor() as u64);
                if n > cap {
                    return Err(Error::Resource(format!("listing necklaces of length {n} exceeds the cap n <= {cap}")).into());
                }
                let all = enumerate_necklaces_capped(n as usize, a, f64::INFINITY)?;
                doc["necklaces"] = all.iter().map(|s| s.to_string()).collect();
            }
            Output::Json(doc)
        }
        Command::Project { seq, p, alphabet: size } => {
            Output::Json(to_json(&project(&sequence(&seq, size)?, p)?))
        }
        Command::Raise(input) => Output::Json(to_json(&raise(&input.read()?)?)),
        Command::Distance { a, b, alphabet: size } => {
            let (a, b) = (sequence(&a, size)?, sequence(&b, size)?);
            let d = ultraseq::freqspace::ultrametric_distance(&a, &b)?;
            let gamma = if a == b { None } else { Some(gamma_max(&a, &b)?) };
            Output::Json(json!({ "equal": a == b, "gamma_max": gamma, "distance": d }))
        }
        Command::Lower(input) => {
            let y = input.read()?;
            let candidates = lower(&y)?;
            Output::Json(json!({
                "p": y.level(),
                "count": candidates.len().to_string(),
                "candidates": to_json(&candidates),
            }))
        }
        Command::Members { input, max_n } => {
            let z = input.read()?;
            let members = ultraseq::debruijn::enumerate_sequences_capped(&z, max_n, usize::MAX)?;
            Output::Json(json!({
                "count": members.len().to_string(),
                "members": members.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }))
        }
        Command::Tree { n, alphabet: size, half, max_p, max_n, format } => {
            let a = alphabet(size)?;
            let options = TreeOptions { max_p, half_tree: half, max_n: Some(max_n.unwrap_or_else(|| default_max_n(a))) };
            let tree = build_tree_with_progress(n, a, &options, |done, total| {
                eprintln!("level-1 clusters done: {done}/{total}");
            })?;
            match format {
                TreeFormat::Json => Output::Json(to_json(&tree)),
                TreeFormat::Dot => Output::Text(tree.export(ExportFormat::Dot)),
                TreeFormat::Newick => Output::Text(tree.export(ExportFormat::Newick)),
            }
        }
        Command::DebruijnCount { alphabet: size, p, max_vertices } => {
            if p == 0 {
                return Err(Error::Domain("order p must be positive".into()).into());
            }
            let a = alphabet(size)?;
            let graph = DeBruijnGraph::new(a, p as usize - 1)?;
            if graph.vertex_count() > max_vertices {
                return Err(Error::Resource(format!(
                    "G_{size}({}) has {} vertices, cap {max_vertices}",
                    p - 1,
                    graph.vertex_count()
                ))
                .into());
            }
            let best = count_eulerian_cycles(&graph.to_multigraph()?)?;
            let closed = count_debruijn_sequences(size as u64, p);
            Output::Json(json!({
                "l": size,
                "p": p,
                "closed_form": closed.to_string(),
                "best": best.to_string(),
            }))
        }
        Command::EulerCount { edges } => {
            let g = parse_edges(&edges)?;
            Output::Json(json!({ "count": count_eulerian_cycles(&g)?.to_string() }))
        }
        Command::Twofold { p, table, exact, max_p, format } => {
            let rows = twofold_table_capped(p, max_p)?;
            let total = assemble(&rows);
            let exact_count = if exact {
                if p > EXACT_MAX_P.min(max_p) {
                    return Err(Error::Resource(format!(
                        "exact count supports p <= {}",
                        EXACT_MAX_P.min(max_p)
                    ))
                    .into());
                }
                Some(count_twofold_exact(p)?.to_string())
            } else {
                None
            };
            match format {
                TableFormat::Csv => {
                    let mut text = String::from("k,perm_no,phi,cofactor\n");
                    for r in &rows {
                        text.push_str(&format!("{},{},{},{}\n", r.k, r.perm_no, r.phi, r.cofactor));
                    }
                    Output::Text(text)
                }
                TableFormat::Json => {
                    let mut doc = json!({ "p": p, "count": total.to_string() });
                    if table {
                        doc["rows"] = to_json(&rows);
                    }
                    if let Some(e) = exact_count {
                        doc["exact"] = Value::String(e);
                    }
                    Output::Json(doc)
                }
            }
        }
        Command::PhiTable { p, no_prune, max_p } => {
            let phi = phi_table_capped(p, !no_prune, max_p)?;
            Output::Json(json!({
                "p": p,
                "phi": phi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }))
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(cli.command) {
        Ok(Output::Json(doc)) => {
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Ok(Output::Text(text)) => {
            println!("{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
