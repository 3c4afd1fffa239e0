use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grassmann_lab::embeddings::{build_apartment, build_dual, build_simplex_faces, build_sum, classify, verify_isometric};
use grassmann_lab::grassmannian::Grassmannian;
use grassmann_lab::independence::{canonical_simplex, search_m_independent, Ambient, PointSet, SearchOutcome};
use grassmann_lab::johnson::JohnsonGraph;
use grassmann_lab::oracle::{enumerate_embeddings, estimate_nodes, validate_result, SearchConfig};
use grassmann_lab::rigidity::{is_rigid, SolverOptions};
use grassmann_lab::{dot, io as gio, Caps, Error, Field};

#[derive(Parser)]
#[command(name = "grassmann-lab", version, about = "Isometric Johnson-graph embeddings in Grassmann graphs over finite fields")]
struct Cli {
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Cap overrides, e.g. `q=32,n=10,vertices=200000`.
    #[arg(long, global = true, env = "GRASSMANN_LAB_CAPS")]
    caps: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a verified embedding.
    Build {
        kind: BuildKind,
        #[command(flatten)]
        params: Params,
        /// Generating point set (JSON); generated when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Search nodes allowed when a point set has to be found.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Classify an embedding.
    Classify {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check which automorphisms of the induced graph extend.
    Rigidity {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include solver attempts behind negative verdicts.
        #[arg(long)]
        certificates: bool,
    },
    /// Enumerate every isometric image of J(l, m) in the Grassmann graph.
    Oracle {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        symmetry: bool,
        /// One image per line.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print a node estimate and stop.
        #[arg(long)]
        estimate: bool,
    },
    /// Export graphs as DOT or index tables as JSON.
    Export {
        what: ExportKind,
        #[command(flatten)]
        params: Params,
        /// Embedding JSON, for `embedding`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Params {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Sum,
    Dual,
    Apartment,
    SimplexFaces,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Grassmannian,
    Johnson,
    Embedding,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
}

enum Failure {
    Validation(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

impl Params {
    fn field(&self, caps: &Caps) -> Result<Field, Failure> {
        Ok(Field::with_caps(self.p, self.e, caps)?)
    }

    fn need(v: Option<usize>, name: &str) -> Result<usize, Failure> {
        v.ok_or_else(|| Failure::Validation(format!("--{name} is required")))
    }

    fn n(&self, caps: &Caps) -> Result<usize, Failure> {
        let n = Params::need(self.n, "n")?;
        if n == 0 {
            return Err(Failure::Validation("--n must be positive".into()));
        }
        caps.check_dim(n)?;
        Ok(n)
    }

    fn k(&self, n: usize) -> Result<usize, Failure> {
        let k = Params::need(self.k, "k")?;
        if k == 0 || k >= n {
            return Err(Failure::Validation(format!("--k must satisfy 0 < k < n = {n}")));
        }
        Ok(k)
    }

    fn johnson(&self, caps: &Caps) -> Result<JohnsonGraph, Failure> {
        let l = Params::need(self.l, "l")?;
        let m = Params::need(self.m, "m")?;
        if !(0 < m && m < l) || l > 64 {
            return Err(Failure::Validation(format!("need 0 < m < l ≤ 64, got l = {l}, m = {m}")));
        }
        if JohnsonGraph::vertex_count(l, m) > caps.max_vertices as u128 {
            return Err(Error::CapExceeded(format!("J({l}, {m}) exceeds the vertex cap {}", caps.max_vertices)).into());
        }
        Ok(JohnsonGraph::new(l, m)?)
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text)?,
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn found(outcome: SearchOutcome, what: &str) -> Result<PointSet, Failure> {
    match outcome {
        SearchOutcome::Found(ps) => Ok(ps),
        SearchOutcome::Infeasible { nodes } => Err(Failure::Validation(format!(
            "infeasible: no {what} exists (search exhausted after {nodes} nodes)"
        ))),
        SearchOutcome::Unknown { nodes } => Err(Failure::Budget(format!(
            "unknown: search for {what} stopped after {nodes} nodes"
        ))),
    }
}

/// `l` points of `ambient`, every `min(2m, l)` of them independent.
fn generate(ambient: &Ambient, m: usize, l: usize, budget: u64) -> Result<PointSet, Failure> {
    let rank = ambient.rank();
    if l <= rank {
        let frame = ambient.frame()?;
        return Ok(PointSet::new(ambient.clone(), frame[..l].to_vec())?);
    }
    if l == rank + 1 {
        return Ok(canonical_simplex(ambient, rank)?);
    }
    let what = format!("{l} points with every {} independent", (2 * m).min(l));
    found(search_m_independent(ambient, 2 * m, l, budget)?, &what)
}

fn cmd_build(
    kind: BuildKind,
    params: Params,
    input: Option<&Path>,
    output: Option<&Path>,
    budget: u64,
    caps: &Caps,
) -> Outcome {
    let inst = match kind {
        BuildKind::Apartment => {
            let field = params.field(caps)?;
            let n = params.n(caps)?;
            let k = params.k(n)?;
            build_apartment(&Ambient::primal(&field, n).frame()?, k)?
        }
        BuildKind::SimplexFaces => {
            let field = params.field(caps)?;
            let n = params.n(caps)?;
            let k = params.k(n)?;
            build_simplex_faces(&field, n, k)?
        }
        BuildKind::Sum | BuildKind::Dual => {
            let dual = matches!(kind, BuildKind::Dual);
            let (points, k) = match input {
                Some(path) => {
                    let ps = gio::decode_point_set(&read_input(path)?, caps)?;
                    let k = params.k(ps.ambient().n())?;
                    (ps, k)
                }
                None => {
                    let field = params.field(caps)?;
                    let n = params.n(caps)?;
                    let k = params.k(n)?;
                    let ambient = if dual { Ambient::dual(&field, n) } else { Ambient::primal(&field, n) };
                    let m = if dual { n - k } else { k };
                    let l = params.l.unwrap_or(n + 1);
                    (generate(&ambient, m, l, budget)?, k)
                }
            };
            if dual {
                build_dual(&points, k)?
            } else {
                build_sum(&points, k)?
            }
        }
    };
    verify_isometric(&inst).map_err(|c| Failure::Internal(format!("built embedding is not isometric: {c}")))?;
    write_output(output, &pretty(&gio::encode_embedding(&inst)))?;
    Ok(true)
}

fn cmd_classify(input: &Path, output: Option<&Path>, caps: &Caps) -> Outcome {
    let inst = gio::decode_embedding(&read_input(input)?, caps)?;
    let c = classify(&inst)?;
    write_output(output, &pretty(&gio::encode_classification(&c)))?;
    Ok(true)
}

fn cmd_rigidity(input: &Path, output: Option<&Path>, seed: u64, certificates: bool, caps: &Caps) -> Outcome {
    let inst = gio::decode_embedding(&read_input(input)?, caps)?;
    let opts = SolverOptions {
        seed,
        ..SolverOptions::default()
    };
    let report = is_rigid(&inst, &opts)?;
    write_output(output, &pretty(&gio::encode_rigidity_report(&report, certificates)))?;
    Ok(report.complete)
}

fn cmd_oracle(
    params: Params,
    budget: u64,
    symmetry: bool,
    jsonl: Option<&Path>,
    output: Option<&Path>,
    estimate: bool,
    caps: &Caps,
) -> Outcome {
    let field = params.field(caps)?;
    let n = params.n(caps)?;
    let k = params.k(n)?;
    let johnson = params.johnson(caps)?;
    let mut cfg = SearchConfig::new(johnson.l(), johnson.m(), n, k, field);
    cfg.budget = budget;
    cfg.symmetry_reduction = symmetry;
    cfg.caps = *caps;
    if estimate {
        let est = estimate_nodes(&cfg, 256, 0)?;
        write_output(output, &pretty(&json!({"estimated_nodes": est, "budget": budget})))?;
        return Ok(true);
    }
    let start = Instant::now();
    let result = enumerate_embeddings(&cfg)?;
    if let Some(path) = jsonl {
        let mut w = BufWriter::new(fs::File::create(path)?);
        for key in result.images.keys() {
            let line = gio::encode_image_line(key, &result.image_subspaces(key));
            serde_json::to_writer(&mut w, &line).map_err(|e| Failure::Validation(e.to_string()))?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    let cv = validate_result(&cfg, &result)?;
    let summary = result.summary(&cfg);
    let tags: BTreeMap<&str, usize> = cv.tags.iter().map(|(t, c)| (t.as_str(), *c)).collect();
    let doc = json!({
        "schema_version": gio::SCHEMA_VERSION,
        "params": {"l": summary.l, "m": summary.m, "n": summary.n, "k": summary.k, "p": params.p, "e": params.e},
        "count": summary.images,
        "complete": summary.complete,
        "nodes": summary.nodes,
        "symmetry_reduction": summary.symmetry_reduction,
        "tags": tags,
        "classified": cv.classified,
        "rejections": cv.rejections,
        "full_apartments": cv.full_apartments,
        "all_apartments": cv.equals_apartments,
        "bfs_matches_formula": cv.bfs_matches_formula,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    });
    write_output(output, &pretty(&doc))?;
    if !cv.rejections.is_empty() {
        return Err(Failure::Internal(format!("{} images failed classification", cv.rejections.len())));
    }
    Ok(result.complete)
}

fn cmd_export(
    what: ExportKind,
    params: Params,
    input: Option<&Path>,
    format: Format,
    output: Option<&Path>,
    caps: &Caps,
) -> Outcome {
    let text = match what {
        ExportKind::Johnson => {
            let j = params.johnson(caps)?;
            match format {
                Format::Dot => dot::johnson_dot(&j),
                Format::Json => pretty(&json!({
                    "schema_version": gio::SCHEMA_VERSION,
                    "l": j.l(),
                    "m": j.m(),
                    "vertices": j.vertices().iter().map(|v| v.indices()).collect::<Vec<_>>(),
                })),
            }
        }
        ExportKind::Grassmannian => {
            let field = params.field(caps)?;
            let n = params.n(caps)?;
            let k = params.k(n)?;
            let g = Grassmannian::with_caps(&field, n, k, caps)?;
            match format {
                Format::Dot => dot::grassmann_dot(&g, None),
                Format::Json => index_table(&g, None),
            }
        }
        ExportKind::Embedding => {
            let path = input.ok_or_else(|| Failure::Validation("--input is required".into()))?;
            let inst = gio::decode_embedding(&read_input(path)?, caps)?;
            let g = Grassmannian::with_caps(inst.field(), inst.n(), inst.k(), caps)?;
            let ids: Vec<u32> = inst.map().iter().map(|s| g.id_of(s).expect("element of G_k")).collect();
            match format {
                Format::Dot => dot::grassmann_dot(&g, Some(&ids)),
                Format::Json => index_table(&g, Some(&ids)),
            }
        }
    };
    write_output(output, &text)?;
    Ok(true)
}

fn index_table(g: &Grassmannian, ids: Option<&[u32]>) -> String {
    let mut ids: Vec<u32> = ids.map_or_else(|| (0..g.len() as u32).collect(), <[u32]>::to_vec);
    ids.sort_unstable();
    ids.dedup();
    let entries: Vec<Value> = ids
        .iter()
        .map(|&id| json!({"id": id, "rref_rows": g.get(id).to_rows()}))
        .collect();
    pretty(&json!({
        "schema_version": gio::SCHEMA_VERSION,
        "n": g.n(),
        "k": g.k(),
        "q_spec": {"p": g.field().p(), "e": g.field().e()},
        "elements": entries,
    }))
}

fn run(cli: Cli) -> Outcome {
    let caps = match &cli.caps {
        Some(s) => Caps::parse(s)?,
        None => Caps::default(),
    };
    match cli.command {
        Command::Build {
            kind,
            params,
            input,
            output,
            budget,
        } => cmd_build(kind, params, input.as_deref(), output.as_deref(), budget, &caps),
        Command::Classify { input, output } => cmd_classify(&input, output.as_deref(), &caps),
        Command::Rigidity {
            input,
            output,
            seed,
            certificates,
        } => cmd_rigidity(&input, output.as_deref(), seed, certificates, &caps),
        Command::Oracle {
            params,
            budget,
            symmetry,
            jsonl,
            output,
            estimate,
        } => cmd_oracle(
            params,
            budget,
            symmetry,
            jsonl.as_deref(),
            output.as_deref(),
            estimate,
            &caps,
        ),
        Command::Export {
            what,
            params,
            input,
            format,
            output,
        } => cmd_export(what, params, input.as_deref(), format, output.as_deref(), &caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: result incomplete (budget exhausted or unresolved)");
            ExitCode::from(3)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
