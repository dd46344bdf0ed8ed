//! The `macx` command line: load complexes, run computations, emit JSON.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use macx::bhr::{BhrRing, DEFAULT_RING_CAP};
use macx::constructions::{self, PuzzleMoveSpec, CATALOG_FINGERPRINT_NAMES};
use macx::fingerprint::{self, FingerprintOptions};
use macx::hochster::{self, BettiTable, SweepOptions, DEFAULT_SWEEP_CAP};
use macx::homology::is_gorenstein_star;
use macx::properties::{self, DEFAULT_SCC_CAP};
use macx::taylor::{self, TaylorOptions, DEFAULT_TAYLOR_CAP};
use macx::toric::{self, CharMatrix};
use macx::{with_field, Complex, Error, FaceSet, Field, FieldKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "macx", about = "Moment-angle complex toolkit", disable_version_flag = true)]
struct Cli {
    /// Print version and catalog checksums.
    #[arg(short = 'V', long)]
    version: bool,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Coefficient field: gf2, gf3, gfp, q.
    #[arg(long, global = true, default_value = "gf2")]
    field: String,
    /// Largest vertex count for subset sweeps.
    #[arg(long, global = true, env = "MACX_SWEEP_CAP", default_value_t = DEFAULT_SWEEP_CAP, value_parser = positive_usize)]
    sweep_cap: usize,
    /// Search-node cap per SCC triple.
    #[arg(long, global = true, env = "MACX_SCC_CAP", default_value_t = DEFAULT_SCC_CAP, value_parser = positive_u64)]
    scc_cap: u64,
    /// Largest vertex count for whole-ring invariants.
    #[arg(long, global = true, env = "MACX_RING_CAP", default_value_t = DEFAULT_RING_CAP, value_parser = positive_usize)]
    ring_cap: usize,
    /// Largest number of missing faces for the full Taylor complex.
    #[arg(long, global = true, env = "MACX_TAYLOR_CAP", default_value_t = DEFAULT_TAYLOR_CAP, value_parser = positive_usize)]
    taylor_cap: usize,
    /// Worker threads, 0 for the default.
    #[arg(long, global = true, env = "MACX_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled computations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_usize(s).map(|v| v as u64)
}

/// Where to read a complex from.
#[derive(Args, Debug, Clone)]
struct Input {
    /// A JSON file, `-` for stdin, or `catalog:NAME`.
    #[arg(long = "in")]
    input: Option<String>,
    /// Read the complex from stdin.
    #[arg(long)]
    stdin: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Hochster,
    Taylor,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bigraded Betti numbers of the face ring.
    Betti {
        #[command(flatten)]
        input: Input,
        /// Which computation to run; `both` cross-checks them.
        #[arg(long, value_enum, default_value_t = Oracle::Hochster)]
        oracle: Oracle,
        /// Also report the multigraded refinement.
        #[arg(long)]
        multigraded: bool,
    },
    /// Combinatorial predicates: flag, suspension, NSC, SCC, class Q.
    Props {
        #[command(flatten)]
        input: Input,
        /// Check SCC on this many randomly chosen triples only.
        #[arg(long)]
        scc_sample: Option<usize>,
    },
    /// Build a complex.
    Construct {
        #[command(subcommand)]
        what: Construction,
    },
    /// Product of two ring elements.
    Product {
        #[command(flatten)]
        input: Input,
        /// `mf:1,3`, `top`, `unit`, or a JSON list of `{"J":[..],"d":..,"coords":[..]}`.
        #[arg(long)]
        x: String,
        /// Same forms as `--x`.
        #[arg(long)]
        y: String,
        /// Use the product of the real moment-angle complex.
        #[arg(long)]
        star: bool,
    },
    /// Ring invariants used to tell complexes apart.
    Fingerprint {
        #[command(flatten)]
        input: Input,
    },
    /// Compare the fingerprints of two complexes.
    Compare {
        /// A JSON file or `catalog:NAME`.
        #[arg(long)]
        a: String,
        /// A JSON file or `catalog:NAME`.
        #[arg(long)]
        b: String,
        /// Judge equality by the singly graded invariants.
        #[arg(long)]
        graded: bool,
    },
    /// Characteristic matrices.
    Toric {
        #[command(subcommand)]
        what: ToricCommand,
    },
}

#[derive(Subcommand, Debug)]
enum Construction {
    /// A named complex: T4, O6, I12, B(n), polygon(n), simplex_boundary(k), path(n).
    Catalog {
        #[arg(long)]
        name: String,
    },
    /// Barycentric subdivision.
    Barycentric {
        #[command(flatten)]
        input: Input,
    },
    /// The flag 3-sphere `E_P` over a 2-sphere.
    Ep {
        /// Catalog name of the 2-sphere.
        #[arg(long)]
        polytope: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Cone every polygon of a 2-sphere's face lattice.
    Xi1 {
        /// c8, d20, or a catalog 2-sphere.
        #[arg(long)]
        lattice: String,
    },
    /// `xi1` with every original edge subdivided.
    Xi2 {
        /// c8, d20, or a catalog 2-sphere.
        #[arg(long)]
        lattice: String,
    },
    /// Cut along `∂Δ(pair) * K_gamma` and reglue by `phi`; without a move,
    /// list the available 4-circuit moves.
    Puzzle {
        #[command(flatten)]
        input: Input,
        /// Vertices of the simplex boundary, e.g. `1,3`.
        #[arg(long, value_delimiter = ',')]
        pair: Vec<usize>,
        /// Vertices of `Γ`.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<usize>,
        /// Images of the `--pair` vertices.
        #[arg(long, value_delimiter = ',')]
        phi: Vec<usize>,
    },
    /// Stellar subdivision at a face.
    Stellar {
        #[command(flatten)]
        input: Input,
        /// Vertices of the face, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        face: Vec<usize>,
    },
    /// All connected sums of two spheres along facets, up to isomorphism.
    ConnectedSums {
        /// A JSON file or `catalog:NAME`.
        #[arg(long)]
        a: String,
        /// A JSON file or `catalog:NAME`.
        #[arg(long)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
enum ToricCommand {
    /// Check that a matrix is characteristic for the complex.
    Validate {
        #[command(flatten)]
        input: Input,
        /// A JSON file, `cube:K` for the octahedron family, or `coloring`.
        #[arg(long)]
        matrix: String,
        /// Require every face, not only facets, to be unimodular.
        #[arg(long)]
        strict: bool,
    },
    /// Even Betti numbers of the manifold next to the h-vector.
    Ranks {
        #[command(flatten)]
        input: Input,
        /// Same forms as for `validate`.
        #[arg(long)]
        matrix: String,
    },
    /// Weak equivariant equivalence of two characteristic matrices.
    Equiv {
        #[command(flatten)]
        input: Input,
        /// Same forms as for `validate`.
        #[arg(long)]
        matrix: String,
        /// Same forms as for `validate`.
        #[arg(long)]
        other: String,
        /// Allow relabelling by automorphisms of the complex.
        #[arg(long)]
        automorphisms: bool,
    },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

struct Ctx<'a> {
    field: FieldKind,
    cfg: &'a ConfigArgs,
    stdin: &'a mut (dyn Read + Send),
}

struct Report {
    result: Value,
    text: Option<String>,
    code: i32,
}

impl Report {
    fn ok(result: Value) -> Self {
        Report { result, text: None, code: EXIT_OK }
    }
}

/// `macx --version` text.
pub fn version_text() -> String {
    let mut s = format!("macx {}\n", env!("CARGO_PKG_VERSION"));
    for name in CATALOG_FINGERPRINT_NAMES {
        let k = constructions::catalog(name).expect("catalog entry");
        let digest = Sha256::digest(k.to_json_string().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        s.push_str(&format!("catalog {name} sha256:{hex}\n"));
    }
    s
}

/// Run with the given arguments (including the program name).
pub fn run<I, T>(args: I, stdin: &mut (dyn Read + Send)) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if cli.version {
        return Outcome { code: EXIT_OK, stdout: version_text(), stderr: String::new() };
    }
    let Some(command) = cli.command else {
        return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: "error: no command given\n".into() };
    };
    let field: FieldKind = match cli.config.field.parse() {
        Ok(f) => f,
        Err(e) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cli.config.threads > 0 {
        builder = builder.num_threads(cli.config.threads);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let name = command_name(&command);
    let mut ctx = Ctx { field, cfg: &cli.config, stdin };
    let res = pool.install(|| dispatch(&mut ctx, command));
    match res {
        Ok(report) => {
            let stdout = match cli.config.format {
                Format::Json => {
                    let doc = json!({ "command": name, "config": config_json(&cli.config, field), "result": report.result });
                    serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
                }
                Format::Text => {
                    let body = report
                        .text
                        .unwrap_or_else(|| serde_json::to_string_pretty(&report.result).expect("serialisable") + "\n");
                    format!("# {name} {}\n{body}", config_text(&cli.config, field))
                }
            };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Lib(e)) => {
            let code = match e {
                Error::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_USAGE,
            };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Betti { .. } => "betti",
        Command::Props { .. } => "props",
        Command::Construct { .. } => "construct",
        Command::Product { .. } => "product",
        Command::Fingerprint { .. } => "fingerprint",
        Command::Compare { .. } => "compare",
        Command::Toric { .. } => "toric",
    }
}

fn config_json(c: &ConfigArgs, field: FieldKind) -> Value {
    json!({
        "field": field.to_string(),
        "sweep_cap": c.sweep_cap,
        "scc_cap": c.scc_cap,
        "ring_cap": c.ring_cap,
        "taylor_cap": c.taylor_cap,
        "threads": c.threads,
        "format": c.format,
        "seed": c.seed,
    })
}

fn config_text(c: &ConfigArgs, field: FieldKind) -> String {
    format!(
        "field={field} sweep_cap={} scc_cap={} ring_cap={} taylor_cap={} threads={} seed={}",
        c.sweep_cap, c.scc_cap, c.ring_cap, c.taylor_cap, c.threads, c.seed
    )
}

fn read_source(ctx: &mut Ctx, src: &str) -> Res<String> {
    if src == "-" {
        let mut s = String::new();
        ctx.stdin.read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(PathBuf::from(src)).map_err(|e| Failure::Usage(format!("reading {src}: {e}")))
}

/// A complex from a file, stdin or the catalog. Accepts a bare complex or
/// the output envelope of another command.
fn load_source(ctx: &mut Ctx, src: &str) -> Res<Complex> {
    if let Some(name) = src.strip_prefix("catalog:") {
        return Ok(constructions::catalog(name)?);
    }
    let text = read_source(ctx, src)?;
    Ok(parse_complex(&text)?)
}

pub fn parse_complex(text: &str) -> Result<Complex, Error> {
    let v: Value = serde_json::from_str(text)?;
    let body = match v.get("result") {
        Some(r) if r.get("facets").is_some() => r.clone(),
        _ => v,
    };
    Complex::from_json(&serde_json::from_value(body)?)
}

fn load(ctx: &mut Ctx, input: &Input) -> Res<Complex> {
    match (&input.input, input.stdin) {
        (Some(_), true) => Err(Failure::Usage("give either --in or --stdin".into())),
        (Some(src), false) => load_source(ctx, src),
        (None, true) => load_source(ctx, "-"),
        (None, false) => Err(Failure::Usage("no input: use --in FILE or --stdin".into())),
    }
}

fn to_faceset(k: &Complex, labels: &[usize]) -> Res<FaceSet> {
    let mut s = FaceSet::EMPTY;
    for &v in labels {
        if v == 0 || v > k.m() {
            return Err(Failure::Usage(format!("vertex {v} out of range 1..={}", k.m())));
        }
        s.insert(v - 1);
    }
    Ok(s)
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Res<Report> {
    match command {
        Command::Betti { input, oracle, multigraded } => {
            let k = load(ctx, &input)?;
            cmd_betti(ctx, &k, oracle, multigraded)
        }
        Command::Props { input, scc_sample } => {
            let k = load(ctx, &input)?;
            cmd_props(ctx, &k, scc_sample)
        }
        Command::Construct { what } => cmd_construct(ctx, what),
        Command::Product { input, x, y, star } => {
            let k = load(ctx, &input)?;
            cmd_product(ctx.field, k, &x, &y, star)
        }
        Command::Fingerprint { input } => {
            let k = load(ctx, &input)?;
            let fp = fingerprint::fingerprint(&k, ctx.field, fp_options(ctx.cfg))?;
            Ok(Report::ok(fp.to_json_value()))
        }
        Command::Compare { a, b, graded } => {
            let ka = load_source(ctx, &a)?;
            let kb = load_source(ctx, &b)?;
            let o = fp_options(ctx.cfg);
            let fa = fingerprint::fingerprint(&ka, ctx.field, o)?;
            let fb = fingerprint::fingerprint(&kb, ctx.field, o)?;
            let bigraded = fingerprint::compare_fingerprints(&fa, &fb, false)?;
            let singly = fingerprint::compare_fingerprints(&fa, &fb, true)?;
            let equal = if graded { singly.equal } else { bigraded.equal };
            Ok(Report {
                result: json!({
                    "equal": equal,
                    "bigraded": bigraded,
                    "graded": singly,
                    "a": fa.to_json_value(),
                    "b": fb.to_json_value(),
                }),
                text: None,
                code: if equal { EXIT_OK } else { EXIT_NEGATIVE },
            })
        }
        Command::Toric { what } => cmd_toric(ctx, what),
    }
}

fn fp_options(c: &ConfigArgs) -> FingerprintOptions {
    FingerprintOptions { sweep_cap: c.sweep_cap, ring_cap: c.ring_cap }
}

/// First `(i, j)` or multigraded entry where the tables disagree.
pub fn first_table_mismatch(a: &BettiTable, b: &BettiTable) -> Option<Value> {
    let keys: std::collections::BTreeSet<_> = a.ranks.keys().chain(b.ranks.keys()).copied().collect();
    for (i, j) in keys {
        let (x, y) = (a.get(i, j), b.get(i, j));
        if x != y {
            return Some(json!({ "i": i, "j": j, "hochster": x, "taylor": y }));
        }
    }
    if let (Some(ma), Some(mb)) = (&a.multigraded, &b.multigraded) {
        let keys: std::collections::BTreeSet<_> = ma.keys().chain(mb.keys()).copied().collect();
        for key in keys {
            let (x, y) = (ma.get(&key).copied().unwrap_or(0), mb.get(&key).copied().unwrap_or(0));
            if x != y {
                let subset: Vec<usize> = key.1.iter().map(|v| v + 1).collect();
                return Some(json!({ "i": key.0, "J": subset, "hochster": x, "taylor": y }));
            }
        }
    }
    None
}

/// Report for `--oracle both` given the two tables.
pub fn cross_check(hochster: &BettiTable, taylor: &BettiTable) -> (Value, i32) {
    match first_table_mismatch(hochster, taylor) {
        None => (json!({ "agree": true, "table": hochster.to_json_value() }), EXIT_OK),
        Some(m) => (
            json!({
                "agree": false,
                "mismatch": m,
                "hochster": hochster.to_json_value(),
                "taylor": taylor.to_json_value(),
            }),
            EXIT_NEGATIVE,
        ),
    }
}

fn cmd_betti(ctx: &Ctx, k: &Complex, oracle: Oracle, multigraded: bool) -> Res<Report> {
    let sweep = || hochster::bigraded_betti(k, ctx.field, SweepOptions { cap: ctx.cfg.sweep_cap, multigraded });
    let tay = || {
        let opts = TaylorOptions { mf_cap: ctx.cfg.taylor_cap, ..TaylorOptions::default() };
        taylor::tor_dims_via_taylor(k, ctx.field, opts, multigraded)
    };
    let (table, (mut result, code)) = match oracle {
        Oracle::Hochster => {
            let t = sweep()?;
            let v = t.to_json_value();
            (t, (json!({ "table": v }), EXIT_OK))
        }
        Oracle::Taylor => {
            let t = tay()?;
            let v = t.to_json_value();
            (t, (json!({ "table": v }), EXIT_OK))
        }
        Oracle::Both => {
            let h = sweep()?;
            let t = tay()?;
            let r = cross_check(&h, &t);
            (h, r)
        }
    };
    let check = hochster::missing_face_count_check(k, &table);
    result["missing_face_check"] = serde_json::to_value(&check).expect("serialisable");
    result["poincare_symmetric"] = if is_gorenstein_star(k, ctx.field)? {
        json!(table.is_poincare_symmetric(k.m(), (k.dim() + 1) as usize))
    } else {
        Value::Null
    };
    let text = table.to_text();
    Ok(Report { result, text: Some(text), code })
}

fn cmd_props(ctx: &Ctx, k: &Complex, sample: Option<usize>) -> Res<Report> {
    let chosen = sample.map(|n| {
        let mut all = properties::scc_triples(k);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        all.shuffle(&mut rng);
        all.truncate(n);
        all
    });
    let report = properties::props_report(k, ctx.field, ctx.cfg.scc_cap, chosen.as_deref())?;
    let capped = report.scc.get("verdict").and_then(Value::as_str) == Some("unknown");
    let mut result = serde_json::to_value(&report).expect("serialisable");
    if let Some(n) = sample {
        result["scc_sample"] = json!(n);
    }
    Ok(Report { result, text: None, code: if capped { EXIT_CAP } else { EXIT_OK } })
}

fn complex_value(k: &Complex) -> Value {
    serde_json::to_value(k.to_json()).expect("serialisable")
}

fn cmd_construct(ctx: &mut Ctx, what: Construction) -> Res<Report> {
    let value = match what {
        Construction::Catalog { name } => complex_value(&constructions::catalog(&name)?),
        Construction::Barycentric { input } => {
            let k = load(ctx, &input)?;
            let (b, labels) = constructions::barycentric_subdivision(&k)?;
            let mut v = complex_value(&b);
            v["labels"] = json!(labels.iter().map(|s| s.iter().map(|x| x + 1).collect::<Vec<_>>()).collect::<Vec<_>>());
            v
        }
        Construction::Ep { polytope, input } => {
            let k = match polytope {
                Some(name) => constructions::catalog(&name)?,
                None => load(ctx, &input)?,
            };
            let (e, layout) = constructions::construct_ep(&k, None)?;
            let mut v = complex_value(&e);
            v["layout"] = json!({
                "copy": [1, layout.m],
                "copy_prime": [layout.m + 1, 2 * layout.m],
                "dual": [2 * layout.m + 1, 2 * layout.m + layout.t],
                "u": layout.u + 1,
                "u_prime": layout.u_prime + 1,
            });
            v
        }
        Construction::Xi1 { lattice } => complex_value(&constructions::xi1(&constructions::lattice(&lattice)?)?),
        Construction::Xi2 { lattice } => complex_value(&constructions::xi2(&constructions::lattice(&lattice)?)?),
        Construction::Puzzle { input, pair, gamma, phi } => {
            let k = load(ctx, &input)?;
            if pair.is_empty() && gamma.is_empty() && phi.is_empty() {
                let moves: Vec<Value> = constructions::four_circuit_moves(&k)
                    .into_iter()
                    .map(|m| {
                        json!({
                            "pair": m.pair.iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "gamma": m.gamma.iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "phi": m.phi.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({ "moves": moves })
            } else {
                let zero = |xs: &[usize]| -> Res<Vec<usize>> {
                    xs.iter()
                        .map(|&v| if v == 0 || v > k.m() { Err(Failure::Usage(format!("vertex {v} out of range"))) } else { Ok(v - 1) })
                        .collect()
                };
                let spec = PuzzleMoveSpec { pair: zero(&pair)?, gamma: zero(&gamma)?, phi: zero(&phi)? };
                complex_value(&constructions::puzzle_move(&k, &spec)?)
            }
        }
        Construction::Stellar { input, face } => {
            let k = load(ctx, &input)?;
            let s = to_faceset(&k, &face)?;
            complex_value(&constructions::stellar_subdivision(&k, s)?)
        }
        Construction::ConnectedSums { a, b } => {
            let ka = load_source(ctx, &a)?;
            let kb = load_source(ctx, &b)?;
            let sums = constructions::connected_sum_enumerate(&ka, &kb)?;
            json!({ "complexes": sums.iter().map(complex_value).collect::<Vec<_>>() })
        }
    };
    Ok(Report::ok(value))
}

#[derive(serde::Deserialize)]
struct TermJson {
    #[serde(rename = "J")]
    j: Vec<usize>,
    d: i32,
    #[serde(default)]
    coords: Option<Vec<i64>>,
    #[serde(default)]
    basis: Option<usize>,
}

fn parse_element<F: Field>(
    ring: &BhrRing<F>,
    spec: &str,
) -> Res<macx::algebra::Element<F::Elem>> {
    let k = ring.complex();
    let s = spec.trim();
    if s == "top" {
        return Ok(ring.top_class()?);
    }
    if s == "unit" {
        return Ok(ring.unit());
    }
    if let Some(list) = s.strip_prefix("mf:") {
        let labels: Vec<usize> = list
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Failure::Usage(format!("bad vertex `{t}`: {e}"))))
            .collect::<Res<_>>()?;
        return Ok(ring.missing_face_class(to_faceset(k, &labels)?)?);
    }
    let terms: Vec<TermJson> = serde_json::from_str(s).map_err(|e| Failure::Usage(format!("element: {e}")))?;
    let f = ring_field(ring);
    let mut acc = macx::algebra::Element::zero(ring.unit().ring_id);
    for t in terms {
        let j = to_faceset(k, &t.j)?;
        let x = match (t.coords, t.basis) {
            (Some(c), None) => ring.element(j, t.d, c.iter().map(|&v| f.from_i64(v)).collect())?,
            (None, Some(i)) => ring.basis_element(j, t.d, i)?,
            _ => return Err(Failure::Usage("each term needs exactly one of `coords` or `basis`".into())),
        };
        acc = macx::algebra::add(&f, &acc, &x)?;
    }
    Ok(acc)
}

fn ring_field<F: Field>(ring: &BhrRing<F>) -> F {
    use macx::algebra::PieceAlgebra;
    ring.field().clone()
}

fn element_value<F: Field>(f: &F, e: &macx::algebra::Element<F::Elem>) -> Value {
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|(&(j, d), coords)| {
            let cs: Vec<Value> = coords
                .iter()
                .map(|c| {
                    let s = f.to_string_elem(c);
                    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
                })
                .collect();
            json!({ "J": j.iter().map(|v| v + 1).collect::<Vec<_>>(), "d": d, "degree": j.len() as i64 + d as i64 + 1, "coords": cs })
        })
        .collect();
    json!({ "terms": terms, "zero": terms.is_empty() })
}

fn cmd_product(field: FieldKind, k: Complex, x: &str, y: &str, star: bool) -> Res<Report> {
    with_field!(field, |f| {
        let ring = BhrRing::new(f, k);
        let a = parse_element(&ring, x)?;
        let b = parse_element(&ring, y)?;
        let p = if star { ring.star(&a, &b)? } else { ring.mul(&a, &b)? };
        let fld = ring_field(&ring);
        Ok(Report::ok(json!({
            "x": element_value(&fld, &a),
            "y": element_value(&fld, &b),
            "product": element_value(&fld, &p),
            "star": star,
        })))
    })
}

fn load_matrix(ctx: &mut Ctx, k: &Complex, src: &str) -> Res<CharMatrix> {
    if let Some(t) = src.strip_prefix("cube:") {
        let t: i64 = t.parse().map_err(|e| Failure::Usage(format!("cube parameter: {e}")))?;
        return Ok(toric::cube_family(t));
    }
    if src == "coloring" {
        return Ok(toric::characteristic_from_coloring(k)?);
    }
    let text = read_source(ctx, src)?;
    let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let body = match v.get("result").and_then(|r| r.get("matrix")) {
        Some(m) => m.clone(),
        None => v,
    };
    let m: CharMatrix = serde_json::from_value(body).map_err(Error::from)?;
    Ok(CharMatrix::new(m.n, m.columns)?)
}

fn cmd_toric(ctx: &mut Ctx, what: ToricCommand) -> Res<Report> {
    match what {
        ToricCommand::Validate { input, matrix, strict } => {
            let k = load(ctx, &input)?;
            let lam = load_matrix(ctx, &k, &matrix)?;
            let v = toric::validate_characteristic(&k, &lam, strict)?;
            let code = if v.valid { EXIT_OK } else { EXIT_NEGATIVE };
            let failing = v.failing_face.as_ref().map(|f| f.iter().map(|x| x + 1).collect::<Vec<_>>());
            Ok(Report {
                result: json!({ "valid": v.valid, "strict": strict, "failing_face": failing, "determinant": v.determinant, "matrix": lam }),
                text: None,
                code,
            })
        }
        ToricCommand::Ranks { input, matrix } => {
            let k = load(ctx, &input)?;
            let lam = load_matrix(ctx, &k, &matrix)?;
            let ranks = toric::quotient_ring_ranks(&k, &lam)?;
            let h = toric::h_vector(&k)?;
            let agree = ranks.iter().map(|&r| r as i64).eq(h.iter().copied());
            Ok(Report {
                result: json!({ "ranks": ranks, "h_vector": h, "agree": agree }),
                text: None,
                code: if agree { EXIT_OK } else { EXIT_NEGATIVE },
            })
        }
        ToricCommand::Equiv { input, matrix, other, automorphisms } => {
            let k = load(ctx, &input)?;
            let a = load_matrix(ctx, &k, &matrix)?;
            let b = load_matrix(ctx, &k, &other)?;
            let w = toric::weak_equivalence(&k, &a, &b, automorphisms)?;
            let code = if w.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            let witness = w.map(|w| {
                json!({
                    "A": w.a,
                    "B": w.signs,
                    "automorphism": w.automorphism.map(|g| g.iter().map(|v| v + 1).collect::<Vec<_>>()),
                })
            });
            Ok(Report { result: json!({ "equivalent": code == EXIT_OK, "witness": witness }), text: None, code })
        }
    }
}
