//! Command-line front end: chain rings, rank-metric code filtrations, skew
//! algebra operations, Bruhat-Tits hulls and Mustafin fiber reports, with
//! human-readable or JSON output.

mod expr;
mod formats;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use valrank_core::building::{adjacent, convex_hull, hull_member, LatticeClass};
use valrank_core::chain::GaloisRing;
use valrank_core::codes::{CodeSpec, DEFAULT_BUDGET};
use valrank_core::matrix::Matrix;
use valrank_core::mustafin::{
    assemble_bridges, basis_criterion, mp_dimension, special_fiber_components,
};
use valrank_core::scalar::Backend;
use valrank_core::skew::{
    annihilator_determinant, annihilator_recursive, matrix_rep, norm_condition_check, right_divide,
    SigmaPoly,
};

const BUDGET_ENV: &str = "VALRANK_BUDGET";

#[derive(Parser)]
#[command(
    name = "valrank",
    version,
    about = "Exact rank-metric codes over valued fields, chain-ring skew algebra, \
             Bruhat-Tits hulls and Mustafin special fibers"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Galois rings GR(p^k, n): descriptors, Teichmüller lifts, digits
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Rank-metric codes: filtrations, minimum distance, MRD verdicts
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Skew group algebra: annihilators, division, norm check, matrices
    Skew {
        #[command(subcommand)]
        cmd: SkewCmd,
    },
    /// Bruhat-Tits building: canonical forms, adjacency, convex hulls
    Bt {
        #[command(subcommand)]
        cmd: BtCmd,
    },
    /// Mustafin special fibers and the multi-projective basis criterion
    Mustafin {
        #[command(subcommand)]
        cmd: MustafinCmd,
    },
}

#[derive(Args)]
struct RingParams {
    /// Prime p
    #[arg(long)]
    p: u64,
    /// Depth k of Z/p^k
    #[arg(long)]
    k: u32,
    /// Extension degree n
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum RingCmd {
    /// Build the canonical descriptor of GR(p^k, n)
    Build {
        #[command(flatten)]
        ring: RingParams,
    },
    /// Teichmüller lift of a residue-field element
    Teich {
        #[command(flatten)]
        ring: RingParams,
        /// Residue element: an integer or a coefficient array like `[2,1]`
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Pi-adic digit expansion of a ring element
    Digits {
        #[command(flatten)]
        ring: RingParams,
        /// Ring element: an integer or a coefficient array like `[5,0]`
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CodeTask {
    /// Report k_i, d_i and MRD flags for depths 1..=I
    #[arg(long)]
    filtration: Option<u32>,
    /// Brute-force minimum distance at one depth
    #[arg(long)]
    mindist: Option<u32>,
    /// Singleton-like bound and MRD verdict at one depth
    #[arg(long)]
    mrd: Option<u32>,
}

impl CodeTask {
    fn depth(&self) -> u32 {
        self.filtration.or(self.mindist).or(self.mrd).unwrap()
    }
}

#[derive(Args)]
struct CodeParams {
    /// Prime p
    #[arg(long)]
    p: u64,
    /// Extension degree n
    #[arg(long)]
    n: usize,
    /// Ring depth (defaults to the requested computation depth)
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// All sigma-polynomials of degree below ell
    Gabidulin {
        #[command(flatten)]
        params: CodeParams,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        task: CodeTask,
    },
    /// Gabidulin with the twist eta sigma^h(f_0) in the degree-ell slot
    Twisted {
        #[command(flatten)]
        params: CodeParams,
        #[arg(long)]
        ell: usize,
        /// Twist element, e.g. -1+pi^1
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        task: CodeTask,
    },
    /// Module generated by explicit sigma-polynomials
    Custom {
        #[command(flatten)]
        params: CodeParams,
        /// JSON list of sigma-polynomials (arrays of coefficient arrays)
        #[arg(long)]
        generators: String,
        #[command(flatten)]
        task: CodeTask,
    },
}

#[derive(Subcommand)]
enum SkewCmd {
    /// Monic annihilator of a free submodule
    Annihilator {
        #[command(flatten)]
        ring: RingParams,
        /// Semicolon-separated basis elements (coefficient arrays or expressions)
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// recursive (default) or determinant
        #[arg(long, default_value = "recursive")]
        method: AnnihilatorMethod,
    },
    /// Right Euclidean division f = q g + r by a monic divisor
    Divide {
        #[command(flatten)]
        ring: RingParams,
        /// Dividend as a JSON array of coefficient arrays
        #[arg(long)]
        f: String,
        /// Monic divisor in the same format
        #[arg(long)]
        g: String,
    },
    /// Necessary norm condition for maximal kernels
    Normcheck {
        #[command(flatten)]
        ring: RingParams,
        #[arg(long)]
        f: String,
        #[arg(long)]
        ell: usize,
    },
    /// Matrix of the endomorphism in the power basis
    Matrep {
        #[command(flatten)]
        ring: RingParams,
        #[arg(long)]
        f: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AnnihilatorMethod {
    Recursive,
    Determinant,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Padic,
    Tadic,
}

#[derive(Args)]
struct BackendParams {
    /// Valued field: padic (needs --p) or tadic
    #[arg(long, value_enum)]
    backend: BackendArg,
    /// Prime for the p-adic backend
    #[arg(long)]
    p: Option<u64>,
}

impl BackendParams {
    fn resolve(&self) -> Result<Backend, CliError> {
        match self.backend {
            BackendArg::Padic => {
                let p = self
                    .p
                    .ok_or_else(|| CliError::usage("the p-adic backend needs --p"))?;
                Backend::padic(p).map_err(CliError::from)
            }
            BackendArg::Tadic => Ok(Backend::Tadic),
        }
    }
}

#[derive(Subcommand)]
enum BtCmd {
    /// Canonical form of a lattice class
    Canon {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long)]
        d: Option<usize>,
        /// Matrix: I, diag(...), or [[..],[..]]
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Adjacency of two lattice classes in the building
    Adjacent {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
    },
    /// Convex hull of a family of lattice classes
    Hull {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated matrices
        #[arg(long, allow_hyphen_values = true)]
        lattices: String,
    },
    /// Membership of a class in the convex hull of a family
    Member {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        lattices: String,
    },
}

#[derive(Subcommand)]
enum MustafinCmd {
    /// Vertex reports over the hull: the special fiber classification
    Fiber {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        lattices: String,
    },
    /// Saturation flag and multi-projective dimension of a matrix family
    Mpdim {
        #[command(flatten)]
        backend: BackendParams,
        /// Semicolon-separated d x e matrices
        #[arg(long, allow_hyphen_values = true)]
        matrices: String,
    },
    /// Full basis criterion: dimension, lattices and hull membership
    Criterion {
        #[command(flatten)]
        backend: BackendParams,
        #[arg(long, allow_hyphen_values = true)]
        matrices: String,
    },
}

struct CliError {
    code: String,
    message: String,
    usage: bool,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError {
            code: "UsageError".into(),
            message: msg.into(),
            usage: true,
        }
    }

    fn domain(code: impl Into<String>, msg: impl Into<String>) -> CliError {
        CliError {
            code: code.into(),
            message: msg.into(),
            usage: false,
        }
    }
}

macro_rules! domain_error_from {
    ($ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                // the Debug variant name doubles as the machine-readable code
                let debug = format!("{e:?}");
                let code = debug
                    .split(|c: char| !c.is_ascii_alphanumeric())
                    .next()
                    .unwrap_or("Error")
                    .to_string();
                CliError::domain(code, e.to_string())
            }
        }
    };
}

domain_error_from!(valrank_core::scalar::ScalarError);
domain_error_from!(valrank_core::chain::ChainError);
domain_error_from!(valrank_core::skew::SkewError);
domain_error_from!(valrank_core::codes::CodeError);
domain_error_from!(valrank_core::building::BuildingError);
domain_error_from!(valrank_core::mustafin::MustafinError);

struct CmdOutput {
    payload: Value,
    human: String,
    warnings: Vec<String>,
}

impl CmdOutput {
    fn new(payload: Value, human: String) -> CmdOutput {
        CmdOutput {
            payload,
            human,
            warnings: Vec::new(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli.command);
    let elapsed = started.elapsed();
    match result {
        Ok(out) => {
            if cli.json {
                let doc = json!({
                    "status": "ok",
                    "payload": out.payload,
                    "diagnostics": { "warnings": out.warnings },
                });
                println!("{doc}");
            } else {
                println!("{}", out.human);
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                eprintln!("elapsed: {elapsed:.2?}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if cli.json {
                let doc = json!({
                    "status": "error",
                    "error": { "code": err.code, "message": err.message },
                    "diagnostics": { "warnings": [] },
                });
                println!("{doc}");
            } else {
                eprintln!("error[{}]: {}", err.code, err.message);
            }
            if err.usage {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn run(command: &Command) -> Result<CmdOutput, CliError> {
    match command {
        Command::Ring { cmd } => run_ring(cmd),
        Command::Code { cmd } => run_code(cmd),
        Command::Skew { cmd } => run_skew(cmd),
        Command::Bt { cmd } => run_bt(cmd),
        Command::Mustafin { cmd } => run_mustafin(cmd),
    }
}

fn build_ring(params: &RingParams) -> Result<GaloisRing, CliError> {
    GaloisRing::new(params.p, params.k, params.n).map_err(CliError::from)
}

/// Integer или coefficient-array element input.
fn parse_coeffs(input: &str, n: usize, reduce: impl Fn(i64) -> u64) -> Result<Vec<u64>, CliError> {
    let value: Value = serde_json::from_str(input)
        .map_err(|_| CliError::usage(format!("cannot parse element '{input}'")))?;
    match value {
        Value::Number(num) => {
            let v = num
                .as_i64()
                .ok_or_else(|| CliError::usage("element out of integer range"))?;
            let mut coeffs = vec![0u64; n];
            coeffs[0] = reduce(v);
            Ok(coeffs)
        }
        Value::Array(arr) => {
            if arr.len() != n {
                return Err(CliError::usage(format!(
                    "element needs {n} coefficients, got {}",
                    arr.len()
                )));
            }
            arr.iter()
                .map(|c| {
                    c.as_i64()
                        .map(&reduce)
                        .ok_or_else(|| CliError::usage("coefficients must be integers"))
                })
                .collect()
        }
        _ => Err(CliError::usage("element must be an integer or an array")),
    }
}

fn run_ring(cmd: &RingCmd) -> Result<CmdOutput, CliError> {
    match cmd {
        RingCmd::Build { ring } => {
            let r = build_ring(ring)?;
            let human = format!(
                "GR({}^{}, {}): basic irreducible coefficients (constant first) {:?}",
                r.p(),
                r.depth(),
                r.degree(),
                r.modulus
            );
            Ok(CmdOutput::new(formats::ring_json(&r), human))
        }
        RingCmd::Teich { ring, value } => {
            let r = build_ring(ring)?;
            let p = r.p();
            let residue = parse_coeffs(value, r.degree(), |v| {
                (((v % p as i64) + p as i64) % p as i64) as u64
            })?;
            let lift = r.teichmuller_lift(&residue);
            let human = if r.degree() == 1 {
                format!("{}", lift.coeffs[0])
            } else {
                format!("{:?}", lift.coeffs)
            };
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "residue": residue,
                    "lift": formats::elem_json(&lift),
                }),
                human,
            ))
        }
        RingCmd::Digits { ring, value } => {
            let r = build_ring(ring)?;
            let coeffs = parse_coeffs(value, r.degree(), |v| r.zk.reduce_i64(v))?;
            let x = r.from_coeffs(&coeffs);
            let digits = r.pi_digits(&x);
            let human = digits
                .iter()
                .map(|d| {
                    if r.degree() == 1 {
                        d.coeffs[0].to_string()
                    } else {
                        format!("{:?}", d.coeffs)
                    }
                })
                .collect::<Vec<_>>()
                .join(", ");
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "element": formats::elem_json(&x),
                    "digits": digits.iter().map(formats::elem_json).collect::<Vec<_>>(),
                }),
                format!("digits (low to high): {human}"),
            ))
        }
    }
}

fn run_code(cmd: &CodeCmd) -> Result<CmdOutput, CliError> {
    let (params, task) = match cmd {
        CodeCmd::Gabidulin { params, task, .. } => (params, task),
        CodeCmd::Twisted { params, task, .. } => (params, task),
        CodeCmd::Custom { params, task, .. } => (params, task),
    };
    let depth = task.depth();
    if depth == 0 {
        return Err(CliError::usage("depth must be at least 1"));
    }
    let k = params.k.unwrap_or(depth);
    let ring = GaloisRing::new(params.p, k, params.n).map_err(CliError::from)?;

    let (spec, kind_json) = match cmd {
        CodeCmd::Gabidulin { ell, .. } => (
            CodeSpec::gabidulin(ring.clone(), *ell).map_err(CliError::from)?,
            json!({"kind": "gabidulin", "ell": ell}),
        ),
        CodeCmd::Twisted { ell, eta, h, .. } => {
            let eta_elem = expr::parse_ring_elem(eta, &ring).map_err(CliError::usage)?;
            (
                CodeSpec::twisted(ring.clone(), *ell, eta_elem.clone(), *h)
                    .map_err(CliError::from)?,
                json!({
                    "kind": "twisted",
                    "ell": ell,
                    "eta": formats::elem_json(&eta_elem),
                    "h": h,
                }),
            )
        }
        CodeCmd::Custom { generators, .. } => {
            let value: Value = serde_json::from_str(generators)
                .map_err(|e| CliError::usage(format!("generators: {e}")))?;
            let arr = value
                .as_array()
                .ok_or_else(|| CliError::usage("generators must be a JSON list"))?;
            let gens: Vec<SigmaPoly> = arr
                .iter()
                .map(|g| formats::poly_from_json(g, &ring))
                .collect::<Result<_, _>>()
                .map_err(CliError::usage)?;
            let count = gens.len();
            (
                CodeSpec::custom(ring.clone(), gens).map_err(CliError::from)?,
                json!({"kind": "custom", "generator_count": count}),
            )
        }
    };

    let mut payload = json!({
        "ring": formats::ring_json(&ring),
        "code": kind_json,
    });
    let human;
    if let Some(up_to) = task.filtration {
        let report = spec
            .filtration_report(up_to, budget())
            .map_err(CliError::from)?;
        let show = |v: &[Option<usize>]| {
            v.iter()
                .map(|d| d.map(|x| x.to_string()).unwrap_or_else(|| "-".into()))
                .collect::<Vec<_>>()
                .join(",")
        };
        human = format!(
            "depths {:?}: k = ({}), d = ({}), mrd = {:?}",
            report.depths,
            report
                .k_values
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(","),
            show(&report.d_values),
            report.mrd_flags
        );
        payload["filtration"] = formats::filtration_json(&report);
    } else if let Some(i) = task.mindist {
        let d = spec.min_distance(i, budget()).map_err(CliError::from)?;
        human = format!("d_{i} = {d}");
        payload["min_distance"] = json!({"depth": i, "value": d});
    } else {
        let i = task.mrd.unwrap();
        let report = spec.singleton_check(i, budget()).map_err(CliError::from)?;
        human = format!(
            "depth {}: d = {}, bound = {}, free rank = {}, mrd = {}",
            report.depth, report.min_distance, report.bound, report.free_rank, report.is_mrd
        );
        payload["singleton"] = formats::singleton_json(&report);
    }
    Ok(CmdOutput::new(payload, human))
}

fn parse_beta(
    input: &str,
    ring: &GaloisRing,
) -> Result<Vec<valrank_core::chain::GrElem>, CliError> {
    expr::split_top_level(input, ';')
        .iter()
        .map(|item| {
            if item.trim_start().starts_with('[') {
                let v: Value = serde_json::from_str(item)
                    .map_err(|e| CliError::usage(format!("basis element '{item}': {e}")))?;
                formats::elem_from_json(&v, ring).map_err(CliError::usage)
            } else {
                expr::parse_ring_elem(item, ring).map_err(CliError::usage)
            }
        })
        .collect()
}

fn parse_poly_arg(input: &str, ring: &GaloisRing) -> Result<SigmaPoly, CliError> {
    let v: Value = serde_json::from_str(input)
        .map_err(|e| CliError::usage(format!("sigma-polynomial '{input}': {e}")))?;
    // either bare coefficient arrays or the full {"ring":..,"coeffs":..} form
    if let Some(obj) = v.as_object() {
        if let Some(coeffs) = obj.get("coeffs") {
            if let Some(ring_field) = obj.get("ring") {
                let declared = formats::ring_from_json(ring_field).map_err(CliError::usage)?;
                if declared.id() != ring.id() {
                    return Err(CliError::usage(format!(
                        "polynomial declares {} but the command targets {}",
                        declared.id(),
                        ring.id()
                    )));
                }
            }
            return formats::poly_from_json(coeffs, ring).map_err(CliError::usage);
        }
    }
    formats::poly_from_json(&v, ring).map_err(CliError::usage)
}

fn run_skew(cmd: &SkewCmd) -> Result<CmdOutput, CliError> {
    match cmd {
        SkewCmd::Annihilator { ring, beta, method } => {
            let r = build_ring(ring)?;
            let basis = parse_beta(beta, &r)?;
            let (poly, name) = match method {
                AnnihilatorMethod::Recursive => (
                    annihilator_recursive(&r, &basis).map_err(CliError::from)?,
                    "recursive",
                ),
                AnnihilatorMethod::Determinant => (
                    annihilator_determinant(&r, &basis).map_err(CliError::from)?,
                    "determinant",
                ),
            };
            let other = match method {
                AnnihilatorMethod::Recursive => annihilator_determinant(&r, &basis),
                AnnihilatorMethod::Determinant => annihilator_recursive(&r, &basis),
            };
            let agrees = other.map(|o| o == poly).unwrap_or(false);
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "method": name,
                    "annihilator": formats::poly_json(&poly),
                    "constructions_agree": agrees,
                }),
                format!(
                    "annihilator coefficients (sigma^0 first): {:?}",
                    poly.coeffs
                ),
            ))
        }
        SkewCmd::Divide { ring, f, g } => {
            let r = build_ring(ring)?;
            let fp = parse_poly_arg(f, &r)?;
            let gp = parse_poly_arg(g, &r)?;
            let (q, rem) = right_divide(&r, &fp, &gp).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "quotient": formats::poly_json(&q),
                    "remainder": formats::poly_json(&rem),
                }),
                format!("q = {:?}, r = {:?}", q.coeffs, rem.coeffs),
            ))
        }
        SkewCmd::Normcheck { ring, f, ell } => {
            let r = build_ring(ring)?;
            let fp = parse_poly_arg(f, &r)?;
            let check = norm_condition_check(&r, &fp, *ell).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "holds": check.holds,
                    "norm_value": formats::elem_json(&check.norm_value),
                    "expected": formats::elem_json(&check.expected),
                }),
                format!(
                    "norm condition {}: Norm(f_0/f_ell) = {:?}, expected {:?}",
                    if check.holds { "holds" } else { "fails" },
                    check.norm_value.coeffs,
                    check.expected.coeffs
                ),
            ))
        }
        SkewCmd::Matrep { ring, f } => {
            let r = build_ring(ring)?;
            let fp = parse_poly_arg(f, &r)?;
            let rep = matrix_rep(&r, &fp, &r.power_basis()).map_err(CliError::from)?;
            let rows: Vec<Vec<u64>> = (0..rep.rows())
                .map(|i| (0..rep.cols()).map(|j| rep.at(i, j)).collect())
                .collect();
            Ok(CmdOutput::new(
                json!({
                    "ring": formats::ring_json(&r),
                    "matrix": rows,
                }),
                rows.iter()
                    .map(|row| format!("{row:?}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            ))
        }
    }
}

fn parse_lattices(
    input: &str,
    backend: Backend,
    d: Option<usize>,
) -> Result<Vec<Matrix>, CliError> {
    let parts = expr::split_top_level(input, ',');
    if parts.is_empty() {
        return Err(CliError::usage("empty lattice list"));
    }
    parts
        .iter()
        .map(|part| expr::parse_matrix(part, backend, d).map_err(CliError::usage))
        .collect()
}

fn run_bt(cmd: &BtCmd) -> Result<CmdOutput, CliError> {
    match cmd {
        BtCmd::Canon { backend, d, matrix } => {
            let b = backend.resolve()?;
            let m = expr::parse_matrix(matrix, b, *d).map_err(CliError::usage)?;
            let class = LatticeClass::new(&m).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                formats::lattice_json(&class),
                format!("{}", class.matrix()),
            ))
        }
        BtCmd::Adjacent { backend, d, m1, m2 } => {
            let b = backend.resolve()?;
            let c1 = LatticeClass::new(&expr::parse_matrix(m1, b, *d).map_err(CliError::usage)?)
                .map_err(CliError::from)?;
            let c2 = LatticeClass::new(&expr::parse_matrix(m2, b, *d).map_err(CliError::usage)?)
                .map_err(CliError::from)?;
            let adj = adjacent(&c1, &c2).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                json!({"adjacent": adj}),
                format!("adjacent: {adj}"),
            ))
        }
        BtCmd::Hull {
            backend,
            d,
            lattices,
        } => {
            let b = backend.resolve()?;
            let gamma = parse_lattices(lattices, b, *d)?;
            let hull = convex_hull(&gamma).map_err(CliError::from)?;
            let human = format!(
                "{} vertices:\n{}",
                hull.vertices.len(),
                hull.vertices
                    .iter()
                    .map(|v| v.matrix().to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            Ok(CmdOutput::new(formats::hull_json(&hull), human))
        }
        BtCmd::Member {
            backend,
            d,
            lattice,
            lattices,
        } => {
            let b = backend.resolve()?;
            let class =
                LatticeClass::new(&expr::parse_matrix(lattice, b, *d).map_err(CliError::usage)?)
                    .map_err(CliError::from)?;
            let gamma = parse_lattices(lattices, b, *d)?;
            let hull = convex_hull(&gamma).map_err(CliError::from)?;
            let member = hull_member(&class, &hull).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                json!({"member": member, "vertex_count": hull.vertices.len()}),
                format!("member: {member}"),
            ))
        }
    }
}

fn parse_matrix_family(input: &str, backend: Backend) -> Result<Vec<Matrix>, CliError> {
    // a JSON list of matrices with standalone scalar encodings is accepted
    // alongside the compact semicolon-separated expression form
    if let Ok(Value::Array(list)) = serde_json::from_str::<Value>(input) {
        if list
            .first()
            .and_then(|m| m.as_array())
            .and_then(|rows| rows.first())
            .and_then(|r| r.as_array())
            .and_then(|row| row.first())
            .map(|e| e.is_object())
            .unwrap_or(false)
        {
            let mats: Vec<Matrix> = list
                .iter()
                .map(formats::matrix_from_scalar_json)
                .collect::<Result<_, _>>()
                .map_err(CliError::usage)?;
            if mats.iter().any(|m| m.backend() != backend) {
                return Err(CliError::usage(
                    "JSON matrices use a different backend than the command",
                ));
            }
            return Ok(mats);
        }
    }
    let parts = expr::split_top_level(input, ';');
    if parts.is_empty() {
        return Err(CliError::usage("empty matrix family"));
    }
    parts
        .iter()
        .map(|part| expr::parse_matrix(part, backend, None).map_err(CliError::usage))
        .collect()
}

fn run_mustafin(cmd: &MustafinCmd) -> Result<CmdOutput, CliError> {
    match cmd {
        MustafinCmd::Fiber {
            backend,
            d,
            lattices,
        } => {
            let b = backend.resolve()?;
            let gamma = parse_lattices(lattices, b, *d)?;
            let report = special_fiber_components(&gamma).map_err(CliError::from)?;
            let mut out = CmdOutput::new(
                formats::fiber_json(&report, gamma.len()),
                format!(
                    "{} hull vertices, {} components",
                    report.reports.len(),
                    report.components().count()
                ),
            );
            if report.finite_residue_field {
                out.warnings.push(
                    "finite residue field: the component classification theorem assumes an \
                     infinite residue field"
                        .into(),
                );
            }
            Ok(out)
        }
        MustafinCmd::Mpdim { backend, matrices } => {
            let b = backend.resolve()?;
            let mats = parse_matrix_family(matrices, b)?;
            let report = mp_dimension(&mats).map_err(CliError::from)?;
            let bridges = assemble_bridges(&mats).map_err(CliError::from)?;
            let mut payload = formats::mp_json(&report);
            payload["bridges"] =
                Value::Array(bridges.iter().map(formats::matrix_scalar_json).collect());
            Ok(CmdOutput::new(
                payload,
                format!(
                    "saturated: {}, multi-projective dimension: {}",
                    report.saturated, report.mp_dimension
                ),
            ))
        }
        MustafinCmd::Criterion { backend, matrices } => {
            let b = backend.resolve()?;
            let mats = parse_matrix_family(matrices, b)?;
            let report = basis_criterion(&mats).map_err(CliError::from)?;
            Ok(CmdOutput::new(
                formats::mp_json(&report),
                format!(
                    "saturated: {}, dimension: {}, standard class in hull: {}",
                    report.saturated,
                    report.mp_dimension,
                    report
                        .hull_contains_standard
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "not computed".into())
                ),
            ))
        }
    }
}
