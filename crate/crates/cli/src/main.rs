//! `btorders`: classify orders, draw branches, compute Gorenstein closures,
//! build and check ghost presentations, and run the self-test suite.
//!
//! Results go to stdout as JSON (or DOT); diagnostics go to stderr.

use std::collections::HashSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btorders_core::ghost::{ghost_check, GhostPresentation, GhostReport};
use btorders_core::json::{
    descriptor_to_json, field_from_json, field_to_json, mat_from_json, order_basis_json,
    order_from_json, order_report, presentation_from_json, presentation_to_json, vertex_from_json,
    vertex_to_json,
};
use btorders_core::matrix::Mat2;
use btorders_core::orders::{
    branch_matrix, branch_oracle, intersect_vertices, BranchTarget, Order,
};
use btorders_core::selftest::{self, Config, Golden};
use btorders_core::tree::{to_dot, Vertex};
use btorders_core::{Error, Field};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const MAX_RADIUS: u64 = 6;
const MAX_Q: u64 = 5;

#[derive(Parser)]
#[command(
    name = "btorders",
    version,
    about = "Orders in 2x2 matrix algebras over local fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discriminant, Gorenstein closure, Bass/Eichler classification and branch of an order.
    Classify { file: PathBuf },
    /// Gorenstein closure `(r, R̃)` with `R = O + π^r R̃`.
    Closure { file: PathBuf },
    /// Branch of an order or matrix, optionally cross-checked on a ball.
    Branch {
        file: PathBuf,
        /// Scan the ball of this radius around the center (at most 6).
        #[arg(long)]
        radius: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads for the scan.
        #[arg(long, env = "BTORDERS_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Write the result here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build a ghost presentation of an order, or check a given one.
    Ghost {
        #[arg(value_enum)]
        mode: GhostMode,
        file: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        /// Replacement for the bundled golden fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GhostMode {
    Construct,
    Verify,
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
    report: Option<Value>,
}

impl Failure {
    fn new(code: u8, kind: &str, message: impl Into<String>) -> Failure {
        Failure {
            code,
            kind: kind.into(),
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NonIntegral | Error::NotFull | Error::NotIntegral | Error::NotFullRank => 3,
            Error::VerificationFailed(_) => 4,
            _ => 2,
        };
        Failure::new(code, e.kind(), e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

enum Problem {
    Order(Order),
    Matrix(Mat2),
    Presentation(GhostPresentation),
}

struct ProblemFile {
    field: Option<Field>,
    problem: Problem,
    options: Value,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(2, "Io", e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::new(2, "Io", format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::new(2, "Parse", format!("invalid JSON: {e}")))
}

fn load(path: &Path) -> Result<ProblemFile, Failure> {
    let v = read_json(path)?;
    let options = v.get("options").cloned().unwrap_or(Value::Null);
    if v.get("extension").is_some() {
        let p = presentation_from_json(&v)?;
        return Ok(ProblemFile {
            field: None,
            problem: Problem::Presentation(p),
            options,
        });
    }
    if let Some(p) = v.get("presentation") {
        let p = presentation_from_json(p)?;
        return Ok(ProblemFile {
            field: None,
            problem: Problem::Presentation(p),
            options,
        });
    }
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("missing \"field\"".into()))?,
    )?;
    let problem = if v.get("generators").is_some() || v.get("basis").is_some() {
        Problem::Order(order_from_json(&v)?)
    } else if let Some(m) = v.get("matrix") {
        Problem::Matrix(mat_from_json(&field, m)?)
    } else if let Some(vs) = v.get("vertices").and_then(Value::as_array) {
        let vs = vs
            .iter()
            .map(|x| vertex_from_json(&field, x))
            .collect::<Result<Vec<_>, _>>()?;
        Problem::Order(intersect_vertices(&vs)?)
    } else {
        return Err(Error::Parse(
            "expected \"generators\", \"matrix\", \"vertices\" or \"presentation\"".into(),
        )
        .into());
    };
    Ok(ProblemFile {
        field: Some(field),
        problem,
        options,
    })
}

fn need_order(pf: ProblemFile, cmd: &str) -> Result<Order, Failure> {
    match pf.problem {
        Problem::Order(o) => Ok(o),
        _ => Err(Error::Parse(format!("{cmd} needs \"generators\" or \"vertices\"")).into()),
    }
}

fn cmd_classify(file: &Path) -> CmdResult {
    let o = need_order(load(file)?, "classify")?;
    Ok(order_report(&o)?)
}

fn cmd_closure(file: &Path) -> CmdResult {
    let o = need_order(load(file)?, "closure")?;
    let (r, c) = o.closure();
    Ok(json!({
        "field": field_to_json(o.field()),
        "basis": order_basis_json(&o),
        "r": r,
        "closure": {"field": field_to_json(c.field()), "basis": order_basis_json(&c)},
        "closure_disc_valuation": c.disc_valuation(),
    }))
}

fn cmd_branch(
    file: &Path,
    radius: Option<u64>,
    format: Format,
    jobs: usize,
    output: Option<&Path>,
) -> Result<String, Failure> {
    let pf = load(file)?;
    let field = pf
        .field
        .clone()
        .ok_or_else(|| Error::Parse("branch needs an order or a matrix".into()))?;
    let (descriptor, target) = match &pf.problem {
        Problem::Order(o) => (o.branch(), BranchTarget::Order(o)),
        Problem::Matrix(m) => (branch_matrix(m)?, BranchTarget::Matrix(m)),
        Problem::Presentation(_) => {
            return Err(Error::Parse("branch needs an order or a matrix".into()).into())
        }
    };
    let radius = radius
        .or_else(|| pf.options.get("radius").and_then(Value::as_u64))
        .or(if format == Format::Dot { Some(2) } else { None });
    let center = match pf.options.get("center") {
        Some(c) => vertex_from_json(&field, c)?,
        None => Vertex::standard(&field),
    };

    let mut out = json!({"descriptor": descriptor_to_json(&descriptor)});
    let mut dot = None;
    if let Some(r) = radius {
        if r > MAX_RADIUS || field.q() > MAX_Q {
            return Err(Error::BadParams(format!(
                "scan needs radius ≤ {MAX_RADIUS} and q ≤ {MAX_Q}"
            ))
            .into());
        }
        let ball = center.ball(r);
        let members = branch_oracle(&target, &center, r, jobs);
        let marked: HashSet<Vertex> = members.iter().cloned().collect();
        let disagree: Vec<&Vertex> = ball
            .iter()
            .filter(|v| descriptor.contains(v) != marked.contains(v))
            .collect();
        if !disagree.is_empty() {
            return Err(Failure::new(
                4,
                "OracleMismatch",
                format!(
                    "descriptor and scan disagree at {} vertices, first {}",
                    disagree.len(),
                    disagree[0].label()
                ),
            ));
        }
        out["window"] = json!({
            "center": vertex_to_json(&center),
            "radius": r,
            "size": ball.len(),
            "members": members.iter().map(vertex_to_json).collect::<Vec<_>>(),
        });
        dot = Some(to_dot(&ball, &marked));
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out).unwrap() + "\n",
        Format::Dot => dot.expect("dot output always has a window"),
    };
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::new(2, "Io", format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_ghost(mode: GhostMode, file: &Path) -> CmdResult {
    let pf = load(file)?;
    match (mode, pf.problem) {
        (GhostMode::Verify, Problem::Presentation(p)) => {
            let report = presentation_to_json(&p);
            if report["verified"] == json!(true) {
                Ok(report)
            } else {
                Err(Failure {
                    report: Some(report),
                    ..Failure::new(
                        5,
                        "NotVerified",
                        "the ghost intersection differs from the claimed order",
                    )
                })
            }
        }
        (GhostMode::Verify, _) => {
            Err(Error::Parse("ghost verify needs a presentation".into()).into())
        }
        (GhostMode::Construct, Problem::Order(o)) => Ok(match ghost_check(&o)? {
            GhostReport::GhostRealized {
                exponent,
                presentation,
            } => json!({
                "ghost": true,
                "exponent": exponent,
                "presentation": presentation_to_json(&presentation),
            }),
            GhostReport::NotGhost {
                exponent,
                closure_width,
            } => json!({
                "ghost": false,
                "exponent": exponent,
                "closure_width": closure_width,
            }),
        }),
        (GhostMode::Construct, _) => {
            Err(Error::Parse("ghost construct needs an order".into()).into())
        }
    }
}

fn cmd_selftest(full: bool, seed: u64, fixtures: Option<&Path>) -> CmdResult {
    let golden = match fixtures {
        Some(p) => Golden::load(p)?,
        None => Golden::builtin(),
    };
    let cfg = Config { full, seed, golden };
    let results = selftest::run_suite(&cfg, |r| eprintln!("{}", r.line()));
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} {}", r.id, r.name))
        .collect();
    let report = json!({
        "mode": if full { "full" } else { "quick" },
        "seed": seed,
        "passed": failed.is_empty(),
        "criteria": serde_json::to_value(&results).unwrap(),
    });
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(Failure {
            report: Some(report),
            ..Failure::new(
                1,
                "SelftestFailed",
                format!("failing criteria: {}", failed.join(", ")),
            )
        })
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<String, Failure> = match &cli.cmd {
        Cmd::Classify { file } => {
            cmd_classify(file).map(|v| serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Cmd::Closure { file } => {
            cmd_closure(file).map(|v| serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Cmd::Branch {
            file,
            radius,
            format,
            jobs,
            output,
        } => cmd_branch(file, *radius, *format, *jobs, output.as_deref()),
        Cmd::Ghost { mode, file } => {
            cmd_ghost(*mode, file).map(|v| serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Cmd::Selftest {
            quick: _,
            full,
            seed,
            fixtures,
        } => cmd_selftest(*full, *seed, fixtures.as_deref())
            .map(|v| serde_json::to_string_pretty(&v).unwrap() + "\n"),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            match f.report {
                Some(report) => emit(&report),
                None => emit(
                    &json!({"error": {"kind": f.kind, "message": f.message, "exit_code": f.code}}),
                ),
            }
            ExitCode::from(f.code)
        }
    }
}
