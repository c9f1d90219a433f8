//! JSON command-line front end.
//!
//! Every invocation prints one JSON document. Exit code 0 is success, 1 a
//! domain error (failed hypothesis, invalid object), 2 a parse or schema
//! error. Integers are JSON integers when they fit in `i64` and decimal
//! strings otherwise; rationals are `"num/den"` strings.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::bounds::{self, BoundRequest, BoundResult, BoundsError};
use crate::chabauty::{self, CurveFile, HyperellipticCurve, ResidueDisc};
use crate::chipfiring::{self, FiniteGraph, FiniteGraphFile, IntDivisor};
use crate::json::{int, q};
use crate::metric_graph::{
    canonical_divisor, check_slope_bound, is_canonical_section, max_abs_slope, slope_bound_constant, GraphDivisor,
    GraphFile, PLFunctionFile, VertexWeightedMetricGraph,
};
use crate::padic::PadicNumber;
use crate::series::{antiderivative, count_zeros, compute_np, SeriesLiteral, ValuationWindow};
use crate::{fixtures, trop_jacobian};

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Human-readable message for standard error.
    pub diagnostic: Option<String>,
    pub output: Value,
    pub code: u8,
}

#[derive(Parser, Debug)]
#[command(name = "tropchab", version, about = "Chabauty-Coleman bounds and tropical tools on JSON inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Uniform bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// N_p(r, N0).
    Np {
        p: u64,
        r: String,
        #[arg(allow_negative_numbers = true)]
        n0: i64,
    },
    /// Hyperelliptic curves.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Metric graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Chip-firing on finite graphs.
    #[command(subcommand)]
    Chip(ChipCmd),
    /// Laurent series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Condition g > 2·weight + valency at every vertex.
    Dagger { graph: PathBuf },
    /// Write the worked-example fixture files.
    Fixtures {
        #[arg(default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    Eval { request: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    Count {
        curve: PathBuf,
        p: u64,
    },
    Coleman {
        curve: PathBuf,
        p: u64,
        r: u64,
    },
    CheckPoint {
        curve: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Integral of x^i dx/y between t1 and t2 in the disc x = a0 + p·t.
    TinyInt {
        curve: PathBuf,
        p: u64,
        /// Disc centre `a0,b`.
        #[arg(allow_hyphen_values = true)]
        disc: String,
        i: usize,
        #[arg(allow_hyphen_values = true)]
        t1: String,
        #[arg(allow_hyphen_values = true)]
        t2: String,
        #[arg(long, default_value_t = 24)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    Canonical { graph: PathBuf },
    Genus { graph: PathBuf },
    SlopeCheck { graph: PathBuf, function: PathBuf },
    Jacobian { graph: PathBuf },
    Aj { graph: PathBuf, basepoint: String, point: String },
    Principal { graph: PathBuf, divisor: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ChipCmd {
    Rank { graph: PathBuf, divisor: PathBuf },
    Rr { graph: PathBuf, divisor: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    Zeros {
        series: PathBuf,
        #[arg(allow_hyphen_values = true)]
        window: String,
    },
    Antider { series: PathBuf },
}

enum Failure {
    /// Exit 2.
    Parse(String),
    /// Exit 1, with optional structured detail.
    Domain(String, Option<Value>),
}

fn parse_err(e: impl ToString) -> Failure {
    Failure::Parse(e.to_string())
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string(), None)
}

type Res = Result<Value, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if argv.get(1).is_some_and(|a| a == "--fixtures") {
        argv[1] = "fixtures".into();
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    diagnostic: None,
                    output: json!({ "help": text }),
                    code: 0,
                },
                _ => failure(Failure::Parse(text)),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(output) => Outcome {
            diagnostic: None,
            output,
            code: 0,
        },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    let (kind, message, detail, code) = match f {
        Failure::Parse(m) => ("parse", m, None, 2),
        Failure::Domain(m, d) => ("domain", m, d, 1),
    };
    let mut err = json!({ "kind": kind, "message": message.trim_end() });
    if let Some(d) = detail {
        err["detail"] = d;
    }
    Outcome {
        diagnostic: Some(message.trim_end().to_string()),
        output: json!({ "error": err }),
        code,
    }
}

fn dispatch(cmd: Command) -> Res {
    match cmd {
        Command::Bounds(BoundsCmd::Eval { request }) => bounds_eval(&request),
        Command::Np { p, r, n0 } => {
            let r = rational(&r)?;
            Ok(json!({ "Np": int(&compute_np(p, &r, n0).map_err(domain)?) }))
        }
        Command::Curve(c) => curve(c),
        Command::Graph(c) => graph(c),
        Command::Chip(c) => chip(c),
        Command::Series(c) => series(c),
        Command::Dagger { graph } => {
            let g = load_graph(&graph)?;
            let r = bounds::check_dagger(&g);
            Ok(json!({ "genus": g.genus(), "holds": r.holds, "violations": r.violations }))
        }
        Command::Fixtures { dir } => {
            let written = fixtures::write_all(&dir).map_err(domain)?;
            let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            Ok(json!({ "written": names }))
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    crate::parse_rational(s).ok_or_else(|| Failure::Parse(format!("not an exact rational: {s:?}")))
}

fn load_curve(path: &Path) -> Result<HyperellipticCurve, Failure> {
    read_json::<CurveFile>(path)?.build().map_err(domain)
}

fn load_graph(path: &Path) -> Result<VertexWeightedMetricGraph, Failure> {
    read_json::<GraphFile>(path)?.build().map_err(domain)
}

fn load_fgraph(path: &Path) -> Result<FiniteGraph, Failure> {
    read_json::<FiniteGraphFile>(path)?.build().map_err(domain)
}

fn bound_json(res: &BoundResult) -> Value {
    let hyps: Vec<Value> = res
        .hypotheses
        .iter()
        .map(|h| json!({ "name": h.name, "satisfied": h.satisfied }))
        .collect();
    let components: serde_json::Map<String, Value> =
        res.components.iter().map(|(k, v)| (k.clone(), int(v))).collect();
    let mut out = json!({
        "kind": res.kind.to_string(),
        "formula": res.formula,
        "hypotheses": hyps,
        "value": res.value.as_ref().map(int),
    });
    if !components.is_empty() {
        out["components"] = Value::Object(components);
    }
    out
}

fn bounds_eval(path: &Path) -> Res {
    let req: BoundRequest = read_json(path)?;
    let res = bounds::assess(&req).map_err(|e| match e {
        BoundsError::MissingParameter(_) | BoundsError::InvalidParameter(_) => parse_err(e),
        other => domain(other),
    })?;
    if res.value.is_none() {
        let msg = BoundsError::HypothesisFailure(res.failed()).to_string();
        return Err(Failure::Domain(msg, Some(bound_json(&res))));
    }
    Ok(bound_json(&res))
}

fn curve(cmd: CurveCmd) -> Res {
    match cmd {
        CurveCmd::Count { curve, p } => {
            let c = load_curve(&curve)?;
            let n = c.count_points_fp(p).map_err(domain)?;
            Ok(json!({ "p": p, "points_Fp": n }))
        }
        CurveCmd::Coleman { curve, p, r } => {
            let c = load_curve(&curve)?;
            let b = chabauty::coleman_bound_for_curve(&c, p, r).map_err(domain)?;
            Ok(json!({ "bound": b.bound, "points_Fp": b.points_fp }))
        }
        CurveCmd::CheckPoint { curve, x, y } => {
            let c = load_curve(&curve)?;
            let (xq, yq) = (rational(&x)?, rational(&y)?);
            Ok(json!({ "x": q(&xq), "y": q(&yq), "on_curve": c.is_rational_point(&xq, &yq) }))
        }
        CurveCmd::TinyInt {
            curve,
            p,
            disc,
            i,
            t1,
            t2,
            terms,
        } => {
            let c = load_curve(&curve)?;
            let (a0, b) = disc
                .split_once(',')
                .ok_or_else(|| Failure::Parse(format!("disc must be \"a0,b\", got {disc:?}")))?;
            let a0: BigInt = a0.trim().parse().map_err(|_| Failure::Parse(format!("bad a0 {a0:?}")))?;
            let b: i64 = b.trim().parse().map_err(|_| Failure::Parse(format!("bad b {b:?}")))?;
            let d = ResidueDisc::new(&c, p, a0, b).map_err(domain)?;
            let t1 = PadicNumber::exact(p, rational(&t1)?).map_err(domain)?;
            let t2 = PadicNumber::exact(p, rational(&t2)?).map_err(domain)?;
            let v = chabauty::tiny_integral(&c, &d, i, &t1, &t2, terms).map_err(domain)?;
            let valuation = match v.valuation().finite() {
                Some(k) => json!(k),
                None => json!("inf"),
            };
            let prec = v.absolute_precision();
            let residue = u32::try_from(prec).ok().and_then(|n| v.residue_mod(n));
            Ok(json!({
                "value": q(&v.to_rational()),
                "absolute_precision": prec,
                "residue": residue.as_ref().map(int),
                "valuation": valuation,
            }))
        }
    }
}

fn divisor_json(d: &BTreeMap<String, i64>) -> Value {
    json!(d)
}

fn graph(cmd: GraphCmd) -> Res {
    match cmd {
        GraphCmd::Canonical { graph } => {
            let g = load_graph(&graph)?;
            let k = canonical_divisor(&g);
            Ok(json!({ "divisor": divisor_json(&k.to_json(&g)), "degree": k.degree(), "genus": g.genus() }))
        }
        GraphCmd::Genus { graph } => {
            let g = load_graph(&graph)?;
            Ok(json!({ "genus": g.genus(), "cycle_rank": g.cycle_rank() }))
        }
        GraphCmd::SlopeCheck { graph, function } => {
            let g = load_graph(&graph)?;
            let f = read_json::<PLFunctionFile>(&function)?.build(&g).map_err(domain)?;
            let canon = is_canonical_section(&f, &g);
            Ok(json!({
                "canonical_section": canon.ok,
                "witness": canon.witness.map(|x| g.point_name(&x)),
                "max_abs_slope": max_abs_slope(&f),
                "bound": slope_bound_constant(g.genus(), false),
                "bound_no_genus_zero_leaves": slope_bound_constant(g.genus(), true),
                "holds": check_slope_bound(&f, &g),
            }))
        }
        GraphCmd::Jacobian { graph } => {
            let g = load_graph(&graph)?;
            let lat = trop_jacobian::period_lattice(&g);
            let gram: Vec<Vec<Value>> = lat.gram.iter().map(|r| r.iter().map(q).collect()).collect();
            let cycles: Vec<BTreeMap<String, i64>> = lat
                .basis
                .cycles
                .iter()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .filter(|(_, s)| **s != 0)
                        .map(|(e, s)| (g.edges()[e].id.clone(), *s))
                        .collect()
                })
                .collect();
            Ok(json!({ "rank": lat.rank(), "cycles": cycles, "gram": gram }))
        }
        GraphCmd::Aj { graph, basepoint, point } => {
            let g = load_graph(&graph)?;
            let x0 = g.parse_point(&basepoint).map_err(parse_err)?;
            let x = g.parse_point(&point).map_err(parse_err)?;
            let lat = trop_jacobian::period_lattice(&g);
            let image: Vec<Value> = trop_jacobian::abel_jacobi(&g, &lat, &x0, &x).iter().map(q).collect();
            Ok(json!({ "image": image }))
        }
        GraphCmd::Principal { graph, divisor } => {
            let g = load_graph(&graph)?;
            let map: BTreeMap<String, i64> = read_json(&divisor)?;
            let d = GraphDivisor::from_json(&g, &map).map_err(parse_err)?;
            let principal = trop_jacobian::is_principal(&g, &d).map_err(domain)?;
            Ok(json!({ "degree": d.degree(), "principal": principal }))
        }
    }
}

fn load_divisor(g: &FiniteGraph, path: &Path) -> Result<IntDivisor, Failure> {
    let map: BTreeMap<String, i64> = read_json(path)?;
    g.divisor_from_map(&map).map_err(parse_err)
}

fn chip(cmd: ChipCmd) -> Res {
    match cmd {
        ChipCmd::Rank { graph, divisor } => {
            let g = load_fgraph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            Ok(json!({ "rank": chipfiring::bn_rank(&g, &d), "degree": d.degree() }))
        }
        ChipCmd::Rr { graph, divisor } => {
            let g = load_fgraph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let rr = chipfiring::check_riemann_roch(&g, &d);
            Ok(json!({
                "rank": rr.rank,
                "dual_rank": rr.dual_rank,
                "degree": rr.degree,
                "genus": rr.genus,
                "holds": rr.holds,
            }))
        }
    }
}

fn series(cmd: SeriesCmd) -> Res {
    match cmd {
        SeriesCmd::Zeros { series, window } => {
            let f = read_json::<SeriesLiteral>(&series)?.to_series().map_err(parse_err)?;
            let w = ValuationWindow::parse(&window).map_err(parse_err)?;
            Ok(json!({ "zeros": count_zeros(&f, &w).map_err(domain)? }))
        }
        SeriesCmd::Antider { series } => {
            let f = read_json::<SeriesLiteral>(&series)?.to_series().map_err(parse_err)?;
            let a = antiderivative(&f).map_err(domain)?;
            Ok(serde_json::to_value(SeriesLiteral::from_series(&a)).expect("json"))
        }
    }
}
