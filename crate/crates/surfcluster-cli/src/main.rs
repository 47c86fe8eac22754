use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use surfcluster::cluster::{mutate_a_tropical, mutate_x_tropical, Chart, ChartKind, ChartValues};
use surfcluster::duality::{check_bracelet_amalgamation, family_rank, Duality};
use surfcluster::ensemble::{ensemble_pullback, muller_matrix, q_matrix};
use surfcluster::gluing::{dual_glue_tropical_with_id, glue_chart_with_id, glue_tropical_with_id};
use surfcluster::json::{ChartJson, LaminationJson, TriangulationJson, TropicalJson};
use surfcluster::lamination::{a_lamination_from_coords, dual_shear_coords, reconstruct_from_dual_shear, reconstruct_from_shear, shear_coords};
use surfcluster::poly::{LaurentPoly, PolyJson, Rat, RatJson};
use surfcluster::surface::{initial_triangulation, EdgeId, MarkedSurface, Triangulation};
use surfcluster::verify::{named_surface, run_suite, Suite};
use surfcluster::wilson::{loop_matrix, trace_monodromy, turning_pattern, wilson_line, Matrix2};
use surfcluster::Error;

#[derive(Parser)]
#[command(name = "surfcluster", version, about = "Exact cluster-ensemble computations on triangulated marked surfaces")]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    X,
    A,
}

impl From<Kind> for ChartKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::X => ChartKind::X,
            Kind::A => ChartKind::A,
        }
    }
}

#[derive(Args)]
struct TriIn {
    /// Triangulation JSON (stdin when omitted).
    #[arg(long)]
    tri: Option<PathBuf>,
}

#[derive(Args)]
struct ChartIn {
    /// Chart JSON (stdin when omitted).
    #[arg(long)]
    chart: Option<PathBuf>,
}

#[derive(Args)]
struct LamIn {
    /// Lamination JSON (stdin when omitted).
    #[arg(long)]
    lam: Option<PathBuf>,
    /// Triangulation for laminations that do not embed one.
    #[arg(long)]
    tri: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Describe a marked surface.
    New {
        #[arg(long, conflicts_with_all = ["genus", "punctures", "boundary"])]
        polygon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        punctures: usize,
        /// Special points on each boundary component, e.g. `1,1`.
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<usize>,
        /// A named surface such as `annulus` or `polygon-7`.
        #[arg(long, conflicts_with_all = ["polygon", "genus", "punctures", "boundary"])]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Standard ideal triangulation of a surface.
    Triangulate {
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Exchange matrix eps, frozen part m and p = eps + m.
    Exchange(TriIn),
    /// Flip an interior edge.
    Flip {
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        input: TriIn,
    },
    /// Disjoint union of two triangulations; ids of the second are shifted.
    Union {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Attach a label to an edge.
    Label {
        #[arg(long)]
        edge: String,
        #[arg(long)]
        name: String,
        #[command(flatten)]
        input: TriIn,
    },
    /// Initial symbolic chart of a triangulation.
    Chart {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        input: TriIn,
    },
    /// Cluster Poisson mutation of a chart.
    MutateX {
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        input: ChartIn,
    },
    /// Cluster K2 mutation of a chart.
    MutateA {
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        input: ChartIn,
    },
    /// Tropical mutation of a tropical vector (its `kind` picks the rule).
    MutateTrop {
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        input: ChartIn,
    },
    /// Shear (or dual shear) coordinates of a lamination.
    Shear {
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        input: LamIn,
    },
    /// Lamination with the given x coordinates (a-coordinates for kind a).
    Reconstruct {
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        input: ChartIn,
    },
    /// Wilson line of the single component of a lamination-style word.
    Wilson {
        /// Lamination JSON with exactly one component.
        #[arg(long)]
        word: PathBuf,
        /// Chart supplying the triangulation and, if numeric, the values.
        #[command(flatten)]
        input: ChartIn,
    },
    /// Ensemble map p = eps + m and the pullback of each X-variable.
    Ensemble(TriIn),
    /// The inverse matrix q.
    QMatrix(TriIn),
    /// Compatibility matrix pi and the A-side bracket coefficients -pi/4.
    Poisson(TriIn),
    /// Glue two boundary intervals of a triangulation, chart or lamination.
    Glue {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Label for the new edge.
        #[arg(long)]
        name: Option<String>,
        /// Glue laminations by x-additivity instead of x-check additivity.
        #[arg(long)]
        primal: bool,
        #[arg(long, conflicts_with_all = ["chart", "lam"])]
        tri: Option<PathBuf>,
        #[arg(long, conflicts_with = "lam")]
        chart: Option<PathBuf>,
        #[arg(long)]
        lam: Option<PathBuf>,
    },
    /// Duality map on an A-lamination.
    Ia(LamIn),
    /// Duality map on a P-lamination.
    Ix(LamIn),
    /// Whether the duality diagram commutes on an A-lamination.
    CheckDuality(LamIn),
    /// Bracelet amalgamation report for gluing `left` to `right`.
    CheckAmal {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        input: LamIn,
    },
    /// Exact rank of a family of Laurent polynomials.
    Rank {
        /// JSON array of polynomials.
        #[arg(long, conflicts_with = "surface")]
        family: Option<PathBuf>,
        /// Build the I_X (kind x) or I_A (kind a) family on a named surface.
        #[arg(long, requires = "bound")]
        surface: Option<String>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, value_enum, default_value = "x")]
        kind: Kind,
    },
    /// Run a named verification suite (`all` runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value = "square")]
        surface: String,
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long, env = "SURFCLUSTER_SEED", default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Schema(String),
    Domain(String),
    Io(String),
    /// Output already produced; the run itself reports failure.
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(s) => Failure::Schema(s),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn read_source(path: Option<&Path>) -> Res<(String, String)> {
    match path {
        Some(p) if p != Path::new("-") => {
            let s = fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {}", p.display(), e)))?;
            Ok((s, p.display().to_string()))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {}", e)))?;
            Ok((s, "stdin".into()))
        }
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn load<T: DeserializeOwned>(path: Option<&Path>) -> Res<T> {
    let (text, name) = read_source(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| Failure::Schema(format!("{} {}: {}", name, pointer(e.path()), e.inner())))
}

fn load_tri(path: Option<&Path>) -> Res<Triangulation> {
    let j: TriangulationJson = load(path)?;
    Ok(Triangulation::try_from(&j)?)
}

fn load_chart(path: Option<&Path>) -> Res<Chart> {
    let j: ChartJson = load(path)?;
    Ok(Chart::try_from(&j)?)
}

fn load_lam(input: &LamIn) -> Res<(LaminationJson, Option<Triangulation>)> {
    let tri = match &input.tri {
        Some(p) => Some(load_tri(Some(p))?),
        None => None,
    };
    if input.lam.is_none() && input.tri.is_none() {
        return Ok((load(None)?, None));
    }
    Ok((load(input.lam.as_deref())?, tri))
}

fn poly_out(p: &LaurentPoly, tri: &Triangulation, prefix: &str) -> Value {
    json!({
        "poly": PolyJson::from(p),
        "text": p.render(&|v| format!("{}_{}", prefix, tri.label(v))),
    })
}

fn matrix_out(m: &Matrix2, tri: &Triangulation) -> Value {
    let e = &m.entries;
    json!([[poly_out(&e[0][0], tri, "X"), poly_out(&e[0][1], tri, "X")], [poly_out(&e[1][0], tri, "X"), poly_out(&e[1][1], tri, "X")]])
}

fn rat_out(r: &Rat) -> RatJson {
    RatJson::from(r)
}

fn run(cli: &Cli) -> Res<Value> {
    Ok(match &cli.cmd {
        Cmd::Surface(SurfaceCmd::New { polygon, genus, punctures, boundary, name }) => {
            let s = match (polygon, name) {
                (Some(n), _) => MarkedSurface::polygon(*n)?,
                (None, Some(n)) => named_surface(n)?,
                (None, None) => MarkedSurface::new(*genus, *punctures, boundary)?,
            };
            val(&s)
        }
        Cmd::Triangulate { surface } => {
            let s: MarkedSurface = load(surface.as_deref())?;
            s.validate()?;
            val(&TriangulationJson::from(&initial_triangulation(&s)?))
        }
        Cmd::Exchange(i) => {
            let t = load_tri(i.tri.as_deref())?;
            let d = t.exchange_data();
            json!({ "epsilon": val(&d.epsilon), "m": val(&d.m), "p": val(&d.p) })
        }
        Cmd::Flip { edge, input } => {
            let t = load_tri(input.tri.as_deref())?;
            let (t2, r) = t.flip(t.find_edge(edge)?)?;
            json!({ "triangulation": val(&TriangulationJson::from(&t2)), "relabeling": val(&r) })
        }
        Cmd::Union { left, right } => {
            let l = load_tri(Some(left))?;
            let r = load_tri(Some(right))?;
            val(&TriangulationJson::from(&l.disjoint_union(&r)))
        }
        Cmd::Label { edge, name, input } => {
            let mut t = load_tri(input.tri.as_deref())?;
            let e = t.find_edge(edge)?;
            t.set_label(e, name)?;
            val(&TriangulationJson::from(&t))
        }
        Cmd::Chart { kind, input } => {
            let t = load_tri(input.tri.as_deref())?;
            val(&ChartJson::from(&Chart::initial(&t, (*kind).into())))
        }
        Cmd::MutateX { edge, input } | Cmd::MutateA { edge, input } => {
            let want = if matches!(cli.cmd, Cmd::MutateX { .. }) { ChartKind::X } else { ChartKind::A };
            let c = load_chart(input.chart.as_deref())?;
            if c.kind != want {
                return Err(Error::WrongChartKind(if want == ChartKind::X { "x" } else { "a" }).into());
            }
            let (c2, _) = c.mutate(c.tri.find_edge(edge)?)?;
            val(&ChartJson::from(&c2))
        }
        Cmd::MutateTrop { edge, input } => {
            let j: TropicalJson = load(input.chart.as_deref())?;
            let (v, kind) = j.parse()?;
            let k = v.tri.find_edge(edge)?;
            let (w, _) = match kind {
                ChartKind::X => mutate_x_tropical(&v, k)?,
                ChartKind::A => mutate_a_tropical(&v, k)?,
            };
            val(&TropicalJson::new(&w, kind))
        }
        Cmd::Shear { dual, input } => {
            let (j, tri) = load_lam(input)?;
            let lam = j.to_p(tri.as_ref())?;
            let v = if *dual { dual_shear_coords(&lam) } else { shear_coords(&lam) };
            val(&TropicalJson::new(&v, ChartKind::X))
        }
        Cmd::Reconstruct { dual, input } => {
            let j: TropicalJson = load(input.chart.as_deref())?;
            let (v, kind) = j.parse()?;
            match kind {
                ChartKind::X => {
                    let lam = if *dual { reconstruct_from_dual_shear(&v.tri, &v)? } else { reconstruct_from_shear(&v.tri, &v)? };
                    val(&LaminationJson::from_p(&lam))
                }
                ChartKind::A => val(&LaminationJson::from_a(&a_lamination_from_coords(&v.tri, &v)?)),
            }
        }
        Cmd::Wilson { word, input } => {
            let c = load_chart(input.chart.as_deref())?;
            let w: LaminationJson = load(Some(word))?;
            let lam = w.to_a(Some(&c.tri))?;
            let [(curve, weight)] = lam.components.as_slice() else {
                return Err(Failure::Schema(format!("{} /components: exactly one component is required", word.display())));
            };
            let tw = turning_pattern(&c.tri, curve)?;
            let m = if tw.cyclic { loop_matrix(&tw)? } else { wilson_line(&tw)? };
            let mut out = json!({ "word": val(&tw), "matrix": matrix_out(&m, &c.tri) });
            if tw.cyclic {
                let p = weight.to_integer().try_into().ok().filter(|_| weight.is_integer()).filter(|&p: &u64| p > 0);
                let p = p.ok_or_else(|| Failure::Domain("loop weight must be a positive integer".into()))?;
                out["trace"] = poly_out(&trace_monodromy(&tw, p)?, &c.tri, "X");
            }
            if let ChartValues::Numeric(vals) = &c.values {
                let ev = m.eval(vals)?;
                out["value"] = json!(ev.iter().map(|r| r.iter().map(rat_out).collect::<Vec<_>>()).collect::<Vec<_>>());
            }
            out
        }
        Cmd::Ensemble(i) => {
            let t = load_tri(i.tri.as_deref())?;
            let pb: BTreeMap<EdgeId, PolyJson> = ensemble_pullback(&t).into_iter().map(|(k, m)| (k, PolyJson::from(&LaurentPoly::monomial(m)))).collect();
            json!({ "p": val(&t.exchange_data().p), "pullback": val(&pb) })
        }
        Cmd::QMatrix(i) => val(&q_matrix(&load_tri(i.tri.as_deref())?)?),
        Cmd::Poisson(i) => {
            let t = load_tri(i.tri.as_deref())?;
            let pi = muller_matrix(&t)?;
            json!({ "pi": val(&pi), "bracket": val(&pi.to_rat().scale(Rat::new((-1).into(), 4.into()))) })
        }
        Cmd::Glue { left, right, name, primal, tri, chart, lam } => {
            let label = |t: &mut Triangulation, e: EdgeId| -> Res<()> {
                if let Some(n) = name {
                    t.set_label(e, n)?;
                }
                Ok(())
            };
            if let Some(p) = lam {
                let j: LaminationJson = load(Some(p))?;
                let l = j.to_p(None)?;
                let (al, ar) = (l.tri.find_edge(left)?, l.tri.find_edge(right)?);
                let new = l.tri.next_id();
                let mut g = if *primal { glue_tropical_with_id(&l, al, ar, new)? } else { dual_glue_tropical_with_id(&l, al, ar, new)? };
                label(&mut g.tri, new)?;
                val(&LaminationJson::from_p(&g))
            } else if let Some(p) = chart {
                let c = load_chart(Some(p))?;
                let (al, ar) = (c.tri.find_edge(left)?, c.tri.find_edge(right)?);
                let (mut g, _) = glue_chart_with_id(&c, al, ar, c.tri.next_id())?;
                label(&mut g.tri, c.tri.next_id())?;
                val(&ChartJson::from(&g))
            } else {
                let t = load_tri(tri.as_deref())?;
                let (al, ar) = (t.find_edge(left)?, t.find_edge(right)?);
                let (mut g, _) = t.glue_with_id(al, ar, t.next_id())?;
                label(&mut g, t.next_id())?;
                val(&TriangulationJson::from(&g))
            }
        }
        Cmd::Ia(i) => {
            let (j, tri) = load_lam(i)?;
            let lam = j.to_a(tri.as_ref())?;
            let d = Duality::new(&lam.tri)?;
            poly_out(&d.i_a(&lam)?, &lam.tri, "X")
        }
        Cmd::Ix(i) => {
            let (j, tri) = load_lam(i)?;
            let lam = j.to_p(tri.as_ref())?;
            let d = Duality::new(&lam.tri)?;
            json!({
                "value": poly_out(&d.i_x(&lam)?, &lam.tri, "A"),
                "curves": poly_out(&d.i_x_curves(&lam)?, &lam.tri, "A"),
            })
        }
        Cmd::CheckDuality(i) => {
            let (j, tri) = load_lam(i)?;
            let lam = j.to_a(tri.as_ref())?;
            let d = Duality::new(&lam.tri)?;
            json!({ "commutes": d.check_ensemble_compatibility(&lam)? })
        }
        Cmd::CheckAmal { left, right, input } => {
            let (j, tri) = load_lam(input)?;
            let lam = j.to_p(tri.as_ref())?;
            let (al, ar) = (lam.tri.find_edge(left)?, lam.tri.find_edge(right)?);
            let new = lam.tri.next_id();
            let rep = check_bracelet_amalgamation(&lam, al, ar, new)?;
            let glued_tri = lam.tri.glue_with_id(al, ar, new)?.0;
            json!({
                "status": val(&rep.status),
                "equal": rep.equal,
                "is_term": rep.is_term,
                "restricted": poly_out(&rep.restricted, &glued_tri, "A"),
                "glued": poly_out(&rep.glued, &glued_tri, "A"),
                "glued_nu": rep.glued_lamination_nu.iter().map(|(e, v)| (e.to_string(), rat_out(v))).collect::<BTreeMap<_, _>>(),
            })
        }
        Cmd::Rank { family, surface, bound, kind } => {
            let polys: Vec<LaurentPoly> = match (family, surface) {
                (Some(p), _) => {
                    let js: Vec<PolyJson> = load(Some(p))?;
                    js.iter().map(LaurentPoly::try_from).collect::<Result<_, _>>()?
                }
                (None, Some(s)) => family_on(s, bound.unwrap_or(1), (*kind).into())?,
                (None, None) => {
                    let js: Vec<PolyJson> = load(None)?;
                    js.iter().map(LaurentPoly::try_from).collect::<Result<_, _>>()?
                }
            };
            let r = family_rank(&polys);
            json!({ "size": polys.len(), "rank": r, "independent": r == polys.len() })
        }
        Cmd::Verify { suite, surface, bound, seed } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let tri = initial_triangulation(&named_surface(surface)?)?;
            let mut reports = Vec::new();
            for s in suites {
                reports.push(run_suite(s, &tri, *bound, *seed)?);
            }
            let out = json!({ "surface": surface, "bound": bound, "seed": seed, "reports": val(&reports) });
            if let Some(bad) = reports.iter().find(|r| !r.passed) {
                emit(cli, &out)?;
                return Err(Failure::Verify(format!("suite {} failed: {}", bad.suite, bad.counterexample.clone().unwrap_or_default())));
            }
            out
        }
    })
}

fn family_on(surface: &str, bound: i64, kind: ChartKind) -> Res<Vec<LaurentPoly>> {
    let tri = initial_triangulation(&named_surface(surface)?)?;
    let d = Duality::new(&tri)?;
    let ids = tri.edge_ids();
    let (lo, hi) = if kind == ChartKind::X { (-bound, bound) } else { (0, bound) };
    let width = (hi - lo + 1) as u64;
    let total = width.checked_pow(ids.len() as u32).filter(|&n| n <= 100_000).ok_or_else(|| Failure::Domain("family too large".into()))?;
    let mut out = Vec::new();
    for mut k in 0..total {
        let mut entries = BTreeMap::new();
        for &e in &ids {
            entries.insert(e, Rat::from_integer((lo + (k % width) as i64).into()));
            k /= width;
        }
        let v = surfcluster::cluster::TropicalVector::new(&tri, entries)?;
        out.push(match kind {
            ChartKind::X => d.i_x(&reconstruct_from_dual_shear(&tri, &v)?)?,
            ChartKind::A => d.i_a(&a_lamination_from_coords(&tri, &v)?)?,
        });
    }
    Ok(out)
}

fn val<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn emit(cli: &Cli, v: &Value) -> Res<()> {
    let mut text = serde_json::to_string_pretty(v).expect("json");
    text.push('\n');
    match &cli.json_out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {}", p.display(), e))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|v| emit(&cli, &v));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Schema(m)) => {
            eprintln!("schema error: {}", m);
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("io error: {}", m);
            ExitCode::from(3)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("{}", m);
            ExitCode::from(1)
        }
    }
}
