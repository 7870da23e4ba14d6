mod output;
mod suites;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polycenter::center::{builtin, builtins_for, coordinate_map, CenterEvaluation, CoefficientVector, Shape};
use polycenter::dsl::{compile, parse, DslError};
use polycenter::lines::{contains, kimberling_line, realize, LineSystem, RealizedLine};
use polycenter::symmetry::{
    centers_coincident, centers_collinear, central_vectors, fixed_set, symmetry_group,
};
use polycenter::tangential::{incenter, incircle, tangent_lengths, verify_am_collinearity};
use polycenter::{tol, Polygon};

use suites::{parse_sizes, Suite};

#[derive(Parser)]
#[command(name = "polycenter", version, about = "Centers and central lines of labelled polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate built-in centers and/or a DSL center function.
    Centers {
        #[command(flatten)]
        input: Input,
        /// Every built-in whose domain admits the polygon size.
        #[arg(long)]
        all: bool,
        /// A built-in by name; repeatable.
        #[arg(long = "center", value_name = "NAME")]
        centers: Vec<String>,
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Line through two centers: equations and realized set.
    Line {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Test whether a coefficient vector lies on a line system.
    Membership {
        #[command(flatten)]
        input: Input,
        /// Line system JSON file {"n", "A"}.
        #[arg(long)]
        line: PathBuf,
        /// Comma-separated coefficients summing to 1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<f64>,
    },
    /// Symmetry group, fixed set, central vectors and center coincidences.
    Symmetry {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Incircle, tangent lengths, incenter and the collinearity check.
    Tangential {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a theorem suite over an input file or a seeded corpus.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Polygon file (one polygon or an array); generates a corpus if absent.
        #[arg(long = "in")]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Vertex counts for families with a free size: N or A..B.
        #[arg(long, default_value = "3..8")]
        n: String,
    },
    /// Parse and compile a center function, reporting symmetry and degree.
    Dsl {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct Input {
    /// Polygon JSON file {"n", "vertices": [[x, y], ...]}.
    #[arg(long = "in")]
    path: PathBuf,
}

#[derive(Args)]
struct ExprArgs {
    #[arg(long, conflicts_with = "expr_file")]
    expr: Option<String>,
    #[arg(long)]
    expr_file: Option<PathBuf>,
    /// Domain shape for the DSL function.
    #[arg(long, value_enum, default_value_t = ShapeArg::Any)]
    shape: ShapeArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Any,
    NonFlat,
    Convex,
    ConvexNoThreeCollinear,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Any => Shape::Any,
            ShapeArg::NonFlat => Shape::NonFlat,
            ShapeArg::Convex => Shape::Convex,
            ShapeArg::ConvexNoThreeCollinear => Shape::ConvexNoThreeCollinear,
        }
    }
}

/// Failure reported as `{"error", "kind"}` with exit code 1.
struct Failure {
    kind: &'static str,
    message: String,
    extra: Option<Box<(&'static str, Value)>>,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Failure {
        Failure { kind, message: message.to_string(), extra: None }
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = apply_tolerance_override().and_then(|()| run(cli.command));
    match result {
        Ok(v) => {
            println!("{}", output::render(v));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let mut v = json!({ "error": f.message, "kind": f.kind });
            if let Some((key, value)) = f.extra.map(|b| *b) {
                v[key] = value;
            }
            println!("{}", output::render(v));
            ExitCode::from(1)
        }
    }
}

fn apply_tolerance_override() -> Result<(), Failure> {
    let Ok(text) = std::env::var("POLYCENTER_TOL") else { return Ok(()) };
    match text.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => {
            tol::set_base(v);
            Ok(())
        }
        _ => Err(Failure::new("config", format!("POLYCENTER_TOL must be a positive number, got `{text}`"))),
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Centers { input, all, centers, expr, svg } => run_centers(&input.path, all, &centers, &expr, svg),
        Command::Line { input, g1, g2, svg } => run_line(&input.path, &g1, &g2, svg),
        Command::Membership { input, line, weights } => run_membership(&input.path, &line, weights),
        Command::Symmetry { input, svg } => run_symmetry(&input.path, svg),
        Command::Tangential { input, svg } => run_tangential(&input.path, svg),
        Command::Verify { suite, path, seed, count, n } => run_verify(suite, path, seed, count, &n),
        Command::Dsl { expr, n } => run_dsl(&expr, n),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn read_polygon(path: &Path) -> Result<Polygon, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::new("input", format!("{}: {e}", path.display())))
}

fn read_polygons(path: &Path) -> Result<Vec<Polygon>, Failure> {
    let text = read(path)?;
    let parsed: Value =
        serde_json::from_str(&text).map_err(|e| Failure::new("input", format!("{}: {e}", path.display())))?;
    let items = match parsed {
        Value::Array(items) => items,
        single => vec![single],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            serde_json::from_value(v)
                .map_err(|e| Failure::new("input", format!("{} polygon {i}: {e}", path.display())))
        })
        .collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn write_svg(path: Option<PathBuf>, scene: svg::Scene) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(&path, svg::render(&scene)).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn expr_source(args: &ExprArgs) -> Result<Option<String>, Failure> {
    match (&args.expr, &args.expr_file) {
        (Some(s), _) => Ok(Some(s.clone())),
        (None, Some(path)) => Ok(Some(read(path)?)),
        (None, None) => Ok(None),
    }
}

fn dsl_failure(e: DslError) -> Failure {
    let kind = match e {
        DslError::Syntax { .. } | DslError::IndexOutOfRange { .. } => "syntax",
        DslError::SymmetryViolation { .. } => "symmetry",
        DslError::DegreeInconsistent(_) => "degree",
        _ => "evaluation",
    };
    let mut f = Failure::new(kind, &e);
    match e {
        DslError::SymmetryViolation { witness, .. } => f.extra = Some(Box::new(("witness", to_json(&witness)))),
        DslError::Syntax { pos, .. } | DslError::IndexOutOfRange { pos, .. } => f.extra = Some(Box::new(("position", json!(pos)))),
        _ => {}
    }
    f
}

fn evaluation_json(e: &CenterEvaluation) -> Value {
    json!({ "name": e.name, "point": to_json(&e.point), "weights": e.coefficients.weights() })
}

fn run_centers(path: &Path, all: bool, names: &[String], expr: &ExprArgs, svg: Option<PathBuf>) -> Outcome {
    let p = read_polygon(path)?;
    let source = expr_source(expr)?;
    let mut functions = Vec::new();
    if all || (names.is_empty() && source.is_none()) {
        functions.extend(builtins_for(p.n()));
    }
    for name in names {
        functions.push(builtin(name).map_err(|e| Failure::new("unknown-center", e))?);
    }
    if let Some(src) = source {
        let e = parse(&src, p.n()).map_err(dsl_failure)?;
        functions.push(compile(e, p.n(), expr.shape.into()).map_err(dsl_failure)?.center_function("expr"));
    }
    let mut centers = Vec::new();
    let mut skipped = Vec::new();
    for g in &functions {
        match coordinate_map(g, &p) {
            Ok(e) => centers.push(e),
            Err(err) => skipped.push(json!({ "name": g.name(), "error": err.to_string() })),
        }
    }
    write_svg(
        svg,
        svg::Scene {
            polygon: &p,
            centers: centers.iter().map(|e| (e.name.clone(), e.point)).collect(),
            lines: vec![],
            circle: None,
        },
    )?;
    Ok(json!({
        "n": p.n(),
        "centers": centers.iter().map(evaluation_json).collect::<Vec<_>>(),
        "skipped": skipped,
    }))
}

fn run_line(path: &Path, g1: &str, g2: &str, svg: Option<PathBuf>) -> Outcome {
    let p = read_polygon(path)?;
    let f1 = builtin(g1).map_err(|e| Failure::new("unknown-center", e))?;
    let f2 = builtin(g2).map_err(|e| Failure::new("unknown-center", e))?;
    let system = kimberling_line(&f1, &f2, &p).map_err(|e| Failure::new("line", e))?;
    let realized = realize(&system, &p).map_err(|e| Failure::new("line", e))?;
    let centers = [&f1, &f2]
        .iter()
        .filter_map(|g| coordinate_map(g, &p).ok())
        .map(|e| (e.name, e.point))
        .collect();
    write_svg(svg, svg::Scene { polygon: &p, centers, lines: vec![realized], circle: None })?;
    Ok(realized_json(&realized))
}

fn realized_json(r: &RealizedLine) -> Value {
    to_json(r)
}

fn run_membership(path: &Path, line: &Path, weights: Vec<f64>) -> Outcome {
    let p = read_polygon(path)?;
    let raw: LineSystem =
        serde_json::from_str(&read(line)?).map_err(|e| Failure::new("input", format!("{}: {e}", line.display())))?;
    let system = LineSystem::new(raw.n, raw.a).map_err(|e| Failure::new("line", e))?;
    if weights.len() != p.n() {
        return Err(Failure::new("input", format!("expected {} weights, got {}", p.n(), weights.len())));
    }
    let lambda = CoefficientVector::new(weights).map_err(|e| Failure::new("input", e))?;
    let point = lambda.apply(&p);
    Ok(json!({
        "contains": contains(&system, &p, &lambda),
        "point": to_json(&point),
        "realized": realized_json(&realize(&system, &p).map_err(|e| Failure::new("line", e))?),
    }))
}

fn run_symmetry(path: &Path, svg: Option<PathBuf>) -> Outcome {
    let p = read_polygon(path)?;
    let group = symmetry_group(&p).map_err(|e| Failure::new("symmetry", e))?;
    let set = fixed_set(&group);
    let vectors = central_vectors(&p).map_err(|e| Failure::new("symmetry", e))?;
    let evals: Vec<CenterEvaluation> = builtins_for(p.n()).iter().filter_map(|g| coordinate_map(g, &p).ok()).collect();
    let coincidence: Vec<Vec<bool>> = evals
        .iter()
        .map(|a| {
            evals
                .iter()
                .map(|b| centers_coincident(&p, &[a.clone(), b.clone()]).unwrap_or(false))
                .collect()
        })
        .collect();
    let collinear = centers_collinear(&p, &evals).ok();
    let elements: Vec<Value> = group
        .elements
        .iter()
        .map(|e| json!({ "relabelling": e.relabelling.to_string(), "isometry": to_json(&e.isometry) }))
        .collect();
    let lines = match set {
        polycenter::symmetry::FixedSet::Line { point, direction } => vec![RealizedLine::Line { point, direction }],
        _ => vec![],
    };
    write_svg(
        svg,
        svg::Scene {
            polygon: &p,
            centers: evals.iter().map(|e| (e.name.clone(), e.point)).collect(),
            lines,
            circle: None,
        },
    )?;
    Ok(json!({
        "order": group.order(),
        "elements": elements,
        "fixed_set": to_json(&set),
        "central_vectors": to_json(&vectors.vectors),
        "centers": evals.iter().map(|e| json!({ "name": e.name, "point": to_json(&e.point) })).collect::<Vec<_>>(),
        "coincident": coincidence,
        "collinear": collinear,
    }))
}

fn run_tangential(path: &Path, svg: Option<PathBuf>) -> Outcome {
    let p = read_polygon(path)?;
    let fail = |e: polycenter::tangential::TangentialError| Failure::new("tangential", e);
    let inc = incircle(&p).map_err(fail)?;
    let x = tangent_lengths(&p, &inc).map_err(fail)?;
    let center = incenter(&p).map_err(fail)?;
    let am = verify_am_collinearity(&p).map_err(fail)?;
    write_svg(
        svg,
        svg::Scene {
            polygon: &p,
            centers: vec![
                ("incenter".into(), am.incenter),
                ("boundary_centroid".into(), am.boundary_centroid),
                ("lamina_centroid".into(), am.lamina_centroid),
            ],
            lines: vec![],
            circle: Some((inc.center, inc.radius)),
        },
    )?;
    Ok(json!({
        "incircle": to_json(&inc),
        "tangent_lengths": x.x,
        "incenter": evaluation_json(&center),
        "am_collinearity": {
            "incenter": to_json(&am.incenter),
            "boundary_centroid": to_json(&am.boundary_centroid),
            "lamina_centroid": to_json(&am.lamina_centroid),
            "area": am.area,
            "pass": am.passed(),
        },
    }))
}

fn run_verify(suite: Suite, path: Option<PathBuf>, seed: u64, count: usize, sizes: &str) -> Outcome {
    let polygons = match path {
        Some(path) => read_polygons(&path)?,
        None => suite.corpus(seed, count, parse_sizes(sizes).map_err(|e| Failure::new("input", e))?),
    };
    let mut failures = Vec::new();
    for (i, p) in polygons.iter().enumerate() {
        if let Err(why) = suite.check(p) {
            failures.push(json!({ "index": i, "reason": why }));
        }
    }
    Ok(json!({
        "suite": suite.name(),
        "pass": polygons.len() - failures.len(),
        "fail": failures.len(),
        "failures": failures,
    }))
}

fn run_dsl(args: &ExprArgs, n: usize) -> Outcome {
    let src = expr_source(args)?.ok_or_else(|| Failure::new("input", "one of --expr or --expr-file is required"))?;
    if n < 3 {
        return Err(Failure::new("input", "n must be at least 3"));
    }
    let e = parse(&src, n).map_err(dsl_failure)?;
    let f = compile(e, n, args.shape.into()).map_err(dsl_failure)?;
    Ok(json!({
        "expr": f.expr.to_string(),
        "n": f.n,
        "verified_symmetry": f.verified_symmetry,
        "estimated_degree": f.estimated_degree,
        "checked": f.checked,
    }))
}
