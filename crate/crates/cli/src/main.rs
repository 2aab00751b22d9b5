//! Command-line front end: parse rings, maps and points, dispatch to the
//! library, run verification suites.
//!
//! Exit codes: 0 on success or a fully verified run, 1 when a verification
//! suite reports a failure (a witness is printed), 2 on usage errors.
//! Randomized suites are reproducible from `--seed`; identical invocations
//! produce byte-identical output.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use diffcalc::carnot::{pansu_diff1, CarnotAlgebra};
use diffcalc::diffquot::{
    bary_diff1_eval, bary_diff1_sym, diff1_eval, diffk_sym_bounded, extendedk_sym_bounded,
    q_deform_bounded, MultiIndex, DEFAULT_MAX_ORDER,
};
use diffcalc::divdiff::{divdiff_explicit, divdiff_rec, divdiff_sym, slope_coefficients, taylor_direct};
use diffcalc::parse::{parse_element, parse_map, parse_ring};
use diffcalc::polymap::PolyMap;
use diffcalc::rings::{Ring, RingElement};
use diffcalc::scalarext::{
    automorphism_search, ExtensionRing, TimeAssignment, DEFAULT_SEARCH_BOUND,
};
use diffcalc::verify::{run_all, run_suite, Suite, SUITES};

#[derive(Parser)]
#[command(
    name = "diffcalc",
    about = "Exact difference calculus over commutative rings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Difference quotient maps and their extensions.
    Dq {
        #[command(subcommand)]
        op: DqOp,
    },
    /// Divided differences of curves.
    Divdiff {
        #[command(subcommand)]
        op: DivDiffOp,
    },
    /// Taylor coefficient maps of f(x + t h).
    Taylor(TaylorArgs),
    /// Scalar-extension rings: structure constants and automorphisms.
    Extring {
        #[command(subcommand)]
        op: ExtringOp,
    },
    /// Carnot groups: group-level difference quotients.
    Carnot {
        #[command(subcommand)]
        op: CarnotOp,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Coefficient ring, e.g. `Q`, `Z/5`, `Q[a,b]`.
    #[arg(long, default_value = "Q")]
    ring: String,
    /// Polynomial map as comma-separated components in x0, x1, ...
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    /// Force the domain rank (otherwise inferred from the variables used).
    #[arg(long)]
    rank: Option<usize>,
}

impl MapArgs {
    fn build(&self) -> Result<(Ring, PolyMap), CliError> {
        let ring = parse_ring(&self.ring)?;
        let map = parse_map(&ring, &self.map, self.rank)?;
        Ok((ring, map))
    }
}

#[derive(Subcommand)]
enum DqOp {
    /// Evaluate the first-order quotient (f(x+tv) - f(x))/t.
    Eval {
        #[command(flatten)]
        map: MapArgs,
        /// Base point, comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Direction, comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Invertible time parameter.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Symbolic order-k quotient, defined at singular times as well.
    Sym {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Symbolic order-k extended map, components keyed by bit strings.
    Delta {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Depth-graded deformation of the order-k quotient.
    Qdeform {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Barycentric first-order quotient.
    Bary {
        #[command(flatten)]
        map: MapArgs,
        /// Evaluate at x (otherwise print the symbolic quotient).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
}

#[derive(Subcommand)]
enum DivDiffOp {
    /// Divided difference by the recursion.
    Rec {
        #[command(flatten)]
        map: MapArgs,
        /// Comma-separated points in the coefficient ring.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Divided difference by the explicit symmetric formula.
    Explicit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Symbolic divided difference in x0 .. xk.
    Sym {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct TaylorArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Number of coefficient maps to produce.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Also print a_1, a_2 computed from difference-quotient slopes.
    #[arg(long)]
    slopes: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum ExtringOp {
    /// Structure-constant table of the order-k extension ring.
    Table {
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// `symbolic`, or comma-separated values in canonical index order.
        #[arg(long, default_value = "symbolic", allow_hyphen_values = true)]
        time: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Exhaustive base-linear automorphism search (finite base, numeric time).
    Aut {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        time: String,
        /// Candidate bound for the search.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CarnotOp {
    /// Group-level first-order quotient of a map between Carnot groups.
    Pansu {
        /// Algebra definition file (JSON: base, grading, brackets).
        #[arg(long)]
        algebra: String,
        /// Target algebra file; defaults to the source algebra.
        #[arg(long)]
        target: Option<String>,
        /// Map components over the source coordinates x0, x1, ...
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

struct CliError {
    message: String,
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError { message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}

fn max_order() -> usize {
    std::env::var("DIFFCALC_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

fn search_bound() -> u64 {
    std::env::var("DIFFCALC_SEARCH_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SEARCH_BOUND)
}

fn parse_points(ring: &Ring, src: &str) -> Result<Vec<RingElement>, CliError> {
    src.split(',')
        .map(|p| Ok(parse_element(ring, p.trim())?))
        .collect()
}

fn render_vector(values: &[RingElement]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Dq { op } => dq(op),
        Command::Divdiff { op } => divdiff(op),
        Command::Taylor(args) => taylor(args),
        Command::Extring { op } => extring(op),
        Command::Carnot { op } => carnot(op),
        Command::Verify(args) => verify(args),
    }
}

fn dq(op: DqOp) -> Result<ExitCode, CliError> {
    match op {
        DqOp::Eval { map, x, v, t } => {
            let (ring, f) = map.build()?;
            let x = parse_points(&ring, &x)?;
            let v = parse_points(&ring, &v)?;
            let t = parse_element(&ring, &t)?;
            let out = diff1_eval(&f, &x, &v, &t)?;
            println!("f^[1](x, v, t) = {}", render_vector(&out));
        }
        DqOp::Sym { map, k, format } => {
            let (_, f) = map.build()?;
            let quotient = diffk_sym_bounded(&f, k, max_order())?;
            match format {
                Format::Json => {
                    let components: Vec<String> =
                        quotient.map.components().iter().map(|c| c.to_string()).collect();
                    println!(
                        "{}",
                        json!({
                            "k": k,
                            "vars": quotient.map.vars(),
                            "components": components,
                        })
                    );
                }
                _ => {
                    println!("f^[{k}] = {}", quotient.map);
                }
            }
        }
        DqOp::Delta { map, k, format } => {
            let (_, f) = map.build()?;
            let delta = extendedk_sym_bounded(&f, k, max_order())?;
            let n = delta.codomain_rank;
            match format {
                Format::Json => {
                    let mut space = serde_json::Map::new();
                    for a in MultiIndex::all(k) {
                        let block: Vec<String> = delta
                            .space_component(&a)?
                            .iter()
                            .map(|c| c.to_string())
                            .collect();
                        space.insert(a.to_string(), json!(block));
                    }
                    let mut time = serde_json::Map::new();
                    for a in MultiIndex::all_nonzero(k) {
                        time.insert(a.to_string(), json!(delta.time_component(&a)?.to_string()));
                    }
                    println!("{}", json!({ "k": k, "space": space, "time": time }));
                }
                _ => {
                    for a in MultiIndex::all(k) {
                        let block = delta.space_component(&a)?;
                        if n == 1 {
                            println!("w_{a} = {}", block[0]);
                        } else {
                            for (i, c) in block.iter().enumerate() {
                                println!("w_{a}_{i} = {c}");
                            }
                        }
                    }
                    for a in MultiIndex::all_nonzero(k) {
                        println!("t_{a} = {}", delta.time_component(&a)?);
                    }
                }
            }
        }
        DqOp::Qdeform { map, k, format } => {
            let (_, f) = map.build()?;
            let deformed = q_deform_bounded(&f, k, max_order())?;
            match format {
                Format::Json => {
                    let components: Vec<String> =
                        deformed.map.components().iter().map(|c| c.to_string()).collect();
                    println!(
                        "{}",
                        json!({ "k": k, "vars": deformed.map.vars(), "components": components })
                    );
                }
                _ => println!("deformed f^[{k}] = {}", deformed.map),
            }
        }
        DqOp::Bary { map, x, y, s, t } => {
            let (ring, f) = map.build()?;
            match (x, y, s, t) {
                (Some(x), Some(y), Some(s), Some(t)) => {
                    let x = parse_points(&ring, &x)?;
                    let y = parse_points(&ring, &y)?;
                    let s = parse_element(&ring, &s)?;
                    let t = parse_element(&ring, &t)?;
                    let out = bary_diff1_eval(&f, &x, &y, &s, &t)?;
                    println!("f^>1<(x, y; s, t) = {}", render_vector(&out));
                }
                (None, None, None, None) => {
                    let sym = bary_diff1_sym(&f)?;
                    println!("f^>1< = {sym}");
                }
                _ => {
                    return Err(CliError {
                        message: "provide all of --x --y --s --t, or none for the symbolic form"
                            .into(),
                    })
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn divdiff(op: DivDiffOp) -> Result<ExitCode, CliError> {
    match op {
        DivDiffOp::Rec { map, points } => {
            let (ring, f) = map.build()?;
            let pts = parse_points(&ring, &points)?;
            let out = divdiff_rec(&f, &pts)?;
            println!("f^<{}> = {}", pts.len() - 1, render_vector(&out));
        }
        DivDiffOp::Explicit { map, points } => {
            let (ring, f) = map.build()?;
            let pts = parse_points(&ring, &points)?;
            let out = divdiff_explicit(&f, &pts)?;
            println!("f^<{}> = {}", pts.len() - 1, render_vector(&out));
        }
        DivDiffOp::Sym { map, k, format } => {
            let (_, f) = map.build()?;
            let dd = divdiff_sym(&f, k)?;
            match format {
                Format::Json => {
                    let components: Vec<String> =
                        dd.components().iter().map(|c| c.to_string()).collect();
                    println!(
                        "{}",
                        json!({ "k": k, "vars": dd.vars(), "components": components })
                    );
                }
                _ => println!("f^<{k}> = {dd}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn taylor(args: TaylorArgs) -> Result<ExitCode, CliError> {
    let (_, f) = args.map.build()?;
    let coeffs = taylor_direct(&f, args.k)?;
    match args.format {
        Format::Json => {
            let list: Vec<Vec<String>> = coeffs
                .iter()
                .map(|a| a.components().iter().map(|c| c.to_string()).collect())
                .collect();
            let mut doc = json!({ "k": args.k, "coefficients": list });
            if args.slopes {
                let (a1, a2) = slope_coefficients(&f)?;
                doc["slopes"] = json!([a1.to_string(), a2.to_string()]);
            }
            println!("{doc}");
        }
        _ => {
            for (j, a) in coeffs.iter().enumerate() {
                println!("a_{} = {a}", j + 1);
            }
            if args.slopes {
                let (a1, a2) = slope_coefficients(&f)?;
                println!("slope a_1 = {a1}");
                println!("slope a_2 = {a2}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_time(ring: &Ring, k: usize, src: &str) -> Result<TimeAssignment, CliError> {
    if src.trim() == "symbolic" {
        return Ok(TimeAssignment::all_symbolic(k));
    }
    let values = parse_points(ring, src)?;
    if values.len() == 1 {
        return Ok(TimeAssignment::constant(k, &values[0]));
    }
    Ok(TimeAssignment::numeric(k, &values)?)
}

fn extring(op: ExtringOp) -> Result<ExitCode, CliError> {
    match op {
        ExtringOp::Table { ring, k, time, format } => {
            let base = parse_ring(&ring)?;
            let assignment = parse_time(&base, k, &time)?;
            let ext = ExtensionRing::build(&base, k, assignment)?;
            let basis = ext.basis().to_vec();
            let mut rows = Vec::new();
            for a in &basis {
                for b in &basis {
                    let coords = ext.product_coords(a, b)?;
                    for (g, c) in basis.iter().zip(&coords) {
                        if !c.is_zero() {
                            rows.push((a.to_string(), b.to_string(), g.to_string(), c.display_short()));
                        }
                    }
                }
            }
            match format {
                Format::Json => {
                    let list: Vec<_> = rows
                        .iter()
                        .map(|(a, b, g, c)| {
                            json!({ "alpha": a, "beta": b, "gamma": g, "coeff": c })
                        })
                        .collect();
                    println!("{}", json!({ "k": k, "constants": list }));
                }
                _ => {
                    for (a, b, g, c) in rows {
                        println!("{a}\t{b}\t{g}\t{c}");
                    }
                }
            }
        }
        ExtringOp::Aut { ring, k, time, bound, format } => {
            let base = parse_ring(&ring)?;
            let assignment = parse_time(&base, k, &time)?;
            if !assignment.is_fully_numeric() {
                return Err(CliError { message: "automorphism search needs numeric times".into() });
            }
            let ext = ExtensionRing::build(&base, k, assignment)?;
            let found = automorphism_search(&ext, bound.unwrap_or_else(search_bound))?;
            match format {
                Format::Json => {
                    let matrices: Vec<Vec<Vec<String>>> = found
                        .matrices
                        .iter()
                        .map(|m| {
                            m.iter()
                                .map(|row| row.iter().map(|e| e.display_short()).collect())
                                .collect()
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({ "order": found.group_order, "matrices": matrices })
                    );
                }
                _ => {
                    for (i, m) in found.matrices.iter().enumerate() {
                        println!("automorphism {}:", i + 1);
                        for row in m {
                            let cells: Vec<String> =
                                row.iter().map(|e| e.display_short()).collect();
                            println!("  {}", cells.join(" "));
                        }
                    }
                    println!("group order: {}", found.group_order);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
struct AlgebraFile {
    base: String,
    grading: Vec<usize>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
}

#[derive(Deserialize)]
struct BracketEntry {
    left: usize,
    right: usize,
    coeffs: BTreeMap<String, String>,
}

fn load_algebra(path: &str) -> Result<CarnotAlgebra, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError { message: format!("{path}: {e}") })?;
    let file: AlgebraFile =
        serde_json::from_str(&text).map_err(|e| CliError { message: format!("{path}: {e}") })?;
    let base = parse_ring(&file.base)?;
    let dim: usize = file.grading.iter().sum();
    let zero_row = vec![vec![base.zero(); dim]; dim];
    let mut bracket = vec![zero_row; dim];
    for entry in &file.brackets {
        if entry.left >= dim || entry.right >= dim {
            return Err(CliError {
                message: format!(
                    "bracket indices ({}, {}) out of range for dimension {dim}",
                    entry.left, entry.right
                ),
            });
        }
        let mut coords = vec![base.zero(); dim];
        for (index, value) in &entry.coeffs {
            let i: usize = index
                .parse()
                .map_err(|_| CliError { message: format!("bad basis index {index}") })?;
            if i >= dim {
                return Err(CliError { message: format!("basis index {i} out of range") });
            }
            coords[i] = parse_element(&base, value)?;
        }
        bracket[entry.left][entry.right] = coords.clone();
        bracket[entry.right][entry.left] = coords.iter().map(|c| -c).collect();
    }
    Ok(CarnotAlgebra::new(&base, file.grading, bracket)?)
}

fn carnot(op: CarnotOp) -> Result<ExitCode, CliError> {
    match op {
        CarnotOp::Pansu { algebra, target, map, x, v, t } => {
            let source = load_algebra(&algebra)?;
            let target = match target {
                Some(path) => load_algebra(&path)?,
                None => source.clone(),
            };
            let ring = source.base_ring().clone();
            let f = parse_map(&ring, &map, Some(source.dim()))?;
            let x = parse_points(&ring, &x)?;
            let v = parse_points(&ring, &v)?;
            let t = parse_element(&ring, &t)?;
            let out = pansu_diff1(&source, &target, &f, &x, &v, &t)?;
            println!("f^[1](x, v, t) = {}", render_vector(&out));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_suite_text(suite: &Suite) {
    println!("suite {}", suite.name);
    for check in &suite.checks {
        let verdict = if check.passed { "pass" } else { "FAIL" };
        match &check.detail {
            Some(d) => println!("  [{verdict}] {} — {d}", check.name),
            None => println!("  [{verdict}] {}", check.name),
        }
    }
}

fn suite_to_json(suite: &Suite) -> serde_json::Value {
    json!({
        "suite": suite.name,
        "passed": suite.passed(),
        "checks": suite.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

fn verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        run_all(args.seed)
    } else {
        match run_suite(&args.suite, args.seed) {
            Some(s) => vec![s],
            None => {
                return Err(CliError {
                    message: format!(
                        "unknown suite {}; available: all, {}",
                        args.suite,
                        SUITES.join(", ")
                    ),
                })
            }
        }
    };
    let all_passed = suites.iter().all(|s| s.passed());
    match args.format {
        Format::Json => {
            let doc = json!({
                "seed": args.seed,
                "passed": all_passed,
                "suites": suites.iter().map(suite_to_json).collect::<Vec<_>>(),
            });
            println!("{doc}");
        }
        _ => {
            for suite in &suites {
                print_suite_text(suite);
            }
            let total: usize = suites.iter().map(|s| s.checks.len()).sum();
            let failed: usize = suites
                .iter()
                .map(|s| s.checks.iter().filter(|c| !c.passed).count())
                .sum();
            if all_passed {
                println!("all {total} checks passed (seed {})", args.seed);
            } else {
                println!("{failed} of {total} checks FAILED (seed {})", args.seed);
            }
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
