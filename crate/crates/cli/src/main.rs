//! `hkcount`: predictions, exact counts, sweeps, reference tables and verification suites.

mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hk_core::constants::special::{l_minus4, zeta};
use hk_core::constants::tables::{hirzebruch_table, product_example, threefold_constants, threefold_table};
use hk_core::constants::{
    predict, predict_region, schanuel_constant, zeta_p_numeric, AsymptoticPrediction, ConstantsError, FieldInvariants,
};
use hk_core::enumerate::{count, for_each_point, sweep, CountRequest, CountResult, CountTarget, EnumError};
use hk_core::geometry::{fmt_rational, GeometryError};
use hk_core::literal::{parse_bundle, parse_rational, parse_variety};
use hk_core::{HkVariety, LineBundleClass, Region};
use num_rational::BigRational;
use serde::Serialize;

use report::{strata, strata_text, PredictionReport};

#[derive(Parser)]
#[command(name = "hkcount", version, about = "Rational points of bounded height on Hirzebruch-Kleinschmidt varieties")]
struct Cli {
    /// Worker threads for counting; 0 uses all available cores.
    #[arg(long, global = true, env = "HKCOUNT_THREADS", default_value_t = 0)]
    threads: usize,
    /// Field invariants file (`key=value` lines); defaults to the rationals.
    #[arg(long, global = true)]
    invariants: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Target {
    /// Variety literal `r,t:a1,...,ar`, e.g. `2,2:0,1`.
    #[arg(long, value_parser = variety_arg, required_unless_present = "projective", conflicts_with = "projective")]
    variety: Option<HkVariety>,
    /// Class literal `lambda,mu`.
    #[arg(long, value_parser = bundle_arg, allow_hyphen_values = true, required_unless_present = "projective")]
    bundle: Option<LineBundleClass>,
    /// Count on projective space of this dimension instead.
    #[arg(long)]
    projective: Option<usize>,
    /// Height `H^twist` on projective space.
    #[arg(long, default_value_t = 1, requires = "projective")]
    twist: i64,
    /// U (y0 != 0), F (y0 = 0) or X (everything).
    #[arg(long, value_parser = region_arg)]
    region: Option<Region>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Asymptotic growth `C B^a (log B)^b` of the count, with the restriction chain.
    Predict {
        #[arg(long, value_parser = variety_arg)]
        variety: HkVariety,
        #[arg(long, value_parser = bundle_arg, allow_hyphen_values = true)]
        bundle: LineBundleClass,
        #[arg(long, value_parser = region_arg)]
        region: Option<Region>,
    },
    /// Exact number of points of height at most B.
    Count {
        #[command(flatten)]
        target: Target,
        /// Height bound, `p/q` or a decimal.
        #[arg(long = "B", alias = "bound", value_parser = rational_arg)]
        bound: BigRational,
        /// Print every point in the point literal format before the count.
        #[arg(long)]
        stream: bool,
    },
    /// Counts against the prediction over a grid of bounds.
    Sweep {
        #[command(flatten)]
        target: Target,
        /// Comma-separated increasing bounds.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required_unless_present = "geometric")]
        grid: Vec<BigRational>,
        /// `start,ratio,steps` for the bounds start * ratio^i, i < steps.
        #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "grid")]
        geometric: Option<Vec<String>>,
    },
    /// Reference constants: the Hirzebruch surface table, the threefold strata and the product example.
    Tables {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Special values: Riemann zeta, completed zeta, L(-4, s) and projective height zeta functions.
    Zeta {
        #[arg(long, value_enum)]
        function: Function,
        #[arg(long)]
        s: f64,
        /// Dimension for the projective height zeta function.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
        /// Target tail bound for the direct sum.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Pass/fail report of a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Hirzebruch,
    Threefold,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Zeta,
    Xi,
    LMinus4,
    /// Direct sum with a rigorous tail bound.
    ZetaP,
    /// Closed form or theta integral (or the invariants file for other fields).
    ZetaPAnalytic,
}

fn variety_arg(s: &str) -> Result<HkVariety, String> {
    parse_variety(s).map_err(|e| e.to_string())
}

fn bundle_arg(s: &str) -> Result<LineBundleClass, String> {
    parse_bundle(s).map_err(|e| e.to_string())
}

fn rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn region_arg(s: &str) -> Result<Region, String> {
    s.parse()
}

/// Failure classes with stable exit codes.
enum CliError {
    Parse(String),
    Infinite(String),
    Verification,
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Infinite(_) => 3,
            CliError::Verification => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::NotBig(_) => CliError::Infinite(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<ConstantsError> for CliError {
    fn from(e: ConstantsError) -> Self {
        match e {
            ConstantsError::NotBig(_) | ConstantsError::Geometry(GeometryError::NotBig(_)) => {
                CliError::Infinite(format!("{e}; the count is infinite on that stratum"))
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn default_region(x: &HkVariety) -> Region {
    if x.a_max() > 0 {
        Region::GoodOpen
    } else {
        Region::Whole
    }
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::GoodOpen => "U",
        Region::SubbundleF => "F",
        Region::Whole => "X",
    }
}

fn emit_json<T: Serialize>(v: &T) -> Res<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Other(e.to_string()))?;
    let _ = writeln!(std::io::stdout(), "{s}");
    Ok(())
}

fn load_invariants(path: &Option<PathBuf>) -> Res<FieldInvariants> {
    match path {
        None => Ok(FieldInvariants::rationals()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?;
            FieldInvariants::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))
        }
    }
}

struct Resolved {
    target: CountTarget,
    region: Region,
}

fn resolve(t: &Target) -> Res<Resolved> {
    match (&t.variety, t.bundle, t.projective) {
        (Some(v), Some(l), None) => {
            Ok(Resolved { target: CountTarget::Hk { variety: v.clone(), bundle: l }, region: t.region.unwrap_or(default_region(v)) })
        }
        (None, None, Some(dim)) if dim >= 1 => {
            Ok(Resolved { target: CountTarget::Projective { dim, twist: t.twist }, region: Region::Whole })
        }
        _ => Err(CliError::Parse("give either --variety with --bundle, or --projective (dimension >= 1)".into())),
    }
}

fn prediction_for(r: &Resolved, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    match &r.target {
        CountTarget::Hk { variety, bundle } => predict_region(variety, *bundle, r.region, inv),
        CountTarget::Projective { dim, twist } => {
            if *twist <= 0 {
                return Err(ConstantsError::NotBig(format!("O({twist}) on P^{dim}")));
            }
            let mut p = schanuel_constant(*dim, inv)?;
            p.exponent /= *twist;
            Ok(p)
        }
    }
}

fn cmd_predict(cli: &Cli, x: &HkVariety, l: LineBundleClass, region: Option<Region>) -> Res<()> {
    let inv = load_invariants(&cli.invariants)?;
    let result = match region {
        Some(r) => predict_region(x, l, r, &inv),
        None => predict(x, l, &inv),
    };
    let region = region.unwrap_or(default_region(x));
    let p = match result {
        Ok(p) => p,
        Err(e) => {
            let e = CliError::from(e);
            if let CliError::Infinite(_) = e {
                eprint!("{}", strata_text(&strata(x, l)));
            }
            return Err(e);
        }
    };
    let rep = PredictionReport::new(x, l, region_name(region), &p);
    match cli.format {
        Format::Json => emit_json(&rep),
        _ => {
            print!("{}", rep.text());
            Ok(())
        }
    }
}

fn count_with(r: &Resolved, bound: &BigRational, region: Region, threads: usize) -> Res<CountResult> {
    Ok(count(&CountRequest { target: r.target.clone(), bound: bound.clone(), region, threads })?)
}

fn cmd_count(cli: &Cli, target: &Target, bound: &BigRational, stream: bool) -> Res<()> {
    let r = resolve(target)?;
    if stream {
        let CountTarget::Hk { variety, bundle } = &r.target else {
            return Err(CliError::Parse("--stream needs --variety and --bundle".into()));
        };
        let out = std::io::stdout();
        let mut lock = out.lock();
        let mut n = 0u128;
        for_each_point(variety, *bundle, bound, r.region, &mut |p| {
            n += 1;
            let _ = writeln!(lock, "{p}");
        })?;
        drop(lock);
        println!("count {n}");
        return Ok(());
    }
    let res = count_with(&r, bound, r.region, cli.threads)?;
    let split = if r.region == Region::Whole && matches!(r.target, CountTarget::Hk { .. }) {
        let u = count_with(&r, bound, Region::GoodOpen, cli.threads)?.count;
        let f = count_with(&r, bound, Region::SubbundleF, cli.threads)?.count;
        Some((u, f))
    } else {
        None
    };
    match cli.format {
        Format::Json => emit_json(&res),
        _ => {
            println!("count {}", res.count);
            println!("region {}", region_name(res.region));
            println!("bound {}", res.bound);
            println!("points visited {}", res.points_visited);
            println!("elapsed {:.6} s", res.elapsed_seconds);
            if let Some((u, f)) = split {
                let verdict = if u + f == res.count { "consistent" } else { "INCONSISTENT" };
                println!("X = U + F: {} = {u} + {f} ({verdict})", res.count);
            }
            Ok(())
        }
    }
}

fn geometric_grid(parts: &[String]) -> Res<Vec<BigRational>> {
    let bad = || CliError::Parse(format!("--geometric expects start,ratio,steps, got {}", parts.join(",")));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parse_rational(&parts[0]).map_err(|e| CliError::Parse(e.to_string()))?;
    let ratio = parse_rational(&parts[1]).map_err(|e| CliError::Parse(e.to_string()))?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    let mut grid = Vec::with_capacity(steps);
    let mut cur = start;
    for _ in 0..steps {
        grid.push(cur.clone());
        cur *= &ratio;
    }
    Ok(grid)
}

fn cmd_sweep(cli: &Cli, target: &Target, grid: &[BigRational], geometric: &Option<Vec<String>>) -> Res<()> {
    let r = resolve(target)?;
    let inv = load_invariants(&cli.invariants)?;
    let grid = match geometric {
        Some(parts) => geometric_grid(parts)?,
        None => grid.to_vec(),
    };
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Parse("the grid must be strictly increasing".into()));
    }
    let prediction = prediction_for(&r, &inv).ok();
    let f = prediction.as_ref().map(|p| move |b: f64| p.eval(b));
    let req = CountRequest { target: r.target.clone(), bound: grid[0].clone(), region: r.region, threads: cli.threads };
    let rows = sweep(&req, &grid, f.as_ref().map(|g| g as &dyn Fn(f64) -> f64))?;
    match cli.format {
        Format::Json => emit_json(&rows),
        _ => {
            println!("B,count,predicted,ratio");
            let opt = |v: Option<f64>| v.map(|x| format!("{x:.10e}")).unwrap_or_default();
            for row in rows {
                println!("{},{},{},{}", row.bound, row.count, opt(row.predicted), row.ratio.map(|x| format!("{x:.8}")).unwrap_or_default());
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Tables {
    hirzebruch: Option<Vec<hk_core::constants::tables::SurfaceRow>>,
    threefold: Option<Vec<hk_core::constants::tables::ThreefoldRow>>,
    threefold_constants: Option<hk_core::constants::tables::ThreefoldConstants>,
    product: Option<AsymptoticPrediction>,
}

fn cmd_tables(cli: &Cli, which: Which) -> Res<()> {
    let inv = load_invariants(&cli.invariants)?;
    let surf = matches!(which, Which::Hirzebruch | Which::All);
    let three = matches!(which, Which::Threefold | Which::All);
    let t = Tables {
        hirzebruch: if surf { Some(hirzebruch_table(&inv)?) } else { None },
        threefold: if three { Some(threefold_table(&inv)?) } else { None },
        threefold_constants: if three { Some(threefold_constants(&inv)?) } else { None },
        product: if three { Some(product_example(&inv)?) } else { None },
    };
    if cli.format == Format::Json {
        return emit_json(&t);
    }
    if let Some(rows) = &t.hirzebruch {
        println!("Hirzebruch surface 1,2:1, good open set");
        println!("{:>6} {:>4} {:>16} {:>5} {:>4} {:>14}", "lambda", "mu", "case", "a", "log", "C");
        for r in rows {
            let p = &r.prediction;
            let case = p.case.map(|c| format!("{c:?}")).unwrap_or_default();
            println!("{:>6} {:>4} {:>16} {:>5} {:>4} {:>14.8}", r.lambda, r.mu, case, fmt_rational(&p.exponent), p.log_power, p.constant);
        }
    }
    if let Some(rows) = &t.threefold {
        if surf {
            println!();
        }
        println!("Threefold 2,2:a1,a2 with -K over U, U', F'");
        println!("{:>18} {:>8} {:>8} {:>6}  growth", "case", "L big", "M big", "lead");
        for r in rows {
            let growth: Vec<String> = r
                .strata
                .iter()
                .map(|s| match &s.prediction {
                    Some(p) => format!("{}: {}", s.name, p.describe()),
                    None => format!("{}: infinite", s.name),
                })
                .collect();
            let yn = |b: bool| if b { "yes" } else { "no" };
            println!("{:>18} {:>8} {:>8} {:>6}  {}", r.case, yn(r.restriction_big), yn(r.line_big), r.dominant, growth.join("; "));
        }
        let c = t.threefold_constants.unwrap();
        println!("constants for (0,1): C = {:.8}, C' = {:.8}, C'' = {:.8}", c.open, c.open_of_f, c.line);
        println!("P^1 x P^1 with 3,1: {}", t.product.as_ref().unwrap().describe());
    }
    Ok(())
}

#[derive(Serialize)]
struct ZetaValue {
    function: String,
    s: f64,
    m: Option<i64>,
    value: f64,
    tail_bound: Option<f64>,
    points: Option<u64>,
}

fn cmd_zeta(cli: &Cli, function: Function, s: f64, m: i64, tol: f64) -> Res<()> {
    let inv = load_invariants(&cli.invariants)?;
    let other = |e: &dyn std::fmt::Display| CliError::Other(e.to_string());
    let mut out = ZetaValue { function: format!("{function:?}"), s, m: None, value: 0.0, tail_bound: None, points: None };
    match function {
        Function::Zeta => out.value = zeta(s).map_err(|e| other(&e))?,
        Function::Xi => out.value = inv.xi(s).map_err(|e| other(&e))?,
        Function::LMinus4 => out.value = l_minus4(s).map_err(|e| other(&e))?,
        Function::ZetaP => {
            let v = zeta_p_numeric(m, s, tol)?;
            out.m = Some(m);
            out.value = v.value;
            out.tail_bound = Some(v.tail_bound);
            out.points = Some(v.points);
        }
        Function::ZetaPAnalytic => {
            out.m = Some(m);
            out.value = inv.zeta_p(m, s).map_err(|e| other(&e))?;
        }
    }
    match cli.format {
        Format::Json => emit_json(&out),
        _ => {
            print!("{:.15}", out.value);
            if let (Some(t), Some(p)) = (out.tail_bound, out.points) {
                print!(" (tail bound {t:.2e}, {p} points)");
            }
            println!();
            Ok(())
        }
    }
}

fn cmd_verify(cli: &Cli, suite: verify::Suite) -> Res<()> {
    let rep = verify::run(suite, cli.threads).map_err(|e| CliError::Other(e.to_string()))?;
    match cli.format {
        Format::Json => emit_json(&rep)?,
        _ => print!("{}", rep.text()),
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn run(cli: &Cli) -> Res<()> {
    match &cli.cmd {
        Cmd::Predict { variety, bundle, region } => cmd_predict(cli, variety, *bundle, *region),
        Cmd::Count { target, bound, stream } => cmd_count(cli, target, bound, *stream),
        Cmd::Sweep { target, grid, geometric } => cmd_sweep(cli, target, grid, geometric),
        Cmd::Tables { which } => cmd_tables(cli, *which),
        Cmd::Zeta { function, s, m, tol } => cmd_zeta(cli, *function, *s, *m, *tol),
        Cmd::Verify { suite } => cmd_verify(cli, *suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Parse(m) => eprintln!("error: {m}"),
                CliError::Infinite(m) => eprintln!("infinite: {m}"),
                CliError::Verification => eprintln!("verification failed"),
                CliError::Other(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
