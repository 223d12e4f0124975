use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stereoconj::analyze::{check_symmetry, infinite_point_status, SymmetryKind};
use stereoconj::atlas::{build_atlas, render_svg, AtlasConfig, Marker, SeedGrid};
use stereoconj::charts::{curve_case, map_curve, ChartTag, CurveDescriptor, CurveImage};
use stereoconj::conjugate::{conjugate, DiffSystem};
use stereoconj::oracle::{corpus, run_case};
use stereoconj::parse::{parse_rational, parse_system, SystemSpec};
use stereoconj::poly::{Rational, VarPair};

#[derive(Parser)]
#[command(name = "stereoconj", version, about = "Stereographically conjugate planar polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reduced conjugate system.
    Conjugate {
        #[command(flatten)]
        input: Input,
        /// Write the JSON result here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fail when the right-hand sides have a common factor.
        #[arg(long)]
        check_coprime: bool,
    },
    /// Test the five phase-field symmetries on the system and its conjugate.
    Symmetry {
        #[command(flatten)]
        input: Input,
    },
    /// Status of the infinitely remote point.
    Infinity {
        #[command(flatten)]
        input: Input,
    },
    /// Image of a circle, line or point under the transition map.
    MapCurve(CurveArgs),
    /// Build the two-disk atlas of trajectories.
    Atlas(AtlasArgs),
    /// Run the embedded oracle corpus.
    Verify,
}

#[derive(Args)]
struct Input {
    /// System file: JSON `{"vars": [..], "rhs": [..]}` or two `dx/dt = ...`
    /// lines; `-` reads stdin.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CurveArgs {
    /// Circle `(x - cx)^2 + (y - cy)^2 = r2`.
    #[arg(long, num_args = 3, value_names = ["CX", "CY", "R2"], allow_negative_numbers = true)]
    circle: Option<Vec<String>>,
    /// Line `A x + B y + C = 0`.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    line: Option<Vec<String>>,
    /// Point `(px, py)`.
    #[arg(long, num_args = 2, value_names = ["PX", "PY"], allow_negative_numbers = true)]
    point: Option<Vec<String>>,
}

#[derive(Args)]
struct AtlasArgs {
    #[command(flatten)]
    input: Input,
    /// Cap parameter of the first disk, `p/q` in (0, 1].
    #[arg(long, default_value = "1/5")]
    eps1: String,
    /// Cap parameter of the second disk.
    #[arg(long, default_value = "1/5")]
    eps2: String,
    /// Seed grid per disk: `grid:N` (N rays, 3 radii), `grid:NxM`, or `none`.
    #[arg(long, default_value = "grid:8")]
    seeds: String,
    /// Cycle marker circle in the first chart (repeatable).
    #[arg(long, num_args = 3, value_names = ["CX", "CY", "R2"], allow_negative_numbers = true, action = clap::ArgAction::Append)]
    cycle: Vec<String>,
    /// Equilibrium marker in the first chart (repeatable).
    #[arg(long, num_args = 2, value_names = ["PX", "PY"], allow_negative_numbers = true, action = clap::ArgAction::Append)]
    equilibrium: Vec<String>,
    /// Pixel size of each disk.
    #[arg(long, default_value_t = 400)]
    size: u32,
    /// SVG output path; stdout when neither this nor --json is given.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// JSON document output path.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read_system(path: &Path) -> Result<DiffSystem> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let spec = SystemSpec::from_any(&text)?;
    Ok(parse_system(&spec)?)
}

fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("`{text}`: {e}"))
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn system_json(sys: &DiffSystem) -> Value {
    let spec = sys.to_spec();
    json!({"vars": spec.vars, "rhs": spec.rhs})
}

fn cmd_conjugate(input: &Input, output: Option<&Path>, check_coprime: bool) -> Result<()> {
    let sys = read_system(&input.input)?;
    if check_coprime && !sys.is_coprime() {
        bail!("the right-hand sides of {sys} have a common factor");
    }
    let r = conjugate(&sys)?;
    let vars = r.conjugate.vars();
    emit(
        &json!({
            "system": system_json(&sys),
            "vars": [vars.first(), vars.second()],
            "U": r.conjugate.p().to_string(),
            "V": r.conjugate.q().to_string(),
            "n": sys.degree(),
            "k": r.k,
            "m": r.m,
            "coprime": sys.is_coprime(),
            "time_relation": r.time_relation(),
        }),
        output,
    )
}

fn cmd_symmetry(input: &Input) -> Result<()> {
    let sys = read_system(&input.input)?;
    let r = conjugate(&sys)?;
    let kinds: serde_json::Map<String, Value> = SymmetryKind::ALL
        .iter()
        .map(|&k| {
            (
                k.name().to_string(),
                json!({"system": check_symmetry(&sys, k), "conjugate": check_symmetry(&r.conjugate, k)}),
            )
        })
        .collect();
    emit(
        &json!({"system": system_json(&sys), "conjugate": system_json(&r.conjugate), "symmetries": kinds}),
        None,
    )
}

fn cmd_infinity(input: &Input) -> Result<()> {
    let sys = read_system(&input.input)?;
    let status = infinite_point_status(&sys)?;
    let mut out = status.to_json();
    out["system"] = system_json(&sys);
    emit(&out, None)
}

fn curve_json(curve: &CurveDescriptor, vars: &VarPair) -> Value {
    let mut v = curve.to_json();
    v["equation"] = json!(curve.equation_text(vars));
    v
}

fn cmd_map_curve(args: &CurveArgs) -> Result<()> {
    let q = |vals: &[String]| vals.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>();
    let curve = if let Some(c) = &args.circle {
        let c = q(c)?;
        CurveDescriptor::circle((c[0].clone(), c[1].clone()), c[2].clone())?
    } else if let Some(l) = &args.line {
        let l = q(l)?;
        CurveDescriptor::line(l[0].clone(), l[1].clone(), l[2].clone())?
    } else if let Some(p) = &args.point {
        let p = q(p)?;
        CurveDescriptor::point(p[0].clone(), p[1].clone())
    } else {
        unreachable!("clap requires one curve")
    };
    let mut input = curve_json(&curve, &VarPair::xy());
    input["case"] = json!(curve_case(&curve).to_string());
    let image = match map_curve(&curve)? {
        CurveImage::Curve(c) => curve_json(&c, &VarPair::uv()),
        CurveImage::Infinity => json!({"kind": "infinity"}),
    };
    emit(&json!({"input": input, "image": image}), None)
}

fn parse_seeds(text: &str) -> Result<Option<SeedGrid>> {
    if text == "none" {
        return Ok(None);
    }
    let spec = text
        .strip_prefix("grid:")
        .ok_or_else(|| anyhow!("--seeds must be `grid:N`, `grid:NxM` or `none`"))?;
    let (rays, radii) = match spec.split_once('x') {
        Some((n, m)) => (n.parse()?, m.parse()?),
        None => (spec.parse()?, 3),
    };
    Ok(Some(SeedGrid { rays, radii }))
}

fn cmd_atlas(args: &AtlasArgs) -> Result<()> {
    let sys = read_system(&args.input.input)?;
    let mut markers = Vec::new();
    for c in args.cycle.chunks(3) {
        let curve = CurveDescriptor::circle((rational(&c[0])?, rational(&c[1])?), rational(&c[2])?)?;
        markers.push(Marker::Cycle {
            chart: ChartTag::North,
            curve,
        });
    }
    for p in args.equilibrium.chunks(2) {
        markers.push(Marker::Equilibrium {
            chart: ChartTag::North,
            point: (rational(&p[0])?, rational(&p[1])?),
        });
    }
    let cfg = AtlasConfig {
        eps1: rational(&args.eps1)?,
        eps2: rational(&args.eps2)?,
        grid: parse_seeds(&args.seeds)?,
        markers,
        size: args.size,
        ..AtlasConfig::default()
    };
    let doc = build_atlas(&sys, &cfg)?;
    if let Some(path) = &args.json {
        emit(&doc.to_json(), Some(path))?;
    }
    let svg = render_svg(&doc);
    match &args.output {
        Some(path) => fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?,
        None if args.json.is_none() => io::stdout().write_all(svg.as_bytes())?,
        None => {}
    }
    Ok(())
}

fn cmd_verify() -> Result<bool> {
    let cases = corpus();
    let mut out = io::stdout().lock();
    let width = cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
    writeln!(out, "{:<width$}  result  checks", "case")?;
    let mut failed = 0;
    for case in &cases {
        let report = run_case(case);
        let checks: Vec<String> = report
            .checks
            .iter()
            .map(|c| format!("{}{}", c.check, if c.passed { "" } else { "!" }))
            .collect();
        let verdict = if report.passed() { "pass" } else { "FAIL" };
        writeln!(out, "{:<width$}  {verdict:<6}  {}", report.name, checks.join(" "))?;
        for f in report.failures() {
            writeln!(out, "{:<width$}          {}: {}", "", f.check, f.detail)?;
        }
        failed += usize::from(!report.passed());
    }
    writeln!(out, "{} of {} cases passed", cases.len() - failed, cases.len())?;
    Ok(failed == 0)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Conjugate {
            input,
            output,
            check_coprime,
        } => cmd_conjugate(input, output.as_deref(), *check_coprime).map(|_| true),
        Command::Symmetry { input } => cmd_symmetry(input).map(|_| true),
        Command::Infinity { input } => cmd_infinity(input).map(|_| true),
        Command::MapCurve(args) => cmd_map_curve(args).map(|_| true),
        Command::Atlas(args) => cmd_atlas(args).map(|_| true),
        Command::Verify => cmd_verify(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
