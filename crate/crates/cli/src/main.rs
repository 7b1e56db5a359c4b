use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qsplit::batch::Exec;
use qsplit::cameral::{CameralCover, HitchinBasePoint};
use qsplit::centralizers::{centralizer_fiber, exact_sequence_check};
use qsplit::forms::{form, RealForm, Subgroup, CATALOG, DEFAULT_SEED};
use qsplit::report::{emit_report, run_suite_with, Format, Status, VerificationReport, SUITES};
use qsplit::sheaves::{self as sh, FiniteCameralFiber};
use qsplit::{Error, Matrix, Scalar};

#[derive(Parser)]
#[command(name = "qsplit", version, about = "Exact computations for quasi-split real forms and their Higgs-bundle data")]
struct Cli {
    /// Seed for every sampled point
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit JSON instead of text where both exist
    #[arg(long, global = true)]
    json: bool,
    /// Form used when a command omits its positional form argument
    #[arg(long, global = true)]
    form: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog or describe one form
    Forms {
        #[command(subcommand)]
        action: FormsAction,
    },
    /// Root system, restricted roots and Weyl group orders
    Roots { name: Option<String> },
    /// Evaluate the Kostant-Rallis section at a base point
    KrSection {
        name: Option<String>,
        /// Invariant values c1,...,ca
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// Centralizer of a point of m in H or G_theta
    Centralizer {
        name: Option<String>,
        /// JSON file holding the matrix as an array of rows
        #[arg(long)]
        point: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupArg::H)]
        group: GroupArg,
    },
    /// Cameral covers of Hitchin base points
    Cameral {
        #[command(subcommand)]
        action: CameralAction,
    },
    /// Sections of the torus sheaves over finite cameral fibers
    Sections {
        #[command(subcommand)]
        action: SectionsAction,
    },
    /// Run a verification suite (or exact-sequences)
    Verify {
        suite: String,
        name: Option<String>,
        /// Run the batch checks on one thread
        #[arg(long)]
        sequential: bool,
        /// Record the wall-clock runtime in the report
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum FormsAction {
    List,
    Info { name: Option<String> },
}

#[derive(Subcommand)]
enum CameralAction {
    /// Equations, discriminant and root orbits
    Build { file: PathBuf },
    /// Points of the fiber over x0
    Fiber {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Ramification divisors and the degree identity
    Ramification { file: PathBuf },
}

#[derive(Subcommand)]
enum SectionsAction {
    /// Enumerate sections with finite values and check their conditions
    Enumerate {
        name: Option<String>,
        /// Point of the fiber: a1,...,ar in a, or t:c1,...,cn in t
        #[arg(long, allow_hyphen_values = true)]
        fiber: String,
        #[arg(long, value_enum, default_value_t = ValuesArg::Ttheta)]
        values: ValuesArg,
        /// Maximum number of sections listed in full
        #[arg(long, default_value_t = 32)]
        limit: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    H,
    #[value(name = "Gtheta", alias = "gtheta")]
    Gtheta,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValuesArg {
    #[value(name = "Ttheta", alias = "ttheta")]
    Ttheta,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "T", alias = "t")]
    T,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Construction(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Out = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error writing output: {e}");
        }
    }
}

fn print_json(v: &Value) -> Out {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize")));
    Ok(ExitCode::SUCCESS)
}

fn pick_form(cli: &Cli, name: &Option<String>) -> Result<&'static RealForm, Failure> {
    let name =
        name.as_ref().or(cli.form.as_ref()).ok_or_else(|| Failure::Input("no form given; pass it as an argument or with --form".into()))?;
    Ok(form(name)?)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_scalars(items: &[String]) -> Result<Vec<Scalar>, Failure> {
    items.iter().map(|s| s.trim().parse::<Scalar>().map_err(Failure::from)).collect()
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Forms { action: FormsAction::List } => {
            if cli.json {
                return print_json(&json!(CATALOG));
            }
            let mut text = String::new();
            for name in CATALOG {
                let f = form(name)?;
                text += &format!(
                    "{name:6} dim {:2}  rank {}  real rank {}  quasi-split {}\n",
                    f.g.dim(),
                    f.rank(),
                    f.real_rank(),
                    f.quasi_split()
                );
            }
            emit(&text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Forms { action: FormsAction::Info { name } } => print_json(&pick_form(cli, name)?.info_json()),
        Command::Roots { name } => {
            let f = pick_form(cli, name)?;
            let rd = f.roots()?;
            let rr = f.restricted()?;
            print_json(&json!({
                "form": f.name(),
                "roots": rd.to_json(),
                "restricted": rr.to_json(),
                "weyl_order": rd.weyl_order(),
                "restricted_weyl_order": rr.weyl_order(),
            }))
        }
        Command::KrSection { name, point } => {
            let f = pick_form(cli, name)?;
            let c = parse_scalars(point)?;
            if c.len() != f.real_rank() {
                return Err(Failure::Input(format!("{} needs {} invariant values, got {}", f.name(), f.real_rank(), c.len())));
            }
            let cd = f.chevalley()?;
            let x = cd.kr_section(&c)?;
            let back = cd.chi(&x);
            print_json(&json!({
                "form": f.name(),
                "base_point": c.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "section": x.to_json(),
                "chi": back.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "round_trip": back == c,
                "regular": f.is_regular(&x),
                "in_m": f.in_m(&x),
            }))
        }
        Command::Centralizer { name, point, group } => {
            let f = pick_form(cli, name)?;
            let v: Value = serde_json::from_str(&read_file(point)?).map_err(|e| Failure::Input(e.to_string()))?;
            let x = Matrix::from_json(&v)?;
            let g = match group {
                GroupArg::H => Subgroup::H,
                GroupArg::Gtheta => Subgroup::GTheta,
            };
            let fib = centralizer_fiber(f, &x, g)?;
            print_json(&fib.to_json())
        }
        Command::Cameral { action } => cameral(action),
        Command::Sections { action: SectionsAction::Enumerate { name, fiber, values, limit } } => {
            sections(pick_form(cli, name)?, fiber, *values, *limit)
        }
        Command::Verify { suite, name, sequential, timing } => {
            let f = pick_form(cli, name)?;
            let exec = if *sequential { Exec::Sequential } else { Exec::Parallel };
            if suite == "exact-sequences" {
                return exact_sequences(f, cli.seed, cli.json);
            }
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Input(format!("unknown suite {suite:?}; expected one of {}, exact-sequences", SUITES.join(", "))));
            }
            let start = std::time::Instant::now();
            let mut rep: VerificationReport = run_suite_with(suite, f.name(), cli.seed, exec)?;
            if *timing {
                rep.runtime_ms = Some(start.elapsed().as_millis() as u64);
            }
            let mut text = emit_report(&rep, if cli.json { Format::Json } else { Format::Text });
            if cli.json {
                text.push('\n');
            }
            emit(&text);
            Ok(if rep.checks.iter().any(|c| c.status == Status::Fail) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn load_cover(file: &Path) -> Result<CameralCover, Failure> {
    let base = HitchinBasePoint::parse(&read_file(file)?)?;
    Ok(CameralCover::build(&base)?)
}

fn cameral(action: &CameralAction) -> Out {
    match action {
        CameralAction::Build { file } => print_json(&load_cover(file)?.to_json()),
        CameralAction::Fiber { file, at } => {
            let c = load_cover(file)?;
            let x0: Scalar = at.parse()?;
            let fib = c.fiber_at(&x0)?;
            let mut v = serde_json::to_value(&fib).expect("fibers serialize");
            v["weyl_order"] = json!(c.weyl_order);
            print_json(&v)
        }
        CameralAction::Ramification { file } => {
            let c = load_cover(file)?;
            print_json(&json!({
                "discriminant": c.discriminant.to_string(),
                "divisors": c.ramification()?,
                "degree_check": c.degree_check()?,
            }))
        }
    }
}

fn sections(f: &RealForm, spec: &str, values: ValuesArg, limit: usize) -> Out {
    let (full_spec, coords) = match spec.strip_prefix("t:") {
        Some(rest) => (true, rest),
        None => (false, spec),
    };
    let items: Vec<String> = coords.split(',').map(str::to_string).collect();
    let point = parse_scalars(&items)?;
    let want = if full_spec { f.rank() } else { f.real_rank() };
    if point.len() != want {
        return Err(Failure::Input(format!("fiber point needs {want} coordinates, got {}", point.len())));
    }
    let td = f.torus()?;
    let (fiber, real) = if full_spec {
        (FiniteCameralFiber::orbit(f, &point)?, None)
    } else {
        let real = FiniteCameralFiber::real_orbit(f, &point)?;
        let mut t0 = point.clone();
        t0.resize(f.rank(), Scalar::default());
        (real, Some(FiniteCameralFiber::orbit(f, &t0)?))
    };
    let (label, group) = match values {
        ValuesArg::Ttheta => ("Ttheta", td.t_theta.clone()),
        ValuesArg::D => ("D", td.d_group.clone()),
        ValuesArg::T => ("T", td.torsion_points(td.torsion_level)),
    };
    let secs = sh::enumerate_sections_finite(f, &fiber, &group)?;
    let mut listed = Vec::new();
    for s in secs.iter().take(limit) {
        let mut entry = json!({ "values": s });
        if real.is_some() {
            entry["ttheta_condition"] = serde_json::to_value(sh::check_ttheta_condition(f, &fiber, s)?).unwrap();
            entry["involution"] = json!(sh::involution_theta(f, &fiber, s)?);
        } else {
            entry["dg_condition"] = serde_json::to_value(sh::check_t_condition_dg(f, &fiber, s)?).unwrap();
            entry["ngo_condition"] = serde_json::to_value(sh::check_t_condition_ngo(f, &fiber, s)?).unwrap();
        }
        if let Some(full) = &real {
            entry["extension"] = match sh::extend_by_equivariance(f, &fiber, s, full)? {
                Ok(ext) => json!({ "values": ext, "valid": sh::check_t_condition_ngo(f, full, &ext)?.holds }),
                Err(obstruction) => json!({ "obstruction": obstruction }),
            };
        }
        listed.push(entry);
    }
    print_json(&json!({
        "form": f.name(),
        "fiber": {
            "points": fiber.points.iter().map(|p| p.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "stabilizer_orders": fiber.ramification_tags.iter().map(Vec::len).collect::<Vec<_>>(),
            "real": real.is_some(),
        },
        "values": label,
        "value_group_order": group.len(),
        "count": secs.len(),
        "listed": listed.len(),
        "sections": listed,
    }))
}

fn exact_sequences(f: &RealForm, seed: u64, as_json: bool) -> Out {
    let e = f.principal_triple()?.e.clone();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let xa = qsplit::centralizers::regular_a(f, &mut rng);
    let rows = [("nilpotent", exact_sequence_check(f, &e)?), ("semisimple", exact_sequence_check(f, &xa)?)];
    let ok = rows.iter().all(|r| r.1.holds);
    if as_json {
        print_json(&json!({ "form": f.name(), "holds": ok, "points": { "nilpotent": rows[0].1, "semisimple": rows[1].1 } }))?;
    } else {
        for (kind, r) in &rows {
            emit(&format!(
                "{} {kind}: |C_H| = {}, |C_Gtheta| = {}, |(F^2)_x| = {}\n",
                if r.holds { "PASS" } else { "FAIL" },
                r.components_h,
                r.components_gtheta,
                r.f_squared_at_x
            ));
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
