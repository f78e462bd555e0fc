use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyforge_core::gw::gw_pipeline;
use cyforge_core::io::{integer_strings, parse_input, InputFile};
use cyforge_core::period::{period_coefficients, principal_period};
use cyforge_core::pfops::{default_exponents, fit_operator_with_stride, Fit};
use cyforge_core::pipeline::{analyze_input, period_support, AnalyzeOptions};
use cyforge_core::series::rational_to_string;
use cyforge_core::{DiffOperator, Orientation, Rational, Report, Role, Support};
use rayon::prelude::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cyforge", version, about = "Conifold transitions of toric Calabi-Yau hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Reading {
    /// Treat the input as the dual polytope (overrides `# role:`)
    #[arg(long)]
    dual: bool,
    /// Read a 4x4 vertex matrix column-wise
    #[arg(long)]
    transpose: bool,
}

impl Reading {
    fn role(&self) -> Option<Role> {
        self.dual.then_some(Role::Dual)
    }

    fn orientation(&self) -> Orientation {
        if self.transpose {
            Orientation::ColumnsArePoints
        } else {
            Orientation::Auto
        }
    }
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Vertex matrix or Laurent polynomial file
    file: Option<PathBuf>,
    /// Laurent polynomial given inline, read as the support of the period
    #[arg(long)]
    laurent: Option<String>,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct GwSource {
    file: Option<PathBuf>,
    #[arg(long)]
    laurent: Option<String>,
    /// Expanded operator text such as "T^4 - 3125*z*T^4 - ... - 120*z"; needs --h3
    #[arg(long)]
    operator: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Conifold, Hodge and topological data of one polytope
    Analyze {
        file: PathBuf,
        #[arg(long)]
        multiplicity: Option<i64>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        reading: Reading,
        /// Also fit a Picard-Fuchs operator from this many period terms
        #[arg(long)]
        period_order: Option<usize>,
        /// Instanton numbers to compute after fitting
        #[arg(long, requires = "period_order")]
        nmax: Option<usize>,
    },
    /// Coefficients c_0..c_N of the principal period
    Period {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        reading: Reading,
    },
    /// Fit a Picard-Fuchs operator; --order is the depth in x = z^stride
    PfFit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        dmax: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        reading: Reading,
    },
    /// Mirror map and genus-0 instanton numbers
    Gw {
        #[command(flatten)]
        source: GwSource,
        #[arg(long)]
        nmax: usize,
        /// Triple intersection; computed from the polytope when omitted
        #[arg(long)]
        h3: Option<i64>,
        /// Series depth used to fit the operator
        #[arg(long, default_value_t = 25)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        dmax: usize,
        #[arg(long)]
        multiplicity: Option<i64>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        reading: Reading,
    },
    /// Look for (1+cz)^e relating two operators under z -> z/(1+cz)
    TransformCheck {
        /// Operator text or a file containing it
        opa: String,
        opb: String,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        c: Rational,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Also compare instanton numbers computed with this H^3
        #[arg(long)]
        h3: Option<i64>,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Analyze every file of a directory
    Batch {
        dir: PathBuf,
        #[arg(long, env = "CYFORGE_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn domain(context: &str) -> impl Fn(String) -> Failure + '_ {
    move |e| Failure::Domain(format!("{context}: {e}"))
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("'{s}' is not a rational number: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, reading: &Reading) -> Result<InputFile, Failure> {
    let text = read(path)?;
    parse_input(&text, reading.orientation()).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_inline(expr: &str) -> Result<InputFile, Failure> {
    let mut f = parse_input(expr, Orientation::Auto).map_err(|e| Failure::Domain(format!("--laurent: {e}")))?;
    f.role = Some(Role::Dual);
    Ok(f)
}

fn load_source(file: &Option<PathBuf>, laurent: &Option<String>, reading: &Reading) -> Result<(String, InputFile), Failure> {
    match (file, laurent) {
        (Some(p), _) => Ok((p.display().to_string(), load(p, reading)?)),
        (None, Some(e)) => Ok(("--laurent".to_string(), load_inline(e)?)),
        (None, None) => Err(Failure::Usage("an input file or --laurent is required".into())),
    }
}

fn support_of(name: &str, input: &InputFile, reading: &Reading) -> Result<Support, Failure> {
    let role = reading.role().or(input.role).unwrap_or_default();
    period_support(input, role).map_err(|e| domain(name)(e.to_string()))
}

fn fit(name: &str, support: &Support, depth: usize, dmax: usize) -> Result<Fit, Failure> {
    let g = support.stride().unwrap_or(1);
    let series = principal_period(support, depth * g);
    fit_operator_with_stride(&series, dmax).map_err(|e| domain(name)(e.to_string()))
}

fn print_json(v: &serde_json::Value) {
    println!("{v}");
}

fn render_report(r: &Report) -> String {
    let v = serde_json::to_value(r).expect("reports serialize");
    let mut out = String::new();
    for (k, v) in v.as_object().expect("object").iter() {
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Array(a) => a.iter().map(|x| x.to_string().replace('"', "")).collect::<Vec<_>>().join(" "),
            other => other.to_string(),
        };
        out.push_str(&format!("{k}: {text}\n"));
    }
    out
}

fn emit_report(r: &Report, json: bool) {
    if json {
        print_report_json(r);
    } else {
        print!("{}", render_report(r));
    }
}

fn print_report_json(r: &Report) {
    println!("{}", serde_json::to_string(r).expect("reports serialize"));
}

fn report_outcome(r: &Report) -> Outcome {
    match &r.error {
        Some(e) => Err(Failure::Domain(format!("{}: {e}", r.source))),
        None => Ok(()),
    }
}

fn operator_arg(s: &str) -> Result<DiffOperator, Failure> {
    let path = Path::new(s);
    let text = if path.is_file() { read(path)? } else { s.to_string() };
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join(" ");
    DiffOperator::parse(&body).map_err(|e| domain(s)(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { file, multiplicity, json, reading, period_order, nmax } => {
            let input = load(&file, &reading)?;
            let opts = AnalyzeOptions {
                role: reading.role(),
                multiplicity,
                orientation: reading.orientation(),
                period_order,
                instantons: nmax,
            };
            let r = analyze_input(&file.display().to_string(), &input, &opts);
            emit_report(&r, json);
            report_outcome(&r)
        }
        Command::Period { source, order, json, reading } => {
            let (name, input) = load_source(&source.file, &source.laurent, &reading)?;
            let support = support_of(&name, &input, &reading)?;
            let c = period_coefficients(&support, order);
            let stride = support.stride();
            if json {
                print_json(&json!({
                    "source": name,
                    "order": order,
                    "stride": stride,
                    "coefficients": integer_strings(&c.into_iter().map(Into::into).collect::<Vec<_>>()),
                }));
            } else {
                for (k, ck) in c.iter().enumerate() {
                    println!("{k} {ck}");
                }
            }
            Ok(())
        }
        Command::PfFit { source, order, dmax, json, reading } => {
            let (name, input) = load_source(&source.file, &source.laurent, &reading)?;
            let support = support_of(&name, &input, &reading)?;
            let f = fit(&name, &support, order, dmax)?;
            if json {
                print_json(&json!({
                    "source": name,
                    "stride": f.stride,
                    "depth": f.depth,
                    "degree": f.operator.degree(),
                    "calabi_yau": f.operator.is_calabi_yau(),
                    "operator": f.operator.to_table(),
                    "operator_text": f.operator.to_text(),
                }));
            } else {
                println!("x = z^{}", f.stride);
                println!("{}", f.operator);
            }
            Ok(())
        }
        Command::Gw { source, nmax, h3, order, dmax, multiplicity, json, reading } => {
            let (name, op, h3) = match (&source.operator, h3) {
                (Some(text), Some(h)) => ("--operator".to_string(), operator_arg(text)?, h),
                (Some(_), None) => return Err(Failure::Usage("--operator needs --h3".into())),
                (None, _) => {
                    let (name, input) = load_source(&source.file, &source.laurent, &reading)?;
                    let h = match h3 {
                        Some(h) => h,
                        None => {
                            let opts = AnalyzeOptions { role: reading.role(), multiplicity, ..Default::default() };
                            let r = analyze_input(&name, &input, &opts);
                            report_outcome(&r)?;
                            r.h_cubed.ok_or_else(|| {
                                Failure::Domain(format!("{name}: H^3 is only defined for one-parameter smoothings; pass --h3"))
                            })?
                        }
                    };
                    let support = support_of(&name, &input, &reading)?;
                    (name.clone(), fit(&name, &support, order, dmax)?.operator, h)
                }
            };
            let data = gw_pipeline(&op, h3, nmax).map_err(|e| domain(&name)(e.to_string()))?;
            if json {
                print_json(&json!({
                    "source": name,
                    "h3": h3,
                    "operator_text": op.to_text(),
                    "mirror_map": data.mirror_map.q_of_z.coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
                    "yukawa": data.yukawa.coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
                    "instantons": integer_strings(&data.instantons),
                }));
            } else {
                for (d, n) in data.instantons.iter().enumerate() {
                    println!("n_{} = {n}", d + 1);
                }
            }
            Ok(())
        }
        Command::TransformCheck { opa, opb, c, order, h3, nmax, json } => {
            let a = operator_arg(&opa)?;
            let b = operator_arg(&opb)?;
            let e = cyforge_core::pfops::mobius_equivalent(&a, &b, &c, &default_exponents(), order);
            let same = match h3 {
                Some(h) => {
                    let na = gw_pipeline(&a, h, nmax).map_err(|e| domain(&opa)(e.to_string()))?.instantons;
                    let nb = gw_pipeline(&b, h, nmax).map_err(|e| domain(&opb)(e.to_string()))?.instantons;
                    Some(na == nb)
                }
                None => None,
            };
            if json {
                print_json(&json!({
                    "c": rational_to_string(&c),
                    "exponent": e.as_ref().map(rational_to_string),
                    "instantons_equal": same,
                }));
            } else {
                match &e {
                    Some(e) => println!("exponent {}", rational_to_string(e)),
                    None => println!("no exponent found"),
                }
                if let Some(s) = same {
                    println!("instantons equal: {s}");
                }
            }
            match (e, same) {
                (None, _) => Err(Failure::Domain("operators are not related by this transformation".into())),
                (_, Some(false)) => Err(Failure::Domain("instanton numbers differ".into())),
                _ => Ok(()),
            }
        }
        Command::Batch { dir, jobs, json } => batch(&dir, jobs, json),
    }
}

fn batch(dir: &Path, jobs: Option<usize>, json: bool) -> Outcome {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
        .collect();
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let reports: Vec<Report> = pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                let name = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
                let parsed = fs::read_to_string(p)
                    .map_err(|e| e.to_string())
                    .and_then(|t| parse_input(&t, Orientation::Auto).map_err(|e| e.to_string()));
                match parsed {
                    Ok(input) => analyze_input(&name, &input, &AnalyzeOptions::default()),
                    Err(e) => Report { source: name, error: Some(e), ..Report::default() },
                }
            })
            .collect()
    });
    let mut failed = 0;
    for r in &reports {
        if json {
            print_report_json(r);
        } else {
            println!("== {}", r.source);
            print!("{}", render_report(r));
        }
        if let Some(e) = &r.error {
            eprintln!("{}: {e}", r.source);
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure::Domain(format!("{failed} of {} inputs failed", reports.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
