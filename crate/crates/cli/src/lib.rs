//! Command-line front end: argument parsing, configuration and reporting.
//!
//! [`run`] is the whole program; `main` only wires it to the process.

pub mod output;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use solvtwist::annulus::{balance_data, sub_annulus_area, sub_annulus_area_closed};
use solvtwist::families::{glue_parameters, LeafwiseFamily, ALPHA};
use solvtwist::flat_surface::{dilatation, eigen_slopes, genus2_example, Mat2};
use solvtwist::quadrature::QuadConfig;
use solvtwist::suspension::{MappingTorus, MarkedCurve};
use solvtwist::wp_bounds::{genus_family_report, twisted_bound, DEFAULT_MAX_GENUS, FAMILY_TAU};
use solvtwist::Error;

use output::{fmt_num, json_string, text_lines};

pub const TOL_ENV: &str = "SOLVTWIST_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Json,
    Csv,
    Text,
}

/// Effective settings for one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub quad_rel_tol: f64,
    pub quad_budget: usize,
    /// `None` selects the verb's natural format.
    pub output: Option<OutputMode>,
    pub precision_digits: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { quad_rel_tol: 1e-9, quad_budget: 1_000_000, output: None, precision_digits: 12 }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol.is_finite()) {
            return Err(format!("tolerance must be positive, got {}", self.quad_rel_tol));
        }
        if self.quad_budget < 1000 {
            return Err(format!("quadrature budget must be at least 1000, got {}", self.quad_budget));
        }
        if !(1..=17).contains(&self.precision_digits) {
            return Err(format!("precision must be between 1 and 17 digits, got {}", self.precision_digits));
        }
        Ok(())
    }

    fn quad(&self) -> QuadConfig<f64> {
        QuadConfig { rel_tol: self.quad_rel_tol, budget: self.quad_budget }
    }
}

#[derive(Debug, Parser)]
#[command(name = "solvtwist", version, about = "Dilatations, annulus numerics and WP translation-length bounds")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Relative quadrature tolerance [env: SOLVTWIST_TOL] [default: 1e-9]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Maximum number of quadrature subintervals (at least 1000)
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: usize,
    /// Significant digits of every printed float, rounded half to even
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    /// Output format; defaults to the verb's natural format
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,
}

#[derive(Debug, Args)]
struct FormatFlags {
    /// Shorthand for --output json
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Shorthand for --output csv
    #[arg(long)]
    csv: bool,
}

impl FormatFlags {
    fn mode(&self, cfg: &Config, natural: OutputMode) -> OutputMode {
        if self.json {
            OutputMode::Json
        } else if self.csv {
            OutputMode::Csv
        } else {
            cfg.output.unwrap_or(natural)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Pinch,
    Repar,
    Twist,
    Glued,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Genus-2 family: 4 ln(lambda) <= 14.95 and normalized WP length <= 124
    C57,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// WP translation-length bounds for every twist along a curve
    #[command(
        allow_negative_numbers = true,
        after_help = "CSV columns: linch,twisted_safe,twisted_constructed,twistbound_rho,normalized,volume_upper,\
                      params.chi,params.tau,params.teich_length,params.rho,params.h_min,params.h_constructed,params.c"
    )]
    Bound {
        /// Teichmuller translation length of the base map
        #[arg(long)]
        teich: f64,
        /// Euler characteristic of the fiber
        #[arg(long)]
        chi: i64,
        /// Twisting coefficient of the curve
        #[arg(long)]
        tau: i64,
        /// Gluing slack; 1 reports the rho -> 1 limit
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Sample the integrand of a leafwise conformal family
    #[command(allow_negative_numbers = true, after_help = "CSV columns: s,integrand,sqrt_integrand")]
    Family {
        #[arg(long, value_enum)]
        kind: FamilyArg,
        /// Pinch: final time
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        /// Repar and glued: half-length of the solid torus
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Repar: interval start
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        /// Repar: interval end [default: 0.9 h]
        #[arg(long)]
        hi: Option<f64>,
        /// Twist and glued: twist power
        #[arg(long, default_value_t = 1)]
        k: i64,
        /// Twist: half-width of the twisting interval
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Twist: half-modulus [default: 1.01 times the threshold]
        #[arg(long)]
        m: Option<f64>,
        /// Twist: integrand ceiling
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Glued: gluing slack, > 1
        #[arg(long, default_value_t = 1.1)]
        rho: f64,
        /// Number of subintervals; N + 1 rows are printed
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Hyperbolic area of a sub-annulus, closed form against quadrature
    #[command(after_help = "CSV columns: closed,quadrature,abs_err")]
    Area {
        /// Half-modulus m of the annulus
        #[arg(long)]
        modulus: f64,
        /// Fraction a of the core strip; 0.5 gives the middle sub-annulus
        #[arg(long, default_value_t = 0.5)]
        fraction: f64,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Balance-time invariants of the flat solid torus
    #[command(after_help = "CSV columns: m0,h,r,qc_norm")]
    Balance {
        #[arg(long)]
        tau: i64,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Fill the drilled solid torus about a curve and print the monodromy
    #[command(allow_negative_numbers = true, after_help = "CSV columns: curve,k,r,word")]
    Surger {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value = ALPHA)]
        curve: String,
        /// Mapping torus as JSON [default: genus-2 example with alpha, tau 11]
        #[arg(long)]
        torus: Option<std::path::PathBuf>,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Exact dilatation and eigen-slopes of an integer matrix
    #[command(
        allow_negative_numbers = true,
        after_help = "CSV columns: matrix,trace,lambda,lambda_float,lambda_error,expanding_slope,contracting_slope"
    )]
    Dilatation {
        /// Entries a,b,c,d of (a b; c d)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [41, 2, 20, 1])]
        matrix: Vec<i64>,
        #[command(flatten)]
        fmt: FormatFlags,
    },
    /// Recompute a published table of constants
    #[command(
        after_help = "CSV columns: genus,chi,teich_bound,wp_bound,wp_ceiling,normalized,in_phi"
    )]
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_MAX_GENUS)]
        max_genus: u32,
        #[command(flatten)]
        fmt: FormatFlags,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Run with the process environment.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let env_tol = std::env::var(TOL_ENV).ok();
    run_with_env(argv, env_tol.as_deref(), out, err)
}

/// Run with an explicit value for `SOLVTWIST_TOL`.
pub fn run_with_env(argv: &[String], env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = config(&cli.global, env_tol).and_then(|cfg| dispatch(&cli.verb, &cfg));
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_convergence() {
                EXIT_CONVERGENCE
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

fn config(global: &GlobalArgs, env_tol: Option<&str>) -> Result<Config, Failure> {
    let env = env_tol
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("{TOL_ENV}={s:?} is not a number"))))
        .transpose()?;
    let defaults = Config::default();
    let cfg = Config {
        quad_rel_tol: global.tol.or(env).unwrap_or(defaults.quad_rel_tol),
        quad_budget: global.budget,
        output: global.output,
        precision_digits: global.precision,
    };
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn dispatch(verb: &Verb, cfg: &Config) -> Result<String, Failure> {
    let digits = cfg.precision_digits;
    match verb {
        Verb::Bound { teich, chi, tau, rho, fmt } => {
            let report = twisted_bound(*teich, *chi, *tau, *rho)?;
            let v = serde_json::to_value(report).expect("report serializes");
            Ok(render_record(v, fmt.mode(cfg, OutputMode::Text), digits))
        }
        Verb::Family { kind, t_max, h, lo, hi, k, eps, m, delta, rho, samples, fmt } => {
            let family = match kind {
                FamilyArg::Pinch => LeafwiseFamily::pinch(*t_max)?,
                FamilyArg::Repar => LeafwiseFamily::repar(*h, *lo, hi.unwrap_or(0.9 * h))?,
                FamilyArg::Twist => {
                    let m = match m {
                        Some(m) => *m,
                        None => 1.01 * solvtwist::families::twist_threshold(*k, *eps, *delta)?.max(1e-12),
                    };
                    LeafwiseFamily::twist(*k, *eps, m, *delta)?
                }
                FamilyArg::Glued => LeafwiseFamily::glued(glue_parameters(*k, *h, *rho)?)?,
            };
            let rows = family.sample(*samples)?;
            Ok(render_family(&rows, fmt.mode(cfg, OutputMode::Csv), digits))
        }
        Verb::Area { modulus, fraction, fmt } => {
            let closed = sub_annulus_area_closed(*fraction, *modulus)?;
            let quadrature = sub_annulus_area(*fraction, *modulus, &cfg.quad())?;
            let v = json!({"closed": closed, "quadrature": quadrature, "abs_err": (closed - quadrature).abs()});
            Ok(render_record(v, fmt.mode(cfg, OutputMode::Json), digits))
        }
        Verb::Balance { tau, fmt } => {
            let b = balance_data::<f64>(*tau)?;
            let v = json!({"m0": b.m0.to_string(), "h": b.h, "r": b.r, "qc_norm": b.qc_norm});
            Ok(render_record(v, fmt.mode(cfg, OutputMode::Text), digits))
        }
        Verb::Surger { k, curve, torus, fmt } => {
            let base = match torus {
                Some(path) => load_torus(path)?,
                None => default_torus()?,
            };
            let r = base.curve(curve)?.balance().r;
            let word = base.surger(curve, *k)?.word().to_string();
            let v = json!({"curve": curve, "k": k, "r": r, "word": word});
            match fmt.mode(cfg, OutputMode::Text) {
                OutputMode::Text => Ok(format!("{word}\n")),
                mode => Ok(render_record(v, mode, digits)),
            }
        }
        Verb::Dilatation { matrix, fmt } => {
            let &[a, b, c, d] = matrix.as_slice() else {
                return Err(Failure::Usage(format!("--matrix needs 4 entries, got {}", matrix.len())));
            };
            let m = Mat2::from_ints(a, b, c, d);
            let lambda = dilatation(&m)?;
            let (up, down) = eigen_slopes(&m)?;
            let approx = lambda.to_f64_bounded();
            let v = json!({
                "matrix": m.to_string(),
                "trace": m.trace()?.to_string(),
                "lambda": lambda.to_string(),
                "lambda_float": approx.value,
                "lambda_error": approx.error,
                "expanding_slope": up.to_string(),
                "contracting_slope": down.to_string(),
            });
            Ok(render_record(v, fmt.mode(cfg, OutputMode::Text), digits))
        }
        Verb::Reproduce { target: Target::C57, max_genus, fmt } => {
            let rep = genus_family_report::<f64>(*max_genus)?;
            match fmt.mode(cfg, OutputMode::Text) {
                OutputMode::Json => {
                    Ok(json_string(serde_json::to_value(&rep).expect("report serializes"), digits) + "\n")
                }
                OutputMode::Csv => Ok(genus_csv(&rep, digits)),
                OutputMode::Text => {
                    let mut s = format!(
                        "lambda = {} ~ {}\ntau = {}\nh = {}\nc = {}\n",
                        rep.lambda,
                        fmt_num(rep.lambda_float, digits),
                        rep.tau,
                        fmt_num(rep.h, digits),
                        fmt_num(rep.c, digits)
                    );
                    for c in &rep.checks {
                        let verdict = if c.pass { "PASS" } else { "FAIL" };
                        s += &format!("{verdict} {}: {}\n", c.name, fmt_num(c.value, digits));
                    }
                    Ok(s + &genus_csv(&rep, digits))
                }
            }
        }
    }
}

fn genus_csv(rep: &solvtwist::GenusFamilyReport64, digits: usize) -> String {
    let mut s = String::from("genus,chi,teich_bound,wp_bound,wp_ceiling,normalized,in_phi\n");
    for r in &rep.genus_table {
        s += &format!(
            "{},{},{},{},{},{},{}\n",
            r.genus,
            r.chi,
            fmt_num(r.teich_bound, digits),
            fmt_num(r.wp_bound, digits),
            fmt_num(r.wp_ceiling, digits),
            fmt_num(r.normalized, digits),
            r.in_phi
        );
    }
    s
}

fn render_record(v: Value, mode: OutputMode, digits: usize) -> String {
    match mode {
        OutputMode::Json => json_string(v, digits) + "\n",
        OutputMode::Text => text_lines(&v, digits),
        OutputMode::Csv => {
            let flat = text_lines(&v, digits);
            let (keys, values): (Vec<&str>, Vec<String>) = flat
                .lines()
                .map(|line| {
                    let (k, val) = line.split_once(" = ").expect("text lines are key = value");
                    (k, csv_field(val))
                })
                .unzip();
            format!("{}\n{}\n", keys.join(","), values.join(","))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_family(rows: &[(f64, f64)], mode: OutputMode, digits: usize) -> String {
    match mode {
        OutputMode::Json => {
            let v: Vec<Value> =
                rows.iter().map(|&(s, f)| json!({"s": s, "integrand": f, "sqrt_integrand": f.sqrt()})).collect();
            json_string(Value::Array(v), digits) + "\n"
        }
        OutputMode::Csv | OutputMode::Text => {
            let mut out = String::from("s,integrand,sqrt_integrand\n");
            for &(s, f) in rows {
                out += &format!("{},{},{}\n", fmt_num(s, digits), fmt_num(f, digits), fmt_num(f.sqrt(), digits));
            }
            out
        }
    }
}

fn load_torus(path: &std::path::Path) -> Result<MappingTorus<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Core(Error::Parse(format!("{}: {e}", path.display()))))
}

/// Genus-2 example with `alpha` marked at twisting coefficient 11.
fn default_torus() -> Result<MappingTorus<f64>, Failure> {
    let ex = genus2_example();
    let teich = ex.lambda.to_f64().ln();
    Ok(MappingTorus::new(ex.chi, teich, vec![MarkedCurve::new(ALPHA, FAMILY_TAU)?])?)
}
