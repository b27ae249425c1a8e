//! The `hkrr` command line: argument parsing, dispatch, and JSON/markdown
//! reports. Exit codes: 0 success, 1 invalid input, 2 search cap reached,
//! 64 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cnconst::{cn_prime_support, cn_value, DEFAULT_MAX_BOUND, DEFAULT_STABILITY};
use crate::error::{CnError, SolverError};
use crate::exactpoly::{Poly, Rat};
use crate::hkprofile::{
    denominator_check, known_family_prr, profile_from_prr, real_root_classifier, even_values_check,
    Family,
};
use crate::isosolver::{case_constraints, solve_case_with_parity, IsotropicCase};
use crate::nwformula::{q_rr_from_chern, ChernData};
use crate::qkbasis::{
    decompose_qk, decompose_shifted, qk_closed_form_roots, qk_laurent_check, qk_poly, qk_roots,
    ROOT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the `cn` search cap.
pub const MAX_BOUND_ENV: &str = "HKRR_MAX_BOUND";

#[derive(Parser, Debug)]
#[command(
    name = "hkrr",
    version,
    about = "Exact computations with Riemann-Roch polynomials of hyper-Kähler manifolds"
)]
struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "markdown")]
    json: bool,
    /// Emit markdown rendered from the same report.
    #[arg(long, global = true)]
    markdown: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The gcd constant C_n with its certificate.
    Cn {
        n: u32,
        #[arg(long, default_value_t = DEFAULT_STABILITY)]
        stability: u32,
        #[arg(long)]
        max_bound: Option<u64>,
    },
    /// The polynomial Q_k.
    Qk {
        k: u32,
        #[arg(long)]
        roots: bool,
        #[arg(long)]
        laurent_check: bool,
    },
    /// Q_RR from Chern numbers.
    Nw {
        #[arg(long)]
        chern: PathBuf,
    },
    /// Invariants of a Riemann-Roch polynomial.
    Profile {
        #[arg(long, conflicts_with = "poly", requires = "n")]
        family: Option<FamilyArg>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, required_unless_present = "family")]
        poly: Option<PathBuf>,
    },
    /// Coefficients in the Q_k basis or in powers of (T + s).
    Decompose {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_enum)]
        basis: Basis,
        #[arg(long)]
        shift: Option<String>,
    },
    /// Case analysis for an isotropic class.
    Isotropic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
        /// Assume the quadratic form is not even.
        #[arg(long)]
        not_even: bool,
    },
    /// Denominator and even-value integrality checks.
    Check {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        even: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Split,
    Product,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Split => Family::Split,
            FamilyArg::Product => Family::Product,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    Qk,
    Shifted,
}

/// A rendered report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Known statements this result matches.
    pub reproduces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<CnError> for Failure {
    fn from(e: CnError) -> Self {
        let code = match e {
            CnError::SearchCapExceeded { .. } => EXIT_RESOURCE,
            CnError::ZeroN => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Cn(c) => c.into(),
            other => Failure::invalid(other),
        }
    }
}

/// Parse `argv` (including the program name) and run.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let markdown = cli.markdown;
    match dispatch(cli.command) {
        Ok(report) => Outcome {
            code: EXIT_OK,
            stdout: if markdown {
                render_markdown(&report)
            } else {
                render_json(&report)
            },
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("cannot parse {}: {e}", path.display())))
}

fn max_bound(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(MAX_BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(format!("{MAX_BOUND_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_BOUND),
    }
}

fn factorization_string(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".to_string();
    }
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

fn dispatch(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Cn {
            n,
            stability,
            max_bound: flag,
        } => {
            let cap = max_bound(flag)?;
            let cert = cn_value(n, stability, cap)?;
            let support = cn_prime_support(n);
            let mut results = to_value(&cert);
            results["prime_support"] = to_value(&support);
            let mut reproduces = vec![format!("C_{n} = {}", factorization_string(&cert.factorization))];
            let primes: Vec<u64> = cert.factorization.iter().map(|&(p, _)| p).collect();
            if primes == support.iter().map(|w| w.prime).collect::<Vec<_>>() {
                reproduces.push(format!("primes dividing C_{n} are exactly the primes <= {}", 2 * n - 1));
            }
            Ok(Report {
                command: "cn".into(),
                inputs: json!({"n": n, "stability": stability, "max_bound": cap}),
                results,
                reproduces,
            })
        }
        Command::Qk {
            k,
            roots,
            laurent_check,
        } => {
            let q = qk_poly(k);
            let mut results = json!({"k": k, "poly": to_value(&q), "display": q.to_string()});
            let mut reproduces = Vec::new();
            if laurent_check {
                let ok = qk_laurent_check(k);
                results["laurent_check"] = json!(ok);
                if ok {
                    reproduces.push(format!("T^{k} Q_{k}(T + 1/T - 2) = sum_{{j=0}}^{k} T^{{2j}}"));
                }
            }
            if roots {
                let found = qk_roots(k).map_err(Failure::invalid)?;
                let mut closed = qk_closed_form_roots(k);
                closed.sort_by(f64::total_cmp);
                results["roots"] = json!({
                    "approximate": found,
                    "closed_form": closed,
                    "tolerance": ROOT_TOLERANCE,
                });
                reproduces.push(format!("roots of Q_{k} are -4 sin^2(j pi / {}), j = 1..{k}", 2 * (k + 1)));
            }
            Ok(Report {
                command: "qk".into(),
                inputs: json!({"k": k, "roots": roots, "laurent_check": laurent_check}),
                results,
                reproduces,
            })
        }
        Command::Nw { chern } => {
            let data: ChernData = read_json(&chern)?;
            let q = q_rr_from_chern(&data);
            let n = data.n();
            let shift = q.symmetry_shift();
            let mut reproduces = Vec::new();
            if shift == Some(Rat::from_int(4)) {
                reproduces.push(format!("Q_RR(-T-4) = (-1)^{n} Q_RR(T)"));
            }
            Ok(Report {
                command: "nw".into(),
                inputs: json!({"chern": chern.display().to_string(), "n": n}),
                results: json!({
                    "q_rr": to_value(&q),
                    "display": q.to_string(),
                    "symmetry_shift": shift.map(|s| s.to_string()),
                }),
                reproduces,
            })
        }
        Command::Profile { family, n, poly } => {
            let (p, inputs) = match (family, poly) {
                (Some(f), _) => {
                    let n = n.ok_or_else(|| Failure::invalid("--family needs --n"))?;
                    if n == 0 {
                        return Err(Failure::invalid("n must be positive"));
                    }
                    let kind = Family::from(f);
                    (known_family_prr(kind, n), json!({"family": to_value(&kind), "n": n}))
                }
                (None, Some(path)) => {
                    let p: Poly = read_json(&path)?;
                    (p, json!({"poly": path.display().to_string(), "n": n}))
                }
                (None, None) => return Err(Failure::invalid("need --family or --poly")),
            };
            let n = match n {
                Some(n) => n,
                None => p
                    .degree()
                    .ok_or_else(|| Failure::invalid("zero polynomial"))? as u32,
            };
            let profile = profile_from_prr(n, &p).map_err(Failure::invalid)?;
            let verdict = real_root_classifier(&profile).map_err(Failure::invalid)?;
            let mut results = to_value(&profile);
            results["p_rr_display"] = json!(profile.p_rr.to_string());
            results["q_rr_display"] = json!(profile.q_rr.to_string());
            results["roots"] = to_value(&verdict);
            let mut reproduces = vec![format!("P_RR(-T-2n_X) = (-1)^{n} P_RR(T) with n_X = {}", profile.n_x)];
            if let Ok(b) = decompose_qk(&profile.q_rr) {
                let nonneg = b.iter().all(|x| !x.is_negative());
                results["qk_coefficients"] = to_value(&b);
                if nonneg && b[0] == profile.a_x {
                    reproduces.push("Q_RR is a nonnegative combination of Q_n, Q_{n-2}, ... with leading weight A_X".into());
                }
            }
            if verdict.all_real {
                reproduces.push("all roots of Q_RR are real".into());
            }
            Ok(Report {
                command: "profile".into(),
                inputs,
                results,
                reproduces,
            })
        }
        Command::Decompose { poly, basis, shift } => {
            let p: Poly = read_json(&poly)?;
            let (coeffs, basis_name, shift_value) = match basis {
                Basis::Qk => (decompose_qk(&p).map_err(Failure::invalid)?, "qk", None),
                Basis::Shifted => {
                    let s: Rat = match shift {
                        Some(s) => s.parse().map_err(Failure::invalid)?,
                        None => p
                            .symmetry_shift()
                            .map(|s| s / Rat::from_int(2))
                            .ok_or_else(|| Failure::invalid("no symmetry; pass --shift"))?,
                    };
                    (decompose_shifted(&p, &s).map_err(Failure::invalid)?, "shifted", Some(s))
                }
            };
            let n = p.degree().unwrap_or(0);
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| match (&shift_value, n - 2 * i) {
                    (None, d) => format!("({c})*Q_{d}"),
                    (Some(_), 0) => format!("({c})"),
                    (Some(s), 1) => format!("({c})*(T+{s})"),
                    (Some(s), d) => format!("({c})*(T+{s})^{d}"),
                })
                .collect();
            Ok(Report {
                command: "decompose".into(),
                inputs: json!({
                    "poly": poly.display().to_string(),
                    "basis": basis_name,
                    "shift": shift_value.as_ref().map(Rat::to_string),
                }),
                results: json!({"coefficients": to_value(&coeffs), "display": terms.join(" + ")}),
                reproduces: Vec::new(),
            })
        }
        Command::Isotropic { n, a, not_even } => {
            let even_form = not_even.then_some(false);
            let inputs = json!({"n": n, "a": a, "not_even": not_even});
            match solve_case_with_parity(n, a, even_form) {
                Ok(case) => {
                    let reproduces = isotropic_labels(&case);
                    Ok(Report {
                        command: "isotropic".into(),
                        inputs,
                        results: to_value(&case),
                        reproduces,
                    })
                }
                Err(SolverError::UnsupportedCase { .. }) if n > 0 && a > 0 => {
                    let constraints: Vec<Value> = case_constraints(n, a)?
                        .into_iter()
                        .map(|(q, c, b, l)| json!({"q_lm": q, "c_x": to_value(&c), "bound": to_value(&b), "coupling": to_value(&l)}))
                        .collect();
                    Ok(Report {
                        command: "isotropic".into(),
                        inputs,
                        results: json!({
                            "elimination": "not mechanized for this case; constraints only",
                            "branches": constraints,
                        }),
                        reproduces: Vec::new(),
                    })
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Check { poly, n, even } => {
            let p: Poly = read_json(&poly)?;
            if p.degree() != Some(n as usize) {
                return Err(Failure::invalid(format!(
                    "polynomial has degree {:?}, expected {n}",
                    p.degree()
                )));
            }
            let den = denominator_check(n, &p, even)?;
            let ev = even_values_check(n, &p);
            let mut reproduces = Vec::new();
            if den.holds() {
                reproduces.push(format!("a_i ∈ 1/({}C_n) Z and c_X ∈ (2n)!/(2^n C_n) Z", if even { "2^i " } else { "" }));
            }
            if ev.holds() {
                reproduces.push("c_X ∈ (2n-1)!! Z".into());
            }
            Ok(Report {
                command: "check".into(),
                inputs: json!({"poly": poly.display().to_string(), "n": n, "even": even}),
                results: json!({
                    "denominators": to_value(&den),
                    "even_values": to_value(&ev),
                    "holds": den.holds() && ev.holds(),
                }),
                reproduces,
            })
        }
    }
}

fn isotropic_labels(case: &IsotropicCase) -> Vec<String> {
    let mut out = Vec::new();
    let live: Vec<_> = case.branches.iter().filter(|b| !b.survivors.is_empty()).collect();
    if let [b] = live.as_slice() {
        let nx: Vec<String> = case.n_x.iter().map(Rat::to_string).collect();
        out.push(format!(
            "n = {}, a = {}: q(l,m) = {}, c_X = {}, n_X ∈ {{{}}}, form {}",
            case.n,
            case.a,
            b.q_lm,
            b.c_x,
            nx.join(", "),
            case.parity
        ));
    }
    for b in case.branches.iter().filter(|b| b.survivors.is_empty()) {
        out.push(format!("q(l,m) = {} does not occur", b.q_lm));
    }
    out
}

/// Markdown view of a report. `isotropic` reports follow the case
/// structure (branch, then value, then rule); the rest are nested lists.
pub fn render_markdown(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", report.command);
    let _ = writeln!(s, "## Inputs\n");
    write_value(&mut s, &report.inputs, 0);
    let _ = writeln!(s, "\n## Results\n");
    if report.command == "isotropic" && report.results.get("branches").is_some_and(|b| b.is_array())
        && report.results.get("parity").is_some()
    {
        write_isotropic(&mut s, &report.results);
    } else {
        write_value(&mut s, &report.results, 0);
    }
    if !report.reproduces.is_empty() {
        let _ = writeln!(s, "\n## Reproduces\n");
        for r in &report.reproduces {
            let _ = writeln!(s, "- {r}");
        }
    }
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(items) if items.iter().all(|i| i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn write_value(s: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(text) => {
                        let _ = writeln!(s, "{pad}- {k}: {text}");
                    }
                    None => {
                        let _ = writeln!(s, "{pad}- {k}:");
                        write_value(s, item, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(text) => {
                        let _ = writeln!(s, "{pad}{}. {text}", i + 1);
                    }
                    None => {
                        let _ = writeln!(s, "{pad}{}.", i + 1);
                        write_value(s, item, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(s, "{pad}- {}", scalar(other).unwrap_or_default());
        }
    }
}

fn residue_text(v: &Value) -> String {
    format!("{} mod {}", scalar(&v["allowed"]).unwrap_or_default(), text_of(&v["modulus"]))
}

fn text_of(v: &Value) -> String {
    scalar(v).unwrap_or_default()
}

fn write_isotropic(s: &mut String, results: &Value) {
    let text = |v: &Value| scalar(v).unwrap_or_default();
    let _ = writeln!(s, "- C_n: {}", text(&results["c_n"]));
    let _ = writeln!(s, "- q(l,m) candidates (even form): {}", text(&results["qlm_even"]));
    let _ = writeln!(s, "- q(l,m) candidates (not even): {}", text(&results["qlm_not_even"]));
    let _ = writeln!(s, "- n_X: {}", text(&results["n_x"]));
    let _ = writeln!(s, "- form: {}", text(&results["parity"]));
    for b in results["branches"].as_array().into_iter().flatten() {
        let _ = writeln!(
            s,
            "\n### q(l,m) = {}: c_X = {}, verdict {}\n",
            text(&b["q_lm"]),
            text(&b["c_x"]),
            text(&b["parity"])
        );
        let _ = writeln!(s, "- m_X < {}", text(&b["bound"]["bound"]));
        for f in b["coupling"]["facts"].as_array().into_iter().flatten() {
            let _ = writeln!(s, "- {}", text(f));
        }
        let var = text(&b["variable"]);
        let mut last = None;
        for t in b["traces"].as_array().into_iter().flatten() {
            let value = text(&t["value"]);
            if last.as_ref() != Some(&value) {
                let _ = writeln!(s, "\n#### {var} = {value}\n");
                last = Some(value);
            }
            let verdict = match &t["rejected_by"] {
                Value::Null => "survives".to_string(),
                r => format!("rejected by {}", text(r)),
            };
            let _ = writeln!(s, "- {} form: {verdict}", text(&t["parity"]));
            for step in t["steps"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    s,
                    "  - {}: {} ({})",
                    text(&step["rule"]),
                    residue_text(&step["residues"]),
                    text(&step["detail"])
                );
            }
        }
        for sv in b["survivors"].as_array().into_iter().flatten() {
            let _ = writeln!(
                s,
                "- survivor n_X = {}: P_RR coefficients {}",
                text(&sv["n_x"]),
                text(&sv["p_rr"]["coeffs"])
            );
        }
    }
}
