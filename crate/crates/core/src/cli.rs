//! The `transverify` command line: `expand`, `verify` and `derive`.
//!
//! Exit codes are 0 on success, 1 when an identity fails and 2 on usage
//! errors (bad names, orders below the minimum, malformed flags).

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::cancel::{coordinates, derive, CancellationCase, CancellationReport, CaseId};
use crate::charring::{phi_theta_route, phi_tilde_route, FormElement, RingSpec};
use crate::error::{Error, Result};
use crate::modforms::{FormName, ModularForm};
use crate::numeval::EvalConfig;
use crate::qseries::QExpansion;
use crate::suites::{run_suite, SuiteId, SuiteOptions, VerificationReport};
use crate::theta::{theta_expand, PhiFamily, ThetaFamily, YSeries};
use crate::transgress::{cs_form, CSForm, CsKind, CsVariant};

pub const QORDER_ENV: &str = "TRANSVERIFY_DEFAULT_QORDER";

#[derive(Parser, Debug)]
#[command(name = "transverify", version, about = "Exact q-series verification of transgressed modular forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a truncated expansion.
    Expand {
        kind: ExpandKind,
        /// theta|theta1|theta2|theta3, delta1..epsilon3, Phi_W, PhiTilde_L, CSPhi_W[xi], ...
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Residual tolerance for numerical checks.
        #[arg(long)]
        tol: Option<f64>,
        /// τ samples such as `1.1i,0.3+1.2i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tau: Vec<String>,
    },
    /// Derive a cancellation formula.
    Derive {
        case: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, env = QORDER_ENV)]
    q_order: Option<i64>,
    #[arg(long)]
    y_order: Option<i64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExpandKind {
    Theta,
    Modform,
    Phi,
    Cs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// 1 for a failed identity, 2 for everything the caller got wrong.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Decomposition { .. } | Error::PoleNotCancelled(_) | Error::Inhomogeneous(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Expand { kind, name, common } => {
            let text = expand(kind, &name, &common)?;
            emit(&text, &common.out)?;
            Ok(0)
        }
        Command::Verify { suite, common, tol, tau } => {
            let id: SuiteId = suite.parse()?;
            let mut eval = EvalConfig::default();
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
                }
                eval.tol = t;
            }
            if !tau.is_empty() {
                eval.tau_samples = tau.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?;
            }
            eval.validate()?;
            let opts = SuiteOptions { q_order: common.q_order, y_order: common.y_order, k: common.k, eval };
            let report = run_suite(id, &opts)?;
            emit(&render_report(&report, common.format)?, &common.out)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Derive { case, common } => {
            let id: CaseId = case.parse()?;
            let q = common.q_order.unwrap_or(SuiteId::Cancel(id).default_q_order());
            let report = derive(&CancellationCase::new(id, q))?;
            emit(&render_cancellation(&report, common.format)?, &common.out)?;
            Ok(if report.pass() { 0 } else { 1 })
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse complex number {s:?}")))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Rows for the markdown and csv renderings.
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn markdown(&self) -> String {
        let mut s = format!("| {} |\n", self.headers.join(" | "));
        s += &format!("|{}\n", "---|".repeat(self.headers.len()));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
            s += &format!("| {} |\n", cells.join(" | "));
        }
        s
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::InvalidArgument(e.to_string());
        w.write_record(&self.headers).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    fn render(&self, title: &str, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.csv(),
            _ => Ok(format!("## {title}\n\n{}", self.markdown())),
        }
    }
}

fn exponent(n: i64) -> String {
    Ratio::new(n, 8).to_string()
}

fn q_rows(prefix: &[String], s: &QExpansion, rows: &mut Vec<Vec<String>>) {
    for (n, c) in s.iter() {
        let mut r = prefix.to_vec();
        r.push(exponent(n));
        r.push(c.to_string());
        rows.push(r);
    }
    if let Some(t) = s.trunc_num() {
        let mut r = prefix.to_vec();
        r.push(format!("O({})", exponent(t)));
        r.push(String::new());
        rows.push(r);
    }
}

fn y_table(s: &YSeries) -> Table {
    let mut rows = Vec::new();
    for (m, c) in s.iter() {
        q_rows(&[m.to_string()], c, &mut rows);
    }
    Table { headers: vec!["y_degree", "q_exponent", "coefficient"], rows }
}

fn form_table(e: &FormElement) -> Table {
    let mut rows = Vec::new();
    for (m, c) in e.terms() {
        q_rows(&[m.to_string()], c, &mut rows);
    }
    Table { headers: vec!["monomial", "q_exponent", "coefficient"], rows }
}

fn modform_table(f: &ModularForm) -> Table {
    let mut rows = Vec::new();
    q_rows(&[], &f.series, &mut rows);
    Table { headers: vec!["q_exponent", "coefficient"], rows }
}

/// Parses `CSPhi_W`, `CSPhi_L[xi]`, `CSPhiTilde_W'` and similar.
fn parse_cs_kind(name: &str) -> Result<CsKind> {
    let bad = || Error::InvalidArgument(format!("unknown CS form {name:?}"));
    let (stem, xi) = match name.strip_suffix("[xi]") {
        Some(s) => (s, true),
        None => (name, false),
    };
    let rest = stem.strip_prefix("CS").ok_or_else(bad)?;
    let (variant, fam) = if let Some(f) = rest.strip_prefix("PhiTilde_") {
        if xi {
            return Err(bad());
        }
        (CsVariant::Tilde, f)
    } else if let Some(f) = rest.strip_prefix("Phi_") {
        (if xi { CsVariant::Xi } else { CsVariant::Tm }, f)
    } else {
        return Err(bad());
    };
    Ok(CsKind { variant, family: fam.parse::<PhiFamily>()? })
}

fn expand(kind: ExpandKind, name: &str, c: &Common) -> Result<String> {
    let q = c.q_order.unwrap_or(6);
    if q < 1 {
        return Err(Error::InsufficientOrder(format!("q-order must be at least 1, got {q}")));
    }
    let k = c.k.unwrap_or(1);
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    match kind {
        ExpandKind::Theta => {
            let fam: ThetaFamily = name.parse()?;
            let y = c.y_order.unwrap_or(8);
            if y < 1 {
                return Err(Error::InsufficientOrder(format!("y-order must be at least 1, got {y}")));
            }
            let s = theta_expand(fam, y, q);
            match c.format {
                Format::Json => to_json(&s),
                f => y_table(&s).render(&format!("{fam}, y-order {y}, q-order {q}"), f),
            }
        }
        ExpandKind::Modform => {
            let form = name.parse::<FormName>()?.build(q)?;
            match c.format {
                Format::Json => to_json(&form),
                f => {
                    let title = format!("{}, weight {} over {}", form.name, form.weight, form.group);
                    modform_table(&form).render(&title, f)
                }
            }
        }
        ExpandKind::Phi => {
            let (tilde, fam) = match name.strip_prefix("PhiTilde_") {
                Some(f) => (true, f.parse::<PhiFamily>()?),
                None => (false, name.parse::<PhiFamily>()?),
            };
            let (spec, e) = if tilde {
                let spec = Arc::new(RingSpec::tilde(k, q));
                let e = phi_tilde_route(fam, &spec)?;
                (spec, e)
            } else {
                let spec = Arc::new(RingSpec::tm(k, q));
                let e = phi_theta_route(fam, &spec)?;
                (spec, e)
            };
            let dim = if tilde { 4 * k + 1 } else { 4 * k - 1 };
            match c.format {
                Format::Json => to_json(&PhiDump { name, dimension: dim, q_order: spec.q_order, element: &e }),
                f => form_table(&e).render(&format!("{name} in dimension {dim}, q-order {q}"), f),
            }
        }
        ExpandKind::Cs => {
            let kind = parse_cs_kind(name)?;
            let spec = Arc::new(kind.variant.spec(k, q));
            let form: CSForm = cs_form(kind, &spec)?;
            match c.format {
                Format::Json => to_json(&form),
                f => form_table(&form.element).render(&format!("{kind} in dimension {}, q-order {q}", form.top_degree), f),
            }
        }
    }
}

#[derive(Serialize)]
struct PhiDump<'a> {
    name: &'a str,
    dimension: u32,
    q_order: i64,
    element: &'a FormElement,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn report_table(r: &VerificationReport) -> Table {
    let rows = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.id.clone(),
                status(c.passed()).to_string(),
                c.detail.clone(),
                c.orders.to_string(),
                c.anchor.clone(),
            ]
        })
        .collect();
    Table { headers: vec!["id", "status", "detail", "orders", "anchor"], rows }
}

fn render_report(r: &VerificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(r),
        Format::Csv => report_table(r).csv(),
        Format::Markdown => {
            let mut s = format!("# {}: {}\n\n{}", r.suite, status(r.pass), report_table(r).markdown());
            if let Some(c) = &r.cancellation {
                s += "\n";
                s += &cancellation_markdown(c);
            }
            Ok(s)
        }
    }
}

fn coordinate_table(r: &CancellationReport) -> Table {
    let rows = coordinates(r)
        .into_iter()
        .map(|(m, z0, z1)| vec![m, z0.to_string(), z1.to_string()])
        .collect();
    Table { headers: vec!["monomial", "z0", "z1"], rows }
}

fn cancellation_markdown(r: &CancellationReport) -> String {
    let mut s = format!("## {} at q-order {}\n\n", r.case, r.q_order);
    s += &format!("- residual zero: {}\n", r.residual_zero);
    s += &format!("- constant terms equal: {}\n", r.constants_equal);
    s += &format!("- displays: {}\n\n", r.matched_display);
    s += "### Coordinates\n\n";
    s += &coordinate_table(r).markdown();
    s += "\n### Constant-term identity\n\n";
    let rows = r
        .lhs_const
        .terms()
        .iter()
        .map(|(m, c)| vec![m.to_string(), c.coeff(0).to_string(), r.rhs_const.coeff(m).coeff(0).to_string()])
        .collect();
    s += &Table { headers: vec!["monomial", "lhs", "rhs"], rows }.markdown();
    s
}

fn render_cancellation(r: &CancellationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(r),
        Format::Csv => coordinate_table(r).csv(),
        Format::Markdown => Ok(cancellation_markdown(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cs_names_parse() {
        let k = parse_cs_kind("CSPhi_L[xi]").unwrap();
        assert_eq!((k.variant, k.family), (CsVariant::Xi, PhiFamily::L));
        let k = parse_cs_kind("CSPhiTilde_W'").unwrap();
        assert_eq!((k.variant, k.family), (CsVariant::Tilde, PhiFamily::WPrime));
        assert!(parse_cs_kind("CSPhiTilde_W[xi]").is_err());
        assert!(parse_cs_kind("Phi_W").is_err());
    }

    #[test]
    fn complex_flags_parse() {
        assert_eq!(parse_complex("1.1i").unwrap(), Complex64::new(0.0, 1.1));
        assert_eq!(parse_complex("-0.4+0.9i").unwrap(), Complex64::new(-0.4, 0.9));
        assert!(parse_complex("i1").is_err());
    }

    #[test]
    fn exponents_are_reduced() {
        assert_eq!(exponent(4), "1/2");
        assert_eq!(exponent(8), "1");
        assert_eq!(exponent(0), "0");
    }
}
