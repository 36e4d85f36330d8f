//! The `irrfib` command line.
//!
//! Output goes to the supplied writers so the whole front end can be driven
//! from tests. Exit status: 0 on success, 1 on a domain error, 2 on a usage
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adapted::{construct_adapted_basis, verify_adapted_basis, AdaptedBasisProblem};
use crate::invariants::{check_range, invariants, SurfaceInvariants};
use crate::lattice::{
    associated_degree, conjugacy_invariants, frobenius_basis, format_polynomial, AlternatingForm,
    ConjugacyInvariants, IntMatrix, MatrixJson, SymplecticMatrix,
};
use crate::modular::{modular_data, CuspRegularity, ModularCurveData};
use crate::numeric::format_rational;
use crate::period::{
    abelian_restriction_type, distinguish, lattice_sections, monodromy_at_cusp, parse_complex,
    parse_complex_matrix, period_matrix, Distinction, PeriodData, DEFAULT_TOLERANCE,
};

pub const TOLERANCE_ENV: &str = "IRRFIB_TOL";

#[derive(Parser, Debug)]
#[command(name = "irrfib", version, about = "Symplectic lattices, period families and surface invariants")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Regular,
    Irregular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvariantsMode {
    Table,
}

/// Inclusive range written `a:b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DRange(pub u64, pub u64);

impl std::str::FromStr for DRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
        let a: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(DRange(a, b))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Genus and cusp count of X(d).
    Modular {
        #[arg(long, required_unless_present = "d_range", conflicts_with = "d_range")]
        d: Option<u64>,
        #[arg(long)]
        d_range: Option<DRange>,
    },
    /// Invariants of the genus-2 or genus-3 prototype surface.
    Invariants {
        /// `table` prints one row per level in --d-range.
        mode: Option<InvariantsMode>,
        #[arg(long)]
        g: u32,
        #[arg(long, conflicts_with = "d_range")]
        d: Option<u64>,
        #[arg(long)]
        d_range: Option<DRange>,
    },
    /// Verify every invariant identity over a range of levels.
    Check {
        #[arg(long, default_value = "3:100")]
        d_range: DRange,
    },
    /// Construct and verify an adapted basis.
    AdaptedBasis {
        /// JSON file with fields g, d, U, form, U_A, U_E.
        #[arg(long)]
        input: PathBuf,
    },
    /// Lattice sections and normalized period matrix of J(z).
    Period {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        d: u64,
        /// (g-1)x(g-1) matrix: rows of ["re","im"] pairs.
        #[arg(long = "Z")]
        big_z: String,
        /// `re,im`.
        #[arg(long = "z", allow_hyphen_values = true)]
        z: String,
        #[arg(long, env = TOLERANCE_ENV)]
        tol: Option<f64>,
    },
    /// Monodromy matrix around the cusp at infinity.
    Monodromy {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Case::Regular)]
        case: Case,
    },
    /// Type and symplectic basis of an alternating Gram matrix.
    Polarization {
        /// Matrix JSON, inline or `@file`.
        #[arg(long)]
        gram: String,
    },
    /// Try to prove two symplectic matrices non-conjugate.
    Distinguish {
        /// Matrix JSON, inline or `@file`; defaults to the regular level-2 monodromy.
        #[arg(long, requires = "b")]
        a: Option<String>,
        /// Defaults to the irregular level-2 monodromy.
        #[arg(long, requires = "a")]
        b: Option<String>,
    },
}

/// A domain error, reported with a stable machine code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    fn new(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.to_string(), message: message.into() }
    }
}

macro_rules! impl_from_domain {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(e.code(), e.to_string())
            }
        }
    )*};
}

impl_from_domain!(
    crate::lattice::LatticeError,
    crate::modular::ModularError,
    crate::adapted::AdaptedBasisError,
    crate::period::PeriodError,
    crate::invariants::InvariantsError
);

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(rendered) => {
            let _ = out.write_all(rendered.as_bytes());
            0
        }
        Err(e) => {
            let _ = match format {
                Format::Json => writeln!(err, "{}", json!({ "error": e.code, "message": e.message })),
                Format::Tsv => writeln!(err, "error\t{}\t{}", e.code, e.message),
            };
            1
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tsv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join("\t") + "\n").collect()
}

fn read_arg(s: &str) -> Result<String, CliError> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::new("IoError", format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

/// Accepts the `{"rows","cols","entries"}` encoding or a bare nested array.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix, CliError> {
    let bad = |e: String| CliError::new("ParseError", e);
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let rows = match &v {
        Value::Array(_) => v.clone(),
        Value::Object(o) if o.contains_key("entries") => {
            let j: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?;
            return Ok(IntMatrix::try_from(j)?);
        }
        _ => return Err(bad("expected a matrix".into())),
    };
    let rows = rows.as_array().cloned().unwrap_or_default();
    let mut big_rows = Vec::with_capacity(rows.len());
    for r in rows {
        let cells = r.as_array().ok_or_else(|| bad("matrix rows must be arrays".into()))?;
        let mut row = Vec::with_capacity(cells.len());
        for c in cells {
            let s = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                other => return Err(bad(format!("not an integer: {other}"))),
            };
            row.push(s.trim().parse::<BigInt>().map_err(|_| bad(format!("not an integer: {s:?}")))?);
        }
        big_rows.push(row);
    }
    Ok(IntMatrix::from_big_rows(big_rows)?)
}

fn matrix_rows_tsv(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(BigInt::to_string).collect()).collect()
}

fn complex_cell(z: &Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), BigInt::to_string)
}

fn bigs(v: &[BigInt]) -> String {
    v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(",")
}

fn modular_tsv(rows: &[ModularCurveData]) -> String {
    let mut t = vec![vec!["d".into(), "delta".into(), "genus".into(), "cusps".into()]];
    for m in rows {
        t.push(vec![m.d.to_string(), format_rational(&m.delta), m.genus.to_string(), m.cusps.to_string()]);
    }
    tsv(&t)
}

fn invariants_tsv(rows: &[SurfaceInvariants]) -> String {
    let header = [
        "g", "d", "delta", "base_genus", "s", "c2", "chi", "K2", "tau", "H", "lambda", "delta0", "delta1",
        "general_type_preconditions_fail",
    ];
    let mut t = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for i in rows {
        t.push(vec![
            i.g.to_string(),
            i.d.to_string(),
            format_rational(&i.delta),
            i.base_genus.to_string(),
            i.s.to_string(),
            i.c2.to_string(),
            i.chi.to_string(),
            i.k2.to_string(),
            opt(&i.tau),
            opt(&i.h),
            opt(&i.lambda),
            opt(&i.delta0),
            opt(&i.delta1),
            i.general_type_preconditions_fail.to_string(),
        ]);
    }
    tsv(&t)
}

fn invariants_record_tsv(label: &str, c: &ConjugacyInvariants) -> Vec<Vec<String>> {
    vec![
        vec![format!("{label}.char_poly"), format_polynomial(&c.char_poly)],
        vec![format!("{label}.unipotent"), c.unipotent.to_string()],
        vec![format!("{label}.snf_m_minus_i"), bigs(&c.snf_m_minus_i)],
        vec![format!("{label}.snf_m2_minus_i"), bigs(&c.snf_m2_minus_i)],
    ]
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Modular { d, d_range } => {
            let levels: Vec<u64> = match (d, d_range) {
                (Some(d), _) => vec![*d],
                (None, Some(DRange(a, b))) => (*a..=*b).collect(),
                (None, None) => unreachable!("clap requires one of --d, --d-range"),
            };
            let rows = levels.into_iter().map(modular_data).collect::<Result<Vec<_>, _>>()?;
            Ok(match (f, d) {
                (Format::Json, Some(_)) => to_json(&rows[0]),
                (Format::Json, None) => to_json(&rows),
                (Format::Tsv, _) => modular_tsv(&rows),
            })
        }
        Command::Invariants { mode, g, d, d_range } => {
            let rows = match (mode, d, d_range) {
                (None, Some(d), None) => vec![invariants(*g, *d)?],
                (_, None, Some(DRange(a, b))) => {
                    (*a..=*b).map(|d| invariants(*g, d)).collect::<Result<Vec<_>, _>>()?
                }
                (Some(InvariantsMode::Table), None, None) => {
                    (3..=20).map(|d| invariants(*g, d)).collect::<Result<Vec<_>, _>>()?
                }
                _ => return Err(CliError::new("UsageError", "give --d, or `table` with --d-range")),
            };
            let single = mode.is_none() && d.is_some();
            Ok(match f {
                Format::Json if single => to_json(&rows[0]),
                Format::Json => to_json(&rows),
                Format::Tsv => invariants_tsv(&rows),
            })
        }
        Command::Check { d_range: DRange(a, b) } => {
            let report = check_range(*a..=*b)?;
            if !report.passed() {
                return Err(CliError::new("IdentityViolation", report.failures.join("; ")));
            }
            let status = "all identities passed";
            Ok(match f {
                Format::Json => to_json(&json!({
                    "status": status,
                    "d_range": format!("{a}:{b}"),
                    "checked": report.checked,
                })),
                Format::Tsv => format!("{status}\t{a}:{b}\t{}\n", report.checked),
            })
        }
        Command::AdaptedBasis { input } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| CliError::new("IoError", format!("{}: {e}", input.display())))?;
            let problem: AdaptedBasisProblem =
                serde_json::from_str(&text).map_err(|e| CliError::new("ParseError", e.to_string()))?;
            let basis = construct_adapted_basis(&problem)?;
            let report = verify_adapted_basis(&problem, &basis)?;
            Ok(match f {
                Format::Json => to_json(&json!({ "basis": basis, "report": report })),
                Format::Tsv => {
                    let mut t = Vec::new();
                    let labels = (1..=2 * problem.g - 2).chain([2 * problem.g + 1, 2 * problem.g + 2]);
                    for (k, idx) in labels.enumerate() {
                        let col = basis.vectors.column(k);
                        t.push(std::iter::once(format!("u{idx}")).chain(col.iter().map(BigInt::to_string)).collect());
                    }
                    t.push(vec!["spans_u".into(), report.spans_u.to_string()]);
                    t.push(vec!["abelian_symplectic".into(), report.abelian_symplectic.to_string()]);
                    t.push(vec!["elliptic_symplectic".into(), report.elliptic_symplectic.to_string()]);
                    tsv(&t)
                }
            })
        }
        Command::Period { g, d, big_z, z, tol } => {
            let tol = tol.unwrap_or(DEFAULT_TOLERANCE);
            let data = PeriodData::new(*g, *d, parse_complex_matrix(&read_arg(big_z)?)?, parse_complex(z)?, tol)?;
            let sections = lattice_sections(&data)?;
            let t = period_matrix(&data)?;
            let restriction = abelian_restriction_type(*g, *d)?;
            Ok(match f {
                Format::Json => {
                    let sec: Vec<Vec<[String; 2]>> = sections
                        .u
                        .iter()
                        .map(|v| v.iter().map(|c| [c.re.to_string(), c.im.to_string()]).collect())
                        .collect();
                    to_json(&json!({
                        "g": g,
                        "d": d,
                        "tol": tol,
                        "sections": sec,
                        "T": t.t.to_json(),
                        "basis_labels": t.basis_labels,
                        "symmetry_defect": t.symmetry_defect(),
                        "min_imaginary_pivot": t.min_imaginary_pivot(),
                        "restriction_type": restriction.to_string(),
                    }))
                }
                Format::Tsv => {
                    let mut rows = Vec::new();
                    for i in 0..t.t.rows() {
                        rows.push(
                            std::iter::once(format!("T{}", i + 1))
                                .chain(t.t.row(i).iter().map(complex_cell))
                                .collect(),
                        );
                    }
                    rows.push(vec!["restriction_type".into(), restriction.to_string()]);
                    tsv(&rows)
                }
            })
        }
        Command::Monodromy { g, d, case } => {
            let case = match case {
                Case::Regular => CuspRegularity::Regular,
                Case::Irregular => CuspRegularity::Irregular,
            };
            let m = monodromy_at_cusp(*g, *d, case)?;
            let inv = conjugacy_invariants(&m.m);
            Ok(match f {
                Format::Json => to_json(&json!({
                    "g": g,
                    "d": d,
                    "case": m.case,
                    "matrix": m.m.matrix(),
                    "invariants": inv,
                    "char_poly": format_polynomial(&inv.char_poly),
                })),
                Format::Tsv => tsv(&matrix_rows_tsv(m.m.matrix())),
            })
        }
        Command::Polarization { gram } => {
            let form = AlternatingForm::new(parse_int_matrix(&read_arg(gram)?)?)?;
            let fb = frobenius_basis(&form)?;
            let degree = associated_degree(&fb.ty).ok();
            Ok(match f {
                Format::Json => to_json(&json!({
                    "type": fb.ty,
                    "display": fb.ty.to_string(),
                    "pfaffian": fb.ty.pfaffian().to_string(),
                    "det": form.gram().det()?.to_string(),
                    "associated_degree": degree.map(|d| d.to_string()),
                    "basis": fb.basis,
                })),
                Format::Tsv => tsv(&[
                    vec!["type".into(), fb.ty.to_string()],
                    vec!["pfaffian".into(), fb.ty.pfaffian().to_string()],
                    vec!["det".into(), form.gram().det()?.to_string()],
                    vec!["associated_degree".into(), degree.map_or("-".into(), |d| d.to_string())],
                ]),
            })
        }
        Command::Distinguish { a, b } => {
            let (ma, mb) = match (a, b) {
                (Some(a), Some(b)) => (
                    SymplecticMatrix::new(parse_int_matrix(&read_arg(a)?)?)?,
                    SymplecticMatrix::new(parse_int_matrix(&read_arg(b)?)?)?,
                ),
                _ => (
                    monodromy_at_cusp(3, 2, CuspRegularity::Regular)?.m,
                    monodromy_at_cusp(3, 2, CuspRegularity::Irregular)?.m,
                ),
            };
            if ma.genus() != mb.genus() {
                return Err(CliError::new(
                    "DimensionMismatch",
                    format!("{0}x{0} against {1}x{1}", 2 * ma.genus(), 2 * mb.genus()),
                ));
            }
            let (ia, ib) = (conjugacy_invariants(&ma), conjugacy_invariants(&mb));
            let verdict = distinguish(&ia, &ib);
            Ok(match f {
                Format::Json => to_json(&json!({ "result": verdict, "a": ia, "b": ib })),
                Format::Tsv => {
                    let mut rows = vec![match &verdict {
                        Distinction::Distinguished { differing } => {
                            vec!["Distinguished".to_string(), differing.join(",")]
                        }
                        Distinction::Inconclusive => vec!["Inconclusive".to_string()],
                    }];
                    rows.extend(invariants_record_tsv("a", &ia));
                    rows.extend(invariants_record_tsv("b", &ib));
                    tsv(&rows)
                }
            })
        }
    }
}
