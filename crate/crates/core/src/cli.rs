//! The `fspt` command line.
//!
//! Every subcommand reads JSON fixtures and writes one JSON document (or a
//! plain table with `--table`) to standard output. Exit codes: 0 on success,
//! 1 on a domain error, 2 on a usage error or malformed input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cocycle::{cohomologous, CocycleJson, TwistedCocycle, DEFAULT_SNAP_TOL, LATTICE_CAVEAT};
use crate::fmps::{
    check_symmetry, density_matrix, expectation, fmps_index, partial_trace_last, transfer_fixed_point,
    FermionicMpsJson, MpsKind, SiteWord, SymmetryJson, FMPS_TOL,
};
use crate::graded::fock_parity;
use crate::group::{FiniteGroup, GroupJson};
use crate::io::{round12, MatrixJson};
use crate::linalg::{self, CMat};
use crate::spt::{compute_index, index_equal, stack_index, stack_systems, z8_compose, SystemJson, Z8Element};
use crate::Error;

/// Tolerances reported in the `fmps-rho` footer.
const RHO_PSD_TOL: f64 = 1e-10;
const RHO_TRACE_TOL: f64 = 1e-10;
const RHO_PARITY_TOL: f64 = 1e-10;
const RHO_RESTRICTION_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "fspt", version, about = "Indices of fermionic SPT phases and fermionic MPS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct Format {
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Emit a plain-text table.
    #[arg(long)]
    pub table: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a multiplication table.
    GroupCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Validate a twisted 2-cocycle and bring it to root normal form.
    CocycleCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Decide whether two cocycles are cohomologous.
    Cohomologous {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Compute the index of a graded system.
    Index {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Stack two graded systems and compare with the group law.
    Stack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Print the composition table of the time-reversal indices.
    Z8Table {
        #[command(flatten)]
        format: Format,
    },
    /// Validate a fermionic MPS.
    FmpsValidate {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Evaluate a site word, given as JSON pairs of bitmasks, e.g. `[[1,0],[0,1]]`.
    FmpsExpect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        format: Format,
    },
    /// Assemble the density matrix on sites 0..=l.
    FmpsRho {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Check an on-site symmetry and report the phases c_g.
    FmpsSymmetry {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Compute the index of a symmetric fermionic MPS.
    FmpsIndex {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[command(flatten)]
        format: Format,
    },
}

impl Command {
    fn format(&self) -> Format {
        match self {
            Command::GroupCheck { format, .. }
            | Command::CocycleCheck { format, .. }
            | Command::Cohomologous { format, .. }
            | Command::Index { format, .. }
            | Command::Stack { format, .. }
            | Command::Z8Table { format }
            | Command::FmpsValidate { format, .. }
            | Command::FmpsExpect { format, .. }
            | Command::FmpsRho { format, .. }
            | Command::FmpsSymmetry { format, .. }
            | Command::FmpsIndex { format, .. } => *format,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

struct Report {
    json: Value,
    table: Option<String>,
}

impl Report {
    fn json(json: Value) -> Self {
        Self { json, table: None }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let json = rounded(report.json);
            let text = match (cli.command.format().table, report.table) {
                (true, Some(t)) => t,
                (true, None) => render_table(&json),
                (false, _) => format!("{}\n", serde_json::to_string_pretty(&json).expect("values serialize")),
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_malformed_input() {
                2
            } else {
                1
            }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("domain objects serialize")
}

fn read_cocycle(path: &Path, fallback: Option<&FiniteGroup>) -> Result<TwistedCocycle, Failure> {
    let j: CocycleJson = read_json(path)?;
    let default = FiniteGroup::cyclic(j.phases.len().max(1));
    let group = fallback.unwrap_or(&default);
    Ok(j.into_cocycle(Some(group))?)
}

fn execute(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::GroupCheck { input, .. } => {
            let g = FiniteGroup::try_from(read_json::<GroupJson>(input)?)?;
            let abelian = g.elements().all(|a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a)));
            Ok(Report::json(json!({
                "valid": true,
                "order": g.order(),
                "identity": g.identity(),
                "inverses": g.elements().map(|a| g.inv(a)).collect::<Vec<_>>(),
                "abelian": abelian,
                "z2_homs": g.z2_homs().iter().map(|h| h.values().to_vec()).collect::<Vec<_>>(),
            })))
        }
        Command::CocycleCheck { input, tol, .. } => {
            let u = read_cocycle(input, None)?;
            let (normal, b) = u.root_normal_form(tol.unwrap_or(DEFAULT_SNAP_TOL))?;
            Ok(Report::json(json!({
                "valid": true,
                "exact": u.is_exact(),
                "root_normal_form": to_value(&normal.to_json()),
                "coboundary": to_value(&b),
            })))
        }
        Command::Cohomologous { input, input2, modulus, tol, .. } => {
            let u1 = read_cocycle(input, None)?;
            let u2 = read_cocycle(input2, Some(u1.group()))?;
            let verdict = cohomologous(&u1, &u2, *modulus, tol.unwrap_or(DEFAULT_SNAP_TOL))?;
            let mut out = json!({
                "cohomologous": verdict.cohomologous,
                "modulus": verdict.modulus,
                "witness": verdict.witness.as_ref().map(|w| to_value(&w.b)),
            });
            if !verdict.cohomologous {
                out["caveat"] = json!(LATTICE_CAVEAT);
            }
            Ok(Report::json(out))
        }
        Command::Index { input, .. } => {
            let sys = read_json::<SystemJson>(input)?.into_system()?;
            Ok(Report::json(to_value(&compute_index(&sys)?.to_json())))
        }
        Command::Stack { input, input2, .. } => {
            let s1 = read_json::<SystemJson>(input)?.into_system()?;
            let s2 = read_json::<SystemJson>(input2)?.into_system()?;
            let stacked = compute_index(&stack_systems(&s1, &s2)?)?;
            let law = stack_index(&compute_index(&s1)?, &compute_index(&s2)?)?;
            Ok(Report::json(json!({
                "index": to_value(&stacked.to_json()),
                "law": to_value(&law.to_json()),
                "agree": index_equal(&stacked, &law),
            })))
        }
        Command::Z8Table { .. } => Ok(z8_table()),
        Command::FmpsValidate { input, .. } => {
            let mps = read_json::<FermionicMpsJson>(input)?.into_mps()?;
            let computed = transfer_fixed_point(mps.kraus())?;
            Ok(Report::json(json!({
                "valid": true,
                "kind": to_value(&mps.kind()),
                "d": mps.d(),
                "m": mps.m(),
                "sigma0": mps.sigma0(),
                "fixed_point_distance": linalg::norm(&(computed - mps.density())),
            })))
        }
        Command::FmpsExpect { input, word, .. } => {
            let mps = read_json::<FermionicMpsJson>(input)?.into_mps()?;
            let pairs: Vec<(usize, usize)> =
                serde_json::from_str(word).map_err(|e| Failure::Usage(format!("malformed --word: {e}")))?;
            let w = SiteWord::new(pairs);
            let value = expectation(&mps, &w)?;
            Ok(Report::json(json!({ "word": to_value(&w), "value": [value.re, value.im] })))
        }
        Command::FmpsRho { input, l, .. } => {
            let mps = read_json::<FermionicMpsJson>(input)?.into_mps()?;
            fmps_rho(&mps, *l)
        }
        Command::FmpsSymmetry { input, input2, tol, .. } => {
            let mps = read_json::<FermionicMpsJson>(input)?.into_mps()?;
            let sym = read_json::<SymmetryJson>(input2)?.into_symmetry()?;
            let check = check_symmetry(&mps, &sym, tol.unwrap_or(FMPS_TOL))?;
            Ok(Report::json(json!({
                "phases": to_value(&check.phases),
                "moduli": check.raw_moduli,
                "residuals": check.residuals,
                "q": check.q.as_ref().map(|q| q.values().to_vec()),
            })))
        }
        Command::FmpsIndex { input, input2, .. } => {
            let mps = read_json::<FermionicMpsJson>(input)?.into_mps()?;
            let sym = read_json::<SymmetryJson>(input2)?.into_symmetry()?;
            Ok(Report::json(to_value(&fmps_index(&mps, &sym)?.to_json())))
        }
    }
}

fn z8_table() -> Report {
    let mut elements = Z8Element::all();
    elements.sort_by_key(Z8Element::generator_power);
    let table: Vec<Vec<String>> =
        elements.iter().map(|a| elements.iter().map(|b| z8_compose(a, b).to_string()).collect()).collect();
    let mut text = format!("{:>12}", "");
    for b in &elements {
        let _ = write!(text, " {:>8}", b.to_string());
    }
    text.push('\n');
    for (a, row) in elements.iter().zip(&table) {
        let _ = write!(text, "{:>12}", format!("g^{} {}", a.generator_power(), a));
        for cell in row {
            let _ = write!(text, " {cell:>8}");
        }
        text.push('\n');
    }
    let json = json!({
        "elements": elements
            .iter()
            .map(|e| json!({ "label": e.to_string(), "generator_power": e.generator_power() }))
            .collect::<Vec<_>>(),
        "table": table,
    });
    Report { json, table: Some(text) }
}

fn fmps_rho(mps: &crate::fmps::FermionicMPS, l: usize) -> Result<Report, Failure> {
    let rho = density_matrix(mps, l)?;
    let sites = l + 1;
    let p = fock_parity(mps.d());
    let parity = linalg::kron_all(std::iter::repeat_n(&p, sites));
    let trace = linalg::trace(&rho);
    let min_eig = linalg::hermitian_eigen(&rho).0[0];
    let hermiticity = linalg::norm(&(&rho - rho.adjoint()));
    let commutator = linalg::norm(&linalg::commutator(&rho, &parity));
    let restriction = if l == 0 {
        None
    } else {
        let smaller = density_matrix(mps, l - 1)?;
        Some(linalg::norm(&(partial_trace_last(&rho, mps.local_dim())? - smaller)))
    };
    let passed = min_eig >= -RHO_PSD_TOL
        && (trace - 1.0).norm() <= RHO_TRACE_TOL
        && commutator <= RHO_PARITY_TOL
        && restriction.is_none_or(|r| r <= RHO_RESTRICTION_TOL);
    let footer = json!({
        "trace": [trace.re, trace.im],
        "min_eigenvalue": min_eig,
        "hermiticity_defect": hermiticity,
        "parity_commutator": commutator,
        "restriction_defect": restriction,
        "passed": passed,
    });
    let kind = match mps.kind() {
        MpsKind::Even => "even",
        MpsKind::Odd => "odd",
    };
    let mut text = String::new();
    for i in 0..rho.nrows() {
        let row: Vec<String> = (0..rho.ncols()).map(|j| complex_cell(&rho, i, j)).collect();
        let _ = writeln!(text, "{}", row.join(" "));
    }
    let _ = writeln!(text, "-- {kind} fMPS, l = {l}, dim = {}", rho.nrows());
    let footer_rounded = rounded(footer.clone());
    if let Value::Object(map) = &footer_rounded {
        for (k, v) in map {
            let _ = writeln!(text, "-- {k}: {v}");
        }
    }
    Ok(Report {
        json: json!({
            "l": l,
            "dim": rho.nrows(),
            "rho": to_value(&MatrixJson::from_matrix(&rho)),
            "footer": footer,
        }),
        table: Some(text),
    })
}

fn complex_cell(m: &CMat, i: usize, j: usize) -> String {
    let z = m[(i, j)];
    format!("{:+.6}{:+.6}i", round12(z.re), round12(z.im))
}

/// Rounds every non-integer number to 12 significant digits.
fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round12(n.as_f64().unwrap_or_default())),
        Value::Array(items) => Value::Array(items.into_iter().map(rounded).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, x)| (k, rounded(x))).collect()),
        other => other,
    }
}

fn render_table(v: &Value) -> String {
    let mut text = String::new();
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                let _ = writeln!(text, "{k:<width$}  {x}");
            }
        }
        other => {
            let _ = writeln!(text, "{other}");
        }
    }
    text
}
