//! `bihamil`: builds and certifies bi-Hamiltonian hierarchies from the
//! command line.

mod params;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bihamil::diffalg::ChartMap;
use bihamil::emit::{Format, HierarchyDocument};
use bihamil::lenard::{verify_hierarchy, CaseTag, HierarchyState, LenardError};
use bihamil::oreops::dieudonne_det;
use bihamil::poisson::{
    build_h, casimir_check_in, casimir_lie_algebra, kernel_basis, verify_compatibility, verify_conformal_jacobi,
    ConformalBracket, PoissonError, PoissonParams, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use params::Assignments;

const PARAM_HELP: &str = "Parameters are key=value pairs. H0: a c al be ga ep. H1: a_1 c1 al1 be1 ga1 ep1 \
(aliases a1=al1, b1=be1, g1=ga1, e1=ep1). Values are rationals (3, -1/2, 1.25), `sym` for the \
symbol itself, or expressions in the parameters such as -ga^2*ep^-1. Unset values are 0 \
(or symbols with --symbolic). Unless given, a = 0 when al or be is nonzero and 1 otherwise, and a_1 = 1 - a.";

#[derive(Parser, Debug)]
#[command(name = "bihamil", version, about = "Lenard-Magri hierarchies for compatible pairs of Poisson structures")]
#[command(after_help = PARAM_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Auto,
    A1,
    A2,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    /// H0 is skew-adjoint.
    Skew,
    /// H0 is a Poisson structure (λ-bracket Jacobi identity).
    Jacobi,
    /// H0 + t H1 is Poisson for a formal t.
    Compat,
    /// The tabulated Casimirs of H0 and their Lie algebra under H1.
    Casimir,
    /// The tabulated kernel basis of H0 is annihilated and consists of gradients.
    Kernel,
}

#[derive(Args, Debug)]
struct HierarchyArgs {
    #[arg(long, value_enum, ignore_case = true, default_value_t = CaseArg::Auto)]
    case: CaseArg,
    #[arg(long, default_value_t = 5)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = EmitArg::Text)]
    emit: EmitArg,
    /// Runs every certificate; exit code 1 if one fails.
    #[arg(long)]
    certify: bool,
    /// Exchanges the roles of H0 and H1.
    #[arg(long)]
    swap: bool,
    /// Unset parameters become symbols instead of 0.
    #[arg(long)]
    symbolic: bool,
    /// Writes the output to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    params: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs the recursion and prints gradients, flows and densities.
    #[command(after_help = PARAM_HELP)]
    Hierarchy(HierarchyArgs),
    /// Checks a property of the structures.
    #[command(after_help = PARAM_HELP)]
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long)]
        symbolic: bool,
        params: Vec<String>,
    },
    /// Prints the Dieudonné determinant of H0.
    #[command(after_help = PARAM_HELP)]
    Detop {
        #[arg(long)]
        symbolic: bool,
        params: Vec<String>,
    },
    /// Prints a basis of the kernel of H0 with its densities.
    #[command(after_help = PARAM_HELP)]
    Kernel {
        #[arg(long)]
        symbolic: bool,
        params: Vec<String>,
    },
}

/// Exit statuses.
const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const UNSUPPORTED: u8 = 3;

struct Exit(u8, String);

impl From<params::ParamError> for Exit {
    fn from(e: params::ParamError) -> Self {
        Exit(USAGE, e.to_string())
    }
}

impl From<LenardError> for Exit {
    fn from(e: LenardError) -> Self {
        let code = match e {
            LenardError::Integration { .. } | LenardError::Internal(_) => FAILED,
            _ => UNSUPPORTED,
        };
        Exit(code, e.to_string())
    }
}

impl From<PoissonError> for Exit {
    fn from(e: PoissonError) -> Self {
        let code = match e {
            PoissonError::Internal(_) => FAILED,
            PoissonError::InconsistentVariant { .. } | PoissonError::NotConstant(_) => USAGE,
            _ => UNSUPPORTED,
        };
        Exit(code, e.to_string())
    }
}

fn pair(items: &[String], symbolic: bool) -> Result<(PoissonParams, PoissonParams), Exit> {
    Ok(Assignments::parse(items)?.pair(symbolic))
}

fn hierarchy(args: HierarchyArgs) -> Result<u8, Exit> {
    let HierarchyArgs { case, depth, emit, certify, swap, symbolic, output, params } = args;
    let items = &params[..];
    let (mut h0, mut h1) = pair(items, symbolic)?;
    if swap {
        std::mem::swap(&mut h0, &mut h1);
    }
    let mut state = match case {
        CaseArg::Auto => HierarchyState::new(h0, h1)?,
        CaseArg::A1 => HierarchyState::with_case(CaseTag::A1, h0, h1)?,
        CaseArg::A2 => HierarchyState::with_case(CaseTag::A2, h0, h1)?,
        CaseArg::B => HierarchyState::with_case(CaseTag::B, h0, h1)?,
    };
    state.extend_to(depth.max(1))?;
    let report = certify.then(|| verify_hierarchy(&state, depth));
    let mut doc = HierarchyDocument::from_state(&state, report.as_ref());
    doc.records.truncate(depth + 1);
    let format = match emit {
        EmitArg::Json => Format::Json,
        EmitArg::Latex => Format::Latex,
        EmitArg::Text => Format::Text,
    };
    let text = doc.render(format);
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| Exit(USAGE, format!("{}: {e}", path.display())))?,
        None => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{text}") {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(Exit(FAILED, e.to_string())),
                _ => {}
            }
        }
    }
    Ok(match report {
        Some(r) if !r.passed() => {
            for f in r.failures() {
                eprintln!("certificate failed: {f}");
            }
            FAILED
        }
        _ => OK,
    })
}

fn line(ok: bool, what: &str, detail: Option<String>) -> u8 {
    println!("{} {what}{}", if ok { "PASS" } else { "FAIL" }, detail.map(|d| format!(": {d}")).unwrap_or_default());
    if ok {
        OK
    } else {
        FAILED
    }
}

fn verify(check: Check, symbolic: bool, items: &[String]) -> Result<u8, Exit> {
    let (h0, h1) = pair(items, symbolic)?;
    let op = build_h(&h0, Variant::Full)?;
    Ok(match check {
        Check::Skew => line(op.is_skew_adjoint(), "H0 is skew-adjoint", None),
        Check::Jacobi => {
            let rep = verify_conformal_jacobi(&ConformalBracket::of_family(&h0));
            line(rep.holds(), "H0 satisfies the Jacobi identity", rep.violation())
        }
        Check::Compat => {
            let rep = verify_compatibility(&h0, &h1);
            line(rep.holds(), "H0 + t H1 is Poisson for all t", rep.violation())
        }
        Check::Kernel => {
            let kb = kernel_basis(&h0, Variant::Full)?;
            let annihilated = kb.vectors.iter().all(|v| kb.coords.operator(&kb.operator).apply_gradient(v).is_zero());
            let gradients = kb.vectors.iter().zip(&kb.densities).all(|(v, d)| kb.coords.gradient(&d.density) == *v);
            line(annihilated && gradients, &format!("kernel basis ({:?}) of size {}", kb.case, kb.vectors.len()), None)
        }
        Check::Casimir => {
            let kb = kernel_basis(&h0, Variant::Full)?;
            let ok = kb.densities.iter().all(|d| casimir_check_in(d, &kb.operator, &kb.coords));
            let code = line(ok, &format!("{} Casimirs of H0", kb.densities.len()), None);
            match casimir_lie_algebra(&h0, &h1) {
                Ok(table) => {
                    let n = table.constants.len();
                    for i in 0..n {
                        for j in i + 1..n {
                            let terms: Vec<String> = (0..n)
                                .filter(|&k| !table.constants[i][j][k].is_zero())
                                .map(|k| format!("({})*C{}", table.constants[i][j][k], k + 1))
                                .collect();
                            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                            println!("  {{C{}, C{}}}_1 = {rhs}", i + 1, j + 1);
                        }
                    }
                    println!("  abelian: {}", table.is_abelian());
                }
                Err(e) => println!("  Lie algebra under H1 unavailable: {e}"),
            }
            code
        }
    })
}

fn detop(symbolic: bool, items: &[String]) -> Result<u8, Exit> {
    let (h0, _) = pair(items, symbolic)?;
    let op = build_h(&h0, Variant::Full)?;
    // With p = 0 the determinant is 2Q ξ²; print it in the Q chart when available.
    let chart = (h0.a.is_one() && h0.al.is_zero() && h0.be.is_zero() && h0.p().is_zero())
        .then(|| ChartMap::new(h0.ep.clone(), h0.ga.clone()).ok())
        .flatten();
    let det = match &chart {
        Some(c) => dieudonne_det(&c.op_to_qv(&op).to_frac()),
        None => dieudonne_det(&op.to_frac()),
    };
    println!("{det}");
    if let Some(c) = chart {
        println!("Q0 = {}", c.q_in_uv());
    }
    Ok(OK)
}

fn kernel(symbolic: bool, items: &[String]) -> Result<u8, Exit> {
    let (h0, _) = pair(items, symbolic)?;
    let kb = kernel_basis(&h0, Variant::Full)?;
    println!("case {:?}, chart {}", kb.case, kb.coords.signature().chart());
    for (k, (v, d)) in kb.vectors.iter().zip(&kb.densities).enumerate() {
        println!("C{}: density {}", k + 1, kb.coords.export(&d.density));
        println!(
            "    gradient ({})",
            v.map(|c| kb.coords.export(c)).components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(OK)
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Hierarchy(args) => hierarchy(args),
        Command::Verify { check, symbolic, params } => verify(check, symbolic, &params),
        Command::Detop { symbolic, params } => detop(symbolic, &params),
        Command::Kernel { symbolic, params } => kernel(symbolic, &params),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            if let Some(tag) = msg.contains(CaseTag::BBlocked.name()).then_some(CaseTag::BBlocked) {
                eprintln!("case {tag}: {}", tag.explanation());
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
