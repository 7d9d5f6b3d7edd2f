//! Command-line front end.
//!
//! Exit codes: `0` success, `1` negative verdict, `2` usage, parse or
//! configuration error, `3` a counting inequality was violated.

pub mod group_file;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::RationalExpr;
use crate::invariants::{self, LieAlgebraBasis, Sampling};
use crate::jetspace::JetSpace;
use group_file::GroupFile;
use parse::{parse_expr, parse_monomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FLAGGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "jetinv", version, about = "Prolonged group actions and their differential invariants")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct GroupArgs {
    /// Preset name (sl2, sl3) or path to a group file
    #[arg(long)]
    group: String,
    /// Lift the order limit for groups of dimension >= 8
    #[arg(long)]
    allow_large_orders: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of dim J^(n), q_n, s_n, h_n, i_n, j_n
    Dims {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Coefficients of a prolonged generator
    Prolong {
        #[command(flatten)]
        group: GroupArgs,
        /// One-based generator number
        #[arg(long = "gen")]
        generator: usize,
        #[arg(long)]
        order: usize,
    },
    /// Exact invariance test; exits 1 when some generator does not annihilate
    Check {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        invariant: String,
    },
    /// I, J, DJ, ..., D^k J with D = (D_x I)^-1 D_x
    Diffop {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "I")]
        i: String,
        #[arg(long = "J")]
        j: String,
        #[arg(long, default_value_t = 1)]
        iterate: usize,
    },
    /// Invariants P/m with deg P <= D
    Search {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "1")]
        denom: String,
        #[arg(long)]
        max_degree: u32,
    },
}

/// A failure that ends the command with a particular exit code.
struct Exit {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn load_group(args: &GroupArgs) -> Result<LieAlgebraBasis, Exit> {
    let basis = match LieAlgebraBasis::preset(&args.group) {
        Some(b) => b,
        None => {
            let path = Path::new(&args.group);
            let text = std::fs::read_to_string(path).map_err(|e| {
                usage(format!(
                    "'{}' is neither a preset ({}) nor a readable group file: {e}",
                    args.group,
                    LieAlgebraBasis::PRESETS.join(", ")
                ))
            })?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| args.group.clone());
            GroupFile::parse(&text)
                .and_then(|f| f.to_basis(&name))
                .map_err(|e| usage(format!("{}:{e}", path.display())))?
        }
    };
    Ok(basis.with_large_orders(args.allow_large_orders))
}

fn engine<T>(result: crate::Result<T>) -> Result<T, Exit> {
    result.map_err(|e| usage(e.to_string()))
}

/// Runs one command line; output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Exit { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let io = |e: std::io::Error| usage(format!("write failed: {e}"));
    match command {
        Command::Dims {
            group,
            max_order,
            samples,
            seed,
            format,
        } => {
            let basis = load_group(&group)?;
            if samples == 0 {
                return Err(usage("--samples must be at least 1"));
            }
            let sampling = Sampling {
                samples,
                seed,
                ..Sampling::default()
            };
            let report = engine(invariants::dimension_report(&basis, max_order, &sampling))?;
            match format {
                Format::Json => {
                    let json = serde_json::to_string_pretty(&report).expect("report serializes");
                    writeln!(out, "{json}").map_err(io)?;
                }
                Format::Text => write_table(&report, out).map_err(io)?,
            }
            for flag in &report.flags {
                writeln!(err, "warning: {flag}").map_err(io)?;
            }
            Ok(if report.has_inequality_violation() {
                EXIT_FLAGGED
            } else {
                EXIT_OK
            })
        }
        Command::Prolong { group, generator, order } => {
            let basis = load_group(&group)?;
            let r = basis.group_dim();
            if generator == 0 || generator > r {
                return Err(usage(format!("--gen must be in 1..={r} for {}", basis.name())));
            }
            let space = basis.space(order);
            let field = engine(basis.prolong(order))?.swap_remove(generator - 1);
            writeln!(out, "v{generator}^({order}) of {}", basis.name()).map_err(io)?;
            for (var, coeff) in engine(field.coefficients())? {
                writeln!(out, "{}: {}", space.name(&var), coeff.display_in(&space)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            group,
            order,
            invariant,
        } => {
            let basis = load_group(&group)?;
            let space = basis.space(order);
            let candidate = parse_expr(&invariant, &space).map_err(|e| usage(format!("--invariant {e}")))?;
            let verdict = engine(invariants::is_invariant(&basis, order, &candidate))?;
            if verdict.holds() {
                writeln!(
                    out,
                    "invariant: annihilated by all {} generators of {}",
                    basis.group_dim(),
                    basis.name()
                )
                .map_err(io)?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "not invariant").map_err(io)?;
            for (k, residual) in verdict.failures() {
                writeln!(out, "v{}: {}", k + 1, residual.display_in(&space)).map_err(io)?;
            }
            Ok(EXIT_NEGATIVE)
        }
        Command::Diffop { group, i, j, iterate } => {
            let basis = load_group(&group)?;
            if basis.p() != 1 {
                return Err(usage("diffop needs a single independent variable"));
            }
            let space = basis.space(usize::MAX);
            let i_expr = parse_expr(&i, &space).map_err(|e| usage(format!("--I {e}")))?;
            let j_expr = parse_expr(&j, &space).map_err(|e| usage(format!("--J {e}")))?;
            let derived = engine(invariants::iterate_diff_op(&i_expr, &j_expr, iterate))?;
            let mut listing = vec![("I".to_string(), i_expr), ("J".to_string(), j_expr)];
            listing.extend(
                derived
                    .into_iter()
                    .enumerate()
                    .map(|(k, e)| (format!("D^{} J", k + 1), e)),
            );
            print_verified(&basis, &listing, &space, out)
        }
        Command::Search {
            group,
            order,
            denom,
            max_degree,
        } => {
            let basis = load_group(&group)?;
            let space = basis.space(order);
            let denominator = parse_monomial(&denom, &space).map_err(|e| usage(format!("--denom {e}")))?;
            let found = engine(invariants::search_invariants(&basis, order, &denominator, max_degree))?;
            if found.is_empty() {
                writeln!(out, "no invariants in the ansatz space").map_err(io)?;
                return Ok(EXIT_OK);
            }
            let listing: Vec<(String, RationalExpr)> = found
                .into_iter()
                .enumerate()
                .map(|(k, e)| (format!("I{}", k + 1), e))
                .collect();
            print_verified(&basis, &listing, &space, out)
        }
    }
}

/// Re-checks each expression at its own order before printing it.
fn print_verified(
    basis: &LieAlgebraBasis,
    listing: &[(String, RationalExpr)],
    space: &JetSpace,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let io = |e: std::io::Error| usage(format!("write failed: {e}"));
    let mut code = EXIT_OK;
    for (label, e) in listing {
        let verdict = engine(invariants::is_invariant(basis, e.order(), e))?;
        let status = if verdict.holds() {
            "invariant"
        } else {
            code = EXIT_NEGATIVE;
            "NOT invariant"
        };
        writeln!(
            out,
            "{label} = {}    [order {}, {status}]",
            e.display_in(space),
            e.order()
        )
        .map_err(io)?;
    }
    Ok(code)
}

fn write_table(report: &invariants::DimensionReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "group {} (dim {})", report.group, report.group_dim)?;
    writeln!(out, "{:>3} {:>5} {:>4} {:>3} {:>3} {:>4} {:>3}", "n", "dimJ", "q_n", "s", "h", "i", "j")?;
    for row in &report.rows {
        let qn = row.q_n.map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "{:>3} {:>5} {:>4} {:>3} {:>3} {:>4} {:>3}",
            row.n, row.dim_jet, qn, row.s, row.h, row.i, row.j
        )?;
    }
    Ok(())
}
