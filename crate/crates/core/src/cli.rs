//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an asserted inequality fails, 2 on usage
//! or validation errors. Output goes to stdout unless `--output` is given;
//! diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::counterexample::{block_gap_scaled, coefficient_keys, decomposition_norms_scaled};
use crate::error::{Error, Result};
use crate::greedy::{greedy_approximant, greedy_select, l1_norm};
use crate::io;
use crate::kernels::{dirichlet_with, lebesgue, verify_lemma_scaled, Lebesgue};
use crate::radix::{Limits, Order, DEFAULT_CELL_CAP};
use crate::transform::{forward, inverse_with};
use crate::walsh::sample_walsh_with;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "chrestenson",
    version,
    about = "Chrestenson system computations and verifications"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Largest grid (number of cells) any command may allocate.
    #[arg(long, default_value_t = DEFAULT_CELL_CAP, global = true)]
    cell_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the Walsh function psi_N on a grid.
    Eval {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        index: u64,
        #[arg(long)]
        resolution: u32,
    },
    /// Dirichlet kernel D_n with per-cell exponent tallies.
    Kernel {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        n: u64,
        /// Grid resolution; defaults to the smallest N with a^N >= n.
        #[arg(long)]
        resolution: Option<u32>,
    },
    /// Lebesgue constants L_n.
    Lebesgue {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long, required_unless_present = "n_list", conflicts_with = "n_list")]
        n: Option<u64>,
        /// File of integers separated by whitespace or commas.
        #[arg(long)]
        n_list: Option<PathBuf>,
    },
    /// Lower bounds for the Lebesgue constants along n_k = a^k + n_{k-2}.
    Lemma {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        k_max: u32,
        /// Multiply every asserted bound by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        bound_scale: f64,
    },
    /// Forward transform of a step function, or synthesis of a spectrum.
    Transform {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Greedy approximant G_m of a spectrum and its L1 norm.
    Greedy {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        resolution: u32,
    },
    /// L1 norm of the k-th block of the divergent greedy sequence.
    Gap {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        k: u32,
        /// Multiply every asserted bound by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        bound_scale: f64,
    },
    /// Coefficient table C_1 .. C_I.
    Coeffs {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        max_index: u64,
    },
    /// Norms of the parts of the partial function built from K blocks.
    Norms {
        #[arg(long, value_parser = parse_order)]
        order: Order,
        #[arg(long)]
        blocks: u32,
        /// Multiply every asserted bound by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        bound_scale: f64,
    },
}

fn parse_order(s: &str) -> std::result::Result<Order, String> {
    let a: u32 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    Order::new(a).map_err(|e| e.to_string())
}

fn parse_scale(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("'{s}' is not a positive finite number")),
    }
}

struct Outcome {
    text: String,
    failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }

    fn checked(text: String, pass: bool, what: &str) -> Self {
        let failure = (!pass).then(|| what.to_string());
        Outcome { text, failure }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct KernelCell {
    index: usize,
    re: f64,
    im: f64,
    counts: Vec<u64>,
}

#[derive(Serialize)]
struct KernelDoc {
    order: Order,
    resolution: u32,
    n: u64,
    values: Vec<KernelCell>,
}

#[derive(Serialize)]
struct LebesgueDoc {
    order: Order,
    values: Vec<Lebesgue>,
}

#[derive(Serialize)]
struct LebesgueRow {
    order: Order,
    n: u64,
    resolution: u32,
    value: f64,
    error_bound: f64,
}

#[derive(Serialize)]
struct CoeffRow {
    i: u64,
    block: u64,
    value: f64,
    dyadic_log2: i64,
}

#[derive(Serialize)]
struct GreedyDoc {
    order: Order,
    resolution: u32,
    m: usize,
    l1_norm: f64,
    selected: Vec<usize>,
    values: Vec<io::Entry>,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let limits = Limits::with_cell_cap(cli.cell_cap);
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Eval {
            order,
            index,
            resolution,
        } => {
            let f = sample_walsh_with(*index, *resolution, *order, &limits)?;
            Outcome::ok(if json {
                io::function_json(&f)
            } else {
                io::function_csv(&f)
            })
        }
        Command::Kernel {
            order,
            n,
            resolution,
        } => {
            let resolution = resolution.unwrap_or_else(|| order.ceil_log(*n));
            let tally = dirichlet_with(*n, resolution, *order, &limits)?;
            let cells: Vec<KernelCell> = (0..tally.cells())
                .map(|m| {
                    let v = tally.value(m);
                    KernelCell {
                        index: m,
                        re: v.re,
                        im: v.im,
                        counts: tally.cell(m).to_vec(),
                    }
                })
                .collect();
            let text = if json {
                io::to_json(&KernelDoc {
                    order: *order,
                    resolution,
                    n: *n,
                    values: cells,
                })
            } else {
                let mut s = format!("order,resolution,n\n{order},{resolution},{n}\nindex,re,im");
                for e in 0..order.get() {
                    s.push_str(&format!(",count_{e}"));
                }
                s.push('\n');
                for c in &cells {
                    s.push_str(&format!(
                        "{},{},{}",
                        c.index,
                        io::fmt_f64(c.re),
                        io::fmt_f64(c.im)
                    ));
                    for count in &c.counts {
                        s.push_str(&format!(",{count}"));
                    }
                    s.push('\n');
                }
                s
            };
            Outcome::ok(text)
        }
        Command::Lebesgue { order, n, n_list } => {
            let ns = match (n, n_list) {
                (Some(n), _) => vec![*n],
                (None, Some(path)) => io::read_index_list(&read_file(path)?)?,
                (None, None) => unreachable!("clap requires --n or --n-list"),
            };
            let values = ns
                .iter()
                .map(|&n| lebesgue(n, *order, &limits))
                .collect::<Result<Vec<_>>>()?;
            let text = if json {
                io::to_json(&LebesgueDoc {
                    order: *order,
                    values,
                })
            } else {
                let rows: Vec<LebesgueRow> = values
                    .iter()
                    .map(|l| LebesgueRow {
                        order: *order,
                        n: l.n,
                        resolution: l.resolution,
                        value: l.value,
                        error_bound: l.error_bound,
                    })
                    .collect();
                io::records_csv(&rows)
            };
            Outcome::ok(text)
        }
        Command::Lemma {
            order,
            k_max,
            bound_scale,
        } => {
            let report = verify_lemma_scaled(*k_max, *order, &limits, *bound_scale)?;
            let text = if json {
                io::to_json(&report)
            } else {
                io::records_csv(&report.rows)
            };
            let failed: Vec<String> = report
                .rows
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.k.to_string())
                .collect();
            Outcome::checked(
                text,
                report.all_pass,
                &format!("lemma bounds fail at k = {}", failed.join(", ")),
            )
        }
        Command::Transform {
            order,
            input,
            inverse,
        } => {
            let text = read_file(input)?;
            if *inverse {
                let s = io::read_spectrum(&text)?;
                check_order(*order, s.order())?;
                let resolution = order.ceil_log(s.len() as u64);
                let f = inverse_with(&s, resolution, &limits)?;
                Outcome::ok(if json {
                    io::function_json(&f)
                } else {
                    io::function_csv(&f)
                })
            } else {
                let f = io::read_function(&text)?;
                check_order(*order, f.order())?;
                limits.check(f.len() as u64)?;
                let s = forward(&f);
                Outcome::ok(if json {
                    io::spectrum_json(&s)
                } else {
                    io::spectrum_csv(&s)
                })
            }
        }
        Command::Greedy {
            coeffs,
            m,
            resolution,
        } => {
            let s = io::read_spectrum(&read_file(coeffs)?)?;
            s.order().cells(*resolution, &limits)?;
            let selection = greedy_select(&s, *m)?;
            let g = greedy_approximant(&s, *m, *resolution)?;
            let doc = GreedyDoc {
                order: s.order(),
                resolution: *resolution,
                m: *m,
                l1_norm: l1_norm(&g),
                selected: selection.indices().to_vec(),
                values: io::entries(g.values()),
            };
            let text = if json {
                io::to_json(&doc)
            } else {
                let selected: Vec<String> = doc.selected.iter().map(|i| i.to_string()).collect();
                let mut s = format!(
                    "order,resolution,m,l1_norm,selected\n{},{},{},{},{}\n",
                    doc.order,
                    doc.resolution,
                    doc.m,
                    io::fmt_f64(doc.l1_norm),
                    selected.join(";")
                );
                io::push_entry_rows(&mut s, g.values());
                s
            };
            Outcome::ok(text)
        }
        Command::Gap {
            order,
            k,
            bound_scale,
        } => {
            let report = block_gap_scaled(*k, *order, &limits, *bound_scale)?;
            let text = if json {
                io::to_json(&report)
            } else {
                io::records_csv(&[&report])
            };
            Outcome::checked(
                text,
                report.pass,
                &format!("block gap bounds fail at k = {k}"),
            )
        }
        Command::Coeffs { order, max_index } => {
            limits.check(*max_index)?;
            let rows: Vec<CoeffRow> = coefficient_keys(*max_index, *order)?
                .into_iter()
                .map(|(_, key)| CoeffRow {
                    i: key.index,
                    block: key.block,
                    value: key.value(),
                    dyadic_log2: key.dyadic_log2(),
                })
                .collect();
            Outcome::ok(if json {
                io::to_json(&rows)
            } else {
                io::records_csv(&rows)
            })
        }
        Command::Norms {
            order,
            blocks,
            bound_scale,
        } => {
            let report = decomposition_norms_scaled(*blocks, *order, &limits, *bound_scale)?;
            let text = if json {
                io::to_json(&report)
            } else {
                io::records_csv(&[&report])
            };
            Outcome::checked(
                text,
                report.pass,
                &format!("norm bounds fail for {blocks} blocks"),
            )
        }
    };
    Ok(out)
}

fn check_order(expected: Order, got: Order) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::OrderMismatch {
            expected: expected.get(),
            got: got.get(),
        })
    }
}

/// Runs the CLI against the given writers and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    match outcome.failure {
        Some(what) => {
            let _ = writeln!(stderr, "verification failed: {what}");
            EXIT_VERIFICATION_FAILED
        }
        None => EXIT_OK,
    }
}

/// Runs the CLI on the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
