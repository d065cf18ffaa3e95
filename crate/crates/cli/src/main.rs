//! `clab`: command-line front end for `clab-core`.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clab_core::analytic_series::{l_tilde_direct, l_tilde_prime_series, SeriesValue};
use clab_core::coalescence::{
    is_coalescing, is_coalescing_oracle_guarded, triangle_map, write_triangle_csv,
};
use clab_core::cyclotomic::CyclotomicReducer;
use clab_core::distribution::{h_row, rh_envelope, write_envelope_csv, write_h_csv, BuchstabTable};
use clab_core::primes::PrimeTable;
use clab_core::qh_satake::{c1_spectrum_guarded, WedgeBasis};
use clab_core::Error;
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use config::{Format, Overrides, RunConfig, CONFIG_ENV};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "clab",
    version,
    about = "Coalescence on Grassmannians and the arithmetic behind it"
)]
struct Cli {
    /// Largest integer covered by the prime sieve.
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,
    /// Maximum number of k-subsets the exhaustive oracle may visit.
    #[arg(long, global = true)]
    oracle_guard: Option<u64>,
    /// Maximum matrix dimension handed to the dense eigensolver.
    #[arg(long, global = true)]
    eigen_guard: Option<usize>,
    /// Named tolerance, e.g. `--tol residual=1e-9`.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coalescence flags of G(k, n) for 2 <= n <= n_max as CSV.
    Triangle {
        #[arg(long)]
        n_max: u64,
    },
    /// Closed-form verdict for G(k, n), optionally checked by exhaustive search.
    Coalesce {
        n: u64,
        k: Option<u64>,
        #[arg(long)]
        oracle: bool,
    },
    /// The Dirichlet series of the non-coalescing counts, two ways.
    Lseries {
        #[arg(allow_hyphen_values = true)]
        s_re: f64,
        #[arg(allow_hyphen_values = true)]
        s_im: f64,
        #[arg(long)]
        ncut: Option<u64>,
        #[arg(long)]
        pcut: Option<f64>,
    },
    /// H(x, y) by direct count and by the rough-number identity.
    Distribution { x: u64, y: Option<u64> },
    /// The Buchstab function at u.
    Buchstab { u: f64 },
    /// Comparison of H^(x) with li(x).
    Envelope {
        x: f64,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
    },
    /// Eigenvalues of c_1 acting on QH(G(k, n)) at the given q.
    Spectrum {
        n: usize,
        k: usize,
        #[arg(allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q_im: f64,
    },
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = value
        .parse()
        .map_err(|_| format!("invalid number '{value}'"))?;
    Ok((name.to_string(), v))
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Cache(_) | Error::Io(_) => EXIT_USAGE,
            Error::ResourceLimit(_) => EXIT_GUARD,
            Error::Pole(_)
            | Error::UnsupportedDomain(_)
            | Error::SingularProduct(_)
            | Error::InsufficientCut { .. }
            | Error::TableRange { .. }
            | Error::NoConvergence(_) => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Rounds to 12 decimals and clears negative zero so output is stable.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> String {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn sieve(&self) -> Result<PrimeTable, Failure> {
        Ok(PrimeTable::new(self.cfg.sieve_limit)?)
    }

    fn format_or(&self, default: Format) -> Format {
        self.cfg.format.unwrap_or(default)
    }
}

/// Output text plus an exit code that is not necessarily zero.
type Report = (String, u8);

fn cmd_triangle(ctx: &Ctx, n_max: u64) -> Result<Report, Failure> {
    if n_max < 2 {
        return Err(usage(format!("--n-max must be at least 2, got {n_max}")));
    }
    let t = PrimeTable::new(n_max.max(2))?;
    let rows = triangle_map(&t, n_max)?;
    let out = match ctx.format_or(Format::Csv) {
        Format::Csv => csv_bytes(|b| write_triangle_csv(&rows, b)),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: u64,
                coalescing: Vec<bool>,
            }
            let rows: Vec<Row> = rows
                .into_iter()
                .enumerate()
                .map(|(i, coalescing)| Row {
                    n: i as u64 + 2,
                    coalescing,
                })
                .collect();
            to_json(&rows)
        }
    };
    Ok((out, 0))
}

#[derive(Serialize)]
struct Verdict {
    n: u64,
    k: u64,
    coalescing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn cmd_coalesce(ctx: &Ctx, n: u64, k: Option<u64>, oracle: bool) -> Result<Report, Failure> {
    if n < 2 {
        return Err(usage(format!("n must be at least 2, got {n}")));
    }
    let t = PrimeTable::new(n)?;
    let ks: Vec<u64> = match k {
        Some(k) if k == 0 || k >= n => {
            return Err(usage(format!("k must lie in [1, {}], got {k}", n - 1)))
        }
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    let reducer = if oracle {
        Some(CyclotomicReducer::new(n as usize)?)
    } else {
        None
    };
    let mut verdicts = Vec::with_capacity(ks.len());
    for k in ks {
        let closed = is_coalescing(&t, k, n)?;
        let exact = match &reducer {
            Some(r) => Some(is_coalescing_oracle_guarded(r, k, n, ctx.cfg.oracle_guard)?),
            None => None,
        };
        verdicts.push(Verdict {
            n,
            k,
            coalescing: closed,
            oracle: exact,
            agree: exact.map(|e| e == closed),
        });
    }
    let code = if verdicts.iter().any(|v| v.agree == Some(false)) {
        EXIT_DISAGREE
    } else {
        0
    };
    let out = match ctx.cfg.format {
        Some(Format::Json) => to_json(&verdicts),
        Some(Format::Csv) => {
            let mut s = String::from(if oracle {
                "n,k,coalescing,oracle,agree\n"
            } else {
                "n,k,coalescing\n"
            });
            for v in &verdicts {
                let _ = write!(s, "{},{},{}", v.n, v.k, v.coalescing as u8);
                if let (Some(o), Some(a)) = (v.oracle, v.agree) {
                    let _ = write!(s, ",{},{}", o as u8, a as u8);
                }
                s.push('\n');
            }
            s
        }
        None => {
            let mut s = String::new();
            for v in &verdicts {
                if k.is_none() {
                    let _ = write!(s, "k={} ", v.k);
                }
                let _ = write!(s, "coalescing={}", v.coalescing);
                if let (Some(o), Some(a)) = (v.oracle, v.agree) {
                    let _ = write!(s, " oracle={o} agree={a}");
                }
                s.push('\n');
            }
            s
        }
    };
    Ok((out, code))
}

#[derive(Serialize)]
struct SeriesJson {
    value: [f64; 2],
    tail_bound: f64,
    terms_used: usize,
}

impl From<&SeriesValue<f64>> for SeriesJson {
    fn from(v: &SeriesValue<f64>) -> Self {
        SeriesJson {
            value: [clean(v.value.re), clean(v.value.im)],
            tail_bound: v.tail_bound,
            terms_used: v.terms_used,
        }
    }
}

fn cmd_lseries(
    ctx: &Ctx,
    s: Complex64,
    ncut: Option<u64>,
    pcut: Option<f64>,
) -> Result<Report, Failure> {
    if s.re.is_nan() || s.re <= 2.0 {
        return Err(
            Error::UnsupportedDomain(format!("the series needs Re(s) > 2, got s = {s}")).into(),
        );
    }
    let t = ctx.sieve()?;
    let ncut = ncut.unwrap_or(t.limit());
    let pcut = pcut.unwrap_or(t.limit() as f64);
    let direct = l_tilde_direct(s, ncut, &t)?;
    let primes = l_tilde_prime_series(s, pcut, &t)?;
    let difference = (direct.value - primes.value).norm();
    let combined = direct.tail_bound + primes.tail_bound;
    let out = match ctx.format_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                s: [f64; 2],
                direct: SeriesJson,
                prime_series: SeriesJson,
                difference: f64,
                combined_tail: f64,
                within_tails: bool,
            }
            to_json(&Out {
                s: [s.re, s.im],
                direct: (&direct).into(),
                prime_series: (&primes).into(),
                difference,
                combined_tail: combined,
                within_tails: difference <= combined,
            })
        }
        Format::Csv => {
            let mut out =
                String::from("method,s_re,s_im,value_re,value_im,tail_bound,terms_used\n");
            for (name, v) in [("direct", &direct), ("prime_series", &primes)] {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{},{:e},{}",
                    s.re,
                    s.im,
                    clean(v.value.re),
                    clean(v.value.im),
                    v.tail_bound,
                    v.terms_used
                );
            }
            out
        }
    };
    Ok((out, 0))
}

fn cmd_distribution(ctx: &Ctx, x: u64, y: Option<u64>) -> Result<Report, Failure> {
    let t = ctx.sieve()?;
    let ys: Vec<u64> = match y {
        Some(y) => vec![y],
        None => {
            // powers of two up to 2 sqrt(x), plus the H^ point itself
            let top = ((2.0 * (x as f64).sqrt()) as u64).min(x);
            let mut ys: Vec<u64> = (1..64)
                .map(|j| 1u64 << j)
                .take_while(|&y| y <= top)
                .collect();
            if top >= 2 {
                ys.push(top);
            }
            ys.dedup();
            ys
        }
    };
    if ys.is_empty() {
        return Err(usage(format!("x = {x} leaves no admissible y")));
    }
    let rows = ys
        .iter()
        .map(|&y| h_row(&t, x, y))
        .collect::<Result<Vec<_>, _>>()?;
    let out = match ctx.format_or(Format::Csv) {
        Format::Csv => csv_bytes(|b| write_h_csv(&rows, b)),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                x: u64,
                y: u64,
                h_direct: u64,
                h_identity: u64,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    x: r.x,
                    y: r.y,
                    h_direct: r.direct,
                    h_identity: r.identity,
                })
                .collect();
            to_json(&rows)
        }
    };
    let code = if rows.iter().any(|r| r.direct != r.identity) {
        EXIT_DISAGREE
    } else {
        0
    };
    Ok((out, code))
}

fn cmd_buchstab(ctx: &Ctx, u: f64) -> Result<Report, Failure> {
    let u_max = 40f64.max(u.ceil());
    let tbl = BuchstabTable::<f64>::new(1e-3, u_max)?;
    let omega = tbl.omega(u)?;
    let out = match ctx.cfg.format {
        None => format!("{omega:.12}\n"),
        Some(Format::Csv) => format!("u,omega\n{u},{omega:.12}\n"),
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Out {
                u: f64,
                omega: f64,
            }
            to_json(&Out {
                u,
                omega: clean(omega),
            })
        }
    };
    Ok((out, 0))
}

fn cmd_envelope(ctx: &Ctx, x: f64, theta: f64) -> Result<Report, Failure> {
    let t = ctx.sieve()?;
    let e = rh_envelope(&t, x, theta)?;
    let out = match ctx.format_or(Format::Csv) {
        Format::Csv => csv_bytes(|b| write_envelope_csv(&[e], b)),
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                x: f64,
                theta: f64,
                h_hat: u64,
                li: f64,
                diff: f64,
                normalized: f64,
            }
            to_json(&Out {
                x,
                theta,
                h_hat: e.h_hat,
                li: clean(e.li),
                diff: clean(e.diff),
                normalized: clean(e.normalized),
            })
        }
    };
    Ok((out, 0))
}

fn cmd_spectrum(ctx: &Ctx, n: usize, k: usize, q: Complex64) -> Result<Report, Failure> {
    let b = WedgeBasis::new(n, k)?;
    let spec = c1_spectrum_guarded(&b, q, ctx.cfg.tolerance("residual"), ctx.cfg.eigen_guard)?;
    let mut eig: Vec<[f64; 2]> = spec
        .eigenvalues
        .iter()
        .map(|z| [clean(z.re), clean(z.im)])
        .collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let out = match ctx.format_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                n: usize,
                k: usize,
                q_re: f64,
                q_im: f64,
                eigenvalues: Vec<[f64; 2]>,
                max_residual: f64,
            }
            to_json(&Out {
                n,
                k,
                q_re: q.re,
                q_im: q.im,
                eigenvalues: eig,
                max_residual: spec.max_residual,
            })
        }
        Format::Csv => {
            let mut s = String::from("index,re,im\n");
            for (i, [re, im]) in eig.iter().enumerate() {
                let _ = writeln!(s, "{i},{re},{im}");
            }
            s
        }
    };
    Ok((out, 0))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let overrides = Overrides {
        sieve_limit: cli.sieve_limit,
        oracle_guard: cli.oracle_guard,
        eigen_guard: cli.eigen_guard,
        tolerances: cli.tolerances,
        format: cli.format,
        output: cli.output,
    };
    let file = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let cfg = RunConfig::resolve(file.as_deref(), &overrides).map_err(usage)?;
    let ctx = Ctx { cfg };
    let (text, code) = match cli.command {
        Command::Triangle { n_max } => cmd_triangle(&ctx, n_max)?,
        Command::Coalesce { n, k, oracle } => cmd_coalesce(&ctx, n, k, oracle)?,
        Command::Lseries {
            s_re,
            s_im,
            ncut,
            pcut,
        } => cmd_lseries(&ctx, Complex64::new(s_re, s_im), ncut, pcut)?,
        Command::Distribution { x, y } => cmd_distribution(&ctx, x, y)?,
        Command::Buchstab { u } => cmd_buchstab(&ctx, u)?,
        Command::Envelope { x, theta } => cmd_envelope(&ctx, x, theta)?,
        Command::Spectrum { n, k, q, q_im } => cmd_spectrum(&ctx, n, k, Complex64::new(q, q_im))?,
    };
    match &ctx.cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| usage(format!("cannot write output: {e}")))?;
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => {
            eprintln!("clab: verification mismatch");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("clab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
