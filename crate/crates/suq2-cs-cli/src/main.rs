//! Command-line front end: configuration, the verification suites, and
//! table/plot data emission.

mod wordexpr;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result, bail};
use clap::{Args, Parser, Subcommand};

use suq2_cs::action::{SeriesTable, action_closed_form, gauge_shift_check, Q0Bound};
use suq2_cs::cocycles::{Normalization, Phi1Route};
use suq2_cs::config::Config;
use suq2_cs::dlsv::dlsv_residues;
use suq2_cs::forms::PolyMat;
use suq2_cs::index::{cocycle_pairing, index_pairing};
use suq2_cs::optimize::{Method, StationaryProblem, find_stationary};
use suq2_cs::random::{random_sparse_lifted, rng};
use suq2_cs::rep::fundamental_unitary;
use suq2_cs::residues::residue_report;
use suq2_cs::selftest::{ledger, run_all};
use suq2_cs::shell::shell_traces;
use suq2_cs::symbols::{ActionCoefficientsJson, sigma_poly};

#[derive(Parser)]
#[command(name = "suq2-cs", about = "Chern-Simons theory on the quantum 3-sphere", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    /// JSON configuration file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the primary JSON (or CSV) output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    q: Option<f64>,
    #[arg(long, global = true)]
    m_max: Option<u32>,
    #[arg(long, global = true)]
    guard: Option<u32>,
    #[arg(long = "K", global = true)]
    k_cut: Option<u32>,
    #[arg(long = "level", global = true)]
    k_level: Option<i64>,
    #[arg(long = "N", global = true)]
    n_matrix: Option<u8>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Linear-cochain route: symbolic | cm.
    #[arg(long, global = true)]
    route: Option<String>,
    /// Constant conventions: consistent | printed.
    #[arg(long, global = true)]
    normalization: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full acceptance suite; exit 0 iff every criterion gates.
    Selftest,
    /// Residuals of the five defining relations on the interior.
    Relations,
    /// Residue report for a word expression, e.g. "a* a" or "2 a (b + b*)".
    Residues {
        expr: String,
        /// Also write the shell series as CSV to --out.
        #[arg(long)]
        csv: bool,
    },
    /// Closed-form action breakdowns for a coefficient file.
    Action { coeffs: PathBuf },
    /// Gauge-shift verification with random potentials and the defining unitary.
    VerifyGauge {
        #[arg(long, default_value_t = 3)]
        count: u32,
    },
    /// Fredholm index of the defining unitary across truncations.
    Index,
    /// Stationary-point search over the coefficient field.
    Optimize {
        #[arg(long, default_value_t = 4)]
        starts: u32,
        #[arg(long, default_value = "newton")]
        method: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Residues of the doubled-spinor Dirac spectrum.
    DlsvResidues {
        /// Doubled spin cutoff.
        #[arg(long, default_value_t = 300)]
        j2_max: u32,
    },
    /// Print the adjudicated discrepancy ledger.
    Ledger,
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    let o = &cli.overrides;
    if let Some(v) = o.q {
        cfg.q = v;
    }
    if let Some(v) = o.m_max {
        cfg.m_max = v;
    }
    if let Some(v) = o.guard {
        cfg.guard = v;
    }
    if let Some(v) = o.k_cut {
        cfg.k_cut = v;
    }
    if let Some(v) = o.k_level {
        cfg.k_level = v;
    }
    if let Some(v) = o.n_matrix {
        cfg.n_matrix = v;
    }
    if let Some(v) = o.seed {
        cfg.seed = v;
    }
    if let Some(r) = &o.route {
        cfg.phi1_route = match r.as_str() {
            "symbolic" => Phi1Route::Symbolic,
            "cm" => Phi1Route::Cm,
            "cm-literal" => Phi1Route::CmLiteral,
            other => bail!("unknown route `{other}` (symbolic | cm | cm-literal)"),
        };
    }
    if let Some(n) = &o.normalization {
        cfg.normalization = match n.as_str() {
            "consistent" => Normalization::Consistent,
            "printed" => Normalization::Printed,
            other => bail!("unknown normalization `{other}` (consistent | printed)"),
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Selftest => {
            let outcomes = run_all(&cfg)?;
            for o in &outcomes {
                println!("{}", o.line());
            }
            let pass = outcomes.iter().filter(|o| o.passed).count();
            let ledgered = outcomes.iter().filter(|o| !o.passed && o.ledgered).count();
            let fail = outcomes.len() - pass - ledgered;
            println!("summary: {pass} pass, {ledgered} ledgered, {fail} fail");
            if let Some(path) = &cli.out {
                fs::write(path, serde_json::to_string_pretty(&outcomes)?)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(if fail == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Relations => {
            let rep = cfg.rep()?;
            let rows: Vec<(String, f64)> = rep
                .relation_residuals()
                .into_iter()
                .map(|(n, v)| (n.to_string(), v))
                .collect();
            let report = serde_json::json!({
                "q": cfg.q,
                "m_max": cfg.m_max,
                "guard": cfg.guard,
                "residuals": rows,
            });
            emit(cli, &json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Residues { expr, csv } => {
            let parsed = wordexpr::parse_word(expr).map_err(|e| anyhow::anyhow!("{e}"))?;
            let poly = parsed.eval();
            let rep = cfg.rep()?;
            let op = rep.poly_op(&poly);
            let series = shell_traces(&op);
            if *csv {
                emit(cli, &series.to_csv())?;
            }
            let report = residue_report(&series, cfg.q)?;
            let mean = sigma_poly(&poly).mean();
            let combined = serde_json::json!({
                "expression": parsed.print(),
                "q": cfg.q,
                "residues": report,
                "circle_mean": [mean.re, mean.im],
            });
            if *csv {
                println!("{}", json(&combined)?);
            } else {
                emit(cli, &json(&combined)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Action { coeffs } => {
            let text = fs::read_to_string(coeffs)
                .with_context(|| format!("reading {}", coeffs.display()))?;
            let cj: ActionCoefficientsJson = serde_json::from_str(&text)?;
            let c = cj.decode();
            let rep = cfg.rep()?;
            let table = SeriesTable::build(&rep, c.k_cut.max(cfg.k_cut))?;
            let consistent =
                action_closed_form(&c, &table, cfg.k_level, Normalization::Consistent, Q0Bound::SymmetrizedAbs);
            let printed =
                action_closed_form(&c, &table, cfg.k_level, Normalization::Printed, Q0Bound::SymmetrizedAbs);
            let report = serde_json::json!({
                "q": cfg.q,
                "level": cfg.k_level,
                "consistent": consistent,
                "printed": printed,
            });
            emit(cli, &json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyGauge { count } => {
            let rep = cfg.rep()?;
            let u = PolyMat::new(
                2,
                fundamental_unitary(cfg.q).into_iter().flatten().collect(),
            );
            let mut g = rng(cfg.seed);
            let mut reports = Vec::new();
            for _ in 0..*count {
                let a = random_sparse_lifted(&mut g, 2, cfg.k_cut as i32, 0.4);
                reports.push(gauge_shift_check(
                    &a,
                    &u,
                    &rep,
                    cfg.k_level,
                    cfg.phi1_route,
                    cfg.normalization,
                )?);
            }
            emit(cli, &json(&reports)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Index => {
            let u = PolyMat::new(
                2,
                fundamental_unitary(cfg.q).into_iter().flatten().collect(),
            );
            let mut rows = Vec::new();
            for m_max in [40u32, 60, cfg.m_max] {
                let rep = suq2_cs::rep::Rep::new(cfg.q, suq2_cs::basis::Truncation::new(m_max, cfg.guard.min(m_max / 4))?)?;
                let idx = index_pairing(&u, &rep)?;
                let pairing = cocycle_pairing(&u, &rep, cfg.phi1_route, cfg.normalization)?;
                rows.push(serde_json::json!({
                    "m_max": m_max,
                    "index": idx,
                    "pairing": pairing,
                }));
            }
            emit(cli, &json(&rows)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize { starts, method, tol } => {
            let rep = cfg.rep()?;
            let problem = StationaryProblem::new(&rep, cfg.k_cut, cfg.k_level, cfg.normalization)?;
            let method = match method.as_str() {
                "newton" => Method::DampedNewton,
                "gd" => Method::GradientDescent,
                other => bail!("unknown method `{other}` (newton | gd)"),
            };
            let mut g = rng(cfg.seed);
            let mut reports = Vec::new();
            let zero = vec![0.0; problem.dim()];
            reports.push(find_stationary(&problem, &zero, method, *tol, 500)?);
            for _ in 1..*starts {
                let init = suq2_cs::random::random_coords(&mut g, problem.dim(), 0.5);
                reports.push(find_stationary(&problem, &init, method, *tol, 500)?);
            }
            if let Some(path) = &cli.out {
                // trajectory CSV next to the JSON report
                let mut csv = String::from("start,iter,value,grad_norm\n");
                for (s, r) in reports.iter().enumerate() {
                    for (it, v, g) in &r.trajectory {
                        csv.push_str(&format!("{s},{it},{v:.17e},{g:.17e}\n"));
                    }
                }
                let csv_path = path.with_extension("trajectory.csv");
                fs::write(&csv_path, csv)?;
                eprintln!("wrote {}", csv_path.display());
            }
            emit(cli, &json(&reports)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DlsvResidues { j2_max } => {
            let report = dlsv_residues(*j2_max)?;
            emit(cli, &json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ledger => {
            let items = ledger(&cfg)?;
            let mut text = String::new();
            for item in &items {
                text.push_str(&format!("[{}] {}\n  {}\n", item.id, item.title, item.finding));
                for (k, v) in &item.values {
                    text.push_str(&format!("    {k}: {v}\n"));
                }
            }
            if let Some(path) = &cli.out {
                fs::write(path, serde_json::to_string_pretty(&items)?)?;
                eprintln!("wrote {}", path.display());
            }
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
