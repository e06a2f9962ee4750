use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use ck_cli::config::{parse_preset, Engine, GridRange, RunConfig};
use ck_cli::csvout::{self, Table};
use ck_cli::figures;
use ck_cli::oracle_check::{self, OracleOptions};
use ck_cli::sweep;

#[derive(Parser)]
#[command(
    name = "ck",
    about = "Damped-oscillator energetics: closed-form work/heat series with numerical oracles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamFlags {
    /// Config file with key = value lines (flags win over the file)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter set: UO, OO, harmonic, drag
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    omega_over_lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    epsilon_delta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    mean_energy: Option<f64>,
    /// Axis grid start:end:count (ωt, or λt for drag scenarios)
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Superposition/mixture parameter for the mu_state engine
    #[arg(long)]
    mu: Option<f64>,
}

impl ParamFlags {
    fn build(&self, base: RunConfig) -> Result<RunConfig> {
        let mut cfg = base;
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(p) = &self.preset {
            cfg.preset = Some(parse_preset(p)?);
        }
        if let Some(v) = self.omega_over_lambda {
            cfg.omega_over_lambda = Some(v);
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = Some(v);
        }
        if let Some(v) = self.epsilon_delta {
            cfg.epsilon_delta = Some(v);
        }
        if let Some(v) = self.theta {
            cfg.theta = Some(v);
        }
        if let Some(v) = self.mean_energy {
            cfg.mean_energy = Some(v);
        }
        if let Some(g) = &self.grid {
            cfg.grid = GridRange::parse(g)?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(m) = self.mu {
            cfg.mu = Some(m);
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the requested engine series over the grid and write one CSV
    Simulate {
        #[command(flatten)]
        params: ParamFlags,
        /// Comma-separated subset of classical,quantum,alicki,proposed,liouville,mu_state
        #[arg(long)]
        engines: Option<String>,
        /// Run the oracle suite after the simulation
        #[arg(long)]
        oracle: bool,
        /// Output CSV path
        #[arg(long, default_value = "series.csv")]
        out: PathBuf,
    },
    /// Reproduce a named figure series (4.2 … 4.9) as CSV + metadata
    Figure {
        /// Figure id, e.g. 4.5
        id: String,
        #[command(flatten)]
        params: ParamFlags,
        /// Output CSV path (default fig<id>.csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite and write a machine-readable report
    OracleCheck {
        #[command(flatten)]
        params: ParamFlags,
        /// Monte Carlo sample count
        #[arg(long, default_value_t = 100_000)]
        n_samples: u64,
        /// JSON report path
        #[arg(long)]
        report: Option<PathBuf>,
        /// Plant a 4x defect in the momentum-variance cross term; the grid
        /// propagator check must then fail (harness self-test)
        #[arg(long, hide = true)]
        mutate_k2: bool,
    },
    /// Randomized identity sweep; nonzero exit if any identity breaks
    Sweep {
        /// Number of random parameter draws
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// τ points per draw
        #[arg(long, default_value_t = 101)]
        tau_points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV of per-draw deviations
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn engine_columns(engines: &[Engine], cfg: &RunConfig) -> Result<Vec<&'static str>> {
    let mut cols: Vec<&'static str> = Vec::new();
    for e in engines {
        match e {
            Engine::Classical => cols.extend_from_slice(&["x_scaled", "k_cl", "w_cl"]),
            Engine::Quantum => cols.push("k_q"),
            Engine::Proposed => cols.extend_from_slice(&["w_q", "w_c", "w_th"]),
            Engine::Alicki => cols.extend_from_slice(&["w_ak", "q_ak"]),
            Engine::Liouville => cols.extend_from_slice(&["li_v2", "li_centroid", "li_var"]),
            Engine::MuState => {
                if cfg.mu.is_none() {
                    anyhow::bail!("the mu_state engine needs --mu");
                }
                cols.extend_from_slice(&["v2_mu", "w_q_mu"]);
            }
        }
    }
    Ok(cols)
}

fn simulate(cfg: &RunConfig, out: &PathBuf) -> Result<bool> {
    let scn = cfg.scenario()?;
    let mut table = Table::new(
        &std::iter::once(scn.axis().column_name())
            .chain(engine_columns(&cfg.engines, cfg)?)
            .collect::<Vec<_>>(),
    );
    let mu_state = cfg
        .mu
        .map(ck_core::ensembles::MuState::new)
        .transpose()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    for axis_value in cfg.grid.values() {
        let t = scn.t_from_axis(axis_value);
        let mut row = vec![axis_value];
        for e in &cfg.engines {
            match e {
                Engine::Classical => {
                    let (x, _) = ck_core::classical::position_scaled(&scn, t)?;
                    row.push(x);
                    row.push(ck_core::classical::kinetic(&scn, t)?);
                    row.push(ck_core::classical::work(&scn, t)?);
                }
                Engine::Quantum => row.push(ck_core::energetics::kinetic_energy(&scn, t)?),
                Engine::Proposed => {
                    let w = ck_core::energetics::quantum_work(&scn, t)?;
                    row.extend_from_slice(&[w.total, w.centroid, w.thermal]);
                }
                Engine::Alicki => {
                    let (w, q) = ck_core::energetics::alicki_work_heat(
                        &scn,
                        t,
                        ck_core::energetics::AlickiMethod::ClosedForm,
                    )?;
                    row.extend_from_slice(&[w, q]);
                }
                Engine::Liouville => {
                    let m = ck_core::ensembles::liouville_moments_scaled(&scn, false, t)?;
                    row.extend_from_slice(&[m.second, m.mean_sq, m.variance]);
                }
                Engine::MuState => {
                    let st = mu_state.as_ref().expect("validated above");
                    row.push(ck_core::ensembles::mu_velocity_sq_scaled(&scn, st, t)?);
                    row.push(ck_core::ensembles::mu_work(&scn, st, t)?.total);
                }
            }
        }
        table.push(row);
    }
    table.write(out)?;
    let meta = serde_json::json!({
        "config": cfg.describe(),
        "axis": scn.axis().column_name(),
        "columns": table.header,
        "asymptotes": ck_core::energetics::asymptotes(&scn)?
            .map(|a| serde_json::json!({
                "w_cl": a.w_cl, "w_q": a.w_q, "w_th": a.w_th,
                "w_ak": a.w_ak, "q_ak": a.q_ak,
            })),
        "version": env!("CARGO_PKG_VERSION"),
    });
    csvout::write_sidecar(out, &meta)?;
    println!("wrote {} ({} rows)", out.display(), table.rows.len());

    if cfg.oracle {
        let rep = oracle_check::run(&scn, cfg.grid.end, &OracleOptions::default())?;
        print!("{}", rep.render_text());
        return Ok(rep.all_passed());
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            params,
            engines,
            oracle,
            out,
        } => {
            let mut cfg = params.build(RunConfig::default())?;
            if let Some(list) = engines {
                cfg.engines = list
                    .split(',')
                    .map(Engine::parse)
                    .collect::<Result<Vec<_>>>()?;
            }
            cfg.oracle = oracle;
            simulate(&cfg, &out)
        }
        Command::Figure { id, params, out } => {
            let cfg = params.build(RunConfig::default())?;
            let output = figures::build(&id, &cfg)?;
            let path = out.unwrap_or_else(|| PathBuf::from(format!("fig{id}.csv")));
            output.table.write(&path)?;
            csvout::write_sidecar(&path, &output.metadata)?;
            println!("wrote {} ({} rows)", path.display(), output.table.rows.len());
            Ok(true)
        }
        Command::OracleCheck {
            params,
            n_samples,
            report,
            mutate_k2,
        } => {
            let cfg = params.build(RunConfig::default())?;
            let scn = cfg.scenario()?;
            let opts = OracleOptions {
                n_samples,
                seed: cfg.seed.max(1),
                mutate_k2,
            };
            let rep = oracle_check::run(&scn, cfg.grid.end, &opts)?;
            print!("{}", rep.render_text());
            if let Some(path) = report {
                std::fs::write(&path, serde_json::to_string_pretty(&rep.to_json())?)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("report: {}", path.display());
            }
            Ok(rep.all_passed())
        }
        Command::Sweep {
            count,
            tau_points,
            seed,
            out,
        } => {
            let outcome = sweep::run(count, tau_points, seed)?;
            println!(
                "sweep over {count} draws x {tau_points} tau points:\n  \
                 max |W_q - (W_c + W_th)| = {:.3e}\n  \
                 max |W_q - dK_q|         = {:.3e}\n  \
                 max |W_c - W_cl|         = {:.3e}\n  \
                 max first-law residual   = {:.3e}",
                outcome.max_decomposition,
                outcome.max_work_energy,
                outcome.max_centroid_classical,
                outcome.max_first_law
            );
            if let Some(path) = out {
                outcome.table.write(&path)?;
                println!("wrote {}", path.display());
            }
            println!("{}", if outcome.passed() { "PASS" } else { "FAIL" });
            Ok(outcome.passed())
        }
    }
}
