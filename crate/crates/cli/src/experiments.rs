//! The five experiments, each rendered as CSV.

use rodeo_core::engine::RodeoRun;
use rodeo_core::ensemble::{
    fluctuation_metric, predicted_max_std, reduction_ratio, sweep, EstimateRecord, SweepOptions,
};
use rodeo_core::microcanonical::{
    entropy_constant, entropy_of_records, estimate_dos, nos_sum, DosRecord,
};
use rodeo_core::stats::mean_std;

use crate::config::{config_err, Config, Experiment, InputState};
use crate::plot::{Plot, Series};
use crate::{fmt_f64, CliError, Csv};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub audit: bool,
}

impl RunOptions {
    fn sweep_options(self) -> SweepOptions {
        SweepOptions {
            audit: self.audit,
            tag: 0,
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub csv: String,
    pub plot: Option<Plot>,
}

pub fn run(experiment: Experiment, cfg: &Config, opts: RunOptions) -> Result<Report, CliError> {
    match experiment {
        Experiment::Sweep => run_sweep(cfg, opts),
        Experiment::Dos => run_dos(cfg, opts),
        Experiment::Nos => run_nos(cfg, opts),
        Experiment::Table1 => run_table1(cfg, opts),
        Experiment::ProbCurves => run_prob_curves(cfg),
    }
}

pub fn sweep_records(cfg: &Config, opts: RunOptions) -> Result<Vec<EstimateRecord>, CliError> {
    let h = cfg.hamiltonian()?;
    let psi = cfg.state_vector(&h)?;
    let grid = cfg.grid()?;
    Ok(sweep(
        &psi,
        &h,
        cfg.ancilla_dim,
        &grid,
        &cfg.sampler(cfg.seed)?,
        opts.sweep_options(),
    )?)
}

pub fn run_sweep(cfg: &Config, opts: RunOptions) -> Result<Report, CliError> {
    let records = sweep_records(cfg, opts)?;
    let mut csv = Csv::new(&[
        "energy",
        "mean_re",
        "sem_re",
        "mean_im",
        "sem_im",
        "std_re",
        "std_im",
        "analytic_re",
        "n_samples",
    ]);
    for r in &records {
        csv.row([
            fmt_f64(r.energy),
            fmt_f64(r.mean_re),
            fmt_f64(r.sem_re()),
            fmt_f64(r.mean_im),
            fmt_f64(r.sem_im()),
            fmt_f64(r.std_re),
            fmt_f64(r.std_im),
            fmt_f64(r.analytic_re),
            r.n_samples.to_string(),
        ]);
    }
    let plot = Plot {
        title: format!("spectral amplitude, d = {}", cfg.ancilla_dim),
        x_label: "E".into(),
        y_label: "G".into(),
        series: vec![
            Series::line(
                "analytic",
                records.iter().map(|r| (r.energy, r.analytic_re)).collect(),
            ),
            Series::points(
                "estimate",
                records
                    .iter()
                    .map(|r| (r.energy, r.mean_re, r.sem_re()))
                    .collect(),
            ),
        ],
    };
    Ok(Report {
        csv: csv.finish(),
        plot: Some(plot),
    })
}

fn dos_report(cfg: &Config, records: &[DosRecord], title: &str) -> Result<Report, CliError> {
    let h = cfg.hamiltonian()?;
    let c = entropy_constant(h.local_dim(), h.n_sites());
    let entropy = entropy_of_records(records);
    let mut csv = Csv::new(&[
        "energy",
        "g_estimate",
        "g_sem",
        "g_std",
        "g_oracle",
        "n_samples",
        "S",
        "S_flag",
        "entropy_constant",
    ]);
    for (r, s) in records.iter().zip(&entropy) {
        let (s_val, flag) = match s.entropy {
            Some(v) => (fmt_f64(v), "ok"),
            None => (String::new(), "below_floor"),
        };
        csv.row([
            fmt_f64(r.energy),
            fmt_f64(r.g_estimate),
            fmt_f64(r.g_sem()),
            fmt_f64(r.g_std),
            fmt_f64(r.g_oracle),
            r.n_samples.to_string(),
            s_val,
            flag.to_string(),
            fmt_f64(c),
        ]);
    }
    let plot = Plot {
        title: format!("{title}, d = {}", cfg.ancilla_dim),
        x_label: "E".into(),
        y_label: "g".into(),
        series: vec![
            Series::line(
                "oracle",
                records.iter().map(|r| (r.energy, r.g_oracle)).collect(),
            ),
            Series::points(
                "estimate",
                records
                    .iter()
                    .map(|r| (r.energy, r.g_estimate, r.g_sem()))
                    .collect(),
            ),
        ],
    };
    Ok(Report {
        csv: csv.finish(),
        plot: Some(plot),
    })
}

pub fn run_dos(cfg: &Config, opts: RunOptions) -> Result<Report, CliError> {
    let h = cfg.hamiltonian()?;
    let records = estimate_dos(
        &h,
        cfg.ancilla_dim,
        &cfg.grid()?,
        &cfg.sampler(cfg.seed)?,
        opts.sweep_options(),
    )?;
    dos_report(cfg, &records, "density of states")
}

pub fn run_nos(cfg: &Config, opts: RunOptions) -> Result<Report, CliError> {
    let h = cfg.hamiltonian()?;
    let records = nos_sum(
        &h,
        cfg.ancilla_dim,
        &cfg.grid()?,
        &cfg.sampler(cfg.seed)?,
        opts.sweep_options(),
    )?;
    dos_report(cfg, &records, "number of states")
}

/// Per-seed statistics of one ancilla dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub d: usize,
    pub predicted_max_std: f64,
    pub mean_error_bar: Vec<f64>,
    pub fluctuation: Vec<f64>,
    /// Reduction relative to the qubit run with the same seed.
    pub reduction_ratio: Vec<f64>,
}

/// Runs every dimension in `dims` over `repeats` seeds (`seed`, `seed + 1`, ...).
pub fn table1_rows(cfg: &Config, opts: RunOptions) -> Result<Vec<Table1Row>, CliError> {
    let h = cfg.hamiltonian()?;
    let psi = cfg.state_vector(&h)?;
    let grid = cfg.grid()?;
    let seeds: Vec<u64> = (0..cfg.repeats as u64)
        .map(|r| cfg.seed.wrapping_add(r))
        .collect();
    let summarize = |d: usize, seed: u64| -> Result<_, CliError> {
        let records = sweep(
            &psi,
            &h,
            d,
            &grid,
            &cfg.sampler(seed)?,
            opts.sweep_options(),
        )?;
        Ok(fluctuation_metric(&records, cfg.threshold)?)
    };
    let qubit = seeds
        .iter()
        .map(|&s| summarize(2, s))
        .collect::<Result<Vec<_>, _>>()?;
    cfg.dims
        .iter()
        .map(|&d| {
            let runs = if d == 2 {
                qubit.clone()
            } else {
                seeds
                    .iter()
                    .map(|&s| summarize(d, s))
                    .collect::<Result<Vec<_>, _>>()?
            };
            Ok(Table1Row {
                d,
                predicted_max_std: predicted_max_std(d, cfg.n_times)?,
                mean_error_bar: runs.iter().map(|r| r.mean_error_bar).collect(),
                fluctuation: runs.iter().map(|r| r.fluctuation).collect(),
                reduction_ratio: runs
                    .iter()
                    .zip(&qubit)
                    .map(|(r, q)| reduction_ratio(r.fluctuation, q.fluctuation))
                    .collect(),
            })
        })
        .collect()
}

fn mean_and_spread(values: &[f64]) -> (String, String) {
    let (mean, std) = mean_std(values.iter().copied());
    let spread = if values.len() > 1 {
        fmt_f64(std)
    } else {
        String::new()
    };
    (fmt_f64(mean), spread)
}

pub fn run_table1(cfg: &Config, opts: RunOptions) -> Result<Report, CliError> {
    let rows = table1_rows(cfg, opts)?;
    let mut csv = Csv::new(&[
        "d",
        "predicted_max_std",
        "mean_error_bar",
        "mean_error_bar_spread",
        "fluctuation",
        "fluctuation_spread",
        "reduction_ratio",
        "reduction_ratio_spread",
        "repeats",
    ]);
    for r in &rows {
        let (eb, eb_s) = mean_and_spread(&r.mean_error_bar);
        let (fl, fl_s) = mean_and_spread(&r.fluctuation);
        let (rr, rr_s) = mean_and_spread(&r.reduction_ratio);
        csv.row([
            r.d.to_string(),
            fmt_f64(r.predicted_max_std),
            eb,
            eb_s,
            fl,
            fl_s,
            rr,
            rr_s,
            cfg.repeats.to_string(),
        ]);
    }
    Ok(Report {
        csv: csv.finish(),
        plot: None,
    })
}

/// Ancilla outcome probabilities against `Δ = d ω t / 2` for an eigenstate
/// input, one column per `(d, n)` plus the per-`d` total.
pub fn run_prob_curves(cfg: &Config) -> Result<Report, CliError> {
    let h = cfg.hamiltonian()?;
    let x = match cfg.state {
        InputState::Basis(x) => x,
        _ => return Err(config_err("prob-curves needs a basis-state input")),
    };
    if cfg.time == 0.0 {
        return Err(config_err("prob-curves needs a non-zero time"));
    }
    let psi = cfg.state_vector(&h)?;
    let deltas = rodeo_core::ensemble::energy_grid(cfg.delta_min, cfg.delta_max, cfg.delta_steps)?;
    let mut header = vec!["delta".to_string()];
    for &d in &cfg.dims {
        header.extend((0..d).map(|n| format!("p_d{d}_n{n}")));
        header.push(format!("sum_d{d}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header_refs);
    let mut curves: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cfg.dims.len()];
    for &delta in &deltas {
        let mut row = vec![fmt_f64(delta)];
        for (k, &d) in cfg.dims.iter().enumerate() {
            let energy = h.energy(x) - 2.0 * delta / (d as f64 * cfg.time);
            let dist = RodeoRun::new(d, &h, &psi, energy, cfg.time)?.measurement_distribution()?;
            row.extend(dist.probs.iter().map(|p| fmt_f64(*p)));
            row.push(fmt_f64(dist.total()));
            curves[k].push((delta, dist.probs[0]));
        }
        csv.row(row);
    }
    let plot = Plot {
        title: "outcome probability of n = 0".into(),
        x_label: "delta".into(),
        y_label: "P(0)".into(),
        series: cfg
            .dims
            .iter()
            .zip(curves)
            .map(|(d, c)| Series::line(&format!("d = {d}"), c))
            .collect(),
    };
    Ok(Report {
        csv: csv.finish(),
        plot: Some(plot),
    })
}
