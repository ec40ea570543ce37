//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rodeo_cli::config::{Config, Experiment};
use rodeo_cli::experiments::{run, run_prob_curves, sweep_records, table1_rows, RunOptions};
use rodeo_core::engine::{rodeo_kernel, RodeoRun, WeightedSpectrum};
use rodeo_core::ensemble::{
    analytic_sa, energy_grid, gaussian_transfer, predicted_max_std, relative_difference,
    variance_profile, SweepOptions, TimeSampler,
};
use rodeo_core::hamiltonians::{ising_diagonal, spectrum_summary, Spin};
use rodeo_core::microcanonical::{
    estimate_dos, homogeneous_state, smoothed_dos_oracle, smoothed_dos_oracle_qudit,
};
use rodeo_core::qudit::StateVector;
use rodeo_core::Complex64;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cfg(text: &str) -> Config {
    Config::parse(text, &[]).expect("acceptance config parses")
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / n).collect()).unwrap()
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=5);
        let n = rng.random_range(2..=4);
        let h = ising_diagonal(Spin::Half, n, 1.0).unwrap();
        let psi = random_state(&mut rng, h.dim());
        let e = rng.random_range(-6.0..6.0);
        let t = rng.random_range(-10.0..10.0);
        let run = RodeoRun::new(d, &h, &psi, e, t).unwrap();
        let circuit = run.expectation_value_circuit().unwrap();
        let kernel: Complex64 = psi
            .amplitudes()
            .iter()
            .zip(h.energies())
            .map(|(c, ex)| rodeo_kernel(d, ex - e, t).unwrap() * c.norm_sqr())
            .sum();
        worst = worst.max((circuit - kernel).norm());
    }
    check(
        worst < 1e-10,
        format!("max |circuit - kernel| = {worst:.3e} over 100 cases (< 1e-10)"),
    )
}

fn table_theory() -> Outcome {
    let want = [(2, 0.03162), (3, 0.02357), (4, 0.02500), (5, 0.02608)];
    let mut worst: f64 = 0.0;
    let mut got = Vec::new();
    for (d, w) in want {
        let p = predicted_max_std(d, 500).unwrap();
        worst = worst.max((p - w).abs());
        got.push(format!("d={d}: {p:.5}"));
    }
    check(
        worst < 1e-4,
        format!("{} (max deviation {worst:.1e} < 1e-4)", got.join(", ")),
    )
}

const GROUND_STATE_SWEEP: &str = "spin = half\nn_sites = 5\nstate = 0\nsigma = 5\nn_times = 500\n\
energy_min = -7\nenergy_max = 7\nenergy_steps = 141\nthreshold = 0.1\nseed = 1\nrepeats = 5\ndims = 2,3,4,5\n";

fn error_bars(rows: &[rodeo_cli::experiments::Table1Row]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in rows {
        let worst = r
            .mean_error_bar
            .iter()
            .map(|m| (m / r.predicted_max_std - 1.0).abs())
            .fold(0.0, f64::max);
        ok &= worst < 0.02;
        let mean = r.mean_error_bar.iter().sum::<f64>() / r.mean_error_bar.len() as f64;
        parts.push(format!(
            "d={}: {mean:.5} vs {:.5} (worst seed {:.2}%)",
            r.d,
            r.predicted_max_std,
            100.0 * worst
        ));
    }
    check(ok, format!("{} (each seed within 2%)", parts.join(", ")))
}

fn qutrit_reduction(rows: &[rodeo_cli::experiments::Table1Row]) -> Outcome {
    let r3 = rows.iter().find(|r| r.d == 3).expect("d = 3 row");
    let mean = r3.reduction_ratio.iter().sum::<f64>() / r3.reduction_ratio.len() as f64;
    let per_seed: Vec<String> = r3
        .reduction_ratio
        .iter()
        .map(|r| format!("{:.1}%", 100.0 * r))
        .collect();
    check(
        (0.10..=0.25).contains(&mean),
        format!(
            "mean over 5 seeds {:.1}% in [10%, 25%] (per seed: {})",
            100.0 * mean,
            per_seed.join(", ")
        ),
    )
}

fn normalization() -> Outcome {
    let c = cfg("delta_min = -12.566370614359172\ndelta_max = 12.566370614359172\ndelta_steps = 4001\ndims = 2,3,4\n");
    let csv = run_prob_curves(&c).map_err(|e| e.to_string())?.csv;
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let sums: Vec<usize> = (0..header.len())
        .filter(|&i| header[i].starts_with("sum_"))
        .collect();
    let mut worst: f64 = 0.0;
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        for &i in &sums {
            worst = worst.max((v[i] - 1.0).abs());
        }
    }
    check(
        worst < 1e-10,
        format!("max |sum_n P_d(n) - 1| = {worst:.3e} on 4001 offsets, d = 2,3,4 (< 1e-10)"),
    )
}

fn argmax(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    pairs
        .fold(
            (f64::NAN, f64::MIN),
            |best, (e, g)| if g > best.1 { (e, g) } else { best },
        )
        .0
}

fn eigenvalue_peaks() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let cases = [
        ("spin-1/2 N=5 |0>", GROUND_STATE_SWEEP.to_string(), -5.0),
        (
            "spin-1 N=3 |15>",
            "spin = one\nn_sites = 3\nstate = 15\nsigma = 10\nn_times = 500\nenergy_min = -4\nenergy_max = 4\nenergy_steps = 161\nseed = 1\n"
                .to_string(),
            1.0,
        ),
    ];
    for (name, text, target) in cases {
        for d in [2, 3] {
            let mut c = cfg(&text);
            c.ancilla_dim = d;
            let recs = sweep_records(&c, RunOptions::default()).map_err(|e| e.to_string())?;
            let a = argmax(recs.iter().map(|r| (r.energy, r.analytic_re)));
            let m = argmax(recs.iter().map(|r| (r.energy, r.mean_re)));
            let peak = recs.iter().find(|r| r.energy == target).unwrap();
            let hit = a == target && m == target && (peak.mean_re - 1.0).abs() < 1e-12;
            ok &= hit;
            parts.push(format!(
                "{name} d={d}: argmax {a}/{m}, G = {:.4}",
                peak.mean_re
            ));
        }
    }
    check(ok, parts.join("; "))
}

fn dos_identity() -> Outcome {
    let h = ising_diagonal(Spin::One, 5, 1.0).unwrap();
    let spec = spectrum_summary(&h);
    let psi = homogeneous_state(3, 5).unwrap();
    let ws = WeightedSpectrum::from_state(&psi, &h).unwrap();
    let total = spec.total_states() as f64;
    let sigma = 20.0;
    let mut worst: f64 = 0.0;
    for e in energy_grid(-6.0, 6.0, 4801).unwrap() {
        let g2 = analytic_sa(&ws, 2, e, sigma, 0.0).unwrap().re;
        worst = worst.max((g2 - smoothed_dos_oracle(&spec, sigma, e).unwrap() / total).abs());
        let g3 = analytic_sa(&ws, 3, e, sigma, 0.0).unwrap().re;
        worst = worst
            .max((g3 - smoothed_dos_oracle_qudit(&spec, 3, sigma, 0.0, e).unwrap() / total).abs());
    }
    let grid = energy_grid(-6.0, 6.0, 241).unwrap();
    let sampler = TimeSampler::gaussian(0.0, sigma, 1, 3000).unwrap();
    let mut ok = worst < 1e-12;
    let mut parts = vec![format!("identity max error {worst:.2e} (< 1e-12)")];
    for d in [2, 3] {
        let recs = estimate_dos(&h, d, &grid, &sampler, SweepOptions::default())
            .map_err(|e| e.to_string())?;
        let inside = recs
            .iter()
            .filter(|r| (r.g_estimate - r.g_oracle).abs() <= 4.0 * r.g_sem())
            .count();
        let frac = inside as f64 / recs.len() as f64;
        ok &= frac >= 0.95;
        parts.push(format!(
            "d={d}: {:.1}% of points within 4 sem",
            100.0 * frac
        ));
    }
    check(ok, parts.join(", "))
}

fn fwhm(csv: &str, column: &str) -> f64 {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == column).unwrap();
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        if v[i] < 0.5 {
            return 2.0 * v[0];
        }
    }
    f64::NAN
}

fn bounds() -> Outcome {
    let mut ok = true;
    let mut min_rd = f64::MAX;
    let mut max_excess = f64::MIN;
    let mut worst_dom = f64::MIN;
    for d in 2..=8 {
        for sigma in [0.5, 5.0, 20.0] {
            for e in energy_grid(-8.0, 8.0, 1601).unwrap() {
                let rd = relative_difference(d, e, -5.0, sigma).unwrap();
                min_rd = min_rd.min(rd);
                max_excess = max_excess.max(rd - 1.0 / d as f64);
                let g2 = gaussian_transfer(2, -5.0 - e, sigma, 0.0).unwrap().re;
                let gd = gaussian_transfer(d, -5.0 - e, sigma, 0.0).unwrap().re;
                worst_dom = worst_dom.max(gd - g2);
            }
        }
    }
    ok &= min_rd >= 0.0 && max_excess <= 0.0 && worst_dom <= 0.0;
    let c =
        cfg("delta_min = 0\ndelta_max = 3.141592653589793\ndelta_steps = 31417\ndims = 2,3,4\n");
    let csv = run_prob_curves(&c).map_err(|e| e.to_string())?.csv;
    let w: Vec<f64> = ["p_d2_n0", "p_d3_n0", "p_d4_n0"]
        .iter()
        .map(|col| fwhm(&csv, col))
        .collect();
    // in energy units the width is 2Δ/(d t)
    let we: Vec<f64> = w
        .iter()
        .zip([2.0, 3.0, 4.0])
        .map(|(x, d)| 2.0 * x / d)
        .collect();
    ok &= w[0] > w[1] && w[1] > w[2] && we[0] > we[1] && we[1] > we[2];
    check(
        ok,
        format!(
            "min Δ₂G = {min_rd:.1e}, max(Δ₂G - 1/d) = {max_excess:.1e}, max(G_d - G_2) = {worst_dom:.1e}; \
             FWHM in Δ {:.4} > {:.4} > {:.4}, in E {:.4} > {:.4} > {:.4}",
            w[0], w[1], w[2], we[0], we[1], we[2]
        ),
    )
}

fn variance_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let d = rng.random_range(2..=6);
        let sigma = rng.random_range(0.5..10.0);
        let omega = rng.random_range(0.2..3.0) / sigma;
        let times = TimeSampler::gaussian(0.0, sigma, 100 + k, 1_000_000)
            .unwrap()
            .sample_times(0)
            .unwrap();
        let (mut sr, mut sr2, mut si, mut si2) = (0.0, 0.0, 0.0, 0.0);
        for &t in &times {
            let h = rodeo_kernel(d, omega, t).unwrap();
            sr += h.re;
            sr2 += h.re * h.re;
            si += h.im;
            si2 += h.im * h.im;
        }
        let n = times.len() as f64;
        let (vre, vim) = variance_profile(d, omega, sigma).unwrap();
        worst = worst.max(((sr2 / n - (sr / n).powi(2)) / vre - 1.0).abs());
        if d > 2 {
            worst = worst.max(((si2 / n - (si / n).powi(2)) / vim - 1.0).abs());
        }
    }
    let zero = (2..=6).all(|d| variance_profile(d, 0.0, 5.0).unwrap().0 == 0.0);
    check(
        worst < 0.01 && zero,
        format!(
            "max relative error {:.3}% over 10 points x 10^6 samples (< 1%); var_re(0) = 0: {zero}",
            100.0 * worst
        ),
    )
}

const DETERMINISM: [(&str, &str); 5] = [
    ("sweep", "ancilla_dim = 3\nn_sites = 4\nstate = 1:0.6,0\nstate = 6:0,0.8\nenergy_steps = 57\nn_times = 200\nseed = 11\n"),
    ("dos", "spin = one\nn_sites = 3\nancilla_dim = 3\nsigma = 10\nenergy_min = -4\nenergy_max = 4\nenergy_steps = 81\nn_times = 100\n"),
    ("nos", "spin = one\nn_sites = 3\nancilla_dim = 2\nsigma = 10\nenergy_min = -4\nenergy_max = 4\nenergy_steps = 41\nn_times = 50\n"),
    ("table1", "n_sites = 4\nrepeats = 2\nn_times = 100\nenergy_steps = 57\ndims = 2,3\n"),
    ("prob-curves", "dims = 2,5\ndelta_steps = 101\n"),
];

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for (name, text) in DETERMINISM {
        let exp: Experiment = name.parse().unwrap();
        let c = cfg(text);
        let lib = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run(exp, &c, RunOptions::default()).unwrap().csv)
        };
        let reference = lib(1);
        if lib(4) != reference {
            return Err(format!(
                "{name}: library output differs between 1 and 4 workers"
            ));
        }
        let path = dir.path().join(format!("{name}.cfg"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        for workers in ["1", "3", "8"] {
            let out = Command::new(env!("CARGO_BIN_EXE_rodeo"))
                .args([
                    name,
                    "--config",
                    path.to_str().unwrap(),
                    "--workers",
                    workers,
                ])
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() || out.stdout != reference.as_bytes() {
                return Err(format!(
                    "{name}: binary output with {workers} workers differs"
                ));
            }
            checked += 1;
        }
    }
    check(true, format!("5 experiments identical across library pools (1, 4) and {checked} binary runs (1, 3, 8 workers)"))
}

fn main() {
    let t0 = Instant::now();
    let ground = cfg(GROUND_STATE_SWEEP);
    let rows = table1_rows(&ground, RunOptions::default());
    let criteria: Vec<Criterion> = vec![
        ("closed-form/circuit duality", Box::new(duality)),
        ("predicted error bars", Box::new(table_theory)),
        (
            "measured mean error bar",
            Box::new(|| {
                rows.as_ref()
                    .map_err(|e| e.to_string())
                    .and_then(|r| error_bars(r))
            }),
        ),
        (
            "qutrit noise reduction",
            Box::new(|| {
                rows.as_ref()
                    .map_err(|e| e.to_string())
                    .and_then(|r| qutrit_reduction(r))
            }),
        ),
        ("outcome normalization", Box::new(normalization)),
        ("eigenvalue peaks", Box::new(eigenvalue_peaks)),
        ("density-of-states identity", Box::new(dos_identity)),
        ("bounds and peak narrowing", Box::new(bounds)),
        ("variance oracle", Box::new(variance_oracle)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "acceptance {:>2} {tag} {name}: {detail} [{:.1}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        t0.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
