//! End-to-end statistical acceptance suite.
//!
//! Each test replays one of the library's headline claims at full scale with
//! pinned tolerances and prints a single PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`). Tolerances include Monte
//! Carlo slack: Kolmogorov noise for a K-S statistic on N replicates is
//! about 1.36/sqrt(N) at the 95% level.

use periomax_core::montecarlo::{
    exact_max_exp_cdf, gumbel_cdf, gumbel_quantile, ks_distance, power_curve, replicate,
    DensityMode, EmpiricalSample, Sinusoid,
};
use periomax_core::peaks::{fisher_g, max_test, NormalizedOrdinates};
use periomax_core::processes::{
    check_conditions, coupled_theta_linear, coupled_theta_recursion, fourier_approx_gap,
    gen_linear, m_approx_linear, theta_tail, CoeffConfig, CoeffSpec, DependenceProfile,
    InnovationSpec, LinearModel, Process, ProcessSpec, RecursionKind, RecursionModel, SeedSpec,
    Transform,
};
use periomax_core::series::{parseval_check, periodogram, FourierGrid, TimeSeries};
use periomax_core::spectral::{
    exact_s_moment, lag_window_estimate, LagWindowKernel, LinearDensity, Trig,
};

const MASTER: u64 = 20260816;

fn seed(stream: u64) -> SeedSpec {
    SeedSpec::new(MASTER, stream)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Flat unit-variance white-noise density f = 1/(2 pi).
fn flat_density() -> LinearDensity {
    LinearDensity::new(0, vec![1.0], 1.0).unwrap()
}

fn geometric_model() -> LinearModel {
    LinearModel::new(
        CoeffSpec::geometric(0.5).unwrap(),
        InnovationSpec::Gaussian,
        Transform::Identity,
    )
    .unwrap()
}

fn median(sample: &EmpiricalSample) -> f64 {
    sample.quantile(0.5).unwrap()
}

#[test]
fn gaussian_white_noise_max_matches_exact_exponential_law() {
    let process = ProcessSpec::Iid { innovation: InnovationSpec::Gaussian }.build().unwrap();
    let density = flat_density();
    let sample = replicate(
        |s| {
            let x = process.generate(1024, s)?;
            let v = NormalizedOrdinates::from_density(&periodogram(&x), &density)?;
            Ok(max_test(&v).statistic)
        },
        2000,
        seed(1),
        "gaussian-white-noise-max",
    )
    .unwrap();
    let ks = ks_distance(&sample, |x| exact_max_exp_cdf(x, 511));
    let ok = ks <= 0.05;
    println!(
        "[gaussian-white-noise-max] K-S to exact q=511 law = {ks:.4} (tol 0.05) -> {}",
        verdict(ok)
    );
    assert!(ok, "K-S {ks} exceeds 0.05");
}

#[test]
fn linear_student_t_max_converges_to_gumbel() {
    let model = LinearModel::new(
        CoeffSpec::geometric(0.5).unwrap(),
        InnovationSpec::StudentT { nu: 8.0 },
        Transform::Identity,
    )
    .unwrap();
    let density = model.density().unwrap();
    let sample = replicate(
        |s| {
            let x = gen_linear(&model, 2048, s)?.into_series();
            let v = NormalizedOrdinates::from_density(&periodogram(&x), &density)?;
            Ok(max_test(&v).statistic)
        },
        1000,
        seed(2),
        "linear-student-t-max",
    )
    .unwrap();
    let ks = ks_distance(&sample, gumbel_cdf);
    let ok = ks <= 0.08;
    println!("[linear-student-t-max] K-S to Gumbel = {ks:.4} (tol 0.08) -> {}", verdict(ok));
    assert!(ok, "K-S {ks} exceeds 0.08");
}

#[test]
fn garch_with_estimated_density_converges_to_gumbel() {
    let model = RecursionModel::new(
        RecursionKind::Garch11 { omega: 0.1, alpha: 0.05, beta: 0.9 },
        InnovationSpec::Gaussian,
    )
    .unwrap();
    assert_eq!(model.fourth_moment_finite(), Some(true));
    let sample = replicate(
        |s| {
            let x = periomax_core::processes::gen_recursion(&model, 4096, s)?.into_series();
            let est = lag_window_estimate(&x, LagWindowKernel::Parzen, 0.3, 1e-3)?;
            let v = NormalizedOrdinates::from_estimate(&periodogram(&x), &est)?;
            Ok(max_test(&v).statistic)
        },
        500,
        seed(3),
        "garch-estimated-density-max",
    )
    .unwrap();
    let ks = ks_distance(&sample, gumbel_cdf);
    let ok = ks <= 0.10;
    println!(
        "[garch-estimated-density-max] K-S to Gumbel = {ks:.4} (tol 0.10) -> {}",
        verdict(ok)
    );
    assert!(ok, "K-S {ks} exceeds 0.10");
}

#[test]
fn fisher_ratio_centered_matches_gumbel_and_is_scale_invariant() {
    let process = ProcessSpec::Iid { innovation: InnovationSpec::Gaussian }.build().unwrap();
    let density = flat_density();
    let sample = replicate(
        |s| {
            let x = process.generate(1024, s)?;
            let v = NormalizedOrdinates::from_density(&periodogram(&x), &density)?;
            Ok(fisher_g(&v)?.statistic)
        },
        2000,
        seed(4),
        "fisher-centered",
    )
    .unwrap();
    let ks = ks_distance(&sample, gumbel_cdf);

    // Exact scale invariance of the raw ratio under power-of-two scaling.
    let x = process.generate(1024, seed(40)).unwrap();
    let v = NormalizedOrdinates::from_density(&periodogram(&x), &density).unwrap();
    let g = fisher_g(&v).unwrap().raw_statistic.unwrap();
    let mut invariant = true;
    for c in [0.25f64, 2.0, 1024.0] {
        let scaled = NormalizedOrdinates::from_raw(
            v.values().iter().map(|t| t * c).collect(),
            1024,
            v.f_source(),
        )
        .unwrap();
        invariant &= fisher_g(&scaled).unwrap().raw_statistic.unwrap() == g;
    }

    let ok = ks <= 0.08 && invariant;
    println!(
        "[fisher-centered] K-S to Gumbel = {ks:.4} (tol 0.08), scale-invariant = {invariant} -> {}",
        verdict(ok)
    );
    assert!(ok, "K-S {ks} (tol 0.08), invariant {invariant}");
}

#[test]
fn sinusoid_at_half_amplitude_is_detected_and_located() {
    let noise = ProcessSpec::Iid { innovation: InnovationSpec::Gaussian }.build().unwrap();
    let n = 512;
    let gamma = 2.0 * std::f64::consts::PI * 64.0 / n as f64;
    let points = power_curve(
        &noise,
        &Sinusoid { gamma, phase: 0.0 },
        &[0.5],
        n,
        0.05,
        &DensityMode::Known,
        500,
        seed(5),
    )
    .unwrap();
    let p = &points[0];
    let ok = p.rejection_rate >= 0.95 && p.recovery_rate >= 0.95;
    println!(
        "[sinusoid-detection] rejection = {:.3}, recovery = {:.3} (both >= 0.95) -> {}",
        p.rejection_rate,
        p.recovery_rate,
        verdict(ok)
    );
    assert!(ok, "rejection {} recovery {}", p.rejection_rate, p.recovery_rate);
}

#[test]
fn lag_window_estimate_tracks_the_true_density() {
    let model = geometric_model();
    let density = model.density().unwrap();
    let max_rel_err = |n: usize, stream: u64| -> EmpiricalSample {
        replicate(
            |s| {
                let x = gen_linear(&model, n, s)?.into_series();
                let est = lag_window_estimate(&x, LagWindowKernel::Parzen, 0.3, 1e-3)?;
                let worst = est
                    .grid()
                    .omegas()
                    .iter()
                    .zip(est.values())
                    .map(|(&w, &fh)| {
                        let f = density.density(w);
                        (fh - f).abs() / f
                    })
                    .fold(0.0_f64, f64::max);
                Ok(worst)
            },
            100,
            seed(stream),
            "lag-window-max-rel-err",
        )
        .unwrap()
    };
    let med_large = median(&max_rel_err(8192, 6));
    let med_small = median(&max_rel_err(2048, 60));
    let ok = med_large <= 0.15 && med_large < med_small;
    println!(
        "[lag-window-accuracy] median max rel err: n=8192 {med_large:.4} (tol 0.15), n=2048 {med_small:.4}, shrinking = {} -> {}",
        med_large < med_small,
        verdict(ok)
    );
    assert!(ok, "medians {med_large} (n=8192), {med_small} (n=2048)");
}

#[test]
fn coupling_estimates_match_closed_form_dependence() {
    // Identity-linear: theta_k = |a_k| sqrt(2).
    let model = geometric_model();
    let mut all_ok = true;
    let mut worst_z = 0.0_f64;
    for (i, k) in [0usize, 1, 3, 6].into_iter().enumerate() {
        let est = coupled_theta_linear(&model, k, 2.0, 4000, seed(7).child(i as u64)).unwrap();
        let exact = model.exact_theta_l2(k as i64).unwrap();
        let z = (est.value - exact).abs() / est.std_error.max(1e-300);
        worst_z = worst_z.max(z);
        all_ok &= z <= 3.0;
    }

    // AR(1): theta_k = phi^k sqrt(2).
    let ar = RecursionModel::new(RecursionKind::Ar1 { phi: 0.5 }, InnovationSpec::Gaussian)
        .unwrap();
    let mut worst_z_ar = 0.0_f64;
    for (i, k) in [0usize, 1, 3, 6].into_iter().enumerate() {
        let est = coupled_theta_recursion(&ar, k, 2.0, 4000, seed(70).child(i as u64)).unwrap();
        let exact = 0.5f64.powi(k as i32) * std::f64::consts::SQRT_2;
        let z = (est.value - exact).abs() / est.std_error.max(1e-300);
        worst_z_ar = worst_z_ar.max(z);
        all_ok &= z <= 3.0;
    }

    // Covariance bound: |r(u)| <= sum_j theta_j theta_{u+j} with the exact
    // closed forms, checked at every lag u <= 50.
    let coeffs = model.coeffs();
    let density = model.density().unwrap();
    let (lo, hi) = coeffs.support();
    let mut bound_ok = true;
    for u in 0..=50i64 {
        let lhs = density.autocov(u).abs();
        let mut rhs = 0.0;
        for j in lo..=hi {
            rhs += (coeffs.get(j).abs() * std::f64::consts::SQRT_2)
                * (coeffs.get(j + u).abs() * std::f64::consts::SQRT_2);
        }
        bound_ok &= lhs <= rhs + 1e-12;
    }

    let ok = all_ok && bound_ok;
    println!(
        "[dependence-closed-forms] worst |z|: linear {worst_z:.2}, ar1 {worst_z_ar:.2} (tol 3), covariance bound u<=50: {bound_ok} -> {}",
        verdict(ok)
    );
    assert!(ok, "z linear {worst_z}, z ar1 {worst_z_ar}, bound {bound_ok}");
}

#[test]
fn fourier_tail_energy_is_bounded_by_dependence_tail() {
    let model = geometric_model();
    let profile = DependenceProfile::exact_linear(&model, 2.0).unwrap();
    let ms = [0usize, 2, 4, 8];
    let reps = 200;
    let mut ok = true;
    let mut worst_ratio = 0.0_f64;
    for (ni, &n) in [256usize, 1024].iter().enumerate() {
        // Five random frequencies in (0, pi), fixed by the seed.
        let mut rng = seed(8).child(ni as u64).rng();
        let omegas: Vec<f64> =
            (0..5).map(|_| rand::Rng::random::<f64>(&mut rng) * std::f64::consts::PI).collect();
        // acc[mi][wi] accumulates |sum_k d_k e^{i w k}|^2 over replicates.
        let mut acc = vec![vec![0.0_f64; omegas.len()]; ms.len()];
        for r in 0..reps {
            let sample = gen_linear(&model, n, seed(80).child((ni * reps + r) as u64)).unwrap();
            for (mi, &m) in ms.iter().enumerate() {
                let approx = m_approx_linear(&model, &sample, m, 1, seed(0)).unwrap();
                let diff: Vec<f64> = sample
                    .series()
                    .values()
                    .iter()
                    .zip(approx.series.values())
                    .map(|(a, b)| a - b)
                    .collect();
                for (wi, &w) in omegas.iter().enumerate() {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (idx, &d) in diff.iter().enumerate() {
                        let arg = w * (idx + 1) as f64;
                        re += d * arg.cos();
                        im += d * arg.sin();
                    }
                    acc[mi][wi] += re * re + im * im;
                }
            }
        }
        for (mi, &m) in ms.iter().enumerate() {
            let theta = theta_tail(&profile, m).unwrap();
            let bound = 4.0 * n as f64 * theta * theta;
            for &sum in acc[mi].iter().take(omegas.len()) {
                let mean = sum / reps as f64;
                worst_ratio = worst_ratio.max(mean / bound);
                ok &= mean <= bound;
            }
        }
    }
    println!(
        "[fourier-tail-bound] worst mean/bound ratio = {worst_ratio:.3} (must be <= 1) -> {}",
        verdict(ok)
    );
    assert!(ok, "worst ratio {worst_ratio}");
}

#[test]
fn approximation_gap_rate_improves_with_length() {
    let model = geometric_model();
    let mut medians = Vec::new();
    for (i, &n) in [512usize, 2048, 8192].iter().enumerate() {
        let m = (n as f64).powf(0.3).floor() as usize;
        let sample = replicate(
            |s| {
                let x = gen_linear(&model, n, s)?;
                let approx = m_approx_linear(&model, &x, m, 1, seed(0))?;
                let gap = fourier_approx_gap(x.series(), &approx.series)?;
                Ok(gap / (n as f64 / (n as f64).ln()).sqrt())
            },
            50,
            seed(9).child(i as u64),
            "approx-gap-rate",
        )
        .unwrap();
        medians.push(median(&sample));
    }
    let ok = medians[0] > medians[1] && medians[1] > medians[2];
    println!(
        "[approx-gap-rate] medians of max-gap/sqrt(n/log n) at n=512,2048,8192: {:.5}, {:.5}, {:.5} (strictly decreasing) -> {}",
        medians[0],
        medians[1],
        medians[2],
        verdict(ok)
    );
    assert!(ok, "medians {medians:?}");
}

/// Direct O(n^2) periodogram ordinate for the FFT cross-check.
fn naive_ordinate(values: &[f64], omega: f64) -> f64 {
    let n = values.len() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for (t, &x) in values.iter().enumerate() {
        let k = (t + 1) as f64;
        re += x * (omega * k).cos();
        im += x * (omega * k).sin();
    }
    (re * re + im * im) / n
}

#[test]
fn exact_identities_hold() {
    use rand_distr::Distribution;
    let normal = rand_distr::StandardNormal;

    // Energy conservation on 100 random series.
    let mut rng = seed(10).rng();
    let mut worst_parseval = 0.0_f64;
    for _ in 0..100 {
        let n = 4 + (rand::Rng::random::<u32>(&mut rng) % 397) as usize;
        let values: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let series = TimeSeries::new(values).unwrap();
        worst_parseval = worst_parseval.max(parseval_check(&series));
    }
    let parseval_ok = worst_parseval <= 1e-9;

    // Trigonometric moment identities for white noise: E S_cos^2 = E S_sin^2
    // = n/2 and every cross moment vanishes, exactly.
    let white = flat_density();
    let mut worst_trig = 0.0_f64;
    for n in [8usize, 64, 256] {
        let q = FourierGrid::new(n).unwrap().q();
        for j in 1..=q {
            let cc = exact_s_moment(&white, n, j, Trig::Cos, j, Trig::Cos).unwrap();
            let ss = exact_s_moment(&white, n, j, Trig::Sin, j, Trig::Sin).unwrap();
            let cs = exact_s_moment(&white, n, j, Trig::Cos, j, Trig::Sin).unwrap();
            worst_trig = worst_trig.max((cc - n as f64 / 2.0).abs());
            worst_trig = worst_trig.max((ss - n as f64 / 2.0).abs());
            worst_trig = worst_trig.max(cs.abs());
            if j > 1 {
                let cross = exact_s_moment(&white, n, j, Trig::Cos, j - 1, Trig::Cos).unwrap();
                worst_trig = worst_trig.max(cross.abs());
            }
        }
    }
    let trig_ok = worst_trig <= 1e-10;

    // FFT periodogram equals the direct transform for every n <= 64.
    let mut worst_fft = 0.0_f64;
    for n in 4..=64usize {
        let values: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let series = TimeSeries::new(values).unwrap();
        let pgram = periodogram(&series);
        for j in 1..=pgram.grid().q() {
            let direct = naive_ordinate(series.values(), pgram.grid().omega(j));
            worst_fft = worst_fft.max((pgram.ordinate(j) - direct).abs());
        }
    }
    let fft_ok = worst_fft <= 1e-10;

    // Gumbel quantile/cdf roundtrip, both directions.
    let mut worst_round = 0.0_f64;
    let mut x = -3.0;
    while x <= 8.0 {
        worst_round = worst_round.max((gumbel_quantile(gumbel_cdf(x)).unwrap() - x).abs());
        x += 0.25;
    }
    for i in 1..1000 {
        let p = i as f64 / 1000.0;
        worst_round = worst_round.max((gumbel_cdf(gumbel_quantile(p).unwrap()) - p).abs());
    }
    let round_ok = worst_round <= 1e-12;

    let ok = parseval_ok && trig_ok && fft_ok && round_ok;
    println!(
        "[exact-identities] parseval {worst_parseval:.2e} (tol 1e-9), trig {worst_trig:.2e} (tol 1e-10), fft-vs-direct {worst_fft:.2e} (tol 1e-10), gumbel roundtrip {worst_round:.2e} (tol 1e-12) -> {}",
        verdict(ok)
    );
    assert!(ok);
}

#[test]
fn condition_checker_issues_correct_verdicts() {
    let grid = [4usize, 16, 64, 256, 1024];

    let build = |innovation: InnovationSpec| -> Process {
        ProcessSpec::Linear {
            coeffs: CoeffConfig::Geometric { rho: 0.5 },
            innovation,
            transform: Transform::Identity,
        }
        .build()
        .unwrap()
    };

    // Geometric coefficients with gaussian innovations: everything passes,
    // and every passing product sequence decreases monotonically.
    let report = check_conditions(&build(InnovationSpec::Gaussian), &grid).unwrap();
    let mut gauss_ok = report.pass;
    for row in &report.rows {
        gauss_ok &= row.pass;
        let vals: Vec<f64> = row.products.iter().map(|p| p.value).collect();
        gauss_ok &= vals.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        gauss_ok &= vals.last().copied().unwrap_or(0.0) < vals.first().copied().unwrap_or(0.0)
            || vals.iter().all(|v| *v == 0.0);
    }

    // Two-point innovations: the innovation tail is exactly zero past 1.
    let report2 = check_conditions(&build(InnovationSpec::TwoPoint), &grid).unwrap();
    let two_point_ok = report2.pass
        && report2
            .rows
            .iter()
            .find(|r| r.name == "innovation-tail")
            .is_some_and(|r| r.products.iter().all(|p| p.value == 0.0));

    // Tail exponent exactly 2: infinite truncated second moments, so the
    // innovation-tail condition must fail.
    let report3 =
        check_conditions(&build(InnovationSpec::SymmetrizedPareto { s: 2.0 }), &grid).unwrap();
    let pareto_row_failed = report3
        .rows
        .iter()
        .find(|r| r.name == "innovation-tail")
        .is_some_and(|r| !r.pass);
    let pareto_ok = !report3.pass && pareto_row_failed;

    let ok = gauss_ok && two_point_ok && pareto_ok;
    println!(
        "[condition-checker] geometric+gaussian all-pass: {gauss_ok}, two-point zero tail: {two_point_ok}, pareto s=2 fails innovation tail: {pareto_ok} -> {}",
        verdict(ok)
    );
    assert!(ok);
}
