//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every tolerance and runtime budget is a named constant below. The binary
//! exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bandframe::dual::{
    biorthogonality_defect, duals_closed_form, duals_pointwise, fiber_residuals, DualFamily, SchemeDuals,
};
use bandframe::family::{GeneratorFamily, Multiplier, SchemeTag};
use bandframe::frame::{check_frame, frame_bounds, FrameVerdict, Thresholds};
use bandframe::kernel::{dual_kernels, KernelOptions, KernelStrategy};
use bandframe::matrix::{
    bilinear_dot, cross_product, minor_sum, mp_inverse_pair, singular_profile, ComplexMatrix,
};
use bandframe::sampling::{
    channel_samples, hilbert_reconstruct_formula, jagerman_fogel, linden_series, reconstruct, EvalGrid,
    ReconstructionReport, TestSignal,
};
use bandframe::spectral::{sinc, BandSpec, FrequencyGrid, Regime};
use bandframe::{Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const OMEGA: f64 = 1.0;
const SEED: u64 = 0x5eed_0f_f1be;

// Criterion 1
const REGIME_SAMPLES: usize = 100_000;
const REGIME_BUDGET: Duration = Duration::from_secs(1);
// Criterion 2
const TIGHT_BOUND_TOL: f64 = 1e-10;
const HILBERT_DUAL_TOL: f64 = 1e-10;
const HILBERT_BUDGET: Duration = Duration::from_secs(5);
// Criterion 3
const TRIPLE_GRID: usize = 4096;
const TRIPLE_TOL: f64 = 1e-9;
const TRIPLE_BUDGET: Duration = Duration::from_secs(30);
// Criterion 4
const FIBER_RESIDUAL_TOL: f64 = 1e-10;
// Criterion 5
const KERNEL_TOL: f64 = 1e-6;
const KERNEL_WINDOW: f64 = 20.0;
const KERNEL_PROBE_STEP: f64 = 0.0037;
// Criterion 6
const FIG8_MAX_ERR: f64 = 1e-3;
const FIG9_MAX_ERR: f64 = 1e-2;
const RECON_K: usize = 64;
const RECON_K_DOUBLED: usize = 128;
const RECON_BUDGET: Duration = Duration::from_secs(60);
// Criterion 7
const ORACLE_TOL: f64 = 1e-9;
// Criterion 8
const BIORTHO_TOL: f64 = 1e-8;
const BIORTHO_K: i64 = 8;
// Criterion 9
const TRIALS: usize = 1000;
const CAUCHY_BINET_TOL: f64 = 1e-10;
const PINV_TOL: f64 = 1e-10;
const PINV_MAX_CONDITION: f64 = 100.0;
const CROSS_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn spec(h: f64) -> BandSpec {
    BandSpec::from_h(OMEGA, h).unwrap()
}

fn brute_force_dimension(x: f64, h: f64) -> usize {
    let lo = ((-OMEGA - x) / h).ceil() as i64 - 1;
    let hi = ((OMEGA - x) / h).floor() as i64 + 1;
    (lo..=hi).filter(|&j| (x + j as f64 * h).abs() <= OMEGA).count()
}

fn regime_table() -> Result<Outcome> {
    let start = Instant::now();
    let table = [
        (1.0, 2, Regime::Even),
        (1.5, 2, Regime::Even),
        (2.0 / 3.0, 3, Regime::Odd),
        (11.0 / 15.0, 3, Regime::Odd),
        (0.5, 4, Regime::Even),
        (0.6, 4, Regime::Even),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    let mut rows = Vec::new();
    for (h, n, regime) in table {
        let s = spec(h);
        let mut max_dim = 0;
        for _ in 0..REGIME_SAMPLES {
            let x = rng.gen::<f64>() * h;
            let brute = brute_force_dimension(x, h);
            max_dim = max_dim.max(brute);
            let sub = &s.partition[s.locate(x)?];
            if sub.active_shifts.len() != brute {
                mismatches += 1;
            }
        }
        if s.n_generators != n || s.regime != regime || max_dim != n {
            mismatches += 1;
        }
        rows.push(format!("h={h:.4}:N={}/{:?}", s.n_generators, s.regime));
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        mismatches == 0 && elapsed < REGIME_BUDGET,
        format!("{} mismatches; {}; {:.2?} (budget {:?})", mismatches, rows.join(" "), elapsed, REGIME_BUDGET),
    ))
}

fn tight_hilbert() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst_bound = 0.0f64;
    let mut worst_dual = 0.0f64;
    for h in [1.0, 1.25, 1.5, 1.9] {
        let s = spec(h);
        let fam = GeneratorFamily::builtin(SchemeTag::Hilbert, &s)?;
        let grid = FrequencyGrid::with_default_size(&s)?;
        let (a, b) = frame_bounds(&fam, &grid)?;
        worst_bound = worst_bound.max((a - 2.0 * h).abs()).max((b - 2.0 * h).abs());
        let duals = duals_pointwise(&fam, &grid)?;
        for (k, node) in duals.band_nodes.iter().enumerate() {
            let g = fam.eval_all(node.y);
            for i in 0..2 {
                worst_dual = worst_dual.max((duals.dual_spectra[i][k] - g[i] / (2.0 * h)).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst_bound < TIGHT_BOUND_TOL && worst_dual < HILBERT_DUAL_TOL && elapsed < HILBERT_BUDGET,
        format!(
            "max |A-2h|,|B-2h| = {worst_bound:.2e} (tol {TIGHT_BOUND_TOL:.0e}); max dual gap {worst_dual:.2e} (tol {HILBERT_DUAL_TOL:.0e}); {elapsed:.2?}"
        ),
    ))
}

const ACCEPTED: [(SchemeTag, f64); 6] = [
    (SchemeTag::Derivative2, 1.0),
    (SchemeTag::Derivative2, 1.3),
    (SchemeTag::Derivative3, 2.0 / 3.0),
    (SchemeTag::Derivative3, 0.7),
    (SchemeTag::Derivative3, 11.0 / 15.0),
    (SchemeTag::Hilbert, 1.5),
];

fn scheme_gap(duals: &DualFamily, cf: &SchemeDuals) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, node) in duals.band_nodes.iter().enumerate() {
        for (i, z) in cf.eval(node.y)?.iter().enumerate() {
            worst = worst.max((z - duals.dual_spectra[i][k]).norm());
        }
    }
    Ok(worst)
}

fn triple_agreement(pointwise: &[(GeneratorFamily, DualFamily)]) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for ((tag, h), (fam, pw)) in ACCEPTED.iter().zip(pointwise) {
        let cross = duals_closed_form(fam, fam.len(), &pw.grid)?;
        let cf = SchemeDuals::new(*tag, &fam.spec)?;
        let gaps = [pw.max_discrepancy(&cross)?, scheme_gap(pw, &cf)?, scheme_gap(&cross, &cf)?];
        let m = gaps.iter().fold(0.0f64, |a, &b| a.max(b));
        worst = worst.max(m);
        parts.push(format!("{tag}@{h:.4}:{m:.1e}"));
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst < TRIPLE_TOL && elapsed < TRIPLE_BUDGET,
        format!("max pairwise gap {worst:.2e} (tol {TRIPLE_TOL:.0e}); {}; {elapsed:.2?}", parts.join(" ")),
    ))
}

fn fiber_duality(pointwise: &[(GeneratorFamily, DualFamily)]) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (fam, duals) in pointwise {
        worst = fiber_residuals(fam, duals)?.into_iter().fold(worst, f64::max);
    }
    Ok(outcome(
        worst < FIBER_RESIDUAL_TOL,
        format!("max ||J - J J* J_dual||_F = {worst:.2e} over {} schemes (tol {FIBER_RESIDUAL_TOL:.0e})", pointwise.len()),
    ))
}

fn closed_form_kernels() -> Result<Outcome> {
    let r = 1.0 / (2.0 * PI).sqrt();
    let opts = KernelOptions {
        strategy: KernelStrategy::QuadratureOfClosedForm,
        ..KernelOptions::default()
    };
    let d2 = {
        let s = spec(OMEGA);
        let fam = GeneratorFamily::builtin(SchemeTag::Derivative2, &s)?;
        let mut d = duals_pointwise(&fam, &FrequencyGrid::new(&s, 1024)?)?;
        d.closed_form = Some(bandframe::dual::ClosedForm::Scheme(SchemeDuals::new(SchemeTag::Derivative2, &s)?));
        dual_kernels(&d, KERNEL_WINDOW, &opts)?
    };
    let d3 = {
        let s = spec(2.0 * OMEGA / 3.0);
        let fam = GeneratorFamily::builtin(SchemeTag::Derivative3, &s)?;
        let mut d = duals_pointwise(&fam, &FrequencyGrid::new(&s, 1024)?)?;
        d.closed_form = Some(bandframe::dual::ClosedForm::Scheme(SchemeDuals::new(SchemeTag::Derivative3, &s)?));
        dual_kernels(&d, KERNEL_WINDOW, &opts)?
    };
    let reference2 = |i: usize, t: f64| {
        let s2 = sinc(OMEGA * t / 2.0).powi(2);
        if i == 0 {
            r * s2
        } else {
            -r * t * s2
        }
    };
    let reference3 = |i: usize, t: f64| {
        let s3 = sinc(OMEGA * t / 3.0).powi(3);
        match i {
            0 => r * (1.0 + OMEGA * OMEGA * t * t / 18.0) * s3,
            1 => -r * t * s3,
            _ => r / 2.0 * t * t * s3,
        }
    };
    let mut worst2 = 0.0f64;
    let mut worst3 = 0.0f64;
    let mut t = -KERNEL_WINDOW;
    while t <= KERNEL_WINDOW {
        for (i, k) in d2.iter().enumerate() {
            worst2 = worst2.max((k.spline_eval(t)? - reference2(i, t)).norm());
        }
        for (i, k) in d3.iter().enumerate() {
            worst3 = worst3.max((k.spline_eval(t)? - reference3(i, t)).norm());
        }
        t += KERNEL_PROBE_STEP;
    }
    Ok(outcome(
        worst2 < KERNEL_TOL && worst3 < KERNEL_TOL,
        format!(
            "derivative2 h=w: {worst2:.2e}; derivative3 h=2w/3: {worst3:.2e} on [-{KERNEL_WINDOW}, {KERNEL_WINDOW}] (tol {KERNEL_TOL:.0e})"
        ),
    ))
}

fn run_reconstruction(tag: SchemeTag, h: f64, k: usize) -> Result<ReconstructionReport> {
    let s = spec(h);
    let fam = GeneratorFamily::builtin(tag, &s)?;
    let (_, duals) = bandframe::dual::builtin_scheme_on(tag, &s, TRIPLE_GRID)?;
    let samples = channel_samples(&TestSignal::sinc_squared(OMEGA), &fam, k)?;
    reconstruct(&samples, &duals, &EvalGrid::default(), &KernelOptions::default())
}

fn reconstruction_experiments() -> Result<Outcome> {
    let start = Instant::now();
    let f8 = run_reconstruction(SchemeTag::Derivative3, 2.0 / 3.0, RECON_K)?;
    let f8b = run_reconstruction(SchemeTag::Derivative3, 2.0 / 3.0, RECON_K_DOUBLED)?;
    let f9 = run_reconstruction(SchemeTag::Derivative3, 11.0 / 15.0, RECON_K)?;
    let f9b = run_reconstruction(SchemeTag::Derivative3, 11.0 / 15.0, RECON_K_DOUBLED)?;
    let elapsed = start.elapsed();
    let pass = f8.max_abs_error <= FIG8_MAX_ERR
        && f9.max_abs_error <= FIG9_MAX_ERR
        && f8b.max_abs_error <= f8.max_abs_error
        && f9b.max_abs_error <= f9.max_abs_error
        && elapsed < RECON_BUDGET;
    Ok(outcome(
        pass,
        format!(
            "h=2/3: K=64 {:.2e} (<= {FIG8_MAX_ERR:.0e}), K=128 {:.2e}; h=11/15: K=64 {:.2e} (<= {FIG9_MAX_ERR:.0e}), K=128 {:.2e}; {elapsed:.2?} (budget {RECON_BUDGET:?})",
            f8.max_abs_error, f8b.max_abs_error, f9.max_abs_error, f9b.max_abs_error
        ),
    ))
}

fn oracle_equivalence() -> Result<Outcome> {
    let grid = EvalGrid::default();
    let sig = TestSignal::sinc_squared(OMEGA);
    let opts = KernelOptions::default();
    let mut gaps = [0.0f64; 3];

    let (fam, duals) = bandframe::dual::builtin_scheme(SchemeTag::Derivative3, OMEGA, 3.0 * PI / OMEGA)?;
    let s = channel_samples(&sig, &fam, RECON_K)?;
    let r = reconstruct(&s, &duals, &grid, &opts)?;
    for (x, v) in r.eval_points.iter().zip(&r.reconstructed) {
        gaps[0] = gaps[0].max((linden_series(&s.raw[0], &s.raw[1], &s.raw[2], *x, OMEGA)? - v).abs());
    }

    let (fam, duals) = bandframe::dual::builtin_scheme(SchemeTag::Derivative2, OMEGA, 2.0 * PI / OMEGA)?;
    let s = channel_samples(&sig, &fam, RECON_K)?;
    let r = reconstruct(&s, &duals, &grid, &opts)?;
    for (x, v) in r.eval_points.iter().zip(&r.reconstructed) {
        gaps[1] = gaps[1].max((jagerman_fogel(&s.raw[0], &s.raw[1], *x, OMEGA)? - v).abs());
    }

    let h = 1.5 * OMEGA;
    let (fam, duals) = bandframe::dual::builtin_scheme(SchemeTag::Hilbert, OMEGA, 2.0 * PI / h)?;
    let s = channel_samples(&sig, &fam, RECON_K)?;
    let r = reconstruct(&s, &duals, &grid, &opts)?;
    for (x, v) in r.eval_points.iter().zip(&r.reconstructed) {
        gaps[2] = gaps[2].max((hilbert_reconstruct_formula(&s.raw[0], &s.raw[1], *x, OMEGA, h)? - v).abs());
    }
    Ok(outcome(
        gaps.iter().all(|&g| g < ORACLE_TOL),
        format!(
            "Linden {:.2e}, Jagerman-Fogel {:.2e}, Hilbert formula {:.2e} (tol {ORACLE_TOL:.0e}, K={RECON_K})",
            gaps[0], gaps[1], gaps[2]
        ),
    ))
}

fn biorthogonality() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for (tag, h) in [(SchemeTag::Derivative2, OMEGA), (SchemeTag::Derivative3, 2.0 * OMEGA / 3.0)] {
        let fam = GeneratorFamily::builtin(tag, &spec(h))?;
        let d = biorthogonality_defect(&fam, BIORTHO_K)?;
        worst = worst.max(d);
        parts.push(format!("{tag}: {d:.2e}"));
    }
    Ok(outcome(
        worst < BIORTHO_TOL,
        format!("{} for |k| <= {BIORTHO_K} (tol {BIORTHO_TOL:.0e})", parts.join(", ")),
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn property_suites() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut failures = [0usize; 3];

    for _ in 0..TRIALS {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_matrix(&mut rng, r, c);
        let gram = if r >= c { a.adjoint().matmul(&a)? } else { a.matmul(&a.adjoint())? };
        let det = gram.determinant()?;
        let sum = minor_sum(&a);
        if (det - sum).norm() > CAUCHY_BINET_TOL * sum.max(1e-3) {
            failures[0] += 1;
        }
    }

    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < TRIALS {
        drawn += 1;
        let n = rng.gen_range(2..=8);
        let a = random_matrix(&mut rng, n, n - 1);
        let s = singular_profile(&a).singular_values;
        if s[0] / s[n - 2] > PINV_MAX_CONDITION {
            continue;
        }
        accepted += 1;
        if mp_inverse_pair(&a)?.relative_discrepancy > PINV_TOL {
            failures[1] += 1;
        }
    }

    for _ in 0..TRIALS {
        let n = rng.gen_range(2..=8);
        let rows: Vec<Vec<C64>> = (0..n - 1).map(|_| random_matrix(&mut rng, 1, n).row(0)).collect();
        let w = cross_product(&rows)?;
        if rows.iter().any(|v| bilinear_dot(&w, v).norm() > CROSS_TOL * n as f64) {
            failures[2] += 1;
        }
    }

    let s = spec(1.5);
    let dup = GeneratorFamily::new(&s, vec![Multiplier::Unit, Multiplier::Unit])?;
    let report = check_frame(&dup, &FrequencyGrid::with_default_size(&s)?, &Thresholds::default())?;
    let not_frame = report.verdict == FrameVerdict::NotFrame;

    Ok(outcome(
        failures.iter().all(|&f| f == 0) && not_frame,
        format!(
            "failures in {TRIALS} trials: Cauchy-Binet {}, pseudoinverse pair {} (cond <= {PINV_MAX_CONDITION}, {drawn} drawn), cross product {}; duplicate family verdict {}",
            failures[0], failures[1], failures[2], report.verdict
        ),
    ))
}

fn main() -> ExitCode {
    let total = Instant::now();
    let pointwise: Vec<(GeneratorFamily, DualFamily)> = ACCEPTED
        .iter()
        .map(|&(tag, h)| {
            let s = spec(h);
            let fam = GeneratorFamily::builtin(tag, &s).unwrap();
            let duals = duals_pointwise(&fam, &FrequencyGrid::new(&s, TRIPLE_GRID).unwrap()).unwrap();
            (fam, duals)
        })
        .collect();
    let pointwise_time = total.elapsed();

    let criteria: Vec<(&str, Box<dyn Fn() -> Result<Outcome>>)> = vec![
        ("regime table against brute-force dimension count", Box::new(regime_table)),
        ("tight Hilbert frames and their duals", Box::new(tight_hilbert)),
        ("dual path triple agreement", Box::new(|| {
            let mut o = triple_agreement(&pointwise)?;
            o.detail.push_str(&format!(" (+{pointwise_time:.2?} pointwise)"));
            if total.elapsed() > TRIPLE_BUDGET {
                o.pass = false;
            }
            Ok(o)
        })),
        ("fiber duality residual", Box::new(|| fiber_duality(&pointwise))),
        ("closed-form time kernels by quadrature", Box::new(closed_form_kernels)),
        ("reconstruction experiments", Box::new(reconstruction_experiments)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("biorthogonality in Riesz cases", Box::new(biorthogonality)),
        ("matrix property suites and NotFrame detection", Box::new(property_suites)),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    println!("acceptance: {} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), total.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
