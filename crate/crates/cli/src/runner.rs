//! Subcommand implementations. Each runner validates its config, refuses
//! to clobber existing artifacts unless forced, computes, and only then
//! writes files, so a failed run leaves the output directory untouched.

use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use spectralab_core::ensemble::{
    assemble_normalized, sample_matrix, EntryDistribution, ExperimentConfig, ShiftKind,
};
use spectralab_core::linalg::{nsmi_check, truncate_rows};
use spectralab_core::littlewood_offord::{
    collision_ratio, concentration_prob, erdos_bound, exact_distribution, gap_sample_vector,
    pigeonhole_lower_bound, Gap, SignedVector,
};
use spectralab_core::matrix::DenseMatrix;
use spectralab_core::spectral::{
    esd, log_det_identity_check, measure_distance, semicircle_cdf, EmpiricalMeasure,
};
use spectralab_core::smoothed::{condition_tail, distance_experiment, sigma_tail_bound_check};

use crate::artifacts::{check_overwrite, fmt17, scatter_svg, summary_csv, write_file};
use crate::config::{
    BaseMatrix, ConditionConfig, DistanceConfig, EsdConfig, GapConfig, LoConfig,
    UniversalityConfig,
};
use crate::CliError;

fn echo_json<T: Serialize>(cfg: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(cfg)
        .map_err(|e| CliError::Runtime(format!("cannot serialize config echo: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn experiment(
    seed: u64,
    n: usize,
    dist: &EntryDistribution,
    shift: &ShiftKind,
) -> Result<ExperimentConfig, CliError> {
    let ec = ExperimentConfig::new(seed, n, 1, dist.clone(), shift.clone());
    ec.validate()?;
    Ok(ec)
}

pub fn run_esd(cfg: &EsdConfig, out: &Path, force: bool) -> Result<(), CliError> {
    if cfg.hermitize && !matches!(cfg.shift, ShiftKind::Zero) {
        return Err(CliError::Config(
            "hermitize supports only the Zero shift".into(),
        ));
    }
    if cfg.radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(CliError::Config("radii must be finite and nonnegative".into()));
    }
    let ec = experiment(cfg.seed, cfg.n, &cfg.distribution, &cfg.shift)?;

    let mut names = vec!["result.csv", "atoms.csv", "config.echo.json"];
    if cfg.scatter {
        names.push("scatter.svg");
    }
    check_overwrite(out, &names, force)?;

    let mu = if cfg.hermitize {
        let raw = sample_matrix(&cfg.distribution, cfg.n, cfg.seed, 0)?;
        esd(&raw.hermitianized()?, true, cfg.tol)?
    } else {
        esd(&assemble_normalized(&ec, 0)?, false, cfg.tol)?
    };

    let mut rows = vec![("atom_count".to_string(), mu.count() as f64)];
    for r in &cfg.radii {
        rows.push((format!("disk_mass_{r}"), mu.disk_mass(*r)));
    }
    if let Some(law) = cfg.law {
        let d = measure_distance((&mu).into(), law.into(), cfg.grid)?;
        rows.push(("law_distance".to_string(), d));
    }

    write_file(out, "result.csv", &summary_csv(&rows))?;
    write_file(out, "atoms.csv", &mu.to_csv())?;
    if cfg.scatter {
        write_file(out, "scatter.svg", &scatter_svg(mu.atoms()))?;
    }
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

pub fn run_universality(cfg: &UniversalityConfig, out: &Path, force: bool) -> Result<(), CliError> {
    let ec_b = experiment(cfg.seed, cfg.n, &EntryDistribution::BernoulliSym, &cfg.shift)?;
    let ec_g = experiment(cfg.seed, cfg.n, &EntryDistribution::RealGaussian, &cfg.shift)?;

    let mut names = vec![
        "result.csv",
        "atoms_bernoulli.csv",
        "atoms_gaussian.csv",
        "distances.csv",
        "config.echo.json",
    ];
    if cfg.scatter {
        names.push("scatter_bernoulli.svg");
        names.push("scatter_gaussian.svg");
    }
    check_overwrite(out, &names, force)?;

    // The two eigensolves are independent; everything downstream is
    // ordered, so parallelism cannot leak into the artifacts.
    let spectrum = |ec: &ExperimentConfig| -> Result<EmpiricalMeasure, CliError> {
        Ok(esd(&assemble_normalized(ec, 0)?, false, cfg.tol)?)
    };
    let (mu_b, mu_g) = rayon::join(|| spectrum(&ec_b), || spectrum(&ec_g));
    let (mu_b, mu_g) = (mu_b?, mu_g?);

    let d = measure_distance((&mu_b).into(), (&mu_g).into(), cfg.grid)?;

    let rows = vec![
        ("atom_count".to_string(), cfg.n as f64),
        ("distance".to_string(), d),
    ];
    let mut distances = String::from("pair,distance\n");
    distances.push_str(&format!("bernoulli_vs_gaussian,{}\n", fmt17(d)));

    write_file(out, "result.csv", &summary_csv(&rows))?;
    write_file(out, "atoms_bernoulli.csv", &mu_b.to_csv())?;
    write_file(out, "atoms_gaussian.csv", &mu_g.to_csv())?;
    write_file(out, "distances.csv", &distances)?;
    if cfg.scatter {
        write_file(out, "scatter_bernoulli.svg", &scatter_svg(mu_b.atoms()))?;
        write_file(out, "scatter_gaussian.svg", &scatter_svg(mu_g.atoms()))?;
    }
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

pub fn run_lo(cfg: &LoConfig, out: &Path, force: bool) -> Result<(), CliError> {
    let v = SignedVector::new(cfg.vector.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    check_overwrite(out, &["result.csv", "summary.csv", "config.echo.json"], force)?;

    let dist = exact_distribution(&v)?;
    let (mode_value, mode_prob) = dist.mode();

    let mut table = String::from("value,count,probability\n");
    for (value, count) in dist.counts() {
        table.push_str(&format!(
            "{value},{count},{}\n",
            fmt17(*count as f64 / dist.total() as f64)
        ));
    }

    let mut rows = vec![
        ("n".to_string(), v.len() as f64),
        ("mode_value".to_string(), mode_value as f64),
        ("mode_probability".to_string(), mode_prob.to_f64()),
    ];
    if !v.has_zero() {
        rows.push(("sharp_bound".to_string(), erdos_bound(v.len())?.to_f64()));
    }
    for &k in &cfg.halasz_orders {
        rows.push((format!("collision_ratio_{k}"), collision_ratio(&v, k)?));
    }

    write_file(out, "result.csv", &table)?;
    write_file(out, "summary.csv", &summary_csv(&rows))?;
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

pub fn run_gap(cfg: &GapConfig, out: &Path, force: bool) -> Result<(), CliError> {
    let gap = Gap::new(
        cfg.a0,
        cfg.generators.clone(),
        cfg.lower.clone(),
        cfg.upper.clone(),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let volume = gap.volume().map_err(|e| CliError::Config(e.to_string()))?;
    let bound =
        pigeonhole_lower_bound(&gap, cfg.n).map_err(|e| CliError::Config(e.to_string()))?;
    if !(cfg.slack.is_finite() && cfg.slack > 0.0) {
        return Err(CliError::Config("slack must be positive and finite".into()));
    }
    check_overwrite(out, &["result.csv", "summary.csv", "config.echo.json"], force)?;

    let mut table = String::from("trial,probability,pigeonhole_bound,ratio\n");
    let mut passes: u64 = 0;
    for trial in 0..cfg.trials {
        let coeffs = gap_sample_vector(&gap, cfg.n, cfg.seed, trial)?;
        let p = concentration_prob(&SignedVector::new(coeffs)?)?.to_f64();
        if p >= cfg.slack * bound {
            passes += 1;
        }
        table.push_str(&format!(
            "{trial},{},{},{}\n",
            fmt17(p),
            fmt17(bound),
            fmt17(p / bound)
        ));
    }

    let rows = vec![
        ("rank".to_string(), gap.rank() as f64),
        ("volume".to_string(), volume as f64),
        ("proper".to_string(), if gap.is_proper()? { 1.0 } else { 0.0 }),
        ("pigeonhole_bound".to_string(), bound),
        ("trials".to_string(), cfg.trials as f64),
        (
            "pass_fraction".to_string(),
            passes as f64 / cfg.trials.max(1) as f64,
        ),
    ];

    write_file(out, "result.csv", &table)?;
    write_file(out, "summary.csv", &summary_csv(&rows))?;
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

pub fn run_condition(cfg: &ConditionConfig, out: &Path, force: bool) -> Result<(), CliError> {
    if cfg.n == 0 {
        return Err(CliError::Config("n must be positive".into()));
    }
    let base = match cfg.base {
        BaseMatrix::Zero => DenseMatrix::zeros(cfg.n, cfg.n),
        BaseMatrix::ScaledIdentity { factor } => {
            if !factor.is_finite() {
                return Err(CliError::Config("identity factor must be finite".into()));
            }
            DenseMatrix::identity(cfg.n).scale(Complex64::new(factor, 0.0))
        }
    };
    check_overwrite(out, &["result.csv", "summary.csv", "config.echo.json"], force)?;

    let report = condition_tail(&base, &cfg.distribution, &cfg.x_grid, cfg.trials, cfg.seed)?;

    let mut table = String::from("x,survival,bound\n");
    for j in 0..report.x_grid.len() {
        table.push_str(&format!(
            "{},{},{}\n",
            fmt17(report.x_grid[j]),
            fmt17(report.survival[j]),
            fmt17(report.bound_curve[j])
        ));
    }
    let rows = vec![
        ("trials".to_string(), report.trials as f64),
        ("failed_trials".to_string(), report.failed_trials.len() as f64),
    ];

    write_file(out, "result.csv", &table)?;
    write_file(out, "summary.csv", &summary_csv(&rows))?;
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

pub fn run_distance(cfg: &DistanceConfig, out: &Path, force: bool) -> Result<(), CliError> {
    check_overwrite(out, &["result.csv", "summary.csv", "config.echo.json"], force)?;

    let report = distance_experiment(
        cfg.n,
        cfg.k,
        &cfg.distribution,
        cfg.trials,
        cfg.seed,
        cfg.enforce_floor,
    )?;

    let mut table = String::from("trial,distance,threshold\n");
    for (trial, d) in report.distances.iter().enumerate() {
        table.push_str(&format!(
            "{trial},{},{}\n",
            fmt17(*d),
            fmt17(report.threshold)
        ));
    }
    let below = report
        .distances
        .iter()
        .filter(|d| **d < report.threshold)
        .count();
    let min = report
        .distances
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let rows = vec![
        ("threshold".to_string(), report.threshold),
        ("min_distance".to_string(), min),
        ("below_threshold".to_string(), below as f64),
    ];

    write_file(out, "result.csv", &table)?;
    write_file(out, "summary.csv", &summary_csv(&rows))?;
    write_file(out, "config.echo.json", &echo_json(cfg)?)?;
    Ok(())
}

/// The built-in identity suite: exact or near-exact checks that exercise
/// every module without configuration. Prints one line per check.
pub fn run_verify() -> Result<(), CliError> {
    let mut failures = 0usize;
    let mut check = |name: &str, result: Result<(), String>| match result {
        Ok(()) => println!("pass: {name}"),
        Err(detail) => {
            failures += 1;
            println!("FAIL: {name}: {detail}");
        }
    };

    let inverse_square = |dist: EntryDistribution, n: usize, drop: usize, seed: u64| {
        let square = sample_matrix(&dist, n, seed, 0).map_err(|e| e.to_string())?;
        let a = truncate_rows(&square, drop).map_err(|e| e.to_string())?;
        match nsmi_check(&a) {
            Ok(rep) if rep.relative_error < 1e-10 => Ok(()),
            Ok(rep) => Err(format!("relative error {:.3e}", rep.relative_error)),
            Err(e) => Err(e.to_string()),
        }
    };
    check(
        "inverse_square_identity_real",
        inverse_square(EntryDistribution::RealGaussian, 8, 3, 42),
    );
    check(
        "inverse_square_identity_complex",
        inverse_square(EntryDistribution::ComplexGaussian, 7, 3, 43),
    );

    check("row_truncation_bound_diagonal", {
        let a = DenseMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        match sigma_tail_bound_check(&a, 1) {
            Ok(rep) if (rep.lhs - 2.0).abs() < 1e-12 && (rep.rhs - 1.0).abs() < 1e-12 => Ok(()),
            Ok(rep) => Err(format!("lhs {} rhs {}", rep.lhs, rep.rhs)),
            Err(e) => Err(e.to_string()),
        }
    });

    check("row_truncation_bound_random", (|| {
        let a = sample_matrix(&EntryDistribution::RealGaussian, 10, 44, 0)
            .map_err(|e| e.to_string())?;
        match sigma_tail_bound_check(&a, 3) {
            Ok(rep) if rep.lhs >= rep.rhs - 1e-10 * a.frobenius_norm() => Ok(()),
            Ok(rep) => Err(format!("lhs {} < rhs {}", rep.lhs, rep.rhs)),
            Err(e) => Err(e.to_string()),
        }
    })());

    check("unit_vector_attains_sharp_bound", (|| {
        for n in 1..=16usize {
            let v = SignedVector::new(vec![1; n]).map_err(|e| e.to_string())?;
            let p = concentration_prob(&v).map_err(|e| e.to_string())?;
            let b = erdos_bound(n).map_err(|e| e.to_string())?;
            if p.numerator() != b.numerator() || p.log2_denominator() != b.log2_denominator() {
                return Err(format!("mismatch at n = {n}"));
            }
        }
        Ok(())
    })());

    check("distinct_sums_hit_uniform_floor", (|| {
        let v = SignedVector::new((0..12).map(|i| 1i64 << i).collect())
            .map_err(|e| e.to_string())?;
        let p = concentration_prob(&v).map_err(|e| e.to_string())?;
        if p.numerator() == 1 && p.log2_denominator() == 12 {
            Ok(())
        } else {
            Err(format!("mode mass {}/2^{}", p.numerator(), p.log2_denominator()))
        }
    })());

    check("log_det_two_paths", (|| {
        let m = sample_matrix(&EntryDistribution::ComplexGaussian, 20, 7, 0)
            .map_err(|e| e.to_string())?;
        match log_det_identity_check(&m, Complex64::new(2.0, 2.0)) {
            Ok(rep) if rep.abs_err < 1e-10 => Ok(()),
            Ok(rep) => Err(format!("paths differ by {:.3e}", rep.abs_err)),
            Err(e) => Err(e.to_string()),
        }
    })());

    check("semicircle_cdf_anchors", {
        let errs = [
            semicircle_cdf(-2.0).abs(),
            (semicircle_cdf(0.0) - 0.5).abs(),
            (semicircle_cdf(2.0) - 1.0).abs(),
        ];
        if errs.iter().all(|e| *e < 1e-15) {
            Ok(())
        } else {
            Err(format!("anchor errors {errs:?}"))
        }
    });

    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("{failures} verification check(s) failed")))
    }
}
