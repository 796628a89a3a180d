use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use randlind::analytic::{
    dff_ginibre, dff_gue_dissipator, dff_multi_jump, dff_normal_exact, dff_simple_lindbladian, dff_upper_bound,
    gue_dissipator_density, lvn_sff, mp_density, multi_channel_nh_gap, multi_jump_density, multi_jump_edges,
    nh_density, nh_support, nh_support_intervals, semicircle_difference_density, DensityCurve, GapCurve,
};
use randlind::ensembles::{sample, sample_ginibre, sample_gue, EnsembleKind};
use randlind::export::{fmt_f64, write_columns, write_curve, write_fit};
use randlind::moments::{matrix_moment_decompose, moment_table, noncrossing_moment, trace_moment_kron};
use randlind::sampling::{
    dissipator_spectrum, gap_scaling, lvn_spectrum, member_spec, multi_jump_spectrum, power_law_fit,
    simple_lindbladian_spectrum, CHANNEL_H, CHANNEL_L,
};
use randlind::spectral::{ensemble_dff, map_samples, mean_stderr, self_averaging_test, ComplexSpectrum, TimeGrid};
use randlind::oracles::oracle_checks;
use randlind::superop::{dissipator_terms, lindbladian_terms, lvn_terms, KronSum};
use serde::Serialize;

use crate::config::{ExperimentConfig, Experiment, Model};

/// A pass/fail statement about the produced data.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.into(), pass, detail }
}

/// Files written and checks evaluated by one run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Outputs {
    pub files: Vec<String>,
    pub checks: Vec<Check>,
    /// How output rows map back to (seed, sample index).
    pub row_layout: Option<String>,
}

struct Sink<'a> {
    dir: &'a Path,
    out: Outputs,
}

impl Sink<'_> {
    fn file(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        body(&mut w)?;
        w.flush()?;
        self.out.files.push(name.to_string());
        Ok(())
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outputs> {
    std::fs::create_dir_all(&cfg.output).with_context(|| format!("creating {}", cfg.output.display()))?;
    let mut sink = Sink { dir: &cfg.output, out: Outputs::default() };
    match cfg.experiment {
        Experiment::SpectrumScatter => spectrum_scatter(cfg, &mut sink)?,
        Experiment::GapScaling => gap_scaling_run(cfg, &mut sink)?,
        Experiment::DffCompare => dff_compare(cfg, &mut sink)?,
        Experiment::Density => density(cfg, &mut sink)?,
        Experiment::GapCurve => gap_curve(cfg, &mut sink)?,
        Experiment::LemmaCheck => lemma_check(cfg, &mut sink)?,
        Experiment::MomentCheck => moment_check(cfg, &mut sink)?,
        Experiment::SelfAveraging => self_averaging(cfg, &mut sink)?,
        Experiment::SpecfunCheck => specfun_check(&mut sink)?,
    }
    Ok(sink.out)
}

fn spectrum(cfg: &ExperimentConfig, n: usize, index: usize) -> randlind::Result<ComplexSpectrum> {
    let (v, seed) = (cfg.v, cfg.seed());
    match cfg.model {
        Model::Dissipator => dissipator_spectrum(cfg.kind, n, v, seed, index),
        Model::MultiDissipator => multi_jump_spectrum(n, cfg.m, v, seed, index),
        Model::Lindbladian => simple_lindbladian_spectrum(n, cfg.gamma, v, seed, index),
        Model::Lvn => lvn_spectrum(n, v, seed, index),
    }
}

/// Generator in Kronecker-term form for moment computations; draws the same
/// matrices as [`spectrum`].
fn generator_terms(cfg: &ExperimentConfig, n: usize, index: usize) -> randlind::Result<KronSum> {
    let (v, seed) = (cfg.v, cfg.seed());
    let gin = |channel| sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, n, v, seed, index, channel)?);
    let gue = || sample_gue(&member_spec(EnsembleKind::Gue, n, v, seed, index, CHANNEL_H)?);
    match cfg.model {
        Model::Dissipator => dissipator_terms(&sample(&member_spec(cfg.kind, n, v, seed, index, CHANNEL_L)?)?, 1.0),
        Model::MultiDissipator => {
            let jumps = (0..cfg.m).map(|a| gin(CHANNEL_L + a as u64)).collect::<randlind::Result<Vec<_>>>()?;
            lindbladian_terms(None, &jumps, &vec![1.0; cfg.m])
        }
        Model::Lindbladian => lindbladian_terms(Some(&gue()?), &[gin(CHANNEL_L)?], &[cfg.gamma]),
        Model::Lvn => lvn_terms(&gue()?),
    }
}

/// Large-N (or exact) form factor for the configured model, where one exists.
fn analytic_dff(cfg: &ExperimentConfig, t: f64) -> Option<f64> {
    let v = cfg.v;
    let r = match (cfg.model, cfg.kind) {
        (Model::Dissipator, EnsembleKind::ComplexGinibre) => dff_ginibre(t, v),
        // the exact normal form is written for v = 1; eigenvalues scale with v
        (Model::Dissipator, EnsembleKind::RandomNormal) => dff_normal_exact(v * t, cfg.dim()),
        (Model::Dissipator, EnsembleKind::Gue) => dff_gue_dissipator(t, v),
        (Model::Dissipator, EnsembleKind::HaarUnitary) => return None,
        (Model::MultiDissipator, _) => dff_multi_jump(t, cfg.m, v),
        (Model::Lindbladian, _) if v == 1.0 => dff_simple_lindbladian(t, cfg.gamma),
        (Model::Lindbladian, _) => return None,
        (Model::Lvn, _) => lvn_sff(t, v),
    };
    r.ok()
}

fn spectrum_scatter(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let n = cfg.dim();
    let spectra = map_samples(cfg.n_samples, |k| spectrum(cfg, n, k))?;
    sink.file("spectrum.csv", |w| {
        writeln!(w, "re,im")?;
        for s in &spectra {
            for z in &s.values {
                writeln!(w, "{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
            }
        }
        Ok(())
    })?;
    let per = spectra.first().map_or(0, |s| s.len());
    sink.out.row_layout = Some(format!(
        "rows [k*{per}, (k+1)*{per}) of spectrum.csv hold sample k = 0..{} under seed {}",
        cfg.n_samples,
        cfg.seed()
    ));
    Ok(())
}

fn gap_scaling_run(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    if cfg.model != Model::Dissipator || cfg.kind != EnsembleKind::ComplexGinibre {
        bail!("gap-scaling is defined for the Ginibre simple dissipator");
    }
    let dims = cfg.n_list.clone().unwrap_or_default();
    let rows = gap_scaling(&dims, cfg.v, cfg.n_samples, cfg.seed())?;
    sink.file("gaps.csv", |w| {
        writeln!(w, "N,gap,stderr,samples")?;
        for r in &rows {
            writeln!(w, "{},{},{},{}", r.dim, fmt_f64(r.mean), fmt_f64(r.stderr), r.samples)?;
        }
        Ok(())
    })?;
    let xs: Vec<f64> = rows.iter().map(|r| r.dim as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean).collect();
    if rows.len() >= 2 {
        let fit = power_law_fit(&xs, &ys)?;
        sink.file("fit.csv", |w| {
            write_fit(
                w,
                &[
                    ("exponent", fit.exponent, fit.exponent_stderr),
                    ("prefactor", fit.prefactor, fit.prefactor_stderr),
                ],
            )?;
            Ok(())
        })?;
        sink.out.checks.push(check(
            "gap exponent -2 ± 0.3",
            (fit.exponent + 2.0).abs() <= 0.3,
            format!("exponent {:.4}, prefactor {:.4}", fit.exponent, fit.prefactor),
        ));
    }
    sink.out.row_layout = Some(format!(
        "row N of gaps.csv averages samples 0..{} under seed derive_seed({}, N)",
        cfg.n_samples,
        cfg.seed()
    ));
    Ok(())
}

fn time_grid(cfg: &ExperimentConfig) -> Result<TimeGrid> {
    Ok(TimeGrid::new(cfg.times.values())?)
}

fn dff_compare(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let n = cfg.dim();
    let grid = time_grid(cfg)?;
    let num = ensemble_dff(cfg.n_samples, &grid, |k| spectrum(cfg, n, k))?;
    let ana: Vec<Option<f64>> = grid.times().iter().map(|&t| analytic_dff(cfg, t)).collect();
    let bound: Option<Vec<f64>> = (cfg.model == Model::Lindbladian && cfg.v == 1.0).then(|| {
        grid.times().iter().map(|&t| dff_upper_bound(t, cfg.gamma).unwrap_or(f64::NAN)).collect()
    });
    sink.file("dff.csv", |w| {
        write!(w, "t,F_numeric,F_analytic,stderr,n")?;
        if bound.is_some() {
            write!(w, ",F_bound")?;
        }
        writeln!(w)?;
        for (k, &t) in grid.times().iter().enumerate() {
            let a = ana[k].map_or("nan".to_string(), fmt_f64);
            write!(w, "{},{},{},{},{}", fmt_f64(t), fmt_f64(num.values[k]), a, fmt_f64(num.stderr[k]), num.n_samples)?;
            if let Some(b) = &bound {
                write!(w, ",{}", fmt_f64(b[k]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    let floor = 1.0 / n as f64;
    let mut worst: Option<(f64, f64)> = None;
    for (k, &t) in grid.times().iter().enumerate() {
        if let Some(a) = ana[k].filter(|&a| a > floor) {
            let r = (num.values[k] - a).abs() / a;
            if worst.map_or(true, |(w, _)| r > w) {
                worst = Some((r, t));
            }
        }
    }
    if let Some((r, t)) = worst {
        sink.out.checks.push(check(
            "relative gap < 0.15 while F > 1/N",
            r < 0.15,
            format!("max relative gap {r:.4} at t = {t:.4}"),
        ));
    }
    sink.out.row_layout = Some(format!(
        "each dff.csv row averages samples 0..{} under seed {}",
        cfg.n_samples,
        cfg.seed()
    ));
    Ok(())
}

fn density(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let v = cfg.v;
    let points = cfg.grid.as_ref().map_or(10001, |g| g.points);
    let curve = match (cfg.model, cfg.kind) {
        (Model::Dissipator, EnsembleKind::ComplexGinibre) => DensityCurve::sample(|x| mp_density(x, v), (0.0, 4.0 * v), points)?,
        (Model::Dissipator, EnsembleKind::Gue) => {
            DensityCurve::sample(|x| gue_dissipator_density(x, v).unwrap_or(f64::NAN), (-16.0 * v, 0.0), points)?
        }
        (Model::Dissipator, kind) => bail!("no closed-form density for {kind:?} jumps"),
        (Model::MultiDissipator, _) => DensityCurve::sample(|x| multi_jump_density(x, cfg.m), multi_jump_edges(cfg.m), points)?,
        (Model::Lvn, _) => {
            let r = 4.0 * v.sqrt();
            DensityCurve::sample(|u| semicircle_difference_density(u, v).unwrap_or(f64::NAN), (-r, r), points)?
        }
        (Model::Lindbladian, _) => {
            let iv = nh_support_intervals(cfg.gamma, 1)?;
            let support = (iv[0].0, iv[iv.len() - 1].1);
            let g = cfg.gamma;
            // marginal density of Re z, 2y(x)ρ(x)
            let c = DensityCurve::sample(|x| 2.0 * nh_support(x, g).max(0.0).sqrt() * nh_density(x, g), support, points)?;
            let y: Vec<f64> = c.grid.iter().map(|&x| nh_support(x, g).max(0.0).sqrt()).collect();
            sink.file("support.csv", |w| Ok(write_curve(w, &c.grid, &y)?))?;
            c
        }
    };
    if curve.values.iter().any(|x| !x.is_finite()) {
        bail!("density evaluation failed on the grid");
    }
    sink.file("density.csv", |w| Ok(write_curve(w, &curve.grid, &curve.values)?))?;
    let mass = curve.trapezoid();
    sink.out.checks.push(check(
        "trapezoidal mass = 1 within 1e-6",
        (mass - 1.0).abs() <= 1e-6,
        format!("mass {mass:.10} over [{}, {}]", curve.support.0, curve.support.1),
    ));
    Ok(())
}

fn gap_curve(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let gammas = cfg
        .grid
        .as_ref()
        .map(|g| g.values())
        .unwrap_or_else(|| (0..=80).map(|k| 10f64.powf(-4.0 + 0.1 * k as f64)).collect());
    let curve = GapCurve::compute(&gammas, cfg.m)?;
    sink.file("gap_curve.csv", |w| Ok(write_curve(w, &curve.gammas, &curve.x_min)?))?;
    sink.file("support_edges.csv", |w| {
        Ok(write_columns(
            w,
            &["gamma", "x_min", "x_max", "intervals"],
            &[
                curve.gammas.clone(),
                curve.x_min.clone(),
                curve.x_max.clone(),
                curve.intervals.iter().map(|&k| k as f64).collect(),
            ],
        )?)
    })?;
    let m = cfg.m as f64;
    let (lo, hi) = (1e-3, if cfg.m == 1 { 1e4 } else { 1e3 });
    let small = multi_channel_nh_gap(lo, cfg.m)? / (m * lo) - 1.0;
    let large_want = if cfg.m == 1 { (4.0f64 * hi).powf(-1.0 / 3.0) } else { hi * (1.0 - m.sqrt()).powi(2) };
    let large = multi_channel_nh_gap(hi, cfg.m)? / large_want - 1.0;
    sink.out.checks.push(check(
        "gap asymptotes within 5%",
        small.abs() <= 0.05 && large.abs() <= 0.05,
        format!("γ = {lo}: {small:+.4}; γ = {hi}: {large:+.4}"),
    ));
    Ok(())
}

fn lemma_check(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    if cfg.model != Model::Dissipator || cfg.kind != EnsembleKind::ComplexGinibre {
        bail!("lemma-check compares the Ginibre simple dissipator with its non-crossing truncation");
    }
    let dims = cfg.n_list.clone().unwrap_or_default();
    let mut rows = Vec::new();
    for &order in &cfg.orders {
        for &n in &dims {
            let per = map_samples(cfg.n_samples, |k| {
                let l = sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, n, cfg.v, cfg.seed(), k, CHANNEL_L)?)?;
                let full = trace_moment_kron(&dissipator_terms(&l, 1.0)?, order).re;
                Ok((full, noncrossing_moment(&[l], order)?))
            })?;
            let full: Vec<f64> = per.iter().map(|p| p.0).collect();
            let nc: Vec<f64> = per.iter().map(|p| p.1).collect();
            let diff: Vec<f64> = per.iter().map(|p| p.0 - p.1).collect();
            let (d, se) = mean_stderr(&diff);
            rows.push((n, order, mean_stderr(&full).0, mean_stderr(&nc).0, d, se));
        }
    }
    sink.file("lemma.csv", |w| {
        writeln!(w, "N,order,full,noncrossing,difference,stderr,samples")?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.0,
                r.1,
                fmt_f64(r.2),
                fmt_f64(r.3),
                fmt_f64(r.4),
                fmt_f64(r.5),
                cfg.n_samples
            )?;
        }
        Ok(())
    })?;
    let mut fits = Vec::new();
    for &order in &cfg.orders {
        let sel: Vec<_> = rows.iter().filter(|r| r.1 == order).collect();
        if sel.len() < 2 {
            continue;
        }
        let xs: Vec<f64> = sel.iter().map(|r| r.0 as f64).collect();
        let ys: Vec<f64> = sel.iter().map(|r| r.4.abs()).collect();
        if let Ok(fit) = power_law_fit(&xs, &ys) {
            let grows = sel.windows(2).any(|w| w[1].0 as f64 * w[1].4.abs() > w[0].0 as f64 * w[0].4.abs());
            sink.out.checks.push(check(
                &format!("order {order}: N·|difference| does not grow"),
                !grows,
                format!("decay exponent {:.3} ± {:.3}", -fit.exponent, fit.exponent_stderr),
            ));
            fits.push((order, fit));
        }
    }
    if !fits.is_empty() {
        let names: Vec<String> = fits.iter().map(|(o, _)| format!("decay_exponent_order_{o}")).collect();
        let params: Vec<(&str, f64, f64)> = fits
            .iter()
            .zip(&names)
            .map(|((_, f), name)| (name.as_str(), -f.exponent, f.exponent_stderr))
            .collect();
        sink.file("fit.csv", |w| Ok(write_fit(w, &params)?))?;
    }
    sink.out.row_layout = Some(format!(
        "each lemma.csv row averages samples 0..{} under seed {}",
        cfg.n_samples,
        cfg.seed()
    ));
    Ok(())
}

fn moment_check(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let n = cfg.dim();
    let table = moment_table(&cfg.orders, cfg.n_samples, |k| generator_terms(cfg, n, k))?;
    sink.file("trace_moments.csv", |w| Ok(randlind::export::write_moments(w, &table)?))?;
    let n2 = (n * n) as f64;
    if cfg.model == Model::Lvn {
        if let Some(p) = cfg.orders.iter().position(|&o| o == 2) {
            // tr 𝓛² = −tr S² with S = H ⊗ 1 − 1 ⊗ Hᵀ
            let mu2 = -table.per_n2[p];
            let want = 2.0 * cfg.v * (1.0 - 1.0 / n2);
            let z = (mu2 - want).abs() / table.per_n2_stderr[p];
            sink.out.checks.push(check("μ₂ = 2v(1 − 1/N²)", z <= 3.0, format!("μ₂ {mu2:.6} vs {want:.6}, z {z:.2}")));
        }
    }
    if cfg.model == Model::Dissipator && cfg.kind == EnsembleKind::ComplexGinibre {
        let mut rows = Vec::new();
        for &order in &cfg.orders {
            let d = matrix_moment_decompose(order, n, cfg.v, cfg.n_samples, cfg.seed())?;
            let want = match order {
                2 => Some(6.0 * cfg.v.powi(2)),
                3 => Some(cfg.v.powi(3) * (22.0 + 8.0 / n2)),
                _ => None,
            };
            if let Some(want) = want {
                let z = (d.a.abs() - want).abs() / d.a_stderr;
                sink.out.checks.push(check(
                    &format!("|A{order}| matches closed form"),
                    z <= 3.0,
                    format!("|A| {:.5} vs {want:.5}, z {z:.2}", d.a.abs()),
                ));
            }
            rows.push(d);
        }
        sink.file("matrix_moments.csv", |w| {
            writeln!(w, "order,A,A_stderr,B,B_stderr,C,C_stderr,samples")?;
            for d in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    d.order,
                    fmt_f64(d.a),
                    fmt_f64(d.a_stderr),
                    fmt_f64(d.b),
                    fmt_f64(d.b_stderr),
                    fmt_f64(d.c),
                    fmt_f64(d.c_stderr),
                    d.samples
                )?;
            }
            Ok(())
        })?;
    }
    sink.out.row_layout = Some(format!("moments average samples 0..{} under seed {}", cfg.n_samples, cfg.seed()));
    Ok(())
}

fn self_averaging(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let dims = cfg.n_list.clone().unwrap_or_default();
    let t = cfg.t;
    let rows = self_averaging_test(&dims, t, cfg.n_samples, |n, k| spectrum(cfg, n, k))?;
    sink.file("self_averaging.csv", |w| {
        writeln!(w, "N,mean,variance,samples")?;
        for r in &rows {
            writeln!(w, "{},{},{},{}", r.dim, fmt_f64(r.mean), fmt_f64(r.variance), r.n_samples)?;
        }
        Ok(())
    })?;
    let dec = rows.windows(2).all(|w| w[1].variance < w[0].variance);
    sink.out.checks.push(check(
        "variance strictly decreasing in N",
        dec,
        format!("t = {t}, variances {:?}", rows.iter().map(|r| r.variance).collect::<Vec<_>>()),
    ));
    Ok(())
}

fn specfun_check(sink: &mut Sink) -> Result<()> {
    let results = oracle_checks()?;
    sink.file("specfun.csv", |w| {
        writeln!(w, "function,points,max_error,tolerance")?;
        for c in &results {
            writeln!(w, "{},{},{},{}", c.name, c.points, fmt_f64(c.max_error), fmt_f64(c.tolerance))?;
        }
        Ok(())
    })?;
    for c in results {
        sink.out.checks.push(check(
            &c.name,
            c.passed(),
            format!("{} points, max error {:.2e} (tolerance {:.0e})", c.points, c.max_error, c.tolerance),
        ));
    }
    Ok(())
}
