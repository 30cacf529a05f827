//! Self-check suites run by `beads validate`.

use crate::error::Result;
use crate::hexagon::{check_hahn_line, lemma_constant, vandermonde, DiscreteHexagon};
use crate::kernel::KernelContext;
use crate::lensemble::{oracle_deviation, regime_probes, DiscreteKernel};
use crate::model::{interlace_indicator, HexagonSpec};
use crate::orthopoly::GaussLegendre;
use crate::sampler::sample_many;
use crate::scaling::{bulk_convergence_probe, bulk_grid, endpoints_from_exponents, region_params, support_interval};
use crate::stats::{beta_cdf, empirical_line_density, ks_band_99, ks_statistic};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub measure: f64,
    pub threshold: f64,
}

impl Check {
    fn below(suite: &'static str, name: &'static str, measure: f64, threshold: f64) -> Self {
        Self {
            suite,
            name,
            passed: measure < threshold,
            measure,
            threshold,
        }
    }
}

pub fn kernel_suite(level: Level) -> Result<Vec<Check>> {
    const S: &str = "kernel";
    let mut out = Vec::new();
    let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();

    let uni = KernelContext::new(HexagonSpec::new(1, 1)?);
    let mut worst: f64 = 0.0;
    for &y in &grid {
        for &x in grid.iter().step_by(7) {
            worst = worst.max((uni.kernel_eval(1, y, 1, x)? - 1.0).abs());
        }
    }
    out.push(Check::below(S, "uniform_kernel", worst, 1e-12));

    let c12 = KernelContext::new(HexagonSpec::new(1, 2)?);
    let mut worst: f64 = 0.0;
    for &x in &grid {
        worst = worst.max((c12.line_density(1, x)? - 2.0 * (1.0 - x)).abs());
        worst = worst.max((c12.line_density(2, x)? - 2.0 * x).abs());
    }
    out.push(Check::below(S, "density_p1_q2", worst, 1e-10));

    let specs: &[(usize, usize)] = match level {
        Level::Quick => &[(2, 2), (2, 3)],
        Level::Full => &[(2, 2), (4, 12)],
    };
    let mut worst: f64 = 0.0;
    for &(p, q) in specs {
        let spec = HexagonSpec::new(p, q)?;
        let ctx = KernelContext::new(spec);
        for t in 1..=spec.lines() {
            worst = worst.max((ctx.expected_count(t)? - spec.r(t) as f64).abs());
        }
    }
    out.push(Check::below(S, "count_identity", worst, 1e-8));

    let ctx = KernelContext::new(HexagonSpec::new(2, 3)?);
    let gl = GaussLegendre::new(64);
    let pts = [0.13, 0.42, 0.77];
    let mut worst: f64 = 0.0;
    for t in 1..=3 {
        for &x in &pts {
            for &y in &pts {
                let conv = gl.integrate(0.0, 1.0, |z| ctx.eval_unchecked(t, x, t, z) * ctx.eval_unchecked(t, z, t, y));
                worst = worst.max((conv - ctx.eval_unchecked(t, x, t, y)).abs());
            }
        }
    }
    out.push(Check::below(S, "projection", worst, 1e-8));

    let spec = HexagonSpec::new(2, 3)?;
    let probes = regime_probes(&spec);
    let ms: &[usize] = match level {
        Level::Quick => &[25, 50, 100],
        Level::Full => &[50, 100, 200],
    };
    let devs = ms
        .iter()
        .map(|&m| oracle_deviation(&ctx, &DiscreteKernel::new(spec, m)?, &probes))
        .collect::<Result<Vec<_>>>()?;
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    let last = *devs.last().expect("non-empty");
    let thr = if level == Level::Quick { 0.05 } else { 0.02 };
    out.push(Check {
        suite: S,
        name: "l_ensemble_deviation",
        passed: monotone && last < thr,
        measure: last,
        threshold: thr,
    });
    Ok(out)
}

pub fn sampler_suite(level: Level, seed: u64, threads: usize) -> Result<Vec<Check>> {
    const S: &str = "sampler";
    let scale = if level == Level::Quick { 1 } else { 10 };
    let mut out = Vec::new();

    let n = 2000 * scale;
    let spec = HexagonSpec::new(1, 1)?;
    let xs: Vec<f64> = sample_many(&spec, n, seed, threads)?.iter().map(|c| c.line(1)[0]).collect();
    out.push(Check::below(S, "ks_uniform", ks_statistic(&xs, |x| x.clamp(0.0, 1.0))?, ks_band_99(n)));

    let spec = HexagonSpec::new(4, 12)?;
    let cs = sample_many(&spec, n, seed ^ 0x5eed, threads)?;
    let xs: Vec<f64> = cs.iter().map(|c| c.line(1)[0]).collect();
    out.push(Check::below(S, "ks_first_line_beta", ks_statistic(&xs, |x| beta_cdf(4.0, 12.0, x))?, ks_band_99(n)));

    let mut fails = 0usize;
    for c in &cs {
        if !interlace_indicator(&spec, c)? {
            fails += 1;
        }
    }
    out.push(Check::below(S, "interlacing_failures", fails as f64, 0.5));

    let spec = HexagonSpec::new(1, 2)?;
    let cs = sample_many(&spec, 5000 * scale, seed ^ 0xbead, threads)?;
    let mut worst: f64 = 0.0;
    for t in 1..=2 {
        let h = empirical_line_density(&cs, t, 20)?;
        for i in 0..20 {
            // exact bin average of 2(1-x) or 2x
            let (a, b) = (h.edges[i], h.edges[i + 1]);
            let mid = 0.5 * (a + b);
            let want = if t == 1 { 2.0 * (1.0 - mid) } else { 2.0 * mid };
            worst = worst.max(((h.density[i] - want) / h.std_err[i]).abs());
        }
    }
    out.push(Check::below(S, "histogram_z_p1_q2", worst, 4.0));
    Ok(out)
}

pub fn hexagon_suite(level: Level) -> Result<Vec<Check>> {
    const S: &str = "hexagon";
    let cap = if level == Level::Quick { 8 } else { 12 };
    let mut lemma_bad = 0usize;
    let mut hahn_bad = 0usize;
    for n in 1..=cap {
        for p in 1..=cap {
            for q in p..=cap {
                if n * p * q > cap {
                    continue;
                }
                let hex = DiscreteHexagon::new(n, p, q)?;
                let all = hex.enumerate_configurations()?;
                for t in 1..p + q {
                    if !check_hahn_line(&hex, &all, t)?.proportional {
                        hahn_bad += 1;
                    }
                }
                for t in 1..=p {
                    let (_, den) = lemma_constant(t);
                    for xs in hex.line_states(t)? {
                        if hex.left_count(t, &xs)? as i128 * den != vandermonde(&xs) {
                            lemma_bad += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::below(S, "left_count_lemma", lemma_bad as f64, 0.5),
        Check::below(S, "hahn_marginal", hahn_bad as f64, 0.5),
    ])
}

pub fn scaling_suite(level: Level) -> Result<Vec<Check>> {
    const S: &str = "scaling";
    let mut worst: f64 = 0.0;
    for &k in &[0.5, 2.0, 3.0] {
        for i in 1..20 {
            let s = (2.0 + k) * i as f64 / 20.0;
            let (a, b) = region_params(k, s)?;
            let (c0, d0) = endpoints_from_exponents(a, b);
            let (c1, d1) = support_interval(k, s)?;
            worst = worst.max((c0 - c1).abs()).max((d0 - d1).abs());
        }
    }
    let mut out = vec![Check::below(S, "support_endpoints", worst, 1e-12)];

    let ps: &[usize] = match level {
        Level::Quick => &[8, 16],
        Level::Full => &[16, 32, 64],
    };
    let grid = bulk_grid();
    let mut errs = Vec::new();
    for &p in ps {
        let rows = bulk_convergence_probe(2.0, 2.0, p, &grid)?;
        errs.push(rows.iter().map(|r| r.err_gauge).fold(0.0, f64::max));
    }
    let thr = if level == Level::Quick { 0.15 } else { 0.05 };
    let last = *errs.last().expect("non-empty");
    out.push(Check {
        suite: S,
        name: "bulk_convergence",
        passed: errs.windows(2).all(|w| w[1] < w[0]) && last < thr,
        measure: last,
        threshold: thr,
    });
    Ok(out)
}
