//! Exact sampling by the random-projection construction.
//!
//! Line `r` is obtained from line `r-1` as the zeros of a random rational
//! function `Σ q_i/(x-a_i)` whose poles are the previous particles together
//! with the fixed points 0 and 1, and whose weights are Dirichlet with the
//! poles' multiplicities as parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{domain, Error, Result};
use crate::model::{lines_interlace, BeadConfiguration, HexagonSpec};

/// Deterministic generator for substream `index` of `seed`. Sample `i` of a
/// batch always uses substream `i`, so output does not depend on threading.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A draw from the Dirichlet law with the given (integer) parameters.
pub fn dirichlet_draw<R: Rng + ?Sized>(rng: &mut R, multiplicities: &[u32]) -> Result<Vec<f64>> {
    if multiplicities.is_empty() {
        return domain("need at least one multiplicity");
    }
    let mut g = Vec::with_capacity(multiplicities.len());
    for &s in multiplicities {
        if s == 0 {
            return domain("multiplicities must be positive");
        }
        let d = Gamma::new(s as f64, 1.0).map_err(|e| Error::Numeric(e.to_string()))?;
        g.push(d.sample(rng));
    }
    let total: f64 = g.iter().sum();
    Ok(g.into_iter().map(|v| v / total).collect())
}

/// Poles in increasing order with positive weights.
#[derive(Debug, Clone)]
pub struct SecularProblem {
    poles: Vec<f64>,
    weights: Vec<f64>,
}

impl SecularProblem {
    pub fn new(poles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if poles.len() < 2 || poles.len() != weights.len() {
            return domain("need at least two poles with one weight each");
        }
        if poles.windows(2).any(|w| w[0] >= w[1]) {
            return domain("poles must be strictly increasing");
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return domain("weights must be positive");
        }
        Ok(Self { poles, weights })
    }

    fn f(&self, x: f64) -> f64 {
        self.poles.iter().zip(&self.weights).map(|(a, q)| q / (x - a)).sum()
    }

    /// One zero per gap, increasing. Between consecutive poles the function
    /// falls from `+∞` to `-∞`, so bisection always converges; it runs to
    /// float resolution and never evaluates at a pole.
    pub fn zeros(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.poles.len() - 1);
        for w in self.poles.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (mut lo_pole, mut hi_pole) = (true, true);
            loop {
                let mid = lo + 0.5 * (hi - lo);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.f(mid) > 0.0 {
                    lo = mid;
                    lo_pole = false;
                } else {
                    hi = mid;
                    hi_pole = false;
                }
            }
            let z = match (lo_pole, hi_pole) {
                (false, _) => lo,
                (true, false) => hi,
                (true, true) => {
                    return Err(Error::Numeric(format!(
                        "poles {} and {} are adjacent floats; no interior zero representable",
                        w[0], w[1]
                    )))
                }
            };
            out.push(z);
        }
        Ok(out)
    }
}

/// Zeros of `Σ q_i/(x-a_i)` for increasing poles.
pub fn secular_zeros(poles: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    SecularProblem::new(poles.to_vec(), weights.to_vec())?.zeros()
}

/// One configuration distributed as the finitized bead process.
pub fn sample_configuration<R: Rng + ?Sized>(rng: &mut R, spec: &HexagonSpec) -> Result<BeadConfiguration> {
    let (p, q) = (spec.p(), spec.q());
    let mut lines: Vec<Vec<f64>> = Vec::with_capacity(spec.lines());
    // previous line in increasing order
    let mut prev: Vec<f64> = Vec::new();
    for r in 1..=spec.lines() {
        let mut poles = Vec::with_capacity(prev.len() + 2);
        let mut mult = Vec::with_capacity(prev.len() + 2);
        if r <= p {
            poles.push(0.0);
            mult.push((p - r + 1) as u32);
        }
        for &x in &prev {
            poles.push(x);
            mult.push(1);
        }
        if r <= q {
            poles.push(1.0);
            mult.push((q - r + 1) as u32);
        }
        let weights = dirichlet_draw(rng, &mult)?;
        let zeros = SecularProblem::new(poles, weights)?.zeros()?;
        debug_assert_eq!(zeros.len(), spec.r(r));
        let line: Vec<f64> = zeros.iter().rev().copied().collect();
        if let Some(last) = lines.last() {
            if !lines_interlace(spec, r - 1, last, &line) {
                return Err(Error::Numeric(format!("interlacing lost at line {r}")));
            }
        }
        lines.push(line);
        prev = zeros;
    }
    Ok(BeadConfiguration::from_lines_unchecked(lines))
}

/// `count` configurations; configuration `i` uses [`substream`]`(seed, i)`.
/// Work is split over at most `threads` workers.
pub fn sample_many(spec: &HexagonSpec, count: usize, seed: u64, threads: usize) -> Result<Vec<BeadConfiguration>> {
    let threads = threads.max(1).min(count.max(1));
    let chunk = count.div_ceil(threads).max(1);
    let results: Vec<Result<Vec<BeadConfiguration>>> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..count)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(count);
                sc.spawn(move || {
                    (start..end)
                        .map(|i| sample_configuration(&mut substream(seed, i as u64), spec))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(count);
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Default worker count.
pub fn available_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
