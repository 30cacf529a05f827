//! Browser bindings. Every export returns a flat `Float64Array`; the page
//! slices it by the stride documented on each function.

use beads::kernel::KernelContext;
use beads::model::HexagonSpec;
use beads::sampler::{sample_configuration, substream};
use beads::scaling::support_interval;
use wasm_bindgen::prelude::*;

fn js(e: beads::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// One configuration as `(line, position)` pairs, lines in order.
pub fn sample_pairs(p: usize, q: usize, seed: u64) -> beads::Result<Vec<f64>> {
    let spec = HexagonSpec::new(p, q)?;
    let cfg = sample_configuration(&mut substream(seed, 0), &spec)?;
    Ok(cfg
        .lines()
        .iter()
        .enumerate()
        .flat_map(|(i, xs)| xs.iter().flat_map(move |&x| [(i + 1) as f64, x]))
        .collect())
}

/// `(x, K(t,x;t,x))` at `points` cell centres of `[0,1]`.
pub fn density_pairs(p: usize, q: usize, t: usize, points: usize) -> beads::Result<Vec<f64>> {
    let ctx = KernelContext::new(HexagonSpec::new(p, q)?);
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let x = (i as f64 + 0.5) / points as f64;
        out.extend([x, ctx.line_density(t, x)?]);
    }
    Ok(out)
}

/// `(S, c, d)` for `S` evenly spaced over `[0, 2+k]`, `k = (q-p)/p`.
/// The overlay maps line `t` to `S = t/p`.
pub fn limit_triples(p: usize, q: usize, points: usize) -> beads::Result<Vec<f64>> {
    let spec = HexagonSpec::new(p, q)?;
    let p = spec.p() as f64;
    let k = (spec.q() as f64 - p) / p;
    let n = points.max(2);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let s = ((2.0 + k) * i as f64 / (n - 1) as f64).min(2.0 + k);
        let (c, d) = support_interval(k, s)?;
        out.extend([s, c, d]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn sample(p: usize, q: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    sample_pairs(p, q, seed as u64).map_err(js)
}

#[wasm_bindgen]
pub fn line_density(p: usize, q: usize, t: usize, points: usize) -> Result<Vec<f64>, JsError> {
    density_pairs(p, q, t, points).map_err(js)
}

#[wasm_bindgen]
pub fn limit_shape(p: usize, q: usize, points: usize) -> Result<Vec<f64>, JsError> {
    limit_triples(p, q, points).map_err(js)
}
