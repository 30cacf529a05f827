//! Large-`p` limits: the global limit shape and density along scaled line
//! `S = t/p` with `k = (q-p)/p`, the bulk kernel `K*`, Boutillier's `J_γ`, and
//! a probe measuring how fast the finite kernel approaches `K*`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::kernel::KernelContext;
use crate::model::HexagonSpec;
use crate::orthopoly::GaussLegendre;

fn check_region(k: f64, s: f64) -> Result<()> {
    if !(k >= 0.0) || !k.is_finite() {
        return domain(format!("k must be finite and >= 0, got {k}"));
    }
    if !(0.0..=2.0 + k).contains(&s) {
        return domain(format!("S must lie in [0, {}], got {s}", 2.0 + k));
    }
    Ok(())
}

/// Endpoints `(c_S, d_S)` of the limiting support on scaled line `S`.
pub fn support_interval(k: f64, s: f64) -> Result<(f64, f64)> {
    check_region(k, s)?;
    let k2 = (k + 2.0) * (k + 2.0);
    let mid = s * k / k2 + 1.0 / (k + 2.0);
    let g = (s * (k + 1.0) * (k + 2.0 - s)).max(0.0).sqrt();
    Ok((mid - 2.0 * g / k2, mid + 2.0 * g / k2))
}

/// Jacobi exponents per particle `(a, b)` in the three regions of `S`.
pub fn region_params(k: f64, s: f64) -> Result<(f64, f64)> {
    check_region(k, s)?;
    Ok(if s <= 1.0 {
        ((1.0 - s) / s, (k + 1.0 - s) / s)
    } else if s <= 1.0 + k {
        (s - 1.0, k + 1.0 - s)
    } else {
        let r = 2.0 + k - s;
        ((s - 1.0) / r, (s - k - 1.0) / r)
    })
}

/// Support of the Jacobi ensemble with exponents `a n`, `b n` as `n → ∞`.
pub fn endpoints_from_exponents(a: f64, b: f64) -> (f64, f64) {
    let w = 2.0 + a + b;
    let sum = (w * w + a * a - b * b) / (w * w);
    let spread = 4.0 * ((1.0 + a) * (1.0 + b) * (1.0 + a + b)).sqrt() / (w * w);
    ((sum - spread) / 2.0, (sum + spread) / 2.0)
}

/// Limiting density per particle on scaled line `S`; integrates to 1.
pub fn global_density(k: f64, s: f64, y: f64) -> Result<f64> {
    let (c, d) = support_interval(k, s)?;
    let (a, b) = region_params(k, s)?;
    Ok(density_with(a, b, c, d, y))
}

fn density_with(a: f64, b: f64, c: f64, d: f64, y: f64) -> f64 {
    if y <= c || y >= d || y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    (2.0 + a + b) / (2.0 * PI) * ((y - c) * (d - y)).sqrt() / (y * (1.0 - y))
}

/// Derived constants for bulk work at `(k, S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingContext {
    pub k: f64,
    pub s: f64,
    pub c: f64,
    pub d: f64,
    /// Midpoint of the support.
    pub x_mid: f64,
    /// Density at the midpoint.
    pub u: f64,
    pub nu: f64,
    /// `e^{πν}`, the naive position prefactor; it does not normalise.
    pub a_naive: f64,
    /// The prefactor that actually normalises the finite kernel:
    /// `exp[((S-1)/X + (1+k-S)/(1-X)) / (2u)]`.
    pub a_gauge: f64,
    /// Line prefactor with the factor `(2-k-S)`.
    pub b_alt: f64,
    /// Line prefactor with the factor `(2+k-S)`; the convergent choice.
    pub b_gauge: f64,
}

impl ScalingContext {
    pub fn new(k: f64, s: f64) -> Result<Self> {
        if !(k > 0.0) {
            return domain("bulk constants need k > 0 (nu diverges at k = 0)");
        }
        check_region(k, s)?;
        if !(1.0..=1.0 + k).contains(&s) {
            return domain(format!("bulk constants need 1 <= S <= 1+k, got S={s}"));
        }
        let (c, d) = support_interval(k, s)?;
        let x_mid = 0.5 * (c + d);
        let u = global_density(k, s, x_mid)?;
        let nu = (2.0 + k) / k * ((1.0 + k) / (s * (2.0 + k - s))).sqrt();
        let den = 4.0 + 8.0 * k + k.powi(3) * (1.0 + s) + k * k * (5.0 + 2.0 * s - s * s);
        let pre = (2.0 + k) * (2.0 + k) * k * s / den;
        Ok(Self {
            k,
            s,
            c,
            d,
            x_mid,
            u,
            nu,
            a_naive: (PI * nu).exp(),
            a_gauge: (((s - 1.0) / x_mid + (1.0 + k - s) / (1.0 - x_mid)) / (2.0 * u)).exp(),
            b_alt: pre * (2.0 - k - s),
            b_gauge: pre * (2.0 + k - s),
        })
    }

    /// Boutillier's anisotropy parameter for this context.
    pub fn gamma(&self, reflected: bool) -> f64 {
        gamma_from_nu(self.nu, reflected)
    }
}

/// `γ = 1/√(1+ν²)`, negated for the reflected hexagon (`q < p`).
pub fn gamma_parameter(k: f64, s: f64, reflected: bool) -> Result<f64> {
    Ok(ScalingContext::new(k, s)?.gamma(reflected))
}

fn gamma_from_nu(nu: f64, reflected: bool) -> f64 {
    let g = 1.0 / (1.0 + nu * nu).sqrt();
    if reflected {
        -g
    } else {
        g
    }
}

const PANEL_NODES: usize = 16;

/// `∫_lo^hi Re(e^{iωt} (α + iβt)^e) dt` on panels no wider than the
/// oscillation scale `1/|ω|`.
fn osc_panels(gl: &GaussLegendre, omega: f64, g: &impl Fn(f64) -> Complex64, lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    let mut a = lo;
    while a < hi {
        // geometric growth away from t = 0 until the oscillation scale binds
        let mut h = (0.5 * a).max(0.5);
        if omega != 0.0 {
            h = h.min(1.0 / omega.abs());
        }
        let b = (a + h).min(hi);
        total += gl.integrate(a, b, |t| (Complex64::new(0.0, omega * t).exp() * g(t)).re);
        a = b;
    }
    total
}

/// Integrals of `Re(e^{iωt} (α + iβt)^e)` over `[0,1]` (head) or `[1,∞)`
/// (tail). The tail is split at `T` with `|ω| T ≥ 60`; beyond `T` the
/// repeated integration-by-parts expansion
/// `e^{iωT} Σ_k (-1)^{k+1} g^{(k)}(T)/(iω)^{k+1}` is summed until its terms
/// stop decreasing. For `ω = 0` the tail is mapped to `[0,1]` by `t = 1/v`.
fn osc_integral(omega: f64, alpha: f64, beta: f64, e: i32, tail: bool) -> f64 {
    let gl = GaussLegendre::new(PANEL_NODES);
    let base = Complex64::new(alpha, 0.0);
    let ib = Complex64::new(0.0, beta);
    let g = move |t: f64| (base + ib * t).powi(e);
    if !tail {
        return osc_panels(&gl, omega, &g, 0.0, 1.0);
    }
    if omega == 0.0 {
        // (α + iβ/v)^e / v² = v^{-e-2} (αv + iβ)^e, smooth for e <= -1
        let gl = GaussLegendre::new(48);
        return gl.integrate(0.0, 1.0, |v| (v.powi(-e - 2) * (base * v + ib).powi(e)).re);
    }
    let t_split = (60.0 / omega.abs()).max(8.0);
    let head = osc_panels(&gl, omega, &g, 1.0, t_split);
    let iw = Complex64::new(0.0, omega);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut falling = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..40 {
        // g^{(k)}(T) = e(e-1)...(e-k+1) (iβ)^k (α + iβT)^{e-k}
        let dk = falling * ib.powi(k) * (base + ib * t_split).powi(e - k);
        let term = if k % 2 == 0 { -dk } else { dk } / iw.powi(k + 1);
        let mag = term.norm();
        if mag > last {
            break;
        }
        acc += term;
        last = mag;
        if mag < 1e-18 {
            break;
        }
        falling *= (e - k) as f64;
    }
    head + ((iw * t_split).exp() * acc).re
}

/// The bulk kernel `K*(s0,Y; t0,X)`: `∫_0^1 Re(e^{iπt(X-Y)}(1+itν)^{s0-t0}) dt`
/// for `s0 >= t0`, and minus the same integral over `[1,∞)` otherwise.
pub fn bulk_kernel(nu: f64, s0: i64, y: f64, t0: i64, x: f64) -> f64 {
    let e = (s0 - t0) as i32;
    let omega = PI * (x - y);
    if e >= 0 {
        osc_integral(omega, 1.0, nu, e, false)
    } else {
        -osc_integral(omega, 1.0, nu, e, true)
    }
}

/// Boutillier's kernel `J_γ(s0,Y; t0,X)`. The integrand is Hermitian in `t`,
/// so the symmetric integrals reduce to real parts over a half line.
pub fn boutillier_kernel(gamma: f64, s0: i64, y: f64, t0: i64, x: f64) -> Result<f64> {
    if !(gamma.abs() < 1.0) || gamma == 0.0 {
        return domain(format!("gamma must satisfy 0 < |gamma| < 1, got {gamma}"));
    }
    let e = (s0 - t0) as i32;
    let beta = (1.0 - gamma * gamma).sqrt();
    let v = if e >= 0 {
        osc_integral(x - y, gamma, beta, e, false)
    } else {
        -osc_integral(x - y, gamma, beta, e, true)
    };
    Ok(v / PI)
}

/// One offset of the bulk convergence probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkProbeRow {
    pub s0: i64,
    pub t0: i64,
    pub x: f64,
    pub y: f64,
    /// `K(pS+s0, y; pS+t0, x) / (p u)` at the zoomed positions.
    pub scaled: f64,
    /// The limit `K*`.
    pub limit: f64,
    /// Error after dividing by `a_gauge^{X-Y} (p b_gauge)^{s0-t0}`.
    pub err_gauge: f64,
    /// Error with `b_alt` in place of `b_gauge`.
    pub err_b_alt: f64,
    /// Error with the naive prefactor `a_naive^{X-Y} b_alt^{s0-t0}`.
    pub err_a_naive: f64,
}

/// Compares the zoomed finite kernel at `(p, q = p(1+k))` with `K*` at each
/// offset `(s0, t0, X, Y)`.
pub fn bulk_convergence_probe(k: f64, s: f64, p: usize, offsets: &[(i64, i64, f64, f64)]) -> Result<Vec<BulkProbeRow>> {
    let sc = ScalingContext::new(k, s)?;
    let qf = p as f64 * (1.0 + k);
    if (qf - qf.round()).abs() > 1e-9 {
        return domain(format!("q = p(1+k) = {qf} is not an integer"));
    }
    let spec = HexagonSpec::new(p, qf.round() as usize)?;
    let ctx = KernelContext::new(spec);
    let base = (p as f64 * s).round() as i64;
    let zoom = p as f64 * sc.u;
    let mut rows = Vec::with_capacity(offsets.len());
    for &(s0, t0, x, y) in offsets {
        let (ls, lt) = (base + s0, base + t0);
        if ls < 1 || lt < 1 || ls as usize > spec.lines() || lt as usize > spec.lines() {
            return domain(format!("offset lines ({ls},{lt}) outside 1..={}", spec.lines()));
        }
        let xs = sc.x_mid + x / zoom;
        let ys = sc.x_mid + y / zoom;
        let scaled = ctx.kernel_eval(ls as usize, ys, lt as usize, xs)? / zoom;
        let limit = bulk_kernel(sc.nu, s0, y, t0, x);
        let e = (s0 - t0) as i32;
        let pf = p as f64;
        let norm = |a: f64, b: f64| scaled / (a.powf(x - y) * b.powi(e));
        rows.push(BulkProbeRow {
            s0,
            t0,
            x,
            y,
            scaled,
            limit,
            err_gauge: (norm(sc.a_gauge, pf * sc.b_gauge) - limit).abs(),
            err_b_alt: (norm(sc.a_gauge, pf * sc.b_alt) - limit).abs(),
            err_a_naive: (norm(sc.a_naive, sc.b_alt) - limit).abs(),
        });
    }
    Ok(rows)
}

/// The 5×5 grid `s0-t0 ∈ {-2..2}`, `X-Y ∈ {-2..2}`, with `X = -Y` and the
/// smaller line offset at 0.
pub fn bulk_grid() -> Vec<(i64, i64, f64, f64)> {
    let mut out = Vec::with_capacity(25);
    for e in -2i64..=2 {
        for tau in -2i64..=2 {
            let s0 = e.max(0);
            let x = tau as f64 / 2.0;
            // + 0.0 keeps the origin at +0
            out.push((s0, s0 - e, x, 0.0 - x));
        }
    }
    out
}
