//! Jacobi polynomials on `[-1,1]` and their shifted form on `[0,1]`,
//! Gauss–Legendre quadrature, and the large-degree asymptotics of
//! `P_n^{(alpha+an, beta+bn)}` together with the Darboux data behind them.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

/// `P_n^{(a,b)}(z)` by the three-term recurrence. Zero for `n < 0`.
pub fn jacobi(n: i64, a: f64, b: f64, z: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0;
    let ab2 = a * a - b * b;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * z + ab2);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Shifted Jacobi polynomial `P_n^{(a,b)}(1-2x)`, orthogonal on `(0,1)` for
/// the weight `x^a (1-x)^b`.
pub fn jacobi_shifted(n: i64, a: f64, b: f64, x: f64) -> f64 {
    jacobi(n, a, b, 1.0 - 2.0 * x)
}

/// `ln N_n^{(a,b)}` with `N = Γ(n+a+1)Γ(n+b+1) / ((2n+a+b+1) n! Γ(n+a+b+1))`.
pub fn ln_jacobi_norm(n: i64, a: f64, b: f64) -> f64 {
    let nf = n as f64;
    -(2.0 * nf + a + b + 1.0).ln() + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + a + b + 1.0)
}

/// Squared norm of the shifted polynomial on `(0,1)`.
pub fn jacobi_norm(n: i64, a: f64, b: f64) -> Result<f64> {
    if n < 0 {
        return domain("norm undefined for negative degree");
    }
    if a <= -1.0 || b <= -1.0 {
        return domain("Jacobi parameters must exceed -1");
    }
    Ok(ln_jacobi_norm(n, a, b).exp())
}

/// Gauss–Legendre rule on `[-1,1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[lo, hi]`.
    pub fn on(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (hi - lo);
        let m = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (m + h * x, h * w))
    }

    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.on(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Parameters `(Δ, ρ, θ, γ)` of the oscillatory asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiParams {
    pub delta: f64,
    pub rho: f64,
    pub theta: f64,
    pub gamma: f64,
}

pub fn ci_delta(a: f64, b: f64, z: f64) -> f64 {
    let u = a * (z + 1.0) + b * (z - 1.0);
    u * u - 4.0 * (a + b + 1.0) * (1.0 - z * z)
}

/// Angles from the two-argument arctangent of the defining complex ratios,
/// which keeps each in `(-π, π]`. Where `Δ >= 0` the angles are those of the
/// real part alone and carry no meaning for the asymptotics.
pub fn ci_params(a: f64, b: f64, z: f64) -> Result<CiParams> {
    if !(z > -1.0 && z < 1.0) {
        return domain(format!("z={z} must lie in (-1,1)"));
    }
    if a < 0.0 || b < 0.0 {
        return domain("a and b must be nonnegative");
    }
    let delta = ci_delta(a, b, z);
    let s = (-delta).max(0.0).sqrt();
    let ab1 = 1.0 + a + b;
    let rho = Complex64::new(a * (z + 1.0) + b * (z - 1.0), s).arg();
    let theta = (Complex64::new((a + b + 2.0) * z - (3.0 * a + b + 2.0), -s)
        / (2.0 * (z - 1.0) * ab1))
        .arg();
    let gamma = (Complex64::new((a + b + 2.0) * z + (a + 3.0 * b + 2.0), -s)
        / (2.0 * (z + 1.0) * ab1))
        .arg();
    Ok(CiParams {
        delta,
        rho,
        theta,
        gamma,
    })
}

/// `ln` of the non-oscillating amplitude of the leading asymptotic form.
fn ci_ln_envelope(n: u32, alpha: f64, beta: f64, a: f64, b: f64, z: f64, delta: f64) -> f64 {
    let nf = n as f64;
    let ab1 = 1.0 + a + b;
    0.5 * (4.0 / (PI * nf * (-delta).sqrt())).ln()
        + (0.5 * nf * (a + 1.0) + 0.5 * alpha + 0.25) * (2.0 * (a + 1.0) / ((1.0 - z) * ab1)).ln()
        + (0.5 * nf * (b + 1.0) + 0.5 * beta + 0.25) * (2.0 * (b + 1.0) / ((1.0 + z) * ab1)).ln()
        + (0.5 * nf + 0.25) * ((1.0 - z * z) * ab1 / 4.0).ln()
}

fn oscillatory_params(a: f64, b: f64, z: f64) -> Result<CiParams> {
    let c = ci_params(a, b, z)?;
    if c.delta >= 0.0 {
        return domain(format!(
            "Δ={} >= 0: outside the oscillatory region",
            c.delta
        ));
    }
    Ok(c)
}

/// Leading-order approximation of `P_n^{(alpha+an, beta+bn)}(z)` in the
/// oscillatory region `Δ < 0`.
pub fn ci_asymptotic(n: u32, alpha: f64, beta: f64, a: f64, b: f64, z: f64) -> Result<f64> {
    let c = oscillatory_params(a, b, z)?;
    let nf = n as f64;
    let phase = (nf * (a + 1.0) + alpha + 0.5) * c.theta + (nf * (b + 1.0) + beta + 0.5) * c.gamma
        - (nf + 0.5) * c.rho
        + PI / 4.0;
    Ok(ci_ln_envelope(n, alpha, beta, a, b, z, c.delta).exp() * phase.cos())
}

/// The amplitude multiplying the cosine in [`ci_asymptotic`].
pub fn ci_envelope(n: u32, alpha: f64, beta: f64, a: f64, b: f64, z: f64) -> Result<f64> {
    let c = oscillatory_params(a, b, z)?;
    Ok(ci_ln_envelope(n, alpha, beta, a, b, z, c.delta).exp())
}

/// The classical fixed-parameter asymptotics at `z = cos φ`.
pub fn szego_asymptotic(n: u32, alpha: f64, beta: f64, phi: f64) -> f64 {
    let nf = n as f64;
    (1.0 / (PI * nf)).sqrt() / ((phi / 2.0).sin().powf(alpha + 0.5) * (phi / 2.0).cos().powf(beta + 0.5))
        * ((nf + (alpha + beta + 1.0) / 2.0) * phi - (alpha + 0.5) * PI / 2.0).cos()
}

/// Singularity data of the generating function used by the method of Darboux.
#[derive(Debug, Clone, Copy)]
pub struct DarbouxData {
    pub xi_plus: Complex64,
    pub xi_minus: Complex64,
    pub eta_plus: Complex64,
    pub eta_minus: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    /// `ln|t_±|` and the unwrapped argument of `t_+` (that of `t_-` is its negative).
    ln_abs_t: f64,
    arg_t_plus: f64,
}

pub fn darboux_data(a: f64, b: f64, z: f64, alpha: f64, beta: f64) -> Result<DarbouxData> {
    let c = oscillatory_params(a, b, z)?;
    let s = (-c.delta).sqrt();
    let ab1 = 1.0 + a + b;
    let num = |sign: f64| Complex64::new(b * (z - 1.0) + a * (z + 1.0), sign * s);
    let xi = |sign: f64| num(sign) / (2.0 * ab1 * (1.0 - z));
    let xi_plus = xi(1.0);
    let xi_minus = xi(-1.0);
    let ratio = (z - 1.0) / (z + 1.0);
    let eta_plus = xi_plus * ratio;
    let eta_minus = xi_minus * ratio;

    let one = Complex64::new(1.0, 0.0);
    let t_of = |sign: f64, xi: Complex64, eta: Complex64| {
        num(sign) / (ab1 * (1.0 - z * z)) * (one + xi).powf(-1.0 - a) * (one + eta).powf(-1.0 - b)
    };
    let t_plus = t_of(1.0, xi_plus, eta_plus);
    let t_minus = t_of(-1.0, xi_minus, eta_minus);

    let bcoef = |sign: f64, xi: Complex64, eta: Complex64| {
        Complex64::from_polar((-c.delta).powf(-0.25), sign * PI / 4.0)
            * (one + xi).powf(alpha - a / 2.0)
            * (one + eta).powf(beta - b / 2.0)
    };
    let b_plus = bcoef(1.0, xi_plus, eta_plus);
    let b_minus = bcoef(-1.0, xi_minus, eta_minus);

    let ln_abs_t = t_plus.norm().ln();
    let arg_t_plus = c.rho - (1.0 + a) * c.theta - (1.0 + b) * c.gamma;
    Ok(DarbouxData {
        xi_plus,
        xi_minus,
        eta_plus,
        eta_minus,
        t_plus,
        t_minus,
        b_plus,
        b_minus,
        ln_abs_t,
        arg_t_plus,
    })
}

impl DarbouxData {
    /// `B_+ t_+^{-n-1/2} + B_- t_-^{-n-1/2}` times `n^{-1/2}/√π`, the leading
    /// coefficient of `t^n` in the comparison function.
    pub fn leading_coefficient(&self, n: u32) -> f64 {
        let e = -(n as f64) - 0.5;
        let pow = |sign: f64| Complex64::from_polar((e * self.ln_abs_t).exp(), sign * e * self.arg_t_plus);
        let total = self.b_plus * pow(1.0) + self.b_minus * pow(-1.0);
        total.re / (PI * n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi_shifted(0, 1.3, 2.0, 0.7), 1.0);
        assert!((jacobi_shifted(1, 0.0, 0.0, 0.25) - 0.5).abs() < 1e-15);
        assert_eq!(jacobi_shifted(-1, 0.0, 0.0, 0.25), 0.0);
        // P_2^{(1,3)}(z) from the explicit sum
        let z: f64 = 0.2;
        let exact = {
            let (a, b, n) = (1.0, 3.0, 2.0);
            // sum_s C(n+a,n-s) C(n+b,s) ((z-1)/2)^s ((z+1)/2)^(n-s)
            let c = |n: f64, k: f64| -> f64 {
                (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)).exp()
            };
            (0..=2)
                .map(|s| {
                    let s = s as f64;
                    c(n + a, n - s) * c(n + b, s) * ((z - 1.0) / 2.0).powf(s) * ((z + 1.0) / 2.0).powf(n - s)
                })
                .sum::<f64>()
        };
        assert!((jacobi(2, 1.0, 3.0, z) - exact).abs() < 1e-13);
    }

    #[test]
    fn reflection() {
        let x = 0.3;
        let l = jacobi_shifted(2, 1.0, 3.0, 1.0 - x);
        let r = jacobi_shifted(2, 3.0, 1.0, x);
        assert!((l - r).abs() < 1e-12);
        let l = jacobi_shifted(5, 2.0, 0.5, 1.0 - x);
        let r = -jacobi_shifted(5, 0.5, 2.0, x);
        assert!((l - r).abs() < 1e-12);
    }

    #[test]
    fn norms() {
        assert!((jacobi_norm(0, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((jacobi_norm(1, 0.0, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((jacobi_norm(0, 1.0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!(jacobi_norm(-1, 0.0, 0.0).is_err());
    }

    #[test]
    fn orthogonality() {
        let gl = GaussLegendre::new(40);
        for a in 0..=4 {
            for b in 0..=4 {
                let (af, bf) = (a as f64, b as f64);
                for j in 0..=8 {
                    for k in 0..=8 {
                        let v = gl.integrate(0.0, 1.0, |x| {
                            x.powi(a) * (1.0 - x).powi(b) * jacobi_shifted(j, af, bf, x) * jacobi_shifted(k, af, bf, x)
                        });
                        let want = if j == k { jacobi_norm(j, af, bf).unwrap() } else { 0.0 };
                        assert!((v - want).abs() < 1e-10, "a={a} b={b} j={j} k={k}: {v} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let gl = GaussLegendre::new(7);
        let v = gl.integrate(0.0, 2.0, |x| x.powi(13));
        assert!((v - 2f64.powi(14) / 14.0).abs() < 1e-10);
        let w: f64 = GaussLegendre::new(400).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-13);
    }

    #[test]
    fn derivative_identities() {
        let h = 1e-5;
        for &(n, a, b) in &[(3i64, 2.0, 1.0), (5, 1.0, 3.0), (2, 4.0, 0.0)] {
            for &x in &[0.2, 0.5, 0.83] {
                let f = |x: f64| x.powf(a) * jacobi_shifted(n, a, b, x);
                let d = (f(x + h) - f(x - h)) / (2.0 * h);
                let want = (n as f64 + a) * x.powf(a - 1.0) * jacobi_shifted(n, a - 1.0, b + 1.0, x);
                assert!((d - want).abs() < 1e-6 * (1.0 + want.abs()));
            }
        }
        for &(n, a, b) in &[(3i64, 1.0, 2.0), (4, 0.0, 3.0)] {
            for &x in &[0.2, 0.5, 0.83] {
                let f = |x: f64| (1.0 - x).powf(b) * jacobi_shifted(n, a, b, x);
                let d = (f(x + h) - f(x - h)) / (2.0 * h);
                let want = -(n as f64 + b) * (1.0 - x).powf(b - 1.0) * jacobi_shifted(n, a + 1.0, b - 1.0, x);
                assert!((d - want).abs() < 1e-6 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn ci_params_legendre_point() {
        let c = ci_params(0.0, 0.0, 0.0).unwrap();
        assert!((c.delta + 4.0).abs() < 1e-15);
        assert!((c.rho - PI / 2.0).abs() < 1e-15);
        assert!((c.theta - FRAC_PI_4).abs() < 1e-15);
        assert!((c.gamma + FRAC_PI_4).abs() < 1e-15);
        assert!(ci_params(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ci_params_at_cos_phi() {
        for &phi in &[0.3, 1.1, 2.5] {
            let c = ci_params(0.0, 0.0, f64::cos(phi)).unwrap();
            assert!((c.delta + 4.0 * phi.sin().powi(2)).abs() < 1e-13);
            assert!((c.rho - PI / 2.0).abs() < 1e-13);
            assert!((c.theta - (PI / 2.0 - phi / 2.0)).abs() < 1e-13);
            assert!((c.gamma + phi / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ci_delta_independent() {
        let (a, b, z) = (1.0, 2.0, 0.1);
        // expanded by hand: (3.3 - 1.8)^2 - 16 * 0.99
        let want = (1.1f64 - 1.8).powi(2) - 4.0 * 4.0 * 0.99;
        assert!((ci_delta(a, b, z) - want).abs() < 1e-14);
    }

    #[test]
    fn darboux_legendre() {
        let d = darboux_data(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let i = Complex64::i();
        assert!((d.xi_plus - i).norm() < 1e-14);
        assert!((d.xi_minus + i).norm() < 1e-14);
        assert!((d.eta_plus + i).norm() < 1e-14);
        assert!((d.eta_minus - i).norm() < 1e-14);
        assert!((d.t_plus - i).norm() < 1e-14);
        assert!((d.t_minus + i).norm() < 1e-14);
    }

    #[test]
    fn darboux_legendre_generating_function_roots() {
        for &z in &[-0.6, 0.1, 0.45] {
            let d = darboux_data(0.0, 0.0, z, 0.0, 0.0).unwrap();
            for t in [d.t_plus, d.t_minus] {
                let v = Complex64::new(1.0, 0.0) - 2.0 * z * t + t * t;
                assert!(v.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn darboux_moduli_and_arguments() {
        let (a, b, z) = (1.0, 2.0, 0.3);
        let d = darboux_data(a, b, z, 0.0, 0.0).unwrap();
        let c = ci_params(a, b, z).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let m_xi = 2.0 * (a + 1.0) / ((1.0 - z) * (1.0 + a + b));
        let m_eta = 2.0 * (b + 1.0) / ((1.0 + z) * (1.0 + a + b));
        assert!(((one + d.xi_plus).norm_sqr() - m_xi).abs() < 1e-13);
        assert!(((one + d.xi_minus).norm_sqr() - m_xi).abs() < 1e-13);
        assert!(((one + d.eta_plus).norm_sqr() - m_eta).abs() < 1e-13);
        assert!(((one + d.xi_plus).arg() - c.theta).abs() < 1e-13);
        assert!(((one + d.xi_minus).arg() + c.theta).abs() < 1e-13);
        assert!(((one + d.eta_plus).arg() - c.gamma).abs() < 1e-13);
        assert!((d.eta_plus - d.xi_plus * (z - 1.0) / (z + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn darboux_assembly_matches_asymptotic() {
        let (a, b, z) = (0.5, 0.5, 0.2);
        for &(al, be) in &[(0.0, 0.0), (0.7, -0.2)] {
            let d = darboux_data(a, b, z, al, be).unwrap();
            let v = d.leading_coefficient(30);
            let w = ci_asymptotic(30, al, be, a, b, z).unwrap();
            assert!((v - w).abs() < 1e-10 * (1.0 + w.abs()), "{v} vs {w}");
        }
    }

    #[test]
    fn reflection_symmetry_of_params() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = 3.0 * next();
            let b = 3.0 * next();
            let z = 1.8 * next() - 0.9;
            let c = ci_params(a, b, z).unwrap();
            let m = ci_params(b, a, -z).unwrap();
            assert!((c.delta - m.delta).abs() < 1e-12);
            if c.delta < 0.0 {
                assert!((m.rho - (PI - c.rho)).abs() < 1e-12);
                assert!((m.theta + c.gamma).abs() < 1e-12);
                assert!((m.gamma + c.theta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymptotic_close_to_recurrence() {
        let n = 50;
        let exact = jacobi(n as i64, 0.0, 0.0, 0.0);
        let approx = ci_asymptotic(n, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let env = ci_envelope(n, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((approx - exact).abs() / env <= 0.05);
        assert!(ci_asymptotic(10, 0.0, 0.0, 5.0, 0.0, 0.99).is_err());
    }

    #[test]
    fn szego_reduction() {
        for &phi in &[0.4, 1.3, 2.2] {
            for &(al, be) in &[(0.0, 0.0), (1.5, 0.3)] {
                let v = ci_asymptotic(40, al, be, 0.0, 0.0, f64::cos(phi)).unwrap();
                let s = szego_asymptotic(40, al, be, phi);
                assert!((v - s).abs() < 1e-12 * (1.0 + s.abs()));
            }
        }
    }
}
