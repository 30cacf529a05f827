//! The correlation kernel `K(s,y; t,x)` of the finitized bead process and the
//! resulting n-point correlation determinants.
//!
//! The kernel is a finite sum over `l = 1..=min(p+q-s, t, p)` of products
//! `Ψ^s_l(y) Φ^t_l(x)` minus, when `s < t`, the interlacing transfer term
//! `χ_{y<x} (x-y)^{t-s-1}/(t-s-1)!`. Each factor has a closed Jacobi form in
//! most regimes. The exceptions are `Ψ^s_l` with `l > s` and `Φ^t_l` with
//! `t > q` and `l > p+q-t`; those arise only for `s < t` and are repeated
//! integrals of positive polynomials, evaluated exactly by Gauss–Legendre.

use nalgebra::DMatrix;

use crate::error::{domain, Result};
use crate::model::HexagonSpec;
use crate::orthopoly::{jacobi_shifted, GaussLegendre};

/// A point `(line, position)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    pub line: usize,
    pub x: f64,
}

impl SpacePoint {
    pub fn new(line: usize, x: f64) -> Self {
        Self { line, x }
    }
}

/// Number in sign/log-magnitude form.
#[derive(Debug, Clone, Copy)]
struct Signed {
    neg: bool,
    ln: f64,
}

impl Signed {
    fn from(v: f64) -> Self {
        Self {
            neg: v < 0.0,
            ln: v.abs().ln(),
        }
    }

    fn mul(self, o: Signed) -> Self {
        Self {
            neg: self.neg != o.neg,
            ln: self.ln + o.ln,
        }
    }

    fn value(self) -> f64 {
        let m = self.ln.exp();
        if self.neg {
            -m
        } else {
            m
        }
    }
}

/// `e * ln(x)` with the convention `0 * ln 0 = 0`.
fn xlny(e: f64, x: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * x.ln()
    }
}

/// Jacobi data `(ln C, degree, a, b)` for line `t` and index `l`, or `None`
/// when the closed form does not apply (a factorial argument is negative).
#[derive(Debug, Clone, Copy)]
struct Table {
    ln_c: f64,
    deg: i64,
    a: f64,
    b: f64,
}

/// Precomputed log-factorials and quadrature for one `(p, q)`.
#[derive(Debug, Clone)]
pub struct KernelContext {
    spec: HexagonSpec,
    ln_fact: Vec<f64>,
    gl: GaussLegendre,
}

impl KernelContext {
    pub fn new(spec: HexagonSpec) -> Self {
        let n = 2 * (spec.p() + spec.q()) + 4;
        let mut ln_fact = vec![0.0; n + 1];
        for k in 1..=n {
            ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
        }
        // Extension integrands are polynomials of degree <= p+q.
        let gl = GaussLegendre::new((spec.p() + spec.q()) / 2 + 4);
        Self { spec, ln_fact, gl }
    }

    pub fn spec(&self) -> &HexagonSpec {
        &self.spec
    }

    fn lf(&self, n: i64) -> Option<f64> {
        if n < 0 {
            None
        } else {
            self.ln_fact.get(n as usize).copied().or_else(|| {
                Some(statrs::function::gamma::ln_gamma(n as f64 + 1.0))
            })
        }
    }

    /// `ln N_n^{(a,b)}` for integer parameters from the factorial table.
    fn ln_norm(&self, n: i64, a: i64, b: i64) -> f64 {
        -((2 * n + a + b + 1) as f64).ln() + self.lf(n + a).unwrap() + self.lf(n + b).unwrap()
            - self.lf(n).unwrap()
            - self.lf(n + a + b).unwrap()
    }

    fn table(&self, t: usize, l: i64) -> Option<Table> {
        let (p, q, t) = (self.spec.p() as i64, self.spec.q() as i64, t as i64);
        let (ln_c, deg, a, b) = if t <= p {
            (self.lf(t - l)? - self.lf(p - l)?, t - l, p - t, q - t)
        } else if t <= q {
            (self.lf(q - l)? - self.lf(p + q - t - l)?, p - l, t - p, q - t)
        } else {
            (self.lf(t - l)? - self.lf(p - l)?, p + q - t - l, t - p, t - q)
        };
        Some(Table {
            ln_c,
            deg,
            a: a as f64,
            b: b as f64,
        })
    }

    /// Sign and log-magnitude of `a_s(y)`.
    fn a_factor(&self, s: usize, y: f64) -> Signed {
        let (p, q) = (self.spec.p(), self.spec.q());
        if s <= p {
            Signed {
                neg: (p - s) % 2 == 1,
                ln: xlny((p - s) as f64, y) + xlny((q - s) as f64, 1.0 - y),
            }
        } else if s <= q {
            Signed {
                neg: false,
                ln: xlny((q - s) as f64, 1.0 - y),
            }
        } else {
            Signed { neg: false, ln: 0.0 }
        }
    }

    /// Sign and log-magnitude of `b_t(x)`.
    fn b_factor(&self, t: usize, x: f64) -> Signed {
        let (p, q) = (self.spec.p(), self.spec.q());
        if t <= p {
            Signed {
                neg: (p - t) % 2 == 1,
                ln: 0.0,
            }
        } else if t <= q {
            Signed {
                neg: false,
                ln: xlny((t - p) as f64, x),
            }
        } else {
            Signed {
                neg: false,
                ln: xlny((t - p) as f64, x) + xlny((t - q) as f64, 1.0 - x),
            }
        }
    }

    /// `ln ∫_0^1 f(v) dv` for a positive integrand given as `ln f`.
    fn ln_integral(&self, ln_f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<(f64, f64)> = self.gl.on(0.0, 1.0).map(|(v, w)| (w.ln(), ln_f(v))).collect();
        let m = terms.iter().map(|(lw, lf)| lw + lf).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + terms.iter().map(|(lw, lf)| (lw + lf - m).exp()).sum::<f64>().ln()
    }

    /// `Ψ^s_l(y)`.
    fn psi(&self, s: usize, l: i64, y: f64) -> Signed {
        let (p, q) = (self.spec.p() as i64, self.spec.q() as i64);
        let si = s as i64;
        if l <= si || si >= p {
            let tb = self.table(s, l).expect("closed form in range");
            let qv = Signed::from(jacobi_shifted(tb.deg, tb.a, tb.b, y));
            return self.a_factor(s, y).mul(Signed { neg: false, ln: tb.ln_c }).mul(qv);
        }
        // (-1)^{p-l}/(p-l)! ∫_y^1 (z-y)^k/k! z^{p-l} (1-z)^{q-l} dz, k = l-s-1,
        // after z = y + (1-y) v.
        let k = l - si - 1;
        let (ea, eb) = ((p - l) as f64, (q - l) as f64);
        let kf = k as f64;
        let inner = self.ln_integral(|v| xlny(kf, v) + xlny(ea, y + (1.0 - y) * v) + xlny(eb, 1.0 - v));
        Signed {
            neg: (p - l) % 2 == 1,
            ln: xlny(kf + 1.0 + eb, 1.0 - y) - self.lf(k).unwrap() - self.lf(p - l).unwrap() + inner,
        }
    }

    /// `Φ^t_l(x)`.
    fn phi(&self, t: usize, l: i64, x: f64) -> Signed {
        let (p, q) = (self.spec.p() as i64, self.spec.q() as i64);
        let ti = t as i64;
        if ti <= q || l <= p + q - ti {
            let tb = self.table(t, l).expect("closed form in range");
            let qv = Signed::from(jacobi_shifted(tb.deg, tb.a, tb.b, x));
            let ln_n = self.ln_norm(tb.deg, tb.a as i64, tb.b as i64);
            return self
                .b_factor(t, x)
                .mul(Signed {
                    neg: false,
                    ln: -tb.ln_c - ln_n,
                })
                .mul(qv);
        }
        // (1/(C N)) ∫_0^x (x-u)^{m-1}/(m-1)! u^{q-l} (1-u)^{p-l} du, u = x v.
        let m = l - (p + q - ti);
        let (ea, eb) = ((q - l) as f64, (p - l) as f64);
        let ln_c = self.lf(p + q - 2 * l).unwrap() - self.lf(p - l).unwrap();
        let ln_n = self.ln_norm(0, q - l, p - l);
        let mf = m as f64;
        let inner = self.ln_integral(|v| xlny(mf - 1.0, 1.0 - v) + xlny(ea, v) + xlny(eb, 1.0 - x * v));
        Signed {
            neg: false,
            ln: xlny(mf + ea, x) - self.lf(m - 1).unwrap() - ln_c - ln_n + inner,
        }
    }

    fn check(&self, t: usize, x: f64) -> Result<()> {
        self.spec.check_line(t)?;
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("position {x} outside [0,1]"));
        }
        Ok(())
    }

    /// `K(s,y; t,x)`.
    pub fn kernel_eval(&self, s: usize, y: f64, t: usize, x: f64) -> Result<f64> {
        self.check(s, y)?;
        self.check(t, x)?;
        Ok(self.eval_unchecked(s, y, t, x))
    }

    /// The finite sum without the transfer term.
    pub fn projection_part(&self, s: usize, y: f64, t: usize, x: f64) -> f64 {
        let (p, q) = (self.spec.p(), self.spec.q());
        let alpha = (p + q - s).min(t).min(p) as i64;
        (1..=alpha).map(|l| self.psi(s, l, y).mul(self.phi(t, l, x)).value()).sum()
    }

    pub(crate) fn eval_unchecked(&self, s: usize, y: f64, t: usize, x: f64) -> f64 {
        self.projection_part(s, y, t, x) - transfer(s, y, t, x)
    }

    /// One table summand `a_s b_t (C^s_l/C^t_l) Q^s_l(y) Q^t_l(x) / N^t_l`
    /// for any integer `l` where the tables are defined (including `l <= 0`).
    pub fn table_term(&self, s: usize, y: f64, t: usize, x: f64, l: i64) -> Option<f64> {
        let ts = self.table(s, l)?;
        let tt = self.table(t, l)?;
        if ts.deg < 0 || tt.deg < 0 {
            return Some(0.0);
        }
        let ln_n = self.ln_norm(tt.deg, tt.a as i64, tt.b as i64);
        let v = self
            .a_factor(s, y)
            .mul(self.b_factor(t, x))
            .mul(Signed {
                neg: false,
                ln: ts.ln_c - tt.ln_c - ln_n,
            })
            .mul(Signed::from(jacobi_shifted(ts.deg, ts.a, ts.b, y)))
            .mul(Signed::from(jacobi_shifted(tt.deg, tt.a, tt.b, x)));
        Some(v.value())
    }

    /// One-point density on line `t`.
    pub fn line_density(&self, t: usize, x: f64) -> Result<f64> {
        self.kernel_eval(t, x, t, x)
    }

    /// `∫_0^1 K(t,x; t,x) dx` with 400-node Gauss–Legendre; equals `r(t)`.
    pub fn expected_count(&self, t: usize) -> Result<f64> {
        self.spec.check_line(t)?;
        let gl = GaussLegendre::new(400);
        Ok(gl.integrate(0.0, 1.0, |x| self.eval_unchecked(t, x, t, x)))
    }

    /// The matrix `[K(t_i,x_i; t_j,x_j)]`.
    pub fn kernel_matrix(&self, points: &[SpacePoint]) -> Result<DMatrix<f64>> {
        for pt in points {
            self.check(pt.line, pt.x)?;
        }
        let n = points.len();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            self.eval_unchecked(points[i].line, points[i].x, points[j].line, points[j].x)
        }))
    }

    /// `ρ(points) = det[K]` by LU with partial pivoting.
    pub fn npoint_correlation(&self, points: &[SpacePoint]) -> Result<f64> {
        if points.is_empty() {
            return Ok(1.0);
        }
        Ok(self.kernel_matrix(points)?.lu().determinant())
    }
}

/// `χ_{y<x} (x-y)^{t-s-1}/(t-s-1)!` for `s < t`, zero otherwise. At `y = x`
/// the jump (present only for `t = s+1`) takes its midpoint value 1/2.
pub fn transfer(s: usize, y: f64, t: usize, x: f64) -> f64 {
    if s >= t {
        return 0.0;
    }
    let k = (t - s - 1) as i32;
    if y < x {
        let mut f = 1.0;
        for j in 2..=k {
            f *= j as f64;
        }
        (x - y).powi(k) / f
    } else if y == x && k == 0 {
        0.5
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: usize, q: usize) -> KernelContext {
        KernelContext::new(HexagonSpec::new(p, q).unwrap())
    }

    #[test]
    fn uniform_case() {
        let k = ctx(1, 1);
        for &(y, x) in &[(0.1, 0.9), (0.5, 0.5), (0.77, 0.2)] {
            assert!((k.kernel_eval(1, y, 1, x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn p1_q2_densities() {
        let k = ctx(1, 2);
        assert!((k.line_density(1, 0.25).unwrap() - 1.5).abs() < 1e-12);
        for i in 1..20 {
            let x = i as f64 / 20.0;
            assert!((k.line_density(1, x).unwrap() - 2.0 * (1.0 - x)).abs() < 1e-12);
            assert!((k.line_density(2, x).unwrap() - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_value_s_less_t() {
        // (p,q)=(2,2), s=1, t=2: independent moment-matrix evaluation gives -0.216154
        let k = ctx(2, 2);
        let v = k.kernel_eval(1, 0.37, 2, 0.61).unwrap();
        assert!((v + 0.216_154).abs() < 1e-12, "{v}");
    }

    #[test]
    fn diagonal_nonnegative() {
        let k = ctx(3, 5);
        for t in 1..=7 {
            for i in 0..200 {
                let x = (i as f64 + 0.5) / 200.0;
                assert!(k.line_density(t, x).unwrap() >= -1e-12);
            }
        }
    }

    #[test]
    fn counts() {
        assert!((ctx(1, 1).expected_count(1).unwrap() - 1.0).abs() < 1e-10);
        assert!((ctx(4, 12).expected_count(8).unwrap() - 4.0).abs() < 1e-8);
        assert!((ctx(2, 2).expected_count(2).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn determinants() {
        let k = ctx(2, 3);
        let a = SpacePoint::new(2, 0.4);
        let one = k.npoint_correlation(&[a]).unwrap();
        assert!((one - k.line_density(2, 0.4).unwrap()).abs() < 1e-14);
        assert!(k.npoint_correlation(&[a, a]).unwrap().abs() < 1e-10);
        assert!(k.kernel_eval(0, 0.5, 1, 0.5).is_err());
        assert!(k.kernel_eval(5, 0.5, 1, 0.5).is_err());
    }

    #[test]
    fn transfer_midpoint() {
        assert_eq!(transfer(1, 0.3, 2, 0.3), 0.5);
        assert_eq!(transfer(1, 0.3, 3, 0.3), 0.0);
        assert_eq!(transfer(2, 0.3, 1, 0.5), 0.0);
        assert!((transfer(1, 0.2, 4, 0.5) - 0.09 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn large_p_is_finite() {
        let k = ctx(64, 192);
        let v = k.kernel_eval(128, 0.5, 128, 0.5).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let w = k.kernel_eval(120, 0.4, 130, 0.45).unwrap();
        assert!(w.is_finite());
    }
}
