//! Independent reconstruction of the kernel from the L-ensemble formalism on a
//! discretised line system.
//!
//! Each line is replaced by `m` midpoint nodes of weight `1/m`. The transfer
//! operator between neighbouring lines is `W = w (U + I/2)` with `U` the
//! strict upper triangle: the half diagonal is the trapezoid treatment of the
//! jump in `χ_{y<x}` and makes the scheme second order. With
//! `D^{-1}` blocks `W^{j-i}`, `B D^{-1}` rows `w 1ᵀ W^{j-l}` and `D^{-1} C`
//! columns `W^{p+q-n-j} 1`, the kernel on real nodes is
//! `-[s<t] W^{t-s} + (D^{-1} C) M^{-1} (B D^{-1})` with `M = B D^{-1} C`.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::kernel::KernelContext;
use crate::model::HexagonSpec;

#[derive(Debug, Clone)]
pub struct DiscretizationGrid {
    pub m: usize,
    pub points: Vec<f64>,
    pub weight: f64,
}

impl DiscretizationGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return domain("grid needs at least 2 points");
        }
        let points = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
        Ok(Self {
            m,
            points,
            weight: 1.0 / m as f64,
        })
    }

    /// Index of the grid point nearest to `x`.
    pub fn snap(&self, x: f64) -> usize {
        ((x * self.m as f64).floor().max(0.0) as usize).min(self.m - 1)
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteKernel {
    spec: HexagonSpec,
    grid: DiscretizationGrid,
    /// `W^k` for `k = 0..p+q-1`.
    w_pow: Vec<DMatrix<f64>>,
    m_mat: DMatrix<f64>,
    m_inv: DMatrix<f64>,
}

impl DiscreteKernel {
    pub fn new(spec: HexagonSpec, m: usize) -> Result<Self> {
        let grid = DiscretizationGrid::new(m)?;
        let w = grid.weight;
        let mut base = DMatrix::zeros(m, m);
        for i in 0..m {
            base[(i, i)] = 0.5 * w;
            for j in i + 1..m {
                base[(i, j)] = w;
            }
        }
        let mut w_pow = vec![DMatrix::identity(m, m)];
        for k in 1..spec.p() + spec.q() {
            let next = &w_pow[k - 1] * &base;
            w_pow.push(next);
        }
        let p = spec.p();
        let mut dk = Self {
            spec,
            grid,
            w_pow,
            m_mat: DMatrix::zeros(p, p),
            m_inv: DMatrix::zeros(p, p),
        };
        let ones = DVector::from_element(m, 1.0);
        let m_mat = DMatrix::from_fn(p, p, |li, ni| {
            let (l, n) = (li + 1, ni + 1);
            let line = dk.spec.p() + dk.spec.q() - n;
            dk.bd(l, line).map_or(0.0, |r| r.dot(&ones))
        });
        let m_inv = m_mat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric(format!("M is singular (m={m})")))?;
        dk.m_mat = m_mat;
        dk.m_inv = m_inv;
        Ok(dk)
    }

    pub fn grid(&self) -> &DiscretizationGrid {
        &self.grid
    }

    pub fn spec(&self) -> &HexagonSpec {
        &self.spec
    }

    /// The `p×p` matrix `M = B D^{-1} C`.
    pub fn m_matrix(&self) -> &DMatrix<f64> {
        &self.m_mat
    }

    /// Ratio of extreme singular values of `M`.
    pub fn condition_estimate(&self) -> f64 {
        let sv = self.m_mat.clone().singular_values();
        sv.max() / sv.min()
    }

    /// Row `l` of `B D^{-1}` restricted to line `j`.
    fn bd(&self, l: usize, j: usize) -> Option<DVector<f64>> {
        if j < l {
            return None;
        }
        let ones = DVector::from_element(self.grid.m, 1.0);
        Some(self.w_pow[j - l].tr_mul(&ones) * self.grid.weight)
    }

    /// Column `n` of `D^{-1} C` restricted to line `j`.
    fn dc(&self, n: usize, j: usize) -> Option<DVector<f64>> {
        let end = self.spec.p() + self.spec.q() - n;
        if j > end {
            return None;
        }
        let ones = DVector::from_element(self.grid.m, 1.0);
        Some(&self.w_pow[end - j] * ones)
    }

    /// Kernel entry between node `a` on line `s` and node `b` on line `t`.
    /// Carries the node weight: `m * entry` approximates the continuum kernel.
    pub fn entry(&self, s: usize, a: usize, t: usize, b: usize) -> f64 {
        let p = self.spec.p();
        let mut v = if t > s { -self.w_pow[t - s][(a, b)] } else { 0.0 };
        for n in 1..=p {
            let Some(dc) = self.dc(n, s) else { continue };
            for l in 1..=p {
                let Some(bd) = self.bd(l, t) else { continue };
                v += dc[a] * self.m_inv[(n - 1, l - 1)] * bd[b];
            }
        }
        v
    }

    /// The full kernel over all `(line, node)` pairs, line-major.
    pub fn full_matrix(&self) -> DMatrix<f64> {
        let (m, p, lines) = (self.grid.m, self.spec.p(), self.spec.lines());
        let dcs: Vec<Vec<Option<DVector<f64>>>> =
            (1..=p).map(|n| (1..=lines).map(|j| self.dc(n, j)).collect()).collect();
        let bds: Vec<Vec<Option<DVector<f64>>>> =
            (1..=p).map(|l| (1..=lines).map(|j| self.bd(l, j)).collect()).collect();
        let mut k = DMatrix::zeros(lines * m, lines * m);
        for s in 1..=lines {
            for t in 1..=lines {
                for (n, dcn) in dcs.iter().enumerate() {
                    let Some(dc) = &dcn[s - 1] else { continue };
                    for (l, bdl) in bds.iter().enumerate() {
                        let Some(bd) = &bdl[t - 1] else { continue };
                        let c = self.m_inv[(n, l)];
                        for a in 0..m {
                            let f = c * dc[a];
                            for b in 0..m {
                                k[((s - 1) * m + a, (t - 1) * m + b)] += f * bd[b];
                            }
                        }
                    }
                }
                if t > s {
                    let wp = &self.w_pow[t - s];
                    for a in 0..m {
                        for b in 0..m {
                            k[((s - 1) * m + a, (t - 1) * m + b)] -= wp[(a, b)];
                        }
                    }
                }
            }
        }
        k
    }
}

/// A kernel probe `(s, y, t, x)`.
pub type Probe = (usize, f64, usize, f64);

/// Max over probes of `|m K_disc - K|`, with probe positions snapped to nodes
/// and the exact kernel evaluated at the snapped nodes.
pub fn oracle_deviation(ctx: &KernelContext, dk: &DiscreteKernel, probes: &[Probe]) -> Result<f64> {
    let g = dk.grid();
    let mut worst: f64 = 0.0;
    for &(s, y, t, x) in probes {
        let (a, b) = (g.snap(y), g.snap(x));
        let disc = g.m as f64 * dk.entry(s, a, t, b);
        let exact = ctx.kernel_eval(s, g.points[a], t, g.points[b])?;
        worst = worst.max((disc - exact).abs());
    }
    Ok(worst)
}

/// Probes touching every combination of line regimes for `(p, q)`, both
/// orders of `s` and `t`, and both orders of `x` and `y`.
pub fn regime_probes(spec: &HexagonSpec) -> Vec<Probe> {
    let pos = [(0.23, 0.61), (0.71, 0.34), (0.5, 0.52)];
    let mut out = Vec::new();
    for s in 1..=spec.lines() {
        for t in 1..=spec.lines() {
            for &(y, x) in &pos {
                out.push((s, y, t, x));
            }
        }
    }
    out
}
