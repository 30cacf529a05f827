//! Line structure, interlacing and single-line weights of the continuous model.

use crate::error::{domain, Error, Result};

/// The pair `(p, q)` with `1 <= p <= q`. Lines are numbered `1..=p+q-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HexagonSpec {
    p: usize,
    q: usize,
}

impl HexagonSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return domain(format!("p and q must be positive, got p={p}, q={q}"));
        }
        if p > q {
            return domain(format!("expected p <= q, got p={p}, q={q}"));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of lines, `p+q-1`.
    pub fn lines(&self) -> usize {
        self.p + self.q - 1
    }

    pub fn check_line(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.lines() {
            return domain(format!("line {t} outside 1..={}", self.lines()));
        }
        Ok(())
    }

    /// `r(t)`, the number of particles on line `t`.
    pub fn particles_per_line(&self, t: usize) -> Result<usize> {
        self.check_line(t)?;
        Ok(self.r(t))
    }

    /// Unchecked `r(t)`.
    pub fn r(&self, t: usize) -> usize {
        if t <= self.p {
            t
        } else if t <= self.q {
            self.p
        } else {
            self.p + self.q - t
        }
    }

    /// `f_t(x) = (1-x)^{|q-t|} x^{|p-t|}`.
    pub fn line_weight(&self, t: usize, x: f64) -> Result<f64> {
        self.check_line(t)?;
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("position {x} outside [0,1]"));
        }
        let (ea, eb) = self.weight_exponents(t);
        Ok(x.powi(ea as i32) * (1.0 - x).powi(eb as i32))
    }

    /// Exponents `(|p-t|, |q-t|)` of `x` and `1-x` in the line weight.
    pub fn weight_exponents(&self, t: usize) -> (usize, usize) {
        (self.p.abs_diff(t), self.q.abs_diff(t))
    }

    /// Image of line `t` under the reflection `(t, x) -> (p+q-t, 1-x)`.
    pub fn mirror_line(&self, t: usize) -> usize {
        self.p + self.q - t
    }
}

/// Particle positions per line, each strictly decreasing inside `(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeadConfiguration {
    lines: Vec<Vec<f64>>,
}

impl BeadConfiguration {
    /// Checks cardinalities, the open interval and strict decrease. Interlacing
    /// between lines is a separate question, see [`interlace_indicator`].
    pub fn new(spec: &HexagonSpec, lines: Vec<Vec<f64>>) -> Result<Self> {
        if lines.len() != spec.lines() {
            return Err(Error::Structure(format!(
                "expected {} lines, got {}",
                spec.lines(),
                lines.len()
            )));
        }
        for (i, xs) in lines.iter().enumerate() {
            let t = i + 1;
            if xs.len() != spec.r(t) {
                return Err(Error::Structure(format!(
                    "line {t} has {} particles, expected {}",
                    xs.len(),
                    spec.r(t)
                )));
            }
            if xs.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return domain(format!("line {t} has a position outside (0,1)"));
            }
            if xs.windows(2).any(|w| w[0] <= w[1]) {
                return domain(format!("line {t} is not strictly decreasing"));
            }
        }
        Ok(Self { lines })
    }

    pub(crate) fn from_lines_unchecked(lines: Vec<Vec<f64>>) -> Self {
        Self { lines }
    }

    /// Positions on line `t` (1-based), largest first.
    pub fn line(&self, t: usize) -> &[f64] {
        &self.lines[t - 1]
    }

    pub fn lines(&self) -> &[Vec<f64>] {
        &self.lines
    }

    pub fn into_lines(self) -> Vec<Vec<f64>> {
        self.lines
    }

    /// The reflected configuration `(t, x) -> (p+q-t, 1-x)`.
    pub fn mirrored(&self) -> Self {
        let lines = self
            .lines
            .iter()
            .rev()
            .map(|xs| xs.iter().rev().map(|x| 1.0 - x).collect())
            .collect();
        Self { lines }
    }
}

/// Merged sequence that must be strictly decreasing for lines `t`, `t+1` to
/// interlace, with virtual particles at 0 and 1 where the model puts them.
fn merged_chain(spec: &HexagonSpec, t: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() + y.len() + 2);
    if t < spec.p() {
        // y1 > x1 > y2 > ... > x_t > y_{t+1}
        for i in 0..x.len() {
            out.push(y[i]);
            out.push(x[i]);
        }
        out.push(y[x.len()]);
    } else if t < spec.q() {
        // y1 > x1 > ... > y_p > x_p > 0
        for i in 0..x.len() {
            out.push(y[i]);
            out.push(x[i]);
        }
        out.push(0.0);
    } else {
        // 1 > x1 > y1 > ... > y_{r-1} > x_r > 0
        out.push(1.0);
        for i in 0..y.len() {
            out.push(x[i]);
            out.push(y[i]);
        }
        out.push(x[y.len()]);
        out.push(0.0);
    }
    out
}

/// Whether two neighbouring lines interlace. Cardinalities must already match.
pub fn lines_interlace(spec: &HexagonSpec, t: usize, x: &[f64], y: &[f64]) -> bool {
    merged_chain(spec, t, x, y).windows(2).all(|w| w[0] > w[1])
}

/// The full interlacing indicator over all neighbouring pairs of lines.
pub fn interlace_indicator(spec: &HexagonSpec, config: &BeadConfiguration) -> Result<bool> {
    if config.lines.len() != spec.lines() {
        return Err(Error::Structure(format!(
            "expected {} lines, got {}",
            spec.lines(),
            config.lines.len()
        )));
    }
    for (i, xs) in config.lines.iter().enumerate() {
        if xs.len() != spec.r(i + 1) {
            return Err(Error::Structure(format!(
                "line {} has {} particles, expected {}",
                i + 1,
                xs.len(),
                spec.r(i + 1)
            )));
        }
    }
    Ok((1..spec.lines()).all(|t| lines_interlace(spec, t, config.line(t), config.line(t + 1))))
}

/// Squared Vandermonde times the product of line weights.
pub fn line_marginal_unnormalized(spec: &HexagonSpec, t: usize, xs: &[f64]) -> Result<f64> {
    spec.check_line(t)?;
    if xs.windows(2).any(|w| w[0] <= w[1]) {
        return domain("positions must be strictly decreasing");
    }
    let mut v = 1.0;
    for i in 0..xs.len() {
        v *= spec.line_weight(t, xs[i])?;
        for j in i + 1..xs.len() {
            let d = xs[i] - xs[j];
            v *= d * d;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(spec: &HexagonSpec, lines: Vec<Vec<f64>>) -> BeadConfiguration {
        BeadConfiguration::new(spec, lines).unwrap()
    }

    #[test]
    fn particle_counts() {
        let s = HexagonSpec::new(4, 12).unwrap();
        assert_eq!(s.particles_per_line(3).unwrap(), 3);
        assert_eq!(s.particles_per_line(8).unwrap(), 4);
        assert_eq!(s.particles_per_line(15).unwrap(), 1);
        assert!(s.particles_per_line(16).is_err());
        assert!(s.particles_per_line(0).is_err());
        assert!(HexagonSpec::new(3, 2).is_err());
    }

    #[test]
    fn weights() {
        let s = HexagonSpec::new(4, 12).unwrap();
        assert_eq!(s.line_weight(4, 0.5).unwrap(), 0.00390625);
        assert_eq!(s.line_weight(12, 0.5).unwrap(), 0.00390625);
        let u = HexagonSpec::new(1, 1).unwrap();
        assert_eq!(u.line_weight(1, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn interlacing_examples() {
        let s = HexagonSpec::new(1, 2).unwrap();
        assert!(interlace_indicator(&s, &cfg(&s, vec![vec![0.5], vec![0.7]])).unwrap());
        assert!(!interlace_indicator(&s, &cfg(&s, vec![vec![0.5], vec![0.3]])).unwrap());

        let s = HexagonSpec::new(2, 2).unwrap();
        let c = cfg(&s, vec![vec![0.5], vec![0.8, 0.2], vec![0.6]]);
        assert!(interlace_indicator(&s, &c).unwrap());
        let c = cfg(&s, vec![vec![0.5], vec![0.8, 0.2], vec![0.9]]);
        assert!(!interlace_indicator(&s, &c).unwrap());
        let c = cfg(&s, vec![vec![0.5], vec![0.8, 0.2], vec![0.1]]);
        assert!(!interlace_indicator(&s, &c).unwrap());
    }

    #[test]
    fn wrong_cardinality_is_structural() {
        let s = HexagonSpec::new(2, 2).unwrap();
        let c = BeadConfiguration::from_lines_unchecked(vec![vec![0.5], vec![0.8], vec![0.6]]);
        assert!(matches!(interlace_indicator(&s, &c), Err(Error::Structure(_))));
        assert!(matches!(
            BeadConfiguration::new(&s, vec![vec![0.5], vec![0.8]]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn rejects_boundary_positions() {
        let s = HexagonSpec::new(1, 1).unwrap();
        assert!(BeadConfiguration::new(&s, vec![vec![0.0]]).is_err());
        assert!(BeadConfiguration::new(&s, vec![vec![1.0]]).is_err());
    }

    #[test]
    fn marginal_values() {
        let s = HexagonSpec::new(2, 2).unwrap();
        assert_eq!(line_marginal_unnormalized(&s, 2, &[0.75, 0.25]).unwrap(), 0.25);
        let u = HexagonSpec::new(1, 1).unwrap();
        assert_eq!(line_marginal_unnormalized(&u, 1, &[0.3]).unwrap(), 1.0);
        assert!(line_marginal_unnormalized(&s, 2, &[0.25, 0.75]).is_err());
    }

    #[test]
    fn mirror_preserves_interlacing() {
        let s = HexagonSpec::new(2, 3).unwrap();
        let c = cfg(
            &s,
            vec![vec![0.4], vec![0.7, 0.2], vec![0.8, 0.3], vec![0.5]],
        );
        assert!(interlace_indicator(&s, &c).unwrap());
        let m = c.mirrored();
        assert_eq!(m.line(1), &[0.5]);
        assert!(interlace_indicator(&s, &m).unwrap());
    }
}
