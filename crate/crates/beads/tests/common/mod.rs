//! Oracles shared by the integration tests. Neither uses the Jacobi tables.
#![allow(dead_code)]

use nalgebra::DMatrix;

fn inv_fact(n: i64) -> f64 {
    if n < 0 {
        0.0
    } else {
        1.0 / (1..=n).map(|k| k as f64).product::<f64>()
    }
}

fn pow0(x: f64, n: i64) -> f64 {
    if n <= 0 {
        1.0
    } else {
        x.powi(n as i32)
    }
}

/// Kernel from the moment matrix `M_{ln} = 1/(p+q+1-l-n)!`:
/// `Σ_{l,n} (1-y)^{p+q-s-n}/(p+q-s-n)! (M^{-1})_{nl} x^{t-l}/(t-l)!` minus the
/// transfer term. Fine for small `p`; `M` becomes ill-conditioned quickly.
pub fn moment_kernel(p: usize, q: usize, s: usize, y: f64, t: usize, x: f64) -> f64 {
    let (p, q, s, t) = (p as i64, q as i64, s as i64, t as i64);
    let m = DMatrix::from_fn(p as usize, p as usize, |i, j| inv_fact(p + q + 1 - (i as i64 + 1) - (j as i64 + 1)));
    let mi = m.try_inverse().expect("moment matrix invertible");
    let mut v = 0.0;
    if s < t {
        if y < x {
            v -= pow0(x - y, t - s - 1) * inv_fact(t - s - 1);
        } else if y == x && t == s + 1 {
            v -= 0.5;
        }
    }
    for l in 1..=p {
        for n in 1..=p {
            let e1 = p + q - s - n;
            let e2 = t - l;
            v += pow0(1.0 - y, e1) * inv_fact(e1) * mi[((n - 1) as usize, (l - 1) as usize)] * pow0(x, e2) * inv_fact(e2);
        }
    }
    v
}

/// `r(t)` recomputed locally.
pub fn r(p: usize, q: usize, t: usize) -> usize {
    if t <= p {
        t
    } else if t <= q {
        p
    } else {
        p + q - t
    }
}

/// A coordinate of the joint law: particle `i` (1-based, decreasing) on line `t`.
pub type Var = (usize, usize);

/// Strict order relations `big > small` of the uniform interlacing measure.
/// The boundary points 0 and 1 are implicit (all coordinates are in (0,1)).
pub fn interlacing_relations(p: usize, q: usize) -> (Vec<Var>, Vec<(Var, Var)>) {
    let lines = p + q - 1;
    let mut vars = Vec::new();
    for t in 1..=lines {
        for i in 1..=r(p, q, t) {
            vars.push((t, i));
        }
    }
    let mut rel = Vec::new();
    for t in 1..lines {
        let (rx, ry) = (r(p, q, t), r(p, q, t + 1));
        // build the alternating chain top to bottom, then read off relations
        let mut chain: Vec<Var> = Vec::new();
        if t < p {
            for i in 1..=rx {
                chain.push((t + 1, i));
                chain.push((t, i));
            }
            chain.push((t + 1, ry));
        } else if t < q {
            for i in 1..=rx {
                chain.push((t + 1, i));
                chain.push((t, i));
            }
        } else {
            for i in 1..=ry {
                chain.push((t, i));
                chain.push((t + 1, i));
            }
            chain.push((t, rx));
        }
        for w in chain.windows(2) {
            rel.push((w[0], w[1]));
        }
    }
    (vars, rel)
}

/// Exact volume of `{free coordinates in (0,1)} ∩ relations` with the
/// coordinates in `pinned` held fixed. Sums, over every total order of the
/// free coordinates placed in the gaps between sorted pinned values, the
/// simplex volume `Π L_j^{n_j}/n_j!`.
pub fn pinned_volume(vars: &[Var], rel: &[(Var, Var)], pinned: &[(Var, f64)]) -> f64 {
    let free: Vec<Var> = vars.iter().copied().filter(|v| !pinned.iter().any(|(w, _)| w == v)).collect();
    let mut cuts: Vec<f64> = pinned.iter().map(|&(_, x)| x).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let gaps = cuts.len() - 1;
    // pinned relations must hold outright
    let value_of = |v: Var| pinned.iter().find(|(w, _)| *w == v).map(|&(_, x)| x);
    for &(a, b) in rel {
        if let (Some(xa), Some(xb)) = (value_of(a), value_of(b)) {
            if xa <= xb || xa.is_nan() || xb.is_nan() {
                return 0.0;
            }
        }
    }
    let n = free.len();
    let mut total = 0.0;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut gap_of = vec![0usize; n];
    permute(&mut perm, 0, &mut |perm| {
        // perm lists free coordinates in increasing order of value
        assign(perm, 0, 0, gaps, &mut gap_of, &mut |gap_of| {
            let mut rank = vec![0usize; n];
            for (k, &v) in perm.iter().enumerate() {
                rank[v] = k;
            }
            let idx = |v: Var| free.iter().position(|&w| w == v);
            for &(a, b) in rel {
                let ok = match (idx(a), idx(b), value_of(a), value_of(b)) {
                    (Some(ia), Some(ib), _, _) => rank[ia] > rank[ib],
                    (Some(ia), None, _, Some(xb)) => cuts[gap_of[ia]] >= xb,
                    (None, Some(ib), Some(xa), _) => cuts[gap_of[ib] + 1] <= xa,
                    _ => true,
                };
                if !ok {
                    return;
                }
            }
            let mut counts = vec![0i32; gaps];
            for &g in gap_of.iter() {
                counts[g] += 1;
            }
            let mut vol = 1.0;
            for (j, &c) in counts.iter().enumerate() {
                let len = cuts[j + 1] - cuts[j];
                vol *= len.powi(c) * inv_fact(c as i64);
            }
            total += vol;
        });
    });
    total
}

fn permute(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}

/// Nondecreasing gap labels along `perm`.
fn assign(perm: &[usize], k: usize, lo: usize, gaps: usize, gap_of: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        f(gap_of);
        return;
    }
    for g in lo..gaps {
        gap_of[perm[k]] = g;
        assign(perm, k + 1, g, gaps, gap_of, f);
    }
}

/// n-point correlation of the uniform interlacing measure at
/// `(line, position)` points, summing over particle labels.
pub fn brute_correlation(p: usize, q: usize, points: &[(usize, f64)]) -> f64 {
    let (vars, rel) = interlacing_relations(p, q);
    let z = pinned_volume(&vars, &rel, &[]);
    let mut total = 0.0;
    let mut labels = vec![0usize; points.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        p: usize,
        q: usize,
        points: &[(usize, f64)],
        labels: &mut Vec<usize>,
        vars: &[Var],
        rel: &[(Var, Var)],
        total: &mut f64,
    ) {
        if k == points.len() {
            let pinned: Vec<(Var, f64)> = points.iter().zip(labels.iter()).map(|(&(t, x), &i)| ((t, i), x)).collect();
            *total += pinned_volume(vars, rel, &pinned);
            return;
        }
        let t = points[k].0;
        for i in 1..=r(p, q, t) {
            if (0..k).any(|j| points[j].0 == t && labels[j] == i) {
                continue;
            }
            labels[k] = i;
            rec(k + 1, p, q, points, labels, vars, rel, total);
        }
    }
    rec(0, p, q, points, &mut labels, &vars, &rel, &mut total);
    total / z
}
