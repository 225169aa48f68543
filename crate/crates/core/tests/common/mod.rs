//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use idealtri::perm::Perm4;
use idealtri::Triangulation;

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = rule(f, a, fa, m, fm);
        let (rm, frm, right) = rule(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = rule(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `-∫₀^θ log|2 sin t| dt` for `0 ≤ θ ≤ π/2`: the `-log(2t)` part of the
/// integrand is integrated in closed form, the smooth remainder
/// `-log(sin t / t)` by quadrature.
pub fn lobachevsky_by_quadrature(theta: f64) -> f64 {
    assert!((0.0..=PI / 2.0).contains(&theta));
    if theta == 0.0 {
        return 0.0;
    }
    let singular = theta - theta * (2.0 * theta).ln();
    let smooth = |t: f64| if t == 0.0 { 0.0 } else { -(t.sin() / t).ln() };
    singular + simpson(&smooth, 0.0, theta, 1e-15)
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k-1}` where `d_k` is the gcd of all `k×k`
/// minors; stops at the rank.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut d = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, det(&sub));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Plain union-find without path compression.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.0[x] != x {
            x = self.0[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn count(&self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Edge and vertex class counts by direct identification of
/// `(tet, vertex)` corners and unordered `(tet, {u, v})` edges.
pub fn class_counts(tri: &Triangulation) -> (usize, usize) {
    let n = tri.size();
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let edge_id = |t: usize, a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        6 * t + pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let mut edges = Dsu::new(6 * n);
    let mut verts = Dsu::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            let Some(g) = tri.gluing(t, f) else { continue };
            let p: Perm4 = g.perm;
            let others: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            for &v in &others {
                verts.union(4 * t + v, 4 * g.tet + p.apply(v));
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    let (a, b) = (others[i], others[j]);
                    edges.union(edge_id(t, a, b), edge_id(g.tet, p.apply(a), p.apply(b)));
                }
            }
        }
    }
    (edges.count(), verts.count())
}
