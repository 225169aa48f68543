//! Maximization of the volume functional over the angle polytope.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::builders::double_cover;
use crate::skeleton::validate;
use crate::triangulation::Triangulation;

use super::angles::{angle_equations, AnglePoint, AngleSystem};
use super::lobachevsky::{lobachevsky, lobachevsky_derivative, lobachevsky_second_derivative};
use super::lp::{maximize, LpOutcome};
use super::GeomError;

/// `Σ Λ(x_i)` over all angles.
pub fn volume(x: &[f64]) -> f64 {
    x.iter().map(|&a| lobachevsky(a)).sum()
}

pub fn volume_gradient(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&a| lobachevsky_derivative(a)).collect()
}

/// Orthonormal basis of the null space of the equality matrix together
/// with the minimum-norm solution of the system.
#[derive(Clone, Debug)]
pub struct ConstraintSpace {
    null: DMatrix<f64>,
    particular: DVector<f64>,
}

impl ConstraintSpace {
    pub fn new(system: &AngleSystem) -> Self {
        Self::on_columns(system, &vec![true; system.vars()])
    }

    /// Solution space of the system with the angles outside `free` held at
    /// zero, in the coordinates of the free angles.
    pub fn on_columns(system: &AngleSystem, free: &[bool]) -> Self {
        let cols: Vec<usize> = (0..system.vars()).filter(|&j| free[j]).collect();
        let (m, n) = (system.rows(), cols.len());
        let a = DMatrix::from_fn(m, n, |i, j| system.matrix[i][cols[j]] as f64);
        let b = DVector::from_vec(system.rhs_radians());
        let eig = SymmetricEigen::new(a.transpose() * &a);
        let scale = eig.eigenvalues.iter().fold(1.0f64, |acc, &v| acc.max(v.abs()));
        let tol = 1e-9 * scale;
        let atb = a.transpose() * b;
        let mut null_cols = Vec::new();
        let mut particular = DVector::zeros(n);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            if lambda.abs() <= tol {
                null_cols.push(v.into_owned());
            } else {
                particular += v * (v.dot(&atb) / lambda);
            }
        }
        let null = if null_cols.is_empty() {
            DMatrix::zeros(n, 0)
        } else {
            DMatrix::from_columns(&null_cols)
        };
        ConstraintSpace { null, particular }
    }

    /// Dimension of the solution space.
    pub fn dim(&self) -> usize {
        self.null.ncols()
    }

    /// Orthogonal projection onto the affine solution space.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        let d = &x - &self.particular;
        let p = &self.particular + &self.null * (self.null.transpose() * d);
        p.iter().copied().collect()
    }

    fn reduce(&self, v: &[f64]) -> DVector<f64> {
        self.null.transpose() * DVector::from_column_slice(v)
    }
}

/// Largest `t` such that some solution has every free angle `≥ t` and the
/// others zero, with a solution attaining it.
fn max_min_angle(system: &AngleSystem, free: &[bool]) -> Option<(Vec<f64>, f64)> {
    let cols: Vec<usize> = (0..system.vars()).filter(|&j| free[j]).collect();
    // x = s + t·1 with s ≥ 0, t ≥ 0; maximize t
    let a: Vec<Vec<f64>> = system
        .matrix
        .iter()
        .map(|row| {
            let mut r: Vec<f64> = cols.iter().map(|&j| row[j] as f64).collect();
            r.push(cols.iter().map(|&j| row[j]).sum::<i64>() as f64);
            r
        })
        .collect();
    let mut c = vec![0.0; cols.len() + 1];
    c[cols.len()] = 1.0;
    let LpOutcome::Optimal { x: z, value: t } = maximize(&a, &system.rhs_radians(), &c) else {
        return None;
    };
    let mut x = vec![0.0; system.vars()];
    for (k, &j) in cols.iter().enumerate() {
        x[j] = z[k] + t;
    }
    Some((x, t))
}

fn project_free(system: &AngleSystem, free: &[bool], x: &[f64]) -> Vec<f64> {
    let y: Vec<f64> = (0..x.len()).filter(|&j| free[j]).map(|j| x[j]).collect();
    let y = ConstraintSpace::on_columns(system, free).project(&y);
    let mut out = vec![0.0; x.len()];
    for (j, v) in (0..x.len()).filter(|&j| free[j]).zip(y) {
        out[j] = v;
    }
    out
}

/// Point satisfying the equalities with the smallest angle maximized, if
/// that smallest angle reaches `margin`.
pub fn feasible_point(system: &AngleSystem, margin: f64) -> Option<AnglePoint> {
    let (x, t) = max_min_angle(system, &vec![true; system.vars()])?;
    if t < margin {
        return None;
    }
    let p = AnglePoint::from_flat(&ConstraintSpace::new(system).project(&x));
    (p.min_angle() >= margin).then_some(p)
}

/// Point in the relative interior of the polytope: angles that vanish on
/// every solution are exactly zero, all others are at least `margin`.
/// `None` when the polytope is empty.
pub fn relative_interior_point(system: &AngleSystem, margin: f64) -> Option<AnglePoint> {
    let n = system.vars();
    let (_, t) = max_min_angle(system, &vec![true; n])?;
    if t >= margin {
        return feasible_point(system, margin);
    }
    let a: Vec<Vec<f64>> = system
        .matrix
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();
    let b = system.rhs_radians();
    let free: Vec<bool> = (0..n)
        .map(|i| {
            let mut c = vec![0.0; n];
            c[i] = 1.0;
            matches!(maximize(&a, &b, &c), LpOutcome::Optimal { value, .. } if value > 1e-9)
        })
        .collect();
    let (x, t) = max_min_angle(system, &free)?;
    if t < margin {
        return None;
    }
    let x = project_free(system, &free, &x);
    let p = AnglePoint::from_flat(&x);
    let ok = x
        .iter()
        .zip(&free)
        .all(|(&v, &f)| if f { v >= margin } else { v == 0.0 });
    ok.then_some(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeStatus {
    InteriorMax,
    BoundaryMax,
    Infeasible,
    NotConverged,
}

impl VolumeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VolumeStatus::InteriorMax => "interior-max",
            VolumeStatus::BoundaryMax => "boundary-max",
            VolumeStatus::Infeasible => "infeasible",
            VolumeStatus::NotConverged => "not-converged",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeOptions {
    /// Stop when the projected gradient is shorter than this.
    pub grad_tol: f64,
    /// Stop when an accepted step gains less volume than this.
    pub change_tol: f64,
    pub max_iter: usize,
    /// Angles below this at the optimum are reported as zero.
    pub interior_threshold: f64,
    /// Smallest angle required of the starting point.
    pub margin: f64,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        VolumeOptions {
            grad_tol: 1e-9,
            change_tol: 1e-12,
            max_iter: 100_000,
            interior_threshold: 1e-6,
            margin: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// Largest violation of the angle equations.
    pub equations: f64,
    /// Norm of the gradient projected onto the solution space.
    pub projected_gradient: f64,
    /// Volume gained by the last accepted step.
    pub last_change: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeResult {
    pub volume: f64,
    pub point: AnglePoint,
    pub status: VolumeStatus,
    pub iterations: usize,
    pub residuals: Residuals,
    /// `(tet, edge pair)` of angles below the interior threshold.
    pub near_zero: Vec<(usize, usize)>,
    /// Volume after each accepted step, starting point first.
    pub history: Vec<f64>,
    /// True when the figure comes from the orientation double cover.
    pub via_double_cover: bool,
    /// Direct maximization on a non-orientable input, kept for comparison.
    pub direct: Option<Box<VolumeResult>>,
}

impl VolumeResult {
    fn infeasible() -> Self {
        VolumeResult {
            volume: 0.0,
            point: AnglePoint { angles: Vec::new() },
            status: VolumeStatus::Infeasible,
            iterations: 0,
            residuals: Residuals {
                equations: f64::NAN,
                projected_gradient: f64::NAN,
                last_change: 0.0,
            },
            near_zero: Vec::new(),
            history: Vec::new(),
            via_double_cover: false,
            direct: None,
        }
    }
}

/// Ascent on the affine solution space. Each step moves along the Newton
/// direction of the reduced problem (the plain projected gradient when the
/// reduced Hessian is not numerically definite), capped to stay strictly
/// inside the positivity domain, then backtracks until the Armijo condition
/// holds.
///
/// Angles that are exactly zero in `start` stay fixed at zero; the ascent
/// runs over the face of the polytope they span.
pub fn maximize_on(system: &AngleSystem, start: &AnglePoint, opts: &VolumeOptions) -> VolumeResult {
    let full = start.flat();
    let free: Vec<bool> = full.iter().map(|&a| a != 0.0).collect();
    let free_idx: Vec<usize> = (0..full.len()).filter(|&j| free[j]).collect();
    let space = ConstraintSpace::on_columns(system, &free);
    let mut x = space.project(&free_idx.iter().map(|&j| full[j]).collect::<Vec<_>>());
    let mut v = volume(&x);
    let mut history = vec![v];
    let mut iterations = 0;
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;

    while iterations < opts.max_iter {
        let g = space.reduce(&volume_gradient(&x));
        grad_norm = g.norm();
        if grad_norm < opts.grad_tol || space.dim() == 0 {
            converged = true;
            break;
        }
        let h = DMatrix::from_diagonal(&DVector::from_iterator(
            x.len(),
            x.iter().map(|&a| -lobachevsky_second_derivative(a)),
        ));
        let neg_hess = space.null.transpose() * h * &space.null;
        let dir_reduced = match neg_hess.cholesky() {
            Some(ch) => ch.solve(&g),
            None => g.clone(),
        };
        let slope = g.dot(&dir_reduced);
        let dir: Vec<f64> = (&space.null * dir_reduced).iter().copied().collect();

        let mut alpha: f64 = 1.0;
        for (&xi, &di) in x.iter().zip(&dir) {
            if di < 0.0 {
                alpha = alpha.min(0.9 * xi / -di);
            }
        }
        let mut accepted = None;
        while alpha > 1e-18 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            if trial.iter().all(|&a| a > 0.0) {
                let tv = volume(&trial);
                if tv >= v + 1e-4 * alpha * slope {
                    accepted = Some((trial, tv));
                    break;
                }
            }
            alpha *= 0.5;
        }
        iterations += 1;
        let Some((trial, tv)) = accepted else {
            // no ascent left at working precision
            converged = true;
            break;
        };
        last_change = tv - v;
        x = trial;
        v = tv;
        history.push(v);
        if last_change < opts.change_tol {
            converged = true;
            break;
        }
    }

    let mut flat = vec![0.0; full.len()];
    for (&j, &a) in free_idx.iter().zip(&x) {
        flat[j] = a;
    }
    let point = AnglePoint::from_flat(&flat);
    let near_zero: Vec<(usize, usize)> = point
        .angles
        .iter()
        .enumerate()
        .flat_map(|(t, a)| {
            (0..3)
                .filter(move |&k| a[k] < opts.interior_threshold)
                .map(move |k| (t, k))
        })
        .collect();
    let status = if !converged {
        VolumeStatus::NotConverged
    } else if near_zero.is_empty() {
        VolumeStatus::InteriorMax
    } else {
        VolumeStatus::BoundaryMax
    };
    VolumeResult {
        volume: v,
        residuals: Residuals {
            equations: system.residual(&flat),
            projected_gradient: grad_norm,
            last_change,
        },
        point,
        status,
        iterations,
        near_zero,
        history,
        via_double_cover: false,
        direct: None,
    }
}

fn maximize_direct(tri: &Triangulation, opts: &VolumeOptions) -> Result<VolumeResult, GeomError> {
    let system = angle_equations(tri)?;
    Ok(match relative_interior_point(&system, opts.margin) {
        Some(start) => maximize_on(&system, &start, opts),
        None => VolumeResult::infeasible(),
    })
}

/// Maximum of the volume functional over the angle polytope.
///
/// Non-orientable input is maximized on its orientation double cover and
/// the result halved; the direct maximization is attached as
/// [`VolumeResult::direct`].
pub fn max_volume_with(tri: &Triangulation, opts: &VolumeOptions) -> Result<VolumeResult, GeomError> {
    if !validate(tri).census_valid() {
        return Err(GeomError::Invalid);
    }
    if tri.is_orientable() {
        return maximize_direct(tri, opts);
    }
    let cover = double_cover(tri).map_err(|_| GeomError::Invalid)?;
    let up = maximize_direct(&cover.tri, opts)?;
    let direct = maximize_direct(tri, opts)?;
    if up.status == VolumeStatus::Infeasible {
        return Ok(VolumeResult {
            direct: Some(Box::new(direct)),
            via_double_cover: true,
            ..up
        });
    }
    let n = tri.size();
    let mut angles = vec![[0.0; 3]; n];
    for (t, a) in up.point.angles.iter().enumerate() {
        let base = cover.projection[t];
        for k in 0..3 {
            angles[base][k] += a[k] / 2.0;
        }
    }
    let point = AnglePoint { angles };
    let near_zero = up.near_zero.iter().filter(|&&(t, _)| t < n).copied().collect();
    let system = angle_equations(tri)?;
    Ok(VolumeResult {
        volume: up.volume / 2.0,
        residuals: Residuals {
            equations: system.residual(&point.flat()),
            ..up.residuals
        },
        point,
        status: up.status,
        iterations: up.iterations,
        near_zero,
        history: up.history.iter().map(|v| v / 2.0).collect(),
        via_double_cover: true,
        direct: Some(Box::new(direct)),
    })
}

pub fn max_volume(tri: &Triangulation) -> Result<VolumeResult, GeomError> {
    max_volume_with(tri, &VolumeOptions::default())
}
