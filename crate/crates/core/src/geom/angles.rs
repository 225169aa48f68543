//! Angle structures: linear equations on dihedral angles.

use std::f64::consts::PI;

use crate::skeleton::{skeleton, validate};
use crate::triangulation::Triangulation;

use super::GeomError;

/// Opposite-edge pair carrying edge `e` (numbered as in
/// [`EDGE_VERTICES`](crate::triangulation::EDGE_VERTICES)): 0 for {01, 23},
/// 1 for {02, 13}, 2 for {03, 12}.
pub fn angle_slot(edge: usize) -> usize {
    assert!(edge < 6, "edge number out of range");
    edge.min(5 - edge)
}

/// Equality system `M x = π r` on the `3n` angles, `x[3t + k]` being the
/// angle of tetrahedron `t` at edge pair `k`. Positivity `x > 0` is implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleSystem {
    pub tets: usize,
    pub matrix: Vec<Vec<i64>>,
    /// Right-hand sides in multiples of π.
    pub rhs: Vec<i64>,
    /// The first `tet_rows` rows are the per-tetrahedron rows.
    pub tet_rows: usize,
}

impl AngleSystem {
    pub fn vars(&self) -> usize {
        3 * self.tets
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn rhs_radians(&self) -> Vec<f64> {
        self.rhs.iter().map(|&r| r as f64 * PI).collect()
    }

    /// Largest absolute violation of the equalities.
    pub fn residual(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.vars(), "wrong number of angles");
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, &r)| {
                let lhs: f64 = row.iter().zip(x).map(|(&a, &v)| a as f64 * v).sum();
                (lhs - r as f64 * PI).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Tetrahedron rows `a + b + c = π` followed by one row per edge class with
/// incident angles summing to `2π`.
///
/// Needs a closed table whose edges are all valid; vertex links are not
/// inspected, so degenerate tables can still be posed to the LP.
pub fn angle_equations(tri: &Triangulation) -> Result<AngleSystem, GeomError> {
    let report = validate(tri);
    if tri.is_empty() || !report.involution_ok() || !report.closed() || !report.edges_valid() {
        return Err(GeomError::Invalid);
    }
    let skel = skeleton(tri).map_err(|_| GeomError::Invalid)?;
    let n = tri.size();
    let mut matrix = Vec::with_capacity(n + skel.edges.len());
    let mut rhs = Vec::with_capacity(n + skel.edges.len());
    for t in 0..n {
        let mut row = vec![0; 3 * n];
        row[3 * t..3 * t + 3].fill(1);
        matrix.push(row);
        rhs.push(1);
    }
    for class in &skel.edges {
        let mut row = vec![0; 3 * n];
        for m in &class.members {
            row[3 * m.tet + angle_slot(m.edge)] += 1;
        }
        matrix.push(row);
        rhs.push(2);
    }
    Ok(AngleSystem {
        tets: n,
        matrix,
        rhs,
        tet_rows: n,
    })
}

/// Dihedral angles `(a, b, c)` per tetrahedron, in edge-pair order.
#[derive(Clone, Debug, PartialEq)]
pub struct AnglePoint {
    pub angles: Vec<[f64; 3]>,
}

impl AnglePoint {
    pub fn from_flat(x: &[f64]) -> Self {
        assert_eq!(x.len() % 3, 0, "angle count not a multiple of 3");
        AnglePoint {
            angles: x.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        self.angles.iter().flatten().copied().collect()
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    /// Angle at edge `edge` of tetrahedron `tet`.
    pub fn at_edge(&self, tet: usize, edge: usize) -> f64 {
        self.angles[tet][angle_slot(edge)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_x101;
    use crate::census::figure_eight;

    #[test]
    fn x101_dimensions() {
        let s = angle_equations(&build_x101()).unwrap();
        assert_eq!(s.vars(), 18);
        assert_eq!(s.rows(), 12);
    }

    #[test]
    fn regular_angles_and_degree_six() {
        let tri = build_x101();
        let s = angle_equations(&tri).unwrap();
        let degrees = skeleton(&tri).unwrap().degrees();
        let x = vec![PI / 3.0; s.vars()];
        for (i, row) in s.matrix.iter().enumerate() {
            let lhs: f64 = row.iter().map(|&a| a as f64 * PI / 3.0).sum();
            let ok = (lhs - s.rhs[i] as f64 * PI).abs() < 1e-12;
            if i < s.tet_rows {
                assert!(ok);
            } else {
                assert_eq!(ok, degrees[i - s.tet_rows] == 6);
            }
        }
        assert!(s.residual(&x) > 1.0);
        let fig8 = angle_equations(&figure_eight()).unwrap();
        assert!(fig8.residual(&[PI / 3.0; 6]) < 1e-12);
    }

    #[test]
    fn edge_rows_sum_to_degree() {
        let tri = figure_eight();
        let s = angle_equations(&tri).unwrap();
        let total: i64 = s.matrix[s.tet_rows..].iter().flatten().sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn open_table_rejected() {
        assert_eq!(angle_equations(&Triangulation::with_tets(1)), Err(GeomError::Invalid));
    }
}
