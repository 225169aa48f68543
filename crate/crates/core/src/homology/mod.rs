//! First homology of the manifold underlying an ideal triangulation.
//!
//! The triangulation deformation retracts onto its dual spine: one 0-cell
//! per tetrahedron, one 1-cell per face and one 2-cell per edge. A spanning
//! tree of the dual graph is collapsed, leaving one generator per non-tree
//! face, and each edge contributes the relator read off by walking once
//! around it. H1 is the cokernel of the resulting exponent-sum matrix.

mod snf;

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub use snf::{smith_normal_form, IntMatrix, SmithForm};

use crate::skeleton::{skeleton, validate};
use crate::triangulation::{FaceRef, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("triangulation is not a connected census-valid ideal triangulation")]
    Invalid,
}

/// A finitely generated abelian group `Z^rank ⊕ Z_d1 ⊕ ... ⊕ Z_dk` with
/// `d1 | d2 | ... | dk` and every `di ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(rank: usize, torsion: &[u64]) -> Self {
        AbelianGroup {
            rank,
            torsion: torsion.iter().map(|&d| BigInt::from(d)).collect(),
        }
    }

    /// Cokernel of `relations`, read as a map `Z^rows → Z^cols` on row
    /// vectors: the quotient of `Z^cols` by the row span.
    pub fn cokernel(relations: &IntMatrix) -> Self {
        let f = smith_normal_form(relations);
        let factors = f.invariant_factors();
        AbelianGroup {
            rank: relations.cols() - factors.len(),
            torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Presentation of the fundamental group read off the dual spine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinePresentation {
    /// One generator per face, indexed as in [`Triangulation::face_pairs`].
    pub generators: usize,
    /// Faces on the spanning tree of the dual graph; these are trivial.
    pub tree: Vec<usize>,
    /// One relator per edge class: `(face, ±1)` in the order crossed.
    pub relators: Vec<Vec<(usize, i32)>>,
}

impl SpinePresentation {
    /// Exponent-sum matrix over the non-tree generators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let free: Vec<usize> = (0..self.generators).filter(|g| !self.tree.contains(g)).collect();
        let mut m = IntMatrix::zeros(self.relators.len(), free.len());
        for (r, rel) in self.relators.iter().enumerate() {
            for &(face, sign) in rel {
                if let Some(c) = free.iter().position(|&g| g == face) {
                    m[(r, c)] += BigInt::from(sign);
                }
            }
        }
        m
    }

    pub fn abelianization(&self) -> AbelianGroup {
        AbelianGroup::cokernel(&self.exponent_matrix())
    }
}

fn check_valid(tri: &Triangulation) -> Result<(), HomologyError> {
    if validate(tri).census_valid() {
        Ok(())
    } else {
        Err(HomologyError::Invalid)
    }
}

pub fn spine_presentation(tri: &Triangulation) -> Result<SpinePresentation, HomologyError> {
    check_valid(tri)?;
    let pairs = tri.face_pairs();
    let mut index = vec![[0usize; 4]; tri.size()];
    for (i, p) in pairs.iter().enumerate() {
        index[p.a.tet][p.a.face] = i;
        index[p.b.tet][p.b.face] = i;
    }

    let mut tree = Vec::new();
    let mut seen = vec![false; tri.size()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(t) = queue.pop_front() {
        for f in 0..4 {
            let g = tri.gluing(t, f).expect("closed");
            if !seen[g.tet] {
                seen[g.tet] = true;
                tree.push(index[t][f]);
                queue.push_back(g.tet);
            }
        }
    }

    let skel = skeleton(tri).map_err(|_| HomologyError::Invalid)?;
    let relators = skel
        .edges
        .iter()
        .map(|e| {
            e.embeddings
                .as_ref()
                .expect("valid closed edge")
                .iter()
                .map(|emb| {
                    let exit = FaceRef {
                        tet: emb.tet,
                        face: emb.exit_face(),
                    };
                    let i = index[exit.tet][exit.face];
                    // dual 1-cells run from the smaller side to the larger
                    let sign = if pairs[i].a == exit { 1 } else { -1 };
                    (i, sign)
                })
                .collect()
        })
        .collect();

    Ok(SpinePresentation {
        generators: pairs.len(),
        tree,
        relators,
    })
}

pub fn first_homology(tri: &Triangulation) -> Result<AbelianGroup, HomologyError> {
    Ok(spine_presentation(tri)?.abelianization())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{figure_eight, gieseking};

    #[test]
    fn display_forms() {
        assert_eq!(AbelianGroup::new(1, &[2, 2]).to_string(), "Z + Z_2 + Z_2");
        assert_eq!(AbelianGroup::new(3, &[]).to_string(), "Z^3");
        assert_eq!(AbelianGroup::new(0, &[]).to_string(), "0");
        assert_eq!(AbelianGroup::new(0, &[5]).to_string(), "Z_5");
    }

    #[test]
    fn cokernel_of_small_matrices() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(AbelianGroup::cokernel(&m), AbelianGroup::new(0, &[6]));
        let m = IntMatrix::from_rows(&[vec![2, 4, 0]]);
        assert_eq!(AbelianGroup::cokernel(&m), AbelianGroup::new(2, &[2]));
    }

    #[test]
    fn figure_eight_presentation_counts() {
        let p = spine_presentation(&figure_eight()).unwrap();
        assert_eq!(p.generators, 4);
        assert_eq!(p.tree.len(), 1);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.relators.iter().map(Vec::len).sum::<usize>(), 12);
    }

    #[test]
    fn gieseking_homology() {
        assert_eq!(first_homology(&gieseking()).unwrap(), AbelianGroup::new(1, &[]));
    }

    #[test]
    fn invalid_input_rejected() {
        assert_eq!(
            first_homology(&Triangulation::with_tets(1)),
            Err(HomologyError::Invalid)
        );
    }
}
