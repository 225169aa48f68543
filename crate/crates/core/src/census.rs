//! Small classical triangulations used as controls.

use crate::perm::Perm4;
use crate::triangulation::Triangulation;

/// The two-tetrahedron ideal triangulation of the figure-eight knot
/// complement.
pub fn figure_eight() -> Triangulation {
    let mut tri = Triangulation::with_tets(2);
    let joins = [
        (0, [1, 3, 0, 2]),
        (1, [2, 0, 3, 1]),
        (2, [0, 3, 2, 1]),
        (3, [2, 1, 0, 3]),
    ];
    for (face, images) in joins {
        tri.join(0, face, 1, Perm4::from_images(images))
            .expect("figure-eight table is consistent");
    }
    tri
}

/// The one-tetrahedron Gieseking manifold (non-orientable, one Klein bottle
/// cusp).
pub fn gieseking() -> Triangulation {
    let mut tri = Triangulation::with_tets(1);
    tri.join(0, 0, 0, Perm4::from_images([1, 2, 0, 3])).unwrap();
    tri.join(0, 2, 0, Perm4::from_images([0, 2, 3, 1])).unwrap();
    tri
}
