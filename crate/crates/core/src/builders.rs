//! Explicit constructions: the five-tetrahedron cube, layering on a square
//! face, identification of opposite squares, the two six-tetrahedron
//! triangulations `x101` and `x103`, and the orientation double cover.
//!
//! Cube vertices are labelled `A..H` with `ABCD` and `EFGH` opposite squares
//! and vertical edges `AE`, `BF`, `CG`, `DH`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::moves::{self, MoveError};
use crate::perm::Perm4;
use crate::skeleton::validate;
use crate::triangulation::{FaceRef, TetEdge, Triangulation};

const CUBE_EDGES: [(char, char); 12] = [
    ('A', 'B'),
    ('B', 'C'),
    ('C', 'D'),
    ('A', 'D'),
    ('E', 'F'),
    ('F', 'G'),
    ('G', 'H'),
    ('E', 'H'),
    ('A', 'E'),
    ('B', 'F'),
    ('C', 'G'),
    ('D', 'H'),
];

const CUBE_SQUARES: [&str; 6] = ["ABCD", "EFGH", "ABFE", "CDHG", "ADHE", "BCGF"];

fn cube_adjacent(a: char, b: char) -> bool {
    CUBE_EDGES.contains(&(a, b)) || CUBE_EDGES.contains(&(b, a))
}

fn sorted_chars(s: &str) -> Vec<char> {
    let mut v: Vec<char> = s.chars().collect();
    v.sort_unstable();
    v
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("{0} is not a square of the cube")]
    UnknownSquare(String),
    #[error("square {0} is not on the boundary")]
    SquareNotOnBoundary(String),
    #[error("{0} does not list the corners of a square in cyclic order")]
    NotCyclic(String),
    #[error("a square cannot be identified with itself")]
    SameSquare,
    #[error("map sends diagonal {source_diag} of {source_square} to {mapped}, but the diagonal of {target_square} is {target_diag}")]
    DiagonalMismatch {
        source_square: String,
        source_diag: String,
        mapped: String,
        target_square: String,
        target_diag: String,
    },
    #[error("triangulation is already orientable")]
    AlreadyOrientable,
    #[error("input is not a connected census-valid triangulation")]
    NotValid,
    #[error(transparent)]
    Move(#[from] MoveError),
}

/// A boundary square made of two boundary triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    /// Corners in cyclic order, as in the cube's naming (e.g. `ABCD`).
    pub name: String,
    pub triangles: [FaceRef; 2],
    /// The shared edge of the two triangles, letters sorted.
    pub diagonal: (char, char),
}

/// A partially glued cube: tetrahedra whose vertices carry cube labels,
/// plus the squares still on the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeComplex {
    pub tri: Triangulation,
    /// Cube label of each vertex of each tetrahedron.
    pub labels: Vec<[char; 4]>,
    pub squares: Vec<Square>,
    /// Old diagonals buried by layering, most recent last.
    pub layered_edges: Vec<TetEdge>,
}

/// A correspondence between the corners of two squares, read position by
/// position: `ABCD → GFEH` sends `A ↦ G`, `B ↦ F`, `C ↦ E`, `D ↦ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMap {
    pub source: String,
    pub target: String,
}

impl SquareMap {
    pub fn new(source: &str, target: &str) -> Self {
        SquareMap {
            source: source.to_string(),
            target: target.to_string(),
        }
    }

    fn image(&self, c: char) -> char {
        let i = self.source.chars().position(|x| x == c).expect("corner of source");
        self.target.chars().nth(i).unwrap()
    }
}

/// The three identifications of opposite faces that produce `x101`.
pub fn x101_square_maps() -> [SquareMap; 3] {
    [
        SquareMap::new("ABCD", "GFEH"),
        SquareMap::new("ABFE", "CDHG"),
        SquareMap::new("ADHE", "CGFB"),
    ]
}

fn is_cyclic_square(name: &str) -> bool {
    let c: Vec<char> = name.chars().collect();
    c.len() == 4
        && sorted_chars(name).windows(2).all(|w| w[0] != w[1])
        && (0..4).all(|i| cube_adjacent(c[i], c[(i + 1) % 4]))
}

impl CubeComplex {
    fn triangle_labels(&self, f: FaceRef) -> Vec<char> {
        let mut v: Vec<char> = (0..4).filter(|&i| i != f.face).map(|i| self.labels[f.tet][i]).collect();
        v.sort_unstable();
        v
    }

    fn square_position(&self, name: &str) -> Result<usize, BuildError> {
        let key = sorted_chars(name);
        if !CUBE_SQUARES.iter().any(|s| sorted_chars(s) == key) {
            return Err(BuildError::UnknownSquare(name.to_string()));
        }
        self.squares
            .iter()
            .position(|s| sorted_chars(&s.name) == key)
            .ok_or_else(|| BuildError::SquareNotOnBoundary(name.to_string()))
    }

    pub fn square(&self, name: &str) -> Option<&Square> {
        self.square_position(name).ok().map(|i| &self.squares[i])
    }

    /// Diagonal of a boundary square as a two-letter string.
    pub fn diagonal(&self, name: &str) -> Option<String> {
        self.square(name).map(|s| format!("{}{}", s.diagonal.0, s.diagonal.1))
    }

    pub fn boundary_triangles(&self) -> Vec<FaceRef> {
        self.tri.unglued_faces()
    }

    /// Glues every pair of unglued faces carrying the same label set.
    fn glue_matching_faces(&mut self) {
        let free = self.tri.unglued_faces();
        for (i, &a) in free.iter().enumerate() {
            for &b in &free[i + 1..] {
                if self.tri.gluing(a.tet, a.face).is_some() || self.tri.gluing(b.tet, b.face).is_some() {
                    continue;
                }
                if a.tet == b.tet || self.triangle_labels(a) != self.triangle_labels(b) {
                    continue;
                }
                let perm = self.label_perm(a, b, |c| c);
                self.tri.join(a.tet, a.face, b.tet, perm).expect("free faces");
            }
        }
    }

    /// Permutation from the vertices of `a.tet` to those of `b.tet` sending
    /// each label `c` of face `a` to the vertex of `b.tet` labelled `map(c)`
    /// and the opposite vertex to `b.face`.
    fn label_perm(&self, a: FaceRef, b: FaceRef, map: impl Fn(char) -> char) -> Perm4 {
        let mut images = [0u8; 4];
        for (i, img) in images.iter_mut().enumerate() {
            *img = if i == a.face {
                b.face as u8
            } else {
                let target = map(self.labels[a.tet][i]);
                self.labels[b.tet]
                    .iter()
                    .position(|&c| c == target)
                    .expect("label present") as u8
            };
        }
        Perm4::from_images(images)
    }

    /// Recomputes the boundary square list from the unglued triangles,
    /// keeping the cube's cyclic names.
    fn rebuild_squares(&mut self) {
        let free = self.tri.unglued_faces();
        let mut squares = Vec::new();
        for name in CUBE_SQUARES {
            let corners = sorted_chars(name);
            let tris: Vec<FaceRef> = free
                .iter()
                .copied()
                .filter(|&f| self.triangle_labels(f).iter().all(|c| corners.contains(c)))
                .collect();
            if tris.len() != 2 {
                continue;
            }
            let (l0, l1) = (self.triangle_labels(tris[0]), self.triangle_labels(tris[1]));
            let shared: Vec<char> = l0.iter().copied().filter(|c| l1.contains(c)).collect();
            squares.push(Square {
                name: name.to_string(),
                triangles: [tris[0], tris[1]],
                diagonal: (shared[0], shared[1]),
            });
        }
        self.squares = squares;
    }
}

/// The standard decomposition of the cube into a central tetrahedron `BDEG`
/// and four corner tetrahedra cut off at `A`, `C`, `F`, `H`.
pub fn five_tet_cube() -> CubeComplex {
    let labels = vec![
        ['B', 'D', 'E', 'G'],
        ['A', 'B', 'D', 'E'],
        ['B', 'C', 'D', 'G'],
        ['B', 'E', 'F', 'G'],
        ['D', 'E', 'G', 'H'],
    ];
    let mut c = CubeComplex {
        tri: Triangulation::with_tets(labels.len()),
        labels,
        squares: Vec::new(),
        layered_edges: Vec::new(),
    };
    c.glue_matching_faces();
    c.rebuild_squares();
    c
}

/// Attaches a tetrahedron across the two triangles of a boundary square,
/// flipping its diagonal. The buried diagonal is recorded in
/// `layered_edges` as an edge of the new tetrahedron.
pub fn layer_on_square(c: &CubeComplex, square: &str) -> Result<CubeComplex, BuildError> {
    let pos = c.square_position(square)?;
    let sq = c.squares[pos].clone();
    let mut out = c.clone();
    let corners = sorted_chars(&sq.name);
    let t = out.tri.add_tet();
    out.labels.push([corners[0], corners[1], corners[2], corners[3]]);
    for tri in sq.triangles {
        let labels = c.triangle_labels(tri);
        let face = (0..4).find(|&i| !labels.contains(&corners[i])).unwrap();
        let new_face = FaceRef { tet: t, face };
        let perm = out.label_perm(new_face, tri, |x| x);
        out.tri.join(t, face, tri.tet, perm).expect("square triangles are free");
    }
    let v0 = corners.iter().position(|&x| x == sq.diagonal.0).unwrap();
    let v1 = corners.iter().position(|&x| x == sq.diagonal.1).unwrap();
    out.layered_edges.push(TetEdge::new(t, v0, v1));
    out.rebuild_squares();
    Ok(out)
}

/// Glues the source square to the target square by the affine maps induced
/// by the corner correspondence. Rejects maps that do not send the source
/// diagonal onto the target diagonal.
pub fn identify_squares(c: &CubeComplex, m: &SquareMap) -> Result<CubeComplex, BuildError> {
    for name in [&m.source, &m.target] {
        if !is_cyclic_square(name) {
            return Err(BuildError::NotCyclic(name.clone()));
        }
    }
    let src = c.squares[c.square_position(&m.source)?].clone();
    let dst = c.squares[c.square_position(&m.target)?].clone();
    if src.name == dst.name {
        return Err(BuildError::SameSquare);
    }
    let mut mapped = [m.image(src.diagonal.0), m.image(src.diagonal.1)];
    mapped.sort_unstable();
    if (mapped[0], mapped[1]) != dst.diagonal {
        return Err(BuildError::DiagonalMismatch {
            source_square: m.source.clone(),
            source_diag: format!("{}{}", src.diagonal.0, src.diagonal.1),
            mapped: format!("{}{}", mapped[0], mapped[1]),
            target_square: m.target.clone(),
            target_diag: format!("{}{}", dst.diagonal.0, dst.diagonal.1),
        });
    }
    let mut out = c.clone();
    for s in src.triangles {
        let mut image: Vec<char> = c.triangle_labels(s).into_iter().map(|x| m.image(x)).collect();
        image.sort_unstable();
        let d = *dst
            .triangles
            .iter()
            .find(|&&d| c.triangle_labels(d) == image)
            .expect("diagonal-compatible maps carry triangles to triangles");
        let perm = c.label_perm(s, d, |x| m.image(x));
        out.tri
            .join(s.tet, s.face, d.tet, perm)
            .expect("square triangles are free");
    }
    out.rebuild_squares();
    Ok(out)
}

/// `x101` together with the degree-four edge between the cube and the
/// layered tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X101 {
    pub tri: Triangulation,
    pub edge_e: TetEdge,
    pub complex: CubeComplex,
}

pub fn build_x101_with_edge() -> X101 {
    let mut c = layer_on_square(&five_tet_cube(), "ABCD").expect("ABCD is a boundary square");
    for m in x101_square_maps() {
        c = identify_squares(&c, &m).expect("x101 maps are diagonal compatible");
    }
    X101 {
        tri: c.tri.clone(),
        edge_e: c.layered_edges[0],
        complex: c,
    }
}

pub fn build_x101() -> Triangulation {
    build_x101_with_edge().tri
}

/// `x101` after a 4-4 move about its edge `e`; `choice` selects the new
/// octahedron axis.
pub fn build_x103(choice: u8) -> Result<Triangulation, BuildError> {
    let x = build_x101_with_edge();
    Ok(moves::move_44_at(&x.tri, x.edge_e, choice)?.tri)
}

/// Orientation double cover with its covering map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCover {
    pub tri: Triangulation,
    /// Tetrahedron of the base covered by each tetrahedron of the cover.
    /// Tetrahedra `t` and `t + n` both cover `t`, with identical vertex
    /// labels.
    pub projection: Vec<usize>,
}

/// The connected orientable double cover of a non-orientable triangulation.
pub fn double_cover(tri: &Triangulation) -> Result<DoubleCover, BuildError> {
    if !validate(tri).census_valid() {
        return Err(BuildError::NotValid);
    }
    if tri.is_orientable() {
        return Err(BuildError::AlreadyOrientable);
    }
    let n = tri.size();
    // Reference signs from a spanning tree; the sheets absorb the conflicts.
    let mut sign = vec![0i32; n];
    sign[0] = 1;
    let mut queue = VecDeque::from([0]);
    while let Some(t) = queue.pop_front() {
        for g in tri.table()[t].iter().flatten() {
            if sign[g.tet] == 0 {
                sign[g.tet] = -sign[t] * g.perm.sign();
                queue.push_back(g.tet);
            }
        }
    }
    let mut cover = Triangulation::with_tets(2 * n);
    for t in 0..n {
        for f in 0..4 {
            let g = tri.gluing(t, f).expect("closed");
            let coherent = sign[t] * sign[g.tet] * g.perm.sign() == -1;
            for sheet in 0..2 {
                let target_sheet = if coherent { sheet } else { 1 - sheet };
                let (a, b) = (t + sheet * n, g.tet + target_sheet * n);
                if cover.gluing(a, f).is_none() {
                    cover.join(a, f, b, g.perm).expect("lifted gluing is consistent");
                }
            }
        }
    }
    Ok(DoubleCover {
        tri: cover,
        projection: (0..2 * n).map(|t| t % n).collect(),
    })
}
