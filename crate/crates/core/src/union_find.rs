//! Disjoint sets with an optional Z/2 label on every element relative to its
//! root. The label records whether two identified tetrahedron edges run in
//! the same direction, which is what makes reversed self-identifications
//! detectable.

#[derive(Clone, Debug)]
pub(crate) struct ParityUnionFind {
    parent: Vec<usize>,
    // parity of the element relative to its parent
    parity: Vec<bool>,
    rank: Vec<u8>,
    // per root: a union closed a cycle with odd parity
    conflict: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
            rank: vec![0; n],
            conflict: vec![false; n],
        }
    }

    /// Returns `(root, parity of x relative to root)`.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Identifies `a` and `b`, where `reversed` says their labels differ.
    pub fn union(&mut self, a: usize, b: usize, reversed: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != reversed {
                self.conflict[ra] = true;
            }
            return;
        }
        let (big, small) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.parity[small] = pa ^ pb ^ reversed;
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
        self.conflict[big] |= self.conflict[small];
    }

    pub fn has_conflict(&mut self, x: usize) -> bool {
        let (r, _) = self.find(x);
        self.conflict[r]
    }

    /// Groups elements by class, classes ordered by their smallest member and
    /// members in increasing order. Returns the groups and the class index of
    /// every element.
    pub fn classes(&mut self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut class_of = vec![0; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let (r, _) = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = groups.len();
                groups.push(Vec::new());
            }
            class_of[x] = class_of_root[r];
            groups[class_of_root[r]].push(x);
        }
        (groups, class_of)
    }
}
