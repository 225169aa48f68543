//! Permutations of the four vertex labels of a tetrahedron.

use std::fmt;

/// A bijection on `{0, 1, 2, 3}`, stored as its image tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4 {
    images: [u8; 4],
}

/// All 24 permutations in lexicographic order of their image tuples.
/// The position of a permutation in this table is its [`Perm4::index`].
pub const ALL_PERMS: [Perm4; 24] = build_table();

const fn build_table() -> [Perm4; 24] {
    let mut out = [Perm4 { images: [0, 1, 2, 3] }; 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[k] = Perm4 {
                            images: [a as u8, b as u8, c as u8, d as u8],
                        };
                        k += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { images: [0, 1, 2, 3] };

    /// Builds a permutation from its images, or `None` if they are not a
    /// bijection on `{0, 1, 2, 3}`.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4 { images })
    }

    /// Panicking constructor for literal tables.
    pub fn from_images(images: [u8; 4]) -> Self {
        Self::new(images).unwrap_or_else(|| panic!("{images:?} is not a permutation of 0..4"))
    }

    /// Transposition of `a` and `b`.
    pub fn swap(a: usize, b: usize) -> Self {
        let mut images = [0, 1, 2, 3];
        images.swap(a, b);
        Perm4 { images }
    }

    pub fn from_index(index: usize) -> Self {
        ALL_PERMS[index]
    }

    /// Index in [`ALL_PERMS`], in `0..24`.
    pub fn index(self) -> usize {
        let [a, b, c, _] = self.images.map(usize::from);
        // Lehmer code over the image tuple.
        let rank_b = b - usize::from(a < b);
        let rank_c = c - usize::from(a < c) - usize::from(b < c);
        a * 6 + rank_b * 2 + rank_c
    }

    #[inline]
    pub fn apply(self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4 {
            images: other.images.map(|x| self.images[x as usize]),
        }
    }

    pub fn inverse(self) -> Perm4 {
        let mut images = [0u8; 4];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Perm4 { images }
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(self) -> bool {
        self.sign() == 1
    }
}

impl Default for Perm4 {
    fn default() -> Self {
        Perm4::IDENTITY
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.images;
        write!(f, "{a}{b}{c}{d}")
    }
}
