//! Combinatorial isomorphism and canonical signatures.
//!
//! A labelling of a connected triangulation is fixed by choosing a starting
//! tetrahedron and a relabelling of its vertices; everything else follows by
//! breadth-first traversal, numbering tetrahedra in order of discovery and
//! labelling each newly reached tetrahedron so that the gluing it was
//! reached through reads as the identity. Each labelling yields an integer
//! code; the least code over all `24n` starts is canonical.
//!
//! # Signature format
//!
//! Digits are base 64 over the alphabet `a-z A-Z 0-9 + -` (values 0..63).
//! A signature is
//!
//! ```text
//! w  N  (T P){4N}
//! ```
//!
//! where `w` is one digit giving the width of tetrahedron indices, `N` is
//! the tetrahedron count in `w` digits (most significant first), and each of
//! the `4N` face entries, taken tetrahedron by tetrahedron and face by face
//! in canonical labels, is the target tetrahedron in `w` digits followed by
//! one digit holding the gluing permutation's index in
//! [`ALL_PERMS`](crate::perm::ALL_PERMS).

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{Perm4, ALL_PERMS};
use crate::triangulation::{Gluing, Triangulation};

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigError {
    #[error("triangulation is empty")]
    Empty,
    #[error("triangulation is disconnected")]
    Disconnected,
    #[error("triangulation has unglued faces")]
    NotClosed,
    #[error("gluing table is not an involution")]
    NotInvolutive,
    #[error("invalid signature character {0:?}")]
    BadChar(char),
    #[error("signature has wrong length: expected {expected}, got {found}")]
    BadLength { expected: usize, found: usize },
    #[error("signature entry {0} is out of range")]
    BadEntry(usize),
    #[error("signature does not describe a consistent gluing table")]
    Inconsistent,
}

/// A canonical, relabelling-invariant string for a closed connected
/// triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoSig(String);

impl IsoSig {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Wraps a string without checking it; see [`decode`] for validation.
    pub fn from_string(s: impl Into<String>) -> Self {
        IsoSig(s.into())
    }
}

impl fmt::Display for IsoSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A combinatorial isomorphism: tetrahedron `t` goes to `tet_map[t]` with
/// its vertices relabelled by `perms[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub tet_map: Vec<usize>,
    pub perms: Vec<Perm4>,
}

impl Isomorphism {
    pub fn identity(n: usize) -> Self {
        Isomorphism {
            tet_map: (0..n).collect(),
            perms: vec![Perm4::IDENTITY; n],
        }
    }

    /// Transports a gluing table along the isomorphism.
    pub fn apply(&self, tri: &Triangulation) -> Triangulation {
        let n = tri.size();
        let mut table = vec![[None; 4]; n];
        for t in 0..n {
            let tau = self.perms[t];
            for f in 0..4 {
                if let Some(g) = tri.gluing(t, f) {
                    let perm = self.perms[g.tet].compose(g.perm).compose(tau.inverse());
                    table[self.tet_map[t]][tau.apply(f)] = Some(Gluing {
                        tet: self.tet_map[g.tet],
                        perm,
                    });
                }
            }
        }
        Triangulation::from_table(table)
    }

    pub fn inverse(&self) -> Isomorphism {
        let n = self.tet_map.len();
        let mut tet_map = vec![0; n];
        let mut perms = vec![Perm4::IDENTITY; n];
        for t in 0..n {
            tet_map[self.tet_map[t]] = t;
            perms[self.tet_map[t]] = self.perms[t].inverse();
        }
        Isomorphism { tet_map, perms }
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Isomorphism) -> Isomorphism {
        let n = self.tet_map.len();
        Isomorphism {
            tet_map: (0..n).map(|t| other.tet_map[self.tet_map[t]]).collect(),
            perms: (0..n)
                .map(|t| other.perms[self.tet_map[t]].compose(self.perms[t]))
                .collect(),
        }
    }

    /// Checks that this maps `a`'s gluing table exactly onto `b`'s.
    pub fn is_witness(&self, a: &Triangulation, b: &Triangulation) -> bool {
        let n = a.size();
        if b.size() != n || self.tet_map.len() != n || self.perms.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &t in &self.tet_map {
            if t >= n || seen[t] {
                return false;
            }
            seen[t] = true;
        }
        self.apply(a) == *b
    }
}

/// One candidate labelling and its code.
struct Labelling {
    code: Vec<u32>,
    /// Old tetrahedron at each new index.
    order: Vec<usize>,
    /// Old labels → new labels, per old tetrahedron.
    relabel: Vec<Perm4>,
}

impl Labelling {
    /// The isomorphism from the original triangulation to its relabelled
    /// form.
    fn to_isomorphism(&self) -> Isomorphism {
        let n = self.order.len();
        let mut tet_map = vec![0; n];
        for (new, &old) in self.order.iter().enumerate() {
            tet_map[old] = new;
        }
        Isomorphism {
            tet_map,
            perms: self.relabel.clone(),
        }
    }
}

/// Runs the traversal from `(start, perm)`. The code starts with the
/// tetrahedron count; an unglued face is coded with target `n`. Gives up
/// with `None` as soon as the partial code exceeds `best`.
fn label_from(tri: &Triangulation, start: usize, perm: Perm4, best: Option<&[u32]>) -> Option<Labelling> {
    let n = tri.size();
    let mut new_index = vec![usize::MAX; n];
    let mut relabel = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(n);
    let mut code = Vec::with_capacity(1 + 8 * n);
    let mut tight = best.is_some();

    let mut push = |code: &mut Vec<u32>, x: u32| -> bool {
        code.push(x);
        if tight {
            let b = best.unwrap()[code.len() - 1];
            match x.cmp(&b) {
                Ordering::Greater => return false,
                Ordering::Less => tight = false,
                Ordering::Equal => {}
            }
        }
        true
    };

    if !push(&mut code, n as u32) {
        return None;
    }
    new_index[start] = 0;
    relabel[start] = perm;
    order.push(start);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        let rho = relabel[t];
        let rho_inv = rho.inverse();
        for j in 0..4 {
            let f = rho_inv.apply(j);
            let (target, q) = match tri.gluing(t, f) {
                None => (n as u32, 0),
                Some(g) => {
                    if new_index[g.tet] == usize::MAX {
                        new_index[g.tet] = order.len();
                        relabel[g.tet] = rho.compose(g.perm.inverse());
                        order.push(g.tet);
                        queue.push_back(g.tet);
                    }
                    let q = relabel[g.tet].compose(g.perm).compose(rho_inv);
                    (new_index[g.tet] as u32, q.index() as u32)
                }
            };
            if !push(&mut code, target) || !push(&mut code, q) {
                return None;
            }
        }
    }
    if order.len() != n {
        return None;
    }
    Some(Labelling { code, order, relabel })
}

/// The least-code labelling of a connected triangulation. Unglued faces are
/// allowed here.
fn canonical_labelling(tri: &Triangulation) -> Result<Labelling, SigError> {
    if tri.is_empty() {
        return Err(SigError::Empty);
    }
    if !tri.is_involutive() {
        return Err(SigError::NotInvolutive);
    }
    if !tri.is_connected() {
        return Err(SigError::Disconnected);
    }
    let mut best: Option<Labelling> = None;
    for start in 0..tri.size() {
        for perm in ALL_PERMS {
            let bound = best.as_ref().map(|b| b.code.as_slice());
            if let Some(cand) = label_from(tri, start, perm, bound) {
                if best.as_ref().is_none_or(|b| cand.code < b.code) {
                    best = Some(cand);
                }
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// The isomorphism taking `tri` to its canonical relabelling.
pub fn canonical_isomorphism(tri: &Triangulation) -> Result<Isomorphism, SigError> {
    Ok(canonical_labelling(tri)?.to_isomorphism())
}

fn push_digits(out: &mut String, mut x: usize, width: usize) {
    let mut digits = vec![0u8; width];
    for d in digits.iter_mut().rev() {
        *d = ALPHABET[x % 64];
        x /= 64;
    }
    out.extend(digits.iter().map(|&b| b as char));
}

fn width_for(n: usize) -> usize {
    let mut w = 1;
    let mut cap = 64;
    while n >= cap {
        w += 1;
        cap *= 64;
    }
    w
}

/// Canonical signature of a closed connected triangulation.
pub fn canonical_signature(tri: &Triangulation) -> Result<IsoSig, SigError> {
    Ok(signature_and_isomorphism(tri)?.0)
}

/// Canonical signature together with the isomorphism from `tri` onto the
/// triangulation the signature decodes to.
pub fn signature_and_isomorphism(tri: &Triangulation) -> Result<(IsoSig, Isomorphism), SigError> {
    if !tri.is_closed() {
        return Err(SigError::NotClosed);
    }
    let lab = canonical_labelling(tri)?;
    let n = tri.size();
    let w = width_for(n);
    let mut s = String::with_capacity(1 + w + 4 * n * (w + 1));
    push_digits(&mut s, w, 1);
    push_digits(&mut s, n, w);
    for pair in lab.code[1..].chunks(2) {
        push_digits(&mut s, pair[0] as usize, w);
        push_digits(&mut s, pair[1] as usize, 1);
    }
    Ok((IsoSig(s), lab.to_isomorphism()))
}

fn digit(c: char) -> Result<usize, SigError> {
    ALPHABET
        .iter()
        .position(|&b| b as char == c)
        .ok_or(SigError::BadChar(c))
}

/// Rebuilds the canonically labelled triangulation from a signature.
pub fn decode(sig: &str) -> Result<Triangulation, SigError> {
    let chars: Vec<char> = sig.chars().collect();
    let read = |from: usize, len: usize| -> Result<usize, SigError> {
        let mut x = 0usize;
        for &c in chars.get(from..from + len).ok_or(SigError::BadLength {
            expected: from + len,
            found: chars.len(),
        })? {
            x = x.checked_mul(64).ok_or(SigError::BadEntry(from))? + digit(c)?;
        }
        Ok(x)
    };
    let w = read(0, 1)?;
    if w == 0 {
        return Err(SigError::BadEntry(0));
    }
    let n = read(1, w)?;
    if n == 0 {
        return Err(SigError::Empty);
    }
    let expected = 1 + w + 4 * n * (w + 1);
    if chars.len() != expected {
        return Err(SigError::BadLength {
            expected,
            found: chars.len(),
        });
    }
    let mut table = vec![[None; 4]; n];
    let mut pos = 1 + w;
    for (t, faces) in table.iter_mut().enumerate() {
        for slot in faces.iter_mut() {
            let target = read(pos, w)?;
            let p = read(pos + w, 1)?;
            if target >= n {
                return Err(SigError::BadEntry(4 * t));
            }
            if p >= 24 {
                return Err(SigError::BadEntry(4 * t));
            }
            *slot = Some(Gluing {
                tet: target,
                perm: Perm4::from_index(p),
            });
            pos += w + 1;
        }
    }
    let tri = Triangulation::from_table(table);
    if !tri.is_involutive() {
        return Err(SigError::Inconsistent);
    }
    Ok(tri)
}

/// A witness isomorphism from `a` to `b`, if one exists.
pub fn are_isomorphic(a: &Triangulation, b: &Triangulation) -> Option<Isomorphism> {
    if a.size() != b.size() {
        return None;
    }
    let la = canonical_labelling(a).ok()?;
    let lb = canonical_labelling(b).ok()?;
    if la.code != lb.code {
        return None;
    }
    Some(la.to_isomorphism().then(&lb.to_isomorphism().inverse()))
}

/// A pseudorandom isomorphism on `n` tetrahedra, deterministic in `seed`.
pub fn random_isomorphism(n: usize, seed: u64) -> Isomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tet_map: Vec<usize> = (0..n).collect();
    tet_map.shuffle(&mut rng);
    let perms = (0..n).map(|_| ALL_PERMS[rng.gen_range(0..24)]).collect();
    Isomorphism { tet_map, perms }
}

/// Applies [`random_isomorphism`] for `seed`.
pub fn relabel(tri: &Triangulation, seed: u64) -> Triangulation {
    random_isomorphism(tri.size(), seed).apply(tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{figure_eight, gieseking};

    #[test]
    fn digits_round_trip() {
        let mut s = String::new();
        push_digits(&mut s, 4095, 2);
        assert_eq!(s, "--");
        assert_eq!(width_for(63), 1);
        assert_eq!(width_for(64), 2);
    }

    #[test]
    fn gieseking_signature_is_stable() {
        let sig = canonical_signature(&gieseking()).unwrap();
        assert_eq!(sig.as_str().len(), 1 + 1 + 4 * 2);
        for seed in 0..10 {
            assert_eq!(canonical_signature(&relabel(&gieseking(), seed)).unwrap(), sig);
        }
    }

    #[test]
    fn decode_gives_canonical_form() {
        let tri = figure_eight();
        let (sig, iso) = signature_and_isomorphism(&tri).unwrap();
        let decoded = decode(sig.as_str()).unwrap();
        assert!(iso.is_witness(&tri, &decoded));
        assert_eq!(canonical_signature(&decoded).unwrap(), sig);
    }

    #[test]
    fn rejects_boundary_and_garbage() {
        assert_eq!(
            canonical_signature(&Triangulation::with_tets(1)),
            Err(SigError::NotClosed)
        );
        assert_eq!(canonical_signature(&Triangulation::default()), Err(SigError::Empty));
        assert!(matches!(decode("b"), Err(SigError::BadLength { .. })));
        assert!(matches!(decode("b*"), Err(SigError::BadChar('*'))));
        assert!(decode("").is_err());
    }

    #[test]
    fn isomorphism_algebra() {
        let tri = crate::builders::build_x101();
        let s = random_isomorphism(6, 3);
        let t = random_isomorphism(6, 4);
        assert_eq!(s.then(&t).apply(&tri), t.apply(&s.apply(&tri)));
        assert_eq!(s.then(&s.inverse()), Isomorphism::identity(6));
    }
}
