//! Plain-text gluing tables.
//!
//! ```text
//! # comment
//! tets 2
//! 1:1302 1:2031 1:0321 1:2103
//! 0:1302 0:2031 0:0321 0:2103
//! ```
//!
//! After the `tets <n>` header come `n` lines, one per tetrahedron, each
//! with four tokens for faces 0..3. A token `t:abcd` glues the face to
//! tetrahedron `t` by the permutation sending labels 0,1,2,3 to `a,b,c,d`;
//! a token `-` leaves the face unglued. `#` starts a comment and blank lines
//! are ignored.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::iso::{decode, SigError};
use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

/// Prefix marking a signature where a file name is expected.
pub const SIG_PREFIX: &str = "sig:";

/// Lines and columns are 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing `tets <n>` header")]
    MissingHeader,
    #[error("line {line}, column {col}: bad header {text:?}, expected `tets <n>`")]
    BadHeader { line: usize, col: usize, text: String },
    #[error("line {line}, column {col}: malformed token {token:?}, expected `t:abcd` or `-`")]
    MalformedToken { line: usize, col: usize, token: String },
    #[error("line {line}, column {col}: tetrahedron {target} out of range (table has {tets})")]
    TetOutOfRange {
        line: usize,
        col: usize,
        target: usize,
        tets: usize,
    },
    #[error("line {line}, column {col}: {token:?} is not a permutation of 0123")]
    NotPermutation { line: usize, col: usize, token: String },
    #[error("line {line}: expected 4 face tokens, found {found}")]
    WrongFaceCount { line: usize, found: usize },
    #[error("expected {expected} tetrahedron lines, found {found}")]
    WrongTetCount { expected: usize, found: usize },
}

/// Content of a line with comments stripped, paired with its 1-based line
/// number, skipping blank lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn parse_token(token: &str, line: usize, col: usize, tets: usize) -> Result<Option<Gluing>, ParseError> {
    if token == "-" {
        return Ok(None);
    }
    let malformed = || ParseError::MalformedToken {
        line,
        col,
        token: token.to_string(),
    };
    let (target, perm) = token.split_once(':').ok_or_else(malformed)?;
    if target.is_empty() || !target.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    if perm.len() != 4 || !perm.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let target: usize = target.parse().map_err(|_| malformed())?;
    if target >= tets {
        return Err(ParseError::TetOutOfRange {
            line,
            col,
            target,
            tets,
        });
    }
    let digits: Vec<u8> = perm.bytes().map(|b| b - b'0').collect();
    let perm = Perm4::new([digits[0], digits[1], digits[2], digits[3]]).ok_or_else(|| ParseError::NotPermutation {
        line,
        col: col + target.to_string().len() + 1,
        token: perm.to_string(),
    })?;
    Ok(Some(Gluing { tet: target, perm }))
}

/// Parses a gluing table. Consistency of the gluings is not checked here.
pub fn parse(text: &str) -> Result<Triangulation, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let htoks = tokens(header);
    let bad_header = || ParseError::BadHeader {
        line: hline,
        col: htoks.first().map_or(1, |t| t.0),
        text: header.trim().to_string(),
    };
    let n: usize = match htoks.as_slice() {
        [(_, "tets"), (_, n)] if n.bytes().all(|b| b.is_ascii_digit()) => n.parse().map_err(|_| bad_header())?,
        _ => return Err(bad_header()),
    };

    let mut table = Vec::with_capacity(n);
    let mut found = 0;
    for (line, body) in lines {
        found += 1;
        if found > n {
            continue;
        }
        let toks = tokens(body);
        if toks.len() != 4 {
            return Err(ParseError::WrongFaceCount {
                line,
                found: toks.len(),
            });
        }
        let mut row = [None; 4];
        for (slot, &(col, tok)) in row.iter_mut().zip(&toks) {
            *slot = parse_token(tok, line, col, n)?;
        }
        table.push(row);
    }
    if found != n {
        return Err(ParseError::WrongTetCount { expected: n, found });
    }
    Ok(Triangulation::from_table(table))
}

pub fn serialize(tri: &Triangulation) -> String {
    let mut out = format!("tets {}\n", tri.size());
    for row in tri.table() {
        let toks: Vec<String> = row
            .iter()
            .map(|g| match g {
                Some(g) => format!("{}:{}", g.tet, g.perm),
                None => "-".to_string(),
            })
            .collect();
        writeln!(out, "{}", toks.join(" ")).expect("writing to a string");
    }
    out
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error("{path}: {cause}")]
    Parse { path: String, cause: ParseError },
    #[error("{token}: {cause}")]
    Signature { token: String, cause: SigError },
}

/// Loads a triangulation from a file, from standard input (`-`), or from
/// an inline signature (`sig:<signature>`).
pub fn load(arg: &str) -> Result<Triangulation, LoadError> {
    if let Some(sig) = arg.strip_prefix(SIG_PREFIX) {
        return decode(sig).map_err(|cause| LoadError::Signature {
            token: arg.to_string(),
            cause,
        });
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|cause| LoadError::Io {
            path: "<stdin>".to_string(),
            cause,
        })?;
        s
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|cause| LoadError::Io {
            path: arg.to_string(),
            cause,
        })?
    };
    parse(&text).map_err(|cause| LoadError::Parse {
        path: if arg == "-" {
            "<stdin>".to_string()
        } else {
            arg.to_string()
        },
        cause,
    })
}
