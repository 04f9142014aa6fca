//! Square-tiled translation surfaces.
//!
//! A surface with `b` unit squares is described by two permutations of
//! `{0, …, b−1}`: `right[s]` is the square entered when leaving `s` through
//! its right edge, `top[s]` the square entered through its top edge.
//! Vertical edge `i` is the left edge of square `i`, so the right edge of
//! `s` is vertical edge `right[s]`.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolysquareSurface {
    squares: usize,
    right: Vec<usize>,
    top: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSquares,
    WrongLength { glue: &'static str, len: usize },
    NotPermutation { glue: &'static str },
    Disconnected { reachable: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NoSquares => write!(f, "surface has no squares"),
            Violation::WrongLength { glue, len } => {
                write!(f, "{glue} gluing has {len} entries")
            }
            Violation::NotPermutation { glue } => write!(f, "{glue} gluing is not a permutation"),
            Violation::Disconnected { reachable } => {
                write!(f, "only {reachable} squares reachable from square 0")
            }
        }
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    true
}

impl PolysquareSurface {
    pub fn new(right: Vec<usize>, top: Vec<usize>) -> Result<Self> {
        let s = Self::new_unchecked(right.len(), right, top);
        let violations = s.validate();
        if let Some(v) = violations.first() {
            return Err(Error::InvariantViolation(v.to_string()));
        }
        Ok(s)
    }

    /// Builds without checking; see [`PolysquareSurface::validate`].
    pub fn new_unchecked(squares: usize, right: Vec<usize>, top: Vec<usize>) -> Self {
        Self { squares, right, top }
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Self::new(vec![0], vec![0]).expect("valid fixture")
    }

    /// Three squares in an L: 0 and 1 side by side, 2 on top of 0.
    pub fn l3() -> Self {
        Self::new(vec![1, 0, 2], vec![2, 1, 0]).expect("valid fixture")
    }

    /// Named fixtures: `torus`, `L3`.
    pub fn fixture(name: &str) -> Option<Self> {
        match name {
            "torus" => Some(Self::torus()),
            "L3" | "l3" => Some(Self::l3()),
            _ => None,
        }
    }

    pub fn squares(&self) -> usize {
        self.squares
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    /// Empty iff both gluings are permutations of the right size and they
    /// generate a transitive action.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.squares == 0 {
            out.push(Violation::NoSquares);
            return out;
        }
        let mut shape_ok = true;
        for (glue, p) in [("right", &self.right), ("top", &self.top)] {
            if p.len() != self.squares {
                out.push(Violation::WrongLength { glue, len: p.len() });
                shape_ok = false;
            } else if !is_permutation(p) {
                out.push(Violation::NotPermutation { glue });
                shape_ok = false;
            }
        }
        if shape_ok {
            let reachable = self.reachable_from(0);
            if reachable < self.squares {
                out.push(Violation::Disconnected { reachable });
            }
        }
        out
    }

    // Forward images suffice: the orbit of a finite permutation group
    // equals the forward-reachable set.
    fn reachable_from(&self, start: usize) -> usize {
        let mut seen = vec![false; self.squares];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 1;
        while let Some(s) = queue.pop_front() {
            for next in [self.right[s], self.top[s]] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    queue.push_back(next);
                }
            }
        }
        count
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self =
            serde_json::from_str(text).map_err(|e| Error::MalformedFile(e.to_string()))?;
        if let Some(v) = s.validate().first() {
            return Err(Error::InvariantViolation(v.to_string()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::MalformedFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::MalformedFile(format!("{}: {e}", path.display())))
    }
}
