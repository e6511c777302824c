//! Cartan matrices, positive roots and the constants `c_α` for parabolic subgroups.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("unsupported root system {kind}{rank}")]
    Unsupported { kind: String, rank: usize },
    #[error("unknown root system type {0:?}")]
    UnknownType(String),
    #[error("simple root index {0} out of range")]
    BadRoot(usize),
}

pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    Torus,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootKind::A => "A",
            RootKind::B => "B",
            RootKind::C => "C",
            RootKind::D => "D",
            RootKind::E => "E",
            RootKind::F => "F",
            RootKind::G => "G",
            RootKind::Torus => "torus",
        };
        f.write_str(s)
    }
}

impl FromStr for RootKind {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => RootKind::A,
            "B" => RootKind::B,
            "C" => RootKind::C,
            "D" => RootKind::D,
            "E" => RootKind::E,
            "F" => RootKind::F,
            "G" => RootKind::G,
            "T" | "TORUS" => RootKind::Torus,
            _ => return Err(RootError::UnknownType(s.to_string())),
        })
    }
}

/// Root datum of a simply connected group, or of a torus of the given rank.
///
/// Weights are written in the fundamental-weight basis; for a torus the rank is
/// the lattice rank and there are no roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootKind,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(kind: RootKind, rank: usize) -> Result<Self, RootError> {
        let unsupported = || RootError::Unsupported { kind: kind.to_string(), rank };
        let ok = match kind {
            RootKind::Torus => true,
            RootKind::A => (1..=MAX_RANK).contains(&rank),
            RootKind::B | RootKind::C => (2..=MAX_RANK).contains(&rank),
            RootKind::D => (4..=MAX_RANK).contains(&rank),
            RootKind::E => (6..=8).contains(&rank),
            RootKind::F => rank == 4,
            RootKind::G => rank == 2,
        };
        if !ok {
            return Err(unsupported());
        }
        let cartan = if kind == RootKind::Torus { Vec::new() } else { cartan_matrix(kind, rank) };
        let positive = positive_roots(&cartan);
        Ok(RootSystem { kind, rank, cartan, positive })
    }

    pub fn torus(rank: usize) -> Self {
        RootSystem::new(RootKind::Torus, rank).expect("tori of any rank")
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the weight lattice.
    pub fn weight_dim(&self) -> usize {
        self.rank
    }

    pub fn simple_roots(&self) -> usize {
        self.cartan.len()
    }

    /// Entry `a_ij = ⟨α_i^∨, α_j⟩`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots as coefficient vectors over the simple roots.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// `⟨β, α_i^∨⟩` for a root `β` in simple-root coordinates.
    pub fn pair_coroot(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.cartan[i]).map(|(b, a)| b * a).sum()
    }

    /// `c_α = ⟨Σ β, α^∨⟩` over positive roots `β` that are not roots of the parabolic
    /// generated by `parabolic`, for each simple root outside it.
    pub fn c_values(&self, parabolic: &BTreeSet<usize>) -> Result<Vec<(usize, i64)>, RootError> {
        if let Some(&r) = parabolic.iter().find(|&&r| r >= self.simple_roots()) {
            return Err(RootError::BadRoot(r));
        }
        let mut sum = vec![0i64; self.simple_roots()];
        for beta in &self.positive {
            let in_levi = beta.iter().enumerate().all(|(j, &b)| b == 0 || parabolic.contains(&j));
            if !in_levi {
                for (s, b) in sum.iter_mut().zip(beta) {
                    *s += b;
                }
            }
        }
        Ok((0..self.simple_roots())
            .filter(|i| !parabolic.contains(i))
            .map(|i| (i, self.pair_coroot(&sum, i)))
            .collect())
    }
}

fn cartan_matrix(kind: RootKind, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind {
        RootKind::A | RootKind::B | RootKind::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        RootKind::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        RootKind::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        RootKind::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        RootKind::G => link(0, 1),
        RootKind::Torus => {}
    }
    match kind {
        RootKind::B => a[n - 1][n - 2] = -2,
        RootKind::C => a[n - 2][n - 1] = -2,
        RootKind::F => a[2][1] = -2,
        RootKind::G => a[0][1] = -3,
        _ => {}
    }
    a
}

/// Closure of the simple roots under simple reflections, keeping positive roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue = simple;
    let mut all = Vec::new();
    while let Some(beta) = queue.pop() {
        for (i, row) in cartan.iter().enumerate() {
            let pairing: i64 = beta.iter().zip(row).map(|(b, a)| b * a).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && known.insert(image.clone()) {
                queue.push(image);
            }
        }
        all.push(beta);
    }
    all.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    all
}
