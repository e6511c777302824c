//! H-polyhedra `{x : A x >= b}`: vertices, face lattice, facets and normal cones.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Rat, RatMat, RatVec};
use crate::linalg;
use crate::lp::{self, LinearSystem, LpOutcome, Sense};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("rhs has {found} entries for {expected} rows")]
    Shape { expected: usize, found: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Affine chart `t ↦ origin + Σ t_j basis_j` hosting intrinsic coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFrame {
    pub origin: RatVec,
    pub basis: Vec<RatVec>,
}

impl AffineFrame {
    pub fn identity(n: usize) -> Self {
        AffineFrame { origin: RatVec::zeros(n), basis: (0..n).map(|i| RatVec::unit(n, i)).collect() }
    }

    pub fn to_ambient(&self, t: &RatVec) -> RatVec {
        let mut x = self.origin.clone();
        for (ti, b) in t.iter().zip(&self.basis) {
            if !ti.is_zero() {
                x = x.add(&b.scale(ti));
            }
        }
        x
    }

    /// Applies `self` after `inner`, both as affine maps.
    pub fn compose(&self, inner: &AffineFrame) -> AffineFrame {
        let origin = self.to_ambient(&inner.origin);
        let basis = inner
            .basis
            .iter()
            .map(|b| {
                let mut x = RatVec::zeros(self.origin.len());
                for (bi, e) in b.iter().zip(&self.basis) {
                    if !bi.is_zero() {
                        x = x.add(&e.scale(bi));
                    }
                }
                x
            })
            .collect();
        AffineFrame { origin, basis }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolyhedron {
    a: RatMat,
    b: RatVec,
    frame: Option<AffineFrame>,
}

/// A face recorded by its maximal set of tight rows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceRecord {
    pub active: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub point: RatVec,
    pub active: Vec<usize>,
}

/// A facet with the rows that cut it out and the primitive inward normal of the first one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub active: Vec<usize>,
    pub rows: Vec<usize>,
    pub normal: RatVec,
}

/// Set of maximal active sets of all nonempty faces, plus touched walls.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct CombinatorialType {
    pub faces: BTreeSet<Vec<usize>>,
    pub walls: BTreeSet<usize>,
}

impl HPolyhedron {
    pub fn new(a: RatMat, b: RatVec) -> Result<Self, PolytopeError> {
        if a.nrows() != b.len() {
            return Err(PolytopeError::Shape { expected: a.nrows(), found: b.len() });
        }
        Ok(HPolyhedron { a, b, frame: None })
    }

    pub fn with_frame(mut self, frame: AffineFrame) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn a(&self) -> &RatMat {
        &self.a
    }

    pub fn b(&self) -> &RatVec {
        &self.b
    }

    pub fn frame(&self) -> Option<&AffineFrame> {
        self.frame.as_ref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn to_ambient(&self, x: &RatVec) -> RatVec {
        match &self.frame {
            Some(f) => f.to_ambient(x),
            None => x.clone(),
        }
    }

    pub fn slack(&self, i: usize, x: &RatVec) -> Rat {
        self.a.row_vec(i).dot(x) - &self.b[i]
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        (0..self.nrows()).all(|i| !self.slack(i, x).is_negative())
    }

    pub fn active_set(&self, x: &RatVec) -> Vec<usize> {
        (0..self.nrows()).filter(|&i| self.slack(i, x).is_zero()).collect()
    }

    pub fn system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.ambient_dim());
        for i in 0..self.nrows() {
            sys.ge(self.a.row_vec(i), self.b[i].clone());
        }
        sys
    }

    pub fn is_empty(&self) -> bool {
        lp::feasible_point(&self.system()).is_none()
    }

    /// `min_{x in P} c·x`, `None` when empty or unbounded below.
    pub fn minimize(&self, c: &RatVec) -> Option<Rat> {
        lp::lp_extremize(&self.system(), c, Sense::Minimize).value().cloned()
    }

    /// True when the recession cone `{A d >= 0}` is trivial.
    pub fn recession_cone_trivial(&self) -> bool {
        let n = self.ambient_dim();
        let mut cone = LinearSystem::new(n);
        for i in 0..self.nrows() {
            cone.ge(self.a.row_vec(i), Rat::zero());
        }
        (0..n).all(|j| {
            [Sense::Maximize, Sense::Minimize]
                .iter()
                .all(|&s| matches!(lp::lp_extremize(&cone, &RatVec::unit(n, j), s), LpOutcome::Optimal { .. }))
        })
    }

    /// Vertices sorted lexicographically; errors if the polyhedron is nonempty and unbounded.
    pub fn vertices(&self) -> Result<Vec<Vertex>, PolytopeError> {
        if !self.recession_cone_trivial() {
            if self.is_empty() {
                return Ok(Vec::new());
            }
            return Err(PolytopeError::Unbounded);
        }
        Ok(self.vertices_of_bounded())
    }

    /// Vertex enumeration for a polyhedron already known to be bounded.
    pub fn vertices_of_bounded(&self) -> Vec<Vertex> {
        let n = self.ambient_dim();
        let m = self.nrows();
        let mut found: BTreeMap<RatVec, Vec<usize>> = BTreeMap::new();
        if n == 0 {
            let p = RatVec::zeros(0);
            if self.contains(&p) {
                found.insert(p.clone(), self.active_set(&p));
            }
        }
        for subset in (0..m).combinations(n).filter(|_| n > 0) {
            let sub = self.a.select_rows(&subset);
            let rhs: RatVec = subset.iter().map(|&i| self.b[i].clone()).collect();
            let Some(x) = linalg::solve_square(&sub, &rhs) else { continue };
            if found.contains_key(&x) || !self.contains(&x) {
                continue;
            }
            let act = self.active_set(&x);
            found.insert(x, act);
        }
        found.into_iter().map(|(point, active)| Vertex { point, active }).collect()
    }

    fn face_dim(&self, active: &[usize]) -> usize {
        self.ambient_dim() - self.a.select_rows(active).rank()
    }

    /// All nonempty faces; the maximal active sets are closed under intersection.
    pub fn faces_from(&self, vertices: &[Vertex]) -> Vec<FaceRecord> {
        let mut sets: BTreeSet<Vec<usize>> = vertices.iter().map(|v| v.active.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
        while !frontier.is_empty() {
            let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
            let mut next = Vec::new();
            for f in &frontier {
                for g in &current {
                    let meet: Vec<usize> = f.iter().filter(|i| g.contains(i)).copied().collect();
                    if sets.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        sets.into_iter()
            .map(|active| {
                let dim = self.face_dim(&active);
                FaceRecord { active, dim }
            })
            .collect()
    }

    pub fn faces(&self) -> Result<Vec<FaceRecord>, PolytopeError> {
        let v = self.vertices()?;
        Ok(self.faces_from(&v))
    }

    /// Dimension of a nonempty bounded polytope given its vertices.
    pub fn dimension_from(&self, vertices: &[Vertex]) -> Option<usize> {
        let common = intersect_all(vertices.iter().map(|v| v.active.as_slice()))?;
        Some(self.face_dim(&common))
    }

    pub fn dimension(&self) -> Result<Option<usize>, PolytopeError> {
        let v = self.vertices()?;
        Ok(self.dimension_from(&v))
    }

    pub fn combinatorial_type_from(&self, vertices: &[Vertex], walls: &[usize]) -> CombinatorialType {
        let faces: BTreeSet<Vec<usize>> = self.faces_from(vertices).into_iter().map(|f| f.active).collect();
        let walls = walls
            .iter()
            .copied()
            .filter(|w| vertices.iter().any(|v| v.active.contains(w)))
            .collect();
        CombinatorialType { faces, walls }
    }

    pub fn combinatorial_type(&self, walls: &[usize]) -> Result<CombinatorialType, PolytopeError> {
        let v = self.vertices()?;
        Ok(self.combinatorial_type_from(&v, walls))
    }

    pub fn facets_from(&self, vertices: &[Vertex]) -> Vec<Facet> {
        let Some(d) = self.dimension_from(vertices) else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let implicit = intersect_all(vertices.iter().map(|v| v.active.as_slice())).unwrap_or_default();
        self.faces_from(vertices)
            .into_iter()
            .filter(|f| f.dim + 1 == d)
            .map(|f| {
                let rows: Vec<usize> = f.active.iter().copied().filter(|i| !implicit.contains(i)).collect();
                let normal = self.a.row_vec(rows[0]).primitive();
                Facet { active: f.active, rows, normal }
            })
            .collect()
    }

    pub fn facets(&self) -> Result<Vec<Facet>, PolytopeError> {
        let v = self.vertices()?;
        Ok(self.facets_from(&v))
    }

    /// Every vertex lies on exactly `dim` geometrically distinct facets.
    pub fn is_simple_from(&self, vertices: &[Vertex]) -> bool {
        let Some(d) = self.dimension_from(vertices) else {
            return true;
        };
        let facets = self.facets_from(vertices);
        vertices.iter().all(|v| facets.iter().filter(|f| is_subset(&f.active, &v.active)).count() == d)
    }

    pub fn is_simple(&self) -> Result<bool, PolytopeError> {
        let v = self.vertices()?;
        Ok(self.is_simple_from(&v))
    }

    /// Primitive inward normals of the facets through a vertex, sorted and deduplicated.
    pub fn normal_cone_from(&self, vertices: &[Vertex], vertex: &Vertex) -> Vec<RatVec> {
        let normals: BTreeSet<RatVec> = self
            .facets_from(vertices)
            .into_iter()
            .filter(|f| is_subset(&f.active, &vertex.active))
            .map(|f| f.normal)
            .collect();
        normals.into_iter().collect()
    }

    pub fn normal_cone(&self, point: &RatVec) -> Result<Vec<RatVec>, PolytopeError> {
        let vs = self.vertices()?;
        let v = vs.iter().find(|v| &v.point == point).cloned().unwrap_or(Vertex {
            point: point.clone(),
            active: self.active_set(point),
        });
        Ok(self.normal_cone_from(&vs, &v))
    }
}

pub fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|i| big.contains(i))
}

fn intersect_all<'a>(mut sets: impl Iterator<Item = &'a [usize]>) -> Option<Vec<usize>> {
    let first = sets.next()?.to_vec();
    Some(sets.fold(first, |acc, s| acc.into_iter().filter(|i| s.contains(i)).collect()))
}

impl CombinatorialType {
    /// Relabels local row indices through `map`.
    pub fn relabel(&self, map: &[usize]) -> CombinatorialType {
        CombinatorialType {
            faces: self
                .faces
                .iter()
                .map(|f| {
                    let mut g: Vec<usize> = f.iter().map(|&i| map[i]).collect();
                    g.sort_unstable();
                    g
                })
                .collect(),
            walls: self.walls.iter().map(|&i| map[i]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> HPolyhedron {
        let a = RatMat::from_int_rows(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        HPolyhedron::new(a, RatVec::from_ints(&[0, 0, -1, -1])).unwrap()
    }

    #[test]
    fn square_faces() {
        let p = square();
        let v = p.vertices().unwrap();
        assert_eq!(v.len(), 4);
        let faces = p.faces().unwrap();
        assert_eq!(faces.len(), 9);
        assert_eq!(p.facets().unwrap().len(), 4);
        assert!(p.is_simple().unwrap());
    }

    #[test]
    fn unbounded_and_empty() {
        let a = RatMat::from_int_rows(2, &[&[1, 0], &[0, 1]]);
        let p = HPolyhedron::new(a.clone(), RatVec::from_ints(&[0, 0])).unwrap();
        assert_eq!(p.vertices(), Err(PolytopeError::Unbounded));
        let a = RatMat::from_int_rows(1, &[&[1], &[-1]]);
        let p = HPolyhedron::new(a, RatVec::from_ints(&[1, 0])).unwrap();
        assert!(p.vertices().unwrap().is_empty());
    }

    #[test]
    fn segment_in_plane() {
        let a = RatMat::from_int_rows(2, &[&[0, 1], &[0, -1], &[1, 0], &[-1, 0]]);
        let p = HPolyhedron::new(a, RatVec::from_ints(&[0, 0, 0, -2])).unwrap();
        assert_eq!(p.dimension().unwrap(), Some(1));
        let f = p.facets().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].rows.len(), 1);
    }
}
