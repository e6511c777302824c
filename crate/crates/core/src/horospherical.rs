//! Horospherical homogeneous spaces, colored fans, polarized embeddings and the
//! polytope-side tests for morphisms, curves and singularities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Rat, RatMat, RatVec};
use crate::linalg;
use crate::lp::{self, LinearSystem};
use crate::polytope::{is_subset, CombinatorialType, FaceRecord, Facet, HPolyhedron, PolytopeError, Vertex};
use crate::roots::{RootError, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoroError {
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("invalid lattice basis: {0}")]
    Basis(String),
    #[error("invalid colored fan: {0}")]
    Fan(String),
    #[error("invalid divisor: {0}")]
    Divisor(String),
    #[error("divisor not ample: {0}")]
    NotAmple(String),
    #[error("not Q-Gorenstein: no solution of A_I y = C_I at vertex {0}")]
    NotQGorenstein(String),
    #[error("unknown simple root {0:?}")]
    UnknownRoot(String),
    #[error("simple root {0} lies in the parabolic subset")]
    RootInParabolic(String),
}

/// Combinatorial data of `G/H`: root system, parabolic subset `R` and the lattice `M`.
///
/// `m_basis` vectors are written in fundamental-weight coordinates (standard
/// coordinates for a torus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoroSpace {
    roots: RootSystem,
    parabolic: BTreeSet<usize>,
    m_basis: Vec<RatVec>,
    names: Vec<String>,
}

impl HoroSpace {
    pub fn new(
        roots: RootSystem,
        parabolic: BTreeSet<usize>,
        m_basis: Vec<RatVec>,
        names: Option<Vec<String>>,
    ) -> Result<Self, HoroError> {
        let s = roots.simple_roots();
        let names = match names {
            Some(n) if n.len() == s => n,
            Some(n) => return Err(HoroError::Basis(format!("{} root names given for {s} simple roots", n.len()))),
            None => (1..=s).map(|i| format!("a{i}")).collect(),
        };
        if let Some(&r) = parabolic.iter().find(|&&r| r >= s) {
            return Err(RootError::BadRoot(r).into());
        }
        let w = roots.weight_dim();
        for (k, b) in m_basis.iter().enumerate() {
            if b.len() != w {
                return Err(HoroError::Basis(format!("basis vector {k} has length {}, expected {w}", b.len())));
            }
            if !b.iter().all(Rat::is_integer) {
                return Err(HoroError::Basis(format!("basis vector {k} = {b} is not integral")));
            }
            if let Some(&r) = parabolic.iter().find(|&&r| !b[r].is_zero()) {
                return Err(HoroError::Basis(format!("basis vector {k} pairs nontrivially with the coroot of {}", names[r])));
            }
        }
        if !m_basis.is_empty() {
            let mat = RatMat::from_rows(w, m_basis.clone()).map_err(|e| HoroError::Basis(e.to_string()))?;
            if mat.rank() != m_basis.len() {
                return Err(HoroError::Basis("basis vectors are linearly dependent".into()));
            }
        }
        Ok(HoroSpace { roots, parabolic, m_basis, names })
    }

    /// The torus `(ℂ*)^n` acting on itself.
    pub fn toric(n: usize) -> Self {
        let basis = (0..n).map(|i| RatVec::unit(n, i)).collect();
        HoroSpace::new(RootSystem::torus(n), BTreeSet::new(), basis, None).expect("standard basis")
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    pub fn parabolic(&self) -> &BTreeSet<usize> {
        &self.parabolic
    }

    pub fn m_basis(&self) -> &[RatVec] {
        &self.m_basis
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Rank `n` of `M`.
    pub fn rank(&self) -> usize {
        self.m_basis.len()
    }

    pub fn weight_dim(&self) -> usize {
        self.roots.weight_dim()
    }

    /// `S ∖ R` in Bourbaki order.
    pub fn colors(&self) -> Vec<usize> {
        (0..self.roots.simple_roots()).filter(|i| !self.parabolic.contains(i)).collect()
    }

    pub fn root_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn root_index(&self, name: &str) -> Result<usize, HoroError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| HoroError::UnknownRoot(name.to_string()))
    }

    /// `α^∨_M`: the pairing of each basis vector of `M` with `α^∨`.
    pub fn coroot_restriction(&self, alpha: usize) -> Result<RatVec, HoroError> {
        if alpha >= self.roots.simple_roots() {
            return Err(RootError::BadRoot(alpha).into());
        }
        if self.parabolic.contains(&alpha) {
            return Err(HoroError::RootInParabolic(self.names[alpha].clone()));
        }
        Ok(self.m_basis.iter().map(|b| b[alpha].clone()).collect())
    }

    /// `c_α` for each color, in the order of [`HoroSpace::colors`].
    pub fn c_values(&self) -> Vec<(usize, Rat)> {
        self.roots
            .c_values(&self.parabolic)
            .expect("parabolic subset validated")
            .into_iter()
            .map(|(i, c)| (i, Rat::from_int(c)))
            .collect()
    }

    /// The weight `Σ m_j b_j` of a point of `M_ℚ`.
    pub fn to_weight(&self, m: &RatVec) -> RatVec {
        let mut out = RatVec::zeros(self.weight_dim());
        for (x, b) in m.iter().zip(&self.m_basis) {
            out = out.add(&b.scale(x));
        }
        out
    }

    /// Whether `M_ℚ = X(P)_ℚ`, so that moment polytopes can be written with rows of `A`.
    pub fn m_spans_characters(&self) -> bool {
        let target = if self.roots.simple_roots() == 0 { self.weight_dim() } else { self.colors().len() };
        self.rank() == target
    }

    /// Coordinates in the basis of `M` of a weight lying in `M_ℚ`.
    pub fn weight_coordinates(&self, w: &RatVec) -> Option<RatVec> {
        if self.m_basis.is_empty() {
            return w.is_zero().then(|| RatVec::zeros(0));
        }
        let cols = RatMat::from_rows(self.weight_dim(), self.m_basis.clone()).ok()?.transpose();
        let set = linalg::solve_affine(&cols, w)?;
        Some(set.particular)
    }
}

/// Origin of an inequality row: a `G`-stable divisor `X_i` or a color `D_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowLabel {
    GStable(usize),
    Color(usize),
}

/// Rows `x_1, …, x_m, α_1^∨_M, …, α_r^∨_M` with their labels and the anticanonical column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSystem {
    pub a: RatMat,
    pub labels: Vec<RowLabel>,
    pub names: Vec<String>,
    pub c_tilde: RatVec,
}

impl RowSystem {
    pub fn new(space: &HoroSpace, rays: &[RatVec]) -> Result<Self, HoroError> {
        let n = space.rank();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut names = Vec::new();
        let mut c = Vec::new();
        for (i, x) in rays.iter().enumerate() {
            rows.push(x.clone());
            labels.push(RowLabel::GStable(i));
            names.push(format!("x{}", i + 1));
            c.push(Rat::one());
        }
        for (alpha, c_alpha) in space.c_values() {
            rows.push(space.coroot_restriction(alpha)?);
            labels.push(RowLabel::Color(alpha));
            names.push(space.root_name(alpha).to_string());
            c.push(c_alpha);
        }
        let a = RatMat::from_rows(n, rows).map_err(|e| HoroError::Fan(e.to_string()))?;
        Ok(RowSystem { a, labels, names, c_tilde: RatVec(c) })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn color_rows(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| matches!(self.labels[i], RowLabel::Color(_))).collect()
    }

    pub fn color_of(&self, row: usize) -> Option<usize> {
        match self.labels[row] {
            RowLabel::Color(a) => Some(a),
            RowLabel::GStable(_) => None,
        }
    }

    pub fn name(&self, row: usize) -> &str {
        &self.names[row]
    }

    pub fn names_of(&self, rows: &[usize]) -> Vec<String> {
        rows.iter().map(|&i| self.names[i].clone()).collect()
    }
}

/// A colored cone stored by its primitive extreme rays and its colors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColoredCone {
    pub rays: Vec<RatVec>,
    pub colors: BTreeSet<usize>,
}

impl ColoredCone {
    /// Cone generated by `generators`, reduced to primitive extreme rays.
    pub fn canonical(generators: &[RatVec], colors: BTreeSet<usize>) -> Self {
        let prim: BTreeSet<RatVec> = generators.iter().filter(|g| !g.is_zero()).map(RatVec::primitive).collect();
        let prim: Vec<RatVec> = prim.into_iter().collect();
        let rays = (0..prim.len())
            .filter(|&k| {
                let others: Vec<&RatVec> = prim.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g).collect();
                !in_cone(&prim[k], &others)
            })
            .map(|k| prim[k].clone())
            .collect();
        ColoredCone { rays, colors }
    }
}

fn in_cone(v: &RatVec, gens: &[&RatVec]) -> bool {
    if gens.is_empty() {
        return v.is_zero();
    }
    let mut sys = LinearSystem::new(gens.len());
    for d in 0..v.len() {
        sys.eq(gens.iter().map(|g| g[d].clone()).collect(), v[d].clone());
    }
    for k in 0..gens.len() {
        sys.ge(RatVec::unit(gens.len(), k), Rat::zero());
    }
    lp::feasible_point(&sys).is_some()
}

fn strictly_convex(gens: &[RatVec], n: usize) -> bool {
    if gens.is_empty() {
        return true;
    }
    let mut sys = LinearSystem::new(n);
    for g in gens {
        sys.ge(g.clone(), Rat::one());
    }
    lp::feasible_point(&sys).is_some()
}

/// Maximal colored cones of a complete colored fan.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColoredFan {
    pub cones: BTreeSet<ColoredCone>,
}

/// A maximal cone as given by a user: indices into the list of rays plus colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    pub rays: Vec<usize>,
    pub colors: BTreeSet<usize>,
}

impl ColoredFan {
    pub fn from_specs(space: &HoroSpace, rays: &[RatVec], specs: &[ConeSpec]) -> Result<Self, HoroError> {
        let n = space.rank();
        for (i, x) in rays.iter().enumerate() {
            if x.len() != n {
                return Err(HoroError::Fan(format!("ray x{} has length {}, expected {n}", i + 1, x.len())));
            }
            if x.is_zero() || x.primitive() != *x {
                return Err(HoroError::Fan(format!("ray x{} = {x} is not a primitive lattice vector", i + 1)));
            }
        }
        let mut used = BTreeSet::new();
        let mut cones = BTreeSet::new();
        for (k, spec) in specs.iter().enumerate() {
            let mut gens = Vec::new();
            for &r in &spec.rays {
                let x = rays.get(r).ok_or_else(|| HoroError::Fan(format!("cone {k} uses unknown ray index {r}")))?;
                used.insert(r);
                gens.push(x.clone());
            }
            for &alpha in &spec.colors {
                let v = space.coroot_restriction(alpha)?;
                if v.is_zero() {
                    return Err(HoroError::Fan(format!(
                        "cone {k}: color {} has zero coroot restriction",
                        space.root_name(alpha)
                    )));
                }
                gens.push(v);
            }
            if !strictly_convex(&gens, n) {
                return Err(HoroError::Fan(format!("cone {k} is not strictly convex")));
            }
            cones.insert(ColoredCone::canonical(&gens, spec.colors.clone()));
        }
        if let Some(i) = (0..rays.len()).find(|i| !used.contains(i)) {
            return Err(HoroError::Fan(format!("ray x{} lies in no cone", i + 1)));
        }
        Ok(ColoredFan { cones })
    }

    /// Colors of the embedding: the union of the cone colors.
    pub fn colors(&self) -> BTreeSet<usize> {
        self.cones.iter().flat_map(|c| c.colors.iter().copied()).collect()
    }
}

/// `D = Σ a_i X_i + Σ a_α D_α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BDivisor {
    pub g_stable: Vec<Rat>,
    pub colors: BTreeMap<usize, Rat>,
}

/// A projective `G/H`-embedding with a `B`-stable divisor, given by its fan data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedEmbedding {
    pub space: HoroSpace,
    pub rays: Vec<RatVec>,
    pub fan: ColoredFan,
    pub divisor: BDivisor,
}

/// `Q̃ = {m : A m >= B̃}`, `Q = v⁰ + Q̃` and `v⁰ = Σ a_α ϖ_α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPolytopes {
    pub q_tilde: HPolyhedron,
    pub q_tilde_vertices: Vec<RatVec>,
    pub q_vertices: Vec<RatVec>,
    pub v0: RatVec,
}

impl PolarizedEmbedding {
    pub fn new(space: HoroSpace, rays: Vec<RatVec>, fan: ColoredFan, divisor: BDivisor) -> Result<Self, HoroError> {
        if divisor.g_stable.len() != rays.len() {
            return Err(HoroError::Divisor(format!(
                "{} G-stable coefficients for {} rays",
                divisor.g_stable.len(),
                rays.len()
            )));
        }
        for alpha in space.colors() {
            if !divisor.colors.contains_key(&alpha) {
                return Err(HoroError::Divisor(format!("missing coefficient of color {}", space.root_name(alpha))));
            }
        }
        if let Some(&alpha) = divisor.colors.keys().find(|a| space.parabolic().contains(a) || **a >= space.names().len()) {
            return Err(HoroError::Divisor(format!("coefficient given for non-color root index {alpha}")));
        }
        for alpha in fan.colors() {
            let image = space.coroot_restriction(alpha)?;
            if let Some(i) = rays.iter().position(|x| x.ratio_to(&image).is_some_and(|t| t.is_positive())) {
                return Err(HoroError::Fan(format!(
                    "ray {} is generated by the image of color {}",
                    rays[i],
                    space.root_name(alpha)
                )));
            }
        }
        Ok(PolarizedEmbedding { space, rays, fan, divisor })
    }

    pub fn rows(&self) -> Result<RowSystem, HoroError> {
        RowSystem::new(&self.space, &self.rays)
    }

    /// `B̃ = -(a_1, …, a_m, a_{α_1}, …, a_{α_r})`.
    pub fn b_tilde(&self) -> RatVec {
        let mut out: Vec<Rat> = self.divisor.g_stable.iter().map(|a| -a).collect();
        for alpha in self.space.colors() {
            out.push(-&self.divisor.colors[&alpha]);
        }
        RatVec(out)
    }

    pub fn v0(&self) -> RatVec {
        let mut v = RatVec::zeros(self.space.weight_dim());
        for (&alpha, a) in &self.divisor.colors {
            v[alpha] = a.clone();
        }
        v
    }

    pub fn moment_polytopes(&self) -> Result<MomentPolytopes, HoroError> {
        let rows = self.rows()?;
        let q_tilde = HPolyhedron::new(rows.a.clone(), self.b_tilde())?;
        let verts = match q_tilde.vertices() {
            Ok(v) => v,
            Err(PolytopeError::Unbounded) => return Err(HoroError::NotAmple("pseudo-moment polytope is unbounded".into())),
            Err(e) => return Err(e.into()),
        };
        let dim = q_tilde.dimension_from(&verts);
        match dim {
            None => return Err(HoroError::NotAmple("pseudo-moment polytope is empty".into())),
            Some(d) if d < self.space.rank() => {
                return Err(HoroError::NotAmple(format!(
                    "pseudo-moment polytope has dimension {d} < rank {}",
                    self.space.rank()
                )))
            }
            _ => {}
        }
        let v0 = self.v0();
        let q_tilde_vertices: Vec<RatVec> = verts.into_iter().map(|v| v.point).collect();
        let q_vertices = q_tilde_vertices.iter().map(|m| v0.add(&self.space.to_weight(m))).collect();
        Ok(MomentPolytopes { q_tilde, q_tilde_vertices, q_vertices, v0 })
    }

    /// Checks that the fan of the moment polytope is the input fan.
    pub fn validate_ample(&self) -> Result<PolytopeView, HoroError> {
        self.moment_polytopes()?;
        let rows = self.rows()?;
        let active: Vec<usize> = (0..rows.len()).collect();
        let view = PolytopeView::new(&rows, self.b_tilde(), &active, Rat::zero())?;
        let fan = fan_from_polytope(&view, &rows);
        if fan != self.fan {
            return Err(HoroError::NotAmple("the normal fan of the moment polytope differs from the input fan".into()));
        }
        Ok(view)
    }
}

/// Recovers `D` from `Q̃` (vertices in `M` coordinates) and `Q` (vertices as weights).
pub fn divisor_from_polytopes(
    space: &HoroSpace,
    rays: &[RatVec],
    q_tilde: &[RatVec],
    q: &[RatVec],
) -> Result<BDivisor, HoroError> {
    let lifted: BTreeSet<RatVec> = q_tilde.iter().map(|m| space.to_weight(m)).collect();
    let target: BTreeSet<RatVec> = q.iter().cloned().collect();
    let (Some(l0), Some(t0)) = (lifted.iter().next(), target.iter().next()) else {
        return Err(HoroError::Divisor("empty polytope".into()));
    };
    let shift = t0.sub(l0);
    if lifted.iter().map(|p| p.add(&shift)).collect::<BTreeSet<_>>() != target {
        return Err(HoroError::Divisor("Q is not a translate of the pseudo-moment polytope".into()));
    }
    if let Some(&r) = space.parabolic().iter().find(|&&r| !shift[r].is_zero()) {
        return Err(HoroError::Divisor(format!("translation pairs nontrivially with {}", space.root_name(r))));
    }
    let g_stable = rays
        .iter()
        .map(|x| {
            let min = q_tilde.iter().map(|m| m.dot(x)).min().expect("nonempty");
            -min
        })
        .collect();
    let colors = space.colors().into_iter().map(|a| (a, shift[a].clone())).collect();
    Ok(BDivisor { g_stable, colors })
}

/// A polytope `{A_I x >= rhs_I}` in `M` with faces and facets in global row indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeView {
    pub epsilon: Rat,
    pub active: Vec<usize>,
    pub rhs: RatVec,
    pub vertices: Vec<Vertex>,
    pub faces: Vec<FaceRecord>,
    pub facets: Vec<Facet>,
    pub dim: Option<usize>,
    pub ctype: CombinatorialType,
}

impl PolytopeView {
    pub fn new(rows: &RowSystem, rhs: RatVec, active: &[usize], epsilon: Rat) -> Result<Self, HoroError> {
        let a = rows.a.select_rows(active);
        let b: RatVec = active.iter().map(|&i| rhs[i].clone()).collect();
        let poly = HPolyhedron::new(a, b)?;
        let local = poly.vertices()?;
        let map = |s: &[usize]| -> Vec<usize> {
            let mut g: Vec<usize> = s.iter().map(|&j| active[j]).collect();
            g.sort_unstable();
            g
        };
        let walls: Vec<usize> = (0..active.len()).filter(|&j| rows.color_of(active[j]).is_some()).collect();
        let ctype = poly.combinatorial_type_from(&local, &walls).relabel(active);
        let faces = poly.faces_from(&local).into_iter().map(|f| FaceRecord { active: map(&f.active), dim: f.dim }).collect();
        let facets = poly
            .facets_from(&local)
            .into_iter()
            .map(|f| Facet { active: map(&f.active), rows: map(&f.rows), normal: f.normal })
            .collect();
        let dim = poly.dimension_from(&local);
        let vertices = local.into_iter().map(|v| Vertex { active: map(&v.active), point: v.point }).collect();
        Ok(PolytopeView { epsilon, active: active.to_vec(), rhs, vertices, faces, facets, dim, ctype })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Colors `α` with `Q ∩ W_α ≠ ∅`.
    pub fn touched_walls(&self, rows: &RowSystem) -> BTreeSet<usize> {
        self.active
            .iter()
            .filter_map(|&i| rows.color_of(i).filter(|_| self.vertices.iter().any(|v| v.active.contains(&i))))
            .collect()
    }

    /// Colors `α` with `Q ⊆ W_α`.
    pub fn contained_walls(&self, rows: &RowSystem) -> BTreeSet<usize> {
        self.active
            .iter()
            .filter_map(|&i| {
                rows.color_of(i).filter(|_| !self.vertices.is_empty() && self.vertices.iter().all(|v| v.active.contains(&i)))
            })
            .collect()
    }

    /// Vertices as weights: `v^ε + Σ m_j b_j` with `v^ε = -Σ rhs_α ϖ_α`.
    pub fn moment_vertices(&self, space: &HoroSpace, rows: &RowSystem) -> Vec<RatVec> {
        let mut shift = RatVec::zeros(space.weight_dim());
        for i in 0..rows.len() {
            if let Some(alpha) = rows.color_of(i) {
                shift[alpha] = -&self.rhs[i];
            }
        }
        self.vertices.iter().map(|v| shift.add(&space.to_weight(&v.point))).collect()
    }

    fn facets_at(&self, v: &Vertex) -> Vec<&Facet> {
        self.facets.iter().filter(|f| is_subset(&f.active, &v.active)).collect()
    }

    /// Edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in self.faces.iter().filter(|f| f.dim == 1) {
            let ends: Vec<usize> =
                (0..self.vertices.len()).filter(|&k| is_subset(&f.active, &self.vertices[k].active)).collect();
            if ends.len() == 2 {
                out.push((ends[0], ends[1]));
            }
        }
        out
    }
}

/// `G/H`-polytope test: full dimension in `M_ℚ` and in no wall.
pub fn gh_valid(space: &HoroSpace, view: &PolytopeView, rows: &RowSystem) -> Result<(), Vec<String>> {
    let mut reasons = Vec::new();
    match view.dim {
        None => reasons.push("polytope is empty".to_string()),
        Some(d) if d != space.rank() => reasons.push(format!("dimension {d} differs from rank {}", space.rank())),
        _ => {}
    }
    for alpha in view.contained_walls(rows) {
        reasons.push(format!("contained in the wall of {}", space.root_name(alpha)));
    }
    if reasons.is_empty() {
        Ok(())
    } else {
        Err(reasons)
    }
}

/// Same face structure over the same rows and the same touched walls.
pub fn gh_equivalent(p: &PolytopeView, q: &PolytopeView, rows: &RowSystem) -> bool {
    p.ctype == q.ctype && p.touched_walls(rows) == q.touched_walls(rows)
}

/// One maximal colored cone per vertex: facet normals through it, and the walls containing it.
pub fn fan_from_polytope(view: &PolytopeView, rows: &RowSystem) -> ColoredFan {
    let cones = view
        .vertices
        .iter()
        .map(|v| {
            let gens: Vec<RatVec> = view.facets_at(v).iter().map(|f| f.normal.clone()).collect();
            let colors = v.active.iter().filter_map(|&i| rows.color_of(i)).collect();
            ColoredCone::canonical(&gens, colors)
        })
        .collect();
    ColoredFan { cones }
}

/// Outcome of the morphism criterion, with the first violated condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismCheck {
    pub exists: bool,
    pub reason: Option<String>,
}

/// Whether a dominant equivariant morphism from the embedding of `src` to that of `tgt` exists.
///
/// Both polytopes live in the same `M_ℚ`; `tgt` may be lower dimensional. Each facet
/// of `src` is sent to the face of `tgt` minimizing its normal.
pub fn morphism_exists(src: &PolytopeView, tgt: &PolytopeView, rows: &RowSystem) -> MorphismCheck {
    if src.is_empty() || tgt.is_empty() {
        return MorphismCheck { exists: false, reason: Some("empty polytope".into()) };
    }
    if tgt.dim > src.dim {
        return MorphismCheck { exists: false, reason: Some("target polytope has larger dimension".into()) };
    }
    let psi: Vec<BTreeSet<usize>> = src
        .facets
        .iter()
        .map(|f| {
            let u = rows.a.row_vec(f.rows[0]);
            let values: Vec<Rat> = tgt.vertices.iter().map(|v| u.dot(&v.point)).collect();
            let min = values.iter().min().expect("nonempty").clone();
            (0..values.len()).filter(|&k| values[k] == min).collect()
        })
        .collect();
    for v in &src.vertices {
        let mut meet: BTreeSet<usize> = (0..tgt.vertices.len()).collect();
        for (k, f) in src.facets.iter().enumerate() {
            if is_subset(&f.active, &v.active) {
                meet = meet.intersection(&psi[k]).copied().collect();
            }
        }
        if meet.is_empty() {
            return MorphismCheck {
                exists: false,
                reason: Some(format!("facets through vertex {} have disjoint images", v.point)),
            };
        }
    }
    let src_walls = src.touched_walls(rows);
    let tgt_walls = tgt.touched_walls(rows);
    if let Some(alpha) = src_walls.iter().find(|a| !tgt_walls.contains(a)) {
        let name = rows.name(rows_index_of_color(rows, *alpha));
        return MorphismCheck { exists: false, reason: Some(format!("wall of {name} touched only by the source")) };
    }
    MorphismCheck { exists: true, reason: None }
}

fn rows_index_of_color(rows: &RowSystem, alpha: usize) -> usize {
    (0..rows.len()).find(|&i| rows.color_of(i) == Some(alpha)).expect("color row exists")
}

/// `ε`-derivative of each vertex: the solution of `A_{I_v} y = C̃_{I_v}`.
///
/// `Err` carries the index of the first vertex where the system has no solution.
pub fn vertex_derivatives(view: &PolytopeView, rows: &RowSystem) -> Result<Vec<RatVec>, usize> {
    view.vertices
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let a = rows.a.select_rows(&v.active);
            let c: RatVec = v.active.iter().map(|&i| rows.c_tilde[i].clone()).collect();
            linalg::solve_affine(&a, &c).map(|s| s.particular).ok_or(k)
        })
        .collect()
}

pub fn is_q_gorenstein(view: &PolytopeView, rows: &RowSystem) -> Result<(), HoroError> {
    vertex_derivatives(view, rows).map(|_| ()).map_err(|k| HoroError::NotQGorenstein(view.vertices[k].point.to_string()))
}

/// Simple, each touched wall meets the polytope in a facet, and no facet lies in two walls.
pub fn is_q_factorial(view: &PolytopeView, rows: &RowSystem) -> bool {
    let Some(d) = view.dim else { return false };
    if !view.vertices.iter().all(|v| view.facets_at(v).len() == d) {
        return false;
    }
    let wall_facets = |f: &Facet| f.active.iter().filter(|&&i| rows.color_of(i).is_some()).count();
    if view.facets.iter().any(|f| wall_facets(f) > 1) {
        return false;
    }
    view.touched_walls(rows)
        .into_iter()
        .all(|alpha| view.facets.iter().any(|f| f.active.contains(&rows_index_of_color(rows, alpha))))
}

/// `(#facets − #facets in a wall) + |S∖R| − dim`.
pub fn picard_number(view: &PolytopeView, rows: &RowSystem) -> i64 {
    let in_wall = view.facets.iter().filter(|f| f.active.iter().any(|&i| rows.color_of(i).is_some())).count();
    let colors = rows.color_rows().len();
    let dim = view.dim.unwrap_or(0);
    (view.facets.len() - in_wall + colors) as i64 - dim as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    /// `C_μ` for the edge between two vertices.
    Edge { from: RatVec, to: RatVec },
    /// `C_{α,v}` for a vertex off the wall of `α`.
    Schubert { vertex: RatVec, color: String },
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Edge { from, to } => write!(f, "C[{from}--{to}]"),
            Curve::Schubert { vertex, color } => write!(f, "C[{color},{vertex}]"),
        }
    }
}

/// A curve with `D·C` at the view's ε and, when `K` is Q-Cartier, `K·C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub curve: Curve,
    pub d_dot: Rat,
    pub k_dot: Option<Rat>,
}

impl CurveRecord {
    /// `(D + (ε - ε₀)K)·C` where `ε₀` is the view's parameter.
    pub fn degree_at(&self, eps0: &Rat, eps: &Rat) -> Option<Rat> {
        self.k_dot.as_ref().map(|k| &self.d_dot + &(&(eps - eps0) * k))
    }
}

/// Edge curves with their integral lengths and Schubert curves with `⟨v, α^∨⟩`.
pub fn curves_with_intersections(view: &PolytopeView, rows: &RowSystem) -> Vec<CurveRecord> {
    let ys = vertex_derivatives(view, rows).ok();
    let mut out = Vec::new();
    for (i, j) in view.edges() {
        let (p, q) = (&view.vertices[i].point, &view.vertices[j].point);
        let d = q.sub(p);
        let dir = d.primitive();
        let length = d.ratio_to(&dir).expect("parallel to its primitive vector");
        let k_dot = ys.as_ref().and_then(|ys| ys[j].sub(&ys[i]).ratio_to(&dir));
        out.push(CurveRecord { curve: Curve::Edge { from: p.clone(), to: q.clone() }, d_dot: length, k_dot });
    }
    for (k, v) in view.vertices.iter().enumerate() {
        for &i in &view.active {
            if rows.color_of(i).is_none() || v.active.contains(&i) {
                continue;
            }
            let row = rows.a.row_vec(i);
            let d_dot = &row.dot(&v.point) - &view.rhs[i];
            let k_dot = ys.as_ref().map(|ys| &row.dot(&ys[k]) - &rows.c_tilde[i]);
            out.push(CurveRecord {
                curve: Curve::Schubert { vertex: v.point.clone(), color: rows.name(i).to_string() },
                d_dot,
                k_dot,
            });
        }
    }
    out
}

/// Numerical classes of the curves of `curves_with_intersections`, as linear forms on
/// right-hand sides: `D'·C = class · b'` for the divisor with polytope `A x >= b'`.
///
/// `None` unless every vertex is cut out by exactly `dim` independent rows.
pub fn curve_classes(view: &PolytopeView, rows: &RowSystem) -> Option<Vec<RatVec>> {
    let n = rows.a.ncols();
    let m = rows.len();
    let mut inverses = Vec::with_capacity(view.vertices.len());
    for v in &view.vertices {
        if v.active.len() != n {
            return None;
        }
        inverses.push(linalg::inverse(&rows.a.select_rows(&v.active))?);
    }
    // Row `p` of `y_v` as a form on `b'`.
    let coordinate = |k: usize, p: usize| {
        let mut form = RatVec::zeros(m);
        for (col, &i) in view.vertices[k].active.iter().enumerate() {
            form[i] = inverses[k].get(p, col).clone();
        }
        form
    };
    let mut out = Vec::new();
    for (i, j) in view.edges() {
        let dir = view.vertices[j].point.sub(&view.vertices[i].point).primitive();
        let p = dir.iter().position(|x| !x.is_zero())?;
        out.push(coordinate(j, p).sub(&coordinate(i, p)).scale(&dir[p].recip().ok()?));
    }
    for (k, v) in view.vertices.iter().enumerate() {
        for &i in &view.active {
            if rows.color_of(i).is_none() || v.active.contains(&i) {
                continue;
            }
            let mut form = RatVec::zeros(m);
            for (p, coeff) in rows.a.row(i).iter().enumerate() {
                form = form.add(&coordinate(k, p).scale(coeff));
            }
            form[i] = &form[i] - &Rat::one();
            out.push(form);
        }
    }
    Some(out)
}
