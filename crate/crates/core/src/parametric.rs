//! Families `P^ε = {x : A x >= B + εC}` and their decomposition into
//! combinatorial equivalence classes as ε increases.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Rat, RatMat, RatVec};
use crate::interval::{Endpoint, EpsInterval, IntervalKind};
use crate::linalg;
use crate::lp::{self, Constraint, LinearSystem, LpOutcome, Sense};
use crate::polytope::{AffineFrame, CombinatorialType, HPolyhedron, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("row {0} of A is zero but not exempt")]
    ZeroRowNotExempt(usize),
    #[error("family is unbounded (Ax >= 0 has a nonzero solution)")]
    Unbounded,
    #[error("0 is not in the open interval of stable facets {0}: divisor not ample or not Q-Cartier")]
    StartOutsideStable(String),
    #[error("row {0} is not an active row")]
    UnknownRow(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Solvability of `A_I x = B_I + εC_I` as ε varies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solvability {
    Never,
    Unique(Rat),
    Always,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSets {
    pub omega0: EpsInterval,
    pub omega1: EpsInterval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricFamily {
    a: RatMat,
    b: RatVec,
    c: RatVec,
    active: Vec<usize>,
    exempt: BTreeSet<usize>,
    frame: AffineFrame,
}

/// Result of pushing a family past the upper end of its stable interval.
#[derive(Debug, Clone)]
pub enum Extension {
    /// Same ambient space; the listed rows stop being facets and are dropped.
    FullDim { family: ParametricFamily, dropped: Vec<usize> },
    /// The polytope collapses into `∩ H_j` for `tight` rows; coordinates are restricted.
    Subspace { family: ParametricFamily, tight: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// An isolated class `{ε}` inside one stable interval or at a row drop.
    Singleton,
    /// Rows drop at ε and ε starts the next class `[ε, …)`.
    Absorbed,
    /// The sweep stops at ε.
    Terminal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEntry {
    pub interval: EpsInterval,
    pub representative: Rat,
    pub rows: Vec<usize>,
    pub span: usize,
    pub ctype: CombinatorialType,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Boundary {
    pub epsilon: Rat,
    pub kind: BoundaryKind,
    pub dropped: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Span {
    pub family: ParametricFamily,
    pub start: Rat,
    pub end: Option<Rat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub classes: Vec<ClassEntry>,
    pub boundaries: Vec<Boundary>,
    pub spans: Vec<Span>,
    pub terminal: Option<Rat>,
}

impl Decomposition {
    pub fn intervals(&self) -> Vec<EpsInterval> {
        self.classes.iter().map(|c| c.interval.clone()).collect()
    }

    pub fn interval_strings(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.interval.to_string()).collect()
    }
}

impl ParametricFamily {
    pub fn new(a: RatMat, b: RatVec, c: RatVec, exempt: BTreeSet<usize>) -> Result<Self, FamilyError> {
        let m = a.nrows();
        if b.len() != m || c.len() != m {
            return Err(FamilyError::Shape(format!("A has {m} rows, B {} and C {}", b.len(), c.len())));
        }
        if let Some(&k) = exempt.iter().find(|&&k| k >= m) {
            return Err(FamilyError::UnknownRow(k));
        }
        for i in 0..m {
            if a.row(i).iter().all(Rat::is_zero) && !exempt.contains(&i) {
                return Err(FamilyError::ZeroRowNotExempt(i));
            }
        }
        let n = a.ncols();
        let fam = ParametricFamily { a, b, c, active: (0..m).collect(), exempt, frame: AffineFrame::identity(n) };
        if !fam.polytope_at(&Rat::zero()).recession_cone_trivial() {
            return Err(FamilyError::Unbounded);
        }
        Ok(fam)
    }

    pub fn a(&self) -> &RatMat {
        &self.a
    }

    pub fn b(&self) -> &RatVec {
        &self.b
    }

    pub fn c(&self) -> &RatVec {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn exempt(&self) -> &BTreeSet<usize> {
        &self.exempt
    }

    /// Map from the current coordinates to the coordinates the family was built in.
    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    /// Same family restricted to a subset of its active rows.
    pub fn with_active(&self, rows: &[usize]) -> Result<Self, FamilyError> {
        if let Some(&r) = rows.iter().find(|r| !self.active.contains(r)) {
            return Err(FamilyError::UnknownRow(r));
        }
        let mut f = self.clone();
        f.active = rows.iter().copied().sorted().dedup().collect();
        Ok(f)
    }

    /// The family with ε replaced by −ε, for sweeping leftwards.
    pub fn mirrored(&self) -> Self {
        let mut f = self.clone();
        f.c = self.c.neg();
        f
    }

    pub fn rhs_at(&self, i: usize, eps: &Rat) -> Rat {
        &self.b[i] + &(&self.c[i] * eps)
    }

    /// `P^ε` over the active rows; local row `j` is global row `active[j]`.
    pub fn polytope_at(&self, eps: &Rat) -> HPolyhedron {
        let a = self.a.select_rows(&self.active);
        let b: RatVec = self.active.iter().map(|&i| self.rhs_at(i, eps)).collect();
        HPolyhedron::new(a, b).expect("matching shapes").with_frame(self.frame.clone())
    }

    /// Vertices of `P^ε` with active sets in global row indices.
    pub fn vertices_at(&self, eps: &Rat) -> Vec<Vertex> {
        self.polytope_at(eps)
            .vertices_of_bounded()
            .into_iter()
            .map(|v| Vertex { point: v.point, active: v.active.iter().map(|&j| self.active[j]).collect() })
            .collect()
    }

    /// Combinatorial type of `P^ε` in global row indices, `None` when empty.
    pub fn type_at(&self, eps: &Rat) -> Option<CombinatorialType> {
        let p = self.polytope_at(eps);
        let v = p.vertices_of_bounded();
        if v.is_empty() {
            return None;
        }
        let walls: Vec<usize> =
            self.active.iter().enumerate().filter(|(_, g)| self.exempt.contains(g)).map(|(j, _)| j).collect();
        Some(p.combinatorial_type_from(&v, &walls).relabel(&self.active))
    }

    pub fn solvability(&self, subset: &[usize]) -> Solvability {
        if subset.is_empty() {
            return Solvability::Always;
        }
        let lifted = self.a.select_rows(subset).with_column(&subset.iter().map(|&i| -&self.c[i]).collect());
        let rhs: RatVec = subset.iter().map(|&i| self.b[i].clone()).collect();
        let n = self.dim();
        match linalg::solve_affine(&lifted, &rhs) {
            None => Solvability::Never,
            Some(set) => {
                if set.kernel.iter().any(|k| !k[n].is_zero()) {
                    Solvability::Always
                } else {
                    Solvability::Unique(set.particular[n].clone())
                }
            }
        }
    }

    /// Face `F_I` at ε with all other active rows strict: a witness point if one exists.
    pub fn strict_witness(&self, subset: &[usize], eps: &Rat) -> Option<RatVec> {
        let row = |i: usize| Constraint::new(self.a.row_vec(i), self.rhs_at(i, eps));
        let eqs: Vec<Constraint> = subset.iter().map(|&i| row(i)).collect();
        let strict: Vec<Constraint> = self.active.iter().filter(|i| !subset.contains(i)).map(|&i| row(i)).collect();
        lp::strict_feasible(self.dim(), &eqs, &strict, &[])
    }

    pub fn in_omega1(&self, subset: &[usize], eps: &Rat) -> bool {
        self.strict_witness(subset, eps).is_some()
    }

    fn lifted_system(&self, subset: &[usize]) -> LinearSystem {
        let n = self.dim();
        let mut sys = LinearSystem::new(n + 1);
        for &i in &self.active {
            let mut v = self.a.row(i).to_vec();
            v.push(-&self.c[i]);
            if subset.contains(&i) {
                sys.eq(RatVec(v), self.b[i].clone());
            } else {
                sys.ge(RatVec(v), self.b[i].clone());
            }
        }
        sys
    }

    /// `Ω⁰_I`: the ε with `F_I` nonempty.
    pub fn omega0(&self, subset: &[usize]) -> EpsInterval {
        let sys = self.lifted_system(subset);
        let dir = RatVec::unit(self.dim() + 1, self.dim());
        let lo = lp::lp_extremize(&sys, &dir, Sense::Minimize);
        if lo == LpOutcome::Infeasible {
            return EpsInterval::Empty;
        }
        let hi = lp::lp_extremize(&sys, &dir, Sense::Maximize);
        EpsInterval::closed(lo.value().cloned(), hi.value().cloned())
    }

    /// `Ω⁰_I` and `Ω¹_I`, using that `Ω¹_I` is open, a point, or empty.
    pub fn omega_intervals(&self, subset: &[usize]) -> OmegaSets {
        let omega0 = self.omega0(subset);
        let omega1 = match (self.solvability(subset), &omega0) {
            (_, EpsInterval::Empty) | (Solvability::Never, _) => EpsInterval::Empty,
            (Solvability::Unique(e), _) => {
                if self.in_omega1(subset, &e) {
                    EpsInterval::point(e)
                } else {
                    EpsInterval::Empty
                }
            }
            (Solvability::Always, o0) => {
                let inner = EpsInterval::open(o0.lower().cloned(), o0.upper().cloned());
                match inner.sample() {
                    Some(s) if !inner.is_empty() && self.in_omega1(subset, &s) => inner,
                    _ => EpsInterval::Empty,
                }
            }
        };
        OmegaSets { omega0, omega1 }
    }

    /// `Ω^max`: all non-exempt active rows are facets and no inequality is tight everywhere.
    pub fn omega_max(&self) -> EpsInterval {
        let mut acc = self.omega_intervals(&[]).omega1;
        for &i in &self.active {
            if self.exempt.contains(&i) || acc.is_empty() {
                continue;
            }
            acc = acc.intersect(&self.omega_intervals(&[i]).omega1);
        }
        acc
    }

    /// Every ε in `(lo, hi)` at which some subset of at most `n+1` rows is solvable
    /// for that ε alone, plus the ends of `Ω⁰` for single rows.
    pub fn candidate_breakpoints(&self, lo: Option<&Rat>, hi: Option<&Rat>) -> Vec<Rat> {
        let inside = |e: &Rat| lo.is_none_or(|l| e > l) && hi.is_none_or(|h| e < h);
        let mut out: BTreeSet<Rat> = BTreeSet::new();
        for size in 1..=(self.dim() + 1).min(self.active.len()) {
            for subset in self.active.iter().copied().combinations(size) {
                if let Solvability::Unique(e) = self.solvability(&subset) {
                    if inside(&e) {
                        out.insert(e);
                    }
                }
            }
        }
        for &i in &self.active {
            let o = self.omega0(&[i]);
            for e in [o.lower(), o.upper()].into_iter().flatten() {
                if inside(e) {
                    out.insert(e.clone());
                }
            }
        }
        out.into_iter().collect()
    }

    /// Classes of `[start, hi)` inside one stable interval.
    pub fn class_decomposition(&self, start: &Rat, hi: Option<&Rat>, span: usize) -> Result<Vec<ClassEntry>, FamilyError> {
        let cands = self.candidate_breakpoints(Some(start), hi);
        let mut samples: Vec<(Rat, bool)> = vec![(start.clone(), true)];
        let mut prev = start.clone();
        for c in &cands {
            samples.push((prev.midpoint(c), false));
            samples.push((c.clone(), true));
            prev = c.clone();
        }
        samples.push((hi.map_or(&prev + Rat::one(), |h| prev.midpoint(h)), false));
        let mut typed = Vec::with_capacity(samples.len());
        for (e, is_point) in samples {
            let t = self
                .type_at(&e)
                .ok_or_else(|| FamilyError::Internal(format!("empty polytope at ε = {e} inside stable interval")))?;
            typed.push((e, is_point, t));
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < typed.len() {
            let mut j = i;
            while j + 1 < typed.len() && typed[j + 1].2 == typed[i].2 {
                j += 1;
            }
            let lo = if typed[i].1 {
                Endpoint::Closed(typed[i].0.clone())
            } else {
                Endpoint::Open(typed[i - 1].0.clone())
            };
            let hi_end = if typed[j].1 {
                Endpoint::Closed(typed[j].0.clone())
            } else if j + 1 < typed.len() {
                Endpoint::Open(typed[j + 1].0.clone())
            } else {
                hi.map_or(Endpoint::Unbounded, |h| Endpoint::Open(h.clone()))
            };
            let interval = EpsInterval::range(lo, hi_end);
            let representative = if interval.kind() == IntervalKind::Point {
                typed[i].0.clone()
            } else {
                typed[(i..=j).find(|&k| !typed[k].1).unwrap_or(i)].0.clone()
            };
            out.push(ClassEntry { interval, representative, rows: self.active.clone(), span, ctype: typed[i].2.clone() });
            i = j + 1;
        }
        Ok(out)
    }

    /// Rows tight on the whole of `P^ε`.
    pub fn tight_everywhere(&self, eps: &Rat) -> Vec<usize> {
        let v = self.vertices_at(eps);
        let Some(first) = v.first() else {
            return Vec::new();
        };
        first.active.iter().copied().filter(|i| v.iter().all(|w| w.active.contains(i))).collect()
    }

    fn drop_rows_at(&self, eps: &Rat) -> Result<Extension, FamilyError> {
        let dropped: Vec<usize> = self
            .active
            .iter()
            .copied()
            .filter(|i| !self.exempt.contains(i) && !self.in_omega1(&[*i], eps))
            .collect();
        let keep: Vec<usize> = self.active.iter().copied().filter(|i| !dropped.contains(i)).collect();
        let family = self.with_active(&keep)?;
        if !family.omega_max().contains(eps) {
            return Err(FamilyError::Internal(format!("ε = {eps} not stable after dropping rows {dropped:?}")));
        }
        Ok(Extension::FullDim { family, dropped })
    }

    /// Extends the family past `eps1 = sup Ω^max`.
    pub fn extend(&self, eps1: &Rat) -> Result<Extension, FamilyError> {
        if self.in_omega1(&[], eps1) {
            return self.drop_rows_at(eps1);
        }
        let tight = self.tight_everywhere(eps1);
        if tight.is_empty() {
            return Err(FamilyError::Internal(format!("no row is tight on P^{eps1} outside the interior")));
        }
        let at = self.a.select_rows(&tight);
        let rhs: RatVec = tight.iter().map(|&i| self.rhs_at(i, eps1)).collect();
        let x0 = linalg::solve_affine(&at, &rhs)
            .ok_or_else(|| FamilyError::Internal("tight rows inconsistent".into()))?
            .particular;
        let basis = linalg::kernel_lattice(&at);
        let local = AffineFrame { origin: x0.clone(), basis: basis.clone() };
        let k = basis.len();
        let mut rows = Vec::with_capacity(self.nrows());
        let mut b = RatVec::zeros(self.nrows());
        for i in 0..self.nrows() {
            let r = self.a.row_vec(i);
            rows.push(basis.iter().map(|t| r.dot(t)).collect::<RatVec>());
            b[i] = &self.b[i] - &r.dot(&x0);
        }
        let a = RatMat::from_rows(k, rows).map_err(|e| FamilyError::Shape(e.to_string()))?;
        let active: Vec<usize> = self.active.iter().copied().filter(|i| !tight.contains(i)).collect();
        let mut exempt: BTreeSet<usize> = self.exempt.iter().copied().filter(|i| !tight.contains(i)).collect();
        for &i in &active {
            if a.row(i).iter().all(Rat::is_zero) {
                exempt.insert(i);
            }
        }
        let family = ParametricFamily { a, b, c: self.c.clone(), active, exempt, frame: self.frame.compose(&local) };
        if family.omega_max().contains(eps1) {
            return Ok(Extension::Subspace { family, tight });
        }
        match family.drop_rows_at(eps1)? {
            Extension::FullDim { family, .. } => Ok(Extension::Subspace { family, tight }),
            sub => Ok(sub),
        }
    }

    /// Classes of all ε >= 0, dropping rows at each stable-interval end until the
    /// polytope stops being full dimensional.
    pub fn iterated_decomposition(&self) -> Result<Decomposition, FamilyError> {
        let zero = Rat::zero();
        let first = self.omega_max();
        if !first.contains(&zero) {
            return Err(FamilyError::StartOutsideStable(first.to_string()));
        }
        let mut fam = self.clone();
        let mut start = zero;
        let mut classes: Vec<ClassEntry> = Vec::new();
        let mut boundaries = Vec::new();
        let mut spans = Vec::new();
        let terminal = loop {
            let om = fam.omega_max();
            let hi = om.upper().cloned();
            let span_idx = spans.len();
            let span_classes = fam.class_decomposition(&start, hi.as_ref(), span_idx)?;
            for (k, c) in span_classes.iter().enumerate() {
                if k == 0 && span_idx == 0 {
                    continue;
                }
                if c.interval.kind() == IntervalKind::Point {
                    boundaries.push(Boundary {
                        epsilon: c.representative.clone(),
                        kind: BoundaryKind::Singleton,
                        dropped: Vec::new(),
                    });
                } else if k == 0 {
                    boundaries.push(Boundary { epsilon: start.clone(), kind: BoundaryKind::Absorbed, dropped: Vec::new() });
                }
            }
            classes.extend(span_classes);
            spans.push(Span { family: fam.clone(), start: start.clone(), end: hi.clone() });
            let Some(e1) = hi else { break None };
            match fam.extend(&e1)? {
                Extension::FullDim { family, dropped } => {
                    boundaries.push(Boundary { epsilon: e1.clone(), kind: BoundaryKind::Absorbed, dropped });
                    fam = family;
                    start = e1;
                }
                Extension::Subspace { .. } => {
                    let ctype = fam
                        .type_at(&e1)
                        .ok_or_else(|| FamilyError::Internal(format!("empty polytope at terminal ε = {e1}")))?;
                    classes.push(ClassEntry {
                        interval: EpsInterval::point(e1.clone()),
                        representative: e1.clone(),
                        rows: fam.active.clone(),
                        span: span_idx,
                        ctype,
                    });
                    boundaries.push(Boundary { epsilon: e1.clone(), kind: BoundaryKind::Terminal, dropped: Vec::new() });
                    break Some(e1);
                }
            }
        };
        Ok(Decomposition { classes, boundaries: merge_boundaries(boundaries), spans, terminal })
    }
}

/// Collapses the row-drop record and the class record of the same ε into one boundary.
fn merge_boundaries(raw: Vec<Boundary>) -> Vec<Boundary> {
    let mut out: Vec<Boundary> = Vec::new();
    for b in raw {
        if let Some(last) = out.last_mut() {
            if last.epsilon == b.epsilon {
                if b.kind == BoundaryKind::Singleton || last.kind == BoundaryKind::Singleton {
                    last.kind = BoundaryKind::Singleton;
                }
                last.dropped.extend(b.dropped);
                continue;
            }
        }
        out.push(b);
    }
    out
}
