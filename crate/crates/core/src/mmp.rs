//! The minimal model program of a polarized horospherical variety, read off the
//! family `A x >= B̃ + εC̃`.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Rat, RatMat, RatVec};
use crate::brute;
use crate::horospherical::{
    self, curve_classes, curves_with_intersections, fan_from_polytope, gh_valid, morphism_exists, Curve, HoroError,
    PolarizedEmbedding, PolytopeView, RowSystem,
};
use crate::linalg;
use crate::parametric::{BoundaryKind, ClassEntry, Decomposition, FamilyError, ParametricFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmpError {
    #[error(transparent)]
    Horo(#[from] HoroError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("sweep and brute-force decompositions differ: sweep {sweep:?}, brute {brute:?}")]
    OracleMismatch { sweep: Vec<String>, brute: Vec<String> },
    #[error("internal invariant violated at ε = {epsilon}: {message}")]
    Internal { epsilon: Rat, message: String },
}

fn internal(epsilon: &Rat, message: impl Into<String>) -> MmpError {
    MmpError::Internal { epsilon: epsilon.clone(), message: message.into() }
}

/// Moment-side rows `A u >= B + εC`, written in the basis of `M`, when `M_ℚ = X(P)_ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentMatrices {
    pub b: RatVec,
    pub c: RatVec,
}

/// The family attached to `(X, D)` together with its row bookkeeping.
#[derive(Debug, Clone)]
pub struct FamilyData {
    pub embedding: PolarizedEmbedding,
    pub rows: RowSystem,
    pub family: ParametricFamily,
    pub b_tilde: RatVec,
    pub moment: Option<MomentMatrices>,
}

impl FamilyData {
    pub fn rhs_at(&self, eps: &Rat) -> RatVec {
        self.b_tilde.add(&self.rows.c_tilde.scale(eps))
    }

    pub fn view(&self, rows: &[usize], eps: &Rat) -> Result<PolytopeView, MmpError> {
        Ok(PolytopeView::new(&self.rows, self.rhs_at(eps), rows, eps.clone())?)
    }

    /// `Q̃` of the input divisor over all rows.
    pub fn input_view(&self) -> Result<PolytopeView, MmpError> {
        self.view(&(0..self.rows.len()).collect::<Vec<_>>(), &Rat::zero())
    }

    pub fn view_of(&self, class: &ClassEntry) -> Result<PolytopeView, MmpError> {
        self.view(&class.rows, &class.representative)
    }
}

/// Validates ampleness and the Q-Gorenstein property, then builds `(A, B̃, C̃)`.
pub fn build_family(embedding: &PolarizedEmbedding) -> Result<FamilyData, MmpError> {
    let data = prepare(embedding)?;
    let view = data.input_view()?;
    horospherical::is_q_gorenstein(&view, &data.rows)?;
    Ok(data)
}

/// Builds `(A, B̃, C̃)` after checking ampleness only.
pub fn prepare(embedding: &PolarizedEmbedding) -> Result<FamilyData, MmpError> {
    embedding.validate_ample()?;
    let rows = embedding.rows()?;
    let b_tilde = embedding.b_tilde();
    let family = ParametricFamily::new(rows.a.clone(), b_tilde.clone(), rows.c_tilde.clone(), rows.color_rows())?;
    let space = &embedding.space;
    let moment = if space.m_spans_characters() {
        let mut wc = RatVec::zeros(space.weight_dim());
        for (alpha, c) in space.c_values() {
            wc[alpha] = c;
        }
        match (space.weight_coordinates(&embedding.v0()), space.weight_coordinates(&wc)) {
            (Some(w), Some(wc)) => Some(MomentMatrices {
                b: b_tilde.add(&rows.a.mul_vec(&w)),
                c: rows.c_tilde.sub(&rows.a.mul_vec(&wc)),
            }),
            _ => None,
        }
    } else {
        None
    };
    Ok(FamilyData { embedding: embedding.clone(), rows, family, b_tilde, moment })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRecord {
    pub rays: Vec<RatVec>,
    pub colors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub gh_valid: bool,
    pub q_gorenstein: bool,
    pub q_factorial: bool,
    pub picard_number: Option<i64>,
}

/// Fan, colors and singularity flags of the variety attached to one polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyDescriptor {
    pub dim: Option<usize>,
    pub colors: Vec<String>,
    pub fan: Option<Vec<ConeRecord>>,
    pub flags: Flags,
    pub not_q_gorenstein_at: Option<RatVec>,
}

pub fn describe(data: &FamilyData, view: &PolytopeView) -> VarietyDescriptor {
    let rows = &data.rows;
    let space = &data.embedding.space;
    let valid = gh_valid(space, view, rows).is_ok();
    let derivatives = horospherical::vertex_derivatives(view, rows);
    let q_gorenstein = derivatives.is_ok();
    let q_factorial = valid && horospherical::is_q_factorial(view, rows);
    let fan = valid.then(|| {
        fan_from_polytope(view, rows)
            .cones
            .into_iter()
            .map(|c| ConeRecord {
                rays: c.rays,
                colors: c.colors.iter().map(|&a| space.root_name(a).to_string()).collect(),
            })
            .collect()
    });
    VarietyDescriptor {
        dim: view.dim,
        colors: view.touched_walls(rows).iter().map(|&a| space.root_name(a).to_string()).collect(),
        fan,
        flags: Flags {
            gh_valid: valid,
            q_gorenstein,
            q_factorial,
            picard_number: q_factorial.then(|| horospherical::picard_number(view, rows)),
        },
        not_q_gorenstein_at: derivatives.err().map(|k| view.vertices[k].point.clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub interval: String,
    pub representative: Rat,
    pub rows: Vec<String>,
    pub vertices: Vec<RatVec>,
    pub moment_vertices: Vec<RatVec>,
    pub variety: VarietyDescriptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Divisorial,
    Flip,
    MoriFibration,
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepKind::Divisorial => "divisorial",
            StepKind::Flip => "flip",
            StepKind::MoriFibration => "mori_fibration",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Contracted by a morphism going up in ε.
    Forward,
    /// Contracted by the morphism `X⁺ → Y` of a flip.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractedCurve {
    pub curve: Curve,
    pub direction: Direction,
    /// `(D + εK)·C` at the representative of the class the curve lives on.
    pub degree: Rat,
    pub at: Rat,
    pub k_dot: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismRecord {
    pub from: String,
    pub to: String,
    pub exists: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub epsilon: Rat,
    pub source: String,
    pub intermediate: Option<String>,
    pub target: String,
    pub dropped: Vec<String>,
    pub colors_source: Vec<String>,
    pub colors_intermediate: Option<Vec<String>>,
    pub colors_target: Vec<String>,
    pub flags_source: Flags,
    pub flags_intermediate: Option<Flags>,
    pub flags_target: Flags,
    pub contracted: Vec<ContractedCurve>,
    /// Dimension of the span of the forward-contracted curve classes; `None` unless the source is Q-factorial.
    pub contracted_rank: Option<usize>,
    pub morphisms: Vec<MorphismRecord>,
    /// Reverse morphism of a divisorial contraction; expected to be absent.
    pub reverse: Option<MorphismRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberData {
    pub m2_basis: Vec<RatVec>,
    pub colors: Vec<String>,
    pub rows: Vec<String>,
    pub a: Vec<RatVec>,
    pub b: RatVec,
    pub dim: Option<usize>,
    pub vertices: Vec<RatVec>,
    pub is_simplex: bool,
    pub walls_are_facets: bool,
    pub picard_number: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalData {
    pub epsilon_max: Rat,
    pub tight_rows: Vec<String>,
    pub m1_basis: Vec<RatVec>,
    pub r1: Vec<String>,
    pub r1_new: Vec<String>,
    pub z_dim: Option<usize>,
    pub z_vertices: Vec<RatVec>,
    pub z_moment_vertices: Vec<RatVec>,
    pub fiber: Option<FiberData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genericity {
    pub q_factorial_generic: bool,
    pub fiber_generic: bool,
    pub q_factorial_witnesses: Vec<Vec<String>>,
    pub fiber_witnesses: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub a: Vec<RatVec>,
    pub b_tilde: RatVec,
    pub c_tilde: RatVec,
    pub row_labels: Vec<String>,
    pub walls: Vec<String>,
    pub moment: Option<MomentMatrices>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmpTrace {
    pub family: FamilySummary,
    pub classes: Vec<ClassRecord>,
    pub steps: Vec<Step>,
    pub terminal: Option<TerminalData>,
    pub genericity: Genericity,
    pub message: Option<String>,
}

pub fn summarize(data: &FamilyData) -> FamilySummary {
    FamilySummary {
        a: data.rows.a.rows_iter().collect(),
        b_tilde: data.b_tilde.clone(),
        c_tilde: data.rows.c_tilde.clone(),
        row_labels: data.rows.names.clone(),
        walls: data.rows.names_of(&data.rows.color_rows().into_iter().collect_vec()),
        moment: data.moment.clone(),
    }
}

pub fn class_records(data: &FamilyData, dec: &Decomposition) -> Result<Vec<ClassRecord>, MmpError> {
    dec.classes
        .iter()
        .map(|c| {
            let view = data.view_of(c)?;
            Ok(ClassRecord {
                interval: c.interval.to_string(),
                representative: c.representative.clone(),
                rows: data.rows.names_of(&c.rows),
                vertices: view.vertices.iter().map(|v| v.point.clone()).collect(),
                moment_vertices: view.moment_vertices(&data.embedding.space, &data.rows),
                variety: describe(data, &view),
            })
        })
        .collect()
}

/// Checks the sweep against the brute-force decomposition.
pub fn oracle_check(data: &FamilyData, dec: &Decomposition) -> Result<(), MmpError> {
    let sweep = dec.intervals();
    let brute = brute::brute_decomposition(&data.family)?;
    if sweep != brute {
        return Err(MmpError::OracleMismatch {
            sweep: sweep.iter().map(ToString::to_string).collect(),
            brute: brute.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(())
}

/// Curves of `view` whose degree vanishes at `boundary`.
fn contracted_curves(view: &PolytopeView, rows: &RowSystem, boundary: &Rat, direction: Direction) -> Vec<ContractedCurve> {
    curves_with_intersections(view, rows)
        .into_iter()
        .filter_map(|c| {
            let k_dot = c.k_dot.clone()?;
            let at_boundary = c.degree_at(&view.epsilon, boundary)?;
            at_boundary.is_zero().then(|| ContractedCurve {
                curve: c.curve,
                direction,
                degree: c.d_dot,
                at: view.epsilon.clone(),
                k_dot,
            })
        })
        .collect()
}

fn contracted_rank(view: &PolytopeView, rows: &RowSystem, contracted: &[ContractedCurve]) -> Option<usize> {
    let classes = curve_classes(view, rows)?;
    let curves = curves_with_intersections(view, rows);
    let forms: Vec<RatVec> = contracted
        .iter()
        .filter(|c| c.direction == Direction::Forward)
        .filter_map(|c| curves.iter().position(|r| r.curve == c.curve).map(|k| classes[k].clone()))
        .collect();
    if forms.is_empty() {
        return Some(0);
    }
    Some(RatMat::from_rows(rows.len(), forms).ok()?.rank())
}

fn morphism(data: &FamilyData, src: &PolytopeView, tgt: &PolytopeView, from: &str, to: &str) -> MorphismRecord {
    let m = morphism_exists(src, tgt, &data.rows);
    MorphismRecord { from: from.to_string(), to: to.to_string(), exists: m.exists, reason: m.reason }
}

fn dropped_rows(data: &FamilyData, before: &[usize], after: &[usize]) -> Vec<String> {
    let gone: Vec<usize> = before.iter().copied().filter(|i| !after.contains(i)).collect();
    data.rows.names_of(&gone)
}

fn find_class(dec: &Decomposition, pred: impl Fn(&ClassEntry) -> bool) -> Option<usize> {
    dec.classes.iter().position(pred)
}

fn build_step(data: &FamilyData, dec: &Decomposition, records: &[ClassRecord], k: usize) -> Result<Step, MmpError> {
    let b = &dec.boundaries[k];
    let eps = &b.epsilon;
    let is_point_at = |c: &ClassEntry| c.interval.as_point() == Some(eps);
    let (kind, src, mid, tgt) = match b.kind {
        BoundaryKind::Singleton => {
            let y = find_class(dec, is_point_at).ok_or_else(|| internal(eps, "singleton class missing"))?;
            if y == 0 || y + 1 >= dec.classes.len() {
                return Err(internal(eps, "singleton class has no neighbours"));
            }
            (StepKind::Flip, y - 1, Some(y), y + 1)
        }
        BoundaryKind::Absorbed => {
            let t = find_class(dec, |c| c.interval.lower() == Some(eps) && c.interval.contains(eps))
                .ok_or_else(|| internal(eps, "target class missing"))?;
            if t == 0 {
                return Err(internal(eps, "divisorial boundary without a source class"));
            }
            (StepKind::Divisorial, t - 1, None, t)
        }
        BoundaryKind::Terminal => {
            let z = dec.classes.len() - 1;
            if z == 0 || !is_point_at(&dec.classes[z]) {
                return Err(internal(eps, "terminal class misplaced"));
            }
            (StepKind::MoriFibration, z - 1, None, z)
        }
    };
    let view = |i: usize| data.view_of(&dec.classes[i]);
    let (xs, xt) = (view(src)?, view(tgt)?);
    let name = |i: usize| records[i].interval.clone();
    let mut contracted = contracted_curves(&xs, &data.rows, eps, Direction::Forward);
    let rank = if records[src].variety.flags.q_factorial { contracted_rank(&xs, &data.rows, &contracted) } else { None };
    let mut morphisms = Vec::new();
    let mut reverse = None;
    let mut colors_intermediate = None;
    let mut flags_intermediate = None;
    match kind {
        StepKind::Flip => {
            let yi = mid.expect("flip has an intermediate class");
            let xy = view(yi)?;
            let yd = &records[yi].variety;
            if yd.flags.q_gorenstein {
                return Err(internal(eps, "flip intermediate is Q-Gorenstein"));
            }
            morphisms.push(morphism(data, &xs, &xy, &name(src), &name(yi)));
            morphisms.push(morphism(data, &xt, &xy, &name(tgt), &name(yi)));
            contracted.extend(contracted_curves(&xt, &data.rows, eps, Direction::Backward));
            colors_intermediate = Some(yd.colors.clone());
            flags_intermediate = Some(yd.flags.clone());
        }
        StepKind::Divisorial => {
            if !records[tgt].variety.flags.q_gorenstein {
                return Err(internal(eps, "target of a divisorial contraction is not Q-Gorenstein"));
            }
            morphisms.push(morphism(data, &xs, &xt, &name(src), &name(tgt)));
            reverse = Some(morphism(data, &xt, &xs, &name(tgt), &name(src)));
        }
        StepKind::MoriFibration => {
            morphisms.push(morphism(data, &xs, &xt, &name(src), &name(tgt)));
        }
    }
    if let Some(m) = morphisms.iter().find(|m| !m.exists) {
        return Err(internal(eps, format!("no morphism {} -> {}: {}", m.from, m.to, m.reason.clone().unwrap_or_default())));
    }
    let dropped = dropped_rows(data, &dec.classes[src].rows, &dec.classes[tgt].rows);
    if kind == StepKind::Divisorial && dropped.is_empty() {
        return Err(internal(eps, "divisorial contraction drops no G-stable divisor"));
    }
    Ok(Step {
        kind,
        epsilon: eps.clone(),
        source: name(src),
        intermediate: mid.map(name),
        target: name(tgt),
        dropped,
        colors_source: records[src].variety.colors.clone(),
        colors_intermediate,
        colors_target: records[tgt].variety.colors.clone(),
        flags_source: records[src].variety.flags.clone(),
        flags_intermediate,
        flags_target: records[tgt].variety.flags.clone(),
        contracted,
        contracted_rank: rank,
        morphisms,
        reverse,
    })
}

/// Base `Z` of the Mori fibration and, when the dimension drops, the general fiber.
pub fn terminal_data(data: &FamilyData, dec: &Decomposition) -> Result<Option<TerminalData>, MmpError> {
    let Some(eps) = dec.terminal.clone() else { return Ok(None) };
    let span = dec.spans.last().expect("nonempty decomposition");
    let fam = &span.family;
    let tight = fam.tight_everywhere(&eps);
    let rows = &data.rows;
    let space = &data.embedding.space;
    let n = space.rank();
    let a_i = rows.a.select_rows(&tight);
    let m1_basis = linalg::kernel_lattice(&a_i);
    let last = dec.classes.last().expect("terminal class");
    let z = data.view_of(last)?;
    let tight_colors: BTreeSet<usize> = tight.iter().filter_map(|&i| rows.color_of(i)).collect();
    let mut r1: BTreeSet<usize> = space.parabolic().clone();
    r1.extend(tight_colors.iter().copied());
    let names = |s: &BTreeSet<usize>| s.iter().map(|&a| space.root_name(a).to_string()).collect::<Vec<_>>();
    let fiber = if z.dim.unwrap_or(0) < n {
        Some(fiber_data(data, &tight, &m1_basis, &tight_colors)?)
    } else {
        None
    };
    Ok(Some(TerminalData {
        epsilon_max: eps,
        tight_rows: rows.names_of(&tight),
        m1_basis,
        r1: names(&r1),
        r1_new: names(&tight_colors),
        z_dim: z.dim,
        z_vertices: z.vertices.iter().map(|v| v.point.clone()).collect(),
        z_moment_vertices: z.moment_vertices(space, rows),
        fiber,
    }))
}

fn fiber_data(
    data: &FamilyData,
    tight: &[usize],
    m1_basis: &[RatVec],
    tight_colors: &BTreeSet<usize>,
) -> Result<FiberData, MmpError> {
    let rows = &data.rows;
    let n = data.embedding.space.rank();
    let m2_basis = linalg::lattice_complement(m1_basis, n);
    let a: Vec<RatVec> = tight
        .iter()
        .map(|&i| {
            let r = rows.a.row_vec(i);
            m2_basis.iter().map(|t| r.dot(t)).collect()
        })
        .collect();
    let b: RatVec = tight.iter().map(|&i| data.b_tilde[i].clone()).collect();
    let fiber_rows = RowSystem {
        a: RatMat::from_rows(m2_basis.len(), a.clone()).map_err(|e| internal(&Rat::zero(), e.to_string()))?,
        labels: tight.iter().map(|&i| rows.labels[i]).collect(),
        names: rows.names_of(tight),
        c_tilde: tight.iter().map(|&i| rows.c_tilde[i].clone()).collect(),
    };
    let local: Vec<usize> = (0..tight.len()).collect();
    let view = PolytopeView::new(&fiber_rows, b.clone(), &local, Rat::zero())?;
    let d = view.dim;
    let is_simplex = d == Some(m2_basis.len()) && view.vertices.len() == m2_basis.len() + 1;
    let walls_are_facets = fiber_rows
        .color_rows()
        .iter()
        .all(|i| view.facets.iter().any(|f| f.rows.contains(i)));
    let picard_number = horospherical::is_q_factorial(&view, &fiber_rows)
        .then(|| horospherical::picard_number(&view, &fiber_rows));
    Ok(FiberData {
        m2_basis,
        colors: tight_colors.iter().map(|&a| data.embedding.space.root_name(a).to_string()).collect(),
        rows: fiber_rows.names.clone(),
        a,
        b,
        dim: d,
        vertices: view.vertices.iter().map(|v| v.point.clone()).collect(),
        is_simplex,
        walls_are_facets,
        picard_number,
    })
}

/// Subset scans for the two genericity conditions on `B̃`.
///
/// A `(n+1)`-subset `I` with `B̃_I ∈ Im A_I` blocks Q-factoriality; a subset `J`
/// with `|J| >= rank A_J + 2` and `B̃_J ∈ Im A_J + ℚ C̃_J` blocks simplicial fibers.
pub fn is_general_divisor(rows: &RowSystem, b_tilde: &RatVec) -> Genericity {
    let n = rows.a.ncols();
    let m = rows.len();
    let pick = |s: &[usize]| -> RatVec { s.iter().map(|&i| b_tilde[i].clone()).collect() };
    let mut qf = Vec::new();
    if m > n {
        for s in (0..m).combinations(n + 1) {
            if linalg::solve_affine(&rows.a.select_rows(&s), &pick(&s)).is_some() {
                qf.push(rows.names_of(&s));
            }
        }
    }
    let mut fib = Vec::new();
    for size in 2..=(n + 2).min(m) {
        for s in (0..m).combinations(size) {
            let a = rows.a.select_rows(&s);
            if size < a.rank() + 2 {
                continue;
            }
            let c: RatVec = s.iter().map(|&i| rows.c_tilde[i].clone()).collect();
            if linalg::solve_affine(&a.with_column(&c), &pick(&s)).is_some() {
                fib.push(rows.names_of(&s));
            }
        }
    }
    Genericity { q_factorial_generic: qf.is_empty(), fiber_generic: fib.is_empty(), q_factorial_witnesses: qf, fiber_witnesses: fib }
}

/// The decomposition of the family and, from it, the whole trace.
pub fn run_mmp(data: &FamilyData) -> Result<(Decomposition, MmpTrace), MmpError> {
    let dec = data.family.iterated_decomposition()?;
    let classes = class_records(data, &dec)?;
    let steps = (0..dec.boundaries.len()).map(|k| build_step(data, &dec, &classes, k)).collect::<Result<Vec<_>, _>>()?;
    let terminal = terminal_data(data, &dec)?;
    let message = if steps.is_empty() {
        Some("K nef at 0: no step".to_string())
    } else if terminal.is_none() {
        Some(format!("K nef from ε = {}: minimal model reached", dec.classes.last().map_or(Rat::zero(), |c| c.representative.clone())))
    } else {
        None
    };
    let trace = MmpTrace {
        family: summarize(data),
        classes,
        steps,
        terminal,
        genericity: is_general_divisor(&data.rows, &data.b_tilde),
        message,
    };
    Ok((dec, trace))
}

