//! Versioned machine report and its plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{Rat, RatVec};
use crate::document::fingerprint;
use crate::horospherical::PolarizedEmbedding;
use crate::mmp::{ClassRecord, FamilySummary, Flags, Genericity, MmpTrace, Step, TerminalData, VarietyDescriptor};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub root_system: String,
    pub parabolic: Vec<String>,
    pub colors: Vec<String>,
    pub rank: usize,
    pub m_basis: Vec<RatVec>,
    pub c_values: BTreeMap<String, Rat>,
}

impl SpaceSummary {
    pub fn of(e: &PolarizedEmbedding) -> Self {
        let s = &e.space;
        let roots = s.roots();
        SpaceSummary {
            root_system: format!("{}{}", roots.kind(), roots.rank()),
            parabolic: s.parabolic().iter().map(|&a| s.root_name(a).to_string()).collect(),
            colors: s.colors().into_iter().map(|a| s.root_name(a).to_string()).collect(),
            rank: s.rank(),
            m_basis: s.m_basis().to_vec(),
            c_values: s.c_values().into_iter().map(|(a, c)| (s.root_name(a).to_string(), c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub mode: String,
    pub agreed: bool,
    pub intervals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub fingerprint: String,
    pub space: SpaceSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<VarietyDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<Step>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<TerminalData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genericity: Option<Genericity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Report {
    pub fn new(command: &str, name: Option<String>, e: &PolarizedEmbedding) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            name,
            fingerprint: fingerprint(e),
            space: SpaceSummary::of(e),
            input: None,
            family: None,
            classes: None,
            steps: None,
            terminal: None,
            genericity: None,
            oracle: None,
            message: None,
        }
    }

    /// Fills every section from a full trace.
    pub fn with_trace(mut self, trace: MmpTrace) -> Self {
        self.family = Some(trace.family);
        self.classes = Some(trace.classes);
        self.steps = Some(trace.steps);
        self.terminal = trace.terminal;
        self.genericity = Some(trace.genericity);
        self.message = trace.message;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "polymmp report v{} ({})", self.schema_version, self.command);
        if let Some(n) = &self.name {
            let _ = writeln!(w, "name: {n}");
        }
        let _ = writeln!(w, "fingerprint: {}", self.fingerprint);
        let s = &self.space;
        let _ = writeln!(
            w,
            "space: {} R = {{{}}} colors = {{{}}} rank {}",
            s.root_system,
            s.parabolic.join(", "),
            s.colors.join(", "),
            s.rank
        );
        if let Some(v) = &self.input {
            let _ = writeln!(w, "input variety:");
            write_variety(w, v, "  ");
        }
        if let Some(f) = &self.family {
            let _ = writeln!(w, "family A x >= B~ + eps C~:");
            for (k, row) in f.a.iter().enumerate() {
                let _ = writeln!(w, "  {:>6}: {row} >= {} + eps {}", f.row_labels[k], f.b_tilde[k], f.c_tilde[k]);
            }
            if let Some(m) = &f.moment {
                let _ = writeln!(w, "  moment B = {}  C = {}", m.b, m.c);
            }
        }
        if let Some(classes) = &self.classes {
            let _ = writeln!(w, "classes:");
            for c in classes {
                let _ = writeln!(w, "  {}  rep {}  rows {}", c.interval, c.representative, c.rows.join(","));
                write_variety(w, &c.variety, "    ");
                let verts: Vec<String> = c.moment_vertices.iter().map(ToString::to_string).collect();
                let _ = writeln!(w, "    moment vertices: {}", verts.join(" "));
            }
        }
        if let Some(steps) = &self.steps {
            let _ = writeln!(w, "steps:");
            for (k, st) in steps.iter().enumerate() {
                let mid = st.intermediate.as_ref().map(|m| format!(" -> {m} <-")).unwrap_or_else(|| " ->".into());
                let _ = writeln!(w, "  {}. {} at eps = {}: {}{mid} {}", k + 1, st.kind, st.epsilon, st.source, st.target);
                let _ = writeln!(w, "     dropped: {}", list_or_none(&st.dropped));
                if let Some(r) = st.contracted_rank {
                    let _ = writeln!(w, "     contracted classes span dimension {r}");
                }
                let mut colors = vec![braces(&st.colors_source)];
                if let Some(c) = &st.colors_intermediate {
                    colors.push(braces(c));
                }
                colors.push(braces(&st.colors_target));
                let _ = writeln!(w, "     colors: {}", colors.join(" -> "));
                let mut flags = vec![format!("source {}", flags_text(&st.flags_source))];
                if let Some(f) = &st.flags_intermediate {
                    flags.push(format!("intermediate {}", flags_text(f)));
                }
                flags.push(format!("target {}", flags_text(&st.flags_target)));
                let _ = writeln!(w, "     flags: {}", flags.join("; "));
                for m in st.morphisms.iter().chain(&st.reverse) {
                    let why = m.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default();
                    let _ = writeln!(w, "     morphism {} -> {}: {}{why}", m.from, m.to, yes_no(m.exists));
                }
                for c in &st.contracted {
                    let dir = match c.direction {
                        crate::mmp::Direction::Forward => "forward",
                        crate::mmp::Direction::Backward => "backward",
                    };
                    let _ = writeln!(
                        w,
                        "     {dir} curve {}: (D+eps K).C = {} at eps = {}, K.C = {}",
                        c.curve, c.degree, c.at, c.k_dot
                    );
                }
            }
        }
        if let Some(t) = &self.terminal {
            let _ = writeln!(w, "terminal at eps = {}:", t.epsilon_max);
            let _ = writeln!(w, "  tight rows: {}", list_or_none(&t.tight_rows));
            let basis: Vec<String> = t.m1_basis.iter().map(ToString::to_string).collect();
            let _ = writeln!(w, "  M1 basis: {}", list_or_none(&basis));
            let _ = writeln!(w, "  R1 = {{{}}}  new: {{{}}}", t.r1.join(", "), t.r1_new.join(", "));
            let z: Vec<String> = t.z_moment_vertices.iter().map(ToString::to_string).collect();
            let _ = writeln!(w, "  Z: dim {} vertices {}", dim_text(t.z_dim), z.join(" "));
            if let Some(f) = &t.fiber {
                let _ = writeln!(w, "  fiber in M2 basis {}:", f.m2_basis.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
                for (k, row) in f.a.iter().enumerate() {
                    let _ = writeln!(w, "    {:>6}: {row} >= {}", f.rows[k], f.b[k]);
                }
                let _ = writeln!(
                    w,
                    "    simplex {}  walls are facets {}  picard {}",
                    yes_no(f.is_simplex),
                    yes_no(f.walls_are_facets),
                    f.picard_number.map_or("-".into(), |p| p.to_string())
                );
            }
        }
        if let Some(g) = &self.genericity {
            let wit = |ws: &Vec<Vec<String>>| ws.iter().map(|s| braces(s)).collect::<Vec<_>>().join(" ");
            let _ = writeln!(w, "genericity:");
            let _ = writeln!(w, "  q-factorial generic: {} {}", yes_no(g.q_factorial_generic), wit(&g.q_factorial_witnesses));
            let _ = writeln!(w, "  fiber generic: {} {}", yes_no(g.fiber_generic), wit(&g.fiber_witnesses));
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(w, "oracle ({}): {} {}", o.mode, if o.agreed { "agrees" } else { "DISAGREES" }, o.intervals.join(" "));
        }
        if let Some(m) = &self.message {
            let _ = writeln!(w, "{m}");
        }
        out
    }
}

fn write_variety(w: &mut String, v: &VarietyDescriptor, indent: &str) {
    let _ = writeln!(w, "{indent}dim {}  colors {}  {}", dim_text(v.dim), braces(&v.colors), flags_text(&v.flags));
    if let Some(p) = &v.not_q_gorenstein_at {
        let _ = writeln!(w, "{indent}not Q-Gorenstein at vertex {p}");
    }
    if let Some(fan) = &v.fan {
        for c in fan {
            let rays: Vec<String> = c.rays.iter().map(ToString::to_string).collect();
            let _ = writeln!(w, "{indent}cone {} colors {}", rays.join(" "), braces(&c.colors));
        }
    }
}

fn flags_text(f: &Flags) -> String {
    format!(
        "valid {} QG {} QF {} picard {}",
        yes_no(f.gh_valid),
        yes_no(f.q_gorenstein),
        yes_no(f.q_factorial),
        f.picard_number.map_or("-".into(), |p| p.to_string())
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn braces(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn list_or_none(v: &[String]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

fn dim_text(d: Option<usize>) -> String {
    d.map_or("empty".into(), |d| d.to_string())
}
