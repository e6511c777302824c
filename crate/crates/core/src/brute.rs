//! Reference decomposition straight from the definition of equivalence: two
//! values of ε are equivalent when every subset of rows has the same
//! membership status in `Ω¹_I`, `Ω⁰_I ∖ Ω¹_I` or neither.
//!
//! Exponential in the number of rows; intended as an oracle for small inputs.

use std::collections::BTreeSet;

use crate::arith::Rat;
use crate::interval::{Endpoint, EpsInterval};
use crate::parametric::{FamilyError, OmegaSets, ParametricFamily};

/// Largest number of active rows the oracle accepts.
pub const MAX_ROWS: usize = 14;

/// `Ω⁰_I` and `Ω¹_I` for every subset `I` of the active rows.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    pub subsets: Vec<Vec<usize>>,
    pub sets: Vec<OmegaSets>,
}

impl OmegaTable {
    pub fn build(fam: &ParametricFamily) -> OmegaTable {
        let rows = fam.active();
        let mut subsets = Vec::with_capacity(1 << rows.len());
        for mask in 0u32..(1 << rows.len()) {
            subsets.push(rows.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &r)| r).collect());
        }
        let sets = subsets.iter().map(|s: &Vec<usize>| fam.omega_intervals(s)).collect();
        OmegaTable { subsets, sets }
    }

    fn signature(&self, eps: &Rat) -> Vec<u8> {
        self.sets
            .iter()
            .map(|o| {
                if o.omega1.contains(eps) {
                    2
                } else if o.omega0.contains(eps) {
                    1
                } else {
                    0
                }
            })
            .collect()
    }

    fn omega1_of(&self, subset: &[usize]) -> &EpsInterval {
        let k = self.subsets.iter().position(|s| s == subset).expect("subset is tabulated");
        &self.sets[k].omega1
    }

    fn endpoints(&self) -> BTreeSet<Rat> {
        let mut out = BTreeSet::new();
        for o in &self.sets {
            for i in [&o.omega0, &o.omega1] {
                out.extend(i.lower().cloned());
                out.extend(i.upper().cloned());
            }
        }
        out
    }
}

/// Class intervals for ε >= 0 computed from the full Ω table of every row subset.
pub fn brute_decomposition(fam: &ParametricFamily) -> Result<Vec<EpsInterval>, FamilyError> {
    brute_decomposition_with(fam, None)
}

/// As [`brute_decomposition`], reusing a table already built for `fam`.
pub fn brute_decomposition_with(fam: &ParametricFamily, first: Option<OmegaTable>) -> Result<Vec<EpsInterval>, FamilyError> {
    let mut first = first;
    let mut fam = fam.clone();
    let mut start = Rat::zero();
    let mut out = Vec::new();
    loop {
        if fam.active().len() > MAX_ROWS {
            return Err(FamilyError::Shape(format!("{} rows exceed the oracle limit", fam.active().len())));
        }
        let table = match first.take() {
            Some(t) => t,
            None => OmegaTable::build(&fam),
        };
        let mut stable = table.omega1_of(&[]).clone();
        for &i in fam.active() {
            if !fam.exempt().contains(&i) {
                stable = stable.intersect(table.omega1_of(&[i]));
            }
        }
        if out.is_empty() && !stable.contains(&start) {
            return Err(FamilyError::StartOutsideStable(stable.to_string()));
        }
        let hi = stable.upper().cloned();
        let cuts: Vec<Rat> = table
            .endpoints()
            .into_iter()
            .filter(|e| *e > start && hi.as_ref().is_none_or(|h| e < h))
            .collect();
        let mut points: Vec<(Rat, bool)> = vec![(start.clone(), true)];
        for c in &cuts {
            let prev = points.last().expect("nonempty").0.clone();
            points.push(((&prev + c) / Rat::from_int(2), false));
            points.push((c.clone(), true));
        }
        let last = points.last().expect("nonempty").0.clone();
        points.push((hi.as_ref().map_or(&last + Rat::one(), |h| (&last + h) / Rat::from_int(2)), false));
        let sigs: Vec<Vec<u8>> = points.iter().map(|(e, _)| table.signature(e)).collect();
        let mut i = 0;
        while i < points.len() {
            let mut j = i;
            while j + 1 < points.len() && sigs[j + 1] == sigs[i] {
                j += 1;
            }
            let lo = if points[i].1 { Endpoint::Closed(points[i].0.clone()) } else { Endpoint::Open(points[i - 1].0.clone()) };
            let up = if points[j].1 {
                Endpoint::Closed(points[j].0.clone())
            } else if j + 1 < points.len() {
                Endpoint::Open(points[j + 1].0.clone())
            } else {
                hi.clone().map_or(Endpoint::Unbounded, Endpoint::Open)
            };
            out.push(EpsInterval::range(lo, up));
            i = j + 1;
        }
        let Some(e1) = hi else { return Ok(out) };
        if !table.omega1_of(&[]).contains(&e1) {
            out.push(EpsInterval::point(e1));
            return Ok(out);
        }
        let keep: Vec<usize> = fam
            .active()
            .iter()
            .copied()
            .filter(|&i| fam.exempt().contains(&i) || table.omega1_of(&[i]).contains(&e1))
            .collect();
        fam = fam.with_active(&keep)?;
        start = e1;
    }
}
