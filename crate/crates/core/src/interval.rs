//! Intervals of the parameter ε.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Unbounded,
    Open(Rat),
    Closed(Rat),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Open(x) | Endpoint::Closed(x) => Some(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Empty,
    Point,
    Open,
    Closed,
    HalfOpen,
}

/// A convex subset of the rational line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsInterval {
    Empty,
    Range { lo: Endpoint, hi: Endpoint },
}

impl EpsInterval {
    pub fn point(x: Rat) -> Self {
        EpsInterval::Range { lo: Endpoint::Closed(x.clone()), hi: Endpoint::Closed(x) }
    }

    pub fn all() -> Self {
        EpsInterval::Range { lo: Endpoint::Unbounded, hi: Endpoint::Unbounded }
    }

    /// Builds a range, collapsing degenerate inputs to `Empty`.
    pub fn range(lo: Endpoint, hi: Endpoint) -> Self {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            if a > b || (a == b && !(lo.is_closed() && hi.is_closed())) {
                return EpsInterval::Empty;
            }
        }
        EpsInterval::Range { lo, hi }
    }

    pub fn open(lo: Option<Rat>, hi: Option<Rat>) -> Self {
        let f = |x: Option<Rat>| x.map_or(Endpoint::Unbounded, Endpoint::Open);
        Self::range(f(lo), f(hi))
    }

    pub fn closed(lo: Option<Rat>, hi: Option<Rat>) -> Self {
        let f = |x: Option<Rat>| x.map_or(Endpoint::Unbounded, Endpoint::Closed);
        Self::range(f(lo), f(hi))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, EpsInterval::Empty)
    }

    pub fn kind(&self) -> IntervalKind {
        match self {
            EpsInterval::Empty => IntervalKind::Empty,
            EpsInterval::Range { lo, hi } => {
                if self.as_point().is_some() {
                    return IntervalKind::Point;
                }
                match (lo.is_closed(), hi.is_closed()) {
                    (true, true) => IntervalKind::Closed,
                    (false, false) => IntervalKind::Open,
                    _ => IntervalKind::HalfOpen,
                }
            }
        }
    }

    pub fn as_point(&self) -> Option<&Rat> {
        match self {
            EpsInterval::Range { lo: Endpoint::Closed(a), hi: Endpoint::Closed(b) } if a == b => Some(a),
            _ => None,
        }
    }

    pub fn lo(&self) -> Option<&Endpoint> {
        match self {
            EpsInterval::Empty => None,
            EpsInterval::Range { lo, .. } => Some(lo),
        }
    }

    pub fn hi(&self) -> Option<&Endpoint> {
        match self {
            EpsInterval::Empty => None,
            EpsInterval::Range { hi, .. } => Some(hi),
        }
    }

    pub fn lower(&self) -> Option<&Rat> {
        self.lo().and_then(Endpoint::value)
    }

    pub fn upper(&self) -> Option<&Rat> {
        self.hi().and_then(Endpoint::value)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            EpsInterval::Empty => false,
            EpsInterval::Range { lo, hi } => {
                let lo_ok = match lo {
                    Endpoint::Unbounded => true,
                    Endpoint::Open(a) => x > a,
                    Endpoint::Closed(a) => x >= a,
                };
                let hi_ok = match hi {
                    Endpoint::Unbounded => true,
                    Endpoint::Open(b) => x < b,
                    Endpoint::Closed(b) => x <= b,
                };
                lo_ok && hi_ok
            }
        }
    }

    pub fn intersect(&self, other: &EpsInterval) -> EpsInterval {
        let (EpsInterval::Range { lo: l1, hi: h1 }, EpsInterval::Range { lo: l2, hi: h2 }) = (self, other) else {
            return EpsInterval::Empty;
        };
        let lo = match (l1.value(), l2.value()) {
            (None, _) => l2.clone(),
            (_, None) => l1.clone(),
            (Some(a), Some(b)) if a > b => l1.clone(),
            (Some(a), Some(b)) if b > a => l2.clone(),
            _ => if l1.is_closed() { l2.clone() } else { l1.clone() },
        };
        let hi = match (h1.value(), h2.value()) {
            (None, _) => h2.clone(),
            (_, None) => h1.clone(),
            (Some(a), Some(b)) if a < b => h1.clone(),
            (Some(a), Some(b)) if b < a => h2.clone(),
            _ => if h1.is_closed() { h2.clone() } else { h1.clone() },
        };
        EpsInterval::range(lo, hi)
    }

    /// Topological closure.
    pub fn closure(&self) -> EpsInterval {
        match self {
            EpsInterval::Empty => EpsInterval::Empty,
            EpsInterval::Range { lo, hi } => {
                let c = |e: &Endpoint| e.value().map_or(Endpoint::Unbounded, |x| Endpoint::Closed(x.clone()));
                EpsInterval::range(c(lo), c(hi))
            }
        }
    }

    /// Some point strictly inside, or the point itself for a singleton.
    pub fn sample(&self) -> Option<Rat> {
        match self {
            EpsInterval::Empty => None,
            EpsInterval::Range { lo, hi } => match (lo.value(), hi.value()) {
                (Some(a), Some(b)) if a == b => Some(a.clone()),
                (Some(a), Some(b)) => Some(a.midpoint(b)),
                (Some(a), None) => Some(a + Rat::one()),
                (None, Some(b)) => Some(b - Rat::one()),
                (None, None) => Some(Rat::zero()),
            },
        }
    }
}

impl fmt::Display for EpsInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsInterval::Empty => write!(f, "{{}}"),
            EpsInterval::Range { lo, hi } => {
                if let Some(p) = self.as_point() {
                    return write!(f, "{{{p}}}");
                }
                match lo {
                    Endpoint::Unbounded => write!(f, "(-inf")?,
                    Endpoint::Open(a) => write!(f, "({a}")?,
                    Endpoint::Closed(a) => write!(f, "[{a}")?,
                }
                match hi {
                    Endpoint::Unbounded => write!(f, ",+inf)"),
                    Endpoint::Open(b) => write!(f, ",{b})"),
                    Endpoint::Closed(b) => write!(f, ",{b}]"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        let r = |p, q| Rat::frac(p, q);
        let half_open = EpsInterval::range(Endpoint::Closed(r(0, 1)), Endpoint::Open(r(1, 2)));
        assert_eq!(half_open.to_string(), "[0,1/2)");
        assert_eq!(EpsInterval::point(r(1, 2)).to_string(), "{1/2}");
        assert_eq!(EpsInterval::open(Some(r(1, 2)), Some(r(3, 2))).to_string(), "(1/2,3/2)");
        assert_eq!(EpsInterval::open(None, Some(r(1, 1))).to_string(), "(-inf,1)");
        assert_eq!(half_open.kind(), IntervalKind::HalfOpen);
    }

    #[test]
    fn intersection() {
        let a = EpsInterval::open(None, Some(Rat::from_int(2)));
        let b = EpsInterval::closed(Some(Rat::zero()), Some(Rat::from_int(2)));
        let c = a.intersect(&b);
        assert_eq!(c.to_string(), "[0,2)");
        assert!(EpsInterval::open(Some(Rat::one()), Some(Rat::one())).is_empty());
    }
}
