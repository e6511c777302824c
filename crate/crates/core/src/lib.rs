//! Exact minimal model program for horospherical varieties, computed by moving
//! polytopes `Ax >= B + εC` and tracking their combinatorial type in ε.

pub mod arith;
pub mod brute;
pub mod document;
pub mod horospherical;
pub mod linalg;
pub mod interval;
pub mod lp;
pub mod mmp;
pub mod parametric;
pub mod polytope;
pub mod report;
pub mod roots;

pub use arith::{ArithError, Rat, RatMat, RatVec};
