#![allow(dead_code)]

use std::collections::BTreeSet;

use polymmp::parametric::ParametricFamily;
use polymmp::{Rat, RatMat, RatVec};

pub fn r(p: i64, q: i64) -> Rat {
    Rat::frac(p, q)
}

pub fn toric_rows() -> RatMat {
    RatMat::from_int_rows(
        3,
        &[&[0, 0, 1], &[-1, -1, -2], &[2, 0, -1], &[-2, 0, -1], &[0, 2, -1], &[0, -2, -1]],
    )
}

pub fn toric1_family() -> ParametricFamily {
    ParametricFamily::new(
        toric_rows(),
        RatVec::from_ints(&[-1, -5, -3, -3, -3, -3]),
        RatVec::from_ints(&[1; 6]),
        BTreeSet::new(),
    )
    .unwrap()
}

pub fn toric2_family() -> ParametricFamily {
    ParametricFamily::new(
        toric_rows(),
        RatVec::from_ints(&[-1, -5, -4, -4, -3, -3]),
        RatVec::from_ints(&[1; 6]),
        BTreeSet::new(),
    )
    .unwrap()
}

/// The moment-side family of the rank-two example with three G-stable rows and both colors.
pub fn horo5_moment_family() -> ParametricFamily {
    ParametricFamily::new(
        RatMat::from_int_rows(2, &[&[0, -1], &[1, 0], &[-1, 1], &[1, 0], &[0, 1]]),
        RatVec::from_ints(&[-4, 1, -1, 0, 0]),
        RatVec::from_ints(&[3, -1, 1, 0, 0]),
        [3, 4].into_iter().collect(),
    )
    .unwrap()
}

pub fn horo5_family() -> ParametricFamily {
    ParametricFamily::new(
        RatMat::from_int_rows(2, &[&[0, -1], &[1, 0], &[-1, 1], &[1, 0], &[0, 1]]),
        RatVec::from_ints(&[-3, 0, -1, -1, -1]),
        RatVec::from_ints(&[1, 1, 1, 2, 2]),
        [3, 4].into_iter().collect(),
    )
    .unwrap()
}

pub mod random;

use std::path::PathBuf;

use polymmp::document::InputDocument;
use polymmp::horospherical::PolarizedEmbedding;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> PolarizedEmbedding {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    InputDocument::from_json(&text).unwrap().to_embedding().unwrap()
}

pub const FIXTURES: [&str; 7] =
    ["ex_toric1", "ex_toric2", "ex_horo1", "ex_horo2", "ex_horo3", "ex_horo4", "ex_horo5"];
