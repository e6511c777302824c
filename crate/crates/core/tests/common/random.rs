//! Seeded generators of random families and embeddings.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polymmp::horospherical::{fan_from_polytope, BDivisor, HoroSpace, PolarizedEmbedding, PolytopeView, RowSystem};
use polymmp::parametric::ParametricFamily;
use polymmp::roots::{RootKind, RootSystem};
use polymmp::{Rat, RatMat, RatVec};

pub const DEFAULT_SEED: u64 = 0x5eed_2026;

/// Seed from `POLYMMP_SEED`, falling back to a fixed value.
pub fn seed() -> u64 {
    std::env::var("POLYMMP_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed())
}

fn nonzero_row(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn primitive_row(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v = nonzero_row(rng, n, bound);
        let g = v.iter().fold(0i64, |g, &x| num_gcd(g, x.abs()));
        if g == 1 {
            return v;
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn ints(v: &[i64]) -> RatVec {
    RatVec::from_ints(v)
}

/// Bounded family with `n <= 3`, at most 8 rows, entries in `[-5, 5]` and `0` in the stable interval.
pub fn family(rng: &mut ChaCha8Rng) -> ParametricFamily {
    loop {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(n + 1..=8);
        let rows: Vec<RatVec> = (0..m).map(|_| ints(&nonzero_row(rng, n, 5))).collect();
        let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=-1)).collect();
        let c: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=5)).collect();
        let exempt: BTreeSet<usize> =
            if rng.gen_bool(0.25) { [rng.gen_range(0..m)].into_iter().collect() } else { BTreeSet::new() };
        let a = RatMat::from_rows(n, rows).unwrap();
        let Ok(fam) = ParametricFamily::new(a, ints(&b), ints(&c), exempt) else { continue };
        if fam.omega_max().contains(&Rat::zero()) {
            return fam;
        }
    }
}

fn embedding_from_polytope(space: HoroSpace, rays: Vec<RatVec>, b_tilde: RatVec) -> Option<PolarizedEmbedding> {
    let rs = RowSystem::new(&space, &rays).ok()?;
    let all: Vec<usize> = (0..rs.len()).collect();
    let view = PolytopeView::new(&rs, b_tilde.clone(), &all, Rat::zero()).ok()?;
    if view.is_empty() || view.dim != Some(space.rank()) {
        return None;
    }
    let facet_rows: BTreeSet<usize> = view.facets.iter().flat_map(|f| f.rows.iter().copied()).collect();
    if (0..rays.len()).any(|i| !facet_rows.contains(&i)) {
        return None;
    }
    let fan = fan_from_polytope(&view, &rs);
    let g_stable = (0..rays.len()).map(|i| -b_tilde[i].clone()).collect();
    let colors: BTreeMap<usize, Rat> = rs.color_rows().into_iter().map(|k| (rs.color_of(k).unwrap(), -b_tilde[k].clone())).collect();
    let e = PolarizedEmbedding::new(space, rays, fan, BDivisor { g_stable, colors }).ok()?;
    e.validate_ample().ok()?;
    Some(e)
}

/// Random projective toric variety of dimension 2 or 3 with an ample divisor; all rays are facets.
pub fn toric(rng: &mut ChaCha8Rng) -> Option<PolarizedEmbedding> {
    let n = rng.gen_range(2..=3);
    let m = rng.gen_range(n + 1..=n + 3);
    let rays: Vec<RatVec> = (0..m).map(|_| ints(&primitive_row(rng, n, 2))).collect();
    if rays.iter().collect::<BTreeSet<_>>().len() < m {
        return None;
    }
    let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=-1)).collect();
    embedding_from_polytope(HoroSpace::toric(n), rays, ints(&b))
}

/// Random embedding of `SL3/U` with both colors; walls bound the moment polytope from below.
pub fn a2(rng: &mut ChaCha8Rng) -> Option<PolarizedEmbedding> {
    let space = HoroSpace::new(
        RootSystem::new(RootKind::A, 2).ok()?,
        BTreeSet::new(),
        vec![ints(&[1, 0]), ints(&[0, 1])],
        Some(vec!["alpha".into(), "beta".into()]),
    )
    .ok()?;
    let m = rng.gen_range(1..=4);
    let rays: Vec<RatVec> = (0..m).map(|_| ints(&primitive_row(rng, 2, 3))).collect();
    if rays.iter().collect::<BTreeSet<_>>().len() < m {
        return None;
    }
    let mut b: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=-1)).collect();
    b.extend((0..2).map(|_| rng.gen_range(-3..=0)));
    embedding_from_polytope(space, rays, ints(&b))
}
