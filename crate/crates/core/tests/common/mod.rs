//! Test-only helpers: a brute-force grid oracle for coverage and generators
//! for random boxes, partitions and small cover instances.
//!
//! The oracle enumerates every point of the grid `(1/(2D)) Z` inside the
//! target. When all coordinates involved are multiples of `1/D`, those points
//! include a midpoint of every cell of the box arrangement, so the oracle is
//! exact. It is exponential in the dimension and only meant for `n <= 4`,
//! `D <= 64`.

#![allow(dead_code)]

use hadwiger_core::general::expansion_margin;
use hadwiger_core::verify::boxes_union_equals;
use hadwiger_core::{
    compress_along, expand_eps, r, BoxClass, Cover, CubeFace, Cuboid, Point, Rational, Segment,
    Target,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn frac(p: i64, q: i64) -> Rational {
    r(p, q)
}

fn grid_values(lo: &Rational, hi: &Rational, den: i64) -> Vec<Rational> {
    if lo == hi {
        return vec![lo.clone()];
    }
    let step = 2 * den;
    // smallest and largest grid indices in [lo, hi]
    let scale = Rational::from_int(step);
    let mut first = (lo * &scale).floor();
    if Rational::from_big(first.clone(), 1.into()).unwrap() < (lo * &scale) {
        first += 1;
    }
    let last = (hi * &scale).floor();
    let mut out = Vec::new();
    let mut i = first;
    while i <= last {
        out.push(Rational::from_big(i.clone(), step.into()).unwrap());
        i += 1;
    }
    out
}

fn for_each_grid_point(region: &Cuboid, den: i64, f: &mut impl FnMut(&[Rational]) -> bool) -> bool {
    let axes: Vec<Vec<Rational>> = (0..region.dim())
        .map(|i| {
            let (lo, hi) = region.interval(i);
            grid_values(lo, hi, den)
        })
        .collect();
    if axes.iter().any(Vec::is_empty) {
        return true;
    }
    let mut idx = vec![0usize; axes.len()];
    let mut p: Vec<Rational> = axes.iter().map(|a| a[0].clone()).collect();
    loop {
        if !f(&p) {
            return false;
        }
        let mut ax = axes.len();
        loop {
            if ax == 0 {
                return true;
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < axes[ax].len() {
                p[ax] = axes[ax][idx[ax]].clone();
                break;
            }
            idx[ax] = 0;
            p[ax] = axes[ax][0].clone();
        }
    }
}

fn in_box(b: &Cuboid, p: &[Rational]) -> bool {
    (0..b.dim()).all(|i| {
        let (lo, hi) = b.interval(i);
        lo <= &p[i] && &p[i] <= hi
    })
}

/// Brute-force coverage: every half-step grid point of the target lies in some box.
pub fn oracle_covers(boxes: &[Cuboid], target: &Target, den: i64) -> bool {
    target
        .regions()
        .iter()
        .all(|region| for_each_grid_point(region, den, &mut |p| boxes.iter().any(|b| in_box(b, p))))
}

/// Grid point in no box.
pub fn outside_all(boxes: &[Cuboid], p: &Point) -> bool {
    !boxes.iter().any(|b| in_box(b, &p.0))
}

/// Multiples of `1/den` with `lo` and `hi` in the given index range.
fn interval<R: Rng>(rng: &mut R, den: i64, max_len: i64) -> (i64, i64) {
    let len = rng.random_range(0..=max_len.min(den));
    let lo = rng.random_range(0..=den - len);
    (lo, lo + len)
}

/// A box in `[0,1]^n` with coordinates in `(1/den) Z` and side sum below one.
pub fn random_strict_box<R: Rng>(rng: &mut R, n: usize, den: i64) -> Cuboid {
    let total = rng.random_range(0..den);
    box_with_total(rng, n, den, total)
}

fn box_with_total<R: Rng>(rng: &mut R, n: usize, den: i64, total: i64) -> Cuboid {
    // split `total` into n nonnegative parts
    let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.random_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut sides = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.iter().chain(std::iter::once(&total)) {
        sides.push(c - prev);
        prev = *c;
    }
    sides.shuffle(rng);
    Cuboid::from_intervals(
        sides
            .iter()
            .map(|&s| {
                let lo = rng.random_range(0..=den - s);
                (frac(lo, den), frac(lo + s, den))
            })
            .collect(),
    )
}

/// A box with side sum at most one that has positive extent along `k`.
pub fn random_compressible_target<R: Rng>(rng: &mut R, n: usize, k: usize, den: i64) -> Cuboid {
    loop {
        let total = rng.random_range(1..=den);
        let b = box_with_total(rng, n, den, total);
        if !b.is_degenerate(k) {
            return b;
        }
    }
}

/// Random guillotine partition of `b` into at most `pieces` boxes, every cut on
/// the grid `(1/den) Z` strictly inside the box being cut.
pub fn random_partition<R: Rng>(rng: &mut R, b: &Cuboid, den: i64, pieces: usize) -> Vec<Cuboid> {
    let mut parts = vec![b.clone()];
    for _ in 1..pieces {
        let i = rng.random_range(0..parts.len());
        let p = parts[i].clone();
        let mut axes: Vec<usize> = (0..p.dim())
            .filter(|&ax| {
                let (lo, hi) = p.interval(ax);
                (hi - lo) * Rational::from_int(den) >= Rational::from_int(2)
            })
            .collect();
        axes.shuffle(rng);
        let Some(&ax) = axes.first() else { continue };
        let (lo, hi) = p.interval(ax);
        let a = (lo * Rational::from_int(den)).floor();
        let c = (hi * Rational::from_int(den)).floor();
        let a: i64 = a.try_into().unwrap();
        let c: i64 = c.try_into().unwrap();
        let cut = frac(rng.random_range(a + 1..c), den);
        let left = p.with_interval(ax, lo.clone(), cut.clone());
        let right = p.with_interval(ax, cut, hi.clone());
        parts[i] = left;
        parts.push(right);
    }
    parts
}

fn random_face<R: Rng>(rng: &mut R, n: usize, max_dim: usize) -> CubeFace {
    let d = rng.random_range(0..=max_dim);
    let mut axes: Vec<usize> = (0..n).collect();
    axes.shuffle(rng);
    let mut values = vec![None; n];
    for &ax in &axes[d..] {
        values[ax] = Some(rng.random_bool(0.5));
    }
    CubeFace::new(values)
}

fn random_point<R: Rng>(rng: &mut R, n: usize, den: i64) -> Point {
    Point(
        (0..n)
            .map(|_| frac(rng.random_range(0..=den), den))
            .collect(),
    )
}

fn random_segment<R: Rng>(rng: &mut R, n: usize, den: i64) -> Segment {
    // segments run from 1/4 to 3/4, so their grid needs a multiple of 4
    let den = 4 * (den / 4).max(1);
    let ax = rng.random_range(0..n);
    let mut p = random_point(rng, n, den);
    p.0[ax] = frac(1, 4);
    let q = p.with(ax, frac(3, 4));
    Segment::new(p, q).unwrap()
}

pub struct Instance {
    pub den: i64,
    pub cover: Cover,
    pub target: Target,
}

/// A random target (faces of dimension at most two, segments, points) and a
/// cover that usually comes close: a jittered tiling of each part with some
/// tiles dropped, plus noise boxes.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> Instance {
    let den = 4 * rng.random_range(1..=max_den / 4);
    let mut target = Target::empty(n);
    for _ in 0..rng.random_range(1..=3) {
        target.faces.push(random_face(rng, n, 2));
    }
    if rng.random_bool(0.5) {
        target = target.with_segments([random_segment(rng, n, den)]);
    }
    if rng.random_bool(0.5) {
        target = target.with_points([random_point(rng, n, den)]);
    }
    let mut boxes = Vec::new();
    for region in target.regions() {
        let pieces = rng.random_range(1..=6);
        for tile in random_partition(rng, &region, den, pieces) {
            if rng.random_bool(0.1) {
                continue;
            }
            let grow: Vec<(Rational, Rational)> = (0..n)
                .map(|i| {
                    let (lo, hi) = tile.interval(i);
                    let shrink_lo = rng.random_bool(0.1);
                    let shrink_hi = rng.random_bool(0.1);
                    let d = frac(1, den);
                    let lo = if shrink_lo && lo < hi {
                        lo + &d
                    } else {
                        lo.clone()
                    };
                    let hi = if shrink_hi && lo < *hi {
                        hi - &d
                    } else {
                        hi.clone()
                    };
                    (lo, hi)
                })
                .collect();
            boxes.push(Cuboid::from_intervals(grow));
        }
    }
    for _ in 0..rng.random_range(0..=3) {
        let iv = (0..n)
            .map(|_| {
                let (a, b) = interval(rng, den, den);
                (frac(a, den), frac(b, den))
            })
            .collect();
        boxes.push(Cuboid::from_intervals(iv));
    }
    boxes.shuffle(rng);
    Instance {
        den,
        cover: Cover::new(n, boxes, BoxClass::NonStrict).unwrap(),
        target,
    }
}

/// Checks one expansion; returns a description of the first violated property.
pub fn check_expand(b: &Cuboid) -> Result<(), String> {
    let e = expand_eps(b).map_err(|e| e.to_string())?;
    if !e.in_class(BoxClass::Strict) {
        return Err(format!("{e} is not strict"));
    }
    if !e.contains_box(b) {
        return Err(format!("{e} does not contain {b}"));
    }
    let margin = expansion_margin(b).map_err(|e| e.to_string())?;
    if e != b.grown(&margin) || !margin.is_positive() {
        return Err(format!("{e} is not {b} grown by {margin}"));
    }
    Ok(())
}

/// Compresses a random partition of `target` along `k`.
pub fn check_compress(
    parts: &[Cuboid],
    target: &Cuboid,
    k: usize,
    eps: &Rational,
) -> Result<(), String> {
    let out = compress_along(parts, target, k, eps).map_err(|e| e.to_string())?;
    let (lo, hi) = target.interval(k);
    let squeezed = target.with_interval(k, lo + eps, hi.clone());
    if let Some(b) = out.iter().find(|b| !b.in_class(BoxClass::Strict)) {
        return Err(format!("{b} is not strict"));
    }
    let refs: Vec<&Cuboid> = out.iter().collect();
    if !boxes_union_equals(&refs, &squeezed) {
        return Err(format!("union is not {squeezed}"));
    }
    Ok(())
}

/// A random exact partition with its axis and epsilon, from a seed.
pub fn compress_case(seed: u64) -> (Vec<Cuboid>, Cuboid, usize, Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6);
    let den = 2 * rng.random_range(1..=16);
    let k = rng.random_range(0..n);
    let target = random_compressible_target(&mut rng, n, k, den);
    let pieces = rng.random_range(1..=12);
    let parts = random_partition(&mut rng, &target, den, pieces);
    let q = rng.random_range(2..=64);
    let eps = target.side(k) * frac(rng.random_range(1..q), q);
    (parts, target, k, eps)
}
