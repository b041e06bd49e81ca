//! Tangency-set inputs for testing: random rationals and a grid of values at
//! and around the case thresholds.

use rand::Rng;

use crate::geometry::Point;
use crate::rational::{r, Rational};
use crate::skeleton::TangencySet;

/// Coordinates at which the four-dimensional case analysis changes branch.
pub fn boundary_values() -> Vec<Rational> {
    [
        (0, 1),
        (1, 8),
        (1, 4),
        (5, 16),
        (3, 8),
        (1, 2),
        (5, 8),
        (3, 4),
        (7, 8),
        (1, 1),
    ]
    .into_iter()
    .map(|(p, q)| r(p, q))
    .collect()
}

/// A uniform rational in `[0, 1]` with denominator at most `max_den`.
pub fn random_unit_rational<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den);
    let p = rng.random_range(0..=q);
    r(p, q)
}

/// Base points with independent random nontrivial coordinates.
pub fn random_tangency_set<R: Rng + ?Sized>(rng: &mut R, n: usize, max_den: i64) -> TangencySet {
    let base = (0..n)
        .map(|i| {
            Point(
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            random_unit_rational(rng, max_den)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    TangencySet::new(base)
}

/// The set whose base point `i` has the entries of `coords` on the axes other than `i`.
pub fn set_from_nontrivial(coords: &[Vec<Rational>]) -> TangencySet {
    let n = coords.len();
    let base = (0..n)
        .map(|i| {
            let mut it = coords[i].iter();
            Point(
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            it.next().expect("n - 1 coordinates").clone()
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    TangencySet::new(base)
}

/// Four-dimensional sets built from [`boundary_values`]: every triple used
/// for all four points, and every triple for the last point with the others
/// at `1/2`. 2000 sets in total.
pub fn boundary_grid() -> Vec<TangencySet> {
    let v = boundary_values();
    let mut triples = Vec::with_capacity(v.len().pow(3));
    for a in &v {
        for b in &v {
            for c in &v {
                triples.push(vec![a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let mid = vec![r(1, 2); 3];
    let mut out = Vec::with_capacity(2 * triples.len());
    for t in &triples {
        out.push(set_from_nontrivial(&[
            t.clone(),
            t.clone(),
            t.clone(),
            t.clone(),
        ]));
    }
    for t in &triples {
        out.push(set_from_nontrivial(&[
            mid.clone(),
            mid.clone(),
            mid.clone(),
            t.clone(),
        ]));
    }
    out
}
