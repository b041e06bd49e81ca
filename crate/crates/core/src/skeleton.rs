//! Covering targets: cube skeletons, tangency point sets and the three
//! segment orbits used by the four-dimensional construction.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{CoverError, Result};
use crate::geometry::{enumerate_faces, CubeFace, Cuboid, Point};
use crate::rational::{r, Rational};
use crate::symmetry::{CubeSymmetry, Transform};

/// For each axis `i` a base point `x_i` with `x_i[i] = 0`; the realized set
/// is the union of the pairs `{x_i, x_i + e_i}`.
///
/// Partner points are derived on demand, never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TangencySet {
    base: Vec<Point>,
}

impl TangencySet {
    /// Wraps the base points without checking them; see [`TangencySet::validate`].
    pub fn new(base: Vec<Point>) -> Self {
        TangencySet { base }
    }

    /// Like [`TangencySet::new`] but rejects invalid input.
    pub fn checked(base: Vec<Point>) -> Result<Self> {
        let t = TangencySet { base };
        t.check()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base_points(&self) -> &[Point] {
        &self.base
    }

    pub fn base(&self, i: usize) -> &Point {
        &self.base[i]
    }

    pub fn partner(&self, i: usize) -> Point {
        self.base[i].with(i, &self.base[i].0[i] + Rational::one())
    }

    pub fn validate(&self) -> bool {
        self.check().is_ok()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.dim();
        for (i, p) in self.base.iter().enumerate() {
            if p.dim() != n {
                return Err(CoverError::InvalidTangencySet(format!(
                    "base point {i} has dimension {}, expected {n}",
                    p.dim()
                )));
            }
            if !p.0[i].is_zero() {
                return Err(CoverError::InvalidTangencySet(format!(
                    "base point {i} has coordinate {i} equal to {}, expected 0",
                    p.0[i]
                )));
            }
            if !p.in_unit_cube() {
                return Err(CoverError::InvalidTangencySet(format!(
                    "base point {i} = {p} leaves the unit cube"
                )));
            }
        }
        Ok(())
    }

    /// `x_0, x_0 + e_0, x_1, x_1 + e_1, ...` including coincidences.
    pub fn realized_points(&self) -> Vec<Point> {
        (0..self.dim())
            .flat_map(|i| [self.base[i].clone(), self.partner(i)])
            .collect()
    }

    pub fn distinct_points(&self) -> Vec<Point> {
        let set: BTreeSet<Point> = self.realized_points().into_iter().collect();
        set.into_iter().collect()
    }

    /// The coordinates of `x_i` other than the `i`-th.
    pub fn nontrivial(&self, i: usize) -> Vec<Rational> {
        (0..self.dim())
            .filter(|&j| j != i)
            .map(|j| self.base[i].0[j].clone())
            .collect()
    }
}

/// Base points separated by ` | `, coordinates by spaces.
impl fmt::Display for TangencySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.base.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for (j, c) in p.0.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// Accepts the display form, or one base point per line; `#` starts a comment.
impl std::str::FromStr for TangencySet {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self> {
        let base = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split('|'))
            .filter(|chunk| !chunk.trim().is_empty())
            .map(|chunk| {
                chunk
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Vec<Rational>>>()
                    .map(Point)
            })
            .collect::<Result<Vec<_>>>()?;
        if base.iter().any(|p| p.dim() != base.len()) {
            return Err(CoverError::InvalidTangencySet(format!(
                "expected {} points of dimension {}",
                base.len(),
                base.len()
            )));
        }
        TangencySet::checked(base)
    }
}

impl Transform for TangencySet {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        let n = self.dim();
        let mut base = vec![Point::origin(n); n];
        for i in 0..n {
            let j = s.axis_image(i);
            // a reflected axis swaps which point of the pair sits on the 0-facet
            base[j] = if s.flip()[i] {
                self.partner(i).transform(s)
            } else {
                self.base[i].transform(s)
            };
        }
        TangencySet { base }
    }
}

pub fn validate_tangency_set(t: &TangencySet) -> bool {
    t.validate()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentKind {
    Side,
    SemiCentral,
    Central,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Side => "side",
            SegmentKind::SemiCentral => "semi-central",
            SegmentKind::Central => "central",
        }
    }

    /// `[(1/4, k/4, 0, ..), (3/4, k/4, 0, ..)]` with `k = 0, 1, 2`.
    pub fn representative(self, n: usize) -> Segment {
        let k = match self {
            SegmentKind::Side => 0,
            SegmentKind::SemiCentral => 1,
            SegmentKind::Central => 2,
        };
        let mut a = Point::origin(n);
        a.0[0] = r(1, 4);
        a.0[1] = r(k, 4);
        let b = a.with(0, r(3, 4));
        Segment::new(a, b).expect("representative segment")
    }
}

impl std::str::FromStr for SegmentKind {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "side" => Ok(SegmentKind::Side),
            "semi-central" => Ok(SegmentKind::SemiCentral),
            "central" => Ok(SegmentKind::Central),
            _ => Err(CoverError::Parse(format!("unknown segment kind `{s}`"))),
        }
    }
}

/// A segment parallel to an axis running from `1/4` to `3/4` along it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    /// Endpoints are stored with the smaller varying coordinate first.
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(CoverError::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let differing: Vec<usize> = (0..a.dim()).filter(|&i| a.0[i] != b.0[i]).collect();
        if differing.len() != 1 {
            return Err(CoverError::UnclassifiedSegment(format!(
                "[{a}, {b}] is not parallel to a single axis"
            )));
        }
        let ax = differing[0];
        let (a, b) = if a.0[ax] < b.0[ax] { (a, b) } else { (b, a) };
        if a.0[ax] != r(1, 4) || b.0[ax] != r(3, 4) {
            return Err(CoverError::UnclassifiedSegment(format!(
                "[{a}, {b}] does not run from 1/4 to 3/4"
            )));
        }
        Ok(Segment { a, b })
    }

    pub fn endpoints(&self) -> (&Point, &Point) {
        (&self.a, &self.b)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn axis(&self) -> usize {
        (0..self.a.dim())
            .find(|&i| self.a.0[i] != self.b.0[i])
            .expect("segment has a varying axis")
    }

    pub fn as_box(&self) -> Cuboid {
        Cuboid::new(self.a.0.clone(), self.b.0.clone()).expect("ordered endpoints")
    }

    pub fn kind(&self) -> Result<SegmentKind> {
        classify_segment(self)
    }
}

impl Transform for Segment {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        Segment::new(self.a.transform(s), self.b.transform(s))
            .expect("symmetries map segments to segments")
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Segment{self}")
    }
}

/// Orbit of the segment under cube symmetries, read off the fixed coordinates.
pub fn classify_segment(s: &Segment) -> Result<SegmentKind> {
    let ax = s.axis();
    let others: Vec<&Rational> = (0..s.dim())
        .filter(|&i| i != ax)
        .map(|i| &s.a.0[i])
        .collect();
    let extreme = others.iter().filter(|c| ***c == 0 || ***c == 1).count();
    let quarter = others
        .iter()
        .filter(|c| ***c == r(1, 4) || ***c == r(3, 4))
        .count();
    let half = others.iter().filter(|c| ***c == r(1, 2)).count();
    let m = others.len();
    match (extreme, quarter, half) {
        (e, 0, 0) if e == m => Ok(SegmentKind::Side),
        (e, 1, 0) if e + 1 == m => Ok(SegmentKind::SemiCentral),
        (e, 0, 1) if e + 1 == m => Ok(SegmentKind::Central),
        _ => Err(CoverError::UnclassifiedSegment(s.to_string())),
    }
}

/// A union of cube faces, segments and points to be covered.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Target {
    pub dim: usize,
    pub faces: Vec<CubeFace>,
    pub segments: Vec<Segment>,
    pub points: Vec<Point>,
}

impl Target {
    pub fn empty(dim: usize) -> Self {
        Target {
            dim,
            faces: Vec::new(),
            segments: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn with_points(mut self, points: impl IntoIterator<Item = Point>) -> Self {
        self.points.extend(points);
        self
    }

    pub fn with_segments(mut self, segments: impl IntoIterator<Item = Segment>) -> Self {
        self.segments.extend(segments);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty() && self.segments.is_empty() && self.points.is_empty()
    }

    pub fn part_count(&self) -> usize {
        self.faces.len() + self.segments.len() + self.points.len()
    }

    /// Every part as a closed box region, in canonical order: faces, segments, points.
    pub fn regions(&self) -> Vec<Cuboid> {
        self.faces
            .iter()
            .map(CubeFace::as_box)
            .chain(self.segments.iter().map(Segment::as_box))
            .chain(self.points.iter().map(Cuboid::point))
            .collect()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.regions().iter().any(|b| b.contains_coords(&p.0))
    }
}

impl Transform for Target {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        Target {
            dim: self.dim,
            faces: self.faces.transform(s),
            segments: self.segments.transform(s),
            points: self.points.transform(s),
        }
    }
}

/// The `k`-skeleton of `[0,1]^n` as a target.
pub fn skeleton_target(n: usize, k: usize) -> Target {
    Target {
        dim: n,
        faces: enumerate_faces(n, k),
        segments: Vec::new(),
        points: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::all_symmetries;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point(c.iter().map(|&(p, q)| r(p, q)).collect())
    }

    #[test]
    fn tangency_text_roundtrip() {
        let t: TangencySet = "0 1/2 1/3\n1/4 0 1\n# comment\n1 1 0\n".parse().unwrap();
        assert_eq!(t.base(1), &pt(&[(1, 4), (0, 1), (1, 1)]));
        assert_eq!(t.to_string(), "0 1/2 1/3 | 1/4 0 1 | 1 1 0");
        assert_eq!(t.to_string().parse::<TangencySet>().unwrap(), t);
        assert!("0 1/2 | 1/2 1/2".parse::<TangencySet>().is_err());
        assert!("0 1/2 1/3 | 1/4 0".parse::<TangencySet>().is_err());
    }

    #[test]
    fn skeleton_sizes() {
        assert_eq!(skeleton_target(4, 2).faces.len(), 24);
        assert_eq!(skeleton_target(3, 1).faces.len(), 12);
        assert_eq!(skeleton_target(5, 3).faces.len(), 40);
        assert!(skeleton_target(4, 2).segments.is_empty());
    }

    #[test]
    fn skeleton_membership_matches_definition() {
        // a point is in B_{k,n} iff at least n-k coordinates are 0 or 1
        let t = skeleton_target(4, 2);
        let vals = [r(0, 1), r(1, 3), r(1, 1)];
        let mut count = 0;
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    for d in &vals {
                        let p = Point(vec![a.clone(), b.clone(), c.clone(), d.clone()]);
                        let extreme = p.0.iter().filter(|x| **x == 0 || **x == 1).count();
                        assert_eq!(t.contains_point(&p), extreme >= 2, "{p}");
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 81);
    }

    #[test]
    fn tangency_validation() {
        let others = vec![
            pt(&[(0, 1), (1, 2), (1, 2), (1, 2)]),
            pt(&[(1, 2), (0, 1), (1, 2), (1, 2)]),
            pt(&[(1, 2), (1, 2), (0, 1), (1, 2)]),
        ];
        let mut base = others.clone();
        base.push(pt(&[(1, 10), (1, 20), (1, 50), (0, 1)]));
        assert!(validate_tangency_set(&TangencySet::new(base.clone())));

        let mut bad = base.clone();
        bad[1] = pt(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert!(!validate_tangency_set(&TangencySet::new(bad)));

        let mut origin = base.clone();
        origin[0] = Point::origin(4);
        let t = TangencySet::new(origin);
        assert!(t.validate());
        assert_eq!(t.partner(0), Point::unit(4, 0));

        let mut outside = base;
        outside[2] = pt(&[(3, 2), (1, 2), (0, 1), (1, 2)]);
        assert!(!TangencySet::new(outside).validate());
    }

    #[test]
    fn coinciding_pairs() {
        let t = TangencySet::new(vec![Point::origin(4); 4]);
        assert!(t.validate());
        assert_eq!(t.realized_points().len(), 8);
        assert_eq!(t.distinct_points().len(), 5);
    }

    #[test]
    fn tangency_sets_map_to_tangency_sets() {
        let t = TangencySet::new(vec![
            pt(&[(0, 1), (1, 3), (1, 2), (1, 5)]),
            pt(&[(1, 7), (0, 1), (2, 3), (1, 1)]),
            pt(&[(1, 1), (1, 9), (0, 1), (1, 2)]),
            pt(&[(1, 10), (1, 20), (1, 50), (0, 1)]),
        ]);
        let pts: BTreeSet<Point> = t.realized_points().into_iter().collect();
        for s in all_symmetries(4).iter().step_by(7) {
            let u = t.transform(s);
            assert!(u.validate());
            let mapped: BTreeSet<Point> = pts.iter().map(|p| p.transform(s)).collect();
            let got: BTreeSet<Point> = u.realized_points().into_iter().collect();
            assert_eq!(got, mapped);
        }
    }

    #[test]
    fn classifies_canonical_segments() {
        let side = Segment::new(
            pt(&[(1, 4), (0, 1), (0, 1), (0, 1)]),
            pt(&[(3, 4), (0, 1), (0, 1), (0, 1)]),
        )
        .unwrap();
        assert_eq!(classify_segment(&side).unwrap(), SegmentKind::Side);
        let semi = Segment::new(
            pt(&[(0, 1), (0, 1), (1, 4), (1, 4)]),
            pt(&[(0, 1), (0, 1), (3, 4), (1, 4)]),
        )
        .unwrap();
        assert_eq!(classify_segment(&semi).unwrap(), SegmentKind::SemiCentral);
        let central = Segment::new(
            pt(&[(1, 4), (1, 2), (0, 1), (0, 1)]),
            pt(&[(3, 4), (1, 2), (0, 1), (0, 1)]),
        )
        .unwrap();
        assert_eq!(classify_segment(&central).unwrap(), SegmentKind::Central);
        let odd = Segment::new(
            pt(&[(1, 4), (1, 3), (0, 1), (0, 1)]),
            pt(&[(3, 4), (1, 3), (0, 1), (0, 1)]),
        )
        .unwrap();
        assert!(classify_segment(&odd).is_err());
    }

    #[test]
    fn segment_shape_is_enforced() {
        assert!(Segment::new(pt(&[(1, 4), (0, 1)]), pt(&[(3, 4), (1, 1)])).is_err());
        assert!(Segment::new(pt(&[(0, 1), (0, 1)]), pt(&[(1, 2), (0, 1)])).is_err());
        // endpoint order does not matter
        let s = Segment::new(pt(&[(3, 4), (0, 1)]), pt(&[(1, 4), (0, 1)])).unwrap();
        assert_eq!(s.endpoints().0, &pt(&[(1, 4), (0, 1)]));
    }

    #[test]
    fn classification_is_symmetry_invariant() {
        for kind in [
            SegmentKind::Side,
            SegmentKind::SemiCentral,
            SegmentKind::Central,
        ] {
            let s = kind.representative(4);
            for g in all_symmetries(4) {
                assert_eq!(classify_segment(&s.transform(&g)).unwrap(), kind);
            }
        }
    }
}
