//! Points, axis-aligned boxes and faces of the unit cube.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{CoverError, Result};
use crate::rational::Rational;

/// A point of `R^n` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Rational::zero(); n])
    }

    /// The basis vector `e_axis`.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut p = Point::origin(n);
        p.0[axis] = Rational::one();
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn in_unit_cube(&self) -> bool {
        self.0.iter().all(|c| *c >= 0 && *c <= 1)
    }

    /// Copy of `self` with coordinate `axis` replaced.
    pub fn with(&self, axis: usize, value: Rational) -> Self {
        let mut p = self.clone();
        p.0[axis] = value;
        p
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The two families of boxes: side sums strictly below one, or at most one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxClass {
    Strict,
    NonStrict,
}

impl BoxClass {
    pub fn admits(self, side_sum: &Rational) -> bool {
        match self {
            BoxClass::Strict => *side_sum < 1,
            BoxClass::NonStrict => *side_sum <= 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoxClass::Strict => "strict",
            BoxClass::NonStrict => "nonstrict",
        }
    }
}

impl FromStr for BoxClass {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(BoxClass::Strict),
            "nonstrict" => Ok(BoxClass::NonStrict),
            other => Err(CoverError::Parse(format!("unknown box class `{other}`"))),
        }
    }
}

/// A closed axis-aligned box `prod [lo_i, hi_i]`, possibly degenerate in some axes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cuboid {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl Cuboid {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(CoverError::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(CoverError::InvalidBox(format!(
                "axis {i} has lo {} > hi {}",
                lo[i], hi[i]
            )));
        }
        Ok(Cuboid { lo, hi })
    }

    /// Builds a box from per-axis `(lo, hi)` pairs. Panics if some `lo > hi`.
    pub fn from_intervals(intervals: Vec<(Rational, Rational)>) -> Self {
        let (lo, hi) = intervals.into_iter().unzip();
        Cuboid::new(lo, hi).expect("well-formed intervals")
    }

    /// The degenerate box containing only `p`.
    pub fn point(p: &Point) -> Self {
        Cuboid {
            lo: p.0.clone(),
            hi: p.0.clone(),
        }
    }

    /// `[0,1]^n`.
    pub fn unit(n: usize) -> Self {
        Cuboid {
            lo: vec![Rational::zero(); n],
            hi: vec![Rational::one(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn interval(&self, axis: usize) -> (&Rational, &Rational) {
        (&self.lo[axis], &self.hi[axis])
    }

    pub fn side(&self, axis: usize) -> Rational {
        &self.hi[axis] - &self.lo[axis]
    }

    pub fn is_degenerate(&self, axis: usize) -> bool {
        self.lo[axis] == self.hi[axis]
    }

    /// Number of axes with positive extent.
    pub fn free_dim(&self) -> usize {
        (0..self.dim()).filter(|&i| !self.is_degenerate(i)).count()
    }

    /// Sum of side lengths, the quantity the box classes constrain.
    pub fn side_sum(&self) -> Rational {
        (0..self.dim()).map(|i| self.side(i)).sum()
    }

    pub fn in_class(&self, class: BoxClass) -> bool {
        class.admits(&self.side_sum())
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(CoverError::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        Ok(self.contains_coords(&p.0))
    }

    pub(crate) fn contains_coords(&self, p: &[Rational]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn contains_box(&self, other: &Cuboid) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Closed boxes share at least one point.
    pub fn intersects(&self, other: &Cuboid) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    pub fn intersection(&self, other: &Cuboid) -> Option<Cuboid> {
        if !self.intersects(other) {
            return None;
        }
        let lo = (0..self.dim())
            .map(|i| std::cmp::max(&self.lo[i], &other.lo[i]).clone())
            .collect();
        let hi = (0..self.dim())
            .map(|i| std::cmp::min(&self.hi[i], &other.hi[i]).clone())
            .collect();
        Some(Cuboid { lo, hi })
    }

    /// Whether the relative interiors meet: per axis the open intervals overlap,
    /// with a degenerate axis contributing its single value.
    pub fn relative_interiors_overlap(&self, other: &Cuboid) -> bool {
        (0..self.dim()).all(|i| {
            let (a, b) = (self.interval(i), other.interval(i));
            match (self.is_degenerate(i), other.is_degenerate(i)) {
                (true, true) => a.0 == b.0,
                (true, false) => b.0 < a.0 && a.0 < b.1,
                (false, true) => a.0 < b.0 && b.0 < a.1,
                (false, false) => a.0.max(b.0) < a.1.min(b.1),
            }
        })
    }

    /// Copy with the interval on `axis` replaced. Panics if `lo > hi`.
    pub fn with_interval(&self, axis: usize, lo: Rational, hi: Rational) -> Cuboid {
        assert!(lo <= hi, "with_interval: lo > hi on axis {axis}");
        let mut b = self.clone();
        b.lo[axis] = lo;
        b.hi[axis] = hi;
        b
    }

    /// The box grown by `eps` on both ends of every axis.
    pub fn grown(&self, eps: &Rational) -> Cuboid {
        Cuboid {
            lo: self.lo.iter().map(|x| x - eps).collect(),
            hi: self.hi.iter().map(|x| x + eps).collect(),
        }
    }

    pub fn center(&self) -> Point {
        let two = Rational::from_int(2);
        Point(
            (0..self.dim())
                .map(|i| (&self.lo[i] + &self.hi[i]) / &two)
                .collect(),
        )
    }
}

impl fmt::Debug for Cuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, " x ")?;
            }
            if self.is_degenerate(i) {
                write!(f, "{{{}}}", self.lo[i])?;
            } else {
                write!(f, "[{},{}]", self.lo[i], self.hi[i])?;
            }
        }
        Ok(())
    }
}

/// A face of `[0,1]^n`: some axes pinned to 0 or 1, the rest free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubeFace {
    values: Vec<Option<bool>>,
}

impl CubeFace {
    /// `values[a] = Some(v)` pins axis `a` to `v as 0/1`.
    pub fn new(values: Vec<Option<bool>>) -> Self {
        CubeFace { values }
    }

    pub fn from_fixed(n: usize, fixed: &[(usize, bool)]) -> Result<Self> {
        let mut values = vec![None; n];
        for &(a, v) in fixed {
            if a >= n {
                return Err(CoverError::InvalidArgument(format!(
                    "axis {a} out of range"
                )));
            }
            if values[a].is_some() {
                return Err(CoverError::InvalidArgument(format!("axis {a} fixed twice")));
            }
            values[a] = Some(v);
        }
        Ok(CubeFace { values })
    }

    pub fn dim_ambient(&self) -> usize {
        self.values.len()
    }

    /// Dimension of the face, `n - |fixed|`.
    pub fn dim(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn value(&self, axis: usize) -> Option<bool> {
        self.values[axis]
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn fixed(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(a, v)| v.map(|v| (a, v)))
    }

    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&a| self.values[a].is_none())
            .collect()
    }

    pub fn fixed_axes(&self) -> Vec<usize> {
        self.fixed().map(|(a, _)| a).collect()
    }

    /// The face as a closed box, degenerate on the fixed axes.
    pub fn as_box(&self) -> Cuboid {
        Cuboid::from_intervals(
            self.values
                .iter()
                .map(|v| match v {
                    None => (Rational::zero(), Rational::one()),
                    Some(false) => (Rational::zero(), Rational::zero()),
                    Some(true) => (Rational::one(), Rational::one()),
                })
                .collect(),
        )
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.dim() == self.dim_ambient()
            && p.in_unit_cube()
            && self.fixed().all(|(a, v)| p.0[a] == if v { 1 } else { 0 })
    }

    /// Whether `other` is a face of `self`.
    pub fn contains_face(&self, other: &CubeFace) -> bool {
        self.fixed().all(|(a, v)| other.values[a] == Some(v))
    }

    /// The smallest face containing both, if they intersect.
    pub fn meet(&self, other: &CubeFace) -> Option<CubeFace> {
        let mut values = self.values.clone();
        for (a, v) in other.fixed() {
            match values[a] {
                Some(w) if w != v => return None,
                _ => values[a] = Some(v),
            }
        }
        Some(CubeFace { values })
    }

    pub fn vertex_coords(&self) -> Option<Point> {
        self.values
            .iter()
            .map(|v| v.map(|v| Rational::from_int(v as i64)))
            .collect::<Option<Vec<_>>>()
            .map(Point)
    }

    fn order_key(&self) -> (Vec<usize>, Vec<bool>) {
        (self.fixed_axes(), self.fixed().map(|(_, v)| v).collect())
    }
}

impl Ord for CubeFace {
    /// Canonical order: by the sorted list of fixed axes, then by their values.
    fn cmp(&self, other: &Self) -> Ordering {
        self.values
            .len()
            .cmp(&other.values.len())
            .then_with(|| self.order_key().cmp(&other.order_key()))
    }
}

impl PartialOrd for CubeFace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CubeFace {
    /// One character per axis: `*` free, `0`/`1` fixed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            let c = match v {
                None => '*',
                Some(false) => '0',
                Some(true) => '1',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeFace({self})")
    }
}

impl FromStr for CubeFace {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '*' => Ok(None),
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                _ => Err(CoverError::Parse(format!("bad face descriptor `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(CubeFace::new)
    }
}

/// All `k`-dimensional faces of `[0,1]^n` in canonical order.
pub fn enumerate_faces(n: usize, k: usize) -> Vec<CubeFace> {
    assert!(k <= n, "face dimension {k} exceeds ambient dimension {n}");
    let m = n - k;
    let mut out = Vec::new();
    for axes in combinations(n, m) {
        for bits in 0u64..(1u64 << m) {
            let mut values = vec![None; n];
            for (j, &a) in axes.iter().enumerate() {
                // first fixed axis is the most significant bit
                values[a] = Some((bits >> (m - 1 - j)) & 1 == 1);
            }
            out.push(CubeFace { values });
        }
    }
    out
}

/// `m`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            go(a + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;

    fn uniform(n: usize, lo: Rational, hi: Rational) -> Cuboid {
        Cuboid::from_intervals(vec![(lo, hi); n])
    }

    #[test]
    fn side_sums() {
        assert_eq!(uniform(4, r(0, 1), r(1, 4)).side_sum(), 1);
        assert_eq!(Cuboid::point(&Point::origin(4)).side_sum(), 0);
        let b = Cuboid::from_intervals(vec![
            (r(1, 4), r(3, 4)),
            (r(0, 1), r(1, 4)),
            (r(0, 1), r(1, 4)),
            (r(0, 1), r(0, 1)),
        ]);
        assert_eq!(b.side_sum(), 1);
    }

    #[test]
    fn class_membership() {
        let q = uniform(4, r(0, 1), r(1, 4));
        assert!(!q.in_class(BoxClass::Strict));
        assert!(q.in_class(BoxClass::NonStrict));
        assert!(Cuboid::point(&Point::origin(4)).in_class(BoxClass::Strict));
    }

    #[test]
    fn point_containment_is_closed() {
        let cube = Cuboid::unit(4);
        assert!(cube.contains_point(&Point(vec![r(1, 2); 4])).unwrap());
        let small = uniform(4, r(0, 1), r(1, 4));
        let edge = Point(vec![r(1, 4), r(0, 1), r(0, 1), r(0, 1)]);
        assert!(small.contains_point(&edge).unwrap());
        let outside = Point(vec![r(1, 4) + r(1, 1000), r(0, 1), r(0, 1), r(0, 1)]);
        assert!(!small.contains_point(&outside).unwrap());
        assert!(small.contains_point(&Point::origin(3)).is_err());
    }

    #[test]
    fn rejects_inverted_interval() {
        assert!(Cuboid::new(vec![r(1, 2)], vec![r(1, 4)]).is_err());
        assert!(Cuboid::new(vec![r(1, 2)], vec![]).is_err());
    }

    #[test]
    fn face_counts() {
        assert_eq!(enumerate_faces(4, 2).len(), 24);
        assert_eq!(enumerate_faces(4, 0).len(), 16);
        assert_eq!(enumerate_faces(5, 3).len(), 40);
        for n in 3..=6 {
            assert_eq!(enumerate_faces(n, n - 2).len(), 2 * n * (n - 1));
        }
    }

    #[test]
    fn face_order_is_canonical() {
        let faces = enumerate_faces(4, 2);
        let names: Vec<String> = faces.iter().take(5).map(|f| f.to_string()).collect();
        assert_eq!(names, ["00**", "01**", "10**", "11**", "0*0*"]);
        let mut sorted = faces.clone();
        sorted.sort();
        assert_eq!(sorted, faces);
    }

    #[test]
    fn face_parse_and_meet() {
        let f: CubeFace = "**00".parse().unwrap();
        let g: CubeFace = "*0*0".parse().unwrap();
        assert_eq!(f.meet(&g).unwrap().to_string(), "*000");
        let h: CubeFace = "**10".parse().unwrap();
        assert!(f.meet(&h).is_none());
        assert!(f.contains_face(&"*000".parse().unwrap()));
        assert_eq!(f.dim(), 2);
    }

    #[test]
    fn relative_interior_overlap() {
        let a = Cuboid::from_intervals(vec![(r(0, 1), r(1, 2)), (r(0, 1), r(0, 1))]);
        let b = Cuboid::from_intervals(vec![(r(1, 2), r(1, 1)), (r(0, 1), r(0, 1))]);
        let c = Cuboid::from_intervals(vec![(r(1, 4), r(3, 4)), (r(0, 1), r(0, 1))]);
        assert!(!a.relative_interiors_overlap(&b));
        assert!(a.relative_interiors_overlap(&c));
    }
}
