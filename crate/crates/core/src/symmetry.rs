//! Signed coordinate permutations, the symmetry group of `[0,1]^n`.

use std::fmt;

use crate::error::{CoverError, Result};
use crate::geometry::{CubeFace, Cuboid, Point};
use crate::rational::Rational;

/// `x -> y` with `y[perm[i]] = x[i]`, or `1 - x[i]` when `flip[i]` is set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flip: Vec<bool>,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flip: Vec<bool>) -> Result<Self> {
        let n = perm.len();
        if flip.len() != n {
            return Err(CoverError::DimensionMismatch {
                expected: n,
                got: flip.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(CoverError::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        Ok(CubeSymmetry { perm, flip })
    }

    pub fn identity(n: usize) -> Self {
        CubeSymmetry {
            perm: (0..n).collect(),
            flip: vec![false; n],
        }
    }

    /// Exchanges two axes.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut s = Self::identity(n);
        s.perm.swap(a, b);
        s
    }

    /// Reflects the given axes.
    pub fn reflect(n: usize, axes: &[usize]) -> Self {
        let mut s = Self::identity(n);
        for &a in axes {
            s.flip[a] = true;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flip(&self) -> &[bool] {
        &self.flip
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CubeSymmetry) -> CubeSymmetry {
        let n = self.dim();
        let perm = (0..n).map(|i| self.perm[other.perm[i]]).collect();
        let flip = (0..n)
            .map(|i| self.flip[other.perm[i]] ^ other.flip[i])
            .collect();
        CubeSymmetry { perm, flip }
    }

    pub fn inverse(&self) -> CubeSymmetry {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut flip = vec![false; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            flip[self.perm[i]] = self.flip[i];
        }
        CubeSymmetry { perm, flip }
    }

    /// Image of axis `i`.
    pub fn axis_image(&self, i: usize) -> usize {
        self.perm[i]
    }

    fn map_coord(&self, i: usize, x: &Rational) -> Rational {
        if self.flip[i] {
            x.complement()
        } else {
            x.clone()
        }
    }
}

impl fmt::Display for CubeSymmetry {
    /// `perm a b c / flip 0 1 0`, the form used in certificates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
        let flip: Vec<&str> = self
            .flip
            .iter()
            .map(|&b| if b { "1" } else { "0" })
            .collect();
        write!(f, "{} / {}", perm.join(" "), flip.join(" "))
    }
}

impl fmt::Debug for CubeSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeSymmetry({self})")
    }
}

impl std::str::FromStr for CubeSymmetry {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoverError::Parse(format!("bad symmetry `{s}`"));
        let (p, f) = s.split_once('/').ok_or_else(bad)?;
        let perm = p
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let flip = f
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        CubeSymmetry::new(perm, flip)
    }
}

/// Things a cube symmetry acts on.
pub trait Transform: Sized {
    fn transform(&self, s: &CubeSymmetry) -> Self;
}

impl Transform for Point {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, x) in self.0.iter().enumerate() {
            out[s.perm[i]] = s.map_coord(i, x);
        }
        Point(out)
    }
}

impl Transform for Cuboid {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        let n = self.dim();
        let mut iv = vec![(Rational::zero(), Rational::zero()); n];
        for i in 0..n {
            let (lo, hi) = self.interval(i);
            iv[s.perm[i]] = if s.flip[i] {
                (hi.complement(), lo.complement())
            } else {
                (lo.clone(), hi.clone())
            };
        }
        Cuboid::from_intervals(iv)
    }
}

impl Transform for CubeFace {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        let mut values = vec![None; self.dim_ambient()];
        for (i, v) in self.values().iter().enumerate() {
            values[s.perm[i]] = v.map(|v| v ^ s.flip[i]);
        }
        CubeFace::new(values)
    }
}

impl<T: Transform> Transform for Vec<T> {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        self.iter().map(|x| x.transform(s)).collect()
    }
}

pub fn apply_symmetry<T: Transform>(s: &CubeSymmetry, x: &T) -> T {
    x.transform(s)
}

/// All `2^n n!` symmetries, ordered lexicographically by `(perm, flip)`.
pub fn all_symmetries(n: usize) -> Vec<CubeSymmetry> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for bits in 0u64..(1u64 << n) {
            let flip = (0..n).map(|i| (bits >> (n - 1 - i)) & 1 == 1).collect();
            out.push(CubeSymmetry {
                perm: perm.clone(),
                flip,
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_faces;
    use crate::rational::r;
    use proptest::prelude::*;

    fn edge_box() -> Cuboid {
        Cuboid::from_intervals(vec![
            (r(1, 4), r(3, 4)),
            (r(0, 1), r(1, 4)),
            (r(0, 1), r(1, 4)),
            (r(0, 1), r(0, 1)),
        ])
    }

    #[test]
    fn group_order() {
        let all = all_symmetries(4);
        assert_eq!(all.len(), 384);
        assert_eq!(all[0], CubeSymmetry::identity(4));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn identity_fixes_boxes() {
        let b = edge_box();
        assert_eq!(b.transform(&CubeSymmetry::identity(4)), b);
    }

    #[test]
    fn flip_of_symmetric_interval() {
        let b = edge_box();
        assert_eq!(b.transform(&CubeSymmetry::reflect(4, &[0])), b);
        let flipped = b.transform(&CubeSymmetry::reflect(4, &[1]));
        assert_eq!(flipped.interval(1), (&r(3, 4), &r(1, 1)));
    }

    #[test]
    fn swap_moves_edges() {
        let e: CubeFace = "*000".parse().unwrap();
        assert_eq!(
            e.transform(&CubeSymmetry::swap(4, 0, 2)).to_string(),
            "00*0"
        );
    }

    #[test]
    fn faces_map_to_faces() {
        let s = CubeSymmetry::new(vec![2, 0, 3, 1], vec![true, false, true, false]).unwrap();
        let faces = enumerate_faces(4, 2);
        let mut images: Vec<CubeFace> = faces.iter().map(|f| f.transform(&s)).collect();
        images.sort();
        assert_eq!(images, faces);
    }

    #[test]
    fn rejects_non_permutation() {
        assert!(CubeSymmetry::new(vec![0, 0], vec![false, false]).is_err());
        assert!(CubeSymmetry::new(vec![0, 1], vec![false]).is_err());
    }

    #[test]
    fn display_parse() {
        let s = CubeSymmetry::new(vec![2, 0, 3, 1], vec![true, false, true, false]).unwrap();
        assert_eq!(s.to_string(), "2 0 3 1 / 1 0 1 0");
        assert_eq!(s.to_string().parse::<CubeSymmetry>().unwrap(), s);
    }

    fn symmetry_strategy(n: usize) -> impl Strategy<Value = CubeSymmetry> {
        (
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(p, f)| CubeSymmetry::new(p, f).unwrap())
    }

    fn box_strategy(n: usize) -> impl Strategy<Value = Cuboid> {
        proptest::collection::vec((0i64..=16, 0i64..=16), n).prop_map(|v| {
            Cuboid::from_intervals(
                v.into_iter()
                    .map(|(a, b)| (r(a.min(b), 16), r(a.max(b), 16)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn preserves_side_sum(s in symmetry_strategy(5), b in box_strategy(5)) {
            prop_assert_eq!(b.transform(&s).side_sum(), b.side_sum());
        }

        #[test]
        fn inverse_undoes(s in symmetry_strategy(5), b in box_strategy(5)) {
            prop_assert_eq!(b.transform(&s).transform(&s.inverse()), b.clone());
            let p = b.center();
            prop_assert_eq!(p.transform(&s).transform(&s.inverse()), p);
        }

        #[test]
        fn compose_matches_sequential(a in symmetry_strategy(4), c in symmetry_strategy(4), b in box_strategy(4)) {
            prop_assert_eq!(b.transform(&a.compose(&c)), b.transform(&c).transform(&a));
            prop_assert_eq!(a.compose(&a.inverse()), CubeSymmetry::identity(4));
        }
    }
}
