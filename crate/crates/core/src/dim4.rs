//! The 96-box strict cover of the 2-skeleton of `[0,1]^4` together with any
//! tangency set.
//!
//! Three stages:
//!
//! * an 88-box cover of the 2-skeleton by boxes with side sum exactly one,
//!   built from a type-A/type-B assignment of the 24 square faces;
//! * at most 8 strict boxes covering the tangency set plus one short segment
//!   `I`, found by a case analysis on the coordinates of the points;
//! * a face-by-face modification of the 88 boxes, starting from a
//!   neighbourhood of `I`, that makes every box strict.
//!
//! Face layouts in face coordinates (horizontal, vertical), corners are the
//! vertex boxes:
//!
//! ```text
//!        type A                  type B
//!   +--+--------+--+        +--+--------+--+
//!   |  |        |  |        |  |        |  |
//!   +--+        +--+        +--+--------+--+
//!   |  |--------|  |        |  |        |  |
//!   |  |        |  |        |  |        |  |
//!   +--+        +--+        +--+--------+--+
//!   |  |        |  |        |  |        |  |
//!   +--+--------+--+        +--+--------+--+
//! ```
//!
//! In a type-A face the horizontal edges are special: their edge boxes meet
//! the face only in the edge, and the middle column is split in two halves.

use std::fmt;

use crate::error::{CoverError, Result};
use crate::general::{expand_eps, expansion_margin, EpsStep, EpsilonSchedule};
use crate::geometry::{enumerate_faces, BoxClass, CubeFace, Cuboid, Point};
use crate::rational::{r, Rational};
use crate::skeleton::{skeleton_target, Segment, SegmentKind, TangencySet, Target};
use crate::symmetry::{all_symmetries, CubeSymmetry, Transform};
use crate::verify::{cover_regions, covers_target, verify_class, Cover};

const N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceType {
    /// Special edges run along this axis.
    A {
        special: usize,
    },
    B,
}

/// A type for every 2-face of `[0,1]^4`, in [`enumerate_faces`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTyping {
    faces: Vec<CubeFace>,
    types: Vec<FaceType>,
}

impl FaceTyping {
    pub fn new(types: Vec<FaceType>) -> Result<Self> {
        let faces = enumerate_faces(N, 2);
        if types.len() != faces.len() {
            return Err(CoverError::InvalidTyping(format!(
                "expected {} face types, got {}",
                faces.len(),
                types.len()
            )));
        }
        let t = FaceTyping { faces, types };
        t.check()?;
        Ok(t)
    }

    pub fn faces(&self) -> &[CubeFace] {
        &self.faces
    }

    pub fn types(&self) -> &[FaceType] {
        &self.types
    }

    pub fn type_of(&self, face: &CubeFace) -> Option<FaceType> {
        self.faces
            .iter()
            .position(|f| f == face)
            .map(|i| self.types[i])
    }

    /// The unique face in which `edge` is special.
    pub fn special_face(&self, edge: &CubeFace) -> Option<usize> {
        let axis = edge.free_axes()[0];
        let mut hits = self.faces.iter().enumerate().filter(|(i, f)| {
            f.contains_face(edge) && self.types[*i] == FaceType::A { special: axis }
        });
        let first = hits.next().map(|(i, _)| i);
        match hits.next() {
            Some(_) => None,
            None => first,
        }
    }

    pub fn count(&self, b: bool) -> usize {
        self.types
            .iter()
            .filter(|t| matches!(t, FaceType::B) == b)
            .count()
    }

    fn check(&self) -> Result<()> {
        for (f, t) in self.faces.iter().zip(&self.types) {
            if let FaceType::A { special } = t {
                if f.value(*special).is_some() {
                    return Err(CoverError::InvalidTyping(format!(
                        "special axis {special} is fixed in face {f}"
                    )));
                }
            }
        }
        for edge in enumerate_faces(N, 1) {
            let axis = edge.free_axes()[0];
            let n = self
                .faces
                .iter()
                .zip(&self.types)
                .filter(|(f, t)| f.contains_face(&edge) && **t == FaceType::A { special: axis })
                .count();
            if n != 1 {
                return Err(CoverError::InvalidTyping(format!(
                    "edge {edge} is special in {n} faces"
                )));
            }
        }
        Ok(())
    }
}

/// The assignment used throughout: in the facets `x4 = 0, 1` every face is
/// type A, faces fixing `(x2, x3)` are type A along `x4`, the rest type B.
pub fn paper_face_typing() -> FaceTyping {
    let types = enumerate_faces(N, 2)
        .iter()
        .map(|f| match f.fixed_axes()[..] {
            [0, 3] => FaceType::A { special: 2 },
            [1, 3] => FaceType::A { special: 0 },
            [2, 3] => FaceType::A { special: 1 },
            [1, 2] => FaceType::A { special: 3 },
            _ => FaceType::B,
        })
        .collect();
    FaceTyping::new(types).expect("the fixed typing is consistent")
}

fn frame(perm: [usize; 4], flip: [bool; 4]) -> CubeSymmetry {
    CubeSymmetry::new(perm.to_vec(), flip.to_vec()).expect("frame is a symmetry")
}

fn boxed(iv: [(Rational, Rational); 4]) -> Cuboid {
    Cuboid::from_intervals(iv.to_vec())
}

fn is_one(f: &CubeFace, axis: usize) -> bool {
    f.value(axis) == Some(true)
}

fn other_free(f: &CubeFace, axis: usize) -> usize {
    f.free_axes()
        .into_iter()
        .find(|&a| a != axis)
        .expect("a 2-face has two free axes")
}

/// Frame taking `{x2 = x4 = 0}` to a type-A face, axis 0 to the special axis
/// and axis 2 to the split axis, reflected when `flip_split`.
fn type_a_frame(face: &CubeFace, special: usize, flip_split: bool) -> CubeSymmetry {
    let p = other_free(face, special);
    let fx = face.fixed_axes();
    frame(
        [special, fx[0], p, fx[1]],
        [false, is_one(face, fx[0]), flip_split, is_one(face, fx[1])],
    )
}

/// Frame taking `{x1 = x2 = 0}` to a type-B face with axis 2 along `along`.
fn type_b_frame(face: &CubeFace, along: usize, flip_across: bool) -> CubeSymmetry {
    let b = other_free(face, along);
    let fx = face.fixed_axes();
    frame(
        [fx[0], fx[1], along, b],
        [is_one(face, fx[0]), is_one(face, fx[1]), false, flip_across],
    )
}

/// Frame taking the edge `x2 = x3 = x4 = 0` to `edge`, axis 1 to `shrink`
/// and axis 2 to `thin`.
fn edge_frame(edge: &CubeFace, shrink: usize, thin: usize) -> CubeSymmetry {
    let a = edge.free_axes()[0];
    let rest = (0..N)
        .find(|x| ![a, shrink, thin].contains(x))
        .expect("four axes");
    frame(
        [a, shrink, thin, rest],
        [
            false,
            is_one(edge, shrink),
            is_one(edge, thin),
            is_one(edge, rest),
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Vertex(usize),
    Edge(usize),
    Half(usize),
    Center(usize),
    Tangency,
}

struct Layout {
    faces: Vec<CubeFace>,
    edges: Vec<CubeFace>,
    vertices: Vec<CubeFace>,
    boxes: Vec<Cuboid>,
    roles: Vec<Role>,
    /// For each edge the axis its box is degenerate along.
    thin_axis: Vec<usize>,
}

fn layout88(typing: &FaceTyping) -> Result<Layout> {
    typing.check()?;
    let q = r(1, 4);
    let h = r(1, 2);
    let tq = r(3, 4);
    let z = Rational::zero();
    let one = Rational::one();
    let faces = enumerate_faces(N, 2);
    let edges = enumerate_faces(N, 1);
    let vertices = enumerate_faces(N, 0);
    let mut boxes = Vec::with_capacity(88);
    let mut roles = Vec::with_capacity(88);

    for (i, v) in vertices.iter().enumerate() {
        let iv = (0..N)
            .map(|a| {
                if is_one(v, a) {
                    (tq.clone(), one.clone())
                } else {
                    (z.clone(), q.clone())
                }
            })
            .collect();
        boxes.push(Cuboid::from_intervals(iv));
        roles.push(Role::Vertex(i));
    }

    let edge_box = boxed([
        (q.clone(), tq.clone()),
        (z.clone(), q.clone()),
        (z.clone(), z.clone()),
        (z.clone(), q.clone()),
    ]);
    let mut thin_axis = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let sf = typing
            .special_face(e)
            .ok_or_else(|| CoverError::InvalidTyping(format!("edge {e} has no special face")))?;
        let a = e.free_axes()[0];
        let c = other_free(&faces[sf], a);
        let shrink = (0..N).find(|x| *x != a && *x != c).expect("four axes");
        boxes.push(edge_box.transform(&edge_frame(e, shrink, c)));
        roles.push(Role::Edge(i));
        thin_axis.push(c);
    }

    let halves = [
        boxed([
            (q.clone(), tq.clone()),
            (z.clone(), z.clone()),
            (z.clone(), h.clone()),
            (z.clone(), z.clone()),
        ]),
        boxed([
            (q.clone(), tq.clone()),
            (z.clone(), z.clone()),
            (h.clone(), one.clone()),
            (z.clone(), z.clone()),
        ]),
    ];
    let center = boxed([
        (z.clone(), z.clone()),
        (z.clone(), z.clone()),
        (q.clone(), tq.clone()),
        (q.clone(), tq.clone()),
    ]);
    for (i, f) in faces.iter().enumerate() {
        match typing.types[i] {
            FaceType::A { special } => {
                let s = type_a_frame(f, special, false);
                for half in &halves {
                    boxes.push(half.transform(&s));
                    roles.push(Role::Half(i));
                }
            }
            FaceType::B => {
                let along = f.free_axes()[0];
                boxes.push(center.transform(&type_b_frame(f, along, false)));
                roles.push(Role::Center(i));
            }
        }
    }
    Ok(Layout {
        faces,
        edges,
        vertices,
        boxes,
        roles,
        thin_axis,
    })
}

/// 88 boxes of side sum one covering the 2-skeleton of `[0,1]^4`, with
/// pairwise disjoint interiors: 16 vertex, 32 edge and 40 face boxes.
pub fn cover88(typing: &FaceTyping) -> Result<Cover> {
    let layout = layout88(typing)?;
    Cover::new(N, layout.boxes, BoxClass::NonStrict)
}

/// Which branch of the tangency case analysis produced a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum A4Case {
    /// A point with every nontrivial coordinate within `1/4` of the boundary.
    A,
    /// Exactly one nontrivial coordinate in `[1/4, 3/4]`.
    B,
    /// Exactly two.
    C,
    /// All in `[1/4, 3/4]`, one outside `[3/8, 5/8]`.
    D,
    /// All in `[3/8, 5/8]`, one not an endpoint.
    E,
    /// All equal to `3/8` or `5/8`.
    F,
}

impl A4Case {
    pub fn as_str(self) -> &'static str {
        match self {
            A4Case::A => "a",
            A4Case::B => "b",
            A4Case::C => "c",
            A4Case::D => "d",
            A4Case::E => "e",
            A4Case::F => "f",
        }
    }

    pub const ALL: [A4Case; 6] = [
        A4Case::A,
        A4Case::B,
        A4Case::C,
        A4Case::D,
        A4Case::E,
        A4Case::F,
    ];
}

impl fmt::Display for A4Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for A4Case {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self> {
        A4Case::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CoverError::Parse(format!("unknown case `{s}`")))
    }
}

/// Eight strict boxes covering a tangency set and the segment `segment`.
#[derive(Clone, Debug)]
pub struct A4CoverResult {
    pub segment: Segment,
    pub boxes: Vec<Cuboid>,
    pub case_tag: A4Case,
    /// Maps the input to the frame in which the case normal form holds.
    pub normalizing_symmetry: CubeSymmetry,
}

fn in_mid(x: &Rational) -> bool {
    *x >= r(1, 4) && *x <= r(3, 4)
}

fn in_core(x: &Rational) -> bool {
    *x >= r(3, 8) && *x <= r(5, 8)
}

fn is_endpoint(x: &Rational) -> bool {
    *x == r(3, 8) || *x == r(5, 8)
}

fn classify(t: &TangencySet) -> A4Case {
    let coords: Vec<Vec<Rational>> = (0..N).map(|i| t.nontrivial(i)).collect();
    let mids = |c: &[Rational]| c.iter().filter(|x| in_mid(x)).count();
    if coords.iter().any(|c| mids(c) == 0) {
        A4Case::A
    } else if coords.iter().any(|c| mids(c) == 1) {
        A4Case::B
    } else if coords.iter().any(|c| mids(c) == 2) {
        A4Case::C
    } else if coords.iter().flatten().any(|x| !in_core(x)) {
        A4Case::D
    } else if coords.iter().flatten().any(|x| !is_endpoint(x)) {
        A4Case::E
    } else {
        A4Case::F
    }
}

/// The normal form of each case on the normalized set, in terms of
/// `x4 = (q, s, t, 0)` and `x3 = (q', s', 0, t')`.
fn normal_form(case: A4Case, t: &TangencySet) -> bool {
    let x4 = &t.base(3).0;
    let x3 = &t.base(2).0;
    let (q, s, u) = (&x4[0], &x4[1], &x4[2]);
    let quarter = r(1, 4);
    let half = r(1, 2);
    let low = |x: &Rational| *x < quarter;
    let left = |x: &Rational| *x >= quarter && *x <= half;
    match case {
        A4Case::A => low(q) && q >= s && s >= u,
        A4Case::B => in_mid(q) && low(s) && low(u),
        A4Case::C => left(q) && left(s) && low(u),
        A4Case::D => left(q) && left(s) && *u >= quarter && *u < r(3, 8),
        A4Case::E => *q > r(3, 8) && *q <= half && *u <= half && x3[3] <= half,
        A4Case::F => x3[3] == r(3, 8) && *u == r(3, 8) && x3[0] <= *q,
    }
}

fn lex_key(s: &CubeSymmetry) -> (Vec<usize>, Vec<bool>) {
    // `true` sorts after `false`, matching the first flipped axis being most significant
    (s.perm().to_vec(), s.flip().to_vec())
}

fn sorted_symmetries() -> Vec<CubeSymmetry> {
    let mut all = all_symmetries(N);
    all.sort_by_key(lex_key);
    all
}

fn j_interval(u: &Rational) -> (Rational, Rational) {
    let half = r(1, 2);
    (
        std::cmp::min(u, &half).clone(),
        std::cmp::max(u, &half).clone(),
    )
}

/// Covers the realized points of `t` and a side, semi-central or central
/// segment with 8 strict boxes.
pub fn a4_cover(t: &TangencySet) -> Result<A4CoverResult> {
    t.check()?;
    if t.dim() != N {
        return Err(CoverError::DimensionMismatch {
            expected: N,
            got: t.dim(),
        });
    }
    let case = classify(t);
    let sym = sorted_symmetries()
        .into_iter()
        .find(|s| normal_form(case, &t.transform(s)))
        .ok_or_else(|| {
            CoverError::Precondition(format!("no symmetry brings the set to case {case}"))
        })?;
    let nt = t.transform(&sym);
    let x4 = nt.base(3).0.clone();
    let x3 = nt.base(2).0.clone();
    let (q, s, u) = (x4[0].clone(), x4[1].clone(), x4[2].clone());
    let z = Rational::zero();
    let quarter = r(1, 4);
    let half = r(1, 2);
    let tq = r(3, 4);

    // boxes for x4 (and x3), which base points they take care of, and the segment
    let (kind, special, covered): (SegmentKind, Vec<Cuboid>, Vec<usize>) = match case {
        A4Case::A => (
            SegmentKind::Side,
            vec![boxed([
                (q, tq),
                (z.clone(), s),
                (z.clone(), u),
                (z.clone(), z),
            ])],
            vec![3],
        ),
        A4Case::B => (
            SegmentKind::Side,
            vec![boxed([
                (quarter, tq),
                (z.clone(), s),
                (z.clone(), u),
                (z.clone(), z),
            ])],
            vec![3],
        ),
        A4Case::C => (
            SegmentKind::Central,
            vec![boxed([
                (quarter, tq),
                (s, half),
                (z.clone(), u),
                (z.clone(), z),
            ])],
            vec![3],
        ),
        A4Case::D => {
            if s < r(3, 8) {
                (
                    SegmentKind::SemiCentral,
                    vec![boxed([
                        (quarter.clone(), tq),
                        (quarter, s),
                        (z.clone(), u),
                        (z.clone(), z),
                    ])],
                    vec![3],
                )
            } else {
                (
                    SegmentKind::Central,
                    vec![boxed([
                        (quarter, tq),
                        (s, half),
                        (z.clone(), u),
                        (z.clone(), z),
                    ])],
                    vec![3],
                )
            }
        }
        A4Case::E => {
            let (q2, s2, u2) = (x3[0].clone(), x3[1].clone(), x3[3].clone());
            let pair = if q2 <= half {
                [
                    boxed([
                        (q, tq),
                        j_interval(&s),
                        (z.clone(), u),
                        (z.clone(), z.clone()),
                    ]),
                    boxed([
                        (quarter, half),
                        j_interval(&s2),
                        (z.clone(), z.clone()),
                        (z, u2),
                    ]),
                ]
            } else {
                [
                    boxed([
                        (quarter, half.clone()),
                        j_interval(&s),
                        (z.clone(), u),
                        (z.clone(), z.clone()),
                    ]),
                    boxed([(half, tq), j_interval(&s2), (z.clone(), z.clone()), (z, u2)]),
                ]
            };
            (SegmentKind::Central, pair.to_vec(), vec![3, 2])
        }
        A4Case::F => {
            let (q2, s2) = (x3[0].clone(), x3[1].clone());
            let e = r(3, 8);
            let pair = [
                boxed([
                    (q2, tq),
                    j_interval(&s2),
                    (z.clone(), z.clone()),
                    (z.clone(), e.clone()),
                ]),
                boxed([(quarter, q), j_interval(&s), (z.clone(), e), (z.clone(), z)]),
            ];
            (SegmentKind::Central, pair.to_vec(), vec![2, 3])
        }
    };

    let mut boxes = special;
    for i in 0..N {
        if !covered.contains(&i) {
            boxes.push(Cuboid::point(nt.base(i)));
        }
        boxes.push(Cuboid::point(&nt.partner(i)));
    }
    debug_assert_eq!(boxes.len(), 8);

    let back = sym.inverse();
    let segment = kind.representative(N).transform(&back);
    let boxes: Vec<Cuboid> = boxes.iter().map(|b| b.transform(&back)).collect();

    let cover = Cover::new(N, boxes, BoxClass::Strict)?;
    let target = Target::empty(N)
        .with_points(t.realized_points())
        .with_segments([segment.clone()]);
    if !verify_class(&cover) || !covers_target(&cover, &target).covered {
        return Err(CoverError::Precondition(format!(
            "case {case} boxes fail on the given set"
        )));
    }
    Ok(A4CoverResult {
        segment,
        boxes: cover.boxes,
        case_tag: case,
        normalizing_symmetry: sym,
    })
}

/// The position `I` is moved to before the modification pass.
pub fn assembly_segment(kind: SegmentKind) -> Segment {
    let p = |c: [Rational; 4]| Point(c.to_vec());
    let (z, q, h, tq) = (Rational::zero(), r(1, 4), r(1, 2), r(3, 4));
    let (a, b) = match kind {
        SegmentKind::Side => (
            p([q.clone(), z.clone(), z.clone(), z.clone()]),
            p([tq.clone(), z.clone(), z.clone(), z.clone()]),
        ),
        SegmentKind::SemiCentral => (
            p([z.clone(), z.clone(), q.clone(), q.clone()]),
            p([z.clone(), z.clone(), tq.clone(), q.clone()]),
        ),
        SegmentKind::Central => (
            p([q.clone(), z.clone(), h.clone(), z.clone()]),
            p([tq.clone(), z.clone(), h.clone(), z.clone()]),
        ),
    };
    Segment::new(a, b).expect("valid segment")
}

/// Output of [`assemble96`].
#[derive(Clone, Debug)]
pub struct Assembly {
    pub cover: Cover,
    pub a4: A4CoverResult,
    /// Maps the input to the frame in which the modification pass ran.
    pub normalizing_symmetry: CubeSymmetry,
    pub steps: Vec<EpsStep>,
}

struct Pass<'a> {
    layout: Layout,
    typing: &'a FaceTyping,
    segment: Segment,
    kind: SegmentKind,
    points: Vec<Point>,
    strict: Vec<bool>,
    modified: Vec<bool>,
    added: Vec<bool>,
    skeleton: Vec<Cuboid>,
}

enum FaceRule {
    Central,
    /// Ready special edge at split coordinate 1 when set.
    Side(bool),
    /// A type-B face: the ready side runs along `along`, at the far end when
    /// set; `edge` is a modified edge box to grow first.
    Centered {
        along: usize,
        far: bool,
        edge: Option<usize>,
    },
}

impl Pass<'_> {
    fn edge_index(&self, e: &CubeFace) -> usize {
        self.layout
            .edges
            .iter()
            .position(|x| x == e)
            .expect("edge is enumerated")
    }

    fn box_of(&self, role: Role) -> Vec<usize> {
        (0..self.layout.roles.len())
            .filter(|&i| self.layout.roles[i] == role)
            .collect()
    }

    fn face_edges(&self, fi: usize) -> Vec<usize> {
        let f = &self.layout.faces[fi];
        (0..self.layout.edges.len())
            .filter(|&e| f.contains_face(&self.layout.edges[e]))
            .collect()
    }

    fn segment_in(&self, region: &Cuboid) -> bool {
        region.contains_box(&self.segment.as_box())
    }

    fn rule_for(&self, fi: usize) -> Option<FaceRule> {
        let f = &self.layout.faces[fi];
        match self.typing.types[fi] {
            FaceType::A { special } => {
                let p = other_free(f, special);
                if self.kind == SegmentKind::Central
                    && self.segment.axis() == special
                    && self.segment_in(&f.as_box())
                    && self.segment.endpoints().0 .0[p] == r(1, 2)
                {
                    return Some(FaceRule::Central);
                }
                for far in [false, true] {
                    let mut values = f.values().to_vec();
                    values[p] = Some(far);
                    let e = self.edge_index(&CubeFace::new(values));
                    let ready = self.modified[e]
                        || (self.kind == SegmentKind::Side
                            && self.segment_in(&self.layout.edges[e].as_box()));
                    if ready {
                        return Some(FaceRule::Side(far));
                    }
                }
                None
            }
            FaceType::B => {
                if self.kind == SegmentKind::SemiCentral && self.segment_in(&f.as_box()) {
                    let along = self.segment.axis();
                    let b = other_free(f, along);
                    let far = self.segment.endpoints().0 .0[b] == r(3, 4);
                    return Some(FaceRule::Centered {
                        along,
                        far,
                        edge: None,
                    });
                }
                let e = self
                    .face_edges(fi)
                    .into_iter()
                    .find(|&e| self.modified[e])?;
                let edge = &self.layout.edges[e];
                let along = edge.free_axes()[0];
                let b = other_free(f, along);
                Some(FaceRule::Centered {
                    along,
                    far: is_one(edge, b),
                    edge: Some(e),
                })
            }
        }
    }

    /// Applies the face rule and the edge rules for one face; returns the
    /// epsilons used, face first.
    fn add_face(&mut self, fi: usize, rule: &FaceRule, eps0: &Rational) -> Result<Vec<Rational>> {
        let f = self.layout.faces[fi].clone();
        let z = Rational::zero();
        let one = Rational::one();
        let (q, h, tq) = (r(1, 4), r(1, 2), r(3, 4));
        let eight = Rational::from_int(8);
        let e = eps0.clone();
        let k = |n: i64| Rational::from_int(n) * &e;
        let mut used = vec![e.clone()];

        match (rule, self.typing.types[fi]) {
            (FaceRule::Central, FaceType::A { special })
            | (FaceRule::Side(_), FaceType::A { special }) => {
                let (flip, lo_range) = match rule {
                    FaceRule::Central => (false, (z.clone(), &h - k(3))),
                    FaceRule::Side(far) => (*far, (k(6), &h + k(3))),
                    _ => unreachable!(),
                };
                let hi_lo = &h + k(3);
                let s_range = (&q - &e, &tq + &e);
                let canon = [
                    boxed([
                        s_range.clone(),
                        (z.clone(), z.clone()),
                        lo_range,
                        (z.clone(), z.clone()),
                    ]),
                    boxed([
                        s_range,
                        (z.clone(), z.clone()),
                        (hi_lo, one.clone()),
                        (z.clone(), z.clone()),
                    ]),
                ];
                let s = type_a_frame(&f, special, flip);
                for (slot, c) in self.box_of(Role::Half(fi)).into_iter().zip(canon) {
                    self.layout.boxes[slot] = c.transform(&s);
                    self.strict[slot] = true;
                }
            }
            (FaceRule::Centered { along, far, edge }, FaceType::B) => {
                if let Some(ei) = edge {
                    let slot = self.box_of(Role::Edge(*ei))[0];
                    self.layout.boxes[slot] = expand_eps(&self.layout.boxes[slot])?;
                }
                let c = boxed([
                    (z.clone(), z.clone()),
                    (z.clone(), z.clone()),
                    (&q - &e, &tq + &e),
                    (&q + k(4), &tq + &e),
                ]);
                let slot = self.box_of(Role::Center(fi))[0];
                self.layout.boxes[slot] = c.transform(&type_b_frame(&f, *along, *far));
                self.strict[slot] = true;
            }
            _ => {
                return Err(CoverError::Precondition(format!(
                    "rule does not match the type of face {f}"
                )))
            }
        }

        let normal: Vec<usize> = self
            .face_edges(fi)
            .into_iter()
            .filter(|&ei| match self.typing.types[fi] {
                FaceType::A { special } => self.layout.edges[ei].free_axes()[0] != special,
                FaceType::B => true,
            })
            .collect();
        let mut eps = &e / &eight;
        for ei in normal {
            if self.modified[ei] {
                continue;
            }
            let edge = self.layout.edges[ei].clone();
            let shrink = other_free(&f, edge.free_axes()[0]);
            let canon = boxed([
                (q.clone(), tq.clone()),
                (z.clone(), &q - Rational::from_int(3) * &eps),
                (z.clone(), eps.clone()),
                (z.clone(), &q + &eps),
            ]);
            let slot = self.box_of(Role::Edge(ei))[0];
            self.layout.boxes[slot] =
                canon.transform(&edge_frame(&edge, shrink, self.layout.thin_axis[ei]));
            self.strict[slot] = true;
            self.modified[ei] = true;
            used.push(eps.clone());
            eps = &eps / &eight;
        }
        Ok(used)
    }

    fn strict_refs(&self) -> Vec<&Cuboid> {
        self.layout
            .boxes
            .iter()
            .zip(&self.strict)
            .filter_map(|(b, &s)| s.then_some(b))
            .collect()
    }

    /// The step invariant after adding face `fi`: all boxes still cover the
    /// skeleton, and strict boxes cover every added face minus its corners
    /// together with the tangency points.
    ///
    /// Strict boxes only ever grow, so earlier strict regions stay covered;
    /// only faces met by a changed box and the new face need checking.
    fn invariant_holds(&self, fi: usize, before: &[Cuboid]) -> bool {
        let changed: Vec<usize> = (0..before.len())
            .filter(|&i| before[i] != self.layout.boxes[i])
            .collect();
        let touched: Vec<Cuboid> = self
            .skeleton
            .iter()
            .filter(|f| {
                changed
                    .iter()
                    .any(|&i| f.intersects(&before[i]) || f.intersects(&self.layout.boxes[i]))
            })
            .cloned()
            .collect();
        let all: Vec<&Cuboid> = self.layout.boxes.iter().collect();
        if !cover_regions(&all, &touched).covered {
            return false;
        }
        cover_regions(&self.strict_refs(), &cross(&self.layout.faces[fi])).covered
    }
}

/// The face with its four corner squares of side `1/4` removed, as two boxes.
fn cross(f: &CubeFace) -> [Cuboid; 2] {
    let fb = f.as_box();
    let [a, b] = [f.free_axes()[0], f.free_axes()[1]];
    [
        fb.with_interval(a, r(1, 4), r(3, 4)),
        fb.with_interval(b, r(1, 4), r(3, 4)),
    ]
}

fn face_at(fixed: &[(usize, bool)]) -> CubeFace {
    CubeFace::from_fixed(N, fixed).expect("valid face")
}

fn preferred_order(kind: SegmentKind) -> Vec<CubeFace> {
    let facet = |v: bool| {
        vec![
            face_at(&[(1, false), (3, v)]),
            face_at(&[(0, false), (3, v)]),
            face_at(&[(0, true), (3, v)]),
            face_at(&[(2, false), (3, v)]),
            face_at(&[(2, true), (3, v)]),
            face_at(&[(1, true), (3, v)]),
        ]
    };
    let mut order = facet(false);
    order.extend(
        enumerate_faces(N, 2)
            .into_iter()
            .filter(|f| f.value(3).is_none()),
    );
    order.extend(facet(true));
    if kind == SegmentKind::SemiCentral {
        let first = face_at(&[(0, false), (1, false)]);
        order.retain(|f| *f != first);
        order.insert(0, first);
    }
    order
}

/// 96 strict boxes covering the 2-skeleton of `[0,1]^4` and the realized
/// points of `t`.
pub fn assemble96(t: &TangencySet, sched: &EpsilonSchedule) -> Result<Assembly> {
    let a4 = a4_cover(t)?;
    let kind = a4.segment.kind()?;
    let canon = assembly_segment(kind);
    let sym = sorted_symmetries()
        .into_iter()
        .find(|s| a4.segment.transform(s) == canon)
        .expect("segments of one kind form one orbit");
    let nt = t.transform(&sym);
    let typing = paper_face_typing();
    let mut layout = layout88(&typing)?;
    for b in &a4.boxes {
        layout.boxes.push(b.transform(&sym));
        layout.roles.push(Role::Tangency);
    }
    let skeleton = skeleton_target(N, 2).regions();
    let count = layout.boxes.len();
    let mut pass = Pass {
        strict: layout.roles.iter().map(|r| *r == Role::Tangency).collect(),
        modified: vec![false; layout.edges.len()],
        added: vec![false; layout.faces.len()],
        typing: &typing,
        segment: canon.clone(),
        kind,
        points: nt.realized_points(),
        skeleton,
        layout,
    };

    // grow the boxes around I into a neighbourhood of it
    let seg_box = canon.as_box();
    let mut delta: Option<Rational> = None;
    for i in 0..count {
        if pass.layout.roles[i] == Role::Tangency && pass.layout.boxes[i].intersects(&seg_box) {
            let m = expansion_margin(&pass.layout.boxes[i])?;
            pass.layout.boxes[i] = pass.layout.boxes[i].grown(&m);
            if delta.as_ref().is_none_or(|d| m < *d) {
                delta = Some(m);
            }
        }
    }
    let delta = delta.ok_or_else(|| CoverError::Precondition("no box meets I".into()))?;
    let point_boxes: Vec<Cuboid> = pass.points.iter().map(Cuboid::point).collect();
    let mut start = point_boxes;
    start.push(seg_box.clone());
    if !cover_regions(&pass.strict_refs(), &start).covered {
        return Err(CoverError::Precondition(
            "tangency boxes miss a point or I".into(),
        ));
    }
    let mut eps_cur = std::cmp::min(&sched.initial, &(&delta / Rational::from_int(8))).clone();

    let order = preferred_order(kind);
    let mut steps = Vec::new();
    for _ in 0..order.len() {
        let (fi, rule) = order
            .iter()
            .map(|f| {
                pass.layout
                    .faces
                    .iter()
                    .position(|g| g == f)
                    .expect("face is enumerated")
            })
            .filter(|&fi| !pass.added[fi])
            .find_map(|fi| pass.rule_for(fi).map(|rule| (fi, rule)))
            .ok_or_else(|| CoverError::Precondition("no face can be added".into()))?;

        let saved = (
            pass.layout.boxes.clone(),
            pass.strict.clone(),
            pass.modified.clone(),
        );
        pass.added[fi] = true;
        let label = format!("face {}", pass.layout.faces[fi]);
        let mut accepted = None;
        let mut tried = Vec::new();
        for (retries, eps) in sched.candidates(&eps_cur).into_iter().enumerate() {
            tried.push(eps.to_string());
            let used = pass.add_face(fi, &rule, &eps)?;
            if pass.invariant_holds(fi, &saved.0) {
                accepted = Some((retries, used));
                break;
            }
            pass.layout.boxes = saved.0.clone();
            pass.strict = saved.1.clone();
            pass.modified = saved.2.clone();
        }
        let (retries, used) = accepted.ok_or_else(|| CoverError::ScheduleExhausted {
            step: label.clone(),
            history: tried.join(", "),
        })?;
        eps_cur = used.last().expect("face epsilon") / Rational::from_int(8);
        steps.push(EpsStep {
            label,
            eps: used[0].clone(),
            retries,
        });
    }

    // every box but the vertex ones is strict now; thicken them and shrink the corners
    let mut delta_f: Option<Rational> = None;
    for i in 0..count {
        if pass.strict[i] {
            let m = expansion_margin(&pass.layout.boxes[i])?;
            pass.layout.boxes[i] = pass.layout.boxes[i].grown(&m);
            if delta_f.as_ref().is_none_or(|d| m < *d) {
                delta_f = Some(m);
            }
        }
    }
    let eps_v = std::cmp::min(eps_cur, delta_f.expect("strict boxes exist"));
    let side = r(1, 4) - &eps_v;
    for i in 0..count {
        if let Role::Vertex(v) = pass.layout.roles[i] {
            let vertex = &pass.layout.vertices[v];
            let iv = (0..N)
                .map(|a| {
                    if is_one(vertex, a) {
                        (Rational::one() - &side, Rational::one())
                    } else {
                        (Rational::zero(), side.clone())
                    }
                })
                .collect();
            pass.layout.boxes[i] = Cuboid::from_intervals(iv);
            pass.strict[i] = true;
        }
    }
    steps.push(EpsStep {
        label: "vertex boxes".into(),
        eps: eps_v,
        retries: 0,
    });

    let back = sym.inverse();
    let boxes: Vec<Cuboid> = pass
        .layout
        .boxes
        .iter()
        .map(|b| b.transform(&back))
        .collect();
    let cover = Cover::new(N, boxes, BoxClass::Strict)?;
    let target = skeleton_target(N, 2).with_points(t.realized_points());
    let report = covers_target(&cover, &target);
    if !verify_class(&cover) || !report.covered {
        return Err(CoverError::ScheduleExhausted {
            step: format!(
                "final check (uncovered {})",
                report.witness.map(|w| w.to_string()).unwrap_or_default()
            ),
            history: String::new(),
        });
    }
    Ok(Assembly {
        cover,
        a4,
        normalizing_symmetry: sym,
        steps,
    })
}
