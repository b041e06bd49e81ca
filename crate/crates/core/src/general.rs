//! Covers of the `(n-2)`-skeleton in every dimension `n >= 4`.
//!
//! The construction starts from the grid of `(n-2)^(n-2)` subcubes on every
//! `(n-2)`-face (side sums exactly one) plus one extra box, then alternates two
//! moves until every box is strict:
//!
//! * grow a strict box by `(1 - sum)/(3n)` on every side, which keeps it strict
//!   and covers a neighbourhood of what it covered before;
//! * compress an exact tiling of a box affinely along one axis so that it
//!   leaves a thin slab uncovered, which makes every tile strict.
//!
//! The slab is always inside a neighbourhood produced by the first move. Each
//! step is checked by the exact verifier before moving on.

use std::collections::VecDeque;

use crate::error::{CoverError, Result};
use crate::geometry::{enumerate_faces, BoxClass, CubeFace, Cuboid};
use crate::rational::Rational;
use crate::skeleton::{skeleton_target, TangencySet};
use crate::symmetry::{CubeSymmetry, Transform};
use crate::verify::{boxes_union_equals, cover_region, covers_target, verify_class, Cover};

/// Candidate epsilons for one construction step: `initial`, then repeatedly
/// multiplied by `shrink_factor`, at most `max_retries` extra times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonSchedule {
    pub initial: Rational,
    pub shrink_factor: Rational,
    pub max_retries: usize,
}

impl EpsilonSchedule {
    pub fn new(initial: Rational, shrink_factor: Rational, max_retries: usize) -> Result<Self> {
        if !initial.is_positive() {
            return Err(CoverError::InvalidArgument(format!(
                "initial epsilon {initial} must be positive"
            )));
        }
        if !shrink_factor.is_positive() || shrink_factor >= 1 {
            return Err(CoverError::InvalidArgument(format!(
                "shrink factor {shrink_factor} must lie in (0,1)"
            )));
        }
        Ok(EpsilonSchedule {
            initial,
            shrink_factor,
            max_retries,
        })
    }

    /// `1/64`, shrinking by `1/4`, up to 8 retries.
    pub fn general_default() -> Self {
        Self::new(Rational::frac(1, 64), Rational::frac(1, 4), 8).expect("valid defaults")
    }

    /// `1/100`, shrinking by `1/4`, up to 8 retries.
    pub fn dim4_default() -> Self {
        Self::new(Rational::frac(1, 100), Rational::frac(1, 4), 8).expect("valid defaults")
    }

    /// The epsilons to try, starting from `min(initial, cap)`.
    pub fn candidates(&self, cap: &Rational) -> Vec<Rational> {
        let mut eps = std::cmp::min(&self.initial, cap).clone();
        let mut out = Vec::with_capacity(self.max_retries + 1);
        for _ in 0..=self.max_retries {
            out.push(eps.clone());
            eps = &eps * &self.shrink_factor;
        }
        out
    }
}

/// One accepted epsilon of a construction, for certificates and diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsStep {
    pub label: String,
    pub eps: Rational,
    pub retries: usize,
}

/// `(1 - sum)/(3n)`, the growth a strict box can absorb while staying strict.
pub fn expansion_margin(b: &Cuboid) -> Result<Rational> {
    let sum = b.side_sum();
    if sum >= 1 {
        return Err(CoverError::NotStrict(sum.to_string()));
    }
    Ok((Rational::one() - sum) / Rational::from_int(3 * b.dim() as i64))
}

/// Grows a strict box by its own expansion margin on every side.
pub fn expand_eps(b: &Cuboid) -> Result<Cuboid> {
    let eps = expansion_margin(b)?;
    Ok(b.grown(&eps))
}

/// Affinely compresses an exact tiling of `target` along axis `k`, so that the
/// union becomes `target` with its `k`-interval start raised by `eps`.
///
/// Every box must have positive extent along `k`; a box degenerate along `k`
/// would be left unchanged and could keep side sum one.
pub fn compress_along(
    boxes: &[Cuboid],
    target: &Cuboid,
    k: usize,
    eps: &Rational,
) -> Result<Vec<Cuboid>> {
    if k >= target.dim() {
        return Err(CoverError::InvalidArgument(format!(
            "axis {k} out of range"
        )));
    }
    let (start, end) = target.interval(k);
    let gamma = target.side(k);
    if !eps.is_positive() || *eps >= gamma {
        return Err(CoverError::InvalidArgument(format!(
            "epsilon {eps} must lie in (0, {gamma})"
        )));
    }
    if let Some(b) = boxes.iter().find(|b| b.dim() != target.dim()) {
        return Err(CoverError::DimensionMismatch {
            expected: target.dim(),
            got: b.dim(),
        });
    }
    if let Some(b) = boxes.iter().find(|b| b.is_degenerate(k)) {
        return Err(CoverError::Precondition(format!(
            "box {b} has zero extent along axis {k}"
        )));
    }
    let refs: Vec<&Cuboid> = boxes.iter().collect();
    if !boxes_union_equals(&refs, target) {
        return Err(CoverError::Precondition(format!(
            "boxes are not an exact tiling of {target}"
        )));
    }
    let slope = (&gamma - eps) / &gamma;
    let new_start = start + eps;
    let map = |y: &Rational| &new_start + (y - start) * &slope;
    let out = boxes
        .iter()
        .map(|b| {
            let (lo, hi) = b.interval(k);
            let hi = if hi == end { end.clone() } else { map(hi) };
            b.with_interval(k, map(lo), hi)
        })
        .collect();
    Ok(out)
}

/// `(face index, box)` for the subcube grid on every `(n-2)`-face.
fn star_boxes(n: usize) -> Vec<(usize, Cuboid)> {
    let m = n - 2;
    let h = Rational::frac(1, m as i64);
    let mut out = Vec::new();
    for (fi, face) in enumerate_faces(n, n - 2).iter().enumerate() {
        let free = face.free_axes();
        let total = m.pow(free.len() as u32);
        for idx in 0..total {
            let mut iv: Vec<(Rational, Rational)> = face
                .values()
                .iter()
                .map(|v| match v {
                    Some(true) => (Rational::one(), Rational::one()),
                    _ => (Rational::zero(), Rational::zero()),
                })
                .collect();
            let mut rest = idx;
            // most significant digit on the first free axis
            for &ax in free.iter().rev() {
                let j = (rest % m) as i64;
                rest /= m;
                iv[ax] = (&h * Rational::from_int(j), &h * Rational::from_int(j + 1));
            }
            out.push((fi, Cuboid::from_intervals(iv)));
        }
    }
    out
}

/// The grid of subcubes of side `1/(n-2)` on every `(n-2)`-face.
pub fn base_star_cover(n: usize) -> Result<Cover> {
    if n < 4 {
        return Err(CoverError::InvalidArgument(format!(
            "base star cover needs n >= 4, got {n}"
        )));
    }
    let boxes = star_boxes(n).into_iter().map(|(_, b)| b).collect();
    Cover::new(n, boxes, BoxClass::NonStrict)
}

/// Output of [`prop1_cover`].
#[derive(Clone, Debug)]
pub struct GeneralConstruction {
    pub cover: Cover,
    pub steps: Vec<EpsStep>,
    /// Set for `n = 4`, where the construction runs but is not the best bound.
    pub diagnostic_only: bool,
}

struct Work {
    boxes: Vec<Cuboid>,
    strict: Vec<bool>,
    face_of: Vec<Option<usize>>,
}

impl Work {
    /// Grows every strict box meeting `region`; returns the smallest growth used.
    fn expand_touching(&mut self, region: &Cuboid) -> Result<Option<Rational>> {
        let mut min: Option<Rational> = None;
        for i in 0..self.boxes.len() {
            if self.strict[i] && self.boxes[i].intersects(region) {
                let eps = expansion_margin(&self.boxes[i])?;
                self.boxes[i] = self.boxes[i].grown(&eps);
                if min.as_ref().is_none_or(|m| eps < *m) {
                    min = Some(eps);
                }
            }
        }
        Ok(min)
    }

    fn strict_covers(&self, region: &Cuboid) -> bool {
        let refs: Vec<&Cuboid> = self
            .boxes
            .iter()
            .zip(&self.strict)
            .filter_map(|(b, &s)| s.then_some(b))
            .collect();
        cover_region(&refs, region).covered
    }

    /// Tries the schedule's epsilons for one compression, keeping the first that
    /// leaves `check` covered by strict boxes.
    #[allow(clippy::too_many_arguments)]
    fn compress_step(
        &mut self,
        label: String,
        members: &[usize],
        frame: &CubeSymmetry,
        target: &Cuboid,
        axis: usize,
        cap: &Rational,
        check: &Cuboid,
        sched: &EpsilonSchedule,
    ) -> Result<EpsStep> {
        let back = frame.inverse();
        let local: Vec<Cuboid> = members
            .iter()
            .map(|&i| self.boxes[i].transform(&back))
            .collect();
        let saved: Vec<Cuboid> = members.iter().map(|&i| self.boxes[i].clone()).collect();
        let mut tried = Vec::new();
        for (retries, eps) in sched.candidates(cap).into_iter().enumerate() {
            tried.push(eps.to_string());
            let squeezed = compress_along(&local, target, axis, &eps)?;
            for (&i, b) in members.iter().zip(squeezed) {
                self.boxes[i] = b.transform(frame);
                self.strict[i] = self.boxes[i].in_class(BoxClass::Strict);
            }
            if members.iter().all(|&i| self.strict[i]) && self.strict_covers(check) {
                return Ok(EpsStep {
                    label,
                    eps,
                    retries,
                });
            }
            for (&i, b) in members.iter().zip(&saved) {
                self.boxes[i] = b.clone();
                self.strict[i] = false;
            }
        }
        Err(CoverError::ScheduleExhausted {
            step: label,
            history: tried.join(", "),
        })
    }
}

/// A symmetry taking `{0}^2 x [0,1]^(n-2)` to `face` and `{0}^3 x [0,1]^(n-3)`
/// to `common`, a facet of `face`.
fn extension_frame(face: &CubeFace, common: &CubeFace) -> CubeSymmetry {
    let n = face.dim_ambient();
    let fixed = face.fixed_axes();
    let k = common
        .fixed_axes()
        .into_iter()
        .find(|a| face.value(*a).is_none())
        .expect("common face fixes one more axis");
    let head = [fixed[0], fixed[1], k];
    let order: Vec<usize> = head
        .into_iter()
        .chain((0..n).filter(|a| !head.contains(a)))
        .collect();
    let flip = (0..n)
        .map(|i| match i {
            0 | 1 => face.value(order[i]) == Some(true),
            2 => common.value(k) == Some(true),
            _ => false,
        })
        .collect();
    CubeSymmetry::new(order, flip).expect("valid frame")
}

fn faces_adjacent(a: &CubeFace, b: &CubeFace) -> Option<CubeFace> {
    let g = a.meet(b)?;
    (g.dim() + 1 == a.dim() && a != b).then_some(g)
}

/// Strict cover of the `(n-2)`-skeleton with `2n(n-1)(n-2)^(n-2) + 1` boxes.
pub fn prop1_cover(n: usize, sched: &EpsilonSchedule) -> Result<GeneralConstruction> {
    if n < 4 {
        return Err(CoverError::InvalidArgument(format!(
            "the general construction needs n >= 4, got {n}"
        )));
    }
    let m = n - 2;
    let h = Rational::frac(1, m as i64);
    let faces = enumerate_faces(n, n - 2);

    // P0 = [0,h]^(n-3) x {0}^3
    let p0 = Cuboid::from_intervals(
        (0..n)
            .map(|i| {
                if i + 3 < n {
                    (Rational::zero(), h.clone())
                } else {
                    (Rational::zero(), Rational::zero())
                }
            })
            .collect(),
    );
    let mut work = Work {
        boxes: vec![p0.clone()],
        strict: vec![p0.in_class(BoxClass::Strict)],
        face_of: vec![None],
    };
    for (fi, b) in star_boxes(n) {
        work.boxes.push(b);
        work.strict.push(false);
        work.face_of.push(Some(fi));
    }

    let seed_face = CubeFace::new(
        (0..n)
            .map(|i| if i + 2 < n { None } else { Some(false) })
            .collect(),
    );
    let seed = faces
        .iter()
        .position(|f| *f == seed_face)
        .expect("seed face is enumerated");
    let identity = CubeSymmetry::identity(n);
    let mut steps = Vec::new();

    // Sweep the seed face: after the step on axis k, [0,h]^k x [0,1]^(n-2-k) x {0}^2 is strict-covered.
    let mut covered = p0;
    for k in (0..n - 2).rev() {
        let cap = work
            .expand_touching(&covered)?
            .ok_or_else(|| CoverError::Precondition("nothing strict to expand".into()))?;
        let start = if k == n - 3 {
            Rational::zero()
        } else {
            h.clone()
        };
        let slab = |lo_k: Rational| {
            Cuboid::from_intervals(
                (0..n)
                    .map(|i| {
                        if i < k {
                            (Rational::zero(), h.clone())
                        } else if i == k {
                            (lo_k.clone(), Rational::one())
                        } else if i + 2 < n {
                            (Rational::zero(), Rational::one())
                        } else {
                            (Rational::zero(), Rational::zero())
                        }
                    })
                    .collect(),
            )
        };
        let target = slab(start);
        let next = slab(Rational::zero());
        let members: Vec<usize> = (0..work.boxes.len())
            .filter(|&i| work.face_of[i] == Some(seed) && target.contains_box(&work.boxes[i]))
            .collect();
        let cap = std::cmp::min(cap, target.side(k) / Rational::from_int(2));
        let step = work.compress_step(
            format!("seed axis {k}"),
            &members,
            &identity,
            &target,
            k,
            &cap,
            &next,
            sched,
        )?;
        steps.push(step);
        covered = next;
    }

    // Grow face by face, breadth first over faces sharing an (n-3)-face.
    let canonical_face = CubeFace::new(
        (0..n)
            .map(|i| if i < 2 { Some(false) } else { None })
            .collect(),
    )
    .as_box();
    let mut done = vec![false; faces.len()];
    let mut queued = vec![false; faces.len()];
    let mut queue = VecDeque::new();
    done[seed] = true;
    queued[seed] = true;
    let mut parent = vec![None; faces.len()];
    queue.push_back(seed);
    while let Some(fi) = queue.pop_front() {
        if let Some(pi) = parent[fi] {
            let face = &faces[fi];
            let common = faces_adjacent(face, &faces[pi]).expect("parent is adjacent");
            let cap = work
                .expand_touching(&common.as_box())?
                .ok_or_else(|| CoverError::Precondition("common face not strict-covered".into()))?;
            let frame = extension_frame(face, &common);
            let members: Vec<usize> = (0..work.boxes.len())
                .filter(|&i| work.face_of[i] == Some(fi))
                .collect();
            let cap = std::cmp::min(cap, Rational::frac(1, 2));
            let step = work.compress_step(
                format!("face {face} from {common}"),
                &members,
                &frame,
                &canonical_face,
                2,
                &cap,
                &face.as_box(),
                sched,
            )?;
            steps.push(step);
            done[fi] = true;
        }
        for (gi, g) in faces.iter().enumerate() {
            if !queued[gi] && faces_adjacent(&faces[fi], g).is_some() {
                queued[gi] = true;
                parent[gi] = Some(fi);
                queue.push_back(gi);
            }
        }
    }
    debug_assert!(done.iter().all(|&d| d));

    let cover = Cover::new(n, work.boxes, BoxClass::Strict)?;
    if !verify_class(&cover) {
        return Err(CoverError::ScheduleExhausted {
            step: "final class check".into(),
            history: String::new(),
        });
    }
    let report = covers_target(&cover, &skeleton_target(n, n - 2));
    if !report.covered {
        return Err(CoverError::ScheduleExhausted {
            step: format!(
                "final coverage check (uncovered {})",
                report.witness.map(|w| w.to_string()).unwrap_or_default()
            ),
            history: String::new(),
        });
    }
    Ok(GeneralConstruction {
        cover,
        steps,
        diagnostic_only: n == 4,
    })
}

/// One point box per distinct realized point of a tangency set.
pub fn tangency_cover(t: &TangencySet) -> Result<Cover> {
    t.check()?;
    let boxes = t.distinct_points().iter().map(Cuboid::point).collect();
    Cover::new(t.dim(), boxes, BoxClass::Strict)
}

/// `2n(n-1)(n-2)^(n-2)`, the number of grid boxes.
pub fn star_box_count(n: usize) -> usize {
    2 * n * (n - 1) * (n - 2).pow((n - 2) as u32)
}
