//! Exact coverage decisions for finite unions of closed boxes.
//!
//! A region (a face, segment or point, all of which are boxes) is split along
//! each non-degenerate axis at every box endpoint. All box boundaries are then
//! cell boundaries, so a closed box containing a cell midpoint contains the
//! whole closed cell, and coverage reduces to one membership test per cell.
//! Membership is answered with per-axis bitsets of the boxes spanning each
//! cell interval; a cell is covered iff the AND over its axes is nonzero.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{CoverError, Result};
use crate::geometry::{BoxClass, CubeFace, Cuboid, Point};
use crate::rational::Rational;
use crate::skeleton::Target;
use crate::symmetry::{CubeSymmetry, Transform};

/// A finite list of boxes together with the class they claim to belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub dim: usize,
    pub boxes: Vec<Cuboid>,
    pub declared_class: BoxClass,
}

impl Cover {
    pub fn new(dim: usize, boxes: Vec<Cuboid>, declared_class: BoxClass) -> Result<Self> {
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(CoverError::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        Ok(Cover {
            dim,
            boxes,
            declared_class,
        })
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn max_side_sum(&self) -> Option<Rational> {
        self.boxes.iter().map(Cuboid::side_sum).max()
    }

    fn refs(&self) -> Vec<&Cuboid> {
        self.boxes.iter().collect()
    }
}

impl Transform for Cover {
    fn transform(&self, s: &CubeSymmetry) -> Self {
        Cover {
            dim: self.dim,
            boxes: self.boxes.transform(s),
            declared_class: self.declared_class,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: bool,
    /// Present iff not covered: a target point outside every box.
    pub witness: Option<Point>,
    pub cells_checked: u64,
    pub faces_checked: usize,
}

/// Result of deciding a single region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionOutcome {
    pub covered: bool,
    pub witness: Option<Point>,
    pub cells: u64,
}

/// Result of deciding a list of regions; the first failing region (in list order) wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionsOutcome {
    pub covered: bool,
    pub witness: Option<Point>,
    pub failing_region: Option<usize>,
    pub cells: u64,
}

pub fn verify_class(c: &Cover) -> bool {
    c.boxes.iter().all(|b| b.in_class(c.declared_class))
}

/// Decides whether the closed `region` lies inside the union of `boxes`.
///
/// On failure the witness lies in the lexicographically smallest uncovered
/// cell: its midpoint, moved off any box that is flat inside the cell
/// (degenerate axes take the region's fixed value).
pub fn cover_region(boxes: &[&Cuboid], region: &Cuboid) -> RegionOutcome {
    let n = region.dim();
    let free: Vec<usize> = (0..n).filter(|&i| !region.is_degenerate(i)).collect();

    // keep boxes that can contain a cell midpoint of the region
    let selected: Vec<&Cuboid> = boxes
        .iter()
        .copied()
        .filter(|b| {
            (0..n).all(|i| {
                let (bl, bh) = b.interval(i);
                let (rl, rh) = region.interval(i);
                if region.is_degenerate(i) {
                    bl <= rl && rl <= bh
                } else {
                    bl < bh && bl < rh && bh > rl
                }
            })
        })
        .collect();

    if free.is_empty() {
        let covered = !selected.is_empty();
        return RegionOutcome {
            covered,
            witness: (!covered).then(|| Point(region.lo().to_vec())),
            cells: 1,
        };
    }

    let d = free.len();
    let words = selected.len().div_ceil(64).max(1);

    let mut breaks: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for &ax in &free {
        let (rl, rh) = region.interval(ax);
        let mut bp = vec![rl.clone(), rh.clone()];
        for b in &selected {
            let (bl, bh) = b.interval(ax);
            if bl > rl {
                bp.push(bl.clone());
            }
            if bh < rh {
                bp.push(bh.clone());
            }
        }
        bp.sort_unstable();
        bp.dedup();
        breaks.push(bp);
    }

    // masks[j][c * words + w]: boxes whose axis-j interval spans cell interval c
    let mut masks: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut full: Vec<Vec<u64>> = Vec::with_capacity(d);
    for (j, &ax) in free.iter().enumerate() {
        let bp = &breaks[j];
        let cells = bp.len() - 1;
        let mut m = vec![0u64; cells * words];
        let mut f = vec![0u64; words];
        for (k, b) in selected.iter().enumerate() {
            let (bl, bh) = b.interval(ax);
            let start = if bl <= &bp[0] {
                0
            } else {
                bp.binary_search(bl).expect("box endpoint is a breakpoint")
            };
            let end = if bh >= &bp[cells] {
                cells
            } else {
                bp.binary_search(bh).expect("box endpoint is a breakpoint")
            };
            for c in start..end {
                m[c * words + k / 64] |= 1u64 << (k % 64);
            }
            if start == 0 && end == cells {
                f[k / 64] |= 1u64 << (k % 64);
            }
        }
        masks.push(m);
        full.push(f);
    }

    // suffix_full[j]: boxes spanning the region on every axis from j on
    let mut suffix_full = vec![vec![u64::MAX; words]; d + 1];
    for j in (0..d).rev() {
        for w in 0..words {
            suffix_full[j][w] = suffix_full[j + 1][w] & full[j][w];
        }
    }
    let counts: Vec<u64> = breaks.iter().map(|b| (b.len() - 1) as u64).collect();
    let mut suffix_cells = vec![1u64; d + 1];
    for j in (0..d).rev() {
        suffix_cells[j] = suffix_cells[j + 1].saturating_mul(counts[j]);
    }

    let mut search = CellSearch {
        words,
        masks: &masks,
        suffix_full: &suffix_full,
        suffix_cells: &suffix_cells,
        counts: &counts,
        cells: 0,
        path: Vec::with_capacity(d),
        scratch: vec![vec![0u64; words]; d + 1],
        known: vec![HashSet::new(); d + 1],
    };
    let mut initial = vec![0u64; words];
    for k in 0..selected.len() {
        initial[k / 64] |= 1u64 << (k % 64);
    }
    search.scratch[0] = initial;
    let uncovered = search.run(0);
    let cells = search.cells;

    let witness = uncovered.then(|| {
        let two = Rational::from_int(2);
        let mut coords = region.lo().to_vec();
        for (j, &ax) in free.iter().enumerate() {
            let c = search.path[j];
            let (a, b) = (&breaks[j][c], &breaks[j][c + 1]);
            // boxes flat along this axis were dropped but may still pass
            // through the open cell; step off their values
            let mut stops: Vec<&Rational> = boxes
                .iter()
                .map(|x| x.interval(ax))
                .filter(|(lo, hi)| lo == hi && a < *lo && *lo < b)
                .map(|(lo, _)| lo)
                .collect();
            stops.sort_unstable();
            let first = stops.first().copied().unwrap_or(b);
            coords[ax] = (a + first) / &two;
        }
        Point(coords)
    });
    RegionOutcome {
        covered: !uncovered,
        witness,
        cells,
    }
}

struct CellSearch<'a> {
    words: usize,
    masks: &'a [Vec<u64>],
    suffix_full: &'a [Vec<u64>],
    suffix_cells: &'a [u64],
    counts: &'a [u64],
    cells: u64,
    path: Vec<usize>,
    scratch: Vec<Vec<u64>>,
    known: Vec<HashSet<Vec<u64>>>,
}

impl CellSearch<'_> {
    /// Depth-first over cells in lexicographic order; returns true on the first
    /// uncovered cell, leaving its indices in `path`.
    fn run(&mut self, level: usize) -> bool {
        let d = self.counts.len();
        let words = self.words;
        if (0..words).any(|w| self.scratch[level][w] & self.suffix_full[level][w] != 0) {
            self.cells += self.suffix_cells[level];
            return false;
        }
        if level == d {
            // suffix_full[d] is all ones, so an empty mask ends up here
            self.cells += 1;
            return true;
        }
        for c in 0..self.counts[level] as usize {
            let (head, tail) = self.scratch.split_at_mut(level + 1);
            let cur = &head[level];
            let next = &mut tail[0];
            let mask = &self.masks[level][c * words..(c + 1) * words];
            let mut any = false;
            for w in 0..words {
                next[w] = cur[w] & mask[w];
                any |= next[w] != 0;
            }
            // a subtree depends only on its depth and the surviving boxes
            if any && self.known[level + 1].contains(&next[..]) {
                self.cells += self.suffix_cells[level + 1];
                continue;
            }
            self.path.push(c);
            if !any {
                // every deeper cell under this prefix is uncovered; the first is smallest
                self.path.extend(std::iter::repeat_n(0, d - level - 1));
                self.cells += 1;
                return true;
            }
            if self.run(level + 1) {
                return true;
            }
            let done = self.scratch[level + 1].clone();
            self.known[level + 1].insert(done);
            self.path.pop();
        }
        false
    }
}

/// Checks each region, possibly in parallel; the reported failure is the first in list order.
pub fn cover_regions(boxes: &[&Cuboid], regions: &[Cuboid]) -> RegionsOutcome {
    let outcomes: Vec<RegionOutcome> = regions.par_iter().map(|r| cover_region(boxes, r)).collect();
    let cells = outcomes.iter().map(|o| o.cells).sum();
    let failing = outcomes.iter().position(|o| !o.covered);
    RegionsOutcome {
        covered: failing.is_none(),
        witness: failing.and_then(|i| outcomes[i].witness.clone()),
        failing_region: failing,
        cells,
    }
}

/// Decides coverage of one cube face.
pub fn covers_face(c: &Cover, f: &CubeFace) -> (bool, Option<Point>) {
    let out = cover_region(&c.refs(), &f.as_box());
    (out.covered, out.witness)
}

/// Decides coverage of every face, segment and point of the target.
pub fn covers_target(c: &Cover, t: &Target) -> CoverageReport {
    let out = cover_regions(&c.refs(), &t.regions());
    CoverageReport {
        covered: out.covered,
        witness: out.witness,
        cells_checked: out.cells,
        faces_checked: t.faces.len(),
    }
}

pub fn find_witness(c: &Cover, t: &Target) -> Option<Point> {
    covers_target(c, t).witness
}

/// Every box lies in `b` and together they cover `b`.
pub fn union_equals_box(c: &Cover, b: &Cuboid) -> bool {
    boxes_union_equals(&c.refs(), b)
}

pub fn boxes_union_equals(boxes: &[&Cuboid], b: &Cuboid) -> bool {
    boxes.iter().all(|x| b.contains_box(x)) && cover_region(boxes, b).covered
}
