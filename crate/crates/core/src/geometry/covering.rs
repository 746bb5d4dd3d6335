use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::SectorSpec;
use crate::error::{Error, Result};
use crate::numeric::ceil_sq;
use crate::phase::PhaseFamily;
use crate::spiral::{generate_range, Planar};

/// Static 2-d tree answering nearest-neighbor distance queries.
pub struct KdTree {
    /// points in tree order; node `lo..hi` splits at `mid = (lo + hi) / 2`
    pts: Vec<[f64; 2]>,
}

impl KdTree {
    pub fn new<P: Planar>(points: &[P]) -> Self {
        let mut pts: Vec<[f64; 2]> = points.iter().map(Planar::xy).collect();
        build(&mut pts, 0);
        KdTree { pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Distance from `q` to the nearest stored point (infinite when empty).
    pub fn nearest_distance(&self, q: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        self.search(q, 0, self.pts.len(), 0, &mut best);
        best.sqrt()
    }

    fn search(&self, q: [f64; 2], lo: usize, hi: usize, axis: usize, best: &mut f64) {
        if hi <= lo {
            return;
        }
        if hi - lo <= 8 {
            for p in &self.pts[lo..hi] {
                let dx = p[0] - q[0];
                let dy = p[1] - q[1];
                *best = best.min(dx * dx + dy * dy);
            }
            return;
        }
        let mid = (lo + hi) / 2;
        let p = self.pts[mid];
        let dx = p[0] - q[0];
        let dy = p[1] - q[1];
        *best = best.min(dx * dx + dy * dy);
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(q, near.0, near.1, 1 - axis, best);
        if diff * diff < *best {
            self.search(q, far.0, far.1, 1 - axis, best);
        }
    }
}

fn build(pts: &mut [[f64; 2]], axis: usize) {
    if pts.len() <= 8 {
        return;
    }
    let mid = pts.len() / 2;
    pts.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
    let (left, right) = pts.split_at_mut(mid);
    build(left, 1 - axis);
    build(&mut right[1..], 1 - axis);
}

/// Largest nearest-point distance over a square lattice of sample centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringEstimate {
    /// max over lattice centers `(i·eps, j·eps)` inside the region of the
    /// distance to the nearest point
    pub estimate: f64,
    /// `eps·√2/2`; the covering radius over the region is at most
    /// `estimate + slack`
    pub slack: f64,
    pub eps: f64,
    pub region: SectorSpec,
    /// nearest-neighbor queries spent (the lattice itself may be far larger)
    pub queries: u64,
    /// distance kept between the region's outer radius and the outermost
    /// generated point, when the points were generated by
    /// [`covering_for_family`]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_margin: Option<f64>,
}

/// Index rectangle `[i0, i1) × [j0, j1)` of lattice centers.
#[derive(Clone, Copy)]
struct Block {
    i0: i64,
    i1: i64,
    j0: i64,
    j1: i64,
}

struct Candidate {
    bound: f64,
    block: Block,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| (other.block.i0, other.block.j0).cmp(&(self.block.i0, self.block.j0)))
    }
}

/// Covering-radius estimate of `points` over `region`, sampled at spacing `eps`.
///
/// The maximum over the lattice is found exactly by best-first search over
/// index blocks: the nearest-distance function is 1-Lipschitz, so a block's
/// values are bounded by the value at its center plus its half diagonal, and
/// blocks whose bound does not beat the best sample so far are dropped.
pub fn covering_radius_estimate<P: Planar>(
    points: &[P],
    region: &SectorSpec,
    eps: f64,
) -> Result<CoveringEstimate> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let data_radius = points
        .iter()
        .map(|p| {
            let [x, y] = p.xy();
            x.hypot(y)
        })
        .fold(0.0, f64::max);
    if region.c() > data_radius {
        return Err(Error::RegionOutsideRange { data_radius });
    }
    let tree = KdTree::new(points);
    let (estimate, queries) = lattice_max(&tree, region, eps);
    Ok(CoveringEstimate {
        estimate,
        slack: eps * std::f64::consts::SQRT_2 / 2.0,
        eps,
        region: *region,
        queries,
        outer_margin: None,
    })
}

fn lattice_max(tree: &KdTree, region: &SectorSpec, eps: f64) -> (f64, u64) {
    let d = region.d();
    let c2 = region.c() * region.c();
    let d2 = d * d;
    let lim = (d / eps).ceil() as i64 + 1;
    let root = Block { i0: -lim, i1: lim + 1, j0: -lim, j1: lim + 1 };

    let mut queries = 0u64;
    let mut best = f64::NEG_INFINITY;
    let mut heap = BinaryHeap::new();
    let push = |block: Block, heap: &mut BinaryHeap<Candidate>, queries: &mut u64| {
        // radial prune on the block's bounding box (widened by one ulp-ish margin)
        let x0 = block.i0 as f64 * eps;
        let x1 = (block.i1 - 1) as f64 * eps;
        let y0 = block.j0 as f64 * eps;
        let y1 = (block.j1 - 1) as f64 * eps;
        let nx = if x0 > 0.0 { x0 } else if x1 < 0.0 { x1 } else { 0.0 };
        let ny = if y0 > 0.0 { y0 } else if y1 < 0.0 { y1 } else { 0.0 };
        let fx = x0.abs().max(x1.abs());
        let fy = y0.abs().max(y1.abs());
        if (nx * nx + ny * ny) * (1.0 - 1e-12) > d2 || (fx * fx + fy * fy) * (1.0 + 1e-12) < c2 {
            return;
        }
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        let half_diag = 0.5 * (x1 - x0).hypot(y1 - y0);
        *queries += 1;
        let bound = tree.nearest_distance([cx, cy]) + half_diag * (1.0 + 1e-12);
        heap.push(Candidate { bound, block });
    };
    push(root, &mut heap, &mut queries);

    while let Some(Candidate { bound, block }) = heap.pop() {
        if bound <= best {
            break;
        }
        let wi = block.i1 - block.i0;
        let wj = block.j1 - block.j0;
        if wi == 1 && wj == 1 {
            let x = block.i0 as f64 * eps;
            let y = block.j0 as f64 * eps;
            if region.contains_point(x, y) {
                // single-sample blocks carry their exact value as the bound
                best = best.max(bound);
            }
            continue;
        }
        let im = block.i0 + (wi + 1) / 2;
        let jm = block.j0 + (wj + 1) / 2;
        for (i0, i1) in [(block.i0, im), (im, block.i1)] {
            for (j0, j1) in [(block.j0, jm), (jm, block.j1)] {
                if i0 < i1 && j0 < j1 {
                    push(Block { i0, i1, j0, j1 }, &mut heap, &mut queries);
                }
            }
        }
    }
    (best.max(0.0), queries)
}

/// Covering estimate for a family's own points.
///
/// Points are generated out to `d + margin`, where the margin starts at 4 and
/// is enlarged until it exceeds twice the estimate, so that no sample's
/// nearest point could lie beyond the generated range.
pub fn covering_for_family(family: &PhaseFamily, region: &SectorSpec, eps: f64) -> Result<CoveringEstimate> {
    let mut margin = 4.0f64;
    loop {
        let outer = region.d() + margin;
        let n_max = ceil_sq(outer);
        let points = generate_range(family, 1..n_max + 1)?;
        let mut est = covering_radius_estimate(&points, region, eps)?;
        if 2.0 * est.estimate < margin {
            est.outer_margin = Some(margin);
            return Ok(est);
        }
        margin = 3.0 * est.estimate;
    }
}
