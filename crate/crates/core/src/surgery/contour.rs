use super::{SurgeryError, CONTOUR_DISTANCE};
use crate::dla2d::{Cluster2D, Point};
use std::collections::HashMap;

/// The closed curve around the cluster. Only its lattice points are stored:
/// consecutive entries differ by a unit axis step or a unit diagonal step,
/// the curve is simple, every entry has lattice distance exactly 40 from the
/// cluster, and the cluster lies to the right of the traversal. Entry 0 is
/// `z + 40 e2` for the cluster point `z` with maximal second component.
#[derive(Debug, Clone)]
pub struct Contour {
    pts: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl Contour {
    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.index.contains_key(&p)
    }

    pub fn position(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn point(&self, i: usize) -> Point {
        self.pts[i % self.pts.len()]
    }

    /// Lattice points from index `from` to index `to` inclusive, walking
    /// forward (wrapping past the end).
    pub fn arc(&self, from: usize, to: usize) -> Vec<Point> {
        let n = self.pts.len();
        let mut out = Vec::new();
        let mut i = from % n;
        loop {
            out.push(self.pts[i]);
            if i == to % n {
                break;
            }
            i = (i + 1) % n;
        }
        out
    }

    pub fn bbox(&self) -> (i32, i32, i32, i32) {
        let xs = self.pts.iter().map(|p| p.0);
        let ys = self.pts.iter().map(|p| p.1);
        (
            xs.clone().min().unwrap(),
            xs.max().unwrap(),
            ys.clone().min().unwrap(),
            ys.clone().max().unwrap(),
        )
    }
}

// The construction works in 45-degree rotated coordinates R(x) = (x0+x1,
// x0-x1), where each l1 ball of radius 40 becomes an axis-aligned 80x80
// square with even-parity integer corners. The union of squares is a cell
// region whose rectilinear outer boundary we trace with the region kept on
// the left; the rotation is orientation-reversing, so the cluster ends up on
// the right in original coordinates. Odd-parity vertices of the trace are
// half-integer points in the original plane: a straight pass-through is the
// midpoint of a diagonal segment, an L-turn is a cut corner whose chord is a
// unit axis segment.

#[inline]
fn rot(p: Point) -> Point {
    (p.0 + p.1, p.0 - p.1)
}

#[inline]
fn unrot(q: Point) -> Point {
    debug_assert!((q.0 + q.1) % 2 == 0);
    ((q.0 + q.1) / 2, (q.0 - q.1) / 2)
}

struct CellRegion {
    x0: i32,
    y0: i32,
    w: usize,
    h: usize,
    cells: Vec<bool>,
}

impl CellRegion {
    fn contains(&self, c: Point) -> bool {
        let (x, y) = (c.0 - self.x0, c.1 - self.y0);
        if x < 0 || y < 0 || x as usize >= self.w || y as usize >= self.h {
            return false;
        }
        self.cells[x as usize * self.h + y as usize]
    }
}

fn rasterize(a: &Cluster2D, r: i32) -> CellRegion {
    let rot_pts: Vec<Point> = a.points().iter().map(|&p| rot(p)).collect();
    let x0 = rot_pts.iter().map(|p| p.0).min().unwrap() - r - 2;
    let x1 = rot_pts.iter().map(|p| p.0).max().unwrap() + r + 2;
    let y0 = rot_pts.iter().map(|p| p.1).min().unwrap() - r - 2;
    let y1 = rot_pts.iter().map(|p| p.1).max().unwrap() + r + 2;
    let (w, h) = ((x1 - x0 + 1) as usize, (y1 - y0 + 1) as usize);
    let mut cells = vec![false; w * h];
    for q in rot_pts {
        // cells [q0-r, q0+r-1] x [q1-r, q1+r-1] lie inside the square
        for x in (q.0 - r)..=(q.0 + r - 1) {
            let col = (x - x0) as usize * h;
            let lo = (q.1 - r - y0) as usize;
            let hi = (q.1 + r - 1 - y0) as usize;
            cells[col + lo..=col + hi].fill(true);
        }
    }
    CellRegion { x0, y0, w, h, cells }
}

// Directions in rotated space: 0 = +u (E), 1 = +v (N), 2 = -u (W), 3 = -v (S).
const DIR: [Point; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Cell to the left of the directed edge starting at `p` with direction `d`.
#[inline]
fn left_cell(p: Point, d: usize) -> Point {
    match d {
        0 => (p.0, p.1),
        1 => (p.0 - 1, p.1),
        2 => (p.0 - 1, p.1 - 1),
        _ => (p.0, p.1 - 1),
    }
}

#[inline]
fn right_cell(p: Point, d: usize) -> Point {
    left_cell(p, (d + 3) % 4)
}

/// Surround the cluster by the distance-40 contour.
pub fn build_contour(a: &Cluster2D) -> Result<Contour, SurgeryError> {
    let r = CONTOUR_DISTANCE;
    let region = rasterize(a, r);

    // Bottom-most region cell (min v, then min u, in rotated coordinates):
    // its lower-left vertex starts an eastbound boundary edge with the
    // region on the left.
    let mut start = None;
    'scan: for y in 0..region.h {
        for x in 0..region.w {
            if region.cells[x * region.h + y] {
                start = Some((region.x0 + x as i32, region.y0 + y as i32));
                break 'scan;
            }
        }
    }
    let start = start.ok_or_else(|| SurgeryError::ConstructionBug("empty region".into()))?;

    // Trace with region-left. At each vertex the two cells ahead decide the
    // turn; diagonal-only contact counts as disconnected.
    let mut rot_loop = Vec::new();
    let (mut p, mut d) = (start, 0usize);
    debug_assert!(region.contains(left_cell(p, d)) && !region.contains(right_cell(p, d)));
    loop {
        rot_loop.push(p);
        let q = (p.0 + DIR[d].0, p.1 + DIR[d].1);
        let ahead_left = region.contains(left_cell(q, d));
        let ahead_right = region.contains(right_cell(q, d));
        d = if !ahead_left {
            (d + 1) % 4 // turn left
        } else if ahead_right {
            (d + 3) % 4 // turn right
        } else {
            d
        };
        p = q;
        if p == start && d == 0 {
            break;
        }
        if rot_loop.len() > 5 * region.w * region.h {
            return Err(SurgeryError::ConstructionBug("runaway contour trace".into()));
        }
    }

    // Keep even-parity vertices: those are the lattice points.
    let mut pts: Vec<Point> = rot_loop
        .into_iter()
        .filter(|q| (q.0 + q.1).rem_euclid(2) == 0)
        .map(unrot)
        .collect();

    // Rotate the cyclic list to start at xi_0 = z + 40 e2, z the cluster
    // point with maximal second component (ties broken toward smaller x).
    let z = *a
        .points()
        .iter()
        .max_by_key(|p| (p.1, -p.0))
        .expect("cluster is nonempty");
    let xi0 = (z.0, z.1 + r);
    let at = pts
        .iter()
        .position(|&q| q == xi0)
        .ok_or_else(|| SurgeryError::ConstructionBug("xi0 not on traced contour".into()))?;
    pts.rotate_left(at);

    let mut index = HashMap::with_capacity(pts.len());
    for (i, &q) in pts.iter().enumerate() {
        if index.insert(q, i).is_some() {
            return Err(SurgeryError::ConstructionBug(format!(
                "contour visits {q:?} twice"
            )));
        }
    }
    Ok(Contour { pts, index })
}

/// The all-lattice-steps loop obtained by bridging each diagonal contour
/// step through an inserted corner point.
#[derive(Debug, Clone)]
pub struct HatGamma {
    pts: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl HatGamma {
    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn position(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// Lattice path from loop index `from` to loop index `to`, walking
    /// forward (`rev = false`) or backward around the loop.
    pub fn route(&self, from: usize, to: usize, rev: bool) -> Vec<Point> {
        let n = self.pts.len();
        let mut out = Vec::new();
        let mut i = from % n;
        loop {
            out.push(self.pts[i]);
            if i == to % n {
                break;
            }
            i = if rev { (i + n - 1) % n } else { (i + 1) % n };
        }
        out
    }
}

pub fn build_hat_gamma(contour: &Contour) -> Result<HatGamma, SurgeryError> {
    let pts = contour.points();
    let n = pts.len();
    let mut out: Vec<Point> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let cur = pts[j];
        let next = pts[(j + 1) % n];
        out.push(cur);
        let d = (next.0 - cur.0, next.1 - cur.1);
        let bridges = match d {
            (1, 0) | (-1, 0) | (0, 1) | (0, -1) => continue,
            // preferred corner first, the other diagonal corner as fallback
            (1, 1) => [(cur.0, cur.1 + 1), (cur.0 + 1, cur.1)],
            (1, -1) => [(cur.0 + 1, cur.1), (cur.0, cur.1 - 1)],
            (-1, 1) => [(cur.0 - 1, cur.1), (cur.0, cur.1 + 1)],
            (-1, -1) => [(cur.0, cur.1 - 1), (cur.0 - 1, cur.1)],
            _ => {
                return Err(SurgeryError::ConstructionBug(format!(
                    "non-unit contour step {d:?}"
                )))
            }
        };
        // Two adjacent diagonal steps around a 90-degree wedge share their
        // preferred corner; the second one then takes the other corner.
        let prev = out.len().checked_sub(2).map(|i| out[i]);
        out.push(if prev == Some(bridges[0]) { bridges[1] } else { bridges[0] });
    }
    let mut index = HashMap::with_capacity(out.len());
    for (i, &q) in out.iter().enumerate() {
        if index.insert(q, i).is_some() {
            return Err(SurgeryError::ConstructionBug(format!(
                "hat loop visits {q:?} twice"
            )));
        }
    }
    Ok(HatGamma { pts: out, index })
}
