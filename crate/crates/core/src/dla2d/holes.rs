use super::{neighbors4, Cluster2D, Point};
use std::collections::{HashMap, HashSet, VecDeque};

/// Holes of a cluster: the finite 4-connected components of the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleReport {
    pub count: usize,
    pub holes: Vec<Vec<Point>>,
}

/// Flood fill over the bounding box inflated by one: the frame seeds the
/// unbounded component, every remaining unoccupied cell belongs to a hole.
pub fn hole_count(a: &Cluster2D) -> HoleReport {
    let (x0, x1, y0, y1) = a.bbox();
    let (x0, x1, y0, y1) = (x0 - 1, x1 + 1, y0 - 1, y1 + 1);
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let idx = |p: Point| (p.0 - x0) as usize * h + (p.1 - y0) as usize;
    let in_box = |p: Point| p.0 >= x0 && p.0 <= x1 && p.1 >= y0 && p.1 <= y1;

    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    for x in x0..=x1 {
        for y in [y0, y1] {
            if !a.contains((x, y)) && !outside[idx((x, y))] {
                outside[idx((x, y))] = true;
                queue.push_back((x, y));
            }
        }
    }
    for y in y0..=y1 {
        for x in [x0, x1] {
            if !a.contains((x, y)) && !outside[idx((x, y))] {
                outside[idx((x, y))] = true;
                queue.push_back((x, y));
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        for q in neighbors4(p) {
            if in_box(q) && !a.contains(q) && !outside[idx(q)] {
                outside[idx(q)] = true;
                queue.push_back(q);
            }
        }
    }

    let mut seen = vec![false; w * h];
    let mut holes = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = (x, y);
            if a.contains(p) || outside[idx(p)] || seen[idx(p)] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![p];
            seen[idx(p)] = true;
            while let Some(q) = stack.pop() {
                comp.push(q);
                for r in neighbors4(q) {
                    if in_box(r) && !a.contains(r) && !outside[idx(r)] && !seen[idx(r)] {
                        seen[idx(r)] = true;
                        stack.push(r);
                    }
                }
            }
            comp.sort_unstable();
            holes.push(comp);
        }
    }
    holes.sort_unstable();
    HoleReport { count: holes.len(), holes }
}

/// Independent union-find computation of the hole count over the same
/// inflated box, with a sentinel root for the unbounded side.
pub fn hole_count_union_find(a: &Cluster2D) -> usize {
    let (x0, x1, y0, y1) = a.bbox();
    let (x0, x1, y0, y1) = (x0 - 1, x1 + 1, y0 - 1, y1 + 1);
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let cells = w * h;
    let outer = cells; // sentinel
    let mut parent: Vec<u32> = (0..=cells as u32).collect();

    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    fn union(parent: &mut [u32], a: u32, b: u32) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra as usize] = rb;
        }
    }

    let idx = |p: Point| ((p.0 - x0) as usize * h + (p.1 - y0) as usize) as u32;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = (x, y);
            if a.contains(p) {
                continue;
            }
            if x == x0 || x == x1 || y == y0 || y == y1 {
                union(&mut parent, idx(p), outer as u32);
            }
            for q in [(x + 1, y), (x, y + 1)] {
                if q.0 <= x1 && q.1 <= y1 && !a.contains(q) {
                    union(&mut parent, idx(p), idx(q));
                }
            }
        }
    }

    let mut roots = HashSet::new();
    let outer_root = find(&mut parent, outer as u32);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = (x, y);
            if !a.contains(p) {
                let r = find(&mut parent, idx(p));
                if r != outer_root {
                    roots.insert(r);
                }
            }
        }
    }
    roots.len()
}

/// Incremental hole counter.
///
/// Adding a point can only split its complement component (possibly creating
/// holes) or consume it entirely; the tracker classifies the pieces around
/// the added point with a lockstep multi-source BFS and updates the count in
/// O(local work) for the common cases. The group bookkeeping uses the
/// identities: if no piece is known unbounded and one group is still open,
/// the count gain equals the number of exhausted finite pieces either way;
/// with an unbounded piece present every finite piece is a new hole.
#[derive(Debug, Clone, Default)]
pub struct IncrementalHoles {
    count: i64,
}

impl IncrementalHoles {
    pub fn new(initial: &Cluster2D) -> Self {
        IncrementalHoles { count: hole_count(initial).count as i64 }
    }

    pub fn count(&self) -> usize {
        self.count as usize
    }

    /// Notify the tracker that `p` was just added (`cluster` is the state
    /// after the insertion).
    pub fn on_add(&mut self, cluster: &Cluster2D, p: Point) {
        self.count += delta_holes(cluster, p);
        debug_assert!(self.count >= 0);
    }

    /// Full recomputation, for periodic revalidation.
    pub fn revalidate(&mut self, cluster: &Cluster2D) -> bool {
        let fresh = hole_count(cluster).count as i64;
        let ok = fresh == self.count;
        self.count = fresh;
        ok
    }
}

#[allow(clippy::needless_range_loop)] // group ids double as indices
fn delta_holes(cluster: &Cluster2D, p: Point) -> i64 {
    let sources: Vec<Point> =
        neighbors4(p).into_iter().filter(|&q| !cluster.contains(q)).collect();
    if sources.is_empty() {
        // p itself was a one-cell hole
        return -1;
    }
    let (bx0, bx1, by0, by1) = cluster.bbox();
    let escapes = |q: Point| q.0 < bx0 || q.0 > bx1 || q.1 < by0 || q.1 > by1;

    // Lockstep BFS from each free neighbor of p. Group states: alive,
    // exhausted (finite piece), or outer (reached past the bbox).
    let k = sources.len();
    let mut root: Vec<usize> = (0..k).collect();
    fn find_root(root: &mut [usize], mut i: usize) -> usize {
        while root[i] != i {
            root[i] = root[root[i]];
            i = root[i];
        }
        i
    }
    let mut frontier: Vec<VecDeque<Point>> = Vec::with_capacity(k);
    let mut owner: HashMap<Point, usize> = HashMap::new();
    let mut outer_groups: HashSet<usize> = HashSet::new();
    let mut finite_pieces = 0i64;
    for (g, &s) in sources.iter().enumerate() {
        if let Some(&prev) = owner.get(&s) {
            // duplicate source (can't happen: neighbors are distinct)
            let r = find_root(&mut root, prev);
            root[g] = r;
            frontier.push(VecDeque::new());
            continue;
        }
        owner.insert(s, g);
        let mut f = VecDeque::new();
        if escapes(s) {
            outer_groups.insert(g);
        } else {
            f.push_back(s);
        }
        frontier.push(f);
    }

    loop {
        // collapse group list to alive roots
        let mut alive: Vec<usize> = Vec::new();
        for g in 0..k {
            if find_root(&mut root, g) == g
                && !outer_groups.contains(&g)
                && !frontier[g].is_empty()
            {
                alive.push(g);
            }
        }
        let outer_exists = (0..k)
            .any(|g| find_root(&mut root, g) == g && outer_groups.contains(&g));
        if alive.is_empty() {
            // fully resolved
            return if outer_exists { finite_pieces } else { finite_pieces - 1 };
        }
        if alive.len() == 1 && !outer_exists {
            // the last open piece contributes the same whether it closes
            // finite or runs off to infinity
            return finite_pieces;
        }
        // expand each alive group by one layer
        for &g in &alive {
            let layer = frontier[g].len();
            let mut became_outer = false;
            for _ in 0..layer {
                let q = frontier[g].pop_front().unwrap();
                for r in neighbors4(q) {
                    if cluster.contains(r) {
                        continue;
                    }
                    match owner.get(&r) {
                        Some(&o) => {
                            let ro = find_root(&mut root, o);
                            let rg = find_root(&mut root, g);
                            if ro != rg {
                                // merge: keep rg as the live root
                                root[ro] = rg;
                                if outer_groups.contains(&ro) {
                                    outer_groups.insert(rg);
                                }
                                let moved = std::mem::take(&mut frontier[ro]);
                                frontier[rg].extend(moved);
                                if outer_groups.contains(&rg) {
                                    // outer pieces stay frozen
                                    frontier[rg].clear();
                                }
                            }
                        }
                        None => {
                            owner.insert(r, g);
                            if escapes(r) {
                                became_outer = true;
                            } else {
                                frontier[g].push_back(r);
                            }
                        }
                    }
                }
            }
            if became_outer {
                let rg = find_root(&mut root, g);
                outer_groups.insert(rg);
                frontier[rg].clear();
            }
            let rg = find_root(&mut root, g);
            if rg == g && !outer_groups.contains(&g) && frontier[g].is_empty() {
                finite_pieces += 1;
            }
        }
    }
}
