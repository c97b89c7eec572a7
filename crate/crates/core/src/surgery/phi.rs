use super::{
    choose_attach_points, AttachPlan, PatchDecomposition, SurgeryError, LUCKY_VISITORS,
};
use crate::dla2d::{hole_count, l1, neighbors4, Cluster2D, Point};
use crate::rng::UniformStream;
use std::collections::{HashMap, HashSet, VecDeque};

/// The sites a sampled walk visits, in order, from its entry on
/// `Delta(a, L)` up to and including its first point inside the cluster.
/// Far-field circle jumps may appear between consecutive entries, but only
/// while the walker is well outside the contour region, so every hitting
/// decision reads off genuine nearest-neighbor segments.
pub type WalkRecord = Vec<Point>;

/// What the surgery map did to one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathAction {
    /// Case (i): both clusters were hit at the same time and place.
    Unchanged,
    /// Case (ii): out-and-back loop through the grown structure so the
    /// modified cluster attaches at a site the unmodified one already holds.
    CatchUp { at: usize, loop_half: Vec<Point> },
    /// Case (iii): loop out to the hat loop, around, and down the approach
    /// path to the designated target.
    Attach { visitor: usize, at: usize, loop_half_len: usize },
}

/// The per-sample decisions of the map, fully determined by the walk
/// prefixes.
#[derive(Debug, Clone)]
pub struct SurgeryPlan {
    pub theta: usize,
    pub v: [usize; LUCKY_VISITORS],
    pub actions: Vec<PathAction>,
    pub targets: [Point; 7],
}

/// Everything measured on one sampled tuple.
#[derive(Debug, Clone)]
pub struct SurgerySample {
    pub cluster_size: usize,
    pub path_count: usize,
    pub plan_theta: usize,
    pub v7: usize,
    pub hole_before: usize,
    pub hole_after: usize,
    pub v_loop_lengths: Vec<usize>,
    pub catchup_lengths: Vec<usize>,
    pub catchup_count: usize,
    pub pre_v7_max_component: usize,
    pub input_hash: u64,
    pub output_hash: u64,
    pub plan_hash: u64,
}

fn fnv1a(h: &mut u64, bytes: &[u8]) {
    for &b in bytes {
        *h ^= b as u64;
        *h = h.wrapping_mul(0x100_0000_01b3);
    }
}

fn hash_points(h: &mut u64, pts: &[Point]) {
    for p in pts {
        fnv1a(h, &p.0.to_le_bytes());
        fnv1a(h, &p.1.to_le_bytes());
    }
}

/// Sample one walk: start on `Delta(a, L)` uniformly, walk until entering
/// the cluster, recording every visited site. Jumps fire only beyond the
/// guard band around the contour's bounding box.
pub fn sample_walk_record(
    a: &Cluster2D,
    gbox: (i32, i32, i32, i32),
    l_offset: i64,
    stream: &mut UniformStream,
    step_cap: u64,
) -> Result<WalkRecord, SurgeryError> {
    let radius = (a.max_l1() as i64 + l_offset).min(i32::MAX as i64 / 8) as i32;
    let start = crate::dla2d::diamond_point(radius, stream.next_index(4 * radius as usize));
    let mut rec = vec![start];
    let mut p = start;
    let mut budget = step_cap;
    let dist_to_gbox = |q: Point| -> i32 {
        let dx = (gbox.0 - q.0).max(q.0 - gbox.1).max(0);
        let dy = (gbox.2 - q.1).max(q.1 - gbox.3).max(0);
        dx.max(dy)
    };
    loop {
        if budget == 0 {
            return Err(SurgeryError::WalkBudget);
        }
        budget -= 1;
        let d = dist_to_gbox(p);
        if d > 48 {
            // far field: jump on a circle that cannot reach the guard band,
            // with an outer clamp pulling runaways back to the entry shell
            if l1(p) as i64 > 4 * radius as i64 {
                p = crate::dla2d::diamond_point(radius, stream.next_index(4 * radius as usize));
                rec.push(p);
                continue;
            }
            let rho = (d as f64 - 8.0).min(1e9);
            let theta = stream.next_f64() * std::f64::consts::TAU;
            let (s, c) = theta.sin_cos();
            p = (p.0 + (rho * c).round() as i32, p.1 + (rho * s).round() as i32);
            rec.push(p);
            continue;
        }
        p = match stream.next_u64() & 3 {
            0 => (p.0 + 1, p.1),
            1 => (p.0 - 1, p.1),
            2 => (p.0, p.1 + 1),
            _ => (p.0, p.1 - 1),
        };
        rec.push(p);
        if a.contains(p) {
            return Ok(rec);
        }
    }
}

/// Pass 1: evolve the unmodified cluster and find the lucky patch.
fn find_lucky_streaming(
    a: &Cluster2D,
    decomp: &PatchDecomposition,
    seed: u64,
    sample_id: u64,
    l_offset: i64,
    path_count: usize,
    step_cap: u64,
) -> Result<(usize, [usize; LUCKY_VISITORS]), SurgeryError> {
    let gbox = decomp.contour.bbox();
    let mut cluster = a.clone();
    let mut counts = vec![0u32; decomp.patch_count()];
    let mut visitors: Vec<Vec<usize>> = vec![Vec::new(); decomp.patch_count()];
    for k in 1..=path_count {
        let mut stream = UniformStream::new(seed, walk_stream_id(sample_id, k));
        let rec = sample_walk_record(a, gbox, l_offset, &mut stream, step_cap)?;
        let attach_at = rec
            .iter()
            .position(|&p| cluster.is_boundary(p))
            .ok_or_else(|| SurgeryError::ConstructionBug("record misses the boundary".into()))?;
        let mut reached = Vec::new();
        let mut first_hit: HashMap<usize, usize> = HashMap::new();
        for (idx, &p) in rec[..attach_at].iter().enumerate() {
            for &pi in decomp.patches_at(p) {
                first_hit.entry(pi as usize).or_insert(idx);
            }
        }
        for &pi in first_hit.keys() {
            counts[pi] += 1;
            visitors[pi].push(k);
            if counts[pi] as usize == LUCKY_VISITORS {
                reached.push(pi);
            }
        }
        if !reached.is_empty() {
            let deciding = reached.iter().map(|&pi| (first_hit[&pi], pi)).min().unwrap();
            let hit_point = rec[deciding.0];
            let tied: Vec<usize> = reached
                .iter()
                .copied()
                .filter(|&pi| first_hit[&pi] == deciding.0)
                .collect();
            let theta = if tied.len() == 1 {
                tied[0]
            } else {
                *tied
                    .iter()
                    .find(|&&pi| decomp.patches[pi].gamma_plus.points().contains(&hit_point))
                    .ok_or_else(|| {
                        SurgeryError::ConstructionBug("tie without a gamma-plus side".into())
                    })?
            };
            let mut v = [0usize; LUCKY_VISITORS];
            v.copy_from_slice(&visitors[theta][..LUCKY_VISITORS]);
            return Ok((theta, v));
        }
        cluster.add_boundary_point(rec[attach_at]);
    }
    Err(SurgeryError::NoLuckyPatch)
}

fn walk_stream_id(sample_id: u64, k: usize) -> u64 {
    sample_id
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(k as u64)
}

/// Shortest catch-up half-loop: from the fresh attach point `x` of the
/// unmodified cluster, through its own occupied structure, to the first
/// occupied point that the modified cluster still sees as boundary. Keeping
/// every vertex inside the unmodified cluster preserves the sandwich
/// property of the growing pair. BFS with a fixed neighbor order keeps the
/// choice canonical.
fn catchup_half(
    x: Point,
    a_omega: &Cluster2D,
    a_phi: &Cluster2D,
) -> Result<Vec<Point>, SurgeryError> {
    let mut prev: HashMap<Point, Point> = HashMap::new();
    let mut queue = VecDeque::new();
    prev.insert(x, x);
    queue.push_back(x);
    while let Some(p) = queue.pop_front() {
        for q in neighbors4(p) {
            if prev.contains_key(&q) || !a_omega.contains(q) {
                continue;
            }
            if a_phi.is_boundary(q) {
                // rebuild x -> q
                let mut path = vec![q];
                let mut cur = p;
                while cur != x {
                    path.push(cur);
                    cur = prev[&cur];
                }
                path.push(x);
                path.reverse();
                return Ok(path);
            }
            prev.insert(q, p);
            queue.push_back(q);
        }
    }
    Err(SurgeryError::ConstructionBug("catch-up loop found no modified-boundary point".into()))
}

/// Minimal connector for case (iii): from the patch hit point along free
/// space (avoiding the patch interior and the modified cluster with its
/// boundary) to the wall's contour end.
fn wall_connector(
    from: Point,
    to: Point,
    theta: &super::Patch,
    a_phi: &Cluster2D,
    decomp: &PatchDecomposition,
) -> Result<Vec<Point>, SurgeryError> {
    let (x0, x1, y0, y1) = decomp.contour.bbox();
    let ok = |p: Point| {
        p.0 >= x0 - 3
            && p.0 <= x1 + 3
            && p.1 >= y0 - 3
            && p.1 <= y1 + 3
            && !theta.interior.contains(&p)
            && !a_phi.contains(p)
            && !a_phi.is_boundary(p)
    };
    if !ok(from) {
        return Err(SurgeryError::ConstructionBug(format!(
            "connector start {from:?} violates its own constraints"
        )));
    }
    let mut prev: HashMap<Point, Point> = HashMap::new();
    let mut queue = VecDeque::new();
    prev.insert(from, from);
    queue.push_back(from);
    while let Some(p) = queue.pop_front() {
        if p == to {
            let mut path = Vec::new();
            let mut cur = p;
            while cur != from {
                path.push(cur);
                cur = prev[&cur];
            }
            path.push(from);
            path.reverse();
            return Ok(path);
        }
        for q in neighbors4(p) {
            if ok(q) && !prev.contains_key(&q) {
                prev.insert(q, p);
                queue.push_back(q);
            }
        }
    }
    Err(SurgeryError::ConstructionBug("empty connector family".into()))
}

/// Grown-structure component tracker for the pre-deciding-path bound.
#[derive(Default)]
struct ComponentSizes {
    parent: HashMap<Point, Point>,
    size: HashMap<Point, usize>,
    max_size: usize,
}

impl ComponentSizes {
    fn find(&mut self, mut p: Point) -> Point {
        while self.parent[&p] != p {
            let gp = self.parent[&self.parent[&p]];
            self.parent.insert(p, gp);
            p = gp;
        }
        p
    }

    fn add(&mut self, p: Point) {
        self.parent.insert(p, p);
        self.size.insert(p, 1);
        for q in neighbors4(p) {
            if self.parent.contains_key(&q) {
                let (rp, rq) = (self.find(p), self.find(q));
                if rp != rq {
                    let s = self.size[&rp] + self.size[&rq];
                    self.parent.insert(rp, rq);
                    self.size.insert(rq, s);
                }
            }
        }
        let r = self.find(p);
        self.max_size = self.max_size.max(self.size[&r]);
    }
}

/// Run the full surgery experiment on one sampled path tuple: find the
/// lucky patch, build the modified paths, grow both clusters, and measure
/// every bound the construction promises.
pub fn run_surgery_sample(
    a: &Cluster2D,
    decomp: &PatchDecomposition,
    seed: u64,
    sample_id: u64,
    step_cap: u64,
) -> Result<SurgerySample, SurgeryError> {
    let l_paths = 6 * a.size() + 1;
    let l_offset = l_paths as i64;
    let gbox = decomp.contour.bbox();
    let (theta_idx, v) =
        find_lucky_streaming(a, decomp, seed, sample_id, l_offset, l_paths, step_cap)?;
    let theta = &decomp.patches[theta_idx];
    let plan_attach: AttachPlan = choose_attach_points(a, theta)?;
    let v7 = v[LUCKY_VISITORS - 1];

    let theta_pts: HashSet<Point> = patch_member_points(decomp, theta_idx);

    let mut a_omega = a.clone();
    let mut a_phi = a.clone();
    let mut comps = ComponentSizes::default();
    let mut pre_v7_max = 0usize;
    let mut actions = Vec::with_capacity(v7);
    let mut v_loop_lengths = Vec::new();
    let mut catchup_lengths = Vec::new();
    let mut visitor_no = 0usize;
    let mut input_hash = 0xcbf2_9ce4_8422_2325u64;
    let mut output_hash = 0xcbf2_9ce4_8422_2325u64;
    let hole_before = hole_count(a).count;

    for k in 1..=l_paths {
        let mut stream = UniformStream::new(seed, walk_stream_id(sample_id, k));
        let rec = sample_walk_record(a, gbox, l_offset, &mut stream, step_cap)?;
        hash_points(&mut input_hash, &rec);

        if k > v7 {
            // identity: only the modified cluster keeps growing
            let t_phi = rec
                .iter()
                .position(|&p| a_phi.is_boundary(p))
                .ok_or_else(|| SurgeryError::ConstructionBug("no modified attach".into()))?;
            a_phi.add_boundary_point(rec[t_phi]);
            hash_points(&mut output_hash, &rec);
            continue;
        }

        let t_omega = rec
            .iter()
            .position(|&p| a_omega.is_boundary(p))
            .ok_or_else(|| SurgeryError::ConstructionBug("no unmodified attach".into()))?;
        let t_phi = rec.iter().position(|&p| a_phi.is_boundary(p));
        let t_theta = rec.iter().position(|&p| theta_pts.contains(&p));

        let theta_first = t_theta.is_some_and(|t| t < t_omega);
        if !theta_first {
            let t_phi = t_phi
                .ok_or_else(|| SurgeryError::ConstructionBug("no modified attach".into()))?;
            if t_phi == t_omega {
                // case (i)
                a_omega.add_boundary_point(rec[t_omega]);
                comps.add(rec[t_omega]);
                a_phi.add_boundary_point(rec[t_omega]);
                actions.push(PathAction::Unchanged);
                hash_points(&mut output_hash, &rec);
            } else if t_omega < t_phi {
                // case (ii): catch-up loop
                let x = rec[t_omega];
                let half = catchup_half(x, &a_omega, &a_phi)?;
                let u = *half.last().unwrap();
                a_omega.add_boundary_point(x);
                comps.add(x);
                a_phi.add_boundary_point(u);
                catchup_lengths.push(2 * (half.len() - 1));
                hash_points(&mut output_hash, &rec[..=t_omega]);
                hash_points(&mut output_hash, &half[1..]);
                let back: Vec<Point> = half.iter().rev().skip(1).copied().collect();
                hash_points(&mut output_hash, &back);
                hash_points(&mut output_hash, &rec[t_omega + 1..]);
                actions.push(PathAction::CatchUp { at: t_omega, loop_half: half });
            } else {
                return Err(SurgeryError::ConstructionBug(
                    "modified cluster hit before unmodified and before the patch".into(),
                ));
            }
            continue;
        }

        // case (iii): this path is a lucky-patch visitor
        let t_theta = t_theta.unwrap();
        if t_phi.is_some_and(|t| t <= t_theta) {
            return Err(SurgeryError::ConstructionBug(
                "modified boundary hit before the lucky patch".into(),
            ));
        }
        visitor_no += 1;
        let i = visitor_no;
        if k == v7 {
            pre_v7_max = comps.max_size;
        }
        if v[i - 1] != k {
            return Err(SurgeryError::ConstructionBug(format!(
                "visitor order mismatch: path {k} is visitor {i} but plan says {}",
                v[i - 1]
            )));
        }
        let p_hit = rec[t_theta];
        let alpha_half = build_alpha(p_hit, theta, theta_idx, decomp, &a_phi, &plan_attach, i)?;
        let target = plan_attach.x[i - 1];
        if *alpha_half.last().unwrap() != target {
            return Err(SurgeryError::ConstructionBug("approach ends off target".into()));
        }
        // the target must be the first modified-boundary point along alpha
        let first_bnd = alpha_half.iter().position(|&p| a_phi.is_boundary(p));
        if first_bnd != Some(alpha_half.len() - 1) {
            return Err(SurgeryError::ConstructionBug(format!(
                "approach path {i} touches the modified boundary early at {first_bnd:?}"
            )));
        }
        a_phi.add_boundary_point(target);
        a_omega.add_boundary_point(rec[t_omega]);
        comps.add(rec[t_omega]);
        v_loop_lengths.push(2 * (alpha_half.len() - 1));
        hash_points(&mut output_hash, &rec[..=t_theta]);
        hash_points(&mut output_hash, &alpha_half[1..]);
        let back: Vec<Point> = alpha_half.iter().rev().skip(1).copied().collect();
        hash_points(&mut output_hash, &back);
        hash_points(&mut output_hash, &rec[t_theta + 1..]);
        actions.push(PathAction::Attach {
            visitor: i,
            at: t_theta,
            loop_half_len: alpha_half.len() - 1,
        });
    }

    let hole_after = hole_count(&a_phi).count;
    let mut plan_hash = 0xcbf2_9ce4_8422_2325u64;
    hash_points(&mut plan_hash, &plan_attach.x);
    for act in &actions {
        match act {
            PathAction::Unchanged => fnv1a(&mut plan_hash, b"u"),
            PathAction::CatchUp { at, loop_half } => {
                fnv1a(&mut plan_hash, &(*at as u64).to_le_bytes());
                hash_points(&mut plan_hash, loop_half);
            }
            PathAction::Attach { visitor, at, loop_half_len } => {
                fnv1a(&mut plan_hash, &(*visitor as u64).to_le_bytes());
                fnv1a(&mut plan_hash, &(*at as u64).to_le_bytes());
                fnv1a(&mut plan_hash, &(*loop_half_len as u64).to_le_bytes());
            }
        }
    }

    Ok(SurgerySample {
        cluster_size: a.size(),
        path_count: l_paths,
        plan_theta: theta_idx,
        v7,
        hole_before,
        hole_after,
        v_loop_lengths,
        catchup_lengths: catchup_lengths.clone(),
        catchup_count: catchup_lengths.len(),
        pre_v7_max_component: pre_v7_max,
        input_hash,
        output_hash,
        plan_hash,
    })
}

fn patch_member_points(decomp: &PatchDecomposition, idx: usize) -> HashSet<Point> {
    decomp
        .membership_points()
        .filter(|(_, owners)| owners.contains(&(idx as u8)))
        .map(|(&p, _)| p)
        .collect()
}

/// The half-loop of case (iii): from the patch hit point to the attach
/// target, via the hat loop and the approach path.
fn build_alpha(
    p_hit: Point,
    theta: &super::Patch,
    theta_idx: usize,
    decomp: &PatchDecomposition,
    a_phi: &Cluster2D,
    plan: &AttachPlan,
    visitor: usize,
) -> Result<Vec<Point>, SurgeryError> {
    let hat = &decomp.hat;
    let beta = plan.beta[visitor - 1].points();
    let pos_l = hat.position(theta.xi_l).ok_or_else(|| {
        SurgeryError::ConstructionBug("xi_l missing from hat loop".into())
    })?;
    let pos_m = hat.position(theta.xi_m).ok_or_else(|| {
        SurgeryError::ConstructionBug("xi_m missing from hat loop".into())
    })?;
    let pos_r = hat.position(theta.xi_r).ok_or_else(|| {
        SurgeryError::ConstructionBug("xi_r missing from hat loop".into())
    })?;

    let mut half: Vec<Point>;
    if decomp.contour.contains(p_hit) {
        // hit on the arc: follow the hat loop toward xi_m staying inside
        // the arc
        let pos_p = hat.position(p_hit).unwrap();
        let forward_ok = arc_order_ok(pos_l, pos_p, pos_m, hat.points().len());
        let route = if forward_ok {
            hat.route(pos_p, pos_m, false)
        } else {
            hat.route(pos_p, pos_m, true)
        };
        half = route;
    } else if theta.gamma_minus.points().contains(&p_hit) {
        let r = wall_connector(p_hit, theta.xi_l, theta, a_phi, decomp)?;
        half = r;
        half.extend_from_slice(&hat.route(pos_l, pos_m, false)[1..]);
    } else if theta.gamma_plus.points().contains(&p_hit) {
        let r = wall_connector(p_hit, theta.xi_r, theta, a_phi, decomp)?;
        half = r;
        half.extend_from_slice(&hat.route(pos_r, pos_m, true)[1..]);
    } else {
        return Err(SurgeryError::ConstructionBug(format!(
            "lucky patch hit at interior point {p_hit:?}"
        )));
    }
    half.extend_from_slice(&beta[1..]);
    // adjacency sanity over the spliced pieces
    for w in half.windows(2) {
        if crate::dla2d::l1_dist(w[0], w[1]) != 1 {
            return Err(SurgeryError::ConstructionBug(format!(
                "alpha loop breaks adjacency at {:?} -> {:?} (theta {theta_idx})",
                w[0], w[1]
            )));
        }
    }
    Ok(half)
}

/// Does walking forward from `pos_p` reach `pos_m` without leaving the arc
/// `[pos_l, pos_l + arc length]`? Positions live on a cyclic loop of length
/// `n`; the arc runs forward from `xi_l` through `xi_m` to `xi_r`.
fn arc_order_ok(pos_l: usize, pos_p: usize, pos_m: usize, n: usize) -> bool {
    let rel = |x: usize| (x + n - pos_l) % n;
    rel(pos_p) <= rel(pos_m)
}
