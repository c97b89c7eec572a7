use super::{
    build_contour, build_gamma_paths, build_hat_gamma, select_separators, Contour, GammaField,
    HatGamma, Separators, SurgeryError,
};
use crate::dla2d::{Cluster2D, PathZ2, Point};
use std::collections::{HashMap, HashSet, VecDeque};

/// One patch of the annulus between the cluster and the contour: the closed
/// region bounded by two merged geodesics, the contour arc between them, and
/// the cluster edges reachable from that sector.
#[derive(Debug, Clone)]
pub struct Patch {
    pub xi_l: Point,
    pub xi_m: Point,
    pub xi_r: Point,
    pub gamma_minus: PathZ2,
    pub gamma_star: PathZ2,
    pub gamma_plus: PathZ2,
    /// Contour lattice points from `xi_l` to `xi_r` inclusive.
    pub arc: Vec<Point>,
    /// Lattice points strictly inside the region.
    pub interior: HashSet<Point>,
}

impl Patch {
    /// Endpoint of the middle geodesic (`y*`).
    pub fn y_star(&self) -> Point {
        self.gamma_star.end()
    }

    /// The designated hole witness `w = gamma*_39`, the point one step
    /// before the cluster on the middle geodesic.
    pub fn w_point(&self) -> Point {
        self.gamma_star.points()[self.gamma_star.points().len() - 2]
    }
}

/// The full construction over one cluster.
#[derive(Debug, Clone)]
pub struct PatchDecomposition {
    pub contour: Contour,
    pub hat: HatGamma,
    pub gammas: GammaField,
    pub separators: Separators,
    pub patches: Vec<Patch>,
    /// point -> patch indices containing it (walls belong to two patches).
    membership: HashMap<Point, Vec<u8>>,
}

impl PatchDecomposition {
    pub fn patch_count(&self) -> usize {
        self.patches.len()
    }

    /// Patches whose closed region contains `p` (cluster points excluded).
    pub fn patches_at(&self, p: Point) -> &[u8] {
        self.membership.get(&p).map_or(&[], |v| v.as_slice())
    }

    pub fn membership_points(&self) -> impl Iterator<Item = (&Point, &Vec<u8>)> {
        self.membership.iter()
    }
}

fn doubled(p: Point) -> Point {
    (2 * p.0, 2 * p.1)
}

/// Doubled-lattice raster of a chain of lattice points with unit or diagonal
/// steps: endpoints map to even points, each step contributes its midpoint.
fn raster_into(set: &mut HashSet<Point>, pts: &[Point]) {
    for w in pts.windows(2) {
        let a = doubled(w[0]);
        let b = doubled(w[1]);
        set.insert(a);
        set.insert(((a.0 + b.0) / 2, (a.1 + b.1) / 2));
        set.insert(b);
    }
    if let Some(&last) = pts.last() {
        set.insert(doubled(last));
    }
}

/// Cluster edge barrier: doubled raster of every 4-adjacent occupied pair.
fn cluster_edges_doubled(a: &Cluster2D) -> HashSet<Point> {
    let mut set = HashSet::with_capacity(4 * a.size());
    for &p in a.points() {
        for q in [(p.0 + 1, p.1), (p.0, p.1 + 1)] {
            if a.contains(q) {
                raster_into(&mut set, &[p, q]);
            }
        }
    }
    set
}

pub fn build_patches(
    a: &Cluster2D,
    contour: &Contour,
    gammas: &GammaField,
    separators: &Separators,
) -> Result<Vec<Patch>, SurgeryError> {
    let edge_barrier = cluster_edges_doubled(a);
    let (cx0, cx1, cy0, cy1) = contour.bbox();
    let in_domain = |d: Point| {
        d.0 >= 2 * cx0 - 2 && d.0 <= 2 * cx1 + 2 && d.1 >= 2 * cy0 - 2 && d.1 <= 2 * cy1 + 2
    };
    let i_count = separators.patch_count();
    let mut patches = Vec::with_capacity(i_count);

    for i in 1..=i_count {
        let ul = separators.u[i - 1];
        let ur = separators.u[i]; // may be contour.len(): the wrapped start
        let vm = separators.v[i - 1];
        let gamma_minus = gammas.path(ul).clone();
        let gamma_plus = gammas.path(ur % contour.len()).clone();
        let gamma_star = gammas.path(vm).clone();
        let arc = contour.arc(ul, ur);

        let mut barrier = edge_barrier.clone();
        raster_into(&mut barrier, &arc);
        raster_into(&mut barrier, gamma_minus.points());
        raster_into(&mut barrier, gamma_plus.points());

        // flood fill on the doubled lattice from the second point of the
        // middle geodesic
        let seed = doubled(gamma_star.points()[1]);
        if barrier.contains(&seed) {
            return Err(SurgeryError::ConstructionBug(format!(
                "patch seed {seed:?} lies on a boundary curve"
            )));
        }
        let mut visited: HashSet<Point> = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(seed);
        queue.push_back(seed);
        while let Some(p) = queue.pop_front() {
            for q in [(p.0 + 1, p.1), (p.0 - 1, p.1), (p.0, p.1 + 1), (p.0, p.1 - 1)] {
                if !in_domain(q) {
                    return Err(SurgeryError::ConstructionBug(format!(
                        "patch {i} interior escaped the contour near {q:?}"
                    )));
                }
                if !barrier.contains(&q) && visited.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        let interior: HashSet<Point> = visited
            .iter()
            .filter(|d| d.0 % 2 == 0 && d.1 % 2 == 0)
            .map(|d| (d.0 / 2, d.1 / 2))
            .filter(|&p| !a.contains(p))
            .collect();

        patches.push(Patch {
            xi_l: contour.point(ul),
            xi_m: contour.point(vm),
            xi_r: contour.point(ur),
            gamma_minus,
            gamma_star,
            gamma_plus,
            arc,
            interior,
        });
    }

    // interiors must be pairwise disjoint
    let mut seen: HashMap<Point, usize> = HashMap::new();
    for (idx, p) in patches.iter().enumerate() {
        for &q in &p.interior {
            if let Some(prev) = seen.insert(q, idx) {
                return Err(SurgeryError::ConstructionBug(format!(
                    "interiors of patches {prev} and {idx} overlap at {q:?}"
                )));
            }
        }
    }
    Ok(patches)
}

fn build_membership(
    a: &Cluster2D,
    patches: &[Patch],
) -> Result<HashMap<Point, Vec<u8>>, SurgeryError> {
    if patches.len() > u8::MAX as usize {
        return Err(SurgeryError::ConstructionBug("more than 255 patches".into()));
    }
    let mut map: HashMap<Point, Vec<u8>> = HashMap::new();
    let tag = |p: Point, idx: u8, map: &mut HashMap<Point, Vec<u8>>| {
        if a.contains(p) {
            return;
        }
        let v = map.entry(p).or_default();
        if !v.contains(&idx) {
            v.push(idx);
        }
    };
    for (i, patch) in patches.iter().enumerate() {
        let idx = i as u8;
        for &p in &patch.interior {
            tag(p, idx, &mut map);
        }
        for &p in &patch.arc {
            tag(p, idx, &mut map);
        }
        for &p in patch.gamma_minus.points() {
            tag(p, idx, &mut map);
        }
        for &p in patch.gamma_plus.points() {
            tag(p, idx, &mut map);
        }
    }
    Ok(map)
}

/// Run the whole geometric pipeline for a cluster.
pub fn build_patch_decomposition(a: &Cluster2D) -> Result<PatchDecomposition, SurgeryError> {
    let contour = build_contour(a)?;
    let hat = build_hat_gamma(&contour)?;
    let gammas = build_gamma_paths(a, &contour)?;
    let separators = select_separators(a, &contour, &gammas)?;
    let patches = build_patches(a, &contour, &gammas, &separators)?;
    let membership = build_membership(a, &patches)?;
    Ok(PatchDecomposition { contour, hat, gammas, separators, patches, membership })
}
