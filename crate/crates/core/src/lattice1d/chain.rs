use super::observables::{PeriodObservables, Trace};
use super::site_set::{GapEffect, GapLabeling, SiteSet1D};
use super::Lattice1dError;
use crate::rng::UniformStream;
use serde::{Deserialize, Serialize};

/// Which site-enumeration the uniform draw is mapped through.
///
/// Both produce the uniform marginal over the candidate set; `Faithful`
/// reproduces the exact category ordering needed by the coupling
/// constructions (old-gap boundary first on additions, near-new-gap sites
/// first on deletions), `Fast` enumerates candidates in plain increasing
/// order and skips the per-step proximity bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    Fast,
    Faithful,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Add,
    Del,
}

/// Proximity-set data attached to a logged step. `ci_*` are |C^I| around the
/// step, `c_*` the unlabeled counterparts; `into_proximity`/`into_proximity_new`
/// say whether a deleted site landed in the post-deletion C (resp. C^I) set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepProximity {
    pub ci_before: u32,
    pub ci_after: u32,
    pub c_before: u32,
    pub c_after: u32,
    pub into_proximity: bool,
    pub into_proximity_new: bool,
}

/// One elementary step of a logged run. The external JSONL format carries
/// only `(n, i, kind, site)`; the in-memory producer also fills `proximity`,
/// which the sigma-scan and the proximity-count process require.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: u64,
    pub i: u32,
    pub kind: StepKind,
    pub site: i64,
    pub proximity: Option<StepProximity>,
}

/// The `(A, I)` pair: an occupied set with a new/old label per gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChain {
    sites: SiteSet1D,
    new_gap: Vec<bool>,
}

impl LabeledChain {
    pub fn new(sites: SiteSet1D, labeling: &GapLabeling) -> Result<Self, Lattice1dError> {
        labeling.validate(sites.gap_count())?;
        let new_gap = (0..sites.gap_count()).map(|i| labeling.new_indices.contains(&i)).collect();
        Ok(LabeledChain { sites, new_gap })
    }

    /// All gaps old (the recurrence-from-`G` setting).
    pub fn all_old(sites: SiteSet1D) -> Self {
        let n = sites.gap_count();
        LabeledChain { sites, new_gap: vec![false; n] }
    }

    /// All gaps new (the start-inside-`S_M` setting).
    pub fn all_new(sites: SiteSet1D) -> Self {
        let n = sites.gap_count();
        LabeledChain { sites, new_gap: vec![true; n] }
    }

    pub fn sites(&self) -> &SiteSet1D {
        &self.sites
    }

    pub fn labeling(&self) -> GapLabeling {
        GapLabeling::from_indices(
            self.new_gap.iter().enumerate().filter_map(|(i, &n)| n.then_some(i)),
        )
    }

    pub fn is_new_gap(&self, idx: usize) -> bool {
        self.new_gap[idx]
    }

    /// Gap sites belonging to new gaps, increasing.
    pub fn new_gap_sites(&self) -> Vec<i64> {
        self.sites.gap_sites_where(|i| self.new_gap[i])
    }

    /// L^I, the number of new gap sites.
    pub fn li(&self) -> i64 {
        self.sites
            .gaps()
            .iter()
            .zip(&self.new_gap)
            .filter(|&(_, &n)| n)
            .map(|(g, _)| g.len())
            .sum()
    }

    /// Number of new gaps and of new gaps of size >= 2.
    pub fn gi_counts(&self) -> (u32, u32) {
        let mut gi = 0;
        let mut g2i = 0;
        for (g, &n) in self.sites.gaps().iter().zip(&self.new_gap) {
            if n {
                gi += 1;
                if g.len() >= 2 {
                    g2i += 1;
                }
            }
        }
        (gi, g2i)
    }

    fn apply_label_effect(&mut self, effect: GapEffect) {
        match effect {
            GapEffect::OuterGrowth | GapEffect::Shrunk { .. } => {}
            GapEffect::Filled { idx } => {
                self.new_gap.remove(idx);
            }
            GapEffect::Created { idx } => {
                // No adjacent gap at all, so in particular no old one.
                self.new_gap.insert(idx, true);
            }
            GapEffect::Extended { idx: _ } => {
                // Merged gap is old iff the removed site was adjacent to an
                // old gap; here the only adjacent gap is `idx` itself.
            }
            GapEffect::Merged { idx } => {
                let merged_new = self.new_gap[idx] && self.new_gap[idx + 1];
                self.new_gap[idx] = merged_new;
                self.new_gap.remove(idx + 1);
            }
            GapEffect::EndpointLow { dropped } => {
                if dropped {
                    self.new_gap.remove(0);
                }
            }
            GapEffect::EndpointHigh { dropped } => {
                if dropped {
                    self.new_gap.pop();
                }
            }
        }
        debug_assert_eq!(self.new_gap.len(), self.sites.gap_count());
    }

    /// Occupied sites adjacent to an old gap, excluding the endpoints.
    pub fn v_old(&self) -> Vec<i64> {
        let mut v = Vec::new();
        for (g, &is_new) in self.sites.gaps().iter().zip(&self.new_gap) {
            if !is_new {
                v.push(g.lo - 1);
                v.push(g.hi + 1);
            }
        }
        v.sort_unstable();
        v.dedup();
        v.retain(|&x| x != self.sites.min() && x != self.sites.max());
        v
    }

    fn adjacent_to_old_gap(&self, x: i64) -> bool {
        for dx in [-1i64, 1] {
            if let Some(idx) = self.sites.gap_index_of(x + dx) {
                if !self.new_gap[idx] {
                    return true;
                }
            }
        }
        false
    }

    /// Occupied sites within distance 4 of a new gap site that are neither
    /// adjacent to an old gap nor an endpoint.
    pub fn v_new(&self) -> Vec<i64> {
        let mut v = Vec::new();
        for (g, &is_new) in self.sites.gaps().iter().zip(&self.new_gap) {
            if !is_new {
                continue;
            }
            // Only sites flanking the gap can be occupied and within reach.
            for x in (g.lo - 4)..g.lo {
                if self.sites.contains(x) {
                    v.push(x);
                }
            }
            for x in (g.hi + 1)..=(g.hi + 4) {
                if self.sites.contains(x) {
                    v.push(x);
                }
            }
        }
        v.sort_unstable();
        v.dedup();
        v.retain(|&x| {
            x != self.sites.min() && x != self.sites.max() && !self.adjacent_to_old_gap(x)
        });
        v
    }

    /// Choose and add a site from a uniform draw. Returns the site.
    pub fn add_site(&mut self, u: f64, backend: Backend) -> i64 {
        let order = match backend {
            Backend::Fast => self.addition_order_fast(),
            Backend::Faithful => self.addition_order_faithful(),
        };
        let site = order[index_from_uniform(u, order.len())];
        let effect = self.sites.add_site(site);
        self.apply_label_effect(effect);
        site
    }

    /// Choose and delete a site from a uniform draw. Returns the site.
    pub fn delete_site(&mut self, u: f64, backend: Backend) -> Result<i64, Lattice1dError> {
        if self.sites.len() < 2 {
            return Err(Lattice1dError::SingletonDeletion);
        }
        let n = self.sites.len();
        let j = index_from_uniform(u, n as usize) as u64;
        let site = match backend {
            Backend::Fast => self.sites.nth_site(j),
            Backend::Faithful => self.deletion_site_faithful(j),
        };
        let effect = self.sites.remove_site(site)?;
        self.apply_label_effect(effect);
        Ok(site)
    }

    /// Boundary sites in plain increasing order.
    fn addition_order_fast(&self) -> Vec<i64> {
        let mut order = Vec::with_capacity(self.sites.boundary_size());
        order.push(self.sites.min() - 1);
        for g in self.sites.gaps() {
            order.extend(g.boundary_points());
        }
        order.push(self.sites.max() + 1);
        order
    }

    /// Boundary sites in the coupling order: old-gap boundary points, the
    /// two outer sites, new-gap boundary points off C^I, then those in C^I.
    fn addition_order_faithful(&self) -> Vec<i64> {
        let ci = proximity_filter(&self.new_gap_sites(), 1);
        let mut order = Vec::with_capacity(self.sites.boundary_size());
        for (g, &is_new) in self.sites.gaps().iter().zip(&self.new_gap) {
            if !is_new {
                order.extend(g.boundary_points());
            }
        }
        order.push(self.sites.min() - 1);
        order.push(self.sites.max() + 1);
        let mut in_ci = Vec::new();
        for (g, &is_new) in self.sites.gaps().iter().zip(&self.new_gap) {
            if is_new {
                for p in g.boundary_points() {
                    if ci.binary_search(&p).is_ok() {
                        in_ci.push(p);
                    } else {
                        order.push(p);
                    }
                }
            }
        }
        order.extend(in_ci);
        order
    }

    /// Map a 0-based rank to an occupied site in the coupling order:
    /// V^n first, then the plain interior sites, then min, max, then V^o.
    fn deletion_site_faithful(&self, j: u64) -> i64 {
        let vn = self.v_new();
        let vo = self.v_old();
        let total = self.sites.len();
        let plain = total - 2 - vn.len() as u64 - vo.len() as u64;
        if j < vn.len() as u64 {
            return vn[j as usize];
        }
        let j = j - vn.len() as u64;
        if j < plain {
            let mut excl = vn;
            excl.extend_from_slice(&vo);
            excl.sort_unstable();
            return self.nth_plain_site(j, &excl);
        }
        let j = j - plain;
        match j {
            0 => self.sites.min(),
            1 => self.sites.max(),
            _ => vo[(j - 2) as usize],
        }
    }

    /// The `r`-th occupied interior site not in the sorted exclusion list.
    fn nth_plain_site(&self, r: u64, excl: &[i64]) -> i64 {
        let mut remaining = r as i64;
        let mut cursor = self.sites.min() + 1;
        let runs = self
            .sites
            .gaps()
            .iter()
            .map(|g| g.lo - 1)
            .chain(std::iter::once(self.sites.max() - 1));
        let mut next_start = self.sites.gaps().iter().map(|g| g.hi + 1);
        for run_end in runs {
            if run_end >= cursor {
                let lo_idx = excl.partition_point(|&x| x < cursor);
                let hi_idx = excl.partition_point(|&x| x <= run_end);
                let avail = (run_end - cursor + 1) - (hi_idx - lo_idx) as i64;
                if remaining < avail {
                    return select_in_run(cursor, &excl[lo_idx..hi_idx], remaining);
                }
                remaining -= avail;
            }
            if let Some(s) = next_start.next() {
                cursor = s;
            }
        }
        unreachable!("rank exceeds plain-site count");
    }

    /// Full observables of the current state.
    pub fn observables(&self, period: u64, r_alpha: u32, r_delta: u32) -> PeriodObservables {
        let all = self.sites.gap_sites();
        let (c, c2) = proximity_counts(&all);
        let new = self.new_gap_sites();
        let (ci, ci2) = proximity_counts(&new);
        let (gi, g2i) = self.gi_counts();
        PeriodObservables {
            period,
            size: self.sites.len(),
            l: self.sites.total_gap_sites(),
            g: self.sites.gap_count() as u32,
            g2: self.sites.g2_count() as u32,
            li: self.li(),
            gi,
            g2i,
            c,
            c2,
            ci,
            ci2,
            r_alpha,
            r_delta,
        }
    }

    /// One period: K additions then K-1 deletions, consuming exactly 2K-1
    /// draws. Optionally records every elementary step.
    pub fn run_period(
        &mut self,
        period: u64,
        stream: &mut UniformStream,
        k: u32,
        backend: Backend,
        mut step_log: Option<&mut Vec<StepRecord>>,
    ) -> Result<PeriodObservables, Lattice1dError> {
        if k < 2 {
            return Err(Lattice1dError::BadK(k));
        }
        let mut r_alpha = 0;
        let mut r_delta = 0;
        for i in 1..=(2 * k - 1) {
            let (c_before, ci_before) = if step_log.is_some() {
                (
                    proximity_filter(&self.sites.gap_sites(), 1).len() as u32,
                    proximity_filter(&self.new_gap_sites(), 1).len() as u32,
                )
            } else {
                (0, 0)
            };
            let u = stream.next_f64();
            let (kind, site) = if i <= k {
                let outer_low = self.sites.min() - 1;
                let outer_high = self.sites.max() + 1;
                let site = self.add_site(u, backend);
                if site != outer_low && site != outer_high {
                    r_alpha += 1;
                }
                (StepKind::Add, site)
            } else {
                let min = self.sites.min();
                let max = self.sites.max();
                let site = self.delete_site(u, backend)?;
                if site != min && site != max {
                    r_delta += 1;
                }
                (StepKind::Del, site)
            };
            if let Some(log) = step_log.as_deref_mut() {
                let all_after = self.sites.gap_sites();
                let new_after = self.new_gap_sites();
                let c_set = proximity_filter(&all_after, 1);
                let ci_set = proximity_filter(&new_after, 1);
                log.push(StepRecord {
                    n: period,
                    i,
                    kind,
                    site,
                    proximity: Some(StepProximity {
                        ci_before,
                        ci_after: ci_set.len() as u32,
                        c_before,
                        c_after: c_set.len() as u32,
                        into_proximity: kind == StepKind::Del
                            && c_set.binary_search(&site).is_ok(),
                        into_proximity_new: kind == StepKind::Del
                            && ci_set.binary_search(&site).is_ok(),
                    }),
                });
            }
        }
        Ok(self.observables(period, r_alpha, r_delta))
    }
}

/// `j = ceil(u * m)` clamped to `[1, m]`, returned 0-based: the index picked
/// by a uniform draw on `(0,1)` over `m` ordered candidates.
pub fn index_from_uniform(u: f64, m: usize) -> usize {
    let j = (u * m as f64).ceil() as usize;
    j.clamp(1, m) - 1
}

fn select_in_run(lo: i64, excl_in_run: &[i64], r: i64) -> i64 {
    let mut remaining = r;
    let mut cursor = lo;
    for &e in excl_in_run {
        let seg = e - cursor; // non-excluded segment [cursor, e-1]
        if remaining < seg {
            return cursor + remaining;
        }
        remaining -= seg;
        cursor = e + 1;
    }
    cursor + remaining
}

/// Count, for each site in the sorted list, how many *other* listed sites lie
/// within lattice distance 4; return (|C|, |C2|).
pub fn proximity_counts(sorted_sites: &[i64]) -> (u32, u32) {
    let (c, c2) = proximity_window(sorted_sites);
    (c, c2)
}

fn proximity_window(sorted: &[i64]) -> (u32, u32) {
    let n = sorted.len();
    let mut c = 0;
    let mut c2 = 0;
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..n {
        if hi < i {
            hi = i;
        }
        while sorted[i] - sorted[lo] > 4 {
            lo += 1;
        }
        while hi + 1 < n && sorted[hi + 1] - sorted[i] <= 4 {
            hi += 1;
        }
        let others = hi - lo;
        if others >= 1 {
            c += 1;
        }
        if others >= 2 {
            c2 += 1;
        }
    }
    (c, c2)
}

/// The sorted subset of sites having at least `min_others` other listed sites
/// within distance 4.
pub fn proximity_filter(sorted_sites: &[i64], min_others: usize) -> Vec<i64> {
    let n = sorted_sites.len();
    let mut out = Vec::new();
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..n {
        if hi < i {
            hi = i;
        }
        while sorted_sites[i] - sorted_sites[lo] > 4 {
            lo += 1;
        }
        while hi + 1 < n && sorted_sites[hi + 1] - sorted_sites[i] <= 4 {
            hi += 1;
        }
        if hi - lo >= min_others {
            out.push(sorted_sites[i]);
        }
    }
    out
}

/// The proximity sets C(a), C2(a) — or C^I, C^{I,2} when a labeling restricts
/// attention to new gap sites.
pub fn proximity_sets(
    sites: &SiteSet1D,
    labeling: Option<&GapLabeling>,
) -> (Vec<i64>, Vec<i64>) {
    let pool = match labeling {
        None => sites.gap_sites(),
        Some(l) => sites.gap_sites_where(|i| l.new_indices.contains(&i)),
    };
    (proximity_filter(&pool, 1), proximity_filter(&pool, 2))
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub k: u32,
    pub periods: u64,
    pub seed: u64,
    pub stream_id: u64,
    pub backend: Backend,
    /// Occupied sites of the initial set.
    pub initial_sites: Vec<i64>,
    /// Initial new-gap indices (0-based); `None` means all old.
    pub initial_new: Option<Vec<usize>>,
    pub log_steps: bool,
}

impl ModelConfig {
    pub fn origin(k: u32, periods: u64, seed: u64) -> Self {
        ModelConfig {
            k,
            periods,
            seed,
            stream_id: 0,
            backend: Backend::Fast,
            initial_sites: vec![0],
            initial_new: None,
            log_steps: false,
        }
    }
}

/// Run the chain for `periods` periods; deterministic given the config.
pub fn run_model(cfg: &ModelConfig) -> Result<Trace, Lattice1dError> {
    if cfg.k < 2 {
        return Err(Lattice1dError::BadK(cfg.k));
    }
    let sites = SiteSet1D::from_sites(&cfg.initial_sites)?;
    let mut chain = match &cfg.initial_new {
        None => LabeledChain::all_old(sites),
        Some(idx) => LabeledChain::new(sites, &GapLabeling::from_indices(idx.iter().copied()))?,
    };
    let mut stream = UniformStream::new(cfg.seed, cfg.stream_id);
    let mut rows = Vec::with_capacity(cfg.periods as usize + 1);
    rows.push(chain.observables(0, 0, 0));
    let mut steps = cfg.log_steps.then(Vec::new);
    for n in 1..=cfg.periods {
        let row = chain.run_period(n, &mut stream, cfg.k, cfg.backend, steps.as_mut())?;
        rows.push(row);
    }
    Ok(Trace { k: cfg.k, rows, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_of(sites: &[i64], new: &[usize]) -> LabeledChain {
        let s = SiteSet1D::from_sites(sites).unwrap();
        LabeledChain::new(s, &GapLabeling::from_indices(new.iter().copied())).unwrap()
    }

    #[test]
    fn proximity_examples() {
        // three size-1 gaps pairwise at distance 8: both sets empty
        let mut sites: Vec<i64> = (0..=18).collect();
        sites.retain(|&x| x != 1 && x != 9 && x != 17);
        let a = SiteSet1D::from_sites(&sites).unwrap();
        assert_eq!(a.gap_sites(), vec![1, 9, 17]);
        let (c, c2) = proximity_sets(&a, None);
        assert!(c.is_empty() && c2.is_empty());

        // gaps {1} and {4,5}: all three sites within 4 of two others
        let b = SiteSet1D::from_sites(&[0, 2, 3, 6]).unwrap();
        let (c, c2) = proximity_sets(&b, None);
        assert_eq!(c, vec![1, 4, 5]);
        assert_eq!(c2, vec![1, 4, 5]);

        // restricted to the single new gap {9}: no other new gap site
        let d = SiteSet1D::from_sites(&[0, 2, 8, 10]).unwrap();
        let nine = d.gap_index_of(9).unwrap();
        let (ci, _) = proximity_sets(&d, Some(&GapLabeling::from_indices([nine])));
        assert!(ci.is_empty());
    }

    #[test]
    fn worked_proximity_case() {
        // 0 and 5 the only new gap sites, then 2 gets deleted: C^I = {0,2,5},
        // C^{I,2} = {2}.
        let (c, c2) = (proximity_filter(&[0, 2, 5], 1), proximity_filter(&[0, 2, 5], 2));
        assert_eq!(c, vec![0, 2, 5]);
        assert_eq!(c2, vec![2]);
        // before the deletion 0 and 5 are at distance 5: not in proximity
        assert!(proximity_filter(&[0, 5], 1).is_empty());
    }

    #[test]
    fn add_from_singleton_hand_trace() {
        // boundary of {0} is {-1, 1}, ordered (min-1, max+1)
        let mut c = chain_of(&[0], &[]);
        assert_eq!(c.add_site(0.3, Backend::Faithful), -1);
        let mut c = chain_of(&[0], &[]);
        assert_eq!(c.add_site(0.6, Backend::Faithful), 1);
    }

    #[test]
    fn add_fills_new_gap_and_clears_label() {
        let mut c = chain_of(&[0, 2], &[0]);
        // boundary order (faithful): min-1=-1, max+1=3, then new bpt 1
        // index j = ceil(u*3): u in (2/3, 1] picks 1
        let site = c.add_site(0.9, Backend::Faithful);
        assert_eq!(site, 1);
        assert_eq!(c.sites().gap_count(), 0);
        assert!(c.labeling().new_indices.is_empty());
    }

    #[test]
    fn delete_hand_trace() {
        // a = {-1,0,1}, no labels: faithful order y1=0 (plain), y2=-1, y3=1
        let mut c = chain_of(&[-1, 0, 1], &[]);
        let site = c.delete_site(0.9, Backend::Faithful).unwrap();
        assert_eq!(site, 1);
        assert_eq!(c.sites().total_gap_sites(), 0);
        assert_eq!(c.sites().len(), 2);
    }

    #[test]
    fn deletion_labels_new_without_old_neighbor() {
        let mut c = chain_of(&[0, 1, 2], &[]);
        // force deletion of 1: faithful order: plain = {1}, then min=0, max=2
        let site = c.delete_site(0.2, Backend::Faithful).unwrap();
        assert_eq!(site, 1);
        assert_eq!(c.labeling().new_indices.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn merge_with_old_gap_is_old() {
        // {0,1,2,4} with old gap {3}; removing 2 merges {2} into {2,3}: old
        let mut c = chain_of(&[0, 1, 2, 4], &[]);
        // category lists: V^o = {2,4}\{endpoints} = {2}; wait 4 is max.
        // V^n empty; plain = {1}; order: 1, 0, 4, 2 -> index 4 picks 2
        let site = c.delete_site(0.99, Backend::Faithful).unwrap();
        assert_eq!(site, 2);
        assert_eq!(c.sites().gaps().len(), 1);
        assert_eq!(c.sites().gaps()[0].len(), 2);
        assert!(c.labeling().new_indices.is_empty(), "merged gap stays old");
    }

    #[test]
    fn endpoint_deletion_drops_l_by_gap_size() {
        let mut c = chain_of(&[0, 3, 4, 5], &[0]);
        let l_before = c.sites().total_gap_sites();
        assert_eq!(l_before, 2);
        // force min deletion: faithful order: V^n = {3,4} (within 4 of gap
        // sites 1,2; 5 is max), plain = {}, then min=0, max=5.
        // total=4, j=3 -> site 0
        let site = c.delete_site(0.7, Backend::Faithful).unwrap();
        assert_eq!(site, 0);
        assert_eq!(c.sites().total_gap_sites(), 0);
        assert!(c.labeling().new_indices.is_empty());
    }

    #[test]
    fn period_consumes_exactly_kappa_draws() {
        let mut c = chain_of(&[0], &[]);
        let mut s = UniformStream::new(7, 0);
        let k = 3;
        c.run_period(1, &mut s, k, Backend::Fast, None).unwrap();
        assert_eq!(s.cursor(), (2 * k - 1) as u64);
        assert_eq!(c.sites().len(), 2);
    }

    #[test]
    fn composed_period_hand_trace() {
        // a={0}, K=2, draws (0.3, 0.6, 0.9): add -1, add 1, delete 1
        let mut c = chain_of(&[0], &[]);
        let mut log = Vec::new();
        let mut s = CannedStream::new(vec![0.3, 0.6, 0.9]);
        let o = run_period_canned(&mut c, 1, &mut s, 2, &mut log);
        assert_eq!(c.sites().iter_sites().collect::<Vec<_>>(), vec![-1, 0]);
        assert_eq!(o.l, 0);
        assert_eq!(o.r_alpha, 0);
        assert_eq!(o.r_delta, 0);
    }

    // Tiny canned-draw helper for hand traces.
    struct CannedStream {
        vals: Vec<f64>,
        at: usize,
    }
    impl CannedStream {
        fn new(vals: Vec<f64>) -> Self {
            CannedStream { vals, at: 0 }
        }
        fn next(&mut self) -> f64 {
            let v = self.vals[self.at];
            self.at += 1;
            v
        }
    }
    fn run_period_canned(
        c: &mut LabeledChain,
        period: u64,
        s: &mut CannedStream,
        k: u32,
        _log: &mut Vec<StepRecord>,
    ) -> PeriodObservables {
        let mut r_alpha = 0;
        let mut r_delta = 0;
        for i in 1..=(2 * k - 1) {
            let u = s.next();
            if i <= k {
                let lo = c.sites().min() - 1;
                let hi = c.sites().max() + 1;
                let site = c.add_site(u, Backend::Faithful);
                if site != lo && site != hi {
                    r_alpha += 1;
                }
            } else {
                let mn = c.sites().min();
                let mx = c.sites().max();
                let site = c.delete_site(u, Backend::Faithful).unwrap();
                if site != mn && site != mx {
                    r_delta += 1;
                }
            }
        }
        c.observables(period, r_alpha, r_delta)
    }

    #[test]
    fn run_model_is_deterministic_and_sized() {
        let cfg = ModelConfig { log_steps: true, ..ModelConfig::origin(2, 50, 42) };
        let t1 = run_model(&cfg).unwrap();
        let t2 = run_model(&cfg).unwrap();
        assert_eq!(t1.rows, t2.rows);
        for (n, row) in t1.rows.iter().enumerate() {
            assert_eq!(row.size, 1 + n as u64);
        }
    }

    #[test]
    fn additions_never_increase_l_deletions_bounded() {
        let cfg = ModelConfig { log_steps: true, ..ModelConfig::origin(3, 200, 9) };
        let t = run_model(&cfg).unwrap();
        for w in t.rows.windows(2) {
            let dl = w[1].l - w[0].l;
            assert!(dl <= w[1].r_delta as i64 - w[1].r_alpha as i64);
        }
    }

    #[test]
    fn old_gap_count_never_increases() {
        let s = SiteSet1D::from_sites(&[0, 2, 3, 7, 8, 9, 15]).unwrap();
        let mut chain = LabeledChain::all_old(s);
        let mut stream = UniformStream::new(11, 4);
        let mut prev_old = chain.sites().gap_count() as i64 - chain.gi_counts().0 as i64;
        for n in 1..400 {
            chain.run_period(n, &mut stream, 2, Backend::Faithful, None).unwrap();
            let old = chain.sites().gap_count() as i64 - chain.gi_counts().0 as i64;
            assert!(old <= prev_old, "old gaps grew at period {n}");
            prev_old = old;
        }
    }

    #[test]
    fn incremental_registry_matches_recomputation() {
        let cfg = ModelConfig { backend: Backend::Faithful, ..ModelConfig::origin(2, 300, 5) };
        let sites = SiteSet1D::from_sites(&cfg.initial_sites).unwrap();
        let mut chain = LabeledChain::all_old(sites);
        let mut stream = UniformStream::new(cfg.seed, cfg.stream_id);
        for n in 1..=cfg.periods {
            chain.run_period(n, &mut stream, cfg.k, cfg.backend, None).unwrap();
            assert_eq!(chain.sites().recomputed(), *chain.sites());
        }
    }
}
