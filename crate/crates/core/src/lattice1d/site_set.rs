use super::Lattice1dError;
use serde::{Deserialize, Serialize};

/// A maximal run of unoccupied interior sites, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub lo: i64,
    pub hi: i64,
}

impl Gap {
    pub fn len(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// The one or two gap sites adjacent to occupied sites.
    pub fn boundary_points(&self) -> impl Iterator<Item = i64> {
        let second = if self.hi != self.lo { Some(self.hi) } else { None };
        std::iter::once(self.lo).chain(second)
    }
}

/// Index set of "new" gaps, gaps being enumerated left to right from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GapLabeling {
    pub new_indices: std::collections::BTreeSet<usize>,
}

impl GapLabeling {
    pub fn empty() -> Self {
        GapLabeling::default()
    }

    /// All gaps labeled new.
    pub fn full(gap_count: usize) -> Self {
        GapLabeling { new_indices: (0..gap_count).collect() }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        GapLabeling { new_indices: iter.into_iter().collect() }
    }

    pub fn validate(&self, gap_count: usize) -> Result<(), Lattice1dError> {
        if let Some(&idx) = self.new_indices.iter().next_back() {
            if idx >= gap_count {
                return Err(Lattice1dError::LabelOutOfRange(idx, gap_count));
            }
        }
        Ok(())
    }
}

/// Finite occupied set on the integer line, stored as its extent plus the
/// sorted list of gaps. Occupied sites are exactly `[min, max]` minus the gap
/// sites, so membership, ranking and per-step updates all run off the gap
/// registry in `O(G)` or better.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteSet1D {
    min: i64,
    max: i64,
    gaps: Vec<Gap>,
}

/// What a single add/remove did to the gap registry; drives label updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapEffect {
    /// Added at `min - 1` or `max + 1`.
    OuterGrowth,
    /// Addition shrank gap `idx` by one site (still nonempty).
    Shrunk { idx: usize },
    /// Addition filled the single remaining site of gap `idx`.
    Filled { idx: usize },
    /// Interior deletion with both neighbors occupied created gap `idx`.
    Created { idx: usize },
    /// Interior deletion extended an existing gap (same index).
    Extended { idx: usize },
    /// Interior deletion merged gaps `idx` and `idx + 1` into `idx`.
    Merged { idx: usize },
    /// Endpoint deletion; if the endpoint bordered a gap, that gap (index 0
    /// on the low side, the last index on the high side) was dropped.
    EndpointLow { dropped: bool },
    EndpointHigh { dropped: bool },
}

impl SiteSet1D {
    pub fn singleton(x: i64) -> Self {
        SiteSet1D { min: x, max: x, gaps: Vec::new() }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        SiteSet1D { min: lo, max: hi, gaps: Vec::new() }
    }

    pub fn from_sites(sites: &[i64]) -> Result<Self, Lattice1dError> {
        if sites.is_empty() {
            return Err(Lattice1dError::EmptySet);
        }
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut gaps = Vec::new();
        for w in sorted.windows(2) {
            if w[1] > w[0] + 1 {
                gaps.push(Gap { lo: w[0] + 1, hi: w[1] - 1 });
            }
        }
        Ok(SiteSet1D { min: sorted[0], max: *sorted.last().unwrap(), gaps })
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    /// Number of occupied sites.
    pub fn len(&self) -> u64 {
        (self.max - self.min + 1 - self.total_gap_sites()) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    /// G(a), the number of gaps.
    pub fn gap_count(&self) -> usize {
        self.gaps.len()
    }

    /// L(a), the total number of gap sites.
    pub fn total_gap_sites(&self) -> i64 {
        self.gaps.iter().map(Gap::len).sum()
    }

    /// Number of gaps of size at least 2.
    pub fn g2_count(&self) -> usize {
        self.gaps.iter().filter(|g| g.len() >= 2).count()
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.min && x <= self.max && !self.in_gap(x)
    }

    pub fn in_gap(&self, x: i64) -> bool {
        self.gap_index_of(x).is_some()
    }

    /// Index of the gap containing `x`, if any.
    pub fn gap_index_of(&self, x: i64) -> Option<usize> {
        let idx = self.gaps.partition_point(|g| g.hi < x);
        (idx < self.gaps.len() && self.gaps[idx].contains(x)).then_some(idx)
    }

    /// Size of the inner-plus-outer boundary: `{min-1, max+1}` plus the one
    /// or two end sites of every gap.
    pub fn boundary_size(&self) -> usize {
        2 + self.gaps.iter().map(|g| if g.len() == 1 { 1 } else { 2 }).sum::<usize>()
    }

    /// All occupied sites in increasing order. Linear in the extent; meant
    /// for tests and small sets.
    pub fn iter_sites(&self) -> impl Iterator<Item = i64> + '_ {
        (self.min..=self.max).filter(move |&x| !self.in_gap(x))
    }

    /// The `r`-th occupied site (0-based, increasing).
    pub fn nth_site(&self, r: u64) -> i64 {
        let mut remaining = r as i64;
        let mut cursor = self.min;
        for g in &self.gaps {
            let run = g.lo - cursor; // occupied run [cursor, g.lo - 1]
            if remaining < run {
                return cursor + remaining;
            }
            remaining -= run;
            cursor = g.hi + 1;
        }
        cursor + remaining
    }

    /// All gap sites in increasing order.
    pub fn gap_sites(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.total_gap_sites() as usize);
        for g in &self.gaps {
            v.extend(g.lo..=g.hi);
        }
        v
    }

    /// Gap sites of the gaps selected by `pick`.
    pub fn gap_sites_where(&self, mut pick: impl FnMut(usize) -> bool) -> Vec<i64> {
        let mut v = Vec::new();
        for (i, g) in self.gaps.iter().enumerate() {
            if pick(i) {
                v.extend(g.lo..=g.hi);
            }
        }
        v
    }

    /// Add an occupied site; `x` must be a boundary site.
    pub fn add_site(&mut self, x: i64) -> GapEffect {
        if x == self.min - 1 {
            self.min = x;
            return GapEffect::OuterGrowth;
        }
        if x == self.max + 1 {
            self.max = x;
            return GapEffect::OuterGrowth;
        }
        let idx = self
            .gap_index_of(x)
            .expect("added site must be on the boundary");
        let g = &mut self.gaps[idx];
        debug_assert!(x == g.lo || x == g.hi, "added site must be a gap end");
        if g.len() == 1 {
            self.gaps.remove(idx);
            GapEffect::Filled { idx }
        } else {
            if x == g.lo {
                g.lo += 1;
            } else {
                g.hi -= 1;
            }
            GapEffect::Shrunk { idx }
        }
    }

    /// Remove an occupied site; the set must have at least two sites.
    pub fn remove_site(&mut self, x: i64) -> Result<GapEffect, Lattice1dError> {
        if self.len() < 2 {
            return Err(Lattice1dError::SingletonDeletion);
        }
        debug_assert!(self.contains(x), "removed site must be occupied");
        if x == self.min {
            let dropped = self.gaps.first().is_some_and(|g| g.lo == x + 1);
            if dropped {
                let g = self.gaps.remove(0);
                self.min = g.hi + 1;
            } else {
                self.min = x + 1;
            }
            return Ok(GapEffect::EndpointLow { dropped });
        }
        if x == self.max {
            let dropped = self.gaps.last().is_some_and(|g| g.hi == x - 1);
            if dropped {
                let g = self.gaps.pop().unwrap();
                self.max = g.lo - 1;
            } else {
                self.max = x - 1;
            }
            return Ok(GapEffect::EndpointHigh { dropped });
        }
        // Interior site: look for gaps touching x on either side.
        let right = self.gaps.partition_point(|g| g.hi < x);
        let touches_right = right < self.gaps.len() && self.gaps[right].lo == x + 1;
        let touches_left = right > 0 && self.gaps[right - 1].hi == x - 1;
        Ok(match (touches_left, touches_right) {
            (true, true) => {
                let hi = self.gaps[right].hi;
                self.gaps[right - 1].hi = hi;
                self.gaps.remove(right);
                GapEffect::Merged { idx: right - 1 }
            }
            (true, false) => {
                self.gaps[right - 1].hi = x;
                GapEffect::Extended { idx: right - 1 }
            }
            (false, true) => {
                self.gaps[right].lo = x;
                GapEffect::Extended { idx: right }
            }
            (false, false) => {
                self.gaps.insert(right, Gap { lo: x, hi: x });
                GapEffect::Created { idx: right }
            }
        })
    }

    /// Recompute the gap registry from an explicit site enumeration. Used as
    /// the oracle against the incrementally maintained registry.
    pub fn recomputed(&self) -> SiteSet1D {
        let sites: Vec<i64> = self.iter_sites().collect();
        SiteSet1D::from_sites(&sites).expect("set is nonempty")
    }
}

/// G(a), number of gaps of size >= 2, and L(a) in one call.
pub fn gap_statistics(a: &SiteSet1D) -> (usize, usize, i64) {
    (a.gap_count(), a.g2_count(), a.total_gap_sites())
}
