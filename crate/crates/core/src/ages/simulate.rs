use crate::lattice1d::{Backend, LabeledChain, Lattice1dError, SiteSet1D};
use crate::rng::UniformStream;
use std::collections::{BTreeMap, HashMap};

/// Per-site ages: for each occupied site, the number of completed deletions
/// at its placement time. The age of the particle at `x` is
/// `deletions_so_far - birth[x]`, and the oldest age is tracked through a
/// birth-count multiset.
#[derive(Debug, Clone, Default)]
pub struct AgeTable {
    births: HashMap<i64, u64>,
    by_birth: BTreeMap<u64, u32>,
    deletions: u64,
}

impl AgeTable {
    pub fn with_initial_sites(sites: impl IntoIterator<Item = i64>) -> Self {
        let mut t = AgeTable::default();
        for x in sites {
            t.place(x);
        }
        t
    }

    pub fn place(&mut self, site: i64) {
        let old = self.births.insert(site, self.deletions);
        debug_assert!(old.is_none(), "site occupied twice");
        *self.by_birth.entry(self.deletions).or_insert(0) += 1;
    }

    pub fn remove(&mut self, site: i64) {
        let birth = self.births.remove(&site).expect("removing an unoccupied site");
        match self.by_birth.get_mut(&birth) {
            Some(c) if *c > 1 => *c -= 1,
            _ => {
                self.by_birth.remove(&birth);
            }
        }
        self.deletions += 1;
    }

    pub fn deletions(&self) -> u64 {
        self.deletions
    }

    /// Age of the particle currently at `site`.
    pub fn age_of(&self, site: i64) -> Option<u64> {
        self.births.get(&site).map(|b| self.deletions - b)
    }

    /// The age of the oldest particle.
    pub fn oldest(&self) -> u64 {
        let (&min_birth, _) = self.by_birth.iter().next().expect("table is nonempty");
        self.deletions - min_birth
    }
}

/// Run the `K = 2` chain from `{0}` for `n` periods and return the oldest
/// ages `O_1, ..., O_n`.
pub fn run_with_ages(n: u64, seed: u64, stream_id: u64) -> Result<Vec<u64>, Lattice1dError> {
    let mut chain = LabeledChain::all_old(SiteSet1D::singleton(0));
    let mut ages = AgeTable::with_initial_sites([0]);
    let mut stream = UniformStream::new(seed, stream_id);
    let mut oldest = Vec::with_capacity(n as usize);
    for _ in 1..=n {
        for _ in 0..2 {
            let site = chain.add_site(stream.next_f64(), Backend::Fast);
            ages.place(site);
        }
        let site = chain.delete_site(stream.next_f64(), Backend::Fast)?;
        ages.remove(site);
        oldest.push(ages.oldest());
    }
    Ok(oldest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_two_ages_are_deterministic() {
        for seed in 0..50 {
            let o = run_with_ages(2, seed, 0).unwrap();
            assert_eq!(o[0], 1, "O_1 = 1: both survivors of period 1 saw one deletion");
            assert_eq!(o[1], 2, "O_2 = 2: at most one of A_1 is deleted in period 2");
        }
    }

    #[test]
    fn third_age_takes_both_values() {
        let mut seen = [false, false];
        for seed in 0..200 {
            let o = run_with_ages(3, seed, 1).unwrap();
            match o[2] {
                2 => seen[0] = true,
                3 => seen[1] = true,
                other => panic!("O_3 = {other} outside {{2,3}}"),
            }
        }
        assert!(seen[0] && seen[1], "both values of O_3 should occur");
    }

    #[test]
    fn oldest_age_lower_bound() {
        // O_m >= (m+1)/2 since A_m has m+1 particles and 2 arrive per period
        for seed in [7u64, 8, 9] {
            let o = run_with_ages(200, seed, 2).unwrap();
            for (idx, &om) in o.iter().enumerate() {
                let m = idx as u64 + 1;
                assert!(2 * om > m, "O_{m} = {om} below (m+1)/2");
            }
        }
    }

    #[test]
    fn ages_reset_on_replacement() {
        let mut t = AgeTable::with_initial_sites([0, 1]);
        t.remove(0);
        assert_eq!(t.age_of(1), Some(1));
        t.place(0);
        assert_eq!(t.age_of(0), Some(0));
        assert_eq!(t.oldest(), 1);
    }
}
