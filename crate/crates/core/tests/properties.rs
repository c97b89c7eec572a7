//! Property tests for the structural invariants of both models.

use latticegrow_core::coupling::{
    derive_stream, excursion_decomposition, k_decrease_decomposition, RevealedDraws,
    SegmentKind, SelectionPolicy, Source,
};
use latticegrow_core::dla2d::{
    cluster_from_paths, hole_count, hole_count_union_find, run_dla, Cluster2D, DlaRunConfig,
    EntryMethod, Point, WalkMode,
};
use latticegrow_core::lattice1d::{
    index_from_uniform, run_model, Backend, GapLabeling, LabeledChain, ModelConfig, SiteSet1D,
};
use latticegrow_core::rng::UniformStream;
use latticegrow_core::stats::chi_square_sf;
use proptest::prelude::*;

proptest! {
    #[test]
    fn uniform_index_map_matches_interval_rule(u in 1e-12f64..1.0, m in 1usize..500) {
        // j is the unique index with (j-1)/m < u <= j/m
        let j = index_from_uniform(u, m) + 1;
        let lower = (j as f64 - 1.0) / m as f64;
        prop_assert!(lower < u);
        prop_assert!(u <= j as f64 / m as f64 + 1e-12);
    }

    #[test]
    fn site_set_identity_and_rank(sites in proptest::collection::btree_set(-200i64..200, 1..60)) {
        let v: Vec<i64> = sites.iter().copied().collect();
        let a = SiteSet1D::from_sites(&v).unwrap();
        // L(a) = (max - min + 1) - |a|
        prop_assert_eq!(a.total_gap_sites(), a.max() - a.min() + 1 - a.len() as i64);
        // rank selection agrees with enumeration
        for (r, x) in a.iter_sites().enumerate() {
            prop_assert_eq!(a.nth_site(r as u64), x);
        }
        // proximity counts are monotone: |C2| <= |C| <= L
        let gaps = a.gap_sites();
        let c = latticegrow_core::lattice1d::proximity_sets(&a, None);
        prop_assert!(c.1.len() <= c.0.len());
        prop_assert!(c.0.len() <= gaps.len());
    }

    #[test]
    fn chain_runs_preserve_counting_invariants(seed in 0u64..500, k in 2u32..5) {
        let cfg = ModelConfig { k, log_steps: true, ..ModelConfig::origin(k, 60, seed) };
        let trace = run_model(&cfg).unwrap();
        for (n, row) in trace.rows.iter().enumerate() {
            prop_assert_eq!(row.size, 1 + n as u64);
            prop_assert!(row.ci2 <= row.ci);
            prop_assert!(row.g2i <= row.gi);
            prop_assert!(row.li <= row.l);
            prop_assert!(row.r_alpha <= k);
            prop_assert!(row.r_delta < k);
        }
        for w in trace.rows.windows(2) {
            prop_assert!(w[1].l - w[0].l <= w[1].r_delta as i64 - w[1].r_alpha as i64);
        }
    }

    #[test]
    fn registry_matches_recomputation_under_random_ops(seed in 0u64..300) {
        let sites = SiteSet1D::from_sites(&[0, 2, 3, 7, 10]).unwrap();
        let mut chain = LabeledChain::new(sites, &GapLabeling::from_indices([0, 2])).unwrap();
        let mut stream = UniformStream::new(seed, 0);
        for n in 1..40 {
            chain.run_period(n, &mut stream, 2, Backend::Faithful, None).unwrap();
        }
        prop_assert_eq!(chain.sites().recomputed(), chain.sites().clone());
    }

    #[test]
    fn excursions_partition_and_respect_threshold(series in proptest::collection::vec(-5i64..15, 1..120), c in 0i64..10) {
        let seg = excursion_decomposition(&series, c, Some(series.len()));
        let mut prev_end = 0usize;
        for s in &seg.segments {
            prop_assert!(s.start >= prev_end);
            prop_assert!(s.len >= 1);
            prop_assert!(s.start + s.len <= series.len());
            for &val in &series[s.start..s.start + s.len] {
                prop_assert!(val >= c, "value below threshold inside excursion");
            }
            if s.kind == SegmentKind::Complete {
                prop_assert!(series[s.start + s.len] < c);
            }
            prev_end = s.start + s.len;
        }
    }

    #[test]
    fn k_decreases_drop_exactly_at_their_ends(walk in proptest::collection::vec(-3i64..4, 2..100), k in 1i64..4) {
        let mut series = vec![0i64];
        for d in &walk {
            series.push(series.last().unwrap() + d);
        }
        let seg = k_decrease_decomposition(&series, k);
        for s in &seg.segments {
            if s.kind == SegmentKind::Complete {
                let start_val = series[s.start];
                let end_val = series[s.start + s.len];
                prop_assert!(end_val - start_val <= -k);
                for &val in &series[(s.start + 1)..(s.start + s.len)] {
                    prop_assert!(val - start_val > -k, "drop reached before the end");
                }
            }
        }
    }
}

#[test]
fn fast_and_faithful_backends_share_the_single_step_marginal() {
    // chi-square comparison of the added-site distribution over 1e5 single
    // steps from a fixed labeled state, at alpha = 0.001
    let sites = SiteSet1D::from_sites(&[0, 2, 3, 7, 8, 9, 14]).unwrap();
    let base = LabeledChain::new(sites, &GapLabeling::from_indices([0, 2])).unwrap();
    let trials = 100_000u64;
    let mut counts: std::collections::HashMap<i64, [u64; 2]> = std::collections::HashMap::new();
    let mut stream = UniformStream::new(31, 0);
    for t in 0..trials {
        for (slot, backend) in [(0usize, Backend::Fast), (1, Backend::Faithful)] {
            let mut chain = base.clone();
            let u = if slot == 0 { stream.next_f64() } else { stream.value_at(t) };
            let site = chain.add_site(u, backend);
            counts.entry(site).or_default()[slot] += 1;
        }
    }
    let classes = counts.len();
    let mut chi = 0.0;
    for [a, b] in counts.values() {
        let total = (a + b) as f64;
        let ea = total / 2.0;
        chi += (*a as f64 - ea).powi(2) / ea + (*b as f64 - ea).powi(2) / ea;
    }
    let p = chi_square_sf(chi, (classes - 1) as f64);
    assert!(p > 0.001, "backend marginals differ: chi={chi:.2}, p={p:.5}");
}

#[test]
fn peeking_policies_are_always_rejected() {
    struct PeekAt(usize);
    impl SelectionPolicy for PeekAt {
        fn choose(&mut self, revealed: &RevealedDraws) -> (Source, usize) {
            let ahead = revealed.peek(Source::B, revealed.b().len() + self.0);
            match ahead {
                Some(u) if u > 0.5 => (Source::A, 1),
                _ => (Source::B, 1),
            }
        }
    }
    for offset in 0..10 {
        let mut a = UniformStream::new(5, 1);
        let mut b = UniformStream::new(5, 2);
        let r = derive_stream(&mut a, &mut b, &mut PeekAt(offset), 50);
        assert!(r.is_err(), "peek at +{offset} must be rejected");
    }
}

#[test]
fn flood_fill_and_union_find_agree_on_random_blobs() {
    let mut stream = UniformStream::new(404, 0);
    for trial in 0..1000 {
        // random blob: biased random walk scribble, sometimes disconnected
        let mut pts: Vec<Point> = vec![(0, 0)];
        let mut p = (0i32, 0i32);
        let n = 5 + (stream.next_f64() * 60.0) as usize;
        for _ in 0..n {
            let d = (stream.next_u64() % 5) as i32;
            p = match d {
                0 => (p.0 + 1, p.1),
                1 => (p.0 - 1, p.1),
                2 => (p.0, p.1 + 1),
                3 => (p.0, p.1 - 1),
                _ => ((stream.next_u64() % 9) as i32 - 4, (stream.next_u64() % 9) as i32 - 4),
            };
            pts.push(p);
        }
        let cluster = Cluster2D::from_points_any(&pts).unwrap();
        let ff = hole_count(&cluster).count;
        let uf = hole_count_union_find(&cluster);
        assert_eq!(ff, uf, "hole counters disagree on trial {trial}");
    }
}

#[test]
fn holes_never_disappear_under_growth() {
    let run = run_dla(&DlaRunConfig { snapshot_every: 50, ..DlaRunConfig::quick(800, 9) })
        .unwrap();
    let mut last = 0;
    for snap in &run.snapshots {
        assert!(snap.holes >= last, "hole count dropped at n={}", snap.n);
        last = snap.holes;
    }
}

#[test]
fn far_circle_orbit_symmetry() {
    // entries on Delta({0}, 3) from the far circle: the 8-fold symmetry
    // orbits of the diamond must be hit uniformly (chi-square, alpha 0.001)
    let a = Cluster2D::origin();
    let mut stream = UniformStream::new(606, 0);
    let mut counts: std::collections::HashMap<Point, u64> = std::collections::HashMap::new();
    let samples = 100_000;
    for _ in 0..samples {
        let p = latticegrow_core::dla2d::sample_entry_point(
            &a,
            3,
            &mut stream,
            EntryMethod::FarCircle { rfactor: 8 },
        )
        .unwrap();
        *counts.entry(p).or_default() += 1;
    }
    // orbit representative: sort |x|, |y|
    let mut orbit: std::collections::HashMap<(i32, i32), Vec<u64>> =
        std::collections::HashMap::new();
    for (p, c) in counts {
        let key = (p.0.abs().min(p.1.abs()), p.0.abs().max(p.1.abs()));
        orbit.entry(key).or_default().push(c);
    }
    for (key, members) in orbit {
        let total: u64 = members.iter().sum();
        let expect = total as f64 / members.len() as f64;
        let chi: f64 = members.iter().map(|&m| (m as f64 - expect).powi(2) / expect).sum();
        let p = chi_square_sf(chi, members.len() as f64 - 1.0);
        assert!(p > 0.001, "orbit {key:?} asymmetric: chi={chi:.2} p={p:.6}");
    }
}

#[test]
fn replayed_walks_rebuild_the_cluster() {
    // faithful-mode growth, then the deterministic fold over the recorded
    // prefixes reproduces the run exactly
    let run = (0..64u64)
        .find_map(|seed| {
            run_dla(&DlaRunConfig {
                mode: WalkMode::Faithful,
                keep_paths: true,
                entry: EntryMethod::Uniform,
                step_cap: 8_000_000,
                ..DlaRunConfig::quick(15, seed)
            })
            .ok()
        })
        .expect("some seed completes");
    let rebuilt =
        cluster_from_paths(&Cluster2D::origin(), run.paths.as_ref().unwrap()).unwrap();
    assert_eq!(rebuilt, run.cluster);
}
