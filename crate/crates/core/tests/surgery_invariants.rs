//! Geometric invariants of the surgery construction that go beyond the
//! per-sample bound checklist: the foreign-patch separation of early
//! attachments, and the prefix-only dependence of the lucky-patch decision.

use latticegrow_core::dla2d::{run_dla, Cluster2D, DlaRunConfig};
use latticegrow_core::harness::seed_sequence;
use latticegrow_core::surgery::{
    build_patch_decomposition, constrained_distance, lucky_patch, sample_walk_record,
    PatchDecomposition,
};
use latticegrow_core::rng::UniformStream;

fn feasible_cluster(tag: u64) -> (Cluster2D, PatchDecomposition) {
    for attempt in 0..64u64 {
        let cfg = DlaRunConfig::quick(600, seed_sequence(0xdeed, tag + attempt));
        let Ok(run) = run_dla(&cfg) else { continue };
        if let Ok(d) = build_patch_decomposition(&run.cluster) {
            return (run.cluster, d);
        }
    }
    panic!("no feasible cluster found");
}

fn sample_records(
    a: &Cluster2D,
    d: &PatchDecomposition,
    count: usize,
    seed: u64,
) -> Vec<Vec<latticegrow_core::dla2d::Point>> {
    let gbox = d.contour.bbox();
    let l_offset = (6 * a.size() + 1) as i64;
    (0..count)
        .map(|k| {
            let mut stream = UniformStream::new(seed, 50_000 + k as u64);
            sample_walk_record(a, gbox, l_offset, &mut stream, 200_000_000).expect("walk ends")
        })
        .collect()
}

#[test]
fn early_attachments_keep_distance_from_foreign_middle_geodesics() {
    let (a, d) = feasible_cluster(0);
    let records = sample_records(&a, &d, 400, 0x5eed);
    let lucky = lucky_patch(&a, &d, &records).expect("a lucky patch within 400 walks");
    let v7 = lucky.v[6];

    // rebuild the unmodified evolution up to just before the deciding path
    let mut cluster = a.clone();
    let mut added = Vec::new();
    for rec in records.iter().take(v7 - 1) {
        let attach = rec.iter().copied().find(|&p| cluster.is_boundary(p)).unwrap();
        cluster.add_boundary_point(attach);
        added.push(attach);
    }

    // every added point sitting in some patch B must be at interior-avoiding
    // distance >= 14 from the middle geodesic of every other patch
    for &z in &added {
        let owners = d.patches_at(z);
        if owners.is_empty() {
            continue;
        }
        for (pi, patch) in d.patches.iter().enumerate() {
            if owners.contains(&(pi as u8)) {
                continue;
            }
            let dist = constrained_distance(&a, &[z], patch.gamma_star.points(), 13);
            assert!(
                dist.is_none(),
                "point {z:?} within {dist:?} of a foreign middle geodesic"
            );
        }
    }
}

#[test]
fn lucky_decision_depends_only_on_prefixes() {
    let (a, d) = feasible_cluster(100);
    let records = sample_records(&a, &d, 400, 0xfeed);
    let lucky = lucky_patch(&a, &d, &records).expect("lucky patch");

    // extending every record past its cluster entry must change nothing
    let extended: Vec<_> = records
        .iter()
        .map(|r| {
            let mut e = r.clone();
            e.extend(r.iter().rev().skip(1));
            e
        })
        .collect();
    let again = lucky_patch(&a, &d, &extended).expect("lucky patch");
    assert_eq!(lucky.theta, again.theta);
    assert_eq!(lucky.v, again.v);
    assert_eq!(lucky.counts, again.counts);
}
