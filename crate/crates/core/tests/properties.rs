//! Law-style checks: exhaustive at small degrees, randomized beyond.

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use slimcount::cache::{self, CacheFormat};
use slimcount::count::{max_inversions, CountEngine, CountTable, TableKind};
use slimcount::lattice::{
    build_lattice, build_quotient, quotient_lattice, quotient_size_formula, source_cells,
};
use slimcount::oracle::{contains_321_reference, enumerate_permutations};
use slimcount::perm::{PartialPermutation, Permutation};
use slimcount::Nat;

fn all_perms(h: usize) -> Vec<Permutation> {
    enumerate_permutations(h).unwrap().collect()
}

#[test]
fn inversions_are_inverse_invariant_exhaustive() {
    for h in 0..=8 {
        for p in all_perms(h) {
            assert_eq!(p.inversions(), p.inverse().inversions(), "at {p}");
        }
    }
}

#[test]
fn segments_are_minimal_closed_intervals() {
    for h in 1..=7 {
        for p in all_perms(h) {
            let segs = p.segments().unwrap();
            let mut expected_start = 1;
            for &(u, v) in segs.intervals() {
                assert_eq!(u, expected_start, "segments of {p} must tile in order");
                expected_start = v + 1;
                let closed = |a: usize, b: usize| (a..=b).all(|s| (a..=b).contains(&p.apply(s)));
                assert!(closed(u, v), "segment ({u},{v}) of {p} not closed");
                for w in u..v {
                    assert!(!closed(u, w), "({u},{w}) splits a segment of {p}");
                }
            }
            assert_eq!(expected_start, h + 1, "segments of {p} must cover the domain");
        }
    }
}

#[test]
fn head_and_body_recompose() {
    for h in 1..=7 {
        for p in all_perms(h) {
            let (head, body) = p.head_body().unwrap();
            let cut = head.degree();
            let mut image = head.image().to_vec();
            image.extend(body.image().iter().map(|v| v + cut));
            assert_eq!(image, p.image(), "head/body of {p}");
            assert!(head.is_irreducible().unwrap());
        }
    }
}

#[test]
fn block_canonical_is_inverse_invariant_exhaustive() {
    for h in 0..=6 {
        for p in all_perms(h) {
            assert_eq!(p.block_canonical(), p.inverse().block_canonical(), "at {p}");
        }
    }
}

/// Every member a block claims must be reachable by inverting a subset of
/// segments, and nothing else may canonicalize to the same form.
#[test]
fn block_equality_matches_segmentwise_inversion_closure() {
    for h in 1..=6 {
        let perms = all_perms(h);
        let mut classes: HashMap<_, HashSet<Vec<usize>>> = HashMap::new();
        for p in &perms {
            classes
                .entry(p.block_canonical())
                .or_default()
                .insert(p.image().to_vec());
        }
        for p in &perms {
            let segs = p.segments().unwrap();
            let mut members: HashSet<Vec<usize>> = HashSet::new();
            members.insert(p.image().to_vec());
            for &(u, v) in segs.intervals() {
                // Replace the restriction to (u, v) by its inverse in every
                // member collected so far.
                let grown: Vec<Vec<usize>> = members
                    .iter()
                    .map(|image| {
                        let mut copy = image.clone();
                        for s in u..=v {
                            let local = image[s - 1] - (u - 1);
                            copy[u - 1 + local - 1] = s;
                        }
                        copy
                    })
                    .collect();
                members.extend(grown);
            }
            assert_eq!(
                &members,
                classes.get(&p.block_canonical()).unwrap(),
                "closure of {p} disagrees with its block"
            );
        }
    }
}

#[test]
fn pattern_scan_matches_reference() {
    for h in 0..=7 {
        for p in all_perms(h) {
            assert_eq!(p.avoids_321(), !contains_321_reference(&p), "at {p}");
        }
    }
}

#[test]
fn table_invariants_hold_at_degree_twelve() {
    let mut engine = CountEngine::<Nat>::new();
    engine
        .ensure(TableKind::Blocks, 12, max_inversions(12))
        .unwrap();
    engine.validate().unwrap();
}

#[test]
fn stepwise_growth_equals_fresh_build() {
    let mut grown = CountEngine::<Nat>::new();
    for bound in [3usize, 7, 11] {
        grown
            .ensure(TableKind::Blocks, bound, max_inversions(bound))
            .unwrap();
    }
    let mut fresh = CountEngine::<Nat>::new();
    fresh
        .ensure(TableKind::Blocks, 11, max_inversions(11))
        .unwrap();
    for kind in TableKind::ALL {
        let a = grown.table(kind).unwrap();
        let b = fresh.table(kind).unwrap();
        for h in 0..=11 {
            for k in 0..=max_inversions(h) {
                assert_eq!(a.get(h, k).unwrap(), b.get(h, k).unwrap(), "{kind} at ({h},{k})");
            }
        }
    }
}

fn permutation_strategy(max_h: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_h)
        .prop_flat_map(|h| Just((1..=h).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|image| Permutation::from_image(image).expect("shuffled range is a bijection"))
}

fn partial_permutation_strategy(
    max_side: usize,
) -> impl Strategy<Value = (usize, usize, PartialPermutation)> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(m, n)| {
            let rows = proptest::sample::subsequence((1..=m).collect::<Vec<_>>(), 0..=m.min(n));
            let cols = Just((1..=n).collect::<Vec<usize>>()).prop_shuffle();
            (Just(m), Just(n), rows, cols)
        })
        .prop_map(|(m, n, rows, cols)| {
            let pairs: Vec<(usize, usize)> = rows.iter().copied().zip(cols).collect();
            let tau = PartialPermutation::new(m, n, pairs).expect("rows sorted, columns distinct");
            (m, n, tau)
        })
}

proptest! {
    #[test]
    fn inversions_are_inverse_invariant_random(p in permutation_strategy(24)) {
        prop_assert_eq!(p.inversions(), p.inverse().inversions());
    }

    #[test]
    fn block_members_share_statistics(p in permutation_strategy(16)) {
        let canonical = p.block_canonical().canonical().clone();
        prop_assert_eq!(canonical.degree(), p.degree());
        prop_assert_eq!(canonical.inversions(), p.inversions());
        prop_assert_eq!(canonical.block_canonical(), p.block_canonical());
    }

    #[test]
    fn quotient_formula_matches_union_find((m, n, tau) in partial_permutation_strategy(8)) {
        let q = build_quotient(m, n, &tau).unwrap();
        prop_assert_eq!(q.block_count(), quotient_size_formula(m, n, &tau).unwrap());
        prop_assert_eq!(source_cells(&q), tau);
    }

    #[test]
    fn quotient_covers_are_cover_preserving((m, n, tau) in partial_permutation_strategy(6)) {
        let q = build_quotient(m, n, &tau).unwrap();
        let lattice = quotient_lattice(&q);
        let cover_set: HashSet<(usize, usize)> = lattice.covers().iter().copied().collect();
        for x in q.blocks().iter().flatten() {
            for y in [(x.row + 1, x.col), (x.row, x.col + 1)] {
                if y.0 > m || y.1 > n {
                    continue;
                }
                let bx = q.block_id(*x);
                let by = q.block_id(slimcount::GridElement { row: y.0, col: y.1 });
                prop_assert!(
                    bx == by || cover_set.contains(&(bx, by)),
                    "grid cover ({},{}) -> ({},{}) lost",
                    x.row, x.col, y.0, y.1
                );
            }
        }
    }

    #[test]
    fn random_lattices_obey_the_size_formula(p in permutation_strategy(8)) {
        let lattice = build_lattice(&p);
        prop_assert_eq!(lattice.size(), p.degree() + 1 + p.inversions());
        prop_assert!(lattice.is_semimodular());
        prop_assert!(lattice.is_slim());
        prop_assert_eq!(lattice.is_distributive(), p.avoids_321());
    }

    #[test]
    fn cache_round_trips_any_table(
        max_h in 0usize..=9,
        kind in proptest::sample::select(TableKind::ALL.to_vec()),
        binary in proptest::bool::ANY,
    ) {
        let mut engine = CountEngine::<Nat>::new();
        engine.ensure(kind, max_h, max_inversions(max_h)).unwrap();
        let table: &CountTable<Nat> = engine.table(kind).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let format = if binary { CacheFormat::Binary } else { CacheFormat::Json };
        let path = cache::store(dir.path(), table, format).unwrap();
        let reread = cache::read_table(&path).unwrap();
        prop_assert_eq!(reread.kind(), table.kind());
        prop_assert_eq!(reread.max_h(), table.max_h());
        for h in 0..=max_h {
            for k in 0..=max_inversions(h) {
                prop_assert_eq!(reread.get(h, k).unwrap(), table.get(h, k).unwrap());
            }
        }
        let covering = cache::load_covering(dir.path(), kind, max_h, max_inversions(max_h));
        prop_assert!(covering.is_some());
    }
}
