//! Brute-force ground truth for the counting tables and lattice claims.
//!
//! Everything here recomputes, by exhaustive enumeration, quantities the
//! rest of the crate obtains through recurrences or structural reasoning.
//! The implementations are deliberately naive and independent: censuses put
//! actual permutations into actual sets, the 321 reference check scans all
//! triples, and lattice isomorphism is a backtracking search. Resource
//! guards keep the enumerations at desk scale.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::lattice::FiniteLattice;
use crate::perm::{BlockForm, Permutation};

/// Largest degree [`enumerate_permutations`] and the censuses accept.
pub const DEFAULT_DEGREE_LIMIT: usize = 9;
/// Largest lattice size the brute-force counts accept.
pub const DEFAULT_SIZE_LIMIT: usize = 12;
/// Largest lattice the isomorphism search accepts.
pub const DEFAULT_ISO_LIMIT: usize = 14;
/// Most permutations [`brute_block_count`] is willing to generate.
pub const DEFAULT_GENERATION_LIMIT: u128 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degree {h} exceeds the enumeration limit {limit}")]
    DegreeLimit { h: usize, limit: usize },
    #[error("size {n} exceeds the brute-force limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("lattice size {size} exceeds the isomorphism limit {limit}")]
    IsoLimit { size: usize, limit: usize },
    #[error("generating {count} permutations exceeds the budget {limit}")]
    GenerationLimit { count: u128, limit: u128 },
    #[error("size must be at least 1")]
    InvalidSize,
}

/// Iterator over all permutations of degree `h` in lexicographic order of
/// image sequences, from the identity to the reversal.
#[derive(Debug)]
pub struct LexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation::from_image(current).expect("enumeration yields bijections"))
    }
}

/// Advances `image` to its lexicographic successor; false at the last one.
fn next_lex(image: &mut [usize]) -> bool {
    let h = image.len();
    if h < 2 {
        return false;
    }
    let Some(i) = (0..h - 1).rev().find(|&i| image[i] < image[i + 1]) else {
        return false;
    };
    let j = (i + 1..h).rev().find(|&j| image[j] > image[i]).expect("successor exists");
    image.swap(i, j);
    image[i + 1..].reverse();
    true
}

pub fn enumerate_permutations(h: usize) -> Result<LexPermutations, OracleError> {
    if h > DEFAULT_DEGREE_LIMIT {
        return Err(OracleError::DegreeLimit {
            h,
            limit: DEFAULT_DEGREE_LIMIT,
        });
    }
    Ok(LexPermutations {
        next: Some((1..=h).collect()),
    })
}

/// Counts at one inversion number for one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusRow {
    pub p: u64,
    pub i: u64,
    pub t: u64,
    pub it: u64,
    pub b: u64,
}

/// Exhaustive census of one symmetric group, bucketed by inversion number.
#[derive(Clone, Debug)]
pub struct BruteCensus {
    pub h: usize,
    /// Indexed by inversion number `0..=h(h-1)/2`.
    pub per_k: Vec<CensusRow>,
    /// Every block of the degree, mapped to its number of members.
    pub block_reps: BTreeMap<BlockForm, u64>,
}

pub fn brute_census(h: usize) -> Result<BruteCensus, OracleError> {
    let top = h * h.saturating_sub(1) / 2;
    let mut per_k = vec![CensusRow::default(); top + 1];
    let mut blocks_per_k: Vec<HashSet<BlockForm>> = vec![HashSet::new(); top + 1];
    let mut block_reps: BTreeMap<BlockForm, u64> = BTreeMap::new();
    for p in enumerate_permutations(h)? {
        let k = p.inversions();
        let row = &mut per_k[k];
        row.p += 1;
        let irreducible = p.is_irreducible().unwrap_or(false);
        let involution = p.is_involution();
        if irreducible {
            row.i += 1;
            if involution {
                row.it += 1;
            }
        }
        if involution {
            row.t += 1;
        }
        let block = p.block_canonical();
        blocks_per_k[k].insert(block.clone());
        *block_reps.entry(block).or_insert(0) += 1;
    }
    for (k, blocks) in blocks_per_k.into_iter().enumerate() {
        per_k[k].b = blocks.len() as u64;
    }
    Ok(BruteCensus {
        h,
        per_k,
        block_reps,
    })
}

/// Permutations of degree `h` with exactly `k` inversions, generated
/// through inversion tables. Every inversion table with entries
/// `c_s <= h - s` summing to `k` decodes to exactly one permutation.
fn permutations_with_inversions(h: usize, k: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut code = vec![0usize; h];
    fill_codes(h, k, 0, &mut code, &mut out);
    out
}

fn fill_codes(h: usize, remaining: usize, s: usize, code: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if s == h {
        if remaining == 0 {
            let p = decode_inversion_table(code);
            assert_eq!(p.inversions(), code.iter().sum::<usize>());
            out.push(p);
        }
        return;
    }
    // Entries after s can absorb at most sum_{u>s} (h - 1 - u) more.
    let tail_capacity: usize = (s + 1..h).map(|u| h - 1 - u).sum();
    let bound = (h - 1 - s).min(remaining);
    let floor = remaining.saturating_sub(tail_capacity);
    for c in floor..=bound {
        code[s] = c;
        fill_codes(h, remaining - c, s + 1, code, out);
    }
    code[s] = 0;
}

/// Decodes `code` where `code[s]` counts later positions holding smaller
/// values: position `s` gets the `(code[s] + 1)`-th smallest unused value.
fn decode_inversion_table(code: &[usize]) -> Permutation {
    let h = code.len();
    let mut available: Vec<usize> = (1..=h).collect();
    let mut image = Vec::with_capacity(h);
    for &c in code {
        image.push(available.remove(c));
    }
    Permutation::from_image(image).expect("inversion tables decode to bijections")
}

/// How many permutations of degree `h` have exactly `k` inversions,
/// counted without building them. Used to budget generation.
fn mahonian_volume(h: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for j in 1..=h {
        // next[c] = sum of row[c - j + 1 ..= c]; maintain the window.
        let mut next = vec![0u128; k + 1];
        let mut window = 0u128;
        for c in 0..=k {
            window += row[c];
            if c >= j {
                window -= row[c - j];
            }
            next[c] = window;
        }
        row = next;
    }
    row[k]
}

/// Number of blocks among degree-`h` permutations with `k` inversions, by
/// generating every such permutation and canonicalizing. Independent of the
/// recurrence tables, so checks them in places full enumeration cannot reach.
pub fn brute_block_count(h: usize, k: usize) -> Result<u64, OracleError> {
    if k > h * h.saturating_sub(1) / 2 {
        return Ok(0);
    }
    let volume = mahonian_volume(h, k);
    if volume > DEFAULT_GENERATION_LIMIT {
        return Err(OracleError::GenerationLimit {
            count: volume,
            limit: DEFAULT_GENERATION_LIMIT,
        });
    }
    let generated = permutations_with_inversions(h, k);
    assert_eq!(generated.len() as u128, volume, "generator disagrees with the count");
    let blocks: HashSet<BlockForm> = generated.iter().map(|p| p.block_canonical()).collect();
    Ok(blocks.len() as u64)
}

/// Number of slim semimodular lattices with `n` elements, by enumerating
/// permutations and collecting distinct blocks at each degree.
pub fn brute_count_ssl(n: usize) -> Result<u64, OracleError> {
    if n == 0 {
        return Err(OracleError::InvalidSize);
    }
    if n > DEFAULT_SIZE_LIMIT {
        return Err(OracleError::SizeLimit {
            n,
            limit: DEFAULT_SIZE_LIMIT,
        });
    }
    let mut total = 0u64;
    for h in 0..n {
        let k = n - 1 - h;
        if k > h * h.saturating_sub(1) / 2 {
            continue;
        }
        let mut blocks: HashSet<BlockForm> = HashSet::new();
        if h <= DEFAULT_DEGREE_LIMIT {
            for p in enumerate_permutations(h)? {
                if p.inversions() == k {
                    blocks.insert(p.block_canonical());
                }
            }
        } else {
            // Beyond the full-enumeration limit the size guard keeps k tiny,
            // so direct generation by inversion count stays cheap.
            for p in permutations_with_inversions(h, k) {
                blocks.insert(p.block_canonical());
            }
        }
        total += blocks.len() as u64;
    }
    Ok(total)
}

/// Number of slim semimodular lattice diagrams with `n` elements, up to
/// similarity: one per permutation, so no block collapsing.
pub fn brute_count_ssd(n: usize) -> Result<u64, OracleError> {
    if n == 0 {
        return Err(OracleError::InvalidSize);
    }
    if n > DEFAULT_SIZE_LIMIT {
        return Err(OracleError::SizeLimit {
            n,
            limit: DEFAULT_SIZE_LIMIT,
        });
    }
    let mut total = 0u64;
    for h in 0..n {
        let k = n - 1 - h;
        if k > h * h.saturating_sub(1) / 2 {
            continue;
        }
        if h <= DEFAULT_DEGREE_LIMIT {
            for p in enumerate_permutations(h)? {
                if p.inversions() == k {
                    total += 1;
                }
            }
        } else {
            total += permutations_with_inversions(h, k).len() as u64;
        }
    }
    Ok(total)
}

/// Reference 321 detection: literally every index triple.
pub fn contains_321_reference(p: &Permutation) -> bool {
    let h = p.degree();
    for a in 1..=h {
        for b in a + 1..=h {
            for c in b + 1..=h {
                if p.apply(a) > p.apply(b) && p.apply(b) > p.apply(c) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn count_321_avoiders(h: usize) -> Result<u64, OracleError> {
    let mut count = 0;
    for p in enumerate_permutations(h)? {
        if !contains_321_reference(&p) {
            count += 1;
        }
    }
    Ok(count)
}

fn degree_profiles(l: &FiniteLattice) -> Vec<(usize, usize, usize, usize)> {
    let n = l.size();
    let mut down = vec![0usize; n];
    let mut up = vec![0usize; n];
    for &(lo, hi) in l.covers() {
        up[lo] += 1;
        down[hi] += 1;
    }
    // Longest chains to and from each element, filled along linear
    // extensions derived from the order itself.
    let mut by_below: Vec<(usize, usize)> = (0..n)
        .map(|x| ((0..n).filter(|&y| l.leq(y, x)).count(), x))
        .collect();
    by_below.sort_unstable();
    let mut height = vec![0usize; n];
    for &(_, x) in &by_below {
        for &(lo, hi) in l.covers() {
            if hi == x {
                height[x] = height[x].max(height[lo] + 1);
            }
        }
    }
    let mut depth = vec![0usize; n];
    for &(_, x) in by_below.iter().rev() {
        for &(lo, hi) in l.covers() {
            if lo == x {
                depth[x] = depth[x].max(depth[hi] + 1);
            }
        }
    }
    (0..n).map(|x| (height[x], depth[x], down[x], up[x])).collect()
}

/// Lattice isomorphism by backtracking on order-preserving bijections,
/// pruned by per-element degree and chain-length profiles.
pub fn lattices_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> Result<bool, OracleError> {
    for l in [a, b] {
        if l.size() > DEFAULT_ISO_LIMIT {
            return Err(OracleError::IsoLimit {
                size: l.size(),
                limit: DEFAULT_ISO_LIMIT,
            });
        }
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    let n = a.size();
    let pa = degree_profiles(a);
    let pb = degree_profiles(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(false);
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| pb[y] == pa[x]).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));

    let mut mapped: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];

    fn extend(
        idx: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        a: &FiniteLattice,
        b: &FiniteLattice,
        mapped: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let x = order[idx];
        'next: for &y in &candidates[x] {
            if used[y] {
                continue;
            }
            for &x2 in &order[..idx] {
                let y2 = mapped[x2].expect("earlier elements are mapped");
                if a.leq(x, x2) != b.leq(y, y2) || a.leq(x2, x) != b.leq(y2, y) {
                    continue 'next;
                }
            }
            mapped[x] = Some(y);
            used[y] = true;
            if extend(idx + 1, order, candidates, a, b, mapped, used) {
                return true;
            }
            mapped[x] = None;
            used[y] = false;
        }
        false
    }

    Ok(extend(0, &order, &candidates, a, b, &mut mapped, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn enumeration_order_and_count() {
        let all: Vec<Permutation> = enumerate_permutations(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], Permutation::identity(3));
        assert_eq!(all[5].image(), &[3, 2, 1]);
        let images: Vec<_> = all.iter().map(|p| p.image().to_vec()).collect();
        let mut sorted = images.clone();
        sorted.sort();
        assert_eq!(images, sorted);

        assert_eq!(enumerate_permutations(0).unwrap().count(), 1);
        assert_eq!(enumerate_permutations(6).unwrap().count(), 720);
        assert_eq!(
            enumerate_permutations(10).unwrap_err(),
            OracleError::DegreeLimit { h: 10, limit: 9 }
        );
    }

    #[test]
    fn census_of_degree_three() {
        let census = brute_census(3).unwrap();
        let p: Vec<u64> = census.per_k.iter().map(|r| r.p).collect();
        let i: Vec<u64> = census.per_k.iter().map(|r| r.i).collect();
        let t: Vec<u64> = census.per_k.iter().map(|r| r.t).collect();
        let it: Vec<u64> = census.per_k.iter().map(|r| r.it).collect();
        let b: Vec<u64> = census.per_k.iter().map(|r| r.b).collect();
        assert_eq!(p, vec![1, 2, 2, 1]);
        assert_eq!(i, vec![0, 0, 2, 1]);
        assert_eq!(t, vec![1, 2, 0, 1]);
        assert_eq!(it, vec![0, 0, 0, 1]);
        assert_eq!(b, vec![1, 2, 1, 1]);
        let members: u64 = census.block_reps.values().sum();
        assert_eq!(members, 6);
    }

    #[test]
    fn census_of_degree_zero() {
        let census = brute_census(0).unwrap();
        assert_eq!(census.per_k.len(), 1);
        assert_eq!(
            census.per_k[0],
            CensusRow {
                p: 1,
                i: 0,
                t: 1,
                it: 0,
                b: 1
            }
        );
    }

    #[test]
    fn inversion_table_generation() {
        // p(4, 2) = 5 and p(4, 3) = 6.
        assert_eq!(permutations_with_inversions(4, 2).len(), 5);
        assert_eq!(permutations_with_inversions(4, 3).len(), 6);
        assert_eq!(permutations_with_inversions(4, 7).len(), 0);
        assert_eq!(permutations_with_inversions(11, 0).len(), 1);
        for p in permutations_with_inversions(5, 4) {
            assert_eq!(p.inversions(), 4);
        }
    }

    #[test]
    fn brute_lattice_counts() {
        assert_eq!(brute_count_ssl(1).unwrap(), 1);
        assert_eq!(brute_count_ssl(6).unwrap(), 5);
        assert_eq!(brute_count_ssl(9).unwrap(), 29);
        assert_eq!(brute_count_ssl(0), Err(OracleError::InvalidSize));
        assert_eq!(
            brute_count_ssl(13),
            Err(OracleError::SizeLimit { n: 13, limit: 12 })
        );
    }

    #[test]
    fn brute_diagram_counts() {
        assert_eq!(brute_count_ssd(2).unwrap(), 1);
        assert_eq!(brute_count_ssd(4).unwrap(), 2);
        assert_eq!(brute_count_ssd(6).unwrap(), 6);
    }

    #[test]
    fn reference_321_scan() {
        let p = Permutation::from_image(vec![2, 7, 6, 4, 1, 8, 3, 5]).unwrap();
        assert!(contains_321_reference(&p));
        assert!(!contains_321_reference(&Permutation::identity(5)));
        assert_eq!(count_321_avoiders(3).unwrap(), 5);
        assert_eq!(count_321_avoiders(4).unwrap(), 14);
    }

    #[test]
    fn isomorphism_examples() {
        let a = build_lattice(&Permutation::from_image(vec![2, 3, 1]).unwrap());
        let b = build_lattice(&Permutation::from_image(vec![3, 1, 2]).unwrap());
        assert!(lattices_isomorphic(&a, &b).unwrap());

        let chain = build_lattice(&Permutation::identity(3));
        let square = build_lattice(&Permutation::from_image(vec![2, 1]).unwrap());
        assert!(!lattices_isomorphic(&chain, &square).unwrap());
        assert!(lattices_isomorphic(&chain, &chain).unwrap());

        let big = build_lattice(&Permutation::from_image(vec![5, 4, 3, 2, 1]).unwrap());
        assert_eq!(big.size(), 16);
        assert!(lattices_isomorphic(&big, &big).is_err());
    }

    #[test]
    fn isomorphism_needs_more_than_a_size_match() {
        // Equal size and length, one square glued at three different
        // heights: pairwise non-isomorphic, which is why b(4, 1) = 3.
        let a = build_lattice(&Permutation::from_image(vec![1, 3, 2, 4]).unwrap());
        let b = build_lattice(&Permutation::from_image(vec![2, 1, 3, 4]).unwrap());
        let c = build_lattice(&Permutation::from_image(vec![1, 2, 4, 3]).unwrap());
        assert_eq!(a.size(), 6);
        assert_eq!(b.size(), 6);
        assert_eq!(c.size(), 6);
        assert!(!lattices_isomorphic(&a, &b).unwrap());
        assert!(!lattices_isomorphic(&a, &c).unwrap());
        assert!(!lattices_isomorphic(&b, &c).unwrap());

        // A permutation and its inverse share a block, hence a lattice.
        let p = Permutation::from_image(vec![1, 3, 4, 2, 6, 5]).unwrap();
        let d = build_lattice(&p);
        let e = build_lattice(&p.inverse());
        assert!(lattices_isomorphic(&d, &e).unwrap());
    }
}
