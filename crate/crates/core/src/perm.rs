//! Permutation arithmetic: inversions, segment structure, head/body
//! decomposition, block canonical forms, and 321-pattern detection.
//!
//! Permutations act on `{1, ..., h}` and are stored by their image sequence;
//! all public indices and values are 1-based. Degree 0 (the empty
//! permutation) is a valid value, but the segment-based operations reject it
//! because segments are only defined for nonempty permutations.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("value {0} repeated")]
    RepeatedValue(usize),
    #[error("value {value} out of range 1..={degree}")]
    OutOfRange { value: usize, degree: usize },
    #[error("the empty permutation has no segments")]
    EmptyPermutation,
    #[error("row {0} repeated in partial permutation")]
    RepeatedRow(usize),
    #[error("column {0} repeated in partial permutation")]
    RepeatedColumn(usize),
    #[error("pair ({i}, {j}) outside the {m}x{n} grid")]
    PairOutOfGrid { i: usize, j: usize, m: usize, n: usize },
}

/// A permutation of `{1, ..., h}`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn from_image(image: Vec<usize>) -> Result<Self, PermError> {
        let h = image.len();
        let mut seen = vec![false; h];
        for &v in &image {
            if v < 1 || v > h {
                return Err(PermError::OutOfRange {
                    value: v,
                    degree: h,
                });
            }
            if seen[v - 1] {
                return Err(PermError::RepeatedValue(v));
            }
            seen[v - 1] = true;
        }
        Ok(Self { image })
    }

    /// Internal constructor for sequences already known to be bijective.
    fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::from_image(image.clone()).is_ok());
        Self { image }
    }

    pub fn empty() -> Self {
        Self { image: Vec::new() }
    }

    pub fn identity(h: usize) -> Self {
        Self {
            image: (1..=h).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Image of `s` under the permutation. Panics if `s` is not in `1..=h`.
    pub fn apply(&self, s: usize) -> usize {
        assert!(
            s >= 1 && s <= self.degree(),
            "argument {s} out of range 1..={}",
            self.degree()
        );
        self.image[s - 1]
    }

    /// Number of inversions: pairs `s < t` with `pi(s) > pi(t)`.
    pub fn inversions(&self) -> usize {
        let h = self.degree();
        let mut count = 0;
        for s in 0..h {
            for t in s + 1..h {
                if self.image[s] > self.image[t] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.degree()];
        for (s, &v) in self.image.iter().enumerate() {
            image[v - 1] = s + 1;
        }
        Self { image }
    }

    pub fn is_involution(&self) -> bool {
        (1..=self.degree()).all(|s| self.apply(self.apply(s)) == s)
    }

    /// Partition of `{1, ..., h}` into segments: the minimal nonempty
    /// intervals closed under the permutation. A prefix `{1, ..., p}` is
    /// closed exactly when the running maximum of the first `p` images is
    /// `p`, so the segment boundaries fall where that happens.
    pub fn segments(&self) -> Result<SegmentPartition, PermError> {
        let h = self.degree();
        if h == 0 {
            return Err(PermError::EmptyPermutation);
        }
        let mut intervals = Vec::new();
        let mut start = 1;
        let mut running_max = 0;
        for s in 1..=h {
            running_max = running_max.max(self.image[s - 1]);
            if running_max == s {
                intervals.push((start, s));
                start = s + 1;
            }
        }
        Ok(SegmentPartition { intervals })
    }

    /// A permutation is irreducible when its only segment is all of
    /// `{1, ..., h}`.
    pub fn is_irreducible(&self) -> Result<bool, PermError> {
        let h = self.degree();
        if h == 0 {
            return Err(PermError::EmptyPermutation);
        }
        let mut running_max = 0;
        for s in 1..h {
            running_max = running_max.max(self.image[s - 1]);
            if running_max == s {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits off the first segment: the head is the restriction to it, the
    /// body is the rest re-indexed to start at 1. The body is empty exactly
    /// when the permutation is irreducible.
    pub fn head_body(&self) -> Result<(Permutation, Permutation), PermError> {
        let segments = self.segments()?;
        let (_, end) = segments.intervals[0];
        let head = Self::from_image_unchecked(self.image[..end].to_vec());
        let body = Self::from_image_unchecked(self.image[end..].iter().map(|v| v - end).collect());
        Ok((head, body))
    }

    /// Canonical representative of the block of the permutation. Two
    /// permutations have equal canonical forms exactly when each segment
    /// restriction of one is the restriction of the other or its inverse.
    /// Per segment we re-index the restriction to `{1, ..., len}` and keep
    /// the lexicographically smaller of it and its inverse.
    pub fn block_canonical(&self) -> BlockForm {
        if self.degree() == 0 {
            return BlockForm {
                canonical: Self::empty(),
            };
        }
        let segments = self.segments().expect("degree checked above");
        let mut canonical = Vec::with_capacity(self.degree());
        for &(start, end) in segments.intervals() {
            let offset = start - 1;
            let restricted = Self::from_image_unchecked(
                self.image[offset..end].iter().map(|v| v - offset).collect(),
            );
            let inverse = restricted.inverse();
            let chosen = if inverse.image < restricted.image {
                inverse
            } else {
                restricted
            };
            canonical.extend(chosen.image.iter().map(|v| v + offset));
        }
        BlockForm {
            canonical: Self::from_image_unchecked(canonical),
        }
    }

    /// True when no indices `a < b < c` satisfy `pi(a) > pi(b) > pi(c)`.
    /// Linear scan: position `b` is the middle of a 321 pattern exactly when
    /// some earlier image is larger and some later image is smaller.
    pub fn avoids_321(&self) -> bool {
        let h = self.degree();
        if h < 3 {
            return true;
        }
        let mut suffix_min = vec![usize::MAX; h + 1];
        for s in (0..h).rev() {
            suffix_min[s] = suffix_min[s + 1].min(self.image[s]);
        }
        let mut prefix_max = 0;
        for b in 0..h {
            let v = self.image[b];
            if prefix_max > v && suffix_min[b + 1] < v {
                return false;
            }
            prefix_max = prefix_max.max(v);
        }
        true
    }

    /// The graph of the permutation as a partial permutation on the
    /// `h x h` grid: pairs `(s, pi(s))` for every `s`.
    pub fn graph(&self) -> PartialPermutation {
        let h = self.degree();
        let pairs = (1..=h).map(|s| (s, self.image[s - 1])).collect();
        PartialPermutation::new(h, h, pairs).expect("a bijection is a valid partial permutation")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, v) in self.image.iter().enumerate() {
            if s > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// The segments of a permutation as closed 1-based intervals, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentPartition {
    intervals: Vec<(usize, usize)>,
}

impl SegmentPartition {
    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.intervals.iter().copied()
    }
}

/// Canonical block representative; equality of blocks is equality of these.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockForm {
    canonical: Permutation,
}

impl BlockForm {
    pub fn canonical(&self) -> &Permutation {
        &self.canonical
    }

    pub fn degree(&self) -> usize {
        self.canonical.degree()
    }

    /// Every member of a block has the same inversion number.
    pub fn inversions(&self) -> usize {
        self.canonical.inversions()
    }
}

impl fmt::Debug for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockForm({})", self.canonical)
    }
}

/// A partial permutation on an `m x n` grid: `k` pairs `(i, j)` with
/// pairwise distinct rows and pairwise distinct columns, stored sorted by
/// row. `m` and `n` may each be 0 only when `k = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialPermutation {
    m: usize,
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PartialPermutation {
    pub fn new(m: usize, n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self, PermError> {
        pairs.sort_unstable();
        let mut cols_seen = std::collections::HashSet::new();
        for w in 0..pairs.len() {
            let (i, j) = pairs[w];
            if i < 1 || i > m || j < 1 || j > n {
                return Err(PermError::PairOutOfGrid { i, j, m, n });
            }
            if w > 0 && pairs[w - 1].0 == i {
                return Err(PermError::RepeatedRow(i));
            }
            if !cols_seen.insert(j) {
                return Err(PermError::RepeatedColumn(j));
            }
        }
        Ok(Self { m, n, pairs })
    }

    pub fn empty(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            pairs: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by row index.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Inversions of the partial permutation: pairs `s < t` (in row order)
    /// whose columns are out of order.
    pub fn inversions(&self) -> usize {
        let k = self.pairs.len();
        let mut count = 0;
        for s in 0..k {
            for t in s + 1..k {
                if self.pairs[s].1 > self.pairs[t].1 {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Debug for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialPermutation({}x{}, {:?})", self.m, self.n, self.pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(image: &[usize]) -> Permutation {
        Permutation::from_image(image.to_vec()).unwrap()
    }

    #[test]
    fn from_image_validates() {
        assert!(Permutation::from_image(vec![2, 3, 1]).is_ok());
        assert_eq!(
            Permutation::from_image(vec![2, 1, 1]),
            Err(PermError::RepeatedValue(1))
        );
        assert_eq!(
            Permutation::from_image(vec![1, 4, 2]),
            Err(PermError::OutOfRange {
                value: 4,
                degree: 3
            })
        );
        assert_eq!(
            Permutation::from_image(vec![0, 1]),
            Err(PermError::OutOfRange {
                value: 0,
                degree: 2
            })
        );
        assert_eq!(Permutation::from_image(vec![]).unwrap(), Permutation::empty());
    }

    #[test]
    fn inversions_examples() {
        assert_eq!(Permutation::identity(8).inversions(), 0);
        assert_eq!(perm(&[2, 7, 6, 4, 1, 8, 3, 5]).inversions(), 14);
        assert_eq!(perm(&[1, 3, 4, 2, 6, 5]).inversions(), 3);
        assert_eq!(perm(&[3, 2, 1]).inversions(), 3);
        assert_eq!(Permutation::empty().inversions(), 0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(perm(&[2, 3, 1]).inverse(), perm(&[3, 1, 2]));
        assert_eq!(perm(&[2, 1]).inverse(), perm(&[2, 1]));
        assert_eq!(Permutation::identity(5).inverse(), Permutation::identity(5));
    }

    #[test]
    fn involution_detection() {
        assert!(perm(&[2, 1, 3, 4]).is_involution());
        assert!(!perm(&[2, 3, 1]).is_involution());
        assert!(Permutation::empty().is_involution());
        assert!(perm(&[3, 2, 1]).is_involution());
    }

    #[test]
    fn segments_examples() {
        let s = perm(&[1, 3, 4, 2, 6, 5]).segments().unwrap();
        assert_eq!(s.intervals(), &[(1, 1), (2, 4), (5, 6)]);
        let s = perm(&[2, 7, 6, 4, 1, 8, 3, 5]).segments().unwrap();
        assert_eq!(s.intervals(), &[(1, 8)]);
        let s = Permutation::identity(3).segments().unwrap();
        assert_eq!(s.intervals(), &[(1, 1), (2, 2), (3, 3)]);
        assert_eq!(
            Permutation::empty().segments(),
            Err(PermError::EmptyPermutation)
        );
    }

    #[test]
    fn segments_tile_the_domain() {
        let p = perm(&[2, 1, 4, 5, 3, 6]);
        let s = p.segments().unwrap();
        assert_eq!(s.intervals(), &[(1, 2), (3, 5), (6, 6)]);
        let mut expected_start = 1;
        for (start, end) in s.iter() {
            assert_eq!(start, expected_start);
            assert!(end >= start);
            expected_start = end + 1;
        }
        assert_eq!(expected_start, p.degree() + 1);
    }

    #[test]
    fn irreducibility() {
        assert!(perm(&[2, 3, 1]).is_irreducible().unwrap());
        assert!(!perm(&[1, 3, 2]).is_irreducible().unwrap());
        assert!(perm(&[1]).is_irreducible().unwrap());
        assert!(Permutation::empty().is_irreducible().is_err());
    }

    #[test]
    fn head_body_examples() {
        let (head, body) = perm(&[1, 3, 4, 2, 6, 5]).head_body().unwrap();
        assert_eq!(head, perm(&[1]));
        assert_eq!(body, perm(&[2, 3, 1, 5, 4]));

        let (head, body) = perm(&[2, 7, 6, 4, 1, 8, 3, 5]).head_body().unwrap();
        assert_eq!(head, perm(&[2, 7, 6, 4, 1, 8, 3, 5]));
        assert_eq!(body, Permutation::empty());

        let (head, body) = perm(&[2, 1, 4, 3]).head_body().unwrap();
        assert_eq!(head, perm(&[2, 1]));
        assert_eq!(body, perm(&[2, 1]));
    }

    #[test]
    fn block_canonical_examples() {
        // The two irreducible permutations of degree 3 are mutually inverse,
        // hence share a block.
        assert_eq!(
            perm(&[2, 3, 1]).block_canonical(),
            perm(&[3, 1, 2]).block_canonical()
        );
        assert_eq!(
            perm(&[2, 3, 1]).block_canonical().canonical(),
            &perm(&[2, 3, 1])
        );
        // Involutions are alone in their blocks.
        assert_eq!(
            perm(&[3, 2, 1]).block_canonical().canonical(),
            &perm(&[3, 2, 1])
        );
        // Segment-wise choice: (1,3,4,2,6,5) restricts to (2,3,1) and (2,1),
        // both already minimal.
        assert_eq!(
            perm(&[1, 3, 4, 2, 6, 5]).block_canonical().canonical(),
            &perm(&[1, 3, 4, 2, 6, 5])
        );
        assert_eq!(
            Permutation::empty().block_canonical().canonical(),
            &Permutation::empty()
        );
        assert_eq!(perm(&[3, 2, 1]).block_canonical().inversions(), 3);
    }

    #[test]
    fn block_canonical_is_inverse_invariant() {
        let p = perm(&[1, 4, 5, 2, 3, 7, 6]);
        assert_eq!(p.block_canonical(), p.inverse().block_canonical());
    }

    #[test]
    fn pattern_321() {
        assert!(!perm(&[3, 2, 1]).avoids_321());
        assert!(!perm(&[2, 7, 6, 4, 1, 8, 3, 5]).avoids_321());
        assert!(Permutation::identity(6).avoids_321());
        assert!(perm(&[2, 3, 1]).avoids_321());
        assert!(perm(&[2, 1]).avoids_321());
        assert!(Permutation::empty().avoids_321());
    }

    #[test]
    fn graph_round_trip() {
        let p = perm(&[4, 3, 1, 2]);
        let g = p.graph();
        assert_eq!(g.m(), 4);
        assert_eq!(g.n(), 4);
        assert_eq!(g.pairs(), &[(1, 4), (2, 3), (3, 1), (4, 2)]);
        assert_eq!(g.inversions(), p.inversions());
    }

    #[test]
    fn partial_permutation_validates() {
        let t = PartialPermutation::new(8, 8, vec![(5, 8), (4, 4), (7, 1), (8, 2)]).unwrap();
        assert_eq!(t.pairs(), &[(4, 4), (5, 8), (7, 1), (8, 2)]);
        assert_eq!(t.len(), 4);
        assert_eq!(
            PartialPermutation::new(3, 3, vec![(1, 1), (1, 2)]),
            Err(PermError::RepeatedRow(1))
        );
        assert_eq!(
            PartialPermutation::new(3, 3, vec![(1, 2), (3, 2)]),
            Err(PermError::RepeatedColumn(2))
        );
        assert_eq!(
            PartialPermutation::new(3, 3, vec![(4, 1)]),
            Err(PermError::PairOutOfGrid {
                i: 4,
                j: 1,
                m: 3,
                n: 3
            })
        );
        assert!(PartialPermutation::empty(0, 0).is_empty());
    }

    #[test]
    fn partial_inversions_examples() {
        let t = PartialPermutation::new(8, 8, vec![(4, 4), (5, 8), (7, 1), (8, 2)]).unwrap();
        assert_eq!(t.inversions(), 4);
        let t =
            PartialPermutation::new(8, 8, vec![(2, 5), (4, 4), (5, 8), (7, 1), (8, 2)]).unwrap();
        assert_eq!(t.inversions(), 7);
        assert_eq!(PartialPermutation::empty(5, 3).inversions(), 0);
    }

    #[test]
    fn display_formats() {
        assert_eq!(perm(&[2, 3, 1]).to_string(), "2,3,1");
        assert_eq!(Permutation::empty().to_string(), "");
    }
}
