//! Grid quotients by join-congruences, finite lattice property checks, and
//! planar diagram export.
//!
//! The ambient lattice is the grid `{0..m} x {0..n}` ordered componentwise.
//! A partial permutation `tau` on the grid induces a join-congruence: each
//! pair `(i, j)` forces `(i-1, t) ~ (i, t)` for `t >= j` and
//! `(t, j-1) ~ (t, j)` for `t >= i`, and the congruence is the equivalence
//! closure of those identifications. The quotient is again a lattice; when
//! `tau` is the graph of a permutation of degree `h` the quotient is a slim
//! semimodular lattice of length `h` with `h + 1 + inv` elements, and every
//! slim semimodular lattice arises this way.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{PartialPermutation, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("grid dimensions must be positive (got {m}x{n})")]
    InvalidDimensions { m: usize, n: usize },
    #[error("pair ({i}, {j}) does not fit in the {m}x{n} grid")]
    PairOutOfGrid { i: usize, j: usize, m: usize, n: usize },
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("invalid covers: {0}")]
    InvalidCovers(String),
}

/// An element of the grid `{0..m} x {0..n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridElement {
    pub row: usize,
    pub col: usize,
}

impl GridElement {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for GridElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// The grid modulo the join-congruence induced by a partial permutation.
/// Block ids are assigned by first appearance in row-major order, so the
/// block of `(0, 0)` is always id 0.
#[derive(Clone, Debug)]
pub struct GridQuotient {
    m: usize,
    n: usize,
    source: PartialPermutation,
    block_of: Vec<usize>,
    block_count: usize,
}

impl GridQuotient {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// The partial permutation the quotient was built from.
    pub fn source(&self) -> &PartialPermutation {
        &self.source
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        row * (self.n + 1) + col
    }

    pub fn block_id(&self, e: GridElement) -> usize {
        assert!(
            e.row <= self.m && e.col <= self.n,
            "{e} outside the {}x{} grid",
            self.m,
            self.n
        );
        self.block_of[self.idx(e.row, e.col)]
    }

    /// Blocks indexed by id, each listed in row-major order.
    pub fn blocks(&self) -> Vec<Vec<GridElement>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for row in 0..=self.m {
            for col in 0..=self.n {
                blocks[self.block_of[self.idx(row, col)]].push(GridElement::new(row, col));
            }
        }
        blocks
    }
}

/// Builds the quotient of the `m x n` grid by the join-congruence of `tau`.
pub fn build_quotient(
    m: usize,
    n: usize,
    tau: &PartialPermutation,
) -> Result<GridQuotient, LatticeError> {
    if m == 0 || n == 0 {
        return Err(LatticeError::InvalidDimensions { m, n });
    }
    for &(i, j) in tau.pairs() {
        if i > m || j > n {
            return Err(LatticeError::PairOutOfGrid { i, j, m, n });
        }
    }
    let cols = n + 1;
    let mut uf = UnionFind::new((m + 1) * cols);
    for &(i, j) in tau.pairs() {
        for t in j..=n {
            uf.union((i - 1) * cols + t, i * cols + t);
        }
        for t in i..=m {
            uf.union(t * cols + j - 1, t * cols + j);
        }
    }
    let mut id_of_root = vec![usize::MAX; (m + 1) * cols];
    let mut block_of = vec![0; (m + 1) * cols];
    let mut block_count = 0;
    for (e, b) in block_of.iter_mut().enumerate() {
        let root = uf.find(e);
        if id_of_root[root] == usize::MAX {
            id_of_root[root] = block_count;
            block_count += 1;
        }
        *b = id_of_root[root];
    }
    let source = PartialPermutation::new(m, n, tau.pairs().to_vec())
        .expect("pairs already validated against the grid");
    Ok(GridQuotient {
        m,
        n,
        source,
        block_of,
        block_count,
    })
}

/// Size of the quotient by direct accounting, without building it:
/// `(m+1)(n+1) + inv(tau) - k(m + n + 2) + sum_s (i_s + j_s)`.
pub fn quotient_size_formula(
    m: usize,
    n: usize,
    tau: &PartialPermutation,
) -> Result<usize, LatticeError> {
    if m == 0 || n == 0 {
        return Err(LatticeError::InvalidDimensions { m, n });
    }
    for &(i, j) in tau.pairs() {
        if i > m || j > n {
            return Err(LatticeError::PairOutOfGrid { i, j, m, n });
        }
    }
    let k = tau.len() as i128;
    let mut size = ((m + 1) * (n + 1)) as i128 + tau.inversions() as i128;
    size -= k * (m + n + 2) as i128;
    for &(i, j) in tau.pairs() {
        size += (i + j) as i128;
    }
    debug_assert!(size >= 1);
    Ok(size as usize)
}

/// Recovers the partial permutation from its quotient: the cells whose
/// lower and left neighbors were merged in while the diagonal neighbor
/// stayed outside.
pub fn source_cells(q: &GridQuotient) -> PartialPermutation {
    let mut pairs = Vec::new();
    for i in 1..=q.m() {
        for j in 1..=q.n() {
            let here = q.block_id(GridElement::new(i, j));
            if q.block_id(GridElement::new(i - 1, j)) == here
                && q.block_id(GridElement::new(i, j - 1)) == here
                && q.block_id(GridElement::new(i - 1, j - 1)) != here
            {
                pairs.push((i, j));
            }
        }
    }
    PartialPermutation::new(q.m(), q.n(), pairs)
        .expect("source cells of a quotient form a partial permutation")
}

/// A finite lattice with precomputed order, cover, join, and meet tables.
/// Elements are `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    height: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from an explicit order relation, validating that it
    /// is a partial order with unique extremes in which every pair has a
    /// least upper and greatest lower bound.
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = leq.len();
        if n == 0 {
            return Err(LatticeError::NotALattice("empty carrier".into()));
        }
        for (x, row) in leq.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::NotALattice("ragged order relation".into()));
            }
            if !row[x] {
                return Err(LatticeError::NotALattice(format!("{x} not reflexive")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(LatticeError::NotALattice(format!(
                        "antisymmetry fails on {x}, {y}"
                    )));
                }
                if !leq[x][y] {
                    continue;
                }
                #[allow(clippy::needless_range_loop)] // z walks two rows in step
                for z in 0..n {
                    if leq[y][z] && !leq[x][z] {
                        return Err(LatticeError::NotALattice(format!(
                            "transitivity fails on {x}, {y}, {z}"
                        )));
                    }
                }
            }
        }
        let bottoms: Vec<usize> = (0..n).filter(|&x| (0..n).all(|y| leq[x][y])).collect();
        let tops: Vec<usize> = (0..n).filter(|&x| (0..n).all(|y| leq[y][x])).collect();
        let (&[bottom], &[top]) = (&bottoms[..], &tops[..]) else {
            return Err(LatticeError::NotALattice(
                "minimum or maximum is not unique".into(),
            ));
        };

        let mut join = vec![vec![0usize; n]; n];
        let mut meet = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in a..n {
                let ubs: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                // A least element, if present, survives a single sweep.
                let mut least = ubs[0];
                for &c in &ubs[1..] {
                    if leq[c][least] {
                        least = c;
                    }
                }
                if ubs.iter().any(|&c| !leq[least][c]) {
                    return Err(LatticeError::NotALattice(format!(
                        "{a} and {b} have no join"
                    )));
                }
                join[a][b] = least;
                join[b][a] = least;

                let lbs: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let mut greatest = lbs[0];
                for &c in &lbs[1..] {
                    if leq[greatest][c] {
                        greatest = c;
                    }
                }
                if lbs.iter().any(|&c| !leq[c][greatest]) {
                    return Err(LatticeError::NotALattice(format!(
                        "{a} and {b} have no meet"
                    )));
                }
                meet[a][b] = greatest;
                meet[b][a] = greatest;
            }
        }

        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq[a][b] {
                    continue;
                }
                let direct = (0..n).all(|c| c == a || c == b || !(leq[a][c] && leq[c][b]));
                if direct {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();

        // Longest chain from the bottom, filled along a linear extension.
        let mut below_count: Vec<(usize, usize)> = (0..n)
            .map(|x| ((0..n).filter(|&y| leq[y][x]).count(), x))
            .collect();
        below_count.sort_unstable();
        let mut height = vec![0usize; n];
        for &(_, x) in &below_count {
            for &(lo, hi) in &covers {
                if hi == x {
                    height[x] = height[x].max(height[lo] + 1);
                }
            }
        }

        Ok(Self {
            size: n,
            leq,
            covers,
            join,
            meet,
            height,
            bottom,
            top,
        })
    }

    /// Builds a lattice from its cover relation. The input must be exactly
    /// the transitive reduction of a lattice order.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::NotALattice("empty carrier".into()));
        }
        let mut up = vec![Vec::new(); size];
        for &(lo, hi) in covers {
            if lo >= size || hi >= size {
                return Err(LatticeError::InvalidCovers(format!(
                    "edge ({lo}, {hi}) outside 0..{size}"
                )));
            }
            if lo == hi {
                return Err(LatticeError::InvalidCovers(format!("loop at {lo}")));
            }
            up[lo].push(hi);
        }
        let mut leq = vec![vec![false; size]; size];
        for (start, row) in leq.iter_mut().enumerate() {
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                if row[x] {
                    continue;
                }
                row[x] = true;
                stack.extend(up[x].iter().copied());
            }
        }
        let lattice = Self::from_leq(leq)?;
        let mut given: Vec<(usize, usize)> = covers.to_vec();
        given.sort_unstable();
        given.dedup();
        if given.len() != covers.len() || given != lattice.covers {
            return Err(LatticeError::InvalidCovers(
                "edges are not the transitive reduction of the order".into(),
            ));
        }
        Ok(lattice)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height_of(&self, x: usize) -> usize {
        self.height[x]
    }

    /// Length of the lattice: the height of its top.
    pub fn length(&self) -> usize {
        self.height[self.top]
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(_, hi)| hi == x)
            .map(|&(lo, _)| lo)
            .collect()
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(lo, _)| lo == x)
            .map(|&(_, hi)| hi)
            .collect()
    }

    /// Elements with exactly one lower cover, sorted.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let mut lower_count = vec![0usize; self.size];
        for &(_, hi) in &self.covers {
            lower_count[hi] += 1;
        }
        (0..self.size).filter(|&x| lower_count[x] == 1).collect()
    }

    /// Upper semimodularity: whenever `x` is covered by `y`, `x v z` is
    /// covered by (or equals) `y v z`.
    pub fn is_semimodular(&self) -> bool {
        let cover_set: HashSet<(usize, usize)> = self.covers.iter().copied().collect();
        for &(x, y) in &self.covers {
            for z in 0..self.size {
                let a = self.join[x][z];
                let b = self.join[y][z];
                if a != b && !cover_set.contains(&(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Slimness: no three join-irreducible elements are pairwise
    /// incomparable.
    pub fn is_slim(&self) -> bool {
        let ji = self.join_irreducibles();
        let incomparable = |a: usize, b: usize| !self.leq[a][b] && !self.leq[b][a];
        for (u, &a) in ji.iter().enumerate() {
            for (v, &b) in ji.iter().enumerate().skip(u + 1) {
                if !incomparable(a, b) {
                    continue;
                }
                if ji.iter().skip(v + 1).any(|&c| incomparable(a, c) && incomparable(b, c)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_distributive(&self) -> bool {
        for x in 0..self.size {
            for y in 0..self.size {
                for z in 0..self.size {
                    let lhs = self.meet[x][self.join[y][z]];
                    let rhs = self.join[self.meet[x][y]][self.meet[x][z]];
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Quotient lattice of the grid: blocks ordered by `X <= Y` iff the block
/// of `rep(X) v rep(Y)` is `Y`. The congruence respects joins, so the
/// choice of representatives does not matter; debug builds verify that over
/// every pair of grid elements.
pub fn quotient_lattice(q: &GridQuotient) -> FiniteLattice {
    let b = q.block_count();
    let mut rep: Vec<Option<GridElement>> = vec![None; b];
    for row in 0..=q.m() {
        for col in 0..=q.n() {
            let id = q.block_id(GridElement::new(row, col));
            if rep[id].is_none() {
                rep[id] = Some(GridElement::new(row, col));
            }
        }
    }
    let rep: Vec<GridElement> = rep.into_iter().map(|r| r.expect("every id appears")).collect();

    let mut join_block = vec![vec![0usize; b]; b];
    for x in 0..b {
        for y in 0..b {
            let e = GridElement::new(rep[x].row.max(rep[y].row), rep[x].col.max(rep[y].col));
            join_block[x][y] = q.block_id(e);
        }
    }

    #[cfg(debug_assertions)]
    for row_a in 0..=q.m() {
        for col_a in 0..=q.n() {
            for row_b in 0..=q.m() {
                for col_b in 0..=q.n() {
                    let joined = GridElement::new(row_a.max(row_b), col_a.max(col_b));
                    let via_elements = q.block_id(joined);
                    let via_blocks = join_block[q.block_id(GridElement::new(row_a, col_a))]
                        [q.block_id(GridElement::new(row_b, col_b))];
                    debug_assert_eq!(
                        via_elements, via_blocks,
                        "join of blocks depends on representatives"
                    );
                }
            }
        }
    }

    let leq: Vec<Vec<bool>> = (0..b)
        .map(|x| (0..b).map(|y| join_block[x][y] == y).collect())
        .collect();
    let lattice = FiniteLattice::from_leq(leq).expect("grid quotient order is a lattice");
    debug_assert!((0..b).all(|x| (0..b).all(|y| lattice.join(x, y) == join_block[x][y])));
    lattice
}

/// A lattice together with the grid blocks realizing its elements, ready
/// for export.
#[derive(Clone, Debug)]
pub struct LatticeDiagram {
    lattice: FiniteLattice,
    blocks: Vec<Vec<GridElement>>,
}

#[derive(Serialize)]
struct DiagramJson {
    size: usize,
    elements: Vec<ElementJson>,
    covers: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct ElementJson {
    id: usize,
    grid_block: Vec<[usize; 2]>,
}

impl LatticeDiagram {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }

    /// Grid blocks indexed by lattice element id.
    pub fn blocks(&self) -> &[Vec<GridElement>] {
        &self.blocks
    }

    /// Deterministic DOT rendering: edges are the cover relation, elements
    /// of equal height share a rank, everything sorted by id.
    pub fn to_dot(&self) -> String {
        let lattice = &self.lattice;
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for id in 0..lattice.size() {
            out.push_str(&format!("  {id} [label=\"{id}\"];\n"));
        }
        for level in 0..=lattice.length() {
            let members: Vec<usize> = (0..lattice.size())
                .filter(|&x| lattice.height_of(x) == level)
                .collect();
            if members.is_empty() {
                continue;
            }
            out.push_str("  { rank=same;");
            for id in members {
                out.push_str(&format!(" {id};"));
            }
            out.push_str(" }\n");
        }
        for &(lo, hi) in lattice.covers() {
            out.push_str(&format!("  {lo} -> {hi};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Deterministic JSON rendering of the same data.
    pub fn to_json_string(&self) -> String {
        let doc = DiagramJson {
            size: self.lattice.size(),
            elements: self
                .blocks
                .iter()
                .enumerate()
                .map(|(id, block)| ElementJson {
                    id,
                    grid_block: block.iter().map(|e| [e.row, e.col]).collect(),
                })
                .collect(),
            covers: self.lattice.covers().iter().map(|&(lo, hi)| [lo, hi]).collect(),
        };
        serde_json::to_string(&doc).expect("diagram serialization cannot fail")
    }
}

/// Planar diagram of the slim semimodular lattice encoded by a permutation:
/// the quotient of the `h x h` grid by the join-congruence of its graph.
/// Degree 0 yields the one-element lattice.
pub fn build_diagram(p: &Permutation) -> LatticeDiagram {
    let h = p.degree();
    if h == 0 {
        let lattice = FiniteLattice::from_leq(vec![vec![true]]).expect("singleton lattice");
        return LatticeDiagram {
            lattice,
            blocks: vec![vec![GridElement::new(0, 0)]],
        };
    }
    let q = build_quotient(h, h, &p.graph()).expect("a permutation graph fits its own grid");
    let lattice = quotient_lattice(&q);
    let blocks = q.blocks();
    LatticeDiagram { lattice, blocks }
}

/// The lattice of [`build_diagram`] without the grid annotations.
pub fn build_lattice(p: &Permutation) -> FiniteLattice {
    build_diagram(p).into_lattice()
}
