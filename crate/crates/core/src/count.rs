//! Exact evaluation of the inversion-statistics counting functions and the
//! headline counts built from them.
//!
//! Five tables are computed over the pair `(h, k)` = (degree, inversion
//! number), each zero outside `0 <= k <= h(h-1)/2`:
//!
//! * `p(h, k)`: permutations of degree `h` with `k` inversions (the Mahonian
//!   distribution, coefficients of `prod_{j<=h} (1 + x + ... + x^{j-1})`),
//! * `i(h, k)`: irreducible permutations,
//! * `t(h, k)`: involutions, by first-column removal:
//!   `t(h, k) = t(h-1, k) + sum_{s=2..h} t(h-2, k - 2s + 3)`,
//! * `it(h, k)`: irreducible involutions,
//! * `b(h, k)`: blocks, where each block of a nonempty permutation is an
//!   (irreducible-or-inverse head) times a block of the body, so
//!   `2 b(h, k) = sum_{s,t} (i(s, t) + it(s, t)) b(h-s, k-t)`.
//!
//! The irreducible counts deduct composites from the totals:
//! `i = p - (i * p)` and `it = t - (it * t)` as truncated convolutions.
//!
//! The number of slim semimodular lattices of size `n` is
//! `sum_h b(h, n-1-h)`, and the number of planar diagrams of those is
//! `sum_h p(h, n-1-h)`; among distributive lattices the diagram count at
//! length `h` is the Catalan number `C_h`.
//!
//! Everything is integer-exact. Computation is generic over the scalar via
//! [`Count`]; use `u64` for desk-size checks and [`crate::Nat`] beyond.
//! Out-of-range reads inside the recurrences are zero; the public accessor
//! [`CountTable::get`] instead reports a range error past the table bounds.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive};
use thiserror::Error;

use crate::Nat;

/// Scalar suitable for exact counting: an unsigned exact integer with
/// checked arithmetic, so that fixed-width instantiations fail loudly on
/// overflow instead of wrapping.
pub trait Count:
    Integer + FromPrimitive + CheckedAdd + CheckedSub + CheckedMul + Clone + fmt::Debug
{
}

impl<T> Count for T where
    T: Integer + FromPrimitive + CheckedAdd + CheckedSub + CheckedMul + Clone + fmt::Debug
{
}

/// `h(h-1)/2`, the maximal inversion number at degree `h`.
pub fn max_inversions(h: usize) -> usize {
    h * h.saturating_sub(1) / 2
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("size must be at least 1")]
    InvalidSize,
    #[error("entry ({h}, {k}) outside table bounds ({max_h}, {max_k})")]
    Range {
        h: usize,
        k: usize,
        max_h: usize,
        max_k: usize,
    },
    #[error("block recurrence produced an odd sum at ({h}, {k})")]
    Integrality { h: usize, k: usize },
    #[error("table invariant violated: {0}")]
    Invariant(String),
}

/// Which counting function a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    Permutations,
    Irreducibles,
    Involutions,
    IrreducibleInvolutions,
    Blocks,
}

impl TableKind {
    pub const ALL: [TableKind; 5] = [
        TableKind::Permutations,
        TableKind::Irreducibles,
        TableKind::Involutions,
        TableKind::IrreducibleInvolutions,
        TableKind::Blocks,
    ];

    /// Short code used in CSV/JSON output and cache file names.
    pub fn code(self) -> &'static str {
        match self {
            TableKind::Permutations => "p",
            TableKind::Irreducibles => "i",
            TableKind::Involutions => "t",
            TableKind::IrreducibleInvolutions => "it",
            TableKind::Blocks => "b",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p" => Ok(TableKind::Permutations),
            "i" => Ok(TableKind::Irreducibles),
            "t" => Ok(TableKind::Involutions),
            "it" => Ok(TableKind::IrreducibleInvolutions),
            "b" => Ok(TableKind::Blocks),
            other => Err(format!("unknown table kind {other:?}, expected p|i|t|it|b")),
        }
    }
}

/// A counting table: one row per degree `0..=max_h`, row `h` holding the
/// entries for `k <= min(max_k, h(h-1)/2)`. Entries past a row's stored
/// length but within `max_k` are zero by convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable<C> {
    kind: TableKind,
    max_h: usize,
    max_k: usize,
    rows: Vec<Vec<C>>,
}

impl<C: Count> CountTable<C> {
    fn new(kind: TableKind, max_h: usize, max_k: usize, rows: Vec<Vec<C>>) -> Self {
        debug_assert_eq!(rows.len(), max_h + 1);
        debug_assert!(rows
            .iter()
            .enumerate()
            .all(|(h, row)| row.len() == max_inversions(h).min(max_k) + 1));
        Self {
            kind,
            max_h,
            max_k,
            rows,
        }
    }

    /// Reassembles a table from parts, re-validating the row shape. Used by
    /// the cache loader; computed tables come out of the builders instead.
    pub(crate) fn from_rows(
        kind: TableKind,
        max_h: usize,
        max_k: usize,
        rows: Vec<Vec<C>>,
    ) -> Result<Self, String> {
        if rows.len() != max_h + 1 {
            return Err(format!(
                "expected {} rows, found {}",
                max_h + 1,
                rows.len()
            ));
        }
        for (h, row) in rows.iter().enumerate() {
            let want = max_inversions(h).min(max_k) + 1;
            if row.len() != want {
                return Err(format!(
                    "row {h} has {} entries, expected {want}",
                    row.len()
                ));
            }
        }
        Ok(Self {
            kind,
            max_h,
            max_k,
            rows,
        })
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_h(&self) -> usize {
        self.max_h
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    /// Entry at `(h, k)`, zero for `k` beyond the row's support. Reads past
    /// the table bounds are a range error, never a silent zero.
    pub fn get(&self, h: usize, k: usize) -> Result<C, CountError> {
        if h > self.max_h || k > self.max_k {
            return Err(CountError::Range {
                h,
                k,
                max_h: self.max_h,
                max_k: self.max_k,
            });
        }
        Ok(self.rows[h].get(k).cloned().unwrap_or_else(C::zero))
    }

    /// Stored row for degree `h`.
    pub fn row(&self, h: usize) -> &[C] {
        &self.rows[h]
    }

    /// Iterates over all stored entries as `(h, k, value)`.
    pub fn stored(&self) -> impl Iterator<Item = (usize, usize, &C)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(h, row)| row.iter().enumerate().map(move |(k, v)| (h, k, v)))
    }

    /// In-range read that treats missing `k` as zero. Recurrence plumbing.
    fn read(&self, h: usize, k: isize) -> C {
        debug_assert!(h <= self.max_h);
        if k < 0 {
            return C::zero();
        }
        self.rows[h].get(k as usize).cloned().unwrap_or_else(C::zero)
    }
}

fn rows_read<C: Count>(rows: &[Vec<C>], h: usize, k: isize) -> C {
    if k < 0 {
        return C::zero();
    }
    rows[h].get(k as usize).cloned().unwrap_or_else(C::zero)
}

fn checked_term<C: Count>(acc: &C, f: &C, g: &C) -> C {
    let term = f.checked_mul(g).expect("counting overflow: widen the scalar");
    acc.checked_add(&term)
        .expect("counting overflow: widen the scalar")
}

/// Rows of the Mahonian distribution, clamped at `max_k`. Row `h` is the
/// coefficient list of `prod_{j=1..h} (1 + x + ... + x^{j-1})`.
fn mahonian_rows<C: Count>(max_h: usize, max_k: usize) -> Vec<Vec<C>> {
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(max_h + 1);
    rows.push(vec![C::one()]);
    for h in 1..=max_h {
        let len = max_inversions(h).min(max_k) + 1;
        let prev = &rows[h - 1];
        let mut row = Vec::with_capacity(len);
        for j in 0..len {
            // Coefficient j of prev * (1 + x + ... + x^{h-1}).
            let lo = j.saturating_sub(h - 1);
            let mut acc = C::zero();
            for t in lo..=j {
                if let Some(v) = prev.get(t) {
                    acc = acc
                        .checked_add(v)
                        .expect("counting overflow: widen the scalar");
                }
            }
            row.push(acc);
        }
        rows.push(row);
    }
    rows
}

fn involution_rows<C: Count>(max_h: usize, max_k: usize) -> Vec<Vec<C>> {
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(max_h + 1);
    rows.push(vec![C::one()]);
    for h in 1..=max_h {
        let len = max_inversions(h).min(max_k) + 1;
        let mut row = Vec::with_capacity(len);
        for k in 0..len {
            // Either h is a fixed point, or h is transposed with some s < h;
            // the transposition (s h) contributes 2(h - s) - 1 inversions.
            let mut acc = rows_read(&rows, h - 1, k as isize);
            if h >= 2 {
                for s in 1..h {
                    let spent = 2 * (h - s) - 1;
                    let f = rows_read(&rows, h - 2, k as isize - spent as isize);
                    acc = acc
                        .checked_add(&f)
                        .expect("counting overflow: widen the scalar");
                }
            }
            row.push(acc);
        }
        rows.push(row);
    }
    rows
}

/// Deducts composites from `base` to leave the irreducible counts:
/// `f(h, k) = base(h, k) - sum_{s<h, t<=k} f(s, t) base(h-s, k-t)`.
/// Applied to `p` it yields `i`, applied to `t` it yields `it`, because a
/// reducible permutation (involution) splits uniquely into an irreducible
/// head and a shorter tail of the same class.
fn irreducible_rows<C: Count>(base: &CountTable<C>, max_h: usize, max_k: usize) -> Vec<Vec<C>> {
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(max_h + 1);
    rows.push(vec![C::zero()]);
    for h in 1..=max_h {
        let len = max_inversions(h).min(max_k) + 1;
        let mut row = Vec::with_capacity(len);
        for k in 0..len {
            let mut composite = C::zero();
            #[allow(clippy::needless_range_loop)] // s also offsets the base table
            for s in 1..h {
                let f_row = &rows[s];
                for (t, f) in f_row.iter().take(k + 1).enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    let g = base.read(h - s, (k - t) as isize);
                    if g.is_zero() {
                        continue;
                    }
                    composite = checked_term(&composite, f, &g);
                }
            }
            let total = base.read(h, k as isize);
            row.push(
                total
                    .checked_sub(&composite)
                    .expect("composite count exceeds total"),
            );
        }
        rows.push(row);
    }
    rows
}

/// Block counts. Each block of a nonempty permutation decomposes as a head
/// block (an irreducible permutation and its inverse, collapsing to one
/// element when the head is an involution) followed by a block one segment
/// shorter, so summing `(i + it)(s, t) b(h-s, k-t)` counts every block
/// twice.
fn block_rows<C: Count>(
    irr: &CountTable<C>,
    irr_inv: &CountTable<C>,
    max_h: usize,
    max_k: usize,
) -> Result<Vec<Vec<C>>, CountError> {
    let two = C::one() + C::one();
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(max_h + 1);
    rows.push(vec![C::one()]);
    for h in 1..=max_h {
        let len = max_inversions(h).min(max_k) + 1;
        let mut row = Vec::with_capacity(len);
        for k in 0..len {
            let mut sum = C::zero();
            for s in 1..=h {
                for t in 0..=k {
                    let f = irr.read(s, t as isize) + irr_inv.read(s, t as isize);
                    if f.is_zero() {
                        continue;
                    }
                    let g = rows_read(&rows, h - s, (k - t) as isize);
                    if g.is_zero() {
                        continue;
                    }
                    sum = checked_term(&sum, &f, &g);
                }
            }
            let (half, rem) = sum.div_rem(&two);
            if !rem.is_zero() {
                return Err(CountError::Integrality { h, k });
            }
            row.push(half);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Memoizing holder for the five tables. Bounds only grow; a request within
/// the bounds already built is served from the existing tables.
#[derive(Clone, Debug)]
pub struct CountEngine<C> {
    p: Option<CountTable<C>>,
    irr: Option<CountTable<C>>,
    inv: Option<CountTable<C>>,
    irr_inv: Option<CountTable<C>>,
    blocks: Option<CountTable<C>>,
}

impl<C: Count> Default for CountEngine<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Count> CountEngine<C> {
    pub fn new() -> Self {
        Self {
            p: None,
            irr: None,
            inv: None,
            irr_inv: None,
            blocks: None,
        }
    }

    fn covers(slot: &Option<CountTable<C>>, max_h: usize, max_k: usize) -> bool {
        slot.as_ref()
            .is_some_and(|t| t.max_h >= max_h && t.max_k >= max_k)
    }

    fn grown(slot: &Option<CountTable<C>>, max_h: usize, max_k: usize) -> (usize, usize) {
        match slot {
            Some(t) => (t.max_h.max(max_h), t.max_k.max(max_k)),
            None => (max_h, max_k),
        }
    }

    /// Makes the table of `kind` available at least up to `(max_h, max_k)`,
    /// building any prerequisite tables first.
    pub fn ensure(
        &mut self,
        kind: TableKind,
        max_h: usize,
        max_k: usize,
    ) -> Result<(), CountError> {
        match kind {
            TableKind::Permutations => {
                if !Self::covers(&self.p, max_h, max_k) {
                    let (h, k) = Self::grown(&self.p, max_h, max_k);
                    self.p = Some(CountTable::new(kind, h, k, mahonian_rows(h, k)));
                }
            }
            TableKind::Involutions => {
                if !Self::covers(&self.inv, max_h, max_k) {
                    let (h, k) = Self::grown(&self.inv, max_h, max_k);
                    self.inv = Some(CountTable::new(kind, h, k, involution_rows(h, k)));
                }
            }
            TableKind::Irreducibles => {
                if !Self::covers(&self.irr, max_h, max_k) {
                    let (h, k) = Self::grown(&self.irr, max_h, max_k);
                    self.ensure(TableKind::Permutations, h, k)?;
                    let base = self.p.as_ref().expect("just ensured");
                    self.irr = Some(CountTable::new(kind, h, k, irreducible_rows(base, h, k)));
                }
            }
            TableKind::IrreducibleInvolutions => {
                if !Self::covers(&self.irr_inv, max_h, max_k) {
                    let (h, k) = Self::grown(&self.irr_inv, max_h, max_k);
                    self.ensure(TableKind::Involutions, h, k)?;
                    let base = self.inv.as_ref().expect("just ensured");
                    self.irr_inv = Some(CountTable::new(kind, h, k, irreducible_rows(base, h, k)));
                }
            }
            TableKind::Blocks => {
                if !Self::covers(&self.blocks, max_h, max_k) {
                    let (h, k) = Self::grown(&self.blocks, max_h, max_k);
                    self.ensure(TableKind::Irreducibles, h, k)?;
                    self.ensure(TableKind::IrreducibleInvolutions, h, k)?;
                    let irr = self.irr.as_ref().expect("just ensured");
                    let irr_inv = self.irr_inv.as_ref().expect("just ensured");
                    self.blocks = Some(CountTable::new(
                        kind,
                        h,
                        k,
                        block_rows(irr, irr_inv, h, k)?,
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn table(&self, kind: TableKind) -> Option<&CountTable<C>> {
        match kind {
            TableKind::Permutations => self.p.as_ref(),
            TableKind::Irreducibles => self.irr.as_ref(),
            TableKind::Involutions => self.inv.as_ref(),
            TableKind::IrreducibleInvolutions => self.irr_inv.as_ref(),
            TableKind::Blocks => self.blocks.as_ref(),
        }
    }

    /// Number of slim semimodular lattices with exactly `n` elements.
    pub fn count_ssl(&mut self, n: usize) -> Result<C, CountError> {
        if n == 0 {
            return Err(CountError::InvalidSize);
        }
        self.ensure(TableKind::Blocks, n - 1, n - 1)?;
        let b = self.blocks.as_ref().expect("just ensured");
        let mut total = C::zero();
        for h in 0..n {
            let f = b.read(h, (n - 1 - h) as isize);
            total = total
                .checked_add(&f)
                .expect("counting overflow: widen the scalar");
        }
        Ok(total)
    }

    /// Number of planar diagrams of slim semimodular lattices with exactly
    /// `n` elements, counted up to similarity.
    pub fn count_ssd(&mut self, n: usize) -> Result<C, CountError> {
        if n == 0 {
            return Err(CountError::InvalidSize);
        }
        self.ensure(TableKind::Permutations, n - 1, n - 1)?;
        let p = self.p.as_ref().expect("just ensured");
        let mut total = C::zero();
        for h in 0..n {
            let f = p.read(h, (n - 1 - h) as isize);
            total = total
                .checked_add(&f)
                .expect("counting overflow: widen the scalar");
        }
        Ok(total)
    }

    /// Cross-table sanity checks over whatever has been built: full `p` rows
    /// sum to `h!` and are palindromic, full `t` rows sum to the telephone
    /// numbers, and the pointwise bounds `it <= i <= p`, `it <= t <= p`,
    /// `b <= p` hold.
    pub fn validate(&self) -> Result<(), CountError> {
        if let Some(p) = &self.p {
            let mut factorial = C::one();
            for h in 0..=p.max_h {
                if h > 0 {
                    let f = C::from_usize(h).expect("degree fits the scalar");
                    factorial = factorial
                        .checked_mul(&f)
                        .expect("counting overflow: widen the scalar");
                }
                let row = p.row(h);
                if row.len() != max_inversions(h) + 1 {
                    continue;
                }
                let mut sum = C::zero();
                for v in row {
                    sum = sum
                        .checked_add(v)
                        .expect("counting overflow: widen the scalar");
                }
                if sum != factorial {
                    return Err(CountError::Invariant(format!(
                        "p row {h} does not sum to {h}!"
                    )));
                }
                for k in 0..row.len() {
                    if row[k] != row[row.len() - 1 - k] {
                        return Err(CountError::Invariant(format!(
                            "p row {h} is not palindromic at k={k}"
                        )));
                    }
                }
            }
        }
        if let Some(t) = &self.inv {
            let mut prev = C::one();
            let mut cur = C::one();
            for h in 0..=t.max_h {
                if h >= 2 {
                    let f = C::from_usize(h - 1).expect("degree fits the scalar");
                    let next = cur
                        .checked_add(&f.checked_mul(&prev).expect("overflow"))
                        .expect("overflow");
                    prev = cur;
                    cur = next;
                }
                let row = t.row(h);
                if row.len() != max_inversions(h) + 1 {
                    continue;
                }
                let mut sum = C::zero();
                for v in row {
                    sum = sum.checked_add(v).expect("overflow");
                }
                if sum != cur {
                    return Err(CountError::Invariant(format!(
                        "t row {h} does not sum to the telephone number"
                    )));
                }
            }
        }
        let pairs = [
            (&self.irr_inv, &self.irr, "it <= i"),
            (&self.irr, &self.p, "i <= p"),
            (&self.irr_inv, &self.inv, "it <= t"),
            (&self.inv, &self.p, "t <= p"),
            (&self.blocks, &self.p, "b <= p"),
        ];
        for (small, big, label) in pairs {
            let (Some(small), Some(big)) = (small, big) else {
                continue;
            };
            let max_h = small.max_h.min(big.max_h);
            let max_k = small.max_k.min(big.max_k);
            for h in 0..=max_h {
                for k in 0..=max_inversions(h).min(max_k) {
                    if small.read(h, k as isize) > big.read(h, k as isize) {
                        return Err(CountError::Invariant(format!(
                            "{label} fails at ({h}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Mahonian table with full rows up to degree `max_h`.
pub fn perm_table<C: Count>(max_h: usize) -> CountTable<C> {
    let max_k = max_inversions(max_h);
    CountTable::new(
        TableKind::Permutations,
        max_h,
        max_k,
        mahonian_rows(max_h, max_k),
    )
}

/// Irreducible-permutation table with full rows up to degree `max_h`.
pub fn irreducible_table<C: Count>(max_h: usize) -> CountTable<C> {
    let base = perm_table::<C>(max_h);
    CountTable::new(
        TableKind::Irreducibles,
        max_h,
        base.max_k,
        irreducible_rows(&base, max_h, base.max_k),
    )
}

/// Involution table with full rows up to degree `max_h`.
pub fn involution_table<C: Count>(max_h: usize) -> CountTable<C> {
    let max_k = max_inversions(max_h);
    CountTable::new(
        TableKind::Involutions,
        max_h,
        max_k,
        involution_rows(max_h, max_k),
    )
}

/// Irreducible-involution table with full rows up to degree `max_h`.
pub fn irreducible_involution_table<C: Count>(max_h: usize) -> CountTable<C> {
    let base = involution_table::<C>(max_h);
    CountTable::new(
        TableKind::IrreducibleInvolutions,
        max_h,
        base.max_k,
        irreducible_rows(&base, max_h, base.max_k),
    )
}

/// Block table with full rows up to degree `max_h`.
pub fn block_table<C: Count>(max_h: usize) -> Result<CountTable<C>, CountError> {
    let mut engine = CountEngine::<C>::new();
    engine.ensure(TableKind::Blocks, max_h, max_inversions(max_h))?;
    Ok(engine.blocks.expect("just ensured"))
}

/// Number of slim semimodular lattices with exactly `n` elements.
pub fn count_ssl(n: usize) -> Result<Nat, CountError> {
    CountEngine::<Nat>::new().count_ssl(n)
}

/// Number of planar diagrams of slim semimodular lattices with exactly `n`
/// elements, up to similarity.
pub fn count_ssd(n: usize) -> Result<Nat, CountError> {
    CountEngine::<Nat>::new().count_ssd(n)
}

/// Number of planar diagrams of distributive slim lattices of length `h`:
/// the Catalan number `C_h`, via `C_{m+1} = C_m * 2(2m+1) / (m+2)`.
pub fn count_distributive_diagrams<C: Count>(h: usize) -> C {
    let mut c = C::one();
    for m in 0..h {
        let num = C::from_usize(2 * (2 * m + 1)).expect("factor fits the scalar");
        let den = C::from_usize(m + 2).expect("factor fits the scalar");
        let prod = c
            .checked_mul(&num)
            .expect("counting overflow: widen the scalar");
        let (q, r) = prod.div_rem(&den);
        assert!(r.is_zero(), "Catalan recurrence must divide exactly");
        c = q;
    }
    c
}

/// Coefficients of the inversion generating polynomial
/// `prod_{j=1..h} (1 + x + ... + x^{j-1})`; coefficient `k` is `p(h, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionPolynomial<C> {
    degree: usize,
    coefficients: Vec<C>,
}

impl<C: Count> InversionPolynomial<C> {
    pub fn mahonian(h: usize) -> Self {
        let rows = mahonian_rows::<C>(h, max_inversions(h));
        Self {
            degree: h,
            coefficients: rows.into_iter().last().expect("at least one row"),
        }
    }

    /// The permutation degree `h` the polynomial belongs to.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `x^k`, zero beyond the degree bound.
    pub fn coefficient(&self, k: usize) -> C {
        self.coefficients.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coefficients
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mahonian_small_rows() {
        let p = perm_table::<u64>(4);
        assert_eq!(p.row(0), &[1]);
        assert_eq!(p.row(1), &[1]);
        assert_eq!(p.row(2), &[1, 1]);
        assert_eq!(p.row(3), &[1, 2, 2, 1]);
        assert_eq!(p.row(4), &[1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn get_bounds() {
        let p = perm_table::<u64>(3);
        assert_eq!(p.get(3, 1), Ok(2));
        // Within bounds but past the row support: a true zero.
        assert_eq!(p.get(2, 3), Ok(0));
        assert_eq!(
            p.get(2, 4),
            Err(CountError::Range {
                h: 2,
                k: 4,
                max_h: 3,
                max_k: 3
            })
        );
        assert_eq!(
            p.get(4, 0),
            Err(CountError::Range {
                h: 4,
                k: 0,
                max_h: 3,
                max_k: 3
            })
        );
    }

    #[test]
    fn irreducible_small_values() {
        let i = irreducible_table::<u64>(4);
        assert_eq!(i.row(0), &[0]);
        assert_eq!(i.row(1), &[1]);
        assert_eq!(i.row(2), &[0, 1]);
        // Degree 3: (2,3,1), (3,1,2) at k = 2 and (3,2,1) at k = 3.
        assert_eq!(i.row(3), &[0, 0, 2, 1]);
        assert_eq!(i.get(3, 2), Ok(2));
        assert_eq!(i.get(2, 0), Ok(0));
    }

    #[test]
    fn involution_small_values() {
        let t = involution_table::<u64>(4);
        assert_eq!(t.row(0), &[1]);
        assert_eq!(t.row(1), &[1]);
        assert_eq!(t.row(2), &[1, 1]);
        assert_eq!(t.row(3), &[1, 2, 0, 1]);
        assert_eq!(t.get(4, 3), Ok(2));
        assert_eq!(t.get(4, 1), Ok(3));
    }

    #[test]
    fn irreducible_involution_small_values() {
        let it = irreducible_involution_table::<u64>(4);
        assert_eq!(it.row(0), &[0]);
        assert_eq!(it.row(1), &[1]);
        assert_eq!(it.get(2, 1), Ok(1));
        // Degree 3: only (3,2,1).
        assert_eq!(it.row(3), &[0, 0, 0, 1]);
    }

    #[test]
    fn block_small_values() {
        let b = block_table::<u64>(4).unwrap();
        assert_eq!(b.row(0), &[1]);
        assert_eq!(b.row(1), &[1]);
        assert_eq!(b.row(2), &[1, 1]);
        // Degree 3: the two involutions with one inversion sit in separate
        // blocks, the two irreducibles share one, (3,2,1) is alone.
        assert_eq!(b.row(3), &[1, 2, 1, 1]);
        assert_eq!(b.get(3, 2), Ok(1));
        assert_eq!(b.get(4, 1), Ok(3));
    }

    #[test]
    fn lattice_counts_small() {
        let mut engine = CountEngine::<u64>::new();
        let got: Vec<u64> = (1..=9).map(|n| engine.count_ssl(n).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 3, 5, 9, 16, 29]);
        assert_eq!(engine.count_ssl(0), Err(CountError::InvalidSize));
    }

    #[test]
    fn diagram_counts_small() {
        let mut engine = CountEngine::<u64>::new();
        assert_eq!(engine.count_ssd(1).unwrap(), 1);
        assert_eq!(engine.count_ssd(2).unwrap(), 1);
        assert_eq!(engine.count_ssd(4).unwrap(), 2);
        assert_eq!(engine.count_ssd(6).unwrap(), 6);
        assert_eq!(engine.count_ssd(0), Err(CountError::InvalidSize));
    }

    #[test]
    fn free_functions_match_engine() {
        assert_eq!(count_ssl(9).unwrap(), Nat::from(29u32));
        assert_eq!(count_ssd(6).unwrap(), Nat::from(6u32));
    }

    #[test]
    fn catalan_values() {
        let got: Vec<u64> = (0..=8).map(count_distributive_diagrams::<u64>).collect();
        assert_eq!(got, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430]);
        assert_eq!(
            count_distributive_diagrams::<Nat>(20),
            Nat::from(6564120420u64)
        );
    }

    #[test]
    fn memoization_is_sound() {
        let mut grown = CountEngine::<u64>::new();
        let small = grown.count_ssl(5).unwrap();
        assert_eq!(small, 3);
        let after_growth = grown.count_ssl(9).unwrap();
        let fresh = CountEngine::<u64>::new().count_ssl(9).unwrap();
        assert_eq!(after_growth, fresh);
        // Re-asking for a smaller size must serve from the grown tables.
        assert_eq!(grown.count_ssl(5).unwrap(), 3);
    }

    #[test]
    fn clamped_tables_match_full() {
        let mut engine = CountEngine::<u64>::new();
        engine.ensure(TableKind::Blocks, 8, 3).unwrap();
        let clamped = engine.table(TableKind::Blocks).unwrap();
        let full = block_table::<u64>(8).unwrap();
        for h in 0..=8 {
            for k in 0..=3.min(max_inversions(h)) {
                assert_eq!(clamped.get(h, k), full.get(h, k), "b({h}, {k})");
            }
        }
    }

    #[test]
    fn scalar_instantiations_agree() {
        let narrow = block_table::<u64>(8).unwrap();
        let wide = block_table::<Nat>(8).unwrap();
        for (h, k, v) in narrow.stored() {
            assert_eq!(Nat::from(*v), wide.get(h, k).unwrap());
        }
    }

    #[test]
    fn validate_accepts_built_tables() {
        let mut engine = CountEngine::<Nat>::new();
        engine.ensure(TableKind::Blocks, 10, max_inversions(10)).unwrap();
        engine.validate().unwrap();
    }

    #[test]
    fn inversion_polynomial_shape() {
        let g = InversionPolynomial::<u64>::mahonian(4);
        assert_eq!(g.degree(), 4);
        assert_eq!(g.coefficients(), &[1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(g.coefficient(2), 5);
        assert_eq!(g.coefficient(7), 0);
        let empty = InversionPolynomial::<u64>::mahonian(0);
        assert_eq!(empty.coefficients(), &[1]);
    }

    #[test]
    fn table_kind_codes() {
        for kind in TableKind::ALL {
            assert_eq!(kind.code().parse::<TableKind>().unwrap(), kind);
        }
        assert!("x".parse::<TableKind>().is_err());
    }
}
