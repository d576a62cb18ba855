//! The matroid value type, its axiomatic validation and the derived oracles
//! (rank, closure, circuits, flats, cyclic flats, loops and coloops).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use thiserror::Error;

use crate::canonical::{self, CanonicalForm};
use crate::set::{full_mask, lex_cmp, ElementSet, MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("the bases family is empty")]
    EmptyFamily,
    #[error("set {{{set}}} has cardinality {} but the rank is {rank}", .set.len())]
    WrongCardinality { set: ElementSet, rank: usize },
    #[error("basis exchange fails for B1={{{first}}}, B2={{{second}}}, e={element}")]
    ExchangeViolated { first: ElementSet, second: ElementSet, element: usize },
    #[error("need 0 <= r <= n <= 16, got n={n}, r={r}")]
    BoundsViolated { n: usize, r: usize },
    #[error("set {{{0}}} does not fit the ground set")]
    OutOfUniverse(ElementSet),
}

impl MatroidError {
    /// The variant name, e.g. `ExchangeViolated`.
    pub fn kind(&self) -> &'static str {
        match self {
            MatroidError::EmptyFamily => "EmptyFamily",
            MatroidError::WrongCardinality { .. } => "WrongCardinality",
            MatroidError::ExchangeViolated { .. } => "ExchangeViolated",
            MatroidError::BoundsViolated { .. } => "BoundsViolated",
            MatroidError::OutOfUniverse(_) => "OutOfUniverse",
        }
    }
}

/// A matroid on `{0, .., n - 1}` given by its bases.
///
/// The bases are kept sorted lexicographically and free of duplicates. Derived
/// structure is computed on first use and cached; the value never changes
/// after construction, so it can be shared freely between threads.
#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<ElementSet>,
    derived: Derived,
}

#[derive(Clone, Default)]
struct Derived {
    rank_table: OnceLock<Vec<u8>>,
    circuits: OnceLock<Vec<ElementSet>>,
    flats: OnceLock<Vec<Vec<ElementSet>>>,
    cyclic_flats: OnceLock<Vec<ElementSet>>,
    canonical: OnceLock<CanonicalForm>,
}

/// Checks the basis axioms and builds the matroid.
pub fn validate(n: usize, r: usize, bases: Vec<ElementSet>) -> Result<Matroid, MatroidError> {
    Matroid::new(n, r, bases)
}

impl Matroid {
    pub fn new(n: usize, r: usize, bases: Vec<ElementSet>) -> Result<Self, MatroidError> {
        let m = Self::checked_family(n, r, bases)?;
        m.check_exchange()?;
        Ok(m)
    }

    /// Builds a value from a bases family without checking the exchange axiom.
    ///
    /// Every oracle is still well defined (rank is `max |B ∩ A|`), but none of
    /// the matroid identities need hold. Meant for fault injection in tests.
    pub fn from_bases_unchecked(n: usize, r: usize, bases: Vec<ElementSet>) -> Result<Self, MatroidError> {
        Self::checked_family(n, r, bases)
    }

    /// Builds from raw masks known to form a valid bases family.
    pub(crate) fn from_masks_trusted(n: usize, r: usize, mut masks: Vec<u16>) -> Self {
        masks.sort_unstable_by(|a, b| lex_cmp(*a, *b));
        masks.dedup();
        let bases = masks.into_iter().map(|b| ElementSet::from_bits_unchecked(b, n)).collect();
        let m = Matroid { n, rank: r, bases, derived: Derived::default() };
        debug_assert!(m.check_exchange().is_ok(), "trusted family is not a matroid: {m:?}");
        m
    }

    fn checked_family(n: usize, r: usize, bases: Vec<ElementSet>) -> Result<Self, MatroidError> {
        if n > MAX_ELEMENTS || r > n {
            return Err(MatroidError::BoundsViolated { n, r });
        }
        if bases.is_empty() {
            return Err(MatroidError::EmptyFamily);
        }
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            if b.bits() & !full_mask(n) != 0 {
                return Err(MatroidError::OutOfUniverse(b));
            }
            if b.len() != r {
                return Err(MatroidError::WrongCardinality { set: b, rank: r });
            }
            masks.push(b.bits());
        }
        masks.sort_unstable_by(|a, b| lex_cmp(*a, *b));
        masks.dedup();
        let bases = masks.into_iter().map(|b| ElementSet::from_bits_unchecked(b, n)).collect();
        Ok(Matroid { n, rank: r, bases, derived: Derived::default() })
    }

    /// Exhaustive basis-exchange check; reports the first violation found.
    pub fn check_exchange(&self) -> Result<(), MatroidError> {
        let mut sorted: Vec<u16> = self.bases.iter().map(|b| b.bits()).collect();
        sorted.sort_unstable();
        let is_basis = |m: u16| sorted.binary_search(&m).is_ok();
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                let only1 = b1.bits() & !b2.bits();
                let only2 = b2.bits() & !b1.bits();
                for e in ElementSet::from_bits_unchecked(only1, self.n) {
                    let base = b1.bits() & !(1 << e);
                    let ok = ElementSet::from_bits_unchecked(only2, self.n)
                        .iter()
                        .any(|f| is_basis(base | (1 << f)));
                    if !ok {
                        return Err(MatroidError::ExchangeViolated { first: b1, second: b2, element: e });
                    }
                }
            }
        }
        Ok(())
    }

    /// Size of the ground set.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|E| - r`.
    pub fn nullity(&self) -> usize {
        self.n - self.rank
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn ground_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }

    /// Forces every lazily derived structure.
    pub fn prepare(&self) -> &Self {
        self.rank_table();
        self.circuits();
        self.all_flats();
        self.cyclic_flats();
        self
    }

    fn rank_table(&self) -> &[u8] {
        self.derived.rank_table.get_or_init(|| {
            let size = 1usize << self.n;
            let mut independent = vec![false; size];
            for b in &self.bases {
                independent[b.bits() as usize] = true;
            }
            for a in (0..size).rev() {
                if independent[a] {
                    let mut rest = a;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        independent[a & !low] = true;
                        rest &= rest - 1;
                    }
                }
            }
            let mut rank = vec![0u8; size];
            for a in 1..size {
                rank[a] = if independent[a] {
                    a.count_ones() as u8
                } else {
                    let mut best = 0;
                    let mut rest = a;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        best = best.max(rank[a & !low]);
                        rest &= rest - 1;
                    }
                    best
                };
            }
            rank
        })
    }

    /// `r(A) = max |B ∩ A|` over bases.
    #[inline]
    pub fn rank_of(&self, a: ElementSet) -> usize {
        self.rank_of_mask(a.bits())
    }

    #[inline]
    pub(crate) fn rank_of_mask(&self, a: u16) -> usize {
        self.rank_table()[a as usize] as usize
    }

    /// Rank by direct scan over the bases, bypassing the memo table.
    pub fn rank_by_scan(&self, a: ElementSet) -> usize {
        self.bases.iter().map(|b| b.intersection(a).len()).max().unwrap_or(0)
    }

    pub fn is_independent(&self, a: ElementSet) -> bool {
        self.rank_of(a) == a.len()
    }

    pub fn is_basis(&self, a: ElementSet) -> bool {
        a.len() == self.rank && self.rank_of(a) == self.rank
    }

    pub fn is_spanning(&self, a: ElementSet) -> bool {
        self.rank_of(a) == self.rank
    }

    pub fn is_circuit(&self, a: ElementSet) -> bool {
        !a.is_empty() && self.rank_of(a) + 1 == a.len() && a.iter().all(|e| self.is_independent(a.without(e)))
    }

    /// `{e : r(A ∪ e) = r(A)}`.
    pub fn closure(&self, a: ElementSet) -> ElementSet {
        ElementSet::from_bits_unchecked(self.closure_mask(a.bits()), self.n)
    }

    pub(crate) fn closure_mask(&self, a: u16) -> u16 {
        let table = self.rank_table();
        let ra = table[a as usize];
        let mut cl = a;
        for e in 0..self.n {
            let bit = 1u16 << e;
            if a & bit == 0 && table[(a | bit) as usize] == ra {
                cl |= bit;
            }
        }
        cl
    }

    pub fn is_flat(&self, a: ElementSet) -> bool {
        self.closure_mask(a.bits()) == a.bits()
    }

    /// Minimal dependent sets, in lexicographic order.
    pub fn circuits(&self) -> &[ElementSet] {
        self.derived.circuits.get_or_init(|| {
            let table = self.rank_table();
            let mut out = Vec::new();
            for a in 1..(1u32 << self.n) {
                let a = a as u16;
                let size = a.count_ones() as u8;
                if table[a as usize] + 1 != size {
                    continue;
                }
                let mut rest = a;
                let mut minimal = true;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    if table[(a & !low) as usize] != size - 1 {
                        minimal = false;
                        break;
                    }
                    rest &= rest - 1;
                }
                if minimal {
                    out.push(ElementSet::from_bits_unchecked(a, self.n));
                }
            }
            out.sort();
            out
        })
    }

    fn all_flats(&self) -> &[Vec<ElementSet>] {
        self.derived.flats.get_or_init(|| {
            let mut by_rank = vec![Vec::new(); self.rank + 1];
            for a in 0..(1u32 << self.n) {
                let a = a as u16;
                if self.closure_mask(a) == a {
                    by_rank[self.rank_of_mask(a)].push(ElementSet::from_bits_unchecked(a, self.n));
                }
            }
            for layer in &mut by_rank {
                layer.sort();
            }
            by_rank
        })
    }

    /// Flats of rank exactly `k`, in lexicographic order. Empty when `k > r`.
    pub fn flats_of_rank(&self, k: usize) -> &[ElementSet] {
        self.all_flats().get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn flats(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.all_flats().iter().flatten().copied()
    }

    /// Flats of rank `r - 1`; empty for rank-zero matroids.
    pub fn hyperplanes(&self) -> &[ElementSet] {
        if self.rank == 0 {
            return &[];
        }
        self.flats_of_rank(self.rank - 1)
    }

    /// Flats that are unions of circuits. The empty set qualifies when it is a flat.
    pub fn cyclic_flats(&self) -> &[ElementSet] {
        self.derived.cyclic_flats.get_or_init(|| {
            let circuits = self.circuits();
            let mut out: Vec<ElementSet> = self
                .flats()
                .filter(|&f| {
                    let union = circuits
                        .iter()
                        .filter(|c| c.is_subset(f))
                        .fold(0u16, |acc, c| acc | c.bits());
                    union == f.bits()
                })
                .collect();
            out.sort();
            out
        })
    }

    /// Elements in no basis.
    pub fn loops(&self) -> ElementSet {
        let union = self.bases.iter().fold(0u16, |acc, b| acc | b.bits());
        ElementSet::from_bits_unchecked(!union & full_mask(self.n), self.n)
    }

    /// Elements in every basis.
    pub fn coloops(&self) -> ElementSet {
        let inter = self.bases.iter().fold(full_mask(self.n), |acc, b| acc & b.bits());
        ElementSet::from_bits_unchecked(inter, self.n)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.loops().contains(e)
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.coloops().contains(e)
    }

    /// True iff every circuit through `e` spans the matroid.
    pub fn is_free_element(&self, e: usize) -> bool {
        self.circuits().iter().filter(|c| c.contains(e)).all(|&c| self.rank_of(c) == self.rank)
    }

    /// `{e, f}` is a circuit.
    pub fn are_parallel(&self, e: usize, f: usize) -> bool {
        e != f && self.is_circuit(ElementSet::from_bits_unchecked((1 << e) | (1 << f), self.n))
    }

    /// `{e, f}` is a cocircuit: deleting both drops the rank while neither is a coloop.
    pub fn are_in_series(&self, e: usize, f: usize) -> bool {
        if e == f || self.is_coloop(e) || self.is_coloop(f) {
            return false;
        }
        let pair = (1u16 << e) | (1u16 << f);
        self.rank_of_mask(full_mask(self.n) & !pair) < self.rank
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        self.derived.canonical.get_or_init(|| canonical::compute(self))
    }

    pub fn is_isomorphic(&self, other: &Matroid) -> bool {
        canonical::is_isomorphic(self, other)
    }

    /// Applies a relabeling (old index to new index).
    pub fn relabeled(&self, perm: &[usize]) -> Matroid {
        assert_eq!(perm.len(), self.n, "permutation length");
        let masks = self.bases.iter().map(|b| b.permuted(perm).bits()).collect();
        Matroid::from_masks_unchecked(self.n, self.rank, masks)
    }

    pub(crate) fn from_masks_unchecked(n: usize, r: usize, mut masks: Vec<u16>) -> Self {
        masks.sort_unstable_by(|a, b| lex_cmp(*a, *b));
        masks.dedup();
        let bases = masks.into_iter().map(|b| ElementSet::from_bits_unchecked(b, n)).collect();
        Matroid { n, rank: r, bases, derived: Derived::default() }
    }

    pub(crate) fn basis_masks(&self) -> impl Iterator<Item = u16> + '_ {
        self.bases.iter().map(|b| b.bits())
    }

    /// Serializes in the matroid text format.
    pub fn to_text(&self) -> String {
        crate::format::write_matroid(self)
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank == other.rank && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Hash for Matroid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rank.hash(state);
        for b in &self.bases {
            b.bits().hash(state);
        }
    }
}

impl PartialOrd for Matroid {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matroid {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.rank).cmp(&(other.n, other.rank)).then_with(|| self.bases.cmp(&other.bases))
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, r={}, bases=[", self.n, self.rank)?;
        for (i, b) in self.bases.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b:?}")?;
        }
        f.write_str("])")
    }
}
