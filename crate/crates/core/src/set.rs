//! Subsets of a ground set of at most sixteen elements, stored as one word.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 16;

/// A subset of `{0, .., universe - 1}`.
///
/// Ordering is lexicographic on the increasing index lists, which is the
/// order used by the matroid text format.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: u16,
    universe: u8,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        assert!(universe <= MAX_ELEMENTS, "universe {universe} exceeds {MAX_ELEMENTS}");
        ElementSet { bits: 0, universe: universe as u8 }
    }

    pub fn full(universe: usize) -> Self {
        assert!(universe <= MAX_ELEMENTS, "universe {universe} exceeds {MAX_ELEMENTS}");
        ElementSet { bits: full_mask(universe), universe: universe as u8 }
    }

    /// Builds a set from a raw mask. Returns `None` if a bit lies outside the universe.
    pub fn from_bits(bits: u16, universe: usize) -> Option<Self> {
        if universe > MAX_ELEMENTS || bits & !full_mask(universe) != 0 {
            return None;
        }
        Some(ElementSet { bits, universe: universe as u8 })
    }

    /// Builds a set from indices. Returns `None` if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Option<Self> {
        let mut bits = 0u16;
        for i in indices {
            if i >= universe || universe > MAX_ELEMENTS {
                return None;
            }
            bits |= 1 << i;
        }
        Some(ElementSet { bits, universe: universe as u8 })
    }

    pub(crate) fn from_bits_unchecked(bits: u16, universe: usize) -> Self {
        debug_assert!(bits & !full_mask(universe) == 0);
        ElementSet { bits, universe: universe as u8 }
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.bits
    }

    #[inline]
    pub fn universe(self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.bits & (1 << e) != 0
    }

    pub fn with(self, e: usize) -> Self {
        assert!(e < self.universe(), "element {e} outside universe {}", self.universe);
        ElementSet { bits: self.bits | (1 << e), ..self }
    }

    pub fn without(self, e: usize) -> Self {
        if e >= MAX_ELEMENTS {
            return self;
        }
        ElementSet { bits: self.bits & !(1 << e), ..self }
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet { bits: self.bits | other.bits, universe: self.universe.max(other.universe) }
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet { bits: self.bits & other.bits, ..self }
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet { bits: self.bits & !other.bits, ..self }
    }

    pub fn complement(self) -> Self {
        ElementSet { bits: !self.bits & full_mask(self.universe()), ..self }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn min_element(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// All subsets of this set, including the empty set and the set itself.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let universe = self.universe;
        let mask = self.bits;
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some(cur.wrapping_sub(mask) & mask) };
            Some(ElementSet { bits: cur, universe })
        })
    }

    /// Applies `perm` (old index to new index) to every element.
    pub fn permuted(self, perm: &[usize]) -> Self {
        let mut bits = 0u16;
        for e in self.iter() {
            bits |= 1 << perm[e];
        }
        ElementSet { bits, universe: self.universe }
    }

    /// Re-expresses the set in a universe of a different size. Elements must fit.
    pub fn in_universe(self, universe: usize) -> Option<Self> {
        Self::from_bits(self.bits, universe)
    }
}

/// All `k`-subsets of `{0, .., n - 1}` as raw masks, in increasing mask order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u16> {
    let limit: u32 = 1 << n;
    let mut next: Option<u32> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u32 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur as u16)
    })
}

#[inline]
pub(crate) fn full_mask(universe: usize) -> u16 {
    if universe >= 16 {
        u16::MAX
    } else {
        (1u16 << universe) - 1
    }
}

/// Iterator over the elements of an [`ElementSet`].
#[derive(Clone, Debug)]
pub struct Elements {
    bits: u16,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let e = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

/// Lexicographic comparison of increasing index lists, on raw masks.
pub(crate) fn lex_cmp(a: u16, b: u16) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let d = diff.trailing_zeros();
    let above = if d >= 15 { 0 } else { !((1u16 << (d + 1)) - 1) };
    if a & (1 << d) != 0 {
        // `a` has the first differing index; it is smaller unless `b` ran out first.
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self.bits, other.bits).then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}
