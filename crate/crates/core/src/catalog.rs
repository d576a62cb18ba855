//! Exhaustive catalogs of small matroids.
//!
//! Labeled catalogs hold every matroid on `{0, .., n-1}` (n <= 6), found by a
//! brute-force search over bases families. Representative catalogs hold one
//! canonically labeled matroid per isomorphism class; they are built either by
//! deduplicating the labeled catalog or by single-element extension, and the
//! two routes are cross-checked.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::CanonicalKey;
use crate::format::{numbered_lines, parse_block, ParseError};
use crate::matroid::Matroid;
use crate::set::{k_subsets, ElementSet};

/// Largest ground set for the brute-force labeled enumeration.
pub const LABELED_MAX_N: usize = 6;
/// Largest ground set for representative catalogs.
pub const REPR_MAX_N: usize = 8;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("n = {n} exceeds the limit {max} for this operation")]
    BoundsViolated { n: usize, max: usize },
    #[error("rank {r} exceeds n = {n}")]
    BadRank { n: usize, r: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("header announces {expected} matroids but the file holds {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ParseError> for CatalogError {
    fn from(e: ParseError) -> Self {
        let line = e.line();
        let reason = match e {
            ParseError::Syntax { reason, .. } => reason,
            ParseError::Invalid { source, .. } => format!("invalid matroid: {source}"),
        };
        CatalogError::Parse { line, reason }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogMode {
    Labeled,
    Representatives,
}

impl CatalogMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CatalogMode::Labeled => "labeled",
            CatalogMode::Representatives => "repr",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "labeled" => Some(CatalogMode::Labeled),
            "repr" => Some(CatalogMode::Representatives),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub n: usize,
    pub mode: CatalogMode,
    pub entries: Vec<Matroid>,
}

/// Every matroid of rank `r` on `{0, .., n-1}`.
///
/// Families of `r`-subsets are decided one subset at a time in increasing
/// mask order. Each exchange requirement "`B1`, `B2` present, `e` in
/// `B1 - B2`, so some `B1 - e + f` is present" is checked as soon as every
/// subset it mentions has been decided. Together the requirements are the
/// exchange axiom, so the leaves are exactly the matroids; each is also
/// re-validated.
pub fn brute_force_labeled(n: usize, r: usize) -> Result<Vec<Matroid>, CatalogError> {
    if n > LABELED_MAX_N {
        return Err(CatalogError::BoundsViolated { n, max: LABELED_MAX_N });
    }
    if r > n {
        return Err(CatalogError::BadRank { n, r });
    }
    let subsets: Vec<u16> = k_subsets(n, r).collect();
    let index = |mask: u16| subsets.binary_search(&mask).expect("an r-subset");

    // requirements[k]: (a, b, alternatives) whose last mentioned subset is k
    let mut requirements: Vec<Vec<(usize, usize, u64)>> = vec![Vec::new(); subsets.len()];
    for (a, &b1) in subsets.iter().enumerate() {
        for (b, &b2) in subsets.iter().enumerate() {
            let only1 = b1 & !b2;
            let only2 = b2 & !b1;
            for e in ElementSet::from_bits_unchecked(only1, n) {
                let mut alternatives = 0u64;
                for f in ElementSet::from_bits_unchecked(only2, n) {
                    alternatives |= 1 << index((b1 & !(1 << e)) | (1 << f));
                }
                let last = (63 - alternatives.leading_zeros() as usize).max(a).max(b);
                requirements[last].push((a, b, alternatives));
            }
        }
    }

    let mut found = Vec::new();
    enumerate_families(0, 0, &requirements, &mut found);
    let out = found
        .into_iter()
        .map(|family| {
            let bases = (0..subsets.len())
                .filter(|&i| family & (1 << i) != 0)
                .map(|i| ElementSet::from_bits_unchecked(subsets[i], n))
                .collect();
            Matroid::new(n, r, bases).expect("enumerated family satisfies basis exchange")
        })
        .collect::<Vec<_>>();
    let mut out = out;
    out.sort();
    Ok(out)
}

fn enumerate_families(k: usize, family: u64, requirements: &[Vec<(usize, usize, u64)>], out: &mut Vec<u64>) {
    if k == requirements.len() {
        if family != 0 {
            out.push(family);
        }
        return;
    }
    for include in [false, true] {
        let next = if include { family | (1 << k) } else { family };
        let ok = requirements[k].iter().all(|&(a, b, alt)| {
            next & (1 << a) == 0 || next & (1 << b) == 0 || next & alt != 0
        });
        if ok {
            enumerate_families(k + 1, next, requirements, out);
        }
    }
}

/// All labeled matroids on `n` elements, every rank, sorted.
pub fn labeled_catalog(n: usize) -> Result<Catalog, CatalogError> {
    if n > LABELED_MAX_N {
        return Err(CatalogError::BoundsViolated { n, max: LABELED_MAX_N });
    }
    let per_rank: Vec<Vec<Matroid>> =
        (0..=n).into_par_iter().map(|r| brute_force_labeled(n, r)).collect::<Result<_, _>>()?;
    let mut entries: Vec<Matroid> = per_rank.into_iter().flatten().collect();
    entries.sort();
    Ok(Catalog { n, mode: CatalogMode::Labeled, entries })
}

fn sorted_representatives(keys: impl IntoIterator<Item = CanonicalKey>) -> Vec<Matroid> {
    let mut out: Vec<Matroid> = keys.into_iter().map(|k| k.to_matroid()).collect();
    out.sort();
    out
}

/// Isomorph-free representatives obtained by canonizing the labeled catalog.
pub fn representatives_by_dedup(n: usize) -> Result<Catalog, CatalogError> {
    let labeled = labeled_catalog(n)?;
    let keys: HashSet<CanonicalKey> = labeled.entries.par_iter().map(|m| m.canonical_form().key()).collect();
    Ok(Catalog { n, mode: CatalogMode::Representatives, entries: sorted_representatives(keys) })
}

/// Isomorph-free representatives built from the empty matroid by repeated
/// single-element extension (including coloops), with canonical-form
/// rejection of duplicates.
pub fn representatives_by_extension(n: usize) -> Result<Catalog, CatalogError> {
    if n > REPR_MAX_N {
        return Err(CatalogError::BoundsViolated { n, max: REPR_MAX_N });
    }
    let mut layer = vec![Matroid::new(0, 0, vec![ElementSet::empty(0)]).expect("the empty matroid")];
    for _ in 0..n {
        layer = extend_layer(&layer);
    }
    Ok(Catalog { n, mode: CatalogMode::Representatives, entries: layer })
}

fn extend_layer(layer: &[Matroid]) -> Vec<Matroid> {
    let keys: HashSet<CanonicalKey> = layer
        .par_iter()
        .flat_map_iter(|m| single_element_extensions(m).into_iter().map(|x| x.canonical_form().key()))
        .collect();
    sorted_representatives(keys)
}

/// Representatives for `n <= 8`: deduplication of the labeled catalog when
/// `n <= 6`, extension of the `(n-1)`-representatives otherwise.
pub fn generate_representatives(n: usize) -> Result<Catalog, CatalogError> {
    if n > REPR_MAX_N {
        return Err(CatalogError::BoundsViolated { n, max: REPR_MAX_N });
    }
    if n <= LABELED_MAX_N {
        return representatives_by_dedup(n);
    }
    let previous = generate_representatives(n - 1)?;
    Ok(Catalog { n, mode: CatalogMode::Representatives, entries: extend_layer(&previous.entries) })
}

/// Every single-element extension of `M` by a new element `n`: one per
/// linear subclass of hyperplanes (the empty subclass gives the free
/// extension, the full one a loop), plus the coloop extension.
pub fn single_element_extensions(m: &Matroid) -> Vec<Matroid> {
    let n = m.n();
    let r = m.rank();
    let new = 1u16 << n;
    let mut out = Vec::new();
    out.push(Matroid::from_masks_trusted(n + 1, r + 1, m.basis_masks().map(|b| b | new).collect()));
    if r == 0 {
        out.push(Matroid::from_masks_trusted(n + 1, 0, vec![0]));
        return out;
    }
    let hyperplanes: Vec<u16> = m.hyperplanes().iter().map(|h| h.bits()).collect();
    // independent (r-1)-sets grouped by the hyperplane they span
    let mut spanning_sets: Vec<Vec<u16>> = vec![Vec::new(); hyperplanes.len()];
    for i in k_subsets(n, r - 1) {
        if m.rank_of_mask(i) == r - 1 {
            let h = m.closure_mask(i);
            let pos = hyperplanes.iter().position(|&x| x == h).expect("closure is a hyperplane");
            spanning_sets[pos].push(i);
        }
    }
    for subclass in linear_subclasses(m, &hyperplanes) {
        let mut masks: Vec<u16> = m.basis_masks().collect();
        for (k, sets) in spanning_sets.iter().enumerate() {
            if subclass & (1 << k) == 0 {
                masks.extend(sets.iter().map(|&i| i | new));
            }
        }
        out.push(Matroid::from_masks_trusted(n + 1, r, masks));
    }
    out
}

/// Subsets of the hyperplanes (as bitmasks over their positions) such that any
/// two members meeting in a rank `r-2` flat force every hyperplane through
/// that flat into the subclass.
pub fn linear_subclasses(m: &Matroid, hyperplanes: &[u16]) -> Vec<u64> {
    assert!(hyperplanes.len() <= 64, "too many hyperplanes for a 64-bit subclass mask");
    let r = m.rank();
    let colines: Vec<u64> = if r >= 2 {
        m.flats_of_rank(r - 2)
            .iter()
            .map(|l| {
                hyperplanes
                    .iter()
                    .enumerate()
                    .filter(|(_, &h)| h & l.bits() == l.bits())
                    .fold(0u64, |acc, (k, _)| acc | (1 << k))
            })
            .filter(|above| above.count_ones() >= 3)
            .collect()
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    subclass_search(0, 0, hyperplanes.len(), &colines, &mut out);
    out
}

fn subclass_search(k: usize, chosen: u64, total: usize, colines: &[u64], out: &mut Vec<u64>) {
    let decided = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    // a coline with two chosen hyperplanes and an excluded one is violated
    let violated = colines.iter().any(|&above| {
        let inside = above & chosen;
        let excluded = above & decided & !chosen;
        inside.count_ones() >= 2 && excluded != 0
    });
    if violated {
        return;
    }
    if k == total {
        out.push(chosen);
        return;
    }
    subclass_search(k + 1, chosen, total, colines, out);
    subclass_search(k + 1, chosen | (1 << k), total, colines, out);
}

/// Ordered pairs `(i, j)` of catalog positions with equal rank and
/// `bases(entries[j])` a proper subset of `bases(entries[i])`, in
/// lexicographic order of positions.
pub fn weak_pairs(catalog: &Catalog) -> Vec<(usize, usize)> {
    weak_pairs_of(&catalog.entries)
}

pub fn weak_pairs_of(entries: &[Matroid]) -> Vec<(usize, usize)> {
    let sorted: Vec<Vec<u16>> = entries
        .iter()
        .map(|m| {
            let mut v: Vec<u16> = m.basis_masks().collect();
            v.sort_unstable();
            v
        })
        .collect();
    let contains = |big: &[u16], small: &[u16]| {
        let mut i = 0;
        small.iter().all(|x| {
            while i < big.len() && big[i] < *x {
                i += 1;
            }
            i < big.len() && big[i] == *x
        })
    };
    (0..entries.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let sorted = &sorted;
            (0..entries.len())
                .filter(move |&j| {
                    let (m, n) = (&entries[i], &entries[j]);
                    m.n() == n.n()
                        && m.rank() == n.rank()
                        && sorted[j].len() < sorted[i].len()
                        && contains(&sorted[i], &sorted[j])
                })
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Number of permutations of the ground set fixing the bases family.
pub fn automorphism_count(m: &Matroid) -> usize {
    let n = m.n();
    let mut masks: Vec<u16> = m.basis_masks().collect();
    masks.sort_unstable();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permutations(&mut perm, 0, &mut |p| {
        let mut image: Vec<u16> = masks.iter().map(|&b| ElementSet::from_bits_unchecked(b, n).permuted(p).bits()).collect();
        image.sort_unstable();
        if image == masks {
            count += 1;
        }
    });
    count
}

fn permutations(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Groups a labeled catalog by isomorphism class.
pub fn orbit_sizes(labeled: &Catalog) -> BTreeMap<CanonicalKey, usize> {
    let mut out = BTreeMap::new();
    for m in &labeled.entries {
        *out.entry(m.canonical_form().key()).or_insert(0) += 1;
    }
    out
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Header line followed by matroid blocks separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "catalog n={} mode={} count={}", self.n, self.mode.as_str(), self.entries.len()).unwrap();
        for (i, m) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&m.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Catalog, CatalogError> {
        if !text.is_empty() && !text.ends_with('\n') {
            let last = text.lines().count();
            return Err(CatalogError::Parse { line: last, reason: "missing final newline".into() });
        }
        let mut lines = numbered_lines(text).peekable();
        let Some((_, header)) = lines.next() else {
            return Err(CatalogError::Parse { line: 1, reason: "empty file".into() });
        };
        let (n, mode, count) = parse_header(header).ok_or_else(|| CatalogError::Parse {
            line: 1,
            reason: "header must be `catalog n=<n> mode=<labeled|repr> count=<k>`".into(),
        })?;
        let mut entries = Vec::with_capacity(count);
        loop {
            if !entries.is_empty() {
                match lines.next() {
                    None => break,
                    Some((_, "")) => {}
                    Some((no, _)) => {
                        return Err(CatalogError::Parse { line: no, reason: "expected a blank separator line".into() })
                    }
                }
            }
            let start = lines.peek().map(|(no, _)| *no);
            match parse_block(&mut lines, true)? {
                None => break,
                Some(m) => {
                    if m.n() != n {
                        return Err(CatalogError::Parse {
                            line: start.unwrap_or(0),
                            reason: format!("matroid on {} elements in a catalog for n={n}", m.n()),
                        });
                    }
                    entries.push(m);
                }
            }
        }
        if entries.len() != count {
            return Err(CatalogError::CountMismatch { expected: count, found: entries.len() });
        }
        Ok(Catalog { n, mode, entries })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CatalogError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        Catalog::from_text(&std::fs::read_to_string(path)?)
    }
}

fn parse_header(line: &str) -> Option<(usize, CatalogMode, usize)> {
    let mut parts = line.split(' ');
    if parts.next()? != "catalog" {
        return None;
    }
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    let mode = CatalogMode::parse(parts.next()?.strip_prefix("mode=")?)?;
    let count = parts.next()?.strip_prefix("count=")?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((n, mode, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::uniform;

    #[test]
    fn rank_one_on_two_elements() {
        let all = brute_force_labeled(2, 1).unwrap();
        let families: Vec<Vec<u16>> = all.iter().map(|m| m.basis_masks().collect()).collect();
        assert_eq!(families, vec![vec![0b01], vec![0b01, 0b10], vec![0b10]]);
    }

    #[test]
    fn extreme_ranks_are_unique() {
        for n in 0..=5 {
            assert_eq!(brute_force_labeled(n, 0).unwrap().len(), 1);
            assert_eq!(brute_force_labeled(n, n).unwrap().len(), 1);
        }
        assert!(matches!(brute_force_labeled(7, 2), Err(CatalogError::BoundsViolated { .. })));
    }

    #[test]
    fn brute_force_matches_filtering_every_family() {
        // independent oracle: test all nonempty families with the exchange checker
        for n in 0..=4 {
            for r in 0..=n {
                let subsets: Vec<u16> = k_subsets(n, r).collect();
                let mut expected = Vec::new();
                for family in 1u64..(1 << subsets.len()) {
                    let bases = (0..subsets.len())
                        .filter(|&i| family & (1 << i) != 0)
                        .map(|i| ElementSet::from_bits_unchecked(subsets[i], n))
                        .collect();
                    if let Ok(m) = Matroid::new(n, r, bases) {
                        expected.push(m);
                    }
                }
                expected.sort();
                assert_eq!(brute_force_labeled(n, r).unwrap(), expected, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn two_element_representatives() {
        let reps = generate_representatives(2).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps.entries.iter().all(|m| m.check_exchange().is_ok()));
    }

    #[test]
    fn extension_agrees_with_dedup_small() {
        for n in 0..=5 {
            assert_eq!(representatives_by_extension(n).unwrap(), representatives_by_dedup(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn extensions_are_matroids_and_include_free_and_loop() {
        let m = uniform(2, 3).unwrap();
        let ext = single_element_extensions(&m);
        assert!(ext.iter().all(|x| x.check_exchange().is_ok()));
        assert!(ext.contains(&uniform(2, 4).unwrap()));
        assert!(ext.iter().any(|x| x.is_loop(3) && x.rank() == 2));
        assert!(ext.iter().any(|x| x.is_coloop(3) && x.rank() == 3));
    }

    #[test]
    fn weak_pairs_on_two_elements() {
        let cat = labeled_catalog(2).unwrap();
        let pairs = weak_pairs(&cat);
        assert_eq!(pairs.len(), 2);
        for (i, j) in pairs {
            assert_eq!(cat.entries[i], uniform(1, 2).unwrap());
            assert_eq!(cat.entries[j].num_bases(), 1);
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let cat = generate_representatives(4).unwrap();
        let text = cat.to_text();
        assert_eq!(Catalog::from_text(&text).unwrap(), cat);

        let cut = text.rsplit_once("\n\n").unwrap().0.to_string() + "\n";
        assert!(matches!(Catalog::from_text(&cut), Err(CatalogError::CountMismatch { .. })));

        let bad = "catalog n=4 mode=labeled count=1\n4 2\n0 1\n2 3\n";
        assert!(matches!(Catalog::from_text(bad), Err(CatalogError::Parse { .. })));
        assert!(matches!(Catalog::from_text("catalog n=4 mode=odd count=0\n"), Err(CatalogError::Parse { line: 1, .. })));
    }

    #[test]
    fn rank_zero_blocks_round_trip() {
        let cat = labeled_catalog(2).unwrap();
        assert_eq!(cat.entries[0].rank(), 0);
        assert_eq!(Catalog::from_text(&cat.to_text()).unwrap(), cat);
    }

    #[test]
    fn automorphisms_of_uniform() {
        assert_eq!(automorphism_count(&uniform(2, 4).unwrap()), 24);
    }
}
