//! Canonical labeling of matroids.
//!
//! A canonical form is the relabeled bases family that is least among all
//! relabelings consistent with a refined, isomorphism-invariant colouring of
//! the elements. Bases are compared as masks (colex order of the sets), and
//! the family as its sorted list of masks. Two matroids get equal forms iff
//! they are isomorphic.
//!
//! The search assigns new labels `0, 1, ..` one at a time. After `k` labels
//! are placed, the images of the bases lying inside the placed elements are
//! exactly the masks below `2^k` of the final list, so partial labelings are
//! compared against the incumbent and pruned early. Candidates that are clones
//! of one already tried at the same node lead to identical subtrees and are
//! skipped. Worst-case cost is the product of the colour-class factorials; in
//! practice the pruning keeps `n <= 9` cheap.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::matroid::Matroid;
use crate::set::ElementSet;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    n: usize,
    rank: usize,
    bases: Vec<ElementSet>,
    relabeling: Vec<usize>,
}

/// Hashable identity of a canonical form (ignores the relabeling).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub n: u8,
    pub rank: u8,
    pub bases: Vec<u16>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical bases, sorted by mask.
    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    /// `relabeling[old] = new`.
    pub fn relabeling(&self) -> &[usize] {
        &self.relabeling
    }

    pub fn key(&self) -> CanonicalKey {
        CanonicalKey {
            n: self.n as u8,
            rank: self.rank as u8,
            bases: self.bases.iter().map(|b| b.bits()).collect(),
        }
    }

    /// The canonically labeled matroid.
    pub fn to_matroid(&self) -> Matroid {
        Matroid::from_masks_unchecked(self.n, self.rank, self.bases.iter().map(|b| b.bits()).collect())
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank == other.rank && self.bases == other.bases
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl CanonicalKey {
    pub fn to_matroid(&self) -> Matroid {
        Matroid::from_masks_unchecked(self.n as usize, self.rank as usize, self.bases.clone())
    }
}

pub fn canonical_form(m: &Matroid) -> &CanonicalForm {
    m.canonical_form()
}

pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> bool {
    if a.n() != b.n() || a.rank() != b.rank() || a.num_bases() != b.num_bases() {
        return false;
    }
    a.canonical_form() == b.canonical_form()
}

pub(crate) fn compute(m: &Matroid) -> CanonicalForm {
    let n = m.n();
    let colors = refined_colors(m);
    // position k of the canonical labeling must hold an element of colour cell_of[k]
    let mut cell_of: Vec<usize> = colors.clone();
    cell_of.sort_unstable();

    let masks: Vec<u16> = m.basis_masks().collect();
    let clones = clone_matrix(m, &masks);

    let mut search = Search {
        n,
        colors: &colors,
        cell_of: &cell_of,
        masks: &masks,
        clones: &clones,
        perm: vec![usize::MAX; n],
        images: Vec::with_capacity(masks.len()),
        best: None,
    };
    // the empty basis of a rank-0 matroid is fixed by every labeling
    if masks.first() == Some(&0) {
        search.images.push(0);
    }
    search.descend(0, 0);
    let (best_images, relabeling) = search.best.expect("search always reaches a leaf");
    CanonicalForm {
        n,
        rank: m.rank(),
        bases: best_images.into_iter().map(|b| ElementSet::from_bits_unchecked(b, n)).collect(),
        relabeling,
    }
}

struct Search<'a> {
    n: usize,
    colors: &'a [usize],
    cell_of: &'a [usize],
    masks: &'a [u16],
    clones: &'a [Vec<bool>],
    perm: Vec<usize>,
    images: Vec<u16>,
    best: Option<(Vec<u16>, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, placed: u16) {
        if depth == self.n {
            let better = match &self.best {
                None => true,
                Some((best, _)) => self.images < *best,
            };
            if better {
                self.best = Some((self.images.clone(), self.perm.clone()));
            }
            return;
        }
        let cell = self.cell_of[depth];
        let mut tried: Vec<usize> = Vec::new();
        for e in 0..self.n {
            if placed & (1 << e) != 0 || self.colors[e] != cell {
                continue;
            }
            if tried.iter().any(|&t| self.clones[t][e]) {
                continue;
            }
            tried.push(e);

            let now = placed | (1 << e);
            self.perm[e] = depth;
            let before = self.images.len();
            for &b in self.masks {
                if b & (1 << e) != 0 && b & !now == 0 {
                    let mut img = 0u16;
                    let mut rest = b;
                    while rest != 0 {
                        let x = rest.trailing_zeros() as usize;
                        img |= 1 << self.perm[x];
                        rest &= rest - 1;
                    }
                    self.images.push(img);
                }
            }
            self.images[before..].sort_unstable();

            if !self.worse_than_best(depth + 1) {
                self.descend(depth + 1, now);
            }
            self.images.truncate(before);
            self.perm[e] = usize::MAX;
        }
    }

    /// Compares the images placed so far with the incumbent's masks below `2^placed`.
    fn worse_than_best(&self, placed: usize) -> bool {
        let Some((best, _)) = &self.best else {
            return false;
        };
        let limit = 1u32 << placed;
        let best_prefix = &best[..best.partition_point(|&b| (b as u32) < limit)];
        // The family holding the least mask of the symmetric difference wins.
        let (mut i, mut j) = (0, 0);
        let ours = &self.images;
        while i < ours.len() && j < best_prefix.len() {
            match ours[i].cmp(&best_prefix[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => return true,
            }
        }
        // leftovers on our side mean we hold an extra small mask
        i == ours.len() && j < best_prefix.len()
    }
}

/// `clones[a][b]` iff swapping `a` and `b` maps bases onto bases.
#[allow(clippy::needless_range_loop)]
pub(crate) fn clone_matrix(m: &Matroid, masks: &[u16]) -> Vec<Vec<bool>> {
    let n = m.n();
    let mut sorted = masks.to_vec();
    sorted.sort_unstable();
    let mut out = vec![vec![false; n]; n];
    for a in 0..n {
        out[a][a] = true;
        for b in (a + 1)..n {
            let pair = (1u16 << a) | (1u16 << b);
            let ok = masks.iter().all(|&basis| {
                let hit = basis & pair;
                hit == 0 || hit == pair || sorted.binary_search(&(basis ^ pair)).is_ok()
            });
            out[a][b] = ok;
            out[b][a] = ok;
        }
    }
    out
}

/// Isomorphism-invariant element colours, refined through circuit incidence
/// until the partition stops splitting.
fn refined_colors(m: &Matroid) -> Vec<usize> {
    let n = m.n();
    let circuits = m.circuits();
    let loops = m.loops();
    let coloops = m.coloops();
    let initial: Vec<Vec<u64>> = (0..n)
        .map(|e| {
            let mut sig = vec![
                loops.contains(e) as u64,
                coloops.contains(e) as u64,
                m.bases().iter().filter(|b| b.contains(e)).count() as u64,
            ];
            let mut by_size = vec![0u64; n + 1];
            for c in circuits.iter().filter(|c| c.contains(e)) {
                by_size[c.len()] += 1;
            }
            sig.extend(by_size);
            sig
        })
        .collect();
    let mut colors = rank_signatures(&initial);
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|e| {
                let mut around: Vec<Vec<usize>> = circuits
                    .iter()
                    .filter(|c| c.contains(e))
                    .map(|c| {
                        let mut cs: Vec<usize> = c.iter().map(|x| colors[x]).collect();
                        cs.sort_unstable();
                        cs
                    })
                    .collect();
                around.sort_unstable();
                (colors[e], around)
            })
            .collect();
        let next = rank_signatures(&sigs);
        let next_classes = count_classes(&next);
        if next_classes == classes {
            return colors;
        }
        colors = next;
        classes = next_classes;
    }
}

fn rank_signatures<T: Ord + Clone + Hash>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    let index: HashMap<&T, usize> = distinct.iter().enumerate().map(|(i, s)| (s, i)).collect();
    sigs.iter().map(|s| index[s]).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
