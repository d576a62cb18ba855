//! Building matroids: uniform matroids, minors, duals, direct sums,
//! truncation, free extension, relaxation, parallel connection and 2-sum,
//! plus the two worked example matroids.

use thiserror::Error;

use crate::matroid::{Matroid, MatroidError};
use crate::set::{full_mask, k_subsets, ElementSet, MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("construction needs {needed} elements, the limit is {MAX_ELEMENTS}")]
    BoundsViolated { needed: usize },
    #[error("uniform matroid U_{{{r},{n}}} needs 0 <= r <= n")]
    BadUniform { r: usize, n: usize },
    #[error("truncation of a rank-zero matroid")]
    RankZero,
    #[error("{{{0}}} is not a circuit-hyperplane")]
    NotCircuitHyperplane(ElementSet),
    #[error("basepoint {0} is a loop or a coloop")]
    BasepointDegenerate(usize),
    #[error("element {0} is not in the ground set")]
    NoSuchElement(usize),
    #[error(transparent)]
    Invalid(#[from] MatroidError),
}

/// A minor with its element correspondence.
#[derive(Clone, Debug)]
pub struct Minor {
    pub matroid: Matroid,
    /// `kept[new] = old`.
    pub kept: Vec<usize>,
}

impl Minor {
    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.kept.iter().position(|&k| k == old)
    }

    /// Maps a set of the original ground set (restricted to kept elements).
    pub fn map_set(&self, old: ElementSet) -> ElementSet {
        let idx = self.kept.iter().enumerate().filter(|(_, &k)| old.contains(k)).map(|(i, _)| i);
        ElementSet::from_indices(self.kept.len(), idx).expect("indices in range")
    }
}

pub fn uniform(r: usize, n: usize) -> Result<Matroid, ConstructionError> {
    if n > MAX_ELEMENTS {
        return Err(ConstructionError::BoundsViolated { needed: n });
    }
    if r > n {
        return Err(ConstructionError::BadUniform { r, n });
    }
    Ok(Matroid::from_masks_trusted(n, r, k_subsets(n, r).collect()))
}

/// `M ⊕ N`; elements of `N` follow those of `M`.
pub fn direct_sum(m: &Matroid, other: &Matroid) -> Result<Matroid, ConstructionError> {
    let n = m.n() + other.n();
    if n > MAX_ELEMENTS {
        return Err(ConstructionError::BoundsViolated { needed: n });
    }
    let shift = m.n();
    let mut masks = Vec::with_capacity(m.num_bases() * other.num_bases());
    for a in m.basis_masks() {
        for b in other.basis_masks() {
            masks.push(a | (b << shift));
        }
    }
    Ok(Matroid::from_masks_unchecked(n, m.rank() + other.rank(), masks))
}

/// Packs the bits of `mask` found at positions in `keep` into consecutive low bits.
fn compress(mask: u16, keep: u16) -> u16 {
    let mut out = 0u16;
    let mut pos = 0;
    let mut rest = keep;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        if mask & bit != 0 {
            out |= 1 << pos;
        }
        pos += 1;
        rest &= rest - 1;
    }
    out
}

fn minor_from(m: &Matroid, removed: ElementSet, rank: usize, masks: impl Iterator<Item = u16>) -> Minor {
    let keep = full_mask(m.n()) & !removed.bits();
    let kept: Vec<usize> = (0..m.n()).filter(|&e| keep & (1 << e) != 0).collect();
    let masks = masks.map(|b| compress(b, keep)).collect();
    Minor { matroid: Matroid::from_masks_unchecked(kept.len(), rank, masks), kept }
}

/// `M \ X`.
pub fn delete(m: &Matroid, x: ElementSet) -> Minor {
    let rank = m.basis_masks().map(|b| (b & !x.bits()).count_ones()).max().unwrap_or(0);
    let masks = m.basis_masks().filter(|b| (b & !x.bits()).count_ones() == rank).map(|b| b & !x.bits());
    minor_from(m, x, rank as usize, masks)
}

/// `M / X`.
pub fn contract(m: &Matroid, x: ElementSet) -> Minor {
    let rx = m.basis_masks().map(|b| (b & x.bits()).count_ones()).max().unwrap_or(0);
    let masks = m.basis_masks().filter(|b| (b & x.bits()).count_ones() == rx).map(|b| b & !x.bits());
    minor_from(m, x, m.rank() - rx as usize, masks)
}

/// `M | X`, i.e. `M \ (E - X)`.
pub fn restrict(m: &Matroid, x: ElementSet) -> Minor {
    delete(m, x.complement())
}

pub fn delete_element(m: &Matroid, e: usize) -> Minor {
    delete(m, m.empty_set().with(e))
}

pub fn contract_element(m: &Matroid, e: usize) -> Minor {
    contract(m, m.empty_set().with(e))
}

/// `M*`: bases are the complements of bases.
pub fn dual(m: &Matroid) -> Matroid {
    let full = full_mask(m.n());
    Matroid::from_masks_unchecked(m.n(), m.n() - m.rank(), m.basis_masks().map(|b| !b & full).collect())
}

/// `τ(M)`: the independent sets of size at most `r - 1`.
pub fn truncation(m: &Matroid) -> Result<Matroid, ConstructionError> {
    if m.rank() == 0 {
        return Err(ConstructionError::RankZero);
    }
    let r = m.rank() - 1;
    let masks = k_subsets(m.n(), r).filter(|&s| m.rank_of_mask(s) == r).collect();
    Ok(Matroid::from_masks_unchecked(m.n(), r, masks))
}

/// Truncation by freely extending and contracting the new element.
pub fn truncation_via_free_extension(m: &Matroid) -> Result<Matroid, ConstructionError> {
    if m.rank() == 0 {
        return Err(ConstructionError::RankZero);
    }
    let ext = free_extension(m)?;
    Ok(contract_element(&ext, m.n()).matroid)
}

/// `τ^i(M)`; `i = 0` returns a copy.
pub fn truncation_power(m: &Matroid, i: usize) -> Result<Matroid, ConstructionError> {
    let mut cur = m.clone();
    for _ in 0..i {
        cur = truncation(&cur)?;
    }
    Ok(cur)
}

/// `M +_E e`: a new element `n` placed freely, without raising the rank.
pub fn free_extension(m: &Matroid) -> Result<Matroid, ConstructionError> {
    let n = m.n() + 1;
    if n > MAX_ELEMENTS {
        return Err(ConstructionError::BoundsViolated { needed: n });
    }
    let r = m.rank();
    let mut masks: Vec<u16> = m.basis_masks().collect();
    if r > 0 {
        let e = 1u16 << m.n();
        masks.extend(k_subsets(m.n(), r - 1).filter(|&s| m.rank_of_mask(s) == r - 1).map(|s| s | e));
    }
    Ok(Matroid::from_masks_unchecked(n, r, masks))
}

/// Sets that are both circuits and hyperplanes.
pub fn circuit_hyperplanes(m: &Matroid) -> Vec<ElementSet> {
    m.hyperplanes().iter().copied().filter(|&h| m.is_circuit(h)).collect()
}

/// Relaxes the circuit-hyperplane `x` into a basis.
pub fn relax(m: &Matroid, x: ElementSet) -> Result<Matroid, ConstructionError> {
    if x.bits() & !full_mask(m.n()) != 0 {
        return Err(ConstructionError::NotCircuitHyperplane(x));
    }
    let is_hyperplane = m.rank() > 0 && m.is_flat(x) && m.rank_of(x) + 1 == m.rank();
    if !is_hyperplane || !m.is_circuit(x) {
        return Err(ConstructionError::NotCircuitHyperplane(x));
    }
    let mut masks: Vec<u16> = m.basis_masks().collect();
    masks.push(x.bits());
    Ok(Matroid::from_masks_unchecked(m.n(), m.rank(), masks))
}

/// Result of gluing two matroids at a basepoint.
#[derive(Clone, Debug)]
pub struct Glued {
    pub matroid: Matroid,
    /// Old element of the first matroid to new index (`None` if deleted).
    pub left: Vec<Option<usize>>,
    /// Old element of the second matroid to new index (`None` if deleted).
    pub right: Vec<Option<usize>>,
    /// Index of the basepoint, when it is still present.
    pub basepoint: Option<usize>,
}

/// `P(M1, M2)` glued at `p1 ~ p2`. The first matroid keeps its indices; the
/// second's other elements follow in order.
pub fn parallel_connection(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize) -> Result<Glued, ConstructionError> {
    for (m, p) in [(m1, p1), (m2, p2)] {
        if p >= m.n() {
            return Err(ConstructionError::NoSuchElement(p));
        }
        if m.is_loop(p) || m.is_coloop(p) {
            return Err(ConstructionError::BasepointDegenerate(p));
        }
    }
    let n = m1.n() + m2.n() - 1;
    if n > MAX_ELEMENTS {
        return Err(ConstructionError::BoundsViolated { needed: n });
    }
    let left: Vec<Option<usize>> = (0..m1.n()).map(Some).collect();
    let mut right = vec![None; m2.n()];
    let mut next = m1.n();
    for (e, slot) in right.iter_mut().enumerate() {
        if e == p2 {
            *slot = Some(p1);
        } else {
            *slot = Some(next);
            next += 1;
        }
    }
    let map = |c: ElementSet, table: &[Option<usize>]| c.iter().fold(0u16, |acc, e| acc | (1 << table[e].unwrap()));

    let mut circuits: Vec<u16> = m1.circuits().iter().map(|&c| map(c, &left)).collect();
    circuits.extend(m2.circuits().iter().map(|&c| map(c, &right)));
    let pbit = 1u16 << p1;
    let through1: Vec<u16> = m1.circuits().iter().filter(|c| c.contains(p1)).map(|&c| map(c, &left)).collect();
    let through2: Vec<u16> = m2.circuits().iter().filter(|c| c.contains(p2)).map(|&c| map(c, &right)).collect();
    for &c1 in &through1 {
        for &c2 in &through2 {
            circuits.push((c1 | c2) & !pbit);
        }
    }
    circuits.sort_unstable();
    circuits.dedup();

    let r = m1.rank() + m2.rank() - 1;
    let masks: Vec<u16> = k_subsets(n, r).filter(|&s| circuits.iter().all(|&c| c & !s != 0)).collect();
    let bases = masks.into_iter().map(|b| ElementSet::from_bits_unchecked(b, n)).collect();
    let matroid = Matroid::new(n, r, bases)?;
    Ok(Glued { matroid, left, right, basepoint: Some(p1) })
}

/// 2-sum: the parallel connection with the basepoint deleted.
pub fn two_sum(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize) -> Result<Glued, ConstructionError> {
    let glued = parallel_connection(m1, m2, p1, p2)?;
    Ok(delete_basepoint(glued))
}

fn delete_basepoint(glued: Glued) -> Glued {
    let p = glued.basepoint.expect("basepoint present");
    let minor = delete_element(&glued.matroid, p);
    let remap = |old: Option<usize>| old.and_then(|o| minor.new_index(o));
    Glued {
        left: glued.left.iter().map(|&o| remap(o)).collect(),
        right: glued.right.iter().map(|&o| remap(o)).collect(),
        matroid: minor.matroid,
        basepoint: None,
    }
}

/// A matroid with human-readable element names.
#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: &'static str,
    pub matroid: Matroid,
    pub labels: Vec<String>,
}

impl NamedExample {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Element index for a label; panics on unknown labels.
    pub fn el(&self, label: &str) -> usize {
        self.index_of(label).unwrap_or_else(|| panic!("no element labeled {label} in {}", self.name))
    }

    pub fn set(&self, labels: &[&str]) -> ElementSet {
        ElementSet::from_indices(self.matroid.n(), labels.iter().map(|l| self.el(l))).unwrap()
    }

    /// `{"0": "x1", ..}` as JSON.
    pub fn labels_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> =
            self.labels.iter().enumerate().map(|(i, l)| (i.to_string(), serde_json::Value::from(l.as_str()))).collect();
        serde_json::Value::Object(map).to_string()
    }
}

/// Rank-3 matroid on seven points: lines `{x1,x2,x3,x3'}` and
/// `{x3,x3',x4,x5}` meeting in the parallel class `{x3,x3'}`, and a free point `x6`.
pub fn figure2_example() -> NamedExample {
    let labels: Vec<String> = ["x1", "x2", "x3", "x3'", "x4", "x5", "x6"].iter().map(|s| s.to_string()).collect();
    let dependent: [u16; 5] = [0b0001100, 0b0000111, 0b0001011, 0b0110100, 0b0111000];
    let masks: Vec<u16> = k_subsets(7, 3).filter(|&s| dependent.iter().all(|&d| d & !s != 0)).collect();
    let bases = masks.into_iter().map(|b| ElementSet::from_bits_unchecked(b, 7)).collect();
    let matroid = Matroid::new(7, 3, bases).expect("figure-2 bases satisfy exchange");
    NamedExample { name: "figure2", matroid, labels }
}

/// Rank-5 matroid on eleven elements: two four-point lines and a six-element
/// rank-3 matroid (only non-spanning circuit `{g,a,b}`; `f`, `p`, `c` free)
/// glued at the common basepoint `p`, which is then deleted.
///
/// Here `f` is freer than `g`, both lie in no spanning circuit, yet they are
/// not clones although the matroid is cosimple.
pub fn spanning_circuit_counterexample() -> NamedExample {
    // g a b f p c
    let m1_masks: Vec<u16> = k_subsets(6, 3).filter(|&s| s != 0b000111).collect();
    let m1 = Matroid::from_masks_trusted(6, 3, m1_masks);
    let line = uniform(2, 4).expect("U_{2,4}");

    let lines = parallel_connection(&line, &line, 0, 0).expect("two lines glue at a point");
    let p_in_lines = lines.basepoint.expect("basepoint");
    let all = parallel_connection(&m1, &lines.matroid, 4, p_in_lines).expect("glue the plane on");
    let p_index = all.basepoint.expect("basepoint");

    let mut labels = vec![String::new(); all.matroid.n()];
    for (old, name) in ["g", "a", "b", "f", "p", "c"].iter().enumerate() {
        labels[all.left[old].unwrap()] = name.to_string();
    }
    for (old, new) in lines.left.iter().enumerate().skip(1) {
        labels[all.right[new.unwrap()].unwrap()] = format!("s{old}");
    }
    for (old, new) in lines.right.iter().enumerate().skip(1) {
        labels[all.right[new.unwrap()].unwrap()] = format!("t{old}");
    }
    let glued = delete_basepoint(all);
    let labels = (0..labels.len()).filter(|&i| i != p_index).map(|i| labels[i].clone()).collect();
    let ex = NamedExample { name: "counterexample", matroid: glued.matroid, labels };
    assert_eq!(
        ex.matroid.rank(),
        5,
        "gluing interpretation yields rank {} instead of 5; the three-way 2-sum reading is wrong",
        ex.matroid.rank()
    );
    assert_eq!(ex.matroid.n(), 11, "gluing interpretation yields {} elements", ex.matroid.n());
    ex
}
