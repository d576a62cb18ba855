//! Weak maps, the freer-than relation, clones and per-element counts.

use thiserror::Error;

use crate::constructions::contract_element;
use crate::matroid::Matroid;
use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("ground sets differ in size ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("the two elements coincide ({0})")]
    SameElement(usize),
    #[error("element {0} is not in the ground set")]
    NoSuchElement(usize),
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A bijection `E(M) -> E(N)` between ground sets of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bijection {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Bijection {
    pub fn new(forward: Vec<usize>) -> Result<Self, OrderError> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &f) in forward.iter().enumerate() {
            if f >= n || inverse[f] != usize::MAX {
                return Err(OrderError::NotAPermutation(n));
            }
            inverse[f] = i;
        }
        Ok(Bijection { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Bijection { forward: (0..n).collect(), inverse: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn apply(&self, e: usize) -> usize {
        self.forward[e]
    }

    pub fn preimage(&self, set: ElementSet) -> ElementSet {
        set.permuted(&self.inverse)
    }
}

fn same_size(m: &Matroid, n: &Matroid) -> Result<(), OrderError> {
    if m.n() != n.n() {
        return Err(OrderError::SizeMismatch { left: m.n(), right: n.n() });
    }
    Ok(())
}

fn check_element(m: &Matroid, e: usize) -> Result<(), OrderError> {
    if e >= m.n() {
        return Err(OrderError::NoSuchElement(e));
    }
    Ok(())
}

fn distinct_pair(m: &Matroid, f: usize, g: usize) -> Result<(), OrderError> {
    check_element(m, f)?;
    check_element(m, g)?;
    if f == g {
        return Err(OrderError::SameElement(f));
    }
    Ok(())
}

/// True iff `φ^{-1}(I)` is independent in `M` for every independent `I` of `N`.
/// Checking the bases of `N` suffices.
pub fn is_weak_map(m: &Matroid, n: &Matroid, phi: &Bijection) -> Result<bool, OrderError> {
    same_size(m, n)?;
    if phi.len() != m.n() {
        return Err(OrderError::SizeMismatch { left: m.n(), right: phi.len() });
    }
    Ok(n.bases().iter().all(|&b| m.is_independent(phi.preimage(b))))
}

/// True iff the identity is a rank-preserving weak map `M -> N`, i.e. the
/// ranks agree and every basis of `N` is a basis of `M`.
pub fn identity_is_rp_weak_map(m: &Matroid, n: &Matroid) -> Result<bool, OrderError> {
    same_size(m, n)?;
    if m.rank() != n.rank() {
        return Ok(false);
    }
    let mut i = 0;
    let ours = m.bases();
    for b in n.bases() {
        while i < ours.len() && ours[i] < *b {
            i += 1;
        }
        if i == ours.len() || ours[i] != *b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a rank-preserving weak map `M -> N`.
///
/// Builds the inverse `ψ = φ^{-1}` one element of `N` at a time, keeping the
/// image of every partially assigned basis of `N` independent in `M`. Loops of
/// `M` may only receive loops of `N`, and coloops of `M` only coloops of `N`.
pub fn find_rp_weak_map(m: &Matroid, n: &Matroid) -> Result<Option<Bijection>, OrderError> {
    same_size(m, n)?;
    let size = m.n();
    if m.rank() != n.rank()
        || n.num_bases() > m.num_bases()
        || m.loops().len() > n.loops().len()
        || m.coloops().len() > n.coloops().len()
    {
        return Ok(None);
    }
    // bases of N grouped by the elements they contain
    let through: Vec<Vec<u16>> =
        (0..size).map(|f| n.bases().iter().filter(|b| b.contains(f)).map(|b| b.bits()).collect()).collect();
    let mut search = WeakMapSearch {
        m,
        n_loops: n.loops(),
        n_coloops: n.coloops(),
        m_loops: m.loops(),
        m_coloops: m.coloops(),
        through,
        psi: vec![usize::MAX; size],
        used: 0,
    };
    if search.assign(0) {
        let mut forward = vec![0; size];
        for (f, &e) in search.psi.iter().enumerate() {
            forward[e] = f;
        }
        return Ok(Some(Bijection::new(forward).expect("search builds a permutation")));
    }
    Ok(None)
}

struct WeakMapSearch<'a> {
    m: &'a Matroid,
    n_loops: ElementSet,
    n_coloops: ElementSet,
    m_loops: ElementSet,
    m_coloops: ElementSet,
    through: Vec<Vec<u16>>,
    psi: Vec<usize>,
    used: u16,
}

impl WeakMapSearch<'_> {
    fn assign(&mut self, f: usize) -> bool {
        let size = self.psi.len();
        if f == size {
            return true;
        }
        let assigned = if f == 0 { 0 } else { (1u16 << f) - 1 } | (1 << f);
        for e in 0..size {
            if self.used & (1 << e) != 0 {
                continue;
            }
            if self.m_loops.contains(e) && !self.n_loops.contains(f) {
                continue;
            }
            if self.m_coloops.contains(e) && !self.n_coloops.contains(f) {
                continue;
            }
            self.psi[f] = e;
            let ok = self.through[f].iter().all(|&b| {
                let part = b & assigned;
                let mut image = 0u16;
                let mut rest = part;
                while rest != 0 {
                    image |= 1 << self.psi[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                self.m.rank_of_mask(image) == part.count_ones() as usize
            });
            if ok {
                self.used |= 1 << e;
                if self.assign(f + 1) {
                    return true;
                }
                self.used &= !(1 << e);
            }
        }
        self.psi[f] = usize::MAX;
        false
    }
}

/// Outcome of a freer-than query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreerWitness {
    Freer,
    /// A cyclic flat containing `f` and avoiding `g`.
    NotFreer(ElementSet),
}

impl FreerWitness {
    pub fn is_freer(&self) -> bool {
        matches!(self, FreerWitness::Freer)
    }

    pub fn witness(&self) -> Option<ElementSet> {
        match self {
            FreerWitness::Freer => None,
            FreerWitness::NotFreer(w) => Some(*w),
        }
    }
}

/// `f` is freer than `g` iff every cyclic flat containing `f` contains `g`.
/// A coloop lies in no cyclic flat and is vacuously freer than everything.
pub fn freer_than(m: &Matroid, f: usize, g: usize) -> Result<FreerWitness, OrderError> {
    distinct_pair(m, f, g)?;
    Ok(match m.cyclic_flats().iter().find(|z| z.contains(f) && !z.contains(g)) {
        Some(&z) => FreerWitness::NotFreer(z),
        None => FreerWitness::Freer,
    })
}

/// `g` lies in the closure of every circuit containing `f`.
pub fn freer_than_circuits(m: &Matroid, f: usize, g: usize) -> Result<bool, OrderError> {
    distinct_pair(m, f, g)?;
    Ok(m.circuits().iter().filter(|c| c.contains(f)).all(|&c| m.closure(c).contains(g)))
}

/// True iff swapping `a` and `b` maps bases onto bases.
pub fn are_clones(m: &Matroid, a: usize, b: usize) -> Result<bool, OrderError> {
    distinct_pair(m, a, b)?;
    let pair = (1u16 << a) | (1u16 << b);
    let bases = m.bases();
    Ok(bases.iter().all(|basis| {
        let hit = basis.bits() & pair;
        hit == 0
            || hit == pair
            || bases.binary_search(&ElementSet::from_bits_unchecked(basis.bits() ^ pair, m.n())).is_ok()
    }))
}

/// All unordered clone pairs `(a, b)` with `a < b`.
pub fn clone_pairs(m: &Matroid) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..m.n() {
        for b in (a + 1)..m.n() {
            if are_clones(m, a, b).expect("distinct elements") {
                out.push((a, b));
            }
        }
    }
    out
}

/// Checks that `g -> f` (identity elsewhere) is a rank-preserving weak map
/// from `M/f` to `M/g`. Requires `f` freer than `g` and `g` not a loop.
pub fn phi_gf_check(m: &Matroid, f: usize, g: usize) -> Result<bool, OrderError> {
    if !freer_than(m, f, g)?.is_freer() {
        return Err(OrderError::PreconditionViolated(format!("{f} is not freer than {g}")));
    }
    if m.is_loop(g) {
        return Err(OrderError::PreconditionViolated(format!("{g} is a loop")));
    }
    let mf = contract_element(m, f);
    let mg = contract_element(m, g);
    let forward: Vec<usize> = mf
        .kept
        .iter()
        .map(|&old| {
            let target = if old == g { f } else { old };
            mg.new_index(target).expect("element survives the other contraction")
        })
        .collect();
    let phi = Bijection::new(forward)?;
    Ok(mf.matroid.rank() == mg.matroid.rank() && is_weak_map(&mf.matroid, &mg.matroid, &phi)?)
}

/// `b(e; M)`: bases containing `e`.
pub fn b_through(m: &Matroid, e: usize) -> usize {
    m.bases().iter().filter(|b| b.contains(e)).count()
}

/// `W_k(e; M)`: rank-`k` flats containing `e`.
pub fn flats_k_through(m: &Matroid, e: usize, k: usize) -> usize {
    m.flats_of_rank(k).iter().filter(|z| z.contains(e)).count()
}

/// `h(e; M)`: hyperplanes containing `e`.
pub fn h_through(m: &Matroid, e: usize) -> usize {
    m.hyperplanes().iter().filter(|z| z.contains(e)).count()
}

/// `γ(e; M)`: circuits containing `e`.
pub fn circuits_through(m: &Matroid, e: usize) -> usize {
    m.circuits().iter().filter(|c| c.contains(e)).count()
}

/// `γ'(e; M)`: spanning circuits containing `e`.
pub fn spanning_circuits_through(m: &Matroid, e: usize) -> usize {
    m.circuits().iter().filter(|&&c| c.contains(e) && m.rank_of(c) == m.rank()).count()
}
