use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use sha2::{Digest, Sha256};

use super::TuttePoly;
use crate::canonical::CanonicalKey;
use crate::constructions::{contract_element, delete, delete_element};
use crate::matroid::Matroid;

/// Cores larger than this are recursed on without canonizing them.
pub const MEMO_MAX_N: usize = 9;

/// Chooses the deletion-contraction pivot of a core (a matroid with at
/// least one element and neither loops nor coloops).
pub trait PivotStrategy: Sync {
    fn choose(&self, core: &Matroid) -> usize;
}

/// The lowest-index element; the default.
#[derive(Debug, Clone, Copy, Default)]
pub struct LowestIndex;

impl PivotStrategy for LowestIndex {
    fn choose(&self, _core: &Matroid) -> usize {
        0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HighestIndex;

impl PivotStrategy for HighestIndex {
    fn choose(&self, core: &Matroid) -> usize {
        core.n() - 1
    }
}

/// The element lying in the most bases, lowest index on ties.
#[derive(Debug, Clone, Copy, Default)]
pub struct MostBases;

impl PivotStrategy for MostBases {
    fn choose(&self, core: &Matroid) -> usize {
        (0..core.n())
            .max_by_key(|&e| (core.bases().iter().filter(|b| b.contains(e)).count(), std::cmp::Reverse(e)))
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl CacheStats {
    pub fn hit_rate(&self) -> f64 {
        let total = self.hits + self.misses;
        if total == 0 {
            0.0
        } else {
            self.hits as f64 / total as f64
        }
    }
}

/// Memo table from canonical cores to their Tutte polynomials.
///
/// Safe to share between threads. With a directory attached, entries are
/// also written to and read from one file per core, named by the SHA-256 of
/// the core's key; unreadable or mismatching files are ignored.
pub struct TutteCache {
    enabled: bool,
    map: RwLock<HashMap<CanonicalKey, TuttePoly>>,
    dir: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Default for TutteCache {
    fn default() -> Self {
        Self::new()
    }
}

impl TutteCache {
    pub fn new() -> Self {
        TutteCache {
            enabled: true,
            map: RwLock::new(HashMap::new()),
            dir: None,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// A cache that never stores anything.
    pub fn disabled() -> Self {
        TutteCache { enabled: false, ..Self::new() }
    }

    /// An in-memory cache backed by files in `dir`, created if missing.
    pub fn with_dir(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(TutteCache { dir: Some(dir.as_ref().to_path_buf()), ..Self::new() })
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.map.read().map(|m| m.len()).unwrap_or(0),
        }
    }

    fn get(&self, key: &CanonicalKey) -> Option<TuttePoly> {
        if let Some(t) = self.map.read().ok()?.get(key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Some(t.clone());
        }
        if let Some(t) = self.read_file(key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            if let Ok(mut map) = self.map.write() {
                map.entry(key.clone()).or_insert_with(|| t.clone());
            }
            return Some(t);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        None
    }

    fn insert(&self, key: CanonicalKey, t: &TuttePoly) {
        self.write_file(&key, t);
        if let Ok(mut map) = self.map.write() {
            map.entry(key).or_insert_with(|| t.clone());
        }
    }

    fn key_line(key: &CanonicalKey) -> String {
        let bases: Vec<String> = key.bases.iter().map(|b| b.to_string()).collect();
        format!("{} {} {}", key.n, key.rank, bases.join(","))
    }

    fn path_for(&self, key: &CanonicalKey) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let digest = Sha256::digest(Self::key_line(key).as_bytes());
        Some(dir.join(format!("{}.tutte", hex::encode(digest))))
    }

    fn read_file(&self, key: &CanonicalKey) -> Option<TuttePoly> {
        let text = fs::read_to_string(self.path_for(key)?).ok()?;
        let (first, rest) = text.split_once('\n')?;
        if first != Self::key_line(key) {
            return None;
        }
        let t = TuttePoly::from_matrix_text(rest)?;
        let (n, r) = (key.n as usize, key.rank as usize);
        (t.rows() == r + 1 && t.cols() == n - r + 1).then_some(t)
    }

    fn write_file(&self, key: &CanonicalKey, t: &TuttePoly) {
        let Some(path) = self.path_for(key) else { return };
        if path.exists() {
            return;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let body = format!("{}\n{}", Self::key_line(key), t.matrix_text());
        // Failures only cost a recomputation next run.
        if fs::write(&tmp, body).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }
}

/// Deletion-contraction with the default pivot strategy.
pub fn tutte_delcon(m: &Matroid, cache: &TutteCache) -> TuttePoly {
    tutte_delcon_with(m, cache, &LowestIndex)
}

/// Peels loops (`y`) and coloops (`x`), then applies
/// `T(M) = T(M \ e) + T(M / e)` to the core, memoizing on its canonical form.
pub fn tutte_delcon_with(m: &Matroid, cache: &TutteCache, strategy: &dyn PivotStrategy) -> TuttePoly {
    let loops = m.loops();
    let coloops = m.coloops();
    if loops.is_empty() && coloops.is_empty() {
        return core_polynomial(m, cache, strategy);
    }
    let core = delete(m, loops.union(coloops)).matroid;
    core_polynomial(&core, cache, strategy).shifted(coloops.len(), loops.len())
}

fn core_polynomial(core: &Matroid, cache: &TutteCache, strategy: &dyn PivotStrategy) -> TuttePoly {
    if core.n() == 0 {
        return TuttePoly::one();
    }
    let key = (cache.enabled && core.n() <= MEMO_MAX_N).then(|| core.canonical_form().key());
    if let Some(t) = key.as_ref().and_then(|k| cache.get(k)) {
        return t;
    }
    let e = strategy.choose(core);
    let deleted = delete_element(core, e).matroid;
    let contracted = contract_element(core, e).matroid;
    let t = tutte_delcon_with(&deleted, cache, strategy).add(&tutte_delcon_with(&contracted, cache, strategy));
    if let Some(k) = key {
        cache.insert(k, &t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{direct_sum, figure2_example, uniform};
    use crate::tutte::tutte_subset_expansion;

    #[test]
    fn loop_plus_coloop_is_xy() {
        let m = direct_sum(&uniform(1, 1).unwrap(), &uniform(0, 1).unwrap()).unwrap();
        assert_eq!(tutte_delcon(&m, &TutteCache::new()), TuttePoly::monomial(1, 1));
    }

    #[test]
    fn strategies_and_cache_modes_agree() {
        let m = figure2_example().matroid;
        let expected = tutte_subset_expansion(&m);
        let cache = TutteCache::new();
        assert_eq!(tutte_delcon(&m, &cache), expected);
        assert_eq!(tutte_delcon(&m, &cache), expected);
        assert!(cache.stats().hits > 0);
        assert_eq!(tutte_delcon(&m, &TutteCache::disabled()), expected);
        assert_eq!(tutte_delcon_with(&m, &TutteCache::new(), &HighestIndex), expected);
        assert_eq!(tutte_delcon_with(&m, &TutteCache::new(), &MostBases), expected);
    }

    #[test]
    fn disk_cache_survives_restart_and_ignores_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let m = uniform(3, 6).unwrap();
        let expected = tutte_subset_expansion(&m);
        assert_eq!(tutte_delcon(&m, &TutteCache::with_dir(dir.path()).unwrap()), expected);
        let files: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
        assert!(!files.is_empty());

        let warm = TutteCache::with_dir(dir.path()).unwrap();
        assert_eq!(tutte_delcon(&m, &warm), expected);
        assert_eq!(warm.stats().misses, 0);

        for f in &files {
            fs::write(f, "garbage\n1 2 3\n").unwrap();
        }
        let corrupt = TutteCache::with_dir(dir.path()).unwrap();
        assert_eq!(tutte_delcon(&m, &corrupt), expected);
        assert!(corrupt.stats().misses > 0);
    }
}
