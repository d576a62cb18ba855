//! Verification suites. Each sweeps a catalog of small matroids and a grid of
//! exact rational points, and reports every violated check with a replayable
//! witness.
//!
//! Pair suites use the labeled catalogs (`n <= 6`) and, for larger `n`,
//! spot pairs obtained by dropping one basis from a representative. Suites
//! about single matroids use the isomorph-free representatives, each under a
//! seeded random relabeling.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{generate_representatives, labeled_catalog, CatalogError, LABELED_MAX_N, REPR_MAX_N};
use crate::matroid::Matroid;
use crate::tutte::{format_rational, hyperbola_side, parse_rational, tutte_delcon, Rational, Sign, TutteCache, TuttePoly};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("n = {0} is outside the supported range 0..={REPR_MAX_N}")]
    BadSize(usize),
    #[error("grid line {line}: {reason}")]
    Grid { line: usize, reason: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// An evaluation point with positive rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    x: Rational,
    y: Rational,
    on_hyperbola: bool,
}

impl GridPoint {
    pub fn new(x: Rational, y: Rational) -> Option<Self> {
        let positive = |q: &Rational| *q > Rational::from_integer(0.into());
        if !positive(&x) || !positive(&y) {
            return None;
        }
        let on_hyperbola = &x + &y == &x * &y;
        Some(GridPoint { x, y, on_hyperbola })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    /// `x + y = xy`.
    pub fn on_hyperbola(&self) -> bool {
        self.on_hyperbola
    }

    /// `sgn(x + y - xy)`.
    pub fn side(&self) -> Sign {
        hyperbola_side(&self.x, &self.y)
    }

    pub fn label(&self) -> [String; 2] {
        [format_rational(&self.x), format_rational(&self.y)]
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Twelve points: five with `x + y > xy`, three on the hyperbola `x + y = xy`
/// and four with `x + y < xy`.
pub fn default_grid() -> Vec<GridPoint> {
    [
        ("1", "1"),
        ("2", "1"),
        ("1", "2"),
        ("1/2", "1/2"),
        ("1/3", "5"),
        ("2", "2"),
        ("3/2", "3"),
        ("3", "3/2"),
        ("3", "3"),
        ("5/2", "5/2"),
        ("4", "2"),
        ("2", "3"),
    ]
    .iter()
    .map(|(x, y)| GridPoint::new(parse_rational(x).unwrap(), parse_rational(y).unwrap()).unwrap())
    .collect()
}

/// One point `x y` per line; blank lines and `#` comments are skipped.
pub fn parse_grid(text: &str) -> Result<Vec<GridPoint>, VerifyError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |reason: String| VerifyError::Grid { line: line_no, reason };
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        let [x, y] = parts[..] else {
            return Err(err("expected two rationals `x y`".into()));
        };
        let x = parse_rational(x).map_err(|e| err(e.to_string()))?;
        let y = parse_rational(y).map_err(|e| err(e.to_string()))?;
        out.push(GridPoint::new(x, y).ok_or_else(|| err("coordinates must be positive".into()))?);
    }
    if out.is_empty() {
        return Err(VerifyError::Grid { line: 0, reason: "the grid has no points".into() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    /// Sign of `T(M) - T(N)` on weak pairs versus the side of `x + y = xy`.
    Main,
    /// Strictly more bases, independent and spanning sets; axis inequalities.
    CountGrowth,
    /// Sign of `T(M) - x^r y^(n-r)`.
    MonomialBound,
    /// Minor sign laws and count inequalities for freer pairs.
    Freedom,
    /// Count equalities versus clones in derived matroids.
    Equality,
    /// Freedom, duality, minor, relaxation and counting identities.
    Structural,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Main, Suite::CountGrowth, Suite::MonomialBound, Suite::Freedom, Suite::Equality, Suite::Structural];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::CountGrowth => "lucas",
            Suite::MonomialBound => "lemma-lc",
            Suite::Freedom => "freedom",
            Suite::Equality => "equality",
            Suite::Structural => "structural",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One violated check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub check: String,
    /// The matroids involved, each in the matroid text format.
    pub matroids: Vec<String>,
    pub point: Option<[String; 2]>,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    pub fn new(
        check: &str,
        matroids: &[&Matroid],
        point: Option<&GridPoint>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Failure {
            check: check.to_string(),
            matroids: matroids.iter().map(|m| m.to_text()).collect(),
            point: point.map(GridPoint::label),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub n: usize,
    pub grid: Vec<[String; 2]>,
    pub instances: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Counts checks and collects failures; merged associatively across workers.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub instances: u64,
    pub failures: Vec<Failure>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.instances += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self
    }
}

/// The catalogs, grid and Tutte cache a suite run works from.
pub struct SuiteInput {
    pub n_max: usize,
    pub grid: Vec<GridPoint>,
    pub seed: u64,
    /// `labeled[n]`: every labeled matroid on `n` elements, for `n <= min(n_max, 6)`.
    pub labeled: Vec<Vec<Matroid>>,
    /// `representatives[n]`: one randomly relabeled matroid per isomorphism class.
    pub representatives: Vec<Vec<Matroid>>,
    cache: TutteCache,
}

impl SuiteInput {
    pub fn new(n_max: usize, grid: Vec<GridPoint>, seed: u64) -> Result<Self, VerifyError> {
        Self::with_cache(n_max, grid, seed, TutteCache::new())
    }

    pub fn with_cache(n_max: usize, grid: Vec<GridPoint>, seed: u64, cache: TutteCache) -> Result<Self, VerifyError> {
        if n_max > REPR_MAX_N {
            return Err(VerifyError::BadSize(n_max));
        }
        let labeled = (0..=n_max.min(LABELED_MAX_N))
            .map(|n| labeled_catalog(n).map(|c| c.entries))
            .collect::<Result<Vec<_>, _>>()?;
        let mut representatives = Vec::new();
        for n in 0..=n_max {
            let reps = generate_representatives(n)?.entries;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let relabeled = reps
                .iter()
                .map(|m| {
                    let mut perm: Vec<usize> = (0..n).collect();
                    perm.shuffle(&mut rng);
                    m.relabeled(&perm)
                })
                .collect();
            representatives.push(relabeled);
        }
        Ok(SuiteInput { n_max, grid, seed, labeled, representatives, cache })
    }

    /// Replaces the first entry on `n` elements matching `pick`, in both the
    /// labeled catalog and the representatives, by `replacement`. Returns
    /// the number of entries replaced. Used to test that suites can fail.
    pub fn corrupt(&mut self, n: usize, pick: impl Fn(&Matroid) -> bool, replacement: &Matroid) -> usize {
        let mut replaced = 0;
        for list in [self.labeled.get_mut(n), self.representatives.get_mut(n)].into_iter().flatten() {
            if let Some(slot) = list.iter_mut().find(|m| pick(m)) {
                *slot = replacement.clone();
                replaced += 1;
            }
        }
        replaced
    }

    pub fn cache(&self) -> &TutteCache {
        &self.cache
    }

    pub(crate) fn tutte(&self, m: &Matroid) -> TuttePoly {
        tutte_delcon(m, &self.cache)
    }

    /// All single matroids of the sweep, smallest first.
    pub(crate) fn singles(&self) -> impl Iterator<Item = &Matroid> + '_ {
        self.representatives.iter().flatten()
    }

    /// Identity weak pairs `(M, N)`: exhaustive over the labeled catalogs, plus
    /// for larger `n` each representative paired with itself minus one of up
    /// to three seeded random bases whenever that leaves a matroid.
    pub(crate) fn weak_pairs(&self) -> PairSweep {
        let mut sweep = PairSweep::default();
        for level in &self.labeled {
            let offset = sweep.matroids.len();
            sweep.matroids.extend(level.iter().cloned());
            sweep.pairs.extend(crate::catalog::weak_pairs_of(level).into_iter().map(|(i, j)| (offset + i, offset + j)));
        }
        for n in (LABELED_MAX_N + 1)..self.representatives.len() {
            let reps = &self.representatives[n];
            let spot: Vec<(Matroid, Vec<Matroid>)> = reps
                .par_iter()
                .enumerate()
                .map(|(k, m)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ((n as u64) << 32) ^ k as u64);
                    let mut order: Vec<usize> = (0..m.num_bases()).collect();
                    order.shuffle(&mut rng);
                    let subs = order
                        .into_iter()
                        .take(3)
                        .filter_map(|drop| {
                            let bases: Vec<_> =
                                m.bases().iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, b)| *b).collect();
                            Matroid::new(m.n(), m.rank(), bases).ok()
                        })
                        .collect();
                    (m.clone(), subs)
                })
                .collect();
            for (m, subs) in spot {
                let i = sweep.matroids.len();
                sweep.matroids.push(m);
                for sub in subs {
                    sweep.pairs.push((i, sweep.matroids.len()));
                    sweep.matroids.push(sub);
                }
            }
        }
        sweep
    }
}

/// Matroids of a pair sweep and the pairs `(M, N)` as positions into them.
#[derive(Debug, Default)]
pub(crate) struct PairSweep {
    pub matroids: Vec<Matroid>,
    pub pairs: Vec<(usize, usize)>,
}

/// Name of the check every suite run applies to each catalog entry first.
pub const INTEGRITY_CHECK: &str = "catalog-entry-is-matroid";

/// Runs one suite, after checking that every catalog entry is a matroid.
pub fn run_suite(suite: Suite, input: &SuiteInput) -> VerificationReport {
    let start = Instant::now();
    let mut integrity = Tally::default();
    for m in input.labeled.iter().chain(&input.representatives).flatten() {
        let result = m.check_exchange();
        integrity.check(result.is_ok(), || {
            Failure::new(INTEGRITY_CHECK, &[m], None, "a bases family", result.unwrap_err())
        });
    }
    let tally = integrity.merge(match suite {
        Suite::Main => suites::weak_pair_signs(input),
        Suite::CountGrowth => suites::count_growth(input),
        Suite::MonomialBound => suites::monomial_bound(input),
        Suite::Freedom => suites::freedom_consequences(input),
        Suite::Equality => suites::equality_characterizations(input),
        Suite::Structural => suites::structural_checks(input),
    });
    let mut failures = tally.failures;
    failures.sort();
    VerificationReport {
        suite: suite.name().to_string(),
        n: input.n_max,
        grid: input.grid.iter().map(GridPoint::label).collect(),
        instances: tally.instances,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_covers_three_regimes() {
        let grid = default_grid();
        assert_eq!(grid.len(), 12);
        let count = |s: Sign| grid.iter().filter(|p| p.side() == s).count();
        assert_eq!(count(Sign::Positive), 5);
        assert_eq!(count(Sign::Zero), 3);
        assert_eq!(count(Sign::Negative), 4);
        assert!(grid.iter().all(|p| p.on_hyperbola() == (p.side() == Sign::Zero)));
    }

    #[test]
    fn grid_file_parsing() {
        let grid = parse_grid("# points\n1/2 3\n\n2 2\n").unwrap();
        assert_eq!(grid.len(), 2);
        assert!(grid[1].on_hyperbola());
        assert!(matches!(parse_grid("1 0\n"), Err(VerifyError::Grid { line: 1, .. })));
        assert!(matches!(parse_grid("1\n"), Err(VerifyError::Grid { line: 1, .. })));
        assert!(parse_grid("0.5 1\n").is_err());
        assert!(parse_grid("# nothing\n").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        let input = SuiteInput::new(4, default_grid(), DEFAULT_SEED).unwrap();
        for s in Suite::ALL {
            let a = run_suite(s, &input);
            assert!(a.passed(), "{s}: {:?}", a.failures.first());
            assert!(a.instances > 0, "{s}");
            let b = run_suite(s, &input);
            assert_eq!(a.instances, b.instances);
            assert_eq!(a.failures, b.failures);
        }
    }
}
