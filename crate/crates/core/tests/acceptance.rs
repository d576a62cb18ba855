//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;

use matro::catalog::{
    automorphism_count, brute_force_labeled, generate_representatives, labeled_catalog, orbit_sizes,
    representatives_by_dedup, representatives_by_extension,
};
use matro::constructions::{figure2_example, spanning_circuit_counterexample};
use matro::order::{are_clones, clone_pairs, freer_than};
use matro::tutte::{tutte_delcon, tutte_subset_expansion, Rational};
use matro::verify::{default_grid, run_suite, Suite, SuiteInput, DEFAULT_SEED, INTEGRITY_CHECK};
use matro::{ElementSet, Matroid, TutteCache};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

/// Rank straight from the bases: the largest intersection with a basis.
fn rank(m: &Matroid, a: u16) -> usize {
    m.bases().iter().map(|b| (b.bits() & a).count_ones() as usize).max().unwrap_or(0)
}

fn subsets(n: usize) -> std::ops::Range<u32> {
    0..(1u32 << n)
}

/// Flats of rank `k` by testing every subset against every outside element.
fn flats_of_rank(m: &Matroid, k: usize) -> Vec<u16> {
    let n = m.n();
    subsets(n)
        .map(|a| a as u16)
        .filter(|&a| rank(m, a) == k && (0..n).all(|e| a & (1 << e) != 0 || rank(m, a | (1 << e)) > k))
        .collect()
}

/// Circuits as minimal dependent sets.
fn circuits(m: &Matroid) -> Vec<u16> {
    let dependent = |a: u16| rank(m, a) < a.count_ones() as usize;
    subsets(m.n())
        .map(|a| a as u16)
        .filter(|&a| dependent(a) && (0..m.n()).filter(|&e| a & (1 << e) != 0).all(|e| !dependent(a & !(1 << e))))
        .collect()
}

/// Cyclic flats: flats equal to the union of the circuits inside them.
fn cyclic_flats_of_rank(m: &Matroid, k: usize) -> Vec<u16> {
    let cs = circuits(m);
    flats_of_rank(m, k)
        .into_iter()
        .filter(|&z| cs.iter().filter(|&&c| c & !z == 0).fold(0, |u, &c| u | c) == z)
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn all_labeled(max_n: usize) -> Vec<Matroid> {
    (0..=max_n).flat_map(|n| labeled_catalog(n).expect("labeled catalog").entries).collect()
}

fn tutte_oracle_equivalence() -> Outcome {
    let cache = TutteCache::new();
    let mut ms = all_labeled(6);
    ms.push(figure2_example().matroid);
    ms.push(spanning_circuit_counterexample().matroid);
    let bad: Vec<String> =
        ms.iter().filter(|m| tutte_delcon(m, &cache) != tutte_subset_expansion(m)).map(|m| m.to_text()).collect();
    check(bad.is_empty(), format!("{} matroids, {} disagreements, cache hit rate {:.2}", ms.len(), bad.len(), cache.stats().hit_rate()))
}

fn counting_identities() -> Outcome {
    let cache = TutteCache::new();
    let ms = all_labeled(6);
    let (one, two) = (Rational::from_integer(1.into()), Rational::from_integer(2.into()));
    let mut bad = 0;
    for m in &ms {
        let t = tutte_delcon(m, &cache);
        let independent = subsets(m.n()).filter(|&a| rank(m, a as u16) == a.count_ones() as usize).count();
        let spanning = subsets(m.n()).filter(|&a| rank(m, a as u16) == m.rank()).count();
        let expect = [(&one, &one, m.bases().len()), (&two, &one, independent), (&one, &two, spanning)];
        for (x, y, count) in expect {
            if t.evaluate(x, y) != Rational::from_integer(BigInt::from(count)) {
                bad += 1;
            }
        }
    }
    check(bad == 0, format!("{} matroids x 3 counts, {bad} mismatches", ms.len()))
}

fn suite_clean(input: &SuiteInput, suite: Suite) -> Outcome {
    let r = run_suite(suite, input);
    let detail = format!("suite {}: {} checks, {} failures, {} ms", r.suite, r.instances, r.failures.len(), r.elapsed_ms);
    match r.failures.first() {
        None if r.instances > 0 => Ok(detail),
        None => Err(format!("{detail} (nothing was checked)")),
        Some(f) => Err(format!("{detail}; first: {} expected {} got {}", f.check, f.expected, f.actual)),
    }
}

fn weak_order_sweep(input: &SuiteInput) -> Outcome {
    let on = input.grid.iter().filter(|p| p.on_hyperbola()).count();
    if on != 3 {
        return Err(format!("default grid has {on} hyperbola points, expected 3"));
    }
    suite_clean(input, Suite::Main)
}

fn figure2_ground_truth() -> Outcome {
    let ex = figure2_example();
    let m = &ex.matroid;
    let through = |sets: &[u16], label: &str| sets.iter().filter(|&&z| z & (1 << ex.el(label)) != 0).count();
    let w2 = flats_of_rank(m, 2);
    let cyc2 = cyclic_flats_of_rank(m, 2);
    let mut errors = Vec::new();
    let mut expect = |what: &str, got: usize, want: usize| {
        if got != want {
            errors.push(format!("{what} = {got}, expected {want}"));
        }
    };
    expect("W_2(x1)", through(&w2, "x1"), 4);
    expect("W_2(x3)", through(&w2, "x3"), 3);
    expect("rank-2 cyclic flats through x3", through(&cyc2, "x3"), 2);
    expect("rank-2 cyclic flats through x1", through(&cyc2, "x1"), 1);

    let pairs: Vec<(String, String)> =
        clone_pairs(m).into_iter().map(|(a, b)| (ex.labels[a].clone(), ex.labels[b].clone())).collect();
    let mut want = vec![("x1", "x2"), ("x3", "x3'"), ("x4", "x5")];
    want.sort();
    let want: Vec<(String, String)> = want.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    if pairs != want {
        errors.push(format!("clone pairs {pairs:?}, expected {want:?}"));
    }
    let x6 = ex.el("x6");
    if !(0..m.n()).filter(|&e| e != x6).all(|e| freer_than(m, x6, e).unwrap().is_freer()) {
        errors.push("x6 is not freer than every element".into());
    }
    let (x1, x5) = (ex.el("x1"), ex.el("x5"));
    if freer_than(m, x1, x5).unwrap().is_freer() || freer_than(m, x5, x1).unwrap().is_freer() {
        errors.push("x1 and x5 are comparable".into());
    }
    check(errors.is_empty(), if errors.is_empty() { "all figure values match".into() } else { errors.join("; ") })
}

fn counterexample_reproduced() -> Outcome {
    let ex = spanning_circuit_counterexample();
    let m = &ex.matroid;
    let (f, g) = (ex.el("f"), ex.el("g"));
    let cs = circuits(m);
    let spanning_through = |e: usize| cs.iter().filter(|&&c| c & (1 << e) != 0 && rank(m, c) == m.rank()).count();
    let full = ((1u32 << m.n()) - 1) as u16;
    let coloops = (0..m.n()).filter(|&e| rank(m, full & !(1 << e)) < m.rank()).count();
    // a 2-cocircuit is a pair whose removal drops the rank
    let series = (0..m.n())
        .flat_map(|a| ((a + 1)..m.n()).map(move |b| (a, b)))
        .filter(|&(a, b)| rank(m, full & !(1 << a)) == m.rank() && rank(m, full & !(1 << b)) == m.rank())
        .filter(|&(a, b)| rank(m, full & !(1 << a) & !(1 << b)) < m.rank())
        .count();
    let facts = [
        ("rank 5", m.rank() == 5),
        ("no spanning circuit through f", spanning_through(f) == 0),
        ("no spanning circuit through g", spanning_through(g) == 0),
        ("f freer than g", freer_than(m, f, g).unwrap().is_freer()),
        ("f, g not clones", !are_clones(m, f, g).unwrap()),
        ("no coloops", coloops == 0),
        ("no 2-cocircuits", series == 0),
    ];
    let failed: Vec<&str> = facts.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    check(
        failed.is_empty(),
        if failed.is_empty() { format!("n={}, all {} properties hold", m.n(), facts.len()) } else { format!("violated: {}", failed.join(", ")) },
    )
}

fn catalog_consistency() -> Outcome {
    let mut errors = Vec::new();
    for n in 0..=6 {
        let by_ext = representatives_by_extension(n).expect("extension");
        let by_dedup = representatives_by_dedup(n).expect("dedup");
        for r in 0..=n {
            let a: Vec<&Matroid> = by_ext.entries.iter().filter(|m| m.rank() == r).collect();
            let b: Vec<&Matroid> = by_dedup.entries.iter().filter(|m| m.rank() == r).collect();
            if a != b {
                errors.push(format!("n={n} r={r}: {} by extension vs {} by dedup", a.len(), b.len()));
            }
        }
    }
    let mut fact = 1usize;
    let mut orbit_report = Vec::new();
    for n in 0..=5 {
        if n > 0 {
            fact *= n;
        }
        let labeled = labeled_catalog(n).expect("labeled");
        let total: usize = (0..=n).map(|r| brute_force_labeled(n, r).unwrap().len()).sum();
        if total != labeled.len() {
            errors.push(format!("n={n}: labeled catalog size {} vs {total}", labeled.len()));
        }
        let orbits: BTreeMap<_, _> = orbit_sizes(&labeled);
        let reps = generate_representatives(n).unwrap();
        if orbits.len() != reps.len() {
            errors.push(format!("n={n}: {} orbits vs {} representatives", orbits.len(), reps.len()));
        }
        for (key, size) in &orbits {
            let aut = automorphism_count(&key.to_matroid());
            if size * aut != fact {
                errors.push(format!("n={n}: orbit of size {size} with {aut} automorphisms"));
            }
        }
        orbit_report.push(format!("{}:{}", labeled.len(), reps.len()));
    }
    check(
        errors.is_empty(),
        if errors.is_empty() { format!("labeled:classes for n=0..5 = {}", orbit_report.join(" ")) } else { errors.join("; ") },
    )
}

/// Replaces `U_{2,4}` on four elements by the non-matroid
/// `{{0,1},{0,2},{0,3},{1,3}}` and requires every suite to notice. Failures
/// are reported as law-check failures + entry-integrity failures.
fn mutation_sensitivity() -> Outcome {
    let mut input = SuiteInput::new(5, default_grid(), DEFAULT_SEED).expect("suite input");
    let family = [[0, 1], [0, 2], [0, 3], [1, 3]].map(|s| ElementSet::from_indices(4, s).unwrap()).to_vec();
    let bad = Matroid::from_bases_unchecked(4, 2, family).expect("well-formed family");
    let replaced = input.corrupt(4, |m| m.rank() == 2 && m.num_bases() == 6, &bad);
    if replaced != 2 {
        return Err(format!("corrupted {replaced} catalog entries, expected 2"));
    }
    let counts: Vec<(Suite, usize, usize)> = Suite::ALL
        .iter()
        .map(|&s| {
            let r = run_suite(s, &input);
            let integrity = r.failures.iter().filter(|f| f.check == INTEGRITY_CHECK).count();
            (s, r.failures.len() - integrity, integrity)
        })
        .collect();
    let summary = counts.iter().map(|(s, t, i)| format!("{s}={t}+{i}")).collect::<Vec<_>>().join(" ");
    check(counts.iter().all(|&(_, t, i)| t + i > 0), format!("failures per suite: {summary}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let input = SuiteInput::new(6, default_grid(), DEFAULT_SEED).expect("suite input");
    let criteria: Vec<Criterion> = vec![
        ("tutte deletion-contraction equals subset expansion", Box::new(tutte_oracle_equivalence)),
        ("bases, independent and spanning counts", Box::new(counting_identities)),
        ("weak-pair sign law on the default grid", Box::new(|| weak_order_sweep(&input))),
        ("loop/coloop monomial sign law", Box::new(|| suite_clean(&input, Suite::MonomialBound))),
        ("strict counts and axis inequalities on weak pairs", Box::new(|| suite_clean(&input, Suite::CountGrowth))),
        ("figure example ground truth", Box::new(figure2_ground_truth)),
        ("structural identities", Box::new(|| suite_clean(&input, Suite::Structural))),
        ("count equality characterizations", Box::new(|| suite_clean(&input, Suite::Equality))),
        ("spanning-circuit counterexample", Box::new(counterexample_reproduced)),
        ("catalog self-consistency", Box::new(catalog_consistency)),
        ("mutation sensitivity", Box::new(mutation_sensitivity)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
