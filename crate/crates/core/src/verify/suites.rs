use num_bigint::BigInt;
use rayon::prelude::*;

use super::{Failure, GridPoint, SuiteInput, Tally};
use crate::canonical::is_isomorphic;
use crate::constructions::{
    circuit_hyperplanes, contract, delete, delete_element, direct_sum, dual, relax, restrict, spanning_circuit_counterexample,
    truncation_power, uniform, contract_element,
};
use crate::matroid::Matroid;
use crate::order::{
    are_clones, b_through, circuits_through, flats_k_through, freer_than, freer_than_circuits, h_through,
    identity_is_rp_weak_map, is_weak_map, phi_gf_check, spanning_circuits_through, Bijection, FreerWitness,
};
use crate::set::ElementSet;
use crate::tutte::{
    count_bases, count_independent, count_spanning, format_rational, hyperbola_check, parse_rational,
    tutte_subset_expansion, Rational, Sign, TuttePoly,
};

/// Structural checks that enumerate minors or restrictions stop at this size.
const EXHAUSTIVE_MINOR_MAX_N: usize = 6;
/// Equality characterizations are swept up to this size.
const EQUALITY_MAX_N: usize = 7;

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn values_at(t: &TuttePoly, points: &[(Rational, Rational)]) -> Vec<Rational> {
    points.iter().map(|(x, y)| t.evaluate(x, y)).collect()
}

fn grid_pairs(grid: &[GridPoint]) -> Vec<(Rational, Rational)> {
    grid.iter().map(|p| (p.x().clone(), p.y().clone())).collect()
}

/// Ordered pairs of distinct elements.
fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |f| (0..n).filter(move |&g| g != f).map(move |g| (f, g)))
}

fn freer_pairs(m: &Matroid) -> Vec<(usize, usize)> {
    ordered_pairs(m.n()).filter(|&(f, g)| freer_than(m, f, g).expect("distinct").is_freer()).collect()
}

/// `sgn(T(M) - T(N))` must equal `sgn(x + y - xy)` unless `M ≅ N`, when it is 0.
pub(super) fn weak_pair_signs(input: &SuiteInput) -> Tally {
    let sweep = input.weak_pairs();
    let points = grid_pairs(&input.grid);
    let values: Vec<Vec<Rational>> =
        sweep.matroids.par_iter().map(|m| values_at(&input.tutte(m), &points)).collect();
    sweep
        .pairs
        .par_iter()
        .map(|&(i, j)| {
            let (m, n) = (&sweep.matroids[i], &sweep.matroids[j]);
            let iso = is_isomorphic(m, n);
            let mut tally = Tally::default();
            for (k, p) in input.grid.iter().enumerate() {
                let expected = if iso { Sign::Zero } else { p.side() };
                let actual = Sign::of(&(&values[i][k] - &values[j][k]));
                tally.check(actual == expected, || Failure::new("weak-pair-sign", &[m, n], Some(p), expected, actual));
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

/// Strict growth of bases, independent and spanning sets along weak maps, and
/// the axis inequalities for loopless (resp. coloop-free) `M`.
pub(super) fn count_growth(input: &SuiteInput) -> Tally {
    let sweep = input.weak_pairs();
    let axis = ["1/2", "1", "2", "3"].map(q);
    let mut points = vec![(int(1), int(1)), (int(2), int(1)), (int(1), int(2))];
    points.extend(axis.iter().map(|x| (x.clone(), int(0))));
    points.extend(axis.iter().map(|y| (int(0), y.clone())));
    let values: Vec<Vec<Rational>> =
        sweep.matroids.par_iter().map(|m| values_at(&input.tutte(m), &points)).collect();
    sweep
        .pairs
        .par_iter()
        .map(|&(i, j)| {
            let (m, n) = (&sweep.matroids[i], &sweep.matroids[j]);
            let mut tally = Tally::default();
            if is_isomorphic(m, n) {
                return tally;
            }
            let (a, b) = (&values[i], &values[j]);
            for (k, name) in ["bases-strict", "independent-strict", "spanning-strict"].iter().enumerate() {
                tally.check(a[k] > b[k], || {
                    Failure::new(name, &[m, n], None, format!("> {}", format_rational(&b[k])), format_rational(&a[k]))
                });
            }
            let checks = [("loopless-x-axis", 3, m.loops().is_empty()), ("coloop-free-y-axis", 7, m.coloops().is_empty())];
            for (name, base, applies) in checks {
                if !applies {
                    continue;
                }
                for k in base..base + axis.len() {
                    tally.check(a[k] >= b[k], || {
                        let (x, y) = &points[k];
                        Failure::new(
                            &format!("{name} at ({}, {})", format_rational(x), format_rational(y)),
                            &[m, n],
                            None,
                            format!(">= {}", format_rational(&b[k])),
                            format_rational(&a[k]),
                        )
                    });
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

/// `sgn(T(M) - x^k y^m) = sgn(x + y - xy)` for rank `k`, nullity `m`, unless
/// `M ≅ U_{k,k} ⊕ U_{0,m}`, whose polynomial is exactly `x^k y^m`.
pub(super) fn monomial_bound(input: &SuiteInput) -> Tally {
    let singles: Vec<&Matroid> = input.singles().filter(|m| m.n() >= 2).collect();
    singles
        .par_iter()
        .map(|&m| {
            let mut tally = Tally::default();
            let (k, nullity) = (m.rank(), m.nullity());
            let t = input.tutte(m);
            let mono = TuttePoly::monomial(k, nullity);
            let trivial = direct_sum(&uniform(k, k).expect("k <= k"), &uniform(0, nullity).expect("0 <= m"))
                .expect("same size as M");
            if is_isomorphic(m, &trivial) {
                tally.check(t == mono, || Failure::new("monomial-equal", &[m], None, &mono, &t));
                return tally;
            }
            for p in &input.grid {
                let diff = t.evaluate(p.x(), p.y()) - mono.evaluate(p.x(), p.y());
                let actual = Sign::of(&diff);
                tally.check(actual == p.side(), || Failure::new("monomial-sign", &[m], Some(p), p.side(), actual));
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

fn sign_law(
    tally: &mut Tally,
    input: &SuiteInput,
    name: &str,
    larger: &Matroid,
    smaller: &Matroid,
    context: &Matroid,
) {
    let iso = is_isomorphic(larger, smaller);
    let (ta, tb) = (input.tutte(larger), input.tutte(smaller));
    for p in &input.grid {
        let expected = if iso { Sign::Zero } else { p.side() };
        let actual = Sign::of(&(ta.evaluate(p.x(), p.y()) - tb.evaluate(p.x(), p.y())));
        tally.check(actual == expected, || Failure::new(name, &[context, larger, smaller], Some(p), expected, actual));
    }
}

/// For every freer pair: the Tutte sign laws for `M/f` vs `M/g` and `M\g` vs
/// `M\f`, the four counting inequalities and the spanning-circuit inequality.
pub(super) fn freedom_consequences(input: &SuiteInput) -> Tally {
    let singles: Vec<&Matroid> = input.singles().collect();
    singles
        .par_iter()
        .map(|&m| {
            let mut tally = Tally::default();
            for (f, g) in freer_pairs(m) {
                let tag = |name: &str| format!("{name} f={f} g={g}");
                if !m.is_loop(g) {
                    let (mf, mg) = (contract_element(m, f).matroid, contract_element(m, g).matroid);
                    sign_law(&mut tally, input, &tag("contraction-sign"), &mf, &mg, m);
                }
                // The dual of the contraction proviso: f must not be a coloop
                // (a coloop f and a loop g already break the law at (1, 1)).
                if !m.is_coloop(g) && !m.is_coloop(f) {
                    let (mf, mg) = (delete_element(m, f).matroid, delete_element(m, g).matroid);
                    sign_law(&mut tally, input, &tag("deletion-sign"), &mg, &mf, m);
                }
                let mut at_least = |name: &str, a: usize, b: usize| {
                    tally.check(a >= b, || Failure::new(&tag(name), &[m], None, format!(">= {b}"), a));
                };
                at_least("bases-through", b_through(m, f), b_through(m, g));
                if !m.is_loop(g) {
                    for k in 0..=m.rank() {
                        at_least(&format!("rank-{k}-flats-through"), flats_k_through(m, f, k), flats_k_through(m, g, k));
                    }
                    at_least("hyperplanes-through", h_through(m, f), h_through(m, g));
                }
                if !m.is_coloop(f) {
                    at_least("circuits-through", circuits_through(m, f), circuits_through(m, g));
                    at_least(
                        "spanning-circuits-through",
                        spanning_circuits_through(m, f),
                        spanning_circuits_through(m, g),
                    );
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

/// `M` minus every element other than `f`, `g` parallel to `to`, with the new
/// positions of `f` and `g`.
fn strip_parallel(m: &Matroid, f: usize, g: usize, to: usize) -> (Matroid, usize, usize) {
    let x = ElementSet::from_indices(m.n(), (0..m.n()).filter(|&e| e != f && e != g && m.are_parallel(e, to)))
        .expect("in range");
    let minor = delete(m, x);
    let (nf, ng) = (minor.new_index(f).expect("kept"), minor.new_index(g).expect("kept"));
    (minor.matroid, nf, ng)
}

/// `M` with every element other than `f`, `g` in series with `f` contracted.
fn contract_series(m: &Matroid, f: usize, g: usize) -> (Matroid, usize, usize) {
    let y = ElementSet::from_indices(m.n(), (0..m.n()).filter(|&e| e != f && e != g && m.are_in_series(e, f)))
        .expect("in range");
    let minor = contract(m, y);
    let (nf, ng) = (minor.new_index(f).expect("kept"), minor.new_index(g).expect("kept"));
    (minor.matroid, nf, ng)
}

fn clones(m: &Matroid, a: usize, b: usize) -> bool {
    are_clones(m, a, b).expect("distinct elements")
}

fn equality_checks(tally: &mut Tally, m: &Matroid, f: usize, g: usize) {
    let tag = |name: &str| format!("{name} f={f} g={g}");
    let mut iff = |name: &str, counts: (usize, usize), witness: &Matroid, are: bool| {
        let equal = counts.0 == counts.1;
        tally.check(equal == are, || {
            Failure::new(
                &tag(name),
                &[m, witness],
                None,
                format!("counts equal iff clones (clones: {are})"),
                format!("counts {} and {}", counts.0, counts.1),
            )
        });
    };
    iff("bases-equality", (b_through(m, f), b_through(m, g)), m, clones(m, f, g));

    let (l, lf, lg) = strip_parallel(m, f, g, g);
    iff("hyperplane-equality", (h_through(m, f), h_through(m, g)), &l, clones(&l, lf, lg));

    let (s, sf, sg) = contract_series(m, f, g);
    iff("circuit-equality", (circuits_through(m, f), circuits_through(m, g)), &s, clones(&s, sf, sg));

    let r = m.rank();
    if r >= 2 {
        let t = truncation_power(m, 1).expect("rank at least 2");
        let (l, lf, lg) = strip_parallel(&t, f, g, g);
        let counts = (flats_k_through(m, f, r - 2), flats_k_through(m, g, r - 2));
        iff("truncation-flat-equality", counts, &l, clones(&l, lf, lg));
        for k in 1..r {
            let t = truncation_power(m, r - k - 1).expect("rank stays positive");
            let (l, lf, lg) = strip_parallel(&t, f, g, g);
            let counts = (flats_k_through(m, f, k), flats_k_through(m, g, k));
            iff(&format!("rank-{k}-flat-equality"), counts, &l, clones(&l, lf, lg));
        }
    }
}

/// Count equalities versus clones: bases in `M`, hyperplanes in `M` stripped
/// of `g`-parallels, circuits in `M` with `f`-series elements contracted, and
/// rank-`k` flats in stripped truncations. Also confirms that the
/// spanning-circuit count admits no such characterization.
pub(super) fn equality_characterizations(input: &SuiteInput) -> Tally {
    let singles: Vec<&Matroid> = input.singles().filter(|m| m.n() <= EQUALITY_MAX_N).collect();
    let mut tally = singles
        .par_iter()
        .map(|&m| {
            let mut tally = Tally::default();
            for (f, g) in freer_pairs(m) {
                equality_checks(&mut tally, m, f, g);
            }
            tally
        })
        .reduce(Tally::default, Tally::merge);

    let ex = spanning_circuit_counterexample();
    let m = &ex.matroid;
    let (f, g) = (ex.el("f"), ex.el("g"));
    let mut claim = |name: &str, ok: bool| {
        tally.check(ok, || Failure::new(&format!("counterexample {name}"), &[m], None, true, false));
    };
    claim("has rank 5", m.rank() == 5);
    claim("f freer than g", freer_than(m, f, g).map(|w| w.is_freer()).unwrap_or(false));
    claim("no spanning circuit through f", spanning_circuits_through(m, f) == 0);
    claim("no spanning circuit through g", spanning_circuits_through(m, g) == 0);
    claim("f and g are not clones", !clones(m, f, g));
    claim("is cosimple", m.coloops().is_empty() && ordered_pairs(m.n()).all(|(a, b)| !m.are_in_series(a, b)));
    equality_checks(&mut tally, m, f, g);
    tally
}

fn structural_single(input: &SuiteInput, m: &Matroid) -> Tally {
    let mut tally = Tally::default();
    let n = m.n();
    let t = input.tutte(m);
    let d = dual(m);
    let td = input.tutte(&d);

    let subset = tutte_subset_expansion(m);
    tally.check(t == subset, || Failure::new("delcon-equals-subset-expansion", &[m], None, &subset, &t));
    tally.check(td == t.transpose(), || Failure::new("dual-transposes-tutte", &[m, &d], None, t.transpose(), &td));
    tally.check(t.is_nonnegative(), || Failure::new("nonnegative-coefficients", &[m], None, "all >= 0", &t));

    let all = m.ground_set().subsets();
    let (mut indep, mut spanning) = (0usize, 0usize);
    for a in all {
        indep += m.is_independent(a) as usize;
        spanning += m.is_spanning(a) as usize;
    }
    let counts = [
        ("count-bases", count_bases(&t), m.num_bases()),
        ("count-independent", count_independent(&t), indep),
        ("count-spanning", count_spanning(&t), spanning),
    ];
    for (name, from_poly, direct) in counts {
        tally.check(from_poly == BigInt::from(direct), || Failure::new(name, &[m], None, direct, &from_poly));
    }

    for x in ["3/2", "2", "3"].map(q) {
        let ok = hyperbola_check(&t, &x).unwrap_or(false);
        tally.check(ok, || Failure::new(&format!("hyperbola-identity x={}", format_rational(&x)), &[m], None, true, ok));
    }

    let xy_shift = TuttePoly::monomial(1, 0).add(&TuttePoly::monomial(0, 1));
    for x in circuit_hyperplanes(m) {
        match relax(m, x) {
            Ok(relaxed) => {
                let tr = input.tutte(&relaxed);
                // T(relaxed) + xy = T(M) + x + y
                let lhs = tr.add(&TuttePoly::monomial(1, 1));
                let rhs = t.add(&xy_shift);
                tally.check(lhs.difference(&rhs).is_empty(), || {
                    Failure::new(&format!("relaxation-identity X={{{x}}}"), &[m, &relaxed], None, &rhs, &lhs)
                });
            }
            Err(e) => tally.check(false, || Failure::new(&format!("relaxation X={{{x}}}"), &[m], None, "relaxed", e)),
        }
    }

    for e in 0..n {
        if !m.is_loop(e) {
            let minor = contract_element(m, e).matroid;
            let b = count_bases(&input.tutte(&minor));
            let through = b_through(m, e);
            tally.check(b == BigInt::from(through), || {
                Failure::new(&format!("bases-through-by-contraction e={e}"), &[m], None, through, &b)
            });
        }
        let gamma = circuits_through(m, e);
        let via_dual = d.hyperplanes().len() - h_through(&d, e);
        tally.check(gamma == via_dual, || {
            Failure::new(&format!("circuits-through-by-dual e={e}"), &[m], None, via_dual, gamma)
        });
    }

    for (f, g) in ordered_pairs(n) {
        let tag = |name: &str| format!("{name} f={f} g={g}");
        let witness = freer_than(m, f, g).expect("distinct");
        let by_circuits = freer_than_circuits(m, f, g).expect("distinct");
        tally.check(witness.is_freer() == by_circuits, || {
            Failure::new(&tag("freer-characterizations-agree"), &[m], None, witness.is_freer(), by_circuits)
        });
        if let FreerWitness::NotFreer(z) = witness {
            let ok = m.cyclic_flats().contains(&z) && z.contains(f) && !z.contains(g);
            tally.check(ok, || Failure::new(&tag("freer-witness"), &[m], None, "cyclic flat with f without g", z));
        }
        let mutual = witness.is_freer() && freer_than(m, g, f).expect("distinct").is_freer();
        let cl = clones(m, f, g);
        tally.check(mutual == cl, || Failure::new(&tag("clones-iff-mutually-freer"), &[m], None, mutual, cl));

        if !witness.is_freer() {
            continue;
        }
        let dual_freer = freer_than(&d, g, f).expect("distinct").is_freer();
        tally.check(dual_freer, || Failure::new(&tag("freer-dualizes"), &[m, &d], None, true, dual_freer));
        if !m.is_loop(g) {
            let ok = phi_gf_check(m, f, g).unwrap_or(false);
            tally.check(ok, || Failure::new(&tag("freer-map-is-weak-map"), &[m], None, true, ok));
        }
        if n <= EXHAUSTIVE_MINOR_MAX_N {
            minor_persistence(&mut tally, m, f, g);
        }
    }
    if n <= EXHAUSTIVE_MINOR_MAX_N {
        restriction_criterion(&mut tally, m);
    }
    tally
}

/// `f` stays freer than `g` in every `M \ X / Y` with `X`, `Y` disjoint and
/// avoiding `{f, g}`.
fn minor_persistence(tally: &mut Tally, m: &Matroid, f: usize, g: usize) {
    let rest = m.ground_set().without(f).without(g);
    for x in rest.subsets() {
        for y in rest.difference(x).subsets() {
            let deleted = delete(m, x);
            let yd = deleted.map_set(y);
            let minor = contract(&deleted.matroid, yd);
            let nf = deleted.new_index(f).and_then(|i| minor.new_index(i)).expect("f kept");
            let ng = deleted.new_index(g).and_then(|i| minor.new_index(i)).expect("g kept");
            let ok = freer_than(&minor.matroid, nf, ng).map(|w| w.is_freer()).unwrap_or(false);
            tally.check(ok, || {
                Failure::new(
                    &format!("freer-persists-in-minors f={f} g={g} X={{{x}}} Y={{{y}}}"),
                    &[m, &minor.matroid],
                    None,
                    true,
                    ok,
                )
            });
        }
    }
}

/// `f` freer than `g` iff `b(f; N) >= b(g; N)` for every restriction `N ⊇ {f, g}`.
fn restriction_criterion(tally: &mut Tally, m: &Matroid) {
    for (f, g) in ordered_pairs(m.n()) {
        let pair = m.empty_set().with(f).with(g);
        let rest = m.ground_set().difference(pair);
        let holds = rest.subsets().all(|extra| {
            let minor = restrict(m, extra.union(pair));
            let (nf, ng) = (minor.new_index(f).expect("kept"), minor.new_index(g).expect("kept"));
            b_through(&minor.matroid, nf) >= b_through(&minor.matroid, ng)
        });
        let freer = freer_than(m, f, g).expect("distinct").is_freer();
        tally.check(freer == holds, || {
            Failure::new(&format!("restriction-criterion f={f} g={g}"), &[m], None, freer, holds)
        });
    }
}

/// Freedom, clone, minor, duality, relaxation and hyperbola facts on every
/// matroid, and duality of weak maps on every weak pair.
pub(super) fn structural_checks(input: &SuiteInput) -> Tally {
    let singles: Vec<&Matroid> = input.singles().collect();
    let tally = singles.par_iter().map(|&m| structural_single(input, m)).reduce(Tally::default, Tally::merge);

    let sweep = input.weak_pairs();
    let pairs = sweep
        .pairs
        .par_iter()
        .map(|&(i, j)| {
            let (m, n) = (&sweep.matroids[i], &sweep.matroids[j]);
            let mut tally = Tally::default();
            let id = Bijection::identity(m.n());
            let weak = is_weak_map(m, n, &id).unwrap_or(false) && m.rank() == n.rank();
            tally.check(weak, || Failure::new("identity-is-weak-map", &[m, n], None, true, weak));
            let (dm, dn) = (dual(m), dual(n));
            let ok = identity_is_rp_weak_map(&dm, &dn).unwrap_or(false);
            tally.check(ok, || Failure::new("weak-map-dualizes", &[m, n], None, true, ok));
            tally
        })
        .reduce(Tally::default, Tally::merge);
    tally.merge(pairs)
}
