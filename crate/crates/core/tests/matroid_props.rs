mod common;

use common::*;
use proptest::prelude::*;

use matro::constructions::dual;
use matro::ElementSet;

fn set(m: &matro::Matroid, bits: u16) -> ElementSet {
    ElementSet::from_bits(bits, m.n()).unwrap()
}

#[test]
fn circuits_match_minimal_dependent_sets() {
    for m in labeled_upto_6() {
        let dependent = |a: u16| rank(m, a) < a.count_ones() as usize;
        let mut brute: Vec<u16> = (0..1u32 << m.n())
            .map(|a| a as u16)
            .filter(|&a| dependent(a) && (0..m.n()).all(|e| a & (1 << e) == 0 || !dependent(a & !(1 << e))))
            .collect();
        let mut got: Vec<u16> = m.circuits().iter().map(|c| c.bits()).collect();
        brute.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, brute, "{m:?}");
    }
}

#[test]
fn hyperplanes_are_maximal_proper_flats() {
    for m in labeled_upto_6() {
        let full = m.ground_set().bits();
        let flats: Vec<u16> = (0..1u32 << m.n()).map(|a| a as u16).filter(|&a| m.is_flat(set(m, a))).collect();
        let mut maximal: Vec<u16> = flats
            .iter()
            .copied()
            .filter(|&z| z != full && flats.iter().all(|&w| w == z || w == full || w & z != z))
            .collect();
        let mut got: Vec<u16> = m.hyperplanes().iter().map(|h| h.bits()).collect();
        maximal.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, maximal, "{m:?}");
    }
}

proptest! {
    #[test]
    fn closure_is_a_closure_operator((m, a) in with_subset(labeled_matroid()), extra in any::<u16>()) {
        let a = set(&m, a);
        let b = set(&m, a.bits() | (extra & m.ground_set().bits()));
        let cl = m.closure(a);
        prop_assert!(a.is_subset(cl));
        prop_assert_eq!(m.closure(cl), cl);
        prop_assert!(cl.is_subset(m.closure(b)));
        prop_assert_eq!(m.rank_of(cl), m.rank_of(a));
        prop_assert_eq!(m.rank_of(a), rank(&m, a.bits()));
    }

    #[test]
    fn cyclic_flats_are_unions_of_their_circuits(m in labeled_matroid()) {
        for &z in m.cyclic_flats() {
            prop_assert!(m.is_flat(z));
            let union = m.circuits().iter().filter(|c| c.is_subset(z)).fold(0u16, |u, c| u | c.bits());
            prop_assert_eq!(union, z.bits());
        }
        // and every flat passing the test is listed
        let count = (0..1u32 << m.n())
            .map(|a| set(&m, a as u16))
            .filter(|&z| m.is_flat(z))
            .filter(|&z| m.circuits().iter().filter(|c| c.is_subset(z)).fold(0u16, |u, c| u | c.bits()) == z.bits())
            .count();
        prop_assert_eq!(count, m.cyclic_flats().len());
    }

    #[test]
    fn canonical_form_ignores_labels((m, perm) in with_permutation(representative())) {
        let relabeled = m.relabeled(&perm);
        prop_assert_eq!(relabeled.canonical_form(), m.canonical_form());
        prop_assert!(relabeled.is_isomorphic(&m));
    }

    #[test]
    fn loops_are_coloops_of_the_dual(m in labeled_matroid()) {
        let d = dual(&m);
        prop_assert_eq!(m.loops(), d.coloops());
        prop_assert_eq!(m.coloops(), d.loops());
        prop_assert_eq!(dual(&d), m);
    }
}

#[test]
fn distinct_representatives_are_not_isomorphic() {
    let reps = matro::catalog::generate_representatives(5).unwrap().entries;
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            assert!(!a.is_isomorphic(b));
        }
    }
}
