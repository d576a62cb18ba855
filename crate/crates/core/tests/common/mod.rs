#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;

use matro::catalog::{generate_representatives, labeled_catalog};
use matro::Matroid;

/// Every labeled matroid on at most five elements plus all six-element ones.
pub fn labeled_upto_6() -> &'static [Matroid] {
    static ALL: OnceLock<Vec<Matroid>> = OnceLock::new();
    ALL.get_or_init(|| (0..=6).flat_map(|n| labeled_catalog(n).unwrap().entries).collect())
}

/// One matroid per isomorphism class on at most seven elements.
pub fn representatives_upto_7() -> &'static [Matroid] {
    static ALL: OnceLock<Vec<Matroid>> = OnceLock::new();
    ALL.get_or_init(|| (0..=7).flat_map(|n| generate_representatives(n).unwrap().entries).collect())
}

pub fn labeled_matroid() -> impl Strategy<Value = Matroid> {
    (0..labeled_upto_6().len()).prop_map(|i| labeled_upto_6()[i].clone())
}

pub fn representative() -> impl Strategy<Value = Matroid> {
    (0..representatives_upto_7().len()).prop_map(|i| representatives_upto_7()[i].clone())
}

/// A matroid with a random permutation of its ground set (old index to new).
pub fn with_permutation(m: impl Strategy<Value = Matroid>) -> impl Strategy<Value = (Matroid, Vec<usize>)> {
    m.prop_flat_map(|m| {
        let perm = Just((0..m.n()).collect::<Vec<usize>>()).prop_shuffle();
        (Just(m), perm)
    })
}

/// A matroid with a random subset of its ground set, as bits.
pub fn with_subset(m: impl Strategy<Value = Matroid>) -> impl Strategy<Value = (Matroid, u16)> {
    m.prop_flat_map(|m| {
        let top = 1u32 << m.n();
        (Just(m), (0..top).prop_map(|b| b as u16))
    })
}

/// A matroid on at least two elements with an ordered pair of distinct elements.
pub fn with_pair(m: impl Strategy<Value = Matroid>) -> impl Strategy<Value = (Matroid, usize, usize)> {
    m.prop_filter("needs two elements", |m| m.n() >= 2).prop_flat_map(|m| {
        let n = m.n();
        (Just(m), 0..n, 1..n).prop_map(move |(m, f, d)| (m, f, (f + d) % n))
    })
}

/// Rank straight from the bases.
pub fn rank(m: &Matroid, a: u16) -> usize {
    m.bases().iter().map(|b| (b.bits() & a).count_ones() as usize).max().unwrap_or(0)
}
