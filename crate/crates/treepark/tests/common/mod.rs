//! Shared helpers for the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use treepark::families::{Family, LabelledTree};
use treepark::parking::PreferenceSequence;

/// Families whose trees grow one node at a time (strict binary trees do not).
pub const GROWABLE: [Family; 6] = [
    Family::Ordered,
    Family::Unordered,
    Family::DAry(2),
    Family::DAry(3),
    Family::DBundled(2),
    Family::Motzkin,
];

/// A random member of `family` of size `n`, grown one attachment at a time
/// and then relabelled by a random permutation.
pub fn random_tree(family: Family, n: usize, rng: &mut impl Rng) -> LabelledTree {
    let mut t = LabelledTree::single();
    while t.n() < n {
        let ext = t.extensions(family);
        t = ext.choose(rng).expect("family admits growth").clone();
    }
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    relabel(family, &t, &perm)
}

/// The tree with label `v` renamed to `perm[v - 1]`.
pub fn relabel(family: Family, t: &LabelledTree, perm: &[usize]) -> LabelledTree {
    let mut layouts = vec![None; t.n()];
    for v in 1..=t.n() {
        let layout = t.layout(v);
        layouts[perm[v - 1] - 1] = Some(relabel_layout(&layout, perm));
    }
    let t = LabelledTree::from_layouts(layouts.into_iter().map(Option::unwrap).collect())
        .expect("relabelling keeps a tree");
    assert!(t.belongs_to(family), "{family}: {t}");
    t
}

fn relabel_layout(
    layout: &treepark::families::Layout<usize>,
    perm: &[usize],
) -> treepark::families::Layout<usize> {
    use treepark::families::Layout::*;
    let p = |c: &usize| perm[c - 1];
    match layout {
        Seq(v) => Seq(v.iter().map(p).collect()),
        Set(v) => Set(v.iter().map(p).sorted().collect()),
        Bundles(b) => Bundles(b.iter().map(|v| v.iter().map(p).collect()).collect()),
        Slots(s) => Slots(s.iter().map(|x| x.as_ref().map(p)).collect()),
    }
}

pub fn random_sequence(n: usize, m: usize, rng: &mut impl Rng) -> PreferenceSequence {
    PreferenceSequence::sequence((0..m).map(|_| rng.gen_range(1..=n)).collect())
}

/// A sequence biased toward parking: mostly deep preferences.
pub fn random_parking_candidate(t: &LabelledTree, rng: &mut impl Rng) -> PreferenceSequence {
    let n = t.n();
    let leaves: Vec<usize> = (1..=n).filter(|&v| t.children(v).is_empty()).collect();
    PreferenceSequence::sequence(
        (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    *leaves.choose(rng).expect("a tree has a leaf")
                } else {
                    rng.gen_range(1..=n)
                }
            })
            .collect(),
    )
}

pub fn random_permutation(m: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    p
}

/// Every sequence in `[n]^m`.
pub fn all_sequences(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(m as u32);
    (0..total).map(move |mut code| {
        (0..m)
            .map(|_| {
                let v = code % n + 1;
                code /= n;
                v
            })
            .collect()
    })
}
