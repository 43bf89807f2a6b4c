//! The parking procedure on a tree and the subtree-count characterizations.
//!
//! Driver `i` starts at node `s_i`, walks toward the root and parks on the
//! first free node. A sequence of length `n` is a parking function iff every
//! subtree `T_v` receives at least `|T_v|` preferences; it is prime iff this is
//! strict at every non-root node.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::families::LabelledTree;

/// Preferences `s_1, …, s_m` as node labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceSequence {
    entries: Vec<usize>,
    multiset: bool,
}

impl PreferenceSequence {
    pub fn sequence(entries: Vec<usize>) -> Self {
        PreferenceSequence {
            entries,
            multiset: false,
        }
    }

    /// A multiset, stored sorted non-decreasingly.
    pub fn multiset(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        PreferenceSequence {
            entries,
            multiset: true,
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_multiset(&self) -> bool {
        self.multiset
    }

    /// The sequence `(s_{π(1)}, …, s_{π(m)})` for a permutation of `0..m`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PreferenceSequence::sequence(perm.iter().map(|&i| self.entries[i]).collect())
    }

    pub fn prefix(&self, k: usize) -> Self {
        PreferenceSequence {
            entries: self.entries[..k].to_vec(),
            multiset: self.multiset,
        }
    }

    fn check_labels(&self, n: usize) -> Result<()> {
        match self.entries.iter().find(|&&s| s == 0 || s > n) {
            Some(s) => Err(domain(format!("preference {s} outside 1..={n}"))),
            None => Ok(()),
        }
    }
}

/// Result of running the parking procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParkingOutcome {
    pub success: bool,
    /// `parked_at[i]` is the node where driver `i + 1` parked.
    pub parked_at: Vec<Option<usize>>,
    /// Used edges `(v, parent(v))`.
    pub used_edges: BTreeSet<(usize, usize)>,
    /// 1-based index of the first driver that could not park.
    pub failed_driver: Option<usize>,
}

impl ParkingOutcome {
    pub fn occupied(&self) -> BTreeSet<usize> {
        self.parked_at.iter().flatten().copied().collect()
    }

    pub fn all_edges_used(&self, t: &LabelledTree) -> bool {
        self.used_edges.len() == t.n() - 1
    }
}

pub fn simulate(t: &LabelledTree, s: &PreferenceSequence) -> Result<ParkingOutcome> {
    s.check_labels(t.n())?;
    let parent = t.parent_idx();
    let mut occupied = vec![false; t.n()];
    let mut out = ParkingOutcome {
        success: true,
        parked_at: vec![None; s.len()],
        used_edges: BTreeSet::new(),
        failed_driver: None,
    };
    for (i, &start) in s.entries().iter().enumerate() {
        let mut v = start - 1;
        let mut path = Vec::new();
        let spot = loop {
            if !occupied[v] {
                break Some(v);
            }
            match parent[v] {
                Some(p) => {
                    path.push((v + 1, p + 1));
                    v = p;
                }
                None => break None,
            }
        };
        match spot {
            Some(v) => {
                occupied[v] = true;
                out.parked_at[i] = Some(v + 1);
                out.used_edges.extend(path);
            }
            None => {
                out.success = false;
                out.failed_driver = Some(i + 1);
                break;
            }
        }
    }
    Ok(out)
}

pub fn is_parking_function(t: &LabelledTree, s: &PreferenceSequence) -> Result<bool> {
    Ok(characterize(t, s)?.0)
}

pub fn is_prime(t: &LabelledTree, s: &PreferenceSequence) -> Result<bool> {
    Ok(characterize(t, s)?.1)
}

pub fn is_general_parking(t: &LabelledTree, s: &PreferenceSequence) -> Result<bool> {
    if s.len() > t.n() {
        return Err(domain(format!(
            "{} drivers exceed {} nodes",
            s.len(),
            t.n()
        )));
    }
    Ok(simulate(t, s)?.success)
}

fn characterize(t: &LabelledTree, s: &PreferenceSequence) -> Result<(bool, bool)> {
    if s.len() != t.n() {
        return Err(domain(format!(
            "expected {} preferences, got {}",
            t.n(),
            s.len()
        )));
    }
    s.check_labels(t.n())?;
    let mut mult = vec![0u32; t.n()];
    for &v in s.entries() {
        mult[v - 1] += 1;
    }
    Ok(Prepared::new(t).classify(&mult, &mut vec![0; t.n()]))
}

/// A tree preprocessed for repeated predicate evaluation.
pub(crate) struct Prepared {
    parent: Vec<Option<usize>>,
    postorder: Vec<usize>,
    size: Vec<u32>,
    root: usize,
}

impl Prepared {
    pub(crate) fn new(t: &LabelledTree) -> Self {
        let parent = t.parent_idx().to_vec();
        let mut postorder = t.preorder();
        postorder.reverse();
        let mut size = vec![1u32; t.n()];
        for &v in &postorder {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        Prepared {
            root: t.root() - 1,
            parent,
            postorder,
            size,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.parent.len()
    }

    /// `(parking, prime)` for preference multiplicities `mult` (indexed by node).
    pub(crate) fn classify(&self, mult: &[u32], acc: &mut [u32]) -> (bool, bool) {
        acc.copy_from_slice(mult);
        let mut prime = true;
        for &v in &self.postorder {
            let have = acc[v];
            if have < self.size[v] {
                return (false, false);
            }
            if v != self.root && have == self.size[v] {
                prime = false;
            }
            if let Some(p) = self.parent[v] {
                acc[p] += have;
            }
        }
        (true, prime)
    }

    /// Runs the procedure for 0-based preferences, reporting success only.
    pub(crate) fn parks(&self, prefs: &[usize], occupied: &mut [bool]) -> bool {
        occupied.fill(false);
        for &start in prefs {
            let mut v = start;
            loop {
                if !occupied[v] {
                    occupied[v] = true;
                    break;
                }
                match self.parent[v] {
                    Some(p) => v = p,
                    None => return false,
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;

    fn chain() -> LabelledTree {
        // leaf 2 -> root 1
        LabelledTree::parse(Family::Ordered, "1(2)").unwrap()
    }

    fn seq(v: &[usize]) -> PreferenceSequence {
        PreferenceSequence::sequence(v.to_vec())
    }

    #[test]
    fn single_node() {
        let o = simulate(&LabelledTree::single(), &seq(&[1])).unwrap();
        assert!(o.success);
        assert_eq!(o.occupied(), BTreeSet::from([1]));
        assert!(o.used_edges.is_empty());
    }

    #[test]
    fn chain_examples() {
        let t = chain();
        let o = simulate(&t, &seq(&[1, 1])).unwrap();
        assert!(!o.success);
        assert_eq!(o.failed_driver, Some(2));
        assert_eq!(o.parked_at, vec![Some(1), None]);

        let o = simulate(&t, &seq(&[2, 2])).unwrap();
        assert!(o.success && o.all_edges_used(&t));
        assert_eq!(o.used_edges, BTreeSet::from([(2, 1)]));

        assert!(is_parking_function(&t, &seq(&[2, 1])).unwrap());
        assert!(!is_prime(&t, &seq(&[2, 1])).unwrap());
        assert!(is_prime(&t, &seq(&[2, 2])).unwrap());
        assert!(!is_parking_function(&t, &seq(&[1, 1])).unwrap());
    }

    #[test]
    fn empty_general_sequence_parks() {
        assert!(is_general_parking(&chain(), &seq(&[])).unwrap());
    }

    #[test]
    fn domain_errors() {
        assert!(simulate(&chain(), &seq(&[3])).is_err());
        assert!(is_parking_function(&chain(), &seq(&[1])).is_err());
        assert!(is_general_parking(&chain(), &seq(&[1, 2, 2])).is_err());
    }

    #[test]
    fn multiset_is_sorted() {
        let s = PreferenceSequence::multiset(vec![3, 1, 2, 1]);
        assert_eq!(s.entries(), &[1, 1, 2, 3]);
        assert!(s.is_multiset());
    }
}
