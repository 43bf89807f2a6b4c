//! Exhaustive counting over all trees and all preference inputs.
//!
//! For `m = n` kinds the subtree characterization is evaluated once per
//! multiset of preferences, and sequence counts are recovered with multinomial
//! weights. General kinds (`m ≤ n` drivers) run the parking procedure on every
//! sequence or multiset.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{generate_trees, Family, LabelledTree};
use crate::kind::CountKind;
use crate::parking::{
    is_general_parking, is_parking_function, is_prime, PreferenceSequence, Prepared,
};

/// Limits on exhaustive work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of predicate or simulation evaluations.
    pub max_evaluations: u64,
    pub general_functions_max_n: usize,
    pub general_distributions_max_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_evaluations: 4_000_000_000,
            general_functions_max_n: 5,
            general_distributions_max_n: 6,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_evaluations: u64::MAX,
            general_functions_max_n: usize::MAX,
            general_distributions_max_n: usize::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: Budget,
    /// Reuse per-tree counts across trees with the same unlabelled shape.
    pub shape_cache: bool,
    /// Iterate every sequence instead of multisets with multinomial weights.
    pub exhaustive_sequences: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: Budget::default(),
            shape_cache: true,
            exhaustive_sequences: false,
            workers: None,
        }
    }
}

pub fn count(family: Family, kind: CountKind, n: usize, opts: &CountOptions) -> Result<BigUint> {
    Ok(count_by_leaves(family, kind, n, opts)?.into_values().sum())
}

/// Counts refined by the number of leaves of the tree.
pub fn count_by_leaves(
    family: Family,
    kind: CountKind,
    n: usize,
    opts: &CountOptions,
) -> Result<BTreeMap<usize, BigUint>> {
    kind.check(n)?;
    check_caps(kind, n, &opts.budget)?;
    let stream = generate_trees(family, n)?;
    let run = || run_counts(stream, kind, opts);
    match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// `F_{n,m}` for `m = 0..=n`, as general function or distribution counts.
pub fn general_counts(
    family: Family,
    n: usize,
    distributions: bool,
    opts: &CountOptions,
) -> Result<Vec<BigUint>> {
    (0..=n)
        .map(|m| {
            let kind = if distributions {
                CountKind::GeneralDistributions(m)
            } else {
                CountKind::GeneralFunctions(m)
            };
            count(family, kind, n, opts)
        })
        .collect()
}

fn check_caps(kind: CountKind, n: usize, budget: &Budget) -> Result<()> {
    let cap = match kind {
        CountKind::GeneralFunctions(_) => budget.general_functions_max_n,
        CountKind::GeneralDistributions(_) => budget.general_distributions_max_n,
        _ => usize::MAX,
    };
    if n > cap {
        return Err(Error::BudgetExceeded {
            reason: format!("{kind} is capped at n <= {cap}, requested n = {n}"),
            trees_done: 0,
            evaluations: 0,
        });
    }
    Ok(())
}

fn run_counts(
    stream: crate::families::TreeStream,
    kind: CountKind,
    opts: &CountOptions,
) -> Result<BTreeMap<usize, BigUint>> {
    let evaluations = AtomicU64::new(0);
    let trees_done = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let limit = opts.budget.max_evaluations;
    let exhaustive = opts.exhaustive_sequences;
    let per_tree = |t: &LabelledTree| -> Option<u64> {
        let cost = input_count(kind, t.n());
        if evaluations
            .fetch_add(cost, Ordering::Relaxed)
            .saturating_add(cost)
            > limit
        {
            stop.store(true, Ordering::Relaxed);
            return None;
        }
        Some(tree_count(t, kind, exhaustive))
    };
    let partial: Vec<(usize, u64)> = stream
        .par_bridge()
        .map_init(HashMap::<Vec<u8>, u64>::new, |cache, t| {
            if stop.load(Ordering::Relaxed) {
                return None;
            }
            let c = if opts.shape_cache {
                let key = t.shape_key();
                match cache.get(&key) {
                    Some(&c) => c,
                    None => {
                        let c = per_tree(&t)?;
                        cache.insert(key, c);
                        c
                    }
                }
            } else {
                per_tree(&t)?
            };
            trees_done.fetch_add(1, Ordering::Relaxed);
            Some((t.count_leaves(), c))
        })
        .while_some()
        .collect();
    if stop.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            reason: format!("evaluation limit {limit} reached"),
            trees_done: trees_done.load(Ordering::Relaxed),
            evaluations: evaluations.load(Ordering::Relaxed),
        });
    }
    let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
    for (leaves, c) in partial {
        *out.entry(leaves).or_insert_with(BigUint::zero) += c;
    }
    Ok(out)
}

/// Number of inputs iterated per tree.
fn input_count(kind: CountKind, n: usize) -> u64 {
    let m = kind.drivers(n) as u32;
    let seqs = (n as u64).saturating_pow(m);
    match kind {
        CountKind::Functions | CountKind::PrimeFunctions => seqs,
        _ => multiset_count(n, m as usize),
    }
}

fn multiset_count(n: usize, m: usize) -> u64 {
    // C(n + m - 1, m)
    let mut acc: u64 = 1;
    for i in 0..m as u64 {
        acc = acc * (n as u64 + i) / (i + 1);
    }
    acc
}

/// Number of successful inputs of `kind` on one tree.
pub fn count_per_tree(t: &LabelledTree, kind: CountKind) -> Result<BigUint> {
    kind.check(t.n())?;
    Ok(BigUint::from(tree_count(t, kind, false)))
}

/// Oracle variant iterating every input through the public predicates.
pub fn count_per_tree_exhaustive(t: &LabelledTree, kind: CountKind) -> Result<BigUint> {
    kind.check(t.n())?;
    let n = t.n();
    let m = kind.drivers(n);
    let mut total = 0u64;
    let mut err = None;
    let mut test = |s: PreferenceSequence| {
        let ok = match kind {
            CountKind::Functions | CountKind::Distributions => is_parking_function(t, &s),
            CountKind::PrimeFunctions | CountKind::PrimeDistributions => is_prime(t, &s),
            _ => is_general_parking(t, &s),
        };
        match ok {
            Ok(true) => total += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    };
    if kind.is_distribution() {
        for_each_multiset(n, m, |mult| {
            let entries = mult
                .iter()
                .enumerate()
                .flat_map(|(v, &c)| std::iter::repeat_n(v + 1, c as usize))
                .collect();
            test(PreferenceSequence::multiset(entries));
        });
    } else {
        for_each_sequence(n, m, |s| {
            test(PreferenceSequence::sequence(
                s.iter().map(|v| v + 1).collect(),
            ))
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(BigUint::from(total)),
    }
}

fn tree_count(t: &LabelledTree, kind: CountKind, exhaustive: bool) -> u64 {
    let p = Prepared::new(t);
    let n = p.n();
    let m = kind.drivers(n);
    let mut total = 0u64;
    match kind {
        CountKind::GeneralFunctions(_) | CountKind::GeneralDistributions(_) => {
            let mut occ = vec![false; n];
            if kind.is_distribution() {
                let mut prefs = Vec::with_capacity(m);
                for_each_multiset(n, m, |mult| {
                    prefs.clear();
                    for (v, &c) in mult.iter().enumerate() {
                        prefs.extend(std::iter::repeat_n(v, c as usize));
                    }
                    total += p.parks(&prefs, &mut occ) as u64;
                });
            } else {
                for_each_sequence(n, m, |s| total += p.parks(s, &mut occ) as u64);
            }
        }
        _ if exhaustive && !kind.is_distribution() => {
            let mut mult = vec![0u32; n];
            let mut acc = vec![0u32; n];
            for_each_sequence(n, n, |s| {
                mult.fill(0);
                s.iter().for_each(|&v| mult[v] += 1);
                let (park, prime) = p.classify(&mult, &mut acc);
                total += if kind.is_prime() { prime } else { park } as u64;
            });
        }
        _ => {
            let fact: Vec<u64> = (0..=n as u64)
                .scan(1u64, |f, k| {
                    *f *= k.max(1);
                    Some(*f)
                })
                .collect();
            let mut acc = vec![0u32; n];
            for_each_multiset(n, n, |mult| {
                let (park, prime) = p.classify(mult, &mut acc);
                if if kind.is_prime() { prime } else { park } {
                    total += if kind.is_distribution() {
                        1
                    } else {
                        mult.iter().fold(fact[n], |w, &c| w / fact[c as usize])
                    };
                }
            });
        }
    }
    total
}

/// Calls `f` with every multiplicity vector of `m` items over `n` nodes.
pub(crate) fn for_each_multiset(n: usize, m: usize, mut f: impl FnMut(&[u32])) {
    fn go(mult: &mut Vec<u32>, v: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if v + 1 == mult.len() {
            mult[v] = left;
            f(mult);
            return;
        }
        for c in (0..=left).rev() {
            mult[v] = c;
            go(mult, v + 1, left - c, f);
        }
    }
    if n == 0 {
        return;
    }
    let mut mult = vec![0u32; n];
    go(&mut mult, 0, m as u32, &mut f);
}

/// Calls `f` with every sequence in `{0..n}^m`.
pub(crate) fn for_each_sequence(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut s = vec![0usize; m];
    loop {
        f(&s);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            s[i] += 1;
            if s[i] < n {
                break;
            }
            s[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(f: Family, k: CountKind, n: usize) -> u64 {
        count(f, k, n, &CountOptions::default())
            .unwrap()
            .try_into()
            .unwrap()
    }

    #[test]
    fn hand_checked_counts() {
        assert_eq!(brute(Family::Ordered, CountKind::Functions, 2), 6);
        assert_eq!(brute(Family::Ordered, CountKind::Functions, 3), 168);
        assert_eq!(brute(Family::Unordered, CountKind::Functions, 3), 132);
        assert_eq!(brute(Family::Ordered, CountKind::PrimeFunctions, 3), 24);
        assert_eq!(brute(Family::Ordered, CountKind::Distributions, 3), 48);
        assert_eq!(
            brute(Family::Unordered, CountKind::GeneralFunctions(1), 2),
            4
        );
    }

    #[test]
    fn per_tree_on_a_chain() {
        let t = LabelledTree::parse(Family::Ordered, "1(2)").unwrap();
        let c = |k| count_per_tree(&t, k).unwrap();
        assert_eq!(c(CountKind::Functions), BigUint::from(3u32));
        assert_eq!(c(CountKind::Distributions), BigUint::from(2u32));
        assert_eq!(c(CountKind::PrimeDistributions), BigUint::from(1u32));
    }

    #[test]
    fn enumeration_helpers() {
        let mut k = 0;
        for_each_multiset(3, 3, |m| {
            assert_eq!(m.iter().sum::<u32>(), 3);
            k += 1;
        });
        assert_eq!(k, 10);
        let mut k = 0;
        for_each_sequence(3, 2, |_| k += 1);
        assert_eq!(k, 9);
        let mut k = 0;
        for_each_sequence(3, 0, |s| {
            assert!(s.is_empty());
            k += 1
        });
        assert_eq!(k, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = CountOptions {
            budget: Budget {
                max_evaluations: 1000,
                ..Budget::default()
            },
            shape_cache: false,
            ..CountOptions::default()
        };
        match count(Family::Ordered, CountKind::Functions, 5, &opts) {
            Err(Error::BudgetExceeded { trees_done, .. }) => assert!(trees_done < 1680),
            other => panic!("expected budget error, got {other:?}"),
        }
        let capped = count(
            Family::Ordered,
            CountKind::GeneralFunctions(2),
            6,
            &CountOptions::default(),
        );
        assert!(matches!(capped, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn leaf_refinement_sums_to_total() {
        let opts = CountOptions::default();
        let by = count_by_leaves(Family::Ordered, CountKind::Distributions, 4, &opts).unwrap();
        let total: BigUint = by.values().sum();
        assert_eq!(
            total,
            count(Family::Ordered, CountKind::Distributions, 4, &opts).unwrap()
        );
        assert_eq!(by[&1], BigUint::from(24u32 * 14));
    }
}
