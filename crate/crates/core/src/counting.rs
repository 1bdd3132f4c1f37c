//! The closed-form count of one-edge expansions and the power-of-two lemma
//! behind it.
//!
//! A vertex with `k = ℓ + val` items can be split in
//! `2^(k-1) - (k + 1)` ways (unordered partitions into two parts of size at
//! least two). Summing over vertices counts the strata one dimension up whose
//! closure contains the given one.

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumeration::all_splits;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tree::LeggedTree;

/// `(ℓ(v), val(v))` for each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexProfile {
    pub entries: Vec<(usize, usize)>,
}

impl VertexProfile {
    pub fn of(t: &LeggedTree) -> Self {
        VertexProfile {
            entries: (0..t.num_vertices())
                .map(|v| (t.leg_count(v), t.valence(v)))
                .collect(),
        }
    }

    pub fn is_stable(&self) -> bool {
        self.entries.iter().all(|&(l, v)| l + v >= 3)
    }
}

pub fn per_vertex_partition_count(l: usize, v: usize) -> Result<BigUint> {
    let k = l + v;
    if k < 3 {
        return Err(Error::UnstableVertex(k as u64));
    }
    Ok((BigUint::from(1u8) << (k - 1)) - BigUint::from(k + 1))
}

/// `Σ_v 2^(ℓ(v)+val(v)-1) - (ℓ(v)+val(v)+1)`.
pub fn expansion_count_formula(t: &LeggedTree) -> Result<BigUint> {
    let profile = VertexProfile::of(t);
    let mut total = BigUint::from(0u8);
    for (l, v) in profile.entries {
        total += per_vertex_partition_count(l, v)?;
    }
    Ok(total)
}

/// Result of comparing `2^a1 + 2^a2 + 2^a3` with `2^b1 + 2^b2 + 2^b3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub powers_equal: bool,
    pub multisets_equal: bool,
}

impl LemmaCheck {
    /// Equal power sums force equal multisets.
    pub fn consistent(&self) -> bool {
        !self.powers_equal || self.multisets_equal
    }
}

fn power_sum(t: [u64; 3]) -> BigUint {
    t.iter().map(|&e| BigUint::from(1u8) << e).sum()
}

pub fn lemma_power_check(a: [u64; 3], b: [u64; 3]) -> Result<LemmaCheck> {
    let (sa, sb) = (a.iter().sum::<u64>(), b.iter().sum::<u64>());
    if sa != sb {
        return Err(Error::UnequalSums(sa, sb));
    }
    let powers_equal = if a.iter().chain(&b).all(|&e| e < 126) {
        let sum = |t: [u64; 3]| t.iter().map(|&e| 1u128 << e).sum::<u128>();
        sum(a) == sum(b)
    } else {
        power_sum(a) == power_sum(b)
    };
    let (mut x, mut y) = (a, b);
    x.sort_unstable();
    y.sort_unstable();
    Ok(LemmaCheck {
        powers_equal,
        multisets_equal: x == y,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSweep {
    pub bound: u64,
    /// Ordered pairs of ordered triples with equal sums.
    pub pairs_checked: u64,
    pub equal_power_pairs: u64,
    pub counterexamples: Vec<([u64; 3], [u64; 3])>,
}

/// Every pair of triples with entries in `0..=bound` and equal sums.
pub fn lemma_sweep(bound: u64, exec: Execution) -> Result<LemmaSweep> {
    if bound > 60 {
        return Err(Error::Envelope {
            n: bound as usize,
            max: 60,
        });
    }
    let side = bound + 1;
    let triples: Vec<[u64; 3]> = (0..side.pow(3))
        .map(|i| [i / (side * side), i / side % side, i % side])
        .collect();
    let mut by_sum: Vec<Vec<[u64; 3]>> = vec![Vec::new(); 3 * bound as usize + 1];
    for &t in &triples {
        by_sum[t.iter().sum::<u64>() as usize].push(t);
    }
    let per_triple = exec::map(exec, &triples, |&a| {
        let mut checked = 0u64;
        let mut equal = 0u64;
        let mut bad = Vec::new();
        for &b in &by_sum[a.iter().sum::<u64>() as usize] {
            let c = lemma_power_check(a, b).expect("sums agree");
            checked += 1;
            equal += u64::from(c.powers_equal);
            if !c.consistent() {
                bad.push((a, b));
            }
        }
        (checked, equal, bad)
    });
    let mut sweep = LemmaSweep {
        bound,
        pairs_checked: 0,
        equal_power_pairs: 0,
        counterexamples: Vec::new(),
    };
    for (checked, equal, bad) in per_triple {
        sweep.pairs_checked += checked;
        sweep.equal_power_pairs += equal;
        sweep.counterexamples.extend(bad);
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoVertexCheck {
    pub max_n: usize,
    pub pairs_checked: u64,
    /// `(n, side of the first split, side of the second split)`.
    pub violations: Vec<(usize, Vec<usize>, Vec<usize>)>,
}

/// For two-vertex strata with equal expansion counts, the two leg counts
/// agree as multisets. Checked on all pairs of splits for `4 ≤ n ≤ max_n`,
/// using only the formula.
pub fn two_vertex_consequence(max_n: usize) -> Result<TwoVertexCheck> {
    let mut out = TwoVertexCheck {
        max_n,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for n in 4..=max_n {
        let splits = all_splits(n)?;
        let data: Vec<(BigUint, [usize; 2])> = splits
            .iter()
            .map(|s| {
                let (a, b) = (s.side_len(), n - s.side_len());
                let count = per_vertex_partition_count(a, 1)? + per_vertex_partition_count(b, 1)?;
                Ok((count, [a.min(b), a.max(b)]))
            })
            .collect::<Result<_>>()?;
        for i in 0..splits.len() {
            for j in i + 1..splits.len() {
                out.pairs_checked += 1;
                if data[i].0 == data[j].0 && data[i].1 != data[j].1 {
                    out.violations.push((n, splits[i].side(), splits[j].side()));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::enumeration::expansions;
    use crate::tree::{tree_from_canonical, tree_from_splits, Split};
    use proptest::prelude::*;

    /// Unordered partitions of a k-set into two parts of size ≥ 2.
    fn brute_partitions(k: usize) -> u64 {
        (0u64..1 << k)
            .filter(|m| m & 1 == 0)
            .filter(|m| {
                let c = m.count_ones() as usize;
                c >= 2 && k - c >= 2
            })
            .count() as u64
    }

    #[test]
    fn formula_examples() {
        let big = |x: u32| BigUint::from(x);
        assert_eq!(
            expansion_count_formula(&LeggedTree::single_vertex(4).unwrap()).unwrap(),
            big(3)
        );
        assert_eq!(
            expansion_count_formula(&LeggedTree::single_vertex(5).unwrap()).unwrap(),
            big(10)
        );
        let trivalent = tree_from_splits(
            5,
            &[
                Split::new(5, &[2, 3]).unwrap(),
                Split::new(5, &[2, 3, 4]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(expansion_count_formula(&trivalent).unwrap(), big(0));
    }

    #[test]
    fn partition_count_examples() {
        assert_eq!(
            per_vertex_partition_count(3, 0).unwrap(),
            BigUint::from(0u8)
        );
        assert_eq!(
            per_vertex_partition_count(2, 2).unwrap(),
            BigUint::from(3u8)
        );
        assert_eq!(
            per_vertex_partition_count(4, 1).unwrap(),
            BigUint::from(10u8)
        );
        assert_eq!(
            per_vertex_partition_count(1, 1).unwrap_err(),
            Error::UnstableVertex(2)
        );
        // far beyond machine words
        let huge = per_vertex_partition_count(200, 0).unwrap();
        assert_eq!(huge.bits(), 199);
    }

    #[test]
    fn unstable_trees_are_rejected() {
        let t = LeggedTree::from_leg_sets(4, &[vec![1, 2, 3, 4], vec![]], vec![(0, 1)]).unwrap();
        assert!(expansion_count_formula(&t).is_err());
    }

    #[test]
    fn formula_matches_expansions_and_star_counts() {
        for n in 3..=6 {
            let cx = build_complex(n).unwrap();
            for c in 0..cx.num_cells() {
                let t = tree_from_canonical(cx.cell(c));
                let f = expansion_count_formula(&t).unwrap();
                assert_eq!(f, BigUint::from(expansions(&t).len()));
                assert_eq!(f, BigUint::from(cx.star_count(c).unwrap()));
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let c = lemma_power_check([1, 2, 3], [1, 2, 3]).unwrap();
        assert!(c.powers_equal && c.multisets_equal);
        let c = lemma_power_check([0, 0, 6], [1, 2, 3]).unwrap();
        assert!(!c.powers_equal && c.consistent());
        assert_eq!(
            lemma_power_check([0, 0, 1], [0, 0, 0]).unwrap_err(),
            Error::UnequalSums(1, 0)
        );
        let c = lemma_power_check([200, 0, 0], [100, 100, 0]).unwrap();
        assert!(!c.powers_equal);
    }

    #[test]
    fn small_sweep_has_no_counterexamples() {
        let s = lemma_sweep(6, Execution::Sequential).unwrap();
        assert!(s.counterexamples.is_empty());
        assert!(s.equal_power_pairs > 0);
        assert_eq!(s, lemma_sweep(6, Execution::Parallel).unwrap());
    }

    #[test]
    fn two_vertex_strata() {
        let c = two_vertex_consequence(10).unwrap();
        assert!(c.violations.is_empty());
        assert!(c.pairs_checked > 100_000);
    }

    proptest! {
        #[test]
        fn partition_formula_matches_brute_force(l in 0usize..8, v in 0usize..6) {
            match per_vertex_partition_count(l, v) {
                Ok(x) => prop_assert_eq!(x, BigUint::from(brute_partitions(l + v))),
                Err(_) => prop_assert!(l + v < 3),
            }
        }

        #[test]
        fn lemma_check_is_symmetric(a in prop::array::uniform3(0u64..30), perm in 0usize..6) {
            let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let b = orders[perm].map(|i| a[i]);
            let c = lemma_power_check(a, b).unwrap();
            prop_assert!(c.powers_equal && c.multisets_equal);
            prop_assert_eq!(c, lemma_power_check(b, a).unwrap());
        }
    }
}
