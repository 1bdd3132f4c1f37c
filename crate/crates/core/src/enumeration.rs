//! Isomorph-free generation of stable n-legged trees by edge count.
//!
//! Strata are generated breadth-first: every stable tree with `m + 1` edges
//! is a one-edge expansion of one with `m` edges, and canonical forms remove
//! duplicates.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tree::{tree_from_canonical, CanonicalForm, LeggedTree, Split};

/// Largest n the enumeration (and everything built on it) accepts.
pub const MAX_ENUMERATION_N: usize = 8;

pub(crate) fn check_envelope(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewMarkings(n));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::Envelope {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(())
}

/// All stable n-legged trees up to isomorphism, grouped by edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumCatalog {
    n: usize,
    by_dimension: Vec<Vec<CanonicalForm>>,
}

impl StratumCatalog {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Strata with `m` edges, sorted by canonical form.
    pub fn dimension(&self, m: usize) -> &[CanonicalForm] {
        self.by_dimension.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn by_dimension(&self) -> &[Vec<CanonicalForm>] {
        &self.by_dimension
    }

    pub fn max_dimension(&self) -> usize {
        self.by_dimension.len() - 1
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dimension.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.by_dimension.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_dimension.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One stable expansion of a tree: the new tree and its freshly inserted edge.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub tree: LeggedTree,
    pub new_edge: usize,
}

/// All stable one-edge expansions of `t` up to isomorphism.
///
/// A vertex `v` is split in two by partitioning its legs and incident edges
/// into two groups of at least two items each; unordered partitions are
/// counted once by always keeping the first item on the original vertex.
pub fn expansions(t: &LeggedTree) -> Vec<Expansion> {
    let adj = t.adjacency();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (v, around) in adj.iter().enumerate() {
        // items: markings (0-based) then incident edge indices
        let markings: Vec<usize> = (1..=t.n()).filter(|&m| t.leg_vertex(m) == v).collect();
        let incident: Vec<usize> = around.iter().map(|&(_, e)| e).collect();
        let k = markings.len() + incident.len();
        if k < 4 {
            continue;
        }
        // masks with bit 0 clear describe the part moved to the new vertex
        for mask in (2u64..(1 << k)).step_by(2) {
            let moved = mask.count_ones() as usize;
            if moved < 2 || k - moved < 2 {
                continue;
            }
            let w = t.num_vertices();
            let mut legs: Vec<usize> = (1..=t.n()).map(|m| t.leg_vertex(m)).collect();
            let mut edges = t.edges().to_vec();
            for (i, &m) in markings.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    legs[m - 1] = w;
                }
            }
            for (j, &e) in incident.iter().enumerate() {
                if mask & (1 << (markings.len() + j)) != 0 {
                    let (a, b) = edges[e];
                    edges[e] = if a == v { (w, b) } else { (a, w) };
                }
            }
            let new_edge = edges.len();
            edges.push((v, w));
            let tree = LeggedTree::new(t.n(), w + 1, edges, legs)
                .expect("splitting a vertex of a tree gives a tree");
            debug_assert!(tree.is_stable());
            let key = tree.splits_of().expect("expansion is stable");
            if seen.insert(key) {
                out.push(Expansion { tree, new_edge });
            }
        }
    }
    out
}

pub fn enumerate_strata(n: usize) -> Result<StratumCatalog> {
    enumerate_strata_with(n, Execution::default())
}

/// Breadth-first generation from the single-vertex tree. Parents at each
/// level are expanded in parallel and merged into a sorted set, so the result
/// does not depend on scheduling.
pub fn enumerate_strata_with(n: usize, exec: Execution) -> Result<StratumCatalog> {
    check_envelope(n)?;
    let mut by_dimension = vec![vec![CanonicalForm::point(n)?]];
    for _ in 0..n - 3 {
        let parents = by_dimension.last().expect("non-empty");
        let children: Vec<Vec<CanonicalForm>> = exec::map(exec, parents, |cf| {
            let t = tree_from_canonical(cf);
            expansions(&t)
                .into_iter()
                .map(|x| x.tree.splits_of().expect("expansion is stable"))
                .collect()
        });
        let next: BTreeSet<CanonicalForm> = children.into_iter().flatten().collect();
        by_dimension.push(next.into_iter().collect());
    }
    Ok(StratumCatalog { n, by_dimension })
}

/// `(2n - 5)!!`, the number of trivalent stable trees, via `c(3) = 1`,
/// `c(n) = (2n - 5) c(n - 1)`.
pub fn count_maximal(n: usize) -> Result<u128> {
    if n < 3 {
        return Err(Error::TooFewMarkings(n));
    }
    let mut c: u128 = 1;
    for k in 4..=n {
        c = c
            .checked_mul(2 * k as u128 - 5)
            .ok_or(Error::Envelope { n, max: k - 1 })?;
    }
    Ok(c)
}

/// All splits of `{1, …, n}`, sorted.
pub fn all_splits(n: usize) -> Result<Vec<Split>> {
    if n < 3 {
        return Err(Error::TooFewMarkings(n));
    }
    if n > 20 {
        return Err(Error::Envelope { n, max: 20 });
    }
    // sides avoid marking 1, i.e. bit 0
    let mut out: Vec<Split> = (0u64..(1 << n))
        .step_by(2)
        .filter_map(|mask| Split::from_mask(n, mask).ok())
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Independent enumeration: every set of pairwise-compatible splits, found
/// by clique search in the compatibility graph. Slow; intended for n ≤ 6.
pub fn enumerate_by_split_sets(n: usize) -> Result<BTreeMap<usize, Vec<CanonicalForm>>> {
    check_envelope(n)?;
    let splits = all_splits(n)?;
    let mut out: BTreeMap<usize, Vec<CanonicalForm>> = BTreeMap::new();
    fn extend(
        splits: &[Split],
        start: usize,
        current: &mut Vec<Split>,
        out: &mut BTreeMap<usize, Vec<CanonicalForm>>,
        n: usize,
    ) {
        let cf = CanonicalForm::new(n, current.clone()).expect("clique of compatible splits");
        out.entry(current.len()).or_default().push(cf);
        for i in start..splits.len() {
            if current.iter().all(|s| s.compatible_unchecked(&splits[i])) {
                current.push(splits[i]);
                extend(splits, i + 1, current, out, n);
                current.pop();
            }
        }
    }
    extend(&splits, 0, &mut Vec::new(), &mut out, n);
    for list in out.values_mut() {
        list.sort();
    }
    Ok(out)
}
