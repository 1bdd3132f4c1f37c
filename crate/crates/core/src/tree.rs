//! Stable n-legged trees, splits, and canonical forms.
//!
//! A stable tree has no nontrivial automorphisms, so the set of marking
//! bipartitions cut out by its edges (its splits) identifies it up to
//! isomorphism. Splits are stored as bitsets with marking `i` at bit `i - 1`,
//! normalized so that marking 1 is never on the stored side.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Bitset width of a [`Split`].
pub const MAX_MARKINGS: usize = 64;

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_to_markings(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewMarkings(n));
    }
    if n > MAX_MARKINGS {
        return Err(Error::Envelope {
            n,
            max: MAX_MARKINGS,
        });
    }
    Ok(())
}

/// An unordered bipartition of `{1, …, n}` with both parts of size at least 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    n: u8,
    side: u64,
}

impl Split {
    /// Build from either side of the bipartition, as 1-based markings.
    pub fn new(n: usize, side: &[usize]) -> Result<Self> {
        check_n(n)?;
        let mut mask = 0u64;
        for &m in side {
            if m == 0 || m > n {
                return Err(Error::InvalidSplit(format!("marking {m} outside 1..={n}")));
            }
            mask |= 1 << (m - 1);
        }
        Split::from_mask(n, mask)
    }

    /// Build from a bitset of either side.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_n(n)?;
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::InvalidSplit(format!(
                "mask {mask:#b} has bits beyond n={n}"
            )));
        }
        let side = if mask & 1 != 0 { full & !mask } else { mask };
        let size = side.count_ones() as usize;
        if size < 2 || n - size < 2 {
            return Err(Error::InvalidSplit(format!(
                "{:?} | {:?} has a part with fewer than 2 markings",
                mask_to_markings(side),
                mask_to_markings(full & !side)
            )));
        }
        Ok(Split { n: n as u8, side })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The side not containing marking 1.
    pub fn side_mask(&self) -> u64 {
        self.side
    }

    /// The side containing marking 1.
    pub fn complement_mask(&self) -> u64 {
        full_mask(self.n()) & !self.side
    }

    pub fn side(&self) -> Vec<usize> {
        mask_to_markings(self.side)
    }

    pub fn side_len(&self) -> usize {
        self.side.count_ones() as usize
    }

    /// The part of size `k`, if exactly one part has that size.
    pub fn part_of_size(&self, k: usize) -> Option<u64> {
        let a = self.side_len();
        let b = self.n() - a;
        match (a == k, b == k) {
            (true, false) => Some(self.side),
            (false, true) => Some(self.complement_mask()),
            _ => None,
        }
    }

    /// Whether `mask` is one of the two parts.
    pub fn has_part(&self, mask: u64) -> bool {
        mask == self.side || mask == self.complement_mask()
    }

    /// Two splits can be edges of one tree iff one stored side is nested in
    /// the other or the sides are disjoint.
    pub fn compatible(&self, other: &Split) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::MarkingMismatch(self.n(), other.n()));
        }
        Ok(self.compatible_unchecked(other))
    }

    #[inline]
    pub(crate) fn compatible_unchecked(&self, other: &Split) -> bool {
        let (a, b) = (self.side, other.side);
        a & b == 0 || a & b == a || a & b == b
    }

    /// Image under a permutation of the markings (0-based, degree n).
    pub fn permuted(&self, sigma: &Permutation) -> Split {
        debug_assert_eq!(sigma.degree(), self.n());
        let image = sigma.apply_mask(self.side);
        let full = full_mask(self.n());
        let side = if image & 1 != 0 { full & !image } else { image };
        Split { n: self.n, side }
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.side.count_ones(), self.side, self.n).cmp(&(
            other.side.count_ones(),
            other.side,
            other.n,
        ))
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.side().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The sorted split set of a stable tree. Equality of canonical forms is
/// isomorphism of the underlying stable trees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    splits: Vec<Split>,
}

impl CanonicalForm {
    /// The single-vertex tree.
    pub fn point(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(CanonicalForm {
            n,
            splits: Vec::new(),
        })
    }

    /// Validates pairwise compatibility and distinctness, then sorts.
    pub fn new(n: usize, mut splits: Vec<Split>) -> Result<Self> {
        check_n(n)?;
        if let Some(s) = splits.iter().find(|s| s.n() != n) {
            return Err(Error::MarkingMismatch(n, s.n()));
        }
        splits.sort_unstable();
        for w in splits.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidSplit(format!("split {} repeated", w[0])));
            }
        }
        for (i, a) in splits.iter().enumerate() {
            for b in &splits[i + 1..] {
                if !a.compatible_unchecked(b) {
                    return Err(Error::IncompatibleSplits(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(CanonicalForm { n, splits })
    }

    /// Caller guarantees the splits are sorted, distinct and compatible.
    pub(crate) fn from_sorted_unchecked(n: usize, splits: Vec<Split>) -> Self {
        debug_assert!(splits.windows(2).all(|w| w[0] < w[1]));
        CanonicalForm { n, splits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    /// Number of edges, which is the dimension of the corresponding cone.
    pub fn dimension(&self) -> usize {
        self.splits.len()
    }

    pub fn position(&self, s: &Split) -> Option<usize> {
        self.splits.binary_search(s).ok()
    }

    /// Canonical form of the contraction of the edges at `positions`.
    pub fn without(&self, positions: &[usize]) -> CanonicalForm {
        let splits = self
            .splits
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, s)| *s)
            .collect();
        CanonicalForm { n: self.n, splits }
    }

    pub fn permuted(&self, sigma: &Permutation) -> CanonicalForm {
        let mut splits: Vec<Split> = self.splits.iter().map(|s| s.permuted(sigma)).collect();
        splits.sort_unstable();
        CanonicalForm { n: self.n, splits }
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            n: self.n,
            splits: self.splits.iter().map(Split::side).collect(),
        }
    }

    pub fn from_json(json: &TreeJson) -> Result<Self> {
        let splits = json
            .splits
            .iter()
            .map(|side| Split::new(json.n, side))
            .collect::<Result<Vec<_>>>()?;
        CanonicalForm::new(json.n, splits)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.splits.is_empty() {
            return write!(f, "*");
        }
        let parts: Vec<String> = self.splits.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Interchange format: `{ "n": 5, "splits": [[2, 3], [2, 3, 4]] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub n: usize,
    pub splits: Vec<Vec<usize>>,
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let json = TreeJson::deserialize(deserializer)?;
        CanonicalForm::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// A tree with legs `1..=n` attached to its vertices.
///
/// Vertex identifiers are plain indices and carry no meaning; compare trees
/// with [`LeggedTree::splits_of`] or [`are_isomorphic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeggedTree {
    n: usize,
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    /// `legs[i]` is the vertex carrying marking `i + 1`.
    legs: Vec<usize>,
}

/// Result of [`LeggedTree::contract`].
#[derive(Clone, Debug)]
pub struct Contraction {
    pub tree: LeggedTree,
    /// For each edge of the original tree, its index in the contracted tree,
    /// or `None` if it was contracted.
    pub retained: Vec<Option<usize>>,
    /// For each vertex of the original tree, the vertex it merged into.
    pub vertex_map: Vec<usize>,
}

/// A leg-compatible isomorphism between two legged trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeIsomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl LeggedTree {
    /// Build and validate: connected, acyclic, no loops or parallel edges,
    /// every marking on an existing vertex.
    pub fn new(
        n: usize,
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Result<Self> {
        check_n(n)?;
        if num_vertices == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if legs.len() != n {
            return Err(Error::InvalidTree(format!(
                "{} leg assignments for n = {n}",
                legs.len()
            )));
        }
        if let Some(&v) = legs.iter().find(|&&v| v >= num_vertices) {
            return Err(Error::InvalidTree(format!("leg on missing vertex {v}")));
        }
        if edges.len() + 1 != num_vertices {
            return Err(Error::InvalidTree(format!(
                "{} edges on {num_vertices} vertices cannot form a tree",
                edges.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(Error::InvalidTree(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidTree(format!("loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidTree(format!(
                    "parallel edges between {a} and {b}"
                )));
            }
        }
        let tree = LeggedTree {
            n,
            num_vertices,
            edges,
            legs,
        };
        // |E| = |V| - 1 plus connected implies acyclic
        let mut reached = vec![false; num_vertices];
        let adj = tree.adjacency();
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !reached[w] {
                    reached[w] = true;
                    stack.push(w);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        Ok(tree)
    }

    /// Adjacency-style construction: `leg_sets[v]` lists the markings at `v`.
    pub fn from_leg_sets(
        n: usize,
        leg_sets: &[Vec<usize>],
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut legs = vec![usize::MAX; n];
        for (v, set) in leg_sets.iter().enumerate() {
            for &m in set {
                if m == 0 || m > n {
                    return Err(Error::InvalidTree(format!("marking {m} outside 1..={n}")));
                }
                if legs[m - 1] != usize::MAX {
                    return Err(Error::InvalidTree(format!("marking {m} assigned twice")));
                }
                legs[m - 1] = v;
            }
        }
        if let Some(i) = legs.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidTree(format!("marking {} unassigned", i + 1)));
        }
        LeggedTree::new(n, leg_sets.len(), edges, legs)
    }

    pub fn single_vertex(n: usize) -> Result<Self> {
        LeggedTree::new(n, 1, Vec::new(), vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Vertex carrying marking `m` (1-based).
    pub fn leg_vertex(&self, m: usize) -> usize {
        self.legs[m - 1]
    }

    /// Markings at `v` as a bitset.
    pub fn leg_mask(&self, v: usize) -> u64 {
        self.legs
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == v)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn leg_set(&self, v: usize) -> Vec<usize> {
        mask_to_markings(self.leg_mask(v))
    }

    pub fn leg_count(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&w| w == v).count()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// `adjacency()[v]` lists `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices).all(|v| self.valence(v) + self.leg_count(v) >= 3)
    }

    /// Leaves are vertices of valence 1.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.num_vertices)
            .filter(|&v| self.valence(v) == 1)
            .collect()
    }

    /// Contract the given edges, merging endpoints and uniting their legs.
    pub fn contract(&self, contracted: &[usize]) -> Result<Contraction> {
        if let Some(&e) = contracted.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::NotAnEdge(e));
        }
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut is_contracted = vec![false; self.edges.len()];
        for &e in contracted {
            is_contracted[e] = true;
            let (a, b) = self.edges[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut new_index = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        let mut vertex_map = Vec::with_capacity(self.num_vertices);
        for v in 0..self.num_vertices {
            let r = find(&mut parent, v);
            if new_index[r] == usize::MAX {
                new_index[r] = count;
                count += 1;
            }
            vertex_map.push(new_index[r]);
        }
        let mut edges = Vec::new();
        let mut retained = vec![None; self.edges.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if !is_contracted[e] {
                retained[e] = Some(edges.len());
                edges.push((vertex_map[a], vertex_map[b]));
            }
        }
        let legs = self.legs.iter().map(|&v| vertex_map[v]).collect();
        let tree = LeggedTree::new(self.n, count, edges, legs)?;
        Ok(Contraction {
            tree,
            retained,
            vertex_map,
        })
    }

    /// The split cut out by each edge, indexed like [`LeggedTree::edges`].
    /// Fails if some edge has fewer than two markings on one side, which
    /// cannot happen for stable trees.
    pub fn edge_splits(&self) -> Result<Vec<Split>> {
        let sides = self.edge_sides();
        sides
            .into_iter()
            .map(|mask| Split::from_mask(self.n, mask))
            .collect()
    }

    /// BFS order from the vertex carrying marking 1, and for each edge its
    /// endpoint farther from that vertex.
    fn rooted(&self) -> (Vec<usize>, Vec<usize>) {
        let adj = self.adjacency();
        let root = self.legs[0];
        let mut order = Vec::with_capacity(self.num_vertices);
        let mut child = vec![usize::MAX; self.edges.len()];
        let mut visited = vec![false; self.num_vertices];
        visited[root] = true;
        order.push(root);
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            for &(w, e) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    child[e] = w;
                    order.push(w);
                }
            }
            k += 1;
        }
        (order, child)
    }

    /// For each edge, the markings on the side away from marking 1.
    fn edge_sides(&self) -> Vec<u64> {
        let (order, child) = self.rooted();
        let mut parent_edge = vec![usize::MAX; self.num_vertices];
        for (e, &c) in child.iter().enumerate() {
            parent_edge[c] = e;
        }
        let mut below: Vec<u64> = (0..self.num_vertices).map(|v| self.leg_mask(v)).collect();
        let mut sides = vec![0u64; self.edges.len()];
        for &v in order.iter().rev() {
            let e = parent_edge[v];
            if e != usize::MAX {
                sides[e] = below[v];
                let (a, b) = self.edges[e];
                let up = if a == v { b } else { a };
                below[up] |= below[v];
            }
        }
        sides
    }

    /// Canonical form: the sorted split set.
    pub fn splits_of(&self) -> Result<CanonicalForm> {
        let mut splits = self.edge_splits()?;
        splits.sort_unstable();
        Ok(CanonicalForm::from_sorted_unchecked(self.n, splits))
    }

    /// Relabel markings: marking `σ(i)` is placed where marking `i` was.
    pub fn apply_marking_permutation(&self, sigma: &Permutation) -> Result<LeggedTree> {
        if sigma.degree() != self.n {
            return Err(Error::MarkingMismatch(self.n, sigma.degree()));
        }
        let mut legs = vec![0; self.n];
        for i in 0..self.n {
            legs[sigma.apply(i)] = self.legs[i];
        }
        Ok(LeggedTree {
            n: self.n,
            num_vertices: self.num_vertices,
            edges: self.edges.clone(),
            legs,
        })
    }

    /// The isomorphism to `other` read off from matching splits, for stable
    /// trees. Vertices are matched by rooting both trees at the vertex
    /// carrying marking 1. Legs are labeled, so the isomorphism is unique;
    /// for two-vertex trees with equally many legs on both sides this is the
    /// one fixing the vertex whose leg set contains marking 1.
    pub fn find_isomorphism(&self, other: &LeggedTree) -> Result<Option<TreeIsomorphism>> {
        if self.n != other.n {
            return Err(Error::MarkingMismatch(self.n, other.n));
        }
        let mine = self.edge_splits()?;
        let theirs = other.edge_splits()?;
        if mine.len() != theirs.len() {
            return Ok(None);
        }
        let mut edge_map = Vec::with_capacity(mine.len());
        for s in &mine {
            match theirs.iter().position(|t| t == s) {
                Some(j) => edge_map.push(j),
                None => return Ok(None),
            }
        }
        // each non-root vertex is the far endpoint of exactly one edge
        let (_, far_mine) = self.rooted();
        let (_, far_theirs) = other.rooted();
        let mut vertex_map = vec![usize::MAX; self.num_vertices];
        vertex_map[self.legs[0]] = other.legs[0];
        for (e, &j) in edge_map.iter().enumerate() {
            vertex_map[far_mine[e]] = far_theirs[j];
        }
        let iso = TreeIsomorphism {
            vertex_map,
            edge_map,
        };
        debug_assert!(self.is_isomorphism(other, &iso));
        Ok(Some(iso))
    }

    /// Checks incidence and leg compatibility of a candidate isomorphism.
    pub fn is_isomorphism(&self, other: &LeggedTree, iso: &TreeIsomorphism) -> bool {
        if self.n != other.n
            || self.num_vertices != other.num_vertices
            || iso.vertex_map.len() != self.num_vertices
            || iso.edge_map.len() != self.edges.len()
        {
            return false;
        }
        let mut hit_v = vec![false; other.num_vertices];
        for &w in &iso.vertex_map {
            if w >= other.num_vertices || hit_v[w] {
                return false;
            }
            hit_v[w] = true;
        }
        let mut hit_e = vec![false; other.edges.len()];
        for (e, &f) in iso.edge_map.iter().enumerate() {
            if f >= other.edges.len() || hit_e[f] {
                return false;
            }
            hit_e[f] = true;
            let (a, b) = self.edges[e];
            let (x, y) = other.edges[f];
            let (ia, ib) = (iso.vertex_map[a], iso.vertex_map[b]);
            if !((ia == x && ib == y) || (ia == y && ib == x)) {
                return false;
            }
        }
        (0..self.n).all(|i| iso.vertex_map[self.legs[i]] == other.legs[i])
    }
}

/// Two legged trees are isomorphic when there is a leg-compatible graph
/// isomorphism. Stable trees compare by canonical form; anything else falls
/// back to exhaustive search.
pub fn are_isomorphic(a: &LeggedTree, b: &LeggedTree) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::MarkingMismatch(a.n, b.n));
    }
    if a.is_stable() && b.is_stable() {
        return Ok(a.splits_of()? == b.splits_of()?);
    }
    Ok(!isomorphisms(a, b).is_empty())
}

/// Build the stable tree with the given pairwise-compatible splits.
///
/// Stored sides never contain marking 1, so compatible sides form a laminar
/// family: each side becomes a vertex hanging below the smallest side that
/// strictly contains it, and the root carries marking 1.
pub fn tree_from_splits(n: usize, splits: &[Split]) -> Result<LeggedTree> {
    let cf = CanonicalForm::new(n, splits.to_vec())?;
    Ok(tree_from_canonical(&cf))
}

/// [`tree_from_splits`] for an already validated canonical form. Vertex `0`
/// is the root and vertex `i + 1` belongs to split `i`; edge `i` is the edge
/// above vertex `i + 1`, so edge indices follow split positions.
pub fn tree_from_canonical(cf: &CanonicalForm) -> LeggedTree {
    let splits = cf.splits();
    let n = cf.n();
    // sorted by size, so any strict superset comes later
    let parent_of = |i: usize| -> usize {
        let s = splits[i].side_mask();
        splits
            .iter()
            .enumerate()
            .skip(i + 1)
            .filter(|(_, t)| t.side_mask() & s == s && t.side_mask() != s)
            .min_by_key(|(_, t)| t.side_len())
            .map(|(j, _)| j + 1)
            .unwrap_or(0)
    };
    let edges: Vec<(usize, usize)> = (0..splits.len()).map(|i| (parent_of(i), i + 1)).collect();
    let legs: Vec<usize> = (0..n)
        .map(|m| {
            let bit = 1u64 << m;
            splits
                .iter()
                .position(|s| s.side_mask() & bit != 0)
                .map(|i| i + 1)
                .unwrap_or(0)
        })
        .collect();
    LeggedTree {
        n,
        num_vertices: splits.len() + 1,
        edges,
        legs,
    }
}

/// All leg-compatible isomorphisms `a → b`, found by exhaustive backtracking
/// over vertex bijections. Works for unstable trees too.
pub fn isomorphisms(a: &LeggedTree, b: &LeggedTree) -> Vec<TreeIsomorphism> {
    if a.n != b.n || a.num_vertices != b.num_vertices || a.edges.len() != b.edges.len() {
        return Vec::new();
    }
    let nv = a.num_vertices;
    let legs_a: Vec<u64> = (0..nv).map(|v| a.leg_mask(v)).collect();
    let legs_b: Vec<u64> = (0..nv).map(|v| b.leg_mask(v)).collect();
    let mut adj_a = vec![vec![false; nv]; nv];
    let mut adj_b = vec![vec![false; nv]; nv];
    for &(x, y) in &a.edges {
        adj_a[x][y] = true;
        adj_a[y][x] = true;
    }
    for &(x, y) in &b.edges {
        adj_b[x][y] = true;
        adj_b[y][x] = true;
    }
    let deg_a: Vec<usize> = (0..nv).map(|v| a.valence(v)).collect();
    let deg_b: Vec<usize> = (0..nv).map(|v| b.valence(v)).collect();

    struct Ctx<'a> {
        nv: usize,
        legs_a: &'a [u64],
        legs_b: &'a [u64],
        adj_a: &'a [Vec<bool>],
        adj_b: &'a [Vec<bool>],
        deg_a: &'a [usize],
        deg_b: &'a [usize],
    }
    fn rec(ctx: &Ctx, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = map.len();
        if v == ctx.nv {
            out.push(map.clone());
            return;
        }
        for w in 0..ctx.nv {
            if used[w] || ctx.legs_a[v] != ctx.legs_b[w] || ctx.deg_a[v] != ctx.deg_b[w] {
                continue;
            }
            if (0..v).any(|u| ctx.adj_a[v][u] != ctx.adj_b[w][map[u]]) {
                continue;
            }
            used[w] = true;
            map.push(w);
            rec(ctx, map, used, out);
            map.pop();
            used[w] = false;
        }
    }
    let ctx = Ctx {
        nv,
        legs_a: &legs_a,
        legs_b: &legs_b,
        adj_a: &adj_a,
        adj_b: &adj_b,
        deg_a: &deg_a,
        deg_b: &deg_b,
    };
    let mut maps = Vec::new();
    rec(
        &ctx,
        &mut Vec::with_capacity(nv),
        &mut vec![false; nv],
        &mut maps,
    );
    maps.into_iter()
        .map(|vertex_map| {
            let edge_map = a
                .edges
                .iter()
                .map(|&(x, y)| {
                    let (ix, iy) = (vertex_map[x], vertex_map[y]);
                    b.edges
                        .iter()
                        .position(|&(p, q)| (p == ix && q == iy) || (p == iy && q == ix))
                        .expect("adjacency was checked")
                })
                .collect();
            TreeIsomorphism {
                vertex_map,
                edge_map,
            }
        })
        .collect()
}

/// Brute-force automorphism list. Stable trees only ever yield the identity.
pub fn automorphisms_of_tree(t: &LeggedTree) -> Vec<TreeIsomorphism> {
    isomorphisms(t, t)
}
