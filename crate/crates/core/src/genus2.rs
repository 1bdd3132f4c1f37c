//! The seven-cell complex of stable genus-2 tropical curves without
//! markings, and a brute-force proof that it has no nontrivial automorphism.
//!
//! Cells are quotient cones `ℝ_{>0}^{E(Γ)} / Aut(Γ)`, so a map between two
//! cells is an edge bijection taken up to the edge groups on either side.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::{all_permutations, Permutation};

/// Connected multigraph with vertex weights. Loops and parallel edges are
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let v = weights.len();
        if v == 0 {
            return Err(Error::InvalidTree("graph has no vertices".into()));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= v || b >= v) {
            return Err(Error::InvalidTree(format!(
                "edge ({a}, {b}) has an endpoint beyond {v} vertices"
            )));
        }
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::InvalidTree("graph is disconnected".into()));
        }
        Ok(WeightedGraph { weights, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incident half-edges; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// First Betti number plus total weight.
    pub fn genus(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices() + self.weights.iter().sum::<u32>() as usize
    }

    /// `2 w(v) + val(v) ≥ 3` everywhere; in particular weight-0 vertices have
    /// valence at least 3.
    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| 2 * self.weights[v] as usize + self.valence(v) >= 3)
    }

    /// Contracting a loop raises its vertex weight by one; contracting any
    /// other edge merges its endpoints and adds their weights. Returns the
    /// graph and the retained-edge map.
    pub fn contract(&self, e: usize) -> Result<(WeightedGraph, Vec<Option<usize>>)> {
        let &(a, b) = self.edges.get(e).ok_or(Error::NotAnEdge(e))?;
        let mut weights = self.weights.clone();
        let vertex_map: Vec<usize> = if a == b {
            weights[a] += 1;
            (0..self.num_vertices()).collect()
        } else {
            let (keep, gone) = (a.min(b), a.max(b));
            weights[keep] += weights[gone];
            weights.remove(gone);
            (0..self.num_vertices())
                .map(|v| match v.cmp(&gone) {
                    std::cmp::Ordering::Less => v,
                    std::cmp::Ordering::Equal => keep,
                    std::cmp::Ordering::Greater => v - 1,
                })
                .collect()
        };
        let mut edges = Vec::new();
        let mut retained = Vec::new();
        for (i, &(x, y)) in self.edges.iter().enumerate() {
            if i == e {
                retained.push(None);
            } else {
                retained.push(Some(edges.len()));
                edges.push((vertex_map[x], vertex_map[y]));
            }
        }
        Ok((WeightedGraph::new(weights, edges)?, retained))
    }

    /// Edge maps of all weight- and incidence-preserving isomorphisms to
    /// `other`, without repeats.
    pub fn isomorphisms_to(&self, other: &WeightedGraph) -> Vec<Permutation> {
        let mut out = BTreeSet::new();
        if self.num_vertices() != other.num_vertices() || self.num_edges() != other.num_edges() {
            return Vec::new();
        }
        let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
        for pi in all_permutations(self.num_vertices()) {
            if (0..self.num_vertices()).any(|v| self.weights[v] != other.weights[pi.apply(v)]) {
                continue;
            }
            for tau in all_permutations(self.num_edges()) {
                let ok = self.edges.iter().enumerate().all(|(i, &(a, b))| {
                    key(other.edges[tau.apply(i)]) == key((pi.apply(a), pi.apply(b)))
                });
                if ok {
                    out.insert(tau.images().to_vec());
                }
            }
        }
        out.into_iter()
            .map(|images| Permutation::from_images(images).expect("bijection"))
            .collect()
    }

    /// The action of `Aut(Γ)` on edges.
    pub fn edge_automorphisms(&self) -> Vec<Permutation> {
        self.isomorphisms_to(self)
    }
}

#[derive(Debug, Clone)]
pub struct QuotientCell {
    pub name: &'static str,
    pub edge_labels: Vec<&'static str>,
    pub graph: WeightedGraph,
    /// Elements of the edge group, identity first.
    pub edge_group: Vec<Permutation>,
}

impl QuotientCell {
    pub fn dim(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn group(&self) -> PermutationGroup {
        PermutationGroup::from_elements(self.dim(), &self.edge_group).expect("degree matches")
    }
}

/// Face obtained by contracting one edge, identified with a fixture cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Face {
    pub target: usize,
    pub retained: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct M2Complex {
    cells: Vec<QuotientCell>,
    faces: Vec<Vec<M2Face>>,
}

/// Specialization arrows read off the picture of the complex: (source,
/// target, an edge of the source whose contraction realizes the arrow).
pub const ARROWS: [(usize, usize, usize); 8] = [
    (0, 2, 0),
    (1, 2, 0),
    (1, 3, 1),
    (2, 4, 0),
    (3, 5, 1),
    (3, 4, 0),
    (4, 6, 0),
    (5, 6, 0),
];

fn fixture() -> Result<Vec<(&'static str, Vec<&'static str>, WeightedGraph)>> {
    Ok(vec![
        (
            "Γ1",
            vec!["a", "b", "c"],
            WeightedGraph::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)])?,
        ),
        (
            "Γ2",
            vec!["bridge", "loop at c", "loop at d"],
            WeightedGraph::new(vec![0, 0], vec![(0, 1), (0, 0), (1, 1)])?,
        ),
        (
            "Γ3",
            vec!["loop a", "loop b"],
            WeightedGraph::new(vec![0], vec![(0, 0), (0, 0)])?,
        ),
        (
            "Γ4",
            vec!["bridge", "loop"],
            WeightedGraph::new(vec![0, 1], vec![(0, 1), (0, 0)])?,
        ),
        (
            "Γ5",
            vec!["loop"],
            WeightedGraph::new(vec![1], vec![(0, 0)])?,
        ),
        (
            "Γ6",
            vec!["bridge"],
            WeightedGraph::new(vec![1, 1], vec![(0, 1)])?,
        ),
        ("p", vec![], WeightedGraph::new(vec![2], vec![])?),
    ])
}

pub fn build_m2_complex() -> Result<M2Complex> {
    let mut cells = Vec::new();
    for (name, edge_labels, graph) in fixture()? {
        if graph.genus() != 2 || !graph.is_stable() {
            return Err(Error::Invariant(format!(
                "{name} is not a stable genus-2 graph"
            )));
        }
        let edge_group = graph.edge_automorphisms();
        cells.push(QuotientCell {
            name,
            edge_labels,
            graph,
            edge_group,
        });
    }
    let mut faces = Vec::new();
    for cell in &cells {
        let mut list = Vec::new();
        for e in 0..cell.dim() {
            let (g, retained) = cell.graph.contract(e)?;
            if g.genus() != 2 {
                return Err(Error::Invariant(format!(
                    "contracting {} changes the genus",
                    cell.name
                )));
            }
            let matches: Vec<(usize, Permutation)> = cells
                .iter()
                .enumerate()
                .filter_map(|(t, c)| {
                    g.isomorphisms_to(&c.graph)
                        .into_iter()
                        .next()
                        .map(|iso| (t, iso))
                })
                .collect();
            let [(target, iso)] = matches.as_slice() else {
                return Err(Error::Invariant(format!(
                    "contracting edge {} of {} matches {} fixture cells",
                    cell.edge_labels[e],
                    cell.name,
                    matches.len()
                )));
            };
            list.push(M2Face {
                target: *target,
                retained: retained.iter().map(|r| r.map(|x| iso.apply(x))).collect(),
            });
        }
        faces.push(list);
    }
    let cx = M2Complex { cells, faces };
    cx.check_arrows()?;
    Ok(cx)
}

impl M2Complex {
    pub fn cells(&self) -> &[QuotientCell] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &QuotientCell {
        &self.cells[c]
    }

    pub fn faces(&self, c: usize) -> &[M2Face] {
        &self.faces[c]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    /// Cell counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cells.iter().map(QuotientCell::dim).max().unwrap_or(0);
        (0..=top)
            .map(|d| self.cells.iter().filter(|c| c.dim() == d).count())
            .collect()
    }

    /// Codimension-one arrows `(source, target)` computed by contraction.
    pub fn arrows(&self) -> BTreeSet<(usize, usize)> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |f| (s, f.target)))
            .collect()
    }

    /// The computed arrows are exactly the transcribed ones, realized by the
    /// transcribed edges.
    fn check_arrows(&self) -> Result<()> {
        let transcribed: BTreeSet<(usize, usize)> =
            ARROWS.iter().map(|&(s, t, _)| (s, t)).collect();
        if self.arrows() != transcribed {
            return Err(Error::Invariant(format!(
                "computed arrows {:?} differ from the transcribed {:?}",
                self.arrows(),
                transcribed
            )));
        }
        for &(s, t, e) in &ARROWS {
            if self.faces[s][e].target != t {
                return Err(Error::Invariant(format!(
                    "contracting {} in {} does not give {}",
                    self.cells[s].edge_labels[e], self.cells[s].name, self.cells[t].name
                )));
            }
        }
        Ok(())
    }

    /// For every cell, edge `e` and edge-group element `g`, contracting `g(e)`
    /// gives the same face as contracting `e`, with retained maps that agree
    /// up to the face's edge group. Returns the number of checks.
    pub fn check_face_equivariance(&self) -> Result<usize> {
        let mut checks = 0;
        for (c, cell) in self.cells.iter().enumerate() {
            for e in 0..cell.dim() {
                for g in &cell.edge_group {
                    let (f, fg) = (&self.faces[c][e], &self.faces[c][g.apply(e)]);
                    let moved: Vec<Option<usize>> =
                        (0..cell.dim()).map(|x| fg.retained[g.apply(x)]).collect();
                    let ok = f.target == fg.target
                        && self.cells[f.target].edge_group.iter().any(|h| {
                            (0..cell.dim()).all(|x| f.retained[x].map(|y| h.apply(y)) == moved[x])
                        });
                    if !ok {
                        return Err(Error::Invariant(format!(
                            "contraction in {} is not equivariant for {g}",
                            cell.name
                        )));
                    }
                    checks += 1;
                }
            }
        }
        Ok(checks)
    }
}

/// A candidate self-map: a cell permutation and, per cell, an edge bijection
/// onto the image cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Candidate {
    pub cell_map: Vec<usize>,
    pub edge_maps: Vec<Permutation>,
}

impl M2Candidate {
    pub fn identity(cx: &M2Complex) -> Self {
        M2Candidate {
            cell_map: (0..cx.cells.len()).collect(),
            edge_maps: cx
                .cells
                .iter()
                .map(|c| Permutation::identity(c.dim()))
                .collect(),
        }
    }
}

/// First reason a candidate fails, in the order checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum M2Violation {
    Dimension {
        cell: &'static str,
    },
    /// Contracting `edge` of `cell` gives `face`; contracting its image gives
    /// `image_face`, which is not the image of `face`.
    Face {
        cell: &'static str,
        edge: &'static str,
        image_edge: &'static str,
        face: &'static str,
        image_face: &'static str,
        mapped_face: &'static str,
    },
    EdgeMap {
        cell: &'static str,
        edge: &'static str,
    },
    Conjugation {
        cell: &'static str,
    },
}

impl fmt::Display for M2Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dimension { cell } => write!(f, "{cell} is sent to a cell of another dimension"),
            Self::Face {
                cell,
                edge,
                image_edge,
                face,
                image_face,
                mapped_face,
            } => write!(
                f,
                "contracting {edge} of {cell} gives {face}, contracting its image {image_edge} gives \
                 {image_face}, so f(C({face})) would be C({image_face}) instead of C({mapped_face})"
            ),
            Self::EdgeMap { cell, edge } => write!(
                f,
                "edge maps on {cell} and its face along {edge} disagree modulo the edge group"
            ),
            Self::Conjugation { cell } => {
                write!(f, "the edge map on {cell} does not carry its edge group onto the image's")
            }
        }
    }
}

pub fn check_candidate(cx: &M2Complex, cand: &M2Candidate) -> std::result::Result<(), M2Violation> {
    let cells = &cx.cells;
    let name = |c: usize| cells[c].name;
    for (c, &img) in cand.cell_map.iter().enumerate() {
        if cells[c].dim() != cells[img].dim() || cand.edge_maps[c].degree() != cells[c].dim() {
            return Err(M2Violation::Dimension { cell: name(c) });
        }
    }
    for c in 0..cells.len() {
        let img = cand.cell_map[c];
        for e in 0..cells[c].dim() {
            let e2 = cand.edge_maps[c].apply(e);
            let face = cx.faces[c][e].target;
            let image_face = cx.faces[img][e2].target;
            if cand.cell_map[face] != image_face {
                return Err(M2Violation::Face {
                    cell: name(c),
                    edge: cells[c].edge_labels[e],
                    image_edge: cells[img].edge_labels[e2],
                    face: name(face),
                    image_face: name(image_face),
                    mapped_face: name(cand.cell_map[face]),
                });
            }
        }
    }
    for c in 0..cells.len() {
        let img = cand.cell_map[c];
        for e in 0..cells[c].dim() {
            let e2 = cand.edge_maps[c].apply(e);
            let (f, f2) = (&cx.faces[c][e], &cx.faces[img][e2]);
            let phi_face = &cand.edge_maps[f.target];
            let ok = cells[f2.target].edge_group.iter().any(|h| {
                (0..cells[c].dim()).filter(|&x| x != e).all(|x| {
                    let via_face = phi_face.apply(f.retained[x].expect("retained"));
                    let via_image =
                        h.apply(f2.retained[cand.edge_maps[c].apply(x)].expect("retained"));
                    via_face == via_image
                })
            });
            if !ok {
                return Err(M2Violation::EdgeMap {
                    cell: name(c),
                    edge: cells[c].edge_labels[e],
                });
            }
        }
    }
    for c in 0..cells.len() {
        let phi = &cand.edge_maps[c];
        let conjugated: BTreeSet<Vec<usize>> = cells[c]
            .edge_group
            .iter()
            .map(|g| phi.compose(g).compose(&phi.inverse()).images().to_vec())
            .collect();
        let target: BTreeSet<Vec<usize>> = cells[cand.cell_map[c]]
            .edge_group
            .iter()
            .map(|g| g.images().to_vec())
            .collect();
        if conjugated != target {
            return Err(M2Violation::Conjugation { cell: name(c) });
        }
    }
    Ok(())
}

/// The candidate that fixes every cell and swaps the bridge of Γ2 with one
/// of its loops.
pub fn bridge_loop_swap(cx: &M2Complex) -> M2Candidate {
    let mut cand = M2Candidate::identity(cx);
    let g2 = cx.index_of("Γ2").expect("fixture cell");
    cand.edge_maps[g2] = Permutation::from_cycles(3, &[&[1, 2]]).expect("valid");
    cand
}

#[derive(Debug, Clone, Serialize)]
pub struct M2AutReport {
    pub cells: usize,
    pub f_vector: Vec<usize>,
    pub candidates: usize,
    pub rejected_dimension: usize,
    pub rejected_face: usize,
    pub rejected_edge_map: usize,
    pub rejected_conjugation: usize,
    /// Candidates passing every check, before identifying edge maps that
    /// differ by edge-group elements.
    pub accepted: usize,
    /// Distinct automorphisms.
    pub aut_order: usize,
    /// Cell maps of the automorphisms, by cell name.
    pub cell_maps: Vec<Vec<String>>,
    pub gamma1_edge_group_order: usize,
    pub swap_witness: String,
}

fn class_key(cx: &M2Complex, cand: &M2Candidate) -> (Vec<usize>, Vec<Vec<usize>>) {
    let reps = cand
        .edge_maps
        .iter()
        .enumerate()
        .map(|(c, phi)| {
            cx.cells[c]
                .edge_group
                .iter()
                .map(|g| phi.compose(g).images().to_vec())
                .min()
                .expect("group has the identity")
        })
        .collect();
    (cand.cell_map.clone(), reps)
}

/// Every dimension-preserving cell bijection with every choice of edge
/// bijections, checked and then identified modulo the edge groups.
pub fn aut_m2(cx: &M2Complex) -> M2AutReport {
    let k = cx.cells.len();
    let cell_maps: Vec<Permutation> = all_permutations(k)
        .into_iter()
        .filter(|p| (0..k).all(|c| cx.cells[c].dim() == cx.cells[p.apply(c)].dim()))
        .collect();
    let per_cell: Vec<Vec<Permutation>> =
        cx.cells.iter().map(|c| all_permutations(c.dim())).collect();
    let mut report = M2AutReport {
        cells: k,
        f_vector: cx.f_vector(),
        candidates: 0,
        rejected_dimension: 0,
        rejected_face: 0,
        rejected_edge_map: 0,
        rejected_conjugation: 0,
        accepted: 0,
        aut_order: 0,
        cell_maps: Vec::new(),
        gamma1_edge_group_order: cx
            .index_of("Γ1")
            .map_or(0, |c| cx.cells[c].edge_group.len()),
        swap_witness: match check_candidate(cx, &bridge_loop_swap(cx)) {
            Ok(()) => "accepted".into(),
            Err(v) => v.to_string(),
        },
    };
    let mut classes = BTreeSet::new();
    for cm in &cell_maps {
        let mut choice = vec![0usize; k];
        loop {
            let cand = M2Candidate {
                cell_map: cm.images().to_vec(),
                edge_maps: (0..k).map(|c| per_cell[c][choice[c]].clone()).collect(),
            };
            report.candidates += 1;
            match check_candidate(cx, &cand) {
                Ok(()) => {
                    report.accepted += 1;
                    classes.insert(class_key(cx, &cand));
                }
                Err(M2Violation::Dimension { .. }) => report.rejected_dimension += 1,
                Err(M2Violation::Face { .. }) => report.rejected_face += 1,
                Err(M2Violation::EdgeMap { .. }) => report.rejected_edge_map += 1,
                Err(M2Violation::Conjugation { .. }) => report.rejected_conjugation += 1,
            }
            // odometer over the per-cell edge bijections
            let mut i = 0;
            while i < k {
                choice[i] += 1;
                if choice[i] < per_cell[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    report.aut_order = classes.len();
    report.cell_maps = classes
        .iter()
        .map(|(cm, _)| cm.iter().map(|&c| cx.cells[c].name.to_string()).collect())
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx() -> M2Complex {
        build_m2_complex().unwrap()
    }

    #[test]
    fn fixture_integrity() {
        let cx = cx();
        assert_eq!(cx.cells().len(), 7);
        assert_eq!(cx.f_vector(), vec![1, 2, 2, 2]);
        for c in cx.cells() {
            assert_eq!(c.graph.genus(), 2, "{}", c.name);
            assert!(c.graph.is_stable(), "{}", c.name);
        }
        assert!(cx.check_face_equivariance().unwrap() > 0);
    }

    #[test]
    fn edge_groups() {
        let cx = cx();
        let order = |name: &str| cx.cell(cx.index_of(name).unwrap()).edge_group.len();
        assert_eq!(order("Γ1"), 6);
        assert_eq!(order("Γ2"), 2);
        assert_eq!(order("Γ3"), 2);
        assert_eq!(order("Γ4"), 1);
        assert_eq!(order("p"), 1);
        let g2 = cx.cell(cx.index_of("Γ2").unwrap());
        let swap = g2.edge_group.iter().find(|g| !g.is_identity()).unwrap();
        // fixes the bridge, swaps the loops
        assert_eq!(swap.images(), &[0, 2, 1]);
        assert_eq!(cx.cell(0).group().order(), 6);
    }

    #[test]
    fn contraction_rules() {
        let g = WeightedGraph::new(vec![0, 0], vec![(0, 1), (0, 0), (1, 1)]).unwrap();
        let (loop_gone, retained) = g.contract(1).unwrap();
        assert_eq!(loop_gone.weights(), &[1, 0]);
        assert_eq!(retained, vec![Some(0), None, Some(1)]);
        let (bridge_gone, _) = g.contract(0).unwrap();
        assert_eq!(bridge_gone.weights(), &[0]);
        assert_eq!(bridge_gone.edges(), &[(0, 0), (0, 0)]);
        assert!(g.contract(3).is_err());
        assert!(WeightedGraph::new(vec![0, 0], vec![]).is_err());
    }

    #[test]
    fn identity_is_accepted_and_swap_is_rejected() {
        let cx = cx();
        assert_eq!(check_candidate(&cx, &M2Candidate::identity(&cx)), Ok(()));
        let err = check_candidate(&cx, &bridge_loop_swap(&cx)).unwrap_err();
        match &err {
            M2Violation::Face {
                face, image_face, ..
            } => {
                let mut pair = [*face, *image_face];
                pair.sort();
                assert_eq!(pair, ["Γ3", "Γ4"]);
            }
            other => panic!("unexpected violation {other:?}"),
        }
        assert!(err.to_string().contains("Γ3") && err.to_string().contains("Γ4"));
    }

    #[test]
    fn automorphism_group_is_trivial() {
        let cx = cx();
        let r = aut_m2(&cx);
        assert_eq!(r.candidates, 8 * 144);
        assert_eq!(r.aut_order, 1);
        // all six edge bijections of Γ1 collapse to one class
        assert_eq!(r.accepted % 6, 0);
        let names: Vec<String> = cx.cells().iter().map(|c| c.name.to_string()).collect();
        assert_eq!(r.cell_maps, vec![names]);
    }
}
