//! The cone complex of stable genus-0 tropical curves as a face poset.
//!
//! Cells are stable trees, indexed in (dimension, canonical form) order. A
//! cell's coordinates are its edges, which we identify with positions in its
//! sorted split list. Faces come from contracting edges, and every face map
//! records where the surviving edges land.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde_json::{json, Value};

use crate::enumeration::{check_envelope, enumerate_strata_with};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tree::{tree_from_canonical, CanonicalForm, Split};

/// The codimension-one face obtained by contracting one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub target: usize,
    /// Edge position in the source cell ↦ edge position in the target, or
    /// `None` for the contracted edge.
    pub retained: Vec<Option<usize>>,
}

/// An arbitrary face: target cell plus the retained-edge injection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub target: usize,
    pub retained: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct ConeComplex {
    n: usize,
    cells: Vec<CanonicalForm>,
    dim_start: Vec<usize>,
    index: HashMap<CanonicalForm, usize>,
    facets: Vec<Vec<Facet>>,
    cofacets: Vec<Vec<usize>>,
    ray_of_split: HashMap<Split, usize>,
    compat: Vec<Vec<usize>>,
}

pub fn build_complex(n: usize) -> Result<ConeComplex> {
    build_complex_with(n, Execution::default())
}

pub fn build_complex_with(n: usize, exec: Execution) -> Result<ConeComplex> {
    check_envelope(n)?;
    let catalog = enumerate_strata_with(n, exec)?;
    let mut cells = Vec::with_capacity(catalog.len());
    let mut dim_start = Vec::new();
    for layer in catalog.by_dimension() {
        dim_start.push(cells.len());
        cells.extend(layer.iter().cloned());
    }
    dim_start.push(cells.len());
    let index: HashMap<CanonicalForm, usize> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    let facets = exec::map(exec, &cells, |cf| compute_facets(cf, &index))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut cofacets = vec![Vec::new(); cells.len()];
    for (c, list) in facets.iter().enumerate() {
        for f in list {
            cofacets[f.target].push(c);
        }
    }

    let rays: Range<usize> = if dim_start.len() > 2 {
        dim_start[1]..dim_start[2]
    } else {
        0..0
    };
    let ray_of_split: HashMap<Split, usize> = rays
        .clone()
        .map(|c| (cells[c].splits()[0], c - rays.start))
        .collect();
    let ray_splits: Vec<Split> = rays.map(|c| cells[c].splits()[0]).collect();
    let compat = ray_splits
        .iter()
        .enumerate()
        .map(|(i, a)| {
            ray_splits
                .iter()
                .enumerate()
                .filter(|&(j, b)| j != i && a.compatible_unchecked(b))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    Ok(ConeComplex {
        n,
        cells,
        dim_start,
        index,
        facets,
        cofacets,
        ray_of_split,
        compat,
    })
}

/// One-edge contractions of a cell, read off from tree contraction.
fn compute_facets(cf: &CanonicalForm, index: &HashMap<CanonicalForm, usize>) -> Result<Vec<Facet>> {
    let tree = tree_from_canonical(cf);
    let edge_splits = tree.edge_splits()?;
    let position_of_edge: Vec<usize> = edge_splits
        .iter()
        .map(|s| cf.position(s).expect("edge split belongs to the cell"))
        .collect();
    let mut edge_of_position = vec![0; cf.dimension()];
    for (e, &p) in position_of_edge.iter().enumerate() {
        edge_of_position[p] = e;
    }
    let mut out = Vec::with_capacity(cf.dimension());
    for &e in &edge_of_position {
        let contraction = tree.contract(&[e])?;
        let target_cf = contraction.tree.splits_of()?;
        let target = *index.get(&target_cf).ok_or_else(|| {
            Error::Invariant(format!("contraction of {cf} gave unknown cell {target_cf}"))
        })?;
        let target_splits = contraction.tree.edge_splits()?;
        let mut retained = vec![None; cf.dimension()];
        for (old_e, kept) in contraction.retained.iter().enumerate() {
            if let Some(new_e) = kept {
                let s = target_splits[*new_e];
                if s != edge_splits[old_e] {
                    return Err(Error::Invariant(format!(
                        "contraction changed split {} into {s}",
                        edge_splits[old_e]
                    )));
                }
                retained[position_of_edge[old_e]] = target_cf.position(&s);
            }
        }
        out.push(Facet { target, retained });
    }
    // distinct edges of a rigid tree give distinct facets
    let mut targets: Vec<usize> = out.iter().map(|f| f.target).collect();
    targets.sort_unstable();
    if targets.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invariant(format!("cell {cf} has a repeated facet")));
    }
    Ok(out)
}

impl ConeComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[CanonicalForm] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &CanonicalForm {
        &self.cells[c]
    }

    pub fn dim(&self, c: usize) -> usize {
        self.cells[c].dimension()
    }

    pub fn max_dimension(&self) -> usize {
        self.dim_start.len() - 2
    }

    pub fn cells_of_dim(&self, d: usize) -> Range<usize> {
        if d + 1 >= self.dim_start.len() {
            return 0..0;
        }
        self.dim_start[d]..self.dim_start[d + 1]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dim_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn index_of(&self, cf: &CanonicalForm) -> Option<usize> {
        self.index.get(cf).copied()
    }

    pub fn facets(&self, c: usize) -> &[Facet] {
        &self.facets[c]
    }

    /// Cells having `c` as a codimension-one face.
    pub fn cofacets(&self, c: usize) -> &[usize] {
        &self.cofacets[c]
    }

    pub fn check_cell(&self, c: usize) -> Result<()> {
        if c < self.cells.len() {
            Ok(())
        } else {
            Err(Error::CellOutOfRange(c))
        }
    }

    /// Contract the edges at `positions` by chaining facet maps.
    pub fn face(&self, c: usize, positions: &[usize]) -> Result<Face> {
        self.check_cell(c)?;
        let dim = self.dim(c);
        let mut current = c;
        let mut map: Vec<Option<usize>> = (0..dim).map(Some).collect();
        for &p in positions {
            let q = map.get(p).copied().flatten().ok_or(Error::NotAnEdge(p))?;
            let facet = &self.facets[current][q];
            current = facet.target;
            for slot in map.iter_mut() {
                *slot = slot.and_then(|x| facet.retained[x]);
            }
        }
        Ok(Face {
            target: current,
            retained: map,
        })
    }

    /// Number of cells one dimension up that contain `c`, found by scanning
    /// every facet map of that dimension.
    pub fn star_count(&self, c: usize) -> Result<usize> {
        self.check_cell(c)?;
        let up = self.dim(c) + 1;
        Ok(self
            .cells_of_dim(up)
            .filter(|&d| self.facets[d].iter().any(|f| f.target == c))
            .count())
    }

    pub fn num_rays(&self) -> usize {
        self.compat.len()
    }

    /// Cell index of ray `r` (rays are the dimension-one cells, in order).
    pub fn ray_cell(&self, r: usize) -> usize {
        self.dim_start[1] + r
    }

    pub fn ray_split(&self, r: usize) -> Split {
        self.cells[self.ray_cell(r)].splits()[0]
    }

    pub fn ray_of_split(&self, s: &Split) -> Option<usize> {
        self.ray_of_split.get(s).copied()
    }

    /// Ray indices of a cell's edges, by edge position.
    pub fn cell_rays(&self, c: usize) -> Vec<usize> {
        self.cells[c]
            .splits()
            .iter()
            .map(|s| self.ray_of_split[s])
            .collect()
    }

    /// Compatibility graph on rays, as adjacency lists.
    pub fn compat_graph(&self) -> &[Vec<usize>] {
        &self.compat
    }

    pub fn num_compat_edges(&self) -> usize {
        self.compat.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Every clique of the compatibility graph spans exactly one cell of the
    /// same dimension, and every cell arises this way.
    pub fn verify_flag_property(&self) -> std::result::Result<(), String> {
        let k = self.num_rays();
        let mut adj = vec![vec![false; k]; k];
        for (i, list) in self.compat.iter().enumerate() {
            for &j in list {
                adj[i][j] = true;
            }
        }
        let mut found = vec![false; self.cells.len()];
        let mut failure = None;
        fn rec(
            cx: &ConeComplex,
            adj: &[Vec<bool>],
            start: usize,
            clique: &mut Vec<usize>,
            found: &mut [bool],
            failure: &mut Option<String>,
        ) {
            if failure.is_some() {
                return;
            }
            let mut splits: Vec<Split> = clique.iter().map(|&r| cx.ray_split(r)).collect();
            splits.sort_unstable();
            let cf = CanonicalForm::from_sorted_unchecked(cx.n, splits);
            match cx.index_of(&cf) {
                Some(c) if cx.dim(c) == clique.len() => found[c] = true,
                _ => {
                    *failure = Some(format!("clique {clique:?} spans no cell"));
                    return;
                }
            }
            for r in start..adj.len() {
                if clique.iter().all(|&q| adj[q][r]) {
                    clique.push(r);
                    rec(cx, adj, r + 1, clique, found, failure);
                    clique.pop();
                }
            }
        }
        rec(self, &adj, 0, &mut Vec::new(), &mut found, &mut failure);
        if let Some(f) = failure {
            return Err(f);
        }
        match found.iter().position(|f| !f) {
            Some(c) => Err(format!("cell {} is not a clique", self.cells[c])),
            None => Ok(()),
        }
    }

    /// Hasse diagram in DOT, edges pointing from a cell to its facets.
    pub fn hasse_dot(&self) -> String {
        let mut out = format!("digraph hasse_m0{} {{\n  rankdir=BT;\n", self.n);
        for (c, cf) in self.cells.iter().enumerate() {
            let _ = writeln!(out, "  c{c} [label=\"{cf}\", dim={}];", cf.dimension());
        }
        for (c, list) in self.facets.iter().enumerate() {
            for f in list {
                let _ = writeln!(out, "  c{c} -> c{};", f.target);
            }
        }
        out.push_str("}\n");
        out
    }

    /// Compatibility graph on rays in DOT.
    pub fn compat_dot(&self) -> String {
        let mut out = format!("graph compat_m0{} {{\n", self.n);
        for r in 0..self.num_rays() {
            let _ = writeln!(out, "  r{r} [label=\"{}\"];", self.ray_split(r));
        }
        for (i, list) in self.compat.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                let _ = writeln!(out, "  r{i} -- r{j};");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Full poset with facet maps.
    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .enumerate()
            .map(|(c, cf)| {
                let facets: Vec<Value> = self.facets[c]
                    .iter()
                    .enumerate()
                    .map(|(p, f)| json!({ "contract": p, "target": f.target, "retained": f.retained }))
                    .collect();
                json!({
                    "index": c,
                    "dim": cf.dimension(),
                    "splits": cf.to_json().splits,
                    "facets": facets,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "f_vector": self.f_vector(),
            "cells": cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_complexes() {
        let cx = build_complex(3).unwrap();
        assert_eq!(cx.num_cells(), 1);
        assert_eq!(cx.num_rays(), 0);

        let cx = build_complex(4).unwrap();
        assert_eq!(cx.f_vector(), vec![1, 3]);
        assert_eq!(cx.num_rays(), 3);
        assert_eq!(cx.num_compat_edges(), 0);
        assert_eq!(cx.star_count(0).unwrap(), 3);

        let cx = build_complex(5).unwrap();
        assert_eq!(cx.num_cells(), 26);
        assert_eq!(cx.num_rays(), 10);
        assert_eq!(cx.num_compat_edges(), 15);
    }

    #[test]
    fn star_counts_n5() {
        let cx = build_complex(5).unwrap();
        for c in cx.cells_of_dim(2) {
            assert_eq!(cx.star_count(c).unwrap(), 0);
        }
        // every ray is a {2,3} split: the 3-leg vertex has 3 expansions
        for r in 0..cx.num_rays() {
            assert_eq!(cx.star_count(cx.ray_cell(r)).unwrap(), 3);
        }
        assert!(cx.star_count(99).is_err());
    }

    #[test]
    fn facets_drop_one_dimension_and_compose() {
        let cx = build_complex(6).unwrap();
        for c in 0..cx.num_cells() {
            let d = cx.dim(c);
            for (p, f) in cx.facets(c).iter().enumerate() {
                assert_eq!(cx.dim(f.target), d - 1);
                assert_eq!(cx.cell(f.target), &cx.cell(c).without(&[p]));
            }
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    let both = cx.face(c, &[a, b]).unwrap();
                    let first = cx.face(c, &[a]).unwrap();
                    let b_after = first.retained[b].unwrap();
                    let then = cx.face(first.target, &[b_after]).unwrap();
                    assert_eq!(both.target, then.target);
                    let composed: Vec<Option<usize>> = first
                        .retained
                        .iter()
                        .map(|x| x.and_then(|x| then.retained[x]))
                        .collect();
                    assert_eq!(both.retained, composed);
                }
            }
            let all: Vec<usize> = (0..d).collect();
            assert_eq!(cx.face(c, &all).unwrap().target, 0);
        }
    }

    #[test]
    fn flag_property_small_n() {
        for n in 3..=6 {
            build_complex(n).unwrap().verify_flag_property().unwrap();
        }
    }

    #[test]
    fn dot_and_json_exports() {
        let cx = build_complex(4).unwrap();
        let hasse = cx.hasse_dot();
        assert!(hasse.contains("c1 -> c0;"));
        assert_eq!(hasse.matches("->").count(), 3);
        let compat = cx.compat_dot();
        assert_eq!(compat.matches("--").count(), 0);
        let v = cx.to_json();
        assert_eq!(v["f_vector"], json!([1, 3]));
        assert_eq!(v["cells"][1]["facets"][0]["target"], json!(0));
    }
}
