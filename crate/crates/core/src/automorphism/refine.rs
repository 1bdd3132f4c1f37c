//! Automorphism group of a simple graph by individualization and color
//! refinement.
//!
//! The first path of the search tree fixes a base `b_0, b_1, …`. Working from
//! the deepest level up, for each candidate image `y` of `b_i` that is not
//! already in the orbit of the generators found so far, a depth-first search
//! looks for an automorphism fixing `b_0..b_{i-1}` and sending `b_i` to `y`.
//! The product of the resulting orbit lengths is the group order.

use crate::exec::{self, Execution};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct GraphSearch {
    pub generators: Vec<Permutation>,
    pub base: Vec<usize>,
    pub orbit_lengths: Vec<usize>,
}

impl GraphSearch {
    pub fn order(&self) -> u128 {
        self.orbit_lengths.iter().map(|&l| l as u128).product()
    }
}

struct Graph<'a> {
    adj: &'a [Vec<usize>],
    matrix: Vec<Vec<bool>>,
}

struct PathLevel {
    colors: Vec<u32>,
    cell: u32,
    base: usize,
    class_sizes: Vec<usize>,
}

fn class_sizes(colors: &[u32]) -> Vec<usize> {
    let mut sizes = vec![0; colors.len()];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes
}

/// Equitable refinement. Colors are renumbered by sorted signature, so the
/// output depends only on the graph and the input coloring.
fn refine(g: &Graph, colors: &mut Vec<u32>) {
    let n = colors.len();
    let mut count = {
        let mut seen: Vec<u32> = colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g.adj[v].iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut rank = 0u32;
        let mut new = vec![0u32; n];
        for k in 0..n {
            if k > 0 && (sigs[k].0 != sigs[k - 1].0 || sigs[k].1 != sigs[k - 1].1) {
                rank += 1;
            }
            new[sigs[k].2] = rank;
        }
        let new_count = rank as usize + 1;
        *colors = new;
        if new_count == count {
            return;
        }
        count = new_count;
    }
}

fn individualize(g: &Graph, colors: &[u32], v: usize) -> Vec<u32> {
    let mut out: Vec<u32> = colors
        .iter()
        .enumerate()
        .map(|(u, &c)| 2 * c + u32::from(u == v))
        .collect();
    refine(g, &mut out);
    out
}

/// First non-singleton color class, smallest color first.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let sizes = class_sizes(colors);
    sizes.iter().position(|&s| s > 1).map(|c| c as u32)
}

/// Necessary condition for `colors` to be the image of the first path's
/// coloring at `level` under an automorphism.
fn matches_path(path: &[PathLevel], level: usize, colors: &[u32]) -> bool {
    match path.get(level) {
        Some(lvl) => class_sizes(colors) == lvl.class_sizes,
        None => target_cell(colors).is_none(),
    }
}

fn dfs(
    g: &Graph,
    path: &[PathLevel],
    leaf: &[u32],
    level: usize,
    colors: Vec<u32>,
) -> Option<Permutation> {
    if level == path.len() {
        // both leaves are discrete: match vertices by color
        let mut vertex_of_color = vec![0; colors.len()];
        for (v, &c) in colors.iter().enumerate() {
            vertex_of_color[c as usize] = v;
        }
        let images: Vec<usize> = leaf.iter().map(|&c| vertex_of_color[c as usize]).collect();
        let is_aut = g
            .adj
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&w| g.matrix[images[u]][images[w]]));
        return if is_aut {
            Some(Permutation::from_images(images).expect("bijection"))
        } else {
            None
        };
    }
    let cell = path[level].cell;
    for y in (0..colors.len()).filter(|&y| colors[y] == cell) {
        let next = individualize(g, &colors, y);
        if !matches_path(path, level + 1, &next) {
            continue;
        }
        if let Some(p) = dfs(g, path, leaf, level + 1, next) {
            return Some(p);
        }
    }
    None
}

fn orbit(point: usize, gens: &[Permutation], degree: usize) -> Vec<bool> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Generators, base and fundamental orbit lengths of `Aut(G)`.
pub fn graph_automorphisms(adj: &[Vec<usize>], exec: Execution) -> GraphSearch {
    let n = adj.len();
    let mut matrix = vec![vec![false; n]; n];
    for (u, list) in adj.iter().enumerate() {
        for &w in list {
            matrix[u][w] = true;
        }
    }
    let g = Graph { adj, matrix };

    let mut colors = vec![0u32; n];
    if n > 0 {
        refine(&g, &mut colors);
    }
    let mut path: Vec<PathLevel> = Vec::new();
    while let Some(cell) = target_cell(&colors) {
        let base = (0..n).find(|&v| colors[v] == cell).expect("non-empty cell");
        let next = individualize(&g, &colors, base);
        path.push(PathLevel {
            class_sizes: class_sizes(&colors),
            colors,
            cell,
            base,
        });
        colors = next;
    }
    let leaf = colors;

    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![1; path.len()];
    for i in (0..path.len()).rev() {
        let lvl = &path[i];
        let mut in_orbit = orbit(lvl.base, &generators, n);
        let candidates: Vec<usize> = (0..n)
            .filter(|&y| lvl.colors[y] == lvl.cell && !in_orbit[y])
            .collect();
        let found = exec::map(exec, &candidates, |&y| {
            let next = individualize(&g, &lvl.colors, y);
            let ok = matches_path(&path, i + 1, &next);
            if ok {
                dfs(&g, &path, &leaf, i + 1, next)
            } else {
                None
            }
        });
        for (y, p) in candidates.into_iter().zip(found) {
            if in_orbit[y] {
                continue;
            }
            if let Some(p) = p {
                generators.push(p);
                in_orbit = orbit(lvl.base, &generators, n);
            }
        }
        orbit_lengths[i] = in_orbit.iter().filter(|&&b| b).count();
    }
    GraphSearch {
        generators,
        base: path.iter().map(|l| l.base).collect(),
        orbit_lengths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermutationGroup;

    fn cycle(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()
    }

    fn check(adj: &[Vec<usize>], expected: u128) {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let s = graph_automorphisms(adj, exec);
            assert_eq!(s.order(), expected);
            let grp = PermutationGroup::new(adj.len(), s.generators.clone()).unwrap();
            assert_eq!(grp.order(), expected);
        }
    }

    #[test]
    fn small_graphs() {
        check(&cycle(5), 10);
        check(&cycle(6), 12);
        // three isolated vertices
        check(&[vec![], vec![], vec![]], 6);
        check(&[], 1);
        // path on 4 vertices
        check(&[vec![1], vec![0, 2], vec![1, 3], vec![2]], 2);
    }

    #[test]
    fn petersen_graph() {
        let mut adj = vec![Vec::new(); 10];
        let mut add = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for i in 0..5 {
            add(i, (i + 1) % 5);
            add(i, i + 5);
            add(5 + i, 5 + (i + 2) % 5);
        }
        check(&adj, 120);
    }

    #[test]
    fn complete_bipartite() {
        // K_{3,3}: 2 * 3! * 3! = 72
        let adj: Vec<Vec<usize>> = (0..6)
            .map(|v| if v < 3 { vec![3, 4, 5] } else { vec![0, 1, 2] })
            .collect();
        check(&adj, 72);
    }
}
