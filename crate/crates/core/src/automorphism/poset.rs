//! Automorphisms found directly on the face poset, without using rays.
//!
//! Every cell is a face of a maximal cell, so an automorphism is fixed by
//! where it sends each maximal cell and how it permutes that cell's edges.
//! Maximal cells are visited in an order where each one shares a facet with
//! an earlier one. Once the image of that shared facet is known, the image of
//! the new cell must be one of its maximal cofacets and the edge bijection is
//! forced. Each choice is propagated to all faces and checked for conflicts.

use crate::complex::{ConeComplex, Face};
use crate::enumeration::check_envelope;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::group::PermutationGroup;
use crate::perm::{all_permutations, Permutation};

/// The poset search is exponential in spirit; it is only offered up to here.
pub const MAX_POSET_N: usize = 6;

#[derive(Debug, Clone)]
pub struct PosetSearch {
    /// Every automorphism found, as ray permutations, sorted.
    pub automorphisms: Vec<Permutation>,
    pub group: PermutationGroup,
}

struct Plan {
    /// Maximal cells in visiting order.
    order: Vec<usize>,
    /// For `order[k]`, k ≥ 1: (earlier maximal cell, its facet position,
    /// position in `order[k]` of the shared facet).
    link: Vec<Option<(usize, usize, usize)>>,
    /// `faces[c][mask]`: face of maximal cell `c` contracting the edges in `mask`.
    faces: Vec<Vec<Face>>,
    max_start: usize,
}

#[derive(Clone)]
struct State {
    image: Vec<Option<usize>>,
    preimage: Vec<Option<usize>>,
    edges: Vec<Vec<usize>>,
}

fn plan(cx: &ConeComplex) -> Result<Plan> {
    let top = cx.cells_of_dim(cx.max_dimension());
    let d = cx.max_dimension();
    let mut faces = Vec::with_capacity(top.len());
    for c in top.clone() {
        let mut list = Vec::with_capacity(1 << d);
        for mask in 0..1usize << d {
            let positions: Vec<usize> = (0..d).filter(|&p| mask >> p & 1 == 1).collect();
            list.push(cx.face(c, &positions)?);
        }
        faces.push(list);
    }
    let mut visited = vec![false; top.len()];
    let mut order = vec![top.start];
    let mut link = vec![None];
    visited[0] = true;
    let mut k = 0;
    while k < order.len() {
        let c = order[k];
        for (p, facet) in cx.facets(c).iter().enumerate() {
            for &other in cx.cofacets(facet.target) {
                let slot = other - top.start;
                if visited[slot] {
                    continue;
                }
                visited[slot] = true;
                let q = cx
                    .facets(other)
                    .iter()
                    .position(|f| f.target == facet.target)
                    .expect("cofacet has the facet");
                order.push(other);
                link.push(Some((c, p, q)));
            }
        }
        k += 1;
    }
    if order.len() != top.len() {
        return Err(Error::Invariant(
            "maximal cells are not connected through facets".into(),
        ));
    }
    Ok(Plan {
        order,
        link,
        faces,
        max_start: top.start,
    })
}

/// Assign images of every face of maximal cell `c` given its image and edge
/// bijection. Newly assigned cells are pushed to `trail`.
fn assign(
    plan: &Plan,
    state: &mut State,
    c: usize,
    image: usize,
    phi: &[usize],
    trail: &mut Vec<usize>,
) -> bool {
    let d = phi.len();
    let src = &plan.faces[c - plan.max_start];
    let dst = &plan.faces[image - plan.max_start];
    for (mask, from) in src.iter().enumerate() {
        let mut image_mask = 0usize;
        for (p, &q) in phi.iter().enumerate() {
            if mask >> p & 1 == 1 {
                image_mask |= 1 << q;
            }
        }
        let to = &dst[image_mask];
        let face_dim = d - mask.count_ones() as usize;
        let mut face_phi = vec![usize::MAX; face_dim];
        for (r, &q) in from.retained.iter().zip(phi) {
            if let Some(y) = *r {
                face_phi[y] = to.retained[q].expect("retained");
            }
        }
        match state.image[from.target] {
            Some(t) => {
                if t != to.target || state.edges[from.target] != face_phi {
                    return false;
                }
            }
            None => {
                if state.preimage[to.target].is_some() {
                    return false;
                }
                state.image[from.target] = Some(to.target);
                state.preimage[to.target] = Some(from.target);
                state.edges[from.target] = face_phi;
                trail.push(from.target);
            }
        }
    }
    true
}

fn undo(state: &mut State, trail: &[usize]) {
    for &c in trail {
        let t = state.image[c].take().expect("assigned");
        state.preimage[t] = None;
        state.edges[c].clear();
    }
}

fn ray_permutation(cx: &ConeComplex, state: &State) -> Permutation {
    let images = (0..cx.num_rays())
        .map(|r| {
            let c = state.image[cx.ray_cell(r)].expect("complete assignment");
            cx.ray_of_split(&cx.cell(c).splits()[0]).expect("ray")
        })
        .collect();
    Permutation::from_images(images).expect("cell map is a bijection")
}

fn search(cx: &ConeComplex, plan: &Plan, state: &mut State, k: usize, out: &mut Vec<Permutation>) {
    if k == plan.order.len() {
        if state.image.iter().all(Option::is_some) {
            out.push(ray_permutation(cx, state));
        }
        return;
    }
    let c = plan.order[k];
    if state.image[c].is_some() {
        search(cx, plan, state, k + 1, out);
        return;
    }
    let (parent, p, q) = plan.link[k].expect("non-root cells have a link");
    let shared = cx.facets(parent)[p].target;
    let shared_image = state.image[shared].expect("parent assigned");
    let own_facet = &cx.facets(c)[q];
    for &candidate in cx.cofacets(shared_image) {
        if state.preimage[candidate].is_some() {
            continue;
        }
        let q_image = cx
            .facets(candidate)
            .iter()
            .position(|f| f.target == shared_image)
            .expect("cofacet has the facet");
        let image_facet = &cx.facets(candidate)[q_image];
        let shared_phi = &state.edges[shared];
        let phi: Vec<usize> = (0..cx.dim(c))
            .map(|x| match own_facet.retained[x] {
                None => q_image,
                Some(y) => image_facet
                    .retained
                    .iter()
                    .position(|&r| r == Some(shared_phi[y]))
                    .expect("retained map is a bijection onto the facet"),
            })
            .collect();
        let mut trail = Vec::new();
        if assign(plan, state, c, candidate, &phi, &mut trail) {
            search(cx, plan, state, k + 1, out);
        }
        undo(state, &trail);
    }
}

pub fn aut_via_poset(cx: &ConeComplex) -> Result<PosetSearch> {
    aut_via_poset_with(cx, Execution::default())
}

/// Exhaustive automorphism search on the face poset. Root choices (the image
/// and edge bijection of the first maximal cell) run in parallel.
pub fn aut_via_poset_with(cx: &ConeComplex, exec: Execution) -> Result<PosetSearch> {
    check_envelope(cx.n())?;
    if cx.n() > MAX_POSET_N {
        return Err(Error::Envelope {
            n: cx.n(),
            max: MAX_POSET_N,
        });
    }
    let plan = plan(cx)?;
    let d = cx.max_dimension();
    let roots: Vec<(usize, Permutation)> = cx
        .cells_of_dim(d)
        .flat_map(|t| all_permutations(d).into_iter().map(move |phi| (t, phi)))
        .collect();
    let empty = State {
        image: vec![None; cx.num_cells()],
        preimage: vec![None; cx.num_cells()],
        edges: vec![Vec::new(); cx.num_cells()],
    };
    let found: Vec<Vec<Permutation>> = exec::map(exec, &roots, |(target, phi)| {
        let mut state = empty.clone();
        let mut trail = Vec::new();
        let mut out = Vec::new();
        if assign(
            &plan,
            &mut state,
            plan.order[0],
            *target,
            phi.images(),
            &mut trail,
        ) {
            search(cx, &plan, &mut state, 1, &mut out);
        }
        out
    });
    let mut automorphisms: Vec<Permutation> = found.into_iter().flatten().collect();
    automorphisms.sort_by(|a, b| a.images().cmp(b.images()));
    let before = automorphisms.len();
    automorphisms.dedup();
    if automorphisms.len() != before {
        return Err(Error::Invariant(
            "two poset automorphisms induce the same ray permutation".into(),
        ));
    }
    let group = PermutationGroup::from_elements(cx.num_rays(), &automorphisms)?;
    Ok(PosetSearch {
        automorphisms,
        group,
    })
}
