//! Automorphisms of the cone complex.
//!
//! An automorphism permutes cells preserving dimension and carries each
//! cell's edges bijectively onto the edges of the image, compatibly with all
//! face maps. Because a set of rays spans a cell exactly when the rays are
//! pairwise compatible, the permutation of rays determines everything else;
//! [`ComplexAutomorphism`] stores only that and derives cell and edge maps.

mod poset;
mod reconstruct;
pub mod refine;
mod theorem;

use std::fmt;

use crate::complex::ConeComplex;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::PermutationGroup;
use crate::perm::Permutation;
use crate::tree::{CanonicalForm, Split};

pub use poset::{aut_via_poset, aut_via_poset_with, PosetSearch, MAX_POSET_N};
pub use reconstruct::{
    check_cellwise_permutation, check_cup_containment, image_side, reconstruct_sigma,
};
pub use theorem::{klein_kernel, verify_main_theorem, verify_main_theorem_with, TheoremReport};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexAutomorphism {
    rays: Permutation,
}

/// Why a ray permutation fails to be an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomorphismViolation {
    WrongDegree {
        expected: usize,
        found: usize,
    },
    /// The images of a cell's rays are not pairwise compatible.
    NotACell {
        cell: usize,
    },
    NotBijective {
        image: usize,
    },
    /// Contracting position `position` of `cell` and then mapping disagrees
    /// with mapping and then contracting the image edge.
    FaceMismatch {
        cell: usize,
        position: usize,
        expected: usize,
        found: usize,
    },
    EdgeMapMismatch {
        cell: usize,
        position: usize,
    },
}

impl fmt::Display for AutomorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongDegree { expected, found } => {
                write!(f, "ray permutation has degree {found}, expected {expected}")
            }
            Self::NotACell { cell } => write!(f, "image of cell {cell} is not a cell"),
            Self::NotBijective { image } => write!(f, "cell {image} is hit twice"),
            Self::FaceMismatch { cell, position, expected, found } => write!(
                f,
                "cell {cell}, edge {position}: face maps to {found} but the image face is {expected}"
            ),
            Self::EdgeMapMismatch { cell, position } => {
                write!(f, "cell {cell}, edge {position}: edge maps do not commute with the face map")
            }
        }
    }
}

impl ComplexAutomorphism {
    pub fn identity(cx: &ConeComplex) -> Self {
        ComplexAutomorphism {
            rays: Permutation::identity(cx.num_rays()),
        }
    }

    /// Wrap a ray permutation after checking it against every face map.
    pub fn from_rays(
        cx: &ConeComplex,
        rays: Permutation,
    ) -> std::result::Result<Self, AutomorphismViolation> {
        let f = ComplexAutomorphism { rays };
        f.validate(cx)?;
        Ok(f)
    }

    pub fn rays(&self) -> &Permutation {
        &self.rays
    }

    pub fn is_identity(&self) -> bool {
        self.rays.is_identity()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ComplexAutomorphism) -> ComplexAutomorphism {
        ComplexAutomorphism {
            rays: self.rays.compose(&other.rays),
        }
    }

    pub fn inverse(&self) -> ComplexAutomorphism {
        ComplexAutomorphism {
            rays: self.rays.inverse(),
        }
    }

    fn image_split(&self, cx: &ConeComplex, s: &Split) -> Split {
        let r = cx.ray_of_split(s).expect("split is a ray");
        cx.ray_split(self.rays.apply(r))
    }

    /// Split set of the image cell, whether or not it is a cell.
    pub fn image_form(
        &self,
        cx: &ConeComplex,
        c: usize,
    ) -> std::result::Result<CanonicalForm, AutomorphismViolation> {
        let splits: Vec<Split> = cx
            .cell(c)
            .splits()
            .iter()
            .map(|s| self.image_split(cx, s))
            .collect();
        CanonicalForm::new(cx.n(), splits).map_err(|_| AutomorphismViolation::NotACell { cell: c })
    }

    pub fn cell_image(&self, cx: &ConeComplex, c: usize) -> Option<usize> {
        self.image_form(cx, c).ok().and_then(|cf| cx.index_of(&cf))
    }

    pub fn cell_map(&self, cx: &ConeComplex) -> Option<Vec<usize>> {
        (0..cx.num_cells())
            .map(|c| self.cell_image(cx, c))
            .collect()
    }

    /// Edge position in `c` ↦ edge position in the image of `c`.
    pub fn edge_map(&self, cx: &ConeComplex, c: usize) -> Option<Vec<usize>> {
        let image = self.image_form(cx, c).ok()?;
        Some(
            cx.cell(c)
                .splits()
                .iter()
                .map(|s| {
                    image
                        .position(&self.image_split(cx, s))
                        .expect("image split")
                })
                .collect(),
        )
    }

    /// Checks that the derived cell map is a dimension-preserving bijection
    /// and that `f(C(Γ/e)) = C(Γ'/f(e))` with commuting edge maps, for every
    /// cell and edge.
    pub fn validate(&self, cx: &ConeComplex) -> std::result::Result<(), AutomorphismViolation> {
        if self.rays.degree() != cx.num_rays() {
            return Err(AutomorphismViolation::WrongDegree {
                expected: cx.num_rays(),
                found: self.rays.degree(),
            });
        }
        let mut cell_map = Vec::with_capacity(cx.num_cells());
        let mut hit = vec![false; cx.num_cells()];
        for c in 0..cx.num_cells() {
            let img = self
                .cell_image(cx, c)
                .ok_or(AutomorphismViolation::NotACell { cell: c })?;
            if hit[img] {
                return Err(AutomorphismViolation::NotBijective { image: img });
            }
            hit[img] = true;
            cell_map.push(img);
        }
        for c in 0..cx.num_cells() {
            let phi = self.edge_map(cx, c).expect("image is a cell");
            let img = cell_map[c];
            for (p, facet) in cx.facets(c).iter().enumerate() {
                let image_facet = &cx.facets(img)[phi[p]];
                if cell_map[facet.target] != image_facet.target {
                    return Err(AutomorphismViolation::FaceMismatch {
                        cell: c,
                        position: p,
                        expected: image_facet.target,
                        found: cell_map[facet.target],
                    });
                }
                let phi_face = self.edge_map(cx, facet.target).expect("image is a cell");
                for q in (0..phi.len()).filter(|&q| q != p) {
                    let via_face = phi_face[facet.retained[q].expect("retained")];
                    let via_image = image_facet.retained[phi[q]].expect("retained");
                    if via_face != via_image {
                        return Err(AutomorphismViolation::EdgeMapMismatch {
                            cell: c,
                            position: p,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexAutomorphism{}", self.rays)
    }
}

/// The automorphism `Γ ↦ σ(Γ)` induced by a permutation of the markings.
pub fn sn_action(cx: &ConeComplex, sigma: &Permutation) -> Result<ComplexAutomorphism> {
    if sigma.degree() != cx.n() {
        return Err(Error::MarkingMismatch(cx.n(), sigma.degree()));
    }
    let images = (0..cx.num_rays())
        .map(|r| {
            let s = cx.ray_split(r).permuted(sigma);
            cx.ray_of_split(&s).expect("permuted split is a ray")
        })
        .collect();
    Ok(ComplexAutomorphism {
        rays: Permutation::from_images(images)?,
    })
}

/// Lift every element of a ray group to a complex automorphism.
pub fn lift(
    cx: &ConeComplex,
    rays: &Permutation,
) -> std::result::Result<ComplexAutomorphism, AutomorphismViolation> {
    ComplexAutomorphism::from_rays(cx, rays.clone())
}

/// Automorphism group of the compatibility graph, as a group on rays.
pub fn aut_via_compat_graph(cx: &ConeComplex) -> PermutationGroup {
    aut_via_compat_graph_with(cx, Execution::default())
}

pub fn aut_via_compat_graph_with(cx: &ConeComplex, exec: Execution) -> PermutationGroup {
    let search = refine::graph_automorphisms(cx.compat_graph(), exec);
    PermutationGroup::new(cx.num_rays(), search.generators).expect("degree matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::perm::all_permutations;
    use crate::tree::tree_from_canonical;

    #[test]
    fn identity_and_sn_action() {
        let cx = build_complex(5).unwrap();
        let id = sn_action(&cx, &Permutation::identity(5)).unwrap();
        assert!(id.is_identity());
        assert_eq!(id, ComplexAutomorphism::identity(&cx));
        assert!(sn_action(&cx, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn transposition_on_n4_rays() {
        let cx = build_complex(4).unwrap();
        let f = sn_action(&cx, &Permutation::from_cycles(4, &[&[1, 2]]).unwrap()).unwrap();
        let r23 = cx.ray_of_split(&Split::new(4, &[2, 3]).unwrap()).unwrap();
        let r24 = cx.ray_of_split(&Split::new(4, &[2, 4]).unwrap()).unwrap();
        let r34 = cx.ray_of_split(&Split::new(4, &[3, 4]).unwrap()).unwrap();
        assert_eq!(f.rays().apply(r23), r24);
        assert_eq!(f.rays().apply(r24), r23);
        assert_eq!(f.rays().apply(r34), r34);
    }

    #[test]
    fn sn_action_matches_tree_relabeling_and_validates() {
        let cx = build_complex(5).unwrap();
        for sigma in all_permutations(5).iter().step_by(7) {
            let f = sn_action(&cx, sigma).unwrap();
            f.validate(&cx).unwrap();
            for c in 0..cx.num_cells() {
                let t = tree_from_canonical(cx.cell(c))
                    .apply_marking_permutation(sigma)
                    .unwrap();
                let expected = cx.index_of(&t.splits_of().unwrap()).unwrap();
                assert_eq!(f.cell_image(&cx, c), Some(expected));
            }
        }
    }

    #[test]
    fn homomorphism_on_s4_and_s5() {
        for n in [4, 5] {
            let cx = build_complex(n).unwrap();
            let perms = all_permutations(n);
            let images: Vec<ComplexAutomorphism> =
                perms.iter().map(|s| sn_action(&cx, s).unwrap()).collect();
            for (i, a) in perms.iter().enumerate() {
                for (j, b) in perms.iter().enumerate().step_by(5) {
                    let lhs = sn_action(&cx, &a.compose(b)).unwrap();
                    assert_eq!(lhs, images[i].compose(&images[j]));
                    let c = cx.num_cells() - 1;
                    // edge maps compose as well
                    let fb = &images[j];
                    let mid = fb.cell_image(&cx, c).unwrap();
                    let composed: Vec<usize> = fb
                        .edge_map(&cx, c)
                        .unwrap()
                        .iter()
                        .map(|&p| images[i].edge_map(&cx, mid).unwrap()[p])
                        .collect();
                    assert_eq!(lhs.edge_map(&cx, c).unwrap(), composed);
                }
            }
        }
    }

    #[test]
    fn invalid_ray_permutations_are_rejected() {
        let cx = build_complex(5).unwrap();
        // swapping two rays generally breaks compatibility
        let mut images: Vec<usize> = (0..cx.num_rays()).collect();
        images.swap(0, 9);
        let p = Permutation::from_images(images).unwrap();
        assert!(matches!(
            ComplexAutomorphism::from_rays(&cx, p),
            Err(AutomorphismViolation::NotACell { .. } | AutomorphismViolation::NotBijective { .. })
        ));
        assert!(matches!(
            ComplexAutomorphism::from_rays(&cx, Permutation::identity(3)),
            Err(AutomorphismViolation::WrongDegree { .. })
        ));
    }

    #[test]
    fn graph_method_orders() {
        assert_eq!(aut_via_compat_graph(&build_complex(3).unwrap()).order(), 1);
        assert_eq!(aut_via_compat_graph(&build_complex(4).unwrap()).order(), 6);
        assert_eq!(
            aut_via_compat_graph(&build_complex(5).unwrap()).order(),
            120
        );
    }
}
