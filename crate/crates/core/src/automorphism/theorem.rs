//! End-to-end check that the automorphism group is the symmetric group on
//! the markings (or its quotient `S_3` when n = 4).

use serde::Serialize;

use crate::complex::build_complex_with;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::PermutationGroup;
use crate::perm::{all_permutations, Permutation};
use crate::verdict::Verdict;

use super::{
    aut_via_compat_graph_with, aut_via_poset_with, reconstruct_sigma, sn_action,
    ComplexAutomorphism, MAX_POSET_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub order: u64,
    pub expected: u64,
    pub poset_order: Option<u64>,
    /// `None` when the poset method is out of range.
    pub method_agreement: Option<bool>,
    /// Generators in cycle notation on ray indices.
    pub generators: Vec<String>,
    /// A marking permutation inducing each generator, if one was found.
    pub sigma_of_generator: Vec<Option<String>>,
    /// Whether the image of `S_n` is the whole computed group.
    pub surjective: bool,
    pub verdict: Verdict,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn verify_main_theorem(n: usize) -> Result<TheoremReport> {
    verify_main_theorem_with(n, Execution::default())
}

pub fn verify_main_theorem_with(n: usize, exec: Execution) -> Result<TheoremReport> {
    if !(4..=7).contains(&n) {
        return Err(Error::Unsupported(format!(
            "theorem verification covers 4 <= n <= 7, got n = {n}"
        )));
    }
    let cx = build_complex_with(n, exec)?;
    let group = aut_via_compat_graph_with(&cx, exec);
    let order = group.order() as u64;
    let expected = if n == 4 { 6 } else { factorial(n) };

    let poset_order;
    let method_agreement;
    if n <= MAX_POSET_N {
        let poset = aut_via_poset_with(&cx, exec)?;
        poset_order = Some(poset.group.order() as u64);
        method_agreement = Some(poset.group.same_group(&group));
    } else {
        poset_order = None;
        method_agreement = None;
    }

    let mut sigma_of_generator = Vec::new();
    for g in group.generators() {
        let sigma = match ComplexAutomorphism::from_rays(&cx, g.clone()) {
            Err(_) => None,
            Ok(f) if n >= 5 => reconstruct_sigma(&cx, &f).ok(),
            Ok(f) => all_permutations(n)
                .into_iter()
                .find(|s| sn_action(&cx, s).map(|a| a == f).unwrap_or(false)),
        };
        sigma_of_generator.push(sigma.map(|s| s.cycle_string()));
    }

    let images: Vec<Permutation> = if n == 4 {
        all_permutations(4)
            .iter()
            .map(|s| sn_action(&cx, s).map(|f| f.rays().clone()))
            .collect::<Result<_>>()?
    } else {
        let transposition = Permutation::from_cycles(n, &[&[1, 2]])?;
        let cycle: Vec<usize> = (1..=n).collect();
        let long = Permutation::from_cycles(n, &[&cycle])?;
        vec![
            sn_action(&cx, &transposition)?.rays().clone(),
            sn_action(&cx, &long)?.rays().clone(),
        ]
    };
    let image = PermutationGroup::new(cx.num_rays(), images)?;
    let surjective = image.same_group(&group);

    let verdict = Verdict::from_bool(
        order == expected
            && method_agreement != Some(false)
            && sigma_of_generator.iter().all(Option::is_some)
            && surjective,
    );
    Ok(TheoremReport {
        n,
        order,
        expected,
        poset_order,
        method_agreement,
        generators: group
            .generators()
            .iter()
            .map(Permutation::cycle_string)
            .collect(),
        sigma_of_generator,
        surjective,
        verdict,
    })
}

/// Permutations of four markings acting trivially on the n = 4 complex.
pub fn klein_kernel() -> Result<Vec<Permutation>> {
    let cx = crate::complex::build_complex(4)?;
    all_permutations(4)
        .into_iter()
        .filter_map(|s| match sn_action(&cx, &s) {
            Ok(f) if f.is_identity() => Some(Ok(s)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_pass() {
        for (n, order) in [(4, 6), (5, 120)] {
            let r = verify_main_theorem(n).unwrap();
            assert_eq!(r.order, order);
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            assert_eq!(r.method_agreement, Some(true));
        }
    }

    #[test]
    fn range_is_enforced() {
        assert!(verify_main_theorem(3).is_err());
        assert!(verify_main_theorem(8).is_err());
    }

    #[test]
    fn kernel_is_the_klein_group() {
        let k: Vec<String> = klein_kernel()
            .unwrap()
            .iter()
            .map(|p| p.cycle_string())
            .collect();
        assert_eq!(k, vec!["()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"]);
    }
}
