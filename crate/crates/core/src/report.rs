//! The full verification battery, run as one deterministic report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::automorphism::{
    aut_via_compat_graph_with, check_cup_containment, klein_kernel, reconstruct_sigma, sn_action,
    verify_main_theorem_with, ComplexAutomorphism,
};
use crate::complex::build_complex_with;
use crate::counting::{expansion_count_formula, lemma_sweep, two_vertex_consequence};
use crate::enumeration::{
    count_maximal, enumerate_by_split_sets, enumerate_strata_with, expansions,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::genus2::{aut_m2, build_m2_complex};
use crate::tree::{automorphisms_of_tree, tree_from_canonical};
use crate::verdict::Verdict;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const RANDOM_ELEMENTS: usize = 100;
pub const LEMMA_BOUND: u64 = 20;
pub const TWO_VERTEX_MAX_N: usize = 10;
/// Largest `max_n` the battery accepts.
pub const MAX_REPORT_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Battery {
    pub max_n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

fn check(name: &str, ok: bool, detail: Value) -> Check {
    Check {
        name: name.to_string(),
        verdict: Verdict::from_bool(ok),
        detail,
    }
}

fn enumeration_check(max_n: usize, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 3..=max_n {
        let catalog = enumerate_strata_with(n, exec)?;
        let f = catalog.f_vector();
        let maximal = *f.last().expect("non-empty") as u128;
        let rays = f.get(1).copied().unwrap_or(0);
        let expected_rays = if n >= 4 {
            (1usize << (n - 1)) - n - 1
        } else {
            0
        };
        let mut row_ok = maximal == count_maximal(n)? && rays == expected_rays;
        if n <= 6 {
            let cliques = enumerate_by_split_sets(n)?;
            row_ok &= cliques
                .iter()
                .all(|(m, list)| list.as_slice() == catalog.dimension(*m));
        }
        ok &= row_ok;
        rows.push(json!({ "n": n, "f_vector": f, "maximal": maximal, "rays": rays, "ok": row_ok }));
    }
    Ok(check("enumeration_counts", ok, Value::Array(rows)))
}

fn complex_check(max_n: usize, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 3..=max_n.min(6) {
        let cx = build_complex_with(n, exec)?;
        let flag = cx.verify_flag_property();
        ok &= flag.is_ok();
        rows.push(json!({
            "n": n,
            "cells": cx.num_cells(),
            "compat_edges": cx.num_compat_edges(),
            "flag_property": flag.is_ok(),
        }));
    }
    Ok(check("flag_property", ok, Value::Array(rows)))
}

fn formula_check(max_n: usize, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 3..=max_n {
        let cx = build_complex_with(n, exec)?;
        let star = n <= 6;
        let results = exec::map_range(exec, cx.num_cells(), |c| -> Result<bool> {
            let t = tree_from_canonical(cx.cell(c));
            let f = expansion_count_formula(&t)?;
            let mut good = f == expansions(&t).len().into();
            if star {
                good &= f == cx.star_count(c)?.into();
            }
            Ok(good)
        });
        let mismatches = results
            .into_iter()
            .collect::<Result<Vec<bool>>>()?
            .iter()
            .filter(|&&g| !g)
            .count();
        ok &= mismatches == 0;
        rows.push(json!({ "n": n, "strata": cx.num_cells(), "star_count_compared": star, "mismatches": mismatches }));
    }
    Ok(check("formula_vs_oracle", ok, Value::Array(rows)))
}

fn rigidity_check(max_n: usize, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 3..=max_n {
        let catalog = enumerate_strata_with(n, exec)?;
        let forms: Vec<_> = catalog.iter().cloned().collect();
        let nontrivial = exec::map(exec, &forms, |cf| {
            let auts = automorphisms_of_tree(&tree_from_canonical(cf));
            auts.len() != 1
        })
        .into_iter()
        .filter(|&b| b)
        .count();
        ok &= nontrivial == 0;
        rows.push(json!({ "n": n, "strata": forms.len(), "nontrivial": nontrivial }));
    }
    Ok(check("tree_rigidity", ok, Value::Array(rows)))
}

fn theorem_check(max_n: usize, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 4..=max_n {
        let r = verify_main_theorem_with(n, exec)?;
        ok &= r.verdict.is_pass();
        rows.push(serde_json::to_value(&r).expect("serializable"));
    }
    Ok(check("automorphism_orders", ok, Value::Array(rows)))
}

fn reconstruction_check(max_n: usize, seed: u64, exec: Execution) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 5..=max_n {
        let cx = build_complex_with(n, exec)?;
        let group = aut_via_compat_graph_with(&cx, exec);
        let chain = group.stabilizer_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        let mut elements: Vec<_> = group.generators().to_vec();
        let generators = elements.len();
        elements.extend((0..RANDOM_ELEMENTS).map(|_| chain.random_element(&mut rng)));
        let outcomes = exec::map(exec, &elements, |g| {
            ComplexAutomorphism::from_rays(&cx, g.clone())
                .ok()
                .and_then(|f| {
                    let sigma = reconstruct_sigma(&cx, &f).ok()?;
                    (sn_action(&cx, &sigma).ok()? == f).then_some(f)
                })
        });
        let round_trips = outcomes.iter().filter(|o| o.is_some()).count();
        let mut cup_pairs = 0;
        let mut cup_ok = true;
        for f in outcomes.iter().take(generators).flatten() {
            match check_cup_containment(&cx, f) {
                Ok(k) => cup_pairs += k,
                Err(_) => cup_ok = false,
            }
        }
        let row_ok = round_trips == elements.len() && cup_ok;
        ok &= row_ok;
        rows.push(json!({
            "n": n,
            "generators": generators,
            "random_elements": RANDOM_ELEMENTS,
            "round_trips": round_trips,
            "cup_pairs_checked": cup_pairs,
            "ok": row_ok,
        }));
    }
    Ok(check("sigma_reconstruction", ok, Value::Array(rows)))
}

fn lemma_check(exec: Execution) -> Result<Check> {
    let sweep = lemma_sweep(LEMMA_BOUND, exec)?;
    let two = two_vertex_consequence(TWO_VERTEX_MAX_N)?;
    Ok(check(
        "power_of_two_lemma",
        sweep.counterexamples.is_empty() && two.violations.is_empty(),
        json!({ "sweep": sweep, "two_vertex": two }),
    ))
}

fn klein_check() -> Result<Check> {
    let kernel: Vec<String> = klein_kernel()?.iter().map(|p| p.cycle_string()).collect();
    let expected = ["()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"];
    Ok(check(
        "klein_kernel",
        kernel == expected,
        json!({ "kernel": kernel }),
    ))
}

fn genus2_check() -> Result<Check> {
    let cx = build_m2_complex()?;
    let equivariance = cx.check_face_equivariance()?;
    let r = aut_m2(&cx);
    let ok = r.aut_order == 1
        && r.gamma1_edge_group_order == 6
        && r.swap_witness.contains("Γ3")
        && r.swap_witness.contains("Γ4");
    let mut detail = serde_json::to_value(&r).expect("serializable");
    detail["equivariance_checks"] = json!(equivariance);
    Ok(check("genus2_trivial_aut", ok, detail))
}

/// Runs every check for `4 ≤ n ≤ max_n`. The payload depends only on
/// `max_n` and `seed`.
pub fn run_battery(max_n: usize, seed: u64, exec: Execution) -> Result<Battery> {
    if max_n > MAX_REPORT_N {
        return Err(Error::Envelope {
            n: max_n,
            max: MAX_REPORT_N,
        });
    }
    if max_n < 4 {
        return Err(Error::Unsupported(format!(
            "the battery needs max_n >= 4, got {max_n}"
        )));
    }
    let checks = vec![
        enumeration_check(max_n, exec)?,
        complex_check(max_n, exec)?,
        formula_check(max_n, exec)?,
        rigidity_check(max_n, exec)?,
        theorem_check(max_n, exec)?,
        reconstruction_check(max_n, seed, exec)?,
        lemma_check(exec)?,
        klein_check()?,
        genus2_check()?,
    ];
    let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
    Ok(Battery {
        max_n,
        seed,
        checks,
        verdict,
    })
}
