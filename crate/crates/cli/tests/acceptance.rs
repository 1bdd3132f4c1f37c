//! Acceptance suite: one PASS/FAIL line per criterion, then a single assert.
//!
//! Run with `cargo test -p trop-moduli-cli --test acceptance -- --nocapture`
//! to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use trop_moduli::automorphism::{
    aut_via_compat_graph, aut_via_poset, klein_kernel, reconstruct_sigma, sn_action,
    ComplexAutomorphism,
};
use trop_moduli::complex::build_complex;
use trop_moduli::counting::{expansion_count_formula, lemma_sweep};
use trop_moduli::enumeration::{enumerate_strata, expansions};
use trop_moduli::genus2::{aut_m2, build_m2_complex};
use trop_moduli::group::PermutationGroup;
use trop_moduli::perm::all_permutations;
use trop_moduli::report::DEFAULT_SEED;
use trop_moduli::tree::{automorphisms_of_tree, tree_from_canonical};
use trop_moduli::Execution;

/// Wall-clock budget for the graph method over 4 ≤ n ≤ 7.
const THEOREM_BUDGET: Duration = Duration::from_secs(60);
/// Wall-clock budget for the lemma sweep.
const LEMMA_BUDGET: Duration = Duration::from_secs(10);
const LEMMA_BOUND: u64 = 20;
const RANDOM_ELEMENTS: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn theorem_orders() -> Outcome {
    let start = Instant::now();
    let mut orders = Vec::new();
    let mut graph_groups = Vec::new();
    for n in 4..=7 {
        let cx = build_complex(n).map_err(|e| e.to_string())?;
        let g = aut_via_compat_graph(&cx);
        orders.push(g.order());
        graph_groups.push((cx, g));
    }
    let elapsed = start.elapsed();
    let mut agree = true;
    for (cx, g) in graph_groups.iter().filter(|(cx, _)| cx.n() <= 6) {
        let poset = aut_via_poset(cx).map_err(|e| e.to_string())?;
        agree &= poset.group.same_group(g);
    }
    ensure(
        orders == [6, 120, 720, 5040] && elapsed < THEOREM_BUDGET && agree,
        format!("orders {orders:?}, graph method {elapsed:.2?} (budget {THEOREM_BUDGET:?}), poset agreement {agree}"),
    )
}

fn surjectivity() -> Outcome {
    let mut notes = Vec::new();
    for n in [5, 6] {
        let cx = build_complex(n).map_err(|e| e.to_string())?;
        let group = aut_via_compat_graph(&cx);
        let chain = group.stabilizer_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED + n as u64);
        let mut elements = group.generators().to_vec();
        elements.extend((0..RANDOM_ELEMENTS).map(|_| chain.random_element(&mut rng)));
        let mut good = 0;
        for g in &elements {
            let f = ComplexAutomorphism::from_rays(&cx, g.clone()).map_err(|e| e.to_string())?;
            if let Ok(sigma) = reconstruct_sigma(&cx, &f) {
                if sn_action(&cx, &sigma).map_err(|e| e.to_string())? == f {
                    good += 1;
                }
            }
        }
        if good != elements.len() {
            return Err(format!("n={n}: {good}/{} round trips", elements.len()));
        }
        notes.push(format!("n={n}: {good}/{}", elements.len()));
    }
    let cx = build_complex(4).map_err(|e| e.to_string())?;
    let images = all_permutations(4)
        .iter()
        .map(|s| sn_action(&cx, s).map(|f| f.rays().clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let image = PermutationGroup::new(cx.num_rays(), images).map_err(|e| e.to_string())?;
    let onto = image.same_group(&aut_via_compat_graph(&cx));
    notes.push(format!("n=4: S_4 onto Aut {onto}"));
    ensure(onto, notes.join(", "))
}

fn counting_formula() -> Outcome {
    let mut strata = 0;
    let mut mismatches = 0;
    for n in 3..=7 {
        let cx = build_complex(n).map_err(|e| e.to_string())?;
        for c in 0..cx.num_cells() {
            let t = tree_from_canonical(cx.cell(c));
            let f = expansion_count_formula(&t).map_err(|e| e.to_string())?;
            strata += 1;
            if f != expansions(&t).len().into() {
                mismatches += 1;
            }
            if n <= 6 && f != cx.star_count(c).map_err(|e| e.to_string())?.into() {
                mismatches += 1;
            }
        }
    }
    ensure(
        mismatches == 0,
        format!("{strata} strata, {mismatches} mismatches"),
    )
}

fn enumeration_counts() -> Outcome {
    let mut maximal = Vec::new();
    let mut rays = Vec::new();
    for n in 4..=8 {
        let f = enumerate_strata(n).map_err(|e| e.to_string())?.f_vector();
        maximal.push(*f.last().unwrap());
        rays.push(f[1]);
    }
    ensure(
        maximal == [3, 15, 105, 945, 10395] && rays == [3, 10, 25, 56, 119],
        format!("maximal {maximal:?}, rays {rays:?}"),
    )
}

fn rigidity() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    for n in 3..=7 {
        for cf in enumerate_strata(n).map_err(|e| e.to_string())?.iter() {
            checked += 1;
            let auts = automorphisms_of_tree(&tree_from_canonical(cf));
            if auts.len() != 1 || !auts[0].edge_map.iter().enumerate().all(|(i, &j)| i == j) {
                bad += 1;
            }
        }
    }
    ensure(
        bad == 0,
        format!("{checked} stable trees, {bad} with nontrivial automorphisms"),
    )
}

fn lemma() -> Outcome {
    let start = Instant::now();
    let sweep = lemma_sweep(LEMMA_BOUND, Execution::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        sweep.counterexamples.is_empty() && elapsed < LEMMA_BUDGET,
        format!(
            "bound {LEMMA_BOUND}: {} pairs, {} counterexamples, {elapsed:.2?} (budget {LEMMA_BUDGET:?})",
            sweep.pairs_checked,
            sweep.counterexamples.len()
        ),
    )
}

fn genus2() -> Outcome {
    let cx = build_m2_complex().map_err(|e| e.to_string())?;
    let r = aut_m2(&cx);
    let witness = r.swap_witness.contains("Γ3") && r.swap_witness.contains("Γ4");
    ensure(
        r.cells == 7 && r.aut_order == 1 && witness && r.gamma1_edge_group_order == 6,
        format!(
            "{} cells, Aut order {}, Aut(Γ1) on edges {}, swap rejected: {}",
            r.cells, r.aut_order, r.gamma1_edge_group_order, r.swap_witness
        ),
    )
}

fn klein() -> Outcome {
    let kernel: Vec<String> = klein_kernel()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| p.cycle_string())
        .collect();
    ensure(
        kernel == ["()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"],
        format!("kernel {kernel:?}"),
    )
}

fn report_runs() -> Outcome {
    let run = || -> Result<(i32, Value), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_trop-moduli"))
            .args(["report", "--max-n", "6"])
            .output()
            .map_err(|e| e.to_string())?;
        let json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        Ok((out.status.code().unwrap_or(-1), json))
    };
    let (code_a, a) = run()?;
    let (code_b, b) = run()?;
    let checks = a["payload"]["checks"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    let all_pass = !checks.is_empty()
        && checks.iter().all(|c| c["verdict"] == "PASS")
        && a["verdict"] == "PASS";
    let identical = a["payload"] == b["payload"];
    ensure(
        code_a == 0 && code_b == 0 && all_pass && identical,
        format!(
            "exit codes {code_a}/{code_b}, {} checks all PASS: {all_pass}, payloads identical: {identical}",
            checks.len()
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("automorphism group orders", theorem_orders),
        ("surjectivity of the marking action", surjectivity),
        ("expansion-count formula", counting_formula),
        ("enumeration counts", enumeration_counts),
        ("rigidity of stable trees", rigidity),
        ("power-of-two lemma sweep", lemma),
        ("genus-2 complex", genus2),
        ("kernel at n = 4", klein),
        ("headless report", report_runs),
    ];
    let mut failures = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} {} {name}: {msg}", i + 1);
        if tag == "FAIL" {
            failures.push(i + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
