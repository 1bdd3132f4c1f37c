use anyhow::{Context, Result};
use serde_json::{json, Value};
use trop_moduli::automorphism::{
    aut_via_compat_graph, aut_via_poset, verify_main_theorem, MAX_POSET_N,
};
use trop_moduli::complex::build_complex;
use trop_moduli::counting::{expansion_count_formula, lemma_sweep, two_vertex_consequence};
use trop_moduli::enumeration::{enumerate_strata, expansions};
use trop_moduli::genus2::{aut_m2, build_m2_complex};
use trop_moduli::perm::Permutation;
use trop_moduli::report::{run_battery, TWO_VERTEX_MAX_N};
use trop_moduli::tree::tree_from_canonical;
use trop_moduli::{Error, Execution, Verdict};

use crate::{
    AutArgs, Command, ComplexArgs, CountArgs, CountCheck, DotKind, EnumerateArgs, Format,
    Genus2Args, Method, Output, ReportArgs,
};

pub fn run(command: &Command, seed: u64) -> (&'static str, Value, Result<Output>) {
    match command {
        Command::Enumerate(a) => (
            "enumerate",
            json!({ "n": a.n, "dim": a.dim, "format": format!("{:?}", a.format).to_lowercase() }),
            enumerate(a),
        ),
        Command::Complex(a) => (
            "complex",
            json!({ "n": a.n, "dot": a.dot.map(|d| format!("{d:?}").to_lowercase()) }),
            complex(a),
        ),
        Command::Aut(a) => (
            "aut",
            json!({ "n": a.n, "method": format!("{:?}", a.method).to_lowercase() }),
            aut(a),
        ),
        Command::Count(a) => (
            "count",
            json!({ "n": a.n, "check": format!("{:?}", a.check).to_lowercase(), "bound": a.bound }),
            count(a),
        ),
        Command::Genus2(a) => ("genus2", json!({ "verify": a.verify }), genus2(a)),
        Command::Report(a) => (
            "report",
            json!({ "max_n": a.max_n, "seed": seed }),
            report(a, seed),
        ),
    }
}

fn na(payload: Value) -> Result<Output> {
    Ok(Output::Report {
        verdict: Verdict::NotApplicable,
        payload,
    })
}

fn enumerate(a: &EnumerateArgs) -> Result<Output> {
    let catalog = enumerate_strata(a.n)?;
    let dims: Vec<usize> = match a.dim {
        Some(d) if d > catalog.max_dimension() => {
            return Err(Error::Unsupported(format!(
                "no strata of dimension {d}; the maximum for n = {} is {}",
                a.n,
                catalog.max_dimension()
            ))
            .into())
        }
        Some(d) => vec![d],
        None => (0..=catalog.max_dimension()).collect(),
    };
    match a.format {
        Format::Json => {
            let strata: serde_json::Map<String, Value> = dims
                .iter()
                .map(|&d| {
                    (
                        d.to_string(),
                        serde_json::to_value(catalog.dimension(d)).expect("serializable"),
                    )
                })
                .collect();
            na(json!({ "n": a.n, "f_vector": catalog.f_vector(), "strata": strata }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["dimension", "index", "splits"])?;
            for &d in &dims {
                for (i, cf) in catalog.dimension(d).iter().enumerate() {
                    w.write_record([d.to_string(), i.to_string(), cf.to_string()])?;
                }
            }
            let bytes = w.into_inner().context("flushing CSV")?;
            Ok(Output::Text(String::from_utf8(bytes)?))
        }
    }
}

fn complex(a: &ComplexArgs) -> Result<Output> {
    let cx = build_complex(a.n)?;
    match a.dot {
        Some(DotKind::Hasse) => Ok(Output::Text(cx.hasse_dot())),
        Some(DotKind::Compat) => Ok(Output::Text(cx.compat_dot())),
        None => na(cx.to_json()),
    }
}

fn expected_order(n: usize) -> u64 {
    match n {
        3 => 1,
        4 => 6,
        _ => (1..=n as u64).product(),
    }
}

fn aut(a: &AutArgs) -> Result<Output> {
    let n = a.n;
    if a.method == Method::Both && (4..=7).contains(&n) {
        let r = verify_main_theorem(n)?;
        return Ok(Output::Report {
            verdict: r.verdict,
            payload: serde_json::to_value(&r)?,
        });
    }
    let cx = build_complex(n)?;
    let expected = expected_order(n);
    let mut payload = json!({ "n": n, "expected": expected });
    let mut ok = true;
    if a.method != Method::Poset {
        let group = aut_via_compat_graph(&cx);
        let order = group.order() as u64;
        ok &= order == expected;
        payload["order"] = json!(order);
        payload["generators"] = json!(group
            .generators()
            .iter()
            .map(Permutation::cycle_string)
            .collect::<Vec<_>>());
    }
    if a.method == Method::Poset || (a.method == Method::Both && n <= MAX_POSET_N) {
        let poset = aut_via_poset(&cx)?;
        let order = poset.group.order() as u64;
        ok &= order == expected;
        payload["poset_order"] = json!(order);
        if a.method == Method::Both {
            let agree = poset.group.same_group(&aut_via_compat_graph(&cx));
            ok &= agree;
            payload["method_agreement"] = json!(agree);
        } else {
            payload["order"] = json!(order);
        }
    }
    let verdict = Verdict::from_bool(ok);
    payload["verdict"] = json!(verdict);
    Ok(Output::Report { verdict, payload })
}

fn count(a: &CountArgs) -> Result<Output> {
    match a.check {
        CountCheck::Formula => {
            let n = a.n.context("--n is required for the formula check")?;
            let cx = build_complex(n)?;
            let with_star = n <= 6;
            let mut expansion_mismatches = 0;
            let mut star_mismatches = 0;
            let mut totals = vec![0u64; cx.max_dimension() + 1];
            for c in 0..cx.num_cells() {
                let t = tree_from_canonical(cx.cell(c));
                let f = expansion_count_formula(&t)?;
                let f_small = u64::try_from(&f).context("count exceeds 64 bits")?;
                totals[cx.dim(c)] += f_small;
                if f_small != expansions(&t).len() as u64 {
                    expansion_mismatches += 1;
                }
                if with_star && f_small != cx.star_count(c)? as u64 {
                    star_mismatches += 1;
                }
            }
            let ok = expansion_mismatches == 0 && star_mismatches == 0;
            Ok(Output::Report {
                verdict: Verdict::from_bool(ok),
                payload: json!({
                    "n": n,
                    "strata": cx.num_cells(),
                    "expansion_mismatches": expansion_mismatches,
                    "star_count_compared": with_star,
                    "star_mismatches": if with_star { json!(star_mismatches) } else { Value::Null },
                    "formula_total_by_dimension": totals,
                }),
            })
        }
        CountCheck::Lemma => {
            let sweep = lemma_sweep(a.bound, Execution::default())?;
            let two = two_vertex_consequence(TWO_VERTEX_MAX_N)?;
            let ok = sweep.counterexamples.is_empty() && two.violations.is_empty();
            Ok(Output::Report {
                verdict: Verdict::from_bool(ok),
                payload: json!({ "sweep": sweep, "two_vertex": two }),
            })
        }
    }
}

fn genus2(a: &Genus2Args) -> Result<Output> {
    let cx = build_m2_complex()?;
    let cells: Vec<Value> = cx
        .cells()
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "dim": c.dim(),
                "weights": c.graph.weights(),
                "edges": c.graph.edges(),
                "edge_labels": c.edge_labels,
                "edge_group_order": c.edge_group.len(),
            })
        })
        .collect();
    let arrows: Vec<[&str; 2]> = cx
        .arrows()
        .into_iter()
        .map(|(s, t)| [cx.cell(s).name, cx.cell(t).name])
        .collect();
    if !a.verify {
        return na(json!({ "cells": cells, "arrows": arrows, "f_vector": cx.f_vector() }));
    }
    let equivariance = cx.check_face_equivariance()?;
    let r = aut_m2(&cx);
    let verdict = Verdict::from_bool(r.aut_order == 1 && r.gamma1_edge_group_order == 6);
    Ok(Output::Report {
        verdict,
        payload: json!({
            "cells": r.cells,
            "aut_order": r.aut_order,
            "verdict": verdict,
            "search": r,
            "equivariance_checks": equivariance,
            "arrows": arrows,
        }),
    })
}

fn report(a: &ReportArgs, seed: u64) -> Result<Output> {
    eprintln!("running the verification battery for n <= {}", a.max_n);
    let battery = run_battery(a.max_n, seed, Execution::default())?;
    for c in &battery.checks {
        eprintln!("  {:<22} {}", c.name, c.verdict);
    }
    Ok(Output::Report {
        verdict: battery.verdict,
        payload: serde_json::to_value(&battery)?,
    })
}
