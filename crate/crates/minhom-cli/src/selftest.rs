//! Embedded verification suite behind `minhom selftest`: a deterministic
//! catalog pass plus seeded randomized cross-checks of the solver against
//! the exhaustive oracle and of the gadget formulas.

use minhom::graph::{self, Graph};
use minhom::intervals::{intervals_to_ordering, ordering_to_intervals, verify_representation};
use minhom::oracle::{brute_force_alpha, brute_force_mch};
use minhom::recognition::{
    bipartite_claw, bipartite_net, bipartite_tent, classify, find_ordering, verify_ordering,
    Classification,
};
use minhom::reductions::{gadget_build, loop_nonloop_reduction, recover_alpha, GadgetKind};
use minhom::solver::{solve, validate_homomorphism, SolveResult};
use minhom::synth::{random_costs, random_graph, random_polynomial_target, Rng};

macro_rules! check {
    ($count:expr, $cond:expr, $($msg:tt)*) => {
        if $cond {
            $count += 1;
        } else {
            return Err(format!($($msg)*));
        }
    };
}

pub fn run(seed: u64) -> Result<serde_json::Value, String> {
    let mut checks = 0usize;

    // Dichotomy spot catalog.
    for (name, h, expect_poly) in [
        ("reflexive P5", graph::reflexive_closure(&graph::path(5)), true),
        ("C4", graph::cycle(4), true),
        ("K2,3", graph::complete_bipartite(2, 3), true),
        ("bipartite claw", bipartite_claw(), false),
        ("bipartite net", bipartite_net(), false),
        ("bipartite tent", bipartite_tent(), false),
        ("C6", graph::cycle(6), false),
        ("irreflexive K3", graph::complete(3), false),
        (
            "mixed loop edge",
            Graph::new(
                vec!["r".into(), "s".into()],
                vec![("r".into(), "s".into())],
                vec!["r".into()],
            )
            .unwrap(),
            false,
        ),
    ] {
        let classification = classify(&h).map_err(|e| format!("{name}: {e}"))?;
        match classification {
            Classification::Poly { ref orderings } => {
                check!(checks, expect_poly, "{name}: expected a hard target");
                for (comp, ord) in h.connected_components().iter().zip(orderings) {
                    check!(
                        checks,
                        verify_ordering(comp, ord).unwrap_or(false),
                        "{name}: ordering fails verification"
                    );
                }
            }
            Classification::Npc { ref certificate } => {
                check!(checks, !expect_poly, "{name}: expected a polynomial target");
                check!(
                    checks,
                    certificate.check(&h),
                    "{name}: certificate fails its re-check"
                );
            }
        }
    }

    // Interval round trips.
    for h in [
        graph::reflexive_closure(&graph::path(5)),
        graph::cycle(4),
        graph::path(6),
    ] {
        let Ok(Classification::Poly { orderings }) = classify(&h) else {
            return Err("round-trip target should classify as polynomial".into());
        };
        for (comp, ord) in h.connected_components().iter().zip(&orderings) {
            let rep = ordering_to_intervals(comp, ord).map_err(|e| e.to_string())?;
            check!(
                checks,
                verify_representation(comp, &rep),
                "interval representation fails verification"
            );
            let back = intervals_to_ordering(comp, &rep).map_err(|e| e.to_string())?;
            check!(
                checks,
                verify_ordering(comp, &back).unwrap_or(false),
                "recovered ordering fails verification"
            );
        }
    }

    // Double equivalence on every connected graph with up to 4 vertices.
    for n in 1..=4usize {
        let bits = n * (n - 1) / 2;
        'mask: for mask in 0u64..(1 << bits) {
            let names: Vec<String> = (0..n)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect();
            let mut edges = Vec::new();
            let mut bit = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if mask & (1 << bit) != 0 {
                        edges.push((names[i].clone(), names[j].clone()));
                    }
                    bit += 1;
                }
            }
            let g = Graph::new(names.clone(), edges, names).unwrap();
            if !g.is_connected() {
                continue 'mask;
            }
            let direct = find_ordering(&g).map_err(|e| e.to_string())?.is_some();
            let double = g.bipartite_double().map_err(|e| e.to_string())?;
            let doubled = find_ordering(&double).map_err(|e| e.to_string())?.is_some();
            check!(
                checks,
                direct == doubled,
                "double equivalence fails on mask {mask} (n={n})"
            );
        }
    }

    // Seeded solver-vs-oracle comparison.
    let mut rng = Rng::new(seed);
    for k in 0..40 {
        let h = random_polynomial_target(&mut rng, 5, k % 2 == 0);
        let n_g = 1 + rng.below(6) as usize;
        let edge_percent = 10 + rng.below(55);
        let loop_percent = if k % 4 == 3 { 25 } else { 0 };
        let g = random_graph(&mut rng, n_g, edge_percent, loop_percent);
        let costs = random_costs(&mut rng, &g, &h, 10, 5);
        let got = solve(&g, &costs, &h).map_err(|e| e.to_string())?;
        let want = brute_force_mch(&g, &costs, &h).map_err(|e| e.to_string())?;
        match (&got, &want) {
            (
                SolveResult::Optimal { cost, assignment },
                SolveResult::Optimal { cost: expected, .. },
            ) => {
                check!(checks, cost == expected, "case {k}: cost mismatch");
                check!(
                    checks,
                    validate_homomorphism(&g, &h, assignment).is_ok(),
                    "case {k}: invalid mapping"
                );
            }
            (SolveResult::NoHomomorphism, SolveResult::NoHomomorphism) => checks += 1,
            other => return Err(format!("case {k}: solver/oracle disagree: {other:?}")),
        }
    }

    // Seeded gadget formula checks, two per kind.
    for kind in [GadgetKind::Claw, GadgetKind::Net, GadgetKind::Tent] {
        let mut done = 0;
        while done < 2 {
            let sizes = [
                rng.below(3) as usize,
                rng.below(3) as usize,
                rng.below(2) as usize,
            ];
            if sizes.iter().sum::<usize>() == 0 {
                continue;
            }
            let g3 = minhom::synth::random_three_partite(&mut rng, sizes, 40);
            let inst = gadget_build(&g3, kind).map_err(|e| e.to_string())?;
            if inst.source.n() > 20 {
                continue;
            }
            let SolveResult::Optimal { cost, .. } =
                brute_force_mch(&inst.source, &inst.costs, &inst.target)
                    .map_err(|e| e.to_string())?
            else {
                return Err("gadget instance should be solvable".into());
            };
            let alpha = brute_force_alpha(g3.graph()).map_err(|e| e.to_string())?;
            check!(
                checks,
                recover_alpha(&inst, cost) == Ok(alpha),
                "{kind:?}: formula violated"
            );
            done += 1;
        }
    }

    // Loop/non-loop reduction formula.
    let mixed = Graph::new(
        vec!["r".into(), "s".into()],
        vec![("r".into(), "s".into())],
        vec!["r".into()],
    )
    .unwrap();
    for _ in 0..5 {
        let n = 2 + rng.below(6) as usize;
        let edge_percent = 20 + rng.below(50);
        let g = random_graph(&mut rng, n, edge_percent, 0);
        let inst = loop_nonloop_reduction(&g, &mixed, ("r", "s")).map_err(|e| e.to_string())?;
        let SolveResult::Optimal { cost, .. } =
            brute_force_mch(&inst.source, &inst.costs, &inst.target).map_err(|e| e.to_string())?
        else {
            return Err("loop/non-loop instance should be solvable".into());
        };
        let alpha = brute_force_alpha(&g).map_err(|e| e.to_string())?;
        check!(
            checks,
            recover_alpha(&inst, cost) == Ok(alpha),
            "loop/non-loop formula violated"
        );
    }

    Ok(serde_json::json!({
        "status": "ok",
        "checks": checks,
        "seed": seed,
    }))
}
