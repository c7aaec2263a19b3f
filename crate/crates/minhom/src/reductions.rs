//! Hardness gadget generators: instances whose optimal homomorphism cost
//! encodes the maximum independent set of a 3-partite graph through an
//! affine formula, plus the loop/non-loop reduction for mixed targets.
//!
//! Each builder materializes one reduction exactly — graph surgery, cost
//! table, and the offset making `alpha = offset - mch` — so the formulas can
//! be validated against the exhaustive oracles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::recognition::{bipartite_claw, bipartite_net, bipartite_tent};
use crate::solver::{Cost, CostTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid 3-partition: {0}")]
    InvalidPartition(String),
    #[error("`{looped}`-`{unlooped}` is not a mixed edge of the target")]
    NotMixedEdge { looped: String, unlooped: String },
    #[error("source graph must be irreflexive (vertex `{0}` has a loop)")]
    SourceHasLoop(String),
    #[error("generated vertex name `{0}` collides with an existing name")]
    NameCollision(String),
    #[error("claimed optimum {mch} exceeds the offset {offset}")]
    NegativeResult { offset: u64, mch: u64 },
}

/// Irreflexive graph with three independent parts covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartiteGraph {
    graph: Graph,
    parts: [Vec<String>; 3],
}

impl ThreePartiteGraph {
    pub fn new(graph: Graph, parts: [Vec<String>; 3]) -> Result<Self, ReductionError> {
        if let Some(v) = graph.loop_names().first() {
            return Err(ReductionError::InvalidPartition(format!(
                "vertex `{v}` has a loop"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for part in &parts {
            for v in part {
                if graph.index_of(v).is_none() {
                    return Err(ReductionError::InvalidPartition(format!(
                        "part names unknown vertex `{v}`"
                    )));
                }
                if !seen.insert(v.clone()) {
                    return Err(ReductionError::InvalidPartition(format!(
                        "vertex `{v}` appears in two parts"
                    )));
                }
            }
        }
        if seen.len() != graph.n() {
            return Err(ReductionError::InvalidPartition(
                "parts do not cover the vertex set".into(),
            ));
        }
        for (k, part) in parts.iter().enumerate() {
            for a in part {
                for b in part {
                    if a < b && graph.has_edge_named(a, b) {
                        return Err(ReductionError::InvalidPartition(format!(
                            "part {} is not independent: edge `{a}`-`{b}`",
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(ThreePartiteGraph { graph, parts })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn parts(&self) -> &[Vec<String>; 3] {
        &self.parts
    }

    fn part_of(&self, v: &str) -> usize {
        for (k, part) in self.parts.iter().enumerate() {
            if part.iter().any(|p| p == v) {
                return k;
            }
        }
        unreachable!("parts cover the vertex set")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    Claw,
    Net,
    Tent,
    LoopNonLoop,
}

/// A generated hardness instance together with its formula offset:
/// `alpha(G) = offset - mch(G*, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub source: Graph,
    pub target: Graph,
    pub costs: CostTable,
    pub offset: u64,
}

/// Recover the independent set size from an exact optimum of the instance.
pub fn recover_alpha(inst: &GadgetInstance, mch_value: u64) -> Result<u64, ReductionError> {
    inst.offset
        .checked_sub(mch_value)
        .ok_or(ReductionError::NegativeResult {
            offset: inst.offset,
            mch: mch_value,
        })
}

fn subdivision_name(a: &str, b: &str) -> String {
    if a <= b {
        format!("m({a},{b})")
    } else {
        format!("m({b},{a})")
    }
}

fn check_fresh(
    taken: &mut std::collections::BTreeSet<String>,
    name: &str,
) -> Result<(), ReductionError> {
    if !taken.insert(name.to_owned()) {
        return Err(ReductionError::NameCollision(name.to_owned()));
    }
    Ok(())
}

/// Build the claw, net, or tent instance for a 3-partite source.
pub fn gadget_build(g3: &ThreePartiteGraph, kind: GadgetKind) -> Result<GadgetInstance, ReductionError> {
    match kind {
        GadgetKind::Claw => build_claw(g3),
        GadgetKind::Net => build_net(g3),
        GadgetKind::Tent => build_tent(g3),
        GadgetKind::LoopNonLoop => Err(ReductionError::InvalidPartition(
            "the loop/non-loop reduction takes a plain source graph".into(),
        )),
    }
}

/// Claw instance: subdivide every edge; originals pay 0 at their own part's
/// x-vertex, 1 at the hub, and `|V(G)|` anywhere else; subdivision vertices
/// ride the y-vertices for free.
fn build_claw(g3: &ThreePartiteGraph) -> Result<GadgetInstance, ReductionError> {
    let g = g3.graph();
    let n = g.n() as u64;
    let mut taken: std::collections::BTreeSet<String> = g.names().iter().cloned().collect();
    let mut vertices = g.names().to_vec();
    let mut edges = Vec::new();
    for (a, b) in g.edge_names() {
        let m = subdivision_name(&a, &b);
        check_fresh(&mut taken, &m)?;
        vertices.push(m.clone());
        edges.push((a.clone(), m.clone()));
        edges.push((m, b.clone()));
    }
    let gstar = Graph::new(vertices, edges, Vec::new()).expect("subdivided graph");
    let target = bipartite_claw();
    let costs = CostTable::build(&gstar, &target, |u, i| {
        let big = Cost::Finite(n);
        if g.index_of(u).is_some() {
            let part = g3.part_of(u);
            match i {
                "x1" | "x2" | "x3" => {
                    let xi = (i.as_bytes()[1] - b'1') as usize;
                    if xi == part {
                        Cost::Finite(0)
                    } else {
                        big
                    }
                }
                "x4" => Cost::Finite(1),
                _ => big, // y1..y3
            }
        } else {
            // Subdivision vertex.
            match i {
                "y1" | "y2" | "y3" => Cost::Finite(0),
                _ => big,
            }
        }
    })
    .expect("gadget costs fit comfortably");
    Ok(GadgetInstance {
        kind: GadgetKind::Claw,
        source: gstar,
        target,
        costs,
        offset: n,
    })
}

/// Net instance: keep the first two parts, subdivide the edges between
/// them, and replace each third-part vertex by a 4-edge path whose traversal
/// cost records the membership decision.
fn build_net(g3: &ThreePartiteGraph) -> Result<GadgetInstance, ReductionError> {
    let g = g3.graph();
    let [v1, v2, v3] = g3.parts();
    let n = g.n() as u64;
    let big_value = 2 * v3.len() as u64 + n;

    let mut taken: std::collections::BTreeSet<String> = g.names().iter().cloned().collect();
    let mut vertices: Vec<String> = v1.iter().chain(v2.iter()).cloned().collect();
    let mut edges = Vec::new();

    let path_names = |v: &str| {
        [
            format!("s1({v})"),
            format!("t1({v})"),
            format!("s2({v})"),
            format!("t2({v})"),
            format!("s3({v})"),
        ]
    };
    for v in v3 {
        let names = path_names(v);
        for name in &names {
            check_fresh(&mut taken, name)?;
            vertices.push(name.clone());
        }
        for pair in names.windows(2) {
            edges.push((pair[0].clone(), pair[1].clone()));
        }
    }
    for (a, b) in g.edge_names() {
        let (pa, pb) = (g3.part_of(&a), g3.part_of(&b));
        match (pa.min(pb), pa.max(pb)) {
            (0, 1) => {
                let m = subdivision_name(&a, &b);
                check_fresh(&mut taken, &m)?;
                vertices.push(m.clone());
                edges.push((a.clone(), m.clone()));
                edges.push((m, b.clone()));
            }
            (0, 2) => {
                let (u, v) = if pa == 0 { (&a, &b) } else { (&b, &a) };
                edges.push((u.clone(), format!("s1({v})")));
            }
            (1, 2) => {
                let (u, v) = if pa == 1 { (&a, &b) } else { (&b, &a) };
                edges.push((u.clone(), format!("s3({v})")));
            }
            _ => unreachable!("parts are independent"),
        }
    }
    let gstar = Graph::new(vertices, edges, Vec::new()).expect("net gadget graph");
    let target = bipartite_net();
    let costs = CostTable::build(&gstar, &target, |u, i| {
        let big = Cost::Finite(big_value);
        if g.index_of(u).is_some() {
            // Only V1 and V2 originals survive in the gadget.
            let part = g3.part_of(u);
            match i {
                "x1" if part == 0 => Cost::Finite(0),
                "x2" if part == 1 => Cost::Finite(0),
                "x4" => Cost::Finite(1),
                _ => big,
            }
        } else if u.starts_with("m(") {
            Cost::Finite(0)
        } else if u.starts_with('s') {
            if i == "y3" {
                Cost::Finite(0)
            } else {
                Cost::Finite(1)
            }
        } else {
            // t-vertices
            if i == "x4" {
                Cost::Finite(1)
            } else {
                Cost::Finite(0)
            }
        }
    })
    .expect("gadget costs fit comfortably");
    Ok(GadgetInstance {
        kind: GadgetKind::Net,
        source: gstar,
        target,
        costs,
        offset: big_value,
    })
}

/// Tent instance: subdivide only the edges between the first two parts and
/// keep every edge touching the third part.
fn build_tent(g3: &ThreePartiteGraph) -> Result<GadgetInstance, ReductionError> {
    let g = g3.graph();
    let n = g.n() as u64;
    let mut taken: std::collections::BTreeSet<String> = g.names().iter().cloned().collect();
    let mut vertices = g.names().to_vec();
    let mut edges = Vec::new();
    for (a, b) in g.edge_names() {
        let (pa, pb) = (g3.part_of(&a), g3.part_of(&b));
        if pa.min(pb) == 0 && pa.max(pb) == 1 {
            let m = subdivision_name(&a, &b);
            check_fresh(&mut taken, &m)?;
            vertices.push(m.clone());
            edges.push((a.clone(), m.clone()));
            edges.push((m, b.clone()));
        } else {
            edges.push((a, b)); // touches the third part, kept as is
        }
    }
    let gstar = Graph::new(vertices, edges, Vec::new()).expect("tent gadget graph");
    let target = bipartite_tent();
    let costs = CostTable::build(&gstar, &target, |u, i| {
        let big = Cost::Finite(n);
        if g.index_of(u).is_some() {
            match (g3.part_of(u), i) {
                (0, "y2") | (1, "y3") | (2, "x3") => Cost::Finite(0),
                (0, "y1") | (1, "y1") | (2, "x1") => Cost::Finite(1),
                _ => big,
            }
        } else {
            // Subdivision vertex: anywhere but x1 is free.
            if i == "x1" {
                big
            } else {
                Cost::Finite(0)
            }
        }
    })
    .expect("gadget costs fit comfortably");
    Ok(GadgetInstance {
        kind: GadgetKind::Tent,
        source: gstar,
        target,
        costs,
        offset: n,
    })
}

/// Reduction through a mixed edge `rs` of the target (loop at `r`, none at
/// `s`): with cost 0 at `s` and 1 everywhere else, the vertices mapped to
/// `s` form an independent set, so `mch = |V(G)| - alpha(G)`.
pub fn loop_nonloop_reduction(
    g: &Graph,
    h: &Graph,
    mixed_edge: (&str, &str),
) -> Result<GadgetInstance, ReductionError> {
    let (r, s) = mixed_edge;
    if let Some(v) = g.loop_names().first() {
        return Err(ReductionError::SourceHasLoop(v.clone()));
    }
    if !(h.has_edge_named(r, s) && h.has_loop_named(r) && !h.has_loop_named(s)) {
        return Err(ReductionError::NotMixedEdge {
            looped: r.to_owned(),
            unlooped: s.to_owned(),
        });
    }
    let costs = CostTable::build(g, h, |_, i| {
        if i == s {
            Cost::Finite(0)
        } else {
            Cost::Finite(1)
        }
    })
    .expect("unit costs fit comfortably");
    Ok(GadgetInstance {
        kind: GadgetKind::LoopNonLoop,
        source: g.clone(),
        target: h.clone(),
        costs,
        offset: g.n() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, Graph};
    use crate::oracle::{brute_force_alpha, brute_force_mch};
    use crate::solver::SolveResult;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn triangle_partite() -> ThreePartiteGraph {
        ThreePartiteGraph::new(
            complete(3),
            [names(&["a"]), names(&["b"]), names(&["c"])],
        )
        .unwrap()
    }

    fn oracle_mch(inst: &GadgetInstance) -> u64 {
        match brute_force_mch(&inst.source, &inst.costs, &inst.target).unwrap() {
            SolveResult::Optimal { cost, .. } => cost,
            other => panic!("gadget instance should be solvable, got {other:?}"),
        }
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(
            ThreePartiteGraph::new(complete(3), [names(&["a", "b"]), names(&["c"]), names(&[])]),
            Err(ReductionError::InvalidPartition(_))
        ));
        assert!(matches!(
            ThreePartiteGraph::new(complete(3), [names(&["a"]), names(&["b"]), names(&[])]),
            Err(ReductionError::InvalidPartition(_))
        ));
        assert!(matches!(
            ThreePartiteGraph::new(
                complete(3),
                [names(&["a", "a"]), names(&["b"]), names(&["c"])]
            ),
            Err(ReductionError::InvalidPartition(_))
        ));
    }

    #[test]
    fn claw_gadget_on_triangle() {
        let inst = gadget_build(&triangle_partite(), GadgetKind::Claw).unwrap();
        assert_eq!(inst.source.n(), 6); // 3 originals + 3 subdivision vertices
        assert_eq!(inst.source.edges().len(), 6);
        assert_eq!(inst.offset, 3);
        let mch = oracle_mch(&inst);
        assert_eq!(mch, 2);
        assert_eq!(recover_alpha(&inst, mch).unwrap(), 1);
        assert_eq!(brute_force_alpha(triangle_partite().graph()).unwrap(), 1);
    }

    #[test]
    fn net_gadget_on_single_edge() {
        let g = crate::graph::path(2);
        let g3 =
            ThreePartiteGraph::new(g, [names(&["a"]), names(&["b"]), names(&[])]).unwrap();
        let inst = gadget_build(&g3, GadgetKind::Net).unwrap();
        assert_eq!(inst.source.n(), 3); // a, b, m(a,b)
        assert_eq!(inst.offset, 2);
        let mch = oracle_mch(&inst);
        assert_eq!(mch, 1);
        assert_eq!(recover_alpha(&inst, mch).unwrap(), 1);
    }

    #[test]
    fn tent_gadget_on_empty_three_vertices() {
        let g = Graph::new(names(&["a", "b", "c"]), Vec::new(), Vec::new()).unwrap();
        let g3 =
            ThreePartiteGraph::new(g, [names(&["a"]), names(&["b"]), names(&["c"])]).unwrap();
        let inst = gadget_build(&g3, GadgetKind::Tent).unwrap();
        assert_eq!(inst.offset, 3);
        let mch = oracle_mch(&inst);
        assert_eq!(mch, 0);
        assert_eq!(recover_alpha(&inst, mch).unwrap(), 3);
    }

    #[test]
    fn net_gadget_with_third_part() {
        // Path a-b-c with c in the third part: exercises P_v attachment.
        let g = crate::graph::path(3);
        let g3 =
            ThreePartiteGraph::new(g.clone(), [names(&["a"]), names(&["b"]), names(&["c"])])
                .unwrap();
        let inst = gadget_build(&g3, GadgetKind::Net).unwrap();
        // a, b, m(a,b), and the 5-vertex path for c.
        assert_eq!(inst.source.n(), 8);
        assert_eq!(inst.offset, 2 + 3);
        let mch = oracle_mch(&inst);
        let alpha = brute_force_alpha(&g).unwrap();
        assert_eq!(recover_alpha(&inst, mch).unwrap(), alpha);
    }

    #[test]
    fn tent_gadget_keeps_third_part_edges() {
        let g = crate::graph::path(3); // a-b, b-c
        let g3 =
            ThreePartiteGraph::new(g.clone(), [names(&["a"]), names(&["b"]), names(&["c"])])
                .unwrap();
        let inst = gadget_build(&g3, GadgetKind::Tent).unwrap();
        // a-b subdivided; b-c kept.
        assert_eq!(inst.source.n(), 4);
        assert!(inst.source.has_edge_named("b", "c"));
        assert!(!inst.source.has_edge_named("a", "b"));
        let mch = oracle_mch(&inst);
        assert_eq!(
            recover_alpha(&inst, mch).unwrap(),
            brute_force_alpha(&g).unwrap()
        );
    }

    #[test]
    fn claw_witness_recovery() {
        // The zero-cost originals of an optimal mapping form an independent
        // set witnessing alpha.
        let g = cycle(5);
        let g3 = ThreePartiteGraph::new(
            g.clone(),
            [names(&["a", "c"]), names(&["b", "d"]), names(&["e"])],
        )
        .unwrap();
        let inst = gadget_build(&g3, GadgetKind::Claw).unwrap();
        let SolveResult::Optimal { cost, assignment } =
            brute_force_mch(&inst.source, &inst.costs, &inst.target).unwrap()
        else {
            panic!("solvable");
        };
        let alpha = brute_force_alpha(&g).unwrap();
        assert_eq!(recover_alpha(&inst, cost).unwrap(), alpha);
        let independent: Vec<&String> = g
            .names()
            .iter()
            .filter(|u| {
                let zero_image = format!("x{}", g3.part_of(u) + 1);
                assignment.0[*u] == zero_image
            })
            .collect();
        assert!(independent.len() as u64 >= inst.offset - cost);
        for a in &independent {
            for b in &independent {
                assert!(!g.has_edge_named(a, b));
            }
        }
    }

    #[test]
    fn formulas_hold_on_small_catalog() {
        let cases: Vec<ThreePartiteGraph> = vec![
            triangle_partite(),
            ThreePartiteGraph::new(
                cycle(4),
                [names(&["a", "c"]), names(&["b", "d"]), names(&[])],
            )
            .unwrap(),
            ThreePartiteGraph::new(
                crate::graph::path(5),
                [names(&["a", "c", "e"]), names(&["b", "d"]), names(&[])],
            )
            .unwrap(),
            ThreePartiteGraph::new(
                cycle(5),
                [names(&["a", "c"]), names(&["b", "d"]), names(&["e"])],
            )
            .unwrap(),
        ];
        for g3 in &cases {
            let alpha = brute_force_alpha(g3.graph()).unwrap();
            for kind in [GadgetKind::Claw, GadgetKind::Net, GadgetKind::Tent] {
                let inst = gadget_build(g3, kind).unwrap();
                let mch = oracle_mch(&inst);
                assert_eq!(
                    recover_alpha(&inst, mch).unwrap(),
                    alpha,
                    "kind {kind:?} on {:?}",
                    g3.graph().names()
                );
            }
        }
    }

    #[test]
    fn loop_nonloop_examples() {
        let h = Graph::new(
            names(&["r", "s"]),
            vec![("r".into(), "s".into())],
            names(&["r"]),
        )
        .unwrap();
        for (g, expected_mch) in [
            (complete(3), 2),
            (
                Graph::new(names(&["a", "b", "c", "d"]), Vec::new(), Vec::new()).unwrap(),
                0,
            ),
            (cycle(4), 2),
        ] {
            let inst = loop_nonloop_reduction(&g, &h, ("r", "s")).unwrap();
            let mch = oracle_mch(&inst);
            assert_eq!(mch, expected_mch);
            assert_eq!(
                recover_alpha(&inst, mch).unwrap(),
                brute_force_alpha(&g).unwrap()
            );
        }
    }

    #[test]
    fn loop_nonloop_rejects_bad_edges() {
        let h = crate::graph::reflexive_closure(&crate::graph::path(2));
        let g = crate::graph::path(2);
        assert!(matches!(
            loop_nonloop_reduction(&g, &h, ("a", "b")),
            Err(ReductionError::NotMixedEdge { .. })
        ));
        let looped_g = Graph::new(names(&["x"]), Vec::new(), names(&["x"])).unwrap();
        let mixed = Graph::new(
            names(&["r", "s"]),
            vec![("r".into(), "s".into())],
            names(&["r"]),
        )
        .unwrap();
        assert!(matches!(
            loop_nonloop_reduction(&looped_g, &mixed, ("r", "s")),
            Err(ReductionError::SourceHasLoop(_))
        ));
    }

    #[test]
    fn recover_alpha_rejects_overrun() {
        let inst = loop_nonloop_reduction(
            &complete(3),
            &Graph::new(
                names(&["r", "s"]),
                vec![("r".into(), "s".into())],
                names(&["r"]),
            )
            .unwrap(),
            ("r", "s"),
        )
        .unwrap();
        assert!(matches!(
            recover_alpha(&inst, 99),
            Err(ReductionError::NegativeResult { .. })
        ));
    }
}
