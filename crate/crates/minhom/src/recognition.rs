//! Dichotomy classifier for target graphs: either a Min-Max ordering
//! certifying that minimum-cost homomorphism is tractable, or a
//! machine-checkable certificate of NP-completeness.
//!
//! A reflexive target admits the ordering iff it is a proper interval graph;
//! an irreflexive bipartite target admits the two-sided ordering iff it is a
//! proper interval bigraph. Everything else is hard, and the certificate
//! names why: a mixed loop edge, an odd cycle, an induced cycle of length at
//! least six, or one of the three small bipartite obstructions (claw, net,
//! tent).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    find_induced_embedding, Bipartition, Graph, InducedEmbedding, LoopProfile, OddCycleWitness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("graph is not reflexive (vertex `{0}` has no loop)")]
    NotReflexive(String),
    #[error("graph is not bipartite with the given sides: {0}")]
    NotBipartite(String),
    #[error("ordering does not match the vertex set: {0}")]
    PermutationMismatch(String),
    #[error("unsupported loop profile for ordering search: {0}")]
    UnsupportedProfile(String),
    #[error("no ordering and no forbidden structure found; this contradicts a structural \
             guarantee and indicates a defect in this build")]
    InternalInconsistency,
}

/// Certificate of polynomial-time solvability: a vertex ordering (reflexive
/// case) or a pair of orderings over a bipartition (bigraph case) satisfying
/// the Min-Max condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinMaxOrdering {
    Reflexive { order: Vec<String> },
    Bigraph { white: Vec<String>, black: Vec<String> },
}

/// Machine-checkable witness that the target makes the problem NP-complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "witness", rename_all = "snake_case")]
pub enum NpcCertificate {
    MixedLoopEdge { looped: String, unlooped: String },
    NonBipartiteComponent(OddCycleWitness),
    LongInducedCycle(Vec<String>),
    BipartiteClaw(InducedEmbedding),
    BipartiteNet(InducedEmbedding),
    BipartiteTent(InducedEmbedding),
    /// Certificate found in the bipartite double of a reflexive component.
    ReflexiveViaDouble(Box<NpcCertificate>),
}

impl NpcCertificate {
    /// Re-check the certificate against its definition on `h`.
    pub fn check(&self, h: &Graph) -> bool {
        match self {
            NpcCertificate::MixedLoopEdge { looped, unlooped } => {
                h.has_edge_named(looped, unlooped)
                    && h.has_loop_named(looped)
                    && !h.has_loop_named(unlooped)
            }
            NpcCertificate::NonBipartiteComponent(w) => w.check(h),
            NpcCertificate::LongInducedCycle(cycle) => {
                let k = cycle.len();
                if k < 6 {
                    return false;
                }
                let Some(idx) = cycle
                    .iter()
                    .map(|v| h.index_of(v))
                    .collect::<Option<Vec<_>>>()
                else {
                    return false;
                };
                if idx.iter().collect::<BTreeSet<_>>().len() != k {
                    return false;
                }
                for i in 0..k {
                    for j in (i + 1)..k {
                        let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                        if h.has_edge(idx[i], idx[j]) != consecutive {
                            return false;
                        }
                    }
                }
                true
            }
            NpcCertificate::BipartiteClaw(e) => e.check(h, &bipartite_claw()),
            NpcCertificate::BipartiteNet(e) => e.check(h, &bipartite_net()),
            NpcCertificate::BipartiteTent(e) => e.check(h, &bipartite_tent()),
            NpcCertificate::ReflexiveViaDouble(inner) => match h.bipartite_double() {
                Ok(double) => inner.check(&double),
                Err(_) => false,
            },
        }
    }
}

/// Overall verdict for a target graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    /// One ordering per connected component, in component order.
    Poly { orderings: Vec<MinMaxOrdering> },
    /// Certificate from the first failing component.
    Npc { certificate: NpcCertificate },
}

// ---------------------------------------------------------------------------
// The three 7-vertex bipartite obstructions.

fn pattern(edges: &[(&str, &str)]) -> Graph {
    let vertices = ["x1", "x2", "x3", "x4", "y1", "y2", "y3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Graph::new(
        vertices,
        edges
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        Vec::new(),
    )
    .expect("obstruction pattern")
}

pub fn bipartite_claw() -> Graph {
    pattern(&[
        ("x4", "y1"),
        ("y1", "x1"),
        ("x4", "y2"),
        ("y2", "x2"),
        ("x4", "y3"),
        ("y3", "x3"),
    ])
}

pub fn bipartite_net() -> Graph {
    pattern(&[
        ("x1", "y1"),
        ("y1", "x3"),
        ("y1", "x4"),
        ("x3", "y2"),
        ("x4", "y2"),
        ("y2", "x2"),
        ("y3", "x4"),
    ])
}

pub fn bipartite_tent() -> Graph {
    pattern(&[
        ("x4", "y1"),
        ("y1", "x1"),
        ("x1", "y2"),
        ("y2", "x4"),
        ("x1", "y3"),
        ("y3", "x2"),
        ("x2", "y1"),
        ("y1", "x3"),
    ])
}

// ---------------------------------------------------------------------------
// Verifiers. These are the ground truth every search result is checked
// against.

/// Exhaustive check of the reflexive Min-Max condition: for positions
/// i < j < k, an edge between positions i and k forces edges between i and j
/// and between j and k.
pub fn verify_reflexive_ordering(h: &Graph, order: &[String]) -> Result<bool, RecognitionError> {
    if let Some(v) = h.names().iter().find(|v| !h.has_loop_named(v)) {
        return Err(RecognitionError::NotReflexive(v.clone()));
    }
    let idx = permutation_indices(h, order)?;
    let p = idx.len();
    for i in 0..p {
        for k in (i + 2)..p {
            if !h.has_edge(idx[i], idx[k]) {
                continue;
            }
            for j in (i + 1)..k {
                if !h.has_edge(idx[i], idx[j]) || !h.has_edge(idx[j], idx[k]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustive check of the bigraph Min-Max condition: for white positions
/// i < j and black positions s < r, edges u_i v_r and u_j v_s force the
/// edges u_i v_s and u_j v_r.
pub fn verify_bigraph_ordering(
    h: &Graph,
    white_order: &[String],
    black_order: &[String],
) -> Result<bool, RecognitionError> {
    if let Some(&l) = h.loop_indices().collect::<Vec<_>>().first() {
        return Err(RecognitionError::NotBipartite(format!(
            "vertex `{}` has a loop",
            h.name(l)
        )));
    }
    let white = side_indices(h, white_order, black_order)?;
    let black = side_indices(h, black_order, white_order)?;
    let white_set: BTreeSet<usize> = white.iter().copied().collect();
    for &(a, b) in h.edges() {
        if white_set.contains(&a) == white_set.contains(&b) {
            return Err(RecognitionError::NotBipartite(format!(
                "edge `{}`-`{}` does not cross the given sides",
                h.name(a),
                h.name(b)
            )));
        }
    }
    let p = white.len();
    let q = black.len();
    for i in 0..p {
        for j in (i + 1)..p {
            for s in 0..q {
                for r in (s + 1)..q {
                    if h.has_edge(white[i], black[r])
                        && h.has_edge(white[j], black[s])
                        && !(h.has_edge(white[i], black[s]) && h.has_edge(white[j], black[r]))
                    {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Run the matching verifier for `ord` against `h`.
pub fn verify_ordering(h: &Graph, ord: &MinMaxOrdering) -> Result<bool, RecognitionError> {
    match ord {
        MinMaxOrdering::Reflexive { order } => verify_reflexive_ordering(h, order),
        MinMaxOrdering::Bigraph { white, black } => verify_bigraph_ordering(h, white, black),
    }
}

fn permutation_indices(h: &Graph, order: &[String]) -> Result<Vec<usize>, RecognitionError> {
    if order.len() != h.n() {
        return Err(RecognitionError::PermutationMismatch(format!(
            "{} positions for {} vertices",
            order.len(),
            h.n()
        )));
    }
    let mut seen = vec![false; h.n()];
    let mut idx = Vec::with_capacity(order.len());
    for v in order {
        let i = h
            .index_of(v)
            .ok_or_else(|| RecognitionError::PermutationMismatch(format!("unknown vertex `{v}`")))?;
        if seen[i] {
            return Err(RecognitionError::PermutationMismatch(format!(
                "vertex `{v}` appears twice"
            )));
        }
        seen[i] = true;
        idx.push(i);
    }
    Ok(idx)
}

fn side_indices(
    h: &Graph,
    order: &[String],
    other: &[String],
) -> Result<Vec<usize>, RecognitionError> {
    if order.len() + other.len() != h.n() {
        return Err(RecognitionError::PermutationMismatch(format!(
            "{} ordered vertices for {} total",
            order.len() + other.len(),
            h.n()
        )));
    }
    let mut idx = Vec::with_capacity(order.len());
    let mut seen = BTreeSet::new();
    for v in order.iter().chain(other.iter()) {
        let i = h
            .index_of(v)
            .ok_or_else(|| RecognitionError::PermutationMismatch(format!("unknown vertex `{v}`")))?;
        if !seen.insert(i) {
            return Err(RecognitionError::PermutationMismatch(format!(
                "vertex `{v}` appears twice"
            )));
        }
    }
    for v in order {
        idx.push(h.index_of(v).unwrap());
    }
    Ok(idx)
}

// ---------------------------------------------------------------------------
// Ordering search: a cheap fixpoint-refinement pass first, then a complete
// backtracking fallback. The verifier gates both, so an ordering is returned
// only if it genuinely satisfies the condition, and `None` only after the
// exhaustive fallback ran dry.

/// Find a Min-Max ordering of `h`, or `None` if no ordering exists. Exact:
/// the fallback search is complete. Dispatches on the loop profile; mixed
/// profiles and non-bipartite irreflexive graphs are not orderable at all
/// and yield `UnsupportedProfile`.
pub fn find_ordering(h: &Graph) -> Result<Option<MinMaxOrdering>, RecognitionError> {
    match h.loop_profile() {
        LoopProfile::Reflexive => find_reflexive_ordering(h),
        LoopProfile::Irreflexive => match h.bipartition() {
            Ok(b) => find_bigraph_ordering(h, &b),
            Err(w) => Err(RecognitionError::UnsupportedProfile(format!(
                "irreflexive but not bipartite ({w:?})"
            ))),
        },
        profile => Err(RecognitionError::UnsupportedProfile(format!("{profile:?}"))),
    }
}

fn find_reflexive_ordering(h: &Graph) -> Result<Option<MinMaxOrdering>, RecognitionError> {
    if h.is_empty() {
        return Ok(Some(MinMaxOrdering::Reflexive { order: Vec::new() }));
    }
    if let Some(order) = reflexive_fast_path(h) {
        let ord = MinMaxOrdering::Reflexive { order };
        if verify_ordering(h, &ord)? {
            return Ok(Some(ord));
        }
    }
    let found = reflexive_backtrack(h);
    if let Some(order) = found {
        let ord = MinMaxOrdering::Reflexive {
            order: order.iter().map(|&i| h.name(i).to_owned()).collect(),
        };
        assert!(
            verify_ordering(h, &ord)?,
            "backtracking produced an ordering the verifier rejects"
        );
        return Ok(Some(ord));
    }
    Ok(None)
}

/// Sort vertices by (leftmost neighbor, rightmost neighbor, degree, name)
/// against a provisional order of the same set, iterated to a fixpoint.
/// Heuristic only; the verifier decides.
fn reflexive_fast_path(h: &Graph) -> Option<Vec<String>> {
    let n = h.n();
    let mut pos: Vec<usize> = (0..n).collect(); // vertex -> position
    for _ in 0..(2 * n + 4) {
        let mut order: Vec<usize> = (0..n).collect();
        let key = |v: usize| {
            let mut lo = pos[v];
            let mut hi = pos[v];
            for w in h.neighbors(v) {
                lo = lo.min(pos[w]);
                hi = hi.max(pos[w]);
            }
            (lo, hi, h.degree(v), v)
        };
        order.sort_by_key(|&v| key(v));
        let mut new_pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            new_pos[v] = p;
        }
        if new_pos == pos {
            return Some(order.iter().map(|&v| h.name(v).to_owned()).collect());
        }
        pos = new_pos;
    }
    None
}

/// Complete position-by-position search. Placing a vertex at the end of the
/// prefix checks every condition triple whose largest position is the new
/// one, so any violation is caught as early as possible.
fn reflexive_backtrack(h: &Graph) -> Option<Vec<usize>> {
    let n = h.n();
    let mut prefix: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn place(h: &Graph, prefix: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if prefix.len() == h.n() {
            return true;
        }
        'next: for v in 0..h.n() {
            if used[v] {
                continue;
            }
            let m = prefix.len();
            for i in 0..m {
                if !h.has_edge(prefix[i], v) {
                    continue;
                }
                for j in (i + 1)..m {
                    if !h.has_edge(prefix[i], prefix[j]) || !h.has_edge(prefix[j], v) {
                        continue 'next;
                    }
                }
            }
            prefix.push(v);
            used[v] = true;
            if place(h, prefix, used) {
                return true;
            }
            prefix.pop();
            used[v] = false;
        }
        false
    }
    if place(h, &mut prefix, &mut used) {
        Some(prefix)
    } else {
        None
    }
}

fn find_bigraph_ordering(
    h: &Graph,
    b: &Bipartition,
) -> Result<Option<MinMaxOrdering>, RecognitionError> {
    if let Some((white, black)) = bigraph_fast_path(h, b) {
        let ord = MinMaxOrdering::Bigraph { white, black };
        if verify_ordering(h, &ord)? {
            return Ok(Some(ord));
        }
    }
    if let Some((white, black)) = bigraph_backtrack(h, b) {
        let ord = MinMaxOrdering::Bigraph { white, black };
        assert!(
            verify_ordering(h, &ord)?,
            "backtracking produced an ordering the verifier rejects"
        );
        return Ok(Some(ord));
    }
    Ok(None)
}

/// Alternate sorting each side by (leftmost neighbor, rightmost neighbor,
/// degree, name) against the other side's provisional order until stable.
fn bigraph_fast_path(h: &Graph, b: &Bipartition) -> Option<(Vec<String>, Vec<String>)> {
    let white: Vec<usize> = b.white.iter().map(|v| h.index_of(v).unwrap()).collect();
    let black: Vec<usize> = b.black.iter().map(|v| h.index_of(v).unwrap()).collect();
    let mut black_order = black.clone();
    let rounds = 2 * (h.n() + 2);
    for _ in 0..rounds {
        let white_order = sorted_against(h, &white, &black_order);
        let new_black = sorted_against(h, &black, &white_order);
        if new_black == black_order {
            let names = |v: &[usize]| v.iter().map(|&i| h.name(i).to_owned()).collect();
            return Some((names(&white_order), names(&black_order)));
        }
        black_order = new_black;
    }
    None
}

fn sorted_against(h: &Graph, side: &[usize], other_order: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; h.n()];
    for (p, &v) in other_order.iter().enumerate() {
        pos[v] = p;
    }
    let mut order = side.to_vec();
    order.sort_by_key(|&v| {
        let mut lo = usize::MAX;
        let mut hi = usize::MAX;
        for w in h.neighbors(v) {
            let p = pos[w];
            if lo == usize::MAX || p < lo {
                lo = p;
            }
            if hi == usize::MAX || p > hi {
                hi = p;
            }
        }
        (lo, hi, h.degree(v), v)
    });
    order
}

/// Complete search for the bigraph case. With one side's order fixed, the
/// condition holds for some order of the other side exactly when every
/// vertex's neighborhood is a contiguous run of the fixed side and sorting
/// by (leftmost, rightmost) makes both endpoints nondecreasing. So it
/// suffices to enumerate permutations of the smaller side and derive the
/// larger side canonically.
fn bigraph_backtrack(h: &Graph, b: &Bipartition) -> Option<(Vec<String>, Vec<String>)> {
    let white: Vec<usize> = b.white.iter().map(|v| h.index_of(v).unwrap()).collect();
    let black: Vec<usize> = b.black.iter().map(|v| h.index_of(v).unwrap()).collect();
    let swap = white.len() < black.len();
    let (fixed_side, derived_side) = if swap {
        (white.clone(), black.clone())
    } else {
        (black.clone(), white.clone())
    };

    let mut perm: Vec<usize> = Vec::with_capacity(fixed_side.len());
    let mut used = vec![false; fixed_side.len()];
    let mut found: Option<(Vec<usize>, Vec<usize>)> = None;
    enumerate_permutations(&fixed_side, &mut perm, &mut used, &mut |order| {
        derive_side(h, &derived_side, order).map(|derived| (order.to_vec(), derived))
    }, &mut found);

    found.map(|(fixed, derived)| {
        let names = |v: &[usize]| v.iter().map(|&i| h.name(i).to_owned()).collect();
        if swap {
            (names(&fixed), names(&derived))
        } else {
            (names(&derived), names(&fixed))
        }
    })
}

type OrderPair = (Vec<usize>, Vec<usize>);

fn enumerate_permutations(
    items: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    accept: &mut dyn FnMut(&[usize]) -> Option<OrderPair>,
    found: &mut Option<OrderPair>,
) {
    if found.is_some() {
        return;
    }
    if perm.len() == items.len() {
        *found = accept(perm);
        return;
    }
    for (k, &item) in items.iter().enumerate() {
        if used[k] {
            continue;
        }
        used[k] = true;
        perm.push(item);
        enumerate_permutations(items, perm, used, accept, found);
        perm.pop();
        used[k] = false;
        if found.is_some() {
            return;
        }
    }
}

/// Given a fixed order of the opposite side, derive a valid order of `side`
/// if one exists: contiguity of each neighborhood, then a sort by
/// (leftmost, rightmost, name) whose rightmost endpoints must come out
/// nondecreasing. Isolated vertices carry no constraints and go last.
fn derive_side(h: &Graph, side: &[usize], fixed_order: &[usize]) -> Option<Vec<usize>> {
    let mut pos = vec![usize::MAX; h.n()];
    for (p, &v) in fixed_order.iter().enumerate() {
        pos[v] = p;
    }
    let mut keyed: Vec<(usize, usize, usize)> = Vec::with_capacity(side.len());
    for &v in side {
        let positions: Vec<usize> = h.neighbors(v).map(|w| pos[w]).collect();
        if positions.is_empty() {
            keyed.push((usize::MAX, usize::MAX, v));
            continue;
        }
        let lo = *positions.iter().min().unwrap();
        let hi = *positions.iter().max().unwrap();
        if hi - lo + 1 != positions.len() {
            return None; // neighborhood not contiguous in the fixed order
        }
        keyed.push((lo, hi, v));
    }
    keyed.sort();
    let mut last_hi = 0usize;
    for &(lo, hi, _) in &keyed {
        if lo == usize::MAX {
            continue;
        }
        if hi < last_hi {
            return None; // rightmost endpoints must be nondecreasing
        }
        last_hi = hi;
    }
    Some(keyed.into_iter().map(|(_, _, v)| v).collect())
}

// ---------------------------------------------------------------------------
// Forbidden-structure search and classification.

/// Find the obstruction certificate for a connected irreflexive bipartite
/// graph with no Min-Max ordering. Search order is fixed: claw, net, tent,
/// then induced cycles of length 6, 8, and so on.
pub fn find_forbidden_structure(h: &Graph) -> Result<NpcCertificate, RecognitionError> {
    if h.loop_indices().next().is_some() {
        return Err(RecognitionError::UnsupportedProfile(
            "forbidden-structure search needs an irreflexive graph".into(),
        ));
    }
    if let Some(e) = find_induced_embedding(h, &bipartite_claw()) {
        return Ok(NpcCertificate::BipartiteClaw(e));
    }
    if let Some(e) = find_induced_embedding(h, &bipartite_net()) {
        return Ok(NpcCertificate::BipartiteNet(e));
    }
    if let Some(e) = find_induced_embedding(h, &bipartite_tent()) {
        return Ok(NpcCertificate::BipartiteTent(e));
    }
    let mut k = 6;
    while k <= h.n() {
        if let Some(e) = find_induced_embedding(h, &crate::graph::cycle(k)) {
            let pattern = crate::graph::cycle(k);
            let cycle = pattern
                .names()
                .iter()
                .map(|p| e.0.get(p).unwrap().clone())
                .collect();
            return Ok(NpcCertificate::LongInducedCycle(cycle));
        }
        k += 2; // bipartite hosts have even cycles only
    }
    Err(RecognitionError::InternalInconsistency)
}

/// Classify a target graph component by component. Every component must be a
/// reflexive proper interval graph or an irreflexive proper interval bigraph
/// for the polynomial verdict; the first failing component (in identifier
/// order) supplies the certificate.
pub fn classify(h: &Graph) -> Result<Classification, RecognitionError> {
    let mut orderings = Vec::new();
    for comp in h.connected_components() {
        match comp.loop_profile() {
            LoopProfile::Mixed { looped, unlooped } => {
                return Ok(Classification::Npc {
                    certificate: NpcCertificate::MixedLoopEdge { looped, unlooped },
                });
            }
            LoopProfile::MixedNoWitness => {
                unreachable!("a connected graph with loops and non-loops has a mixed edge")
            }
            LoopProfile::Irreflexive => match comp.bipartition() {
                Err(witness) => {
                    return Ok(Classification::Npc {
                        certificate: NpcCertificate::NonBipartiteComponent(witness),
                    });
                }
                Ok(_) => match find_ordering(&comp)? {
                    Some(ord) => orderings.push(ord),
                    None => {
                        return Ok(Classification::Npc {
                            certificate: find_forbidden_structure(&comp)?,
                        });
                    }
                },
            },
            LoopProfile::Reflexive => match find_ordering(&comp)? {
                Some(ord) => orderings.push(ord),
                None => {
                    let double = comp
                        .bipartite_double()
                        .expect("reflexive component doubles");
                    let inner = find_forbidden_structure(&double)?;
                    return Ok(Classification::Npc {
                        certificate: NpcCertificate::ReflexiveViaDouble(Box::new(inner)),
                    });
                }
            },
        }
    }
    Ok(Classification::Poly { orderings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_bipartite, cycle, path, reflexive_closure, Graph};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn all_permutations(items: &[String]) -> Vec<Vec<String>> {
        if items.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in all_permutations(&rest) {
                tail.insert(0, x.clone());
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn reflexive_verifier_p3() {
        let h = reflexive_closure(&path(3));
        assert!(verify_reflexive_ordering(&h, &names(&["a", "b", "c"])).unwrap());
        assert!(!verify_reflexive_ordering(&h, &names(&["a", "c", "b"])).unwrap());
    }

    #[test]
    fn reflexive_verifier_star_always_fails() {
        // K_{1,3} with loops: the claw obstruction, no order works.
        let h = Graph::new(
            names(&["c", "l1", "l2", "l3"]),
            vec![
                ("c".into(), "l1".into()),
                ("c".into(), "l2".into()),
                ("c".into(), "l3".into()),
            ],
            names(&["c", "l1", "l2", "l3"]),
        )
        .unwrap();
        for perm in all_permutations(&names(&["c", "l1", "l2", "l3"])) {
            assert!(!verify_reflexive_ordering(&h, &perm).unwrap());
        }
    }

    #[test]
    fn reflexive_verifier_complete_any_order() {
        let h = reflexive_closure(&complete(3));
        for perm in all_permutations(&names(&["a", "b", "c"])) {
            assert!(verify_reflexive_ordering(&h, &perm).unwrap());
        }
    }

    #[test]
    fn reflexive_verifier_errors() {
        let h = path(3);
        assert!(matches!(
            verify_reflexive_ordering(&h, &names(&["a", "b", "c"])),
            Err(RecognitionError::NotReflexive(_))
        ));
        let h = reflexive_closure(&path(3));
        assert!(matches!(
            verify_reflexive_ordering(&h, &names(&["a", "b"])),
            Err(RecognitionError::PermutationMismatch(_))
        ));
        assert!(matches!(
            verify_reflexive_ordering(&h, &names(&["a", "a", "b"])),
            Err(RecognitionError::PermutationMismatch(_))
        ));
    }

    #[test]
    fn bigraph_verifier_p4() {
        // u1-v1, u2-v1, u2-v2 is the path v2-u2-v1-u1 seen as a bigraph.
        let h = Graph::new(
            names(&["u1", "u2", "v1", "v2"]),
            vec![
                ("u1".into(), "v1".into()),
                ("u2".into(), "v1".into()),
                ("u2".into(), "v2".into()),
            ],
            Vec::new(),
        )
        .unwrap();
        assert!(
            verify_bigraph_ordering(&h, &names(&["u1", "u2"]), &names(&["v1", "v2"])).unwrap()
        );
        assert!(
            !verify_bigraph_ordering(&h, &names(&["u1", "u2"]), &names(&["v2", "v1"])).unwrap()
        );
    }

    #[test]
    fn bigraph_verifier_c6_always_fails() {
        let h = cycle(6);
        let b = h.bipartition().unwrap();
        for wp in all_permutations(&b.white) {
            for bp in all_permutations(&b.black) {
                assert!(!verify_bigraph_ordering(&h, &wp, &bp).unwrap());
            }
        }
    }

    #[test]
    fn bigraph_verifier_complete_any_order() {
        let h = complete_bipartite(2, 2);
        let b = h.bipartition().unwrap();
        for wp in all_permutations(&b.white) {
            for bp in all_permutations(&b.black) {
                assert!(verify_bigraph_ordering(&h, &wp, &bp).unwrap());
            }
        }
    }

    #[test]
    fn bigraph_verifier_errors() {
        let h = cycle(3);
        assert!(matches!(
            verify_bigraph_ordering(&h, &names(&["a", "b"]), &names(&["c"])),
            Err(RecognitionError::NotBipartite(_))
        ));
        let h = path(2);
        assert!(matches!(
            verify_bigraph_ordering(&h, &names(&["a", "b"]), &names(&[])),
            Err(RecognitionError::NotBipartite(_))
        ));
    }

    #[test]
    fn find_ordering_reflexive_path() {
        let h = reflexive_closure(&path(5));
        let ord = find_ordering(&h).unwrap().unwrap();
        assert!(verify_ordering(&h, &ord).unwrap());
    }

    #[test]
    fn find_ordering_claw_is_none() {
        assert_eq!(find_ordering(&bipartite_claw()).unwrap(), None);
    }

    #[test]
    fn find_ordering_net_tent_none() {
        assert_eq!(find_ordering(&bipartite_net()).unwrap(), None);
        assert_eq!(find_ordering(&bipartite_tent()).unwrap(), None);
    }

    #[test]
    fn find_ordering_c4() {
        let h = cycle(4);
        let ord = find_ordering(&h).unwrap().unwrap();
        assert!(matches!(ord, MinMaxOrdering::Bigraph { .. }));
        assert!(verify_ordering(&h, &ord).unwrap());
    }

    #[test]
    fn find_ordering_c6_is_none() {
        assert_eq!(find_ordering(&cycle(6)).unwrap(), None);
    }

    #[test]
    fn find_ordering_unsupported_profiles() {
        let mixed = Graph::new(
            names(&["r", "s"]),
            vec![("r".into(), "s".into())],
            names(&["r"]),
        )
        .unwrap();
        assert!(matches!(
            find_ordering(&mixed),
            Err(RecognitionError::UnsupportedProfile(_))
        ));
        assert!(matches!(
            find_ordering(&cycle(3)),
            Err(RecognitionError::UnsupportedProfile(_))
        ));
    }

    #[test]
    fn forbidden_structure_c6() {
        let cert = find_forbidden_structure(&cycle(6)).unwrap();
        match &cert {
            NpcCertificate::LongInducedCycle(c) => assert_eq!(c.len(), 6),
            other => panic!("expected a cycle certificate, got {other:?}"),
        }
        assert!(cert.check(&cycle(6)));
    }

    #[test]
    fn forbidden_structure_net_identity() {
        let net = bipartite_net();
        let cert = find_forbidden_structure(&net).unwrap();
        assert!(matches!(cert, NpcCertificate::BipartiteNet(_)));
        assert!(cert.check(&net));
    }

    #[test]
    fn forbidden_structure_claw_with_pendant() {
        let mut edges = bipartite_claw().edge_names();
        edges.push(("x1".into(), "z".into()));
        let mut vertices = bipartite_claw().names().to_vec();
        vertices.push("z".into());
        let h = Graph::new(vertices, edges, Vec::new()).unwrap();
        assert_eq!(find_ordering(&h).unwrap(), None);
        let cert = find_forbidden_structure(&h).unwrap();
        assert!(matches!(cert, NpcCertificate::BipartiteClaw(_)));
        assert!(cert.check(&h));
    }

    #[test]
    fn classify_disjoint_poly_components() {
        // Reflexive P3 plus an (irreflexive) C4, disjoint.
        let p3 = reflexive_closure(&path(3));
        let mut vertices = p3.names().to_vec();
        let mut edges = p3.edge_names();
        let loops = p3.loop_names();
        for v in ["w", "x", "y", "z"] {
            vertices.push(v.into());
        }
        for (a, b) in [("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")] {
            edges.push((a.into(), b.into()));
        }
        let h = Graph::new(vertices, edges, loops).unwrap();
        match classify(&h).unwrap() {
            Classification::Poly { orderings } => {
                assert_eq!(orderings.len(), 2);
                assert!(matches!(orderings[0], MinMaxOrdering::Reflexive { .. }));
                assert!(matches!(orderings[1], MinMaxOrdering::Bigraph { .. }));
            }
            other => panic!("expected poly, got {other:?}"),
        }
    }

    #[test]
    fn classify_mixed_loop_edge() {
        let h = Graph::new(
            names(&["r", "s"]),
            vec![("r".into(), "s".into())],
            names(&["r"]),
        )
        .unwrap();
        match classify(&h).unwrap() {
            Classification::Npc { certificate } => {
                assert_eq!(
                    certificate,
                    NpcCertificate::MixedLoopEdge {
                        looped: "r".into(),
                        unlooped: "s".into()
                    }
                );
                assert!(certificate.check(&h));
            }
            other => panic!("expected npc, got {other:?}"),
        }
    }

    #[test]
    fn classify_irreflexive_triangle() {
        match classify(&complete(3)).unwrap() {
            Classification::Npc { certificate } => {
                assert!(matches!(
                    certificate,
                    NpcCertificate::NonBipartiteComponent(_)
                ));
                assert!(certificate.check(&complete(3)));
            }
            other => panic!("expected npc, got {other:?}"),
        }
    }

    #[test]
    fn classify_reflexive_star_via_double() {
        let star = Graph::new(
            names(&["c", "l1", "l2", "l3"]),
            vec![
                ("c".into(), "l1".into()),
                ("c".into(), "l2".into()),
                ("c".into(), "l3".into()),
            ],
            names(&["c", "l1", "l2", "l3"]),
        )
        .unwrap();
        match classify(&star).unwrap() {
            Classification::Npc { certificate } => {
                assert!(matches!(certificate, NpcCertificate::ReflexiveViaDouble(_)));
                assert!(certificate.check(&star));
            }
            other => panic!("expected npc, got {other:?}"),
        }
    }

    #[test]
    fn classify_empty_graph() {
        assert_eq!(
            classify(&Graph::empty()).unwrap(),
            Classification::Poly { orderings: vec![] }
        );
    }

    #[test]
    fn patterns_are_bipartite_with_expected_sizes() {
        for (g, edge_count) in [
            (bipartite_claw(), 6),
            (bipartite_net(), 7),
            (bipartite_tent(), 8),
        ] {
            assert_eq!(g.n(), 7);
            assert_eq!(g.edges().len(), edge_count);
            assert!(g.bipartition().is_ok());
        }
    }

    #[test]
    fn classification_json_shape() {
        let h = reflexive_closure(&path(2));
        let json = serde_json::to_value(classify(&h).unwrap()).unwrap();
        assert_eq!(json["verdict"], "poly");
        let npc = classify(&cycle(6)).unwrap();
        let json = serde_json::to_value(&npc).unwrap();
        assert_eq!(json["verdict"], "npc");
        assert_eq!(json["certificate"]["kind"], "long_induced_cycle");
        let back: Classification = serde_json::from_value(json).unwrap();
        assert_eq!(back, npc);
    }
}
