//! Shared helpers for the integration suites: small-graph enumeration,
//! independent exhaustive ordering search, and prefix-cut evaluation. The
//! condition checks here are deliberately written from scratch so they can
//! serve as ground truth for the library's own verifiers.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use minhom::graph::Graph;
use minhom::solver::{validate_homomorphism, ArcKind, Cost, CostTable, CutNetwork, Homomorphism};

pub fn letter_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// Graph from an edge bitmask over pairs (i, j), i < j, in row-major order.
pub fn graph_from_mask(n: usize, mask: u64, reflexive: bool) -> Graph {
    let names = letter_names(n);
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
    let loops = if reflexive { names.clone() } else { Vec::new() };
    Graph::new(names, edges, loops).unwrap()
}

fn pair_bit(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    // Offset of row a plus the distance to b.
    (0..a).map(|r| n - r - 1).sum::<usize>() + (b - a - 1)
}

fn mask_connected(n: usize, mask: u64) -> bool {
    if n <= 1 {
        return true;
    }
    let mut seen = 1u64;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if w != v && seen & (1 << w) == 0 && mask & (1 << pair_bit(n, v, w)) != 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen.count_ones() as usize == n
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Connected graphs on `n` unlabeled vertices, one labeled representative
/// each (canonical form = minimum edge mask over all vertex permutations).
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let bits = n * (n - 1) / 2;
    let perms = permutations(n);
    // Per permutation, where each edge bit lands.
    let moved: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut map = vec![0; bits];
            for i in 0..n {
                for j in (i + 1)..n {
                    map[pair_bit(n, i, j)] = pair_bit(n, p[i], p[j]);
                }
            }
            map
        })
        .collect();
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for mask in 0u64..(1 << bits) {
        if !mask_connected(n, mask) {
            continue;
        }
        let mut canon = u64::MAX;
        for map in &moved {
            let mut image = 0u64;
            for (bit, &to) in map.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    image |= 1 << to;
                }
            }
            canon = canon.min(image);
        }
        if seen.insert(canon) {
            reps.push(graph_from_mask(n, canon, false));
        }
    }
    reps
}

// ---------------------------------------------------------------------------
// Independent exhaustive ordering search.

fn reflexive_condition_holds(h: &Graph, order: &[usize]) -> bool {
    let p = order.len();
    for i in 0..p {
        for k in (i + 2)..p {
            if !h.has_edge(order[i], order[k]) {
                continue;
            }
            for j in (i + 1)..k {
                if !h.has_edge(order[i], order[j]) || !h.has_edge(order[j], order[k]) {
                    return false;
                }
            }
        }
    }
    true
}

fn bigraph_condition_holds(h: &Graph, white: &[usize], black: &[usize]) -> bool {
    for i in 0..white.len() {
        for j in (i + 1)..white.len() {
            for s in 0..black.len() {
                for r in (s + 1)..black.len() {
                    if h.has_edge(white[i], black[r])
                        && h.has_edge(white[j], black[s])
                        && !(h.has_edge(white[i], black[s]) && h.has_edge(white[j], black[r]))
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Brute-force two-coloring by enumerating all assignments.
fn brute_force_bipartition(h: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    if h.loop_indices().next().is_some() {
        return None;
    }
    let n = h.n();
    'mask: for mask in 0u64..(1 << n) {
        for &(a, b) in h.edges() {
            if (mask >> a) & 1 == (mask >> b) & 1 {
                continue 'mask;
            }
        }
        let white = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        let black = (0..n).filter(|v| mask & (1 << v) == 0).collect();
        return Some((white, black));
    }
    None
}

/// Ground truth: does any ordering satisfy the Min-Max condition? Reflexive
/// graphs search all permutations; irreflexive bipartite graphs search all
/// permutation pairs over a brute-forced two-coloring. Anything else has no
/// ordering by definition.
pub fn exhaustive_ordering_exists(h: &Graph) -> bool {
    let n = h.n();
    if n == 0 {
        return true;
    }
    let loops = h.loop_indices().count();
    if loops == n {
        permutations(n)
            .iter()
            .any(|p| reflexive_condition_holds(h, p))
    } else if loops == 0 {
        let Some((white, black)) = brute_force_bipartition(h) else {
            return false;
        };
        let wperms = permutations(white.len());
        let bperms = permutations(black.len());
        for wp in &wperms {
            let w: Vec<usize> = wp.iter().map(|&k| white[k]).collect();
            for bp in &bperms {
                let b: Vec<usize> = bp.iter().map(|&k| black[k]).collect();
                if bigraph_condition_holds(h, &w, &b) {
                    return true;
                }
            }
        }
        false
    } else {
        false
    }
}

// ---------------------------------------------------------------------------
// Homomorphism enumeration and prefix cuts over a built network.

/// Apply `visit` to every assignment of owners to chain positions that forms
/// a valid homomorphism, up to `limit` leaves. Returns the number visited.
pub fn for_each_network_homomorphism(
    net: &CutNetwork,
    limit: usize,
    visit: &mut dyn FnMut(&[usize]),
) -> usize {
    let g = net.source_graph();
    let owners = net.owners();
    let mut positions = vec![0usize; owners.len()];
    let mut count = 0usize;

    fn go(
        net: &CutNetwork,
        g: &Graph,
        positions: &mut [usize],
        o: usize,
        limit: usize,
        count: &mut usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if *count >= limit {
            return;
        }
        if o == positions.len() {
            *count += 1;
            visit(positions);
            return;
        }
        let h = net.target_graph();
        let targets = net.chain_targets(o);
        'pos: for k in 1..=targets.len() {
            let image = h.index_of(&targets[k - 1]).unwrap();
            for w in g.neighbors(o) {
                if w < o {
                    let w_image = h
                        .index_of(&net.chain_targets(w)[positions[w] - 1])
                        .unwrap();
                    if !h.adjacent(image, w_image) {
                        continue 'pos;
                    }
                }
            }
            positions[o] = k;
            go(net, g, positions, o + 1, limit, count, visit);
        }
    }
    go(net, g, &mut positions, 0, limit, &mut count, visit);
    count
}

/// Weight of the prefix cut induced by a position assignment: source side is
/// `{s}` plus every chain node at or below the assigned position.
pub fn prefix_cut_value(net: &CutNetwork, positions: &[usize]) -> i64 {
    let mut owner_of = BTreeMap::new();
    for o in 0..net.owners().len() {
        for k in 1..=net.chain_targets(o).len() {
            owner_of.insert(net.node_id(o, k), (o, k));
        }
    }
    let in_source_side = |node: usize| -> bool {
        if node == CutNetwork::SOURCE {
            return true;
        }
        if node == CutNetwork::SINK {
            return false;
        }
        let (o, k) = owner_of[&node];
        k <= positions[o]
    };
    net.arcs()
        .iter()
        .filter(|a| in_source_side(a.from) && !in_source_side(a.to))
        .map(|a| a.capacity)
        .sum()
}

/// Table cost of a position assignment, `None` when it crosses an infinite
/// entry.
pub fn assignment_cost(net: &CutNetwork, costs: &CostTable, positions: &[usize]) -> Option<u64> {
    let mut total = 0u64;
    for (o, u) in net.owners().iter().enumerate() {
        match costs.get(u, &net.chain_targets(o)[positions[o] - 1])? {
            Cost::Finite(v) => total += v,
            Cost::Infinite => return None,
        }
    }
    Some(total)
}

/// Sanity helper: the assignment really is a homomorphism.
pub fn assignment_is_homomorphism(net: &CutNetwork, positions: &[usize]) -> bool {
    let mapping: BTreeMap<String, String> = net
        .owners()
        .iter()
        .enumerate()
        .map(|(o, u)| (u.clone(), net.chain_targets(o)[positions[o] - 1].clone()))
        .collect();
    validate_homomorphism(
        net.source_graph(),
        net.target_graph(),
        &Homomorphism(mapping),
    )
    .is_ok()
}

/// Count of constraint arcs, for structural assertions.
pub fn constraint_arc_count(net: &CutNetwork) -> usize {
    net.arcs()
        .iter()
        .filter(|a| a.kind == ArcKind::Constraint)
        .count()
}
