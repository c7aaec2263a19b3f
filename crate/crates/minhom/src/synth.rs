//! Deterministic instance generators for self-tests and verification
//! harnesses. The generator is a plain splitmix64 stream so identical seeds
//! give identical instances on every platform and toolchain.

use crate::graph::{vertex_names, Graph};
use crate::recognition::{classify, Classification};
use crate::reductions::ThreePartiteGraph;
use crate::solver::{Cost, CostTable};

/// splitmix64.
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // Rejection sampling keeps the distribution exact.
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// True with probability `percent / 100`.
    pub fn chance(&mut self, percent: u64) -> bool {
        self.below(100) < percent
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Random graph on `n` vertices; each pair is an edge with the given
/// percentage, each vertex a loop with `loop_percent`.
pub fn random_graph(rng: &mut Rng, n: usize, edge_percent: u64, loop_percent: u64) -> Graph {
    let names = vertex_names("v", n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.chance(edge_percent) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let loops = names
        .iter()
        .filter(|_| rng.chance(loop_percent))
        .cloned()
        .collect();
    Graph::new(names, edges, loops).expect("generated graph is valid")
}

/// Random bipartite graph over `a + b` vertices with cross edges only.
pub fn random_bipartite(rng: &mut Rng, a: usize, b: usize, edge_percent: u64) -> Graph {
    let white = vertex_names("u", a);
    let black = vertex_names("w", b);
    let mut edges = Vec::new();
    for u in &white {
        for w in &black {
            if rng.chance(edge_percent) {
                edges.push((u.clone(), w.clone()));
            }
        }
    }
    let names = white.into_iter().chain(black).collect();
    Graph::new(names, edges, Vec::new()).expect("generated bigraph is valid")
}

/// Random target that classifies as polynomial: reflexive when `reflexive`
/// is set, irreflexive bipartite otherwise. Falls back to a path after too
/// many rejections, so it always terminates.
pub fn random_polynomial_target(rng: &mut Rng, max_n: usize, reflexive: bool) -> Graph {
    assert!(max_n >= 1);
    for _ in 0..10_000 {
        let candidate = if reflexive {
            let n = 1 + rng.below(max_n as u64) as usize;
            let percent = 30 + rng.below(50);
            let g = random_graph(rng, n, percent, 0);
            crate::graph::reflexive_closure(&g)
        } else {
            let total = 1 + rng.below(max_n as u64) as usize;
            let a = if total == 1 {
                1
            } else {
                1 + rng.below(total as u64 - 1) as usize
            };
            let b = total - a;
            let percent = 30 + rng.below(50);
            random_bipartite(rng, a, b, percent)
        };
        if matches!(classify(&candidate), Ok(Classification::Poly { .. })) {
            return candidate;
        }
    }
    let fallback = crate::graph::path(max_n.min(4));
    if reflexive {
        crate::graph::reflexive_closure(&fallback)
    } else {
        fallback
    }
}

/// Uniform costs in `0..=max_cost` with the given percentage of entries
/// forced infinite.
pub fn random_costs(
    rng: &mut Rng,
    g: &Graph,
    h: &Graph,
    max_cost: u64,
    infinite_percent: u64,
) -> CostTable {
    CostTable::build(g, h, |_, _| {
        if rng.chance(infinite_percent) {
            Cost::Infinite
        } else {
            Cost::Finite(rng.below(max_cost + 1))
        }
    })
    .expect("generated costs are in range")
}

/// Random 3-partite graph with the given part sizes; cross-part pairs become
/// edges with `edge_percent`.
pub fn random_three_partite(
    rng: &mut Rng,
    sizes: [usize; 3],
    edge_percent: u64,
) -> ThreePartiteGraph {
    let n: usize = sizes.iter().sum();
    // Letter names sort before generated gadget names (`m(..)`, `s1(..)`),
    // which keeps the cost-bearing originals early in identifier order.
    let mut names: Vec<String> = if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        vertex_names("v", n)
    };
    rng.shuffle(&mut names);
    let mut parts: [Vec<String>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut cursor = 0;
    for (k, &size) in sizes.iter().enumerate() {
        parts[k] = names[cursor..cursor + size].to_vec();
        cursor += size;
    }
    let part_of = |v: &String| parts.iter().position(|p| p.contains(v)).unwrap();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if part_of(&names[i]) != part_of(&names[j]) && rng.chance(edge_percent) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let graph = Graph::new(names.clone(), edges, Vec::new()).expect("generated graph is valid");
    ThreePartiteGraph::new(graph, parts).expect("construction respects the parts")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LoopProfile;

    #[test]
    fn deterministic_for_fixed_seed() {
        let make = || {
            let mut rng = Rng::new(42);
            let g = random_graph(&mut rng, 6, 40, 20);
            let h = random_polynomial_target(&mut rng, 5, true);
            let costs = random_costs(&mut rng, &g, &h, 10, 5);
            (g, h, costs)
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn polynomial_targets_classify_poly() {
        let mut rng = Rng::new(7);
        for k in 0..20 {
            let h = random_polynomial_target(&mut rng, 6, k % 2 == 0);
            assert!(matches!(
                classify(&h),
                Ok(Classification::Poly { .. })
            ));
            if k % 2 == 0 {
                assert_eq!(h.loop_profile(), LoopProfile::Reflexive);
            } else {
                assert_eq!(h.loop_profile(), LoopProfile::Irreflexive);
            }
        }
    }

    #[test]
    fn three_partite_respects_sizes() {
        let mut rng = Rng::new(99);
        let g3 = random_three_partite(&mut rng, [3, 2, 2], 50);
        assert_eq!(g3.graph().n(), 7);
        assert_eq!(g3.parts()[0].len(), 3);
        assert_eq!(g3.parts()[2].len(), 2);
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = Rng::new(1);
        for _ in 0..1000 {
            assert!(rng.below(7) < 7);
        }
    }
}
