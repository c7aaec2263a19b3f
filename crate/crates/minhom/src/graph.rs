//! Undirected graphs with optional loops, plus the structural machinery the
//! classifier and solver are built on: connected components, two-colorings
//! with odd-cycle witnesses, loop profiles, the bipartite double, and induced
//! subgraph embedding search.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}` referenced by an edge or loop")]
    UnknownVertex(String),
    #[error("edge `{0}`-`{0}` must be declared in `loops`, not `edges`")]
    SelfEdge(String),
    #[error("vertex `{0}` has no loop but the operation requires a reflexive graph")]
    NotReflexive(String),
    #[error("generated vertex name `{0}` collides with an existing name")]
    NameCollision(String),
}

/// Undirected graph with named vertices. Loops are a vertex attribute kept
/// apart from the edge set, so edge-based code never sees a `(v, v)` pair.
///
/// Vertices are ordered lexicographically; every deterministic tie-break in
/// the crate uses this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    loops: BTreeSet<usize>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        loops: Vec<String>,
    ) -> Result<Self, GraphError> {
        let mut names = vertices;
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut adj = vec![BTreeSet::new(); names.len()];
        let mut edge_set = BTreeSet::new();
        for (a, b) in &edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfEdge(a.clone()));
            }
            edge_set.insert((ia.min(ib), ia.max(ib)));
        }
        for (a, b) in &edge_set {
            adj[*a].insert(*b);
            adj[*b].insert(*a);
        }
        let mut loop_set = BTreeSet::new();
        for l in &loops {
            let i = *index
                .get(l)
                .ok_or_else(|| GraphError::UnknownVertex(l.clone()))?;
            loop_set.insert(i);
        }
        Ok(Graph {
            names,
            index,
            adj,
            loops: loop_set,
            edges: edge_set.into_iter().collect(),
        })
    }

    pub fn empty() -> Self {
        Graph::new(Vec::new(), Vec::new(), Vec::new()).expect("empty graph")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Vertex names in lexicographic order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Non-loop edge between two distinct vertices.
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].contains(&b)
    }

    pub fn has_edge_named(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(ia), Some(ib)) => self.has_edge(ia, ib),
            _ => false,
        }
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops.contains(&v)
    }

    pub fn has_loop_named(&self, v: &str) -> bool {
        self.index_of(v).is_some_and(|i| self.has_loop(i))
    }

    /// Homomorphism-relevant adjacency: an edge for distinct vertices, the
    /// loop for a vertex against itself.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        if a == b {
            self.has_loop(a)
        } else {
            self.adj[a].contains(&b)
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect()
    }

    pub fn loop_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops.iter().copied()
    }

    pub fn loop_names(&self) -> Vec<String> {
        self.loops.iter().map(|&i| self.names[i].clone()).collect()
    }

    pub fn induced_subgraph(&self, keep: &BTreeSet<usize>) -> Graph {
        let vertices: Vec<String> = keep.iter().map(|&i| self.names[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        let loops = self
            .loops
            .iter()
            .filter(|i| keep.contains(i))
            .map(|&i| self.names[i].clone())
            .collect();
        Graph::new(vertices, edges, loops).expect("induced subgraph of a valid graph")
    }

    pub fn without_loops(&self) -> Graph {
        Graph::new(self.names.clone(), self.edge_names(), Vec::new()).expect("loop removal")
    }

    /// Connected components as induced subgraphs, ordered by their smallest
    /// vertex name. Loops do not affect connectivity.
    pub fn connected_components(&self) -> Vec<Graph> {
        let mut seen = vec![false; self.n()];
        let mut components = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut member = BTreeSet::new();
            let mut queue = vec![start];
            seen[start] = true;
            while let Some(v) = queue.pop() {
                member.insert(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
            components.push(self.induced_subgraph(&member));
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Two-coloring, or a witness that none exists. The smallest vertex of
    /// each component is colored white; for a connected graph the coloring is
    /// otherwise forced, so the result is canonical.
    pub fn bipartition(&self) -> Result<Bipartition, OddCycleWitness> {
        if let Some(&l) = self.loops.iter().next() {
            return Err(OddCycleWitness::LoopVertex(self.names[l].clone()));
        }
        let mut color: Vec<Option<bool>> = vec![None; self.n()];
        let mut parent: Vec<usize> = (0..self.n()).collect();
        let mut depth: Vec<usize> = vec![0; self.n()];
        for start in 0..self.n() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(true); // white
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = Some(!color[v].unwrap());
                            parent[w] = v;
                            depth[w] = depth[v] + 1;
                            queue.push_back(w);
                        }
                        Some(c) if c == color[v].unwrap() => {
                            return Err(OddCycleWitness::OddCycle(self.odd_cycle_through(
                                v, w, &parent, &depth,
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let mut white = Vec::new();
        let mut black = Vec::new();
        for (i, c) in color.iter().enumerate() {
            if c.unwrap() {
                white.push(self.names[i].clone());
            } else {
                black.push(self.names[i].clone());
            }
        }
        Ok(Bipartition { white, black })
    }

    /// Simple odd cycle through the conflicting BFS edge `vw`: both tree
    /// paths up to the lowest common ancestor plus the edge itself.
    fn odd_cycle_through(
        &self,
        v: usize,
        w: usize,
        parent: &[usize],
        depth: &[usize],
    ) -> Vec<String> {
        let (mut a, mut b) = (v, w);
        let mut path_a = vec![a];
        let mut path_b = vec![b];
        while depth[a] > depth[b] {
            a = parent[a];
            path_a.push(a);
        }
        while depth[b] > depth[a] {
            b = parent[b];
            path_b.push(b);
        }
        while a != b {
            a = parent[a];
            b = parent[b];
            path_a.push(a);
            path_b.push(b);
        }
        // path_a ends at the common ancestor; path_b repeats it.
        path_b.pop();
        path_b.reverse();
        let cycle: Vec<usize> = path_a.into_iter().chain(path_b).collect();
        debug_assert!(cycle.len() % 2 == 1);
        canonical_cycle(cycle.iter().map(|&i| self.names[i].clone()).collect())
    }

    pub fn loop_profile(&self) -> LoopProfile {
        let looped = self.loops.len();
        if looped == 0 {
            return LoopProfile::Irreflexive;
        }
        if looped == self.n() {
            return LoopProfile::Reflexive;
        }
        // Edges are sorted, so the first hit is the lexicographically
        // smallest witness pair.
        for &(a, b) in &self.edges {
            match (self.has_loop(a), self.has_loop(b)) {
                (true, false) => {
                    return LoopProfile::Mixed {
                        looped: self.names[a].clone(),
                        unlooped: self.names[b].clone(),
                    }
                }
                (false, true) => {
                    return LoopProfile::Mixed {
                        looped: self.names[b].clone(),
                        unlooped: self.names[a].clone(),
                    }
                }
                _ => {}
            }
        }
        LoopProfile::MixedNoWitness
    }

    /// Bipartite double of a reflexive graph: each vertex `v` splits into a
    /// white copy `v'` and black copy `v''`, with an edge `v'v''` for every
    /// vertex and edges `u'v''`, `v'u''` for every edge `uv`.
    pub fn bipartite_double(&self) -> Result<Graph, GraphError> {
        if let Some(v) = self.names.iter().find(|v| !self.has_loop_named(v)) {
            return Err(GraphError::NotReflexive(v.clone()));
        }
        let mut vertices = Vec::with_capacity(2 * self.n());
        let mut seen = BTreeSet::new();
        for v in &self.names {
            for copy in [format!("{v}'"), format!("{v}''")] {
                if !seen.insert(copy.clone()) {
                    return Err(GraphError::NameCollision(copy));
                }
                vertices.push(copy);
            }
        }
        let mut edges = Vec::new();
        for v in &self.names {
            edges.push((format!("{v}'"), format!("{v}''")));
        }
        for (u, v) in self.edge_names() {
            edges.push((format!("{u}'"), format!("{v}''")));
            edges.push((format!("{v}'"), format!("{u}''")));
        }
        Graph::new(vertices, edges, Vec::new())
    }

    /// White/black split of the bipartite double's vertex set, matching
    /// [`Graph::bipartite_double`]'s naming scheme.
    pub fn double_bipartition(&self) -> Bipartition {
        Bipartition {
            white: self.names.iter().map(|v| format!("{v}'")).collect(),
            black: self.names.iter().map(|v| format!("{v}''")).collect(),
        }
    }
}

/// Rotate and orient a simple cycle so the smallest vertex comes first and
/// its smaller neighbor second.
fn canonical_cycle(cycle: Vec<String>) -> Vec<String> {
    if cycle.len() < 3 {
        return cycle;
    }
    let k = cycle.len();
    let first = (0..k).min_by_key(|&i| &cycle[i]).unwrap();
    let succ = &cycle[(first + 1) % k];
    let pred = &cycle[(first + k - 1) % k];
    let mut out = Vec::with_capacity(k);
    if succ <= pred {
        for i in 0..k {
            out.push(cycle[(first + i) % k].clone());
        }
    } else {
        for i in 0..k {
            out.push(cycle[(first + k - i) % k].clone());
        }
    }
    out
}

/// White/black split with every edge crossing the parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub white: Vec<String>,
    pub black: Vec<String>,
}

impl Bipartition {
    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            white: self.black.clone(),
            black: self.white.clone(),
        }
    }
}

/// Witness that a graph is not bipartite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OddCycleWitness {
    /// Closed odd walk, listed once without repeating the first vertex.
    OddCycle(Vec<String>),
    LoopVertex(String),
}

impl OddCycleWitness {
    pub fn check(&self, g: &Graph) -> bool {
        match self {
            OddCycleWitness::LoopVertex(v) => g.has_loop_named(v),
            OddCycleWitness::OddCycle(cycle) => {
                if cycle.len() < 3 || cycle.len() % 2 == 0 {
                    return false;
                }
                cycle.iter().zip(cycle.iter().cycle().skip(1)).all(|(a, b)| {
                    g.has_edge_named(a, b)
                })
            }
        }
    }
}

/// Loop pattern of a graph: all vertices looped, none, or a mix. A mix in a
/// connected graph always has a witness edge joining a looped vertex to an
/// unlooped one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopProfile {
    Reflexive,
    Irreflexive,
    Mixed { looped: String, unlooped: String },
    MixedNoWitness,
}

/// Injective map from pattern vertices to host vertices preserving both
/// edges and non-edges among the mapped pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedEmbedding(pub BTreeMap<String, String>);

impl InducedEmbedding {
    pub fn check(&self, host: &Graph, pattern: &Graph) -> bool {
        if self.0.len() != pattern.n() {
            return false;
        }
        let mut image = BTreeSet::new();
        let mut map = vec![usize::MAX; pattern.n()];
        for (p, h) in &self.0 {
            let (Some(pi), Some(hi)) = (pattern.index_of(p), host.index_of(h)) else {
                return false;
            };
            if !image.insert(hi) {
                return false;
            }
            map[pi] = hi;
        }
        for a in 0..pattern.n() {
            for b in (a + 1)..pattern.n() {
                if pattern.has_edge(a, b) != host.has_edge(map[a], map[b]) {
                    return false;
                }
            }
        }
        true
    }
}

impl Serialize for InducedEmbedding {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for InducedEmbedding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(InducedEmbedding(BTreeMap::deserialize(d)?))
    }
}

/// First induced embedding of `pattern` into `host` in backtracking order
/// (pattern and candidate hosts both scanned lexicographically), or `None`.
/// Patterns with loops never embed.
pub fn find_induced_embedding(host: &Graph, pattern: &Graph) -> Option<InducedEmbedding> {
    if pattern.loop_indices().next().is_some() {
        return None;
    }
    if pattern.n() > host.n() {
        return None;
    }
    let mut assignment = vec![usize::MAX; pattern.n()];
    let mut used = vec![false; host.n()];
    fn go(
        host: &Graph,
        pattern: &Graph,
        k: usize,
        assignment: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == pattern.n() {
            return true;
        }
        'candidate: for c in 0..host.n() {
            if used[c] {
                continue;
            }
            for (prev, &image) in assignment.iter().enumerate().take(k) {
                if pattern.has_edge(prev, k) != host.has_edge(image, c) {
                    continue 'candidate;
                }
            }
            assignment[k] = c;
            used[c] = true;
            if go(host, pattern, k + 1, assignment, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    if go(host, pattern, 0, &mut assignment, &mut used) {
        let map = assignment
            .iter()
            .enumerate()
            .map(|(p, &h)| (pattern.name(p).to_owned(), host.name(h).to_owned()))
            .collect();
        Some(InducedEmbedding(map))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Catalog builders. Names stay lexicographically ordered along the intended
// structure, zero-padded once single characters run out.

pub fn vertex_names(prefix: &str, n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

fn letter_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        vertex_names("v", n)
    }
}

pub fn path(n: usize) -> Graph {
    let names = letter_names(n);
    let edges = names
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    Graph::new(names, edges, Vec::new()).expect("path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let names = letter_names(n);
    let mut edges: Vec<(String, String)> = names
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    edges.push((names[n - 1].clone(), names[0].clone()));
    Graph::new(names, edges, Vec::new()).expect("cycle")
}

pub fn complete(n: usize) -> Graph {
    let names = letter_names(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    Graph::new(names, edges, Vec::new()).expect("complete graph")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let white = vertex_names("u", a);
    let black = vertex_names("w", b);
    let mut edges = Vec::new();
    for u in &white {
        for w in &black {
            edges.push((u.clone(), w.clone()));
        }
    }
    let names = white.into_iter().chain(black).collect();
    Graph::new(names, edges, Vec::new()).expect("complete bipartite graph")
}

/// The graph with a loop added at every vertex.
pub fn reflexive_closure(g: &Graph) -> Graph {
    Graph::new(g.names().to_vec(), g.edge_names(), g.names().to_vec())
        .expect("reflexive closure")
}

// ---------------------------------------------------------------------------
// JSON form: {"vertices": [...], "edges": [["a","b"], ...], "loops": [...]}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default)]
    loops: Vec<String>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.names.clone(),
            edges: self.edge_names(),
            loops: self.loop_names(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::new(raw.vertices, raw.edges, raw.loops).map_err(D::Error::custom)
    }
}
