//! Minimum-cost homomorphism solving for orderable targets via a single
//! minimum-weight cut per (source component, target component, orientation)
//! subproblem.
//!
//! For a target ordered `w_1 .. w_p`, every source vertex `u` contributes a
//! chain `s -> (u,1) -> ... -> (u,p) -> t` whose arc out of `(u,i)` carries
//! the cost of assigning `u` to position `i`; a cut through the chain picks
//! the assignment. Infinite constraint arcs between chains of adjacent
//! source vertices make exactly the non-homomorphisms infinitely expensive:
//! an arc `(u,i) -> (v, L(i))` enforces "if u sits at position i or later,
//! v sits at L(i) or later", where L(i) is the leftmost neighbor of position
//! i. Two such families (one per direction) pin the extracted assignment to
//! adjacent images.

use std::collections::{BTreeMap, HashMap};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Bipartition, Graph};
use crate::recognition::{classify, verify_ordering, Classification, MinMaxOrdering, NpcCertificate};

/// Largest representable finite cost; sums are checked against it too.
pub const MAX_COST: u64 = i64::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("cost table incomplete: missing cost for ({source_vertex}, {target_vertex})")]
    MissingCost {
        source_vertex: String,
        target_vertex: String,
    },
    #[error("cost table does not match the instance graphs: {0}")]
    CostTableMismatch(String),
    #[error("cost {value} at ({source_vertex}, {target_vertex}) exceeds the 63-bit limit")]
    CostTooLarge {
        source_vertex: String,
        target_vertex: String,
        value: u64,
    },
    #[error("total finite cost exceeds the 63-bit limit")]
    SumOverflow,
    #[error("costs too large for exact cut arithmetic")]
    Overflow,
    #[error("ordering fails its verifier")]
    InvalidOrdering,
    #[error("graph/ordering/orientation shapes do not fit together: {0}")]
    ProfileMismatch(String),
    #[error("cut is not a valid source side: {0}")]
    InvalidCut(String),
    #[error("extracted mapping is not a homomorphism ({0}); this indicates a defect in this build")]
    NonHomomorphismExtracted(String),
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

/// Nonnegative integer cost, or a marker excluding the assignment outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(v) => s.serialize_u64(*v),
            Cost::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Cost::Finite(v)),
            Raw::Text(t) if t == "inf" => Ok(Cost::Infinite),
            Raw::Text(t) => Err(D::Error::custom(format!(
                "cost must be a nonnegative integer or \"inf\", got `{t}`"
            ))),
        }
    }
}

/// Complete cost table for a (source graph, target graph) pair: one value
/// per (source vertex, target vertex). Finite values and their total are
/// checked against the 63-bit limit at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTable {
    source: Vec<String>,
    target: Vec<String>,
    source_index: HashMap<String, usize>,
    target_index: HashMap<String, usize>,
    rows: Vec<Vec<Cost>>,
}

impl CostTable {
    pub fn build(
        g: &Graph,
        h: &Graph,
        mut cost: impl FnMut(&str, &str) -> Cost,
    ) -> Result<Self, SolverError> {
        let mut rows = Vec::with_capacity(g.n());
        for u in g.names() {
            let mut row = Vec::with_capacity(h.n());
            for i in h.names() {
                row.push(cost(u, i));
            }
            rows.push(row);
        }
        Self::from_rows(g, h, rows)
    }

    pub fn from_named(
        g: &Graph,
        h: &Graph,
        entries: &BTreeMap<String, BTreeMap<String, Cost>>,
    ) -> Result<Self, SolverError> {
        for u in entries.keys() {
            if g.index_of(u).is_none() {
                return Err(SolverError::CostTableMismatch(format!(
                    "unknown source vertex `{u}` in cost table"
                )));
            }
        }
        let mut rows = Vec::with_capacity(g.n());
        for u in g.names() {
            let row_map = entries.get(u).ok_or_else(|| SolverError::MissingCost {
                source_vertex: u.clone(),
                target_vertex: h.names().first().cloned().unwrap_or_default(),
            })?;
            for i in row_map.keys() {
                if h.index_of(i).is_none() {
                    return Err(SolverError::CostTableMismatch(format!(
                        "unknown target vertex `{i}` in cost table row `{u}`"
                    )));
                }
            }
            let mut row = Vec::with_capacity(h.n());
            for i in h.names() {
                let c = row_map.get(i).ok_or_else(|| SolverError::MissingCost {
                    source_vertex: u.clone(),
                    target_vertex: i.clone(),
                })?;
                row.push(*c);
            }
            rows.push(row);
        }
        Self::from_rows(g, h, rows)
    }

    fn from_rows(g: &Graph, h: &Graph, rows: Vec<Vec<Cost>>) -> Result<Self, SolverError> {
        let mut total: u128 = 0;
        for (ui, row) in rows.iter().enumerate() {
            for (ii, c) in row.iter().enumerate() {
                if let Cost::Finite(v) = c {
                    if *v > MAX_COST {
                        return Err(SolverError::CostTooLarge {
                            source_vertex: g.name(ui).to_owned(),
                            target_vertex: h.name(ii).to_owned(),
                            value: *v,
                        });
                    }
                    total += u128::from(*v);
                }
            }
        }
        if total > u128::from(MAX_COST) {
            return Err(SolverError::SumOverflow);
        }
        Ok(CostTable {
            source: g.names().to_vec(),
            target: h.names().to_vec(),
            source_index: g
                .names()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect(),
            target_index: h
                .names()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect(),
            rows,
        })
    }

    pub fn source_names(&self) -> &[String] {
        &self.source
    }

    pub fn target_names(&self) -> &[String] {
        &self.target
    }

    pub fn get(&self, source: &str, target: &str) -> Option<Cost> {
        let u = *self.source_index.get(source)?;
        let i = *self.target_index.get(target)?;
        Some(self.rows[u][i])
    }

    pub fn get_index(&self, source: usize, target: usize) -> Cost {
        self.rows[source][target]
    }

    /// True when the table covers exactly the vertex sets of `g` and `h`.
    pub fn matches(&self, g: &Graph, h: &Graph) -> bool {
        self.source == g.names() && self.target == h.names()
    }

    pub fn entries_named(&self) -> BTreeMap<String, BTreeMap<String, Cost>> {
        self.source
            .iter()
            .enumerate()
            .map(|(ui, u)| {
                let row = self
                    .target
                    .iter()
                    .enumerate()
                    .map(|(ii, i)| (i.clone(), self.rows[ui][ii]))
                    .collect();
                (u.clone(), row)
            })
            .collect()
    }

    /// Total cost of a mapping, or `None` if it crosses an infinite entry or
    /// an unknown pair.
    pub fn mapping_cost(&self, f: &Homomorphism) -> Option<u64> {
        let mut total: u64 = 0;
        for (u, i) in &f.0 {
            match self.get(u, i)? {
                Cost::Finite(v) => total = total.checked_add(v)?,
                Cost::Infinite => return None,
            }
        }
        Some(total)
    }

    /// Copy of the table with cost(u, i) forced to infinite for every looped
    /// source vertex u and unlooped target vertex i. This is how source
    /// loops are eliminated before cut solving.
    pub fn with_loops_priced_out(&self, g: &Graph, h: &Graph) -> CostTable {
        let mut out = self.clone();
        for u in g.loop_indices() {
            let row = *out
                .source_index
                .get(g.name(u))
                .expect("table matches the source graph");
            for (ii, i) in out.target.clone().iter().enumerate() {
                if !h.has_loop_named(i) {
                    out.rows[row][ii] = Cost::Infinite;
                }
            }
        }
        out
    }
}

/// Vertex mapping from a source graph into a target graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism(pub BTreeMap<String, String>);

impl Serialize for Homomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Homomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Homomorphism(BTreeMap::deserialize(d)?))
    }
}

/// Standalone validity check: every source vertex mapped to a target vertex,
/// no extras, and every edge (and loop) preserved.
pub fn validate_homomorphism(g: &Graph, h: &Graph, f: &Homomorphism) -> Result<(), String> {
    for u in f.0.keys() {
        if g.index_of(u).is_none() {
            return Err(format!("mapping names `{u}`, which is not a source vertex"));
        }
    }
    for u in g.names() {
        let image = f
            .0
            .get(u)
            .ok_or_else(|| format!("source vertex `{u}` is unmapped"))?;
        if h.index_of(image).is_none() {
            return Err(format!("image `{image}` of `{u}` is not a target vertex"));
        }
    }
    for (a, b) in g.edge_names() {
        let fa = h.index_of(&f.0[&a]).unwrap();
        let fb = h.index_of(&f.0[&b]).unwrap();
        if !h.adjacent(fa, fb) {
            return Err(format!(
                "edge `{a}`-`{b}` maps to non-adjacent `{}`-`{}`",
                f.0[&a], f.0[&b]
            ));
        }
    }
    for u in g.loop_names() {
        if !h.has_loop_named(&f.0[&u]) {
            return Err(format!(
                "loop at `{u}` maps to `{}` which has no loop",
                f.0[&u]
            ));
        }
    }
    Ok(())
}

/// Solver outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveResult {
    Optimal { cost: u64, assignment: Homomorphism },
    NoHomomorphism,
    NpcTarget { certificate: NpcCertificate },
}

// ---------------------------------------------------------------------------
// Neighbor tables along an ordering.

/// Leftmost/rightmost neighbor positions per target position, plus (in the
/// reflexive case) the largest earlier non-neighbor. Positions are 1-based;
/// vectors are indexed by position - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeighborTables {
    Reflexive {
        /// Largest position j < i not adjacent to i, if any.
        ell: Vec<Option<usize>>,
        /// ell(i) + 1 when defined, else 1.
        left: Vec<usize>,
        /// Largest position adjacent to i; at least i, via the loop.
        right: Vec<usize>,
    },
    Bigraph {
        /// Black neighbor-position extremes per white position (None if isolated).
        white_left: Vec<Option<usize>>,
        white_right: Vec<Option<usize>>,
        /// White neighbor-position extremes per black position.
        black_left: Vec<Option<usize>>,
        black_right: Vec<Option<usize>>,
    },
}

pub fn neighbor_tables(h: &Graph, ord: &MinMaxOrdering) -> Result<NeighborTables, SolverError> {
    if !verify_ordering(h, ord).map_err(|_| SolverError::InvalidOrdering)? {
        return Err(SolverError::InvalidOrdering);
    }
    match ord {
        MinMaxOrdering::Reflexive { order } => {
            let idx: Vec<usize> = order.iter().map(|v| h.index_of(v).unwrap()).collect();
            let p = idx.len();
            let mut ell = vec![None; p];
            let mut left = vec![1usize; p];
            let mut right = vec![0usize; p];
            for i in 0..p {
                for j in 0..i {
                    if !h.has_edge(idx[j], idx[i]) {
                        ell[i] = Some(j + 1);
                    }
                }
                left[i] = ell[i].map_or(1, |e| e + 1);
                right[i] = i + 1;
                for j in (i + 1)..p {
                    if h.has_edge(idx[i], idx[j]) {
                        right[i] = j + 1;
                    }
                }
            }
            assert!(
                left.windows(2).all(|w| w[0] <= w[1])
                    && right.windows(2).all(|w| w[0] <= w[1]),
                "neighbor extremes must be monotone under a verified ordering"
            );
            Ok(NeighborTables::Reflexive { ell, left, right })
        }
        MinMaxOrdering::Bigraph { white, black } => {
            let extremes = |side: &[String], other: &[String]| {
                let pos: HashMap<&str, usize> = other
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (v.as_str(), k + 1))
                    .collect();
                let mut lo = vec![None; side.len()];
                let mut hi = vec![None; side.len()];
                for (k, v) in side.iter().enumerate() {
                    let vi = h.index_of(v).unwrap();
                    for w in h.neighbors(vi) {
                        let p = pos[h.name(w)];
                        lo[k] = Some(lo[k].map_or(p, |cur: usize| cur.min(p)));
                        hi[k] = Some(hi[k].map_or(p, |cur: usize| cur.max(p)));
                    }
                }
                (lo, hi)
            };
            let (white_left, white_right) = extremes(white, black);
            let (black_left, black_right) = extremes(black, white);
            for table in [&white_left, &white_right, &black_left, &black_right] {
                let defined: Vec<usize> = table.iter().flatten().copied().collect();
                assert!(
                    defined.windows(2).all(|w| w[0] <= w[1]),
                    "neighbor extremes must be monotone under a verified ordering"
                );
            }
            Ok(NeighborTables::Bigraph {
                white_left,
                white_right,
                black_left,
                black_right,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Cut network.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Source,
    Chain,
    Sink,
    Constraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutArc {
    pub kind: ArcKind,
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
}

/// The product network: per-source-vertex cost chains between a shared
/// source and sink, plus infinite constraint arcs for the source edges.
#[derive(Debug, Clone)]
pub struct CutNetwork {
    g: Graph,
    h: Graph,
    owners: Vec<String>,
    chain_targets: Vec<Vec<String>>,
    chain_offset: Vec<usize>,
    arcs: Vec<CutArc>,
    sentinel: i64,
}

impl CutNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn node_count(&self) -> usize {
        2 + self.chain_targets.iter().map(Vec::len).sum::<usize>()
    }

    /// Node id of chain node (owner, position), positions 1-based.
    pub fn node_id(&self, owner: usize, position: usize) -> usize {
        debug_assert!(position >= 1 && position <= self.chain_targets[owner].len());
        2 + self.chain_offset[owner] + (position - 1)
    }

    pub fn owners(&self) -> &[String] {
        &self.owners
    }

    /// Target vertex names along the chain of one owner, in position order.
    pub fn chain_targets(&self, owner: usize) -> &[String] {
        &self.chain_targets[owner]
    }

    pub fn arcs(&self) -> &[CutArc] {
        &self.arcs
    }

    pub fn sentinel(&self) -> i64 {
        self.sentinel
    }

    pub fn source_graph(&self) -> &Graph {
        &self.g
    }

    pub fn target_graph(&self) -> &Graph {
        &self.h
    }
}

/// Build the cut network for a loop-free source `g` against a connected
/// ordered target `h`. Reflexive targets take no orientation; bigraph
/// targets need a white/black assignment of the source vertices.
pub fn build_cut_network(
    g: &Graph,
    costs: &CostTable,
    h: &Graph,
    ord: &MinMaxOrdering,
    orient: Option<&Bipartition>,
) -> Result<CutNetwork, SolverError> {
    if g.loop_indices().next().is_some() {
        return Err(SolverError::ProfileMismatch(
            "source loops must be priced out before building the network".into(),
        ));
    }
    if !h.is_connected() {
        return Err(SolverError::ProfileMismatch(
            "target must be connected; solve components separately".into(),
        ));
    }
    let tables = neighbor_tables(h, ord)?;
    match (ord, &tables, orient) {
        (MinMaxOrdering::Reflexive { order }, NeighborTables::Reflexive { left, .. }, None) => {
            build_reflexive_network(g, costs, h, order, left)
        }
        (MinMaxOrdering::Reflexive { .. }, _, Some(_)) => Err(SolverError::ProfileMismatch(
            "reflexive targets take no orientation".into(),
        )),
        (
            MinMaxOrdering::Bigraph { white, black },
            NeighborTables::Bigraph {
                white_left,
                black_left,
                ..
            },
            Some(orient),
        ) => build_bigraph_network(g, costs, h, white, black, white_left, black_left, orient),
        (MinMaxOrdering::Bigraph { .. }, _, None) => Err(SolverError::ProfileMismatch(
            "bigraph targets need a white/black assignment of the source vertices".into(),
        )),
        _ => unreachable!("neighbor tables always match the ordering kind"),
    }
}

struct ChainBuilder {
    arcs: Vec<CutArc>,
    finite_total: u128,
    min_cap_total: u128,
}

impl ChainBuilder {
    fn new() -> Self {
        ChainBuilder {
            arcs: Vec::new(),
            finite_total: 0,
            min_cap_total: 0,
        }
    }

    /// Record the chain costs for one owner; capacities are patched to the
    /// sentinel afterwards.
    fn push_chain(&mut self, first_node: usize, costs: &[Cost]) {
        let len = costs.len();
        self.arcs.push(CutArc {
            kind: ArcKind::Source,
            from: CutNetwork::SOURCE,
            to: first_node,
            capacity: -1,
        });
        let mut min_cap: Option<u128> = None;
        for (k, c) in costs.iter().enumerate() {
            let (capacity, bound) = match c {
                Cost::Finite(v) => {
                    self.finite_total += u128::from(*v);
                    (i64::try_from(*v).expect("checked at table load"), u128::from(*v))
                }
                Cost::Infinite => (-1, u128::MAX),
            };
            min_cap = Some(min_cap.map_or(bound, |m| m.min(bound)));
            if k + 1 < len {
                self.arcs.push(CutArc {
                    kind: ArcKind::Chain,
                    from: first_node + k,
                    to: first_node + k + 1,
                    capacity,
                });
            } else {
                self.arcs.push(CutArc {
                    kind: ArcKind::Sink,
                    from: first_node + k,
                    to: CutNetwork::SINK,
                    capacity,
                });
            }
        }
        self.min_cap_total = self
            .min_cap_total
            .saturating_add(min_cap.expect("chains are nonempty"));
    }

    /// Compute the sentinel, patch the infinite arcs, and bound the total
    /// flow the network can carry.
    fn finish(
        mut self,
        g: Graph,
        h: Graph,
        owners: Vec<String>,
        chain_targets: Vec<Vec<String>>,
        chain_offset: Vec<usize>,
    ) -> Result<CutNetwork, SolverError> {
        let sentinel_u = self.finite_total + 1;
        let limit = u128::try_from(i64::MAX / 4).unwrap();
        if sentinel_u > limit {
            return Err(SolverError::Overflow);
        }
        // Max flow is at most one cheapest arc per chain.
        let flow_bound = self
            .min_cap_total
            .min(u128::MAX / 2)
            .min(owners.len() as u128 * sentinel_u);
        if flow_bound > limit {
            return Err(SolverError::Overflow);
        }
        let sentinel = i64::try_from(sentinel_u).unwrap();
        for arc in &mut self.arcs {
            if arc.capacity < 0 {
                arc.capacity = sentinel;
            }
        }
        Ok(CutNetwork {
            g,
            h,
            owners,
            chain_targets,
            chain_offset,
            arcs: self.arcs,
            sentinel,
        })
    }
}

fn lookup(costs: &CostTable, u: &str, i: &str) -> Result<Cost, SolverError> {
    costs.get(u, i).ok_or_else(|| SolverError::MissingCost {
        source_vertex: u.to_owned(),
        target_vertex: i.to_owned(),
    })
}

fn build_reflexive_network(
    g: &Graph,
    costs: &CostTable,
    h: &Graph,
    order: &[String],
    left: &[usize],
) -> Result<CutNetwork, SolverError> {
    let p = order.len();
    let owners = g.names().to_vec();
    let chain_offset: Vec<usize> = (0..owners.len()).map(|o| o * p).collect();
    let node = |owner: usize, pos: usize| 2 + owner * p + (pos - 1);

    let mut b = ChainBuilder::new();
    for (o, u) in owners.iter().enumerate() {
        let chain: Vec<Cost> = order
            .iter()
            .map(|i| lookup(costs, u, i))
            .collect::<Result<_, _>>()?;
        b.push_chain(node(o, 1), &chain);
    }
    for &(u, v) in g.edges() {
        for (a, c) in [(u, v), (v, u)] {
            for i in 1..=p {
                if left[i - 1] > 1 {
                    b.arcs.push(CutArc {
                        kind: ArcKind::Constraint,
                        from: node(a, i),
                        to: node(c, left[i - 1]),
                        capacity: -1,
                    });
                }
            }
        }
    }
    let chain_targets = vec![order.to_vec(); owners.len()];
    b.finish(g.clone(), h.clone(), owners, chain_targets, chain_offset)
}

#[allow(clippy::too_many_arguments)]
fn build_bigraph_network(
    g: &Graph,
    costs: &CostTable,
    h: &Graph,
    white_order: &[String],
    black_order: &[String],
    white_left: &[Option<usize>],
    black_left: &[Option<usize>],
    orient: &Bipartition,
) -> Result<CutNetwork, SolverError> {
    // The orientation must two-color exactly the source vertices.
    let mut is_white = vec![false; g.n()];
    let mut seen = vec![false; g.n()];
    for (names, white) in [(&orient.white, true), (&orient.black, false)] {
        for v in names {
            let i = g.index_of(v).ok_or_else(|| {
                SolverError::ProfileMismatch(format!("orientation names unknown vertex `{v}`"))
            })?;
            if seen[i] {
                return Err(SolverError::ProfileMismatch(format!(
                    "orientation assigns `{v}` twice"
                )));
            }
            seen[i] = true;
            is_white[i] = white;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(SolverError::ProfileMismatch(
            "orientation does not cover the source vertices".into(),
        ));
    }
    for &(u, v) in g.edges() {
        if is_white[u] == is_white[v] {
            return Err(SolverError::ProfileMismatch(format!(
                "source edge `{}`-`{}` does not cross the orientation",
                g.name(u),
                g.name(v)
            )));
        }
    }
    for (white, side_len, side) in [
        (true, white_order.len(), "white"),
        (false, black_order.len(), "black"),
    ] {
        if side_len == 0 && is_white.contains(&white) {
            return Err(SolverError::ProfileMismatch(format!(
                "source vertices assigned to the empty {side} side"
            )));
        }
    }

    let owners = g.names().to_vec();
    let mut chain_targets = Vec::with_capacity(owners.len());
    let mut chain_offset = Vec::with_capacity(owners.len());
    let mut offset = 0usize;
    for &white in &is_white {
        let side = if white { white_order } else { black_order };
        chain_offset.push(offset);
        offset += side.len();
        chain_targets.push(side.to_vec());
    }
    let node = |owner: usize, pos: usize| 2 + chain_offset[owner] + (pos - 1);

    let mut b = ChainBuilder::new();
    for (o, u) in owners.iter().enumerate() {
        let chain: Vec<Cost> = chain_targets[o]
            .iter()
            .map(|i| lookup(costs, u, i))
            .collect::<Result<_, _>>()?;
        b.push_chain(node(o, 1), &chain);
    }
    for &(a, c) in g.edges() {
        let (w, k) = if is_white[a] { (a, c) } else { (c, a) };
        // White chain positions constrain the black chain and vice versa.
        for i in 1..=white_order.len() {
            if let Some(l) = white_left[i - 1] {
                if l > 1 {
                    b.arcs.push(CutArc {
                        kind: ArcKind::Constraint,
                        from: node(w, i),
                        to: node(k, l),
                        capacity: -1,
                    });
                }
            }
        }
        for s in 1..=black_order.len() {
            if let Some(l) = black_left[s - 1] {
                if l > 1 {
                    b.arcs.push(CutArc {
                        kind: ArcKind::Constraint,
                        from: node(k, s),
                        to: node(w, l),
                        capacity: -1,
                    });
                }
            }
        }
    }
    b.finish(g.clone(), h.clone(), owners, chain_targets, chain_offset)
}

/// Exact minimum s-t cut value and the source side induced by residual
/// reachability after a maximum flow. Deterministic for a fixed network.
pub fn min_cut(net: &CutNetwork) -> (i64, Vec<bool>) {
    let mut flow = FlowNetwork::new(net.node_count());
    for arc in &net.arcs {
        flow.add_edge(arc.from, arc.to, arc.capacity);
    }
    let value = flow.max_flow(CutNetwork::SOURCE, CutNetwork::SINK);
    let side = flow.residual_source_side(CutNetwork::SOURCE);
    (value, side)
}

/// Read the assignment out of a finite cut: each owner maps to the target at
/// its deepest chain position on the source side. The result is validated as
/// a homomorphism; failure indicates a network construction defect.
pub fn extract_homomorphism(
    net: &CutNetwork,
    source_side: &[bool],
) -> Result<Homomorphism, SolverError> {
    if source_side.len() != net.node_count() {
        return Err(SolverError::InvalidCut(format!(
            "cut covers {} nodes, network has {}",
            source_side.len(),
            net.node_count()
        )));
    }
    if !source_side[CutNetwork::SOURCE] || source_side[CutNetwork::SINK] {
        return Err(SolverError::InvalidCut(
            "source side must contain s and not t".into(),
        ));
    }
    let mut mapping = BTreeMap::new();
    for (o, u) in net.owners.iter().enumerate() {
        let len = net.chain_targets[o].len();
        let deepest = (1..=len)
            .filter(|&k| source_side[net.node_id(o, k)])
            .max()
            .ok_or_else(|| {
                SolverError::InvalidCut(format!("chain of `{u}` is entirely on the sink side"))
            })?;
        mapping.insert(u.clone(), net.chain_targets[o][deepest - 1].clone());
    }
    let hom = Homomorphism(mapping);
    validate_homomorphism(&net.g, &net.h, &hom)
        .map_err(SolverError::NonHomomorphismExtracted)?;
    Ok(hom)
}

// ---------------------------------------------------------------------------
// Orchestration.

/// Solve the minimum-cost homomorphism instance exactly.
///
/// Classifies the target first and refuses NP-complete targets with the
/// certificate. Source loops are priced out (a looped vertex may only map to
/// looped targets), then each source component is solved against each target
/// component — trying both source orientations for bigraph targets — and the
/// cheapest choice per component is kept.
pub fn solve(g: &Graph, costs: &CostTable, h: &Graph) -> Result<SolveResult, SolverError> {
    if !costs.matches(g, h) {
        return Err(SolverError::CostTableMismatch(
            "cost table was built for different graphs".into(),
        ));
    }
    let classification = classify(h).map_err(|e| SolverError::SelfCheck(e.to_string()))?;
    let orderings = match classification {
        Classification::Npc { certificate } => {
            return Ok(SolveResult::NpcTarget { certificate });
        }
        Classification::Poly { orderings } => orderings,
    };
    let eff = costs.with_loops_priced_out(g, h);
    let g_plain = g.without_loops();
    let h_components = h.connected_components();
    debug_assert_eq!(h_components.len(), orderings.len());

    let mut total: u64 = 0;
    let mut assignment = BTreeMap::new();
    for g_comp in g_plain.connected_components() {
        let mut best: Option<(u64, Homomorphism)> = None;
        for (h_comp, ord) in h_components.iter().zip(&orderings) {
            match ord {
                MinMaxOrdering::Reflexive { .. } => {
                    let run = run_network(&g_comp, &eff, h_comp, ord, None)?;
                    merge_best(&mut best, run);
                }
                MinMaxOrdering::Bigraph { white, black } => {
                    let Ok(bip) = g_comp.bipartition() else {
                        continue; // odd cycle in the source, no map into a bigraph
                    };
                    for orient in [bip.clone(), bip.swapped()] {
                        if (white.is_empty() && !orient.white.is_empty())
                            || (black.is_empty() && !orient.black.is_empty())
                        {
                            continue; // vertices assigned to an empty target side
                        }
                        let run = run_network(&g_comp, &eff, h_comp, ord, Some(&orient))?;
                        merge_best(&mut best, run);
                    }
                }
            }
        }
        match best {
            None => return Ok(SolveResult::NoHomomorphism),
            Some((cost, hom)) => {
                total = total
                    .checked_add(cost)
                    .ok_or(SolverError::Overflow)?;
                assignment.extend(hom.0);
            }
        }
    }

    let hom = Homomorphism(assignment);
    validate_homomorphism(g, h, &hom).map_err(SolverError::SelfCheck)?;
    let recomputed = costs
        .mapping_cost(&hom)
        .ok_or_else(|| SolverError::SelfCheck("optimal mapping crosses an infinite cost".into()))?;
    if recomputed != total {
        return Err(SolverError::SelfCheck(format!(
            "cut total {total} disagrees with recomputed cost {recomputed}"
        )));
    }
    Ok(SolveResult::Optimal {
        cost: total,
        assignment: hom,
    })
}

fn merge_best(best: &mut Option<(u64, Homomorphism)>, run: Option<(u64, Homomorphism)>) {
    if let Some((cost, hom)) = run {
        match best {
            Some((b, _)) if *b <= cost => {}
            _ => *best = Some((cost, hom)),
        }
    }
}

/// One (source component, target component, orientation) subproblem:
/// build, cut, extract. `None` when no finite cut exists.
fn run_network(
    g_comp: &Graph,
    costs: &CostTable,
    h_comp: &Graph,
    ord: &MinMaxOrdering,
    orient: Option<&Bipartition>,
) -> Result<Option<(u64, Homomorphism)>, SolverError> {
    let net = build_cut_network(g_comp, costs, h_comp, ord, orient)?;
    let (value, side) = min_cut(&net);
    if value >= net.sentinel() {
        return Ok(None);
    }
    let hom = extract_homomorphism(&net, &side)?;
    let cost = costs
        .mapping_cost(&hom)
        .ok_or_else(|| SolverError::SelfCheck("extracted mapping crosses an infinite cost".into()))?;
    if i64::try_from(cost) != Ok(value) {
        return Err(SolverError::SelfCheck(format!(
            "cut value {value} disagrees with extracted mapping cost {cost}"
        )));
    }
    Ok(Some((cost, hom)))
}
