//! Dinic's maximum-flow algorithm on integral capacities, with the residual
//! source side exposed for minimum-cut extraction. Edges are explored in
//! insertion order, so for a fixed build order the cut is deterministic.

/// Residual-graph representation: edge `2k` is a forward edge, `2k + 1` its
/// reverse. `cap` always holds the remaining residual capacity.
pub struct FlowNetwork {
    to: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: i64) -> usize {
        assert!(capacity >= 0, "negative capacity");
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(capacity);
        self.adj[from].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow pushed through forward edge `id` so far.
    pub fn flow(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        assert_ne!(s, t);
        let n = self.node_count();
        let mut total: i64 = 0;
        let mut level = vec![usize::MAX; n];
        let mut iter = vec![0usize; n];
        loop {
            // BFS level graph over positive residuals.
            level.fill(usize::MAX);
            level[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &e in &self.adj[v] {
                    let w = self.to[e];
                    if self.cap[e] > 0 && level[w] == usize::MAX {
                        level[w] = level[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: i64, level: &[usize], iter: &mut [usize]) -> i64 {
        if v == t {
            return limit;
        }
        while iter[v] < self.adj[v].len() {
            let e = self.adj[v][iter[v]];
            let w = self.to[e];
            if self.cap[e] > 0 && level[w] == level[v] + 1 {
                let pushed = self.dfs(w, t, limit.min(self.cap[e]), level, iter);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            iter[v] += 1;
        }
        0
    }

    /// Nodes reachable from `s` in the residual graph. After `max_flow`,
    /// this is the source side of a minimum cut.
    pub fn residual_source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}
