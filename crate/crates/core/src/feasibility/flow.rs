//! Dinic's algorithm on integer capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u64,
    flow: u64,
}

/// Directed network with paired residual arcs. Arc ids returned by
/// [`FlowNetwork::add_arc`] address the forward arc.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(num_vertices: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); num_vertices],
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            flow: 0,
        });
        self.adjacency[from].push(id);
        self.adjacency[to].push(id + 1);
        id
    }

    pub fn flow_on(&self, arc: usize) -> u64 {
        self.arcs[arc].flow
    }

    pub fn capacity_of(&self, arc: usize) -> u64 {
        self.arcs[arc].cap
    }

    fn residual(&self, arc: usize) -> u64 {
        let a = &self.arcs[arc];
        if arc.is_multiple_of(2) {
            a.cap - a.flow
        } else {
            // reverse arc: can cancel the paired forward flow
            self.arcs[arc ^ 1].flow
        }
    }

    fn push(&mut self, arc: usize, amount: u64) {
        if arc.is_multiple_of(2) {
            self.arcs[arc].flow += amount;
        } else {
            self.arcs[arc ^ 1].flow -= amount;
        }
    }

    /// Maximum flow value from `source` to `sink`. Repeated calls continue
    /// from the current flow.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let n = self.num_vertices();
        let mut total = 0;
        loop {
            let level = self.levels(source);
            if level[sink] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = self.augment(source, sink, u64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn levels(&self, source: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.num_vertices()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adjacency[v] {
                let to = self.arcs[arc].to;
                if level[to] == usize::MAX && self.residual(arc) > 0 {
                    level[to] = level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        level
    }

    fn augment(
        &mut self,
        v: usize,
        sink: usize,
        limit: u64,
        level: &[usize],
        next: &mut [usize],
    ) -> u64 {
        if v == sink {
            return limit;
        }
        while next[v] < self.adjacency[v].len() {
            let arc = self.adjacency[v][next[v]];
            let to = self.arcs[arc].to;
            let res = self.residual(arc);
            if res > 0 && level[to] == level[v] + 1 {
                let pushed = self.augment(to, sink, limit.min(res), level, next);
                if pushed > 0 {
                    self.push(arc, pushed);
                    return pushed;
                }
            }
            next[v] += 1;
        }
        0
    }

    /// Vertices reachable from `source` in the residual network.
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        self.levels(source)
            .into_iter()
            .map(|l| l != usize::MAX)
            .collect()
    }
}
