//! Dinic maximum flow, used to count edge-disjoint open paths.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    rev: usize,
    cap: u32,
}

/// Flow network with integer capacities.
#[derive(Debug, Clone)]
pub struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

pub const INFINITE_CAPACITY: u32 = u32::MAX / 4;

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            cursor: vec![0; n],
        }
    }

    /// Directed arc `from -> to` with capacity `cap`.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u32) {
        self.add_pair(from, to, cap, 0);
    }

    /// Undirected edge: capacity `cap` in each direction.
    pub fn add_undirected(&mut self, a: usize, b: usize, cap: u32) {
        self.add_pair(a, b, cap, cap);
    }

    fn add_pair(&mut self, a: usize, b: usize, cap_ab: u32, cap_ba: u32) {
        let ia = self.graph[a].len();
        let ib = self.graph[b].len() + usize::from(a == b);
        self.graph[a].push(Arc {
            to: b,
            rev: ib,
            cap: cap_ab,
        });
        self.graph[b].push(Arc {
            to: a,
            rev: ia,
            cap: cap_ba,
        });
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.fill(u32::MAX);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.graph[u] {
                if arc.cap > 0 && self.level[arc.to] == u32::MAX {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[sink] != u32::MAX
    }

    fn augment(&mut self, u: usize, sink: usize, pushed: u32) -> u32 {
        if u == sink {
            return pushed;
        }
        while self.cursor[u] < self.graph[u].len() {
            let Arc { to, rev, cap } = self.graph[u][self.cursor[u]];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.augment(to, sink, pushed.min(cap));
                if got > 0 {
                    let i = self.cursor[u];
                    self.graph[u][i].cap -= got;
                    self.graph[to][rev].cap += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Maximum flow from `source` to `sink`, stopping once `limit` is reached.
    pub fn max_flow(&mut self, source: usize, sink: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit && self.bfs(source, sink) {
            self.cursor.fill(0);
            loop {
                let got = self.augment(source, sink, limit - flow);
                if got == 0 {
                    break;
                }
                flow += got;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }
}
