//! Dinic max-flow on small integer-capacity networks.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct Dinic {
    graph: Vec<Vec<Arc>>,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
        }
    }

    /// Adds a directed arc and returns (node, index) for flow readback.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> (usize, usize) {
        let rev_from = self.graph[to].len();
        let idx = self.graph[from].len();
        self.graph[from].push(Arc { to, cap, rev: rev_from });
        self.graph[to].push(Arc {
            to: from,
            cap: 0,
            rev: idx,
        });
        (from, idx)
    }

    /// Flow currently on the arc identified by `add_arc`'s handle.
    pub fn flow_on(&self, handle: (usize, usize), original_cap: i64) -> i64 {
        original_cap - self.graph[handle.0][handle.1].cap
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [i32]) -> bool {
        level.fill(-1);
        level[s] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for arc in &self.graph[u] {
                if arc.cap > 0 && level[arc.to] == -1 {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level[t] != -1
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.graph[u].len() {
            let i = it[u];
            let (to, cap) = {
                let arc = &self.graph[u][i];
                (arc.to, arc.cap)
            };
            if cap > 0 && level[to] == level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap), level, it);
                if got > 0 {
                    let rev = self.graph[u][i].rev;
                    self.graph[u][i].cap -= got;
                    self.graph[to][rev].cap += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.graph.len();
        let mut total = 0;
        let mut level = vec![-1; n];
        while self.bfs(s, t, &mut level) {
            let mut it = vec![0usize; n];
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network() {
        let mut d = Dinic::new(4);
        d.add_arc(0, 1, 10);
        d.add_arc(0, 2, 5);
        d.add_arc(1, 3, 10);
        d.add_arc(2, 3, 5);
        assert_eq!(d.max_flow(0, 3), 15);
    }

    #[test]
    fn disconnected_sink() {
        let mut d = Dinic::new(3);
        d.add_arc(0, 1, 7);
        assert_eq!(d.max_flow(0, 2), 0);
    }

    #[test]
    fn unit_capacities_and_readback() {
        let mut d = Dinic::new(4);
        let a = d.add_arc(0, 1, 1);
        let b = d.add_arc(0, 2, 1);
        d.add_arc(1, 3, 1);
        d.add_arc(2, 3, 1);
        assert_eq!(d.max_flow(0, 3), 2);
        assert_eq!(d.flow_on(a, 1), 1);
        assert_eq!(d.flow_on(b, 1), 1);
    }
}
