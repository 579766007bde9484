//! Integral maximum flow (Dinic's blocking-flow method).

use std::collections::VecDeque;

use crate::matrix::QueueMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

/// A directed network with non-negative integer capacities.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

/// Result of [`max_flow`]: the flow value and the flow carried by each arc,
/// indexed like [`FlowNetwork::arcs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    pub arc_flow: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes, "terminal out of range");
        Self {
            nodes,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> usize {
        assert!(from < self.nodes && to < self.nodes, "arc endpoint out of range");
        self.arcs.push(Arc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Network whose integral flows of value `beta * n` are exactly the
    /// `beta`-envelopes of `q`.
    ///
    /// Node layout: source `0`, inputs `1..=n`, outputs `n+1..=2n`, sink
    /// `2n+1`. Arcs are emitted as source→input (capacity `beta`), then
    /// input→output in row-major order (capacity `q_ij`, zero cells skipped),
    /// then output→sink (capacity `beta`).
    pub fn for_envelope(q: &QueueMatrix, beta: u64) -> EnvelopeNetwork {
        let n = q.n();
        let mut net = FlowNetwork::new(2 * n + 2, 0, 2 * n + 1);
        for i in 0..n {
            net.add_arc(0, 1 + i, beta);
        }
        let mut cell_arcs = Vec::new();
        for ((i, j), v) in q.iter_cells() {
            if v > 0 {
                let idx = net.add_arc(1 + i, 1 + n + j, v);
                cell_arcs.push((i, j, idx));
            }
        }
        for j in 0..n {
            net.add_arc(1 + n + j, 2 * n + 1, beta);
        }
        EnvelopeNetwork {
            n,
            network: net,
            cell_arcs,
        }
    }
}

/// The flow network for an envelope query, with the arc index of each
/// positive cell so flows can be read back as a matrix.
#[derive(Debug, Clone)]
pub struct EnvelopeNetwork {
    pub n: usize,
    pub network: FlowNetwork,
    pub cell_arcs: Vec<(usize, usize, usize)>,
}

impl EnvelopeNetwork {
    pub fn cell_flows(&self, flow: &MaxFlow) -> QueueMatrix {
        let mut g = QueueMatrix::zeros(self.n);
        for &(i, j, idx) in &self.cell_arcs {
            g[(i, j)] = flow.arc_flow[idx];
        }
        g
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn build(net: &FlowNetwork) -> Self {
        let m = net.arcs.len();
        let mut head = Vec::with_capacity(2 * m);
        let mut cap = Vec::with_capacity(2 * m);
        let mut adj = vec![Vec::new(); net.nodes];
        for a in &net.arcs {
            adj[a.from].push(head.len());
            head.push(a.to);
            cap.push(a.capacity);
            adj[a.to].push(head.len());
            head.push(a.from);
            cap.push(0);
        }
        Self { head, cap, adj }
    }

    fn levels(&self, s: usize, t: usize, level: &mut [i64]) -> bool {
        level.iter_mut().for_each(|l| *l = -1);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if self.cap[e] > 0 && level[w] < 0 {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level[t] >= 0
    }

    fn augment(&mut self, v: usize, t: usize, limit: u64, level: &[i64], next: &mut [usize]) -> u64 {
        if v == t {
            return limit;
        }
        while next[v] < self.adj[v].len() {
            let e = self.adj[v][next[v]];
            let w = self.head[e];
            if self.cap[e] > 0 && level[w] == level[v] + 1 {
                let pushed = self.augment(w, t, limit.min(self.cap[e]), level, next);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[v] += 1;
        }
        0
    }
}

/// Computes a maximum flow. The result is integral because every capacity is.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let mut res = Residual::build(net);
    let (s, t) = (net.source, net.sink);
    let mut value = 0u64;
    if s != t {
        let mut level = vec![-1i64; net.nodes];
        let mut next = vec![0usize; net.nodes];
        while res.levels(s, t, &mut level) {
            next.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = res.augment(s, t, u64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
    }
    let arc_flow = net
        .arcs
        .iter()
        .enumerate()
        .map(|(k, a)| a.capacity - res.cap[2 * k])
        .collect();
    MaxFlow { value, arc_flow }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_flow(net: &FlowNetwork, flow: &MaxFlow) {
        let mut balance = vec![0i128; net.nodes()];
        for (a, &f) in net.arcs().iter().zip(&flow.arc_flow) {
            assert!(f <= a.capacity);
            balance[a.from] -= f as i128;
            balance[a.to] += f as i128;
        }
        for (v, &b) in balance.iter().enumerate() {
            if v == net.source() {
                assert_eq!(b, -(flow.value as i128));
            } else if v == net.sink() {
                assert_eq!(b, flow.value as i128);
            } else {
                assert_eq!(b, 0, "conservation at node {v}");
            }
        }
    }

    #[test]
    fn envelope_network_values() {
        let ones = QueueMatrix::filled(2, 1);
        for (beta, expected) in [(1, 2), (2, 4), (0, 0)] {
            let env = FlowNetwork::for_envelope(&ones, beta);
            let flow = max_flow(&env.network);
            assert_eq!(flow.value, expected, "beta = {beta}");
            check_flow(&env.network, &flow);
        }
    }

    #[test]
    fn brute_force_two_by_two_beta_two() {
        // Enumerate every integral assignment on the 8 arcs and keep the
        // best feasible one.
        let env = FlowNetwork::for_envelope(&QueueMatrix::filled(2, 1), 2);
        let arcs = env.network.arcs();
        assert_eq!(arcs.len(), 8);
        let mut best = 0;
        let mut assignment = vec![0u64; arcs.len()];
        loop {
            let mut balance = vec![0i64; env.network.nodes()];
            for (a, &f) in arcs.iter().zip(&assignment) {
                balance[a.from] -= f as i64;
                balance[a.to] += f as i64;
            }
            let inner_ok = (1..env.network.nodes() - 1).all(|v| balance[v] == 0);
            if inner_ok {
                best = best.max(balance[env.network.sink()]);
            }
            // odometer increment bounded by capacities
            let mut k = 0;
            while k < arcs.len() {
                if assignment[k] < arcs[k].capacity {
                    assignment[k] += 1;
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == arcs.len() {
                break;
            }
        }
        assert_eq!(best, 4);
        assert_eq!(max_flow(&env.network).value, 4);
    }

    #[test]
    fn general_network() {
        let mut net = FlowNetwork::new(6, 0, 5);
        for (a, b, c) in [
            (0, 1, 10),
            (0, 2, 10),
            (1, 3, 4),
            (1, 4, 8),
            (2, 4, 9),
            (3, 5, 10),
            (4, 3, 6),
            (4, 5, 10),
        ] {
            net.add_arc(a, b, c);
        }
        let flow = max_flow(&net);
        assert_eq!(flow.value, 19);
        check_flow(&net, &flow);
    }

    #[test]
    fn empty_network_has_zero_flow() {
        let net = FlowNetwork::new(2, 0, 1);
        assert_eq!(max_flow(&net).value, 0);
    }
}
