//! Compressed sparse row multigraph and strongly connected components.

/// Directed multigraph with integer edge multiplicities, stored row-wise.
///
/// Each row keeps its targets sorted and distinct; parallel edges are folded
/// into the multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    mults: Vec<u64>,
}

impl Digraph {
    /// Build from per-vertex lists of `(target, multiplicity)`; duplicates are
    /// merged and zero multiplicities discarded.
    pub fn from_rows(rows: Vec<Vec<(u32, u64)>>) -> Digraph {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::new();
        let mut mults = Vec::new();
        offsets.push(0);
        let n = rows.len();
        for mut row in rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut last: Option<u32> = None;
            for (t, m) in row {
                assert!((t as usize) < n, "edge target {t} out of range");
                if m == 0 {
                    continue;
                }
                if last == Some(t) {
                    *mults.last_mut().unwrap() += m;
                } else {
                    targets.push(t);
                    mults.push(m);
                    last = Some(t);
                }
            }
            offsets.push(targets.len());
        }
        Digraph {
            offsets,
            targets,
            mults,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of distinct `(source, target)` pairs.
    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    /// Sum of all multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.mults.iter().sum()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.mults[range])
            .map(|(&t, &m)| (t as usize, m))
    }

    pub fn out_multiplicity(&self, v: usize) -> u64 {
        self.mults[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .sum()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        let row = &self.targets[self.offsets[u]..self.offsets[u + 1]];
        match row.binary_search(&(v as u32)) {
            Ok(i) => self.mults[self.offsets[u] + i],
            Err(_) => 0,
        }
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.multiplicity(v, v) > 0
    }

    pub fn transpose(&self) -> Digraph {
        let n = self.num_vertices();
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
        for u in 0..n {
            for (v, m) in self.out_edges(u) {
                rows[v].push((u as u32, m));
            }
        }
        Digraph::from_rows(rows)
    }

    /// Subgraph induced by `keep` (old indices, in the new order).
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut new_index = vec![u32::MAX; self.num_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i as u32;
        }
        let rows = keep
            .iter()
            .map(|&u| {
                self.out_edges(u)
                    .filter(|&(v, _)| new_index[v] != u32::MAX)
                    .map(|(v, m)| (new_index[v], m))
                    .collect()
            })
            .collect();
        Digraph::from_rows(rows)
    }

    /// Vertices reachable from `start`, in increasing index order.
    pub fn reachable_from(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.out_edges(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    pub fn sccs(&self) -> Sccs {
        tarjan(self)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.num_vertices();
        n > 0 && self.sccs().count == 1
    }
}

/// Component label of every vertex. Labels are in reverse topological order of
/// the condensation, as produced by Tarjan's algorithm.
#[derive(Clone, Debug)]
pub struct Sccs {
    pub component: Vec<usize>,
    pub count: usize,
}

impl Sccs {
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.component.len())
            .filter(|&v| self.component[v] == c)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &c in &self.component {
            sizes[c] += 1;
        }
        sizes
    }
}

fn tarjan(g: &Digraph) -> Sccs {
    let n = g.num_vertices();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    // explicit call stack of (vertex, position in its edge row)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, g.offsets[root]));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos < g.offsets[v + 1] {
                let w = g.targets[*pos] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, g.offsets[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Sccs { component, count }
}
