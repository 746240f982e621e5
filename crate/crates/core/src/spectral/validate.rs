use crate::digraph::Digraph;

/// Perron-Frobenius hypotheses of a graph around one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfReport {
    /// The whole graph is one strongly connected component.
    pub strongly_connected: bool,
    /// The selected component has a loop, so it is aperiodic.
    pub has_loop: bool,
    /// Vertices of the selected component, in increasing order.
    pub component: Vec<usize>,
    /// Vertices outside it.
    pub dropped: Vec<usize>,
}

impl PfReport {
    /// The selected component is irreducible and aperiodic.
    pub fn component_ok(&self) -> bool {
        self.has_loop && !self.component.is_empty()
    }
}

/// Select the component of `hub`, else the largest one reachable from
/// `start`, else the largest one overall, and report on it.
pub fn validate_pf(g: &Digraph, hub: Option<usize>, start: Option<usize>) -> PfReport {
    let n = g.num_vertices();
    if n == 0 {
        return PfReport {
            strongly_connected: false,
            has_loop: false,
            component: Vec::new(),
            dropped: Vec::new(),
        };
    }
    let sccs = g.sccs();
    let sizes = sccs.sizes();
    let candidates: Vec<usize> = match (hub, start) {
        (Some(h), _) => vec![h],
        (None, Some(s)) => g.reachable_from(s),
        (None, None) => (0..n).collect(),
    };
    let mut best = sccs.component[candidates[0]];
    for v in candidates {
        let c = sccs.component[v];
        if sizes[c] > sizes[best] {
            best = c;
        }
    }
    let component = sccs.members(best);
    let mut inside = vec![false; n];
    for &v in &component {
        inside[v] = true;
    }
    PfReport {
        strongly_connected: sccs.count == 1,
        has_loop: component.iter().any(|&v| g.has_loop(v)),
        dropped: (0..n).filter(|&v| !inside[v]).collect(),
        component,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disjoint_loops() {
        let g = Digraph::from_rows(vec![vec![(0, 1)], vec![(1, 1)]]);
        let r = validate_pf(&g, None, None);
        assert!(!r.strongly_connected);
        assert!(r.has_loop);
        assert_eq!(r.dropped.len(), 1);
    }

    #[test]
    fn cycle_without_loop() {
        let g = Digraph::from_rows(vec![vec![(1, 1)], vec![(0, 1)]]);
        let r = validate_pf(&g, Some(0), None);
        assert!(r.strongly_connected);
        assert!(!r.has_loop);
        assert!(!r.component_ok());
    }
}
