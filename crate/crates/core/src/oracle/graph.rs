use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Exec};
use crate::perm::{avoiding_prefix_len, insert_max_raw, standardise_raw, PatternSpec, Permutation};
use crate::quotient::{ClassKey, Keyer};

use super::enumerate::avoiders_by_length_limited;

/// Largest number of vertices a full avoider graph may have.
pub const DEFAULT_VERTEX_CAP: usize = 5_000_000;

/// What happens to an insertion into a length-`N` vertex that trims nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRule {
    /// The edge is dropped.
    VersionOne,
    /// The edge goes to the length-`N` prefix instead.
    VersionTwo,
}

impl fmt::Display for EdgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRule::VersionOne => "v1",
            EdgeRule::VersionTwo => "v2",
        })
    }
}

impl FromStr for EdgeRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v1" | "version_one" | "one" => Ok(EdgeRule::VersionOne),
            "v2" | "version_two" | "two" => Ok(EdgeRule::VersionTwo),
            _ => Err(invalid(format!("unknown edge rule {s:?}"))),
        }
    }
}

/// Trimmed avoiders up to a cutoff with one edge per insertion position.
///
/// Vertices are sorted by length, then lexicographically, so indices are
/// deterministic and lookups are binary searches.
#[derive(Clone, Debug)]
pub struct AvoiderGraph {
    pub spec: PatternSpec,
    pub cutoff: usize,
    pub edge_rule: EdgeRule,
    pub vertices: Vec<Permutation>,
    pub graph: Digraph,
    /// Index of the trivial permutation, absent after pruning removed it.
    pub start: Option<usize>,
}

impl AvoiderGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        index_in(&self.vertices, p.values())
    }
}

fn graded_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn index_in(vertices: &[Permutation], p: &[u8]) -> Option<usize> {
    vertices
        .binary_search_by(|v| graded_cmp(v.values(), p))
        .ok()
}

/// Target of inserting a new maximum at `pos` into `p`, or `None` when the
/// edge rule drops it.
pub(crate) fn edge_target(
    p: &[u8],
    pos: usize,
    target: &[u8],
    cutoff: usize,
    rule: EdgeRule,
) -> Result<Option<Vec<u8>>> {
    let q = insert_max_raw(p, pos);
    let len = avoiding_prefix_len(&q, target);
    if len == 0 {
        return Err(Error::EmptyTrim(format!("{q:?}")));
    }
    if len <= cutoff {
        return Ok(Some(standardise_raw(&q[..len])));
    }
    Ok(match rule {
        EdgeRule::VersionOne => None,
        EdgeRule::VersionTwo => Some(standardise_raw(&q[..cutoff])),
    })
}

pub fn build_avoider_graph(
    exec: Exec,
    spec: &PatternSpec,
    cutoff: usize,
    rule: EdgeRule,
) -> Result<AvoiderGraph> {
    build_avoider_graph_capped(exec, spec, cutoff, rule, DEFAULT_VERTEX_CAP)
}

pub fn build_avoider_graph_capped(
    exec: Exec,
    spec: &PatternSpec,
    cutoff: usize,
    rule: EdgeRule,
    vertex_cap: usize,
) -> Result<AvoiderGraph> {
    if cutoff == 0 {
        return Err(invalid("cutoff must be at least 1"));
    }
    if cutoff >= crate::perm::MAX_LEN {
        return Err(invalid(
            "cutoff too large for the permutation representation",
        ));
    }
    let target = spec.trim_target().values();
    let levels = avoiders_by_length_limited(exec, spec.trim_target(), cutoff, vertex_cap)?;
    let vertices: Vec<Permutation> = levels
        .into_iter()
        .skip(1)
        .flatten()
        .map(Permutation::from_raw)
        .collect();

    let rows = map_range(exec, vertices.len(), |i| -> Result<Vec<(u32, u64)>> {
        let p = vertices[i].values();
        let mut row = Vec::with_capacity(p.len() + 1);
        for pos in 0..=p.len() {
            if let Some(t) = edge_target(p, pos, target, cutoff, rule)? {
                let j = index_in(&vertices, &t).ok_or_else(|| {
                    Error::Consistency(format!("edge target {t:?} is not a vertex"))
                })?;
                row.push((j as u32, 1));
            }
        }
        Ok(row)
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let start = index_in(&vertices, &[1]);
    Ok(AvoiderGraph {
        spec: spec.clone(),
        cutoff,
        edge_rule: rule,
        vertices,
        graph: Digraph::from_rows(rows),
        start,
    })
}

/// Hub around which [`prune_for_spectral`] keeps a component by default.
pub fn default_hub(spec: &PatternSpec) -> Option<Permutation> {
    match spec.pattern().to_string().as_str() {
        "2134" => Some("21".parse().unwrap()),
        _ => None,
    }
}

/// Outcome of pruning a graph to one strongly connected component.
#[derive(Clone, Debug, Default)]
pub struct PruneReport {
    /// Old indices of the kept vertices, in order.
    pub kept: Vec<usize>,
    pub dropped: Vec<Permutation>,
    pub has_loop: bool,
}

/// Keep the strongly connected component containing `hub`, or when no hub is
/// given the largest component reachable from the start.
pub fn prune_for_spectral(
    g: &AvoiderGraph,
    hub: Option<&Permutation>,
) -> Result<(AvoiderGraph, PruneReport)> {
    let hub_index = match hub {
        Some(h) => Some(
            g.index_of(h)
                .ok_or_else(|| invalid(format!("hub {h} is not a vertex")))?,
        ),
        None => None,
    };
    let kept = keep_component(&g.graph, hub_index, g.start)?;
    let sub = g.graph.induced(&kept);
    let has_loop = (0..sub.num_vertices()).any(|v| sub.has_loop(v));
    let mut keep_mask = vec![false; g.num_vertices()];
    for &v in &kept {
        keep_mask[v] = true;
    }
    let dropped = (0..g.num_vertices())
        .filter(|&v| !keep_mask[v])
        .map(|v| g.vertices[v].clone())
        .collect();
    let vertices: Vec<Permutation> = kept.iter().map(|&v| g.vertices[v].clone()).collect();
    let start = index_in(&vertices, &[1]);
    Ok((
        AvoiderGraph {
            spec: g.spec.clone(),
            cutoff: g.cutoff,
            edge_rule: g.edge_rule,
            vertices,
            graph: sub,
            start,
        },
        PruneReport {
            kept,
            dropped,
            has_loop,
        },
    ))
}

/// Members of the component to keep, in increasing index order.
pub(crate) fn keep_component(
    g: &Digraph,
    hub: Option<usize>,
    start: Option<usize>,
) -> Result<Vec<usize>> {
    let sccs = g.sccs();
    let component = match hub {
        Some(h) => sccs.component[h],
        None => {
            let start = start
                .ok_or_else(|| Error::DegenerateGraph("no hub given and no start vertex".into()))?;
            let sizes = sccs.sizes();
            // largest reachable component; ties go to the one met first
            let mut best: Option<usize> = None;
            for v in g.reachable_from(start) {
                let c = sccs.component[v];
                if best.is_none_or(|b| sizes[c] > sizes[b]) {
                    best = Some(c);
                }
            }
            best.unwrap()
        }
    };
    let members = sccs.members(component);
    let nontrivial = members.len() > 1 || g.has_loop(members[0]);
    if !nontrivial {
        return Err(Error::DegenerateGraph(
            "the selected component has no cycle".into(),
        ));
    }
    Ok(members)
}

/// Class key of every vertex.
pub fn class_statistics(g: &AvoiderGraph, keyer: Keyer) -> Vec<ClassKey> {
    g.vertices.iter().map(|p| keyer.key(p.values())).collect()
}
