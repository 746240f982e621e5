use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Exec};
use crate::oracle::{avoiders_by_length, AvoiderGraph, EdgeRule};
use crate::perm::PatternSpec;

use super::key::{ClassKey, Keyer, QuotientKind};

/// Graph on classes of vertices with exact nonnegative edge weights.
///
/// Keys are sorted, rows are sorted by target, and zero weights are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientGraph {
    pub kind: QuotientKind,
    pub cutoff: usize,
    pub keys: Vec<ClassKey>,
    pub rows: Vec<Vec<(u32, BigRational)>>,
    pub start: Option<usize>,
}

impl QuotientGraph {
    /// Assemble from weighted edges between keys. Keys are sorted and parallel
    /// edges summed.
    pub fn from_edges(
        kind: QuotientKind,
        cutoff: usize,
        mut keys: Vec<ClassKey>,
        edges: impl IntoIterator<Item = (ClassKey, ClassKey, BigRational)>,
        start: Option<ClassKey>,
    ) -> Result<QuotientGraph> {
        keys.sort_unstable();
        keys.dedup();
        let index: HashMap<ClassKey, usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut rows: Vec<BTreeMap<u32, BigRational>> = vec![BTreeMap::new(); keys.len()];
        for (a, b, w) in edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::Consistency(format!(
                    "edge {a} -> {b} between unknown classes"
                )));
            };
            if w < BigRational::zero() {
                return Err(invalid(format!("negative weight on {a} -> {b}")));
            }
            *rows[i].entry(j as u32).or_insert_with(BigRational::zero) += w;
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, w)| !w.is_zero()).collect())
            .collect();
        let start = match start {
            Some(k) => Some(
                *index
                    .get(&k)
                    .ok_or_else(|| invalid(format!("start class {k} is not a class")))?,
            ),
            None => None,
        };
        Ok(QuotientGraph {
            kind,
            cutoff,
            keys,
            rows,
            start,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.keys.len()
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, key: &ClassKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    pub fn weight(&self, from: &ClassKey, to: &ClassKey) -> Option<&BigRational> {
        let (i, j) = (self.index_of(from)?, self.index_of(to)? as u32);
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |e| e.0)
            .ok()
            .map(|p| &row[p].1)
    }

    /// Edge structure with unit multiplicities.
    pub fn structure(&self) -> Digraph {
        Digraph::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(|(j, _)| (*j, 1)).collect())
                .collect(),
        )
    }

    /// Keep the strongly connected component of `hub`, or the largest one
    /// reachable from the start. Returns the pruned graph and the dropped keys.
    pub fn pruned(&self, hub: Option<&ClassKey>) -> Result<(QuotientGraph, Vec<ClassKey>)> {
        let hub_index = match hub {
            Some(h) => Some(
                self.index_of(h)
                    .ok_or_else(|| invalid(format!("hub {h} is not a class")))?,
            ),
            None => None,
        };
        let kept = crate::oracle::graph_keep_component(&self.structure(), hub_index, self.start)?;
        let mut new_index = vec![u32::MAX; self.num_classes()];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i as u32;
        }
        let rows = kept
            .iter()
            .map(|&u| {
                self.rows[u]
                    .iter()
                    .filter(|(j, _)| new_index[*j as usize] != u32::MAX)
                    .map(|(j, w)| (new_index[*j as usize], w.clone()))
                    .collect()
            })
            .collect();
        let dropped = (0..self.num_classes())
            .filter(|&v| new_index[v] == u32::MAX)
            .map(|v| self.keys[v])
            .collect();
        let start = self
            .start
            .filter(|&s| new_index[s] != u32::MAX)
            .map(|s| new_index[s] as usize)
            .or_else(|| hub_index.map(|h| new_index[h] as usize));
        Ok((
            QuotientGraph {
                kind: self.kind,
                cutoff: self.cutoff,
                keys: kept.iter().map(|&v| self.keys[v]).collect(),
                rows,
                start,
            },
            dropped,
        ))
    }
}

/// How member edges become class edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregation {
    /// Every member must have the same multiset of target classes; the class
    /// edge weight is that multiplicity.
    Lossless,
    /// The class edge weight is the number of member edges divided by the
    /// class size.
    Averaged,
}

#[derive(Clone, Debug, Default)]
struct ClassAgg {
    size: u64,
    counts: BTreeMap<ClassKey, u64>,
    signature: Option<Vec<ClassKey>>,
}

#[derive(Default)]
struct Aggregator {
    classes: BTreeMap<ClassKey, ClassAgg>,
}

impl Aggregator {
    fn add(&mut self, mode: Aggregation, key: ClassKey, mut targets: Vec<ClassKey>) -> Result<()> {
        targets.sort_unstable();
        let agg = self.classes.entry(key).or_default();
        agg.size += 1;
        for t in &targets {
            *agg.counts.entry(*t).or_insert(0) += 1;
        }
        if mode == Aggregation::Lossless {
            match &agg.signature {
                None => agg.signature = Some(targets),
                Some(sig) if *sig == targets => {}
                Some(_) => return Err(non_uniform(&key)),
            }
        }
        Ok(())
    }

    fn merge(&mut self, mode: Aggregation, other: Aggregator) -> Result<()> {
        for (key, agg) in other.classes {
            match self.classes.get_mut(&key) {
                None => {
                    self.classes.insert(key, agg);
                }
                Some(mine) => {
                    if mode == Aggregation::Lossless && mine.signature != agg.signature {
                        return Err(non_uniform(&key));
                    }
                    mine.size += agg.size;
                    for (t, c) in agg.counts {
                        *mine.counts.entry(t).or_insert(0) += c;
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(
        self,
        mode: Aggregation,
        kind: QuotientKind,
        cutoff: usize,
        start: Option<ClassKey>,
    ) -> Result<QuotientGraph> {
        let keys: Vec<ClassKey> = self.classes.keys().copied().collect();
        let mut edges = Vec::new();
        for (key, agg) in &self.classes {
            for (t, &c) in &agg.counts {
                let w = match mode {
                    Aggregation::Lossless => BigRational::from_integer(BigInt::from(c / agg.size)),
                    Aggregation::Averaged => {
                        BigRational::new(BigInt::from(c), BigInt::from(agg.size))
                    }
                };
                if !self.classes.contains_key(t) {
                    return Err(Error::Consistency(format!(
                        "target class {t} has no members"
                    )));
                }
                edges.push((*key, *t, w));
            }
        }
        QuotientGraph::from_edges(kind, cutoff, keys, edges, start)
    }
}

fn non_uniform(key: &ClassKey) -> Error {
    Error::Consistency(format!(
        "members of class {key} reach different multisets of classes"
    ))
}

/// Quotient of an explicit graph by `keyer`.
pub fn aggregate_graph(
    g: &AvoiderGraph,
    kind: QuotientKind,
    keyer: Keyer,
    mode: Aggregation,
) -> Result<QuotientGraph> {
    let keys: Vec<ClassKey> = g.vertices.iter().map(|p| keyer.key(p.values())).collect();
    let mut agg = Aggregator::default();
    for (u, key) in keys.iter().enumerate() {
        let mut targets = Vec::new();
        for (v, m) in g.graph.out_edges(u) {
            for _ in 0..m {
                targets.push(keys[v]);
            }
        }
        agg.add(mode, *key, targets)?;
    }
    let start = g.start.map(|s| keys[s]);
    agg.finish(mode, kind, g.cutoff, start)
}

/// Quotient of the full avoider graph without materialising it: each vertex
/// is generated, its out-edges are keyed directly, and only per-class
/// aggregates are kept.
pub fn aggregate_streaming(
    exec: Exec,
    spec: &PatternSpec,
    cutoff: usize,
    rule: EdgeRule,
    kind: QuotientKind,
    mode: Aggregation,
) -> Result<QuotientGraph> {
    if cutoff == 0 || cutoff >= crate::perm::MAX_LEN {
        return Err(invalid(format!("cutoff {cutoff} out of range")));
    }
    let keyer = kind.keyer();
    let target = spec.trim_target().values();
    let levels = avoiders_by_length(exec, spec.trim_target(), cutoff);
    let mut total = Aggregator::default();
    const CHUNK: usize = 8192;
    for level in levels.iter().skip(1) {
        let parts = map_range(
            exec,
            level.len().div_ceil(CHUNK),
            |c| -> Result<Aggregator> {
                let mut agg = Aggregator::default();
                for p in &level[c * CHUNK..((c + 1) * CHUNK).min(level.len())] {
                    let mut targets = Vec::with_capacity(p.len() + 1);
                    for pos in 0..=p.len() {
                        if let Some(t) =
                            crate::oracle::edge_target_of(p, pos, target, cutoff, rule)?
                        {
                            targets.push(keyer.key(&t));
                        }
                    }
                    agg.add(mode, keyer.key(p), targets)?;
                }
                Ok(agg)
            },
        );
        for part in parts {
            total.merge(mode, part?)?;
        }
    }
    let start = Some(keyer.key(&[1]));
    total.finish(mode, kind, cutoff, start)
}

/// Weights as `f64`.
pub fn rows_f64(q: &QuotientGraph) -> Vec<Vec<(u32, f64)>> {
    q.rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(j, w)| (*j, crate::numeric::rational_f64(w)))
                .collect()
        })
        .collect()
}
