//! Undirected simple graphs with sorted adjacency lists, degree-based
//! estimators, and the exhaustive arboricity oracles used by tests.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An immutable undirected simple graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted ascending so that iteration order, greedy
/// matching, and every seeded experiment downstream are reproducible. All
/// operations are pure reads; sharing a `Graph` across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges, and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge incident to vertex {v}"
                )));
            }
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    /// Sorted neighbors of `v`. Panics on an out-of-range id; use
    /// [`Graph::degree`] for a checked accessor.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// All edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True iff the edge `(u, v)` exists.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    fn locally_superior_unchecked(&self, v: usize) -> bool {
        let deg = self.adj[v].len();
        self.adj[v].iter().any(|&w| deg >= self.adj[w].len())
    }

    /// A vertex is *locally superior* when it has at least one neighbor of
    /// equal or smaller degree. Isolated vertices never qualify: the
    /// quantifier over neighbors is vacuous.
    pub fn is_locally_superior(&self, v: usize) -> Result<bool> {
        self.check_vertex(v)?;
        Ok(self.locally_superior_unchecked(v))
    }

    /// `ell(G)`: the number of locally superior vertices.
    pub fn locally_superior_count(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&v| self.locally_superior_unchecked(v))
            .count()
    }

    /// The degree-based planar estimator `A'(G) = sum_u min{deg(u)/2,
    /// 4 - deg(u)/2}`, computed exactly in half-units.
    ///
    /// The formula is implemented verbatim: vertices of degree above 8
    /// contribute negative terms, which are summed as-is rather than
    /// clamped.
    pub fn a_prime(&self) -> HalfUnits {
        self.adj
            .iter()
            .map(|list| {
                let deg = list.len() as i64;
                HalfUnits(deg.min(8 - deg))
            })
            .sum()
    }

    /// Exhaustive Nash-Williams density: the maximum over induced subgraphs
    /// `S` with `|S| >= 2` of `ceil(|E(S)| / (|S| - 1))`, which equals the
    /// exact arboricity. Scans all vertex subsets, so it is capped at 20
    /// vertices and intended for test use only.
    pub fn nash_williams_density(&self, max_subset_size: usize) -> Result<usize> {
        let n = self.vertex_count();
        if max_subset_size > 20 {
            return Err(Error::Capability(format!(
                "nash_williams_density subset cap {max_subset_size} exceeds 20"
            )));
        }
        if n > max_subset_size {
            return Err(Error::Capability(format!(
                "graph on {n} vertices exceeds exhaustive density cap {max_subset_size}"
            )));
        }
        let masks: Vec<u32> = self
            .adj
            .iter()
            .map(|list| list.iter().fold(0u32, |m, &w| m | (1 << w)))
            .collect();
        let mut best = 0usize;
        for subset in 1u32..(1 << n) {
            let size = subset.count_ones() as usize;
            if size < 2 {
                continue;
            }
            let mut twice_edges = 0usize;
            let mut bits = subset;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                twice_edges += (masks[v] & subset).count_ones() as usize;
            }
            let edges = twice_edges / 2;
            best = best.max(edges.div_ceil(size - 1));
        }
        Ok(best)
    }

    /// Graph degeneracy via iterative minimum-degree peeling. An upper
    /// bound on arboricity, cheap enough for generated graphs of any size.
    pub fn degeneracy(&self) -> usize {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
        for (v, &d) in deg.iter().enumerate() {
            buckets[d].push(v);
        }
        let mut removed = vec![false; n];
        let mut degeneracy = 0;
        let mut cursor = 0;
        for _ in 0..n {
            while cursor > 0 && !buckets[cursor - 1].is_empty() {
                cursor -= 1;
            }
            while buckets[cursor].is_empty() {
                cursor += 1;
            }
            let v = loop {
                match buckets[cursor].pop() {
                    Some(v) if !removed[v] && deg[v] == cursor => break v,
                    Some(_) => continue,
                    None => {
                        cursor += 1;
                        continue;
                    }
                }
            };
            removed[v] = true;
            degeneracy = degeneracy.max(cursor);
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    buckets[deg[w]].push(w);
                }
            }
        }
        degeneracy
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }

    /// Parses the edge-list text format: optional `#` comment lines, a
    /// header line `n m`, then `m` lines `u v` with `u < v`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or_else(|| Error::GraphFormat {
            line: 0,
            reason: "missing `n m` header".into(),
        })?;
        let mut parts = header.split_whitespace();
        let n: usize = parse_field(parts.next(), line_no, "vertex count")?;
        let m: usize = parse_field(parts.next(), line_no, "edge count")?;
        if parts.next().is_some() {
            return Err(Error::GraphFormat {
                line: line_no,
                reason: "header must be exactly `n m`".into(),
            });
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, line) = lines.next().ok_or_else(|| Error::GraphFormat {
                line: 0,
                reason: format!("expected {m} edge lines, got {}", edges.len()),
            })?;
            let mut parts = line.split_whitespace();
            let u: usize = parse_field(parts.next(), line_no, "edge endpoint")?;
            let v: usize = parse_field(parts.next(), line_no, "edge endpoint")?;
            if parts.next().is_some() {
                return Err(Error::GraphFormat {
                    line: line_no,
                    reason: "edge line must be exactly `u v`".into(),
                });
            }
            if u >= v {
                return Err(Error::GraphFormat {
                    line: line_no,
                    reason: format!("edge ({u}, {v}) violates u < v"),
                });
            }
            edges.push((u, v));
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::GraphFormat {
                line: line_no,
                reason: "trailing content after declared edges".into(),
            });
        }
        Graph::from_edges(n, &edges).map_err(|e| match e {
            Error::VertexOutOfRange { vertex, n } => Error::GraphFormat {
                line: 0,
                reason: format!("vertex id {vertex} out of range for n = {n}"),
            },
            Error::InvalidInput(reason) => Error::GraphFormat { line: 0, reason },
            other => other,
        })
    }

    /// Serializes to the edge-list text format, optionally preceded by `#`
    /// comment lines (generator provenance headers).
    pub fn to_edge_list(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!("{} {}\n", self.vertex_count(), self.edge_count));
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::GraphFormat {
        line,
        reason: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| Error::GraphFormat {
        line,
        reason: format!("malformed {what}"),
    })
}

/// An exact rational that is always a multiple of 1/2, stored as an integer
/// count of half-units. `A'(G)` and the protocol's per-player partial sums
/// use this so that protocol/offline agreement is a strict integer equality,
/// never a float comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct HalfUnits(pub i64);

impl HalfUnits {
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// The value `k/1` as half-units.
    pub fn from_int(k: i64) -> Self {
        HalfUnits(2 * k)
    }
}

impl Add for HalfUnits {
    type Output = HalfUnits;
    fn add(self, rhs: HalfUnits) -> HalfUnits {
        HalfUnits(self.0 + rhs.0)
    }
}

impl AddAssign for HalfUnits {
    fn add_assign(&mut self, rhs: HalfUnits) {
        self.0 += rhs.0;
    }
}

impl Sum for HalfUnits {
    fn sum<I: Iterator<Item = HalfUnits>>(iter: I) -> HalfUnits {
        iter.fold(HalfUnits(0), |a, b| a + b)
    }
}

impl fmt::Display for HalfUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let mag = self.0.unsigned_abs();
        let fraction = if mag.is_multiple_of(2) { "0" } else { "5" };
        write!(f, "{sign}{}.{fraction}", mag / 2)
    }
}

/// Where a claimed arboricity bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Guaranteed by the generator's construction.
    ByConstruction,
    /// Verified by the exhaustive Nash-Williams scan.
    DensityOracle,
    Unknown,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ByConstruction => "by-construction",
            Provenance::DensityOracle => "density-oracle",
            Provenance::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// A claimed upper bound on a graph's arboricity together with its origin.
/// Exact arboricity is never computed at scale; generated corpora carry
/// by-construction witnesses instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArboricityWitness {
    pub alpha: usize,
    pub provenance: Provenance,
}
