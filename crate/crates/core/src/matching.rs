//! Greedy maximal matching and exact maximum matching.
//!
//! The blossom implementation is the ground truth `m(G)` for every
//! acceptance experiment, so it is gated by an equivalence test against the
//! exponential brute-force oracle before anything else relies on it.

use std::collections::HashMap;
use std::collections::VecDeque;

use crate::graph::Graph;
use crate::{Error, Result};

/// A set of vertex-disjoint edges, each stored as `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Checks both invariants against a source graph: endpoints pairwise
    /// distinct, every edge present in `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.vertex_count()];
        for &(u, v) in &self.edges {
            if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_edge(u, v) {
                return false;
            }
            if used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }

    /// True iff no edge of `g` has both endpoints unmatched.
    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.vertex_count()];
        for &(u, v) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        g.edges().iter().all(|&(u, v)| used[u] || used[v])
    }
}

/// Greedy maximal matching over a vertex order.
///
/// Each vertex, when processed and still unmatched, is matched to its
/// lowest-id unmatched neighbor. Deterministic given the order, which is
/// what makes streamed and offline greedy runs comparable.
pub fn greedy_maximal_matching(g: &Graph, vertex_order: &[usize]) -> Result<Matching> {
    validate_permutation(g.vertex_count(), vertex_order)?;
    let mut mate: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut edges = Vec::new();
    for &v in vertex_order {
        if mate[v].is_some() {
            continue;
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| mate[u].is_none()) {
            mate[v] = Some(u);
            mate[u] = Some(v);
            edges.push((v.min(u), v.max(u)));
        }
    }
    Ok(Matching { edges })
}

pub(crate) fn validate_permutation(n: usize, order: &[usize]) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match vertex count {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::InvalidPermutation(format!("id {v} out of range")));
        }
        if seen[v] {
            return Err(Error::InvalidPermutation(format!("id {v} repeated")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Exact maximum-matching size via augmenting paths with blossom
/// contraction, O(V^3). Must agree with [`brute_force_matching_size`]
/// wherever the latter runs.
pub fn maximum_matching_size(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    // Greedy warm start; augmentation only has to fix what is left.
    for v in 0..n {
        if mate[v].is_none() {
            if let Some(&u) = g.neighbors(v).iter().find(|&&u| mate[u].is_none()) {
                mate[v] = Some(u);
                mate[u] = Some(v);
            }
        }
    }

    let mut finder = PathFinder {
        g,
        parent: vec![None; n],
        base: (0..n).collect(),
        in_queue: vec![false; n],
        queue: VecDeque::new(),
    };
    for v in 0..n {
        if mate[v].is_none() {
            if let Some(end) = finder.find_augmenting_path(v, &mate) {
                augment(&finder.parent, &mut mate, end);
            }
        }
    }
    mate.iter().flatten().count() / 2
}

struct PathFinder<'a> {
    g: &'a Graph,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    in_queue: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> PathFinder<'a> {
    /// BFS over the alternating tree rooted at `root`, contracting blossoms
    /// in place. Returns the free vertex ending an augmenting path, if any.
    fn find_augmenting_path(&mut self, root: usize, mate: &[Option<usize>]) -> Option<usize> {
        let n = self.g.vertex_count();
        self.parent.iter_mut().for_each(|p| *p = None);
        self.in_queue.iter_mut().for_each(|q| *q = false);
        for (v, b) in self.base.iter_mut().enumerate() {
            *b = v;
        }
        self.queue.clear();
        self.queue.push_back(root);
        self.in_queue[root] = true;

        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                if to == root || mate[to].is_some_and(|m| self.parent[m].is_some()) {
                    // Odd cycle through the root: contract the blossom.
                    let cur = self.lowest_common_ancestor(v, to, mate);
                    let mut blossom = vec![false; n];
                    self.mark_path(v, cur, Some(to), &mut blossom, mate);
                    self.mark_path(to, cur, Some(v), &mut blossom, mate);
                    for u in 0..n {
                        if blossom[self.base[u]] {
                            self.base[u] = cur;
                            if !self.in_queue[u] {
                                self.in_queue[u] = true;
                                self.queue.push_back(u);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            if !self.in_queue[m] {
                                self.in_queue[m] = true;
                                self.queue.push_back(m);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn lowest_common_ancestor(&self, mut v: usize, mut w: usize, mate: &[Option<usize>]) -> usize {
        let n = self.g.vertex_count();
        let mut on_path = vec![false; n];
        loop {
            v = self.base[v];
            on_path[v] = true;
            match mate[v] {
                None => break,
                Some(m) => match self.parent[m] {
                    None => break,
                    Some(p) => v = p,
                },
            }
        }
        loop {
            w = self.base[w];
            if on_path[w] {
                return w;
            }
            w = self.parent[mate[w].expect("non-root tree vertex is matched")]
                .expect("matched vertex inside tree has a parent");
        }
    }

    fn mark_path(
        &mut self,
        mut v: usize,
        blossom_base: usize,
        mut child: Option<usize>,
        blossom: &mut [bool],
        mate: &[Option<usize>],
    ) {
        while self.base[v] != blossom_base {
            let m = mate[v].expect("blossom path alternates through matched vertices");
            blossom[self.base[v]] = true;
            blossom[self.base[m]] = true;
            self.parent[v] = child;
            child = Some(m);
            v = self.parent[m].expect("matched vertex inside tree has a parent");
        }
    }
}

fn augment(parent: &[Option<usize>], mate: &mut [Option<usize>], mut v: usize) {
    while let Some(pv) = parent[v] {
        let next = mate[pv];
        mate[v] = Some(pv);
        mate[pv] = Some(v);
        match next {
            Some(next) => v = next,
            None => break,
        }
    }
}

/// Independent exponential oracle: exhaustive search with memoization over
/// the set of still-available endpoints. Capped at 25 edges.
pub fn brute_force_matching_size(g: &Graph) -> Result<usize> {
    if g.edge_count() > 25 {
        return Err(Error::Capability(format!(
            "brute-force matching oracle capped at 25 edges, graph has {}",
            g.edge_count()
        )));
    }
    // Compact the (at most 50) non-isolated vertices into bit positions.
    let mut index = HashMap::new();
    for (u, v) in g.edges() {
        let next = index.len();
        index.entry(u).or_insert(next);
        let next = index.len();
        index.entry(v).or_insert(next);
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); index.len()];
    for (u, v) in g.edges() {
        let (a, b) = (index[&u], index[&v]);
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let all = if index.is_empty() {
        0
    } else {
        u64::MAX >> (64 - index.len())
    };
    let mut memo = HashMap::new();
    Ok(search(all, &nbrs, &mut memo))
}

fn search(avail: u64, nbrs: &[Vec<usize>], memo: &mut HashMap<u64, usize>) -> usize {
    if avail == 0 {
        return 0;
    }
    if let Some(&hit) = memo.get(&avail) {
        return hit;
    }
    // Branch on the lowest available vertex that still has a partner.
    let mut v = None;
    let mut bits = avail;
    while bits != 0 {
        let cand = bits.trailing_zeros() as usize;
        if nbrs[cand].iter().any(|&u| avail & (1 << u) != 0) {
            v = Some(cand);
            break;
        }
        bits &= bits - 1;
    }
    let Some(v) = v else {
        memo.insert(avail, 0);
        return 0;
    };
    let without_v = avail & !(1 << v);
    let mut best = search(without_v, nbrs, memo);
    for &u in &nbrs[v] {
        if avail & (1 << u) != 0 {
            best = best.max(1 + search(without_v & !(1 << u), nbrs, memo));
        }
    }
    memo.insert(avail, best);
    best
}
