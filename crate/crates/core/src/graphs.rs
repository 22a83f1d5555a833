//! Collinearity graphs of ovoid configurations and small-graph isomorphism.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::level::Level;
use crate::pointset::PointSet;
use crate::segre::SegreVariety;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> SimpleGraph {
        assert!(n <= 64, "at most 64 vertices");
        SimpleGraph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a] |= 1 << b;
            self.adj[b] |= 1 << a;
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut w = self.adj[v];
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                b
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.neighbours(a).filter(move |&b| b > a).map(move |b| (a, b))).collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    fn bfs(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for w in self.neighbours(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen[v] {
                continue;
            }
            let comp: Vec<usize> = self.bfs(v).iter().enumerate().filter_map(|(w, d)| d.map(|_| w)).collect();
            for &w in &comp {
                seen[w] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Largest finite distance, or `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n {
            for d in self.bfs(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap_or(false);
                for w in self.neighbours(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(x) if x == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Traces of the powers A, A^2, ..., A^m of the adjacency matrix: the
    /// closed-walk counts fixing the power sums of the spectrum.
    pub fn walk_traces(&self, m: usize) -> Vec<u64> {
        let n = self.n;
        let mut power: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
        let mut out = Vec::with_capacity(m);
        for _ in 0..m {
            power = (0..n)
                .map(|i| (0..n).map(|j| self.neighbours(j).map(|k| power[i][k]).sum()).collect())
                .collect();
            out.push((0..n).map(|i| power[i][i]).sum());
        }
        out
    }

    pub fn disjoint_union(parts: &[SimpleGraph]) -> SimpleGraph {
        let n = parts.iter().map(|p| p.n).sum();
        let mut g = SimpleGraph::new(n);
        let mut offset = 0;
        for p in parts {
            for (a, b) in p.edges() {
                g.add_edge(a + offset, b + offset);
            }
            offset += p.n;
        }
        g
    }
}

/// Graph on the points of `s`, adjacent when collinear.
pub fn collinearity_graph(v: &SegreVariety, s: &PointSet) -> SimpleGraph {
    let pts: Vec<usize> = s.iter().collect();
    let mut g = SimpleGraph::new(pts.len());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if v.distance(pts[i], pts[j]) == 1 {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Cubic graph on a Hamiltonian cycle with chords given in LCF notation.
pub fn lcf(n: usize, jumps: &[i64], repeat: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n);
    }
    for r in 0..repeat {
        for (t, &j) in jumps.iter().enumerate() {
            let i = r * jumps.len() + t;
            g.add_edge(i, (i as i64 + j).rem_euclid(n as i64) as usize);
        }
    }
    g
}

pub fn generalized_petersen(n: usize, k: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(2 * n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n);
        g.add_edge(i, n + i);
        g.add_edge(n + i, n + (i + k) % n);
    }
    g
}

pub fn cube() -> SimpleGraph {
    let mut g = SimpleGraph::new(8);
    for v in 0..8 {
        for b in 0..3 {
            g.add_edge(v, v ^ (1 << b));
        }
    }
    g
}

pub fn dyck() -> SimpleGraph {
    lcf(32, &[5, -5, 13, -13], 8)
}

pub fn nauru() -> SimpleGraph {
    generalized_petersen(12, 5)
}

pub fn four_cubes() -> SimpleGraph {
    SimpleGraph::disjoint_union(&[cube(), cube(), cube(), cube()])
}

pub fn reference(name: &str) -> Result<SimpleGraph> {
    match name {
        "dyck" => Ok(dyck()),
        "nauru" => Ok(nauru()),
        "four-cubes" | "4xQ3" => Ok(four_cubes()),
        _ => Err(Error::UnknownGraph(name.to_string())),
    }
}

fn screen(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    let comp_sizes = |g: &SimpleGraph| {
        let mut s: Vec<usize> = g.components().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    };
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && a.degree_sequence() == b.degree_sequence()
        && comp_sizes(a) == comp_sizes(b)
        && a.is_bipartite() == b.is_bipartite()
        && a.girth() == b.girth()
        && a.walk_traces(8) == b.walk_traces(8)
}

/// Exact isomorphism test: invariant screening, then backtracking along a
/// breadth-first vertex order.
pub fn is_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    if !screen(a, b) {
        return false;
    }
    let n = a.order();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in a.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    extend(a, b, &order, 0, &mut map, &mut used)
}

fn extend(a: &SimpleGraph, b: &SimpleGraph, order: &[usize], depth: usize, map: &mut [usize], used: &mut u64) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mapped_neighbour = a.neighbours(v).find(|&w| map[w] != usize::MAX);
    let candidates: u64 = match mapped_neighbour {
        Some(w) => b.adj[map[w]] & !*used,
        None => !*used & if b.n == 64 { u64::MAX } else { (1u64 << b.n) - 1 },
    };
    let mut c = candidates;
    while c != 0 {
        let x = c.trailing_zeros() as usize;
        c &= c - 1;
        if b.degree(x) != a.degree(v) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| a.has_edge(u, v) == b.has_edge(map[u], x));
        if !consistent {
            continue;
        }
        map[v] = x;
        *used |= 1 << x;
        if extend(a, b, order, depth + 1, map, used) {
            return true;
        }
        *used &= !(1 << x);
        map[v] = usize::MAX;
    }
    false
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphSweep {
    pub projective_pairs: u64,
    pub projective_dyck: u64,
    pub projective_cubes: u64,
    pub projective_other: u64,
    pub nonprojective_pairs: u64,
    pub nonprojective_dyck: u64,
    pub nauru_pairs: u64,
    pub nauru_matches: u64,
}

impl GraphSweep {
    pub fn holds(&self) -> bool {
        self.projective_pairs > 0
            && self.projective_other == 0
            && self.nonprojective_pairs > 0
            && self.nonprojective_dyck == 0
            && self.nauru_pairs > 0
            && self.nauru_matches == self.nauru_pairs
    }
}

/// Exhaustive sweep over pairs of ovoids of S_3(3).
pub fn ovoid_sweep(level: &Level) -> GraphSweep {
    let v = &level.variety;
    let ovoids = |projective: bool| -> Vec<PointSet> {
        level
            .hyperplanes
            .iter()
            .filter(|h| h.is_projective() == projective && v.contained_line_count(&h.points) == 0)
            .map(|h| h.points)
            .collect()
    };
    let proj = ovoids(true);
    let nonproj = ovoids(false);
    let pairs = |set: &[PointSet]| -> Vec<(PointSet, PointSet)> {
        (0..set.len())
            .flat_map(|i| (i + 1..set.len()).map(move |j| (i, j)))
            .map(|(i, j)| (set[i], set[j]))
            .collect()
    };
    let (dyck, cubes, nauru) = (dyck(), four_cubes(), nauru());
    let mut out = GraphSweep::default();

    let results: Vec<(bool, bool)> = pairs(&proj)
        .par_iter()
        .filter(|(a, b)| (*a & *b).is_empty())
        .map(|(a, b)| {
            let g = collinearity_graph(v, &(*a | *b));
            let d = is_isomorphic(&g, &dyck);
            (d, !d && is_isomorphic(&g, &cubes))
        })
        .collect();
    out.projective_pairs = results.len() as u64;
    out.projective_dyck = results.iter().filter(|r| r.0).count() as u64;
    out.projective_cubes = results.iter().filter(|r| r.1).count() as u64;
    out.projective_other = out.projective_pairs - out.projective_dyck - out.projective_cubes;

    let np = pairs(&nonproj);
    let disjoint: Vec<bool> = np
        .par_iter()
        .filter(|(a, b)| (*a & *b).is_empty())
        .map(|(a, b)| is_isomorphic(&collinearity_graph(v, &(*a | *b)), &dyck))
        .collect();
    out.nonprojective_pairs = disjoint.len() as u64;
    out.nonprojective_dyck = disjoint.iter().filter(|&&d| d).count() as u64;

    let far = |s: &PointSet| {
        let p: Vec<usize> = s.iter().collect();
        p.iter().enumerate().all(|(i, &x)| p[i + 1..].iter().all(|&y| v.distance(x, y) == v.k() as u8))
    };
    let nauru_results: Vec<bool> = np
        .par_iter()
        .filter(|(a, b)| {
            let common = *a & *b;
            common.count() == 4 && far(&common)
        })
        .map(|(a, b)| is_isomorphic(&collinearity_graph(v, &(*a ^ *b)), &nauru))
        .collect();
    out.nauru_pairs = nauru_results.len() as u64;
    out.nauru_matches = nauru_results.iter().filter(|&&m| m).count() as u64;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyck_parameters() {
        let g = dyck();
        assert_eq!((g.order(), g.edge_count()), (32, 48));
        assert!(g.degree_sequence().iter().all(|&d| d == 3));
        assert_eq!(g.girth(), Some(6));
        assert_eq!(g.diameter(), Some(5));
        assert!(g.is_bipartite());
    }

    #[test]
    fn nauru_parameters() {
        let g = nauru();
        assert_eq!((g.order(), g.edge_count(), g.girth()), (24, 36, Some(6)));
        assert!(g.is_bipartite());
    }

    #[test]
    fn relabelled_graph_is_isomorphic() {
        let g = dyck();
        let perm: Vec<usize> = (0..32).map(|i| (i * 7 + 3) % 32).collect();
        let h = SimpleGraph::from_edges(32, &g.edges().iter().map(|&(a, b)| (perm[a], perm[b])).collect::<Vec<_>>());
        assert!(is_isomorphic(&g, &h));
        assert!(!is_isomorphic(&g, &four_cubes()));
        assert!(!is_isomorphic(&nauru(), &generalized_petersen(12, 1)));
    }

    #[test]
    fn small_collinearity_graphs() {
        let v = SegreVariety::build(3, 3).unwrap();
        let line = v.line_mask(0);
        let g = collinearity_graph(&v, &line);
        assert_eq!((g.order(), g.edge_count()), (4, 6));
        assert!(reference("petersen").is_err());
    }
}
