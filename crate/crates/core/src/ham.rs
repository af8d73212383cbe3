//! Hamiltonian paths of the odd-even grid graph.
//!
//! Every Hamiltonian path starts at `(1;1)`, which has no in-arcs, so the
//! search is rooted there. Each vertex has at most two
//! out-arcs, and a partial path is dropped as soon as some unvisited vertex
//! has no remaining way in. Emission order is lexicographic in the
//! canonical `(y, x)` vertex order.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Arc, Grid, Vertex};
use crate::par::Execution;
use crate::tiling;

/// Enumeration on grids with more vertices than this needs an explicit override.
pub const SOFT_ENUMERATION_LIMIT: u64 = 100;

const NO_NEXT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HamPath {
    grid: Grid,
    vertices: Vec<Vertex>,
    // next[index(v)] = index of the successor of v on the path
    next: Vec<u32>,
}

impl HamPath {
    pub fn new(grid: Grid, vertices: Vec<Vertex>) -> Result<Self> {
        let n = grid.vertex_count();
        if vertices.len() != n {
            return Err(Error::NotHamiltonian(format!(
                "expected {n} vertices, got {}",
                vertices.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &vertices {
            if !grid.contains(v) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    p: grid.p(),
                    q: grid.q(),
                });
            }
            let i = grid.index(v);
            if seen[i] {
                return Err(Error::NotHamiltonian(format!("vertex {v} visited twice")));
            }
            seen[i] = true;
        }
        let mut next = vec![NO_NEXT; n];
        for w in vertices.windows(2) {
            if !grid.has_arc(w[0], w[1]) {
                return Err(Error::NotHamiltonian(format!(
                    "{}->{} is not an arc",
                    w[0], w[1]
                )));
            }
            next[grid.index(w[0])] = grid.index(w[1]) as u32;
        }
        Ok(HamPath {
            grid,
            vertices,
            next,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.vertices.windows(2).map(|w| Arc::new(w[0], w[1]))
    }

    pub fn uses_arc(&self, arc: Arc) -> bool {
        self.grid.contains(arc.from)
            && self.grid.contains(arc.to)
            && self.next[self.grid.index(arc.from)] == self.grid.index(arc.to) as u32
    }

    /// Number of leading vertices equal to `(1;1), (2;1), ...`.
    pub fn bottom_prefix_len(&self) -> u32 {
        self.vertices
            .iter()
            .zip(1..)
            .take_while(|(v, i)| **v == Vertex::new(*i, 1))
            .count() as u32
    }

    /// The mirror image across the main diagonal, a path of the transposed grid.
    pub fn transpose(&self) -> HamPath {
        let grid = self.grid.transpose();
        let vertices = self.vertices.iter().map(|v| v.transpose()).collect();
        HamPath::new(grid, vertices).expect("transposition preserves the arc relation")
    }

    pub fn to_json(&self) -> String {
        let wire = HamPathJson {
            p: self.grid.p(),
            q: self.grid.q(),
            vertices: self.vertices.iter().map(|v| [v.x, v.y]).collect(),
        };
        serde_json::to_string(&wire).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: HamPathJson = serde_json::from_str(text)?;
        let grid = Grid::new(wire.p, wire.q)?;
        HamPath::new(
            grid,
            wire.vertices
                .into_iter()
                .map(|[x, y]| Vertex::new(x, y))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HamPathJson {
    p: u32,
    q: u32,
    vertices: Vec<[u32; 2]>,
}

/// Vertices with no in-arc: `(1;1)`, plus `(p;q)` when both sides are even.
pub fn source_vertices(grid: &Grid) -> Vec<Vertex> {
    grid.vertices()
        .filter(|&v| grid.predecessors(v).iter().all(Option::is_none))
        .collect()
}

/// Search state: a partial path from `(1;1)` plus, per vertex, the number of
/// in-neighbours that could still precede it (unvisited ones and the head).
struct Walk<'g> {
    grid: &'g Grid,
    visited: Vec<bool>,
    in_avail: Vec<u8>,
    path: Vec<Vertex>,
}

impl<'g> Walk<'g> {
    fn new(grid: &'g Grid) -> Self {
        let n = grid.vertex_count();
        let mut in_avail = vec![0u8; n];
        for (i, slot) in in_avail.iter_mut().enumerate() {
            *slot = grid
                .predecessors(grid.vertex_at(i))
                .iter()
                .flatten()
                .count() as u8;
        }
        let start = Vertex::new(1, 1);
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut path = Vec::with_capacity(n);
        path.push(start);
        Walk {
            grid,
            visited,
            in_avail,
            path,
        }
    }

    /// Replays `prefix` (which must start at `(1;1)`); `None` if it is not a
    /// viable partial path.
    fn from_prefix(grid: &'g Grid, prefix: &[Vertex]) -> Option<Self> {
        if prefix.first() != Some(&Vertex::new(1, 1)) {
            return None;
        }
        let mut walk = Walk::new(grid);
        if walk.stranded() {
            return None;
        }
        for &v in &prefix[1..] {
            if !grid.contains(v) || walk.visited[grid.index(v)] || !grid.has_arc(walk.head(), v) {
                return None;
            }
            if !walk.advance(v) {
                return None;
            }
        }
        Some(walk)
    }

    /// Some vertex other than the start has no in-arc at all.
    fn stranded(&self) -> bool {
        self.in_avail.iter().skip(1).any(|&n| n == 0)
    }

    fn head(&self) -> Vertex {
        *self.path.last().unwrap()
    }

    fn complete(&self) -> bool {
        self.path.len() == self.visited.len()
    }

    /// Unvisited successors of the head in canonical order.
    fn candidates(&self) -> ([Vertex; 2], u8) {
        let mut out = [Vertex::new(0, 0); 2];
        let mut n = 0u8;
        for w in self.grid.successors(self.head()).into_iter().flatten() {
            if !self.visited[self.grid.index(w)] {
                out[n as usize] = w;
                n += 1;
            }
        }
        if n == 2 && out[1] < out[0] {
            out.swap(0, 1);
        }
        (out, n)
    }

    /// Extends the path by `v`. Returns false if the extension strands some
    /// unvisited vertex; the caller must still `retreat`.
    fn advance(&mut self, v: Vertex) -> bool {
        let u = self.head();
        let mut viable = true;
        for w in self.grid.successors(u).into_iter().flatten() {
            if w != v {
                let i = self.grid.index(w);
                self.in_avail[i] -= 1;
                if self.in_avail[i] == 0 && !self.visited[i] {
                    viable = false;
                }
            }
        }
        self.visited[self.grid.index(v)] = true;
        self.path.push(v);
        viable
    }

    fn retreat(&mut self) {
        let v = self.path.pop().expect("never retreat past the root");
        self.visited[self.grid.index(v)] = false;
        let u = self.head();
        for w in self.grid.successors(u).into_iter().flatten() {
            if w != v {
                self.in_avail[self.grid.index(w)] += 1;
            }
        }
    }

    fn for_each_completion(&mut self, skip: Option<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if self.complete() {
            f(&self.path);
            return;
        }
        let (cands, n) = self.candidates();
        for &v in &cands[..n as usize] {
            if Some(v) == skip {
                continue;
            }
            if self.advance(v) {
                self.for_each_completion(None, f);
            }
            self.retreat();
        }
    }

    fn count_completions(&mut self, skip: Option<Vertex>) -> u64 {
        if self.stranded() {
            return 0;
        }
        let mut count = 0u64;
        self.for_each_completion(skip, &mut |_| count += 1);
        count
    }
}

struct Frame {
    cands: [Vertex; 2],
    len: u8,
    next: u8,
}

/// Lazy lexicographic stream of all Hamiltonian paths of a grid.
pub struct HamPaths<'g> {
    walk: Walk<'g>,
    stack: Vec<Frame>,
    started: bool,
    done: bool,
}

impl<'g> HamPaths<'g> {
    fn frame(&self) -> Frame {
        let (cands, len) = self.walk.candidates();
        Frame {
            cands,
            len,
            next: 0,
        }
    }

    fn emit(&self) -> HamPath {
        HamPath::new(*self.walk.grid, self.walk.path.clone()).expect("search yields valid paths")
    }
}

impl Iterator for HamPaths<'_> {
    type Item = HamPath;

    fn next(&mut self) -> Option<HamPath> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.walk.stranded() {
                self.done = true;
                return None;
            }
            if self.walk.complete() {
                self.done = true;
                return Some(self.emit());
            }
            let root = self.frame();
            self.stack.push(root);
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            if top.next == top.len {
                self.stack.pop();
                if self.walk.path.len() > 1 {
                    self.walk.retreat();
                }
                continue;
            }
            let v = top.cands[top.next as usize];
            top.next += 1;
            if !self.walk.advance(v) {
                self.walk.retreat();
                continue;
            }
            if self.walk.complete() {
                let out = self.emit();
                self.walk.retreat();
                return Some(out);
            }
            let frame = self.frame();
            self.stack.push(frame);
        }
    }
}

pub fn enumerate_ham_paths(grid: &Grid) -> HamPaths<'_> {
    HamPaths {
        walk: Walk::new(grid),
        stack: Vec::new(),
        started: false,
        done: false,
    }
}

/// Viable partial paths in lexicographic order, expanded level by level until
/// there are enough of them to spread over worker threads. Complete paths
/// shorter than the frontier depth are carried along unchanged.
fn frontier(grid: &Grid, target: usize) -> Vec<Vec<Vertex>> {
    let mut level = vec![vec![Vertex::new(1, 1)]];
    let n = grid.vertex_count();
    while level.len() < target {
        let mut grew = false;
        let mut next_level = Vec::with_capacity(level.len() * 2);
        for prefix in level {
            if prefix.len() == n {
                next_level.push(prefix);
                continue;
            }
            let mut walk = Walk::from_prefix(grid, &prefix).expect("frontier prefixes are viable");
            let (cands, len) = walk.candidates();
            for &v in &cands[..len as usize] {
                if walk.advance(v) {
                    let mut child = prefix.clone();
                    child.push(v);
                    next_level.push(child);
                    grew = true;
                }
                walk.retreat();
            }
        }
        level = next_level;
        if !grew {
            break;
        }
    }
    level
}

const FRONTIER_TARGET: usize = 256;

/// Number of Hamiltonian paths by exhaustive search, split across threads on
/// the first branching decisions.
pub fn count_by_enumeration(grid: &Grid, exec: Execution) -> u64 {
    if exec == Execution::Sequential {
        return Walk::new(grid).count_completions(None);
    }
    if Walk::new(grid).stranded() {
        return 0;
    }
    let prefixes = frontier(grid, FRONTIER_TARGET);
    exec.sum_u64(&prefixes, |prefix| {
        Walk::from_prefix(grid, prefix).map_or(0, |mut w| w.count_completions(None))
    })
}

/// All Hamiltonian paths, in the same order as [`enumerate_ham_paths`].
pub fn collect_ham_paths(grid: &Grid, exec: Execution) -> Vec<HamPath> {
    if exec == Execution::Sequential {
        return enumerate_ham_paths(grid).collect();
    }
    if Walk::new(grid).stranded() {
        return Vec::new();
    }
    let prefixes = frontier(grid, FRONTIER_TARGET);
    exec.map(&prefixes, |prefix| {
        let mut found = Vec::new();
        if let Some(mut walk) = Walk::from_prefix(grid, prefix) {
            walk.for_each_completion(None, &mut |path| {
                found.push(HamPath::new(*grid, path.to_vec()).expect("search yields valid paths"))
            });
        }
        found
    })
    .into_iter()
    .flatten()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Enumerate,
    ViaTilings,
}

fn check_limit(grid: &Grid) -> Result<()> {
    let cells = grid.vertex_count() as u64;
    if cells > SOFT_ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            p: grid.p(),
            q: grid.q(),
            cells,
            limit: SOFT_ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// `h(p, q)`. `Enumerate` refuses grids above [`SOFT_ENUMERATION_LIMIT`]
/// vertices; see [`count_ham_paths_forced`].
pub fn count_ham_paths(p: u32, q: u32, method: CountMethod) -> Result<BigUint> {
    let grid = Grid::new(p, q)?;
    if method == CountMethod::Enumerate {
        check_limit(&grid)?;
    }
    count_ham_paths_forced(p, q, method)
}

pub fn count_ham_paths_forced(p: u32, q: u32, method: CountMethod) -> Result<BigUint> {
    let grid = Grid::new(p, q)?;
    Ok(match method {
        CountMethod::Enumerate => BigUint::from(count_by_enumeration(&grid, Execution::default())),
        CountMethod::ViaTilings => tiling::count_tilings_exact(p, q),
    })
}

/// `h_r(p, q)`: paths beginning with exactly the first `r` bottom-row vertices.
pub fn count_prefix(p: u32, q: u32, r: u32) -> Result<BigUint> {
    let grid = Grid::new(p, q)?;
    if r == 0 || r > p {
        return Err(Error::PrefixOutOfRange { r, p });
    }
    let prefix: Vec<Vertex> = (1..=r).map(|x| Vertex::new(x, 1)).collect();
    let Some(mut walk) = Walk::from_prefix(&grid, &prefix) else {
        return Ok(BigUint::from(0u32));
    };
    let forbidden = (r < p).then(|| Vertex::new(r + 1, 1));
    Ok(BigUint::from(walk.count_completions(forbidden)))
}

/// Forced first vertex and, when a path exists at all, the forced last one.
pub fn predicted_endpoints(p: u32, q: u32) -> (Vertex, Option<Vertex>) {
    let end = match (p % 2 == 1, q % 2 == 1) {
        (true, true) => Some(Vertex::new(p, q)),
        (true, false) => Some(Vertex::new(1, q)),
        (false, true) => Some(Vertex::new(p, 1)),
        (false, false) => None,
    };
    (Vertex::new(1, 1), end)
}

/// `F_n` with `F_1 = F_2 = 1` (and `F_0 = 0`).
pub fn fibonacci(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::from(0u32), BigUint::from(1u32));
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn v(x: u32, y: u32) -> Vertex {
        Vertex::new(x, y)
    }

    fn grid(p: u32, q: u32) -> Grid {
        Grid::new(p, q).unwrap()
    }

    /// Independent oracle: try every permutation of the vertices.
    fn brute_force(g: &Grid) -> Vec<Vec<Vertex>> {
        fn go(g: &Grid, cur: &mut Vec<Vertex>, used: &mut Vec<bool>, out: &mut Vec<Vec<Vertex>>) {
            if cur.len() == g.vertex_count() {
                out.push(cur.clone());
                return;
            }
            for w in g.vertices() {
                let i = g.index(w);
                if used[i] {
                    continue;
                }
                if let Some(&last) = cur.last() {
                    if !g.has_arc(last, w) {
                        continue;
                    }
                }
                used[i] = true;
                cur.push(w);
                go(g, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
        let mut out = Vec::new();
        go(
            g,
            &mut Vec::new(),
            &mut vec![false; g.vertex_count()],
            &mut out,
        );
        out
    }

    #[test]
    fn matches_brute_force_in_order() {
        for p in 1..=4 {
            for q in 1..=4 {
                let g = grid(p, q);
                let expected = brute_force(&g);
                let got: Vec<Vec<Vertex>> = enumerate_ham_paths(&g)
                    .map(|h| h.vertices().to_vec())
                    .collect();
                assert_eq!(got, expected, "{p}x{q}");
            }
        }
    }

    #[test]
    fn three_by_three_has_two_paths() {
        assert_eq!(enumerate_ham_paths(&grid(3, 3)).count(), 2);
    }

    #[test]
    fn both_even_is_empty() {
        assert_eq!(enumerate_ham_paths(&grid(2, 2)).count(), 0);
        assert_eq!(
            count_ham_paths(4, 6, CountMethod::Enumerate).unwrap(),
            BigUint::from(0u32)
        );
    }

    #[test]
    fn single_column_chain() {
        let paths: Vec<_> = enumerate_ham_paths(&grid(1, 4)).collect();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].vertices(), &[v(1, 1), v(1, 2), v(1, 3), v(1, 4)]);
        let single: Vec<_> = enumerate_ham_paths(&grid(1, 1)).collect();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].vertices(), &[v(1, 1)]);
    }

    #[test]
    fn published_counts() {
        assert_eq!(
            count_ham_paths(5, 5, CountMethod::Enumerate).unwrap(),
            BigUint::from(36u32)
        );
        assert_eq!(
            count_ham_paths(6, 3, CountMethod::Enumerate).unwrap(),
            BigUint::from(8u32)
        );
        assert_eq!(
            count_ham_paths(9, 9, CountMethod::ViaTilings).unwrap(),
            BigUint::from(12_988_816u32)
        );
    }

    #[test]
    fn soft_limit() {
        assert!(matches!(
            count_ham_paths(11, 10, CountMethod::Enumerate),
            Err(Error::EnumerationLimit { cells: 110, .. })
        ));
        assert_eq!(
            count_ham_paths(2, 49, CountMethod::Enumerate).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_ham_paths(10, 10, CountMethod::Enumerate).unwrap(),
            BigUint::from(0u32)
        );
        assert!(count_ham_paths(20, 20, CountMethod::ViaTilings).is_ok());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        for (p, q) in [(1, 1), (1, 5), (3, 3), (5, 4), (5, 5), (6, 5), (7, 5)] {
            let g = grid(p, q);
            let seq: Vec<_> = enumerate_ham_paths(&g).collect();
            let par = collect_ham_paths(&g, Execution::Parallel);
            assert_eq!(seq, par, "{p}x{q}");
            assert_eq!(
                count_by_enumeration(&g, Execution::Sequential),
                seq.len() as u64
            );
            assert_eq!(
                count_by_enumeration(&g, Execution::Parallel),
                seq.len() as u64
            );
        }
    }

    #[test]
    fn prefix_counts() {
        assert_eq!(count_prefix(3, 3, 2).unwrap(), BigUint::from(0u32));
        assert_eq!(count_prefix(3, 3, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(count_prefix(3, 5, 1).unwrap(), BigUint::from(2u32));
        assert!(matches!(
            count_prefix(3, 3, 0),
            Err(Error::PrefixOutOfRange { .. })
        ));
        assert!(matches!(
            count_prefix(3, 3, 4),
            Err(Error::PrefixOutOfRange { .. })
        ));
    }

    #[test]
    fn prefix_counts_match_bucketed_enumeration() {
        for p in 1..=6 {
            for q in 1..=6 {
                let paths: Vec<_> = enumerate_ham_paths(&grid(p, q)).collect();
                for r in 1..=p {
                    let bucket = paths.iter().filter(|h| h.bottom_prefix_len() == r).count();
                    assert_eq!(
                        count_prefix(p, q, r).unwrap(),
                        BigUint::from(bucket),
                        "{p}x{q} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn endpoints() {
        assert_eq!(predicted_endpoints(5, 5), (v(1, 1), Some(v(5, 5))));
        assert_eq!(predicted_endpoints(5, 4), (v(1, 1), Some(v(1, 4))));
        assert_eq!(predicted_endpoints(4, 5), (v(1, 1), Some(v(4, 1))));
        assert_eq!(predicted_endpoints(4, 4), (v(1, 1), None));
    }

    #[test]
    fn sources() {
        for p in 1..=8 {
            for q in 1..=8 {
                let expected = if p % 2 == 0 && q % 2 == 0 {
                    vec![v(1, 1), v(p, q)]
                } else {
                    vec![v(1, 1)]
                };
                assert_eq!(source_vertices(&grid(p, q)), expected, "{p}x{q}");
            }
        }
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(1), BigUint::from(1u32));
        assert_eq!(fibonacci(2), BigUint::from(1u32));
        assert_eq!(fibonacci(5), BigUint::from(5u32));
        assert_eq!(fibonacci(17), BigUint::from(1597u32));
        assert_eq!(fibonacci(100).to_string(), "354224848179261915075");
    }

    #[test]
    fn fibonacci_row() {
        for n in 1..=12 {
            assert_eq!(
                count_ham_paths(3, n, CountMethod::Enumerate).unwrap(),
                fibonacci(n),
                "h(3,{n})"
            );
        }
    }

    #[test]
    fn paths_are_distinct_and_valid() {
        let g = grid(5, 5);
        let paths: Vec<_> = enumerate_ham_paths(&g).collect();
        let set: HashSet<_> = paths.iter().map(|h| h.vertices().to_vec()).collect();
        assert_eq!(set.len(), paths.len());
        for w in paths.windows(2) {
            assert!(w[0].vertices() < w[1].vertices());
        }
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let g = grid(3, 3);
        for h in enumerate_ham_paths(&g) {
            let text = h.to_json();
            assert_eq!(HamPath::from_json(&text).unwrap(), h);
        }
        let bad = r#"{"p":2,"q":2,"vertices":[[1,1],[2,1],[1,2],[2,2]]}"#;
        assert!(matches!(
            HamPath::from_json(bad),
            Err(Error::NotHamiltonian(_))
        ));
        assert!(matches!(HamPath::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn uses_arc_lookup() {
        let h = enumerate_ham_paths(&grid(2, 3)).next().unwrap();
        for a in h.arcs().collect::<Vec<_>>() {
            assert!(h.uses_arc(a));
            assert!(!h.uses_arc(Arc::new(a.to, a.from)));
        }
        assert!(!h.uses_arc(Arc::new(v(9, 9), v(9, 10))));
    }
}
