//! The correspondence between domino tilings and Hamiltonian paths.
//!
//! Tiling to path: drop each domino's axis arc `D_5 -> D_2` and black-end arc
//! `D_1 -> D_6`; the `pq - 1` arcs left over are the path.
//!
//! Path to tiling: around every black square the path uses exactly two
//! opposite sides, which fixes the orientation of that square's domino. The
//! black/white adjacency graph this allows is a forest, and its unique
//! perfect matching, found by peeling leaves, is the tiling.
//!
//! Both directions re-check their output against the other direction and
//! report [`Error::Consistency`] instead of repairing anything.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::grid::{Arc, Grid, Square, SquareColor, Vertex};
use crate::ham::{enumerate_ham_paths, HamPath};
use crate::par::Execution;
use crate::tiling::{
    avoids_all, canonical_numbering, enumerate_tilings, Domino, Orientation, Tiling,
};

fn same_grid(a: Grid, b: Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch(a.p(), a.q(), b.p(), b.q()))
    }
}

/// Arcs on the outer boundary that border a white square. On a grid one
/// vertex wide there are no squares and every arc counts.
pub fn white_perimeter_arcs(grid: &Grid) -> BTreeSet<Arc> {
    let (p, q) = (grid.p(), grid.q());
    if p == 1 || q == 1 {
        return grid.arcs().into_iter().collect();
    }
    let mut out = BTreeSet::new();
    let mut add = |a: Vertex, b: Vertex, s: Square| {
        if s.color() == SquareColor::White {
            out.insert(grid.arc_between(a, b).expect("boundary edges are arcs"));
        }
    };
    for x in 1..p {
        add(Vertex::new(x, 1), Vertex::new(x + 1, 1), Square::new(x, 1));
        add(
            Vertex::new(x, q),
            Vertex::new(x + 1, q),
            Square::new(x, q - 1),
        );
    }
    for y in 1..q {
        add(Vertex::new(1, y), Vertex::new(1, y + 1), Square::new(1, y));
        add(
            Vertex::new(p, y),
            Vertex::new(p, y + 1),
            Square::new(p - 1, y),
        );
    }
    out
}

/// All arcs that are not white-perimeter arcs.
pub fn arc_set_a(grid: &Grid) -> BTreeSet<Arc> {
    let wp = white_perimeter_arcs(grid);
    grid.arcs()
        .into_iter()
        .filter(|a| !wp.contains(a))
        .collect()
}

/// The partition of a grid's arcs induced by one tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcClassification {
    pub white_perimeter: BTreeSet<Arc>,
    pub domino_axis: BTreeSet<Arc>,
    pub domino_black_end: BTreeSet<Arc>,
    pub domino_black_side: BTreeSet<Arc>,
}

impl ArcClassification {
    pub fn total(&self) -> usize {
        self.white_perimeter.len()
            + self.domino_axis.len()
            + self.domino_black_end.len()
            + self.domino_black_side.len()
    }

    /// White-perimeter and black-side arcs together: the path's arcs.
    pub fn path_arcs(&self) -> BTreeSet<Arc> {
        self.white_perimeter
            .union(&self.domino_black_side)
            .copied()
            .collect()
    }
}

pub fn classify_arcs(grid: &Grid, t: &Tiling) -> Result<ArcClassification> {
    same_grid(*grid, t.grid())?;
    let white_perimeter = white_perimeter_arcs(grid);
    let mut domino_axis = BTreeSet::new();
    let mut domino_black_end = BTreeSet::new();
    for d in t.dominoes() {
        let n = canonical_numbering(grid, d)?;
        let (axis, end) = (n.axis_arc(), n.black_end_arc());
        if white_perimeter.contains(&axis) || white_perimeter.contains(&end) {
            return Err(Error::Consistency(format!(
                "domino at {} claims a white-perimeter arc",
                d.black()
            )));
        }
        if !domino_axis.insert(axis) || domino_axis.contains(&end) || !domino_black_end.insert(end)
        {
            return Err(Error::Consistency(format!(
                "domino at {} reuses an arc",
                d.black()
            )));
        }
    }
    if !domino_axis.is_disjoint(&domino_black_end) {
        return Err(Error::Consistency("axis and black-end arcs overlap".into()));
    }
    let domino_black_side = grid
        .arcs()
        .into_iter()
        .filter(|a| {
            !white_perimeter.contains(a)
                && !domino_axis.contains(a)
                && !domino_black_end.contains(a)
        })
        .collect();
    Ok(ArcClassification {
        white_perimeter,
        domino_axis,
        domino_black_end,
        domino_black_side,
    })
}

/// The unique Hamiltonian path avoiding every domino of `t`.
pub fn tiling_to_path(grid: &Grid, t: &Tiling) -> Result<HamPath> {
    let class = classify_arcs(grid, t)?;
    let n = grid.vertex_count();
    let kept = class.path_arcs();
    if kept.len() != n - 1 {
        return Err(Error::Consistency(format!(
            "{} arcs remain after removing axis and black-end arcs, expected {}",
            kept.len(),
            n - 1
        )));
    }
    let mut succ = vec![None; n];
    let mut has_pred = vec![false; n];
    for a in &kept {
        let (i, j) = (grid.index(a.from), grid.index(a.to));
        if succ[i].replace(a.to).is_some() || std::mem::replace(&mut has_pred[j], true) {
            return Err(Error::Consistency(format!("remaining arcs branch at {a}")));
        }
    }
    let mut vertices = Vec::with_capacity(n);
    let mut cur = Some(Vertex::new(1, 1));
    while let Some(v) = cur {
        if vertices.len() == n {
            return Err(Error::Consistency("remaining arcs contain a cycle".into()));
        }
        vertices.push(v);
        cur = succ[grid.index(v)];
    }
    let path = HamPath::new(*grid, vertices).map_err(|e| {
        Error::Consistency(format!("remaining arcs are not a Hamiltonian path: {e}"))
    })?;
    if let Some(a) = class.white_perimeter.iter().find(|a| !path.uses_arc(**a)) {
        return Err(Error::Consistency(format!(
            "white-perimeter arc {a} missing from path"
        )));
    }
    for d in t.dominoes() {
        let num = canonical_numbering(grid, d)?;
        for (j, k) in [(1, 2), (5, 6)] {
            let a = Arc::new(num.get(j), num.get(k));
            if !path.uses_arc(a) {
                return Err(Error::Consistency(format!(
                    "D{j}->D{k} of domino at {} missing from path",
                    d.black()
                )));
            }
        }
    }
    Ok(path)
}

/// Orientation forced on a black square's domino by the two opposite sides
/// the path uses.
pub fn black_square_orientation(h: &HamPath, s: Square) -> Result<Orientation> {
    let grid = h.grid();
    let used = grid.square_sides(s).map(|a| h.uses_arc(a));
    match used {
        // bottom and top used: the axis sits on the left or right side
        [true, false, true, false] => Ok(Orientation::Horizontal),
        [false, true, false, true] => Ok(Orientation::Vertical),
        _ => Err(Error::Consistency(format!(
            "path does not use exactly two opposite sides of black square {s} (bottom,right,top,left = {used:?})"
        ))),
    }
}

/// The bipartite black/white square graph a Hamiltonian path allows.
#[derive(Debug, Clone)]
pub struct BlackSquareGraph {
    grid: Grid,
    black: Vec<Square>,
    white: Vec<Square>,
    orientation: Vec<Orientation>,
    // adjacency[b] = indices into `white`
    adjacency: Vec<Vec<usize>>,
}

impl BlackSquareGraph {
    pub fn build(h: &HamPath) -> Result<Self> {
        let grid = h.grid();
        let (black, white): (Vec<Square>, Vec<Square>) = grid
            .squares()
            .partition(|s| s.color() == SquareColor::Black);
        let w_index = |s: Square| white.binary_search(&s).ok();
        let mut orientation = Vec::with_capacity(black.len());
        let mut adjacency = Vec::with_capacity(black.len());
        for &b in &black {
            let o = black_square_orientation(h, b)?;
            let (x, y) = (b.x as i64, b.y as i64);
            let cands = match o {
                Orientation::Horizontal => [(x - 1, y), (x + 1, y)],
                Orientation::Vertical => [(x, y - 1), (x, y + 1)],
            };
            let adj = cands
                .iter()
                .filter(|&&(cx, cy)| cx >= 1 && cy >= 1)
                .filter_map(|&(cx, cy)| {
                    let s = Square::new(cx as u32, cy as u32);
                    grid.contains_square(s).then(|| w_index(s)).flatten()
                })
                .collect();
            orientation.push(o);
            adjacency.push(adj);
        }
        Ok(BlackSquareGraph {
            grid,
            black,
            white,
            orientation,
            adjacency,
        })
    }

    pub fn black_squares(&self) -> &[Square] {
        &self.black
    }

    pub fn white_squares(&self) -> &[Square] {
        &self.white
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Admissible white partners of a black square.
    pub fn neighbors(&self, black: Square) -> Vec<Square> {
        match self.black.binary_search(&black) {
            Ok(i) => self.adjacency[i].iter().map(|&w| self.white[w]).collect(),
            Err(_) => Vec::new(),
        }
    }

    pub fn orientation(&self, black: Square) -> Option<Orientation> {
        self.black
            .binary_search(&black)
            .ok()
            .map(|i| self.orientation[i])
    }

    /// Union-find over all edges; false as soon as one closes a cycle.
    pub fn is_forest(&self) -> bool {
        let nb = self.black.len();
        let mut parent: Vec<usize> = (0..nb + self.white.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (b, adj) in self.adjacency.iter().enumerate() {
            for &w in adj {
                let (rb, rw) = (find(&mut parent, b), find(&mut parent, nb + w));
                if rb == rw {
                    return false;
                }
                parent[rb] = rw;
            }
        }
        true
    }

    /// The perfect matching, by repeatedly matching a degree-one node to its
    /// only neighbour. Succeeding at all certifies uniqueness on a forest.
    pub fn unique_perfect_matching(&self) -> Result<Vec<(Square, Square)>> {
        let nb = self.black.len();
        let n = nb + self.white.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, ws) in self.adjacency.iter().enumerate() {
            for &w in ws {
                adj[b].push(nb + w);
                adj[nb + w].push(b);
            }
        }
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut matched = vec![false; n];
        let mut pairs = Vec::with_capacity(nb);
        let mut leaves: VecDeque<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
        if let Some(i) = (0..n).find(|&i| degree[i] == 0) {
            return Err(Error::Consistency(format!(
                "square {} has no admissible partner",
                self.node(i)
            )));
        }
        while let Some(u) = leaves.pop_front() {
            if matched[u] {
                continue;
            }
            let Some(&v) = adj[u].iter().find(|&&v| !matched[v]) else {
                return Err(Error::Consistency(format!(
                    "square {} lost its last partner",
                    self.node(u)
                )));
            };
            matched[u] = true;
            matched[v] = true;
            let (b, w) = if u < nb { (u, v - nb) } else { (v, u - nb) };
            pairs.push((self.black[b], self.white[w]));
            for &k in &adj[v] {
                if !matched[k] {
                    degree[k] -= 1;
                    match degree[k] {
                        0 => {
                            return Err(Error::Consistency(format!(
                                "square {} lost its last partner",
                                self.node(k)
                            )))
                        }
                        1 => leaves.push_back(k),
                        _ => {}
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| !matched[i]) {
            return Err(Error::Consistency(format!(
                "leaf peeling stalled at square {}",
                self.node(i)
            )));
        }
        pairs.sort();
        Ok(pairs)
    }

    fn node(&self, i: usize) -> Square {
        if i < self.black.len() {
            self.black[i]
        } else {
            self.white[i - self.black.len()]
        }
    }

    fn tiling(&self) -> Result<Tiling> {
        if !self.is_forest() {
            return Err(Error::Consistency(
                "black-square graph contains a cycle".into(),
            ));
        }
        let pairs = self.unique_perfect_matching()?;
        let dominoes = pairs
            .into_iter()
            .map(|(b, w)| Domino::from_squares(b, w))
            .collect::<Result<Vec<_>>>()?;
        Tiling::new(self.grid, dominoes).map_err(|e| Error::Consistency(e.to_string()))
    }
}

/// Path to tiling without the transpose step, valid for either parity of `p`.
pub fn path_to_tiling_direct(h: &HamPath) -> Result<Tiling> {
    let tiling = BlackSquareGraph::build(h)?.tiling()?;
    if tiling_to_path(&h.grid(), &tiling)? != *h {
        return Err(Error::Consistency(
            "tiling does not map back to the input path".into(),
        ));
    }
    Ok(tiling)
}

/// The unique tiling every domino of which `h` avoids. Grids with even `p`
/// are transposed first so the decoding always runs with `p` odd.
pub fn path_to_tiling(grid: &Grid, h: &HamPath) -> Result<Tiling> {
    same_grid(*grid, h.grid())?;
    match (grid.p() % 2, grid.q() % 2) {
        (0, 0) => Err(Error::Consistency(format!(
            "{}x{} grid cannot carry a Hamiltonian path",
            grid.p(),
            grid.q()
        ))),
        (0, _) => {
            let t = path_to_tiling_direct(&h.transpose())?.transpose();
            if tiling_to_path(grid, &t)? != *h {
                return Err(Error::Consistency(
                    "tiling does not map back to the input path".into(),
                ));
            }
            Ok(t)
        }
        _ => path_to_tiling_direct(h),
    }
}

/// True iff `h` avoids every domino of `t`.
pub fn verify_avoidance(grid: &Grid, h: &HamPath, t: &Tiling) -> Result<bool> {
    same_grid(*grid, h.grid())?;
    same_grid(*grid, t.grid())?;
    avoids_all(h, t)
}

/// Outcome of checking the bijection exhaustively on one grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceReport {
    pub p: u32,
    pub q: u32,
    pub tilings: usize,
    pub paths: usize,
    /// Some mismatched (path, tiling) pair was correctly rejected by the
    /// avoidance check. Vacuously true with fewer than two tilings.
    pub mismatch_rejected: bool,
}

/// Enumerates every tiling and every path of `DGG_{p,q}`, maps each through
/// the bijection in both directions, and checks that the two maps are mutual
/// inverses and that each matched pair passes the avoidance check.
pub fn verify_instance(p: u32, q: u32, exec: Execution) -> Result<InstanceReport> {
    let grid = Grid::new(p, q)?;
    let tilings: Vec<Tiling> = enumerate_tilings(p, q)?.collect();
    let paths: Vec<HamPath> = enumerate_ham_paths(&grid).collect();

    let images = exec.map(&tilings, |t| -> Result<HamPath> {
        let h = tiling_to_path(&grid, t)?;
        if path_to_tiling(&grid, &h)? != *t {
            return Err(Error::Consistency(format!(
                "{p}x{q}: tiling does not survive a roundtrip"
            )));
        }
        if !verify_avoidance(&grid, &h, t)? {
            return Err(Error::Consistency(format!(
                "{p}x{q}: image path bisects its tiling"
            )));
        }
        Ok(h)
    });
    let images = images.into_iter().collect::<Result<Vec<_>>>()?;
    let preimages = exec.map(&paths, |h| -> Result<Tiling> {
        let t = path_to_tiling(&grid, h)?;
        if tiling_to_path(&grid, &t)? != *h {
            return Err(Error::Consistency(format!(
                "{p}x{q}: path does not survive a roundtrip"
            )));
        }
        Ok(t)
    });
    let preimages = preimages.into_iter().collect::<Result<Vec<_>>>()?;

    if tilings.len() != paths.len() {
        return Err(Error::Consistency(format!(
            "{p}x{q}: {} tilings but {} paths",
            tilings.len(),
            paths.len()
        )));
    }
    let distinct_images: BTreeSet<&[Vertex]> = images.iter().map(|h| h.vertices()).collect();
    if distinct_images.len() != images.len() {
        return Err(Error::Consistency(format!(
            "{p}x{q}: two tilings share a path"
        )));
    }
    let distinct_pre: std::collections::HashSet<&Tiling> = preimages.iter().collect();
    if distinct_pre.len() != preimages.len() {
        return Err(Error::Consistency(format!(
            "{p}x{q}: two paths share a tiling"
        )));
    }

    let mismatch_rejected = if tilings.len() >= 2 {
        !verify_avoidance(&grid, &images[0], &tilings[1])?
    } else {
        true
    };
    Ok(InstanceReport {
        p,
        q,
        tilings: tilings.len(),
        paths: paths.len(),
        mismatch_rejected,
    })
}
