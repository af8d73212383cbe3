//! The odd-even directed grid graph on `{1..p} x {1..q}`.
//!
//! Horizontal arcs point right on odd rows and left on even rows; vertical
//! arcs point up on odd columns and down on even columns. Arcs are never
//! stored: membership and adjacency are answered from coordinate parity.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A lattice point, 1-based. Ordered row-major: `y` first, then `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub x: u32,
    pub y: u32,
}

impl Vertex {
    pub const fn new(x: u32, y: u32) -> Self {
        Vertex { x, y }
    }

    pub fn transpose(self) -> Self {
        Vertex {
            x: self.y,
            y: self.x,
        }
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.x, self.y)
    }
}

/// A directed edge between two lattice neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub from: Vertex,
    pub to: Vertex,
}

impl Arc {
    pub const fn new(from: Vertex, to: Vertex) -> Self {
        Arc { from, to }
    }

    pub fn is_horizontal(&self) -> bool {
        self.from.y == self.to.y
    }

    pub fn transpose(self) -> Self {
        Arc {
            from: self.from.transpose(),
            to: self.to.transpose(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// A unit square of the board, named by its bottom-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub x: u32,
    pub y: u32,
}

impl Square {
    pub const fn new(x: u32, y: u32) -> Self {
        Square { x, y }
    }

    pub fn color(self) -> SquareColor {
        square_color(self.x, self.y)
    }

    /// Corners in counter-clockwise order from the bottom-left.
    pub fn corners(self) -> [Vertex; 4] {
        let (x, y) = (self.x, self.y);
        [
            Vertex::new(x, y),
            Vertex::new(x + 1, y),
            Vertex::new(x + 1, y + 1),
            Vertex::new(x, y + 1),
        ]
    }

    pub fn transpose(self) -> Self {
        Square {
            x: self.y,
            y: self.x,
        }
    }
}

impl Ord for Square {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Square {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareColor {
    Black,
    White,
}

/// Chessboard colour of the square with bottom-left corner `(x, y)`.
pub fn square_color(x: u32, y: u32) -> SquareColor {
    if (x + y).is_multiple_of(2) {
        SquareColor::Black
    } else {
        SquareColor::White
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    p: u32,
    q: u32,
}

pub fn build_grid(p: u32, q: u32) -> Result<Grid> {
    Grid::new(p, q)
}

impl Grid {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidDimensions { p, q });
        }
        Ok(Grid { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.p as usize * self.q as usize
    }

    /// `2pq - p - q`.
    pub fn arc_count(&self) -> usize {
        2 * self.vertex_count() - self.p as usize - self.q as usize
    }

    pub fn square_count(&self) -> usize {
        (self.p as usize - 1) * (self.q as usize - 1)
    }

    pub fn transpose(&self) -> Grid {
        Grid {
            p: self.q,
            q: self.p,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.p).contains(&v.x) && (1..=self.q).contains(&v.y)
    }

    pub fn contains_square(&self, s: Square) -> bool {
        (1..self.p).contains(&s.x) && (1..self.q).contains(&s.y)
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                p: self.p,
                q: self.q,
            })
        }
    }

    /// Dense row-major index of `v`.
    #[inline]
    pub fn index(&self, v: Vertex) -> usize {
        (v.y as usize - 1) * self.p as usize + (v.x as usize - 1)
    }

    #[inline]
    pub fn vertex_at(&self, index: usize) -> Vertex {
        let p = self.p as usize;
        Vertex::new((index % p) as u32 + 1, (index / p) as u32 + 1)
    }

    /// All vertices in canonical `(y, x)` order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.q).flat_map(move |y| (1..=self.p).map(move |x| Vertex::new(x, y)))
    }

    /// All board squares in canonical `(y, x)` order.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (1..self.q).flat_map(move |y| (1..self.p).map(move |x| Square::new(x, y)))
    }

    pub fn square_color(&self, x: u32, y: u32) -> Result<SquareColor> {
        let s = Square::new(x, y);
        if self.contains_square(s) {
            Ok(s.color())
        } else {
            Err(Error::SquareOutOfRange {
                square: s,
                p: self.p,
                q: self.q,
            })
        }
    }

    fn horizontal_successor(&self, v: Vertex) -> Option<Vertex> {
        if v.y % 2 == 1 {
            (v.x < self.p).then(|| Vertex::new(v.x + 1, v.y))
        } else {
            (v.x > 1).then(|| Vertex::new(v.x - 1, v.y))
        }
    }

    fn vertical_successor(&self, v: Vertex) -> Option<Vertex> {
        if v.x % 2 == 1 {
            (v.y < self.q).then(|| Vertex::new(v.x, v.y + 1))
        } else {
            (v.y > 1).then(|| Vertex::new(v.x, v.y - 1))
        }
    }

    /// Out-neighbours of an in-range vertex, horizontal first.
    #[inline]
    pub fn successors(&self, v: Vertex) -> [Option<Vertex>; 2] {
        [self.horizontal_successor(v), self.vertical_successor(v)]
    }

    /// In-neighbours of an in-range vertex, horizontal first.
    pub fn predecessors(&self, v: Vertex) -> [Option<Vertex>; 2] {
        // the horizontal arc into v comes from the side opposite the row direction
        let h = if v.y % 2 == 1 {
            (v.x > 1).then(|| Vertex::new(v.x - 1, v.y))
        } else {
            (v.x < self.p).then(|| Vertex::new(v.x + 1, v.y))
        };
        let vert = if v.x % 2 == 1 {
            (v.y > 1).then(|| Vertex::new(v.x, v.y - 1))
        } else {
            (v.y < self.q).then(|| Vertex::new(v.x, v.y + 1))
        };
        [h, vert]
    }

    pub fn out_arcs(&self, v: Vertex) -> Result<Vec<Arc>> {
        self.check(v)?;
        Ok(self
            .successors(v)
            .into_iter()
            .flatten()
            .map(|w| Arc::new(v, w))
            .collect())
    }

    pub fn in_arcs(&self, v: Vertex) -> Result<Vec<Arc>> {
        self.check(v)?;
        Ok(self
            .predecessors(v)
            .into_iter()
            .flatten()
            .map(|u| Arc::new(u, v))
            .collect())
    }

    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        self.contains(from) && self.successors(from).contains(&Some(to))
    }

    /// The directed arc on the lattice edge `{a, b}`, if the two are neighbours.
    pub fn arc_between(&self, a: Vertex, b: Vertex) -> Option<Arc> {
        if self.has_arc(a, b) {
            Some(Arc::new(a, b))
        } else if self.has_arc(b, a) {
            Some(Arc::new(b, a))
        } else {
            None
        }
    }

    /// Materialized arc list: row-major by tail, horizontal before vertical.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::with_capacity(self.arc_count());
        for v in self.vertices() {
            out.extend(
                self.successors(v)
                    .into_iter()
                    .flatten()
                    .map(|w| Arc::new(v, w)),
            );
        }
        out
    }

    /// The four sides of a board square as grid arcs: bottom, right, top, left.
    pub fn square_sides(&self, s: Square) -> [Arc; 4] {
        let [a, b, c, d] = s.corners();
        let side = |u, w| {
            self.arc_between(u, w)
                .expect("square sides are lattice edges")
        };
        [side(a, b), side(b, c), side(c, d), side(d, a)]
    }
}
