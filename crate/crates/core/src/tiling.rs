//! Dominoes on the `(p-1) x (q-1)` board of unit squares and their tilings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Arc, Grid, Square, SquareColor, Vertex};
use crate::ham::HamPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Where the white square sits relative to the black one, along the
/// domino's long axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WhiteSide {
    TowardIncreasing,
    TowardDecreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domino {
    black: Square,
    orientation: Orientation,
    white_side: WhiteSide,
}

impl Domino {
    pub fn new(black: Square, orientation: Orientation, white_side: WhiteSide) -> Result<Self> {
        if black.x == 0 || black.y == 0 {
            return Err(Error::InvalidDomino(format!(
                "square {black} has a zero coordinate"
            )));
        }
        if black.color() != SquareColor::Black {
            return Err(Error::InvalidDomino(format!("square {black} is not black")));
        }
        let d = Domino {
            black,
            orientation,
            white_side,
        };
        let w = d.white_unchecked();
        if w.x == 0 || w.y == 0 {
            return Err(Error::InvalidDomino(format!(
                "white partner of {black} leaves the board"
            )));
        }
        Ok(d)
    }

    /// The domino covering two edge-adjacent squares, in either order.
    pub fn from_squares(a: Square, b: Square) -> Result<Self> {
        if a.x.abs_diff(b.x) + a.y.abs_diff(b.y) != 1 {
            return Err(Error::InvalidDomino(format!(
                "squares {a} and {b} are not adjacent"
            )));
        }
        let (black, white) = if a.color() == SquareColor::Black {
            (a, b)
        } else {
            (b, a)
        };
        let orientation = if black.y == white.y {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        };
        let increasing = match orientation {
            Orientation::Horizontal => white.x > black.x,
            Orientation::Vertical => white.y > black.y,
        };
        let side = if increasing {
            WhiteSide::TowardIncreasing
        } else {
            WhiteSide::TowardDecreasing
        };
        Domino::new(black, orientation, side)
    }

    pub fn black(&self) -> Square {
        self.black
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn white_side(&self) -> WhiteSide {
        self.white_side
    }

    fn white_unchecked(&self) -> Square {
        let Square { x, y } = self.black;
        match (self.orientation, self.white_side) {
            (Orientation::Horizontal, WhiteSide::TowardIncreasing) => Square::new(x + 1, y),
            (Orientation::Horizontal, WhiteSide::TowardDecreasing) => Square::new(x - 1, y),
            (Orientation::Vertical, WhiteSide::TowardIncreasing) => Square::new(x, y + 1),
            (Orientation::Vertical, WhiteSide::TowardDecreasing) => Square::new(x, y - 1),
        }
    }

    pub fn white(&self) -> Square {
        self.white_unchecked()
    }

    pub fn squares(&self) -> [Square; 2] {
        [self.black, self.white()]
    }

    /// Bottom-left square of the domino's bounding rectangle.
    pub fn origin(&self) -> Square {
        let w = self.white();
        Square::new(self.black.x.min(w.x), self.black.y.min(w.y))
    }

    pub fn fits(&self, grid: &Grid) -> bool {
        self.squares().iter().all(|&s| grid.contains_square(s))
    }

    /// The six perimeter lattice points, counter-clockwise from the
    /// bottom-left corner.
    pub fn perimeter(&self) -> [Vertex; 6] {
        let Square { x, y } = self.origin();
        match self.orientation {
            Orientation::Horizontal => [
                Vertex::new(x, y),
                Vertex::new(x + 1, y),
                Vertex::new(x + 2, y),
                Vertex::new(x + 2, y + 1),
                Vertex::new(x + 1, y + 1),
                Vertex::new(x, y + 1),
            ],
            Orientation::Vertical => [
                Vertex::new(x, y),
                Vertex::new(x + 1, y),
                Vertex::new(x + 1, y + 1),
                Vertex::new(x + 1, y + 2),
                Vertex::new(x, y + 2),
                Vertex::new(x, y + 1),
            ],
        }
    }

    pub fn transpose(&self) -> Domino {
        let orientation = match self.orientation {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        };
        Domino {
            black: self.black.transpose(),
            orientation,
            white_side: self.white_side,
        }
    }
}

/// The labels `D_1..D_6` around a domino such that every `D_j -> D_{j+1}`
/// is an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalNumbering {
    d: [Vertex; 6],
}

impl CanonicalNumbering {
    /// `D_j` for `j` in `1..=6`.
    pub fn get(&self, j: usize) -> Vertex {
        self.d[j - 1]
    }

    pub fn vertices(&self) -> &[Vertex; 6] {
        &self.d
    }

    /// `D_5 -> D_2`, across the shorter symmetry axis.
    pub fn axis_arc(&self) -> Arc {
        Arc::new(self.d[4], self.d[1])
    }

    /// `D_1 -> D_6`, the far side of the black square.
    pub fn black_end_arc(&self) -> Arc {
        Arc::new(self.d[0], self.d[5])
    }

    /// The five arcs `D_j -> D_{j+1}`.
    pub fn chain(&self) -> impl Iterator<Item = Arc> + '_ {
        self.d.windows(2).map(|w| Arc::new(w[0], w[1]))
    }
}

/// Finds the canonical numbering by testing every rotation and reflection of
/// the perimeter walk. Exactly one must pass.
pub fn canonical_numbering(grid: &Grid, d: &Domino) -> Result<CanonicalNumbering> {
    if !d.fits(grid) {
        return Err(Error::InvalidDomino(format!(
            "domino at {} does not fit the {}x{} grid",
            d.black(),
            grid.p(),
            grid.q()
        )));
    }
    let ring = d.perimeter();
    let mut found = None;
    let mut hits = 0;
    for start in 0..6 {
        for step in [1usize, 5] {
            let cand: [Vertex; 6] = std::array::from_fn(|j| ring[(start + j * step) % 6]);
            if cand.windows(2).all(|w| grid.has_arc(w[0], w[1])) {
                hits += 1;
                found = Some(cand);
            }
        }
    }
    match (hits, found) {
        (1, Some(d6)) => {
            let black = d.black().corners();
            if ![0, 1, 4, 5].iter().all(|&j| black.contains(&d6[j])) {
                return Err(Error::Consistency(format!(
                    "canonical numbering of {} does not start on the black square",
                    d.black()
                )));
            }
            Ok(CanonicalNumbering { d: d6 })
        }
        _ => Err(Error::Consistency(format!(
            "domino at {} has {hits} canonical numberings",
            d.black()
        ))),
    }
}

/// A complete, non-overlapping domino cover of the board, keyed by each
/// domino's black square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tiling {
    grid: Grid,
    dominoes: BTreeMap<Square, Domino>,
}

impl Tiling {
    pub fn new(grid: Grid, dominoes: impl IntoIterator<Item = Domino>) -> Result<Self> {
        let w = grid.p() as usize - 1;
        let mut covered = vec![false; grid.square_count()];
        let mut map = BTreeMap::new();
        for d in dominoes {
            if !d.fits(&grid) {
                return Err(Error::InvalidTiling(format!(
                    "domino at {} leaves the board",
                    d.black()
                )));
            }
            for s in d.squares() {
                let i = (s.y as usize - 1) * w + (s.x as usize - 1);
                if covered[i] {
                    return Err(Error::InvalidTiling(format!("square {s} covered twice")));
                }
                covered[i] = true;
            }
            map.insert(d.black(), d);
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            let s = Square::new((i % w) as u32 + 1, (i / w) as u32 + 1);
            return Err(Error::InvalidTiling(format!("square {s} is not covered")));
        }
        Ok(Tiling {
            grid,
            dominoes: map,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }

    /// Dominoes in canonical order of their black squares.
    pub fn dominoes(&self) -> impl Iterator<Item = &Domino> + '_ {
        self.dominoes.values()
    }

    pub fn domino_with_black(&self, black: Square) -> Option<&Domino> {
        self.dominoes.get(&black)
    }

    /// The domino covering `s`.
    pub fn domino_covering(&self, s: Square) -> Option<&Domino> {
        match s.color() {
            SquareColor::Black => self.dominoes.get(&s),
            SquareColor::White => [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .filter_map(|&(dx, dy)| {
                    let (x, y) = (s.x as i64 + dx, s.y as i64 + dy);
                    (x >= 1 && y >= 1).then(|| Square::new(x as u32, y as u32))
                })
                .filter_map(|b| self.dominoes.get(&b))
                .find(|d| d.white() == s),
        }
    }

    pub fn transpose(&self) -> Tiling {
        Tiling::new(
            self.grid.transpose(),
            self.dominoes().map(Domino::transpose),
        )
        .expect("transposition preserves tilings")
    }

    pub fn to_json(&self) -> String {
        let wire = TilingJson {
            p: self.grid.p(),
            q: self.grid.q(),
            dominoes: self
                .dominoes()
                .map(|d| DominoJson {
                    black: [d.black.x, d.black.y],
                    orientation: match d.orientation {
                        Orientation::Horizontal => "H".into(),
                        Orientation::Vertical => "V".into(),
                    },
                    white_side: match d.white_side {
                        WhiteSide::TowardIncreasing => "+".into(),
                        WhiteSide::TowardDecreasing => "-".into(),
                    },
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: TilingJson = serde_json::from_str(text)?;
        let grid = Grid::new(wire.p, wire.q)?;
        let mut dominoes = Vec::with_capacity(wire.dominoes.len());
        for d in wire.dominoes {
            let orientation = match d.orientation.as_str() {
                "H" => Orientation::Horizontal,
                "V" => Orientation::Vertical,
                other => return Err(Error::InvalidDomino(format!("orientation {other:?}"))),
            };
            let side = match d.white_side.as_str() {
                "+" => WhiteSide::TowardIncreasing,
                "-" => WhiteSide::TowardDecreasing,
                other => return Err(Error::InvalidDomino(format!("white_side {other:?}"))),
            };
            dominoes.push(Domino::new(
                Square::new(d.black[0], d.black[1]),
                orientation,
                side,
            )?);
        }
        Tiling::new(grid, dominoes)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingJson {
    p: u32,
    q: u32,
    dominoes: Vec<DominoJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DominoJson {
    black: [u32; 2],
    orientation: String,
    white_side: String,
}

struct Choice {
    cell: usize,
    next: u8,
    placed: Option<usize>,
}

/// Lazy stream of all tilings. Fills the lowest-leftmost uncovered square
/// first, trying a horizontal domino before a vertical one.
pub struct Tilings {
    grid: Grid,
    width: usize,
    height: usize,
    covered: Vec<bool>,
    stack: Vec<Choice>,
    started: bool,
    done: bool,
}

impl Tilings {
    fn first_uncovered(&self, from: usize) -> Option<usize> {
        (from..self.covered.len()).find(|&i| !self.covered[i])
    }

    fn square(&self, cell: usize) -> Square {
        Square::new(
            (cell % self.width) as u32 + 1,
            (cell / self.width) as u32 + 1,
        )
    }

    fn partner(&self, cell: usize, choice: u8) -> Option<usize> {
        let (x, y) = (cell % self.width, cell / self.width);
        let other = match choice {
            0 if x + 1 < self.width => cell + 1,
            1 if y + 1 < self.height => cell + self.width,
            _ => return None,
        };
        (!self.covered[other]).then_some(other)
    }

    fn snapshot(&self) -> Tiling {
        let dominoes = self.stack.iter().map(|c| {
            let other = c.placed.expect("complete stacks have every choice placed");
            Domino::from_squares(self.square(c.cell), self.square(other))
                .expect("adjacent squares form a domino")
        });
        Tiling::new(self.grid, dominoes).expect("search yields valid tilings")
    }
}

impl Iterator for Tilings {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            let area = self.covered.len();
            if area == 0 {
                self.done = true;
                return Some(Tiling {
                    grid: self.grid,
                    dominoes: BTreeMap::new(),
                });
            }
            if area % 2 == 1 {
                self.done = true;
                return None;
            }
            self.stack.push(Choice {
                cell: 0,
                next: 0,
                placed: None,
            });
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            let cell = top.cell;
            if let Some(other) = top.placed.take() {
                self.covered[cell] = false;
                self.covered[other] = false;
            }
            let top = self.stack.last_mut().unwrap();
            if top.next > 1 {
                self.stack.pop();
                continue;
            }
            let choice = top.next;
            top.next += 1;
            let Some(other) = self.partner(cell, choice) else {
                continue;
            };
            self.covered[cell] = true;
            self.covered[other] = true;
            self.stack.last_mut().unwrap().placed = Some(other);
            match self.first_uncovered(cell + 1) {
                None => return Some(self.snapshot()),
                Some(c) => self.stack.push(Choice {
                    cell: c,
                    next: 0,
                    placed: None,
                }),
            }
        }
    }
}

pub fn enumerate_tilings(p: u32, q: u32) -> Result<Tilings> {
    let grid = Grid::new(p, q)?;
    let (width, height) = (p as usize - 1, q as usize - 1);
    Ok(Tilings {
        grid,
        width,
        height,
        covered: vec![false; width * height],
        stack: Vec::new(),
        started: false,
        done: false,
    })
}

/// Exact number of domino tilings of the `(p-1) x (q-1)` board.
///
/// Broken-profile dynamic programming: the sweep runs along the longer side,
/// one cell at a time, and the profile holds one bit per row of the shorter
/// side. Bit `i` is set when that cell of the frontier is already covered by
/// a domino reaching over from behind.
pub fn count_tilings_exact(p: u32, q: u32) -> BigUint {
    let (w, h) = (p.saturating_sub(1) as usize, q.saturating_sub(1) as usize);
    if w == 0 || h == 0 {
        return BigUint::one();
    }
    if (w * h) % 2 == 1 {
        return BigUint::zero();
    }
    let (rows, cols) = (w.min(h), w.max(h));
    let states = 1usize << rows;
    let mut dp = vec![BigUint::zero(); states];
    let mut next = vec![BigUint::zero(); states];
    dp[0] = BigUint::one();
    for col in 0..cols {
        for row in 0..rows {
            for slot in next.iter_mut() {
                slot.set_zero();
            }
            for (mask, ways) in dp.iter().enumerate() {
                if ways.is_zero() {
                    continue;
                }
                let bit = 1 << row;
                if mask & bit != 0 {
                    next[mask & !bit] += ways;
                    continue;
                }
                // lay along the sweep: covers this cell and the one in the next column
                if col + 1 < cols {
                    next[mask | bit] += ways;
                }
                // lay across the sweep: covers this cell and the next row in this column
                if row + 1 < rows && mask & (bit << 1) == 0 {
                    next[mask | (bit << 1)] += ways;
                }
            }
            std::mem::swap(&mut dp, &mut next);
        }
    }
    std::mem::take(&mut dp[0])
}

/// True iff `path` does not use the domino's axis arc `D_5 -> D_2`.
pub fn avoids(path: &HamPath, d: &Domino) -> Result<bool> {
    let numbering = canonical_numbering(&path.grid(), d)?;
    Ok(!path.uses_arc(numbering.axis_arc()))
}

/// True iff `path` avoids every domino of `tiling`.
pub fn avoids_all(path: &HamPath, tiling: &Tiling) -> Result<bool> {
    let (a, b) = (path.grid(), tiling.grid());
    if a != b {
        return Err(Error::GridMismatch(a.p(), a.q(), b.p(), b.q()));
    }
    for d in tiling.dominoes() {
        if !avoids(path, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}
