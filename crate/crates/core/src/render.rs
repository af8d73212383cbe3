//! Deterministic SVG and ASCII drawings of grids, paths and tilings.
//!
//! Lattice point `(x;y)` sits at canvas position
//! `((x-1)*cell + margin, (q-y)*cell + margin)` with the margin equal to one
//! cell, so row 1 is drawn at the bottom. All coordinates are integers and
//! output depends on nothing but the inputs.

use std::fmt::Write as _;

use crate::bijection::arc_set_a;
use crate::error::{Error, Result};
use crate::grid::{Arc, Grid, Square, SquareColor, Vertex};
use crate::ham::HamPath;
use crate::tiling::{canonical_numbering, Domino, Orientation, Tiling};

const ARC_STROKE: u32 = 2;
const DOMINO_STROKE: u32 = 3;
const NODE_RADIUS: u32 = 3;
const SHADE: &str = "#c8c8c8";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Grid,
    Path,
    Tiling,
    PathWithTiling,
    Chessboard,
    ArcSetA,
    CanonicalNumbering,
}

impl RenderKind {
    pub fn name(self) -> &'static str {
        match self {
            RenderKind::Grid => "grid",
            RenderKind::Path => "path",
            RenderKind::Tiling => "tiling",
            RenderKind::PathWithTiling => "path-with-tiling",
            RenderKind::Chessboard => "chessboard",
            RenderKind::ArcSetA => "arc-set-a",
            RenderKind::CanonicalNumbering => "canonical-numbering",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub kind: RenderKind,
    pub cell_size: u32,
    pub show_arrows: bool,
}

impl RenderSpec {
    pub fn new(kind: RenderKind) -> Self {
        RenderSpec {
            kind,
            cell_size: 40,
            show_arrows: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Payload<'a> {
    None,
    Path(&'a HamPath),
    Tiling(&'a Tiling),
    PathWithTiling(&'a HamPath, &'a Tiling),
    Domino(Domino),
}

/// What a drawing consists of, independent of the output format.
struct Scene {
    shaded: Vec<Square>,
    dominoes: Vec<Domino>,
    arcs: Vec<Arc>,
    labels: Vec<(Vertex, u8)>,
}

fn check_grid(grid: &Grid, other: Grid) -> Result<()> {
    if *grid == other {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            grid.p(),
            grid.q(),
            other.p(),
            other.q(),
        ))
    }
}

fn scene(grid: &Grid, payload: Payload<'_>, spec: &RenderSpec) -> Result<Scene> {
    if spec.cell_size < 8 {
        return Err(Error::CellSizeTooSmall(spec.cell_size));
    }
    let blacks = || {
        grid.squares()
            .filter(|s| s.color() == SquareColor::Black)
            .collect()
    };
    let mut s = Scene {
        shaded: Vec::new(),
        dominoes: Vec::new(),
        arcs: Vec::new(),
        labels: Vec::new(),
    };
    match (spec.kind, payload) {
        (RenderKind::Grid, Payload::None) => s.arcs = grid.arcs(),
        (RenderKind::Chessboard, Payload::None) => {
            s.shaded = blacks();
            s.arcs = grid.arcs();
        }
        (RenderKind::ArcSetA, Payload::None) => {
            s.shaded = blacks();
            s.arcs = arc_set_a(grid).into_iter().collect();
        }
        (RenderKind::Path, Payload::Path(h)) => {
            check_grid(grid, h.grid())?;
            s.arcs = h.arcs().collect();
        }
        (RenderKind::Tiling, Payload::Tiling(t)) => {
            check_grid(grid, t.grid())?;
            s.dominoes = t.dominoes().copied().collect();
        }
        (RenderKind::PathWithTiling, Payload::PathWithTiling(h, t)) => {
            check_grid(grid, h.grid())?;
            check_grid(grid, t.grid())?;
            s.dominoes = t.dominoes().copied().collect();
            s.arcs = h.arcs().collect();
        }
        (RenderKind::CanonicalNumbering, Payload::Domino(d)) => {
            let n = canonical_numbering(grid, &d)?;
            s.dominoes = vec![d];
            s.arcs = n.chain().collect();
            s.labels = n.vertices().iter().zip(1..).map(|(&v, j)| (v, j)).collect();
        }
        (kind, _) => return Err(Error::PayloadMismatch(kind.name())),
    }
    Ok(s)
}

struct Canvas {
    q: u32,
    cell: u32,
}

impl Canvas {
    fn point(&self, v: Vertex) -> (u32, u32) {
        (
            (v.x - 1) * self.cell + self.cell,
            (self.q - v.y) * self.cell + self.cell,
        )
    }
}

pub fn render_svg(grid: &Grid, payload: Payload<'_>, spec: &RenderSpec) -> Result<String> {
    let scene = scene(grid, payload, spec)?;
    let cell = spec.cell_size;
    let c = Canvas { q: grid.q(), cell };
    let width = (grid.p() + 1) * cell;
    let height = (grid.q() + 1) * cell;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );

    if !scene.shaded.is_empty() {
        let _ = writeln!(out, r#"<g class="squares" fill="{SHADE}" stroke="none">"#);
        for s in &scene.shaded {
            let (x, y) = c.point(Vertex::new(s.x, s.y + 1));
            let _ = writeln!(
                out,
                r#"<rect class="black" x="{x}" y="{y}" width="{cell}" height="{cell}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }

    if !scene.dominoes.is_empty() {
        let _ = writeln!(
            out,
            r##"<g class="dominoes" fill="none" stroke="#000000" stroke-width="{DOMINO_STROKE}">"##
        );
        for d in &scene.dominoes {
            let o = d.origin();
            let (w, h) = match d.orientation() {
                Orientation::Horizontal => (2 * cell, cell),
                Orientation::Vertical => (cell, 2 * cell),
            };
            let (x, y) = c.point(Vertex::new(o.x, o.y));
            let _ = writeln!(
                out,
                r#"<rect class="domino" x="{x}" y="{}" width="{w}" height="{h}"/>"#,
                y - h
            );
        }
        let _ = writeln!(out, "</g>");
    }

    if !scene.arcs.is_empty() {
        let _ = writeln!(
            out,
            r##"<g class="arcs" stroke="#1f4e9a" stroke-width="{ARC_STROKE}" fill="#1f4e9a">"##
        );
        let half = (cell / 10).max(2) as i64;
        for a in &scene.arcs {
            let (x1, y1) = c.point(a.from);
            let (x2, y2) = c.point(a.to);
            let _ = writeln!(
                out,
                r#"<line class="arc" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
            );
            if spec.show_arrows {
                let (mx, my) = (((x1 + x2) / 2) as i64, ((y1 + y2) / 2) as i64);
                let dx = (x2 as i64 - x1 as i64).signum();
                let dy = (y2 as i64 - y1 as i64).signum();
                let tip = (mx + dx * half, my + dy * half);
                let b1 = (mx - dx * half - dy * half, my - dy * half + dx * half);
                let b2 = (mx - dx * half + dy * half, my - dy * half - dx * half);
                let _ = writeln!(
                    out,
                    r#"<polygon class="arrow" points="{},{} {},{} {},{}"/>"#,
                    tip.0, tip.1, b1.0, b1.1, b2.0, b2.1
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r##"<g class="nodes" fill="#000000">"##);
    for v in grid.vertices() {
        let (x, y) = c.point(v);
        let _ = writeln!(
            out,
            r#"<circle class="node" cx="{x}" cy="{y}" r="{NODE_RADIUS}"/>"#
        );
    }
    let _ = writeln!(out, "</g>");

    if !scene.labels.is_empty() {
        let size = (cell / 3).max(8);
        let _ = writeln!(
            out,
            r##"<g class="labels" font-family="monospace" font-size="{size}" fill="#b00000">"##
        );
        for (v, j) in &scene.labels {
            let (x, y) = c.point(*v);
            let _ = writeln!(
                out,
                r#"<text class="label" x="{}" y="{}">{j}</text>"#,
                x + 4,
                y - 4
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Character drawing: nodes `o`, arcs `->` `<-` `^` `v`, domino boundaries
/// `--` and `|`, black squares `##`. Domino axes are left blank.
pub fn render_ascii(grid: &Grid, payload: Payload<'_>, spec: &RenderSpec) -> Result<String> {
    let scene = scene(grid, payload, spec)?;
    let (p, q) = (grid.p() as usize, grid.q() as usize);
    let (w, h) = (3 * (p - 1) + 1, 2 * (q - 1) + 1);
    let mut rows = vec![vec![' '; w]; h];
    let col = |x: u32| 3 * (x as usize - 1);
    let row = |y: u32| 2 * (q - y as usize);

    for s in &scene.shaded {
        let (r, c0) = (row(s.y) - 1, col(s.x) + 1);
        rows[r][c0] = '#';
        rows[r][c0 + 1] = '#';
    }

    // tiling boundaries: lattice edges not interior to a single domino
    let mut owner = std::collections::HashMap::new();
    for d in &scene.dominoes {
        for s in d.squares() {
            owner.insert(s, d.black());
        }
    }
    let covering = |x: i64, y: i64| -> Option<Square> {
        (x >= 1 && y >= 1)
            .then(|| owner.get(&Square::new(x as u32, y as u32)).copied())
            .flatten()
    };
    let separates = |a: Option<Square>, b: Option<Square>| (a.is_some() || b.is_some()) && a != b;
    if !scene.dominoes.is_empty() {
        for y in 1..=q as u32 {
            for x in 1..p as u32 {
                if separates(
                    covering(x as i64, y as i64 - 1),
                    covering(x as i64, y as i64),
                ) {
                    let c0 = col(x) + 1;
                    rows[row(y)][c0] = '-';
                    rows[row(y)][c0 + 1] = '-';
                }
            }
        }
        for y in 1..q as u32 {
            for x in 1..=p as u32 {
                if separates(
                    covering(x as i64 - 1, y as i64),
                    covering(x as i64, y as i64),
                ) {
                    rows[row(y) - 1][col(x)] = '|';
                }
            }
        }
    }

    for a in &scene.arcs {
        if a.is_horizontal() {
            let left = a.from.x.min(a.to.x);
            let c0 = col(left) + 1;
            let glyph = if a.to.x > a.from.x {
                ['-', '>']
            } else {
                ['<', '-']
            };
            rows[row(a.from.y)][c0] = glyph[0];
            rows[row(a.from.y)][c0 + 1] = glyph[1];
        } else {
            let low = a.from.y.min(a.to.y);
            rows[row(low) - 1][col(a.from.x)] = if a.to.y > a.from.y { '^' } else { 'v' };
        }
    }

    for v in grid.vertices() {
        rows[row(v.y)][col(v.x)] = 'o';
    }
    for (v, j) in &scene.labels {
        rows[row(v.y)][col(v.x)] = char::from(b'0' + j);
    }

    let mut out = String::new();
    for r in rows {
        let line: String = r.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Number of `<rect class="domino"` and `<line class="arc"` elements, for
/// checking drawings without parsing them.
pub fn svg_element_counts(svg: &str) -> (usize, usize) {
    (
        svg.matches(r#"class="domino""#).count(),
        svg.matches(r#"class="arc""#).count(),
    )
}

/// Number of arc glyphs in an ASCII drawing.
pub fn ascii_arc_glyphs(text: &str) -> usize {
    let mut n = 0;
    for line in text.lines() {
        n += line.matches("->").count() + line.matches("<-").count();
        n += line.chars().filter(|&c| c == '^' || c == 'v').count();
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::enumerate_ham_paths;
    use crate::tiling::{enumerate_tilings, WhiteSide};

    #[test]
    fn grid_5x4_svg() {
        let g = Grid::new(5, 4).unwrap();
        let svg = render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::Grid)).unwrap();
        assert_eq!(svg.matches(r#"class="node""#).count(), 20);
        assert_eq!(svg_element_counts(&svg), (0, 31));
        assert_eq!(svg.matches(r#"class="arrow""#).count(), 31);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn single_node() {
        let g = Grid::new(1, 1).unwrap();
        let spec = RenderSpec::new(RenderKind::Grid);
        let svg = render_svg(&g, Payload::None, &spec).unwrap();
        assert_eq!(svg.matches(r#"class="node""#).count(), 1);
        assert_eq!(svg_element_counts(&svg), (0, 0));
        assert_eq!(render_ascii(&g, Payload::None, &spec).unwrap(), "o\n");
    }

    #[test]
    fn column_ascii() {
        let g = Grid::new(1, 3).unwrap();
        let text = render_ascii(&g, Payload::None, &RenderSpec::new(RenderKind::Grid)).unwrap();
        assert_eq!(text, "o\n^\no\n^\no\n");
    }

    #[test]
    fn two_by_three_path_ascii() {
        let g = Grid::new(2, 3).unwrap();
        let h = enumerate_ham_paths(&g).next().unwrap();
        let text = render_ascii(&g, Payload::Path(&h), &RenderSpec::new(RenderKind::Path)).unwrap();
        assert_eq!(text, "o->o\n^  v\no  o\n^  v\no  o\n");
        assert_eq!(text.matches('o').count(), 6);
        assert_eq!(ascii_arc_glyphs(&text), 5);
    }

    #[test]
    fn three_by_three_paths_differ() {
        let g = Grid::new(3, 3).unwrap();
        let spec = RenderSpec::new(RenderKind::Path);
        let drawings: Vec<_> = enumerate_ham_paths(&g)
            .map(|h| render_ascii(&g, Payload::Path(&h), &spec).unwrap())
            .collect();
        assert_eq!(drawings.len(), 2);
        assert_ne!(drawings[0], drawings[1]);
    }

    #[test]
    fn counts_and_determinism() {
        let g = Grid::new(5, 5).unwrap();
        for t in enumerate_tilings(5, 5).unwrap().take(5) {
            let h = crate::bijection::tiling_to_path(&g, &t).unwrap();
            let spec = RenderSpec::new(RenderKind::PathWithTiling);
            let a = render_svg(&g, Payload::PathWithTiling(&h, &t), &spec).unwrap();
            let b = render_svg(&g, Payload::PathWithTiling(&h, &t), &spec).unwrap();
            assert_eq!(a, b);
            assert_eq!(svg_element_counts(&a), (8, 24));
            let spec = RenderSpec::new(RenderKind::Path);
            let text = render_ascii(&g, Payload::Path(&h), &spec).unwrap();
            assert_eq!(ascii_arc_glyphs(&text), 24);
        }
    }

    #[test]
    fn payload_mismatch() {
        let g = Grid::new(3, 3).unwrap();
        let h = enumerate_ham_paths(&g).next().unwrap();
        assert!(matches!(
            render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::Path)),
            Err(Error::PayloadMismatch("path"))
        ));
        assert!(matches!(
            render_ascii(&g, Payload::Path(&h), &RenderSpec::new(RenderKind::Tiling)),
            Err(Error::PayloadMismatch("tiling"))
        ));
        let mut spec = RenderSpec::new(RenderKind::Grid);
        spec.cell_size = 7;
        assert!(matches!(
            render_svg(&g, Payload::None, &spec),
            Err(Error::CellSizeTooSmall(7))
        ));
        let other = Grid::new(5, 3).unwrap();
        assert!(render_svg(
            &other,
            Payload::Path(&h),
            &RenderSpec::new(RenderKind::Path)
        )
        .is_err());
    }

    #[test]
    fn chessboard_and_arc_set() {
        let g = Grid::new(5, 4).unwrap();
        let svg = render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::Chessboard)).unwrap();
        assert_eq!(svg.matches(r#"class="black""#).count(), 6);
        let g = Grid::new(4, 3).unwrap();
        let svg = render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::ArcSetA)).unwrap();
        assert_eq!(svg_element_counts(&svg), (0, 12));
    }

    #[test]
    fn canonical_numbering_labels() {
        let g = Grid::new(5, 4).unwrap();
        let d = Domino::new(
            Square::new(3, 1),
            Orientation::Vertical,
            WhiteSide::TowardIncreasing,
        )
        .unwrap();
        let spec = RenderSpec::new(RenderKind::CanonicalNumbering);
        let text = render_ascii(&g, Payload::Domino(d), &spec).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // rows from the top: y = 4, 3, 2, 1
        assert_eq!(lines[2], "o  o  3->4  o");
        assert_eq!(lines[6], "o  o  1--6  o");
        let svg = render_svg(&g, Payload::Domino(d), &spec).unwrap();
        assert_eq!(svg.matches(r#"class="label""#).count(), 6);
        assert_eq!(svg_element_counts(&svg), (1, 5));
    }

    #[test]
    fn without_arrows() {
        let g = Grid::new(3, 3).unwrap();
        let mut spec = RenderSpec::new(RenderKind::Grid);
        spec.show_arrows = false;
        let svg = render_svg(&g, Payload::None, &spec).unwrap();
        assert_eq!(svg.matches("arrow").count(), 0);
    }
}
