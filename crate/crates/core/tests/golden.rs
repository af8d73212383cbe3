//! Byte-for-byte comparison of rendered output against checked-in files.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use dgg_core::ham::collect_ham_paths;
use dgg_core::render::{render_ascii, render_svg, Payload, RenderKind, RenderSpec};
use dgg_core::{Execution, Grid, HamPath, Vertex};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden copy");
}

fn path_5x4() -> HamPath {
    let pts = [
        (1, 1),
        (2, 1),
        (3, 1),
        (3, 2),
        (2, 2),
        (1, 2),
        (1, 3),
        (2, 3),
        (3, 3),
        (4, 3),
        (4, 2),
        (4, 1),
        (5, 1),
        (5, 2),
        (5, 3),
        (5, 4),
        (4, 4),
        (3, 4),
        (2, 4),
        (1, 4),
    ];
    let g = Grid::new(5, 4).unwrap();
    HamPath::new(g, pts.iter().map(|&(x, y)| Vertex::new(x, y)).collect()).unwrap()
}

#[test]
fn grid_5x4_svg() {
    let g = Grid::new(5, 4).unwrap();
    check(
        "grid_5x4.svg",
        &render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::Grid)).unwrap(),
    );
}

#[test]
fn path_5x4_svg() {
    let h = path_5x4();
    check(
        "path_5x4.svg",
        &render_svg(
            &h.grid(),
            Payload::Path(&h),
            &RenderSpec::new(RenderKind::Path),
        )
        .unwrap(),
    );
}

#[test]
fn paths_3x3_ascii() {
    let g = Grid::new(3, 3).unwrap();
    let spec = RenderSpec::new(RenderKind::Path);
    let paths = collect_ham_paths(&g, Execution::Sequential);
    assert_eq!(paths.len(), 2);
    let text: Vec<String> = paths
        .iter()
        .map(|h| render_ascii(&g, Payload::Path(h), &spec).unwrap())
        .collect();
    check("paths_3x3.txt", &text.join("\n"));
}
