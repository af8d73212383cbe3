use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use dgg_core::render::{render_svg, Payload, RenderKind, RenderSpec};
use dgg_core::{Domino, Grid, Square, Tiling};

fn dgg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn dgg_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dgg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgg-cli-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const ZIGZAG_PATH: &str = r#"{"p":5,"q":4,"vertices":[[1,1],[2,1],[3,1],[3,2],[2,2],[1,2],[1,3],[2,3],[3,3],[4,3],[4,2],[4,1],[5,1],[5,2],[5,3],[5,4],[4,4],[3,4],[2,4],[1,4]]}"#;

fn mixed_tiling() -> Tiling {
    let pairs = [
        ((1, 1), (2, 1)),
        ((1, 2), (2, 2)),
        ((1, 3), (2, 3)),
        ((3, 1), (3, 2)),
        ((4, 1), (4, 2)),
        ((3, 3), (4, 3)),
    ];
    let dominoes = pairs.iter().map(|&((ax, ay), (bx, by))| {
        Domino::from_squares(Square::new(ax, ay), Square::new(bx, by)).unwrap()
    });
    Tiling::new(Grid::new(5, 4).unwrap(), dominoes).unwrap()
}

#[test]
fn count_all_methods_agree() {
    let o = dgg(&["count", "--p", "5", "--q", "5", "--all-methods"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "36 / 36 / 36.000000 agree\n");
}

#[test]
fn count_single_methods() {
    assert_eq!(stdout(&dgg(&["count", "--p", "6", "--q", "8"])), "0\n");
    assert_eq!(stdout(&dgg(&["count", "--p", "3", "--q", "12"])), "144\n");
    assert_eq!(
        stdout(&dgg(&[
            "count",
            "--p",
            "7",
            "--q",
            "7",
            "--method",
            "enumerate"
        ])),
        "6728\n"
    );
    assert_eq!(
        stdout(&dgg(&[
            "count",
            "--p",
            "9",
            "--q",
            "8",
            "--method",
            "kasteleyn"
        ])),
        "1292697.000000\n"
    );
    let o = dgg(&[
        "--output",
        "json",
        "count",
        "--p",
        "4",
        "--q",
        "5",
        "--all-methods",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tilings"], "11");
    assert_eq!(v["agree"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&dgg(&["count", "--p", "0", "--q", "3"])), 2);
    assert_eq!(code(&dgg(&["count", "--p", "3"])), 2);
    assert_eq!(code(&dgg(&["frobnicate"])), 2);
    assert_eq!(
        code(&dgg(&[
            "count",
            "--p",
            "11",
            "--q",
            "10",
            "--method",
            "enumerate"
        ])),
        2
    );
    assert_eq!(
        code(&dgg(&[
            "enumerate",
            "--p",
            "11",
            "--q",
            "10",
            "--kind",
            "paths"
        ])),
        2
    );
    assert_eq!(
        code(&dgg(&[
            "enumerate",
            "--p",
            "3",
            "--q",
            "3",
            "--kind",
            "paths",
            "--format",
            "svg-dir"
        ])),
        2
    );
    assert_eq!(
        code(&dgg(&[
            "render",
            "--p",
            "3",
            "--q",
            "3",
            "--kind",
            "grid",
            "--cell-size",
            "4"
        ])),
        2
    );
    assert_eq!(
        code(&dgg(&[
            "render",
            "--p",
            "3",
            "--q",
            "3",
            "--kind",
            "canonical-numbering"
        ])),
        2
    );
    assert_eq!(code(&dgg(&["verify", "--section", "nope"])), 2);
}

#[test]
fn force_lifts_soft_limit() {
    let o = dgg(&[
        "--force",
        "enumerate",
        "--p",
        "11",
        "--q",
        "11",
        "--kind",
        "paths",
        "--limit",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn enumerate_streams_json_lines() {
    let o = dgg(&["enumerate", "--p", "3", "--q", "3", "--kind", "paths"]);
    assert_eq!(
        stdout(&o),
        "{\"p\":3,\"q\":3,\"vertices\":[[1,1],[2,1],[3,1],[3,2],[2,2],[1,2],[1,3],[2,3],[3,3]]}\n\
         {\"p\":3,\"q\":3,\"vertices\":[[1,1],[1,2],[1,3],[2,3],[2,2],[2,1],[3,1],[3,2],[3,3]]}\n"
    );
    assert_eq!(
        stdout(&dgg(&[
            "enumerate",
            "--p",
            "5",
            "--q",
            "5",
            "--kind",
            "tilings"
        ]))
        .lines()
        .count(),
        36
    );
    assert_eq!(
        stdout(&dgg(&[
            "enumerate",
            "--p",
            "5",
            "--q",
            "5",
            "--kind",
            "tilings",
            "--limit",
            "5"
        ]))
        .lines()
        .count(),
        5
    );
    let empty = dgg(&["enumerate", "--p", "2", "--q", "2", "--kind", "paths"]);
    assert_eq!(code(&empty), 0);
    assert!(empty.stdout.is_empty());
}

#[test]
fn enumerate_ascii_and_svg_dir() {
    let o = dgg(&[
        "enumerate",
        "--p",
        "2",
        "--q",
        "3",
        "--kind",
        "paths",
        "--format",
        "ascii",
    ]);
    assert_eq!(stdout(&o), "o->o\n^  v\no  o\n^  v\no  o\n");
    let dir = scratch("svg");
    let o = dgg(&[
        "enumerate",
        "--p",
        "3",
        "--q",
        "3",
        "--kind",
        "paths",
        "--format",
        "svg-dir",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["path-3x3-000000.svg", "path-3x3-000001.svg"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bijection_matches_reference_pair() {
    let o = dgg_stdin(
        &["bijection", "--direction", "to-path", "--input", "-"],
        &mixed_tiling().to_json(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim_end(), ZIGZAG_PATH);

    let o = dgg_stdin(
        &["bijection", "--direction", "to-tiling", "--input", "-"],
        ZIGZAG_PATH,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        Tiling::from_json(stdout(&o).trim_end()).unwrap(),
        mixed_tiling()
    );
}

#[test]
fn bijection_roundtrips_through_files() {
    let dir = scratch("bij");
    let path_file = dir.join("path.json");
    std::fs::write(&path_file, ZIGZAG_PATH).unwrap();
    let tiling = stdout(&dgg(&[
        "bijection",
        "--direction",
        "to-tiling",
        "--input",
        path_file.to_str().unwrap(),
    ]));
    let tiling_file = dir.join("tiling.json");
    std::fs::write(&tiling_file, &tiling).unwrap();
    let back = dgg(&[
        "bijection",
        "--direction",
        "to-path",
        "--input",
        tiling_file.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&back).trim_end(), ZIGZAG_PATH);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bijection_degenerate_and_invalid() {
    let o = dgg_stdin(
        &["bijection", "--direction", "to-path", "--input", "-"],
        r#"{"p":1,"q":4,"dominoes":[]}"#,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim_end(),
        r#"{"p":1,"q":4,"vertices":[[1,1],[1,2],[1,3],[1,4]]}"#
    );

    let not_a_path =
        r#"{"p":3,"q":3,"vertices":[[1,1],[2,1],[3,1],[3,2],[2,2],[1,2],[1,3],[3,3],[2,3]]}"#;
    assert_eq!(
        code(&dgg_stdin(
            &["bijection", "--direction", "to-tiling", "--input", "-"],
            not_a_path
        )),
        1
    );
    assert_eq!(
        code(&dgg_stdin(
            &["bijection", "--direction", "to-path", "--input", "-"],
            "{nonsense"
        )),
        1
    );
    let uncovered = r#"{"p":3,"q":3,"dominoes":[]}"#;
    assert_eq!(
        code(&dgg_stdin(
            &["bijection", "--direction", "to-path", "--input", "-"],
            uncovered
        )),
        1
    );
}

#[test]
fn table_output() {
    let o = dgg(&["table", "--pmax", "6", "--qmax", "6"]);
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().skip(1).map(String::from).collect())
        .collect();
    assert_eq!(rows[2], ["1", "1", "2", "3", "5", "8"]);
    assert_eq!(rows[3][4], "11");
    assert_eq!(rows[4][4], "36");
    assert_eq!(rows[5][4], "95");
    assert_eq!(rows[4][3], "11");
    assert_eq!(
        stdout(&dgg(&["table", "--pmax", "1", "--qmax", "1"])),
        "q\\p   1\n  1   1\n"
    );
    let o = dgg(&["--output", "json", "table", "--pmax", "9", "--qmax", "9"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][8][8], "12988816");
}

#[test]
fn render_matches_library() {
    let o = dgg(&["render", "--p", "5", "--q", "4", "--kind", "grid"]);
    let g = Grid::new(5, 4).unwrap();
    assert_eq!(
        stdout(&o),
        render_svg(&g, Payload::None, &RenderSpec::new(RenderKind::Grid)).unwrap()
    );

    let o = dgg(&[
        "render", "--p", "2", "--q", "3", "--kind", "path", "--format", "ascii",
    ]);
    assert_eq!(stdout(&o), "o->o\n^  v\no  o\n^  v\no  o\n");

    let dir = scratch("render");
    let input = dir.join("path.json");
    std::fs::write(&input, ZIGZAG_PATH).unwrap();
    let out = dir.join("fig.svg");
    let o = dgg(&[
        "render",
        "--p",
        "5",
        "--q",
        "4",
        "--kind",
        "path-with-tiling",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(dgg_core::render::svg_element_counts(&svg), (6, 19));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn render_failures() {
    assert_eq!(
        code(&dgg(&["render", "--p", "2", "--q", "2", "--kind", "path"])),
        1
    );
    assert_eq!(
        code(&dgg(&[
            "render", "--p", "3", "--q", "3", "--kind", "tiling", "--index", "99"
        ])),
        1
    );
    let o = dgg_stdin(
        &[
            "render", "--p", "3", "--q", "3", "--kind", "path", "--input", "-",
        ],
        ZIGZAG_PATH,
    );
    assert_eq!(code(&o), 1);
    let o = dgg(&[
        "render",
        "--p",
        "5",
        "--q",
        "4",
        "--kind",
        "canonical-numbering",
        "--domino",
        "2,2,H,+",
        "--format",
        "ascii",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        code(&dgg(&[
            "render",
            "--p",
            "5",
            "--q",
            "4",
            "--kind",
            "canonical-numbering",
            "--domino",
            "1,2,H,+"
        ])),
        2
    );
}

#[test]
fn verify_section_and_determinism() {
    let o = dgg(&["verify", "--section", "17gon"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("[PASS]  8 17gon"));

    let a = dgg(&["verify"]);
    let b = dgg(&["verify"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("10/10 checks passed\n"));

    let j = dgg(&["--output", "json", "verify", "--section", "tables"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}
