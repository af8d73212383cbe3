//! Mechanical reproduction of every published table and identity.
//!
//! Each check has a fixed id, a section used for filtering, and pinned
//! tolerances and time budgets. The exact tiling count is injectable so a
//! deliberately broken counter can serve as a negative control.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc as Shared;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::bijection::{classify_arcs, verify_instance};
use crate::closed_forms::{
    fibonacci_product, kasteleyn_count, seventeen_gon_values, Parity, KASTELEYN_RELATIVE_TOLERANCE,
};
use crate::grid::Grid;
use crate::ham::{
    collect_ham_paths, count_by_enumeration, count_prefix, fibonacci, predicted_endpoints,
};
use crate::par::Execution;
use crate::render::{render_ascii, render_svg, Payload, RenderKind, RenderSpec};
use crate::tiling::{count_tilings_exact, enumerate_tilings};

/// `h(p, q)` for `1 <= p, q <= 6` as first published, `None` where the table
/// was left blank. Indexed `[q - 1][p - 1]`.
pub const FIRST_TABLE: [[Option<u64>; 6]; 6] = [
    [Some(1), Some(1), Some(1), Some(1), Some(1), Some(1)],
    [Some(1), Some(0), Some(1), Some(0), Some(1), Some(0)],
    [Some(1), Some(1), Some(2), Some(3), Some(5), Some(8)],
    [Some(1), Some(0), Some(3), Some(0), None, Some(0)],
    [Some(1), Some(1), Some(5), None, None, None],
    [Some(1), Some(0), Some(8), Some(0), None, Some(0)],
];

/// `h(p, q)` for `4 <= p, q <= 9`. Indexed `[q - 4][p - 4]`.
pub const SECOND_TABLE: [[u64; 6]; 6] = [
    [0, 11, 0, 41, 0, 153],
    [11, 36, 95, 281, 781, 2245],
    [0, 95, 0, 1183, 0, 14824],
    [41, 281, 1183, 6728, 31529, 167089],
    [0, 781, 0, 31529, 0, 1292697],
    [153, 2245, 14824, 167089, 1292697, 12988816],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    Tables,
    Counts,
    Bijection,
    Arcs,
    Kasteleyn,
    Fibonacci,
    #[serde(rename = "17gon")]
    SeventeenGon,
    Observations,
    Determinism,
}

impl Section {
    pub const ALL: [Section; 9] = [
        Section::Tables,
        Section::Counts,
        Section::Bijection,
        Section::Arcs,
        Section::Kasteleyn,
        Section::Fibonacci,
        Section::SeventeenGon,
        Section::Observations,
        Section::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Tables => "tables",
            Section::Counts => "counts",
            Section::Bijection => "bijection",
            Section::Arcs => "arcs",
            Section::Kasteleyn => "kasteleyn",
            Section::Fibonacci => "fibonacci",
            Section::SeventeenGon => "17gon",
            Section::Observations => "observations",
            Section::Determinism => "determinism",
        }
    }
}

impl FromStr for Section {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.name() == s)
            .ok_or_else(|| format!("unknown section {s:?}"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub section: Section,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "[{tag}] {:>2} {:<14} {}", r.id, r.name, r.detail);
            if timing {
                let _ = write!(out, " ({:.1} ms)", r.elapsed.as_secs_f64() * 1e3);
            }
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.results.len());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

type Counter = Shared<dyn Fn(u32, u32) -> BigUint + Send + Sync>;

/// Outcome of one check body: pass flag and a one-line explanation.
type Outcome = (bool, String);

pub struct Verifier {
    count: Counter,
    exec: Execution,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Verifier {
            count: Shared::new(count_tilings_exact),
            exec: Execution::default(),
        }
    }

    /// Replaces the exact tiling count used as the reference everywhere.
    pub fn with_counter(f: impl Fn(u32, u32) -> BigUint + Send + Sync + 'static) -> Self {
        Verifier {
            count: Shared::new(f),
            exec: Execution::default(),
        }
    }

    pub fn execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn run_all(&self) -> Report {
        self.run(&Section::ALL)
    }

    pub fn run(&self, sections: &[Section]) -> Report {
        let mut report = Report::default();
        for &(id, section, name, budget, body) in CHECKS {
            if !sections.contains(&section) {
                continue;
            }
            let start = Instant::now();
            let (mut passed, mut detail) = body(self);
            let elapsed = start.elapsed();
            if let Some(limit) = budget {
                if elapsed > limit {
                    passed = false;
                    detail = format!(
                        "{detail}; exceeded time budget of {} s",
                        limit.as_secs_f64()
                    );
                }
            }
            report.results.push(CheckResult {
                id,
                section,
                name,
                passed,
                detail,
                elapsed,
            });
        }
        report
    }

    fn h(&self, p: u32, q: u32) -> BigUint {
        (self.count)(p, q)
    }
}

type CheckFn = fn(&Verifier) -> Outcome;

const CHECKS: &[(u8, Section, &str, Option<Duration>, CheckFn)] = &[
    (
        1,
        Section::Tables,
        "table-small",
        Some(Duration::from_secs(1)),
        check_first_table,
    ),
    (
        2,
        Section::Tables,
        "table-large",
        Some(Duration::from_secs(1)),
        check_second_table,
    ),
    (
        3,
        Section::Counts,
        "path-tiling",
        Some(Duration::from_secs(60)),
        check_path_tiling_counts,
    ),
    (
        4,
        Section::Bijection,
        "roundtrip",
        Some(Duration::from_secs(30)),
        check_roundtrip,
    ),
    (5, Section::Arcs, "arc-classes", None, check_arc_classes),
    (
        6,
        Section::Kasteleyn,
        "kasteleyn",
        Some(Duration::from_secs(1)),
        check_kasteleyn,
    ),
    (7, Section::Fibonacci, "fibonacci", None, check_fibonacci),
    (8, Section::SeventeenGon, "17gon", None, check_seventeen_gon),
    (
        9,
        Section::Observations,
        "observations",
        None,
        check_observations,
    ),
    (
        10,
        Section::Determinism,
        "determinism",
        None,
        check_determinism,
    ),
];

fn first_failure(failures: Vec<String>, ok: String) -> Outcome {
    match failures.first() {
        None => (true, ok),
        Some(f) => (false, format!("{} failure(s), first: {f}", failures.len())),
    }
}

fn check_first_table(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for (qi, row) in FIRST_TABLE.iter().enumerate() {
        for (pi, cell) in row.iter().enumerate() {
            if let Some(expected) = cell {
                let (p, q) = (pi as u32 + 1, qi as u32 + 1);
                n += 1;
                let got = v.h(p, q);
                if got != BigUint::from(*expected) {
                    failures.push(format!("h({p},{q}) = {got}, table says {expected}"));
                }
            }
        }
    }
    first_failure(failures, format!("{n} printed entries reproduced"))
}

fn check_second_table(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    for (qi, row) in SECOND_TABLE.iter().enumerate() {
        for (pi, &expected) in row.iter().enumerate() {
            let (p, q) = (pi as u32 + 4, qi as u32 + 4);
            let got = v.h(p, q);
            if got != BigUint::from(expected) {
                failures.push(format!("h({p},{q}) = {got}, table says {expected}"));
            }
        }
    }
    first_failure(failures, "36 entries reproduced".into())
}

fn check_path_tiling_counts(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    for p in 1..=7 {
        for q in 1..=7 {
            let grid = Grid::new(p, q).expect("positive dimensions");
            let paths = count_by_enumeration(&grid, v.exec);
            let tilings = enumerate_tilings(p, q)
                .expect("positive dimensions")
                .count() as u64;
            let dp = v.h(p, q);
            if paths != tilings || dp != BigUint::from(paths) {
                failures.push(format!(
                    "{p}x{q}: {paths} paths, {tilings} tilings, count {dp}"
                ));
            }
        }
    }
    first_failure(
        failures,
        "paths = tilings = count for all 49 grids up to 7x7".into(),
    )
}

fn check_roundtrip(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for p in 1..=6 {
        for q in 1..=6 {
            match verify_instance(p, q, v.exec) {
                Ok(r) if !r.mismatch_rejected => failures.push(format!(
                    "{p}x{q}: a mismatched pair passed the avoidance check"
                )),
                Ok(r) => pairs += r.tilings,
                Err(e) => failures.push(format!("{p}x{q}: {e}")),
            }
        }
    }
    first_failure(
        failures,
        format!("{pairs} tiling/path pairs roundtrip on all grids up to 6x6"),
    )
}

fn check_arc_classes(_: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    let mut tilings = 0;
    for p in 1..=6u32 {
        for q in 1..=6u32 {
            let grid = Grid::new(p, q).expect("positive dimensions");
            let half = ((p - 1) * (q - 1) / 2) as usize;
            for t in enumerate_tilings(p, q).expect("positive dimensions") {
                tilings += 1;
                let c = match classify_arcs(&grid, &t) {
                    Ok(c) => c,
                    Err(e) => {
                        failures.push(format!("{p}x{q}: {e}"));
                        continue;
                    }
                };
                let sizes = (
                    c.white_perimeter.len(),
                    c.domino_axis.len(),
                    c.domino_black_end.len(),
                    c.total(),
                );
                let want = ((p + q - 2) as usize, half, half, grid.arc_count());
                let disjoint = c.white_perimeter.is_disjoint(&c.domino_black_side)
                    && c.domino_axis.is_disjoint(&c.domino_black_side)
                    && c.domino_black_end.is_disjoint(&c.domino_black_side);
                let union_is_all = {
                    let mut all = c.path_arcs();
                    all.extend(c.domino_axis.iter().copied());
                    all.extend(c.domino_black_end.iter().copied());
                    all.len() == grid.arc_count()
                };
                if sizes != want || !disjoint || !union_is_all {
                    failures.push(format!("{p}x{q}: sizes {sizes:?}, expected {want:?}"));
                }
            }
        }
    }
    first_failure(
        failures,
        format!("{tilings} tilings partition their arcs as expected"),
    )
}

fn check_kasteleyn(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for p in 1..=12 {
        for q in 1..=12 {
            let k = kasteleyn_count(p, q);
            let exact = v.h(p, q);
            worst = worst.max(k.relative_residual());
            if k.rounded != exact || k.relative_residual() >= KASTELEYN_RELATIVE_TOLERANCE {
                failures.push(format!("{p}x{q}: product {:.6} vs count {exact}", k.raw));
            }
            let both_even = p % 2 == 0 && q % 2 == 0;
            if both_even && k.rounded != BigUint::from(0u32) {
                failures.push(format!(
                    "{p}x{q}: both even but product rounds to {}",
                    k.rounded
                ));
            }
            if p.min(q) <= 1 && k.rounded != BigUint::from(1u32) {
                failures.push(format!(
                    "{p}x{q}: degenerate grid but product rounds to {}",
                    k.rounded
                ));
            }
        }
    }
    first_failure(
        failures,
        format!("144 grids reconcile, worst relative residual {worst:.3e}"),
    )
}

fn check_fibonacci(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=10 {
        let (_, even) = fibonacci_product(n, Parity::Even);
        let (_, odd) = fibonacci_product(n, Parity::Odd);
        if even != fibonacci(2 * n) {
            failures.push(format!("even product n={n} gives {even}"));
        }
        if odd != fibonacci(2 * n + 1) {
            failures.push(format!("odd product n={n} gives {odd}"));
        }
    }
    for n in 1..=12 {
        let h = v.h(3, n);
        if h != fibonacci(n) {
            failures.push(format!("h(3,{n}) = {h}, F_{n} = {}", fibonacci(n)));
        }
    }
    first_failure(
        failures,
        "products match F_2n, F_2n+1 for n<=10; h(3,n) = F_n for n<=12".into(),
    )
}

fn check_seventeen_gon(_: &Verifier) -> Outcome {
    let r = seventeen_gon_values().residuals();
    let ok = r.gauss_radical < 1e-12
        && r.cos_squared < 1e-12
        && r.x1_closed_form < 1e-12
        && r.product < 1e-8;
    (
        ok,
        format!(
            "radical {:.1e}, cos^2 {:.1e}, x1 {:.1e} (< 1e-12); product {:.1e} (< 1e-8)",
            r.gauss_radical, r.cos_squared, r.x1_closed_form, r.product
        ),
    )
}

fn check_observations(v: &Verifier) -> Outcome {
    let mut failures = Vec::new();
    let h = |p, q| v.h(p, q);
    for p in 1..=6u32 {
        for q in 1..=6u32 {
            let grid = Grid::new(p, q).expect("positive dimensions");
            let paths = collect_ham_paths(&grid, v.exec);
            let (start, end) = predicted_endpoints(p, q);
            for path in &paths {
                if path.start() != start {
                    failures.push(format!("{p}x{q}: path starts at {}", path.start()));
                }
                if Some(path.end()) != end {
                    failures.push(format!(
                        "{p}x{q}: path ends at {}, expected {end:?}",
                        path.end()
                    ));
                }
            }
            for r in 1..=p {
                let hr = count_prefix(p, q, r).expect("r in range");
                let bucket = paths.iter().filter(|x| x.bottom_prefix_len() == r).count();
                if hr != BigUint::from(bucket) {
                    failures.push(format!(
                        "h_{r}({p},{q}) = {hr} but {bucket} paths have that prefix"
                    ));
                }
                if r % 2 == 0 && q >= 2 && hr != BigUint::from(0u32) {
                    failures.push(format!("h_{r}({p},{q}) = {hr} for even r"));
                }
            }
            if p % 2 == 1 && q >= 2 {
                let hp = count_prefix(p, q, p).expect("r in range");
                if hp != h(p, q - 1) {
                    failures.push(format!("h_{p}({p},{q}) = {hp} != h({p},{})", q - 1));
                }
            }
            if p == 3 && q >= 3 {
                let h1 = count_prefix(3, q, 1).expect("r in range");
                if h1 != h(3, q - 2) {
                    failures.push(format!("h_1(3,{q}) = {h1} != h(3,{})", q - 2));
                }
            }
        }
    }
    first_failure(
        failures,
        "start, endpoint parity rule, h_even = 0 (q >= 2), h_p(p,q) = h(p,q-1), h_1(3,q) = h(3,q-2) up to 6x6".into(),
    )
}

fn render_fixtures() -> String {
    let mut out = String::new();
    let g = Grid::new(5, 4).expect("positive dimensions");
    for kind in [
        RenderKind::Grid,
        RenderKind::Chessboard,
        RenderKind::ArcSetA,
    ] {
        let spec = RenderSpec::new(kind);
        out.push_str(&render_svg(&g, Payload::None, &spec).expect("kind takes no payload"));
        out.push_str(&render_ascii(&g, Payload::None, &spec).expect("kind takes no payload"));
    }
    for t in enumerate_tilings(5, 4).expect("positive dimensions") {
        let h = crate::bijection::tiling_to_path(&g, &t).expect("bijection holds on 5x4");
        let spec = RenderSpec::new(RenderKind::PathWithTiling);
        out.push_str(
            &render_svg(&g, Payload::PathWithTiling(&h, &t), &spec).expect("matching payload"),
        );
    }
    out
}

fn check_determinism(v: &Verifier) -> Outcome {
    let fast = [
        Section::Tables,
        Section::Kasteleyn,
        Section::Fibonacci,
        Section::SeventeenGon,
    ];
    let a = v.run(&fast).to_text(false);
    let b = v.run(&fast).to_text(false);
    let ra = render_fixtures();
    let rb = render_fixtures();
    match (a == b, ra == rb) {
        (true, true) => (
            true,
            format!(
                "repeat runs byte-identical ({} report bytes, {} render bytes)",
                a.len(),
                ra.len()
            ),
        ),
        (false, _) => (false, "report text differs between runs".into()),
        (_, false) => (false, "rendered output differs between runs".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_names_roundtrip() {
        for s in Section::ALL {
            assert_eq!(s.name().parse::<Section>().unwrap(), s);
        }
        assert!("nope".parse::<Section>().is_err());
    }

    #[test]
    fn overlap_entries_agree_between_tables() {
        for q in 4..=6 {
            for p in 4..=6 {
                if let Some(v) = FIRST_TABLE[q - 1][p - 1] {
                    assert_eq!(v, SECOND_TABLE[q - 4][p - 4]);
                }
            }
        }
    }

    #[test]
    fn subset_run() {
        let r = Verifier::new().run(&[Section::SeventeenGon]);
        assert_eq!(r.results.len(), 1);
        assert_eq!(r.results[0].id, 8);
        assert!(r.all_passed());
    }

    #[test]
    fn corrupted_counter_fails() {
        let v = Verifier::with_counter(|p, q| count_tilings_exact(p, q) + 1u32);
        let r = v.run(&[Section::Tables, Section::Kasteleyn]);
        assert!(!r.all_passed());
        assert!(r.results.iter().all(|c| !c.passed));
        assert!(r.to_text(false).contains("[FAIL]"));
    }
}
