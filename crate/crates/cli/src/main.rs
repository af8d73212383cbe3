use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dgg_core::bijection::{path_to_tiling, tiling_to_path};
use dgg_core::closed_forms::kasteleyn_count;
use dgg_core::ham::{count_ham_paths_forced, SOFT_ENUMERATION_LIMIT};
use dgg_core::render::{render_ascii, render_svg, Payload, RenderKind, RenderSpec};
use dgg_core::verify::{Section, Verifier};
use dgg_core::{
    enumerate_ham_paths, enumerate_tilings, CountMethod, Domino, Error, Grid, HamPath, Orientation,
    Square, Tiling, WhiteSide,
};
use serde_json::json;

/// Hamiltonian paths of odd-even directed grid graphs and their domino tilings.
#[derive(Parser)]
#[command(name = "dgg", version)]
struct Cli {
    /// Format of summaries and reports.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Allow enumeration above the soft size limit.
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print h(p,q).
    Count {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Method::Tilings)]
        method: Method,
        /// Run all three methods and compare.
        #[arg(long)]
        all_methods: bool,
    },
    /// Stream every path or tiling in canonical order.
    Enumerate {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = EnumFormat::Json)]
        format: EnumFormat,
        /// Target directory for `--format svg-dir`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Map a tiling to its path or back, checking the roundtrip.
    Bijection {
        #[arg(long, value_enum)]
        direction: Direction,
        /// JSON file, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Print h(p,q) for 1..=pmax by 1..=qmax.
    Table {
        #[arg(long)]
        pmax: u32,
        #[arg(long)]
        qmax: u32,
    },
    /// Draw a figure as SVG or ASCII.
    Render {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        kind: Figure,
        /// Path or tiling JSON file, or `-` for stdin.
        #[arg(long, conflicts_with = "index")]
        input: Option<String>,
        /// Position in the canonical enumeration (default 0).
        #[arg(long)]
        index: Option<usize>,
        /// Domino as `x,y,H|V,+|-` (black square, orientation, white side).
        #[arg(long)]
        domino: Option<String>,
        #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
        format: RenderFormat,
        #[arg(long, default_value_t = 40)]
        cell_size: u32,
        #[arg(long)]
        no_arrows: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce every published table and identity.
    Verify {
        /// Restrict to one or more sections.
        #[arg(long, value_parser = parse_section)]
        section: Vec<Section>,
        /// Append per-check wall time.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Enumerate,
    Tilings,
    Kasteleyn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Paths,
    Tilings,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumFormat {
    Json,
    Ascii,
    SvgDir,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    ToPath,
    ToTiling,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Figure {
    Grid,
    Path,
    Tiling,
    PathWithTiling,
    Chessboard,
    ArcSetA,
    CanonicalNumbering,
}

impl From<Figure> for RenderKind {
    fn from(f: Figure) -> Self {
        match f {
            Figure::Grid => RenderKind::Grid,
            Figure::Path => RenderKind::Path,
            Figure::Tiling => RenderKind::Tiling,
            Figure::PathWithTiling => RenderKind::PathWithTiling,
            Figure::Chessboard => RenderKind::Chessboard,
            Figure::ArcSetA => RenderKind::ArcSetA,
            Figure::CanonicalNumbering => RenderKind::CanonicalNumbering,
        }
    }
}

fn parse_section(s: &str) -> Result<Section, String> {
    s.parse()
}

enum Failure {
    /// Exit 1.
    Check(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimensions { .. }
            | Error::EnumerationLimit { .. }
            | Error::CellSizeTooSmall(_)
            | Error::PayloadMismatch(_)
            | Error::PrefixOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    match &cli.command {
        Command::Count {
            p,
            q,
            method,
            all_methods,
        } => count(cli, out, *p, *q, *method, *all_methods),
        Command::Enumerate {
            p,
            q,
            kind,
            limit,
            format,
            out_dir,
        } => enumerate(cli, out, *p, *q, *kind, *limit, *format, out_dir.as_ref()),
        Command::Bijection { direction, input } => bijection(out, *direction, input),
        Command::Table { pmax, qmax } => table(cli, out, *pmax, *qmax),
        Command::Render {
            p,
            q,
            kind,
            input,
            index,
            domino,
            format,
            cell_size,
            no_arrows,
            out: path,
        } => {
            let grid = Grid::new(*p, *q)?;
            let spec = RenderSpec {
                kind: (*kind).into(),
                cell_size: *cell_size,
                show_arrows: !no_arrows,
            };
            let text = render(
                cli,
                grid,
                spec,
                input.as_deref(),
                *index,
                domino.as_deref(),
                *format,
            )?;
            match path {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Verify { section, timing } => verify(cli, out, section, *timing),
    }
}

fn check_soft_limit(cli: &Cli, p: u32, q: u32) -> Outcome {
    let cells = p as u64 * q as u64;
    if !cli.force && cells > SOFT_ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            p,
            q,
            cells,
            limit: SOFT_ENUMERATION_LIMIT,
        }
        .into());
    }
    Ok(())
}

fn count(cli: &Cli, out: &mut impl Write, p: u32, q: u32, method: Method, all: bool) -> Outcome {
    Grid::new(p, q)?;
    let methods: &[Method] = if all {
        &[Method::Enumerate, Method::Tilings, Method::Kasteleyn]
    } else {
        &[method]
    };
    if methods.contains(&Method::Enumerate) {
        check_soft_limit(cli, p, q)?;
    }
    let mut values = Vec::new();
    for &m in methods {
        let (name, exact, shown) = match m {
            Method::Enumerate => {
                let n = count_ham_paths_forced(p, q, CountMethod::Enumerate)?;
                ("enumerate", n.clone(), n.to_string())
            }
            Method::Tilings => {
                let n = count_ham_paths_forced(p, q, CountMethod::ViaTilings)?;
                ("tilings", n.clone(), n.to_string())
            }
            Method::Kasteleyn => {
                let k = kasteleyn_count(p, q);
                ("kasteleyn", k.rounded, format!("{:.6}", k.raw))
            }
        };
        values.push((name, exact, shown));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    match cli.output {
        Output::Text if all => {
            let shown: Vec<&str> = values.iter().map(|v| v.2.as_str()).collect();
            writeln!(
                out,
                "{} {}",
                shown.join(" / "),
                if agree { "agree" } else { "DISAGREE" }
            )?;
        }
        Output::Text => writeln!(out, "{}", values[0].2)?,
        Output::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("p".into(), json!(p));
            obj.insert("q".into(), json!(q));
            for (name, _, shown) in &values {
                obj.insert((*name).into(), json!(shown));
            }
            if all {
                obj.insert("agree".into(), json!(agree));
            }
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    cli: &Cli,
    out: &mut impl Write,
    p: u32,
    q: u32,
    kind: Kind,
    limit: Option<usize>,
    format: EnumFormat,
    out_dir: Option<&PathBuf>,
) -> Outcome {
    let grid = Grid::new(p, q)?;
    check_soft_limit(cli, p, q)?;
    let dir = match (format, out_dir) {
        (EnumFormat::SvgDir, None) => {
            return Err(Failure::Usage("--format svg-dir needs --out-dir".into()))
        }
        (EnumFormat::SvgDir, Some(d)) => {
            fs::create_dir_all(d)?;
            Some(d)
        }
        _ => None,
    };
    let limit = limit.unwrap_or(usize::MAX);
    let mut emitted = 0usize;
    let mut emit = |json: String,
                    payload: Payload<'_>,
                    render_kind: RenderKind,
                    out: &mut dyn Write|
     -> Outcome {
        let spec = RenderSpec::new(render_kind);
        match format {
            EnumFormat::Json => writeln!(out, "{json}")?,
            EnumFormat::Ascii => {
                if emitted > 0 {
                    writeln!(out)?;
                }
                out.write_all(render_ascii(&grid, payload, &spec)?.as_bytes())?;
            }
            EnumFormat::SvgDir => {
                let name = format!("{}-{p}x{q}-{emitted:06}.svg", render_kind.name());
                let dir = dir.expect("checked above");
                fs::write(dir.join(name), render_svg(&grid, payload, &spec)?)?;
            }
        }
        emitted += 1;
        Ok(())
    };
    match kind {
        Kind::Paths => {
            for h in enumerate_ham_paths(&grid).take(limit) {
                emit(h.to_json(), Payload::Path(&h), RenderKind::Path, out)?;
            }
        }
        Kind::Tilings => {
            for t in enumerate_tilings(p, q)?.take(limit) {
                emit(t.to_json(), Payload::Tiling(&t), RenderKind::Tiling, out)?;
            }
        }
    }
    if let Some(dir) = dir {
        match cli.output {
            Output::Text => writeln!(out, "wrote {emitted} files to {}", dir.display())?,
            Output::Json => writeln!(
                out,
                "{}",
                json!({"files": emitted, "dir": dir.display().to_string()})
            )?,
        }
    }
    Ok(())
}

fn read_input(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))
    }
}

fn bijection(out: &mut impl Write, direction: Direction, input: &str) -> Outcome {
    let text = read_input(input)?;
    match direction {
        Direction::ToPath => {
            let t = Tiling::from_json(&text)?;
            let grid = t.grid();
            let h = tiling_to_path(&grid, &t)?;
            if path_to_tiling(&grid, &h)? != t {
                return Err(Failure::Check(
                    "roundtrip did not return the input tiling".into(),
                ));
            }
            writeln!(out, "{}", h.to_json())?;
        }
        Direction::ToTiling => {
            let h = HamPath::from_json(&text)?;
            let grid = h.grid();
            let t = path_to_tiling(&grid, &h)?;
            if tiling_to_path(&grid, &t)? != h {
                return Err(Failure::Check(
                    "roundtrip did not return the input path".into(),
                ));
            }
            writeln!(out, "{}", t.to_json())?;
        }
    }
    Ok(())
}

fn table(cli: &Cli, out: &mut impl Write, pmax: u32, qmax: u32) -> Outcome {
    Grid::new(pmax, qmax)?;
    let rows: Vec<Vec<String>> = (1..=qmax)
        .map(|q| {
            (1..=pmax)
                .map(|p| {
                    count_ham_paths_forced(p, q, CountMethod::ViaTilings).map(|n| n.to_string())
                })
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    match cli.output {
        Output::Json => writeln!(out, "{}", json!({"pmax": pmax, "qmax": qmax, "rows": rows}))?,
        Output::Text => {
            let width = rows
                .iter()
                .flatten()
                .map(String::len)
                .max()
                .unwrap_or(1)
                .max(qmax.to_string().len() + 2);
            write!(out, "{:>width$}", "q\\p")?;
            for p in 1..=pmax {
                write!(out, " {p:>width$}")?;
            }
            writeln!(out)?;
            for (q, row) in (1..).zip(&rows) {
                write!(out, "{q:>width$}")?;
                for cell in row {
                    write!(out, " {cell:>width$}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

fn parse_domino(s: &str) -> Result<Domino, Failure> {
    let bad = || Failure::Usage(format!("domino {s:?} is not of the form x,y,H|V,+|-"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, o, w] = parts.as_slice() else {
        return Err(bad());
    };
    let x: u32 = x.parse().map_err(|_| bad())?;
    let y: u32 = y.parse().map_err(|_| bad())?;
    let orientation = match *o {
        "H" | "h" => Orientation::Horizontal,
        "V" | "v" => Orientation::Vertical,
        _ => return Err(bad()),
    };
    let side = match *w {
        "+" => WhiteSide::TowardIncreasing,
        "-" => WhiteSide::TowardDecreasing,
        _ => return Err(bad()),
    };
    Domino::new(Square::new(x, y), orientation, side).map_err(|e| Failure::Usage(e.to_string()))
}

fn check_grid(grid: Grid, other: Grid) -> Result<(), Failure> {
    if grid != other {
        return Err(Error::GridMismatch(grid.p(), grid.q(), other.p(), other.q()).into());
    }
    Ok(())
}

fn nth_path(cli: &Cli, grid: &Grid, index: usize) -> Result<HamPath, Failure> {
    check_soft_limit(cli, grid.p(), grid.q())?;
    enumerate_ham_paths(grid).nth(index).ok_or_else(|| {
        Failure::Check(format!(
            "{}x{} has no path with index {index}",
            grid.p(),
            grid.q()
        ))
    })
}

fn nth_tiling(cli: &Cli, grid: &Grid, index: usize) -> Result<Tiling, Failure> {
    check_soft_limit(cli, grid.p(), grid.q())?;
    enumerate_tilings(grid.p(), grid.q())?
        .nth(index)
        .ok_or_else(|| {
            Failure::Check(format!(
                "{}x{} has no tiling with index {index}",
                grid.p(),
                grid.q()
            ))
        })
}

fn render(
    cli: &Cli,
    grid: Grid,
    spec: RenderSpec,
    input: Option<&str>,
    index: Option<usize>,
    domino: Option<&str>,
    format: RenderFormat,
) -> Result<String, Failure> {
    let index = index.unwrap_or(0);
    let draw = |payload: Payload<'_>| -> Result<String, Failure> {
        Ok(match format {
            RenderFormat::Svg => render_svg(&grid, payload, &spec)?,
            RenderFormat::Ascii => render_ascii(&grid, payload, &spec)?,
        })
    };
    match spec.kind {
        RenderKind::Grid | RenderKind::Chessboard | RenderKind::ArcSetA => draw(Payload::None),
        RenderKind::CanonicalNumbering => {
            let d = domino
                .ok_or_else(|| Failure::Usage("canonical-numbering needs --domino".into()))?;
            draw(Payload::Domino(parse_domino(d)?))
        }
        RenderKind::Path => {
            let h = match input {
                Some(i) => HamPath::from_json(&read_input(i)?)?,
                None => nth_path(cli, &grid, index)?,
            };
            check_grid(grid, h.grid())?;
            draw(Payload::Path(&h))
        }
        RenderKind::Tiling => {
            let t = match input {
                Some(i) => Tiling::from_json(&read_input(i)?)?,
                None => nth_tiling(cli, &grid, index)?,
            };
            check_grid(grid, t.grid())?;
            draw(Payload::Tiling(&t))
        }
        RenderKind::PathWithTiling => {
            let (h, t) = match input {
                Some(i) => {
                    let text = read_input(i)?;
                    match HamPath::from_json(&text) {
                        Ok(h) => {
                            let t = path_to_tiling(&h.grid(), &h)?;
                            (h, t)
                        }
                        Err(_) => {
                            let t = Tiling::from_json(&text)?;
                            (tiling_to_path(&t.grid(), &t)?, t)
                        }
                    }
                }
                None => {
                    let t = nth_tiling(cli, &grid, index)?;
                    (tiling_to_path(&grid, &t)?, t)
                }
            };
            check_grid(grid, h.grid())?;
            draw(Payload::PathWithTiling(&h, &t))
        }
    }
}

fn verify(cli: &Cli, out: &mut impl Write, sections: &[Section], timing: bool) -> Outcome {
    let verifier = Verifier::new();
    let report = if sections.is_empty() {
        verifier.run_all()
    } else {
        verifier.run(sections)
    };
    match cli.output {
        Output::Text => out.write_all(report.to_text(timing).as_bytes())?,
        Output::Json => writeln!(out, "{}", report.to_json())?,
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}
