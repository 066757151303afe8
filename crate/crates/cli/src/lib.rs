//! Driver behind the `reebsnake` binary: certify a direction, pick a level,
//! build and check the tree, then write the requested artifacts.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use reebsnake::emit::{render_svg, scan_json, snake_json, snake_text, SvgOptions};
use reebsnake::genericity::{
    direction_scan, genericity_certificate, half_angle_grid, DirectionScanReport, ScanOptions, Verdict,
    DEFAULT_SAMPLES,
};
use reebsnake::rational::{fmt_exact, parse_exact, sign};
use reebsnake::snake::{snake_report, SnakeReport};
use reebsnake::sweep::{stabilize, sweep, EpsilonOptions, Side};
use reebsnake::tree::{build_tree, validate_generic, PoincareReebTree, VertexKind};
use reebsnake::{BivariatePolynomial, Error, Rational, UnitDirection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectionChoice {
    Auto,
    HalfAngle(Rational),
    Explicit(UnitDirection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsilonChoice {
    Auto,
    Fixed(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Artifact {
    Json,
    Dot,
    Svg,
    Summary,
}

impl std::str::FromStr for Artifact {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "json" => Ok(Self::Json),
            "dot" => Ok(Self::Dot),
            "svg" => Ok(Self::Svg),
            "summary" => Ok(Self::Summary),
            other => Err(format!("unknown artifact {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub polynomial_text: String,
    pub direction: DirectionChoice,
    pub epsilon: EpsilonChoice,
    pub scan_points: u32,
    pub emit: BTreeSet<Artifact>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            polynomial_text: String::new(),
            direction: DirectionChoice::Auto,
            epsilon: EpsilonChoice::Auto,
            scan_points: 64,
            emit: BTreeSet::from([Artifact::Summary]),
            output_dir: PathBuf::from("."),
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("no generic direction among {0} scanned")]
    NoGenericDirection(usize),
    #[error("tree failed validation: {0}")]
    Validation(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Stable process exit codes.
///
/// | code | meaning |
/// |-----:|---------|
/// | 0 | success |
/// | 2 | parse error or bad flag |
/// | 3 | `f(0, 0) ≠ 0` |
/// | 4 | `ε ≤ 0` |
/// | 5 | direction not on the unit circle |
/// | 10 / 11 / 12 | non-generic: inflection / bitangent / both |
/// | 13 | two events over one abscissa |
/// | 14 | no generic direction in the scan |
/// | 20 | ε did not stabilize |
/// | 21 | degenerate tangency |
/// | 22 | event on `x = 0` |
/// | 23 | sample abscissa on an event |
/// | 24 | leading coefficient in y vanishes |
/// | 25 | events outside the box |
/// | 26 | inconsistent transitions |
/// | 27 | alternation violated |
/// | 28 | endpoint is not a valley |
/// | 29 | tree failed validation |
/// | 30 | side without events |
/// | 31 | overlapping event abscissae |
/// | 32 | orders on different sets |
/// | 33 | not a permutation |
/// | 34 | tree not binary |
/// | 40 | zero polynomial |
/// | 41 | both inputs constant in y |
/// | 42 | constant in y |
/// | 43 | degree too small |
/// | 44 | polar curve not reduced |
/// | 50 | I/O error |
pub fn exit_code(e: &RunError) -> i32 {
    match e {
        RunError::Usage(_) => 2,
        RunError::NoGenericDirection(_) => 14,
        RunError::Validation(_) => 29,
        RunError::Io { .. } => 50,
        RunError::Core(c) => match c {
            Error::Parse { .. } => 2,
            Error::NotVanishingAtOrigin => 3,
            Error::NonPositiveEpsilon => 4,
            Error::InvalidDirection { .. } => 5,
            Error::NonGeneric(Verdict::NonGenericInflection) => 10,
            Error::NonGeneric(Verdict::NonGenericBitangent) => 11,
            Error::NonGeneric(Verdict::NonGenericBoth) => 12,
            Error::NonGeneric(Verdict::Generic) => 12,
            Error::NonGenericTie { .. } => 13,
            Error::NoStabilization { .. } => 20,
            Error::DegenerateTangency { .. } => 21,
            Error::EventAtZero => 22,
            Error::XAtEvent { .. } => 23,
            Error::LeadingCoefficientVanishes => 24,
            Error::EventsOutsideBox => 25,
            Error::InconsistentTransitions(_) => 26,
            Error::AlternationViolation { .. } => 27,
            Error::EndpointNotValley { .. } => 28,
            Error::EmptySide => 30,
            Error::TieDetected => 31,
            Error::OrderMismatch => 32,
            Error::NotAPermutation => 33,
            Error::NotBinary(_) => 34,
            Error::ZeroPolynomial => 40,
            Error::BothConstantInY => 41,
            Error::ConstantInY => 42,
            Error::DegreeTooSmall { .. } => 43,
            Error::NonReducedPolar => 44,
        },
    }
}

/// Short name of the error kind, used in the one-line diagnostic.
pub fn error_kind(e: &RunError) -> String {
    match e {
        RunError::Core(Error::NonGeneric(v)) => format!("{v:?}"),
        RunError::Core(c) => {
            let dbg = format!("{c:?}");
            dbg.split(|ch: char| !ch.is_alphanumeric()).next().unwrap_or("Error").to_string()
        }
        RunError::Usage(_) => "Usage".into(),
        RunError::NoGenericDirection(_) => "NoGenericDirection".into(),
        RunError::Validation(_) => "ValidationFailed".into(),
        RunError::Io { .. } => "Io".into(),
    }
}

/// `error code=N kind=K msg="..."`
pub fn diagnostic(e: &RunError) -> String {
    format!(
        "error code={} kind={} msg={:?}",
        exit_code(e),
        error_kind(e),
        e.to_string()
    )
}

/// Parses `t`, `c,s` or `auto`.
pub fn parse_direction(s: &str) -> Result<DirectionChoice, RunError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("auto") {
        return Ok(DirectionChoice::Auto);
    }
    if let Some((c, sn)) = s.split_once(',') {
        let d = UnitDirection::new(parse_exact(c)?, parse_exact(sn)?)?;
        return Ok(DirectionChoice::Explicit(d));
    }
    Ok(DirectionChoice::HalfAngle(parse_exact(s)?))
}

/// Parses `p/q` (or a decimal) or `auto`.
pub fn parse_epsilon(s: &str) -> Result<EpsilonChoice, RunError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("auto") {
        return Ok(EpsilonChoice::Auto);
    }
    let e = parse_exact(s)?;
    if sign(&e) <= 0 {
        return Err(Error::NonPositiveEpsilon.into());
    }
    Ok(EpsilonChoice::Fixed(e))
}

pub fn parse_emit(s: &str) -> Result<BTreeSet<Artifact>, RunError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse().map_err(RunError::Usage))
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub polynomial: BivariatePolynomial,
    pub direction: UnitDirection,
    pub t: Option<Rational>,
    pub k: Option<u32>,
    pub tree: PoincareReebTree,
    pub snakes: Vec<SnakeReport>,
    pub scan: Option<DirectionScanReport>,
    pub summary: String,
    pub written: Vec<PathBuf>,
}

/// Generic sample farthest from every flagged interval; ties go to the
/// smaller `|t|`, then to the smaller `t`.
pub fn pick_direction(report: &DirectionScanReport) -> Option<Rational> {
    report
        .samples
        .iter()
        .filter(|s| s.verdict.is_generic())
        .map(|s| (report.distance_to_flagged(&s.t), &s.t))
        .max_by(|(da, ta), (db, tb)| {
            let by_dist = match (da, db) {
                (None, None) => std::cmp::Ordering::Equal,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (Some(_), None) => std::cmp::Ordering::Less,
                (Some(a), Some(b)) => a.cmp(b),
            };
            by_dist
                .then_with(|| tb.abs_sub_cmp(ta))
                .then_with(|| tb.cmp(ta))
        })
        .map(|(_, t)| t.clone())
}

trait AbsCmp {
    fn abs_sub_cmp(&self, o: &Self) -> std::cmp::Ordering;
}

impl AbsCmp for Rational {
    fn abs_sub_cmp(&self, o: &Self) -> std::cmp::Ordering {
        use num_traits::Signed;
        self.abs().cmp(&o.abs())
    }
}

fn write_file(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<(), RunError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

fn kinds_line(t: &PoincareReebTree, side: Side) -> String {
    let s = t
        .side_ids(side)
        .into_iter()
        .map(|id| match t.vertex(id).kind {
            VertexKind::Crest => "C",
            _ => "V",
        })
        .collect::<Vec<_>>();
    s.join(",")
}

fn summary(out: &RunOutput) -> String {
    let t = &out.tree;
    let mut s = String::new();
    let _ = writeln!(s, "polynomial: {}", out.polynomial);
    let _ = write!(s, "direction: c={} s={}", fmt_exact(out.direction.c()), fmt_exact(out.direction.s()));
    if let Some(tv) = &out.t {
        let _ = write!(s, " (t={})", fmt_exact(tv));
    }
    s.push('\n');
    let _ = write!(s, "epsilon: {}", fmt_exact(&t.epsilon));
    if let Some(k) = out.k {
        let _ = write!(s, " (k={k})");
    }
    s.push('\n');
    let shape = if t.vertices.len() == 3 { "path" } else { "branching" };
    let _ = writeln!(s, "tree: {shape}, {} vertices", t.vertices.len());
    let _ = writeln!(s, "right events: {}", kinds_line(t, Side::Right));
    let _ = writeln!(s, "left events: {}", kinds_line(t, Side::Left));
    for r in &out.snakes {
        let sigma: Vec<String> = r.sigma.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "{} snake: {}", r.side, sigma.join(" "));
    }
    s
}

pub fn parse_input(cfg: &RunConfig) -> Result<BivariatePolynomial, RunError> {
    let text = cfg.polynomial_text.trim();
    let f = if text.is_empty() {
        reebsnake::generator::random_polynomial(cfg.seed)
    } else {
        text.parse::<BivariatePolynomial>()?
    };
    if f.coeff(0, 0) != Rational::from_integer(0.into()) {
        return Err(Error::NotVanishingAtOrigin.into());
    }
    Ok(f)
}

/// Runs the whole pipeline and writes the requested files.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let f = parse_input(cfg)?;
    let mut scan = None;
    let (direction, t) = match &cfg.direction {
        DirectionChoice::Auto => {
            if cfg.scan_points < 8 {
                return Err(RunError::Usage("--scan-points must be at least 8".into()));
            }
            let grid = half_angle_grid(cfg.scan_points);
            let report = direction_scan(&f, &grid, &ScanOptions::default())?;
            let t = pick_direction(&report).ok_or(RunError::NoGenericDirection(grid.len()))?;
            info!("picked t = {t}");
            scan = Some(report);
            (UnitDirection::from_half_angle(&t), Some(t))
        }
        DirectionChoice::HalfAngle(t) => (UnitDirection::from_half_angle(t), Some(t.clone())),
        DirectionChoice::Explicit(d) => (d.clone(), None),
    };
    let cert = genericity_certificate(&f, &direction, &reebsnake::genericity::default_x_max(), DEFAULT_SAMPLES)?;
    if !cert.verdict.is_generic() {
        return Err(Error::NonGeneric(cert.verdict).into());
    }
    let (tree, k) = match &cfg.epsilon {
        EpsilonChoice::Auto => {
            let st = stabilize(&f, &direction, &EpsilonOptions::default())?;
            (st.tree, Some(st.k))
        }
        EpsilonChoice::Fixed(e) => {
            if sign(e) <= 0 {
                return Err(Error::NonPositiveEpsilon.into());
            }
            let s = sweep(&f.rotate(&direction), e)?;
            (build_tree(&s, &direction)?, None)
        }
    };
    let report = validate_generic(&tree);
    if !report.passed() {
        return Err(RunError::Validation(format!("{report:?}")));
    }
    let snakes = vec![snake_report(&tree, Side::Right)?, snake_report(&tree, Side::Left)?];
    let mut out = RunOutput {
        polynomial: f,
        direction,
        t,
        k,
        tree,
        snakes,
        scan,
        summary: String::new(),
        written: Vec::new(),
    };
    out.summary = summary(&out);

    let files = cfg.emit.iter().any(|a| *a != Artifact::Summary);
    if files {
        fs::create_dir_all(&cfg.output_dir).map_err(|source| RunError::Io {
            path: cfg.output_dir.clone(),
            source,
        })?;
        let dir = cfg.output_dir.as_path();
        let mut written = Vec::new();
        if cfg.emit.contains(&Artifact::Json) {
            write_file(dir, "tree.json", &out.tree.to_json(), &mut written)?;
            write_file(dir, "snake.json", &snake_json(&out.snakes), &mut written)?;
            if let Some(r) = &out.scan {
                write_file(dir, "scan.json", &scan_json(r), &mut written)?;
            }
        }
        if cfg.emit.contains(&Artifact::Dot) {
            write_file(dir, "tree.dot", &out.tree.to_dot(), &mut written)?;
        }
        if cfg.emit.contains(&Artifact::Svg) {
            let svg = render_svg(&out.polynomial, &out.tree, &SvgOptions::default());
            write_file(dir, "curve.svg", &svg, &mut written)?;
        }
        write_file(dir, "snake.txt", &snake_text(&out.snakes), &mut written)?;
        out.written = written;
    }
    Ok(out)
}
