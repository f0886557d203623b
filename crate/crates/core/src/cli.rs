//! Command-line front end.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::almost_simplicial::{beta_mode, classify, BetaMode, BetaSystem, Classification, TrapezoidReading};
use crate::class_group::{ClassGroupSummary, LatticePoint};
use crate::complexes::{build_profile, Analysis, ComplexProfile};
use crate::cone::{Cone, ConeSpec, RationalVector, Shape};
use crate::corpus::{ExampleId, VerifyReport};
use crate::error::Error;
use crate::oracle::{enumerate_chambers, hom_box_check, ChamberCensus, GridSpec};
use crate::paths::{BetaModel, ConeModel, PathModel, PathSpec};
use crate::search::{find_incredulous, Mode, Pruning, SearchConfig, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const SCHEMA: &str = "\
input schemas:
  cone file (--cone PATH, or - for stdin):
    {\"name\": optional string, \"rays\": [[int,...],...], \"class_basis\": optional [[int,...],...]}
  inline rays: --rays \"1,0,0;0,1,0;-1,0,1;0,-1,1\"
  betas: --betas \"2,1,-1,-1,-1\"  (nonzero, summing to zero)
  points: comma-separated integers, e.g. --point \"1,-1\"; sets separate points with ';'
  rational vectors: comma-separated, e.g. --hom-v \"0,-1/4,0\"";

#[derive(Parser, Debug)]
#[command(name = "conic", version, about = "Conic modules, valid paths and incredulous sets of toric cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit tab-separated tables instead of JSON.
    #[arg(long, global = true)]
    tsv: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Include wall-clock timing (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug, Clone)]
struct ConeInput {
    /// JSON cone file, or - for standard input.
    #[arg(long, value_name = "PATH", conflicts_with = "rays")]
    cone: Option<String>,
    /// Rays inline, rows separated by ';'.
    #[arg(long)]
    rays: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct ModelInput {
    #[command(flatten)]
    cone: ConeInput,
    /// One-dimensional betas instead of a cone.
    #[arg(long, conflicts_with_all = ["cone", "rays"])]
    betas: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    FirstFound,
    AllMinimal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PruneArg {
    None,
    GorensteinAlmostSimplicial,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a cone and report its shape.
    Validate(ConeInput),
    /// Class group and zonotope lattice points.
    Analyze(ModelInput),
    /// Profile and valid paths of one lattice point.
    Complex {
        #[command(flatten)]
        input: ModelInput,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Profiles of every lattice point.
    Complexes {
        #[command(flatten)]
        input: ModelInput,
        /// Accepted for symmetry with `complex`; all points are always reported.
        #[arg(long)]
        all: bool,
        /// Also splice against this set and report lockability, e.g. "-1;0;1".
        #[arg(long, allow_hyphen_values = true)]
        splice: Option<String>,
    },
    /// Search for incredulous sets.
    Search {
        #[command(flatten)]
        input: ModelInput,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "none")]
        prune: PruneArg,
        /// Maximum number of subsets to examine.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Closed-form verdict for rank-one betas.
    #[command(name = "classify-1d")]
    Classify1d {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["cone", "rays"])]
        betas: Option<String>,
        #[command(flatten)]
        cone: ConeInput,
    },
    /// Grid census of conic-module classes, and an optional box check of Hom(A_v, A_w).
    Oracle {
        #[command(flatten)]
        cone: ConeInput,
        #[arg(long)]
        grid_denominator: Option<u64>,
        /// Box radius for the Hom check.
        #[arg(long = "box", default_value_t = 2)]
        radius: u32,
        #[arg(long, allow_hyphen_values = true, requires = "hom_w")]
        hom_v: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "hom_v")]
        hom_w: Option<String>,
    },
    /// Replay a reference example against its transcribed fixture.
    Verify {
        #[arg(long)]
        example: ExampleId,
    },
}

impl clap::ValueEnum for ExampleId {
    fn value_variants<'a>() -> &'a [Self] {
        &ExampleId::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputEcho {
    Cone(ConeSpec),
    Betas(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFacts {
    pub dim: usize,
    pub num_rays: usize,
    pub shape: Shape,
    pub gorenstein: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockSummary {
    pub set: Vec<LatticePoint>,
    pub lockable: bool,
    pub incredulous: bool,
    pub final_profiles: Option<Vec<ComplexProfile>>,
    pub cycle_witness: Option<Vec<LatticePoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub denominator: u64,
    pub offset: String,
    pub radius: u32,
    pub chambers: ChamberCensus,
    /// Lattice points times torsion order.
    pub expected_classes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom_box: Option<bool>,
}

/// Everything a command can report; absent sections are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeFacts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_points: Option<Vec<LatticePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<PathSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Vec<ComplexProfile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lock: Option<LockSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trapezoid: Option<TrapezoidReading>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Json(_) => EXIT_INPUT,
            CliError::Io(_) => EXIT_INTERNAL,
            CliError::Lib(e) => match e {
                Error::Linalg(_)
                | Error::Overflow
                | Error::MultiplicityOverflow
                | Error::SelfSubstitution
                | Error::ProfileMismatch { .. }
                | Error::Fixture(_) => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_rows(s: &str) -> CliResult<Vec<Vec<i64>>> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            LatticePoint::parse(r).map(|p| p.0).ok_or_else(|| CliError::Input(format!("bad integer row {r:?}")))
        })
        .collect()
}

fn parse_point(s: &str) -> CliResult<LatticePoint> {
    LatticePoint::parse(s).ok_or_else(|| CliError::Input(format!("bad point {s:?}")))
}

fn parse_betas(s: &str) -> CliResult<Vec<i64>> {
    Ok(parse_point(s)?.0)
}

fn parse_vector(s: &str) -> CliResult<RationalVector> {
    RationalVector::parse(s).ok_or_else(|| CliError::Input(format!("bad rational vector {s:?}")))
}

fn read_cone(input: &ConeInput) -> CliResult<ConeSpec> {
    match (&input.cone, &input.rays) {
        (Some(path), _) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path)?
            };
            Ok(serde_json::from_str(&text)?)
        }
        (None, Some(rays)) => Ok(ConeSpec::new(parse_rows(rays)?)),
        (None, None) => Err(CliError::Input("give --cone or --rays".into())),
    }
}

fn cone_facts(c: &Cone) -> ConeFacts {
    ConeFacts { dim: c.dim(), num_rays: c.num_rays(), shape: c.shape(), gorenstein: c.is_gorenstein() }
}

enum Loaded {
    Cone(Box<ConeModel>),
    Beta(BetaModel),
}

impl Loaded {
    fn model(&self) -> &dyn PathModel {
        match self {
            Loaded::Cone(m) => m.as_ref(),
            Loaded::Beta(m) => m,
        }
    }
}

fn load(input: &ModelInput, report: &mut Report) -> CliResult<Loaded> {
    if let Some(b) = &input.betas {
        let betas = parse_betas(b)?;
        report.input = Some(InputEcho::Betas(betas.clone()));
        return Ok(Loaded::Beta(BetaModel::new(betas)?));
    }
    let spec = read_cone(&input.cone)?;
    report.input = Some(InputEcho::Cone(spec.clone()));
    let cone = spec.validate()?;
    report.cone = Some(cone_facts(&cone));
    let m = ConeModel::new(cone)?;
    report.class_group = Some(m.class_group().into());
    Ok(Loaded::Cone(Box::new(m)))
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let mut report = Report::default();
    match &cli.command {
        Command::Validate(input) => {
            report.command = "validate".into();
            let spec = read_cone(input)?;
            report.input = Some(InputEcho::Cone(spec.clone()));
            report.cone = Some(cone_facts(&spec.validate()?));
        }
        Command::Analyze(input) => {
            report.command = "analyze".into();
            let m = load(input, &mut report)?;
            report.lattice_points = Some(m.model().lattice_points().to_vec());
        }
        Command::Complex { input, point } => {
            report.command = "complex".into();
            let m = load(input, &mut report)?;
            let p = parse_point(point)?;
            report.paths = Some(m.model().valid_paths_into(&p)?);
            report.profiles = Some(vec![build_profile(m.model(), &p)?]);
        }
        Command::Complexes { input, splice, .. } => {
            report.command = "complexes".into();
            let m = load(input, &mut report)?;
            let a = Analysis::build(m.model())?;
            report.lattice_points = Some(a.points().to_vec());
            report.profiles = Some(a.profiles().to_vec());
            if let Some(set) = splice {
                let set = parse_rows(set)?.into_iter().map(LatticePoint).collect::<Vec<_>>();
                let r = a.check_incredulous(&set)?;
                report.lock = Some(LockSummary {
                    set,
                    lockable: r.lockable,
                    incredulous: r.incredulous,
                    final_profiles: r.final_profiles.map(|f| f.into_values().collect()),
                    cycle_witness: r.cycle_witness,
                });
            }
        }
        Command::Search { input, mode, prune, cap } => {
            report.command = "search".into();
            let m = load(input, &mut report)?;
            let a = Analysis::build(m.model())?;
            let cfg = SearchConfig {
                mode: match mode {
                    ModeArg::Exhaustive => Mode::Exhaustive,
                    ModeArg::FirstFound => Mode::FirstFound,
                    ModeArg::AllMinimal => Mode::AllMinimal,
                },
                pruning: match prune {
                    PruneArg::None => Pruning::None,
                    PruneArg::GorensteinAlmostSimplicial => Pruning::GorensteinAlmostSimplicial,
                },
                max_subsets: *cap,
            };
            report.search = Some(find_incredulous(&a, &cfg)?);
        }
        Command::Classify1d { betas, cone } => {
            report.command = "classify-1d".into();
            let mut supplied = None;
            let mode = match betas {
                Some(b) => {
                    let b = parse_betas(b)?;
                    report.input = Some(InputEcho::Betas(b.clone()));
                    if b.contains(&0) {
                        BetaMode::ZeroBetaPresent(b)
                    } else {
                        BetaMode::System(BetaSystem::new(b)?)
                    }
                }
                None => {
                    let spec = read_cone(cone)?;
                    report.input = Some(InputEcho::Cone(spec.clone()));
                    let c = spec.validate()?;
                    report.cone = Some(cone_facts(&c));
                    let cg = crate::ClassGroupData::compute(&c)?;
                    report.class_group = Some((&cg).into());
                    supplied = Some(c);
                    beta_mode(&cg)?
                }
            };
            report.classification = Some(classify(&mode));
            report.trapezoid = Some(TrapezoidReading::new(&mode, supplied.as_ref()));
        }
        Command::Oracle { cone, grid_denominator, radius, hom_v, hom_w } => {
            report.command = "oracle".into();
            let spec = read_cone(cone)?;
            report.input = Some(InputEcho::Cone(spec.clone()));
            let c = spec.validate()?;
            report.cone = Some(cone_facts(&c));
            let grid = match grid_denominator {
                Some(d) => GridSpec::for_cone(&c, *d, *radius)?,
                None => GridSpec { radius: *radius, ..GridSpec::default_for(&c)? },
            };
            let m = ConeModel::new(c.clone())?;
            report.class_group = Some(m.class_group().into());
            let chambers = enumerate_chambers(&c, &grid)?;
            let hom_box = match (hom_v, hom_w) {
                (Some(v), Some(w)) => Some(hom_box_check(&c, &parse_vector(v)?, &parse_vector(w)?, grid.radius)?),
                _ => None,
            };
            report.oracle = Some(OracleSummary {
                denominator: grid.denominator,
                offset: grid.offset.to_string(),
                radius: grid.radius,
                chambers,
                expected_classes: m.lattice_points().len() * m.class_group().torsion_order() as usize,
                hom_box,
            });
        }
        Command::Verify { example } => {
            report.command = "verify".into();
            report.verify = Some(crate::corpus::verify(*example)?);
        }
    }
    Ok(report)
}

fn tsv_point(p: &LatticePoint) -> String {
    p.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn tsv_profiles(out: &mut String, profiles: &[ComplexProfile]) {
    out.push_str("point\tdegree\tentry\tmult\n");
    for k in profiles {
        for (d, entries) in k.degrees() {
            for (q, m) in entries {
                out.push_str(&format!("{}\t{d}\t{}\t{m}\n", tsv_point(k.point()), tsv_point(q)));
            }
        }
    }
}

/// Tables for the sections present in the report.
pub fn to_tsv(r: &Report) -> String {
    let mut out = String::new();
    if let Some(c) = &r.cone {
        out.push_str("dim\tnum_rays\tshape\tgorenstein\n");
        out.push_str(&format!("{}\t{}\t{:?}\t{}\n", c.dim, c.num_rays, c.shape, c.gorenstein));
    }
    if let Some(cg) = &r.class_group {
        let t: Vec<String> = cg.torsion.iter().map(ToString::to_string).collect();
        out.push_str("free_rank\ttorsion\n");
        out.push_str(&format!("{}\t{}\n", cg.free_rank, t.join(",")));
        out.push_str("ray\tbeta\n");
        for (i, b) in cg.betas.iter().enumerate() {
            out.push_str(&format!("{i}\t{}\n", tsv_point(&LatticePoint(b.clone()))));
        }
    }
    if let Some(pts) = &r.lattice_points {
        out.push_str("lattice_point\n");
        for p in pts {
            out.push_str(&format!("{}\n", tsv_point(p)));
        }
    }
    if let Some(paths) = &r.paths {
        out.push_str("subset\tstart\tend\tlength\n");
        for p in paths {
            let s: Vec<String> = p.subset.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{}\t{}\t{}\t{}\n", s.join(","), tsv_point(&p.start), tsv_point(&p.end), p.length));
        }
    }
    if let Some(profiles) = &r.profiles {
        tsv_profiles(&mut out, profiles);
    }
    if let Some(l) = &r.lock {
        out.push_str("lockable\tincredulous\n");
        out.push_str(&format!("{}\t{}\n", l.lockable, l.incredulous));
        if let Some(f) = &l.final_profiles {
            tsv_profiles(&mut out, f);
        }
    }
    if let Some(s) = &r.search {
        out.push_str("incredulous_set\n");
        for set in &s.incredulous_sets {
            out.push_str(&format!("{}\n", set.iter().map(tsv_point).collect::<Vec<_>>().join(";")));
        }
        out.push_str(&format!("subsets_examined\t{}\n", s.subsets_examined));
    }
    if let Some(c) = &r.classification {
        let w = c.witness.as_ref().map_or("-".to_string(), |w| tsv_point(&LatticePoint(w.clone())));
        out.push_str("verdict\twitness\treason\n");
        out.push_str(&format!("{}\t{w}\t{}\n", serde_json::to_value(c.verdict).unwrap_or_default().as_str().unwrap_or(""), c.reason));
    }
    if let Some(t) = &r.trapezoid {
        let geo = t.lattice_trapezoid.map_or("-".to_string(), |g| g.to_string());
        out.push_str(&format!("trapezoid_beta_pattern\tlattice_trapezoid\n{}\t{geo}\n", t.beta_pattern));
    }
    if let Some(o) = &r.oracle {
        out.push_str("denominator\toffset\tradius\tsamples\tdistinct_tuples\tclasses\texpected_classes\thom_box\n");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            o.denominator,
            o.offset,
            o.radius,
            o.chambers.samples,
            o.chambers.distinct_tuples,
            o.chambers.classes,
            o.expected_classes,
            o.hom_box.map_or("-".to_string(), |b| b.to_string())
        ));
    }
    if let Some(v) = &r.verify {
        out.push_str("check\tstatus\tnotes\n");
        for c in &v.checks {
            let status = serde_json::to_value(c.status).unwrap_or_default();
            out.push_str(&format!("{}\t{}\t{}\n", c.name, status.as_str().unwrap_or(""), c.notes.join(" | ")));
        }
    }
    if let Some(t) = r.timing_ms {
        out.push_str(&format!("timing_ms\t{t}\n"));
    }
    out
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("CONIC_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("CONIC_THREADS must be a positive integer, got {v:?}")))?;
    // a pool may already exist when run is called twice in one process; the first setting wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(cli: &Cli, report: &Report) -> CliResult<()> {
    let text = if cli.tsv { to_tsv(report) } else { serde_json::to_string_pretty(report)? + "\n" };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            if code != EXIT_OK {
                eprintln!("\n{SCHEMA}");
            }
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let start = Instant::now();
    let result = execute(&cli).and_then(|mut report| {
        if cli.timing {
            report.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        emit(&cli, &report)?;
        Ok(report)
    });
    match result {
        Ok(report) => match &report.verify {
            Some(v) if !v.all_match() => EXIT_MISMATCH,
            _ => EXIT_OK,
        },
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == EXIT_INPUT {
                eprintln!("\n{SCHEMA}");
            }
            e.exit_code()
        }
    }
}
