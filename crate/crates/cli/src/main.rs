//! `hadwiger`: generate, verify and fuzz cube-skeleton box cover certificates.
//!
//! Exit codes: 0 verified, 1 claim false, 2 malformed input or bad flags,
//! 3 construction failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hadwiger_core::general::EpsStep;
use hadwiger_core::sampling::{boundary_grid, random_tangency_set};
use hadwiger_core::{
    a4_cover, assemble96, bounds_table, check_certificate, cover88, covers_target,
    paper_face_typing, prop1_cover, skeleton_target, tangency_cover, verify_class, A4Case,
    BoxClass, Certificate, Cover, EpsilonSchedule, Rational, TangencySet, Target,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "hadwiger",
    version,
    about = "Exact box covers of cube skeletons"
)]
struct Cli {
    /// Worker threads for verification (default: all cores).
    #[arg(long, global = true, env = "HADWIGER_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Prop1,
    Cover88,
    Assemble96,
    Tangency,
}

impl Family {
    fn tag(self) -> &'static str {
        match self {
            Family::Prop1 => "prop1",
            Family::Cover88 => "cover88",
            Family::Assemble96 => "assemble96",
            Family::Tangency => "tangency",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a cover and write it as a certificate.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Initial epsilon of the schedule, as p/q.
        #[arg(long)]
        epsilon: Option<Rational>,
        /// Seed for a random tangency set when no input file is given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tangency set file: one base point per line.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow the n >= 6 general construction.
        #[arg(long)]
        long_run: bool,
    },
    /// Re-check a certificate from scratch.
    Verify { file: PathBuf },
    /// Run the four-dimensional pipeline on random and boundary tangency sets.
    FuzzA4 {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the grid of case-threshold coordinates.
        #[arg(long)]
        boundary: bool,
        /// Directory for reproducer files of failing inputs.
        #[arg(long, default_value = ".")]
        reproducers: PathBuf,
    },
    /// Compare the construction sizes with the classical bounds.
    Bounds {
        /// A dimension or an inclusive range like 4..6.
        #[arg(long, default_value = "4..6")]
        n: String,
    },
}

enum Failure {
    Claim(String),
    Malformed(anyhow::Error),
    Construction(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Claim(_) => 1,
            Failure::Malformed(_) => 2,
            Failure::Construction(_) => 3,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn malformed(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Malformed(e.into())
}

fn construction(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Construction(e.into())
}

fn now_stamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn read_tangency(path: &Path) -> std::result::Result<TangencySet, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(malformed)?;
    text.parse()
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(malformed)
}

fn tangency_input(
    input: &Option<PathBuf>,
    n: usize,
    seed: u64,
) -> std::result::Result<TangencySet, Failure> {
    match input {
        Some(p) => read_tangency(p),
        None => Ok(random_tangency_set(
            &mut ChaCha8Rng::seed_from_u64(seed),
            n,
            1 << 16,
        )),
    }
}

fn schedule(
    base: EpsilonSchedule,
    eps: &Option<Rational>,
) -> std::result::Result<EpsilonSchedule, Failure> {
    match eps {
        None => Ok(base),
        Some(e) => {
            EpsilonSchedule::new(e.clone(), base.shrink_factor, base.max_retries).map_err(malformed)
        }
    }
}

fn with_steps(cert: Certificate, sched: &EpsilonSchedule, steps: &[EpsStep]) -> Certificate {
    let cert = cert
        .with_meta("epsilon_initial", &sched.initial)
        .with_meta("steps", steps.len());
    match steps.iter().map(|s| &s.eps).min() {
        Some(e) => cert.with_meta("epsilon_min", e),
        None => cert,
    }
}

fn generate(
    family: Family,
    n: usize,
    epsilon: &Option<Rational>,
    seed: u64,
    input: &Option<PathBuf>,
    out: &Option<PathBuf>,
    long_run: bool,
) -> Outcome {
    if matches!(family, Family::Cover88 | Family::Assemble96) && n != 4 {
        return Err(malformed(anyhow!("{} needs --n 4", family.tag())));
    }
    let cert = match family {
        Family::Prop1 => {
            if n >= 6 && !long_run {
                return Err(malformed(anyhow!("--n {n} takes minutes; pass --long-run")));
            }
            let sched = schedule(EpsilonSchedule::general_default(), epsilon)?;
            let g = prop1_cover(n, &sched).map_err(construction)?;
            let cert = Certificate::new("prop1", &g.cover, skeleton_target(n, n - 2));
            with_steps(cert, &sched, &g.steps).with_meta("diagnostic_only", g.diagnostic_only)
        }
        Family::Cover88 => {
            let c = cover88(&paper_face_typing()).map_err(construction)?;
            Certificate::new("cover88", &c, skeleton_target(4, 2))
        }
        Family::Assemble96 => {
            let t = tangency_input(input, 4, seed)?;
            let sched = schedule(EpsilonSchedule::dim4_default(), epsilon)?;
            let a = assemble96(&t, &sched).map_err(construction)?;
            let target = skeleton_target(4, 2).with_points(t.realized_points());
            with_steps(
                Certificate::new("assemble96", &a.cover, target),
                &sched,
                &a.steps,
            )
            .with_meta("tangency", &t)
            .with_meta("segment", &a.a4.segment)
            .with_meta("case", a.a4.case_tag)
            .with_meta("normalizing_symmetry", &a.normalizing_symmetry)
        }
        Family::Tangency => {
            let t = tangency_input(input, n, seed)?;
            let c = tangency_cover(&t).map_err(construction)?;
            let target = Target::empty(t.dim()).with_points(t.realized_points());
            Certificate::new("tangency", &c, target).with_meta("tangency", &t)
        }
    };
    let mut cert = cert;
    cert.created = now_stamp();
    let report = check_certificate(&cert).map_err(construction)?;
    if !report.ok() {
        return Err(construction(anyhow!(
            "internal verification failed: {}",
            describe(&report)
        )));
    }
    let text = cert.to_text();
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(construction)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{}: {} {} boxes in dimension {}, verified",
        cert.family,
        cert.boxes.len(),
        cert.class.as_str(),
        cert.dimension
    );
    Ok(())
}

fn describe(report: &hadwiger_core::CertificateReport) -> String {
    let mut parts = Vec::new();
    if let Some(i) = report.class_violation {
        parts.push(format!("box {i} is outside the declared class"));
    }
    if let Some(w) = &report.coverage.witness {
        parts.push(format!("uncovered point {w}"));
    }
    parts.join("; ")
}

fn verify(file: &Path) -> Outcome {
    let text = fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))
        .map_err(malformed)?;
    let cert = Certificate::parse(&text)
        .with_context(|| format!("parsing {}", file.display()))
        .map_err(malformed)?;
    let report = check_certificate(&cert).map_err(malformed)?;
    println!("family {}", cert.family);
    println!("dimension {}", cert.dimension);
    println!("boxes {}", cert.boxes.len());
    println!("target parts {}", cert.target.part_count());
    println!("cells {}", report.coverage.cells_checked);
    match report.class_violation {
        None => println!("class {} ok", cert.class.as_str()),
        Some(i) => println!(
            "class {} violated by box {i}: {} (side sum {})",
            cert.class.as_str(),
            cert.boxes[i],
            cert.boxes[i].side_sum()
        ),
    }
    match &report.coverage.witness {
        None => println!("coverage ok"),
        Some(w) => println!("coverage fails, witness {w}"),
    }
    if report.ok() {
        println!("VERIFIED");
        Ok(())
    } else {
        Err(Failure::Claim(describe(&report)))
    }
}

/// Checks one tangency set through both four-dimensional steps.
fn fuzz_one(t: &TangencySet, sched: &EpsilonSchedule) -> std::result::Result<A4Case, String> {
    let a4 = a4_cover(t).map_err(|e| format!("a4_cover: {e}"))?;
    let small = Cover::new(4, a4.boxes.clone(), BoxClass::Strict).map_err(|e| e.to_string())?;
    if a4.boxes.len() > 8 || !verify_class(&small) {
        return Err(format!(
            "a4_cover: {} boxes, class ok {}",
            a4.boxes.len(),
            verify_class(&small)
        ));
    }
    let local = Target::empty(4)
        .with_points(t.realized_points())
        .with_segments([a4.segment.clone()]);
    if let Some(w) = covers_target(&small, &local).witness {
        return Err(format!("a4_cover misses {w}"));
    }
    let a = assemble96(t, sched).map_err(|e| format!("assemble96: {e}"))?;
    if a.cover.len() != 96 || !verify_class(&a.cover) {
        return Err(format!("assemble96: {} boxes", a.cover.len()));
    }
    let full = skeleton_target(4, 2).with_points(t.realized_points());
    if let Some(w) = covers_target(&a.cover, &full).witness {
        return Err(format!("assemble96 misses {w}"));
    }
    Ok(a4.case_tag)
}

fn fuzz_a4(count: usize, seed: u64, boundary: bool, reproducers: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs: Vec<TangencySet> = (0..count)
        .map(|_| random_tangency_set(&mut rng, 4, 1 << 16))
        .collect();
    if boundary {
        inputs.extend(boundary_grid());
    }
    let sched = EpsilonSchedule::dim4_default();
    let results: Vec<_> = inputs.par_iter().map(|t| fuzz_one(t, &sched)).collect();
    let mut hist: BTreeMap<A4Case, usize> = A4Case::ALL.iter().map(|&c| (c, 0)).collect();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(case) => *hist.entry(case).or_default() += 1,
            Err(msg) => failures.push((i, msg)),
        }
    }
    println!("inputs {}", inputs.len());
    for (case, k) in &hist {
        println!("case ({case}) {k}");
    }
    println!("failures {}", failures.len());
    for (i, msg) in &failures {
        let path = reproducers.join(format!("a4-failure-{i}.txt"));
        let body = format!("# {msg}\n{}\n", inputs[*i].to_string().replace(" | ", "\n"));
        fs::write(&path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(construction)?;
        println!("failure {i}: {msg} (reproducer {})", path.display());
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Claim(format!("{} failing inputs", failures.len())))
    }
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let a: usize = a
        .trim()
        .parse()
        .with_context(|| format!("bad dimension `{a}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .with_context(|| format!("bad dimension `{b}`"))?;
    if a < 4 || b < a {
        return Err(anyhow!("need 4 <= from <= to, got {s}"));
    }
    Ok((a, b))
}

fn bounds(n: &str) -> Outcome {
    let (a, b) = parse_range(n).map_err(malformed)?;
    let rows = bounds_table(a..=b).map_err(malformed)?;
    println!(
        "{:>3} {:>12} {:>12} {:>12}  note",
        "n", "construction", "lassak", "rogers"
    );
    for row in rows {
        let note = if row.n >= 7 {
            "formula only, no certificate".to_string()
        } else if row.improves() {
            "improves both".to_string()
        } else {
            String::new()
        };
        println!(
            "{:>3} {:>12} {:>12} {:>12}  {note}",
            row.n, row.paper, row.lassak, row.rogers
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(malformed)?;
    }
    match cli.cmd {
        Cmd::Generate {
            family,
            n,
            epsilon,
            seed,
            input,
            out,
            long_run,
        } => generate(family, n, &epsilon, seed, &input, &out, long_run),
        Cmd::Verify { file } => verify(&file),
        Cmd::FuzzA4 {
            count,
            seed,
            boundary,
            reproducers,
        } => fuzz_a4(count, seed, boundary, &reproducers),
        Cmd::Bounds { n } => bounds(&n),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Claim(msg) => eprintln!("claim false: {msg}"),
                Failure::Malformed(e) => eprintln!("malformed input: {e:#}"),
                Failure::Construction(e) => eprintln!("construction failed: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
