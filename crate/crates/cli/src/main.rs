//! Command-line front end for the lattice workbench: generate lattices,
//! dump wedge relations, compose single maps, tabulate law suites, run the
//! claim audit, and replay saved counterexamples.
//!
//! Exit codes: 0 = everything checked out (skips included), 1 = a
//! theorem-level law or claim failed, 2 = usage or input error. JSON output
//! is the stable interface; the text format is for humans.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlab_core::audit::{self, ClaimSelection, Mode, Verdict};
use qlab_core::error::{Error, Result};
use qlab_core::files::{self, LatticeFile, MapFile, RelationFile};
use qlab_core::lattice::Lattice;
use qlab_core::laws::{
    check_associativity, check_inf_distributivity, check_join_closure, check_left_unit,
    check_meet_closure, check_right_unit, check_sup_distributivity, find_units,
    sampled_associativity, sampled_distributivity, sampled_left_unit, sampled_right_unit,
    CarrierFamily, ClosureKind, LawOutcome, MapAlgebra, OpKind, WedgeCtx,
};
use qlab_core::limits::Limits;
use qlab_core::maps::{classify, compose, compose_bullet, compose_dot, MonotoneMap};
use qlab_core::wedge::{WedgeMethod, WedgeRelation};
use qlab_core::witness::Counterexample;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "qlab",
    version,
    about = "Workbench for the dot and bullet compositions on monotone self-maps of finite lattices"
)]
struct Cli {
    /// Worker threads for the parallel scans; 0 keeps the library default.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a lattice and emit it as JSON.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Compute the wedge or co-wedge relation of a lattice.
    Wedge(WedgeArgs),
    /// Compose two maps under circ, dot, or bullet.
    Compose(ComposeArgs),
    /// Check one structure's law suite and report per-law verdicts.
    Laws(LawsArgs),
    /// Verify or refute the registered claims on one lattice.
    Audit(AuditArgs),
    /// Re-run every counterexample in a saved audit report.
    Replay(ReplayArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Total order with N elements.
    Chain {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Powerset of K atoms, ordered by inclusion.
    Boolean {
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Five-element diamond; the smallest modular non-distributive lattice.
    M3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Five-element pentagon; the smallest non-modular lattice.
    N5 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of two lattice files, ordered componentwise.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Downset lattice of a seeded random poset (always distributive).
    Random {
        /// Poset size; the lattice is its (always distributive) downset lattice.
        size: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WedgeArgs {
    /// Lattice file.
    lattice: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Wedge)]
    kind: KindArg,
    /// `oracle` scans subsets of the join-irreducibles; `fast` uses the
    /// irreducible-interval test and needs a distributive lattice.
    #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
    method: MethodArg,
    /// Write the relation file here instead of printing its JSON body.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Wedge,
    Co,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Oracle,
    Fast,
}

#[derive(Args)]
struct ComposeArgs {
    /// Operation to apply; dot and bullet need a distributive lattice.
    #[arg(long, value_enum)]
    op: OpArg,
    /// Outer map g (acts second).
    g: PathBuf,
    /// Inner map f (acts first).
    f: PathBuf,
    /// Lattice file; defaults to rebuilding the maps' lattice from its name.
    #[arg(long)]
    lattice: Option<PathBuf>,
    /// Write the composite as a map file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Circ,
    Dot,
    Bullet,
}

#[derive(Args)]
struct LawsArgs {
    /// Lattice file.
    lattice: PathBuf,
    /// Carrier and operation: the full carrier under dot, bullet, or circ,
    /// or the sup-/meet-preserving subcarriers under circ.
    #[arg(long, value_enum)]
    structure: StructureArg,
    /// Exhaustive enumerates the carrier; sample draws seeded random maps
    /// (circ-s and circ-m are exhaustive-only).
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the JSON report here as well.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StructureArg {
    Dot,
    Bullet,
    Circ,
    CircS,
    CircM,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct AuditArgs {
    /// Lattice file.
    lattice: PathBuf,
    /// `all` or a comma-separated list of claim ids, e.g. "Prop 3.7,Thm 3.8".
    #[arg(long, default_value = "all")]
    claims: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the JSON report here as well.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Saved audit report (`audit --out`).
    report: PathBuf,
    /// Lattice file for resolving names the generators cannot rebuild.
    #[arg(long)]
    lattice: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Die quietly when a pager or `head` closes the pipe, like any filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if cli.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
        if let Err(e) = pool {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let limits = Limits::from_env();
    match run(cli.cmd, &limits) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd, limits: &Limits) -> Result<u8> {
    match cmd {
        Cmd::Gen(family) => run_gen(family, limits),
        Cmd::Wedge(a) => run_wedge(a, limits),
        Cmd::Compose(a) => run_compose(a, limits),
        Cmd::Laws(a) => run_laws(a, limits),
        Cmd::Audit(a) => run_audit(a, limits),
        Cmd::Replay(a) => run_replay(a, limits),
    }
}

fn run_gen(family: GenCmd, limits: &Limits) -> Result<u8> {
    let (l, out) = match family {
        GenCmd::Chain { n, out } => {
            guard_size(n, limits)?;
            (Lattice::chain(n)?, out)
        }
        GenCmd::Boolean { k, out } => {
            let n = 1usize
                .checked_shl(k as u32)
                .ok_or_else(|| too_big(usize::MAX, limits))?;
            guard_size(n, limits)?;
            (Lattice::boolean(k)?, out)
        }
        GenCmd::M3 { out } => (Lattice::diamond_m3(), out),
        GenCmd::N5 { out } => (Lattice::pentagon_n5(), out),
        GenCmd::Product { a, b, out } => {
            let la = files::load_lattice(&a, limits)?;
            let lb = files::load_lattice(&b, limits)?;
            (Lattice::product_limited(&la, &lb, limits)?, out)
        }
        GenCmd::Random {
            size,
            edge_prob,
            seed,
            out,
        } => {
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(Error::InvalidInput(format!(
                    "edge probability {edge_prob} is not in [0, 1]"
                )));
            }
            (
                Lattice::from_random_poset(size, edge_prob, seed, limits)?,
                out,
            )
        }
    };
    println!(
        "name={} n={} join-irreducibles={} distributive={}",
        l.name(),
        l.n(),
        l.join_irreducibles().len(),
        l.is_distributive
    );
    let file = LatticeFile::of(&l);
    match out {
        Some(p) => files::write_json(&p, &file)?,
        None => print_json(&file)?,
    }
    Ok(0)
}

fn guard_size(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.lattice_size {
        return Err(too_big(n, limits));
    }
    Ok(())
}

fn too_big(needed: usize, limits: &Limits) -> Error {
    Error::SizeLimitExceeded {
        what: "lattice elements".into(),
        limit: limits.lattice_size,
        needed,
    }
}

fn run_wedge(a: WedgeArgs, limits: &Limits) -> Result<u8> {
    let l = files::load_lattice(&a.lattice, limits)?;
    let method = match a.method {
        MethodArg::Oracle => WedgeMethod::Oracle,
        MethodArg::Fast => WedgeMethod::Fast,
    };
    let rel = match a.kind {
        KindArg::Wedge => WedgeRelation::wedge(&l, method, limits)?,
        KindArg::Co => WedgeRelation::co_wedge(&l, method, limits)?,
    };
    println!(
        "lattice={} kind={} method={} pairs={}",
        l.name(),
        rel.kind().as_str(),
        rel.method().as_str(),
        rel.pairs().len()
    );
    match a.out {
        Some(p) => files::save_relation(&rel, &p)?,
        None => print_json(&RelationFile::of(&rel))?,
    }
    Ok(0)
}

fn run_compose(a: ComposeArgs, limits: &Limits) -> Result<u8> {
    let g_file: MapFile = files::read_json(&a.g)?;
    let l: Arc<Lattice> = match &a.lattice {
        Some(p) => files::load_lattice(p, limits)?,
        None => audit::lattice_by_name(&g_file.lattice).ok_or_else(|| {
            Error::InvalidInput(format!(
                "cannot rebuild lattice '{}' from its name; pass --lattice <file>",
                g_file.lattice
            ))
        })?,
    };
    let g = g_file.build(&l)?;
    let f = files::load_map(&a.f, &l)?;
    let h = match a.op {
        OpArg::Circ => compose(&g, &f)?,
        OpArg::Dot => {
            let w = WedgeRelation::wedge(&l, WedgeMethod::Fast, limits)?;
            compose_dot(&g, &f, &w)?
        }
        OpArg::Bullet => {
            let co = WedgeRelation::co_wedge(&l, WedgeMethod::Fast, limits)?;
            compose_bullet(&g, &f, &co)?
        }
    };
    let class = classify(&h)?;
    println!(
        "lattice={} op={} image={} sup-preserving={} meet-preserving={}",
        l.name(),
        op_kind(a.op).as_str(),
        fmt_image(&h),
        class.sup_preserving,
        class.meet_preserving
    );
    if let Some(p) = a.out {
        files::save_map(&h, &p)?;
    }
    Ok(0)
}

fn op_kind(op: OpArg) -> OpKind {
    match op {
        OpArg::Circ => OpKind::Circ,
        OpArg::Dot => OpKind::Dot,
        OpArg::Bullet => OpKind::Bullet,
    }
}

/// One law verdict in a `laws` report. Informational rows are expected
/// refutations (the full carrier under circ is deliberately not a quantale);
/// they show in the output and the headline but never in the exit code.
struct LawRow {
    law: String,
    informational: bool,
    counterexample: Option<Box<Counterexample>>,
}

impl LawRow {
    fn of(law: &str, informational: bool, outcome: LawOutcome) -> LawRow {
        LawRow {
            law: law.to_string(),
            informational,
            counterexample: match outcome {
                LawOutcome::Pass => None,
                LawOutcome::Fail(cx) => Some(cx),
            },
        }
    }

    fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct LawsReport {
    lattice: String,
    n: usize,
    structure: &'static str,
    mode: Mode,
    carrier: Option<String>,
    carrier_size: Option<usize>,
    rows: Vec<LawRow>,
    left_units: Option<Vec<Vec<usize>>>,
    right_units: Option<Vec<Vec<usize>>>,
    headline: &'static str,
}

impl LawsReport {
    fn headline_passed(&self) -> bool {
        self.rows.iter().all(LawRow::passed)
    }

    fn exit_code(&self) -> u8 {
        let hard_fail = self.rows.iter().any(|r| !r.passed() && !r.informational);
        u8::from(hard_fail)
    }
}

fn structure_parts(s: StructureArg) -> (&'static str, OpKind, CarrierFamily, &'static str) {
    match s {
        StructureArg::Dot => ("dot", OpKind::Dot, CarrierFamily::All, "quantale"),
        StructureArg::Bullet => ("bullet", OpKind::Bullet, CarrierFamily::All, "co-quantale"),
        StructureArg::Circ => ("circ", OpKind::Circ, CarrierFamily::All, "quantale"),
        StructureArg::CircS => (
            "circ-s",
            OpKind::Circ,
            CarrierFamily::SupPreserving,
            "quantale",
        ),
        StructureArg::CircM => (
            "circ-m",
            OpKind::Circ,
            CarrierFamily::MeetPreserving,
            "co-quantale",
        ),
    }
}

fn run_laws(a: LawsArgs, limits: &Limits) -> Result<u8> {
    let l = files::load_lattice(&a.lattice, limits)?;
    let (name, op, family, headline) = structure_parts(a.structure);
    let needs_wedge = matches!(op, OpKind::Dot | OpKind::Bullet);
    let ctx = match needs_wedge {
        true => Some(WedgeCtx::new(&l, limits)?),
        false => None,
    };

    let report = match a.mode {
        ModeArg::Exhaustive => {
            let alg = MapAlgebra::enumerated(&l, ctx.as_ref(), op, family, limits)?;
            let rows = exhaustive_rows(&alg, a.structure, limits)?;
            let units = find_units(&alg);
            let images = |idx: &[usize]| idx.iter().map(|&i| alg.map(i).image()).collect();
            LawsReport {
                lattice: l.name().to_string(),
                n: l.n(),
                structure: name,
                mode: Mode::Exhaustive,
                carrier: Some(alg.label().to_string()),
                carrier_size: Some(alg.len()),
                rows,
                left_units: Some(images(&units.left)),
                right_units: Some(images(&units.right)),
                headline,
            }
        }
        ModeArg::Sample => {
            if matches!(a.structure, StructureArg::CircS | StructureArg::CircM) {
                return Err(Error::InvalidInput(
                    "sampling draws from the full carrier; circ-s and circ-m need --mode exhaustive"
                        .into(),
                ));
            }
            let rows = sampled_rows(&l, ctx.as_ref(), a.structure, a.seed, a.samples)?;
            LawsReport {
                lattice: l.name().to_string(),
                n: l.n(),
                structure: name,
                mode: Mode::Sampled {
                    seed: a.seed,
                    samples: a.samples,
                },
                carrier: None,
                carrier_size: None,
                rows,
                left_units: None,
                right_units: None,
                headline,
            }
        }
    };

    match a.format {
        FormatArg::Text => print_laws_text(&report),
        FormatArg::Json => print_json(&laws_json(&report)?)?,
    }
    if let Some(p) = a.out {
        files::write_json(&p, &laws_json(&report)?)?;
    }
    Ok(report.exit_code())
}

/// Laws over the tabulated carrier. Closure rows stay on the pointwise
/// operation that actually lands in each carrier; the quantale/co-quantale
/// headline covers associativity, the matching closure, and the matching
/// distributivity. The circ distributivity rows are the expected refutation.
fn exhaustive_rows(alg: &MapAlgebra, s: StructureArg, limits: &Limits) -> Result<Vec<LawRow>> {
    let mut rows = vec![LawRow::of(
        "associativity",
        false,
        check_associativity(alg, limits)?,
    )];
    match s {
        StructureArg::Dot | StructureArg::Bullet | StructureArg::Circ => {
            rows.push(LawRow::of(
                "join-closure",
                false,
                check_join_closure(alg, ClosureKind::Pointwise, limits)?,
            ));
            rows.push(LawRow::of(
                "meet-closure",
                false,
                check_meet_closure(alg, ClosureKind::Pointwise, limits)?,
            ));
        }
        StructureArg::CircS => rows.push(LawRow::of(
            "join-closure",
            false,
            check_join_closure(alg, ClosureKind::Pointwise, limits)?,
        )),
        StructureArg::CircM => rows.push(LawRow::of(
            "meet-closure",
            false,
            check_meet_closure(alg, ClosureKind::Pointwise, limits)?,
        )),
    }
    match s {
        StructureArg::Dot | StructureArg::CircS => rows.push(LawRow::of(
            "sup-distributivity",
            false,
            check_sup_distributivity(alg, limits)?,
        )),
        StructureArg::Bullet | StructureArg::CircM => rows.push(LawRow::of(
            "inf-distributivity",
            false,
            check_inf_distributivity(alg, limits)?,
        )),
        StructureArg::Circ => {
            rows.push(LawRow::of(
                "sup-distributivity",
                true,
                check_sup_distributivity(alg, limits)?,
            ));
            rows.push(LawRow::of(
                "inf-distributivity",
                true,
                check_inf_distributivity(alg, limits)?,
            ));
        }
    }
    let id = alg
        .index_of(&MonotoneMap::identity(alg.lattice()))
        .ok_or_else(|| Error::InvalidInput("identity map missing from the carrier".into()))?;
    rows.push(LawRow::of("left-unit(id)", false, check_left_unit(alg, id)));
    if matches!(
        s,
        StructureArg::Circ | StructureArg::CircS | StructureArg::CircM
    ) {
        rows.push(LawRow::of(
            "right-unit(id)",
            false,
            check_right_unit(alg, id),
        ));
    }
    Ok(rows)
}

fn sampled_rows(
    l: &Arc<Lattice>,
    ctx: Option<&WedgeCtx>,
    s: StructureArg,
    seed: u64,
    samples: usize,
) -> Result<Vec<LawRow>> {
    let op = structure_parts(s).1;
    let id = MonotoneMap::identity(l);
    let mut rows = vec![LawRow::of(
        "associativity",
        false,
        sampled_associativity(l, ctx, op, seed, samples)?,
    )];
    match s {
        StructureArg::Dot => rows.push(LawRow::of(
            "sup-distributivity",
            false,
            sampled_distributivity(l, ctx, op, true, seed.wrapping_add(1), samples)?,
        )),
        StructureArg::Bullet => rows.push(LawRow::of(
            "inf-distributivity",
            false,
            sampled_distributivity(l, ctx, op, false, seed.wrapping_add(1), samples)?,
        )),
        StructureArg::Circ => {
            rows.push(LawRow::of(
                "sup-distributivity",
                true,
                sampled_distributivity(l, ctx, op, true, seed.wrapping_add(1), samples)?,
            ));
            rows.push(LawRow::of(
                "inf-distributivity",
                true,
                sampled_distributivity(l, ctx, op, false, seed.wrapping_add(2), samples)?,
            ));
        }
        StructureArg::CircS | StructureArg::CircM => unreachable!("rejected before sampling"),
    }
    rows.push(LawRow::of(
        "left-unit(id)",
        false,
        sampled_left_unit(l, ctx, op, &id, seed.wrapping_add(3), samples)?,
    ));
    if matches!(s, StructureArg::Circ) {
        rows.push(LawRow::of(
            "right-unit(id)",
            false,
            sampled_right_unit(l, ctx, op, &id, seed.wrapping_add(4), samples)?,
        ));
    }
    Ok(rows)
}

fn print_laws_text(r: &LawsReport) {
    let mut head = format!(
        "lattice={} n={} structure={} mode={}",
        r.lattice,
        r.n,
        r.structure,
        fmt_mode(r.mode)
    );
    if let (Some(c), Some(len)) = (&r.carrier, r.carrier_size) {
        head.push_str(&format!(" carrier={c} size={len}"));
    }
    println!("{head}");
    for row in &r.rows {
        let tag = if row.informational {
            " (informational)"
        } else {
            ""
        };
        match &row.counterexample {
            None => println!("{}: PASS{tag}", row.law),
            Some(cx) => println!("{}: FAIL{tag} — {cx}", row.law),
        }
    }
    if let (Some(left), Some(right)) = (&r.left_units, &r.right_units) {
        println!("left-units: {}", fmt_unit_list(left));
        println!("right-units: {}", fmt_unit_list(right));
    }
    let verdict = if r.headline_passed() { "PASS" } else { "FAIL" };
    println!("{}: {verdict}", r.headline);
}

fn fmt_unit_list(units: &[Vec<usize>]) -> String {
    if units.is_empty() {
        return "none".into();
    }
    units
        .iter()
        .map(|img| fmt_usize_list(img))
        .collect::<Vec<_>>()
        .join(" ")
}

fn laws_json(r: &LawsReport) -> Result<serde_json::Value> {
    let rows: Vec<serde_json::Value> = r
        .rows
        .iter()
        .map(|row| match &row.counterexample {
            None => Ok(json!({
                "law": row.law,
                "informational": row.informational,
                "verdict": "pass",
            })),
            Some(cx) => Ok(json!({
                "law": row.law,
                "informational": row.informational,
                "verdict": "fail",
                "counterexample": serde_json::to_value(cx)?,
            })),
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "command": "laws",
        "lattice": r.lattice,
        "n": r.n,
        "structure": r.structure,
        "mode": serde_json::to_value(r.mode)?,
        "carrier": r.carrier,
        "carrier_size": r.carrier_size,
        "laws": rows,
        "left_units": r.left_units,
        "right_units": r.right_units,
        "headline": {"name": r.headline, "passed": r.headline_passed()},
    }))
}

fn run_audit(a: AuditArgs, limits: &Limits) -> Result<u8> {
    let l = files::load_lattice(&a.lattice, limits)?;
    let selection = parse_claims(&a.claims)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sample => Mode::Sampled {
            seed: a.seed,
            samples: a.samples,
        },
    };
    let reports = audit::audit(&l, &selection, mode, limits)?;
    match a.format {
        FormatArg::Text => print_audit_text(&reports),
        FormatArg::Json => print_json(&reports)?,
    }
    if let Some(p) = a.out {
        files::save_reports(&reports, &p)?;
    }
    Ok(u8::from(audit::has_theorem_failure(&reports)))
}

/// A witness that no longer violates is a STALE line and exit 1: the saved
/// report disagrees with a fresh computation, which is exactly what replay
/// exists to catch.
fn run_replay(a: ReplayArgs, limits: &Limits) -> Result<u8> {
    let reports = files::load_reports(&a.report)?;
    let loaded = match &a.lattice {
        Some(p) => Some(files::load_lattice(p, limits)?),
        None => None,
    };
    let resolve = |name: &str| -> Option<Arc<Lattice>> {
        if let Some(l) = &loaded {
            if l.name() == name {
                return Some(l.clone());
            }
        }
        audit::lattice_by_name(name)
    };
    let (mut confirmed, mut stale) = (0usize, 0usize);
    for r in &reports {
        if let Verdict::Fail { counterexample } = &r.verdict {
            if audit::replay_with(counterexample, &resolve)? {
                confirmed += 1;
                println!(
                    "REPLAY {:<14} confirmed: {}",
                    r.claim_id, counterexample.law
                );
            } else {
                stale += 1;
                println!("STALE  {:<14} witness no longer violates", r.claim_id);
            }
        }
    }
    println!(
        "report={} claims={} witnesses={} confirmed={confirmed} stale={stale}",
        a.report.display(),
        reports.len(),
        confirmed + stale
    );
    Ok(u8::from(stale > 0))
}

fn parse_claims(raw: &str) -> Result<ClaimSelection> {
    if raw.trim() == "all" {
        return Ok(ClaimSelection::All);
    }
    let ids: Vec<String> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if ids.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no claim ids in --claims '{raw}'"
        )));
    }
    Ok(ClaimSelection::Ids(ids))
}

fn print_audit_text(reports: &[qlab_core::ClaimReport]) {
    let (mut pass, mut fail, mut skip) = (0usize, 0usize, 0usize);
    for r in reports {
        let title = audit::find_claim(&r.claim_id)
            .map(|c| c.title)
            .unwrap_or("");
        match &r.verdict {
            Verdict::Pass => {
                pass += 1;
                println!("PASS {:<14} [{}] {title}", r.claim_id, fmt_status(r));
            }
            Verdict::Fail { counterexample } => {
                fail += 1;
                println!("FAIL {:<14} [{}] {title}", r.claim_id, fmt_status(r));
                println!("     counterexample: {counterexample}");
            }
            Verdict::Skipped { reason } => {
                skip += 1;
                println!(
                    "SKIP {:<14} [{}] {title} — {reason}",
                    r.claim_id,
                    fmt_status(r)
                );
            }
        }
        if let Some(note) = &r.note {
            println!("     note: {note}");
        }
    }
    let theorem_failures = reports
        .iter()
        .filter(|r| r.verdict.is_fail() && r.status == audit::ClaimStatus::Theorem)
        .count();
    let mode = reports
        .first()
        .map(|r| fmt_mode(r.mode))
        .unwrap_or_else(|| "exhaustive".into());
    let lattice = reports.first().map(|r| r.lattice.as_str()).unwrap_or("?");
    println!(
        "lattice={lattice} mode={mode} claims={} pass={pass} fail={fail} skip={skip} theorem-failures={theorem_failures}",
        reports.len()
    );
}

fn fmt_status(r: &qlab_core::ClaimReport) -> &'static str {
    match r.status {
        audit::ClaimStatus::Theorem => "theorem",
        audit::ClaimStatus::Suspect => "suspect",
    }
}

fn fmt_mode(mode: Mode) -> String {
    match mode {
        Mode::Exhaustive => "exhaustive".into(),
        Mode::Sampled { seed, samples } => format!("sampled(seed={seed},samples={samples})"),
    }
}

fn fmt_image(f: &MonotoneMap) -> String {
    fmt_usize_list(&f.image())
}

fn fmt_usize_list(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_selection_splits_and_trims() {
        assert!(matches!(parse_claims("all"), Ok(ClaimSelection::All)));
        let sel = parse_claims("Prop 3.7, Thm 3.8 ,").unwrap();
        match sel {
            ClaimSelection::Ids(ids) => assert_eq!(ids, vec!["Prop 3.7", "Thm 3.8"]),
            ClaimSelection::All => panic!("expected id list"),
        }
        assert!(parse_claims(" , ").is_err());
    }

    #[test]
    fn image_lists_render_without_spaces() {
        assert_eq!(fmt_usize_list(&[0, 1, 1, 1]), "[0,1,1,1]");
        assert_eq!(fmt_usize_list(&[]), "[]");
        assert_eq!(fmt_unit_list(&[]), "none");
        assert_eq!(fmt_unit_list(&[vec![0, 1], vec![1, 1]]), "[0,1] [1,1]");
    }

    #[test]
    fn informational_rows_never_reach_the_exit_code() {
        let fail = LawRow {
            law: "sup-distributivity".into(),
            informational: true,
            counterexample: Some(Box::new(Counterexample {
                law: "sup-distributivity-left".into(),
                op: Some("circ".into()),
                construction: None,
                relation: qlab_core::witness::Relation::Eq,
                witnesses: vec![],
                lhs: qlab_core::witness::Value::bool(false),
                rhs: qlab_core::witness::Value::bool(true),
            })),
        };
        let report = LawsReport {
            lattice: "chain(2)".into(),
            n: 2,
            structure: "circ",
            mode: Mode::Exhaustive,
            carrier: None,
            carrier_size: None,
            rows: vec![fail],
            left_units: None,
            right_units: None,
            headline: "quantale",
        };
        assert!(!report.headline_passed());
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
