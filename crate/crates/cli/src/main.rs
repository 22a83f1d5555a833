use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use segre_veldkamp::binary::extension_report;
use segre_veldkamp::blowup::{arrangements, blow_up_ordinary, blow_up_trivial, ordinary_dual, trivial_dual, Source};
use segre_veldkamp::formats::{
    HyperplaneFile, HyperplaneRecords, LineFile, LineRecord, ProvenanceFile, FLAG_NONPROJECTIVE_MEMBERS,
    FLAG_PROJECTIVE_ONLY,
};
use segre_veldkamp::graphs::ovoid_sweep;
use segre_veldkamp::hyperplane::{dual_key, Hyperplane};
use segre_veldkamp::level::Level;
use segre_veldkamp::pointset::PointSet;
use segre_veldkamp::quadric::quadric_selection;
use segre_veldkamp::report::{self, Table};
use segre_veldkamp::segre::SegreVariety;
use segre_veldkamp::veldkamp::{find_lines, projective_lines_fast, VeldkampLine};
use segre_veldkamp::verify::{self, Context};
use segre_veldkamp::weights::{census_weights, class_weights, level_weights};

/// Geometric hyperplanes and Veldkamp lines of Segre varieties S_k(q).
#[derive(Parser)]
#[command(name = "segre", version)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Memory ceiling for the k=4 store, e.g. 8G. The dense store fits in
    /// well under 1 GB, so this is accepted for compatibility only.
    #[arg(long, global = true)]
    max_mem: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every hyperplane of S_k(q).
    Enumerate {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        projective_only: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find the Veldkamp lines through a hyperplane store.
    Lines {
        #[arg(long)]
        hyps: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Only projective lines, found through the dual space.
        #[arg(long)]
        projective_fast: bool,
        /// Keep lines with non-projective members.
        #[arg(long)]
        include_nonprojective_members: bool,
    },
    /// Type census of a hyperplane store.
    ClassifyHyperplanes {
        #[arg(long)]
        hyps: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// For S_4(3): also write the non-projective types.
        #[arg(long)]
        nonprojective_report: Option<PathBuf>,
    },
    /// Type census of a line store.
    ClassifyLines {
        #[arg(long)]
        lines: PathBuf,
        #[arg(long)]
        hyps: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Orbits of hyperplanes, or of lines when a line store is given.
    Orbits {
        #[arg(long)]
        hyps: PathBuf,
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Hyperplanes one dimension up, blown up from lines and hyperplanes.
    Blowup {
        #[arg(long)]
        lines: PathBuf,
        #[arg(long)]
        hyps: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Provenance sidecar (default: OUT with extension .prov).
        #[arg(long)]
        provenance: Option<PathBuf>,
        /// Skip non-projective inputs.
        #[arg(long)]
        projective_only: bool,
    },
    /// S_4(3) types on the hyperbolic quadric and the symplectic generators.
    Quadric {
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Hyperplane weights at k = 3 or 4.
    Weights {
        #[arg(long, default_value_t = 3)]
        k: u8,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Collinearity graphs of unions of disjoint ovoids of S_3(3).
    Graphs {
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Extensions of binary hyperplanes and lines to ternary ones.
    BinaryEmbed(BinaryArgs),
    /// Acceptance checks.
    Verify {
        /// table1..table12, counts, invariants or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct BinaryArgs {
    #[arg(long, default_value_t = 3)]
    k: u8,
    /// Copy indices to examine (default: all).
    #[arg(long, value_delimiter = ',')]
    copies: Vec<usize>,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    if let Some(m) = &cli.max_mem {
        log::info!("memory ceiling {m} noted; the dense k=4 store stays below it");
    }
    match cli.command {
        Command::Enumerate { q, k, projective_only, out } => enumerate(q, k, projective_only, &out)?,
        Command::Lines { hyps, out, projective_fast, include_nonprojective_members } => {
            lines(&hyps, &out, projective_fast, include_nonprojective_members)?
        }
        Command::ClassifyHyperplanes { hyps, report, nonprojective_report } => {
            classify_hyperplanes(&hyps, &report, nonprojective_report.as_deref())?
        }
        Command::ClassifyLines { lines, hyps, report } => classify_lines(&lines, &hyps, &report)?,
        Command::Orbits { hyps, lines, report } => orbits(&hyps, lines.as_deref(), &report)?,
        Command::Blowup { lines, hyps, out, provenance, projective_only } => {
            let prov = provenance.unwrap_or_else(|| out.with_extension("prov"));
            blowup(&lines, &hyps, &out, &prov, projective_only)?
        }
        Command::Quadric { report } => quadric(report.as_deref())?,
        Command::Weights { k, report } => weights(k, report.as_deref())?,
        Command::Graphs { report } => graphs(report.as_deref())?,
        Command::BinaryEmbed(args) => binary_embed(&args)?,
        Command::Verify { suite } => return verify_suite(&suite),
    }
    Ok(ExitCode::SUCCESS)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_hyps(path: &Path) -> Result<HyperplaneFile> {
    let mut r = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    HyperplaneFile::read(&mut r).with_context(|| format!("reading {}", path.display()))
}

fn read_lines(path: &Path) -> Result<LineFile> {
    let mut r = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    LineFile::read(&mut r).with_context(|| format!("reading {}", path.display()))
}

fn sets(f: &HyperplaneFile) -> Result<&[PointSet]> {
    match &f.records {
        HyperplaneRecords::Sets(s) => Ok(s),
        HyperplaneRecords::Duals(_) => bail!("this command needs point-set records, not dual keys"),
    }
}

fn write_table(t: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            t.write_tsv(&mut w)?;
            w.flush()?;
        }
        None => t.write_tsv(std::io::stdout().lock())?,
    }
    Ok(())
}

/// The level of the given file together with the level below it.
fn levels(q: u8, k: u8) -> Result<(Option<Level>, Level)> {
    ensure!((1..=3).contains(&k), "point-set stores are supported for k = 1 to 3, got {k}");
    if k == 1 {
        return Ok((None, Level::base(q)?));
    }
    let lower = Level::build(q, k - 1)?;
    let level = lower.next()?;
    Ok((Some(lower), level))
}

/// Index into `level` of every record of the store.
fn level_indices(level: &Level, f: &HyperplaneFile) -> Result<Vec<u32>> {
    sets(f)?
        .iter()
        .enumerate()
        .map(|(i, s)| level.index_of(s).with_context(|| format!("record {i} is not a hyperplane of S_{}({})", f.k, f.q)))
        .collect()
}

fn enumerate(q: u8, k: u8, projective_only: bool, out: &Path) -> Result<()> {
    let file = if k == 4 {
        ensure!(q == 3 && projective_only, "S_4 stores are only written for q = 3 with --projective-only");
        let ctx = Context::new();
        HyperplaneFile::from_duals(q, k, ctx.census()?.sorted_keys())
    } else {
        let (_, level) = levels(q, k)?;
        let v = &level.variety;
        let chosen: Vec<PointSet> = level
            .hyperplanes
            .iter()
            .filter(|h| !projective_only || h.is_projective())
            .map(|h| h.points)
            .collect();
        ensure!(chosen.iter().all(|s| v.is_hyperplane(s)), "hyperplane axiom violated");
        HyperplaneFile::from_sets(q, k, projective_only, chosen)
    };
    let mut w = create(out)?;
    file.write(&mut w)?;
    w.flush()?;
    println!("{} hyperplanes of S_{k}({q}) written to {}", file.len(), out.display());
    Ok(())
}

fn lines(hyps: &Path, out: &Path, fast: bool, include_nonprojective: bool) -> Result<()> {
    let f = read_hyps(hyps)?;
    let v = SegreVariety::build(f.q, f.k)?;
    let store: Vec<Hyperplane> = sets(&f)?.par_iter().map(|&s| Hyperplane::new(&v, s)).collect::<Result<_, _>>()?;
    let found: Vec<VeldkampLine> = if fast {
        let proj: Vec<u32> = (0..store.len() as u32).filter(|&i| store[i as usize].is_projective()).collect();
        let sub: Vec<Hyperplane> = proj.iter().map(|&i| store[i as usize].clone()).collect();
        projective_lines_fast(&v, &sub)?
            .into_iter()
            .map(|l| {
                let m: Vec<u32> = l.members().iter().map(|&i| proj[i as usize]).collect();
                VeldkampLine::new(&m, l.core, true)
            })
            .collect()
    } else {
        find_lines(&v, &store)
    };
    let records: Vec<LineRecord> = found
        .iter()
        .filter(|l| include_nonprojective || l.members().iter().all(|&m| store[m as usize].is_projective()))
        .map(|l| LineRecord { members: l.members().iter().map(|&m| m as u64).collect(), projective: l.projective })
        .collect();
    let mut flags = if include_nonprojective { FLAG_NONPROJECTIVE_MEMBERS } else { 0 };
    if fast {
        flags |= FLAG_PROJECTIVE_ONLY;
    }
    let file = LineFile::new(f.q, f.k, flags, records);
    let mut w = create(out)?;
    file.write(&mut w)?;
    w.flush()?;
    let projective = file.records.iter().filter(|r| r.projective).count();
    println!("{} lines ({projective} projective) written to {}", file.records.len(), out.display());
    Ok(())
}

fn classify_hyperplanes(hyps: &Path, report: &Path, nonprojective: Option<&Path>) -> Result<()> {
    let f = read_hyps(hyps)?;
    let table = match &f.records {
        HyperplaneRecords::Duals(keys) => {
            ensure!((f.q, f.k) == (3, 4), "dual-key stores are only classified for S_4(3)");
            let ctx = Context::new();
            let census = ctx.census()?;
            let lower = ctx.level3()?;
            let mut counts = vec![0u64; census.classes.len()];
            for (i, &key) in keys.iter().enumerate() {
                let r = census
                    .refined_of_dual(segre_veldkamp::hyperplane::dual_from_key(key))
                    .with_context(|| format!("record {i} is not a blow-up hyperplane"))?;
                counts[census.refined[r].class] += 1;
            }
            if let Some(p) = nonprojective {
                write_table(&report::nonprojective_table(lower, census), Some(p))?;
            }
            let mut t = report::census_table(lower, census, None);
            for (row, n) in t.rows.iter_mut().zip(&counts) {
                row[6] = n.to_string();
            }
            t
        }
        HyperplaneRecords::Sets(_) => {
            ensure!(nonprojective.is_none(), "--nonprojective-report applies to S_4(3) stores");
            let (lower, level) = levels(f.q, f.k)?;
            let mut counts = vec![0u64; level.hyp_classes.len()];
            for i in level_indices(&level, &f)? {
                counts[level.hyp_class[i as usize]] += 1;
            }
            report::hyperplane_table(&level, lower.as_ref(), &counts)
        }
    };
    write_table(&table, Some(report))?;
    println!("{} hyperplanes in {} types", f.len(), table.rows.len());
    Ok(())
}

fn check_companion(lines: &LineFile, hyps: &HyperplaneFile) -> Result<()> {
    ensure!(
        (lines.q, lines.k) == (hyps.q, hyps.k),
        "line store is for S_{}({}) but hyperplane store is for S_{}({})",
        lines.k,
        lines.q,
        hyps.k,
        hyps.q
    );
    Ok(())
}

/// Level index of every line record.
fn line_indices(level: &Level, lf: &LineFile, map: &[u32]) -> Result<Vec<u32>> {
    lf.records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut m = r
                .members
                .iter()
                .map(|&x| map.get(x as usize).copied().with_context(|| format!("line {i} refers to record {x}")))
                .collect::<Result<Vec<u32>>>()?;
            m.sort_unstable();
            level.line_index(&m).with_context(|| format!("line {i} is not a Veldkamp line"))
        })
        .collect()
}

fn classify_lines(lines: &Path, hyps: &Path, report: &Path) -> Result<()> {
    let lf = read_lines(lines)?;
    let hf = read_hyps(hyps)?;
    check_companion(&lf, &hf)?;
    let (_, level) = levels(hf.q, hf.k)?;
    let map = level_indices(&level, &hf)?;
    let mut counts = vec![0u64; level.line_classes.len()];
    for l in line_indices(&level, &lf, &map)? {
        counts[level.line_class[l as usize]] += 1;
    }
    let table = report::line_table(&level, &counts);
    write_table(&table, Some(report))?;
    println!("{} lines in {} types", lf.records.len(), counts.iter().filter(|&&n| n > 0).count());
    Ok(())
}

fn orbits(hyps: &Path, lines: Option<&Path>, report: &Path) -> Result<()> {
    let hf = read_hyps(hyps)?;
    let (_, level) = levels(hf.q, hf.k)?;
    let map = level_indices(&level, &hf)?;
    let (partition, present, class, labels): (_, Vec<u32>, &[usize], Vec<&str>) = match lines {
        Some(p) => {
            let lf = read_lines(p)?;
            check_companion(&lf, &hf)?;
            let present = line_indices(&level, &lf, &map)?;
            let labels = level.line_classes.iter().map(|c| c.label.as_str()).collect();
            (level.line_orbits()?, present, &level.line_class, labels)
        }
        None => {
            let labels = level.hyp_classes.iter().map(|c| c.label.as_str()).collect();
            (level.hyperplane_orbits()?, map, &level.hyp_class, labels)
        }
    };
    let mut orbit_class: Vec<Option<usize>> = vec![None; partition.len()];
    for (e, &o) in partition.orbit.iter().enumerate() {
        match orbit_class[o as usize] {
            None => orbit_class[o as usize] = Some(class[e]),
            Some(c) => ensure!(c == class[e], "orbit {o} mixes types {} and {}", labels[c], labels[class[e]]),
        }
    }
    let mut seen = vec![0u64; partition.len()];
    for &e in &present {
        seen[partition.orbit[e as usize] as usize] += 1;
    }
    let rows: Vec<(u32, String, u64, u64)> = (0..partition.len())
        .filter(|&o| seen[o] > 0)
        .map(|o| (o as u32, labels[orbit_class[o].unwrap_or(0)].to_string(), partition.sizes[o], seen[o]))
        .collect();
    write_table(&report::orbit_table(&rows), Some(report))?;
    println!("{} elements in {} orbits, each within one type", present.len(), rows.len());
    Ok(())
}

fn blowup(lines: &Path, hyps: &Path, out: &Path, prov: &Path, projective_only: bool) -> Result<()> {
    let lf = read_lines(lines)?;
    let hf = read_hyps(hyps)?;
    check_companion(&lf, &hf)?;
    let (q, k) = (hf.q, hf.k);
    ensure!(k < 4, "blow-up beyond S_4 is not supported");
    let lower = SegreVariety::build(q, k)?;
    let upper = SegreVariety::build(q, k + 1)?;
    let store: Vec<Hyperplane> = sets(&hf)?.par_iter().map(|&s| Hyperplane::new(&lower, s)).collect::<Result<_, _>>()?;
    let arrs = arrangements(upper.base());
    let base = upper.base();
    let line_ok = |r: &LineRecord| {
        !projective_only || (r.projective && r.members.iter().all(|&m| store[m as usize].is_projective()))
    };
    for (i, r) in lf.records.iter().enumerate() {
        ensure!(r.members.iter().all(|&m| (m as usize) < store.len()), "line {i} refers past the hyperplane store");
    }
    let trivial = (0..store.len()).filter(|&h| !projective_only || store[h].is_projective());

    if k + 1 == 4 {
        ensure!(q == 3 && projective_only, "S_4 blow-ups are written as dual keys and need q = 3 and --projective-only");
        let field = lower.field();
        let dim = lower.tensor_dim();
        let mut keyed: Vec<(u32, Source)> = lf
            .records
            .par_iter()
            .enumerate()
            .filter(|(_, r)| line_ok(r))
            .map(|(li, r)| {
                arrs.iter()
                    .enumerate()
                    .map(|(ai, arr)| {
                        let duals = arr
                            .iter()
                            .map(|&m| store[r.members[m] as usize].dual.context("projective member without dual"))
                            .collect::<Result<Vec<_>>>()?;
                        let d = ordinary_dual(field, &duals, dim)?;
                        Ok((dual_key(d), Source::Ordinary { line: li as u32, arrangement: ai as u8 }))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for h in trivial {
            let d = store[h].dual.context("projective hyperplane without dual")?;
            for j in 0..base {
                let key = dual_key(trivial_dual(field, d, j, dim));
                keyed.push((key, Source::Trivial { hyperplane: h as u32, full_layer: j as u8 }));
            }
        }
        keyed.par_sort_unstable();
        let produced = keyed.len();
        keyed.dedup_by_key(|(key, _)| *key);
        let (keys, sources): (Vec<u32>, Vec<Source>) = keyed.into_iter().unzip();
        log::info!("{} collisions", produced - keys.len());
        write_blowup(HyperplaneFile::from_duals(q, k + 1, keys), ProvenanceFile { q, k: k + 1, records: sources }, out, prov)
    } else {
        let mut produced: Vec<(PointSet, Source)> = lf
            .records
            .par_iter()
            .enumerate()
            .filter(|(_, r)| line_ok(r))
            .map(|(li, r)| {
                let members: Vec<PointSet> = r.members.iter().map(|&m| store[m as usize].points).collect();
                arrs.iter()
                    .enumerate()
                    .map(|(ai, arr)| {
                        let s = blow_up_ordinary(&upper, &members, arr)?;
                        Ok((s, Source::Ordinary { line: li as u32, arrangement: ai as u8 }))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for h in trivial {
            for j in 0..base {
                let s = blow_up_trivial(&upper, &store[h].points, j);
                produced.push((s, Source::Trivial { hyperplane: h as u32, full_layer: j as u8 }));
            }
        }
        ensure!(produced.par_iter().all(|(s, _)| upper.is_hyperplane(s)), "blow-up output violates the hyperplane axiom");
        let nbytes = upper.point_count().div_ceil(8);
        produced.par_sort_unstable_by(|a, b| a.0.to_bytes(nbytes).cmp(&b.0.to_bytes(nbytes)).then(a.1.cmp(&b.1)));
        produced.dedup_by(|a, b| a.0 == b.0);
        let (sets, sources): (Vec<PointSet>, Vec<Source>) = produced.into_iter().unzip();
        let file = HyperplaneFile::from_sets(q, k + 1, projective_only, sets);
        write_blowup(file, ProvenanceFile { q, k: k + 1, records: sources }, out, prov)
    }
}

fn write_blowup(file: HyperplaneFile, prov: ProvenanceFile, out: &Path, prov_path: &Path) -> Result<()> {
    let mut w = create(out)?;
    file.write(&mut w)?;
    w.flush()?;
    let mut w = create(prov_path)?;
    prov.write(&mut w)?;
    w.flush()?;
    println!("{} hyperplanes of S_{}({}) written to {}", file.len(), file.k, file.q, out.display());
    Ok(())
}

fn quadric(report: Option<&Path>) -> Result<()> {
    let ctx = Context::new();
    let q = quadric_selection(ctx.level3()?, ctx.census()?)?;
    write_table(&report::quadric_table(&q), report)?;
    eprintln!(
        "{} types, {} points; {} symplectic types, {} generators",
        q.types.len(),
        q.total,
        q.symplectic.len(),
        q.symplectic_total
    );
    q.check_counts()?;
    Ok(())
}

fn weights(k: u8, report: Option<&Path>) -> Result<()> {
    let ctx = Context::new();
    let table = match k {
        3 => {
            let l = ctx.level3()?;
            let w = class_weights(l, &level_weights(l))?;
            let labels: Vec<String> = l.hyp_classes.iter().map(|c| c.label.clone()).collect();
            report::weight_table(&labels, &w)
        }
        4 => {
            let census = ctx.census()?;
            let w = census_weights(ctx.level3()?, census)?;
            let labels: Vec<String> = census.refined.iter().map(|r| r.label.clone()).collect();
            report::weight_table(&labels, &w)
        }
        _ => bail!("weights are computed for k = 3 and 4"),
    };
    write_table(&table, report)
}

fn graphs(report: Option<&Path>) -> Result<()> {
    let ctx = Context::new();
    let sweep = ovoid_sweep(ctx.level3()?);
    write_table(&report::graph_table(&sweep), report)?;
    if !sweep.holds() {
        eprintln!("some disjoint projective ovoid pairs are neither Dyck nor four cubes");
    }
    Ok(())
}

fn binary_embed(args: &BinaryArgs) -> Result<()> {
    ensure!((2..=3).contains(&args.k), "binary embedding is examined for k = 2 and 3");
    let ternary = Level::build(3, args.k)?;
    let binary = Level::build(2, args.k)?;
    let copies: Vec<usize> =
        if args.copies.is_empty() { (0..4usize.pow(args.k as u32)).collect() } else { args.copies.clone() };
    let r = extension_report(&ternary, &binary, &copies)?;
    write_table(&report::extension_table(&r), args.report.as_deref())?;
    eprintln!(
        "{} copies; {} of {} restrictions are neither full nor a hyperplane; {} line types extend; copies agree: {}",
        r.copies,
        r.non_hereditary,
        r.restrictions,
        r.extendable_line_types(),
        r.copies_agree()
    );
    Ok(())
}

fn verify_suite(name: &str) -> Result<ExitCode> {
    let ids = verify::suite(name)
        .with_context(|| format!("unknown suite {name:?}; expected one of {}", verify::SUITES.join(", ")))?;
    let ctx = Context::new();
    let mut failed = 0;
    for id in ids {
        let check = ctx.run(id);
        println!("{check}");
        if !check.passed {
            failed += 1;
        }
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
