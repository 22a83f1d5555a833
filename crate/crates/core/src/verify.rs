//! Acceptance checks against the reference tables, shared by the test
//! runner and the `verify` subcommand.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::binary::extension_report;
use crate::blowup::{arrangements, blow_up_ordinary, blow_up_trivial, Source};
use crate::census4::{source_dual, source_points, vl_labels, Census4};
use crate::error::{Error, Result};
use crate::formats::{HyperplaneFile, LineFile, LineRecord, FLAG_NONPROJECTIVE_MEMBERS};
use crate::gf::{Field, RowReducer};
use crate::graphs::ovoid_sweep;
use crate::hyperplane::{dual_from_key, dual_key, signature, zero_locus, Hyperplane, LowerClassifier};
use crate::level::{composition_counts, Level};
use crate::orbits::OrbitPartition;
use crate::pointset::PointSet;
use crate::quadric::quadric_selection;
use crate::reference::{
    LineRow, BINARY_EXTENSIONS, BINARY_HYPERPLANES, OVOID_SPLIT_VECTOR_ORBITS, QUADRIC_POINTS, QUADRIC_TYPES,
    S2_LINES, S3_HYPERPLANES, S3_LINES, S3_LINE_SPLITS, S3_OVOIDAL_LINES, S4_HYPERPLANES, S4_NONPROJECTIVE,
    SYMPLECTIC_GENERATORS, SYMPLECTIC_TYPES,
};
use crate::segre::SegreVariety;
use crate::veldkamp::{find_lines, projective_lines_fast};
use crate::weights::{census_weights, class_weights, level_weights};

pub const CRITERIA: u32 = 13;

/// Random S_4(3) blow-ups examined by the property suite.
pub const RANDOM_SAMPLES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "S2(3) hyperplanes and ovoid quadruples",
        2 => "V(S2(3)) lines",
        3 => "S3(3) hyperplane types",
        4 => "V(S3(3)) line types",
        5 => "V(S3(3)) line orbits",
        6 => "S4(3) projective census",
        7 => "S4(3) refined classes",
        8 => "quadric and symplectic selections",
        9 => "S4(3) non-projective types",
        10 => "weights",
        11 => "ovoid graphs",
        12 => "binary embedding",
        13 => "properties",
        _ => "unknown",
    }
}

/// Criteria run by a named suite.
pub fn suite(name: &str) -> Option<Vec<u32>> {
    let ids = match name {
        "table1" | "table3" => vec![1],
        "table2" => vec![2],
        "table4" => vec![3],
        "table5" | "table6" => vec![4],
        "table7" => vec![5],
        "table8" => vec![12],
        "table9" => vec![6, 7, 10],
        "table10" | "table11" => vec![8],
        "table12" => vec![9],
        "counts" => vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12],
        "invariants" => vec![11, 13],
        "all" => (1..=CRITERIA).collect(),
        _ => return None,
    };
    Some(ids)
}

pub const SUITES: &[&str] = &[
    "table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8", "table9", "table10", "table11",
    "table12", "counts", "invariants", "all",
];

/// Levels and censuses built on first use and shared between checks.
#[derive(Default)]
pub struct Context {
    level2: OnceLock<Level>,
    level3: OnceLock<Level>,
    orbits3: OnceLock<OrbitPartition>,
    census: OnceLock<Census4>,
    binary2: OnceLock<Level>,
    binary3: OnceLock<Level>,
}

fn cached<T>(cell: &OnceLock<T>, build: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = build()?;
    Ok(cell.get_or_init(|| v))
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn level2(&self) -> Result<&Level> {
        cached(&self.level2, || Level::build(3, 2))
    }

    pub fn level3(&self) -> Result<&Level> {
        cached(&self.level3, || self.level2()?.next())
    }

    pub fn orbits3(&self) -> Result<&OrbitPartition> {
        cached(&self.orbits3, || self.level3()?.line_orbits())
    }

    pub fn census(&self) -> Result<&Census4> {
        cached(&self.census, || Census4::build(self.level3()?, self.orbits3()?))
    }

    pub fn binary2(&self) -> Result<&Level> {
        cached(&self.binary2, || Level::build(2, 2))
    }

    pub fn binary3(&self) -> Result<&Level> {
        cached(&self.binary3, || self.binary2()?.next())
    }

    pub fn run(&self, id: u32) -> Check {
        let outcome = match id {
            1 => self.s2_hyperplanes(),
            2 => self.s2_lines(),
            3 => self.s3_hyperplanes(),
            4 => self.s3_lines(),
            5 => self.s3_orbits(),
            6 => self.s4_census(),
            7 => self.s4_refined(),
            8 => self.quadric(),
            9 => self.s4_nonprojective(),
            10 => self.weights(),
            11 => self.graphs(),
            12 => self.binary(),
            13 => self.properties(),
            _ => Err(Error::Shape(format!("no criterion {id}"))),
        };
        let (passed, detail) = match outcome {
            Ok(Outcome { failures, summary }) if failures.is_empty() => (true, summary),
            Ok(Outcome { failures, summary }) => (false, format!("{summary}; {}", failures.join("; "))),
            Err(e) => (false, format!("error: {e}")),
        };
        Check { id, name: name(id), passed, detail }
    }
}

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

#[derive(Default)]
struct Tally(Vec<String>);

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.0.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn done(self, summary: String) -> Result<Outcome> {
        Ok(Outcome { failures: self.0, summary })
    }
}

fn is_ovoid(v: &SegreVariety, h: &Hyperplane) -> bool {
    v.contained_line_count(&h.points) == 0
}

fn span_rank(v: &SegreVariety, s: &PointSet) -> usize {
    let mut rr = RowReducer::new(v.field());
    for p in s.iter() {
        rr.insert(v.tensor_row(p));
    }
    rr.rank()
}

fn line_rows_match(level: &Level, rows: &[&LineRow], t: &mut Tally) {
    for r in rows {
        match level.line_classes.iter().find(|c| c.label == r.label) {
            None => t.0.push(format!("line type {} missing", r.label)),
            Some(c) => {
                let sig = &c.signature;
                let comp = composition_counts(&sig.composition, level.hyp_classes.len());
                t.eq(
                    &format!("line type {}", r.label),
                    (sig.core_points, sig.core_lines, comp.as_slice(), c.count, sig.projective),
                    (r.core_points, r.core_lines, r.composition, r.count, r.projective()),
                );
            }
        }
    }
}

impl Context {
    fn s2_hyperplanes(&self) -> Result<Outcome> {
        let l = self.level2()?;
        let v = &l.variety;
        let mut t = Tally::default();
        let ovoids: BTreeSet<u32> =
            (0..l.hyperplanes.len() as u32).filter(|&h| is_ovoid(v, &l.hyperplanes[h as usize])).collect();
        let singular = l.hyp_classes.iter().find(|c| c.label == "H1").map_or(0, |c| c.count);
        t.eq("hyperplanes", l.hyperplanes.len(), 40);
        t.eq("singular", singular, 16);
        t.eq("ovoids", ovoids.len(), 24);
        let quads: Vec<&[u32]> = l.lines.iter().filter(|x| !x.projective).map(|x| x.members()).collect();
        t.eq("non-projective lines", quads.len(), 6);
        let covered: Vec<u32> = quads.iter().flat_map(|m| m.iter().copied()).collect();
        let distinct: BTreeSet<u32> = covered.iter().copied().collect();
        t.expect(covered.len() == 24 && distinct == ovoids, || "quadruples do not partition the ovoids".into());
        t.done(format!("{} hyperplanes, {singular} singular, {} ovoids in {} quadruples", l.hyperplanes.len(), ovoids.len(), quads.len()))
    }

    fn s2_lines(&self) -> Result<Outcome> {
        let l = self.level2()?;
        let mut t = Tally::default();
        let proj = l.lines.iter().filter(|x| x.projective).count();
        t.eq("lines", l.lines.len(), 136);
        t.eq("projective", proj, 130);
        let rows: Vec<&LineRow> = S2_LINES.iter().collect();
        line_rows_match(l, &rows, &mut t);
        t.eq("line types", l.line_classes.len(), S2_LINES.len());
        let keys = |ls: &mut dyn Iterator<Item = u64>| -> BTreeSet<u64> { ls.collect() };
        let algorithm = find_lines(&l.variety, &l.hyperplanes);
        let fast = projective_lines_fast(&l.variety, &l.hyperplanes)?;
        let slow = keys(&mut algorithm.iter().filter(|x| x.projective).map(|x| x.key()));
        let quick = keys(&mut fast.iter().map(|x| x.key()));
        t.expect(slow == quick, || format!("fast route gives {} lines, search gives {}", quick.len(), slow.len()));
        let counts: Vec<u64> = l.line_classes.iter().filter(|c| c.projective()).map(|c| c.count).collect();
        t.done(format!("{} lines, {proj} projective, class sizes {counts:?}, fast route set-equal", l.lines.len()))
    }

    fn s3_hyperplanes(&self) -> Result<Outcome> {
        let l = self.level3()?;
        let lower = self.level2()?;
        let mut t = Tally::default();
        t.eq("hyperplanes", l.hyperplanes.len(), 3424);
        t.eq("types", l.hyp_classes.len(), S3_HYPERPLANES.len());
        for r in S3_HYPERPLANES {
            let Some(c) = l.hyp_classes.iter().find(|c| c.label == r.label) else {
                t.0.push(format!("type {} missing", r.label));
                continue;
            };
            let s = &c.signature;
            let vl = vl_labels(lower, &s.vl);
            let want: Vec<String> = r.vl.iter().map(|x| x.to_string()).collect();
            t.eq(
                &format!("type {}", r.label),
                (s.points, s.lines, &s.orders[..4], s.sections.as_slice(), c.count, s.projective, vl),
                (r.points, r.lines, r.orders, r.sections, r.count, r.projective(), want),
            );
        }
        let summary: Vec<String> = l.hyp_classes.iter().map(|c| format!("{}={}", c.label, c.count)).collect();
        t.done(format!("{} hyperplanes: {}", l.hyperplanes.len(), summary.join(" ")))
    }

    fn s3_lines(&self) -> Result<Outcome> {
        let l = self.level3()?;
        let mut t = Tally::default();
        let rows: Vec<&LineRow> = S3_LINES.iter().chain(S3_OVOIDAL_LINES).collect();
        line_rows_match(l, &rows, &mut t);
        let unlabelled: Vec<&str> =
            l.line_classes.iter().filter(|c| c.label.starts_with('?')).map(|c| c.label.as_str()).collect();
        t.expect(unlabelled.is_empty(), || format!("unlabelled types {unlabelled:?}"));
        let h_proj: Vec<bool> = l.hyperplanes.iter().map(|h| h.is_projective()).collect();
        let (mut proj, mut starred, mut ovoidal) = (0u64, 0u64, 0u64);
        let (mut pc, mut sc, mut oc) = (0, 0, 0);
        for c in &l.line_classes {
            let all_proj_members = c.signature.composition.iter().all(|&h| l.hyp_classes[h].projective());
            match (c.projective(), all_proj_members) {
                (true, _) => (proj += c.count, pc += 1),
                (false, true) => (starred += c.count, sc += 1),
                (false, false) => (ovoidal += c.count, oc += 1),
            };
        }
        let direct = l.lines.iter().filter(|x| x.members().iter().any(|&m| !h_proj[m as usize])).count() as u64;
        t.eq("projective lines", proj, 896_260);
        t.eq("starred lines", starred, 2_268);
        t.eq("ovoidal lines", ovoidal, 5_400);
        t.eq("ovoidal lines by member", direct, 5_400);
        t.eq("class counts", (pc, sc, oc), (62, 4, 5));
        t.done(format!("{proj} projective in {pc} types, {starred} starred in {sc}, {ovoidal} ovoidal in {oc}"))
    }

    fn s3_orbits(&self) -> Result<Outcome> {
        let l = self.level3()?;
        let orb = self.orbits3()?;
        let mut t = Tally::default();
        let mut per_class: BTreeMap<usize, BTreeSet<u32>> = BTreeMap::new();
        for (i, x) in l.lines.iter().enumerate() {
            if x.projective {
                per_class.entry(l.line_class[i]).or_default().insert(orb.orbit[i]);
            }
        }
        let total: usize = per_class.values().map(|s| s.len()).sum();
        t.eq("projective orbits", total, 69);
        let mut splits: Vec<(String, u64, u64)> = Vec::new();
        for (c, s) in &per_class {
            if s.len() > 1 {
                let mut sizes: Vec<u64> = s.iter().map(|&o| orb.sizes[o as usize]).collect();
                sizes.sort_unstable();
                let label = l.line_classes[*c].label.clone();
                t.expect(sizes.len() == 2, || format!("type {label} splits into {} orbits", sizes.len()));
                splits.push((label, sizes[0], *sizes.last().unwrap_or(&0)));
            }
        }
        splits.sort_by_key(|(l, _, _)| crate::level::label_order(l));
        let want: Vec<(String, u64, u64)> = S3_LINE_SPLITS.iter().map(|&(l, a, b)| (l.to_string(), a, b)).collect();
        t.eq("split types", &splits, &want);
        let names: Vec<String> = splits.iter().map(|(l, a, b)| format!("{l}:{a}+{b}")).collect();
        t.done(format!("{total} orbits; splits {}", names.join(" ")))
    }

    fn s4_census(&self) -> Result<Outcome> {
        let c = self.census()?;
        let mut t = Tally::default();
        let identity = 896_260u64 * 24 + 3_280 * 4;
        t.eq("distinct", c.distinct, 21_523_360);
        t.eq("collisions", c.collisions, 0);
        t.eq("identity", c.projective_total(), identity);
        t.eq("types", c.classes.len(), S4_HYPERPLANES.len());
        for r in S4_HYPERPLANES {
            match c.classes.iter().find(|x| x.label == r.label) {
                None => t.0.push(format!("type {} missing", r.label)),
                Some(x) => t.eq(&format!("type {}", r.label), x.count, r.count),
            }
        }
        t.done(format!("{} distinct, {} collisions, {} types", c.distinct, c.collisions, c.classes.len()))
    }

    fn s4_refined(&self) -> Result<Outcome> {
        let c = self.census()?;
        let l = self.level3()?;
        let orb = self.orbits3()?;
        let mut t = Tally::default();
        t.eq("refined classes", c.refined.len(), 48);
        let mut per_class: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
        for r in &c.refined {
            per_class.entry(c.classes[r.class].label.as_str()).or_default().push(r.count);
        }
        let split: BTreeSet<&str> = per_class.iter().filter(|(_, v)| v.len() > 1).map(|(k, _)| *k).collect();
        let marked: BTreeSet<&str> = S4_HYPERPLANES.iter().filter(|r| r.orbit.contains('+')).map(|r| r.label).collect();
        t.eq("split types", &split, &["20", "28", "31", "34", "43"].into_iter().collect());
        t.eq("split types vs orbit column", &split, &marked);
        let count = |label: &str| c.refined.iter().find(|r| r.label == label).map(|r| r.count);
        t.eq("43a, 43b doubled", (count("43a").map(|n| 2 * n), count("43b").map(|n| 2 * n)), (Some(OVOID_SPLIT_VECTOR_ORBITS.0), Some(OVOID_SPLIT_VECTOR_ORBITS.1)));

        // Every (hyperplane, direction) pair projects onto a lower line or a
        // trivial line; summing over classes recovers the lower orbit sizes.
        let mut ordinary: FxHashMap<u32, u64> = FxHashMap::default();
        let mut trivial: FxHashMap<usize, u64> = FxHashMap::default();
        for r in &c.refined {
            for d in &r.directions {
                match *d {
                    crate::census4::DirectionOrbit::Ordinary(o) => *ordinary.entry(o).or_default() += r.count,
                    crate::census4::DirectionOrbit::Trivial(h) => *trivial.entry(h).or_default() += r.count,
                }
            }
        }
        let mut projective_orbits: BTreeSet<u32> = BTreeSet::new();
        for (i, x) in l.lines.iter().enumerate() {
            if x.projective {
                projective_orbits.insert(orb.orbit[i]);
            }
        }
        let bad_lines = projective_orbits
            .iter()
            .filter(|&&o| ordinary.get(&o).copied().unwrap_or(0) != 96 * orb.sizes[o as usize])
            .count();
        t.expect(bad_lines == 0 && ordinary.len() == projective_orbits.len(), || {
            format!("{bad_lines} line orbits violate the projection count")
        });
        let bad_hyps = l
            .hyp_classes
            .iter()
            .enumerate()
            .filter(|(_, h)| h.projective())
            .filter(|&(i, h)| trivial.get(&i).copied().unwrap_or(0) != 16 * h.count)
            .count();
        t.expect(bad_hyps == 0, || format!("{bad_hyps} hyperplane types violate the projection count"));
        let names: Vec<String> = c.refined.iter().filter(|r| r.label.ends_with(['a', 'b'])).map(|r| format!("{}={}", r.label, r.count)).collect();
        t.done(format!("{} classes; {}", c.refined.len(), names.join(" ")))
    }

    fn quadric(&self) -> Result<Outcome> {
        let c = self.census()?;
        let l = self.level3()?;
        let q = quadric_selection(l, c)?;
        let mut t = Tally::default();
        let row = |label: &str| S4_HYPERPLANES.iter().find(|r| r.label == label).map_or(0, |r| r.count);
        let want: BTreeMap<String, u64> = QUADRIC_TYPES.iter().map(|&s| (s.to_string(), row(s))).collect();
        let want_sym: BTreeMap<String, u64> = SYMPLECTIC_TYPES.iter().map(|&s| (s.to_string(), row(s))).collect();
        t.eq("quadric types", &q.types, &want);
        t.eq("mixed types", q.mixed.len(), 0);
        t.eq("symplectic types", &q.symplectic, &want_sym);
        if let Err(e) = q.check_counts() {
            t.0.push(e.to_string());
        }
        t.done(format!(
            "{} types, {} points (expected {QUADRIC_POINTS}); {} symplectic types, {} generators (expected {SYMPLECTIC_GENERATORS})",
            q.types.len(),
            q.total,
            q.symplectic.len(),
            q.symplectic_total
        ))
    }

    fn s4_nonprojective(&self) -> Result<Outcome> {
        let c = self.census()?;
        let mut t = Tally::default();
        let got: BTreeMap<&str, u64> = c.nonprojective.iter().map(|x| (x.label.as_str(), x.count)).collect();
        let want: BTreeMap<&str, u64> = S4_NONPROJECTIVE.iter().map(|r| (r.label, r.count)).collect();
        t.eq("non-projective types", &got, &want);
        let total: u64 = got.values().sum();
        t.eq("total", total, 2_268 * 24 + 144 * 4);
        let names: Vec<String> = got.iter().map(|(l, n)| format!("{l}={n}")).collect();
        t.done(format!("{} total: {}", total, names.join(" ")))
    }

    fn weights(&self) -> Result<Outcome> {
        let l = self.level3()?;
        let mut t = Tally::default();
        let w3 = class_weights(l, &level_weights(l))?;
        for r in S3_HYPERPLANES {
            let Some(i) = l.hyp_classes.iter().position(|c| c.label == r.label) else {
                t.0.push(format!("type {} missing", r.label));
                continue;
            };
            t.eq(&format!("weight of {}", r.label), w3[i], r.weight.parse().ok());
        }
        let c = self.census()?;
        let w4 = census_weights(l, c)?;
        for r in S4_HYPERPLANES {
            let values: Vec<Option<u32>> = r.weight.split(',').map(|w| w.parse().ok()).collect();
            let refined: Vec<usize> =
                (0..c.refined.len()).filter(|&i| c.classes[c.refined[i].class].label == r.label).collect();
            let got: Vec<Option<u32>> = refined.iter().map(|&i| w4[i]).collect();
            let expect: Vec<Option<u32>> = if values.len() == refined.len() {
                values
            } else {
                vec![values[0]; refined.len()]
            };
            t.eq(&format!("weight of {}", r.label), got, expect);
        }
        let k3: Vec<String> = l.hyp_classes.iter().zip(&w3).map(|(c, w)| format!("{}={}", c.label, w.map_or("-".into(), |w| w.to_string()))).collect();
        let split: Vec<String> = c.refined.iter().zip(&w4).filter(|(r, _)| r.label.starts_with("43")).map(|(r, w)| format!("{}={:?}", r.label, w)).collect();
        t.done(format!("k=3 {}; k=4 {} classes, {}", k3.join(" "), w4.len(), split.join(" ")))
    }

    fn graphs(&self) -> Result<Outcome> {
        let l = self.level3()?;
        let s = ovoid_sweep(l);
        let mut t = Tally::default();
        t.expect(s.projective_pairs > 0 && s.projective_other == 0, || {
            format!("{} of {} disjoint projective pairs are neither Dyck nor 4xQ3", s.projective_other, s.projective_pairs)
        });
        t.expect(s.nonprojective_pairs > 0 && s.nonprojective_dyck == 0, || {
            format!("{} of {} non-projective pairs are Dyck", s.nonprojective_dyck, s.nonprojective_pairs)
        });
        t.expect(s.nauru_pairs > 0 && s.nauru_matches == s.nauru_pairs, || {
            format!("{} of {} Nauru constructions match GP(12,5)", s.nauru_matches, s.nauru_pairs)
        });
        t.expect(s.holds(), || "sweep does not hold".into());
        t.done(format!(
            "projective pairs {} (Dyck {}, 4xQ3 {}, other {}); non-projective pairs {} (Dyck {}); Nauru {}/{}",
            s.projective_pairs,
            s.projective_dyck,
            s.projective_cubes,
            s.projective_other,
            s.nonprojective_pairs,
            s.nonprojective_dyck,
            s.nauru_matches,
            s.nauru_pairs
        ))
    }

    fn binary(&self) -> Result<Outcome> {
        let b2 = self.binary2()?;
        let b3 = self.binary3()?;
        let mut t = Tally::default();
        let nonproj = |l: &Level| {
            l.hyperplanes.iter().filter(|h| !h.is_projective()).count() + l.lines.iter().filter(|x| !x.projective).count()
        };
        t.eq("S2(2)", (b2.hyperplanes.len(), b2.lines.len(), nonproj(b2)), (15, 35, 0));
        t.eq("S3(2)", (b3.hyperplanes.len(), b3.lines.len(), nonproj(b3)), (255, 10_795, 0));
        t.eq("S3(2) types", (b3.hyp_classes.len(), b3.line_classes.len()), (5, 41));
        for &(label, points, count, _) in BINARY_HYPERPLANES {
            let got = b3.hyp_classes.iter().find(|c| c.label == label).map(|c| (c.signature.points, c.count));
            t.eq(&format!("binary {label}"), got, Some((points, count)));
        }
        let r = extension_report(self.level3()?, b3, &[0, 21, 63])?;
        let hyps: BTreeMap<String, BTreeSet<String>> = BINARY_HYPERPLANES
            .iter()
            .map(|&(b, _, _, e)| (b.to_string(), e.map(|x| x.to_string()).into_iter().collect()))
            .collect();
        t.eq("hyperplane extensions", &r.hyperplanes, &hyps);
        let pairs: BTreeSet<(String, u32)> = r
            .lines
            .iter()
            .flat_map(|(b, ts)| ts.iter().map(move |x| (x.clone(), b.parse().unwrap_or(0))))
            .collect();
        let want: BTreeSet<(String, u32)> = BINARY_EXTENSIONS.iter().map(|&(x, b)| (x.to_string(), b)).collect();
        t.eq("extendable line types", r.extendable_line_types(), 15);
        t.eq("line extensions", &pairs, &want);
        let only: Vec<(String, Vec<String>)> =
            r.nonprojective_only().into_iter().map(|(b, s)| (b, s.into_iter().collect())).collect();
        t.eq("non-projective extensions", only, vec![("28".to_string(), vec!["44*".to_string()])]);
        t.expect(r.copies_agree(), || "copies disagree".into());
        t.done(format!(
            "15/35 and 255/10795, all projective; {} line types extend, 28 -> 44*; copies agree",
            r.extendable_line_types()
        ))
    }

    fn properties(&self) -> Result<Outcome> {
        let mut t = Tally::default();
        let l2 = self.level2()?;
        let l3 = self.level3()?;

        // Every blow-up from S_2(3) is a hyperplane of S_3(3).
        let v3 = &l3.variety;
        let arrs = arrangements(v3.base());
        let mut outputs = Vec::new();
        for x in &l2.lines {
            let members = l2.member_sets(x);
            for a in &arrs {
                outputs.push(blow_up_ordinary(v3, &members, a)?);
            }
        }
        for h in &l2.hyperplanes {
            for j in 0..v3.base() {
                outputs.push(blow_up_trivial(v3, &h.points, j));
            }
        }
        let bad = outputs.iter().filter(|s| !v3.is_hyperplane(s) || l3.index_of(s).is_none()).count();
        t.eq("k=3 blow-ups failing the axiom", bad, 0);

        // Rank dichotomy and dual round trip on every k=2 and k=3 hyperplane.
        for l in [l2, l3] {
            let v = &l.variety;
            let dim = v.tensor_dim();
            let bad = l
                .hyperplanes
                .par_iter()
                .filter(|h| {
                    let rank = span_rank(v, &h.points);
                    match h.dual {
                        Some(d) => {
                            rank != dim - 1
                                || zero_locus(v, d) != h.points
                                || dual_from_key(dual_key(d)) != d
                                || d.normalized(v.field()) != d
                        }
                        None => rank != dim,
                    }
                })
                .count();
            t.eq(&format!("k={} rank or dual failures", v.k()), bad, 0);
        }

        // Types are constant on generator orbits.
        let (labels, factors) = l3.hyperplane_actions()?;
        for act in labels.iter().chain(&factors) {
            let moved = (0..act.len()).filter(|&h| l3.hyp_class[act[h] as usize] != l3.hyp_class[h]).count();
            let lines_moved = l3
                .lines
                .par_iter()
                .enumerate()
                .filter(|(i, x)| {
                    let mut m: Vec<u32> = x.members().iter().map(|&h| act[h as usize]).collect();
                    m.sort_unstable();
                    l3.line_index(&m).is_none_or(|j| l3.line_class[j as usize] != l3.line_class[*i])
                })
                .count();
            t.expect(moved == 0 && lines_moved == 0, || {
                format!("generator moves {moved} hyperplanes and {lines_moved} lines across types")
            });
        }

        let sampled = self.random_blowups(&mut t)?;

        // Byte-identical stores under different thread counts.
        let one = stores_with_threads(l2, 1)?;
        let four = stores_with_threads(l2, 4)?;
        t.expect(one == four, || "stores differ between 1 and 4 threads".into());

        t.done(format!(
            "{} k=3 blow-ups, {} generators, {sampled} random k=4 blow-ups, determinism over 1/4 threads",
            outputs.len(),
            labels.len() + factors.len()
        ))
    }

    fn random_blowups(&self, t: &mut Tally) -> Result<usize> {
        let l3 = self.level3()?;
        let c = self.census()?;
        let v4 = &c.variety;
        let dim = v4.tensor_dim();
        let base = |s: Source| match s {
            Source::Ordinary { line, .. } => Source::Ordinary { line, arrangement: 0 },
            Source::Trivial { hyperplane, .. } => Source::Trivial { hyperplane, full_layer: 0 },
        };
        let class_of: FxHashMap<Source, usize> = c.sources.iter().map(|r| (base(r.source), r.class)).collect();
        let narr = arrangements(v4.base()).len();
        let mut rng = StdRng::seed_from_u64(0x5e9e);
        let picks: Vec<Source> = (0..RANDOM_SAMPLES)
            .map(|_| match c.sources[rng.random_range(0..c.sources.len())].source {
                Source::Ordinary { line, .. } => Source::Ordinary { line, arrangement: rng.random_range(0..narr) as u8 },
                Source::Trivial { hyperplane, .. } => {
                    Source::Trivial { hyperplane, full_layer: rng.random_range(0..v4.base()) as u8 }
                }
            })
            .collect();
        let field = Field::Gf3;
        let failures: Vec<String> = picks
            .par_iter()
            .filter_map(|&src| {
                let check = || -> Result<bool> {
                    let s = source_points(v4, l3, src)?;
                    if !v4.is_hyperplane(&s) {
                        return Ok(false);
                    }
                    let h = Hyperplane::new(v4, s)?;
                    let dual = source_dual(l3, src)?.normalized(field);
                    let class = class_of[&base(src)];
                    let sig = signature(v4, &s, true, Some(l3 as &dyn LowerClassifier), l3.hyp_classes.len())?;
                    Ok(h.dual == Some(dual)
                        && span_rank(v4, &s) == dim - 1
                        && zero_locus(v4, dual) == s
                        && sig == c.classes[class].signature
                        && c.refined_of_dual(dual).map(|r| c.refined[r].class) == Some(class))
                };
                match check() {
                    Ok(true) => None,
                    Ok(false) => Some(format!("{src:?}")),
                    Err(e) => Some(format!("{src:?}: {e}")),
                }
            })
            .collect();
        t.expect(failures.is_empty(), || {
            format!("{} random k=4 blow-ups fail, first {}", failures.len(), failures[0])
        });
        Ok(picks.len())
    }
}

/// Hyperplane and line stores of S_3(3) built from `lower` in a pool of the
/// given size, serialized.
pub fn stores_with_threads(lower: &Level, threads: usize) -> Result<Vec<u8>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| {
        let l = lower.next()?;
        let mut out = Vec::new();
        let v = &l.variety;
        HyperplaneFile::from_sets(v.q(), v.k() as u8, false, l.hyperplane_sets()).write(&mut out)?;
        let records = l
            .lines
            .iter()
            .map(|x| LineRecord { members: x.members().iter().map(|&m| m as u64).collect(), projective: x.projective })
            .collect();
        LineFile::new(v.q(), v.k() as u8, FLAG_NONPROJECTIVE_MEMBERS, records).write(&mut out)?;
        Ok(out)
    })
}

pub fn run_all(ctx: &Context, ids: &[u32]) -> Vec<Check> {
    ids.iter().map(|&id| ctx.run(id)).collect()
}
