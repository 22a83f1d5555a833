//! Hyperplanes of S_4(3) by blowing up the projective Veldkamp lines and
//! projective hyperplanes of S_3(3), plus the non-projective hyperplanes
//! coming from non-projective lines with projective members.
//!
//! All blow-ups of one source line (or one source hyperplane) lie in one
//! orbit, so types are computed once per source and weighted by the number of
//! arrangements.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::blowup::{arrangements, blow_up_ordinary, blow_up_trivial, ordinary_dual, trivial_dual, Source};
use crate::error::{Error, Result};
use crate::gf::{Field, PackedRow};
use crate::hyperplane::{dual_key, layer_sections, signature, LowerClassifier, TypeSignature, VlEntry};
use crate::level::{label_order, Level};
use crate::orbits::OrbitPartition;
use crate::pointset::PointSet;
use crate::reference::{roman, HyperplaneRow, S4_HYPERPLANES, S4_NONPROJECTIVE};
use crate::segre::SegreVariety;

const UNSET: u8 = u8::MAX;

/// Position of a vector of length 16 in base-3 order.
#[inline]
pub fn ternary_index(row: PackedRow) -> u32 {
    let mut idx = 0u32;
    for j in (0..16).rev() {
        idx = idx * 3 + row.get(j) as u32;
    }
    idx
}

pub fn from_ternary_index(mut idx: u32) -> PackedRow {
    let mut row = PackedRow::ZERO;
    for j in 0..16 {
        row.set(j, (idx % 3) as u8);
        idx /= 3;
    }
    row
}

/// Projection of a hyperplane along one spread direction, refined by orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirectionOrbit {
    /// Hyperplane class of the repeated section.
    Trivial(usize),
    /// Orbit of the ordinary line formed by the sections.
    Ordinary(u32),
}

#[derive(Debug, Clone)]
pub struct Class4 {
    pub label: String,
    pub signature: TypeSignature,
    /// Distinct projection labels, as in the published tables.
    pub vl_labels: Vec<String>,
    pub count: u64,
}

#[derive(Debug, Clone)]
pub struct RefinedClass {
    pub label: String,
    pub class: usize,
    pub directions: Vec<DirectionOrbit>,
    pub count: u64,
    /// A source producing members of this class.
    pub representative: Source,
}

/// One blow-up source with its classification.
#[derive(Debug, Clone, Copy)]
pub struct SourceRecord {
    pub source: Source,
    pub class: usize,
    pub refined: usize,
    pub multiplicity: u32,
}

#[derive(Debug)]
pub struct Census4 {
    pub variety: SegreVariety,
    pub classes: Vec<Class4>,
    pub refined: Vec<RefinedClass>,
    pub sources: Vec<SourceRecord>,
    pub nonprojective: Vec<Class4>,
    pub nonprojective_sources: Vec<(Source, usize)>,
    /// Refined class per projective point of PG(15,3), by ternary index.
    point_class: Vec<u8>,
    pub distinct: u64,
    pub collisions: u64,
}

/// Spread projection labels in the published form: roman numerals for
/// trivial lines, line type labels otherwise.
pub fn vl_labels(lower: &Level, vl: &[VlEntry]) -> Vec<String> {
    let mut out: Vec<String> = vl
        .iter()
        .map(|e| match *e {
            VlEntry::Trivial(c) => {
                let label = &lower.hyp_classes[c].label;
                let n: usize = label.trim_start_matches('H').trim_end_matches('*').parse().unwrap_or(0);
                format!("{}{}", roman(n), if label.ends_with('*') { "*" } else { "" })
            }
            VlEntry::Ordinary(c) => lower.line_classes[c].label.clone(),
        })
        .collect();
    out.sort_by_key(|l| (l.chars().next().is_some_and(|c| c.is_ascii_digit()), label_order(l)));
    out.dedup();
    out
}

/// Section census in the published layout: fully contained layers, then
/// projective classes, with both kinds of ovoid merged in the last column.
pub fn published_sections(lower: &Level, sections: &[u32]) -> Vec<u32> {
    let mut out = vec![sections[0]];
    let mut starred = 0;
    for (c, &n) in sections.iter().skip(1).enumerate() {
        if lower.hyp_classes[c].projective() {
            out.push(n);
        } else {
            starred += n;
        }
    }
    if let Some(last) = out.last_mut() {
        *last += starred;
    }
    out
}

/// Rows for non-projective types list only the projections through lines
/// with projective members, so there the listed labels need only be present.
fn matching_row<'a>(rows: &'a [HyperplaneRow], lower: &Level, class: &Class4) -> Option<&'a HyperplaneRow> {
    let sig = &class.signature;
    let sections = published_sections(lower, &sig.sections);
    rows.iter().find(|r| {
        r.points == sig.points
            && r.lines == sig.lines
            && r.orders == &sig.orders[..5]
            && r.sections == sections.as_slice()
            && (!sig.projective || r.vl.len() == class.vl_labels.len())
            && r.vl.iter().all(|l| class.vl_labels.iter().any(|m| m == l))
    })
}

fn direction_orbits(
    upper: &SegreVariety,
    lower: &Level,
    line_orbits: &OrbitPartition,
    s: &PointSet,
) -> Result<Vec<DirectionOrbit>> {
    let lower_all = PointSet::full(upper.point_count() / upper.base());
    let mut out = Vec::with_capacity(upper.k());
    for j in 0..upper.k() {
        let secs = layer_sections(upper, s, j);
        let full: Vec<usize> = (0..secs.len()).filter(|&a| secs[a] == lower_all).collect();
        let entry = match full.as_slice() {
            [] => {
                let l = lower.line_of(&secs).ok_or_else(|| Error::Classification("unknown projection".into()))?;
                DirectionOrbit::Ordinary(line_orbits.orbit[l as usize])
            }
            [f] => {
                let other = secs[(f + 1) % secs.len()];
                let h = lower.index_of(&other).ok_or_else(|| Error::Classification("unknown section".into()))?;
                DirectionOrbit::Trivial(lower.hyp_class[h as usize])
            }
            _ => return Err(Error::NotAHyperplane("two full layers".into())),
        };
        out.push(entry);
    }
    out.sort_unstable();
    Ok(out)
}

/// Representative point set of a source: identity arrangement, or full
/// first layer.
pub fn source_points(upper: &SegreVariety, lower: &Level, source: Source) -> Result<PointSet> {
    match source {
        Source::Ordinary { line, arrangement } => {
            let members = lower.member_sets(&lower.lines[line as usize]);
            let arr = &arrangements(upper.base())[arrangement as usize];
            blow_up_ordinary(upper, &members, arr)
        }
        Source::Trivial { hyperplane, full_layer } => {
            Ok(blow_up_trivial(upper, &lower.hyperplanes[hyperplane as usize].points, full_layer as usize))
        }
    }
}

/// Dual of the blow-up of a projective source.
pub fn source_dual(lower: &Level, source: Source) -> Result<PackedRow> {
    let dim = lower.variety.tensor_dim();
    match source {
        Source::Ordinary { line, arrangement } => {
            let l = &lower.lines[line as usize];
            let arr = &arrangements(lower.variety.base())[arrangement as usize];
            let duals = arr
                .iter()
                .map(|&m| lower.hyperplanes[l.members()[m] as usize].dual.ok_or(Error::MissingDual(m)))
                .collect::<Result<Vec<_>>>()?;
            ordinary_dual(Field::Gf3, &duals, dim)
        }
        Source::Trivial { hyperplane, full_layer } => {
            let d = lower.hyperplanes[hyperplane as usize].dual.ok_or(Error::MissingDual(hyperplane as usize))?;
            Ok(trivial_dual(Field::Gf3, d, full_layer as usize, dim))
        }
    }
}

struct Typed {
    signature: TypeSignature,
    directions: Vec<DirectionOrbit>,
}

fn type_source(upper: &SegreVariety, lower: &Level, orbits: &OrbitPartition, src: Source, projective: bool) -> Result<Typed> {
    let s = source_points(upper, lower, src)?;
    let signature = signature(upper, &s, projective, Some(lower as &dyn LowerClassifier), lower.hyp_classes.len())?;
    let directions = direction_orbits(upper, lower, orbits, &s)?;
    Ok(Typed { signature, directions })
}

impl Census4 {
    /// Classify every hyperplane of S_4(3) obtained from `lower` = S_3(3).
    pub fn build(lower: &Level, line_orbits: &OrbitPartition) -> Result<Census4> {
        if (lower.variety.q(), lower.variety.k()) != (3, 3) {
            return Err(Error::UnsupportedFactorCount(lower.variety.k() as u8));
        }
        let upper = SegreVariety::build(3, 4)?;
        let narr = arrangements(4).len() as u32;
        let all_projective = |l: &crate::veldkamp::VeldkampLine| {
            l.members().iter().all(|&m| lower.hyperplanes[m as usize].is_projective())
        };

        let mut proj_sources = Vec::new();
        let mut np_sources = Vec::new();
        for (i, l) in lower.lines.iter().enumerate() {
            let src = Source::Ordinary { line: i as u32, arrangement: 0 };
            if l.projective {
                proj_sources.push(src);
            } else if all_projective(l) {
                np_sources.push(src);
            }
        }
        for (i, h) in lower.hyperplanes.iter().enumerate() {
            let src = Source::Trivial { hyperplane: i as u32, full_layer: 0 };
            if h.is_projective() {
                proj_sources.push(src);
            } else {
                np_sources.push(src);
            }
        }
        let multiplicity = |s: &Source| match s {
            Source::Ordinary { .. } => narr,
            Source::Trivial { .. } => upper.base() as u32,
        };

        let typed = proj_sources
            .par_iter()
            .map(|&s| type_source(&upper, lower, line_orbits, s, true))
            .collect::<Result<Vec<_>>>()?;
        let (classes, class_of) = group_classes(lower, &typed, &proj_sources, &multiplicity, S4_HYPERPLANES);
        let mut refined_map: BTreeMap<(usize, Vec<DirectionOrbit>), (u64, Source)> = BTreeMap::new();
        for ((t, &c), s) in typed.iter().zip(&class_of).zip(&proj_sources) {
            let e = refined_map.entry((c, t.directions.clone())).or_insert((0, *s));
            e.0 += multiplicity(s) as u64;
        }
        let refined = label_refined(&classes, refined_map);
        let refined_index: FxHashMap<(usize, &[DirectionOrbit]), usize> =
            refined.iter().enumerate().map(|(i, r)| ((r.class, r.directions.as_slice()), i)).collect();
        let sources: Vec<SourceRecord> = typed
            .iter()
            .zip(&class_of)
            .zip(&proj_sources)
            .map(|((t, &c), &s)| SourceRecord {
                source: s,
                class: c,
                refined: refined_index[&(c, t.directions.as_slice())],
                multiplicity: multiplicity(&s),
            })
            .collect();

        let np_typed = np_sources
            .par_iter()
            .map(|&s| type_source(&upper, lower, line_orbits, s, false))
            .collect::<Result<Vec<_>>>()?;
        let (nonprojective, np_class) = group_classes(lower, &np_typed, &np_sources, &multiplicity, S4_NONPROJECTIVE);
        let nonprojective_sources = np_sources.into_iter().zip(np_class).collect();

        let (point_class, distinct, collisions) = fill_points(lower, &sources)?;
        Ok(Census4 {
            variety: upper,
            classes,
            refined,
            sources,
            nonprojective,
            nonprojective_sources,
            point_class,
            distinct,
            collisions,
        })
    }

    pub fn projective_total(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// Refined class of the hyperplane with the given dual, if produced.
    pub fn refined_of_dual(&self, dual: PackedRow) -> Option<usize> {
        match self.point_class[ternary_index(dual.normalized(Field::Gf3)) as usize] {
            UNSET => None,
            c => Some(c as usize),
        }
    }

    /// All produced duals as canonical four-byte keys, sorted.
    pub fn sorted_keys(&self) -> Vec<u32> {
        let mut keys: Vec<u32> = self
            .point_class
            .par_iter()
            .enumerate()
            .filter(|(_, &c)| c != UNSET)
            .map(|(i, _)| dual_key(from_ternary_index(i as u32)))
            .collect();
        keys.par_sort_unstable();
        keys
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

fn group_classes(
    lower: &Level,
    typed: &[Typed],
    sources: &[Source],
    multiplicity: &dyn Fn(&Source) -> u32,
    rows: &[HyperplaneRow],
) -> (Vec<Class4>, Vec<usize>) {
    let mut groups: BTreeMap<&TypeSignature, u64> = BTreeMap::new();
    for (t, s) in typed.iter().zip(sources) {
        *groups.entry(&t.signature).or_insert(0) += multiplicity(s) as u64;
    }
    let mut classes: Vec<Class4> = groups
        .into_iter()
        .map(|(sig, count)| Class4 {
            label: String::new(),
            vl_labels: vl_labels(lower, &sig.vl),
            signature: sig.clone(),
            count,
        })
        .collect();
    let mut unknown = 0;
    for c in classes.iter_mut() {
        c.label = match matching_row(rows, lower, c) {
            Some(r) => r.label.to_string(),
            None => {
                unknown += 1;
                format!("?{unknown}")
            }
        };
    }
    classes.sort_by_cached_key(|c| label_order(&c.label));
    let index: FxHashMap<&TypeSignature, usize> = classes.iter().enumerate().map(|(i, c)| (&c.signature, i)).collect();
    let class_of = typed.iter().map(|t| index[&t.signature]).collect();
    (classes, class_of)
}

fn label_refined(classes: &[Class4], map: BTreeMap<(usize, Vec<DirectionOrbit>), (u64, Source)>) -> Vec<RefinedClass> {
    let mut per_class: BTreeMap<usize, Vec<(Vec<DirectionOrbit>, u64, Source)>> = BTreeMap::new();
    for ((c, dirs), (n, src)) in map {
        per_class.entry(c).or_default().push((dirs, n, src));
    }
    let mut out = Vec::new();
    for (c, mut subs) in per_class {
        subs.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let split = subs.len() > 1;
        for (i, (dirs, n, src)) in subs.into_iter().enumerate() {
            let suffix = if split { ((b'a' + i as u8) as char).to_string() } else { String::new() };
            out.push(RefinedClass {
                label: format!("{}{}", classes[c].label, suffix),
                class: c,
                directions: dirs,
                count: n,
                representative: src,
            });
        }
    }
    out
}

/// Mark every produced dual in a table over PG(15,3), counting distinct
/// points and points produced more than once.
fn fill_points(lower: &Level, sources: &[SourceRecord]) -> Result<(Vec<u8>, u64, u64)> {
    let size = 3usize.pow(16);
    let table: Vec<AtomicU8> = (0..size).map(|_| AtomicU8::new(UNSET)).collect();
    let narr = arrangements(4).len() as u8;
    let (distinct, collisions) = sources
        .par_iter()
        .map(|rec| -> Result<(u64, u64)> {
            let variants: Vec<Source> = match rec.source {
                Source::Ordinary { line, .. } => {
                    (0..narr).map(|arrangement| Source::Ordinary { line, arrangement }).collect()
                }
                Source::Trivial { hyperplane, .. } => {
                    (0..4).map(|full_layer| Source::Trivial { hyperplane, full_layer }).collect()
                }
            };
            let mut fresh = 0;
            let mut dup = 0;
            for src in variants {
                let d = source_dual(lower, src)?;
                let prev = table[ternary_index(d) as usize].swap(rec.refined as u8, Ordering::Relaxed);
                if prev == UNSET {
                    fresh += 1;
                } else {
                    dup += 1;
                }
            }
            Ok((fresh, dup))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let table = table.into_iter().map(AtomicU8::into_inner).collect();
    Ok((table, distinct, collisions))
}
