//! The 64 copies of S_3(2) inside S_3(3) and the extension of binary
//! hyperplanes and Veldkamp lines to ternary ones.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::level::Level;
use crate::pointset::PointSet;

/// A copy of S_k(2) given by the omitted label in each factor.
#[derive(Debug, Clone)]
pub struct BinaryCopy {
    pub omitted: Vec<u8>,
    /// Ternary point index of each binary point.
    pub points: Vec<u16>,
    pub mask: PointSet,
}

impl BinaryCopy {
    pub fn restrict(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for (b, &t) in self.points.iter().enumerate() {
            if s.contains(t as usize) {
                out.insert(b);
            }
        }
        out
    }
}

pub fn binary_copies(ternary: &Level, binary: &Level) -> Result<Vec<BinaryCopy>> {
    let tv = &ternary.variety;
    let bv = &binary.variety;
    if tv.q() != 3 || bv.q() != 2 || tv.k() != bv.k() {
        return Err(Error::Shape("expected S_k(3) and S_k(2) with equal k".into()));
    }
    let k = tv.k();
    let copies = (0..4usize.pow(k as u32))
        .map(|c| {
            let omitted: Vec<u8> = (0..k).map(|j| (c / 4usize.pow((k - 1 - j) as u32) % 4) as u8).collect();
            let points: Vec<u16> = (0..bv.point_count())
                .map(|b| {
                    let tuple: Vec<u8> = bv
                        .tuple(b)
                        .iter()
                        .zip(&omitted)
                        .map(|(&a, &o)| if a >= o { a + 1 } else { a })
                        .collect();
                    tv.index_of(&tuple) as u16
                })
                .collect();
            let mask = PointSet::from_points(points.iter().map(|&p| p as usize));
            BinaryCopy { omitted, points, mask }
        })
        .collect();
    Ok(copies)
}

/// Restriction of a ternary hyperplane to a copy. A ternary line extends a
/// binary line when three members restrict to the binary members and the
/// fourth restricts to their common core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    Full,
    Hyperplane(u32),
    /// Neither the whole copy nor one of its hyperplanes.
    Other,
}

fn restriction(binary: &Level, r: PointSet) -> Restriction {
    if r == binary.variety.all_points() {
        Restriction::Full
    } else {
        binary.index_of(&r).map_or(Restriction::Other, Restriction::Hyperplane)
    }
}

/// Binary label -> labels of the ternary types extending it.
pub type ExtensionMap = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, Default)]
pub struct ExtensionReport {
    pub copies: usize,
    /// Restrictions that are neither full nor a binary hyperplane, summed
    /// over the examined copies.
    pub non_hereditary: u64,
    pub restrictions: u64,
    /// Binary hyperplane label -> ternary hyperplane labels extending it.
    pub hyperplanes: ExtensionMap,
    /// Binary line label -> ternary line labels extending it.
    pub lines: ExtensionMap,
    /// Same censuses per examined copy, for comparing copies.
    pub per_copy: Vec<(ExtensionMap, ExtensionMap)>,
}

impl ExtensionReport {
    pub fn extendable_line_types(&self) -> usize {
        self.lines.values().filter(|s| !s.is_empty()).count()
    }

    /// Binary line types all of whose extensions are non-projective.
    pub fn nonprojective_only(&self) -> Vec<(String, BTreeSet<String>)> {
        self.lines
            .iter()
            .filter(|(_, s)| !s.is_empty() && s.iter().all(|t| t.ends_with('*')))
            .map(|(b, s)| (b.clone(), s.clone()))
            .collect()
    }

    pub fn copies_agree(&self) -> bool {
        self.per_copy.windows(2).all(|w| w[0] == w[1])
    }
}

/// Extension census over the copies with the given indices.
pub fn extension_report(ternary: &Level, binary: &Level, copy_ids: &[usize]) -> Result<ExtensionReport> {
    let copies = binary_copies(ternary, binary)?;
    let mut report = ExtensionReport { copies: copy_ids.len(), ..Default::default() };
    for c in &binary.hyp_classes {
        report.hyperplanes.entry(c.label.clone()).or_default();
    }
    for c in &binary.line_classes {
        report.lines.entry(c.label.clone()).or_default();
    }
    for &id in copy_ids {
        let copy = copies.get(id).ok_or_else(|| Error::Shape(format!("no copy {id}")))?;
        let sets: Vec<PointSet> = ternary.hyperplanes.par_iter().map(|h| copy.restrict(&h.points)).collect();
        let restr: Vec<Restriction> = sets.iter().map(|&r| restriction(binary, r)).collect();
        let mut hyps = ExtensionMap::new();
        for (t, r) in restr.iter().enumerate() {
            report.restrictions += 1;
            match r {
                Restriction::Other => report.non_hereditary += 1,
                Restriction::Full => {}
                Restriction::Hyperplane(b) => {
                    hyps.entry(binary.hyp_label(*b).to_string())
                        .or_default()
                        .insert(ternary.hyp_label(t as u32).to_string());
                }
            }
        }
        let found: Vec<(usize, usize)> = ternary
            .lines
            .par_iter()
            .enumerate()
            .filter_map(|(li, l)| {
                let m = l.members();
                (0..m.len()).find_map(|skip| {
                    let mut members = Vec::with_capacity(m.len() - 1);
                    for (i, &h) in m.iter().enumerate() {
                        if i != skip {
                            match restr[h as usize] {
                                Restriction::Hyperplane(b) => members.push(b),
                                _ => return None,
                            }
                        }
                    }
                    let core = members.iter().fold(binary.variety.all_points(), |acc, &b| {
                        acc & binary.hyperplanes[b as usize].points
                    });
                    if sets[m[skip] as usize] != core {
                        return None;
                    }
                    members.sort_unstable();
                    let bl = binary.line_index(&members)?;
                    Some((binary.line_class[bl as usize], ternary.line_class[li]))
                })
            })
            .collect();
        let mut lines = ExtensionMap::new();
        for (b, t) in found {
            lines
                .entry(binary.line_classes[b].label.clone())
                .or_default()
                .insert(ternary.line_classes[t].label.clone());
        }
        for (b, s) in &hyps {
            report.hyperplanes.entry(b.clone()).or_default().extend(s.iter().cloned());
        }
        for (b, s) in &lines {
            report.lines.entry(b.clone()).or_default().extend(s.iter().cloned());
        }
        report.per_copy.push((hyps, lines));
    }
    Ok(report)
}
