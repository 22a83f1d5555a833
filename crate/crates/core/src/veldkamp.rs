//! Veldkamp lines over a collection of hyperplanes.

use std::collections::BTreeMap;
use std::ops::{BitAnd, BitOr};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf::{Field, PackedRow};
use crate::hyperplane::{dual_key, Hyperplane};
use crate::pointset::PointSet;
use crate::segre::SegreVariety;

/// An ordinary Veldkamp line: `q + 1` distinct hyperplanes, identified by
/// index into a hyperplane collection, any two of which meet in the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VeldkampLine {
    members: [u32; 4],
    len: u8,
    pub core: PointSet,
    pub projective: bool,
}

impl VeldkampLine {
    pub fn new(members: &[u32], core: PointSet, projective: bool) -> VeldkampLine {
        let mut m = [u32::MAX; 4];
        m[..members.len()].copy_from_slice(members);
        m[..members.len()].sort_unstable();
        VeldkampLine { members: m, len: members.len() as u8, core, projective }
    }

    /// Member indices, ascending.
    pub fn members(&self) -> &[u32] {
        &self.members[..self.len as usize]
    }

    pub fn key(&self) -> u64 {
        line_key(self.members())
    }
}

/// A trivial Veldkamp line: the whole variety plus one hyperplane taken
/// `q` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrivialLine {
    pub hyperplane: u32,
}

pub fn trivial_lines(hyperplane_count: usize) -> Vec<TrivialLine> {
    (0..hyperplane_count as u32).map(|hyperplane| TrivialLine { hyperplane }).collect()
}

/// Packs sorted member indices (each below 2^16) into one word.
#[inline]
pub fn line_key(members: &[u32]) -> u64 {
    members.iter().fold(0u64, |acc, &m| {
        debug_assert!(m < 1 << 16);
        (acc << 16) | m as u64
    })
}

/// True iff the duals span a projective line containing all of them.
pub fn duals_collinear(field: Field, duals: &[PackedRow]) -> bool {
    if duals.len() < 2 {
        return false;
    }
    let (a, b) = (duals[0], duals[1]);
    let mut span = vec![a.normalized(field), b.normalized(field), a.add(b, field).normalized(field)];
    if field == Field::Gf3 {
        span.push(a.sub(b, field).normalized(field));
    }
    span.sort_unstable();
    span.dedup();
    span.len() == field.order() as usize + 1 && duals[2..].iter().all(|d| span.contains(&d.normalized(field)))
}

fn scan_pairs<T>(hs: &[T], base: usize) -> Vec<Vec<u32>>
where
    T: Copy + Eq + Send + Sync + BitAnd<Output = T> + BitOr<Output = T>,
{
    let n = hs.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut cand = Vec::new();
            for j in i + 1..n {
                let core = hs[i] & hs[j];
                let union = hs[i] | hs[j];
                cand.clear();
                cand.extend((j + 1..n).filter(|&c| hs[c] & union == core).map(|c| c as u32));
                if base == 3 {
                    for &c in &cand {
                        out.extend_from_slice(&[i as u32, j as u32, c]);
                    }
                } else {
                    for (x, &a) in cand.iter().enumerate() {
                        for &b in &cand[x + 1..] {
                            if hs[a as usize] & hs[b as usize] == core {
                                out.extend_from_slice(&[i as u32, j as u32, a, b]);
                            }
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// All ordinary Veldkamp lines whose members are drawn from `hyps`.
///
/// Each line `{w < x < y < z}` is produced only from its two smallest members,
/// so the output is free of duplicates and sorted by member indices.
pub fn find_lines(v: &SegreVariety, hyps: &[Hyperplane]) -> Vec<VeldkampLine> {
    let base = v.base();
    let chunks = if v.point_count() <= 64 {
        let words: Vec<u64> = hyps.iter().map(|h| h.points.word()).collect();
        scan_pairs(&words, base)
    } else {
        let sets: Vec<PointSet> = hyps.iter().map(|h| h.points).collect();
        scan_pairs(&sets, base)
    };
    let field = v.field();
    chunks
        .into_iter()
        .flat_map(|flat| {
            flat.chunks(base)
                .map(|m| {
                    let core = hyps[m[0] as usize].points & hyps[m[1] as usize].points;
                    let duals: Option<Vec<PackedRow>> = m.iter().map(|&i| hyps[i as usize].dual).collect();
                    let projective = duals.is_some_and(|d| duals_collinear(field, &d));
                    VeldkampLine::new(m, core, projective)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Projective lines through pairs of projective hyperplanes, found in the dual
/// space: the remaining members are the normalized sum and difference of the
/// two duals.
pub fn projective_lines_fast(v: &SegreVariety, hyps: &[Hyperplane]) -> Result<Vec<VeldkampLine>> {
    let field = v.field();
    let mut duals = Vec::with_capacity(hyps.len());
    for (i, h) in hyps.iter().enumerate() {
        duals.push(h.dual.ok_or(Error::MissingDual(i))?);
    }
    let index: FxHashMap<u32, u32> = duals.iter().enumerate().map(|(i, &d)| (dual_key(d), i as u32)).collect();
    let lookup = |d: PackedRow| -> Result<u32> {
        index
            .get(&dual_key(d.normalized(field)))
            .copied()
            .ok_or_else(|| Error::NotClosed("dual combination outside the collection".into()))
    };
    let n = hyps.len();
    let chunks: Result<Vec<Vec<VeldkampLine>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                let (a, b) = (duals[i], duals[j]);
                let mut others = vec![lookup(a.add(b, field))?];
                if field == Field::Gf3 {
                    others.push(lookup(a.sub(b, field))?);
                }
                if others.iter().all(|&o| o as usize > j) {
                    let mut m = vec![i as u32, j as u32];
                    m.extend(others);
                    out.push(VeldkampLine::new(&m, hyps[i].points & hyps[j].points, true));
                }
            }
            Ok(out)
        })
        .collect();
    let mut lines: Vec<VeldkampLine> = chunks?.into_iter().flatten().collect();
    lines.sort_unstable_by_key(|l| l.key());
    Ok(lines)
}

/// Every hyperplane `h` other than `i`, `j` with `h ∩ h_i = h ∩ h_j = h_i ∩ h_j`.
pub fn line_through(hyps: &[Hyperplane], i: usize, j: usize) -> Vec<u32> {
    let core = hyps[i].points & hyps[j].points;
    let union = hyps[i].points | hyps[j].points;
    (0..hyps.len())
        .filter(|&c| c != i && c != j && hyps[c].points & union == core)
        .map(|c| c as u32)
        .collect()
}

/// Line sizes with their frequencies, and the hyperplane pairs spanning no
/// further member.
pub type ShortLineCensus = (BTreeMap<usize, u64>, Vec<(u32, u32)>);

/// Histogram of the sizes `2 + |line_through(i, j)|` over the pairs `i < j`
/// whose line does not have the generic size `q + 1`, together with those
/// pairs that have no further member at all.
pub fn short_line_census(v: &SegreVariety, hyps: &[Hyperplane]) -> ShortLineCensus {
    let base = v.base();
    let n = hyps.len();
    let per_i: Vec<ShortLineCensus> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut hist = BTreeMap::new();
            let mut pairs = Vec::new();
            for j in i + 1..n {
                let size = 2 + line_through(hyps, i, j).len();
                if size != base {
                    *hist.entry(size).or_insert(0) += 1;
                }
                if size == 2 {
                    pairs.push((i as u32, j as u32));
                }
            }
            (hist, pairs)
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut pairs = Vec::new();
    for (h, p) in per_i {
        for (s, c) in h {
            *hist.entry(s).or_insert(0) += c;
        }
        pairs.extend(p);
    }
    (hist, pairs)
}

/// Finer invariants of a line's core used to separate line types that agree
/// on core size and composition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoreFeatures {
    /// Pairs of lines inside the core that meet.
    pub concurrent_core_lines: u32,
    /// Per member: (class, points of order zero lying in the core).
    pub zero_order_in_core: Vec<(usize, u32)>,
    /// Per member: (class, deep points lying in the core).
    pub deep_in_core: Vec<(usize, u32)>,
    /// (class, class, distance, count) over deep points of distinct members.
    pub deep_distances: Vec<(usize, usize, u8, u32)>,
    /// Per member: (class, pairwise distances of its order-two points in the
    /// core).
    pub order_two_in_core: Vec<(usize, Vec<u8>)>,
}

pub fn core_features(v: &SegreVariety, members: &[&Hyperplane], classes: &[usize], core: &PointSet) -> CoreFeatures {
    let full = v.full_line_starts(core);
    let mut core_lines = Vec::new();
    for (j, starts) in full.iter().enumerate().take(v.k()) {
        for p in starts.iter() {
            let mut mask = PointSet::EMPTY;
            for t in 0..v.base() {
                mask.insert(p + t * v.stride(j));
            }
            core_lines.push(mask);
        }
    }
    let mut concurrent = 0;
    for a in 0..core_lines.len() {
        for b in a + 1..core_lines.len() {
            if core_lines[a].intersects(&core_lines[b]) {
                concurrent += 1;
            }
        }
    }

    let mut zero_order_in_core = Vec::new();
    let mut deep_in_core = Vec::new();
    let mut order_two_in_core = Vec::new();
    for (h, &c) in members.iter().zip(classes) {
        zero_order_in_core.push((c, (h.order_sets[0] & *core).count()));
        deep_in_core.push((c, (h.deep_points & *core).count()));
        let twos: Vec<usize> = (h.order_sets[2] & *core).iter().collect();
        let mut dists = Vec::new();
        for a in 0..twos.len() {
            for b in a + 1..twos.len() {
                dists.push(v.distance(twos[a], twos[b]));
            }
        }
        dists.sort_unstable();
        order_two_in_core.push((c, dists));
    }
    zero_order_in_core.sort_unstable();
    deep_in_core.sort_unstable();
    order_two_in_core.sort_unstable();

    let mut hist: BTreeMap<(usize, usize, u8), u32> = BTreeMap::new();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (ca, cb) = (classes[a].min(classes[b]), classes[a].max(classes[b]));
            for p in members[a].deep_points.iter() {
                for r in members[b].deep_points.iter() {
                    *hist.entry((ca, cb, v.distance(p, r))).or_insert(0) += 1;
                }
            }
        }
    }
    let deep_distances = hist.into_iter().map(|((a, b, d), n)| (a, b, d, n)).collect();

    CoreFeatures { concurrent_core_lines: concurrent, zero_order_in_core, deep_in_core, deep_distances, order_two_in_core }
}

/// A single core feature singled out to separate line types that agree on
/// everything else. Each refers to the members of one hyperplane class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tiebreak {
    /// Whether the core lines meet.
    Concurrency,
    /// Zero-order points lying in the core, per member.
    ZeroOrder,
    /// Whether any zero-order point lies in the core.
    AnyZeroOrder,
    /// Deep points lying in the core, per member.
    DeepInCore,
    /// Distances between deep points of distinct members.
    DeepDistance,
    /// Distances between order-two core points, per member.
    OrderTwoDistance,
}

impl CoreFeatures {
    /// Keep only the part of the record named by `tiebreak`, restricted to
    /// members of hyperplane class `class`.
    pub fn reduce(&self, tiebreak: Tiebreak, class: usize) -> CoreFeatures {
        let mut out = CoreFeatures::default();
        match tiebreak {
            Tiebreak::Concurrency => out.concurrent_core_lines = self.concurrent_core_lines,
            Tiebreak::ZeroOrder => {
                out.zero_order_in_core = self.zero_order_in_core.iter().filter(|x| x.0 == class).copied().collect();
            }
            Tiebreak::AnyZeroOrder => {
                let any = self.zero_order_in_core.iter().any(|x| x.0 == class && x.1 > 0);
                out.zero_order_in_core = vec![(class, any as u32)];
            }
            Tiebreak::DeepInCore => {
                out.deep_in_core = self.deep_in_core.iter().filter(|x| x.0 == class).copied().collect();
            }
            Tiebreak::DeepDistance => {
                out.deep_distances =
                    self.deep_distances.iter().filter(|x| x.0 == class && x.1 == class).copied().collect();
            }
            Tiebreak::OrderTwoDistance => {
                out.order_two_in_core = self.order_two_in_core.iter().filter(|x| x.0 == class).cloned().collect();
            }
        }
        out
    }
}

/// Invariants bucketing ordinary Veldkamp lines into types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineSignature {
    pub projective: bool,
    pub core_points: u32,
    pub core_lines: u32,
    /// Sorted member classes.
    pub composition: Vec<usize>,
    pub features: Option<CoreFeatures>,
}

pub fn line_signature(
    v: &SegreVariety,
    line: &VeldkampLine,
    hyps: &[Hyperplane],
    hyp_class: &[usize],
    with_features: bool,
) -> LineSignature {
    let members: Vec<&Hyperplane> = line.members().iter().map(|&m| &hyps[m as usize]).collect();
    let classes: Vec<usize> = line.members().iter().map(|&m| hyp_class[m as usize]).collect();
    let mut composition = classes.clone();
    composition.sort_unstable();
    LineSignature {
        projective: line.projective,
        core_points: line.core.count(),
        core_lines: v.contained_line_count(&line.core),
        composition,
        features: with_features.then(|| core_features(v, &members, &classes, &line.core)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperplane::is_hyperplane;

    fn s2_hyperplanes() -> (SegreVariety, Vec<Hyperplane>) {
        let v = SegreVariety::build(3, 2).unwrap();
        let hyps = (1u64..(1 << 16) - 1)
            .map(PointSet::from_word)
            .filter(|s| is_hyperplane(&v, s))
            .map(|s| Hyperplane::new(&v, s).unwrap())
            .collect();
        (v, hyps)
    }

    #[test]
    fn s2_line_counts() {
        let (v, hyps) = s2_hyperplanes();
        let lines = find_lines(&v, &hyps);
        assert_eq!(lines.len(), 136);
        assert_eq!(lines.iter().filter(|l| l.projective).count(), 130);
        for l in &lines {
            let m = l.members();
            for a in 0..4 {
                for b in a + 1..4 {
                    assert_eq!(hyps[m[a] as usize].points & hyps[m[b] as usize].points, l.core);
                }
            }
        }
        let fast = projective_lines_fast(&v, &hyps).unwrap();
        let slow: Vec<VeldkampLine> = lines.iter().filter(|l| l.projective).copied().collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn singular_pair_line() {
        let (v, hyps) = s2_hyperplanes();
        let singular: Vec<usize> = (0..hyps.len()).filter(|&i| hyps[i].point_count() == 7).collect();
        assert_eq!(singular.len(), 16);
        let lines = projective_lines_fast(&v, &hyps).unwrap();
        let all_singular: Vec<_> =
            lines.iter().filter(|l| l.members().iter().all(|m| singular.contains(&(*m as usize)))).collect();
        assert_eq!(all_singular.len(), 8);
        assert!(all_singular.iter().all(|l| l.core.count() == 4 && v.contained_line_count(&l.core) == 1));
    }

    #[test]
    fn trivial_line_list() {
        assert_eq!(trivial_lines(40).len(), 40);
        assert!(trivial_lines(0).is_empty());
    }

    #[test]
    fn binary_s2_is_fully_projective() {
        let v = SegreVariety::build(2, 2).unwrap();
        let hyps: Vec<Hyperplane> = (1u64..(1 << 9) - 1)
            .map(PointSet::from_word)
            .filter(|s| is_hyperplane(&v, s))
            .map(|s| Hyperplane::new(&v, s).unwrap())
            .collect();
        assert_eq!(hyps.len(), 15);
        let lines = find_lines(&v, &hyps);
        assert_eq!(lines.len(), 35);
        assert!(lines.iter().all(|l| l.projective));
        assert_eq!(projective_lines_fast(&v, &hyps).unwrap(), lines);
    }

    #[test]
    fn collinearity_of_duals() {
        let f = Field::Gf3;
        let a = PackedRow::from_entries(&[1, 0, 0]);
        let b = PackedRow::from_entries(&[0, 1, 0]);
        let c = PackedRow::from_entries(&[1, 1, 0]);
        let d = PackedRow::from_entries(&[1, 2, 0]);
        let e = PackedRow::from_entries(&[0, 0, 1]);
        assert!(duals_collinear(f, &[a, b, c, d]));
        assert!(duals_collinear(f, &[b, d, a, c]));
        assert!(!duals_collinear(f, &[a, b, c, e]));
    }
}
