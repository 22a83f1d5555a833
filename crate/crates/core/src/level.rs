//! One level of the tower S_1(q) ⊂ S_2(q) ⊂ S_3(q): every hyperplane with
//! its type, every ordinary Veldkamp line with its type, and the orbit
//! structure of both.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::blowup::{arrangements, blow_up_ordinary, blow_up_trivial, Source};
use crate::error::{Error, Result};
use crate::hyperplane::{signature, Hyperplane, LowerClassifier, TypeSignature};
use crate::orbits::{generators, hyperplane_action, line_action, orbit_partition, OrbitPartition};
use crate::pointset::PointSet;
use crate::reference::{LineRow, TieRule, S2_LINES, S3_LINES, S3_OVOIDAL_LINES, S3_TIE_RULES};
use crate::segre::SegreVariety;
use crate::veldkamp::{find_lines, line_key, line_signature, LineSignature, VeldkampLine};

/// Images of element indices under one generator.
pub type Permutation = Vec<u32>;

#[derive(Debug, Clone)]
pub struct HyperplaneClass {
    pub label: String,
    pub signature: TypeSignature,
    pub count: u64,
}

impl HyperplaneClass {
    pub fn projective(&self) -> bool {
        self.signature.projective
    }
}

#[derive(Debug, Clone)]
pub struct LineClass {
    pub label: String,
    pub signature: LineSignature,
    pub count: u64,
}

impl LineClass {
    pub fn projective(&self) -> bool {
        self.signature.projective
    }
}

#[derive(Debug)]
pub struct Level {
    pub variety: SegreVariety,
    /// Sorted by point set.
    pub hyperplanes: Vec<Hyperplane>,
    /// How each hyperplane arises from the level below; empty at k = 1.
    pub sources: Vec<Source>,
    index: FxHashMap<PointSet, u32>,
    pub hyp_class: Vec<usize>,
    /// Projective classes by decreasing size, then non-projective ones.
    pub hyp_classes: Vec<HyperplaneClass>,
    /// Sorted by member indices.
    pub lines: Vec<VeldkampLine>,
    line_index: FxHashMap<u64, u32>,
    pub line_class: Vec<usize>,
    pub line_classes: Vec<LineClass>,
}

impl LowerClassifier for Level {
    fn hyperplane_class(&self, s: &PointSet) -> Option<usize> {
        self.index_of(s).map(|i| self.hyp_class[i as usize])
    }

    fn line_class(&self, members: &[PointSet]) -> Option<usize> {
        self.line_of(members).map(|l| self.line_class[l as usize])
    }
}

impl Level {
    /// S_1(q): the hyperplanes are the single points.
    pub fn base(q: u8) -> Result<Level> {
        let v = SegreVariety::build(q, 1)?;
        let hyps = (0..v.point_count())
            .map(|p| Hyperplane::new(&v, PointSet::from_points([p])))
            .collect::<Result<Vec<_>>>()?;
        Level::assemble(v, hyps, Vec::new(), None)
    }

    /// Build every level up to `k` starting from S_1(q).
    pub fn build(q: u8, k: u8) -> Result<Level> {
        let mut level = Level::base(q)?;
        for _ in 1..k {
            level = level.next()?;
        }
        Ok(level)
    }

    /// The level above, with hyperplanes obtained by blowing up every
    /// ordinary line and every hyperplane of this level.
    pub fn next(&self) -> Result<Level> {
        let v = &self.variety;
        let upper = SegreVariety::build(v.q(), v.k() as u8 + 1)?;
        let arrs = arrangements(v.base());
        let ordinary: Vec<(PointSet, Source)> = self
            .lines
            .par_iter()
            .enumerate()
            .map(|(li, l)| {
                let members = self.member_sets(l);
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
        let mut produced = ordinary;
        for (hi, h) in self.hyperplanes.iter().enumerate() {
            for j in 0..v.base() {
                let s = blow_up_trivial(&upper, &h.points, j);
                produced.push((s, Source::Trivial { hyperplane: hi as u32, full_layer: j as u8 }));
            }
        }
        produced.par_sort_unstable_by_key(|(s, _)| *s);
        if produced.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::CountMismatch("two blow-ups produced the same hyperplane".into()));
        }
        let hyps = produced
            .par_iter()
            .map(|(s, _)| Hyperplane::new(&upper, *s))
            .collect::<Result<Vec<_>>>()?;
        let sources = produced.into_iter().map(|(_, src)| src).collect();
        Level::assemble(upper, hyps, sources, Some(self))
    }

    fn assemble(v: SegreVariety, hyperplanes: Vec<Hyperplane>, sources: Vec<Source>, lower: Option<&Level>) -> Result<Level> {
        let index: FxHashMap<PointSet, u32> =
            hyperplanes.iter().enumerate().map(|(i, h)| (h.points, i as u32)).collect();
        let lower_classes = lower.map_or(0, |l| l.hyp_classes.len());
        let sigs = hyperplanes
            .par_iter()
            .map(|h| {
                signature(&v, &h.points, h.is_projective(), lower.map(|l| l as &dyn LowerClassifier), lower_classes)
            })
            .collect::<Result<Vec<_>>>()?;
        let (hyp_class, hyp_classes) = group_hyperplanes(sigs);

        let lines = find_lines(&v, &hyperplanes);
        let line_index: FxHashMap<u64, u32> = lines.iter().enumerate().map(|(i, l)| (l.key(), i as u32)).collect();
        let rules = reference_rules(&v);
        let line_sigs: Vec<LineSignature> = lines
            .par_iter()
            .map(|l| type_signature(line_signature(&v, l, &hyperplanes, &hyp_class, true), &hyp_classes, rules))
            .collect();
        let (mut line_class, mut line_classes) = group_lines(line_sigs);
        label_lines(&v, &hyp_classes, &mut line_classes, rules);
        let mut order: Vec<usize> = (0..line_classes.len()).collect();
        order.sort_by_cached_key(|&c| label_order(&line_classes[c].label));
        let mut rank = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        line_class.iter_mut().for_each(|c| *c = rank[*c]);
        line_classes = order.into_iter().map(|c| line_classes[c].clone()).collect();
        Ok(Level { variety: v, hyperplanes, sources, index, hyp_class, hyp_classes, lines, line_index, line_class, line_classes })
    }

    pub fn index_of(&self, s: &PointSet) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// Index of the ordinary line with the given member point sets.
    pub fn line_of(&self, members: &[PointSet]) -> Option<u32> {
        let mut ids = members.iter().map(|m| self.index_of(m)).collect::<Option<Vec<u32>>>()?;
        ids.sort_unstable();
        self.line_index.get(&line_key(&ids)).copied()
    }

    pub fn line_index(&self, members: &[u32]) -> Option<u32> {
        self.line_index.get(&line_key(members)).copied()
    }

    pub fn member_sets(&self, l: &VeldkampLine) -> Vec<PointSet> {
        l.members().iter().map(|&m| self.hyperplanes[m as usize].points).collect()
    }

    pub fn hyperplane_sets(&self) -> Vec<PointSet> {
        self.hyperplanes.iter().map(|h| h.points).collect()
    }

    pub fn hyp_label(&self, i: u32) -> &str {
        &self.hyp_classes[self.hyp_class[i as usize]].label
    }

    /// Generator actions on the hyperplanes, split into label and factor
    /// permutations.
    pub fn hyperplane_actions(&self) -> Result<(Vec<Permutation>, Vec<Permutation>)> {
        let sets = self.hyperplane_sets();
        let mut labels = Vec::new();
        let mut factors = Vec::new();
        for g in generators(&self.variety) {
            let act = hyperplane_action(&g, &sets, &self.index)?;
            if g.is_label_permutation() {
                labels.push(act);
            } else {
                factors.push(act);
            }
        }
        Ok((labels, factors))
    }

    pub fn hyperplane_orbits(&self) -> Result<OrbitPartition> {
        let (labels, factors) = self.hyperplane_actions()?;
        Ok(orbit_partition(self.hyperplanes.len(), &labels, &factors))
    }

    pub fn line_orbits(&self) -> Result<OrbitPartition> {
        let (labels, factors) = self.hyperplane_actions()?;
        let lift = |acts: &[Vec<u32>]| -> Result<Vec<Vec<u32>>> {
            acts.iter().map(|a| line_action(a, &self.lines, &self.line_index)).collect()
        };
        Ok(orbit_partition(self.lines.len(), &lift(&labels)?, &lift(&factors)?))
    }
}

fn group_hyperplanes(sigs: Vec<TypeSignature>) -> (Vec<usize>, Vec<HyperplaneClass>) {
    let mut groups: BTreeMap<&TypeSignature, u64> = BTreeMap::new();
    for s in &sigs {
        *groups.entry(s).or_insert(0) += 1;
    }
    let mut classes: Vec<(TypeSignature, u64)> = groups.into_iter().map(|(s, n)| (s.clone(), n)).collect();
    classes.sort_by(|(a, _), (b, _)| {
        (!a.projective, std::cmp::Reverse(a.points), std::cmp::Reverse(a.lines), a)
            .cmp(&(!b.projective, std::cmp::Reverse(b.points), std::cmp::Reverse(b.lines), b))
    });
    let mut out: Vec<HyperplaneClass> = Vec::new();
    let mut starred = 0;
    for (sig, count) in classes {
        let label = if sig.projective {
            format!("H{}", out.len() + 1)
        } else {
            let twin = out.iter().find(|c| {
                c.projective()
                    && c.signature.points == sig.points
                    && c.signature.lines == sig.lines
                    && c.signature.orders == sig.orders
                    && c.signature.sections == sig.sections
            });
            starred += 1;
            twin.map_or_else(|| format!("N{starred}"), |c| format!("{}*", c.label))
        };
        out.push(HyperplaneClass { label, signature: sig, count });
    }
    let lookup: FxHashMap<&TypeSignature, usize> = out.iter().enumerate().map(|(i, c)| (&c.signature, i)).collect();
    let class = sigs.iter().map(|s| lookup[s]).collect();
    (class, out)
}

/// Sort key placing `"5"` before `"5*"` before `"6"`.
pub fn label_order(label: &str) -> (u32, String) {
    let digits: String = label.chars().take_while(|c| c.is_ascii_digit()).collect();
    (digits.parse().unwrap_or(u32::MAX), label[digits.len()..].to_string())
}

fn reference_rules(v: &SegreVariety) -> &'static [TieRule] {
    if (v.q(), v.k()) == (3, 3) {
        S3_TIE_RULES
    } else {
        &[]
    }
}

fn reference_lines(v: &SegreVariety) -> Vec<&'static LineRow> {
    match (v.q(), v.k()) {
        (3, 2) => S2_LINES.iter().collect(),
        (3, 3) => S3_LINES.iter().chain(S3_OVOIDAL_LINES).collect(),
        _ => Vec::new(),
    }
}

/// Member counts per hyperplane class.
pub fn composition_counts(composition: &[usize], classes: usize) -> Vec<u32> {
    let mut out = vec![0; classes];
    for &c in composition {
        out[c] += 1;
    }
    out
}

fn class_of(hyp_classes: &[HyperplaneClass], label: &str) -> Option<usize> {
    hyp_classes.iter().position(|c| c.label == label)
}

fn matching_rule<'a>(
    sig: &LineSignature,
    hyp_classes: &[HyperplaneClass],
    rules: &'a [TieRule],
) -> Option<&'a TieRule> {
    let counts = composition_counts(&sig.composition, hyp_classes.len());
    rules.iter().find(|r| {
        r.core_points == sig.core_points && r.core_lines == sig.core_lines && r.composition == counts.as_slice()
    })
}

/// Where a tie rule covers the line, keep only its feature; where none does
/// but rules exist for this level, drop the features altogether.
fn type_signature(mut sig: LineSignature, hyp_classes: &[HyperplaneClass], rules: &[TieRule]) -> LineSignature {
    if rules.is_empty() {
        return sig;
    }
    sig.features = match (matching_rule(&sig, hyp_classes, rules), sig.features.take()) {
        (Some(rule), Some(f)) => class_of(hyp_classes, rule.class).map(|c| f.reduce(rule.feature, c)),
        _ => None,
    };
    sig
}

fn label_lines(v: &SegreVariety, hyp_classes: &[HyperplaneClass], classes: &mut [LineClass], rules: &[TieRule]) {
    let rows = reference_lines(v);
    if rows.is_empty() {
        return;
    }
    let mut labels = Vec::with_capacity(classes.len());
    for c in classes.iter() {
        let sig = &c.signature;
        let counts = composition_counts(&sig.composition, hyp_classes.len());
        let candidates: Vec<&LineRow> = rows
            .iter()
            .copied()
            .filter(|r| {
                r.projective() == sig.projective
                    && r.core_points == sig.core_points
                    && r.core_lines == sig.core_lines
                    && r.composition == counts.as_slice()
            })
            .collect();
        let label = match (candidates.as_slice(), matching_rule(sig, hyp_classes, rules)) {
            ([only], _) => Some(only.label.to_string()),
            (_, Some(rule)) if sig.projective => {
                let mut group: Vec<&LineSignature> = classes
                    .iter()
                    .map(|o| &o.signature)
                    .filter(|o| o.projective && matching_rule(o, hyp_classes, rules).is_some_and(|r| std::ptr::eq(r, rule)))
                    .collect();
                group.sort_by(|a, b| a.features.cmp(&b.features));
                let pos = group.iter().position(|o| *o == sig);
                pos.filter(|_| group.len() == rule.labels.len()).map(|p| rule.labels[p].to_string())
            }
            _ => None,
        };
        labels.push(label);
    }
    for (c, l) in classes.iter_mut().zip(labels) {
        if let Some(l) = l {
            c.label = l;
        } else {
            c.label = format!("?{}", c.label);
        }
    }
}

fn group_lines(sigs: Vec<LineSignature>) -> (Vec<usize>, Vec<LineClass>) {
    let mut groups: BTreeMap<&LineSignature, u64> = BTreeMap::new();
    for s in &sigs {
        *groups.entry(s).or_insert(0) += 1;
    }
    let mut classes: Vec<(LineSignature, u64)> = groups.into_iter().map(|(s, n)| (s.clone(), n)).collect();
    classes.sort_by(|(a, _), (b, _)| {
        (!a.projective, std::cmp::Reverse(a.core_points), std::cmp::Reverse(a.core_lines), &a.composition, a)
            .cmp(&(!b.projective, std::cmp::Reverse(b.core_points), std::cmp::Reverse(b.core_lines), &b.composition, b))
    });
    let out: Vec<LineClass> = classes
        .into_iter()
        .enumerate()
        .map(|(i, (signature, count))| LineClass { label: (i + 1).to_string(), signature, count })
        .collect();
    let lookup: FxHashMap<&LineSignature, usize> = out.iter().enumerate().map(|(i, c)| (&c.signature, i)).collect();
    let class = sigs.iter().map(|s| lookup[s]).collect();
    (class, out)
}
