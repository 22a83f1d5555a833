//! Orbits of the stabilizer group (S_{q+1} × … × S_{q+1}) ⋊ S_k acting on
//! hyperplanes and Veldkamp lines.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::segre::SegreVariety;
use crate::veldkamp::{line_key, VeldkampLine};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Relabel the points of one factor.
    Labels { factor: usize, images: Vec<u8> },
    /// Move factor `i` to position `images[i]`.
    Factors { images: Vec<usize> },
}

/// A group generator together with the point permutation it induces.
#[derive(Debug, Clone)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub points: Vec<u16>,
}

impl Generator {
    pub fn is_label_permutation(&self) -> bool {
        matches!(self.kind, GeneratorKind::Labels { .. })
    }

    pub fn apply(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for p in s.iter() {
            out.insert(self.points[p] as usize);
        }
        out
    }
}

pub fn group_order(q: u8, k: usize) -> u64 {
    let fact = |n: u64| (1..=n).product::<u64>();
    fact(q as u64 + 1).pow(k as u32) * fact(k as u64)
}

/// A generating set: per factor a transposition and a full cycle of the
/// labels, then a transposition and a full cycle of the factors.
pub fn generators(v: &SegreVariety) -> Vec<Generator> {
    let k = v.k();
    let base = v.base();
    let mut kinds = Vec::new();
    for factor in 0..k {
        let mut swap: Vec<u8> = (0..base as u8).collect();
        swap.swap(0, 1);
        kinds.push(GeneratorKind::Labels { factor, images: swap });
        let cycle: Vec<u8> = (0..base as u8).map(|a| (a + 1) % base as u8).collect();
        kinds.push(GeneratorKind::Labels { factor, images: cycle });
    }
    if k >= 2 {
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        kinds.push(GeneratorKind::Factors { images: swap });
        kinds.push(GeneratorKind::Factors { images: (0..k).map(|i| (i + 1) % k).collect() });
    }
    kinds
        .into_iter()
        .map(|kind| {
            let points = (0..v.point_count())
                .map(|p| {
                    let t = v.tuple(p);
                    let mut image = t.to_vec();
                    match &kind {
                        GeneratorKind::Labels { factor, images } => image[*factor] = images[t[*factor] as usize],
                        GeneratorKind::Factors { images } => {
                            for (i, &a) in t.iter().enumerate() {
                                image[images[i]] = a;
                            }
                        }
                    }
                    v.index_of(&image) as u16
                })
                .collect();
            Generator { kind, points }
        })
        .collect()
}

/// Orbit structure of a finite universe under a set of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbit id per element; ids are numbered by first occurrence.
    pub orbit: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Orbit id per element under the label permutations only.
    pub label_orbit: Vec<u32>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

fn components(uf: &UnionFind<u32>, n: usize) -> (Vec<u32>, Vec<u64>) {
    let mut ids: FxHashMap<u32, u32> = FxHashMap::default();
    let mut orbit = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for e in 0..n as u32 {
        let root = uf.find(e);
        let next = ids.len() as u32;
        let id = *ids.entry(root).or_insert(next);
        if id as usize == sizes.len() {
            sizes.push(0);
        }
        sizes[id as usize] += 1;
        orbit.push(id);
    }
    (orbit, sizes)
}

/// Two-stage orbit computation: first under the label permutations, then
/// merged under the factor permutations. Each generator is given as the
/// permutation it induces on element indices.
pub fn orbit_partition(n: usize, label_actions: &[Vec<u32>], factor_actions: &[Vec<u32>]) -> OrbitPartition {
    let mut uf = UnionFind::<u32>::new(n);
    for act in label_actions {
        for (e, &img) in act.iter().enumerate() {
            uf.union(e as u32, img);
        }
    }
    let (label_orbit, _) = components(&uf, n);
    for act in factor_actions {
        for (e, &img) in act.iter().enumerate() {
            uf.union(e as u32, img);
        }
    }
    let (orbit, sizes) = components(&uf, n);
    OrbitPartition { orbit, sizes, label_orbit }
}

/// Permutation of a hyperplane collection induced by a generator.
pub fn hyperplane_action(g: &Generator, hyps: &[PointSet], index: &FxHashMap<PointSet, u32>) -> Result<Vec<u32>> {
    hyps.par_iter()
        .map(|h| index.get(&g.apply(h)).copied().ok_or_else(|| Error::NotClosed("hyperplane image".into())))
        .collect()
}

/// Permutation of a line collection induced by a hyperplane permutation.
pub fn line_action(hyp_action: &[u32], lines: &[VeldkampLine], index: &FxHashMap<u64, u32>) -> Result<Vec<u32>> {
    lines
        .par_iter()
        .map(|l| {
            let mut image = [0u32; 4];
            let m = l.members();
            for (slot, &h) in image.iter_mut().zip(m) {
                *slot = hyp_action[h as usize];
            }
            image[..m.len()].sort_unstable();
            index.get(&line_key(&image[..m.len()])).copied().ok_or_else(|| Error::NotClosed("line image".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::brute_force;

    #[test]
    fn group_orders() {
        assert_eq!(group_order(3, 2), 1152);
        assert_eq!(group_order(3, 3), 82944);
        assert_eq!(group_order(2, 3), 1296);
    }

    #[test]
    fn generators_preserve_lines() {
        for (q, k) in [(3, 2), (3, 3), (2, 3)] {
            let v = SegreVariety::build(q, k).unwrap();
            let gens = generators(&v);
            assert_eq!(gens.len(), 2 * k as usize + 2);
            let lines: Vec<PointSet> = (0..v.lines().len()).map(|l| v.line_mask(l)).collect();
            for g in &gens {
                let mut seen = g.points.clone();
                seen.sort_unstable();
                assert!(seen.iter().enumerate().all(|(i, &p)| i == p as usize));
                for l in &lines {
                    assert!(lines.contains(&g.apply(l)));
                }
            }
        }
    }

    #[test]
    fn s2_hyperplane_orbits() {
        let v = SegreVariety::build(3, 2).unwrap();
        let hyps = brute_force(&v).unwrap();
        let index: FxHashMap<PointSet, u32> = hyps.iter().enumerate().map(|(i, h)| (*h, i as u32)).collect();
        let gens = generators(&v);
        let (labels, factors): (Vec<_>, Vec<_>) = gens.iter().partition(|g| g.is_label_permutation());
        let la: Vec<Vec<u32>> = labels.iter().map(|g| hyperplane_action(g, &hyps, &index).unwrap()).collect();
        let fa: Vec<Vec<u32>> = factors.iter().map(|g| hyperplane_action(g, &hyps, &index).unwrap()).collect();
        let part = orbit_partition(hyps.len(), &la, &fa);
        let mut sizes = part.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![16, 24]);
        assert!(part.sizes.iter().all(|s| group_order(3, 2).is_multiple_of(*s)));
    }
}
