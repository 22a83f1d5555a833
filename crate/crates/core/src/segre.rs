//! The Segre variety S_k(q) = PG(1,q) × … × PG(1,q) as an explicit point-line
//! incidence structure.
//!
//! Point `i` corresponds to the tuple `(a_1, …, a_k)` with
//! `i = Σ a_j (q+1)^(k-j)`, so the first factor is the most significant
//! digit. A line fixes all coordinates but one. Point labels of PG(1,q) carry
//! fixed vector representatives, see [`representatives`].

use crate::error::{Error, Result};
use crate::gf::{tensor_product, Field, PackedRow, Vec2};
use crate::pointset::{BitCounter, PointSet, MAX_POINTS};

/// Vector representatives of the labels of PG(1,q).
pub fn representatives(field: Field) -> &'static [Vec2] {
    const GF3: [Vec2; 4] = [Vec2([1, 0]), Vec2([0, 1]), Vec2([1, 1]), Vec2([1, 2])];
    const GF2: [Vec2; 3] = [Vec2([1, 0]), Vec2([0, 1]), Vec2([1, 1])];
    match field {
        Field::Gf3 => &GF3,
        Field::Gf2 => &GF2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub direction: usize,
    points: [u16; 4],
    len: usize,
}

impl Line {
    pub fn points(&self) -> &[u16] {
        &self.points[..self.len]
    }
}

#[derive(Debug, Clone)]
pub struct SegreVariety {
    field: Field,
    k: usize,
    base: usize,
    point_count: usize,
    strides: Vec<usize>,
    tuples: Vec<[u8; 4]>,
    lines: Vec<Line>,
    line_masks: Vec<PointSet>,
    lines_through: Vec<Vec<u32>>,
    spreads: Vec<Vec<u32>>,
    layers: Vec<Vec<PointSet>>,
    starts: Vec<PointSet>,
    tensor: Vec<PackedRow>,
    distances: Vec<u8>,
    all: PointSet,
}

impl SegreVariety {
    pub fn build(q: u8, k: u8) -> Result<SegreVariety> {
        let field = Field::from_order(q)?;
        if !(1..=4).contains(&k) {
            return Err(Error::UnsupportedFactorCount(k));
        }
        let k = k as usize;
        let base = q as usize + 1;
        let point_count = base.pow(k as u32);
        debug_assert!(point_count <= MAX_POINTS);
        let strides: Vec<usize> = (0..k).map(|j| base.pow((k - 1 - j) as u32)).collect();

        let tuples: Vec<[u8; 4]> = (0..point_count)
            .map(|i| {
                let mut t = [0u8; 4];
                for j in 0..k {
                    t[j] = ((i / strides[j]) % base) as u8;
                }
                t
            })
            .collect();

        let reps = representatives(field);
        let tensor = tuples
            .iter()
            .map(|t| {
                let vs: Vec<Vec2> = t[..k].iter().map(|&a| reps[a as usize]).collect();
                PackedRow::from_entries(&tensor_product(field, &vs).expect("representatives are nonzero"))
            })
            .collect();

        let mut lines = Vec::new();
        let mut spreads = vec![Vec::new(); k];
        let mut starts = vec![PointSet::EMPTY; k];
        for j in 0..k {
            for (p, tuple) in tuples.iter().enumerate() {
                if tuple[j] != 0 {
                    continue;
                }
                starts[j].insert(p);
                let mut pts = [0u16; 4];
                for (t, slot) in pts.iter_mut().enumerate().take(base) {
                    *slot = (p + t * strides[j]) as u16;
                }
                spreads[j].push(lines.len() as u32);
                lines.push(Line { direction: j, points: pts, len: base });
            }
        }
        let line_masks: Vec<PointSet> = lines
            .iter()
            .map(|l| PointSet::from_points(l.points().iter().map(|&p| p as usize)))
            .collect();
        let mut lines_through = vec![Vec::with_capacity(k); point_count];
        for (li, l) in lines.iter().enumerate() {
            for &p in l.points() {
                lines_through[p as usize].push(li as u32);
            }
        }
        let layers = (0..k)
            .map(|j| {
                (0..base)
                    .map(|a| PointSet::from_points((0..point_count).filter(|&p| tuples[p][j] as usize == a)))
                    .collect()
            })
            .collect();
        let mut distances = vec![0u8; point_count * point_count];
        for p in 0..point_count {
            for r in 0..point_count {
                distances[p * point_count + r] = (0..k).filter(|&j| tuples[p][j] != tuples[r][j]).count() as u8;
            }
        }

        Ok(SegreVariety {
            field,
            k,
            base,
            point_count,
            strides,
            tuples,
            lines,
            line_masks,
            lines_through,
            spreads,
            layers,
            starts,
            tensor,
            distances,
            all: PointSet::full(point_count),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u8 {
        self.field.order()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Points per line, `q + 1`.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Dimension `2^k` of the ambient tensor space.
    pub fn tensor_dim(&self) -> usize {
        1 << self.k
    }

    pub fn all_points(&self) -> PointSet {
        self.all
    }

    pub fn stride(&self, direction: usize) -> usize {
        self.strides[direction]
    }

    pub fn tuple(&self, p: usize) -> &[u8] {
        &self.tuples[p][..self.k]
    }

    pub fn index_of(&self, tuple: &[u8]) -> usize {
        debug_assert_eq!(tuple.len(), self.k);
        tuple.iter().zip(&self.strides).map(|(&a, &s)| a as usize * s).sum()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line_mask(&self, line: usize) -> PointSet {
        self.line_masks[line]
    }

    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.lines_through[p]
    }

    /// Line indices of the distinguished spread in `direction`.
    pub fn spread(&self, direction: usize) -> &[u32] {
        &self.spreads[direction]
    }

    /// Points whose coordinate `direction` equals `value`: a sub-Segre
    /// S_{k-1}(q).
    pub fn layer(&self, direction: usize, value: usize) -> PointSet {
        self.layers[direction][value]
    }

    /// Number of coordinates in which the tuples of `p` and `r` differ, which
    /// is their distance in the collinearity graph.
    #[inline]
    pub fn distance(&self, p: usize, r: usize) -> u8 {
        self.distances[p * self.point_count + r]
    }

    pub fn tensor_coordinates(&self, p: usize) -> Vec<u8> {
        self.tensor[p].to_entries(self.tensor_dim())
    }

    #[inline]
    pub fn tensor_row(&self, p: usize) -> PackedRow {
        self.tensor[p]
    }

    /// Per direction, the starting points (coordinate 0 in that direction) of
    /// the lines fully contained in `s`.
    #[inline]
    pub fn full_line_starts(&self, s: &PointSet) -> [PointSet; 4] {
        let mut out = [PointSet::EMPTY; 4];
        for (j, o) in out.iter_mut().enumerate().take(self.k) {
            let stride = self.strides[j];
            let mut acc = *s & self.starts[j];
            for t in 1..self.base {
                acc &= s.shr(t * stride);
            }
            *o = acc;
        }
        out
    }

    /// Number of lines fully contained in `s`.
    pub fn contained_line_count(&self, s: &PointSet) -> u32 {
        self.full_line_starts(s).iter().map(|f| f.count()).sum()
    }

    /// True iff `s` is a proper subset meeting every line in exactly one or in
    /// all of its points.
    pub fn is_hyperplane(&self, s: &PointSet) -> bool {
        if *s == self.all || !s.is_subset(&self.all) {
            return false;
        }
        for j in 0..self.k {
            let stride = self.strides[j];
            let mut counter = BitCounter::default();
            for t in 0..self.base {
                counter.add(s.shr(t * stride) & self.starts[j]);
            }
            let ok = counter.equal_to(1) | counter.equal_to(self.base as u32);
            if !self.starts[j].is_subset(&ok) {
                return false;
            }
        }
        true
    }

    /// Per-point count of lines through the point that lie fully in `s`.
    pub fn order_counter(&self, s: &PointSet) -> BitCounter {
        let full = self.full_line_starts(s);
        let mut counter = BitCounter::default();
        for (j, &starts) in full.iter().enumerate().take(self.k) {
            let stride = self.strides[j];
            let mut spread = starts;
            for t in 1..self.base {
                spread |= starts.shl(t * stride);
            }
            counter.add(spread);
        }
        counter
    }

    /// The section of `s` by layer `(direction, value)`, re-indexed as a subset
    /// of S_{k-1}(q).
    pub fn section(&self, s: &PointSet, direction: usize, value: usize) -> PointSet {
        let stride = self.strides[direction];
        let blocks = self.point_count / (stride * self.base);
        let mut out = PointSet::EMPTY;
        if stride >= 64 {
            for b in 0..blocks {
                for chunk in (0..stride).step_by(64) {
                    let len = (stride - chunk).min(64);
                    let bits = s.extract(b * self.base * stride + value * stride + chunk, len);
                    out.deposit(b * stride + chunk, len, bits);
                }
            }
        } else {
            for b in 0..blocks {
                let bits = s.extract(b * self.base * stride + value * stride, stride);
                if bits != 0 {
                    out.deposit(b * stride, stride, bits);
                }
            }
        }
        out
    }

    /// Inverse of [`section`](Self::section): place a subset of S_{k-1}(q)
    /// into layer `(direction, value)`.
    pub fn embed(&self, lower: &PointSet, direction: usize, value: usize) -> PointSet {
        let stride = self.strides[direction];
        let blocks = self.point_count / (stride * self.base);
        let mut out = PointSet::EMPTY;
        for b in 0..blocks {
            for chunk in (0..stride).step_by(64) {
                let len = (stride - chunk).min(64);
                let bits = lower.extract(b * stride + chunk, len);
                if bits != 0 {
                    out.deposit(b * self.base * stride + value * stride + chunk, len, bits);
                }
            }
        }
        out
    }

    /// Image of `s` under a point permutation.
    pub fn permute(&self, s: &PointSet, perm: &[u16]) -> PointSet {
        let mut out = PointSet::EMPTY;
        for p in s.iter() {
            out.insert(perm[p] as usize);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn bfs_distances(v: &SegreVariety, from: usize) -> Vec<u8> {
        let mut dist = vec![u8::MAX; v.point_count()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            for &l in v.lines_through(p) {
                for &r in v.lines()[l as usize].points() {
                    let r = r as usize;
                    if dist[r] == u8::MAX {
                        dist[r] = dist[p] + 1;
                        queue.push_back(r);
                    }
                }
            }
        }
        dist
    }

    #[test]
    fn sizes() {
        let v = SegreVariety::build(3, 2).unwrap();
        assert_eq!((v.point_count(), v.lines().len()), (16, 8));
        let v = SegreVariety::build(3, 3).unwrap();
        assert_eq!((v.point_count(), v.lines().len()), (64, 48));
        assert!((0..3).all(|j| v.spread(j).len() == 16));
        let v = SegreVariety::build(2, 2).unwrap();
        assert_eq!((v.point_count(), v.lines().len()), (9, 6));
        let v = SegreVariety::build(3, 4).unwrap();
        assert_eq!((v.point_count(), v.lines().len()), (256, 256));
        assert!(SegreVariety::build(5, 2).is_err());
        assert!(SegreVariety::build(3, 5).is_err());
    }

    #[test]
    fn incidence_counts() {
        for (q, k) in [(3, 2), (3, 3), (3, 4), (2, 3), (2, 4)] {
            let v = SegreVariety::build(q, k).unwrap();
            assert!((0..v.point_count()).all(|p| v.lines_through(p).len() == k as usize));
            assert!(v.lines().iter().all(|l| l.points().len() == q as usize + 1));
            for j in 0..v.k() {
                let mut cover = PointSet::EMPTY;
                for &l in v.spread(j) {
                    assert!(!cover.intersects(&v.line_mask(l as usize)));
                    cover |= v.line_mask(l as usize);
                }
                assert_eq!(cover, v.all_points());
                for a in 0..v.base() {
                    for &l in v.spread(j) {
                        assert_eq!((v.line_mask(l as usize) & v.layer(j, a)).count(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn distance_matches_bfs() {
        for (q, k) in [(3, 2), (3, 3), (2, 3)] {
            let v = SegreVariety::build(q, k).unwrap();
            for p in 0..v.point_count() {
                let d = bfs_distances(&v, p);
                for (r, &dr) in d.iter().enumerate() {
                    assert_eq!(v.distance(p, r), dr);
                }
            }
        }
        let v = SegreVariety::build(3, 3).unwrap();
        assert_eq!(v.distance(v.index_of(&[0, 0, 0]), v.index_of(&[1, 1, 1])), 3);
    }

    #[test]
    fn collinear_pairs_lie_on_one_line() {
        let v = SegreVariety::build(3, 3).unwrap();
        for p in 0..64 {
            for r in 0..64 {
                if p == r {
                    continue;
                }
                let common = v
                    .lines_through(p)
                    .iter()
                    .filter(|l| v.lines_through(r).contains(l))
                    .count();
                assert_eq!(common, usize::from(v.distance(p, r) == 1));
            }
        }
    }

    #[test]
    fn tensor_coordinates_examples() {
        let v = SegreVariety::build(3, 2).unwrap();
        assert_eq!(v.tensor_coordinates(0), vec![1, 0, 0, 0]);
        assert_eq!(v.tensor_coordinates(v.index_of(&[1, 1])), vec![0, 0, 0, 1]);
        assert_eq!(v.tensor_coordinates(v.index_of(&[2, 3])), vec![1, 2, 1, 2]);
    }

    #[test]
    fn lines_map_to_projective_lines() {
        use crate::gf::DenseMatrix;
        for (q, k) in [(3, 3), (2, 3)] {
            let v = SegreVariety::build(q, k).unwrap();
            for l in v.lines() {
                let rows = l.points().iter().map(|&p| v.tensor_row(p as usize)).collect();
                assert_eq!(DenseMatrix::from_packed(v.field(), v.tensor_dim(), rows).rank(), 2);
            }
        }
    }

    #[test]
    fn section_embed_roundtrip() {
        for (q, k) in [(3, 3), (3, 4), (2, 4)] {
            let v = SegreVariety::build(q, k).unwrap();
            let lower = SegreVariety::build(q, k - 1).unwrap();
            let probe = PointSet::from_points((0..v.point_count()).filter(|p| p % 7 == 1 || p % 5 == 0));
            for j in 0..v.k() {
                let mut rebuilt = PointSet::EMPTY;
                for a in 0..v.base() {
                    let sec = v.section(&probe, j, a);
                    assert!(sec.is_subset(&lower.all_points()));
                    // Section point order drops coordinate j.
                    for p in sec.iter() {
                        let mut t = lower.tuple(p).to_vec();
                        t.insert(j, a as u8);
                        assert!(probe.contains(v.index_of(&t)));
                    }
                    rebuilt |= v.embed(&sec, j, a);
                }
                assert_eq!(rebuilt, probe);
            }
        }
    }

    #[test]
    fn full_line_detection_matches_masks() {
        let v = SegreVariety::build(3, 4).unwrap();
        let s = PointSet::from_points((0..256).filter(|p| p % 3 != 0 || p % 64 < 20));
        let brute = (0..v.lines().len()).filter(|&l| v.line_mask(l).is_subset(&s)).count() as u32;
        assert_eq!(v.contained_line_count(&s), brute);
        let counter = v.order_counter(&s);
        for p in s.iter() {
            let order = v.lines_through(p).iter().filter(|&&l| v.line_mask(l as usize).is_subset(&s)).count();
            assert!(counter.equal_to(order as u32).contains(p));
        }
    }
}
