//! Geometric hyperplanes: validation, order profiles, projectivity and the
//! invariants used to sort them into types.

use crate::error::{Error, Result};
use crate::gf::{PackedRow, RowReducer};
use crate::pointset::PointSet;
use crate::segre::SegreVariety;

pub fn is_hyperplane(v: &SegreVariety, s: &PointSet) -> bool {
    v.is_hyperplane(s)
}

/// All points not at maximal distance from `nucleus`.
pub fn singular_points(v: &SegreVariety, nucleus: usize) -> PointSet {
    let k = v.k() as u8;
    PointSet::from_points((0..v.point_count()).filter(|&p| v.distance(p, nucleus) < k))
}

pub fn singular_hyperplane(v: &SegreVariety, nucleus: usize) -> Result<Hyperplane> {
    Hyperplane::new(v, singular_points(v, nucleus))
}

/// Rank test on the tensor images of the points of `s`.
///
/// Returns the normalized dual form when the images span a hyperplane of the
/// ambient projective space, `None` when they span everything.
pub fn projectivity(v: &SegreVariety, s: &PointSet) -> Result<Option<PackedRow>> {
    let dim = v.tensor_dim();
    let mut rr = RowReducer::new(v.field());
    for p in s.iter() {
        rr.insert(v.tensor_row(p));
        if rr.rank() == dim {
            return Ok(None);
        }
    }
    if rr.rank() + 1 < dim {
        return Err(Error::SpansTooLittle { rank: rr.rank(), dim });
    }
    rr.kernel_vector(dim).map(Some)
}

/// Points of the variety on which the linear form `dual` vanishes.
pub fn zero_locus(v: &SegreVariety, dual: PackedRow) -> PointSet {
    let f = v.field();
    PointSet::from_points((0..v.point_count()).filter(|&p| v.tensor_row(p).dot(dual, f) == 0))
}

/// Points of `s` split by order `0..=k`.
pub fn order_sets(v: &SegreVariety, s: &PointSet) -> [PointSet; 5] {
    let counter = v.order_counter(s);
    let mut sets = [PointSet::EMPTY; 5];
    for (o, set) in sets.iter_mut().enumerate().take(v.k() + 1) {
        *set = counter.equal_to(o as u32) & *s;
    }
    sets
}

/// Order histogram of `s` together with its deep points.
pub fn order_profile(v: &SegreVariety, s: &PointSet) -> ([u32; 5], PointSet) {
    let sets = order_sets(v, s);
    (sets.map(|x| x.count()), sets[v.k()])
}

/// Points of `s` of order exactly `order`.
pub fn points_of_order(v: &SegreVariety, s: &PointSet, order: u32) -> PointSet {
    v.order_counter(s).equal_to(order) & *s
}

/// Four-byte canonical key of a normalized GF(3) dual vector of length at most
/// 16. Coordinate `j` sits in byte `j / 4` at bit offset `2 (j mod 4)`; the
/// bytes are read big-endian so that numeric order equals byte order.
#[inline]
pub fn dual_key(dual: PackedRow) -> u32 {
    debug_assert!(dual.support() >> 16 == 0);
    let mut key = 0u32;
    for j in 0..16 {
        let c = dual.get(j) as u32;
        key |= c << (2 * (j % 4) + 8 * (3 - j / 4));
    }
    key
}

pub fn dual_from_key(key: u32) -> PackedRow {
    let mut row = PackedRow::ZERO;
    for j in 0..16 {
        row.set(j, ((key >> (2 * (j % 4) + 8 * (3 - j / 4))) & 3) as u8);
    }
    row
}

/// Serialized key bytes for a dual vector of length `dim`.
pub fn dual_key_bytes(dual: PackedRow, dim: usize) -> Vec<u8> {
    let nbytes = (2 * dim).div_ceil(8);
    dual_key(dual).to_be_bytes()[..nbytes].to_vec()
}

/// A validated geometric hyperplane with cached metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub points: PointSet,
    pub dual: Option<PackedRow>,
    pub orders: [u32; 5],
    /// Points of each order.
    pub order_sets: [PointSet; 5],
    pub deep_points: PointSet,
}

impl Hyperplane {
    pub fn new(v: &SegreVariety, points: PointSet) -> Result<Hyperplane> {
        if !v.is_hyperplane(&points) {
            return Err(Error::NotAHyperplane(format!("{points:?}")));
        }
        let dual = projectivity(v, &points)?;
        Ok(Hyperplane::with_dual(v, points, dual))
    }

    /// Build without validation, trusting a known dual.
    pub fn with_dual(v: &SegreVariety, points: PointSet, dual: Option<PackedRow>) -> Hyperplane {
        let order_sets = order_sets(v, &points);
        Hyperplane {
            points,
            dual,
            orders: order_sets.map(|x| x.count()),
            order_sets,
            deep_points: order_sets[v.k()],
        }
    }

    pub fn is_projective(&self) -> bool {
        self.dual.is_some()
    }

    pub fn point_count(&self) -> u32 {
        self.points.count()
    }
}

/// One direction of the projection of a hyperplane onto the sub-Segres of a
/// spread direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VlEntry {
    /// One layer is fully contained, the others carry a hyperplane of this
    /// class.
    Trivial(usize),
    /// The layers form an ordinary Veldkamp line of this class.
    Ordinary(usize),
}

/// Classification of objects of one dimension lower, used for section
/// censuses and spread projections.
pub trait LowerClassifier {
    fn hyperplane_class(&self, s: &PointSet) -> Option<usize>;
    fn line_class(&self, members: &[PointSet]) -> Option<usize>;
}

/// Invariants bucketing hyperplanes into types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSignature {
    pub points: u32,
    pub lines: u32,
    pub orders: [u32; 5],
    /// Index 0: fully contained layers; index `c + 1`: layers whose section
    /// is of lower class `c`.
    pub sections: Vec<u32>,
    /// Sorted multiset of spread projections.
    pub vl: Vec<VlEntry>,
    pub projective: bool,
}

/// Sections of `s` in direction `j`.
pub fn layer_sections(v: &SegreVariety, s: &PointSet, direction: usize) -> Vec<PointSet> {
    (0..v.base()).map(|a| v.section(s, direction, a)).collect()
}

/// Classify the projection of `s` along spread `direction`, given its layer
/// sections.
pub fn projection_entry(
    lower_all: PointSet,
    sections: &[PointSet],
    lower: &dyn LowerClassifier,
) -> Result<VlEntry> {
    let full: Vec<usize> = (0..sections.len()).filter(|&a| sections[a] == lower_all).collect();
    match full.as_slice() {
        [] => {
            let core = sections.iter().fold(lower_all, |acc, s| acc & *s);
            for i in 0..sections.len() {
                for j in i + 1..sections.len() {
                    if sections[i] & sections[j] != core {
                        return Err(Error::NotAHyperplane("layer sections do not form a Veldkamp line".into()));
                    }
                }
            }
            lower
                .line_class(sections)
                .map(VlEntry::Ordinary)
                .ok_or_else(|| Error::Classification("unknown lower Veldkamp line".into()))
        }
        [f] => {
            let others: Vec<&PointSet> = (0..sections.len()).filter(|a| a != f).map(|a| &sections[a]).collect();
            if others.iter().any(|s| *s != others[0]) {
                return Err(Error::NotAHyperplane("sections beside a full layer differ".into()));
            }
            lower
                .hyperplane_class(others[0])
                .map(VlEntry::Trivial)
                .ok_or_else(|| Error::Classification("unknown lower hyperplane".into()))
        }
        _ => Err(Error::NotAHyperplane("two full layers in one direction".into())),
    }
}

/// Compute the type signature of a hyperplane. Without a lower classifier the
/// section census only separates full layers from proper sections and the
/// spread projections are omitted.
pub fn signature(
    v: &SegreVariety,
    s: &PointSet,
    projective: bool,
    lower: Option<&dyn LowerClassifier>,
    lower_classes: usize,
) -> Result<TypeSignature> {
    let (orders, _) = order_profile(v, s);
    let lower_all = PointSet::full(v.point_count() / v.base());
    let mut sections = vec![0u32; if lower.is_some() { lower_classes + 1 } else { 2 }];
    let mut vl = Vec::new();
    for j in 0..v.k() {
        let secs = layer_sections(v, s, j);
        for sec in &secs {
            if *sec == lower_all {
                sections[0] += 1;
            } else if let Some(l) = lower {
                let c = l
                    .hyperplane_class(sec)
                    .ok_or_else(|| Error::NotAHyperplane("section is not a lower hyperplane".into()))?;
                sections[c + 1] += 1;
            } else {
                sections[1] += 1;
            }
        }
        if let Some(l) = lower {
            vl.push(projection_entry(lower_all, &secs, l)?);
        }
    }
    vl.sort_unstable();
    Ok(TypeSignature {
        points: s.count(),
        lines: v.contained_line_count(s),
        orders,
        sections,
        vl,
        projective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DenseMatrix;

    fn s2() -> SegreVariety {
        SegreVariety::build(3, 2).unwrap()
    }

    #[test]
    fn hyperplane_axiom_examples() {
        let v = s2();
        let two_lines = v.line_mask(v.spread(0)[0] as usize) | v.line_mask(v.spread(1)[0] as usize);
        assert_eq!(two_lines.count(), 7);
        assert!(is_hyperplane(&v, &two_lines));
        assert!(!is_hyperplane(&v, &v.line_mask(0)));
        assert!(!is_hyperplane(&v, &v.all_points()));
        assert!(!is_hyperplane(&v, &PointSet::EMPTY));
    }

    #[test]
    fn singular_hyperplane_examples() {
        let v = s2();
        let h = singular_hyperplane(&v, 0).unwrap();
        assert_eq!((h.point_count(), v.contained_line_count(&h.points)), (7, 2));
        let v = SegreVariety::build(3, 3).unwrap();
        let h = singular_hyperplane(&v, 5).unwrap();
        assert_eq!((h.point_count(), v.contained_line_count(&h.points)), (37, 21));
        assert_eq!(h.orders, [0, 0, 27, 10, 0]);
        assert!(h.is_projective());
        assert_eq!(zero_locus(&v, h.dual.unwrap()), h.points);
        let v = SegreVariety::build(3, 4).unwrap();
        let h = singular_hyperplane(&v, 200).unwrap();
        assert_eq!((h.point_count(), v.contained_line_count(&h.points)), (175, 148));
        assert_eq!(h.orders[4], 67);
        assert_eq!(h.deep_points.count(), 67);
        assert_eq!(zero_locus(&v, h.dual.unwrap()), h.points);
    }

    #[test]
    fn singular_rank_and_kernel_in_s2() {
        let v = s2();
        let h = singular_points(&v, 0);
        let rows: Vec<PackedRow> = h.iter().map(|p| v.tensor_row(p)).collect();
        let m = DenseMatrix::from_packed(v.field(), 4, rows);
        assert_eq!(m.rank(), 3);
        let dual = m.kernel_vector().unwrap();
        assert_eq!(zero_locus(&v, dual), h);
    }

    #[test]
    fn all_s2_hyperplanes_are_projective() {
        let v = s2();
        let mut count = 0;
        for bits in 1u64..(1 << 16) - 1 {
            let s = PointSet::from_word(bits);
            if is_hyperplane(&v, &s) {
                count += 1;
                let dual = projectivity(&v, &s).unwrap().expect("projective");
                assert_eq!(zero_locus(&v, dual), s);
            }
        }
        assert_eq!(count, 40);
    }

    #[test]
    fn dual_key_roundtrip_and_order() {
        let mut row = PackedRow::ZERO;
        row.set(0, 1);
        row.set(5, 2);
        row.set(15, 1);
        assert_eq!(dual_from_key(dual_key(row)), row);
        assert_eq!(dual_key_bytes(row, 16).len(), 4);
        assert_eq!(dual_key_bytes(row, 8).len(), 2);
        let mut a = PackedRow::ZERO;
        a.set(0, 1);
        let mut b = PackedRow::ZERO;
        b.set(0, 2);
        assert!(dual_key(a) < dual_key(b));
        assert_eq!(dual_key(a).to_be_bytes()[0], 1);
    }

    #[test]
    fn ovoids_meet_every_line_once() {
        let v = s2();
        for bits in 1u64..(1 << 16) - 1 {
            let s = PointSet::from_word(bits);
            if s.count() == 4 && is_hyperplane(&v, &s) {
                let (orders, _) = order_profile(&v, &s);
                assert_eq!(orders[0], 4);
                for l in 0..v.lines().len() {
                    assert_eq!((v.line_mask(l) & s).count(), 1);
                }
            }
        }
    }
}
