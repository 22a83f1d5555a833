use proptest::prelude::*;

use segre_veldkamp::formats::{HyperplaneFile, LineFile, LineRecord, ProvenanceFile};
use segre_veldkamp::blowup::Source;
use segre_veldkamp::pointset::PointSet;

fn arb_set(points: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(0..points, 0..points).prop_map(PointSet::from_points)
}

fn arb_source() -> impl Strategy<Value = Source> {
    prop_oneof![
        (any::<u32>(), 0u8..24).prop_map(|(line, arrangement)| Source::Ordinary { line, arrangement }),
        (any::<u32>(), 0u8..4).prop_map(|(hyperplane, full_layer)| Source::Trivial { hyperplane, full_layer }),
    ]
}

proptest! {
    #[test]
    fn set_store_round_trip(sets in prop::collection::btree_set(arb_set(64), 0..40)) {
        let f = HyperplaneFile::from_sets(3, 3, false, sets.into_iter().collect());
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        prop_assert_eq!(buf.len(), 16 + 8 * f.len());
        let back = HyperplaneFile::read(&mut buf.as_slice()).unwrap();
        let mut again = Vec::new();
        back.write(&mut again).unwrap();
        prop_assert_eq!(back, f);
        prop_assert_eq!(again, buf);
    }

    #[test]
    fn dual_store_round_trip(keys in prop::collection::btree_set(any::<u32>(), 0..40)) {
        let f = HyperplaneFile::from_duals(3, 4, keys.into_iter().collect());
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        prop_assert_eq!(buf.len(), 16 + 4 * f.len());
        prop_assert_eq!(HyperplaneFile::read(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn line_store_round_trip(quads in prop::collection::btree_set(prop::collection::btree_set(0u64..3424, 4), 0..30)) {
        let records: Vec<LineRecord> = quads
            .into_iter()
            .filter(|m| m.len() == 4)
            .map(|m| LineRecord { members: m.into_iter().collect(), projective: true })
            .collect();
        let f = LineFile::new(3, 3, 0, records);
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        prop_assert_eq!(LineFile::read(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn provenance_round_trip(records in prop::collection::vec(arb_source(), 0..50)) {
        let f = ProvenanceFile { q: 3, k: 4, records };
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        prop_assert_eq!(buf.len(), 16 + 10 * f.records.len());
        prop_assert_eq!(ProvenanceFile::read(&mut buf.as_slice()).unwrap(), f);
    }
}

#[test]
fn unsorted_store_is_rejected() {
    let f = HyperplaneFile::from_duals(3, 4, vec![1, 2]);
    let mut buf = Vec::new();
    f.write(&mut buf).unwrap();
    buf.swap(16, 20);
    buf.swap(19, 23);
    assert!(HyperplaneFile::read(&mut buf.as_slice()).is_err());
}
