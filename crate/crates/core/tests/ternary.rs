use std::collections::BTreeSet;
use std::sync::OnceLock;

use segre_veldkamp::binary::{binary_copies, extension_report};
use segre_veldkamp::blowup::{arrangements, blow_up_ordinary, blow_up_trivial, Source};
use segre_veldkamp::census4::vl_labels;
use segre_veldkamp::graphs::{collinearity_graph, is_isomorphic, reference, SimpleGraph};
use segre_veldkamp::hyperplane::{projectivity, signature, singular_hyperplane, zero_locus, LowerClassifier};
use segre_veldkamp::level::Level;
use segre_veldkamp::pointset::PointSet;
use segre_veldkamp::quadric::core_criterion;
use segre_veldkamp::segre::SegreVariety;
use segre_veldkamp::veldkamp::trivial_lines;
use segre_veldkamp::weights::{class_weights, level_weights};

fn s2() -> &'static Level {
    static L: OnceLock<Level> = OnceLock::new();
    L.get_or_init(|| Level::build(3, 2).unwrap())
}

fn s3() -> &'static Level {
    static L: OnceLock<Level> = OnceLock::new();
    L.get_or_init(|| s2().next().unwrap())
}

fn class_index(l: &Level, label: &str) -> usize {
    l.hyp_classes.iter().position(|c| c.label == label).unwrap()
}

fn line_class_index(l: &Level, label: &str) -> usize {
    l.line_classes.iter().position(|c| c.label == label).unwrap()
}

fn first_line_of(l: &Level, label: &str) -> usize {
    let c = line_class_index(l, label);
    l.line_class.iter().position(|&x| x == c).unwrap()
}

fn first_hyperplane_of(l: &Level, label: &str) -> usize {
    let c = class_index(l, label);
    l.hyp_class.iter().position(|&x| x == c).unwrap()
}

#[test]
fn hyperplane_counts_per_type() {
    let l = s3();
    let counts: Vec<(&str, u64)> = l.hyp_classes.iter().map(|c| (c.label.as_str(), c.count)).collect();
    assert_eq!(counts, [("H1", 64), ("H2", 288), ("H3", 1728), ("H4", 768), ("H5", 432), ("H5*", 144)]);
    let projective = l.hyperplanes.iter().filter(|h| h.is_projective()).count();
    assert_eq!(projective, 3280);
}

#[test]
fn singular_and_ovoid_signatures() {
    let l = s3();
    let lower = s2();
    let h1 = &l.hyp_classes[class_index(l, "H1")].signature;
    assert_eq!((h1.points, h1.lines, &h1.orders[..4], h1.sections.as_slice()), (37, 21, &[0, 0, 27, 10][..], &[3, 9, 0][..]));
    assert_eq!(vl_labels(lower, &h1.vl), ["I"]);
    let h5 = &l.hyp_classes[class_index(l, "H5")].signature;
    assert_eq!((h5.points, h5.lines, &h5.orders[..4], h5.sections.as_slice()), (16, 0, &[16, 0, 0, 0][..], &[0, 0, 12][..]));
    assert_eq!(vl_labels(lower, &h5.vl), ["4"]);
}

#[test]
fn projectivity_of_ovoids_and_singular_hyperplanes() {
    let l = s3();
    let v = &l.variety;
    let star = &l.hyperplanes[first_hyperplane_of(l, "H5*")];
    assert_eq!(projectivity(v, &star.points).unwrap(), None);
    let h = singular_hyperplane(v, 0).unwrap();
    let dual = h.dual.expect("singular hyperplanes are projective");
    assert_eq!(zero_locus(v, dual), h.points);
    assert_eq!(h.points.count(), 37);
}

#[test]
fn line_type_cardinalities() {
    let l = s3();
    let count = |label: &str| l.line_classes[line_class_index(l, label)].count;
    assert_eq!(count("1"), 48);
    assert_eq!(count("40"), 69_120);
    let first = &l.line_classes[line_class_index(l, "1")].signature;
    assert_eq!((first.core_points, first.core_lines), (28, 15));
    let proj = l.lines.iter().filter(|x| x.projective).count();
    assert_eq!(proj, 896_260);
}

#[test]
fn tie_breakers_separate_line_types() {
    let l = s3();
    let features = |label: &str| l.line_classes[line_class_index(l, label)].signature.features.clone().unwrap();
    assert!(features("16").concurrent_core_lines > features("17").concurrent_core_lines);
    let deep = |label: &str| features(label).deep_in_core.iter().map(|x| x.1).sum::<u32>();
    assert!(deep("39") > 0);
    assert_eq!(deep("40"), 0);
}

#[test]
fn trivial_line_census() {
    let l = s3();
    let trivial = trivial_lines(l.hyperplanes.len());
    assert_eq!(trivial.len(), 3424);
    let starred = trivial.iter().filter(|t| !l.hyperplanes[t.hyperplane as usize].is_projective()).count();
    assert_eq!(starred, 144);
    assert!(trivial_lines(0).is_empty());
    let lower = s2();
    let types: BTreeSet<bool> = trivial_lines(lower.hyperplanes.len())
        .iter()
        .map(|t| lower.hyp_label(t.hyperplane) == "H1")
        .collect();
    assert_eq!(types.len(), 2);
}

#[test]
fn hyperplane_orbits_match_types() {
    let l = s3();
    let orbits = l.hyperplane_orbits().unwrap();
    let mut sizes = orbits.sizes.clone();
    sizes.sort_unstable();
    assert_eq!(sizes, [64, 144, 288, 432, 768, 1728]);
}

#[test]
fn weights_at_k3() {
    let l = s3();
    let w = class_weights(l, &level_weights(l)).unwrap();
    assert_eq!(w, [Some(1), Some(2), Some(2), Some(3), Some(3), None]);
}

#[test]
fn blow_ups_into_s4() {
    let l = s3();
    let v4 = SegreVariety::build(3, 4).unwrap();
    let id = &arrangements(4)[0];

    let ovoid = blow_up_ordinary(&v4, &l.member_sets(&l.lines[first_line_of(l, "62")]), id).unwrap();
    assert!(v4.is_hyperplane(&ovoid));
    assert_eq!((ovoid.count(), v4.contained_line_count(&ovoid)), (64, 0));

    let s = blow_up_ordinary(&v4, &l.member_sets(&l.lines[first_line_of(l, "6")]), id).unwrap();
    let sig = signature(&v4, &s, true, Some(l as &dyn LowerClassifier), l.hyp_classes.len()).unwrap();
    assert_eq!((sig.points, sig.lines), (112, 64));
    assert_eq!(sig.sections[1 + class_index(l, "H2")], 16);

    let star = &l.hyperplanes[first_hyperplane_of(l, "H5*")];
    let t = blow_up_trivial(&v4, &star.points, 0);
    assert!(v4.is_hyperplane(&t));
    assert_eq!(t.count(), 112);
    assert_eq!(projectivity(&v4, &t).unwrap(), None);
}

#[test]
fn core_criterion_examples() {
    let l = s3();
    let line = |label: &str| Source::Ordinary { line: first_line_of(l, label) as u32, arrangement: 0 };
    assert!(core_criterion(l, line("1")));
    assert!(!core_criterion(l, line("62")));
    assert!(core_criterion(l, Source::Trivial { hyperplane: 0, full_layer: 0 }));
}

#[test]
fn ovoid_collinearity_graphs() {
    let l = s3();
    let v = &l.variety;
    let ovoids: Vec<PointSet> = l
        .hyperplanes
        .iter()
        .filter(|h| h.is_projective() && v.contained_line_count(&h.points) == 0)
        .map(|h| h.points)
        .collect();
    let g = collinearity_graph(v, &ovoids[0]);
    assert_eq!((g.order(), g.edge_count()), (16, 0));
    let other = ovoids.iter().find(|o| !o.intersects(&ovoids[0])).unwrap();
    let union = collinearity_graph(v, &(ovoids[0] | *other));
    assert_eq!(union.order(), 32);
    assert!(union.degree_sequence().iter().all(|&d| d == 3));
    let line = v.line_mask(0);
    let k4 = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert!(is_isomorphic(&collinearity_graph(v, &line), &k4));
    assert!(reference("petersen").is_err());
}

#[test]
fn binary_copies_and_extensions() {
    let t = s3();
    let b = Level::build(2, 3).unwrap();
    let copies = binary_copies(t, &b).unwrap();
    assert_eq!(copies.len(), 64);
    assert!(copies.iter().all(|c| c.mask.count() == 27));
    let differ_in_one = copies
        .iter()
        .find(|c| c.omitted.iter().zip(&copies[0].omitted).filter(|(a, b)| a != b).count() == 1)
        .unwrap();
    assert_eq!((copies[0].mask & differ_in_one.mask).count(), 18);
    let copy_lines = (0..t.variety.lines().len())
        .filter(|&i| (t.variety.line_mask(i) & copies[0].mask).count() == 3)
        .count();
    assert_eq!(copy_lines, 27);

    let r = extension_report(t, &b, &[0]).unwrap();
    let ext = |h: &str| r.hyperplanes[h].iter().cloned().collect::<Vec<_>>();
    assert_eq!(ext("H1"), ["H1"]);
    assert_eq!(ext("H5"), ["H4"]);
    assert!(ext("H4").is_empty());
    assert!(r.lines["1"].contains("1"));
    assert_eq!(r.lines["28"].iter().cloned().collect::<Vec<_>>(), ["44*"]);
}
