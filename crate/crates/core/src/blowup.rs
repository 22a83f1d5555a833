//! Hyperplanes of X × PG(1,q) from Veldkamp lines and hyperplanes of X.
//!
//! The new factor is always the first coordinate (direction 0). An ordinary
//! line with members `m_0..m_q` and arrangement `π` gives the hyperplane whose
//! layer `a` is `m_{π(a)}`; a hyperplane `h` with full layer `j` gives the
//! hyperplane with layer `j` full and every other layer equal to `h`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gf::{Field, PackedRow};
use crate::pointset::PointSet;
use crate::segre::{representatives, SegreVariety};

/// How a hyperplane was obtained from the level below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Ordinary { line: u32, arrangement: u8 },
    Trivial { hyperplane: u32, full_layer: u8 },
}

/// All arrangements of `n` labels, in lexicographic order.
pub fn arrangements(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

pub fn blow_up_ordinary(upper: &SegreVariety, members: &[PointSet], arrangement: &[usize]) -> Result<PointSet> {
    if members.len() != upper.base() || arrangement.len() != upper.base() {
        return Err(Error::Shape(format!("expected {} members", upper.base())));
    }
    let core = members[0] & members[1];
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if members[a] & members[b] != core {
                return Err(Error::InconsistentLine(format!("members {a} and {b} meet outside the core")));
            }
        }
    }
    let mut out = PointSet::EMPTY;
    for (layer, &m) in arrangement.iter().enumerate() {
        out |= upper.embed(&members[m], 0, layer);
    }
    Ok(out)
}

pub fn blow_up_trivial(upper: &SegreVariety, h: &PointSet, full_layer: usize) -> PointSet {
    let lower_all = PointSet::full(upper.point_count() / upper.base());
    let mut out = PointSet::EMPTY;
    for layer in 0..upper.base() {
        out |= upper.embed(if layer == full_layer { &lower_all } else { h }, 0, layer);
    }
    out
}

/// Dual of the blow-up of a projective line. `duals[a]` is the dual of the
/// member placed in layer `a`; `lower_dim` is the tensor dimension below.
pub fn ordinary_dual(field: Field, duals: &[PackedRow], lower_dim: usize) -> Result<PackedRow> {
    let reps = representatives(field);
    let a = duals[0];
    for lambda in 1..field.order() {
        let b = duals[1].scale(lambda, field);
        let fits = reps.iter().zip(duals).all(|(x, d)| {
            let form = a.scale(x.0[0], field).add(b.scale(x.0[1], field), field);
            form.normalized(field) == d.normalized(field)
        });
        if fits {
            return Ok(a.or(b.shifted(lower_dim as u32)).normalized(field));
        }
    }
    Err(Error::InconsistentLine("member duals are not collinear".into()))
}

/// Dual of the trivial blow-up of a projective hyperplane with dual `dual`.
pub fn trivial_dual(field: Field, dual: PackedRow, full_layer: usize, lower_dim: usize) -> PackedRow {
    let x = representatives(field)[full_layer];
    let a = dual.scale(field.neg(x.0[1]), field);
    let b = dual.scale(x.0[0], field);
    a.or(b.shifted(lower_dim as u32)).normalized(field)
}

/// All hyperplanes of a variety with at most 16 points, by exhaustive search.
pub fn brute_force(v: &SegreVariety) -> Result<Vec<PointSet>> {
    if v.point_count() > 27 {
        return Err(Error::Shape("exhaustive search limited to 27 points".into()));
    }
    Ok((1u64..(1u64 << v.point_count()) - 1)
        .map(PointSet::from_word)
        .filter(|s| v.is_hyperplane(s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperplane::{zero_locus, Hyperplane};
    use crate::veldkamp::find_lines;

    #[test]
    fn s2_from_s1_matches_brute_force() {
        let v1 = SegreVariety::build(3, 1).unwrap();
        let v2 = SegreVariety::build(3, 2).unwrap();
        let points: Vec<PointSet> = (0..4).map(|p| PointSet::from_points([p])).collect();
        let mut out = Vec::new();
        for perm in arrangements(4) {
            out.push(blow_up_ordinary(&v2, &points, &perm).unwrap());
        }
        for h in &points {
            for j in 0..4 {
                out.push(blow_up_trivial(&v2, h, j));
            }
        }
        out.sort();
        let before = out.len();
        out.dedup();
        assert_eq!(before, out.len());
        assert_eq!(out, {
            let mut b = brute_force(&v2).unwrap();
            b.sort();
            b
        });
        assert!(brute_force(&v1).unwrap().len() == 4);
    }

    #[test]
    fn closed_form_duals_match_rank_route() {
        let v2 = SegreVariety::build(3, 2).unwrap();
        let v3 = SegreVariety::build(3, 3).unwrap();
        let hyps: Vec<Hyperplane> =
            brute_force(&v2).unwrap().into_iter().map(|s| Hyperplane::new(&v2, s).unwrap()).collect();
        let lines = find_lines(&v2, &hyps);
        for l in lines.iter().filter(|l| l.projective).take(40) {
            let members: Vec<PointSet> = l.members().iter().map(|&m| hyps[m as usize].points).collect();
            for perm in arrangements(4).iter().step_by(5) {
                let h = blow_up_ordinary(&v3, &members, perm).unwrap();
                let duals: Vec<PackedRow> = perm.iter().map(|&m| hyps[l.members()[m] as usize].dual.unwrap()).collect();
                let d = ordinary_dual(Field::Gf3, &duals, 4).unwrap();
                assert_eq!(zero_locus(&v3, d), h);
                assert_eq!(Hyperplane::new(&v3, h).unwrap().dual, Some(d));
            }
        }
        for h in hyps.iter().step_by(3) {
            for j in 0..4 {
                let s = blow_up_trivial(&v3, &h.points, j);
                let d = trivial_dual(Field::Gf3, h.dual.unwrap(), j, 4);
                assert_eq!(zero_locus(&v3, d), s);
            }
        }
    }

    #[test]
    fn examples_from_s2_lines() {
        let v2 = SegreVariety::build(3, 2).unwrap();
        let v3 = SegreVariety::build(3, 3).unwrap();
        let hyps: Vec<Hyperplane> =
            brute_force(&v2).unwrap().into_iter().map(|s| Hyperplane::new(&v2, s).unwrap()).collect();
        let lines = find_lines(&v2, &hyps);
        let singular_line = lines.iter().find(|l| l.core.count() == 4).unwrap();
        let members: Vec<PointSet> = singular_line.members().iter().map(|&m| hyps[m as usize].points).collect();
        let h = blow_up_ordinary(&v3, &members, &[0, 1, 2, 3]).unwrap();
        assert_eq!((h.count(), v3.contained_line_count(&h)), (28, 12));
        let starred = lines.iter().find(|l| !l.projective).unwrap();
        let members: Vec<PointSet> = starred.members().iter().map(|&m| hyps[m as usize].points).collect();
        let h = Hyperplane::new(&v3, blow_up_ordinary(&v3, &members, &[0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(h.point_count(), 16);
        assert!(!h.is_projective());
        let ovoid = hyps.iter().find(|h| h.point_count() == 4).unwrap();
        assert_eq!(blow_up_trivial(&v3, &ovoid.points, 2).count(), 28);
        let singular = hyps.iter().find(|h| h.point_count() == 7).unwrap();
        assert_eq!(blow_up_trivial(&v3, &singular.points, 1).count(), 37);
        let bad = [hyps[0].points, hyps[1].points, hyps[2].points, hyps[3].points];
        if !(bad[0] & bad[1] == bad[0] & bad[2] && bad[0] & bad[1] == bad[2] & bad[3]) {
            assert!(blow_up_ordinary(&v3, &bad, &[0, 1, 2, 3]).is_err());
        }
    }
}
