//! Inductive weights: singular hyperplanes have weight 1, and a hyperplane
//! has weight n when n is the least value such that it lies on a Veldkamp
//! line together with a singular hyperplane and a hyperplane of weight n-1.

use std::collections::BTreeMap;

use crate::census4::{source_dual, Census4};
use crate::error::{Error, Result};
use crate::gf::{Field, PackedRow};
use crate::hyperplane::singular_hyperplane;
use crate::level::Level;

/// Weight of every hyperplane of a level, `None` where no chain of lines
/// reaches it.
pub fn level_weights(level: &Level) -> Vec<Option<u32>> {
    let n = level.hyperplanes.len();
    let singular = |h: u32| level.hyp_label(h) == "H1";
    let mut weight: Vec<Option<u32>> = (0..n as u32).map(|h| singular(h).then_some(1)).collect();
    let mut round = 1;
    loop {
        let mut next = Vec::new();
        for l in &level.lines {
            let m = l.members();
            for (i, &h) in m.iter().enumerate() {
                if weight[h as usize].is_some() {
                    continue;
                }
                let others = || m.iter().enumerate().filter(move |&(j, _)| j != i).map(|(_, &o)| o);
                let reaches = others().any(|a| {
                    weight[a as usize] == Some(round) && others().any(|b| b != a && singular(b))
                });
                if reaches {
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        round += 1;
        for h in next {
            weight[h as usize] = Some(round);
        }
    }
    weight
}

/// Weight per hyperplane class, requiring it to be constant on the class.
pub fn class_weights(level: &Level, weights: &[Option<u32>]) -> Result<Vec<Option<u32>>> {
    let mut out: Vec<Option<Option<u32>>> = vec![None; level.hyp_classes.len()];
    for (h, &w) in weights.iter().enumerate() {
        let slot = &mut out[level.hyp_class[h]];
        match slot {
            None => *slot = Some(w),
            Some(prev) if *prev != w => {
                return Err(Error::Classification(format!(
                    "weight not constant on {}",
                    level.hyp_classes[level.hyp_class[h]].label
                )))
            }
            _ => {}
        }
    }
    Ok(out.into_iter().map(Option::flatten).collect())
}

/// Weights of the refined S_4(3) classes, taking one representative per
/// class and following projective lines through singular hyperplanes.
pub fn census_weights(lower: &Level, census: &Census4) -> Result<Vec<Option<u32>>> {
    let field = Field::Gf3;
    let v = &census.variety;
    let singular: Vec<PackedRow> = (0..v.point_count())
        .map(|p| singular_hyperplane(v, p).and_then(|h| h.dual.ok_or(Error::MissingDual(p))))
        .collect::<Result<_>>()?;
    let reps: Vec<PackedRow> = census
        .refined
        .iter()
        .map(|r| source_dual(lower, r.representative))
        .collect::<Result<_>>()?;
    // For each class, the classes of the two further members of every line
    // through the representative and a singular hyperplane.
    let mut neighbours: Vec<Vec<(usize, usize)>> = Vec::with_capacity(reps.len());
    for &h in &reps {
        let mut pairs = Vec::new();
        for &s in &singular {
            if s == h {
                continue;
            }
            let x = census.refined_of_dual(s.add(h, field));
            let y = census.refined_of_dual(s.sub(h, field));
            match (x, y) {
                (Some(x), Some(y)) => pairs.push((x, y)),
                _ => return Err(Error::NotClosed("dual combination outside the census".into())),
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        neighbours.push(pairs);
    }
    let singular_class = census.refined.iter().position(|r| r.label == "1");
    let mut weight: Vec<Option<u32>> = (0..reps.len()).map(|c| (Some(c) == singular_class).then_some(1)).collect();
    let mut round = 1;
    loop {
        let fresh: Vec<usize> = (0..reps.len())
            .filter(|&c| weight[c].is_none())
            .filter(|&c| {
                neighbours[c].iter().any(|&(x, y)| weight[x] == Some(round) || weight[y] == Some(round))
            })
            .collect();
        if fresh.is_empty() {
            break;
        }
        round += 1;
        for c in fresh {
            weight[c] = Some(round);
        }
    }
    Ok(weight)
}

/// Published weight column entries per refined label, e.g. `43a -> 4`.
pub fn weight_summary(census: &Census4, weights: &[Option<u32>]) -> BTreeMap<String, Option<u32>> {
    census.refined.iter().zip(weights).map(|(r, &w)| (r.label.clone(), w)).collect()
}
