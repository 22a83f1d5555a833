//! Hyperplanes of S_4(3) corresponding to points of the invariant
//! hyperbolic quadric of PG(15,3), and to generators of W(7,3).

use std::collections::BTreeMap;

use crate::blowup::Source;
use crate::census4::{published_sections, source_dual, Census4};
use crate::error::{Error, Result};
use crate::gf::{Field, PackedRow};
use crate::level::Level;
use crate::reference::{QUADRIC_POINTS, SYMPLECTIC_GENERATORS};

/// The split quadratic form pairing each tensor coordinate with its
/// complement, signed by the parity of the index. Its zero set is invariant
/// under the stabilizer group but is not the union of types picked by the
/// core criterion.
pub fn quadratic_form(c: PackedRow, dim: usize) -> u8 {
    let field = Field::Gf3;
    let mask = dim - 1;
    let mut acc = 0u8;
    for i in 0..dim / 2 {
        let term = field.mul(c.get(i), c.get(i ^ mask));
        acc = if i.count_ones() % 2 == 0 { field.add(acc, term) } else { field.sub(acc, term) };
    }
    acc
}

/// Core criterion on a blow-up source: ordinary lines whose core size is
/// 1 mod 3, and all trivial blow-ups.
pub fn core_criterion(lower: &Level, source: Source) -> bool {
    match source {
        Source::Ordinary { line, .. } => lower.lines[line as usize].core.count() % 3 == 1,
        Source::Trivial { .. } => true,
    }
}

#[derive(Debug, Clone)]
pub struct QuadricReport {
    /// Class labels selected by the core criterion, with cardinalities.
    pub types: BTreeMap<String, u64>,
    pub total: u64,
    /// Classes only partly selected by the core criterion.
    pub mixed: Vec<String>,
    pub symplectic: BTreeMap<String, u64>,
    pub symplectic_total: u64,
    /// Zero set of the invariant quadratic form, by refined class.
    pub form_types: BTreeMap<String, u64>,
    pub form_total: u64,
}

pub fn quadric_selection(lower: &Level, census: &Census4) -> Result<QuadricReport> {
    let dim = census.variety.tensor_dim();
    let mut on = vec![0u64; census.classes.len()];
    let mut off = vec![0u64; census.classes.len()];
    let mut form_on = vec![0u64; census.refined.len()];
    for rec in &census.sources {
        let m = rec.multiplicity as u64;
        if core_criterion(lower, rec.source) {
            on[rec.class] += m;
        } else {
            off[rec.class] += m;
        }
        if quadratic_form(source_dual(lower, rec.source)?, dim) == 0 {
            form_on[rec.refined] += m;
        }
    }
    let mut types = BTreeMap::new();
    let mut symplectic = BTreeMap::new();
    let mut mixed = Vec::new();
    for (c, class) in census.classes.iter().enumerate() {
        if on[c] > 0 && off[c] > 0 {
            mixed.push(class.label.clone());
        }
        if on[c] == 0 {
            continue;
        }
        types.insert(class.label.clone(), on[c]);
        let sections = published_sections(lower, &class.signature.sections);
        if sections[3] == 0 && sections[5] == 0 {
            symplectic.insert(class.label.clone(), on[c]);
        }
    }
    let form_types: BTreeMap<String, u64> = census
        .refined
        .iter()
        .zip(&form_on)
        .filter(|(_, &n)| n > 0)
        .map(|(r, &n)| (r.label.clone(), n))
        .collect();
    Ok(QuadricReport {
        total: types.values().sum(),
        types,
        mixed,
        symplectic_total: symplectic.values().sum(),
        symplectic,
        form_total: form_types.values().sum(),
        form_types,
    })
}

impl QuadricReport {
    /// Check the closed-form counts of the quadric and of the symplectic
    /// generators.
    pub fn check_counts(&self) -> Result<()> {
        if self.total != QUADRIC_POINTS {
            return Err(Error::CountMismatch(format!("quadric total {} != {}", self.total, QUADRIC_POINTS)));
        }
        if self.symplectic_total != SYMPLECTIC_GENERATORS {
            return Err(Error::CountMismatch(format!(
                "symplectic total {} != {}",
                self.symplectic_total, SYMPLECTIC_GENERATORS
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_on_small_vectors() {
        let e = |i: usize| {
            let mut r = PackedRow::ZERO;
            r.set(i, 1);
            r
        };
        assert_eq!(quadratic_form(e(0), 16), 0);
        let mut c = e(0);
        c.set(15, 1);
        assert_eq!(quadratic_form(c, 16), 1);
        let mut c = e(1);
        c.set(14, 1);
        assert_eq!(quadratic_form(c, 16), 2);
    }
}
