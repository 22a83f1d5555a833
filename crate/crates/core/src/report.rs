//! Tab-separated reports with a header row.
//!
//! Column orders:
//! - hyperplane types: `type points lines orders sections vl count projective`
//! - line types: `type core_points core_lines composition count projective`
//! - orbits: `orbit type size present`
//! - S_4(3) types: `type points lines orders sections vl count classes weight`
//! - quadric: `type count symplectic`
//! - weights: `type weight`
//! - graphs: `quantity value`
//! - binary extensions: `kind binary ternary`
//!
//! List-valued cells are comma separated.

use std::io::Write;

use crate::binary::ExtensionReport;
use crate::census4::{published_sections, vl_labels, Census4, Class4};
use crate::error::{Error, Result};
use crate::graphs::GraphSweep;
use crate::level::{composition_counts, Level};
use crate::quadric::QuadricReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Table {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_tsv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::WriterBuilder::new().delimiter(b'\t').quote_style(csv::QuoteStyle::Never).from_writer(w);
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        out.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            out.write_record(r).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// One row per hyperplane type of `level`, with `counts[c]` hyperplanes of
/// type `c` in the input.
pub fn hyperplane_table(level: &Level, lower: Option<&Level>, counts: &[u64]) -> Table {
    let mut t = Table::new(&["type", "points", "lines", "orders", "sections", "vl", "count", "projective"]);
    let k = level.variety.k();
    for (c, class) in level.hyp_classes.iter().enumerate() {
        let s = &class.signature;
        let vl = lower.map_or_else(String::new, |l| join(vl_labels(l, &s.vl)));
        t.push(vec![
            class.label.clone(),
            s.points.to_string(),
            s.lines.to_string(),
            join(&s.orders[..=k]),
            join(&s.sections),
            vl,
            counts[c].to_string(),
            s.projective.to_string(),
        ]);
    }
    t
}

pub fn line_table(level: &Level, counts: &[u64]) -> Table {
    let mut t = Table::new(&["type", "core_points", "core_lines", "composition", "count", "projective"]);
    for (c, class) in level.line_classes.iter().enumerate() {
        let s = &class.signature;
        t.push(vec![
            class.label.clone(),
            s.core_points.to_string(),
            s.core_lines.to_string(),
            join(composition_counts(&s.composition, level.hyp_classes.len())),
            counts[c].to_string(),
            s.projective.to_string(),
        ]);
    }
    t
}

/// Rows `(orbit, type, size, present)` where `present` counts the orbit's
/// elements found in the input.
pub fn orbit_table(rows: &[(u32, String, u64, u64)]) -> Table {
    let mut t = Table::new(&["orbit", "type", "size", "present"]);
    for (o, label, size, present) in rows {
        t.push(vec![o.to_string(), label.clone(), size.to_string(), present.to_string()]);
    }
    t
}

fn class4_row(lower: &Level, class: &Class4) -> Vec<String> {
    let s = &class.signature;
    vec![
        class.label.clone(),
        s.points.to_string(),
        s.lines.to_string(),
        join(s.orders),
        join(published_sections(lower, &s.sections)),
        join(vl_labels(lower, &s.vl)),
        class.count.to_string(),
    ]
}

/// Projective S_4(3) types with their refined classes and, when given,
/// the weight of each refined class.
pub fn census_table(lower: &Level, census: &Census4, weights: Option<&[Option<u32>]>) -> Table {
    let mut t = Table::new(&["type", "points", "lines", "orders", "sections", "vl", "count", "classes", "weight"]);
    for (c, class) in census.classes.iter().enumerate() {
        let mut row = class4_row(lower, class);
        let refined: Vec<usize> = (0..census.refined.len()).filter(|&r| census.refined[r].class == c).collect();
        row.push(join(refined.iter().map(|&r| format!("{}:{}", census.refined[r].label, census.refined[r].count))));
        row.push(weights.map_or_else(String::new, |w| {
            join(refined.iter().map(|&r| w[r].map_or_else(|| "-".to_string(), |x| x.to_string())))
        }));
        t.push(row);
    }
    t
}

pub fn nonprojective_table(lower: &Level, census: &Census4) -> Table {
    let mut t = Table::new(&["type", "points", "lines", "orders", "sections", "vl", "count"]);
    for class in &census.nonprojective {
        t.push(class4_row(lower, class));
    }
    t
}

pub fn quadric_table(report: &QuadricReport) -> Table {
    let mut t = Table::new(&["type", "count", "symplectic"]);
    let mut labels: Vec<&String> = report.types.keys().collect();
    labels.sort_by_key(|l| crate::level::label_order(l));
    for l in labels {
        t.push(vec![l.clone(), report.types[l].to_string(), report.symplectic.contains_key(l).to_string()]);
    }
    t
}

pub fn weight_table(labels: &[String], weights: &[Option<u32>]) -> Table {
    let mut t = Table::new(&["type", "weight"]);
    for (l, w) in labels.iter().zip(weights) {
        t.push(vec![l.clone(), w.map_or_else(|| "-".to_string(), |x| x.to_string())]);
    }
    t
}

pub fn graph_table(s: &GraphSweep) -> Table {
    let mut t = Table::new(&["quantity", "value"]);
    for (name, value) in [
        ("projective_pairs", s.projective_pairs),
        ("projective_dyck", s.projective_dyck),
        ("projective_four_cubes", s.projective_cubes),
        ("projective_other", s.projective_other),
        ("nonprojective_pairs", s.nonprojective_pairs),
        ("nonprojective_dyck", s.nonprojective_dyck),
        ("nauru_pairs", s.nauru_pairs),
        ("nauru_matches", s.nauru_matches),
    ] {
        t.push(vec![name.to_string(), value.to_string()]);
    }
    t
}

pub fn extension_table(r: &ExtensionReport) -> Table {
    let mut t = Table::new(&["kind", "binary", "ternary"]);
    for (kind, map) in [("hyperplane", &r.hyperplanes), ("line", &r.lines)] {
        let mut keys: Vec<&String> = map.keys().collect();
        keys.sort_by_key(|l| crate::level::label_order(l.trim_start_matches('H')));
        for b in keys {
            t.push(vec![kind.to_string(), b.clone(), join(&map[b])]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), join([2, 3])]);
        let mut buf = Vec::new();
        t.write_tsv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a\tb\n1\t2,3\n");
    }
}
