//! Binary file formats: hyperplane stores (`SVHY`), Veldkamp line stores
//! (`SVLN`) and blow-up provenance sidecars (`SVPV`).
//!
//! Every file starts with a four-byte magic, a version byte, `q`, `k`, a
//! flags byte and the record count as `u64` little-endian.

use std::io::{Read, Write};

use crate::blowup::Source;
use crate::error::{Error, Result};
use crate::gf::PackedRow;
use crate::hyperplane::dual_from_key;
use crate::pointset::PointSet;

pub const VERSION: u8 = 1;
pub const HYPERPLANE_MAGIC: &[u8; 4] = b"SVHY";
pub const LINE_MAGIC: &[u8; 4] = b"SVLN";
pub const PROVENANCE_MAGIC: &[u8; 4] = b"SVPV";

pub const FLAG_PROJECTIVE_ONLY: u8 = 1;
pub const FLAG_DUAL_KEYS: u8 = 2;
pub const FLAG_NONPROJECTIVE_MEMBERS: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub q: u8,
    pub k: u8,
    pub flags: u8,
    pub count: u64,
}

impl Header {
    pub fn points(&self) -> usize {
        (self.q as usize + 1).pow(self.k as u32)
    }

    pub fn tensor_dim(&self) -> usize {
        1 << self.k
    }

    fn write(&self, magic: &[u8; 4], w: &mut impl Write) -> Result<()> {
        w.write_all(magic)?;
        w.write_all(&[VERSION, self.q, self.k, self.flags])?;
        w.write_all(&self.count.to_le_bytes())?;
        Ok(())
    }

    fn read(magic: &[u8; 4], r: &mut impl Read) -> Result<Header> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head).map_err(|_| Error::Format("truncated header".into()))?;
        if &head[..4] != magic {
            return Err(Error::Format(format!("bad magic, expected {}", String::from_utf8_lossy(magic))));
        }
        if head[4] != VERSION {
            return Err(Error::Format(format!("unsupported version {}", head[4])));
        }
        let (q, k) = (head[5], head[6]);
        if !matches!(q, 2 | 3) || !(1..=4).contains(&k) {
            return Err(Error::Format(format!("unsupported q={q} k={k}")));
        }
        let count = u64::from_le_bytes(head[8..16].try_into().unwrap_or_default());
        Ok(Header { q, k, flags: head[7], count })
    }
}

/// Records of a hyperplane store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperplaneRecords {
    Sets(Vec<PointSet>),
    /// Canonical dual keys as produced by [`crate::hyperplane::dual_key`].
    Duals(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneFile {
    pub q: u8,
    pub k: u8,
    pub projective_only: bool,
    pub records: HyperplaneRecords,
}

fn set_bytes(points: usize) -> usize {
    points.div_ceil(8)
}

fn key_bytes(dim: usize) -> usize {
    (2 * dim).div_ceil(8)
}

impl HyperplaneFile {
    /// Store of point sets, sorted into canonical byte order.
    pub fn from_sets(q: u8, k: u8, projective_only: bool, mut sets: Vec<PointSet>) -> HyperplaneFile {
        let n = set_bytes((q as usize + 1).pow(k as u32));
        sets.sort_by_cached_key(|s| s.to_bytes(n));
        HyperplaneFile { q, k, projective_only, records: HyperplaneRecords::Sets(sets) }
    }

    /// Store of dual keys, sorted.
    pub fn from_duals(q: u8, k: u8, mut keys: Vec<u32>) -> HyperplaneFile {
        keys.sort_unstable();
        HyperplaneFile { q, k, projective_only: true, records: HyperplaneRecords::Duals(keys) }
    }

    pub fn len(&self) -> usize {
        match &self.records {
            HyperplaneRecords::Sets(s) => s.len(),
            HyperplaneRecords::Duals(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duals(&self) -> Option<Vec<PackedRow>> {
        match &self.records {
            HyperplaneRecords::Duals(d) => Some(d.iter().map(|&k| dual_from_key(k)).collect()),
            HyperplaneRecords::Sets(_) => None,
        }
    }

    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        let mut flags = if self.projective_only { FLAG_PROJECTIVE_ONLY } else { 0 };
        if matches!(self.records, HyperplaneRecords::Duals(_)) {
            flags |= FLAG_DUAL_KEYS;
        }
        let header = Header { q: self.q, k: self.k, flags, count: self.len() as u64 };
        header.write(HYPERPLANE_MAGIC, w)?;
        match &self.records {
            HyperplaneRecords::Sets(sets) => {
                let n = set_bytes(header.points());
                for s in sets {
                    w.write_all(&s.to_bytes(n))?;
                }
            }
            HyperplaneRecords::Duals(keys) => {
                let n = key_bytes(header.tensor_dim());
                for key in keys {
                    w.write_all(&key.to_be_bytes()[..n])?;
                }
            }
        }
        Ok(())
    }

    pub fn read(r: &mut impl Read) -> Result<HyperplaneFile> {
        let header = Header::read(HYPERPLANE_MAGIC, r)?;
        let duals = header.flags & FLAG_DUAL_KEYS != 0;
        let n = if duals { key_bytes(header.tensor_dim()) } else { set_bytes(header.points()) };
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() as u64 != header.count * n as u64 {
            return Err(Error::Format(format!("expected {} records of {n} bytes", header.count)));
        }
        if buf.chunks(n).zip(buf.chunks(n).skip(1)).any(|(a, b)| a >= b) {
            return Err(Error::Format("records not strictly sorted".into()));
        }
        let records = if duals {
            HyperplaneRecords::Duals(
                buf.chunks(n)
                    .map(|c| {
                        let mut word = [0u8; 4];
                        word[..n].copy_from_slice(c);
                        u32::from_be_bytes(word)
                    })
                    .collect(),
            )
        } else {
            HyperplaneRecords::Sets(buf.chunks(n).map(PointSet::from_bytes).collect())
        };
        Ok(HyperplaneFile {
            q: header.q,
            k: header.k,
            projective_only: header.flags & FLAG_PROJECTIVE_ONLY != 0,
            records,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRecord {
    /// Strictly increasing indices into the companion hyperplane store.
    pub members: Vec<u64>,
    pub projective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFile {
    pub q: u8,
    pub k: u8,
    pub flags: u8,
    pub records: Vec<LineRecord>,
}

impl LineFile {
    pub fn new(q: u8, k: u8, flags: u8, mut records: Vec<LineRecord>) -> LineFile {
        records.sort_by(|a, b| a.members.cmp(&b.members));
        LineFile { q, k, flags, records }
    }

    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        let header = Header { q: self.q, k: self.k, flags: self.flags, count: self.records.len() as u64 };
        header.write(LINE_MAGIC, w)?;
        let size = self.q as usize + 1;
        for r in &self.records {
            if r.members.len() != size {
                return Err(Error::Format(format!("line record with {} members", r.members.len())));
            }
            for m in &r.members {
                w.write_all(&m.to_le_bytes())?;
            }
            w.write_all(&[r.projective as u8])?;
        }
        Ok(())
    }

    pub fn read(r: &mut impl Read) -> Result<LineFile> {
        let header = Header::read(LINE_MAGIC, r)?;
        let size = header.q as usize + 1;
        let n = 8 * size + 1;
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() as u64 != header.count * n as u64 {
            return Err(Error::Format(format!("expected {} records of {n} bytes", header.count)));
        }
        let records: Vec<LineRecord> = buf
            .chunks(n)
            .map(|c| LineRecord {
                members: c[..8 * size].chunks(8).map(|b| u64::from_le_bytes(b.try_into().unwrap_or_default())).collect(),
                projective: c[8 * size] != 0,
            })
            .collect();
        if records.iter().any(|r| r.members.windows(2).any(|w| w[0] >= w[1])) {
            return Err(Error::Format("line members not strictly increasing".into()));
        }
        if records.windows(2).any(|w| w[0].members >= w[1].members) {
            return Err(Error::Format("line records not strictly sorted".into()));
        }
        Ok(LineFile { q: header.q, k: header.k, flags: header.flags, records })
    }
}

/// One sidecar record per hyperplane record, in the same order: the source
/// kind (0 ordinary line, 1 trivial), its index in the lower line or
/// hyperplane store, and the arrangement or full layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceFile {
    pub q: u8,
    pub k: u8,
    pub records: Vec<Source>,
}

impl ProvenanceFile {
    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        let header = Header { q: self.q, k: self.k, flags: 0, count: self.records.len() as u64 };
        header.write(PROVENANCE_MAGIC, w)?;
        for src in &self.records {
            let (kind, index, variant) = match *src {
                Source::Ordinary { line, arrangement } => (0u8, line as u64, arrangement),
                Source::Trivial { hyperplane, full_layer } => (1u8, hyperplane as u64, full_layer),
            };
            w.write_all(&[kind])?;
            w.write_all(&index.to_le_bytes())?;
            w.write_all(&[variant])?;
        }
        Ok(())
    }

    pub fn read(r: &mut impl Read) -> Result<ProvenanceFile> {
        let header = Header::read(PROVENANCE_MAGIC, r)?;
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() as u64 != header.count * 10 {
            return Err(Error::Format("truncated provenance records".into()));
        }
        let records = buf
            .chunks(10)
            .map(|c| {
                let index = u64::from_le_bytes(c[1..9].try_into().unwrap_or_default());
                match c[0] {
                    0 => Ok(Source::Ordinary { line: index as u32, arrangement: c[9] }),
                    1 => Ok(Source::Trivial { hyperplane: index as u32, full_layer: c[9] }),
                    x => Err(Error::Format(format!("unknown source kind {x}"))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(ProvenanceFile { q: header.q, k: header.k, records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplane_round_trip() {
        let sets = vec![PointSet::from_points([0, 3, 9]), PointSet::from_points([1]), PointSet::from_points([15])];
        let f = HyperplaneFile::from_sets(3, 2, false, sets);
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"SVHY");
        assert_eq!(buf.len(), 16 + 3 * 2);
        assert_eq!(HyperplaneFile::read(&mut buf.as_slice()).unwrap(), f);
        let d = HyperplaneFile::from_duals(3, 4, vec![7, 3, 0x4000_0000]);
        let mut buf = Vec::new();
        d.write(&mut buf).unwrap();
        assert_eq!(HyperplaneFile::read(&mut buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn line_round_trip_and_errors() {
        let f = LineFile::new(
            3,
            2,
            0,
            vec![
                LineRecord { members: vec![4, 5, 6, 7], projective: false },
                LineRecord { members: vec![0, 1, 2, 3], projective: true },
            ],
        );
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        assert_eq!(LineFile::read(&mut buf.as_slice()).unwrap(), f);
        buf[0] = b'X';
        assert!(LineFile::read(&mut buf.as_slice()).is_err());
        let mut bad = Vec::new();
        f.write(&mut bad).unwrap();
        bad[4] = 9;
        assert!(LineFile::read(&mut bad.as_slice()).is_err());
    }
}
