//! Fixed-width point sets of up to 256 points.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, Not};

pub const MAX_POINTS: usize = 256;
const WORDS: usize = MAX_POINTS / 64;

/// Set of point indices below 256, one bit per point.
///
/// Ordering is the lexicographic order of the little-endian byte serialization
/// (bit 0 of byte 0 is point 0), which is the order records are written in.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PointSet(pub [u64; WORDS]);

impl PointSet {
    pub const EMPTY: PointSet = PointSet([0; WORDS]);

    /// The first `n` points.
    pub fn full(n: usize) -> PointSet {
        assert!(n <= MAX_POINTS);
        let mut s = PointSet::EMPTY;
        for (w, word) in s.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn from_word(w: u64) -> PointSet {
        PointSet([w, 0, 0, 0])
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> PointSet {
        let mut s = PointSet::EMPTY;
        for p in points {
            s.insert(p);
        }
        s
    }

    #[inline]
    pub fn word(&self) -> u64 {
        self.0[0]
    }

    #[inline]
    pub fn insert(&mut self, p: usize) {
        self.0[p >> 6] |= 1u64 << (p & 63);
    }

    #[inline]
    pub fn remove(&mut self, p: usize) {
        self.0[p >> 6] &= !(1u64 << (p & 63));
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        (self.0[p >> 6] >> (p & 63)) & 1 == 1
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &PointSet) -> bool {
        (0..WORDS).all(|i| self.0[i] & !other.0[i] == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &PointSet) -> bool {
        (0..WORDS).any(|i| self.0[i] & other.0[i] != 0)
    }

    /// Complement within the first `n` points.
    pub fn complement(&self, n: usize) -> PointSet {
        !*self & PointSet::full(n)
    }

    pub fn iter(&self) -> PointIter {
        PointIter { words: self.0, w: 0 }
    }

    /// Logical shift towards lower indices.
    #[inline]
    pub fn shr(&self, n: usize) -> PointSet {
        if n == 0 {
            return *self;
        }
        let (ws, bs) = (n / 64, n % 64);
        let mut out = [0u64; WORDS];
        for (i, o) in out.iter_mut().enumerate() {
            let src = i + ws;
            if src < WORDS {
                let mut v = self.0[src] >> bs;
                if bs != 0 && src + 1 < WORDS {
                    v |= self.0[src + 1] << (64 - bs);
                }
                *o = v;
            }
        }
        PointSet(out)
    }

    /// Logical shift towards higher indices; bits past 256 are dropped.
    #[inline]
    pub fn shl(&self, n: usize) -> PointSet {
        if n == 0 {
            return *self;
        }
        let (ws, bs) = (n / 64, n % 64);
        let mut out = [0u64; WORDS];
        for (i, o) in out.iter_mut().enumerate() {
            if i >= ws {
                let src = i - ws;
                let mut v = self.0[src] << bs;
                if bs != 0 && src >= 1 {
                    v |= self.0[src - 1] >> (64 - bs);
                }
                *o = v;
            }
        }
        PointSet(out)
    }

    /// Bits `start..start + len` as a word, `len <= 64`.
    #[inline]
    pub fn extract(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && start + len <= MAX_POINTS);
        let (w, b) = (start / 64, start % 64);
        let mut v = self.0[w] >> b;
        if b != 0 && w + 1 < WORDS {
            v |= self.0[w + 1] << (64 - b);
        }
        if len < 64 {
            v &= (1u64 << len) - 1;
        }
        v
    }

    /// OR the low `len` bits of `bits` into positions `start..start + len`.
    #[inline]
    pub fn deposit(&mut self, start: usize, len: usize, bits: u64) {
        debug_assert!(len <= 64 && start + len <= MAX_POINTS);
        let bits = if len < 64 { bits & ((1u64 << len) - 1) } else { bits };
        let (w, b) = (start / 64, start % 64);
        self.0[w] |= bits << b;
        if b != 0 && b + len > 64 {
            self.0[w + 1] |= bits >> (64 - b);
        }
    }

    /// Little-endian serialization truncated to `nbytes` bytes.
    pub fn to_bytes(&self, nbytes: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(nbytes);
        for i in 0..nbytes {
            out.push((self.0[i / 8] >> ((i % 8) * 8)) as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> PointSet {
        assert!(bytes.len() <= MAX_POINTS / 8);
        let mut s = PointSet::EMPTY;
        for (i, &b) in bytes.iter().enumerate() {
            s.0[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        s
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in 0..WORDS {
            match self.0[i].swap_bytes().cmp(&other.0[i].swap_bytes()) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    #[inline]
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet([self.0[0] & rhs.0[0], self.0[1] & rhs.0[1], self.0[2] & rhs.0[2], self.0[3] & rhs.0[3]])
    }
}

impl BitAndAssign for PointSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: PointSet) {
        *self = *self & rhs;
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    #[inline]
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet([self.0[0] | rhs.0[0], self.0[1] | rhs.0[1], self.0[2] | rhs.0[2], self.0[3] | rhs.0[3]])
    }
}

impl BitOrAssign for PointSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: PointSet) {
        *self = *self | rhs;
    }
}

impl BitXor for PointSet {
    type Output = PointSet;
    #[inline]
    fn bitxor(self, rhs: PointSet) -> PointSet {
        PointSet([self.0[0] ^ rhs.0[0], self.0[1] ^ rhs.0[1], self.0[2] ^ rhs.0[2], self.0[3] ^ rhs.0[3]])
    }
}

impl Not for PointSet {
    type Output = PointSet;
    #[inline]
    fn not(self) -> PointSet {
        PointSet([!self.0[0], !self.0[1], !self.0[2], !self.0[3]])
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct PointIter {
    words: [u64; WORDS],
    w: usize,
}

impl Iterator for PointIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.w < WORDS {
            let word = self.words[self.w];
            if word != 0 {
                let b = word.trailing_zeros() as usize;
                self.words[self.w] &= word - 1;
                return Some(self.w * 64 + b);
            }
            self.w += 1;
        }
        None
    }
}

/// Bit-sliced counter: adds point sets and reports, per point, how many of
/// them contained it (saturating logic is not needed below 8).
#[derive(Clone, Copy, Default, Debug)]
pub struct BitCounter {
    planes: [PointSet; 3],
}

impl BitCounter {
    #[inline]
    pub fn add(&mut self, s: PointSet) {
        let mut carry = s;
        for p in self.planes.iter_mut() {
            let next = *p & carry;
            *p = *p ^ carry;
            carry = next;
            if carry.is_empty() {
                break;
            }
        }
        debug_assert!(carry.is_empty(), "bit counter overflow");
    }

    /// Points whose count equals `n` (`n < 8`).
    #[inline]
    pub fn equal_to(&self, n: u32) -> PointSet {
        let mut out = !PointSet::EMPTY;
        for (i, p) in self.planes.iter().enumerate() {
            out &= if (n >> i) & 1 == 1 { *p } else { !*p };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_set() -> impl Strategy<Value = PointSet> {
        prop::array::uniform4(any::<u64>()).prop_map(PointSet)
    }

    proptest! {
        #[test]
        fn byte_roundtrip(s in arb_set()) {
            prop_assert_eq!(PointSet::from_bytes(&s.to_bytes(32)), s);
        }

        #[test]
        fn ordering_matches_serialized_bytes(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.cmp(&b), a.to_bytes(32).cmp(&b.to_bytes(32)));
        }

        #[test]
        fn shifts_match_index_arithmetic(s in arb_set(), n in 0usize..256) {
            let right: Vec<usize> = s.iter().filter(|&p| p >= n).map(|p| p - n).collect();
            prop_assert_eq!(s.shr(n).iter().collect::<Vec<_>>(), right);
            let left: Vec<usize> = s.iter().map(|p| p + n).filter(|&p| p < 256).collect();
            prop_assert_eq!(s.shl(n).iter().collect::<Vec<_>>(), left);
        }

        #[test]
        fn extract_deposit(s in arb_set(), start in 0usize..200, len in 1usize..=56) {
            let bits = s.extract(start, len);
            for i in 0..len {
                prop_assert_eq!((bits >> i) & 1 == 1, s.contains(start + i));
            }
            let mut t = PointSet::EMPTY;
            t.deposit(start, len, bits);
            prop_assert_eq!(t, s & PointSet::full(start + len) & !PointSet::full(start));
        }
    }

    #[test]
    fn counter_counts() {
        let mut c = BitCounter::default();
        let a = PointSet::from_points([1, 2, 3]);
        let b = PointSet::from_points([2, 3]);
        let d = PointSet::from_points([3]);
        c.add(a);
        c.add(b);
        c.add(d);
        assert_eq!(c.equal_to(1) & PointSet::full(8), PointSet::from_points([1]));
        assert_eq!(c.equal_to(2), PointSet::from_points([2]));
        assert_eq!(c.equal_to(3), PointSet::from_points([3]));
    }

    #[test]
    fn full_and_complement() {
        assert_eq!(PointSet::full(70).count(), 70);
        assert_eq!(PointSet::full(256).count(), 256);
        let s = PointSet::from_points([0, 5, 69]);
        assert_eq!(s.complement(70).count(), 67);
    }
}
