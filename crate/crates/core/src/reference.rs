//! Published census data the computed classifications are compared with.
//!
//! Hyperplane labels are `H1`, `H2`, … by decreasing size within a level, a
//! trailing `*` marking non-projective types. Trivial Veldkamp lines are
//! labeled by the roman numeral of their hyperplane type.

use crate::veldkamp::Tiebreak;

/// A hyperplane type row. `sections` lists the fully contained sub-Segres
/// followed by the counts of sections of each lower type `H1, H2, …`.
#[derive(Debug, Clone, Copy)]
pub struct HyperplaneRow {
    pub label: &'static str,
    pub points: u32,
    pub lines: u32,
    pub orders: &'static [u32],
    pub sections: &'static [u32],
    pub vl: &'static [&'static str],
    pub count: u64,
    pub orbit: &'static str,
    pub weight: &'static str,
}

impl HyperplaneRow {
    pub fn projective(&self) -> bool {
        !self.label.ends_with('*')
    }
}

/// A Veldkamp line type row. `composition` counts members of each hyperplane
/// type `H1, H2, …` followed, where present, by the non-projective ovoids.
#[derive(Debug, Clone, Copy)]
pub struct LineRow {
    pub label: &'static str,
    pub core_points: u32,
    pub core_lines: u32,
    pub composition: &'static [u32],
    pub count: u64,
}

impl LineRow {
    pub fn projective(&self) -> bool {
        !self.label.ends_with('*')
    }
}

#[allow(clippy::too_many_arguments)]
const fn hr(
    label: &'static str,
    points: u32,
    lines: u32,
    orders: &'static [u32],
    sections: &'static [u32],
    vl: &'static [&'static str],
    count: u64,
    orbit: &'static str,
    weight: &'static str,
) -> HyperplaneRow {
    HyperplaneRow { label, points, lines, orders, sections, vl, count, orbit, weight }
}

const fn lr(label: &'static str, core_points: u32, core_lines: u32, composition: &'static [u32], count: u64) -> LineRow {
    LineRow { label, core_points, core_lines, composition, count }
}

pub const S2_HYPERPLANES: &[HyperplaneRow] = &[
    hr("H1", 7, 2, &[0, 6, 1], &[2, 6], &["I"], 16, "", "1"),
    hr("H2", 4, 0, &[4, 0, 0], &[0, 8], &["1"], 24, "", "2"),
];

pub const S2_LINES: &[LineRow] = &[
    lr("1", 4, 1, &[4, 0], 8),
    lr("2", 2, 0, &[2, 2], 72),
    lr("3", 1, 0, &[1, 3], 32),
    lr("4", 0, 0, &[0, 4], 18),
    lr("4*", 0, 0, &[0, 4], 6),
];

pub const S3_HYPERPLANES: &[HyperplaneRow] = &[
    hr("H1", 37, 21, &[0, 0, 27, 10], &[3, 9, 0], &["I"], 64, "2", "1"),
    hr("H2", 28, 12, &[0, 12, 12, 4], &[1, 8, 3], &["II", "1"], 288, "3", "2"),
    hr("H3", 22, 6, &[4, 12, 6, 0], &[0, 6, 6], &["2"], 1728, "4", "2"),
    hr("H4", 19, 3, &[9, 9, 0, 1], &[0, 3, 9], &["3"], 768, "5", "3"),
    hr("H5", 16, 0, &[16, 0, 0, 0], &[0, 0, 12], &["4"], 432, "6", "3"),
    hr("H5*", 16, 0, &[16, 0, 0, 0], &[0, 0, 12], &["4*"], 144, "", ""),
];

pub const S3_LINES: &[LineRow] = &[
    lr("1", 28, 15, &[4, 0, 0, 0, 0, 0], 48),
    lr("2", 22, 10, &[2, 2, 0, 0, 0, 0], 864),
    lr("3", 19, 9, &[1, 3, 0, 0, 0, 0], 384),
    lr("4", 18, 6, &[2, 0, 2, 0, 0, 0], 864),
    lr("5", 16, 8, &[0, 4, 0, 0, 0, 0], 216),
    lr("5*", 16, 8, &[0, 4, 0, 0, 0, 0], 72),
    lr("6", 16, 4, &[0, 4, 0, 0, 0, 0], 72),
    lr("7", 15, 4, &[1, 1, 2, 0, 0, 0], 10368),
    lr("8", 13, 4, &[1, 0, 3, 0, 0, 0], 3456),
    lr("9", 13, 3, &[1, 1, 0, 2, 0, 0], 3456),
    lr("10", 13, 3, &[1, 0, 3, 0, 0, 0], 6912),
    lr("11", 13, 3, &[0, 3, 0, 1, 0, 0], 2304),
    lr("12", 12, 3, &[0, 2, 2, 0, 0, 0], 20736),
    lr("13", 12, 2, &[1, 0, 2, 1, 0, 0], 20736),
    lr("14", 12, 2, &[0, 2, 2, 0, 0, 0], 2592),
    lr("15", 10, 3, &[1, 0, 0, 3, 0, 0], 256),
    lr("16", 10, 2, &[0, 1, 3, 0, 0, 0], 20736),
    lr("17", 10, 2, &[0, 1, 3, 0, 0, 0], 3456),
    lr("18", 10, 1, &[0, 2, 0, 2, 0, 0], 3456),
    lr("19", 10, 1, &[0, 1, 3, 0, 0, 0], 13824),
    lr("20", 10, 0, &[1, 0, 1, 1, 1, 0], 6912),
    lr("21", 9, 2, &[0, 1, 2, 1, 0, 0], 20736),
    lr("22", 9, 2, &[0, 1, 2, 1, 0, 0], 20736),
    lr("23", 9, 1, &[0, 1, 2, 1, 0, 0], 20736),
    lr("24", 9, 0, &[1, 0, 1, 0, 2, 0], 6912),
    lr("25", 9, 0, &[1, 0, 0, 2, 1, 0], 6912),
    lr("26", 8, 2, &[0, 0, 4, 0, 0, 0], 3888),
    lr("26*", 8, 2, &[0, 0, 4, 0, 0, 0], 1296),
    lr("27", 8, 1, &[0, 0, 4, 0, 0, 0], 10368),
    lr("28", 8, 1, &[0, 0, 4, 0, 0, 0], 10368),
    lr("29", 8, 1, &[0, 0, 4, 0, 0, 0], 41472),
    lr("30", 8, 0, &[0, 2, 0, 0, 2, 0], 3888),
    lr("31", 8, 0, &[0, 1, 2, 0, 1, 0], 10368),
    lr("32", 8, 0, &[0, 1, 2, 0, 1, 0], 20736),
    lr("33", 8, 0, &[0, 1, 1, 2, 0, 0], 10368),
    lr("34", 8, 0, &[0, 1, 1, 2, 0, 0], 20736),
    lr("35", 8, 0, &[0, 0, 4, 0, 0, 0], 5184),
    lr("36", 7, 1, &[0, 1, 0, 3, 0, 0], 2304),
    lr("37", 7, 1, &[0, 0, 3, 1, 0, 0], 41472),
    lr("38", 7, 0, &[0, 1, 1, 1, 1, 0], 41472),
    lr("39", 7, 0, &[0, 0, 3, 1, 0, 0], 2304),
    lr("40", 7, 0, &[0, 0, 3, 1, 0, 0], 69120),
    lr("41", 6, 1, &[0, 0, 2, 2, 0, 0], 20736),
    lr("42", 6, 0, &[0, 1, 1, 0, 2, 0], 10368),
    lr("43", 6, 0, &[0, 1, 0, 2, 1, 0], 10368),
    lr("44", 6, 0, &[0, 0, 3, 0, 1, 0], 6912),
    lr("45", 6, 0, &[0, 0, 3, 0, 1, 0], 62208),
    lr("46", 6, 0, &[0, 0, 2, 2, 0, 0], 62208),
    lr("47", 6, 0, &[0, 0, 2, 2, 0, 0], 6912),
    lr("48", 5, 0, &[0, 0, 2, 1, 1, 0], 82944),
    lr("49", 5, 0, &[0, 0, 2, 1, 1, 0], 20736),
    lr("50", 5, 0, &[0, 0, 1, 3, 0, 0], 20736),
    lr("51", 4, 1, &[0, 0, 0, 4, 0, 0], 1728),
    lr("51*", 4, 1, &[0, 0, 0, 4, 0, 0], 576),
    lr("52", 4, 0, &[0, 1, 0, 0, 3, 0], 1728),
    lr("53", 4, 0, &[0, 0, 2, 0, 2, 0], 20736),
    lr("54", 4, 0, &[0, 0, 2, 0, 2, 0], 10368),
    lr("55", 4, 0, &[0, 0, 1, 2, 1, 0], 20736),
    lr("56", 4, 0, &[0, 0, 1, 2, 1, 0], 13824),
    lr("57", 4, 0, &[0, 0, 0, 4, 0, 0], 3456),
    lr("58", 4, 0, &[0, 0, 0, 4, 0, 0], 576),
    lr("59", 3, 0, &[0, 0, 1, 1, 2, 0], 13824),
    lr("60", 2, 0, &[0, 0, 0, 2, 2, 0], 10368),
    lr("61", 1, 0, &[0, 0, 0, 1, 3, 0], 2304),
    lr("62", 0, 0, &[0, 0, 0, 0, 4, 0], 756),
    lr("62*", 0, 0, &[0, 0, 0, 0, 4, 0], 324),
];

/// Lines containing non-projective ovoids.
pub const S3_OVOIDAL_LINES: &[LineRow] = &[
    lr("30*", 8, 0, &[0, 2, 0, 0, 0, 2], 1296),
    lr("44*", 6, 0, &[0, 0, 3, 0, 0, 1], 2304),
    lr("52*", 4, 0, &[0, 1, 0, 0, 0, 3], 576),
    lr("62_1*", 0, 0, &[0, 0, 0, 0, 2, 2], 864),
    lr("62_2*", 0, 0, &[0, 0, 0, 0, 0, 4], 360),
];

/// How line types sharing core size and composition are told apart: the
/// feature, the hyperplane type it looks at, and the type labels in
/// increasing order of the feature value.
#[derive(Debug, Clone, Copy)]
pub struct TieRule {
    pub core_points: u32,
    pub core_lines: u32,
    pub composition: &'static [u32],
    pub feature: Tiebreak,
    pub class: &'static str,
    pub labels: &'static [&'static str],
}

const fn tr(
    core_points: u32,
    core_lines: u32,
    composition: &'static [u32],
    feature: Tiebreak,
    class: &'static str,
    labels: &'static [&'static str],
) -> TieRule {
    TieRule { core_points, core_lines, composition, feature, class, labels }
}

pub const S3_TIE_RULES: &[TieRule] = &[
    tr(10, 2, &[0, 1, 3, 0, 0, 0], Tiebreak::Concurrency, "H3", &["17", "16"]),
    tr(9, 2, &[0, 1, 2, 1, 0, 0], Tiebreak::ZeroOrder, "H3", &["22", "21"]),
    tr(8, 1, &[0, 0, 4, 0, 0, 0], Tiebreak::ZeroOrder, "H3", &["27", "29", "28"]),
    tr(8, 0, &[0, 1, 2, 0, 1, 0], Tiebreak::ZeroOrder, "H3", &["31", "32"]),
    tr(8, 0, &[0, 1, 1, 2, 0, 0], Tiebreak::ZeroOrder, "H3", &["34", "33"]),
    tr(7, 0, &[0, 0, 3, 1, 0, 0], Tiebreak::DeepInCore, "H4", &["40", "39"]),
    tr(6, 0, &[0, 0, 3, 0, 1, 0], Tiebreak::AnyZeroOrder, "H3", &["44", "45"]),
    tr(6, 0, &[0, 0, 2, 2, 0, 0], Tiebreak::ZeroOrder, "H3", &["46", "47"]),
    tr(5, 0, &[0, 0, 2, 1, 1, 0], Tiebreak::DeepInCore, "H4", &["48", "49"]),
    tr(4, 0, &[0, 0, 2, 0, 2, 0], Tiebreak::OrderTwoDistance, "H3", &["53", "54"]),
    tr(4, 0, &[0, 0, 1, 2, 1, 0], Tiebreak::DeepDistance, "H4", &["55", "56"]),
    tr(4, 0, &[0, 0, 0, 4, 0, 0], Tiebreak::DeepInCore, "H4", &["57", "58"]),
];

/// Line types that split into two orbits: (type, smaller, larger).
pub const S3_LINE_SPLITS: &[(&str, u64, u64)] = &[
    ("26", 1296, 2592),
    ("30", 1296, 2592),
    ("40", 27648, 41472),
    ("45", 20736, 41472),
    ("46", 20736, 41472),
    ("48", 41472, 41472),
    ("62", 108, 648),
];

/// Ternary line types extending binary lines, with the binary type number
/// used in the literature.
pub const BINARY_EXTENSIONS: &[(&str, u32)] = &[
    ("1", 1),
    ("2", 2),
    ("3", 6),
    ("4", 3),
    ("6", 10),
    ("7", 5),
    ("10", 9),
    ("11", 11),
    ("15", 41),
    ("16", 16),
    ("17", 23),
    ("18", 26),
    ("20", 20),
    ("23", 19),
    ("44*", 28),
];

/// Binary hyperplane types: (label, points, count, ternary extension type).
pub const BINARY_HYPERPLANES: &[(&str, u32, u64, Option<&str>)] = &[
    ("H1", 19, 27, Some("H1")),
    ("H2", 15, 54, Some("H2")),
    ("H3", 13, 108, Some("H3")),
    ("H4", 11, 54, None),
    ("H5", 9, 12, Some("H4")),
];

pub const S4_HYPERPLANES: &[HyperplaneRow] = &[
    hr("1", 175, 148, &[0, 0, 0, 108, 67], &[4, 12, 0, 0, 0, 0], &["I"], 256, "2", "1"),
    hr("2", 148, 112, &[0, 0, 36, 72, 40], &[2, 8, 6, 0, 0, 0], &["II", "1"], 2304, "3", "2"),
    hr("3", 130, 88, &[0, 12, 36, 60, 22], &[1, 6, 6, 3, 0, 0], &["III", "2"], 27648, "4", "2"),
    hr("4", 121, 76, &[0, 27, 27, 45, 22], &[1, 3, 9, 0, 3, 0], &["IV", "3"], 12288, "6", "3"),
    hr("5", 118, 72, &[8, 0, 48, 56, 6], &[0, 8, 0, 8, 0, 0], &["4"], 20736, "5", "2"),
    hr("6", 112, 64, &[0, 48, 0, 48, 16], &[1, 0, 12, 0, 0, 3], &["V", "5"], 6912, "7", "3"),
    hr("7", 112, 64, &[0, 0, 96, 0, 16], &[0, 0, 16, 0, 0, 0], &["6"], 1728, "18", "4"),
    hr("8", 109, 60, &[4, 16, 48, 36, 5], &[0, 4, 4, 8, 0, 0], &["7"], 248832, "11", "3"),
    hr("9", 103, 52, &[12, 12, 48, 24, 7], &[0, 4, 2, 6, 4, 0], &["8", "9"], 165888, "8", "3"),
    hr("10", 103, 52, &[6, 21, 45, 27, 4], &[0, 3, 3, 9, 1, 0], &["10", "11"], 221184, "9", "3"),
    hr("11", 100, 48, &[6, 26, 42, 22, 4], &[0, 2, 4, 8, 2, 0], &["12", "13"], 995328, "12", "3"),
    hr("12", 100, 48, &[0, 32, 48, 16, 4], &[0, 0, 8, 8, 0, 0], &["14"], 62208, "24", "4"),
    hr("13", 94, 40, &[27, 0, 54, 0, 13], &[0, 4, 0, 0, 12, 0], &["15"], 6144, "16", "4"),
    hr("14", 94, 40, &[6, 36, 36, 12, 4], &[0, 0, 6, 6, 4, 0], &["17", "18"], 165888, "20", "4"),
    hr("15", 94, 40, &[8, 33, 33, 19, 1], &[0, 1, 3, 10, 1, 1], &["16", "20"], 663552, "10", "3"),
    hr("16", 94, 40, &[3, 36, 42, 12, 1], &[0, 0, 4, 12, 0, 0], &["19"], 331776, "22", "4"),
    hr("17", 91, 36, &[13, 33, 27, 15, 3], &[0, 1, 3, 6, 5, 1], &["21", "25"], 663552, "17", "4"),
    hr("18", 91, 36, &[15, 27, 33, 13, 3], &[0, 1, 3, 7, 3, 2], &["22", "24"], 663552, "13", "3"),
    hr("19", 91, 36, &[8, 36, 36, 8, 3], &[0, 0, 4, 8, 4, 0], &["23"], 497664, "25", "4"),
    hr("20", 88, 32, &[16, 32, 24, 16, 0], &[0, 0, 4, 8, 0, 4], &["26", "30"], 186624, "27+30", "4"),
    hr("21", 88, 32, &[8, 44, 24, 12, 0], &[0, 0, 2, 10, 4, 0], &["28", "33"], 497664, "28", "4"),
    hr("22", 88, 32, &[10, 38, 30, 10, 0], &[0, 0, 2, 11, 2, 1], &["29", "32", "34"], 1990656, "31", "4"),
    hr("23", 88, 32, &[12, 32, 36, 8, 0], &[0, 0, 2, 12, 0, 2], &["27", "31"], 497664, "29", "4"),
    hr("24", 88, 32, &[8, 32, 48, 0, 0], &[0, 0, 0, 16, 0, 0], &["35"], 124416, "46", "4"),
    hr("25", 85, 28, &[18, 36, 24, 0, 7], &[0, 0, 4, 0, 12, 0], &["36"], 55296, "19", "4"),
    hr("26", 85, 28, &[16, 36, 24, 8, 1], &[0, 0, 2, 8, 4, 2], &["37", "38"], 1990656, "23", "4"),
    hr("27", 85, 28, &[12, 36, 36, 0, 1], &[0, 0, 0, 12, 4, 0], &["39"], 55296, "14", "3"),
    hr("28", 85, 28, &[11, 40, 30, 4, 0], &[0, 0, 0, 12, 4, 0], &["40"], 1658880, "39+44", "4"),
    hr("29", 82, 24, &[22, 34, 18, 6, 2], &[0, 0, 2, 5, 6, 3], &["41", "42", "43"], 995328, "26", "4"),
    hr("30", 82, 24, &[14, 48, 12, 8, 0], &[0, 0, 0, 8, 8, 0], &["47"], 165888, "40", "4"),
    hr("31", 82, 24, &[18, 36, 24, 4, 0], &[0, 0, 0, 10, 4, 2], &["45", "46"], 2985984, "36+45", "4"),
    hr("32", 82, 24, &[22, 24, 36, 0, 0], &[0, 0, 0, 12, 0, 4], &["44"], 165888, "15", "3"),
    hr("33", 79, 20, &[22, 40, 12, 4, 1], &[0, 0, 0, 6, 8, 2], &["49", "50"], 995328, "35", "4"),
    hr("34", 79, 20, &[25, 32, 18, 4, 0], &[0, 0, 0, 8, 4, 4], &["48"], 1990656, "37+42", "4"),
    hr("35", 76, 16, &[36, 24, 12, 0, 4], &[0, 0, 2, 0, 8, 6], &["51", "52"], 82944, "21", "4"),
    hr("36", 76, 16, &[24, 48, 0, 0, 4], &[0, 0, 0, 0, 16, 0], &["58"], 13824, "32", "4"),
    hr("37", 76, 16, &[29, 36, 6, 4, 1], &[0, 0, 0, 4, 8, 4], &["56"], 331776, "34", "4"),
    hr("38", 76, 16, &[32, 28, 12, 4, 0], &[0, 0, 0, 6, 4, 6], &["53", "55"], 995328, "43", "4"),
    hr("39", 76, 16, &[32, 28, 12, 4, 0], &[0, 0, 0, 6, 4, 6], &["54", "57"], 331776, "38", "4"),
    hr("40", 73, 12, &[39, 24, 6, 4, 0], &[0, 0, 0, 4, 4, 8], &["59"], 331776, "41", "4"),
    hr("41", 70, 8, &[44, 24, 0, 0, 2], &[0, 0, 0, 0, 8, 8], &["60"], 248832, "48", "5"),
    hr("42", 67, 4, &[54, 12, 0, 0, 1], &[0, 0, 0, 0, 4, 12], &["61"], 55296, "33", "4"),
    hr("43", 64, 0, &[64, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 16], &["62"], 18144, "47+49", "4,5"),
];

/// Non-projective hyperplanes blown up from lines whose members are all
/// projective. The last section column merges both kinds of ovoid.
pub const S4_NONPROJECTIVE: &[HyperplaneRow] = &[
    hr("6*", 112, 64, &[0, 48, 0, 48, 16], &[1, 0, 12, 0, 0, 3], &["V*", "5*"], 2304, "", ""),
    hr("20*", 88, 32, &[16, 32, 24, 16, 0], &[0, 0, 4, 8, 0, 4], &["26*"], 31104, "", ""),
    hr("35*", 76, 16, &[36, 24, 12, 0, 4], &[0, 0, 2, 0, 8, 6], &["51*"], 13824, "", ""),
    hr("43*", 64, 0, &[64, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 16], &["62*"], 7776, "", ""),
];

/// S_4(3) types corresponding to points of the invariant hyperbolic quadric.
pub const QUADRIC_TYPES: &[&str] = &[
    "1", "2", "3", "4", "6", "7", "9", "10", "13", "14", "15", "16", "25", "26", "27", "28", "35", "36", "37", "38",
    "39", "42",
];

/// Quadric types corresponding to generators of the symplectic polar space.
pub const SYMPLECTIC_TYPES: &[&str] = &["1", "2", "4", "7", "13", "25", "36"];

/// Large-orbit sizes in the vector-space count for the split ovoid type.
pub const OVOID_SPLIT_VECTOR_ORBITS: (u64, u64) = (5184, 31104);

pub const QUADRIC_POINTS: u64 = (3u64.pow(7) + 1) * (3u64.pow(8) - 1) / 2;
pub const SYMPLECTIC_GENERATORS: u64 = 4 * 10 * 28 * 82;

pub fn roman(n: usize) -> String {
    const NUMERALS: [&str; 10] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"];
    NUMERALS.get(n.wrapping_sub(1)).map_or_else(|| n.to_string(), |s| s.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(rows: &[HyperplaneRow], pick: &[&str]) -> u64 {
        rows.iter().filter(|r| pick.contains(&r.label)).map(|r| r.count).sum()
    }

    #[test]
    fn line_table_totals() {
        let proj: u64 = S3_LINES.iter().filter(|r| r.projective()).map(|r| r.count).sum();
        let star: u64 = S3_LINES.iter().filter(|r| !r.projective()).map(|r| r.count).sum();
        assert_eq!((proj, star), (896_260, 2_268));
        assert_eq!(S3_LINES.iter().filter(|r| r.projective()).count(), 62);
        assert_eq!(S3_OVOIDAL_LINES.iter().map(|r| r.count).sum::<u64>(), 5_400);
        assert_eq!(S2_LINES.iter().map(|r| r.count).sum::<u64>(), 136);
        for (t, a, b) in S3_LINE_SPLITS {
            let row = S3_LINES.iter().find(|r| r.label == *t).unwrap();
            assert_eq!(row.count, a + b);
        }
        for r in S3_LINES.iter().chain(S3_OVOIDAL_LINES) {
            assert_eq!(r.composition.iter().sum::<u32>(), 4, "{}", r.label);
        }
    }

    #[test]
    fn hyperplane_table_totals() {
        let all: Vec<&str> = S4_HYPERPLANES.iter().map(|r| r.label).collect();
        assert_eq!(total(S4_HYPERPLANES, &all), 21_523_360);
        assert_eq!(total(S4_HYPERPLANES, QUADRIC_TYPES), QUADRIC_POINTS);
        assert_eq!(QUADRIC_POINTS, 7_176_640);
        assert_eq!(total(S4_HYPERPLANES, SYMPLECTIC_TYPES), SYMPLECTIC_GENERATORS);
        assert_eq!(SYMPLECTIC_GENERATORS, 91_840);
        assert_eq!(S4_NONPROJECTIVE.iter().map(|r| r.count).sum::<u64>(), 55_008);
        assert_eq!(S3_HYPERPLANES.iter().map(|r| r.count).sum::<u64>(), 3_424);
        for r in S4_HYPERPLANES.iter().chain(S4_NONPROJECTIVE) {
            assert_eq!(r.orders.iter().sum::<u32>(), r.points, "{}", r.label);
            assert_eq!(r.sections.iter().sum::<u32>(), 16, "{}", r.label);
        }
        for r in S3_HYPERPLANES {
            assert_eq!(r.orders.iter().sum::<u32>(), r.points);
            assert_eq!(r.sections.iter().sum::<u32>(), 12);
        }
    }

    #[test]
    fn numerals() {
        assert_eq!(roman(1), "I");
        assert_eq!(roman(5), "V");
        assert_eq!(roman(12), "12");
    }
}
