//! Per-family adjacency rules.
//!
//! Each rule returns the literal emissions for one node: what the generator
//! rule lists from that node's side. The graph builder takes the symmetric
//! closure, and the auditor compares emissions from both endpoints.

use crate::error::{Error, Result};
use crate::label::{Family, NodeLabel, TopologySpec};

/// Which version of the BVH outer case table to apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BvhCaseTable {
    /// For `a_0 in {0,1}, a_i = 2` the second move is `((a_0 - 1), (a_i + 1))`.
    #[default]
    Corrected,
    /// Uncorrected table: that case emits `((a_0 + 1), (a_i + 2))` twice.
    AsPrinted,
}

#[inline]
fn wrap(value: i8, radix: u8) -> u8 {
    value.rem_euclid(radix as i8) as u8
}

pub fn hc_neighbors(spec: &TopologySpec, label: &NodeLabel) -> Result<Vec<NodeLabel>> {
    expect_family(spec, Family::Hc)?;
    collect(spec, label, hc_emit)
}

pub fn vq_neighbors(spec: &TopologySpec, label: &NodeLabel) -> Result<Vec<NodeLabel>> {
    expect_family(spec, Family::Vq)?;
    collect(spec, label, vq_emit)
}

pub fn bh_neighbors(spec: &TopologySpec, label: &NodeLabel) -> Result<Vec<NodeLabel>> {
    expect_family(spec, Family::Bh)?;
    collect(spec, label, bh_emit)
}

pub fn bvh_neighbors(spec: &TopologySpec, label: &NodeLabel) -> Result<Vec<NodeLabel>> {
    expect_family(spec, Family::Bvh)?;
    collect(spec, label, |d| bvh_emit(d, BvhCaseTable::Corrected))
}

/// Dispatches to the family's rule. Result is sorted and deduplicated.
pub fn neighbors(spec: &TopologySpec, label: &NodeLabel) -> Result<Vec<NodeLabel>> {
    match spec.family() {
        Family::Hc => hc_neighbors(spec, label),
        Family::Vq => vq_neighbors(spec, label),
        Family::Bh => bh_neighbors(spec, label),
        Family::Bvh => bvh_neighbors(spec, label),
    }
}

/// Raw emissions, duplicates included.
pub(crate) fn emit(family: Family, digits: &[u8], table: BvhCaseTable) -> Vec<Vec<u8>> {
    match family {
        Family::Hc => hc_emit(digits),
        Family::Vq => vq_emit(digits),
        Family::Bh => bh_emit(digits),
        Family::Bvh => bvh_emit(digits, table),
    }
}

fn expect_family(spec: &TopologySpec, expected: Family) -> Result<()> {
    if spec.family() == expected {
        Ok(())
    } else {
        Err(Error::UnsupportedFamily {
            expected,
            actual: spec.family(),
        })
    }
}

fn collect(
    spec: &TopologySpec,
    label: &NodeLabel,
    rule: impl Fn(&[u8]) -> Vec<Vec<u8>>,
) -> Result<Vec<NodeLabel>> {
    // re-validate: the label may come from a different spec
    let label = spec.label(label.digits())?;
    let mut out: Vec<NodeLabel> = rule(label.digits())
        .into_iter()
        .map(|d| NodeLabel::from_raw(d, spec.radix()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn hc_emit(digits: &[u8]) -> Vec<Vec<u8>> {
    (0..digits.len())
        .map(|pos| {
            let mut w = digits.to_vec();
            w[pos] ^= 1;
            w
        })
        .collect()
}

/// `digits[0]` is the top bit `u_n`; bit `k` (1-based from the bottom) sits at
/// position `n - k`. The dimension-`k` link flips bit `k`; when `k` is a
/// multiple of 3 it also flips bit `k - 2` whenever bit `k - 1` is set, which
/// is the (00,00) (01,01) (10,11) (11,10) pairing.
fn vq_emit(digits: &[u8]) -> Vec<Vec<u8>> {
    let n = digits.len();
    let pos = |k: usize| n - k;
    (1..=n)
        .map(|k| {
            let mut w = digits.to_vec();
            w[pos(k)] ^= 1;
            if k % 3 == 0 && digits[pos(k - 1)] == 1 {
                w[pos(k - 2)] ^= 1;
            }
            w
        })
        .collect()
}

fn bh_emit(digits: &[u8]) -> Vec<Vec<u8>> {
    let a0 = digits[0] as i8;
    let sign: i8 = if a0 % 2 == 0 { 1 } else { -1 };
    let mut out = Vec::with_capacity(2 * digits.len());
    for step in [1i8, -1] {
        let mut w = digits.to_vec();
        w[0] = wrap(a0 + step, 4);
        out.push(w);
    }
    for i in 1..digits.len() {
        for step in [1i8, -1] {
            let mut w = digits.to_vec();
            w[0] = wrap(a0 + step, 4);
            w[i] = wrap(digits[i] as i8 + sign, 4);
            out.push(w);
        }
    }
    out
}

/// `(delta a_0, delta a_i)` pairs for the two outer neighbours along dimension `i`.
fn bvh_outer_moves(a0: u8, ai: u8, table: BvhCaseTable) -> [(i8, i8); 2] {
    match (a0, ai) {
        // Case I
        (0 | 3, 0) => [(1, 1), (-1, 1)],
        (0 | 3, 3) => [(1, -1), (-1, -1)],
        // Case II
        (1 | 2, 0 | 3) => [(1, 2), (-1, 2)],
        // Case III
        (0 | 1, 1) => [(1, 2), (-1, -1)],
        (0 | 1, 2) => match table {
            BvhCaseTable::Corrected => [(1, 2), (-1, 1)],
            BvhCaseTable::AsPrinted => [(1, 2), (1, 2)],
        },
        // Case IV
        (2 | 3, 1) => [(1, -1), (-1, 2)],
        (2 | 3, 2) => [(1, 1), (-1, 2)],
        _ => unreachable!("digits are validated to be < 4"),
    }
}

fn bvh_emit(digits: &[u8], table: BvhCaseTable) -> Vec<Vec<u8>> {
    let a0 = digits[0];
    let inner: [i8; 2] = if a0.is_multiple_of(2) {
        [1, -2]
    } else {
        [-1, 2]
    };
    let mut out = Vec::with_capacity(2 * digits.len());
    for step in inner {
        let mut w = digits.to_vec();
        w[0] = wrap(a0 as i8 + step, 4);
        out.push(w);
    }
    for i in 1..digits.len() {
        for (d0, di) in bvh_outer_moves(a0, digits[i], table) {
            let mut w = digits.to_vec();
            w[0] = wrap(a0 as i8 + d0, 4);
            w[i] = wrap(digits[i] as i8 + di, 4);
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, n: u32) -> TopologySpec {
        TopologySpec::new(family, n).unwrap()
    }

    fn labels(spec: &TopologySpec, items: &[&str]) -> Vec<NodeLabel> {
        let mut v: Vec<_> = items.iter().map(|s| spec.parse_label(s).unwrap()).collect();
        v.sort();
        v
    }

    fn nbrs(spec: &TopologySpec, label: &str) -> Vec<NodeLabel> {
        neighbors(spec, &spec.parse_label(label).unwrap()).unwrap()
    }

    #[test]
    fn hypercube_single_bit_flips() {
        let s = spec(Family::Hc, 3);
        assert_eq!(nbrs(&s, "000"), labels(&s, &["001", "010", "100"]));
        let s = spec(Family::Hc, 1);
        assert_eq!(nbrs(&s, "0"), labels(&s, &["1"]));
        let s = spec(Family::Hc, 2);
        assert_eq!(nbrs(&s, "11"), labels(&s, &["01", "10"]));
    }

    #[test]
    fn varietal_examples() {
        let s = spec(Family::Vq, 3);
        assert_eq!(nbrs(&s, "000"), labels(&s, &["001", "010", "100"]));
        let s = spec(Family::Vq, 1);
        assert_eq!(nbrs(&s, "0"), labels(&s, &["1"]));
        // (u2 u1) = 10 pairs with (v2 v1) = 11 across the halves of VQ_3
        let s = spec(Family::Vq, 3);
        assert_eq!(nbrs(&s, "010"), labels(&s, &["000", "011", "111"]));
        assert_eq!(nbrs(&s, "110"), labels(&s, &["011", "100", "111"]));
    }

    #[test]
    fn varietal_rule_one_away_from_multiples_of_three() {
        // n = 4: the top link is a plain bit flip
        let s = spec(Family::Vq, 4);
        let n = nbrs(&s, "0010");
        assert!(n.contains(&s.parse_label("1010").unwrap()));
    }

    #[test]
    fn balanced_hypercube_examples() {
        let s = spec(Family::Bh, 1);
        assert_eq!(nbrs(&s, "0"), labels(&s, &["1", "3"]));
        let s = spec(Family::Bh, 2);
        let expected = labels(&s, &["1,0", "3,0", "1,1", "3,1"]);
        assert_eq!(nbrs(&s, "0,0"), expected);
        assert_eq!(nbrs(&s, "2,0"), expected);
    }

    #[test]
    fn balanced_varietal_examples() {
        let s = spec(Family::Bvh, 1);
        assert_eq!(nbrs(&s, "0"), labels(&s, &["1", "2"]));
        assert_eq!(nbrs(&s, "1"), labels(&s, &["0", "3"]));
        let s = spec(Family::Bvh, 2);
        assert_eq!(nbrs(&s, "0,0"), labels(&s, &["1,0", "2,0", "1,1", "3,1"]));
        // corrected Case III(ii) reaches (3,3)
        assert_eq!(nbrs(&s, "0,2"), labels(&s, &["1,2", "2,2", "1,0", "3,3"]));
    }

    #[test]
    fn as_printed_case_three_duplicates() {
        let raw = emit(Family::Bvh, &[0, 2], BvhCaseTable::AsPrinted);
        assert_eq!(raw.len(), 4);
        assert_eq!(raw[2], raw[3]);
    }

    #[test]
    fn family_mismatch_rejected() {
        let s = spec(Family::Hc, 2);
        let label = s.origin();
        assert!(matches!(
            bvh_neighbors(&s, &label),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn malformed_label_rejected() {
        let s2 = spec(Family::Bvh, 2);
        let s3 = spec(Family::Bvh, 3);
        let label = s3.origin();
        assert!(matches!(
            bvh_neighbors(&s2, &label),
            Err(Error::MalformedLabel(_))
        ));
    }

    #[test]
    fn emission_counts() {
        for n in 1..=4u32 {
            for family in Family::ALL {
                let s = spec(family, n);
                for idx in 0..s.node_count() as usize {
                    let label = s.label_at(idx);
                    assert_eq!(
                        neighbors(&s, &label).unwrap().len() as u32,
                        s.expected_degree(),
                        "{s} {label}"
                    );
                }
            }
        }
    }
}
