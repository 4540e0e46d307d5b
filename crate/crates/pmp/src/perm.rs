//! Permutations in one-line notation, their statistics, the dihedral action
//! on permutation diagrams, and lexicographic enumeration of S_n.
//!
//! The diagram of sigma places a point in column i (left to right) and row
//! sigma_i (bottom to top). All geometric operations in this crate use that
//! convention.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard cap for full S_n enumeration: 11! ~ 4.0e7 permutations.
pub const HARD_CAP: usize = 11;

/// A permutation of 1..=n in one-line notation. n = 0 is allowed (the empty
/// permutation) so that recursive constructions have a base case.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Perm {
    vals: Vec<u8>,
}

impl Perm {
    /// Builds from one-line entries, checking they are a permutation of 1..=n.
    pub fn from_entries(entries: &[u8]) -> Result<Self> {
        let n = entries.len();
        if n > u8::MAX as usize {
            return Err(Error::NotPermutation(format!("length {n} too large")));
        }
        let mut seen = vec![false; n + 1];
        for &v in entries {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::NotPermutation(format!(
                    "entries {entries:?} are not a permutation of 1..={n}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Perm {
            vals: entries.to_vec(),
        })
    }

    /// The identity permutation 1 2 ... n.
    pub fn identity(n: usize) -> Self {
        Perm {
            vals: (1..=n as u8).collect(),
        }
    }

    /// The decreasing permutation n ... 2 1.
    pub fn decreasing(n: usize) -> Self {
        Perm {
            vals: (1..=n as u8).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// sigma_i, 1-based. Panics if i is out of 1..=n.
    pub fn at(&self, i: usize) -> u8 {
        self.vals[i - 1]
    }

    /// One-line entries, 0-based slice.
    pub fn entries(&self) -> &[u8] {
        &self.vals
    }

    /// 1-based position of value v, if present.
    pub fn position_of(&self, v: u8) -> Option<usize> {
        self.vals.iter().position(|&x| x == v).map(|i| i + 1)
    }

    /// Group inverse: the permutation mapping sigma_i back to i. In diagram
    /// terms this reflects across the main diagonal.
    pub fn inverse(&self) -> Self {
        let mut vals = vec![0u8; self.n()];
        for (i, &v) in self.vals.iter().enumerate() {
            vals[v as usize - 1] = i as u8 + 1;
        }
        Perm { vals }
    }

    /// sigma_i -> sigma_{n+1-i}: reflects the diagram across its vertical axis.
    pub fn reverse(&self) -> Self {
        let mut vals = self.vals.clone();
        vals.reverse();
        Perm { vals }
    }

    /// sigma_i -> n+1-sigma_i: reflects the diagram across its horizontal axis.
    pub fn complement(&self) -> Self {
        let n = self.n() as u8;
        Perm {
            vals: self.vals.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// Number of pairs i < j with sigma_i > sigma_j.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.vals[i] > self.vals[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Largest k with sigma_k < sigma_{k+1}; None when sigma is strictly
    /// decreasing. After the last ascent the suffix is strictly decreasing.
    /// Panics on the empty permutation.
    pub fn last_ascent(&self) -> Option<usize> {
        assert!(!self.is_empty(), "last_ascent needs a nonempty permutation");
        (1..self.n())
            .rev()
            .find(|&k| self.vals[k - 1] < self.vals[k])
    }

    /// Largest k with sigma_k > sigma_{k+1}; None when sigma is strictly
    /// increasing. Panics on the empty permutation.
    pub fn last_descent(&self) -> Option<usize> {
        assert!(!self.is_empty(), "last_descent needs a nonempty permutation");
        (1..self.n())
            .rev()
            .find(|&k| self.vals[k - 1] > self.vals[k])
    }

    /// Classical (unmarked) pattern containment: does some subsequence of
    /// self reduce to patt?
    pub fn contains(&self, patt: &Perm) -> bool {
        word_contains(&self.vals, patt.entries())
    }

    /// Applies a dihedral symmetry to the diagram and reads off the
    /// transformed permutation.
    pub fn transform(&self, t: DihedralTransform) -> Self {
        let n = self.n();
        let mut vals = vec![0u8; n];
        for (i, &v) in self.vals.iter().enumerate() {
            let (x, y) = t.apply_point(n, i + 1, v as usize);
            vals[x - 1] = y as u8;
        }
        Perm { vals }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

/// Text form: a digit string for n <= 9 ("2653"), comma-separated for
/// n >= 10 ("10,2,3,1,4,5,6,7,8,9"). The empty permutation prints as "".
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &v in &self.vals {
                write!(f, "{v}")?;
            }
        } else {
            let parts: Vec<String> = self.vals.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation string".into()));
        }
        let entries = parse_entry_list(s)?;
        Perm::from_entries(&entries)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses "2653" (digits) or "10,2,3,..." (comma separated) into raw entries.
pub(crate) fn parse_entry_list(s: &str) -> Result<Vec<u8>> {
    if s.contains(',') {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::Parse(format!("bad entry {part:?}: {e}")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
            })
            .collect()
    }
}

/// Reduction of a word with distinct letters to a permutation: the i-th
/// smallest letter becomes i. Errors when letters repeat.
pub fn reduce(word: &[u32]) -> Result<Perm> {
    let ranks = reduce_to_ranks(word);
    let n = word.len();
    let mut seen = vec![false; n + 1];
    for &r in &ranks {
        let r = r as usize;
        if seen[r] {
            return Err(Error::NotPermutation(format!(
                "word {word:?} has repeated letters; not reducible to a permutation"
            )));
        }
        seen[r] = true;
    }
    Perm::from_entries(&ranks.iter().map(|&r| r as u8).collect::<Vec<_>>())
}

/// Rank form of an arbitrary word: each letter is replaced by 1 + the number
/// of distinct smaller letters, so ties receive equal rank (25725 -> 12312).
pub fn reduce_to_ranks(word: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = word.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    word.iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32 + 1)
        .collect()
}

/// Does the word (distinct letters assumed) contain the pattern as a
/// subsequence in the same relative order? Backtracking over pattern slots
/// with value-interval pruning.
pub(crate) fn word_contains(word: &[u8], patt: &[u8]) -> bool {
    let k = patt.len();
    if k == 0 {
        return true;
    }
    if k > word.len() {
        return false;
    }
    let mut chosen = vec![0u8; k];
    fill_slot(word, patt, &mut chosen, 0, 0)
}

fn fill_slot(word: &[u8], patt: &[u8], chosen: &mut [u8], slot: usize, from: usize) -> bool {
    let k = patt.len();
    if slot == k {
        return true;
    }
    // Candidate values must fall strictly between the values already chosen
    // for the nearest smaller and larger pattern roles.
    let (lo, hi) = value_window(patt, chosen, slot);
    for pos in from..=word.len() - (k - slot) {
        let v = word[pos];
        if (v as i32) > lo && (v as i32) < hi {
            chosen[slot] = v;
            if fill_slot(word, patt, chosen, slot + 1, pos + 1) {
                return true;
            }
        }
    }
    false
}

/// Bounds (exclusive) that a value for `slot` must satisfy against the
/// already-assigned slots 0..slot.
fn value_window(patt: &[u8], chosen: &[u8], slot: usize) -> (i32, i32) {
    let mut lo = 0i32;
    let mut hi = 256i32;
    for j in 0..slot {
        if patt[j] < patt[slot] {
            lo = lo.max(chosen[j] as i32);
        } else {
            hi = hi.min(chosen[j] as i32);
        }
    }
    (lo, hi)
}

/// The eight symmetries of the square acting on permutation diagrams.
/// rotate90 is the counterclockwise quarter turn.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DihedralTransform {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    ReflectHorizontal,
    ReflectVertical,
    ReflectMainDiagonal,
    ReflectAntiDiagonal,
}

impl DihedralTransform {
    pub const ALL: [DihedralTransform; 8] = [
        DihedralTransform::Identity,
        DihedralTransform::Rotate90,
        DihedralTransform::Rotate180,
        DihedralTransform::Rotate270,
        DihedralTransform::ReflectHorizontal,
        DihedralTransform::ReflectVertical,
        DihedralTransform::ReflectMainDiagonal,
        DihedralTransform::ReflectAntiDiagonal,
    ];

    /// Encoding as (swap x/y first, then negate x, negate y); negation of a
    /// coordinate c means n+1-c.
    fn flags(self) -> (bool, bool, bool) {
        match self {
            DihedralTransform::Identity => (false, false, false),
            DihedralTransform::Rotate90 => (true, true, false),
            DihedralTransform::Rotate180 => (false, true, true),
            DihedralTransform::Rotate270 => (true, false, true),
            DihedralTransform::ReflectHorizontal => (false, false, true),
            DihedralTransform::ReflectVertical => (false, true, false),
            DihedralTransform::ReflectMainDiagonal => (true, false, false),
            DihedralTransform::ReflectAntiDiagonal => (true, true, true),
        }
    }

    fn from_flags(flags: (bool, bool, bool)) -> Self {
        Self::ALL
            .into_iter()
            .find(|t| t.flags() == flags)
            .expect("all eight flag triples are covered")
    }

    /// Image of the point (x, y) in an n x n diagram.
    pub fn apply_point(self, n: usize, x: usize, y: usize) -> (usize, usize) {
        let (swap, negx, negy) = self.flags();
        let (mut x, mut y) = if swap { (y, x) } else { (x, y) };
        if negx {
            x = n + 1 - x;
        }
        if negy {
            y = n + 1 - y;
        }
        (x, y)
    }

    /// The transform "self, then other".
    pub fn compose(self, other: DihedralTransform) -> DihedralTransform {
        let (sa, nxa, nya) = self.flags();
        let (sb, nxb, nyb) = other.flags();
        let (nxa, nya) = if sb { (nya, nxa) } else { (nxa, nya) };
        DihedralTransform::from_flags((sa ^ sb, nxa ^ nxb, nya ^ nyb))
    }

    pub fn inverse(self) -> DihedralTransform {
        Self::ALL
            .into_iter()
            .find(|t| self.compose(*t) == DihedralTransform::Identity)
            .expect("group element has an inverse")
    }
}

impl fmt::Display for DihedralTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DihedralTransform::Identity => "identity",
            DihedralTransform::Rotate90 => "rotate90",
            DihedralTransform::Rotate180 => "rotate180",
            DihedralTransform::Rotate270 => "rotate270",
            DihedralTransform::ReflectHorizontal => "reflectHorizontal",
            DihedralTransform::ReflectVertical => "reflectVertical",
            DihedralTransform::ReflectMainDiagonal => "reflectMainDiagonal",
            DihedralTransform::ReflectAntiDiagonal => "reflectAntiDiagonal",
        };
        f.write_str(name)
    }
}

/// Standard in-place successor in lexicographic order; false at the last
/// arrangement.
fn next_arrangement(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic stream of the permutations with a fixed prefix followed by
/// all arrangements of the remaining values.
pub struct LexPerms {
    prefix: Vec<u8>,
    rest: Vec<u8>,
    pending: bool,
}

impl Iterator for LexPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if !self.pending {
            return None;
        }
        let mut vals = Vec::with_capacity(self.prefix.len() + self.rest.len());
        vals.extend_from_slice(&self.prefix);
        vals.extend_from_slice(&self.rest);
        self.pending = next_arrangement(&mut self.rest);
        Some(Perm { vals })
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// All of S_n in lexicographic order, capped at `cap`.
pub fn all_perms_capped(n: usize, cap: usize) -> Result<LexPerms> {
    check_cap(n, cap)?;
    Ok(LexPerms {
        prefix: Vec::new(),
        rest: (1..=n as u8).collect(),
        pending: true,
    })
}

/// All of S_n in lexicographic order, capped at [`HARD_CAP`].
pub fn all_perms(n: usize) -> Result<LexPerms> {
    all_perms_capped(n, HARD_CAP)
}

/// The lexicographic block of S_n whose first entry is `first`. The n blocks
/// partition S_n, which is how brute-force scans shard for parallel runs.
pub fn perms_with_first(n: usize, first: u8) -> Result<LexPerms> {
    check_cap(n, HARD_CAP)?;
    if first == 0 || first as usize > n {
        return Err(Error::Invalid(format!("first entry {first} not in 1..={n}")));
    }
    Ok(LexPerms {
        prefix: vec![first],
        rest: (1..=n as u8).filter(|&v| v != first).collect(),
        pending: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[2, 6, 5, 3]).unwrap(), p("1432"));
        assert_eq!(reduce(&[9, 5, 1]).unwrap(), p("321"));
        assert!(reduce(&[2, 5, 7, 2, 5]).is_err());
        assert_eq!(reduce_to_ranks(&[2, 5, 7, 2, 5]), vec![1, 2, 3, 1, 2]);
        assert_eq!(reduce(&[]).unwrap(), Perm::default());
    }

    #[test]
    fn stats_examples() {
        assert_eq!(p("2143").inversions(), 2);
        assert_eq!(Perm::identity(4).inversions(), 0);
        assert_eq!(Perm::decreasing(4).inversions(), 6);
        assert_eq!(p("1342").last_ascent(), Some(2));
        assert_eq!(p("312").last_descent(), Some(1));
        assert_eq!(Perm::decreasing(5).last_ascent(), None);
        assert_eq!(Perm::identity(5).last_descent(), None);
        assert_eq!(p("1").last_ascent(), None);
    }

    #[test]
    fn containment_examples() {
        assert!(p("15324").contains(&p("123")));
        assert!(p("647913258").contains(&p("1234")));
        assert!(!p("321").contains(&p("12")));
        assert!(p("123").contains(&Perm::default()));
        // 132-avoidance is checked through this path later on.
        assert!(!p("123").contains(&p("132")));
    }

    #[test]
    fn inverse_reverse_complement() {
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("231").reverse(), p("132"));
        assert_eq!(p("231").complement(), p("213"));
    }

    #[test]
    fn transform_matches_named_operations() {
        for sigma in all_perms(5).unwrap() {
            assert_eq!(
                sigma.transform(DihedralTransform::ReflectMainDiagonal),
                sigma.inverse()
            );
            assert_eq!(
                sigma.transform(DihedralTransform::ReflectVertical),
                sigma.reverse()
            );
            assert_eq!(
                sigma.transform(DihedralTransform::ReflectHorizontal),
                sigma.complement()
            );
            assert_eq!(sigma.transform(DihedralTransform::Identity), sigma);
        }
    }

    #[test]
    fn transforms_form_a_group_action() {
        let sigma = p("25417683");
        for a in DihedralTransform::ALL {
            assert_eq!(
                sigma.transform(a).transform(a.inverse()),
                sigma,
                "inverse of {a}"
            );
            for b in DihedralTransform::ALL {
                assert_eq!(
                    sigma.transform(a).transform(b),
                    sigma.transform(a.compose(b)),
                    "compose {a} then {b}"
                );
            }
        }
    }

    #[test]
    fn rotation_composition_table() {
        use DihedralTransform::*;
        assert_eq!(Rotate90.compose(Rotate90), Rotate180);
        assert_eq!(Rotate90.compose(Rotate270), Identity);
        assert_eq!(ReflectMainDiagonal.compose(ReflectMainDiagonal), Identity);
        // Vertical then horizontal reflection is the half turn.
        assert_eq!(ReflectVertical.compose(ReflectHorizontal), Rotate180);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<Perm> = all_perms(3).unwrap().collect();
        let shown: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["123", "132", "213", "231", "312", "321"]);

        let mut total = 0usize;
        for first in 1..=4u8 {
            let block: Vec<Perm> = perms_with_first(4, first).unwrap().collect();
            assert_eq!(block.len(), 6);
            assert!(block.iter().all(|p| p.at(1) == first));
            total += block.len();
        }
        assert_eq!(total, 24);

        assert!(all_perms(HARD_CAP + 1).is_err());
        assert_eq!(all_perms(0).unwrap().count(), 1);
        assert_eq!(all_perms(1).unwrap().count(), 1);
    }

    #[test]
    fn text_roundtrip() {
        for s in ["1", "24513", "123456789"] {
            assert_eq!(p(s).to_string(), s);
        }
        let long = Perm::from_entries(&[10, 2, 3, 1, 4, 5, 6, 7, 8, 9]).unwrap();
        assert_eq!(long.to_string(), "10,2,3,1,4,5,6,7,8,9");
        assert_eq!(long.to_string().parse::<Perm>().unwrap(), long);
        assert!("".parse::<Perm>().is_err());
        assert!("120".parse::<Perm>().is_err());
        assert!("22".parse::<Perm>().is_err());
    }

    #[test]
    fn position_and_access() {
        let sigma = p("24513");
        assert_eq!(sigma.at(2), 4);
        assert_eq!(sigma.position_of(5), Some(3));
        assert_eq!(sigma.position_of(9), None);
    }
}
