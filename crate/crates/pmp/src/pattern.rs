//! Marked patterns and position-anchored matching.
//!
//! A marked pattern is a permutation of 1..=k with one distinguished
//! element, written with the marked entry bracketed: "1[2]3" marks the 2 in
//! 123. sigma has a match at position l when some occurrence of the
//! underlying pattern uses sigma_l in the marked role. The count of matched
//! positions is the statistic this crate studies.
//!
//! Also here: matching for sets of patterns (a position matches when any
//! member matches there) and quadrant mesh specs (at least a/b/c/d points
//! strictly inside quadrants I/II/III/IV around the point), together with
//! the exact-quadrant translation from a mesh spec to a pattern set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{all_perms, DihedralTransform, Perm};

/// A permutation of 1..=k with one marked position (1-based).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedPattern {
    patt: Perm,
    mark: usize,
}

impl MarkedPattern {
    pub fn new(patt: Perm, mark: usize) -> Result<Self> {
        if patt.is_empty() {
            return Err(Error::Invalid("marked pattern must be nonempty".into()));
        }
        if mark == 0 || mark > patt.n() {
            return Err(Error::MarkOutOfRange {
                mark,
                len: patt.n(),
            });
        }
        Ok(MarkedPattern { patt, mark })
    }

    /// The underlying (unmarked) permutation.
    pub fn underlying(&self) -> &Perm {
        &self.patt
    }

    /// 1-based index of the marked element.
    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn len(&self) -> usize {
        self.patt.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The marked element's value.
    pub fn marked_value(&self) -> u8 {
        self.patt.at(self.mark)
    }

    /// Applies a diagram symmetry; the mark follows its point, so the new
    /// mark sits at the transformed point's column.
    pub fn transform(&self, t: DihedralTransform) -> MarkedPattern {
        let k = self.len();
        let (x, _) = t.apply_point(k, self.mark, self.marked_value() as usize);
        MarkedPattern {
            patt: self.patt.transform(t),
            mark: x,
        }
    }

    /// The orbit of this pattern under all eight diagram symmetries, sorted
    /// and deduplicated. Statistic distributions are constant on an orbit.
    pub fn symmetry_class(&self) -> Vec<MarkedPattern> {
        let mut orbit: Vec<MarkedPattern> = DihedralTransform::ALL
            .into_iter()
            .map(|t| self.transform(t))
            .collect();
        orbit.sort();
        orbit.dedup();
        orbit
    }

    /// All k * k! marked patterns of length k, lexicographic by (pattern,
    /// mark).
    pub fn all_of_length(k: usize) -> Result<Vec<MarkedPattern>> {
        let mut out = Vec::new();
        for patt in all_perms(k)? {
            for mark in 1..=k {
                out.push(MarkedPattern {
                    patt: patt.clone(),
                    mark,
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MarkedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comma = self.len() > 9;
        for (i, &v) in self.patt.entries().iter().enumerate() {
            if comma && i > 0 {
                f.write_str(",")?;
            }
            if i + 1 == self.mark {
                write!(f, "[{v}]")?;
            } else {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MarkedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedPattern({self})")
    }
}

impl FromStr for MarkedPattern {
    type Err = Error;

    /// Parses "1[2]3" or, for lengths over 9, "10,[2],3,...".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('[').ok_or_else(|| {
            Error::Parse(format!("pattern {s:?} has no [marked] entry"))
        })?;
        let close = s.find(']').ok_or_else(|| {
            Error::Parse(format!("pattern {s:?} has an unclosed mark"))
        })?;
        if close < open || s[open + 1..].contains('[') || s[close + 1..].contains(']') {
            return Err(Error::Parse(format!("pattern {s:?} must mark exactly one entry")));
        }
        let cleaned: String = s.chars().filter(|&c| c != '[' && c != ']').collect();
        let cleaned = cleaned.trim_matches(',').replace(",,", ",");
        let entries = crate::perm::parse_entry_list(&cleaned)?;
        let patt = Perm::from_entries(&entries)?;
        // The mark index is one past the number of entries before '['. In
        // comma form entries are the nonempty tokens; in digit form each
        // digit is one entry.
        let prefix = &s[..open];
        let mark = if cleaned.contains(',') {
            prefix.split(',').filter(|t| !t.trim().is_empty()).count() + 1
        } else {
            prefix.chars().filter(char::is_ascii_digit).count() + 1
        };
        MarkedPattern::new(patt, mark)
    }
}

impl Serialize for MarkedPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MarkedPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A nonempty set of marked patterns of one common length, kept sorted and
/// deduplicated. A position matches the set when it matches any member, so
/// positions are never double counted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PatternSet {
    pats: Vec<MarkedPattern>,
}

impl PatternSet {
    pub fn new(mut pats: Vec<MarkedPattern>) -> Result<Self> {
        if pats.is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        let len = pats[0].len();
        if pats.iter().any(|p| p.len() != len) {
            return Err(Error::MixedPatternLengths);
        }
        pats.sort();
        pats.dedup();
        Ok(PatternSet { pats })
    }

    pub fn patterns(&self) -> &[MarkedPattern] {
        &self.pats
    }

    pub fn len(&self) -> usize {
        self.pats.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Common length of the member patterns.
    pub fn pattern_len(&self) -> usize {
        self.pats[0].len()
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pats.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for PatternSet {
    type Err = Error;

    /// Parses "{1[2]3,1[3]2}" (braces optional).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .unwrap_or(s);
        // Commas both separate members and, in long-form patterns, separate
        // entries. Accumulate comma-split tokens greedily until they parse
        // as a pattern; compact members (length <= 9) are single tokens.
        let mut pats = Vec::new();
        let mut cur = String::new();
        for token in inner.split(',') {
            if cur.is_empty() && token.trim().is_empty() {
                continue;
            }
            if !cur.is_empty() {
                cur.push(',');
            }
            cur.push_str(token);
            if let Ok(pat) = cur.parse::<MarkedPattern>() {
                pats.push(pat);
                cur.clear();
            }
        }
        if !cur.is_empty() {
            return Err(Error::Parse(format!("unparsed pattern set tail {cur:?}")));
        }
        PatternSet::new(pats)
    }
}

impl Serialize for PatternSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PatternSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Does sigma have a tau-match at position l (1-based)? Backtracking over
/// pattern slots left to right; the marked slot is pinned to position l and
/// candidate values are pruned to the interval allowed by the slots already
/// placed. Panics when l is out of 1..=n.
pub fn has_match_at(sigma: &Perm, tau: &MarkedPattern, l: usize) -> bool {
    let n = sigma.n();
    assert!(l >= 1 && l <= n, "position {l} out of 1..={n}");
    let k = tau.len();
    let u = tau.mark();
    // Room for the slots before and after the pinned one.
    if l < u || n - l < k - u {
        return false;
    }
    let patt = tau.underlying().entries();
    let vals = sigma.entries();
    let mut chosen = vec![0u8; k];
    search(vals, patt, u - 1, l - 1, &mut chosen, 0, 0)
}

/// DFS helper: assign pattern slot `slot` to a position >= `from` (0-based),
/// with slot `pin_slot` forced to position `pin_pos`.
fn search(
    vals: &[u8],
    patt: &[u8],
    pin_slot: usize,
    pin_pos: usize,
    chosen: &mut [u8],
    slot: usize,
    from: usize,
) -> bool {
    let k = patt.len();
    if slot == k {
        return true;
    }
    let (lo, hi) = window(patt, chosen, slot);
    if slot == pin_slot {
        let v = vals[pin_pos] as i32;
        if from <= pin_pos && v > lo && v < hi {
            chosen[slot] = vals[pin_pos];
            if search(vals, patt, pin_slot, pin_pos, chosen, slot + 1, pin_pos + 1) {
                return true;
            }
        }
        return false;
    }
    // Positions for slots before the pinned slot stay below it; later slots
    // run to the end, leaving room for the slots still unassigned.
    let end = if slot < pin_slot {
        pin_pos - (pin_slot - slot - 1)
    } else {
        vals.len() - (k - slot - 1)
    };
    for pos in from..end {
        if pos == pin_pos {
            continue;
        }
        let v = vals[pos] as i32;
        if v > lo && v < hi {
            chosen[slot] = vals[pos];
            if search(vals, patt, pin_slot, pin_pos, chosen, slot + 1, pos + 1) {
                return true;
            }
        }
    }
    false
}

fn window(patt: &[u8], chosen: &[u8], slot: usize) -> (i32, i32) {
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

/// Reference matcher: enumerate every k-subset of positions through position
/// l in the marked role and reduce the subsequence. Slow and obviously
/// correct; the optimized matcher must agree with it everywhere.
pub fn has_match_at_exhaustive(sigma: &Perm, tau: &MarkedPattern, l: usize) -> bool {
    let n = sigma.n();
    assert!(l >= 1 && l <= n, "position {l} out of 1..={n}");
    let k = tau.len();
    let u = tau.mark();
    if k > n || l < u || n - l < k - u {
        return false;
    }
    let mut idx = Vec::with_capacity(k);
    pick(sigma, tau, l, &mut idx, 1)
}

fn pick(sigma: &Perm, tau: &MarkedPattern, l: usize, idx: &mut Vec<usize>, next: usize) -> bool {
    let k = tau.len();
    let u = tau.mark();
    if idx.len() == k {
        let word: Vec<u32> = idx.iter().map(|&i| sigma.at(i) as u32).collect();
        return crate::perm::reduce(&word).map_or(false, |red| &red == tau.underlying());
    }
    let slot = idx.len() + 1;
    if slot == u {
        if next <= l {
            idx.push(l);
            if pick(sigma, tau, l, idx, l + 1) {
                return true;
            }
            idx.pop();
        }
        return false;
    }
    let max = if slot < u { l - 1 } else { sigma.n() };
    for i in next..=max {
        if i == l {
            continue;
        }
        idx.push(i);
        if pick(sigma, tau, l, idx, i + 1) {
            return true;
        }
        idx.pop();
    }
    false
}

/// Number of positions at which sigma has a tau-match.
pub fn pmp(sigma: &Perm, tau: &MarkedPattern) -> usize {
    (1..=sigma.n())
        .filter(|&l| has_match_at(sigma, tau, l))
        .count()
}

/// Does any member of the set match at position l?
pub fn gamma_has_match_at(sigma: &Perm, gamma: &PatternSet, l: usize) -> bool {
    gamma.patterns().iter().any(|tau| has_match_at(sigma, tau, l))
}

/// Number of positions at which sigma matches the set; a position matching
/// several members counts once.
pub fn gamma_pmp(sigma: &Perm, gamma: &PatternSet) -> usize {
    (1..=sigma.n())
        .filter(|&l| gamma_has_match_at(sigma, gamma, l))
        .count()
}

/// Quadrant mesh spec: thresholds for the four quadrants around a point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MmpSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl MmpSpec {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        MmpSpec { a, b, c, d }
    }

    /// The all-zero spec matches every position of every permutation.
    pub fn is_trivial(self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0
    }

    /// Length of the patterns that realize this spec exactly.
    pub fn pattern_len(self) -> usize {
        self.a + self.b + self.c + self.d + 1
    }
}

impl fmt::Display for MmpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mmp({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for MmpSpec {
    type Err = Error;

    /// Parses "mmp(2,0,2,0)" or bare "2,0,2,0".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("mmp(")
            .and_then(|rest| rest.strip_suffix(')'))
            .unwrap_or(s);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("mesh spec {s:?} needs four counts")));
        }
        let nums = parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad count {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MmpSpec::new(nums[0], nums[1], nums[2], nums[3]))
    }
}

/// Points of sigma strictly inside each quadrant around (l, sigma_l):
/// (I, II, III, IV) = (above right, above left, below left, below right).
fn quadrant_counts(entries: &[u8], l: usize) -> (usize, usize, usize, usize) {
    let pivot = entries[l - 1];
    let (mut q1, mut q2, mut q3, mut q4) = (0, 0, 0, 0);
    for (i0, &v) in entries.iter().enumerate() {
        let i = i0 + 1;
        if i == l {
            continue;
        }
        match (i > l, v > pivot) {
            (true, true) => q1 += 1,
            (false, true) => q2 += 1,
            (false, false) => q3 += 1,
            (true, false) => q4 += 1,
        }
    }
    (q1, q2, q3, q4)
}

/// Does sigma match the mesh spec at position l (at least a/b/c/d points in
/// quadrants I/II/III/IV around the point)? Panics when l is out of range.
pub fn mmp_match_at(sigma: &Perm, spec: &MmpSpec, l: usize) -> bool {
    let n = sigma.n();
    assert!(l >= 1 && l <= n, "position {l} out of 1..={n}");
    let (q1, q2, q3, q4) = quadrant_counts(sigma.entries(), l);
    q1 >= spec.a && q2 >= spec.b && q3 >= spec.c && q4 >= spec.d
}

/// Number of positions matching the mesh spec.
pub fn mmp_count(sigma: &Perm, spec: &MmpSpec) -> usize {
    (1..=sigma.n())
        .filter(|&l| mmp_match_at(sigma, spec, l))
        .count()
}

/// The set of marked patterns of length a+b+c+d+1 whose marked point has
/// EXACTLY a/b/c/d pattern points in quadrants I/II/III/IV. Matching this
/// set at a position is equivalent to matching the mesh spec there. The
/// trivial all-zero spec is rejected.
pub fn mmp_to_gamma(spec: &MmpSpec) -> Result<PatternSet> {
    if spec.is_trivial() {
        return Err(Error::TrivialMeshSpec);
    }
    let k = spec.pattern_len();
    let mut pats = Vec::new();
    for patt in all_perms(k)? {
        for mark in 1..=k {
            if quadrant_counts(patt.entries(), mark) == (spec.a, spec.b, spec.c, spec.d) {
                pats.push(MarkedPattern {
                    patt: patt.clone(),
                    mark,
                });
            }
        }
    }
    PatternSet::new(pats)
}
