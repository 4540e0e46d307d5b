//! Distribution polynomials P_n(x) = sum over S_n of x^pmp and the refined
//! recursions that compute them without scanning S_n.
//!
//! The refined tables split P_n by a structural statistic of sigma (last
//! ascent, last descent, position of 1, or a pair of these). Removing the
//! largest letter, or the letter 1, maps each cell to cells one level down,
//! which yields closed recursions for six marked patterns:
//!
//!   [1]23 by last ascent, [1]32 by last descent (one recursion shape),
//!   1[2]3 and 13[2] by position of 1 (one shape),
//!   1[2]34 by (last ascent, position of 1),
//!   1[2]43 by (last descent, position of 1).
//!
//! Every engine is validated cell by cell against a brute-force bucketing
//! of S_n, and the level sums reproduce the brute-force distribution.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{gamma_pmp, pmp, MarkedPattern, PatternSet};
use crate::perm::{all_perms, perms_with_first, Perm};
use crate::poly::DistPoly;

/// Histogram of a statistic over S_n, sharded over first-entry blocks.
fn histogram<F>(n: usize, stat: F) -> Result<Vec<u64>>
where
    F: Fn(&Perm) -> usize + Sync,
{
    if n <= 1 {
        let mut hist = vec![0u64; n + 1];
        for sigma in all_perms(n)? {
            hist[stat(&sigma)] += 1;
        }
        return Ok(hist);
    }
    all_perms(n)?; // surface cap errors before spawning work
    let shards: Vec<Vec<u64>> = (1..=n as u8)
        .into_par_iter()
        .map(|first| {
            let mut hist = vec![0u64; n + 1];
            for sigma in perms_with_first(n, first).expect("cap checked above") {
                hist[stat(&sigma)] += 1;
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; n + 1];
    for shard in shards {
        for (h, s) in hist.iter_mut().zip(shard) {
            *h += s;
        }
    }
    Ok(hist)
}

/// P_n(x) for a single marked pattern, by scanning S_n.
pub fn dist_brute(n: usize, tau: &MarkedPattern) -> Result<DistPoly> {
    Ok(DistPoly::from_counts(&histogram(n, |sigma| pmp(sigma, tau))?))
}

/// P_n(x) for a pattern set, by scanning S_n; each position counts once no
/// matter how many members match there.
pub fn dist_brute_gamma(n: usize, gamma: &PatternSet) -> Result<DistPoly> {
    Ok(DistPoly::from_counts(&histogram(n, |sigma| {
        gamma_pmp(sigma, gamma)
    })?))
}

/// The structural statistic a refined table is split by. Positions with no
/// ascent (or no descent) bucket as 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Refinement {
    LastAscent,
    LastDescent,
    PositionOfOne,
    LastAscentPositionOfOne,
    LastDescentPositionOfOne,
}

impl Refinement {
    /// The cell sigma belongs to.
    pub fn key_of(self, sigma: &Perm) -> RefKey {
        let t = || sigma.position_of(1).expect("nonempty permutation");
        match self {
            Refinement::LastAscent => RefKey::Single(sigma.last_ascent().unwrap_or(0)),
            Refinement::LastDescent => RefKey::Single(sigma.last_descent().unwrap_or(0)),
            Refinement::PositionOfOne => RefKey::Single(t()),
            Refinement::LastAscentPositionOfOne => {
                RefKey::Pair(sigma.last_ascent().unwrap_or(0), t())
            }
            Refinement::LastDescentPositionOfOne => {
                RefKey::Pair(sigma.last_descent().unwrap_or(0), t())
            }
        }
    }

    fn is_pair(self) -> bool {
        matches!(
            self,
            Refinement::LastAscentPositionOfOne | Refinement::LastDescentPositionOfOne
        )
    }
}

/// Cell index within one level of a refined table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum RefKey {
    Single(usize),
    Pair(usize, usize),
}

fn cell_name(n: usize, key: RefKey) -> String {
    match key {
        RefKey::Single(k) => format!("n={n},k={k}"),
        RefKey::Pair(s, t) => format!("n={n},s={s},t={t}"),
    }
}

fn parse_cell_name(s: &str) -> Result<(usize, RefKey)> {
    let mut fields = BTreeMap::new();
    for part in s.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad cell key {s:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad cell key {s:?}: {e}")))?;
        fields.insert(name.trim().to_string(), value);
    }
    let n = *fields
        .get("n")
        .ok_or_else(|| Error::Parse(format!("cell key {s:?} lacks n")))?;
    match (fields.get("k"), fields.get("s"), fields.get("t")) {
        (Some(&k), None, None) if fields.len() == 2 => Ok((n, RefKey::Single(k))),
        (None, Some(&a), Some(&b)) if fields.len() == 3 => Ok((n, RefKey::Pair(a, b))),
        _ => Err(Error::Parse(format!("cell key {s:?} is neither k nor s,t form"))),
    }
}

/// A by-level table of cell polynomials: cells[(n, key)] sums x^pmp over
/// the sigma in S_n falling in that cell. Absent cells are zero; zero
/// polynomials are never stored. Level sums give the distribution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinedTable {
    kind: Refinement,
    tau: MarkedPattern,
    max_n: usize,
    cells: BTreeMap<(usize, RefKey), DistPoly>,
}

impl RefinedTable {
    pub fn kind(&self) -> Refinement {
        self.kind
    }

    pub fn tau(&self) -> &MarkedPattern {
        &self.tau
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// The cell polynomial, or zero when the cell is absent.
    pub fn poly_or_zero(&self, n: usize, key: RefKey) -> DistPoly {
        self.cells.get(&(n, key)).cloned().unwrap_or_default()
    }

    /// Stored cells of one level, in key order.
    pub fn cells_at(&self, n: usize) -> impl Iterator<Item = (RefKey, &DistPoly)> {
        self.cells
            .range((n, RefKey::Single(0))..=(n, RefKey::Pair(usize::MAX, usize::MAX)))
            .map(|(&(_, key), poly)| (key, poly))
    }

    /// Keys stored at one level.
    pub fn keys_at(&self, n: usize) -> Vec<RefKey> {
        self.cells_at(n).map(|(key, _)| key).collect()
    }

    /// P_n(x): the sum of the level-n cells.
    pub fn distribution(&self, n: usize) -> DistPoly {
        let mut total = DistPoly::zero();
        for (_, poly) in self.cells_at(n) {
            total += poly;
        }
        total
    }

    pub fn to_json(&self) -> String {
        let cells: BTreeMap<String, Vec<String>> = self
            .cells
            .iter()
            .map(|(&(n, key), poly)| (cell_name(n, key), poly.coeff_strings()))
            .collect();
        let repr = TableRepr {
            kind: self.kind,
            tau: self.tau.clone(),
            max_n: self.max_n,
            cells,
        };
        serde_json::to_string_pretty(&repr).expect("table serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<RefinedTable> {
        let repr: TableRepr =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad table json: {e}")))?;
        let mut cells = BTreeMap::new();
        for (name, coeffs) in &repr.cells {
            let (n, key) = parse_cell_name(name)?;
            if matches!(key, RefKey::Pair(..)) != repr.kind.is_pair() {
                return Err(Error::Parse(format!(
                    "cell key {name:?} does not fit refinement {:?}",
                    repr.kind
                )));
            }
            if n > repr.max_n {
                return Err(Error::Parse(format!(
                    "cell key {name:?} exceeds max_n={}",
                    repr.max_n
                )));
            }
            let poly = DistPoly::from_coeff_strings(coeffs)?;
            if poly.is_zero() {
                continue;
            }
            cells.insert((n, key), poly);
        }
        Ok(RefinedTable {
            kind: repr.kind,
            tau: repr.tau,
            max_n: repr.max_n,
            cells,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    kind: Refinement,
    tau: MarkedPattern,
    max_n: usize,
    cells: BTreeMap<String, Vec<String>>,
}

/// One level of a refined table, bucketed by brute force: the oracle the
/// recursion engines are checked against.
pub fn dist_refined_brute(n: usize, tau: &MarkedPattern, kind: Refinement) -> Result<RefinedTable> {
    if n == 0 {
        return Err(Error::Invalid("refined tables start at n = 1".into()));
    }
    let mut hists: BTreeMap<(usize, RefKey), Vec<u64>> = BTreeMap::new();
    for sigma in all_perms(n)? {
        let hist = hists
            .entry((n, kind.key_of(&sigma)))
            .or_insert_with(|| vec![0u64; n + 1]);
        hist[pmp(&sigma, tau)] += 1;
    }
    let cells = hists
        .into_iter()
        .map(|(key, hist)| (key, DistPoly::from_counts(&hist)))
        .collect();
    Ok(RefinedTable {
        kind,
        tau: tau.clone(),
        max_n: n,
        cells,
    })
}

struct Builder {
    cells: BTreeMap<(usize, RefKey), DistPoly>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            cells: BTreeMap::new(),
        }
    }

    fn get(&self, n: usize, key: RefKey) -> DistPoly {
        self.cells.get(&(n, key)).cloned().unwrap_or_default()
    }

    fn set(&mut self, n: usize, key: RefKey, poly: DistPoly) {
        if !poly.is_zero() {
            self.cells.insert((n, key), poly);
        }
    }

    /// Sum of the level-m cells whose first coordinate is s.
    fn agg(&self, m: usize, s: usize) -> DistPoly {
        let mut total = DistPoly::zero();
        for (&(_, key), poly) in self
            .cells
            .range((m, RefKey::Pair(s, 0))..=(m, RefKey::Pair(s, usize::MAX)))
        {
            debug_assert!(matches!(key, RefKey::Pair(a, _) if a == s));
            total += poly;
        }
        total
    }

    fn finish(self, kind: Refinement, tau: &str, max_n: usize) -> RefinedTable {
        RefinedTable {
            kind,
            tau: tau.parse().expect("engine pattern literal"),
            max_n,
            cells: self.cells,
        }
    }
}

/// Shared shape of the two length-3 first-marked recursions. The k = 0 cell
/// of every level is the single permutation with no ascent (or descent);
/// inserting a new largest letter right after position k - 1 of a cell at
/// the level below creates a match at the insertion point in k - 1 ways,
/// the other insertions either land in an existing cell sum or create the
/// lone new extremal permutation.
fn first_marked_len3(max_n: usize, kind: Refinement, tau: &str) -> RefinedTable {
    let mut b = Builder::new();
    if max_n >= 1 {
        b.set(1, RefKey::Single(0), DistPoly::one());
    }
    for n in 2..=max_n {
        b.set(n, RefKey::Single(0), DistPoly::one());
        for k in 1..n {
            let mut p = b
                .get(n - 1, RefKey::Single(k - 1))
                .times_monomial(k as u64 - 1, 1);
            p += &DistPoly::one();
            for l in 1..=k {
                p += &b.get(n - 1, RefKey::Single(l));
            }
            b.set(n, RefKey::Single(k), p);
        }
    }
    b.finish(kind, tau, max_n)
}

/// Refined recursion for [1]23: P_{n,k} over sigma with last ascent at k,
/// P_{n,0} = 1, and for 1 <= k <= n-1
///   P_{n,k} = (k-1) x P_{n-1,k-1} + 1 + sum_{l=1..k} P_{n-1,l}.
pub fn recursion_last_ascent_un123(max_n: usize) -> RefinedTable {
    first_marked_len3(max_n, Refinement::LastAscent, "[1]23")
}

/// Refined recursion for [1]32, split by last descent; same shape as the
/// last-ascent recursion with descents in place of ascents, so the two
/// tables are equal cell for cell and the patterns are equidistributed.
pub fn recursion_last_descent_un132(max_n: usize) -> RefinedTable {
    first_marked_len3(max_n, Refinement::LastDescent, "[1]32")
}

/// Shared shape of the two middle-marked length-3 recursions, split by the
/// position k of the letter 1. Inserting 1 at position k of a permutation
/// one level down either shifts a smaller-position cell into k, or keeps
/// cell k, where each of the n-k-1 slots strictly between k and the end
/// contributes a match factor x.
fn middle_marked_len3(max_n: usize, tau: &str) -> RefinedTable {
    let mut b = Builder::new();
    if max_n >= 1 {
        b.set(1, RefKey::Single(1), DistPoly::one());
    }
    for n in 2..=max_n {
        for k in 1..=n {
            let mut p = DistPoly::zero();
            for l in 1..k {
                p += &b.get(n - 1, RefKey::Single(l));
            }
            if k <= n - 1 {
                let factor = DistPoly::linear(1, (n - k - 1) as u64);
                p += &factor.mul(&b.get(n - 1, RefKey::Single(k)));
            }
            b.set(n, RefKey::Single(k), p);
        }
    }
    b.finish(Refinement::PositionOfOne, tau, max_n)
}

/// Refined recursion for 1[2]3: P_{n,k} over sigma with 1 at position k,
///   P_{n,k} = sum_{l<k} P_{n-1,l} + ((n-k-1) x + 1) P_{n-1,k}
/// with the second term absent at k = n.
pub fn recursion_pos1_1un23(max_n: usize) -> RefinedTable {
    middle_marked_len3(max_n, "1[2]3")
}

/// Refined recursion for 13[2], split by the position of 1; same shape as
/// the 1[2]3 recursion, so the tables agree cell for cell. Together with
/// the diagram symmetry carrying 13[2] to 1[3]2 this equidistributes 1[2]3
/// and 1[3]2.
pub fn recursion_pos1_13un2(max_n: usize) -> RefinedTable {
    middle_marked_len3(max_n, "13[2]")
}

/// Refined recursion for 1[2]34 over pairs (s, t) = (last ascent, position
/// of 1). Cells have t <= s or t = n (the letter 1 either sits at or before
/// the last ascent, or at the end of the decreasing tail); s = 0 only for
/// the decreasing permutation, cell (0, n). Writing A_{m,s} for the sum of
/// the level-m cells with first coordinate s:
///
///   P_{n,s,t} = sum_{l<t} P_{n-1,s-1,l} + (s-1-t) x P_{n-1,s-1,t}
///               + sum_{j=t+1..s} P_{n-1,j,t} + P_{n-1,t,t}      for t < s,
///   P_{n,s,s} = 1 + sum_{i<s} A_{n-1,i},
///   P_{n,s,n} = A_{n-1,s}                                       for s <= n-2.
pub fn recursion_len4_t1(max_n: usize) -> RefinedTable {
    let mut b = Builder::new();
    if max_n >= 1 {
        b.set(1, RefKey::Pair(0, 1), DistPoly::one());
    }
    for n in 2..=max_n {
        b.set(n, RefKey::Pair(0, n), DistPoly::one());
        for s in 1..n {
            for t in 1..s {
                let mut p = DistPoly::zero();
                for l in 1..t {
                    p += &b.get(n - 1, RefKey::Pair(s - 1, l));
                }
                p += &b
                    .get(n - 1, RefKey::Pair(s - 1, t))
                    .times_monomial((s - 1 - t) as u64, 1);
                for j in t + 1..=s {
                    p += &b.get(n - 1, RefKey::Pair(j, t));
                }
                p += &b.get(n - 1, RefKey::Pair(t, t));
                b.set(n, RefKey::Pair(s, t), p);
            }
            let mut p = DistPoly::one();
            for i in 1..s {
                p += &b.agg(n - 1, i);
            }
            b.set(n, RefKey::Pair(s, s), p);
            if s + 2 <= n {
                let p = b.agg(n - 1, s);
                b.set(n, RefKey::Pair(s, n), p);
            }
        }
    }
    b.finish(Refinement::LastAscentPositionOfOne, "1[2]34", max_n)
}

/// Refined recursion for 1[2]43 over pairs (s, t) = (last descent, position
/// of 1). Cells have t < s or t = s + 1 (the letter 1 cannot top a descent,
/// and past the last descent only position s + 1 can hold it); s = 0 only
/// for the identity, cell (0, 1), which also seeds the t = 1 case of the
/// general formula one level up. The t < s formula matches the 1[2]34 one
/// except for the trailing term, and P_{n,t,t} there equals P_{n,t-1,t}
/// here, which forces the two final polynomials to agree.
///
///   P_{n,s,t} = sum_{l<t} P_{n-1,s-1,l} + (s-1-t) x P_{n-1,s-1,t}
///               + sum_{j=t+1..s} P_{n-1,j,t} + P_{n-1,t-1,t}    for t < s,
///   P_{n,s,s+1} = 1 + sum_{i<=s} A_{n-1,i}.
pub fn recursion_len4_t2(max_n: usize) -> RefinedTable {
    let mut b = Builder::new();
    for n in 1..=max_n {
        b.set(n, RefKey::Pair(0, 1), DistPoly::one());
        for s in 1..n {
            for t in 1..s {
                let mut p = DistPoly::zero();
                for l in 1..t {
                    p += &b.get(n - 1, RefKey::Pair(s - 1, l));
                }
                p += &b
                    .get(n - 1, RefKey::Pair(s - 1, t))
                    .times_monomial((s - 1 - t) as u64, 1);
                for j in t + 1..=s {
                    p += &b.get(n - 1, RefKey::Pair(j, t));
                }
                p += &b.get(n - 1, RefKey::Pair(t - 1, t));
                b.set(n, RefKey::Pair(s, t), p);
            }
            let mut p = DistPoly::one();
            for i in 1..=s {
                p += &b.agg(n - 1, i);
            }
            b.set(n, RefKey::Pair(s, s + 1), p);
        }
    }
    b.finish(Refinement::LastDescentPositionOfOne, "1[2]43", max_n)
}

/// One equidistribution class: the patterns sharing P_1..P_{n_max}.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassGroup {
    pub members: Vec<MarkedPattern>,
    pub distributions: Vec<DistPoly>,
}

/// The classes of S_k* by distribution up to n_max; with modulo_symmetry
/// only the lex-least member of each diagram-symmetry orbit is classified.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub k: usize,
    pub n_max: usize,
    pub modulo_symmetry: bool,
    pub classes: Vec<ClassGroup>,
}

/// Groups the marked patterns of length k by their distributions for
/// n = 1..=n_max, computed by brute force. Classes are sorted by first
/// member; equality of the truncated vectors is the classification
/// criterion, so n_max bounds what the result certifies.
pub fn classify(k: usize, n_max: usize, modulo_symmetry: bool) -> Result<Classification> {
    if k == 0 {
        return Err(Error::Invalid("classification needs patterns of length >= 1".into()));
    }
    let mut pats = MarkedPattern::all_of_length(k)?;
    if modulo_symmetry {
        pats.retain(|t| t.symmetry_class().remove(0) == *t);
    }
    let computed: Vec<(MarkedPattern, Vec<DistPoly>)> = pats
        .into_par_iter()
        .map(|tau| {
            let dists = (1..=n_max)
                .map(|n| dist_brute(n, &tau))
                .collect::<Result<Vec<_>>>()?;
            Ok((tau, dists))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<Vec<DistPoly>, Vec<MarkedPattern>> = BTreeMap::new();
    for (tau, dists) in computed {
        groups.entry(dists).or_default().push(tau);
    }
    let mut classes: Vec<ClassGroup> = groups
        .into_iter()
        .map(|(distributions, mut members)| {
            members.sort();
            ClassGroup {
                members,
                distributions,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    Ok(Classification {
        k,
        n_max,
        modulo_symmetry,
        classes,
    })
}

/// C_n, the number of 132-avoiding (equally, of any length-3 classical
/// pattern avoiding) permutations of n.
pub fn catalan(n: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for m in 0..n as u64 {
        c = c * (4 * m + 2) / (m + 2);
    }
    c
}

/// Number of sigma in S_n containing no occurrence of the classical
/// pattern.
pub fn count_avoiders(n: usize, patt: &Perm) -> Result<u64> {
    let mut count = 0;
    for sigma in all_perms(n)? {
        if !sigma.contains(patt) {
            count += 1;
        }
    }
    Ok(count)
}

/// Total number of inversions over the 132-avoiding permutations of n; the
/// x-coefficient of P_{n+1} for the pattern [1]32.
pub fn sum_inversions_avoiding_132(n: usize) -> Result<u64> {
    let patt: Perm = "132".parse().expect("literal");
    let mut total = 0u64;
    for sigma in all_perms(n)? {
        if !sigma.contains(&patt) {
            total += sigma.inversions() as u64;
        }
    }
    Ok(total)
}
