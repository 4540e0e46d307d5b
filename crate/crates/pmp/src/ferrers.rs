//! Board reduction behind the tail-extension equivalences.
//!
//! Fix a tail pattern and let tau be its reduction.  A cell (i, j) of a
//! permutation diagram is dominant when tau occurs strictly above row i and
//! strictly right of column j; the dominant cells form a Ferrers shape.
//! Splitting sigma into its non-dominant points Q and a filling of the board
//! lambda(Q) turns the patterns `1[2]tail`, `[2]1tail`, `2[1]tail` into the
//! two-letter patterns `1[2]` and `[2]1` on fillings, whose distribution over
//! any fillable board is the explicit product
//! prod_i (1 + (lambda_i - (k - i + 1)) x).  Summing the product over the
//! boards lambda(Q) proves the three tail extensions equidistributed.
//!
//! Rows are indexed bottom to top, columns left to right, so lambda_1 is the
//! longest (bottom) row; cell (r, c) lies on the board iff c <= lambda_r.

use crate::dist::{dist_brute, dist_brute_gamma};
use crate::error::{Error, Result};
use crate::pattern::{pmp, MarkedPattern, PatternSet};
use crate::perm::{all_perms, word_contains, Perm};
use crate::poly::DistPoly;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// A Ferrers board: weakly decreasing positive row lengths, bottom row first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FerrersBoard {
    rows: Vec<usize>,
}

impl FerrersBoard {
    /// Validates that `rows` is weakly decreasing with positive entries.
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        for w in rows.windows(2) {
            if w[1] > w[0] {
                return Err(Error::Invalid(format!(
                    "row lengths must weakly decrease bottom to top, got {rows:?}"
                )));
            }
        }
        if rows.iter().any(|&r| r == 0) {
            return Err(Error::Invalid("row lengths must be positive".into()));
        }
        Ok(FerrersBoard { rows })
    }

    pub fn empty() -> Self {
        FerrersBoard { rows: Vec::new() }
    }

    /// Row lengths, bottom row first.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// A filling (one x per row and per column) exists iff
    /// k - i + 1 <= lambda_i <= k for every row i of a k-row board.
    pub fn is_fillable(&self) -> bool {
        let k = self.rows.len();
        self.rows
            .iter()
            .enumerate()
            .all(|(idx, &len)| k - idx <= len && len <= k)
    }
}

impl fmt::Display for FerrersBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for FerrersBoard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FerrersBoard::empty());
        }
        let rows = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad row length {part:?}: {e}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        FerrersBoard::new(rows)
    }
}

impl Serialize for FerrersBoard {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FerrersBoard {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A filling of a Ferrers board: one x per row and per column.
///
/// `placement[i]` is the column (1-based) of the x in row i + 1, bottom up.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoardFilling {
    board: FerrersBoard,
    placement: Vec<usize>,
}

impl BoardFilling {
    /// Validates that every row and column holds exactly one x inside the
    /// board.
    pub fn new(board: FerrersBoard, placement: Vec<usize>) -> Result<Self> {
        let k = board.num_rows();
        if placement.len() != k {
            return Err(Error::ShapeMismatch(format!(
                "{} placements for a {k}-row board",
                placement.len()
            )));
        }
        let mut seen = vec![false; k + 1];
        for (idx, &col) in placement.iter().enumerate() {
            if col == 0 || col > board.rows()[idx] {
                return Err(Error::Invalid(format!(
                    "column {col} outside row {} of board {board}",
                    idx + 1
                )));
            }
            if seen[col] {
                return Err(Error::Invalid(format!("column {col} used twice")));
            }
            seen[col] = true;
        }
        Ok(BoardFilling { board, placement })
    }

    pub fn board(&self) -> &FerrersBoard {
        &self.board
    }

    /// Column of the x in each row, bottom row first (1-based).
    pub fn placement(&self) -> &[usize] {
        &self.placement
    }
}

impl fmt::Display for BoardFilling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.placement.iter().map(|c| c.to_string()).collect();
        write!(f, "{} on {}", parts.join(","), self.board)
    }
}

/// The occupied non-dominant cells of a permutation diagram, as (row, column)
/// pairs in [n] x [n], at most one per row and per column.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NdSet {
    n: usize,
    cells: BTreeSet<(usize, usize)>,
}

impl NdSet {
    pub fn new(n: usize, cells: BTreeSet<(usize, usize)>) -> Result<Self> {
        let mut rows_seen = BTreeSet::new();
        let mut cols_seen = BTreeSet::new();
        for &(r, c) in &cells {
            if r == 0 || r > n || c == 0 || c > n {
                return Err(Error::InconsistentNdSet(format!(
                    "cell ({r}, {c}) outside the {n} x {n} diagram"
                )));
            }
            if !rows_seen.insert(r) || !cols_seen.insert(c) {
                return Err(Error::InconsistentNdSet(format!(
                    "row or column of cell ({r}, {c}) occupied twice"
                )));
            }
        }
        Ok(NdSet { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &BTreeSet<(usize, usize)> {
        &self.cells
    }
}

/// Length of the dominant part of each row, bottom row first, computed from
/// the given (row, column) points: cell (i, j) is dominant iff `tau` occurs
/// among the points strictly above row i and strictly right of column j.
fn dominant_profile(points: &[(usize, usize)], n: usize, tau: &Perm) -> Vec<usize> {
    let mut by_col: Vec<(usize, usize)> = points.to_vec();
    by_col.sort_by_key(|&(_, c)| c);
    let mut profile = vec![0usize; n];
    let mut prev = n;
    for i in 1..=n {
        let mut len = 0;
        for j in (1..=prev).rev() {
            let word: Vec<u8> = by_col
                .iter()
                .filter(|&&(r, c)| r > i && c > j)
                .map(|&(r, _)| r as u8)
                .collect();
            if word_contains(&word, tau.entries()) {
                len = j;
                break;
            }
        }
        profile[i - 1] = len;
        prev = len;
        if len == 0 {
            break;
        }
    }
    profile
}

fn diagram_points(sigma: &Perm) -> Vec<(usize, usize)> {
    sigma
        .entries()
        .iter()
        .enumerate()
        .map(|(idx, &v)| (v as usize, idx + 1))
        .collect()
}

/// Dominant row lengths of the diagram of `sigma` relative to `tau`,
/// bottom row first.
pub fn dominant_rows(sigma: &Perm, tau: &Perm) -> Vec<usize> {
    dominant_profile(&diagram_points(sigma), sigma.n(), tau)
}

/// The dominant cells themselves, as (row, column) pairs.
pub fn dominant_cells(sigma: &Perm, tau: &Perm) -> BTreeSet<(usize, usize)> {
    dominant_rows(sigma, tau)
        .iter()
        .enumerate()
        .flat_map(|(idx, &len)| (1..=len).map(move |c| (idx + 1, c)))
        .collect()
}

/// The points of `sigma` sitting in non-dominant cells relative to `tau`.
pub fn nd_set(sigma: &Perm, tau: &Perm) -> NdSet {
    let profile = dominant_rows(sigma, tau);
    let cells = diagram_points(sigma)
        .into_iter()
        .filter(|&(r, c)| c > profile[r - 1])
        .collect();
    NdSet {
        n: sigma.n(),
        cells,
    }
}

/// Dominant row lengths recovered from the non-dominant points alone: any
/// dominance witness can be moved onto non-dominant points, so `q` already
/// determines the region.
pub fn dominant_rows_from_nd(q: &NdSet, tau: &Perm) -> Vec<usize> {
    let points: Vec<(usize, usize)> = q.cells.iter().copied().collect();
    dominant_profile(&points, q.n, tau)
}

/// The board left after striking the rows and columns of `q` out of the
/// dominant region: row i of the board is the i-th free row (bottom up) and
/// lambda_i counts the free columns within its dominant length.
///
/// Errors when no permutation has non-dominant set `q`: a cell of `q` inside
/// the recovered dominant region, or a free row left with no dominant cell.
pub fn lambda_of(q: &NdSet, tau: &Perm) -> Result<FerrersBoard> {
    let profile = dominant_rows_from_nd(q, tau);
    for &(r, c) in &q.cells {
        if c <= profile[r - 1] {
            return Err(Error::InconsistentNdSet(format!(
                "cell ({r}, {c}) lies inside the dominant region"
            )));
        }
    }
    let used_rows: BTreeSet<usize> = q.cells.iter().map(|&(r, _)| r).collect();
    let used_cols: BTreeSet<usize> = q.cells.iter().map(|&(_, c)| c).collect();
    let free_rows: Vec<usize> = (1..=q.n).filter(|r| !used_rows.contains(r)).collect();
    let free_cols: Vec<usize> = (1..=q.n).filter(|c| !used_cols.contains(c)).collect();
    let rows: Vec<usize> = free_rows
        .iter()
        .map(|&r| free_cols.iter().filter(|&&c| c <= profile[r - 1]).count())
        .collect();
    if rows.iter().any(|&len| len == 0) {
        return Err(Error::InconsistentNdSet(
            "a free row has no dominant cell to hold its x".into(),
        ));
    }
    FerrersBoard::new(rows)
}

/// All fillings of the board, one x per row and per column.
///
/// The search places the topmost (shortest) row first; each factor of
/// [`product_poly`] counts the legal columns of one such step.
pub fn enumerate_fillings(board: &FerrersBoard) -> Result<Vec<BoardFilling>> {
    if !board.is_fillable() {
        return Err(Error::Unfillable(format!("board {board} has no filling")));
    }
    let k = board.num_rows();
    let mut out = Vec::new();
    let mut placement = vec![0usize; k];
    let mut used = vec![false; k + 1];
    fn descend(
        board: &FerrersBoard,
        row: usize,
        placement: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<BoardFilling>,
    ) {
        if row == 0 {
            out.push(BoardFilling {
                board: board.clone(),
                placement: placement.clone(),
            });
            return;
        }
        for col in 1..=board.rows()[row - 1] {
            if !used[col] {
                used[col] = true;
                placement[row - 1] = col;
                descend(board, row - 1, placement, used, out);
                used[col] = false;
            }
        }
    }
    descend(board, k, &mut placement, &mut used, &mut out);
    Ok(out)
}

/// Match count of a two-letter marked pattern on a filling.
///
/// The filling has a `p`-match at column t when the x of column t, replaced
/// by a hole, plays the marked role of `p` against some other x and the full
/// 2 x 2 pattern diagram fits on the board: the corner rule is
/// max(columns) <= lambda_(max(rows)).
pub fn filling_pmp(f: &BoardFilling, p: &MarkedPattern) -> Result<usize> {
    if p.len() != 2 {
        return Err(Error::Invalid(format!(
            "filling patterns have two letters, got {p}"
        )));
    }
    let k = f.board.num_rows();
    let mut col_to_row = vec![0usize; k + 1];
    for (idx, &col) in f.placement.iter().enumerate() {
        col_to_row[col] = idx + 1;
    }
    let word = p.underlying().entries();
    let mut count = 0;
    for t in 1..=k {
        let rt = col_to_row[t];
        let hit = (1..=k).filter(|&c| c != t).any(|c| {
            let r = col_to_row[c];
            let (observed, mark_idx) = if t < c {
                (if rt < r { [1u8, 2] } else { [2, 1] }, 1)
            } else {
                (if r < rt { [1, 2] } else { [2, 1] }, 2)
            };
            observed == *word
                && mark_idx == p.mark()
                && t.max(c) <= f.board.rows()[rt.max(r) - 1]
        });
        if hit {
            count += 1;
        }
    }
    Ok(count)
}

/// The common distribution of `1[2]` and `[2]1` matches over all fillings:
/// prod_{i=1}^{k} (1 + (lambda_i - (k - i + 1)) x).
pub fn product_poly(board: &FerrersBoard) -> Result<DistPoly> {
    if !board.is_fillable() {
        return Err(Error::Unfillable(format!("board {board} has no filling")));
    }
    let k = board.num_rows();
    let mut poly = DistPoly::one();
    for (idx, &len) in board.rows().iter().enumerate() {
        poly = poly.mul(&DistPoly::linear(1, (len - (k - idx)) as u64));
    }
    Ok(poly)
}

fn free_lines(q: &NdSet) -> (Vec<usize>, Vec<usize>) {
    let used_rows: BTreeSet<usize> = q.cells.iter().map(|&(r, _)| r).collect();
    let used_cols: BTreeSet<usize> = q.cells.iter().map(|&(_, c)| c).collect();
    let rows = (1..=q.n).filter(|r| !used_rows.contains(r)).collect();
    let cols = (1..=q.n).filter(|c| !used_cols.contains(c)).collect();
    (rows, cols)
}

/// Reassembles the permutation with non-dominant points `q` whose dominant
/// part carries the filling `f`: board row i, column j maps to the diagram
/// point (i-th free row, j-th free column).
pub fn phi_board(f: &BoardFilling, q: &NdSet, tau: &Perm) -> Result<Perm> {
    let board = lambda_of(q, tau)?;
    if board != f.board {
        return Err(Error::ShapeMismatch(format!(
            "filling of {} cannot land on lambda(Q) = {board}",
            f.board
        )));
    }
    let (free_rows, free_cols) = free_lines(q);
    let mut entries = vec![0u8; q.n];
    for &(r, c) in &q.cells {
        entries[c - 1] = r as u8;
    }
    for (idx, &col) in f.placement.iter().enumerate() {
        entries[free_cols[col - 1] - 1] = free_rows[idx] as u8;
    }
    Perm::from_entries(&entries)
}

/// Splits `sigma` into its non-dominant points and the induced filling of
/// lambda(Q); [`phi_board`] inverts the split.
pub fn decompose(sigma: &Perm, tau: &Perm) -> Result<(NdSet, BoardFilling)> {
    let q = nd_set(sigma, tau);
    let board = lambda_of(&q, tau)?;
    let (free_rows, free_cols) = free_lines(&q);
    let placement: Vec<usize> = free_rows
        .iter()
        .map(|&r| {
            let col = sigma
                .position_of(r as u8)
                .expect("free row value exists in sigma");
            free_cols
                .iter()
                .position(|&c| c == col)
                .expect("dominant point sits in a free column")
                + 1
        })
        .collect();
    let filling = BoardFilling::new(board, placement)?;
    Ok((q, filling))
}

/// The three tail extensions of a rearrangement `tail` of {3, ..., l}:
/// `1[2]tail`, `[2]1tail`, `2[1]tail`.
pub fn tail_patterns(tail: &[u8]) -> Result<[MarkedPattern; 3]> {
    let l = tail.len() + 2;
    let mut sorted: Vec<u8> = tail.to_vec();
    sorted.sort_unstable();
    if sorted != (3..=l as u8).collect::<Vec<u8>>() {
        return Err(Error::Invalid(format!(
            "tail {tail:?} is not a rearrangement of 3..={l}"
        )));
    }
    let mut asc = vec![1u8, 2];
    asc.extend_from_slice(tail);
    let mut desc = vec![2u8, 1];
    desc.extend_from_slice(tail);
    let asc = Perm::from_entries(&asc)?;
    let desc = Perm::from_entries(&desc)?;
    Ok([
        MarkedPattern::new(asc, 2)?,
        MarkedPattern::new(desc.clone(), 1)?,
        MarkedPattern::new(desc, 2)?,
    ])
}

fn render_tail(tail: &[u8]) -> String {
    if tail.iter().all(|&v| v < 10) {
        tail.iter().map(|v| v.to_string()).collect()
    } else {
        let parts: Vec<String> = tail.iter().map(|v| v.to_string()).collect();
        parts.join(",")
    }
}

/// Evidence that the three tail extensions are equidistributed at size `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LengthnReport {
    pub tail: String,
    pub n: usize,
    pub patterns: [MarkedPattern; 3],
    pub distributions: [DistPoly; 3],
    /// The three brute-force distributions agree.
    pub distributions_equal: bool,
    /// Number of distinct non-dominant sets over S_n.
    pub nd_classes: usize,
    /// Every class satisfies the board reduction: the class sums for the
    /// first two patterns both equal the filling distribution of its board,
    /// which equals the closed product.
    pub per_class_equal: bool,
    pub pass: bool,
}

/// Checks `1[2]tail`, `[2]1tail`, `2[1]tail` for equidistribution at size
/// `n`, and the class-by-class board reduction that explains it.
pub fn verify_lengthn(tail: &[u8], n: usize) -> Result<LengthnReport> {
    let patterns = tail_patterns(tail)?;
    let tau_entries: Vec<u8> = tail.iter().map(|&v| v - 2).collect();
    let tau = Perm::from_entries(&tau_entries)?;

    let distributions = [
        dist_brute(n, &patterns[0])?,
        dist_brute(n, &patterns[1])?,
        dist_brute(n, &patterns[2])?,
    ];
    let distributions_equal =
        distributions[0] == distributions[1] && distributions[1] == distributions[2];

    // Class sums of x^pmp for the first two patterns, keyed by ND(sigma).
    let mut classes: BTreeMap<NdSet, (DistPoly, DistPoly)> = BTreeMap::new();
    for sigma in all_perms(n)? {
        let q = nd_set(&sigma, &tau);
        let entry = classes
            .entry(q)
            .or_insert_with(|| (DistPoly::zero(), DistPoly::zero()));
        let mut m1 = DistPoly::zero();
        m1 += &DistPoly::one().times_monomial(1, pmp(&sigma, &patterns[0]));
        entry.0 += &m1;
        let mut m2 = DistPoly::zero();
        m2 += &DistPoly::one().times_monomial(1, pmp(&sigma, &patterns[1]));
        entry.1 += &m2;
    }

    let one_two: MarkedPattern = "1[2]".parse().expect("valid pattern literal");
    let two_one: MarkedPattern = "[2]1".parse().expect("valid pattern literal");
    let mut per_class_equal = true;
    for (q, (class1, class2)) in &classes {
        let board = lambda_of(q, &tau)?;
        let mut fill1 = DistPoly::zero();
        let mut fill2 = DistPoly::zero();
        for f in enumerate_fillings(&board)? {
            fill1 += &DistPoly::one().times_monomial(1, filling_pmp(&f, &one_two)?);
            fill2 += &DistPoly::one().times_monomial(1, filling_pmp(&f, &two_one)?);
        }
        let closed = product_poly(&board)?;
        if *class1 != fill1 || *class2 != fill2 || fill1 != closed || fill2 != closed {
            per_class_equal = false;
        }
    }

    Ok(LengthnReport {
        tail: render_tail(tail),
        n,
        patterns,
        distributions_equal,
        nd_classes: classes.len(),
        per_class_equal,
        pass: distributions_equal && per_class_equal,
        distributions,
    })
}

/// Evidence that two tail-extension families match as pattern sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultipatternReport {
    pub tails: Vec<String>,
    pub n: usize,
    pub gamma1: PatternSet,
    pub gamma2: PatternSet,
    pub dist1: DistPoly,
    pub dist2: DistPoly,
    pub pass: bool,
}

/// Checks that the set extensions {`1[2]tail_i`} and {`[2]1tail_i`} have the
/// same set-match distribution at size `n`.
pub fn verify_multipattern(tails: &[Vec<u8>], n: usize) -> Result<MultipatternReport> {
    if tails.is_empty() {
        return Err(Error::EmptyPatternSet);
    }
    let mut asc = Vec::new();
    let mut desc = Vec::new();
    for tail in tails {
        if tail.len() != tails[0].len() {
            return Err(Error::MixedPatternLengths);
        }
        let [p1, p2, _] = tail_patterns(tail)?;
        asc.push(p1);
        desc.push(p2);
    }
    let gamma1 = PatternSet::new(asc)?;
    let gamma2 = PatternSet::new(desc)?;
    let dist1 = dist_brute_gamma(n, &gamma1)?;
    let dist2 = dist_brute_gamma(n, &gamma2)?;
    let pass = dist1 == dist2;
    Ok(MultipatternReport {
        tails: tails.iter().map(|t| render_tail(t)).collect(),
        n,
        gamma1,
        gamma2,
        dist1,
        dist2,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn mp(s: &str) -> MarkedPattern {
        s.parse().unwrap()
    }

    fn board(s: &str) -> FerrersBoard {
        s.parse().unwrap()
    }

    fn example_nd() -> NdSet {
        let cells = [(9, 9), (8, 2), (6, 5), (3, 8)].into_iter().collect();
        NdSet::new(9, cells).unwrap()
    }

    #[test]
    fn board_text_and_fillability() {
        let b = board("5,5,3,3,1");
        assert_eq!(b.rows(), &[5, 5, 3, 3, 1]);
        assert_eq!(b.to_string(), "5,5,3,3,1");
        assert!(b.is_fillable());
        assert!(board("3,2,1").is_fillable());
        assert!(board("3,3,3").is_fillable());
        // Bottom row shorter than the column count.
        assert!(!board("2,2,2").is_fillable());
        // Too wide for three rows.
        assert!(!board("4,2,1").is_fillable());
        assert!("3,5".parse::<FerrersBoard>().is_err());
        assert!("3,0".parse::<FerrersBoard>().is_err());
        assert_eq!("".parse::<FerrersBoard>().unwrap(), FerrersBoard::empty());
    }

    #[test]
    fn nd_set_validation() {
        assert!(NdSet::new(3, [(1, 1), (2, 2)].into_iter().collect()).is_ok());
        assert!(NdSet::new(3, [(1, 1), (1, 2)].into_iter().collect()).is_err());
        assert!(NdSet::new(3, [(1, 1), (2, 1)].into_iter().collect()).is_err());
        assert!(NdSet::new(3, [(4, 1)].into_iter().collect()).is_err());
    }

    #[test]
    fn nine_point_reduction() {
        let q = example_nd();
        let tau = p("12");
        assert_eq!(
            dominant_rows_from_nd(&q, &tau),
            vec![7, 7, 4, 4, 4, 1, 1, 0, 0]
        );
        assert_eq!(lambda_of(&q, &tau).unwrap(), board("5,5,3,3,1"));

        let sigma = p("784561239");
        assert_eq!(dominant_rows(&sigma, &tau), vec![7, 7, 4, 4, 4, 1, 1, 0, 0]);
        assert_eq!(nd_set(&sigma, &tau), q);

        let (q_back, filling) = decompose(&sigma, &tau).unwrap();
        assert_eq!(q_back, q);
        assert_eq!(filling.placement(), &[4, 5, 2, 3, 1]);
        assert_eq!(phi_board(&filling, &q, &tau).unwrap(), sigma);
    }

    #[test]
    fn dominant_region_trivia() {
        assert_eq!(dominant_rows(&p("12"), &p("123")), vec![0, 0]);
        assert_eq!(dominant_rows(&p("4321"), &p("12")), vec![0, 0, 0, 0]);
        assert!(dominant_cells(&p("4321"), &p("12")).is_empty());
        // 1234 relative to 12: rows 1 and 2 see the rise 3 then 4 above and
        // to the right of their first two cells, rows 3 and 4 see no rise.
        assert_eq!(dominant_rows(&p("1234"), &p("12")), vec![2, 2, 0, 0]);
        assert_eq!(
            dominant_cells(&p("1234"), &p("12")),
            [(1, 1), (1, 2), (2, 1), (2, 2)].into_iter().collect()
        );
        assert_eq!(
            nd_set(&p("1234"), &p("12")).cells(),
            &[(3, 3), (4, 4)].into_iter().collect()
        );
    }

    #[test]
    fn fillings_and_products() {
        let b = board("5,5,3,3,1");
        assert_eq!(enumerate_fillings(&b).unwrap().len(), 4);
        assert_eq!(product_poly(&b).unwrap(), DistPoly::from_counts(&[1, 2, 1]));

        let stair = board("3,2,1");
        let fillings = enumerate_fillings(&stair).unwrap();
        assert_eq!(fillings.len(), 1);
        assert_eq!(fillings[0].placement(), &[3, 2, 1]);
        assert_eq!(product_poly(&stair).unwrap(), DistPoly::one());

        let square = board("3,3,3");
        assert_eq!(enumerate_fillings(&square).unwrap().len(), 6);
        assert_eq!(
            product_poly(&square).unwrap(),
            DistPoly::linear(1, 1).mul(&DistPoly::linear(1, 2))
        );

        assert!(enumerate_fillings(&board("2,2,2")).is_err());
        assert!(product_poly(&board("2,2,2")).is_err());

        let empty = FerrersBoard::empty();
        assert_eq!(enumerate_fillings(&empty).unwrap().len(), 1);
        assert_eq!(product_poly(&empty).unwrap(), DistPoly::one());
    }

    #[test]
    fn filling_match_counts() {
        // Board (4,4,2,1), x columns 3,4,2,1 bottom up: the only matches are
        // a [1]2-match at column 3 and a 1[2]-match at column 4.
        let f = BoardFilling::new(board("4,4,2,1"), vec![3, 4, 2, 1]).unwrap();
        assert_eq!(filling_pmp(&f, &mp("[1]2")).unwrap(), 1);
        assert_eq!(filling_pmp(&f, &mp("1[2]")).unwrap(), 1);
        assert_eq!(filling_pmp(&f, &mp("[2]1")).unwrap(), 0);
        assert_eq!(filling_pmp(&f, &mp("2[1]")).unwrap(), 0);

        let stair = BoardFilling::new(board("3,2,1"), vec![3, 2, 1]).unwrap();
        assert_eq!(filling_pmp(&stair, &mp("1[2]")).unwrap(), 0);
        assert_eq!(filling_pmp(&stair, &mp("[2]1")).unwrap(), 0);

        let ident = BoardFilling::new(board("3,3,3"), vec![1, 2, 3]).unwrap();
        assert_eq!(filling_pmp(&ident, &mp("1[2]")).unwrap(), 2);

        assert!(filling_pmp(&ident, &mp("1[2]3")).is_err());
    }

    fn fillable_boards(k: usize) -> Vec<FerrersBoard> {
        fn extend(k: usize, rows: &mut Vec<usize>, out: &mut Vec<FerrersBoard>) {
            if rows.len() == k {
                out.push(FerrersBoard::new(rows.clone()).unwrap());
                return;
            }
            let i = rows.len() + 1;
            let hi = rows.last().copied().unwrap_or(k).min(k);
            for len in (k - i + 1)..=hi {
                rows.push(len);
                extend(k, rows, out);
                rows.pop();
            }
        }
        let mut out = Vec::new();
        extend(k, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn product_matches_filling_sums() {
        for k in 1..=4 {
            for b in fillable_boards(k) {
                let mut sum12 = DistPoly::zero();
                let mut sum21 = DistPoly::zero();
                for f in enumerate_fillings(&b).unwrap() {
                    sum12 += &DistPoly::one()
                        .times_monomial(1, filling_pmp(&f, &mp("1[2]")).unwrap());
                    sum21 += &DistPoly::one()
                        .times_monomial(1, filling_pmp(&f, &mp("[2]1")).unwrap());
                }
                let closed = product_poly(&b).unwrap();
                assert_eq!(sum12, closed, "{b}");
                assert_eq!(sum21, closed, "{b}");
            }
        }
    }

    #[test]
    fn decompose_roundtrips() {
        for tau in [p("12"), p("21")] {
            for n in 1..=5 {
                for sigma in all_perms(n).unwrap() {
                    let q = nd_set(&sigma, &tau);
                    assert_eq!(
                        dominant_rows(&sigma, &tau),
                        dominant_rows_from_nd(&q, &tau),
                        "{sigma} vs {tau}"
                    );
                    let (q2, filling) = decompose(&sigma, &tau).unwrap();
                    assert_eq!(q2, q);
                    assert!(filling.board().is_fillable());
                    assert_eq!(phi_board(&filling, &q, &tau).unwrap(), sigma);
                }
            }
        }
        for sigma in all_perms(5).unwrap() {
            let tau = p("123");
            let q = nd_set(&sigma, &tau);
            assert_eq!(dominant_rows(&sigma, &tau), dominant_rows_from_nd(&q, &tau));
        }
    }

    #[test]
    fn inconsistent_nd_sets() {
        let tau = p("12");
        // Free row 3 would have no dominant cell for its x.
        let q = NdSet::new(3, [(1, 1), (2, 2)].into_iter().collect()).unwrap();
        assert!(matches!(
            lambda_of(&q, &tau),
            Err(Error::InconsistentNdSet(_))
        ));
        // Cell (1,1) is dominant once (2,2) and (3,3) are non-dominant points.
        let q = NdSet::new(3, [(1, 1), (2, 2), (3, 3)].into_iter().collect()).unwrap();
        assert!(matches!(
            lambda_of(&q, &tau),
            Err(Error::InconsistentNdSet(_))
        ));
    }

    #[test]
    fn phi_board_shape_mismatch() {
        let stair = BoardFilling::new(board("3,2,1"), vec![3, 2, 1]).unwrap();
        assert!(matches!(
            phi_board(&stair, &example_nd(), &p("12")),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn tail_pattern_construction() {
        let [p1, p2, p3] = tail_patterns(&[3]).unwrap();
        assert_eq!(p1.to_string(), "1[2]3");
        assert_eq!(p2.to_string(), "[2]13");
        assert_eq!(p3.to_string(), "2[1]3");
        let [p1, _, _] = tail_patterns(&[4, 3]).unwrap();
        assert_eq!(p1.to_string(), "1[2]43");
        // The empty tail degenerates to the bare two-letter patterns.
        let [p1, p2, p3] = tail_patterns(&[]).unwrap();
        assert_eq!(p1.to_string(), "1[2]");
        assert_eq!(p2.to_string(), "[2]1");
        assert_eq!(p3.to_string(), "2[1]");
        assert!(tail_patterns(&[2]).is_err());
        assert!(tail_patterns(&[3, 3]).is_err());
        assert!(tail_patterns(&[3, 5]).is_err());
    }

    #[test]
    fn lengthn_reports_pass() {
        for tail in [vec![3u8], vec![3, 4], vec![4, 3]] {
            let report = verify_lengthn(&tail, 6).unwrap();
            assert!(report.distributions_equal, "{tail:?}");
            assert!(report.per_class_equal, "{tail:?}");
            assert!(report.pass, "{tail:?}");
        }
        let report = verify_lengthn(&[3], 5).unwrap();
        assert_eq!(report.distributions[0], dist_brute(5, &mp("1[2]3")).unwrap());
    }

    #[test]
    fn multipattern_reports_pass() {
        let report = verify_multipattern(&[vec![3, 4], vec![4, 3]], 6).unwrap();
        assert_eq!(report.gamma1.to_string(), "{1[2]34,1[2]43}");
        assert_eq!(report.gamma2.to_string(), "{[2]134,[2]143}");
        assert!(report.pass);

        let single = verify_multipattern(&[vec![3]], 6).unwrap();
        assert!(single.pass);

        assert!(verify_multipattern(&[], 4).is_err());
        assert!(verify_multipattern(&[vec![3], vec![3, 4]], 4).is_err());
    }
}
