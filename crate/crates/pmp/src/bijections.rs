//! Constructive bijections explaining the small equal-distribution pairs.
//!
//! Two insertion-replay bijections on S_n transport the match statistic
//! between sibling patterns: [`theta_a`] carries pmp for `[1]23` to pmp for
//! `[1]32` (exchanging the last-ascent and last-descent positions), and
//! [`theta_b`] carries pmp for `1[2]3` to pmp for `13[2]` (fixing the
//! position of 1).  A third map, [`phi`], sends 132-avoiding permutations
//! with one marked inversion to the permutations with exactly one `[1]32`
//! match, identifying the linear coefficient of that distribution with the
//! total inversion count over 132-avoiders.

use crate::error::{Error, Result};
use crate::pattern::{has_match_at, pmp, MarkedPattern};
use crate::perm::{all_perms, parse_entry_list, Perm};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Removes the entry 1 and lowers every remaining entry by one.
fn delete_one(sigma: &Perm) -> Perm {
    let entries: Vec<u8> = sigma
        .entries()
        .iter()
        .filter(|&&v| v != 1)
        .map(|&v| v - 1)
        .collect();
    Perm::from_entries(&entries).expect("removing 1 keeps a permutation")
}

/// Removes the entry 2 and lowers every entry above it by one; 1 stays put.
fn delete_two(sigma: &Perm) -> Perm {
    let entries: Vec<u8> = sigma
        .entries()
        .iter()
        .filter(|&&v| v != 2)
        .map(|&v| if v > 2 { v - 1 } else { v })
        .collect();
    Perm::from_entries(&entries).expect("removing 2 keeps a permutation")
}

/// Raises every entry by one and inserts 1 at position `r` (1-based).
fn insert_one(sigma: &Perm, r: usize) -> Perm {
    let mut entries: Vec<u8> = sigma.entries().iter().map(|&v| v + 1).collect();
    entries.insert(r - 1, 1);
    Perm::from_entries(&entries).expect("inserting 1 keeps a permutation")
}

/// Raises every entry except 1 by one and inserts 2 at position `r` (1-based).
fn insert_two(sigma: &Perm, r: usize) -> Perm {
    let mut entries: Vec<u8> = sigma
        .entries()
        .iter()
        .map(|&v| if v >= 2 { v + 1 } else { v })
        .collect();
    entries.insert(r - 1, 2);
    Perm::from_entries(&entries).expect("inserting 2 keeps a permutation")
}

/// Bijection on S_n with `pmp(sigma, [1]23) = pmp(theta_a(sigma), [1]32)`.
///
/// It also exchanges the boundary statistics: the last ascent position of
/// `sigma` equals the last descent position of the image (or both are
/// absent).  Defined by replaying the insertion history of 1.  Write
/// `sigma` as a permutation of size m+1 with 1 at position r, let `red` be
/// the size-m permutation left by [`delete_one`], and let k be the last
/// ascent of `red` (k = 0 if none).  Then the image is
/// `theta_a(red)` with 1 re-inserted at
///
/// - r itself, if r <= k,
/// - r + 1, if k + 1 <= r <= m,
/// - k + 1, if r = m + 1.
pub fn theta_a(sigma: &Perm) -> Perm {
    if sigma.n() <= 1 {
        return sigma.clone();
    }
    let r = sigma.position_of(1).expect("nonempty permutation contains 1");
    let red = delete_one(sigma);
    let m = red.n();
    let k = red.last_ascent().unwrap_or(0);
    let r_new = if r <= k {
        r
    } else if r <= m {
        r + 1
    } else {
        k + 1
    };
    insert_one(&theta_a(&red), r_new)
}

/// Bijection on S_n with `pmp(sigma, 1[2]3) = pmp(theta_b(sigma), 13[2])`.
///
/// The position of 1 is preserved.  Every permutation with n >= 2 arises
/// uniquely from a smaller one by inserting a new minimum strictly right of
/// the old one (2 ends up left of 1) or by inserting a new second-smallest
/// entry strictly right of 1 (2 ends up right of 1); the map recurses on
/// that decomposition.  A 1 inserted at position r is re-inserted at the
/// same r.  A 2 inserted at position r into a size-m permutation with 1 at
/// position k is re-inserted at r + 1 for k + 1 <= r <= m and at k + 1 for
/// r = m + 1.
pub fn theta_b(sigma: &Perm) -> Perm {
    if sigma.n() <= 1 {
        return sigma.clone();
    }
    let pos1 = sigma.position_of(1).expect("permutation contains 1");
    let pos2 = sigma.position_of(2).expect("permutation contains 2");
    if pos2 < pos1 {
        // Last step inserted 1 at pos1; the image re-inserts it unchanged.
        insert_one(&theta_b(&delete_one(sigma)), pos1)
    } else {
        // Last step inserted 2 at pos2, with 1 sitting at pos1.
        let red = delete_two(sigma);
        let m = red.n();
        let r_new = if pos2 <= m { pos2 + 1 } else { pos1 + 1 };
        insert_two(&theta_b(&red), r_new)
    }
}

/// Raises every entry `>= i` by one, then inserts `i` at position `j`.
///
/// For `sigma` of size n this requires `1 <= i <= n + 1` and
/// `1 <= j <= n + 1`; the result has size n + 1, and deleting its j-th
/// entry and reducing recovers `sigma`.
pub fn insert_value(sigma: &Perm, i: usize, j: usize) -> Result<Perm> {
    let n = sigma.n();
    if i == 0 || i > n + 1 || j == 0 || j > n + 1 {
        return Err(Error::InvalidInsertion(format!(
            "value {i} at position {j} does not fit a permutation of size {n}"
        )));
    }
    let mut entries: Vec<u8> = sigma
        .entries()
        .iter()
        .map(|&v| if v as usize >= i { v + 1 } else { v })
        .collect();
    entries.insert(j - 1, i as u8);
    Perm::from_entries(&entries)
}

/// A 132-avoiding permutation with one inversion pair marked.
///
/// `star1 < star2` are positions with `base[star1] > base[star2]`, and
/// `base` contains no occurrence of 132.  Text form puts a `*` after each
/// marked entry: `2*1*3`, or `10,9*,3*,...` for entries beyond one digit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedAvoider {
    base: Perm,
    star1: usize,
    star2: usize,
}

impl MarkedAvoider {
    /// Validates the avoidance and inversion invariants.
    pub fn new(base: Perm, star1: usize, star2: usize) -> Result<Self> {
        let n = base.n();
        if star1 == 0 || star2 <= star1 || star2 > n {
            return Err(Error::InvalidMarkedAvoider(format!(
                "marks ({star1}, {star2}) out of order for size {n}"
            )));
        }
        if base.at(star1) <= base.at(star2) {
            return Err(Error::InvalidMarkedAvoider(format!(
                "entries at positions {star1} and {star2} of {base} do not form an inversion"
            )));
        }
        let patt = Perm::from_entries(&[1, 3, 2]).expect("132 is a permutation");
        if base.contains(&patt) {
            return Err(Error::InvalidMarkedAvoider(format!(
                "{base} contains an occurrence of 132"
            )));
        }
        Ok(MarkedAvoider { base, star1, star2 })
    }

    pub fn base(&self) -> &Perm {
        &self.base
    }

    /// Position of the first mark (1-based).
    pub fn star1(&self) -> usize {
        self.star1
    }

    /// Position of the second mark (1-based).
    pub fn star2(&self) -> usize {
        self.star2
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }
}

impl fmt::Display for MarkedAvoider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let long = self.base.n() > 9;
        for (idx, &v) in self.base.entries().iter().enumerate() {
            if long && idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            if idx + 1 == self.star1 || idx + 1 == self.star2 {
                write!(f, "*")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MarkedAvoider {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut clean = String::new();
        let mut stars = Vec::new();
        let mut entries_seen = 0usize;
        if s.contains(',') {
            for (idx, token) in s.split(',').enumerate() {
                if idx > 0 {
                    clean.push(',');
                }
                let token = token.trim();
                if let Some(body) = token.strip_suffix('*') {
                    stars.push(idx + 1);
                    clean.push_str(body);
                } else {
                    clean.push_str(token);
                }
            }
        } else {
            for c in s.chars() {
                if c == '*' {
                    if entries_seen == 0 || stars.last() == Some(&entries_seen) {
                        return Err(Error::Parse(format!("stray '*' in {s:?}")));
                    }
                    stars.push(entries_seen);
                } else {
                    clean.push(c);
                    entries_seen += 1;
                }
            }
        }
        if stars.len() != 2 {
            return Err(Error::Parse(format!(
                "expected exactly two '*' marks in {s:?}, found {}",
                stars.len()
            )));
        }
        let base = Perm::from_entries(&parse_entry_list(&clean)?)?;
        MarkedAvoider::new(base, stars[0], stars[1])
    }
}

impl Serialize for MarkedAvoider {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MarkedAvoider {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Enumerates every 132-avoiding permutation of size `n` with every choice
/// of marked inversion pair, in lexicographic order of (base, star1, star2).
///
/// The total count is the number of inversions summed over S_n(132).
pub fn ims_enumerate(n: usize) -> Result<Vec<MarkedAvoider>> {
    let patt = Perm::from_entries(&[1, 3, 2]).expect("132 is a permutation");
    let mut out = Vec::new();
    for sigma in all_perms(n)? {
        if sigma.contains(&patt) {
            continue;
        }
        for s1 in 1..=n {
            for s2 in s1 + 1..=n {
                if sigma.at(s1) > sigma.at(s2) {
                    out.push(MarkedAvoider {
                        base: sigma.clone(),
                        star1: s1,
                        star2: s2,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Sends a marked avoider of size n to the permutation of size n + 1 with
/// exactly one `[1]32` match.
///
/// With j the position of the first mark and i the entry under the second
/// mark, the image is `insert_value(base, i, j)`.
pub fn phi(m: &MarkedAvoider) -> Perm {
    let i = m.base.at(m.star2) as usize;
    insert_value(&m.base, i, m.star1).expect("marks are in range")
}

/// Inverts [`phi`] on permutations with exactly one `[1]32` match.
///
/// The match position t holds the smallest entry of some 132 occurrence;
/// deleting it and reducing yields the base, the first mark lands on the
/// entry that followed position t, and the second on the entry one larger
/// than the deleted one.  Errors unless the match position is unique.
pub fn phi_inverse(sigma: &Perm) -> Result<MarkedAvoider> {
    let tau: MarkedPattern = "[1]32".parse().expect("valid pattern literal");
    let matches: Vec<usize> =
        (1..=sigma.n()).filter(|&l| has_match_at(sigma, &tau, l)).collect();
    if matches.len() != 1 {
        return Err(Error::NoUniqueMatch(format!(
            "{sigma} has {} positions starting a 132 occurrence, need exactly 1",
            matches.len()
        )));
    }
    let t = matches[0];
    let v = sigma.at(t);
    let entries: Vec<u8> = sigma
        .entries()
        .iter()
        .enumerate()
        .filter(|&(idx, _)| idx + 1 != t)
        .map(|(_, &w)| if w > v { w - 1 } else { w })
        .collect();
    let base = Perm::from_entries(&entries)?;
    let star2 = sigma
        .position_of(v + 1)
        .expect("v is matched, so v + 1 exists")
        - 1;
    MarkedAvoider::new(base, t, star2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::sum_inversions_avoiding_132;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn mp(s: &str) -> MarkedPattern {
        s.parse().unwrap()
    }

    #[test]
    fn theta_a_fixed_images() {
        assert_eq!(theta_a(&p("1")), p("1"));
        assert_eq!(theta_a(&p("12")), p("21"));
        assert_eq!(theta_a(&p("21")), p("12"));
        assert_eq!(theta_a(&p("231")), p("312"));
        assert_eq!(theta_a(&p("1342")), p("1423"));
    }

    #[test]
    fn theta_b_fixed_images() {
        assert_eq!(theta_b(&p("1")), p("1"));
        assert_eq!(theta_b(&p("12")), p("12"));
        assert_eq!(theta_b(&p("21")), p("21"));
        assert_eq!(theta_b(&p("132")), p("123"));
        assert_eq!(theta_b(&p("123")), p("132"));
        assert_eq!(theta_b(&p("2143")), p("2134"));
        assert_eq!(theta_b(&p("2134")), p("2143"));
        assert_eq!(theta_b(&p("31245")), p("31524"));
    }

    #[test]
    fn theta_a_transports_statistics() {
        let before = mp("[1]23");
        let after = mp("[1]32");
        for n in 1..=6 {
            let mut images = BTreeSet::new();
            for sigma in all_perms(n).unwrap() {
                let image = theta_a(&sigma);
                assert_eq!(sigma.last_ascent(), image.last_descent(), "{sigma}");
                assert_eq!(pmp(&sigma, &before), pmp(&image, &after), "{sigma}");
                images.insert(image);
            }
            assert_eq!(images.len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn theta_b_transports_statistics() {
        let before = mp("1[2]3");
        let after = mp("13[2]");
        for n in 1..=6 {
            let mut images = BTreeSet::new();
            for sigma in all_perms(n).unwrap() {
                let image = theta_b(&sigma);
                assert_eq!(sigma.position_of(1), image.position_of(1), "{sigma}");
                assert_eq!(pmp(&sigma, &before), pmp(&image, &after), "{sigma}");
                images.insert(image);
            }
            assert_eq!(images.len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn insert_value_examples() {
        assert_eq!(insert_value(&p("2143"), 3, 2).unwrap(), p("23154"));
        assert_eq!(insert_value(&p("21"), 1, 1).unwrap(), p("132"));
        assert_eq!(insert_value(&p("312"), 4, 4).unwrap(), p("3124"));
        let empty = Perm::from_entries(&[]).unwrap();
        assert_eq!(insert_value(&empty, 1, 1).unwrap(), p("1"));
        assert!(insert_value(&p("21"), 0, 1).is_err());
        assert!(insert_value(&p("21"), 4, 1).is_err());
        assert!(insert_value(&p("21"), 1, 4).is_err());
    }

    #[test]
    fn insert_value_deletion_inverts() {
        for sigma in all_perms(3).unwrap() {
            for i in 1..=4 {
                for j in 1..=4 {
                    let bigger = insert_value(&sigma, i, j).unwrap();
                    let entries: Vec<u8> = bigger
                        .entries()
                        .iter()
                        .enumerate()
                        .filter(|&(idx, _)| idx + 1 != j)
                        .map(|(_, &w)| if w as usize > i { w - 1 } else { w })
                        .collect();
                    assert_eq!(Perm::from_entries(&entries).unwrap(), sigma);
                }
            }
        }
    }

    #[test]
    fn marked_avoider_text() {
        let m: MarkedAvoider = "2*1*3".parse().unwrap();
        assert_eq!(m.base(), &p("213"));
        assert_eq!((m.star1(), m.star2()), (1, 2));
        assert_eq!(m.to_string(), "2*1*3");

        let long: MarkedAvoider = "10,9*,8,7,6,5,4,3,2*,1".parse().unwrap();
        assert_eq!((long.star1(), long.star2()), (2, 9));
        assert_eq!(long.to_string(), "10,9*,8,7,6,5,4,3,2*,1");

        assert!("213".parse::<MarkedAvoider>().is_err());
        assert!("2*13".parse::<MarkedAvoider>().is_err());
        assert!("*213*".parse::<MarkedAvoider>().is_err());
        assert!("2**13".parse::<MarkedAvoider>().is_err());
        // 1 before 2 is not an inversion.
        assert!("1*2*3".parse::<MarkedAvoider>().is_err());
        // Base contains 132.
        assert!("1*32*".parse::<MarkedAvoider>().is_err());
    }

    #[test]
    fn ims_small_counts() {
        assert!(ims_enumerate(1).unwrap().is_empty());
        let two = ims_enumerate(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].to_string(), "2*1*");

        let three: Vec<String> =
            ims_enumerate(3).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(
            three,
            ["2*1*3", "2*31*", "23*1*", "3*1*2", "3*12*", "3*2*1", "3*21*", "32*1*"]
        );

        for n in 1..=6 {
            assert_eq!(
                ims_enumerate(n).unwrap().len() as u64,
                sum_inversions_avoiding_132(n).unwrap()
            );
        }
    }

    #[test]
    fn phi_examples() {
        let small: MarkedAvoider = "2*1*".parse().unwrap();
        assert_eq!(phi(&small), p("132"));
        assert_eq!(phi_inverse(&p("132")).unwrap(), small);

        let base = p("67458213");
        let marked = MarkedAvoider::new(base, 4, 6).unwrap();
        let image = p("785269314");
        assert_eq!(phi(&marked), image);
        assert_eq!(phi_inverse(&image).unwrap(), marked);
    }

    #[test]
    fn phi_bijects_onto_unique_match_permutations() {
        let tau = mp("[1]32");
        for n in 1..=5 {
            let mut images = BTreeSet::new();
            for m in ims_enumerate(n).unwrap() {
                let image = phi(&m);
                assert_eq!(pmp(&image, &tau), 1, "{m}");
                assert_eq!(phi_inverse(&image).unwrap(), m);
                images.insert(image);
            }
            let targets: Vec<Perm> = all_perms(n + 1)
                .unwrap()
                .filter(|sigma| pmp(sigma, &tau) == 1)
                .collect();
            assert_eq!(images.len(), targets.len());
            for sigma in targets {
                assert!(images.contains(&sigma));
                assert_eq!(phi(&phi_inverse(&sigma).unwrap()), sigma);
            }
        }
    }

    #[test]
    fn phi_inverse_requires_unique_match() {
        assert!(matches!(
            phi_inverse(&p("123")),
            Err(Error::NoUniqueMatch(_))
        ));
        assert!(matches!(
            phi_inverse(&p("21543")),
            Err(Error::NoUniqueMatch(_))
        ));
    }
}
