//! Positional marked patterns on permutations.
//!
//! A marked pattern tau is a permutation of 1..=k with one distinguished
//! entry. A permutation sigma has a tau-match at position l when some
//! occurrence of the underlying pattern uses sigma_l in the marked role;
//! pmp_tau(sigma) counts the matched positions. The crate computes the
//! distribution polynomial P_n(x) = sum over S_n of x^pmp, both by brute
//! force and by refined recursions, classifies patterns by distribution,
//! realizes the equidistribution classes through explicit bijections, and
//! reduces tail-marked pattern families to polynomial products over
//! staircase-shaped boards.

pub mod bijections;
pub mod dist;
pub mod error;
pub mod ferrers;
pub mod perm;
pub mod poly;
pub mod pattern;

pub use bijections::{
    ims_enumerate, insert_value, phi, phi_inverse, theta_a, theta_b, MarkedAvoider,
};
pub use dist::{
    catalan, classify, count_avoiders, dist_brute, dist_brute_gamma, dist_refined_brute,
    recursion_last_ascent_un123, recursion_last_descent_un132, recursion_len4_t1,
    recursion_len4_t2, recursion_pos1_13un2, recursion_pos1_1un23, sum_inversions_avoiding_132,
    Classification, ClassGroup, RefKey, RefinedTable, Refinement,
};
pub use error::{Error, Result};
pub use ferrers::{
    decompose, dominant_cells, dominant_rows, dominant_rows_from_nd, enumerate_fillings,
    filling_pmp, lambda_of, nd_set, phi_board, product_poly, tail_patterns, verify_lengthn,
    verify_multipattern, BoardFilling, FerrersBoard, LengthnReport, MultipatternReport, NdSet,
};
pub use pattern::{
    gamma_has_match_at, gamma_pmp, has_match_at, mmp_count, mmp_match_at, mmp_to_gamma, pmp,
    MarkedPattern, MmpSpec, PatternSet,
};
pub use perm::{DihedralTransform, Perm, HARD_CAP};
pub use poly::DistPoly;
