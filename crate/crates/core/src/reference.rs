//! Published reference values, embedded for golden comparisons and the
//! `--paper-data` figure mode. Nothing here feeds a computation.

use serde::Serialize;

use crate::error::Result;
use crate::field::make_field;
use crate::sparse::SparsePolynomial;

pub const DATASET_VERSION: &str = "pn-table-1";

/// `(n, p_n)` for `1 <= n <= 16`.
pub const P_N: [(u64, u64); 16] = [
    (1, 3),
    (2, 5),
    (3, 11),
    (4, 23),
    (5, 47),
    (6, 151),
    (7, 173),
    (8, 349),
    (9, 619),
    (10, 1201),
    (11, 2753),
    (12, 4801),
    (13, 10867),
    (14, 16633),
    (15, 71237),
    (16, 8581),
];

/// A published trinomial with exactly `n` roots in `F_p`, as integer
/// `(exponent, coefficient)` terms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReferenceTrinomial {
    pub n: u64,
    pub p: u64,
    pub terms: [(u64, i64); 3],
}

impl ReferenceTrinomial {
    pub fn polynomial(&self) -> Result<SparsePolynomial> {
        SparsePolynomial::from_int_terms(make_field(self.p, 1)?, &self.terms)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.unsigned_abs();
            let coeff = if mag == 1 && e > 0 { String::new() } else { mag.to_string() };
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            out.push_str(sign);
            out.push_str(&coeff);
            out.push_str(&mono);
        }
        out
    }
}

const fn tri(n: u64, p: u64, c0: i64, c1: i64, e: u64, ce: i64) -> ReferenceTrinomial {
    ReferenceTrinomial {
        n,
        p,
        terms: [(0, c0), (1, c1), (e, ce)],
    }
}

pub const TRINOMIALS: [ReferenceTrinomial; 16] = [
    tri(1, 3, 1, 1, 2, -2),
    tri(2, 5, 1, 1, 2, -2),
    tri(3, 11, 1, -3, 3, 2),
    tri(4, 23, -2, 1, 4, 1),
    tri(5, 47, 1, 4, 8, -5),
    tri(6, 151, 1, 24, 33, -25),
    tri(7, 173, -2, 1, 34, 1),
    tri(8, 349, 1, 23, 21, -24),
    tri(9, 619, -71, 70, 184, 1),
    tri(10, 1201, 1, 5, 152, -6),
    tri(11, 2753, -797, 796, 67, 1),
    tri(12, 4801, -82, 81, 1318, 1),
    tri(13, 10867, -1226, 1225, 225, 1),
    tri(14, 16633, -39, 38, 2264, 1),
    tri(15, 71237, 29574, -29573, 27103, -1),
    tri(16, 8581, -364, 363, 2729, 1),
];

/// Order of the published piecewise-linear curve: `p_1..p_12`, then `p_16`,
/// then `p_13..p_15`.
pub const FIGURE_ORDER: [u64; 16] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 16, 13, 14, 15];

pub const CURVE_LOW: f64 = 0.91;
pub const CURVE_HIGH: f64 = 1.77;

pub fn p_n(n: u64) -> Option<u64> {
    P_N.iter().find(|&&(m, _)| m == n).map(|&(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree() {
        for t in &TRINOMIALS {
            assert_eq!(p_n(t.n), Some(t.p));
        }
        assert_eq!(TRINOMIALS[15].text(), "-364+363x+x^2729");
        assert_eq!(TRINOMIALS[0].text(), "1+x-2x^2");
        assert_eq!(TRINOMIALS[14].text(), "29574-29573x-x^27103");
    }

    #[test]
    fn figure_order_is_ascending_in_p() {
        let ps: Vec<u64> = FIGURE_ORDER.iter().map(|&n| p_n(n).unwrap()).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }
}
