//! Sparse polynomials (t-nomials) over a finite field and exhaustive root
//! enumeration on the unit group.

use std::fmt;

use rayon::prelude::*;

use crate::dense::DensePoly;
use crate::error::{Error, Result};
use crate::field::{Element, Field};

/// Largest dense degree handled by forward differencing over prime fields.
const DIFFERENCE_DEGREE: u64 = 16;
/// Largest degree accepted by the squarefreeness (gcd) path.
pub const GCD_DEGREE_LIMIT: u64 = 100_000;

/// Upper bounds on `q` for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub prime_field: u64,
    pub extension_field: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            prime_field: 10_000_000,
            extension_field: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    pub fn check(&self, field: &Field) -> Result<()> {
        let (limit, kind) = if field.is_prime_field() {
            (self.prime_field, "prime")
        } else {
            (self.extension_field, "extension")
        };
        if field.q() > limit {
            return Err(Error::Capability(format!(
                "q = {} exceeds the {kind}-field enumeration budget {limit}",
                field.q()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    field: Field,
    /// Strictly ascending exponents, nonzero coefficients.
    terms: Vec<(u64, Element)>,
    /// Power of `x` divided out by canonicalization.
    divided_out: u64,
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over F_{}", self, self.field.q())
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = self.field.format(c);
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl SparsePolynomial {
    /// Sorts terms, merges repeated exponents and drops zero coefficients.
    pub fn new(field: Field, terms: impl IntoIterator<Item = (u64, Element)>) -> Result<Self> {
        let mut raw: Vec<(u64, Element)> = terms.into_iter().collect();
        let max_exp = field.q() - 1;
        for &(e, c) in &raw {
            if !field.contains(c) {
                return Err(Error::ForeignElement { q: field.q() });
            }
            if e > max_exp {
                return Err(Error::InvalidArgument(format!(
                    "exponent {e} exceeds q - 1 = {max_exp}"
                )));
            }
        }
        raw.sort_by_key(|&(e, _)| e);
        let mut terms: Vec<(u64, Element)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c),
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|&(_, c)| !c.is_zero());
        if terms.is_empty() {
            return Err(Error::InvalidArgument("the zero polynomial".into()));
        }
        Ok(SparsePolynomial {
            field,
            terms,
            divided_out: 0,
        })
    }

    /// Terms with integer coefficients mapped into the prime subfield.
    pub fn from_int_terms(field: Field, terms: &[(u64, i64)]) -> Result<Self> {
        let mapped: Vec<(u64, Element)> = terms.iter().map(|&(e, c)| (e, field.from_int(c))).collect();
        Self::new(field, mapped)
    }

    /// Parses `c1*x^e1 + c2*x^e2 + ...` with integer coefficients.
    pub fn parse(field: Field, text: &str) -> Result<Self> {
        let terms = parse_terms(text)?;
        let mapped: Vec<(u64, Element)> = terms
            .into_iter()
            .map(|(e, c)| {
                let p = field.p() as i128;
                let r = c.rem_euclid(p) as i64;
                (e, field.from_int(r))
            })
            .collect();
        Self::new(field, mapped)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(u64, Element)] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|&(e, _)| e).collect()
    }

    /// Number of terms.
    pub fn t(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u64 {
        self.terms.last().map_or(0, |&(e, _)| e)
    }

    pub fn is_canonical(&self) -> bool {
        self.terms[0].0 == 0
    }

    /// Degree below `q - 1`.
    pub fn is_strict(&self) -> bool {
        self.degree() < self.field.q() - 1
    }

    /// Whether `0` is a root of the polynomial as originally given.
    pub fn includes_zero(&self) -> bool {
        self.divided_out > 0 || self.terms[0].0 > 0
    }

    /// Exponent shift applied by [`canonicalize`](Self::canonicalize).
    pub fn divided_out(&self) -> u64 {
        self.divided_out
    }

    /// Divides by `x^{e_1}` so the lowest exponent is zero.
    pub fn canonicalize(&self) -> Self {
        let shift = self.terms[0].0;
        SparsePolynomial {
            field: self.field.clone(),
            terms: self.terms.iter().map(|&(e, c)| (e - shift, c)).collect(),
            divided_out: self.divided_out + shift,
        }
    }

    pub fn scale(&self, c: Element) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("scaling by zero".into()));
        }
        Ok(SparsePolynomial {
            field: self.field.clone(),
            terms: self.terms.iter().map(|&(e, a)| (e, self.field.mul(a, c))).collect(),
            divided_out: self.divided_out,
        })
    }

    pub fn evaluate(&self, a: Element) -> Element {
        let f = &self.field;
        self.terms
            .iter()
            .fold(f.zero(), |acc, &(e, c)| f.add(acc, f.mul(c, f.pow_u(a, e))))
    }

    pub fn roots_in_units(&self) -> Result<RootSet> {
        self.roots_in_units_with(&EnumerationBudget::default())
    }

    /// All nonzero roots, by evaluating at every unit.
    pub fn roots_in_units_with(&self, budget: &EnumerationBudget) -> Result<RootSet> {
        budget.check(&self.field)?;
        let mut roots = if self.field.is_prime_field() && self.degree() <= DIFFERENCE_DEGREE {
            self.roots_by_differences()
        } else if self.field.has_tables() {
            self.roots_by_tables()?
        } else {
            self.roots_by_powering()
        };
        roots.sort_unstable();
        Ok(RootSet {
            field: self.field.clone(),
            roots,
            includes_zero: self.includes_zero(),
        })
    }

    /// Prime fields, small degree: march `x = 1, 2, ...` through a forward
    /// difference table so each step costs `deg` modular additions.
    fn roots_by_differences(&self) -> Vec<Element> {
        let p = self.field.p();
        let d = self.degree() as usize;
        let dense = DensePoly::from_terms(p, self.terms.iter().map(|&(e, c)| (e as usize, c.raw())));
        if p <= d as u64 + 2 {
            return (1..p).filter(|&x| dense.eval(x) == 0).map(Element::from_raw).collect();
        }
        let mut diff: Vec<u64> = (1..=d as u64 + 1).map(|x| dense.eval(x)).collect();
        for level in 1..=d {
            for i in (level..=d).rev() {
                diff[i] = (diff[i] + p - diff[i - 1]) % p;
            }
        }
        let mut roots = Vec::new();
        for x in 1..p {
            if diff[0] == 0 {
                roots.push(Element::from_raw(x));
            }
            for j in 0..d {
                let s = diff[j] + diff[j + 1];
                diff[j] = if s >= p { s - p } else { s };
            }
        }
        roots
    }

    fn roots_by_tables(&self) -> Result<Vec<Element>> {
        let field = &self.field;
        let table = field.dlog_table()?;
        let n = field.q() - 1;
        let exp = table.exp_slice();
        let terms: Vec<(u64, u64)> = self
            .terms
            .iter()
            .map(|&(e, c)| (e % n, table.index(c).expect("nonzero coefficient")))
            .collect();
        let prime = field.is_prime_field();
        let p = field.p();
        let chunk = 1u64 << 14;
        let chunks: Vec<u64> = (0..n).step_by(chunk as usize).collect();
        let roots = chunks
            .into_par_iter()
            .flat_map_iter(|start| {
                let end = (start + chunk).min(n);
                let mut idx: Vec<u64> = terms
                    .iter()
                    .map(|&(e, lc)| ((lc as u128 + e as u128 * start as u128) % n as u128) as u64)
                    .collect();
                let mut found = Vec::new();
                for i in start..end {
                    let value = if prime {
                        let mut s = 0u64;
                        for &j in &idx {
                            s += exp[j as usize] as u64;
                            if s >= p {
                                s -= p;
                            }
                        }
                        s
                    } else {
                        idx.iter().fold(field.zero(), |acc, &j| {
                            field.add(acc, Element::from_raw(exp[j as usize] as u64))
                        })
                        .raw()
                    };
                    if value == 0 {
                        found.push(Element::from_raw(exp[i as usize] as u64));
                    }
                    for (slot, &(e, _)) in idx.iter_mut().zip(&terms) {
                        *slot += e;
                        if *slot >= n {
                            *slot -= n;
                        }
                    }
                }
                found
            })
            .collect();
        Ok(roots)
    }

    fn roots_by_powering(&self) -> Vec<Element> {
        let q = self.field.q();
        (1..q)
            .into_par_iter()
            .map(Element::from_raw)
            .filter(|&x| self.evaluate(x).is_zero())
            .collect()
    }

    /// Number of distinct roots in all of `F_p` and whether the polynomial is
    /// squarefree (`gcd(f, f')` constant). Prime fields only.
    pub fn distinct_root_count_mod_p(&self) -> Result<(usize, bool)> {
        if !self.field.is_prime_field() {
            return Err(Error::InvalidArgument(
                "distinct root counts are defined over prime fields".into(),
            ));
        }
        let full_degree = self.degree() + self.divided_out;
        if full_degree > GCD_DEGREE_LIMIT {
            return Err(Error::Capability(format!(
                "degree {full_degree} exceeds the squarefreeness limit {GCD_DEGREE_LIMIT}"
            )));
        }
        let roots = self.roots_in_units()?;
        let count = roots.total();
        let p = self.field.p();
        let shift = self.divided_out as usize;
        let dense = DensePoly::from_terms(
            p,
            self.terms.iter().map(|&(e, c)| (e as usize + shift, c.raw())),
        );
        let squarefree = dense.gcd(&dense.derivative()).is_constant();
        Ok((count, squarefree))
    }

    /// JSON shape: `[[e, [c_0, ..., c_{k-1}]], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|&(e, c)| serde_json::json!([e, self.field.coeffs(c)]))
                .collect(),
        )
    }
}

/// `Z(f)` restricted to the unit group, plus whether `0` is also a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub field: Field,
    /// Sorted in canonical order, duplicate-free.
    pub roots: Vec<Element>,
    pub includes_zero: bool,
}

impl RootSet {
    pub fn new(field: Field, mut roots: Vec<Element>, includes_zero: bool) -> Self {
        roots.sort_unstable();
        roots.dedup();
        RootSet {
            field,
            roots,
            includes_zero,
        }
    }

    /// Number of nonzero roots.
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    /// `R(f)`: all roots in `F_q`, counting `0` when it is one.
    pub fn total(&self) -> usize {
        self.roots.len() + usize::from(self.includes_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, a: Element) -> bool {
        self.roots.binary_search(&a).is_ok()
    }

    /// Discrete-log indices of the roots, ascending.
    pub fn indices(&self) -> Result<Vec<u64>> {
        let table = self.field.dlog_table()?;
        let mut idx: Vec<u64> = self.roots.iter().map(|&r| table.index(r).expect("unit root")).collect();
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn formatted(&self) -> Vec<String> {
        self.roots.iter().map(|&r| self.field.format(r)).collect()
    }
}

/// Tokenizes `c*x^e` terms joined by `+`/`-`; returns `(exponent, coefficient)`.
fn parse_terms(text: &str) -> Result<Vec<(u64, i128)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0usize;
    let mut terms = Vec::new();
    let err = |at: usize, msg: &str| Error::Parse {
        pos: at,
        msg: msg.to_string(),
    };
    let offset = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<i128> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return None;
        }
        let s: String = chars[start..*pos].iter().map(|&(_, c)| c).collect();
        s.parse().ok()
    };

    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(err(0, "empty polynomial"));
    }
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut sign = 1i128;
        match chars.get(pos).map(|&(_, c)| c) {
            Some('+') => pos += 1,
            Some('-') | Some('\u{2212}') => {
                sign = -1;
                pos += 1;
            }
            Some(_) if first => {}
            Some(_) => return Err(err(offset(pos), "expected '+' or '-'")),
            None => return Err(err(offset(pos), "unexpected end of input")),
        }
        first = false;
        skip_ws(&mut pos);
        let coeff_pos = pos;
        let coeff = read_int(&mut pos);
        if coeff.is_none() && pos < chars.len() && chars[pos].1.is_ascii_digit() {
            return Err(err(offset(coeff_pos), "coefficient out of range"));
        }
        skip_ws(&mut pos);
        let mut has_star = false;
        if chars.get(pos).map(|&(_, c)| c) == Some('*') {
            if coeff.is_none() {
                return Err(err(offset(pos), "'*' without a coefficient"));
            }
            has_star = true;
            pos += 1;
            skip_ws(&mut pos);
        }
        let exponent = if chars.get(pos).map(|&(_, c)| c) == Some('x') {
            pos += 1;
            skip_ws(&mut pos);
            if chars.get(pos).map(|&(_, c)| c) == Some('^') {
                pos += 1;
                skip_ws(&mut pos);
                let at = pos;
                let e = read_int(&mut pos).ok_or_else(|| err(offset(at), "expected exponent"))?;
                u64::try_from(e).map_err(|_| err(offset(at), "exponent out of range"))?
            } else {
                1
            }
        } else {
            if has_star {
                return Err(err(offset(pos), "expected 'x' after '*'"));
            }
            if coeff.is_none() {
                return Err(err(offset(pos), "expected a coefficient or 'x'"));
            }
            0
        };
        terms.push((exponent, sign * coeff.unwrap_or(1)));
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn poly(p: u64, k: u32, text: &str) -> SparsePolynomial {
        SparsePolynomial::parse(make_field(p, k).unwrap(), text).unwrap()
    }

    #[test]
    fn parsing() {
        let f = poly(47, 1, "1 + 4x - 5x^8");
        assert_eq!(f.exponents(), vec![0, 1, 8]);
        assert_eq!(f.terms()[2].1.raw(), 42);
        let g = poly(7, 1, "3*x^2 + x^2 - 4*x^2 + 1");
        assert_eq!(g.t(), 1);
        assert_eq!(poly(11, 1, "-x").terms()[0], (1, make_field(11, 1).unwrap().from_int(-1)));

        let f7 = make_field(7, 1).unwrap();
        for (text, pos) in [("1 + ", 4), ("1 + x^", 6), ("2 3", 2), ("*x", 0), ("", 0), ("1 + y", 4)] {
            match SparsePolynomial::parse(f7.clone(), text) {
                Err(Error::Parse { pos: got, .. }) => assert_eq!(got, pos, "{text:?}"),
                other => panic!("{text:?} parsed as {other:?}"),
            }
        }
        assert!(SparsePolynomial::parse(f7.clone(), "x - x").is_err());
        assert!(SparsePolynomial::parse(f7, "x^7").is_err());
    }

    #[test]
    fn canonicalization() {
        let f = poly(7, 1, "x^2 + x^5").canonicalize();
        assert_eq!(f.exponents(), vec![0, 3]);
        assert!(f.includes_zero());
        let g = poly(7, 1, "1 + x + x^3");
        assert_eq!(g.canonicalize(), g);
        assert!(!g.includes_zero());
        let h = poly(5, 1, "3x").canonicalize();
        assert_eq!(h.exponents(), vec![0]);
        assert_eq!(h.terms()[0].1.raw(), 3);
        assert!(h.includes_zero());
    }

    #[test]
    fn evaluation() {
        let f = poly(8581, 1, "-364 + 363x + x^2729");
        assert!(f.evaluate(f.field().one()).is_zero());
        let g = poly(2, 2, "1 + x + x^2");
        assert_eq!(g.evaluate(g.field().one()), g.field().one());
        let h = poly(13, 1, "x^5 - x - 1");
        assert_eq!(h.evaluate(h.field().zero()), h.field().from_int(-1));
    }

    #[test]
    fn root_enumeration() {
        assert_eq!(poly(7, 1, "x^6 - 1").roots_in_units().unwrap().count(), 6);
        assert_eq!(poly(2, 2, "1 + x + x^2").roots_in_units().unwrap().count(), 2);
        assert_eq!(poly(2, 3, "1 + x + x^3").roots_in_units().unwrap().count(), 3);
        let r = poly(7, 1, "1 + x^2 + x^4").roots_in_units().unwrap();
        assert_eq!(r.roots.iter().map(|e| e.raw()).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
    }

    #[test]
    fn enumeration_strategies_agree() {
        // table path vs difference path vs brute evaluation
        for text in ["3 + 2x + x^5", "1 + x^3 + 5x^9 + x^16", "2 + x^2"] {
            let f = poly(101, 1, text);
            let brute: Vec<Element> = f.field().units().filter(|&x| f.evaluate(x).is_zero()).collect();
            assert_eq!(f.roots_by_differences().len(), brute.len());
            let mut by_table = f.roots_by_tables().unwrap();
            by_table.sort();
            assert_eq!(by_table, brute);
            let mut by_difference = f.roots_by_differences();
            by_difference.sort();
            assert_eq!(by_difference, brute);
            assert_eq!(f.roots_in_units().unwrap().roots, brute);
        }
    }

    #[test]
    fn budgets() {
        let f = poly(101, 1, "1 + x");
        let tight = EnumerationBudget {
            prime_field: 100,
            extension_field: 100,
        };
        assert!(f.roots_in_units_with(&tight).unwrap_err().is_capability());
    }

    #[test]
    fn distinct_counts() {
        assert_eq!(poly(5, 1, "x^2 - x - 1").distinct_root_count_mod_p().unwrap(), (1, false));
        assert_eq!(poly(11, 1, "x^2 - x - 1").distinct_root_count_mod_p().unwrap(), (2, true));
        assert_eq!(poly(59, 1, "x^3 - x - 1").distinct_root_count_mod_p().unwrap(), (3, true));
        // x^2 * (x + 1): 0 is a double root
        assert_eq!(poly(7, 1, "x^3 + x^2").distinct_root_count_mod_p().unwrap(), (2, false));
        assert!(poly(2, 2, "1 + x").distinct_root_count_mod_p().is_err());
    }
}
