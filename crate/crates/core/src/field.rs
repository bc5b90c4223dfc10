//! Arithmetic in `F_q`, `q = p^k`, together with the cyclic structure of the
//! unit group: a canonical generator, discrete-log tables and subgroup data.
//!
//! Elements are stored as their power-basis coordinates `(c_0, ..., c_{k-1})`
//! packed into the base-`p` numeral `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! The numeral doubles as the canonical enumeration order, and elements of the
//! prime subfield are their own residues.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::arith::{checked_pow, factorize, is_prime};
use crate::dense::DensePoly;
use crate::error::{Error, Result};

/// Default upper bound on `q` for building discrete-log tables.
pub const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 24;

/// Shared handle to a field.
pub type Field = Arc<FieldSpec>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Element(u64);

impl Element {
    /// Caller guarantees `raw < q` for the field it is used with.
    #[inline]
    pub(crate) const fn from_raw(raw: u64) -> Self {
        Element(raw)
    }

    /// The packed base-`p` numeral (the position in canonical order).
    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `exp[i] = g^i` and `log[g^i] = i` for the canonical generator `g`.
pub struct DlogTable {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for DlogTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DlogTable(order {})", self.exp.len())
    }
}

impl DlogTable {
    pub fn order(&self) -> u64 {
        self.exp.len() as u64
    }

    /// Index of a unit base the generator; `None` for zero.
    #[inline]
    pub fn index(&self, a: Element) -> Option<u64> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize] as u64)
        }
    }

    /// `g^i`, with `i` reduced modulo `q - 1`.
    #[inline]
    pub fn power(&self, i: u64) -> Element {
        Element(self.exp[(i % self.exp.len() as u64) as usize] as u64)
    }

    pub fn exp_slice(&self) -> &[u32] {
        &self.exp
    }

    pub fn log_slice(&self) -> &[u32] {
        &self.log
    }

    pub fn to_map(&self) -> BTreeMap<u64, u64> {
        self.exp
            .iter()
            .enumerate()
            .map(|(i, &x)| (x as u64, i as u64))
            .collect()
    }
}

pub struct FieldSpec {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, coefficients ascending including the leading 1; `None`
    /// for prime fields.
    modulus: Option<Vec<u64>>,
    table_threshold: u64,
    generator: OnceLock<Element>,
    tables: OnceLock<Arc<DlogTable>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Serialized form of a field: `{p, k, modulus}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub modulus: Option<Vec<u64>>,
}

/// Builds `F_{p^k}` with the deterministic modulus.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    FieldSpec::new(p, k)
}

impl FieldSpec {
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Self::with_table_threshold(p, k, DEFAULT_TABLE_THRESHOLD)
    }

    pub fn with_table_threshold(p: u64, k: u32, table_threshold: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = checked_pow(p, k)
            .filter(|&q| p < (1 << 31) && q < (1 << 62))
            .ok_or(Error::FieldTooLarge { p, k })?;
        let modulus = (k > 1).then(|| least_irreducible(p, k));
        Ok(Arc::new(FieldSpec {
            p,
            k,
            q,
            modulus,
            table_threshold,
            generator: OnceLock::new(),
            tables: OnceLock::new(),
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn table_threshold(&self) -> u64 {
        self.table_threshold
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            q: self.q,
            modulus: self.modulus.clone(),
        }
    }

    // ---- elements ----------------------------------------------------------

    pub fn zero(&self) -> Element {
        Element(0)
    }

    pub fn one(&self) -> Element {
        Element(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Element {
        Element(n.rem_euclid(self.p as i64) as u64)
    }

    /// Element from its power-basis coordinates; missing high coordinates are
    /// zero.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Element> {
        if coeffs.len() > self.k as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.k
            )));
        }
        let mut raw = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {c} not reduced mod {}",
                    self.p
                )));
            }
            raw = raw * self.p + c;
        }
        Ok(Element(raw))
    }

    /// Element at position `raw` of the canonical order.
    pub fn element(&self, raw: u64) -> Result<Element> {
        if raw < self.q {
            Ok(Element(raw))
        } else {
            Err(Error::ForeignElement { q: self.q })
        }
    }

    /// Length-`k` coordinate vector.
    pub fn coeffs(&self, a: Element) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut x = a.0;
        for _ in 0..self.k {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn contains(&self, a: Element) -> bool {
        a.0 < self.q
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.q).map(Element)
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = Element> {
        (1..self.q).map(Element)
    }

    pub fn format(&self, a: Element) -> String {
        if self.k == 1 {
            a.0.to_string()
        } else {
            let c = self.coeffs(a);
            format!(
                "[{}]",
                c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            )
        }
    }

    // ---- arithmetic --------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Element(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Element(a.0 ^ b.0);
        }
        let p = self.p;
        let (mut x, mut y, mut pw, mut out) = (a.0, b.0, 1u64, 0u64);
        while x != 0 || y != 0 {
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        Element(out)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if self.k == 1 {
            return Element(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let (mut x, mut pw, mut out) = (a.0, 1u64, 0u64);
        while x != 0 {
            let d = x % p;
            out += if d == 0 { 0 } else { p - d } * pw;
            x /= p;
            pw *= p;
        }
        Element(out)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if self.k == 1 {
            return Element(a.0 * b.0 % self.p);
        }
        if a.0 == 0 || b.0 == 0 {
            return Element(0);
        }
        if let Some(t) = self.tables.get() {
            let n = self.q - 1;
            let i = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
            return Element(t.exp[(if i >= n { i - n } else { i }) as usize] as u64);
        }
        self.mul_poly(a, b)
    }

    /// Schoolbook product of coordinate vectors reduced by the modulus.
    fn mul_poly(&self, a: Element, b: Element) -> Element {
        let p = self.p;
        let k = self.k as usize;
        let modulus = self.modulus.as_ref().expect("extension modulus");
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (j, &m) in modulus[..k].iter().enumerate() {
                let idx = deg - k + j;
                prod[idx] = (prod[idx] + (p - m) * c) % p;
            }
        }
        let mut raw = 0u64;
        for &c in prod[..k].iter().rev() {
            raw = raw * p + c;
        }
        Element(raw)
    }

    /// Square-and-multiply with a non-negative exponent. `0^0 = 1`.
    pub fn pow_u(&self, a: Element, e: u64) -> Element {
        if a.0 == 0 {
            return if e == 0 { Element(1) } else { Element(0) };
        }
        let n = self.q - 1;
        if let Some(t) = self.tables.get() {
            let i = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as u64;
            return Element(t.exp[i as usize] as u64);
        }
        let mut e = e % n;
        let mut base = a;
        let mut acc = Element(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Integer power; a negative exponent inverts first.
    pub fn pow(&self, a: Element, e: i64) -> Result<Element> {
        if e >= 0 {
            Ok(self.pow_u(a, e as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow_u(inv, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: Element) -> Result<Element> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u(a, self.q - 2))
    }

    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The `p`-power Frobenius applied `times` times.
    pub fn frobenius(&self, a: Element, times: u32) -> Element {
        let mut x = a;
        for _ in 0..times {
            x = self.pow_u(x, self.p);
        }
        x
    }

    // ---- unit group --------------------------------------------------------

    /// Multiplicative order of a unit.
    pub fn order(&self, a: Element) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.q - 1;
        for (prime, _) in factorize(self.q - 1) {
            while ord.is_multiple_of(prime) && self.pow_u(a, ord / prime).0 == 1 {
                ord /= prime;
            }
        }
        Ok(ord)
    }

    /// First element in canonical order whose multiplicative order is `q - 1`.
    pub fn generator(&self) -> Element {
        *self.generator.get_or_init(|| {
            let n = self.q - 1;
            let primes: Vec<u64> = factorize(n).into_iter().map(|(l, _)| l).collect();
            self.units()
                .find(|&g| primes.iter().all(|&l| self.pow_u(g, n / l).0 != 1))
                .expect("finite fields have cyclic unit groups")
        })
    }

    /// Discrete-log tables for the canonical generator, built on first use.
    pub fn dlog_table(&self) -> Result<Arc<DlogTable>> {
        if let Some(t) = self.tables.get() {
            return Ok(Arc::clone(t));
        }
        if self.q > self.table_threshold {
            return Err(Error::Capability(format!(
                "q = {} exceeds the discrete-log table threshold {}; use direct powering",
                self.q, self.table_threshold
            )));
        }
        let g = self.generator();
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x = Element(1);
        for i in 0..n {
            exp.push(x.0 as u32);
            log[x.0 as usize] = i as u32;
            x = if self.k == 1 {
                self.mul(x, g)
            } else {
                self.mul_poly(x, g)
            };
        }
        debug_assert_eq!(x.0, 1);
        let table = Arc::new(DlogTable { exp, log });
        Ok(Arc::clone(self.tables.get_or_init(|| table)))
    }

    /// Whether tables exist or may be built.
    pub fn has_tables(&self) -> bool {
        self.q <= self.table_threshold
    }

    /// Discrete log of a unit, via the table when allowed and by baby-step
    /// search otherwise.
    pub fn dlog(&self, a: Element) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.has_tables() {
            return Ok(self.dlog_table()?.index(a).expect("unit"));
        }
        let g = self.generator();
        let mut x = Element(1);
        for i in 0..self.q - 1 {
            if x == a {
                return Ok(i);
            }
            x = self.mul(x, g);
        }
        unreachable!("generator spans the unit group")
    }
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`, compared
/// on `(c_0, c_1, ..., c_{k-1})`. Returned with the leading 1 appended.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut digits = vec![0u64; k];
    loop {
        // digits[0] is the most significant position: c_0.
        let mut coeffs = digits.clone();
        coeffs.push(1);
        if coeffs[0] != 0 {
            let f = DensePoly::new(p, coeffs.clone());
            if f.is_irreducible() {
                return coeffs;
            }
        }
        let mut i = k;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: monic degree-k polys with no roots, lexicographic minimum.
    fn brute_least_rootless(p: u64, k: usize) -> Vec<u64> {
        let total = p.pow(k as u32);
        let mut best: Option<Vec<u64>> = None;
        for code in 0..total {
            let mut c = code;
            let mut tuple = vec![0; k];
            for slot in tuple.iter_mut() {
                *slot = c % p;
                c /= p;
            }
            let rootless = (0..p).all(|x| {
                let mut acc = 1u64;
                for &ci in tuple.iter().rev() {
                    acc = (acc * x + ci) % p;
                }
                acc != 0
            });
            if rootless && best.as_ref().is_none_or(|b| tuple < *b) {
                best = Some(tuple);
            }
        }
        let mut out = best.unwrap();
        out.push(1);
        out
    }

    #[test]
    fn prime_field_construction() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        assert!(f.modulus().is_none());
        assert!(matches!(make_field(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(make_field(5, 0), Err(Error::ZeroDegree)));
    }

    #[test]
    fn least_moduli_match_enumeration() {
        assert_eq!(make_field(2, 3).unwrap().modulus().unwrap(), &brute_least_rootless(2, 3)[..]);
        assert_eq!(make_field(3, 2).unwrap().modulus().unwrap(), &brute_least_rootless(3, 2)[..]);
        assert_eq!(make_field(5, 3).unwrap().modulus().unwrap(), &brute_least_rootless(5, 3)[..]);
        // x^3 + x^2 + 1 is lex-least on (c0, c1, c2) = (1, 0, 1).
        assert_eq!(make_field(2, 3).unwrap().modulus().unwrap(), &[1, 0, 1, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus().unwrap(), &[1, 0, 1]);
    }

    #[test]
    fn small_arithmetic() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert!(matches!(f5.inv(f5.zero()), Err(Error::DivisionByZero)));
        assert_eq!(f5.pow(f5.from_int(2), -1).unwrap(), f5.from_int(3));

        let f8 = make_field(2, 3).unwrap();
        for x in f8.units() {
            assert_eq!(f8.pow_u(x, 7), f8.one());
        }
        let f9 = make_field(3, 2).unwrap();
        let g = f9.generator();
        assert_eq!(f9.pow_u(g, 8), f9.one());
        assert_ne!(f9.pow_u(g, 4), f9.one());
    }

    #[test]
    fn generators() {
        let gen = |p| make_field(p, 1).unwrap().generator().raw();
        assert_eq!(gen(5), 2);
        assert_eq!(gen(7), 3);
        assert_eq!(gen(2), 1);
        assert_eq!(gen(3), 2);
        for (p, k) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, k).unwrap();
            let g = f.generator();
            assert_eq!(f.order(g).unwrap(), f.q() - 1);
            // nothing earlier in canonical order generates
            for x in 1..g.raw() {
                assert!(f.order(Element(x)).unwrap() < f.q() - 1);
            }
        }
    }

    #[test]
    fn dlog_tables() {
        let f5 = make_field(5, 1).unwrap();
        let t = f5.dlog_table().unwrap();
        assert_eq!(t.to_map(), BTreeMap::from([(1, 0), (2, 1), (4, 2), (3, 3)]));
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.dlog_table().unwrap().to_map(), BTreeMap::from([(1, 0), (2, 1)]));
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.dlog_table().unwrap().index(f7.from_int(6)), Some(3));

        let capped = FieldSpec::with_table_threshold(101, 1, 50).unwrap();
        assert!(capped.dlog_table().unwrap_err().is_capability());
        assert_eq!(capped.dlog(capped.from_int(1)).unwrap(), 0);
    }

    #[test]
    fn table_and_polynomial_products_agree() {
        let f = make_field(3, 3).unwrap();
        let slow: Vec<Element> = f
            .units()
            .flat_map(|a| f.units().map(move |b| (a, b)))
            .map(|(a, b)| f.mul_poly(a, b))
            .collect();
        f.dlog_table().unwrap();
        let fast: Vec<Element> = f
            .units()
            .flat_map(|a| f.units().map(move |b| (a, b)))
            .map(|(a, b)| f.mul(a, b))
            .collect();
        assert_eq!(slow, fast);
    }

    #[test]
    fn coordinates_round_trip() {
        let f = make_field(3, 2).unwrap();
        let a = f.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(a.raw(), 5);
        assert_eq!(f.coeffs(a), vec![2, 1]);
        assert!(f.from_coeffs(&[3]).is_err());
        assert!(f.from_coeffs(&[0, 0, 1]).is_err());
        assert_eq!(f.coeffs(f.one()), vec![1, 0]);
    }

    #[test]
    fn deterministic_construction() {
        let a = make_field(5, 3).unwrap();
        let b = make_field(5, 3).unwrap();
        assert_eq!(*a, *b);
        assert_eq!(a.generator(), b.generator());
    }
}
