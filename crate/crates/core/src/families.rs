//! Explicit families of sparse polynomials with many roots, and verifiers that
//! check their root counts and coset invariants by enumeration.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{checked_pow, factorize, is_prime};
use crate::coset::{c_exact, d_bound, delta_of, min_coset_cover, CosetCover};
use crate::dense::DensePoly;
use crate::error::{Error, Result};
use crate::field::{make_field, Element, Field};
use crate::sparse::{EnumerationBudget, RootSet, SparsePolynomial};

/// Largest quotient-ring degree for the Frobenius witness.
pub const WITNESS_DEGREE_LIMIT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    R,
    G,
    H,
    Cyclotomic,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(FamilyKind::R),
            "g" => Ok(FamilyKind::G),
            "h" => Ok(FamilyKind::H),
            "cyclo" | "cyclotomic" => Ok(FamilyKind::Cyclotomic),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FamilyParams {
    Tup { t: u32, u: u32, p: u64 },
    Np { n: u64, p: u64 },
    Qt { q: u64, t: u64 },
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub kind: FamilyKind,
    pub params: FamilyParams,
    pub polynomial: SparsePolynomial,
    /// Closed-form root count in `F_q`; `None` for `h`.
    pub expected_count: Option<u64>,
    pub field: Field,
}

fn field_within_budget(p: u64, k: u32, budget: &EnumerationBudget) -> Result<Field> {
    let q = checked_pow(p, k).ok_or(Error::FieldTooLarge { p, k })?;
    let limit = if k == 1 {
        budget.prime_field
    } else {
        budget.extension_field
    };
    if q > limit {
        return Err(Error::Capability(format!(
            "F_{p}^{k} (q = {q}) exceeds the enumeration budget {limit}"
        )));
    }
    make_field(p, k)
}

fn unit_terms(field: &Field, exponents: &[u64]) -> Result<SparsePolynomial> {
    SparsePolynomial::new(field.clone(), exponents.iter().map(|&e| (e, field.one())))
}

fn check_tup(t: u32, u: u32, p: u64) -> Result<()> {
    if t < 2 || u < 1 {
        return Err(Error::InvalidArgument(format!("need t >= 2 and u >= 1, got t = {t}, u = {u}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `r_{t,u,p} = 1 + x + x^{p^u} + ... + x^{p^{(t-2)u}}` over `F_{p^{(t-1)u}}`.
/// For `t = 2` the two linear terms coincide and the result is `1 + x`.
pub fn make_r(t: u32, u: u32, p: u64) -> Result<FamilyInstance> {
    make_r_with(t, u, p, &EnumerationBudget::default())
}

pub fn make_r_with(t: u32, u: u32, p: u64, budget: &EnumerationBudget) -> Result<FamilyInstance> {
    check_tup(t, u, p)?;
    let field = field_within_budget(p, (t - 1) * u, budget)?;
    let mut exponents: BTreeSet<u64> = BTreeSet::from([0, 1]);
    for i in 0..=t - 2 {
        exponents.insert(p.pow(i * u));
    }
    let exponents: Vec<u64> = exponents.into_iter().collect();
    Ok(FamilyInstance {
        kind: FamilyKind::R,
        params: FamilyParams::Tup { t, u, p },
        polynomial: unit_terms(&field, &exponents)?,
        expected_count: Some(p.pow((t - 2) * u)),
        field,
    })
}

/// `g_{t,u,p} = 1 + x + x^{1+p^u} + ... + x^{1+p^u+...+p^{(t-2)u}}` over
/// `F_{p^{tu}}`.
pub fn make_g(t: u32, u: u32, p: u64) -> Result<FamilyInstance> {
    make_g_with(t, u, p, &EnumerationBudget::default())
}

pub fn make_g_with(t: u32, u: u32, p: u64, budget: &EnumerationBudget) -> Result<FamilyInstance> {
    check_tup(t, u, p)?;
    let field = field_within_budget(p, t * u, budget)?;
    let pu = p.pow(u);
    let mut exponents = vec![0u64];
    let mut partial = 0u64;
    for i in 0..=t - 2 {
        partial += pu.pow(i);
        exponents.push(partial);
    }
    let expected = (pu.pow(t - 1) - 1) / (pu - 1);
    Ok(FamilyInstance {
        kind: FamilyKind::G,
        params: FamilyParams::Tup { t, u, p },
        polynomial: unit_terms(&field, &exponents)?,
        expected_count: Some(expected),
        field,
    })
}

/// `h_{n,p} = x^n - x - 1` over `F_p`, for `p >= n + 2`.
pub fn make_h(n: u64, p: u64) -> Result<FamilyInstance> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("h needs n >= 2, got {n}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < n + 2 {
        return Err(Error::InvalidArgument(format!(
            "h_(n,p) requires a prime p >= n + 2; got n = {n}, p = {p}"
        )));
    }
    let field = make_field(p, 1)?;
    let polynomial = SparsePolynomial::from_int_terms(field.clone(), &[(0, -1), (1, -1), (n, 1)])?;
    Ok(FamilyInstance {
        kind: FamilyKind::H,
        params: FamilyParams::Np { n, p },
        polynomial,
        expected_count: None,
        field,
    })
}

/// `(x^{q-1} - 1)/(x^{(q-1)/t} - 1) = 1 + x^{(q-1)/t} + ... + x^{(t-1)(q-1)/t}`.
pub fn make_cyclotomic_quotient(q: u64, t: u64) -> Result<FamilyInstance> {
    let factors = factorize(q);
    let [(p, k)] = factors[..] else {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    };
    if t < 2 || !(q - 1).is_multiple_of(t) {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 2 and divide q - 1 = {}", q - 1)));
    }
    let field = make_field(p, k)?;
    let step = (q - 1) / t;
    let exponents: Vec<u64> = (0..t).map(|i| i * step).collect();
    Ok(FamilyInstance {
        kind: FamilyKind::Cyclotomic,
        params: FamilyParams::Qt { q, t },
        polynomial: unit_terms(&field, &exponents)?,
        expected_count: Some((t - 1) * step),
        field,
    })
}

/// Trace of `a` from `F_{p^{tu}}` down to `F_{p^u}`.
fn trace_to_subfield(field: &Field, a: Element, t: u32, u: u32) -> Element {
    let pu = field.p().pow(u);
    let mut acc = field.zero();
    let mut conj = a;
    for _ in 0..t {
        acc = field.add(acc, conj);
        conj = field.pow_u(conj, pu);
    }
    acc
}

/// Roots of `g_{t,u,p}` as `a^{p^u - 1}` for nonzero trace-zero `a`.
pub fn trace_zero_roots(t: u32, u: u32, p: u64) -> Result<RootSet> {
    let instance = make_g(t, u, p)?;
    let field = &instance.field;
    field.dlog_table()?;
    let pu = p.pow(u);
    let kernel: Vec<Element> = field
        .elements()
        .filter(|&a| trace_to_subfield(field, a, t, u).is_zero())
        .collect();
    let expected_kernel = p.pow((t - 1) * u);
    if kernel.len() as u64 != expected_kernel {
        return Err(Error::Verification(format!(
            "trace-zero set has {} elements, expected {expected_kernel}",
            kernel.len()
        )));
    }
    let images: Vec<Element> = kernel
        .iter()
        .filter(|a| !a.is_zero())
        .map(|&a| field.pow_u(a, pu - 1))
        .collect();
    if let Some(bad) = images.iter().find(|&&x| !instance.polynomial.evaluate(x).is_zero()) {
        return Err(Error::Verification(format!(
            "trace-zero image {} is not a root",
            field.format(*bad)
        )));
    }
    let roots = RootSet::new(field.clone(), images, false);
    let expected = instance.expected_count.expect("g has a closed form");
    if roots.count() as u64 != expected {
        return Err(Error::Verification(format!(
            "trace-zero images give {} roots, expected {expected}",
            roots.count()
        )));
    }
    Ok(roots)
}

/// Checks `x^q = x` in `F_p[x]/(r_{t,u,p})` by iterating the `p^u`-power map
/// `t - 1` times, without touching the field `F_q`.
pub fn frobenius_witness(t: u32, u: u32, p: u64) -> Result<bool> {
    check_tup(t, u, p)?;
    let degree = checked_pow(p, (t - 2) * u).filter(|&d| d <= WITNESS_DEGREE_LIMIT).ok_or_else(|| {
        Error::Capability(format!(
            "quotient degree p^((t-2)u) exceeds {WITNESS_DEGREE_LIMIT}"
        ))
    })?;
    let pu = p.pow(u);
    let mut terms: Vec<(usize, u64)> = vec![(0, 1), (1, 1)];
    for i in 1..=t - 2 {
        terms.push((pu.pow(i) as usize, 1));
    }
    let modulus = DensePoly::from_terms(p, terms);
    debug_assert_eq!(modulus.degree(), Some(degree.max(1) as usize));
    let x = DensePoly::monomial(p, 1, 1).rem(&modulus);
    let mut power = x.clone();
    for _ in 0..t - 1 {
        power = power.pow_mod(pu, &modulus);
    }
    Ok(power == x)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerification {
    pub kind: FamilyKind,
    pub params: FamilyParams,
    pub q: u64,
    pub polynomial: String,
    pub expected_count: Option<u64>,
    pub root_count: usize,
    pub delta: u64,
    pub c_exact: u64,
    pub d_bound: u64,
    /// Minimum coset cover, computed for the cyclotomic family only.
    pub cover: Option<CosetCover>,
    /// `(count, squarefree)` over `F_p`, `h` only.
    pub distinct_roots: Option<(usize, bool)>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Enumerates the roots of an instance and checks every closed-form claim
/// about it. Mismatches show up as failed checks, not errors.
pub fn verify_family(instance: &FamilyInstance) -> Result<FamilyVerification> {
    let f = &instance.polynomial;
    let q = instance.field.q();
    let z = f.roots_in_units()?;
    let exponents = f.exponents();
    let delta = delta_of(&exponents, q);
    let c = c_exact(&z)?;
    let d = d_bound(&exponents, q)?;
    let mut checks = Vec::new();
    let mut cover = None;

    if let Some(expected) = instance.expected_count {
        checks.push(Check::new(
            "root_count",
            z.count() as u64 == expected,
            format!("enumerated {}, expected {expected}", z.count()),
        ));
    }
    checks.push(Check::new("c_le_d", c <= d, format!("C = {c}, D = {d}")));

    let mut distinct_roots = None;
    match (instance.kind, instance.params) {
        (FamilyKind::R, FamilyParams::Tup { t, u, p }) => {
            checks.push(Check::new("delta_is_1", delta == 1, format!("delta = {delta}")));
            checks.push(Check::new("c_is_1", c == 1, format!("C = {c}")));
            match frobenius_witness(t, u, p) {
                Ok(ok) => checks.push(Check::new(
                    "frobenius_witness",
                    ok,
                    "x^q = x in F_p[x]/(r)".to_string(),
                )),
                Err(e) if e.is_capability() => {}
                Err(e) => return Err(e),
            }
        }
        (FamilyKind::G, FamilyParams::Tup { t, u, p }) => {
            checks.push(Check::new("delta_is_1", delta == 1, format!("delta = {delta}")));
            let half = (t / 2) as u64;
            checks.push(Check::new(
                "d_le_half_t",
                d <= half,
                format!("D = {d}, floor(t/2) = {half}"),
            ));
            let refined = g_d_refined_bound(t, u, p);
            checks.push(Check::new(
                "d_le_gcd_bound",
                d <= refined,
                format!("D = {d}, max_l (p^(gcd(l,t)u)-1)/(p^u-1) * gcd(l, p^u-1) = {refined}"),
            ));
            let via_trace = trace_zero_roots(t, u, p)?;
            checks.push(Check::new(
                "trace_zero_roots",
                via_trace.roots == z.roots,
                format!("{} images vs {} enumerated", via_trace.count(), z.count()),
            ));
        }
        (FamilyKind::H, _) => {
            checks.push(Check::new("delta_is_1", delta == 1, format!("delta = {delta}")));
            checks.push(Check::new("c_le_1", c <= 1, format!("C = {c}")));
            distinct_roots = Some(f.distinct_root_count_mod_p()?);
        }
        (FamilyKind::Cyclotomic, FamilyParams::Qt { q, t }) => {
            let expected_delta = (q - 1) / t;
            checks.push(Check::new(
                "delta",
                delta == expected_delta,
                format!("delta = {delta}, expected {expected_delta}"),
            ));
            let found = min_coset_cover(&z)?;
            checks.push(Check::new(
                "cover_le_t_minus_1",
                (found.size as u64) < t,
                format!("{:?} cover of size {}", found.method, found.size),
            ));
            cover = Some(found);
        }
        _ => unreachable!("constructors pair kinds with their parameters"),
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(FamilyVerification {
        kind: instance.kind,
        params: instance.params,
        q,
        polynomial: f.to_string(),
        expected_count: instance.expected_count,
        root_count: z.count(),
        delta,
        c_exact: c,
        d_bound: d,
        cover,
        distinct_roots,
        checks,
        passed,
    })
}

/// `max over 1 <= l <= t/2` of `(p^{gcd(l,t)u} - 1)/(p^u - 1) * gcd(l, p^u - 1)`,
/// an upper bound on `D(g_{t,u,p})`. It exceeds `floor(t/2)` whenever some
/// `l <= t/2` shares a factor with `t`.
pub fn g_d_refined_bound(t: u32, u: u32, p: u64) -> u64 {
    let pu = p.pow(u);
    (1..=t / 2)
        .map(|l| {
            let g = crate::arith::gcd(l as u64, t as u64) as u32;
            (pu.pow(g) - 1) / (pu - 1) * crate::arith::gcd(l as u64, pu - 1)
        })
        .max()
        .unwrap_or(1)
}

/// Every `(t, u, p)` with `t` in `ts`, `u` in `us` and field size `p^{k(t,u)}`
/// at most `q_max`.
pub fn tup_grid(kind: FamilyKind, ts: &[u32], us: &[u32], q_max: u64) -> Vec<(u32, u32, u64)> {
    let mut out = Vec::new();
    for &t in ts {
        for &u in us {
            let k = match kind {
                FamilyKind::R => (t - 1) * u,
                FamilyKind::G => t * u,
                _ => return out,
            };
            // p^k <= q_max
            let p_max = (1..).take_while(|&p: &u64| checked_pow(p, k).is_some_and(|v| v <= q_max)).last().unwrap_or(1);
            for p in crate::arith::primes_up_to(p_max) {
                out.push((t, u, p));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verify(instance: FamilyInstance) -> FamilyVerification {
        let v = verify_family(&instance).unwrap();
        assert!(v.passed, "{:?}", v.checks);
        v
    }

    #[test]
    fn r_family() {
        let r = make_r(3, 1, 2).unwrap();
        assert_eq!(r.polynomial.exponents(), vec![0, 1, 2]);
        assert_eq!(r.field.q(), 4);
        assert_eq!(r.expected_count, Some(2));
        let r = make_r(3, 1, 3).unwrap();
        assert_eq!(r.polynomial.exponents(), vec![0, 1, 3]);
        assert_eq!(r.expected_count, Some(3));
        let r = make_r(2, 1, 5).unwrap();
        assert_eq!(r.polynomial.exponents(), vec![0, 1]);
        assert_eq!(r.expected_count, Some(1));

        let v = verify(make_r(4, 1, 3).unwrap());
        assert_eq!((v.q, v.root_count, v.delta, v.c_exact), (27, 9, 1, 1));
    }

    #[test]
    fn g_family() {
        let g = make_g(3, 1, 2).unwrap();
        assert_eq!(g.polynomial.exponents(), vec![0, 1, 3]);
        assert_eq!((g.field.q(), g.expected_count), (8, Some(3)));
        let g = make_g(3, 1, 3).unwrap();
        assert_eq!(g.polynomial.exponents(), vec![0, 1, 4]);
        assert_eq!((g.field.q(), g.expected_count), (27, Some(4)));
        let g = make_g(2, 1, 3).unwrap();
        assert_eq!((g.field.q(), g.expected_count), (9, Some(1)));

        let v = verify(make_g(3, 2, 3).unwrap());
        assert_eq!((v.q, v.root_count, v.c_exact), (729, 10, 1));
    }

    #[test]
    fn g_4_1_2_has_order_three_coset() {
        // On F_4^* inside F_16, x^3 = 1 and x^7 = x, so 1 + x + x^3 + x^7 = 0.
        let g = make_g(4, 1, 2).unwrap();
        let field = g.field.clone();
        let sub: Vec<Element> = field.units().filter(|&x| field.pow_u(x, 3) == field.one()).collect();
        assert_eq!(sub.len(), 3);
        assert!(sub.iter().all(|&x| g.polynomial.evaluate(x).is_zero()));

        let v = verify_family(&g).unwrap();
        assert_eq!((v.q, v.root_count, v.c_exact, v.d_bound), (16, 7, 3, 3));
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["d_le_half_t"]);
        assert!(!v.passed);
        assert_eq!(g_d_refined_bound(4, 1, 2), 3);
    }

    #[test]
    fn refined_bound_matches_half_t_for_prime_t() {
        for (t, u, p) in [(3, 1, 2), (5, 1, 3), (7, 2, 5), (2, 3, 7)] {
            assert!(g_d_refined_bound(t, u, p) <= (t / 2) as u64);
        }
        assert_eq!(g_d_refined_bound(3, 1, 7), 1);
        assert_eq!(g_d_refined_bound(5, 1, 2), 1);
        assert_eq!(g_d_refined_bound(5, 1, 3), 2);
        assert_eq!(g_d_refined_bound(4, 1, 3), 8);
    }

    #[test]
    fn trace_zero() {
        assert_eq!(trace_zero_roots(3, 1, 2).unwrap().count(), 3);
        assert_eq!(trace_zero_roots(3, 1, 3).unwrap().count(), 4);
        let tiny = trace_zero_roots(2, 1, 2).unwrap();
        assert_eq!(tiny.roots, vec![tiny.field.one()]);
    }

    #[test]
    fn h_family() {
        let v = verify(make_h(2, 11).unwrap());
        assert_eq!(v.distinct_roots, Some((2, true)));
        let v = verify(make_h(3, 59).unwrap());
        assert_eq!(v.distinct_roots, Some((3, true)));
        verify(make_h(5, 7).unwrap());
        assert!(make_h(5, 5).is_err());
        assert!(make_h(1, 5).is_err());
    }

    #[test]
    fn cyclotomic() {
        let c = make_cyclotomic_quotient(7, 3).unwrap();
        assert_eq!(c.polynomial.exponents(), vec![0, 2, 4]);
        let v = verify(c);
        assert_eq!(v.root_count, 4);
        assert_eq!(v.cover.as_ref().unwrap().size, 2);
        let v = verify(make_cyclotomic_quotient(7, 2).unwrap());
        assert_eq!(v.root_count, 3);
        let v = verify(make_cyclotomic_quotient(13, 4).unwrap());
        assert_eq!((v.root_count, v.delta), (9, 3));
        assert_eq!(v.cover.as_ref().unwrap().size, 2);
        assert!(make_cyclotomic_quotient(13, 5).is_err());
        assert!(make_cyclotomic_quotient(12, 1).is_err());
        verify(make_cyclotomic_quotient(9, 4).unwrap());
    }

    #[test]
    fn witness() {
        assert!(frobenius_witness(3, 1, 2).unwrap());
        assert!(frobenius_witness(4, 1, 3).unwrap());
        assert!(frobenius_witness(3, 2, 5).unwrap());
        assert!(frobenius_witness(2, 1, 7).unwrap());
        assert!(frobenius_witness(3, 1, 4099).unwrap_err().is_capability());
    }

    #[test]
    fn budget_errors() {
        assert!(make_r(5, 2, 7).unwrap_err().is_capability());
        assert!(make_g(3, 3, 11).unwrap_err().is_capability());
    }

    #[test]
    fn grid_shapes() {
        let grid = tup_grid(FamilyKind::R, &[3], &[2], 1_000_000);
        assert_eq!(grid.last(), Some(&(3, 2, 31)));
        let grid = tup_grid(FamilyKind::G, &[2], &[1], 100);
        assert_eq!(grid.iter().map(|g| g.2).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
    }
}
