use std::collections::BTreeMap;

use proptest::prelude::*;

use fqsparse::arith::{gcd, pow_mod};
use fqsparse::coset::{bounds_report, c_exact, d_bound};
use fqsparse::number_theory::swan_resultant;
use fqsparse::search::{max_roots_for_prime, Convention};
use fqsparse::{make_field, Element, Field, RootSet, SparsePolynomial};

const FIELDS: [(u64, u32); 12] = [
    (2, 1),
    (2, 3),
    (2, 4),
    (2, 6),
    (3, 2),
    (3, 3),
    (5, 1),
    (5, 2),
    (7, 2),
    (13, 1),
    (31, 1),
    (11, 3),
];

fn field(i: usize) -> Field {
    let (p, k) = FIELDS[i % FIELDS.len()];
    make_field(p, k).unwrap()
}

fn elem(f: &Field, raw: u64) -> Element {
    f.element(raw % f.q()).unwrap()
}

prop_compose! {
    /// A t-nomial over one of the test fields with random exponents and
    /// nonzero coefficients.
    fn sparse_poly()(fi in 0..FIELDS.len(), t in 2usize..=6, seeds in prop::collection::vec((any::<u64>(), any::<u64>()), 6))
        -> SparsePolynomial
    {
        let f = field(fi);
        let q = f.q();
        let mut terms = BTreeMap::new();
        for &(e, c) in seeds.iter().take(t) {
            terms.insert(e % q, elem(&f, 1 + c % (q - 1)));
        }
        if terms.len() < 2 {
            terms.insert((terms.keys().next().unwrap() + 1) % q, f.one());
        }
        SparsePolynomial::new(f, terms).unwrap()
    }
}

fn brute_roots(f: &SparsePolynomial) -> Vec<Element> {
    f.field().units().filter(|&x| f.evaluate(x).is_zero()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(fi in 0..FIELDS.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(fi);
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        let q = f.q();
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
        }
        if !a.is_zero() {
            prop_assert_eq!(f.pow_u(a, q - 1), f.one());
        }
        prop_assert_eq!(f.pow_u(a, q), a);
        // freshman's dream
        let p = f.p();
        prop_assert_eq!(f.pow_u(f.add(a, b), p), f.add(f.pow_u(a, p), f.pow_u(b, p)));
    }

    #[test]
    fn dlog_round_trip(fi in 0..FIELDS.len(), a in any::<u64>()) {
        let f = field(fi);
        let x = elem(&f, 1 + a % (f.q() - 1));
        let i = f.dlog(x).unwrap();
        prop_assert_eq!(f.pow_u(f.generator(), i), x);
    }

    #[test]
    fn roots_match_brute_force(poly in sparse_poly()) {
        let z = poly.roots_in_units().unwrap();
        prop_assert_eq!(&z.roots, &brute_roots(&poly));
        prop_assert_eq!(poly.includes_zero(), poly.evaluate(poly.field().zero()).is_zero());
    }

    #[test]
    fn roots_invariant_under_canonicalize_and_scaling(poly in sparse_poly(), c in any::<u64>()) {
        let z = poly.roots_in_units().unwrap();
        prop_assert_eq!(&poly.canonicalize().roots_in_units().unwrap().roots, &z.roots);
        let f = poly.field().clone();
        let c = elem(&f, 1 + c % (f.q() - 1));
        prop_assert_eq!(&poly.scale(c).unwrap().roots_in_units().unwrap().roots, &z.roots);
    }

    #[test]
    fn substitution_preserves_root_count(poly in sparse_poly(), m in 1u64..1000) {
        let f = poly.field().clone();
        let n = f.q() - 1;
        prop_assume!(gcd(m, n) == 1);
        // x -> x^m on units: reduce exponents mod q - 1, keeping 0 as 0
        let mut terms: BTreeMap<u64, Element> = BTreeMap::new();
        for &(e, c) in poly.terms() {
            let e2 = if e == 0 { 0 } else { as_unit_exponent(e * m % n, n) };
            let slot = terms.entry(e2).or_insert(f.zero());
            *slot = f.add(*slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        let before = poly.roots_in_units().unwrap().count();
        let after = if terms.is_empty() {
            n as usize
        } else {
            SparsePolynomial::new(f.clone(), terms).unwrap().roots_in_units().unwrap().count()
        };
        prop_assert_eq!(before, after);
    }

    #[test]
    fn bounds_never_violated(poly in sparse_poly()) {
        let report = bounds_report(&poly).unwrap();
        prop_assert!(report.violations().is_empty(), "{:?} {:?}", poly, report.violations());
    }

    #[test]
    fn c_invariant_under_translation(poly in sparse_poly(), u in any::<u64>()) {
        let z = poly.roots_in_units().unwrap();
        let f = poly.field().clone();
        let u = elem(&f, 1 + u % (f.q() - 1));
        let moved = RootSet::new(f.clone(), z.roots.iter().map(|&x| f.mul(u, x)).collect(), false);
        prop_assert_eq!(c_exact(&z).unwrap(), c_exact(&moved).unwrap());
        let c = c_exact(&z).unwrap();
        prop_assert!(c <= d_bound(&poly.canonicalize().exponents(), f.q()).unwrap());
    }
}

fn as_unit_exponent(r: u64, n: u64) -> u64 {
    if r == 0 {
        n
    } else {
        r
    }
}

/// `h[v] = #{x : -(x^e2 + x^e3) = v}` by direct powering.
fn gamma_histogram(p: u64, e2: u64, e3: u64) -> Vec<u64> {
    let mut h = vec![0; p as usize];
    for x in 1..p {
        let v = (2 * p - pow_mod(x, e2, p) - pow_mod(x, e3, p)) % p;
        h[v as usize] += 1;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_members_share_histograms(pi in 0usize..46, a in any::<u64>(), b in any::<u64>(), m in any::<u64>()) {
        let primes = fqsparse::arith::primes_between(3, 200);
        let p = primes[pi % primes.len()];
        let n = p - 1;
        let e2 = 1 + a % (n - 1).max(1);
        let e3 = 1 + b % n;
        prop_assume!(e2 != e3 && e2 < n);
        let units: Vec<u64> = (1..n.max(2)).filter(|&k| gcd(k, n) == 1).collect();
        let m = units[(m % units.len() as u64) as usize];
        let image = (as_unit_exponent(m * e2 % n, n), as_unit_exponent(m * e3 % n, n));
        prop_assert_eq!(gamma_histogram(p, e2, e3), gamma_histogram(p, image.0, image.1));
    }

    #[test]
    fn search_witnesses_verify(pi in 0usize..62) {
        let primes = fqsparse::arith::primes_between(3, 300);
        let p = primes[pi % primes.len()];
        for conv in [Convention::Strict, Convention::Extended] {
            let r = max_roots_for_prime(p, conv).unwrap();
            for (&count, w) in &r.witnesses {
                prop_assert_eq!(w.count_roots(p), count);
                prop_assert!(w.gamma != 0 && w.e2 < w.e3);
                prop_assert_eq!(gcd(gcd(w.e2, w.e3), p - 1), 1);
            }
            prop_assert_eq!(r.max_count, *r.achieved_counts.iter().last().unwrap_or(&0));
        }
    }

    #[test]
    fn swan_detects_repeated_roots(n in 2u32..=8, pi in 0usize..95) {
        let primes = fqsparse::arith::primes_between(n as u64 + 2, 500);
        let p = primes[pi % primes.len()];
        let res = swan_resultant(n).unwrap();
        let vanishes = (res % num_bigint::BigInt::from(p)) == num_bigint::BigInt::from(0);
        let h = fqsparse::families::make_h(n as u64, p).unwrap();
        let (_, squarefree) = h.polynomial.distinct_root_count_mod_p().unwrap();
        prop_assert_eq!(vanishes, !squarefree);
    }
}
