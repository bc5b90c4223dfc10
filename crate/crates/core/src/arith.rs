//! Machine-word number theory: gcd, primality, factorization, divisors.

use num_bigint::BigUint;
use num_traits::One;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &s in &SMALL {
        if n.is_multiple_of(s) {
            return n == s;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&m| is_prime(m)).expect("primes are unbounded")
}

/// All primes `<= n`, by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= 1 << 26 {
        primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect()
    } else {
        (lo..=hi).filter(|&n| is_prime(n)).collect()
    }
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut m = 0;
            while n.is_multiple_of(d) {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
///
/// ```
/// assert_eq!(fqsparse::arith::divisors(12), vec![1, 2, 3, 4, 6, 12]);
/// ```
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero");
    let mut divs = vec![1u64];
    for (prime, mult) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..mult {
            pk *= prime;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (prime, _)| acc / prime * (prime - 1))
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// `Some(p^k)` if it fits in a `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// `floor(x^(1/k))` for a big integer `x`.
pub fn floor_root(x: &BigUint, k: u32) -> BigUint {
    if k == 1 {
        return x.clone();
    }
    x.nth_root(k)
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigUint {
    let mut acc = BigUint::one();
    let b = BigUint::from(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}
