//! Exact integer checks around `h_n = x^n - x - 1`: resultants, least split
//! primes and the explicit inequalities used to bound them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, primes_between};
use crate::error::{Error, Result};
use crate::families::make_h;

/// Relative width of the guard band for floating-point comparisons.
pub const GUARD: f64 = 1e-12;

/// Dense integer polynomial, coefficients ascending, leading coefficient
/// nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigPoly {
    coeffs: Vec<BigInt>,
}

impl BigPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        Ok(BigPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - x - 1`.
    pub fn h(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] -= 1;
        coeffs[1] -= 1;
        coeffs[n] += 1;
        Self::new(coeffs).expect("x^n - x - 1 is nonzero")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn derivative(&self) -> Result<Self> {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

/// `(-1)^((n+2)(n-1)/2) (n^n + (-1)^n (n-1)^(n-1))`.
pub fn swan_resultant(n: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let nn = BigInt::from(n).pow(n);
    let m = BigInt::from(n - 1).pow(n - 1);
    let inner = if n.is_multiple_of(2) { nn + m } else { nn - m };
    let sign_exp = (n as u64 + 2) * (n as u64 - 1) / 2;
    Ok(if sign_exp.is_multiple_of(2) { inner } else { -inner })
}

/// Determinant of the Sylvester matrix of `f` and `g` (rows of `f` first,
/// coefficients leading first), by fraction-free elimination.
pub fn sylvester_resultant(f: &BigPoly, g: &BigPoly) -> BigInt {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.coeffs.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_determinant(rows)
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let size = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[size - 1][size - 1]
}

/// Least prime `p >= n + 2`, `p <= p_max`, at which `x^n - x - 1` has `n`
/// distinct roots in `F_p`.
pub fn least_split_prime(n: u64, p_max: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    const BLOCK: usize = 256;
    let primes = primes_between(n + 2, p_max);
    for block in primes.chunks(BLOCK) {
        let hit = block
            .par_iter()
            .map(|&p| splits_completely(n, p).map(|ok| ok.then_some(p)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some(p) = hit {
            return Ok(p);
        }
    }
    Err(Error::NotFound(format!(
        "x^{n} - x - 1 splits into distinct linear factors at no prime <= {p_max}"
    )))
}

/// Whether `x^n - x - 1` has `n` distinct roots in `F_p`.
pub fn splits_completely(n: u64, p: u64) -> Result<bool> {
    let h = make_h(n, p)?;
    Ok(h.polynomial.distinct_root_count_mod_p()? == (n as usize, true))
}

/// `Σ_{i=0}^{n-1} i! n^{n-1-i}`.
pub fn splitting_exponent_sum(n: u32) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut factorial = BigUint::one();
    let mut total = BigUint::zero();
    for i in 0..n {
        if i > 0 {
            factorial *= i;
        }
        total += &factorial * BigUint::from(n).pow(n - 1 - i);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Within the guard band of equality.
    Indeterminate,
}

/// Guarded `lhs < rhs`. Values within the guard band of each other are
/// indeterminate, for strict and non-strict comparisons alike, since the
/// floating-point side cannot certify equality.
pub fn guarded_less(lhs: f64, rhs: f64) -> Verdict {
    let band = GUARD * lhs.abs().max(rhs.abs());
    if lhs < rhs - band {
        Verdict::Holds
    } else if lhs > rhs + band {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiChain {
    pub n: u32,
    /// `n^(2n) / (n!)^2` as `numerator/denominator`.
    pub exact: String,
    pub exact_value: f64,
    pub middle: f64,
    pub lower: f64,
    pub first_ge_middle: Verdict,
    pub middle_gt_lower: Verdict,
}

/// `n^(2n)/(n!)^2 >= (π e^2/4)^n/(2πn) > 5.8^n/(6.3n)`.
pub fn minkowski_chain(n: u32) -> Result<MinkowskiChain> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    let exact = BigRational::new(BigInt::from(n).pow(2 * n), &factorial * &factorial);
    let exact_value = exact.to_f64().unwrap_or(f64::INFINITY);
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let e2 = std::f64::consts::E.powi(2);
    let middle = (nf * (pi * e2 / 4.0).ln() - (2.0 * pi * nf).ln()).exp();
    let lower = (nf * 5.8f64.ln() - (6.3 * nf).ln()).exp();
    Ok(MinkowskiChain {
        n,
        exact: exact.to_string(),
        exact_value,
        middle,
        lower,
        first_ge_middle: guarded_less(middle, exact_value),
        middle_gt_lower: guarded_less(lower, middle),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityRow {
    pub n: u32,
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs / lhs`; above 1 means room to spare.
    pub slack: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub n_max: u32,
    pub rows: Vec<InequalityRow>,
    pub chains: Vec<MinkowskiChain>,
    pub failures: usize,
    pub indeterminate: usize,
}

fn row(n: u32, name: &'static str, lhs: f64, rhs: f64) -> InequalityRow {
    InequalityRow {
        n,
        name,
        lhs,
        rhs,
        slack: rhs / lhs,
        verdict: guarded_less(lhs, rhs),
    }
}

/// Evaluates, for `n <= n_max`:
/// `n^n + (-1)^n (n-1)^(n-1) <= n^n + (n-1)^(n-1) <= e^(n ln n + 4/27)` (n >= 3),
/// `n! < e sqrt(n) (n/e)^n`, `Σ i! n^(n-1-i) < 4.31 n^(n-1/2)` and the
/// Minkowski chain. Left sides are exact integers.
pub fn proof_inequalities(n_max: u32) -> Result<InequalityReport> {
    if n_max < 3 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 3, got {n_max}")));
    }
    let mut rows = Vec::new();
    let mut chains = Vec::new();
    for n in 1..=n_max {
        let nf = n as f64;
        let ln_n = nf.ln();
        if n >= 3 {
            let nn = BigInt::from(n).pow(n);
            let m = BigInt::from(n - 1).pow(n - 1);
            let signed = if n % 2 == 0 { &nn + &m } else { &nn - &m };
            let absolute = &nn + &m;
            rows.push(InequalityRow {
                n,
                name: "swan_abs_le_sum",
                lhs: signed.to_f64().unwrap_or(f64::INFINITY),
                rhs: absolute.to_f64().unwrap_or(f64::INFINITY),
                slack: 1.0,
                verdict: if signed <= absolute { Verdict::Holds } else { Verdict::Fails },
            });
            let lhs = absolute.to_f64().unwrap_or(f64::INFINITY);
            rows.push(row(n, "sum_le_exp", lhs, (nf * ln_n + 4.0 / 27.0).exp()));
        }
        let factorial: BigUint = (1..=n).map(BigUint::from).product();
        let stirling = (1.0 + 0.5 * ln_n + nf * (ln_n - 1.0)).exp();
        rows.push(row(n, "stirling", factorial.to_f64().unwrap_or(f64::INFINITY), stirling));
        let sum = splitting_exponent_sum(n)?;
        let bound = 4.31 * ((nf - 0.5) * ln_n).exp();
        rows.push(row(n, "factorial_sum", sum.to_f64().unwrap_or(f64::INFINITY), bound));
        chains.push(minkowski_chain(n)?);
    }
    let verdicts = rows
        .iter()
        .map(|r| r.verdict)
        .chain(chains.iter().flat_map(|c| [c.first_ge_middle, c.middle_gt_lower]));
    let (mut failures, mut indeterminate) = (0, 0);
    for v in verdicts {
        match v {
            Verdict::Fails => failures += 1,
            Verdict::Indeterminate => indeterminate += 1,
            Verdict::Holds => {}
        }
    }
    Ok(InequalityReport {
        n_max,
        rows,
        chains,
        failures,
        indeterminate,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilitySanity {
    pub n: u32,
    pub rational_roots: Vec<i64>,
    /// Small primes at which `h_n` has no root, each ruling out a linear
    /// factor over the integers.
    pub rootless_primes: Vec<u64>,
}

/// Rational-root test plus a search for primes where `h_n` is rootless.
pub fn irreducibility_sanity(n: u32) -> Result<IrreducibilitySanity> {
    let h = BigPoly::h(n as usize);
    // monic with constant term -1: rational roots are among ±1
    let rational_roots = [-1i64, 1]
        .into_iter()
        .filter(|&r| h.eval(&BigInt::from(r)).is_zero())
        .collect();
    let mut rootless_primes = Vec::new();
    for p in (2..200u64).filter(|&p| is_prime(p)) {
        let rootless = (0..p).all(|x| {
            let v = h.eval(&BigInt::from(x)) % BigInt::from(p);
            !v.is_zero()
        });
        if rootless {
            rootless_primes.push(p);
            if rootless_primes.len() == 3 {
                break;
            }
        }
    }
    Ok(IrreducibilitySanity {
        n,
        rational_roots,
        rootless_primes,
    })
}

/// Sign of `swan_resultant(n)` relative to the Sylvester determinant of
/// `(h_n, h_n')`: `1` when equal, `-1` when opposite.
pub fn swan_sign_pattern(n: u32) -> Result<i32> {
    let h = BigPoly::h(n as usize);
    let direct = sylvester_resultant(&h, &h.derivative()?);
    let swan = swan_resultant(n)?;
    if swan.abs() != direct.abs() {
        return Err(Error::Verification(format!(
            "|Swan| = {} but |Sylvester| = {} for n = {n}",
            swan.abs(),
            direct.abs()
        )));
    }
    Ok(if swan == direct { 1 } else { -1 })
}
