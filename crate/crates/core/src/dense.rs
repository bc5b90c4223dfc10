//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Used for the modulus search of extension fields, squarefreeness tests over
//! prime fields and the quotient-ring Frobenius witness of the `r` family.

use crate::arith::{factorize, mul_mod, pow_mod};

/// Coefficients ascending by degree, no trailing zeros. The zero polynomial is
/// the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = DensePoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: u64) -> Self {
        DensePoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 0, 1)
    }

    /// `c * x^deg`.
    pub fn monomial(p: u64, deg: usize, c: u64) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::new(p, coeffs)
    }

    /// Builds from `(exponent, coefficient)` terms, merging duplicates.
    pub fn from_terms(p: u64, terms: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut coeffs = Vec::new();
        for (e, c) in terms {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] = (coeffs[e] + c % p) % p;
        }
        Self::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        if p < (1 << 31) {
            // Accumulate without reduction while the sum cannot overflow.
            let step = (u64::MAX / ((p - 1) * (p - 1)).max(1) - 1).max(1) as usize;
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] += a * b;
                }
                if (i + 1) % step == 0 {
                    out.iter_mut().for_each(|c| *c %= p);
                }
            }
            out.iter_mut().for_each(|c| *c %= p);
        } else {
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
                }
            }
        }
        Self::new(p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.p;
        Self::new(p, self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect())
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return (Self::zero(p), self.clone());
        }
        let inv_lead = pow_mod(divisor.leading(), p - 2, p);
        // sparse divisors (the r family, trinomials) reduce in O(len * terms)
        let support: Vec<(usize, u64)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(k, &d)| (k, d))
            .collect();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let c = mul_mod(rem[shift + dlen - 1], inv_lead, p);
            if c == 0 {
                continue;
            }
            quot[shift] = c;
            for &(k, d) in &support {
                let sub = mul_mod(c, d, p);
                rem[shift + k] = (rem[shift + k] + p - sub) % p;
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(pow_mod(self.leading(), self.p - 2, self.p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        Self::new(p, coeffs)
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Rabin's test: a degree-k polynomial is irreducible iff it divides
    /// `x^(p^k) - x` and is coprime to `x^(p^(k/l)) - x` for each prime `l | k`.
    pub fn is_irreducible(&self) -> bool {
        let Some(k) = self.degree() else {
            return false;
        };
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let p = self.p;
        let x = Self::monomial(p, 1, 1);
        // frob[i] = x^(p^i) mod self
        let mut frob = vec![x.rem(self)];
        for i in 1..=k {
            let next = frob[i - 1].pow_mod(p, self);
            frob.push(next);
        }
        if !frob[k].sub(&x).rem(self).is_zero() {
            return false;
        }
        factorize(k as u64).into_iter().all(|(l, _)| {
            let idx = k / l as usize;
            self.gcd(&frob[idx].sub(&x)).is_constant()
        })
    }
}
