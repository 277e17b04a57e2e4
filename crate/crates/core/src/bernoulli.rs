//! Bernoulli polynomials and the Hurwitz zeta oracle at non-positive
//! integers, all in exact rational arithmetic.

use crate::error::CoreError;
use crate::rat::{binomial, qq, QQ, ZZ};
use num_traits::{One, Zero};

/// Bernoulli polynomial `B_m(x)` with exact rational coefficients,
/// stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPolynomial {
    pub degree: usize,
    pub coeffs: Vec<QQ>,
}

impl BernoulliPolynomial {
    pub fn eval(&self, x: &QQ) -> QQ {
        let mut acc = QQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Bernoulli numbers `B_0..B_m` (the `B_1 = -1/2` convention) via the
/// Faulhaber recurrence `sum_{j<m} C(m+1, j) B_j = 0` shifted by one.
fn bernoulli_numbers(m: usize) -> Vec<QQ> {
    let mut b = Vec::with_capacity(m + 1);
    b.push(QQ::one());
    for k in 1..=m {
        // B_k = -1/(k+1) * sum_{j=0}^{k-1} C(k+1, j) B_j
        let mut s = QQ::zero();
        for (j, bj) in b.iter().enumerate() {
            s += QQ::from_integer(binomial(k as u64 + 1, j as u64)) * bj;
        }
        b.push(-s / qq(k as i64 + 1));
    }
    b
}

/// `B_m(x) = sum_k C(m,k) B_k x^{m-k}`.
pub fn bernoulli_poly(m: usize) -> BernoulliPolynomial {
    let nums = bernoulli_numbers(m);
    let mut coeffs = vec![QQ::zero(); m + 1];
    for (k, bk) in nums.iter().enumerate() {
        // contributes to degree m-k
        coeffs[m - k] = QQ::from_integer(binomial(m as u64, k as u64)) * bk;
    }
    BernoulliPolynomial { degree: m, coeffs }
}

/// Hurwitz zeta at non-positive integers: `zeta(-m, x) = -B_{m+1}(x)/(m+1)`
/// for rational `x` in `(0, 1]`.
pub fn hurwitz_zeta_nonpos(m: usize, x: &QQ) -> Result<QQ, CoreError> {
    if x <= &QQ::zero() || x > &QQ::one() {
        return Err(CoreError::invalid_input(format!(
            "hurwitz_zeta_nonpos requires 0 < x <= 1, got {}",
            x
        )));
    }
    let b = bernoulli_poly(m + 1);
    Ok(-b.eval(x) / qq(m as i64 + 1))
}

/// `zeta(-m, x)` for any positive rational `x`, by peeling integer shifts:
/// `zeta(s, x) = zeta(s, x+1) + x^{-s}`.
pub fn hurwitz_zeta_nonpos_any(m: usize, x: &QQ) -> Result<QQ, CoreError> {
    if x <= &QQ::zero() {
        return Err(CoreError::invalid_input(format!(
            "hurwitz_zeta_nonpos_any requires x > 0, got {}",
            x
        )));
    }
    let mut x = x.clone();
    let mut extra = QQ::zero();
    while x > QQ::one() {
        x -= QQ::one();
        // zeta(-m, x+1) = zeta(-m, x) - x^m
        let mut p = QQ::one();
        for _ in 0..m {
            p *= &x;
        }
        extra += p;
    }
    Ok(hurwitz_zeta_nonpos(m, &x)? - extra)
}

/// Sum of positive divisors; used by the Siegel cross-checks in tests.
pub fn sigma1(n: u64) -> ZZ {
    let mut s = ZZ::zero();
    for d in 1..=n {
        if n % d == 0 {
            s += ZZ::from(d);
        }
    }
    s
}
