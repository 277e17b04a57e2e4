//! Exact scalar arithmetic helpers: big rationals, binomials, small factoring.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZZ = BigInt;
pub type QQ = BigRational;

pub fn zz(n: i64) -> ZZ {
    ZZ::from(n)
}

pub fn qq(n: i64) -> QQ {
    QQ::from_integer(ZZ::from(n))
}

pub fn qq_ratio(n: i64, d: i64) -> QQ {
    QQ::new(ZZ::from(n), ZZ::from(d))
}

/// Parse a rational written as "a/b" or "a".
pub fn parse_qq(s: &str) -> Option<QQ> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: ZZ = n.trim().parse().ok()?;
            let d: ZZ = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(QQ::new(n, d))
        }
        None => {
            let n: ZZ = s.parse().ok()?;
            Some(QQ::from_integer(n))
        }
    }
}

/// Render a rational as "a" or "a/b" with positive denominator.
pub fn format_qq(q: &QQ) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_integral(q: &QQ) -> bool {
    q.denom().is_one()
}

/// Binomial coefficient with exact big-integer arithmetic.
pub fn binomial(n: u64, k: u64) -> ZZ {
    if k > n {
        return ZZ::zero();
    }
    let k = k.min(n - k);
    let mut num = ZZ::one();
    let mut den = ZZ::one();
    for i in 0..k {
        num *= ZZ::from(n - i);
        den *= ZZ::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> ZZ {
    let mut f = ZZ::one();
    for i in 2..=n {
        f *= ZZ::from(i);
    }
    f
}

/// Trial-division factorization for fixture-scale integers.
pub fn factor(n: &ZZ) -> Vec<(ZZ, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= ZZ::one() {
        return out;
    }
    let mut p = zz(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > ZZ::one() {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: &ZZ) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if *n < zz(2) {
        return false;
    }
    let mut p = zz(2);
    while &p * &p <= *n {
        if (n % &p).is_zero() {
            return false;
        }
        p += 1;
    }
    true
}

/// Least common multiple of two positive integers.
pub fn lcm_zz(a: &ZZ, b: &ZZ) -> ZZ {
    if a.is_zero() || b.is_zero() {
        return ZZ::zero();
    }
    (a * b).abs() / a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let q = parse_qq(s).unwrap();
            assert_eq!(format_qq(&q), s);
        }
        assert!(parse_qq("1/0").is_none());
        assert_eq!(parse_qq("4/2").unwrap(), qq(2));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), zz(10));
        assert_eq!(binomial(5, 6), zz(0));
        assert_eq!(binomial(0, 0), zz(1));
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(&zz(360)), vec![(zz(2), 3), (zz(3), 2), (zz(5), 1)]);
        assert!(is_prime(&zz(19)));
        assert!(!is_prime(&zz(21)));
    }
}
