//! Arithmetic in the cyclotomic field `Q(zeta_l)` for a prime level `l`,
//! in the power basis `1, zeta, ..., zeta^{l-2}` modulo the `l`-th
//! cyclotomic polynomial.

use crate::rat::{QQ, ZZ};
use num_traits::{One, Signed, Zero};

/// An element of `Q(zeta_l)`, `l` prime: `coeffs[j]` is the coordinate of
/// `zeta^j` for `j = 0..l-1` (length `l-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    pub level: u64,
    pub coeffs: Vec<QQ>,
}

impl Cyclotomic {
    pub fn zero(level: u64) -> Self {
        Cyclotomic { level, coeffs: vec![QQ::zero(); (level - 1) as usize] }
    }

    pub fn one(level: u64) -> Self {
        Self::from_rational(level, QQ::one())
    }

    pub fn from_rational(level: u64, q: QQ) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    /// `zeta^e` for any integer exponent, reduced mod `l`.
    pub fn root_power(level: u64, e: i64) -> Self {
        let l = level as i64;
        let e = e.rem_euclid(l) as usize;
        let mut z = Self::zero(level);
        if e < (level - 1) as usize {
            z.coeffs[e] = QQ::one();
        } else {
            // zeta^{l-1} = -(1 + zeta + ... + zeta^{l-2})
            for c in z.coeffs.iter_mut() {
                *c = -QQ::one();
            }
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when the element lies in `Q`, i.e. all non-constant
    /// coordinates vanish.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> QQ {
        self.coeffs[0].clone()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.level, rhs.level);
        Cyclotomic {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.level, rhs.level);
        Cyclotomic {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &QQ) -> Self {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.level, rhs.level);
        let l = self.level as usize;
        // cyclic convolution modulo x^l - 1, then fold with
        // zeta^{l-1} = -(1 + ... + zeta^{l-2})
        let mut conv = vec![QQ::zero(); l];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % l;
                conv[k] += a * b;
            }
        }
        let top = conv.pop().unwrap();
        let mut coeffs = conv;
        for c in coeffs.iter_mut() {
            *c -= &top;
        }
        Cyclotomic { level: self.level, coeffs }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let l = self.level as usize;
        // phi = 1 + x + ... + x^{l-1}
        let phi: Vec<QQ> = vec![QQ::one(); l];
        let a: Vec<QQ> = self.coeffs.clone();
        let (g, _s, t) = poly_ext_gcd(&phi, &a);
        // g must be a nonzero constant
        let gdeg = poly_deg(&g)?;
        if gdeg != 0 {
            return None;
        }
        let ginv = QQ::one() / g[0].clone();
        let mut inv: Vec<QQ> = t.iter().map(|c| c * &ginv).collect();
        // reduce mod phi just in case, then truncate to length l-1
        poly_reduce(&mut inv, &phi);
        inv.resize(l - 1, QQ::zero());
        Some(Cyclotomic { level: self.level, coeffs: inv })
    }

    /// Trace to `Q`: `Tr(1) = l-1`, `Tr(zeta^j) = -1` for `j != 0`.
    pub fn trace(&self) -> QQ {
        let l = QQ::from_integer(ZZ::from(self.level));
        let mut t = &self.coeffs[0] * (&l - QQ::one());
        for c in &self.coeffs[1..] {
            t -= c;
        }
        t
    }

    /// Apply the Galois automorphism `zeta -> zeta^j`, `j` prime to `l`.
    pub fn galois(&self, j: u64) -> Self {
        assert!(j % self.level != 0);
        let mut out = Self::zero(self.level);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = Self::root_power(self.level, (e as u64 * j) as i64).scale(c);
            out = out.add(&img);
        }
        out
    }

    /// Largest absolute value over the coordinates; used only in tests as
    /// a cheap nonzero witness.
    pub fn max_abs_coeff(&self) -> QQ {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(QQ::zero)
    }
}

fn poly_deg(p: &[QQ]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_reduce(p: &mut Vec<QQ>, m: &[QQ]) {
    let md = poly_deg(m).expect("zero modulus");
    let lead = m[md].clone();
    while let Some(d) = poly_deg(p) {
        if d < md {
            break;
        }
        let f = &p[d] / &lead;
        for i in 0..=md {
            let sub = &f * &m[i];
            p[d - md + i] -= sub;
        }
    }
    while p.len() > md {
        p.pop();
    }
    p.resize(md, QQ::zero());
}

/// Extended gcd of polynomials over `Q`: returns `(g, s, t)` with
/// `s*a + t*b = g`.
fn poly_ext_gcd(a: &[QQ], b: &[QQ]) -> (Vec<QQ>, Vec<QQ>, Vec<QQ>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = vec![QQ::one()];
    let mut s1 = vec![QQ::zero()];
    let mut t0 = vec![QQ::zero()];
    let mut t1 = vec![QQ::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

fn poly_divmod(a: &[QQ], b: &[QQ]) -> (Vec<QQ>, Vec<QQ>) {
    let bd = poly_deg(b).expect("division by zero polynomial");
    let lead = b[bd].clone();
    let mut rem = a.to_vec();
    let mut quo = vec![QQ::zero(); a.len()];
    while let Some(d) = poly_deg(&rem) {
        if d < bd {
            break;
        }
        let f = &rem[d] / &lead;
        quo[d - bd] = f.clone();
        for i in 0..=bd {
            let sub = &f * &b[i];
            rem[d - bd + i] -= sub;
        }
    }
    (quo, rem)
}

fn poly_mul(a: &[QQ], b: &[QQ]) -> Vec<QQ> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![QQ::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[QQ], b: &[QQ]) -> Vec<QQ> {
    let n = a.len().max(b.len());
    let mut out = vec![QQ::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qq;

    #[test]
    fn root_power_wraps() {
        let z = Cyclotomic::root_power(5, 7); // zeta^2
        assert_eq!(z.coeffs[2], qq(1));
        let top = Cyclotomic::root_power(5, 4);
        assert!(top.coeffs.iter().all(|c| *c == qq(-1)));
        assert_eq!(Cyclotomic::root_power(5, -1), top);
    }

    #[test]
    fn multiplication_and_inverse() {
        for l in [3u64, 5, 7] {
            let z = Cyclotomic::root_power(l, 1);
            // zeta^l = 1
            let mut p = Cyclotomic::one(l);
            for _ in 0..l {
                p = p.mul(&z);
            }
            assert_eq!(p, Cyclotomic::one(l));
            // (1 - zeta) is invertible
            let a = Cyclotomic::one(l).sub(&z);
            let inv = a.inverse().unwrap();
            assert_eq!(a.mul(&inv), Cyclotomic::one(l));
        }
    }

    #[test]
    fn trace_values() {
        let l = 7u64;
        assert_eq!(Cyclotomic::one(l).trace(), qq(6));
        for e in 1..7 {
            assert_eq!(Cyclotomic::root_power(l, e).trace(), qq(-1));
        }
    }

    #[test]
    fn galois_is_ring_automorphism() {
        let l = 5u64;
        let a = Cyclotomic::root_power(l, 1).add(&Cyclotomic::from_rational(l, qq(2)));
        let b = Cyclotomic::root_power(l, 3).sub(&Cyclotomic::one(l));
        for j in [2u64, 3, 4] {
            let lhs = a.mul(&b).galois(j);
            let rhs = a.galois(j).mul(&b.galois(j));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn character_sum_identity() {
        // For prime l and integer v: -sum over the l-1 characters psi with
        // kernel l*Z of psi(v) equals 1 when l does not divide v, and 1-l
        // when it does.
        for l in [3u64, 5, 7, 11] {
            for v in -7i64..=7 {
                let mut s = Cyclotomic::zero(l);
                for t in 1..l {
                    s = s.add(&Cyclotomic::root_power(l, t as i64 * v));
                }
                let got = s.neg();
                assert!(got.is_rational());
                let expected = if v.rem_euclid(l as i64) == 0 {
                    qq(1 - l as i64)
                } else {
                    qq(1)
                };
                assert_eq!(got.rational_part(), expected);
            }
        }
    }
}
