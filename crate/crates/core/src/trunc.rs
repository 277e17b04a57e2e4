//! Truncated group algebra: the quotient of the completed group algebra of
//! a lattice by a power of its augmentation ideal, with coefficients in a
//! prime-level cyclotomic field, together with the norm-power evaluation
//! functional that extracts polynomial values from group-algebra elements.
//!
//! Elements are stored densely over the monomial basis
//! `u^a = prod_i ([e_i] - 1)^{a_i}`, `|a| <= degree`, for a fixed lattice
//! basis `e_1, ..., e_n`.

use crate::cyclotomic::Cyclotomic;
use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::rat::{QQ, ZZ};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Environment variable capping the monomial-basis size.
pub const MAX_TERMS_ENV: &str = "SHINTANI_MAX_ALGEBRA_TERMS";
const DEFAULT_MAX_TERMS: usize = 200_000;

#[derive(Debug)]
pub struct TruncatedGroupAlgebra {
    pub level: u64,
    pub rank: usize,
    pub degree: usize,
    monomials: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

pub type AlgebraRef = Arc<TruncatedGroupAlgebra>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coeffs: Vec<Cyclotomic>,
}

impl TruncatedGroupAlgebra {
    pub fn new(level: u64, rank: usize, degree: usize) -> Result<AlgebraRef, CoreError> {
        let monomials = enumerate_monomials(rank, degree);
        let cap = std::env::var(MAX_TERMS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(DEFAULT_MAX_TERMS);
        if monomials.len() > cap {
            return Err(CoreError::invalid_input(format!(
                "truncated algebra would need {} monomials, over the cap {} ({})",
                monomials.len(),
                cap,
                MAX_TERMS_ENV
            )));
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(Arc::new(TruncatedGroupAlgebra { level, rank, degree, monomials, index }))
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { coeffs: vec![Cyclotomic::zero(self.level); self.dim()] }
    }

    pub fn one(&self) -> AlgebraElement {
        let mut e = self.zero();
        e.coeffs[0] = Cyclotomic::one(self.level);
        e
    }

    pub fn from_scalar(&self, c: Cyclotomic) -> AlgebraElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x.add(y))
                .collect(),
        }
    }

    pub fn scale(&self, a: &AlgebraElement, c: &Cyclotomic) -> AlgebraElement {
        AlgebraElement { coeffs: a.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = self.zero();
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ma = &self.monomials[i];
            let da: u32 = ma.iter().sum();
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mb = &self.monomials[j];
                let db: u32 = mb.iter().sum();
                if da + db > self.degree as u32 {
                    continue;
                }
                let sum: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let k = self.index[&sum];
                out.coeffs[k] = out.coeffs[k].add(&ca.mul(cb));
            }
        }
        out
    }

    /// Inverse of an element whose constant term is a unit: write
    /// `x = c (1 + y)` with `y` in the augmentation ideal and expand the
    /// geometric series, which terminates at the truncation degree.
    pub fn inverse(&self, a: &AlgebraElement) -> Result<AlgebraElement, CoreError> {
        let c0 = a.coeffs[0].clone();
        let c0_inv = c0
            .inverse()
            .ok_or_else(|| CoreError::invalid_input("algebra element has zero constant term"))?;
        let mut y = self.scale(a, &c0_inv);
        y.coeffs[0] = Cyclotomic::zero(self.level); // y = a/c0 - 1
        let mut out = self.one();
        let mut pow = self.one();
        for _ in 0..self.degree {
            pow = self.mul(&pow, &y);
            let neg = AlgebraElement { coeffs: pow.coeffs.iter().map(|c| c.neg()).collect() };
            // alternate signs: (-1)^j y^j
            pow = neg;
            out = self.add(&out, &pow);
        }
        Ok(self.scale(&out, &c0_inv))
    }

    /// `[v]` for a lattice point with integer coordinates `c` in the chosen
    /// basis: `prod_i (1 + u_i)^{c_i}`, negative exponents through the
    /// generalized binomial series.
    pub fn encode(&self, coords: &[i64]) -> AlgebraElement {
        let q = self.encode_q(coords);
        AlgebraElement {
            coeffs: q
                .into_iter()
                .map(|c| Cyclotomic::from_rational(self.level, c))
                .collect(),
        }
    }

    /// Rational-coefficient variant of `encode`, used where the cyclotomic
    /// scalar is applied afterwards.
    pub fn encode_q(&self, coords: &[i64]) -> Vec<QQ> {
        assert_eq!(coords.len(), self.rank);
        let mut out = vec![QQ::zero(); self.dim()];
        out[0] = QQ::one();
        for (axis, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut factor = vec![QQ::zero(); self.dim()];
            for j in 0..=self.degree as u32 {
                let coeff = generalized_binomial(c, j);
                if coeff.is_zero() {
                    continue;
                }
                let mut mono = vec![0u32; self.rank];
                mono[axis] = j;
                if let Some(&k) = self.index.get(&mono) {
                    factor[k] = QQ::from_integer(coeff);
                }
            }
            out = self.mul_q(&out, &factor);
        }
        out
    }

    /// Truncated product of rational coefficient vectors.
    pub fn mul_q(&self, a: &[QQ], b: &[QQ]) -> Vec<QQ> {
        let mut out = vec![QQ::zero(); self.dim()];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ma = &self.monomials[i];
            let da: u32 = ma.iter().sum();
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mb = &self.monomials[j];
                let db: u32 = mb.iter().sum();
                if da + db > self.degree as u32 {
                    continue;
                }
                let sum: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let k = self.index[&sum];
                out[k] += ca * cb;
            }
        }
        out
    }

    /// Accumulate `a += q * b` on rational coefficient vectors.
    pub fn add_scaled_q(a: &mut [QQ], q: &QQ, b: &[QQ]) {
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() {
                *x += q * y;
            }
        }
    }

    /// Lift a rational coefficient vector scaled by `zeta^e`.
    pub fn lift_scaled(&self, a: &[QQ], zeta_exp: i64) -> AlgebraElement {
        let z = Cyclotomic::root_power(self.level, zeta_exp);
        AlgebraElement {
            coeffs: a
                .iter()
                .map(|q| if q.is_zero() { Cyclotomic::zero(self.level) } else { z.scale(q) })
                .collect(),
        }
    }
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// `C(c, j)` for any integer `c >= 0 or < 0` and `j >= 0`.
fn generalized_binomial(c: i64, j: u32) -> ZZ {
    let mut num = ZZ::one();
    for t in 0..j as i64 {
        num *= ZZ::from(c - t);
    }
    let mut den = ZZ::one();
    for t in 1..=j as i64 {
        den *= ZZ::from(t);
    }
    num / den
}

fn enumerate_monomials(rank: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; rank];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, axis: usize, remaining: u32) {
        if axis == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=remaining {
            cur[axis] = v;
            rec(out, cur, axis + 1, remaining - v);
        }
        cur[axis] = 0;
    }
    rec(&mut out, &mut cur, 0, degree as u32);
    // total degree then lexicographic
    out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    out
}

/// The evaluation functional attached to the `m`-th power of the norm form:
/// on a monomial `u^a` its value is the finite difference
/// `sum_{b <= a} (-1)^{|a|-|b|} prod C(a_i, b_i) * Norm(sum b_i e_i)^m`,
/// which vanishes whenever `|a| > n*m`.
#[derive(Clone, Debug)]
pub struct NormPowerFunctional {
    pub exponent: usize,
    values: Vec<QQ>,
}

impl NormPowerFunctional {
    pub fn new(
        algebra: &TruncatedGroupAlgebra,
        field: &FieldRef,
        basis: &[FieldElement],
        exponent: usize,
    ) -> Self {
        assert_eq!(basis.len(), algebra.rank);
        let mut values = Vec::with_capacity(algebra.dim());
        for i in 0..algebra.dim() {
            let alpha = algebra.monomial(i).to_vec();
            let mut total = QQ::zero();
            // iterate over all b <= alpha
            let mut b = vec![0u32; alpha.len()];
            'sum: loop {
                let mut lattice_pt = field.zero_elem();
                for (bi, e) in b.iter().zip(basis) {
                    if *bi > 0 {
                        lattice_pt =
                            field.add(&lattice_pt, &field.scale(e, &QQ::from_integer(ZZ::from(*bi))));
                    }
                }
                let mut norm_pow = QQ::one();
                if exponent > 0 {
                    let nv = field.norm(&lattice_pt);
                    norm_pow = QQ::one();
                    for _ in 0..exponent {
                        norm_pow *= &nv;
                    }
                }
                let mut weight = QQ::one();
                let asum: u32 = alpha.iter().sum();
                let bsum: u32 = b.iter().sum();
                for (ai, bi) in alpha.iter().zip(&b) {
                    weight *= QQ::from_integer(crate::rat::binomial(*ai as u64, *bi as u64));
                }
                if (asum - bsum) % 2 == 1 {
                    weight = -weight;
                }
                total += weight * norm_pow;
                // increment b within the box [0, alpha]
                let mut axis = 0;
                loop {
                    if axis == b.len() {
                        break 'sum;
                    }
                    if b[axis] < alpha[axis] {
                        b[axis] += 1;
                        break;
                    }
                    b[axis] = 0;
                    axis += 1;
                }
            }
            values.push(total);
        }
        NormPowerFunctional { exponent, values }
    }

    /// Value on a monomial index.
    pub fn value_on_monomial(&self, i: usize) -> &QQ {
        &self.values[i]
    }

    /// Linear extension to algebra elements; the result lives in the
    /// cyclotomic coefficient field.
    pub fn eval(&self, algebra: &TruncatedGroupAlgebra, x: &AlgebraElement) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(algebra.level);
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() || self.values[i].is_zero() {
                continue;
            }
            acc = acc.add(&c.scale(&self.values[i]));
        }
        acc
    }
}
