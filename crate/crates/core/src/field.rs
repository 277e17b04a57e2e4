//! Exact arithmetic in a totally real number field `F = Q(alpha)`:
//! elements in the power basis, certified embedding signs via Sturm
//! sequences and dyadic interval refinement, norms and traces.
//!
//! The embedding order is fixed by the order of the isolating intervals
//! supplied at construction; no numeric tolerance appears anywhere.

use crate::error::CoreError;
use crate::matrix::q_det;
use crate::rat::{QQ, ZZ};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

/// A rational interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: QQ,
    pub hi: QQ,
}

/// A totally real number field.
#[derive(Debug)]
pub struct NumberField {
    /// Monic irreducible defining polynomial, lowest degree first,
    /// integer coefficients, leading coefficient 1.
    pub poly: Vec<ZZ>,
    /// Rows are the integral basis elements in power-basis coordinates.
    pub integral_basis: Vec<Vec<QQ>>,
    /// One isolating interval per real root; their order fixes the
    /// ordering of the embeddings.
    pub root_intervals: Vec<Interval>,
    sturm: Vec<Vec<QQ>>,
}

pub type FieldRef = Arc<NumberField>;

/// An element of `F` as a rational vector in the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub coords: Vec<QQ>,
}

impl FieldElement {
    pub fn zero(n: usize) -> Self {
        FieldElement { coords: vec![QQ::zero(); n] }
    }

    pub fn from_rational(n: usize, q: QQ) -> Self {
        let mut e = Self::zero(n);
        e.coords[0] = q;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl NumberField {
    /// Builds the field and certifies that it is totally real with the
    /// given isolating intervals.
    pub fn new(
        poly: Vec<ZZ>,
        integral_basis: Vec<Vec<QQ>>,
        root_intervals: Vec<Interval>,
    ) -> Result<FieldRef, CoreError> {
        let n = poly.len().checked_sub(1).ok_or_else(|| CoreError::fixture("empty polynomial"))?;
        if n == 0 {
            return Err(CoreError::fixture("defining polynomial must be non-constant"));
        }
        if !poly[n].is_one() {
            return Err(CoreError::fixture("defining polynomial must be monic"));
        }
        if integral_basis.len() != n || integral_basis.iter().any(|r| r.len() != n) {
            return Err(CoreError::fixture("integral basis must be a square matrix of degree size"));
        }
        if root_intervals.len() != n {
            return Err(CoreError::fixture("need one isolating interval per embedding"));
        }
        let polyq: Vec<QQ> = poly.iter().map(|c| QQ::from_integer(c.clone())).collect();
        let sturm = sturm_sequence(&polyq);
        let field = NumberField { poly, integral_basis, root_intervals, sturm };

        // squarefree: gcd(f, f') constant, equivalent to the Sturm sequence
        // ending in a nonzero constant
        let last = field.sturm.last().unwrap();
        if poly_degree(last) != Some(0) {
            return Err(CoreError::fixture("defining polynomial is not squarefree"));
        }
        // rational-root check: a monic integer polynomial of degree >= 2
        // with a rational root is reducible (full irreducibility testing is
        // out of scope; degree <= 3 is covered completely by this check)
        if n >= 2 {
            if field.poly[0].is_zero() {
                return Err(CoreError::fixture("defining polynomial is reducible (root 0)"));
            }
            let mut d = ZZ::one();
            while &d * &d <= field.poly[0].abs() {
                if (&field.poly[0] % &d).is_zero() {
                    for cand in [
                        QQ::from_integer(d.clone()),
                        QQ::from_integer(-d.clone()),
                        QQ::from_integer(&field.poly[0].abs() / &d),
                        QQ::from_integer(-(&field.poly[0].abs() / &d)),
                    ] {
                        if poly_eval(&polyq, &cand).is_zero() {
                            return Err(CoreError::fixture(
                                "defining polynomial is reducible (rational root)",
                            ));
                        }
                    }
                }
                d += 1;
            }
        }
        // totally real: n real roots
        let total = field.count_roots(&-field.root_bound(), &field.root_bound());
        if total != field.degree() as i64 {
            return Err(CoreError::fixture(format!(
                "field is not totally real: {} real roots of degree-{} polynomial",
                total,
                field.degree()
            )));
        }
        // each interval isolates exactly one root, pairwise disjoint
        for (i, iv) in field.root_intervals.iter().enumerate() {
            if iv.lo > iv.hi {
                return Err(CoreError::fixture("interval with lo > hi"));
            }
            let ok = if iv.lo == iv.hi {
                poly_eval(&polyq, &iv.lo).is_zero()
            } else {
                field.count_roots(&iv.lo, &iv.hi) == 1
            };
            if !ok {
                return Err(CoreError::fixture(format!(
                    "interval {} does not isolate exactly one root",
                    i
                )));
            }
            for jv in &field.root_intervals[i + 1..] {
                if !(iv.hi < jv.lo || jv.hi < iv.lo) {
                    return Err(CoreError::fixture("isolating intervals overlap"));
                }
            }
        }
        // integral basis must be invertible over Q
        if q_det(&field.integral_basis).is_zero() {
            return Err(CoreError::fixture("integral basis is singular"));
        }
        Ok(Arc::new(field))
    }

    /// The rational field as a degree-1 field.
    pub fn rationals() -> FieldRef {
        NumberField::new(
            vec![ZZ::zero(), ZZ::one()],
            vec![vec![QQ::one()]],
            vec![Interval { lo: -QQ::one(), hi: QQ::one() }],
        )
        .expect("Q is a valid field")
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Cauchy bound: all roots lie in `[-B, B]`.
    fn root_bound(&self) -> QQ {
        let mut b = QQ::zero();
        for c in &self.poly[..self.degree()] {
            let a = QQ::from_integer(c.clone()).abs();
            if a > b {
                b = a;
            }
        }
        b + QQ::one()
    }

    /// Number of roots of the defining polynomial in `(lo, hi]`.
    fn count_roots(&self, lo: &QQ, hi: &QQ) -> i64 {
        sturm_sign_changes(&self.sturm, lo) - sturm_sign_changes(&self.sturm, hi)
    }

    pub fn element_from_coords(&self, coords: Vec<QQ>) -> FieldElement {
        assert_eq!(coords.len(), self.degree());
        FieldElement { coords }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_rational(self.degree(), QQ::one())
    }

    pub fn zero_elem(&self) -> FieldElement {
        FieldElement::zero(self.degree())
    }

    pub fn rational(&self, q: QQ) -> FieldElement {
        FieldElement::from_rational(self.degree(), q)
    }

    /// The generator `alpha` (zero in the degree-1 case where `alpha = 0`).
    pub fn generator(&self) -> FieldElement {
        let n = self.degree();
        let mut e = FieldElement::zero(n);
        if n > 1 {
            e.coords[1] = QQ::one();
        } else {
            // alpha is the root of the degree-1 polynomial
            e.coords[0] = -QQ::from_integer(self.poly[0].clone());
        }
        e
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &FieldElement, q: &QQ) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| x * q).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.degree();
        let mut prod = vec![QQ::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        // reduce modulo the defining polynomial
        for d in (n..2 * n - 1).rev() {
            if prod[d].is_zero() {
                continue;
            }
            let f = prod[d].clone();
            prod[d] = QQ::zero();
            for k in 0..n {
                let sub = &f * QQ::from_integer(self.poly[k].clone());
                prod[d - n + k] -= sub;
            }
        }
        prod.truncate(n);
        FieldElement { coords: prod }
    }

    pub fn pow(&self, a: &FieldElement, e: u32) -> FieldElement {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn inverse(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        // solve a * x = 1 via the multiplication matrix
        let n = self.degree();
        let cols: Vec<FieldElement> = (0..n)
            .map(|j| {
                let mut e = FieldElement::zero(n);
                e.coords[j] = QQ::one();
                self.mul(a, &e)
            })
            .collect();
        let mat: Vec<Vec<QQ>> = (0..n)
            .map(|i| (0..n).map(|j| cols[j].coords[i].clone()).collect())
            .collect();
        let mut rhs = vec![QQ::zero(); n];
        rhs[0] = QQ::one();
        let x = crate::matrix::q_solve(&mat, &rhs)?;
        Some(FieldElement { coords: x })
    }

    /// Determinant of the multiplication-by-x matrix.
    pub fn norm(&self, a: &FieldElement) -> QQ {
        let n = self.degree();
        let cols: Vec<FieldElement> = (0..n)
            .map(|j| {
                let mut e = FieldElement::zero(n);
                e.coords[j] = QQ::one();
                self.mul(a, &e)
            })
            .collect();
        let mat: Vec<Vec<QQ>> = (0..n)
            .map(|i| (0..n).map(|j| cols[j].coords[i].clone()).collect())
            .collect();
        q_det(&mat)
    }

    pub fn trace(&self, a: &FieldElement) -> QQ {
        let n = self.degree();
        let mut t = QQ::zero();
        for j in 0..n {
            let mut e = FieldElement::zero(n);
            e.coords[j] = QQ::one();
            t += self.mul(a, &e).coords[j].clone();
        }
        t
    }

    /// Exact sign of the image of `x` under the `nu`-th embedding.
    pub fn embedding_sign(&self, x: &FieldElement, nu: usize) -> i32 {
        if x.is_zero() {
            return 0;
        }
        let mut iv = self.root_intervals[nu].clone();
        loop {
            let (lo, hi) = eval_on_interval(&x.coords, &iv);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            // x(alpha_nu) != 0 since x != 0 in a field where the minimal
            // polynomial is irreducible; refine until the sign resolves
            iv = self.refine_interval(&iv);
        }
    }

    pub fn is_totally_positive(&self, x: &FieldElement) -> bool {
        (0..self.degree()).all(|nu| self.embedding_sign(x, nu) > 0)
    }

    /// Exact comparison of `sigma_i(x)` and `sigma_j(x)`.
    pub fn compare_embeddings(&self, x: &FieldElement, i: usize, j: usize) -> Ordering {
        if i == j {
            return Ordering::Equal;
        }
        let mut a = self.root_intervals[i].clone();
        let mut b = self.root_intervals[j].clone();
        loop {
            let (alo, ahi) = eval_on_interval(&x.coords, &a);
            let (blo, bhi) = eval_on_interval(&x.coords, &b);
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            // equality happens only for rational elements
            if x.coords[1..].iter().all(|c| c.is_zero()) {
                return Ordering::Equal;
            }
            a = self.refine_interval(&a);
            b = self.refine_interval(&b);
        }
    }

    /// Halve an isolating interval, keeping the half that contains the root.
    fn refine_interval(&self, iv: &Interval) -> Interval {
        let two = QQ::from_integer(ZZ::from(2));
        let mid = (&iv.lo + &iv.hi) / &two;
        let left = Interval { lo: iv.lo.clone(), hi: mid.clone() };
        if self.count_roots(&left.lo, &left.hi) == 1 {
            left
        } else {
            Interval { lo: mid, hi: iv.hi.clone() }
        }
    }

    /// A rational lower bound for `sigma_nu(x)`, refined until the bound
    /// has the same sign as the value (for nonzero x).
    pub fn embedding_bounds(&self, x: &FieldElement, nu: usize, halvings: u32) -> (QQ, QQ) {
        let mut iv = self.root_intervals[nu].clone();
        for _ in 0..halvings {
            iv = self.refine_interval(&iv);
        }
        eval_on_interval(&x.coords, &iv)
    }
}

fn poly_degree(p: &[QQ]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_eval(p: &[QQ], x: &QQ) -> QQ {
    let mut acc = QQ::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Standard Sturm chain: `p, p', -rem(...), ...`.
fn sturm_sequence(p: &[QQ]) -> Vec<Vec<QQ>> {
    let mut seq = Vec::new();
    let p0: Vec<QQ> = p.to_vec();
    let d = poly_degree(&p0).expect("nonzero polynomial");
    let mut p1 = vec![QQ::zero(); d];
    for (i, c) in p0.iter().enumerate().skip(1) {
        p1[i - 1] = c * QQ::from_integer(ZZ::from(i as i64));
    }
    seq.push(p0);
    if poly_degree(&p1).is_some() {
        seq.push(p1);
    }
    loop {
        let n = seq.len();
        if n < 2 {
            break;
        }
        let rem = poly_rem(&seq[n - 2], &seq[n - 1]);
        match poly_degree(&rem) {
            None => break,
            Some(_) => {
                seq.push(rem.iter().map(|c| -c).collect());
            }
        }
    }
    seq
}

fn poly_rem(a: &[QQ], b: &[QQ]) -> Vec<QQ> {
    let bd = poly_degree(b).expect("zero divisor polynomial");
    let lead = b[bd].clone();
    let mut rem = a.to_vec();
    while let Some(d) = poly_degree(&rem) {
        if d < bd {
            break;
        }
        let f = &rem[d] / &lead;
        for i in 0..=bd {
            let sub = &f * &b[i];
            rem[d - bd + i] -= sub;
        }
        rem[d] = QQ::zero();
    }
    rem
}

fn sturm_sign_changes(seq: &[Vec<QQ>], x: &QQ) -> i64 {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let v = poly_eval(p, x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Interval bound of a polynomial over a rational interval by Horner
/// with interval arithmetic.
fn eval_on_interval(coords: &[QQ], iv: &Interval) -> (QQ, QQ) {
    let mut lo = QQ::zero();
    let mut hi = QQ::zero();
    for c in coords.iter().rev() {
        // [lo,hi] * [iv.lo, iv.hi] + c
        let candidates = [
            &lo * &iv.lo,
            &lo * &iv.hi,
            &hi * &iv.lo,
            &hi * &iv.hi,
        ];
        let mut nlo = candidates[0].clone();
        let mut nhi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < nlo {
                nlo = c.clone();
            }
            if *c > nhi {
                nhi = c.clone();
            }
        }
        lo = nlo + c;
        hi = nhi + c;
    }
    (lo, hi)
}
