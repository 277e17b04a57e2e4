//! Finite abelian groups in invariant-factor form.

use serde::{Deserialize, Serialize};

/// A finite abelian group `Z/d_1 x ... x Z/d_t` with `d_1 | d_2 | ... | d_t`.
/// The trivial group has no factors. Elements are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub factors: Vec<u64>,
}

pub type GroupElem = Vec<u64>;

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn new(factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&d| d >= 1));
        for w in factors.windows(2) {
            assert!(w[1] % w[0] == 0, "invariant factors must divide in order");
        }
        AbelianGroup { factors: factors.into_iter().filter(|&d| d > 1).collect() }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn identity(&self) -> GroupElem {
        vec![0; self.factors.len()]
    }

    pub fn reduce(&self, e: &[i64]) -> GroupElem {
        e.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
            .collect()
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| (d - x) % d)
            .collect()
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul_scalar(&self, a: &GroupElem, k: i64) -> GroupElem {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((x as i64 * k).rem_euclid(d as i64)) as u64)
            .collect()
    }

    pub fn is_identity(&self, a: &GroupElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn elem_order(&self, a: &GroupElem) -> u64 {
        let mut k = 1u64;
        let mut cur = a.clone();
        while !self.is_identity(&cur) {
            cur = self.add(&cur, a);
            k += 1;
        }
        k
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![self.identity()];
        for (i, &d) in self.factors.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in out {
                for v in 0..d {
                    let mut e2 = e.clone();
                    e2[i] = v;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    /// Subgroup generated by the given elements, as a sorted element list.
    pub fn subgroup(&self, gens: &[GroupElem]) -> Vec<GroupElem> {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(self.identity());
        let mut stack = vec![self.identity()];
        while let Some(e) = stack.pop() {
            for g in gens {
                let f = self.add(&e, g);
                if seen.insert(f.clone()) {
                    stack.push(f);
                }
            }
        }
        seen.into_iter().collect()
    }
}
