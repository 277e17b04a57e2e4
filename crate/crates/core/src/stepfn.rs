//! Arithmetic step functions: finite sums of group-ring-valued indicator
//! functions of lattice cosets, the finite model of compactly supported
//! locally constant test functions on the finite adeles.

use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::groupring::GroupRingElement;
use crate::lattice::IdealLattice;
use crate::rat::QQ;

/// One coset term: `value * 1_{translate + modulus}`.
#[derive(Clone, Debug)]
pub struct StepTerm {
    pub translate: FieldElement,
    pub modulus: IdealLattice,
    pub value: GroupRingElement,
}

/// A finite sum of coset indicators with group-ring values. Terms may
/// overlap; the function value at a point is the sum over covering terms.
#[derive(Clone, Debug)]
pub struct ArithStepFunction {
    pub terms: Vec<StepTerm>,
}

impl ArithStepFunction {
    pub fn new(terms: Vec<StepTerm>) -> Self {
        ArithStepFunction { terms }
    }

    pub fn eval(&self, field: &FieldRef, x: &FieldElement) -> Option<GroupRingElement> {
        let mut acc: Option<GroupRingElement> = None;
        for t in &self.terms {
            let diff = field.sub(x, &t.translate);
            if t.modulus.contains(&diff) {
                acc = Some(match acc {
                    None => t.value.clone(),
                    Some(a) => a.add(&t.value),
                });
            }
        }
        acc
    }

    /// Common refinement lattice: the intersection of all term moduli.
    /// Every term indicator is periodic with respect to it.
    pub fn refinement_lattice(&self, field: &FieldRef) -> Result<IdealLattice, CoreError> {
        let mut it = self.terms.iter();
        let first = it
            .next()
            .ok_or_else(|| CoreError::invalid_input("step function with no terms"))?;
        let mut acc = first.modulus.clone();
        for t in it {
            acc = acc.intersect(&t.modulus, field);
        }
        Ok(acc)
    }

    /// Multiply by the smoothing weight `1_L - ell * 1_{L'}` at a prime
    /// of prime norm `ell`. Term supports are required to be integral and
    /// coprime to the prime, so the `1_L` factor is the identity on them
    /// and the `1_{L'}` part carves out one sub-coset:
    /// `(t, M, v) -> (t, M, v) + (t', M ∩ q, -ell * v)`.
    pub fn fold_smoothing(
        &self,
        field: &FieldRef,
        prime: &IdealLattice,
        ell: u64,
    ) -> Result<ArithStepFunction, CoreError> {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if !t.modulus.is_coprime_to(prime, field) {
                return Err(CoreError::invalid_input(
                    "smoothing fold: term modulus is not coprime to the smoothing prime",
                ));
            }
            terms.push(t.clone());
            let zero = field.zero_elem();
            let translate =
                t.modulus.crt_translate(&t.translate, prime, &zero, field)?;
            terms.push(StepTerm {
                translate,
                modulus: t.modulus.intersect(prime, field),
                value: t.value.scale(&-QQ::from_integer(crate::rat::ZZ::from(ell))),
            });
        }
        Ok(ArithStepFunction { terms })
    }

    /// Restrict the function to a coset `center + power` at a prime away
    /// from all term moduli (used for p-adic congruence constraints).
    pub fn constrain_coset(
        &self,
        field: &FieldRef,
        center: &FieldElement,
        power: &IdealLattice,
    ) -> Result<ArithStepFunction, CoreError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let translate = t
                .modulus
                .crt_translate(&t.translate, power, center, field)?;
            terms.push(StepTerm {
                translate,
                modulus: t.modulus.intersect(power, field),
                value: t.value.clone(),
            });
        }
        Ok(ArithStepFunction { terms })
    }

    /// The unit translate `x -> f(x / y)`: each coset moves to
    /// `y*translate + y*modulus`.
    pub fn translate_by(&self, field: &FieldRef, y: &FieldElement) -> ArithStepFunction {
        let terms = self
            .terms
            .iter()
            .map(|t| StepTerm {
                translate: field.mul(&t.translate, y),
                modulus: {
                    let gens: Vec<FieldElement> = t
                        .modulus
                        .basis_elements(field)
                        .iter()
                        .map(|b| field.mul(b, y))
                        .collect();
                    IdealLattice::from_elements(field, &gens).expect("unit translate of lattice")
                },
                value: t.value.clone(),
            })
            .collect();
        ArithStepFunction { terms }
    }
}
