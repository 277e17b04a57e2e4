//! The smoothed cone pairing: values of cone zeta functions at non-positive
//! integers, computed exactly through a cyclotomic character sum in a
//! truncated group algebra.
//!
//! For an open cone `C(v_1..v_m)`, a step function `Phi_0` periodic with
//! respect to a sublattice containing the (rescaled) generators, and a
//! designated smoothing prime of norm `ell`, the smoothed generating
//! element is
//!
//! ```text
//!   - sum_psi  [ sum_{v in (support) ∩ P(v_1..v_m)} psi(v) Phi_0(v) [v] ]
//!              * prod_i (1 - psi(v_i) [v_i])^{-1}
//! ```
//!
//! with `psi` running over the nontrivial characters of the residue line at
//! the designated prime. Division happens in the truncated algebra (the
//! denominators have invertible constant term `1 - psi(v_i)`), the value at
//! the integer `k <= 0` is extracted by the norm-power functional of
//! exponent `-k`, and the character sum collapses to a rational number,
//! which is checked exactly. All other smoothing primes are folded into the
//! step function as locally constant weights beforehand.

use crate::cyclotomic::Cyclotomic;
use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::groupring::GroupRingElement;
use crate::lattice::{
    enumerate_shifted_parallelepiped, IdealLattice, PrimeResidue,
};
use crate::rat::{lcm_zz, QQ, ZZ};
use crate::shintani::RationalCone;
use crate::stepfn::ArithStepFunction;
use crate::trunc::{NormPowerFunctional, TruncatedGroupAlgebra};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Smoothing data at a degree-one prime: the prime ideal `q` with
/// `N(q) = ell` prime, modelling the local lattice pair
/// (integers at `ell`, `q`-multiples at `ell`).
#[derive(Clone, Debug)]
pub struct SmoothingDatum {
    pub ell: u64,
    pub prime: IdealLattice,
    pub residue: PrimeResidue,
}

impl SmoothingDatum {
    pub fn new(field: &FieldRef, prime: IdealLattice) -> Result<Self, CoreError> {
        let residue = PrimeResidue::new(field, &prime)?;
        Ok(SmoothingDatum { ell: residue.ell, prime, residue })
    }
}

/// The weight `1` on units at the prime, `1 - ell` on multiples, `0` off
/// the integral part.
pub fn smoothing_weight(
    _field: &FieldRef,
    datum: &SmoothingDatum,
    v: &FieldElement,
) -> i64 {
    match datum.residue.residue(v) {
        Err(_) => 0,
        Ok(0) => 1 - datum.ell as i64,
        Ok(_) => 1,
    }
}

/// Options controlling the designated smoothing prime.
#[derive(Clone, Copy, Debug, Default)]
pub enum DesignatedPrime {
    /// Largest norm in the list (maximizes integrality slack at k = 0).
    #[default]
    LargestNorm,
    /// Explicit index into the smoothing list; used by the
    /// choice-independence checks.
    Index(usize),
}

/// A partition of the support into finitely many classes, evaluated in one
/// pass: the pairing value is returned per class. Used for boundary
/// measures, where the classes are residue classes at a local prime. The
/// `period` lattice must make every class invariant under translation by
/// it (the generators are rescaled into it).
pub struct SupportBinning<'a> {
    pub period: IdealLattice,
    pub class_of: &'a (dyn Fn(&FieldElement) -> Result<u64, CoreError> + Sync),
}

/// The smoothed value `L(1_C, Phi x smoothings; k)` as an element of the
/// group ring carried by the step-function values.
///
/// The cone may be half-open; its value is the sum over the included faces.
pub fn cone_l_value(
    field: &FieldRef,
    cone: &RationalCone,
    phi: &ArithStepFunction,
    k: i64,
    smoothings: &[SmoothingDatum],
    designated: DesignatedPrime,
) -> Result<GroupRingElement, CoreError> {
    let binned = cone_l_value_binned(field, cone, phi, k, smoothings, designated, None)?;
    let group = phi
        .terms
        .first()
        .map(|t| t.value.group.clone())
        .ok_or_else(|| CoreError::invalid_input("step function with no terms"))?;
    Ok(binned
        .into_values()
        .fold(GroupRingElement::zero(&group), |acc, v| acc.add(&v)))
}

/// Binned variant: one pairing value per support class.
pub fn cone_l_value_binned(
    field: &FieldRef,
    cone: &RationalCone,
    phi: &ArithStepFunction,
    k: i64,
    smoothings: &[SmoothingDatum],
    designated: DesignatedPrime,
    binning: Option<&SupportBinning>,
) -> Result<std::collections::BTreeMap<u64, GroupRingElement>, CoreError> {
    validate_smoothing_shape(field, k, smoothings)?;
    if cone.strict.iter().all(|s| !s) && cone.dim() > 0 {
        return Err(CoreError::invalid_input(
            "cone with no strict generator would include the apex",
        ));
    }
    let des_idx = match designated {
        DesignatedPrime::LargestNorm => smoothings
            .iter()
            .enumerate()
            .max_by_key(|(_, s)| s.ell)
            .map(|(i, _)| i)
            .unwrap(),
        DesignatedPrime::Index(i) => {
            if i >= smoothings.len() {
                return Err(CoreError::invalid_input("designated smoothing index out of range"));
            }
            i
        }
    };

    // generators must be integral and of valuation zero at every smoothing
    // prime
    for s in smoothings {
        for (i, g) in cone.gens.iter().enumerate() {
            match s.residue.residue(g) {
                Ok(r) if r != 0 => {}
                _ => {
                    return Err(CoreError::condition(format!(
                        "cone generator {} is not a unit at the smoothing prime of norm {}; \
                         rescale the cone or choose smoothing primes coprime to the domain",
                        i, s.ell
                    )));
                }
            }
        }
    }

    // fold every non-designated smoothing into the step function
    let mut phi0 = phi.clone();
    for (i, s) in smoothings.iter().enumerate() {
        if i != des_idx {
            phi0 = phi0.fold_smoothing(field, &s.prime, s.ell)?;
        }
    }
    let des = &smoothings[des_idx];
    for t in &phi0.terms {
        if !t.modulus.is_coprime_to(&des.prime, field) {
            return Err(CoreError::invalid_input(
                "step function constrains the designated smoothing prime",
            ));
        }
    }

    // face decomposition of the half-open cone
    let strict_set: Vec<usize> =
        (0..cone.dim()).filter(|&i| cone.strict[i]).collect();
    let free_set: Vec<usize> = (0..cone.dim()).filter(|&i| !cone.strict[i]).collect();
    let mut total: std::collections::BTreeMap<u64, GroupRingElement> =
        std::collections::BTreeMap::new();
    let mut any_face = false;
    for mask in 0..(1u32 << free_set.len()) {
        let mut face: Vec<FieldElement> =
            strict_set.iter().map(|&i| cone.gens[i].clone()).collect();
        for (bit, &i) in free_set.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                face.push(cone.gens[i].clone());
            }
        }
        if face.is_empty() {
            continue; // apex excluded by the strictness check above
        }
        any_face = true;
        for (bin, v) in open_cone_value(field, &face, &phi0, k, des, binning)? {
            total
                .entry(bin)
                .and_modify(|e| *e = e.add(&v))
                .or_insert(v);
        }
    }
    if !any_face {
        return Err(CoreError::internal("cone with no faces"));
    }
    Ok(total)
}

fn validate_smoothing_shape(
    field: &FieldRef,
    k: i64,
    smoothings: &[SmoothingDatum],
) -> Result<(), CoreError> {
    if smoothings.is_empty() {
        return Err(CoreError::condition("at least one smoothing prime is required"));
    }
    let mut ells: Vec<u64> = smoothings.iter().map(|s| s.ell).collect();
    ells.sort_unstable();
    ells.dedup();
    if ells.len() != smoothings.len() {
        return Err(CoreError::condition(
            "smoothing primes must lie over distinct rational primes",
        ));
    }
    if k > 0 {
        return Err(CoreError::invalid_input("only non-positive integers are supported"));
    }
    if k < 0 && smoothings.len() < 2 {
        return Err(CoreError::condition(
            "negative arguments need at least two smoothing primes",
        ));
    }
    if k == 0 && smoothings.len() == 1 {
        let need = field.degree() as u64 + 2;
        if smoothings[0].ell < need {
            return Err(CoreError::condition(format!(
                "a single smoothing prime at 0 must have norm >= {}, got {}",
                need, smoothings[0].ell
            )));
        }
    }
    Ok(())
}

/// Value on a single open cone.
///
/// The pairing is additive in the step function, so terms are evaluated in
/// groups sharing a coset modulus; each group rescales the generators by
/// its own minimal integer prime to the designated norm, which keeps the
/// parallelepiped point counts at the scale of the modulus index.
fn open_cone_value(
    field: &FieldRef,
    gens: &[FieldElement],
    phi0: &ArithStepFunction,
    k: i64,
    des: &SmoothingDatum,
    binning: Option<&SupportBinning>,
) -> Result<std::collections::BTreeMap<u64, GroupRingElement>, CoreError> {
    phi0.terms
        .first()
        .map(|t| t.value.group.clone())
        .ok_or_else(|| CoreError::invalid_input("step function with no terms"))?;

    // group terms by modulus
    let mut groups: Vec<(IdealLattice, Vec<usize>)> = Vec::new();
    for (i, t) in phi0.terms.iter().enumerate() {
        match groups.iter_mut().find(|(m, _)| *m == t.modulus) {
            Some((_, idxs)) => idxs.push(i),
            None => groups.push((t.modulus.clone(), vec![i])),
        }
    }

    let ell = des.ell;
    type CycloByBin = std::collections::BTreeMap<(u64, crate::abelian::GroupElem), Cyclotomic>;
    let mut acc: CycloByBin = std::collections::BTreeMap::new();

    for (modulus, idxs) in &groups {
        // minimal rescaling of the generators into the group modulus,
        // refined by the binning period so translations preserve classes
        let scale_lattice = match binning {
            None => modulus.clone(),
            Some(b) => modulus.intersect(&b.period, field),
        };
        let mut t_scale = ZZ::one();
        for g in gens {
            t_scale = lcm_zz(&t_scale, &scale_lattice.denominator_of(g));
        }
        if !t_scale.gcd(&ZZ::from(ell)).is_one() {
            return Err(CoreError::internal(
                "generator rescaling collided with the designated smoothing prime",
            ));
        }
        let t_q = QQ::from_integer(t_scale.clone());
        let scaled: Vec<FieldElement> = gens.iter().map(|g| field.scale(g, &t_q)).collect();

        // ambient lattice for the group: modulus basis, translates, generators
        let mut ambient_gens: Vec<FieldElement> = modulus.basis_elements(field);
        for &i in idxs {
            ambient_gens.push(phi0.terms[i].translate.clone());
        }
        ambient_gens.extend(scaled.iter().cloned());
        let ambient = IdealLattice::from_elements(field, &ambient_gens)?;
        let n = field.degree();
        let m_exp = (-k) as usize;
        let algebra = TruncatedGroupAlgebra::new(ell, n, n * m_exp)?;
        let basis = ambient.basis_elements(field);
        let functional = NormPowerFunctional::new(&algebra, field, &basis, m_exp);

        let coords_of = |x: &FieldElement| -> Result<Vec<i64>, CoreError> {
            ambient
                .coords_of(x)
                .into_iter()
                .map(|q| {
                    if !q.denom().is_one() {
                        return Err(CoreError::internal(
                            "support point outside the ambient lattice",
                        ));
                    }
                    q.numer()
                        .to_string()
                        .parse::<i64>()
                        .map_err(|_| CoreError::internal("lattice coordinate overflow"))
                })
                .collect()
        };

        // generator residues and rational encodings
        let mut gen_data = Vec::with_capacity(scaled.len());
        for g in &scaled {
            let r = des.residue.residue(g)?;
            debug_assert!(r != 0);
            gen_data.push((r, coords_of(g)?));
        }

        // numerator pieces keyed by support class, group element and
        // designated-prime residue: rational algebra vector sums of
        // val_g(v) [v]
        type PieceKey = (u64, crate::abelian::GroupElem, u64);
        let mut pieces: std::collections::BTreeMap<PieceKey, Vec<QQ>> =
            std::collections::BTreeMap::new();
        let mut any_point = false;
        for &i in idxs {
            let term = &phi0.terms[i];
            let pts = enumerate_shifted_parallelepiped(
                field,
                &term.modulus,
                &term.translate,
                &scaled,
            )?;
            for p in pts {
                any_point = true;
                let bin = match binning {
                    None => 0,
                    Some(b) => (b.class_of)(&p)?,
                };
                let r = des.residue.residue(&p)?;
                let enc = algebra.encode_q(&coords_of(&p)?);
                for (g, c) in &term.value.coeffs {
                    let entry = pieces
                        .entry((bin, g.clone(), r))
                        .or_insert_with(|| vec![QQ::zero(); algebra.dim()]);
                    TruncatedGroupAlgebra::add_scaled_q(entry, c, &enc);
                }
            }
        }
        if !any_point {
            continue;
        }

        // One character term per group element; the terms of the other
        // characters are its Galois conjugates, so the full character sum
        // is the trace down to the rationals. A second character is
        // computed as an exact consistency check of that conjugacy.
        let one_char = |t: u64| -> Result<CycloByBin, CoreError> {
            // denominator prod_i (1 - zeta^{t r_i} [v_i])
            let mut denom = algebra.one();
            for (r, coords) in &gen_data {
                let enc = algebra.encode_q(coords);
                let term = algebra.lift_scaled(&enc, (t * r) as i64);
                let mut factor = algebra.one();
                for (i, c) in term.coeffs.iter().enumerate() {
                    factor.coeffs[i] = factor.coeffs[i].sub(c);
                }
                denom = algebra.mul(&denom, &factor);
            }
            let denom_inv = algebra.inverse(&denom)?;
            let mut numers: std::collections::BTreeMap<
                (u64, crate::abelian::GroupElem),
                crate::trunc::AlgebraElement,
            > = std::collections::BTreeMap::new();
            for ((bin, g, r), vecq) in &pieces {
                let lifted = algebra.lift_scaled(vecq, (t * r) as i64);
                numers
                    .entry((*bin, g.clone()))
                    .and_modify(|e| *e = algebra.add(e, &lifted))
                    .or_insert(lifted);
            }
            let mut out: CycloByBin = std::collections::BTreeMap::new();
            for (key, numer) in numers {
                let quotient = algebra.mul(&numer, &denom_inv);
                out.insert(key, functional.eval(&algebra, &quotient));
            }
            Ok(out)
        };
        let (first, second) = rayon::join(
            || one_char(1),
            || if ell > 2 { Some(one_char(2)) } else { None },
        );
        let first = first?;
        if let Some(second) = second {
            let second = second?;
            for (g, v) in &first {
                let conj = v.galois(2);
                if second.get(g) != Some(&conj) {
                    return Err(CoreError::internal(
                        "character terms are not Galois conjugates",
                    ));
                }
            }
        }
        for (g, v) in first {
            acc.entry(g).and_modify(|e| *e = e.add(&v)).or_insert(v);
        }
    }

    let group = phi0.terms[0].value.group.clone();
    let mut values: std::collections::BTreeMap<u64, GroupRingElement> =
        std::collections::BTreeMap::new();
    for ((bin, g), v) in acc {
        // sum over all characters = negative of the trace of the first term
        let total = -v.trace();
        values
            .entry(bin)
            .or_insert_with(|| GroupRingElement::zero(&group))
            .add_term(g, total);
    }
    for value in values.values() {
        if !value.is_integral() {
            return Err(CoreError::internal(format!(
                "smoothed cone value has a non-integral coefficient: {:?}",
                value.coeffs.values().next()
            )));
        }
    }
    Ok(values)
}

/// Convenience: smoothing data from prime ideals, with distinctness checks.
pub fn smoothings_from_primes(
    field: &FieldRef,
    primes: &[IdealLattice],
) -> Result<Vec<SmoothingDatum>, CoreError> {
    primes
        .iter()
        .map(|p| SmoothingDatum::new(field, p.clone()))
        .collect()
}
