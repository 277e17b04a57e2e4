//! Assembly of smoothed equivariant zeta values over a Shintani domain into
//! integral Stickelberger elements, unsmoothing, behavior under enlarging
//! the ramified set, and order-of-vanishing certificates in powers of the
//! relative augmentation ideal.

use crate::abelian::GroupElem;
use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::groupring::{ideal_power_membership, product_ideal_membership, GroupRingElement};
use crate::lattice::IdealLattice;
use crate::pairing::{cone_l_value, DesignatedPrime, SmoothingDatum};
use crate::rat::{QQ, ZZ};
use crate::rayclass::GaloisCtx;
use crate::shintani::ShintaniDomain;
use crate::stepfn::{ArithStepFunction, StepTerm};
use num_traits::One;

/// A Stickelberger element: integral group-ring coefficients stored in the
/// inverse-class convention, so the coefficient at `g` is the zeta value of
/// the class `g^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StickelbergerElement {
    pub element: GroupRingElement,
    pub k: i64,
}

impl StickelbergerElement {
    /// `zeta(sigma, k)`: the coefficient at `[sigma^{-1}]`.
    pub fn zeta_value(&self, sigma: &GroupElem) -> QQ {
        self.element.coeff(&self.element.group.neg(sigma))
    }
}

/// The data feeding one zeta computation: narrow-class representatives,
/// the Shintani domain, and the smoothing primes.
pub struct ZetaDatum {
    pub reps: Vec<IdealLattice>,
    pub domain: ShintaniDomain,
    pub smoothings: Vec<SmoothingDatum>,
    pub s_primes: Vec<IdealLattice>,
}

/// The group-ring-valued step function attached to a ray class and an
/// ideal representative: supported on totally positive elements of the
/// ideal that are units at the ramified set, with value the inverse Artin
/// class of the generated ideal times the class of the representative.
pub fn build_test_function(
    field: &FieldRef,
    galois: &GaloisCtx,
    rep: &IdealLattice,
    s_primes: &[IdealLattice],
) -> Result<ArithStepFunction, CoreError> {
    let o = IdealLattice::ring_of_integers(field);
    if !o.contains_lattice(rep, field) {
        return Err(CoreError::fixture("class representative must be integral"));
    }
    let m0 = &galois.raycl.modulus.finite;
    if !rep.is_coprime_to(m0, field) && o.index_of(m0, field)? != ZZ::one() {
        return Err(CoreError::fixture(
            "class representative is not coprime to the modulus",
        ));
    }
    // congruence modulus: the finite part refined by the ramified primes
    let mut m_mod = m0.clone();
    for p in s_primes {
        m_mod = m_mod.intersect(p, field);
        if !rep.is_coprime_to(p, field) {
            return Err(CoreError::fixture(
                "class representative is not coprime to the ramified set",
            ));
        }
    }
    let m_lat = rep.mul_ideal(&m_mod, field);
    let sigma_rep = galois.artin_image_allowing_unit(rep, field)?;

    let classes = IdealLattice::coset_representatives(rep, &m_lat, field)?;
    // a positive rational integer inside m_lat, used to push class
    // representatives into the totally positive cone
    let shift_int = {
        let nn = m_lat.norm(field);
        debug_assert!(nn.denom().is_one());
        field.rational(QQ::from_integer(nn.numer().clone()))
    };
    debug_assert!(m_lat.contains(&shift_int));

    let mut terms = Vec::new();
    'class: for c in classes {
        // totally positive representative of the class
        let mut x = c.clone();
        let mut guard = 0;
        while !(!x.is_zero() && field.is_totally_positive(&x)) {
            x = field.add(&x, &shift_int);
            guard += 1;
            if guard > 4096 {
                return Err(CoreError::internal(
                    "failed to find a totally positive class representative",
                ));
            }
        }
        // units at the ramified set only
        for p in s_primes {
            if p.contains(&x) {
                continue 'class;
            }
        }
        let cls = galois.class_of_element(&x)?;
        let value = galois.group.sub(&sigma_rep, &cls);
        terms.push(StepTerm {
            translate: x,
            modulus: m_lat.clone(),
            value: GroupRingElement::from_elem(&galois.group, value),
        });
    }
    Ok(ArithStepFunction::new(terms))
}

impl GaloisCtx {
    /// Artin image that tolerates the unit ideal (trivial class).
    fn artin_image_allowing_unit(
        &self,
        ideal: &IdealLattice,
        field: &FieldRef,
    ) -> Result<GroupElem, CoreError> {
        let o = IdealLattice::ring_of_integers(field);
        if *ideal == o {
            return Ok(self.group.identity());
        }
        self.artin_image(ideal)
    }
}

/// The equivariant smoothed zeta value at `k` as an integral group-ring
/// element.
pub fn stickelberger(
    field: &FieldRef,
    galois: &GaloisCtx,
    datum: &ZetaDatum,
    k: i64,
    designated: DesignatedPrime,
) -> Result<StickelbergerElement, CoreError> {
    match crate::rayclass::validate_t(
        field,
        &datum.s_primes,
        &datum.smoothings.iter().map(|s| s.prime.clone()).collect::<Vec<_>>(),
        k,
    )? {
        crate::rayclass::TValidation::Ok => {}
        v => {
            return Err(CoreError::condition(format!(
                "auxiliary prime conditions violated: {:?}",
                v
            )))
        }
    }
    let mut total = GroupRingElement::zero(&galois.group);
    for rep in &datum.reps {
        let phi = build_test_function(field, galois, rep, &datum.s_primes)?;
        if phi.terms.is_empty() {
            continue;
        }
        // norm(rep)^k scaling
        let nrep = rep.norm(field);
        debug_assert!(nrep.denom().is_one());
        let mut scale = QQ::one();
        for _ in 0..(-k) as usize {
            scale = scale / &nrep;
        }
        for cone in &datum.domain.cones {
            let v = cone_l_value(field, cone, &phi, k, &datum.smoothings, designated)?;
            total = total.add(&v.scale(&scale));
        }
    }
    if !total.is_integral() {
        return Err(CoreError::internal(
            "zeta element has a non-integral coefficient",
        ));
    }
    Ok(StickelbergerElement { element: total, k })
}

/// Remove the smoothing factors: divide by
/// `prod_q (1 - N(q)^{1-k} [sigma_q^{-1}])` in the rational group ring.
pub fn unsmooth(
    field: &FieldRef,
    galois: &GaloisCtx,
    theta: &StickelbergerElement,
    t_primes: &[IdealLattice],
) -> Result<GroupRingElement, CoreError> {
    let mut factor = GroupRingElement::one(&galois.group);
    for q in t_primes {
        let nq = q.norm(field);
        debug_assert!(nq.denom().is_one());
        let mut npow = QQ::from_integer(nq.numer().clone());
        for _ in 0..(-theta.k) as usize {
            npow *= QQ::from_integer(nq.numer().clone());
        }
        let sigma_inv = galois.group.neg(&galois.artin_image(q)?);
        let mut f = GroupRingElement::one(&galois.group);
        f.add_term(sigma_inv, -npow);
        factor = factor.mul(&f);
    }
    let inv = factor.invert().ok_or_else(|| {
        CoreError::condition("unsmoothing factor is a zero divisor in the group ring")
    })?;
    Ok(theta.element.mul(&inv))
}

/// Exact check of the enlargement identity
/// `Theta_{S'} = (1 - N(v)^{-k} [sigma_v^{-1}]) Theta_S` for `S' = S + {v}`.
pub fn enlarge_s_check(
    field: &FieldRef,
    galois: &GaloisCtx,
    theta_s: &StickelbergerElement,
    theta_s_enlarged: &StickelbergerElement,
    added: &IdealLattice,
) -> Result<bool, CoreError> {
    let nv = added.norm(field);
    debug_assert!(nv.denom().is_one());
    let mut npow = QQ::one();
    for _ in 0..(-theta_s.k) as usize {
        npow *= QQ::from_integer(nv.numer().clone());
    }
    let sigma_inv = galois.group.neg(&galois.artin_image(added)?);
    let mut f = GroupRingElement::one(&galois.group);
    f.add_term(sigma_inv, -npow);
    Ok(theta_s_enlarged.element == theta_s.element.mul(&f))
}

/// Certificate from the order-of-vanishing check.
#[derive(Clone, Debug)]
pub struct TowerCertificate {
    /// largest probed exponent with membership
    pub observed_exponent: usize,
    /// the exponent the membership bound guarantees
    pub guaranteed_exponent: usize,
    pub bound_holds: bool,
    pub doubled_bound_holds: bool,
    /// largest probed exponent for 2*Theta
    pub observed_doubled_exponent: usize,
}

/// Membership of the zeta element in powers of the relative augmentation
/// ideal of a tower, certified against the proven bounds
/// `Theta in I^{r + min(s, n-1)}` and `2 Theta in I^{r+s}`.
pub fn tower_order_check(
    theta: &StickelbergerElement,
    subgroup_gens: &[GroupElem],
    r: usize,
    s: usize,
    degree: usize,
) -> Result<TowerCertificate, CoreError> {
    let bound = r + s.min(degree.saturating_sub(1));
    let doubled_bound = r + s;
    let probe_to = r + s + 2;
    let mut observed = 0usize;
    for m in 1..=probe_to {
        if ideal_power_membership(&theta.element, subgroup_gens, m).is_some() {
            observed = m;
        } else {
            break;
        }
    }
    let two_theta = theta.element.scale(&QQ::from_integer(ZZ::from(2)));
    let mut observed2 = 0usize;
    for m in 1..=probe_to {
        if ideal_power_membership(&two_theta, subgroup_gens, m).is_some() {
            observed2 = m;
        } else {
            break;
        }
    }
    Ok(TowerCertificate {
        observed_exponent: observed,
        guaranteed_exponent: bound,
        bound_holds: observed >= bound || theta.element.is_zero(),
        doubled_bound_holds: observed2 >= doubled_bound || theta.element.is_zero(),
        observed_doubled_exponent: observed2,
    })
}

/// The finer per-place membership: `Theta` lies in the product over the
/// ramified places of the relative augmentation ideals of the decomposition
/// groups, times the archimedean sign ideals away from the first place.
pub fn fine_ideal_check(
    theta: &StickelbergerElement,
    finite_decomposition_gens: &[Vec<GroupElem>],
    archimedean_classes: &[GroupElem],
) -> bool {
    let group = &theta.element.group;
    let mut factors: Vec<Vec<GroupRingElement>> = Vec::new();
    for gens in finite_decomposition_gens {
        let f: Vec<GroupRingElement> = gens
            .iter()
            .map(|h| {
                GroupRingElement::from_elem(group, h.clone())
                    .sub(&GroupRingElement::one(group))
            })
            .collect();
        if f.is_empty() {
            // trivial decomposition group: the place splits completely and
            // its ideal is zero, so membership forces Theta = 0
            return theta.element.is_zero();
        }
        factors.push(f);
    }
    for sigma in archimedean_classes {
        if group.is_identity(sigma) {
            return theta.element.is_zero();
        }
        factors.push(vec![GroupRingElement::from_elem(group, sigma.clone())
            .sub(&GroupRingElement::one(group))]);
    }
    product_ideal_membership(&theta.element, &factors).is_some()
}

/// Parity membership at even negative arguments: the element lies in the
/// ideal generated by `[sigma_v] - 1` over the archimedean places away
/// from the first.
pub fn parity_check(
    theta: &StickelbergerElement,
    archimedean_classes_away_from_first: &[GroupElem],
) -> bool {
    fine_ideal_check(theta, &[], archimedean_classes_away_from_first)
}

/// Apply a unit translate to a test function and compare with the test
/// function of the translated representative; used by invariant suites.
pub fn test_function_translate_matches(
    field: &FieldRef,
    galois: &GaloisCtx,
    rep: &IdealLattice,
    unit: &FieldElement,
    s_primes: &[IdealLattice],
) -> Result<bool, CoreError> {
    if !field.is_totally_positive(unit) {
        return Err(CoreError::invalid_input("translate unit must be totally positive"));
    }
    let base = build_test_function(field, galois, rep, s_primes)?;
    let translated = base.translate_by(field, unit);
    let moved_rep = {
        let gens: Vec<FieldElement> = rep
            .basis_elements(field)
            .iter()
            .map(|b| field.mul(b, unit))
            .collect();
        IdealLattice::from_elements(field, &gens)?
    };
    let rebuilt = build_test_function(field, galois, &moved_rep, s_primes)?;
    // compare pointwise on a set of probe points covering both supports
    let mut probes: Vec<FieldElement> = Vec::new();
    for t in translated.terms.iter().chain(rebuilt.terms.iter()) {
        probes.push(t.translate.clone());
        let step = t.modulus.basis_elements(field);
        for b in step.iter().take(2) {
            probes.push(field.add(&t.translate, b));
        }
    }
    for p in &probes {
        let a = translated.eval(field, p);
        let b = rebuilt.eval(field, p);
        let av = a.unwrap_or_else(|| GroupRingElement::zero(&galois.group));
        let bv = b.unwrap_or_else(|| GroupRingElement::zero(&galois.group));
        if av != bv {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianGroup;
    use crate::field::{Interval, NumberField};
    use crate::rat::{qq, zz};
    use crate::rayclass::{Modulus, RayClassGroup};
    use crate::shintani::build_shintani_domain;

    fn qfield() -> FieldRef {
        NumberField::rationals()
    }

    fn zideal(field: &FieldRef, n: i64) -> IdealLattice {
        IdealLattice::ring_of_integers(field).scale_by_rational(&qq(n), field)
    }

    fn sqrt5() -> FieldRef {
        NumberField::new(
            vec![zz(-1), zz(-1), zz(1)],
            vec![vec![qq(1), qq(0)], vec![qq(0), qq(1)]],
            vec![
                Interval { lo: qq(1), hi: qq(2) },
                Interval { lo: qq(-1), hi: qq(0) },
            ],
        )
        .unwrap()
    }

    fn trivial_galois(field: &FieldRef) -> GaloisCtx {
        let o = IdealLattice::ring_of_integers(field);
        let m = Modulus { finite: o, infinite: vec![false; field.degree()] };
        let units: Vec<FieldElement> = if field.degree() == 2 {
            vec![field.generator()]
        } else {
            vec![]
        };
        // for Q(sqrt5) the generator phi is the fundamental unit; for Q the
        // list is empty
        GaloisCtx::full(RayClassGroup::new(field, m, &units).unwrap())
    }

    fn gaussian_galois(field: &FieldRef) -> GaloisCtx {
        let m = Modulus { finite: zideal(field, 4), infinite: vec![true] };
        GaloisCtx::full(RayClassGroup::new(field, m, &[]).unwrap())
    }

    fn smoothings(field: &FieldRef, primes: &[IdealLattice]) -> Vec<SmoothingDatum> {
        primes
            .iter()
            .map(|p| SmoothingDatum::new(field, p.clone()))
            .collect::<Result<_, _>>()
            .unwrap()
    }

    #[test]
    fn rational_trivial_extension() {
        // S empty, one smoothing prime 3, k = 0: value (1-3) zeta(0) = 1
        let f = qfield();
        let galois = trivial_galois(&f);
        let datum = ZetaDatum {
            reps: vec![IdealLattice::ring_of_integers(&f)],
            domain: build_shintani_domain(&f, &[]).unwrap(),
            smoothings: smoothings(&f, &[zideal(&f, 3)]),
            s_primes: vec![],
        };
        let theta = stickelberger(&f, &galois, &datum, 0, DesignatedPrime::default()).unwrap();
        assert_eq!(theta.element.augmentation(), qq(1));
        // unsmooth: back to zeta(0) = -1/2
        let un = unsmooth(&f, &galois, &theta, &[zideal(&f, 3)]).unwrap();
        assert_eq!(un.augmentation(), crate::rat::qq_ratio(-1, 2));
    }

    #[test]
    fn gaussian_field_stickelberger() {
        // modulus 4*infinity over Q, S = {2}, T = {3}, k = 0:
        // the element is [1] - [tau]
        let f = qfield();
        let galois = gaussian_galois(&f);
        let tau = galois.artin_image(&zideal(&f, 3)).unwrap();
        assert!(!galois.group.is_identity(&tau));
        let datum = ZetaDatum {
            reps: vec![IdealLattice::ring_of_integers(&f)],
            domain: build_shintani_domain(&f, &[]).unwrap(),
            smoothings: smoothings(&f, &[zideal(&f, 3)]),
            s_primes: vec![zideal(&f, 2)],
        };
        let theta = stickelberger(&f, &galois, &datum, 0, DesignatedPrime::default()).unwrap();
        let mut expected = GroupRingElement::one(&galois.group);
        expected.add_term(tau.clone(), qq(-1));
        assert_eq!(theta.element, expected);
        // zeta values per class, un-inverted
        assert_eq!(theta.zeta_value(&galois.group.identity()), qq(1));
        assert_eq!(theta.zeta_value(&tau), qq(-1));
        // unsmoothing matches the Hurwitz values 1/4 [1] - 1/4 [tau]
        let un = unsmooth(&f, &galois, &theta, &[zideal(&f, 3)]).unwrap();
        let mut exp_un = GroupRingElement::zero(&galois.group);
        exp_un.add_term(galois.group.identity(), crate::rat::qq_ratio(1, 4));
        exp_un.add_term(tau, crate::rat::qq_ratio(-1, 4));
        assert_eq!(un, exp_un);
    }

    #[test]
    fn gaussian_test_function_values() {
        let f = qfield();
        let galois = gaussian_galois(&f);
        let phi = build_test_function(
            &f,
            &galois,
            &IdealLattice::ring_of_integers(&f),
            &[zideal(&f, 2)],
        )
        .unwrap();
        // value [1] at 1 mod 4, [tau] at 3 mod 4, nothing at evens
        let tau = galois.artin_image(&zideal(&f, 3)).unwrap();
        let at1 = phi.eval(&f, &f.rational(qq(1))).unwrap();
        assert_eq!(at1, GroupRingElement::one(&galois.group));
        let at3 = phi.eval(&f, &f.rational(qq(3))).unwrap();
        assert_eq!(at3, GroupRingElement::from_elem(&galois.group, tau));
        assert!(phi.eval(&f, &f.rational(qq(2))).is_none());
    }

    #[test]
    fn test_function_unit_translation() {
        let f = sqrt5();
        let galois = trivial_galois(&f);
        let eps = f.add(&f.one(), &f.generator());
        let ok = test_function_translate_matches(
            &f,
            &galois,
            &IdealLattice::ring_of_integers(&f),
            &eps,
            &[],
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn sqrt5_zeta_at_minus_one() {
        // K = F = Q(sqrt5), T = {q11, q19}, k = -1:
        // (1 - 11^2)(1 - 19^2) * zeta_F(-1) = 1440 with zeta_F(-1) = 1/30
        let f = sqrt5();
        let galois = trivial_galois(&f);
        let phi = f.generator();
        let q11 = IdealLattice::principal(&f, &f.sub(&f.rational(qq(4)), &phi)).unwrap();
        let q19 = IdealLattice::principal(&f, &f.sub(&f.rational(qq(5)), &phi)).unwrap();
        let eps = f.add(&f.one(), &phi);
        let datum = ZetaDatum {
            reps: vec![IdealLattice::ring_of_integers(&f)],
            domain: build_shintani_domain(&f, &[eps]).unwrap(),
            smoothings: smoothings(&f, &[q11, q19]),
            s_primes: vec![],
        };
        let theta = stickelberger(&f, &galois, &datum, -1, DesignatedPrime::default()).unwrap();
        assert_eq!(theta.element.augmentation(), qq(1440));
    }

    #[test]
    fn enlargement_identity_rational() {
        // trivial extension: Theta_{S'} = (1 - N(v)^{-k}) Theta_S
        let f = qfield();
        let galois = gaussian_galois(&f);
        let base = ZetaDatum {
            reps: vec![IdealLattice::ring_of_integers(&f)],
            domain: build_shintani_domain(&f, &[]).unwrap(),
            smoothings: smoothings(&f, &[zideal(&f, 3)]),
            s_primes: vec![zideal(&f, 2)],
        };
        let theta_s = stickelberger(&f, &galois, &base, 0, DesignatedPrime::default()).unwrap();
        let enlarged = ZetaDatum {
            s_primes: vec![zideal(&f, 2), zideal(&f, 7)],
            ..ZetaDatum {
                reps: base.reps.clone(),
                domain: base.domain.clone(),
                smoothings: smoothings(&f, &[zideal(&f, 3)]),
                s_primes: vec![],
            }
        };
        let theta_sp = stickelberger(&f, &galois, &enlarged, 0, DesignatedPrime::default()).unwrap();
        assert!(enlarge_s_check(&f, &galois, &theta_s, &theta_sp, &zideal(&f, 7)).unwrap());
        // a perturbed element fails the check
        let mut bad = theta_sp.clone();
        bad.element.add_term(galois.group.identity(), qq(1));
        assert!(!enlarge_s_check(&f, &galois, &theta_s, &bad, &zideal(&f, 7)).unwrap());
    }

    #[test]
    fn tower_certificate_synthetic() {
        // G = Z/4, H = 2Z/4, Theta = 2 - 2[g^2]: observed exponent exactly 2
        let g = AbelianGroup::new(vec![4]);
        let mut x = GroupRingElement::from_rational(&g, qq(2));
        x.add_term(vec![2], qq(-2));
        let theta = StickelbergerElement { element: x, k: 0 };
        let cert = tower_order_check(&theta, &[vec![2u64]], 1, 1, 1).unwrap();
        assert_eq!(cert.observed_exponent, 2);
        assert!(cert.bound_holds); // bound = 1 + min(1, 0) = 1
        // 2*Theta = 4 - 4[g^2] = ([g^2]-1)^2 * 2 ... in I^2: doubled bound 2
        assert!(cert.doubled_bound_holds);
        // zero element passes everything
        let z = StickelbergerElement {
            element: GroupRingElement::zero(&g),
            k: 0,
        };
        let cert = tower_order_check(&z, &[vec![2u64]], 3, 1, 1).unwrap();
        assert!(cert.bound_holds && cert.doubled_bound_holds);
    }

    #[test]
    fn unsmooth_zero_divisor_reported() {
        // synthetic factor with determinant zero: q with trivial class and
        // N(q)^{1-k} = 1 would give 1 - [1]; emulate with a fake prime of
        // norm 1... instead check the error path on the Gaussian fixture
        // with a prime whose factor is a zero divisor: (1 - 5[1]) is fine,
        // so build the degenerate case directly in the group ring
        let g = AbelianGroup::new(vec![2]);
        let x = GroupRingElement::one(&g).sub(&GroupRingElement::from_elem(&g, vec![1]));
        assert!(x.invert().is_none());
    }
}
