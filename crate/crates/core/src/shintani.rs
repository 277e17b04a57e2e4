//! Rational open cones with half-open boundary assignments, the boundary
//! perturbation rule, and Shintani fundamental domains for the action of
//! totally positive units.

use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::rat::QQ;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::cmp::Ordering;

/// A rational cone `C(v_1, ..., v_m)` together with a boundary assignment.
///
/// `strict` lists the generator indices whose coordinate must be strictly
/// positive for membership; the remaining coordinates may be zero. With
/// `strict = {0..m}` this is the open cone, with `strict = {}` the closed
/// cone (including lower-dimensional faces and, for a point written in the
/// generators, the apex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    pub gens: Vec<FieldElement>,
    pub strict: Vec<bool>,
}

impl RationalCone {
    pub fn open(gens: Vec<FieldElement>) -> Self {
        let m = gens.len();
        RationalCone { gens, strict: vec![true; m] }
    }

    pub fn with_strict(gens: Vec<FieldElement>, strict: Vec<bool>) -> Self {
        assert_eq!(gens.len(), strict.len());
        RationalCone { gens, strict }
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    /// Exact membership: coordinates of `x` in the generators must exist,
    /// be non-negative, and be strictly positive where `strict` demands.
    pub fn contains(&self, field: &FieldRef, x: &FieldElement) -> bool {
        let Some(t) = cone_coordinates(field, &self.gens, x) else {
            return false;
        };
        t.iter().zip(&self.strict).all(|(ti, &s)| {
            if s {
                ti.is_positive()
            } else {
                !ti.is_negative()
            }
        })
    }

    /// Scale one generator by a positive rational; the point set of the
    /// cone is unchanged.
    pub fn scale_generator(&self, field: &FieldRef, idx: usize, t: &QQ) -> RationalCone {
        assert!(t.is_positive());
        let mut gens = self.gens.clone();
        gens[idx] = field.scale(&gens[idx], t);
        RationalCone { gens, strict: self.strict.clone() }
    }

    /// Image of the cone under multiplication by a field element.
    pub fn translate(&self, field: &FieldRef, unit: &FieldElement) -> RationalCone {
        RationalCone {
            gens: self.gens.iter().map(|g| field.mul(g, unit)).collect(),
            strict: self.strict.clone(),
        }
    }
}

/// Coordinates of `x` in the (independent) generators when `x` lies in
/// their rational span; `None` otherwise.
pub fn cone_coordinates(
    field: &FieldRef,
    gens: &[FieldElement],
    x: &FieldElement,
) -> Option<Vec<QQ>> {
    let n = field.degree();
    let m = gens.len();
    // solve sum t_i gens_i = x over the m pivot columns, then verify
    let mut a: Vec<Vec<QQ>> = gens.iter().map(|g| g.coords.clone()).collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].clone();
        for r in 0..m {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &inv;
                for k in 0..n {
                    let sub = &f * &a[rank][k];
                    a[r][k] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == m {
            break;
        }
    }
    if rank != m {
        return None;
    }
    let sys: Vec<Vec<QQ>> = pivot_cols
        .iter()
        .map(|&c| (0..m).map(|j| gens[j].coords[c].clone()).collect())
        .collect();
    let rhs: Vec<QQ> = pivot_cols.iter().map(|&c| x.coords[c].clone()).collect();
    let t = crate::matrix::q_solve(&sys, &rhs)?;
    for c in 0..n {
        let mut acc = QQ::zero();
        for j in 0..m {
            acc += &t[j] * &gens[j].coords[c];
        }
        if acc != x.coords[c] {
            return None;
        }
    }
    Some(t)
}

/// A perturbation direction: either an explicit rational vector or the
/// deterministic formal rule used when no direction is supplied. The
/// formal rule resolves the sign of every generator coordinate to `-1`,
/// which keeps exactly the faces spanned by full support.
#[derive(Clone, Debug)]
pub enum PerturbationRay {
    Explicit(FieldElement),
    GenericPositive,
}

impl PerturbationRay {
    /// Signs of the coordinates of the ray in the given generator basis.
    /// Errors when an explicit ray lies on a rational hyperplane spanned
    /// by the generators (some coordinate vanishes).
    pub fn coordinate_signs(
        &self,
        field: &FieldRef,
        gens: &[FieldElement],
    ) -> Result<Vec<i8>, CoreError> {
        match self {
            PerturbationRay::GenericPositive => Ok(vec![-1; gens.len()]),
            PerturbationRay::Explicit(w) => {
                let t = cone_coordinates(field, gens, w).ok_or_else(|| {
                    CoreError::invalid_input(
                        "perturbation ray must lie in the span of the generators",
                    )
                })?;
                let mut signs = Vec::with_capacity(t.len());
                for ti in &t {
                    if ti.is_zero() {
                        return Err(CoreError::invalid_input(
                            "perturbation ray lies on a rational hyperplane of the generators",
                        ));
                    }
                    signs.push(if ti.is_positive() { 1 } else { -1 });
                }
                Ok(signs)
            }
        }
    }
}

/// The limiting indicator `lim_{e->0+} 1_{C(gens)}(x + e*w)` computed
/// combinatorially: with `S0` the set of generators whose `w`-coordinate is
/// negative, the value is 1 exactly when the coordinates of `x` are
/// non-negative with support containing `S0`.
pub fn perturbed_cone_indicator(
    field: &FieldRef,
    gens: &[FieldElement],
    ray: &PerturbationRay,
    x: &FieldElement,
) -> Result<u8, CoreError> {
    let signs = ray.coordinate_signs(field, gens)?;
    let Some(t) = cone_coordinates(field, gens, x) else {
        return Ok(0);
    };
    for (ti, &s) in t.iter().zip(&signs) {
        if ti.is_negative() {
            return Ok(0);
        }
        if ti.is_zero() && s < 0 {
            return Ok(0);
        }
    }
    Ok(1)
}

/// A Shintani fundamental domain: a list of half-open cones whose unit
/// translates tile the totally positive orthant.
#[derive(Clone, Debug)]
pub struct ShintaniDomain {
    pub cones: Vec<RationalCone>,
    /// generators of the totally positive unit group modulo torsion
    pub units: Vec<FieldElement>,
}

impl ShintaniDomain {
    pub fn contains(&self, field: &FieldRef, x: &FieldElement) -> bool {
        self.cones.iter().any(|c| c.contains(field, x))
    }

    pub fn membership_count(&self, field: &FieldRef, x: &FieldElement) -> usize {
        self.cones.iter().filter(|c| c.contains(field, x)).count()
    }

    /// The domain with every cone multiplied by a unit.
    pub fn translate(&self, field: &FieldRef, unit: &FieldElement) -> ShintaniDomain {
        ShintaniDomain {
            cones: self.cones.iter().map(|c| c.translate(field, unit)).collect(),
            units: self.units.clone(),
        }
    }

    /// Split the first two-dimensional cone along the ray through the sum
    /// of its generators, preserving the half-open boundary assignment.
    /// Used by choice-independence checks.
    pub fn refine_first_plane_cone(&self, field: &FieldRef) -> Option<ShintaniDomain> {
        let idx = self.cones.iter().position(|c| c.dim() == 2)?;
        let c = &self.cones[idx];
        let w = field.add(&c.gens[0], &c.gens[1]);
        // C(v1, v2) with strictness (s1, s2) splits into C(v1, w), the open
        // ray C(w) and C(w, v2). The flag controlling inclusion of the ray
        // through v1 sits on the w-coordinate of the first piece, and the
        // one for the ray through v2 on the w-coordinate of the last; the
        // inner boundaries at w are strict everywhere except the ray piece.
        let mut cones = self.cones.clone();
        cones.remove(idx);
        cones.push(RationalCone::with_strict(
            vec![c.gens[0].clone(), w.clone()],
            vec![true, c.strict[1]],
        ));
        cones.push(RationalCone::with_strict(vec![w.clone()], vec![true]));
        cones.push(RationalCone::with_strict(
            vec![w, c.gens[1].clone()],
            vec![c.strict[0], true],
        ));
        Some(ShintaniDomain { cones, units: self.units.clone() })
    }
}

/// Fundamental domain for the totally positive units acting on the totally
/// positive orthant, for fields of degree at most two.
///
/// Degree 1: the single ray through 1. Degree 2: the half-open cone
/// `C(1, eps)` (boundary ray through 1 included, ray through `eps`
/// excluded) where `eps` is the fundamental totally positive unit.
pub fn build_shintani_domain(
    field: &FieldRef,
    units: &[FieldElement],
) -> Result<ShintaniDomain, CoreError> {
    let n = field.degree();
    match n {
        1 => Ok(ShintaniDomain {
            cones: vec![RationalCone::open(vec![field.one()])],
            units: vec![],
        }),
        2 => {
            if units.len() != 1 {
                return Err(CoreError::invalid_input(
                    "degree-2 domain construction needs exactly one totally positive unit",
                ));
            }
            let eps = &units[0];
            if !field.is_totally_positive(eps) {
                return Err(CoreError::invalid_input("unit is not totally positive"));
            }
            if field.norm(eps) != QQ::one() {
                return Err(CoreError::invalid_input("unit must have norm 1"));
            }
            if eps == &field.one() {
                return Err(CoreError::invalid_input("unit must be nontrivial"));
            }
            // half-open: { t1 * 1 + t2 * eps : t1 > 0, t2 >= 0 }
            let plane = RationalCone::with_strict(
                vec![field.one(), eps.clone()],
                vec![true, false],
            );
            Ok(ShintaniDomain { cones: vec![plane], units: vec![eps.clone()] })
        }
        _ => Err(CoreError::invalid_input(
            "domains in degree >= 3 must be supplied explicitly",
        )),
    }
}

/// Outcome of a domain verification run.
#[derive(Clone, Debug)]
pub struct DomainVerification {
    pub pass: bool,
    pub samples: usize,
    pub witness: Option<FieldElement>,
}

/// Checks that every sampled totally positive point is covered by exactly
/// one unit translate of the domain. Sampled points include random
/// rationals and the boundary rays of all cones. In degree <= 2 the set of
/// unit exponents that can cover a point is bracketed exactly through
/// embedding comparisons, so the check is complete; in higher degree all
/// exponent vectors up to `unit_bound` are tested.
pub fn verify_domain(
    field: &FieldRef,
    domain: &ShintaniDomain,
    sample_count: usize,
    unit_bound: i64,
    seed: u64,
) -> Result<DomainVerification, CoreError> {
    let n = field.degree();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut samples: Vec<FieldElement> = Vec::new();

    // boundary-flavored samples: generators and pairwise midpoints
    for c in &domain.cones {
        for g in &c.gens {
            samples.push(g.clone());
            samples.push(field.scale(g, &crate::rat::qq_ratio(3, 2)));
        }
        if c.gens.len() == 2 {
            samples.push(field.add(&c.gens[0], &c.gens[1]));
        }
    }
    // random totally positive points
    while samples.len() < sample_count {
        let coords: Vec<QQ> = (0..n)
            .map(|_| crate::rat::qq_ratio(rng.gen_range(-40..=40), rng.gen_range(1..=12)))
            .collect();
        let x = field.element_from_coords(coords);
        if !x.is_zero() && field.is_totally_positive(&x) {
            samples.push(x);
        }
    }

    for x in &samples {
        let count = count_orbit_memberships(field, domain, x, unit_bound)?;
        if count != 1 {
            return Ok(DomainVerification { pass: false, samples: samples.len(), witness: Some(x.clone()) });
        }
    }
    Ok(DomainVerification { pass: true, samples: samples.len(), witness: None })
}

/// Number of unit translates of the domain containing `x`.
fn count_orbit_memberships(
    field: &FieldRef,
    domain: &ShintaniDomain,
    x: &FieldElement,
    unit_bound: i64,
) -> Result<usize, CoreError> {
    let rank = domain.units.len();
    if rank == 0 {
        return Ok(domain.membership_count(field, x));
    }
    if rank == 1 {
        // complete bracketing: for eps with embeddings on either side of 1,
        // translates eps^k D can contain x only while the coordinates keep
        // an admissible sign pattern; scan outward from k = 0 until the
        // exact exclusion criterion holds on both sides.
        let eps = &domain.units[0];
        let mut total = domain.membership_count(field, x);
        let eps_inv = field
            .inverse(eps)
            .ok_or_else(|| CoreError::internal("unit is invertible"))?;
        for dir in [eps.clone(), eps_inv] {
            let mut y = x.clone();
            let mut misses = 0;
            loop {
                // moving x through eps^{-k}: membership of x in eps^k D is
                // membership of eps^{-k} x in D
                y = field.mul(&y, &dir);
                if domain.contains(field, &y) {
                    total += 1;
                    misses = 0;
                } else {
                    misses += 1;
                    // the embedding ratio of y moves monotonically by the
                    // fixed factor eps; once y has left the positive span
                    // of the domain's generators on the moving side it
                    // never returns (certified by the ratio argument), and
                    // two consecutive misses past the cone certify exit
                    if misses >= 2 && ratio_exited(field, domain, &y, &dir)? {
                        break;
                    }
                    if misses > 2 * unit_bound.unsigned_abs() as usize + 64 {
                        return Err(CoreError::internal(
                            "unit translate scan failed to terminate",
                        ));
                    }
                }
            }
        }
        Ok(total)
    } else {
        // bounded exhaustive scan over exponent vectors
        let mut total = 0usize;
        let mut exps = vec![-unit_bound; rank];
        loop {
            let mut u = field.one();
            for (e, unit) in exps.iter().zip(&domain.units) {
                let p = if *e >= 0 {
                    field.pow(unit, *e as u32)
                } else {
                    let inv = field.inverse(unit).unwrap();
                    field.pow(&inv, (-e) as u32)
                };
                u = field.mul(&u, &p);
            }
            let y = field.mul(x, &u);
            if domain.contains(field, &y) {
                total += 1;
            }
            let mut i = 0;
            loop {
                if i == rank {
                    return Ok(total);
                }
                exps[i] += 1;
                if exps[i] <= unit_bound {
                    break;
                }
                exps[i] = -unit_bound;
                i += 1;
            }
        }
    }
}

/// Exit certificate in the rank-one case: every cone of the domain lies in
/// the closed span of totally positive generators, so membership of
/// `y = eps^{+-k} x` forces the embedding ratio `sigma_1(y)/sigma_2(y)`
/// into a fixed bracket; once the moving ratio passes the bracket in the
/// travel direction, later translates cannot contain the point.
fn ratio_exited(
    field: &FieldRef,
    domain: &ShintaniDomain,
    y: &FieldElement,
    dir: &FieldElement,
) -> Result<bool, CoreError> {
    // bracket over all generators g: min and max of sigma_0(g)/sigma_1(g),
    // compared against sigma_0(y)/sigma_1(y) exactly via sign evaluations.
    // ratio(y) > max_g ratio(g) or < min_g ratio(g) means y is outside the
    // closed positive span of the generators.
    let above_all = domain.cones.iter().all(|c| {
        c.gens.iter().all(|g| ratio_cmp(field, y, g) == Ordering::Greater)
    });
    let below_all = domain.cones.iter().all(|c| {
        c.gens.iter().all(|g| ratio_cmp(field, y, g) == Ordering::Less)
    });
    if !(above_all || below_all) {
        return Ok(false);
    }
    // direction of travel of the ratio: multiplying by dir scales the
    // ratio by ratio(dir) which is != 1 for a nontrivial unit
    let dir_up = ratio_cmp(field, dir, &field.one()) == Ordering::Greater;
    Ok((above_all && dir_up) || (below_all && !dir_up))
}

/// Compare sigma_0(a)/sigma_1(a) with sigma_0(b)/sigma_1(b) for totally
/// positive a, b: equivalent to comparing sigma_0(a)sigma_1(b) with
/// sigma_0(b)sigma_1(a), done exactly as a sign evaluation.
fn ratio_cmp(field: &FieldRef, a: &FieldElement, b: &FieldElement) -> Ordering {
    debug_assert_eq!(field.degree(), 2);
    // sigma_0(a b') - sigma_0(a' b) where x' is the conjugate
    let conj = |x: &FieldElement| {
        // conjugate via trace: x' = Tr(x) - x for quadratic fields
        let t = field.trace(x);
        field.sub(&field.rational(t), x)
    };
    let lhs = field.mul(a, &conj(b));
    let rhs = field.mul(b, &conj(a));
    let diff = field.sub(&lhs, &rhs);
    match field.embedding_sign(&diff, 0) {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Interval, NumberField};
    use crate::rat::{qq, zz};

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

    fn sqrt2() -> FieldRef {
        NumberField::new(
            vec![zz(-2), zz(0), zz(1)],
            vec![vec![qq(1), qq(0)], vec![qq(0), qq(1)]],
            vec![
                Interval { lo: qq(1), hi: qq(2) },
                Interval { lo: qq(-2), hi: qq(-1) },
            ],
        )
        .unwrap()
    }

    fn vec2(field: &FieldRef, a: i64, b: i64) -> FieldElement {
        field.element_from_coords(vec![qq(a), qq(b)])
    }

    #[test]
    fn perturbed_indicator_examples() {
        let f = sqrt5();
        let e1 = vec2(&f, 1, 0);
        let e2 = vec2(&f, 0, 1);
        let gens = [e1.clone(), e2.clone()];
        // w interior: closed cone contains the apex
        let w_in = PerturbationRay::Explicit(vec2(&f, 1, 1));
        assert_eq!(
            perturbed_cone_indicator(&f, &gens, &w_in, &f.zero_elem()).unwrap(),
            1
        );
        // w = (1,-1): S0 = {e2}; the e1-face is excluded, the e2-face kept
        let w = PerturbationRay::Explicit(vec2(&f, 1, -1));
        assert_eq!(perturbed_cone_indicator(&f, &gens, &w, &e1).unwrap(), 0);
        assert_eq!(perturbed_cone_indicator(&f, &gens, &w, &e2).unwrap(), 1);
        // ray on a hyperplane is rejected
        let bad = PerturbationRay::Explicit(e1.clone());
        assert!(perturbed_cone_indicator(&f, &gens, &bad, &e2).is_err());
    }

    #[test]
    fn perturbation_dichotomy() {
        // c_w + c_{-w} counts interior twice, proper boundary once, outside 0
        let f = sqrt5();
        let gens = [vec2(&f, 2, 1), vec2(&f, -1, 1)];
        let w = vec2(&f, 3, -1);
        let wneg = f.neg(&w);
        let rw = PerturbationRay::Explicit(w);
        let rwn = PerturbationRay::Explicit(wneg);
        let closed = RationalCone::with_strict(gens.to_vec(), vec![false, false]);
        let open = RationalCone::open(gens.to_vec());
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..60 {
            let x = vec2(&f, rng.gen_range(-4..5), rng.gen_range(-4..5));
            let s = perturbed_cone_indicator(&f, &gens, &rw, &x).unwrap()
                + perturbed_cone_indicator(&f, &gens, &rwn, &x).unwrap();
            let expected = (closed.contains(&f, &x) as u8) + (open.contains(&f, &x) as u8);
            assert_eq!(s, expected, "at {:?}", x.coords);
        }
    }

    #[test]
    fn indicator_invariant_under_generator_scaling() {
        let f = sqrt5();
        let gens = [vec2(&f, 2, 1), vec2(&f, -1, 1)];
        let w = PerturbationRay::Explicit(vec2(&f, 3, -1));
        let scaled = [f.scale(&gens[0], &crate::rat::qq_ratio(7, 3)), gens[1].clone()];
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..40 {
            let x = vec2(&f, rng.gen_range(-4..5), rng.gen_range(-4..5));
            assert_eq!(
                perturbed_cone_indicator(&f, &gens, &w, &x).unwrap(),
                perturbed_cone_indicator(&f, &scaled, &w, &x).unwrap()
            );
        }
    }

    #[test]
    fn rational_domain_is_single_ray() {
        let f = NumberField::rationals();
        let d = build_shintani_domain(&f, &[]).unwrap();
        let v = verify_domain(&f, &d, 50, 1, 7).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn sqrt5_domain_verifies() {
        let f = sqrt5();
        // eps = (3+sqrt5)/2 = 1 + phi
        let eps = f.add(&f.one(), &f.generator());
        let d = build_shintani_domain(&f, &[eps]).unwrap();
        let v = verify_domain(&f, &d, 200, 2, 13).unwrap();
        assert!(v.pass, "witness: {:?}", v.witness);
    }

    #[test]
    fn sqrt2_domain_verifies() {
        let f = sqrt2();
        // eps = 3 + 2*sqrt2
        let eps = f.element_from_coords(vec![qq(3), qq(2)]);
        let d = build_shintani_domain(&f, &[eps]).unwrap();
        let v = verify_domain(&f, &d, 200, 2, 17).unwrap();
        assert!(v.pass, "witness: {:?}", v.witness);
    }

    #[test]
    fn fully_closed_domain_fails_on_shared_ray() {
        let f = sqrt5();
        let eps = f.add(&f.one(), &f.generator());
        let closed = ShintaniDomain {
            cones: vec![RationalCone::with_strict(
                vec![f.one(), eps.clone()],
                vec![false, false],
            )],
            units: vec![eps.clone()],
        };
        let v = verify_domain(&f, &closed, 60, 2, 3).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        // the witness double-counts: it lies on a shared boundary orbit
        assert!(count_orbit_memberships(&f, &closed, &w, 2).unwrap() != 1);
    }

    #[test]
    fn refinement_preserves_coverage() {
        let f = sqrt5();
        let eps = f.add(&f.one(), &f.generator());
        let d = build_shintani_domain(&f, &[eps]).unwrap();
        let refined = d.refine_first_plane_cone(&f).unwrap();
        let v = verify_domain(&f, &refined, 150, 2, 23).unwrap();
        assert!(v.pass, "witness: {:?}", v.witness);
    }
}
