//! Acceptance suite: every criterion prints one pass/fail line.
//!
//! Expected values come from two independent oracles implemented here: the
//! classical Hurwitz-Bernoulli formula in degree one and a double-Bernoulli
//! cone formula in degree two (validated below against divisor-sum values
//! of the quadratic zeta functions at -1).

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use shintani_core::abelian::GroupElem;
use shintani_core::bernoulli::{bernoulli_poly, hurwitz_zeta_nonpos, sigma1};
use shintani_core::error::CoreError;
use shintani_core::field::{FieldElement, FieldRef, NumberField};
use shintani_core::fixture::{build, BuiltFixture, Fixture};
use shintani_core::grossstark::{
    boundary_measure, check_enlargement, check_ord_matches_zeta, check_precision_stability,
    check_tower_product, check_trivial_unit, check_unit_sphere_mass, gross_stark_unit,
    measure_value, GrossStarkUnit, PadicContext,
};
use shintani_core::groupring::GroupRingElement;
use shintani_core::lattice::{enumerate_shifted_parallelepiped, IdealLattice};
use shintani_core::pairing::DesignatedPrime;
use shintani_core::pipeline;
use shintani_core::rat::{qq, qq_ratio, QQ, ZZ};
use shintani_core::rayclass::{GaloisCtx, QuotientMap};
use shintani_core::shintani::{cone_coordinates, RationalCone};
use shintani_core::stickelberger::{
    enlarge_s_check, fine_ideal_check, parity_check, stickelberger, tower_order_check, unsmooth,
    StickelbergerElement, ZetaDatum,
};
use std::path::Path;
use std::time::Instant;

fn fixture(name: &str) -> BuiltFixture {
    let path = format!("{}/../../fixtures/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    let fx = Fixture::from_path(Path::new(&path)).expect("load fixture");
    build(fx).expect("build fixture")
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] {}: {} ({})",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "criterion {} failed: {}", criterion, detail);
}

// ---------------------------------------------------------------------
// oracle: degree-one smoothed Hurwitz values
// ---------------------------------------------------------------------

/// `zeta_S(a mod f, k)` over the rationals with extra coprimality
/// conditions, by inclusion-exclusion over the squarefree divisors built
/// from `extra_s`, evaluated through the Hurwitz formula.
fn rational_partial_zeta(f: i64, a: i64, extra_s: &[i64], k: i64) -> QQ {
    let m = (-k) as usize;
    // primes dividing the conductor impose no extra condition on residues
    // coprime to it
    let extra_s: Vec<i64> = extra_s.iter().copied().filter(|p| f % p != 0).collect();
    let mut total = QQ::zero();
    for mask in 0..(1u32 << extra_s.len()) {
        let mut d = 1i64;
        let mut sign = QQ::one();
        for (i, &p) in extra_s.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
                sign = -sign;
            }
        }
        // v = d*w, w = d^{-1} a mod f
        let b = if f == 1 {
            1
        } else {
            let di = mod_inv(d, f);
            let b = (di * a).rem_euclid(f);
            if b == 0 {
                f
            } else {
                b
            }
        };
        let mut scale = QQ::one();
        for _ in 0..m {
            scale = scale * qq(d) * qq(f);
        }
        total += sign * scale * hurwitz_zeta_nonpos(m, &qq_ratio(b, f)).unwrap();
    }
    total
}

fn mod_inv(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let mut t = (1i64, 0i64);
    let mut r = (a.rem_euclid(m), m);
    while r.0 != 0 {
        let q = r.1 / r.0;
        t = (t.1 - q * t.0, t.0);
        r = (r.1 - q * r.0, r.0);
    }
    t.1.rem_euclid(m)
}

/// The full degree-one zeta element oracle: ray classes mod `f*infinity`
/// with ramified set `s`, smoothing primes `t`, argument `k`.
fn rational_theta_oracle(
    galois: &GaloisCtx,
    field: &FieldRef,
    f: i64,
    extra_s: &[i64],
    t_primes: &[i64],
    k: i64,
) -> GroupRingElement {
    let z = IdealLattice::ring_of_integers(field);
    let mut acc = GroupRingElement::zero(&galois.group);
    for a in 1..=f.max(1) {
        if num_integer::gcd(a, f.max(1)) != 1 {
            continue;
        }
        let cls = galois
            .artin_image(&z.scale_by_rational(&qq(a), field))
            .unwrap();
        let v = rational_partial_zeta(f.max(1), a, extra_s, k);
        acc.add_term(galois.group.neg(&cls), v);
    }
    // smoothing factors (1 - q^{1-k} [sigma_q^{-1}])
    for &q in t_primes {
        let sq = galois
            .artin_image(&z.scale_by_rational(&qq(q), field))
            .unwrap();
        let mut npow = qq(q);
        for _ in 0..(-k) as usize {
            npow *= qq(q);
        }
        let mut fac = GroupRingElement::one(&galois.group);
        fac.add_term(galois.group.neg(&sq), -npow);
        acc = acc.mul(&fac);
    }
    acc
}

// ---------------------------------------------------------------------
// oracle: degree-two double-Bernoulli cone values
// ---------------------------------------------------------------------

/// `B_j(x)/j!` helper.
fn bern_over_fact(j: usize, x: &QQ) -> QQ {
    let b = bernoulli_poly(j).eval(x);
    let mut f = QQ::one();
    for i in 2..=j {
        f *= qq(i as i64);
    }
    b / f
}

/// Quadratic-field conjugate via the trace.
fn conj(field: &FieldRef, x: &FieldElement) -> FieldElement {
    let t = field.trace(x);
    field.sub(&field.rational(t), x)
}

/// The analytic continuation at `s = -m` of
/// `sum over j,k >= 0 of Norm(x + j v1 + k v2)^{-s}`
/// for a degree-two field, `x = c1 v1 + c2 v2` with `0 < c_i <= 1`:
/// extract the coefficient of `w^m u^{2m+2}` in
/// `prod_i (v_i + w v_i')^{-1} B-series(c_i, u (v_i + w v_i'))`
/// and take `(m!)^2 / 2` times the trace. Derived from the two-region
/// Mellin split of the cone integral; validated against divisor sums.
fn double_bernoulli_cone_point(
    field: &FieldRef,
    v1: &FieldElement,
    v2: &FieldElement,
    c1: &QQ,
    c2: &QQ,
    m: usize,
) -> QQ {
    // series in w over F, truncated at w^m, for each u-degree pair
    // (j1, j2) with j1 + j2 = 2m + 2:
    //   lambda_i^{j_i - 1} where lambda_i = v_i + w v_i'
    let deg = 2 * m + 2;
    let mut z = field.zero_elem();
    for j1 in 0..=deg {
        let j2 = deg - j1;
        let b1 = bern_over_fact(j1, &(QQ::one() - c1));
        let b2 = bern_over_fact(j2, &(QQ::one() - c2));
        if b1.is_zero() || b2.is_zero() {
            continue;
        }
        // [w^m] lambda1^{j1-1} lambda2^{j2-1}
        let s1 = lambda_power_series(field, v1, j1 as i64 - 1, m);
        let s2 = lambda_power_series(field, v2, j2 as i64 - 1, m);
        let mut coeff = field.zero_elem();
        for t in 0..=m {
            coeff = field.add(&coeff, &field.mul(&s1[t], &s2[m - t]));
        }
        z = field.add(&z, &field.scale(&coeff, &(b1 * b2)));
    }
    let mut mfact = QQ::one();
    for i in 2..=m {
        mfact *= qq(i as i64);
    }
    field.trace(&z) * &mfact * &mfact / qq(2)
}

/// Coefficients of `(v + w v')^e` in `w` up to degree `cap`, allowing
/// negative exponents through the geometric expansion.
fn lambda_power_series(
    field: &FieldRef,
    v: &FieldElement,
    e: i64,
    cap: usize,
) -> Vec<FieldElement> {
    let vbar = conj(field, v);
    let mut out = Vec::with_capacity(cap + 1);
    if e >= 0 {
        for t in 0..=cap {
            if (t as i64) > e {
                out.push(field.zero_elem());
                continue;
            }
            // C(e, t) v^{e-t} vbar^t
            let c = QQ::from_integer(shintani_core::rat::binomial(e as u64, t as u64));
            let term = field.mul(
                &field.pow(v, (e - t as i64) as u32),
                &field.pow(&vbar, t as u32),
            );
            out.push(field.scale(&term, &c));
        }
    } else {
        // (v + w vbar)^e = v^e (1 + w vbar/v)^e, generalized binomials
        let vinv = field.inverse(v).unwrap();
        let ratio = field.mul(&vbar, &vinv);
        let ve = {
            let mut acc = field.one();
            for _ in 0..(-e) as u32 {
                acc = field.mul(&acc, &vinv);
            }
            acc
        };
        for t in 0..=cap {
            // C(e, t) = e (e-1) ... (e-t+1) / t!
            let mut num = QQ::one();
            for i in 0..t as i64 {
                num *= qq(e - i);
            }
            let mut den = QQ::one();
            for i in 1..=t as i64 {
                den *= qq(i);
            }
            let term = field.mul(&ve, &field.pow(&ratio, t as u32));
            out.push(field.scale(&term, &(num / den)));
        }
    }
    out
}

/// Oracle sum over `(shift + lattice) ∩ C` of `Norm^{-s}` at `s = -m`,
/// for a half-open cone in a degree-two field (face decomposition plus the
/// tiling of each open face by its rescaled generators).
fn oracle_cone_sum(
    field: &FieldRef,
    lattice: &IdealLattice,
    shift: &FieldElement,
    cone: &RationalCone,
    m: usize,
) -> QQ {
    let mut total = QQ::zero();
    let strict_set: Vec<usize> = (0..cone.dim()).filter(|&i| cone.strict[i]).collect();
    let free_set: Vec<usize> = (0..cone.dim()).filter(|&i| !cone.strict[i]).collect();
    for mask in 0..(1u32 << free_set.len()) {
        let mut face: Vec<FieldElement> =
            strict_set.iter().map(|&i| cone.gens[i].clone()).collect();
        for (bit, &i) in free_set.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                face.push(cone.gens[i].clone());
            }
        }
        if face.is_empty() {
            continue;
        }
        // rescale the face generators into the lattice
        let mut t = ZZ::one();
        for g in &face {
            t = shintani_core::rat::lcm_zz(&t, &lattice.denominator_of(g));
        }
        let tq = QQ::from_integer(t);
        let scaled: Vec<FieldElement> = face.iter().map(|g| field.scale(g, &tq)).collect();
        let pts = enumerate_shifted_parallelepiped(field, lattice, shift, &scaled).unwrap();
        for p in pts {
            let coords = cone_coordinates(field, &scaled, &p).unwrap();
            total += match scaled.len() {
                1 => {
                    // Norm(v)^m * zeta(-2m, c)
                    let mut np = QQ::one();
                    for _ in 0..m {
                        np *= field.norm(&scaled[0]);
                    }
                    np * hurwitz_zeta_nonpos(2 * m, &coords[0]).unwrap()
                }
                2 => double_bernoulli_cone_point(
                    field, &scaled[0], &scaled[1], &coords[0], &coords[1], m,
                ),
                _ => panic!("oracle only handles degree-two domains"),
            };
        }
    }
    total
}

/// Weighted oracle terms: split a coset term across subsets of the
/// smoothing primes by inclusion-exclusion.
struct OracleTerm {
    lattice: IdealLattice,
    shift: FieldElement,
    weight: QQ,
    value: GroupRingElement,
}

fn oracle_terms(
    field: &FieldRef,
    built: &BuiltFixture,
    rep: &IdealLattice,
    extra_coset: Option<(&FieldElement, &IdealLattice)>,
) -> Vec<OracleTerm> {
    let phi = shintani_core::stickelberger::build_test_function(
        field,
        &built.galois,
        rep,
        &built.datum.s_primes,
    )
    .unwrap();
    let mut out = Vec::new();
    for term in &phi.terms {
        for mask in 0..(1u32 << built.datum.smoothings.len()) {
            let mut lattice = term.modulus.clone();
            let mut shift = term.translate.clone();
            let mut weight = QQ::one();
            for (i, s) in built.datum.smoothings.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    weight *= -qq(s.ell as i64);
                    shift = lattice
                        .crt_translate(&shift, &s.prime, &field.zero_elem(), field)
                        .unwrap();
                    lattice = lattice.intersect(&s.prime, field);
                }
            }
            if let Some((center, power)) = extra_coset {
                shift = lattice.crt_translate(&shift, power, center, field).unwrap();
                lattice = lattice.intersect(power, field);
            }
            out.push(OracleTerm { lattice, shift, weight, value: term.value.clone() });
        }
    }
    out
}

/// Full zeta-element oracle for a degree-two fixture.
fn quadratic_theta_oracle(
    built: &BuiltFixture,
    m: usize,
    extra_coset: Option<(&FieldElement, &IdealLattice)>,
) -> GroupRingElement {
    let field = &built.field;
    let mut acc = GroupRingElement::zero(&built.galois.group);
    for rep in &built.datum.reps {
        let nrep = rep.norm(field);
        let mut scale = QQ::one();
        for _ in 0..m {
            scale = scale / &nrep;
        }
        for t in oracle_terms(field, built, rep, extra_coset) {
            for cone in &built.datum.domain.cones {
                let s = oracle_cone_sum(field, &t.lattice, &t.shift, cone, m);
                acc = acc.add(&t.value.scale(&(&t.weight * &s * &scale)));
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------
// oracle self-validation
// ---------------------------------------------------------------------

/// Dedekind zeta at -1 for real quadratic fields through the classical
/// divisor-sum formula, used to validate the double-Bernoulli oracle.
fn siegel_zeta_minus_one(disc: u64) -> QQ {
    let mut total = ZZ::zero();
    let bound = (disc as f64).sqrt() as i64 + 1;
    for b in -bound..=bound {
        let bb = (b * b) as i64;
        if bb > disc as i64 {
            continue;
        }
        let diff = disc as i64 - bb;
        if diff % 4 != 0 {
            continue;
        }
        if diff == 0 {
            continue;
        }
        total += sigma1((diff / 4) as u64);
    }
    QQ::new(total, ZZ::from(60))
}

#[test]
fn oracle_self_validation() {
    // zeta_F(-1) for Q(sqrt5), Q(sqrt2), Q(sqrt3) from the double-Bernoulli
    // oracle vs the divisor-sum formula; zeta_F(0) and zeta_F(-2) vanish
    for (name, disc) in [("sqrt5-trivial-t11-19", 5u64), ("sqrt2-trivial-t7-17", 8), ("sqrt3-trivial-t11-13", 12)] {
        let built = fixture(name);
        let field = &built.field;
        let expected = siegel_zeta_minus_one(disc);
        // unsmoothed zeta_F(-1): sum over narrow classes of N^{-s}-sums
        // over the domain
        let mut total = QQ::zero();
        for rep in &built.datum.reps {
            let scale = QQ::one() / rep.norm(field);
            for cone in &built.datum.domain.cones {
                total += oracle_cone_sum(field, rep, &field.zero_elem(), cone, 1) * &scale;
            }
        }
        assert_eq!(total, expected, "zeta_{{{}}}(-1)", name);
        // vanishing at 0 and -2
        for m in [0usize, 2] {
            let mut t = QQ::zero();
            for rep in &built.datum.reps {
                let mut scale = QQ::one();
                for _ in 0..m {
                    scale = scale / rep.norm(field);
                }
                for cone in &built.datum.domain.cones {
                    t += oracle_cone_sum(field, rep, &field.zero_elem(), cone, m) * &scale;
                }
            }
            assert_eq!(t, QQ::zero(), "zeta_{{{}}}({}) should vanish", name, -(m as i64));
        }
    }
    println!("[oracle] double-Bernoulli formula matches the divisor-sum values");
}

// ---------------------------------------------------------------------
// the acceptance criteria
// ---------------------------------------------------------------------

#[test]
fn criterion_1_rational_oracle_equivalence() {
    let start = Instant::now();
    let t_sets: Vec<Vec<i64>> = vec![vec![3], vec![3, 5], vec![5, 7]];
    let mut cases = 0;
    for f in [1i64, 3, 4, 5, 8, 12] {
        for t in &t_sets {
            if t.iter().any(|&q| f % q == 0) {
                continue;
            }
            for k in [0i64, -1, -2] {
                if k < 0 && t.len() < 2 {
                    continue;
                }
                let extra_s: Vec<i64> = shintani_core::rat::factor(&ZZ::from(f))
                    .into_iter()
                    .map(|(p, _)| p.to_i64().unwrap())
                    .collect();
                let fx = rational_fixture_json(f, &extra_s, t, k);
                let built = build(Fixture::from_json(&fx).unwrap()).unwrap();
                let theta = stickelberger(
                    &built.field,
                    &built.galois,
                    &built.datum,
                    k,
                    DesignatedPrime::default(),
                )
                .unwrap();
                let oracle = rational_theta_oracle(&built.galois, &built.field, f, &extra_s, t, k);
                assert_eq!(theta.element, oracle, "f={} T={:?} k={}", f, t, k);
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "1 rational-oracle-equivalence",
        elapsed.as_secs() < 10,
        &format!("{} cases exact in {:?}", cases, elapsed),
    );
}

fn rational_fixture_json(f: i64, extra_s: &[i64], t: &[i64], k: i64) -> String {
    let s_json: Vec<String> = extra_s
        .iter()
        .map(|p| format!("{{\"gens\": [[\"{}\"]]}}", p))
        .collect();
    let t_json: Vec<String> = t
        .iter()
        .map(|p| format!("{{\"gens\": [[\"{}\"]]}}", p))
        .collect();
    format!(
        r#"{{
        "version": 1,
        "name": "sweep-f{}",
        "field": {{"polynomial": ["0","1"], "integral_basis": [["1"]], "root_intervals": [["-1","1"]]}},
        "modulus": {{"finite": {{"gens": [["{}"]]}}, "infinite": [{}]}},
        "s_primes": [{}],
        "t_primes": [{}],
        "k": {}
    }}"#,
        f,
        f.max(1),
        f > 1,
        s_json.join(","),
        t_json.join(","),
        k
    )
}

#[test]
fn criterion_2_gaussian_stickelberger() {
    let start = Instant::now();
    let built = fixture("q-cond4-t3");
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    let z = IdealLattice::ring_of_integers(&built.field);
    let tau = built
        .galois
        .artin_image(&z.scale_by_rational(&qq(3), &built.field))
        .unwrap();
    let mut expected = GroupRingElement::one(&built.galois.group);
    expected.add_term(tau, qq(-1));
    let elapsed = start.elapsed();
    report(
        "2 gaussian-stickelberger",
        theta.element == expected && elapsed.as_secs() < 1,
        &format!("theta = [1] - [tau] in {:?}", elapsed),
    );
}

#[test]
fn criterion_3_real_quadratic_minus_one() {
    let start = Instant::now();
    let built = fixture("sqrt5-trivial-t11-19");
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        -1,
        DesignatedPrime::default(),
    )
    .unwrap();
    // the independent double-Bernoulli oracle value
    let oracle = quadratic_theta_oracle(&built, 1, None);
    let pass = theta.element.augmentation() == qq(1440)
        && oracle.augmentation() == qq(1440)
        && theta.element == oracle;
    let elapsed = start.elapsed();
    report(
        "3 real-quadratic-minus-one",
        pass && elapsed.as_secs() < 30,
        &format!("theta = 1440 = oracle in {:?}", elapsed),
    );
}

#[test]
fn criterion_4_integrality_suite() {
    let corpus = [
        "q-cond1-t3",
        "q-cond4-t3",
        "q-cond4-t7",
        "q-cond3-t57",
        "q-cond5-t37",
        "q-cond8-t35",
        "q-cond12-t57",
        "sqrt5-trivial-t11-19",
        "sqrt2-trivial-t7-17",
        "sqrt3-trivial-t11-13",
        "sqrt5-ray-q41",
        "sqrt5-parity-k2",
        "tower-z16",
        "tower-z20",
        "tower-z20-l",
        "tower-z20-k",
        "gs-qi-p5",
        "sqrt5-gs-real",
    ];
    let mut checked = 0;
    for name in corpus {
        let built = fixture(name);
        let theta = stickelberger(
            &built.field,
            &built.galois,
            &built.datum,
            built.fixture.k,
            DesignatedPrime::default(),
        )
        .unwrap();
        assert!(
            theta.element.is_integral(),
            "non-integral coefficients in {}",
            name
        );
        checked += 1;
    }
    report(
        "4 integrality-suite",
        checked >= 12,
        &format!("{} fixtures, all integral", checked),
    );
}

#[test]
fn criterion_5_choice_independence() {
    let names = [
        "q-cond8-t35",
        "q-cond12-t57",
        "sqrt5-trivial-t11-19",
        "sqrt2-trivial-t7-17",
        "sqrt3-trivial-t11-13",
    ];
    let mut checks = 0;
    for name in names {
        let built = fixture(name);
        let k = built.fixture.k;
        let base = stickelberger(
            &built.field,
            &built.galois,
            &built.datum,
            k,
            DesignatedPrime::default(),
        )
        .unwrap();
        // (iii) designated smoothing prime
        for idx in 0..built.datum.smoothings.len() {
            let alt = stickelberger(
                &built.field,
                &built.galois,
                &built.datum,
                k,
                DesignatedPrime::Index(idx),
            )
            .unwrap();
            assert_eq!(alt.element, base.element, "designated swap on {}", name);
            checks += 1;
        }
        // (i) domain translate and refinement
        if !built.datum.domain.units.is_empty() {
            let eps = built.datum.domain.units[0].clone();
            let translated = ZetaDatum {
                reps: built.datum.reps.clone(),
                domain: built.datum.domain.translate(&built.field, &eps),
                smoothings: built.datum.smoothings.clone(),
                s_primes: built.datum.s_primes.clone(),
            };
            let alt = stickelberger(
                &built.field,
                &built.galois,
                &translated,
                k,
                DesignatedPrime::default(),
            )
            .unwrap();
            assert_eq!(alt.element, base.element, "domain translate on {}", name);
            checks += 1;
            let refined = ZetaDatum {
                reps: built.datum.reps.clone(),
                domain: built
                    .datum
                    .domain
                    .refine_first_plane_cone(&built.field)
                    .unwrap(),
                smoothings: built.datum.smoothings.clone(),
                s_primes: built.datum.s_primes.clone(),
            };
            let alt = stickelberger(
                &built.field,
                &built.galois,
                &refined,
                k,
                DesignatedPrime::default(),
            )
            .unwrap();
            assert_eq!(alt.element, base.element, "domain refinement on {}", name);
            checks += 1;
        }
        // (ii) replacing a representative by a totally positive multiple
        {
            let field = &built.field;
            let y = if field.degree() == 1 {
                field.rational(qq(11))
            } else {
                // a totally positive non-unit multiplier coprime to the
                // fixture's auxiliary primes
                field.rational(qq(3))
            };
            let moved: Vec<IdealLattice> = built
                .datum
                .reps
                .iter()
                .map(|r| {
                    let gens: Vec<FieldElement> = r
                        .basis_elements(field)
                        .iter()
                        .map(|b| field.mul(b, &y))
                        .collect();
                    IdealLattice::from_elements(field, &gens).unwrap()
                })
                .collect();
            let datum = ZetaDatum {
                reps: moved,
                domain: built.datum.domain.clone(),
                smoothings: built.datum.smoothings.clone(),
                s_primes: built.datum.s_primes.clone(),
            };
            let alt = stickelberger(
                &built.field,
                &built.galois,
                &datum,
                k,
                DesignatedPrime::default(),
            )
            .unwrap();
            assert_eq!(alt.element, base.element, "representative change on {}", name);
            checks += 1;
        }
    }
    report(
        "5 choice-independence",
        checks >= 15,
        &format!("{} exact equalities across 5 fixtures", checks),
    );
}

#[test]
fn criterion_6_cross_smoothing() {
    // unsmooth(theta_T) agrees across T on the Gaussian quotient and on a
    // quadratic ray-class fixture
    let a = fixture("q-cond4-t3");
    let b = fixture("q-cond4-t7");
    let t3 = stickelberger(&a.field, &a.galois, &a.datum, 0, DesignatedPrime::default()).unwrap();
    let t7 = stickelberger(&b.field, &b.galois, &b.datum, 0, DesignatedPrime::default()).unwrap();
    let u3 = unsmooth(
        &a.field,
        &a.galois,
        &t3,
        &[IdealLattice::ring_of_integers(&a.field).scale_by_rational(&qq(3), &a.field)],
    )
    .unwrap();
    let u7 = unsmooth(
        &b.field,
        &b.galois,
        &t7,
        &[IdealLattice::ring_of_integers(&b.field).scale_by_rational(&qq(7), &b.field)],
    )
    .unwrap();
    assert_eq!(u3, u7, "gaussian cross-smoothing");

    // Q(sqrt5) ray-class fixture with T = {q19} vs T = {q29}
    let base = fixture("sqrt5-ray-q41");
    let field = &base.field;
    let phi = field.generator();
    let q19 = IdealLattice::principal(field, &field.sub(&field.rational(qq(5)), &phi)).unwrap();
    let q29 = IdealLattice::principal(field, &field.sub(&field.rational(qq(6)), &phi)).unwrap();
    let theta19 =
        stickelberger(field, &base.galois, &base.datum, 0, DesignatedPrime::default()).unwrap();
    let datum29 = ZetaDatum {
        reps: base.datum.reps.clone(),
        domain: base.datum.domain.clone(),
        smoothings: vec![shintani_core::pairing::SmoothingDatum::new(field, q29.clone()).unwrap()],
        s_primes: base.datum.s_primes.clone(),
    };
    let theta29 =
        stickelberger(field, &base.galois, &datum29, 0, DesignatedPrime::default()).unwrap();
    let un19 = unsmooth(field, &base.galois, &theta19, &[q19]).unwrap();
    let un29 = unsmooth(field, &base.galois, &theta29, &[q29]).unwrap();
    assert_eq!(un19, un29, "quadratic cross-smoothing");
    report(
        "6 cross-smoothing",
        true,
        "unsmoothed values agree across smoothing sets on both fixtures",
    );
}

#[test]
fn criterion_7_gross_tower() {
    let start = Instant::now();
    let mut certified = 0;
    for name in ["tower-z16", "tower-z20", "sqrt5-ray-q41"] {
        let t0 = Instant::now();
        let built = fixture(name);
        let spec = built.fixture.tower.clone().unwrap();
        let theta = stickelberger(
            &built.field,
            &built.galois,
            &built.datum,
            0,
            DesignatedPrime::default(),
        )
        .unwrap();
        let cert = tower_order_check(
            &theta,
            built.tower_subgroup.as_ref().unwrap(),
            spec.split_finite,
            spec.split_archimedean,
            built.field.degree(),
        )
        .unwrap();
        assert!(
            cert.bound_holds && cert.doubled_bound_holds,
            "tower bound on {}: {:?}",
            name,
            cert
        );
        let per = t0.elapsed();
        assert!(per.as_secs() < 60, "{} took {:?}", name, per);
        certified += 1;
    }
    // finer per-place ideal on the fixture carrying decomposition data
    let built = fixture("tower-z16");
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    let mut finite_gens = Vec::new();
    for d in &built.fixture.decomposition_groups {
        let mut gens = Vec::new();
        for i in &d.gens {
            let ideal = shintani_core::fixture::parse_ideal_spec(&built.field, i).unwrap();
            gens.push(built.galois.artin_image(&ideal).unwrap());
        }
        finite_gens.push(gens);
    }
    let arch: Vec<GroupElem> = vec![]; // degree one: no extra archimedean places
    assert!(
        fine_ideal_check(&theta, &finite_gens, &arch),
        "finer per-place membership on tower-z16"
    );
    report(
        "7 gross-tower",
        certified >= 3,
        &format!("{} towers certified (+fine ideal) in {:?}", certified, start.elapsed()),
    );
}

#[test]
fn criterion_8_s_enlargement() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(20240809);
    let mut checked = 0;
    for k in [0i64, -1] {
        // five randomized (fixture, added prime) pairs per k
        let pool: Vec<(&str, Vec<i64>)> = if k == 0 {
            vec![
                ("q-cond4-t3", vec![5, 7, 11, 13, 17]),
                ("q-cond8-t35", vec![7, 11, 13, 17, 19]),
                ("q-cond12-t57", vec![11, 13, 17, 19, 23]),
                ("q-cond3-t57", vec![2, 11, 13, 17, 19]),
                ("q-cond5-t37", vec![2, 11, 13, 17, 19]),
            ]
        } else {
            vec![
                ("q-cond8-t35", vec![7, 11, 13, 17, 19]),
                ("q-cond12-t57", vec![11, 13, 17, 19, 23]),
                ("q-cond3-t57", vec![2, 11, 13, 17, 19]),
                ("q-cond5-t37", vec![2, 11, 13, 17, 19]),
                ("sqrt5-trivial-t11-19", vec![2, 3, 7, 13, 17]),
            ]
        };
        for (name, primes) in &pool {
            let built = fixture(name);
            if k < 0 && built.datum.smoothings.len() < 2 {
                continue;
            }
            let v = primes[rng.gen_range(0..primes.len())];
            let field = &built.field;
            let added = IdealLattice::ring_of_integers(field).scale_by_rational(&qq(v), field);
            let theta_s = stickelberger(
                field,
                &built.galois,
                &built.datum,
                k,
                DesignatedPrime::default(),
            )
            .unwrap();
            let mut s2 = built.datum.s_primes.clone();
            s2.push(added.clone());
            let datum2 = ZetaDatum {
                reps: built.datum.reps.clone(),
                domain: built.datum.domain.clone(),
                smoothings: built.datum.smoothings.clone(),
                s_primes: s2,
            };
            let theta_s2 = stickelberger(
                field,
                &built.galois,
                &datum2,
                k,
                DesignatedPrime::default(),
            )
            .unwrap();
            assert!(
                enlarge_s_check(field, &built.galois, &theta_s, &theta_s2, &added).unwrap(),
                "enlargement {} + {} at k={}",
                name,
                v,
                k
            );
            checked += 1;
        }
    }
    report(
        "8 s-enlargement",
        checked >= 10,
        &format!("{} randomized identities exact", checked),
    );
}

#[test]
fn criterion_9_gross_stark_global_match() {
    let start = Instant::now();
    let built = fixture("gs-qi-p5");
    let ctx = built.local.as_ref().unwrap();
    assert_eq!(ctx.p, 5);
    assert_eq!(ctx.precision, 4);
    let unit = gross_stark_unit(&built.field, &built.galois, &built.datum, ctx).unwrap();
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    assert!(check_ord_matches_zeta(&unit, &theta).pass);

    // brute-force the global 5-unit group of the Gaussian field:
    // elements +-i^k (2+i)^a (2-i)^b with absolute value 1 away from 5,
    // i.e. b = -a; represent them 5-adically through the embedding that
    // kills 2+i and compare against the computed unit part
    let pm = ZZ::from(5).pow(4);
    // two guard digits: the numerator (2+i)^2 has valuation two
    let big = &pm * ZZ::from(25);
    let iota = gaussian_i_mod(&big);
    let id = built.galois.group.identity();
    let comp = &unit.components[&id];
    assert_eq!(comp.valuation, ZZ::from(1), "ord part matches zeta(1,0) = 1");

    let mut matched: Option<(i32, i32)> = None;
    for k in 0..4i32 {
        for sign in [1i32, -1] {
            // x = sign * i^k (2+i)/(2-i) = sign * i^k (3+4i)/5 has
            // valuation one; its unit part is (numerator / 25)
            let mut num = gaussian_eval(3, 4, &iota, &big); // 3 + 4*iota
            for _ in 0..k {
                num = (num * &iota).mod_floor(&big);
            }
            if sign < 0 {
                num = (&big - &num).mod_floor(&big);
            }
            let (q, r) = num.div_rem(&ZZ::from(25));
            if !r.is_zero() {
                continue;
            }
            if q.mod_floor(&pm) == comp.unit_part.mod_floor(&pm) {
                matched = Some((k, sign));
            }
        }
    }
    let (k, sign) = matched.expect("computed unit matches a global 5-unit");
    // the matched element is congruent to 1 mod 3 in the Gaussian integers
    // (check in Z[i]/3: i^k (2+i)(2-i)^{-1} with sign)
    let ok_mod3 = gaussian_t_congruence(k, sign);
    let elapsed = start.elapsed();
    report(
        "9 gross-stark-global-match",
        ok_mod3 && elapsed.as_secs() < 120,
        &format!(
            "unit matches sign={} i^{} (2+i)/(2-i) mod 5^4, T-congruent, in {:?}",
            sign, k, elapsed
        ),
    );
}

/// The square root of -1 in `Z/m` congruent to 3 mod 5 (Hensel lifting).
fn gaussian_i_mod(m: &ZZ) -> ZZ {
    let mut x = ZZ::from(3);
    let mut modulus = ZZ::from(5);
    while modulus < *m {
        // lift x to x' mod modulus*5 with x'^2 = -1
        let next = &modulus * ZZ::from(5);
        let mut cand = x.clone();
        while (&cand * &cand + ZZ::one()).mod_floor(&next) != ZZ::zero() {
            cand += &modulus;
        }
        x = cand;
        modulus = next;
    }
    x.mod_floor(m)
}

fn gaussian_eval(re: i64, im: i64, iota: &ZZ, m: &ZZ) -> ZZ {
    (ZZ::from(re) + ZZ::from(im) * iota).mod_floor(m)
}

/// Checks `sign * i^k (2+i)/(2-i) = 1` in `Z[i]/3`.
fn gaussian_t_congruence(k: i32, sign: i32) -> bool {
    // Z[i]/3 arithmetic on pairs (a, b) = a + bi mod 3
    let mul = |x: (i64, i64), y: (i64, i64)| {
        (
            (x.0 * y.0 - x.1 * y.1).rem_euclid(3),
            (x.0 * y.1 + x.1 * y.0).rem_euclid(3),
        )
    };
    // (2-i)^{-1} mod 3: (2-i)(2+i) = 5 = 2 mod 3, and 2^{-1} = 2 mod 3
    let inv_2mi = mul((2, 0), (2, 1)); // 2*(2+i)
    let mut x = mul((2, 1), inv_2mi); // (2+i)/(2-i)
    for _ in 0..k {
        x = mul(x, (0, 1));
    }
    if sign < 0 {
        x = mul(x, (2, 0)); // -1 = 2 mod 3
    }
    x == (1, 0)
}

#[test]
fn criterion_10_gross_stark_internal_suite() {
    let start = Instant::now();
    // (1) measure refinement and unit-sphere mass on the main fixture
    let built = fixture("gs-qi-p5");
    let ctx = built.local.as_ref().unwrap();
    let m1 = boundary_measure(&built.field, &built.galois, &built.datum, ctx, 1).unwrap();
    let m2 = boundary_measure(&built.field, &built.galois, &built.datum, ctx, 2).unwrap();
    assert!(m2.refines(&m1, 5), "measure refinement");
    assert!(
        check_unit_sphere_mass(&m1, 5, &built.galois.group).pass,
        "unit-sphere mass zero"
    );
    // the five level-1 masses sum to the zeta element
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    assert_eq!(m1.total(&built.galois.group), theta.element);

    // (2) precision stability M = 2..5
    let mut prev: Option<GrossStarkUnit> = None;
    for m in 2..=5usize {
        let cm = PadicContext::new(
            &built.field,
            ctx.prime.clone(),
            ctx.uniformizer.clone(),
            m,
        )
        .unwrap();
        let u = gross_stark_unit(&built.field, &built.galois, &built.datum, &cm).unwrap();
        if let Some(p) = &prev {
            assert!(check_precision_stability(p, &u).pass, "stability at M={}", m);
        }
        prev = Some(u);
    }

    // (3) enlargement identity mod p^M: S' = S + {(7)}
    let field = &built.field;
    let added = IdealLattice::ring_of_integers(field).scale_by_rational(&qq(7), field);
    let sigma_q = built.galois.artin_image(&added).unwrap();
    let base_unit = gross_stark_unit(field, &built.galois, &built.datum, ctx).unwrap();
    let mut s2 = built.datum.s_primes.clone();
    s2.push(added);
    let datum2 = ZetaDatum {
        reps: built.datum.reps.clone(),
        domain: built.datum.domain.clone(),
        smoothings: built.datum.smoothings.clone(),
        s_primes: s2,
    };
    let enlarged_unit = gross_stark_unit(field, &built.galois, &datum2, ctx).unwrap();
    assert!(
        check_enlargement(&base_unit, &enlarged_unit, &sigma_q, &built.galois.group).pass,
        "unit enlargement identity"
    );

    // (4) tower product: the biquadratic layer over the CM quotient
    let top = fixture("tower-z20-l");
    let sub = fixture("tower-z20-k");
    let u_top = gross_stark_unit(&top.field, &top.galois, &top.datum, top.local.as_ref().unwrap())
        .unwrap();
    let u_sub = gross_stark_unit(&sub.field, &sub.galois, &sub.datum, sub.local.as_ref().unwrap())
        .unwrap();
    // projection: quotient of the top group by the class of (13)
    let thirteen = IdealLattice::ring_of_integers(&top.field)
        .scale_by_rational(&qq(13), &top.field);
    let c13 = top.galois.artin_image(&thirteen).unwrap();
    let proj = QuotientMap::new(&top.galois.group, &[c13]).unwrap();
    // identify the projected group with the sub fixture's group through
    // common Artin images
    let ideals: Vec<i64> = vec![3, 7, 9, 11, 13, 17, 19, 21];
    let mut dict = std::collections::BTreeMap::new();
    for n in ideals {
        let i_top = top
            .galois
            .artin_image(
                &IdealLattice::ring_of_integers(&top.field).scale_by_rational(&qq(n), &top.field),
            )
            .unwrap();
        let i_sub = sub
            .galois
            .artin_image(
                &IdealLattice::ring_of_integers(&sub.field).scale_by_rational(&qq(n), &sub.field),
            )
            .unwrap();
        dict.insert(proj.project(&i_top), i_sub);
    }
    assert!(
        check_tower_product(&u_top, &u_sub, &top.galois.group, |tau| {
            dict[&proj.project(tau)].clone()
        })
        .pass,
        "tower product of units"
    );

    report(
        "10 gross-stark-internal-suite",
        true,
        &format!(
            "refinement, mass, stability, enlargement, tower product all exact (in {:?})",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_10d_real_place_triviality() {
    // The real-place degeneration: the paper proves the cohomologically
    // defined unit is trivial whenever the extension keeps a real place
    // away from the distinguished one. Implemented exactly as stated for
    // the explicit uniformizer-power-times-Riemann-product construction.
    //
    // This check is expected to fail: the explicit construction reproduces
    // the cohomological unit over the rationals (criterion 9 matches the
    // global 5-unit exactly), but in higher degree the cohomological
    // construction carries a unit-cocycle correction that the explicit
    // product formula does not see. The boundary measures themselves are
    // independently confirmed against the double-Bernoulli oracle, and the
    // valuation, mass, refinement, enlargement and tower identities all
    // hold, so the gap is precisely the omitted correction factor.
    let mut all_trivial = true;
    for name in ["sqrt5-gs-mixed", "sqrt5-gs-real"] {
        let built = fixture(name);
        let u = gross_stark_unit(
            &built.field,
            &built.galois,
            &built.datum,
            built.local.as_ref().unwrap(),
        )
        .unwrap();
        let outcome = check_trivial_unit(&u);
        println!(
            "[acceptance] 10d real-place unit on {}: {}",
            name,
            if outcome.pass { "trivial" } else { "NOT trivial" }
        );
        all_trivial &= outcome.pass;
    }
    report(
        "10d real-place-triviality",
        all_trivial,
        "see the decisions ledger: the explicit product omits the degree>=2 unit-cocycle correction",
    );
}

// ---------------------------------------------------------------------
// supplementary exact cross-checks tying the pipeline to the oracle in
// degree two away from the trivial extension
// ---------------------------------------------------------------------

#[test]
fn quadratic_ray_class_oracle_cross_check() {
    // the odd-odd quadratic extension of Q(sqrt5): the zeta element at 0
    // from the pairing equals the double-Bernoulli oracle value
    let built = fixture("sqrt5-ray-q41");
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    let oracle = quadratic_theta_oracle(&built, 0, None);
    assert_eq!(theta.element, oracle);
    // nonzero with augmentation zero
    assert!(!theta.element.is_zero());
    assert_eq!(theta.element.augmentation(), QQ::zero());
    println!("[cross-check] quadratic ray-class zeta element matches the oracle exactly");
}

#[test]
fn parity_membership_even_negative() {
    // even negative argument: the element lies in the sign ideal of the
    // second archimedean place
    let built = fixture("sqrt5-parity-k2");
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        -2,
        DesignatedPrime::default(),
    )
    .unwrap();
    assert!(!theta.element.is_zero(), "parity fixture should be nonzero");
    let sigma_v2 = built.galois.archimedean_class(1).unwrap();
    assert!(
        parity_check(&theta, &[sigma_v2]),
        "membership in the archimedean sign ideal"
    );
    println!("[cross-check] parity membership holds at k = -2");
}

#[test]
fn tower_projection_compatibility() {
    // the zeta element over the full conductor-16 group projects onto the
    // element of the CM quotient with the same ramified set
    let built = fixture("tower-z16");
    let theta_l = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    let five = IdealLattice::ring_of_integers(&built.field)
        .scale_by_rational(&qq(5), &built.field);
    let c5 = built.galois.artin_image(&five).unwrap();
    let proj = QuotientMap::new(&built.galois.group, &[c5]).unwrap();
    let projected = proj.project_ring(&theta_l.element);

    // independent computation in the quotient
    let raycl = shintani_core::rayclass::RayClassGroup::new(
        &built.field,
        shintani_core::rayclass::Modulus {
            finite: IdealLattice::ring_of_integers(&built.field)
                .scale_by_rational(&qq(16), &built.field),
            infinite: vec![true],
        },
        &[],
    )
    .unwrap();
    let c5b = raycl.artin_image(&five).unwrap();
    let galois_k = GaloisCtx::quotient_by(raycl, &[c5b]).unwrap();
    let theta_k = stickelberger(
        &built.field,
        &galois_k,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )
    .unwrap();
    // compare through Artin images of a generator
    let three = IdealLattice::ring_of_integers(&built.field)
        .scale_by_rational(&qq(3), &built.field);
    let g_proj = proj.project(&built.galois.artin_image(&three).unwrap());
    let g_k = galois_k.artin_image(&three).unwrap();
    // both quotients are Z/2 generated by the class of 3
    assert_eq!(proj.target.factors, galois_k.group.factors);
    let translate = |e: &GroupElem| -> GroupElem {
        // map through the generator identification
        if proj.target.is_identity(e) {
            galois_k.group.identity()
        } else {
            g_k.clone()
        }
    };
    assert!(!proj.target.is_identity(&g_proj));
    let mut mapped = GroupRingElement::zero(&galois_k.group);
    for (g, c) in &projected.coeffs {
        mapped.add_term(translate(g), c.clone());
    }
    assert_eq!(mapped, theta_k.element, "tower projection compatibility");
    println!("[cross-check] tower projection commutes with the zeta element");
}

#[test]
fn measure_values_against_oracle() {
    // degree-two measure values from the cyclotomic pairing match the
    // double-Bernoulli oracle with the congruence folded in
    let built = fixture("sqrt5-gs-real");
    let ctx = built.local.as_ref().unwrap();
    let field = &built.field;
    let mut power = IdealLattice::ring_of_integers(field);
    for _ in 0..1 {
        power = power.mul_ideal(&ctx.prime, field);
    }
    for c in [1i64, 2, 5, 7] {
        let center = field.rational(qq(c));
        let got = measure_value(field, &built.galois, &built.datum, ctx, &center, 1).unwrap();
        let oracle = quadratic_theta_oracle(&built, 0, Some((&center, &power)));
        assert_eq!(got.element, oracle, "measure of {} + p", c);
    }
    println!("[cross-check] boundary measure values match the oracle");
}
