//! Fixture-driven command orchestration shared by the command-line tool
//! and the acceptance suite.

use crate::bernoulli::{bernoulli_poly, hurwitz_zeta_nonpos};
use crate::error::CoreError;
use crate::fixture::BuiltFixture;
use crate::grossstark::{
    boundary_measure, check_ord_matches_zeta, check_precision_stability,
    check_unit_sphere_mass, gross_stark_unit, GrossStarkUnit, PadicContext,
};
use crate::pairing::DesignatedPrime;
use crate::rat::{format_qq, qq_ratio, QQ};
use crate::report::{
    ring_values, zeta_values, CheckReport, ClassValue, DomainReport, Report, ThetaReport,
    TowerReport, UnitComponentReport, UnitReport,
};
use crate::shintani::verify_domain;
use crate::stickelberger::{
    fine_ideal_check, stickelberger, tower_order_check, unsmooth, StickelbergerElement,
    ZetaDatum,
};
use num_traits::One;
use std::time::Instant;

fn base_report(built: &BuiltFixture, command: &str) -> Report {
    let mut r = Report::new(command, &built.fixture.name);
    r.invariant_factors = built.galois.group.factors.clone();
    r.inputs
        .insert("degree".into(), built.field.degree().to_string());
    r.inputs.insert(
        "t_primes".into(),
        built
            .datum
            .smoothings
            .iter()
            .map(|s| s.ell.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    r.inputs
        .insert("s_count".into(), built.datum.s_primes.len().to_string());
    r
}

fn theta_report(theta: &StickelbergerElement) -> ThetaReport {
    ThetaReport {
        k: theta.k,
        zeta_values: zeta_values(&theta.element),
        coefficients: ring_values(&theta.element),
        integral: theta.element.is_integral(),
    }
}

/// The zeta element, with the choice-independence suite embedded in the
/// report: swapping the designated smoothing prime and translating or
/// refining the fundamental domain must not change the answer.
pub fn cmd_zeta(built: &BuiltFixture, k: i64) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = base_report(built, "zeta");
    report.inputs.insert("k".into(), k.to_string());
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        k,
        DesignatedPrime::default(),
    )?;
    report.checks.push(CheckReport {
        name: "integrality".into(),
        pass: theta.element.is_integral(),
        detail: "coefficients lie in the integers".into(),
    });

    // designated-prime independence
    if built.datum.smoothings.len() >= 2 {
        let mut all_equal = true;
        for idx in 0..built.datum.smoothings.len() {
            let alt = stickelberger(
                &built.field,
                &built.galois,
                &built.datum,
                k,
                DesignatedPrime::Index(idx),
            )?;
            all_equal &= alt.element == theta.element;
        }
        report.checks.push(CheckReport {
            name: "designated-prime-independence".into(),
            pass: all_equal,
            detail: "every choice of designated smoothing prime agrees".into(),
        });
    }

    // domain translate and refinement independence
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
        )?;
        report.checks.push(CheckReport {
            name: "domain-translate-independence".into(),
            pass: alt.element == theta.element,
            detail: "unit translate of the fundamental domain agrees".into(),
        });
    }
    if let Some(refined) = built.datum.domain.refine_first_plane_cone(&built.field) {
        let datum = ZetaDatum {
            reps: built.datum.reps.clone(),
            domain: refined,
            smoothings: built.datum.smoothings.clone(),
            s_primes: built.datum.s_primes.clone(),
        };
        let alt = stickelberger(
            &built.field,
            &built.galois,
            &datum,
            k,
            DesignatedPrime::default(),
        )?;
        report.checks.push(CheckReport {
            name: "domain-refinement-independence".into(),
            pass: alt.element == theta.element,
            detail: "refining a plane cone agrees".into(),
        });
    }

    report.theta = Some(theta_report(&theta));
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    if report.checks.iter().any(|c| !c.pass) {
        return Err(CoreError::internal(
            "choice-independence suite failed inside the zeta command",
        ));
    }
    Ok(report)
}

pub fn cmd_unsmooth(built: &BuiltFixture, k: i64) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = cmd_zeta(built, k)?;
    report.command = "unsmooth".into();
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        k,
        DesignatedPrime::default(),
    )?;
    let t_primes: Vec<_> = built
        .datum
        .smoothings
        .iter()
        .map(|s| s.prime.clone())
        .collect();
    let un = unsmooth(&built.field, &built.galois, &theta, &t_primes)?;
    report.unsmoothed = Some(zeta_values(&un));
    report
        .timings_ms
        .insert("unsmooth".into(), start.elapsed().as_millis());
    Ok(report)
}

pub fn cmd_tower_check(built: &BuiltFixture, certify_fine: bool) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = base_report(built, "tower-check");
    let Some(subgroup) = &built.tower_subgroup else {
        return Err(CoreError::fixture("fixture has no tower section"));
    };
    let spec = built.fixture.tower.as_ref().unwrap();
    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )?;
    let cert = tower_order_check(
        &theta,
        subgroup,
        spec.split_finite,
        spec.split_archimedean,
        built.field.degree(),
    )?;
    let fine = if certify_fine {
        let mut finite_gens = Vec::new();
        for d in &built.fixture.decomposition_groups {
            let mut gens = Vec::new();
            for i in &d.gens {
                let ideal = crate::fixture::parse_ideal_spec(&built.field, i)?;
                gens.push(built.galois.artin_image(&ideal)?);
            }
            finite_gens.push(gens);
        }
        if finite_gens.len() != built.datum.s_primes.len() {
            return Err(CoreError::fixture(
                "fine-ideal certification needs decomposition data for every ramified prime",
            ));
        }
        let mut arch = Vec::new();
        for place in 1..built.field.degree() {
            arch.push(built.galois.archimedean_class(place)?);
        }
        Some(fine_ideal_check(&theta, &finite_gens, &arch))
    } else {
        None
    };
    report.theta = Some(theta_report(&theta));
    report.tower = Some(TowerReport {
        observed_exponent: cert.observed_exponent,
        guaranteed_exponent: cert.guaranteed_exponent,
        bound_holds: cert.bound_holds,
        observed_doubled_exponent: cert.observed_doubled_exponent,
        doubled_bound_holds: cert.doubled_bound_holds,
        fine_ideal_membership: fine,
    });
    report.checks.push(CheckReport {
        name: "tower-bound".into(),
        pass: cert.bound_holds && cert.doubled_bound_holds,
        detail: format!(
            "membership to exponent {} (guaranteed {}), doubled to {}",
            cert.observed_exponent, cert.guaranteed_exponent, cert.observed_doubled_exponent
        ),
    });
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    Ok(report)
}

pub fn cmd_gross_stark(
    built: &BuiltFixture,
    precision_override: Option<usize>,
) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = base_report(built, "gross-stark");
    let Some(base_ctx) = &built.local else {
        return Err(CoreError::fixture("fixture has no local section"));
    };
    let ctx = match precision_override {
        None => None,
        Some(m) => Some(PadicContext::new(
            &built.field,
            base_ctx.prime.clone(),
            base_ctx.uniformizer.clone(),
            m,
        )?),
    };
    let ctx = ctx.as_ref().unwrap_or(base_ctx);
    report
        .inputs
        .insert("precision".into(), ctx.precision.to_string());
    report.inputs.insert("p".into(), ctx.p.to_string());

    let theta = stickelberger(
        &built.field,
        &built.galois,
        &built.datum,
        0,
        DesignatedPrime::default(),
    )?;
    let unit = gross_stark_unit(&built.field, &built.galois, &built.datum, ctx)?;
    let measure = boundary_measure(&built.field, &built.galois, &built.datum, ctx, 1)?;

    let ord_check = check_ord_matches_zeta(&unit, &theta);
    let sphere_check = check_unit_sphere_mass(&measure, ctx.p, &built.galois.group);
    // refinement of the level-1 measure by level 2
    let fine_measure = boundary_measure(&built.field, &built.galois, &built.datum, ctx, 2)?;
    let refine_pass = fine_measure.refines(&measure, ctx.p);
    report.checks.push(CheckReport {
        name: ord_check.name.clone(),
        pass: ord_check.pass,
        detail: ord_check.detail.clone(),
    });
    report.checks.push(CheckReport {
        name: sphere_check.name.clone(),
        pass: sphere_check.pass,
        detail: sphere_check.detail.clone(),
    });
    report.checks.push(CheckReport {
        name: "measure-refinement".into(),
        pass: refine_pass,
        detail: "level-2 measure pushes forward to level 1".into(),
    });

    report.theta = Some(theta_report(&theta));
    report.unit = Some(unit_report(&unit));
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    if report.checks.iter().any(|c| !c.pass) {
        return Err(CoreError::internal("local consistency suite failed"));
    }
    Ok(report)
}

pub fn unit_report(unit: &GrossStarkUnit) -> UnitReport {
    UnitReport {
        p: unit.p,
        precision: unit.precision,
        components: unit
            .components
            .iter()
            .map(|(g, c)| UnitComponentReport {
                class: g.clone(),
                valuation: c.valuation.to_string(),
                unit_part: c.unit_part.to_string(),
            })
            .collect(),
    }
}

pub fn cmd_verify_domain(built: &BuiltFixture) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = base_report(built, "verify-domain");
    let v = verify_domain(
        &built.field,
        &built.datum.domain,
        built.verify.samples,
        built.verify.unit_bound,
        built.verify.seed,
    )?;
    report.domain = Some(DomainReport {
        pass: v.pass,
        samples: v.samples,
        witness: v
            .witness
            .as_ref()
            .map(|w| w.coords.iter().map(format_qq).collect()),
    });
    report.checks.push(CheckReport {
        name: "domain-partition".into(),
        pass: v.pass,
        detail: format!("{} samples each covered exactly once", v.samples),
    });
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    Ok(report)
}

/// Cross-check tables from the classical one-dimensional zeta oracle, plus
/// low-degree Bernoulli polynomials.
pub fn cmd_oracle(built: &BuiltFixture, k: i64) -> Result<Report, CoreError> {
    let start = Instant::now();
    let mut report = base_report(built, "oracle");
    report.inputs.insert("k".into(), k.to_string());
    let mut table = Vec::new();
    if built.field.degree() == 1 {
        // modulus of the fixture: print zeta(k, a/f) for units a mod f
        let o = crate::lattice::IdealLattice::ring_of_integers(&built.field);
        let f_over = o
            .index_of(&built.galois.raycl.modulus.finite, &built.field)?
            .to_string()
            .parse::<i64>()
            .map_err(|_| CoreError::invalid_input("conductor too large"))?;
        let m = (-k) as usize;
        for a in 1..=f_over {
            if num_integer::gcd(a, f_over) != 1 {
                continue;
            }
            let v = hurwitz_zeta_nonpos(m, &qq_ratio(a, f_over))?;
            table.push(ClassValue {
                class: vec![a as u64],
                value: format_qq(&v),
            });
        }
    }
    for deg in 0..=4usize {
        let b = bernoulli_poly(deg);
        let coeffs: Vec<String> = b.coeffs.iter().map(format_qq).collect();
        report
            .inputs
            .insert(format!("bernoulli_{}", deg), coeffs.join(","));
    }
    report.oracle = Some(table);
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_millis());
    Ok(report)
}

/// All precision levels between 2 and the context's precision must be
/// mutually consistent; used by the internal suite.
pub fn precision_ladder_check(
    built: &BuiltFixture,
    max_precision: usize,
) -> Result<bool, CoreError> {
    let Some(base_ctx) = &built.local else {
        return Err(CoreError::fixture("fixture has no local section"));
    };
    let mut prev: Option<GrossStarkUnit> = None;
    for m in 2..=max_precision {
        let ctx = PadicContext::new(
            &built.field,
            base_ctx.prime.clone(),
            base_ctx.uniformizer.clone(),
            m,
        )?;
        let u = gross_stark_unit(&built.field, &built.galois, &built.datum, &ctx)?;
        if let Some(p) = &prev {
            if !check_precision_stability(p, &u).pass {
                return Ok(false);
            }
        }
        prev = Some(u);
    }
    Ok(true)
}

/// Scale a rational to an exact power, used by reports and tests.
pub fn rational_power(base: &QQ, e: usize) -> QQ {
    let mut acc = QQ::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}
