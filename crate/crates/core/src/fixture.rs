//! Versioned JSON fixture schema and its validation into live objects.
//!
//! All numbers are encoded as strings ("num" or "num/den"); nothing in a
//! fixture or report is floating point. Field elements are power-basis
//! coordinate arrays, ideals are given by module generators.

use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef, Interval, NumberField};
use crate::grossstark::PadicContext;
use crate::lattice::IdealLattice;
use crate::pairing::SmoothingDatum;
use crate::rat::{parse_qq, QQ, ZZ};
use crate::rayclass::{GaloisCtx, Modulus, RayClassGroup};
use crate::shintani::{build_shintani_domain, RationalCone, ShintaniDomain};
use crate::stickelberger::ZetaDatum;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const FIXTURE_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    /// ascending integer coefficients, monic
    pub polynomial: Vec<String>,
    pub integral_basis: Vec<Vec<String>>,
    pub root_intervals: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealSpec {
    pub gens: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusSpec {
    pub finite: IdealSpec,
    pub infinite: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeSpec {
    pub gens: Vec<Vec<String>>,
    pub strict: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerSpec {
    pub subgroup_ideal_gens: Vec<IdealSpec>,
    /// number of finite ramified places splitting completely downstairs
    pub split_finite: usize,
    /// number of archimedean places splitting completely downstairs
    pub split_archimedean: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalSpec {
    pub prime: IdealSpec,
    pub uniformizer: Vec<String>,
    pub precision: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionSpec {
    /// index into the ramified-prime list
    pub s_index: usize,
    /// ideals whose Artin classes generate the decomposition group
    pub gens: Vec<IdealSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifySpec {
    pub samples: usize,
    pub unit_bound: i64,
    pub seed: u64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec { samples: 150, unit_bound: 2, seed: 2024 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub field: FieldSpec,
    #[serde(default)]
    pub fundamental_units: Vec<Vec<String>>,
    #[serde(default)]
    pub narrow_class_reps: Vec<IdealSpec>,
    pub modulus: ModulusSpec,
    /// Artin generators of the subgroup cutting out the extension as a
    /// quotient of the ray class group (empty: the full ray class field)
    #[serde(default)]
    pub galois_quotient_ideal_gens: Vec<IdealSpec>,
    #[serde(default)]
    pub s_primes: Vec<IdealSpec>,
    pub t_primes: Vec<IdealSpec>,
    #[serde(default)]
    pub k: i64,
    #[serde(default)]
    pub shintani_domain: Option<Vec<ConeSpec>>,
    #[serde(default)]
    pub tower: Option<TowerSpec>,
    #[serde(default)]
    pub local: Option<LocalSpec>,
    #[serde(default)]
    pub decomposition_groups: Vec<DecompositionSpec>,
    #[serde(default)]
    pub verify: Option<VerifySpec>,
}

impl Fixture {
    pub fn from_path(path: &Path) -> Result<Fixture, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::fixture(format!("cannot read {}: {}", path.display(), e)))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Fixture, CoreError> {
        let f: Fixture = serde_json::from_str(text)
            .map_err(|e| CoreError::fixture(format!("schema violation: {}", e)))?;
        if f.version != FIXTURE_VERSION {
            return Err(CoreError::fixture(format!(
                "unsupported fixture version {}",
                f.version
            )));
        }
        Ok(f)
    }
}

/// Everything a command needs, validated and built.
pub struct BuiltFixture {
    pub fixture: Fixture,
    pub field: FieldRef,
    pub galois: GaloisCtx,
    pub datum: ZetaDatum,
    pub fundamental_units: Vec<FieldElement>,
    pub local: Option<PadicContext>,
    pub tower_subgroup: Option<Vec<crate::abelian::GroupElem>>,
    pub verify: VerifySpec,
}

fn parse_qq_str(s: &str) -> Result<QQ, CoreError> {
    parse_qq(s).ok_or_else(|| CoreError::fixture(format!("bad rational '{}'", s)))
}

fn parse_element(field: &FieldRef, coords: &[String]) -> Result<FieldElement, CoreError> {
    if coords.len() != field.degree() {
        return Err(CoreError::fixture(format!(
            "element has {} coordinates, expected {}",
            coords.len(),
            field.degree()
        )));
    }
    let v: Result<Vec<QQ>, CoreError> = coords.iter().map(|s| parse_qq_str(s)).collect();
    Ok(field.element_from_coords(v?))
}

fn parse_ideal(field: &FieldRef, spec: &IdealSpec) -> Result<IdealLattice, CoreError> {
    let gens: Result<Vec<FieldElement>, CoreError> =
        spec.gens.iter().map(|g| parse_element(field, g)).collect();
    IdealLattice::ideal_from_generators(field, &gens?)
}

/// Parse an ideal spec against an already built field.
pub fn parse_ideal_spec(field: &FieldRef, spec: &IdealSpec) -> Result<IdealLattice, CoreError> {
    parse_ideal(field, spec)
}

pub fn build(fixture: Fixture) -> Result<BuiltFixture, CoreError> {
    // field
    let poly: Result<Vec<ZZ>, CoreError> = fixture
        .field
        .polynomial
        .iter()
        .map(|s| {
            let q = parse_qq_str(s)?;
            if !q.denom().is_one() {
                return Err(CoreError::fixture("polynomial coefficients must be integers"));
            }
            Ok(q.numer().clone())
        })
        .collect();
    let basis: Result<Vec<Vec<QQ>>, CoreError> = fixture
        .field
        .integral_basis
        .iter()
        .map(|row| row.iter().map(|s| parse_qq_str(s)).collect())
        .collect();
    let intervals: Result<Vec<Interval>, CoreError> = fixture
        .field
        .root_intervals
        .iter()
        .map(|[lo, hi]| {
            Ok(Interval { lo: parse_qq_str(lo)?, hi: parse_qq_str(hi)? })
        })
        .collect();
    let field = NumberField::new(poly?, basis?, intervals?)?;
    let n = field.degree();

    // units: norm +-1 enforced by the ray class construction
    let units: Result<Vec<FieldElement>, CoreError> = fixture
        .fundamental_units
        .iter()
        .map(|u| parse_element(&field, u))
        .collect();
    let units = units?;

    // modulus and ray class group
    let modulus = Modulus {
        finite: parse_ideal(&field, &fixture.modulus.finite)?,
        infinite: fixture.modulus.infinite.clone(),
    };
    let raycl = RayClassGroup::new(&field, modulus, &units)?;

    // S and T primes
    let s_primes: Result<Vec<IdealLattice>, CoreError> =
        fixture.s_primes.iter().map(|s| parse_ideal(&field, s)).collect();
    let s_primes = s_primes?;
    let t_primes: Result<Vec<IdealLattice>, CoreError> =
        fixture.t_primes.iter().map(|s| parse_ideal(&field, s)).collect();
    let t_primes = t_primes?;

    // the finite part of the modulus must be supported inside S
    let o = IdealLattice::ring_of_integers(&field);
    if raycl.modulus.finite != o {
        if s_primes.is_empty() {
            return Err(CoreError::fixture(
                "modulus has a nontrivial finite part but the ramified set is empty",
            ));
        }
        let mut radical = o.clone();
        for p in &s_primes {
            radical = radical.mul_ideal(p, &field);
        }
        let mut power = o.clone();
        let mut ok = false;
        for _ in 0..64 {
            power = power.mul_ideal(&radical, &field);
            if raycl.modulus.finite.contains_lattice(&power, &field) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(CoreError::fixture(
                "the finite part of the modulus is not supported inside the ramified set",
            ));
        }
    }

    // optional declared quotient
    let galois = if fixture.galois_quotient_ideal_gens.is_empty() {
        GaloisCtx::full(raycl)
    } else {
        let mut gens = Vec::new();
        for i in &fixture.galois_quotient_ideal_gens {
            let ideal = parse_ideal(&field, i)?;
            gens.push(raycl.artin_image(&ideal)?);
        }
        GaloisCtx::quotient_by(raycl, &gens)?
    };

    // narrow class representatives, validated against the narrow group
    let reps: Vec<IdealLattice> = if fixture.narrow_class_reps.is_empty() {
        vec![o.clone()]
    } else {
        fixture
            .narrow_class_reps
            .iter()
            .map(|s| parse_ideal(&field, s))
            .collect::<Result<_, _>>()?
    };
    validate_narrow_reps(&field, &units, &reps)?;
    for rep in &reps {
        for p in s_primes.iter().chain(t_primes.iter()) {
            if !rep.is_coprime_to(p, &field) {
                return Err(CoreError::fixture(
                    "class representative is not coprime to the auxiliary primes",
                ));
            }
        }
    }

    // Shintani domain
    let domain = match &fixture.shintani_domain {
        Some(cones) => {
            let mut cs = Vec::new();
            for c in cones {
                let gens: Result<Vec<FieldElement>, CoreError> =
                    c.gens.iter().map(|g| parse_element(&field, g)).collect();
                let gens = gens?;
                if c.strict.len() != gens.len() {
                    return Err(CoreError::fixture("cone strictness mask has wrong length"));
                }
                cs.push(RationalCone::with_strict(gens, c.strict.clone()));
            }
            ShintaniDomain { cones: cs, units: totally_positive_units(&field, &units)? }
        }
        None => {
            let tp = totally_positive_units(&field, &units)?;
            build_shintani_domain(&field, &tp)?
        }
    };

    let smoothings: Result<Vec<SmoothingDatum>, CoreError> = t_primes
        .iter()
        .map(|p| SmoothingDatum::new(&field, p.clone()))
        .collect();

    let datum = ZetaDatum {
        reps,
        domain,
        smoothings: smoothings?,
        s_primes,
    };

    // local context
    let local = match &fixture.local {
        None => None,
        Some(l) => {
            let prime = parse_ideal(&field, &l.prime)?;
            let pi = parse_element(&field, &l.uniformizer)?;
            Some(PadicContext::new(&field, prime, pi, l.precision)?)
        }
    };

    // tower subgroup
    let tower_subgroup = match &fixture.tower {
        None => None,
        Some(t) => {
            let mut gens = Vec::new();
            for i in &t.subgroup_ideal_gens {
                let ideal = parse_ideal(&field, i)?;
                gens.push(galois.artin_image(&ideal)?);
            }
            Some(gens)
        }
    };

    if n > 2 && fixture.shintani_domain.is_none() {
        return Err(CoreError::fixture(
            "degree >= 3 fixtures must supply an explicit fundamental domain",
        ));
    }

    Ok(BuiltFixture {
        verify: fixture.verify.clone().unwrap_or_default(),
        fixture,
        field,
        galois,
        datum,
        fundamental_units: units,
        local,
        tower_subgroup,
    })
}

/// Generators of the totally positive unit group modulo torsion derived
/// from the fundamental units.
pub fn totally_positive_units(
    field: &FieldRef,
    fundamental: &[FieldElement],
) -> Result<Vec<FieldElement>, CoreError> {
    let mut out = Vec::new();
    for u in fundamental {
        let n = field.norm(u);
        let candidate = if n == -QQ::one() {
            field.mul(u, u)
        } else if n == QQ::one() {
            if field.is_totally_positive(u) {
                u.clone()
            } else {
                let neg = field.neg(u);
                if field.is_totally_positive(&neg) {
                    neg
                } else {
                    // mixed signs with norm one cannot happen in degree 2,
                    // and higher degrees supply domains explicitly
                    field.mul(u, u)
                }
            }
        } else {
            return Err(CoreError::fixture("unit of norm other than ±1"));
        };
        if !field.is_totally_positive(&candidate) {
            return Err(CoreError::fixture("failed to normalize unit to totally positive"));
        }
        out.push(candidate);
    }
    Ok(out)
}

/// The representatives must hit every narrow class exactly once.
fn validate_narrow_reps(
    field: &FieldRef,
    units: &[FieldElement],
    reps: &[IdealLattice],
) -> Result<(), CoreError> {
    let o = IdealLattice::ring_of_integers(field);
    let narrow = RayClassGroup::new(
        field,
        Modulus { finite: o, infinite: vec![true; field.degree()] },
        units,
    )?;
    if narrow.order() != reps.len() as u64 {
        return Err(CoreError::fixture(format!(
            "{} narrow classes but {} representatives",
            narrow.order(),
            reps.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for r in reps {
        let c = if *r == IdealLattice::ring_of_integers(field) {
            narrow.group.identity()
        } else {
            narrow.artin_image(r)?
        };
        if !seen.insert(c) {
            return Err(CoreError::fixture("two representatives share a narrow class"));
        }
    }
    Ok(())
}
