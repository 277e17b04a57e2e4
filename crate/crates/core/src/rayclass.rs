//! Ray class groups from fixture-supplied unit data, the Artin map on
//! ideals, and validation of the auxiliary-prime conditions.
//!
//! For a field of class number one the ray class group modulo `m` is the
//! cokernel of the unit group mapping into
//! `(O/m_0)^* x {signs at the infinite part}`; it is presented through a
//! Smith normal form of the relation lattice, which also yields the
//! discrete logarithm.

use crate::abelian::{AbelianGroup, GroupElem};
use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::groupring::GroupRingElement;
use crate::lattice::IdealLattice;
use crate::matrix::ZMat;
use crate::rat::{factor, QQ, ZZ};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// A modulus: integral finite part and a set of real places.
#[derive(Clone, Debug)]
pub struct Modulus {
    pub finite: IdealLattice,
    pub infinite: Vec<bool>,
}

impl Modulus {
    pub fn validate(&self, field: &FieldRef) -> Result<(), CoreError> {
        if self.infinite.len() != field.degree() {
            return Err(CoreError::fixture("modulus infinite part has wrong length"));
        }
        let o = IdealLattice::ring_of_integers(field);
        if !o.contains_lattice(&self.finite, field) {
            return Err(CoreError::fixture("modulus finite part is not integral"));
        }
        Ok(())
    }
}

/// Cokernel presentation of `Z^r` by a relation lattice, with projection.
#[derive(Clone, Debug)]
struct Presentation {
    group: AbelianGroup,
    /// SNF left transform rows for the kept diagonal entries
    proj_rows: Vec<Vec<ZZ>>,
    kept_orders: Vec<u64>,
}

impl Presentation {
    fn from_relations(rank: usize, relation_cols: Vec<Vec<ZZ>>) -> Result<Self, CoreError> {
        if rank == 0 {
            return Ok(Presentation {
                group: AbelianGroup::trivial(),
                proj_rows: vec![],
                kept_orders: vec![],
            });
        }
        let mut m = ZMat::zero(rank, relation_cols.len());
        for (j, col) in relation_cols.iter().enumerate() {
            assert_eq!(col.len(), rank);
            for i in 0..rank {
                m[(i, j)] = col[i].clone();
            }
        }
        let (d, u, _v) = m.snf_with_transforms();
        if d.len() < rank || d.iter().take(rank).any(|x| x.is_zero()) {
            return Err(CoreError::internal(
                "relation lattice is not of full rank (missing component orders)",
            ));
        }
        let mut proj_rows = Vec::new();
        let mut kept_orders = Vec::new();
        for i in 0..rank {
            let di = d[i].abs();
            if di.is_one() {
                continue;
            }
            let order: u64 = di
                .to_string()
                .parse()
                .map_err(|_| CoreError::internal("group order exceeds fixture scale"))?;
            proj_rows.push((0..rank).map(|j| u[(i, j)].clone()).collect());
            kept_orders.push(order);
        }
        Ok(Presentation {
            group: AbelianGroup::new(kept_orders.clone()),
            proj_rows,
            kept_orders,
        })
    }

    fn project(&self, x: &[ZZ]) -> GroupElem {
        self.proj_rows
            .iter()
            .zip(&self.kept_orders)
            .map(|(row, &ord)| {
                let mut acc = ZZ::zero();
                for (r, xi) in row.iter().zip(x) {
                    acc += r * xi;
                }
                let m = ZZ::from(ord);
                let red = ((acc % &m) + &m) % &m;
                red.to_string().parse::<u64>().unwrap()
            })
            .collect()
    }
}

/// The multiplicative group of the residue ring `O/m0`, with a complete
/// discrete-log table over an explicit basis.
#[derive(Debug)]
struct ResidueUnits {
    modulus: IdealLattice,
    /// the residue ring is zero (modulus is the whole order)
    trivial: bool,
    orders: Vec<u64>,
    dlog: BTreeMap<Vec<ZZ>, Vec<u64>>,
}

impl ResidueUnits {
    fn key(field: &FieldRef, modulus: &IdealLattice, x: &FieldElement) -> Vec<ZZ> {
        // canonical box representative of x + m0 in O-coordinates
        let o = IdealLattice::ring_of_integers(field);
        let xo = o.coords_of(x);
        // m0 basis in O-coordinates (integral)
        let mrows: Vec<Vec<ZZ>> = modulus
            .basis_elements(field)
            .iter()
            .map(|b| {
                o.coords_of(b)
                    .into_iter()
                    .map(|q| {
                        debug_assert!(q.denom().is_one());
                        q.numer().clone()
                    })
                    .collect()
            })
            .collect();
        let h = ZMat::from_rows(mrows).hnf_basis();
        let mut c: Vec<QQ> = xo;
        // reduce against pivots in increasing order; echelon rows below
        // have leading zeros so earlier pivot coordinates stay reduced
        for i in 0..h.rows {
            let p = (0..h.cols).find(|&j| !h[(i, j)].is_zero()).unwrap();
            let q = (c[p].clone() / QQ::from_integer(h[(i, p)].clone())).floor();
            if !q.is_zero() {
                for j in 0..h.cols {
                    let sub = &q * QQ::from_integer(h[(i, j)].clone());
                    c[j] -= sub;
                }
            }
        }
        c.into_iter()
            .map(|q| {
                debug_assert!(q.denom().is_one(), "non-integral residue key");
                q.numer().clone()
            })
            .collect()
    }

    fn build(field: &FieldRef, modulus: &IdealLattice) -> Result<Self, CoreError> {
        let o = IdealLattice::ring_of_integers(field);
        if o.index_of(modulus, field)?.is_one() {
            return Ok(ResidueUnits {
                modulus: modulus.clone(),
                trivial: true,
                orders: vec![],
                dlog: BTreeMap::new(),
            });
        }
        let reps = IdealLattice::coset_representatives(&o, modulus, field)?;
        // unit residues
        let mut units: Vec<FieldElement> = Vec::new();
        for r in reps {
            let ideal_sum = IdealLattice::principal(field, &r)
                .ok()
                .map(|p| p.sum(modulus, field));
            let coprime = match ideal_sum {
                Some(s) => s == o,
                None => false, // r = 0
            };
            if coprime {
                units.push(r);
            }
        }
        let count = units.len() as u64;
        let keyed: BTreeMap<Vec<ZZ>, usize> = units
            .iter()
            .enumerate()
            .map(|(i, u)| (Self::key(field, modulus, u), i))
            .collect();
        if keyed.len() != units.len() {
            return Err(CoreError::internal("duplicate residue keys"));
        }
        let mul = |a: &FieldElement, b: &FieldElement| -> usize {
            let p = field.mul(a, b);
            keyed[&Self::key(field, modulus, &p)]
        };
        let one_idx = keyed[&Self::key(field, modulus, &field.one())];

        // greedy basis: repeatedly adjoin an element of maximal order in
        // the quotient by the current span, adjusted to intersect the span
        // trivially
        let mut basis: Vec<usize> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        // span: element index -> exponent vector over basis
        let mut span: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        span.insert(one_idx, vec![]);
        while (span.len() as u64) < count {
            // order of image in the quotient: least k with g^k in span
            let quotient_order = |g: usize| -> u64 {
                let mut k = 1u64;
                let mut cur = g;
                while !span.contains_key(&cur) {
                    cur = mul(&units[cur], &units[g]);
                    k += 1;
                }
                k
            };
            let (best, qord) = (0..units.len())
                .map(|g| (g, quotient_order(g)))
                .max_by_key(|&(_, q)| q)
                .unwrap();
            // adjust by a span element so the order drops to the quotient
            // order, making the new cyclic factor a direct complement
            let mut chosen: Option<usize> = None;
            for (&h, _) in &span {
                let cand = mul(&units[best], &units[h]);
                // order of cand
                let mut k = 1u64;
                let mut cur = cand;
                while cur != one_idx {
                    cur = mul(&units[cur], &units[cand]);
                    k += 1;
                }
                if k == qord {
                    chosen = Some(cand);
                    break;
                }
            }
            let g = chosen.ok_or_else(|| {
                CoreError::internal("residue unit group: no clean complement generator")
            })?;
            basis.push(g);
            orders.push(qord);
            // rebuild span with exponent tags
            let mut new_span: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
            let old_span: Vec<(usize, Vec<u64>)> =
                span.iter().map(|(&i, v)| (i, v.clone())).collect();
            for (idx, tag) in old_span {
                let mut cur = idx;
                for e in 0..qord {
                    let mut tag2 = tag.clone();
                    tag2.push(e);
                    if new_span.insert(cur, tag2).is_some() {
                        return Err(CoreError::internal(
                            "residue unit group: basis is not independent",
                        ));
                    }
                    if e + 1 < qord {
                        cur = mul(&units[cur], &units[g]);
                    }
                }
            }
            span = new_span;
        }
        let dlog: BTreeMap<Vec<ZZ>, Vec<u64>> = span
            .into_iter()
            .map(|(idx, tag)| (Self::key(field, modulus, &units[idx]), tag))
            .collect();
        Ok(ResidueUnits {
            modulus: modulus.clone(),
            trivial: false,
            orders,
            dlog,
        })
    }

    fn rank(&self) -> usize {
        self.orders.len()
    }

    fn dlog_of(&self, field: &FieldRef, x: &FieldElement) -> Result<Vec<u64>, CoreError> {
        if self.trivial {
            if x.is_zero() {
                return Err(CoreError::invalid_input("zero element has no residue class"));
            }
            return Ok(vec![]);
        }
        self.dlog
            .get(&Self::key(field, &self.modulus, x))
            .cloned()
            .ok_or_else(|| {
                CoreError::invalid_input("element is not a unit in the residue ring")
            })
    }
}

/// Ray class group with discrete logarithm, plus an optional declared
/// quotient (the Galois group of a subfield of the ray class field).
#[derive(Debug)]
pub struct RayClassGroup {
    pub field: FieldRef,
    pub modulus: Modulus,
    pub group: AbelianGroup,
    residues: ResidueUnits,
    pres: Presentation,
}

impl RayClassGroup {
    /// Build the ray class group. `fundamental_units` must generate the
    /// unit group modulo torsion; `-1` is adjoined automatically. Requires
    /// trivial class group (every ideal principal), which covers the
    /// bundled fixtures; the narrow reps machinery downstream is generic.
    pub fn new(
        field: &FieldRef,
        modulus: Modulus,
        fundamental_units: &[FieldElement],
    ) -> Result<Self, CoreError> {
        modulus.validate(field)?;
        for u in fundamental_units {
            let n = field.norm(u);
            if n != QQ::one() && n != -QQ::one() {
                return Err(CoreError::fixture("fundamental unit does not have norm ±1"));
            }
        }
        let residues = ResidueUnits::build(field, &modulus.finite)?;
        let sign_places: Vec<usize> = modulus
            .infinite
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect();
        let rank = residues.rank() + sign_places.len();

        // relation columns: component orders, then the images of the units
        let mut cols: Vec<Vec<ZZ>> = Vec::new();
        for (i, &ord) in residues.orders.iter().enumerate() {
            let mut c = vec![ZZ::zero(); rank];
            c[i] = ZZ::from(ord);
            cols.push(c);
        }
        for (j, _) in sign_places.iter().enumerate() {
            let mut c = vec![ZZ::zero(); rank];
            c[residues.rank() + j] = ZZ::from(2);
            cols.push(c);
        }
        let mut all_units: Vec<FieldElement> = vec![field.rational(-QQ::one())];
        all_units.extend_from_slice(fundamental_units);
        for u in &all_units {
            cols.push(unit_image(field, &residues, &sign_places, u)?);
        }
        let pres = Presentation::from_relations(rank, cols)?;
        Ok(RayClassGroup {
            field: field.clone(),
            modulus,
            group: pres.group.clone(),
            residues,
            pres,
        })
    }

    fn sign_places(&self) -> Vec<usize> {
        self.modulus
            .infinite
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    /// Class of the principal ideal generated by `x` (any nonzero element
    /// whose ideal is coprime to the modulus).
    pub fn class_of_element(&self, x: &FieldElement) -> Result<GroupElem, CoreError> {
        let v = unit_image(&self.field, &self.residues, &self.sign_places(), x)?;
        Ok(self.pres.project(&v))
    }

    /// Artin image of an ideal coprime to the modulus.
    pub fn artin_image(&self, ideal: &IdealLattice) -> Result<GroupElem, CoreError> {
        if !ideal.is_coprime_to(&self.modulus.finite, &self.field) {
            return Err(CoreError::invalid_input(
                "artin image: ideal is not coprime to the modulus",
            ));
        }
        let gen = find_generator(&self.field, ideal)?;
        self.class_of_element(&gen)
    }

    /// The class of complex conjugation at a real place in the modulus:
    /// the image of the sign vector `-1` at that place.
    pub fn archimedean_class(&self, place: usize) -> Result<GroupElem, CoreError> {
        let places = self.sign_places();
        let Some(pos) = places.iter().position(|&p| p == place) else {
            // place not in the modulus: the extension splits there
            return Ok(self.group.identity());
        };
        let mut v = vec![ZZ::zero(); self.residues.rank() + places.len()];
        v[self.residues.rank() + pos] = ZZ::one();
        Ok(self.pres.project(&v))
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }
}

fn unit_image(
    field: &FieldRef,
    residues: &ResidueUnits,
    sign_places: &[usize],
    u: &FieldElement,
) -> Result<Vec<ZZ>, CoreError> {
    let mut v: Vec<ZZ> = residues
        .dlog_of(field, u)?
        .into_iter()
        .map(ZZ::from)
        .collect();
    for &p in sign_places {
        let s = field.embedding_sign(u, p);
        if s == 0 {
            return Err(CoreError::invalid_input("zero element has no sign image"));
        }
        v.push(if s < 0 { ZZ::one() } else { ZZ::zero() });
    }
    Ok(v)
}

/// Search for a generator of a principal ideal by enumerating short
/// coordinate combinations of its basis.
pub fn find_generator(
    field: &FieldRef,
    ideal: &IdealLattice,
) -> Result<FieldElement, CoreError> {
    let n = field.degree();
    let basis = ideal.basis_elements(field);
    let target = ideal.norm(field).abs();
    for bound in 1i64..=24 {
        let mut counter = vec![-bound; n];
        loop {
            // only the shell with max |c_i| = bound is new
            if counter.iter().any(|&c| c.abs() == bound) {
                let mut x = field.zero_elem();
                for (c, b) in counter.iter().zip(&basis) {
                    if *c != 0 {
                        x = field.add(&x, &field.scale(b, &crate::rat::qq(*c)));
                    }
                }
                if !x.is_zero() && field.norm(&x).abs() == target {
                    if IdealLattice::principal(field, &x)? == *ideal {
                        return Ok(x);
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                counter[i] += 1;
                if counter[i] <= bound {
                    break;
                }
                counter[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Err(CoreError::invalid_input(
        "no short generator found; is the ideal principal?",
    ))
}

/// A declared quotient `G = G~/H0`, with the projection.
#[derive(Debug)]
pub struct QuotientMap {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pres: Presentation,
}

impl QuotientMap {
    pub fn new(source: &AbelianGroup, subgroup_gens: &[GroupElem]) -> Result<Self, CoreError> {
        let rank = source.rank();
        let mut cols: Vec<Vec<ZZ>> = Vec::new();
        for (i, &d) in source.factors.iter().enumerate() {
            let mut c = vec![ZZ::zero(); rank];
            c[i] = ZZ::from(d);
            cols.push(c);
        }
        for g in subgroup_gens {
            cols.push(g.iter().map(|&x| ZZ::from(x)).collect());
        }
        let pres = Presentation::from_relations(rank, cols)?;
        Ok(QuotientMap { source: source.clone(), target: pres.group.clone(), pres })
    }

    pub fn project(&self, g: &GroupElem) -> GroupElem {
        let v: Vec<ZZ> = g.iter().map(|&x| ZZ::from(x)).collect();
        self.pres.project(&v)
    }

    /// Push a group-ring element through the projection.
    pub fn project_ring(&self, x: &GroupRingElement) -> GroupRingElement {
        x.map_group(&self.target, |g| self.project(g))
    }
}

/// The Artin data the zeta pipeline runs against: a ray class group plus
/// an optional declared quotient (the Galois group of a subfield of the
/// ray class field).
#[derive(Debug)]
pub struct GaloisCtx {
    pub raycl: RayClassGroup,
    pub quotient: Option<QuotientMap>,
    pub group: AbelianGroup,
}

impl GaloisCtx {
    pub fn full(raycl: RayClassGroup) -> Self {
        let group = raycl.group.clone();
        GaloisCtx { raycl, quotient: None, group }
    }

    pub fn quotient_by(raycl: RayClassGroup, subgroup_gens: &[GroupElem]) -> Result<Self, CoreError> {
        let q = QuotientMap::new(&raycl.group, subgroup_gens)?;
        let group = q.target.clone();
        Ok(GaloisCtx { raycl, quotient: Some(q), group })
    }

    fn down(&self, g: GroupElem) -> GroupElem {
        match &self.quotient {
            None => g,
            Some(q) => q.project(&g),
        }
    }

    pub fn class_of_element(&self, x: &FieldElement) -> Result<GroupElem, CoreError> {
        Ok(self.down(self.raycl.class_of_element(x)?))
    }

    pub fn artin_image(&self, ideal: &IdealLattice) -> Result<GroupElem, CoreError> {
        Ok(self.down(self.raycl.artin_image(ideal)?))
    }

    pub fn archimedean_class(&self, place: usize) -> Result<GroupElem, CoreError> {
        Ok(self.down(self.raycl.archimedean_class(place)?))
    }
}

/// The rational prime below a prime ideal (from its prime-power norm).
pub fn rational_prime_below(field: &FieldRef, p: &IdealLattice) -> Result<ZZ, CoreError> {
    let n = p.norm(field);
    if !n.denom().is_one() {
        return Err(CoreError::invalid_input("fractional ideal has no prime below"));
    }
    let f = factor(n.numer());
    if f.len() != 1 {
        return Err(CoreError::invalid_input(
            "ideal norm is not a prime power; not a prime ideal",
        ));
    }
    Ok(f[0].0.clone())
}

/// Report-valued validation of the auxiliary-prime conditions on `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TValidation {
    Ok,
    /// some member is not of prime norm, or two members share the prime below
    NotDegreeOnePrime(String),
    /// the primes below T meet the primes below S
    MeetsRamified(String),
    /// negative argument with fewer than two members
    TooSmallForNegative,
    /// single member of norm below the degree bound at argument zero
    NormTooSmallAtZero(String),
}

pub fn validate_t(
    field: &FieldRef,
    s_primes: &[IdealLattice],
    t_primes: &[IdealLattice],
    k: i64,
) -> Result<TValidation, CoreError> {
    let mut below = Vec::new();
    for t in t_primes {
        let n = t.norm(field);
        if !n.denom().is_one() || !crate::rat::is_prime(n.numer()) {
            return Ok(TValidation::NotDegreeOnePrime(format!(
                "auxiliary prime of norm {} (norm must be a rational prime)",
                n
            )));
        }
        below.push(n.numer().clone());
    }
    let mut sorted = below.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != below.len() {
        return Ok(TValidation::NotDegreeOnePrime(
            "two auxiliary primes lie over the same rational prime".into(),
        ));
    }
    for s in s_primes {
        let p = rational_prime_below(field, s)?;
        if below.contains(&p) {
            return Ok(TValidation::MeetsRamified(format!(
                "rational prime {} lies below both sets",
                p
            )));
        }
    }
    if k < 0 && t_primes.len() < 2 {
        return Ok(TValidation::TooSmallForNegative);
    }
    if k == 0 && t_primes.len() == 1 {
        let need = ZZ::from(field.degree() as u64 + 2);
        if below[0] < need {
            return Ok(TValidation::NormTooSmallAtZero(format!(
                "norm {} < {}",
                below[0], need
            )));
        }
    }
    Ok(TValidation::Ok)
}
