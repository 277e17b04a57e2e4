//! Sparse group rings of finite abelian groups, augmentation machinery and
//! exact membership in powers of relative augmentation ideals.

use crate::abelian::{AbelianGroup, GroupElem};
use crate::matrix::ZMat;
use crate::rat::{is_integral, QQ, ZZ};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// An element of `Q[G]` with sparse coefficients. Integrality is checked
/// where contracts require it rather than encoded in the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    pub group: AbelianGroup,
    pub coeffs: BTreeMap<GroupElem, QQ>,
}

impl GroupRingElement {
    pub fn zero(group: &AbelianGroup) -> Self {
        GroupRingElement { group: group.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(group: &AbelianGroup) -> Self {
        Self::from_elem(group, group.identity())
    }

    pub fn from_elem(group: &AbelianGroup, g: GroupElem) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(g, QQ::one());
        GroupRingElement { group: group.clone(), coeffs }
    }

    pub fn from_rational(group: &AbelianGroup, q: QQ) -> Self {
        let mut e = Self::zero(group);
        e.add_term(group.identity(), q);
        e
    }

    pub fn coeff(&self, g: &GroupElem) -> QQ {
        self.coeffs.get(g).cloned().unwrap_or_else(QQ::zero)
    }

    pub fn add_term(&mut self, g: GroupElem, q: QQ) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(g) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group);
        let mut out = self.clone();
        for (g, q) in &rhs.coeffs {
            out.add_term(g.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|(g, q)| (g.clone(), -q)).collect(),
        }
    }

    pub fn scale(&self, q: &QQ) -> Self {
        if q.is_zero() {
            return Self::zero(&self.group);
        }
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|(g, c)| (g.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group);
        let mut out = Self::zero(&self.group);
        for (g, a) in &self.coeffs {
            for (h, b) in &rhs.coeffs {
                out.add_term(self.group.add(g, h), a * b);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of coefficients; a ring homomorphism to `Q`.
    pub fn augmentation(&self) -> QQ {
        let mut s = QQ::zero();
        for q in self.coeffs.values() {
            s += q;
        }
        s
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(is_integral)
    }

    /// Push forward along a group homomorphism given elementwise.
    pub fn map_group<F>(&self, target: &AbelianGroup, f: F) -> GroupRingElement
    where
        F: Fn(&GroupElem) -> GroupElem,
    {
        let mut out = GroupRingElement::zero(target);
        for (g, q) in &self.coeffs {
            out.add_term(f(g), q.clone());
        }
        out
    }

    /// Dense coefficient vector over `order` in the fixed element ordering.
    pub fn to_dense(&self, ordering: &[GroupElem]) -> Vec<QQ> {
        ordering.iter().map(|g| self.coeff(g)).collect()
    }

    /// Multiplicative inverse in `Q[G]` when the multiplication-by-self
    /// matrix is invertible.
    pub fn invert(&self) -> Option<GroupRingElement> {
        let elems = self.group.elements();
        let n = elems.len();
        let idx: BTreeMap<&GroupElem, usize> =
            elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        // column j = coefficients of self * [g_j]
        let mut mat = vec![vec![QQ::zero(); n]; n];
        for (j, gj) in elems.iter().enumerate() {
            for (g, a) in &self.coeffs {
                let target = self.group.add(g, gj);
                mat[idx[&target]][j] += a;
            }
        }
        let e: Vec<QQ> = (0..n)
            .map(|i| if elems[i] == self.group.identity() { QQ::one() } else { QQ::zero() })
            .collect();
        let x = crate::matrix::q_solve(&mat, &e)?;
        let mut out = GroupRingElement::zero(&self.group);
        for (g, q) in elems.into_iter().zip(x) {
            out.add_term(g, q);
        }
        Some(out)
    }
}

/// Membership certificate: integer coordinates over the generating set
/// `[g] * prod_k gens[k][j_k]` in the deterministic enumeration order.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub coordinates: Vec<(usize, ZZ)>,
}

/// Exact membership of `x` (integral coefficients) in the product ideal
/// `J_1 * J_2 * ... * J_m` of `Z[G]`, where `J_k` is generated as an ideal
/// by the group-ring elements `factor_gens[k]`.
///
/// The product ideal is spanned over `Z` by `[g] * prod_k t_k` with `g` in
/// `G` and `t_k` among the generators of `J_k`; membership is decided by an
/// integer-lattice normal form.
pub fn product_ideal_membership(
    x: &GroupRingElement,
    factor_gens: &[Vec<GroupRingElement>],
) -> Option<MembershipCertificate> {
    assert!(x.is_integral(), "product_ideal_membership needs integer input");
    let group = &x.group;
    let elems = group.elements();
    if factor_gens.is_empty() {
        // the empty product is the unit ideal
        return Some(MembershipCertificate { coordinates: vec![] });
    }

    // all products of one generator per factor
    let mut prods: Vec<GroupRingElement> = vec![GroupRingElement::one(group)];
    for gens in factor_gens {
        let mut next = Vec::with_capacity(prods.len() * gens.len());
        for p in &prods {
            for t in gens {
                next.push(p.mul(t));
            }
        }
        prods = next;
        if prods.is_empty() {
            break;
        }
    }

    let mut rows: Vec<Vec<ZZ>> = Vec::new();
    for p in &prods {
        for g in &elems {
            let shifted = p.mul(&GroupRingElement::from_elem(group, g.clone()));
            let dense: Vec<ZZ> = shifted
                .to_dense(&elems)
                .into_iter()
                .map(|q| {
                    debug_assert!(is_integral(&q));
                    q.numer().clone()
                })
                .collect();
            rows.push(dense);
        }
    }
    if rows.is_empty() {
        return if x.is_zero() {
            Some(MembershipCertificate { coordinates: vec![] })
        } else {
            None
        };
    }

    let a = ZMat::from_rows(rows);
    let (h, u) = a.hnf_with_transform();
    let basis_rows: Vec<usize> = (0..h.rows).filter(|&i| !h.is_zero_row(i)).collect();
    let basis = if basis_rows.is_empty() {
        return if x.is_zero() {
            Some(MembershipCertificate { coordinates: vec![] })
        } else {
            None
        };
    } else {
        ZMat::from_rows(basis_rows.iter().map(|&i| h.row(i).to_vec()).collect())
    };

    let target: Vec<ZZ> = x
        .to_dense(&elems)
        .into_iter()
        .map(|q| q.numer().clone())
        .collect();
    let sol = basis.solve_echelon(&target)?;

    // express in terms of the original generators through the transform
    let mut coords: BTreeMap<usize, ZZ> = BTreeMap::new();
    for (k, &row_idx) in basis_rows.iter().enumerate() {
        if sol[k].is_zero() {
            continue;
        }
        for orig in 0..a.rows {
            let c = &sol[k] * &u[(row_idx, orig)];
            if !c.is_zero() {
                *coords.entry(orig).or_insert_with(ZZ::zero) += c;
            }
        }
    }
    coords.retain(|_, v| !v.is_zero());
    Some(MembershipCertificate { coordinates: coords.into_iter().collect() })
}

/// Membership of `x` in `I^m` where `I` is the kernel of
/// `Z[G] -> Z[G/H]` and `H` is given by generators. `I` is generated as an
/// ideal by `[h] - 1` over the generators of `H`.
pub fn ideal_power_membership(
    x: &GroupRingElement,
    subgroup_gens: &[GroupElem],
    m: usize,
) -> Option<MembershipCertificate> {
    let group = &x.group;
    let gens: Vec<GroupRingElement> = subgroup_gens
        .iter()
        .map(|h| {
            GroupRingElement::from_elem(group, h.clone()).sub(&GroupRingElement::one(group))
        })
        .collect();
    if gens.is_empty() {
        // H trivial: I = 0, so I^m = 0 for m >= 1
        if m == 0 || x.is_zero() {
            return Some(MembershipCertificate { coordinates: vec![] });
        }
        return None;
    }
    let factors: Vec<Vec<GroupRingElement>> = (0..m).map(|_| gens.clone()).collect();
    product_ideal_membership(x, &factors)
}
