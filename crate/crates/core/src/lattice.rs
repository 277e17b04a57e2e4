//! Full-rank lattices in a number field: Hermite-canonical bases, ideal
//! arithmetic, coset representatives, residue maps at degree-one primes and
//! exact enumeration of lattice points in half-open parallelepipeds.

use crate::error::CoreError;
use crate::field::{FieldElement, FieldRef};
use crate::matrix::{q_solve, ZMat};
use crate::rat::{lcm_zz, QQ, ZZ};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A full-rank `Z`-lattice in `F`, stored as `(1/den) * rowspan(mat)` with
/// `mat` an integer matrix in row Hermite normal form and the pair reduced
/// so that `gcd(den, content(mat)) = 1`. Rows are power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    pub den: ZZ,
    pub mat: ZMat,
}

impl IdealLattice {
    /// Lattice spanned by the rows (must be full rank).
    pub fn from_elements(field: &FieldRef, gens: &[FieldElement]) -> Result<Self, CoreError> {
        let n = field.degree();
        if gens.is_empty() {
            return Err(CoreError::invalid_input("empty generating set for lattice"));
        }
        let mut den = ZZ::one();
        for g in gens {
            for c in &g.coords {
                den = lcm_zz(&den, c.denom());
            }
        }
        let rows: Vec<Vec<ZZ>> = gens
            .iter()
            .map(|g| {
                g.coords
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        let h = ZMat::from_rows(rows).hnf_basis();
        if h.rows != n {
            return Err(CoreError::invalid_input(
                "generators do not span a full-rank lattice",
            ));
        }
        Ok(Self::reduced(den, h))
    }

    fn reduced(den: ZZ, mat: ZMat) -> Self {
        let mut g = den.clone();
        'outer: for i in 0..mat.rows {
            for j in 0..mat.cols {
                g = g.gcd(&mat[(i, j)]);
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        if g.is_one() {
            return IdealLattice { den, mat };
        }
        let mut m = ZMat::zero(mat.rows, mat.cols);
        for i in 0..mat.rows {
            for j in 0..mat.cols {
                m[(i, j)] = &mat[(i, j)] / &g;
            }
        }
        IdealLattice { den: den / g, mat: m }
    }

    /// The maximal order as a lattice (from the field's integral basis).
    pub fn ring_of_integers(field: &FieldRef) -> Self {
        let gens: Vec<FieldElement> = field
            .integral_basis
            .iter()
            .map(|r| field.element_from_coords(r.clone()))
            .collect();
        Self::from_elements(field, &gens).expect("integral basis is full rank")
    }

    /// The `O_F`-module generated by the elements: an honest (fractional)
    /// ideal when the generators are nonzero.
    pub fn ideal_from_generators(
        field: &FieldRef,
        gens: &[FieldElement],
    ) -> Result<Self, CoreError> {
        let mut prods = Vec::new();
        for g in gens {
            for b in &field.integral_basis {
                prods.push(field.mul(g, &field.element_from_coords(b.clone())));
            }
        }
        Self::from_elements(field, &prods)
    }

    /// Principal ideal `(x)`.
    pub fn principal(field: &FieldRef, x: &FieldElement) -> Result<Self, CoreError> {
        Self::ideal_from_generators(field, std::slice::from_ref(x))
    }

    pub fn basis_elements(&self, field: &FieldRef) -> Vec<FieldElement> {
        (0..self.mat.rows)
            .map(|i| {
                field.element_from_coords(
                    self.mat
                        .row(i)
                        .iter()
                        .map(|z| QQ::new(z.clone(), self.den.clone()))
                        .collect(),
                )
            })
            .collect()
    }

    /// Rational coordinates of `x` in the lattice basis.
    pub fn coords_of(&self, x: &FieldElement) -> Vec<QQ> {
        let scaled: Vec<QQ> = x
            .coords
            .iter()
            .map(|c| c * QQ::from_integer(self.den.clone()))
            .collect();
        self.mat
            .solve_echelon_q(&scaled)
            .expect("full-rank echelon basis solves any rational vector")
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coords_of(x).iter().all(|c| c.denom().is_one())
    }

    pub fn contains_lattice(&self, other: &IdealLattice, field: &FieldRef) -> bool {
        other
            .basis_elements(field)
            .iter()
            .all(|b| self.contains(b))
    }

    /// Covolume relative to the power basis: `|det| / den^n`.
    pub fn covolume(&self) -> QQ {
        let n = self.mat.rows;
        let mut det = ZZ::one();
        for i in 0..n {
            det *= &self.mat[(i, i)];
        }
        let mut dn = ZZ::one();
        for _ in 0..n {
            dn *= &self.den;
        }
        QQ::new(det.abs(), dn)
    }

    /// Index `[self : other]` for a sublattice; errors if not contained.
    pub fn index_of(&self, other: &IdealLattice, field: &FieldRef) -> Result<ZZ, CoreError> {
        if !self.contains_lattice(other, field) {
            return Err(CoreError::invalid_input("index_of: not a sublattice"));
        }
        let ratio = other.covolume() / self.covolume();
        debug_assert!(ratio.denom().is_one());
        Ok(ratio.numer().clone())
    }

    /// Ideal norm relative to `O_F` (rational for fractional ideals).
    pub fn norm(&self, field: &FieldRef) -> QQ {
        self.covolume() / IdealLattice::ring_of_integers(field).covolume()
    }

    /// Lattice sum `self + other`.
    pub fn sum(&self, other: &IdealLattice, field: &FieldRef) -> IdealLattice {
        let mut gens = self.basis_elements(field);
        gens.extend(other.basis_elements(field));
        Self::from_elements(field, &gens).expect("sum of full-rank lattices")
    }

    /// Lattice intersection.
    pub fn intersect(&self, other: &IdealLattice, field: &FieldRef) -> IdealLattice {
        let n = self.mat.cols;
        let d = lcm_zz(&self.den, &other.den);
        let a_scale = &d / &self.den;
        let b_scale = &d / &other.den;
        // rows of [A; B] in a common 1/d scale; kernel rows (x, y) with
        // x*A = -y*B give intersection vectors x*A
        let mut rows: Vec<Vec<ZZ>> = Vec::new();
        for i in 0..n {
            rows.push(self.mat.row(i).iter().map(|z| z * &a_scale).collect());
        }
        for i in 0..n {
            rows.push(other.mat.row(i).iter().map(|z| z * &b_scale).collect());
        }
        let stacked = ZMat::from_rows(rows.clone());
        let kernel = stacked.left_kernel();
        let mut gens: Vec<FieldElement> = Vec::new();
        for k in 0..kernel.rows {
            let mut v = vec![ZZ::zero(); n];
            for c in 0..n {
                for j in 0..n {
                    let add = &kernel[(k, j)] * &rows[j][c];
                    v[c] += add;
                }
            }
            gens.push(FieldElement {
                coords: v.into_iter().map(|z| QQ::new(z, d.clone())).collect(),
            });
        }
        Self::from_elements(field, &gens).expect("intersection of full-rank lattices")
    }

    /// Ideal product (as `O`-modules generated by pairwise products).
    pub fn mul_ideal(&self, other: &IdealLattice, field: &FieldRef) -> IdealLattice {
        let mut gens = Vec::new();
        for a in self.basis_elements(field) {
            for b in other.basis_elements(field) {
                gens.push(field.mul(&a, &b));
            }
        }
        Self::from_elements(field, &gens).expect("product of full-rank lattices")
    }

    pub fn scale_by_rational(&self, q: &QQ, field: &FieldRef) -> IdealLattice {
        let gens: Vec<FieldElement> = self
            .basis_elements(field)
            .iter()
            .map(|b| field.scale(b, q))
            .collect();
        Self::from_elements(field, &gens).expect("scaled lattice")
    }

    /// Coprimality of integral ideals: `a + b = O`.
    pub fn is_coprime_to(&self, other: &IdealLattice, field: &FieldRef) -> bool {
        let o = IdealLattice::ring_of_integers(field);
        self.sum(other, field) == o
    }

    /// Representatives of `big/small`, each inside `big`.
    pub fn coset_representatives(
        big: &IdealLattice,
        small: &IdealLattice,
        field: &FieldRef,
    ) -> Result<Vec<FieldElement>, CoreError> {
        if !big.contains_lattice(small, field) {
            return Err(CoreError::invalid_input(
                "coset_representatives: second lattice is not contained in the first",
            ));
        }
        let n = big.mat.rows;
        // express small's basis in big's coordinates: integer matrix
        let small_in_big: Vec<Vec<ZZ>> = small
            .basis_elements(field)
            .iter()
            .map(|b| {
                big.coords_of(b)
                    .into_iter()
                    .map(|q| {
                        debug_assert!(q.denom().is_one());
                        q.numer().clone()
                    })
                    .collect()
            })
            .collect();
        let h = ZMat::from_rows(small_in_big).hnf_basis();
        if h.rows != n {
            return Err(CoreError::invalid_input("coset_representatives: not full rank"));
        }
        // box over the HNF diagonal
        let mut reps: Vec<Vec<ZZ>> = vec![vec![]];
        for i in 0..n {
            let d = h[(i, i)].clone();
            let mut next = Vec::new();
            for r in reps {
                let mut k = ZZ::zero();
                while &k < &d {
                    let mut r2 = r.clone();
                    r2.push(k.clone());
                    next.push(r2);
                    k += 1;
                }
            }
            reps = next;
        }
        let basis = big.basis_elements(field);
        Ok(reps
            .into_iter()
            .map(|coeffs| {
                let mut x = field.zero_elem();
                for (c, b) in coeffs.iter().zip(&basis) {
                    x = field.add(&x, &field.scale(b, &QQ::from_integer(c.clone())));
                }
                x
            })
            .collect())
    }

    /// Smallest positive integer `t` with `t*x` in the lattice.
    pub fn denominator_of(&self, x: &FieldElement) -> ZZ {
        let mut t = ZZ::one();
        for c in self.coords_of(x) {
            t = lcm_zz(&t, c.denom());
        }
        t
    }

    /// Solve `result ≡ a (mod self)` and `result ≡ b (mod other)`;
    /// the two lattices must satisfy `self + other ⊇` the difference.
    pub fn crt_translate(
        &self,
        a: &FieldElement,
        other: &IdealLattice,
        b: &FieldElement,
        field: &FieldRef,
    ) -> Result<FieldElement, CoreError> {
        let n = field.degree();
        let delta = field.sub(b, a);
        let mut d = lcm_zz(&self.den, &other.den);
        for c in &delta.coords {
            d = lcm_zz(&d, c.denom());
        }
        let mut rows: Vec<Vec<ZZ>> = Vec::new();
        let sa = &d / &self.den;
        for i in 0..n {
            rows.push(self.mat.row(i).iter().map(|z| z * &sa).collect());
        }
        let sb = &d / &other.den;
        for i in 0..n {
            rows.push(other.mat.row(i).iter().map(|z| z * &sb).collect());
        }
        let m = ZMat::from_rows(rows);
        let target: Vec<ZZ> = delta.coords.iter().map(|c| c.numer() * (&d / c.denom())).collect();
        let (x, _) = m
            .solve_left(&target)
            .ok_or_else(|| CoreError::invalid_input("crt_translate: incompatible congruences"))?;
        // u = (first half of x) * self-rows, in 1/d scale
        let mut u = vec![ZZ::zero(); n];
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            for c in 0..n {
                let add = &x[j] * &(&self.mat[(j, c)] * &sa);
                u[c] += add;
            }
        }
        let u_elem = field.element_from_coords(
            u.into_iter().map(|z| QQ::new(z, d.clone())).collect(),
        );
        Ok(field.add(a, &u_elem))
    }
}

/// Prime-ideal data at a degree-one prime: the residue map `O -> Z/l`.
#[derive(Clone, Debug)]
pub struct PrimeResidue {
    pub ell: u64,
    /// residues of the integral basis elements
    basis_residues: Vec<u64>,
    /// power-basis -> integral-basis change of coordinates
    to_integral: Vec<Vec<QQ>>,
}

impl PrimeResidue {
    /// Build the residue map for a prime ideal `q` of prime norm `ell`.
    pub fn new(field: &FieldRef, q: &IdealLattice) -> Result<Self, CoreError> {
        let o = IdealLattice::ring_of_integers(field);
        let normq = q.norm(field);
        if !normq.denom().is_one() {
            return Err(CoreError::invalid_input("prime residue: fractional ideal"));
        }
        let ell_z = normq.numer().clone();
        if !crate::rat::is_prime(&ell_z) {
            return Err(CoreError::condition(format!(
                "ideal norm {} is not a rational prime (degree-one prime required)",
                ell_z
            )));
        }
        let ell: u64 = ell_z.to_string().parse().map_err(|_| {
            CoreError::invalid_input("prime residue: norm too large for fixture scale")
        })?;
        if !o.contains_lattice(q, field) {
            return Err(CoreError::invalid_input("prime residue: ideal not integral"));
        }
        let mut basis_residues = Vec::new();
        for b in &field.integral_basis {
            let be = field.element_from_coords(b.clone());
            let mut found = None;
            for c in 0..ell {
                let diff = field.sub(&be, &field.rational(QQ::from_integer(ZZ::from(c))));
                if q.contains(&diff) {
                    found = Some(c);
                    break;
                }
            }
            basis_residues.push(found.ok_or_else(|| {
                CoreError::internal("residue map: basis element has no residue (not prime?)")
            })?);
        }
        // power-basis coords -> integral-basis coords: solve B^T a = x
        let n = field.degree();
        let bmat: Vec<Vec<QQ>> = (0..n)
            .map(|i| (0..n).map(|j| field.integral_basis[j][i].clone()).collect())
            .collect();
        Ok(PrimeResidue { ell, basis_residues, to_integral: bmat })
    }

    /// Residue of an element that is integral at the prime (its coordinates
    /// in the integral basis have denominators prime to `ell`).
    pub fn residue(&self, x: &FieldElement) -> Result<u64, CoreError> {
        let a = q_solve(&self.to_integral, &x.coords)
            .expect("integral basis is invertible");
        let l = ZZ::from(self.ell);
        let mut r = ZZ::zero();
        for (ai, &bi) in a.iter().zip(&self.basis_residues) {
            let den_mod = ai.denom().mod_floor(&l);
            if den_mod.is_zero() {
                return Err(CoreError::invalid_input(
                    "residue: element is not integral at the prime",
                ));
            }
            let den_inv = mod_inverse(&den_mod, &l).ok_or_else(|| {
                CoreError::invalid_input("residue: element is not integral at the prime")
            })?;
            let num_mod = ai.numer().mod_floor(&l);
            r += num_mod * den_inv * ZZ::from(bi);
        }
        let r = r.mod_floor(&l);
        Ok(r.to_string().parse().unwrap())
    }

    /// Valuation-zero test at the prime for elements integral at `ell`.
    pub fn is_unit_at(&self, x: &FieldElement) -> Result<bool, CoreError> {
        Ok(self.residue(x)? != 0)
    }
}

fn mod_inverse(a: &ZZ, m: &ZZ) -> Option<ZZ> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Exact set `(shift + L) ∩ P(v_1, ..., v_m)` where
/// `P = { sum t_i v_i : 0 < t_i <= 1 }`. For `m < n` the affine space of
/// solutions inside the span is solved first; generators must be linearly
/// independent.
pub fn enumerate_shifted_parallelepiped(
    field: &FieldRef,
    lattice: &IdealLattice,
    shift: &FieldElement,
    gens: &[FieldElement],
) -> Result<Vec<FieldElement>, CoreError> {
    let n = field.degree();
    let m = gens.len();
    if m == 0 || m > n {
        return Err(CoreError::invalid_input("parallelepiped needs 1..=n generators"));
    }
    // exact rank check
    let gen_rows: Vec<Vec<QQ>> = gens.iter().map(|g| g.coords.clone()).collect();
    if rational_rank(&gen_rows) != m {
        return Err(CoreError::invalid_input("parallelepiped generators are dependent"));
    }

    // affine solutions c in Z^n with shift + B^T c  in  span(gens):
    // N * (shift + B^T c) = 0 for N spanning the left annihilator of span
    let basis = lattice.basis_elements(field);
    let nullsp = span_annihilator(&gen_rows, n);
    debug_assert_eq!(nullsp.len(), n - m);

    let (particular, kernel) = if nullsp.is_empty() {
        (vec![ZZ::zero(); n], ZMat::identity(n))
    } else {
        // rows of M: for each c-coordinate j, the vector of N_k(B_j)
        let mut den = ZZ::one();
        let mut cols: Vec<Vec<QQ>> = Vec::new();
        for b in &basis {
            let col: Vec<QQ> = nullsp.iter().map(|nv| dot(nv, &b.coords)).collect();
            for q in &col {
                den = lcm_zz(&den, q.denom());
            }
            cols.push(col);
        }
        let rhs_q: Vec<QQ> = nullsp.iter().map(|nv| -dot(nv, &shift.coords)).collect();
        for q in &rhs_q {
            den = lcm_zz(&den, q.denom());
        }
        let rows: Vec<Vec<ZZ>> = cols
            .iter()
            .map(|col| col.iter().map(|q| q.numer() * (&den / q.denom())).collect())
            .collect();
        let rhs: Vec<ZZ> = rhs_q.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        match ZMat::from_rows(rows).solve_left(&rhs) {
            Some(sol) => sol,
            None => return Ok(vec![]), // affine space misses the lattice
        }
    };
    debug_assert_eq!(kernel.rows, m);

    // t-coordinates: t(k) = t0 + T k where x = shift + B^T (particular + K^T k)
    let x0 = add_combo(field, shift, &basis, &particular);
    let t0 = coords_in_span(field, &gen_rows, &x0.coords)?;
    let mut tcols: Vec<Vec<QQ>> = Vec::new();
    for r in 0..kernel.rows {
        let kr: Vec<ZZ> = (0..n).map(|c| kernel[(r, c)].clone()).collect();
        let dir = add_combo(field, &field.zero_elem(), &basis, &kr);
        tcols.push(coords_in_span(field, &gen_rows, &dir.coords)?);
    }
    // T is m x m (columns tcols); invert to bound k over t in [0,1]^m
    let tmat: Vec<Vec<QQ>> = (0..m)
        .map(|i| (0..m).map(|j| tcols[j][i].clone()).collect())
        .collect();
    // bound the outer axes by the corner box of [0,1]^m and solve the last
    // axis exactly per outer combination, which keeps the scan
    // output-sensitive even for skewed bases
    let mut kmin = vec![QQ::zero(); m];
    let mut kmax = vec![QQ::zero(); m];
    let mut first = true;
    for mask in 0..(1u32 << m) {
        let t: Vec<QQ> = (0..m)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    QQ::one()
                } else {
                    QQ::zero()
                }
            })
            .collect();
        let rhs: Vec<QQ> = (0..m).map(|i| &t[i] - &t0[i]).collect();
        let k = q_solve(&tmat, &rhs)
            .ok_or_else(|| CoreError::internal("degenerate parallelepiped coordinates"))?;
        for i in 0..m {
            if first || k[i] < kmin[i] {
                kmin[i] = k[i].clone();
            }
            if first || k[i] > kmax[i] {
                kmax[i] = k[i].clone();
            }
        }
        first = false;
    }
    let lo: Vec<ZZ> = kmin.iter().map(|q| q.ceil().to_integer()).collect();
    let hi: Vec<ZZ> = kmax.iter().map(|q| q.floor().to_integer()).collect();
    // pick the widest axis for the exact inner solve
    let inner = (0..m)
        .max_by_key(|&i| (&hi[i] - &lo[i]).max(ZZ::zero()))
        .unwrap();

    let outer: Vec<usize> = (0..m).filter(|&i| i != inner).collect();
    let mut out = Vec::new();
    let mut counter: Vec<ZZ> = outer.iter().map(|&i| lo[i].clone()).collect();
    'outer: loop {
        // t_i(k_inner) = t0_i + sum_outer T[i][o] k_o + T[i][inner] k_inner
        // constraints 0 < t_i <= 1 give an exact rational interval
        let mut feasible = true;
        let mut klo: Option<QQ> = None;
        let mut khi: Option<QQ> = None;
        for i in 0..m {
            let mut cst = t0[i].clone();
            for (pos, &o) in outer.iter().enumerate() {
                cst += &tmat[i][o] * QQ::from_integer(counter[pos].clone());
            }
            let slope = &tmat[i][inner];
            if slope.is_zero() {
                if !(cst > QQ::zero() && cst <= QQ::one()) {
                    feasible = false;
                    break;
                }
                continue;
            }
            // 0 < cst + slope*k <= 1; take the conservative closed hull of
            // the solution interval, the per-point check below is exact
            let a = (QQ::zero() - &cst) / slope;
            let b = (QQ::one() - &cst) / slope;
            let (low, high) = if a <= b { (a, b) } else { (b, a) };
            klo = Some(match klo {
                None => low.clone(),
                Some(x) => x.max(low.clone()),
            });
            khi = Some(match khi {
                None => high.clone(),
                Some(x) => x.min(high.clone()),
            });
        }
        if feasible {
            let (Some(klo), Some(khi)) = (&klo, &khi) else {
                return Err(CoreError::internal(
                    "parallelepiped inner axis has no active constraint",
                ));
            };
            let start = klo.floor().to_integer();
            let end = khi.ceil().to_integer();
            let mut kv = start;
            while kv <= end {
                let mut coeff = particular.clone();
                for (pos, &o) in outer.iter().enumerate() {
                    for c in 0..n {
                        let add = &counter[pos] * &kernel[(o, c)];
                        coeff[c] += add;
                    }
                }
                for c in 0..n {
                    let add = &kv * &kernel[(inner, c)];
                    coeff[c] += add;
                }
                let x = add_combo(field, shift, &basis, &coeff);
                let t = coords_in_span(field, &gen_rows, &x.coords)?;
                if t.iter().all(|ti| ti > &QQ::zero() && ti <= &QQ::one()) {
                    out.push(x);
                }
                kv += 1;
            }
        }
        // increment the outer counter
        let mut i = 0;
        loop {
            if i == outer.len() {
                break 'outer;
            }
            counter[i] += 1;
            if counter[i] <= hi[outer[i]] {
                break;
            }
            counter[i] = lo[outer[i]].clone();
            i += 1;
        }
    }
    // deterministic output order
    out.sort_by(|a, b| {
        for (x, y) in a.coords.iter().zip(&b.coords) {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(out)
}

/// `L ∩ P(v_1..v_m)` (unshifted).
pub fn enumerate_parallelepiped(
    field: &FieldRef,
    lattice: &IdealLattice,
    gens: &[FieldElement],
) -> Result<Vec<FieldElement>, CoreError> {
    enumerate_shifted_parallelepiped(field, lattice, &field.zero_elem(), gens)
}

fn dot(a: &[QQ], b: &[QQ]) -> QQ {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add_combo(
    field: &FieldRef,
    base: &FieldElement,
    basis: &[FieldElement],
    coeffs: &[ZZ],
) -> FieldElement {
    let mut x = base.clone();
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            x = field.add(&x, &field.scale(b, &QQ::from_integer(c.clone())));
        }
    }
    x
}

/// Coordinates of `x` (a vector known to lie in the rational row span of
/// `gen_rows`) with respect to those rows.
fn coords_in_span(
    _field: &FieldRef,
    gen_rows: &[Vec<QQ>],
    x: &[QQ],
) -> Result<Vec<QQ>, CoreError> {
    let m = gen_rows.len();
    let n = x.len();
    // pick m independent columns by elimination
    let mut a: Vec<Vec<QQ>> = gen_rows.to_vec();
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
        return Err(CoreError::invalid_input("span coordinates: dependent generators"));
    }
    let sys: Vec<Vec<QQ>> = pivot_cols
        .iter()
        .map(|&c| (0..m).map(|j| gen_rows[j][c].clone()).collect())
        .collect();
    let rhs: Vec<QQ> = pivot_cols.iter().map(|&c| x[c].clone()).collect();
    let t = q_solve(&sys, &rhs)
        .ok_or_else(|| CoreError::internal("span coordinate system is singular"))?;
    // verify the remaining coordinates (x must be in the span)
    for c in 0..n {
        let mut acc = QQ::zero();
        for j in 0..m {
            acc += &t[j] * &gen_rows[j][c];
        }
        if acc != x[c] {
            return Err(CoreError::internal(
                "coords_in_span: vector is not in the span",
            ));
        }
    }
    Ok(t)
}

fn rational_rank(rows: &[Vec<QQ>]) -> usize {
    let mut m: Vec<Vec<QQ>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &inv;
                for k in c..ncols {
                    let sub = &f * &m[rank][k];
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of linear forms vanishing on the row span.
fn span_annihilator(rows: &[Vec<QQ>], n: usize) -> Vec<Vec<QQ>> {
    // solve rows * x = 0 by rational elimination on the transpose
    let m = rows.len();
    let mut a: Vec<Vec<QQ>> = (0..m).map(|i| rows[i].clone()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].clone();
        for k in 0..n {
            a[rank][k] = &a[rank][k] / &inv;
        }
        for r in 0..m {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..n {
                    let sub = &f * &a[rank][k];
                    a[r][k] -= sub;
                }
            }
        }
        pivots.push((rank, c));
        rank += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![QQ::zero(); n];
        v[free] = QQ::one();
        for &(r, c) in &pivots {
            v[c] = -a[r][free].clone();
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Interval, NumberField};
    use crate::rat::{qq, qq_ratio, zz};

    fn qfield() -> FieldRef {
        NumberField::rationals()
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

    fn zsquared() -> (FieldRef, IdealLattice) {
        // use sqrt5's ambient Q-vector space with the standard lattice Z^2
        let f = sqrt5();
        let l = IdealLattice::from_elements(
            &f,
            &[
                f.element_from_coords(vec![qq(1), qq(0)]),
                f.element_from_coords(vec![qq(0), qq(1)]),
            ],
        )
        .unwrap();
        (f, l)
    }

    #[test]
    fn hnf_canonical_form() {
        let (f, _) = zsquared();
        let a = IdealLattice::from_elements(
            &f,
            &[
                f.element_from_coords(vec![qq(2), qq(4)]),
                f.element_from_coords(vec![qq(1), qq(1)]),
                f.element_from_coords(vec![qq(3), qq(5)]),
            ],
        )
        .unwrap();
        let b = IdealLattice::from_elements(
            &f,
            &[
                f.element_from_coords(vec![qq(1), qq(1)]),
                f.element_from_coords(vec![qq(0), qq(2)]),
            ],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallelepiped_trivial_cases() {
        let (f, l) = zsquared();
        let e1 = f.element_from_coords(vec![qq(1), qq(0)]);
        let e2 = f.element_from_coords(vec![qq(0), qq(1)]);
        // unit cell: the single point (1,1)
        let pts = enumerate_parallelepiped(&f, &l, &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(pts, vec![f.element_from_coords(vec![qq(1), qq(1)])]);
        // stretched cell (2,0),(0,1): points (1,1),(2,1)
        let two_e1 = f.scale(&e1, &qq(2));
        let pts = enumerate_parallelepiped(&f, &l, &[two_e1, e2.clone()]).unwrap();
        assert_eq!(
            pts,
            vec![
                f.element_from_coords(vec![qq(1), qq(1)]),
                f.element_from_coords(vec![qq(2), qq(1)])
            ]
        );
        // rotated cell (1,1),(-1,1): points (0,1),(0,2)
        let v1 = f.element_from_coords(vec![qq(1), qq(1)]);
        let v2 = f.element_from_coords(vec![qq(-1), qq(1)]);
        let pts = enumerate_parallelepiped(&f, &l, &[v1, v2]).unwrap();
        assert_eq!(
            pts,
            vec![
                f.element_from_coords(vec![qq(0), qq(1)]),
                f.element_from_coords(vec![qq(0), qq(2)])
            ]
        );
    }

    #[test]
    fn parallelepiped_matches_exhaustive_search() {
        // oracle: scan a bounding box of integer pairs and test the
        // coordinate inequalities directly
        let (f, l) = zsquared();
        let cases: Vec<(Vec<i64>, Vec<i64>)> = vec![
            (vec![2, 1], vec![-1, 2]),
            (vec![3, 0], vec![1, 2]),
            (vec![1, -2], vec![2, 3]),
        ];
        for (a, b) in cases {
            let v1 = f.element_from_coords(vec![qq(a[0]), qq(a[1])]);
            let v2 = f.element_from_coords(vec![qq(b[0]), qq(b[1])]);
            let got = enumerate_parallelepiped(&f, &l, &[v1.clone(), v2.clone()]).unwrap();
            let mut expected = Vec::new();
            for x in -8i64..=8 {
                for y in -8i64..=8 {
                    // solve t1 a + t2 b = (x, y)
                    let det = qq(a[0] * b[1] - a[1] * b[0]);
                    let t1 = (qq(x * b[1] - y * b[0])) / det.clone();
                    let t2 = (qq(a[0] * y - a[1] * x)) / det;
                    if t1 > qq(0) && t1 <= qq(1) && t2 > qq(0) && t2 <= qq(1) {
                        expected.push((x, y));
                    }
                }
            }
            assert_eq!(got.len(), expected.len(), "case {:?} {:?}", a, b);
            // cardinality identity: #points = |det| / covol
            let det = (a[0] * b[1] - a[1] * b[0]).abs();
            assert_eq!(got.len() as i64, det);
        }
    }

    #[test]
    fn parallelepiped_lower_dimension() {
        let (f, l) = zsquared();
        // span of (2, 2): lattice points on the diagonal
        let v = f.element_from_coords(vec![qq(2), qq(2)]);
        let pts = enumerate_parallelepiped(&f, &l, &[v.clone()]).unwrap();
        assert_eq!(
            pts,
            vec![
                f.element_from_coords(vec![qq(1), qq(1)]),
                f.element_from_coords(vec![qq(2), qq(2)])
            ]
        );
        // shifted line that misses the lattice
        let shift = f.element_from_coords(vec![qq_ratio(1, 2), qq(0)]);
        let pts = enumerate_shifted_parallelepiped(&f, &l, &shift, &[v]).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn coset_representatives_examples() {
        let f = qfield();
        let z = IdealLattice::ring_of_integers(&f);
        let z3 = z.scale_by_rational(&qq(3), &f);
        let reps = IdealLattice::coset_representatives(&z, &z3, &f).unwrap();
        assert_eq!(reps.len(), 3);

        let (f2, l2) = zsquared();
        let l22 = l2.scale_by_rational(&qq(2), &f2);
        assert_eq!(
            IdealLattice::coset_representatives(&l2, &l22, &f2).unwrap().len(),
            4
        );
    }

    #[test]
    fn prime_ideal_over_sqrt5() {
        let f = sqrt5();
        // q_11 = (4 - phi), norm 11
        let gen = f.element_from_coords(vec![qq(4), qq(-1)]);
        let q11 = IdealLattice::principal(&f, &gen).unwrap();
        assert_eq!(q11.norm(&f), qq(11));
        let o = IdealLattice::ring_of_integers(&f);
        let reps = IdealLattice::coset_representatives(&o, &q11, &f).unwrap();
        assert_eq!(reps.len(), 11);

        let res = PrimeResidue::new(&f, &q11).unwrap();
        // phi = 4 mod q11
        assert_eq!(res.residue(&f.generator()).unwrap(), 4);
        assert_eq!(res.residue(&gen).unwrap(), 0);
        // multiplicativity of the residue map
        let a = f.element_from_coords(vec![qq(2), qq(3)]);
        let b = f.element_from_coords(vec![qq(-1), qq(5)]);
        assert_eq!(
            res.residue(&f.mul(&a, &b)).unwrap(),
            (res.residue(&a).unwrap() * res.residue(&b).unwrap()) % 11
        );
    }

    #[test]
    fn translation_invariance_of_count() {
        let (f, l) = zsquared();
        let v1 = f.element_from_coords(vec![qq(2), qq(1)]);
        let v2 = f.element_from_coords(vec![qq(-1), qq(2)]);
        let base = enumerate_parallelepiped(&f, &l, &[v1.clone(), v2.clone()]).unwrap();
        for shift in [
            f.element_from_coords(vec![qq(1), qq(0)]),
            f.element_from_coords(vec![qq(-3), qq(2)]),
        ] {
            let shifted =
                enumerate_shifted_parallelepiped(&f, &l, &shift, &[v1.clone(), v2.clone()])
                    .unwrap();
            assert_eq!(shifted.len(), base.len());
        }
    }

    #[test]
    fn crt_translate_solves_congruences() {
        let f = qfield();
        let z = IdealLattice::ring_of_integers(&f);
        let a4 = z.scale_by_rational(&qq(4), &f);
        let b25 = z.scale_by_rational(&qq(25), &f);
        let x = a4
            .crt_translate(&f.rational(qq(3)), &b25, &f.rational(qq(7)), &f)
            .unwrap();
        // x = 3 mod 4, 7 mod 25
        let c = x.coords[0].clone();
        assert!(c.denom().is_one());
        let v = c.numer().clone();
        assert_eq!(v.mod_floor(&zz(4)), zz(3));
        assert_eq!(v.mod_floor(&zz(25)), zz(7));
    }

    #[test]
    fn intersection_and_index() {
        let f = qfield();
        let z = IdealLattice::ring_of_integers(&f);
        let a = z.scale_by_rational(&qq(4), &f);
        let b = z.scale_by_rational(&qq(6), &f);
        let i = a.intersect(&b, &f);
        assert_eq!(i, z.scale_by_rational(&qq(12), &f));
        assert_eq!(z.index_of(&i, &f).unwrap(), zz(12));
        assert!(a.is_coprime_to(&z.scale_by_rational(&qq(9), &f), &f));
        assert!(!a.is_coprime_to(&b, &f));
    }
}
