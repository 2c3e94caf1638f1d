//! The graded de Rham complex of the torus in the dlog frame.
//!
//! A form is a finitely supported map from characters `u` to multivectors
//! over 𝔽ₚ, written in the basis `dlog_I` indexed by subsets of a fixed
//! lattice basis. In this frame every chart restriction is the identity on
//! coordinates, the differential is grade-preserving Koszul multiplication
//! by `u mod p`, and the Frobenius-splitting operators become exponent
//! rescalings — which is exactly what makes exact verification cheap.
//!
//! Chart membership of a graded term `(u, ω_u)` on a cone with divisor
//! coefficients `a_ρ` means: `<u, v_ρ> >= -a_ρ` for every ray, and `ω_u`
//! lies in the exterior algebra of the rational annihilator of the rays
//! achieving equality, reduced mod p. On smooth charts this recovers the
//! free module of forms without log poles; on singular charts it is the
//! graded realization of the pushforward from the smooth locus.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fp;
use crate::intmat;
use crate::linalg::{MatFp, Subspace};

/// Sorted list of bitmasks over `n` indices with exactly `k` bits set.
pub fn multivector_masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

pub fn mask_index(masks: &[u32], mask: u32) -> usize {
    masks.binary_search(&mask).expect("mask outside basis")
}

/// `e_i ∧ e_J` for `i` not in `J`: the sign is (-1)^(number of elements of J
/// below i).
fn insert_sign(i: usize, mask: u32) -> i32 {
    let below = mask & ((1u32 << i) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `e_I ∧ e_J` for disjoint masks: counts inversions between the two sorted
/// index lists.
pub fn wedge_sign(a: u32, b: u32) -> i32 {
    let mut sign = 1;
    for i in 0..32 {
        if a & (1 << i) != 0 {
            let below = b & ((1u32 << i) - 1);
            if below.count_ones() % 2 == 1 {
                sign = -sign;
            }
        }
    }
    sign
}

/// An M-graded differential form on the dense torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusForm {
    p: u64,
    rank: usize,
    degree: usize,
    terms: BTreeMap<Vec<i64>, BTreeMap<u32, u64>>,
}

impl TorusForm {
    pub fn zero(p: u64, rank: usize, degree: usize) -> TorusForm {
        TorusForm {
            p,
            rank,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(grade, dlog index mask, coefficient)` triples.
    pub fn from_terms(
        p: u64,
        rank: usize,
        degree: usize,
        entries: Vec<(Vec<i64>, u32, i64)>,
    ) -> Result<TorusForm> {
        let mut form = TorusForm::zero(p, rank, degree);
        for (u, mask, c) in entries {
            if u.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "grade {:?} has wrong length for rank {}",
                    u, rank
                )));
            }
            if mask.count_ones() as usize != degree || mask >= (1 << rank) {
                return Err(Error::InvalidInput(format!(
                    "mask {:#b} does not define a degree-{} multivector in rank {}",
                    mask, degree, rank
                )));
            }
            form.push(u, mask, fp::reduce_i64(c, p));
        }
        Ok(form)
    }

    fn push(&mut self, u: Vec<i64>, mask: u32, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let mv = self.terms.entry(u.clone()).or_default();
        let entry = mv.entry(mask).or_insert(0);
        *entry = fp::add_mod(*entry, c, self.p);
        if *entry == 0 {
            mv.remove(&mask);
            if mv.is_empty() {
                self.terms.remove(&u);
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BTreeMap<u32, u64>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates of the grade-`u` multivector on `multivector_masks`.
    pub fn multivector_at(&self, u: &[i64], masks: &[u32]) -> Vec<u64> {
        let mut coords = vec![0u64; masks.len()];
        if let Some(mv) = self.terms.get(u) {
            for (m, c) in mv {
                coords[mask_index(masks, *m)] = *c;
            }
        }
        coords
    }

    fn check_compat(&self, other: &TorusForm) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrimes(self.p, other.p));
        }
        if self.rank != other.rank {
            return Err(Error::InvalidInput(
                "forms live on tori of different rank".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusForm) -> Result<TorusForm> {
        self.check_compat(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidInput(
                "cannot add forms of different degree".into(),
            ));
        }
        let mut out = self.clone();
        for (u, mv) in &other.terms {
            for (m, c) in mv {
                out.push(u.clone(), *m, *c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> TorusForm {
        let c = fp::reduce_i64(c, self.p);
        let mut out = TorusForm::zero(self.p, self.rank, self.degree);
        for (u, mv) in &self.terms {
            for (m, v) in mv {
                out.push(u.clone(), *m, fp::mul_mod(*v, c, self.p));
            }
        }
        out
    }

    pub fn sub(&self, other: &TorusForm) -> Result<TorusForm> {
        self.add(&other.scale(-1))
    }

    pub fn wedge(&self, other: &TorusForm) -> Result<TorusForm> {
        self.check_compat(other)?;
        let mut out = TorusForm::zero(self.p, self.rank, self.degree + other.degree);
        for (u, mu) in &self.terms {
            for (v, mv) in &other.terms {
                let grade: Vec<i64> = u.iter().zip(v).map(|(&a, &b)| a + b).collect();
                for (ma, ca) in mu {
                    for (mb, cb) in mv {
                        if ma & mb != 0 {
                            continue;
                        }
                        let sign = wedge_sign(*ma, *mb);
                        let mut c = fp::mul_mod(*ca, *cb, self.p);
                        if sign < 0 {
                            c = fp::neg_mod(c, self.p);
                        }
                        out.push(grade.clone(), ma | mb, c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The de Rham differential: grade-preserving Koszul multiplication by
    /// `u mod p` on each graded term.
    pub fn d(&self) -> TorusForm {
        let mut out = TorusForm::zero(self.p, self.rank, self.degree + 1);
        for (u, mv) in &self.terms {
            let ubar: Vec<u64> = u.iter().map(|&x| fp::reduce_i64(x, self.p)).collect();
            for (mask, c) in mv {
                for (i, &ui) in ubar.iter().enumerate() {
                    if ui == 0 || mask & (1 << i) != 0 {
                        continue;
                    }
                    let mut coeff = fp::mul_mod(ui, *c, self.p);
                    if insert_sign(i, *mask) < 0 {
                        coeff = fp::neg_mod(coeff, self.p);
                    }
                    out.push(u.clone(), mask | (1 << i), coeff);
                }
            }
        }
        out
    }

    /// The graded Cartier operator: a term survives iff its grade is
    /// divisible by p, and then the grade is divided by p. On cocycles this
    /// is the classical operator; elsewhere it is the stated graded
    /// projection.
    pub fn cartier(&self) -> TorusForm {
        let mut out = TorusForm::zero(self.p, self.rank, self.degree);
        let p = self.p as i64;
        for (u, mv) in &self.terms {
            if u.iter().all(|&x| x % p == 0) {
                let w: Vec<i64> = u.iter().map(|&x| x / p).collect();
                for (m, c) in mv {
                    out.push(w.clone(), *m, *c);
                }
            }
        }
        out
    }

    /// The splitting of the Cartier operator induced by the monomial
    /// Frobenius lift: gradewise exponent scaling by p. Lands in cocycles
    /// and satisfies `cartier ∘ sigma_split = id`.
    pub fn sigma_split(&self) -> TorusForm {
        let mut out = TorusForm::zero(self.p, self.rank, self.degree);
        let p = self.p as i64;
        for (u, mv) in &self.terms {
            let w: Vec<i64> = u.iter().map(|&x| x * p).collect();
            for (m, c) in mv {
                out.push(w.clone(), *m, *c);
            }
        }
        out
    }

    /// The duality splitting: the degree-i form representing the functional
    /// `z -> cartier(sigma_split(z) ∧ ω)` under the perfect wedge pairing
    /// with degree-(n-i) forms. Computed gradewise by solving the pairing
    /// linear system — deliberately an independent route from
    /// [`TorusForm::cartier`].
    pub fn duality_split(&self) -> Result<TorusForm> {
        let n = self.rank;
        let i = self.degree;
        if i > n {
            return Ok(TorusForm::zero(self.p, n, i));
        }
        let p = self.p;
        let i_masks = multivector_masks(n, i);
        let z_masks = multivector_masks(n, n - i);
        let full: u32 = (1 << n) - 1;
        let dim = i_masks.len();
        debug_assert_eq!(dim, z_masks.len());
        let mut out = TorusForm::zero(p, n, i);
        for (u, mv) in &self.terms {
            if !u.iter().all(|&x| x % p as i64 == 0) {
                continue;
            }
            let w: Vec<i64> = u.iter().map(|&x| x / p as i64).collect();
            // pairing matrix P[zeta][eta] = sign(e_zeta ∧ e_eta), rhs from ω
            let mut aug = MatFp::zeros(p, dim, dim + 1);
            for (zi, &zm) in z_masks.iter().enumerate() {
                for (ji, &jm) in i_masks.iter().enumerate() {
                    if zm & jm == 0 && (zm | jm) == full {
                        let s = wedge_sign(zm, jm);
                        aug.set(zi, ji, if s > 0 { 1 } else { p - 1 });
                    }
                }
                let mut rhs = 0u64;
                for (m, c) in mv {
                    if zm & m == 0 && (zm | m) == full {
                        let s = wedge_sign(zm, *m);
                        let term = if s > 0 { *c } else { fp::neg_mod(*c, p) };
                        rhs = fp::add_mod(rhs, term, p);
                    }
                }
                aug.set(zi, dim, rhs);
            }
            let pivots = aug.rref();
            if pivots.contains(&dim) || pivots.len() < dim {
                return Err(Error::DegeneratePairing(u.clone()));
            }
            for (r, &c) in pivots.iter().enumerate() {
                let v = aug.at(r, dim);
                if v != 0 {
                    out.push(w.clone(), i_masks[c], v);
                }
            }
        }
        Ok(out)
    }
}

/// The graded membership subspace for a chart: multivectors allowed at grade
/// `u` on the cone with rays `rays` and divisor coefficients `coeffs`.
/// `None` when some inequality `<u, v_ρ> >= -a_ρ` fails (the whole grade is
/// absent); otherwise the exterior power of the reduced rational annihilator
/// of the equality rays.
pub fn section_space(
    p: u64,
    rank: usize,
    p_form: usize,
    rays: &[Vec<i64>],
    coeffs: &[i64],
    u: &[i64],
) -> Option<Subspace> {
    debug_assert_eq!(rays.len(), coeffs.len());
    let masks = multivector_masks(rank, p_form);
    let mut equality_rows: Vec<Vec<i64>> = Vec::new();
    for (ray, &a) in rays.iter().zip(coeffs) {
        let pairing = intmat::dot(u, ray);
        if pairing < -(a as i128) {
            return None;
        }
        if pairing == -(a as i128) {
            equality_rows.push(ray.clone());
        }
    }
    Some(annihilator_power(p, rank, p_form, &equality_rows, &masks))
}

/// Λ^k of the mod-p reduction of the saturated integer annihilator of the
/// given rows, as a subspace of the multivector coordinate space.
pub fn annihilator_power(
    p: u64,
    rank: usize,
    k: usize,
    rows: &[Vec<i64>],
    masks: &[u32],
) -> Subspace {
    if rows.is_empty() {
        return Subspace::full(p, masks.len());
    }
    let kernel = intmat::kernel_basis(rows, rank);
    wedge_power_span(p, rank, k, &kernel, masks)
}

/// Span of the k-fold wedges of the given integer vectors (reduced mod p).
pub fn wedge_power_span(
    p: u64,
    rank: usize,
    k: usize,
    vectors: &[Vec<i64>],
    masks: &[u32],
) -> Subspace {
    let w = vectors.len();
    if k > w {
        return Subspace::zero(p, masks.len());
    }
    if k == 0 {
        // Λ^0 is the ground field regardless of the subspace
        return Subspace::full(p, masks.len());
    }
    let mut basis = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        // wedge of vectors[subset]: the coordinate on mask J is a k x k minor
        let mut coords = vec![0u64; masks.len()];
        for (mi, &mask) in masks.iter().enumerate() {
            let cols: Vec<usize> = (0..rank).filter(|&i| mask & (1 << i) != 0).collect();
            let minor: Vec<Vec<i64>> = subset
                .iter()
                .map(|&r| cols.iter().map(|&c| vectors[r][c]).collect())
                .collect();
            coords[mi] = fp::reduce_i128(intmat::det(&minor), p);
        }
        basis.push(coords);
        // next k-subset of 0..w
        let mut i = k;
        let mut done = true;
        while i > 0 {
            i -= 1;
            if subset[i] != i + w - k {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }
    Subspace::new(p, masks.len(), basis)
}

/// Chart membership for a whole form: every graded term must satisfy the
/// inequality and multivector conditions.
pub fn is_section(form: &TorusForm, rays: &[Vec<i64>], coeffs: &[i64]) -> bool {
    let masks = multivector_masks(form.rank(), form.degree());
    form.terms().iter().all(|(u, _)| {
        match section_space(form.prime(), form.rank(), form.degree(), rays, coeffs, u) {
            None => false,
            Some(space) => space.contains(&form.multivector_at(u, &masks)),
        }
    })
}

/// Cocycle and coboundary subspaces of the untwisted graded chart complex at
/// grade `u` in form degree `i`, by direct Koszul linear algebra.
pub fn zb_subspaces(
    p: u64,
    rank: usize,
    i: usize,
    rays: &[Vec<i64>],
    u: &[i64],
) -> (Subspace, Subspace) {
    let zero_coeffs = vec![0i64; rays.len()];
    let masks_i = multivector_masks(rank, i);
    let v_i = match section_space(p, rank, i, rays, &zero_coeffs, u) {
        None => {
            return (
                Subspace::zero(p, masks_i.len()),
                Subspace::zero(p, masks_i.len()),
            )
        }
        Some(s) => s,
    };
    let ubar: Vec<u64> = u.iter().map(|&x| fp::reduce_i64(x, p)).collect();
    let masks_up = multivector_masks(rank, i + 1);
    // Z: kernel of Koszul multiplication restricted to V_i
    let z = {
        let images: Vec<Vec<u64>> = v_i
            .basis
            .iter()
            .map(|b| koszul_image(p, &ubar, b, &masks_i, &masks_up))
            .collect();
        let cols = v_i.basis.len();
        let mut mat = MatFp::zeros(p, masks_up.len(), cols);
        for (j, img) in images.iter().enumerate() {
            for (r, &v) in img.iter().enumerate() {
                mat.set(r, j, v);
            }
        }
        let kernel = mat.kernel_basis();
        let basis: Vec<Vec<u64>> = kernel
            .iter()
            .map(|x| {
                let mut vec = vec![0u64; masks_i.len()];
                for (j, &cj) in x.iter().enumerate() {
                    for (r, &bv) in v_i.basis[j].iter().enumerate() {
                        vec[r] = fp::add_mod(vec[r], fp::mul_mod(cj, bv, p), p);
                    }
                }
                vec
            })
            .collect();
        reduce_to_independent(p, masks_i.len(), basis)
    };
    // B: image of V_{i-1} under Koszul multiplication
    let b = if i == 0 {
        Subspace::zero(p, masks_i.len())
    } else {
        let masks_dn = multivector_masks(rank, i - 1);
        match section_space(p, rank, i - 1, rays, &zero_coeffs, u) {
            None => Subspace::zero(p, masks_i.len()),
            Some(v_dn) => {
                let images: Vec<Vec<u64>> = v_dn
                    .basis
                    .iter()
                    .map(|b| koszul_image(p, &ubar, b, &masks_dn, &masks_i))
                    .collect();
                reduce_to_independent(p, masks_i.len(), images)
            }
        }
    };
    (z, b)
}

/// Multiply a multivector (coords on `from_masks`) by `sum ubar_i e_i`.
pub fn koszul_image(
    p: u64,
    ubar: &[u64],
    coords: &[u64],
    from_masks: &[u32],
    to_masks: &[u32],
) -> Vec<u64> {
    let mut out = vec![0u64; to_masks.len()];
    for (ci, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mask = from_masks[ci];
        for (i, &ui) in ubar.iter().enumerate() {
            if ui == 0 || mask & (1 << i) != 0 {
                continue;
            }
            let mut coeff = fp::mul_mod(ui, c, p);
            if insert_sign(i, mask) < 0 {
                coeff = fp::neg_mod(coeff, p);
            }
            let ti = mask_index(to_masks, mask | (1 << i));
            out[ti] = fp::add_mod(out[ti], coeff, p);
        }
    }
    out
}

/// Row-reduce a spanning set to an independent basis.
pub fn reduce_to_independent(p: u64, ambient: usize, vectors: Vec<Vec<u64>>) -> Subspace {
    if vectors.is_empty() {
        return Subspace::zero(p, ambient);
    }
    let mut mat = MatFp::from_rows(p, vectors);
    let pivots = mat.rref();
    let basis: Vec<Vec<u64>> = (0..pivots.len()).map(|r| mat.row(r).to_vec()).collect();
    Subspace::new(p, ambient, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, p: u64, rank: usize, degree: usize) -> TorusForm {
        let masks = multivector_masks(rank, degree);
        let entries: Vec<(Vec<i64>, u32, i64)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let u: Vec<i64> = (0..rank).map(|_| rng.gen_range(-4..=4)).collect();
                let mask = masks[rng.gen_range(0..masks.len())];
                (u, mask, rng.gen_range(0..p as i64))
            })
            .collect();
        TorusForm::from_terms(p, rank, degree, entries).unwrap()
    }

    #[test]
    fn d_of_coordinate_on_the_line() {
        // d(x) = x dlog = dx in rank 1
        let f = TorusForm::from_terms(5, 1, 0, vec![(vec![1], 0, 1)]).unwrap();
        let df = f.d();
        let expected = TorusForm::from_terms(5, 1, 1, vec![(vec![1], 1, 1)]).unwrap();
        assert_eq!(df, expected);
    }

    #[test]
    fn frobenius_degree_terms_are_closed() {
        for p in [2u64, 3, 5] {
            let f =
                TorusForm::from_terms(p, 2, 1, vec![(vec![p as i64, 0], 0b01, 1)]).unwrap();
            assert!(f.d().is_zero());
        }
    }

    #[test]
    fn koszul_sign_example() {
        // d(x^(1,1) dlog_1) = -x^(1,1) dlog_1 ∧ dlog_2
        let f = TorusForm::from_terms(5, 2, 1, vec![(vec![1, 1], 0b01, 1)]).unwrap();
        let df = f.d();
        let expected = TorusForm::from_terms(5, 2, 2, vec![(vec![1, 1], 0b11, -1)]).unwrap();
        assert_eq!(df, expected);
    }

    #[test]
    fn dd_is_zero_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u64, 3, 5] {
            for rank in 1..=4usize {
                for degree in 0..rank {
                    for _ in 0..10 {
                        let f = random_form(&mut rng, p, rank, degree);
                        assert!(f.d().d().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn d_is_an_antiderivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [2u64, 3] {
            for _ in 0..20 {
                let a = random_form(&mut rng, p, 3, 1);
                let b = random_form(&mut rng, p, 3, 1);
                let lhs = a.wedge(&b).unwrap().d();
                let rhs = a
                    .d()
                    .wedge(&b)
                    .unwrap()
                    .add(&a.wedge(&b.d()).unwrap().scale(-1))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn cartier_inverts_power_monomials() {
        // C(x^p dlog) = x dlog, i.e. C(a^(p-1) da) = da for a = x
        for p in [2u64, 3, 5] {
            let f = TorusForm::from_terms(p, 1, 1, vec![(vec![p as i64], 1, 1)]).unwrap();
            let expected = TorusForm::from_terms(p, 1, 1, vec![(vec![1], 1, 1)]).unwrap();
            assert_eq!(f.cartier(), expected);
            // non-divisible grades die
            let g = TorusForm::from_terms(p, 1, 1, vec![(vec![1], 1, 1)]).unwrap();
            assert!(g.cartier().is_zero());
        }
    }

    #[test]
    fn exact_forms_vanish_under_cartier_and_duality_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [2u64, 3] {
            for _ in 0..20 {
                let beta = random_form(&mut rng, p, 3, 1);
                let db = beta.d();
                assert!(db.cartier().is_zero());
                assert!(db.duality_split().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn sigma_split_lands_in_cocycles_and_splits_cartier() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 3, 5] {
            for degree in 0..=3usize {
                for _ in 0..10 {
                    let f = random_form(&mut rng, p, 3, degree);
                    let s = f.sigma_split();
                    assert!(s.d().is_zero());
                    assert_eq!(s.cartier(), f);
                }
            }
        }
    }

    #[test]
    fn sigma_split_examples() {
        // sigma(dx) = x^(p-1) dx as exponents: x dlog -> x^p dlog
        let f = TorusForm::from_terms(3, 1, 1, vec![(vec![1], 1, 1)]).unwrap();
        let s = f.sigma_split();
        let expected = TorusForm::from_terms(3, 1, 1, vec![(vec![3], 1, 1)]).unwrap();
        assert_eq!(s, expected);
        // sigma(1) = 1
        let one = TorusForm::from_terms(3, 1, 0, vec![(vec![0], 0, 1)]).unwrap();
        assert_eq!(one.sigma_split(), one);
    }

    #[test]
    fn sigma_split_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [2u64, 3] {
            for _ in 0..10 {
                let a = random_form(&mut rng, p, 3, 1);
                let b = random_form(&mut rng, p, 3, 1);
                assert_eq!(
                    a.wedge(&b).unwrap().sigma_split(),
                    a.sigma_split().wedge(&b.sigma_split()).unwrap()
                );
            }
        }
    }

    #[test]
    fn cartier_multiplicative_on_frobenius_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3] {
            for _ in 0..10 {
                let a = random_form(&mut rng, p, 3, 1).sigma_split();
                let b = random_form(&mut rng, p, 3, 1).sigma_split();
                assert_eq!(
                    a.wedge(&b).unwrap().cartier(),
                    a.cartier().wedge(&b.cartier()).unwrap()
                );
            }
        }
    }

    #[test]
    fn duality_split_inverts_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for p in [2u64, 3, 5] {
            for rank in 1..=4usize {
                for degree in 0..=rank {
                    for _ in 0..8 {
                        let f = random_form(&mut rng, p, rank, degree);
                        let s = f.sigma_split();
                        assert_eq!(s.duality_split().unwrap(), f);
                    }
                }
            }
        }
    }

    #[test]
    fn duality_split_ignores_added_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for p in [2u64, 3] {
            for _ in 0..15 {
                let f = random_form(&mut rng, p, 3, 1);
                let beta = random_form(&mut rng, p, 3, 0);
                let noisy = f.sigma_split().add(&beta.d()).unwrap();
                assert_eq!(noisy.duality_split().unwrap(), f);
            }
        }
    }

    #[test]
    fn degree_zero_duality_split_is_inverse_frobenius() {
        // on functions: picks Frobenius-degree monomials and undoes x -> x^p
        let p = 3u64;
        let f = TorusForm::from_terms(p, 2, 0, vec![(vec![3, 6], 0, 2), (vec![1, 0], 0, 1)])
            .unwrap();
        let s = f.duality_split().unwrap();
        let expected = TorusForm::from_terms(p, 2, 0, vec![(vec![1, 2], 0, 2)]).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn membership_on_smooth_orthant() {
        let rays = vec![vec![1i64, 0], vec![0, 1]];
        let coeffs = vec![0i64, 0];
        // x^(1,0) dlog_1 = dx_1 is regular
        let ok = TorusForm::from_terms(5, 2, 1, vec![(vec![1, 0], 0b01, 1)]).unwrap();
        assert!(is_section(&ok, &rays, &coeffs));
        // x^(0,1) dlog_1 = x_2 dx_1/x_1 has a pole
        let bad = TorusForm::from_terms(5, 2, 1, vec![(vec![0, 1], 0b01, 1)]).unwrap();
        assert!(!is_section(&bad, &rays, &coeffs));
    }

    #[test]
    fn membership_on_twisted_line() {
        // on the projective line with divisor 2·(infinity): x dlog is the
        // unique monomial global section of the twisted 1-forms
        let rays_plus = vec![vec![1i64]];
        let rays_minus = vec![vec![-1i64]];
        for u in -4..=4i64 {
            let f = TorusForm::from_terms(5, 1, 1, vec![(vec![u], 1, 1)]).unwrap();
            let on_plus = is_section(&f, &rays_plus, &[0]);
            let on_minus = is_section(&f, &rays_minus, &[2]);
            assert_eq!(on_plus && on_minus, u == 1, "u = {}", u);
        }
    }

    #[test]
    fn membership_preserved_by_d_and_wedge() {
        let rays = vec![vec![1i64, 0], vec![1, 2]];
        let coeffs = vec![0i64, 0];
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let masks1 = multivector_masks(2, 1);
        for p in [2u64, 3] {
            let mut found = 0;
            while found < 25 {
                let u: Vec<i64> = (0..2).map(|_| rng.gen_range(-3..=6)).collect();
                let space = match section_space(p, 2, 1, &rays, &coeffs, &u) {
                    Some(s) if s.dim() > 0 => s,
                    _ => continue,
                };
                found += 1;
                let coeffs_rand: Vec<u64> =
                    (0..space.dim()).map(|_| rng.gen_range(0..p)).collect();
                let mut vec = vec![0u64; masks1.len()];
                for (j, &cj) in coeffs_rand.iter().enumerate() {
                    for (r, &bv) in space.basis[j].iter().enumerate() {
                        vec[r] = fp::add_mod(vec[r], fp::mul_mod(cj, bv, p), p);
                    }
                }
                let entries: Vec<(Vec<i64>, u32, i64)> = masks1
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| vec[*i] != 0)
                    .map(|(i, &m)| (u.clone(), m, vec[i] as i64))
                    .collect();
                if entries.is_empty() {
                    continue;
                }
                let f = TorusForm::from_terms(p, 2, 1, entries).unwrap();
                assert!(is_section(&f, &rays, &coeffs));
                assert!(is_section(&f.d(), &rays, &coeffs), "d broke membership");
                assert!(is_section(&f.wedge(&f).unwrap(), &rays, &coeffs));
            }
        }
    }

    #[test]
    fn smooth_chart_membership_matches_basis_change() {
        // on a smooth full-dimensional chart the membership rule coincides
        // with the free-module description after a lattice basis change;
        // compare against the orthant via the unimodular map sending the
        // chart rays to the standard basis
        let rays = vec![vec![1i64, 1], vec![0, 1]]; // det 1, smooth
        let coeffs = vec![0i64, 0];
        // the dual basis change: exponents transform by the transpose
        // inverse; instead of materializing it we verify dimensions agree
        // with the orthant pattern at matched grades
        for p in [2u64, 3] {
            for u in crate::lattice::BoxIter::new(&[-3, -3], &[3, 3]) {
                let here = (0..=2)
                    .map(|i| {
                        section_space(p, 2, i, &rays, &coeffs, &u)
                            .map_or(0, |s| s.dim())
                    })
                    .collect::<Vec<_>>();
                // image grade under the dual transform: pairings with rays
                let t = vec![
                    intmat::dot(&u, &rays[0]) as i64,
                    intmat::dot(&u, &rays[1]) as i64,
                ];
                let orthant = vec![vec![1i64, 0], vec![0, 1]];
                let there = (0..=2)
                    .map(|i| {
                        section_space(p, 2, i, &orthant, &coeffs, &t)
                            .map_or(0, |s| s.dim())
                    })
                    .collect::<Vec<_>>();
                assert_eq!(here, there, "u={:?} t={:?} p={}", u, t, p);
            }
        }
    }

    #[test]
    fn zb_dimensions_on_the_line() {
        // grade 1, degree 1 on the rank-1 torus: Z = B = span(x dlog)
        let (z, b) = zb_subspaces(5, 1, 1, &[], &[1]);
        assert_eq!(z.dim(), 1);
        assert_eq!(b.dim(), 1);
        // grade 0: zero differential, Z everything, B nothing
        let (z0, b0) = zb_subspaces(5, 1, 1, &[], &[0]);
        assert_eq!(z0.dim(), 1);
        assert_eq!(b0.dim(), 0);
    }

    #[test]
    fn graded_cartier_dimension_identity_on_charts() {
        // dim Z - dim B at grade p·u equals the membership dimension at u
        let charts: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![1, 2]],
            vec![vec![0, 1], vec![-1, -2]],
            vec![vec![1, 0]],
            vec![],
        ];
        for p in [2u64, 3] {
            for rays in &charts {
                for i in 0..=2usize {
                    for u in crate::lattice::BoxIter::new(&[-2, -2], &[2, 2]) {
                        let zero_coeffs = vec![0i64; rays.len()];
                        let member_dim = match section_space(p, 2, i, rays, &zero_coeffs, &u)
                        {
                            None => 0,
                            Some(s) => s.dim(),
                        };
                        let pu: Vec<i64> = u.iter().map(|&x| x * p as i64).collect();
                        let (z, b) = zb_subspaces(p, 2, i, rays, &pu);
                        assert_eq!(
                            z.dim() - b.dim(),
                            member_dim,
                            "p={} rays={:?} i={} u={:?}",
                            p,
                            rays,
                            i,
                            u
                        );
                    }
                }
            }
        }
    }
}
