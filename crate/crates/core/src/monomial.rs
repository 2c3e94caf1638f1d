//! Semigroup rings over 𝔽ₚ and W₂(𝔽ₚ), chart localization, the monomial
//! Frobenius lift and its φ-function.
//!
//! Elements are sparse coefficient maps keyed by exponent vectors in the
//! character lattice; every construction here is diagonal in the monomial
//! basis, so no polynomial machinery is needed. Chart membership is enforced
//! at construction time.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp;
use crate::intmat;
use crate::lattice::{hilbert_basis, Cone, Fan};
use crate::witt::{p_divide, WittPair};

/// Coefficient rings for semigroup-ring elements.
pub trait CoeffRing: Clone + PartialEq + std::fmt::Debug {
    fn prime(&self) -> u64;
    fn is_zero(&self) -> bool;
    fn zero(p: u64) -> Self;
    fn one(p: u64) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
}

/// A prime-field scalar carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FpElem {
    pub v: u64,
    pub p: u64,
}

impl FpElem {
    pub fn new(v: i64, p: u64) -> FpElem {
        FpElem {
            v: fp::reduce_i64(v, p),
            p,
        }
    }
}

impl CoeffRing for FpElem {
    fn prime(&self) -> u64 {
        self.p
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn zero(p: u64) -> Self {
        FpElem { v: 0, p }
    }
    fn one(p: u64) -> Self {
        FpElem { v: 1 % p, p }
    }
    fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedPrimes(self.p, other.p));
        }
        Ok(FpElem {
            v: fp::add_mod(self.v, other.v, self.p),
            p: self.p,
        })
    }
    fn neg(&self) -> Self {
        FpElem {
            v: fp::neg_mod(self.v, self.p),
            p: self.p,
        }
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedPrimes(self.p, other.p));
        }
        Ok(FpElem {
            v: fp::mul_mod(self.v, other.v, self.p),
            p: self.p,
        })
    }
}

impl CoeffRing for WittPair {
    fn prime(&self) -> u64 {
        self.p
    }
    fn is_zero(&self) -> bool {
        WittPair::is_zero(self)
    }
    fn zero(p: u64) -> Self {
        WittPair::zero(p)
    }
    fn one(p: u64) -> Self {
        WittPair::one(p)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        WittPair::add(self, other)
    }
    fn neg(&self) -> Self {
        WittPair::neg(self)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        WittPair::mul(self, other)
    }
}

/// The affine chart an element is declared on: either the dense torus (no
/// support constraint) or the chart of a cone in the fan lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Chart {
    Torus { rank: usize },
    Affine(Cone),
}

impl Chart {
    pub fn rank(&self) -> usize {
        match self {
            Chart::Torus { rank } => *rank,
            Chart::Affine(c) => c.rank(),
        }
    }

    /// True iff the exponent lies in the chart semigroup.
    pub fn admits(&self, u: &[i64]) -> bool {
        match self {
            Chart::Torus { rank } => u.len() == *rank,
            Chart::Affine(c) => {
                u.len() == c.rank() && c.generators().iter().all(|v| intmat::dot(u, v) >= 0)
            }
        }
    }
}

/// A sparse semigroup-ring element with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialElement<C: CoeffRing> {
    chart: Chart,
    p: u64,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: CoeffRing> MonomialElement<C> {
    pub fn new(chart: Chart, p: u64, terms: Vec<(Vec<i64>, C)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, C> = BTreeMap::new();
        for (u, c) in terms {
            if c.prime() != p {
                return Err(Error::MismatchedPrimes(p, c.prime()));
            }
            if !chart.admits(&u) {
                return Err(Error::ChartMismatch(format!(
                    "exponent {:?} is outside the chart semigroup",
                    u
                )));
            }
            let entry = match map.remove(&u) {
                Some(prev) => prev.add(&c)?,
                None => c,
            };
            if !entry.is_zero() {
                map.insert(u, entry);
            }
        }
        Ok(MonomialElement {
            chart,
            p,
            terms: map,
        })
    }

    pub fn zero(chart: Chart, p: u64) -> Self {
        MonomialElement {
            chart,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(chart: Chart, p: u64, u: Vec<i64>) -> Result<Self> {
        MonomialElement::new(chart, p, vec![(u, C::one(p))])
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrimes(self.p, other.p));
        }
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(
                "operands are declared on different charts".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.terms.clone();
        for (u, c) in &other.terms {
            let entry = match out.remove(u) {
                Some(prev) => prev.add(c)?,
                None => c.clone(),
            };
            if !entry.is_zero() {
                out.insert(u.clone(), entry);
            }
        }
        Ok(MonomialElement {
            chart: self.chart.clone(),
            p: self.p,
            terms: out,
        })
    }

    pub fn neg(&self) -> Self {
        MonomialElement {
            chart: self.chart.clone(),
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(u, c)| (u.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out: BTreeMap<Vec<i64>, C> = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let w: Vec<i64> = u.iter().zip(v).map(|(&a, &b)| a + b).collect();
                let prod = cu.mul(cv)?;
                let entry = match out.remove(&w) {
                    Some(prev) => prev.add(&prod)?,
                    None => prod,
                };
                if !entry.is_zero() {
                    out.insert(w, entry);
                }
            }
        }
        Ok(MonomialElement {
            chart: self.chart.clone(),
            p: self.p,
            terms: out,
        })
    }

    pub fn scalar_mul(&self, c: &C) -> Result<Self> {
        if c.prime() != self.p {
            return Err(Error::MismatchedPrimes(self.p, c.prime()));
        }
        let mut terms = BTreeMap::new();
        for (u, cu) in &self.terms {
            let prod = cu.mul(c)?;
            if !prod.is_zero() {
                terms.insert(u.clone(), prod);
            }
        }
        Ok(MonomialElement {
            chart: self.chart.clone(),
            p: self.p,
            terms,
        })
    }

    pub fn pow(&self, k: u64) -> Result<Self> {
        let mut acc = MonomialElement::new(
            self.chart.clone(),
            self.p,
            vec![(vec![0; self.chart.rank()], C::one(self.p))],
        )?;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            if k > 1 {
                base = base.mul(&base)?;
            }
            k >>= 1;
        }
        Ok(acc)
    }

    /// Same coefficients, re-declared on another chart. Fails if some
    /// exponent falls outside the new chart's semigroup.
    pub fn on_chart(&self, chart: Chart) -> Result<Self> {
        MonomialElement::new(
            chart,
            self.p,
            self.terms
                .iter()
                .map(|(u, c)| (u.clone(), c.clone()))
                .collect(),
        )
    }
}

impl MonomialElement<WittPair> {
    /// Reduction modulo p, coefficientwise.
    pub fn reduce(&self) -> MonomialElement<FpElem> {
        MonomialElement {
            chart: self.chart.clone(),
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.a0 != 0)
                .map(|(u, c)| (u.clone(), FpElem { v: c.a0, p: self.p }))
                .collect(),
        }
    }

    /// The chart Frobenius lift: coefficients through the Witt Frobenius,
    /// exponents scaled by p. A ring homomorphism.
    pub fn frobenius_lift(&self) -> Result<Self> {
        let p = self.p;
        MonomialElement::new(
            self.chart.clone(),
            p,
            self.terms
                .iter()
                .map(|(u, c)| (u.iter().map(|&x| x * p as i64).collect(), c.frobenius()))
                .collect(),
        )
    }

    /// The unique φ with `F(b) = b^p + p·φ(b)`, computed by subtraction in
    /// the Witt ring and exact division through multiplication-by-p.
    ///
    /// Errors with an internal inconsistency if the difference ever leaves
    /// the image of multiplication by p, which flatness of the chart ring
    /// makes impossible.
    pub fn phi(&self) -> Result<MonomialElement<FpElem>> {
        let diff = self.frobenius_lift()?.sub(&self.pow(self.p)?)?;
        let mut terms = Vec::new();
        for (u, c) in &diff.terms {
            let x = p_divide(c)?;
            if x != 0 {
                terms.push((u.clone(), FpElem { v: x, p: self.p }));
            }
        }
        MonomialElement::new(self.chart.clone(), self.p, terms)
    }
}

/// Realizes the localization `k[S_tau] = k[S_sigma]_u` for a face
/// `tau = sigma ∩ u^perp`.
#[derive(Debug, Clone)]
pub struct ChartTransition {
    source: Cone,
    target: Cone,
    u: Vec<i64>,
}

impl ChartTransition {
    /// Validates that `u` lies in the dual semigroup of the source and that
    /// the target is exactly the face cut out by `u`.
    pub fn new(source: Cone, target: Cone, u: Vec<i64>) -> Result<ChartTransition> {
        if source.generators().iter().any(|v| intmat::dot(&u, v) < 0) {
            return Err(Error::InvalidInput(format!(
                "functional {:?} is not in the dual semigroup of the source cone",
                u
            )));
        }
        let cut: Vec<Vec<i64>> = source
            .generators()
            .iter()
            .filter(|v| intmat::dot(&u, v) == 0)
            .cloned()
            .collect();
        let face = Cone::new(source.rank(), source.tag(), cut)?;
        if !face.set_eq(&target) {
            return Err(Error::InvalidInput(format!(
                "functional {:?} cuts out {:?}, not the declared target",
                u,
                face.generators()
            )));
        }
        Ok(ChartTransition { source, target, u })
    }

    pub fn separating_functional(&self) -> &[i64] {
        &self.u
    }

    /// Canonical inclusion into the localized chart ring: coefficients and
    /// support unchanged, only the declared chart moves.
    pub fn localize<C: CoeffRing>(&self, e: &MonomialElement<C>) -> Result<MonomialElement<C>> {
        match e.chart() {
            Chart::Affine(c) if c.set_eq(&self.source) => {}
            _ => {
                return Err(Error::ChartMismatch(
                    "element is not declared on the transition source".into(),
                ))
            }
        }
        e.on_chart(Chart::Affine(self.target.clone()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GluePairReport {
    pub face: Vec<usize>,
    pub cone: Vec<usize>,
    pub generators_checked: usize,
    pub random_elements_checked: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlueReport {
    pub prime: u64,
    pub pairs: Vec<GluePairReport>,
    pub all_pass: bool,
}

/// Check that the chart Frobenius lifts commute with every face inclusion of
/// the fan, on all semigroup generators and on seeded random Witt elements.
pub fn verify_glue_compat(fan: &Fan, p: u64, seed: u64, max_box: usize) -> Result<GlueReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for (si, sigma_set) in fan.cones().iter().enumerate() {
        let sigma = fan.cone(si);
        let sdual = sigma.dual()?;
        let gens = hilbert_basis(&sdual, max_box)?;
        for (ti, tau_set) in fan.cones().iter().enumerate() {
            if si == ti || !tau_set.is_subset(sigma_set) {
                continue;
            }
            let tau = fan.cone(ti);
            let u = separating_functional(sigma, tau)?;
            let transition = ChartTransition::new(sigma.clone(), tau.clone(), u)?;
            let mut pass = true;
            let mut checked = 0;
            for g in &gens {
                let e: MonomialElement<WittPair> =
                    MonomialElement::monomial(Chart::Affine(sigma.clone()), p, g.clone())?;
                let lhs = transition.localize(&e.frobenius_lift()?)?;
                let rhs = transition.localize(&e)?.frobenius_lift()?;
                if lhs != rhs {
                    pass = false;
                }
                checked += 1;
            }
            let mut random_checked = 0;
            if !gens.is_empty() {
                for _ in 0..8 {
                    let n_terms = rng.gen_range(1..=3);
                    let mut terms = Vec::new();
                    for _ in 0..n_terms {
                        let g = &gens[rng.gen_range(0..gens.len())];
                        let c = WittPair {
                            a0: rng.gen_range(0..p),
                            a1: rng.gen_range(0..p),
                            p,
                        };
                        terms.push((g.clone(), c));
                    }
                    let e = MonomialElement::new(Chart::Affine(sigma.clone()), p, terms)?;
                    let lhs = transition.localize(&e.frobenius_lift()?)?;
                    let rhs = transition.localize(&e)?.frobenius_lift()?;
                    if lhs != rhs {
                        pass = false;
                    }
                    random_checked += 1;
                }
            }
            pairs.push(GluePairReport {
                face: tau_set.iter().copied().collect(),
                cone: sigma_set.iter().copied().collect(),
                generators_checked: checked,
                random_elements_checked: random_checked,
                pass,
            });
        }
    }
    let all_pass = pairs.iter().all(|r| r.pass);
    Ok(GlueReport {
        prime: p,
        pairs,
        all_pass,
    })
}

/// A functional in the dual semigroup of `sigma` cutting out exactly the
/// face `tau`: the sum of the dual generators vanishing on `tau`.
fn separating_functional(sigma: &Cone, tau: &Cone) -> Result<Vec<i64>> {
    let n = sigma.rank();
    let mut u = vec![0i64; n];
    for d in sigma.dual_generators() {
        if tau.generators().iter().all(|g| intmat::dot(d, g) == 0) {
            for (ui, &di) in u.iter_mut().zip(d) {
                *ui += di;
            }
        }
    }
    let cut: Vec<&Vec<i64>> = sigma
        .generators()
        .iter()
        .filter(|g| intmat::dot(&u, g) == 0)
        .collect();
    let tau_gens: Vec<&Vec<i64>> = tau.generators().iter().collect();
    if cut != tau_gens {
        return Err(Error::InternalInconsistency(format!(
            "separating functional {:?} does not cut out the face",
            u
        )));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::LatticeTag;

    fn orthant() -> Cone {
        Cone::new(2, LatticeTag::N, vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn fp_elem(chart: Chart, p: u64, terms: Vec<(Vec<i64>, i64)>) -> MonomialElement<FpElem> {
        MonomialElement::new(
            chart,
            p,
            terms
                .into_iter()
                .map(|(u, c)| (u, FpElem::new(c, p)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_product() {
        let c = Chart::Affine(orthant());
        let x = fp_elem(c.clone(), 5, vec![(vec![1, 0], 1)]);
        let y = fp_elem(c.clone(), 5, vec![(vec![0, 1], 1)]);
        let xy = x.mul(&y).unwrap();
        assert_eq!(xy, fp_elem(c, 5, vec![(vec![1, 1], 1)]));
    }

    #[test]
    fn freshmans_dream_mod_2() {
        let c = Chart::Affine(orthant());
        let e = fp_elem(c.clone(), 2, vec![(vec![0, 0], 1), (vec![1, 0], 1)]);
        let sq = e.mul(&e).unwrap();
        assert_eq!(sq, fp_elem(c, 2, vec![(vec![0, 0], 1), (vec![2, 0], 1)]));
    }

    #[test]
    fn witt_square_keeps_cross_term() {
        // (1 + x)^2 over W2(F_2) = 1 + (0,1)x + x^2, because 2 = (0,1)
        let c = Chart::Affine(orthant());
        let e = MonomialElement::new(
            c.clone(),
            2,
            vec![
                (vec![0, 0], WittPair::one(2)),
                (vec![1, 0], WittPair::one(2)),
            ],
        )
        .unwrap();
        let sq = e.mul(&e).unwrap();
        let expected = MonomialElement::new(
            c,
            2,
            vec![
                (vec![0, 0], WittPair::one(2)),
                (vec![1, 0], WittPair::new(0, 1, 2).unwrap()),
                (vec![2, 0], WittPair::one(2)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
        // and the Z/4 oracle agrees: the middle coefficient is 2
        assert_eq!(WittPair::new(0, 1, 2).unwrap().to_zp2(), 2);
    }

    #[test]
    fn chart_membership_enforced() {
        let c = Chart::Affine(orthant());
        let bad =
            MonomialElement::<FpElem>::new(c, 3, vec![(vec![0, -1], FpElem::new(1, 3))]);
        assert!(matches!(bad, Err(Error::ChartMismatch(_))));
        // the same exponent is fine on the face chart of ray (1,0)
        let ray = Cone::new(2, LatticeTag::N, vec![vec![1, 0]]).unwrap();
        let ok = MonomialElement::<FpElem>::new(
            Chart::Affine(ray),
            3,
            vec![(vec![0, -1], FpElem::new(1, 3))],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn localization_is_coefficient_preserving() {
        let sigma = orthant();
        let ray = Cone::new(2, LatticeTag::N, vec![vec![1, 0]]).unwrap();
        let t = ChartTransition::new(sigma.clone(), ray, vec![0, 1]).unwrap();
        let e = fp_elem(Chart::Affine(sigma), 5, vec![(vec![2, 3], 4)]);
        let loc = t.localize(&e).unwrap();
        assert_eq!(loc.terms().len(), 1);
        assert_eq!(loc.terms()[&vec![2, 3]].v, 4);
    }

    #[test]
    fn transition_composite_matches_direct() {
        let sigma = orthant();
        let ray = Cone::new(2, LatticeTag::N, vec![vec![1, 0]]).unwrap();
        let zero = Cone::zero(2, LatticeTag::N);
        let t1 = ChartTransition::new(sigma.clone(), ray.clone(), vec![0, 1]).unwrap();
        let t2 = ChartTransition::new(ray, zero.clone(), vec![1, 0]).unwrap();
        let direct = ChartTransition::new(sigma.clone(), zero, vec![1, 1]).unwrap();
        let sdual = sigma.dual().unwrap();
        for g in hilbert_basis(&sdual, 100_000).unwrap() {
            let e: MonomialElement<FpElem> =
                MonomialElement::monomial(Chart::Affine(sigma.clone()), 3, g).unwrap();
            let via = t2.localize(&t1.localize(&e).unwrap()).unwrap();
            let straight = direct.localize(&e).unwrap();
            assert_eq!(via, straight);
        }
    }

    #[test]
    fn frobenius_lift_scales_exponents() {
        let c = Chart::Affine(orthant());
        let e: MonomialElement<WittPair> = MonomialElement::monomial(c, 3, vec![1, 2]).unwrap();
        let f = e.frobenius_lift().unwrap();
        assert_eq!(f.terms().keys().next().unwrap(), &vec![3, 6]);
    }

    #[test]
    fn frobenius_lift_is_ring_hom_and_reduces_to_pth_power() {
        let c = Chart::Affine(orthant());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3, 5] {
            for _ in 0..20 {
                let mk = |rng: &mut ChaCha8Rng| {
                    let terms: Vec<(Vec<i64>, WittPair)> = (0..rng.gen_range(1..=3))
                        .map(|_| {
                            (
                                vec![rng.gen_range(0..3), rng.gen_range(0..3)],
                                WittPair {
                                    a0: rng.gen_range(0..p),
                                    a1: rng.gen_range(0..p),
                                    p,
                                },
                            )
                        })
                        .collect();
                    MonomialElement::new(c.clone(), p, terms).unwrap()
                };
                let a = mk(&mut rng);
                let b = mk(&mut rng);
                assert_eq!(
                    a.mul(&b).unwrap().frobenius_lift().unwrap(),
                    a.frobenius_lift()
                        .unwrap()
                        .mul(&b.frobenius_lift().unwrap())
                        .unwrap()
                );
                assert_eq!(
                    a.add(&b).unwrap().frobenius_lift().unwrap(),
                    a.frobenius_lift()
                        .unwrap()
                        .add(&b.frobenius_lift().unwrap())
                        .unwrap()
                );
                // reduction of the lift is the p-th power of the reduction
                assert_eq!(
                    a.frobenius_lift().unwrap().reduce(),
                    a.reduce().pow(p).unwrap()
                );
            }
        }
    }

    #[test]
    fn phi_vanishes_on_unit_monomials() {
        let c = Chart::Affine(orthant());
        for p in [2u64, 3, 5] {
            let e: MonomialElement<WittPair> =
                MonomialElement::monomial(c.clone(), p, vec![2, 1]).unwrap();
            assert!(e.phi().unwrap().is_zero());
        }
    }

    #[test]
    fn phi_of_binomial_sum_mod_2() {
        // for b = x + y: F(b) - b^2 = 2xy, so phi = xy
        let c = Chart::Affine(orthant());
        let e = MonomialElement::new(
            c.clone(),
            2,
            vec![
                (vec![1, 0], WittPair::one(2)),
                (vec![0, 1], WittPair::one(2)),
            ],
        )
        .unwrap();
        let phi = e.phi().unwrap();
        assert_eq!(phi, fp_elem(c, 2, vec![(vec![1, 1], 1)]));
    }

    #[test]
    fn phi_leibniz_identity() {
        // phi(ab) = a0^p phi(b) + b0^p phi(a) with a0, b0 the reductions
        let c = Chart::Affine(orthant());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 3] {
            for _ in 0..25 {
                let mk = |rng: &mut ChaCha8Rng| {
                    let terms: Vec<(Vec<i64>, WittPair)> = (0..rng.gen_range(1..=3))
                        .map(|_| {
                            (
                                vec![rng.gen_range(0..3), rng.gen_range(0..3)],
                                WittPair {
                                    a0: rng.gen_range(0..p),
                                    a1: rng.gen_range(0..p),
                                    p,
                                },
                            )
                        })
                        .collect();
                    MonomialElement::new(c.clone(), p, terms).unwrap()
                };
                let a = mk(&mut rng);
                let b = mk(&mut rng);
                let lhs = a.mul(&b).unwrap().phi().unwrap();
                let ap = a.reduce().pow(p).unwrap();
                let bp = b.reduce().pow(p).unwrap();
                let rhs = ap
                    .mul(&b.phi().unwrap())
                    .unwrap()
                    .add(&bp.mul(&a.phi().unwrap()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn phi_additive_identity() {
        // phi(a+b) = phi(a) + phi(b) - sum_j (C(p,j)/p) a0^j b0^(p-j)
        let c = Chart::Affine(orthant());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [2u64, 3] {
            for _ in 0..25 {
                let mk = |rng: &mut ChaCha8Rng| {
                    let terms: Vec<(Vec<i64>, WittPair)> = (0..rng.gen_range(1..=2))
                        .map(|_| {
                            (
                                vec![rng.gen_range(0..2), rng.gen_range(0..2)],
                                WittPair {
                                    a0: rng.gen_range(0..p),
                                    a1: rng.gen_range(0..p),
                                    p,
                                },
                            )
                        })
                        .collect();
                    MonomialElement::new(c.clone(), p, terms).unwrap()
                };
                let a = mk(&mut rng);
                let b = mk(&mut rng);
                let lhs = a.add(&b).unwrap().phi().unwrap();
                let mut rhs = a.phi().unwrap().add(&b.phi().unwrap()).unwrap();
                let ar = a.reduce();
                let br = b.reduce();
                for j in 1..p {
                    let coeff = crate::witt::binom_over_p(p, j);
                    let term = ar
                        .pow(j)
                        .unwrap()
                        .mul(&br.pow(p - j).unwrap())
                        .unwrap()
                        .scalar_mul(&FpElem { v: coeff, p })
                        .unwrap();
                    rhs = rhs.sub(&term).unwrap();
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn witt_chart_ring_is_free_over_pairs() {
        // coefficientwise split into two F_p chart elements and back
        let c = Chart::Affine(orthant());
        let e = MonomialElement::new(
            c.clone(),
            3,
            vec![
                (vec![1, 0], WittPair::new(2, 1, 3).unwrap()),
                (vec![0, 2], WittPair::new(0, 2, 3).unwrap()),
            ],
        )
        .unwrap();
        let lower = e.reduce();
        let upper: Vec<(Vec<i64>, u64)> = e
            .terms()
            .iter()
            .filter(|(_, c)| c.a1 != 0)
            .map(|(u, c)| (u.clone(), c.a1))
            .collect();
        let mut terms: BTreeMap<Vec<i64>, WittPair> = BTreeMap::new();
        for (u, c) in lower.terms() {
            terms.insert(u.clone(), WittPair { a0: c.v, a1: 0, p: 3 });
        }
        for (u, a1) in upper {
            let t = terms.entry(u).or_insert(WittPair::zero(3));
            t.a1 = a1;
        }
        let rebuilt = MonomialElement::new(c, 3, terms.into_iter().collect()).unwrap();
        assert_eq!(rebuilt, e);
    }

    #[test]
    fn glue_compat_p2() {
        let fan = fixtures::fan_p2().unwrap();
        let report = verify_glue_compat(&fan, 2, 0, 100_000).unwrap();
        assert!(report.all_pass);
        assert!(!report.pairs.is_empty());
    }

    #[test]
    fn glue_compat_p1xp1_p3() {
        let fan = fixtures::fan_p1xp1().unwrap();
        let report = verify_glue_compat(&fan, 3, 0, 100_000).unwrap();
        assert!(report.all_pass);
    }

    #[test]
    fn glue_compat_affine_fan() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        let report = verify_glue_compat(&fan, 2, 0, 100_000).unwrap();
        assert!(report.all_pass);
    }
}
