//! Length-2 Witt vectors over prime fields.
//!
//! `W2(F_p)` is the set of pairs `(a0, a1)` with product
//! `(a0 b0, a0^p b1 + b0^p a1)` and sum
//! `(a0 + b0, a1 + b1 + sum_{j=1}^{p-1} p^{-1} C(p,j) a0^j b0^{p-j})`;
//! the carry coefficients `C(p,j)/p` are exact integers, computed in u128
//! and reduced. For prime fields this ring is isomorphic to Z/p^2, which
//! gives a free independent oracle used heavily in the tests.

use serde::{Deserialize, Serialize};

use crate::config::MAX_PRIME;
use crate::error::{Error, Result};
use crate::fp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittPair {
    pub a0: u64,
    pub a1: u64,
    pub p: u64,
}

impl WittPair {
    pub fn new(a0: i64, a1: i64, p: u64) -> Result<WittPair> {
        if !fp::is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "coefficient prime must be a prime in 2..={}, got {}",
                MAX_PRIME, p
            )));
        }
        Ok(WittPair {
            a0: fp::reduce_i64(a0, p),
            a1: fp::reduce_i64(a1, p),
            p,
        })
    }

    pub fn zero(p: u64) -> WittPair {
        WittPair { a0: 0, a1: 0, p }
    }

    pub fn one(p: u64) -> WittPair {
        WittPair { a0: 1 % p, a1: 0, p }
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0 && self.a1 == 0
    }

    fn check(&self, other: &WittPair) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrimes(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &WittPair) -> Result<WittPair> {
        self.check(other)?;
        let p = self.p;
        let mut carry = 0u64;
        for j in 1..p {
            let coeff = binom_over_p(p, j) % p;
            let term = fp::mul_mod(
                coeff,
                fp::mul_mod(
                    fp::pow_mod(self.a0, j, p),
                    fp::pow_mod(other.a0, p - j, p),
                    p,
                ),
                p,
            );
            carry = fp::add_mod(carry, term, p);
        }
        Ok(WittPair {
            a0: fp::add_mod(self.a0, other.a0, p),
            a1: fp::add_mod(fp::add_mod(self.a1, other.a1, p), carry, p),
            p,
        })
    }

    pub fn mul(&self, other: &WittPair) -> Result<WittPair> {
        self.check(other)?;
        let p = self.p;
        Ok(WittPair {
            a0: fp::mul_mod(self.a0, other.a0, p),
            a1: fp::add_mod(
                fp::mul_mod(fp::pow_mod(self.a0, p, p), other.a1, p),
                fp::mul_mod(fp::pow_mod(other.a0, p, p), self.a1, p),
                p,
            ),
            p,
        })
    }

    pub fn neg(&self) -> WittPair {
        // -(a) is the additive inverse; derive it through the isomorphism-free
        // route: solve a + x = 0 componentwise. x0 = -a0 and the carry gives
        // x1 = -a1 - carry(a0, -a0).
        let p = self.p;
        let x0 = fp::neg_mod(self.a0, p);
        let mut carry = 0u64;
        for j in 1..p {
            let coeff = binom_over_p(p, j) % p;
            let term = fp::mul_mod(
                coeff,
                fp::mul_mod(fp::pow_mod(self.a0, j, p), fp::pow_mod(x0, p - j, p), p),
                p,
            );
            carry = fp::add_mod(carry, term, p);
        }
        WittPair {
            a0: x0,
            a1: fp::neg_mod(fp::add_mod(self.a1, carry, p), p),
            p,
        }
    }

    pub fn sub(&self, other: &WittPair) -> Result<WittPair> {
        self.add(&other.neg())
    }

    /// The Frobenius ring endomorphism, componentwise p-th power. Over a
    /// prime field this is the identity map.
    pub fn frobenius(&self) -> WittPair {
        WittPair {
            a0: fp::pow_mod(self.a0, self.p, self.p),
            a1: fp::pow_mod(self.a1, self.p, self.p),
            p: self.p,
        }
    }

    /// Reduction modulo p: projection on the first component.
    pub fn reduce(&self) -> u64 {
        self.a0
    }

    /// Ring isomorphism to Z/p^2: `(a0, a1) -> a0^p - p*a1` on residue
    /// representatives. The first ghost coordinate; the naive `a0 + p*a1`
    /// fails additivity for p >= 3, this one is a homomorphism for the
    /// carry convention used by [`WittPair::add`].
    pub fn to_zp2(&self) -> u64 {
        let p2 = self.p * self.p;
        let t = fp::pow_mod(self.a0, self.p, p2) as i64 - (self.p * self.a1) as i64;
        t.rem_euclid(p2 as i64) as u64
    }

    /// Inverse of [`WittPair::to_zp2`].
    pub fn from_zp2(x: u64, p: u64) -> WittPair {
        let p2 = p * p;
        let x = x % p2;
        let a0 = x % p;
        // x = a0^p - p*a1 mod p^2, and a0^p = a0 mod p, so the difference
        // below is divisible by p
        let diff = (fp::pow_mod(a0, p, p2) + p2 - x) % p2;
        debug_assert_eq!(diff % p, 0);
        WittPair {
            a0,
            a1: (diff / p) % p,
            p,
        }
    }

    pub fn pow(&self, mut k: u64) -> Result<WittPair> {
        let mut base = *self;
        let mut acc = WittPair::one(self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

/// The additive map F_p -> W2(F_p) realizing multiplication by p: the sum of
/// p copies of any lift of x. In coordinates this is x -> (0, -x); under the
/// Z/p^2 isomorphism it is literally x -> p*x.
pub fn p_multiply(x: u64, p: u64) -> WittPair {
    WittPair {
        a0: 0,
        a1: fp::neg_mod(x, p),
        p,
    }
}

/// Partial inverse of [`p_multiply`] on the kernel of reduction.
pub fn p_divide(w: &WittPair) -> Result<u64> {
    if w.a0 != 0 {
        return Err(Error::InternalInconsistency(format!(
            "{:?} is not in the image of multiplication by p",
            w
        )));
    }
    Ok(fp::neg_mod(w.a1, w.p))
}

/// `C(p, j) / p mod p` for prime `p` and `0 < j < p`. The quotient is an
/// exact integer, computed in u128 before reduction.
pub fn binom_over_p(p: u64, j: u64) -> u64 {
    debug_assert!(j > 0 && j < p);
    let mut num = 1u128;
    let mut den = 1u128;
    // C(p, j)/p = C(p-1, j-1) / j
    for i in 0..j - 1 {
        num *= (p - 1 - i) as u128;
        den *= (i + 1) as u128;
        // keep intermediates small; the running quotient stays integral
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(num % den, 0);
    let c = num / den; // C(p-1, j-1)
    debug_assert_eq!(c % j as u128, 0);
    ((c / j as u128) % p as u128) as u64
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All p^2 elements, in a fixed order.
pub fn all_elements(p: u64) -> Vec<WittPair> {
    let mut out = Vec::with_capacity((p * p) as usize);
    for a0 in 0..p {
        for a1 in 0..p {
            out.push(WittPair { a0, a1, p });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_coefficients_are_integers() {
        for p in [2u64, 3, 5, 7, 11, 97] {
            for j in 1..p {
                // recompute C(p, j) directly and confirm divisibility
                let mut c = 1u128;
                for i in 0..j {
                    c = c * (p - i) as u128 / (i + 1) as u128;
                }
                assert_eq!(c % p as u128, 0, "p={} j={}", p, j);
                assert_eq!(
                    binom_over_p(p, j) as u128,
                    (c / p as u128) % p as u128,
                    "p={} j={}",
                    p,
                    j
                );
            }
        }
    }

    #[test]
    fn addition_examples() {
        // p=2: 1 + 1 = 2 corresponds to (0, 1) under W2(F_2) = Z/4
        let one = WittPair::new(1, 0, 2).unwrap();
        assert_eq!(one.add(&one).unwrap(), WittPair::new(0, 1, 2).unwrap());
        // zero is the additive identity for any p
        for p in [2u64, 3, 5, 7] {
            for b in all_elements(p) {
                assert_eq!(WittPair::zero(p).add(&b).unwrap(), b);
            }
        }
        // p=3: the Z/9 oracle decides the carry. (2,0) is the multiplicative
        // lift of 2, which sits at 8 in Z/9, so (1,0) + (2,0) lands on
        // 1 + 8 = 0.
        let a = WittPair::new(1, 0, 3).unwrap();
        let b = WittPair::new(2, 0, 3).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.to_zp2(), (a.to_zp2() + b.to_zp2()) % 9);
        assert_eq!(sum, WittPair::new(0, 0, 3).unwrap());
        // the residue 3 itself is (0, 2) under this normalization
        assert_eq!(WittPair::from_zp2(3, 3).to_zp2(), 3);
    }

    #[test]
    fn multiplication_examples() {
        for p in [2u64, 3, 5] {
            for b in all_elements(p) {
                assert_eq!(WittPair::one(p).mul(&b).unwrap(), b);
            }
        }
        // p=2: (0,1) * (0,1) = (0,0), i.e. 2*2 = 0 in Z/4
        let two = WittPair::new(0, 1, 2).unwrap();
        assert!(two.mul(&two).unwrap().is_zero());
        // p=3: (2,0)^2 = (1,0) plus the Z/9 consistency 2*2 = 4 = (1,1)? No:
        // the normalization maps (a0,a1) to a0 + 3 a1, and the Witt square of
        // the Teichmueller-style pair (2,0) is checked through the oracle
        // below instead of by hand here.
        let t = WittPair::new(2, 0, 3).unwrap();
        let sq = t.mul(&t).unwrap();
        assert_eq!(sq.a0, 1);
    }

    #[test]
    fn zp2_isomorphism_exhaustive() {
        for p in [2u64, 3, 5, 7] {
            let p2 = p * p;
            // bijectivity
            let mut seen = vec![false; p2 as usize];
            for w in all_elements(p) {
                let x = w.to_zp2();
                assert!(x < p2);
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
                assert_eq!(WittPair::from_zp2(x, p), w);
            }
            // ring homomorphism
            for a in all_elements(p) {
                for b in all_elements(p) {
                    assert_eq!(
                        a.add(&b).unwrap().to_zp2(),
                        (a.to_zp2() + b.to_zp2()) % p2,
                        "add p={} a={:?} b={:?}",
                        p,
                        a,
                        b
                    );
                    assert_eq!(
                        a.mul(&b).unwrap().to_zp2(),
                        (a.to_zp2() * b.to_zp2()) % p2,
                        "mul p={} a={:?} b={:?}",
                        p,
                        a,
                        b
                    );
                }
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        for p in [2u64, 3] {
            let elems = all_elements(p);
            for a in &elems {
                for b in &elems {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    assert!(a.add(&a.neg()).unwrap().is_zero());
                    for c in &elems {
                        assert_eq!(
                            a.add(b).unwrap().add(c).unwrap(),
                            a.add(&b.add(c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            a.mul(b).unwrap().mul(c).unwrap(),
                            a.mul(&b.mul(c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            a.mul(&b.add(c).unwrap()).unwrap(),
                            a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_ring_endomorphism() {
        for p in [2u64, 3] {
            let elems = all_elements(p);
            for a in &elems {
                assert_eq!(a.frobenius().reduce(), fp::pow_mod(a.reduce(), p, p));
                for b in &elems {
                    assert_eq!(
                        a.mul(b).unwrap().frobenius(),
                        a.frobenius().mul(&b.frobenius()).unwrap()
                    );
                    assert_eq!(
                        a.add(b).unwrap().frobenius(),
                        a.frobenius().add(&b.frobenius()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn p_multiply_laws() {
        assert!(p_multiply(0, 5).is_zero());
        // p=3: p_multiply(2) is 6 = 3*2 in Z/9
        assert_eq!(p_multiply(2, 3).to_zp2(), 6);
        for p in [2u64, 3, 5] {
            for x in 0..p {
                // p copies of any lift of x sum to p_multiply(x)
                let lift = WittPair::new(x as i64, 0, p).unwrap();
                let mut acc = WittPair::zero(p);
                for _ in 0..p {
                    acc = acc.add(&lift).unwrap();
                }
                assert_eq!(acc, p_multiply(x, p));
                assert_eq!(p_multiply(x, p).to_zp2(), (p * x) % (p * p));
                assert_eq!(p_divide(&p_multiply(x, p)).unwrap(), x);
                for y in 0..p {
                    assert_eq!(
                        p_multiply(x, p).add(&p_multiply(y, p)).unwrap(),
                        p_multiply((x + y) % p, p)
                    );
                    // p^2 = 0
                    assert!(p_multiply(x, p).mul(&p_multiply(y, p)).unwrap().is_zero());
                }
                // p.(x) * b = p.(x * b0)
                for b in all_elements(p) {
                    assert_eq!(
                        p_multiply(x, p).mul(&b).unwrap(),
                        p_multiply(fp::mul_mod(x, b.a0, p), p)
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_of_reduction_is_image_of_p_multiply() {
        for p in [2u64, 3, 5] {
            for w in all_elements(p) {
                if w.reduce() == 0 {
                    assert_eq!(w, p_multiply(fp::neg_mod(w.a1, p), p));
                }
            }
        }
    }

    #[test]
    fn mismatched_primes_rejected() {
        let a = WittPair::new(1, 0, 2).unwrap();
        let b = WittPair::new(1, 0, 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MismatchedPrimes(2, 3))));
        assert!(matches!(a.mul(&b), Err(Error::MismatchedPrimes(2, 3))));
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(WittPair::new(0, 0, 4).is_err());
        assert!(WittPair::new(0, 0, 1).is_err());
        assert!(WittPair::new(0, 0, 101).is_err());
    }
}
