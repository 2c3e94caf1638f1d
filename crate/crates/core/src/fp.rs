//! Scalar arithmetic modulo a prime. Values live in `0..p` as `u64`.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero mod the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Canonical residue of a signed integer.
#[inline]
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    let m = x.rem_euclid(p as i64);
    m as u64
}

#[inline]
pub fn reduce_i128(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}
