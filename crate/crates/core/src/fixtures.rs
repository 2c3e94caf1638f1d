//! Standard test fans and ample divisors used across tests and benches.

use crate::divisor::Divisor;
use crate::error::Result;
use crate::lattice::Fan;

/// Projective space of dimension `n`: rays `e_1..e_n` and `-(e_1+..+e_n)`,
/// maximal cones all `n`-subsets of the rays.
pub fn fan_pn(n: usize) -> Result<Fan> {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(n, rays, cones)
}

pub fn fan_p1() -> Result<Fan> {
    fan_pn(1)
}

pub fn fan_p2() -> Result<Fan> {
    fan_pn(2)
}

pub fn fan_p1xp1() -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// Hirzebruch surface F_r: rays (1,0), (0,1), (-1,r), (0,-1).
pub fn fan_hirzebruch(r: i64) -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, r], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// The weighted projective plane P(1,1,2): rays (1,0), (0,1), (-1,-2).
/// One maximal cone is singular, which exercises the reflexive-forms rule.
pub fn fan_p112() -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
}

/// An ample divisor for each standard fan, as per-ray coefficients.
pub fn ample_pn(n: usize, k: i64) -> Divisor {
    let mut coeffs = vec![0; n + 1];
    coeffs[n] = k;
    Divisor::new(coeffs)
}

pub fn ample_p1xp1() -> Divisor {
    Divisor::new(vec![1, 1, 1, 1])
}

pub fn ample_hirzebruch() -> Divisor {
    // the anticanonical class, ample on F_1
    Divisor::new(vec![1, 1, 1, 1])
}

pub fn ample_p112() -> Divisor {
    // twice the first ray divisor; the generator itself is not Cartier
    Divisor::new(vec![2, 0, 0])
}
