//! Ray-indexed divisors and the strict-convexity ampleness test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice::Fan;

/// A divisor on a toric variety: one integer coefficient per fan ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    pub coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Divisor {
        Divisor { coeffs }
    }

    pub fn zero(fan: &Fan) -> Divisor {
        Divisor {
            coeffs: vec![0; fan.rays().len()],
        }
    }

    pub fn check_fan(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.rays().len() {
            return Err(Error::InvalidInput(format!(
                "divisor has {} coefficients but the fan has {} rays",
                self.coeffs.len(),
                fan.rays().len()
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }
}

/// Outcome of the ampleness test: either every wall inequality is strict
/// (with the per-cone linearizations as certificate), or the first failing
/// wall is reported.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmpleCertificate {
    pub ample: bool,
    /// Linearization `m_sigma` for each maximal cone, in maximal-cone order.
    pub linearizations: Vec<Vec<i64>>,
    /// `(maximal cone index, ray index)` of the first non-strict wall.
    pub failing_wall: Option<(usize, usize)>,
}

/// Decide ampleness of `D` on a complete fan by strict convexity of its
/// support function: for every maximal cone with linearization `m`, demand
/// `<m, v_rho> > -a_rho` for every ray outside the cone.
///
/// Errors with [`Error::NotCartier`] when some maximal cone admits no
/// integral linearization.
pub fn ample_check(fan: &Fan, divisor: &Divisor, seed: u64) -> Result<AmpleCertificate> {
    divisor.check_fan(fan)?;
    if !fan.is_complete(seed)? {
        return Err(Error::InvalidInput(
            "ampleness test requires a complete fan".into(),
        ));
    }
    let n = fan.rank();
    let mut linearizations = Vec::new();
    for (pos, &ci) in fan.maximal_cones().iter().enumerate() {
        let rays = fan.cone_rays(ci);
        let rows: Vec<Vec<i64>> = rays.iter().map(|&r| fan.rays()[r].clone()).collect();
        let rhs: Vec<i64> = rays.iter().map(|&r| -divisor.coeffs[r]).collect();
        let m = intmat::solve_integral(&rows, &rhs, n)
            .ok_or(Error::NotCartier { cone: pos })?;
        linearizations.push(m);
    }
    for (pos, &ci) in fan.maximal_cones().iter().enumerate() {
        let m = &linearizations[pos];
        for (ri, ray) in fan.rays().iter().enumerate() {
            if fan.cones()[ci].contains(&ri) {
                continue;
            }
            if intmat::dot(m, ray) <= -(divisor.coeffs[ri] as i128) {
                return Ok(AmpleCertificate {
                    ample: false,
                    linearizations,
                    failing_wall: Some((pos, ri)),
                });
            }
        }
    }
    Ok(AmpleCertificate {
        ample: true,
        linearizations,
        failing_wall: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hyperplane_on_p2_is_ample() {
        let fan = fixtures::fan_p2().unwrap();
        let d = Divisor::new(vec![1, 0, 0]);
        let cert = ample_check(&fan, &d, 0).unwrap();
        assert!(cert.ample);
        assert_eq!(cert.linearizations.len(), 3);
    }

    #[test]
    fn single_ruling_on_p1xp1_is_not_ample() {
        let fan = fixtures::fan_p1xp1().unwrap();
        let d = Divisor::new(vec![1, 0, 0, 0]);
        let cert = ample_check(&fan, &d, 0).unwrap();
        assert!(!cert.ample);
        assert!(cert.failing_wall.is_some());
    }

    #[test]
    fn zero_divisor_is_never_ample_on_complete_fans() {
        for fan in [
            fixtures::fan_p2().unwrap(),
            fixtures::fan_p1xp1().unwrap(),
            fixtures::fan_hirzebruch(1).unwrap(),
        ] {
            let d = Divisor::zero(&fan);
            let cert = ample_check(&fan, &d, 0).unwrap();
            assert!(!cert.ample);
        }
    }

    #[test]
    fn p112_generator_is_not_cartier_but_twice_is_ample() {
        let fan = fixtures::fan_p112().unwrap();
        let d1 = Divisor::new(vec![1, 0, 0]);
        assert!(matches!(
            ample_check(&fan, &d1, 0),
            Err(Error::NotCartier { .. })
        ));
        let d2 = fixtures::ample_p112();
        assert!(ample_check(&fan, &d2, 0).unwrap().ample);
    }

    #[test]
    fn standard_amples_certify() {
        let cases: Vec<(Fan, Divisor)> = vec![
            (fixtures::fan_p1xp1().unwrap(), fixtures::ample_p1xp1()),
            (fixtures::fan_hirzebruch(1).unwrap(), fixtures::ample_hirzebruch()),
            (fixtures::fan_pn(3).unwrap(), fixtures::ample_pn(3, 1)),
        ];
        for (fan, d) in cases {
            assert!(ample_check(&fan, &d, 0).unwrap().ample);
        }
    }
}
