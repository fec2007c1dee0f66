//! CO₂-equivalent conversion.

use serde::{Deserialize, Serialize};

use crate::gas::{Gas, GasVector};

/// Dimensionless multipliers converting each gas to CO₂-equivalent mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Co2eFactors {
    pub co2: f64,
    pub co: f64,
    pub hc: f64,
    pub nox: f64,
}

impl Default for Co2eFactors {
    fn default() -> Self {
        Co2eFactors {
            co2: 1.0,
            co: 1.57,
            hc: 84.0,
            nox: 298.0,
        }
    }
}

impl Co2eFactors {
    pub fn factor(&self, gas: Gas) -> f64 {
        match gas {
            Gas::Hc => self.hc,
            Gas::Co2 => self.co2,
            Gas::Co => self.co,
            Gas::Nox => self.nox,
        }
    }

    /// Every factor must be finite and strictly positive.
    pub fn validate(&self) -> Result<(), String> {
        for gas in Gas::ALL {
            let f = self.factor(gas);
            if !(f.is_finite() && f > 0.0) {
                return Err(format!("CO2e factor for {gas} must be > 0, got {f}"));
            }
        }
        Ok(())
    }

    /// Each gas's mass converted to CO₂e, component-wise.
    pub fn weigh(&self, v: &GasVector) -> GasVector {
        GasVector::from_fn(|g| v[g] * self.factor(g))
    }
}

/// CO₂-equivalent mass of a gas vector:
/// `co2 + 1.57·co + 84·hc + 298·nox` under the default factors.
///
/// ```
/// use aeroemit::emissions::{co2e, Co2eFactors};
/// use aeroemit::GasVector;
///
/// let pure_co2 = GasVector::new(0.0, 100.0, 0.0, 0.0);
/// assert_eq!(co2e(&pure_co2, &Co2eFactors::default()), 100.0);
/// ```
pub fn co2e(v: &GasVector, f: &Co2eFactors) -> f64 {
    f.co2 * v.co2() + f.co * v.co() + f.hc * v.hc() + f.nox * v.nox()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_is_zero() {
        assert_eq!(co2e(&GasVector::ZERO, &Co2eFactors::default()), 0.0);
    }

    #[test]
    fn weigh_matches_scalar_form() {
        let f = Co2eFactors::default();
        let v = GasVector::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(f.weigh(&v), GasVector::new(84.0, 1.0, 1.57, 298.0));
        assert!((co2e(&v, &f) - (1.0 + 1.57 + 84.0 + 298.0)).abs() < 1e-12);
    }

    #[test]
    fn validate_rejects_non_positive() {
        assert!(Co2eFactors::default().validate().is_ok());
        let bad = Co2eFactors {
            hc: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
