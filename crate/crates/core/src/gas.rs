//! The four tracked pollutants and a per-gas mass vector.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul};
use std::str::FromStr;

/// A tracked pollutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gas {
    Hc,
    Co2,
    Co,
    Nox,
}

impl Gas {
    /// Column order used by every table and output file.
    pub const ALL: [Gas; 4] = [Gas::Hc, Gas::Co2, Gas::Co, Gas::Nox];

    pub fn as_str(self) -> &'static str {
        match self {
            Gas::Hc => "HC",
            Gas::Co2 => "CO2",
            Gas::Co => "CO",
            Gas::Nox => "NOX",
        }
    }

    /// Lowercase column prefix, e.g. `co2` in `lto_co2_kg`.
    pub fn column(self) -> &'static str {
        match self {
            Gas::Hc => "hc",
            Gas::Co2 => "co2",
            Gas::Co => "co",
            Gas::Nox => "nox",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Gas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gas {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HC" => Ok(Gas::Hc),
            "CO2" => Ok(Gas::Co2),
            "CO" => Ok(Gas::Co),
            "NOX" => Ok(Gas::Nox),
            other => Err(format!("unknown gas {other:?} (expected HC, CO2, CO or NOX)")),
        }
    }
}

/// Mass in kilograms for each of the four gases.
///
/// Supports component-wise addition and scaling by a scalar. Indexing by
/// [`Gas`] gives the component.
///
/// ```
/// use aeroemit::{Gas, GasVector};
///
/// let a = GasVector::new(0.1, 100.0, 1.0, 2.0);
/// let b = a * 2.0 + a;
/// assert_eq!(b[Gas::Co2], 300.0);
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GasVector([f64; 4]);

impl GasVector {
    pub const ZERO: GasVector = GasVector([0.0; 4]);

    /// Components in `HC, CO2, CO, NOX` order.
    pub const fn new(hc: f64, co2: f64, co: f64, nox: f64) -> Self {
        GasVector([hc, co2, co, nox])
    }

    pub fn from_fn(mut f: impl FnMut(Gas) -> f64) -> Self {
        GasVector(Gas::ALL.map(&mut f))
    }

    pub fn hc(&self) -> f64 {
        self.0[0]
    }

    pub fn co2(&self) -> f64 {
        self.0[1]
    }

    pub fn co(&self) -> f64 {
        self.0[2]
    }

    pub fn nox(&self) -> f64 {
        self.0[3]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gas, f64)> + '_ {
        Gas::ALL.into_iter().map(move |g| (g, self[g]))
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        GasVector(self.0.map(f))
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|v| *v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<Gas> for GasVector {
    type Output = f64;

    fn index(&self, gas: Gas) -> &f64 {
        &self.0[gas.index()]
    }
}

impl IndexMut<Gas> for GasVector {
    fn index_mut(&mut self, gas: Gas) -> &mut f64 {
        &mut self.0[gas.index()]
    }
}

impl Add for GasVector {
    type Output = GasVector;

    fn add(self, rhs: GasVector) -> GasVector {
        GasVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for GasVector {
    fn add_assign(&mut self, rhs: GasVector) {
        *self = *self + rhs;
    }
}

impl Mul<f64> for GasVector {
    type Output = GasVector;

    fn mul(self, k: f64) -> GasVector {
        self.map(|v| v * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gas_names_case_insensitively() {
        assert_eq!("nox".parse::<Gas>().unwrap(), Gas::Nox);
        assert_eq!(" CO2 ".parse::<Gas>().unwrap(), Gas::Co2);
        assert!("SO2".parse::<Gas>().is_err());
    }

    #[test]
    fn component_order_matches_gas_all() {
        let v = GasVector::new(1.0, 2.0, 3.0, 4.0);
        let collected: Vec<_> = v.iter().collect();
        assert_eq!(
            collected,
            vec![(Gas::Hc, 1.0), (Gas::Co2, 2.0), (Gas::Co, 3.0), (Gas::Nox, 4.0)]
        );
    }

    #[test]
    fn arithmetic_is_component_wise() {
        let a = GasVector::new(1.0, 2.0, 3.0, 4.0);
        let b = GasVector::new(0.5, 0.5, 0.5, 0.5);
        assert_eq!(a + b, GasVector::new(1.5, 2.5, 3.5, 4.5));
        assert_eq!(a * 0.0, GasVector::ZERO);
        let mut c = a;
        c += a;
        assert_eq!(c, a * 2.0);
    }
}
