//! Exact, order-independent summation.
//!
//! Every addend is quantized once to an integer count of 1e-15 units and
//! summed in `i128`. Integer addition is associative, so a total does not
//! depend on input order, grouping, or thread count, and sums over any
//! partition of the flights add up to the sum over all of them exactly.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use crate::gas::{Gas, GasVector};

const UNITS_PER_ONE: f64 = 1e15;

/// A quantized quantity (kg, seat-miles, ...) with 1e-15 resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FixedSum(i128);

impl FixedSum {
    pub const ZERO: FixedSum = FixedSum(0);

    /// Rounds `value` to the nearest unit. Panics on non-finite input.
    pub fn from_f64(value: f64) -> Self {
        assert!(value.is_finite(), "cannot accumulate non-finite value {value}");
        FixedSum((value * UNITS_PER_ONE).round() as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / UNITS_PER_ONE
    }

    pub fn units(self) -> i128 {
        self.0
    }
}

impl Add for FixedSum {
    type Output = FixedSum;

    fn add(self, rhs: FixedSum) -> FixedSum {
        FixedSum(self.0 + rhs.0)
    }
}

impl AddAssign for FixedSum {
    fn add_assign(&mut self, rhs: FixedSum) {
        self.0 += rhs.0;
    }
}

impl Sum for FixedSum {
    fn sum<I: Iterator<Item = FixedSum>>(iter: I) -> Self {
        iter.fold(FixedSum::ZERO, Add::add)
    }
}

/// [`FixedSum`] per gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GasSum([FixedSum; 4]);

impl GasSum {
    pub const ZERO: GasSum = GasSum([FixedSum::ZERO; 4]);

    pub fn get(&self, gas: Gas) -> FixedSum {
        self.0[gas as usize]
    }

    pub fn to_vector(&self) -> GasVector {
        GasVector::from_fn(|g| self.get(g).to_f64())
    }
}

impl From<GasVector> for GasSum {
    fn from(v: GasVector) -> Self {
        GasSum(Gas::ALL.map(|g| FixedSum::from_f64(v[g])))
    }
}

impl From<&GasVector> for GasSum {
    fn from(v: &GasVector) -> Self {
        GasSum::from(*v)
    }
}

impl Add for GasSum {
    type Output = GasSum;

    fn add(self, rhs: GasSum) -> GasSum {
        GasSum(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for GasSum {
    fn add_assign(&mut self, rhs: GasSum) {
        *self = *self + rhs;
    }
}

impl Sum for GasSum {
    fn sum<I: Iterator<Item = GasSum>>(iter: I) -> Self {
        iter.fold(GasSum::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_sum_is_order_dependent_but_fixed_sum_is_not() {
        let xs = [1e16, 1.0, -1e16, 0.1];
        let forward: f64 = xs.iter().sum();
        let backward: f64 = xs.iter().rev().sum();
        assert_ne!(forward, backward);
        let values = [12345.678, 0.001, 98765.4321, 3.3];
        let a: FixedSum = values.iter().map(|&v| FixedSum::from_f64(v)).sum();
        let b: FixedSum = values.iter().rev().map(|&v| FixedSum::from_f64(v)).sum();
        assert_eq!(a, b);
    }

    #[test]
    fn quantization_is_below_f64_resolution_for_flight_masses() {
        for v in [0.24071441999999998, 1334.1132, 54250.0, 16531.941176470587] {
            let back = FixedSum::from_f64(v).to_f64();
            assert!((back - v).abs() <= 1e-15 + v * 1e-15, "{v} -> {back}");
        }
    }

    #[test]
    #[should_panic]
    fn rejects_nan() {
        FixedSum::from_f64(f64::NAN);
    }
}
