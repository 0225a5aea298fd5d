//! Bit costs: number and digit complexity, operator costs, and the cost model
//! shared by the analyzer and the oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative, finite quantity of information measured in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn new(value: f64) -> Result<Bits> {
        if value.is_finite() && value >= 0.0 {
            Ok(Bits(value))
        } else {
            Err(Error::Domain(format!("bit cost must be finite and >= 0, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Add for Bits {
    type Output = Bits;

    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.0)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

/// Every tunable constant of the complexity calculus, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    pub copy_cost: f64,
    pub dup_cost: f64,
    pub segment_start_cost: f64,
    pub mirror_cost: f64,
    pub zero_after_nine_cost: f64,
    pub stm_capacity: usize,
    pub allowed_increments: BTreeSet<u64>,
    /// Explicit `C_{+k}` values; steps without an entry cost `log2(k + 1)`.
    pub increment_overrides: BTreeMap<u64, f64>,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            copy_cost: 1.0,
            dup_cost: 1.0,
            segment_start_cost: 3.0,
            mirror_cost: 2.0,
            zero_after_nine_cost: 3.5,
            stm_capacity: 4,
            allowed_increments: BTreeSet::from([1, 2]),
            increment_overrides: BTreeMap::new(),
        }
    }
}

impl CostModel {
    /// Default model with `C_dup` tied to `C_cop`.
    pub fn with_copy_cost(copy_cost: f64) -> Self {
        CostModel { copy_cost, dup_cost: copy_cost, ..CostModel::default() }
    }

    /// Cost of an increment by `k`, `C_{+k}`.
    pub fn increment_cost(&self, k: u64) -> f64 {
        match self.increment_overrides.get(&k) {
            Some(&c) => c,
            None => log2_rank(k),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("copy_cost", self.copy_cost),
            ("dup_cost", self.dup_cost),
            ("segment_start_cost", self.segment_start_cost),
            ("mirror_cost", self.mirror_cost),
            ("zero_after_nine_cost", self.zero_after_nine_cost),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.allowed_increments.is_empty() {
            return Err(Error::Domain("allowed_increments must not be empty".into()));
        }
        if self.allowed_increments.contains(&0) {
            return Err(Error::Domain("allowed increments must be >= 1".into()));
        }
        for (&k, &v) in &self.increment_overrides {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("increment_cost.{k} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

fn log2_rank(n: u64) -> f64 {
    (n as f64 + 1.0).log2()
}

/// Rank cost of a nonnegative integer: `log2(n + 1)` bits.
///
/// This is the raw cost with no structural shortcut; repetition and digit
/// structure are found by the analyzer.
pub fn number_complexity(n: u64) -> Bits {
    Bits(log2_rank(n))
}

/// Intrinsic cost of a single decimal digit.
///
/// A zero read right after a nine in the same digit role is perceived as the
/// successor of nine and costs `zero_after_nine_cost` instead of nothing.
pub fn digit_complexity(digit: u8, previous: Option<u8>, model: &CostModel) -> Result<Bits> {
    if digit > 9 {
        return Err(Error::Domain(format!("digit must be in 0..=9, got {digit}")));
    }
    if digit == 0 && previous == Some(9) {
        return Ok(Bits(model.zero_after_nine_cost));
    }
    Ok(Bits(log2_rank(digit as u64)))
}

/// Cost of a structure as fiber plus transfer.
pub fn aggregate_cost(fiber: Bits, transfer: Bits) -> Bits {
    fiber + transfer
}

/// Decimal digits of `n`, most significant first.
pub fn decimal_digits(n: u64) -> Vec<u8> {
    n.to_string().bytes().map(|b| b - b'0').collect()
}

/// Cost of writing `n` down digit by digit, each digit at its intrinsic
/// complexity. Never exceeds `number_complexity(n)`.
pub fn numeral_cost(n: u64) -> f64 {
    decimal_digits(n).into_iter().map(|d| log2_rank(d as u64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn number_complexity_examples() {
        assert_eq!(number_complexity(0).value(), 0.0);
        assert!((number_complexity(9).value() - 10f64.log2()).abs() < EPS);
        assert!((number_complexity(33333).value() - 15.025).abs() < 1e-3);
    }

    #[test]
    fn powers_of_two_minus_one_are_exact() {
        for k in 0..63u32 {
            let n = (1u64 << k) - 1;
            assert_eq!(number_complexity(n).value(), k as f64, "k = {k}");
        }
    }

    #[test]
    fn digit_complexity_examples() {
        let m = CostModel::default();
        assert_eq!(digit_complexity(3, None, &m).unwrap().value(), 2.0);
        assert_eq!(digit_complexity(1, None, &m).unwrap().value(), 1.0);
        assert_eq!(digit_complexity(0, Some(9), &m).unwrap().value(), 3.5);
        assert_eq!(digit_complexity(0, Some(8), &m).unwrap().value(), 0.0);
        assert!(digit_complexity(10, None, &m).is_err());
    }

    #[test]
    fn digit_complexity_bound() {
        let m = CostModel::default();
        let bound = 10f64.log2() + (m.zero_after_nine_cost - 10f64.log2()).max(0.0);
        for d in 0..=9u8 {
            for prev in std::iter::once(None).chain((0..=9u8).map(Some)) {
                let c = digit_complexity(d, prev, &m).unwrap().value();
                assert!(c <= bound + EPS);
                if !(d == 0 && prev == Some(9)) {
                    assert_eq!(c, number_complexity(d as u64).value());
                }
            }
        }
    }

    #[test]
    fn aggregate_examples() {
        assert_eq!(aggregate_cost(Bits::ZERO, Bits::ZERO), Bits::ZERO);
        let three = aggregate_cost(Bits::new(2.0).unwrap(), Bits::new(1.0).unwrap());
        assert_eq!(three.value(), 3.0);
        let m = CostModel::default();
        let c = aggregate_cost(number_complexity(9), Bits::new(m.copy_cost).unwrap());
        assert_eq!(c.value(), 10f64.log2() + m.copy_cost);
    }

    #[test]
    fn default_duplication_and_increment_costs_agree() {
        let m = CostModel::default();
        m.validate().unwrap();
        assert_eq!(m.copy_cost, m.dup_cost);
        for k in 1..20 {
            assert_eq!(m.increment_cost(k), number_complexity(k).value());
        }
    }

    #[test]
    fn validation_rejects_bad_models() {
        let m = CostModel { copy_cost: f64::NAN, ..CostModel::default() };
        assert!(m.validate().is_err());
        let mut m = CostModel::default();
        m.allowed_increments.clear();
        assert!(m.validate().is_err());
        let mut m = CostModel::default();
        m.allowed_increments.insert(0);
        assert!(m.validate().is_err());
        assert!(Bits::new(-1.0).is_err());
        assert!(Bits::new(f64::INFINITY).is_err());
    }

    #[test]
    fn numeral_cost_never_exceeds_rank_cost() {
        for n in 0..100_000u64 {
            assert!(numeral_cost(n) <= number_complexity(n).value() + EPS, "n = {n}");
        }
        assert!((numeral_cost(44) - 2.0 * 5f64.log2()).abs() < EPS);
    }
}
