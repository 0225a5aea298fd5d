//! Expected complexity, unexpectedness `U = C_exp - C_obs`, subjective
//! probability `2^-U`, and algorithmic probability `2^-C`.

use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::{analyze, analyze_with, AnalyzeOptions};
use crate::cost::{decimal_digits, Bits, CostModel};
use crate::error::{Error, Result};
use crate::lottery::random_combination;
use crate::machine::Lexicon;
use crate::program::DescriptionProgram;
use crate::rng::stream_rng;

/// Population whose mean analyzer cost serves as an expected complexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolSampler {
    /// Uniform 6-of-49 lottery combinations, ascending.
    Lottery6of49,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectationTemplate {
    /// A typical `k`-digit number: copy an uninstantiated digit, then pick
    /// each of the `k` digits among ten.
    KDigitNumber(u32),
    MonteCarloPool { sampler: PoolSampler, n_samples: usize, seed: u64 },
    Fixed(f64),
}

pub fn expected_complexity(template: ExpectationTemplate, model: &CostModel) -> Result<Bits> {
    match template {
        ExpectationTemplate::KDigitNumber(0) => Err(Error::Domain("a number has at least one digit".into())),
        ExpectationTemplate::KDigitNumber(k) => Bits::new(model.copy_cost + k as f64 * 10f64.log2()),
        ExpectationTemplate::MonteCarloPool { n_samples: 0, .. } => {
            Err(Error::Domain("a Monte-Carlo pool needs at least one sample".into()))
        }
        ExpectationTemplate::MonteCarloPool { sampler: PoolSampler::Lottery6of49, n_samples, seed } => {
            let costs = (0..n_samples as u64)
                .into_par_iter()
                .map(|i| {
                    let combo = random_combination(&mut stream_rng(seed, i));
                    analyze(combo.numbers(), model, false).map(|p| p.total_cost)
                })
                .collect::<Result<Vec<f64>>>()?;
            // summed in index order so the mean does not depend on scheduling
            Bits::new(costs.iter().sum::<f64>() / n_samples as f64)
        }
        ExpectationTemplate::Fixed(bits) => Bits::new(bits),
    }
}

/// `c_exp - c_obs`; negative when the object is more complex than expected.
pub fn unexpectedness(c_exp: Bits, c_obs: Bits) -> f64 {
    c_exp.value() - c_obs.value()
}

/// `2^-u`. Not clamped: a negative `u` yields a value above 1.
pub fn subjective_probability(u: f64) -> f64 {
    (-u).exp2()
}

/// `2^-c`, with `c` standing in for Kolmogorov complexity. Simple objects get
/// high values here, the opposite of how improbable they feel.
pub fn algorithmic_probability(c: Bits) -> f64 {
    (-c.value()).exp2()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurpriseReport {
    pub c_exp: f64,
    pub c_obs: f64,
    pub u: f64,
    pub p: f64,
    pub p_exceeds_one: bool,
    /// Trace of the structured description behind `c_obs`, absent when no
    /// structure beats the typical process.
    pub witness: Option<String>,
}

impl SurpriseReport {
    pub fn new(c_exp: Bits, c_obs: Bits, witness: Option<&DescriptionProgram>) -> Self {
        let u = unexpectedness(c_exp, c_obs);
        let p = subjective_probability(u);
        SurpriseReport {
            c_exp: c_exp.value(),
            c_obs: c_obs.value(),
            u,
            p,
            p_exceeds_one: p > 1.0,
            witness: witness.map(DescriptionProgram::trace),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Observed complexity of a number read as a digit string.
///
/// The typical process (copy an uninstantiated digit, then pick every digit
/// among ten) is always available; a structured description of the digits,
/// each fresh digit again picked among ten, replaces it when cheaper.
pub fn number_observed_complexity(n: u64, model: &CostModel) -> Result<(Bits, Option<DescriptionProgram>)> {
    let digits: Vec<u64> = decimal_digits(n).into_iter().map(u64::from).collect();
    let typical = expected_complexity(ExpectationTemplate::KDigitNumber(digits.len() as u32), model)?;
    let opts = AnalyzeOptions { lexicon: Lexicon::UniformDigits, split_digits: false, mirror: false };
    let structured = analyze_with(&digits, model, opts)?;
    if structured.total_cost < typical.value() {
        Ok((Bits::new(structured.total_cost)?, Some(structured)))
    } else {
        Ok((typical, None))
    }
}

pub fn surprise_number(n: u64, template: ExpectationTemplate, model: &CostModel) -> Result<SurpriseReport> {
    let c_exp = expected_complexity(template, model)?;
    let (c_obs, witness) = number_observed_complexity(n, model)?;
    Ok(SurpriseReport::new(c_exp, c_obs, witness.as_ref()))
}

pub fn surprise_sequence(seq: &[u64], template: ExpectationTemplate, model: &CostModel) -> Result<SurpriseReport> {
    let c_exp = expected_complexity(template, model)?;
    let program = analyze(seq, model, false)?;
    Ok(SurpriseReport::new(c_exp, Bits::new(program.total_cost)?, Some(&program)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: f64) -> Bits {
        Bits::new(v).unwrap()
    }

    #[test]
    fn kdigit_template() {
        let m = CostModel::default();
        let five = expected_complexity(ExpectationTemplate::KDigitNumber(5), &m).unwrap().value();
        assert!((five - 17.61).abs() < 0.01);
        let one = expected_complexity(ExpectationTemplate::KDigitNumber(1), &m).unwrap().value();
        assert_eq!(one, m.copy_cost + 10f64.log2());
        assert!(expected_complexity(ExpectationTemplate::KDigitNumber(0), &m).is_err());
    }

    #[test]
    fn pool_template_errors_and_determinism() {
        let m = CostModel::default();
        let t = ExpectationTemplate::MonteCarloPool { sampler: PoolSampler::Lottery6of49, n_samples: 0, seed: 1 };
        assert!(expected_complexity(t, &m).is_err());
        let t = ExpectationTemplate::MonteCarloPool { sampler: PoolSampler::Lottery6of49, n_samples: 200, seed: 3 };
        let a = expected_complexity(t, &m).unwrap();
        let c = expected_complexity(t, &m).unwrap();
        assert_eq!(a.value().to_bits(), c.value().to_bits());
    }

    #[test]
    fn unexpectedness_examples() {
        assert_eq!(unexpectedness(b(4.2), b(4.2)), 0.0);
        assert_eq!(unexpectedness(b(3.0), b(5.0)), -2.0);
        let m = CostModel::default();
        let c_exp = b(m.copy_cost + 5.0 * 10f64.log2());
        let c_obs = b(10f64.log2() + m.copy_cost);
        assert!((unexpectedness(c_exp, c_obs) - 4.0 * 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn subjective_probability_examples() {
        assert_eq!(subjective_probability(0.0), 1.0);
        assert_eq!(subjective_probability(-1.0), 2.0);
        let p = subjective_probability(4.0 * 10f64.log2());
        assert!((p - 1e-4).abs() / 1e-4 < 1e-12);
    }

    #[test]
    fn algorithmic_probability_examples() {
        assert_eq!(algorithmic_probability(Bits::ZERO), 1.0);
        assert_eq!(algorithmic_probability(b(10.0)), 2f64.powi(-10));
        let c = analyze(&[3, 3, 3, 3, 3], &CostModel::default(), false).unwrap().total_cost;
        assert_eq!(algorithmic_probability(b(c)), 0.125);
    }

    #[test]
    fn numbers_33333_and_28561() {
        let m = CostModel::default();
        let r = surprise_number(33333, ExpectationTemplate::KDigitNumber(5), &m).unwrap();
        assert!((r.u - 4.0 * 10f64.log2()).abs() < 1e-9);
        assert!(r.witness.is_some());
        let r = surprise_number(28561, ExpectationTemplate::KDigitNumber(5), &m).unwrap();
        assert_eq!(r.u, 0.0);
        assert_eq!(r.p, 1.0);
        assert!(r.witness.is_none());
    }

    #[test]
    fn negative_surprise_is_flagged() {
        let r = SurpriseReport::new(b(3.0), b(5.0), None);
        assert_eq!(r.p, 4.0);
        assert!(r.p_exceeds_one);
        let json = r.to_json();
        for key in ["\"c_exp\"", "\"c_obs\"", "\"u\"", "\"p\""] {
            assert!(json.contains(key));
        }
    }
}
