//! Lottery combinations: complexity ranking, bulletins, a simulated choice
//! experiment, and the avoidance statistic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::analyze;
use crate::cost::{Bits, CostModel};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

pub const PICK: usize = 6;
pub const MAX_NUMBER: u64 = 49;
const MAX_DRAW_RETRIES: usize = 1000;

/// Six distinct numbers in `1..=49`, stored ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LotteryCombination([u64; PICK]);

impl LotteryCombination {
    pub fn new(mut numbers: [u64; PICK]) -> Result<Self> {
        numbers.sort_unstable();
        if numbers.iter().any(|&n| !(1..=MAX_NUMBER).contains(&n)) {
            return Err(Error::Domain(format!("numbers must lie in 1..={MAX_NUMBER}: {numbers:?}")));
        }
        if numbers.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("numbers must be distinct: {numbers:?}")));
        }
        Ok(LotteryCombination(numbers))
    }

    pub fn numbers(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for LotteryCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for LotteryCombination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = s
            .split([' ', ',', '\t'])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>().map_err(|_| Error::Parse { line: 1, message: format!("bad number {t:?}") }))
            .collect::<Result<Vec<u64>>>()?;
        let numbers: [u64; PICK] = parsed
            .try_into()
            .map_err(|v: Vec<u64>| Error::Parse { line: 1, message: format!("expected {PICK} numbers, got {}", v.len()) })?;
        LotteryCombination::new(numbers).map_err(|e| Error::Parse { line: 1, message: e.to_string() })
    }
}

/// One combination per line, numbers separated by spaces. Blank lines and
/// `#` comments are skipped; errors carry the 1-based line number.
pub fn parse_combinations(text: &str) -> Result<Vec<LotteryCombination>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let combo = line.parse::<LotteryCombination>().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { line: i + 1, message },
            other => other,
        })?;
        out.push(combo);
    }
    Ok(out)
}

pub fn render_combinations(cs: &[LotteryCombination]) -> String {
    cs.iter().map(|c| format!("{c}\n")).collect()
}

/// Uniform draw of six distinct numbers.
pub fn random_combination<R: Rng + ?Sized>(rng: &mut R) -> LotteryCombination {
    let mut numbers = [0u64; PICK];
    for (slot, i) in numbers.iter_mut().zip(index::sample(rng, MAX_NUMBER as usize, PICK)) {
        *slot = i as u64 + 1;
    }
    numbers.sort_unstable();
    LotteryCombination(numbers)
}

fn combo(numbers: [u64; PICK]) -> LotteryCombination {
    LotteryCombination::new(numbers).expect("static combination is valid")
}

pub fn combination_complexity(c: &LotteryCombination, model: &CostModel) -> Result<Bits> {
    Bits::new(analyze(c.numbers(), model, false)?.total_cost)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedCombination {
    pub combination: LotteryCombination,
    pub complexity: f64,
}

/// Ascending complexity; equal costs fall back to lexicographic order.
pub fn rank_combinations(cs: &[LotteryCombination], model: &CostModel) -> Result<Vec<RankedCombination>> {
    if cs.is_empty() {
        return Err(Error::Domain("nothing to rank".into()));
    }
    let mut ranked = cs
        .iter()
        .map(|&c| Ok(RankedCombination { combination: c, complexity: combination_complexity(&c, model)?.value() }))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.complexity.total_cmp(&b.complexity).then(a.combination.cmp(&b.combination)));
    Ok(ranked)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub combination: LotteryCombination,
    /// Complexity reported for this combination by the original program.
    pub reported: u32,
}

/// The eight simple structures of the original sample with their reported
/// complexities, simplest first.
pub fn table1() -> Vec<TableRow> {
    [
        ([1, 2, 3, 4, 5, 6], 3),
        ([34, 35, 36, 37, 38, 39], 6),
        ([10, 11, 12, 44, 45, 46], 11),
        ([7, 8, 9, 37, 38, 39], 12),
        ([8, 9, 26, 27, 28, 29], 12),
        ([10, 20, 30, 31, 32, 33], 12),
        ([1, 2, 5, 6, 15, 49], 14),
        ([14, 24, 36, 38, 42, 44], 26),
    ]
    .into_iter()
    .map(|(n, reported)| TableRow { combination: combo(n), reported })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheck {
    pub rows: Vec<(TableRow, f64)>,
    pub failures: Vec<String>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compare our costs with the reported order: strict between distinct
/// reported values, within `tie_tolerance` bits among equal ones, and the two
/// simplest at least `separation` bits below everything else.
pub fn check_table1(model: &CostModel, tie_tolerance: f64, separation: f64) -> Result<TableCheck> {
    let rows: Vec<(TableRow, f64)> = table1()
        .into_iter()
        .map(|r| Ok((r, combination_complexity(&r.combination, model)?.value())))
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();

    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (r, c) in &rows {
        groups.entry(r.reported).or_default().push(*c);
    }
    for (reported, costs) in &groups {
        let (lo, hi) = min_max(costs);
        if hi - lo > tie_tolerance {
            failures.push(format!("rows reported {reported} spread {:.3} bits (> {tie_tolerance})", hi - lo));
        }
    }
    let ordered: Vec<(&u32, &Vec<f64>)> = groups.iter().collect();
    for pair in ordered.windows(2) {
        let (_, hi) = min_max(pair[0].1);
        let (lo, _) = min_max(pair[1].1);
        if hi >= lo {
            failures.push(format!("rows reported {} are not all below rows reported {}", pair[0].0, pair[1].0));
        }
    }
    for (simple, sc) in &rows[..2] {
        for (other, oc) in &rows[2..] {
            if oc - sc < separation {
                failures.push(format!("{} is only {:.3} bits below {}", simple.combination, oc - sc, other.combination));
            }
        }
    }
    Ok(TableCheck { rows, failures })
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ChoiceModel {
    Uniform,
    /// Combinations under `tau` bits feel too improbable to play; the rest
    /// get weight `min(1, 2^(C - tau))`.
    ComplexityWeighted { tau: f64 },
}

impl ChoiceModel {
    pub fn weight(&self, complexity: f64) -> f64 {
        match *self {
            ChoiceModel::Uniform => 1.0,
            ChoiceModel::ComplexityWeighted { tau } if complexity < tau => 0.0,
            ChoiceModel::ComplexityWeighted { tau } => (complexity - tau).exp2().min(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub fixed_combinations: Vec<LotteryCombination>,
    pub n_random: usize,
    pub n_choices_per_subject: usize,
    pub n_subjects: usize,
    pub seed: u64,
    pub choice_model: ChoiceModel,
}

/// The eight tabulated structures, the random-looking `6 17 21 28 37 42`
/// offered to every subject, and one filler standing in for the fixed
/// combination that was never published.
pub fn default_fixed_combinations() -> Vec<LotteryCombination> {
    let mut fixed: Vec<LotteryCombination> = table1().into_iter().map(|r| r.combination).collect();
    fixed.push(combo([6, 17, 21, 28, 37, 42]));
    fixed.push(combo([5, 11, 22, 27, 33, 46]));
    fixed
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            fixed_combinations: default_fixed_combinations(),
            n_random: 4,
            n_choices_per_subject: 2,
            n_subjects: 26,
            seed: 0,
            choice_model: ChoiceModel::ComplexityWeighted { tau: 7.0 },
        }
    }
}

impl ExperimentConfig {
    pub fn bulletin_size(&self) -> usize {
        self.fixed_combinations.len() + self.n_random
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_choices_per_subject > self.bulletin_size() {
            return Err(Error::Domain(format!(
                "{} choices from a bulletin of {}",
                self.n_choices_per_subject,
                self.bulletin_size()
            )));
        }
        let distinct: BTreeSet<_> = self.fixed_combinations.iter().collect();
        if distinct.len() != self.fixed_combinations.len() {
            return Err(Error::Domain("fixed combinations must be distinct".into()));
        }
        if let ChoiceModel::ComplexityWeighted { tau } = self.choice_model {
            if !tau.is_finite() {
                return Err(Error::Domain("tau must be finite".into()));
            }
        }
        Ok(())
    }
}

fn draw_bulletin<R: Rng + ?Sized>(config: &ExperimentConfig, rng: &mut R) -> Result<Vec<LotteryCombination>> {
    let mut bulletin = config.fixed_combinations.clone();
    let mut seen: BTreeSet<LotteryCombination> = bulletin.iter().copied().collect();
    for _ in 0..config.n_random {
        let fresh = (0..MAX_DRAW_RETRIES)
            .map(|_| random_combination(rng))
            .find(|c| !seen.contains(c))
            .ok_or_else(|| Error::Generation(format!("no fresh combination after {MAX_DRAW_RETRIES} draws")))?;
        seen.insert(fresh);
        bulletin.push(fresh);
    }
    bulletin.shuffle(rng);
    Ok(bulletin)
}

/// The bulletin shown to subject 0 of an experiment with this config.
pub fn generate_bulletin(config: &ExperimentConfig) -> Result<Vec<LotteryCombination>> {
    config.validate()?;
    draw_bulletin(config, &mut stream_rng(config.seed, 0))
}

/// `k` distinct indices, each draw proportional to the remaining weights;
/// `None` weights mean uniform.
fn pick_without_replacement<R: Rng + ?Sized>(weights: Option<&[f64]>, n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    match weights {
        None => index::sample(rng, n, k).into_vec(),
        Some(w) => {
            let mut w = w.to_vec();
            let mut picked = Vec::with_capacity(k);
            for _ in 0..k {
                let total: f64 = w.iter().sum();
                let mut r = rng.random::<f64>() * total;
                let mut choice = None;
                for (i, &wi) in w.iter().enumerate() {
                    if wi <= 0.0 {
                        continue;
                    }
                    choice = Some(i);
                    if r < wi {
                        break;
                    }
                    r -= wi;
                }
                let i = choice.expect("positive total weight");
                picked.push(i);
                w[i] = 0.0;
            }
            picked
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubjectChoice {
    /// Positions in this subject's shuffled bulletin.
    pub bulletin_indices: Vec<usize>,
    pub chosen: Vec<LotteryCombination>,
    pub complexities: Vec<f64>,
    /// Fewer positive weights than choices; this subject chose uniformly.
    pub uniform_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub per_subject_choices: Vec<SubjectChoice>,
    /// Floor of complexity in bits -> number of choices.
    pub histogram: BTreeMap<i64, u64>,
    /// Per subject: none of the two simplest fixed combinations was chosen.
    pub avoided_all_simplest: Vec<bool>,
    pub uniform_fallbacks: usize,
}

impl ExperimentResult {
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin,count\n");
        for (bin, count) in &self.histogram {
            out.push_str(&format!("{bin},{count}\n"));
        }
        out
    }

    pub fn total_choices(&self) -> u64 {
        self.histogram.values().sum()
    }
}

pub fn simulate_subjects(config: &ExperimentConfig, model: &CostModel) -> Result<ExperimentResult> {
    config.validate()?;
    let fixed_costs: BTreeMap<LotteryCombination, f64> = config
        .fixed_combinations
        .iter()
        .map(|c| Ok((*c, combination_complexity(c, model)?.value())))
        .collect::<Result<_>>()?;
    let mut by_cost: Vec<(&LotteryCombination, &f64)> = fixed_costs.iter().collect();
    by_cost.sort_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(b.0)));
    let simplest: BTreeSet<LotteryCombination> = by_cost.iter().take(2).map(|(c, _)| **c).collect();

    let subjects = (0..config.n_subjects as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(config.seed, j);
            let bulletin = draw_bulletin(config, &mut rng)?;
            let costs = bulletin
                .iter()
                .map(|c| match fixed_costs.get(c) {
                    Some(&v) => Ok(v),
                    None => combination_complexity(c, model).map(Bits::value),
                })
                .collect::<Result<Vec<f64>>>()?;
            let weights: Vec<f64> = costs.iter().map(|&c| config.choice_model.weight(c)).collect();
            let positive = weights.iter().filter(|&&w| w > 0.0).count();
            let uniform_fallback = positive < config.n_choices_per_subject;
            let indices = match (config.choice_model, uniform_fallback) {
                (ChoiceModel::Uniform, _) | (_, true) => {
                    pick_without_replacement(None, bulletin.len(), config.n_choices_per_subject, &mut rng)
                }
                _ => pick_without_replacement(Some(&weights), bulletin.len(), config.n_choices_per_subject, &mut rng),
            };
            Ok(SubjectChoice {
                chosen: indices.iter().map(|&i| bulletin[i]).collect(),
                complexities: indices.iter().map(|&i| costs[i]).collect(),
                bulletin_indices: indices,
                uniform_fallback,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut histogram = BTreeMap::new();
    for s in &subjects {
        for &c in &s.complexities {
            *histogram.entry(c.floor() as i64).or_insert(0) += 1;
        }
    }
    let avoided_all_simplest = subjects.iter().map(|s| s.chosen.iter().all(|c| !simplest.contains(c))).collect();
    let uniform_fallbacks = subjects.iter().filter(|s| s.uniform_fallback).count();
    Ok(ExperimentResult { per_subject_choices: subjects, histogram, avoided_all_simplest, uniform_fallbacks })
}

fn check_avoidance_args(n_total: usize, n_choices: usize, n_avoided: usize) -> Result<()> {
    if n_avoided + n_choices > n_total {
        return Err(Error::Domain(format!(
            "cannot choose {n_choices} while avoiding {n_avoided} of {n_total}"
        )));
    }
    if n_total > 100 {
        return Err(Error::Domain("bulletins larger than 100 are not supported".into()));
    }
    Ok(())
}

/// `C(n_total - n_avoided, n_choices) / C(n_total, n_choices)` as a reduced
/// fraction: the chance one uniform subject avoids every marked combination.
pub fn avoidance_ratio(n_total: usize, n_choices: usize, n_avoided: usize) -> Result<(u128, u128)> {
    check_avoidance_args(n_total, n_choices, n_avoided)?;
    let num = num_integer::binomial((n_total - n_avoided) as u128, n_choices as u128);
    let den = num_integer::binomial(n_total as u128, n_choices as u128);
    let g = num_integer::gcd(num, den);
    Ok((num / g, den / g))
}

/// Probability that `n_subjects` independent uniform choosers all avoid the
/// `n_avoided` marked combinations.
pub fn avoidance_probability(n_total: usize, n_choices: usize, n_avoided: usize, n_subjects: usize) -> Result<f64> {
    let (num, den) = avoidance_ratio(n_total, n_choices, n_avoided)?;
    let exp = i32::try_from(n_subjects).map_err(|_| Error::Domain("too many subjects".into()))?;
    Ok((num as f64 / den as f64).powi(exp))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvoidanceEstimate {
    pub replications: u64,
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
}

const BATCH: u64 = 10_000;

/// Monte-Carlo estimate of [`avoidance_probability`]: in each replication
/// `n_subjects` uniform choosers pick `n_choices` of `n_total`; a hit is a
/// replication where nobody picked one of the first `n_avoided`.
pub fn estimate_avoidance(
    n_total: usize,
    n_choices: usize,
    n_avoided: usize,
    n_subjects: usize,
    replications: u64,
    seed: u64,
) -> Result<AvoidanceEstimate> {
    check_avoidance_args(n_total, n_choices, n_avoided)?;
    if replications == 0 {
        return Err(Error::Domain("need at least one replication".into()));
    }
    let batches = replications.div_ceil(BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b);
            let size = BATCH.min(replications - b * BATCH);
            (0..size)
                .filter(|_| {
                    (0..n_subjects).all(|_| {
                        pick_without_replacement(None, n_total, n_choices, &mut rng).iter().all(|&i| i >= n_avoided)
                    })
                })
                .count() as u64
        })
        .sum();
    let p = hits as f64 / replications as f64;
    Ok(AvoidanceEstimate {
        replications,
        hits,
        estimate: p,
        std_error: (p * (1.0 - p) / replications as f64).sqrt(),
    })
}
