use proptest::prelude::*;

use cogplex_core::cost::numeral_cost;
use cogplex_core::lottery::{avoidance_probability, simulate_subjects, ChoiceModel, ExperimentConfig};
use cogplex_core::surprise::{
    expected_complexity, subjective_probability, unexpectedness, ExpectationTemplate, PoolSampler,
};
use cogplex_core::{
    analyze, evaluate, number_complexity, oracle_min_cost, replay, Bits, CostModel, Lexicon, OpKind, OperatorKind,
    SearchBudget,
};

fn seq(max_len: usize, max_token: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..=max_token, 1..=max_len)
}

fn naive_kinds(seq: &[u64]) -> Vec<OpKind> {
    let mut kinds = vec![OpKind::Instantiate(seq[0])];
    for &t in &seq[1..] {
        kinds.extend([OpKind::SegmentStart, OpKind::Instantiate(t)]);
    }
    kinds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn replay_reconstructs(s in seq(10, 150), mirror in any::<bool>()) {
        let program = analyze(&s, &CostModel::default(), mirror).unwrap();
        prop_assert_eq!(replay(&program).unwrap(), s.clone());
        prop_assert_eq!(program.reconstructs, s);
    }

    #[test]
    fn totals_and_free_flags_are_consistent(s in seq(10, 150)) {
        let program = analyze(&s, &CostModel::default(), true).unwrap();
        let sum: f64 = program.ops.iter().map(|o| o.charged_cost).sum();
        prop_assert!((sum - program.total_cost).abs() < 1e-9);
        for op in &program.ops {
            prop_assert!(op.charged_cost >= 0.0);
            if op.free {
                prop_assert_eq!(op.charged_cost, 0.0);
            }
        }
    }

    #[test]
    fn never_worse_than_naive(s in seq(10, 10_000)) {
        let model = CostModel::default();
        let cost = analyze(&s, &model, false).unwrap().total_cost;
        let naive = evaluate(&naive_kinds(&s), &model, Lexicon::Numbers).unwrap().total_cost;
        let raw: f64 = s.iter().map(|&t| number_complexity(t).value()).sum::<f64>()
            + (s.len() - 1) as f64 * model.segment_start_cost;
        prop_assert!(cost <= naive + 1e-9);
        prop_assert!(naive <= raw + 1e-9);
    }

    #[test]
    fn larger_memory_never_costs_more(s in seq(9, 60), cap in 0usize..6) {
        let small = CostModel { stm_capacity: cap, ..CostModel::default() };
        let large = CostModel { stm_capacity: cap + 1, ..CostModel::default() };
        let a = analyze(&s, &small, false).unwrap().total_cost;
        let b = analyze(&s, &large, false).unwrap().total_cost;
        prop_assert!(b <= a + 1e-9, "capacity {} -> {}: {} -> {}", cap, cap + 1, a, b);
    }

    #[test]
    fn constant_sequences_cost_the_same_for_any_repeat_count(n in 0u64..5000, m in 2usize..12) {
        let model = CostModel::default();
        let twice = analyze(&[n, n], &model, false).unwrap().total_cost;
        let many = analyze(&vec![n; m], &model, false).unwrap().total_cost;
        prop_assert!((twice - many).abs() < 1e-9);
        prop_assert!((twice - (numeral_cost(n) + model.copy_cost)).abs() < 1e-9);
    }

    #[test]
    fn subjective_probability_laws(a in -40.0f64..40.0, b in -40.0f64..40.0, x in 0.0f64..100.0) {
        let pa = subjective_probability(a);
        let pb = subjective_probability(b);
        prop_assert!((subjective_probability(a + b) - pa * pb).abs() <= 1e-12 * (pa * pb).max(1.0));
        if a < b {
            prop_assert!(pa > pb);
        }
        let bx = Bits::new(x).unwrap();
        prop_assert_eq!(unexpectedness(bx, bx), 0.0);
        prop_assert_eq!(subjective_probability(0.0), 1.0);
    }

    #[test]
    fn simpler_observation_is_more_surprising(exp in 0.0f64..60.0, lo in 0.0f64..30.0, d in 0.001f64..30.0) {
        let c_exp = Bits::new(exp).unwrap();
        let u_simple = unexpectedness(c_exp, Bits::new(lo).unwrap());
        let u_complex = unexpectedness(c_exp, Bits::new(lo + d).unwrap());
        prop_assert!(u_simple > u_complex);
        prop_assert!(subjective_probability(u_simple) < subjective_probability(u_complex));
        if u_simple >= 0.0 {
            prop_assert!(subjective_probability(u_simple) <= 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_witness_is_sound_and_bounds_the_analyzer(s in seq(5, 49), mirror in any::<bool>()) {
        let model = CostModel::default();
        let mut budget = SearchBudget::default_for(s.len());
        if mirror {
            budget = budget.with(OperatorKind::Mirror);
        }
        let (cost, witness) = oracle_min_cost(&s, &model, &budget).unwrap();
        prop_assert_eq!(replay(&witness).unwrap(), s.clone());
        prop_assert!((witness.total_cost - cost.value()).abs() < 1e-9);
        let analyzed = analyze(&s, &model, mirror).unwrap().total_cost;
        prop_assert!(cost.value() <= analyzed + 1e-9);
    }

    #[test]
    fn more_operators_never_raise_the_minimum(s in seq(5, 49)) {
        let model = CostModel::default();
        let full = SearchBudget::default_for(s.len()).with(OperatorKind::Mirror);
        let (all, _) = oracle_min_cost(&s, &model, &full).unwrap();
        for dropped in [OperatorKind::Mirror, OperatorKind::SplitDigits, OperatorKind::Increment, OperatorKind::Copy] {
            let (fewer, _) = oracle_min_cost(&s, &model, &full.clone().without(dropped)).unwrap();
            prop_assert!(all.value() <= fewer.value() + 1e-9);
        }
    }

    // Each witness is a valid program under the other model, so neither
    // minimum can exceed the other's witness re-costed.
    #[test]
    fn minimum_is_consistent_under_cost_perturbation(
        s in seq(4, 49),
        copy in 0.25f64..4.0,
        seg in 0.25f64..5.0,
        inc2 in 0.5f64..4.0,
    ) {
        let base = CostModel::default();
        let mut perturbed = CostModel { copy_cost: copy, dup_cost: copy, segment_start_cost: seg, ..base.clone() };
        perturbed.increment_overrides.insert(2, inc2);
        let budget = SearchBudget::default_for(s.len());
        let (base_min, base_witness) = oracle_min_cost(&s, &base, &budget).unwrap();
        let (pert_min, pert_witness) = oracle_min_cost(&s, &perturbed, &budget).unwrap();
        let base_under_pert = evaluate(&base_witness.kinds(), &perturbed, Lexicon::Numbers).unwrap();
        let pert_under_base = evaluate(&pert_witness.kinds(), &base, Lexicon::Numbers).unwrap();
        prop_assert!(pert_min.value() <= base_under_pert.total_cost + 1e-9);
        prop_assert!(base_min.value() <= pert_under_base.total_cost + 1e-9);
    }
}

#[test]
fn shifted_run_costs_more() {
    let model = CostModel::default();
    let low = analyze(&[1, 2, 3, 4, 5, 6], &model, false).unwrap().total_cost;
    let high = analyze(&[34, 35, 36, 37, 38, 39], &model, false).unwrap().total_cost;
    assert!(high > low);
}

#[test]
fn pool_expectation_is_reproducible() {
    let model = CostModel::default();
    let pool = |seed| ExpectationTemplate::MonteCarloPool { sampler: PoolSampler::Lottery6of49, n_samples: 300, seed };
    let a = expected_complexity(pool(11), &model).unwrap().value();
    let b = expected_complexity(pool(11), &model).unwrap().value();
    let c = expected_complexity(pool(12), &model).unwrap().value();
    assert_eq!(a.to_bits(), b.to_bits());
    assert_ne!(a.to_bits(), c.to_bits());
}

#[test]
fn histogram_counts_every_choice() {
    let model = CostModel::default();
    for (subjects, choice_model) in [
        (1, ChoiceModel::Uniform),
        (37, ChoiceModel::Uniform),
        (50, ChoiceModel::ComplexityWeighted { tau: 7.0 }),
        (20, ChoiceModel::ComplexityWeighted { tau: 40.0 }),
    ] {
        let config = ExperimentConfig { n_subjects: subjects, seed: 5, choice_model, ..ExperimentConfig::default() };
        let result = simulate_subjects(&config, &model).unwrap();
        assert_eq!(result.total_choices(), (subjects * config.n_choices_per_subject) as u64);
        assert_eq!(result.avoided_all_simplest.len(), subjects);
    }
}

#[test]
fn experiments_are_reproducible() {
    let config = ExperimentConfig { n_subjects: 40, seed: 3, ..ExperimentConfig::default() };
    let model = CostModel::default();
    assert_eq!(simulate_subjects(&config, &model).unwrap(), simulate_subjects(&config, &model).unwrap());
}

#[test]
fn uniform_subjects_avoid_at_the_combinatorial_rate() {
    let n = 20_000;
    let config = ExperimentConfig { n_subjects: n, seed: 9, choice_model: ChoiceModel::Uniform, ..ExperimentConfig::default() };
    let result = simulate_subjects(&config, &CostModel::default()).unwrap();
    let p = avoidance_probability(14, 2, 2, 1).unwrap();
    let observed = result.avoided_all_simplest.iter().filter(|&&a| a).count() as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((observed - p).abs() <= 3.0 * se, "observed {observed}, expected {p}");
}

#[test]
fn avoidance_decreases_with_subjects_and_marked_combinations() {
    for subjects in 1..40 {
        assert!(avoidance_probability(14, 2, 2, subjects + 1).unwrap() < avoidance_probability(14, 2, 2, subjects).unwrap());
    }
    for avoided in 0..12 {
        assert!(avoidance_probability(14, 2, avoided + 1, 26).unwrap() < avoidance_probability(14, 2, avoided, 26).unwrap());
    }
    assert_eq!(avoidance_probability(14, 2, 0, 26).unwrap(), 1.0);
    assert_eq!(avoidance_probability(5, 5, 0, 1).unwrap(), 1.0);
    assert!(avoidance_probability(14, 13, 2, 1).is_err());
}
