use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use nqs_core::gadget::{
    hamming_gadget, parity_gadget, pauli_apply, postselect, reachable_sums, zero_state_example,
    Pauli, PauliString, PostselectionMask,
};
use nqs_core::model::all_configs;
use nqs_core::oracle::{
    ArFromSq, ArOracle, DenseBackend, DnfFormula, DnfState, NoisySq, NqsBackend, SqOracle,
};
use nqs_core::sampler::ChainState;
use nqs_core::{Caps, LogComplex, NqsError, NqsModel, RatioResult, SpinConfig};
use nqs_core::estimator::MomConfig;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model_from(seed: u64, n: usize, m: usize, scale: f64) -> NqsModel {
    NqsModel::random(n, m, scale, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn is_one(r: &RatioResult) -> bool {
    matches!(r, RatioResult::Value(v) if v.log_mag() == 0.0 && v.phase() == 0.0)
}

fn mask_from(seed: u64, n: usize) -> PostselectionMask {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PostselectionMask::new(
        (0..n)
            .map(|_| match rng.random_range(0..3) {
                0 => Some(1),
                1 => Some(-1),
                _ => None,
            })
            .collect(),
    )
    .unwrap()
}

fn born(model: &NqsModel) -> Result<Vec<f64>, NqsError> {
    Ok(model.state_vector(&Caps::default())?.probabilities())
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_form_equals_hidden_sum(seed: u64, n in 1usize..=8, m in 0usize..=8, idx: u64) {
        let model = model_from(seed, n, m, 1.0);
        let v = SpinConfig::from_index(idx % (1 << n), n);
        let a = model.log_amplitude(&v).unwrap();
        let b = model.log_amplitude_brute_force(&v, &Caps::default()).unwrap();
        prop_assert!(a.relative_deviation(&b) <= 1e-10);
    }
}

proptest! {
    #[test]
    fn phase_is_canonical(re in -50.0f64..50.0, im in -1e3f64..1e3, re2 in -50.0f64..50.0, im2 in -1e3f64..1e3) {
        let x = LogComplex::from_log(Complex64::new(re, im));
        let y = LogComplex::from_log(Complex64::new(re2, im2));
        prop_assert!((0.0..TAU).contains(&x.phase()));
        let p = x * y;
        prop_assert!((0.0..TAU).contains(&p.phase()));
        prop_assert!((p.log_mag() - (re + re2)).abs() < 1e-12);
        let z = LogComplex::from_complex(Complex64::new(0.0, 0.0));
        prop_assert!(z.is_zero() && z.phase() == 0.0 && z.log_mag() == f64::NEG_INFINITY);
        prop_assert!((x * z).is_zero());
    }

    #[test]
    fn ratio_antisymmetry(seed: u64, n in 1usize..=8, m in 0usize..=6, i: u64, j: u64) {
        let model = model_from(seed, n, m, 1.0);
        let vi = SpinConfig::from_index(i % (1 << n), n);
        let vj = SpinConfig::from_index(j % (1 << n), n);
        let (RatioResult::Value(a), RatioResult::Value(b)) =
            (model.amplitude_ratio(&vi, &vj).unwrap(), model.amplitude_ratio(&vj, &vi).unwrap())
        else {
            return Err(TestCaseError::fail("real-scale random model produced DIV"));
        };
        let prod = (a * b).to_complex();
        prop_assert!((prod - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn reflexive_ratio_is_exactly_one(seed: u64, n in 1usize..=6, idx: u64, invalid: bool) {
        let model = if invalid { zero_state_example(n).unwrap() } else { model_from(seed, n, 3, 2.0) };
        let v = SpinConfig::from_index(idx % (1 << n), n);
        prop_assert!(is_one(&model.amplitude_ratio(&v, &v).unwrap()));
    }

    #[test]
    fn dense_states_are_normalized(seed: u64, n in 1usize..=10, m in 0usize..=6, scale in 0.1f64..3.0) {
        let state = model_from(seed, n, m, scale).state_vector(&Caps::default()).unwrap();
        let total: f64 = state.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn perturbed_ratios_stay_in_band(seed: u64, eps in 0.0f64..=0.1, n in 1usize..=6, i: u64, j: u64) {
        let model = model_from(seed, n, 3, 1.0);
        let exact_backend = NqsBackend::new(model.clone());
        let noisy = ArFromSq::new(NoisySq::new(NqsBackend::new(model), eps, seed).unwrap());
        let vi = SpinConfig::from_index(i % (1 << n), n);
        let vj = SpinConfig::from_index(j % (1 << n), n);
        let exact = exact_backend.ratio(&vi, &vj).unwrap().value().unwrap().to_complex();
        let approx = noisy.ratio(&vi, &vj).unwrap().value().unwrap().to_complex();
        prop_assert!((approx / exact - Complex64::new(1.0, 0.0)).norm() <= 3.0 * eps + 1e-12);
    }

    #[test]
    fn real_models_have_no_zeros(seed: u64, n in 1usize..=8, m in 0usize..=8, scale in 0.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = NqsModel::random_real(n, m, scale, &mut rng);
        let amax = model.visible_bias().iter().map(|x| x.norm()).fold(0.0, f64::max);
        let bmax = model.hidden_bias().iter().map(|x| x.norm()).fold(0.0, f64::max);
        let wmax = (0..n).flat_map(|j| model.weight_row(j).to_vec()).map(|x| x.norm()).fold(0.0, f64::max);
        let floor = m as f64 * 2f64.ln() - amax * n as f64 - bmax * m as f64 - (n * m) as f64 * wmax;
        for v in all_configs(n) {
            let l = model.log_amplitude(&v).unwrap();
            prop_assert!(!l.is_zero());
            prop_assert!(l.log_mag() >= floor - 1e-9);
        }
    }

    #[test]
    fn backends_follow_ratio_conventions(seed: u64, n in 1usize..=5, i: u64, j: u64) {
        let model = model_from(seed, n, 2, 1.0);
        let dense = DenseBackend::new(model.state_vector(&Caps::default()).unwrap());
        let nqs = NqsBackend::new(model);
        let vi = SpinConfig::from_index(i % (1 << n), n);
        prop_assert!(is_one(&dense.ratio(&vi, &vi).unwrap()));
        prop_assert!(is_one(&nqs.ratio(&vi, &vi).unwrap()));

        // the formula x1 gives zero and non-zero amplitudes
        let formula = DnfFormula::from_signed(n, &[vec![1]]).unwrap();
        let dnf = DnfState::new(formula.clone());
        let via_sq = ArFromSq::new(DnfState::new(formula.clone()));
        let vj = SpinConfig::from_index(j % (1 << n), n);
        for backend in [&dnf as &dyn ArOracle, &via_sq as &dyn ArOracle] {
            let r = backend.ratio(&vi, &vj).unwrap();
            match (formula.satisfies(&vi), formula.satisfies(&vj)) {
                (_, _) if vi == vj => prop_assert!(is_one(&r)),
                (false, false) => prop_assert!(is_one(&r)),
                (true, false) => prop_assert!(r.is_div()),
                (false, true) => prop_assert!(matches!(r, RatioResult::Value(v) if v.is_zero())),
                (true, true) => prop_assert!(matches!(r, RatioResult::Value(v) if v.relative_deviation(&LogComplex::from_real(1.0)) < 1e-12)),
            }
        }
    }

    #[test]
    fn sq_and_ar_agree(seed: u64, n in 1usize..=6, i: u64, j: u64) {
        let model = model_from(seed, n, 3, 1.0);
        let backend = NqsBackend::new(model.clone());
        let vi = SpinConfig::from_index(i % (1 << n), n);
        let vj = SpinConfig::from_index(j % (1 << n), n);
        let direct = backend.ratio(&vi, &vj).unwrap().value().unwrap();
        let via = ArFromSq::new(NqsBackend::new(model)).ratio(&vi, &vj).unwrap().value().unwrap();
        prop_assert!(direct.relative_deviation(&via) <= 1e-10);
        let sq = backend.amplitude(&vi).unwrap();
        prop_assert!(sq.log_mag().is_finite());
    }

    #[test]
    fn postselection_composes(seed: u64, n in 1usize..=6, s1: u64, s2: u64) {
        let model = model_from(seed, n, 2, 1.0);
        let (r1, r2) = (mask_from(s1, n), mask_from(s2, n));
        let twice = postselect(&postselect(&model, &r1).unwrap(), &r2).unwrap();
        match r1.merge(&r2) {
            Some(merged) => {
                let once = postselect(&model, &merged).unwrap();
                prop_assert!(tv(&born(&twice).unwrap(), &born(&once).unwrap()) <= 1e-10);
            }
            None => prop_assert!(matches!(born(&twice), Err(NqsError::InvalidState(_)))),
        }
    }

    #[test]
    fn gadget_parameters_are_bounded(seed: u64, n in 1usize..=6, letters in prop::collection::vec(0usize..4, 6), k_pick: usize) {
        let model = model_from(seed, n, 2, 1.0);
        let base = model.norm_inf();
        let bound = base.max(PI) + 1e-12;
        let paulis = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let p = PauliString::new(letters[..n].iter().map(|&l| paulis[l]).collect());
        let sums = reachable_sums(n);
        let k = sums[k_pick % sums.len()];
        let outputs = [
            postselect(&model, &mask_from(seed, n)).unwrap(),
            parity_gadget(&model),
            pauli_apply(&model, &p).unwrap(),
            hamming_gadget(&model, k).unwrap().0,
        ];
        for out in &outputs {
            prop_assert!(out.norm_inf() <= bound, "{} > {}", out.norm_inf(), bound);
        }
    }

    #[test]
    fn dnf_satisfaction_matches_truth_table(
        n in 1usize..=8,
        raw in prop::collection::vec(prop::collection::vec((1i64..=8, any::<bool>()), 1..4), 1..5),
    ) {
        let terms: Vec<Vec<i64>> = raw
            .iter()
            .map(|t| {
                let mut seen = Vec::new();
                for &(var, pos) in t {
                    let var = (var - 1) % n as i64 + 1;
                    if !seen.iter().any(|&s: &i64| s.abs() == var) {
                        seen.push(if pos { var } else { -var });
                    }
                }
                seen
            })
            .collect();
        let formula = DnfFormula::from_signed(n, &terms).unwrap();
        let reparsed: DnfFormula = formula.to_string().parse().unwrap();
        for v in all_configs(n) {
            let truth = terms.iter().any(|t| {
                t.iter().all(|&l| {
                    let spin = v.get((l.unsigned_abs() - 1) as usize);
                    if l > 0 { spin == 1 } else { spin == -1 }
                })
            });
            prop_assert_eq!(formula.satisfies(&v), truth);
            prop_assert_eq!(reparsed.satisfies(&v), truth);
        }
    }

    #[test]
    fn auto_derived_budget(eps in 0.01f64..0.99, n in 1usize..=40) {
        let cfg = MomConfig::for_fidelity(eps, n).unwrap();
        prop_assert!(cfg.k >= 1 && cfg.l >= 1);
        let bound = (64.0 * n as f64 / (eps * eps)).ceil() as usize;
        prop_assert!(2 * cfg.l * cfg.k <= bound + 16 * n);
        prop_assert!(2 * cfg.l * cfg.k >= bound);
    }
}

#[test]
fn accumulator_drift_stays_small() {
    let model = model_from(7, 8, 8, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut chain = ChainState::start(&model, &mut rng).unwrap();
    let mut worst = 0.0f64;
    for step in 0..1_000_000u64 {
        chain.step(&model, &mut rng);
        if step % 10_000 == 0 {
            worst = worst.max(chain.accumulator_drift(&model));
        }
    }
    worst = worst.max(chain.accumulator_drift(&model));
    assert!(worst <= 1e-9, "drift {worst:e}");
}

#[test]
fn pauli_xx_leaves_uniform_state_invariant() {
    let model = NqsModel::zeros(2, 0);
    let out = pauli_apply(&model, &"XX".parse().unwrap()).unwrap();
    let p = born(&out).unwrap();
    assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
}
