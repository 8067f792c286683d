//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process fails if any does.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use nqs_core::disttest::{test_uniformity, test_uniformity_fast, TestVerdict, UniformityConfig};
use nqs_core::estimator::{
    draw_g, expectation, fidelity, fidelity_enumerated, fidelity_exhaustive, MomConfig,
    SparseObservable,
};
use nqs_core::gadget::{
    parity_gadget, pauli_apply, postselect, zero_state_example, Pauli, PauliString,
    PostselectionMask,
};
use nqs_core::model::all_configs;
use nqs_core::oracle::{
    ArOracle, DenseBackend, DnfFormula, DnfState, NqsBackend, PcondOnly, SampOracle,
};
use nqs_core::sampler::{empirical_tv, metropolis_chain, transition_matrix, ChainConfig};
use nqs_core::{Caps, DenseState, NqsError, NqsModel, SpinConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dense(model: &NqsModel) -> Result<DenseState, String> {
    ok(model.state_vector(&Caps::default()))
}

fn c1_product_form() -> Outcome {
    let start = Instant::now();
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=8);
        let model = NqsModel::random(n, m, 3.0, &mut rng);
        ensure!(model.norm_inf() <= 3.0, "parameter bound exceeded");
        for _ in 0..4 {
            let v = SpinConfig::uniform(n, &mut rng);
            let product = ok(model.log_amplitude(&v))?;
            let brute = ok(model.log_amplitude_brute_force(&v, &caps))?;
            let dev = if product.is_zero() && brute.is_zero() {
                0.0
            } else {
                product.relative_deviation(&brute)
            };
            worst = worst.max(dev);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(worst <= 1e-10, "max relative deviation {worst:e}");
    ensure!(secs <= 10.0, "took {secs:.1} s");
    Ok(format!("1000 models, 4000 configs, max rel dev {worst:.2e}, {secs:.2} s"))
}

fn conditional(p: &[f64], n: usize, mask: &PostselectionMask) -> Vec<f64> {
    let mut q: Vec<f64> = all_configs(n)
        .zip(p)
        .map(|(v, &p)| if mask.contains(&v) { p } else { 0.0 })
        .collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= total);
    q
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

fn c2_postselection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(0..=4);
        let model = NqsModel::random(n, m, 1.0, &mut rng);
        let mask = PostselectionMask::new(
            (0..n)
                .map(|_| match rng.random_range(0..3) {
                    0 => Some(1),
                    1 => Some(-1),
                    _ => None,
                })
                .collect(),
        )
        .unwrap();
        let exact = conditional(&dense(&model)?.probabilities(), n, &mask);
        let gadget = ok(postselect(&model, &mask))?;
        ensure!(gadget.m() == m + mask.fixed_count(), "unexpected node count");
        worst = worst.max(tv(&dense(&gadget)?.probabilities(), &exact));
    }
    ensure!(worst <= 1e-10, "max TV {worst:e}");
    Ok(format!("200 (model, mask) pairs, max TV {worst:.2e}"))
}

fn c3_invalid_state() -> Outcome {
    let model = ok(zero_state_example(1))?;
    ensure!(model.n() == 1 && model.m() == 2, "expected three nodes");
    ensure!(model.norm_inf() <= PI, "parameter magnitude {}", model.norm_inf());
    for v in all_configs(1) {
        ensure!(ok(model.log_amplitude(&v))?.is_zero(), "f({v}) is not an exact zero");
    }
    let sv = model.state_vector(&Caps::default());
    ensure!(matches!(sv, Err(NqsError::InvalidState(_))), "state_vector gave {sv:?}");
    let chain = metropolis_chain(&model, ChainConfig::with_seed(3));
    ensure!(
        matches!(chain, Err(NqsError::ZeroSupportStart { .. })),
        "metropolis_chain did not fail with ZeroSupportStart"
    );
    Ok("both amplitudes exactly zero; InvalidState; ZeroSupportStart".into())
}

fn c4_parity() -> Outcome {
    let model = parity_gadget(&NqsModel::zeros(6, 0));
    let p = dense(&model)?.probabilities();
    let support: Vec<usize> = (0..64).filter(|&i| p[i] > 0.0).collect();
    let odd: Vec<usize> = all_configs(6)
        .filter(|v| v.down_count() % 2 == 1)
        .map(|v| v.index() as usize)
        .collect();
    ensure!(support == odd, "support differs from the 32 odd configurations");
    ensure!(support.len() == 32, "support size {}", support.len());
    let spread = support
        .iter()
        .map(|&i| (p[i] - 1.0 / 32.0).abs())
        .fold(0.0, f64::max);
    ensure!(spread <= 1e-12, "non-uniform on support: {spread:e}");
    Ok(format!("support = 32 odd configs, max |p - 1/32| = {spread:.1e}"))
}

fn c5_fidelity() -> Outcome {
    let start = Instant::now();
    let cfg = ok(MomConfig::for_fidelity(0.1, 5))?;
    ensure!(cfg.k == 400 && cfg.l == 40, "k = {}, l = {}", cfg.k, cfg.l);
    ensure!(2 * cfg.k * cfg.l == 32_000, "budget {}", 2 * cfg.k * cfg.l);
    let runs: Vec<Result<(f64, u64), String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
            let a = NqsModel::random(5, 5, 0.5, &mut rng);
            let b = NqsModel::random(5, 5, 0.5, &mut rng);
            let exact = fidelity_exhaustive(&dense(&a)?, &dense(&b)?).map_err(|e| e.to_string())?;
            let (psi, phi) = (NqsBackend::new(a), NqsBackend::new(b));
            let report = ok(fidelity(&psi, &phi, 0.1, 5, &mut rng))?;
            ensure!(report.discards == 0, "{} discards", report.discards);
            Ok(((report.estimate - exact).abs(), report.queries.ar_ratio_queries))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let secs = start.elapsed().as_secs_f64();
    let good = runs.iter().filter(|(err, _)| *err <= 0.1).count();
    let worst = runs.iter().map(|(e, _)| *e).fold(0.0, f64::max);
    ensure!(
        runs.iter().all(|&(_, q)| q == 32_000),
        "AR query counts differ from 32000"
    );
    ensure!(good >= 95, "{good}/100 runs within 0.1");
    ensure!(secs <= 60.0, "took {secs:.1} s");
    Ok(format!(
        "k=400, l=40, 32000 AR queries per run; {good}/100 within 0.1 (max err {worst:.3}); {secs:.1} s"
    ))
}

fn c6_orthogonal_pair() -> Outcome {
    // ψ ∝ (1, 1) from θ = 0 and φ ∝ (1, -1) from one Z node
    let psi = NqsBackend::new(NqsModel::zeros(1, 0));
    let phi = NqsBackend::new(ok(pauli_apply(&NqsModel::zeros(1, 0), &"Z".parse().unwrap()))?);
    let born = [0.5, 0.5];
    let f = ok(fidelity_enumerated(&psi, &phi, &born, &born))?;
    let queries = psi.stats().snapshot().ar_ratio_queries + phi.stats().snapshot().ar_ratio_queries;
    ensure!(f == 0.0, "fidelity {f:e}");
    ensure!(queries == 8, "{queries} AR queries");
    for i in all_configs(1) {
        for j in all_configs(1) {
            let r_psi = ok(psi.pair_bias(&i, &j))?;
            let r_phi = ok(phi.pair_bias(&i, &j))?;
            ensure!(r_psi == 0.5 && r_phi == 0.5, "bias ({r_psi}, {r_phi}) at ({i}, {j})");
        }
    }
    Ok("fidelity exactly 0 with 8 AR queries; every PCOND bias 1/2 on both".into())
}

fn c7_observable() -> Outcome {
    let obs = ok(SparseObservable::from_pauli(&"XIII".parse().unwrap()))?;
    ensure!(obs.row_sparsity() == 1, "row sparsity {}", obs.row_sparsity());
    let budget = (32.0 * 1.0 * 4.0 / (0.1f64 * 0.1) - 1e-9).ceil() as u64;
    let runs: Vec<Result<(f64, u64, u64), String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
            let model = NqsModel::random(4, 4, 0.5, &mut rng);
            let exact = ok(obs.expectation_exact(&dense(&model)?))?.re;
            let psi = NqsBackend::new(model);
            let report = ok(expectation(&psi, &obs, 0.1, 4, &mut rng))?;
            let expected = (report.k * report.l) as u64 + report.discards;
            ensure!(
                report.queries.ar_ratio_queries == expected,
                "AR queries {} vs s*k*l + discards = {expected}",
                report.queries.ar_ratio_queries
            );
            Ok(((report.estimate - exact).abs(), report.queries.ar_ratio_queries, report.discards))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let good = runs.iter().filter(|r| r.0 <= 0.1).count();
    let max_q = runs.iter().map(|r| r.1).max().unwrap_or(0);
    ensure!(runs.iter().all(|r| r.2 == 0), "discards occurred");
    ensure!(max_q <= budget, "{max_q} AR queries exceeds {budget}");
    ensure!(good >= 95, "{good}/100 runs within 0.1");
    Ok(format!("{good}/100 within 0.1; {max_q} AR queries per run (budget {budget})"))
}

fn c8_second_moment() -> Outcome {
    let results: Vec<Result<f64, String>> = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
            let psi = DenseBackend::new(dense(&NqsModel::random(4, 4, 0.5, &mut rng))?);
            let phi = DenseBackend::new(dense(&NqsModel::random(4, 4, 0.5, &mut rng))?);
            let mut sum = 0.0;
            for _ in 0..100_000 {
                let g = ok(draw_g(&psi, &phi, &mut rng))?.ok_or("DIV draw")?;
                sum += g.value.norm_sqr();
            }
            Ok(sum / 1e5)
        })
        .collect();
    let means = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    ensure!(
        means.iter().all(|m| (0.9..=1.1).contains(m)),
        "means {means:?}"
    );
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(0.0, f64::max);
    Ok(format!("10 pairs, mean |G|^2 in [{lo:.4}, {hi:.4}]"))
}

fn c9_dnf_sampler() -> Outcome {
    let formula = DnfFormula::from_signed(3, &[vec![1, 2], vec![-1, 3]]).unwrap();
    // independent truth-table enumeration of the satisfying set
    let satisfying: Vec<u64> = (0..8u64)
        .filter(|&idx| {
            let x: Vec<bool> = (0..3).map(|k| (idx >> (2 - k)) & 1 == 0).collect();
            (x[0] && x[1]) || (!x[0] && x[2])
        })
        .collect();
    ensure!(satisfying.len() == 4, "Z = {}", satisfying.len());
    let state = DnfState::new(formula);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut counts = [0u64; 8];
    for _ in 0..100_000 {
        let v = ok(state.samp_query(&mut rng))?;
        ensure!(satisfying.contains(&v.index()), "{v} does not satisfy the formula");
        counts[v.index() as usize] += 1;
    }
    let expected = 100_000.0 / 4.0;
    let chi2: f64 = satisfying
        .iter()
        .map(|&i| (counts[i as usize] as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new(3.0).unwrap().inverse_cdf(0.99);
    ensure!(chi2 < critical, "chi-square {chi2:.3} >= {critical:.3}");
    Ok(format!("Z=4, all draws satisfy, chi-square {chi2:.3} < {critical:.3} (3 dof, 0.01)"))
}

fn c10_metropolis() -> Outcome {
    let tvs: Vec<Result<f64, String>> = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let model = NqsModel::random(4, 4, 1.0, &mut rng);
            let exact = dense(&model)?.probabilities();
            let cfg = ChainConfig {
                burn_in: 1000,
                ..ChainConfig::with_seed(seed)
            };
            let samples: Vec<_> = ok(metropolis_chain(&model, cfg))?.take(1_000_000).collect();
            Ok(empirical_tv(&samples, &exact))
        })
        .collect();
    let tvs = tvs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let worst = tvs.iter().copied().fold(0.0, f64::max);
    ensure!(worst <= 0.05, "TVs {tvs:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let model = NqsModel::random(3, 3, 1.0, &mut rng);
    let p = dense(&model)?.probabilities();
    let t = ok(transition_matrix(&model))?;
    let mut balance = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            balance = balance.max((p[a] * t[a][b] - p[b] * t[b][a]).abs());
        }
    }
    ensure!(balance <= 1e-12, "detailed balance violation {balance:e}");
    Ok(format!("max TV {worst:.4} over 10 models; detailed balance {balance:.1e} at n=3"))
}

fn peaked_model(n: usize) -> NqsModel {
    let mut a = vec![c(0.0, 0.0); n];
    a[0] = c(5.0, 0.0);
    NqsModel::new(a, vec![c(0.0, 0.0)], vec![vec![c(0.0, 0.0)]; n]).unwrap()
}

fn budget_matches(v: &TestVerdict, t: u64, k: u64, pcond: bool) -> bool {
    let used = if pcond {
        v.queries_used.pcond_pair_queries
    } else {
        v.queries_used.ar_ratio_queries
    };
    used == v.pairs_evaluated * k && (!v.accepted() || v.pairs_evaluated == t)
}

fn c11_uniformity() -> Outcome {
    let uniform = NqsModel::zeros(4, 1);
    let peaked = peaked_model(4);
    let p = dense(&peaked)?.probabilities();
    let far = tv(&p, &[1.0 / 16.0; 16]);
    ensure!(far > 0.4, "peaked model TV from uniform {far}");

    let mut lines = Vec::new();
    for (label, cfg, pcond) in [
        ("pcond", UniformityConfig::new(0.2, 0.1).unwrap(), true),
        ("ar", UniformityConfig::new(0.1, 0.1).unwrap(), false),
    ] {
        let t = cfg.pairs();
        let k = if pcond { ok(cfg.queries_per_pair())? } else { 1 };
        let run = |model: &NqsModel, seed: u64| -> Result<TestVerdict, String> {
            let backend = NqsBackend::new(model.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = if pcond {
                test_uniformity(&PcondOnly(&backend), &cfg, &mut rng)
            } else {
                test_uniformity_fast(&backend, &cfg, &mut rng)
            };
            let v = ok(v)?;
            ensure!(budget_matches(&v, t, k, pcond), "budget mismatch: {:?}", v.queries_used);
            if pcond {
                ensure!(backend.stats().snapshot().ar_ratio_queries == 0, "PCOND path issued AR queries");
            }
            Ok(v)
        };
        let accepted = (0..100u64)
            .into_par_iter()
            .map(|s| run(&uniform, 1100 + s).map(|v| v.accepted()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&a| a)
            .count();
        let rejected = (0..100u64)
            .into_par_iter()
            .map(|s| run(&peaked, 1200 + s).map(|v| !v.accepted()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&r| r)
            .count();
        ensure!(accepted >= 99, "{label}: uniform accepted {accepted}/100");
        ensure!(rejected >= 99, "{label}: peaked rejected {rejected}/100");
        lines.push(format!(
            "{label} eps={} t={t} K={k}: accept {accepted}/100, reject {rejected}/100",
            cfg.eps
        ));
    }
    Ok(format!("{}; budgets exact", lines.join("; ")))
}

fn pauli_matrix(p: Pauli) -> [[Complex64; 2]; 2] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => [[l, o], [o, l]],
        Pauli::X => [[o, l], [l, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[l, o], [o, -l]],
    }
}

/// `P_0 ⊗ … ⊗ P_{n-1}` applied to `amps`; qubit 0 is the most significant index bit.
fn apply_kron(p: &PauliString, amps: &[Complex64]) -> Vec<Complex64> {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for &letter in p.letters() {
        let s = pauli_matrix(letter);
        let d = m.len();
        let mut next = vec![vec![c(0.0, 0.0); 2 * d]; 2 * d];
        for r in 0..d {
            for col in 0..d {
                for a in 0..2 {
                    for b in 0..2 {
                        next[2 * r + a][2 * col + b] = m[r][col] * s[a][b];
                    }
                }
            }
        }
        m = next;
    }
    m.iter()
        .map(|row| row.iter().zip(amps).map(|(x, y)| x * y).sum())
        .collect()
}

/// `min_c max_i |got_i - c·want_i|` with `c` the least-squares scale.
fn scale_deviation(got: &[Complex64], want: &[Complex64]) -> f64 {
    let num: Complex64 = want.iter().zip(got).map(|(w, g)| w.conj() * g).sum();
    let den: f64 = want.iter().map(|w| w.norm_sqr()).sum();
    let scale = num / den;
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - scale * w).norm())
        .fold(0.0, f64::max)
}

fn c12_pauli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let model = NqsModel::random(4, rng.random_range(1..=4), 1.0, &mut rng);
        let p = PauliString::new((0..4).map(|_| letters[rng.random_range(0..4)]).collect());
        let want = apply_kron(&p, dense(&model)?.amplitudes());
        let got = dense(&ok(pauli_apply(&model, &p))?)?;
        worst = worst.max(scale_deviation(got.amplitudes(), &want));
    }
    ensure!(worst <= 1e-10, "max deviation {worst:e}");
    Ok(format!("100 (model, string) pairs at n=4, max deviation up to scale {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("product form equals hidden-layer sum", c1_product_form),
        ("postselection gives the exact conditional", c2_postselection),
        ("three-node network has no valid state", c3_invalid_state),
        ("parity gadget support", c4_parity),
        ("fidelity budget and accuracy", c5_fidelity),
        ("orthogonal single-qubit pair", c6_orthogonal_pair),
        ("sparse observable expectation", c7_observable),
        ("second moment of G", c8_second_moment),
        ("uniform DNF sampler", c9_dnf_sampler),
        ("Metropolis calibration", c10_metropolis),
        ("uniformity tester calibration", c11_uniformity),
        ("Pauli gadgets", c12_pauli),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id}: {name} ({detail}) [{secs:.1} s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {id}: {name} ({detail}) [{secs:.1} s]");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
