use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use nqs_core::disttest::{test_uniformity, test_uniformity_fast, UniformityConfig};
use nqs_core::estimator::{expectation, fidelity, SparseObservable};
use nqs_core::gadget::{
    hamming_gadget, parity_gadget, pauli_apply, postselect, weight_to_spin_sum,
    zero_state_example, PauliString, PostselectionMask,
};
use nqs_core::model::all_configs;
use nqs_core::oracle::{
    DenseBackend, DnfFormula, DnfState, NqsBackend, PcondOnly, SampOracle,
};
use nqs_core::sampler::ChainConfig;
use nqs_core::{Caps, LogComplex, NqsModel, SpinConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::output::{open, write_report, write_samples, Format};
use crate::{ChainArgs, Command, Common, GadgetArgs};

fn load_model(path: &Path) -> Result<NqsModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    NqsModel::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn parse_config(s: &str, n: usize) -> Result<SpinConfig> {
    let v: SpinConfig = s.parse()?;
    if v.len() != n {
        return Err(nqs_core::NqsError::DimensionMismatch(format!(
            "configuration {s:?} has length {}, model has n = {n}",
            v.len()
        ))
        .into());
    }
    Ok(v)
}

fn caps(common: &Common) -> Caps {
    Caps {
        max_visible: common.cap_n as usize,
        max_hidden: common.cap_m as usize,
    }
}

fn backend(model: NqsModel, common: &Common, chain: &ChainArgs) -> Result<NqsBackend> {
    Ok(NqsBackend::new(model)
        .with_normalization_cap(common.cap_n as usize)
        .with_chain_config(chain_config(common, chain))?)
}

fn chain_config(common: &Common, chain: &ChainArgs) -> ChainConfig {
    ChainConfig {
        burn_in: chain.burn_in,
        thinning: chain.thinning,
        max_steps: u64::MAX,
        seed: common.seed,
    }
}

fn log_complex_json(l: &LogComplex) -> Value {
    let c = l.to_complex();
    json!({
        "zero": l.is_zero(),
        "log_mag": if l.is_zero() { Value::Null } else { json!(l.log_mag()) },
        "phase": l.phase(),
        "re": c.re,
        "im": c.im,
    })
}

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    Ok(serde_json::to_value(value)?)
}

struct Report {
    fields: Map<String, Value>,
    start: Instant,
}

impl Report {
    fn new(command: &str, common: &Common) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert("seed".into(), json!(common.seed));
        Report {
            fields,
            start: Instant::now(),
        }
    }

    fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    fn finish(mut self) -> Map<String, Value> {
        let ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.fields.insert("wall_time_ms".into(), json!(ms));
        self.fields
    }
}

fn emit(common: &Common, report: Report) -> Result<()> {
    let mut w = open(common.output.as_deref())?;
    write_report(&mut *w, common.format.unwrap_or(Format::Json), &report.finish())
}

fn emit_samples(common: &Common, samples: &[SpinConfig], report: Report) -> Result<()> {
    let format = common.format.unwrap_or(Format::Text);
    let fields = report.finish();
    if format != Format::Json {
        // the dump itself is bare lines; the seed and counters go to stderr
        let mut meta = fields.clone();
        meta.remove("wall_time_ms");
        eprintln!("{}", Value::Object(meta));
    }
    let mut w = open(common.output.as_deref())?;
    write_samples(&mut *w, format, samples, fields)
}

pub fn run(common: &Common, command: &Command) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    match command {
        Command::Eval {
            model,
            config,
            brute,
        } => {
            let model = load_model(model)?;
            let v = parse_config(config, model.n())?;
            let mut report = Report::new("eval", common);
            report
                .set("config", json!(v.to_string()))
                .set("amplitude", log_complex_json(&model.log_amplitude(&v)?));
            if *brute {
                let b = model.log_amplitude_brute_force(&v, &caps(common))?;
                report.set("brute_force", log_complex_json(&b));
            }
            emit(common, report)
        }
        Command::Ratio {
            model,
            config,
            config2,
        } => {
            let model = load_model(model)?;
            let i = parse_config(config, model.n())?;
            let j = parse_config(config2, model.n())?;
            let mut report = Report::new("ratio", common);
            report
                .set("config", json!(i.to_string()))
                .set("config2", json!(j.to_string()))
                .set("ratio", to_value(&model.amplitude_ratio(&i, &j)?)?);
            emit(common, report)
        }
        Command::Statevec { model } => {
            let model = load_model(model)?;
            let state = model.state_vector(&caps(common))?;
            let amplitudes: Vec<Value> = all_configs(model.n())
                .zip(state.amplitudes())
                .map(|(v, a)| {
                    json!({"config": v.to_string(), "re": a.re, "im": a.im, "probability": a.norm_sqr()})
                })
                .collect();
            let mut report = Report::new("statevec", common);
            report
                .set("n", json!(model.n()))
                .set("log_z", json!(state.log_z()))
                .set("amplitudes", Value::Array(amplitudes));
            emit(common, report)
        }
        Command::Sample {
            model,
            count,
            exact,
            chain,
        } => {
            let model = load_model(model)?;
            let mut report = Report::new("sample", common);
            report.set("n", json!(model.n())).set("count", json!(count));
            let (samples, stats) = if *exact {
                let b = DenseBackend::new(model.state_vector(&caps(common))?);
                let s = (0..*count)
                    .map(|_| b.samp_query(&mut rng))
                    .collect::<nqs_core::Result<Vec<_>>>()?;
                report.set("sampler", json!("exact"));
                (s, b.stats().snapshot())
            } else {
                let b = backend(model, common, chain)?;
                let s = (0..*count)
                    .map(|_| b.samp_query(&mut rng))
                    .collect::<nqs_core::Result<Vec<_>>>()?;
                report
                    .set("sampler", json!("metropolis"))
                    .set("chain", to_value(b.chain_config())?);
                (s, b.stats().snapshot())
            };
            report.set("stats", to_value(&stats)?);
            emit_samples(common, &samples, report)
        }
        Command::Fidelity {
            model,
            model2,
            eps,
            chain,
        } => {
            let psi = load_model(model)?;
            let phi = load_model(model2)?;
            let n = psi.n();
            let psi = backend(psi, common, chain)?;
            let phi = backend(phi, common, chain)?;
            let result = fidelity(&psi, &phi, *eps, n, &mut rng)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let mut report = Report::new("fidelity", common);
            report
                .set("eps", json!(eps))
                .set("n", json!(n))
                .set("estimate", json!(result.estimate))
                .set("report", to_value(&result)?)
                .set("stats", to_value(&result.queries)?);
            emit(common, report)
        }
        Command::Expect {
            model,
            pauli,
            eps,
            chain,
        } => {
            let model = load_model(model)?;
            let n = model.n();
            let p: PauliString = pauli.parse()?;
            if p.len() != n {
                bail!(nqs_core::NqsError::DimensionMismatch(format!(
                    "Pauli string of length {} for n = {n}",
                    p.len()
                )));
            }
            let obs = SparseObservable::from_pauli(&p)?;
            let psi = backend(model, common, chain)?;
            let result = expectation(&psi, &obs, *eps, n, &mut rng)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let mut report = Report::new("expect", common);
            report
                .set("pauli", json!(p.to_string()))
                .set("eps", json!(eps))
                .set("row_sparsity", json!(obs.row_sparsity()))
                .set("estimate", json!(result.estimate))
                .set("report", to_value(&result)?)
                .set("stats", to_value(&result.queries)?);
            emit(common, report)
        }
        Command::Gadget(args) => run_gadget(common, args),
        Command::DnfSample { formula, count } => {
            let text = fs::read_to_string(formula)
                .with_context(|| format!("reading {}", formula.display()))?;
            let f: DnfFormula = text.parse()?;
            let state = DnfState::new(f);
            let samples = (0..*count)
                .map(|_| state.samp_query(&mut rng))
                .collect::<nqs_core::Result<Vec<_>>>()?;
            let mut report = Report::new("dnf-sample", common);
            report
                .set("n", json!(state.formula().n()))
                .set("terms", json!(state.formula().terms().len()))
                .set("count", json!(count))
                .set("stats", to_value(&state.stats().snapshot())?);
            emit_samples(common, &samples, report)
        }
        Command::TestUniform {
            model,
            eps,
            delta,
            fast,
            chain,
        } => {
            let model = load_model(model)?;
            let cfg = UniformityConfig::new(*eps, *delta)?;
            let b = backend(model, common, chain)?;
            let verdict = if *fast {
                test_uniformity_fast(&b, &cfg, &mut rng)?
            } else {
                test_uniformity(&PcondOnly(&b), &cfg, &mut rng)?
            };
            let mut report = Report::new("test-uniform", common);
            report
                .set("eps", json!(eps))
                .set("delta", json!(delta))
                .set("path", json!(if *fast { "ar" } else { "pcond" }))
                .set("verdict", to_value(&verdict)?)
                .set("stats", to_value(&verdict.queries_used)?);
            emit(common, report)
        }
    }
}

fn run_gadget(common: &Common, args: &GadgetArgs) -> Result<()> {
    let out = if args.zero_state {
        zero_state_example(args.n)?
    } else {
        let path = args.model.as_deref().context("--model is required")?;
        let model = load_model(path)?;
        if let Some(mask) = &args.postselect {
            postselect(&model, &mask.parse::<PostselectionMask>()?)?
        } else if args.parity {
            parity_gadget(&model)
        } else if let Some(p) = &args.pauli {
            pauli_apply(&model, &p.parse::<PauliString>()?)?
        } else {
            let k = match (args.hamming, args.hamming_weight) {
                (Some(k), _) => k,
                (None, Some(w)) => weight_to_spin_sum(model.n(), w)?,
                (None, None) => bail!("no transformation selected"),
            };
            let (out, diag) = hamming_gadget(&model, k)?;
            if !diag.exact {
                eprintln!(
                    "warning: spin-sum sectors surviving the Hamming gadget are {:?}, not [{k}]",
                    diag.surviving_sums
                );
            }
            out
        }
    };
    let mut w = open(common.output.as_deref())?;
    writeln!(w, "{}", out.to_json())?;
    w.flush()?;
    Ok(())
}
