use std::path::Path;

use pnn_core::analysis::{
    connector_negligibility, cover_suite, dimension_estimate, dimension_ledger, frequency_trace, limit_point_scan,
    LimitScan, ScanPolicy,
};
use pnn_core::beta::{beta_expand, evaluate_digits, parse_rational, rational_to_f64, BetaSystem, SystemDescriptor};
use pnn_core::construction::{
    build_construction, decode_prefix, gamma_family, materialize, sample_prefix, BlockRun, Checkpoint,
    Construction, ConstructionConfig, EpsilonPolicy, Selector,
};
use pnn_core::measures::FixedWord;
use pnn_core::shift::{all_words, Alphabet, CylinderMeasure, Word};
use pnn_core::specification::glue as glue_words;
use pnn_core::Instance;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artifact::{csv_text, emit, emit_json, out_dir, read_input, sha256_hex, write_bytes, write_json, RunConfig};
use crate::{Failure, FixedWordArg, ScheduleArgs, SystemArg};

fn load_system(arg: &SystemArg) -> Result<BetaSystem, Failure> {
    match &arg.system {
        None => Ok(BetaSystem::integer(3)?),
        Some(p) => {
            let bytes = read_input(p)?;
            let text = String::from_utf8(bytes).map_err(|_| Failure::input("system descriptor is not UTF-8"))?;
            Ok(BetaSystem::from_json(&text)?)
        }
    }
}

fn parse_word(alphabet: Alphabet, text: &str) -> Result<Word, Failure> {
    Ok(alphabet.parse(text)?)
}

pub fn policy(k: f64, epsilon: Option<f64>) -> EpsilonPolicy {
    match epsilon {
        Some(epsilon) => EpsilonPolicy::Fixed { epsilon },
        None => EpsilonPolicy::Floor { k },
    }
}

fn construction_config(s: &ScheduleArgs) -> ConstructionConfig {
    ConstructionConfig {
        p: s.p,
        stages: s.stages,
        epsilon: policy(s.epsilon_k, s.epsilon),
        growth_base: s.growth,
        fixed_word: match s.fixed_word {
            FixedWordArg::Balanced => FixedWord::Balanced,
            FixedWordArg::Champernowne => FixedWord::Champernowne,
        },
        ..Default::default()
    }
}

pub fn expand(system: &SystemArg, x: &str, n: usize, output: Option<&Path>) -> Result<(), Failure> {
    let sys = load_system(system)?;
    let value = parse_rational(x)?;
    let digits = beta_expand(&value, &sys, n)?;
    let residual = rational_to_f64(&value) - evaluate_digits(&digits, sys.beta());
    let text = format!("{}\nresidual {residual:e}\n", sys.alphabet().format(&digits));
    emit(output, &text)
}

pub fn admissible(system: &SystemArg, word: &str) -> Result<(), Failure> {
    let sys = load_system(system)?;
    let w = parse_word(sys.alphabet(), word)?;
    let ok = pnn_core::beta::is_admissible(&w, &sys)?;
    emit(None, if ok { "true\n" } else { "false\n" })
}

pub fn language(system: &SystemArg, n: usize, list: bool, output: Option<&Path>) -> Result<(), Failure> {
    let sys = load_system(system)?;
    let inst = Instance::new(sys)?;
    let run = RunConfig::new("language", json!({ "system": inst.system.descriptor(), "n": n, "list": list }));
    let count = inst.automaton.count(n);
    let mut payload = json!({ "n": n, "count": count.to_string(), "states": inst.automaton.num_states() });
    if list {
        let alphabet = inst.automaton.alphabet();
        let words: Vec<String> = inst.automaton.enumerate(n).iter().map(|w| alphabet.format(w)).collect();
        payload["words"] = json!(words);
    }
    emit_json(output, &run.wrap(&payload))
}

#[derive(Serialize)]
struct MassRow {
    word: String,
    nu: f64,
    mu: f64,
    nu_exact: Option<String>,
    mu_exact: Option<String>,
}

fn mass_row(inst: &Instance, w: &[u8]) -> MassRow {
    MassRow {
        word: inst.automaton.alphabet().format(w),
        nu: inst.nu.mass(w),
        mu: inst.mu.mass(w),
        nu_exact: inst.nu.exact_mass(w).map(|r| r.to_string()),
        mu_exact: inst.mu.exact_mass(w).map(|r| r.to_string()),
    }
}

pub fn measure(system: &SystemArg, word: Option<&str>, length: usize, output: Option<&Path>) -> Result<(), Failure> {
    let inst = Instance::new(load_system(system)?)?;
    let alphabet = inst.automaton.alphabet();
    let rows: Vec<MassRow> = match word {
        Some(text) => vec![mass_row(&inst, &parse_word(alphabet, text)?)],
        None => all_words(alphabet, length).map(|w| mass_row(&inst, &w)).collect(),
    };
    let run = RunConfig::new(
        "measure",
        json!({ "system": inst.system.descriptor(), "word": word, "length": length }),
    );
    let payload = json!({
        "pair": inst.pair,
        "cylinders": rows,
    });
    emit_json(output, &run.wrap(&payload))
}

pub fn glue(system: &SystemArg, pair: Option<(&str, &str)>, output: Option<&Path>) -> Result<(), Failure> {
    let inst = Instance::new(load_system(system)?)?;
    let alphabet = inst.automaton.alphabet();
    let run = RunConfig::new(
        "glue",
        json!({ "system": inst.system.descriptor(), "a": pair.map(|p| p.0), "b": pair.map(|p| p.1) }),
    );
    let payload = match pair {
        Some((a, b)) => {
            let (a, b) = (parse_word(alphabet, a)?, parse_word(alphabet, b)?);
            let v = inst.table.connector_for(&a, &b)?;
            let glued = glue_words(&a, &b, &inst.table)?;
            json!({
                "constant": inst.table.constant(),
                "connector": alphabet.format(v),
                "glued": alphabet.format(&glued),
            })
        }
        None => json!({ "constant": inst.table.constant(), "rows": inst.table.rows() }),
    };
    emit_json(output, &run.wrap(&payload))
}

pub fn gamma(system: &SystemArg, n: usize, policy: EpsilonPolicy, list: bool, output: Option<&Path>) -> Result<(), Failure> {
    let inst = Instance::new(load_system(system)?)?;
    let run = RunConfig::new(
        "gamma",
        json!({ "system": inst.system.descriptor(), "n": n, "epsilon": policy, "list": list }),
    );
    let p = inst.pair;
    let fam = gamma_family(
        &inst.automaton,
        n,
        &[p.divergent, p.convergent],
        &[p.nu_divergent, p.nu_convergent],
        inst.entropy(),
        policy,
    )?;
    let mut payload = serde_json::to_value(&fam).expect("json");
    payload["digits"] = json!([p.divergent, p.convergent]);
    if list {
        let alphabet = inst.automaton.alphabet();
        payload["words"] = json!(fam.words.iter().map(|w| alphabet.format(w)).collect::<Vec<_>>());
    }
    emit_json(output, &run.wrap(&payload))
}

#[derive(Serialize, Deserialize)]
struct ConstructSettings {
    system: SystemDescriptor,
    construction: ConstructionConfig,
    selector: Selector,
}

#[derive(Deserialize)]
struct Annotations {
    config_hash: String,
    config: ConstructSettings,
    length: u64,
    runs: Vec<BlockRun>,
    checkpoints: Vec<Checkpoint>,
}

/// Whether every stage met its frequency certificate and cardinality bound.
fn stage_failures(c: &Construction) -> Vec<String> {
    let mut out = Vec::new();
    for s in &c.stages {
        if s.certificate > 2.0 * s.rho + 1e-12 {
            out.push(format!("stage {}: frequency certificate {:.4} exceeds 2 rho = {:.4}", s.j, s.certificate, 2.0 * s.rho));
        }
        if s.bound.violations > 0 {
            out.push(format!("stage {}: cardinality bound fails at {} indices", s.j, s.bound.violations));
        }
    }
    out
}

pub fn construct(system: &SystemArg, schedule: &ScheduleArgs, seed: Option<u64>, out: &Path) -> Result<(), Failure> {
    let inst = Instance::new(load_system(system)?)?;
    let settings = ConstructSettings {
        system: inst.system.descriptor().clone(),
        construction: construction_config(schedule),
        selector: seed.map_or(Selector::Deterministic, |seed| Selector::Seeded { seed }),
    };
    let run = RunConfig::new("construct", serde_json::to_value(&settings).expect("json"));
    let c = build_construction(&inst, &settings.construction)?;
    let prefix = sample_prefix(&inst, &c, settings.construction.stages, settings.selector)?;
    let dir = out_dir(out)?;
    let mut text = inst.automaton.alphabet().format(&prefix.word);
    text.push('\n');
    write_bytes(&dir.join("prefix.txt"), text.as_bytes())?;
    let choices: Vec<u8> = prefix.choices.iter().flat_map(|c| c.to_le_bytes()).collect();
    write_json(
        &dir.join("annotations.json"),
        &run.wrap(&json!({
            "length": prefix.word.len(),
            "runs": prefix.runs,
            "checkpoints": prefix.checkpoints,
            "choices_sha256": sha256_hex(&choices),
        })),
    )?;
    write_json(&dir.join("trace.json"), &run.wrap(&c))?;
    println!(
        "{} letters over {} stages, n_j = {:?}",
        prefix.word.len(),
        c.stages.len(),
        c.stages.iter().map(|s| s.n_j).collect::<Vec<_>>()
    );
    let failures = stage_failures(&c);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 2, message: failures.join("; ") })
    }
}

#[derive(Serialize)]
struct DigitReport {
    #[serde(flatten)]
    scan: LimitScan,
    target_nu: f64,
    trace_file: String,
}

pub fn analyze(
    system: &SystemArg,
    input: &Path,
    annotations: Option<&Path>,
    tolerance: f64,
    window: f64,
    stride: u64,
    out: &Path,
) -> Result<(), Failure> {
    let raw = read_input(input)?;
    let ann: Option<Annotations> = match annotations {
        Some(p) => {
            let bytes = read_input(p)?;
            Some(serde_json::from_slice(&bytes).map_err(|e| Failure::input(format!("bad annotations: {e}")))?)
        }
        None => None,
    };
    let sys = match &ann {
        Some(a) => BetaSystem::from_descriptor(&a.config.system)?,
        None => load_system(system)?,
    };
    let inst = Instance::new(sys)?;
    let alphabet = inst.automaton.alphabet();
    let text = std::str::from_utf8(&raw).map_err(|_| Failure::input("word file is not UTF-8"))?;
    let word = parse_word(alphabet, text)?;
    if word.is_empty() {
        return Err(Failure::input("word file is empty"));
    }
    let policy = ScanPolicy { tolerance, window, ..Default::default() };
    let run = RunConfig::new(
        "analyze",
        json!({
            "system": inst.system.descriptor(),
            "input_sha256": sha256_hex(&raw),
            "annotations": ann.as_ref().map(|a| a.config_hash.clone()),
            "policy": policy,
            "stride": stride,
        }),
    );

    let mut construction = None;
    if let Some(a) = &ann {
        if a.length != word.len() as u64 {
            return Err(Failure::input(format!("annotations describe {} letters, file has {}", a.length, word.len())));
        }
        let c = build_construction(&inst, &a.config.construction)?;
        decode_prefix(&c, &word, &a.runs).map_err(|e| Failure::input(format!("annotations do not match the word: {e}")))?;
        construction = Some(c);
    }
    let checkpoints: &[Checkpoint] = ann.as_ref().map_or(&[], |a| &a.checkpoints);

    let dir = out_dir(out)?;
    let stride = if stride == 0 { (word.len() as u64 / 10_000).max(1) } else { stride };
    let mut digits = Vec::new();
    for d in alphabet.letters() {
        let trace = frequency_trace(&word, d)?.with_checkpoints(checkpoints);
        let scan = limit_point_scan(&trace, policy);
        let file = format!("trace_{d}.csv");
        let rows = trace.samples(stride).map(|(m, f)| vec![m.to_string(), format!("{f:.12}")]);
        write_bytes(&dir.join(&file), csv_text(&run, &["m", "frequency"], rows)?.as_bytes())?;
        println!("digit {d}: {:?} {:?}", scan.verdict, scan.estimates);
        digits.push(DigitReport { scan, target_nu: inst.nu.mass(&[d]), trace_file: file });
    }

    let mut report = json!({ "length": word.len(), "admissible": inst.automaton.accepts(&word), "digits": digits });
    if let (Some(c), Some(a)) = (&construction, &ann) {
        let prefix = pnn_core::construction::SampledPrefix {
            word: Vec::new(),
            runs: a.runs.clone(),
            checkpoints: a.checkpoints.clone(),
            choices: Vec::new(),
        };
        report["pair"] = json!(c.pair);
        report["dimension"] = json!(dimension_estimate(c, c.stages.len() as u32)?);
        report["bound"] = json!(c.stages.iter().map(|s| json!({ "j": s.j, "summary": s.bound })).collect::<Vec<_>>());
        report["connectors"] = json!(connector_negligibility(&prefix, c));
        report["certificates"] = json!(c
            .stages
            .iter()
            .map(|s| json!({ "j": s.j, "deviation": s.certificate, "bound": 2.0 * s.rho }))
            .collect::<Vec<_>>());
    }
    write_json(&dir.join("report.json"), &run.wrap(&report))
}

#[allow(clippy::too_many_arguments)]
pub fn dimension(
    system: &SystemArg,
    schedule: &ScheduleArgs,
    covers: usize,
    seed: u64,
    s_values: &[f64],
    max_words: usize,
    out: &Path,
) -> Result<(), Failure> {
    let inst = Instance::new(load_system(system)?)?;
    let cfg = construction_config(schedule);
    let run = RunConfig::new(
        "dimension",
        json!({
            "system": inst.system.descriptor(),
            "construction": cfg,
            "covers": covers,
            "seed": seed,
            "s": s_values,
            "max_words": max_words,
        }),
    );
    let c = build_construction(&inst, &cfg)?;
    let ledger = dimension_ledger(&c, &inst.nu)?;
    let estimate = dimension_estimate(&c, cfg.stages)?;
    let cover_report: Value = if covers > 0 {
        let levels = materialize(&inst, &c, max_words)?;
        let suite = cover_suite(&ledger, &levels, &inst.nu, s_values, covers, seed)?;
        println!("covers: {} checks, {} violations", suite.records.len(), suite.violations);
        json!(suite)
    } else {
        Value::Null
    };
    println!("s* = {:.4} (target {:.4})", estimate.s_star, estimate.target);
    let dir = out_dir(out)?;
    let rows = ledger.entries.iter().map(|e| {
        vec![
            e.n.to_string(),
            e.j.to_string(),
            e.i.to_string(),
            e.len.to_string(),
            format!("{:.12}", e.log_y),
            format!("{:.12}", e.log_e),
        ]
    });
    write_bytes(&dir.join("ledger.csv"), csv_text(&run, &["n", "j", "i", "len", "log_y", "log_e"], rows)?.as_bytes())?;
    let payload = json!({
        "ledger": ledger,
        "monotone": ledger.monotone(),
        "estimate": estimate,
        "covers": cover_report,
    });
    write_json(&dir.join("ledger.json"), &run.wrap(&payload))?;
    let failed = cover_report.get("violations").and_then(Value::as_u64).unwrap_or(0);
    if failed > 0 {
        return Err(Failure { code: 2, message: format!("{failed} cover checks violate the lower bound") });
    }
    Ok(())
}

