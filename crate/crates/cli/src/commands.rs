//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use anyonic_core::correlation::{classical_correlation, correlation_tensor, two_particle_correlation};
use anyonic_core::entangle::{
    build_entangled_state, coincidence_distribution, distinguishable_distribution, evolve,
    ProcessCopies, SparseFockState,
};
use anyonic_core::metrics::{similarity, total_variation, Distribution};
use anyonic_core::sampling::sample_counts;
use anyonic_core::stategen::{
    build_stategen_circuit, circuit_fidelity, gate_counts, simulate_circuit, QuditRegister,
};
use anyonic_core::{unitarity_defect, CorrelationMatrix, DetectionMask, Parity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Experiment, Format, Mode, NamedPhase, Source, Transform};
use crate::error::{CliError, Result};
use crate::export::{fmt_real, write_file, LabelledTable, Table};

/// Full-array correlation tensors larger than this are not summed for the
/// manifest.
const FULL_TOTAL_LIMIT: usize = 1 << 20;

/// One computed distribution over the output window.
struct Run {
    phase: Option<NamedPhase>,
    tag: String,
    stem: &'static str,
    table: Option<CorrelationMatrix>,
    facts: serde_json::Map<String, Value>,
    circuit: Option<String>,
}

fn window_mask(t: &Transform, order: usize, parity: Parity) -> Vec<bool> {
    DetectionMask::new(parity).flags(&t.window_labels(), order)
}

/// Restricts a distribution over the full array to tuples inside the window.
fn restrict(full: &CorrelationMatrix, t: &Transform) -> Result<CorrelationMatrix> {
    let n = full.order();
    let w = t.window.len();
    let len = w.pow(n as u32);
    let mut values = Vec::with_capacity(len);
    let mut idx = vec![0usize; n];
    for mut flat in 0..len {
        for slot in (0..n).rev() {
            idx[slot] = t.window[flat % w];
            flat /= w;
        }
        values.push(full.get(&idx));
    }
    Ok(CorrelationMatrix::new(n, w, t.block_inputs(), full.phase(), values)?)
}

fn full_total(t: &Transform, np: &NamedPhase) -> Result<Option<f64>> {
    let n = t.inputs.len();
    let m = t.unitary.rows();
    if m.checked_pow(n as u32).is_none_or(|l| l > FULL_TOTAL_LIMIT) {
        return Ok(None);
    }
    Ok(Some(correlation_tensor(&t.unitary, &t.inputs, np.phase)?.total()))
}

/// Pushes `state` through one copy of the transformation per particle and
/// reports the window distribution together with its deviation from `Γ`.
fn coincidences(
    t: &Transform,
    np: &NamedPhase,
    state: &SparseFockState,
    facts: &mut serde_json::Map<String, Value>,
) -> Result<CorrelationMatrix> {
    let n = t.inputs.len();
    let out = evolve(state, &ProcessCopies::identical(&t.unitary, n)?)?;
    let full = coincidence_distribution(&out)?;
    let p = restrict(&full, t)?;
    let gamma = correlation_tensor(&t.block()?, &t.block_inputs(), np.phase)?;
    let scale: f64 = (1..=n).map(|k| k as f64).product();
    let dev = p
        .values()
        .iter()
        .zip(gamma.values())
        .map(|(a, g)| (scale * a - g).abs())
        .fold(0.0, f64::max);
    facts.insert("probability_total".into(), json!(full.total()));
    facts.insert("max_deviation_from_gamma".into(), json!(dev));
    Ok(p)
}

/// Turns the register written by a circuit into copies × input modes.
fn register_to_state(reg: &QuditRegister, inputs: &[usize]) -> Result<SparseFockState> {
    let n = reg.qudits();
    let extent = inputs.iter().max().map_or(0, |m| m + 1);
    let mut terms = Vec::new();
    for (i, &a) in reg.amplitudes().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mut levels = vec![0; n];
        let mut flat = i;
        for slot in (0..n).rev() {
            levels[slot] = inputs[flat % n];
            flat /= n;
        }
        terms.push((levels, a));
    }
    Ok(SparseFockState::from_terms(n, extent, terms)?)
}

fn compute_phase(exp: &Experiment, np: &NamedPhase) -> Result<Run> {
    let mut facts = serde_json::Map::new();
    let mut circuit = None;
    let (stem, table) = match exp.mode {
        Mode::TwoParticle | Mode::NParticle => {
            let t = exp.transform.as_ref().unwrap();
            let block = t.block()?;
            let bi = t.block_inputs();
            let g = if exp.mode == Mode::TwoParticle {
                two_particle_correlation(&block, bi[0], bi[1], np.phase)?
            } else {
                correlation_tensor(&block, &bi, np.phase)?
            };
            if let Some(total) = full_total(t, np)? {
                facts.insert("full_array_total".into(), json!(total));
            }
            ("gamma", g)
        }
        Mode::EntangledSim => {
            let t = exp.transform.as_ref().unwrap();
            let state = build_entangled_state(&t.inputs, np.phase)?;
            ("coincidence", coincidences(t, np, &state, &mut facts)?)
        }
        Mode::Stategen => {
            let n = exp.qudits.unwrap();
            let c = build_stategen_circuit(n, np.phase)?;
            let counts = gate_counts(&c);
            facts.insert("fidelity".into(), json!(circuit_fidelity(&c, np.phase)?));
            facts.insert(
                "gate_counts".into(),
                json!({
                    "two_mode_splitters": counts.splitter_decompositions,
                    "phase_shifts": counts.phase_shifts,
                    "local": counts.local(),
                    "controlled_swaps": counts.controlled_swaps,
                }),
            );
            circuit = Some(c.to_string());
            match &exp.transform {
                Some(t) => {
                    let reg = simulate_circuit(&c, &QuditRegister::ground(n)?)?;
                    let state = register_to_state(&reg, &t.inputs)?;
                    ("coincidence", coincidences(t, np, &state, &mut facts)?)
                }
                None => {
                    return Ok(Run {
                        phase: Some(np.clone()),
                        tag: np.tag.clone(),
                        stem: "circuit",
                        table: None,
                        facts,
                        circuit,
                    })
                }
            }
        }
        Mode::Distinguishable => unreachable!("handled without phases"),
    };
    let t = exp.transform.as_ref().unwrap();
    let order = table.order();
    let table = table.with_mask(window_mask(t, order, exp.mask))?;
    summarize(&table, &mut facts);
    Ok(Run {
        phase: Some(np.clone()),
        tag: np.tag.clone(),
        stem,
        table: Some(table),
        facts,
        circuit,
    })
}

fn summarize(table: &CorrelationMatrix, facts: &mut serde_json::Map<String, Value>) {
    facts.insert("window_total".into(), json!(table.total()));
    facts.insert("measurable_total".into(), json!(table.measurable_total()));
    facts.insert("bunched_fraction".into(), json!(table.bunched_fraction()));
}

fn compute(exp: &Experiment) -> Result<Vec<Run>> {
    let mut runs = if exp.mode == Mode::Distinguishable {
        let t = exp.transform.as_ref().unwrap();
        let d = distinguishable_distribution(&t.block()?, &t.block_inputs())?;
        let d = d.with_mask(window_mask(t, t.inputs.len(), exp.mask))?;
        let mut facts = serde_json::Map::new();
        summarize(&d, &mut facts);
        vec![Run {
            phase: None,
            tag: "distinguishable".into(),
            stem: "gamma",
            table: Some(d),
            facts,
            circuit: None,
        }]
    } else {
        exp.phases
            .par_iter()
            .map(|np| compute_phase(exp, np))
            .collect::<Result<Vec<_>>>()?
    };
    if exp.mode == Mode::TwoParticle {
        let t = exp.transform.as_ref().unwrap();
        let bi = t.block_inputs();
        let c = classical_correlation(&t.block()?, bi[0], bi[1])?;
        let c = c.with_mask(window_mask(t, 2, exp.mask))?;
        let mut facts = serde_json::Map::new();
        summarize(&c, &mut facts);
        runs.push(Run {
            phase: None,
            tag: "classical".into(),
            stem: "gamma",
            table: Some(c),
            facts,
            circuit: None,
        });
    }
    Ok(runs)
}

fn transform_doc(t: &Transform) -> Value {
    let source = match &t.source {
        Source::Walk {
            sites,
            beta,
            coupling,
            time,
        } => json!({"kind": "walk", "sites": sites, "beta": beta, "coupling": coupling, "time": time}),
        Source::Builtin(name) => json!({"kind": "builtin", "name": name}),
        Source::File(p) => json!({"kind": "file", "path": p.display().to_string()}),
    };
    json!({
        "source": source,
        "modes": t.unitary.rows(),
        "unitarity_defect": unitarity_defect(&t.unitary).ok(),
        "inputs": {"labels": t.input_labels(), "indices": t.inputs},
        "window": {"labels": t.window_labels(), "indices": t.window},
    })
}

fn manifest(exp: &Experiment, files: &[String], results: Vec<Value>, extra: Value) -> String {
    let mut doc = json!({
        "tool": {"name": "anyonic", "version": env!("CARGO_PKG_VERSION")},
        "mode": exp.mode.as_str(),
        "mask": exp.mask.as_str(),
        "format": match exp.format { Format::Csv => "csv", Format::Structured => "structured" },
        "phases": exp.phases.iter().map(|p| json!({
            "label": p.label, "tag": p.tag, "radians": p.phase.radians(),
        })).collect::<Vec<_>>(),
        "transform": exp.transform.as_ref().map(transform_doc),
        "qudits": exp.qudits,
        "results": results,
        "files": files,
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn phase_line(run: &Run) -> String {
    let mut line = match &run.phase {
        Some(p) => format!("phi={:<8}", p.label),
        None => format!("{:<12}", run.tag),
    };
    for key in ["window_total", "bunched_fraction", "fidelity", "max_deviation_from_gamma"] {
        if let Some(v) = run.facts.get(key).and_then(Value::as_f64) {
            line.push_str(&format!("  {key}={v:.6e}"));
        }
    }
    line
}

/// Runs the experiment's mode and writes data files plus `manifest.json`
/// into `out`. Returns the names of the files written.
pub fn run_experiment(exp: &Experiment, out: &Path) -> Result<Vec<String>> {
    let runs = compute(exp)?;
    create_dir(out)?;
    let mut files = Vec::new();
    let mut results = Vec::new();
    for run in &runs {
        let mut written = Vec::new();
        if let Some(text) = &run.circuit {
            let name = format!("circuit_{}.txt", run.tag);
            write_file(&out.join(&name), text)?;
            written.push(name);
        }
        if let (Some(t), Some(matrix)) = (&exp.transform, &run.table) {
            let labels = t.window_labels();
            let inputs = t.input_labels();
            let table = LabelledTable {
                matrix,
                labels: &labels,
                indices: &t.window,
                input_labels: &inputs,
                phase: run.phase.as_ref(),
            };
            let base = format!("{}_{}", run.stem, run.tag);
            match exp.format {
                Format::Csv => {
                    write_file(&out.join(format!("{base}.csv")), &table.raw_csv())?;
                    write_file(&out.join(format!("{base}_normalized.csv")), &table.normalized_csv())?;
                    written.push(format!("{base}.csv"));
                    written.push(format!("{base}_normalized.csv"));
                }
                Format::Structured => {
                    write_file(&out.join(format!("{base}.json")), &table.structured())?;
                    written.push(format!("{base}.json"));
                }
            }
        }
        println!("{}", phase_line(run));
        let mut r = run.facts.clone();
        r.insert("tag".into(), json!(run.tag));
        r.insert("files".into(), json!(written));
        results.push(Value::Object(r));
        files.extend(written);
    }
    files.push("manifest.json".into());
    write_file(&out.join("manifest.json"), &manifest(exp, &files, results, json!({})))?;
    println!("wrote {} files to {}", files.len(), out.display());
    Ok(files)
}

/// Draws `shots` detection events per phase from the measurable part of the
/// exact distribution.
pub fn run_sample(exp: &Experiment, out: &Path) -> Result<Vec<String>> {
    let shots = exp.shots.ok_or_else(|| {
        CliError::config("sample.shots", "give --shots or [sample] shots in the config")
    })?;
    let runs = compute(exp)?;
    let t = exp.transform.as_ref().unwrap();
    create_dir(out)?;
    let labels = t.window_labels();
    let inputs = t.input_labels();
    let mut files = Vec::new();
    let mut results = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let matrix = run.table.as_ref().expect("sampled modes produce tables");
        let keep = matrix.mask();
        let exact: Vec<f64> = matrix
            .values()
            .iter()
            .zip(keep)
            .map(|(&v, &k)| if k { v } else { 0.0 })
            .collect();
        let exact = Distribution::new(exact)?;
        let mut rng = ChaCha8Rng::seed_from_u64(exp.seed.wrapping_add(i as u64));
        let counts = sample_counts(&exact, shots, &mut rng)?;
        let observed = Distribution::new(counts.iter().map(|&c| c as f64).collect())?;
        let s = similarity(&exact, &observed)?;
        let tv = total_variation(&exact, &observed)?;
        let table = LabelledTable {
            matrix,
            labels: &labels,
            indices: &t.window,
            input_labels: &inputs,
            phase: run.phase.as_ref(),
        };
        let name = format!("counts_{}.csv", run.tag);
        let values: Vec<String> = counts.iter().map(u64::to_string).collect();
        write_file(&out.join(&name), &table.to_csv(&values))?;
        println!("{:<12}  shots={shots}  similarity={}  total_variation={}", run.tag, fmt_real(s), fmt_real(tv));
        results.push(json!({"tag": run.tag, "file": name, "similarity": s, "total_variation": tv}));
        files.push(name);
    }
    files.push("manifest.json".into());
    let extra = json!({"sample": {"shots": shots, "seed": exp.seed, "rng": "chacha8"}});
    write_file(&out.join("manifest.json"), &manifest(exp, &files, results, extra))?;
    Ok(files)
}

/// Writes the full transformation as `unitary.csv` or `unitary.json`.
pub fn run_unitary(exp: &Experiment, out: &Path) -> Result<PathBuf> {
    let t = exp
        .transform
        .as_ref()
        .ok_or_else(|| CliError::config("walk", "no transformation configured"))?;
    create_dir(out)?;
    let u = &t.unitary;
    let path = match exp.format {
        Format::Csv => {
            let mut s = String::from("row,col,re,im\n");
            for r in 0..u.rows() {
                for c in 0..u.cols() {
                    let z = u.get(r, c);
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        t.labels.label(r),
                        t.labels.label(c),
                        fmt_real(z.re),
                        fmt_real(z.im)
                    ));
                }
            }
            let p = out.join("unitary.csv");
            write_file(&p, &s)?;
            p
        }
        Format::Structured => {
            let p = out.join("unitary.json");
            let mut s = serde_json::to_string(u).expect("serializable");
            s.push('\n');
            write_file(&p, &s)?;
            p
        }
    };
    println!(
        "{}x{} unitarity_defect={}  -> {}",
        u.rows(),
        u.cols(),
        fmt_real(unitarity_defect(u)?),
        path.display()
    );
    Ok(path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub entries: usize,
    pub compared: usize,
    pub similarity: f64,
    pub total_variation: f64,
    pub max_abs_diff: f64,
}

/// Compares two tables over the entries measurable in both (and under
/// `mask`, if given).
pub fn compare_tables(a: &Table, b: &Table, mask: Option<Parity>) -> Result<Comparison> {
    if a.order != b.order {
        return Err(CliError::Mismatch(format!(
            "tables over {} and {} outputs",
            a.order, b.order
        )));
    }
    if a.entries.len() != b.entries.len() || a.entries.keys().ne(b.entries.keys()) {
        let missing = a
            .entries
            .keys()
            .find(|k| !b.entries.contains_key(*k))
            .or_else(|| b.entries.keys().find(|k| !a.entries.contains_key(*k)));
        return Err(CliError::Mismatch(format!(
            "index sets differ (first unmatched tuple {missing:?})"
        )));
    }
    let m = DetectionMask::new(mask.unwrap_or(Parity::None));
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (k, &(va, ma)) in &a.entries {
        let (vb, mb) = b.entries[k];
        if ma && mb && m.measurable(k) {
            x.push(va);
            y.push(vb);
        }
    }
    let max_abs_diff = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let (dx, dy) = (Distribution::new(x.clone())?, Distribution::new(y)?);
    Ok(Comparison {
        entries: a.entries.len(),
        compared: x.len(),
        similarity: similarity(&dx, &dy)?,
        total_variation: total_variation(&dx, &dy)?,
        max_abs_diff,
    })
}

pub fn run_compare(a: &Path, b: &Path, mask: Option<Parity>, min_similarity: Option<f64>) -> Result<Comparison> {
    let c = compare_tables(&Table::read(a)?, &Table::read(b)?, mask)?;
    println!("entries          {}", c.entries);
    println!("compared         {}", c.compared);
    println!("similarity       {}", fmt_real(c.similarity));
    println!("total_variation  {}", fmt_real(c.total_variation));
    println!("max_abs_diff     {}", fmt_real(c.max_abs_diff));
    if let Some(min) = min_similarity {
        if c.similarity < min {
            return Err(CliError::Mismatch(format!(
                "similarity {} below required {min}",
                fmt_real(c.similarity)
            )));
        }
    }
    Ok(c)
}

/// Byte-compares every file in `files` under `out` with its counterpart in
/// `golden`, and checks `golden` holds nothing else.
pub fn check_golden(out: &Path, golden: &Path, files: &[String]) -> Result<()> {
    let mut bad = Vec::new();
    for f in files {
        let got = fs::read(out.join(f)).map_err(|e| CliError::io(out.join(f), e))?;
        match fs::read(golden.join(f)) {
            Ok(want) if want == got => {}
            Ok(_) => bad.push(format!("{f} differs")),
            Err(_) => bad.push(format!("{f} missing from golden set")),
        }
    }
    let entries = fs::read_dir(golden).map_err(|e| CliError::io(golden, e))?;
    for e in entries {
        let name = e.map_err(|e| CliError::io(golden, e))?.file_name();
        let name = name.to_string_lossy().to_string();
        if !files.contains(&name) {
            bad.push(format!("{name} not produced"));
        }
    }
    if bad.is_empty() {
        println!("golden check passed ({} files)", files.len());
        Ok(())
    } else {
        Err(CliError::Mismatch(bad.join("; ")))
    }
}
