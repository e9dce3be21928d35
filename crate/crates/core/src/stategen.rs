//! Qudit circuits that prepare `|ψ_N(φ)⟩`.
//!
//! The register holds `N` qudits `B[1], …, B[N]` of dimension `N`, all
//! starting in level 1. The circuit runs in three stages:
//!
//! 1. a `1×q` mode splitter puts `B[q]` into the uniform superposition of
//!    levels `1..=q`;
//! 2. level `k` of each `B[q]` picks up phase `(k−1)φ`;
//! 3. for `r = 1, …, N−1`, level `j` of `B[r+1]` controls a ladder of swaps
//!    that moves levels `{j..r}` to `{j+1..r+1}` on each of `B[r], …, B[1]`.
//!
//! After step `r` the qudits `B[r+1], …, B[1]` hold `|ψ_{r+1}(φ)⟩`. A ket is
//! written `|ℓ_{B[N]}, …, ℓ_{B[1]}⟩`, so copy `c` of the process (counting
//! from 1) is carried by `B[N+1−c]`, and level `ℓ` stands for input mode
//! `ν_ℓ`.
//!
//! In code, qudit `q` is `B[q+1]` and levels count from 0.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::entangle::build_entangled_state;
use crate::error::{Error, Result};
use crate::matrix::{ONE, ZERO};
use crate::phase::ExchangePhase;

/// Largest register simulated densely (`6^6 = 46656` amplitudes).
pub const MAX_REGISTER_QUDITS: usize = 6;

/// Dense state of `N` qudits of dimension `N`.
///
/// Amplitudes are indexed by level tuples with `B[N]` most significant, so
/// qudit `q` has stride `N^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditRegister {
    qudits: usize,
    amps: Vec<Complex64>,
}

impl QuditRegister {
    /// `|1⟩^{⊗N}`.
    pub fn ground(qudits: usize) -> Result<Self> {
        check_register_size(qudits)?;
        let mut amps = vec![ZERO; qudits.pow(qudits as u32)];
        amps[0] = ONE;
        Ok(QuditRegister { qudits, amps })
    }

    pub fn from_amplitudes(qudits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_register_size(qudits)?;
        if amps.len() != qudits.pow(qudits as u32) {
            return Err(Error::InvalidDimension(format!(
                "{} amplitudes for {qudits} qudits of dimension {qudits}",
                amps.len()
            )));
        }
        Ok(QuditRegister { qudits, amps })
    }

    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn dim(&self) -> usize {
        self.qudits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of the ket `|levels[0], …⟩` listed from `B[N]` down to
    /// `B[1]`.
    pub fn amplitude(&self, levels: &[usize]) -> Complex64 {
        self.amps[self.index(levels)]
    }

    pub fn index(&self, levels: &[usize]) -> usize {
        levels.iter().fold(0, |acc, &l| acc * self.qudits + l)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &QuditRegister) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn stride(&self, qudit: usize) -> usize {
        self.qudits.pow(qudit as u32)
    }

    fn level_of(&self, index: usize, qudit: usize) -> usize {
        (index / self.stride(qudit)) % self.qudits
    }

    /// Applies one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::ModeSplitter { qudit, span } => {
                if span < 2 {
                    return;
                }
                let stride = self.stride(qudit);
                let norm = 1.0 / (span as f64).sqrt();
                // k-point Fourier transform on levels 0..span; column 0 is
                // the uniform superposition
                let dft: Vec<Complex64> = (0..span * span)
                    .map(|i| Complex64::cis(TAU * ((i / span) * (i % span)) as f64 / span as f64) * norm)
                    .collect();
                let mut column = vec![ZERO; span];
                for base in 0..self.amps.len() {
                    if self.level_of(base, qudit) != 0 {
                        continue;
                    }
                    for (l, c) in column.iter_mut().enumerate() {
                        *c = self.amps[base + l * stride];
                    }
                    for a in 0..span {
                        self.amps[base + a * stride] = (0..span)
                            .map(|b| dft[a * span + b] * column[b])
                            .sum();
                    }
                }
            }
            Gate::PhaseShift {
                qudit,
                level,
                radians,
            } => {
                let w = Complex64::cis(radians);
                for i in 0..self.amps.len() {
                    if self.level_of(i, qudit) == level {
                        self.amps[i] *= w;
                    }
                }
            }
            Gate::ControlledSwap {
                control,
                control_level,
                target,
                levels: (a, b),
            } => {
                let stride = self.stride(target);
                for i in 0..self.amps.len() {
                    if self.level_of(i, control) == control_level && self.level_of(i, target) == a {
                        let j = i + b * stride - a * stride;
                        self.amps.swap(i, j);
                    }
                }
            }
        }
    }
}

fn check_register_size(qudits: usize) -> Result<()> {
    if qudits == 0 {
        return Err(Error::InvalidSize("register needs at least one qudit".into()));
    }
    if qudits > MAX_REGISTER_QUDITS {
        return Err(Error::SizeLimit {
            what: "register qudits",
            value: qudits,
            limit: MAX_REGISTER_QUDITS,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `1×span` splitter sending level 0 of `qudit` to the uniform
    /// superposition of levels `0..span`.
    ModeSplitter { qudit: usize, span: usize },
    /// Phase `e^{i·radians}` on one level of a qudit.
    PhaseShift {
        qudit: usize,
        level: usize,
        radians: f64,
    },
    /// Swaps two levels of `target` when `control` sits in `control_level`.
    ControlledSwap {
        control: usize,
        control_level: usize,
        target: usize,
        levels: (usize, usize),
    },
}

impl Gate {
    fn validate(&self, qudits: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match *self {
            Gate::ModeSplitter { qudit, span } => {
                if qudit >= qudits || span == 0 || span > qudits {
                    return bad(format!("splitter on qudit {qudit} with span {span}"));
                }
            }
            Gate::PhaseShift { qudit, level, radians } => {
                if qudit >= qudits || level >= qudits || !radians.is_finite() {
                    return bad(format!("phase {radians} on qudit {qudit} level {level}"));
                }
            }
            Gate::ControlledSwap {
                control,
                control_level,
                target,
                levels: (a, b),
            } => {
                if control >= qudits
                    || target >= qudits
                    || control == target
                    || control_level >= qudits
                    || a >= qudits
                    || b >= qudits
                    || a == b
                {
                    return bad(format!(
                        "controlled swap {control}:{control_level} -> {target} ({a},{b})"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Ordered gate list over `N` qudits of dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditCircuit {
    qudits: usize,
    gates: Vec<Gate>,
    /// `step_ends[r−1]`: gate count once `B[r+1..1]` hold `|ψ_{r+1}⟩`.
    step_ends: Vec<usize>,
}

impl QuditCircuit {
    pub fn new(qudits: usize, gates: Vec<Gate>) -> Result<Self> {
        if qudits == 0 {
            return Err(Error::InvalidSize("circuit needs at least one qudit".into()));
        }
        for g in &gates {
            g.validate(qudits)?;
        }
        Ok(QuditCircuit {
            qudits,
            gates,
            step_ends: Vec::new(),
        })
    }

    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of leading gates after which qudits `B[q], …, B[1]` hold
    /// `|ψ_q(φ)⟩` and the higher qudits are still in their phased
    /// superpositions. Only available on circuits from
    /// [`build_stategen_circuit`], for `1 ≤ q ≤ N`.
    pub fn prefix_preparing(&self, q: usize) -> Option<usize> {
        if q == 0 || q > self.qudits || self.step_ends.len() + 1 != self.qudits {
            return None;
        }
        if q == 1 {
            let local = self.gates.len() - self.controlled_count();
            return Some(local);
        }
        Some(self.step_ends[q - 2])
    }

    /// The circuit truncated to its first `n` gates.
    pub fn prefix(&self, n: usize) -> QuditCircuit {
        QuditCircuit {
            qudits: self.qudits,
            gates: self.gates[..n.min(self.gates.len())].to_vec(),
            step_ends: Vec::new(),
        }
    }

    fn controlled_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::ControlledSwap { .. }))
            .count()
    }
}

/// Circuit that maps `|1⟩^{⊗N}` to `|ψ_N(φ)⟩`.
pub fn build_stategen_circuit(qudits: usize, phase: ExchangePhase) -> Result<QuditCircuit> {
    if qudits < 2 {
        return Err(Error::InvalidSize(format!(
            "state generation needs N >= 2, got {qudits}"
        )));
    }
    let mut gates = Vec::new();
    for q in 1..qudits {
        gates.push(Gate::ModeSplitter {
            qudit: q,
            span: q + 1,
        });
    }
    for q in 1..qudits {
        for level in 1..=q {
            gates.push(Gate::PhaseShift {
                qudit: q,
                level,
                radians: level as f64 * phase.radians(),
            });
        }
    }
    let mut step_ends = Vec::with_capacity(qudits - 1);
    // step r: control B[r+1] (index r), targets B[r]..B[1] (indices r-1..0)
    for r in 1..qudits {
        for control_level in 0..=r {
            for target in (0..r).rev() {
                // {j..r} -> {j+1..r+1}, top level first so nothing collides
                for low in (control_level..r).rev() {
                    gates.push(Gate::ControlledSwap {
                        control: r,
                        control_level,
                        target,
                        levels: (low, low + 1),
                    });
                }
            }
        }
        step_ends.push(gates.len());
    }
    let mut c = QuditCircuit::new(qudits, gates)?;
    c.step_ends = step_ends;
    Ok(c)
}

/// Applies every gate of `circuit` in order.
pub fn simulate_circuit(circuit: &QuditCircuit, initial: &QuditRegister) -> Result<QuditRegister> {
    if circuit.qudits() != initial.qudits() {
        return Err(Error::InvalidDimension(format!(
            "circuit over {} qudits applied to a register of {}",
            circuit.qudits(),
            initial.qudits()
        )));
    }
    let mut reg = initial.clone();
    for g in circuit.gates() {
        reg.apply_gate(g);
    }
    Ok(reg)
}

/// `|ψ_N(φ)⟩` written on the register: copy `c` ↔ the `c`-th listed qudit
/// (`B[N−c]` counting copies from 0), level `ℓ` ↔ input `ν_ℓ`.
pub fn target_register(qudits: usize, phase: ExchangePhase) -> Result<QuditRegister> {
    check_register_size(qudits)?;
    let inputs: Vec<usize> = (0..qudits).collect();
    let state = build_entangled_state(&inputs, phase)?;
    let mut amps = vec![ZERO; qudits.pow(qudits as u32)];
    for (label, a) in state.terms() {
        let i = label.iter().fold(0, |acc, &l| acc * qudits + l);
        amps[i] = a;
    }
    QuditRegister::from_amplitudes(qudits, amps)
}

/// `|⟨ψ_N(φ)|circuit|1…1⟩|²`.
pub fn circuit_fidelity(circuit: &QuditCircuit, phase: ExchangePhase) -> Result<f64> {
    let n = circuit.qudits();
    check_register_size(n)?;
    let out = simulate_circuit(circuit, &QuditRegister::ground(n)?)?;
    Ok(target_register(n, phase)?.inner(&out).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCounts {
    /// Two-mode splitters after decomposing each `1×k` splitter into `k−1`.
    pub splitter_decompositions: usize,
    pub phase_shifts: usize,
    /// Two-level swaps, each conditioned on one control level.
    pub controlled_swaps: usize,
}

impl GateCounts {
    pub fn local(&self) -> usize {
        self.splitter_decompositions + self.phase_shifts
    }
}

pub fn gate_counts(circuit: &QuditCircuit) -> GateCounts {
    let mut c = GateCounts {
        splitter_decompositions: 0,
        phase_shifts: 0,
        controlled_swaps: 0,
    };
    for g in circuit.gates() {
        match g {
            Gate::ModeSplitter { span, .. } => c.splitter_decompositions += span - 1,
            Gate::PhaseShift { .. } => c.phase_shifts += 1,
            Gate::ControlledSwap { .. } => c.controlled_swaps += 1,
        }
    }
    c
}

/// `Σ_{i=1}^{N−1} i · Σ_{j=1}^{i} j`. Grows as `N⁴/8`, so no `N³` bound
/// holds for large `N` (it first fails at `N = 9`).
pub fn controlled_swap_formula(qudits: usize) -> usize {
    (1..qudits).map(|i| i * i * (i + 1) / 2).sum()
}

/// `Σ_{j=1}^{N} (j−1)`, the count of both two-mode splitters and phase
/// shifts.
pub fn local_op_formula(qudits: usize) -> usize {
    qudits * qudits.saturating_sub(1) / 2
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::ModeSplitter { qudit, span } => write!(f, "splitter q={qudit} span={span}"),
            Gate::PhaseShift {
                qudit,
                level,
                radians,
            } => write!(f, "phase q={qudit} level={level} rad={radians:?}"),
            Gate::ControlledSwap {
                control,
                control_level,
                target,
                levels: (a, b),
            } => write!(
                f,
                "cswap control={control} level={control_level} target={target} swap={a},{b}"
            ),
        }
    }
}

/// Text form: a `qudits N` header followed by one gate per line. Blank
/// lines and `#` comments are ignored when parsing.
impl fmt::Display for QuditCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qudits {}", self.qudits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let mut words = line.split_whitespace();
    let kind = words.next().ok_or("empty gate line")?;
    let mut fields = std::collections::HashMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found `{w}`"))?;
        if fields.insert(k, v).is_some() {
            return Err(format!("field `{k}` repeated"));
        }
    }
    let mut take = |k: &str| -> std::result::Result<&str, String> {
        fields.remove(k).ok_or_else(|| format!("missing field `{k}`"))
    };
    let int = |s: &str| s.parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    let gate = match kind {
        "splitter" => Gate::ModeSplitter {
            qudit: int(take("q")?)?,
            span: int(take("span")?)?,
        },
        "phase" => Gate::PhaseShift {
            qudit: int(take("q")?)?,
            level: int(take("level")?)?,
            radians: take("rad")?
                .parse::<f64>()
                .map_err(|e| format!("phase: {e}"))?,
        },
        "cswap" => {
            let control = int(take("control")?)?;
            let control_level = int(take("level")?)?;
            let target = int(take("target")?)?;
            let swap = take("swap")?;
            let (a, b) = swap
                .split_once(',')
                .ok_or_else(|| format!("swap `{swap}` should be `a,b`"))?;
            Gate::ControlledSwap {
                control,
                control_level,
                target,
                levels: (int(a)?, int(b)?),
            }
        }
        other => return Err(format!("unknown gate kind `{other}`")),
    };
    if let Some(k) = fields.keys().next() {
        return Err(format!("unexpected field `{k}`"));
    }
    Ok(gate)
}

impl FromStr for QuditCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut qudits = None;
        let mut gates = Vec::new();
        for (n, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: n + 1,
                message,
            };
            if qudits.is_none() {
                let count = line
                    .strip_prefix("qudits ")
                    .ok_or_else(|| err("expected `qudits N` header".into()))?
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| err(e.to_string()))?;
                qudits = Some(count);
                continue;
            }
            gates.push(parse_gate(line).map_err(err)?);
        }
        let qudits = qudits.ok_or(Error::Parse {
            line: 0,
            message: "missing `qudits N` header".into(),
        })?;
        QuditCircuit::new(qudits, gates)
    }
}
