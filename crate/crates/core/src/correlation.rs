//! Exchange-statistics correlation functions.
//!
//! For `N` identical particles entering inputs `ν₁ < … < ν_N` of a mode
//! transformation `A` and leaving at outputs `μ₁, …, μ_N`,
//!
//! ```text
//! Γ^φ_μ = | Σ_{σ ∈ S_N} e^{iτ(σ)φ} Π_j A_{μ_j, ν_{σ(j)}} |²
//! ```
//!
//! where `τ(σ)` is the inversion count of `σ`. At `φ = 0` this is the
//! squared modulus of a permanent, at `φ = π` of a determinant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{determinant, permanent};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::permutation::HeapPermutations;
use crate::phase::ExchangePhase;

/// Default cap on the particle number for [`n_particle_correlation`].
pub const DEFAULT_MAX_PARTICLES: usize = 9;

/// Orders at or above this split the permutation sum across threads by the
/// image of the first row.
const PARALLEL_ORDER: usize = 8;

/// Upper bound on the number of output tuples in a dense tensor.
pub const MAX_TENSOR_ENTRIES: usize = 1 << 24;

/// Non-negative values indexed by ordered output tuples.
///
/// Entries are stored row-major over tuples `(o₁, …, o_N)` with each
/// `o_j ∈ 0..extent`. For `N = 2` this is an `extent × extent` matrix with
/// rows indexing the first output. Each entry carries a measurability flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    order: usize,
    extent: usize,
    inputs: Vec<usize>,
    phase: Option<ExchangePhase>,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn new(
        order: usize,
        extent: usize,
        inputs: Vec<usize>,
        phase: Option<ExchangePhase>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let expected = tensor_len(extent, order)?;
        if values.len() != expected {
            return Err(Error::InvalidDimension(format!(
                "{} values for {order} outputs over {extent} modes",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "correlation value {v} is negative or non-finite"
            )));
        }
        Ok(CorrelationMatrix {
            order,
            extent,
            inputs,
            phase,
            mask: vec![true; values.len()],
            values,
        })
    }

    /// Replaces the measurability flags.
    pub fn with_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.values.len() {
            return Err(Error::InvalidDimension(format!(
                "mask of {} flags for {} entries",
                mask.len(),
                self.values.len()
            )));
        }
        self.mask = mask;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn phase(&self) -> Option<ExchangePhase> {
        self.phase
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn flat_index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.order);
        tuple.iter().fold(0, |acc, &o| acc * self.extent + o)
    }

    pub fn tuple(&self, mut flat: usize) -> Vec<usize> {
        let mut t = vec![0; self.order];
        for slot in (0..self.order).rev() {
            t[slot] = flat % self.extent;
            flat /= self.extent;
        }
        t
    }

    pub fn get(&self, tuple: &[usize]) -> f64 {
        self.values[self.flat_index(tuple)]
    }

    pub fn is_measurable(&self, tuple: &[usize]) -> bool {
        self.mask[self.flat_index(tuple)]
    }

    /// Sum over every ordered tuple, masked or not.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn measurable_total(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mask)
            .filter(|(_, &m)| m)
            .map(|(v, _)| v)
            .sum()
    }

    /// Values divided by the total over measurable entries. Returns zeros
    /// when nothing measurable carries weight.
    pub fn normalized_values(&self) -> Vec<f64> {
        let t = self.measurable_total();
        if t > 0.0 {
            self.values.iter().map(|v| v / t).collect()
        } else {
            vec![0.0; self.values.len()]
        }
    }

    /// Iterates `(tuple, value, measurable)` in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64, bool)> + '_ {
        (0..self.values.len()).map(move |i| (self.tuple(i), self.values[i], self.mask[i]))
    }

    /// Fraction of the measurable mass that sits on tuples with a repeated
    /// output mode.
    pub fn bunched_fraction(&self) -> f64 {
        let total = self.measurable_total();
        if total == 0.0 {
            return 0.0;
        }
        let bunched: f64 = self
            .entries()
            .filter(|(t, _, m)| *m && has_repeat(t))
            .map(|(_, v, _)| v)
            .sum();
        bunched / total
    }
}

fn tensor_len(extent: usize, order: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..order {
        n = n
            .checked_mul(extent)
            .filter(|&n| n <= MAX_TENSOR_ENTRIES)
            .ok_or(Error::SizeLimit {
                what: "output tuples",
                value: extent.saturating_pow(order as u32),
                limit: MAX_TENSOR_ENTRIES,
            })?;
    }
    Ok(n)
}

pub(crate) fn has_repeat(t: &[usize]) -> bool {
    (0..t.len()).any(|i| t[i + 1..].contains(&t[i]))
}

fn check_column(a: &ComplexMatrix, j: usize) -> Result<()> {
    if j >= a.cols() {
        return Err(Error::InvalidIndex {
            index: j,
            extent: a.cols(),
        });
    }
    Ok(())
}

fn check_pair(a: &ComplexMatrix, j: usize, k: usize) -> Result<()> {
    check_column(a, j)?;
    check_column(a, k)?;
    if j == k {
        return Err(Error::DuplicateInput(j));
    }
    Ok(())
}

/// Inputs must be strictly increasing column indices.
pub(crate) fn check_inputs(a: &ComplexMatrix, inputs: &[usize]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::InvalidSize("at least one particle is required".into()));
    }
    for (n, &i) in inputs.iter().enumerate() {
        check_column(a, i)?;
        if inputs[..n].contains(&i) {
            return Err(Error::DuplicateInput(i));
        }
    }
    if inputs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!(
            "input modes {inputs:?} must be listed in increasing order"
        )));
    }
    Ok(())
}

/// Two-particle correlation `Γ^φ_{r,q} = |A_{r,j}A_{q,k} + e^{iφ}A_{r,k}A_{q,j}|²`
/// over every output pair `(r, q)` of `A`.
pub fn two_particle_correlation(
    a: &ComplexMatrix,
    j: usize,
    k: usize,
    phase: ExchangePhase,
) -> Result<CorrelationMatrix> {
    check_pair(a, j, k)?;
    let m = a.rows();
    let w = phase.factor();
    let mut values = Vec::with_capacity(m * m);
    for r in 0..m {
        for q in 0..m {
            let v = if phase.is_fermionic() && r == q {
                0.0
            } else {
                (a.get(r, j) * a.get(q, k) + w * a.get(r, k) * a.get(q, j)).norm_sqr()
            };
            values.push(v);
        }
    }
    CorrelationMatrix::new(2, m, vec![j, k], Some(phase), values)
}

/// Distinguishable-particle correlations
/// `Γ^C_{r,q} = |A_{r,j}A_{q,k}|² + |A_{r,k}A_{q,j}|²`.
pub fn classical_correlation(a: &ComplexMatrix, j: usize, k: usize) -> Result<CorrelationMatrix> {
    check_pair(a, j, k)?;
    let m = a.rows();
    let mut values = Vec::with_capacity(m * m);
    for r in 0..m {
        for q in 0..m {
            values.push(
                (a.get(r, j) * a.get(q, k)).norm_sqr() + (a.get(r, k) * a.get(q, j)).norm_sqr(),
            );
        }
    }
    CorrelationMatrix::new(2, m, vec![j, k], None, values)
}

/// `Σ_σ e^{iτ(σ)φ} Π_j B_{j,σ(j)}` for a square `B`: the phase-weighted
/// permutation sum whose squared modulus is `Γ^φ`.
///
/// Bosons go through Ryser's formula and fermions through elimination;
/// other phases enumerate permutations with Heap's algorithm while tracking
/// the inversion count, looking the weight up in a table of `e^{ikφ}`.
pub fn exchange_sum(b: &ComplexMatrix, phase: ExchangePhase) -> Result<Complex64> {
    if !b.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square block, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if phase.is_bosonic() {
        return permanent(b);
    }
    if phase.is_fermionic() {
        return determinant(b);
    }
    Ok(enumerate_exchange_sum(b, phase))
}

/// Permutation-enumeration route for any phase, including 0 and π.
pub fn enumerate_exchange_sum(b: &ComplexMatrix, phase: ExchangePhase) -> Complex64 {
    let n = b.rows();
    assert!(b.is_square(), "exchange sum needs a square block");
    if n == 0 {
        return ONE;
    }
    let weights = phase.power_table(n * (n - 1) / 2);
    if n < PARALLEL_ORDER {
        let cols: Vec<usize> = (0..n).collect();
        return partial_sum(b, 0, &cols, &weights, 0);
    }
    // Fix σ(0) = v: the v smaller columns that follow contribute v inversions
    // and the remaining columns keep their relative order.
    // Partial sums are added in a fixed order so results do not depend on
    // scheduling.
    let parts: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|v| {
            let cols: Vec<usize> = (0..n).filter(|&c| c != v).collect();
            b.get(0, v) * partial_sum(b, 1, &cols, &weights, v)
        })
        .collect();
    parts.into_iter().sum()
}

/// Sums over bijections from rows `first_row..n` onto `cols` (listed in
/// increasing order), with `base` inversions already accumulated.
fn partial_sum(
    b: &ComplexMatrix,
    first_row: usize,
    cols: &[usize],
    weights: &[Complex64],
    base: usize,
) -> Complex64 {
    let mut acc = ZERO;
    HeapPermutations::for_each(cols.len(), |p, inv| {
        let mut prod = weights[base + inv];
        for (slot, &q) in p.iter().enumerate() {
            prod *= b.get(first_row + slot, cols[q]);
        }
        acc += prod;
    });
    acc
}

/// `Γ^φ_μ` for inputs `ν` (strictly increasing) and outputs `μ` (any order,
/// repeats allowed), with the default particle-number cap.
pub fn n_particle_correlation(
    a: &ComplexMatrix,
    inputs: &[usize],
    outputs: &[usize],
    phase: ExchangePhase,
) -> Result<f64> {
    n_particle_correlation_with_limit(a, inputs, outputs, phase, DEFAULT_MAX_PARTICLES)
}

pub fn n_particle_correlation_with_limit(
    a: &ComplexMatrix,
    inputs: &[usize],
    outputs: &[usize],
    phase: ExchangePhase,
    max_particles: usize,
) -> Result<f64> {
    check_inputs(a, inputs)?;
    let n = inputs.len();
    if n > max_particles {
        return Err(Error::SizeLimit {
            what: "particle number",
            value: n,
            limit: max_particles,
        });
    }
    if outputs.len() != n {
        return Err(Error::InvalidDimension(format!(
            "{} outputs for {n} particles",
            outputs.len()
        )));
    }
    if let Some(&o) = outputs.iter().find(|&&o| o >= a.rows()) {
        return Err(Error::InvalidIndex {
            index: o,
            extent: a.rows(),
        });
    }
    if phase.is_fermionic() && has_repeat(outputs) {
        return Ok(0.0);
    }
    let block = a.submatrix(outputs, inputs)?;
    Ok(exchange_sum(&block, phase)?.norm_sqr())
}

/// `Γ^φ` on every ordered output tuple of `A`.
pub fn correlation_tensor(
    a: &ComplexMatrix,
    inputs: &[usize],
    phase: ExchangePhase,
) -> Result<CorrelationMatrix> {
    check_inputs(a, inputs)?;
    let n = inputs.len();
    if n > DEFAULT_MAX_PARTICLES {
        return Err(Error::SizeLimit {
            what: "particle number",
            value: n,
            limit: DEFAULT_MAX_PARTICLES,
        });
    }
    let m = a.rows();
    let len = tensor_len(m, n)?;
    let values = (0..len)
        .into_par_iter()
        .map(|mut flat| {
            let mut outputs = vec![0; n];
            for slot in (0..n).rev() {
                outputs[slot] = flat % m;
                flat /= m;
            }
            n_particle_correlation(a, inputs, &outputs, phase)
        })
        .collect::<Result<Vec<f64>>>()?;
    CorrelationMatrix::new(n, m, inputs.to_vec(), Some(phase), values)
}
