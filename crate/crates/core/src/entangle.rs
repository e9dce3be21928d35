//! Simulating exchange statistics with entanglement.
//!
//! One particle enters each of `N` copies of the process `A`. The copies
//! share the `N`-partite, `N`-level state
//!
//! ```text
//! |ψ_N(φ)⟩ = (1/√N!) Σ_σ e^{iτ(σ)φ} Π_j a^{(j)†}_{ν_{σ(j)}} |0⟩
//! ```
//!
//! and since no two particles ever share a copy, evolution is a plain tensor
//! product. The `N`-fold coincidence probability at `(μ₁, …, μ_N)` then
//! equals `Γ^φ_μ / N!`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::correlation::{check_inputs, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::kernels::permanent;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::permutation::{factorial, HeapPermutations};
use crate::phase::ExchangePhase;

/// Evolved states with at most this many amplitudes are stored densely.
pub const DENSE_LIMIT: usize = 1 << 22;

/// Upper bound on the particle number for state construction.
pub const MAX_COPIES: usize = 9;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Sparse(BTreeMap<Vec<usize>, Complex64>),
    /// Row-major over `extent^copies` labels.
    Dense(Vec<Complex64>),
}

/// Superposition of labels `(m₁, …, m_N)`, `m_j` being the occupied mode of
/// copy `j`, with complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFockState {
    copies: usize,
    extent: usize,
    storage: Storage,
}

impl SparseFockState {
    /// Builds a sparse state over `extent` modes per copy. Repeated labels
    /// accumulate.
    pub fn from_terms(
        copies: usize,
        extent: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Complex64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, amp) in terms {
            if label.len() != copies {
                return Err(Error::InvalidDimension(format!(
                    "label {label:?} does not have {copies} entries"
                )));
            }
            if let Some(&m) = label.iter().find(|&&m| m >= extent) {
                return Err(Error::InvalidIndex { index: m, extent });
            }
            *map.entry(label).or_insert(ZERO) += amp;
        }
        Ok(SparseFockState {
            copies,
            extent,
            storage: Storage::Sparse(map),
        })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Modes available in each copy.
    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    fn flat(&self, label: &[usize]) -> usize {
        label.iter().fold(0, |acc, &m| acc * self.extent + m)
    }

    fn label(&self, mut flat: usize) -> Vec<usize> {
        let mut l = vec![0; self.copies];
        for slot in (0..self.copies).rev() {
            l[slot] = flat % self.extent;
            flat /= self.extent;
        }
        l
    }

    pub fn amplitude(&self, label: &[usize]) -> Complex64 {
        if label.len() != self.copies || label.iter().any(|&m| m >= self.extent) {
            return ZERO;
        }
        match &self.storage {
            Storage::Sparse(map) => map.get(label).copied().unwrap_or(ZERO),
            Storage::Dense(v) => v[self.flat(label)],
        }
    }

    /// Non-zero terms in label order.
    pub fn terms(&self) -> Vec<(Vec<usize>, Complex64)> {
        match &self.storage {
            Storage::Sparse(map) => map
                .iter()
                .filter(|(_, a)| **a != ZERO)
                .map(|(l, a)| (l.clone(), *a))
                .collect(),
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != ZERO)
                .map(|(i, a)| (self.label(i), *a))
                .collect(),
        }
    }

    /// Number of non-zero amplitudes.
    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Sparse(map) => map.values().filter(|a| **a != ZERO).count(),
            Storage::Dense(v) => v.iter().filter(|a| **a != ZERO).count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.storage {
            Storage::Sparse(map) => map.values().map(|a| a.norm_sqr()).sum(),
            Storage::Dense(v) => v.iter().map(|a| a.norm_sqr()).sum(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SparseFockState) -> Complex64 {
        self.terms()
            .into_iter()
            .map(|(l, a)| a.conj() * other.amplitude(&l))
            .sum()
    }

    /// Exchanges which copy holds which particle: label entries `a` and `b`
    /// trade places.
    pub fn swap_copies(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.copies || b >= self.copies {
            return Err(Error::InvalidIndex {
                index: a.max(b),
                extent: self.copies,
            });
        }
        Self::from_terms(
            self.copies,
            self.extent,
            self.terms().into_iter().map(|(mut l, amp)| {
                l.swap(a, b);
                (l, amp)
            }),
        )
    }
}

/// The `N` transformations `A^(1), …, A^(N)`, one per particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessCopies {
    copies: Vec<ComplexMatrix>,
}

impl ProcessCopies {
    pub fn new(copies: Vec<ComplexMatrix>) -> Result<Self> {
        let first = copies
            .first()
            .ok_or_else(|| Error::InvalidSize("no process copies supplied".into()))?;
        let shape = (first.rows(), first.cols());
        if let Some(bad) = copies.iter().find(|c| (c.rows(), c.cols()) != shape) {
            return Err(Error::InvalidDimension(format!(
                "copies differ in shape: {}x{} vs {}x{}",
                shape.0,
                shape.1,
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(ProcessCopies { copies })
    }

    /// `n` identical copies of `a`.
    pub fn identical(a: &ComplexMatrix, n: usize) -> Result<Self> {
        Self::new(vec![a.clone(); n])
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn get(&self, j: usize) -> &ComplexMatrix {
        &self.copies[j]
    }

    pub fn output_modes(&self) -> usize {
        self.copies[0].rows()
    }

    pub fn input_modes(&self) -> usize {
        self.copies[0].cols()
    }
}

/// `|ψ_N(φ)⟩` on inputs `ν` (strictly increasing, `N ≥ 2`). The state has
/// `N!` terms over `max(ν) + 1` modes per copy.
pub fn build_entangled_state(
    inputs: &[usize],
    phase: ExchangePhase,
) -> Result<SparseFockState> {
    let n = inputs.len();
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "entangled state needs at least two particles, got {n}"
        )));
    }
    if n > MAX_COPIES {
        return Err(Error::SizeLimit {
            what: "particle number",
            value: n,
            limit: MAX_COPIES,
        });
    }
    let extent = inputs.iter().max().unwrap() + 1;
    check_inputs(&ComplexMatrix::zeros(1, extent), inputs)?;
    let norm = 1.0 / (factorial(n) as f64).sqrt();
    let weights = phase.power_table(n * (n - 1) / 2);
    let mut terms = Vec::with_capacity(factorial(n));
    HeapPermutations::for_each(n, |p, inv| {
        let label = p.iter().map(|&i| inputs[i]).collect();
        terms.push((label, weights[inv] * norm));
    });
    SparseFockState::from_terms(n, extent, terms)
}

/// Pushes every copy's particle through its own transformation:
/// `a^{(j)†}_m → Σ_s A^{(j)}_{s,m} a^{(j)†}_s`.
pub fn evolve(state: &SparseFockState, procs: &ProcessCopies) -> Result<SparseFockState> {
    evolve_with_dense_limit(state, procs, DENSE_LIMIT)
}

/// [`evolve`] with the dense/sparse switch at `dense_limit` output
/// amplitudes instead of [`DENSE_LIMIT`].
pub fn evolve_with_dense_limit(
    state: &SparseFockState,
    procs: &ProcessCopies,
    dense_limit: usize,
) -> Result<SparseFockState> {
    let n = state.copies();
    if procs.len() != n {
        return Err(Error::InvalidDimension(format!(
            "{} process copies for a {n}-particle state",
            procs.len()
        )));
    }
    if state.extent() > procs.input_modes() {
        // only an error if a populated mode is out of reach
        if let Some((l, _)) = state
            .terms()
            .into_iter()
            .find(|(l, _)| l.iter().any(|&m| m >= procs.input_modes()))
        {
            return Err(Error::InvalidDimension(format!(
                "label {l:?} addresses modes beyond the {} inputs of each copy",
                procs.input_modes()
            )));
        }
    }
    let out = procs.output_modes();
    let terms = state.terms();
    let dense_len = out.checked_pow(n as u32).filter(|&l| l <= dense_limit);

    match dense_len {
        Some(len) => {
            let mut amps = vec![ZERO; len];
            let mut buf = Vec::with_capacity(len);
            for (label, amp) in &terms {
                // kron of the N input columns, scaled by the term amplitude
                buf.clear();
                buf.push(*amp);
                for (j, &m) in label.iter().enumerate() {
                    let a = procs.get(j);
                    let prev = std::mem::take(&mut buf);
                    buf.reserve(prev.len() * out);
                    for p in prev {
                        buf.extend((0..out).map(|s| p * a.get(s, m)));
                    }
                }
                for (o, b) in amps.iter_mut().zip(&buf) {
                    *o += b;
                }
            }
            Ok(SparseFockState {
                copies: n,
                extent: out,
                storage: Storage::Dense(amps),
            })
        }
        None => {
            let mut acc: HashMap<Vec<usize>, Complex64> = HashMap::new();
            for (label, amp) in &terms {
                let mut partial: Vec<(Vec<usize>, Complex64)> = vec![(Vec::new(), *amp)];
                for (j, &m) in label.iter().enumerate() {
                    let a = procs.get(j);
                    let mut next = Vec::with_capacity(partial.len() * out);
                    for (l, p) in &partial {
                        for s in 0..out {
                            let x = a.get(s, m);
                            if x != ZERO {
                                let mut l2 = l.clone();
                                l2.push(s);
                                next.push((l2, p * x));
                            }
                        }
                    }
                    partial = next;
                }
                for (l, v) in partial {
                    *acc.entry(l).or_insert(ZERO) += v;
                }
            }
            SparseFockState::from_terms(n, out, acc)
        }
    }
}

/// `P_μ = |⟨μ|state⟩|²` over every label tuple.
pub fn coincidence_distribution(state: &SparseFockState) -> Result<CorrelationMatrix> {
    let len = state
        .extent()
        .checked_pow(state.copies() as u32)
        .filter(|&l| l <= crate::correlation::MAX_TENSOR_ENTRIES)
        .ok_or(Error::SizeLimit {
            what: "output tuples",
            value: usize::MAX,
            limit: crate::correlation::MAX_TENSOR_ENTRIES,
        })?;
    let values = match &state.storage {
        Storage::Dense(v) => v.iter().map(|a| a.norm_sqr()).collect(),
        Storage::Sparse(map) => {
            let mut v = vec![0.0; len];
            for (l, a) in map {
                v[state.flat(l)] = a.norm_sqr();
            }
            v
        }
    };
    CorrelationMatrix::new(state.copies(), state.extent(), Vec::new(), None, values)
}

/// Sums `P` over the orderings of each output tuple, storing the result at
/// the non-decreasing representative. Entries at other tuples are zero.
///
/// Each distinct ordering is counted once, so a tuple with repeated modes
/// collects fewer than `N!` terms.
pub fn symmetrized_distribution(p: &CorrelationMatrix) -> Result<CorrelationMatrix> {
    let mut out = vec![0.0; p.len()];
    let mut mask = vec![false; p.len()];
    for (mut t, v, m) in p.entries() {
        t.sort_unstable();
        let i = p.flat_index(&t);
        out[i] += v;
        mask[i] |= m;
    }
    CorrelationMatrix::new(p.order(), p.extent(), p.inputs().to_vec(), p.phase(), out)?
        .with_mask(mask)
}

/// Correlations of `N` distinguishable particles: at each ordered output
/// tuple, `Σ_σ Π_j |A_{μ_j, ν_{σ(j)}}|²`, the permanent of the entrywise
/// squared block.
pub fn distinguishable_distribution(
    a: &ComplexMatrix,
    inputs: &[usize],
) -> Result<CorrelationMatrix> {
    check_inputs(a, inputs)?;
    let n = inputs.len();
    if n > MAX_COPIES {
        return Err(Error::SizeLimit {
            what: "particle number",
            value: n,
            limit: MAX_COPIES,
        });
    }
    let squared = a.map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let m = a.rows();
    let len = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    if len > crate::correlation::MAX_TENSOR_ENTRIES {
        return Err(Error::SizeLimit {
            what: "output tuples",
            value: len,
            limit: crate::correlation::MAX_TENSOR_ENTRIES,
        });
    }
    let mut values = Vec::with_capacity(len);
    let mut outputs = vec![0; n];
    for mut flat in 0..len {
        for slot in (0..n).rev() {
            outputs[slot] = flat % m;
            flat /= m;
        }
        let block = squared.submatrix(&outputs, inputs)?;
        values.push(permanent(&block)?.re.max(0.0));
    }
    CorrelationMatrix::new(n, m, inputs.to_vec(), None, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn two_particle_state() {
        let phi = ExchangePhase::new(0.9).unwrap();
        let s = build_entangled_state(&[1, 3], phi).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.amplitude(&[1, 3]) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&[3, 1]) - Complex64::cis(0.9) * FRAC_1_SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn symmetric_state_at_zero() {
        let s = build_entangled_state(&[0, 1], ExchangePhase::BOSON).unwrap();
        assert_eq!(s.amplitude(&[0, 1]), s.amplitude(&[1, 0]));
        assert!((s.amplitude(&[0, 1]) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn qutrit_state_phases() {
        let x = 0.37;
        let phi = ExchangePhase::new(x).unwrap();
        let (j, k, l) = (0, 2, 5);
        let s = build_entangled_state(&[j, k, l], phi).unwrap();
        let norm = 1.0 / 6f64.sqrt();
        let expected = [
            (vec![j, k, l], 0.0),
            (vec![j, l, k], x),
            (vec![k, j, l], x),
            (vec![k, l, j], 2.0 * x),
            (vec![l, j, k], 2.0 * x),
            (vec![l, k, j], 3.0 * x),
        ];
        assert_eq!(s.len(), 6);
        for (label, ph) in expected {
            assert!((s.amplitude(&label) - Complex64::cis(ph) * norm).norm() < 1e-15);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn duplicate_inputs_rejected() {
        assert_eq!(
            build_entangled_state(&[2, 2], ExchangePhase::BOSON),
            Err(Error::DuplicateInput(2))
        );
        assert!(matches!(
            build_entangled_state(&[2], ExchangePhase::BOSON),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn identity_copies_leave_state_unchanged() {
        let phi = ExchangePhase::new(1.3).unwrap();
        let s = build_entangled_state(&[0, 1, 3], phi).unwrap();
        let out = evolve(&s, &ProcessCopies::identical(&ComplexMatrix::identity(4), 3).unwrap())
            .unwrap();
        for (l, a) in s.terms() {
            assert_eq!(out.amplitude(&l), a);
        }
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn antisymmetric_state_on_beamsplitter() {
        let s = build_entangled_state(&[0, 1], ExchangePhase::FERMION).unwrap();
        let bs = ComplexMatrix::beamsplitter();
        let out = evolve(&s, &ProcessCopies::identical(&bs, 2).unwrap()).unwrap();
        let p = coincidence_distribution(&out).unwrap();
        assert!((p.get(&[0, 1]) - 0.5).abs() < 1e-15);
        assert!((p.get(&[1, 0]) - 0.5).abs() < 1e-15);
        assert!(p.get(&[0, 0]) < 1e-30);
        assert!(p.get(&[1, 1]) < 1e-30);
    }

    #[test]
    fn unevolved_coincidences() {
        let s = build_entangled_state(&[1, 2], ExchangePhase::new(2.0).unwrap()).unwrap();
        let p = coincidence_distribution(&s).unwrap();
        assert_eq!(p.extent(), 3);
        for (t, v, _) in p.entries() {
            let expect = if t == [1, 2] || t == [2, 1] { 0.5 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15, "{t:?}");
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(matches!(
            ProcessCopies::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]),
            Err(Error::InvalidDimension(_))
        ));
        let s = build_entangled_state(&[0, 4], ExchangePhase::BOSON).unwrap();
        let small = ProcessCopies::identical(&ComplexMatrix::identity(3), 2).unwrap();
        assert!(matches!(evolve(&s, &small), Err(Error::InvalidDimension(_))));
        let three = ProcessCopies::identical(&ComplexMatrix::identity(5), 3).unwrap();
        assert!(matches!(evolve(&s, &three), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn uniform_symmetrization_counts_orderings() {
        let m = 4;
        let p = CorrelationMatrix::new(2, m, vec![], None, vec![1.0 / 16.0; 16]).unwrap();
        let g = symmetrized_distribution(&p).unwrap();
        for r in 0..m {
            for q in 0..m {
                let v = g.get(&[r, q]);
                let expect = match r.cmp(&q) {
                    std::cmp::Ordering::Less => 2.0 / 16.0,
                    std::cmp::Ordering::Equal => 1.0 / 16.0,
                    std::cmp::Ordering::Greater => 0.0,
                };
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn distinguishable_on_beamsplitter() {
        let d = distinguishable_distribution(&ComplexMatrix::beamsplitter(), &[0, 1]).unwrap();
        for v in d.values() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn copy_exchange_symmetry() {
        let sym = build_entangled_state(&[0, 2], ExchangePhase::BOSON).unwrap();
        assert_eq!(sym.swap_copies(0, 1).unwrap(), sym);
        let anti = build_entangled_state(&[0, 2], ExchangePhase::new(PI).unwrap()).unwrap();
        let swapped = anti.swap_copies(0, 1).unwrap();
        for (l, a) in anti.terms() {
            assert_eq!(swapped.amplitude(&l), -a);
        }
    }
}
