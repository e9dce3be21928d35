//! Continuous-time quantum walk on a uniform waveguide array.
//!
//! The array Hamiltonian is the `M×M` tridiagonal Toeplitz matrix with site
//! potential `β` on the diagonal and coupling `C` on both off-diagonals. Its
//! spectrum is known in closed form,
//!
//! ```text
//! λ_k    = β + 2C cos(kπ/(M+1))
//! v_k(j) = √(2/(M+1)) sin(jkπ/(M+1)),     j, k = 1..M
//! ```
//!
//! so `U = exp(iHT) = V diag(e^{iλ_k T}) Vᵀ` is assembled directly with no
//! iterative eigensolver.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::Parity;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::phase::ExchangePhase;

/// Nearest-neighbour coupled-oscillator Hamiltonian of a uniform array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkHamiltonian {
    sites: usize,
    beta: f64,
    coupling: f64,
}

impl WalkHamiltonian {
    pub fn new(sites: usize, beta: f64, coupling: f64) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidDimension(
                "a waveguide array needs at least one site".into(),
            ));
        }
        if !beta.is_finite() || !coupling.is_finite() {
            return Err(Error::NonFinite(format!(
                "beta = {beta}, coupling = {coupling}"
            )));
        }
        Ok(WalkHamiltonian {
            sites,
            beta,
            coupling,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Dense real symmetric tridiagonal matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let (b, c) = (self.beta, self.coupling);
        ComplexMatrix::from_fn(self.sites, self.sites, |i, j| {
            if i == j {
                Complex64::new(b, 0.0)
            } else if i.abs_diff(j) == 1 {
                Complex64::new(c, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Eigenvalues `λ_k`, `k = 1..M`, in that order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m1 = (self.sites + 1) as f64;
        (1..=self.sites)
            .map(|k| self.beta + 2.0 * self.coupling * (k as f64 * PI / m1).cos())
            .collect()
    }

    /// Orthogonal eigenvector matrix, column `k−1` holding `v_k`. The
    /// matrix is symmetric.
    pub fn eigenvectors(&self) -> Vec<f64> {
        let m = self.sites;
        let m1 = (m + 1) as f64;
        let norm = (2.0 / m1).sqrt();
        let mut v = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                v[j * m + k] = norm * (((j + 1) * (k + 1)) as f64 * PI / m1).sin();
            }
        }
        v
    }

    /// `U = e^{iHT}` from the closed-form spectral decomposition.
    pub fn unitary(&self, time: f64) -> Result<ComplexMatrix> {
        if !time.is_finite() {
            return Err(Error::NonFinite(format!("propagation time {time}")));
        }
        let m = self.sites;
        let v = self.eigenvectors();
        let phases: Vec<Complex64> = self
            .eigenvalues()
            .iter()
            .map(|&l| Complex64::cis(l * time))
            .collect();
        let mut u = vec![ZERO; m * m];
        for a in 0..m {
            for b in a..m {
                let mut acc = ZERO;
                for k in 0..m {
                    acc += phases[k] * (v[a * m + k] * v[b * m + k]);
                }
                u[a * m + b] = acc;
                u[b * m + a] = acc;
            }
        }
        ComplexMatrix::from_vec(m, m, u)
    }
}

/// Dense tridiagonal walk Hamiltonian `H` for `M` sites.
pub fn build_walk_hamiltonian(sites: usize, beta: f64, coupling: f64) -> Result<ComplexMatrix> {
    Ok(WalkHamiltonian::new(sites, beta, coupling)?.matrix())
}

/// `exp(iHT)` for the walk Hamiltonian.
pub fn walk_unitary(h: &WalkHamiltonian, time: f64) -> Result<ComplexMatrix> {
    h.unitary(time)
}

/// Maps signed waveguide labels, centred on the middle of the array, to
/// internal indices `0..M`. Label 0 is index `⌊M/2⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub sites: usize,
    pub origin: usize,
}

impl LabelMap {
    /// Labels centred on the array: label 0 at index `⌊M/2⌋`.
    pub fn centred(sites: usize) -> Self {
        LabelMap {
            sites,
            origin: sites / 2,
        }
    }

    /// Labels equal to indices.
    pub fn plain(sites: usize) -> Self {
        LabelMap { sites, origin: 0 }
    }

    pub fn index(&self, label: i64) -> Result<usize> {
        let idx = label + self.origin as i64;
        if idx < 0 || idx as usize >= self.sites {
            return Err(Error::InvalidLabel {
                label,
                sites: self.sites,
            });
        }
        Ok(idx as usize)
    }

    pub fn label(&self, index: usize) -> i64 {
        index as i64 - self.origin as i64
    }
}

/// Parameters of one waveguide-array experiment.
///
/// `window` lists retained array indices (the block of `U` that is
/// accessible); `inputs` are array indices, each of which must lie inside
/// the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub hamiltonian: WalkHamiltonian,
    pub time: f64,
    pub window: Vec<usize>,
    pub inputs: Vec<usize>,
    pub phase: ExchangePhase,
    pub mask: Option<Parity>,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        let m = self.hamiltonian.sites();
        if !self.time.is_finite() {
            return Err(Error::NonFinite(format!("propagation time {}", self.time)));
        }
        if self.window.is_empty() {
            return Err(Error::InvalidDimension("empty mode window".into()));
        }
        check_distinct_in_range(&self.window, m)?;
        check_distinct_in_range(&self.inputs, m)?;
        if let Some(&i) = self.inputs.iter().find(|i| !self.window.contains(i)) {
            return Err(Error::InvalidArgument(format!(
                "input mode {i} lies outside the retained window"
            )));
        }
        Ok(())
    }

    pub fn labels(&self) -> LabelMap {
        LabelMap::centred(self.hamiltonian.sites())
    }

    pub fn unitary(&self) -> Result<ComplexMatrix> {
        self.hamiltonian.unitary(self.time)
    }

    /// `U[window, window]`.
    pub fn block(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        self.unitary()?.submatrix(&self.window, &self.window)
    }

    /// Input positions within the window, in the order given.
    pub fn block_inputs(&self) -> Vec<usize> {
        self.inputs
            .iter()
            .map(|i| self.window.iter().position(|w| w == i).unwrap())
            .collect()
    }

    /// The `width` consecutive indices around the array centre. For even
    /// widths the extra mode sits on the negative-label side, so a window of
    /// 10 in a 21-site array spans labels −5..=4.
    pub fn central_window(sites: usize, width: usize) -> Result<Vec<usize>> {
        if width == 0 || width > sites {
            return Err(Error::InvalidDimension(format!(
                "window of {width} modes in an array of {sites}"
            )));
        }
        let start = (sites / 2).saturating_sub(width / 2);
        let start = start.min(sites - width);
        Ok((start..start + width).collect())
    }
}

fn check_distinct_in_range(idx: &[usize], extent: usize) -> Result<()> {
    for (n, &i) in idx.iter().enumerate() {
        if i >= extent {
            return Err(Error::InvalidIndex { index: i, extent });
        }
        if idx[..n].contains(&i) {
            return Err(Error::DuplicateInput(i));
        }
    }
    Ok(())
}
