//! Multi-particle correlations under arbitrary exchange statistics.
//!
//! For `N` particles injected into distinct inputs `ν` of a mode
//! transformation `A`, the correlation at output tuple `μ` with exchange
//! phase `φ` is
//!
//! ```text
//! Γ^φ_μ = | Σ_σ e^{iτ(σ)φ} Π_j A[μ_j, ν_σ(j)] |²
//! ```
//!
//! where `τ(σ)` counts inversions. `φ = 0` gives the permanent (bosons) and
//! `φ = π` the determinant (fermions). The same distribution arises, up to
//! a factor `N!`, from `N` copies of a one-particle process fed with the
//! entangled state `|ψ_N(φ)⟩`; see [`entangle`] and for its preparation
//! [`stategen`].

pub mod correlation;
pub mod entangle;
pub mod error;
pub mod kernels;
pub mod mask;
pub mod matrix;
pub mod metrics;
pub mod permutation;
pub mod phase;
pub mod sampling;
pub mod stategen;
pub mod walk;

pub use correlation::{
    classical_correlation, correlation_tensor, exchange_sum, n_particle_correlation,
    two_particle_correlation, CorrelationMatrix,
};
pub use entangle::{
    build_entangled_state, coincidence_distribution, distinguishable_distribution, evolve,
    symmetrized_distribution, ProcessCopies, SparseFockState,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use kernels::{determinant, permanent};
pub use mask::{DetectionMask, Parity};
pub use matrix::{unitarity_defect, ComplexMatrix};
pub use metrics::{similarity, total_variation, Distribution};
pub use phase::ExchangePhase;
pub use stategen::{build_stategen_circuit, circuit_fidelity, gate_counts, simulate_circuit, QuditCircuit};
pub use walk::{build_walk_hamiltonian, walk_unitary, LabelMap, WalkConfig, WalkHamiltonian};
