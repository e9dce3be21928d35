//! Exchange phases.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values within this distance of a multiple of π/4 snap onto it, so that
/// `φ`, `φ + 2π` and `φ − 2π` share one representative for the phases that
/// matter most (0, π and the quarter turns between them).
const SNAP_TOLERANCE: f64 = 1e-12;

/// Phase `φ` acquired when two identical particles are interchanged.
///
/// `φ = 0` gives bosons, `φ = π` fermions, anything else abelian anyons.
/// The stored value is the canonical representative in `[0, 2π)`. The
/// optional `(θ, ω)` decomposition `φ = ωθ` is metadata only: no
/// computation depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangePhase {
    phi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    braid: Option<Braid>,
}

/// Fractional phase `θ ∈ (0, π)` and signed winding number `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Braid {
    pub theta: f64,
    pub winding: i64,
}

fn canonical(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    let k = (r / FRAC_PI_4).round();
    if (r - k * FRAC_PI_4).abs() <= SNAP_TOLERANCE {
        // multiples of π/4 by powers of two are exact, so 4·(π/4) == π
        return (k as u32 % 8) as f64 * FRAC_PI_4;
    }
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl ExchangePhase {
    pub const BOSON: ExchangePhase = ExchangePhase {
        phi: 0.0,
        braid: None,
    };
    pub const FERMION: ExchangePhase = ExchangePhase { phi: PI, braid: None };

    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite(format!("exchange phase {phi}")));
        }
        Ok(ExchangePhase {
            phi: canonical(phi),
            braid: None,
        })
    }

    /// `φ = ω·θ` with `0 < θ < π`.
    pub fn braided(theta: f64, winding: i64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::InvalidArgument(format!(
                "fractional phase θ = {theta} must lie in (0, π)"
            )));
        }
        let mut p = Self::new(winding as f64 * theta)?;
        p.braid = Some(Braid { theta, winding });
        Ok(p)
    }

    /// Canonical value in `[0, 2π)`.
    #[inline]
    pub fn radians(&self) -> f64 {
        self.phi
    }

    pub fn braid(&self) -> Option<Braid> {
        self.braid
    }

    #[inline]
    pub fn is_bosonic(&self) -> bool {
        self.phi == 0.0
    }

    #[inline]
    pub fn is_fermionic(&self) -> bool {
        self.phi == PI
    }

    /// `e^{iφ}`, exactly ±1 for bosons and fermions.
    pub fn factor(&self) -> Complex64 {
        self.power(1)
    }

    /// `e^{ikφ}`. Exact for bosons and fermions.
    pub fn power(&self, k: i64) -> Complex64 {
        if self.is_bosonic() {
            Complex64::new(1.0, 0.0)
        } else if self.is_fermionic() {
            Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            Complex64::cis(k as f64 * self.phi)
        }
    }

    /// Table of `e^{ikφ}` for `k = 0..=max_power`.
    pub fn power_table(&self, max_power: usize) -> Vec<Complex64> {
        (0..=max_power as i64).map(|k| self.power(k)).collect()
    }

    pub fn negated(&self) -> Self {
        ExchangePhase {
            phi: canonical(-self.phi),
            braid: self.braid.map(|b| Braid {
                theta: b.theta,
                winding: -b.winding,
            }),
        }
    }
}

impl TryFrom<f64> for ExchangePhase {
    type Error = Error;

    fn try_from(phi: f64) -> Result<Self> {
        Self::new(phi)
    }
}
