//! Detection masks for outputs that cannot be measured together.
//!
//! The fibre array at the output reaches either every odd-labelled or every
//! even-labelled waveguide in one run, so only tuples whose outputs share
//! that parity are recorded.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    /// Every output measurable.
    None,
    Odd,
    Even,
    /// Measurable under either the odd run or the even run.
    UnionOfRuns,
}

impl Parity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Parity::None),
            "odd" => Some(Parity::Odd),
            "even" => Some(Parity::Even),
            "both" | "union" | "union-of-runs" => Some(Parity::UnionOfRuns),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::None => "none",
            Parity::Odd => "odd",
            Parity::Even => "even",
            Parity::UnionOfRuns => "both",
        }
    }
}

/// Measurability rule over output labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionMask {
    pub parity: Parity,
}

impl DetectionMask {
    pub const NONE: DetectionMask = DetectionMask {
        parity: Parity::None,
    };

    pub fn new(parity: Parity) -> Self {
        DetectionMask { parity }
    }

    /// Whether a tuple of output labels (signed waveguide labels) can be
    /// recorded.
    pub fn measurable(&self, labels: &[i64]) -> bool {
        let odd = |l: &i64| l.rem_euclid(2) == 1;
        match self.parity {
            Parity::None => true,
            Parity::Odd => labels.iter().all(odd),
            Parity::Even => labels.iter().all(|l| !odd(l)),
            Parity::UnionOfRuns => labels.iter().all(odd) || labels.iter().all(|l| !odd(l)),
        }
    }

    /// Flags for every ordered tuple of `order` outputs drawn from
    /// `labels`, in row-major tuple order.
    pub fn flags(&self, labels: &[i64], order: usize) -> Vec<bool> {
        let w = labels.len();
        let total = w.pow(order as u32);
        let mut tuple = vec![0i64; order];
        (0..total)
            .map(|mut flat| {
                for slot in (0..order).rev() {
                    tuple[slot] = labels[flat % w];
                    flat /= w;
                }
                self.measurable(&tuple)
            })
            .collect()
    }
}
