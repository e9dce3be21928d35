//! Synthetic detection counts drawn from an exact distribution.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::Rng;

use crate::error::{Error, Result};
use crate::metrics::Distribution;

/// Multinomial draw of `shots` detection events over the entries of `p`.
pub fn sample_counts<R: Rng + ?Sized>(p: &Distribution, shots: u64, rng: &mut R) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let index = WeightedIndex::new(p.values())
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut counts = vec![0u64; p.len()];
    for _ in 0..shots {
        counts[index.sample(rng)] += 1;
    }
    Ok(counts)
}
