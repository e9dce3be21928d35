//! Comparing correlation distributions.

use crate::error::{Error, Result};

/// Non-negative weights over an index set, not necessarily normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {v}"
            )));
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(Error::DegenerateDistribution(
                "distribution has zero total mass".into(),
            ));
        }
        Ok(Distribution { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn normalized(&self) -> Vec<f64> {
        let t = self.total();
        self.values.iter().map(|v| v / t).collect()
    }

    /// Keeps the entries whose flag is set.
    pub fn restrict(&self, keep: &[bool]) -> Result<Distribution> {
        if keep.len() != self.values.len() {
            return Err(Error::InvalidDimension(format!(
                "mask of length {} for {} entries",
                keep.len(),
                self.values.len()
            )));
        }
        Distribution::new(
            self.values
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(&v, _)| v)
                .collect(),
        )
    }
}

fn same_support(a: &Distribution, b: &Distribution) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidDimension(format!(
            "distributions over {} and {} entries",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `S = (Σ √(Γ_i P_i))² / (Σ Γ · Σ P)`, in `[0, 1]` and equal to 1 exactly
/// when the two are proportional.
pub fn similarity(gamma: &Distribution, p: &Distribution) -> Result<f64> {
    same_support(gamma, p)?;
    let overlap: f64 = gamma
        .values
        .iter()
        .zip(&p.values)
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    let s = overlap * overlap / (gamma.total() * p.total());
    Ok(s.min(1.0))
}

/// [`similarity`] after dropping every entry whose flag is unset from both
/// arguments.
pub fn masked_similarity(gamma: &Distribution, p: &Distribution, keep: &[bool]) -> Result<f64> {
    same_support(gamma, p)?;
    similarity(&gamma.restrict(keep)?, &p.restrict(keep)?)
}

/// `½ Σ |Γ_i − P_i|` after normalising both to unit mass.
pub fn total_variation(gamma: &Distribution, p: &Distribution) -> Result<f64> {
    same_support(gamma, p)?;
    let tv = 0.5
        * gamma
            .normalized()
            .iter()
            .zip(p.normalized())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    Ok(tv.min(1.0))
}

pub fn masked_total_variation(gamma: &Distribution, p: &Distribution, keep: &[bool]) -> Result<f64> {
    same_support(gamma, p)?;
    total_variation(&gamma.restrict(keep)?, &p.restrict(keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identical_and_disjoint() {
        let x = d(&[0.2, 0.0, 3.0, 1.5]);
        assert!((similarity(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(total_variation(&x, &x).unwrap(), 0.0);
        let a = d(&[1.0, 0.0]);
        let b = d(&[0.0, 2.0]);
        assert_eq!(similarity(&a, &b).unwrap(), 0.0);
        assert_eq!(total_variation(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn half_overlap() {
        let s = similarity(&d(&[1.0, 0.0]), &d(&[0.5, 0.5])).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        let tv = total_variation(&d(&[0.75, 0.25]), &d(&[0.25, 0.75])).unwrap();
        assert!((tv - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            Distribution::new(vec![0.0, 0.0]),
            Err(Error::DegenerateDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![]),
            Err(Error::DegenerateDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![1.0, -0.1]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![f64::NAN]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            similarity(&d(&[1.0]), &d(&[1.0, 1.0])),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn mask_drops_entries_from_both() {
        let g = d(&[1.0, 0.0, 5.0]);
        let p = d(&[1.0, 3.0, 0.0]);
        let keep = [true, true, false];
        let s = masked_similarity(&g, &p, &keep).unwrap();
        assert!((s - 0.25).abs() < 1e-15);
        // nothing left on one side
        assert!(matches!(
            masked_similarity(&d(&[0.0, 1.0]), &d(&[1.0, 1.0]), &[true, false]),
            Err(Error::DegenerateDistribution(_))
        ));
    }
}
