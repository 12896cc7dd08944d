//! Shannon information calculus over small discrete joint distributions.
//!
//! Entropies are in bits. For two dimensions the mutual information is
//! `T12 = H1 + H2 - H12` and the mutual redundancy is its negation; for three
//! dimensions the configurational information
//! `T123 = H1 + H2 + H3 - H12 - H13 - H23 + H123` is reported as the
//! redundancy directly and may be negative.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest deviation of the cell total from 1 that is silently renormalized.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Probability table over 1 to 3 categorical dimensions, stored row-major
/// (last dimension varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    cardinalities: Vec<usize>,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    pub fn new(cardinalities: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        if cardinalities.is_empty() || cardinalities.len() > 3 {
            return invalid(format!(
                "joint distribution needs 1 to 3 dimensions, got {}",
                cardinalities.len()
            ));
        }
        if cardinalities.iter().any(|&c| c == 0) {
            return invalid("every dimension needs at least one outcome");
        }
        let cells: usize = cardinalities.iter().product();
        if cells != probabilities.len() {
            return invalid(format!(
                "shape {:?} needs {} cells, got {}",
                cardinalities,
                cells,
                probabilities.len()
            ));
        }
        if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return invalid(format!("probability cells must be finite and >= 0, got {p}"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return invalid(format!("probability cells sum to {total}, expected 1"));
        }
        let probabilities = probabilities.into_iter().map(|p| p / total).collect();
        Ok(JointDistribution {
            cardinalities,
            probabilities,
        })
    }

    /// One-dimensional distribution.
    pub fn from_slice(p: &[f64]) -> Result<Self> {
        Self::new(vec![p.len()], p.to_vec())
    }

    /// Product of independent marginals, in the given dimension order.
    pub fn product(marginals: &[&[f64]]) -> Result<Self> {
        let cards: Vec<usize> = marginals.iter().map(|m| m.len()).collect();
        let mut cells = vec![1.0];
        for m in marginals {
            cells = cells
                .iter()
                .flat_map(|c| m.iter().map(move |p| c * p))
                .collect();
        }
        Self::new(cards, cells)
    }

    pub fn dims(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims()];
        for d in (0..self.dims().saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * self.cardinalities[d + 1];
        }
        strides
    }

    fn coords(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims()];
        for d in (0..self.dims()).rev() {
            out[d] = flat % self.cardinalities[d];
            flat /= self.cardinalities[d];
        }
        out
    }

    /// Marginal on `subset`, keeping the listed dimensions in ascending order.
    pub fn marginal(&self, subset: &[usize]) -> Result<Self> {
        let dims = self.normalize_subset(subset)?;
        let cards: Vec<usize> = dims.iter().map(|&d| self.cardinalities[d]).collect();
        let mut out = vec![0.0; cards.iter().product()];
        for (flat, p) in self.probabilities.iter().enumerate() {
            let c = self.coords(flat);
            let mut idx = 0;
            for (&d, &card) in dims.iter().zip(&cards) {
                idx = idx * card + c[d];
            }
            out[idx] += p;
        }
        Ok(JointDistribution {
            cardinalities: cards,
            probabilities: out,
        })
    }

    /// Reorder dimensions: dimension `i` of the result is dimension `order[i]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..self.dims()).collect::<Vec<_>>() {
            return invalid(format!("{order:?} is not a permutation of the dimensions"));
        }
        let cards: Vec<usize> = order.iter().map(|&d| self.cardinalities[d]).collect();
        let strides = self.strides();
        let total: usize = cards.iter().product();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut src = 0;
            for i in (0..order.len()).rev() {
                let ci = rem % cards[i];
                rem /= cards[i];
                src += ci * strides[order[i]];
            }
            out.push(self.probabilities[src]);
        }
        Ok(JointDistribution {
            cardinalities: cards,
            probabilities: out,
        })
    }

    fn normalize_subset(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return invalid("entropy subset must not be empty");
        }
        let mut dims = subset.to_vec();
        dims.sort_unstable();
        dims.dedup();
        if let Some(&d) = dims.iter().find(|&&d| d >= self.dims()) {
            return invalid(format!(
                "dimension {d} out of range for a {}-dimensional table",
                self.dims()
            ));
        }
        Ok(dims)
    }
}

fn entropy_of(cells: &[f64]) -> f64 {
    let h: f64 = cells
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 and tiny negative rounding collapse to zero
    h.max(0.0)
}

/// Entropy in bits of the marginal on `subset` (0-based dimension indices).
pub fn shannon_entropy(dist: &JointDistribution, subset: &[usize]) -> Result<f64> {
    let marginal = dist.marginal(subset)?;
    Ok(entropy_of(&marginal.probabilities))
}

/// `T12 = H1 + H2 - H12`.
pub fn mutual_information_2(dist: &JointDistribution) -> Result<f64> {
    if dist.dims() != 2 {
        return invalid(format!(
            "mutual information needs 2 dimensions, got {}",
            dist.dims()
        ));
    }
    let h1 = shannon_entropy(dist, &[0])?;
    let h2 = shannon_entropy(dist, &[1])?;
    let h12 = shannon_entropy(dist, &[0, 1])?;
    Ok(h1 + h2 - h12)
}

/// `T123 = H1 + H2 + H3 - H12 - H13 - H23 + H123`; may be negative.
pub fn configurational_information_3(dist: &JointDistribution) -> Result<f64> {
    if dist.dims() != 3 {
        return invalid(format!(
            "configurational information needs 3 dimensions, got {}",
            dist.dims()
        ));
    }
    let h = |s: &[usize]| shannon_entropy(dist, s);
    Ok(h(&[0])? + h(&[1])? + h(&[2])? - h(&[0, 1])? - h(&[0, 2])? - h(&[1, 2])?
        + h(&[0, 1, 2])?)
}

/// `R12 = -T12` for two dimensions, `R123 = T123` for three.
pub fn mutual_redundancy(dist: &JointDistribution) -> Result<f64> {
    match dist.dims() {
        2 => Ok(-mutual_information_2(dist)?),
        3 => configurational_information_3(dist),
        d => invalid(format!("mutual redundancy needs 2 or 3 dimensions, got {d}")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetEntropy {
    /// 1-based dimension labels joined, e.g. "13" for H13.
    pub subset: String,
    pub bits: f64,
}

/// Every subset entropy plus the dimension-appropriate T and R values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InformationReport {
    pub dims: usize,
    pub entropies: Vec<SubsetEntropy>,
    /// T12 or T123; absent for one dimension.
    pub transmission: Option<f64>,
    pub redundancy: Option<f64>,
}

pub fn information_report(dist: &JointDistribution) -> Result<InformationReport> {
    let n = dist.dims();
    let mut entropies = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|d| mask & (1 << d) != 0).collect();
        let label: String = subset.iter().map(|d| (d + 1).to_string()).collect();
        entropies.push((subset.len(), label, shannon_entropy(dist, &subset)?));
    }
    entropies.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let (transmission, redundancy) = match n {
        2 => (Some(mutual_information_2(dist)?), Some(mutual_redundancy(dist)?)),
        3 => (
            Some(configurational_information_3(dist)?),
            Some(mutual_redundancy(dist)?),
        ),
        _ => (None, None),
    };
    Ok(InformationReport {
        dims: n,
        entropies: entropies
            .into_iter()
            .map(|(_, subset, bits)| SubsetEntropy { subset, bits })
            .collect(),
        transmission,
        redundancy,
    })
}
