use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Tolerance on the total mass of a normalized distribution.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A probability vector over a labelled, ordered, finite support.
///
/// Labels are world ids, space-joined utterances or single word surfaces,
/// depending on the agent that produced the distribution. A distribution whose
/// weights were all zero is kept with its support but flagged as
/// empty-support; every mass is then zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    support: Vec<String>,
    mass: Vec<f64>,
    empty: bool,
}

impl Distribution {
    /// Normalizes non-negative weights. All-zero weights give an empty-support
    /// distribution.
    pub fn from_weights(support: Vec<String>, weights: Vec<f64>) -> Self {
        assert_eq!(support.len(), weights.len(), "support and weights differ in length");
        debug_assert!(weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Self::empty(support);
        }
        let mass = weights.into_iter().map(|w| w / total).collect();
        Distribution {
            support,
            mass,
            empty: false,
        }
    }

    pub fn uniform(support: Vec<String>) -> Self {
        let n = support.len();
        if n == 0 {
            return Self::empty(support);
        }
        Distribution {
            mass: alloc::vec![1.0 / n as f64; n],
            support,
            empty: false,
        }
    }

    pub fn empty(support: Vec<String>) -> Self {
        Distribution {
            mass: alloc::vec![0.0; support.len()],
            support,
            empty: true,
        }
    }

    /// True when no label received any mass (e.g. the literal listener for an
    /// utterance that is false of every world).
    pub fn is_empty_support(&self) -> bool {
        self.empty
    }

    /// Probability of `label`; zero for labels outside the support.
    pub fn prob(&self, label: &str) -> f64 {
        self.support
            .iter()
            .position(|s| s == label)
            .map_or(0.0, |i| self.mass[i])
    }

    pub fn support(&self) -> &[String] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.support.iter().map(String::as_str).zip(self.mass.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn max_prob(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    /// Entries sorted by descending probability, ties by label.
    pub fn sorted_desc(&self) -> Vec<(&str, f64)> {
        let mut rows: Vec<(&str, f64)> = self.iter().collect();
        rows.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.0.cmp(b.0))
        });
        rows
    }

    /// Labels whose mass is within `epsilon` of the maximum, in support order.
    /// Empty for an empty-support distribution.
    pub fn near_max(&self, epsilon: f64) -> Vec<&str> {
        if self.empty {
            return Vec::new();
        }
        let best = self.max_prob();
        self.iter()
            .filter(|(_, p)| best - p <= epsilon)
            .map(|(l, _)| l)
            .collect()
    }

    /// Largest absolute difference against `expected`, taken over the union of
    /// both supports; labels missing on either side count as zero.
    pub fn max_abs_deviation(&self, expected: &[(String, f64)]) -> f64 {
        let mut worst: f64 = 0.0;
        for (label, p) in expected {
            worst = worst.max((self.prob(label) - p).abs());
        }
        for (label, p) in self.iter() {
            if !expected.iter().any(|(l, _)| l == label) {
                worst = worst.max(p.abs());
            }
        }
        worst
    }
}
