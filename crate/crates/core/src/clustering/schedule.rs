use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// `1, 1 - γ, 1 - 2γ, 1 - 4γ, …`, clamped at `p_low`.
    #[default]
    Doubling,
    /// `1, (1 + γ)^-1, (1 + γ)^-2, …`, clamped at `p_low`.
    Geometric,
}

/// Decreasing sequence of threshold guesses, ending at `p_low`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessSchedule {
    pub gamma: f64,
    pub p_low: f64,
    pub kind: ScheduleKind,
}

impl GuessSchedule {
    pub fn new(gamma: f64, p_low: f64, kind: ScheduleKind) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return invalid(format!("gamma must be positive, got {gamma}"));
        }
        if !(p_low > 0.0 && p_low < 1.0) {
            return invalid(format!("p_low must lie in (0, 1), got {p_low}"));
        }
        Ok(Self { gamma, p_low, kind })
    }

    /// All guesses, strictly decreasing, starting at 1 and ending at `p_low`.
    pub fn guesses(&self) -> Vec<f64> {
        let mut out = vec![1.0];
        let mut i = 0i32;
        loop {
            let raw = match self.kind {
                ScheduleKind::Doubling => 1.0 - self.gamma * 2f64.powi(i),
                ScheduleKind::Geometric => (1.0 + self.gamma).powi(-(i + 1)),
            };
            let q = raw.max(self.p_low);
            if q < *out.last().unwrap() {
                out.push(q);
            }
            if q <= self.p_low {
                break;
            }
            i += 1;
        }
        out
    }

    /// Whether the bracket `[lo, hi]` is still too wide to stop refining.
    pub fn needs_refinement(&self, lo: f64, hi: f64) -> bool {
        lo * (1.0 + self.gamma) < hi
    }

    /// Bisects `[lo, hi]` where `lo` is known to succeed and `hi` to fail,
    /// returning the best succeeding value and its payload.
    pub fn refine<T, F>(&self, mut lo: f64, mut hi: f64, mut best: T, mut probe: F) -> Result<(f64, T, usize)>
    where
        F: FnMut(f64) -> Result<Option<T>>,
    {
        let mut probes = 0;
        while self.needs_refinement(lo, hi) {
            let mid = 0.5 * (lo + hi);
            probes += 1;
            match probe(mid)? {
                Some(found) => {
                    lo = mid;
                    best = found;
                }
                None => hi = mid,
            }
        }
        Ok((lo, best, probes))
    }
}
