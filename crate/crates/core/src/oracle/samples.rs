//! Sample-size bounds for Monte Carlo estimation.

use serde::Serialize;

use crate::error::{invalid, Result};

/// The inputs and outcome of one sample-size computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePlan {
    pub epsilon: f64,
    pub gamma: f64,
    pub p_low: f64,
    pub n: usize,
    pub q: f64,
    pub r: u64,
}

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        invalid(format!("{name} must lie in (0, 1), got {x}"))
    }
}

fn check_unit_half_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        invalid(format!("{name} must lie in (0, 1], got {x}"))
    }
}

fn log_base(x: f64, base: f64) -> f64 {
    x.ln() / base.ln()
}

/// Worlds needed for an (epsilon, delta)-approximation of a probability of at least `p`:
/// `ceil(3 ln(2/delta) / (epsilon^2 p))`.
pub fn required_samples_pointwise(epsilon: f64, delta: f64, p: f64) -> Result<u64> {
    check_unit_open("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    check_unit_half_open("p", p)?;
    Ok((3.0 * (2.0 / delta).ln() / (epsilon * epsilon * p)).ceil() as u64)
}

fn check_schedule(q: f64, epsilon: f64, gamma: f64, p_low: f64, n: usize) -> Result<()> {
    check_unit_half_open("q", q)?;
    check_unit_open("epsilon", epsilon)?;
    check_unit_open("p_low", p_low)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return invalid(format!("gamma must be positive, got {gamma}"));
    }
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    Ok(())
}

/// `ln(2 n^3 (1 + floor(log_{1+gamma}(x))))`, the union-bound factor shared by both schedules.
fn union_log(n: usize, gamma: f64, x: f64) -> f64 {
    let guesses = 1.0 + log_base(x, 1.0 + gamma).floor();
    let n = n as f64;
    (2.0 * n * n * n * guesses).ln()
}

/// Real-valued sample count for the MCP schedule, before rounding up.
pub fn samples_mcp_unrounded(q: f64, epsilon: f64, gamma: f64, p_low: f64, n: usize) -> Result<f64> {
    check_schedule(q, epsilon, gamma, p_low, n)?;
    Ok(12.0 / (q * epsilon * epsilon) * union_log(n, gamma, 1.0 / p_low))
}

/// Worlds per MCP iteration at guess `q`.
pub fn samples_mcp(q: f64, epsilon: f64, gamma: f64, p_low: f64, n: usize) -> Result<u64> {
    Ok(samples_mcp_unrounded(q, epsilon, gamma, p_low, n)?.ceil() as u64)
}

/// Real-valued sample count for the ACP schedule, before rounding up.
pub fn samples_acp_unrounded(q: f64, epsilon: f64, gamma: f64, p_low: f64, n: usize) -> Result<f64> {
    check_schedule(q, epsilon, gamma, p_low, n)?;
    let h = harmonic(n)?;
    Ok(12.0 / (q * q * q * epsilon * epsilon) * union_log(n, gamma, h / p_low))
}

/// Worlds per ACP iteration at guess `q`; the estimates must resolve `q^3`.
pub fn samples_acp(q: f64, epsilon: f64, gamma: f64, p_low: f64, n: usize) -> Result<u64> {
    Ok(samples_acp_unrounded(q, epsilon, gamma, p_low, n)?.ceil() as u64)
}

/// `H(n) = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("harmonic number of 0 is undefined");
    }
    Ok((1..=n).map(|i| 1.0 / i as f64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pointwise_values() {
        assert_eq!(required_samples_pointwise(0.1, 0.1, 0.5).unwrap(), 1798);
        assert_eq!(required_samples_pointwise(0.5, 0.5, 1.0).unwrap(), 17);
        assert!(required_samples_pointwise(1.0, 0.1, 0.5).is_err());
        assert!(required_samples_pointwise(0.1, 0.0, 0.5).is_err());
        assert!(required_samples_pointwise(0.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn mcp_values() {
        assert_eq!(samples_mcp(0.5, 0.1, 0.1, 1e-4, 100).unwrap(), 45801);
        assert_eq!(samples_mcp(1.0, 0.1, 0.1, 1e-4, 100).unwrap(), 22901);
        assert!(samples_mcp(0.0, 0.1, 0.1, 1e-4, 100).is_err());
        assert!(samples_mcp(0.5, 0.1, 0.1, 1e-4, 1).is_err());
        assert!(samples_mcp(0.5, 0.1, -1.0, 1e-4, 100).is_err());
    }

    #[test]
    fn acp_values() {
        assert_eq!(samples_acp(0.5, 0.1, 0.1, 1e-4, 100).unwrap(), 184751);
        // at q = 1 only the log factor remains
        let h = harmonic(100).unwrap();
        let guesses = 1.0 + ((h / 1e-4).ln() / 1.1f64.ln()).floor();
        let expect = (1200.0 * (2e6 * guesses).ln()).ceil() as u64;
        assert_eq!(samples_acp(1.0, 0.1, 0.1, 1e-4, 100).unwrap(), expect);
        let a = samples_acp_unrounded(0.25, 0.1, 0.1, 1e-4, 100).unwrap();
        let b = samples_acp_unrounded(0.5, 0.1, 0.1, 1e-4, 100).unwrap();
        assert!((a / b - 8.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(1).unwrap(), 1.0);
        assert_eq!(harmonic(2).unwrap(), 1.5);
        assert!((harmonic(100).unwrap() - 5.187378).abs() < 1e-6);
        assert!(harmonic(0).is_err());
    }

    proptest! {
        #[test]
        fn sample_counts_grow_as_q_shrinks(
            q in 0.001f64..1.0,
            shrink in 0.01f64..1.0,
            eps in 0.01f64..0.99,
            n in 2usize..5000,
        ) {
            let lower = q * shrink;
            prop_assert!(samples_mcp(lower, eps, 0.1, 1e-4, n).unwrap()
                >= samples_mcp(q, eps, 0.1, 1e-4, n).unwrap());
            prop_assert!(samples_acp(lower, eps, 0.1, 1e-4, n).unwrap()
                >= samples_acp(q, eps, 0.1, 1e-4, n).unwrap());
            prop_assert!(required_samples_pointwise(eps, 0.05, lower).unwrap()
                >= required_samples_pointwise(eps, 0.05, q).unwrap());
        }
    }
}
