use serde::{Deserialize, Serialize};

use super::AppraisalError;

/// Managerial flexibility embedded in a project. Every kind may be exercised at
/// any lattice node up to and including the last step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptionKind {
    /// Wait and invest later: pays `max(V - investment_cost, 0)`.
    Defer { investment_cost: f64 },
    /// Scale the project up by `expansion_factor` for `expansion_cost`:
    /// pays `max(factor * V - cost, V) - V`.
    Expand { expansion_cost: f64, expansion_factor: f64 },
    /// Walk away for `salvage_value`: pays `max(salvage - V, 0)`.
    Abandon { salvage_value: f64 },
}

impl OptionKind {
    /// Immediate exercise value when the underlying is worth `value`.
    pub fn payoff(&self, value: f64) -> f64 {
        match *self {
            OptionKind::Defer { investment_cost } => (value - investment_cost).max(0.0),
            OptionKind::Expand { expansion_cost, expansion_factor } => {
                (expansion_factor * value - expansion_cost).max(value) - value
            }
            OptionKind::Abandon { salvage_value } => (salvage_value - value).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealOptionSpec {
    /// Present value of the project's operating cash flows.
    pub underlying_value: f64,
    /// Per-period volatility of the underlying value.
    pub volatility: f64,
    /// Per-period continuously compounded risk-free rate.
    pub risk_free_rate: f64,
    /// Lattice depth; one step per period.
    pub steps: usize,
    #[serde(flatten)]
    pub option: OptionKind,
}

impl RealOptionSpec {
    pub fn validate(&self) -> Result<(), AppraisalError> {
        let bad = |msg: String| Err(AppraisalError::Invalid(msg));
        if !(self.underlying_value > 0.0 && self.underlying_value.is_finite()) {
            return bad(format!("underlying_value must be > 0, got {}", self.underlying_value));
        }
        if !(self.volatility > 0.0 && self.volatility.is_finite()) {
            return bad(format!("volatility must be > 0, got {}", self.volatility));
        }
        if !self.risk_free_rate.is_finite() {
            return bad("risk_free_rate must be finite".into());
        }
        if self.steps == 0 {
            return bad("steps must be >= 1".into());
        }
        if let OptionKind::Expand { expansion_factor, .. } = self.option {
            if !(expansion_factor > 1.0) {
                return bad(format!("expansion_factor must be > 1, got {expansion_factor}"));
            }
        }
        Ok(())
    }

    /// Up factor, down factor and risk-neutral up probability.
    pub fn lattice(&self) -> Result<(f64, f64, f64), AppraisalError> {
        let up = self.volatility.exp();
        let down = 1.0 / up;
        let growth = self.risk_free_rate.exp();
        let probability = (growth - down) / (up - down);
        if !(0.0..=1.0).contains(&probability) {
            return Err(AppraisalError::Arbitrage { up, down, rate: self.risk_free_rate, probability });
        }
        Ok((up, down, probability))
    }
}

/// Cox-Ross-Rubinstein binomial valuation with early exercise at every node.
pub fn real_option_value(spec: &RealOptionSpec) -> Result<f64, AppraisalError> {
    spec.validate()?;
    let (up, _, p) = spec.lattice()?;
    let n = spec.steps;
    let disc = (-spec.risk_free_rate).exp();
    let node_value = |step: usize, ups: usize| spec.underlying_value * up.powi(2 * ups as i32 - step as i32);

    let mut values: Vec<f64> = (0..=n).map(|j| spec.option.payoff(node_value(n, j))).collect();
    for step in (0..n).rev() {
        for j in 0..=step {
            let cont = disc * (p * values[j + 1] + (1.0 - p) * values[j]);
            values[j] = cont.max(spec.option.payoff(node_value(step, j)));
        }
    }
    Ok(values[0].max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(option: OptionKind, sigma: f64, rate: f64, steps: usize) -> RealOptionSpec {
        RealOptionSpec { underlying_value: 100.0, volatility: sigma, risk_free_rate: rate, steps, option }
    }

    #[test]
    fn deep_out_of_the_money_defer_is_worthless_at_low_volatility() {
        let s = spec(OptionKind::Defer { investment_cost: 101.0 }, 1e-4, 0.0, 3);
        assert!(real_option_value(&s).unwrap() <= 1e-6);
    }

    #[test]
    fn abandon_bounds() {
        let s = spec(OptionKind::Abandon { salvage_value: 100.0 }, 0.3, 0.02, 1);
        let v = real_option_value(&s).unwrap();
        assert!((0.0..=100.0).contains(&v), "{v}");
    }

    #[test]
    fn one_step_defer_by_hand() {
        // u = e^0.2, p = (e^0.05 - d)/(u - d); only the up node pays.
        let s = spec(OptionKind::Defer { investment_cost: 100.0 }, 0.2, 0.05, 1);
        let u = 0.2f64.exp();
        let d = 1.0 / u;
        let p = (0.05f64.exp() - d) / (u - d);
        let expected = (-0.05f64).exp() * p * (100.0 * u - 100.0);
        assert!((real_option_value(&s).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn expand_matches_scaled_call() {
        // Expansion payoff max((k-1)V - c, 0) is a call on (k-1)V with strike c.
        let e = spec(OptionKind::Expand { expansion_cost: 30.0, expansion_factor: 1.5 }, 0.25, 0.03, 20);
        let mut c = spec(OptionKind::Defer { investment_cost: 30.0 }, 0.25, 0.03, 20);
        c.underlying_value = 50.0;
        let a = real_option_value(&e).unwrap();
        let b = real_option_value(&c).unwrap();
        assert!((a - b).abs() < 1e-9 * b.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn arbitrage_is_rejected() {
        let s = spec(OptionKind::Defer { investment_cost: 100.0 }, 0.01, 0.05, 3);
        let err = real_option_value(&s).unwrap_err();
        assert!(matches!(err, AppraisalError::Arbitrage { .. }));
        assert!(err.to_string().contains("u = "));
    }

    #[test]
    fn invalid_specs() {
        assert!(real_option_value(&spec(OptionKind::Defer { investment_cost: 1.0 }, 0.0, 0.0, 3)).is_err());
        assert!(real_option_value(&spec(OptionKind::Defer { investment_cost: 1.0 }, 0.2, 0.0, 0)).is_err());
        let bad = OptionKind::Expand { expansion_cost: 1.0, expansion_factor: 1.0 };
        assert!(real_option_value(&spec(bad, 0.2, 0.0, 3)).is_err());
    }
}
