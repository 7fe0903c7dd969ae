//! Project appraisal: discounted cash flow, internal rate of return, lattice real
//! options, carbon-adjusted production cost and experience-curve cost projection.
//!
//! Periods are uniform and annual throughout.

mod irr;
mod options;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ErrorKind;

pub use irr::{irr, IrrSolution, IrrWarning, IRR_LOWER, IRR_UPPER};
pub use options::{real_option_value, OptionKind, RealOptionSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AppraisalError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("no IRR root: NPV does not change sign for rates in ({lower}, {upper}]")]
    NoRoot { lower: f64, upper: f64 },
    #[error("arbitrage violation: risk-neutral probability {probability} outside [0, 1] (u = {up}, d = {down}, rate = {rate})")]
    Arbitrage { up: f64, down: f64, rate: f64, probability: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

impl AppraisalError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            AppraisalError::Invalid(_) => ErrorKind::Input,
            _ => ErrorKind::Computation,
        }
    }
}

/// Initial outlay at t = 0 followed by cash flows for t = 1..=T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CashFlowSchedule {
    initial_investment: f64,
    cash_flows: Vec<f64>,
    discount_rate: f64,
}

impl CashFlowSchedule {
    pub fn new(initial_investment: f64, cash_flows: Vec<f64>, discount_rate: f64) -> Result<Self, AppraisalError> {
        if !(initial_investment >= 0.0 && initial_investment.is_finite()) {
            return Err(AppraisalError::Invalid(format!("initial_investment must be >= 0, got {initial_investment}")));
        }
        if cash_flows.is_empty() {
            return Err(AppraisalError::Invalid("cash_flows must cover a horizon of at least one period".into()));
        }
        if let Some(cf) = cash_flows.iter().find(|c| !c.is_finite()) {
            return Err(AppraisalError::Invalid(format!("cash flow {cf} is not finite")));
        }
        if !(discount_rate > -1.0 && discount_rate.is_finite()) {
            return Err(AppraisalError::Invalid(format!("discount_rate must exceed -1, got {discount_rate}")));
        }
        Ok(CashFlowSchedule { initial_investment, cash_flows, discount_rate })
    }

    pub fn initial_investment(&self) -> f64 {
        self.initial_investment
    }

    pub fn cash_flows(&self) -> &[f64] {
        &self.cash_flows
    }

    pub fn discount_rate(&self) -> f64 {
        self.discount_rate
    }

    pub fn horizon(&self) -> usize {
        self.cash_flows.len()
    }

    /// Same flows discounted at `rate`.
    pub fn with_rate(&self, rate: f64) -> Result<Self, AppraisalError> {
        CashFlowSchedule::new(self.initial_investment, self.cash_flows.clone(), rate)
    }
}

/// NPV of the flows at an arbitrary rate, summed in ascending t.
pub fn npv_at(schedule: &CashFlowSchedule, rate: f64) -> f64 {
    let growth = 1.0 + rate;
    let mut discount = 1.0;
    let mut pv = 0.0;
    for cf in &schedule.cash_flows {
        discount *= growth;
        pv += cf / discount;
    }
    pv - schedule.initial_investment
}

/// Σ CF_t / (1 + r)^t − I₀.
pub fn npv(schedule: &CashFlowSchedule) -> f64 {
    npv_at(schedule, schedule.discount_rate)
}

/// Total project value: NPV plus the value of embedded flexibility.
pub fn project_value(npv_value: f64, rov_value: f64) -> Result<f64, AppraisalError> {
    if !(rov_value >= 0.0) {
        return Err(AppraisalError::Domain(format!("real option value must be >= 0, got {rov_value}")));
    }
    Ok(npv_value + rov_value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarbonCostParams {
    /// Private production cost per unit of energy.
    pub private_cost: f64,
    /// Carbon price per tonne CO2.
    pub carbon_price: f64,
    /// Tonnes CO2 per unit of energy.
    pub emission_factor: f64,
}

impl CarbonCostParams {
    pub fn new(private_cost: f64, carbon_price: f64, emission_factor: f64) -> Result<Self, AppraisalError> {
        if !(carbon_price >= 0.0) {
            return Err(AppraisalError::Invalid(format!("carbon_price must be >= 0, got {carbon_price}")));
        }
        if !(emission_factor >= 0.0) {
            return Err(AppraisalError::Invalid(format!("emission_factor must be >= 0, got {emission_factor}")));
        }
        Ok(CarbonCostParams { private_cost, carbon_price, emission_factor })
    }
}

/// Private cost plus the carbon price charged on the embedded emissions.
pub fn adjusted_cost(params: &CarbonCostParams) -> f64 {
    params.private_cost + params.carbon_price * params.emission_factor
}

/// Experience curve: every doubling of cumulative capacity multiplies unit cost by
/// `1 - learning_rate`.
///
/// The cost exponent is `log2(1 - learning_rate)`, which is negative for any
/// positive learning rate. Writing it as `-log2(1 - LR)` would make cost rise with
/// deployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    base_cost: f64,
    learning_rate: f64,
    base_capacity: f64,
}

impl LearningCurve {
    pub fn new(base_cost: f64, learning_rate: f64, base_capacity: f64) -> Result<Self, AppraisalError> {
        if !(base_cost > 0.0 && base_cost.is_finite()) {
            return Err(AppraisalError::Invalid(format!("base_cost must be > 0, got {base_cost}")));
        }
        if !(0.0..1.0).contains(&learning_rate) {
            return Err(AppraisalError::Invalid(format!("learning_rate must lie in [0, 1), got {learning_rate}")));
        }
        if !(base_capacity > 0.0 && base_capacity.is_finite()) {
            return Err(AppraisalError::Invalid(format!("base_capacity must be > 0, got {base_capacity}")));
        }
        Ok(LearningCurve { base_cost, learning_rate, base_capacity })
    }

    pub fn base_cost(&self) -> f64 {
        self.base_cost
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn base_capacity(&self) -> f64 {
        self.base_capacity
    }

    /// Elasticity of unit cost with respect to cumulative capacity.
    pub fn exponent(&self) -> f64 {
        (1.0 - self.learning_rate).log2()
    }
}

/// Unit cost once cumulative capacity reaches `cumulative_capacity`.
///
/// The capacity ratio is split into whole doublings and a mantissa in [1, 2), so
/// whole doublings apply `(1 - LR)` by multiplication and the doubling law holds
/// to rounding.
pub fn learning_cost(curve: &LearningCurve, cumulative_capacity: f64) -> Result<f64, AppraisalError> {
    if !(cumulative_capacity >= curve.base_capacity) {
        return Err(AppraisalError::Domain(format!(
            "cumulative capacity {cumulative_capacity} is below the base capacity {}",
            curve.base_capacity
        )));
    }
    if curve.learning_rate == 0.0 {
        return Ok(curve.base_cost);
    }
    let ratio = cumulative_capacity / curve.base_capacity;
    if ratio.is_infinite() {
        return Ok(0.0);
    }
    let mut doublings = ratio.log2().floor();
    let mut mantissa = ratio / doublings.exp2();
    // log2 rounding can leave the mantissa a hair outside [1, 2).
    if mantissa >= 2.0 {
        doublings += 1.0;
        mantissa = ratio / doublings.exp2();
    } else if mantissa < 1.0 {
        doublings -= 1.0;
        mantissa = ratio / doublings.exp2();
    }
    let progress = 1.0 - curve.learning_rate;
    Ok(curve.base_cost * progress.powi(doublings as i32) * mantissa.powf(curve.exponent()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule(i0: f64, cf: &[f64], r: f64) -> CashFlowSchedule {
        CashFlowSchedule::new(i0, cf.to_vec(), r).unwrap()
    }

    #[test]
    fn npv_examples() {
        assert_eq!(npv(&schedule(100.0, &[0.0], 0.1)), -100.0);
        assert!(npv(&schedule(100.0, &[110.0], 0.10)).abs() < 1e-12);
        // Hand-summed: 100/1.08 + 100/1.08^2 + 100/1.08^3 - 250.
        let oracle = 100.0 / 1.08 + 100.0 / 1.1664 + 100.0 / 1.259712 - 250.0;
        let v = npv(&schedule(250.0, &[100.0, 100.0, 100.0], 0.08));
        assert!((v - 7.710).abs() < 1e-3 && (v - oracle).abs() < 1e-12, "{v}");
    }

    #[test]
    fn schedule_validation() {
        assert!(CashFlowSchedule::new(100.0, vec![], 0.1).is_err());
        assert!(CashFlowSchedule::new(100.0, vec![1.0], -1.0).is_err());
        assert!(CashFlowSchedule::new(-1.0, vec![1.0], 0.1).is_err());
    }

    #[test]
    fn project_value_examples() {
        assert_eq!(project_value(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(project_value(-5.0, 12.0).unwrap(), 7.0);
        assert!(project_value(1.0, -0.5).is_err());
    }

    #[test]
    fn adjusted_cost_examples() {
        assert_eq!(adjusted_cost(&CarbonCostParams::new(50.0, 0.0, 0.5).unwrap()), 50.0);
        assert!((adjusted_cost(&CarbonCostParams::new(50.0, 85.2, 0.5).unwrap()) - 92.6).abs() < 1e-12);
        assert_eq!(adjusted_cost(&CarbonCostParams::new(50.0, 10.2, 0.0).unwrap()), 50.0);
        assert!(CarbonCostParams::new(50.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn learning_cost_examples() {
        let curve = LearningCurve::new(100.0, 0.2, 1.0).unwrap();
        assert_eq!(learning_cost(&curve, 2.0).unwrap(), 80.0);
        assert!((learning_cost(&curve, 4.0).unwrap() - 64.0).abs() < 1e-9);
        let flat = LearningCurve::new(100.0, 0.0, 1.0).unwrap();
        assert_eq!(learning_cost(&flat, 37.0).unwrap(), 100.0);
        assert_eq!(learning_cost(&curve, 1.0).unwrap(), 100.0);
        assert!(learning_cost(&curve, 0.5).is_err());
        assert!(LearningCurve::new(100.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn learning_cost_matches_closed_form_between_doublings() {
        let curve = LearningCurve::new(70.0, 0.18, 3.0).unwrap();
        for c in [3.0, 4.1, 5.99, 6.0, 17.3, 1000.0] {
            let closed = 70.0 * (c / 3.0f64).powf((0.82f64).log2());
            let v = learning_cost(&curve, c).unwrap();
            assert!((v - closed).abs() <= 1e-12 * closed, "{c}: {v} vs {closed}");
        }
    }
}
