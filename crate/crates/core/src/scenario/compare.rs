use super::{ScenarioError, ScenarioResult};

/// Differences `first − second` between two scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseGap {
    pub first: String,
    pub second: String,
    pub cumulative_emissions_gap: f64,
    pub end_share_delta: f64,
    pub end_emissions_delta: f64,
    pub end_investment_delta: f64,
    pub end_jobs_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioComparison {
    /// One entry per unordered pair, in input order.
    pub pairs: Vec<PairwiseGap>,
    /// Scenario names with cumulative emissions, lowest first.
    pub ranking: Vec<(String, f64)>,
}

impl ScenarioComparison {
    pub fn gap(&self, first: &str, second: &str) -> Option<f64> {
        self.pairs.iter().find_map(|p| {
            if p.first == first && p.second == second {
                Some(p.cumulative_emissions_gap)
            } else if p.first == second && p.second == first {
                Some(-p.cumulative_emissions_gap)
            } else {
                None
            }
        })
    }
}

pub fn compare(results: &[ScenarioResult]) -> Result<ScenarioComparison, ScenarioError> {
    let first = results.first().ok_or(ScenarioError::Empty)?;
    for r in &results[1..] {
        if (r.start_year(), r.end_year()) != (first.start_year(), first.end_year()) {
            return Err(ScenarioError::YearMismatch {
                first: first.name.clone(),
                first_range: (first.start_year(), first.end_year()),
                second: r.name.clone(),
                second_range: (r.start_year(), r.end_year()),
            });
        }
    }
    let mut pairs = Vec::new();
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            let (ea, eb) = (a.end(), b.end());
            pairs.push(PairwiseGap {
                first: a.name.clone(),
                second: b.name.clone(),
                cumulative_emissions_gap: a.cumulative_emissions - b.cumulative_emissions,
                end_share_delta: ea.renewable_share - eb.renewable_share,
                end_emissions_delta: ea.emissions - eb.emissions,
                end_investment_delta: ea.investment - eb.investment,
                end_jobs_delta: ea.jobs - eb.jobs,
            });
        }
    }
    let mut ranking: Vec<(String, f64)> = results.iter().map(|r| (r.name.clone(), r.cumulative_emissions)).collect();
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(ScenarioComparison { pairs, ranking })
}
