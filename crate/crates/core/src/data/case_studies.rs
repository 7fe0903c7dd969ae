/// 2023 key indicators for one case-study economy. Reference data for reports;
/// nothing in the crate computes from it.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub economy: &'static str,
    pub renewable_capacity_gw: f64,
    pub renewable_share_pct: f64,
    pub investment_busd: f64,
    pub carbon_price_usd_t: f64,
    pub employment_thousands: f64,
    /// Employment figure is an industry-report estimate rather than an official count.
    pub employment_estimated: bool,
    pub grid_stability_index: f64,
}

pub fn case_studies() -> [CaseStudy; 4] {
    [
        CaseStudy {
            economy: "Germany",
            renewable_capacity_gw: 152.8,
            renewable_share_pct: 52.1,
            investment_busd: 42.1,
            carbon_price_usd_t: 85.2,
            employment_thousands: 405.0,
            employment_estimated: false,
            grid_stability_index: 82.0,
        },
        CaseStudy {
            economy: "USA",
            renewable_capacity_gw: 412.8,
            renewable_share_pct: 23.8,
            investment_busd: 186.3,
            carbon_price_usd_t: 0.0,
            employment_thousands: 345.0,
            employment_estimated: false,
            grid_stability_index: 78.0,
        },
        CaseStudy {
            economy: "China",
            renewable_capacity_gw: 1458.8,
            renewable_share_pct: 33.2,
            investment_busd: 318.5,
            carbon_price_usd_t: 10.2,
            employment_thousands: 4500.0,
            employment_estimated: true,
            grid_stability_index: 75.0,
        },
        CaseStudy {
            economy: "EU",
            renewable_capacity_gw: 745.2,
            renewable_share_pct: 44.2,
            investment_busd: 215.8,
            carbon_price_usd_t: 85.2,
            employment_thousands: 1200.0,
            employment_estimated: true,
            grid_stability_index: 80.0,
        },
    ]
}
