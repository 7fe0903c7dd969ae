use super::{Estimator, RegressionResult};
use crate::stats::significance_stars;

fn fe_flags(result: &RegressionResult) -> (&'static str, &'static str) {
    let yes_no = |b: bool| if b { "Yes" } else { "No" };
    match result.estimator {
        Estimator::FixedEffects { country, year } => (yes_no(country), yes_no(year)),
        Estimator::RandomEffects(_) => ("RE", "No"),
    }
}

fn row_names(columns: &[(&str, &RegressionResult)]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for (_, r) in columns {
        for n in &r.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    names
}

/// Aligned text table: coefficients with stars, standard errors beneath in
/// parentheses, then effects indicators and fit statistics.
pub fn regression_table_text(columns: &[(&str, &RegressionResult)]) -> String {
    let names = row_names(columns);
    let width = columns.iter().map(|(_, r)| r.dependent.len() + 2).max().unwrap_or(0).max(16);
    let label_width = names.iter().map(|n| n.len() + 2).max().unwrap_or(0).max(22);
    let mut lines = Vec::new();
    let mut header = format!("{:<label_width$}", "");
    let mut deps = format!("{:<label_width$}", "");
    for (i, (_, r)) in columns.iter().enumerate() {
        header.push_str(&format!("{:>width$}", format!("({})", i + 1)));
        deps.push_str(&format!("{:>width$}", r.dependent));
    }
    lines.push(header);
    lines.push(deps);
    let rule = "-".repeat(label_width + width * columns.len());
    lines.push(rule.clone());
    for name in names {
        let mut coef = format!("{name:<label_width$}");
        let mut se = format!("{:<label_width$}", "");
        for (_, r) in columns {
            match r.index_of(&name) {
                Some(j) => {
                    let stars = significance_stars(r.p_values[j]);
                    coef.push_str(&format!("{:>width$}", format!("{:.4}{stars}", r.coefficients[j])));
                    se.push_str(&format!("{:>width$}", format!("({:.4})", r.std_errors[j])));
                }
                None => {
                    coef.push_str(&format!("{:>width$}", ""));
                    se.push_str(&format!("{:>width$}", ""));
                }
            }
        }
        lines.push(coef);
        lines.push(se);
    }
    lines.push(rule.clone());
    let mut push_row = |label: &str, cell: &dyn Fn(&RegressionResult) -> String| {
        let mut line = format!("{label:<label_width$}");
        for (_, r) in columns {
            line.push_str(&format!("{:>width$}", cell(r)));
        }
        lines.push(line);
    };
    push_row("Country FE", &|r| fe_flags(r).0.to_string());
    push_row("Year FE", &|r| fe_flags(r).1.to_string());
    push_row("Observations", &|r| r.n_observations.to_string());
    push_row("R-squared", &|r| format!("{:.4}", r.r_squared));
    push_row("F-statistic", &|r| format!("{:.4}{}", r.f_statistic, significance_stars(r.f_p_value)));
    lines.push(rule);
    lines.push("Standard errors in parentheses. *** p<0.01, ** p<0.05, * p<0.1".into());
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Machine-readable twin of [`regression_table_text`] at full precision.
pub fn regression_table_csv(columns: &[(&str, &RegressionResult)]) -> String {
    let mut out = String::from("model,dependent,term,estimate,std_error,t_stat,p_value\n");
    for (label, r) in columns {
        for j in 0..r.names.len() {
            out.push_str(&format!(
                "{label},{},{},{},{},{},{}\n",
                r.dependent, r.names[j], r.coefficients[j], r.std_errors[j], r.t_stats[j], r.p_values[j]
            ));
        }
        out.push_str(&format!("{label},{},n_observations,{},,,\n", r.dependent, r.n_observations));
        out.push_str(&format!("{label},{},r_squared,{},,,\n", r.dependent, r.r_squared));
        out.push_str(&format!("{label},{},f_statistic,{},,,{}\n", r.dependent, r.f_statistic, r.f_p_value));
    }
    out
}
