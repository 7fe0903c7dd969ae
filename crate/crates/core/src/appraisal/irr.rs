use super::{npv_at, AppraisalError, CashFlowSchedule};

/// Rates are searched in the half-open bracket (IRR_LOWER, IRR_UPPER].
pub const IRR_LOWER: f64 = -0.999;
pub const IRR_UPPER: f64 = 10.0;

const GRID_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrWarning {
    /// The flow sequence changes sign more than once, so several IRRs may exist.
    MultipleSignChanges,
    /// NPV crosses zero more than once inside the bracket; the smallest root is returned.
    MultipleRoots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrrSolution {
    pub rate: f64,
    pub warnings: Vec<IrrWarning>,
}

impl IrrSolution {
    pub fn is_ambiguous(&self) -> bool {
        !self.warnings.is_empty()
    }
}

fn sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Internal rate of return: the smallest rate in (−0.999, 10] at which NPV is zero.
///
/// NPV is scanned on a grid uniform in `ln(1 + r)` to bracket the first crossing,
/// which is then refined by Illinois-modified regula falsi with bisection
/// fallback down to adjacent floating-point rates.
pub fn irr(schedule: &CashFlowSchedule) -> Result<IrrSolution, AppraisalError> {
    let mut warnings = Vec::new();
    let flows = std::iter::once(-schedule.initial_investment()).chain(schedule.cash_flows().iter().copied());
    if sign_changes(flows) > 1 {
        warnings.push(IrrWarning::MultipleSignChanges);
    }

    let f = |r: f64| npv_at(schedule, r);
    let (lo_x, hi_x) = ((1.0 + IRR_LOWER).ln(), (1.0 + IRR_UPPER).ln());
    let rate_at = |k: usize| {
        if k == GRID_POINTS {
            IRR_UPPER
        } else {
            (lo_x + (hi_x - lo_x) * k as f64 / GRID_POINTS as f64).exp() - 1.0
        }
    };

    let mut bracket = None;
    let mut crossings = 0;
    let mut prev = (rate_at(0), f(rate_at(0)));
    for k in 1..=GRID_POINTS {
        let r = rate_at(k);
        let v = f(r);
        let crosses = (prev.1 < 0.0 && v >= 0.0) || (prev.1 > 0.0 && v <= 0.0);
        if crosses {
            crossings += 1;
            if bracket.is_none() {
                bracket = Some((prev, (r, v)));
            }
        }
        // An exact zero is counted once, on the step that lands on it.
        prev = if v == 0.0 { (r, -prev.1) } else { (r, v) };
    }
    if crossings > 1 {
        warnings.push(IrrWarning::MultipleRoots);
    }

    let ((mut a, mut fa), (mut b, mut fb)) =
        bracket.ok_or(AppraisalError::NoRoot { lower: IRR_LOWER, upper: IRR_UPPER })?;
    if fb == 0.0 {
        return Ok(IrrSolution { rate: b, warnings });
    }
    // Illinois-modified regula falsi; whenever a step fails to halve the bracket
    // a bisection step follows, so the bracket at least halves per iteration.
    let mut side = 0i8;
    for _ in 0..500 {
        let width = b - a;
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let mut c = b - fb * (b - a) / (fb - fa);
        if !(c > a && c < b) {
            c = mid;
        }
        let fc = f(c);
        if fc == 0.0 {
            return Ok(IrrSolution { rate: c, warnings });
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if fm == 0.0 {
                return Ok(IrrSolution { rate: m, warnings });
            }
            if (fm > 0.0) == (fb > 0.0) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
    }
    let rate = if f(a).abs() <= f(b).abs() { a } else { b };
    Ok(IrrSolution { rate, warnings })
}
