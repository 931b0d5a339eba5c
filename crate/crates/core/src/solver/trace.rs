use std::fmt::Write as _;

/// What happened at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    pub active: Vec<usize>,
    /// `sum_i omega_i ||y_i||^2`.
    pub nu: f64,
    /// `||sum_i omega_i y_i||`.
    pub ynorm: f64,
    /// Extrapolation parameter; `None` when `nu == 0`.
    pub big_lambda: Option<f64>,
    /// Applied relaxation; `None` when no step was taken.
    pub lambda: Option<f64>,
    /// Largest displacement norm over the active set.
    pub residual: f64,
    /// Distance from the iterate to the reference, when one was supplied.
    pub err_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<IterationRecord>,
    pub stop: StopReason,
}

pub const TRACE_HEADER: &str = "n,nu_n,ynorm,Lambda_n,lambda_n,residual,err_ref";

/// Round-trip exact formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// First iteration whose residual is at most `tol`.
    pub fn first_below(&self, tol: f64) -> Option<usize> {
        self.records.iter().find(|r| r.residual <= tol).map(|r| r.n)
    }

    /// CSV with header [`TRACE_HEADER`]; undefined fields are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                fmt_f64(r.nu),
                fmt_f64(r.ynorm),
                fmt_opt(r.big_lambda),
                fmt_opt(r.lambda),
                fmt_f64(r.residual),
                fmt_opt(r.err_ref),
            );
        }
        out
    }
}
