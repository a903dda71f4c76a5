use std::fmt;

/// Outcome of one sampled property check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// The check's figure of merit: the largest residual for residual
    /// checks, the smallest margin for margin checks.
    pub max_residual: f64,
    /// The sample at which the check failed or the worst sample was seen.
    pub witness: Option<Vec<f64>>,
    pub samples_used: usize,
}

impl CheckReport {
    pub(crate) fn new(
        name: &str,
        passed: bool,
        max_residual: f64,
        witness: Option<Vec<f64>>,
        samples_used: usize,
    ) -> Self {
        CheckReport {
            name: name.to_string(),
            passed,
            max_residual,
            witness,
            samples_used,
        }
    }

    /// `CHECK <name>: PASS|FAIL max_residual=<g17> samples=<n>[ witness=<..>]`
    pub fn render(&self) -> String {
        let mut s = format!(
            "CHECK {}: {} max_residual={} samples={}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            format_g17(self.max_residual),
            self.samples_used
        );
        if let Some(w) = &self.witness {
            let parts: Vec<String> = w.iter().map(|x| format_g17(*x)).collect();
            s.push_str(" witness=");
            s.push_str(&parts.join(","));
        }
        s
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `RESULT: PASS|FAIL (<passed>/<total>)`.
pub fn render_summary(reports: &[CheckReport]) -> String {
    let k = reports.iter().filter(|r| r.passed).count();
    let m = reports.len();
    format!("RESULT: {} ({k}/{m})", if k == m { "PASS" } else { "FAIL" })
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros
/// removed, scientific notation for exponents below −4 or above 16.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{x:.*}", (16 - exp) as usize))
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_c_printf() {
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-1.0), "-1");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(0.525), "0.52500000000000002");
        assert_eq!(format_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(1e17), "1e+17");
        assert_eq!(format_g17(0.0001), "0.0001");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(2.0f64.sqrt()), "1.4142135623730951");
    }

    #[test]
    fn g17_round_trips() {
        for x in [std::f64::consts::PI, -2.5e-300, 6.02214076e23, 1.0 / 3.0] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn report_line_layout() {
        let r = CheckReport::new("involution", true, 0.0, None, 10);
        assert_eq!(r.render(), "CHECK involution: PASS max_residual=0 samples=10");
        let f = CheckReport::new("fpf", false, 0.5, Some(vec![1.0, -0.25]), 3);
        assert_eq!(f.render(), "CHECK fpf: FAIL max_residual=0.5 samples=3 witness=1,-0.25");
        assert_eq!(render_summary(&[r, f]), "RESULT: FAIL (1/2)");
    }
}
