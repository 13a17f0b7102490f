//! Fixed-format CSV: `#` metadata lines, one header row, numbers with 17
//! significant digits in `{:.16e}` form, `NA` for undefined values and
//! `inf` for infinite temperatures.

use larmor_otto::{CycleReport, Params};

use crate::CliError;

pub const CYCLE_COLUMNS: [&str; 14] = [
    "lambda",
    "omega_ghz",
    "alpha_rad",
    "w_net",
    "w_L",
    "w_S",
    "q_h",
    "q_c",
    "eta",
    "eta_otto",
    "t2_eff",
    "t4_eff",
    "entropy_gen",
    "positive_work",
];

pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

pub fn cycle_fields(p: &Params, freq_scale: f64, r: &CycleReport<f64>) -> Vec<String> {
    vec![
        num(p.lambda),
        num(p.omega / freq_scale),
        num(p.alpha),
        num(r.w_net),
        num(r.w_l),
        num(r.w_s),
        num(r.q_h),
        num(r.q_c),
        r.eta.map_or("NA".into(), num),
        num(r.eta_otto),
        num(r.t2_eff.kelvin()),
        num(r.t4_eff.kelvin()),
        num(r.entropy_gen),
        r.positive_work.to_string(),
    ]
}

pub struct CsvDoc {
    head: String,
    body: csv::Writer<Vec<u8>>,
}

impl Default for CsvDoc {
    fn default() -> Self {
        Self::new()
    }
}

impl CsvDoc {
    pub fn new() -> Self {
        Self {
            head: String::new(),
            body: csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new()),
        }
    }

    pub fn comment(&mut self, line: &str) {
        self.head.push_str("# ");
        self.head.push_str(line);
        self.head.push('\n');
    }

    pub fn header(&mut self, cols: &[&str]) -> Result<(), CliError> {
        self.body.write_record(cols).map_err(csv_err)
    }

    pub fn row(&mut self, fields: Vec<String>) -> Result<(), CliError> {
        self.body.write_record(&fields).map_err(csv_err)
    }

    pub fn finish(self) -> Result<Vec<u8>, CliError> {
        let body = self
            .body
            .into_inner()
            .map_err(|e| CliError::Failure(format!("io: {e}")))?;
        let mut out = self.head.into_bytes();
        out.extend_from_slice(&body);
        Ok(out)
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Failure(format!("io: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-4.0236970835890e-27).len(), "-4.0236970835890000e-27".len());
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NAN), "NA");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn comments_precede_single_header() {
        let mut d = CsvDoc::new();
        d.comment("meta");
        d.header(&["a", "b"]).unwrap();
        d.row(vec!["1".into(), "2".into()]).unwrap();
        assert_eq!(String::from_utf8(d.finish().unwrap()).unwrap(), "# meta\na,b\n1,2\n");
    }
}
