use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Thresholds used by every numeric verdict.
///
/// Real checks use absolute values; p-adic checks use valuations.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceSpec {
    /// Residuals `|f| ≤ eps_res` count as zero.
    pub eps_res: f64,
    /// Determinants and singular values must satisfy `|·| ≥ eps_reg`.
    pub eps_reg: f64,
    /// Neighborhood radius `|a − b| ≤ radius`.
    pub radius: f64,
    /// Residuals with valuation `≥ res_min_val` count as zero.
    pub res_min_val: i64,
    /// Determinants must have valuation `≤ reg_max_val`.
    pub reg_max_val: i64,
    /// Neighborhood: `v(a − b) ≥ nbhd_min_val`.
    pub nbhd_min_val: i64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self::for_precision(12)
    }
}

const KEYS: [&str; 6] = [
    "eps_res",
    "eps_reg",
    "radius",
    "res_min_val",
    "reg_max_val",
    "nbhd_min_val",
];

impl ToleranceSpec {
    /// Defaults with the p-adic thresholds scaled to precision `n`.
    pub fn for_precision(n: u32) -> Self {
        let n = i64::from(n.max(1));
        ToleranceSpec {
            eps_res: 1e-6,
            eps_reg: 1e-9,
            radius: 1e-2,
            res_min_val: n,
            reg_max_val: n / 2,
            nbhd_min_val: (n / 3).max(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.eps_res, self.eps_reg, self.radius]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0);
        if !positive {
            return Err(Error::Format(
                "real tolerances must be positive and finite".into(),
            ));
        }
        if self.res_min_val < 0 || self.reg_max_val < 0 || self.nbhd_min_val < 1 {
            return Err(Error::Format(
                "p-adic tolerance valuations out of range".into(),
            ));
        }
        Ok(())
    }

    /// `key=value` lines, one per field, in a fixed order.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        let vals = [
            self.eps_res.to_string(),
            self.eps_reg.to_string(),
            self.radius.to_string(),
            self.res_min_val.to_string(),
            self.reg_max_val.to_string(),
            self.nbhd_min_val.to_string(),
        ];
        for (k, v) in KEYS.iter().zip(vals) {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// Reads `key=value` lines; missing keys keep their defaults.
    pub fn from_lines(text: &str) -> Result<Self> {
        let mut t = ToleranceSpec::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("expected key=value, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || Error::Format(format!("bad value for {k}: `{v}`"));
            match k {
                "eps_res" => t.eps_res = v.parse().map_err(|_| bad())?,
                "eps_reg" => t.eps_reg = v.parse().map_err(|_| bad())?,
                "radius" => t.radius = v.parse().map_err(|_| bad())?,
                "res_min_val" => t.res_min_val = v.parse().map_err(|_| bad())?,
                "reg_max_val" => t.reg_max_val = v.parse().map_err(|_| bad())?,
                "nbhd_min_val" => t.nbhd_min_val = v.parse().map_err(|_| bad())?,
                _ => return Err(Error::Format(format!("unknown tolerance key `{k}`"))),
            }
        }
        t.validate()?;
        Ok(t)
    }
}
