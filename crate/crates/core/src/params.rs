//! Every constant the embedders use, with two default profiles and JSON overrides.
//!
//! The `paper` profile evaluates the asymptotic formulas literally; at desk scale most of its
//! targets collapse to 0 or 1 and its thresholds exceed every degree. The `desk` profile keeps
//! the same formulas where they are usable, floors set-size targets at small positive values, and
//! sizes the nested sets from the degrees actually available. Any value can be pinned by an
//! override.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::diam_bound;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Desk,
    Paper,
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Desk => "desk",
            Profile::Paper => "paper",
        })
    }
}

/// Values pinned by the caller. Unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub profile: Option<Profile>,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub c: Option<f64>,
    pub c0: Option<f64>,
    pub big_c: Option<f64>,
    pub c_prime: Option<f64>,
    pub big_k: Option<f64>,
    pub threshold_scale: Option<f64>,
    pub retries: Option<usize>,
    pub effort: Option<usize>,
    pub ell: Option<usize>,
    pub delta: Option<f64>,
    pub delta_prime: Option<f64>,
    pub delta_double_prime: Option<f64>,
    pub b: Option<usize>,
    pub diam: Option<f64>,
    pub dense_threshold: Option<f64>,
    pub deg_cut: Option<f64>,
    pub p: Option<f64>,
    pub s1: Option<usize>,
    pub s2: Option<usize>,
    pub s3: Option<usize>,
    pub child_cap: Option<usize>,
    pub drc_t: Option<usize>,
    pub drc_m: Option<usize>,
    pub drc_a: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamSet {
    pub profile: Profile,
    pub eps1: f64,
    pub eps2: f64,
    /// `ℓ = ⌊c·d⌋`.
    pub c: f64,
    pub c0: f64,
    pub big_c: f64,
    pub c_prime: f64,
    pub big_k: f64,
    /// Multiplies the Δ-type thresholds.
    pub threshold_scale: f64,
    pub retries: usize,
    /// Local-search restarts per expansion check.
    pub effort: usize,
    pub overrides: Overrides,
    /// Overrides exactly as supplied, echoed into reports.
    pub raw_overrides: serde_json::Value,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet::desk()
    }
}

impl ParamSet {
    pub fn desk() -> Self {
        ParamSet {
            profile: Profile::Desk,
            eps1: 0.05,
            eps2: 0.1,
            c: 0.75,
            c0: 0.2,
            big_c: 3.0,
            c_prime: 0.5,
            big_k: 4.0,
            threshold_scale: 1.0,
            retries: 20,
            effort: 8,
            overrides: Overrides::default(),
            raw_overrides: serde_json::Value::Object(Default::default()),
        }
    }

    pub fn paper() -> Self {
        ParamSet {
            profile: Profile::Paper,
            eps2: 0.001,
            c: 1.0 / 25_000.0,
            c0: 0.001,
            big_c: 10.0,
            c_prime: 1.0,
            big_k: 100.0,
            ..ParamSet::desk()
        }
    }

    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Desk => Self::desk(),
            Profile::Paper => Self::paper(),
        }
    }

    /// Parses a JSON object of overrides on top of its `profile` (desk if absent).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let ov: Overrides = serde_json::from_value(raw.clone()).map_err(|e| Error::Params(e.to_string()))?;
        Self::for_profile(ov.profile.unwrap_or_default()).with_overrides(ov, raw)
    }

    pub fn with_overrides(mut self, ov: Overrides, raw: serde_json::Value) -> Result<Self> {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = ov.$f { self.$f = v; } )* };
        }
        take!(
            eps1,
            eps2,
            c,
            c0,
            big_c,
            c_prime,
            big_k,
            threshold_scale,
            retries,
            effort
        );
        if let Some(p) = ov.profile {
            self.profile = p;
        }
        if !(self.eps1 > 0.0 && self.eps1 <= 1.0) || self.eps2 <= 0.0 || self.c <= 0.0 {
            return Err(Error::Params(
                "eps1 must lie in (0,1]; eps2 and c must be positive".into(),
            ));
        }
        if let Some(p) = ov.p {
            if p <= 0.0 {
                return Err(Error::Params(format!("p = {p} must be positive")));
            }
        }
        self.overrides = ov;
        self.raw_overrides = raw;
        Ok(self)
    }

    fn is_desk(&self) -> bool {
        self.profile == Profile::Desk
    }

    /// Set-size target: the floored formula, at least `min_desk` under the desk profile and at
    /// least 1 otherwise.
    fn target(&self, formula: f64, min_desk: usize) -> usize {
        let f = formula.max(0.0).floor() as usize;
        if self.is_desk() {
            f.max(min_desk)
        } else {
            f.max(1)
        }
    }

    /// Core count `ℓ` for average degree `d`.
    pub fn ell(&self, d: f64) -> usize {
        self.overrides.ell.unwrap_or_else(|| self.target(self.c * d, 2))
    }

    /// Distance budget `(2/ε₁)·ln³(15n/t)`, or `n` when that is undefined.
    pub fn diam(&self, n: usize, t: f64) -> f64 {
        self.overrides
            .diam
            .unwrap_or_else(|| diam_bound(n, self.eps1, t).unwrap_or(n as f64))
    }

    pub fn dense_threshold(&self, n: usize) -> f64 {
        self.overrides.dense_threshold.unwrap_or_else(|| ln(n).powi(14))
    }

    pub fn reduction(&self, n: usize, d: f64) -> ReductionParams {
        let t = self.eps2 * d * d;
        let m = (15.0 * n as f64 / t).ln().max(0.0);
        let s = self.threshold_scale;
        let delta = self.overrides.delta.unwrap_or(s * d * m.powi(8) / 600.0);
        ReductionParams {
            ell: self.ell(d),
            m,
            delta,
            s2: self.overrides.s2.unwrap_or((d * delta / 5.0).floor().max(1.0) as usize),
            delta_prime: self.overrides.delta_prime.unwrap_or(s * d * m.powi(4)),
            diam: self.diam(n, t),
            half_degree: self.target(d / 2.0 - 1.0, 1),
        }
    }

    pub fn dense(&self, n: usize, d: f64) -> DenseParams {
        let t = self.eps2 * d * d;
        let ln_n = ln(n);
        let s = self.threshold_scale;
        let ov = &self.overrides;
        let (s1, child_cap, s2_prime, s2, s3) = if self.is_desk() {
            let s1 = ov.s1.unwrap_or(((d / 2.0).floor() as usize).max(2));
            let fit = ov.s2.map_or(1, |s2| s2.div_ceil(s1.max(1)));
            let cap = ov.child_cap.unwrap_or(((d / 4.0).floor() as usize).max(fit));
            let s2p = s1 * cap;
            let s2 = ov.s2.unwrap_or((4 * s2p / 5).max(1));
            let s3 = ov.s3.unwrap_or((4 * s2 * cap / 5).max(1));
            (s1, cap, s2p, s2, s3)
        } else {
            let s1 = ov.s1.unwrap_or(self.target(d / 2.0, 1));
            let cap = ov.child_cap.unwrap_or((d / 4.0 - 1.0).max(0.0).floor() as usize);
            let s2p = self.target(d * d / 8.0 - d / 2.0, 1).max(s1 * cap);
            let s2 = ov.s2.unwrap_or(self.target(d * d / 10.0, 1));
            let s3 = ov.s3.unwrap_or(self.target(d * d * d / 50.0, 1));
            (s1, cap, s2p, s2, s3)
        };
        DenseParams {
            ell: self.ell(d),
            b: ov.b.unwrap_or_else(|| self.target(d / ln_n.powi(9), 2)),
            delta: ov.delta.unwrap_or(s * d * ln_n.powi(8)),
            delta_double_prime: ov.delta_double_prime.unwrap_or(s * d * ln_n.powi(13)),
            diam: self.diam(n, t),
            s1,
            child_cap,
            s2_prime,
            s2,
            s3,
            s1_child_bound: (d / 4.0).max(child_cap as f64),
            min_degree: d / 4.0,
            core_degree: d / 2.0,
        }
    }

    pub fn sparse(&self, d: f64) -> SparseParams {
        SparseParams {
            deg_cut: self.overrides.deg_cut.unwrap_or(d * d * d),
            a_degree: d / 10.0,
            u_degree: d / 20.0,
            w_degree: self.c0 * d * d,
            cap: d.floor().max(1.0) as usize,
            p: self.overrides.p.unwrap_or(self.big_c / d).min(1.0),
            big_c: self.big_c,
            c_prime: self.c_prime,
            big_k: self.big_k,
            retries: self.retries,
        }
    }
}

fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionParams {
    pub ell: usize,
    pub m: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub diam: f64,
    /// Target size of each second layer, `d·Δ/5`.
    pub s2: usize,
    /// Children kept per first-level vertex (`d/2 − 1`).
    pub half_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DenseParams {
    pub ell: usize,
    pub b: usize,
    pub delta: f64,
    pub delta_double_prime: f64,
    pub diam: f64,
    pub s1: usize,
    pub child_cap: usize,
    pub s2_prime: usize,
    pub s2: usize,
    pub s3: usize,
    /// Largest number of second-level children a first-level vertex may have.
    pub s1_child_bound: f64,
    pub min_degree: f64,
    pub core_degree: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SparseParams {
    pub deg_cut: f64,
    pub a_degree: f64,
    pub u_degree: f64,
    pub w_degree: f64,
    /// Degree cap applied to the low side before a hat construction.
    pub cap: usize,
    pub p: f64,
    pub big_c: f64,
    pub c_prime: f64,
    pub big_k: f64,
    pub retries: usize,
}
