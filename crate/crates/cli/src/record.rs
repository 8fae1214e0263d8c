use serde::{Deserialize, Serialize};

/// One computed value with every input needed to recompute it. Parameters
/// that the method does not read are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub ensemble: String,
    pub degree: usize,
    pub method: String,
    /// `ok`, `nonconvergence`, `excessive_discards` or `failed`.
    pub status: String,
    pub value: Option<f64>,
    /// Quadrature error estimate, or standard error for sampled methods.
    pub err_or_stderr: Option<f64>,
    pub a_d_band: f64,
    pub trials: Option<usize>,
    pub panels: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_panels: Option<usize>,
    pub subdiv: Option<u32>,
    pub epsilon: Option<f64>,
    pub discarded: Option<usize>,
    pub error: Option<String>,
    pub wall_time_ms: f64,
    pub version: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Arguments to the `depth` command that recompute this record.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![
            "depth".to_string(),
            "--ensemble".into(),
            self.ensemble.clone(),
            "--degree".into(),
            self.degree.to_string(),
            "--method".into(),
            self.method.clone(),
        ];
        let mut push = |flag: &str, v: Option<String>| {
            if let Some(v) = v {
                args.push(flag.into());
                args.push(v);
            }
        };
        push("--tol", self.tol.map(|v| v.to_string()));
        push("--max-panels", self.max_panels.map(|v| v.to_string()));
        push("--trials", self.trials.map(|v| v.to_string()));
        push("--seed", self.seed.map(|v| v.to_string()));
        push("--subdiv", self.subdiv.map(|v| v.to_string()));
        push("--epsilon", self.epsilon.map(|v| v.to_string()));
        args
    }
}
