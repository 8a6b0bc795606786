//! The verification pipeline: a validated run specification, sequential
//! execution in dependency order, and the JSON report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::certificate::{CancelToken, Certificate, SampleConfig};
use crate::checks::{run_check, Check};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::irreps::{decompose_irreps, DEFAULT_TOL, MAX_DECOMPOSE_ORDER};

pub const TOOL: &str = "pontryagin-verify";
pub const DEFAULT_RUN_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub group: String,
    pub checks: Vec<String>,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub output: Option<PathBuf>,
}

impl RunSpec {
    /// Validate everything up front so that a bad spec never starts a run.
    pub fn new(
        group: &str,
        checks: &str,
        tol: f64,
        seed: u64,
        samples: usize,
        output: Option<PathBuf>,
    ) -> Result<Self> {
        let desc: GroupDescriptor = group.parse()?;
        desc.validate()?;
        if let Some(n) = desc.order().filter(|&n| n > MAX_DECOMPOSE_ORDER) {
            return Err(Error::TooLarge {
                order: n,
                max: MAX_DECOMPOSE_ORDER,
            });
        }
        let parsed = Check::parse_list(checks)?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "tol must be positive, got {tol}"
            )));
        }
        if samples == 0 {
            return Err(Error::InvalidSpec("samples must be at least 1".into()));
        }
        Ok(RunSpec {
            group: group.to_string(),
            checks: parsed.iter().map(|c| c.name().to_string()).collect(),
            tol,
            seed,
            samples,
            output,
        })
    }

    fn parsed_checks(&self) -> Result<Vec<Check>> {
        Check::parse_list(&self.checks.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub millis: u64,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub spec: RunSpec,
    pub irrep_dims: Vec<usize>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let report: RunReport =
            serde_json::from_str(json).map_err(|e| Error::MalformedReport(e.to_string()))?;
        report.validate()?;
        Ok(report)
    }

    fn validate(&self) -> Result<()> {
        if self.checks.is_empty() {
            return Err(Error::MalformedReport("no checks".into()));
        }
        for c in &self.checks {
            let consistent = match c.status {
                CheckStatus::Pass => c.certificate.pass,
                CheckStatus::Fail => !c.certificate.pass,
                CheckStatus::Skipped => !c.certificate.pass && c.certificate.max_residual.is_none(),
            };
            if !consistent || c.name != c.certificate.check {
                return Err(Error::MalformedReport(format!(
                    "inconsistent entry for {}",
                    c.name
                )));
            }
        }
        let all = self.checks.iter().all(|c| c.status == CheckStatus::Pass);
        if all != self.pass {
            return Err(Error::MalformedReport(
                "overall pass disagrees with checks".into(),
            ));
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

pub fn run(spec: &RunSpec) -> Result<RunReport> {
    run_with_cancel(spec, CancelToken::default())
}

/// Errors only on an invalid spec or on cancellation; check failures and
/// numerical errors end up in the report.
pub fn run_with_cancel(spec: &RunSpec, cancel: CancelToken) -> Result<RunReport> {
    let checks = spec.parsed_checks()?;
    let desc: GroupDescriptor = spec.group.parse()?;
    let mut cfg = SampleConfig::new(spec.samples, spec.seed, spec.tol);
    cfg.cancel = cancel;

    let started = Instant::now();
    let catalog =
        FiniteGroup::build(&desc).and_then(|g| decompose_irreps(&g, spec.seed, DEFAULT_TOL));
    let catalog_millis = started.elapsed().as_millis() as u64;
    let irrep_dims = catalog.as_ref().map(|c| c.dims()).unwrap_or_default();
    let catalog = catalog.map(Arc::new);

    let mut reports = Vec::with_capacity(checks.len());
    let mut blocked: Option<String> = None;
    for check in checks {
        let name = check.name();
        if let Some(reason) = &blocked {
            reports.push(skipped(name, &spec.group, &cfg, reason));
            continue;
        }
        let t0 = Instant::now();
        let certificate = match &catalog {
            Ok(cat) => match run_check(check, cat, &cfg) {
                Ok(ws) => Certificate::from_witnesses(name, cat.group().name(), &cfg, ws),
                Err(Error::Interrupted) => return Err(Error::Interrupted),
                Err(e) => Certificate::failed(name, cat.group().name(), &cfg, &e),
            },
            Err(e) => Certificate::failed(name, &spec.group, &cfg, e),
        };
        let mut millis = t0.elapsed().as_millis() as u64;
        if check == Check::Group {
            millis += catalog_millis;
        }
        if check == Check::Group && !certificate.pass {
            blocked = Some("group check failed".into());
        }
        if catalog.is_err() && blocked.is_none() {
            blocked = Some("irrep catalog unavailable".into());
        }
        let status = if certificate.pass {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        reports.push(CheckReport {
            name: name.to_string(),
            status,
            millis,
            certificate,
        });
    }
    let pass = reports.iter().all(|r| r.status == CheckStatus::Pass);
    let report = RunReport {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        irrep_dims,
        checks: reports,
        pass,
    };
    if let Some(path) = &spec.output {
        report.write(path)?;
    }
    Ok(report)
}

fn skipped(name: &str, group: &str, cfg: &SampleConfig, reason: &str) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        status: CheckStatus::Skipped,
        millis: 0,
        certificate: Certificate::skipped(name, group, cfg, reason),
    }
}

pub fn summary_table(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{TOOL} {}  group {}  seed {}",
        report.version, report.spec.group, report.spec.seed
    );
    let _ = writeln!(out, "irrep dims {:?}", report.irrep_dims);
    let _ = writeln!(
        out,
        "{:<14} {:>12} {:>10} {:>7} {:>8}",
        "check", "max_residual", "tol", "status", "ms"
    );
    for c in &report.checks {
        let residual = c
            .certificate
            .max_residual
            .map_or_else(|| "-".to_string(), |r| format!("{r:.3e}"));
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        let _ = writeln!(
            out,
            "{:<14} {:>12} {:>10.1e} {:>7} {:>8}",
            c.name, residual, c.certificate.tol, status, c.millis
        );
    }
    let _ = writeln!(out, "overall {}", if report.pass { "PASS" } else { "FAIL" });
    out
}

pub fn summarize(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    Ok(summary_table(&RunReport::from_json(&text)?))
}
