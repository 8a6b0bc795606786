//! Machine-readable verification certificates and sampling configuration.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One measured quantity inside a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    pub fn new(label: impl Into<String>, residual: f64) -> Self {
        let (residual, detail) = if residual.is_finite() {
            (residual, None)
        } else {
            (f64::MAX, Some("non-finite residual".to_string()))
        };
        Witness {
            label: label.into(),
            residual,
            detail,
        }
    }

    /// A yes/no fact recorded as residual 0 (holds) or 1 (fails).
    pub fn flag(label: impl Into<String>, holds: bool) -> Self {
        Witness::new(label, if holds { 0.0 } else { 1.0 })
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub group: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    /// `None` when the check was skipped.
    pub max_residual: Option<f64>,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

impl Certificate {
    /// Passes iff every witness residual is at most `cfg.tol`.
    pub fn from_witnesses(
        check: &str,
        group: &str,
        cfg: &SampleConfig,
        witnesses: Vec<Witness>,
    ) -> Self {
        let max = witnesses.iter().map(|w| w.residual).fold(0.0, f64::max);
        Certificate {
            check: check.to_string(),
            group: group.to_string(),
            seed: cfg.seed,
            samples: cfg.samples,
            tol: cfg.tol,
            max_residual: Some(max),
            pass: witnesses.iter().all(|w| w.residual <= cfg.tol),
            witnesses,
        }
    }

    pub fn skipped(
        check: &str,
        group: &str,
        cfg: &SampleConfig,
        reason: impl Into<String>,
    ) -> Self {
        Certificate {
            check: check.to_string(),
            group: group.to_string(),
            seed: cfg.seed,
            samples: cfg.samples,
            tol: cfg.tol,
            max_residual: None,
            pass: false,
            witnesses: vec![Witness {
                label: "skipped".into(),
                residual: 0.0,
                detail: Some(reason.into()),
            }],
        }
    }

    pub fn failed(check: &str, group: &str, cfg: &SampleConfig, err: &Error) -> Self {
        let mut cert =
            Certificate::from_witnesses(check, group, cfg, vec![Witness::flag("error", false)]);
        cert.witnesses[0].detail = Some(err.to_string());
        cert
    }

    pub fn witness(&self, label: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.label == label)
    }

    /// Residual of the named witness; panics if absent.
    pub fn residual(&self, label: &str) -> f64 {
        self.witness(label)
            .unwrap_or_else(|| panic!("certificate `{}` has no witness `{label}`", self.check))
            .residual
    }
}

/// Cooperative cancellation flag shared between a caller and a running check.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Samples are drawn in batches of this size; cancellation is observed
/// between batches.
pub const BATCH: usize = 25;

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub cancel: CancelToken,
}

impl SampleConfig {
    pub fn new(samples: usize, seed: u64, tol: f64) -> Self {
        SampleConfig {
            samples,
            seed,
            tol,
            cancel: CancelToken::default(),
        }
    }

    pub fn with_samples(&self, samples: usize) -> Self {
        SampleConfig {
            samples,
            ..self.clone()
        }
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        SampleConfig {
            tol,
            ..self.clone()
        }
    }

    /// Fresh generator for a named stream, so checks do not share state.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Call at the top of each sample iteration.
    pub fn checkpoint(&self, i: usize) -> Result<()> {
        if i.is_multiple_of(BATCH) && self.cancel.is_cancelled() {
            Err(Error::Interrupted)
        } else {
            Ok(())
        }
    }
}
