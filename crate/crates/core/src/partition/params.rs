use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_RESAMPLES: u64 = 1_000_000;

/// Thresholds of the random partition. Defaults follow the asymptotic
/// formulas in the maximum degree `Δ` and `t`, rounded up and clamped to at
/// least 1; every field may be overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionParams {
    /// Number of random classes, `Δ^{1-1/(10t²)}`.
    pub ell: u64,
    /// Allowed same-class bad left-neighbors, `35t²`.
    pub kappa_bad: u64,
    /// Edge count among same-class good left-neighbors that is forbidden, `100t⁴`.
    pub mu: u64,
    /// Codegree into `N_L(v)` from which a left-neighbor counts as bad, `Δ^{1-1/(2t²)}`.
    pub bad_threshold: u64,
    /// Allowed same-class degree, `2Δ^{1/(10t²)}`.
    pub part_degree_bound: u64,
    pub max_resamples: u64,
}

/// `⌈Δ^{num/den}⌉`, snapping values within float noise of an integer.
pub(crate) fn ceil_pow(delta: u64, num: u64, den: u64) -> u64 {
    let x = (delta as f64).powf(num as f64 / den as f64);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

impl PartitionParams {
    pub fn defaults(delta: u64, t: u64) -> Self {
        assert!(t >= 1, "t must be at least 1");
        let delta = delta.max(1);
        let t2 = t * t;
        PartitionParams {
            ell: ceil_pow(delta, 10 * t2 - 1, 10 * t2).max(1),
            kappa_bad: (35 * t2).max(1),
            mu: (100 * t2 * t2).max(1),
            bad_threshold: ceil_pow(delta, 2 * t2 - 1, 2 * t2).max(1),
            part_degree_bound: (2 * ceil_pow(delta, 1, 10 * t2)).max(1),
            max_resamples: DEFAULT_MAX_RESAMPLES,
        }
    }

    /// Upper bound on the number of final classes, `ell·(kappa_bad + mu + 1)`.
    pub fn class_bound(&self) -> u128 {
        self.ell as u128 * (self.kappa_bad as u128 + self.mu as u128 + 1)
    }

    pub fn validate(&self) -> crate::error::Result<()> {
        if self.ell == 0 || self.part_degree_bound == 0 {
            return Err(crate::error::Error::InvalidParam(
                "ell and part_degree_bound must be at least 1".into(),
            ));
        }
        if self.ell > u32::MAX as u64 {
            return Err(crate::error::Error::InvalidParam(format!(
                "ell = {} does not fit a class id",
                self.ell
            )));
        }
        Ok(())
    }
}

pub fn default_params(delta: u64, t: u64) -> PartitionParams {
    PartitionParams::defaults(delta, t)
}
