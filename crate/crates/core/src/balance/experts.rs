use libm::{exp, log, sqrt};

use super::{BalancePoint, BalanceSubroutine, Decision};
use crate::{Error, Result};

/// Multiplicative weights (Hedge) over the two experts "yes" and "no".
///
/// Rewards are shifted from `[-1, 1]` to `[0, 1]` before exponentiation.
/// Weights are kept in log space so long horizons cannot overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoExperts {
    log_w_yes: f64,
    log_w_no: f64,
    eta: f64,
}

impl TwoExperts {
    /// Learning rate `sqrt(8 ln 2 / T)`.
    pub fn new(horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Config("experts horizon must be at least 1".into()));
        }
        Self::with_eta(sqrt(8.0 * log(2.0) / horizon as f64))
    }

    pub fn with_eta(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Config(alloc::format!("learning rate must be positive, got {eta}")));
        }
        Ok(Self { log_w_yes: 0.0, log_w_no: 0.0, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `w_yes / w_no`.
    pub fn weight_ratio(&self) -> f64 {
        exp(self.log_w_yes - self.log_w_no)
    }

    /// `w_yes / (w_yes + w_no)`.
    pub fn probability(&self) -> f64 {
        1.0 / (1.0 + exp(self.log_w_no - self.log_w_yes))
    }
}

impl BalanceSubroutine for TwoExperts {
    fn decide(&mut self, coin: f64) -> Decision {
        Decision::draw(self.probability(), coin)
    }

    fn observe(&mut self, point: BalancePoint) {
        self.log_w_yes += self.eta * (point.alpha() + 1.0) / 2.0;
        self.log_w_no += self.eta * (point.beta() + 1.0) / 2.0;
        let top = self.log_w_yes.max(self.log_w_no);
        self.log_w_yes -= top;
        self.log_w_no -= top;
    }
}
