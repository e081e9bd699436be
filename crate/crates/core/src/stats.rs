/// Successful-pull count and reward total for one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pulls: u64,
    reward_sum: f64,
}

impl ArmStats {
    pub fn record(&mut self, reward: f64) {
        self.pulls += 1;
        self.reward_sum += reward;
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn reward_sum(&self) -> f64 {
        self.reward_sum
    }

    /// Empirical mean; `None` before the first successful pull.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then(|| self.reward_sum / self.pulls as f64)
    }

    /// `sqrt(scale * log_t / N)`, infinite when `N = 0`.
    pub fn radius(&self, scale: f64, log_t: f64) -> f64 {
        if self.pulls == 0 {
            f64::INFINITY
        } else {
            (scale * log_t / self.pulls as f64).sqrt()
        }
    }

    pub fn upper(&self, scale: f64, log_t: f64) -> f64 {
        match self.mean() {
            Some(mu) => mu + self.radius(scale, log_t),
            None => f64::INFINITY,
        }
    }

    pub fn lower(&self, scale: f64, log_t: f64) -> f64 {
        match self.mean() {
            Some(mu) => mu - self.radius(scale, log_t),
            None => f64::NEG_INFINITY,
        }
    }
}
