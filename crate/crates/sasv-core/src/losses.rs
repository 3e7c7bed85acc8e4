//! Differentiable training objectives: the softened a-DCF, binary
//! cross-entropy, and their average, each returning the loss value
//! together with exact gradients with respect to the predicted
//! probabilities and the detection threshold.
//!
//! The hard counting rates are softened with a scaled logistic,
//! e.g. for a target trial `sigmoid((tau - y) / alpha)`; `alpha`
//! controls how sharply the soft count approaches the 0/1 step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{ClassCounts, CostModel, DetectionRates};
use crate::real::Real;
use crate::scoring::{sigmoid, sigmoid_grad_from_output, TrialLabel};

/// Clamp applied to BCE predictions so the logs stay finite.
pub const BCE_EPS: f64 = 1e-7;

/// Configuration of the softened a-DCF objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftAdcfConfig<R = crate::Scalar> {
    pub cost: CostModel<R>,
    /// Softness temperature of the logistic rate surrogates; > 0.
    pub alpha: R,
    /// When false, `grad_tau` is reported as zero and the threshold is
    /// treated as a fixed constant.
    pub tau_trainable: bool,
    pub tau_init: R,
    /// Divide the loss by the best trivial-system cost, mirroring the
    /// normalized evaluation metric.
    pub normalize: bool,
}

impl<R: Real> Default for SoftAdcfConfig<R> {
    fn default() -> Self {
        Self {
            cost: CostModel::default(),
            alpha: R::from_f64_lossy(0.05),
            tau_trainable: true,
            tau_init: R::half(),
            normalize: true,
        }
    }
}

impl<R: Real> SoftAdcfConfig<R> {
    pub fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        if !(self.alpha > R::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "soft a-DCF alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if self.tau_init < R::zero() || self.tau_init > R::one() {
            return Err(Error::InvalidConfig(format!(
                "tau_init must lie in [0, 1], got {}",
                self.tau_init
            )));
        }
        Ok(())
    }
}

/// Loss value plus gradients: one entry per batch score and a scalar
/// for the threshold (zero when the threshold is fixed).
#[derive(Debug, Clone, PartialEq)]
pub struct LossOutput<R = crate::Scalar> {
    pub value: R,
    pub grad_scores: Vec<R>,
    pub grad_tau: R,
}

fn check_batch<R: Real>(scores: &[R], labels: &[TrialLabel]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::dim(labels.len(), scores.len(), "scores vs labels"));
    }
    if scores.is_empty() {
        return Err(Error::EmptyInput {
            context: "empty batch".into(),
        });
    }
    for &s in scores {
        if !s.is_finite() || s < R::zero() || s > R::one() {
            return Err(Error::OutOfRange {
                what: "batch score".into(),
                value: s.to_f64().unwrap_or(f64::NAN),
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(())
}

/// Softened miss/false-alarm rates. A class absent from the batch
/// contributes a zero rate; the returned counts flag that condition.
pub fn soft_rates<R: Real>(
    scores: &[R],
    labels: &[TrialLabel],
    tau: R,
    alpha: R,
) -> Result<(DetectionRates<R>, ClassCounts)> {
    if !(alpha > R::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!("alpha must be > 0, got {alpha}")));
    }
    check_batch(scores, labels)?;

    let mut counts = ClassCounts::default();
    let mut miss_sum = R::zero();
    let mut fa_non_sum = R::zero();
    let mut fa_spf_sum = R::zero();
    for (&y, &label) in scores.iter().zip(labels) {
        match label {
            TrialLabel::Target => {
                counts.target += 1;
                miss_sum += sigmoid((tau - y) / alpha);
            }
            TrialLabel::Nontarget => {
                counts.nontarget += 1;
                fa_non_sum += sigmoid((y - tau) / alpha);
            }
            TrialLabel::Spoof => {
                counts.spoof += 1;
                fa_spf_sum += sigmoid((y - tau) / alpha);
            }
        }
    }
    let mean = |sum: R, n: usize| {
        if n == 0 {
            R::zero()
        } else {
            sum / R::from_usize(n).unwrap()
        }
    };
    let rates = DetectionRates {
        p_miss_tar: mean(miss_sum, counts.target),
        p_fa_non: mean(fa_non_sum, counts.nontarget),
        p_fa_spf: mean(fa_spf_sum, counts.spoof),
        threshold: tau,
    };
    Ok((rates, counts))
}

/// Softened a-DCF with exact gradients.
///
/// Writing `u_i = (tau - y_i)/alpha` for targets and `(y_i - tau)/alpha`
/// for the false-alarm classes, each score's gradient is its class
/// weight times `sigmoid'(u_i)` chained through `±1/alpha`; the
/// threshold gradient is the sum of the opposite chains.
pub fn soft_adcf_loss<R: Real>(
    scores: &[R],
    labels: &[TrialLabel],
    tau: R,
    config: &SoftAdcfConfig<R>,
) -> Result<LossOutput<R>> {
    config.validate()?;
    check_batch(scores, labels)?;
    let counts = {
        let mut c = ClassCounts::default();
        for &l in labels {
            match l {
                TrialLabel::Target => c.target += 1,
                TrialLabel::Nontarget => c.nontarget += 1,
                TrialLabel::Spoof => c.spoof += 1,
            }
        }
        c
    };

    let scale = if config.normalize {
        let denom = config.cost.trivial_cost();
        if denom == R::zero() {
            return Err(Error::DegenerateCostModel);
        }
        R::one() / denom
    } else {
        R::one()
    };

    // per-trial weight of each class term, including the 1/N_class mean
    let class_weight = |c: R, pi: R, n: usize| -> R {
        if n == 0 {
            R::zero()
        } else {
            scale * c * pi / R::from_usize(n).unwrap()
        }
    };
    let w_tar = class_weight(config.cost.c_miss_tar, config.cost.pi_tar, counts.target);
    let w_non = class_weight(config.cost.c_fa_non, config.cost.pi_non, counts.nontarget);
    let w_spf = class_weight(config.cost.c_fa_spf, config.cost.pi_spf, counts.spoof);

    let inv_alpha = R::one() / config.alpha;
    let mut value = R::zero();
    let mut grad_scores = Vec::with_capacity(scores.len());
    let mut grad_tau = R::zero();
    for (&y, &label) in scores.iter().zip(labels) {
        let (w, u) = match label {
            TrialLabel::Target => (w_tar, (tau - y) * inv_alpha),
            TrialLabel::Nontarget => (w_non, (y - tau) * inv_alpha),
            TrialLabel::Spoof => (w_spf, (y - tau) * inv_alpha),
        };
        let s = sigmoid(u);
        let ds = sigmoid_grad_from_output(s) * inv_alpha;
        value += w * s;
        match label {
            TrialLabel::Target => {
                grad_scores.push(-(w * ds));
                grad_tau += w * ds;
            }
            TrialLabel::Nontarget | TrialLabel::Spoof => {
                grad_scores.push(w * ds);
                grad_tau -= w * ds;
            }
        }
    }
    if !config.tau_trainable {
        grad_tau = R::zero();
    }
    Ok(LossOutput {
        value,
        grad_scores,
        grad_tau,
    })
}

/// Binary cross-entropy over clamped predictions; `grad_tau` is zero.
pub fn bce_loss<R: Real>(predictions: &[R], targets: &[bool]) -> Result<LossOutput<R>> {
    if predictions.len() != targets.len() {
        return Err(Error::dim(
            targets.len(),
            predictions.len(),
            "predictions vs targets",
        ));
    }
    if predictions.is_empty() {
        return Err(Error::EmptyInput {
            context: "empty batch".into(),
        });
    }
    let eps = R::from_f64_lossy(BCE_EPS);
    let lo = eps;
    let hi = R::one() - eps;
    let inv_n = R::one() / R::from_usize(predictions.len()).unwrap();

    let mut value = R::zero();
    let mut grad_scores = Vec::with_capacity(predictions.len());
    for (&p, &y) in predictions.iter().zip(targets) {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                context: "BCE prediction".into(),
            });
        }
        let p = p.min(hi).max(lo);
        if y {
            value -= inv_n * p.ln();
            grad_scores.push(-(inv_n / p));
        } else {
            value -= inv_n * (R::one() - p).ln();
            grad_scores.push(inv_n / (R::one() - p));
        }
    }
    Ok(LossOutput {
        value,
        grad_scores,
        grad_tau: R::zero(),
    })
}

/// Average of the soft a-DCF and BCE objectives; BCE targets are
/// derived from the labels (1 iff target).
pub fn combined_loss<R: Real>(
    scores: &[R],
    labels: &[TrialLabel],
    tau: R,
    config: &SoftAdcfConfig<R>,
) -> Result<LossOutput<R>> {
    let adcf = soft_adcf_loss(scores, labels, tau, config)?;
    let targets: Vec<bool> = labels.iter().map(|l| l.is_target()).collect();
    let bce = bce_loss(scores, &targets)?;
    let half = R::half();
    let grad_scores = adcf
        .grad_scores
        .iter()
        .zip(&bce.grad_scores)
        .map(|(&a, &b)| half * (a + b))
        .collect();
    Ok(LossOutput {
        value: half * (adcf.value + bce.value),
        grad_scores,
        grad_tau: half * adcf.grad_tau,
    })
}
