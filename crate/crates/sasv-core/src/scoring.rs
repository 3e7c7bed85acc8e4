//! Domain types shared by all modules and the elementary scoring
//! operations: cosine similarity, probabilistic ASV scoring and
//! score-sum fusion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Fixed-dimension utterance embedding (ASV or CM role).
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<R = crate::Scalar> {
    utt_id: String,
    values: Vec<R>,
}

impl<R: Real> Embedding<R> {
    /// Builds an embedding, rejecting empty vectors and non-finite values.
    pub fn new(utt_id: impl Into<String>, values: Vec<R>) -> Result<Self> {
        let utt_id = utt_id.into();
        if values.is_empty() {
            return Err(Error::EmptyInput {
                context: format!("embedding `{utt_id}` has no components"),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("embedding `{utt_id}`"),
            });
        }
        Ok(Self { utt_id, values })
    }

    pub fn utt_id(&self) -> &str {
        &self.utt_id
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> R {
        self.values
            .iter()
            .map(|&v| v * v)
            .fold(R::zero(), |acc, v| acc + v)
            .sqrt()
    }
}

/// SASV trial class. `Target` requires same speaker and bonafide audio;
/// `Spoof` means the test utterance is spoofed regardless of speaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialLabel {
    Target,
    Nontarget,
    Spoof,
}

impl TrialLabel {
    /// Binary SASV ground truth: accept only targets.
    pub fn is_target(self) -> bool {
        matches!(self, TrialLabel::Target)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TrialLabel::Target => "target",
            TrialLabel::Nontarget => "nontarget",
            TrialLabel::Spoof => "spoof",
        }
    }
}

impl fmt::Display for TrialLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrialLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "target" => Ok(TrialLabel::Target),
            "nontarget" => Ok(TrialLabel::Nontarget),
            "spoof" => Ok(TrialLabel::Spoof),
            other => Err(format!(
                "unknown label `{other}` (expected target, nontarget or spoof)"
            )),
        }
    }
}

/// One (enrollment, test) utterance pair to be scored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trial {
    pub enroll_id: String,
    pub test_id: String,
    pub label: Option<TrialLabel>,
}

impl Trial {
    pub fn new(
        enroll_id: impl Into<String>,
        test_id: impl Into<String>,
        label: Option<TrialLabel>,
    ) -> Self {
        Self {
            enroll_id: enroll_id.into(),
            test_id: test_id.into(),
            label,
        }
    }

    pub fn labeled(
        enroll_id: impl Into<String>,
        test_id: impl Into<String>,
        label: TrialLabel,
    ) -> Self {
        Self::new(enroll_id, test_id, Some(label))
    }

    /// Label, or an error naming the trial when it is missing.
    pub fn require_label(&self) -> Result<TrialLabel> {
        self.label.ok_or_else(|| Error::UnlabeledTrial {
            enroll_id: self.enroll_id.clone(),
            test_id: self.test_id.clone(),
        })
    }
}

/// A trial together with its post-sigmoid SASV probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord<R = crate::Scalar> {
    trial: Trial,
    score: R,
}

impl<R: Real> ScoreRecord<R> {
    /// Rejects scores outside `[0, 1]`; everything downstream assumes
    /// probabilities.
    pub fn new(trial: Trial, score: R) -> Result<Self> {
        if !score.is_finite() || score < R::zero() || score > R::one() {
            return Err(Error::OutOfRange {
                what: format!("score for trial {} {}", trial.enroll_id, trial.test_id),
                value: score.to_f64().unwrap_or(f64::NAN),
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self { trial, score })
    }

    pub fn trial(&self) -> &Trial {
        &self.trial
    }

    pub fn score(&self) -> R {
        self.score
    }

    pub fn label(&self) -> Option<TrialLabel> {
        self.trial.label
    }
}

/// Cosine similarity between two embeddings, clamped to `[-1, 1]`
/// against floating-point overshoot.
pub fn cosine_similarity<R: Real>(a: &Embedding<R>, b: &Embedding<R>) -> Result<R> {
    if a.dim() != b.dim() {
        return Err(Error::dim(
            a.dim(),
            b.dim(),
            format!("cosine of `{}` and `{}`", a.utt_id(), b.utt_id()),
        ));
    }
    let norm_a = a.norm();
    let norm_b = b.norm();
    if norm_a == R::zero() {
        return Err(Error::ZeroNormEmbedding {
            utt_id: a.utt_id().to_string(),
        });
    }
    if norm_b == R::zero() {
        return Err(Error::ZeroNormEmbedding {
            utt_id: b.utt_id().to_string(),
        });
    }
    let dot = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| x * y)
        .fold(R::zero(), |acc, v| acc + v);
    let cos = dot / (norm_a * norm_b);
    Ok(cos.min(R::one()).max(-R::one()))
}

/// Numerically stable logistic function; never overflows for finite input.
pub fn sigmoid<R: Real>(x: R) -> R {
    if x >= R::zero() {
        R::one() / (R::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (R::one() + e)
    }
}

/// Derivative of the logistic function expressed through its output.
pub fn sigmoid_grad_from_output<R: Real>(s: R) -> R {
    s * (R::one() - s)
}

/// Probabilistic ASV score: sigmoid of the enrollment/test cosine.
pub fn asv_probability<R: Real>(enr: &Embedding<R>, tst: &Embedding<R>) -> Result<R> {
    Ok(sigmoid(cosine_similarity(enr, tst)?))
}

/// Score-sum fusion of an ASV and a CM probability.
pub fn fuse_scores<R: Real>(p_asv: R, p_cm: R) -> Result<R> {
    for (name, p) in [("p_asv", p_asv), ("p_cm", p_cm)] {
        if !p.is_finite() || p < R::zero() || p > R::one() {
            return Err(Error::OutOfRange {
                what: name.to_string(),
                value: p.to_f64().unwrap_or(f64::NAN),
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok((p_asv + p_cm) / R::two())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(id: &str, v: &[f64]) -> Embedding<f64> {
        Embedding::new(id, v.to_vec()).unwrap()
    }

    #[test]
    fn cosine_self_similarity_is_one() {
        let e = emb("e", &[0.3, -1.2, 4.0]);
        assert_eq!(cosine_similarity(&e, &e).unwrap(), 1.0);
    }

    #[test]
    fn cosine_orthogonal_is_zero() {
        let a = emb("a", &[1.0, 0.0]);
        let b = emb("b", &[0.0, 1.0]);
        assert_eq!(cosine_similarity(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn cosine_hand_computed_value() {
        // 32 / (sqrt(14) * sqrt(77))
        let a = emb("a", &[1.0, 2.0, 3.0]);
        let b = emb("b", &[4.0, 5.0, 6.0]);
        let got = cosine_similarity(&a, &b).unwrap();
        assert!((got - 0.9746318461970762).abs() < 1e-15);
    }

    #[test]
    fn cosine_rejects_dim_mismatch_and_zero_norm() {
        let a = emb("a", &[1.0, 0.0]);
        let b = emb("b", &[1.0, 0.0, 0.0]);
        assert!(matches!(
            cosine_similarity(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let z = emb("z", &[0.0, 0.0]);
        assert!(matches!(
            cosine_similarity(&a, &z),
            Err(Error::ZeroNormEmbedding { .. })
        ));
    }

    #[test]
    fn cosine_is_clamped_against_overshoot() {
        // Nearly parallel vectors can overshoot 1 by an ulp; clamping keeps
        // the sigmoid input inside the documented range.
        let a = emb("a", &[1e-200, 1e-200, 1e-200]);
        let c = cosine_similarity(&a, &a).unwrap();
        assert!(c <= 1.0 && c >= -1.0);
    }

    #[test]
    fn sigmoid_fixed_points() {
        assert_eq!(sigmoid(0.0_f64), 0.5);
        assert!((sigmoid(1.0_f64) - 0.7310585786300049).abs() < 1e-16);
        // no overflow far into the tails
        assert!(sigmoid(700.0_f64) <= 1.0);
        assert!(sigmoid(-700.0_f64) > 0.0);
        assert!(sigmoid(-700.0_f64).is_finite());
    }

    #[test]
    fn sigmoid_symmetry_identity() {
        for &x in &[0.0, 0.5, -3.25, 17.0, -123.0_f64] {
            let s = sigmoid(x) + sigmoid(-x);
            assert!((s - 1.0).abs() < 1e-15, "x={x}: {s}");
        }
    }

    #[test]
    fn asv_probability_bounds_and_value() {
        let e = emb("e", &[0.1, -0.7, 2.0]);
        let p = asv_probability(&e, &e).unwrap();
        assert!((p - 0.7310585786300049).abs() < 1e-15);

        let neg = emb("n", &[-0.1, 0.7, -2.0]);
        let q = asv_probability(&e, &neg).unwrap();
        assert!((q - 0.2689414213699951).abs() < 1e-15);

        // sigmoid(32 / (sqrt(14) * sqrt(77)))
        let a = emb("a", &[1.0, 2.0, 3.0]);
        let b = emb("b", &[4.0, 5.0, 6.0]);
        let r = asv_probability(&a, &b).unwrap();
        assert!((r - 0.7260417596775597).abs() < 1e-15);
    }

    #[test]
    fn fuse_scores_arithmetic_and_bounds() {
        assert_eq!(fuse_scores(0.8, 0.6).unwrap(), 0.7);
        assert_eq!(fuse_scores(1.0, 0.0).unwrap(), 0.5);
        assert_eq!(fuse_scores(0.37, 0.37).unwrap(), 0.37);
        assert!(fuse_scores(1.2, 0.5).is_err());
        assert!(fuse_scores(0.5, -0.1).is_err());
        assert!(fuse_scores(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn score_record_enforces_unit_interval() {
        let t = Trial::labeled("e", "t", TrialLabel::Target);
        assert!(ScoreRecord::new(t.clone(), 0.0).is_ok());
        assert!(ScoreRecord::new(t.clone(), 1.0).is_ok());
        assert!(ScoreRecord::new(t.clone(), -0.001).is_err());
        assert!(ScoreRecord::new(t, 1.001).is_err());
    }

    #[test]
    fn label_parsing_is_case_insensitive() {
        assert_eq!("TARGET".parse::<TrialLabel>().unwrap(), TrialLabel::Target);
        assert_eq!(
            "Nontarget".parse::<TrialLabel>().unwrap(),
            TrialLabel::Nontarget
        );
        assert_eq!("spoof".parse::<TrialLabel>().unwrap(), TrialLabel::Spoof);
        assert!("bonafide".parse::<TrialLabel>().is_err());
    }

    #[test]
    fn embedding_rejects_bad_input() {
        assert!(Embedding::<f64>::new("x", vec![]).is_err());
        assert!(Embedding::new("x", vec![1.0, f64::NAN]).is_err());
        assert!(Embedding::new("x", vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let a = Embedding::<f32>::new("a", vec![1.0, 2.0, 3.0]).unwrap();
        let b = Embedding::<f32>::new("b", vec![4.0, 5.0, 6.0]).unwrap();
        let p = asv_probability(&a, &b).unwrap();
        assert!((p - 0.726_041_8_f32).abs() < 1e-6);
    }
}
