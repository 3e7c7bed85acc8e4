//! Evaluation-time a-DCF: hard miss/false-alarm rates, the cost at a
//! threshold, the minimum over a threshold sweep, and per-class score
//! histograms.
//!
//! Threshold convention: a trial is accepted when `score >= tau`. The
//! sweep evaluates the midpoints between consecutive distinct scores
//! plus one point below the minimum and one above the maximum, which
//! covers every achievable (miss, fa) operating point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::scoring::{ScoreRecord, TrialLabel};

/// a-DCF costs and class priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel<R = crate::Scalar> {
    pub c_miss_tar: R,
    pub c_fa_non: R,
    pub c_fa_spf: R,
    pub pi_tar: R,
    pub pi_non: R,
    pub pi_spf: R,
}

impl<R: Real> Default for CostModel<R> {
    /// Desk-scale default operating point; a configuration surface, not
    /// a claim about any particular evaluation campaign.
    fn default() -> Self {
        Self {
            c_miss_tar: R::one(),
            c_fa_non: R::from_f64_lossy(10.0),
            c_fa_spf: R::from_f64_lossy(10.0),
            pi_tar: R::from_f64_lossy(0.9405),
            pi_non: R::from_f64_lossy(0.0095),
            pi_spf: R::from_f64_lossy(0.05),
        }
    }
}

impl<R: Real> CostModel<R> {
    pub fn new(c_miss_tar: R, c_fa_non: R, c_fa_spf: R, pi_tar: R, pi_non: R, pi_spf: R) -> Result<Self> {
        let cm = Self {
            c_miss_tar,
            c_fa_non,
            c_fa_spf,
            pi_tar,
            pi_non,
            pi_spf,
        };
        cm.validate()?;
        Ok(cm)
    }

    pub fn validate(&self) -> Result<()> {
        let one = R::one();
        let zero = R::zero();
        for (name, c) in [
            ("c_miss_tar", self.c_miss_tar),
            ("c_fa_non", self.c_fa_non),
            ("c_fa_spf", self.c_fa_spf),
        ] {
            if !c.is_finite() || c < zero {
                return Err(Error::InvalidConfig(format!("cost {name} must be finite and >= 0")));
            }
        }
        if self.c_miss_tar == zero && self.c_fa_non == zero && self.c_fa_spf == zero {
            return Err(Error::InvalidConfig("at least one cost must be > 0".into()));
        }
        for (name, p) in [
            ("pi_tar", self.pi_tar),
            ("pi_non", self.pi_non),
            ("pi_spf", self.pi_spf),
        ] {
            if !p.is_finite() || p <= zero || p >= one {
                return Err(Error::InvalidConfig(format!("prior {name} must lie in (0, 1)")));
            }
        }
        let sum = self.pi_tar + self.pi_non + self.pi_spf;
        if (sum - one).abs() > R::from_f64_lossy(1e-9) {
            return Err(Error::InvalidConfig(format!("priors must sum to 1, got {sum}")));
        }
        Ok(())
    }

    /// Weighted sum of the three detection rates per the a-DCF definition.
    pub fn weighted_cost(&self, rates: &DetectionRates<R>) -> R {
        self.c_miss_tar * self.pi_tar * rates.p_miss_tar
            + self.c_fa_non * self.pi_non * rates.p_fa_non
            + self.c_fa_spf * self.pi_spf * rates.p_fa_spf
    }

    /// Cost of the better of the two trivial systems (accept-all vs
    /// reject-all); the denominator of the normalized a-DCF.
    pub fn trivial_cost(&self) -> R {
        let reject_all = self.c_miss_tar * self.pi_tar;
        let accept_all = self.c_fa_non * self.pi_non + self.c_fa_spf * self.pi_spf;
        reject_all.min(accept_all)
    }
}

/// Miss/false-alarm rates at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionRates<R = crate::Scalar> {
    pub p_miss_tar: R,
    pub p_fa_non: R,
    pub p_fa_spf: R,
    pub threshold: R,
}

/// Per-class trial counts; a count of zero flags a class that was
/// absent from the input (its rate is reported as 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub target: usize,
    pub nontarget: usize,
    pub spoof: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.target + self.nontarget + self.spoof
    }

    pub fn missing(&self) -> Vec<TrialLabel> {
        let mut out = Vec::new();
        if self.target == 0 {
            out.push(TrialLabel::Target);
        }
        if self.nontarget == 0 {
            out.push(TrialLabel::Nontarget);
        }
        if self.spoof == 0 {
            out.push(TrialLabel::Spoof);
        }
        out
    }

    pub fn all_present(&self) -> bool {
        self.target > 0 && self.nontarget > 0 && self.spoof > 0
    }
}

/// Scores partitioned by class. All metric operations run off this view.
#[derive(Debug, Clone, Default)]
pub struct ClassScores<R = crate::Scalar> {
    pub target: Vec<R>,
    pub nontarget: Vec<R>,
    pub spoof: Vec<R>,
}

impl<R: Real> ClassScores<R> {
    /// Partitions labeled records; errors on empty input or any
    /// unlabeled record.
    pub fn from_records(records: &[ScoreRecord<R>]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyInput {
                context: "no score records to evaluate".into(),
            });
        }
        let mut out = Self::default();
        for rec in records {
            match rec.trial().require_label()? {
                TrialLabel::Target => out.target.push(rec.score()),
                TrialLabel::Nontarget => out.nontarget.push(rec.score()),
                TrialLabel::Spoof => out.spoof.push(rec.score()),
            }
        }
        Ok(out)
    }

    pub fn from_pairs(pairs: &[(R, TrialLabel)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput {
                context: "no (score, label) pairs to evaluate".into(),
            });
        }
        let mut out = Self::default();
        for &(score, label) in pairs {
            match label {
                TrialLabel::Target => out.target.push(score),
                TrialLabel::Nontarget => out.nontarget.push(score),
                TrialLabel::Spoof => out.spoof.push(score),
            }
        }
        Ok(out)
    }

    pub fn counts(&self) -> ClassCounts {
        ClassCounts {
            target: self.target.len(),
            nontarget: self.nontarget.len(),
            spoof: self.spoof.len(),
        }
    }

    /// Counting rates at `tau`; `score >= tau` counts as accept.
    pub fn rates_at(&self, tau: R) -> DetectionRates<R> {
        DetectionRates {
            p_miss_tar: fraction(&self.target, |s| s < tau),
            p_fa_non: fraction(&self.nontarget, |s| s >= tau),
            p_fa_spf: fraction(&self.spoof, |s| s >= tau),
            threshold: tau,
        }
    }
}

fn fraction<R: Real>(scores: &[R], pred: impl Fn(R) -> bool) -> R {
    if scores.is_empty() {
        return R::zero();
    }
    let hits = scores.iter().filter(|&&s| pred(s)).count();
    R::from_usize(hits).unwrap() / R::from_usize(scores.len()).unwrap()
}

/// Hard (counting) detection rates over labeled records at threshold `tau`.
pub fn hard_rates<R: Real>(records: &[ScoreRecord<R>], tau: R) -> Result<DetectionRates<R>> {
    Ok(ClassScores::from_records(records)?.rates_at(tau))
}

/// a-DCF at a fixed threshold. With `normalize`, the weighted cost is
/// divided by the better trivial system's cost so that 1.0 is the
/// no-information baseline.
pub fn adcf_at<R: Real>(
    scores: &ClassScores<R>,
    tau: R,
    cost: &CostModel<R>,
    normalize: bool,
) -> Result<R> {
    let raw = cost.weighted_cost(&scores.rates_at(tau));
    if normalize {
        let denom = cost.trivial_cost();
        if denom == R::zero() {
            return Err(Error::DegenerateCostModel);
        }
        Ok(raw / denom)
    } else {
        Ok(raw)
    }
}

/// Result of the minimum a-DCF threshold sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinAdcf<R = crate::Scalar> {
    pub value: R,
    pub threshold: R,
}

/// Candidate thresholds: midpoints between consecutive distinct sorted
/// scores, plus one candidate below all scores and one above.
pub fn candidate_thresholds<R: Real>(scores: &ClassScores<R>) -> Vec<R> {
    let mut all: Vec<R> = scores
        .target
        .iter()
        .chain(&scores.nontarget)
        .chain(&scores.spoof)
        .copied()
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
    all.dedup();

    let pad = R::half();
    let mut cands = Vec::with_capacity(all.len() + 1);
    cands.push(all[0] - pad);
    for w in all.windows(2) {
        cands.push((w[0] + w[1]) / R::two());
    }
    cands.push(all[all.len() - 1] + pad);
    cands
}

/// Minimum a-DCF over the candidate threshold set; ties broken toward
/// the smallest threshold.
pub fn min_adcf<R: Real>(
    records: &[ScoreRecord<R>],
    cost: &CostModel<R>,
    normalize: bool,
) -> Result<MinAdcf<R>> {
    min_adcf_partitioned(&ClassScores::from_records(records)?, cost, normalize)
}

pub fn min_adcf_partitioned<R: Real>(
    scores: &ClassScores<R>,
    cost: &CostModel<R>,
    normalize: bool,
) -> Result<MinAdcf<R>> {
    if scores.counts().total() == 0 {
        return Err(Error::EmptyInput {
            context: "no scores in threshold sweep".into(),
        });
    }
    let mut best: Option<MinAdcf<R>> = None;
    for tau in candidate_thresholds(scores) {
        let value = adcf_at(scores, tau, cost, normalize)?;
        match &best {
            Some(b) if value >= b.value => {}
            _ => best = Some(MinAdcf { value, threshold: tau }),
        }
    }
    Ok(best.expect("candidate set is nonempty"))
}

/// Per-class histogram over `bins` uniform bins spanning `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreHistogram {
    bins: usize,
    pub target: Vec<u64>,
    pub nontarget: Vec<u64>,
    pub spoof: Vec<u64>,
}

impl ScoreHistogram {
    pub fn bins(&self) -> usize {
        self.bins
    }

    /// Comma-separated table, one row per bin, header
    /// `bin_low,bin_high,target,nontarget,spoof`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,target,nontarget,spoof\n");
        let n = self.bins as f64;
        for i in 0..self.bins {
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            out.push_str(&format!(
                "{lo},{hi},{},{},{}\n",
                self.target[i], self.nontarget[i], self.spoof[i]
            ));
        }
        out
    }
}

/// Counts labeled scores into uniform bins over `[0, 1]`; a score of
/// exactly 1.0 lands in the last bin.
pub fn score_histogram<R: Real>(records: &[ScoreRecord<R>], bins: usize) -> Result<ScoreHistogram> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!("bins must be >= 2, got {bins}")));
    }
    let mut hist = ScoreHistogram {
        bins,
        target: vec![0; bins],
        nontarget: vec![0; bins],
        spoof: vec![0; bins],
    };
    for rec in records {
        let label = rec.trial().require_label()?;
        let pos = rec.score().to_f64().expect("score converts to f64") * bins as f64;
        let idx = (pos.floor() as usize).min(bins - 1);
        match label {
            TrialLabel::Target => hist.target[idx] += 1,
            TrialLabel::Nontarget => hist.nontarget[idx] += 1,
            TrialLabel::Spoof => hist.spoof[idx] += 1,
        }
    }
    Ok(hist)
}
