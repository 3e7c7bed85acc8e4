//! Text interchange formats (embeddings, trials, scores) and a seeded
//! synthetic-embedding generator so the whole pipeline runs at desk
//! scale without external front-ends.
//!
//! All files are UTF-8, space-separated, LF-terminated. Writers emit a
//! `#format:v1` header; readers accept it (and any `#`-prefixed line)
//! silently. Floats are written with Rust's shortest round-trip
//! formatting, so write -> read -> write is byte-stable.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::scoring::{Embedding, ScoreRecord, Trial, TrialLabel};

pub const FORMAT_HEADER: &str = "#format:v1";

/// Which front-end a store's embeddings came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingRole {
    Asv,
    Cm,
}

impl EmbeddingRole {
    pub fn as_str(self) -> &'static str {
        match self {
            EmbeddingRole::Asv => "asv",
            EmbeddingRole::Cm => "cm",
        }
    }
}

/// Uniform-dimension embedding collection with unique utterance ids,
/// preserving insertion order for deterministic serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore<R = crate::Scalar> {
    role: EmbeddingRole,
    dim: usize,
    map: IndexMap<String, Embedding<R>>,
}

impl<R: Real> EmbeddingStore<R> {
    pub fn new(role: EmbeddingRole) -> Self {
        Self {
            role,
            dim: 0,
            map: IndexMap::new(),
        }
    }

    pub fn role(&self) -> EmbeddingRole {
        self.role
    }

    /// Dimension shared by all embeddings; 0 while the store is empty.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn insert(&mut self, emb: Embedding<R>) -> Result<()> {
        if self.map.is_empty() {
            self.dim = emb.dim();
        } else if emb.dim() != self.dim {
            return Err(Error::dim(
                self.dim,
                emb.dim(),
                format!("embedding `{}` in {} store", emb.utt_id(), self.role.as_str()),
            ));
        }
        if self.map.contains_key(emb.utt_id()) {
            return Err(Error::InvalidConfig(format!(
                "duplicate utterance id `{}` in {} store",
                emb.utt_id(),
                self.role.as_str()
            )));
        }
        self.map.insert(emb.utt_id().to_string(), emb);
        Ok(())
    }

    pub fn get(&self, utt_id: &str) -> Option<&Embedding<R>> {
        self.map.get(utt_id)
    }

    /// Lookup that reports the missing id and store role on failure.
    pub fn require(&self, utt_id: &str) -> Result<&Embedding<R>> {
        self.get(utt_id).ok_or_else(|| Error::MissingEmbedding {
            utt_id: utt_id.to_string(),
            role: self.role.as_str().to_string(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Embedding<R>> {
        self.map.values()
    }
}

/// The ASV and CM stores a model scores trials against.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStores<R = crate::Scalar> {
    pub asv: EmbeddingStore<R>,
    pub cm: EmbeddingStore<R>,
}

impl<R: Real> EmbeddingStores<R> {
    pub fn new(asv: EmbeddingStore<R>, cm: EmbeddingStore<R>) -> Self {
        Self { asv, cm }
    }
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(&path_str(path), e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.to_string()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(&path_str(path), e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Error::io(&path_str(path), e))
}

/// Reads an embedding file (`utt_id dim v1 ... vdim` per line).
pub fn read_embeddings<R: Real>(path: &Path, role: EmbeddingRole) -> Result<EmbeddingStore<R>> {
    let p = path_str(path);
    let mut store = EmbeddingStore::new(role);
    for (lineno, line) in read_lines(path)? {
        let mut tokens = line.split_ascii_whitespace();
        let utt_id = tokens
            .next()
            .ok_or_else(|| Error::parse(&p, lineno, "missing utterance id"))?;
        let dim: usize = tokens
            .next()
            .ok_or_else(|| Error::parse(&p, lineno, "missing dimension field"))?
            .parse()
            .map_err(|_| Error::parse(&p, lineno, "dimension is not an integer"))?;
        let mut values = Vec::with_capacity(dim);
        for tok in tokens {
            let v = tok
                .parse::<R>()
                .map_err(|_| Error::parse(&p, lineno, format!("bad float `{tok}`")))?;
            values.push(v);
        }
        if values.len() != dim {
            return Err(Error::parse(
                &p,
                lineno,
                format!("declared dim {dim} but found {} values", values.len()),
            ));
        }
        let emb = Embedding::new(utt_id, values)
            .map_err(|e| Error::parse(&p, lineno, e.to_string()))?;
        store
            .insert(emb)
            .map_err(|e| Error::parse(&p, lineno, e.to_string()))?;
    }
    if store.is_empty() {
        return Err(Error::EmptyInput {
            context: format!("embedding file {p} contains no embeddings"),
        });
    }
    Ok(store)
}

pub fn write_embeddings<R: Real>(store: &EmbeddingStore<R>, path: &Path) -> Result<()> {
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    for emb in store.iter() {
        out.push_str(emb.utt_id());
        out.push(' ');
        out.push_str(&emb.dim().to_string());
        for v in emb.values() {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Reads a trial list: `enroll_id test_id [label]` per line.
pub fn read_trials(path: &Path) -> Result<Vec<Trial>> {
    let p = path_str(path);
    let mut trials = Vec::new();
    for (lineno, line) in read_lines(path)? {
        let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
        match tokens.as_slice() {
            [enroll, test] => trials.push(Trial::new(*enroll, *test, None)),
            [enroll, test, label] => {
                let label: TrialLabel = label
                    .parse()
                    .map_err(|e: String| Error::parse(&p, lineno, e))?;
                trials.push(Trial::labeled(*enroll, *test, label));
            }
            _ => {
                return Err(Error::parse(
                    &p,
                    lineno,
                    format!("expected 2 or 3 fields, found {}", tokens.len()),
                ))
            }
        }
    }
    if trials.is_empty() {
        return Err(Error::EmptyInput {
            context: format!("trial file {p} contains no trials"),
        });
    }
    Ok(trials)
}

pub fn write_trials(trials: &[Trial], path: &Path) -> Result<()> {
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    for t in trials {
        out.push_str(&t.enroll_id);
        out.push(' ');
        out.push_str(&t.test_id);
        if let Some(label) = t.label {
            out.push(' ');
            out.push_str(label.as_str());
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes score records (`enroll_id test_id score`, score at 9 decimal
/// places), preserving record order. Labels travel in trial files, not
/// here.
pub fn write_scores<R: Real>(records: &[ScoreRecord<R>], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput {
            context: "refusing to write an empty score file".into(),
        });
    }
    let mut out = String::from(FORMAT_HEADER);
    out.push('\n');
    for rec in records {
        let score = rec.score().to_f64().expect("score converts to f64");
        out.push_str(&format!(
            "{} {} {score:.9}\n",
            rec.trial().enroll_id,
            rec.trial().test_id
        ));
    }
    write_file(path, &out)
}

/// Reads a score file; records come back unlabeled.
pub fn read_scores<R: Real>(path: &Path) -> Result<Vec<ScoreRecord<R>>> {
    let p = path_str(path);
    let mut records = Vec::new();
    for (lineno, line) in read_lines(path)? {
        let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
        let [enroll, test, score] = tokens.as_slice() else {
            return Err(Error::parse(
                &p,
                lineno,
                format!("expected 3 fields, found {}", tokens.len()),
            ));
        };
        let score = score
            .parse::<R>()
            .map_err(|_| Error::parse(&p, lineno, format!("bad score `{score}`")))?;
        let rec = ScoreRecord::new(Trial::new(*enroll, *test, None), score)
            .map_err(|e| Error::parse(&p, lineno, e.to_string()))?;
        records.push(rec);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput {
            context: format!("score file {p} contains no records"),
        });
    }
    Ok(records)
}

/// Attaches labels from a trial list to score records by (enroll, test)
/// key; errors when a record has no matching trial.
pub fn label_records<R: Real>(
    records: &[ScoreRecord<R>],
    trials: &[Trial],
) -> Result<Vec<ScoreRecord<R>>> {
    use std::collections::HashMap;
    let mut by_key: HashMap<(&str, &str), Option<TrialLabel>> = HashMap::new();
    for t in trials {
        by_key.insert((t.enroll_id.as_str(), t.test_id.as_str()), t.label);
    }
    records
        .iter()
        .map(|rec| {
            let key = (
                rec.trial().enroll_id.as_str(),
                rec.trial().test_id.as_str(),
            );
            let label = by_key.get(&key).copied().ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "score for trial {} {} has no entry in the trial list",
                    key.0, key.1
                ))
            })?;
            ScoreRecord::new(
                Trial::new(rec.trial().enroll_id.clone(), rec.trial().test_id.clone(), label),
                rec.score(),
            )
        })
        .collect()
}

/// Knobs of the synthetic three-class generator. `spoof_asv_fidelity`
/// moves spoof ASV embeddings toward the attacked speaker's centroid;
/// `cm_separation` spreads the bonafide and spoof CM clusters apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_speakers: usize,
    pub n_enroll_per_spk: usize,
    pub n_bonafide_tests_per_spk: usize,
    pub n_spoof_tests_per_spk: usize,
    pub asv_dim: usize,
    pub cm_dim: usize,
    pub speaker_spread: f64,
    pub spoof_asv_fidelity: f64,
    pub cm_separation: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_speakers: 50,
            n_enroll_per_spk: 1,
            n_bonafide_tests_per_spk: 10,
            n_spoof_tests_per_spk: 10,
            asv_dim: 64,
            cm_dim: 32,
            speaker_spread: 0.1,
            spoof_asv_fidelity: 0.5,
            cm_separation: 4.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_speakers < 2 {
            return Err(Error::InvalidConfig(
                "need at least 2 speakers to build nontarget trials".into(),
            ));
        }
        for (name, n) in [
            ("n_enroll_per_spk", self.n_enroll_per_spk),
            ("n_bonafide_tests_per_spk", self.n_bonafide_tests_per_spk),
            ("n_spoof_tests_per_spk", self.n_spoof_tests_per_spk),
        ] {
            if n < 1 {
                return Err(Error::InvalidConfig(format!("{name} must be >= 1")));
            }
        }
        for (name, d) in [("asv_dim", self.asv_dim), ("cm_dim", self.cm_dim)] {
            if d < 2 {
                return Err(Error::InvalidConfig(format!("{name} must be >= 2")));
            }
        }
        if !(self.speaker_spread > 0.0) {
            return Err(Error::InvalidConfig("speaker_spread must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.spoof_asv_fidelity) {
            return Err(Error::InvalidConfig(
                "spoof_asv_fidelity must lie in [0, 1]".into(),
            ));
        }
        if self.cm_separation < 0.0 {
            return Err(Error::InvalidConfig("cm_separation must be >= 0".into()));
        }
        Ok(())
    }
}

/// Everything the generator produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthData<R = crate::Scalar> {
    pub stores: EmbeddingStores<R>,
    pub train_trials: Vec<Trial>,
    pub dev_trials: Vec<Trial>,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniforms per draw keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1e-12 {
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

fn to_scalar<R: Real>(v: Vec<f64>) -> Vec<R> {
    v.into_iter().map(R::from_f64_lossy).collect()
}

struct SpeakerData {
    id: String,
    enroll_ids: Vec<String>,
    /// (test utterance id, bonafide flag)
    test_utts: Vec<(String, bool)>,
}

/// Generates ASV/CM stores plus speaker-disjoint train and dev trial
/// lists (80/20 by speaker). Each test utterance yields a trial against
/// its own speaker (target or spoof) and one against a different
/// speaker in the same split (nontarget when bonafide, spoof — the CM
/// ground truth — when spoofed).
pub fn generate_synthetic<R: Real>(cfg: &SynthConfig) -> Result<SynthData<R>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut asv = EmbeddingStore::new(EmbeddingRole::Asv);
    let mut cm = EmbeddingStore::new(EmbeddingRole::Cm);
    let mut speakers = Vec::with_capacity(cfg.n_speakers);

    let half_sep = cfg.cm_separation / 2.0;
    for s in 0..cfg.n_speakers {
        let spk = format!("spk{:04}", s + 1);
        let centroid = random_unit(&mut rng, cfg.asv_dim);

        let jittered = |rng: &mut ChaCha8Rng| {
            let v: Vec<f64> = centroid
                .iter()
                .map(|&c| c + cfg.speaker_spread * standard_normal(rng))
                .collect();
            renormalize(v)
        };

        let mut enroll_ids = Vec::with_capacity(cfg.n_enroll_per_spk);
        for j in 0..cfg.n_enroll_per_spk {
            let id = format!("{spk}_enr{:02}", j + 1);
            asv.insert(Embedding::new(&id, to_scalar::<R>(jittered(&mut rng)))?)?;
            enroll_ids.push(id);
        }

        let mut test_utts = Vec::new();
        for j in 0..cfg.n_bonafide_tests_per_spk {
            let id = format!("{spk}_bona{:03}", j + 1);
            asv.insert(Embedding::new(&id, to_scalar::<R>(jittered(&mut rng)))?)?;
            let mut cm_vec: Vec<f64> = (0..cfg.cm_dim).map(|_| standard_normal(&mut rng)).collect();
            cm_vec[0] += half_sep;
            cm.insert(Embedding::new(&id, to_scalar::<R>(cm_vec))?)?;
            test_utts.push((id, true));
        }
        for j in 0..cfg.n_spoof_tests_per_spk {
            let id = format!("{spk}_spoof{:03}", j + 1);
            let direction = random_unit(&mut rng, cfg.asv_dim);
            let blend: Vec<f64> = centroid
                .iter()
                .zip(&direction)
                .map(|(&c, &d)| cfg.spoof_asv_fidelity * c + (1.0 - cfg.spoof_asv_fidelity) * d)
                .collect();
            asv.insert(Embedding::new(&id, to_scalar::<R>(renormalize(blend)))?)?;
            let mut cm_vec: Vec<f64> = (0..cfg.cm_dim).map(|_| standard_normal(&mut rng)).collect();
            cm_vec[0] -= half_sep;
            cm.insert(Embedding::new(&id, to_scalar::<R>(cm_vec))?)?;
            test_utts.push((id, false));
        }
        speakers.push(SpeakerData {
            id: spk,
            enroll_ids,
            test_utts,
        });
    }

    let n_train = ((cfg.n_speakers as f64) * 0.8).floor() as usize;
    let n_train = n_train.clamp(1, cfg.n_speakers - 1);
    let (train_spk, dev_spk) = speakers.split_at(n_train);
    for (name, split) in [("train", train_spk), ("dev", dev_spk)] {
        if split.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "{name} split has {} speaker(s); nontarget trials need >= 2 per split \
                 (increase n_speakers)",
                split.len()
            )));
        }
    }

    let mut make_trials = |split: &[SpeakerData]| -> Vec<Trial> {
        let mut trials = Vec::new();
        for (si, spk) in split.iter().enumerate() {
            for (ti, (test_id, bonafide)) in spk.test_utts.iter().enumerate() {
                let own_enroll = &spk.enroll_ids[ti % spk.enroll_ids.len()];
                let own_label = if *bonafide {
                    TrialLabel::Target
                } else {
                    TrialLabel::Spoof
                };
                trials.push(Trial::labeled(own_enroll.clone(), test_id.clone(), own_label));

                let mut other = rng.gen_range(0..split.len() - 1);
                if other >= si {
                    other += 1;
                }
                let other_spk = &split[other];
                let other_enroll =
                    &other_spk.enroll_ids[rng.gen_range(0..other_spk.enroll_ids.len())];
                // A spoofed utterance stays a spoof trial whatever the
                // enrollment speaker: the CM ground truth dominates.
                let cross_label = if *bonafide {
                    TrialLabel::Nontarget
                } else {
                    TrialLabel::Spoof
                };
                trials.push(Trial::labeled(
                    other_enroll.clone(),
                    test_id.clone(),
                    cross_label,
                ));
            }
        }
        trials
    };

    let train_trials = make_trials(train_spk);
    let dev_trials = make_trials(dev_spk);

    Ok(SynthData {
        stores: EmbeddingStores::new(asv, cm),
        train_trials,
        dev_trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn embedding_file_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.emb");
        write_file(
            &path,
            "u1 3 1.0 0.0 0.0\nu2 3 0.0 1.0 0.0\n",
        )
        .unwrap();
        let store: EmbeddingStore<f64> = read_embeddings(&path, EmbeddingRole::Asv).unwrap();
        assert_eq!(store.len(), 2);
        assert_eq!(store.dim(), 3);
        assert_eq!(store.get("u1").unwrap().values(), &[1.0, 0.0, 0.0]);

        let out = dir.path().join("b.emb");
        write_embeddings(&store, &out).unwrap();
        let reread: EmbeddingStore<f64> = read_embeddings(&out, EmbeddingRole::Asv).unwrap();
        assert_eq!(store, reread);

        // a second write is byte-identical
        let out2 = dir.path().join("c.emb");
        write_embeddings(&reread, &out2).unwrap();
        assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
    }

    #[test]
    fn embedding_reader_rejects_malformed_input() {
        let dir = tempdir().unwrap();
        let case = |name: &str, contents: &str| {
            let path = dir.path().join(name);
            write_file(&path, contents).unwrap();
            read_embeddings::<f64>(&path, EmbeddingRole::Asv)
        };
        assert!(matches!(
            case("empty.emb", "#format:v1\n"),
            Err(Error::EmptyInput { .. })
        ));
        let err = case("ragged.emb", "u1 3 1.0 0.0\n").unwrap_err();
        assert!(err.to_string().contains("ragged.emb:1"), "{err}");
        let err = case("dup.emb", "u1 2 1.0 0.0\nu1 2 0.0 1.0\n").unwrap_err();
        assert!(err.to_string().contains("u1"), "{err}");
        assert!(case("nan.emb", "u1 2 NaN 0.0\n").is_err());
        let err = case("mixdim.emb", "u1 2 1.0 0.0\nu2 3 1.0 0.0 0.0\n").unwrap_err();
        assert!(err.to_string().contains(":2"), "{err}");
    }

    #[test]
    fn trial_file_round_trip_and_errors() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.trl");
        write_file(&path, "spk1 utt9 target\nspk1 utt8 NONTARGET\nspk2 utt7\n").unwrap();
        let trials = read_trials(&path).unwrap();
        assert_eq!(trials[0], Trial::labeled("spk1", "utt9", TrialLabel::Target));
        assert_eq!(trials[1].label, Some(TrialLabel::Nontarget));
        assert_eq!(trials[2].label, None);

        let out = dir.path().join("t2.trl");
        write_trials(&trials, &out).unwrap();
        assert_eq!(read_trials(&out).unwrap(), trials);

        let bad = dir.path().join("bad.trl");
        write_file(&bad, "spk1 utt9 bonafide\n").unwrap();
        let err = read_trials(&bad).unwrap_err();
        assert!(err.to_string().contains("bad.trl:1"), "{err}");
        assert!(err.to_string().contains("bonafide"), "{err}");
    }

    #[test]
    fn score_file_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.score");
        let records = vec![
            ScoreRecord::new(Trial::new("a", "b", None), 0.5).unwrap(),
            ScoreRecord::new(Trial::new("c", "d", None), 0.123456789).unwrap(),
        ];
        write_scores(&records, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("a b 0.500000000"), "{text}");
        let reread: Vec<ScoreRecord<f64>> = read_scores(&path).unwrap();
        assert_eq!(reread.len(), 2);
        assert!((reread[1].score() - 0.123456789).abs() < 1e-9);

        assert!(write_scores::<f64>(&[], &path).is_err());
    }

    #[test]
    fn label_records_joins_on_trial_key() {
        let records = vec![ScoreRecord::new(Trial::new("a", "b", None), 0.5).unwrap()];
        let trials = vec![Trial::labeled("a", "b", TrialLabel::Spoof)];
        let labeled = label_records(&records, &trials).unwrap();
        assert_eq!(labeled[0].label(), Some(TrialLabel::Spoof));

        let other = vec![Trial::labeled("x", "y", TrialLabel::Target)];
        assert!(label_records(&records, &other).is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = SynthConfig {
            n_speakers: 8,
            ..SynthConfig::default()
        };
        let a: SynthData<f64> = generate_synthetic(&cfg).unwrap();
        let b: SynthData<f64> = generate_synthetic(&cfg).unwrap();
        assert_eq!(a, b);

        let cfg2 = SynthConfig { seed: 1, ..cfg };
        let c: SynthData<f64> = generate_synthetic(&cfg2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_respects_counts_and_split() {
        let cfg = SynthConfig {
            n_speakers: 10,
            n_enroll_per_spk: 2,
            n_bonafide_tests_per_spk: 3,
            n_spoof_tests_per_spk: 2,
            ..SynthConfig::default()
        };
        let data: SynthData<f64> = generate_synthetic(&cfg).unwrap();
        // 8 train speakers, 2 dev speakers; 2 trials per test utterance
        assert_eq!(data.train_trials.len(), 8 * (3 + 2) * 2);
        assert_eq!(data.dev_trials.len(), 2 * (3 + 2) * 2);
        assert_eq!(data.stores.asv.len(), 10 * (2 + 3 + 2));
        assert_eq!(data.stores.cm.len(), 10 * (3 + 2));

        let speaker_of = |utt: &str| utt.split('_').next().unwrap().to_string();
        let train_spk: std::collections::HashSet<String> = data
            .train_trials
            .iter()
            .flat_map(|t| [speaker_of(&t.enroll_id), speaker_of(&t.test_id)])
            .collect();
        let dev_spk: std::collections::HashSet<String> = data
            .dev_trials
            .iter()
            .flat_map(|t| [speaker_of(&t.enroll_id), speaker_of(&t.test_id)])
            .collect();
        assert!(train_spk.is_disjoint(&dev_spk));

        // labels are consistent with the id scheme
        for t in data.train_trials.iter().chain(&data.dev_trials) {
            let same_speaker = speaker_of(&t.enroll_id) == speaker_of(&t.test_id);
            let bona = t.test_id.contains("_bona");
            match t.label.unwrap() {
                TrialLabel::Target => assert!(same_speaker && bona),
                TrialLabel::Nontarget => assert!(!same_speaker && bona),
                TrialLabel::Spoof => assert!(!bona),
            }
        }
    }

    #[test]
    fn generated_asv_embeddings_are_unit_norm() {
        let cfg = SynthConfig {
            n_speakers: 6,
            ..SynthConfig::default()
        };
        let data: SynthData<f64> = generate_synthetic(&cfg).unwrap();
        for emb in data.stores.asv.iter() {
            assert!((emb.norm() - 1.0).abs() < 1e-9, "{}", emb.utt_id());
        }
    }

    #[test]
    fn generator_rejects_degenerate_configs() {
        let cfg = SynthConfig {
            n_speakers: 1,
            ..SynthConfig::default()
        };
        assert!(generate_synthetic::<f64>(&cfg).is_err());

        let cfg = SynthConfig {
            n_speakers: 3, // dev split gets a single speaker
            ..SynthConfig::default()
        };
        assert!(generate_synthetic::<f64>(&cfg).is_err());

        let cfg = SynthConfig {
            spoof_asv_fidelity: 1.5,
            ..SynthConfig::default()
        };
        assert!(generate_synthetic::<f64>(&cfg).is_err());
    }
}
