//! Evaluation of review logs and rankings against a gold standard.
//!
//! Everything here depends only on a ranked list of document ids and the
//! gold-standard judgments; the training standard never enters.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::qrels::{Qrels, TopicQrels};

fn total_relevant(gold: &TopicQrels, topic: &str) -> Result<usize> {
    match gold.num_relevant() {
        0 => Err(Error::UndefinedTopic(topic.to_string())),
        r => Ok(r),
    }
}

/// `cum[k]` = gold-relevant documents among the first `k` entries.
pub fn cumulative_relevant<S: AsRef<str>>(log: &[S], gold: &TopicQrels) -> Vec<usize> {
    let mut cum = Vec::with_capacity(log.len() + 1);
    cum.push(0);
    let mut r = 0;
    for d in log {
        if gold.is_relevant(d.as_ref()) {
            r += 1;
        }
        cum.push(r);
    }
    cum
}

/// `R_k / R_inf`. Efforts past the end of the log keep the terminal recall.
pub fn recall_at<S: AsRef<str>>(log: &[S], gold: &TopicQrels, k: usize) -> Result<f64> {
    let r_inf = total_relevant(gold, "")?;
    let k = k.min(log.len());
    let r_k = log[..k].iter().filter(|d| gold.is_relevant(d.as_ref())).count();
    Ok(r_k as f64 / r_inf as f64)
}

/// `R_k / min(k, R_inf)`: precision until `k` reaches `R_inf`, recall after.
pub fn relative_precision<S: AsRef<str>>(log: &[S], gold: &TopicQrels, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("relative precision needs k >= 1".into()));
    }
    let r_inf = total_relevant(gold, "")?;
    let r_k = log[..k.min(log.len())]
        .iter()
        .filter(|d| gold.is_relevant(d.as_ref()))
        .count();
    Ok(r_k as f64 / k.min(r_inf) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecallEffort {
    /// Smallest number of reviewed documents reaching the target.
    Achieved(usize),
    NotAchieved { terminal_recall: f64 },
}

impl RecallEffort {
    pub fn effort(&self) -> Option<usize> {
        match self {
            RecallEffort::Achieved(k) => Some(*k),
            RecallEffort::NotAchieved { .. } => None,
        }
    }
}

pub const DEFAULT_RECALL_TARGET: f64 = 0.75;

pub fn recall_effort<S: AsRef<str>>(log: &[S], gold: &TopicQrels, target: f64) -> Result<RecallEffort> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::InvalidParameter(format!("recall target {target} outside (0, 1]")));
    }
    let r_inf = total_relevant(gold, "")?;
    let cum = cumulative_relevant(log, gold);
    // exact integer comparison: R_k / R_inf >= target  <=>  R_k >= ceil(target * R_inf)
    let needed = needed_relevant(target, r_inf);
    match cum.iter().position(|&r| r >= needed) {
        Some(k) => Ok(RecallEffort::Achieved(k)),
        None => Ok(RecallEffort::NotAchieved {
            terminal_recall: *cum.last().unwrap() as f64 / r_inf as f64,
        }),
    }
}

/// Smallest `r` with `r / r_inf >= target` in floating point.
fn needed_relevant(target: f64, r_inf: usize) -> usize {
    let mut r = ((target * r_inf as f64).floor() as usize).saturating_sub(1);
    while (r as f64 / r_inf as f64) < target {
        r += 1;
    }
    r
}

/// F1, which is undefined when there are no positives on either side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum F1 {
    Value(f64),
    Indeterminate,
}

pub fn f1(tp: usize, fp: usize, fn_: usize) -> F1 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        F1::Indeterminate
    } else {
        F1::Value(2.0 * tp as f64 / denom as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroF1 {
    /// Mean over determinate topics; `None` if there are none.
    pub mean: Option<f64>,
    pub included: usize,
    pub excluded: usize,
}

pub fn macro_f1(values: &[F1]) -> MacroF1 {
    let vals: Vec<f64> = values
        .iter()
        .filter_map(|v| match v {
            F1::Value(x) => Some(*x),
            F1::Indeterminate => None,
        })
        .collect();
    MacroF1 {
        mean: (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64),
        included: vals.len(),
        excluded: values.len() - vals.len(),
    }
}

/// Mean of precision at the rank of each retrieved relevant document, over
/// `R_inf`. Relevant documents missing from the ranking contribute zero.
pub fn average_precision<S: AsRef<str>>(ranked: &[S], gold: &TopicQrels) -> Result<f64> {
    let r_inf = total_relevant(gold, "")?;
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, d) in ranked.iter().enumerate() {
        if gold.is_relevant(d.as_ref()) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / r_inf as f64)
}

/// MAP of one system's per-topic rankings over `topics`. A topic the system
/// did not rank scores zero.
pub fn mean_average_precision<S: AsRef<str>>(
    rankings: &BTreeMap<String, Vec<S>>,
    qrels: &Qrels,
    topics: &[&str],
) -> Result<f64> {
    if topics.is_empty() {
        return Err(Error::InvalidParameter("MAP over zero topics".into()));
    }
    let mut sum = 0.0;
    for &t in topics {
        let gold = qrels.topic(t);
        if gold.num_relevant() == 0 {
            return Err(Error::UndefinedTopic(t.to_string()));
        }
        sum += match rankings.get(t) {
            Some(r) => average_precision(r, gold)?,
            None => 0.0,
        };
    }
    Ok(sum / topics.len() as f64)
}

/// Kendall's tau between two tie-free rankings of the same items:
/// `(concordant - discordant) / (n (n - 1) / 2)`.
///
/// Discordant pairs are counted as inversions with a merge sort.
pub fn kendall_tau<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ItemSetMismatch);
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidParameter("Kendall tau needs at least two items".into()));
    }
    let mut pos_b: HashMap<&T, usize> = HashMap::with_capacity(n);
    for (i, item) in b.iter().enumerate() {
        if pos_b.insert(item, i).is_some() {
            return Err(Error::ItemSetMismatch);
        }
    }
    let mut seq = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for item in a {
        let p = *pos_b.get(item).ok_or(Error::ItemSetMismatch)?;
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::ItemSetMismatch);
        }
        seq.push(p);
    }
    let discordant = count_inversions(&mut seq);
    let pairs = (n as u128 * (n as u128 - 1) / 2) as f64;
    Ok((pairs - 2.0 * discordant as f64) / pairs)
}

fn count_inversions(seq: &mut [usize]) -> u64 {
    let n = seq.len();
    let mut buf = vec![0usize; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if seq[i] <= seq[j] {
                    buf[k] = seq[i];
                    i += 1;
                } else {
                    buf[k] = seq[j];
                    inversions += (mid - i) as u64;
                    j += 1;
                }
                k += 1;
            }
            buf[k..k + (mid - i)].copy_from_slice(&seq[i..mid]);
            k += mid - i;
            buf[k..k + (hi - j)].copy_from_slice(&seq[j..hi]);
            lo = hi;
        }
        seq.copy_from_slice(&buf);
        width *= 2;
    }
    inversions
}

/// Recall as a function of effort for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct GainCurve {
    /// `(effort, recall)` for effort `0..=|log|`.
    pub points: Vec<(usize, f64)>,
    pub total_relevant: usize,
    /// `R_inf / N` when the collection size is known.
    pub prevalence: Option<f64>,
}

impl GainCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("effort,recall\n");
        for (e, r) in &self.points {
            out.push_str(&format!("{e},{}\n", crate::numfmt::sig9(*r)));
        }
        out
    }
}

pub fn gain_curve<S: AsRef<str>>(log: &[S], gold: &TopicQrels, collection_size: Option<usize>) -> Result<GainCurve> {
    let r_inf = total_relevant(gold, "")?;
    let cum = cumulative_relevant(log, gold);
    Ok(GainCurve {
        points: cum
            .iter()
            .enumerate()
            .map(|(k, &r)| (k, r as f64 / r_inf as f64))
            .collect(),
        total_relevant: r_inf,
        prevalence: collection_size.filter(|&n| n > 0).map(|n| r_inf as f64 / n as f64),
    })
}

/// `(recall_at(baseline, k), recall_at(subject, k))` for each grid effort.
pub fn differential_points<S: AsRef<str>, U: AsRef<str>>(
    baseline: &[S],
    subject: &[U],
    gold: &TopicQrels,
    grid: &[usize],
) -> Result<Vec<(f64, f64)>> {
    let r_inf = total_relevant(gold, "")? as f64;
    let cb = cumulative_relevant(baseline, gold);
    let cs = cumulative_relevant(subject, gold);
    Ok(grid
        .iter()
        .map(|&k| {
            (
                cb[k.min(baseline.len())] as f64 / r_inf,
                cs[k.min(subject.len())] as f64 / r_inf,
            )
        })
        .collect())
}

/// Every multiple of `max(1, n / 1000)` up to `n`, plus the efforts at which
/// either log first reaches each recall decile.
pub fn default_effort_grid<S: AsRef<str>, U: AsRef<str>>(
    baseline: &[S],
    subject: &[U],
    gold: &TopicQrels,
    n: usize,
) -> Result<Vec<usize>> {
    let step = (n / 1000).max(1);
    let mut grid: Vec<usize> = (1..=n / step).map(|i| i * step).collect();
    for d in 1..=10 {
        let target = d as f64 / 10.0;
        for effort in [recall_effort(baseline, gold, target)?, recall_effort(subject, gold, target)?] {
            if let RecallEffort::Achieved(k) = effort {
                grid.push(k);
            }
        }
    }
    grid.sort_unstable();
    grid.dedup();
    grid.retain(|&k| k >= 1);
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignOutcome {
    Win,
    Loss,
    Tie,
}

/// Compares the effort each log needs to reach `target`: the subject wins
/// with strictly less effort. A log that never reaches the target needs
/// unbounded effort.
pub fn sign_outcome<S: AsRef<str>, U: AsRef<str>>(
    baseline: &[S],
    subject: &[U],
    gold: &TopicQrels,
    target: f64,
) -> Result<(RecallEffort, RecallEffort, SignOutcome)> {
    let b = recall_effort(baseline, gold, target)?;
    let s = recall_effort(subject, gold, target)?;
    let key = |e: &RecallEffort| e.effort().unwrap_or(usize::MAX);
    let outcome = match key(&s).cmp(&key(&b)) {
        std::cmp::Ordering::Less => SignOutcome::Win,
        std::cmp::Ordering::Greater => SignOutcome::Loss,
        std::cmp::Ordering::Equal => SignOutcome::Tie,
    };
    Ok((b, s, outcome))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankCorrelation {
    pub tau: f64,
    /// Systems in MAP order under each qrels, with their MAP.
    pub ranking_a: Vec<(String, f64)>,
    pub ranking_b: Vec<(String, f64)>,
    /// Some systems had equal MAP and were ordered by id.
    pub ties_broken: bool,
}

/// Ranks systems by MAP under two sets of qrels and correlates the rankings.
/// Topics are those judged in both qrels.
pub fn qrels_rank_correlation<S: AsRef<str>>(
    qrels_a: &Qrels,
    qrels_b: &Qrels,
    runs: &BTreeMap<String, BTreeMap<String, Vec<S>>>,
) -> Result<RankCorrelation> {
    if runs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two system runs".into()));
    }
    let topics: Vec<&str> = qrels_a.topic_ids().filter(|t| qrels_b.contains_topic(t)).collect();
    if topics.is_empty() {
        return Err(Error::InvalidParameter("the two qrels share no topic".into()));
    }
    for (system, per_topic) in runs {
        if let Some(t) = topics.iter().find(|t| !per_topic.contains_key(**t)) {
            return Err(Error::InvalidParameter(format!("system {system:?} has no run for topic {t:?}")));
        }
    }
    let rank = |qrels: &Qrels| -> Result<(Vec<(String, f64)>, bool)> {
        let mut scored = Vec::with_capacity(runs.len());
        for (system, per_topic) in runs {
            scored.push((system.clone(), mean_average_precision(per_topic, qrels, &topics)?));
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let tied = scored.windows(2).any(|w| w[0].1 == w[1].1);
        Ok((scored, tied))
    };
    let (ranking_a, tied_a) = rank(qrels_a)?;
    let (ranking_b, tied_b) = rank(qrels_b)?;
    let names_a: Vec<&str> = ranking_a.iter().map(|s| s.0.as_str()).collect();
    let names_b: Vec<&str> = ranking_b.iter().map(|s| s.0.as_str()).collect();
    Ok(RankCorrelation {
        tau: kendall_tau(&names_a, &names_b)?,
        ranking_a,
        ranking_b,
        ties_broken: tied_a || tied_b,
    })
}
