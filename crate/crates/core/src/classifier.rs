//! Soft-margin linear SVM (L2 regularizer, hinge loss, unregularized bias).
//!
//! Minimizes `0.5 * |w|^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))`.
//!
//! The solver works on the dual with the equality constraint
//! `sum_i y_i alpha_i = 0` using pairwise (SMO) updates. Because the kernel
//! is linear, `w` is kept explicitly and a pair update only touches the two
//! examples involved. Each pass recomputes every margin once, takes the
//! maximal violating pair first, then sweeps further candidate pairs on
//! fresh margins. After the dual converges the bias is set by an exact
//! minimization of the primal over `b`, and the duality gap bounds the
//! remaining primal suboptimality.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numfmt::sig9;
use crate::vectors::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Label {
    Relevant,
    NotRelevant,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Relevant => 1.0,
            Label::NotRelevant => -1.0,
        }
    }

    pub fn from_bool(relevant: bool) -> Self {
        if relevant {
            Label::Relevant
        } else {
            Label::NotRelevant
        }
    }

    pub fn is_relevant(self) -> bool {
        self == Label::Relevant
    }
}

/// Where a training label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Reviewed,
    /// Unreviewed document temporarily labeled not relevant.
    Presumptive,
}

#[derive(Debug, Clone, Copy)]
pub struct LabeledExample<'a> {
    pub vector: &'a SparseVector,
    pub label: Label,
    pub provenance: Provenance,
}

impl<'a> LabeledExample<'a> {
    pub fn reviewed(vector: &'a SparseVector, label: Label) -> Self {
        LabeledExample {
            vector,
            label,
            provenance: Provenance::Reviewed,
        }
    }

    pub fn presumptive(vector: &'a SparseVector) -> Self {
        LabeledExample {
            vector,
            label: Label::NotRelevant,
            provenance: Provenance::Presumptive,
        }
    }
}

/// Misclassification cost `C`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Cost {
    /// `1 / mean(|x_i|^2)` over the training set.
    Auto,
    Fixed(f64),
}

impl Cost {
    pub fn resolve(self, examples: &[LabeledExample<'_>]) -> f64 {
        match self {
            Cost::Fixed(c) => c,
            Cost::Auto => {
                let mean = examples.iter().map(|e| e.vector.norm_squared()).sum::<f64>()
                    / examples.len().max(1) as f64;
                if mean > 0.0 {
                    1.0 / mean
                } else {
                    1.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub cost: Cost,
    /// Stop once the duality gap is below this fraction of the primal objective.
    pub relative_gap: f64,
    /// Initial KKT violation threshold; tightened while the gap is too large.
    pub kkt_tolerance: f64,
    pub max_passes: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            cost: Cost::Auto,
            relative_gap: 1e-9,
            kkt_tolerance: 1e-3,
            max_passes: 20_000,
        }
    }
}

/// Weight vector (dense over feature ids) and bias.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    /// `w . x + b`
    pub fn score(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    /// `bias <b>` then `feature_id weight` for every nonzero weight.
    pub fn dump(&self) -> String {
        let mut out = format!("bias {}\n", sig9(self.bias));
        for (id, w) in self.weights.iter().enumerate() {
            if *w != 0.0 {
                out.push_str(&format!("{id} {}\n", sig9(*w)));
            }
        }
        out
    }
}

/// Free-function form of [`LinearModel::score`].
pub fn score(model: &LinearModel, x: &SparseVector) -> f64 {
    model.score(x)
}

/// Solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainReport {
    pub cost: f64,
    pub primal: f64,
    pub dual: f64,
    pub passes: usize,
    pub converged: bool,
}

impl TrainReport {
    pub fn relative_gap(&self) -> f64 {
        (self.primal - self.dual) / self.primal.abs().max(f64::MIN_POSITIVE)
    }
}

/// Primal objective of `model` on `examples` with cost `c`.
pub fn objective(model: &LinearModel, examples: &[LabeledExample<'_>], c: f64) -> f64 {
    let reg = 0.5 * model.weights.iter().map(|w| w * w).sum::<f64>();
    let loss: f64 = examples
        .iter()
        .map(|e| (1.0 - e.label.sign() * model.score(e.vector)).max(0.0))
        .sum();
    reg + c * loss
}

pub fn train(examples: &[LabeledExample<'_>], cost: Cost) -> Result<LinearModel> {
    let opts = TrainOptions {
        cost,
        ..TrainOptions::default()
    };
    train_with(examples, &opts).map(|(m, _)| m)
}

pub fn train_with(examples: &[LabeledExample<'_>], opts: &TrainOptions) -> Result<(LinearModel, TrainReport)> {
    if examples
        .iter()
        .any(|e| e.provenance == Provenance::Presumptive && e.label != Label::NotRelevant)
    {
        return Err(Error::InvalidParameter(
            "presumptive examples must be labeled not relevant".into(),
        ));
    }
    let has_pos = examples.iter().any(|e| e.label.is_relevant());
    let has_neg = examples.iter().any(|e| !e.label.is_relevant());
    if !has_pos || !has_neg {
        return Err(Error::SingleClass);
    }
    let c = opts.cost.resolve(examples);
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("cost must be positive, got {c}")));
    }
    Ok(Smo::new(examples, c).solve(opts))
}

struct Smo<'a, 'b> {
    xs: &'b [LabeledExample<'a>],
    y: Vec<f64>,
    alpha: Vec<f64>,
    sq_norm: Vec<f64>,
    w: Vec<f64>,
    c: f64,
}

impl<'a, 'b> Smo<'a, 'b> {
    fn new(xs: &'b [LabeledExample<'a>], c: f64) -> Self {
        let dim = xs
            .iter()
            .filter_map(|e| e.vector.ids().last())
            .max()
            .map_or(0, |&m| m as usize + 1);
        Smo {
            y: xs.iter().map(|e| e.label.sign()).collect(),
            alpha: vec![0.0; xs.len()],
            sq_norm: xs.iter().map(|e| e.vector.norm_squared()).collect(),
            w: vec![0.0; dim],
            xs,
            c,
        }
    }

    fn f(&self, i: usize) -> f64 {
        self.xs[i].vector.dot_dense(&self.w)
    }

    fn in_up(&self, i: usize) -> bool {
        if self.y[i] > 0.0 {
            self.alpha[i] < self.c
        } else {
            self.alpha[i] > 0.0
        }
    }

    fn in_low(&self, i: usize) -> bool {
        if self.y[i] > 0.0 {
            self.alpha[i] > 0.0
        } else {
            self.alpha[i] < self.c
        }
    }

    /// Exact step along the feasible direction of pair (i, j); requires
    /// `i` in I_up, `j` in I_low and `v_i > v_j`.
    fn step(&mut self, i: usize, j: usize, vi: f64, vj: f64) {
        let cross = sparse_dot(self.xs[i].vector, self.xs[j].vector);
        let curvature = (self.sq_norm[i] + self.sq_norm[j] - 2.0 * cross).max(1e-12);
        let mut t = (vi - vj) / curvature;
        t = t.min(if self.y[i] > 0.0 { self.c - self.alpha[i] } else { self.alpha[i] });
        t = t.min(if self.y[j] > 0.0 { self.alpha[j] } else { self.c - self.alpha[j] });
        if t <= 0.0 {
            return;
        }
        self.alpha[i] = clamp_box(self.alpha[i] + self.y[i] * t, self.c);
        self.alpha[j] = clamp_box(self.alpha[j] - self.y[j] * t, self.c);
        self.xs[i].vector.add_scaled_to(&mut self.w, t);
        self.xs[j].vector.add_scaled_to(&mut self.w, -t);
    }

    fn solve(mut self, opts: &TrainOptions) -> (LinearModel, TrainReport) {
        let n = self.xs.len();
        let mut eps = opts.kkt_tolerance;
        let mut passes = 0;
        let mut converged = false;
        let mut v = vec![0.0; n];
        let mut up: Vec<usize> = Vec::with_capacity(n);
        let mut low: Vec<usize> = Vec::with_capacity(n);
        let mut best = None;

        while passes < opts.max_passes {
            passes += 1;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = self.y[i] - self.f(i);
            }
            up.clear();
            low.clear();
            up.extend((0..n).filter(|&i| self.in_up(i)));
            low.extend((0..n).filter(|&i| self.in_low(i)));
            up.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
            low.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
            let violation = match (up.first(), low.first()) {
                (Some(&i), Some(&j)) => v[i] - v[j],
                _ => 0.0,
            };
            if violation <= eps {
                let (model, primal, dual) = self.finish(&v);
                best = Some((model, primal, dual));
                if primal - dual <= opts.relative_gap * primal.abs() || eps <= 1e-12 {
                    converged = true;
                    break;
                }
                eps = (eps * 0.1).max(1e-12);
                continue;
            }
            for k in 0..up.len().min(low.len()) {
                let (i, j) = (up[k], low[k]);
                if v[i] - v[j] <= eps {
                    break;
                }
                if i == j || !self.in_up(i) || !self.in_low(j) {
                    continue;
                }
                let (vi, vj) = (self.y[i] - self.f(i), self.y[j] - self.f(j));
                if vi - vj > eps {
                    self.step(i, j, vi, vj);
                }
            }
        }
        let (model, primal, dual) = match best {
            Some(b) if converged => b,
            _ => {
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi = self.y[i] - self.f(i);
                }
                log::warn!("svm solver stopped after {passes} passes without meeting the gap tolerance");
                self.finish(&v)
            }
        };
        let report = TrainReport {
            cost: self.c,
            primal,
            dual,
            passes,
            converged,
        };
        (model, report)
    }

    /// Model with the primal-optimal bias for the current `w`, plus the
    /// primal and dual objective values.
    fn finish(&self, v: &[f64]) -> (LinearModel, f64, f64) {
        let free: Vec<f64> = (0..v.len())
            .filter(|&i| self.alpha[i] > 0.0 && self.alpha[i] < self.c)
            .map(|i| v[i])
            .collect();
        let b0 = if free.is_empty() {
            let m = (0..v.len()).filter(|&i| self.in_up(i)).map(|i| v[i]).fold(f64::NEG_INFINITY, f64::max);
            let mm = (0..v.len()).filter(|&i| self.in_low(i)).map(|i| v[i]).fold(f64::INFINITY, f64::min);
            match (m.is_finite(), mm.is_finite()) {
                (true, true) => 0.5 * (m + mm),
                (true, false) => m,
                (false, true) => mm,
                _ => 0.0,
            }
        } else {
            free.iter().sum::<f64>() / free.len() as f64
        };
        let bias = optimal_bias(v, &self.y, b0);
        let model = LinearModel {
            weights: self.w.clone(),
            bias,
        };
        let half_norm = 0.5 * self.w.iter().map(|x| x * x).sum::<f64>();
        let loss: f64 = (0..v.len())
            .map(|i| (1.0 - self.y[i] * (self.y[i] - v[i] + bias)).max(0.0))
            .sum();
        let primal = half_norm + self.c * loss;
        let dual = self.alpha.iter().sum::<f64>() - half_norm;
        (model, primal, dual)
    }
}

fn clamp_box(a: f64, c: f64) -> f64 {
    if a < 1e-15 {
        0.0
    } else if a > c - 1e-15 * c.max(1.0) {
        c
    } else {
        a
    }
}

/// Minimizes `sum_i max(0, 1 - y_i (f_i + b))` over `b`, where
/// `v_i = y_i - f_i` are the breakpoints. Picks the minimizer closest to `b0`.
fn optimal_bias(v: &[f64], y: &[f64], b0: f64) -> f64 {
    let mut pts: Vec<(f64, bool)> = v.iter().zip(y).map(|(&vi, &yi)| (vi, yi > 0.0)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total_pos = pts.iter().filter(|p| p.1).count() as i64;
    // Sweep distinct breakpoints. Right derivative at b:
    //   -#{pos: v > b} + #{neg: v <= b}; left derivative uses strict/inclusive swap.
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut pos_le = 0i64;
    let mut neg_le = 0i64;
    let mut k = 0;
    let mut found_lo = false;
    while k < pts.len() {
        let value = pts[k].0;
        let (mut pos_eq, mut neg_eq) = (0i64, 0i64);
        while k < pts.len() && pts[k].0 == value {
            if pts[k].1 {
                pos_eq += 1;
            } else {
                neg_eq += 1;
            }
            k += 1;
        }
        let left = -(total_pos - pos_le) + neg_le;
        pos_le += pos_eq;
        neg_le += neg_eq;
        let right = -(total_pos - pos_le) + neg_le;
        if !found_lo && right >= 0 {
            lo = value;
            found_lo = true;
        }
        if left <= 0 {
            hi = value;
        }
    }
    if lo > hi {
        return lo;
    }
    b0.clamp(lo, hi)
}

fn sparse_dot(a: &SparseVector, b: &SparseVector) -> f64 {
    let (ai, aw) = (a.ids(), a.weights());
    let (bi, bw) = (b.ids(), b.weights());
    let (mut p, mut q, mut s) = (0, 0, 0.0);
    while p < ai.len() && q < bi.len() {
        match ai[p].cmp(&bi[q]) {
            Ordering::Less => p += 1,
            Ordering::Greater => q += 1,
            Ordering::Equal => {
                s += aw[p] * bw[q];
                p += 1;
                q += 1;
            }
        }
    }
    s
}
