//! L2-regularized logistic regression for pointwise relevance scoring.
//!
//! The trainer minimizes `sum_i log(1 + exp(-y_i (w.x_i + b))) + (lambda/2) ||w||^2`
//! (bias unregularized) with damped Newton steps and an Armijo backtracking
//! line search, so the objective never increases between iterations.
//! Features are standardized to zero mean / unit variance by default; the
//! transform is stored in the model so predictions see the same inputs.

use alloc::vec::Vec;

use crate::math;
use crate::rerank::{FeatureVector, FEATURE_COUNT};

/// Weights plus the unregularized bias.
pub const PARAM_COUNT: usize = FEATURE_COUNT + 1;

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: u32 = 60;
const PROB_FLOOR: f64 = f64::MIN_POSITIVE;
const PROB_CEIL: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set contains a single class; need at least one relevant and one non-relevant example")]
    SingleClass,
    #[error("feature value is not finite")]
    NonFiniteFeature,
    #[error("model parameter is not finite")]
    NonFiniteParameter,
    #[error("regularization strength must be finite and non-negative")]
    InvalidLambda,
    #[error("solver tolerance and iteration budget must be positive")]
    InvalidOptions,
}

/// Per-feature standardization transform. Constant features keep a standard
/// deviation of 1 so they map to exactly zero after centering.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scaler {
    pub mean: [f64; FEATURE_COUNT],
    pub std_dev: [f64; FEATURE_COUNT],
}

impl Scaler {
    /// Fits mean and (population) standard deviation over the given rows.
    pub fn fit(rows: &[[f64; FEATURE_COUNT]]) -> Self {
        let n = rows.len().max(1) as f64;
        let mut mean = [0.0; FEATURE_COUNT];
        for row in rows {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut variance = [0.0; FEATURE_COUNT];
        for row in rows {
            for ((var, v), m) in variance.iter_mut().zip(row).zip(&mean) {
                let d = v - m;
                *var += d * d;
            }
        }
        let mut std_dev = [0.0; FEATURE_COUNT];
        for (s, var) in std_dev.iter_mut().zip(&variance) {
            let sd = math::sqrt(var / n);
            *s = if sd > 0.0 { sd } else { 1.0 };
        }
        Self { mean, std_dev }
    }

    pub fn apply(&self, row: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let mut out = [0.0; FEATURE_COUNT];
        for i in 0..FEATURE_COUNT {
            out[i] = (row[i] - self.mean[i]) / self.std_dev[i];
        }
        out
    }
}

/// A trained pointwise relevance model.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    weights: [f64; FEATURE_COUNT],
    bias: f64,
    lambda: f64,
    scaler: Option<Scaler>,
    iterations: u32,
    final_loss: f64,
}

impl LogisticModel {
    /// Assembles a model from stored parameters, checking everything is
    /// finite.
    pub fn from_parts(
        weights: [f64; FEATURE_COUNT],
        bias: f64,
        lambda: f64,
        scaler: Option<Scaler>,
        iterations: u32,
        final_loss: f64,
    ) -> Result<Self, ModelError> {
        if !weights.iter().all(|w| w.is_finite()) || !bias.is_finite() {
            return Err(ModelError::NonFiniteParameter);
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(ModelError::InvalidLambda);
        }
        if let Some(s) = &scaler {
            let ok = s.mean.iter().all(|v| v.is_finite())
                && s.std_dev.iter().all(|v| v.is_finite() && *v > 0.0);
            if !ok {
                return Err(ModelError::NonFiniteParameter);
            }
        }
        Ok(Self {
            weights,
            bias,
            lambda,
            scaler,
            iterations,
            final_loss,
        })
    }

    pub fn weights(&self) -> &[f64; FEATURE_COUNT] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scaler(&self) -> Option<&Scaler> {
        self.scaler.as_ref()
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    pub fn final_loss(&self) -> f64 {
        self.final_loss
    }

    /// Probability that the document is relevant, strictly inside (0, 1).
    pub fn predict_prob(&self, features: &FeatureVector) -> Result<f64, ModelError> {
        self.predict_prob_array(&features.as_array())
    }

    /// Same as [`predict_prob`](Self::predict_prob) over a raw feature row.
    pub fn predict_prob_array(&self, row: &[f64; FEATURE_COUNT]) -> Result<f64, ModelError> {
        if !row.iter().all(|v| v.is_finite()) {
            return Err(ModelError::NonFiniteFeature);
        }
        let x = match &self.scaler {
            Some(scaler) => scaler.apply(row),
            None => *row,
        };
        let mut z = self.bias;
        for (w, v) in self.weights.iter().zip(&x) {
            z += w * v;
        }
        Ok(sigmoid(z).clamp(PROB_FLOOR, PROB_CEIL))
    }
}

/// Numerically stable logistic function.
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + math::exp(-z))
    } else {
        let e = math::exp(z);
        e / (1.0 + e)
    }
}

/// `log(1 + exp(t))` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + math::ln_1p(math::exp(-t))
    } else {
        math::ln_1p(math::exp(t))
    }
}

/// The regularized negative log-likelihood as a function of the flat
/// parameter vector `[w_0..w_6, b]`. Exposed so the analytic gradient can be
/// checked against finite differences.
#[derive(Debug, Clone)]
pub struct LogisticObjective {
    rows: Vec<[f64; FEATURE_COUNT]>,
    /// Labels mapped to +1 / -1.
    signs: Vec<f64>,
    lambda: f64,
}

impl LogisticObjective {
    pub fn new(
        rows: Vec<[f64; FEATURE_COUNT]>,
        labels: &[bool],
        lambda: f64,
    ) -> Result<Self, ModelError> {
        if rows.len() != labels.len() || rows.is_empty() {
            return Err(ModelError::EmptyTrainingSet);
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(ModelError::InvalidLambda);
        }
        if rows.iter().any(|row| row.iter().any(|v| !v.is_finite())) {
            return Err(ModelError::NonFiniteFeature);
        }
        let signs = labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
        Ok(Self {
            rows,
            signs,
            lambda,
        })
    }

    fn margin(&self, theta: &[f64; PARAM_COUNT], row: &[f64; FEATURE_COUNT]) -> f64 {
        let mut z = theta[FEATURE_COUNT];
        for (w, v) in theta[..FEATURE_COUNT].iter().zip(row) {
            z += w * v;
        }
        z
    }

    pub fn value(&self, theta: &[f64; PARAM_COUNT]) -> f64 {
        let mut total = 0.0;
        for (row, sign) in self.rows.iter().zip(&self.signs) {
            total += softplus(-sign * self.margin(theta, row));
        }
        let penalty: f64 = theta[..FEATURE_COUNT].iter().map(|w| w * w).sum();
        total + 0.5 * self.lambda * penalty
    }

    pub fn gradient(&self, theta: &[f64; PARAM_COUNT]) -> [f64; PARAM_COUNT] {
        let mut grad = [0.0; PARAM_COUNT];
        for (row, sign) in self.rows.iter().zip(&self.signs) {
            let z = self.margin(theta, row);
            // d/dz log(1 + exp(-y z)) = -y * sigmoid(-y z)
            let slope = -sign * sigmoid(-sign * z);
            for (g, v) in grad[..FEATURE_COUNT].iter_mut().zip(row) {
                *g += slope * v;
            }
            grad[FEATURE_COUNT] += slope;
        }
        for (g, w) in grad[..FEATURE_COUNT].iter_mut().zip(theta) {
            *g += self.lambda * w;
        }
        grad
    }

    fn hessian(&self, theta: &[f64; PARAM_COUNT]) -> [[f64; PARAM_COUNT]; PARAM_COUNT] {
        let mut hess = [[0.0; PARAM_COUNT]; PARAM_COUNT];
        for row in &self.rows {
            let p = sigmoid(self.margin(theta, row));
            let curve = p * (1.0 - p);
            let mut extended = [0.0; PARAM_COUNT];
            extended[..FEATURE_COUNT].copy_from_slice(row);
            extended[FEATURE_COUNT] = 1.0;
            for j in 0..PARAM_COUNT {
                for k in j..PARAM_COUNT {
                    let v = curve * extended[j] * extended[k];
                    hess[j][k] += v;
                    if j != k {
                        hess[k][j] += v;
                    }
                }
            }
        }
        for (j, row) in hess.iter_mut().enumerate().take(FEATURE_COUNT) {
            row[j] += self.lambda;
        }
        hess
    }
}

/// Gaussian elimination with partial pivoting; `None` when the system is
/// numerically singular.
fn solve_linear(
    mut a: [[f64; PARAM_COUNT]; PARAM_COUNT],
    mut b: [f64; PARAM_COUNT],
) -> Option<[f64; PARAM_COUNT]> {
    for col in 0..PARAM_COUNT {
        let mut pivot = col;
        for row in col + 1..PARAM_COUNT {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..PARAM_COUNT {
            let factor = a[row][col] / a[col][col];
            let (pivot_rows, rest) = a.split_at_mut(row);
            let pivot_row = &pivot_rows[col];
            for (value, pivot) in rest[0].iter_mut().zip(pivot_row).skip(col) {
                *value -= factor * pivot;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; PARAM_COUNT];
    for col in (0..PARAM_COUNT).rev() {
        let mut sum = b[col];
        for k in col + 1..PARAM_COUNT {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
    }
    Some(x)
}

/// Trainer settings. `lambda` defaults to 1.0 (the conventional default for
/// an L2-regularized logistic regression), convergence is declared when the
/// gradient max-norm drops to `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TrainOptions {
    pub lambda: f64,
    pub tolerance: f64,
    pub max_iterations: u32,
    pub standardize: bool,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            tolerance: 1e-6,
            max_iterations: 1000,
            standardize: true,
        }
    }
}

impl TrainOptions {
    fn validate(&self) -> Result<(), ModelError> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(ModelError::InvalidLambda);
        }
        if self.tolerance <= 0.0 || self.tolerance.is_nan() || self.max_iterations == 0 {
            return Err(ModelError::InvalidOptions);
        }
        Ok(())
    }
}

/// A trained model plus the objective value after every accepted step
/// (index 0 is the starting value).
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LogisticModel,
    pub objective_trace: Vec<f64>,
}

/// Trains the relevance model. Needs at least one example of each class.
pub fn train_logistic(
    examples: &[(FeatureVector, bool)],
    options: &TrainOptions,
) -> Result<TrainOutcome, ModelError> {
    options.validate()?;
    if examples.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let positives = examples.iter().filter(|(_, label)| *label).count();
    if positives == 0 || positives == examples.len() {
        return Err(ModelError::SingleClass);
    }

    let raw_rows: Vec<[f64; FEATURE_COUNT]> = examples.iter().map(|(f, _)| f.as_array()).collect();
    let labels: Vec<bool> = examples.iter().map(|(_, l)| *l).collect();
    let scaler = options.standardize.then(|| Scaler::fit(&raw_rows));
    let rows: Vec<[f64; FEATURE_COUNT]> = match &scaler {
        Some(s) => raw_rows.iter().map(|r| s.apply(r)).collect(),
        None => raw_rows,
    };

    let objective = LogisticObjective::new(rows, &labels, options.lambda)?;
    let mut theta = [0.0; PARAM_COUNT];
    let mut trace = alloc::vec![objective.value(&theta)];
    let mut accepted = 0u32;

    for _ in 0..options.max_iterations {
        let grad = objective.gradient(&theta);
        let grad_max = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if grad_max <= options.tolerance {
            break;
        }

        let mut neg_grad = [0.0; PARAM_COUNT];
        for (n, g) in neg_grad.iter_mut().zip(&grad) {
            *n = -g;
        }
        let mut direction = solve_linear(objective.hessian(&theta), neg_grad).unwrap_or(neg_grad);
        let mut slope: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        if slope >= 0.0 {
            direction = neg_grad;
            slope = -grad.iter().map(|g| g * g).sum::<f64>();
        }

        let current = *trace.last().expect("trace is never empty");
        let mut step = 1.0;
        let mut advanced = false;
        for _ in 0..MAX_BACKTRACKS {
            let mut candidate = theta;
            for (c, d) in candidate.iter_mut().zip(&direction) {
                *c += step * d;
            }
            let value = objective.value(&candidate);
            if value <= current + ARMIJO_C * step * slope {
                theta = candidate;
                trace.push(value);
                accepted += 1;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }

    let mut weights = [0.0; FEATURE_COUNT];
    weights.copy_from_slice(&theta[..FEATURE_COUNT]);
    let final_loss = *trace.last().expect("trace is never empty");
    let model = LogisticModel::from_parts(
        weights,
        theta[FEATURE_COUNT],
        options.lambda,
        scaler,
        accepted,
        final_loss,
    )?;
    Ok(TrainOutcome {
        model,
        objective_trace: trace,
    })
}
