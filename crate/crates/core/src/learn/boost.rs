use super::{fresh_name, wfoildl, BoostEnsemble, Hypothesis, LearnError, LearnParams, LearningTask, WeakLearner};

/// Clamp applied to μ before computing α.
pub const MU_CLAMP: f64 = 1.0 - 1e-6;

/// Maps a degree to the signed confidence domain: 0 becomes −1.
pub fn transform_t(x: f64) -> f64 {
    if x == 0.0 {
        -1.0
    } else {
        x
    }
}

/// 1 if `h` and the signed label `l` disagree.
pub fn disagreement_delta(h: f64, l: f64) -> f64 {
    if h * l < 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `Σ w·δ·h` (or `Σ w·δ·|h|` with `magnitude`).
pub fn weak_error(h: &[f64], labels: &[f64], w: &[f64], magnitude: bool) -> f64 {
    h.iter()
        .zip(labels)
        .zip(w)
        .map(|((&h, &l), &w)| {
            let h_term = if magnitude { h.abs() } else { h };
            w * disagreement_delta(h, l) * h_term
        })
        .sum()
}

/// Quantities of one boosting round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundStats {
    pub h_star: f64,
    pub mu_raw: f64,
    pub mu: f64,
    pub alpha: f64,
    /// Updated weights, renormalised to sum to 1.
    pub weights: Vec<f64>,
}

pub fn boosting_round(h: &[f64], labels: &[f64], w: &[f64]) -> RoundStats {
    let h_star = h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(h_star > 0.0, "weak hypothesis values must be nonzero");
    let edge: f64 = h.iter().zip(labels).zip(w).map(|((h, l), w)| w * l * h).sum();
    let mu_raw = edge / h_star;
    let mu = mu_raw.clamp(-MU_CLAMP, MU_CLAMP);
    let alpha = ((1.0 + mu) / (1.0 - mu)).ln() / (2.0 * h_star);
    let norm = 1.0 - mu * mu;
    let mut weights: Vec<f64> = h
        .iter()
        .zip(labels)
        .zip(w)
        .map(|((h, l), w)| (w * (1.0 - mu * l * h / h_star) / norm).max(0.0))
        .collect();
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        weights.iter_mut().for_each(|x| *x /= total);
    }
    RoundStats { h_star, mu_raw, mu, alpha, weights }
}

/// Real-valued boosting over weak hypotheses from [`wfoildl`].
pub fn boost(task: &LearningTask<'_>, params: &LearnParams) -> Result<Hypothesis, LearnError> {
    params.validate()?;
    let labels = task.signed_labels();
    let mut w = task.uniform_weights();
    let mut taken = task.closure.concept_names().clone();
    taken.insert(task.target.clone());
    let mut ensemble = BoostEnsemble { target: task.target.clone(), weak_learners: Vec::new(), alphas: Vec::new() };

    for round in 1..=params.iterations {
        let bodies = wfoildl(task, &w, params);
        if bodies.is_empty() {
            if round == 1 {
                return Err(LearnError::LearningFailed(format!(
                    "no rule for `{}` reaches theta = {} with eta = {} in the first round",
                    task.target, params.theta, params.eta
                )));
            }
            break;
        }
        let h: Vec<f64> = (0..task.len())
            .map(|k| transform_t(bodies.iter().map(|b| task.degree_at(k, b)).fold(0.0, f64::max)))
            .collect();
        if weak_error(&h, &labels, &w, params.error_magnitude) >= 0.5 {
            break;
        }
        let stats = boosting_round(&h, &labels, &w);
        let name = fresh_name(&format!("WL{round}"), &taken);
        taken.insert(name.clone());
        ensemble.weak_learners.push(WeakLearner { name, bodies });
        ensemble.alphas.push(stats.alpha);
        w = stats.weights;
    }
    Ok(Hypothesis::Boost(ensemble))
}
