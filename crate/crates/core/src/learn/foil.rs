use super::{learn_one_axiom, FoilRule, FoilRules, Hypothesis, LearnError, LearnParams, LearningTask};

/// FOIL-style baseline: covered positives are dropped from the weight
/// distribution and each rule carries its confidence as degree.
pub fn foil_dl(task: &LearningTask<'_>, params: &LearnParams) -> Result<Hypothesis, LearnError> {
    params.validate()?;
    let labels = task.labels();
    let mut covered = vec![false; task.len()];
    let mut rules: Vec<FoilRule> = Vec::new();

    loop {
        let pos: Vec<bool> = labels.iter().zip(&covered).map(|(&l, &c)| l && !c).collect();
        if !pos.iter().any(|&p| p) {
            break;
        }
        let active = labels.iter().zip(&covered).filter(|(&l, &c)| !(l && c)).count();
        let w: Vec<f64> = labels
            .iter()
            .zip(&covered)
            .map(|(&l, &c)| if l && c { 0.0 } else { 1.0 / active as f64 })
            .collect();
        let Some(body) = learn_one_axiom(task, &w, &pos, params) else {
            break;
        };
        if rules.iter().any(|r| r.body == body) {
            break;
        }
        let degrees = task.degrees(&body);
        let Some(degree) = task.confidence(&degrees).filter(|d| *d > 0.0) else {
            break;
        };
        for ((c, &l), d) in covered.iter_mut().zip(labels).zip(&degrees) {
            if l && *d > 0.0 {
                *c = true;
            }
        }
        rules.push(FoilRule { body, degree });
    }

    if rules.is_empty() {
        return Err(LearnError::LearningFailed(format!(
            "no rule for `{}` reaches theta = {} with eta = {}",
            task.target, params.theta, params.eta
        )));
    }
    Ok(Hypothesis::Foil(FoilRules { target: task.target.clone(), rules }))
}
