use super::EvalError;
use crate::learn::transform_t;

/// Fuzzy and crisp effectiveness measures over a test set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsRecord {
    pub positives: f64,
    pub non_positives: f64,
    pub tp_f: f64,
    pub fp_f: f64,
    pub tnp_f: f64,
    pub fnp_f: f64,
    pub p_f: f64,
    pub r_f: f64,
    pub f1_f: f64,
    pub tp: f64,
    pub fp: f64,
    pub tnp: f64,
    pub fnp: f64,
    pub p: f64,
    pub r: f64,
    pub f1: f64,
    pub mse: f64,
    pub ff1f1: f64,
    /// Precision or recall had a zero denominator and was reported as 0.
    pub undefined_f: bool,
    pub undefined: bool,
}

/// How the squared error is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MseMode {
    /// `(t(pred) − l)²` with `l ∈ {−1, 1}`.
    #[default]
    Transformed,
    /// `(pred − l)²` with `l ∈ {0, 1}`.
    Raw,
}

fn ratio(num: f64, den: f64, undefined: &mut bool) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        *undefined = true;
        0.0
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Measures for predicted degrees against labels (`true` = positive).
pub fn metrics(predictions: &[f64], labels: &[bool], mse: MseMode) -> Result<MetricsRecord, EvalError> {
    if predictions.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    assert_eq!(predictions.len(), labels.len(), "one prediction per example");
    let mut m = MetricsRecord::default();
    let mut covered_f = 0.0;
    let mut covered = 0.0;
    let mut sq = 0.0;
    for (&x, &l) in predictions.iter().zip(labels) {
        let x = x.clamp(0.0, 1.0);
        let c = x.ceil();
        covered_f += x;
        covered += c;
        if l {
            m.positives += 1.0;
            m.tp_f += x;
            m.tp += c;
        } else {
            m.non_positives += 1.0;
            m.fp_f += x;
            m.fp += c;
        }
        sq += match mse {
            MseMode::Transformed => {
                let target = if l { 1.0 } else { -1.0 };
                (transform_t(x) - target).powi(2)
            }
            MseMode::Raw => (x - f64::from(u8::from(l))).powi(2),
        };
    }
    m.tnp_f = m.non_positives - m.fp_f;
    m.fnp_f = m.positives - m.tp_f;
    m.tnp = m.non_positives - m.fp;
    m.fnp = m.positives - m.tp;
    m.p_f = ratio(m.tp_f, covered_f, &mut m.undefined_f);
    m.r_f = ratio(m.tp_f, m.positives, &mut m.undefined_f);
    m.f1_f = harmonic(m.p_f, m.r_f);
    m.p = ratio(m.tp, covered, &mut m.undefined);
    m.r = ratio(m.tp, m.positives, &mut m.undefined);
    m.f1 = harmonic(m.p, m.r);
    m.mse = sq / predictions.len() as f64;
    m.ff1f1 = m.f1_f * m.f1;
    Ok(m)
}

impl MetricsRecord {
    /// Field-wise mean; fF1F1 is recomputed from the averaged F1 values.
    pub fn macro_average(records: &[MetricsRecord]) -> MetricsRecord {
        if records.is_empty() {
            return MetricsRecord::default();
        }
        let n = records.len() as f64;
        let mean = |f: fn(&MetricsRecord) -> f64| records.iter().map(f).sum::<f64>() / n;
        let f1_f = mean(|r| r.f1_f);
        let f1 = mean(|r| r.f1);
        MetricsRecord {
            positives: mean(|r| r.positives),
            non_positives: mean(|r| r.non_positives),
            tp_f: mean(|r| r.tp_f),
            fp_f: mean(|r| r.fp_f),
            tnp_f: mean(|r| r.tnp_f),
            fnp_f: mean(|r| r.fnp_f),
            p_f: mean(|r| r.p_f),
            r_f: mean(|r| r.r_f),
            f1_f,
            tp: mean(|r| r.tp),
            fp: mean(|r| r.fp),
            tnp: mean(|r| r.tnp),
            fnp: mean(|r| r.fnp),
            p: mean(|r| r.p),
            r: mean(|r| r.r),
            f1,
            mse: mean(|r| r.mse),
            ff1f1: f1_f * f1,
            undefined_f: records.iter().any(|r| r.undefined_f),
            undefined: records.iter().any(|r| r.undefined),
        }
    }

    /// Named numeric fields in report order.
    pub fn fields(&self) -> [(&'static str, f64); 18] {
        [
            ("positives", self.positives),
            ("non_positives", self.non_positives),
            ("tp_f", self.tp_f),
            ("fp_f", self.fp_f),
            ("tnp_f", self.tnp_f),
            ("fnp_f", self.fnp_f),
            ("p_f", self.p_f),
            ("r_f", self.r_f),
            ("f1_f", self.f1_f),
            ("tp", self.tp),
            ("fp", self.fp),
            ("tnp", self.tnp),
            ("fnp", self.fnp),
            ("p", self.p),
            ("r", self.r),
            ("f1", self.f1),
            ("mse", self.mse),
            ("ff1f1", self.ff1f1),
        ]
    }
}
