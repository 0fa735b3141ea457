//! Small helpers for comparing epidemic time series.

/// One point of a daily series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSample {
    pub day: u32,
    pub value: f64,
}

/// Daily growth rates (I_{t+1} - I_t) / I_t of an infection series.
///
/// Days where I_t == 0 produce no sample, so the result can be shorter than
/// `infected.len() - 1`. Each sample is tagged with the base day t.
pub fn growth_rates(infected: &[f64]) -> Vec<SeriesSample> {
    let mut out = Vec::new();
    for t in 0..infected.len().saturating_sub(1) {
        let i_t = infected[t];
        if i_t == 0.0 {
            continue;
        }
        out.push(SeriesSample { day: t as u32, value: (infected[t + 1] - i_t) / i_t });
    }
    out
}

/// Supremum distance between two daily series.
///
/// The shorter series is continued with its final value, matching the
/// convention that an epidemic that has already died out holds its state.
/// Two empty series are at distance zero; one empty series against a
/// non-empty one is not comparable and yields infinity.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let len = a.len().max(b.len());
    let mut sup: f64 = 0.0;
    for t in 0..len {
        let va = *a.get(t).unwrap_or_else(|| a.last().unwrap());
        let vb = *b.get(t).unwrap_or_else(|| b.last().unwrap());
        sup = sup.max((va - vb).abs());
    }
    sup
}
