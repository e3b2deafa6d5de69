/// A stroboscopic observable sampled at `t = n T`, `n = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub label: String,
    pub period: f64,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, period: f64) -> Self {
        TimeSeries { label: label.into(), period, values: Vec::new() }
    }

    pub fn push(&mut self, v: f64) {
        self.values.push(v);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |n| n as f64 * self.period)
    }

    /// `max_n |x(n) - x(0)|`.
    pub fn max_departure(&self) -> f64 {
        match self.values.first() {
            Some(&x0) => self.values.iter().fold(0.0, |m, &x| m.max((x - x0).abs())),
            None => 0.0,
        }
    }

    pub fn max_in(&self, range: std::ops::RangeInclusive<usize>) -> Option<f64> {
        let (a, b) = (*range.start(), (*range.end()).min(self.values.len().saturating_sub(1)));
        self.values.get(a..=b).map(|s| s.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}
