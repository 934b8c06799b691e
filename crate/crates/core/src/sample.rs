//! Sampled curves: plain (abscissa, value) sequences used for emission.

/// A sequence of `(x, value)` pairs on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub points: Vec<(f64, f64)>,
}

impl SampledFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The sample with the smallest value; ties resolve to the leftmost point.
    pub fn min_point(&self) -> Option<(f64, f64)> {
        self.points
            .iter()
            .copied()
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
    }

    /// Second moment of `value^2` about the origin, normalized by the
    /// trapezoid weight of `value^2`. Used to compare how concentrated two
    /// profiles are.
    pub fn second_moment(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for pair in self.points.windows(2) {
            let (x0, f0) = pair[0];
            let (x1, f1) = pair[1];
            let w = 0.5 * (x1 - x0);
            num += w * (x0 * x0 * f0 * f0 + x1 * x1 * f1 * f1);
            den += w * (f0 * f0 + f1 * f1);
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }
}
