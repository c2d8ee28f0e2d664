//! Correlation measures and distribution summaries for validation reports.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Paired observations, e.g. (power, accuracy).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_pairs(&xs, &ys)?;
        Ok(PairedSample { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn pearson(&self) -> Result<f64> {
        pearson(&self.xs, &self.ys)
    }

    pub fn spearman(&self) -> Result<f64> {
        spearman(&self.xs, &self.ys)
    }

    pub fn r_squared(&self) -> Result<f64> {
        r_squared(&self.xs, &self.ys)
    }
}

fn check_pairs(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(alloc::format!("paired sample lengths differ: {} vs {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("paired sample needs at least two observations"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::invalid("paired sample contains non-finite values"));
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Centred sums `(Sxx, Syy, Sxy)`.
fn moments(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (sxx, syy, sxy)
}

/// Product-moment correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pairs(xs, ys)?;
    let (sxx, syy, sxy) = moments(xs, ys);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput("pearson correlation of a constant sequence".into()));
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// 1-based ranks, tied values sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean((i+1)..=j)
        let rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

/// Rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pairs(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Coefficient of determination of the least-squares line of `ys` on `xs`.
/// Constant `ys` give 0.
pub fn r_squared(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pairs(xs, ys)?;
    let (slope, intercept) = linear_fit(xs, ys)?;
    let my = mean(ys);
    let mut sse = 0.0;
    let mut sst = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let e = y - (slope * x + intercept);
        sse += e * e;
        sst += (y - my) * (y - my);
    }
    if sst == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - sse / sst)
}

/// Ordinary least squares `(slope, intercept)` of `ys` on `xs`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    check_pairs(xs, ys)?;
    let (sxx, _, sxy) = moments(xs, ys);
    if sxx == 0.0 {
        return Err(Error::DegenerateInput("regression on a constant predictor".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, mean(ys) - slope * mean(xs)))
}

/// Right-continuous empirical CDF sampled at the sorted unique values.
pub fn ecdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::invalid("empirical CDF of an empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("empirical CDF of a sample containing NaN"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = f,
            _ => out.push((v, f)),
        }
    }
    Ok(out)
}

/// `1 - ecdf` at the same points.
pub fn eccdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    Ok(ecdf(values)?.into_iter().map(|(x, f)| (x, 1.0 - f)).collect())
}

/// Fraction of `values` that are `<= x`.
pub fn ecdf_at(values: &[f64], x: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("empirical CDF of an empty sample"));
    }
    Ok(values.iter().filter(|&&v| v <= x).count() as f64 / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: (f64, f64),
    /// `(major, minor)`.
    pub semi_axes: (f64, f64),
    /// Angle of the major axis from the x axis, radians in `(-π/2, π/2]`.
    pub angle: f64,
}

/// Chi-square quantile with two degrees of freedom.
fn chi2_2dof(level: f64) -> Result<f64> {
    const TABLE: [(f64, f64); 3] = [(0.90, 4.605170185988091), (0.95, 5.991464547107979), (0.99, 9.210340371976182)];
    TABLE
        .iter()
        .find(|(l, _)| (l - level).abs() < 1e-12)
        .map(|&(_, q)| q)
        .ok_or_else(|| Error::invalid(alloc::format!("confidence level must be 0.90, 0.95 or 0.99, got {level}")))
}

/// Confidence ellipse of a 2-D point cloud from its sample covariance.
pub fn confidence_ellipse(points: &[(f64, f64)], level: f64) -> Result<Ellipse> {
    let q = chi2_2dof(level)?;
    if points.len() < 3 {
        return Err(Error::DegenerateInput("confidence ellipse needs at least three points".into()));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::invalid("points must be finite"));
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - cx, y - cy);
        a += dx * dx;
        b += dx * dy;
        c += dy * dy;
    }
    let (a, b, c) = (a / (n - 1.0), b / (n - 1.0), c / (n - 1.0));
    let half_trace = (a + c) / 2.0;
    let disc = libm::sqrt(((a - c) / 2.0) * ((a - c) / 2.0) + b * b);
    let (major, minor) = (half_trace + disc, half_trace - disc);
    if !(minor > 1e-12 * major.max(f64::MIN_POSITIVE)) {
        return Err(Error::DegenerateInput("points are collinear".into()));
    }
    let angle = if b == 0.0 && a >= c { 0.0 } else { 0.5 * libm::atan2(2.0 * b, a - c) };
    Ok(Ellipse { center: (cx, cy), semi_axes: (libm::sqrt(q * major), libm::sqrt(q * minor)), angle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
        assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::DegenerateInput(_))));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman(&[1.0, 5.0, 9.0], &[0.1, 0.2, 7.0]).unwrap(), 1.0);
        assert_eq!(spearman(&[1.0, 5.0, 9.0], &[7.0, 0.2, 0.1]).unwrap(), -1.0);
        // ranks x = [1, 2.5, 2.5, 4], y = [1, 2, 3, 4]
        let rx = [1.0, 2.5, 2.5, 4.0];
        let ry = [1.0, 2.0, 3.0, 4.0];
        let expected = {
            let (mx, my) = (2.5, 2.5);
            let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
            let sxx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
            let syy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
            sxy / libm::sqrt(sxx * syy)
        };
        assert!((spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap() - expected).abs() < 1e-12);
        assert!(matches!(spearman(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn r_squared_examples() {
        assert!((r_squared(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap(), 0.0);
        // y = x fit on (0,0),(1,2),(2,1): slope 0.5, intercept 0.5
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 2.0, 1.0];
        let sse = 0.25 + 1.0 + 0.25;
        let sst = 1.0 + 1.0 + 0.0;
        assert!((r_squared(&xs, &ys).unwrap() - (1.0 - sse / sst)).abs() < 1e-12);
        assert!(matches!(r_squared(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn ecdf_examples() {
        assert!((ecdf_at(&[1.0, 2.0, 3.0], 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let tail = eccdf(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(tail.last().unwrap(), &(3.0, 0.0));
        let dup = [2.0, 1.0, 2.0, 2.0, 5.0, 1.0];
        let f = ecdf(&dup).unwrap();
        assert_eq!(f, vec![(1.0, 2.0 / 6.0), (2.0, 5.0 / 6.0), (5.0, 1.0)]);
        for (x, p) in f {
            assert_eq!(p, ecdf_at(&dup, x).unwrap());
        }
        assert!(ecdf(&[]).is_err());
        assert!(eccdf(&[]).is_err());
    }

    #[test]
    fn ellipse_axis_aligned() {
        // variance 2 along x, 1 along y, zero covariance
        let pts = [(-2.0, 0.0), (2.0, 0.0), (0.0, -1.414213562373095), (0.0, 1.414213562373095)];
        let s = 2.0f64.sqrt();
        let e = confidence_ellipse(&pts, 0.95).unwrap();
        assert!(e.angle.abs() < 1e-12);
        assert!((e.semi_axes.0 / e.semi_axes.1 - s).abs() < 1e-9);
        assert_eq!(e.center, (0.0, 0.0));
    }

    #[test]
    fn ellipse_rotated_and_errors() {
        let pts = [(1.0, 1.0), (-1.0, -1.0), (0.5, -0.5), (-0.5, 0.5)];
        let e = confidence_ellipse(&pts, 0.95).unwrap();
        assert!((e.angle - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(matches!(
            confidence_ellipse(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)], 0.95),
            Err(Error::DegenerateInput(_))
        ));
        assert!(confidence_ellipse(&pts, 0.5).is_err());
        assert!(confidence_ellipse(&pts, 0.99).unwrap().semi_axes.0 > e.semi_axes.0);
    }
}
