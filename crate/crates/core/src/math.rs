//! Small numeric helpers shared by the cost layers.

/// Relative tolerance under which a quotient is treated as an exact integer
/// before taking the ceiling. Factors such as `2.75 / 2.25` are not exactly
/// representable, so `27500 / (2.75 / 2.25)` lands a hair above 22500.
const SNAP_REL: f64 = 1e-9;

/// Ceiling of a non-negative real, snapping values within `SNAP_REL` of an
/// integer onto that integer.
pub fn ceil_count(x: f64) -> u64 {
    debug_assert!(x.is_finite() && x >= 0.0, "ceil_count({x})");
    let r = x.round();
    if (x - r).abs() <= SNAP_REL * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Smallest odd integer `>= d`, never below 3.
pub fn odd_at_least(d: u32) -> u32 {
    let d = d.max(3);
    if d.is_multiple_of(2) {
        d + 1
    } else {
        d
    }
}

pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const DAYS_PER_YEAR: f64 = 365.25;

/// Ordinary least squares on `(x, y)` using centered sums.
///
/// Returns `(slope, intercept, r_squared)`. `None` when fewer than two points
/// or all `x` coincide.
pub(crate) fn ols(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * n {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Some((slope, intercept, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_snaps_representation_error() {
        assert_eq!(ceil_count(27_500.0 / (2.75 / 2.25)), 22_500);
        assert_eq!(ceil_count(10_880.0 / (10_880.0 / 363.0)), 363);
        assert_eq!(ceil_count(1570.796), 1571);
        assert_eq!(ceil_count(0.0), 0);
        assert_eq!(ceil_count(2.000_001), 3);
    }

    #[test]
    fn odd_distance_rounding() {
        assert_eq!(odd_at_least(0), 3);
        assert_eq!(odd_at_least(4), 5);
        assert_eq!(odd_at_least(13), 13);
    }

    #[test]
    fn ols_degenerate() {
        assert!(ols(&[(1.0, 2.0)]).is_none());
        assert!(ols(&[(1.0, 2.0), (1.0, 3.0)]).is_none());
        let (s, i, r2) = ols(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert_eq!((s, i, r2), (1.0, 0.0, 1.0));
    }
}
