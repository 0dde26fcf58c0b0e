//! Small descriptive-statistics helpers shared by the attribute, feature and
//! evaluation code. All spreads are population statistics.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Population standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

/// Sum taken in ascending order, so the result does not depend on the input
/// order.
pub fn sorted_sum(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Order-independent mean, accumulated as offsets from the smallest value so
/// that identical inputs return that value exactly.
pub fn pooled_mean(xs: &[f64]) -> f64 {
    let Some(lo) = xs.iter().copied().min_by(f64::total_cmp) else {
        return 0.0;
    };
    let offsets: Vec<f64> = xs.iter().map(|x| x - lo).collect();
    lo + sorted_sum(&offsets) / xs.len() as f64
}

/// Order-independent population standard deviation.
pub fn pooled_std_dev(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = pooled_mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    (sorted_sum(&sq) / xs.len() as f64).sqrt()
}

/// Root-mean-square difference of two equal-length series.
pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "rmse of unequal lengths");
    if a.is_empty() {
        return 0.0;
    }
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_distribution() {
        let xs = [0.0, 255.0, 0.0, 255.0];
        assert_eq!(mean(&xs), 127.5);
        assert_eq!(std_dev(&xs), 127.5);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn pooled_statistics_ignore_order() {
        let a = [0.1, 1e16, -1e16, 0.2, 0.3];
        let b = [0.3, -1e16, 0.2, 1e16, 0.1];
        assert_eq!(pooled_mean(&a).to_bits(), pooled_mean(&b).to_bits());
        assert_eq!(pooled_std_dev(&a).to_bits(), pooled_std_dev(&b).to_bits());
        assert_eq!(pooled_std_dev(&[0.1; 3]), 0.0);
        assert_eq!(pooled_mean(&[0.1; 3]), 0.1);
    }
}
