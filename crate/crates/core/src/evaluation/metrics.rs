use crate::error::{Error, Result};

fn check_pair(a: &[f64], b: &[f64], min: usize) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < min {
        return Err(Error::TooSmall {
            what: "paired samples",
            min,
            got: a.len(),
        });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("metric input".into()));
    }
    Ok(())
}

fn pearson_unchecked(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Degenerate("correlation of a constant series".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing their average rank.
pub fn midranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson linear correlation, without any nonlinear pre-mapping.
pub fn plcc(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b, 3)?;
    pearson_unchecked(a, b)
}

/// Spearman rank correlation: Pearson correlation of midranks.
pub fn srcc(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b, 3)?;
    pearson_unchecked(&midranks(a), &midranks(b))
}

pub fn rmse(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b, 1)?;
    Ok(crate::stats::rmse(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_cases() {
        assert_eq!(srcc(&[1.0, 2.0, 3.0, 4.0], &[10.0, 20.0, 30.0, 40.0]).unwrap(), 1.0);
        assert!((srcc(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]).unwrap() + 0.5).abs() < 1e-15);
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((plcc(&a, &a.map(|v| 2.0 * v + 1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((plcc(&a, &a.map(|v| -v)).unwrap() + 1.0).abs() < 1e-15);
        // deviations (-1.5, -0.5, 0.5, 1.5) and (-3, -2, -1, 6): 14 / sqrt(5 * 50)
        let r = plcc(&a, &[1.0, 2.0, 3.0, 10.0]).unwrap();
        assert!((r - 14.0 / 250f64.sqrt()).abs() < 1e-15);
        assert!((r - 0.88544).abs() < 5e-6);
        assert!((rmse(&[1.0, 2.0], &[2.0, 4.0]).unwrap() - 2.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(midranks(&[5.0; 3]), vec![2.0; 3]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            srcc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(plcc(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::TooSmall { .. })));
        assert!(matches!(
            rmse(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(rmse(&[], &[]).is_err());
        assert!(plcc(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn bounded_symmetric_and_rank_invariant(
            pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..60),
        ) {
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            prop_assume!(a.iter().any(|v| *v != a[0]) && b.iter().any(|v| *v != b[0]));
            let s = srcc(&a, &b).unwrap();
            let p = plcc(&a, &b).unwrap();
            prop_assert!((-1.0..=1.0).contains(&s) && (-1.0..=1.0).contains(&p));
            prop_assert!((s - srcc(&b, &a).unwrap()).abs() < 1e-12);
            let warped: Vec<f64> = b.iter().map(|v| v.powi(3) + v).collect();
            prop_assert!((s - srcc(&a, &warped).unwrap()).abs() < 1e-12);
            prop_assert_eq!(rmse(&a, &b).unwrap(), rmse(&b, &a).unwrap());
        }
    }
}
