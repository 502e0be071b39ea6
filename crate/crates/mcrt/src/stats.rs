//! Small statistical utilities shared by tests and experiment reports.

/// Two-sample Kolmogorov–Smirnov statistic (sup distance of empirical CDFs).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() || j < b.len() {
        // Advance all samples tied at the next value on both sides at once.
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Rotation-minimized Kolmogorov–Smirnov statistic on the circle for a
/// sample of points in `[0, 1)` against the uniform law.
///
/// Cutting the circle at `c` re-anchors both CDFs, turning the statistic
/// into `sup |H - H(c)|` for `H = F_emp - F`; minimizing over `c` gives
/// `(max H - min H) / 2`, i.e. half the Kuiper statistic.
pub fn circle_ks_uniform(sample: &[f64]) -> f64 {
    let mut u: Vec<f64> = sample.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let mut hi = f64::MIN;
    let mut lo = f64::MAX;
    for (k, &x) in u.iter().enumerate() {
        hi = hi.max((k + 1) as f64 / n - x);
        lo = lo.min(k as f64 / n - x);
    }
    // H is 0 at the wrap point.
    hi = hi.max(0.0);
    lo = lo.min(0.0);
    (hi - lo) / 2.0
}

/// Rotation-minimized KS between two discrete distributions on a cycle,
/// given aligned per-atom masses in cyclic order.
pub fn circle_ks_discrete(observed: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let so: f64 = observed.iter().sum();
    let se: f64 = expected.iter().sum();
    let (mut fo, mut fe) = (0.0, 0.0);
    let mut hi = f64::MIN;
    let mut lo = f64::MAX;
    for (o, e) in observed.iter().zip(expected) {
        fo += o / so;
        fe += e / se;
        let h = fo - fe;
        hi = hi.max(h);
        lo = lo.min(h);
    }
    hi = hi.max(0.0);
    lo = lo.min(0.0);
    (hi - lo) / 2.0
}

/// Ordinary (line) KS statistic of a sample in `[0,1]` against uniform,
/// with a fixed cut at 0. Used as a brute-force cross-check.
pub fn line_ks_uniform(sample: &[f64]) -> f64 {
    let mut u: Vec<f64> = sample.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in u.iter().enumerate() {
        d = d.max(((k + 1) as f64 / n - x).abs());
        d = d.max((k as f64 / n - x).abs());
    }
    d
}

/// Exact two-sided Mann–Whitney test for small samples (no ties assumed).
/// Returns the p-value of the observed U under the null of exchangeability.
pub fn mann_whitney_p(x: &[f64], y: &[f64]) -> f64 {
    let (n, m) = (x.len(), y.len());
    assert!(n > 0 && m > 0);
    let mut u = 0u64;
    for &a in x {
        for &b in y {
            if a > b {
                u += 1;
            }
        }
    }
    // Count sequences by dynamic programming: ways[u] over (i, j) prefixes.
    // f(i, j, u) = f(i-1, j, u - j) + f(i, j-1, u); use f64 tallies.
    let umax = n * m;
    let mut table = vec![vec![0.0f64; umax + 1]; m + 1];
    for row in table.iter_mut() {
        row[0] = 1.0; // zero x's placed: U must be 0
    }
    for i in 1..=n {
        let mut next = vec![vec![0.0f64; umax + 1]; m + 1];
        for j in 0..=m {
            for k in 0..=umax {
                let mut v = 0.0;
                if k >= j {
                    v += table[j][k - j]; // place an x above j ys
                }
                if j >= 1 {
                    v += next[j - 1][k];
                }
                next[j][k] = v;
            }
        }
        table = next;
        let _ = i;
    }
    let total: f64 = table[m].iter().sum();
    let cdf_le: f64 = table[m][..=(u as usize)].iter().sum::<f64>() / total;
    let cdf_ge: f64 = table[m][(u as usize)..].iter().sum::<f64>() / total;
    (2.0 * cdf_le.min(cdf_ge)).min(1.0)
}

/// Least-squares line through `(x, y)` points: returns (slope, intercept, r2).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Median of a slice (averages the middle pair for even lengths).
pub fn median(v: &[f64]) -> f64 {
    let mut v = v.to_vec();
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
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn ks_two_sample_basics() {
        let a = [0.1, 0.2, 0.3];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b = [10.0, 11.0, 12.0];
        assert!((ks_two_sample(&a, &b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_ks_matches_min_over_cuts() {
        // Brute-force minimum over cut positions of the ordinary KS.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let n = rng.gen_range(3..24);
            let sample: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let fast = circle_ks_uniform(&sample);
            let mut best = f64::MAX;
            // Cuts just after each sample point and a fine sweep.
            let mut cuts: Vec<f64> = sample.clone();
            for k in 0..2000 {
                cuts.push(k as f64 / 2000.0);
            }
            for &c in &cuts {
                let rotated: Vec<f64> =
                    sample.iter().map(|&x| (x - c).rem_euclid(1.0)).collect();
                best = best.min(line_ks_uniform(&rotated));
            }
            assert!(
                fast <= best + 1e-9 && best <= fast + 2e-3,
                "fast={fast} brute={best}"
            );
        }
    }

    #[test]
    fn circle_ks_uniform_sample_is_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sample: Vec<f64> = (0..20_000).map(|_| rng.gen_range(0.0..1.0)).collect();
        assert!(circle_ks_uniform(&sample) < 0.02);
        // A clustered sample is far from uniform.
        let clustered: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..0.1)).collect();
        assert!(circle_ks_uniform(&clustered) > 0.4);
    }

    #[test]
    fn mann_whitney_identical_and_separated() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.5, 6.5, 7.5, 8.5, 9.5, 10.5];
        let y = [1.5, 2.5, 3.5, 4.5, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        assert!(mann_whitney_p(&x, &y) > 0.5);
        let lo = [1.0, 2.0, 3.0, 4.0, 5.0, 1.1, 2.1, 3.1, 4.1, 5.1];
        let hi = [11.0, 12.0, 13.0, 14.0, 15.0, 11.1, 12.1, 13.1, 14.1, 15.1];
        assert!(mann_whitney_p(&lo, &hi) < 0.01);
    }

    #[test]
    fn linear_fit_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (s, b, r2) = linear_fit(&x, &y);
        assert!((s - 2.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
