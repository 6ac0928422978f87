//! Validation statistics: logistic regression with Wald inference and
//! correlation screening for rule inputs.
//!
//! The regression reports the same columns the rule weights were judged
//! against — coefficient, standard error, two-sided Wald p-value, and the
//! odds ratio `exp(b)` — with the intercept always included.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

const MAX_IRLS_ITERATIONS: usize = 100;
const CONVERGENCE_TOL: f64 = 1e-8;
/// Coefficients past this magnitude with no ridge penalty indicate the
/// classes are (quasi-)separable.
const SEPARATION_BOUND: f64 = 30.0;

/// Fitted logistic regression. Index 0 is the intercept; predictor `j` sits
/// at index `j + 1`.
#[derive(Debug, Clone)]
pub struct LogitFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub z_values: Vec<f64>,
    /// Two-sided Wald p-values.
    pub p_values: Vec<f64>,
    /// `exp(coefficient)`.
    pub odds_ratios: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn sigmoid(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

fn check_design(columns: &[Vec<f64>], outcome: &[bool]) -> Result<()> {
    for col in columns {
        if col.len() != outcome.len() {
            return Err(Error::LengthMismatch {
                left: col.len(),
                right: outcome.len(),
            });
        }
    }
    if outcome.is_empty() {
        return Err(Error::TooFewObservations { need: 1, got: 0 });
    }
    let positives = outcome.iter().filter(|&&y| y).count();
    if positives == 0 || positives == outcome.len() {
        return Err(Error::NoOutcomeVariation);
    }
    Ok(())
}

fn design_matrix(columns: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let p = columns.len() + 1;
    DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] })
}

/// Ridge-penalized log-likelihood at `beta` (intercept first). The intercept
/// is never penalized.
pub fn log_likelihood(columns: &[Vec<f64>], outcome: &[bool], beta: &[f64], ridge: f64) -> f64 {
    let n = outcome.len();
    let x = design_matrix(columns, n);
    let b = DVector::from_column_slice(beta);
    let eta = &x * &b;
    let mut ll = 0.0;
    for i in 0..n {
        let e = eta[i];
        // log(1 + exp(e)) computed stably
        let log1pexp = if e > 30.0 { e } else { e.exp().ln_1p() };
        ll += if outcome[i] { e } else { 0.0 } - log1pexp;
    }
    let penalty: f64 = beta.iter().skip(1).map(|v| v * v).sum::<f64>() * ridge / 2.0;
    ll - penalty
}

/// Analytic gradient of [`log_likelihood`] with respect to `beta`.
pub fn log_likelihood_gradient(
    columns: &[Vec<f64>],
    outcome: &[bool],
    beta: &[f64],
    ridge: f64,
) -> Vec<f64> {
    let n = outcome.len();
    let x = design_matrix(columns, n);
    let b = DVector::from_column_slice(beta);
    let eta = &x * &b;
    let residual = DVector::from_fn(n, |i, _| {
        (if outcome[i] { 1.0 } else { 0.0 }) - sigmoid(eta[i])
    });
    let mut grad = x.transpose() * residual;
    for j in 1..beta.len() {
        grad[j] -= ridge * beta[j];
    }
    grad.iter().copied().collect()
}

/// Fits a logistic regression by iteratively reweighted least squares
/// (Newton steps on the penalized log-likelihood). `columns` are predictor
/// columns; the intercept is added internally. Standard errors come from the
/// inverse observed information at the optimum.
pub fn logit_fit(columns: &[Vec<f64>], outcome: &[bool], ridge: f64) -> Result<LogitFit> {
    check_design(columns, outcome)?;
    let n = outcome.len();
    let p = columns.len() + 1;
    let x = design_matrix(columns, n);
    let y = DVector::from_fn(n, |i, _| if outcome[i] { 1.0 } else { 0.0 });

    let mut beta = DVector::zeros(p);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=MAX_IRLS_ITERATIONS {
        iterations = iter;
        let eta = &x * &beta;
        let mu = eta.map(sigmoid);
        let weights = mu.map(|m| (m * (1.0 - m)).max(1e-12));

        // information = X' W X + ridge on the non-intercept diagonal
        let mut info = DMatrix::zeros(p, p);
        for i in 0..n {
            let w = weights[i];
            for a in 0..p {
                let xa = x[(i, a)] * w;
                for bcol in a..p {
                    info[(a, bcol)] += xa * x[(i, bcol)];
                }
            }
        }
        for a in 0..p {
            for bcol in 0..a {
                info[(a, bcol)] = info[(bcol, a)];
            }
        }
        for j in 1..p {
            info[(j, j)] += ridge;
        }

        let mut score = x.transpose() * (&y - &mu);
        for j in 1..p {
            score[j] -= ridge * beta[j];
        }

        let chol = info
            .clone()
            .cholesky()
            .ok_or(Error::SingularInformation)?;
        let delta = chol.solve(&score);
        beta += &delta;

        if ridge == 0.0 && beta.amax() > SEPARATION_BOUND {
            return Err(Error::PerfectSeparation);
        }
        if delta.amax() < CONVERGENCE_TOL {
            converged = true;
            break;
        }
    }

    // observed information at the optimum, for the standard errors
    let eta = &x * &beta;
    let mu = eta.map(sigmoid);
    let weights = mu.map(|m| (m * (1.0 - m)).max(1e-12));
    let mut info: DMatrix<f64> = DMatrix::zeros(p, p);
    for i in 0..n {
        let w = weights[i];
        for a in 0..p {
            let xa = x[(i, a)] * w;
            for bcol in a..p {
                info[(a, bcol)] += xa * x[(i, bcol)];
            }
        }
    }
    for a in 0..p {
        for bcol in 0..a {
            info[(a, bcol)] = info[(bcol, a)];
        }
    }
    for j in 1..p {
        info[(j, j)] += ridge;
    }
    let covariance = info
        .cholesky()
        .ok_or(Error::SingularInformation)?
        .inverse();

    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut std_errors = Vec::with_capacity(p);
    let mut z_values = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    let mut odds_ratios = Vec::with_capacity(p);
    for j in 0..p {
        let se = covariance[(j, j)].sqrt();
        let z = beta[j] / se;
        std_errors.push(se);
        z_values.push(z);
        p_values.push(2.0 * (1.0 - normal.cdf(z.abs())));
        odds_ratios.push(beta[j].exp());
    }

    Ok(LogitFit {
        coefficients: beta.iter().copied().collect(),
        std_errors,
        z_values,
        p_values,
        odds_ratios,
        converged,
        iterations,
    })
}

/// Product-moment correlation, single-pass co-moment accumulation.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations {
            need: 2,
            got: x.len(),
        });
    }

    let mut mean_x = 0.0;
    let mut mean_y = 0.0;
    let mut m2x = 0.0;
    let mut m2y = 0.0;
    let mut cov = 0.0;
    for (i, (&xi, &yi)) in x.iter().zip(y.iter()).enumerate() {
        let k = (i + 1) as f64;
        let dx = xi - mean_x;
        mean_x += dx / k;
        let dy = yi - mean_y;
        mean_y += dy / k;
        m2x += dx * (xi - mean_x);
        m2y += dy * (yi - mean_y);
        cov += dx * (yi - mean_y);
    }
    if m2x == 0.0 || m2y == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / (m2x.sqrt() * m2y.sqrt()))
}

/// Rank correlation: Pearson correlation of average-tied ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson_r(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Severity of a pairwise predictor correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollinearityLevel {
    /// |r| > 0.5 — the effect of one predictor may shadow the other.
    Moderate,
    /// |r| > 0.7 — coefficients are unreliable.
    Severe,
}

#[derive(Debug, Clone)]
pub struct CollinearityFinding {
    pub first: usize,
    pub second: usize,
    pub r: f64,
    pub level: CollinearityLevel,
}

/// Screens predictor columns pairwise. Constant columns cannot correlate and
/// are skipped.
pub fn collinearity_screen(columns: &[Vec<f64>]) -> Vec<CollinearityFinding> {
    let mut findings = Vec::new();
    for i in 0..columns.len() {
        for j in (i + 1)..columns.len() {
            let r = match pearson_r(&columns[i], &columns[j]) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let level = if r.abs() > 0.7 {
                CollinearityLevel::Severe
            } else if r.abs() > 0.5 {
                CollinearityLevel::Moderate
            } else {
                continue;
            };
            findings.push(CollinearityFinding {
                first: i,
                second: j,
                r,
                level,
            });
        }
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn odds_ratio_is_exp_of_coefficient() {
        assert!((1.374f64.exp() - 3.951).abs() < 0.001);
        assert!((0.0f64.exp() - 1.0).abs() < 1e-15);
    }

    fn planted_data(
        rng: &mut ChaCha8Rng,
        n: usize,
        intercept: f64,
        slopes: &[f64],
    ) -> (Vec<Vec<f64>>, Vec<bool>) {
        let p = slopes.len();
        let mut columns = vec![Vec::with_capacity(n); p];
        let mut outcome = Vec::with_capacity(n);
        for _ in 0..n {
            let mut eta = intercept;
            for (j, slope) in slopes.iter().enumerate() {
                let v: f64 = rng.random_range(-2.0..2.0);
                columns[j].push(v);
                eta += slope * v;
            }
            outcome.push(rng.random::<f64>() < sigmoid(eta));
        }
        (columns, outcome)
    }

    /// Plain gradient-ascent fit, independent of the IRLS path.
    fn gradient_descent_oracle(columns: &[Vec<f64>], outcome: &[bool], p: usize) -> Vec<f64> {
        let mut beta = vec![0.0; p];
        let mut step = 1.0 / outcome.len() as f64;
        let mut ll = log_likelihood(columns, outcome, &beta, 0.0);
        for _ in 0..20_000 {
            let grad = log_likelihood_gradient(columns, outcome, &beta, 0.0);
            let candidate: Vec<f64> = beta.iter().zip(&grad).map(|(b, g)| b + step * g).collect();
            let cand_ll = log_likelihood(columns, outcome, &candidate, 0.0);
            if cand_ll > ll {
                beta = candidate;
                ll = cand_ll;
                step *= 1.05;
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
        beta
    }

    #[test]
    fn recovers_planted_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let (columns, outcome) = planted_data(&mut rng, 20_000, -2.0, &[0.8]);
        let fit = logit_fit(&columns, &outcome, 0.0).unwrap();
        assert!(fit.converged);
        assert!(
            (fit.coefficients[1] - 0.8).abs() < 0.1,
            "slope {} not within 0.1 of 0.8",
            fit.coefficients[1]
        );
        assert!((fit.coefficients[0] - (-2.0)).abs() < 0.15);

        let oracle = gradient_descent_oracle(&columns, &outcome, 2);
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-4, "irls {a} vs gradient oracle {b}");
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..10 {
            let (columns, outcome) = planted_data(&mut rng, 300, -0.5, &[0.7, -0.4]);
            let beta: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ridge = if rng.random::<bool>() { 0.0 } else { 0.3 };
            let analytic = log_likelihood_gradient(&columns, &outcome, &beta, ridge);
            let h = 1e-5;
            for j in 0..beta.len() {
                let mut hi = beta.clone();
                hi[j] += h;
                let mut lo = beta.clone();
                lo[j] -= h;
                let fd = (log_likelihood(&columns, &outcome, &hi, ridge)
                    - log_likelihood(&columns, &outcome, &lo, ridge))
                    / (2.0 * h);
                let scale = analytic[j].abs().max(fd.abs()).max(1.0);
                assert!(
                    (analytic[j] - fd).abs() / scale < 1e-4,
                    "component {j}: analytic {} fd {}",
                    analytic[j],
                    fd
                );
            }
        }
    }

    #[test]
    fn single_class_outcome_is_rejected() {
        let columns = vec![vec![0.0, 1.0, 2.0]];
        let outcome = vec![true, true, true];
        assert!(matches!(
            logit_fit(&columns, &outcome, 0.0),
            Err(Error::NoOutcomeVariation)
        ));
    }

    #[test]
    fn perfect_separation_is_detected() {
        // outcome exactly determined by the predictor sign
        let n = 200;
        let columns: Vec<Vec<f64>> = vec![(0..n).map(|i| i as f64 / n as f64 - 0.5).collect()];
        let outcome: Vec<bool> = columns[0].iter().map(|&v| v > 0.0).collect();
        assert!(matches!(
            logit_fit(&columns, &outcome, 0.0),
            Err(Error::PerfectSeparation)
        ));
        // ridge regularizes the same data into a finite fit
        let fit = logit_fit(&columns, &outcome, 1.0).unwrap();
        assert!(fit.coefficients[1].is_finite());
    }

    #[test]
    fn affine_rescaling_rescales_coefficient_and_keeps_p_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        let (columns, outcome) = planted_data(&mut rng, 4_000, -1.0, &[0.6, 0.3]);
        let fit = logit_fit(&columns, &outcome, 0.0).unwrap();

        let a = 4.0;
        let b = 2.5;
        let mut scaled = columns.clone();
        scaled[0] = scaled[0].iter().map(|v| a * v + b).collect();
        let fit2 = logit_fit(&scaled, &outcome, 0.0).unwrap();

        assert!((fit2.coefficients[1] - fit.coefficients[1] / a).abs() < 1e-6);
        assert!((fit2.p_values[1] - fit.p_values[1]).abs() < 1e-6);
        // untouched predictor is unchanged
        assert!((fit2.coefficients[2] - fit.coefficients[2]).abs() < 1e-6);
    }

    #[test]
    fn p_values_decrease_in_z_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        let (columns, outcome) = planted_data(&mut rng, 3_000, -1.0, &[0.9, 0.2, -0.5]);
        let fit = logit_fit(&columns, &outcome, 0.0).unwrap();
        let mut pairs: Vec<(f64, f64)> = fit
            .z_values
            .iter()
            .zip(&fit.p_values)
            .map(|(&z, &p)| (z.abs(), p))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            assert!(w[0].1 >= w[1].1 - 1e-12);
        }
    }

    #[test]
    fn pearson_identity_and_negation() {
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_r(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson_r(&x, &y).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_matches_two_pass_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        let x: Vec<f64> = (0..1000).map(|_| rng.random_range(-10.0..10.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 0.3 * v + rng.random_range(-5.0..5.0))
            .collect();

        // two-pass oracle: explicit means, then explicit moments
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
        let oracle = cov / (vx.sqrt() * vy.sqrt());

        assert!((pearson_r(&x, &y).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn pearson_rejects_zero_variance() {
        let x = vec![1.0, 1.0, 1.0];
        let y = vec![1.0, 2.0, 3.0];
        assert!(matches!(pearson_r(&x, &y), Err(Error::ZeroVariance)));
        assert!(matches!(
            pearson_r(&[1.0], &[2.0]),
            Err(Error::TooFewObservations { .. })
        ));
    }

    #[test]
    fn spearman_is_rank_based() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1.0, 10.0, 100.0, 1000.0]; // monotone, nonlinear
        assert!((spearman_rho(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let z = vec![4.0, 3.0, 2.0, 1.0];
        assert!((spearman_rho(&x, &z).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinearity_screen_flags_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        let base: Vec<f64> = (0..500).map(|_| rng.random_range(-1.0..1.0)).collect();
        let strong: Vec<f64> = base
            .iter()
            .map(|v| v + rng.random_range(-0.1..0.1))
            .collect();
        let moderate: Vec<f64> = base
            .iter()
            .map(|v| v + rng.random_range(-1.0..1.0))
            .collect();
        let independent: Vec<f64> = (0..500).map(|_| rng.random_range(-1.0..1.0)).collect();
        let constant = vec![1.0; 500];

        let findings = collinearity_screen(&[base, strong, moderate, independent, constant]);
        let severe = findings
            .iter()
            .find(|f| f.first == 0 && f.second == 1)
            .expect("strong pair flagged");
        assert_eq!(severe.level, CollinearityLevel::Severe);
        assert!(findings.iter().all(|f| f.second != 4 && f.first != 4));
    }
}
