//! Cross-check suite: each criterion compares independent routes (or a
//! route and a closed form) at a pinned tolerance.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    cf_fixed_point_residual, e_k_eval, g_i_eval, h_ij_eval, normal_cf_residual, sigma_quadrature,
    theta_quadrature, vacancy_mean_constant, QuadratureRule, DEFAULT_INNER_NODES, DEFAULT_NODES,
};
use crate::error::Result;
use crate::exact::{pmf_direct, pmf_split, DEFAULT_DIRECT_CAP, DEFAULT_SPLIT_CAP};
use crate::model::ProcessParams;
use crate::moments::{
    beta_limit_check, mean_drift_bound, mean_recursion, normal_moment, projected_moment_recursion,
    sigma_extrapolate, theta_extrapolate,
};
use crate::simulator::{simulate_batch, simulate_histogram, SimConfig};
use crate::stats::goodness_of_fit;

pub const ALL_CRITERIA: [u8; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured - target| <= tolerance`
    Within,
    /// `measured < target`
    Below,
    /// `measured > target`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl Check {
    pub fn within(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            target,
            tolerance,
            comparison: Comparison::Within,
            passed: (measured - target).abs() <= tolerance,
        }
    }

    pub fn below(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            target: bound,
            tolerance: 0.0,
            comparison: Comparison::Below,
            passed: measured < bound,
        }
    }

    pub fn above(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            target: bound,
            tolerance: 0.0,
            comparison: Comparison::Above,
            passed: measured > bound,
        }
    }

    pub fn holds(label: impl Into<String>, ok: bool) -> Self {
        Self::within(label, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub passed: bool,
}

impl CriterionOutcome {
    /// One-line summary naming the failing (or worst) check.
    pub fn summary(&self) -> String {
        let shown = self
            .checks
            .iter()
            .find(|c| !c.passed)
            .or(self.checks.first());
        let detail = shown
            .map(|c| match c.comparison {
                Comparison::Within => format!(
                    "{}: measured {:.12e}, target {:.12e}, tol {:.1e}",
                    c.label, c.measured, c.target, c.tolerance
                ),
                Comparison::Below => format!(
                    "{}: measured {:.6e} < {:.1e}",
                    c.label, c.measured, c.target
                ),
                Comparison::Above => format!(
                    "{}: measured {:.6e} > {:.1e}",
                    c.label, c.measured, c.target
                ),
            })
            .unwrap_or_default();
        format!(
            "[{}] criterion {:>2} {} ({} checks, {:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks.len(),
            self.seconds,
            detail
        )
    }
}

fn outcome(
    id: u8,
    name: &str,
    start: Instant,
    budget: Option<f64>,
    mut checks: Vec<Check>,
) -> CriterionOutcome {
    let seconds = start.elapsed().as_secs_f64();
    if let Some(budget) = budget {
        checks.push(Check::below("runtime seconds", seconds, budget));
    }
    CriterionOutcome {
        id,
        name: name.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        seconds,
    }
}

fn rules() -> Result<(QuadratureRule, QuadratureRule)> {
    Ok((
        QuadratureRule::gauss_legendre(DEFAULT_NODES)?,
        QuadratureRule::gauss_legendre(DEFAULT_INNER_NODES)?,
    ))
}

pub fn run_criterion(id: u8) -> Result<CriterionOutcome> {
    match id {
        1 => mean_constant_k2(),
        2 => variance_constant_k2(),
        3 => oracle_equivalence(),
        4 => simulator_fit(),
        5 => mean_convergence_k3(),
        6 => clt_by_moments(),
        7 => lemma_limit(),
        8 => k2_closed_forms(),
        9 => vacancy_identity(),
        10 => fixed_point(),
        11 => drift_bound(),
        12 => conservation(),
        other => Err(crate::Error::InvalidArgument(format!(
            "unknown criterion {other}"
        ))),
    }
}

pub fn run_all(ids: &[u8]) -> Result<Vec<CriterionOutcome>> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}

pub fn mean_constant_k2() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let target = (-2f64).exp();
    let (outer, _) = rules()?;
    let quad = theta_quadrature(2, &outer)?[0];
    let extra = theta_extrapolate(2, 200)?.theta[0];
    Ok(outcome(
        1,
        "k=2 mean constant theta_1 = e^-2",
        start,
        Some(1.0),
        vec![
            Check::within("theta_1 quadrature", quad, target, 1e-10),
            Check::within("theta_1 extrapolation N=200", extra, target, 1e-8),
        ],
    ))
}

pub fn variance_constant_k2() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let target = 4.0 * (-4f64).exp();
    let (outer, inner) = rules()?;
    let quad = sigma_quadrature(2, &outer, &inner)?.sigma[0][0];
    let extra = sigma_extrapolate(2, 200)?.sigma[0][0];
    Ok(outcome(
        2,
        "k=2 variance constant sigma_11 = 4e^-4",
        start,
        Some(5.0),
        vec![
            Check::within("sigma_11 quadrature", quad, target, 1e-8),
            Check::within("sigma_11 extrapolation N=200", extra, target, 1e-8),
        ],
    ))
}

pub fn oracle_equivalence() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut cases = 0usize;
    for k in 2..=4 {
        for n in 0..=12 {
            let params = ProcessParams::new(n, k)?;
            let split = pmf_split(params, DEFAULT_SPLIT_CAP)?;
            let direct = pmf_direct(params, DEFAULT_DIRECT_CAP)?;
            cases += 1;
            if split != direct {
                mismatches += 1;
            }
        }
    }
    Ok(outcome(
        3,
        "split recursion == direct enumeration, n<=12, k in 2..=4",
        start,
        Some(30.0),
        vec![
            Check::within("mismatching (n,k) pairs", mismatches as f64, 0.0, 0.0),
            Check::within("cases compared", cases as f64, 39.0, 0.0),
        ],
    ))
}

pub fn simulator_fit() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (idx, (n, k)) in [(10, 2), (10, 3), (12, 4)].into_iter().enumerate() {
        let params = ProcessParams::new(n, k)?;
        let exact = pmf_split(params, DEFAULT_SPLIT_CAP)?.to_f64();
        let hist = simulate_histogram(params, 1_000_000, 20_240_000 + idx as u64);
        let fit = goodness_of_fit(&hist, &exact);
        checks.push(Check::below(
            format!("TV distance {params}"),
            fit.tv_distance,
            5e-3,
        ));
        checks.push(Check::above(
            format!("chi-square p-value {params}"),
            fit.p_value,
            1e-3,
        ));
    }
    Ok(outcome(
        4,
        "simulator matches exact law (10^6 replications)",
        start,
        Some(60.0),
        checks,
    ))
}

pub fn mean_convergence_k3() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let table = mean_recursion::<f64>(3, 300)?;
    let reference: Vec<f64> = table.row(300).iter().map(|g| g / 303.0).collect();
    let worst = (60..=300)
        .flat_map(|n| {
            let reference = &reference;
            table
                .row(n)
                .iter()
                .zip(reference)
                .map(move |(g, r)| (g / (n + 3) as f64 - r).abs())
        })
        .fold(0.0, f64::max);
    Ok(outcome(
        5,
        "k=3 mean ratios settled for n >= 60",
        start,
        Some(1.0),
        vec![Check::below("max |g_n/(n+3) - g_300/303|", worst, 1e-8)],
    ))
}

pub fn clt_by_moments() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for k in [2, 3] {
        let table = projected_moment_recursion(&vec![1.0; k - 1], k, 400, 6)?;
        let skew = table.standardized_ratio(400, 3).abs();
        let kurt = table.standardized_ratio(400, 4);
        let sixth = table.standardized_ratio(400, 6);
        checks.push(Check::below(
            format!("k={k} |mu3|/sigma^3 at n=400"),
            skew,
            0.1,
        ));
        checks.push(Check::within(
            format!("k={k} mu4/sigma^4 at n=400"),
            kurt,
            3.0,
            0.15,
        ));
        checks.push(Check::within(
            format!("k={k} mu6/sigma^6 at n=400"),
            sixth,
            15.0,
            1.0,
        ));
        for m in [3, 4, 6] {
            let dev: Vec<f64> = [100, 200, 400]
                .iter()
                .map(|&n| (table.standardized_ratio(n, m) - normal_moment(m, 1.0)).abs())
                .collect();
            checks.push(Check::holds(
                format!("k={k} order {m} deviation decreasing over n=100,200,400"),
                dev[0] > dev[1] && dev[1] > dev[2],
            ));
        }
    }
    Ok(outcome(
        6,
        "standardized moments approach normal ones",
        start,
        Some(30.0),
        checks,
    ))
}

pub fn lemma_limit() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let b = beta_limit_check(1.0, 2.0, 2, 100_000)?;
    Ok(outcome(
        7,
        "a_n -> alpha (beta+1)/(beta-1) for alpha=1, beta=2",
        start,
        Some(1.0),
        vec![Check::within("a_N at N=1e5", b.a_n, 3.0, 1e-3)],
    ))
}

/// `G_1` and `H_11` for `k = 2` in closed form.
pub fn g1_closed_form_k2(z: f64) -> f64 {
    (-2.0 * z).exp() / (1.0 - z).powi(2) - 1.0
}

pub fn h11_closed_form_k2(z: f64) -> f64 {
    let w = 1.0 - z;
    z * w + (1.0 - 2.0 / w + 1.0 / (w * w)) * (-4.0 * z).exp()
        - (-4f64).exp()
            * (1.0 / (w * w) + 2.0 / w + 1.0 + 29.0 * w - 49.0 * w * w + 16.0 * w.powi(3))
}

pub fn k2_closed_forms() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let (outer, inner) = rules()?;
    let theta = theta_quadrature(2, &outer)?;
    let (mut g_err, mut h_err) = (0.0f64, 0.0f64);
    for i in 1..=20 {
        let z = i as f64 / 21.0;
        g_err = g_err.max((g_i_eval(z, 1, 2, &inner)? - g1_closed_form_k2(z)).abs());
        h_err =
            h_err.max((h_ij_eval(z, 1, 1, 2, &theta, &inner)?.value - h11_closed_form_k2(z)).abs());
    }
    Ok(outcome(
        8,
        "k=2 closed forms of G_1 and H_11 at 20 interior points",
        start,
        None,
        vec![
            Check::below("max |G_1 - closed form|", g_err, 1e-9),
            Check::below("max |H_11 - closed form|", h_err, 1e-9),
        ],
    ))
}

pub fn vacancy_identity() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let (outer, _) = rules()?;
    let mut checks = Vec::new();
    for k in 2..=6 {
        let theta = theta_quadrature(k, &outer)?;
        let weighted: f64 = theta
            .iter()
            .enumerate()
            .map(|(j, t)| (j + 1) as f64 * t)
            .sum();
        let integral = outer.integrate(0.0, 1.0, |y| e_k_eval(y, k));
        let closed = 1.0 - k as f64 * integral / e_k_eval(1.0, k);
        checks.push(Check::within(
            format!("k={k} sum_j j theta_j"),
            weighted,
            closed,
            1e-10,
        ));
        let constant = vacancy_mean_constant(k, &outer)?;
        let means = mean_recursion::<f64>(k, 300)?;
        let ratio = means.vacancy_mean(300) / (300 + k) as f64;
        checks.push(Check::within(
            format!("k={k} E V_300 / (300+k)"),
            ratio,
            constant,
            1e-8,
        ));
    }
    Ok(outcome(
        9,
        "mean vacant fraction identity",
        start,
        None,
        checks,
    ))
}

pub fn fixed_point() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let rule = QuadratureRule::gauss_legendre(DEFAULT_INNER_NODES)?;
    let grid: Vec<f64> = (0..=200).map(|i| -5.0 + i as f64 * 0.05).collect();
    let normal = normal_cf_residual(1.0, &grid, &rule)?;
    let laplace = cf_fixed_point_residual(|t: f64| (-t.abs()).exp(), &grid, &rule);
    Ok(outcome(
        10,
        "normal characteristic function solves the fixed-point equation",
        start,
        None,
        vec![
            Check::below("normal residual on [-5, 5]", normal, 1e-12),
            Check::above("exp(-|t|) residual on [-5, 5]", laplace, 1e-3),
        ],
    ))
}

pub fn drift_bound() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for k in [2, 3] {
        let profile = mean_drift_bound(&mean_recursion::<f64>(k, 1000)?);
        checks.push(Check::holds(
            format!("k={k} running sup of drift flat over 500..=1000"),
            profile.tail_is_non_increasing(500, 1e-12),
        ));
        checks.push(Check::holds(
            format!("k={k} sup drift N=1000 finite"),
            profile.sup().is_finite(),
        ));
    }
    Ok(outcome(11, "bounded mean drift", start, None, checks))
}

/// `(n, k)` sweep simulated for the conservation check, 10^6 replications each.
pub const CONSERVATION_SWEEP: [(usize, usize); 10] = [
    (50, 2),
    (101, 2),
    (200, 2),
    (37, 3),
    (100, 3),
    (64, 4),
    (99, 5),
    (80, 6),
    (15, 7),
    (120, 8),
];

pub fn conservation() -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut invalid = 0;
    let mut total = 0;
    for (idx, &(n, k)) in CONSERVATION_SWEEP.iter().enumerate() {
        let cfg = SimConfig::new(ProcessParams::new(n, k)?, 1_000_000, 7_000 + idx as u64);
        let stats = simulate_batch(&cfg)?;
        invalid += stats.invalid_states;
        total += stats.replications;
    }
    Ok(outcome(
        12,
        "every simulated terminal state is valid (10^7 replications)",
        start,
        None,
        vec![
            Check::within("invalid states", invalid as f64, 0.0, 0.0),
            Check::within("replications", total as f64, 1e7, 0.0),
        ],
    ))
}
