use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::output::Payload;
use super::{Method, RunConfig};
use crate::asymptotics::{
    compare_routes, e_k_eval, AsymptoticConstants, QuadratureRule, RouteComparison,
};
use crate::error::{Error, Result};
use crate::exact::{pmf_direct, pmf_split, Pmf, PmfEntry, DEFAULT_DIRECT_CAP, DEFAULT_SPLIT_CAP};
use crate::model::ProcessParams;
use crate::moments::{
    cross_moment_recursion, mean_recursion, projected_moment_recursion, Scalar, ThetaEstimate,
    EXACT_CAP, STABILIZATION_TOL,
};
use crate::simulator::{simulate_batch, SimConfig};
use crate::verify::{run_criterion, CriterionOutcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactComparison {
    pub other_method: Method,
    pub tv_numerator: String,
    pub tv_denominator: String,
    pub tv_distance: f64,
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactPayload {
    pub params: ProcessParams,
    pub method: Method,
    pub support_size: usize,
    pub total_mass: String,
    pub support_valid: bool,
    pub entries: Vec<PmfEntry>,
    pub comparison: Option<ExactComparison>,
}

/// Floating value, or an exact rational written `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MomentValue {
    Float(f64),
    Exact(String),
}

/// One table cell. `mean`: `i` is the spacing length. `covariance`: `(i, j)`.
/// `central`, `standardized`, `ratio`: `i` is the order `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub table: String,
    pub n: usize,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub value: MomentValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsPayload {
    pub k: usize,
    pub max_n: usize,
    pub max_order: usize,
    pub projection: Vec<f64>,
    pub exact: bool,
    pub rows: Vec<MomentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptPayload {
    pub k: usize,
    pub quadrature: AsymptoticConstants,
    pub extrapolation: AsymptoticConstants,
    pub comparison: RouteComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub criteria: Vec<CriterionOutcome>,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub k: usize,
    pub e_k_at_1: f64,
    pub theta: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub vacancy_mean_const: f64,
    pub theta_route_diff: f64,
    pub sigma_route_diff: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub quantity: String,
    pub computed: f64,
    pub closed_form: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub k_max: usize,
    pub rows: Vec<ReportRow>,
    pub closed_forms_k2: Vec<ClosedFormCheck>,
}

pub(super) fn dispatch(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    match rc.subcommand.as_str() {
        "simulate" => simulate(rc),
        "exact" => exact(rc),
        "moments" => moments(rc),
        "asympt" => asympt(rc),
        "verify" => verify(rc),
        "report" => report(rc),
        other => Err(Error::InvalidArgument(format!(
            "unknown subcommand {other}"
        ))),
    }
}

fn params(rc: &RunConfig) -> Result<ProcessParams> {
    ProcessParams::new(rc.n.unwrap_or(0), rc.k.unwrap_or(0))
}

fn simulate(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let mut config = SimConfig::new(
        params(rc)?,
        rc.replications.unwrap_or(10_000),
        rc.seed.unwrap_or(0),
    );
    config.projection = rc.projection.clone();
    config.max_order = rc.max_order.unwrap_or(config.max_order);
    let stats = simulate_batch(&config)?;
    let diagnostics = json!({ "invalid_states": stats.invalid_states });
    let ok = stats.invalid_states == 0;
    Ok((Payload::Simulate(stats), diagnostics, ok))
}

fn run_method(method: Method, params: ProcessParams, cap: usize) -> Result<Pmf> {
    match method {
        Method::Split => pmf_split(params, cap),
        Method::Direct => pmf_direct(params, cap),
    }
}

fn exact(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let params = params(rc)?;
    let method = rc.method.unwrap_or_default();
    let pmf = run_method(method, params, rc.cap.unwrap_or(DEFAULT_SPLIT_CAP))?;
    let comparison = if rc.compare == Some(true) {
        let (other, cap) = match method {
            Method::Split => (Method::Direct, DEFAULT_DIRECT_CAP),
            Method::Direct => (Method::Split, DEFAULT_SPLIT_CAP),
        };
        let tv = pmf.total_variation(&run_method(other, params, cap)?);
        Some(ExactComparison {
            other_method: other,
            tv_numerator: tv.numer().to_string(),
            tv_denominator: tv.denom().to_string(),
            tv_distance: tv.to_f64_lossy(),
            identical: tv == BigRational::from_integer(0.into()),
        })
    } else {
        None
    };
    let total = pmf.total_mass();
    let support_valid = pmf.support_is_valid();
    let ok = support_valid && total.is_one() && comparison.as_ref().is_none_or(|c| c.identical);
    let diagnostics =
        json!({ "total_mass_is_one": total.is_one(), "support_valid": support_valid });
    let payload = ExactPayload {
        params,
        method,
        support_size: pmf.len(),
        total_mass: total.to_string(),
        support_valid,
        entries: pmf.entries(),
        comparison,
    };
    Ok((Payload::Exact(payload), diagnostics, ok))
}

trait Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn table_rows<T: Scalar, V: Fn(&T) -> MomentValue>(
    k: usize,
    n_max: usize,
    c: &[T],
    max_order: usize,
    value: V,
    with_ratios: bool,
) -> Result<Vec<MomentRow>> {
    let means = mean_recursion::<T>(k, n_max)?;
    let cross = cross_moment_recursion(&means);
    let proj = projected_moment_recursion(c, k, n_max, max_order)?;
    let mut rows = Vec::new();
    let row = |table: &str, n, i, j, value| MomentRow {
        table: table.to_string(),
        n,
        i,
        j,
        value,
    };
    for n in 0..=n_max {
        for (i, g) in means.row(n).iter().enumerate() {
            rows.push(row("mean", n, Some(i + 1), None, value(g)));
        }
        for (i, r) in cross.covariance(n).iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                rows.push(row("covariance", n, Some(i + 1), Some(j + 1), value(v)));
            }
        }
        for m in 2..=max_order {
            rows.push(row("central", n, Some(m), None, value(&proj.central(n)[m])));
        }
        if with_ratios {
            for m in 2..=max_order {
                rows.push(row(
                    "standardized",
                    n,
                    Some(m),
                    None,
                    MomentValue::Float(proj.standardized(n, m)),
                ));
            }
            for m in 3..=max_order {
                let r = proj.standardized_ratio(n, m);
                if r.is_finite() {
                    rows.push(row("ratio", n, Some(m), None, MomentValue::Float(r)));
                }
            }
        }
    }
    Ok(rows)
}

fn moments(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let k = rc.k.unwrap_or(0);
    let n_max = rc.max_n.unwrap_or(200);
    let max_order = rc.max_order.unwrap_or(crate::moments::DEFAULT_MAX_ORDER);
    let projection = rc
        .projection
        .clone()
        .unwrap_or_else(|| vec![1.0; k.saturating_sub(1)]);
    let exact = rc.exact == Some(true);
    let rows = if exact {
        if n_max > EXACT_CAP {
            return Err(Error::CapExceeded {
                what: "exact moment tables",
                n: n_max,
                cap: EXACT_CAP,
            });
        }
        let c = projection
            .iter()
            .map(|&x| {
                BigRational::from_float(x).ok_or_else(|| {
                    Error::InvalidArgument(format!("projection entry {x} is not finite"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        table_rows(
            k,
            n_max,
            &c,
            max_order,
            |v: &BigRational| MomentValue::Exact(v.to_string()),
            false,
        )?
    } else {
        table_rows(
            k,
            n_max,
            &projection,
            max_order,
            |v: &f64| MomentValue::Float(*v),
            true,
        )?
    };
    let means = mean_recursion::<f64>(k, n_max)?;
    let gap = ThetaEstimate::from_table(&means, STABILIZATION_TOL)
        .ok()
        .map(|t| t.stabilization_gap);
    let diagnostics = json!({
        "rows": rows.len(),
        "vacancy_mean_at_max_n": means.vacancy_mean(n_max),
        "theta_stabilization_gap": gap,
    });
    let payload = MomentsPayload {
        k,
        max_n: n_max,
        max_order,
        projection,
        exact,
        rows,
    };
    Ok((Payload::Moments(payload), diagnostics, true))
}

fn rules(rc: &RunConfig) -> Result<(QuadratureRule, QuadratureRule)> {
    Ok((
        QuadratureRule::gauss_legendre(rc.nodes.unwrap_or(crate::asymptotics::DEFAULT_NODES))?,
        QuadratureRule::gauss_legendre(
            rc.inner_nodes
                .unwrap_or(crate::asymptotics::DEFAULT_INNER_NODES),
        )?,
    ))
}

fn both_routes(
    k: usize,
    outer: &QuadratureRule,
    inner: &QuadratureRule,
    rc: &RunConfig,
) -> Result<(AsymptoticConstants, AsymptoticConstants, RouteComparison)> {
    let quadrature = AsymptoticConstants::by_quadrature(k, outer, inner)?;
    let extrapolation = AsymptoticConstants::by_extrapolation_with_tol(
        k,
        rc.max_n.unwrap_or(200),
        rc.stabilization_tol.unwrap_or(STABILIZATION_TOL),
    )?;
    let comparison = compare_routes(&quadrature, &extrapolation);
    Ok((quadrature, extrapolation, comparison))
}

fn asympt(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let k = rc.k.unwrap_or(0);
    let (outer, inner) = rules(rc)?;
    let (quadrature, extrapolation, comparison) = both_routes(k, &outer, &inner, rc)?;
    let stabilized = extrapolation.diagnostics.stabilized.unwrap_or(false);
    let degraded = quadrature.diagnostics.accuracy_degraded;
    let diagnostics = json!({
        "routes_agree": comparison.agree,
        "extrapolation_stabilized": stabilized,
        "quadrature_accuracy_degraded": degraded,
    });
    let ok = comparison.agree && stabilized;
    let payload = AsymptPayload {
        k,
        quadrature,
        extrapolation,
        comparison,
    };
    Ok((Payload::Asympt(payload), diagnostics, ok))
}

fn verify(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let ids = rc
        .only
        .clone()
        .unwrap_or_else(|| crate::verify::ALL_CRITERIA.to_vec());
    let mut criteria = Vec::with_capacity(ids.len());
    for id in ids {
        let outcome = run_criterion(id)?;
        eprintln!("{}", outcome.summary());
        criteria.push(outcome);
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    let failed = criteria.len() - passed;
    let seconds: Vec<f64> = criteria.iter().map(|c| c.seconds).collect();
    let diagnostics = json!({ "seconds": seconds });
    Ok((
        Payload::Verify(VerifyPayload {
            criteria,
            passed,
            failed,
        }),
        diagnostics,
        failed == 0,
    ))
}

fn closed_form(quantity: &str, computed: f64, closed_form: f64, tolerance: f64) -> ClosedFormCheck {
    let abs_error = (computed - closed_form).abs();
    ClosedFormCheck {
        quantity: quantity.to_string(),
        computed,
        closed_form,
        abs_error,
        tolerance,
        passed: abs_error <= tolerance,
    }
}

fn report(rc: &RunConfig) -> Result<(Payload, Value, bool)> {
    let k_max = rc.k_max.unwrap_or(crate::asymptotics::DEFAULT_MAX_K);
    if k_max < 2 {
        return Err(Error::InvalidArgument("--k-max must be at least 2".into()));
    }
    let (outer, inner) = rules(rc)?;
    let rows = (2..=k_max)
        .into_par_iter()
        .map(|k| {
            let (q, _, cmp) = both_routes(k, &outer, &inner, rc)?;
            Ok(ReportRow {
                k,
                e_k_at_1: e_k_eval(1.0, k),
                theta: q.theta,
                sigma: q.sigma,
                vacancy_mean_const: q.vacancy_mean_const,
                theta_route_diff: cmp.theta_max_diff,
                sigma_route_diff: cmp.sigma_max_diff,
                agree: cmp.agree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k2 = &rows[0];
    let e2 = (-2f64).exp();
    let closed_forms_k2 = vec![
        closed_form("theta_1", k2.theta[0], e2, 1e-10),
        closed_form("sigma_11", k2.sigma[0][0], 4.0 * e2 * e2, 1e-8),
        closed_form("vacancy_mean_const", k2.vacancy_mean_const, e2, 1e-10),
    ];
    let ok = rows.iter().all(|r| r.agree) && closed_forms_k2.iter().all(|c| c.passed);
    let diagnostics = json!({ "routes_agree": rows.iter().all(|r| r.agree) });
    Ok((
        Payload::Report(ReportPayload {
            k_max,
            rows,
            closed_forms_k2,
        }),
        diagnostics,
        ok,
    ))
}
