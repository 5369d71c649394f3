//! Grid evaluation: exact law against scheme measure for every `(n, r)`
//! cell, with predictions and rigorous bounds attached.

use std::f64::consts::PI;

use anyhow::{Context, Result};
use modphi::bounds::{assemble_bound_inputs, classical_tv_bounds, tv_norm_bound_1d};
use modphi::hermite_asymptotics::{
    predict_kolmogorov, predict_local, predict_local_md, predict_tv, predict_tv_md,
};
use modphi::lattice_measure::{distance_kolmogorov, distance_local, distance_tv, scheme_measure};
use modphi::models::{
    bernoulli_residue_alphabet, exact_sum_lambda, matching_order, LeadingTerm, Model, Scheme,
};
use modphi::{Error, LaurentResidue, SignedLatticeMeasure};
use rayon::prelude::*;
use serde::Serialize;

use crate::spec::{DistanceKind, ExperimentSpec, LambdaConvention};

/// One measured distance with its prediction and bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub model: String,
    pub params: String,
    pub n: u64,
    pub lambda: f64,
    /// Requested scheme order.
    pub r: usize,
    pub kind: &'static str,
    pub measured: f64,
    /// Truncated mass of both measures: the measured value is exact up to this.
    pub error_bar: f64,
    /// Order `s ≥ r` of the leading error term.
    pub s: Option<usize>,
    /// Leading coefficient `𝔢_{s+1}` (dimension 1).
    pub beta: Option<f64>,
    pub predicted: Option<f64>,
    pub ratio: Option<f64>,
    /// Alternative leading constant where the literature quotes a different one.
    pub predicted_alt: Option<f64>,
    /// Smallest rigorous bound applicable to this distance.
    pub bound: Option<f64>,
    /// Wiener-algebra norm estimate of `d_TV`.
    pub bound_norm: Option<f64>,
    /// Order at which the norm estimate was applied.
    pub bound_r: Option<usize>,
    pub chen_steele: Option<f64>,
    pub le_cam: Option<f64>,
    pub prohorov: Option<f64>,
}

impl ExperimentRow {
    /// `measured ≤ bound + error_bar`, vacuously true without a bound.
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.measured <= b + self.error_bar)
    }
}

/// `∫_{ℝ²} e^{−‖x‖²/2} |2 − (x+y)²| dx dy = 8√(2π) e^{−1/2}`, by rotating to
/// `u = (x+y)/√2` and using `∫|1−u²|e^{−u²/2} du = 4e^{−1/2}`.
pub fn coloured_tv_integral() -> f64 {
    8.0 * (2.0 * PI).sqrt() * (-0.5f64).exp()
}

/// Leading constants quoted in the literature for the 2-coloured
/// permutation model at order 0: `d_L ≈ c_L/(log n)²` and `d_TV ≈ c_TV/log n`.
pub fn coloured_literature_constants() -> (f64, f64) {
    (PI / 3.0, PI / 24.0 * coloured_tv_integral())
}

fn literature_prediction(model: &dyn Model, n: u64, r: usize, kind: DistanceKind) -> Option<f64> {
    if model.name() != "coloured-perm" || r != 0 || n < 2 {
        return None;
    }
    let (cl, ctv) = coloured_literature_constants();
    let ln = (n as f64).ln();
    match kind {
        DistanceKind::Local => Some(cl / (ln * ln)),
        DistanceKind::Tv => Some(ctv / ln),
        DistanceKind::Kolmogorov => None,
    }
}

/// The Poisson parameter used for the scheme at `n`.
pub fn scheme_lambda(
    model: &dyn Model,
    n: u64,
    law: &SignedLatticeMeasure,
    convention: LambdaConvention,
) -> Result<f64> {
    Ok(match convention {
        LambdaConvention::Theorem => model.lambda(n)?,
        LambdaConvention::ExactSum => exact_sum_lambda(law, &model.exponent()),
    })
}

fn prediction(model: &dyn Model, lead: &LeadingTerm, lambda: f64, kind: DistanceKind) -> Result<Option<f64>> {
    let sigma2 = model.exponent().sigma2().to_vec();
    let v = match (lead, kind) {
        (LeadingTerm::OneD { s, beta }, DistanceKind::Local) => predict_local(*beta, sigma2[0], lambda, *s)?,
        (LeadingTerm::OneD { s, beta }, DistanceKind::Kolmogorov) => {
            predict_kolmogorov(*beta, sigma2[0], lambda, *s)?
        }
        (LeadingTerm::OneD { s, beta }, DistanceKind::Tv) => predict_tv(*beta, sigma2[0], lambda, *s)?,
        (LeadingTerm::TwoD { s, beta }, DistanceKind::Local) => {
            predict_local_md(beta, [sigma2[0].sqrt(), sigma2[1].sqrt()], lambda, *s)?
        }
        (LeadingTerm::TwoD { s, beta }, DistanceKind::Tv) => {
            predict_tv_md(beta, [sigma2[0].sqrt(), sigma2[1].sqrt()], lambda, *s)?
        }
        _ => return Ok(None),
    };
    Ok(Some(v))
}

/// Rigorous `d_TV` bounds of one `(n, r)` cell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellBounds {
    pub norm: Option<f64>,
    pub norm_r: Option<usize>,
    pub chen_steele: Option<f64>,
    pub le_cam: Option<f64>,
    pub prohorov: Option<f64>,
}

impl CellBounds {
    /// Smallest available bound on `d_TV`.
    pub fn best_tv(&self) -> Option<f64> {
        [self.norm, self.chen_steele, self.le_cam, self.prohorov]
            .into_iter()
            .flatten()
            .reduce(f64::min)
    }

    /// Bound on the given distance implied by `d_L ≤ d_TV` and `d_K ≤ d_TV/2`
    /// (both measures have unit mass).
    pub fn for_kind(&self, kind: DistanceKind) -> Option<f64> {
        self.best_tv().map(|b| match kind {
            DistanceKind::Kolmogorov => b / 2.0,
            _ => b,
        })
    }
}

/// Norm estimate and classical bounds for the order-`r` scheme with residue
/// `chi`. Bounds whose preconditions fail are reported as absent.
pub fn cell_bounds(
    model: &dyn Model,
    n: u64,
    r: usize,
    lambda: f64,
    chi: &LaurentResidue,
    eps: f64,
) -> Result<CellBounds> {
    let mut out = CellBounds::default();
    if model.dimension() != 1 {
        return Ok(out);
    }
    let bern = model.bernoulli_parameters(n);
    if let Some(psi) = model.exact_residue(n, lambda)? {
        // Bernoulli-type residues have known power sums, so the matching
        // order is computed; otherwise only ψ(0) = χ(0) = 1 is guaranteed.
        let r_bound = match &bern {
            Some(p) => {
                let a = bernoulli_residue_alphabet("psi", p, lambda, chi.degree() + 6)?;
                matching_order(&a, chi)?
            }
            None => 0,
        };
        let exponent = model.exponent();
        let bound = assemble_bound_inputs(&exponent, lambda, r_bound, eps, &psi, chi)
            .and_then(|inp| tv_norm_bound_1d(&inp));
        match bound {
            Ok(b) => {
                out.norm = Some(b);
                out.norm_r = Some(r_bound);
            }
            Err(Error::Precondition(_) | Error::OutOfRange(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(p) = bern {
        let total: f64 = p.iter().rev().sum();
        if r == 0 && (total - lambda).abs() <= 1e-12 * lambda.max(1.0) {
            let c = classical_tv_bounds(&p)?;
            out.chen_steele = Some(c.chen_steele);
            out.le_cam = Some(c.le_cam);
            out.prohorov = c.prohorov;
        }
    }
    Ok(out)
}

/// Everything computed for one `(n, r)` cell before it is split into rows.
#[derive(Debug, Clone)]
pub struct Cell {
    pub lambda: f64,
    pub scheme: Scheme,
    pub scheme_measure: SignedLatticeMeasure,
}

/// Scheme of order `r` at `n` and its measure.
pub fn build_cell(model: &dyn Model, n: u64, r: usize, lambda: f64, tol: f64) -> Result<Cell> {
    let scheme = model.scheme(n, r, lambda)?;
    let measure = scheme_measure(&model.exponent(), lambda, &scheme.residue, tol)?;
    Ok(Cell {
        lambda,
        scheme,
        scheme_measure: measure,
    })
}

fn rows_for_n(model: &dyn Model, spec: &ExperimentSpec, n: u64) -> Result<Vec<ExperimentRow>> {
    let law = model.exact_law(n)?;
    let lambda = scheme_lambda(model, n, &law, spec.lambda_convention)?;
    let mut rows = Vec::new();
    for &r in &spec.orders {
        let cell = build_cell(model, n, r, lambda, spec.tol).with_context(|| format!("n = {n}, r = {r}"))?;
        let bounds = cell_bounds(model, n, r, lambda, &cell.scheme.residue, spec.eps)
            .with_context(|| format!("bounds at n = {n}, r = {r}"))?;
        let (s, beta) = match &cell.scheme.leading {
            LeadingTerm::OneD { s, beta } => (Some(*s), Some(*beta)),
            LeadingTerm::TwoD { s, .. } => (Some(*s), None),
            LeadingTerm::None => (None, None),
        };
        for &kind in &spec.distances {
            let d = match kind {
                DistanceKind::Local => distance_local(&law, &cell.scheme_measure)?,
                DistanceKind::Kolmogorov => distance_kolmogorov(&law, &cell.scheme_measure)?,
                DistanceKind::Tv => distance_tv(&law, &cell.scheme_measure)?,
            };
            let predicted = prediction(model, &cell.scheme.leading, lambda, kind)?;
            let ratio = predicted.filter(|p| *p > 0.0).map(|p| d.value / p);
            rows.push(ExperimentRow {
                model: model.name().to_string(),
                params: model.params(),
                n,
                lambda,
                r,
                kind: kind.as_str(),
                measured: d.value,
                error_bar: d.error,
                s,
                beta,
                predicted,
                ratio,
                predicted_alt: literature_prediction(model, n, r, kind),
                bound: bounds.for_kind(kind),
                bound_norm: bounds.norm,
                bound_r: bounds.norm_r,
                chen_steele: bounds.chen_steele,
                le_cam: bounds.le_cam,
                prohorov: bounds.prohorov,
            });
        }
    }
    Ok(rows)
}

fn kind_rank(kind: &str) -> usize {
    DistanceKind::ALL
        .iter()
        .position(|k| k.as_str() == kind)
        .unwrap_or(usize::MAX)
}

/// Evaluates every `(n, r, kind)` cell of the experiment. Cells for different `n`
/// run concurrently; the rows come back sorted by `(n, r, kind)`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    let model = spec.validate()?;
    let model: &dyn Model = model.as_ref();
    let per_n = spec
        .n_values
        .par_iter()
        .map(|&n| rows_for_n(model, spec, n))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ExperimentRow> = per_n.into_iter().flatten().collect();
    rows.sort_by_key(|row| (row.n, row.r, kind_rank(row.kind)));
    Ok(rows)
}
