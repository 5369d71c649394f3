//! Batch experiment runner for mod-φ approximation schemes.
//!
//! An [`ExperimentSpec`] names a model, an `n` grid, scheme orders and
//! distances. [`run_experiment`] builds the exact law and the scheme
//! measure of every cell, measures the distances and attaches the
//! asymptotic prediction and every applicable rigorous bound. The rows are
//! rendered as versioned CSV, JSON or gnuplot data files.

pub mod output;
pub mod runner;
pub mod spec;

use anyhow::Result;
use modphi::hermite_asymptotics::{predict_kolmogorov, predict_local, predict_tv};
use modphi::models::{build_model, LeadingTerm, ModelParams};

pub use output::{emit_constants_table, plot_files, rows_to_csv, rows_to_json, write_plot_files};
pub use runner::{build_cell, cell_bounds, run_experiment, scheme_lambda, CellBounds, ExperimentRow};
pub use spec::{DistanceKind, ExperimentSpec, LambdaConvention, OutputFormat, SpecBuilder};

/// Leading-order predictions of the three distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub lambda: f64,
    pub leading: LeadingTerm,
    pub local: Option<f64>,
    pub kolmogorov: Option<f64>,
    pub tv: Option<f64>,
}

/// Predictions for `|β|` at order `s` with variance `σ²` in dimension 1.
pub fn predict_raw(beta: f64, sigma2: f64, lambda: f64, s: usize) -> Result<Prediction> {
    Ok(Prediction {
        lambda,
        leading: LeadingTerm::OneD { s, beta },
        local: Some(predict_local(beta, sigma2, lambda, s)?),
        kolmogorov: Some(predict_kolmogorov(beta, sigma2, lambda, s)?),
        tv: Some(predict_tv(beta, sigma2, lambda, s)?),
    })
}

/// Predictions for the order-`r` scheme of a registered model at `n`.
pub fn predict_for_model(
    model: &str,
    params: &ModelParams,
    n: u64,
    r: usize,
    convention: LambdaConvention,
) -> Result<Prediction> {
    let m = build_model(model, params)?;
    m.check_n(n)?;
    let lambda = match convention {
        LambdaConvention::Theorem => m.lambda(n)?,
        LambdaConvention::ExactSum => scheme_lambda(m.as_ref(), n, &m.exact_law(n)?, convention)?,
    };
    let scheme = m.scheme(n, r, lambda)?;
    let sigma2 = m.exponent().sigma2().to_vec();
    let (local, kolmogorov, tv) = match &scheme.leading {
        LeadingTerm::OneD { s, beta } => (
            Some(predict_local(*beta, sigma2[0], lambda, *s)?),
            Some(predict_kolmogorov(*beta, sigma2[0], lambda, *s)?),
            Some(predict_tv(*beta, sigma2[0], lambda, *s)?),
        ),
        LeadingTerm::TwoD { s, beta } => {
            let sigma = [sigma2[0].sqrt(), sigma2[1].sqrt()];
            (
                Some(modphi::hermite_asymptotics::predict_local_md(beta, sigma, lambda, *s)?),
                None,
                Some(modphi::hermite_asymptotics::predict_tv_md(beta, sigma, lambda, *s)?),
            )
        }
        LeadingTerm::None => (None, None, None),
    };
    Ok(Prediction {
        lambda,
        leading: scheme.leading,
        local,
        kolmogorov,
        tv,
    })
}

/// Rigorous `d_TV` bounds for the order-`r` scheme of a registered model.
pub fn bound_for_model(
    model: &str,
    params: &ModelParams,
    n: u64,
    r: usize,
    convention: LambdaConvention,
    eps: f64,
) -> Result<(f64, CellBounds)> {
    let m = build_model(model, params)?;
    m.check_n(n)?;
    let lambda = match convention {
        LambdaConvention::Theorem => m.lambda(n)?,
        LambdaConvention::ExactSum => scheme_lambda(m.as_ref(), n, &m.exact_law(n)?, convention)?,
    };
    let scheme = m.scheme(n, r, lambda)?;
    Ok((lambda, cell_bounds(m.as_ref(), n, r, lambda, &scheme.residue, eps)?))
}
