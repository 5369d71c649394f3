//! Hermite polynomials, Gaussian-derivative constants `z_r`, `M_r`, `V_r`,
//! and the leading-order distance predictions in dimensions 1 and 2.

mod gaussian;
mod predict;
mod table;

pub use gaussian::{gaussian_kolmogorov, kolmogorov_to_gaussian, normal_cdf};
pub use predict::{
    md_integral_inner, md_polynomial, md_sup_inner, predict_kolmogorov, predict_local,
    predict_local_md, predict_tv, predict_tv_md, MultiBeta,
};
pub use table::{
    eval_poly, g_eval, hermite_coeffs, hermite_eval, hermite_zeros, m_const, smallest_abs_zero,
    v_const, v_const_with_error, HermiteTable, MAX_CONSTANT, MAX_HERMITE,
};
