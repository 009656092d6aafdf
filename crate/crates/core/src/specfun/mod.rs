//! Special functions: Hermite and generalized Laguerre polynomials, the
//! terminating hypergeometric sums, and integer-order Bessel J and Struve H.

mod osc;
mod poly;

pub use osc::{
    bessel_j, bessel_j_asymptotic, bessel_j_pi_multiple, bessel_j_series, bessel_j_series_hp,
    bessel_j_value, bessel_y_asymptotic, struve_h, struve_h_asymptotic, struve_h_pi_multiple,
    struve_h_series, struve_h_series_hp, struve_h_value, OscFuncValue, OscKind, Regime,
    ASYMPTOTIC_TERM_CAP, CROSSOVER, MAX_ORDER,
};
pub use poly::{
    hermite, hermite_all, hermite_coefficients, hermite_exact, hermite_f64, hyp1f1_neg_int,
    hyp2f1_float, hyp2f1_term, laguerre, laguerre_exact, laguerre_f64, MAX_HERMITE_DEGREE,
};
