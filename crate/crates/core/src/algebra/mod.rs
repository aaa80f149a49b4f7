//! Polynomial arithmetic, special functions and the scalar types they run over.

mod big;
mod poly;
mod real;
mod special;

pub use big::{bits_for_digits, with_digits, BigReal, PrecisionGuard};
pub use poly::{poly_derivative, poly_eval, reciprocal, ComplexPoly};
pub use real::{
    cabs, cabs_f64, carg, cexp, cis, cln, csin, csqrt, cx, cx_of, cx_real, cx_to_f64, re, Cx, Precision, Real,
};
pub use special::{bessel_i0, hyp2f1_terminating, log_gamma_complex, pochhammer};
