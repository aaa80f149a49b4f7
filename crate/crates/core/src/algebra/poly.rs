use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::real::{cabs_f64, cx_of, Cx, Real};
use crate::error::{Error, Result};

/// Dense complex polynomial, `coeffs[k]` multiplying `z^k`.
///
/// Trailing zero coefficients are stripped on construction, so `degree` is
/// the index of the last stored coefficient. The zero polynomial keeps a
/// single zero coefficient and reports degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> ComplexPoly<T> {
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Cx::zero());
        }
        ComplexPoly { coeffs }
    }

    pub fn from_f64(coeffs: &[num_complex::Complex64]) -> Self {
        Self::new(coeffs.iter().map(|&c| cx_of(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![Cx::zero()])
    }

    pub fn one() -> Self {
        Self::new(vec![Cx::one()])
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Cx::zero(); k + 1];
        c[k] = Cx::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, z: &Cx<T>) -> Cx<T> {
        let mut acc = Cx::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let c = self.coeffs[1..].iter().enumerate().map(|(k, c)| c.clone() * T::from_i64(k as i64 + 1)).collect();
        Self::new(c)
    }

    /// `z^n conj(p(1/z̄))`: conjugated coefficients in reverse order.
    pub fn reciprocal(&self, n: usize) -> Result<Self> {
        if self.degree() > n && !self.is_zero() {
            return Err(Error::DegreeMismatch { degree: self.degree(), n });
        }
        let c = (0..=n).map(|k| self.coeff(n - k).conj()).collect();
        Ok(Self::new(c))
    }

    pub fn scale(&self, s: &Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![Cx::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// Largest coefficient modulus, in double precision.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(cabs_f64).fold(0.0, f64::max)
    }

    /// Degree after dropping trailing coefficients with modulus `<= tol`.
    pub fn effective_degree(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| cabs_f64(c) > tol)
    }
}

impl<T: Real> Add for &ComplexPoly<T> {
    type Output = ComplexPoly<T>;
    fn add(self, rhs: Self) -> ComplexPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &ComplexPoly<T> {
    type Output = ComplexPoly<T>;
    fn sub(self, rhs: Self) -> ComplexPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &ComplexPoly<T> {
    type Output = ComplexPoly<T>;
    fn mul(self, rhs: Self) -> ComplexPoly<T> {
        let mut c = vec![Cx::<T>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        ComplexPoly::new(c)
    }
}

pub fn poly_eval<T: Real>(p: &ComplexPoly<T>, z: &Cx<T>) -> Cx<T> {
    p.eval(z)
}

pub fn poly_derivative<T: Real>(p: &ComplexPoly<T>) -> ComplexPoly<T> {
    p.derivative()
}

pub fn reciprocal<T: Real>(p: &ComplexPoly<T>, n: usize) -> Result<ComplexPoly<T>> {
    p.reciprocal(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::real::cx;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(c: &[(f64, f64)]) -> ComplexPoly<f64> {
        ComplexPoly::new(c.iter().map(|&(a, b)| cx(a, b)).collect())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[(1.0, 0.0)]).eval(&cx(5.0, 2.0)), cx(1.0, 0.0));
        assert_eq!(p(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).eval(&cx(1.0, 0.0)), cx(0.0, 0.0));
        // z^2 + iz at z = i
        let q = p(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(q.eval(&cx(0.0, 1.0)), cx(-2.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        assert!(p(&[(7.0, 0.0)]).derivative().is_zero());
        assert_eq!(p(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).derivative(), p(&[(0.0, 0.0), (2.0, 0.0)]));
        let q = p(&[(0.0, 0.0), (0.0, 0.0), (1.0, 1.0), (1.0, 0.0)]);
        assert_eq!(q.derivative(), p(&[(0.0, 0.0), (2.0, 2.0), (3.0, 0.0)]));
    }

    #[test]
    fn reciprocal_examples() {
        let a0 = cx::<f64>(0.3, -0.4);
        let q = ComplexPoly::new(vec![-a0.conj(), cx(1.0, 0.0)]);
        let r = q.reciprocal(1).unwrap();
        assert_eq!(r, ComplexPoly::new(vec![cx(1.0, 0.0), -a0]));
        assert_eq!(ComplexPoly::<f64>::one().reciprocal(0).unwrap(), ComplexPoly::one());
        assert!(matches!(ComplexPoly::<f64>::monomial(3).reciprocal(2), Err(Error::DegreeMismatch { .. })));
        // z^2 reciprocal at n = 3 is z
        assert_eq!(ComplexPoly::<f64>::monomial(2).reciprocal(3).unwrap(), ComplexPoly::monomial(1));
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let q = p(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(q.degree(), 0);
        assert_eq!(ComplexPoly::<f64>::new(vec![]).degree(), 0);
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..=max_deg + 1)
    }

    proptest! {
        #[test]
        fn reciprocal_is_an_involution(c in arb_poly(6), extra in 0usize..3) {
            let q = ComplexPoly::<f64>::from_f64(&c);
            let n = q.degree() + extra;
            let back = q.reciprocal(n).unwrap().reciprocal(n).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn derivative_lowers_degree(c in arb_poly(6)) {
            let mut c = c;
            let last = c.len() - 1;
            c[last] = Complex64::new(1.0, 0.5);
            let q = ComplexPoly::<f64>::from_f64(&c);
            prop_assert_eq!(q.derivative().degree(), q.degree().saturating_sub(1));
        }

        #[test]
        fn product_evaluates_pointwise(a in arb_poly(4), b in arb_poly(4), re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let (pa, pb) = (ComplexPoly::<f64>::from_f64(&a), ComplexPoly::<f64>::from_f64(&b));
            let z = cx(re, im);
            let lhs = (&pa * &pb).eval(&z);
            let rhs = pa.eval(&z) * pb.eval(&z);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }

        #[test]
        fn reciprocal_matches_definition_on_circle(c in arb_poly(5), t in 0.0f64..std::f64::consts::TAU) {
            let q = ComplexPoly::<f64>::from_f64(&c);
            let n = q.degree();
            let z = Complex64::from_polar(1.0, t);
            let lhs = q.reciprocal(n).unwrap().eval(&z);
            let rhs = z.powu(n as u32) * q.eval(&(1.0 / z.conj())).conj();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }
    }
}
