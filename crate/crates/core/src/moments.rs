//! Trigonometric moments `μₖ = ∫ e^{-ikθ} w(θ) dθ` and the inner product they induce.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{cabs_f64, cx_real, ComplexPoly, Cx, Precision, Real};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_moments, QuadratureMeta};
use crate::weights::{closed_form_tau, Family, PearsonPair, WeightSpec};

#[derive(Clone, Debug)]
pub struct MomentTable<T: Real> {
    /// Largest index stored; `μₖ` is available for `|k| <= n`.
    pub n: usize,
    nonneg: Vec<Cx<T>>,
    pub precision: Precision,
    pub quadrature_meta: QuadratureMeta,
}

impl<T: Real> MomentTable<T> {
    /// Table from `μ₀…μ_N`; negative indices come from conjugation.
    pub fn from_nonnegative(nonneg: Vec<Cx<T>>, precision: Precision, quadrature_meta: QuadratureMeta) -> Result<Self> {
        if nonneg.is_empty() {
            return Err(Error::InvalidParameter("moment table needs at least mu_0".into()));
        }
        let n = nonneg.len() - 1;
        let mut nonneg = nonneg;
        nonneg[0] = cx_real(nonneg[0].re.clone());
        Ok(MomentTable { n, nonneg, precision, quadrature_meta })
    }

    pub fn mu(&self, k: i64) -> Result<Cx<T>> {
        let idx = k.unsigned_abs() as usize;
        match self.nonneg.get(idx) {
            Some(m) if k >= 0 => Ok(m.clone()),
            Some(m) => Ok(m.conj()),
            None => Err(Error::MomentRangeExceeded { index: k, n: self.n }),
        }
    }

    pub fn nonnegative(&self) -> &[Cx<T>] {
        &self.nonneg
    }

    /// `(k, μₖ)` for `k = -N…N`.
    pub fn entries(&self) -> Vec<(i64, Cx<T>)> {
        let n = self.n as i64;
        (-n..=n).map(|k| (k, self.mu(k).expect("index in range"))).collect()
    }

    pub fn to_json(&self) -> MomentTableJson {
        let moments = self.entries().into_iter().map(|(k, m)| (k, m.re.to_decimal(), m.im.to_decimal())).collect();
        MomentTableJson { n: self.n, moments, precision: self.precision, quadrature_meta: self.quadrature_meta.clone() }
    }

    /// Reads a table back in the current working precision of `T`.
    pub fn from_json(j: &MomentTableJson) -> Result<Self> {
        let mut nonneg = vec![Cx::<T>::zero(); j.n + 1];
        let mut seen = vec![false; j.n + 1];
        let parse = |s: &str| T::parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad decimal '{s}'")));
        for (k, re, im) in &j.moments {
            if *k < 0 {
                continue;
            }
            let idx = *k as usize;
            if idx > j.n {
                return Err(Error::MomentRangeExceeded { index: *k, n: j.n });
            }
            nonneg[idx] = Cx::new(parse(re)?, parse(im)?);
            seen[idx] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Parse(format!("moment {missing} missing from table")));
        }
        Self::from_nonnegative(nonneg, j.precision, j.quadrature_meta.clone())
    }
}

/// Serialized moment table; each moment is `(k, re, im)` with decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTableJson {
    pub n: usize,
    pub moments: Vec<(i64, String, String)>,
    pub precision: Precision,
    pub quadrature_meta: QuadratureMeta,
}

/// Moment count needed to build `Φ₀…Φ_{n_max}` and check relations on them.
pub fn default_moment_count(n_max: usize) -> usize {
    n_max + 2
}

/// `μₖ` for `|k| <= n`, normalized to `μ₀ = 1` when `spec.normalized` is set.
///
/// `precision` must describe `T` at its current working precision.
pub fn compute_moments<T: Real>(spec: &WeightSpec, n: usize, precision: Precision) -> Result<MomentTable<T>> {
    if precision != Precision::of::<T>() {
        return Err(Error::InvalidParameter(format!(
            "requested {} but the scalar type runs at {}",
            precision.label(),
            Precision::of::<T>().label()
        )));
    }
    if let Family::Lebesgue = spec.family {
        let mut mu = vec![Cx::<T>::zero(); n + 1];
        mu[0] = Cx::one();
        let meta = QuadratureMeta { rule: "exact".into(), level: 0, nodes: 0, estimated_error: 0.0 };
        return MomentTable::from_nonnegative(mu, precision, meta);
    }
    let raw = spec.with_normalized(false);
    let q = integrate_moments::<T>(&raw, n, None)?;
    let mut values = q.values;
    if spec.normalized {
        let tau = match closed_form_tau::<T>(&spec.family)? {
            Some(t) => t,
            None => T::one() / values[0].re.clone(),
        };
        for v in values.iter_mut() {
            *v = v.clone() * tau.clone();
        }
    }
    MomentTable::from_nonnegative(values, precision, q.meta)
}

/// `Σⱼ Σₖ fⱼ conj(gₖ) μ_{k-j}`, i.e. `∫ f ḡ w dθ`.
pub fn inner_product<T: Real>(t: &MomentTable<T>, f: &ComplexPoly<T>, g: &ComplexPoly<T>) -> Result<Cx<T>> {
    let mut acc = Cx::<T>::zero();
    for (j, fj) in f.coeffs().iter().enumerate() {
        if fj.is_zero() {
            continue;
        }
        for (k, gk) in g.coeffs().iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            let mu = t.mu(k as i64 - j as i64)?;
            acc += fj.clone() * gk.conj() * mu;
        }
    }
    Ok(acc)
}

/// `|⟨AΦ', zᵏ⟩ - ⟨Φ[iB + (k+1)A], z^{k+1}⟩|` for a polynomial `Φ`.
pub fn integration_by_parts_residual<T: Real>(
    t: &MomentTable<T>,
    pair: &PearsonPair<T>,
    phi: &ComplexPoly<T>,
    k: usize,
) -> Result<f64> {
    let lhs = inner_product(t, &(&pair.a * &phi.derivative()), &ComplexPoly::monomial(k))?;
    let factor = &pair.b.scale(&Cx::i()) + &pair.a.scale(&cx_real(T::from_i64(k as i64 + 1)));
    let rhs = inner_product(t, &(phi * &factor), &ComplexPoly::monomial(k + 1))?;
    Ok(cabs_f64(&(lhs - rhs)))
}

/// `|⟨AΦₙ', zᵏ⟩|`, which vanishes for `1 <= k <= n-2`.
pub fn derivative_orthogonality_residual<T: Real>(
    t: &MomentTable<T>,
    pair: &PearsonPair<T>,
    phi: &ComplexPoly<T>,
    k: usize,
) -> Result<f64> {
    let v = inner_product(t, &(&pair.a * &phi.derivative()), &ComplexPoly::monomial(k))?;
    Ok(cabs_f64(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cx, with_digits, BigReal};
    use crate::weights::{pearson_pairs, sample_catalog};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn table(spec: &WeightSpec, n: usize) -> MomentTable<f64> {
        compute_moments(spec, n, Precision::Double).unwrap()
    }

    #[test]
    fn lebesgue_is_exact() {
        let t = table(&WeightSpec::lebesgue(), 6);
        assert_eq!(t.mu(0).unwrap(), cx(1.0, 0.0));
        for k in 1..=6 {
            assert_eq!(t.mu(k).unwrap(), cx(0.0, 0.0));
            assert_eq!(t.mu(-k).unwrap(), cx(0.0, 0.0));
        }
        let p = |n| ComplexPoly::<f64>::monomial(n);
        for j in 0..4 {
            for k in 0..4 {
                let v = inner_product(&t, &p(j), &p(k)).unwrap();
                assert_eq!(v, cx(if j == k { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn bessel_raw_zeroth_moment() {
        let spec = WeightSpec::bessel(1.0).unwrap().with_normalized(false);
        let t = table(&spec, 3);
        // 2π I₀(1)
        assert!((t.mu(0).unwrap().re - 2.0 * PI * 1.266_065_877_752_008_4).abs() < 1e-13);
    }

    #[test]
    fn circular_jacobi_first_moment() {
        // w ∝ sin²(θ/2) = (2 - z - z̄)/4, so μ₁/μ₀ = -1/2
        let t = table(&WeightSpec::circular_jacobi(1.0).unwrap(), 3);
        assert!((t.mu(0).unwrap().re - 1.0).abs() < 1e-13);
        assert!((t.mu(1).unwrap() - cx(-0.5, 0.0)).norm() < 1e-13);
        assert!(t.mu(2).unwrap().norm() < 1e-13);
    }

    #[test]
    fn basic_inner_products() {
        let t = table(&WeightSpec::sri_ranga(Complex64::new(1.0, 0.5)).unwrap(), 4);
        let one = ComplexPoly::<f64>::one();
        let z = ComplexPoly::<f64>::monomial(1);
        assert_eq!(inner_product(&t, &one, &one).unwrap(), t.mu(0).unwrap());
        assert_eq!(inner_product(&t, &z, &one).unwrap(), t.mu(1).unwrap().conj());
        assert!(matches!(
            inner_product(&t, &ComplexPoly::monomial(5), &one),
            Err(Error::MomentRangeExceeded { index: -5, .. })
        ));
    }

    #[test]
    fn normalized_tables_have_unit_mass() {
        for spec in sample_catalog() {
            let t = table(&spec, 2);
            assert!((t.mu(0).unwrap().re - 1.0).abs() < 1e-12, "{:?}", spec.family);
        }
    }

    #[test]
    fn toeplitz_sections_are_positive() {
        for spec in sample_catalog() {
            let t = table(&spec, 2);
            let m = |j: i64, k: i64| t.mu(k - j).unwrap();
            let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            assert!(det.re > 0.0 && det.im.abs() < 1e-12, "{:?}: {det}", spec.family);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = table(&WeightSpec::exp_sine(Complex64::new(0.3, 0.4)).unwrap(), 5);
        let s = serde_json::to_string(&t.to_json()).unwrap();
        let back = MomentTable::<f64>::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        for k in -5..=5 {
            assert_eq!(back.mu(k).unwrap(), t.mu(k).unwrap());
        }
        assert_eq!(back.quadrature_meta, t.quadrature_meta);
    }

    #[test]
    fn precision_mismatch_is_rejected() {
        let spec = WeightSpec::bessel(1.0).unwrap();
        assert!(compute_moments::<f64>(&spec, 2, Precision::Extended { digits: 40 }).is_err());
    }

    #[test]
    fn extended_round_trip_keeps_digits() {
        with_digits(40, || {
            let spec = WeightSpec::bessel(2.0).unwrap();
            let t = compute_moments::<BigReal>(&spec, 3, Precision::Extended { digits: 40 }).unwrap();
            let j = t.to_json();
            assert!(j.moments[3].1.len() > 40);
            let back = MomentTable::<BigReal>::from_json(&j).unwrap();
            let d = (back.mu(1).unwrap() - t.mu(1).unwrap()).re.abs();
            assert!(d < BigReal::parse_decimal("1e-38").unwrap());
        });
    }

    #[test]
    fn integration_by_parts_on_monomials() {
        // the identity holds for any polynomial, not only Φₙ
        for spec in sample_catalog() {
            let t = table(&spec, 8);
            for pair in pearson_pairs::<f64>(&spec) {
                for n in 0..=5 {
                    let phi = &ComplexPoly::monomial(n) + &ComplexPoly::constant(cx(0.2, -0.1));
                    for k in 0..=n {
                        let r = integration_by_parts_residual(&t, &pair, &phi, k).unwrap();
                        assert!(r < 1e-10, "{:?} {} n={n} k={k}: {r}", spec.family, pair.label);
                    }
                }
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..=5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hermitian_symmetry(f in arb_poly(), g in arb_poly()) {
            let t = table(&WeightSpec::half_plane_pole(Complex64::new(0.7, -0.4), Complex64::new(0.5, 0.2)).unwrap(), 5);
            let (f, g) = (ComplexPoly::<f64>::from_f64(&f), ComplexPoly::<f64>::from_f64(&g));
            let a = inner_product(&t, &f, &g).unwrap();
            let b = inner_product(&t, &g, &f).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn positive_definite(f in arb_poly()) {
            let f = ComplexPoly::<f64>::from_f64(&f);
            prop_assume!(f.max_abs_coeff() > 1e-3);
            for spec in [WeightSpec::sri_ranga(Complex64::new(0.3, -0.7)).unwrap(), WeightSpec::bessel(1.0).unwrap()] {
                let t = table(&spec, 5);
                let v = inner_product(&t, &f, &f).unwrap();
                prop_assert!(v.re > 0.0);
                prop_assert!(v.im.abs() <= 1e-12 * v.re.max(1.0));
            }
        }
    }
}
