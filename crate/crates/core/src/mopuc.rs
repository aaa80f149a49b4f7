//! Monic orthogonal polynomials and Verblunsky coefficients.
//!
//! The moment route runs the Szegő recursion `Φₙ₊₁ = zΦₙ - ᾱₙΦₙ*` with
//! `ᾱₙ = ⟨zΦₙ, 1⟩ / ⟨Φₙ*, 1⟩`; the closed-form routes cover the families whose
//! coefficients are known explicitly.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{cabs, cabs_f64, cx_of, cx_real, hyp2f1_terminating, pochhammer, ComplexPoly, Cx, Real};
use crate::error::{Error, Result};
use crate::moments::{inner_product, MomentTable};
use crate::weights::{Family, WeightSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct OpucRecord<T: Real> {
    pub n: usize,
    pub phi: ComplexPoly<T>,
    /// `αₙ₋₁ = -conj(Φₙ(0))`, with `α₋₁ = -1` at `n = 0`.
    pub alpha: Cx<T>,
    /// Coefficient of `z^{n-1}` in `Φₙ`.
    pub gamma: Cx<T>,
    /// `Φₙ'(0)`.
    pub beta: Cx<T>,
    pub norm_sq: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpucSequence<T: Real> {
    pub records: Vec<OpucRecord<T>>,
}

impl<T: Real> OpucSequence<T> {
    /// Largest degree stored.
    pub fn n_max(&self) -> usize {
        self.records.len() - 1
    }

    fn record(&self, n: usize) -> Result<&OpucRecord<T>> {
        self.records.get(n).ok_or_else(|| Error::OutOfRange { id: "sequence".into(), n: n as i64 })
    }

    /// `αₙ` for `n >= -1`.
    pub fn alpha(&self, n: i64) -> Result<Cx<T>> {
        if n < -1 {
            return Err(Error::OutOfRange { id: "alpha".into(), n });
        }
        Ok(self.record((n + 1) as usize)?.alpha.clone())
    }

    pub fn gamma(&self, n: usize) -> Result<Cx<T>> {
        Ok(self.record(n)?.gamma.clone())
    }

    pub fn beta(&self, n: usize) -> Result<Cx<T>> {
        Ok(self.record(n)?.beta.clone())
    }

    pub fn phi(&self, n: usize) -> Result<&ComplexPoly<T>> {
        Ok(&self.record(n)?.phi)
    }

    pub fn phi_star(&self, n: usize) -> Result<ComplexPoly<T>> {
        self.record(n)?.phi.reciprocal(n)
    }

    pub fn norm_sq(&self, n: usize) -> Result<T> {
        Ok(self.record(n)?.norm_sq.clone())
    }

    /// Polynomials generated by the Szegő recursion from `α₀…α_{m-1}`, with unit mass.
    pub fn from_verblunsky(alphas: &[Cx<T>]) -> Result<Self> {
        let mut phi = ComplexPoly::<T>::one();
        let mut norm_sq = T::one();
        let mut records = vec![OpucRecord {
            n: 0,
            phi: phi.clone(),
            alpha: -Cx::<T>::one(),
            gamma: Cx::zero(),
            beta: Cx::zero(),
            norm_sq: norm_sq.clone(),
        }];
        for (n, a) in alphas.iter().enumerate() {
            if !(cabs_f64(a) < 1.0) {
                return Err(Error::NumericalBreakdown { n, modulus: cabs_f64(a) });
            }
            let star = phi.reciprocal(n)?;
            phi = &phi.shift(1) - &star.scale(&a.conj());
            norm_sq *= T::one() - a.norm_sqr();
            let m = n + 1;
            records.push(OpucRecord {
                n: m,
                alpha: a.clone(),
                gamma: phi.coeff(m - 1),
                beta: phi.coeff(1),
                norm_sq: norm_sq.clone(),
                phi: phi.clone(),
            });
        }
        Ok(OpucSequence { records })
    }

    /// `α₀…α_{n_max-1}`.
    pub fn verblunsky(&self) -> Vec<Cx<T>> {
        self.records[1..].iter().map(|r| r.alpha.clone()).collect()
    }

    /// Rows `n, αₙ₋₁, γₙ, βₙ, ‖Φₙ‖²`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,alpha_prev_re,alpha_prev_im,gamma_re,gamma_im,beta_re,beta_im,norm_sq\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                r.alpha.re.to_decimal(),
                r.alpha.im.to_decimal(),
                r.gamma.re.to_decimal(),
                r.gamma.im.to_decimal(),
                r.beta.re.to_decimal(),
                r.beta.im.to_decimal(),
                r.norm_sq.to_decimal()
            ));
        }
        s
    }

    pub fn to_json(&self) -> OpucSequenceJson {
        let pair = |z: &Cx<T>| (z.re.to_decimal(), z.im.to_decimal());
        OpucSequenceJson {
            records: self
                .records
                .iter()
                .map(|r| OpucRecordJson {
                    n: r.n,
                    coefficients: r.phi.coeffs().iter().map(pair).collect(),
                    alpha_prev: pair(&r.alpha),
                    gamma: pair(&r.gamma),
                    beta: pair(&r.beta),
                    norm_sq: r.norm_sq.to_decimal(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpucRecordJson {
    pub n: usize,
    pub coefficients: Vec<(String, String)>,
    pub alpha_prev: (String, String),
    pub gamma: (String, String),
    pub beta: (String, String),
    pub norm_sq: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpucSequenceJson {
    pub records: Vec<OpucRecordJson>,
}

/// Largest `|αₙ|` accepted before declaring the computation broken down.
pub fn breakdown_threshold<T: Real>() -> f64 {
    if T::digits() <= 17 {
        1.0 - 1e-6
    } else {
        1.0 - 1e-12
    }
}

fn record_for<T: Real>(t: &MomentTable<T>, n: usize, phi: ComplexPoly<T>) -> Result<OpucRecord<T>> {
    let alpha = if n == 0 { -Cx::<T>::one() } else { -phi.coeff(0).conj() };
    let gamma = if n == 0 { Cx::zero() } else { phi.coeff(n - 1) };
    let beta = if n == 0 { Cx::zero() } else { phi.coeff(1) };
    let norm_sq = inner_product(t, &phi, &phi)?.re;
    Ok(OpucRecord { n, phi, alpha, gamma, beta, norm_sq })
}

/// `Φ₀…Φ_{n_max}` from the moments.
pub fn szego_sequence<T: Real>(t: &MomentTable<T>, n_max: usize) -> Result<OpucSequence<T>> {
    if t.n < n_max + 1 {
        return Err(Error::MomentRangeExceeded { index: n_max as i64 + 1, n: t.n });
    }
    let limit = breakdown_threshold::<T>();
    let one = ComplexPoly::<T>::one();
    let mut phi = ComplexPoly::one();
    let mut records = vec![record_for(t, 0, phi.clone())?];
    for n in 0..n_max {
        let star = phi.reciprocal(n)?;
        let num = inner_product(t, &phi.shift(1), &one)?;
        let den = inner_product(t, &star, &one)?;
        let alpha_bar = num / den;
        let modulus = cabs_f64(&alpha_bar);
        if !(modulus <= limit) {
            return Err(Error::NumericalBreakdown { n, modulus });
        }
        phi = &phi.shift(1) - &star.scale(&alpha_bar);
        records.push(record_for(t, n + 1, phi.clone())?);
    }
    Ok(OpucSequence { records })
}

/// `αₙ` for `n = 0…n_max` from the explicit formulas.
pub fn verblunsky_closed_form<T: Real>(spec: &WeightSpec, n_max: usize) -> Result<Vec<Cx<T>>> {
    let ratio = |b: Complex64, alternate: bool| -> Vec<Cx<T>> {
        // -(b)ₙ₊₁/(b̄+1)ₙ₊₁, sign alternating for the rotated weight
        let bb = cx_of::<T>(b);
        let mut acc = Cx::<T>::one();
        (0..=n_max)
            .map(|n| {
                let k = cx_real(T::from_i64(n as i64));
                acc = acc.clone() * (bb.clone() + k.clone()) / (bb.conj() + Cx::one() + k);
                if alternate && n % 2 == 0 {
                    acc.clone()
                } else {
                    -acc.clone()
                }
            })
            .collect()
    };
    match spec.family {
        Family::Lebesgue => Ok(vec![Cx::zero(); n_max + 1]),
        Family::SriRanga { b } => Ok(ratio(b, false)),
        Family::RotatedCos { c } => Ok(ratio(c, true)),
        Family::CircularJacobi { lambda } => Ok((0..=n_max)
            .map(|n| {
                let l = T::from_f64(lambda);
                cx_real(-(l.clone() / (T::from_i64(n as i64 + 1) + l)))
            })
            .collect()),
        Family::JacobiOpuc { lambda, beta } => Ok((0..=n_max)
            .map(|n| {
                let (l, b) = (T::from_f64(lambda), T::from_f64(beta));
                let num = if n % 2 == 0 { l.clone() - b.clone() } else { l.clone() + b.clone() };
                cx_real(-(num / (T::from_i64(n as i64 + 1) + l + b)))
            })
            .collect()),
        _ => Err(Error::NoClosedForm(spec.family.name().into())),
    }
}

/// `Φₙ(z)` from the hypergeometric representation.
pub fn mopuc_closed_form<T: Real>(spec: &WeightSpec, n: usize, z: &Cx<T>) -> Result<Cx<T>> {
    let (b, sign, x) = match spec.family {
        Family::SriRanga { b } => (b, T::one(), cx_real(T::one()) - z.clone()),
        Family::RotatedCos { c } => {
            let s = if n.is_multiple_of(2) { T::one() } else { -T::one() };
            (c, s, cx_real(T::one()) + z.clone())
        }
        _ => return Err(Error::NoClosedForm(spec.family.name().into())),
    };
    let bb = cx_of::<T>(b);
    let one = Cx::<T>::one();
    let c = bb.clone() + bb.conj() + one.clone();
    let lead = pochhammer(&c, n) / pochhammer(&(bb.clone() + one.clone()), n);
    Ok(lead * hyp2f1_terminating(n, &(bb + one), &c, &x)? * sign)
}

/// `|⟨Φₙ₋₁, zⁿ⟩ + γ̄ₙ‖Φₙ₋₁‖²|`.
pub fn fato1_check<T: Real>(seq: &OpucSequence<T>, t: &MomentTable<T>, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange { id: "fato1".into(), n: 0 });
    }
    let ip = inner_product(t, seq.phi(n - 1)?, &ComplexPoly::monomial(n))?;
    let rhs = seq.gamma(n)?.conj() * seq.norm_sq(n - 1)?;
    Ok(cabs_f64(&(ip + rhs)))
}

/// Residuals of the standard identities satisfied at degree `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantResiduals {
    pub n: usize,
    /// `|‖Φₙ₊₁‖²/‖Φₙ‖² - (1 - |αₙ|²)|`.
    pub kappa_ratio: f64,
    /// `|γₙ - γₙ₋₁ - ᾱₙ₋₁αₙ₋₂|`.
    pub gamma_recursion: f64,
    /// `|βₙ + ᾱₙ₋₂ + ᾱₙ₋₁γ̄ₙ₋₁|`.
    pub beta_formula: f64,
    pub fato1: f64,
    /// Coefficient-wise `‖Φₙ₊₁* - Φₙ* + αₙzΦₙ‖∞`.
    pub reciprocal_recursion: f64,
    /// `max_{k<n} |⟨Φₙ, zᵏ⟩|`.
    pub orthogonality: f64,
}

impl InvariantResiduals {
    pub fn max(&self) -> f64 {
        [
            self.kappa_ratio,
            self.gamma_recursion,
            self.beta_formula,
            self.fato1,
            self.reciprocal_recursion,
            self.orthogonality,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Identity residuals for `1 <= n < n_max`.
pub fn invariant_residuals<T: Real>(seq: &OpucSequence<T>, t: &MomentTable<T>, n: usize) -> Result<InvariantResiduals> {
    if n == 0 || n >= seq.n_max() {
        return Err(Error::OutOfRange { id: "invariants".into(), n: n as i64 });
    }
    let a = |k: i64| seq.alpha(k);
    let an = a(n as i64)?;
    let ratio = seq.norm_sq(n + 1)? / seq.norm_sq(n)?;
    let kappa_ratio = (ratio - (T::one() - an.norm_sqr())).abs().to_f64();
    let gamma_recursion = cabs_f64(&(seq.gamma(n)? - seq.gamma(n - 1)? - a(n as i64 - 1)?.conj() * a(n as i64 - 2)?));
    let beta_formula =
        cabs_f64(&(seq.beta(n)? + a(n as i64 - 2)?.conj() + a(n as i64 - 1)?.conj() * seq.gamma(n - 1)?.conj()));
    let next_star = seq.phi_star(n + 1)?;
    let built = &seq.phi_star(n)? - &seq.phi(n)?.shift(1).scale(&an);
    let diff = &next_star - &built;
    let reciprocal_recursion = diff.max_abs_coeff();
    let mut orthogonality: f64 = 0.0;
    for k in 0..n {
        let v = inner_product(t, seq.phi(n)?, &ComplexPoly::monomial(k))?;
        orthogonality = orthogonality.max(cabs_f64(&v));
    }
    Ok(InvariantResiduals {
        n,
        kappa_ratio,
        gamma_recursion,
        beta_formula,
        fato1: fato1_check(seq, t, n)?,
        reciprocal_recursion,
        orthogonality,
    })
}

/// For the weight with parameter `b`: `|αₙᾱₙ₋₁ - |b|²/[(b̄+n)(b̄+n+1)]|` and `|γₙ - nb̄/(b+n)|`.
pub fn sri_ranga_coefficient_residuals<T: Real>(seq: &OpucSequence<T>, b: Complex64, n: usize) -> Result<(f64, f64)> {
    let bb = cx_of::<T>(b);
    let nn = cx_real(T::from_i64(n as i64));
    let a_n = seq.alpha(n as i64)?;
    let a_prev = seq.alpha(n as i64 - 1)?;
    let want = cx_real(bb.norm_sqr()) / ((bb.conj() + nn.clone()) * (bb.conj() + nn.clone() + Cx::one()));
    let product = cabs_f64(&(a_n * a_prev.conj() - want));
    let gamma = cabs_f64(&(seq.gamma(n)? - nn.clone() * bb.conj() / (bb + nn)));
    Ok((product, gamma))
}

/// `max |xᵢ - yᵢ|` over the common prefix.
pub fn max_deviation<T: Real>(x: &[Cx<T>], y: &[Cx<T>]) -> f64 {
    x.iter().zip(y).map(|(a, b)| cabs(&(a.clone() - b.clone())).to_f64()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cx, with_digits, BigReal, Precision};
    use crate::moments::compute_moments;
    use crate::weights::sample_catalog;
    use num_complex::Complex64 as C;
    use proptest::prelude::*;

    fn seq_for(spec: &WeightSpec, n_max: usize) -> (OpucSequence<f64>, MomentTable<f64>) {
        let t = compute_moments(spec, n_max + 2, Precision::Double).unwrap();
        (szego_sequence(&t, n_max).unwrap(), t)
    }

    #[test]
    fn lebesgue_gives_monomials() {
        let (s, _) = seq_for(&WeightSpec::lebesgue(), 8);
        for n in 0..=8 {
            assert_eq!(s.phi(n).unwrap(), &ComplexPoly::monomial(n));
        }
        assert_eq!(s.alpha(-1).unwrap(), cx(-1.0, 0.0));
        assert!(s.verblunsky().iter().all(|a| a.is_zero()));
    }

    #[test]
    fn circular_jacobi_from_moments() {
        let (s, _) = seq_for(&WeightSpec::circular_jacobi(1.0).unwrap(), 6);
        assert!((s.alpha(0).unwrap() - cx(-0.5, 0.0)).norm() < 1e-12);
        assert!((s.alpha(1).unwrap() - cx(-1.0 / 3.0, 0.0)).norm() < 1e-12);
        // γ₁ = ᾱ₀α₋₁
        assert!((s.gamma(1).unwrap() - cx(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sri_ranga_first_coefficient() {
        let b = C::new(1.0, 0.5);
        let (s, _) = seq_for(&WeightSpec::sri_ranga(b).unwrap(), 3);
        let want = -b / (b.conj() + 1.0);
        assert!((s.alpha(0).unwrap() - want).norm() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let j = verblunsky_closed_form::<f64>(&WeightSpec::jacobi(0.8, 0.8).unwrap(), 3).unwrap();
        assert_eq!(j[0], cx(0.0, 0.0));
        let j = verblunsky_closed_form::<f64>(&WeightSpec::jacobi(1.0, 1.0).unwrap(), 3).unwrap();
        assert!((j[1] - cx(-0.5, 0.0)).norm() < 1e-15);
        let c = C::new(0.6, 0.4);
        let rc = verblunsky_closed_form::<f64>(&WeightSpec::rotated_cos(c).unwrap(), 3).unwrap();
        // (-1)ⁿ (c)ₙ₊₁/(c̄+1)ₙ₊₁; the moment route confirms the sign
        let want = c * (c + 1.0) / ((c.conj() + 1.0) * (c.conj() + 2.0));
        assert!((rc[1] + want).norm() < 1e-15);
        assert!((rc[0] - c / (c.conj() + 1.0)).norm() < 1e-15);
        let cj = verblunsky_closed_form::<f64>(&WeightSpec::circular_jacobi(1.0).unwrap(), 3).unwrap();
        assert_eq!(cj[2], cx(-0.25, 0.0));
        assert!(matches!(
            verblunsky_closed_form::<f64>(&WeightSpec::bessel(1.0).unwrap(), 3),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn routes_agree_in_double() {
        let specs = [
            WeightSpec::sri_ranga(C::new(1.0, 0.5)).unwrap(),
            WeightSpec::sri_ranga(C::new(0.3, -0.7)).unwrap(),
            WeightSpec::circular_jacobi(0.25).unwrap(),
            WeightSpec::jacobi(0.7, 0.4).unwrap(),
            WeightSpec::jacobi(-0.3, 1.2).unwrap(),
            WeightSpec::rotated_cos(C::new(0.6, 0.4)).unwrap(),
        ];
        for spec in specs {
            let (s, _) = seq_for(&spec, 13);
            let closed = verblunsky_closed_form::<f64>(&spec, 12).unwrap();
            let d = max_deviation(&s.verblunsky(), &closed);
            assert!(d < 1e-8, "{:?}: {d}", spec.family);
        }
    }

    #[test]
    fn hypergeometric_polynomials() {
        for spec in
            [WeightSpec::sri_ranga(C::new(1.0, 0.5)).unwrap(), WeightSpec::rotated_cos(C::new(0.6, 0.4)).unwrap()]
        {
            let (s, _) = seq_for(&spec, 8);
            let closed = verblunsky_closed_form::<f64>(&spec, 8).unwrap();
            for n in 0..=8 {
                for z in [cx(0.3, 0.2), cx(-0.7, 0.5), cx(1.1, -0.4)] {
                    let a = mopuc_closed_form(&spec, n, &z).unwrap();
                    let b = s.phi(n).unwrap().eval(&z);
                    assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()), "{:?} n={n}", spec.family);
                }
                let at0: C = mopuc_closed_form(&spec, n, &cx(0.0, 0.0)).unwrap();
                let want: C = if n == 0 { cx(1.0, 0.0) } else { -closed[n - 1].conj() };
                assert!((at0 - want).norm() < 1e-10);
            }
        }
        let b = C::new(1.0, 0.5);
        let spec = WeightSpec::sri_ranga(b).unwrap();
        let v: C = mopuc_closed_form(&spec, 3, &cx(1.0, 0.0)).unwrap();
        let c = b + b.conj() + 1.0;
        let want = c * (c + 1.0) * (c + 2.0) / ((b + 1.0) * (b + 2.0) * (b + 3.0));
        assert!((v - want).norm() < 1e-14);
        assert!(matches!(
            mopuc_closed_form(&WeightSpec::bessel(1.0).unwrap(), 2, &cx::<f64>(0.0, 0.0)),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn invariants_across_catalog() {
        for spec in sample_catalog() {
            let (s, t) = seq_for(&spec, 13);
            for n in 1..13 {
                let r = invariant_residuals(&s, &t, n).unwrap();
                assert!(r.max() < 1e-8, "{:?} n={n}: {r:?}", spec.family);
            }
        }
    }

    #[test]
    fn sri_ranga_coefficients() {
        let b = C::new(1.0, 0.0);
        let (s, t) = seq_for(&WeightSpec::sri_ranga(b).unwrap(), 11);
        for n in 1..=10 {
            assert!(fato1_check(&s, &t, n).unwrap() < 1e-9);
            let (p, g) = sri_ranga_coefficient_residuals(&s, b, n).unwrap();
            assert!(p < 1e-8 && g < 1e-8, "n={n}: {p} {g}");
        }
    }

    #[test]
    fn breakdown_is_reported() {
        // moments of a point mass at z = 1
        let mu = vec![cx::<f64>(1.0, 0.0); 5];
        let meta = crate::quadrature::QuadratureMeta { rule: "test".into(), level: 0, nodes: 0, estimated_error: 0.0 };
        let t = MomentTable::from_nonnegative(mu, Precision::Double, meta).unwrap();
        assert!(matches!(szego_sequence(&t, 3), Err(Error::NumericalBreakdown { n: 0, .. })));
    }

    #[test]
    fn exports() {
        let (s, _) = seq_for(&WeightSpec::circular_jacobi(1.0).unwrap(), 3);
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().nth(2).unwrap().starts_with("1,-5.0000000000000"));
        let j = serde_json::to_value(s.to_json()).unwrap();
        assert_eq!(j["records"][3]["coefficients"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn extended_routes_agree() {
        with_digits(50, || {
            let b = C::new(0.3, -0.7);
            let spec = WeightSpec::sri_ranga(b).unwrap();
            let t = compute_moments::<BigReal>(&spec, 32, Precision::Extended { digits: 50 }).unwrap();
            let s = szego_sequence(&t, 31).unwrap();
            let closed = verblunsky_closed_form::<BigReal>(&spec, 30).unwrap();
            let d = max_deviation(&s.verblunsky(), &closed);
            assert!(d < 1e-20, "{d}");
        });
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_weights_stay_in_the_disk(re in -0.3f64..2.5, im in -2.0f64..2.0, t in 0.1f64..3.0) {
            for spec in [WeightSpec::sri_ranga(C::new(re, im)).unwrap(), WeightSpec::bessel(t).unwrap()] {
                let (s, m) = seq_for(&spec, 8);
                for a in s.verblunsky() {
                    prop_assert!(cabs_f64(&a) < 1.0);
                }
                for n in 1..8 {
                    let r = invariant_residuals(&s, &m, n).unwrap();
                    prop_assert!(r.max() < 1e-8, "{spec:?} n = {n}: {r:?}");
                }
            }
        }

        #[test]
        fn sequence_from_its_own_coefficients(re in -0.3f64..2.5, im in -2.0f64..2.0) {
            let spec = WeightSpec::sri_ranga(C::new(re, im)).unwrap();
            let (s, _) = seq_for(&spec, 8);
            let back = OpucSequence::from_verblunsky(&s.verblunsky()).unwrap();
            for n in 0..=8 {
                prop_assert!(max_deviation(back.phi(n).unwrap().coeffs(), s.phi(n).unwrap().coeffs()) < 1e-12);
            }
        }
    }
}
