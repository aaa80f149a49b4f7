//! Catalog of semi-classical weights on the unit circle and their Pearson pairs.
//!
//! Every weight satisfies `d/dθ [A(e^{iθ}) w(θ)] = B(e^{iθ}) w(θ)` for each
//! of its pairs, equivalently `w'/w = (B - izA')/A` with `z = e^{iθ}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    bessel_i0, cabs, cabs_f64, carg, cis, cx, cx_of, cx_real, log_gamma_complex, ComplexPoly, Cx, Real,
};
use crate::error::{Error, Result};
use crate::report::{offset_grid, ResidualReport};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Lebesgue,
    /// `w = exp(2 Im(u e^{iθ}))`.
    ExpSine {
        u: Complex64,
    },
    /// `w = e^{t cos θ}`.
    Bessel {
        t: f64,
    },
    /// `w = sin^{2λ}(θ/2)`.
    CircularJacobi {
        lambda: f64,
    },
    /// `w = sin^{2λ}(θ/2) |cos(θ/2)|^{2β}`.
    JacobiOpuc {
        lambda: f64,
        beta: f64,
    },
    /// `w = e^{-ηθ} sin^{2λ}(θ/2) |cos(θ/2)|^{2β}`.
    GeneralizedJacobi {
        lambda: f64,
        beta: f64,
        eta: f64,
    },
    /// `w = e^{-ηθ} sin^{2λ}(θ/2)` with `b = λ + iη`.
    SriRanga {
        b: Complex64,
    },
    /// `w = e^{-ηθ} cos^{2β}(θ/2)` on `[-π, π]` with `c = β + iη`.
    RotatedCos {
        c: Complex64,
    },
    /// `w = exp(2 Re(u/r̄) arg(1 - r e^{-iθ})) |e^{iθ} - r|^{-2 Im(u/r̄)}`.
    HalfPlanePole {
        u: Complex64,
        r: Complex64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Lebesgue => "lebesgue",
            Family::ExpSine { .. } => "expsine",
            Family::Bessel { .. } => "bessel",
            Family::CircularJacobi { .. } => "cjacobi",
            Family::JacobiOpuc { .. } => "jacobi",
            Family::GeneralizedJacobi { .. } => "genjacobi",
            Family::SriRanga { .. } => "sriranga",
            Family::RotatedCos { .. } => "rotcos",
            Family::HalfPlanePole { .. } => "halfplane",
        }
    }

    /// Named parameters, real ones with zero imaginary part.
    pub fn parameters(&self) -> BTreeMap<&'static str, Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let mut m = BTreeMap::new();
        match *self {
            Family::Lebesgue => {}
            Family::ExpSine { u } => {
                m.insert("u", u);
            }
            Family::Bessel { t } => {
                m.insert("t", r(t));
            }
            Family::CircularJacobi { lambda } => {
                m.insert("lambda", r(lambda));
            }
            Family::JacobiOpuc { lambda, beta } => {
                m.insert("lambda", r(lambda));
                m.insert("beta", r(beta));
            }
            Family::GeneralizedJacobi { lambda, beta, eta } => {
                m.insert("lambda", r(lambda));
                m.insert("beta", r(beta));
                m.insert("eta", r(eta));
            }
            Family::SriRanga { b } => {
                m.insert("b", b);
            }
            Family::RotatedCos { c } => {
                m.insert("c", c);
            }
            Family::HalfPlanePole { u, r: root } => {
                m.insert("u", u);
                m.insert("r", root);
            }
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let exponent = |name: &str, x: f64| -> Result<()> {
            if !(x > -0.5) || !x.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {x} must exceed -1/2")));
            }
            Ok(())
        };
        let finite = |name: &str, z: Complex64| -> Result<()> {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
            Ok(())
        };
        match *self {
            Family::Lebesgue => Ok(()),
            Family::ExpSine { u } => finite("u", u),
            Family::Bessel { t } => {
                if !(t > 0.0) || !t.is_finite() {
                    return bad(format!("t = {t} must be positive"));
                }
                Ok(())
            }
            Family::CircularJacobi { lambda } => exponent("lambda", lambda),
            Family::JacobiOpuc { lambda, beta } => {
                exponent("lambda", lambda)?;
                exponent("beta", beta)
            }
            Family::GeneralizedJacobi { lambda, beta, eta } => {
                exponent("lambda", lambda)?;
                exponent("beta", beta)?;
                finite("eta", Complex64::new(eta, 0.0))
            }
            Family::SriRanga { b } => {
                finite("b", b)?;
                exponent("Re b", b.re)
            }
            Family::RotatedCos { c } => {
                finite("c", c)?;
                exponent("Re c", c.re)
            }
            Family::HalfPlanePole { u, r } => {
                finite("u", u)?;
                finite("r", r)?;
                let m = r.norm();
                if !(m > 0.0 && m < 1.0) {
                    return bad(format!("|r| = {m} must lie in (0, 1)"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub family: Family,
    pub normalized: bool,
}

impl WeightSpec {
    /// Normalized spec, after checking the parameter domain.
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(WeightSpec { family, normalized: true })
    }

    pub fn raw(family: Family) -> Result<Self> {
        Ok(WeightSpec { normalized: false, ..Self::new(family)? })
    }

    pub fn lebesgue() -> Self {
        WeightSpec { family: Family::Lebesgue, normalized: true }
    }
    pub fn exp_sine(u: Complex64) -> Result<Self> {
        Self::new(Family::ExpSine { u })
    }
    pub fn bessel(t: f64) -> Result<Self> {
        Self::new(Family::Bessel { t })
    }
    pub fn circular_jacobi(lambda: f64) -> Result<Self> {
        Self::new(Family::CircularJacobi { lambda })
    }
    pub fn jacobi(lambda: f64, beta: f64) -> Result<Self> {
        Self::new(Family::JacobiOpuc { lambda, beta })
    }
    pub fn generalized_jacobi(lambda: f64, beta: f64, eta: f64) -> Result<Self> {
        Self::new(Family::GeneralizedJacobi { lambda, beta, eta })
    }
    pub fn sri_ranga(b: Complex64) -> Result<Self> {
        Self::new(Family::SriRanga { b })
    }
    pub fn rotated_cos(c: Complex64) -> Result<Self> {
        Self::new(Family::RotatedCos { c })
    }
    pub fn half_plane_pole(u: Complex64, r: Complex64) -> Result<Self> {
        Self::new(Family::HalfPlanePole { u, r })
    }
    /// Half-plane pole weight in terms of `b₀ = -ū/r̄`.
    pub fn half_plane_pole_b0(b0: Complex64, r: Complex64) -> Result<Self> {
        Self::half_plane_pole(-(b0.conj() * r), r)
    }

    pub fn with_normalized(self, normalized: bool) -> Self {
        WeightSpec { normalized, ..self }
    }

    /// Angle interval `[start, start + 2π]` the weight is written on.
    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            Family::RotatedCos { .. } => (-PI, PI),
            _ => (0.0, 2.0 * PI),
        }
    }

    /// Points of the closed domain where `w` may be non-smooth.
    pub fn singular_angles(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        match self.family {
            Family::CircularJacobi { .. } | Family::SriRanga { .. } | Family::RotatedCos { .. } => vec![a, b],
            Family::JacobiOpuc { .. } | Family::GeneralizedJacobi { .. } => vec![a, PI, b],
            _ => vec![],
        }
    }

    pub fn has_endpoint_singularities(&self) -> bool {
        !self.singular_angles().is_empty()
    }
}

/// Angle with `sin²(θ/2)`, `cos²(θ/2)` and `e^{iθ}` carried separately so
/// they stay accurate next to the zeros of either factor.
#[derive(Clone, Debug)]
pub struct AnglePoint<T: Real> {
    pub theta: T,
    pub s2: T,
    pub c2: T,
    pub z: Cx<T>,
}

impl<T: Real> AnglePoint<T> {
    pub fn new(theta: T) -> Self {
        let h = theta.clone() / T::from_f64(2.0);
        let (s, c) = (h.sin(), h.cos());
        let z = cis(&theta);
        AnglePoint { theta, s2: s.clone() * s, c2: c.clone() * c, z }
    }

    /// `θ = kπ + sign·d` for `k ∈ {-1, 0, 1, 2}` and an exact offset `d ≥ 0`.
    pub fn near(k: i32, sign: i32, d: &T) -> Self {
        let two = T::from_f64(2.0);
        let half = d.clone() / two.clone();
        let (sh, ch) = (half.sin(), half.cos());
        let small = sh.clone() * sh.clone();
        let large = ch.clone() * ch.clone();
        let cos_d = T::one() - two.clone() * small.clone();
        let sin_d = two * sh * ch * T::from_i64(sign as i64);
        let mut z = Cx::new(cos_d, sin_d);
        if k.rem_euclid(2) == 1 {
            z = -z;
        }
        let theta = T::pi() * T::from_i64(k as i64) + d.clone() * T::from_i64(sign as i64);
        if k.rem_euclid(2) == 1 {
            AnglePoint { theta, s2: large, c2: small, z }
        } else {
            AnglePoint { theta, s2: small, c2: large, z }
        }
    }

    pub fn z(&self) -> Cx<T> {
        self.z.clone()
    }
}

fn power<T: Real>(base: &T, exponent: f64, theta: f64) -> Result<T> {
    if base.is_zero() {
        return if exponent > 0.0 {
            Ok(T::zero())
        } else if exponent == 0.0 {
            Ok(T::one())
        } else {
            Err(Error::SingularPoint(theta))
        };
    }
    if exponent == 0.0 {
        return Ok(T::one());
    }
    Ok((T::from_f64(exponent) * base.ln()).exp())
}

/// Unnormalized `w` at a prepared angle.
pub fn raw_weight<T: Real>(family: &Family, p: &AnglePoint<T>) -> Result<T> {
    let th = p.theta.to_f64();
    let v = match *family {
        Family::Lebesgue => T::one() / (T::pi() * T::from_f64(2.0)),
        Family::ExpSine { u } => {
            let e = (p.theta.sin() * T::from_f64(u.re) + p.theta.cos() * T::from_f64(u.im)) * T::from_f64(2.0);
            e.exp()
        }
        Family::Bessel { t } => (p.theta.cos() * T::from_f64(t)).exp(),
        Family::CircularJacobi { lambda } => power(&p.s2, lambda, th)?,
        Family::JacobiOpuc { lambda, beta } => power(&p.s2, lambda, th)? * power(&p.c2, beta, th)?,
        Family::GeneralizedJacobi { lambda, beta, eta } => {
            (-(T::from_f64(eta) * p.theta.clone())).exp() * power(&p.s2, lambda, th)? * power(&p.c2, beta, th)?
        }
        Family::SriRanga { b } => (-(T::from_f64(b.im) * p.theta.clone())).exp() * power(&p.s2, b.re, th)?,
        Family::RotatedCos { c } => (-(T::from_f64(c.im) * p.theta.clone())).exp() * power(&p.c2, c.re, th)?,
        Family::HalfPlanePole { u, r } => {
            let (ur, rr) = (cx_of::<T>(u), cx_of::<T>(r));
            let q = ur / rr.conj();
            let z = p.z();
            let one = Cx::<T>::one();
            let arg = carg(&(one - rr.clone() * z.conj()));
            let modulus = cabs(&(z - rr));
            let two = T::from_f64(2.0);
            (two.clone() * q.re * arg - two * q.im * modulus.ln()).exp()
        }
    };
    Ok(v)
}

/// Analytic `w'(θ)/w(θ)`.
pub fn log_derivative<T: Real>(family: &Family, theta: &T) -> Result<T> {
    let half = theta.clone() / T::from_f64(2.0);
    let cot = |lambda: f64| -> Result<T> {
        if lambda == 0.0 {
            return Ok(T::zero());
        }
        let s = half.sin();
        if s.is_zero() {
            return Err(Error::SingularPoint(theta.to_f64()));
        }
        Ok(T::from_f64(lambda) * half.cos() / s)
    };
    let tan = |beta: f64| -> Result<T> {
        if beta == 0.0 {
            return Ok(T::zero());
        }
        let c = half.cos();
        if c.is_zero() {
            return Err(Error::SingularPoint(theta.to_f64()));
        }
        Ok(T::from_f64(beta) * half.sin() / c)
    };
    let v = match *family {
        Family::Lebesgue => T::zero(),
        Family::ExpSine { u } => (T::from_f64(u.re) * theta.cos() - T::from_f64(u.im) * theta.sin()) * T::from_f64(2.0),
        Family::Bessel { t } => -(T::from_f64(t) * theta.sin()),
        Family::CircularJacobi { lambda } => cot(lambda)?,
        Family::JacobiOpuc { lambda, beta } => cot(lambda)? - tan(beta)?,
        Family::GeneralizedJacobi { lambda, beta, eta } => cot(lambda)? - tan(beta)? - T::from_f64(eta),
        Family::SriRanga { b } => cot(b.re)? - T::from_f64(b.im),
        Family::RotatedCos { c } => -tan(c.re)? - T::from_f64(c.im),
        Family::HalfPlanePole { u, r } => {
            let (ur, rr) = (cx_of::<T>(u), cx_of::<T>(r));
            let q = ur / rr.conj();
            let z = cis(theta);
            let rz = rr.clone() * z.conj();
            let first = (rz.clone() / (Cx::<T>::one() - rz)).re;
            let second = (z.clone() / (z - rr)).im;
            let two = T::from_f64(2.0);
            two.clone() * q.re * first + two * q.im * second
        }
    };
    Ok(v)
}

/// `w(θ)` with `τ` applied when `spec.normalized` is set.
pub fn weight_eval<T: Real>(spec: &WeightSpec, theta: &T) -> Result<T> {
    let (a, b) = spec.domain();
    let th = theta.to_f64();
    if th < a - 1e-12 || th > b + 1e-12 {
        return Err(Error::OutOfDomain(th));
    }
    let raw = raw_weight(&spec.family, &AnglePoint::new(theta.clone()))?;
    if spec.normalized {
        Ok(raw * normalization_constant::<T>(spec)?)
    } else {
        Ok(raw)
    }
}

/// Closed-form `τ` where one is recorded.
pub fn closed_form_tau<T: Real>(family: &Family) -> Result<Option<T>> {
    let two_pi = T::pi() * T::from_f64(2.0);
    let sri_ranga = |b: Complex64| -> Result<T> {
        let lam = T::from_f64(b.re);
        let g = log_gamma_complex(&(cx_of::<T>(b) + Cx::one()))?;
        let g2 = log_gamma_complex(&cx_real(lam.clone() * T::from_f64(2.0) + T::one()))?;
        let ln_tau =
            T::pi() * T::from_f64(b.im) + lam * T::from_f64(2.0) * T::from_f64(2.0).ln() + g.re * T::from_f64(2.0)
                - two_pi.ln()
                - g2.re;
        Ok(ln_tau.exp())
    };
    Ok(match *family {
        Family::Lebesgue => Some(T::one()),
        Family::Bessel { t } => Some(T::one() / (two_pi.clone() * bessel_i0(&T::from_f64(t)))),
        Family::SriRanga { b } => Some(sri_ranga(b)?),
        Family::CircularJacobi { lambda } => Some(sri_ranga(Complex64::new(lambda, 0.0))?),
        _ => None,
    })
}

/// `τ` with `τ ∫ w = 1`; closed form where recorded, quadrature otherwise.
pub fn normalization_constant<T: Real>(spec: &WeightSpec) -> Result<T> {
    match closed_form_tau::<T>(&spec.family)? {
        Some(t) => Ok(t),
        None => {
            let raw = spec.with_normalized(false);
            let m = crate::quadrature::integrate_moments::<T>(&raw, 0, None)?;
            Ok(T::one() / m.values[0].re.clone())
        }
    }
}

/// Polynomials `A` (monic) and `B` of a Pearson-type equation with class `(p, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonPair<T: Real> {
    pub a: ComplexPoly<T>,
    pub b: ComplexPoly<T>,
    pub class_pq: (i64, i64),
    pub label: String,
}

impl<T: Real> PearsonPair<T> {
    pub fn new(a: ComplexPoly<T>, b: ComplexPoly<T>, label: impl Into<String>) -> Self {
        let class_pq = class_of(&a, &b);
        PearsonPair { a, b, class_pq, label: label.into() }
    }

    /// `a₀, a₁, a₂`.
    pub fn a_coeffs(&self) -> [Cx<T>; 3] {
        [self.a.coeff(0), self.a.coeff(1), self.a.coeff(2)]
    }

    /// `b₀, b₁, b₂`.
    pub fn b_coeffs(&self) -> [Cx<T>; 3] {
        [self.b.coeff(0), self.b.coeff(1), self.b.coeff(2)]
    }

    /// `(B(z) - izA'(z)) / A(z)`.
    pub fn log_derivative_rhs(&self, z: &Cx<T>) -> Cx<T> {
        let i = Cx::<T>::i();
        (self.b.eval(z) - i * z.clone() * self.a.derivative().eval(z)) / self.a.eval(z)
    }

    pub fn to_f64(&self) -> PearsonPair<f64> {
        let conv = |p: &ComplexPoly<T>| {
            ComplexPoly::new(p.coeffs().iter().map(|c| cx::<f64>(c.re.to_f64(), c.im.to_f64())).collect())
        };
        PearsonPair { a: conv(&self.a), b: conv(&self.b), class_pq: self.class_pq, label: self.label.clone() }
    }
}

/// `p = deg A`, `q = max{p - 1, deg((p-1)A + iB)}`.
pub fn class_of<T: Real>(a: &ComplexPoly<T>, b: &ComplexPoly<T>) -> (i64, i64) {
    let p = a.degree() as i64;
    let combo = &a.scale(&cx_real(T::from_i64(p - 1))) + &b.scale(&Cx::i());
    let tol = 1e-12 * (1.0 + a.max_abs_coeff() + b.max_abs_coeff());
    let q = match combo.effective_degree(tol) {
        Some(d) => (d as i64).max(p - 1),
        None => p - 1,
    };
    (p, q)
}

fn poly<T: Real>(c: Vec<Cx<T>>) -> ComplexPoly<T> {
    ComplexPoly::new(c)
}

fn c<T: Real>(z: Complex64) -> Cx<T> {
    cx_of(z)
}

fn ci<T: Real>(z: Cx<T>) -> Cx<T> {
    z * Cx::<T>::i()
}

/// Root used for the second Lebesgue pair `A = z - r`.
pub const LEBESGUE_ROOT: f64 = 0.5;

/// The pair `((z-1)(z-r), i[(b+2)z² + (b̄ - 1 - r(b+1))z - r b̄])` of the weight with parameter `b`.
pub fn sri_ranga_pair_with_root<T: Real>(b: Complex64, r: Complex64, label: &str) -> PearsonPair<T> {
    let (bb, rr) = (c::<T>(b), c::<T>(r));
    let one = Cx::<T>::one();
    let a = poly(vec![rr.clone(), -(rr.clone() + one.clone()), one.clone()]);
    let b2 = bb.clone() + cx_real(T::from_f64(2.0));
    let b1 = bb.conj() - one.clone() - rr.clone() * (bb.clone() + one);
    let b0 = -(rr * bb.conj());
    PearsonPair::new(a, poly(vec![ci(b0), ci(b1), ci(b2)]), label)
}

/// The pair `((z+1)(z-r), i[(c+2)z² - (c̄ - 1 + r(c+1))z + r c̄])` of the weight with parameter `c`.
pub fn rotated_cos_pair_with_root<T: Real>(cc: Complex64, r: Complex64, label: &str) -> PearsonPair<T> {
    let (c0, rr) = (c::<T>(cc), c::<T>(r));
    let one = Cx::<T>::one();
    let a = poly(vec![-rr.clone(), one.clone() - rr.clone(), one.clone()]);
    let b2 = c0.clone() + cx_real(T::from_f64(2.0));
    let b1 = -(c0.conj() - one.clone() + rr.clone() * (c0.clone() + one));
    let b0 = rr * c0.conj();
    PearsonPair::new(a, poly(vec![ci(b0), ci(b1), ci(b2)]), label)
}

/// Every Pearson pair recorded for the family.
pub fn pearson_pairs<T: Real>(spec: &WeightSpec) -> Vec<PearsonPair<T>> {
    let zero = Cx::<T>::zero();
    let one = Cx::<T>::one();
    let two = cx_real(T::from_f64(2.0));
    let sri_ranga = |b: Complex64| -> Vec<PearsonPair<T>> {
        let bb = c::<T>(b);
        let bc = bb.conj();
        let deg1 = PearsonPair::new(
            poly(vec![-one.clone(), one.clone()]),
            poly(vec![ci(bc.clone()), ci(bb.clone() + one.clone())]),
            "A=z-1",
        );
        let sq = PearsonPair::new(
            poly(vec![-one.clone(), zero.clone(), one.clone()]),
            poly(vec![ci(bc.clone()), ci(bb.clone() + bc.clone()), ci(bb.clone() + two.clone())]),
            "A=z^2-1",
        );
        let double = PearsonPair::new(
            poly(vec![one.clone(), -two.clone(), one.clone()]),
            poly(vec![ci(-bc.clone()), ci(bc.clone() - bb.clone() - two.clone()), ci(bb.clone() + two.clone())]),
            "A=(z-1)^2",
        );
        let zz = PearsonPair::new(
            poly(vec![zero.clone(), -one.clone(), one.clone()]),
            poly(vec![zero.clone(), ci(bc - one.clone()), ci(bb + two.clone())]),
            "A=z(z-1)",
        );
        vec![deg1, sq, double, zz]
    };
    match spec.family {
        Family::Lebesgue => vec![
            PearsonPair::new(ComplexPoly::one(), ComplexPoly::zero(), "A=1"),
            PearsonPair::new(
                poly(vec![cx_real(T::from_f64(-LEBESGUE_ROOT)), one.clone()]),
                poly(vec![zero.clone(), Cx::i()]),
                "A=z-r",
            ),
        ],
        Family::ExpSine { u } => {
            let uu = c::<T>(u);
            vec![PearsonPair::new(poly(vec![zero.clone(), one.clone()]), poly(vec![uu.conj(), Cx::i(), uu]), "A=z")]
        }
        Family::Bessel { t } => {
            let half_it = Cx::new(T::zero(), T::from_f64(t) / T::from_f64(2.0));
            vec![PearsonPair::new(
                poly(vec![zero.clone(), one.clone()]),
                poly(vec![-half_it.clone(), Cx::i(), half_it]),
                "A=z",
            )]
        }
        Family::CircularJacobi { lambda } => sri_ranga(Complex64::new(lambda, 0.0)),
        Family::SriRanga { b } => sri_ranga(b),
        Family::JacobiOpuc { lambda, beta } => vec![jacobi_pair(lambda, beta, 0.0)],
        Family::GeneralizedJacobi { lambda, beta, eta } => vec![jacobi_pair(lambda, beta, eta)],
        Family::RotatedCos { c: cc } => {
            let c0 = c::<T>(cc);
            let deg1 = PearsonPair::new(
                poly(vec![one.clone(), one.clone()]),
                poly(vec![ci(-c0.conj()), ci(c0 + one.clone())]),
                "A=z+1",
            );
            vec![
                deg1,
                rotated_cos_pair_with_root(cc, Complex64::new(1.0, 0.0), "A=z^2-1"),
                rotated_cos_pair_with_root(cc, Complex64::new(-1.0, 0.0), "A=(z+1)^2"),
                rotated_cos_pair_with_root(cc, Complex64::new(0.0, 0.0), "A=z(z+1)"),
            ]
        }
        Family::HalfPlanePole { u, r } => {
            let (uu, rr) = (c::<T>(u), c::<T>(r));
            let rb = rr.conj();
            let inv_rb = one.clone() / rb.clone();
            let a = poly(vec![rr.clone() * inv_rb.clone(), -(rr.clone() + inv_rb.clone()), one.clone()]);
            let r2 = rr.norm_sqr();
            let b2 = Cx::new(T::zero(), T::from_f64(2.0)) - uu.clone() / rb.clone();
            let re_ur = (uu.clone() * rr.clone()).re;
            let b1 = Cx::new(re_ur * T::from_f64(2.0), -(r2 + T::one())) / rb.clone();
            let b0 = -(uu.conj() / rb);
            vec![PearsonPair::new(a, poly(vec![b0, b1, b2]), "A=(z-r)(z-1/conj(r))")]
        }
    }
}

fn jacobi_pair<T: Real>(lambda: f64, beta: f64, eta: f64) -> PearsonPair<T> {
    let one = Cx::<T>::one();
    let d = cx::<T>(lambda + beta, eta);
    let b2 = d.clone() + cx_real(T::from_f64(2.0));
    let b1 = cx_real((T::from_f64(lambda) - T::from_f64(beta)) * T::from_f64(2.0));
    PearsonPair::new(poly(vec![-one.clone(), Cx::zero(), one]), poly(vec![ci(d.conj()), ci(b1), ci(b2)]), "A=z^2-1")
}

/// Sup over an offset grid of `|w'/w - (B - izA')/A|`.
pub fn pearson_residual<T: Real>(
    spec: &WeightSpec,
    pair: &PearsonPair<T>,
    grid_size: usize,
    tolerance: f64,
) -> Result<ResidualReport> {
    let (start, _) = spec.domain();
    let grid = offset_grid(start, grid_size);
    let scale_a = pair.a.max_abs_coeff();
    let mut residuals = Vec::with_capacity(grid.len());
    let mut scale: f64 = 0.0;
    for &th in &grid {
        let theta = T::from_f64(th);
        let z = cis(&theta);
        if cabs_f64(&pair.a.eval(&z)) <= 1e-13 * scale_a {
            return Err(Error::GridOnSingularity(th));
        }
        let lhs = log_derivative(&spec.family, &theta)?;
        let rhs = pair.log_derivative_rhs(&z);
        scale = scale.max(lhs.abs().to_f64());
        residuals.push(cabs_f64(&(cx_real(lhs) - rhs)));
    }
    Ok(ResidualReport::new(grid, residuals, tolerance, scale))
}

/// `A(e^{i·start}) = 0`, or `w` takes equal values at both ends of its domain.
pub fn boundary_check<T: Real>(spec: &WeightSpec, pair: &PearsonPair<T>) -> bool {
    let (a, b) = spec.domain();
    let z0 = cis(&T::from_f64(a));
    let a_at = pair.a.eval(&z0);
    let scale: f64 = pair.a.coeffs().iter().map(cabs_f64).sum();
    if cabs_f64(&a_at) <= 8.0 * f64::EPSILON * scale {
        return true;
    }
    let raw = spec.with_normalized(false);
    match (weight_eval::<T>(&raw, &T::from_f64(a)), weight_eval::<T>(&raw, &T::from_f64(b))) {
        (Ok(wa), Ok(wb)) => {
            let (wa, wb) = (wa.to_f64(), wb.to_f64());
            (wa - wb).abs() <= 1e-10 * wa.abs().max(wb.abs()).max(1e-300)
        }
        _ => false,
    }
}

/// A representative parameter choice for every family.
pub fn sample_catalog() -> Vec<WeightSpec> {
    let z = Complex64::new;
    vec![
        WeightSpec::lebesgue(),
        WeightSpec::exp_sine(z(0.0, 0.5)).unwrap(),
        WeightSpec::exp_sine(z(0.3, 0.4)).unwrap(),
        WeightSpec::bessel(1.0).unwrap(),
        WeightSpec::circular_jacobi(0.25).unwrap(),
        WeightSpec::circular_jacobi(1.0).unwrap(),
        WeightSpec::jacobi(0.7, 0.4).unwrap(),
        WeightSpec::jacobi(-0.3, 1.2).unwrap(),
        WeightSpec::generalized_jacobi(0.7, 0.4, 0.3).unwrap(),
        WeightSpec::sri_ranga(z(1.0, 0.5)).unwrap(),
        WeightSpec::sri_ranga(z(0.3, -0.7)).unwrap(),
        WeightSpec::rotated_cos(z(0.6, 0.4)).unwrap(),
        WeightSpec::half_plane_pole(z(0.7, -0.4), z(0.5, 0.2)).unwrap(),
    ]
}

/// JSON form of a catalog entry: parameters as `(re, im)` decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: String,
    pub parameters: BTreeMap<String, (String, String)>,
    pub normalized: bool,
    pub pair_index: usize,
}

impl CatalogEntry {
    pub fn from_spec(spec: &WeightSpec, pair_index: usize) -> Self {
        let parameters = spec
            .family
            .parameters()
            .into_iter()
            .map(|(k, v)| (k.to_string(), (format!("{:?}", v.re), format!("{:?}", v.im))))
            .collect();
        CatalogEntry { family: spec.family.name().into(), parameters, normalized: spec.normalized, pair_index }
    }

    pub fn to_spec(&self) -> Result<WeightSpec> {
        let get = |k: &str| -> Result<Complex64> {
            let (re, im) = self.parameters.get(k).ok_or_else(|| Error::Parse(format!("missing parameter '{k}'")))?;
            let p = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}'")));
            Ok(Complex64::new(p(re)?, p(im)?))
        };
        let real = |k: &str| -> Result<f64> { Ok(get(k)?.re) };
        let family = match self.family.as_str() {
            "lebesgue" => Family::Lebesgue,
            "expsine" => Family::ExpSine { u: get("u")? },
            "bessel" => Family::Bessel { t: real("t")? },
            "cjacobi" => Family::CircularJacobi { lambda: real("lambda")? },
            "jacobi" => Family::JacobiOpuc { lambda: real("lambda")?, beta: real("beta")? },
            "genjacobi" => {
                Family::GeneralizedJacobi { lambda: real("lambda")?, beta: real("beta")?, eta: real("eta")? }
            }
            "sriranga" => Family::SriRanga { b: get("b")? },
            "rotcos" => Family::RotatedCos { c: get("c")? },
            "halfplane" => Family::HalfPlanePole { u: get("u")?, r: get("r")? },
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        };
        Ok(WeightSpec::new(family)?.with_normalized(self.normalized))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn weight_eval_examples() {
        let w = weight_eval::<f64>(&WeightSpec::lebesgue(), &1.234).unwrap();
        assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-16);
        let b = WeightSpec::raw(Family::Bessel { t: 1.0 }).unwrap();
        assert!((weight_eval::<f64>(&b, &0.0).unwrap() - 1f64.exp()).abs() < 1e-15);
        let gj = WeightSpec::raw(Family::GeneralizedJacobi { lambda: 1.0, beta: 1.0, eta: 0.0 }).unwrap();
        assert!(weight_eval::<f64>(&gj, &PI).unwrap().abs() < 1e-30);
    }

    #[test]
    fn singular_and_out_of_domain_points() {
        let sr = WeightSpec::sri_ranga(C::new(-0.3, 0.2)).unwrap();
        assert!(matches!(weight_eval::<f64>(&sr, &0.0), Err(Error::SingularPoint(_))));
        assert!(matches!(weight_eval::<f64>(&sr, &-1.0), Err(Error::OutOfDomain(_))));
        let rc = WeightSpec::rotated_cos(C::new(0.5, 0.0)).unwrap();
        assert!(weight_eval::<f64>(&rc, &-1.0).is_ok());
    }

    #[test]
    fn domain_validation() {
        assert!(WeightSpec::bessel(0.0).is_err());
        assert!(WeightSpec::circular_jacobi(-0.5).is_err());
        assert!(WeightSpec::jacobi(0.2, -0.7).is_err());
        assert!(WeightSpec::half_plane_pole(C::new(1.0, 0.0), C::new(1.0, 0.0)).is_err());
        assert!(WeightSpec::half_plane_pole(C::new(1.0, 0.0), C::new(0.0, 0.0)).is_err());
        assert!(WeightSpec::sri_ranga(C::new(-0.6, 1.0)).is_err());
    }

    #[test]
    fn pair_examples_and_classes() {
        let leb = pearson_pairs::<f64>(&WeightSpec::lebesgue());
        assert_eq!(leb[0].a, ComplexPoly::one());
        assert!(leb[0].b.is_zero());
        assert_eq!(leb[0].class_pq, (0, 0));
        assert_eq!(leb[1].class_pq, (1, 1));

        let u = C::new(0.3, 0.4);
        let es = pearson_pairs::<f64>(&WeightSpec::exp_sine(u).unwrap());
        assert_eq!(es[0].b, ComplexPoly::from_f64(&[u.conj(), C::new(0.0, 1.0), u]));
        assert_eq!(es[0].class_pq, (1, 2));

        let b = C::new(1.0, 0.5);
        let sr = pearson_pairs::<f64>(&WeightSpec::sri_ranga(b).unwrap());
        assert_eq!(sr.len(), 4);
        assert_eq!(sr[0].class_pq, (1, 1));
        let i = C::new(0.0, 1.0);
        assert_eq!(sr[0].b, ComplexPoly::from_f64(&[i * b.conj(), i * (b + 1.0)]));
        assert_eq!(sr[1].b, ComplexPoly::from_f64(&[i * b.conj(), i * (b + b.conj()), i * (b + 2.0)]));
        assert_eq!(sr[2].b, ComplexPoly::from_f64(&[-i * b.conj(), i * (b.conj() - b - 2.0), i * (b + 2.0)]));
        assert_eq!(sr[3].b, ComplexPoly::from_f64(&[C::new(0.0, 0.0), i * (b.conj() - 1.0), i * (b + 2.0)]));
        for p in &sr[1..] {
            assert_eq!(p.class_pq, (2, 2));
        }
        for spec in [
            WeightSpec::generalized_jacobi(0.7, 0.4, 0.3).unwrap(),
            WeightSpec::half_plane_pole(C::new(0.7, -0.4), C::new(0.5, 0.2)).unwrap(),
        ] {
            assert_eq!(pearson_pairs::<f64>(&spec)[0].class_pq, (2, 2));
        }
    }

    #[test]
    fn pearson_residual_examples() {
        let cj = WeightSpec::circular_jacobi(1.0).unwrap();
        let pair = &pearson_pairs::<f64>(&cj)[0];
        assert!(pearson_residual(&cj, pair, 128, 1e-10).unwrap().pass);
        let leb = WeightSpec::lebesgue();
        let r = pearson_residual(&leb, &pearson_pairs::<f64>(&leb)[0], 128, 0.0).unwrap();
        assert_eq!(r.sup, 0.0);
        let bes = WeightSpec::bessel(1.0).unwrap();
        assert!(pearson_residual(&bes, &pearson_pairs::<f64>(&bes)[0], 128, 1e-10).unwrap().pass);
    }

    #[test]
    fn grid_on_zero_of_a_is_rejected() {
        let sr = WeightSpec::sri_ranga(C::new(1.0, 0.0)).unwrap();
        // A = (z-1)(z-r) with r at a grid point e^{iπ/4}
        let r = C::from_polar(1.0, PI / 4.0);
        let pair = sri_ranga_pair_with_root::<f64>(C::new(1.0, 0.0), r, "A=(z-1)(z-r)");
        assert!(matches!(pearson_residual(&sr, &pair, 4, 1e-8), Err(Error::GridOnSingularity(_))));
    }

    #[test]
    fn general_root_pairs_satisfy_the_equation() {
        let b = C::new(0.8, -0.3);
        let sr = WeightSpec::sri_ranga(b).unwrap();
        for r in [C::new(0.4, 0.3), C::new(-2.0, 1.0), C::new(0.0, 0.0)] {
            let p = sri_ranga_pair_with_root::<f64>(b, r, "A=(z-1)(z-r)");
            assert!(pearson_residual(&sr, &p, 128, 1e-10).unwrap().pass);
            assert!(boundary_check(&sr, &p));
        }
        let c = C::new(0.6, 0.4);
        let rc = WeightSpec::rotated_cos(c).unwrap();
        let p = rotated_cos_pair_with_root::<f64>(c, C::new(0.3, -0.2), "A=(z+1)(z-r)");
        assert!(pearson_residual(&rc, &p, 128, 1e-10).unwrap().pass);
    }

    #[test]
    fn boundary_examples() {
        let sr = WeightSpec::sri_ranga(C::new(1.0, 1.0)).unwrap();
        assert!(boundary_check(&sr, &pearson_pairs::<f64>(&sr)[0]));
        let leb = WeightSpec::lebesgue();
        assert!(boundary_check(&leb, &pearson_pairs::<f64>(&leb)[0]));
        let es = WeightSpec::exp_sine(C::new(0.0, 0.5)).unwrap();
        assert!(boundary_check(&es, &pearson_pairs::<f64>(&es)[0]));
        // a pair with A(1) != 0 on a weight with w(0) != w(2π)
        let fake = PearsonPair::<f64>::new(ComplexPoly::one(), ComplexPoly::zero(), "A=1");
        assert!(!boundary_check(&sr, &fake));
    }

    #[test]
    fn closed_form_tau_examples() {
        let t = closed_form_tau::<f64>(&Family::SriRanga { b: C::new(1.0, 0.0) }).unwrap().unwrap();
        assert!((t - 1.0 / PI).abs() < 1e-14);
        let t = closed_form_tau::<f64>(&Family::Bessel { t: 2.0 }).unwrap().unwrap();
        assert!((t - 1.0 / (2.0 * PI * bessel_i0(&2.0))).abs() < 1e-16);
        assert_eq!(closed_form_tau::<f64>(&Family::Lebesgue).unwrap(), Some(1.0));
        assert_eq!(closed_form_tau::<f64>(&Family::ExpSine { u: C::new(0.1, 0.0) }).unwrap(), None);
    }

    #[test]
    fn weights_are_nonnegative_on_a_dense_grid() {
        for spec in sample_catalog() {
            for th in offset_grid(spec.domain().0, 1000) {
                let w = weight_eval::<f64>(&spec.with_normalized(false), &th).unwrap();
                assert!(w >= 0.0 && w.is_finite(), "{:?} at {th}", spec.family);
            }
        }
    }

    #[test]
    fn catalog_json_round_trip() {
        for spec in sample_catalog() {
            let e = CatalogEntry::from_spec(&spec, 0);
            let s = serde_json::to_string(&e).unwrap();
            let back: CatalogEntry = serde_json::from_str(&s).unwrap();
            assert_eq!(back.to_spec().unwrap(), spec);
        }
    }

    #[test]
    fn angle_point_near_anchor_is_accurate() {
        let d = 1e-12f64;
        let p = AnglePoint::near(2, -1, &d);
        assert!((p.s2 - d * d / 4.0).abs() < 1e-40);
        assert!((p.theta - (2.0 * PI - d)).abs() < 1e-15);
        assert!((p.z - Complex64::from_polar(1.0, -d)).norm() < 1e-16);
        let q = AnglePoint::near(1, 1, &d);
        assert!((q.c2 - d * d / 4.0).abs() < 1e-40);
        assert!((q.z - Complex64::from_polar(1.0, PI + d)).norm() < 1e-15);
        let g = AnglePoint::near(-1, 1, &0.7f64);
        let h = AnglePoint::new(-PI + 0.7);
        assert!((g.s2 - h.s2).abs() < 1e-15 && (g.z - h.z).norm() < 1e-15);
    }
}
