//! Non-linear difference equations for Verblunsky coefficients: residuals
//! against a computed sequence and forward propagation from seeds.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{cabs_f64, cx_of, cx_real, Cx, Real};
use crate::error::{Error, Result};
use crate::mopuc::OpucSequence;
use crate::weights::{Family, PearsonPair, WeightSpec};

/// Below this gap `1 - |α|²` residuals are not evaluated.
pub const GAP_GUARD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceId {
    /// `[(n-1)ā₂+ib̄₂]αₙ + [(n-1)ā₀-ib̄₀]αₙ₋₂ = -(nā₁ - γₙā₀ - γ̄ₙā₂)αₙ₋₁/(1-|αₙ₋₁|²)`.
    GeneralFirst,
    /// `[(n-1)ā₂+ib̄₂]αₙ/(1-|αₙ₋₁|²) + [(n-1)ā₀-ib̄₀]αₙ₋₂
    ///  = -{[ib̄₀-(n+1)ā₀]αₙ₋₁ᾱₙ - ib̄₁ + (n+1)ā₁ - 2γₙā₀}αₙ₋₁/(1-|αₙ₋₁|²)`.
    GeneralSecond,
    /// `(b+n+1)αₙ = [n+2+b̄ - (b+n+1)ᾱₙ₊₁αₙ]αₙ₊₁/(1-|αₙ₊₁|²)`, `n >= 0`.
    RangaForward,
    /// `(b̄+n+1)αₙ = (b+n)αₙ₋₁`, `n >= 1`.
    RangaTwoTerm,
    /// `(b̄+n+1)αₙ + (b+n-1)αₙ₋₂ = 2[Re γₙ + n]αₙ₋₁/(1-|αₙ₋₁|²)`.
    RangaRealPart,
    /// `(b̄+n+1)αₙ - (b+n-1)αₙ₋₂ = -2i Im γₙ αₙ₋₁/(1-|αₙ₋₁|²)`.
    RangaImagPart,
    /// `(b̄+n+1)αₙ + (b+n-1)(1-|αₙ₋₁|²)αₙ₋₂ = (nb̄/(b+n) + b + 2n)αₙ₋₁`.
    RangaClosedSum,
    /// `(b̄+n+1)αₙ - (b+n-1)(1-|αₙ₋₁|²)αₙ₋₂ = -(nb̄/(b+n) - b)αₙ₋₁`.
    RangaClosedDifference,
    /// `(b+n-1)αₙ₋₂ = (n+γₙ)αₙ₋₁/(1-|αₙ₋₁|²)`, from `A = z-1`.
    RangaLinear,
    /// `(b̄+n+1)αₙ = (n+γ̄ₙ)αₙ₋₁/(1-|αₙ₋₁|²)`, `n >= 1`, from `A = z(z-1)`.
    RangaZeroRoot,
    /// `(b̄+n+1)αₙ + (b+n-1)(1-|αₙ₋₁|²)αₙ₋₂ = (γₙ+b+2n)αₙ₋₁`.
    RangaDoubleRoot,
    /// `(b̄+n+1)αₙ - (b+n-1)(1-|αₙ₋₁|²)αₙ₋₂ = -(γₙ-b)αₙ₋₁`.
    RangaSquare,
    /// `ᾱₙ(αₙ₋₁+αₙ) = (b̄+n)(|αₙ₋₁|² - |αₙ|²)`, `n >= 1`.
    RangaModulus,
    /// `αₙ + αₙ₋₂ = -(2n/t)αₙ₋₁/(1-αₙ₋₁²)`.
    Painleve,
    /// `conj(iu)αₙ + iuαₙ₋₂ = nαₙ₋₁/(1-|αₙ₋₁|²)`.
    ComplexPainleve,
    /// `conj(iu)αₙ + iuαₙ₋₂(1-|αₙ₋₁|²) = (n + iuᾱₙαₙ₋₁)αₙ₋₁`.
    ComplexPainleveSecond,
    /// `[(n+1)r - iū]αₙ + [(n-1)r̄ + iu]αₙ₋₂ = [n(|r|²+1) + 2Re(rγ̄ₙ)]αₙ₋₁/(1-|αₙ₋₁|²)`.
    HalfPlaneFirst,
    /// `[(n+1)r - iū]αₙ + [(n-1)r̄ + iu]αₙ₋₂(1-|αₙ₋₁|²)
    ///  = {n(|r|²+1) + 2iRe(ur) + [(n+1)r̄ + iu]ᾱₙαₙ₋₁ + 2r̄γₙ}αₙ₋₁`.
    HalfPlaneSecond,
    /// `(d̄+n+1)αₙ - (d+n-1)αₙ₋₂ = -2i Im γₙ αₙ₋₁/(1-|αₙ₋₁|²)`, `d = λ+β+iη`.
    GenJacobiFirst,
    /// `(d̄+n+1)αₙ - (d+n-1)αₙ₋₂(1-|αₙ₋₁|²) = -{2γₙ + (d+n+1)ᾱₙαₙ₋₁ - 2(λ-β)}αₙ₋₁`.
    GenJacobiSecond,
    /// `(λ+β+n+1)αₙ = (λ+β+n-1)αₙ₋₂`.
    JacobiTwoTerm,
    /// `(λ+β+n+1)αₙ - (λ+β+n-1)αₙ₋₂(1-αₙ₋₁²) = -[2γₙ + (λ+β+n+1)αₙαₙ₋₁ - 2(λ-β)]αₙ₋₁`.
    JacobiSecond,
}

impl DifferenceId {
    pub const ALL: [DifferenceId; 22] = [
        DifferenceId::GeneralFirst,
        DifferenceId::GeneralSecond,
        DifferenceId::RangaForward,
        DifferenceId::RangaTwoTerm,
        DifferenceId::RangaRealPart,
        DifferenceId::RangaImagPart,
        DifferenceId::RangaClosedSum,
        DifferenceId::RangaClosedDifference,
        DifferenceId::RangaLinear,
        DifferenceId::RangaZeroRoot,
        DifferenceId::RangaDoubleRoot,
        DifferenceId::RangaSquare,
        DifferenceId::RangaModulus,
        DifferenceId::Painleve,
        DifferenceId::ComplexPainleve,
        DifferenceId::ComplexPainleveSecond,
        DifferenceId::HalfPlaneFirst,
        DifferenceId::HalfPlaneSecond,
        DifferenceId::GenJacobiFirst,
        DifferenceId::GenJacobiSecond,
        DifferenceId::JacobiTwoTerm,
        DifferenceId::JacobiSecond,
    ];

    pub fn name(&self) -> &'static str {
        use DifferenceId::*;
        match self {
            GeneralFirst => "general-first",
            GeneralSecond => "general-second",
            RangaForward => "ranga-forward",
            RangaTwoTerm => "ranga-two-term",
            RangaRealPart => "ranga-real-part",
            RangaImagPart => "ranga-imag-part",
            RangaClosedSum => "ranga-closed-sum",
            RangaClosedDifference => "ranga-closed-difference",
            RangaLinear => "ranga-linear",
            RangaZeroRoot => "ranga-zero-root",
            RangaDoubleRoot => "ranga-double-root",
            RangaSquare => "ranga-square",
            RangaModulus => "ranga-modulus",
            Painleve => "painleve",
            ComplexPainleve => "complex-painleve",
            ComplexPainleveSecond => "complex-painleve-second",
            HalfPlaneFirst => "halfplane-first",
            HalfPlaneSecond => "halfplane-second",
            GenJacobiFirst => "genjacobi-first",
            GenJacobiSecond => "genjacobi-second",
            JacobiTwoTerm => "jacobi-two-term",
            JacobiSecond => "jacobi-second",
        }
    }

    /// Smallest `n` at which the equation holds.
    pub fn min_n(&self) -> i64 {
        use DifferenceId::*;
        match self {
            RangaForward => 0,
            RangaTwoTerm | RangaZeroRoot | RangaModulus => 1,
            _ => 2,
        }
    }

    /// Whether the equation can be solved for its highest-index coefficient.
    pub fn is_explicit(&self) -> bool {
        use DifferenceId::*;
        !matches!(
            self,
            GeneralSecond
                | RangaLinear
                | RangaModulus
                | ComplexPainleveSecond
                | HalfPlaneSecond
                | GenJacobiSecond
                | JacobiSecond
        )
    }

    pub fn is_general(&self) -> bool {
        matches!(self, DifferenceId::GeneralFirst | DifferenceId::GeneralSecond)
    }
}

impl fmt::Display for DifferenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DifferenceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DifferenceId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| Error::UnknownRelation(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Params<T: Real> {
    Pair(PearsonPair<T>),
    Ranga { b: Cx<T> },
    Bessel { t: T },
    ExpSine { u: Cx<T> },
    HalfPlane { u: Cx<T>, r: Cx<T> },
    GenJacobi { lambda: T, beta: T, eta: T },
}

/// An equation together with the parameters it is written in.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceEquation<T: Real> {
    pub id: DifferenceId,
    pub params: Params<T>,
}

impl<T: Real> DifferenceEquation<T> {
    pub fn general(id: DifferenceId, pair: PearsonPair<T>) -> Result<Self> {
        if !id.is_general() {
            return Err(Error::UnknownRelation(format!("{id} is not written in terms of a Pearson pair")));
        }
        Ok(DifferenceEquation { id, params: Params::Pair(pair) })
    }

    /// Family-specific equation with parameters read from `spec`.
    pub fn for_family(id: DifferenceId, spec: &WeightSpec) -> Result<Self> {
        use DifferenceId::*;
        let c = |z| cx_of::<T>(z);
        let r = |x: f64| T::from_f64(x);
        let params = match (id, &spec.family) {
            (
                RangaForward
                | RangaTwoTerm
                | RangaRealPart
                | RangaImagPart
                | RangaClosedSum
                | RangaClosedDifference
                | RangaLinear
                | RangaZeroRoot
                | RangaDoubleRoot
                | RangaSquare
                | RangaModulus,
                fam,
            ) => match *fam {
                Family::SriRanga { b } => Some(Params::Ranga { b: c(b) }),
                Family::CircularJacobi { lambda } => Some(Params::Ranga { b: cx_real(r(lambda)) }),
                Family::Lebesgue => Some(Params::Ranga { b: Cx::zero() }),
                _ => None,
            },
            (Painleve, Family::Bessel { t }) => Some(Params::Bessel { t: r(*t) }),
            (ComplexPainleve | ComplexPainleveSecond, fam) => match *fam {
                Family::ExpSine { u } => Some(Params::ExpSine { u: c(u) }),
                Family::Bessel { t } => Some(Params::ExpSine { u: Cx::new(T::zero(), r(t / 2.0)) }),
                _ => None,
            },
            (HalfPlaneFirst | HalfPlaneSecond, Family::HalfPlanePole { u, r: rr }) => {
                Some(Params::HalfPlane { u: c(*u), r: c(*rr) })
            }
            (GenJacobiFirst | GenJacobiSecond | JacobiTwoTerm | JacobiSecond, fam) => match *fam {
                Family::GeneralizedJacobi { lambda, beta, eta } if !id_is_jacobi(id) || eta == 0.0 => {
                    Some(Params::GenJacobi { lambda: r(lambda), beta: r(beta), eta: r(eta) })
                }
                Family::JacobiOpuc { lambda, beta } => {
                    Some(Params::GenJacobi { lambda: r(lambda), beta: r(beta), eta: T::zero() })
                }
                Family::CircularJacobi { lambda } => {
                    Some(Params::GenJacobi { lambda: r(lambda), beta: T::zero(), eta: T::zero() })
                }
                _ => None,
            },
            _ => None,
        };
        params
            .map(|params| DifferenceEquation { id, params })
            .ok_or_else(|| Error::UnknownRelation(format!("{id} for family {}", spec.family.name())))
    }

    /// Every family-specific equation that applies to `spec`.
    pub fn applicable(spec: &WeightSpec) -> Vec<Self> {
        DifferenceId::ALL
            .into_iter()
            .filter(|id| !id.is_general())
            .filter_map(|id| DifferenceEquation::for_family(id, spec).ok())
            .collect()
    }
}

fn id_is_jacobi(id: DifferenceId) -> bool {
    matches!(id, DifferenceId::JacobiTwoTerm | DifferenceId::JacobiSecond)
}

/// Values entering one evaluation at index `n`.
struct Ctx<'a, T: Real> {
    n: i64,
    alpha: &'a dyn Fn(i64) -> Result<Cx<T>>,
    gamma: Cx<T>,
}

fn k<T: Real>(n: i64) -> Cx<T> {
    cx_real(T::from_i64(n))
}

fn times_i<T: Real>(z: Cx<T>) -> Cx<T> {
    z * Cx::<T>::i()
}

fn gap<T: Real>(a: &Cx<T>) -> Cx<T> {
    cx_real(T::one() - a.norm_sqr())
}

/// `(c, r)` with the equation reading `c·αₙ = r`. For the forward equation the
/// unknown is the lower index `αₙ`, all others have `αₙ` as their highest index.
fn linear<T: Real>(eq: &DifferenceEquation<T>, x: &Ctx<T>) -> Result<(Cx<T>, Cx<T>)> {
    use DifferenceId::*;
    let n = x.n;
    let a = x.alpha;
    let one = Cx::<T>::one();
    let two = k::<T>(2);
    let g = x.gamma.clone();
    let p1 = || a(n - 1);
    let p2 = || a(n - 2);
    match (&eq.params, eq.id) {
        (Params::Pair(pair), GeneralFirst) => {
            let [a0, a1, a2] = pair.a_coeffs().map(|z| z.conj());
            let [b0, _, b2] = pair.b_coeffs().map(|z| z.conj());
            let ap = p1()?;
            let c = k::<T>(n - 1) * a2.clone() + times_i(b2);
            let r = -(k::<T>(n) * a1 - g.clone() * a0.clone() - g.conj() * a2) * ap.clone() / gap(&ap)
                - (k::<T>(n - 1) * a0 - times_i(b0)) * p2()?;
            Ok((c, r))
        }
        (Params::Ranga { b }, id) => {
            let bc = b.conj();
            let c = bc.clone() + k::<T>(n + 1);
            match id {
                RangaForward => {
                    // the ᾱₙ₊₁αₙαₙ₊₁ term cancels against the denominator
                    let an1 = a(n + 1)?;
                    let g1 = gap(&an1);
                    Ok(((b.clone() + k::<T>(n + 1)) / g1.clone(), (k::<T>(n + 2) + bc) * an1 / g1))
                }
                RangaTwoTerm => Ok((c, (b.clone() + k::<T>(n)) * p1()?)),
                RangaRealPart => {
                    let ap = p1()?;
                    let rhs = two * (cx_real(g.re.clone()) + k::<T>(n)) * ap.clone() / gap(&ap);
                    Ok((c, rhs - (b.clone() + k::<T>(n - 1)) * p2()?))
                }
                RangaImagPart => {
                    let ap = p1()?;
                    let rhs = -times_i(two * cx_real(g.im.clone())) * ap.clone() / gap(&ap);
                    Ok((c, rhs + (b.clone() + k::<T>(n - 1)) * p2()?))
                }
                RangaClosedSum | RangaClosedDifference | RangaDoubleRoot | RangaSquare => {
                    let ap = p1()?;
                    let gn = match id {
                        RangaClosedSum | RangaClosedDifference => k::<T>(n) * bc / (b.clone() + k::<T>(n)),
                        _ => g,
                    };
                    let low = (b.clone() + k::<T>(n - 1)) * gap(&ap) * p2()?;
                    match id {
                        RangaClosedSum | RangaDoubleRoot => Ok((c, (gn + b.clone() + k::<T>(2 * n)) * ap - low)),
                        _ => Ok((c, -(gn - b.clone()) * ap + low)),
                    }
                }
                RangaZeroRoot => {
                    let ap = p1()?;
                    Ok((c, (k::<T>(n) + g.conj()) * ap.clone() / gap(&ap)))
                }
                _ => unreachable!(),
            }
        }
        (Params::Bessel { t }, Painleve) => {
            let ap = p1()?;
            let rhs = -(k::<T>(2 * n) / cx_real(t.clone())) * ap.clone() / (one - ap.clone() * ap);
            Ok((Cx::one(), rhs - p2()?))
        }
        (Params::ExpSine { u }, ComplexPainleve) => {
            let iu = times_i(u.clone());
            let ap = p1()?;
            Ok((iu.conj(), k::<T>(n) * ap.clone() / gap(&ap) - iu * p2()?))
        }
        (Params::HalfPlane { u, r }, HalfPlaneFirst) => {
            let ap = p1()?;
            let c = k::<T>(n + 1) * r.clone() - times_i(u.conj());
            let low = k::<T>(n - 1) * r.conj() + times_i(u.clone());
            let re = (r.clone() * g.conj()).re;
            let rhs = (k::<T>(n) * cx_real(r.norm_sqr() + T::one()) + cx_real(re.clone() + re)) * ap.clone() / gap(&ap);
            Ok((c, rhs - low * p2()?))
        }
        (Params::GenJacobi { lambda, beta, eta }, GenJacobiFirst) => {
            let d = Cx::new(lambda.clone() + beta.clone(), eta.clone());
            let ap = p1()?;
            let rhs = -times_i(two * cx_real(g.im.clone())) * ap.clone() / gap(&ap);
            Ok((d.conj() + k::<T>(n + 1), rhs + (d + k::<T>(n - 1)) * p2()?))
        }
        (Params::GenJacobi { lambda, beta, .. }, JacobiTwoTerm) => {
            let s = cx_real(lambda.clone() + beta.clone());
            Ok((s.clone() + k::<T>(n + 1), (s + k::<T>(n - 1)) * p2()?))
        }
        _ => Err(Error::UnknownRelation(format!("{} is not linear in its leading coefficient", eq.id))),
    }
}

/// `LHS - RHS` for the equations that are not linear in `αₙ`.
fn nonlinear<T: Real>(eq: &DifferenceEquation<T>, x: &Ctx<T>) -> Result<Cx<T>> {
    use DifferenceId::*;
    let n = x.n;
    let a = x.alpha;
    let two = k::<T>(2);
    let g = x.gamma.clone();
    let (an, ap) = (a(n)?, a(n - 1)?);
    match (&eq.params, eq.id) {
        (Params::Pair(pair), GeneralSecond) => {
            let [a0, a1, a2] = pair.a_coeffs().map(|z| z.conj());
            let [b0, b1, b2] = pair.b_coeffs().map(|z| z.conj());
            let gp = gap(&ap);
            let lhs = (k::<T>(n - 1) * a2 + times_i(b2)) * an.clone() / gp.clone()
                + (k::<T>(n - 1) * a0.clone() - times_i(b0.clone())) * a(n - 2)?;
            let brace = (times_i(b0) - k::<T>(n + 1) * a0.clone()) * ap.clone() * an.conj() - times_i(b1)
                + k::<T>(n + 1) * a1
                - two * g * a0;
            Ok(lhs + brace * ap / gp)
        }
        (Params::Ranga { b }, RangaLinear) => {
            Ok((b.clone() + k::<T>(n - 1)) * a(n - 2)? - (k::<T>(n) + g) * ap.clone() / gap(&ap))
        }
        (Params::Ranga { b }, RangaModulus) => {
            let lhs = an.conj() * (ap.clone() + an.clone());
            Ok(lhs - (b.conj() + k::<T>(n)) * cx_real(ap.norm_sqr() - an.norm_sqr()))
        }
        (Params::ExpSine { u }, ComplexPainleveSecond) => {
            let iu = times_i(u.clone());
            let lhs = iu.conj() * an.clone() + iu.clone() * a(n - 2)? * gap(&ap);
            Ok(lhs - (k::<T>(n) + iu * an.conj() * ap.clone()) * ap)
        }
        (Params::HalfPlane { u, r }, HalfPlaneSecond) => {
            let iu = times_i(u.clone());
            let lhs = (k::<T>(n + 1) * r.clone() - times_i(u.conj())) * an.clone()
                + (k::<T>(n - 1) * r.conj() + iu.clone()) * a(n - 2)? * gap(&ap);
            let re = (u.clone() * r.clone()).re;
            let brace = k::<T>(n) * cx_real(r.norm_sqr() + T::one())
                + times_i(cx_real(re.clone() + re))
                + (k::<T>(n + 1) * r.conj() + iu) * an.conj() * ap.clone()
                + two * r.conj() * g;
            Ok(lhs - brace * ap)
        }
        (Params::GenJacobi { lambda, beta, eta }, GenJacobiSecond | JacobiSecond) => {
            let jacobi = eq.id == JacobiSecond;
            let d = Cx::new(lambda.clone() + beta.clone(), if jacobi { T::zero() } else { eta.clone() });
            let (an_c, low_gap) =
                if jacobi { (an.clone(), cx_real(T::one()) - ap.clone() * ap.clone()) } else { (an.conj(), gap(&ap)) };
            let lhs = (d.conj() + k::<T>(n + 1)) * an - (d.clone() + k::<T>(n - 1)) * a(n - 2)? * low_gap;
            let brace = two.clone() * g + (d + k::<T>(n + 1)) * an_c * ap.clone()
                - two * cx_real(lambda.clone() - beta.clone());
            Ok(lhs + brace * ap)
        }
        _ => Err(Error::UnknownRelation(format!("{} does not apply to these parameters", eq.id))),
    }
}

fn guarded_index(id: DifferenceId, n: i64) -> i64 {
    if id == DifferenceId::RangaForward {
        n + 1
    } else {
        n - 1
    }
}

/// `|LHS - RHS|` at index `n` with `α` and `γₙ` read from `seq`.
pub fn difference_residual<T: Real>(eq: &DifferenceEquation<T>, seq: &OpucSequence<T>, n: i64) -> Result<f64> {
    if n < eq.id.min_n() {
        return Err(Error::OutOfRange { id: eq.id.name().into(), n });
    }
    let top = if eq.id == DifferenceId::RangaForward { n + 1 } else { n };
    if top > seq.n_max() as i64 - 1 {
        return Err(Error::OutOfRange { id: eq.id.name().into(), n });
    }
    let guard = seq.alpha(guarded_index(eq.id, n))?;
    let g = 1.0 - cabs_f64(&guard).powi(2);
    if g < GAP_GUARD {
        return Err(Error::NotEvaluable { n: n as usize, gap: g });
    }
    let alpha = |j: i64| seq.alpha(j);
    let x = Ctx { n, alpha: &alpha, gamma: if n >= 0 { seq.gamma(n as usize)? } else { Cx::zero() } };
    if eq.id.is_explicit() {
        let (c, r) = linear(eq, &x)?;
        Ok(cabs_f64(&(c * seq.alpha(n)? - r)))
    } else {
        Ok(cabs_f64(&nonlinear(eq, &x)?))
    }
}

/// `(n, residual)` for `n` in `from..=to`, skipping nothing: failures are kept per row.
pub fn residual_table<T: Real>(
    eq: &DifferenceEquation<T>,
    seq: &OpucSequence<T>,
    from: i64,
    to: i64,
) -> Vec<(i64, Result<f64>)> {
    (from..=to).map(|n| (n, difference_residual(eq, seq, n))).collect()
}

pub fn residual_csv(rows: &[(i64, Result<f64>)]) -> String {
    let mut s = String::from("n,residual\n");
    for (n, r) in rows {
        match r {
            Ok(v) => s.push_str(&format!("{n},{v:.16e}\n")),
            Err(_) => s.push_str(&format!("{n},NaN\n")),
        }
    }
    s
}

/// Coefficients produced by `propagate`, indexed from `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagation<T: Real> {
    pub id: DifferenceId,
    pub start: i64,
    pub alphas: Vec<Cx<T>>,
    /// First index with `|αₙ| >= 1`; propagation stops there.
    pub first_violation: Option<i64>,
}

impl<T: Real> Propagation<T> {
    pub fn alpha(&self, n: i64) -> Option<&Cx<T>> {
        usize::try_from(n - self.start).ok().and_then(|i| self.alphas.get(i))
    }

    pub fn end(&self) -> i64 {
        self.start + self.alphas.len() as i64 - 1
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,alpha_re,alpha_im,alpha_abs\n");
        for (i, a) in self.alphas.iter().enumerate() {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                self.start + i as i64,
                a.re.to_f64(),
                a.im.to_f64(),
                cabs_f64(a)
            ));
        }
        s
    }
}

/// Number of seeds and the index of the first one.
pub fn seed_layout(id: DifferenceId) -> (usize, i64) {
    match id {
        DifferenceId::RangaTwoTerm => (1, -1),
        DifferenceId::RangaZeroRoot => (1, 0),
        _ => (2, 0),
    }
}

/// Iterates an explicit equation up to `αₙ_max`.
///
/// Seeds follow `seed_layout`; for the forward equation a single seed
/// `α_{n_max}` is given and the recursion runs downwards to `α₀`.
pub fn propagate<T: Real>(eq: &DifferenceEquation<T>, seeds: &[Cx<T>], n_max: i64) -> Result<Propagation<T>> {
    if !eq.id.is_explicit() {
        return Err(Error::UnknownRelation(format!("{} cannot be solved for its leading coefficient", eq.id)));
    }
    if eq.id == DifferenceId::RangaForward {
        return propagate_down(eq, seeds, n_max);
    }
    let (arity, start) = seed_layout(eq.id);
    if seeds.len() != arity {
        return Err(Error::InvalidParameter(format!("{} takes {arity} seed(s), got {}", eq.id, seeds.len())));
    }
    let mut alphas: Vec<Cx<T>> = seeds.to_vec();
    let minus_one = -Cx::<T>::one();
    let mut first_violation = None;
    let mut n = start + arity as i64;
    while n <= n_max {
        // γₙ = Σ_{j<n} ᾱⱼαⱼ₋₁ with α₋₁ = -1
        let known = |j: i64| -> Result<Cx<T>> {
            usize::try_from(j - start)
                .ok()
                .and_then(|i| alphas.get(i).cloned())
                .or_else(|| (j == -1).then(|| minus_one.clone()))
                .ok_or(Error::OutOfRange { id: eq.id.name().into(), n: j })
        };
        let mut gamma = Cx::<T>::zero();
        for j in 0..n {
            gamma += known(j)?.conj() * known(j - 1)?;
        }
        let x = Ctx { n, alpha: &known, gamma };
        let (c, r) = linear(eq, &x)?;
        if cabs_f64(&c) < 1e-14 {
            return Err(Error::UnsolvableStep(n as usize));
        }
        let next = r / c;
        let bad = cabs_f64(&next) >= 1.0;
        alphas.push(next);
        if bad {
            first_violation = Some(n);
            break;
        }
        n += 1;
    }
    Ok(Propagation { id: eq.id, start, alphas, first_violation })
}

fn propagate_down<T: Real>(eq: &DifferenceEquation<T>, seeds: &[Cx<T>], n_max: i64) -> Result<Propagation<T>> {
    let [top] = seeds else {
        return Err(Error::InvalidParameter(format!("{} takes 1 seed, got {}", eq.id, seeds.len())));
    };
    let mut rev = vec![top.clone()];
    let mut first_violation = None;
    for n in (0..n_max).rev() {
        let above = rev.last().cloned().unwrap();
        let lookup = move |j: i64| -> Result<Cx<T>> {
            if j == n + 1 {
                Ok(above.clone())
            } else {
                Err(Error::OutOfRange { id: "ranga-forward".into(), n: j })
            }
        };
        let x = Ctx { n, alpha: &lookup, gamma: Cx::zero() };
        let (c, r) = linear(eq, &x)?;
        if cabs_f64(&c) < 1e-14 {
            return Err(Error::UnsolvableStep(n as usize));
        }
        let v = r / c;
        let bad = cabs_f64(&v) >= 1.0;
        rev.push(v);
        if bad {
            first_violation = Some(n);
            break;
        }
    }
    let start = n_max + 1 - rev.len() as i64;
    rev.reverse();
    Ok(Propagation { id: eq.id, start, alphas: rev, first_violation })
}

/// `|ᾱₙ(αₙ₋₁+αₙ) - (b̄+n)(|αₙ₋₁|² - |αₙ|²)|` for a sequence of the `b` family.
pub fn rd_caso1_check<T: Real>(seq: &OpucSequence<T>, b: num_complex::Complex64, n: i64) -> Result<f64> {
    let eq = DifferenceEquation { id: DifferenceId::RangaModulus, params: Params::Ranga { b: cx_of::<T>(b) } };
    difference_residual(&eq, seq, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cx, pochhammer, Precision};
    use crate::moments::compute_moments;
    use crate::mopuc::{szego_sequence, verblunsky_closed_form};
    use crate::weights::{pearson_pairs, sample_catalog};
    use num_complex::Complex64 as C;
    use proptest::prelude::*;

    fn seq_for(spec: &WeightSpec, n_max: usize) -> OpucSequence<f64> {
        let t = compute_moments(spec, n_max + 2, Precision::Double).unwrap();
        szego_sequence(&t, n_max).unwrap()
    }

    /// A sequence built from given Verblunsky coefficients.
    fn seq_from_alphas(alphas: &[C]) -> OpucSequence<f64> {
        OpucSequence::from_verblunsky(alphas).unwrap()
    }

    fn ranga_closed(b: C, n_max: usize) -> OpucSequence<f64> {
        let spec = WeightSpec::sri_ranga(b).unwrap();
        let a: Vec<C> = verblunsky_closed_form::<f64>(&spec, n_max).unwrap();
        seq_from_alphas(&a)
    }

    #[test]
    fn lebesgue_general_is_zero() {
        let spec = WeightSpec::lebesgue();
        let s = seq_for(&spec, 8);
        for pair in pearson_pairs::<f64>(&spec) {
            for id in [DifferenceId::GeneralFirst, DifferenceId::GeneralSecond] {
                let eq = DifferenceEquation::general(id, pair.clone()).unwrap();
                for n in 2..7 {
                    assert_eq!(difference_residual(&eq, &s, n).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn ranga_two_term_on_closed_form() {
        let spec = WeightSpec::sri_ranga(C::new(1.0, 0.5)).unwrap();
        let s = ranga_closed(C::new(1.0, 0.5), 12);
        let eq = DifferenceEquation::for_family(DifferenceId::RangaTwoTerm, &spec).unwrap();
        for n in 1..=10 {
            assert!(difference_residual(&eq, &s, n).unwrap() < 1e-12);
        }
        assert!(matches!(difference_residual(&eq, &s, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn bessel_painleve() {
        let spec = WeightSpec::bessel(1.0).unwrap();
        let s = seq_for(&spec, 12);
        let eq = DifferenceEquation::for_family(DifferenceId::Painleve, &spec).unwrap();
        for n in 2..=10 {
            assert!(difference_residual(&eq, &s, n).unwrap() < 1e-8);
        }
    }

    #[test]
    fn every_family_equation_on_moments() {
        for spec in sample_catalog() {
            let s = seq_for(&spec, 12);
            for eq in DifferenceEquation::<f64>::applicable(&spec) {
                for n in eq.id.min_n().max(1)..=10 {
                    let r = difference_residual(&eq, &s, n).unwrap();
                    assert!(r < 1e-8, "{:?} {} n={n}: {r:e}", spec.family, eq.id);
                }
            }
            for pair in pearson_pairs::<f64>(&spec) {
                for id in [DifferenceId::GeneralFirst, DifferenceId::GeneralSecond] {
                    let eq = DifferenceEquation::general(id, pair.clone()).unwrap();
                    for n in 2..=10 {
                        let r = difference_residual(&eq, &s, n).unwrap();
                        assert!(r < 1e-8, "{:?} {} {id} n={n}: {r:e}", spec.family, pair.label);
                    }
                }
            }
        }
    }

    #[test]
    fn ranga_closed_form_suite() {
        for b in [C::new(1.0, 1.0), C::new(2.0, -0.5)] {
            let spec = WeightSpec::sri_ranga(b).unwrap();
            let s = ranga_closed(b, 14);
            for eq in DifferenceEquation::<f64>::applicable(&spec) {
                for n in eq.id.min_n()..=11 {
                    let r = difference_residual(&eq, &s, n).unwrap();
                    assert!(r < 1e-12, "{b} {} n={n}: {r:e}", eq.id);
                }
            }
        }
    }

    #[test]
    fn two_term_is_sum_of_double_root_and_square() {
        let b = C::new(1.0, 1.0);
        let spec = WeightSpec::sri_ranga(b).unwrap();
        let s = ranga_closed(b, 12);
        let alpha = |j: i64| s.alpha(j);
        for n in 2..=10 {
            let x = Ctx { n, alpha: &alpha, gamma: s.gamma(n as usize).unwrap() };
            let lin = |id| linear(&DifferenceEquation::for_family(id, &spec).unwrap(), &x).unwrap();
            let (c1, r1) = lin(DifferenceId::RangaDoubleRoot);
            let (c2, r2) = lin(DifferenceId::RangaSquare);
            let (c, r) = lin(DifferenceId::RangaTwoTerm);
            assert!((c1 + c2 - c * 2.0).norm() < 1e-12);
            assert!((r1 + r2 - r * 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn modulus_check() {
        // λ = 1: ᾱ₁(α₀+α₁) = 5/18 = 2(1/4 - 1/9)
        let s = seq_from_alphas(&[C::new(-0.5, 0.0), C::new(-1.0 / 3.0, 0.0), C::new(-0.25, 0.0)]);
        assert!(rd_caso1_check(&s, C::new(1.0, 0.0), 1).unwrap() < 1e-15);
        let zero = seq_from_alphas(&[C::new(0.0, 0.0); 4]);
        assert_eq!(rd_caso1_check(&zero, C::new(0.0, 0.0), 2).unwrap(), 0.0);
        let s = ranga_closed(C::new(1.0, 1.0), 12);
        for n in 1..=10 {
            assert!(rd_caso1_check(&s, C::new(1.0, 1.0), n).unwrap() < 1e-9);
        }
    }

    #[test]
    fn two_term_propagation_matches_closed_form() {
        let b = C::new(1.0, 1.0);
        let spec = WeightSpec::sri_ranga(b).unwrap();
        let eq = DifferenceEquation::for_family(DifferenceId::RangaTwoTerm, &spec).unwrap();
        let p = propagate(&eq, &[cx(-1.0, 0.0)], 20).unwrap();
        assert_eq!(p.start, -1);
        assert!(p.first_violation.is_none());
        for n in 0..=20 {
            let want = -pochhammer(&b, n as usize + 1) / pochhammer(&(b.conj() + 1.0), n as usize + 1);
            let got: C = *p.alpha(n).unwrap();
            assert!((got - want).norm() <= 1e-12 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn forward_equation_runs_down() {
        let b = C::new(2.0, -0.5);
        let spec = WeightSpec::sri_ranga(b).unwrap();
        let closed: Vec<C> = verblunsky_closed_form::<f64>(&spec, 12).unwrap();
        let eq = DifferenceEquation::for_family(DifferenceId::RangaForward, &spec).unwrap();
        let p = propagate(&eq, &[closed[12]], 12).unwrap();
        assert_eq!(p.start, 0);
        for n in 0..=12 {
            assert!((p.alpha(n).unwrap() - closed[n as usize]).norm() < 1e-12);
        }
    }

    #[test]
    fn painleve_propagation_short_range() {
        let spec = WeightSpec::bessel(1.0).unwrap();
        let s = seq_for(&spec, 10);
        let eq = DifferenceEquation::for_family(DifferenceId::Painleve, &spec).unwrap();
        let p = propagate(&eq, &[s.alpha(0).unwrap(), s.alpha(1).unwrap()], 8).unwrap();
        for n in 0..=8 {
            assert!((p.alpha(n).unwrap() - s.alpha(n).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn painleve_propagation_extended() {
        use crate::algebra::{with_digits, BigReal};
        with_digits(40, || {
            let spec = WeightSpec::bessel(1.0).unwrap();
            let t = compute_moments::<BigReal>(&spec, 24, Precision::Extended { digits: 40 }).unwrap();
            let s = szego_sequence(&t, 22).unwrap();
            let eq = DifferenceEquation::for_family(DifferenceId::Painleve, &spec).unwrap();
            let p = propagate(&eq, &[s.alpha(0).unwrap(), s.alpha(1).unwrap()], 20).unwrap();
            for n in 0..=20 {
                assert!(cabs_f64(&(p.alpha(n).unwrap().clone() - s.alpha(n).unwrap())) < 1e-15);
            }
        });
    }

    #[test]
    fn complex_painleve_reduces_to_real() {
        let spec = WeightSpec::exp_sine(C::new(0.0, 0.5)).unwrap();
        let bessel = WeightSpec::bessel(1.0).unwrap();
        let s = seq_for(&bessel, 10);
        let seeds = [s.alpha(0).unwrap(), s.alpha(1).unwrap()];
        let a = propagate(&DifferenceEquation::for_family(DifferenceId::ComplexPainleve, &spec).unwrap(), &seeds, 8)
            .unwrap();
        let b =
            propagate(&DifferenceEquation::for_family(DifferenceId::Painleve, &bessel).unwrap(), &seeds, 8).unwrap();
        for n in 0..=8 {
            assert!((a.alpha(n).unwrap() - b.alpha(n).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn unsolvable_and_rejected() {
        let spec = WeightSpec::sri_ranga(C::new(1.0, 0.5)).unwrap();
        let pair = pearson_pairs::<f64>(&spec)[0].clone();
        assert_eq!(pair.a.degree(), 1);
        let eq = DifferenceEquation::general(DifferenceId::GeneralFirst, pair).unwrap();
        assert!(matches!(propagate(&eq, &[cx(0.1, 0.0), cx(0.1, 0.0)], 5), Err(Error::UnsolvableStep(2))));
        let eq = DifferenceEquation::<f64>::for_family(DifferenceId::RangaModulus, &spec).unwrap();
        assert!(propagate(&eq, &[cx(0.1, 0.0)], 5).is_err());
        assert!(DifferenceEquation::<f64>::for_family(DifferenceId::Painleve, &spec).is_err());
        assert!("nonsense".parse::<DifferenceId>().is_err());
        for id in DifferenceId::ALL {
            assert_eq!(id.name().parse::<DifferenceId>().unwrap(), id);
        }
    }

    #[test]
    fn violation_is_flagged() {
        let spec = WeightSpec::bessel(1.0).unwrap();
        let eq = DifferenceEquation::<f64>::for_family(DifferenceId::Painleve, &spec).unwrap();
        let p = propagate(&eq, &[cx(0.6, 0.0), cx(-0.2, 0.0)], 30).unwrap();
        let v = p.first_violation.unwrap();
        assert_eq!(p.end(), v);
        assert!(p.alpha(v).unwrap().norm() >= 1.0);
    }

    #[test]
    fn guard_near_breakdown() {
        let s = seq_from_alphas(&[C::new(0.1, 0.0), C::new(1.0 - 1e-12, 0.0), C::new(0.1, 0.0), C::new(0.0, 0.0)]);
        let spec = WeightSpec::bessel(1.0).unwrap();
        let eq = DifferenceEquation::<f64>::for_family(DifferenceId::Painleve, &spec).unwrap();
        assert!(matches!(difference_residual(&eq, &s, 2), Err(Error::NotEvaluable { .. })));
    }

    #[test]
    fn csv_layout() {
        let spec = WeightSpec::circular_jacobi(1.0).unwrap();
        let eq = DifferenceEquation::for_family(DifferenceId::RangaTwoTerm, &spec).unwrap();
        let p = propagate(&eq, &[cx(-1.0, 0.0)], 3).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("n,alpha_re,alpha_im,alpha_abs\n-1,"));
        assert_eq!(csv.lines().count(), 6);
        let s = seq_for(&spec, 6);
        let rows = residual_table(&eq, &s, 0, 3);
        let csv = residual_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().ends_with("NaN"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ranga_closed_form_satisfies_two_term(re in -0.4f64..3.0, im in -2.0f64..2.0, n in 1i64..15) {
            let b = C::new(re, im);
            let s = ranga_closed(b, 16);
            let spec = WeightSpec::sri_ranga(b).unwrap();
            for id in [DifferenceId::RangaTwoTerm, DifferenceId::RangaModulus] {
                let eq = DifferenceEquation::for_family(id, &spec).unwrap();
                prop_assert!(difference_residual(&eq, &s, n).unwrap() < 1e-10);
            }
        }
    }
}
