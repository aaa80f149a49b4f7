//! Structure relations `A Φₙ' = na₂Φₙ₊₁ + 𝔰ₙ,ₙΦₙ + 𝔰ₙ,ₙ₋₁Φₙ₋₁ + 𝔱ₙΦₙ*` and their
//! rearrangements, checked pointwise on the unit circle.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{cabs_f64, cis, cx_of, cx_real, ComplexPoly, Cx, Real};
use crate::error::{Error, Result};
use crate::mopuc::OpucSequence;
use crate::report::{offset_grid, ResidualReport};
use crate::weights::{Family, PearsonPair, WeightSpec};

pub const DEFAULT_GRID: usize = 256;

/// Which reciprocal polynomial the relation is written with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `Φₙ*`, with `na₂Φₙ₊₁`.
    Standard,
    /// `Φₙ₊₁*`, after eliminating `Φₙ*` through `Φₙ₊₁* + αₙΦₙ₊₁ = (1-|αₙ|²)Φₙ*`.
    NextReciprocal,
    /// `Φₙ₋₁*`, after eliminating `Φₙ*` through `Φₙ* = Φₙ₋₁* - αₙ₋₁zΦₙ₋₁`.
    PreviousReciprocal,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Standard, Variant::NextReciprocal, Variant::PreviousReciprocal];
}

/// The two expressions for `𝔰ₙ,ₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnnForm {
    /// `na₁ - a₂γₙ + [ib₂ - (n-1)a₂]ᾱₙαₙ₋₁`.
    First,
    /// `ib₁ + (n+1)a₁ - a₀γ̄ₙ - [ib₀ + (n+1)a₀]αₙᾱₙ₋₁`.
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureCoefficients<T: Real> {
    pub n: usize,
    /// Coefficient of `Φₙ₊₁`.
    pub lead: Cx<T>,
    pub s_nn: Cx<T>,
    pub s_nn1: Cx<T>,
    /// Coefficient of the reciprocal polynomial selected by `variant`.
    pub t_n: Cx<T>,
    pub variant: Variant,
}

fn ib<T: Real>(z: &Cx<T>) -> Cx<T> {
    z.clone() * Cx::<T>::i()
}

fn num<T: Real>(n: i64) -> Cx<T> {
    cx_real(T::from_i64(n))
}

fn s_nn<T: Real>(pair: &PearsonPair<T>, seq: &OpucSequence<T>, n: usize, form: SnnForm) -> Result<Cx<T>> {
    let [a0, a1, a2] = pair.a_coeffs();
    let [b0, b1, b2] = pair.b_coeffs();
    let ni = n as i64;
    let an = seq.alpha(ni)?;
    let ap = seq.alpha(ni - 1)?;
    let g = seq.gamma(n)?;
    Ok(match form {
        SnnForm::First => num::<T>(ni) * a1 - a2.clone() * g + (ib(&b2) - num::<T>(ni - 1) * a2) * an.conj() * ap,
        SnnForm::Second => {
            ib(&b1) + num::<T>(ni + 1) * a1 - a0.clone() * g.conj() - (ib(&b0) + num::<T>(ni + 1) * a0) * an * ap.conj()
        }
    })
}

/// Coefficients of the standard form, `n >= 2`.
pub fn structure_coefficients<T: Real>(
    pair: &PearsonPair<T>,
    seq: &OpucSequence<T>,
    n: usize,
    form: SnnForm,
) -> Result<StructureCoefficients<T>> {
    if n < 2 {
        return Err(Error::OutOfTheoremRange { n, min: 2 });
    }
    if n + 1 > seq.n_max() {
        return Err(Error::OutOfRange { id: "structure".into(), n: n as i64 + 1 });
    }
    let [a0, _, a2] = pair.a_coeffs();
    let [b0, _, b2] = pair.b_coeffs();
    let ni = n as i64;
    let an = seq.alpha(ni)?;
    let gap_prev = T::one() - seq.alpha(ni - 1)?.norm_sqr();
    Ok(StructureCoefficients {
        n,
        lead: num::<T>(ni) * a2.clone(),
        s_nn: s_nn(pair, seq, n, form)?,
        s_nn1: (ib(&b0) + num::<T>(ni) * a0) * gap_prev,
        t_n: (ib(&b2) + a2) * an.conj(),
        variant: Variant::Standard,
    })
}

/// Coefficients of any of the three forms.
pub fn variant_coefficients<T: Real>(
    pair: &PearsonPair<T>,
    seq: &OpucSequence<T>,
    n: usize,
    form: SnnForm,
    variant: Variant,
) -> Result<StructureCoefficients<T>> {
    let base = structure_coefficients(pair, seq, n, form)?;
    let [_, a1, a2] = pair.a_coeffs();
    let [_, _, b2] = pair.b_coeffs();
    let ni = n as i64;
    let an = seq.alpha(ni)?;
    let ap = seq.alpha(ni - 1)?;
    let gap = T::one() - an.norm_sqr();
    let gap_prev = T::one() - ap.norm_sqr();
    Ok(match variant {
        Variant::Standard => base,
        Variant::NextReciprocal => StructureCoefficients {
            lead: (num::<T>(ni) * a2.clone() + (ib(&b2) - num::<T>(ni - 1) * a2.clone()) * an.norm_sqr()) / gap.clone(),
            t_n: (ib(&b2) + a2) * an.conj() / gap,
            variant,
            ..base
        },
        Variant::PreviousReciprocal => StructureCoefficients {
            s_nn: num::<T>(ni) * a1 - a2.clone() * seq.gamma(n)? - num::<T>(ni) * a2.clone() * an.conj() * ap,
            t_n: (ib(&b2) + a2) * an.conj() * gap_prev,
            variant,
            ..base
        },
    })
}

/// `|𝔰ₙ,ₙ(first) - 𝔰ₙ,ₙ(second)|`.
pub fn snn_consistency<T: Real>(pair: &PearsonPair<T>, seq: &OpucSequence<T>, n: usize) -> Result<f64> {
    let a = s_nn(pair, seq, n, SnnForm::First)?;
    let b = s_nn(pair, seq, n, SnnForm::Second)?;
    Ok(cabs_f64(&(a - b)))
}

/// Terms `cⱼ Pⱼ(z)` of a right-hand side.
type Terms<T> = Vec<(Cx<T>, ComplexPoly<T>)>;

fn grid_report<T: Real>(lhs: &ComplexPoly<T>, rhs: &Terms<T>, grid_size: usize, tolerance: f64) -> ResidualReport {
    let grid = offset_grid(0.0, grid_size);
    let mut residuals = Vec::with_capacity(grid.len());
    let mut scale: f64 = 0.0;
    for &th in &grid {
        let z = cis(&T::from_f64(th));
        let l = lhs.eval(&z);
        let mut r = Cx::<T>::zero();
        for (c, p) in rhs {
            r += c.clone() * p.eval(&z);
        }
        scale = scale.max(cabs_f64(&l));
        residuals.push(cabs_f64(&(l - r)));
    }
    ResidualReport::new(grid, residuals, tolerance, scale)
}

/// Sup over the grid of `|A Φₙ' - RHS|` for the chosen form.
pub fn structure_residual<T: Real>(
    pair: &PearsonPair<T>,
    seq: &OpucSequence<T>,
    n: usize,
    grid_size: usize,
    variant: Variant,
    tolerance: f64,
) -> Result<ResidualReport> {
    let c = variant_coefficients(pair, seq, n, SnnForm::First, variant)?;
    let lhs = &pair.a * &seq.phi(n)?.derivative();
    let reciprocal = match variant {
        Variant::Standard => seq.phi_star(n)?,
        Variant::NextReciprocal => seq.phi_star(n + 1)?,
        Variant::PreviousReciprocal => seq.phi_star(n - 1)?,
    };
    let rhs = vec![
        (c.lead, seq.phi(n + 1)?.clone()),
        (c.s_nn, seq.phi(n)?.clone()),
        (c.s_nn1, seq.phi(n - 1)?.clone()),
        (c.t_n, reciprocal),
    ];
    Ok(grid_report(&lhs, &rhs, grid_size, tolerance))
}

/// Relations written out with family-specific coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum RelationId {
    /// `(z-1)Φₙ' = -(b̄+n)(1-|αₙ₋₁|²)Φₙ₋₁ + nΦₙ`.
    RangaLinear,
    /// `(z-1)(z-r)Φₙ' = nΦₙ₊₁ - [b̄ + n(r+1)]Φₙ + r(b̄+n)(1-|αₙ₋₁|²)Φₙ₋₁ - (b+1)ᾱₙΦₙ*`.
    RangaGeneralRoot { r: Complex64 },
    /// `z(z-1)Φₙ' = nΦₙ₊₁ - (b̄+n)Φₙ - (b+1)ᾱₙΦₙ*`.
    RangaZeroRoot,
    /// `(z-1)²Φₙ' = nΦₙ₊₁ - (b̄+2n)Φₙ + (b̄+n)(1-|αₙ₋₁|²)Φₙ₋₁ - (b+1)ᾱₙΦₙ*`.
    RangaDoubleRoot,
    /// `(z²-1)Φₙ' = nΦₙ₊₁ - b̄Φₙ - (b̄+n)(1-|αₙ₋₁|²)Φₙ₋₁ - (b+1)ᾱₙΦₙ*`.
    RangaSquare,
    /// `zΦₙ' = iū(1-|αₙ₋₁|²)Φₙ₋₁ + (n + iuᾱₙαₙ₋₁)Φₙ + iuᾱₙΦₙ*`.
    ExpSine,
    /// `(z-r)(z-1/r̄)Φₙ' = nΦₙ₊₁ + 𝔰ₙ,ₙΦₙ + 𝔰ₙ,ₙ₋₁Φₙ₋₁ - (1 + iu/r̄)ᾱₙΦₙ*`.
    HalfPlane,
    /// `(z²-1)Φₙ' = -(d̄+n)(1-|αₙ₋₁|²)Φₙ₋₁ - [(d+n+1)ᾱₙαₙ₋₁ + γₙ]Φₙ + nΦₙ₊₁ - (d+1)ᾱₙΦₙ*`.
    GenJacobi,
    /// The real-coefficient case of `GenJacobi`.
    Jacobi,
    /// `(z-1)Φₙ' = nΦₙ - n(n+2λ)/(n+λ) Φₙ₋₁`.
    CircularJacobiLinear,
    /// `z(z-1)Φₙ' = -(λ+n)Φₙ + nΦₙ₊₁ + λ(λ+1)/(n+1+λ) Φₙ*`.
    CircularJacobiZeroRoot,
    /// `(z-1)²Φₙ' = n(n+2λ)/(n+λ) Φₙ₋₁ - (λ+2n)Φₙ + nΦₙ₊₁ + λ(λ+1)/(n+1+λ) Φₙ*`.
    CircularJacobiDoubleRoot,
    /// `(z²-1)Φₙ' = -n(n+2λ)/(n+λ) Φₙ₋₁ - λΦₙ + nΦₙ₊₁ + λ(λ+1)/(n+1+λ) Φₙ*`.
    CircularJacobiSquare,
    /// `Φₙ' = nΦₙ₋₁ + (t/2)(κₙ₋₂²/κₙ²)Φₙ₋₂`.
    BesselDerivative,
    /// `zΦₙ' = nΦₙ + (t/2)(κₙ₋₁²/κₙ²)[Φₙ₋₁ - αₙΦₙ₋₁*]`.
    BesselReciprocal,
}

impl RelationId {
    pub fn name(&self) -> &'static str {
        match self {
            RelationId::RangaLinear => "ranga-linear",
            RelationId::RangaGeneralRoot { .. } => "ranga-general-root",
            RelationId::RangaZeroRoot => "ranga-zero-root",
            RelationId::RangaDoubleRoot => "ranga-double-root",
            RelationId::RangaSquare => "ranga-square",
            RelationId::ExpSine => "expsine",
            RelationId::HalfPlane => "halfplane",
            RelationId::GenJacobi => "genjacobi",
            RelationId::Jacobi => "jacobi",
            RelationId::CircularJacobiLinear => "cjacobi-linear",
            RelationId::CircularJacobiZeroRoot => "cjacobi-zero-root",
            RelationId::CircularJacobiDoubleRoot => "cjacobi-double-root",
            RelationId::CircularJacobiSquare => "cjacobi-square",
            RelationId::BesselDerivative => "bessel-derivative",
            RelationId::BesselReciprocal => "bessel-reciprocal",
        }
    }

    /// Relations displayed for the family.
    pub fn for_family(family: &Family) -> Vec<RelationId> {
        use RelationId::*;
        match family {
            Family::SriRanga { .. } => vec![
                RangaLinear,
                RangaGeneralRoot { r: Complex64::new(0.5, 0.5) },
                RangaZeroRoot,
                RangaDoubleRoot,
                RangaSquare,
            ],
            Family::CircularJacobi { .. } => vec![
                RangaLinear,
                RangaZeroRoot,
                RangaDoubleRoot,
                RangaSquare,
                CircularJacobiLinear,
                CircularJacobiZeroRoot,
                CircularJacobiDoubleRoot,
                CircularJacobiSquare,
            ],
            Family::ExpSine { .. } => vec![ExpSine],
            Family::HalfPlanePole { .. } => vec![HalfPlane],
            Family::GeneralizedJacobi { .. } => vec![GenJacobi],
            Family::JacobiOpuc { .. } => vec![GenJacobi, Jacobi],
            Family::Bessel { .. } => vec![BesselDerivative, BesselReciprocal],
            _ => vec![],
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use RelationId::*;
        Ok(match s {
            "ranga-linear" => RangaLinear,
            "ranga-general-root" => RangaGeneralRoot { r: Complex64::new(0.5, 0.5) },
            "ranga-zero-root" => RangaZeroRoot,
            "ranga-double-root" => RangaDoubleRoot,
            "ranga-square" => RangaSquare,
            "expsine" => ExpSine,
            "halfplane" => HalfPlane,
            "genjacobi" => GenJacobi,
            "jacobi" => Jacobi,
            "cjacobi-linear" => CircularJacobiLinear,
            "cjacobi-zero-root" => CircularJacobiZeroRoot,
            "cjacobi-double-root" => CircularJacobiDoubleRoot,
            "cjacobi-square" => CircularJacobiSquare,
            "bessel-derivative" => BesselDerivative,
            "bessel-reciprocal" => BesselReciprocal,
            other => return Err(Error::UnknownRelation(other.into())),
        })
    }
}

fn poly_from<T: Real>(c: &[Complex64]) -> ComplexPoly<T> {
    ComplexPoly::new(c.iter().map(|&z| cx_of(z)).collect())
}

/// Residual of a relation with the coefficients written for its family.
pub fn specialized_relation<T: Real>(
    spec: &WeightSpec,
    relation: RelationId,
    seq: &OpucSequence<T>,
    n: usize,
    grid_size: usize,
    tolerance: f64,
) -> Result<ResidualReport> {
    use RelationId::*;
    if n < 2 {
        return Err(Error::OutOfTheoremRange { n, min: 2 });
    }
    if n + 1 > seq.n_max() {
        return Err(Error::OutOfRange { id: relation.name().into(), n: n as i64 + 1 });
    }
    let mismatch = || Error::UnknownRelation(format!("{} for family {}", relation.name(), spec.family.name()));
    let ni = n as i64;
    let nn = num::<T>(ni);
    let one = Cx::<T>::one();
    let an = seq.alpha(ni)?;
    let ap = seq.alpha(ni - 1)?;
    let gap_prev = cx_real(T::one() - ap.norm_sqr());
    let phi = |k: usize| -> Result<ComplexPoly<T>> { Ok(seq.phi(k)?.clone()) };
    let c = |z: Complex64| cx_of::<T>(z);
    let ranga_b = match spec.family {
        Family::SriRanga { b } => Some(c(b)),
        Family::CircularJacobi { lambda } => Some(cx_real(T::from_f64(lambda))),
        _ => None,
    };
    let (lhs_a, rhs): (ComplexPoly<T>, Terms<T>) = match relation {
        RangaLinear | RangaGeneralRoot { .. } | RangaZeroRoot | RangaDoubleRoot | RangaSquare => {
            let b = ranga_b.ok_or_else(mismatch)?;
            let bc = b.conj();
            let lower = (bc.clone() + nn.clone()) * gap_prev.clone();
            let star = -(b.clone() + one.clone()) * an.conj();
            match relation {
                RangaLinear => {
                    (poly_from(&[(-1.0).into(), 1.0.into()]), vec![(-lower, phi(n - 1)?), (nn.clone(), phi(n)?)])
                }
                RangaGeneralRoot { r } => {
                    let rr = c(r);
                    (
                        poly_from(&[r, -(r + 1.0), 1.0.into()]),
                        vec![
                            (nn.clone(), phi(n + 1)?),
                            (-(bc.clone() + nn.clone() * (rr.clone() + one.clone())), phi(n)?),
                            (rr * lower, phi(n - 1)?),
                            (star, seq.phi_star(n)?),
                        ],
                    )
                }
                RangaZeroRoot => (
                    poly_from(&[0.0.into(), (-1.0).into(), 1.0.into()]),
                    vec![(nn.clone(), phi(n + 1)?), (-(bc.clone() + nn.clone()), phi(n)?), (star, seq.phi_star(n)?)],
                ),
                RangaDoubleRoot => (
                    poly_from(&[1.0.into(), (-2.0).into(), 1.0.into()]),
                    vec![
                        (nn.clone(), phi(n + 1)?),
                        (-(bc.clone() + nn.clone() * T::from_f64(2.0)), phi(n)?),
                        (lower, phi(n - 1)?),
                        (star, seq.phi_star(n)?),
                    ],
                ),
                _ => (
                    poly_from(&[(-1.0).into(), 0.0.into(), 1.0.into()]),
                    vec![
                        (nn.clone(), phi(n + 1)?),
                        (-bc.clone(), phi(n)?),
                        (-lower, phi(n - 1)?),
                        (star, seq.phi_star(n)?),
                    ],
                ),
            }
        }
        ExpSine => {
            let Family::ExpSine { u } = spec.family else { return Err(mismatch()) };
            let uu = c(u);
            let iu = ib(&uu);
            (
                poly_from(&[0.0.into(), 1.0.into()]),
                vec![
                    (ib(&uu.conj()) * gap_prev.clone(), phi(n - 1)?),
                    (nn.clone() + iu.clone() * an.conj() * ap.clone(), phi(n)?),
                    (iu * an.conj(), seq.phi_star(n)?),
                ],
            )
        }
        HalfPlane => {
            let Family::HalfPlanePole { u, r } = spec.family else { return Err(mismatch()) };
            let (uu, rr) = (c(u), c(r));
            let rb = rr.conj();
            let r2 = cx_real(rr.norm_sqr());
            let s_nn1 = (nn.clone() * rr.clone() - ib(&uu.conj())) / rb.clone() * gap_prev.clone();
            let s_nn = -(nn.clone() * (r2 + one.clone()) / rb.clone()
                + seq.gamma(n)?
                + (num::<T>(ni + 1) + ib(&uu) / rb.clone()) * an.conj() * ap.clone());
            let t = -(one.clone() + ib(&uu) / rb.clone()) * an.conj();
            let a = poly_from(&[r / r.conj(), -(r + 1.0 / r.conj()), 1.0.into()]);
            (a, vec![(nn.clone(), phi(n + 1)?), (s_nn, phi(n)?), (s_nn1, phi(n - 1)?), (t, seq.phi_star(n)?)])
        }
        GenJacobi | Jacobi => {
            let (lambda, beta, eta) = match spec.family {
                Family::GeneralizedJacobi { lambda, beta, eta } => (lambda, beta, eta),
                Family::JacobiOpuc { lambda, beta } => (lambda, beta, 0.0),
                _ => return Err(mismatch()),
            };
            if relation == Jacobi && eta != 0.0 {
                return Err(mismatch());
            }
            let d = c(Complex64::new(lambda + beta, eta));
            let (an_c, ap_c) = if relation == Jacobi { (an.clone(), ap.clone()) } else { (an.conj(), ap.clone()) };
            let s_nn1 = -(d.conj() + nn.clone()) * gap_prev.clone();
            let s_nn = -((d.clone() + num::<T>(ni + 1)) * an_c.clone() * ap_c + seq.gamma(n)?);
            (
                poly_from(&[(-1.0).into(), 0.0.into(), 1.0.into()]),
                vec![
                    (s_nn1, phi(n - 1)?),
                    (s_nn, phi(n)?),
                    (nn.clone(), phi(n + 1)?),
                    (-(d + one.clone()) * an_c, seq.phi_star(n)?),
                ],
            )
        }
        CircularJacobiLinear | CircularJacobiZeroRoot | CircularJacobiDoubleRoot | CircularJacobiSquare => {
            let Family::CircularJacobi { lambda } = spec.family else { return Err(mismatch()) };
            let l = cx_real(T::from_f64(lambda));
            let down = nn.clone() * (nn.clone() + l.clone() * T::from_f64(2.0)) / (nn.clone() + l.clone());
            let star = l.clone() * (l.clone() + one.clone()) / (num::<T>(ni + 1) + l.clone());
            match relation {
                CircularJacobiLinear => {
                    (poly_from(&[(-1.0).into(), 1.0.into()]), vec![(nn.clone(), phi(n)?), (-down, phi(n - 1)?)])
                }
                CircularJacobiZeroRoot => (
                    poly_from(&[0.0.into(), (-1.0).into(), 1.0.into()]),
                    vec![(-(l + nn.clone()), phi(n)?), (nn.clone(), phi(n + 1)?), (star, seq.phi_star(n)?)],
                ),
                CircularJacobiDoubleRoot => (
                    poly_from(&[1.0.into(), (-2.0).into(), 1.0.into()]),
                    vec![
                        (down, phi(n - 1)?),
                        (-(l + nn.clone() * T::from_f64(2.0)), phi(n)?),
                        (nn.clone(), phi(n + 1)?),
                        (star, seq.phi_star(n)?),
                    ],
                ),
                _ => (
                    poly_from(&[(-1.0).into(), 0.0.into(), 1.0.into()]),
                    vec![(-down, phi(n - 1)?), (-l, phi(n)?), (nn.clone(), phi(n + 1)?), (star, seq.phi_star(n)?)],
                ),
            }
        }
        BesselDerivative => {
            let Family::Bessel { t } = spec.family else { return Err(mismatch()) };
            let ratio = seq.norm_sq(n)? / seq.norm_sq(n - 2)?;
            let coef = cx_real(T::from_f64(t) / T::from_f64(2.0) * ratio);
            (ComplexPoly::one(), vec![(nn.clone(), phi(n - 1)?), (coef, phi(n - 2)?)])
        }
        BesselReciprocal => {
            let Family::Bessel { t } = spec.family else { return Err(mismatch()) };
            let ratio = seq.norm_sq(n)? / seq.norm_sq(n - 1)?;
            let coef = cx_real(T::from_f64(t) / T::from_f64(2.0) * ratio);
            (
                poly_from(&[0.0.into(), 1.0.into()]),
                vec![(nn.clone(), phi(n)?), (coef.clone(), phi(n - 1)?), (-(coef * an), seq.phi_star(n - 1)?)],
            )
        }
    };
    let lhs = &lhs_a * &seq.phi(n)?.derivative();
    Ok(grid_report(&lhs, &rhs, grid_size, tolerance))
}

/// A scalar identity between the coefficients of a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub n: usize,
    pub residual: f64,
}

/// Family-specific identities between `αₙ` and `γₙ` at degree `n`.
pub fn coefficient_identities<T: Real>(
    spec: &WeightSpec,
    seq: &OpucSequence<T>,
    n: usize,
) -> Result<Vec<IdentityResidual>> {
    if n < 2 {
        return Err(Error::OutOfRange { id: "identities".into(), n: n as i64 });
    }
    let ni = n as i64;
    let a = |k: i64| seq.alpha(k);
    let an = a(ni)?;
    let ap = a(ni - 1)?;
    let g = seq.gamma(n)?;
    let one = Cx::<T>::one();
    let c = |z: Complex64| cx_of::<T>(z);
    let out = |name: &str, residual: f64| IdentityResidual { name: name.into(), n, residual };
    Ok(match spec.family {
        Family::SriRanga { b } => {
            // γₙ = b̄ - (b+n-1)ᾱₙ₋₁αₙ₋₂
            let bb = c(b);
            let want = bb.conj() - (bb + num::<T>(ni - 1)) * ap.conj() * a(ni - 2)?;
            vec![out("ranga-gamma", cabs_f64(&(g - want)))]
        }
        Family::GeneralizedJacobi { lambda, beta, eta } => {
            let d = c(Complex64::new(lambda + beta, eta));
            let v = (g + (d + num::<T>(ni + 1)) * an.conj() * ap).re;
            vec![out("genjacobi-real-part", (v - T::from_f64(lambda - beta)).abs().to_f64())]
        }
        Family::ExpSine { u } => {
            let uu = c(u);
            let re = (uu.clone() * an.conj() * ap).re.abs().to_f64();
            // αₙ/ᾱₙ = (α₁/ᾱ₁)(-u/ū)^{n-1}
            let a1 = a(1)?;
            let mut rot = one.clone();
            for _ in 1..n {
                rot *= -(uu.clone() / uu.conj());
            }
            let phase = cabs_f64(&(an.clone() * a1.conj() - a1 * an.conj() * rot));
            vec![out("expsine-real-part", re), out("expsine-phase", phase)]
        }
        Family::HalfPlanePole { u, r } => {
            let (uu, rr) = (c(u), c(r));
            let rb = rr.conj();
            let v = (rb.clone() * g + (num::<T>(ni + 1) * rb + ib(&uu)) * an.conj() * ap).im;
            let want = -(uu * rr).re;
            vec![out("halfplane-imag-part", (v - want).abs().to_f64())]
        }
        _ => vec![],
    })
}
