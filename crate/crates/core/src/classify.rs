//! Positivity systems for the coefficients of `B` when `deg A <= 2`, their
//! solution spaces, and membership of known Pearson pairs.
//!
//! For `A(z) = z - r` the unknowns are `(Re b₂, Im b₂, Re b₁, Im b₁, Re b₀, Im b₀)`;
//! for `A(z) = (z - r₁)(z - r₂)` they are `(Im b₀, Re b₀, Im b₁, Re b₁, Im b₂, Re b₂)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexPoly;
use crate::error::{Error, Result};
use crate::weights::{pearson_pairs, PearsonPair, WeightSpec};

pub const MEMBERSHIP_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "degree", rename_all = "snake_case")]
pub enum Roots {
    Deg0,
    Deg1 { r: C },
    Deg2 { r1: C, r2: C },
}

impl Roots {
    /// Monic `A` with these roots.
    pub fn a_poly(&self) -> ComplexPoly<f64> {
        ComplexPoly::from_f64(&self.a_coeffs()[..=self.degree()])
    }

    fn a_coeffs(&self) -> [C; 3] {
        match *self {
            Roots::Deg0 => [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
            Roots::Deg1 { r } => [-r, C::new(1.0, 0.0), C::new(0.0, 0.0)],
            Roots::Deg2 { r1, r2 } => [r1 * r2, -(r1 + r2), C::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Roots::Deg0 => 0,
            Roots::Deg1 { .. } => 1,
            Roots::Deg2 { .. } => 2,
        }
    }

    fn list(&self) -> Vec<C> {
        match *self {
            Roots::Deg0 => vec![],
            Roots::Deg1 { r } => vec![r],
            Roots::Deg2 { r1, r2 } => vec![r1, r2],
        }
    }

    /// Roots of a monic polynomial of degree at most two.
    pub fn of_monic(a: &ComplexPoly<f64>) -> Result<Roots> {
        if !a.is_monic() || a.degree() > 2 {
            return Err(Error::InvalidParameter("A must be monic of degree at most 2".into()));
        }
        Ok(match a.degree() {
            0 => Roots::Deg0,
            1 => Roots::Deg1 { r: -a.coeff(0) },
            _ => {
                let (p, s) = (a.coeff(0), -a.coeff(1));
                let d = (s * s - 4.0 * p).sqrt();
                let big = if (s + d).norm() >= (s - d).norm() { (s + d) / 2.0 } else { (s - d) / 2.0 };
                let small = if big.norm() == 0.0 { C::new(0.0, 0.0) } else { p / big };
                Roots::Deg2 { r1: big, r2: small }
            }
        })
    }

    /// Conditions under which the case analysis changes form.
    pub fn configuration(&self) -> Vec<String> {
        let near = |x: f64, y: f64| (x - y).abs() < 1e-12;
        let mut out = Vec::new();
        let rs = self.list();
        for (i, r) in rs.iter().enumerate() {
            if near(r.norm(), 1.0) {
                out.push(format!("root {} on the unit circle", i + 1));
            }
            if r.norm() == 0.0 {
                out.push(format!("root {} at the origin", i + 1));
            } else if near(r.re, 0.0) {
                out.push(format!("root {} purely imaginary", i + 1));
            }
        }
        if let [r1, r2] = rs[..] {
            if (r1 - r2).norm() < 1e-12 {
                out.push("double root".into());
            }
            if near((r1 * r2).norm(), 1.0) {
                out.push("|r1 r2| = 1".into());
            }
            if near(r1.re * r1.re, 1.0) && (r1 + r2).norm() < 1e-12 {
                out.push("Re(r1)^2 = 1 with r2 = -r1".into());
            }
        }
        out
    }
}

/// `F x = g`, five real conditions for `Im[(B - izA')/A · |A|²] = 0` on `|z| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivitySystem {
    pub f: [[f64; 6]; 5],
    pub g: [f64; 5],
    pub roots: Roots,
}

pub fn build_system(roots: Roots) -> PositivitySystem {
    let (f, g) = match roots {
        Roots::Deg0 => {
            // b₂ = b₁ = 0, Im b₀ = 0
            let mut f = [[0.0; 6]; 5];
            for (i, j) in [(0, 0), (1, 1), (2, 2), (3, 3), (4, 5)] {
                f[i][j] = 1.0;
            }
            (f, [0.0; 5])
        }
        Roots::Deg1 { r } => {
            let (x, y) = (r.re, r.im);
            (
                [
                    [-x, -y, 0.0, 0.0, 0.0, 0.0],
                    [y, -x, 0.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0, y, -x],
                    [1.0, 0.0, -x, -y, -1.0, 0.0],
                    [0.0, 1.0, y, -x, 0.0, 1.0],
                ],
                [0.0, 0.0, 1.0, -y, -x],
            )
        }
        Roots::Deg2 { r1, r2 } => system_from_sum_product(r1 + r2, r1 * r2),
    };
    PositivitySystem { f, g, roots }
}

/// `s = r₁+r₂`, `p = r₁r₂`.
fn system_from_sum_product(s: C, p: C) -> ([[f64; 6]; 5], [f64; 5]) {
    // |r₁|²r₂ + |r₂|²r₁
    let q = p * s.conj();
    (
        [
            [1.0, 0.0, 0.0, 0.0, p.re, -p.im],
            [0.0, -1.0, 0.0, 0.0, p.im, p.re],
            [p.re, -p.im, -s.re, s.im, 1.0, 0.0],
            [-s.re, s.im, p.re + 1.0, -p.im, -s.re, s.im],
            [s.im, s.re, p.im, p.re - 1.0, -s.im, -s.re],
        ],
        [2.0 * p.re, 2.0 * p.im, 2.0 + s.norm_sqr(), -3.0 * s.re - q.re, -3.0 * s.im - q.im],
    )
}

/// System for the `A` of a pair, read from its coefficients rather than its roots.
pub fn system_for_pair(pair: &PearsonPair<f64>) -> Result<PositivitySystem> {
    let roots = Roots::of_monic(&pair.a)?;
    let mut sys = build_system(roots);
    if let Roots::Deg2 { .. } = roots {
        (sys.f, sys.g) = system_from_sum_product(-pair.a.coeff(1), pair.a.coeff(0));
    }
    Ok(sys)
}

impl PositivitySystem {
    /// `B`'s coefficients stacked in the system's unknown order.
    pub fn x_of(&self, b: [C; 3]) -> [f64; 6] {
        let [b0, b1, b2] = b;
        match self.roots {
            Roots::Deg2 { .. } => [b0.im, b0.re, b1.im, b1.re, b2.im, b2.re],
            _ => [b2.re, b2.im, b1.re, b1.im, b0.re, b0.im],
        }
    }

    pub fn b_of(&self, x: &[f64]) -> [C; 3] {
        match self.roots {
            Roots::Deg2 { .. } => [C::new(x[1], x[0]), C::new(x[3], x[2]), C::new(x[5], x[4])],
            _ => [C::new(x[4], x[5]), C::new(x[2], x[3]), C::new(x[0], x[1])],
        }
    }

    /// `‖F x - g‖_∞`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.f
            .iter()
            .zip(&self.g)
            .map(|(row, g)| (row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - g).abs())
            .fold(0.0, f64::max)
    }

    /// Row `(c, d)` with `c·x = d` expressing `w(2π) = w(0)`, when `A(1) ≠ 0`.
    ///
    /// `None` if the condition holds automatically or if `A` has a repeated root
    /// on the unit circle.
    pub fn boundary_row(&self) -> Option<([f64; 6], f64)> {
        let a = self.roots.a_poly();
        if a.eval(&C::new(1.0, 0.0)).norm() < 1e-14 {
            return None;
        }
        let roots = self.roots.list();
        if let [r1, r2] = roots[..] {
            if (r1 - r2).norm() < 1e-9 && (r1.norm() - 1.0).abs() < 1e-12 {
                return None;
            }
        }
        // ∫₀^{2π} (B - izA')/A dθ = Σ bₖ Cₖ - ∮ A'/A dz, the last term purely imaginary
        let mut cs = [C::new(0.0, 0.0); 3];
        for (k, ck) in cs.iter_mut().enumerate() {
            let h = |z: C| z.powi(k as i32 - 1) / a.eval(&z);
            let mut poles = roots.clone();
            if k == 0 {
                poles.push(C::new(0.0, 0.0));
            }
            let mut distinct: Vec<C> = Vec::new();
            for p in poles {
                if distinct.iter().all(|q| (q - p).norm() > 1e-9) {
                    distinct.push(p);
                }
            }
            for p in &distinct {
                let weight = match p.norm() {
                    m if (m - 1.0).abs() < 1e-12 => 0.5,
                    m if m < 1.0 => 1.0,
                    _ => 0.0,
                };
                if weight > 0.0 {
                    *ck += 2.0 * PI * weight * residue(&h, *p, &distinct);
                }
            }
        }
        // Re(bₖCₖ) = Re bₖ Re Cₖ - Im bₖ Im Cₖ
        Some((self.x_of(cs.map(|c| c.conj())), 0.0))
    }
}

/// Residue at `p` by the trapezoid rule on a small circle.
fn residue(h: &dyn Fn(C) -> C, p: C, poles: &[C]) -> C {
    let gap = poles.iter().filter(|q| (*q - p).norm() > 1e-9).map(|q| (q - p).norm()).fold(1.0f64, f64::min);
    let eps = gap / 4.0;
    let m = 64;
    (0..m)
        .map(|j| {
            let e = C::from_polar(eps, 2.0 * PI * j as f64 / m as f64);
            h(p + e) * e
        })
        .sum::<C>()
        / m as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpace {
    pub particular: Vec<f64>,
    pub nullspace_basis: Vec<Vec<f64>>,
    pub rank: usize,
    /// `‖F x - g‖_∞` at the particular solution.
    pub residual: f64,
}

impl SolutionSpace {
    /// `particular + Σ cᵢ vᵢ`.
    pub fn point(&self, coords: &[f64]) -> Vec<f64> {
        let mut x = self.particular.clone();
        for (c, v) in coords.iter().zip(&self.nullspace_basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
        x
    }
}

fn solve_rows(rows: &[[f64; 6]], rhs: &[f64]) -> Result<SolutionSpace> {
    let m = rows.len().max(6);
    let mut f = DMatrix::<f64>::zeros(m, 6);
    let mut g = DVector::<f64>::zeros(m);
    for (i, (row, gi)) in rows.iter().zip(rhs).enumerate() {
        for j in 0..6 {
            f[(i, j)] = row[j];
        }
        g[i] = *gi;
    }
    let svd = f.clone().svd(true, true);
    let (u, vt) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
    let smax = svd.singular_values.max();
    let tol = RANK_TOL * smax.max(1.0);
    let mut x = DVector::<f64>::zeros(6);
    let mut basis = Vec::new();
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let v = vt.row(i).transpose();
        if s > tol {
            rank += 1;
            x += v * (u.column(i).dot(&g) / s);
        } else {
            basis.push(v.iter().copied().collect());
        }
    }
    let residual = (&f * &x - &g).amax();
    if residual > 1e-8 * g.amax().max(1.0) {
        return Err(Error::Infeasible(residual));
    }
    Ok(SolutionSpace { particular: x.iter().copied().collect(), nullspace_basis: basis, rank, residual })
}

/// Minimum-norm particular solution and a basis of the kernel.
pub fn solve_system(sys: &PositivitySystem) -> Result<SolutionSpace> {
    solve_rows(&sys.f, &sys.g)
}

/// As `solve_system`, with the periodicity row appended when it applies.
pub fn solve_with_boundary(sys: &PositivitySystem) -> Result<SolutionSpace> {
    let mut rows = sys.f.to_vec();
    let mut rhs = sys.g.to_vec();
    if let Some((row, d)) = sys.boundary_row() {
        rows.push(row);
        rhs.push(d);
    }
    solve_rows(&rows, &rhs)
}

/// `‖F x(B) - g‖_∞` for the pair's `B`.
pub fn membership_residual(pair: &PearsonPair<f64>, sys: &PositivitySystem) -> Result<f64> {
    if pair.a.degree() != sys.roots.degree() || pair.b.degree() > 2 {
        return Err(Error::InvalidParameter(format!(
            "pair with deg A = {} against a system for deg A = {}",
            pair.a.degree(),
            sys.roots.degree()
        )));
    }
    Ok(sys.residual(&sys.x_of(pair.b_coeffs())))
}

pub fn membership_check(pair: &PearsonPair<f64>, sys: &PositivitySystem) -> bool {
    membership_residual(pair, sys).is_ok_and(|r| r <= MEMBERSHIP_TOL)
}

/// Sup of `|Im[(B - izA')/A]|` on `grid` equispaced angles, skipping zeros of `A`.
pub fn positivity_residual(roots: Roots, b: [C; 3], grid: usize) -> f64 {
    let pair = PearsonPair::new(roots.a_poly(), ComplexPoly::from_f64(&b), "sample");
    (0..grid)
        .map(|j| C::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / grid as f64))
        .filter(|z| pair.a.eval(z).norm() > 1e-6)
        .map(|z| pair.log_derivative_rhs(&z).im.abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipResult {
    pub family: String,
    pub label: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub roots: Roots,
    pub configuration: Vec<String>,
    pub rank: usize,
    pub particular: Vec<f64>,
    pub nullspace_dim: usize,
    pub nullspace_basis: Vec<Vec<f64>>,
    /// Solution with `w(2π) = w(0)` imposed, if that row applies.
    pub with_boundary: Option<SolutionSpace>,
    pub memberships: Vec<MembershipResult>,
}

impl ClassifyReport {
    pub fn pass(&self) -> bool {
        self.memberships.iter().all(|m| m.pass)
    }
}

/// Solves the system for `roots` and checks every catalog pair whose `A` has those roots.
pub fn classify_report(roots: Roots, catalog: &[WeightSpec]) -> Result<ClassifyReport> {
    let sys = build_system(roots);
    let sol = solve_system(&sys)?;
    let with_boundary = match sys.boundary_row() {
        Some(_) => Some(solve_with_boundary(&sys)?),
        None => None,
    };
    let target = roots.a_poly();
    let mut memberships = Vec::new();
    for spec in catalog {
        for pair in pearson_pairs::<f64>(spec) {
            let same = pair.a.degree() == target.degree()
                && (0..=target.degree()).all(|k| (pair.a.coeff(k) - target.coeff(k)).norm() < 1e-12);
            if !same {
                continue;
            }
            let residual = membership_residual(&pair, &sys)?;
            memberships.push(MembershipResult {
                family: spec.family.name().into(),
                label: pair.label.clone(),
                residual,
                pass: residual <= MEMBERSHIP_TOL,
            });
        }
    }
    Ok(ClassifyReport {
        roots,
        configuration: roots.configuration(),
        rank: sol.rank,
        nullspace_dim: sol.nullspace_basis.len(),
        particular: sol.particular,
        nullspace_basis: sol.nullspace_basis,
        with_boundary,
        memberships,
    })
}

/// Membership of every pair of every catalog weight in the system of its own `A`.
pub fn catalog_membership(catalog: &[WeightSpec]) -> Result<Vec<MembershipResult>> {
    let mut out = Vec::new();
    for spec in catalog {
        for pair in pearson_pairs::<f64>(spec) {
            let sys = system_for_pair(&pair)?;
            let residual = membership_residual(&pair, &sys)?;
            out.push(MembershipResult {
                family: spec.family.name().into(),
                label: pair.label.clone(),
                residual,
                pass: residual <= MEMBERSHIP_TOL,
            });
        }
    }
    Ok(out)
}
