//! Quadrature of `∫ e^{-ikθ} w(θ) dθ` for `k = 0…N` over a weight's domain.
//!
//! Smooth periodic weights use the trapezoid rule with node doubling.
//! Weights with algebraic endpoint behaviour use tanh–sinh on each smooth
//! piece, with abscissae generated from their exact distance to the
//! nearer endpoint.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{cabs_f64, cx_real, Cx, Real};
use crate::error::{Error, Result};
use crate::weights::{raw_weight, AnglePoint, Family, WeightSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeta {
    pub rule: String,
    pub level: usize,
    pub nodes: usize,
    pub estimated_error: f64,
}

#[derive(Clone, Debug)]
pub struct QuadratureResult<T: Real> {
    /// `∫ e^{-ikθ} w(θ) dθ` for `k = 0…N`, unnormalized.
    pub values: Vec<Cx<T>>,
    pub meta: QuadratureMeta,
}

/// Relative accuracy requested by default in the current precision.
pub fn default_target<T: Real>() -> f64 {
    if T::digits() <= 17 {
        1e-14
    } else {
        10f64.powi(-(T::digits() as i32 - 4))
    }
}

/// Accepted error ceiling: a result worse than this is a failure.
fn failure_threshold<T: Real>() -> f64 {
    if T::digits() <= 17 {
        1e-9
    } else {
        10f64.powi(-(T::digits() as i32 / 2))
    }
}

fn uses_tanh_sinh(family: &Family) -> bool {
    matches!(
        family,
        Family::CircularJacobi { .. }
            | Family::SriRanga { .. }
            | Family::RotatedCos { .. }
            | Family::JacobiOpuc { .. }
            | Family::GeneralizedJacobi { .. }
    )
}

/// Raw moments `∫ e^{-ikθ} w dθ`, `k = 0…n`, of the unnormalized weight.
pub fn integrate_moments<T: Real>(spec: &WeightSpec, n: usize, target: Option<f64>) -> Result<QuadratureResult<T>> {
    let target = target.unwrap_or_else(default_target::<T>);
    if uses_tanh_sinh(&spec.family) {
        tanh_sinh(spec, n, target)
    } else {
        trapezoid(spec, n, target)
    }
}

fn accumulate<T: Real>(acc: &mut [Cx<T>], w: T, z: &Cx<T>) {
    // w·z̄^k for k = 0…N
    let zb = z.conj();
    let mut p = cx_real(w);
    for (k, slot) in acc.iter_mut().enumerate() {
        if k > 0 {
            p *= zb.clone();
        }
        *slot = slot.clone() + p.clone();
    }
}

fn max_diff<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| cabs_f64(&(x.clone() - y.clone()))).fold(0.0, f64::max)
}

fn trapezoid<T: Real>(spec: &WeightSpec, n: usize, target: f64) -> Result<QuadratureResult<T>> {
    let start = T::from_f64(spec.domain().0);
    let two_pi = T::pi() * T::from_f64(2.0);
    let max_level = 16;
    let mut m = (4 * (n + 1)).next_power_of_two().max(32);
    let mut sums = vec![Cx::<T>::zero(); n + 1];
    for j in 0..m {
        let th = start.clone() + two_pi.clone() * T::from_i64(j as i64) / T::from_i64(m as i64);
        let p = AnglePoint::new(th);
        let w = raw_weight(&spec.family, &p)?;
        accumulate(&mut sums, w, &p.z);
    }
    let scale = |m: usize| two_pi.clone() / T::from_i64(m as i64);
    let mut prev: Vec<Cx<T>> = sums.iter().map(|s| s.clone() * scale(m)).collect();
    let mut level = 0;
    let mut err = f64::INFINITY;
    while level < max_level {
        level += 1;
        let m2 = 2 * m;
        for j in (1..m2).step_by(2) {
            let th = start.clone() + two_pi.clone() * T::from_i64(j as i64) / T::from_i64(m2 as i64);
            let p = AnglePoint::new(th);
            let w = raw_weight(&spec.family, &p)?;
            accumulate(&mut sums, w, &p.z);
        }
        m = m2;
        let cur: Vec<Cx<T>> = sums.iter().map(|s| s.clone() * scale(m)).collect();
        let mag = cabs_f64(&cur[0]).max(f64::MIN_POSITIVE);
        err = max_diff(&cur, &prev);
        prev = cur;
        if err <= target * mag {
            break;
        }
    }
    let mag = cabs_f64(&prev[0]).max(f64::MIN_POSITIVE);
    if !(err <= failure_threshold::<T>() * mag) {
        return Err(Error::QuadratureFailure { estimate: err, level });
    }
    Ok(QuadratureResult {
        values: prev,
        meta: QuadratureMeta { rule: "periodic-trapezoid".into(), level, nodes: m, estimated_error: err },
    })
}

/// A smooth piece `[kπ, (k+len)π]` of the domain.
struct Segment {
    left: i32,
    right: i32,
}

fn segments(family: &Family) -> Vec<Segment> {
    match family {
        Family::RotatedCos { .. } => vec![Segment { left: -1, right: 1 }],
        Family::JacobiOpuc { .. } | Family::GeneralizedJacobi { .. } => {
            vec![Segment { left: 0, right: 1 }, Segment { left: 1, right: 2 }]
        }
        _ => vec![Segment { left: 0, right: 2 }],
    }
}

/// Adds one tanh–sinh level on a segment: every multiple of `h` on the
/// first level, odd multiples afterwards.
fn tanh_sinh_level<T: Real>(family: &Family, seg: &Segment, h: &T, first: bool, acc: &mut [Cx<T>]) -> Result<usize> {
    let len = T::pi() * T::from_i64((seg.right - seg.left) as i64);
    let half_pi = T::pi() / T::from_f64(2.0);
    let two = T::from_f64(2.0);
    let eps = T::epsilon();
    let mut count = 0;
    let mut local = vec![Cx::<T>::zero(); acc.len()];
    if first {
        let d = len.clone() / two.clone();
        let p = AnglePoint::near(seg.left, 1, &d);
        let w = raw_weight(family, &p)?;
        // dx/dt at t = 0 is (len/2)(π/2)
        accumulate(&mut local, w * d * half_pi.clone(), &p.z);
        count += 1;
    }
    let step = if first { 1 } else { 2 };
    for side in [1i32, -1] {
        let mut k: i64 = 1;
        let mut small_run = 0;
        loop {
            let t = h.clone() * T::from_i64(k);
            let et = t.exp();
            let sinh_t = (et.clone() - T::one() / et.clone()) / two.clone();
            let cosh_t = (et.clone() + T::one() / et) / two.clone();
            let u = half_pi.clone() * sinh_t;
            let e2u = (two.clone() * u.clone()).exp();
            // distance to the nearer endpoint and dx/dt
            let d = len.clone() / (T::one() + e2u.clone());
            let cosh_u_sq = {
                let eu = u.exp();
                let c = (eu.clone() + T::one() / eu) / two.clone();
                c.clone() * c
            };
            let jac = len.clone() / two.clone() * half_pi.clone() * cosh_t / cosh_u_sq;
            if d.is_zero() || !d.is_finite() || !jac.is_finite() || jac.is_zero() {
                break;
            }
            let p = if side == 1 { AnglePoint::near(seg.right, -1, &d) } else { AnglePoint::near(seg.left, 1, &d) };
            // the distance to the endpoint underflowed in sin²
            let w = match raw_weight(family, &p) {
                Err(Error::SingularPoint(_)) => break,
                r => r?,
            };
            let contrib = w * jac;
            let c_abs = contrib.abs();
            accumulate(&mut local, contrib, &p.z);
            count += 1;
            let ref_mag = local[0].re.abs().max_of(acc[0].re.abs());
            if c_abs <= eps.clone() * ref_mag * T::from_f64(1e-3) {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
            k += step;
            if k > 1_000_000 {
                break;
            }
        }
    }
    for (a, l) in acc.iter_mut().zip(local) {
        *a = a.clone() + l;
    }
    Ok(count)
}

fn tanh_sinh<T: Real>(spec: &WeightSpec, n: usize, target: f64) -> Result<QuadratureResult<T>> {
    let segs = segments(&spec.family);
    let max_level = if T::digits() <= 17 { 11 } else { 14 };
    let mut sums: Vec<Vec<Cx<T>>> = vec![vec![Cx::zero(); n + 1]; segs.len()];
    let mut h = T::one();
    let mut nodes = 0;
    for (s, seg) in segs.iter().enumerate() {
        nodes += tanh_sinh_level(&spec.family, seg, &h, true, &mut sums[s])?;
    }
    let total = |sums: &Vec<Vec<Cx<T>>>, h: &T| -> Vec<Cx<T>> {
        (0..=n)
            .map(|k| {
                let mut acc = Cx::<T>::zero();
                for s in sums {
                    acc += s[k].clone();
                }
                acc * h.clone()
            })
            .collect()
    };
    let mut prev = total(&sums, &h);
    let mut err = f64::INFINITY;
    let mut level = 0;
    while level < max_level {
        level += 1;
        h /= T::from_f64(2.0);
        for (s, seg) in segs.iter().enumerate() {
            nodes += tanh_sinh_level(&spec.family, seg, &h, false, &mut sums[s])?;
        }
        let cur = total(&sums, &h);
        let mag = cabs_f64(&cur[0]).max(f64::MIN_POSITIVE);
        err = max_diff(&cur, &prev);
        prev = cur;
        if level >= 3 && err <= target * mag {
            break;
        }
    }
    let mag = cabs_f64(&prev[0]).max(f64::MIN_POSITIVE);
    if !(err <= failure_threshold::<T>() * mag) {
        return Err(Error::QuadratureFailure { estimate: err, level });
    }
    Ok(QuadratureResult {
        values: prev,
        meta: QuadratureMeta { rule: "tanh-sinh".into(), level, nodes, estimated_error: err },
    })
}
