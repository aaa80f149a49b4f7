use num_traits::{One, Zero};

use super::real::{cabs, cln, csin, cx_real, Cx, Real};
use crate::error::{Error, Result};

/// Rising factorial `a(a+1)…(a+n-1)`.
pub fn pochhammer<T: Real>(a: &Cx<T>, n: usize) -> Cx<T> {
    let mut acc = Cx::one();
    for k in 0..n {
        acc *= a.clone() + cx_real(T::from_i64(k as i64));
    }
    acc
}

/// `₂F₁(-n, b; c; x)` as the finite sum it reduces to.
pub fn hyp2f1_terminating<T: Real>(n: usize, b: &Cx<T>, c: &Cx<T>, x: &Cx<T>) -> Result<Cx<T>> {
    for k in 0..n {
        if (c.clone() + cx_real(T::from_i64(k as i64))).is_zero() {
            return Err(Error::ParameterPole(format!("c + {k} vanishes in terminating 2F1")));
        }
    }
    let mut term = Cx::<T>::one();
    let mut sum = Cx::<T>::one();
    for k in 0..n {
        let kk = T::from_i64(k as i64);
        let num = cx_real(T::from_i64(k as i64 - n as i64)) * (b.clone() + cx_real(kk.clone()));
        let den = (c.clone() + cx_real(kk.clone())) * (kk + T::one());
        term = term * num / den * x.clone();
        sum += term.clone();
    }
    Ok(sum)
}

/// Principal value of `log Γ(z)`: `ln|Γ(z)| + i·arg Γ(z)` with the argument in `(-π, π]`.
pub fn log_gamma_complex<T: Real>(z: &Cx<T>) -> Result<Cx<T>> {
    if z.im.is_zero() && z.re <= T::zero() && z.re.floor() == z.re {
        return Err(Error::GammaPole(z.re.to_f64()));
    }
    let half = T::from_f64(0.5);
    let raw = if z.re < half {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let one_minus = cx_real(T::one()) - z.clone();
        let s = csin(&(z.clone() * T::pi()));
        cx_real(T::pi().ln()) - cln(&s) - log_gamma_right(&one_minus)
    } else {
        log_gamma_right(z)
    };
    Ok(Cx::new(raw.re, wrap_angle(raw.im)))
}

fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::pi() * T::from_f64(2.0);
    // shift into (-π, π]
    let k = ((a.clone() + T::pi()) / two_pi.clone()).floor();
    let mut r = a - k * two_pi.clone();
    if r <= -T::pi() {
        r += two_pi;
    }
    r
}

fn log_gamma_right<T: Real>(z: &Cx<T>) -> Cx<T> {
    if T::digits() <= 17 {
        lanczos(z)
    } else {
        stirling(z)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos<T: Real>(z: &Cx<T>) -> Cx<T> {
    let zm1 = z.clone() - cx_real(T::one());
    let mut x = cx_real(T::from_f64(LANCZOS_P[0]));
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        x += cx_real(T::from_f64(p)) / (zm1.clone() + cx_real(T::from_i64(i as i64)));
    }
    let t = zm1.clone() + cx_real(T::from_f64(LANCZOS_G + 0.5));
    let half_ln_two_pi = (T::pi() * T::from_f64(2.0)).ln() / T::from_f64(2.0);
    cx_real(half_ln_two_pi) + (zm1 + cx_real(T::from_f64(0.5))) * cln(&t) - t + cln(&x)
}

/// `B_0, B_1, …, B_m` from the classical binomial recurrence.
fn bernoulli<T: Real>(m: usize) -> Vec<T> {
    let mut b: Vec<T> = Vec::with_capacity(m + 1);
    b.push(T::one());
    for n in 1..=m {
        // Σ_{j<n} C(n+1, j) B_j
        let mut s = T::zero();
        let mut binom = T::one();
        for (j, bj) in b.iter().enumerate() {
            s += binom.clone() * bj.clone();
            binom = binom * T::from_i64((n + 1 - j) as i64) / T::from_i64(j as i64 + 1);
        }
        b.push(-s / T::from_i64(n as i64 + 1));
    }
    b
}

fn stirling<T: Real>(z: &Cx<T>) -> Cx<T> {
    let radius = T::from_f64(0.45 * T::digits() as f64 + 8.0);
    let mut w = z.clone();
    let mut prod = Cx::<T>::one();
    while w.re < radius {
        prod *= w.clone();
        w += cx_real(T::one());
    }
    let eps = T::epsilon();
    let max_k = 120;
    let bern = bernoulli::<T>(2 * max_k);
    let half_ln_two_pi = (T::pi() * T::from_f64(2.0)).ln() / T::from_f64(2.0);
    let ln_w = cln(&w);
    let mut sum = (w.clone() - cx_real(T::from_f64(0.5))) * ln_w - w.clone() + cx_real(half_ln_two_pi);
    let inv_w = Cx::<T>::one() / w.clone();
    let inv_w2 = inv_w.clone() * inv_w.clone();
    let mut pow = inv_w;
    for k in 1..=max_k {
        let denom = T::from_i64((2 * k * (2 * k - 1)) as i64);
        let term = pow.clone() * (bern[2 * k].clone() / denom);
        sum += term.clone();
        if cabs(&term) <= eps.clone() * cabs(&sum) {
            break;
        }
        pow *= inv_w2.clone();
    }
    sum - cln(&prod)
}

/// Modified Bessel function `I₀(t) = Σ (t/2)^{2k}/(k!)²`.
pub fn bessel_i0<T: Real>(t: &T) -> T {
    let q = t.clone() * t.clone() / T::from_f64(4.0);
    let eps = T::epsilon();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..100_000i64 {
        let kk = T::from_i64(k);
        term = term * q.clone() / (kk.clone() * kk);
        sum += term.clone();
        if term <= eps.clone() * sum.clone() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::big::{with_digits, BigReal};
    use crate::algebra::real::{cexp, cx};
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        let any = cx::<f64>(0.3, 1.7);
        assert_eq!(pochhammer(&any, 0), cx(1.0, 0.0));
        assert_eq!(pochhammer(&cx::<f64>(2.0, 0.0), 3), cx(24.0, 0.0));
        assert_eq!(pochhammer(&cx::<f64>(0.0, 1.0), 2), cx(-1.0, 1.0));
    }

    #[test]
    fn hyp2f1_trivial_cases() {
        let b = cx::<f64>(1.3, -0.2);
        let c = cx::<f64>(2.1, 0.4);
        assert_eq!(hyp2f1_terminating(0, &b, &c, &cx(0.7, 0.1)).unwrap(), cx(1.0, 0.0));
        assert_eq!(hyp2f1_terminating(5, &b, &c, &cx(0.0, 0.0)).unwrap(), cx(1.0, 0.0));
        assert!(matches!(hyp2f1_terminating(3, &b, &cx(-1.0, 0.0), &cx(0.5, 0.0)), Err(Error::ParameterPole(_))));
    }

    #[test]
    fn hyp2f1_matches_binomial_case() {
        // ₂F₁(-n, b; b; x) = (1-x)^n
        let b = cx::<f64>(0.7, 0.2);
        let x = cx::<f64>(0.3, -0.5);
        for n in 0..8 {
            let got = hyp2f1_terminating(n, &b, &b, &x).unwrap();
            let want = (cx::<f64>(1.0, 0.0) - x).powu(n as u32);
            assert!((got - want).norm() < 1e-13);
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma_complex(&cx::<f64>(1.0, 0.0)).unwrap().norm() < 1e-14);
        let l5 = log_gamma_complex(&cx::<f64>(5.0, 0.0)).unwrap();
        assert!((l5.re - 24f64.ln()).abs() < 1e-13 && l5.im.abs() < 1e-14);
        // |Γ(1+i)|² = π / sinh π
        let l = log_gamma_complex(&cx::<f64>(1.0, 1.0)).unwrap();
        let want = (std::f64::consts::PI / std::f64::consts::PI.sinh()).ln();
        assert!((2.0 * l.re - want).abs() < 1e-13);
        assert!(matches!(log_gamma_complex(&cx::<f64>(-2.0, 0.0)), Err(Error::GammaPole(_))));
        assert!(matches!(log_gamma_complex(&cx::<f64>(0.0, 0.0)), Err(Error::GammaPole(_))));
    }

    #[test]
    fn log_gamma_reflection_region() {
        // Γ(1/2) = √π, Γ(-1/2) = -2√π
        let h = log_gamma_complex(&cx::<f64>(0.5, 0.0)).unwrap();
        assert!((h.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        let m = log_gamma_complex(&cx::<f64>(-0.5, 0.0)).unwrap();
        let g = cexp(&m);
        assert!((g.re + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12 && g.im.abs() < 1e-12);
    }

    #[test]
    fn log_gamma_extended_known_values() {
        with_digits(50, || {
            let tol = BigReal::parse_decimal("1e-48").unwrap();
            let h = log_gamma_complex(&cx::<BigReal>(0.5, 0.0)).unwrap();
            let want = BigReal::pi().ln() / BigReal::from_f64(2.0);
            assert!((h.re - want).abs() < tol);
            let l = log_gamma_complex(&cx::<BigReal>(1.0, 1.0)).unwrap();
            let pi = BigReal::pi();
            let want = (pi.clone() / pi.sinh()).ln();
            assert!((l.re * BigReal::from_f64(2.0) - want).abs() < tol);
            let l7 = log_gamma_complex(&cx::<BigReal>(7.0, 0.0)).unwrap();
            assert!((l7.re - BigReal::from_f64(720.0).ln()).abs() < tol);
            // arg Γ(1+i) from an independent 50-digit evaluation
            let arg = BigReal::parse_decimal("-0.30164032046753319788753165779689654065989977394377").unwrap();
            assert!((l.im - arg).abs() < tol);
        });
    }

    #[test]
    fn bessel_i0_examples() {
        assert_eq!(bessel_i0(&0.0f64), 1.0);
        for &t in &[1.0f64, 2.0] {
            let n = 4096;
            let q: f64 =
                (0..n).map(|j| (t * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos()).exp()).sum::<f64>()
                    / n as f64;
            assert!((bessel_i0(&t) - q).abs() < 1e-13 * q);
            assert_eq!(bessel_i0(&t), bessel_i0(&-t));
        }
        assert!((bessel_i0(&1.0f64) - 1.266_065_877_752_008_4).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn pochhammer_splits(re in -3.0f64..3.0, im in -3.0f64..3.0, m in 0usize..6, n in 0usize..6) {
            let a = cx::<f64>(re, im);
            let lhs = pochhammer(&a, m + n);
            let rhs = pochhammer(&a, m) * pochhammer(&(a + cx(m as f64, 0.0)), n);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        }

        #[test]
        fn log_gamma_functional_equation(re in -4.0f64..6.0, im in -4.0f64..4.0) {
            let z = Complex64::new(re, im);
            prop_assume!(z.im.abs() > 1e-3 || (z.re - z.re.round()).abs() > 1e-3 || z.re > 0.5);
            let a = cexp(&log_gamma_complex(&cx::<f64>(re + 1.0, im)).unwrap());
            let b = z * cexp(&log_gamma_complex(&cx::<f64>(re, im)).unwrap());
            prop_assert!((a - b).norm() <= 1e-10 * a.norm());
        }

        #[test]
        fn log_gamma_imaginary_part_is_principal(re in -4.0f64..6.0, im in -6.0f64..6.0) {
            prop_assume!(im.abs() > 1e-3);
            let l = log_gamma_complex(&cx::<f64>(re, im)).unwrap();
            prop_assert!(l.im > -std::f64::consts::PI && l.im <= std::f64::consts::PI);
        }
    }
}
