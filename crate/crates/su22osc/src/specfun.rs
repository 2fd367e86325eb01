//! Terminating hypergeometric polynomials, factorials and the Bessel-I
//! series coefficients with pole-dropping.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::GR;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("Pochhammer symbol ({b})_{j} vanishes inside the terminating range")]
    PochhammerZero { b: i64, j: u32 },
    #[error("lower parameter must be at least 1, got {0}")]
    LowerParameter(i64),
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!` as a float; exact for n ≤ 22 and correctly rounded beyond.
pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Rising factorial `(a)_j`.
pub fn pochhammer(a: i64, j: u32) -> BigInt {
    (0..j as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(a + i))
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// Coefficients of `₁F₁(−n; b; x) = Σ_j (−n)_j / ((b)_j j!) x^j`.
pub fn hyp1f1_poly(n: u32, b: i64) -> Result<Vec<BigRational>, SpecError> {
    let mut out = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        let den = pochhammer(b, j);
        if den.is_zero() {
            return Err(SpecError::PochhammerZero { b, j });
        }
        out.push(ratio(pochhammer(-(n as i64), j), den * factorial(j)));
    }
    Ok(out)
}

/// Coefficients of `₂F₁(−k, −l; c; x)`, terminating after `min(k, l)`.
pub fn hyp2f1_poly(k: u32, l: u32, c: i64) -> Result<Vec<BigRational>, SpecError> {
    if c < 1 {
        return Err(SpecError::LowerParameter(c));
    }
    Ok((0..=k.min(l))
        .map(|j| ratio(pochhammer(-(k as i64), j) * pochhammer(-(l as i64), j), pochhammer(c, j) * factorial(j)))
        .collect())
}

/// `c_m = 2^{2−κ} / (m! Γ(m+κ−1))`, zero where Γ has a pole.
pub fn bessel_i_coeffs(kappa: i64, terms: u32) -> Vec<BigRational> {
    let two_pow = if kappa <= 2 {
        BigRational::from_integer(BigInt::one() << (2 - kappa) as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (kappa - 2) as usize)
    };
    (0..terms)
        .map(|m| {
            let g = m as i64 + kappa - 1;
            if g <= 0 {
                BigRational::zero()
            } else {
                &two_pow / BigRational::from_integer(factorial(m) * factorial((g - 1) as u32))
            }
        })
        .collect()
}

/// Horner evaluation from the highest coefficient down.
pub fn horner_exact(coeffs: &[BigRational], x: &GR) -> GR {
    coeffs.iter().rev().fold(GR::zero(), |acc, c| &(&acc * x) + &GR::real(c.clone()))
}

pub fn horner_f64(coeffs: &[BigRational], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

pub fn horner_complex(coeffs: &[BigRational], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// Residuals of `x y″ + (b − x) y′ + n y = 0` collected by power of x.
pub fn kummer_residual(n: u32, b: i64, coeffs: &[BigRational]) -> Vec<BigRational> {
    let len = coeffs.len() + 1;
    let get = |j: usize| coeffs.get(j).cloned().unwrap_or_else(BigRational::zero);
    let int = |v: i64| BigRational::from_integer(v.into());
    (0..len)
        .map(|j| {
            let j_i = j as i64;
            // x^j: (j+1) j c_{j+1} + b (j+1) c_{j+1} − j c_j + n c_j
            int((j_i + 1) * j_i + b * (j_i + 1)) * get(j + 1) + int(n as i64 - j_i) * get(j)
        })
        .collect()
}
