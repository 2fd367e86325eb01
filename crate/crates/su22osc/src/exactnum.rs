//! Exact arithmetic over the Gaussian rationals ℚ(i) and dense 4×4 matrices
//! with Gaussian-rational entries.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Complex number `re + i·im` with arbitrary-precision rational parts.
///
/// `BigRational` keeps its values reduced with a positive denominator, so
/// derived equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

pub type GR = GaussianRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn int(n: i64) -> Self {
        Self { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// The real rational `n/d`. Panics when `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self { re: rat(n, d), im: BigRational::zero() }
    }

    /// `(a/b) + i·(c/d)`.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { re: rat(a, b), im: rat(c, d) }
    }

    pub fn real(r: BigRational) -> Self {
        Self { re: r, im: BigRational::zero() }
    }

    pub fn imag(r: BigRational) -> Self {
        Self { re: BigRational::zero(), im: r }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        let d = rhs.norm_sqr();
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let num = self * &rhs.conj();
        Ok(Self { re: num.re / &d, im: num.im / d })
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Largest absolute value of the two parts, used as a residual magnitude.
    pub fn max_abs_part(&self) -> BigRational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{} - {}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{} + {}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl<'a> Add<&'a GR> for &'a GR {
    type Output = GR;
    fn add(self, rhs: &GR) -> GR {
        GR { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GR> for &'a GR {
    type Output = GR;
    fn sub(self, rhs: &GR) -> GR {
        GR { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GR> for &'a GR {
    type Output = GR;
    fn mul(self, rhs: &GR) -> GR {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GR::real(&self.re * &rhs.re);
        }
        GR {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Add for GR {
    type Output = GR;
    fn add(self, rhs: GR) -> GR {
        &self + &rhs
    }
}

impl Sub for GR {
    type Output = GR;
    fn sub(self, rhs: GR) -> GR {
        &self - &rhs
    }
}

impl Mul for GR {
    type Output = GR;
    fn mul(self, rhs: GR) -> GR {
        &self * &rhs
    }
}

impl Neg for GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -self.re, im: -self.im }
    }
}

impl Neg for &GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GR> for GR {
    fn add_assign(&mut self, rhs: &GR) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GR> for GR {
    fn sub_assign(&mut self, rhs: &GR) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GR> for GR {
    fn mul_assign(&mut self, rhs: &GR) {
        *self = &*self * rhs;
    }
}

/// Dense 4×4 matrix over ℚ(i), row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactMatrix4 {
    pub entries: [[GR; 4]; 4],
}

pub type Mat4 = ExactMatrix4;

impl ExactMatrix4 {
    pub fn zero() -> Self {
        Self { entries: std::array::from_fn(|_| std::array::from_fn(|_| GR::zero())) }
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| if r == c { GR::one() } else { GR::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> GR) -> Self {
        Self { entries: std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))) }
    }

    /// Assemble from four 2×2 blocks `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &[[GR; 2]; 2], tr: &[[GR; 2]; 2], bl: &[[GR; 2]; 2], br: &[[GR; 2]; 2]) -> Self {
        Self::from_fn(|r, c| {
            let blk = match (r / 2, c / 2) {
                (0, 0) => tl,
                (0, 1) => tr,
                (1, 0) => bl,
                _ => br,
            };
            blk[r % 2][c % 2].clone()
        })
    }

    /// The 2×2 block at block-row `br`, block-column `bc`.
    pub fn block(&self, br: usize, bc: usize) -> [[GR; 2]; 2] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.entries[2 * br + r][2 * bc + c].clone()))
    }

    pub fn get(&self, r: usize, c: usize) -> &GR {
        &self.entries[r][c]
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|r, c| &self.entries[r][c] + &o.entries[r][c])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(|r, c| &self.entries[r][c] - &o.entries[r][c])
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(|r, c| -&self.entries[r][c])
    }

    pub fn scale(&self, s: &GR) -> Self {
        Self::from_fn(|r, c| &self.entries[r][c] * s)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|r, c| {
            let mut acc = GR::zero();
            for k in 0..4 {
                if self.entries[r][k].is_zero() || o.entries[k][c].is_zero() {
                    continue;
                }
                acc += &(&self.entries[r][k] * &o.entries[k][c]);
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.entries[c][r].clone())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|r, c| self.entries[c][r].conj())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(GR::is_zero)
    }

    /// Largest entry magnitude, in the sense of [`GaussianRational::max_abs_part`].
    pub fn max_abs_entry(&self) -> BigRational {
        self.entries
            .iter()
            .flatten()
            .map(GR::max_abs_part)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// `XY − YX`.
pub fn mat_commutator(x: &Mat4, y: &Mat4) -> Mat4 {
    x.mul(y).sub(&y.mul(x))
}

pub fn mat_dagger(x: &Mat4) -> Mat4 {
    x.dagger()
}
