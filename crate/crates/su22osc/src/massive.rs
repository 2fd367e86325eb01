//! Massless P̂-eigenfunctions, their Fock-space action, and the
//! fundamental ⊗ dual product carrying massive states.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exactnum::GR;
use crate::fockaux::{chirality, monomial_on_fock, AuxState, Basis, FockState, FuzzyFunction, GradedOperator, SparseVec, TruncationSpec};
use crate::liealg4::{GenLabel, RepVariant, ETA};
use crate::oscrep::{half, max_abs, MackClass, MackTag, OscRep};
use crate::report::{Residual, Stopwatch, VerificationReport};
use crate::specfun::{bessel_i_coeffs, factorial, horner_exact, hyp1f1_poly, SpecError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MassiveError {
    #[error("chirality must be non-negative, got {0}")]
    NegativeKappa(i64),
    #[error("ε must be positive")]
    NonPositiveEpsilon,
    #[error("at least one term is required")]
    NoTerms,
    #[error("closed form needs κ ≥ 2, got {0}")]
    SingularPrefactor(i64),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Sign label of Ψ±: `Plus` lives in mode 1, `Minus` in mode 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn mode(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Coefficient rule for the series Σ c_m (a†)^{κ+m} a^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SeriesRule {
    /// c_m = 2^{2−κ}(2iε)^m / (m! Γ(m+κ−1)), poles dropped.
    Bessel,
    /// c₀ = 1 and (m+1)(m+κ+1) c_{m+1} = −2iε c_m.
    Laguerre,
}

#[derive(Clone, Debug)]
pub struct MasslessEigenfunction {
    pub kappa: i64,
    pub epsilon: BigRational,
    pub branch: Branch,
    pub rule: SeriesRule,
    pub coeffs: Vec<GR>,
}

fn two_i_eps(eps: &BigRational) -> GR {
    GR::imag(eps * BigRational::from_integer(2.into()))
}

pub fn build_eigenfunction(kappa: i64, eps: &BigRational, branch: Branch, terms: u32, rule: SeriesRule) -> Result<MasslessEigenfunction, MassiveError> {
    if kappa < 0 {
        return Err(MassiveError::NegativeKappa(kappa));
    }
    if !eps.is_positive() {
        return Err(MassiveError::NonPositiveEpsilon);
    }
    build_series(kappa, eps, branch, terms, rule)
}

/// As `build_eigenfunction` but accepting any nonzero ε, as needed by the
/// dual construction which uses −ε.
fn build_series(kappa: i64, eps: &BigRational, branch: Branch, terms: u32, rule: SeriesRule) -> Result<MasslessEigenfunction, MassiveError> {
    if terms == 0 {
        return Err(MassiveError::NoTerms);
    }
    let x = two_i_eps(eps);
    let coeffs = match rule {
        SeriesRule::Bessel => bessel_i_coeffs(kappa, terms)
            .into_iter()
            .enumerate()
            .map(|(m, b)| &GR::real(b) * &x.pow(m as u32))
            .collect(),
        SeriesRule::Laguerre => {
            let mut c = vec![GR::one()];
            for m in 0..(terms as i64 - 1) {
                let next = &(&c[m as usize] * &-&x) * &GR::frac(1, (m + 1) * (m + kappa + 1));
                c.push(next);
            }
            c
        }
    };
    Ok(MasslessEigenfunction { kappa, epsilon: eps.clone(), branch, rule, coeffs })
}

impl MasslessEigenfunction {
    pub fn term_state(&self, m: usize) -> AuxState {
        let mut s = AuxState([0; 4]);
        let a = self.branch.mode();
        s.0[a] = (self.kappa + m as i64) as u32;
        s.0[2 + a] = m as u32;
        s
    }

    pub fn to_fuzzy(&self) -> FuzzyFunction {
        FuzzyFunction::from_pairs(self.coeffs.iter().enumerate().map(|(m, c)| (self.term_state(m), c.clone())))
    }

    /// Components that fit in the basis.
    pub fn to_vector(&self, basis: &Basis) -> SparseVec {
        let mut v = SparseVec::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(j) = basis.index_of(&self.term_state(m)) {
                v.insert(j, c.clone());
            }
        }
        v
    }
}

fn recurrence_report(f: &MasslessEigenfunction, name: &str, lhs_factor: impl Fn(i64) -> i64, rhs: GR) -> VerificationReport {
    let mut out = VerificationReport::new(name)
        .param("kappa", f.kappa)
        .param("epsilon", f.epsilon.to_string())
        .param("terms", f.coeffs.len())
        .param("series", format!("{:?}", f.rule));
    let mut worst = BigRational::zero();
    for m in 0..f.coeffs.len().saturating_sub(1) {
        let l = &GR::int(lhs_factor(m as i64)) * &f.coeffs[m + 1];
        let r = &rhs * &f.coeffs[m];
        let d = (&l - &r).max_abs_part();
        if !d.is_zero() {
            out.fail(format!("recurrence violated at m = {m}"));
            if d > worst {
                worst = d.clone();
            }
        }
    }
    out.residual = Residual::exact(worst);
    out
}

/// (m+1)(m+κ−1) c_{m+1} = 2iε c_m for every stored pair.
pub fn verify_bessel_ode(f: &MasslessEigenfunction) -> VerificationReport {
    let k = f.kappa;
    recurrence_report(f, "bessel-recurrence", move |m| (m + 1) * (m + k - 1), two_i_eps(&f.epsilon))
}

/// (m+1)(m+κ+1) c_{m+1} = −2iε c_m, the recurrence of x y″ + (κ+1) y′ + 2iε y = 0.
pub fn verify_laguerre_recurrence(f: &MasslessEigenfunction) -> VerificationReport {
    let k = f.kappa;
    recurrence_report(f, "laguerre-recurrence", move |m| (m + 1) * (m + k + 1), -two_i_eps(&f.epsilon))
}

/// Right multiplication by (−1)^{N₁+N₂}:
/// (a†)^n a^m ↦ (−1)^m Σ_d (−2)^d/d! (a†)^{n+d} a^{m+d} in each mode.
pub fn parity_dress(v: &SparseVec, basis: &Basis) -> SparseVec {
    let mut out = SparseVec::new();
    let cap = basis.trunc.n_max;
    for (j, x) in v {
        let s = basis.states[*j];
        let deg = s.degree();
        let sign = if (s.0[2] + s.0[3]) % 2 == 0 { 1 } else { -1 };
        for d1 in 0..=((cap - deg) / 2) {
            for d2 in 0..=((cap - deg) / 2 - d1) {
                let t = AuxState::new(s.0[0] + d1, s.0[1] + d2, s.0[2] + d1, s.0[3] + d2);
                let num = BigInt::from(sign) * (BigInt::from(-2)).pow(d1 + d2);
                let den = factorial(d1) * factorial(d2);
                let c = GR::real(BigRational::new(num, den));
                let i = basis.index_of(&t).expect("raised state within cap");
                let e = out.entry(i).or_insert_with(GR::zero);
                *e += &(&c * x);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dual-sector eigenfunction with P̃ eigenvalue (ε, 0, 0, ±ε): the parity
/// dressing of the fundamental series at −ε.
pub fn dual_eigenvector(kappa: i64, eps: &BigRational, branch: Branch, basis: &Basis) -> Result<SparseVec, MassiveError> {
    if kappa < 0 {
        return Err(MassiveError::NegativeKappa(kappa));
    }
    let terms = basis.trunc.n_max / 2 + 1;
    let f = build_series(kappa, &-eps, branch, terms, SeriesRule::Laguerre)?;
    Ok(parity_dress(&f.to_vector(basis), basis))
}

/// Checks P_μ v = p_μ v on output states with `deg ≤ n_max − 2`.
pub fn verify_p_eigenvector(rep: &OscRep, v: &SparseVec, p: [GR; 4], name: &str) -> VerificationReport {
    let mut out = VerificationReport::new(name).param("n_max", rep.basis.trunc.n_max).param("variant", rep.variant.name());
    let cap = rep.basis.trunc.n_max.saturating_sub(2);
    let mut worst = BigRational::zero();
    for (mu, pm) in p.iter().enumerate() {
        let mut r = rep.apply_label(&GenLabel::P(mu), v);
        crate::fockaux::vec_add_scaled(&mut r, v, &-pm);
        r.retain(|i, _| rep.basis.states[*i].degree() <= cap);
        let d = max_abs(&r);
        if !d.is_zero() {
            out.fail(format!("P{mu} eigenvalue {pm} violated on {} states", r.len()));
            if d > worst {
                worst = d;
            }
        }
    }
    out.residual = Residual::exact(worst);
    out
}

pub fn momentum(eps: &BigRational, sign: i64) -> [GR; 4] {
    let e = GR::real(eps.clone());
    [e.clone(), GR::zero(), GR::zero(), &e * &GR::int(sign)]
}

/// P̂_μ f = (ε, 0, 0, ±ε) f on the interior of `trunc`.
pub fn verify_p_eigenvalue(f: &MasslessEigenfunction, trunc: TruncationSpec) -> VerificationReport {
    let sw = Stopwatch::start();
    let rep = OscRep::new(RepVariant::Fundamental, trunc);
    let mut out = verify_p_eigenvector(&rep, &f.to_vector(&rep.basis), momentum(&f.epsilon, f.branch.sign()), "p-eigenvalue");
    out.parameters.insert("kappa".into(), json!(f.kappa));
    out.parameters.insert("epsilon".into(), json!(f.epsilon.to_string()));
    out.parameters.insert("branch".into(), json!(format!("{:?}", f.branch)));
    out.parameters.insert("series".into(), json!(format!("{:?}", f.rule)));
    sw.stamp(&mut out);
    out
}

/// Value √(`sqrt_arg`)·`factor` multiplying |`state`⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockCoefficient {
    pub sqrt_arg: BigRational,
    pub factor: GR,
    pub state: FockState,
}

fn single_mode_fock(n: u32, mode: usize) -> FockState {
    let mut f = FockState([0, 0]);
    f.0[mode] = n;
    f
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Closed form of ψ|n⟩: √((n+κ)!/n!) · 2^{2−κ}/Γ(κ−1) · ₁F₁(−n; κ−1; −2iε) for
/// the Bessel series, √((n+κ)!/n!) · ₁F₁(−n; κ+1; 2iε) for the Laguerre one.
pub fn eigenfunction_on_fock(kappa: i64, eps: &BigRational, n: u32, rule: SeriesRule) -> Result<FockCoefficient, MassiveError> {
    if kappa < 0 {
        return Err(MassiveError::NegativeKappa(kappa));
    }
    let sqrt_arg = BigRational::new(factorial(n + kappa as u32), factorial(n));
    let x = two_i_eps(eps);
    let factor = match rule {
        SeriesRule::Bessel => {
            if kappa < 2 {
                return Err(MassiveError::SingularPrefactor(kappa));
            }
            let pre = BigRational::new(BigInt::one(), (BigInt::one() << (kappa - 2) as usize) * factorial((kappa - 2) as u32));
            &GR::real(pre) * &horner_exact(&hyp1f1_poly(n, kappa - 1)?, &-x)
        }
        SeriesRule::Laguerre => horner_exact(&hyp1f1_poly(n, kappa + 1)?, &x),
    };
    Ok(FockCoefficient { sqrt_arg, factor, state: single_mode_fock(n + kappa as u32, 0) })
}

/// ψ|n⟩ summed monomial by monomial from the stored series.
pub fn eigenfunction_on_fock_series(f: &MasslessEigenfunction, n: u32) -> FockCoefficient {
    let sqrt_arg = BigRational::new(factorial(n + f.kappa as u32), factorial(n));
    let a = f.branch.mode();
    let mu = single_mode_fock(n, a);
    let mut factor = GR::zero();
    for (m, c) in f.coeffs.iter().enumerate() {
        if let Some((sq, _)) = monomial_on_fock(&f.term_state(m), &mu) {
            let ratio = exact_sqrt(&(sq / &sqrt_arg)).expect("ratio is a perfect square");
            factor += &c.scale(&ratio);
        }
    }
    FockCoefficient { sqrt_arg, factor, state: single_mode_fock(n + f.kappa as u32, a) }
}

/// Closed form against the series path for every (κ, n) requested.
pub fn verify_fock_closed_form(kappas: &[i64], n_max: u32, eps: &BigRational, rule: SeriesRule) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("fock-closed-form")
        .param("kappas", kappas.to_vec())
        .param("n_max", n_max)
        .param("epsilon", eps.to_string())
        .param("series", format!("{rule:?}"));
    for &k in kappas {
        let f = build_series(k, eps, Branch::Plus, n_max + 1, rule).expect("valid series");
        for n in 0..=n_max {
            let series = eigenfunction_on_fock_series(&f, n);
            match eigenfunction_on_fock(k, eps, n, rule) {
                Ok(closed) if closed == series => {}
                Ok(closed) => {
                    let d = (&closed.factor - &series.factor).max_abs_part();
                    out.fail(format!("κ={k}, n={n}: closed form {} vs series {}", closed.factor, series.factor));
                    out.residual = out.residual.clone().max(Residual::exact(d));
                }
                Err(e) => out.fail(format!("κ={k}, n={n}: {e}")),
            }
        }
    }
    sw.stamp(&mut out);
    out
}

/// Sparse vector on H_A ⊗ H_A′ keyed by (left index, right index).
pub type TensorVec = BTreeMap<(usize, usize), GR>;

pub fn tensor(l: &SparseVec, r: &SparseVec) -> TensorVec {
    let mut t = TensorVec::new();
    for (i, x) in l {
        for (j, y) in r {
            t.insert((*i, *j), x * y);
        }
    }
    t
}

fn tensor_add_scaled(acc: &mut TensorVec, v: &TensorVec, s: &GR) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(GR::zero);
        *e += &(x * s);
    }
    acc.retain(|_, x| !x.is_zero());
}

/// 𝐒 = Ŝ ⊗ id + id ⊗ S̃ applied lazily.
#[derive(Clone, Debug)]
pub struct ProductGenerator {
    pub label: GenLabel,
    pub left: GradedOperator,
    pub right: GradedOperator,
}

impl ProductGenerator {
    pub fn apply(&self, v: &TensorVec) -> TensorVec {
        let mut out = TensorVec::new();
        for ((i, j), x) in v {
            for (i2, c) in &self.left.cols[*i] {
                let e = out.entry((*i2, *j)).or_insert_with(GR::zero);
                *e += &(c * x);
            }
            for (j2, c) in &self.right.cols[*j] {
                let e = out.entry((*i, *j2)).or_insert_with(GR::zero);
                *e += &(c * x);
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }
}

/// Fundamental ⊗ dual realization on independently truncated factors.
#[derive(Clone, Debug)]
pub struct ProductRep {
    pub left: Arc<OscRep>,
    pub right: Arc<OscRep>,
}

impl ProductRep {
    pub fn new(trunc_left: TruncationSpec, trunc_right: TruncationSpec) -> Self {
        Self {
            left: Arc::new(OscRep::new(RepVariant::Fundamental, trunc_left)),
            right: Arc::new(OscRep::new(RepVariant::Dual, trunc_right)),
        }
    }

    pub fn generator(&self, label: GenLabel) -> ProductGenerator {
        ProductGenerator { label, left: self.left.operator(&label), right: self.right.operator(&label) }
    }

    /// Output entries whose left and right degrees sit `margin` below the caps.
    pub fn restrict(&self, v: &mut TensorVec, margin: u32) {
        let (cl, cr) = (self.left.basis.trunc.n_max.saturating_sub(margin), self.right.basis.trunc.n_max.saturating_sub(margin));
        v.retain(|(i, j), _| self.left.basis.states[*i].degree() <= cl && self.right.basis.states[*j].degree() <= cr);
    }
}

pub fn build_product_generator(label: GenLabel, trunc_left: TruncationSpec, trunc_right: TruncationSpec) -> ProductGenerator {
    ProductRep::new(trunc_left, trunc_right).generator(label)
}

/// 𝚿± = Ψ±(κ) ⊗ Ψ′∓(κ′).
pub fn massive_state(rep: &ProductRep, kappa: i64, kappa_p: i64, eps: &BigRational, branch: Branch) -> Result<TensorVec, MassiveError> {
    let terms = rep.left.basis.trunc.n_max / 2 + 1;
    let left = build_eigenfunction(kappa, eps, branch, terms, SeriesRule::Laguerre)?.to_vector(&rep.left.basis);
    let right = dual_eigenvector(kappa_p, eps, branch.flip(), &rep.right.basis)?;
    Ok(tensor(&left, &right))
}

/// 𝐏_μ𝚿 = (2ε, 0, 0, 0)𝚿 with margin 2 and 𝐏²𝚿 = (2ε)²𝚿 with margin 4.
pub fn verify_massive_on(rep: &ProductRep, kappa: i64, kappa_p: i64, eps: &BigRational, branch: Branch) -> Result<VerificationReport, MassiveError> {
    let sw = Stopwatch::start();
    let psi = massive_state(rep, kappa, kappa_p, eps, branch)?;
    let mut out = VerificationReport::new("massive-field")
        .param("kappa", kappa)
        .param("kappa_prime", kappa_p)
        .param("epsilon", eps.to_string())
        .param("branch", format!("{branch:?}"))
        .param("n_max_left", rep.left.basis.trunc.n_max)
        .param("n_max_right", rep.right.basis.trunc.n_max);
    if kappa < 2 || kappa_p < 2 {
        out.note("closed-form prefactor (κ−2)!(κ′−2)! is singular here; the series path is used");
    }
    let two_eps = GR::real(eps * BigRational::from_integer(2.into()));
    let p: Vec<ProductGenerator> = (0..4).map(|mu| rep.generator(GenLabel::P(mu))).collect();
    let expect = [two_eps.clone(), GR::zero(), GR::zero(), GR::zero()];
    let images: Vec<TensorVec> = p.iter().map(|g| g.apply(&psi)).collect();
    let mut worst = BigRational::zero();
    for mu in 0..4 {
        let mut r = images[mu].clone();
        tensor_add_scaled(&mut r, &psi, &-&expect[mu]);
        rep.restrict(&mut r, 2);
        let d = r.values().map(GR::max_abs_part).max().unwrap_or_else(BigRational::zero);
        if !d.is_zero() {
            out.fail(format!("P{mu} eigenvalue {} violated on {} entries", expect[mu], r.len()));
            worst = worst.max(d);
        }
    }
    let mut p2 = TensorVec::new();
    for mu in 0..4 {
        tensor_add_scaled(&mut p2, &p[mu].apply(&images[mu]), &GR::int(ETA[mu]));
    }
    let m2 = &two_eps * &two_eps;
    tensor_add_scaled(&mut p2, &psi, &-m2.clone());
    rep.restrict(&mut p2, 4);
    let d = p2.values().map(GR::max_abs_part).max().unwrap_or_else(BigRational::zero);
    if !d.is_zero() {
        out.fail(format!("P² ≠ {m2} on {} entries", p2.len()));
        worst = worst.max(d);
    }
    out.parameters.insert("mass".into(), json!(two_eps.to_string()));
    out.parameters.insert("support".into(), json!(psi.len()));
    out.residual = Residual::exact(worst);
    sw.stamp(&mut out);
    Ok(out)
}

pub fn verify_massive(kappa: i64, kappa_p: i64, eps: &BigRational, trunc: TruncationSpec) -> Result<VerificationReport, MassiveError> {
    if !eps.is_positive() {
        return Err(MassiveError::NonPositiveEpsilon);
    }
    let rep = ProductRep::new(trunc, trunc);
    let parts = [Branch::Plus, Branch::Minus]
        .iter()
        .map(|&b| verify_massive_on(&rep, kappa, kappa_p, eps, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport::merge("massive-field", parts))
}

/// d = 2 + (κ+κ′)/2, (j₁, j₂) = (κ/2, κ′/2), s = j₁ + j₂.
pub fn classify_massive(kappa: i64, kappa_p: i64) -> Result<MackClass, MassiveError> {
    if kappa < 0 {
        return Err(MassiveError::NegativeKappa(kappa));
    }
    if kappa_p < 0 {
        return Err(MassiveError::NegativeKappa(kappa_p));
    }
    Ok(MackClass {
        d: half(4 + kappa + kappa_p),
        j1: half(kappa),
        j2: half(kappa_p),
        tag: MackTag::Massive4,
        notes: vec![format!("spin s = {}", half(kappa + kappa_p))],
    })
}

pub fn classification_csv(kappas: &[i64], kappa_ps: &[i64]) -> String {
    let mut s = String::from("kappa,kappa_prime,d,j1,j2,s\n");
    for &k in kappas {
        for &kp in kappa_ps {
            let c = classify_massive(k, kp).expect("non-negative");
            s.push_str(&format!("{k},{kp},{},{},{},{}\n", c.d, c.j1, c.j2, half(k + kp)));
        }
    }
    s
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ProductSpectrum {
    /// (κ, κ′, lowest value of |iŜ₀₅| + |iS̃₀₅|) per sector.
    pub sector_minima: Vec<(i64, i64, String)>,
    /// Literal i𝐒₀₅ on vacuum ⊗ vacuum.
    pub vacuum_literal: String,
    pub vacuum_energy: String,
}

/// Per-state factor values of iŜ₀₅ (fundamental) and iS̃₀₅ (dual). The dual
/// values are −(1 + deg′/2); the energy adds the magnitudes.
pub fn product_s05_spectrum(trunc_left: TruncationSpec, trunc_right: TruncationSpec) -> ProductSpectrum {
    let left = crate::oscrep::s05_spectrum_on(&OscRep::new(RepVariant::Fundamental, trunc_left));
    let right = crate::oscrep::s05_spectrum_on(&OscRep::new(RepVariant::Dual, trunc_right));
    let parse = |s: &str| -> BigRational { s.parse().expect("rational") };
    let mut best: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
    let lmin = sector_min(&left.values, &parse);
    let rmin = sector_min(&right.values, &parse);
    for (k, a) in &lmin {
        for (kp, b) in &rmin {
            best.insert((*k, *kp), a + b);
        }
    }
    let v_l = parse(&left.values[0].1);
    let v_r = parse(&right.values[0].1);
    ProductSpectrum {
        sector_minima: best.into_iter().map(|((k, kp), v)| (k, kp, v.to_string())).collect(),
        vacuum_literal: (&v_l + &v_r).to_string(),
        vacuum_energy: (v_l.abs() + v_r.abs()).to_string(),
    }
}

fn sector_min(values: &[(AuxState, String)], parse: &dyn Fn(&str) -> BigRational) -> BTreeMap<i64, BigRational> {
    let mut m: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (s, v) in values {
        let x = parse(v).abs();
        let e = m.entry(chirality(s)).or_insert_with(|| x.clone());
        if x < *e {
            *e = x;
        }
    }
    m
}

/// Classification table against the sector minima of the product spectrum.
pub fn verify_classification(kappas: &[i64], trunc: TruncationSpec) -> VerificationReport {
    let sw = Stopwatch::start();
    let spec = product_s05_spectrum(trunc, trunc);
    let mut out = VerificationReport::new("massive-classification").param("n_max", trunc.n_max).param("kappas", kappas.to_vec());
    let rows: Vec<(i64, i64, bool)> = kappas
        .par_iter()
        .flat_map_iter(|&k| {
            let spec = &spec;
            kappas.iter().map(move |&kp| {
                let c = classify_massive(k, kp).unwrap();
                let got = spec.sector_minima.iter().find(|r| r.0 == k && r.1 == kp).map(|r| r.2.clone());
                let ok = got.as_deref() == Some(c.d.as_str()) && c.j1 == half(k) && c.j2 == half(kp);
                (k, kp, ok)
            })
        })
        .collect();
    for (k, kp, ok) in rows {
        if !ok {
            out.fail(format!("sector (κ, κ′) = ({k}, {kp}) disagrees with d = 2 + (κ+κ′)/2"));
        }
    }
    out.parameters.insert("vacuum_literal".into(), json!(spec.vacuum_literal));
    out.parameters.insert("vacuum_energy".into(), json!(spec.vacuum_energy));
    out.note("energies add |iŜ₀₅| and |iS̃₀₅|; the dual factor is negative definite");
    sw.stamp(&mut out);
    out
}
