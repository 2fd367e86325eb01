//! Boost machinery on the auxiliary space: sl(2) triples per mode, the Gauss
//! factorization, coherent-state matrix elements, a Taylor oracle for
//! `e^{βB}` and the boosted matrix elements 𝒫(k,l,m,n).
//!
//! Everything here uses the pairing ⟨n,m|n′,m′⟩ = n!m!δδ. Floating point
//! enters in this module and in the evaluation helpers of `specfun`.

use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussHermite;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exactnum::GR;
use crate::fockaux::{apply_word_int, AuxState, Basis, GradedOperator, Osc, SparseVec};
use crate::report::{Residual, Stopwatch, VerificationReport};
use crate::specfun::{factorial_f64, horner_f64, hyp2f1_poly};

type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoostError {
    #[error("mode must be 0 or 1, got {0}")]
    Mode(usize),
    #[error("{op} disagrees with its defining action at {state:?}")]
    TripleAction { op: &'static str, state: [u32; 4] },
}

fn word_op(name: &str, basis: &Arc<Basis>, terms: &[(GR, [Osc; 2])]) -> GradedOperator {
    GradedOperator::from_action(name, basis, 2, 0, |s| {
        let mut out: Vec<(AuxState, GR)> = Vec::new();
        for (c, w) in terms {
            for (t, k) in apply_word_int(w, s) {
                out.push((t, c * &GR::int(k)));
            }
        }
        out
    })
    .expect("bilinear words preserve chirality")
}

/// T₊ = ½â†b̂, T₋ = −½b̂†â, T₀ = ½(â†â + b̂†b̂) for one mode, and the
/// transformed triple 𝒯₋ = T₊ − T₋ − T₀, 𝒯₊ = −T₊, 𝒯₀ = T₀ − 2T₊.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub mode: usize,
    pub t_plus: GradedOperator,
    pub t_minus: GradedOperator,
    pub t_zero: GradedOperator,
    pub tt_plus: GradedOperator,
    pub tt_minus: GradedOperator,
    pub tt_zero: GradedOperator,
}

pub fn build_sl2_triple(mode: usize, basis: &Arc<Basis>) -> Result<Sl2Triple, BoostError> {
    if mode > 1 {
        return Err(BoostError::Mode(mode));
    }
    let half = GR::frac(1, 2);
    let t_plus = word_op("T+", basis, &[(half.clone(), [Osc::ADag(mode), Osc::B(mode)])]);
    let t_minus = word_op("T-", basis, &[(-&half, [Osc::BDag(mode), Osc::A(mode)])]);
    let t_zero = word_op(
        "T0",
        basis,
        &[(half.clone(), [Osc::ADag(mode), Osc::A(mode)]), (half, [Osc::BDag(mode), Osc::B(mode)])],
    );
    let one = GR::one();
    let m1 = GR::int(-1);
    let tt_minus = GradedOperator::linear("𝒯-", &[(&t_plus, one.clone()), (&t_minus, m1.clone()), (&t_zero, m1.clone())]);
    let tt_plus = GradedOperator::linear("𝒯+", &[(&t_plus, m1)]);
    let tt_zero = GradedOperator::linear("𝒯0", &[(&t_zero, one), (&t_plus, GR::int(-2))]);
    let tr = Sl2Triple { mode, t_plus, t_minus, t_zero, tt_plus, tt_minus, tt_zero };
    for j in basis.interior(2) {
        let s = basis.states[j];
        let (n, m) = (s.n(mode), s.m(mode));
        let e = SparseVec::from([(j, GR::one())]);
        let at = |t: AuxState, c: GR| -> SparseVec {
            if c.is_zero() {
                SparseVec::new()
            } else {
                SparseVec::from([(basis.index_of(&t).unwrap(), c)])
            }
        };
        let mut up = s;
        up.0[mode] += 1;
        up.0[2 + mode] += 1;
        if tr.tt_plus.apply(&e) != at(up, GR::frac(-1, 2)) {
            return Err(BoostError::TripleAction { op: "𝒯+", state: s.0 });
        }
        if tr.tt_zero.apply(&e) != at(s, GR::frac((n + m + 1) as i64, 2)) {
            return Err(BoostError::TripleAction { op: "𝒯0", state: s.0 });
        }
        let lowered = if n > 0 && m > 0 {
            let mut d = s;
            d.0[mode] -= 1;
            d.0[2 + mode] -= 1;
            at(d, GR::frac((n * m) as i64, 2))
        } else {
            SparseVec::new()
        };
        if tr.tt_minus.apply(&e) != lowered {
            return Err(BoostError::TripleAction { op: "𝒯-", state: s.0 });
        }
    }
    Ok(tr)
}

fn commutator_residual(x: &GradedOperator, y: &GradedOperator, rhs: &[(&GradedOperator, GR)], cols: &[usize]) -> Option<usize> {
    cols.iter().copied().find(|&j| {
        let e = SparseVec::from([(j, GR::one())]);
        let mut lhs = x.apply(&y.apply(&e));
        crate::fockaux::vec_add_scaled(&mut lhs, &y.apply(&x.apply(&e)), &GR::int(-1));
        for (op, c) in rhs {
            crate::fockaux::vec_add_scaled(&mut lhs, &op.apply(&e), &-c);
        }
        !lhs.is_empty()
    })
}

/// [X₊, X₋] = ½X₀ and [X₀, X±] = ±X± for both triples, on `deg ≤ n_max − 4`.
pub fn verify_sl2_relations(tr: &Sl2Triple) -> VerificationReport {
    let sw = Stopwatch::start();
    let basis = tr.t_plus.basis.clone();
    let cols = basis.interior(4);
    let mut out = VerificationReport::new("sl2-relations").param("mode", tr.mode).param("n_max", basis.trunc.n_max);
    let half = GR::frac(1, 2);
    for (tag, p, m, z) in [
        ("T", &tr.t_plus, &tr.t_minus, &tr.t_zero),
        ("𝒯", &tr.tt_plus, &tr.tt_minus, &tr.tt_zero),
    ] {
        let checks: [(&str, &GradedOperator, &GradedOperator, Vec<(&GradedOperator, GR)>); 3] = [
            ("[+,-]", p, m, vec![(z, half.clone())]),
            ("[0,+]", z, p, vec![(p, GR::one())]),
            ("[0,-]", z, m, vec![(m, GR::int(-1))]),
        ];
        for (name, x, y, rhs) in checks {
            if let Some(j) = commutator_residual(x, y, &rhs, &cols) {
                out.fail(format!("{tag}{name} violated at {:?}", basis.states[j].0));
                out.residual = Residual::Float(1.0);
            }
        }
    }
    sw.stamp(&mut out);
    out
}

/// Every operator of one triple commutes with every operator of the other.
pub fn verify_modes_commute(a: &Sl2Triple, b: &Sl2Triple) -> VerificationReport {
    let basis = a.t_plus.basis.clone();
    let cols = basis.interior(4);
    let mut out = VerificationReport::new("sl2-modes-commute").param("n_max", basis.trunc.n_max);
    let ops = |t: &Sl2Triple| vec![t.t_plus.clone(), t.t_minus.clone(), t.t_zero.clone(), t.tt_plus.clone(), t.tt_minus.clone(), t.tt_zero.clone()];
    for x in ops(a) {
        for y in ops(b) {
            if let Some(j) = commutator_residual(&x, &y, &[], &cols) {
                out.fail(format!("[{}¹, {}²] ≠ 0 at {:?}", x.name, y.name, basis.states[j].0));
            }
        }
    }
    out
}

/// Direction of the boost generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BoostAxis {
    X,
    Z,
}

impl BoostAxis {
    /// Real Pauli matrix (σ₁ or σ₃) contracting the mode indices.
    pub fn pauli(self) -> [[i64; 2]; 2] {
        match self {
            BoostAxis::X => [[0, 1], [1, 0]],
            BoostAxis::Z => [[1, 0], [0, -1]],
        }
    }
}

/// Mode-mixing action Σ M_{αβ}(𝒯₊^{αβ} + 𝒯₋^{αβ}) with
/// 𝒯₊^{αβ}|n,m⟩ = −½|n+e_α, m+e_β⟩ and 𝒯₋^{αβ}|n,m⟩ = ½n_α m_β|n−e_α, m−e_β⟩.
pub fn boost_generator(axis: BoostAxis, basis: &Arc<Basis>) -> GradedOperator {
    let m = axis.pauli();
    GradedOperator::from_action(format!("B{axis:?}"), basis, 2, 0, |s| {
        let mut out = Vec::new();
        for (al, row) in m.iter().enumerate() {
            for (be, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mut up = *s;
                up.0[al] += 1;
                up.0[2 + be] += 1;
                out.push((up, GR::frac(-c, 2)));
                let (n, mm) = (s.n(al), s.m(be));
                if n > 0 && mm > 0 {
                    let mut d = *s;
                    d.0[al] -= 1;
                    d.0[2 + be] -= 1;
                    out.push((d, GR::frac(c * (n * mm) as i64, 2)));
                }
            }
        }
        out
    })
    .expect("boost generator preserves chirality")
}

/// Sparse complex matrix stored by columns.
#[derive(Clone, Debug)]
pub struct FloatOp {
    pub cols: Vec<Vec<(usize, C64)>>,
}

impl FloatOp {
    pub fn from_graded(op: &GradedOperator) -> Self {
        let cols = op
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(i, x)| {
                        let (re, im) = x.to_f64_parts();
                        (*i, C64::new(re, im))
                    })
                    .collect()
            })
            .collect();
        Self { cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (j, x) in v.iter().enumerate() {
            if *x == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, c) in &self.cols[j] {
                out[*i] += c * x;
            }
        }
        out
    }

    /// Largest absolute column sum.
    pub fn norm1(&self) -> f64 {
        self.cols.iter().map(|c| c.iter().map(|(_, x)| x.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.cols
            .iter()
            .enumerate()
            .map(|(j, c)| c.iter().find(|(i, _)| *i == j).map(|(_, x)| *x).unwrap_or_default())
            .collect()
    }
}

/// Π n_α! m_α! for each basis state.
pub fn pairing_weights(basis: &Basis) -> Vec<f64> {
    basis.states.iter().map(|s| s.0.iter().map(|&k| factorial_f64(k)).product()).collect()
}

pub fn pairing_norm_sqr(w: &[f64], v: &[C64]) -> f64 {
    v.iter().zip(w).map(|(x, w)| x.norm_sqr() * w).sum()
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub vector: Vec<C64>,
    /// Pairing norm of the components in the top two degree shells,
    /// relative to the norm of the result.
    pub tail: f64,
    pub steps: usize,
    pub flagged: bool,
}

/// `e^{βA}v` by sub-stepped Taylor series on the truncated matrix.
pub fn expm_oracle(op: &FloatOp, basis: &Basis, beta: f64, v: &[C64], tail_tol: f64) -> OracleResult {
    let steps = ((beta.abs() * op.norm1() / 2.0).ceil() as usize).max(1);
    let h = beta / steps as f64;
    let mut cur = v.to_vec();
    for _ in 0..steps {
        let mut acc = cur.clone();
        let mut term = cur;
        for k in 1..200 {
            term = op.apply(&term);
            let scale = h / k as f64;
            let mut big = 0.0f64;
            for x in term.iter_mut() {
                *x *= scale;
                big = big.max(x.norm());
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            let top = acc.iter().map(|x| x.norm()).fold(0.0, f64::max);
            if big <= 1e-18 * top {
                break;
            }
        }
        cur = acc;
    }
    let w = pairing_weights(basis);
    let cap = basis.trunc.n_max.saturating_sub(1);
    let total = pairing_norm_sqr(&w, &cur);
    let tail: f64 = basis
        .states
        .iter()
        .zip(cur.iter().zip(&w))
        .filter(|(s, _)| s.degree() >= cap)
        .map(|(_, (x, w))| x.norm_sqr() * w)
        .sum();
    let tail = if total > 0.0 { (tail / total).sqrt() } else { 0.0 };
    OracleResult { vector: cur, tail, steps, flagged: tail > tail_tol }
}

/// `e^{xA}v` for a nilpotent `A` on the truncated space.
pub fn exp_nilpotent(op: &FloatOp, x: f64, v: &[C64]) -> Vec<C64> {
    let mut acc = v.to_vec();
    let mut term = v.to_vec();
    for k in 1..=(2 * op.dim() + 1) {
        term = op.apply(&term);
        if term.iter().all(|t| *t == C64::new(0.0, 0.0)) {
            break;
        }
        for t in term.iter_mut() {
            *t *= x / k as f64;
        }
        for (a, t) in acc.iter_mut().zip(&term) {
            *a += t;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GaussCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// a = c = 2 tanh(β/2), b = −2 log cosh(β/2).
pub fn gauss_coeffs(beta: f64) -> GaussCoeffs {
    let a = 2.0 * (beta / 2.0).tanh();
    GaussCoeffs { a, b: -2.0 * (beta / 2.0).cosh().ln(), c: a }
}

type M2 = [[f64; 2]; 2];

fn m2_mul(x: &M2, y: &M2) -> M2 {
    let mut o = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    o
}

/// Max-abs deviation between `exp(β(X+Y)/2)` and the three 2×2 factors,
/// under 2𝒯₊ ↔ X, 2𝒯₀ ↔ H, 2𝒯₋ ↔ Y.
pub fn gauss_matrix_residual(beta: f64) -> f64 {
    let g = gauss_coeffs(beta);
    let (ch, sh) = ((beta / 2.0).cosh(), (beta / 2.0).sinh());
    let lhs = [[ch, sh], [sh, ch]];
    let upper = [[1.0, g.a / 2.0], [0.0, 1.0]];
    let diag = [[(g.b / 2.0).exp(), 0.0], [0.0, (-g.b / 2.0).exp()]];
    let lower = [[1.0, 0.0], [g.c / 2.0, 1.0]];
    let rhs = m2_mul(&m2_mul(&upper, &diag), &lower);
    (0..4).map(|k| (lhs[k / 2][k % 2] - rhs[k / 2][k % 2]).abs()).fold(0.0, f64::max)
}

/// Floating triples for both modes and the z-boost sign s = (+1, −1).
pub struct GaussFactors {
    pub plus: [FloatOp; 2],
    pub zero: [Vec<C64>; 2],
    pub minus: [FloatOp; 2],
}

pub const Z_SIGNS: [f64; 2] = [1.0, -1.0];

impl GaussFactors {
    pub fn new(t: &[Sl2Triple; 2]) -> Self {
        Self {
            plus: [FloatOp::from_graded(&t[0].tt_plus), FloatOp::from_graded(&t[1].tt_plus)],
            zero: [FloatOp::from_graded(&t[0].tt_zero).diagonal(), FloatOp::from_graded(&t[1].tt_zero).diagonal()],
            minus: [FloatOp::from_graded(&t[0].tt_minus), FloatOp::from_graded(&t[1].tt_minus)],
        }
    }

    /// Π_α e^{a_α 𝒯₊^α} e^{b_α 𝒯₀^α} e^{c_α 𝒯₋^α} v with β_α = s_α β,
    /// restricted to the modes listed.
    pub fn apply(&self, beta: f64, modes: &[usize], v: &[C64]) -> Vec<C64> {
        let mut cur = v.to_vec();
        for &al in modes {
            let g = gauss_coeffs(Z_SIGNS[al] * beta);
            cur = exp_nilpotent(&self.minus[al], g.c, &cur);
            for (x, d) in cur.iter_mut().zip(&self.zero[al]) {
                *x *= (g.b * d).exp();
            }
            cur = exp_nilpotent(&self.plus[al], g.a, &cur);
        }
        cur
    }
}

/// Largest pairing-normalized difference, relative to the norm of `input`.
pub fn pairing_distance(w: &[f64], x: &[C64], y: &[C64], input: &[C64]) -> f64 {
    let n = pairing_norm_sqr(w, input).sqrt();
    x.iter().zip(y).zip(w).map(|((a, b), w)| (a - b).norm() * w.sqrt()).fold(0.0, f64::max) / n
}

fn unit(dim: usize, j: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[j] = C64::new(1.0, 0.0);
    v
}

/// Three-factor product against `expm_oracle(βB_z)` for every basis state
/// of degree ≤ `input_degree`, on the same truncation.
pub fn verify_gauss_decomposition(n_max: u32, betas: &[f64], input_degree: u32, tol: f64) -> VerificationReport {
    let sw = Stopwatch::start();
    let basis = Basis::new(crate::fockaux::TruncationSpec::new(n_max));
    let triples = [build_sl2_triple(0, &basis).unwrap(), build_sl2_triple(1, &basis).unwrap()];
    let factors = GaussFactors::new(&triples);
    let gen = FloatOp::from_graded(&boost_generator(BoostAxis::Z, &basis));
    let w = pairing_weights(&basis);
    let inputs: Vec<usize> = (0..basis.len()).filter(|&j| basis.states[j].degree() <= input_degree).collect();
    let mut out = VerificationReport::new("gauss-decomposition").param("n_max", n_max).param("input_degree", input_degree).param("tolerance", tol);
    let mut worst = 0.0f64;
    let mut per_beta = Vec::new();
    for &beta in betas {
        let rows: Vec<(f64, f64)> = inputs
            .par_iter()
            .map(|&j| {
                let v = unit(basis.len(), j);
                let g = factors.apply(beta, &[0, 1], &v);
                let o = expm_oracle(&gen, &basis, beta, &v, tol);
                (pairing_distance(&w, &g, &o.vector, &v), o.tail)
            })
            .collect();
        let err = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let tail = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        worst = worst.max(err);
        if err > tol {
            out.fail(format!("β = {beta}: max deviation {err:.3e} exceeds {tol:.0e}; oracle truncation tail {tail:.3e}"));
        }
        per_beta.push(json!({"beta": beta, "max_deviation": err, "oracle_tail": tail}));
    }
    out.parameters.insert("per_beta".into(), json!(per_beta));
    out.residual = Residual::Float(worst);
    sw.stamp(&mut out);
    out
}

/// Single-mode comparison with a truncation chosen large enough for the
/// oracle tail to be negligible.
pub fn gauss_single_mode_reference(n_max: u32, beta: f64, input_degree: u32) -> (f64, f64) {
    let basis = Basis::single_mode(n_max);
    let tr = build_sl2_triple(0, &basis).unwrap();
    let plus = FloatOp::from_graded(&tr.tt_plus);
    let minus = FloatOp::from_graded(&tr.tt_minus);
    let zero = FloatOp::from_graded(&tr.tt_zero).diagonal();
    let gen = FloatOp::from_graded(&GradedOperator::linear("B", &[(&tr.tt_plus, GR::one()), (&tr.tt_minus, GR::one())]));
    let w = pairing_weights(&basis);
    let g = gauss_coeffs(beta);
    let mut worst = 0.0f64;
    let mut tail = 0.0f64;
    for j in (0..basis.len()).filter(|&j| basis.states[j].degree() <= input_degree) {
        let v = unit(basis.len(), j);
        let mut x = exp_nilpotent(&minus, g.c, &v);
        for (y, d) in x.iter_mut().zip(&zero) {
            *y *= (g.b * d).exp();
        }
        let x = exp_nilpotent(&plus, g.a, &x);
        let o = expm_oracle(&gen, &basis, beta, &v, 1e-12);
        worst = worst.max(pairing_distance(&w, &x, &o.vector, &v));
        tail = tail.max(o.tail);
    }
    (worst, tail)
}

/// `|A⟩⟨B|` in the monomial coefficients of H_A:
/// e^{−(|A|²+|B|²)/2} Π A_α^{n_α} B̄_α^{m_α} / (n_α! m_α!).
pub fn coherent_vector(basis: &Basis, a: [C64; 2], b: [C64; 2]) -> Vec<C64> {
    let norm = (-(a[0].norm_sqr() + a[1].norm_sqr() + b[0].norm_sqr() + b[1].norm_sqr()) / 2.0).exp();
    basis
        .states
        .iter()
        .map(|s| {
            let mut x = C64::new(norm, 0.0);
            for al in 0..2 {
                x *= a[al].powu(s.n(al)) * b[al].conj().powu(s.m(al)) / (factorial_f64(s.n(al)) * factorial_f64(s.m(al)));
            }
            x
        })
        .collect()
}

/// ⟨C|e^{β(𝒯₋+𝒯₊)}(|A⟩⟨B|)|D⟩ for one mode, closed form.
pub fn phi_matrix_element(a: C64, b: C64, c: C64, d: C64, beta: f64) -> C64 {
    let ch = (beta / 2.0).cosh();
    let t = (beta / 2.0).tanh();
    let gauss = -(a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()) / 2.0;
    (C64::new(gauss, 0.0) + t * (a * b.conj() - c.conj() * d) + (a * c.conj() + b.conj() * d) / ch).exp() / ch
}

/// ⟨C|ψ|D⟩ = e^{−(|C|²+|D|²)/2} Σ ψ_nm C̄^n D^m on a single-mode basis.
pub fn cs_sandwich(basis: &Basis, v: &[C64], c: C64, d: C64) -> C64 {
    let pre = (-(c.norm_sqr() + d.norm_sqr()) / 2.0).exp();
    basis.states.iter().zip(v).map(|(s, x)| x * c.conj().powu(s.n(0)) * d.powu(s.m(0))).sum::<C64>() * pre
}

/// 𝒩(A,A′,B,B′) = e^{AĀ′ + B̄B′}.
pub fn n_kernel(a: C64, a2: C64, b: C64, b2: C64) -> C64 {
    (a * a2.conj() + b.conj() * b2).exp()
}

/// ∫ f(C, D) d²C d²D / π² for integrands carrying the Gaussian
/// e^{−|C|²−|D|²−2t Re(C̄D)}: the quadratic form is diagonalized along
/// (x₁ ± x₂)/√2, rescaled by √(1 ± t), and each real direction gets an
/// `nodes`-point Gauss–Hermite rule.
pub fn quad_cd(nodes: usize, t: f64, f: impl Fn(C64, C64) -> C64 + Sync) -> C64 {
    let gh = GaussHermite::new(NonZeroUsize::new(nodes).expect("nodes ≥ 1"));
    let pairs: Vec<(f64, f64)> = gh.as_node_weight_pairs().to_vec();
    let (sp, sm) = ((1.0 + t).sqrt(), (1.0 - t).sqrt());
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    // (x₁, x₂, weight·e^{p²+q²}) on one real plane
    let plane: Vec<(f64, f64, f64)> = pairs
        .iter()
        .flat_map(|&(p, wp)| {
            pairs.iter().map(move |&(q, wq)| {
                let (u, v) = (p / sp, q / sm);
                ((u + v) * r2, (u - v) * r2, wp * wq * (p * p + q * q).exp())
            })
        })
        .collect();
    let total: C64 = plane
        .par_iter()
        .map(|&(x1, x2, wx)| {
            plane
                .iter()
                .map(|&(y1, y2, wy)| f(C64::new(x1, y1), C64::new(x2, y2)) * (wx * wy))
                .sum::<C64>()
        })
        .sum();
    total / (std::f64::consts::PI.powi(2) * (1.0 - t * t))
}

/// 𝒩 by quadrature of ∫ conj(⟨C|φ̆_{A′B′}|D⟩)⟨C|φ̆_{AB}|D⟩, with φ̆ the
/// boosted unnormalized coherent block.
pub fn n_kernel_quadrature(a: C64, a2: C64, b: C64, b2: C64, beta: f64, nodes: usize) -> C64 {
    let t = (beta / 2.0).tanh();
    let ra = ((a.norm_sqr() + b.norm_sqr()) / 2.0).exp();
    let rb = ((a2.norm_sqr() + b2.norm_sqr()) / 2.0).exp();
    quad_cd(nodes, t, |c, d| phi_matrix_element(a2, b2, c, d, beta).conj() * phi_matrix_element(a, b, c, d, beta) * ra * rb)
}

/// ‖e^{βB_z}(|A⟩⟨B|)‖² by quadrature, mode by mode with β_α = s_α β.
pub fn boosted_cs_norm_quadrature(a: [C64; 2], b: [C64; 2], beta: f64, nodes: usize) -> f64 {
    (0..2)
        .map(|al| {
            let be = Z_SIGNS[al] * beta;
            let t = (be / 2.0).tanh();
            quad_cd(nodes, t, |c, d| C64::new(phi_matrix_element(a[al], b[al], c, d, be).norm_sqr(), 0.0)).re
        })
        .product()
}

fn hyp2f1_at(k: u32, l: u32, c: i64, x: f64) -> f64 {
    horner_f64(&hyp2f1_poly(k, l, c).expect("c ≥ 1"), x)
}

/// 𝒫(k,l,m,n) = ⟨k|e^{β(𝒯₋+𝒯₊)}(|n⟩⟨m|)|l⟩; zero unless l − k = m − n.
pub fn p_matrix_element(k: u32, l: u32, m: u32, n: u32, beta: f64) -> f64 {
    if l as i64 - k as i64 != m as i64 - n as i64 {
        return 0.0;
    }
    let (c, s, t) = ((beta / 2.0).cosh(), (beta / 2.0).sinh(), (beta / 2.0).tanh());
    let x = -s * s;
    let pre = c.powi(-((k + l + 1) as i32));
    if k <= n {
        t.powi((n - k) as i32) * pre * factorial_f64(n) * factorial_f64(m) / factorial_f64(n - k) * hyp2f1_at(k, l, (n - k + 1) as i64, x)
    } else {
        (-s * c).powi((k - n) as i32) * pre * factorial_f64(k) * factorial_f64(l) / factorial_f64(k - n) * hyp2f1_at(n, m, (k - n + 1) as i64, x)
    }
}

/// Two-branch expression split at k ≤ m. `None` where it
/// needs (2m − n)! with 2m < n.
pub fn p_matrix_element_split_m(k: u32, l: u32, m: u32, n: u32, beta: f64) -> Option<f64> {
    if l as i64 - k as i64 != m as i64 - n as i64 {
        return Some(0.0);
    }
    let (c, s, t) = ((beta / 2.0).cosh(), (beta / 2.0).sinh(), (beta / 2.0).tanh());
    let x = -s * s;
    let pre = t.powi(m as i32 - k as i32) * c.powi(-((k + l + 1) as i32));
    if k <= m {
        Some(pre * factorial_f64(m) * factorial_f64(n) / factorial_f64(m - k) * hyp2f1_at(k, l, (m - k + 1) as i64, x))
    } else {
        let q = (2 * m).checked_sub(n)?;
        Some(pre * x.powi((k - m) as i32) * factorial_f64(k) * factorial_f64(l) * factorial_f64(n) / (factorial_f64(k - m) * factorial_f64(q)) * hyp2f1_at(m, q, (k - m + 1) as i64, x))
    }
}

/// 𝒫 from the oracle: k!l! times the (k,l) coefficient of
/// e^{β(𝒯₋+𝒯₊)}|n,m⟩ on a single-mode truncation.
pub struct SingleModeOracle {
    pub basis: Arc<Basis>,
    pub gen: FloatOp,
}

impl SingleModeOracle {
    pub fn new(n_max: u32) -> Self {
        let basis = Basis::single_mode(n_max);
        let tr = build_sl2_triple(0, &basis).expect("mode 0");
        let gen = FloatOp::from_graded(&GradedOperator::linear("B", &[(&tr.tt_plus, GR::one()), (&tr.tt_minus, GR::one())]));
        Self { basis, gen }
    }

    pub fn boost(&self, beta: f64, v: &[C64]) -> OracleResult {
        expm_oracle(&self.gen, &self.basis, beta, v, 1e-12)
    }

    pub fn state(&self, n: u32, m: u32) -> Option<usize> {
        self.basis.index_of(&AuxState::new(n, 0, m, 0))
    }

    /// (𝒫, oracle tail).
    pub fn p_element(&self, k: u32, l: u32, m: u32, n: u32, beta: f64) -> (f64, f64) {
        let j = self.state(n, m).expect("input inside truncation");
        let r = self.boost(beta, &unit(self.basis.len(), j));
        let val = self.state(k, l).map(|i| r.vector[i].re * factorial_f64(k) * factorial_f64(l)).unwrap_or(0.0);
        (val, r.tail)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BasisNorm {
    pub value: f64,
    /// Contribution of the last ten k-values.
    pub last_decade: f64,
    pub converged: bool,
}

/// Σ_k 𝒫(k,l,m,n)²/(k!l!) with l = k + m − n and k, l ≤ cutoff; equals n!m!.
pub fn boosted_basis_norm(n: u32, m: u32, beta: f64, cutoff: u32, tol: f64) -> BasisNorm {
    let mut value = 0.0;
    let mut last = 0.0;
    for k in 0..=cutoff {
        let l = k as i64 + m as i64 - n as i64;
        if l < 0 || l > cutoff as i64 {
            continue;
        }
        let l = l as u32;
        let p = p_matrix_element(k, l, m, n, beta);
        let term = p * p / (factorial_f64(k) * factorial_f64(l));
        value += term;
        if k + 10 > cutoff {
            last += term;
        }
    }
    BasisNorm { value, last_decade: last, converged: last <= tol * value.max(1.0) }
}

/// Double sum over l ≤ cutoff of the squared k ≤ m and k > m branches.
/// `None` where a (2m − n)! with 2m < n is required.
pub fn parseval_branch_sum(n: u32, m: u32, beta: f64, cutoff: u32) -> Option<f64> {
    let (c, s, t) = ((beta / 2.0).cosh(), (beta / 2.0).sinh(), (beta / 2.0).tanh());
    let x = -s * s;
    let (fnn, fm) = (factorial_f64(n), factorial_f64(m));
    let mut total = 0.0;
    for l in 0..=cutoff {
        let fl = factorial_f64(l);
        for k in 0..=m {
            let r = t.powi((m - k) as i32) / factorial_f64(m - k);
            let f = hyp2f1_at(k, l, (m - k + 1) as i64, x);
            total += fnn * fm * r * r * f * f / c.powi(2 * (k + l + 1) as i32);
        }
        if m < cutoff {
            let q = (2 * m).checked_sub(n)?;
            let fq = factorial_f64(q);
            for k in (m + 1)..=cutoff {
                let fk = factorial_f64(k);
                let r = t.powi((k - m) as i32) / factorial_f64(k - m);
                let f = hyp2f1_at(m, q, (k - m + 1) as i64, x);
                total += fk * fk * fl * fl * fnn / (fm * fq * fq) * r * r * f * f / c.powi(2 * (n + m + 1) as i32);
            }
        }
    }
    Some(total)
}

/// Reports |branch sum − 1| and, alongside, the weighted sum
/// Σ_k 𝒫²/(k! l! n! m!) with l = k + m − n.
pub fn parseval_check(n: u32, m: u32, beta: f64, cutoff: u32, tol: f64) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("parseval")
        .param("n", n)
        .param("m", m)
        .param("beta", beta)
        .param("cutoff", cutoff)
        .param("tolerance", tol);
    let weighted = boosted_basis_norm(n, m, beta, cutoff, tol);
    let recon = weighted.value / (factorial_f64(n) * factorial_f64(m));
    out.parameters.insert("weighted_sum".into(), json!(recon));
    out.parameters.insert("weighted_deviation".into(), json!((recon - 1.0).abs()));
    match parseval_branch_sum(n, m, beta, cutoff) {
        None => {
            out.fail(format!("branch sum requires (2m−n)! with 2m−n = {} < 0", 2 * m as i64 - n as i64));
            out.residual = Residual::Float(f64::INFINITY);
            out.parameters.insert("branch_sum".into(), json!(null));
        }
        Some(sum) => {
            let dev = (sum - 1.0).abs();
            out.parameters.insert("branch_sum".into(), json!(sum));
            out.residual = Residual::Float(dev);
            if !(dev <= tol) {
                out.fail(format!("branch sum = {sum:.6e}, |sum − 1| = {dev:.3e}"));
            }
        }
    }
    sw.stamp(&mut out);
    out
}

/// CSV rows `k,l,p` of 𝒫(k, k+m−n, m, n) for k ≤ k_max.
pub fn p_grid_csv(n: u32, m: u32, beta: f64, k_max: u32) -> String {
    let mut s = String::from("k,l,p\n");
    for k in 0..=k_max {
        let l = k as i64 + m as i64 - n as i64;
        if l < 0 {
            continue;
        }
        s.push_str(&format!("{k},{l},{:.17e}\n", p_matrix_element(k, l as u32, m, n, beta)));
    }
    s
}

/// ‖e^{βB}(|A⟩⟨B|)‖² from the oracle on a two-mode truncation.
pub fn oracle_cs_norm(axis: BoostAxis, n_max: u32, a: [C64; 2], b: [C64; 2], beta: f64) -> (f64, f64) {
    let basis = Basis::new(crate::fockaux::TruncationSpec::new(n_max));
    let gen = FloatOp::from_graded(&boost_generator(axis, &basis));
    let v = coherent_vector(&basis, a, b);
    let r = expm_oracle(&gen, &basis, beta, &v, 1e-10);
    (pairing_norm_sqr(&pairing_weights(&basis), &r.vector), r.tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockaux::TruncationSpec;
    use crate::liealg4::{s_index, RepVariant};
    use crate::oscrep::OscRep;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triple_actions_and_relations() {
        let basis = Basis::new(TruncationSpec::new(8));
        let t1 = build_sl2_triple(0, &basis).unwrap();
        let t2 = build_sl2_triple(1, &basis).unwrap();
        assert!(verify_sl2_relations(&t1).pass);
        assert!(verify_sl2_relations(&t2).pass);
        assert!(verify_modes_commute(&t1, &t2).pass);
        let j = basis.index_of(&AuxState::new(2, 0, 3, 0)).unwrap();
        let v = t1.tt_minus.apply(&SparseVec::from([(j, GR::one())]));
        assert_eq!(v, SparseVec::from([(basis.index_of(&AuxState::new(1, 0, 2, 0)).unwrap(), GR::int(3))]));
        assert_eq!(t1.tt_zero.diagonal(0), GR::frac(1, 2));
        assert_eq!(build_sl2_triple(2, &basis).unwrap_err(), BoostError::Mode(2));
    }

    #[test]
    fn s03_from_triples() {
        let rep = OscRep::new(RepVariant::Fundamental, TruncationSpec::new(6));
        let t = [build_sl2_triple(0, &rep.basis).unwrap(), build_sl2_triple(1, &rep.basis).unwrap()];
        let recon = GradedOperator::linear(
            "S03",
            &[
                (&t[0].t_plus, GR::one()),
                (&t[0].t_minus, GR::one()),
                (&t[1].t_plus, GR::int(-1)),
                (&t[1].t_minus, GR::int(-1)),
            ],
        );
        let (_, idx) = s_index(0, 3).unwrap();
        assert_eq!(recon.cols, rep.s[idx].cols);
        let tt = GradedOperator::linear(
            "Bz",
            &[
                (&t[0].tt_plus, GR::one()),
                (&t[0].tt_minus, GR::one()),
                (&t[1].tt_plus, GR::int(-1)),
                (&t[1].tt_minus, GR::int(-1)),
            ],
        );
        assert_eq!(tt.cols, boost_generator(BoostAxis::Z, &rep.basis).cols);
    }

    #[test]
    fn gauss_coefficients() {
        let g = gauss_coeffs(0.0);
        assert_eq!((g.a, g.b, g.c), (0.0, 0.0, 0.0));
        assert!((gauss_coeffs(1.0).a - 0.924234).abs() < 1e-6);
        for beta in [0.25, 1.0, 2.0] {
            assert!(gauss_matrix_residual(beta) <= 1e-14);
        }
    }

    #[test]
    fn oracle_trivial_cases() {
        let basis = Basis::single_mode(6);
        let tr = build_sl2_triple(0, &basis).unwrap();
        let zero = FloatOp::from_graded(&tr.tt_zero);
        let v: Vec<C64> = (0..basis.len()).map(|i| c(1.0 + i as f64, 0.5)).collect();
        assert_eq!(expm_oracle(&zero, &basis, 0.0, &v, 1e-10).vector, v);
        let r = expm_oracle(&zero, &basis, 0.7, &v, 1e-10);
        for (i, s) in basis.states.iter().enumerate() {
            let expect = v[i] * (0.7 * (s.degree() as f64 + 1.0) / 2.0).exp();
            assert!((r.vector[i] - expect).norm() < 1e-12 * expect.norm());
        }
    }

    #[test]
    fn gauss_product_on_low_states() {
        let r = verify_gauss_decomposition(12, &[0.1], 2, 1e-8);
        assert!(r.pass, "{:?}", r.notes);
        let (dev, tail) = gauss_single_mode_reference(80, 0.5, 4);
        assert!(tail < 1e-12 && dev < 1e-12, "{dev} {tail}");
    }

    #[test]
    fn phi_examples() {
        for beta in [0.0, 0.7, 1.5] {
            let z = phi_matrix_element(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), beta);
            assert!((z - 1.0 / (beta / 2.0).cosh()).norm() < 1e-15);
        }
        let (a, b, cc, d) = (c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0), c(0.1, -0.3));
        let z = phi_matrix_element(a, b, cc, d, 0.0);
        let overlap = (-(a.norm_sqr() + b.norm_sqr() + cc.norm_sqr() + d.norm_sqr()) / 2.0 + a * cc.conj() + b.conj() * d).exp();
        assert!((z - overlap).norm() < 1e-15);
    }

    #[test]
    fn phi_against_oracle() {
        let o = SingleModeOracle::new(30);
        let (a, b, cc, d, beta) = (c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(-0.5, 0.0), 1.0);
        let basis = &o.basis;
        let v: Vec<C64> = basis
            .states
            .iter()
            .map(|s| {
                (-(a.norm_sqr() + b.norm_sqr()) / 2.0).exp() * a.powu(s.n(0)) * b.conj().powu(s.m(0))
                    / (factorial_f64(s.n(0)) * factorial_f64(s.m(0)))
            })
            .collect();
        let r = o.boost(beta, &v);
        let num = cs_sandwich(basis, &r.vector, cc, d);
        assert!((num - phi_matrix_element(a, b, cc, d, beta)).norm() <= 1e-9);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(n_kernel(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)), c(1.0, 0.0));
        let (a, b) = (c(0.3, -0.2), c(0.1, 0.5));
        assert!((n_kernel(a, a, b, b) - c((a.norm_sqr() + b.norm_sqr()).exp(), 0.0)).norm() < 1e-15);
        let (a, a2, b, b2) = (c(0.3, 0.0), c(0.0, 0.7), c(-0.2, 0.0), c(0.1, 0.0));
        let q = n_kernel_quadrature(a, a2, b, b2, 0.8, 40);
        assert!((q - n_kernel(a, a2, b, b2)).norm() <= 1e-8, "{q}");
    }

    #[test]
    fn p_element_examples() {
        let f = factorial_f64;
        for (k, l, m, n) in [(0, 0, 0, 0), (2, 1, 1, 2), (3, 3, 3, 3), (1, 2, 2, 1)] {
            let expect = if k == n && l == m { f(n) * f(m) } else { 0.0 };
            assert!((p_matrix_element(k, l, m, n, 0.0) - expect).abs() < 1e-14);
        }
        assert!((p_matrix_element(0, 0, 0, 0, 0.9) - 1.0 / 0.45f64.cosh()).abs() < 1e-15);
        let o = SingleModeOracle::new(100);
        let (x, tail) = o.p_element(1, 1, 2, 2, 1.0);
        assert!(tail < 1e-12);
        assert!((x - p_matrix_element(1, 1, 2, 2, 1.0)).abs() <= 1e-9);
        assert_eq!(p_matrix_element(1, 1, 2, 1, 1.0), 0.0);
    }

    #[test]
    fn split_m_branch_mismatch() {
        // The k > m branch of the split-at-m form disagrees with the oracle once k exceeds both m and n.
        let o = SingleModeOracle::new(60);
        let (x, _) = o.p_element(2, 1, 0, 1, 1.0);
        let shown = p_matrix_element_split_m(2, 1, 0, 1, 1.0);
        assert!(shown.is_none() || (shown.unwrap() - x).abs() > 1e-3);
        assert!((p_matrix_element(2, 1, 0, 1, 1.0) - x).abs() < 1e-9);
    }

    #[test]
    fn basis_norm_examples() {
        for beta in [0.5, 1.0, 2.0] {
            assert!((boosted_basis_norm(0, 0, beta, 60, 1e-10).value - 1.0).abs() < 1e-10);
        }
        let r = boosted_basis_norm(2, 1, 1.0, 40, 1e-10);
        assert!((r.value - 2.0).abs() <= 1e-8 && r.converged);
        assert_eq!(boosted_basis_norm(3, 2, 0.0, 40, 1e-10).value, 12.0);
    }

    #[test]
    fn branch_sum_at_zero_boost() {
        assert_eq!(parseval_branch_sum(0, 0, 0.0, 0), Some(1.0));
        assert_eq!(parseval_branch_sum(0, 0, 0.0, 40), Some(41.0));
        assert_eq!(parseval_branch_sum(3, 1, 0.5, 40), None);
        let r = parseval_check(0, 0, 1.0, 40, 1e-8);
        assert!((r.parameters["weighted_sum"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_csv() {
        let s = p_grid_csv(1, 2, 0.5, 3);
        assert!(s.starts_with("k,l,p\n0,1,"));
        assert_eq!(s.lines().count(), 5);
    }

    #[test]
    fn coherent_vector_norm() {
        let basis = Basis::new(TruncationSpec::new(20));
        let v = coherent_vector(&basis, [c(0.4, 0.1), c(-0.2, 0.0)], [c(0.0, 0.3), c(0.1, 0.1)]);
        assert!((pairing_norm_sqr(&pairing_weights(&basis), &v) - 1.0).abs() < 1e-12);
    }
}
