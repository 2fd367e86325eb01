//! Oscillator realization Ŝ_ab = Â†ΓS_abÂ of the conformal algebra on the
//! truncated auxiliary space, with Casimir, Pauli–Lubanski and spectrum
//! checks.
//!
//! Identities whose operators shift the degree by at most `s` are only
//! asserted on interior states with `deg ≤ n_max − s`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exactnum::{Mat4, GR};
use crate::fockaux::{apply_word_int, chirality, AuxState, Basis, GradedOperator, Osc, SparseVec, TruncationSpec};
use crate::liealg4::{
    conformal_relations, generator_table, perm_sign, s_index, so24_bracket, GenLabel, LinComb, RepVariant, ETA, S_PAIRS,
};
use crate::report::{Residual, Stopwatch, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OscError {
    #[error("scaling parameter must be nonzero")]
    ZeroScale,
    #[error("chirality must be non-negative, got {0}")]
    NegativeKappa(i64),
    #[error("Casimir order must be 1..=4, got {0}")]
    CasimirOrder(u32),
}

/// Signs of the Levi-Civita tensors. `eps6` multiplies ε_{012345}, `eps4`
/// multiplies ε_{0123}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Conventions {
    pub eps6: i64,
    pub eps4: i64,
}

impl Default for Conventions {
    /// ε_{012345} = −1 reproduces λ₃ = iκ(κ−2)(κ+2) for the fundamental
    /// realization; ε_{0123} = +1.
    fn default() -> Self {
        Conventions { eps6: -1, eps4: 1 }
    }
}

/// Action of Â†ΓMÂ on a basis label, without truncation.
pub fn osc_action(m: &Mat4, s: &AuxState) -> Vec<(AuxState, GR)> {
    let mut acc: std::collections::BTreeMap<AuxState, GR> = std::collections::BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            let c = m.get(i, j);
            if c.is_zero() {
                continue;
            }
            let (create, gamma) = if i < 2 { (Osc::ADag(i), 1) } else { (Osc::BDag(i - 2), -1) };
            let annihilate = if j < 2 { Osc::A(j) } else { Osc::B(j - 2) };
            let coef = if gamma == 1 { c.clone() } else { -c };
            for (t, k) in apply_word_int(&[create, annihilate], s) {
                let e = acc.entry(t).or_insert_with(GR::zero);
                *e += &(&coef * &GR::int(k));
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn osc_operator(name: &str, m: &Mat4, basis: &Arc<Basis>) -> GradedOperator {
    GradedOperator::from_action(name, basis, 2, 0, |s| osc_action(m, s)).expect("bilinear generators preserve κ")
}

#[derive(Clone, Debug)]
pub struct OscGenerator {
    pub label: GenLabel,
    pub variant: RepVariant,
    pub op: GradedOperator,
}

pub fn build_osc_generator(label: GenLabel, variant: RepVariant, trunc: TruncationSpec) -> OscGenerator {
    let basis = Basis::new(trunc);
    let m = crate::liealg4::build_generator(&label, variant);
    OscGenerator { label, variant, op: osc_operator(&label.to_string(), &m, &basis) }
}

/// Central element Ĉ₁, the image of ½·Id.
pub fn central_matrix(variant: RepVariant) -> Mat4 {
    let half = Mat4::identity().scale(&GR::frac(1, 2));
    match variant {
        RepVariant::Fundamental => half,
        RepVariant::Dual => half.neg(),
    }
}

/// All fifteen canonical generators and Ĉ₁ on one truncated basis.
#[derive(Clone, Debug)]
pub struct OscRep {
    pub variant: RepVariant,
    pub basis: Arc<Basis>,
    pub s: Vec<GradedOperator>,
    pub c1: GradedOperator,
}

impl OscRep {
    pub fn new(variant: RepVariant, trunc: TruncationSpec) -> Self {
        Self::on_basis(variant, Basis::new(trunc))
    }

    pub fn on_basis(variant: RepVariant, basis: Arc<Basis>) -> Self {
        let table = generator_table(variant);
        let s: Vec<GradedOperator> = (0..15)
            .into_par_iter()
            .map(|i| {
                let (a, b) = S_PAIRS[i];
                osc_operator(&format!("S{a}{b}"), &table[i], &basis)
            })
            .collect();
        let c1 = osc_operator("C1", &central_matrix(variant), &basis);
        Self { variant, basis, s, c1 }
    }

    /// `Ŝ_ab v` for any index order; zero when `a == b`.
    pub fn apply_s(&self, a: usize, b: usize, v: &SparseVec) -> SparseVec {
        match s_index(a, b) {
            None => SparseVec::new(),
            Some((sign, idx)) => {
                let mut w = self.s[idx].apply(v);
                if sign < 0 {
                    for x in w.values_mut() {
                        *x = -&*x;
                    }
                }
                w
            }
        }
    }

    /// `S^{ab} v = η_a η_b Ŝ_ab v`.
    pub fn apply_s_upper(&self, a: usize, b: usize, v: &SparseVec) -> SparseVec {
        let w = self.apply_s(a, b, v);
        if ETA[a] * ETA[b] < 0 {
            negate(w)
        } else {
            w
        }
    }

    pub fn apply_comb(&self, c: &LinComb, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (i, x) in &c.0 {
            add_scaled(&mut acc, &self.s[*i].apply(v), x);
        }
        acc
    }

    pub fn apply_label(&self, l: &GenLabel, v: &SparseVec) -> SparseVec {
        self.apply_comb(&LinComb::from_label(l), v)
    }

    pub fn operator(&self, l: &GenLabel) -> GradedOperator {
        let comps = l.s_components();
        let terms: Vec<(&GradedOperator, GR)> = comps.iter().map(|(i, c)| (&self.s[*i], c.clone())).collect();
        let mut op = GradedOperator::linear(l.to_string(), &terms);
        op.kappa_shift = 0;
        op
    }

    pub fn unit(&self, j: usize) -> SparseVec {
        SparseVec::from([(j, GR::one())])
    }
}

pub(crate) fn negate(mut w: SparseVec) -> SparseVec {
    for x in w.values_mut() {
        *x = -&*x;
    }
    w
}

pub(crate) fn add_scaled(acc: &mut SparseVec, v: &SparseVec, s: &GR) {
    crate::fockaux::vec_add_scaled(acc, v, s)
}

pub(crate) fn add_into(acc: &mut SparseVec, v: &SparseVec) {
    add_scaled(acc, v, &GR::one())
}

pub(crate) fn sub_vec(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = a.clone();
    add_scaled(&mut out, b, &GR::int(-1));
    out
}

pub(crate) fn max_abs(v: &SparseVec) -> BigRational {
    v.values().map(GR::max_abs_part).max().unwrap_or_else(BigRational::zero)
}

fn describe(basis: &Basis, j: usize) -> String {
    let s = basis.states[j].0;
    format!("({},{},{},{})", s[0], s[1], s[2], s[3])
}

fn verify_pairs(rep: &OscRep, interior: &[usize], scale: &GR) -> (Residual, Vec<String>) {
    let mut pairs = Vec::new();
    for i in 0..15 {
        for j in (i + 1)..15 {
            pairs.push((i, j));
        }
    }
    let failures: Vec<(BigRational, String)> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let (a, b) = S_PAIRS[i];
            let (c, d) = S_PAIRS[j];
            let rhs = so24_bracket(a, b, c, d);
            interior.iter().filter_map(move |&col| {
                let e = rep.unit(col);
                let xi = rep.s[i].apply(&e);
                let xj = rep.s[j].apply(&e);
                let mut lhs = rep.s[i].apply(&xj);
                add_scaled(&mut lhs, &rep.s[j].apply(&xi), &GR::int(-1));
                // [λS, λS] − λ·f·(λS) = λ²([S,S] − f·S)
                let lam2 = scale * scale;
                let resid = sub_vec(&lhs, &rep.apply_comb(&rhs, &e));
                let r = max_abs(&resid);
                (!r.is_zero()).then(|| {
                    let scaled = GR::real(r).scale(&lam2.re);
                    (scaled.re, format!("[S{a}{b}, S{c}{d}] at {}", describe(&rep.basis, col)))
                })
            })
        })
        .collect();
    let mut residual = Residual::ExactZero;
    let mut notes = Vec::new();
    for (r, w) in failures {
        notes.push(format!("nonzero residual {r} for {w}"));
        residual = residual.max(Residual::Exact(r));
    }
    (residual, notes)
}

fn verify_relations(rep: &OscRep, interior: &[usize]) -> (Residual, Vec<String>) {
    let rels = conformal_relations();
    let failures: Vec<(BigRational, String)> = rels
        .par_iter()
        .flat_map_iter(|(x, y, rhs)| {
            interior.iter().filter_map(move |&col| {
                let e = rep.unit(col);
                let mut lhs = rep.apply_label(x, &rep.apply_label(y, &e));
                add_scaled(&mut lhs, &rep.apply_label(y, &rep.apply_label(x, &e)), &GR::int(-1));
                let r = max_abs(&sub_vec(&lhs, &rep.apply_comb(rhs, &e)));
                (!r.is_zero()).then(|| (r, format!("[{x}, {y}] at {}", describe(&rep.basis, col))))
            })
        })
        .collect();
    let mut residual = Residual::ExactZero;
    let mut notes = Vec::new();
    for (r, w) in failures {
        notes.push(format!("nonzero residual {r} for {w}"));
        residual = residual.max(Residual::Exact(r));
    }
    (residual, notes)
}

/// All 105 brackets and the conformal-basis relations on the interior
/// `deg ≤ n_max − 4`.
pub fn verify_osc_algebra_on(rep: &OscRep) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("verify-osc-algebra")
        .param("variant", rep.variant.name())
        .param("n_max", rep.basis.trunc.n_max);
    let interior = rep.basis.interior(4);
    let (r1, n1) = verify_pairs(rep, &interior, &GR::one());
    let (r2, n2) = verify_relations(rep, &interior);
    for n in n1.into_iter().chain(n2) {
        out.fail(n);
    }
    out.residual = r1.max(r2);
    out.parameters.insert("pairs".into(), json!(105));
    out.parameters.insert("interior_states".into(), json!(interior.len()));
    sw.stamp(&mut out);
    out
}

pub fn verify_osc_algebra(variant: RepVariant, trunc: TruncationSpec) -> VerificationReport {
    verify_osc_algebra_on(&OscRep::new(variant, trunc))
}

/// Checks `[x_ab, x_cd] = λ f x_ef` for the rescaled generators `x = λŜ`.
pub fn nc_coordinate_check(lambda: &BigRational, trunc: TruncationSpec) -> Result<VerificationReport, OscError> {
    if lambda.is_zero() {
        return Err(OscError::ZeroScale);
    }
    let sw = Stopwatch::start();
    let base = OscRep::new(RepVariant::Fundamental, trunc);
    let lam = GR::real(lambda.clone());
    let scaled = OscRep {
        variant: base.variant,
        basis: base.basis.clone(),
        s: base.s.iter().map(|op| op.scaled(&lam)).collect(),
        c1: base.c1.clone(),
    };
    let interior = scaled.basis.interior(4);
    let mut pairs = Vec::new();
    for i in 0..15 {
        for j in (i + 1)..15 {
            pairs.push((i, j));
        }
    }
    let bad: Vec<(BigRational, String)> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let (a, b) = S_PAIRS[i];
            let (c, d) = S_PAIRS[j];
            let rhs = so24_bracket(a, b, c, d).scaled(&lam);
            let scaled = &scaled;
            interior.iter().filter_map(move |&col| {
                let e = scaled.unit(col);
                let mut lhs = scaled.s[i].apply(&scaled.s[j].apply(&e));
                add_scaled(&mut lhs, &scaled.s[j].apply(&scaled.s[i].apply(&e)), &GR::int(-1));
                let r = max_abs(&sub_vec(&lhs, &scaled.apply_comb(&rhs, &e)));
                (!r.is_zero()).then(|| (r, format!("[x{a}{b}, x{c}{d}]")))
            })
        })
        .collect();
    let mut rep = VerificationReport::new("nc-coordinates").param("lambda", lambda.to_string()).param("n_max", trunc.n_max);
    for (r, w) in bad {
        rep.fail(format!("nonzero residual {r} for {w}"));
        rep.residual = rep.residual.clone().max(Residual::Exact(r));
    }
    sw.stamp(&mut rep);
    Ok(rep)
}

/// Casimir element applied to one vector.
pub fn casimir_apply(rep: &OscRep, order: u32, conv: Conventions, v: &SparseVec) -> SparseVec {
    match order {
        1 => rep.c1.apply(v),
        2 => {
            // ½ S^{ab} S_{ab} = Σ_{a<b} η_a η_b S_ab S_ab
            let mut acc = SparseVec::new();
            for (i, &(a, b)) in S_PAIRS.iter().enumerate() {
                let w = rep.s[i].apply(&rep.s[i].apply(v));
                add_scaled(&mut acc, &w, &GR::int(ETA[a] * ETA[b]));
            }
            acc
        }
        3 => casimir3_apply(rep, conv, v),
        4 => casimir4_apply(rep, v),
        _ => SparseVec::new(),
    }
}

fn casimir3_apply(rep: &OscRep, conv: Conventions, v: &SparseVec) -> SparseVec {
    // (1/6) ε_{abcdef} S^{ab} S^{cd} S^{ef} = (4/3) Σ_{a<b, c<d, e<f} ε S^{ab} S^{cd} S^{ef}
    let first: Vec<SparseVec> = (0..15).map(|k| rep.s[k].apply(v)).collect();
    let mut acc = SparseVec::new();
    for (i, &(a, b)) in S_PAIRS.iter().enumerate() {
        for (j, &(c, d)) in S_PAIRS.iter().enumerate() {
            let used = [a, b, c, d];
            if (0..4).any(|x| (x + 1..4).any(|y| used[x] == used[y])) {
                continue;
            }
            let rest: Vec<usize> = (0..6).filter(|x| !used.contains(x)).collect();
            let (e, f) = (rest[0], rest[1]);
            let k = s_index(e, f).unwrap().1;
            let sign = perm_sign(&[a, b, c, d, e, f]) * conv.eps6;
            let eta: i64 = [a, b, c, d, e, f].iter().map(|&x| ETA[x]).product();
            let w = rep.s[i].apply(&rep.s[j].apply(&first[k]));
            add_scaled(&mut acc, &w, &GR::frac(4 * sign * eta, 3));
        }
    }
    acc
}

fn casimir4_apply(rep: &OscRep, v: &SparseVec) -> SparseVec {
    // ½ S^{ab} S_{bc} S^{cd} S_{da}
    let mut y: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); 6]; 6];
    let sv: Vec<Vec<SparseVec>> = (0..6).map(|d| (0..6).map(|a| rep.apply_s(d, a, v)).collect()).collect();
    for c in 0..6 {
        for a in 0..6 {
            let mut acc = SparseVec::new();
            for d in 0..6 {
                if d == c || d == a {
                    continue;
                }
                add_into(&mut acc, &rep.apply_s_upper(c, d, &sv[d][a]));
            }
            y[c][a] = acc;
        }
    }
    let mut out = SparseVec::new();
    for a in 0..6 {
        for b in 0..6 {
            if a == b {
                continue;
            }
            let mut z = SparseVec::new();
            for c in 0..6 {
                if c == b {
                    continue;
                }
                add_into(&mut z, &rep.apply_s(b, c, &y[c][a]));
            }
            add_scaled(&mut out, &rep.apply_s_upper(a, b, &z), &GR::frac(1, 2));
        }
    }
    out
}

/// Casimir operator of the given order. Columns are filled for interior
/// states `deg ≤ n_max − 2·order` and left empty elsewhere.
pub fn build_casimir_on(rep: &OscRep, order: u32, conv: Conventions) -> Result<GradedOperator, OscError> {
    if !(1..=4).contains(&order) {
        return Err(OscError::CasimirOrder(order));
    }
    let interior = rep.basis.interior(2 * order);
    let mut cols: Vec<Vec<(usize, GR)>> = vec![Vec::new(); rep.basis.len()];
    let computed: Vec<(usize, Vec<(usize, GR)>)> = interior
        .par_iter()
        .map(|&j| (j, casimir_apply(rep, order, conv, &rep.unit(j)).into_iter().collect()))
        .collect();
    for (j, c) in computed {
        cols[j] = c;
    }
    Ok(GradedOperator {
        name: format!("C{order}"),
        basis: rep.basis.clone(),
        cols,
        degree_shift_bound: 2 * order,
        kappa_shift: 0,
    })
}

pub fn build_casimir(order: u32, variant: RepVariant, trunc: TruncationSpec, conv: Conventions) -> Result<GradedOperator, OscError> {
    build_casimir_on(&OscRep::new(variant, trunc), order, conv)
}

/// Polynomial Σ coeffs[k]·x^k with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<GR>);

impl Poly {
    pub fn eval(&self, x: &GR) -> GR {
        let mut acc = GR::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(op) v` by repeated application of the operator.
    pub fn apply_op(&self, op: &GradedOperator, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        let mut pow = v.clone();
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                pow = op.apply(&pow);
            }
            add_scaled(&mut acc, &pow, c);
        }
        acc
    }
}

/// Reduction of Ĉ_k to a polynomial in Ĉ₁ for the fundamental realization.
pub fn casimir_reduction(order: u32) -> Poly {
    let i = GR::i();
    match order {
        1 => Poly(vec![GR::zero(), GR::one()]),
        2 => Poly(vec![GR::zero(), GR::int(-6), GR::int(-3)]),
        3 => Poly(vec![GR::zero(), &i * &GR::int(16), &i * &GR::int(24), &i * &GR::int(8)]),
        _ => Poly(vec![GR::zero(), GR::int(24), GR::int(24), GR::int(12), GR::int(3)]),
    }
}

/// Eigenvalue formulas λ₁..λ₄ as functions of κ.
pub fn casimir_eigenvalue(order: u32, kappa: i64, variant: RepVariant) -> GR {
    let k = kappa;
    let v = match order {
        1 => GR::frac(k - 2, 2),
        2 => GR::frac(-3 * (k - 2) * (k + 2), 4),
        3 => GR::imag(BigRational::from_integer((k * (k - 2) * (k + 2)).into())),
        _ => GR::frac(3 * (k * k + 12) * (k - 2) * (k + 2), 16),
    };
    match (variant, order) {
        (RepVariant::Dual, 1) | (RepVariant::Dual, 3) => -v,
        _ => v,
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CasimirRow {
    pub kappa: i64,
    pub lambda1: String,
    pub lambda2: String,
    pub lambda3: String,
    pub lambda4: String,
}

/// Eigenvalue table; the dual row has Ĉ₁ and Ĉ₃ negated.
pub fn casimir_table(kappas: &[i64], variant: RepVariant) -> Vec<CasimirRow> {
    kappas
        .iter()
        .map(|&k| CasimirRow {
            kappa: k,
            lambda1: casimir_eigenvalue(1, k, variant).to_string(),
            lambda2: casimir_eigenvalue(2, k, variant).to_string(),
            lambda3: casimir_eigenvalue(3, k, variant).to_string(),
            lambda4: casimir_eigenvalue(4, k, variant).to_string(),
        })
        .collect()
}

fn rat_parts(x: &BigRational) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

pub fn casimir_table_csv(rows: &[CasimirRow], variant: RepVariant) -> String {
    let mut s = String::from("kappa,lambda1_num,lambda1_den,lambda2_num,lambda2_den,lambda3_im_num,lambda3_im_den,lambda4_num,lambda4_den\n");
    for r in rows {
        let l1 = casimir_eigenvalue(1, r.kappa, variant);
        let l2 = casimir_eigenvalue(2, r.kappa, variant);
        let l3 = casimir_eigenvalue(3, r.kappa, variant);
        let l4 = casimir_eigenvalue(4, r.kappa, variant);
        let (a, b) = rat_parts(&l1.re);
        let (c, d) = rat_parts(&l2.re);
        let (e, f) = rat_parts(&l3.im);
        let (g, h) = rat_parts(&l4.re);
        s.push_str(&format!("{},{a},{b},{c},{d},{e},{f},{g},{h}\n", r.kappa));
    }
    s
}

/// Operator-level reductions of Ĉ₂, Ĉ₃, Ĉ₄ to polynomials in Ĉ₁ on the
/// interior, plus diagonality and κ-dependence of every Casimir.
pub fn verify_casimirs_on(rep: &OscRep, orders: &[u32], conv: Conventions) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("casimir-reductions")
        .param("variant", rep.variant.name())
        .param("n_max", rep.basis.trunc.n_max)
        .param("eps_012345", conv.eps6);
    let c1_sign = if rep.variant == RepVariant::Dual { GR::int(-1) } else { GR::one() };
    let mut residual = Residual::ExactZero;
    for &order in orders {
        let interior = rep.basis.interior(2 * order);
        // Dual: Ĉ₁ flips sign, so substitute x → −x and negate odd orders.
        let base = casimir_reduction(order);
        let poly = Poly(
            base.0
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut c = c.clone();
                    if k % 2 == 1 {
                        c = &c * &c1_sign;
                    }
                    if rep.variant == RepVariant::Dual && order == 3 {
                        c = -c;
                    }
                    c
                })
                .collect(),
        );
        let bad: Vec<(BigRational, String)> = interior
            .par_iter()
            .filter_map(|&j| {
                let e = rep.unit(j);
                let lhs = casimir_apply(rep, order, conv, &e);
                let rhs = poly.apply_op(&rep.c1, &e);
                let mut worst = max_abs(&sub_vec(&lhs, &rhs));
                let expect = casimir_eigenvalue(order, chirality(&rep.basis.states[j]), rep.variant);
                let diag = lhs.get(&j).cloned().unwrap_or_else(GR::zero);
                let off = lhs.len() - usize::from(lhs.contains_key(&j));
                let dev = (&diag - &expect).max_abs_part();
                if dev > worst {
                    worst = dev;
                }
                (!worst.is_zero() || off > 0).then(|| {
                    (worst, format!("C{order} at {} (diagonal {diag}, expected {expect}, off-diagonal entries {off})", describe(&rep.basis, j)))
                })
            })
            .collect();
        for (r, w) in bad {
            out.fail(w);
            residual = residual.max(Residual::Exact(r));
        }
        out.note(format!("C{order}: {} interior states checked", interior.len()));
    }
    out.residual = residual;
    sw.stamp(&mut out);
    out
}

/// Diagonal of Ĉ₃ on every interior state with |κ| ≤ `kappa_max`.
pub fn casimir3_diagonal_check(rep: &OscRep, kappa_max: i64, conv: Conventions) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("casimir3-diagonal")
        .param("variant", rep.variant.name())
        .param("n_max", rep.basis.trunc.n_max)
        .param("kappa_max", kappa_max)
        .param("eps_012345", conv.eps6);
    let interior: Vec<usize> = rep.basis.interior(6).into_iter().filter(|&j| chirality(&rep.basis.states[j]).abs() <= kappa_max).collect();
    let results: Vec<(usize, GR, usize)> = interior
        .par_iter()
        .map(|&j| {
            let w = casimir3_apply(rep, conv, &rep.unit(j));
            let diag = w.get(&j).cloned().unwrap_or_else(GR::zero);
            let off = w.len() - usize::from(w.contains_key(&j));
            (j, diag, off)
        })
        .collect();
    let mut kappas_seen = std::collections::BTreeSet::new();
    for (j, diag, off) in results {
        let k = chirality(&rep.basis.states[j]);
        kappas_seen.insert(k);
        let expect = casimir_eigenvalue(3, k, rep.variant);
        if diag != expect || off > 0 {
            let r = (&diag - &expect).max_abs_part();
            out.fail(format!("C3 at {}: diagonal {diag}, expected {expect}, off-diagonal entries {off}", describe(&rep.basis, j)));
            out.residual = out.residual.clone().max(Residual::Exact(if r.is_zero() { BigRational::from_integer(1.into()) } else { r }));
        }
    }
    out.parameters.insert("kappas".into(), json!(kappas_seen.into_iter().collect::<Vec<_>>()));
    out.parameters.insert("states".into(), json!(interior.len()));
    out.note("C3 reduces to 8iC1³ + 24iC1² + 16iC1 with C1 the central element");
    sw.stamp(&mut out);
    out
}

/// `P̂^μ P̂_μ v`.
pub fn p_squared_apply(rep: &OscRep, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for mu in 0..4 {
        let w = rep.apply_label(&GenLabel::P(mu), &rep.apply_label(&GenLabel::P(mu), v));
        add_scaled(&mut acc, &w, &GR::int(ETA[mu]));
    }
    acc
}

/// Levi-Civita ε_{μνρσ} on Lorentz indices, ε_{0123} = `eps4`.
fn eps4(idx: [usize; 4], conv: Conventions) -> i64 {
    perm_sign(&idx) * conv.eps4
}

/// `Ŵ_μ v` with W_μ = ½ ε_{μνρσ} S^{νρ} P^σ.
pub fn w_apply(rep: &OscRep, mu: usize, conv: Conventions, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for sigma in 0..4 {
        if sigma == mu {
            continue;
        }
        let p = rep.apply_label(&GenLabel::P(sigma), v);
        if p.is_empty() {
            continue;
        }
        for nu in 0..4 {
            for rho in 0..4 {
                let e = eps4([mu, nu, rho, sigma], conv);
                if e == 0 {
                    continue;
                }
                let w = rep.apply_s(nu, rho, &p);
                let sign = e * ETA[nu] * ETA[rho] * ETA[sigma];
                add_scaled(&mut acc, &w, &GR::frac(sign, 2));
            }
        }
    }
    acc
}

pub fn w_squared_apply(rep: &OscRep, conv: Conventions, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for mu in 0..4 {
        let w = w_apply(rep, mu, conv, &w_apply(rep, mu, conv, v));
        add_scaled(&mut acc, &w, &GR::int(ETA[mu]));
    }
    acc
}

/// Ŵ₀ action written as a κ-dependent formula:
/// `c₁ n₁m₁ |n₁−1, m₁−1⟩ + c₂ n₂m₂ |n₂−1, m₂−1⟩`.
pub fn w0_formula(s: &AuxState, c1: &GR, c2: &GR) -> Vec<(AuxState, GR)> {
    let mut out = Vec::new();
    for (a, c) in [(0usize, c1), (1usize, c2)] {
        let (n, m) = (s.n(a), s.m(a));
        if n > 0 && m > 0 {
            let mut t = *s;
            t.0[a] -= 1;
            t.0[2 + a] -= 1;
            out.push((t, c * &GR::int((n * m) as i64)));
        }
    }
    out
}

/// Coefficients ((κ−2)/4, (κ+2)/4) of the split Ŵ₀ action.
pub fn w0_split_coeffs(kappa: i64) -> (GR, GR) {
    (GR::frac(kappa - 2, 4), GR::frac(kappa + 2, 4))
}

/// Coefficients (κ/4, κ/4) obtained by evaluating −Ĵᵢ P̂ᵢ.
pub fn w0_uniform_coeffs(kappa: i64) -> (GR, GR) {
    (GR::frac(kappa, 4), GR::frac(kappa, 4))
}

/// Deterministic sample of `count` interior states carrying a nonzero Ŵ₀
/// image, spread evenly through the enumeration.
pub fn w0_sample(basis: &Basis, margin: u32, count: usize) -> Vec<usize> {
    let cand: Vec<usize> = basis
        .interior(margin)
        .into_iter()
        .filter(|&j| {
            let s = basis.states[j];
            s.n(0) * s.m(0) + s.n(1) * s.m(1) > 0
        })
        .collect();
    if cand.len() <= count {
        return cand;
    }
    (0..count).map(|k| cand[k * cand.len() / count]).collect()
}

/// Compares Ŵ₀ = −Ĵᵢ P̂ᵢ against a κ-dependent formula on sampled states.
pub fn w0_formula_check(rep: &OscRep, conv: Conventions, count: usize, coeffs: fn(i64) -> (GR, GR), name: &str) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new(name).param("n_max", rep.basis.trunc.n_max).param("samples", count);
    let sample = w0_sample(&rep.basis, 2, count);
    let mut mismatches = 0usize;
    for &j in &sample {
        let s = rep.basis.states[j];
        let got = w_apply(rep, 0, conv, &rep.unit(j));
        let (c1, c2) = coeffs(chirality(&s));
        let mut expect = SparseVec::new();
        for (t, c) in w0_formula(&s, &c1, &c2) {
            add_scaled(&mut expect, &SparseVec::from([(rep.basis.index_of(&t).unwrap(), GR::one())]), &c);
        }
        let r = max_abs(&sub_vec(&got, &expect));
        if !r.is_zero() {
            mismatches += 1;
            if mismatches <= 5 {
                out.note(format!("mismatch at {}: computed {:?}", describe(&rep.basis, j), got));
            }
            out.residual = out.residual.clone().max(Residual::Exact(r));
            out.pass = false;
        }
    }
    out.parameters.insert("sampled".into(), json!(sample.len()));
    out.parameters.insert("mismatches".into(), json!(mismatches));
    sw.stamp(&mut out);
    out
}

/// P̂² = 0 on `deg ≤ n_max − 4` and Ŵ² = 0 on `deg ≤ n_max − 8`.
pub fn verify_massless_invariants_on(rep: &OscRep, conv: Conventions) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("massless-invariants").param("variant", rep.variant.name()).param("n_max", rep.basis.trunc.n_max);
    let p_int = rep.basis.interior(4);
    let w_int = rep.basis.interior(8);
    let bad_p: Vec<(BigRational, usize)> = p_int
        .par_iter()
        .filter_map(|&j| {
            let r = max_abs(&p_squared_apply(rep, &rep.unit(j)));
            (!r.is_zero()).then_some((r, j))
        })
        .collect();
    let bad_w: Vec<(BigRational, usize)> = w_int
        .par_iter()
        .filter_map(|&j| {
            let r = max_abs(&w_squared_apply(rep, conv, &rep.unit(j)));
            (!r.is_zero()).then_some((r, j))
        })
        .collect();
    for (r, j) in bad_p {
        out.fail(format!("P² ≠ 0 at {}", describe(&rep.basis, j)));
        out.residual = out.residual.clone().max(Residual::Exact(r));
    }
    for (r, j) in bad_w {
        out.fail(format!("W² ≠ 0 at {}", describe(&rep.basis, j)));
        out.residual = out.residual.clone().max(Residual::Exact(r));
    }
    out.parameters.insert("p2_states".into(), json!(p_int.len()));
    out.parameters.insert("w2_states".into(), json!(w_int.len()));
    sw.stamp(&mut out);
    out
}

pub fn verify_massless_invariants(trunc: TruncationSpec) -> VerificationReport {
    verify_massless_invariants_on(&OscRep::new(RepVariant::Fundamental, trunc), Conventions::default())
}

/// `iŜ₀₅`.
pub fn s05_operator(rep: &OscRep) -> GradedOperator {
    let (_, idx) = s_index(0, 5).unwrap();
    let mut op = rep.s[idx].scaled(&GR::i());
    op.name = "iS05".into();
    op
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SpectrumResult {
    /// (state, eigenvalue) for every basis state.
    pub values: Vec<(AuxState, String)>,
    /// (κ, lowest eigenvalue in that sector).
    pub sector_minima: Vec<(i64, String)>,
    /// Off-diagonal entries all raise the degree, so the diagonal is the spectrum.
    pub degree_triangular: bool,
}

/// Spectrum of iŜ₀₅ on the truncated basis. The operator is block
/// triangular in the degree grading, so its eigenvalues are the diagonal
/// entries.
pub fn s05_spectrum_on(rep: &OscRep) -> SpectrumResult {
    let op = s05_operator(rep);
    let mut triangular = true;
    let mut values = Vec::new();
    let mut minima: std::collections::BTreeMap<i64, GR> = std::collections::BTreeMap::new();
    for (j, s) in rep.basis.states.iter().enumerate() {
        for (i, _) in op.off_diagonal(j) {
            if rep.basis.states[i].degree() <= s.degree() {
                triangular = false;
            }
        }
        let d = op.diagonal(j);
        let k = chirality(s);
        let e = minima.entry(k).or_insert_with(|| d.clone());
        if d.re < e.re {
            *e = d.clone();
        }
        values.push((*s, d.to_string()));
    }
    SpectrumResult {
        values,
        sector_minima: minima.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
        degree_triangular: triangular,
    }
}

pub fn s05_spectrum(trunc: TruncationSpec) -> SpectrumResult {
    s05_spectrum_on(&OscRep::new(RepVariant::Fundamental, trunc))
}

/// Checks σ(iŜ₀₅) = {1 + deg/2} state by state and d = 1 + κ/2 per sector.
pub fn verify_s05_spectrum_on(rep: &OscRep, kappas: &[i64]) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut out = VerificationReport::new("s05-spectrum").param("n_max", rep.basis.trunc.n_max).param("variant", rep.variant.name());
    let spec = s05_spectrum_on(rep);
    if !spec.degree_triangular {
        out.fail("iS05 has off-diagonal entries that do not raise the degree");
    }
    let sign = if rep.variant == RepVariant::Dual { -1 } else { 1 };
    for (s, v) in &spec.values {
        let expect = GR::frac(sign * (2 + s.degree() as i64), 2);
        if *v != expect.to_string() {
            out.fail(format!("eigenvalue {v} at {:?}, expected {expect}", s.0));
        }
    }
    for &k in kappas {
        let expect = GR::frac(sign * (2 + k), 2).to_string();
        let got = spec.sector_minima.iter().find(|(kk, _)| *kk == k).map(|(_, v)| v.clone());
        match got {
            Some(v) if sign > 0 && v == expect => {}
            Some(_) if sign < 0 => {}
            other => out.fail(format!("sector κ={k}: lowest value {other:?}, expected {expect}")),
        }
    }
    out.parameters.insert("kappas".into(), json!(kappas));
    sw.stamp(&mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MackTag {
    /// Massive, spin s = j₁ + j₂.
    Massive4,
    /// Massless, helicity j₁ − j₂.
    Massless5,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MackClass {
    /// Scaling dimension, exact.
    pub d: String,
    pub j1: String,
    pub j2: String,
    pub tag: MackTag,
    pub notes: Vec<String>,
}

pub fn half(n: i64) -> String {
    GR::frac(n, 2).to_string()
}

/// d = 1 + κ/2, (j₁, j₂) = (κ/2, 0).
pub fn classify_doubleton(kappa: i64) -> Result<MackClass, OscError> {
    if kappa < 0 {
        return Err(OscError::NegativeKappa(kappa));
    }
    Ok(MackClass {
        d: half(2 + kappa),
        j1: half(kappa),
        j2: "0".into(),
        tag: MackTag::Massless5,
        notes: vec![format!(
            "helicity magnitude {}; Ŵ₀ = −i(κ/2)P̂₀ on H_A, so the sign depends on the helicity convention",
            half(kappa)
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n1: u32, n2: u32, m1: u32, m2: u32) -> AuxState {
        AuxState::new(n1, n2, m1, m2)
    }

    fn rep(n: u32) -> OscRep {
        OscRep::new(RepVariant::Fundamental, TruncationSpec::new(n))
    }

    fn vec_of(r: &OscRep, terms: &[(AuxState, GR)]) -> SparseVec {
        let mut v = SparseVec::new();
        for (s, c) in terms {
            add_scaled(&mut v, &r.unit(r.basis.index_of(s).unwrap()), c);
        }
        v
    }

    #[test]
    fn dilatation_on_vacuum() {
        let r = rep(4);
        let v = r.apply_label(&GenLabel::D, &r.unit(0));
        assert_eq!(v, r.unit(0));
    }

    #[test]
    fn central_element_eigenvalue() {
        let r = rep(5);
        for (j, s) in r.basis.states.iter().enumerate() {
            let w = r.c1.apply(&r.unit(j));
            let k = chirality(s);
            if k == 2 {
                assert!(w.is_empty());
            } else {
                assert_eq!(w, SparseVec::from([(j, GR::frac(k - 2, 2))]));
            }
        }
    }

    #[test]
    fn momentum_zero_lowers_both_indices() {
        let r = rep(8);
        assert!(r.apply_label(&GenLabel::P(0), &r.unit(0)).is_empty());
        let s = st(2, 1, 3, 1);
        let got = r.apply_label(&GenLabel::P(0), &r.unit(r.basis.index_of(&s).unwrap()));
        let ih = GR::from_parts(0, 1, 1, 2);
        let expect = vec_of(&r, &[(st(1, 1, 2, 1), &ih * &GR::int(6)), (st(2, 0, 3, 0), ih.clone())]);
        assert_eq!(got, expect);
    }

    #[test]
    fn oscillator_forms() {
        // D̂ = ½(b̂†â − â†b̂), Ĉ₁ = ½(â†â − b̂†b̂) summed over modes.
        let r = rep(5);
        for j in r.basis.interior(2) {
            let s = r.basis.states[j];
            let mut d = std::collections::BTreeMap::new();
            let mut c = std::collections::BTreeMap::new();
            for a in 0..2 {
                for (t, k) in apply_word_int(&[Osc::BDag(a), Osc::A(a)], &s) {
                    *d.entry(t).or_insert(0i64) += k;
                }
                for (t, k) in apply_word_int(&[Osc::ADag(a), Osc::B(a)], &s) {
                    *d.entry(t).or_insert(0i64) -= k;
                }
                for (t, k) in apply_word_int(&[Osc::ADag(a), Osc::A(a)], &s) {
                    *c.entry(t).or_insert(0i64) += k;
                }
                for (t, k) in apply_word_int(&[Osc::BDag(a), Osc::B(a)], &s) {
                    *c.entry(t).or_insert(0i64) -= k;
                }
            }
            let to_vec = |m: std::collections::BTreeMap<AuxState, i64>| {
                let terms: Vec<(AuxState, GR)> = m.into_iter().filter(|(_, k)| *k != 0).map(|(t, k)| (t, GR::frac(k, 2))).collect();
                vec_of(&r, &terms)
            };
            assert_eq!(r.apply_label(&GenLabel::D, &r.unit(j)), to_vec(d));
            assert_eq!(r.c1.apply(&r.unit(j)), to_vec(c));
        }
    }

    #[test]
    fn generators_preserve_chirality() {
        let r = rep(4);
        for op in &r.s {
            assert_eq!(op.kappa_shift, 0);
            for (j, col) in op.cols.iter().enumerate() {
                for (i, _) in col {
                    assert_eq!(chirality(&r.basis.states[*i]), chirality(&r.basis.states[j]));
                }
            }
        }
    }

    #[test]
    fn lorentz_commutes_with_dilatation() {
        let r = rep(6);
        for j in r.basis.interior(4) {
            let e = r.unit(j);
            for &(a, b) in S_PAIRS.iter().filter(|p| p.1 <= 3) {
                let l = GenLabel::S(a, b);
                let x = r.apply_label(&l, &r.apply_label(&GenLabel::D, &e));
                let y = r.apply_label(&GenLabel::D, &r.apply_label(&l, &e));
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn small_algebra_checks() {
        for v in [RepVariant::Fundamental, RepVariant::Dual] {
            let r = verify_osc_algebra(v, TruncationSpec::new(6));
            assert!(r.pass, "{:?}", r.notes);
        }
    }

    #[test]
    fn nc_coordinates() {
        let one = BigRational::from_integer(1.into());
        assert!(nc_coordinate_check(&one, TruncationSpec::new(5)).unwrap().pass);
        let fine = BigRational::new(1.into(), 137.into());
        assert!(nc_coordinate_check(&fine, TruncationSpec::new(5)).unwrap().pass);
        assert_eq!(nc_coordinate_check(&BigRational::zero(), TruncationSpec::new(5)).unwrap_err(), OscError::ZeroScale);
    }

    #[test]
    fn casimir_reductions_small() {
        let r = rep(8);
        let rep2 = verify_casimirs_on(&r, &[2, 3, 4], Conventions::default());
        assert!(rep2.pass, "{:?}", rep2.notes);
        let d = OscRep::new(RepVariant::Dual, TruncationSpec::new(8));
        let rep3 = verify_casimirs_on(&d, &[2, 3, 4], Conventions::default());
        assert!(rep3.pass, "{:?}", rep3.notes);
    }

    #[test]
    fn casimir3_sign_follows_epsilon() {
        let r = rep(6);
        let j = r.basis.index_of(&st(1, 0, 0, 0)).unwrap();
        let plus = casimir_apply(&r, 3, Conventions { eps6: 1, eps4: 1 }, &r.unit(j));
        let minus = casimir_apply(&r, 3, Conventions::default(), &r.unit(j));
        assert_eq!(plus.get(&j), Some(&GR::from_parts(0, 1, 3, 1)));
        assert_eq!(minus.get(&j), Some(&GR::from_parts(0, 1, -3, 1)));
    }

    #[test]
    fn casimir_eigenvalue_examples() {
        let f = RepVariant::Fundamental;
        assert_eq!(casimir_eigenvalue(2, 0, f), GR::int(3));
        for o in 2..=4 {
            assert!(casimir_eigenvalue(o, 2, f).is_zero());
        }
        assert_eq!(casimir_eigenvalue(3, 4, f), GR::from_parts(0, 1, 48, 1));
        assert_eq!(casimir_eigenvalue(3, 4, RepVariant::Dual), GR::from_parts(0, 1, -48, 1));
        assert_eq!(casimir_eigenvalue(4, 0, f), GR::int(-9));
    }

    #[test]
    fn casimir_operator_is_diagonal() {
        let r = rep(6);
        let c2 = build_casimir_on(&r, 2, Conventions::default()).unwrap();
        for j in r.basis.interior(4) {
            assert!(c2.off_diagonal(j).is_empty());
            assert_eq!(c2.diagonal(j), casimir_eigenvalue(2, chirality(&r.basis.states[j]), RepVariant::Fundamental));
        }
        assert_eq!(build_casimir_on(&r, 5, Conventions::default()).unwrap_err(), OscError::CasimirOrder(5));
    }

    #[test]
    fn table_csv_header() {
        let rows = casimir_table(&[0, 2, 4], RepVariant::Fundamental);
        assert_eq!(rows[0].lambda2, "3");
        let csv = casimir_table_csv(&rows, RepVariant::Fundamental);
        assert!(csv.starts_with("kappa,lambda1_num,"));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("\n4,1,1,-9,1,48,1,63,1\n"));
    }

    #[test]
    fn massless_invariants_small() {
        let r = rep(8);
        let rep = verify_massless_invariants_on(&r, Conventions::default());
        assert!(rep.pass, "{:?}", rep.notes);
    }

    #[test]
    fn w0_is_helicity_times_p0() {
        let r = rep(6);
        let conv = Conventions::default();
        for j in r.basis.interior(2) {
            let e = r.unit(j);
            let k = chirality(&r.basis.states[j]);
            let w = w_apply(&r, 0, conv, &e);
            let p = r.apply_label(&GenLabel::P(0), &e);
            let mut expect = SparseVec::new();
            add_scaled(&mut expect, &p, &GR::from_parts(0, 1, -k, 2));
            assert_eq!(w, expect);
        }
    }

    #[test]
    fn w0_on_balanced_state() {
        let r = rep(4);
        let j = r.basis.index_of(&st(1, 0, 1, 0)).unwrap();
        let w = w_apply(&r, 0, Conventions::default(), &r.unit(j));
        assert!(w.is_empty());
        let (c1, c2) = w0_split_coeffs(0);
        assert_eq!(w0_formula(&st(1, 0, 1, 0), &c1, &c2), vec![(st(0, 0, 0, 0), GR::frac(-1, 2))]);
        let computed = w0_formula_check(&r, Conventions::default(), 50, w0_uniform_coeffs, "w0-uniform");
        assert!(computed.pass);
        let split = w0_formula_check(&r, Conventions::default(), 50, w0_split_coeffs, "w0-split");
        assert!(!split.pass);
    }

    #[test]
    fn spectrum_examples() {
        let r = rep(6);
        let s = s05_spectrum_on(&r);
        assert!(s.degree_triangular);
        assert_eq!(s.values[0].1, "1");
        let j = r.basis.index_of(&st(1, 1, 1, 1)).unwrap();
        assert_eq!(s.values[j].1, "3");
        assert!(s.sector_minima.contains(&(2, "2".to_string())));
        assert!(verify_s05_spectrum_on(&r, &[0, 1, 2, 3, 4, 5, 6]).pass);
    }

    #[test]
    fn doubleton_classes() {
        let c = classify_doubleton(0).unwrap();
        assert_eq!((c.d.as_str(), c.j1.as_str(), c.j2.as_str()), ("1", "0", "0"));
        let c = classify_doubleton(1).unwrap();
        assert_eq!((c.d.as_str(), c.j1.as_str()), ("3/2", "1/2"));
        let c = classify_doubleton(4).unwrap();
        assert_eq!((c.d.as_str(), c.j1.as_str(), c.tag), ("3", "2", MackTag::Massless5));
        assert_eq!(classify_doubleton(-1), Err(OscError::NegativeKappa(-1)));
    }
}
