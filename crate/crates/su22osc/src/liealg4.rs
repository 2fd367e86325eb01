//! The so(2,4) ≅ su(2,2) generators as 4×4 matrices built from Dirac-basis
//! γ-matrices, together with exact checks of the commutation relations.
//!
//! Commutators carry no factor of i (mathematical convention). The metric is
//! η = diag(+,−,−,−,−,+) with indices 0..=5; 0..=3 are the Lorentz indices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exactnum::{mat_commutator, Mat4, GR};
use crate::report::{Residual, Stopwatch, VerificationReport};

pub const ETA: [i64; 6] = [1, -1, -1, -1, -1, 1];

/// Canonical ordered pairs (a, b), a < b, indexing the 15 generators.
pub const S_PAIRS: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("S({0},{0}) vanishes identically")]
    DiagonalIndex(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
}

/// Canonical position of S(a,b) in [`S_PAIRS`] with the sign picked up by
/// reordering. `None` when `a == b`.
pub fn s_index(a: usize, b: usize) -> Option<(i64, usize)> {
    if a == b || a > 5 || b > 5 {
        return None;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
    let idx = S_PAIRS.iter().position(|&p| p == (lo, hi)).unwrap();
    Some((sign, idx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum RepVariant {
    Fundamental,
    Dual,
}

impl RepVariant {
    pub fn name(self) -> &'static str {
        match self {
            RepVariant::Fundamental => "fundamental",
            RepVariant::Dual => "dual",
        }
    }
}

/// Generator label. `S(a, b)` always has `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenLabel {
    S(usize, usize),
    P(usize),
    K(usize),
    D,
}

impl GenLabel {
    /// Builds `S(a,b)`, returning the sign needed when `a > b`.
    pub fn s(a: usize, b: usize) -> Result<(i64, GenLabel), LieError> {
        if a > 5 {
            return Err(LieError::IndexOutOfRange(a));
        }
        if b > 5 {
            return Err(LieError::IndexOutOfRange(b));
        }
        if a == b {
            return Err(LieError::DiagonalIndex(a));
        }
        Ok(if a < b { (1, GenLabel::S(a, b)) } else { (-1, GenLabel::S(b, a)) })
    }

    /// Expansion in the canonical S basis: P = S(μ,5) + S(μ,4),
    /// K = S(μ,5) − S(μ,4), D = S(4,5).
    pub fn s_components(&self) -> Vec<(usize, GR)> {
        match *self {
            GenLabel::S(a, b) => {
                let (sign, idx) = s_index(a, b).expect("valid S label");
                vec![(idx, GR::int(sign))]
            }
            GenLabel::P(mu) => vec![(s_index(mu, 5).unwrap().1, GR::one()), (s_index(mu, 4).unwrap().1, GR::one())],
            GenLabel::K(mu) => vec![(s_index(mu, 5).unwrap().1, GR::one()), (s_index(mu, 4).unwrap().1, GR::int(-1))],
            GenLabel::D => vec![(s_index(4, 5).unwrap().1, GR::one())],
        }
    }

    pub fn all_s() -> Vec<GenLabel> {
        S_PAIRS.iter().map(|&(a, b)| GenLabel::S(a, b)).collect()
    }

    /// The conformal basis: S(μ,ν) for μ<ν≤3, then P, K, D.
    pub fn conformal_basis() -> Vec<GenLabel> {
        let mut v: Vec<GenLabel> = S_PAIRS.iter().filter(|p| p.1 <= 3).map(|&(a, b)| GenLabel::S(a, b)).collect();
        v.extend((0..4).map(GenLabel::P));
        v.extend((0..4).map(GenLabel::K));
        v.push(GenLabel::D);
        v
    }
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenLabel::S(a, b) => write!(f, "S{a}{b}"),
            GenLabel::P(m) => write!(f, "P{m}"),
            GenLabel::K(m) => write!(f, "K{m}"),
            GenLabel::D => write!(f, "D"),
        }
    }
}

/// Linear combination of the 15 canonical generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb(pub BTreeMap<usize, GR>);

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_label(l: &GenLabel) -> Self {
        let mut c = Self::zero();
        for (i, x) in l.s_components() {
            c.add_term(i, &x);
        }
        c
    }

    pub fn add_term(&mut self, idx: usize, coeff: &GR) {
        if coeff.is_zero() {
            return;
        }
        let e = self.0.entry(idx).or_insert_with(GR::zero);
        *e += coeff;
        if e.is_zero() {
            self.0.remove(&idx);
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, s: &GR) {
        for (i, x) in &other.0 {
            self.add_term(*i, &(x * s));
        }
    }

    pub fn scaled(&self, s: &GR) -> Self {
        let mut c = Self::zero();
        c.add_scaled(self, s);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Rewrites the combination in the S(μ,ν), P, K, D basis.
    pub fn to_conformal(&self) -> Vec<(GenLabel, GR)> {
        let half = GR::frac(1, 2);
        let mut out: BTreeMap<GenLabel, GR> = BTreeMap::new();
        let mut push = |l: GenLabel, x: GR| {
            let e = out.entry(l).or_insert_with(GR::zero);
            *e += &x;
        };
        for (&i, x) in &self.0 {
            let (a, b) = S_PAIRS[i];
            match (a, b) {
                (4, 5) => push(GenLabel::D, x.clone()),
                (mu, 5) => {
                    push(GenLabel::P(mu), x * &half);
                    push(GenLabel::K(mu), x * &half);
                }
                (mu, 4) => {
                    push(GenLabel::P(mu), x * &half);
                    push(GenLabel::K(mu), -(x * &half));
                }
                _ => push(GenLabel::S(a, b), x.clone()),
            }
        }
        out.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.to_conformal();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(|(l, x)| format!("({x})·{l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `[S_ab, S_cd] = η_ac S_bd − η_ad S_bc − η_bc S_ad + η_bd S_ac`, for any
/// index order.
pub fn so24_bracket(a: usize, b: usize, c: usize, d: usize) -> LinComb {
    let mut out = LinComb::zero();
    let mut term = |coef: i64, p: usize, q: usize| {
        if coef == 0 {
            return;
        }
        if let Some((sign, idx)) = s_index(p, q) {
            out.add_term(idx, &GR::int(coef * sign));
        }
    };
    term(if a == c { ETA[a] } else { 0 }, b, d);
    term(if a == d { -ETA[a] } else { 0 }, b, c);
    term(if b == c { -ETA[b] } else { 0 }, a, d);
    term(if b == d { ETA[b] } else { 0 }, a, c);
    out
}

/// Abstract commutator of two labelled generators as a canonical combination.
pub fn structure_expand(x: &GenLabel, y: &GenLabel) -> LinComb {
    let mut out = LinComb::zero();
    for (i, ci) in x.s_components() {
        for (j, cj) in y.s_components() {
            let (a, b) = S_PAIRS[i];
            let (c, d) = S_PAIRS[j];
            out.add_scaled(&so24_bracket(a, b, c, d), &(&ci * &cj));
        }
    }
    out
}

/// γ⁰, γ¹, γ², γ³, γ⁵ (upper indices) and their lowered counterparts.
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub upper: [Mat4; 5],
    pub lower: [Mat4; 5],
}

fn pauli(k: usize) -> [[GR; 2]; 2] {
    let z = GR::zero;
    match k {
        0 => [[GR::one(), z()], [z(), GR::one()]],
        1 => [[z(), GR::one()], [GR::one(), z()]],
        2 => [[z(), -GR::i()], [GR::i(), z()]],
        3 => [[GR::one(), z()], [z(), GR::int(-1)]],
        _ => panic!("pauli index {k}"),
    }
}

fn neg2(m: &[[GR; 2]; 2]) -> [[GR; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| -&m[r][c]))
}

fn zero2() -> [[GR; 2]; 2] {
    std::array::from_fn(|_| std::array::from_fn(|_| GR::zero()))
}

/// Dirac basis: γ⁰ = diag(1, −1), γⁱ = [[0, σᵢ], [−σᵢ, 0]] in 2×2 blocks,
/// and γ⁵ = iγ⁰γ¹γ²γ³.
pub fn build_gamma() -> GammaSet {
    let one = pauli(0);
    let g0 = Mat4::from_blocks(&one, &zero2(), &zero2(), &neg2(&one));
    let gi: Vec<Mat4> = (1..=3)
        .map(|k| Mat4::from_blocks(&zero2(), &pauli(k), &neg2(&pauli(k)), &zero2()))
        .collect();
    let g5 = g0.mul(&gi[0]).mul(&gi[1]).mul(&gi[2]).scale(&GR::i());
    let upper = [g0.clone(), gi[0].clone(), gi[1].clone(), gi[2].clone(), g5.clone()];
    let lower = [g0, gi[0].neg(), gi[1].neg(), gi[2].neg(), g5.neg()];
    GammaSet { upper, lower }
}

/// Fundamental S(a,b), a < b, from the lowered γ-matrices:
/// S_μν = −¼[γ_μ, γ_ν], S_μ4 = (i/2)γ_5γ_μ, S_μ5 = −(i/2)γ_μ, S_45 = ½γ_5.
fn fundamental_s(g: &GammaSet, a: usize, b: usize) -> Mat4 {
    let lo = &g.lower;
    match (a, b) {
        (4, 5) => lo[4].scale(&GR::frac(1, 2)),
        (mu, 4) => lo[4].mul(&lo[mu]).scale(&GR::from_parts(0, 1, 1, 2)),
        (mu, 5) => lo[mu].scale(&GR::from_parts(0, 1, -1, 2)),
        (mu, nu) => mat_commutator(&lo[mu], &lo[nu]).scale(&GR::frac(-1, 4)),
    }
}

fn table(variant: RepVariant) -> &'static [Mat4; 15] {
    static FUND: OnceLock<[Mat4; 15]> = OnceLock::new();
    static DUAL: OnceLock<[Mat4; 15]> = OnceLock::new();
    let fund = FUND.get_or_init(|| {
        let g = build_gamma();
        std::array::from_fn(|i| fundamental_s(&g, S_PAIRS[i].0, S_PAIRS[i].1))
    });
    match variant {
        RepVariant::Fundamental => fund,
        RepVariant::Dual => DUAL.get_or_init(|| std::array::from_fn(|i| fund[i].transpose().neg())),
    }
}

/// The 15 canonical generator matrices in [`S_PAIRS`] order.
pub fn generator_table(variant: RepVariant) -> &'static [Mat4; 15] {
    table(variant)
}

pub fn build_generator(label: &GenLabel, variant: RepVariant) -> Mat4 {
    lincomb_matrix(&LinComb::from_label(label), variant)
}

pub fn lincomb_matrix(c: &LinComb, variant: RepVariant) -> Mat4 {
    lincomb_matrix_with(c, table(variant))
}

pub fn lincomb_matrix_with(c: &LinComb, gens: &[Mat4; 15]) -> Mat4 {
    let mut m = Mat4::zero();
    for (&i, x) in &c.0 {
        m = m.add(&gens[i].scale(x));
    }
    m
}

/// Multiplies by i to pass to the physical convention `[A, B] = iC`.
pub fn to_physical(m: &Mat4) -> Mat4 {
    m.scale(&GR::i())
}

/// Relations among P, K, D and the Lorentz generators:
/// `[S_μν, D] = 0`, `[P_μ, D] = P_μ`, `[K_μ, D] = −K_μ`, `[P_μ, P_ν] = 0`,
/// `[K_μ, K_ν] = 0`, `[K_μ, P_ν] = 2(S_μν − η_μν D)`.
pub fn conformal_relations() -> Vec<(GenLabel, GenLabel, LinComb)> {
    let mut out = Vec::new();
    let d = LinComb::from_label(&GenLabel::D);
    for &(a, b) in S_PAIRS.iter().filter(|p| p.1 <= 3) {
        out.push((GenLabel::S(a, b), GenLabel::D, LinComb::zero()));
    }
    for mu in 0..4 {
        out.push((GenLabel::P(mu), GenLabel::D, LinComb::from_label(&GenLabel::P(mu))));
        out.push((GenLabel::K(mu), GenLabel::D, LinComb::from_label(&GenLabel::K(mu)).scaled(&GR::int(-1))));
    }
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            out.push((GenLabel::P(mu), GenLabel::P(nu), LinComb::zero()));
            out.push((GenLabel::K(mu), GenLabel::K(nu), LinComb::zero()));
        }
    }
    for mu in 0..4 {
        for nu in 0..4 {
            let mut rhs = LinComb::zero();
            if let Some((sign, idx)) = s_index(mu, nu) {
                rhs.add_term(idx, &GR::int(2 * sign));
            }
            if mu == nu {
                rhs.add_scaled(&d, &GR::int(-2 * ETA[mu]));
            }
            out.push((GenLabel::K(mu), GenLabel::P(nu), rhs));
        }
    }
    out
}

/// Checks every generator pair against the so(2,4) brackets and the
/// conformal-basis relations, using the given generator table.
pub fn verify_matrix_algebra_with(gens: &[Mat4; 15], name: &str) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut rep = VerificationReport::new("verify-matrix-algebra").param("variant", name);
    let mut pairs = Vec::new();
    for i in 0..15 {
        for j in (i + 1)..15 {
            pairs.push((i, j));
        }
    }
    let bad: Vec<(String, BigRational)> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = S_PAIRS[i];
            let (c, d) = S_PAIRS[j];
            let lhs = mat_commutator(&gens[i], &gens[j]);
            let rhs = lincomb_matrix_with(&so24_bracket(a, b, c, d), gens);
            let r = lhs.sub(&rhs).max_abs_entry();
            (!r.is_zero()).then(|| (format!("[S{a}{b}, S{c}{d}]"), r))
        })
        .collect();
    let rels = conformal_relations();
    let bad_rel: Vec<(String, BigRational)> = rels
        .par_iter()
        .filter_map(|(x, y, rhs)| {
            let lhs = mat_commutator(&lincomb_matrix_with(&LinComb::from_label(x), gens), &lincomb_matrix_with(&LinComb::from_label(y), gens));
            let r = lhs.sub(&lincomb_matrix_with(rhs, gens)).max_abs_entry();
            (!r.is_zero()).then(|| (format!("[{x}, {y}]"), r))
        })
        .collect();
    let mut residual = Residual::ExactZero;
    for (what, r) in bad.into_iter().chain(bad_rel) {
        rep.fail(format!("nonzero residual {r} at {what}"));
        residual = residual.max(Residual::Exact(r));
    }
    rep.residual = residual;
    rep.parameters.insert("pairs".into(), json!(pairs.len()));
    rep.parameters.insert("conformal_relations".into(), json!(rels.len()));
    sw.stamp(&mut rep);
    rep
}

pub fn verify_matrix_algebra(variant: RepVariant) -> VerificationReport {
    verify_matrix_algebra_with(table(variant), variant.name())
}

/// Γ = diag(1, 1, −1, −1).
pub fn gamma_metric() -> Mat4 {
    Mat4::from_fn(|r, c| if r != c { GR::zero() } else if r < 2 { GR::one() } else { GR::int(-1) })
}

/// `S†Γ + ΓS`.
pub fn gamma_condition_residual(s: &Mat4) -> Mat4 {
    let g = gamma_metric();
    s.dagger().mul(&g).add(&g.mul(s))
}

fn skew_hermitian_2(m: &[[GR; 2]; 2]) -> bool {
    (0..2).all(|r| (0..2).all(|c| (&m[r][c] + &m[c][r].conj()).is_zero()))
}

/// Block pattern equivalent to the Γ-condition: skew-hermitian diagonal
/// blocks and lower-left block equal to the adjoint of the upper-right one.
pub fn gamma_block_pattern(s: &Mat4) -> bool {
    let tr = s.block(0, 1);
    let bl = s.block(1, 0);
    let adj_ok = (0..2).all(|r| (0..2).all(|c| bl[r][c] == tr[c][r].conj()));
    skew_hermitian_2(&s.block(0, 0)) && skew_hermitian_2(&s.block(1, 1)) && adj_ok
}

pub fn verify_gamma_condition_with(mats: &[(String, Mat4)], name: &str) -> VerificationReport {
    let sw = Stopwatch::start();
    let mut rep = VerificationReport::new("verify-gamma-condition").param("variant", name);
    let mut residual = Residual::ExactZero;
    let mut pattern_ok = true;
    for (label, m) in mats {
        let r = gamma_condition_residual(m).max_abs_entry();
        if !r.is_zero() {
            rep.fail(format!("S†Γ + ΓS ≠ 0 for {label} (max entry {r})"));
            residual = residual.max(Residual::Exact(r));
        }
        pattern_ok &= gamma_block_pattern(m);
    }
    rep.residual = residual;
    rep.note(format!(
        "diagonal blocks skew-hermitian with off-diagonal blocks mutually adjoint: {}",
        if pattern_ok { "yes" } else { "no" }
    ));
    rep.parameters.insert("generators".into(), json!(mats.len()));
    sw.stamp(&mut rep);
    rep
}

pub fn verify_gamma_condition(variant: RepVariant) -> VerificationReport {
    let mats: Vec<(String, Mat4)> = S_PAIRS
        .iter()
        .zip(table(variant).iter())
        .map(|(&(a, b), m)| (format!("S{a}{b}"), m.clone()))
        .collect();
    verify_gamma_condition_with(&mats, variant.name())
}

/// Sign of a permutation of `0..n` given as a slice; 0 if entries repeat.
pub fn perm_sign(p: &[usize]) -> i64 {
    let n = p.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if p[i] == p[j] {
                return 0;
            }
        }
    }
    let mut seen = vec![false; n];
    let mut sign = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(tl: [[GR; 2]; 2], tr: [[GR; 2]; 2], bl: [[GR; 2]; 2], br: [[GR; 2]; 2]) -> Mat4 {
        Mat4::from_blocks(&tl, &tr, &bl, &br)
    }

    fn scal2(m: &[[GR; 2]; 2], s: &GR) -> [[GR; 2]; 2] {
        std::array::from_fn(|r| std::array::from_fn(|c| &m[r][c] * s))
    }

    #[test]
    fn gamma0_is_diagonal() {
        let g = build_gamma();
        let expect = Mat4::from_fn(|r, c| if r != c { GR::zero() } else if r < 2 { GR::one() } else { GR::int(-1) });
        assert_eq!(g.upper[0], expect);
        assert_eq!(g.upper[0].mul(&g.upper[0]), Mat4::identity());
    }

    #[test]
    fn gamma5_is_offdiagonal_identity() {
        let g = build_gamma();
        assert_eq!(g.upper[4], blocks(zero2(), pauli(0), pauli(0), zero2()));
    }

    #[test]
    fn clifford_relations() {
        let g = build_gamma();
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = g.upper[mu].mul(&g.upper[nu]).add(&g.upper[nu].mul(&g.upper[mu]));
                let eta = if mu != nu { 0 } else { ETA[mu] };
                assert_eq!(ac, Mat4::identity().scale(&GR::int(2 * eta)));
            }
        }
    }

    #[test]
    fn dilatation_matrix() {
        let d = build_generator(&GenLabel::D, RepVariant::Fundamental);
        let h = GR::frac(-1, 2);
        assert_eq!(d, blocks(zero2(), scal2(&pauli(0), &h), scal2(&pauli(0), &h), zero2()));
        let dd = build_generator(&GenLabel::D, RepVariant::Dual);
        assert_eq!(dd, d.neg());
        assert_eq!(d.dagger(), d);
    }

    #[test]
    fn rotation_s12() {
        let s12 = build_generator(&GenLabel::S(1, 2), RepVariant::Fundamental);
        let ih = GR::from_parts(0, 1, 1, 2);
        assert_eq!(s12, blocks(scal2(&pauli(3), &ih), zero2(), zero2(), scal2(&pauli(3), &ih)));
    }

    #[test]
    fn matrix_forms() {
        let ih = GR::from_parts(0, 1, 1, 2);
        let one = pauli(0);
        let f = RepVariant::Fundamental;
        for i in 1..=3 {
            let s0i = blocks(zero2(), scal2(&pauli(i), &GR::frac(1, 2)), scal2(&pauli(i), &GR::frac(1, 2)), zero2());
            assert_eq!(build_generator(&GenLabel::S(0, i), f), s0i);
            let ki = blocks(scal2(&pauli(i), &ih), scal2(&pauli(i), &ih), scal2(&pauli(i), &-&ih), scal2(&pauli(i), &-&ih));
            assert_eq!(build_generator(&GenLabel::K(i), f), ki);
            let pi = blocks(scal2(&pauli(i), &-&ih), scal2(&pauli(i), &ih), scal2(&pauli(i), &-&ih), scal2(&pauli(i), &ih));
            assert_eq!(build_generator(&GenLabel::P(i), f), pi);
        }
        let k0 = blocks(scal2(&one, &-&ih), scal2(&one, &-&ih), scal2(&one, &ih), scal2(&one, &ih));
        assert_eq!(build_generator(&GenLabel::K(0), f), k0);
        let p0 = blocks(scal2(&one, &-&ih), scal2(&one, &ih), scal2(&one, &-&ih), scal2(&one, &ih));
        assert_eq!(build_generator(&GenLabel::P(0), f), p0);
    }

    #[test]
    fn expand_s01_s12() {
        let c = structure_expand(&GenLabel::S(0, 1), &GenLabel::S(1, 2));
        assert_eq!(c, LinComb::from_label(&GenLabel::S(0, 2)));
        let m = mat_commutator(
            &build_generator(&GenLabel::S(0, 1), RepVariant::Fundamental),
            &build_generator(&GenLabel::S(1, 2), RepVariant::Fundamental),
        );
        assert_eq!(m, build_generator(&GenLabel::S(0, 2), RepVariant::Fundamental));
    }

    #[test]
    fn expand_k0_p0() {
        let c = structure_expand(&GenLabel::K(0), &GenLabel::P(0));
        assert_eq!(c.to_conformal(), vec![(GenLabel::D, GR::int(-2))]);
    }

    #[test]
    fn expand_p1_p2() {
        assert!(structure_expand(&GenLabel::P(1), &GenLabel::P(2)).is_zero());
    }

    #[test]
    fn abstract_relations_match_bracket() {
        for (x, y, rhs) in conformal_relations() {
            assert_eq!(structure_expand(&x, &y), rhs, "[{x}, {y}]");
        }
    }

    #[test]
    fn matrix_algebra_both_variants() {
        for v in [RepVariant::Fundamental, RepVariant::Dual] {
            let r = verify_matrix_algebra(v);
            assert!(r.pass, "{:?}", r.notes);
            assert!(r.residual.is_exact_zero());
        }
    }

    #[test]
    fn corrupted_generator_fails() {
        let mut gens = generator_table(RepVariant::Fundamental).clone();
        let e = gens[3].entries[0][2].clone();
        gens[3].entries[0][2] = -e;
        assert!(!verify_matrix_algebra_with(&gens, "corrupted").pass);
    }

    #[test]
    fn gamma_condition() {
        for v in [RepVariant::Fundamental, RepVariant::Dual] {
            let r = verify_gamma_condition(v);
            assert!(r.pass, "{:?}", r.notes);
        }
        for i in 1..=3 {
            assert!(gamma_condition_residual(&build_generator(&GenLabel::S(0, i), RepVariant::Fundamental)).is_zero());
        }
        assert!(gamma_condition_residual(&build_generator(&GenLabel::D, RepVariant::Fundamental)).is_zero());
        let r = verify_gamma_condition_with(&[("Id".into(), Mat4::identity())], "identity");
        assert!(!r.pass);
    }

    #[test]
    fn jacobi_identity_exhaustive() {
        let g = generator_table(RepVariant::Fundamental);
        for i in 0..15 {
            for j in 0..15 {
                for k in 0..15 {
                    let t1 = mat_commutator(&g[i], &mat_commutator(&g[j], &g[k]));
                    let t2 = mat_commutator(&g[j], &mat_commutator(&g[k], &g[i]));
                    let t3 = mat_commutator(&g[k], &mat_commutator(&g[i], &g[j]));
                    assert!(t1.add(&t2).add(&t3).is_zero());
                }
            }
        }
    }

    #[test]
    fn explicit_dual_identities() {
        let f = |l: GenLabel| build_generator(&l, RepVariant::Fundamental);
        let d = |l: GenLabel| build_generator(&l, RepVariant::Dual);
        assert_eq!(d(GenLabel::K(0)), f(GenLabel::P(0)).neg());
        assert_eq!(d(GenLabel::P(0)), f(GenLabel::K(0)).neg());
        assert_eq!(d(GenLabel::D), f(GenLabel::D).neg());
        for i in 1..=3usize {
            let sign = GR::int(if i % 2 == 0 { 1 } else { -1 });
            assert_eq!(d(GenLabel::S(0, i)), f(GenLabel::S(0, i)).scale(&sign));
            assert_eq!(d(GenLabel::K(i)), f(GenLabel::P(i)).scale(&-&sign));
            assert_eq!(d(GenLabel::P(i)), f(GenLabel::K(i)).scale(&-&sign));
        }
    }

    #[test]
    fn dual_has_same_structure_constants() {
        let gd = generator_table(RepVariant::Dual);
        for i in 0..15 {
            for j in 0..15 {
                let (a, b) = S_PAIRS[i];
                let (c, e) = S_PAIRS[j];
                let rhs = lincomb_matrix_with(&so24_bracket(a, b, c, e), gd);
                assert_eq!(mat_commutator(&gd[i], &gd[j]), rhs);
            }
        }
    }

    #[test]
    fn label_ordering() {
        assert_eq!(GenLabel::s(3, 1).unwrap(), (-1, GenLabel::S(1, 3)));
        assert_eq!(GenLabel::s(2, 2), Err(LieError::DiagonalIndex(2)));
        assert_eq!(GenLabel::s(0, 6), Err(LieError::IndexOutOfRange(6)));
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(perm_sign(&[0, 1, 2, 3, 4, 5]), 1);
        assert_eq!(perm_sign(&[1, 0, 2, 3, 4, 5]), -1);
        assert_eq!(perm_sign(&[1, 2, 0]), 1);
        assert_eq!(perm_sign(&[0, 0, 1]), 0);
    }

    #[test]
    fn physical_convention_multiplies_by_i() {
        let d = build_generator(&GenLabel::D, RepVariant::Fundamental);
        assert_eq!(to_physical(&d), d.scale(&GR::i()));
    }
}
