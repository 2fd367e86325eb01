//! Truncated two-mode Fock space H_F and auxiliary space H_A.
//!
//! A basis element of H_A is the block |n₁,n₂⟩⟨m₁,m₂|, equivalently the
//! normal-ordered monomial (a†¹)^n₁ (a†²)^n₂ (a₁)^m₁ (a₂)^m₂. The four
//! oscillator families act on it per mode as
//!
//! ```text
//! â†  |n⟩⟨m| = |n+1⟩⟨m|
//! â   |n⟩⟨m| = |n⟩⟨m+1| + n |n−1⟩⟨m|
//! b̂   |n⟩⟨m| = |n⟩⟨m+1|
//! b̂†  |n⟩⟨m| = |n+1⟩⟨m| + m |n⟩⟨m−1|
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::GR;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("image {to:?} of {from:?} violates the declared grading (κ-shift {kappa_shift}, degree bound {bound})")]
    Grading { from: AuxState, to: AuxState, kappa_shift: i64, bound: u32 },
    #[error("malformed operator dump: {0}")]
    Dump(String),
}

/// Basis vector |n₁,n₂⟩ of H_F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(pub [u32; 2]);

/// Basis label (n₁, n₂, m₁, m₂) of H_A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct AuxState(pub [u32; 4]);

impl AuxState {
    pub fn new(n1: u32, n2: u32, m1: u32, m2: u32) -> Self {
        AuxState([n1, n2, m1, m2])
    }

    pub fn n(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn m(&self, mode: usize) -> u32 {
        self.0[2 + mode]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn kappa(&self) -> i64 {
        chirality(self)
    }

    fn shifted(&self, slot: usize, delta: i32) -> Option<AuxState> {
        let v = self.0[slot] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        let mut s = *self;
        s.0[slot] = v as u32;
        Some(s)
    }
}

/// κ = (n₁+n₂) − (m₁+m₂).
pub fn chirality(s: &AuxState) -> i64 {
    (s.0[0] + s.0[1]) as i64 - (s.0[2] + s.0[3]) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct TruncationSpec {
    pub n_max: u32,
    pub kappa: Option<i64>,
}

impl TruncationSpec {
    pub fn new(n_max: u32) -> Self {
        Self { n_max, kappa: None }
    }

    pub fn with_kappa(n_max: u32, kappa: i64) -> Self {
        Self { n_max, kappa: Some(kappa) }
    }

    pub fn admits(&self, s: &AuxState) -> bool {
        s.degree() <= self.n_max && self.kappa.is_none_or(|k| chirality(s) == k)
    }
}

/// Degree-then-lexicographic enumeration of all admitted states.
pub fn enumerate_basis(trunc: &TruncationSpec) -> Vec<AuxState> {
    let mut out = Vec::new();
    for deg in 0..=trunc.n_max {
        for n1 in 0..=deg {
            for n2 in 0..=(deg - n1) {
                for m1 in 0..=(deg - n1 - n2) {
                    let s = AuxState([n1, n2, m1, deg - n1 - n2 - m1]);
                    if trunc.admits(&s) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Enumerated basis with O(1) index lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    pub trunc: TruncationSpec,
    pub states: Vec<AuxState>,
    index: HashMap<AuxState, usize>,
}

impl Basis {
    pub fn new(trunc: TruncationSpec) -> Arc<Self> {
        let states = enumerate_basis(&trunc);
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Arc::new(Self { trunc, states, index })
    }

    /// States of mode 1 only, `n₁ + m₁ ≤ n_max`.
    pub fn single_mode(n_max: u32) -> Arc<Self> {
        let trunc = TruncationSpec::new(n_max);
        let states: Vec<AuxState> = enumerate_basis(&trunc).into_iter().filter(|s| s.0[1] == 0 && s.0[3] == 0).collect();
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Arc::new(Self { trunc, states, index })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &AuxState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of states whose degree is at most `n_max − margin`.
    pub fn interior(&self, margin: u32) -> Vec<usize> {
        if margin > self.trunc.n_max {
            return Vec::new();
        }
        let cap = self.trunc.n_max - margin;
        (0..self.states.len()).filter(|&i| self.states[i].degree() <= cap).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Osc {
    ADag(usize),
    A(usize),
    B(usize),
    BDag(usize),
}

impl Osc {
    pub fn kappa_shift(self) -> i64 {
        match self {
            Osc::ADag(_) | Osc::BDag(_) => 1,
            Osc::A(_) | Osc::B(_) => -1,
        }
    }
}

/// Integer-coefficient action of a single oscillator on a basis label.
pub fn apply_osc_int(which: Osc, s: &AuxState) -> Vec<(AuxState, i64)> {
    let mut out = Vec::with_capacity(2);
    match which {
        Osc::ADag(a) => out.push((s.shifted(a, 1).unwrap(), 1)),
        Osc::A(a) => {
            out.push((s.shifted(2 + a, 1).unwrap(), 1));
            if let Some(t) = s.shifted(a, -1) {
                out.push((t, s.n(a) as i64));
            }
        }
        Osc::B(a) => out.push((s.shifted(2 + a, 1).unwrap(), 1)),
        Osc::BDag(a) => {
            out.push((s.shifted(a, 1).unwrap(), 1));
            if let Some(t) = s.shifted(2 + a, -1) {
                out.push((t, s.m(a) as i64));
            }
        }
    }
    out
}

pub fn apply_osc(which: Osc, s: &AuxState) -> Vec<(AuxState, GR)> {
    apply_osc_int(which, s).into_iter().map(|(t, c)| (t, GR::int(c))).collect()
}

/// Applies a word of oscillators, rightmost first, with no truncation.
pub fn apply_word_int(word: &[Osc], s: &AuxState) -> BTreeMap<AuxState, i64> {
    let mut cur: BTreeMap<AuxState, i64> = BTreeMap::from([(*s, 1)]);
    for &o in word.iter().rev() {
        let mut next = BTreeMap::new();
        for (st, c) in &cur {
            for (t, d) in apply_osc_int(o, st) {
                *next.entry(t).or_insert(0) += c * d;
            }
        }
        next.retain(|_, c| *c != 0);
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Action of a normal-ordered monomial on |μ₁,μ₂⟩ ∈ H_F (orthonormal states).
///
/// Returns the squared coefficient Π (μ−m+n)!·μ!/((μ−m)!)² and the target
/// state μ − m + n, or `None` when some μ_α < m_α.
pub fn monomial_on_fock(mono: &AuxState, mu: &FockState) -> Option<(BigRational, FockState)> {
    let mut f2 = BigRational::one();
    let mut target = [0u32; 2];
    for a in 0..2 {
        let (n, m, x) = (mono.n(a), mono.m(a), mu.0[a]);
        if x < m {
            return None;
        }
        let t = x - m + n;
        let k = factorial(x - m);
        f2 *= BigRational::new(factorial(t) * factorial(x), &k * &k);
        target[a] = t;
    }
    Some((f2, FockState(target)))
}

/// Normal-ordered fuzzy function Σ c_{n₁n₂m₁m₂} (a†)^n (a)^m.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzyFunction {
    pub coeffs: BTreeMap<AuxState, GR>,
}

impl FuzzyFunction {
    pub fn monomial(s: AuxState) -> Self {
        Self { coeffs: BTreeMap::from([(s, GR::one())]) }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (AuxState, GR)>) -> Self {
        let mut f = Self::default();
        for (s, c) in pairs {
            f.add_term(s, &c);
        }
        f
    }

    pub fn add_term(&mut self, s: AuxState, c: &GR) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(s).or_insert_with(GR::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&s);
        }
    }

    pub fn within(&self, trunc: &TruncationSpec) -> bool {
        self.coeffs.keys().all(|s| trunc.admits(s))
    }
}

/// State normalization used inside the Hilbert–Schmidt trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum HsConvention {
    /// Orthonormal |k⟩ with weight 1/(k₁! k₂!).
    OrthonormalWeighted,
    /// Monomial states ⟨k|k⟩ = k₁! k₂!, weight 1/(k₁! k₂!); this is the plain trace.
    MonomialWeighted,
}

#[derive(Clone, Debug)]
pub struct HsValue {
    pub exact: GR,
    pub value: (f64, f64),
    /// Contribution of the outermost shell k₁ + k₂ = cutoff.
    pub tail: (f64, f64),
}

/// Truncated weighted trace Σ_{k₁+k₂ ≤ cutoff} w(k) ⟨k|Ψ†Φ|k⟩.
pub fn hs_inner_product(psi: &FuzzyFunction, phi: &FuzzyFunction, cutoff: u32, conv: HsConvention) -> HsValue {
    let mut total = GR::zero();
    let mut tail = GR::zero();
    for deg in 0..=cutoff {
        for k1 in 0..=deg {
            let k = FockState([k1, deg - k1]);
            let kfact = factorial(k.0[0]) * factorial(k.0[1]);
            let mut images_psi: BTreeMap<FockState, GR> = BTreeMap::new();
            let mut images_phi: BTreeMap<FockState, GR> = BTreeMap::new();
            // ⟨j|mono|k⟩ = √(j!k!)/Π(k−m)!, so the √(j!k!) factors pair up exactly.
            for (src, dst) in [(psi, &mut images_psi), (phi, &mut images_phi)] {
                for (mono, c) in &src.coeffs {
                    if let Some((_, j)) = monomial_on_fock(mono, &k) {
                        let d = factorial(k.0[0] - mono.m(0)) * factorial(k.0[1] - mono.m(1));
                        let e = dst.entry(j).or_insert_with(GR::zero);
                        *e += &c.scale(&BigRational::new(BigInt::one(), d));
                    }
                }
            }
            let mut diag = GR::zero();
            for (j, a) in &images_psi {
                if let Some(b) = images_phi.get(j) {
                    let jfact = factorial(j.0[0]) * factorial(j.0[1]);
                    diag += &(&a.conj() * b).scale(&BigRational::from_integer(jfact * &kfact));
                }
            }
            let w = match conv {
                HsConvention::OrthonormalWeighted => BigRational::new(BigInt::one(), kfact.clone()),
                HsConvention::MonomialWeighted => BigRational::one(),
            };
            let term = diag.scale(&w);
            if deg == cutoff {
                tail += &term;
            }
            total += &term;
        }
    }
    HsValue { value: total.to_f64_parts(), tail: tail.to_f64_parts(), exact: total }
}

/// Sparse vector over a basis, keyed by basis index.
pub type SparseVec = BTreeMap<usize, GR>;

pub fn vec_add_scaled(acc: &mut SparseVec, v: &SparseVec, s: &GR) {
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(GR::zero);
        *e += &(x * s);
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

/// Sparse operator on a truncated basis, stored by columns.
#[derive(Clone, Debug)]
pub struct GradedOperator {
    pub name: String,
    pub basis: Arc<Basis>,
    pub cols: Vec<Vec<(usize, GR)>>,
    pub degree_shift_bound: u32,
    pub kappa_shift: i64,
}

impl GradedOperator {
    /// Builds the operator column by column from an untruncated action,
    /// dropping images outside the basis and validating the grading.
    pub fn from_action(
        name: impl Into<String>,
        basis: &Arc<Basis>,
        degree_shift_bound: u32,
        kappa_shift: i64,
        action: impl Fn(&AuxState) -> Vec<(AuxState, GR)>,
    ) -> Result<Self, FockError> {
        let mut cols = Vec::with_capacity(basis.len());
        for s in &basis.states {
            let mut col: BTreeMap<usize, GR> = BTreeMap::new();
            for (t, c) in action(s) {
                if c.is_zero() {
                    continue;
                }
                let dk = chirality(&t) - chirality(s);
                let dd = (t.degree() as i64 - s.degree() as i64).unsigned_abs() as u32;
                if dk != kappa_shift || dd > degree_shift_bound {
                    return Err(FockError::Grading { from: *s, to: t, kappa_shift, bound: degree_shift_bound });
                }
                if let Some(j) = basis.index_of(&t) {
                    let e = col.entry(j).or_insert_with(GR::zero);
                    *e += &c;
                }
            }
            cols.push(col.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        Ok(Self { name: name.into(), basis: basis.clone(), cols, degree_shift_bound, kappa_shift })
    }

    pub fn single(which: Osc, basis: &Arc<Basis>) -> Self {
        let name = format!("{which:?}");
        Self::from_action(name, basis, 1, which.kappa_shift(), |s| apply_osc(which, s)).expect("oscillator grading")
    }

    pub fn apply_index(&self, j: usize) -> SparseVec {
        self.cols[j].iter().cloned().collect()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v {
            for (i, c) in &self.cols[*j] {
                let e = out.entry(*i).or_insert_with(GR::zero);
                *e += &(c * x);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Matrix product `self · other`; exact on states whose images under
    /// `other` stay inside the truncation.
    pub fn compose(&self, other: &GradedOperator) -> GradedOperator {
        let cols = (0..self.basis.len())
            .map(|j| self.apply(&other.apply_index(j)).into_iter().collect())
            .collect();
        GradedOperator {
            name: format!("{}·{}", self.name, other.name),
            basis: self.basis.clone(),
            cols,
            degree_shift_bound: self.degree_shift_bound + other.degree_shift_bound,
            kappa_shift: self.kappa_shift + other.kappa_shift,
        }
    }

    pub fn linear(name: impl Into<String>, terms: &[(&GradedOperator, GR)]) -> GradedOperator {
        let first = terms[0].0;
        let cols = (0..first.basis.len())
            .map(|j| {
                let mut acc = SparseVec::new();
                for (op, s) in terms {
                    vec_add_scaled(&mut acc, &op.apply_index(j), s);
                }
                acc.into_iter().collect()
            })
            .collect();
        GradedOperator {
            name: name.into(),
            basis: first.basis.clone(),
            cols,
            degree_shift_bound: terms.iter().map(|t| t.0.degree_shift_bound).max().unwrap_or(0),
            kappa_shift: first.kappa_shift,
        }
    }

    pub fn scaled(&self, s: &GR) -> GradedOperator {
        GradedOperator::linear(self.name.clone(), &[(self, s.clone())])
    }

    /// Diagonal entry ⟨i|op|i⟩ in the coefficient sense.
    pub fn diagonal(&self, i: usize) -> GR {
        self.cols[i].iter().find(|(r, _)| *r == i).map(|(_, c)| c.clone()).unwrap_or_else(GR::zero)
    }

    /// Entries outside the diagonal for column `i`.
    pub fn off_diagonal(&self, i: usize) -> Vec<(usize, GR)> {
        self.cols[i].iter().filter(|(r, _)| *r != i).cloned().collect()
    }
}

/// Text dump: header lines starting with `#`, then one line per nonzero entry
/// `in_index out_index re_num re_den im_num im_den`.
pub fn dump_operator(op: &GradedOperator) -> String {
    let mut s = String::new();
    let t = &op.basis.trunc;
    writeln!(s, "# n_max {}", t.n_max).unwrap();
    match t.kappa {
        Some(k) => writeln!(s, "# kappa {k}").unwrap(),
        None => writeln!(s, "# kappa all").unwrap(),
    }
    writeln!(s, "# operator {}", op.name).unwrap();
    for (j, col) in op.cols.iter().enumerate() {
        for (i, c) in col {
            writeln!(s, "{j} {i} {} {} {} {}", c.re.numer(), c.re.denom(), c.im.numer(), c.im.denom()).unwrap();
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDump {
    pub n_max: u32,
    pub kappa: Option<i64>,
    pub name: String,
    pub entries: Vec<(usize, usize, GR)>,
}

pub fn parse_dump(text: &str) -> Result<OperatorDump, FockError> {
    let err = |m: &str| FockError::Dump(m.to_string());
    let mut n_max = None;
    let mut kappa = None;
    let mut name = None;
    let mut entries = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(h) = line.strip_prefix('#') {
            let mut it = h.trim().splitn(2, ' ');
            let key = it.next().unwrap_or("");
            let val = it.next().unwrap_or("").trim();
            match key {
                "n_max" => n_max = Some(val.parse().map_err(|_| err("n_max"))?),
                "kappa" => kappa = if val == "all" { None } else { Some(val.parse().map_err(|_| err("kappa"))?) },
                "operator" => name = Some(val.to_string()),
                _ => return Err(err(&format!("unknown header {key}"))),
            }
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(err(line));
        }
        let int = |s: &str| s.parse::<BigInt>().map_err(|_| err(line));
        let ij = |s: &str| s.parse::<usize>().map_err(|_| err(line));
        let (rd, id) = (int(f[3])?, int(f[5])?);
        if rd.is_zero() || id.is_zero() {
            return Err(err(line));
        }
        let c = GR::new(BigRational::new(int(f[2])?, rd), BigRational::new(int(f[4])?, id));
        entries.push((ij(f[0])?, ij(f[1])?, c));
    }
    Ok(OperatorDump { n_max: n_max.ok_or_else(|| err("missing n_max"))?, kappa, name: name.ok_or_else(|| err("missing operator"))?, entries })
}

/// Number of states with degree ≤ n_max: C(n_max + 4, 4).
pub fn basis_size(n_max: u32) -> usize {
    let n = n_max as u64;
    ((n + 1) * (n + 2) * (n + 3) * (n + 4) / 24) as usize
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
