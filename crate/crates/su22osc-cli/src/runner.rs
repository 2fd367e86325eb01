use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64 as C64;
use serde_json::json;
use su22osc::boostcs::{
    boosted_basis_norm, boosted_cs_norm_quadrature, gauss_matrix_residual, p_grid_csv, p_matrix_element, parseval_check, verify_gauss_decomposition,
    SingleModeOracle,
};
use su22osc::fockaux::{hs_inner_product, TruncationSpec};
use su22osc::liealg4::{verify_gamma_condition, verify_matrix_algebra, RepVariant};
use su22osc::massive::{
    build_eigenfunction, classification_csv, eigenfunction_on_fock, product_s05_spectrum, verify_bessel_ode, verify_classification, verify_fock_closed_form,
    verify_massive, verify_p_eigenvalue, Branch, SeriesRule,
};
use su22osc::oscrep::{
    casimir3_diagonal_check, casimir_table, casimir_table_csv, classify_doubleton, verify_casimirs_on, verify_massless_invariants_on, verify_osc_algebra_on,
    verify_s05_spectrum_on, w0_uniform_coeffs, w0_split_coeffs, w0_formula_check, OscRep,
};
use su22osc::report::{Residual, Stopwatch, VerificationReport};
use su22osc::specfun::factorial_f64;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    VerifyMatrixAlgebra,
    VerifyOscAlgebra,
    CasimirTable,
    Spectrum,
    BoostCheck,
    Parseval,
    MasslessField,
    MassiveField,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::VerifyMatrixAlgebra,
        Suite::VerifyOscAlgebra,
        Suite::CasimirTable,
        Suite::Spectrum,
        Suite::BoostCheck,
        Suite::Parseval,
        Suite::MasslessField,
        Suite::MassiveField,
    ];
}

#[derive(Default)]
pub struct SuiteOutput {
    pub reports: Vec<VerificationReport>,
    pub tables: Vec<(String, String)>,
}

impl SuiteOutput {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    fn extend(&mut self, other: SuiteOutput) {
        self.reports.extend(other.reports);
        self.tables.extend(other.tables);
    }
}

fn renamed(mut r: VerificationReport, name: &str) -> VerificationReport {
    r.check_name = name.to_string();
    r
}

pub fn run(suite: Suite, cfg: &RunConfig) -> SuiteOutput {
    match suite {
        Suite::VerifyMatrixAlgebra => matrix_algebra(),
        Suite::VerifyOscAlgebra => osc_algebra(cfg),
        Suite::CasimirTable => casimirs(cfg),
        Suite::Spectrum => spectrum(cfg),
        Suite::BoostCheck => boost(cfg),
        Suite::Parseval => parseval(cfg),
        Suite::MasslessField => massless(cfg),
        Suite::MassiveField => massive(cfg),
        Suite::All => {
            let mut out = SuiteOutput::default();
            for s in Suite::EACH {
                out.extend(run(s, cfg));
            }
            out
        }
    }
}

fn matrix_algebra() -> SuiteOutput {
    SuiteOutput {
        reports: vec![
            renamed(verify_matrix_algebra(RepVariant::Fundamental), "matrix-algebra-fundamental"),
            renamed(verify_matrix_algebra(RepVariant::Dual), "matrix-algebra-dual"),
            renamed(verify_gamma_condition(RepVariant::Fundamental), "gamma-condition"),
        ],
        tables: vec![],
    }
}

fn osc_algebra(cfg: &RunConfig) -> SuiteOutput {
    let reports = [RepVariant::Fundamental, RepVariant::Dual]
        .into_iter()
        .map(|v| renamed(verify_osc_algebra_on(&OscRep::new(v, TruncationSpec::new(cfg.n_max))), &format!("osc-algebra-{}", v.name())))
        .collect();
    SuiteOutput { reports, tables: vec![] }
}

fn casimirs(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let kappa_max = cfg.kappa_list.iter().copied().max().unwrap_or(0);
    let kappas: Vec<i64> = (-kappa_max..=kappa_max).collect();
    for v in [RepVariant::Fundamental, RepVariant::Dual] {
        let rep = OscRep::new(v, TruncationSpec::new(cfg.n_max));
        let mut r = verify_casimirs_on(&rep, &[2, 3, 4], cfg.conventions);
        r.note("Casimirs are polynomials in the central element C1");
        out.reports.push(renamed(r, &format!("casimir-reductions-{}", v.name())));
        let span = (cfg.n_max as i64 - 6).min(kappa_max);
        out.reports.push(renamed(casimir3_diagonal_check(&rep, span, cfg.conventions), &format!("casimir3-diagonal-{}", v.name())));
        out.tables.push((format!("casimir_{}", v.name()), casimir_table_csv(&casimir_table(&kappas, v), v)));
    }
    out
}

fn spectrum(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let kappas: Vec<i64> = cfg.kappa_list.iter().copied().filter(|k| *k as u32 <= cfg.n_max).collect();
    for v in [RepVariant::Fundamental, RepVariant::Dual] {
        let rep = OscRep::new(v, TruncationSpec::new(cfg.n_max));
        out.reports.push(renamed(verify_s05_spectrum_on(&rep, &kappas), &format!("s05-spectrum-{}", v.name())));
    }
    let mut csv = String::from("kappa,d,j1,j2,class\n");
    for &k in &cfg.kappa_list {
        let c = classify_doubleton(k).expect("validated non-negative");
        csv.push_str(&format!("{k},{},{},{},{:?}\n", c.d, c.j1, c.j2, c.tag));
    }
    out.tables.push(("doubleton_classes".into(), csv));
    out
}

/// Deterministic coherent labels with |A|, |B| ≤ 1.
pub fn coherent_labels() -> Vec<([C64; 2], [C64; 2])> {
    let z = C64::new(0.0, 0.0);
    vec![
        ([z, z], [z, z]),
        ([C64::new(0.5, 0.0), z], [z, z]),
        ([z, z], [C64::new(0.3, -0.4), z]),
        ([C64::new(0.6, 0.2), C64::new(-0.1, 0.3)], [C64::new(0.2, 0.5), C64::new(0.4, 0.0)]),
        ([C64::new(1.0, 0.0), z], [C64::new(0.0, 1.0), z]),
        ([C64::new(0.0, 0.7), C64::new(0.7, 0.0)], [z, C64::new(0.5, 0.5)]),
        ([C64::new(-0.3, 0.3), C64::new(0.2, -0.6)], [C64::new(0.8, -0.1), C64::new(-0.2, 0.2)]),
        ([C64::new(0.1, 0.9), z], [z, C64::new(-0.9, 0.1)]),
        ([C64::new(0.5, 0.5), C64::new(0.5, -0.5)], [C64::new(-0.5, 0.5), C64::new(0.5, 0.5)]),
        ([C64::new(-0.8, 0.0), C64::new(0.0, 0.4)], [C64::new(0.0, -0.3), C64::new(0.7, 0.0)]),
    ]
}

fn float_report(name: &str, worst: f64, tol: f64) -> VerificationReport {
    let mut r = VerificationReport::new(name).param("tolerance", tol);
    r.residual = Residual::Float(worst);
    if !(worst <= tol) {
        r.fail(format!("max deviation {worst:.3e} exceeds {tol:.0e}"));
    }
    r
}

fn oracle_size(beta: f64) -> u32 {
    match beta.abs() {
        b if b <= 0.5 => 60,
        b if b <= 1.0 => 90,
        _ => 160,
    }
}

fn boost(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let tol = cfg.tolerance;

    let worst = cfg.beta_list.iter().map(|&b| gauss_matrix_residual(b)).fold(0.0, f64::max);
    out.reports.push(float_report("gauss-2x2", worst, tol).param("betas", cfg.beta_list.clone()));

    out.reports.push(verify_gauss_decomposition(cfg.boost_n_max, &cfg.beta_list, cfg.boost_input_degree, tol));

    let sw = Stopwatch::start();
    let mut worst = 0.0f64;
    for (a, b) in coherent_labels() {
        for &beta in &cfg.beta_list {
            worst = worst.max((boosted_cs_norm_quadrature(a, b, beta, 40) - 1.0).abs());
        }
    }
    let mut r = float_report("coherent-norm", worst, tol).param("labels", 10).param("betas", cfg.beta_list.clone()).param("nodes", 40);
    sw.stamp(&mut r);
    out.reports.push(r);

    let sw = Stopwatch::start();
    let mut worst = 0.0f64;
    for n in 0..=3 {
        for m in 0..=3 {
            for &beta in &cfg.beta_list {
                let v = boosted_basis_norm(n, m, beta, cfg.cutoff, tol);
                worst = worst.max((v.value - factorial_f64(n) * factorial_f64(m)).abs());
            }
        }
    }
    let mut r = float_report("basis-norm", worst, tol).param("cutoff", cfg.cutoff);
    sw.stamp(&mut r);
    out.reports.push(r);

    let sw = Stopwatch::start();
    let mut worst = 0.0f64;
    let mut tail = 0.0f64;
    for &beta in &cfg.beta_list {
        let oracle = SingleModeOracle::new(oracle_size(beta));
        for n in 0..=4u32 {
            for m in 0..=4u32 {
                let mut e = vec![C64::new(0.0, 0.0); oracle.basis.len()];
                e[oracle.state(n, m).expect("inside oracle truncation")] = C64::new(1.0, 0.0);
                let r = oracle.boost(beta, &e);
                tail = tail.max(r.tail);
                for k in 0..=4u32 {
                    let l = k as i64 + m as i64 - n as i64;
                    if !(0..=4).contains(&l) {
                        continue;
                    }
                    let l = l as u32;
                    let want = r.vector[oracle.state(k, l).unwrap()].re * factorial_f64(k) * factorial_f64(l);
                    worst = worst.max((p_matrix_element(k, l, m, n, beta) - want).abs());
                }
            }
        }
    }
    let mut r = float_report("p-matrix-elements", worst, tol.min(1e-9)).param("oracle_tail", tail);
    sw.stamp(&mut r);
    out.reports.push(r);

    out.tables.push(("p_grid".into(), p_grid_csv(1, 2, cfg.beta_list[0], 12)));
    out
}

fn parseval(cfg: &RunConfig) -> SuiteOutput {
    let mut parts = Vec::new();
    let mut csv = String::from("n,m,beta,branch_sum,weighted_sum\n");
    for n in 0..=3 {
        for m in 0..=3 {
            for &beta in &cfg.beta_list {
                let r = parseval_check(n, m, beta, cfg.cutoff, cfg.tolerance);
                csv.push_str(&format!("{n},{m},{beta},{},{}\n", r.parameters["branch_sum"], r.parameters["weighted_sum"]));
                parts.push(r);
            }
        }
    }
    let weighted = parts.iter().map(|r| r.parameters["weighted_deviation"].as_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    let mut r = VerificationReport::merge("parseval", parts);
    r.parameters.insert("max_weighted_deviation".into(), json!(weighted));
    r.parameters.insert("cutoff".into(), json!(cfg.cutoff));
    r.parameters.insert("betas".into(), json!(cfg.beta_list));
    SuiteOutput { reports: vec![r], tables: vec![("parseval".into(), csv)] }
}

fn massless(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let trunc = TruncationSpec::new(cfg.n_max);
    let rep = OscRep::new(RepVariant::Fundamental, trunc);
    out.reports.push(verify_massless_invariants_on(&rep, cfg.conventions));
    out.reports.push(w0_formula_check(&rep, cfg.conventions, 50, w0_split_coeffs, "w0-split"));
    out.reports.push(w0_formula_check(&rep, cfg.conventions, 50, w0_uniform_coeffs, "w0-uniform"));

    let eps = &cfg.epsilon;
    let terms = cfg.n_max / 2 + 1;
    let mut ode = Vec::new();
    let mut p_disp = Vec::new();
    let mut p_der = Vec::new();
    for &k in &cfg.kappa_list {
        ode.push(verify_bessel_ode(&build_eigenfunction(k, eps, Branch::Plus, 12, SeriesRule::Bessel).expect("validated")));
        for b in [Branch::Plus, Branch::Minus] {
            p_disp.push(verify_p_eigenvalue(&build_eigenfunction(k, eps, b, terms, SeriesRule::Bessel).expect("validated"), trunc));
            p_der.push(verify_p_eigenvalue(&build_eigenfunction(k, eps, b, terms, SeriesRule::Laguerre).expect("validated"), trunc));
        }
    }
    out.reports.push(VerificationReport::merge("bessel-recurrence", ode));
    out.reports.push(VerificationReport::merge("p-eigenvalue-bessel", p_disp));
    out.reports.push(VerificationReport::merge("p-eigenvalue-laguerre", p_der));
    let closed: Vec<i64> = cfg.kappa_list.iter().copied().filter(|k| *k >= 2).collect();
    out.reports.push(renamed(verify_fock_closed_form(&closed, 6, eps, SeriesRule::Bessel), "fock-closed-form-bessel"));
    out.reports.push(renamed(verify_fock_closed_form(&cfg.kappa_list, 6, eps, SeriesRule::Laguerre), "fock-closed-form-laguerre"));

    let sw = Stopwatch::start();
    let mut hs = VerificationReport::new("hs-norm").param("cutoff", cfg.cutoff).param("convention", format!("{:?}", cfg.hs_convention));
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &k in &cfg.kappa_list {
        let f = build_eigenfunction(k, eps, Branch::Plus, cfg.cutoff + 1, SeriesRule::Laguerre).expect("validated").to_fuzzy();
        let v = hs_inner_product(&f, &f, cfg.cutoff, cfg.hs_convention);
        let scale = v.value.0.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(v.tail.0.abs() / scale);
        if !(v.tail.0.abs() <= cfg.tolerance * scale) {
            hs.fail(format!("κ = {k}: outermost shell contributes {:.3e} of {:.3e}", v.tail.0, v.value.0));
        }
        rows.push(json!({"kappa": k, "value": v.value.0, "tail": v.tail.0}));
    }
    hs.parameters.insert("values".into(), json!(rows));
    hs.residual = Residual::Float(worst);
    sw.stamp(&mut hs);
    out.reports.push(hs);

    let mut csv = String::from("kappa,n,sqrt_arg,re,im\n");
    for &k in &cfg.kappa_list {
        for n in 0..=6 {
            let c = eigenfunction_on_fock(k, eps, n, SeriesRule::Laguerre).expect("validated");
            let (re, im) = c.factor.to_f64_parts();
            csv.push_str(&format!("{k},{n},{},{re:.17e},{im:.17e}\n", c.sqrt_arg));
        }
    }
    out.tables.push(("eigenfunction_fock".into(), csv));
    out
}

fn massive(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let trunc = TruncationSpec::new(cfg.n_max);
    let mut parts = Vec::new();
    for &k in &cfg.kappa_list {
        for &kp in &cfg.kappa_prime_list {
            parts.push(verify_massive(k, kp, &cfg.epsilon, trunc).expect("validated"));
        }
    }
    out.reports.push(VerificationReport::merge("massive-field", parts));
    let kmax = cfg.kappa_list.iter().chain(&cfg.kappa_prime_list).copied().max().unwrap_or(0).min(cfg.n_max as i64);
    let ks: Vec<i64> = (0..=kmax).collect();
    out.reports.push(verify_classification(&ks, trunc));
    out.tables.push(("massive_classes".into(), classification_csv(&cfg.kappa_list, &cfg.kappa_prime_list)));
    let spec = product_s05_spectrum(trunc, trunc);
    let mut csv = String::from("kappa,kappa_prime,d\n");
    for (k, kp, d) in spec.sector_minima {
        csv.push_str(&format!("{k},{kp},{d}\n"));
    }
    out.tables.push(("product_sector_minima".into(), csv));
    out
}

pub fn write_outputs(out: &SuiteOutput, dir: &Path) -> Result<()> {
    let reports = dir.join("reports");
    let tables = dir.join("tables");
    fs::create_dir_all(&reports).with_context(|| format!("creating {}", reports.display()))?;
    fs::create_dir_all(&tables).with_context(|| format!("creating {}", tables.display()))?;
    for r in &out.reports {
        let text = serde_json::to_string_pretty(&r.to_json())?;
        fs::write(reports.join(format!("{}.json", r.check_name)), text + "\n")?;
    }
    for (name, csv) in &out.tables {
        fs::write(tables.join(format!("{name}.csv")), csv)?;
    }
    Ok(())
}
