use num_rational::BigRational;
use serde_json::json;
use wasm_bindgen::prelude::*;

use su22osc::boostcs::{boosted_basis_norm, p_matrix_element};
use su22osc::liealg4::RepVariant;
use su22osc::massive::{eigenfunction_on_fock, SeriesRule};
use su22osc::oscrep::{casimir_eigenvalue, classify_doubleton};
use su22osc::specfun::factorial_f64;

fn variant(dual: bool) -> RepVariant {
    if dual {
        RepVariant::Dual
    } else {
        RepVariant::Fundamental
    }
}

/// Casimir eigenvalues λ₁..λ₄ and, for κ ≥ 0 in the fundamental, the
/// doubleton class. JSON text.
#[wasm_bindgen]
pub fn casimirs(kappa: i32, dual: bool) -> String {
    let k = kappa as i64;
    let v = variant(dual);
    let lambdas: Vec<String> = (1..=4).map(|o| casimir_eigenvalue(o, k, v).to_string()).collect();
    let class = (!dual).then(|| classify_doubleton(k).ok()).flatten();
    json!({
        "kappa": k,
        "variant": v.name(),
        "lambda": lambdas,
        "class": class,
    })
    .to_string()
}

/// Row of 𝒫(k, k+m−n, m, n) for k ≤ `k_max` and the boosted basis norm
/// against n!m!. JSON text.
#[wasm_bindgen]
pub fn boost_row(n: u32, m: u32, beta: f64, k_max: u32) -> String {
    let rows: Vec<_> = (0..=k_max)
        .filter_map(|k| {
            let l = k as i64 + m as i64 - n as i64;
            (l >= 0).then(|| json!({"k": k, "l": l, "p": p_matrix_element(k, l as u32, m, n, beta)}))
        })
        .collect();
    let norm = boosted_basis_norm(n, m, beta, 40, 1e-12);
    json!({
        "rows": rows,
        "norm": norm.value,
        "expected": factorial_f64(n) * factorial_f64(m),
    })
    .to_string()
}

/// Exact ψ|n⟩ = √(q)·c |n+κ⟩ for the massless eigenfunction with energy
/// `eps_num/eps_den`. JSON text, or an error message.
#[wasm_bindgen]
pub fn eigen_fock(kappa: i32, eps_num: i32, eps_den: i32, n_max: u32) -> String {
    if eps_den == 0 || eps_num <= 0 || eps_den < 0 {
        return json!({"error": "ε must be a positive fraction"}).to_string();
    }
    let eps = BigRational::new(eps_num.into(), eps_den.into());
    let rows: Result<Vec<_>, _> = (0..=n_max)
        .map(|n| {
            eigenfunction_on_fock(kappa as i64, &eps, n, SeriesRule::Laguerre).map(|c| {
                json!({"n": n, "target": n as i64 + kappa as i64, "sqrt_arg": c.sqrt_arg.to_string(), "factor": c.factor.to_string()})
            })
        })
        .collect();
    match rows {
        Ok(r) => json!({"epsilon": eps.to_string(), "rows": r}).to_string(),
        Err(e) => json!({"error": e.to_string()}).to_string(),
    }
}
