//! Browser bindings for three interactive views: the flat-torus short-basis
//! construction, the `ℤ_N` presentation-length bound, and the full constant
//! chain. Each export returns a JSON string; `www/index.html` renders them
//! on plain canvases.

use diambound::abelian_bound;
use diambound::flat_torus::{self, FlatTorus, TorusClass};
use diambound::hyp3::MargulisConfig;
use diambound::pipeline;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(message: String) -> String {
    json!({ "error": message }).to_string()
}

/// Short basis, certificate, and intersection data for the lattice spanned
/// by `(ux, uy)` and `(vx, vy)`.
pub fn torus_report_string(ux: f64, uy: f64, vx: f64, vy: f64) -> String {
    let torus = match FlatTorus::new([ux, uy], [vx, vy]) {
        Ok(t) => t,
        Err(e) => return err_json(e.to_string()),
    };
    let basis = match flat_torus::short_basis(&torus) {
        Ok(b) => b,
        Err(e) => return err_json(e.to_string()),
    };
    let cert = flat_torus::short_basis_certificate(&torus, &basis);
    let spacing = torus.area() / basis.x_length;
    // A sample essential class for the coefficient-bound view.
    let sample = TorusClass::new(2, 3);
    let coeffs = flat_torus::class_coefficients(
        &torus,
        &basis,
        torus.class_length(sample),
        sample,
    )
    .ok()
    .map(|c| {
        json!({
            "class": [sample.a, sample.b],
            "a": c.a,
            "b": c.b,
            "bound_lhs": c.bound.lhs,
            "bound_rhs": c.bound.rhs,
            "holds": c.bound.holds(1e-9),
        })
    });
    json!({
        "area": torus.area(),
        "systole": basis.x_length,
        "x": { "coeffs": [basis.x.a, basis.x.b], "vec": torus.vector(basis.x), "length": basis.x_length },
        "y": { "coeffs": [basis.y.a, basis.y.b], "vec": torus.vector(basis.y), "length": basis.y_length },
        "certificate": { "lhs": cert.lhs, "rhs": cert.rhs, "holds": cert.holds(1e-9) },
        "adjacent_line_spacing": spacing,
        "spacing_bound": 3f64.sqrt() / 2.0 * basis.x_length,
        "coefficients_example": coeffs,
    })
    .to_string()
}

/// `h(k)` curve and both bound variants for `ℤ_N`, with the exhaustive
/// oracle for small `N`.
pub fn zn_report_string(n: u64) -> String {
    let bound = match abelian_bound::zn_length_lower_bound(n) {
        Ok(b) => b,
        Err(e) => return err_json(e.to_string()),
    };
    let curve: Vec<_> = abelian_bound::zn_bound_curve(n, 40)
        .into_iter()
        .filter(|(_, h)| h.is_finite())
        .map(|(k, h)| json!([k, h]))
        .collect();
    let oracle = if n <= 400 {
        abelian_bound::brute_force_min_length(n, 2, 12).ok().flatten()
    } else {
        None
    };
    json!({
        "n": n,
        "primary": bound.primary,
        "argmin_k": bound.argmin_k,
        "paper_variant": bound.paper_variant,
        "paper_variant_overclaims": bound.paper_variant_overclaims,
        "curve": curve,
        "oracle": oracle,
    })
    .to_string()
}

/// Full constant-chain report.
pub fn constants_report_string(epsilon: f64, ell_min: u64) -> String {
    let cfg = match MargulisConfig::new(epsilon) {
        Ok(c) => c,
        Err(e) => return err_json(e.to_string()),
    };
    match pipeline::solve_r(cfg, ell_min) {
        Ok(report) => pipeline::to_json(&report),
        Err(e) => err_json(e.to_string()),
    }
}

#[wasm_bindgen]
pub fn torus_report(ux: f64, uy: f64, vx: f64, vy: f64) -> String {
    torus_report_string(ux, uy, vx, vy)
}

#[wasm_bindgen]
pub fn zn_report(n: u64) -> String {
    zn_report_string(n)
}

#[wasm_bindgen]
pub fn constants_report(epsilon: f64, ell_min: u64) -> String {
    constants_report_string(epsilon, ell_min)
}
