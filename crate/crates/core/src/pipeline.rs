//! The constant chain `ε̃ → C₁ → C₂ → C₃ → B₁ → B₂ → B₃ → B₄ → R`, the
//! Case 1 / Case 2 classification, the final-inequality solver, and the
//! audit report.
//!
//! Every constant carries both the stated value and an independently
//! recomputed one; wherever the two disagree the chain takes the
//! conservative side (the one demanding a larger `R`) and the report keeps a
//! note. The solver works in log space throughout, since the winding bound
//! `sinh(½Rℓ)/4ℓ` overflows `f64` for every realistic `R`.
//!
//! The final inequality is solved with the stated closed-form `ℤ_N` bound
//! `e^{√ln N} + √ln N − 1`, which grows superpolynomially in `ℓ` and admits a
//! dominance threshold. The corrected bound `min_k (N^{1/k} + k − 1)` grows
//! only linearly in `ln N`, so no finite `R` can beat the polynomial
//! triangle budget under it; the report demonstrates this with an explicit
//! witness instead of silently weakening the audit.

use crate::abelian_bound::{self, presented_group, AbelianInvariants, IntMatrix};
use crate::hyp3::{self, ln_sinh, MargulisConfig};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::{E, LN_2, PI};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    /// Winding bound requires `C > C₃`.
    ConstantBelowC3 { c: f64, c3: f64 },
    EllTooSmall(u64),
    /// No R below the search cap satisfied every certificate.
    NoFiniteR { cap: f64 },
    /// The dominance threshold search ran past its window.
    DominanceNotReached { ell_limit: u64 },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConstantBelowC3 { c, c3 } => write!(f, "need C > C3 = {c3}, got {c}"),
            Self::EllTooSmall(l) => write!(f, "ell_min must be at least 1, got {l}"),
            Self::NoFiniteR { cap } => write!(f, "no finite R found below cap {cap}"),
            Self::DominanceNotReached { ell_limit } => {
                write!(f, "dominance threshold not reached by ell = {ell_limit}")
            }
        }
    }
}

impl std::error::Error for PipelineError {}

// ---------------------------------------------------------------------------
// Individual operations
// ---------------------------------------------------------------------------

/// Both variants of the winding-number bound for the embedded loop mapping
/// to a power `[γ]^N` of the core.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindingBound {
    /// `sinh(½Cℓ)/(4ℓ)` — the variant the chained inequalities support.
    pub conservative: f64,
    /// `sinh(Cℓ)/(4ℓ)` as stated.
    pub stated: f64,
    pub ln_conservative: f64,
    pub ln_stated: f64,
}

pub fn winding_number_bound(c: f64, ell_p: f64, c3: f64) -> Result<WindingBound, PipelineError> {
    if c.is_nan() || c <= c3 {
        return Err(PipelineError::ConstantBelowC3 { c, c3 });
    }
    let ln_cons = ln_sinh(0.5 * c * ell_p) - (4.0 * ell_p).ln();
    let ln_stated = ln_sinh(c * ell_p) - (4.0 * ell_p).ln();
    Ok(WindingBound {
        conservative: ln_cons.exp(),
        stated: ln_stated.exp(),
        ln_conservative: ln_cons,
        ln_stated,
    })
}

/// `H₁` structure of the disc-attached complex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CaseClassification {
    /// `ℤ ⊕ ℤ`: the contradiction branch (Case 1); cannot occur for a
    /// closed hyperbolic manifold.
    Case1ZxZ,
    /// `ℤ`: Case 2 with trivial torsion.
    Case2Z,
    /// `ℤ ⊕ ℤ_r`: Case 2 with torsion order `r`.
    Case2ZxZr { r: u64 },
    /// Anything else; reported as-is for off-pipeline inputs.
    Other { free_rank: usize, torsion: Vec<u64> },
}

pub fn classify_case(attachment: &IntMatrix) -> CaseClassification {
    let inv: AbelianInvariants = presented_group(attachment);
    let torsion: Vec<u64> =
        inv.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect();
    match (inv.free_rank, torsion.as_slice()) {
        (2, []) => CaseClassification::Case1ZxZ,
        (1, []) => CaseClassification::Case2Z,
        (1, [r]) => CaseClassification::Case2ZxZr { r: *r },
        _ => CaseClassification::Other { free_rank: inv.free_rank, torsion },
    }
}

/// Triangle budgets for the disc-attached complex, both exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangulationBudget {
    /// `B₁²·B₃·ℓ⁸` (proof count for the kernel-disc coning).
    pub ell8: f64,
    /// `B₄·ℓ⁶` (the later statement).
    pub ell6: f64,
    /// `max(ell8, ell6)`; the audit compares against the larger.
    pub conservative: f64,
}

pub fn triangulation_budget(ell_p: u64, b1: f64, b3: f64) -> TriangulationBudget {
    let b2 = b1 + 6.0;
    let b4 = b2 + b3;
    let l = ell_p as f64;
    let ell8 = b1 * b1 * b3 * l.powi(8);
    let ell6 = b4 * l.powi(6);
    TriangulationBudget { ell8, ell6, conservative: ell8.max(ell6) }
}

/// `vol(M) < π·ℓ(P)`.
pub fn cooper_volume_bound(ell_p: u64) -> f64 {
    PI * ell_p as f64
}

// ---------------------------------------------------------------------------
// Report structures
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEntry {
    /// Value as stated, when the source states one.
    pub paper_stated: Option<f64>,
    /// Independently recomputed value.
    pub recomputed: f64,
    /// The value the rest of the chain uses (the conservative side).
    pub chain_value: f64,
    pub discrepancy_notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateRow {
    pub ell: u64,
    /// Closed-form `ℤ_N` bound at `N = ⌊sinh(½Rℓ)/4ℓ⌋` (lower-bounded
    /// through the `N/2` floor slack).
    pub lhs: f64,
    /// `3 ×` conservative triangle budget.
    pub rhs: f64,
    /// `ln lhs − ln rhs`; positive means the row certifies.
    pub ln_margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominanceCertificate {
    /// Rows were checked for every `ℓ ∈ [ell_min, ell_star]`; beyond it the
    /// derivative condition takes over.
    pub ell_star: u64,
    /// `s(ℓ*) = √(ln N(ℓ*) − ln 2)`, a lower bound for `ln lhs`.
    pub s_at_star: f64,
    /// `t(ℓ*) = ln rhs(ℓ*)`.
    pub t_at_star: f64,
    /// `s − t ≥ ln 4` at `ℓ*`.
    pub margin_ok: bool,
    /// `(½Rℓ − 1) ≥ 16·√(½Rℓ)` at `ℓ*` (monotone in `ℓ`), which makes
    /// `s − t` nondecreasing past `ℓ*`.
    pub derivative_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectedBoundAudit {
    /// Some `ℓ` at which the corrected bound loses to the triangle budget.
    pub witness_ell: u64,
    /// `min_k (N^{1/k} + k − 1)` at the witness.
    pub corrected_lhs: f64,
    /// `3 ×` conservative budget at the witness.
    pub rhs: f64,
    /// Whether the final inequality is satisfiable for all `ℓ` under the
    /// corrected bound (it is not: the bound is ≤ ln N + e − 1, linear in
    /// `ℓ`, against a degree-8 polynomial).
    pub feasible_for_all_ell: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub epsilon_tilde: f64,
    pub ell_min: u64,
    pub c1: ConstantEntry,
    pub c2: ConstantEntry,
    pub c3: ConstantEntry,
    pub b1: ConstantEntry,
    pub b2: ConstantEntry,
    pub b3: ConstantEntry,
    pub b4: ConstantEntry,
    pub r: ConstantEntry,
    pub certificate: Vec<CertificateRow>,
    pub dominance: DominanceCertificate,
    pub corrected_zn_audit: CorrectedBoundAudit,
    /// Meridian bound exceeds `2πℓ` at `C₃` for every `ℓ ∈ [1, 10⁴]`.
    pub meridian_comparison_ok: bool,
    /// Lower end of the boundary-area sandwich, `½ vol B(ε̃/2)`; the upper
    /// end is `2πℓ(P)` via the volume bound.
    pub half_ball_area_lower: f64,
    /// Audit flags that do not attach to a single constant.
    pub general_notes: Vec<String>,
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

/// `ln N(R, ℓ)` for the conservative winding bound `N = sinh(½Rℓ)/(4ℓ)`.
fn ln_n(r: f64, ell: f64) -> f64 {
    ln_sinh(0.5 * r * ell) - (4.0 * ell).ln()
}

/// Closed-form `ℤ_N` bound evaluated below `⌊N⌋` via the `N/2` slack.
fn paper_lhs(ln_n_val: f64) -> Option<f64> {
    if ln_n_val < LN_2 {
        return None; // N < 2: no torsion bound available
    }
    Some(abelian_bound::zn_bound_paper_form_from_ln(ln_n_val - LN_2))
}

struct ChainValues {
    c3: f64,
    b1: f64,
    b3: f64,
}

/// Per-ℓ certificate check at a given `R`. Returns the row when `N ≥ 2`.
fn certificate_row(r: f64, ell: u64, chain: &ChainValues) -> Option<CertificateRow> {
    let ln_nv = ln_n(r, ell as f64);
    let lhs = paper_lhs(ln_nv)?;
    let rhs = 3.0 * triangulation_budget(ell, chain.b1, chain.b3).conservative;
    Some(CertificateRow { ell, lhs, rhs, ln_margin: lhs.ln() - rhs.ln() })
}

/// Dominance threshold: smallest `ℓ ≥ ell_min` where both the `ln 4` margin
/// and the derivative condition hold.
fn dominance_threshold(
    r: f64,
    ell_min: u64,
    chain: &ChainValues,
) -> Result<(u64, DominanceCertificate), PipelineError> {
    let limit = ell_min + 10_000;
    let mut ell = ell_min;
    while ell <= limit {
        let l = ell as f64;
        let lam = ln_n(r, l) - LN_2;
        if lam > 0.0 {
            let s = lam.sqrt();
            let t = (3.0 * triangulation_budget(ell, chain.b1, chain.b3).conservative).ln();
            let u = (0.5 * r * l).sqrt();
            let derivative_ok = 0.5 * r * l - 1.0 >= 16.0 * u;
            let margin_ok = s - t >= 4f64.ln();
            if margin_ok && derivative_ok {
                return Ok((
                    ell,
                    DominanceCertificate {
                        ell_star: ell,
                        s_at_star: s,
                        t_at_star: t,
                        margin_ok,
                        derivative_ok,
                    },
                ));
            }
        }
        ell += 1;
    }
    Err(PipelineError::DominanceNotReached { ell_limit: limit })
}

/// Does `R` certify the final inequality for every `ℓ ≥ ell_min`?
fn certifies(r: f64, ell_min: u64, chain: &ChainValues) -> bool {
    let Ok((ell_star, _)) = dominance_threshold(r, ell_min, chain) else {
        return false;
    };
    for ell in ell_min..=ell_star {
        match certificate_row(r, ell, chain) {
            Some(row) if row.lhs > row.rhs => {}
            _ => return false,
        }
    }
    true
}

const R_SEARCH_CAP: f64 = 1e12;

/// Solve the constant chain and the final inequality; assemble the audit.
pub fn solve_r(cfg: MargulisConfig, ell_min: u64) -> Result<ConstantsReport, PipelineError> {
    if ell_min < 1 {
        return Err(PipelineError::EllTooSmall(ell_min));
    }
    let eps = cfg.epsilon_tilde;

    // C₁: stated constant 2ε̃(π+2)/vol B(ε̃/4); the covering argument
    // actually yields a quarter of it (ball diameter ε̃/2, not 2ε̃).
    let c1_stated = hyp3::c1(cfg);
    let c1 = ConstantEntry {
        paper_stated: Some(c1_stated),
        recomputed: hyp3::c1_recomputed(cfg),
        chain_value: c1_stated,
        discrepancy_notes: "covering balls have diameter eps/2, not 2*eps; the stated \
                            constant is 4x the recomputed one and the chain keeps the \
                            larger (conservative) value"
            .to_string(),
    };

    // C₂: least constant clearing C₁ + 1 with the hemisphere half-ball slack
    // tanh(C/2 − ε̃) ≥ ½, enforced with a unit artifact margin.
    let c_hemi = 2.0 * (0.5f64.atanh() + eps);
    let margin = (c_hemi - (c1.chain_value + 1.0)).max(1.0);
    let c2_value = c1.chain_value + 1.0 + margin;
    let c2 = ConstantEntry {
        paper_stated: None,
        recomputed: c2_value,
        chain_value: c2_value,
        discrepancy_notes: format!(
            "existence-only in the source; fixed as C1 + 1 + max(1, {c_hemi:.6} - (C1+1)) \
             so the half-ball slack condition tanh(C/2 - eps) >= 1/2 holds"
        ),
    };

    // C₃: least constant ≥ C₂ + 1 making 2π sinh(½Cℓ) > 2πℓ for all ℓ ≥ 1;
    // any C ≥ 3 suffices since sinh grows faster than the identity.
    let c3_value = (c2.chain_value + 1.0).max(3.0);
    let meridian_comparison_ok =
        (1..=10_000u64).all(|l| hyp3::meridian_exceeds_boundary(c3_value, l as f64));
    let c3 = ConstantEntry {
        paper_stated: None,
        recomputed: c3_value,
        chain_value: c3_value,
        discrepancy_notes: "existence-only in the source; fixed as max(C2 + 1, 3), which \
                            makes the meridian bound exceed the boundary length bound for \
                            every ell >= 1"
            .to_string(),
    };

    // B₁: stated 128π²/ε̃² + 3, recomputed 512π²/ε̃² + 3 (the spine length is
    // 4πℓ, so the rank bound contributes 32·(4π)² = 512π²).
    let b1_stated = 128.0 * PI * PI / (eps * eps) + 3.0;
    let b1_recomputed = 512.0 * PI * PI / (eps * eps) + 3.0;
    let b1 = ConstantEntry {
        paper_stated: Some(b1_stated),
        recomputed: b1_recomputed,
        chain_value: b1_recomputed,
        discrepancy_notes: "stated coefficient 128 does not match the proof's \
                            32·(4π)² = 512; the chain keeps the larger recomputed value"
            .to_string(),
    };

    // B₂ = B₁ + 6, B₃ = 512π²B₂²/(3ε̃²), B₄ = B₂ + B₃ — formulas agreed, the
    // disagreement is inherited from B₁.
    let b2 = ConstantEntry {
        paper_stated: Some(b1_stated + 6.0),
        recomputed: b1.chain_value + 6.0,
        chain_value: b1.chain_value + 6.0,
        discrepancy_notes: "B2 = B1 + 6; the proof's closing display l^2 + 3l drops the \
                            B1 factor and is ignored"
            .to_string(),
    };
    let b3_of = |b2v: f64| 512.0 * PI * PI * b2v * b2v / (3.0 * eps * eps);
    let b3 = ConstantEntry {
        paper_stated: Some(b3_of(b1_stated + 6.0)),
        recomputed: b3_of(b2.chain_value),
        chain_value: b3_of(b2.chain_value),
        discrepancy_notes: "B3 = 512*pi^2*B2^2/(3*eps^2) on both sides; values differ \
                            only through B1"
            .to_string(),
    };
    let b4 = ConstantEntry {
        paper_stated: Some(b1_stated + 6.0 + b3_of(b1_stated + 6.0)),
        recomputed: b2.chain_value + b3.chain_value,
        chain_value: b2.chain_value + b3.chain_value,
        discrepancy_notes: "B4 = B2 + B3".to_string(),
    };

    let chain = ChainValues { c3: c3.chain_value, b1: b1.chain_value, b3: b3.chain_value };

    // Minimal R certifying the final inequality (stated-form Z_N bound),
    // ignoring the C₃ floor, by doubling plus bisection; then apply the
    // floor R > C₃.
    let mut hi = 16f64.max(chain.c3 + 1.0);
    while !certifies(hi, ell_min, &chain) {
        hi *= 2.0;
        if hi > R_SEARCH_CAP {
            return Err(PipelineError::NoFiniteR { cap: R_SEARCH_CAP });
        }
    }
    let mut lo = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if certifies(mid, ell_min, &chain) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r_cert = hi;
    let r_value = (chain.c3 + 1.0).max(r_cert);

    // Certificate rows at the emitted R, through the dominance threshold
    // (at least ten rows for the audit trail).
    let (ell_star, dominance) = dominance_threshold(r_value, ell_min, &chain)?;
    let mut certificate = Vec::new();
    for ell in ell_min..=ell_star.max(ell_min + 9) {
        if let Some(row) = certificate_row(r_value, ell, &chain) {
            certificate.push(row);
        }
    }
    debug_assert!(certificate.iter().all(|row| row.lhs > row.rhs));

    // Corrected-bound audit: the certified minimum-over-k bound cannot beat
    // the degree-8 budget for all ℓ at any R. Exhibit a witness ℓ where
    // even the upper bound ln N + e − 1 ≥ min_k h(k) loses.
    let corrected = corrected_bound_audit(r_value, ell_min, &chain);

    let r = ConstantEntry {
        paper_stated: None,
        recomputed: r_value,
        chain_value: r_value,
        discrepancy_notes: format!(
            "artifact-derived: max(C3 + 1, minimal R certifying the stated-form \
             inequality = {r_cert:.6}); no numeric R is stated in the source, and under \
             the corrected Z_N bound no finite R exists (see corrected_zn_audit)"
        ),
    };

    Ok(ConstantsReport {
        epsilon_tilde: eps,
        ell_min,
        c1,
        c2,
        c3,
        b1,
        b2,
        b3,
        b4,
        r,
        certificate,
        dominance,
        corrected_zn_audit: corrected,
        meridian_comparison_ok,
        half_ball_area_lower: 0.5 * hyp3::ball_volume(eps / 2.0).expect("eps > 0"),
        general_notes: vec![
            "deep-tube conclusion appears in two variants ((C-C1) vs (C-1), with and \
             without the 1/2); the implementation keeps the weakest, diam(V) >= \
             (1/2)(C-1)*ell"
                .to_string(),
            "graph rank bound: the proof's ball count (m = 5N/eps) does not match its \
             closing display ((8N/eps)^2/2); only the stated 32N^2/eps^2 is certified"
                .to_string(),
        ],
    })
}

fn corrected_bound_audit(r: f64, ell_min: u64, chain: &ChainValues) -> CorrectedBoundAudit {
    // Find a witness ℓ where λ(ℓ) + e − 1 (an upper bound for the corrected
    // min-over-k bound via k = ⌈λ⌉) drops below the budget.
    let mut witness = ell_min;
    loop {
        let lam = ln_n(r, witness as f64);
        let upper = lam + E - 1.0;
        let rhs = 3.0 * triangulation_budget(witness, chain.b1, chain.b3).conservative;
        if upper <= rhs || witness > ell_min + 1_000_000 {
            break;
        }
        witness = (witness * 2).max(witness + 1);
    }
    let lam = ln_n(r, witness as f64);
    let (corrected_lhs, _) = abelian_bound::zn_bound_from_ln(lam - LN_2);
    let rhs = 3.0 * triangulation_budget(witness, chain.b1, chain.b3).conservative;
    CorrectedBoundAudit {
        witness_ell: witness,
        corrected_lhs,
        rhs,
        feasible_for_all_ell: false,
        note: format!(
            "the certified bound min_k(N^(1/k)+k-1) is at most ln N + e - 1, i.e. linear \
             in ell, while the triangle budget grows like ell^8; at ell = {witness} the \
             corrected bound {corrected_lhs:.3e} is below the budget {rhs:.3e}, and the \
             same happens for every R, so the stated theorem cannot be recovered from \
             the corrected bound with these budgets"
        ),
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Machine-readable report with stable keys.
pub fn to_json(report: &ConstantsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Human-readable report.
pub fn to_text(report: &ConstantsReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("constants audit (epsilon_tilde = {})", report.epsilon_tilde));
    push(&mut out, format!("ell_min = {}", report.ell_min));
    push(&mut out, String::new());
    push(
        &mut out,
        format!("{:<4} {:>24} {:>24} {:>24}", "", "paper_stated", "recomputed", "chain_value"),
    );
    let row = |name: &str, e: &ConstantEntry| -> String {
        let stated = e
            .paper_stated
            .map_or_else(|| "-".to_string(), |v| format!("{v:.9e}"));
        format!("{:<4} {:>24} {:>24.9e} {:>24.9e}", name, stated, e.recomputed, e.chain_value)
    };
    push(&mut out, row("C1", &report.c1));
    push(&mut out, row("C2", &report.c2));
    push(&mut out, row("C3", &report.c3));
    push(&mut out, row("B1", &report.b1));
    push(&mut out, row("B2", &report.b2));
    push(&mut out, row("B3", &report.b3));
    push(&mut out, row("B4", &report.b4));
    push(&mut out, row("R", &report.r));
    push(&mut out, String::new());
    push(&mut out, "notes:".to_string());
    for (name, e) in [
        ("C1", &report.c1),
        ("C2", &report.c2),
        ("C3", &report.c3),
        ("B1", &report.b1),
        ("B2", &report.b2),
        ("B3", &report.b3),
        ("B4", &report.b4),
        ("R", &report.r),
    ] {
        if !e.discrepancy_notes.is_empty() {
            push(&mut out, format!("  {name}: {}", e.discrepancy_notes));
        }
    }
    push(&mut out, String::new());
    push(
        &mut out,
        format!(
            "certificate rows (lhs = closed-form Z_N bound, rhs = 3x triangle budget), \
             ell in [{}, {}]:",
            report.ell_min,
            report.certificate.last().map_or(report.ell_min, |r| r.ell)
        ),
    );
    for rrow in &report.certificate {
        push(
            &mut out,
            format!(
                "  ell = {:<6} lhs = {:>14.6e}  rhs = {:>14.6e}  ln-margin = {:+.3}",
                rrow.ell, rrow.lhs, rrow.rhs, rrow.ln_margin
            ),
        );
    }
    push(
        &mut out,
        format!(
            "dominance: ell* = {}, s = {:.3}, t = {:.3}, margin_ok = {}, derivative_ok = {}",
            report.dominance.ell_star,
            report.dominance.s_at_star,
            report.dominance.t_at_star,
            report.dominance.margin_ok,
            report.dominance.derivative_ok
        ),
    );
    push(
        &mut out,
        format!("meridian comparison at C3 over ell in [1,10^4]: {}", report.meridian_comparison_ok),
    );
    push(
        &mut out,
        format!(
            "boundary-area sandwich: {:.6e} <= Area(dV) <= 2*pi*ell  (vol(M) < pi*ell)",
            report.half_ball_area_lower
        ),
    );
    push(&mut out, String::new());
    push(&mut out, "corrected Z_N bound audit:".to_string());
    push(&mut out, format!("  {}", report.corrected_zn_audit.note));
    if !report.general_notes.is_empty() {
        push(&mut out, String::new());
        push(&mut out, "general audit notes:".to_string());
        for n in &report.general_notes {
            push(&mut out, format!("  - {n}"));
        }
    }
    out
}
