//! Weighted blow-ups of germ families and their discrepancies.
//!
//! For a hypersurface germ `f = 0` in affine space and positive integer
//! weights `w` on the coordinates, the weighted blow-up at the origin has
//! exceptional discrepancy `sum(w) - wmult(f) - 1`, where `wmult` is the
//! minimal weighted degree of a term of `f`. A discrepancy of zero makes
//! the blow-up crepant, so canonicity of the germ is equivalent to
//! canonicity of the transformed threefold, which the chart transforms
//! below expose to direct inspection.

use super::{FamilyTerm, GermError, GermFamily};
use crate::poly::MPoly;

/// Discrepancy of the weighted blow-up at the origin: `sum(w) - wmult - 1`.
/// Parameters are generic, so every term of the family counts toward the
/// weighted multiplicity.
pub fn weighted_discrepancy(family: &GermFamily, weights: &[u32]) -> Result<i64, GermError> {
    let wmult = family.weighted_multiplicity(weights)?;
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    Ok(total as i64 - wmult as i64 - 1)
}

/// The chart of the weighted blow-up belonging to one variable.
///
/// In the chart of variable `v` with weights `w`, the substitution is
/// `x_i = u^{w_i} x_i'` for `i != v` and `x_v = u^{w_v}`, where `u` is the
/// chart coordinate (reusing the slot of `x_v`), followed by division by
/// `u^{wmult}`. On exponent vectors: every exponent stays, except that the
/// slot of `v` becomes `sum_j w_j e_j - wmult`, which is nonnegative by
/// minimality of `wmult`. Coefficients (and parameter identities) are
/// untouched, so the transform commutes with specialization.
pub fn weighted_blowup_chart(
    family: &GermFamily,
    weights: &[u32],
    chart: usize,
) -> Result<GermFamily, GermError> {
    if weights.len() != family.n_vars() || chart >= family.n_vars() {
        return Err(GermError::WrongArity {
            expected: family.n_vars(),
            found: weights.len().max(chart + 1),
        });
    }
    let wmult = family.weighted_multiplicity(weights)?;
    let terms = family
        .terms()
        .iter()
        .map(|t| {
            let wdeg: u64 = t
                .exps
                .iter()
                .zip(weights)
                .map(|(&e, &w)| e as u64 * w as u64)
                .sum();
            let mut exps = t.exps.clone();
            exps[chart] = u16::try_from(wdeg - wmult).expect("chart exponent fits");
            FamilyTerm {
                coeff: t.coeff.clone(),
                exps,
            }
        })
        .collect();
    Ok(GermFamily {
        vars: family.vars.clone(),
        n_params: family.n_params,
        terms,
    })
}

/// The same chart transform on an explicit polynomial (used on specialized
/// members before a finite-field scan).
pub fn weighted_chart_poly(
    poly: &MPoly,
    weights: &[u32],
    chart: usize,
) -> Result<MPoly, GermError> {
    if weights.len() != poly.n_vars() || chart >= poly.n_vars() {
        return Err(GermError::WrongArity {
            expected: poly.n_vars(),
            found: weights.len().max(chart + 1),
        });
    }
    let wmult = poly
        .weighted_min_degree(weights)
        .ok_or(GermError::ZeroPolynomial)?;
    let mut out = MPoly::zero(poly.n_vars());
    for (e, c) in poly.terms() {
        let wdeg: u64 = e
            .iter()
            .zip(weights)
            .map(|(&x, &w)| x as u64 * w as u64)
            .sum();
        let mut exps = e.clone();
        exps[chart] = u16::try_from(wdeg - wmult).expect("chart exponent fits");
        out = out.add(&MPoly::monomial(poly.n_vars(), &exps, c.clone()));
    }
    Ok(out)
}
