//! Exact recognition of simple surface singularities from plane germs.
//!
//! A surface germ `x^2 + f(y, z) = 0` is a rational double point exactly
//! when the plane germ `f` is simple, and the labels agree: `A_k` for
//! `y^2 + z^{k+1}`, `D_k` for `y^2 z + z^{k-1}`, and `E6/E7/E8` for
//! `y^3 + z^4`, `y^3 + y z^3`, `y^3 + z^5`. The recognizer works with exact
//! rational coefficients and decides the label from vanishing orders along
//! critical branches, computed by Newton iteration on truncated polynomials;
//! everything below the truncation cap is exact, so every `A`/`D` index it
//! reports is certified, `NOT_SIMPLE` is certified, and anything the cap
//! cannot separate is reported as undetermined rather than guessed.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::GermError;
use crate::poly::MPoly;

/// Total-degree cap for the truncated series computations. Orders at or
/// below the cap are exact.
pub const SERIES_CAP: u32 = 24;

/// Largest `A_k` index the recognizer will certify.
pub const A_CAP: u32 = 19;

/// Largest `D_k` index the recognizer will certify.
pub const D_CAP: u32 = 19;

/// A simple (Du Val) singularity label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl std::fmt::Display for AdeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeType::A(k) => write!(f, "A{k}"),
            AdeType::D(k) => write!(f, "D{k}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

impl Serialize for AdeType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Outcome of the recognizer on a singular plane germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdeOutcome {
    /// The germ is simple of the given type (certified).
    Simple(AdeType),
    /// The germ is certifiably not simple.
    NotSimple,
    /// The truncation cap cannot separate the remaining candidates.
    Undetermined,
}

impl std::fmt::Display for AdeOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeOutcome::Simple(t) => write!(f, "{t}"),
            AdeOutcome::NotSimple => write!(f, "NOT_SIMPLE"),
            AdeOutcome::Undetermined => write!(f, "UNDETERMINED"),
        }
    }
}

impl Serialize for AdeOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Classify a plane germ in `(y, z)` with rational coefficients.
///
/// Errors when the polynomial is zero, has a constant term, or is smooth at
/// the origin; those are precondition failures, not classifications.
pub fn ade_type(germ: &MPoly) -> Result<AdeOutcome, GermError> {
    if germ.n_vars() != 2 {
        return Err(GermError::WrongArity {
            expected: 2,
            found: germ.n_vars(),
        });
    }
    let mult = germ.min_total_degree().ok_or(GermError::ZeroPolynomial)?;
    match mult {
        0 => Err(GermError::NotOnDivisor),
        1 => Err(GermError::NotSingular { mult: 1 }),
        2 => Ok(corank_one_path(germ)),
        3 => Ok(cubic_path(germ)),
        _ => Ok(AdeOutcome::NotSimple),
    }
}

/// Multiplicity-two germs: `A_1` when the quadratic part is nondegenerate,
/// otherwise `A_k` with `k + 1` the vanishing order of the germ along the
/// critical branch of the squared variable.
fn corank_one_path(germ: &MPoly) -> AdeOutcome {
    let q = germ.homogeneous_part(2);
    let a = q.coeff(&[2, 0]);
    let b = q.coeff(&[1, 1]);
    let c = q.coeff(&[0, 2]);
    let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
    if !disc.is_zero() {
        return AdeOutcome::Simple(AdeType::A(1));
    }
    // Rank one: align the square with y (one of a, c is nonzero, else the
    // quadratic part would vanish entirely).
    let aligned = if !a.is_zero() { germ.clone() } else { swap_vars(germ) };
    match morse_residual_order(&aligned) {
        Some(ord) => {
            debug_assert!(ord >= 3, "degenerate quadratic forces order >= 3");
            let k = ord - 1;
            if k <= A_CAP {
                AdeOutcome::Simple(AdeType::A(k))
            } else {
                AdeOutcome::Undetermined
            }
        }
        None => AdeOutcome::Undetermined,
    }
}

/// Multiplicity-three germs, split by the root structure of the cubic part:
/// three distinct roots give `D_4`; a double root leads to the `D_k` series;
/// a triple root to the exceptional types.
fn cubic_path(germ: &MPoly) -> AdeOutcome {
    let c3 = germ.homogeneous_part(3);
    let a = c3.coeff(&[3, 0]);
    let b = c3.coeff(&[2, 1]);
    let c = c3.coeff(&[1, 2]);
    let d = c3.coeff(&[0, 3]);
    let disc = cubic_discriminant(&a, &b, &c, &d);
    if !disc.is_zero() {
        return AdeOutcome::Simple(AdeType::D(4));
    }
    // The Hessian of a binary cubic vanishes identically exactly for a
    // perfect cube.
    let hessian = c3
        .derivative(0)
        .derivative(0)
        .mul(&c3.derivative(1).derivative(1))
        .sub(&c3.derivative(0).derivative(1).mul(&c3.derivative(0).derivative(1)));
    if hessian.is_zero() {
        triple_root_path(germ, &a, &b, &d)
    } else {
        double_root_path(germ, &a, &b, &c, &d)
    }
}

fn cubic_discriminant(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> BigRational {
    let n = |k: i64| BigRational::from_integer(k.into());
    n(18) * a * b * c * d - n(4) * b * b * b * d + b * b * c * c
        - n(4) * a * c * c * c
        - n(27) * a * a * d * d
}

/// The `D_k` series: normalize the cubic to `y^2 (alpha y + beta z)`, absorb
/// the `z`-free part into a branch `z = tau(y)`, divide by `z`, and read off
/// `k - 2` as the Morse residual order of the quotient.
fn double_root_path(
    germ: &MPoly,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> AdeOutcome {
    // The repeated linear factor ell of the cubic; rational because it is
    // the root of the gcd with the derivative.
    let normalized = if !a.is_zero() {
        let u0 = repeated_cubic_root(a, b, c, d);
        // ell = y - u0 z; substitute y -> y + u0 z so ell becomes y.
        shear(germ, &u0)
    } else if !b.is_zero() {
        // Cubic is z (b y^2 + c y z + d z^2) with the quadratic a square.
        let u0 = -c / (BigRational::from_integer(2.into()) * b);
        shear(germ, &u0)
    } else {
        // Cubic is z^2 (c y + d z); the double line is z.
        swap_vars(germ)
    };
    // After the shear the cubic must be y^2 (alpha y + beta z): the double
    // line is y, so the y z^2 and z^3 coefficients vanish and beta does not.
    let cubic = normalized.homogeneous_part(3);
    debug_assert!(cubic.coeff(&[1, 2]).is_zero() && cubic.coeff(&[0, 3]).is_zero());
    debug_assert!(!cubic.coeff(&[2, 1]).is_zero(), "double root normalization failed");

    // Kill the z-free part by the branch z = tau(y) with tau of order >= 1.
    let tau = match newton_branch(&normalized) {
        Some(t) => t,
        None => return AdeOutcome::Undetermined,
    };
    let shift = MPoly::var(2, 1).add(&tau);
    let shifted = normalized.substitute_poly(1, &shift, Some(SERIES_CAP));
    debug_assert!(
        shifted.terms().all(|(e, _)| e[1] >= 1),
        "branch shift must remove the z-free part below the cap"
    );
    let quotient = divide_by_var(&shifted, 1);
    // The quotient has rank-one quadratic part beta y^2 exactly.
    let quad = quotient.homogeneous_part(2);
    debug_assert!(quad.coeff(&[1, 1]).is_zero() && quad.coeff(&[0, 2]).is_zero());
    debug_assert!(!quad.coeff(&[2, 0]).is_zero());
    match morse_residual_order(&quotient) {
        Some(m) => {
            debug_assert!(m >= 3, "a double (not triple) root forces order >= 3");
            let k = m + 2;
            if k <= D_CAP {
                AdeOutcome::Simple(AdeType::D(k))
            } else {
                AdeOutcome::Undetermined
            }
        }
        None => AdeOutcome::Undetermined,
    }
}

/// The exceptional types: normalize the cubic to `kappa y^3`, move the
/// inflection locus to `y = 0`, and decide from the vanishing orders of the
/// restriction and its first `y`-derivative along `y = 0`.
fn triple_root_path(germ: &MPoly, a: &BigRational, b: &BigRational, d: &BigRational) -> AdeOutcome {
    let normalized = if !a.is_zero() {
        // kappa (y + q z)^3 with q = b / (3a).
        let q = b / (BigRational::from_integer(3.into()) * a);
        shear(germ, &(-q))
    } else {
        debug_assert!(!d.is_zero(), "a vanishing cubic part contradicts multiplicity 3");
        swap_vars(germ)
    };
    debug_assert!(
        normalized.homogeneous_part(3).n_terms() == 1,
        "triple root normalization must leave kappa y^3 alone"
    );
    // Solve d^2 f / dy^2 = 0 for y = phi(z) and recentre.
    let dy = normalized.derivative(0);
    let phi = match newton_critical(&dy) {
        Some(p) => p,
        None => return AdeOutcome::Undetermined,
    };
    let recentred = normalized.substitute_poly(0, &MPoly::var(2, 0).add(&phi), Some(SERIES_CAP));
    let c_hat = recentred.substitute(0, &BigRational::zero());
    let b_hat = recentred.derivative(0).substitute(0, &BigRational::zero());
    let ord_c = c_hat.min_total_degree();
    let ord_b = b_hat.min_total_degree();
    debug_assert!(ord_c.map_or(true, |o| o >= 4));
    debug_assert!(ord_b.map_or(true, |o| o >= 3));
    if ord_c == Some(4) {
        AdeOutcome::Simple(AdeType::E6)
    } else if ord_b == Some(3) {
        AdeOutcome::Simple(AdeType::E7)
    } else if ord_c == Some(5) {
        AdeOutcome::Simple(AdeType::E8)
    } else {
        // Restriction of order >= 6 and derivative of order >= 4: beyond
        // the exceptional range, certifiably not simple.
        AdeOutcome::NotSimple
    }
}

/// `f(y, z) -> f(z, y)`.
fn swap_vars(p: &MPoly) -> MPoly {
    let m = vec![
        vec![BigRational::zero(), BigRational::one()],
        vec![BigRational::one(), BigRational::zero()],
    ];
    p.linear_change(&m)
}

/// `f(y, z) -> f(y + u0 z, z)`.
fn shear(p: &MPoly, u0: &BigRational) -> MPoly {
    let m = vec![
        vec![BigRational::one(), u0.clone()],
        vec![BigRational::zero(), BigRational::one()],
    ];
    p.linear_change(&m)
}

/// The repeated root of a rational cubic `a u^3 + b u^2 + c u + d` with
/// vanishing discriminant and a nonzero leading coefficient, via the gcd
/// with the derivative.
fn repeated_cubic_root(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> BigRational {
    let p = vec![d.clone(), c.clone(), b.clone(), a.clone()];
    let dp = vec![
        c.clone(),
        BigRational::from_integer(2.into()) * b,
        BigRational::from_integer(3.into()) * a,
    ];
    let r1 = poly_rem(&p, &dp);
    assert!(
        !r1.is_empty(),
        "derivative divides the cubic only for a triple root"
    );
    if r1.len() == 2 {
        let r2 = poly_rem(&dp, &r1);
        assert!(r2.is_empty(), "vanishing discriminant forces a linear gcd");
        -&r1[0] / &r1[1]
    } else {
        unreachable!("gcd of a cubic with a double root and its derivative is linear");
    }
}

/// Remainder of dense univariate division (coefficients by ascending
/// power); trailing zeros are trimmed, and an empty vector is the zero
/// remainder.
fn poly_rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    while r.len() > dd {
        let k = r.len() - 1;
        let factor = r[k].clone() / lead;
        for i in 0..=dd {
            let idx = k - dd + i;
            let sub = &factor * &den[i];
            r[idx] -= sub;
        }
        r.pop();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Inverse of a unit univariate series in the given variable, truncated at
/// `SERIES_CAP`.
fn series_inverse(u: &MPoly, var: usize) -> MPoly {
    let n = SERIES_CAP as usize;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (e, c) in u.terms() {
        let other: u32 = e
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != var)
            .map(|(_, &x)| x as u32)
            .sum();
        assert_eq!(other, 0, "series inverse expects a univariate input");
        if (e[var] as usize) <= n {
            coeffs[e[var] as usize] = c.clone();
        }
    }
    assert!(!coeffs[0].is_zero(), "series inverse needs a unit");
    let mut inv = vec![BigRational::zero(); n + 1];
    inv[0] = BigRational::one() / &coeffs[0];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            acc += &coeffs[i] * &inv[k - i];
        }
        inv[k] = -acc / &coeffs[0];
    }
    let mut out = MPoly::zero(u.n_vars());
    for (k, c) in inv.into_iter().enumerate() {
        if !c.is_zero() {
            let mut exps = vec![0u16; u.n_vars()];
            exps[var] = k as u16;
            out = out.add(&MPoly::monomial(u.n_vars(), &exps, c));
        }
    }
    out
}

/// Solve `dg/dy (phi(z), z) = 0` for `phi` of positive order by Newton
/// iteration; requires `d^2 g / dy^2` to be a unit at the origin. `None`
/// when the iteration cannot start (degenerate second derivative).
fn newton_critical(g: &MPoly) -> Option<MPoly> {
    let gy = g.derivative(0);
    let gyy = gy.derivative(0);
    if gyy.coeff(&[0, 0]).is_zero() {
        return None;
    }
    let mut phi = MPoly::zero(2);
    for _ in 0..64 {
        let val = gy.substitute_poly(0, &phi, Some(SERIES_CAP));
        if val.is_zero() {
            return Some(phi);
        }
        let den = gyy.substitute_poly(0, &phi, Some(SERIES_CAP));
        let inv = series_inverse(&den, 1);
        phi = phi.sub(&val.mul_trunc(&inv, SERIES_CAP));
    }
    unreachable!("Newton iteration converges within the cap");
}

/// Vanishing order of the germ along the critical branch of its squared
/// variable: for `g` with quadratic part a nonzero multiple of `y^2`, the
/// order in `z` of `g(phi(z), z)` where `dg/dy (phi, z) = 0`. `None` when
/// the order exceeds the cap.
fn morse_residual_order(g: &MPoly) -> Option<u32> {
    let phi = newton_critical(g)?;
    let residual = g.substitute_poly(0, &phi, Some(SERIES_CAP));
    residual.min_total_degree()
}

/// Solve `f(y, tau(y)) = 0` for `tau` of positive order, for `f` whose
/// `z`-derivative along `z = 0` is `y^2` times a unit (the double-root
/// normal position). Newton iteration with exact division by `y^2`.
fn newton_branch(f: &MPoly) -> Option<MPoly> {
    let fz = f.derivative(1);
    // fz(y, 0) must be beta y^2 + higher.
    let fz0 = fz.substitute(1, &BigRational::zero());
    if !fz0.coeff(&[0, 0]).is_zero()
        || !fz0.coeff(&[1, 0]).is_zero()
        || fz0.coeff(&[2, 0]).is_zero()
    {
        return None;
    }
    let mut tau = MPoly::zero(2);
    for _ in 0..64 {
        let val = f.substitute_poly(1, &tau, Some(SERIES_CAP));
        if val.is_zero() {
            return Some(tau);
        }
        let den = fz.substitute_poly(1, &tau, Some(SERIES_CAP));
        let val_shift = divide_by_var_power(&val, 0, 2);
        let den_shift = divide_by_var_power(&den, 0, 2);
        let inv = series_inverse(&den_shift, 0);
        tau = tau.sub(&val_shift.mul_trunc(&inv, SERIES_CAP));
    }
    unreachable!("Newton iteration converges within the cap");
}

fn divide_by_var(p: &MPoly, var: usize) -> MPoly {
    divide_by_var_power(p, var, 1)
}

fn divide_by_var_power(p: &MPoly, var: usize, k: u16) -> MPoly {
    let mut out = MPoly::zero(p.n_vars());
    for (e, c) in p.terms() {
        assert!(e[var] >= k, "exact division requires divisibility");
        let mut exps = e.clone();
        exps[var] -= k;
        out = out.add(&MPoly::monomial(p.n_vars(), &exps, c.clone()));
    }
    out
}
