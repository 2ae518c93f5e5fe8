//! Local models of the double cover along a fibre of the ruling.
//!
//! A divisor in the invariant half of the ramification system cuts each
//! fibre of the ruling in a configuration governed by the monomials that
//! survive at the chosen point of the double-point curve. Setting `x2 = 1`
//! and passing to an affine chart of the base turns the cover into a germ
//! `x^2 + f(y, z, t) = 0` at the origin of a four-dimensional chart, where
//! `y = x0`, `z = x1`, and `t` is the base coordinate. Coefficients stay
//! symbolic ("generic") until a seeded specialization pins them to concrete
//! rationals, so every downstream computation is exact and reproducible.

pub mod ade;
pub mod blowup;
pub mod scan;
pub mod verdict;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linsys::MonomialSystem;
use crate::poly::MPoly;

/// Variable order of every cover germ: the cover coordinate, the two fibre
/// coordinates, and the base coordinate.
pub const GERM_VARS: [&str; 4] = ["x", "y", "z", "t"];

/// Index of the cover coordinate `x` in [`GERM_VARS`].
pub const VAR_X: usize = 0;
/// Index of the fibre coordinate `y = x0`.
pub const VAR_Y: usize = 1;
/// Index of the fibre coordinate `z = x1`.
pub const VAR_Z: usize = 2;
/// Index of the base coordinate `t`.
pub const VAR_T: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GermError {
    #[error("expected a ramification system on a scroll with d3 = 0")]
    NotRamificationSystem,
    #[error("the system is empty; no divisor to take a germ of")]
    EmptySystem,
    #[error("germ has a constant term; the centre does not lie on the divisor")]
    NotOnDivisor,
    #[error("germ is smooth at the centre (multiplicity {mult}); nothing to classify")]
    NotSingular { mult: u32 },
    #[error("zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("expected a germ in {expected} variables, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("germ is not of cover shape x^2 + f(y, z, t)")]
    NotCoverShape,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("a coefficient denominator vanishes modulo {0}")]
    DenominatorVanishes(u64),
    #[error("scan of {needed} points exceeds the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("at least {expected} specialization seeds are required, got {found}")]
    NotEnoughSeeds { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A point of the double-point curve `{x0 = x1 = 0}`, given by the fibre it
/// lies on: a general fibre, or one of the two distinguished fibres of the
/// involution on the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberPoint {
    /// A general point `[1 : t*]` with `t*` generic (seeded) and nonzero.
    Generic,
    /// The fibre over `[1 : 0]`.
    T1Zero,
    /// The fibre over `[0 : 1]`.
    T0Zero,
}

impl FiberPoint {
    /// Human-readable label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            FiberPoint::Generic => "generic",
            FiberPoint::T1Zero => "[1:0]",
            FiberPoint::T0Zero => "[0:1]",
        }
    }

    /// The chart substitution that produces the local coordinates.
    pub fn chart_substitution(&self) -> &'static str {
        match self {
            FiberPoint::Generic | FiberPoint::T1Zero => "x2 = 1, x0 = y, x1 = z, t0 = 1, t1 = t",
            FiberPoint::T0Zero => "x2 = 1, x0 = y, x1 = z, t0 = t, t1 = 1",
        }
    }

    /// Whether the centre of the germ sits at `t = 0` of the chart (the two
    /// special fibres) or at a seeded generic value `t = t*`.
    pub fn is_special(&self) -> bool {
        !matches!(self, FiberPoint::Generic)
    }
}

impl Serialize for FiberPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// A coefficient of a germ family: a fixed rational, or one of the generic
/// parameters of the divisor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Rat(BigRational),
    Param(usize),
}

/// One term of a germ family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTerm {
    pub coeff: Coeff,
    pub exps: Vec<u16>,
}

/// A germ with generic coefficients: a finite sum of monomials in at most
/// four local variables whose coefficients are either explicit rationals or
/// free parameters. Terms never include a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermFamily {
    vars: Vec<String>,
    n_params: usize,
    terms: Vec<FamilyTerm>,
}

/// A seeded specialization of a germ family: the drawn base value `t*`, the
/// drawn parameter values in canonical order, and the resulting exact
/// polynomial (the base coordinate stays symbolic; slices substitute it).
#[derive(Debug, Clone)]
pub struct Specialization {
    pub seed: u64,
    pub t_value: BigRational,
    pub param_values: Vec<BigRational>,
    pub poly: MPoly,
}

impl GermFamily {
    /// A family with no free parameters, from an explicit polynomial.
    pub fn explicit(vars: &[&str], poly: &MPoly) -> Result<Self, GermError> {
        if poly.n_vars() != vars.len() || vars.len() > 4 {
            return Err(GermError::WrongArity {
                expected: vars.len().min(4),
                found: poly.n_vars(),
            });
        }
        let mut terms = Vec::new();
        for (exps, coeff) in poly.terms() {
            if exps.iter().all(|&e| e == 0) {
                return Err(GermError::NotOnDivisor);
            }
            terms.push(FamilyTerm {
                coeff: Coeff::Rat(coeff.clone()),
                exps: exps.clone(),
            });
        }
        Ok(GermFamily {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            n_params: 0,
            terms,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn terms(&self) -> &[FamilyTerm] {
        &self.terms
    }

    pub fn param_name(&self, i: usize) -> String {
        format!("a{i}")
    }

    /// Minimal total degree of a term. Parameters are generic, so every
    /// term counts.
    pub fn multiplicity(&self) -> Result<u32, GermError> {
        self.terms
            .iter()
            .map(|t| t.exps.iter().map(|&e| e as u32).sum())
            .min()
            .ok_or(GermError::ZeroPolynomial)
    }

    /// Minimal weighted degree of a term under positive integer weights.
    pub fn weighted_multiplicity(&self, weights: &[u32]) -> Result<u64, GermError> {
        if weights.len() != self.vars.len() {
            return Err(GermError::WrongArity {
                expected: self.vars.len(),
                found: weights.len(),
            });
        }
        self.terms
            .iter()
            .map(|t| {
                t.exps
                    .iter()
                    .zip(weights)
                    .map(|(&e, &w)| e as u64 * w as u64)
                    .sum()
            })
            .min()
            .ok_or(GermError::ZeroPolynomial)
    }

    /// Specialize the parameters (and a base value `t*`) from a seed. The
    /// base value is drawn first, then the parameters in canonical order;
    /// numerators lie in `±1..=9`, denominators in `1..=4`, so nothing ever
    /// collides with the small primes used by the finite-field scans.
    pub fn specialize(&self, seed: u64) -> Specialization {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t_value = draw_rational(&mut rng);
        let param_values: Vec<BigRational> =
            (0..self.n_params).map(|_| draw_rational(&mut rng)).collect();
        let mut poly = MPoly::zero(self.vars.len());
        for term in &self.terms {
            let c = match &term.coeff {
                Coeff::Rat(r) => r.clone(),
                Coeff::Param(i) => param_values[*i].clone(),
            };
            poly = poly.add(&MPoly::monomial(self.vars.len(), &term.exps, c));
        }
        Specialization {
            seed,
            t_value,
            param_values,
            poly,
        }
    }
}

impl Serialize for GermFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermRepr {
            coeff: String,
            monomial: String,
        }
        let mut st = s.serialize_struct("GermFamily", 3)?;
        st.serialize_field("vars", &self.vars)?;
        let params: Vec<String> = (0..self.n_params).map(|i| self.param_name(i)).collect();
        st.serialize_field("params", &params)?;
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|t| TermRepr {
                coeff: match &t.coeff {
                    Coeff::Rat(r) => r.to_string(),
                    Coeff::Param(i) => self.param_name(*i),
                },
                monomial: format_monomial(&self.vars, &t.exps),
            })
            .collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn format_monomial(vars: &[String], exps: &[u16]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[v].clone()),
            _ => parts.push(format!("{}^{}", vars[v], e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Draw a nonzero rational with numerator in `±1..=9` and denominator in
/// `1..=4`.
fn draw_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num = rng.gen_range(1..=9i64);
    let den = rng.gen_range(1..=4i64);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(BigInt::from(sign * num), BigInt::from(den))
}

impl std::fmt::Display for GermFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut rendered = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mono = term
                .exps
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        self.vars[j].clone()
                    } else {
                        format!("{}^{}", self.vars[j], e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            rendered.push(match &term.coeff {
                Coeff::Param(i) => format!("{}*{}", self.param_name(*i), mono),
                Coeff::Rat(r) if r.is_one() => mono,
                Coeff::Rat(r) if (-r).is_one() => format!("-{mono}"),
                Coeff::Rat(r) => format!("{r}*{mono}"),
            });
        }
        let mut out = String::new();
        for (k, s) in rendered.iter().enumerate() {
            if k == 0 {
                out.push_str(s);
            } else if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
        f.write_str(&out)
    }
}

/// The local model of the double cover over a point of the double-point
/// curve, with generic coefficients.
///
/// The input must be (a subsystem of) the ramification system on a scroll
/// with `d3 = 0`. Every monomial of the system is transported to the chart
/// of the chosen fibre point by the substitution `x2 = 1, x0 = y, x1 = z`
/// together with `t0 = 1, t1 = t` (generic point and `[1:0]`) or
/// `t0 = t, t1 = 1` (the fibre `[0:1]`), and receives its own generic
/// parameter. The cover contributes the leading term `x^2`.
pub fn local_cover_germ(
    system: &MonomialSystem,
    point: FiberPoint,
) -> Result<GermFamily, GermError> {
    let ambient = system.ambient();
    let degrees = ambient
        .scroll_degrees()
        .map_err(|_| GermError::NotRamificationSystem)?;
    if degrees[2] != 0 {
        return Err(GermError::NotRamificationSystem);
    }
    let ram = ambient
        .ramification_class()
        .map_err(|_| GermError::NotRamificationSystem)?;
    if system.class() != &ram {
        return Err(GermError::NotRamificationSystem);
    }
    if system.is_empty() {
        return Err(GermError::EmptySystem);
    }
    let t0 = ambient.var_index("t0").expect("scroll has t0");
    let t1 = ambient.var_index("t1").expect("scroll has t1");
    let x0 = ambient.var_index("x0").expect("scroll has x0");
    let x1 = ambient.var_index("x1").expect("scroll has x1");

    let mut terms = vec![FamilyTerm {
        coeff: Coeff::Rat(BigRational::one()),
        exps: vec![2, 0, 0, 0],
    }];
    for (i, mono) in system.materialize().iter().enumerate() {
        let k = match point {
            FiberPoint::Generic | FiberPoint::T1Zero => mono.exp(t1),
            FiberPoint::T0Zero => mono.exp(t0),
        };
        let mut exps = vec![0u16; 4];
        exps[VAR_Y] = mono.exp(x0) as u16;
        exps[VAR_Z] = mono.exp(x1) as u16;
        exps[VAR_T] = k as u16;
        debug_assert!(
            !terms.iter().any(|t| t.exps == exps),
            "chart map must be injective on the system"
        );
        terms.push(FamilyTerm {
            coeff: Coeff::Param(i),
            exps,
        });
    }
    Ok(GermFamily {
        vars: GERM_VARS.iter().map(|s| s.to_string()).collect(),
        n_params: system.h0() as usize,
        terms,
    })
}

/// Split a specialized 4-variable cover polynomial `c x^2 + f(y, z, t)`
/// into its residual part `f` as a 3-variable polynomial in `(y, z, t)`,
/// normalized by `1/c` so the cover term is exactly `x^2`.
pub fn residual_part(poly: &MPoly) -> Result<MPoly, GermError> {
    if poly.n_vars() != 4 {
        return Err(GermError::WrongArity {
            expected: 4,
            found: poly.n_vars(),
        });
    }
    let square = vec![2u16, 0, 0, 0];
    let c = poly.coeff(&square);
    if c == num_traits::Zero::zero() {
        return Err(GermError::NotCoverShape);
    }
    let mut rest = poly.sub(&MPoly::monomial(4, &square, c.clone()));
    if rest.terms().any(|(e, _)| e[VAR_X] > 0) {
        return Err(GermError::NotCoverShape);
    }
    rest = rest.scale(&(BigRational::one() / c));
    Ok(rest.project(&[VAR_Y, VAR_Z, VAR_T]).expect("no x left"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::CoxAmbient;
    use crate::involution::SignInvolution;
    use crate::linsys::MonomialSystem;

    fn invariant_ram(d1: i64, d2: i64) -> MonomialSystem {
        let ambient = CoxAmbient::scroll(d1, d2, 0).unwrap();
        let ram = MonomialSystem::ram_system(&ambient).unwrap();
        let sigma = SignInvolution::standard_sigma(&ambient).unwrap();
        ram.parity_decompose(&sigma).unwrap().plus
    }

    #[test]
    fn cover_germ_has_square_plus_residual_shape() {
        let sys = invariant_ram(3, 1);
        let fam = local_cover_germ(&sys, FiberPoint::Generic).unwrap();
        assert_eq!(fam.n_vars(), 4);
        assert_eq!(fam.n_params() as i64, sys.h0());
        // Exactly one explicit term, the cover square.
        let squares: Vec<_> = fam
            .terms()
            .iter()
            .filter(|t| matches!(t.coeff, Coeff::Rat(_)))
            .collect();
        assert_eq!(squares.len(), 1);
        assert_eq!(squares[0].exps, vec![2, 0, 0, 0]);
        // No term is constant and no parameter term involves x.
        for t in fam.terms() {
            assert!(t.exps.iter().any(|&e| e > 0));
            if matches!(t.coeff, Coeff::Param(_)) {
                assert_eq!(t.exps[VAR_X], 0);
            }
        }
    }

    #[test]
    fn chart_maps_leading_monomials_correctly() {
        // On the (8,6) scroll the invariant ramification class contains
        // x0^3 x2 and x1^4; in the chart at a general fibre they become
        // y^3 and z^4 with t-exponent zero.
        let sys = invariant_ram(8, 6);
        let ambient = sys.ambient().clone();
        let fam = local_cover_germ(&sys, FiberPoint::Generic).unwrap();
        let monos = sys.materialize();
        let find = |name: &str| -> usize {
            let target = ambient.parse_monomial(name).unwrap();
            monos.iter().position(|m| *m == target).unwrap()
        };
        let y3 = find("x0^3 x2");
        let z4 = find("x1^4");
        let y3_term = fam
            .terms()
            .iter()
            .find(|t| t.coeff == Coeff::Param(y3))
            .unwrap();
        assert_eq!(y3_term.exps, vec![0, 3, 0, 0]);
        let z4_term = fam
            .terms()
            .iter()
            .find(|t| t.coeff == Coeff::Param(z4))
            .unwrap();
        assert_eq!(z4_term.exps, vec![0, 0, 4, 0]);
        // t0^8 x0^4 picks up t-degree 8 in the chart at [0:1] and none at
        // a generic fibre.
        let t8 = find("t0^8 x0^4");
        let generic_term = fam
            .terms()
            .iter()
            .find(|t| t.coeff == Coeff::Param(t8))
            .unwrap();
        assert_eq!(generic_term.exps, vec![0, 4, 0, 0]);
        let fam0 = local_cover_germ(&sys, FiberPoint::T0Zero).unwrap();
        let special_term = fam0
            .terms()
            .iter()
            .find(|t| t.coeff == Coeff::Param(t8))
            .unwrap();
        assert_eq!(special_term.exps, vec![0, 4, 0, 8]);
    }

    #[test]
    fn specialization_is_deterministic_and_seed_sensitive() {
        let sys = invariant_ram(2, 2);
        let fam = local_cover_germ(&sys, FiberPoint::Generic).unwrap();
        let a = fam.specialize(7);
        let b = fam.specialize(7);
        assert_eq!(a.poly, b.poly);
        assert_eq!(a.t_value, b.t_value);
        assert_eq!(a.param_values, b.param_values);
        let c = fam.specialize(8);
        assert_ne!(a.poly, c.poly);
        // Drawn values respect the documented ranges.
        assert!(a.t_value != num_traits::Zero::zero());
        for v in &a.param_values {
            let n: i64 = v.numer().try_into().unwrap();
            let d: i64 = v.denom().try_into().unwrap();
            assert!((1..=9).contains(&n.abs()));
            assert!((1..=4).contains(&d));
        }
    }

    #[test]
    fn residual_split_checks_cover_shape() {
        let sys = invariant_ram(2, 2);
        let fam = local_cover_germ(&sys, FiberPoint::T1Zero).unwrap();
        let spec = fam.specialize(1);
        let f = residual_part(&spec.poly).unwrap();
        assert_eq!(f.n_vars(), 3);
        assert!(f.min_total_degree().unwrap() >= 2);
        // A polynomial with a stray x-term is rejected.
        let bad = spec.poly.add(&MPoly::monomial(4, &[1, 1, 0, 0], crate::poly::rat(1, 1)));
        assert_eq!(residual_part(&bad), Err(GermError::NotCoverShape));
    }

    #[test]
    fn non_ramification_inputs_are_rejected() {
        let ambient = CoxAmbient::scroll(3, 1, 0).unwrap();
        let m = MonomialSystem::m_system(&ambient).unwrap();
        assert_eq!(
            local_cover_germ(&m, FiberPoint::Generic).unwrap_err(),
            GermError::NotRamificationSystem
        );
        let with_fibre = CoxAmbient::scroll(2, 1, 1).unwrap();
        let ram = MonomialSystem::ram_system(&with_fibre).unwrap();
        assert_eq!(
            local_cover_germ(&ram, FiberPoint::Generic).unwrap_err(),
            GermError::NotRamificationSystem
        );
    }

    #[test]
    fn family_serialization_names_parameters() {
        let sys = invariant_ram(2, 2);
        let fam = local_cover_germ(&sys, FiberPoint::Generic).unwrap();
        let json = serde_json::to_value(&fam).unwrap();
        assert_eq!(json["vars"], serde_json::json!(["x", "y", "z", "t"]));
        assert_eq!(json["terms"][0]["coeff"], "1");
        assert_eq!(json["terms"][0]["monomial"], "x^2");
        assert_eq!(json["terms"][1]["coeff"], "a0");
        let n = fam.n_params();
        assert_eq!(json["params"].as_array().unwrap().len(), n);
    }
}
