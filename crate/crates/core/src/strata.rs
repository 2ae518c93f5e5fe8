//! Unions of coordinate subspaces: fixed loci of sign involutions, base loci
//! of monomial systems, multiplicities along coordinate curves, and the
//! generic-member avoidance decision feeding the classifier.
//!
//! Every locus handled here is a finite union of *coordinate strata*, closed
//! subsets of a [`CoxAmbient`] cut out by a set of homogeneous coordinates.
//! Distinct monomials of a system carry independent coefficients, so a
//! generic member vanishes on a stratum exactly when every monomial does;
//! this keeps all computations exact set combinatorics on monomial supports.

use std::collections::BTreeSet;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::ambient::CoxAmbient;
use crate::involution::SignInvolution;
use crate::linsys::MonomialSystem;

/// Errors from stratum-level computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrataError {
    /// The stratum handed to an operation is not of a shape it supports.
    #[error("unsupported stratum {0} for this operation")]
    UnsupportedStratum(String),
    /// The operation needs at least one monomial to look at.
    #[error("operation is undefined on an empty system")]
    EmptySystem,
    /// The two systems live on different ambient spaces.
    #[error("systems live on different ambient spaces")]
    AmbientMismatch,
    /// The involution does not act on this ambient.
    #[error("involution acts on {found} variables, ambient has {expected}")]
    WrongVariableCount { expected: usize, found: usize },
}

/// A coordinate stratum: the closed subset where a chosen set of homogeneous
/// coordinates vanishes. The empty set cuts out the whole ambient.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stratum {
    vanishing: BTreeSet<usize>,
}

impl Stratum {
    /// The stratum cut out by the given variable indices.
    pub fn new<I>(vanishing: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        Stratum {
            vanishing: vanishing.into_iter().collect(),
        }
    }

    /// The whole ambient: no coordinate is required to vanish.
    pub fn whole_ambient() -> Self {
        Stratum {
            vanishing: BTreeSet::new(),
        }
    }

    pub fn vanishing(&self) -> &BTreeSet<usize> {
        &self.vanishing
    }

    pub fn is_whole_ambient(&self) -> bool {
        self.vanishing.is_empty()
    }

    /// The intersection of the two strata as subvarieties (union of the
    /// vanishing sets).
    pub fn union(&self, other: &Stratum) -> Stratum {
        Stratum {
            vanishing: self.vanishing.union(&other.vanishing).copied().collect(),
        }
    }

    /// True when the stratum contains no point of the ambient, i.e. some
    /// irrelevant group of coordinates vanishes identically on it.
    pub fn is_empty_in(&self, ambient: &CoxAmbient) -> bool {
        ambient
            .irrelevant_groups()
            .iter()
            .any(|g| g.iter().all(|v| self.vanishing.contains(v)))
    }

    /// Dimension inside the ambient, `None` when the stratum is empty there.
    /// Any support admitted by the irrelevant ideal sees the full torus (its
    /// restricted weight matrix has full rank), so the dimension is the
    /// variable count minus the vanishing count minus the torus rank.
    pub fn dim(&self, ambient: &CoxAmbient) -> Option<i64> {
        if self.is_empty_in(ambient) {
            return None;
        }
        Some(
            ambient.n_vars() as i64
                - self.vanishing.len() as i64
                - ambient.torus_rank() as i64,
        )
    }

    /// Sorted variable names of the vanishing set.
    pub fn names(&self, ambient: &CoxAmbient) -> Vec<String> {
        self.vanishing
            .iter()
            .map(|&v| ambient.var_name(v).to_string())
            .collect()
    }

    /// Human-readable label such as `{x0 = x1 = 0}`.
    pub fn label(&self, ambient: &CoxAmbient) -> String {
        if self.is_whole_ambient() {
            return "{whole ambient}".to_string();
        }
        format!("{{{} = 0}}", self.names(ambient).join(" = "))
    }
}

/// A normalized union of coordinate strata: no stratum is empty in the
/// ambient, the vanishing sets are inclusion-minimal (a superset cuts out a
/// subvariety of what a subset already cuts out), and the list is sorted by
/// size and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumSet {
    var_names: Vec<String>,
    strata: Vec<Stratum>,
}

impl StratumSet {
    /// Normalize a raw collection of strata against an ambient.
    pub fn normalized(ambient: &CoxAmbient, raw: Vec<Stratum>) -> Self {
        let mut candidates: Vec<Stratum> = raw
            .into_iter()
            .filter(|s| !s.is_empty_in(ambient))
            .collect();
        candidates.sort_by(|a, b| {
            a.vanishing
                .len()
                .cmp(&b.vanishing.len())
                .then_with(|| a.cmp(b))
        });
        let mut kept: Vec<Stratum> = Vec::new();
        for c in candidates {
            if !kept
                .iter()
                .any(|k| k.vanishing.is_subset(&c.vanishing))
            {
                kept.push(c);
            }
        }
        StratumSet {
            var_names: (0..ambient.n_vars())
                .map(|v| ambient.var_name(v).to_string())
                .collect(),
            strata: kept,
        }
    }

    /// The empty locus.
    pub fn empty(ambient: &CoxAmbient) -> Self {
        StratumSet::normalized(ambient, Vec::new())
    }

    /// The whole ambient as a single empty-vanishing stratum.
    pub fn whole_ambient(ambient: &CoxAmbient) -> Self {
        StratumSet::normalized(ambient, vec![Stratum::whole_ambient()])
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Flags the degenerate answer "everything": a single stratum with
    /// nothing required to vanish.
    pub fn is_whole_ambient(&self) -> bool {
        self.strata.len() == 1 && self.strata[0].is_whole_ambient()
    }

    /// Whether the generic point of `q` lies in this locus: some stratum's
    /// vanishing set is contained in `q`'s.
    pub fn contains_generic_point(&self, q: &Stratum) -> bool {
        self.strata
            .iter()
            .any(|s| s.vanishing.is_subset(&q.vanishing))
    }

    /// Whether this locus contains `other` as a set: every stratum of
    /// `other` has its generic point (hence its closure) in here.
    pub fn contains_set(&self, other: &StratumSet) -> bool {
        other.strata.iter().all(|q| self.contains_generic_point(q))
    }

    /// Whether the locus meets the stratum `z` at all: some component
    /// intersects it in a subvariety not killed by the irrelevant ideal.
    pub fn intersects_stratum(&self, ambient: &CoxAmbient, z: &Stratum) -> bool {
        self.strata
            .iter()
            .any(|s| !s.union(z).is_empty_in(ambient))
    }
}

impl Serialize for StratumSet {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
    {
        let mut seq = serializer.serialize_seq(Some(self.strata.len()))?;
        for s in &self.strata {
            let names: Vec<&str> = s
                .vanishing
                .iter()
                .map(|&v| self.var_names[v].as_str())
                .collect();
            seq.serialize_element(&names)?;
        }
        seq.end()
    }
}

/// Basis of the integer kernel of a small integer matrix given by columns.
///
/// Integer column reduction: unimodular column operations bring the matrix
/// to column echelon form while the same operations accumulate in a square
/// transform; transform columns over zero echelon columns are a lattice
/// basis of the kernel (unimodular operations preserve the kernel lattice,
/// so no saturation step is needed).
fn integer_kernel_basis(cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = cols.len();
    if m == 0 {
        return Vec::new();
    }
    let k = cols[0].len();
    let mut a: Vec<Vec<i64>> = cols.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m)
        .map(|j| {
            let mut e = vec![0i64; m];
            e[j] = 1;
            e
        })
        .collect();
    let mut lead = 0usize;
    for r in 0..k {
        if lead == m {
            break;
        }
        loop {
            let mut pivot: Option<usize> = None;
            for j in lead..m {
                if a[j][r] != 0
                    && pivot.map_or(true, |p| a[j][r].abs() < a[p][r].abs())
                {
                    pivot = Some(j);
                }
            }
            let Some(p) = pivot else {
                break;
            };
            a.swap(p, lead);
            u.swap(p, lead);
            let mut cleared = true;
            for j in lead + 1..m {
                let q = a[j][r] / a[lead][r];
                if q != 0 {
                    for i in 0..k {
                        a[j][i] -= q * a[lead][i];
                    }
                    for i in 0..m {
                        u[j][i] -= q * u[lead][i];
                    }
                }
                if a[j][r] != 0 {
                    cleared = false;
                }
            }
            if cleared {
                lead += 1;
                break;
            }
        }
    }
    (0..m)
        .filter(|&j| a[j].iter().all(|&x| x == 0))
        .map(|j| u[j].clone())
        .collect()
}

/// Fixed locus of a sign involution on the ambient, as a stratum set.
///
/// A point of the quotient is fixed exactly when its coordinate vector maps
/// to a torus translate of itself. For a candidate support (the coordinates
/// allowed to be nonzero) this asks for a torus element matching the signs
/// on every supported coordinate. The torus image on a support is cut out by
/// the characters attached to the integer kernel of the support-restricted
/// weight matrix, so solvability is equivalent to: every kernel basis vector
/// has even coordinate sum over the involution's negative variables.
/// Solvability passes to sub-supports, so the locus is closed and the
/// maximal solvable supports give its inclusion-minimal vanishing sets.
pub fn fixed_locus(
    ambient: &CoxAmbient,
    inv: &SignInvolution,
) -> Result<StratumSet, StrataError> {
    let n = ambient.n_vars();
    if inv.n_vars() != n {
        return Err(StrataError::WrongVariableCount {
            expected: n,
            found: inv.n_vars(),
        });
    }
    let mut fixed: Vec<Stratum> = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let cols: Vec<Vec<i64>> = support.iter().map(|&v| ambient.var_weights(v)).collect();
        let solvable = integer_kernel_basis(&cols).iter().all(|c| {
            let odd_sum: i64 = support
                .iter()
                .zip(c)
                .filter(|&(&v, _)| inv.signs()[v] == -1)
                .map(|(_, ci)| *ci)
                .sum();
            odd_sum % 2 == 0
        });
        if solvable {
            fixed.push(Stratum::new(
                (0..n).filter(|v| mask >> v & 1 == 0),
            ));
        }
    }
    Ok(StratumSet::normalized(ambient, fixed))
}

/// Base locus of a monomial system: the common zero set of all monomials.
///
/// Each monomial vanishes on the union of its support hyperplanes, so the
/// common zero set is the union, over inclusion-minimal transversals (one
/// vanishing variable chosen from every monomial's support), of the strata
/// those transversals cut out, normalized against the irrelevant ideal. The
/// empty system cuts nothing out and yields the whole ambient, flagged via
/// [`StratumSet::is_whole_ambient`].
pub fn base_locus(system: &MonomialSystem) -> StratumSet {
    let ambient = system.ambient();
    if system.is_empty() {
        return StratumSet::whole_ambient(ambient);
    }
    let mut partial: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for support in system.distinct_supports() {
        let mut next: Vec<BTreeSet<usize>> = Vec::new();
        for t in &partial {
            if support.iter().any(|v| t.contains(v)) {
                next.push(t.clone());
            } else {
                for &v in &support {
                    let mut grown = t.clone();
                    grown.insert(v);
                    next.push(grown);
                }
            }
        }
        // Prune to inclusion-minimal partial transversals to keep the
        // frontier small and the result minimal.
        next.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut pruned: Vec<BTreeSet<usize>> = Vec::new();
        for c in next {
            if !pruned.iter().any(|p| p.is_subset(&c)) {
                pruned.push(c);
            }
        }
        partial = pruned;
    }
    StratumSet::normalized(
        ambient,
        partial.into_iter().map(Stratum::new).collect(),
    )
}

/// Multiplicity of the generic member along a coordinate curve of a scroll:
/// the minimal total exponent of the curve's vanishing variables over the
/// system's monomials (the fibre coordinates are generically nonzero along
/// any such curve, so only those exponents count).
///
/// Supported strata are curves cut out by two fibre coordinates on a scroll;
/// anything else is rejected.
pub fn mult_along(system: &MonomialSystem, curve: &Stratum) -> Result<i64, StrataError> {
    let ambient = system.ambient();
    let shape_ok = ambient.is_scroll()
        && curve.vanishing().iter().all(|&v| v >= 2)
        && curve.dim(ambient) == Some(1);
    if !shape_ok {
        return Err(StrataError::UnsupportedStratum(curve.label(ambient)));
    }
    if system.is_empty() {
        return Err(StrataError::EmptySystem);
    }
    let vars: Vec<usize> = curve.vanishing().iter().copied().collect();
    Ok(system
        .min_vanishing_order(&vars)
        .expect("nonempty system has a finite vanishing order"))
}

/// A variable dividing every monomial of the system, if any: the generic
/// member is then reducible, with that coordinate hyperplane split off as a
/// fixed component. Returns the smallest such variable index.
pub fn fixed_component(system: &MonomialSystem) -> Option<usize> {
    system.fixed_components().into_iter().map(|(v, _)| v).next()
}

/// Restriction of a system to a stratum: monomials involving a vanishing
/// variable are dropped, the rest restrict to independent sections.
pub fn restrict_to_stratum(system: &MonomialSystem, stratum: &Stratum) -> MonomialSystem {
    let vars: Vec<usize> = stratum.vanishing().iter().copied().collect();
    system.restricted_to(&vars)
}

/// Machine-readable reasons a fixed stratum can break avoidance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AvoidanceFailure {
    /// A fixed point lies in both base loci, so every pair of members meets
    /// there.
    PointInBothBaseLoci,
    /// The fixed curve lies inside the divisor system's base locus, so every
    /// member contains it.
    CurveInDivisorBaseLocus,
    /// The second system restricts to fewer than two monomials on the fixed
    /// curve, so its members cannot move along it.
    RestrictedSystemNotPencil,
    /// A base point of the restricted second system sits in the divisor
    /// system's base locus.
    RestrictedBasePointMeetsDivisor,
}

/// One failing stratum together with the first condition that broke there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceWitness {
    /// Sorted variable names of the failing stratum's vanishing set.
    pub stratum: Vec<String>,
    /// Which avoidance condition failed.
    pub condition: AvoidanceFailure,
}

/// Outcome of the avoidance decision, with every failing stratum recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceVerdict {
    pub holds: bool,
    pub witnesses: Vec<AvoidanceWitness>,
}

/// Decide whether generic members of the two systems meet the fixed locus
/// simultaneously: TRUE means generic `D` in the first system and generic
/// `S` in the second have `D ∩ S ∩ fixed = ∅`.
///
/// A fixed point is avoided as soon as it lies outside one of the two base
/// loci: the generic member of that system then misses it. A fixed curve `Z`
/// needs three facts: `Z` is not inside the base locus of `d_sys` (a generic
/// member then meets `Z` in finitely many generic points), the restriction
/// of `m_sys` to `Z` moves (at least a pencil), and every base point of that
/// restriction lies outside the base locus of `d_sys`. The generic member of
/// `m_sys` then meets `Z` only in restricted base points and moving points,
/// and neither kind lands on the generic member of `d_sys`.
///
/// Fixed strata of dimension two or more are not supported.
pub fn generic_avoidance(
    d_sys: &MonomialSystem,
    m_sys: &MonomialSystem,
    fixed: &StratumSet,
) -> Result<AvoidanceVerdict, StrataError> {
    if d_sys.ambient() != m_sys.ambient() {
        return Err(StrataError::AmbientMismatch);
    }
    let ambient = d_sys.ambient();
    let bs_d = base_locus(d_sys);
    let bs_m = base_locus(m_sys);
    let mut witnesses: Vec<AvoidanceWitness> = Vec::new();
    for z in fixed.strata() {
        let fail = |stratum: &Stratum, condition: AvoidanceFailure| AvoidanceWitness {
            stratum: stratum.names(ambient),
            condition,
        };
        match z.dim(ambient) {
            Some(0) => {
                if bs_d.contains_generic_point(z) && bs_m.contains_generic_point(z) {
                    witnesses.push(fail(z, AvoidanceFailure::PointInBothBaseLoci));
                }
            }
            Some(1) => {
                if bs_d.contains_generic_point(z) {
                    witnesses.push(fail(z, AvoidanceFailure::CurveInDivisorBaseLocus));
                    continue;
                }
                let restricted = restrict_to_stratum(m_sys, z);
                if restricted.h0() < 2 {
                    witnesses.push(fail(z, AvoidanceFailure::RestrictedSystemNotPencil));
                    continue;
                }
                for b in base_locus(&restricted).strata() {
                    let p = z.union(b);
                    if p.is_empty_in(ambient) {
                        continue;
                    }
                    if bs_d.contains_generic_point(&p) {
                        witnesses.push(fail(
                            &p,
                            AvoidanceFailure::RestrictedBasePointMeetsDivisor,
                        ));
                    }
                }
            }
            _ => return Err(StrataError::UnsupportedStratum(z.label(ambient))),
        }
    }
    Ok(AvoidanceVerdict {
        holds: witnesses.is_empty(),
        witnesses,
    })
}
