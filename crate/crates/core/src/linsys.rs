//! Complete linear systems as exact monomial data.
//!
//! On a scroll, the monomials of `|a*M + b*L|` are grouped by fiber exponent:
//! each admissible `(i0, i1, i2)` with `i0+i1+i2 = a` contributes the
//! generator family `t0^{e-k1} t1^{k1} x^I` for `0 <= k1 <= e`, where
//! `e = b + d1*i0 + d2*i1 + d3*i2` is the `t`-budget. Systems are therefore
//! stored either in budgeted form (one record per fiber exponent, with an
//! optional parity constraint on `k1`) or as explicit monomial lists; the
//! parity form is what sign involutions produce. Coefficients are never
//! stored: a system always stands for the generic member of its span.

use crate::ambient::{AmbientError, AmbientKind, CoxAmbient, DivisorClass, Monomial};
use crate::involution::SignInvolution;
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinSysError {
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    #[error("monomial {0} does not lie in the class of the system")]
    WrongClass(String),
    #[error("involution does not fit the ambient: {0}")]
    BadInvolution(String),
}

/// Parity constraint on the `t1`-exponent of a budgeted generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TParity {
    All,
    Even,
    Odd,
}

impl TParity {
    fn min_k1(self) -> i64 {
        match self {
            TParity::All | TParity::Even => 0,
            TParity::Odd => 1,
        }
    }

    fn max_k1(self, budget: i64) -> i64 {
        match self {
            TParity::All => budget,
            TParity::Even => budget - budget.rem_euclid(2),
            TParity::Odd => {
                if budget.rem_euclid(2) == 1 {
                    budget
                } else {
                    budget - 1
                }
            }
        }
    }

    fn admits(self, k1: i64) -> bool {
        match self {
            TParity::All => true,
            TParity::Even => k1 % 2 == 0,
            TParity::Odd => k1 % 2 == 1,
        }
    }

    /// Number of admissible `k1` in `0..=budget`.
    fn count(self, budget: i64) -> i64 {
        if budget < 0 {
            return 0;
        }
        match self {
            TParity::All => budget + 1,
            TParity::Even => budget / 2 + 1,
            TParity::Odd => (budget + 1) / 2,
        }
    }
}

/// One budgeted generator family of a scroll system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrollGen {
    pub x_exps: [u32; 3],
    pub t_budget: i64,
    pub t_parity: TParity,
}

impl ScrollGen {
    fn is_empty(&self) -> bool {
        self.t_parity.count(self.t_budget) == 0
    }

    fn min_exp(&self, var: usize) -> i64 {
        match var {
            0 => self.t_budget - self.t_parity.max_k1(self.t_budget),
            1 => self.t_parity.min_k1(),
            v => self.x_exps[v - 2] as i64,
        }
    }

    /// Minimal total exponent over a set of variables, attained by one
    /// monomial of the family (`k0 + k1` is constant, so the base variables
    /// must be handled jointly).
    fn min_vanishing_order(&self, vars: &[usize]) -> i64 {
        let has_t0 = vars.contains(&0);
        let has_t1 = vars.contains(&1);
        let x_part: i64 = vars
            .iter()
            .filter(|&&v| v >= 2)
            .map(|&v| self.x_exps[v - 2] as i64)
            .sum();
        let t_part = match (has_t0, has_t1) {
            (true, true) => self.t_budget,
            (true, false) => self.min_exp(0),
            (false, true) => self.min_exp(1),
            (false, false) => 0,
        };
        x_part + t_part
    }

    /// The distinct variable supports of the monomials in this family.
    fn supports(&self) -> Vec<BTreeSet<usize>> {
        let x_support: BTreeSet<usize> = self
            .x_exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j + 2)
            .collect();
        let e = self.t_budget;
        let mut t_options: Vec<BTreeSet<usize>> = Vec::new();
        if e == 0 {
            if self.t_parity.admits(0) {
                t_options.push(BTreeSet::new());
            }
        } else {
            if self.t_parity.admits(0) {
                t_options.push([0usize].into_iter().collect());
            }
            if self.t_parity.admits(e) {
                t_options.push([1usize].into_iter().collect());
            }
            // A strictly interior k1 of the right parity exists?
            let min_pos = if self.t_parity.admits(1) { 1 } else { 2 };
            if min_pos < e {
                t_options.push([0usize, 1].into_iter().collect());
            }
        }
        t_options
            .into_iter()
            .map(|t| t.union(&x_support).copied().collect())
            .collect()
    }
}

/// Generator storage of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
enum GenSet {
    Budgeted(Vec<ScrollGen>),
    Explicit(Vec<Monomial>),
}

/// A monomial linear system: the generic member of the span of an explicit
/// finite monomial set in one divisor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSystem {
    ambient: CoxAmbient,
    class: DivisorClass,
    gens: GenSet,
}

/// Result of splitting a system into the two sign components of an
/// involution, relative to the system's first monomial in canonical order.
#[derive(Debug, Clone)]
pub struct ParityDecomposition {
    pub reference: Option<Monomial>,
    pub plus: MonomialSystem,
    pub minus: MonomialSystem,
}

impl MonomialSystem {
    /// The complete system `|class|` on the ambient.
    pub fn full(ambient: &CoxAmbient, class: &DivisorClass) -> Result<Self, LinSysError> {
        ambient.check_class(class)?;
        match ambient.kind() {
            AmbientKind::Scroll { d } => {
                let (b, a) = (class.coeffs()[0], class.coeffs()[1]);
                let mut gens = Vec::new();
                if a >= 0 {
                    for i0 in (0..=a).rev() {
                        for i1 in (0..=a - i0).rev() {
                            let i2 = a - i0 - i1;
                            let budget = b + d[0] * i0 + d[1] * i1 + d[2] * i2;
                            if budget >= 0 {
                                gens.push(ScrollGen {
                                    x_exps: [i0 as u32, i1 as u32, i2 as u32],
                                    t_budget: budget,
                                    t_parity: TParity::All,
                                });
                            }
                        }
                    }
                }
                Ok(MonomialSystem {
                    ambient: ambient.clone(),
                    class: class.clone(),
                    gens: GenSet::Budgeted(gens),
                })
            }
            AmbientKind::WeightedProjective { weights } => {
                let deg = class.coeffs()[0];
                let mut monos = Vec::new();
                let mut exps = vec![0u32; weights.len()];
                enumerate_weighted(weights, deg, 0, &mut exps, &mut monos);
                monos.sort_by(|x, y| ambient.canonical_cmp(x, y));
                Ok(MonomialSystem {
                    ambient: ambient.clone(),
                    class: class.clone(),
                    gens: GenSet::Explicit(monos),
                })
            }
        }
    }

    /// The relative hyperplane system `|M|` of a scroll.
    pub fn m_system(ambient: &CoxAmbient) -> Result<Self, LinSysError> {
        let class = ambient.class_m()?;
        Self::full(ambient, &class)
    }

    /// The branch system `|R|` of the anticanonical double cover of a scroll.
    pub fn ram_system(ambient: &CoxAmbient) -> Result<Self, LinSysError> {
        let class = ambient.ramification_class()?;
        Self::full(ambient, &class)
    }

    /// An explicit system from a monomial list (each must lie in `class`).
    pub fn from_monomials(
        ambient: &CoxAmbient,
        class: &DivisorClass,
        monomials: Vec<Monomial>,
    ) -> Result<Self, LinSysError> {
        ambient.check_class(class)?;
        for m in &monomials {
            if &ambient.monomial_class(m)? != class {
                return Err(LinSysError::WrongClass(ambient.format_monomial(m)));
            }
        }
        let mut monos = monomials;
        monos.sort_by(|x, y| ambient.canonical_cmp(x, y));
        monos.dedup();
        Ok(MonomialSystem {
            ambient: ambient.clone(),
            class: class.clone(),
            gens: GenSet::Explicit(monos),
        })
    }

    pub fn ambient(&self) -> &CoxAmbient {
        &self.ambient
    }

    pub fn class(&self) -> &DivisorClass {
        &self.class
    }

    pub fn is_empty(&self) -> bool {
        match &self.gens {
            GenSet::Budgeted(gens) => gens.iter().all(|g| g.is_empty()),
            GenSet::Explicit(m) => m.is_empty(),
        }
    }

    /// The dimension `h^0` of the system: the number of monomials.
    pub fn h0(&self) -> i64 {
        match &self.gens {
            GenSet::Budgeted(gens) => gens.iter().map(|g| g.t_parity.count(g.t_budget)).sum(),
            GenSet::Explicit(m) => m.len() as i64,
        }
    }

    /// All monomials in canonical order.
    pub fn materialize(&self) -> Vec<Monomial> {
        match &self.gens {
            GenSet::Budgeted(gens) => {
                let mut out = Vec::new();
                for g in gens {
                    let mut k1 = g.t_parity.min_k1();
                    while k1 <= g.t_budget {
                        if g.t_parity.admits(k1) {
                            let exps = vec![
                                (g.t_budget - k1) as u32,
                                k1 as u32,
                                g.x_exps[0],
                                g.x_exps[1],
                                g.x_exps[2],
                            ];
                            out.push(Monomial::new(exps));
                        }
                        k1 += 1;
                    }
                }
                out.sort_by(|x, y| self.ambient.canonical_cmp(x, y));
                out
            }
            GenSet::Explicit(m) => m.clone(),
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        if m.exps().len() != self.ambient.n_vars() {
            return false;
        }
        match &self.gens {
            GenSet::Budgeted(gens) => gens.iter().any(|g| {
                g.x_exps == [m.exp(2), m.exp(3), m.exp(4)]
                    && (m.exp(0) + m.exp(1)) as i64 == g.t_budget
                    && g.t_parity.admits(m.exp(1) as i64)
            }),
            GenSet::Explicit(monos) => monos.contains(m),
        }
    }

    /// The first monomial in canonical order (the parity reference).
    pub fn reference_monomial(&self) -> Option<Monomial> {
        match &self.gens {
            GenSet::Budgeted(gens) => gens.iter().find(|g| !g.is_empty()).map(|g| {
                let k1 = g.t_parity.min_k1();
                Monomial::new(vec![
                    (g.t_budget - k1) as u32,
                    k1 as u32,
                    g.x_exps[0],
                    g.x_exps[1],
                    g.x_exps[2],
                ])
            }),
            GenSet::Explicit(monos) => monos.first().cloned(),
        }
    }

    /// Split into the `+1` and `-1` components of the involution, with signs
    /// taken relative to the system's first monomial in canonical order (so
    /// the decomposition is invariant under composing the involution with
    /// torus characters).
    pub fn parity_decompose(
        &self,
        inv: &SignInvolution,
    ) -> Result<ParityDecomposition, LinSysError> {
        inv.check_ambient(&self.ambient)
            .map_err(|e| LinSysError::BadInvolution(e.to_string()))?;
        let reference = self.reference_monomial();
        let r0 = match &reference {
            Some(m) => inv.raw_sign(m),
            None => {
                return Ok(ParityDecomposition {
                    reference: None,
                    plus: self.empty_clone(),
                    minus: self.empty_clone(),
                })
            }
        };
        match &self.gens {
            GenSet::Budgeted(gens) => {
                let s0 = inv.signs()[0];
                let s1 = inv.signs()[1];
                let alternating = s0 * s1 == -1;
                let mut plus = Vec::new();
                let mut minus = Vec::new();
                for g in gens {
                    if g.is_empty() {
                        continue;
                    }
                    let sigma_x = {
                        let mut s = 1i8;
                        for (j, &e) in g.x_exps.iter().enumerate() {
                            if inv.signs()[j + 2] == -1 && e % 2 == 1 {
                                s = -s;
                            }
                        }
                        s
                    };
                    let base = sigma_x * if s0 == -1 && g.t_budget % 2 == 1 { -1 } else { 1 };
                    let sub_parities: Vec<(TParity, i8)> = match (g.t_parity, alternating) {
                        (TParity::All, true) => vec![(TParity::Even, base), (TParity::Odd, -base)],
                        (TParity::All, false) => vec![(TParity::All, base)],
                        (TParity::Even, _) => vec![(TParity::Even, base)],
                        (TParity::Odd, alt) => vec![(TParity::Odd, if alt { -base } else { base })],
                    };
                    for (parity, sign) in sub_parities {
                        let sub = ScrollGen {
                            x_exps: g.x_exps,
                            t_budget: g.t_budget,
                            t_parity: parity,
                        };
                        if sub.is_empty() {
                            continue;
                        }
                        if sign == r0 {
                            plus.push(sub);
                        } else {
                            minus.push(sub);
                        }
                    }
                }
                Ok(ParityDecomposition {
                    reference,
                    plus: MonomialSystem {
                        ambient: self.ambient.clone(),
                        class: self.class.clone(),
                        gens: GenSet::Budgeted(plus),
                    },
                    minus: MonomialSystem {
                        ambient: self.ambient.clone(),
                        class: self.class.clone(),
                        gens: GenSet::Budgeted(minus),
                    },
                })
            }
            GenSet::Explicit(monos) => {
                let (plus, minus): (Vec<Monomial>, Vec<Monomial>) = monos
                    .iter()
                    .cloned()
                    .partition(|m| inv.raw_sign(m) == r0);
                Ok(ParityDecomposition {
                    reference,
                    plus: MonomialSystem {
                        ambient: self.ambient.clone(),
                        class: self.class.clone(),
                        gens: GenSet::Explicit(plus),
                    },
                    minus: MonomialSystem {
                        ambient: self.ambient.clone(),
                        class: self.class.clone(),
                        gens: GenSet::Explicit(minus),
                    },
                })
            }
        }
    }

    fn empty_clone(&self) -> MonomialSystem {
        MonomialSystem {
            ambient: self.ambient.clone(),
            class: self.class.clone(),
            gens: GenSet::Explicit(Vec::new()),
        }
    }

    /// Restriction to the stratum where the given variables vanish: the
    /// monomials not involving any of them, as an explicit system.
    pub fn restricted_to(&self, vanishing: &[usize]) -> MonomialSystem {
        let monos: Vec<Monomial> = self
            .materialize()
            .into_iter()
            .filter(|m| vanishing.iter().all(|&v| m.exp(v) == 0))
            .collect();
        MonomialSystem {
            ambient: self.ambient.clone(),
            class: self.class.clone(),
            gens: GenSet::Explicit(monos),
        }
    }

    /// Variables dividing every monomial of the system, with the minimal
    /// exponent; nonempty means the generic member has a fixed component.
    pub fn fixed_components(&self) -> Vec<(usize, i64)> {
        if self.is_empty() {
            return Vec::new();
        }
        let n = self.ambient.n_vars();
        let mut mins = vec![i64::MAX; n];
        match &self.gens {
            GenSet::Budgeted(gens) => {
                for g in gens.iter().filter(|g| !g.is_empty()) {
                    for (v, min) in mins.iter_mut().enumerate() {
                        *min = (*min).min(g.min_exp(v));
                    }
                }
            }
            GenSet::Explicit(monos) => {
                for m in monos {
                    for (v, min) in mins.iter_mut().enumerate() {
                        *min = (*min).min(m.exp(v) as i64);
                    }
                }
            }
        }
        mins.into_iter()
            .enumerate()
            .filter(|&(_, e)| e > 0)
            .collect()
    }

    /// Minimal total vanishing order of the system along the locus where the
    /// given variables vanish (`None` for the empty system, whose order is
    /// infinite).
    pub fn min_vanishing_order(&self, vars: &[usize]) -> Option<i64> {
        if self.is_empty() {
            return None;
        }
        match &self.gens {
            GenSet::Budgeted(gens) => gens
                .iter()
                .filter(|g| !g.is_empty())
                .map(|g| g.min_vanishing_order(vars))
                .min(),
            GenSet::Explicit(monos) => monos.iter().map(|m| m.vanishing_order(vars)).min(),
        }
    }

    /// The distinct variable supports among the system's monomials; the base
    /// locus only depends on these.
    pub fn distinct_supports(&self) -> BTreeSet<Vec<usize>> {
        match &self.gens {
            GenSet::Budgeted(gens) => gens
                .iter()
                .filter(|g| !g.is_empty())
                .flat_map(|g| g.supports())
                .map(|s| s.into_iter().collect())
                .collect(),
            GenSet::Explicit(monos) => monos.iter().map(|m| m.support()).collect(),
        }
    }

    /// Formatted monomial list in canonical order.
    pub fn monomial_names(&self) -> Vec<String> {
        self.materialize()
            .iter()
            .map(|m| self.ambient.format_monomial(m))
            .collect()
    }
}

impl Serialize for MonomialSystem {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        let mut st = serializer.serialize_struct("MonomialSystem", 4)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("class", &self.class)?;
        st.serialize_field("h0", &self.h0())?;
        st.serialize_field("monomials", &self.monomial_names())?;
        st.end()
    }
}

fn enumerate_weighted(
    weights: &[i64],
    remaining: i64,
    var: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if remaining < 0 {
        return;
    }
    if var == weights.len() {
        if remaining == 0 {
            out.push(Monomial::new(exps.clone()));
        }
        return;
    }
    let max = remaining / weights[var];
    for e in 0..=max {
        exps[var] = e as u32;
        enumerate_weighted(weights, remaining - e * weights[var], var + 1, exps, out);
    }
    exps[var] = 0;
}
