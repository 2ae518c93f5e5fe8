//! Cox-coordinate models of the ambient spaces.
//!
//! A scroll `F(d1, d2, d3)` with `d1 >= d2 >= d3 >= 0` is the quotient of
//! `(C^2 \ 0) x (C^3 \ 0)` by `(C*)^2`, with coordinates `t0, t1` on the base
//! and `x0, x1, x2` on the fibers. The weight matrix is
//!
//! ```text
//!        t0  t1    x0    x1    x2
//! row 0:  1   1  -d1   -d2   -d3      (fiber degree over P^1)
//! row 1:  0   0    1     1     1      (relative hyperplane degree)
//! ```
//!
//! so a divisor class `a*M + b*L` (`M` the relative hyperplane, `L` the fiber)
//! corresponds to the weight vector `(b, a)`, and a monomial
//! `t0^k0 t1^k1 x0^i0 x1^i1 x2^i2` lies in `|a*M + b*L|` exactly when
//! `i0 + i1 + i2 = a` and `k0 + k1 = b + d1*i0 + d2*i1 + d3*i2 >= 0`.
//!
//! A weighted projective space `P(w0..w_{n-1})` is the rank-one analogue: one
//! weight row, one irrelevant group containing every variable.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Errors produced by ambient-space constructors and class arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmbientError {
    #[error("scroll degrees must satisfy d1 >= d2 >= d3 >= 0, got ({0}, {1}, {2})")]
    InvalidScroll(i64, i64, i64),
    #[error("weighted projective space needs at least two positive weights, got {0:?}")]
    InvalidWeights(Vec<i64>),
    #[error("divisor class has {got} coefficients but the ambient torus rank is {want}")]
    ClassRankMismatch { got: usize, want: usize },
    #[error("monomial has {got} exponents but the ambient has {want} variables")]
    VariableCountMismatch { got: usize, want: usize },
    #[error("{0} is only defined on scroll ambients")]
    ScrollOnly(&'static str),
}

/// The two ambient shapes the toolkit models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbientKind {
    Scroll { d: [i64; 3] },
    WeightedProjective { weights: Vec<i64> },
}

/// A toric ambient space presented by Cox coordinates: named variables, an
/// integer weight matrix (rows = torus factors), and irrelevant variable
/// groups (no point of the variety has all variables of a group vanishing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxAmbient {
    kind: AmbientKind,
    var_names: Vec<String>,
    /// `weights[row][var]`, `torus_rank` rows of `n_vars` entries.
    weights: Vec<Vec<i64>>,
    /// Indices of variables forming each irrelevant group.
    irrelevant: Vec<Vec<usize>>,
}

impl CoxAmbient {
    /// The scroll `F(d1, d2, d3)`; requires `d1 >= d2 >= d3 >= 0`.
    pub fn scroll(d1: i64, d2: i64, d3: i64) -> Result<Self, AmbientError> {
        if !(d1 >= d2 && d2 >= d3 && d3 >= 0) {
            return Err(AmbientError::InvalidScroll(d1, d2, d3));
        }
        Ok(CoxAmbient {
            kind: AmbientKind::Scroll { d: [d1, d2, d3] },
            var_names: ["t0", "t1", "x0", "x1", "x2"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            weights: vec![vec![1, 1, -d1, -d2, -d3], vec![0, 0, 1, 1, 1]],
            irrelevant: vec![vec![0, 1], vec![2, 3, 4]],
        })
    }

    /// The weighted projective space `P(w0, ..., w_{n-1})`.
    pub fn weighted_projective(weights: &[i64]) -> Result<Self, AmbientError> {
        if weights.len() < 2 || weights.iter().any(|&w| w < 1) {
            return Err(AmbientError::InvalidWeights(weights.to_vec()));
        }
        Ok(CoxAmbient {
            kind: AmbientKind::WeightedProjective {
                weights: weights.to_vec(),
            },
            var_names: (0..weights.len()).map(|i| format!("x{i}")).collect(),
            weights: vec![weights.to_vec()],
            irrelevant: vec![(0..weights.len()).collect()],
        })
    }

    /// The weighted projective space `P(1,1,1,2,3)` hosting the sextic
    /// double-cover model.
    pub fn wps_11123() -> Self {
        Self::weighted_projective(&[1, 1, 1, 2, 3]).expect("fixed valid weights")
    }

    pub fn kind(&self) -> &AmbientKind {
        &self.kind
    }

    pub fn is_scroll(&self) -> bool {
        matches!(self.kind, AmbientKind::Scroll { .. })
    }

    /// Scroll degrees `(d1, d2, d3)`.
    pub fn scroll_degrees(&self) -> Result<[i64; 3], AmbientError> {
        match self.kind {
            AmbientKind::Scroll { d } => Ok(d),
            _ => Err(AmbientError::ScrollOnly("scroll_degrees")),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn torus_rank(&self) -> usize {
        self.weights.len()
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.var_names[v]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|n| n == name)
    }

    pub fn weight(&self, row: usize, var: usize) -> i64 {
        self.weights[row][var]
    }

    /// The weight column of one variable.
    pub fn var_weights(&self, var: usize) -> Vec<i64> {
        self.weights.iter().map(|row| row[var]).collect()
    }

    pub fn irrelevant_groups(&self) -> &[Vec<usize>] {
        &self.irrelevant
    }

    /// The multidegree of a monomial under the torus weights.
    pub fn monomial_class(&self, m: &Monomial) -> Result<DivisorClass, AmbientError> {
        if m.exps.len() != self.n_vars() {
            return Err(AmbientError::VariableCountMismatch {
                got: m.exps.len(),
                want: self.n_vars(),
            });
        }
        let coeffs = self
            .weights
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&m.exps)
                    .map(|(w, &e)| w * e as i64)
                    .sum::<i64>()
            })
            .collect();
        Ok(DivisorClass { coeffs })
    }

    /// The class `M` (relative hyperplane) on a scroll.
    pub fn class_m(&self) -> Result<DivisorClass, AmbientError> {
        if !self.is_scroll() {
            return Err(AmbientError::ScrollOnly("class_m"));
        }
        Ok(DivisorClass { coeffs: vec![0, 1] })
    }

    /// The class `L` (fiber) on a scroll.
    pub fn class_l(&self) -> Result<DivisorClass, AmbientError> {
        if !self.is_scroll() {
            return Err(AmbientError::ScrollOnly("class_l"));
        }
        Ok(DivisorClass { coeffs: vec![1, 0] })
    }

    /// `a*M + b*L` on a scroll.
    pub fn scroll_class(&self, a: i64, b: i64) -> Result<DivisorClass, AmbientError> {
        if !self.is_scroll() {
            return Err(AmbientError::ScrollOnly("scroll_class"));
        }
        Ok(DivisorClass { coeffs: vec![b, a] })
    }

    /// Degree-`deg` class on a weighted projective space.
    pub fn wps_class(&self, deg: i64) -> Result<DivisorClass, AmbientError> {
        match self.kind {
            AmbientKind::WeightedProjective { .. } => Ok(DivisorClass { coeffs: vec![deg] }),
            _ => Err(AmbientError::ScrollOnly("wps_class (weighted ambients)")),
        }
    }

    /// Triple self-intersection of `a*M + b*L` on a scroll: using
    /// `M^3 = d1+d2+d3`, `M^2 L = 1`, `M L^2 = L^3 = 0`, this is
    /// `a^3 (d1+d2+d3) + 3 a^2 b`.
    pub fn triple_intersection(&self, class: &DivisorClass) -> Result<i64, AmbientError> {
        let d = self.scroll_degrees()?;
        self.check_class(class)?;
        let (b, a) = (class.coeffs[0], class.coeffs[1]);
        let sum: i64 = d.iter().sum();
        Ok(a.pow(3) * sum + 3 * a * a * b)
    }

    /// The canonical class: `-3M + (d1+d2+d3-2)L` on a scroll,
    /// `-(sum of weights) * H` on a weighted projective space.
    pub fn canonical_class(&self) -> DivisorClass {
        match &self.kind {
            AmbientKind::Scroll { d } => DivisorClass {
                coeffs: vec![d.iter().sum::<i64>() - 2, -3],
            },
            AmbientKind::WeightedProjective { weights } => DivisorClass {
                coeffs: vec![-weights.iter().sum::<i64>()],
            },
        }
    }

    /// The branch-divisor class of the anticanonical double cover on a scroll:
    /// `R = -2K - 2M = 4M - 2(d1+d2+d3-2)L`, so that `2M = -2K - R`.
    pub fn ramification_class(&self) -> Result<DivisorClass, AmbientError> {
        let d = self.scroll_degrees()?;
        let sum: i64 = d.iter().sum();
        Ok(DivisorClass {
            coeffs: vec![-2 * (sum - 2), 4],
        })
    }

    /// Numerical invariants of the degree-2 Fano model carried by the scroll:
    /// anticanonical degree `-K^3 = 2(d1+d2+d3)`, genus `g = (d1+d2+d3)/2 + 1`
    /// (`-K^3 = 4g - 4`), the half-degree `H^3 = (d1+d2+d3)` and the embedding
    /// parameter `n = -K^3/2 + 2`.
    pub fn fano_invariants(&self) -> Result<FanoInvariants, AmbientError> {
        let d = self.scroll_degrees()?;
        let sum: i64 = d.iter().sum();
        Ok(FanoInvariants {
            minus_k_cubed: 2 * sum,
            h_cubed: sum,
            genus: sum / 2 + 1,
            n: sum + 2,
        })
    }

    pub(crate) fn check_class(&self, class: &DivisorClass) -> Result<(), AmbientError> {
        if class.coeffs.len() != self.torus_rank() {
            return Err(AmbientError::ClassRankMismatch {
                got: class.coeffs.len(),
                want: self.torus_rank(),
            });
        }
        Ok(())
    }

    /// Canonical comparison of monomials of one linear system. On a scroll:
    /// descending lexicographic order on the fiber exponents `(i0, i1, i2)`,
    /// then ascending `t1`-exponent. On weighted projective space: descending
    /// lexicographic order on the full exponent vector. The first monomial in
    /// this order serves as the parity reference of a system.
    pub fn canonical_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            AmbientKind::Scroll { .. } => {
                let xa = &a.exps[2..];
                let xb = &b.exps[2..];
                xb.cmp(xa).then_with(|| a.exps[1].cmp(&b.exps[1]))
            }
            AmbientKind::WeightedProjective { .. } => b.exps.cmp(&a.exps),
        }
    }

    /// Render a monomial with the ambient's variable names, e.g. `t0^4 x0^4`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (v, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.var_names[v].clone()),
                _ => parts.push(format!("{}^{}", self.var_names[v], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Parse a monomial in the `format_monomial` syntax (`*` also accepted as
    /// a separator, `1` for the constant monomial).
    pub fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let mut exps = vec![0u32; self.n_vars()];
        let cleaned = s.trim();
        if cleaned == "1" {
            return Some(Monomial::new(exps));
        }
        for part in cleaned.split(|c: char| c.is_whitespace() || c == '*') {
            if part.is_empty() {
                continue;
            }
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().ok()?),
                None => (part, 1),
            };
            let v = self.var_index(name)?;
            exps[v] += exp;
        }
        Some(Monomial::new(exps))
    }
}

impl Serialize for CoxAmbient {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        self.kind.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoxAmbient {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let kind = AmbientKind::deserialize(deserializer)?;
        match kind {
            AmbientKind::Scroll { d } => {
                CoxAmbient::scroll(d[0], d[1], d[2]).map_err(serde::de::Error::custom)
            }
            AmbientKind::WeightedProjective { weights } => {
                CoxAmbient::weighted_projective(&weights).map_err(serde::de::Error::custom)
            }
        }
    }
}

/// Numerical invariants of the scroll's double-cover Fano model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoInvariants {
    pub minus_k_cubed: i64,
    pub h_cubed: i64,
    pub genus: i64,
    pub n: i64,
}

/// An element of the divisor class group, as a vector of torus degrees. On a
/// scroll the coefficients are `(b, a)` for the class `a*M + b*L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `M` on a scroll class.
    pub fn m_coeff(&self) -> i64 {
        self.coeffs[1]
    }

    /// Coefficient of `L` on a scroll class.
    pub fn l_coeff(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 2 {
            write!(f, "{}M{:+}L", self.coeffs[1], self.coeffs[0])
        } else {
            write!(f, "O({})", self.coeffs[0])
        }
    }
}

/// A monomial in the Cox coordinates, as an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.exps[v]
    }

    /// The set of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, _)| v)
            .collect()
    }

    /// Order of vanishing along the locus where the given variables vanish:
    /// the sum of their exponents.
    pub fn vanishing_order(&self, vars: &[usize]) -> i64 {
        vars.iter().map(|&v| self.exps[v] as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scroll_weight_matrix_and_groups() {
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        assert_eq!(f.n_vars(), 5);
        assert_eq!(f.torus_rank(), 2);
        assert_eq!(f.var_weights(0), vec![1, 0]); // t0
        assert_eq!(f.var_weights(1), vec![1, 0]); // t1
        assert_eq!(f.var_weights(2), vec![-3, 1]); // x0
        assert_eq!(f.var_weights(3), vec![-1, 1]); // x1
        assert_eq!(f.var_weights(4), vec![0, 1]); // x2
        assert_eq!(f.irrelevant_groups(), &[vec![0, 1], vec![2, 3, 4]]);
        assert!(CoxAmbient::scroll(1, 2, 0).is_err());
        assert!(CoxAmbient::scroll(2, 1, -1).is_err());
    }

    #[test]
    fn monomial_class_matches_membership_rule() {
        // t0^2 x0^2 x2^2 on F(3,1,0): fiber degree 4, base degree
        // 2 - (3*2 + 0*2) = -4, i.e. the class 4M - 4L.
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        let m = f.parse_monomial("t0^2 x0^2 x2^2").unwrap();
        let class = f.monomial_class(&m).unwrap();
        assert_eq!(class, f.scroll_class(4, -4).unwrap());
        assert_eq!(class.m_coeff(), 4);
        assert_eq!(class.l_coeff(), -4);
    }

    #[test]
    fn triple_intersection_cubic_form() {
        // (aM + bL)^3 = a^3 (d1+d2+d3) + 3 a^2 b, checked against the basic
        // products M^3 = sum d, M^2 L = 1, M L^2 = L^3 = 0 by polarization.
        let f = CoxAmbient::scroll(8, 6, 0).unwrap();
        let m = f.class_m().unwrap();
        let l = f.class_l().unwrap();
        assert_eq!(f.triple_intersection(&m).unwrap(), 14); // M^3
        assert_eq!(f.triple_intersection(&l).unwrap(), 0); // L^3
        // (M+L)^3 = M^3 + 3 M^2 L = 17
        assert_eq!(f.triple_intersection(&m.add(&l)).unwrap(), 17);
        // (2M - 3L)^3 = 8*14 + 3*4*(-3) = 76
        let c = m.scale(2).add(&l.scale(-3));
        assert_eq!(f.triple_intersection(&c).unwrap(), 76);
    }

    #[test]
    fn canonical_and_ramification_classes() {
        let f = CoxAmbient::scroll(7, 5, 0).unwrap();
        // K = -3M + (sum d - 2) L
        assert_eq!(f.canonical_class(), DivisorClass::new(vec![10, -3]));
        // R = 4M - 2(sum d - 2) L and the cover identity 2M = -2K - R.
        let r = f.ramification_class().unwrap();
        assert_eq!(r, DivisorClass::new(vec![-20, 4]));
        let minus_2k = f.canonical_class().scale(-2);
        assert_eq!(minus_2k.add(&r.scale(-1)), f.class_m().unwrap().scale(2));
    }

    #[test]
    fn fano_invariants_of_known_tuples() {
        for (d, deg, g) in [
            ([2, 2, 0], 8, 3),
            ([3, 1, 0], 8, 3),
            ([2, 1, 1], 8, 3),
            ([2, 2, 2], 12, 4),
            ([8, 6, 0], 28, 8),
        ] {
            let f = CoxAmbient::scroll(d[0], d[1], d[2]).unwrap();
            let inv = f.fano_invariants().unwrap();
            assert_eq!(inv.minus_k_cubed, deg);
            assert_eq!(inv.genus, g);
            assert_eq!(inv.minus_k_cubed, 4 * inv.genus - 4);
            assert_eq!(inv.h_cubed * 2, inv.minus_k_cubed);
            assert_eq!(inv.n, inv.minus_k_cubed / 2 + 2);
        }
    }

    #[test]
    fn wps_11123_shape() {
        let p = CoxAmbient::wps_11123();
        assert_eq!(p.n_vars(), 5);
        assert_eq!(p.torus_rank(), 1);
        assert_eq!(p.canonical_class(), DivisorClass::new(vec![-8]));
        let m = p.parse_monomial("x2^2 x3^2").unwrap();
        assert_eq!(p.monomial_class(&m).unwrap(), p.wps_class(6).unwrap());
        assert!(p.triple_intersection(&p.wps_class(1).unwrap()).is_err());
    }

    #[test]
    fn canonical_order_is_x_major_then_t1_minor() {
        let f = CoxAmbient::scroll(2, 2, 0).unwrap();
        let mut ms = vec![
            f.parse_monomial("t1^4 x0^4").unwrap(),
            f.parse_monomial("x0^2 x2^2").unwrap(),
            f.parse_monomial("t0^4 x0^4").unwrap(),
            f.parse_monomial("t0^2 x0^3 x2").unwrap(),
        ];
        ms.sort_by(|a, b| f.canonical_cmp(a, b));
        let names: Vec<String> = ms.iter().map(|m| f.format_monomial(m)).collect();
        assert_eq!(
            names,
            vec!["t0^4 x0^4", "t1^4 x0^4", "t0^2 x0^3 x2", "x0^2 x2^2"]
        );
    }

    #[test]
    fn monomial_round_trip_and_support() {
        let f = CoxAmbient::scroll(5, 3, 0).unwrap();
        let m = f.parse_monomial("t0^3 x0^3 x2").unwrap();
        assert_eq!(f.format_monomial(&m), "t0^3 x0^3 x2");
        assert_eq!(m.support(), vec![0, 2, 4]);
        assert_eq!(m.vanishing_order(&[2, 3]), 3);
        assert_eq!(f.parse_monomial("1").unwrap().support(), Vec::<usize>::new());
        assert!(f.parse_monomial("q7").is_none());
    }

    #[test]
    fn ambient_serialization_is_a_descriptor() {
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"kind":"scroll","d":[3,1,0]}"#);
        let back: CoxAmbient = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let p = CoxAmbient::wps_11123();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"weighted_projective","weights":[1,1,1,2,3]}"#
        );
    }
}
