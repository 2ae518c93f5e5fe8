//! Exact multivariate polynomials over the rationals.
//!
//! The germ analysis only ever needs polynomials in at most four local
//! variables, but it needs them exact: singularity types are decided by
//! vanishing orders of rational expressions, and a floating-point zero test
//! would be meaningless. Coefficients are arbitrary-precision rationals and
//! every operation is exact; truncation to a total-degree cap is explicit
//! and used by the series-style computations, whose results are then exact
//! below the cap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial in a fixed number of variables with rational coefficients.
/// Terms are keyed by exponent vectors; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    n_vars: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl MPoly {
    pub fn zero(n_vars: usize) -> Self {
        MPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut p = MPoly::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn var(n_vars: usize, v: usize) -> Self {
        assert!(v < n_vars, "variable index out of range");
        let mut exps = vec![0u16; n_vars];
        exps[v] = 1;
        let mut p = MPoly::zero(n_vars);
        p.add_term(exps, BigRational::one());
        p
    }

    pub fn monomial(n_vars: usize, exps: &[u16], coeff: BigRational) -> Self {
        assert_eq!(exps.len(), n_vars);
        let mut p = MPoly::zero(n_vars);
        p.add_term(exps.to_vec(), coeff);
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coeff(&self, exps: &[u16]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, exps: Vec<u16>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.n_vars);
        }
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = MPoly::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Product truncated to total degree `cap` (exact below the cap).
    pub fn mul_trunc(&self, other: &MPoly, cap: u32) -> MPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = MPoly::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().map(|&e| e as u32).sum();
            if da > cap {
                continue;
            }
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().map(|&e| e as u32).sum();
                if da + db > cap {
                    continue;
                }
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Drop all terms of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> MPoly {
        MPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() <= cap)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> MPoly {
        MPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        assert!(v < self.n_vars);
        let mut out = MPoly::zero(self.n_vars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[v] -= 1;
            out.add_term(exps, c * BigRational::from(BigInt::from(e[v])));
        }
        out
    }

    /// Substitute a rational constant for one variable.
    pub fn substitute(&self, v: usize, value: &BigRational) -> MPoly {
        assert!(v < self.n_vars);
        let mut out = MPoly::zero(self.n_vars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            let k = exps[v];
            exps[v] = 0;
            let mut coeff = c.clone();
            for _ in 0..k {
                coeff *= value;
            }
            out.add_term(exps, coeff);
        }
        out
    }

    /// Substitute a polynomial for one variable, optionally truncating every
    /// intermediate product to a total-degree cap (Horner in that variable,
    /// so the result is exact below the cap).
    pub fn substitute_poly(&self, v: usize, sub: &MPoly, cap: Option<u32>) -> MPoly {
        assert!(v < self.n_vars);
        assert_eq!(sub.n_vars, self.n_vars);
        let max_k = self
            .terms
            .keys()
            .map(|e| e[v])
            .max()
            .unwrap_or(0);
        // Coefficient polynomials of v^k, with the v-slot zeroed.
        let mut by_k: Vec<MPoly> = vec![MPoly::zero(self.n_vars); max_k as usize + 1];
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            let k = exps[v];
            exps[v] = 0;
            by_k[k as usize].add_term(exps, c.clone());
        }
        let mut acc = MPoly::zero(self.n_vars);
        for k in (0..=max_k as usize).rev() {
            acc = match cap {
                Some(c) => acc.mul_trunc(sub, c),
                None => acc.mul(sub),
            };
            acc = acc.add(&by_k[k]);
        }
        acc
    }

    /// Minimal total degree of a term, `None` for the zero polynomial.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .min()
    }

    /// Minimal weighted degree of a term, `None` for the zero polynomial.
    pub fn weighted_min_degree(&self, weights: &[u32]) -> Option<u64> {
        assert_eq!(weights.len(), self.n_vars);
        self.terms
            .keys()
            .map(|e| {
                e.iter()
                    .zip(weights)
                    .map(|(&x, &w)| x as u64 * w as u64)
                    .sum()
            })
            .min()
    }

    /// Order in a single variable: minimal exponent of `v` over all terms.
    pub fn min_exponent(&self, v: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[v]).min()
    }

    /// Evaluate at a full rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.n_vars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (exp, x) in e.iter().zip(point) {
                for _ in 0..*exp {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }

    /// Re-express the polynomial in the listed variables only; `None` when a
    /// term involves a variable outside the list.
    pub fn project(&self, keep: &[usize]) -> Option<MPoly> {
        let mut out = MPoly::zero(keep.len());
        for (e, c) in &self.terms {
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 && !keep.contains(&v) {
                    return None;
                }
            }
            let exps: Vec<u16> = keep.iter().map(|&v| e[v]).collect();
            out.add_term(exps, c.clone());
        }
        Some(out)
    }

    /// Apply a linear change of variables: each variable `v` is replaced by
    /// the linear form with the coefficients in `matrix[v]` (rows index the
    /// old variables, columns the new ones).
    pub fn linear_change(&self, matrix: &[Vec<BigRational>]) -> MPoly {
        assert_eq!(matrix.len(), self.n_vars);
        let forms: Vec<MPoly> = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.n_vars);
                let mut f = MPoly::zero(self.n_vars);
                for (u, c) in row.iter().enumerate() {
                    let mut exps = vec![0u16; self.n_vars];
                    exps[u] = 1;
                    f.add_term(exps, c.clone());
                }
                f
            })
            .collect();
        let mut out = MPoly::zero(self.n_vars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(self.n_vars, c.clone());
            for (v, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&forms[v]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Reduce the coefficients modulo a prime after clearing denominators
    /// termwise: each coefficient maps to `num * den^{-1} mod p`. `None`
    /// when a denominator vanishes modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<(Vec<u16>, u64)>> {
        let pb = BigInt::from(p);
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let num = ((c.numer() % &pb) + &pb) % &pb;
            let den = ((c.denom() % &pb) + &pb) % &pb;
            let den: u64 = den.try_into().expect("residue fits in u64");
            if den == 0 {
                return None;
            }
            let num: u64 = num.try_into().expect("residue fits in u64");
            let c = num * mod_inverse(den, p) % p;
            if c != 0 {
                out.push((e.clone(), c));
            }
        }
        Some(out)
    }

    /// Render with the given variable names, terms in graded order.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.n_vars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u16>> = self.terms.keys().collect();
        keys.sort_by_key(|e| {
            (
                e.iter().map(|&x| x as u32).sum::<u32>(),
                (*e).clone(),
            )
        });
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(mag.to_string());
            }
            for (v, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], exp)),
                }
            }
            out.push_str(&factors.join(" "));
        }
        out
    }
}

/// Modular inverse for a unit modulo a prime, by Fermat.
pub fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}
