//! Sign involutions of a Cox ambient.
//!
//! An involution here acts by flipping the signs of some Cox coordinates.
//! Two sign vectors induce the same involution of the quotient variety when
//! they differ by a torus element with entries `±1`, and conjugate involutions
//! arise from permuting coordinates with identical weight columns (fiber
//! coordinates of equal twist on a scroll, equal weights on weighted
//! projective space). [`canonical_forms`] enumerates representatives of the
//! nontrivial classes; [`SignInvolution::normalize`] picks a canonical
//! representative of a class.

use crate::ambient::{AmbientKind, CoxAmbient, Monomial};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("sign vector entries must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("sign vector has {got} entries but the ambient has {want} variables")]
    LengthMismatch { got: usize, want: usize },
    #[error("no distinguished involution is defined for this ambient")]
    NoStandardForm,
}

/// A coordinate sign involution, stored as one sign per Cox variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignInvolution {
    signs: Vec<i8>,
}

impl SignInvolution {
    pub fn new(signs: Vec<i8>) -> Result<Self, InvolutionError> {
        if let Some(&bad) = signs.iter().find(|s| s.abs() != 1) {
            return Err(InvolutionError::BadSign(bad));
        }
        Ok(SignInvolution { signs })
    }

    /// The distinguished involution of the construction. On a scroll it flips
    /// `t1, x0, x2` (pattern `(+,-,-,+,-)`); on `P(1,1,1,2,3)` it flips
    /// `x2, x3, x4` (pattern `(+,+,-,-,-)`).
    pub fn standard_sigma(ambient: &CoxAmbient) -> Result<Self, InvolutionError> {
        match ambient.kind() {
            AmbientKind::Scroll { .. } => Ok(SignInvolution {
                signs: vec![1, -1, -1, 1, -1],
            }),
            AmbientKind::WeightedProjective { weights } if weights == &[1, 1, 1, 2, 3] => {
                Ok(SignInvolution {
                    signs: vec![1, 1, -1, -1, -1],
                })
            }
            _ => Err(InvolutionError::NoStandardForm),
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_vars(&self) -> usize {
        self.signs.len()
    }

    pub fn check_ambient(&self, ambient: &CoxAmbient) -> Result<(), InvolutionError> {
        if self.signs.len() != ambient.n_vars() {
            return Err(InvolutionError::LengthMismatch {
                got: self.signs.len(),
                want: ambient.n_vars(),
            });
        }
        Ok(())
    }

    /// The raw sign of a monomial: the product of coordinate signs raised to
    /// the exponents. Within one divisor class, signs relative to a fixed
    /// reference monomial are what is geometrically meaningful.
    pub fn raw_sign(&self, m: &Monomial) -> i8 {
        let mut s = 1i8;
        for (v, &e) in m.exps().iter().enumerate() {
            if self.signs[v] == -1 && e % 2 == 1 {
                s = -s;
            }
        }
        s
    }

    /// Pointwise product with another sign vector.
    pub fn compose(&self, other: &[i8]) -> SignInvolution {
        SignInvolution {
            signs: self
                .signs
                .iter()
                .zip(other)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Whether this sign vector is realized by a torus element with `±1`
    /// entries, i.e. acts as the identity on the quotient variety.
    pub fn is_torus_character(&self, ambient: &CoxAmbient) -> bool {
        torus_pm_characters(ambient).contains(&self.signs)
    }

    /// The canonical representative of this involution's equivalence class:
    /// the lexicographically smallest sign vector (with `+1` ordered before
    /// `-1`) over torus compositions and equal-weight coordinate permutations.
    pub fn normalize(&self, ambient: &CoxAmbient) -> SignInvolution {
        let mut best: Option<Vec<i8>> = None;
        for chi in torus_pm_characters(ambient) {
            let composed: Vec<i8> = self
                .signs
                .iter()
                .zip(&chi)
                .map(|(a, b)| a * b)
                .collect();
            for perm in equal_weight_permutations(ambient) {
                let mut permuted = vec![0i8; composed.len()];
                for (i, &p) in perm.iter().enumerate() {
                    // perm maps position i to position p: new[p] = old[i]
                    permuted[p] = composed[i];
                }
                let better = match &best {
                    None => true,
                    Some(b) => lex_key(&permuted) < lex_key(b),
                };
                if better {
                    best = Some(permuted);
                }
            }
        }
        SignInvolution {
            signs: best.expect("orbit is nonempty"),
        }
    }

    /// Two sign vectors inducing the same involution class?
    pub fn same_class(&self, other: &SignInvolution, ambient: &CoxAmbient) -> bool {
        self.normalize(ambient) == other.normalize(ambient)
    }

    /// Human-readable sign pattern, e.g. `(+,-,-,+,-)`.
    pub fn pattern(&self) -> String {
        let inner: Vec<&str> = self
            .signs
            .iter()
            .map(|&s| if s == 1 { "+" } else { "-" })
            .collect();
        format!("({})", inner.join(","))
    }
}

fn lex_key(signs: &[i8]) -> Vec<u8> {
    // +1 sorts before -1.
    signs.iter().map(|&s| if s == 1 { 0u8 } else { 1u8 }).collect()
}

/// All sign vectors realized by torus elements with `±1` entries. A torus
/// element `eps` acts on variable `v` by `prod_j eps_j ^ weight_j(v)`; only
/// weight parities matter.
pub fn torus_pm_characters(ambient: &CoxAmbient) -> Vec<Vec<i8>> {
    let k = ambient.torus_rank();
    let n = ambient.n_vars();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let mut chi = vec![1i8; n];
        for (v, c) in chi.iter_mut().enumerate() {
            for j in 0..k {
                if mask >> j & 1 == 1 && ambient.weight(j, v).rem_euclid(2) == 1 {
                    *c = -*c;
                }
            }
        }
        if !out.contains(&chi) {
            out.push(chi);
        }
    }
    out
}

/// Permutations of the Cox variables preserving the weight matrix column-wise,
/// restricted to the fiber/weighted coordinates (base coordinates of a scroll
/// are kept in place). Each permutation is encoded as `perm[i] = image of i`.
pub fn equal_weight_permutations(ambient: &CoxAmbient) -> Vec<Vec<usize>> {
    let n = ambient.n_vars();
    // Group the permutable variables into blocks of identical weight columns.
    let permutable: Vec<usize> = match ambient.kind() {
        AmbientKind::Scroll { .. } => (2..n).collect(),
        AmbientKind::WeightedProjective { .. } => (0..n).collect(),
    };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &permutable {
        match blocks
            .iter_mut()
            .find(|b| ambient.var_weights(b[0]) == ambient.var_weights(v))
        {
            Some(b) => b.push(v),
            None => blocks.push(vec![v]),
        }
    }
    // The full permutation group is the product of symmetric groups per block.
    let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
    for block in &blocks {
        let block_perms = permutations_of(block.len());
        let mut next = Vec::with_capacity(perms.len() * block_perms.len());
        for base in &perms {
            for bp in &block_perms {
                let mut perm = base.clone();
                for (slot, &img) in bp.iter().enumerate() {
                    perm[block[slot]] = base[block[img]];
                }
                next.push(perm);
            }
        }
        perms = next;
    }
    perms
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Representatives of the nontrivial involution classes of the ambient:
/// all `±1` sign vectors modulo torus characters and equal-weight coordinate
/// permutations, with the identity class removed, each class reported by its
/// normalized representative, sorted.
pub fn canonical_forms(ambient: &CoxAmbient) -> Vec<SignInvolution> {
    let n = ambient.n_vars();
    let mut reps: Vec<SignInvolution> = Vec::new();
    for mask in 0u32..(1 << n) {
        let signs: Vec<i8> = (0..n)
            .map(|v| if mask >> v & 1 == 1 { -1 } else { 1 })
            .collect();
        let inv = SignInvolution { signs };
        if inv.is_torus_character(ambient) {
            continue;
        }
        let norm = inv.normalize(ambient);
        if !reps.contains(&norm) {
            reps.push(norm);
        }
    }
    reps.sort_by_key(|r| lex_key(&r.signs));
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sigma_patterns() {
        let f = CoxAmbient::scroll(8, 6, 0).unwrap();
        let sigma = SignInvolution::standard_sigma(&f).unwrap();
        assert_eq!(sigma.signs(), &[1, -1, -1, 1, -1]);
        let p = CoxAmbient::wps_11123();
        let tau = SignInvolution::standard_sigma(&p).unwrap();
        assert_eq!(tau.signs(), &[1, 1, -1, -1, -1]);
        let q = CoxAmbient::weighted_projective(&[1, 1, 2]).unwrap();
        assert!(SignInvolution::standard_sigma(&q).is_err());
    }

    #[test]
    fn raw_signs_on_the_branch_system() {
        let f = CoxAmbient::scroll(7, 5, 0).unwrap();
        let sigma = SignInvolution::standard_sigma(&f).unwrap();
        // t0^8 x0^4: flips from x0^4 none (even), t0 positive: sign +.
        let m = f.parse_monomial("t0^8 x0^4").unwrap();
        assert_eq!(sigma.raw_sign(&m), 1);
        // t0 x0^3 x2: x0^3 contributes -, x2 contributes -, t0 +: total +.
        let m = f.parse_monomial("t0 x0^3 x2").unwrap();
        assert_eq!(sigma.raw_sign(&m), 1);
        // t1 x0^2 x1 x2: t1 -, x2 -: total +... x0^2 even, x1 +: sign = +.
        let m = f.parse_monomial("t1 x0^2 x1 x2").unwrap();
        assert_eq!(sigma.raw_sign(&m), 1);
        // x1^4: all contributions even or positive: +.
        let m = f.parse_monomial("x1^4").unwrap();
        assert_eq!(sigma.raw_sign(&m), 1);
        // t1^5 x1: t1^5 flips: -.
        let m = f.parse_monomial("t1^5 x1").unwrap();
        assert_eq!(sigma.raw_sign(&m), -1);
    }

    #[test]
    fn torus_characters_of_a_scroll() {
        // On F(2,2,0) the +/-1 torus elements realize exactly four sign
        // vectors: the two base signs move together, the three fiber signs
        // move together (all twists are even).
        let f = CoxAmbient::scroll(2, 2, 0).unwrap();
        let chars = torus_pm_characters(&f);
        assert_eq!(chars.len(), 4);
        assert!(chars.contains(&vec![1, 1, 1, 1, 1]));
        assert!(chars.contains(&vec![-1, -1, 1, 1, 1]));
        assert!(chars.contains(&vec![1, 1, -1, -1, -1]));
        assert!(chars.contains(&vec![-1, -1, -1, -1, -1]));
        // On F(3,1,0) the odd twists couple base and fiber flips.
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        let chars = torus_pm_characters(&f);
        assert_eq!(chars.len(), 4);
        assert!(chars.contains(&vec![-1, -1, -1, -1, 1]));
    }

    #[test]
    fn normalization_is_idempotent_and_class_invariant() {
        for d in [[2, 2, 0], [3, 1, 0], [7, 5, 0]] {
            let f = CoxAmbient::scroll(d[0], d[1], d[2]).unwrap();
            let sigma = SignInvolution::standard_sigma(&f).unwrap();
            let norm = sigma.normalize(&f);
            assert_eq!(norm.normalize(&f), norm);
            assert!(sigma.same_class(&norm, &f));
            // Composing with any torus character stays in the class.
            for chi in torus_pm_characters(&f) {
                assert!(sigma.compose(&chi).same_class(&sigma, &f));
            }
            // Sigma is not the identity on the quotient.
            assert!(!sigma.is_torus_character(&f));
        }
    }

    #[test]
    fn canonical_form_counts_frozen() {
        // Brute-force orbit counts: the class group {±1}^5 / torus has order
        // 8; removing the identity class leaves 7; for d1 = d2 the fiber swap
        // x0 <-> x1 fuses the classes with opposite x0-x1 signs, leaving 5.
        let f = CoxAmbient::scroll(2, 2, 0).unwrap();
        assert_eq!(canonical_forms(&f).len(), 5);
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        assert_eq!(canonical_forms(&f).len(), 7);
        let f = CoxAmbient::scroll(8, 6, 0).unwrap();
        let forms = canonical_forms(&f);
        assert_eq!(forms.len(), 7);
        // The standard involution's class is among the representatives.
        let sigma = SignInvolution::standard_sigma(&f).unwrap();
        assert!(forms.contains(&sigma.normalize(&f)));
        // Representatives are normalized, distinct and nontrivial.
        for r in &forms {
            assert_eq!(r.normalize(&f), *r);
            assert!(!r.is_torus_character(&f));
        }
    }

    #[test]
    fn equal_weight_permutation_groups() {
        // F(2,2,0): x0 and x1 share a column; x2 differs. 2 permutations.
        let f = CoxAmbient::scroll(2, 2, 0).unwrap();
        assert_eq!(equal_weight_permutations(&f).len(), 2);
        // F(2,2,2): all three fiber coordinates interchangeable: 6.
        let f = CoxAmbient::scroll(2, 2, 2).unwrap();
        assert_eq!(equal_weight_permutations(&f).len(), 6);
        // F(3,1,0): all columns distinct: only the identity.
        let f = CoxAmbient::scroll(3, 1, 0).unwrap();
        assert_eq!(equal_weight_permutations(&f).len(), 1);
        // P(1,1,1,2,3): x0,x1,x2 interchangeable: 6.
        let p = CoxAmbient::wps_11123();
        assert_eq!(equal_weight_permutations(&p).len(), 6);
    }

    #[test]
    fn orbit_brute_force_cross_check() {
        // Independent orbit count on F(2,2,0): partition all 32 sign vectors
        // by joint torus-and-permutation reachability and count classes.
        let f = CoxAmbient::scroll(2, 2, 0).unwrap();
        let mut classes: Vec<Vec<Vec<i8>>> = Vec::new();
        for mask in 0u32..32 {
            let signs: Vec<i8> = (0..5)
                .map(|v| if mask >> v & 1 == 1 { -1 } else { 1 })
                .collect();
            let inv = SignInvolution::new(signs.clone()).unwrap();
            let norm = inv.normalize(&f).signs().to_vec();
            match classes.iter_mut().find(|c| c[0] == norm) {
                Some(c) => c.push(signs),
                None => classes.push(vec![norm, signs]),
            }
        }
        // 8 torus-and-swap classes in total: the identity class plus 7 others,
        // of which two pairs fuse under the swap: 6 + ... counted directly:
        let identity_classes = classes
            .iter()
            .filter(|c| {
                SignInvolution::new(c[0].clone())
                    .unwrap()
                    .is_torus_character(&f)
            })
            .count();
        assert_eq!(identity_classes, 1);
        assert_eq!(classes.len() - identity_classes, 5);
    }
}
