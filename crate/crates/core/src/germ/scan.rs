//! Exhaustive singular-point scans over a prime field.
//!
//! A symbolic canonicity argument sometimes needs a global statement — "the
//! transformed threefold is smooth away from this curve" — that is cheap to
//! certify pointwise but awkward to prove by hand. Scanning all points of
//! the chart over a prime field gives an independent oracle: the scan finds
//! every solution of `f = df/dx_1 = ... = df/dx_n = 0` over `F_p` by
//! enumeration, which bounds the singular locus of the reduction and pins
//! down exactly where the interesting points sit.
//!
//! Pure-square variables are eliminated first: when a variable `v` occurs
//! in exactly one term and that term is `c v^2`, every singular point has
//! `v = 0` (for odd `p`), so the scan drops to the remaining variables. The
//! stated budget bounds the number of enumerated points after this
//! reduction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::GermError;
use crate::poly::MPoly;

/// Default budget: enough for a full four-variable scan at `p = 101`
/// (101^4 is just above 1.04e8).
pub const SCAN_BUDGET: u64 = 120_000_000;

/// Cap on the number of points stored in the outcome (the count is always
/// exact).
const POINT_CAP: usize = 100_000;

/// Result of a singular-point scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanOutcome {
    pub prime: u64,
    /// Number of singular points of the reduction over `F_p`.
    pub n_points: u64,
    /// The points, coordinates in the variable order of the input
    /// polynomial, sorted lexicographically.
    pub points: Vec<Vec<u64>>,
    /// True when the stored list was capped (the count is still exact).
    pub truncated: bool,
}

type Terms = Vec<(Vec<u16>, u64)>;

/// Find all common zeros of `f` and its partial derivatives over `F_p`.
pub fn singular_scan_fp(poly: &MPoly, p: u64, budget: u64) -> Result<ScanOutcome, GermError> {
    if !is_prime(p) {
        return Err(GermError::NotPrime(p));
    }
    let n = poly.n_vars();
    if n == 0 || n > 4 {
        return Err(GermError::WrongArity { expected: 4, found: n });
    }
    let mut terms: Terms = poly.reduce_mod(p).ok_or(GermError::DenominatorVanishes(p))?;
    if terms.is_empty() {
        // Either the rational polynomial was zero or its reduction is; in
        // both cases "singular locus" is not a meaningful question.
        return Err(GermError::ZeroPolynomial);
    }

    // Strip pure squares (odd characteristic only: d(c v^2) = 2 c v).
    let mut kept: Vec<usize> = (0..n).collect();
    if p != 2 {
        loop {
            let m = kept.len();
            let Some(j) = find_pure_square(&terms, m) else { break };
            terms = terms
                .into_iter()
                .filter(|(e, _)| e[j] == 0)
                .map(|(mut e, c)| {
                    e.remove(j);
                    (e, c)
                })
                .collect();
            kept.remove(j);
        }
    }

    let m = kept.len();
    let needed = (p as u128).pow(m as u32);
    if needed > budget as u128 {
        return Err(GermError::BudgetExceeded {
            needed: needed.min(u64::MAX as u128) as u64,
            budget,
        });
    }

    let inner_points: Vec<Vec<u64>> = if m == 0 {
        if terms.is_empty() {
            // The polynomial was a sum of pure squares: the origin alone.
            vec![vec![]]
        } else {
            // A nonzero constant remains: no singular points.
            vec![]
        }
    } else if terms.is_empty() {
        // Everything was stripped: the polynomial was a sum of pure squares
        // in a proper subset of the variables, so the remaining coordinates
        // are unconstrained and every point of the residual space is
        // singular (the budget check above has bounded their number).
        let mut all = Vec::with_capacity(needed as usize);
        let mut q = vec![0u64; m];
        'odometer: loop {
            all.push(q.clone());
            for j in (0..m).rev() {
                q[j] += 1;
                if q[j] < p {
                    continue 'odometer;
                }
                q[j] = 0;
            }
            break;
        }
        all
    } else {
        scan_dense(&terms, m, p)
    };

    // Re-insert zero coordinates for the stripped variables and sort.
    let mut points: Vec<Vec<u64>> = inner_points
        .into_iter()
        .map(|q| {
            let mut full = vec![0u64; n];
            for (pos, &var) in kept.iter().enumerate() {
                full[var] = q[pos];
            }
            full
        })
        .collect();
    points.sort();
    let n_points = points.len() as u64;
    let truncated = points.len() > POINT_CAP;
    points.truncate(POINT_CAP);
    Ok(ScanOutcome {
        prime: p,
        n_points,
        points,
        truncated,
    })
}

/// A variable that occurs in exactly one term, as a bare square.
fn find_pure_square(terms: &Terms, m: usize) -> Option<usize> {
    'vars: for j in 0..m {
        let mut square = false;
        for (e, _) in terms {
            if e[j] == 0 {
                continue;
            }
            let pure = e[j] == 2 && e.iter().enumerate().all(|(i, &x)| i == j || x == 0);
            if !pure || square {
                continue 'vars;
            }
            square = true;
        }
        if square {
            return Some(j);
        }
    }
    None
}

/// Multiplication context: a lookup table for small primes, direct
/// arithmetic otherwise.
struct FpCtx {
    p: u64,
    table: Option<Vec<u16>>,
}

impl FpCtx {
    fn new(p: u64) -> Self {
        let table = if p <= 512 {
            let mut t = vec![0u16; (p * p) as usize];
            for a in 0..p {
                for b in 0..p {
                    t[(a * p + b) as usize] = ((a * b) % p) as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        FpCtx { p, table }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.table {
            Some(t) => t[(a * self.p + b) as usize] as u64,
            None => a * b % self.p,
        }
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    /// Evaluate a term list at a full point using a power table.
    fn eval_at(&self, terms: &Terms, point: &[u64], pows: &[Vec<u64>]) -> u64 {
        let mut acc = 0u64;
        for (e, c) in terms {
            let mut v = *c;
            for (j, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    v = self.mul(v, pows[point[j] as usize][exp as usize]);
                }
            }
            acc = self.add(acc, v);
        }
        acc
    }
}

/// Formal partial derivative of a term list.
fn derive(terms: &Terms, j: usize, p: u64) -> Terms {
    let mut out: Terms = Vec::new();
    for (e, c) in terms {
        if e[j] == 0 {
            continue;
        }
        let coeff = (e[j] as u64 % p) * c % p;
        if coeff == 0 {
            continue;
        }
        let mut exps = e.clone();
        exps[j] -= 1;
        out.push((exps, coeff));
    }
    out
}

/// Substitute `value` for variable `j`, merging terms.
fn eval_var(terms: &Terms, j: usize, value: u64, ctx: &FpCtx, pows: &[Vec<u64>]) -> Terms {
    let mut map: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
    for (e, c) in terms {
        let mut exps = e.clone();
        let k = exps[j];
        exps[j] = 0;
        let v = if k > 0 {
            ctx.mul(*c, pows[value as usize][k as usize])
        } else {
            *c
        };
        let entry = map.entry(exps).or_insert(0);
        *entry = ctx.add(*entry, v);
    }
    map.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// Dense enumeration over `m >= 1` variables. Variables are reordered so
/// the innermost loop runs over the variable of smallest degree, `f` and
/// its innermost partial are cascaded by partial evaluation, and the
/// remaining partials are only checked at candidate points.
fn scan_dense(terms: &Terms, m: usize, p: u64) -> Vec<Vec<u64>> {
    let ctx = FpCtx::new(p);
    let max_exp = terms
        .iter()
        .flat_map(|(e, _)| e.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    // pows[v][k] = v^k mod p.
    let pows: Vec<Vec<u64>> = (0..p)
        .map(|v| {
            let mut row = vec![1u64; max_exp + 1];
            for k in 1..=max_exp {
                row[k] = ctx.mul(row[k - 1], v);
            }
            row
        })
        .collect();

    // Loop order: descending maximal degree, so the cheapest variable is
    // innermost.
    let mut order: Vec<usize> = (0..m).collect();
    let degree = |j: usize| terms.iter().map(|(e, _)| e[j]).max().unwrap_or(0);
    order.sort_by_key(|&j| std::cmp::Reverse(degree(j)));
    let permuted: Terms = terms
        .iter()
        .map(|(e, c)| {
            let exps: Vec<u16> = order.iter().map(|&j| e[j]).collect();
            (exps, *c)
        })
        .collect();
    let inner = m - 1;
    let partials: Vec<Terms> = (0..m).map(|j| derive(&permuted, j, p)).collect();

    let run = |a: u64| -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let (f1, g1) = if m >= 2 {
            (
                eval_var(&permuted, 0, a, &ctx, &pows),
                eval_var(&partials[inner], 0, a, &ctx, &pows),
            )
        } else {
            (permuted.clone(), partials[inner].clone())
        };
        let mut prefix = vec![0u64; m];
        prefix[0] = a;
        descend(
            &f1, &g1, 1.min(inner), &mut prefix, m, p, &ctx, &pows, &partials, &permuted, &mut out,
        );
        out
    };

    let nested: Vec<Vec<Vec<u64>>> = if m >= 2 {
        (0..p).into_par_iter().map(run).collect()
    } else {
        // Univariate: a single innermost pass.
        vec![run_univariate(&permuted, &partials[0], p, &ctx, &pows, &[], &partials, &permuted)]
    };
    let mut points: Vec<Vec<u64>> = nested.into_iter().flatten().collect();
    // Un-permute coordinates.
    for q in &mut points {
        let mut orig = vec![0u64; m];
        for (pos, &j) in order.iter().enumerate() {
            orig[j] = q[pos];
        }
        *q = orig;
    }
    points
}

#[allow(clippy::too_many_arguments)]
fn descend(
    f: &Terms,
    g: &Terms,
    level: usize,
    prefix: &mut Vec<u64>,
    m: usize,
    p: u64,
    ctx: &FpCtx,
    pows: &[Vec<u64>],
    partials: &[Terms],
    full: &Terms,
    out: &mut Vec<Vec<u64>>,
) {
    let inner = m - 1;
    if level == inner {
        let hits = run_univariate(f, g, p, ctx, pows, prefix, partials, full);
        out.extend(hits);
        return;
    }
    for v in 0..p {
        let f2 = eval_var(f, level, v, ctx, pows);
        let g2 = eval_var(g, level, v, ctx, pows);
        prefix[level] = v;
        descend(&f2, &g2, level + 1, prefix, m, p, ctx, pows, partials, full, out);
    }
}

/// Innermost pass: `f` and `g` are univariate in the last loop variable.
/// Common zeros are candidates; the remaining partials are verified at the
/// full point.
#[allow(clippy::too_many_arguments)]
fn run_univariate(
    f: &Terms,
    g: &Terms,
    p: u64,
    ctx: &FpCtx,
    pows: &[Vec<u64>],
    prefix: &[u64],
    partials: &[Terms],
    full: &Terms,
) -> Vec<Vec<u64>> {
    let m = if prefix.is_empty() { 1 } else { prefix.len() };
    let inner = m - 1;
    let dense = |t: &Terms| -> Vec<u64> {
        let deg = t.iter().map(|(e, _)| e[inner]).max().unwrap_or(0) as usize;
        let mut c = vec![0u64; deg + 1];
        for (e, k) in t {
            debug_assert!(e
                .iter()
                .enumerate()
                .all(|(j, &x)| j == inner || x == 0));
            c[e[inner] as usize] = ctx.add(c[e[inner] as usize], *k);
        }
        c
    };
    let fc = dense(f);
    let gc = dense(g);
    let horner = |c: &[u64], v: u64| -> u64 {
        let mut acc = 0u64;
        for &k in c.iter().rev() {
            acc = ctx.add(ctx.mul(acc, v), k);
        }
        acc
    };
    let mut out = Vec::new();
    for v in 0..p {
        if horner(&fc, v) != 0 || horner(&gc, v) != 0 {
            continue;
        }
        let mut point = prefix.to_vec();
        if point.is_empty() {
            point = vec![0u64; 1];
        }
        point[inner] = v;
        // Verify every remaining partial at the candidate.
        let good = partials
            .iter()
            .enumerate()
            .all(|(j, dj)| j == inner || ctx.eval_at(dj, &point, pows) == 0);
        if good && ctx.eval_at(full, &point, pows) == 0 {
            out.push(point);
        }
    }
    out
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn poly(n: usize, terms: &[(&[u16], i64, i64)]) -> MPoly {
        let mut p = MPoly::zero(n);
        for &(e, num, den) in terms {
            p = p.add(&MPoly::monomial(n, e, rat(num, den)));
        }
        p
    }

    #[test]
    fn quadric_cone_has_the_origin_alone() {
        let cone = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 0], 1, 1), (&[0, 0, 2], 1, 1)]);
        let out = singular_scan_fp(&cone, 7, SCAN_BUDGET).unwrap();
        assert_eq!(out.n_points, 1);
        assert_eq!(out.points, vec![vec![0, 0, 0]]);
        assert!(!out.truncated);
    }

    #[test]
    fn smooth_quadric_is_empty() {
        let q = poly(
            3,
            &[
                (&[2, 0, 0], 1, 1),
                (&[0, 2, 0], 1, 1),
                (&[0, 0, 2], 1, 1),
                (&[0, 0, 0], 1, 1),
            ],
        );
        let out = singular_scan_fp(&q, 101, SCAN_BUDGET).unwrap();
        assert_eq!(out.n_points, 0);
        assert!(out.points.is_empty());
    }

    #[test]
    fn singular_lines_are_enumerated_in_order() {
        // x^2 + y^2 in three variables: singular along the t-axis.
        let f = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 0], 1, 1)]);
        let out = singular_scan_fp(&f, 7, SCAN_BUDGET).unwrap();
        assert_eq!(out.n_points, 7);
        let expected: Vec<Vec<u64>> = (0..7).map(|t| vec![0, 0, t]).collect();
        assert_eq!(out.points, expected);
        // The Whitney umbrella x^2 - y^2 t is singular along the same axis.
        let w = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 1], -1, 1)]);
        let out = singular_scan_fp(&w, 7, SCAN_BUDGET).unwrap();
        assert_eq!(out.points, expected);
    }

    #[test]
    fn four_variable_scan_matches_brute_force() {
        // Not square-reducible: x appears in a cross term.
        let f = poly(
            4,
            &[
                (&[2, 0, 0, 0], 1, 1),
                (&[0, 3, 0, 0], 1, 1),
                (&[0, 0, 4, 0], 1, 1),
                (&[0, 0, 0, 4], 1, 1),
                (&[1, 1, 1, 1], 1, 1),
            ],
        );
        let p = 5u64;
        let out = singular_scan_fp(&f, p, SCAN_BUDGET).unwrap();
        // Independent brute force straight from the definition.
        let reduced = f.reduce_mod(p).unwrap();
        let partials: Vec<_> = (0..4).map(|j| derive(&reduced, j, p)).collect();
        let eval = |terms: &Terms, pt: &[u64]| -> u64 {
            terms
                .iter()
                .map(|(e, c)| {
                    let mut v = *c;
                    for (j, &k) in e.iter().enumerate() {
                        for _ in 0..k {
                            v = v * pt[j] % p;
                        }
                    }
                    v
                })
                .fold(0, |a, b| (a + b) % p)
        };
        let mut expected = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let pt = vec![a, b, c, d];
                        if eval(&reduced, &pt) == 0
                            && partials.iter().all(|dj| eval(dj, &pt) == 0)
                        {
                            expected.push(pt);
                        }
                    }
                }
            }
        }
        assert_eq!(out.points, expected);
        assert!(out.n_points > 0, "the test case should have singular points");
    }

    #[test]
    fn square_reduction_handles_nested_squares() {
        // x^2 + y^2 + z^2 + t^2: everything strips; only the origin is
        // singular even though p^4 would blow a tiny budget.
        let f = poly(
            4,
            &[
                (&[2, 0, 0, 0], 1, 1),
                (&[0, 2, 0, 0], 1, 1),
                (&[0, 0, 2, 0], 1, 1),
                (&[0, 0, 0, 2], 1, 1),
            ],
        );
        let out = singular_scan_fp(&f, 101, 10).unwrap();
        assert_eq!(out.points, vec![vec![0, 0, 0, 0]]);
        // A variable that also appears elsewhere is not stripped.
        let g = poly(2, &[(&[2, 0], 1, 1), (&[3, 0], 1, 1), (&[0, 4], 1, 1)]);
        let out = singular_scan_fp(&g, 7, SCAN_BUDGET).unwrap();
        assert_eq!(out.points, vec![vec![0, 0]]);
    }

    #[test]
    fn budget_and_input_validation() {
        let f = poly(4, &[(&[2, 0, 0, 0], 1, 1), (&[1, 1, 1, 1], 1, 1)]);
        assert_eq!(
            singular_scan_fp(&f, 101, 1000).unwrap_err(),
            GermError::BudgetExceeded { needed: 104060401, budget: 1000 }
        );
        assert_eq!(
            singular_scan_fp(&f, 100, SCAN_BUDGET).unwrap_err(),
            GermError::NotPrime(100)
        );
        let bad_den = poly(2, &[(&[1, 0], 1, 7)]);
        assert_eq!(
            singular_scan_fp(&bad_den, 7, SCAN_BUDGET).unwrap_err(),
            GermError::DenominatorVanishes(7)
        );
        assert_eq!(
            singular_scan_fp(&MPoly::zero(2), 7, SCAN_BUDGET).unwrap_err(),
            GermError::ZeroPolynomial
        );
        // A reduction that vanishes identically is rejected the same way.
        let seven = poly(2, &[(&[2, 0], 7, 1)]);
        assert_eq!(
            singular_scan_fp(&seven, 7, SCAN_BUDGET).unwrap_err(),
            GermError::ZeroPolynomial
        );
    }

    #[test]
    fn outcome_serializes_for_reports() {
        let cone = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 0], 1, 1), (&[0, 0, 2], 1, 1)]);
        let out = singular_scan_fp(&cone, 7, SCAN_BUDGET).unwrap();
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["prime"], 7);
        assert_eq!(json["n_points"], 1);
        assert_eq!(json["points"][0], serde_json::json!([0, 0, 0]));
    }
}
