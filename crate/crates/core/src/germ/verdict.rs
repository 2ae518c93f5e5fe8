//! Compound Du Val verdicts and canonicity of the cover singularities.
//!
//! The double cover branched in an invariant divisor acquires a singular
//! point over each point of the double-point curve. Canonicity of those
//! points is what admits a pair into the classification, and it is decided
//! here in two stages. First, hyperplane slices: if the surface slice
//! `t = const` through the point is a rational double point, the general
//! slice is one as well (it can only be milder), so the point is compound
//! Du Val. Second, for points whose slices fail, a crepant weighted
//! blow-up: when the discrepancy vanishes, canonicity transfers to the
//! transformed threefold, which is then inspected chart by chart — the
//! residual singular locus must be confined to the expected curve in the
//! distinguished chart, vanish in the others, and carry Du Val transverse
//! slices. Slice verdicts must agree across at least three independent
//! specialization seeds, a disagreement is reported as undetermined, and
//! `NOT_CDV` is only ever issued with a multiplicity certificate that rules
//! out every hyperplane section at once.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::ade::{ade_type, AdeOutcome, AdeType};
use super::blowup::{weighted_blowup_chart, weighted_discrepancy};
use super::scan::{singular_scan_fp, SCAN_BUDGET};
use super::{
    local_cover_germ, residual_part, FiberPoint, GermError, GermFamily, VAR_T, VAR_X, VAR_Y,
    VAR_Z,
};
use crate::linsys::MonomialSystem;
use crate::poly::MPoly;
use crate::strata::base_locus;

/// Default specialization seeds; verdicts require at least three.
pub const DEFAULT_SEEDS: [u64; 3] = [1, 2, 3];

/// Default prime for the finite-field scans of blow-up charts.
pub const DEFAULT_SCAN_PRIME: u64 = 101;

/// Weights of the crepant blow-up used as fallback at a special fibre.
pub const FALLBACK_WEIGHTS: [u32; 4] = [2, 1, 1, 1];

/// Verdict on a three-dimensional cover germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdvVerdict {
    /// Compound Du Val of the given transverse type (certified by a slice).
    Cdv(AdeType),
    /// Certifiably not compound Du Val: no hyperplane section is Du Val.
    NotCdv,
    /// The seeds disagree or the slices are beyond the certification caps.
    Undetermined,
}

impl std::fmt::Display for CdvVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CdvVerdict::Cdv(t) => write!(f, "c{t}"),
            CdvVerdict::NotCdv => write!(f, "NOT_CDV"),
            CdvVerdict::Undetermined => write!(f, "UNDETERMINED"),
        }
    }
}

impl Serialize for CdvVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// What one specialization seed saw.
#[derive(Debug, Clone, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    /// The slice value of the base coordinate, as an exact rational.
    pub t_slice: String,
    /// Type of the surface slice through the point.
    pub slice_type: AdeOutcome,
    /// Multiplicity of the three-variable residual at the centre.
    pub residual_multiplicity: u32,
    /// Whether a multiplicity certificate excludes every hyperplane slice.
    pub not_cdv_certified: bool,
}

/// Slice analysis of a cover germ across several seeds.
#[derive(Debug, Clone, Serialize)]
pub struct CdvReport {
    pub label: String,
    pub chart: String,
    pub seeds: Vec<SeedOutcome>,
    pub verdict: CdvVerdict,
}

/// Whether the base coordinate is sliced at the origin or at the seeded
/// generic value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SliceAt {
    Zero,
    GenericT,
}

/// Decide compound Du Val by seeded hyperplane slices.
///
/// For each seed the family is specialized, the base coordinate is sliced
/// (at `t = 0` for the special fibres, at the seeded `t*` for a generic
/// point), and the surface slice is classified. A Du Val slice certifies
/// cDV; `NOT_CDV` additionally demands residual multiplicity at least four,
/// which rules out a Du Val section in every hyperplane direction at once.
pub fn cdv_verdict(
    family: &GermFamily,
    point: FiberPoint,
    seeds: &[u64],
) -> Result<CdvReport, GermError> {
    let slice = if point.is_special() {
        SliceAt::Zero
    } else {
        SliceAt::GenericT
    };
    cdv_core(
        family,
        point.label(),
        point.chart_substitution(),
        slice,
        seeds,
    )
}

fn cdv_core(
    family: &GermFamily,
    label: &str,
    chart: &str,
    slice: SliceAt,
    seeds: &[u64],
) -> Result<CdvReport, GermError> {
    if seeds.len() < 3 {
        return Err(GermError::NotEnoughSeeds {
            expected: 3,
            found: seeds.len(),
        });
    }
    let mut outcomes = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let spec = family.specialize(seed);
        let t_slice = match slice {
            SliceAt::Zero => BigRational::zero(),
            SliceAt::GenericT => spec.t_value.clone(),
        };
        // Residual f(y, z, t) of the cover x^2 + f, recentred at the slice.
        let residual = residual_part(&spec.poly)?;
        let recentred = if t_slice.is_zero() {
            residual
        } else {
            let shift = MPoly::var(3, 2).add(&MPoly::constant(3, t_slice.clone()));
            residual.substitute_poly(2, &shift, None)
        };
        let mult = recentred
            .min_total_degree()
            .ok_or(GermError::ZeroPolynomial)?;
        let surface = recentred
            .substitute(2, &BigRational::zero())
            .project(&[0, 1])
            .expect("base coordinate eliminated");
        let slice_type = ade_type(&surface)?;
        let not_cdv_certified = slice_type == AdeOutcome::NotSimple && mult >= 4;
        outcomes.push(SeedOutcome {
            seed,
            t_slice: t_slice.to_string(),
            slice_type,
            residual_multiplicity: mult,
            not_cdv_certified,
        });
    }
    let verdict = aggregate(&outcomes);
    Ok(CdvReport {
        label: label.to_string(),
        chart: chart.to_string(),
        seeds: outcomes,
        verdict,
    })
}

fn aggregate(outcomes: &[SeedOutcome]) -> CdvVerdict {
    let first = outcomes[0].slice_type;
    if outcomes.iter().all(|o| o.slice_type == first) {
        match first {
            AdeOutcome::Simple(t) => return CdvVerdict::Cdv(t),
            AdeOutcome::NotSimple if outcomes.iter().all(|o| o.not_cdv_certified) => {
                return CdvVerdict::NotCdv;
            }
            _ => {}
        }
    }
    CdvVerdict::Undetermined
}

/// One finite-field scan of a blow-up chart.
#[derive(Debug, Clone, Serialize)]
pub struct ChartScan {
    pub chart: String,
    pub seed: u64,
    pub prime: u64,
    pub n_points: u64,
    /// Whether every singular point lies where the symbolic analysis
    /// permits: nowhere in the outer charts, on the exceptional section
    /// `x = y = z = 0` in the distinguished chart.
    pub confined: bool,
}

/// Evidence gathered by the crepant blow-up fallback at one point.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub weights: Vec<u32>,
    pub discrepancy: i64,
    pub crepant: bool,
    pub chart_scans: Vec<ChartScan>,
    /// Transverse slice of the residual singular curve at the chart origin.
    pub exceptional_at_origin: Option<CdvReport>,
    /// Transverse slice at a seeded generic parameter of the curve.
    pub exceptional_generic: Option<CdvReport>,
    pub established: bool,
}

/// How a point's canonicity was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Exact slice arithmetic alone.
    Symbolic,
    /// Crepant blow-up with finite-field scans of the charts.
    Scan,
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Evidence::Symbolic => "SYMBOLIC",
            Evidence::Scan => "SCAN",
        })
    }
}

/// Canonicity assessment at one fibre point.
#[derive(Debug, Clone, Serialize)]
pub struct PointAssessment {
    pub point: FiberPoint,
    pub chart: String,
    pub cdv: CdvReport,
    pub blowup: Option<BlowupReport>,
    pub evidence: Evidence,
    pub established: bool,
}

/// Overall verdict for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalVerdict {
    Canonical,
    NotEstablished,
}

impl std::fmt::Display for CanonicalVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CanonicalVerdict::Canonical => "CANONICAL",
            CanonicalVerdict::NotEstablished => "NOT_ESTABLISHED",
        })
    }
}

impl Serialize for CanonicalVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Full canonicity report for the cover of one scroll pair.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalReport {
    pub degrees: [i64; 2],
    pub verdict: CanonicalVerdict,
    pub points: Vec<PointAssessment>,
}

/// Assess one fibre point of a cover germ: slice verdicts first, and at a
/// special fibre where the slices certify failure, the crepant blow-up
/// fallback with finite-field chart scans at the given prime.
pub fn assess_point(
    family: &GermFamily,
    point: FiberPoint,
    seeds: &[u64],
    scan_prime: u64,
) -> Result<PointAssessment, GermError> {
    let cdv = cdv_verdict(family, point, seeds)?;
    Ok(match cdv.verdict {
        CdvVerdict::Cdv(_) => PointAssessment {
            point,
            chart: point.chart_substitution().to_string(),
            cdv,
            blowup: None,
            evidence: Evidence::Symbolic,
            established: true,
        },
        _ if point.is_special() => {
            let blowup = blowup_fallback(family, seeds, scan_prime)?;
            let established = blowup.established;
            PointAssessment {
                point,
                chart: point.chart_substitution().to_string(),
                cdv,
                blowup: Some(blowup),
                evidence: Evidence::Scan,
                established,
            }
        }
        _ => PointAssessment {
            point,
            chart: point.chart_substitution().to_string(),
            cdv,
            blowup: None,
            evidence: Evidence::Symbolic,
            established: false,
        },
    })
}

/// Decide whether the double cover branched in a general invariant divisor
/// has canonical singularities over the double-point curve, with the
/// default seeds and scan prime.
pub fn canonical_verdict(
    d1: i64,
    d2: i64,
    system: &MonomialSystem,
) -> Result<CanonicalReport, GermError> {
    canonical_verdict_with(d1, d2, system, &DEFAULT_SEEDS, DEFAULT_SCAN_PRIME)
}

/// Decide whether the double cover branched in a general invariant divisor
/// has canonical singularities over the double-point curve.
///
/// Precondition: the system is the invariant half of the ramification
/// system on the scroll `(d1, d2, 0)` and its base locus is exactly the
/// double-point curve `{x0 = x1 = 0}`. The verdict combines the generic
/// point of the curve with the two distinguished fibres; each must either
/// be compound Du Val by slices, or (at a special fibre) carry a crepant
/// weighted blow-up whose charts pass the residual inspection.
pub fn canonical_verdict_with(
    d1: i64,
    d2: i64,
    system: &MonomialSystem,
    seeds: &[u64],
    scan_prime: u64,
) -> Result<CanonicalReport, GermError> {
    let ambient = system.ambient();
    let degrees = ambient
        .scroll_degrees()
        .map_err(|_| GermError::NotRamificationSystem)?;
    if degrees != [d1, d2, 0] {
        return Err(GermError::Precondition(format!(
            "system lives on the scroll ({}, {}, {}), not ({d1}, {d2}, 0)",
            degrees[0], degrees[1], degrees[2]
        )));
    }
    let bs = base_locus(system);
    let x0 = ambient.var_index("x0").expect("scroll has x0");
    let x1 = ambient.var_index("x1").expect("scroll has x1");
    let curve = crate::strata::Stratum::new([x0, x1]);
    let is_curve_only = bs.len() == 1 && bs.strata()[0] == curve;
    if !is_curve_only {
        return Err(GermError::Precondition(
            "the base locus of the invariant system must be the double-point curve".into(),
        ));
    }

    let mut points = Vec::new();
    for point in [FiberPoint::Generic, FiberPoint::T1Zero, FiberPoint::T0Zero] {
        let family = local_cover_germ(system, point)?;
        points.push(assess_point(&family, point, seeds, scan_prime)?);
    }
    let verdict = if points.iter().all(|p| p.established) {
        CanonicalVerdict::Canonical
    } else {
        CanonicalVerdict::NotEstablished
    };
    Ok(CanonicalReport {
        degrees: [d1, d2],
        verdict,
        points,
    })
}

/// The crepant blow-up inspection at a special fibre.
fn blowup_fallback(
    family: &GermFamily,
    seeds: &[u64],
    scan_prime: u64,
) -> Result<BlowupReport, GermError> {
    let weights = FALLBACK_WEIGHTS.to_vec();
    let discrepancy = weighted_discrepancy(family, &weights)?;
    let crepant = discrepancy == 0;
    if !crepant {
        return Ok(BlowupReport {
            weights,
            discrepancy,
            crepant,
            chart_scans: Vec::new(),
            exceptional_at_origin: None,
            exceptional_generic: None,
            established: false,
        });
    }
    let chart_names = ["x", "y", "z", "t"];
    let mut chart_scans = Vec::new();
    let mut all_confined = true;
    for chart in [VAR_X, VAR_Y, VAR_Z, VAR_T] {
        let transformed = weighted_blowup_chart(family, &weights, chart)?;
        for &seed in seeds {
            let spec = transformed.specialize(seed);
            let scan = singular_scan_fp(&spec.poly, scan_prime, SCAN_BUDGET)?;
            let confined = if chart == VAR_T {
                // Only the exceptional section x = y = z = 0 may be singular.
                scan.points
                    .iter()
                    .all(|q| q[VAR_X] == 0 && q[VAR_Y] == 0 && q[VAR_Z] == 0)
            } else {
                scan.n_points == 0
            };
            all_confined &= confined;
            chart_scans.push(ChartScan {
                chart: chart_names[chart].to_string(),
                seed,
                prime: scan.prime,
                n_points: scan.n_points,
                confined,
            });
        }
    }
    // Transverse slices of the residual curve in the distinguished chart.
    let chart_t = weighted_blowup_chart(family, &weights, VAR_T)?;
    let at_origin = cdv_core(
        &chart_t,
        "exceptional curve at the chart origin",
        "blow-up chart of t",
        SliceAt::Zero,
        seeds,
    )?;
    let generic = cdv_core(
        &chart_t,
        "exceptional curve at a generic parameter",
        "blow-up chart of t",
        SliceAt::GenericT,
        seeds,
    )?;
    let slices_du_val = matches!(at_origin.verdict, CdvVerdict::Cdv(_))
        && matches!(generic.verdict, CdvVerdict::Cdv(_));
    let established = crepant && all_confined && slices_du_val;
    Ok(BlowupReport {
        weights,
        discrepancy,
        crepant,
        chart_scans,
        exceptional_at_origin: Some(at_origin),
        exceptional_generic: Some(generic),
        established,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::CoxAmbient;
    use crate::involution::SignInvolution;
    use crate::linsys::MonomialSystem;

    fn invariant_half(d1: i64, d2: i64) -> MonomialSystem {
        let ambient = CoxAmbient::scroll(d1, d2, 0).unwrap();
        let ram = MonomialSystem::ram_system(&ambient).unwrap();
        let sigma = SignInvolution::standard_sigma(&ambient).unwrap();
        ram.parity_decompose(&sigma).unwrap().plus
    }

    #[test]
    fn slice_types_across_the_nine_pairs() {
        use AdeType::*;
        use CdvVerdict::*;
        // Expected verdicts at (generic, [1:0], [0:1]).
        let table: &[((i64, i64), [CdvVerdict; 3])] = &[
            ((2, 2), [Cdv(A(1)), Cdv(A(1)), Cdv(A(1))]),
            ((3, 1), [Cdv(A(3)), Cdv(A(3)), Cdv(A(3))]),
            ((4, 2), [Cdv(A(3)), Cdv(A(3)), Cdv(A(3))]),
            ((3, 3), [Cdv(D(4)), Cdv(D(4)), Cdv(D(4))]),
            ((4, 4), [Cdv(D(4)), Cdv(D(4)), Cdv(D(4))]),
            ((5, 3), [Cdv(D(5)), Cdv(E6), Cdv(D(5))]),
            ((6, 4), [Cdv(E6), Cdv(E6), Cdv(E6)]),
            ((7, 5), [Cdv(E6), Cdv(E6), NotCdv]),
            ((8, 6), [Cdv(E6), Cdv(E6), Cdv(E6)]),
        ];
        for ((d1, d2), expected) in table {
            let sys = invariant_half(*d1, *d2);
            for (i, point) in [FiberPoint::Generic, FiberPoint::T1Zero, FiberPoint::T0Zero]
                .into_iter()
                .enumerate()
            {
                let fam = local_cover_germ(&sys, point).unwrap();
                let report = cdv_verdict(&fam, point, &DEFAULT_SEEDS).unwrap();
                assert_eq!(
                    report.verdict,
                    expected[i],
                    "({d1},{d2}) at {}",
                    point.label()
                );
            }
        }
    }

    #[test]
    fn not_cdv_comes_with_a_certificate() {
        let sys = invariant_half(7, 5);
        let fam = local_cover_germ(&sys, FiberPoint::T0Zero).unwrap();
        let report = cdv_verdict(&fam, FiberPoint::T0Zero, &DEFAULT_SEEDS).unwrap();
        assert_eq!(report.verdict, CdvVerdict::NotCdv);
        for seed in &report.seeds {
            assert_eq!(seed.slice_type, AdeOutcome::NotSimple);
            assert_eq!(seed.residual_multiplicity, 4);
            assert!(seed.not_cdv_certified);
        }
    }

    #[test]
    fn seed_requirements_are_enforced() {
        let sys = invariant_half(2, 2);
        let fam = local_cover_germ(&sys, FiberPoint::Generic).unwrap();
        assert_eq!(
            cdv_verdict(&fam, FiberPoint::Generic, &[1, 2]).unwrap_err(),
            GermError::NotEnoughSeeds {
                expected: 3,
                found: 2
            }
        );
        // More seeds are accepted and still agree.
        let report = cdv_verdict(&fam, FiberPoint::Generic, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(report.verdict, CdvVerdict::Cdv(AdeType::A(1)));
        assert_eq!(report.seeds.len(), 5);
    }

    #[test]
    fn canonical_for_the_symbolic_pairs() {
        for (d1, d2) in [(2, 2), (3, 1), (4, 2), (3, 3), (4, 4), (5, 3), (6, 4), (8, 6)] {
            let sys = invariant_half(d1, d2);
            let report = canonical_verdict(d1, d2, &sys).unwrap();
            assert_eq!(
                report.verdict,
                CanonicalVerdict::Canonical,
                "({d1},{d2})"
            );
            for p in &report.points {
                assert!(p.established);
                assert_eq!(p.evidence, Evidence::Symbolic);
                assert!(p.blowup.is_none());
            }
        }
    }

    #[test]
    fn the_exceptional_pair_needs_the_blowup_route() {
        let sys = invariant_half(7, 5);
        let report = canonical_verdict(7, 5, &sys).unwrap();
        assert_eq!(report.verdict, CanonicalVerdict::Canonical);
        let special = &report.points[2];
        assert_eq!(special.point, FiberPoint::T0Zero);
        assert_eq!(special.cdv.verdict, CdvVerdict::NotCdv);
        assert_eq!(special.evidence, Evidence::Scan);
        let blowup = special.blowup.as_ref().unwrap();
        assert_eq!(blowup.discrepancy, 0);
        assert!(blowup.crepant);
        // The distinguished chart carries the residual curve: one point of
        // the section for each parameter value, every seed; the other
        // charts are smooth.
        for scan in &blowup.chart_scans {
            assert!(scan.confined, "chart {} seed {}", scan.chart, scan.seed);
            if scan.chart == "t" {
                assert_eq!(scan.n_points, 101);
            } else {
                assert_eq!(scan.n_points, 0);
            }
        }
        let origin = blowup.exceptional_at_origin.as_ref().unwrap();
        assert_eq!(origin.verdict, CdvVerdict::Cdv(AdeType::E6));
        let generic = blowup.exceptional_generic.as_ref().unwrap();
        assert_eq!(generic.verdict, CdvVerdict::Cdv(AdeType::E6));
        // The other two points of the pair stay symbolic.
        assert_eq!(report.points[0].cdv.verdict, CdvVerdict::Cdv(AdeType::E6));
        assert_eq!(report.points[1].cdv.verdict, CdvVerdict::Cdv(AdeType::E6));
    }

    #[test]
    fn preconditions_of_the_canonical_verdict() {
        // Degree mismatch.
        let sys = invariant_half(3, 1);
        assert!(matches!(
            canonical_verdict(2, 2, &sys).unwrap_err(),
            GermError::Precondition(_)
        ));
        // A subsystem with a fixed component has the wrong base locus.
        let ambient = CoxAmbient::scroll(8, 6, 0).unwrap();
        let full = invariant_half(8, 6);
        let trimmed: Vec<_> = full
            .materialize()
            .into_iter()
            .filter(|m| m.exp(ambient.var_index("x0").unwrap()) >= 1)
            .collect();
        let sub = MonomialSystem::from_monomials(&ambient, full.class(), trimmed).unwrap();
        assert!(matches!(
            canonical_verdict(8, 6, &sub).unwrap_err(),
            GermError::Precondition(_)
        ));
    }

    #[test]
    fn reports_serialize_with_the_advertised_fields() {
        let sys = invariant_half(3, 1);
        let report = canonical_verdict(3, 1, &sys).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["degrees"], serde_json::json!([3, 1]));
        assert_eq!(json["verdict"], "CANONICAL");
        let generic = &json["points"][0];
        assert_eq!(generic["point"], "generic");
        assert_eq!(generic["evidence"], "SYMBOLIC");
        assert_eq!(generic["cdv"]["verdict"], "cA3");
        let seeds = generic["cdv"]["seeds"].as_array().unwrap();
        assert_eq!(seeds.len(), 3);
        assert!(seeds[0]["t_slice"].is_string());
        assert_eq!(seeds[0]["slice_type"], "A3");
        assert!(generic["chart"]
            .as_str()
            .unwrap()
            .contains("t0 = 1, t1 = t"));
    }
}
