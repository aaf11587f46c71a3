//! Entanglement criteria, code diagnostics, and structural checks on
//! triplet probability distributions.

use crate::error::{Error, Result};
use crate::math::{big_pow, rat_to_f64, Binomials};
use crate::states::stabilizer::CodeEnumerators;
use crate::transforms::{apply_transform, build_transform, TransformKind};
use crate::vector::{EnumeratorVector, Precision, VectorKind};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// How "zero" is decided when reading entanglement structure off a vector:
/// a fixed 1e−9 for exact inputs, or three bootstrap standard errors per
/// entry for estimated inputs.
#[derive(Debug, Clone)]
pub enum ZeroTolerance {
    Exact,
    StandardErrors(Vec<f64>),
}

impl ZeroTolerance {
    fn at(&self, i: usize) -> f64 {
        match self {
            ZeroTolerance::Exact => 1e-9,
            ZeroTolerance::StandardErrors(se) => 3.0 * se.get(i).copied().unwrap_or(0.0),
        }
    }
}

/// Entanglement-criteria evaluation of one state's enumerators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub n: usize,
    /// a_n − 2^−n; positive certifies entanglement.
    pub n_body_margin: f64,
    pub n_body_entangled: bool,
    /// a'_n − a'_{n−1}; positive certifies entanglement.
    pub purity_margin: f64,
    pub purity_entangled: bool,
    /// 2^−n + (1 − 2^−n)·Tr[ρ²] − ã_n, a lower bound on the concurrence.
    pub concurrence_lower_bound: f64,
    pub concurrence_entangled: bool,
    /// 2^n·ã_0; carries the n-tangle interpretation only for pure states.
    pub n_tangle: f64,
    pub n_tangle_valid: bool,
    /// Largest m with a_1 = … = a_m = 0 within tolerance.
    pub uniformity: usize,
    /// Genuine multipartite entanglement by the small-n a_3 thresholds;
    /// absent unless n ∈ {3, 4}.
    pub gme: Option<bool>,
    pub purity: f64,
}

/// Evaluate all criteria from mutually consistent {sld, apd, tpd} vectors.
///
/// Consistency under the basis changes is checked to 1e−6 first and a
/// violation names the failed identity.
pub fn criteria_report(
    sld: &EnumeratorVector,
    apd: &EnumeratorVector,
    tpd: &EnumeratorVector,
    purity: f64,
    zero_tol: &ZeroTolerance,
) -> Result<CriteriaReport> {
    let n = sld.n;
    if apd.n != n || tpd.n != n {
        return Err(Error::contract("vectors disagree on n"));
    }
    if sld.kind != VectorKind::Sld || apd.kind != VectorKind::Apd || tpd.kind != VectorKind::Tpd {
        return Err(Error::contract(
            "criteria_report expects (sld, apd, tpd) in that order",
        ));
    }
    let t_prime = build_transform(TransformKind::TPrime, n, Precision::Exact)?;
    let t_tilde = build_transform(TransformKind::TTilde, n, Precision::Exact)?;
    let apd_from_sld = apply_transform(&t_prime, &sld.clone().into_float())?;
    for (i, (x, y)) in apd_from_sld.to_f64().iter().zip(apd.to_f64()).enumerate() {
        if (x - y).abs() > 1e-6 {
            return Err(Error::contract(format!(
                "inconsistent inputs: (T'·sld)_{i} = {x} but apd_{i} = {y}"
            )));
        }
    }
    let tpd_from_sld = apply_transform(&t_tilde, &sld.clone().into_float())?;
    for (i, (x, y)) in tpd_from_sld.to_f64().iter().zip(tpd.to_f64()).enumerate() {
        if (x - y).abs() > 1e-6 {
            return Err(Error::contract(format!(
                "inconsistent inputs: (T̃·sld)_{i} = {x} but tpd_{i} = {y}"
            )));
        }
    }

    let a = sld.to_f64();
    let ap = apd.to_f64();
    let at = tpd.to_f64();
    let w = 0.5f64.powi(n as i32);

    let n_body_margin = a[n] - w;
    let purity_margin = ap[n] - ap[n - 1];
    let concurrence_lower_bound = w + (1.0 - w) * purity - at[n];
    let n_tangle = at[0] / w;
    let n_tangle_valid = purity >= 1.0 - 1e-6;

    let mut uniformity = 0usize;
    for i in 1..=n {
        if a[i].abs() <= zero_tol.at(i) {
            uniformity = i;
        } else {
            break;
        }
    }

    let gme = match n {
        3 => Some(a[3] > 3.0 / 8.0 + zero_tol.at(3)),
        4 => Some(a[3] > 7.0 / 16.0 + zero_tol.at(3)),
        _ => None,
    };

    Ok(CriteriaReport {
        n,
        n_body_margin,
        n_body_entangled: n_body_margin > zero_tol.at(n),
        purity_margin,
        purity_entangled: purity_margin > zero_tol.at(n),
        concurrence_lower_bound,
        concurrence_entangled: concurrence_lower_bound > zero_tol.at(n),
        n_tangle,
        n_tangle_valid,
        uniformity,
        gme,
        purity,
    })
}

/// Code distance read off exact enumerators.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Smallest i > 0 with A_i < B_i; n+1 when no such index exists.
    pub distance: usize,
    /// True when the group is a stabilizer state (k = 0), where A = B and
    /// the distance is undefined.
    pub is_state: bool,
}

pub fn code_distance(enums: &CodeEnumerators) -> Result<DistanceReport> {
    let b = enums
        .b
        .as_ref()
        .ok_or_else(|| Error::contract("distance needs the normalizer counts B"))?;
    if enums.a.len() != b.len() {
        return Err(Error::contract("A and B have different lengths"));
    }
    let d = (1..enums.a.len()).find(|&i| enums.a[i] < b[i]);
    Ok(DistanceReport {
        distance: d.unwrap_or(enums.n + 1),
        is_state: enums.k == 0,
    })
}

/// Distance from estimated (real-valued) unnormalized counts. With `round`
/// set, counts are rounded to integers before comparison, which is the
/// sound convention for code enumerators; otherwise raw values compare
/// directly.
pub fn code_distance_from_estimates(a: &[f64], b: &[f64], round: bool) -> Result<usize> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::contract("estimate vectors disagree in length"));
    }
    let n = a.len() - 1;
    let d = (1..=n).find(|&i| {
        if round {
            a[i].round() < b[i].round()
        } else {
            a[i] < b[i]
        }
    });
    Ok(d.unwrap_or(n + 1))
}

/// Moments of a TPD together with the low-weight sector lengths they encode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TpdMoments {
    pub mean: f64,
    pub variance: f64,
    /// A_1 = 4⟨x⟩ − 3n (unnormalized one-body sector length).
    pub a1: f64,
    /// A_2 = 8⟨x²⟩ − (12n−4)⟨x⟩ + 9 C(n,2).
    pub a2: f64,
    /// The same variance recovered from (A_1, A_2).
    pub variance_via_sld: f64,
    pub consistent: bool,
}

pub fn tpd_moments(tpd: &EnumeratorVector) -> Result<TpdMoments> {
    if tpd.kind != VectorKind::Tpd {
        return Err(Error::contract(format!(
            "tpd_moments needs a tpd vector, got {}",
            tpd.kind
        )));
    }
    let n = tpd.n as f64;
    let p = tpd.to_f64();
    let moment = |k: i32| -> f64 {
        p.iter()
            .enumerate()
            .map(|(x, &w)| (x as f64).powi(k) * w)
            .sum()
    };
    let m1 = moment(1);
    let m2 = moment(2);
    let mean = m1;
    let variance = m2 - m1 * m1;
    let a1 = 4.0 * m1 - 3.0 * n;
    let choose2 = n * (n - 1.0) / 2.0;
    let a2 = 8.0 * m2 - (12.0 * n - 4.0) * m1 + 9.0 * choose2;
    let variance_via_sld = (2.0 * a2 - a1 * a1 - 2.0 * a1 + 3.0 * n) / 16.0;
    let consistent = (variance - variance_via_sld).abs() <= 1e-9 * (1.0 + variance.abs());
    Ok(TpdMoments {
        mean,
        variance,
        a1,
        a2,
        variance_via_sld,
        consistent,
    })
}

/// Named constraints every physically realizable TPD satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityViolation {
    /// Mean triplet count below 3n/4.
    MeanBelowBound,
    /// Zero-triplet probability above 2^−n.
    ZeroTripletAboveBound,
    /// A_1 outside [0, n].
    SectorOneOutOfRange,
    /// A_2 outside [0, C(n,2)] (checked for n ≥ 3).
    SectorTwoOutOfRange,
    /// A_3 outside [0, C(n,3)] (checked for n ≥ 5).
    SectorThreeOutOfRange,
    /// Σ_i C(n−i,2)(2i+2−n) ã_i < 0.
    WeightedTailNegative,
    /// A_n above the GHZ maximum 2^{n−1} + [n even].
    FullSectorAboveBound,
    /// Outside the two-qubit enumerator polytope (n = 2 only).
    OutsideTwoQubitPolytope,
}

const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Check a normalized TPD against the known admissibility bounds; returns
/// the (possibly empty) list of violated constraints.
pub fn tpd_admissibility(tpd: &EnumeratorVector) -> Result<Vec<AdmissibilityViolation>> {
    if tpd.kind != VectorKind::Tpd {
        return Err(Error::contract(format!(
            "tpd_admissibility needs a tpd vector, got {}",
            tpd.kind
        )));
    }
    let n = tpd.n;
    let nf = n as f64;
    let p = tpd.to_f64();
    let tol = ADMISSIBILITY_TOL;
    let mut violations = Vec::new();

    let moments = tpd_moments(tpd)?;
    if moments.mean < 0.75 * nf - tol {
        violations.push(AdmissibilityViolation::MeanBelowBound);
    }
    if p[0] > 0.5f64.powi(n as i32) + tol {
        violations.push(AdmissibilityViolation::ZeroTripletAboveBound);
    }
    if moments.a1 < -tol || moments.a1 > nf + tol {
        violations.push(AdmissibilityViolation::SectorOneOutOfRange);
    }
    let binom = Binomials::new(n);
    if n >= 3 {
        let cap = binom.c_f64(n, 2);
        if moments.a2 < -tol || moments.a2 > cap + tol {
            violations.push(AdmissibilityViolation::SectorTwoOutOfRange);
        }
    }
    if n >= 5 {
        let m3: f64 = p
            .iter()
            .enumerate()
            .map(|(x, &w)| (x as f64).powi(3) * w)
            .sum();
        let m2: f64 = p
            .iter()
            .enumerate()
            .map(|(x, &w)| (x as f64).powi(2) * w)
            .sum();
        let a3 = 32.0 / 3.0 * m3 - (24.0 * nf - 16.0) * m2
            + (54.0 * nf * nf - 90.0 * nf + 28.0) / 3.0 * moments.mean
            - 27.0 * binom.c_f64(n, 3);
        let cap = binom.c_f64(n, 3);
        if a3 < -tol || a3 > cap + tol {
            violations.push(AdmissibilityViolation::SectorThreeOutOfRange);
        }
    }
    let weighted_tail: f64 = p
        .iter()
        .enumerate()
        .map(|(i, &w)| binom.c_f64(n - i, 2) * (2.0 * i as f64 + 2.0 - nf) * w)
        .sum();
    if weighted_tail < -tol {
        violations.push(AdmissibilityViolation::WeightedTailNegative);
    }

    // the full sector length needs the sector basis
    let sld = apply_transform(
        &build_transform(TransformKind::TTildeInv, n, Precision::Exact)?,
        &EnumeratorVector::float(n, VectorKind::Tpd, p.clone())?,
    )?;
    let a = sld.to_f64();
    let ghz_cap = 0.5 * 2.0f64.powi(n as i32) + if n % 2 == 0 { 1.0 } else { 0.0 };
    if a[n] * 2.0f64.powi(n as i32) > ghz_cap + tol {
        violations.push(AdmissibilityViolation::FullSectorAboveBound);
    }

    if n == 2 {
        // convex hull of the four two-qubit sector vertices, in (a_1, a_2)
        let (a1, a2) = (a[1], a[2]);
        let inside = a1 >= -tol
            && a2 >= -tol
            && a1 - a2 <= 0.25 + tol
            && a1 + a2 <= 0.75 + tol;
        if !inside {
            violations.push(AdmissibilityViolation::OutsideTwoQubitPolytope);
        }
    }

    Ok(violations)
}

/// Systematic-error bound ε = ‖Ω_i‖·‖σ − ρ⊗ρ‖₁ for one enumerator entry:
/// the observable norms are 3^i C(n,i)/2^n for sector lengths and 1 for
/// averaged purities and triplet probabilities.
pub fn robustness_bound(
    kind: VectorKind,
    index: usize,
    n: usize,
    trace_distance: f64,
) -> Result<f64> {
    if trace_distance < 0.0 {
        return Err(Error::contract("trace distance must be non-negative"));
    }
    if index > n {
        return Err(Error::contract(format!("index {index} exceeds n={n}")));
    }
    let norm = match kind {
        VectorKind::Sld | VectorKind::DualSld => {
            let binom = Binomials::new(n);
            rat_to_f64(&BigRational::new(
                big_pow(3, index) * binom.c(n, index),
                big_pow(2, n),
            ))
        }
        _ => 1.0,
    };
    Ok(norm * trace_distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::families::{family_all_enumerators, StateFamily};
    use crate::states::stabilizer::{code_enumerators, StabilizerGroup};

    fn report_for(family: &StateFamily, n: usize) -> CriteriaReport {
        let (sld, apd, tpd) = family_all_enumerators(family, n).unwrap();
        let purity = sld.sum_f64();
        criteria_report(&sld, &apd, &tpd, purity, &ZeroTolerance::Exact).unwrap()
    }

    #[test]
    fn bell_pair_criteria() {
        let r = report_for(&StateFamily::BellPairs, 2);
        assert!((r.n_body_margin - 0.5).abs() < 1e-12);
        assert!(r.n_body_entangled && r.purity_entangled && r.concurrence_entangled);
        assert_eq!(r.uniformity, 1);
    }

    #[test]
    fn maximally_mixed_fires_nothing() {
        let r = report_for(&StateFamily::MaximallyMixed, 3);
        assert!(!r.n_body_entangled && !r.purity_entangled && !r.concurrence_entangled);
        assert!(!r.n_tangle_valid);
    }

    #[test]
    fn ame6_uniformity_and_concurrence() {
        let r = report_for(&StateFamily::Ame6, 6);
        assert_eq!(r.uniformity, 3);
        assert!((r.concurrence_lower_bound - 0.71875).abs() < 1e-3);
    }

    #[test]
    fn ghz3_is_gme() {
        let r = report_for(&StateFamily::Ghz { entangled: 3 }, 3);
        assert_eq!(r.gme, Some(true));
        let sep = report_for(&StateFamily::ProductZero, 3);
        assert_eq!(sep.gme, Some(false));
    }

    #[test]
    fn inconsistent_vectors_rejected() {
        let (sld, apd, _) = family_all_enumerators(&StateFamily::BellPairs, 2).unwrap();
        let tpd = EnumeratorVector::float(2, VectorKind::Tpd, vec![0.5, 0.25, 0.25]).unwrap();
        let err = criteria_report(&sld, &apd, &tpd, 1.0, &ZeroTolerance::Exact);
        assert!(matches!(err, Err(Error::Contract(m)) if m.contains("T̃")));
    }

    #[test]
    fn steane_distance() {
        let enums = code_enumerators(&StabilizerGroup::steane()).unwrap();
        let d = code_distance(&enums).unwrap();
        assert_eq!(d.distance, 3);
        assert!(!d.is_state);
    }

    #[test]
    fn repetition_check_distance_one() {
        let g = StabilizerGroup::from_text("ZZ").unwrap();
        let d = code_distance(&code_enumerators(&g).unwrap()).unwrap();
        assert_eq!(d.distance, 1);
    }

    #[test]
    fn state_group_gets_sentinel() {
        let g = StabilizerGroup::from_text("XXX\nZZI\nIZZ").unwrap();
        let d = code_distance(&code_enumerators(&g).unwrap()).unwrap();
        assert_eq!(d.distance, 4);
        assert!(d.is_state);
    }

    #[test]
    fn estimated_distance_rounding() {
        let a = [1.0, 0.02, 0.01, 0.4, 20.6, 0.0, 41.8, 0.1];
        let b = [1.0, 0.03, 0.02, 20.9, 21.2, 125.0, 42.1, 44.8];
        assert_eq!(code_distance_from_estimates(&a, &b, true).unwrap(), 3);
        // raw comparison fires on the tiny first-entry fluctuation
        assert_eq!(code_distance_from_estimates(&a, &b, false).unwrap(), 1);
    }

    #[test]
    fn moments_of_reference_states() {
        let n = 6;
        let (_, _, tpd) = family_all_enumerators(&StateFamily::ProductZero, n).unwrap();
        let m = tpd_moments(&tpd).unwrap();
        assert!((m.mean - n as f64).abs() < 1e-12);
        assert!((m.a1 - n as f64).abs() < 1e-10);
        assert!(m.consistent);

        let (_, _, tpd) = family_all_enumerators(&StateFamily::MaximallyMixed, n).unwrap();
        let m = tpd_moments(&tpd).unwrap();
        assert!((m.mean - 0.75 * n as f64).abs() < 1e-12);
        assert!(m.a1.abs() < 1e-10);

        let (_, _, tpd) =
            family_all_enumerators(&StateFamily::Ghz { entangled: n }, n).unwrap();
        let m = tpd_moments(&tpd).unwrap();
        assert!(m.a1.abs() < 1e-10, "GHZ has no weight-1 stabilizers");
    }

    #[test]
    fn admissibility_of_physical_states() {
        for (family, n) in [
            (StateFamily::BellPairs, 2usize),
            (StateFamily::Ghz { entangled: 4 }, 4),
            (StateFamily::MaximallyMixed, 3),
            (StateFamily::Dicke { excitations: 2 }, 5),
        ] {
            let (_, _, tpd) = family_all_enumerators(&family, n).unwrap();
            assert!(tpd_admissibility(&tpd).unwrap().is_empty(), "{family:?}");
        }
    }

    #[test]
    fn synthetic_counterexamples_fire() {
        // all-singlet distribution: mean 0 < 3n/4
        let all_singlet =
            EnumeratorVector::float(3, VectorKind::Tpd, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = tpd_admissibility(&all_singlet).unwrap();
        assert!(v.contains(&AdmissibilityViolation::MeanBelowBound));
        assert!(v.contains(&AdmissibilityViolation::ZeroTripletAboveBound));

        // n = 3 with ã_1 < 3 ã_0 violates the weighted-tail bound
        let skewed = EnumeratorVector::float(
            3,
            VectorKind::Tpd,
            vec![0.04, 0.06, 0.0, 0.9],
        )
        .unwrap();
        let v = tpd_admissibility(&skewed).unwrap();
        assert!(v.contains(&AdmissibilityViolation::WeightedTailNegative));
    }

    #[test]
    fn robustness_norms() {
        assert_eq!(robustness_bound(VectorKind::Tpd, 3, 5, 0.2).unwrap(), 0.2);
        assert_eq!(robustness_bound(VectorKind::Apd, 0, 5, 0.2).unwrap(), 0.2);
        let full = robustness_bound(VectorKind::Sld, 4, 4, 1.0).unwrap();
        assert!((full - 81.0 / 16.0).abs() < 1e-12);
    }
}
