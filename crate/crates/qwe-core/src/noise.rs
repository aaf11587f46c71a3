//! Local depolarizing noise acting on enumerator vectors, and noise
//! thresholds of enumerator-based entanglement criteria.

use crate::error::{Error, Result};
use crate::states::families::{family_all_enumerators, StateFamily};
use crate::transforms::{accurate_dot, apply_transform, build_transform, TransformKind};
use crate::vector::{EnumeratorVector, Precision, Values, VectorKind};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Per-qubit depolarizing strength plus a per-gate Pauli error rate for the
/// circuit simulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing strength p of the single-qubit channel applied to every
    /// qubit once before readout: with probability 3p/4 a uniformly random
    /// non-identity Pauli is inserted.
    pub p: f64,
    /// Probability of a uniformly random non-identity Pauli on each qubit
    /// touched by a gate, inserted after the gate.
    pub circuit_error_rate: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            p: 0.0,
            circuit_error_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::contract(format!("p={} outside [0,1]", self.p)));
        }
        if !(0.0..=1.0).contains(&self.circuit_error_rate) {
            return Err(Error::contract(format!(
                "circuit_error_rate={} outside [0,1]",
                self.circuit_error_rate
            )));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p == 0.0 && self.circuit_error_rate == 0.0
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("noise strength {p} outside [0,1]")));
    }
    Ok(())
}

fn require_sld(a: &EnumeratorVector) -> Result<()> {
    if a.kind != VectorKind::Sld {
        return Err(Error::contract(format!(
            "expected an sld vector, got {}",
            a.kind
        )));
    }
    Ok(())
}

/// Sector lengths decay as (1−p)^{2i} under the n-fold depolarizing channel.
pub fn depolarize_sld(a: &EnumeratorVector, p: f64) -> Result<EnumeratorVector> {
    require_sld(a)?;
    check_p(p)?;
    let values = match &a.values {
        Values::Exact(v) => {
            let q = BigRational::one()
                - BigRational::from_float(p)
                    .ok_or_else(|| Error::contract("noise strength is not finite"))?;
            let q2 = &q * &q;
            let mut factor = BigRational::one();
            Values::Exact(
                v.iter()
                    .map(|x| {
                        let out = x * &factor;
                        factor *= &q2;
                        out
                    })
                    .collect(),
            )
        }
        Values::Float(v) => {
            let q = 1.0 - p;
            Values::Float(
                v.iter()
                    .enumerate()
                    .map(|(i, x)| x * q.powi(2 * i as i32))
                    .collect(),
            )
        }
    };
    Ok(EnumeratorVector {
        n: a.n,
        kind: VectorKind::Sld,
        values,
    })
}

/// Purity of the depolarized state: Σ a_i (1−p)^{2i}.
pub fn purity_after_noise(a: &EnumeratorVector, p: f64) -> Result<f64> {
    require_sld(a)?;
    check_p(p)?;
    let q2 = (1.0 - p) * (1.0 - p);
    let v = a.to_f64();
    let mut factor = 1.0;
    Ok(v.iter()
        .map(|x| {
            let t = x * factor;
            factor *= q2;
            t
        })
        .sum())
}

/// Overlap Tr[ρ ℰ_p^⊗n(ρ)] = Σ a_i (1−p)^i.
pub fn overlap_after_noise(a: &EnumeratorVector, p: f64) -> Result<f64> {
    require_sld(a)?;
    check_p(p)?;
    let q = 1.0 - p;
    let v = a.to_f64();
    let mut factor = 1.0;
    Ok(v.iter()
        .map(|x| {
            let t = x * factor;
            factor *= q;
            t
        })
        .sum())
}

/// The three primal enumerators of a depolarized family state.
#[derive(Debug, Clone)]
pub struct NoisyEnumerators {
    pub sld: EnumeratorVector,
    pub apd: EnumeratorVector,
    pub tpd: EnumeratorVector,
}

/// Exact enumerators of ℰ_p^⊗n applied to a family state: the diagonal decay
/// acts on the SLD, then the basis changes produce APD and TPD.
///
/// `p` is parsed as an exact rational in exact mode, so the entire
/// computation stays rational; pass `Precision::Float64` for large n where
/// exact denominators grow impractical (the APD stays accurate in floats
/// because the maps involved have non-negative entries, while small TPD
/// entries may lose absolute accuracy to cancellation).
pub fn noisy_family_enumerators(
    family: &StateFamily,
    n: usize,
    p: &BigRational,
    precision: Precision,
) -> Result<NoisyEnumerators> {
    let p_f = p
        .to_f64()
        .ok_or_else(|| Error::contract("noise strength is not finite"))?;
    check_p(p_f)?;
    let (sld, _, _) = family_all_enumerators(family, n)?;
    let (sld, apd, tpd) = match precision {
        Precision::Exact => {
            let q2 = {
                let q = BigRational::one() - p;
                &q * &q
            };
            let mut factor = BigRational::one();
            let noisy: Vec<BigRational> = sld
                .to_exact()?
                .iter()
                .map(|x| {
                    let out = x * &factor;
                    factor *= &q2;
                    out
                })
                .collect();
            let sld = EnumeratorVector::exact(n, VectorKind::Sld, noisy)?;
            let apd = apply_transform(
                &build_transform(TransformKind::TPrime, n, Precision::Exact)?,
                &sld,
            )?;
            let tpd = apply_transform(
                &build_transform(TransformKind::TTilde, n, Precision::Exact)?,
                &sld,
            )?;
            (sld, apd, tpd)
        }
        Precision::Float64 => {
            let sld = depolarize_sld(&sld.into_float(), p_f)?;
            let apd = apply_transform(
                &build_transform(TransformKind::TPrime, n, Precision::Float64)?,
                &sld,
            )?;
            let tpd = apply_transform(
                &build_transform(TransformKind::TTilde, n, Precision::Float64)?,
                &sld,
            )?;
            (sld, apd, tpd)
        }
    };
    Ok(NoisyEnumerators { sld, apd, tpd })
}

/// Entanglement criteria testable from enumerators under local depolarizing
/// noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// a_n(p) > 2^−n.
    NBody,
    /// a'_n(p) > a'_{n−1}(p).
    Purity,
    /// Lower bound on the concurrence stays positive.
    Concurrence,
    /// Overlap with the noiseless state exceeds a witness bound
    /// (default 0.5, valid for GME stabilizer states).
    Fidelity,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::NBody => "n_body",
            Criterion::Purity => "purity",
            Criterion::Concurrence => "concurrence",
            Criterion::Fidelity => "fidelity",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_body" | "n-body" => Ok(Criterion::NBody),
            "purity" => Ok(Criterion::Purity),
            "concurrence" => Ok(Criterion::Concurrence),
            "fidelity" => Ok(Criterion::Fidelity),
            other => Err(Error::Parse(format!("unknown criterion {other:?}"))),
        }
    }
}

/// Result of a threshold search: the supremum of noise strengths at which
/// the criterion still certifies entanglement. `fired_at_zero` is false when
/// the criterion does not even fire on the noiseless state (threshold 0).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Threshold {
    pub p_star: f64,
    pub fired_at_zero: bool,
}

/// Criterion margins as a function of p, evaluated from the exact noiseless
/// SLD. Every ingredient is a non-negative combination of the decayed
/// sector lengths, so f64 evaluation is accurate at any n.
struct MarginEvaluator {
    n: usize,
    sld: Vec<f64>,
    criterion: Criterion,
    fidelity_bound: f64,
}

impl MarginEvaluator {
    fn new(
        family: &StateFamily,
        n: usize,
        criterion: Criterion,
        fidelity_bound: f64,
    ) -> Result<Self> {
        if criterion == Criterion::Fidelity && !family.is_stabilizer() {
            return Err(Error::contract(
                "the fidelity criterion needs a stabilizer family (witness bound 1/2)",
            ));
        }
        let (sld, _, _) = family_all_enumerators(family, n)?;
        Ok(MarginEvaluator {
            n,
            sld: sld.to_f64(),
            criterion,
            fidelity_bound,
        })
    }

    fn margin(&self, p: f64) -> f64 {
        let n = self.n;
        let q = 1.0 - p;
        let q2 = q * q;
        let decayed: Vec<f64> = self
            .sld
            .iter()
            .enumerate()
            .map(|(i, a)| a * q2.powi(i as i32))
            .collect();
        match self.criterion {
            Criterion::NBody => decayed[n] - 0.5f64.powi(n as i32),
            Criterion::Purity => {
                // a'_n − a'_{n−1} = Σ_j (1 − 2(n−j)/n) a_j(p)
                let global: f64 = decayed.iter().sum();
                let marginal: f64 = decayed
                    .iter()
                    .enumerate()
                    .map(|(j, a)| 2.0 * (n - j) as f64 / n as f64 * a)
                    .sum();
                global - marginal
            }
            Criterion::Concurrence => {
                let purity: f64 = decayed.iter().sum();
                let all_triplet: f64 = accurate_dot(
                    decayed
                        .iter()
                        .enumerate()
                        .map(|(j, &a)| (3.0f64.powi((n - j) as i32) * 0.5f64.powi(n as i32), a)),
                );
                let w = 0.5f64.powi(n as i32);
                w + (1.0 - w) * purity - all_triplet
            }
            Criterion::Fidelity => {
                let overlap: f64 = self
                    .sld
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * q.powi(j as i32))
                    .sum();
                overlap - self.fidelity_bound
            }
        }
    }
}

const THRESHOLD_TOL: f64 = 1e-4;

fn bisect(eval: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // margin(lo) > 0 >= margin(hi)
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Supremum of p for which the criterion certifies entanglement of
/// ℰ_p^⊗n[Ψ], to absolute tolerance 1e−4.
///
/// A pre-scan over 64 intervals guards against non-monotone margins: with a
/// single sign change the crossing is bisected directly, otherwise the scan
/// is refined 16-fold and the last positive-to-nonpositive crossing is
/// bisected.
pub fn noise_threshold(
    family: &StateFamily,
    n: usize,
    criterion: Criterion,
    fidelity_bound: Option<f64>,
) -> Result<Threshold> {
    let eval = MarginEvaluator::new(family, n, criterion, fidelity_bound.unwrap_or(0.5))?;
    if eval.margin(0.0) <= 0.0 {
        return Ok(Threshold {
            p_star: 0.0,
            fired_at_zero: false,
        });
    }
    let margin = |p: f64| eval.margin(p);
    let scan = |points: usize| -> Vec<(f64, f64)> {
        (0..=points)
            .map(|i| {
                let p = i as f64 / points as f64;
                (p, margin(p))
            })
            .collect()
    };
    let grid = scan(64);
    let crossings: Vec<usize> = grid
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].1 > 0.0 && w[1].1 <= 0.0)
        .map(|(i, _)| i)
        .collect();
    let (lo, hi) = match crossings.len() {
        0 => {
            return Ok(Threshold {
                p_star: 1.0,
                fired_at_zero: true,
            })
        }
        1 => (grid[crossings[0]].0, grid[crossings[0] + 1].0),
        _ => {
            let fine = scan(1024);
            let last = fine
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[0].1 > 0.0 && w[1].1 <= 0.0)
                .map(|(i, _)| i)
                .next_back()
                .expect("crossing survives refinement");
            (fine[last].0, fine[last + 1].0)
        }
    };
    Ok(Threshold {
        p_star: bisect(&margin, lo, hi),
        fired_at_zero: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn ghz6_sld() -> EnumeratorVector {
        crate::states::families::family_enumerators(&StateFamily::Ghz { entangled: 6 }, 6)
            .unwrap()
    }

    #[test]
    fn depolarize_endpoints() {
        let a = ghz6_sld();
        let same = depolarize_sld(&a, 0.0).unwrap();
        assert_eq!(same.to_exact().unwrap(), a.to_exact().unwrap());
        let dead = depolarize_sld(&a, 1.0).unwrap();
        let v = dead.to_f64();
        assert_eq!(v[0], a.to_f64()[0]);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn ghz_full_sector_decay_rate() {
        let a = ghz6_sld();
        let noisy = depolarize_sld(&a, 0.1).unwrap();
        let expect = a.to_f64()[6] * 0.9f64.powi(12);
        assert!((noisy.to_f64()[6] - expect).abs() < 1e-15);
    }

    #[test]
    fn channel_composition() {
        let a = ghz6_sld().into_float();
        let twice = depolarize_sld(&depolarize_sld(&a, 0.2).unwrap(), 0.3).unwrap();
        let once = depolarize_sld(&a, 1.0 - 0.8 * 0.7).unwrap();
        for (x, y) in twice.to_f64().iter().zip(once.to_f64()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_product_state_example() {
        // Σ C(2,i)/4 · (1/2)^i = 0.5625 at p = 1/2.
        let prod =
            crate::states::families::family_enumerators(&StateFamily::ProductZero, 2).unwrap();
        let overlap = overlap_after_noise(&prod, 0.5).unwrap();
        assert!((overlap - 0.5625).abs() < 1e-15);
        assert!((purity_after_noise(&prod, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((overlap_after_noise(&prod, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn noisy_enumerators_p_zero_and_one() {
        let clean = noisy_family_enumerators(
            &StateFamily::Dicke { excitations: 2 },
            4,
            &rat(0, 1),
            Precision::Exact,
        )
        .unwrap();
        let direct = crate::states::families::family_enumerators(
            &StateFamily::Dicke { excitations: 2 },
            4,
        )
        .unwrap();
        assert_eq!(clean.apd.to_exact().unwrap(), direct.to_exact().unwrap());

        let dead = noisy_family_enumerators(
            &StateFamily::Ghz { entangled: 4 },
            4,
            &rat(1, 1),
            Precision::Exact,
        )
        .unwrap();
        let mixed =
            crate::states::families::family_enumerators(&StateFamily::MaximallyMixed, 4).unwrap();
        assert_eq!(dead.tpd.to_exact().unwrap(), mixed.to_exact().unwrap());
    }

    #[test]
    fn product_state_never_certifies() {
        for criterion in [
            Criterion::NBody,
            Criterion::Purity,
            Criterion::Concurrence,
        ] {
            let t = noise_threshold(&StateFamily::ProductZero, 4, criterion, None).unwrap();
            assert_eq!(t.p_star, 0.0);
            assert!(!t.fired_at_zero);
        }
    }

    #[test]
    fn purity_dominates_concurrence_for_dicke() {
        for n in [4usize, 8, 12] {
            let half = StateFamily::Dicke { excitations: n / 2 };
            let p_pur = noise_threshold(&half, n, Criterion::Purity, None).unwrap();
            let p_con = noise_threshold(&half, n, Criterion::Concurrence, None).unwrap();
            assert!(
                p_pur.p_star >= p_con.p_star - THRESHOLD_TOL,
                "n={n}: purity {} vs concurrence {}",
                p_pur.p_star,
                p_con.p_star
            );
        }
    }

    #[test]
    fn ghz_fidelity_threshold_positive() {
        let t = noise_threshold(
            &StateFamily::Ghz { entangled: 6 },
            6,
            Criterion::Fidelity,
            None,
        )
        .unwrap();
        assert!(t.fired_at_zero);
        assert!(t.p_star > 0.01 && t.p_star < 0.5);
    }
}
