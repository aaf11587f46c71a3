//! Unbiased single-shot estimators for all six enumerator vectors, bootstrap
//! confidence intervals, variance prediction, sample planning, and
//! damping-factor readout mitigation.
//!
//! A Bell sample with s singlets fixes the value of every estimator, so all
//! 6(n+1) estimators are tabulated once as exact rationals. The sector-length
//! and dual tables reuse the MacWilliams integer lattice; the purity tables
//! reuse the triplet-to-purity lattice. Construction is O(n²) big-integer
//! work. Float renditions of the sector tables lose significance once the
//! entries leave the double range (n beyond a few hundred); exact values
//! remain available at any n.

use crate::error::{Error, Result};
use crate::math::{big_pow, macwilliams_lattice, rat_to_f64, tpd_to_apd_lattice, Binomials};
use crate::sampler::{multinomial, shot_rng, BellSampleSet};
use crate::transforms::accurate_dot;
use crate::vector::{EnumeratorVector, Values, VectorKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Precomputed single-shot estimator values: `value(kind, i, s)` is the
/// estimate of enumerator entry i declared after observing s singlets.
#[derive(Debug, Clone)]
pub struct EstimatorTable {
    n: usize,
    mac: Vec<Vec<BigInt>>,
    purity_lattice: Vec<Vec<BigInt>>,
    binom: Binomials,
    two_n: BigInt,
}

pub fn build_estimator_tables(n: usize) -> Result<EstimatorTable> {
    if n == 0 {
        return Err(Error::contract("estimator tables require n >= 1"));
    }
    let binom = Binomials::new(n);
    let mac = macwilliams_lattice(n, &binom);
    let purity_lattice = tpd_to_apd_lattice(n, &binom);
    Ok(EstimatorTable {
        n,
        mac,
        purity_lattice,
        binom,
        two_n: big_pow(2, n),
    })
}

impl EstimatorTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact single-shot estimator value for `kind` entry `i` given `s`
    /// singlets.
    pub fn value_exact(&self, kind: VectorKind, i: usize, s: usize) -> BigRational {
        let n = self.n;
        debug_assert!(i <= n && s <= n);
        match kind {
            // ⟨α|W_i|α⟩ is row i of the triplet-to-sector map at column n−s.
            VectorKind::Sld => {
                let mut num = self.mac[i][n - s].clone();
                if i % 2 == 1 {
                    num = -num;
                }
                BigRational::new(num, self.two_n.clone())
            }
            // the dual observable carries an extra flip operator whose
            // eigenvalue is (−1)^s
            VectorKind::DualSld => {
                let v = self.value_exact(VectorKind::Sld, i, s);
                if s % 2 == 1 {
                    -v
                } else {
                    v
                }
            }
            VectorKind::Apd => {
                BigRational::new(self.purity_lattice[i][n - s].clone(), self.binom.c(n, i))
            }
            // antidiagonal MacWilliams map: reversed purity table
            VectorKind::DualApd => self.value_exact(VectorKind::Apd, n - i, s),
            VectorKind::Tpd => {
                if s == n - i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            VectorKind::DualTpd => {
                let v = self.value_exact(VectorKind::Tpd, i, s);
                if (n + i) % 2 == 0 {
                    v
                } else {
                    -v
                }
            }
        }
    }

    pub fn value_f64(&self, kind: VectorKind, i: usize, s: usize) -> f64 {
        rat_to_f64(&self.value_exact(kind, i, s))
    }

    /// Dense float table for one estimator family, indexed `[i][s]`.
    pub fn float_table(&self, kind: VectorKind) -> Vec<Vec<f64>> {
        (0..=self.n)
            .map(|i| (0..=self.n).map(|s| self.value_f64(kind, i, s)).collect())
            .collect()
    }
}

/// Point estimate of one enumerator vector with percentile-bootstrap 95%
/// confidence bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorEstimate {
    pub kind: VectorKind,
    pub values: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

/// Full estimation output for a Bell sample set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimationReport {
    pub n: usize,
    pub shots: u64,
    pub bootstrap_resamples: usize,
    pub bootstrap_seed: u64,
    pub estimates: Vec<VectorEstimate>,
    pub purity: f64,
    pub purity_ci: (f64, f64),
    pub mean_triplets: f64,
    pub retained_fraction: Option<f64>,
}

impl EstimationReport {
    pub fn vector(&self, kind: VectorKind) -> &VectorEstimate {
        self.estimates
            .iter()
            .find(|e| e.kind == kind)
            .expect("all six kinds are always present")
    }
}

fn estimates_from_histogram(
    hist: &[u64],
    tables: &[Vec<Vec<f64>>; 6],
    n: usize,
) -> ([Vec<f64>; 6], f64) {
    let shots: u64 = hist.iter().sum();
    let freq: Vec<f64> = hist.iter().map(|&c| c as f64 / shots as f64).collect();
    let mut out: [Vec<f64>; 6] = Default::default();
    for (k, table) in tables.iter().enumerate() {
        out[k] = (0..=n)
            .map(|i| accurate_dot((0..=n).map(|t| (table[i][n - t], freq[t]))))
            .collect();
    }
    // purity: alternating sum over singlet parity
    let purity = (0..=n)
        .map(|t| {
            let sign = if (n - t) % 2 == 0 { 1.0 } else { -1.0 };
            sign * freq[t]
        })
        .sum();
    (out, purity)
}

/// Estimate all six enumerator vectors from Bell samples, with 95%
/// percentile-bootstrap confidence intervals over `resamples` resamples.
pub fn estimate_enumerators(
    samples: &BellSampleSet,
    table: &EstimatorTable,
    resamples: usize,
    bootstrap_seed: u64,
) -> Result<EstimationReport> {
    if samples.n != table.n {
        return Err(Error::contract(format!(
            "sample set has n={}, table has n={}",
            samples.n, table.n
        )));
    }
    let n = table.n;
    let hist = samples.triplet_histogram();
    let shots: u64 = hist.iter().sum();
    if shots == 0 {
        return Err(Error::contract("empty sample set"));
    }
    let tables: [Vec<Vec<f64>>; 6] = [
        table.float_table(VectorKind::Sld),
        table.float_table(VectorKind::DualSld),
        table.float_table(VectorKind::Apd),
        table.float_table(VectorKind::DualApd),
        table.float_table(VectorKind::Tpd),
        table.float_table(VectorKind::DualTpd),
    ];
    let (points, purity) = estimates_from_histogram(&hist, &tables, n);

    // bootstrap: resampling shots with replacement only touches the
    // triplet-count histogram, so resample it multinomially
    let mut rng = shot_rng(bootstrap_seed, u64::MAX - 1);
    let probs: Vec<f64> = hist.iter().map(|&c| c as f64 / shots as f64).collect();
    let mut samples_per_entry: Vec<Vec<Vec<f64>>> =
        vec![vec![Vec::with_capacity(resamples); n + 1]; 6];
    let mut purity_samples = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let re_hist = multinomial(&mut rng, shots, &probs)?;
        let (re_points, re_purity) = estimates_from_histogram(&re_hist, &tables, n);
        for (k, vec) in re_points.iter().enumerate() {
            for (i, &v) in vec.iter().enumerate() {
                samples_per_entry[k][i].push(v);
            }
        }
        purity_samples.push(re_purity);
    }

    let percentile = |sorted: &[f64], q: f64| -> f64 {
        if sorted.is_empty() {
            return f64::NAN;
        }
        let idx = (q * (sorted.len() - 1) as f64).round() as usize;
        sorted[idx.min(sorted.len() - 1)]
    };
    let ci_of = |mut draws: Vec<f64>| -> (f64, f64) {
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (percentile(&draws, 0.025), percentile(&draws, 0.975))
    };

    let kinds = VectorKind::ALL;
    let mut estimates = Vec::with_capacity(6);
    for (k, kind) in kinds.into_iter().enumerate() {
        let mut ci_low = Vec::with_capacity(n + 1);
        let mut ci_high = Vec::with_capacity(n + 1);
        for i in 0..=n {
            if resamples > 0 {
                let (lo, hi) = ci_of(std::mem::take(&mut samples_per_entry[k][i]));
                ci_low.push(lo);
                ci_high.push(hi);
            } else {
                ci_low.push(points[k][i]);
                ci_high.push(points[k][i]);
            }
        }
        estimates.push(VectorEstimate {
            kind,
            values: points[k].clone(),
            ci_low,
            ci_high,
        });
    }
    let purity_ci = if resamples > 0 {
        ci_of(purity_samples)
    } else {
        (purity, purity)
    };

    let mean_triplets = hist
        .iter()
        .enumerate()
        .map(|(t, &c)| t as f64 * c as f64)
        .sum::<f64>()
        / shots as f64;

    Ok(EstimationReport {
        n,
        shots,
        bootstrap_resamples: resamples,
        bootstrap_seed,
        estimates,
        purity,
        purity_ci,
        mean_triplets,
        retained_fraction: samples.retained_fraction,
    })
}

/// Predicted statistical variance of the SLD estimator after N shots.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariancePrediction {
    pub per_index: Vec<f64>,
    pub total: f64,
}

/// Multinomial variance of the sector-length estimator:
/// σ_i² = (Σ_j (T̃⁻¹_{i,j})² ã_j − (Σ_j T̃⁻¹_{i,j} ã_j)²) / N.
pub fn sld_variance(tpd: &EnumeratorVector, shots: u64) -> Result<VariancePrediction> {
    if tpd.kind != VectorKind::Tpd {
        return Err(Error::contract(format!(
            "sld_variance needs a tpd vector, got {}",
            tpd.kind
        )));
    }
    if shots == 0 {
        return Err(Error::contract("shot count must be positive"));
    }
    let n = tpd.n;
    let binom = Binomials::new(n);
    let mac = macwilliams_lattice(n, &binom);
    let per_index: Vec<f64> = match &tpd.values {
        Values::Exact(probs) => {
            let four_n = big_pow(4, n);
            (0..=n)
                .map(|i| {
                    // signs of T̃⁻¹ rows are irrelevant for the square and
                    // uniform over a row for the mean
                    let mut second = BigRational::zero();
                    let mut first = BigRational::zero();
                    for j in 0..=n {
                        let t = &mac[i][j];
                        second += BigRational::new(t * t, four_n.clone()) * &probs[j];
                        first += BigRational::new(t.clone(), big_pow(2, n)) * &probs[j];
                    }
                    let var = second - &first * &first;
                    rat_to_f64(&var) / shots as f64
                })
                .collect()
        }
        Values::Float(probs) => (0..=n)
            .map(|i| {
                let row: Vec<f64> = (0..=n)
                    .map(|j| {
                        let t = rat_to_f64(&BigRational::new(mac[i][j].clone(), big_pow(2, n)));
                        if i % 2 == 1 {
                            -t
                        } else {
                            t
                        }
                    })
                    .collect();
                let second = accurate_dot(row.iter().zip(probs).map(|(&t, &p)| (t * t, p)));
                let first = accurate_dot(row.iter().zip(probs).map(|(&t, &p)| (t, p)));
                (second - first * first) / shots as f64
            })
            .collect(),
    };
    let total = per_index.iter().sum();
    Ok(VariancePrediction { per_index, total })
}

/// Shots needed to reach a target total SLD variance (at least 1).
pub fn samples_required(tpd: &EnumeratorVector, target_variance: f64) -> Result<u64> {
    if !(target_variance > 0.0) {
        return Err(Error::contract(format!(
            "target variance {target_variance} must be positive"
        )));
    }
    let single = sld_variance(tpd, 1)?;
    let shots = (single.total / target_variance).ceil();
    if shots >= u64::MAX as f64 {
        return Err(Error::Numeric(format!(
            "required shot count {shots:.3e} exceeds u64 range"
        )));
    }
    Ok((shots as u64).max(1))
}

/// Hoeffding sample bound N = Δ²·⌈ln(2c/(δ))/(2ε²)⌉ with spectral widths
/// Δ = 1 (tpd), 2 (apd), and 2·3^i·C(n,i)/2^n (sld entry i); c = n+1 when a
/// simultaneous guarantee over all entries is requested. Duals share their
/// primal's width.
pub fn hoeffding_samples(
    kind: VectorKind,
    n: usize,
    index: Option<usize>,
    epsilon: f64,
    delta: f64,
    simultaneous: bool,
) -> Result<u64> {
    if !(0.0 < epsilon && epsilon < 1.0) || !(0.0 < delta && delta < 1.0) {
        return Err(Error::contract(format!(
            "need 0 < epsilon, delta < 1 (got {epsilon}, {delta})"
        )));
    }
    let count = if simultaneous {
        2.0 * (n + 1) as f64
    } else {
        2.0
    };
    let base = ((count / delta).ln() / (2.0 * epsilon * epsilon)).ceil();
    let width: f64 = match kind {
        VectorKind::Tpd | VectorKind::DualTpd => 1.0,
        VectorKind::Apd | VectorKind::DualApd => 2.0,
        VectorKind::Sld | VectorKind::DualSld => {
            let i = index.ok_or_else(|| {
                Error::contract("sector-length bounds need the entry index i")
            })?;
            if i > n {
                return Err(Error::contract(format!("index {i} exceeds n={n}")));
            }
            let binom = Binomials::new(n);
            let norm = rat_to_f64(&BigRational::new(
                big_pow(3, i) * binom.c(n, i),
                big_pow(2, n),
            ));
            2.0 * norm
        }
    };
    let shots = (width * width * base).ceil();
    if !shots.is_finite() || shots >= u64::MAX as f64 {
        return Err(Error::Numeric("sample bound exceeds u64 range".into()));
    }
    Ok((shots as u64).max(1))
}

/// Per-weight damping factors fitted on a reference state with known ideal
/// sector lengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MitigationModel {
    pub lambdas: Vec<f64>,
    /// λ fitted above 1 and clamped (purifying-noise artifact).
    pub clamped: Vec<bool>,
    /// ideal entry was zero; λ forced to 1.
    pub zero_ideal: Vec<bool>,
    pub reference: String,
}

/// λ_i = raw_i / ideal_i, clamped into (0, 1]; vanishing ideal entries give
/// λ_i = 1 with a flag.
pub fn fit_mitigation(
    reference_raw: &EnumeratorVector,
    reference_ideal: &EnumeratorVector,
    reference: impl Into<String>,
) -> Result<MitigationModel> {
    if reference_raw.kind != VectorKind::Sld || reference_ideal.kind != VectorKind::Sld {
        return Err(Error::contract("mitigation is fitted on sld vectors"));
    }
    if reference_raw.n != reference_ideal.n {
        return Err(Error::contract("reference vectors disagree on n"));
    }
    let raw = reference_raw.to_f64();
    let ideal = reference_ideal.to_f64();
    let mut lambdas = Vec::with_capacity(raw.len());
    let mut clamped = vec![false; raw.len()];
    let mut zero_ideal = vec![false; raw.len()];
    for (i, (&r, &t)) in raw.iter().zip(&ideal).enumerate() {
        if t.abs() < 1e-300 {
            zero_ideal[i] = true;
            lambdas.push(1.0);
            continue;
        }
        let mut l = r / t;
        if l > 1.0 {
            clamped[i] = true;
            l = 1.0;
        }
        if l <= 0.0 {
            // a damping factor must stay positive to be invertible
            clamped[i] = true;
            l = f64::MIN_POSITIVE.max(l.abs().max(1e-12));
        }
        lambdas.push(l);
    }
    Ok(MitigationModel {
        lambdas,
        clamped,
        zero_ideal,
        reference: reference.into(),
    })
}

/// Divide a raw SLD entrywise by the damping factors.
pub fn mitigate(raw: &EnumeratorVector, model: &MitigationModel) -> Result<EnumeratorVector> {
    if raw.kind != VectorKind::Sld {
        return Err(Error::contract("mitigation applies to sld vectors"));
    }
    if raw.n + 1 != model.lambdas.len() {
        return Err(Error::contract("mitigation model has wrong length"));
    }
    let values: Vec<f64> = raw
        .to_f64()
        .iter()
        .zip(&model.lambdas)
        .map(|(v, l)| v / l)
        .collect();
    EnumeratorVector::float(raw.n, VectorKind::Sld, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::depolarize_sld;
    use crate::states::families::{family_enumerators, StateFamily};
    use crate::transforms::{apply_transform, build_transform, TransformKind};
    use crate::vector::Precision;
    use num_traits::{FromPrimitive, Signed};

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn single_qubit_table_anchors() {
        let t = build_estimator_tables(1).unwrap();
        // sector-length estimator for i = 1: −3/2 on a singlet, +1/2 otherwise
        assert_eq!(t.value_exact(VectorKind::Sld, 1, 1), rat(-3, 2));
        assert_eq!(t.value_exact(VectorKind::Sld, 1, 0), rat(1, 2));
        // i = 0 estimator is the constant 1/2^n
        assert_eq!(t.value_exact(VectorKind::Sld, 0, 0), rat(1, 2));
        assert_eq!(t.value_exact(VectorKind::Sld, 0, 1), rat(1, 2));
        // averaged-purity estimator for i = 1: ±1
        assert_eq!(t.value_exact(VectorKind::Apd, 1, 1), rat(-1, 1));
        assert_eq!(t.value_exact(VectorKind::Apd, 1, 0), rat(1, 1));
    }

    #[test]
    fn sld_table_matches_defining_sum() {
        // ⟨α|W_i|α⟩ = Σ_l C(s,l) C(n−s,i−l) (−3)^l / 2^n
        for n in [1usize, 2, 5, 8] {
            let t = build_estimator_tables(n).unwrap();
            let binom = Binomials::new(n);
            for i in 0..=n {
                for s in 0..=n {
                    let mut expect = BigRational::zero();
                    for l in 0..=i.min(s) {
                        let mut term = BigRational::new(
                            binom.c(s, l) * binom.c(n - s, i - l) * big_pow(3, l),
                            big_pow(2, n),
                        );
                        if l % 2 == 1 {
                            term = -term;
                        }
                        expect += term;
                    }
                    assert_eq!(t.value_exact(VectorKind::Sld, i, s), expect, "n={n} i={i} s={s}");
                }
            }
        }
    }

    #[test]
    fn apd_table_bounded_by_one() {
        let t = build_estimator_tables(9).unwrap();
        for i in 0..=9 {
            for s in 0..=9 {
                let v = t.value_exact(VectorKind::Apd, i, s);
                assert!(v.abs() <= BigRational::one(), "i={i} s={s}: {v}");
            }
        }
    }

    #[test]
    fn unbiasedness_identity_exact() {
        // For any normalized TPD, the table-weighted expectation equals the
        // corresponding exact transform of the TPD.
        for n in [2usize, 6] {
            let table = build_estimator_tables(n).unwrap();
            let mut rng = shot_rng(77, n as u64);
            let raw: Vec<f64> = (0..=n)
                .map(|_| rand::Rng::random_range(&mut rng, 0.0..1.0))
                .collect();
            let total: f64 = raw.iter().sum();
            let tpd_exact: Vec<BigRational> = raw
                .iter()
                .map(|&x| BigRational::from_f64(x / total).unwrap())
                .collect();
            // renormalize exactly
            let sum: BigRational = tpd_exact.iter().cloned().sum();
            let tpd_exact: Vec<BigRational> = tpd_exact.into_iter().map(|v| v / &sum).collect();
            let tpd =
                EnumeratorVector::exact(n, VectorKind::Tpd, tpd_exact.clone()).unwrap();

            // E[est_kind]_i = Σ_t ã_t · table[i][n−t]
            let expect_kind = |kind: VectorKind| -> Vec<BigRational> {
                (0..=n)
                    .map(|i| {
                        (0..=n)
                            .map(|t| table.value_exact(kind, i, n - t) * &tpd_exact[t])
                            .fold(BigRational::zero(), |a, b| a + b)
                    })
                    .collect()
            };

            let t_tilde_inv =
                build_transform(TransformKind::TTildeInv, n, Precision::Exact).unwrap();
            let sld_target = apply_transform(&t_tilde_inv, &tpd).unwrap();
            assert_eq!(expect_kind(VectorKind::Sld), sld_target.to_exact().unwrap());

            let prime_inv =
                build_transform(TransformKind::TTildePrimeInv, n, Precision::Exact).unwrap();
            let apd_target = apply_transform(&prime_inv, &tpd).unwrap();
            assert_eq!(expect_kind(VectorKind::Apd), apd_target.to_exact().unwrap());

            assert_eq!(expect_kind(VectorKind::Tpd), tpd_exact);
        }
    }

    #[test]
    fn product_state_estimates_from_all_triplets() {
        // Every shot at n triplets: the sector estimate is the product-state
        // binomial C(n,i)/2^n.
        let n = 5;
        let table = build_estimator_tables(n).unwrap();
        let hist = {
            let mut h = vec![0u64; n + 1];
            h[n] = 1000;
            h
        };
        let set = BellSampleSet {
            n,
            shots: 1000,
            seed: 0,
            provenance: "test".into(),
            data: crate::sampler::SampleData::Histogram(hist),
            retained_fraction: None,
        };
        let report = estimate_enumerators(&set, &table, 50, 1).unwrap();
        let expect = family_enumerators(&StateFamily::ProductZero, n)
            .unwrap()
            .to_f64();
        for (e, x) in report.vector(VectorKind::Sld).values.iter().zip(expect) {
            assert!((e - x).abs() < 1e-12);
        }
        assert!((report.purity - 1.0).abs() < 1e-12);
        assert!((report.mean_triplets - n as f64).abs() < 1e-12);
    }

    #[test]
    fn variance_vanishes_for_product_tpd() {
        let n = 6;
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        let tpd = EnumeratorVector::float(n, VectorKind::Tpd, probs).unwrap();
        let v = sld_variance(&tpd, 1).unwrap();
        assert_eq!(v.total, 0.0);
        assert_eq!(samples_required(&tpd, 1e-4).unwrap(), 1);
    }

    #[test]
    fn hoeffding_anchor_values() {
        let tpd = hoeffding_samples(VectorKind::Tpd, 6, None, 0.01, 0.05, false).unwrap();
        assert_eq!(tpd, 18445);
        let apd = hoeffding_samples(VectorKind::Apd, 6, None, 0.01, 0.05, false).unwrap();
        assert_eq!(apd, 4 * tpd);
        // a_0 bounds shrink with n: width 2/2^n
        let small = hoeffding_samples(VectorKind::Sld, 4, Some(0), 0.01, 0.05, false).unwrap();
        let smaller =
            hoeffding_samples(VectorKind::Sld, 10, Some(0), 0.01, 0.05, false).unwrap();
        assert!(smaller < small);
        // simultaneous bounds grow logarithmically
        let sim = hoeffding_samples(VectorKind::Tpd, 6, None, 0.01, 0.05, true).unwrap();
        assert!(sim > tpd);
    }

    #[test]
    fn mitigation_round_trip_on_depolarized_ghz() {
        let n = 6;
        let ideal_prod = family_enumerators(&StateFamily::ProductZero, n)
            .unwrap()
            .into_float();
        let raw_prod = depolarize_sld(&ideal_prod, 0.02).unwrap();
        let model = fit_mitigation(&raw_prod, &ideal_prod, "product p=0.02").unwrap();
        assert!((model.lambdas[0] - 1.0).abs() < 1e-15);
        for (i, l) in model.lambdas.iter().enumerate() {
            assert!((l - 0.98f64.powi(2 * i as i32)).abs() < 1e-12);
        }

        let ideal_ghz = family_enumerators(&StateFamily::Ghz { entangled: n }, n)
            .unwrap()
            .into_float();
        let raw_ghz = depolarize_sld(&ideal_ghz, 0.02).unwrap();
        let fixed = mitigate(&raw_ghz, &model).unwrap();
        for (f, x) in fixed.to_f64().iter().zip(ideal_ghz.to_f64()) {
            assert!((f - x).abs() < 1e-10);
        }
    }

    #[test]
    fn mitigation_identity_and_clamping() {
        let v = family_enumerators(&StateFamily::ProductZero, 3)
            .unwrap()
            .into_float();
        let model = fit_mitigation(&v, &v, "self").unwrap();
        assert!(model.lambdas.iter().all(|&l| l == 1.0));
        let out = mitigate(&v, &model).unwrap();
        assert_eq!(out.to_f64(), v.to_f64());

        // raw above ideal clamps to 1 with a diagnostic
        let raw = EnumeratorVector::float(1, VectorKind::Sld, vec![0.6, 0.6]).unwrap();
        let ideal = EnumeratorVector::float(1, VectorKind::Sld, vec![0.5, 0.5]).unwrap();
        let model = fit_mitigation(&raw, &ideal, "clamp").unwrap();
        assert!(model.lambdas.iter().all(|&l| l == 1.0));
        assert!(model.clamped.iter().all(|&c| c));
    }
}
