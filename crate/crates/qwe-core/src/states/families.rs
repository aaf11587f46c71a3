//! Built-in state families with analytically known enumerators.

use crate::error::{Error, Result};
use crate::math::{big_pow, Binomials};
use crate::sampler::circuit::{Circuit, Gate};
use crate::states::dense::{DenseState, DENSE_QUBIT_CAP};
use crate::states::stabilizer::{code_enumerators, PauliString, StabilizerGroup};
use crate::transforms::{apply_transform, build_transform, TransformKind};
use crate::vector::{EnumeratorVector, Precision, VectorKind};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Edges of the 6-qubit prism ("cylinder") graph, whose graph state is
/// absolutely maximally entangled.
const AME6_EDGES: [(usize, usize); 9] = [
    (0, 1),
    (0, 2),
    (0, 5),
    (1, 2),
    (1, 4),
    (2, 3),
    (3, 4),
    (3, 5),
    (4, 5),
];

/// Parameterized state families used as generators and test oracles.
///
/// `Ghz { entangled }` and `CycleGraph { entangled }` pad the remaining
/// qubits with |0⟩ and |+⟩ respectively; `Superposition`/`Mixture`
/// interpolate between |0…0⟩ and |1…1⟩ coherently and incoherently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily {
    ProductZero,
    BellPairs,
    Ghz { entangled: usize },
    LineGraph,
    CycleGraph { entangled: usize },
    Dicke { excitations: usize },
    Ame6,
    Superposition { p: f64 },
    Mixture { p: f64 },
    TwoDesignAverage,
    MaximallyMixed,
}

/// Either concrete representation a family can be realized as.
#[derive(Debug, Clone)]
pub enum FamilyState {
    Dense(DenseState),
    Stabilizer(StabilizerGroup),
}

impl StateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::ProductZero => "product_zero",
            StateFamily::BellPairs => "bell_pairs",
            StateFamily::Ghz { .. } => "ghz",
            StateFamily::LineGraph => "line_graph",
            StateFamily::CycleGraph { .. } => "cycle_graph",
            StateFamily::Dicke { .. } => "dicke",
            StateFamily::Ame6 => "ame6",
            StateFamily::Superposition { .. } => "superposition",
            StateFamily::Mixture { .. } => "mixture",
            StateFamily::TwoDesignAverage => "two_design_average",
            StateFamily::MaximallyMixed => "maximally_mixed",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::contract("families require n >= 1"));
        }
        match *self {
            StateFamily::BellPairs if n % 2 != 0 => {
                Err(Error::contract("bell_pairs requires an even qubit count"))
            }
            StateFamily::Ghz { entangled } if entangled == 0 || entangled > n => Err(
                Error::contract(format!("ghz needs 1 <= entangled <= n, got {entangled}")),
            ),
            StateFamily::CycleGraph { entangled } if entangled > n => Err(Error::contract(
                format!("cycle_graph needs entangled <= n, got {entangled}"),
            )),
            StateFamily::CycleGraph { entangled } if entangled == 1 || entangled == 2 => Err(
                Error::contract("cycle_graph needs entangled = 0 or >= 3".to_string()),
            ),
            StateFamily::Dicke { excitations } if excitations > n => Err(Error::contract(
                format!("dicke needs excitations <= n, got {excitations}"),
            )),
            StateFamily::Ame6 if n != 6 => Err(Error::contract("ame6 is a 6-qubit family")),
            StateFamily::Superposition { p } | StateFamily::Mixture { p }
                if !(0.0..=1.0).contains(&p) =>
            {
                Err(Error::contract(format!("parameter p={p} outside [0,1]")))
            }
            _ => Ok(()),
        }
    }

    /// The Clifford preparation circuit for one copy, when the family is a
    /// stabilizer family. Dicke, superposition/mixture, the two-design
    /// average and the maximally mixed state have no Clifford circuit.
    pub fn preparation_circuit(&self, n: usize) -> Result<Circuit> {
        self.validate(n)?;
        let gates = match *self {
            StateFamily::ProductZero => vec![],
            StateFamily::BellPairs => (0..n / 2)
                .flat_map(|i| [Gate::H(2 * i), Gate::Cnot(2 * i, 2 * i + 1)])
                .collect(),
            StateFamily::Ghz { entangled } => {
                let mut g = vec![Gate::H(0)];
                g.extend((1..entangled).map(|t| Gate::Cnot(0, t)));
                g
            }
            StateFamily::LineGraph => {
                let mut g: Vec<Gate> = (0..n).map(Gate::H).collect();
                g.extend((0..n - 1).map(|i| Gate::Cz(i, i + 1)));
                g
            }
            StateFamily::CycleGraph { entangled } => {
                let mut g: Vec<Gate> = (0..n).map(Gate::H).collect();
                if entangled >= 3 {
                    g.extend((0..entangled).map(|i| Gate::Cz(i, (i + 1) % entangled)));
                }
                g
            }
            StateFamily::Ame6 => {
                let mut g: Vec<Gate> = (0..6).map(Gate::H).collect();
                g.extend(AME6_EDGES.iter().map(|&(a, b)| Gate::Cz(a, b)));
                g
            }
            _ => {
                return Err(Error::contract(format!(
                    "{} has no Clifford preparation circuit",
                    self.name()
                )))
            }
        };
        Circuit::new(n, gates)
    }

    fn stabilizer_group(&self, n: usize) -> Result<StabilizerGroup> {
        self.validate(n)?;
        let gens: Vec<PauliString> = match *self {
            StateFamily::ProductZero => (0..n).map(|q| PauliString { x: 0, z: 1 << q }).collect(),
            StateFamily::BellPairs => (0..n / 2)
                .flat_map(|i| {
                    let pair = 0b11u64 << (2 * i);
                    [
                        PauliString { x: pair, z: 0 },
                        PauliString { x: 0, z: pair },
                    ]
                })
                .collect(),
            StateFamily::Ghz { entangled } => {
                let mut g = Vec::with_capacity(n);
                g.push(PauliString {
                    x: (1u64 << entangled) - 1,
                    z: 0,
                });
                g.extend((0..entangled - 1).map(|i| PauliString {
                    x: 0,
                    z: 0b11 << i,
                }));
                g.extend((entangled..n).map(|q| PauliString { x: 0, z: 1 << q }));
                g
            }
            StateFamily::LineGraph => (0..n)
                .map(|v| {
                    let mut z = 0u64;
                    if v > 0 {
                        z |= 1 << (v - 1);
                    }
                    if v + 1 < n {
                        z |= 1 << (v + 1);
                    }
                    PauliString { x: 1 << v, z }
                })
                .collect(),
            StateFamily::CycleGraph { entangled } => (0..n)
                .map(|v| {
                    if v < entangled && entangled >= 3 {
                        let prev = (v + entangled - 1) % entangled;
                        let next = (v + 1) % entangled;
                        PauliString {
                            x: 1 << v,
                            z: (1 << prev) | (1 << next),
                        }
                    } else {
                        // padding qubits sit in |+⟩
                        PauliString { x: 1 << v, z: 0 }
                    }
                })
                .collect(),
            StateFamily::Ame6 => (0..6)
                .map(|v| {
                    let z = AME6_EDGES
                        .iter()
                        .filter(|&&(a, b)| a == v || b == v)
                        .map(|&(a, b)| 1u64 << (a + b - v))
                        .fold(0u64, |m, b| m | b);
                    PauliString { x: 1 << v, z }
                })
                .collect(),
            _ => {
                return Err(Error::contract(format!(
                    "{} is not a stabilizer family",
                    self.name()
                )))
            }
        };
        StabilizerGroup::new(n, gens)
    }

    pub fn is_stabilizer(&self) -> bool {
        matches!(
            self,
            StateFamily::ProductZero
                | StateFamily::BellPairs
                | StateFamily::Ghz { .. }
                | StateFamily::LineGraph
                | StateFamily::CycleGraph { .. }
                | StateFamily::Ame6
        )
    }
}

/// The concrete state object backing a family: stabilizer groups where
/// possible, dense matrices otherwise.
pub fn build_family_state(family: &StateFamily, n: usize) -> Result<FamilyState> {
    family.validate(n)?;
    if family.is_stabilizer() {
        return Ok(FamilyState::Stabilizer(family.stabilizer_group(n)?));
    }
    if n > DENSE_QUBIT_CAP {
        return Err(Error::resource(format!(
            "dense realization of {} is capped at {DENSE_QUBIT_CAP} qubits",
            family.name()
        )));
    }
    let state = match *family {
        StateFamily::Dicke { excitations } => dicke_dense(n, excitations)?,
        StateFamily::Superposition { p } => superposition_dense(n, p)?,
        StateFamily::Mixture { p } => {
            let zero = DenseState::computational(n, 0)?;
            let one = DenseState::computational(n, (1 << n) - 1)?;
            DenseState::mixture(&[(p, &zero), (1.0 - p, &one)])?
        }
        StateFamily::MaximallyMixed => DenseState::maximally_mixed(n)?,
        StateFamily::TwoDesignAverage => {
            return Err(Error::contract(
                "the two-design average is an enumerator-level family with no single state",
            ))
        }
        _ => unreachable!("stabilizer families handled above"),
    };
    Ok(FamilyState::Dense(state))
}

pub fn dicke_dense(n: usize, e: usize) -> Result<DenseState> {
    let dim = 1usize << n;
    let count = (0..dim).filter(|x| x.count_ones() as usize == e).count();
    let amp = 1.0 / (count as f64).sqrt();
    let psi: Vec<Complex64> = (0..dim)
        .map(|x| {
            if x.count_ones() as usize == e {
                Complex64::new(amp, 0.0)
            } else {
                Complex64::default()
            }
        })
        .collect();
    DenseState::from_statevector(n, &psi)
}

fn superposition_dense(n: usize, p: f64) -> Result<DenseState> {
    let dim = 1usize << n;
    let mut psi = vec![Complex64::default(); dim];
    psi[0] = Complex64::new(p.sqrt(), 0.0);
    psi[dim - 1] = Complex64::new((1.0 - p).sqrt(), 0.0);
    DenseState::from_statevector(n, &psi)
}

fn rational_p(p: f64) -> Result<BigRational> {
    BigRational::from_float(p)
        .ok_or_else(|| Error::contract(format!("parameter p={p} is not finite")))
}

/// Exact enumerator vector of a family in its natural kind: SLD for the
/// Pauli-correlation families, APD for Dicke states, TPD for the maximally
/// mixed state. Stabilizer families are counted from their groups.
pub fn family_enumerators(family: &StateFamily, n: usize) -> Result<EnumeratorVector> {
    family.validate(n)?;
    let binom = Binomials::new(n);
    let two_n = big_pow(2, n);
    match *family {
        StateFamily::ProductZero => {
            let values = (0..=n)
                .map(|i| BigRational::new(binom.c(n, i), two_n.clone()))
                .collect();
            EnumeratorVector::exact(n, VectorKind::Sld, values)
        }
        StateFamily::Ghz { entangled } if entangled == n => ghz_sld(n, &binom),
        StateFamily::Ghz { entangled } => {
            let core = ghz_sld(entangled, &Binomials::new(entangled))?;
            let pad = family_enumerators(&StateFamily::ProductZero, n - entangled)?;
            sld_tensor(&core, &pad)
        }
        StateFamily::BellPairs
        | StateFamily::LineGraph
        | StateFamily::CycleGraph { .. }
        | StateFamily::Ame6 => {
            let enums = code_enumerators(&family.stabilizer_group(n)?)?;
            let values = enums
                .a
                .iter()
                .map(|&c| BigRational::new(BigInt::from(c), two_n.clone()))
                .collect();
            EnumeratorVector::exact(n, VectorKind::Sld, values)
        }
        StateFamily::Dicke { excitations } => dicke_apd(n, excitations, &binom),
        StateFamily::Superposition { p } => {
            let p = rational_p(p)?;
            let q = BigRational::one() - &p;
            // Z-type strings contribute C(n,i)(p ± q)²; the 2^{n−1} full-weight
            // X/Y strings with an even Y count each contribute 4pq.
            let mut values = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let diag = if i % 2 == 0 {
                    BigRational::one()
                } else {
                    (&p - &q) * (&p - &q)
                };
                let mut v = BigRational::new(binom.c(n, i), two_n.clone()) * diag;
                if i == n {
                    v += BigRational::from_integer(BigInt::from(2)) * &p * &q;
                }
                values.push(v);
            }
            EnumeratorVector::exact(n, VectorKind::Sld, values)
        }
        StateFamily::Mixture { p } => {
            let p = rational_p(p)?;
            let q = BigRational::one() - &p;
            let values = (0..=n)
                .map(|i| {
                    let diag = if i % 2 == 0 {
                        BigRational::one()
                    } else {
                        (&p - &q) * (&p - &q)
                    };
                    BigRational::new(binom.c(n, i), two_n.clone()) * diag
                })
                .collect();
            EnumeratorVector::exact(n, VectorKind::Sld, values)
        }
        StateFamily::TwoDesignAverage => {
            let den = &two_n * (&two_n + BigInt::one());
            let mut values = vec![BigRational::new(BigInt::one(), two_n.clone())];
            for i in 1..=n {
                values.push(BigRational::new(big_pow(3, i) * binom.c(n, i), den.clone()));
            }
            EnumeratorVector::exact(n, VectorKind::Sld, values)
        }
        StateFamily::MaximallyMixed => {
            let four_n = big_pow(4, n);
            let values = (0..=n)
                .map(|i| BigRational::new(binom.c(n, i) * big_pow(3, i), four_n.clone()))
                .collect();
            EnumeratorVector::exact(n, VectorKind::Tpd, values)
        }
    }
}

fn ghz_sld(n: usize, binom: &Binomials) -> Result<EnumeratorVector> {
    let two_n = big_pow(2, n);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut values: Vec<BigRational> = (0..=n)
        .map(|i| {
            if i % 2 == 0 {
                BigRational::new(binom.c(n, i), two_n.clone())
            } else {
                BigRational::zero()
            }
        })
        .collect();
    values[n] += half;
    EnumeratorVector::exact(n, VectorKind::Sld, values)
}

/// Averaged purities of the n-qubit Dicke state with e excitations, from its
/// Schmidt decomposition.
fn dicke_apd(n: usize, e: usize, binom: &Binomials) -> Result<EnumeratorVector> {
    let values = (0..=n)
        .map(|i| {
            let mut acc = BigRational::zero();
            for j in 0..=e {
                let num = binom.c(i, j) * binom.c(n - i, e - j);
                let r = BigRational::new(num, binom.c(n, e));
                acc += &r * &r;
            }
            acc
        })
        .collect();
    EnumeratorVector::exact(n, VectorKind::Apd, values)
}

/// SLD of a tensor product: the convolution of the factors' SLDs.
pub fn sld_tensor(a: &EnumeratorVector, b: &EnumeratorVector) -> Result<EnumeratorVector> {
    if a.kind != VectorKind::Sld || b.kind != VectorKind::Sld {
        return Err(Error::contract(format!(
            "sld_tensor needs two sld vectors, got {} and {}",
            a.kind, b.kind
        )));
    }
    let n = a.n + b.n;
    if a.precision() == Precision::Exact && b.precision() == Precision::Exact {
        let av = a.to_exact()?;
        let bv = b.to_exact()?;
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, ai) in av.iter().enumerate() {
            for (j, bj) in bv.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        EnumeratorVector::exact(n, VectorKind::Sld, out)
    } else {
        let av = a.to_f64();
        let bv = b.to_f64();
        let mut out = vec![0.0f64; n + 1];
        for (i, ai) in av.iter().enumerate() {
            for (j, bj) in bv.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        EnumeratorVector::float(n, VectorKind::Sld, out)
    }
}

/// All three primal enumerators of a family (SLD, APD, TPD), exactly.
pub fn family_all_enumerators(
    family: &StateFamily,
    n: usize,
) -> Result<(EnumeratorVector, EnumeratorVector, EnumeratorVector)> {
    let natural = family_enumerators(family, n)?;
    let sld = match natural.kind {
        VectorKind::Sld => natural,
        VectorKind::Apd => apply_transform(
            &build_transform(TransformKind::TPrimeInv, n, Precision::Exact)?,
            &natural,
        )?,
        VectorKind::Tpd => apply_transform(
            &build_transform(TransformKind::TTildeInv, n, Precision::Exact)?,
            &natural,
        )?,
        other => return Err(Error::contract(format!("unexpected natural kind {other}"))),
    };
    let apd = apply_transform(
        &build_transform(TransformKind::TPrime, n, Precision::Exact)?,
        &sld,
    )?;
    let tpd = apply_transform(
        &build_transform(TransformKind::TTilde, n, Precision::Exact)?,
        &sld,
    )?;
    Ok((sld, apd, tpd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::dense::{apd_from_dense, dense_from_circuit, sld_from_dense};

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn ghz6_sld_values() {
        let v = family_enumerators(&StateFamily::Ghz { entangled: 6 }, 6).unwrap();
        assert_eq!(
            v.to_exact().unwrap(),
            vec![
                rat(1, 64),
                rat(0, 1),
                rat(15, 64),
                rat(0, 1),
                rat(15, 64),
                rat(0, 1),
                rat(33, 64)
            ]
        );
    }

    #[test]
    fn ghz3_group_weights() {
        match build_family_state(&StateFamily::Ghz { entangled: 3 }, 3).unwrap() {
            FamilyState::Stabilizer(g) => {
                assert_eq!(g.stabilizer_weights().unwrap(), vec![1, 0, 3, 4]);
            }
            _ => panic!("expected stabilizer realization"),
        }
    }

    #[test]
    fn dicke_apd_matches_dense() {
        for n in 1..=6usize {
            for e in 0..=n / 2 {
                let analytic =
                    family_enumerators(&StateFamily::Dicke { excitations: e }, n).unwrap();
                let dense = apd_from_dense(&dicke_dense(n, e).unwrap()).unwrap();
                for (a, d) in analytic.to_f64().iter().zip(dense.to_f64()) {
                    assert!((a - d).abs() < 1e-12, "n={n} e={e}");
                }
            }
        }
    }

    #[test]
    fn dicke_w_pair_is_psi_plus() {
        let v = family_enumerators(&StateFamily::Dicke { excitations: 1 }, 2).unwrap();
        assert_eq!(
            v.to_exact().unwrap(),
            vec![rat(1, 1), rat(1, 2), rat(1, 1)]
        );
    }

    #[test]
    fn superposition_and_mixture_match_dense() {
        for n in 2..=4usize {
            for p in [0.0, 0.3, 0.5, 0.75] {
                for family in [
                    StateFamily::Superposition { p },
                    StateFamily::Mixture { p },
                ] {
                    let analytic = family_enumerators(&family, n).unwrap();
                    let dense = match build_family_state(&family, n).unwrap() {
                        FamilyState::Dense(d) => d,
                        _ => unreachable!(),
                    };
                    let brute = sld_from_dense(&dense).unwrap();
                    for (a, d) in analytic.to_f64().iter().zip(brute.to_f64()) {
                        assert!((a - d).abs() < 1e-12, "{family:?} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn superposition_minus_mixture_full_sector() {
        for n in [2usize, 4, 6, 8] {
            for p in [0.1, 0.25, 0.5] {
                let sup = family_enumerators(&StateFamily::Superposition { p }, n).unwrap();
                let mix = family_enumerators(&StateFamily::Mixture { p }, n).unwrap();
                let diff = sup.to_f64()[n] - mix.to_f64()[n];
                assert!((diff - 2.0 * p * (1.0 - p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolution_reproduces_product() {
        let one = family_enumerators(&StateFamily::ProductZero, 1).unwrap();
        let two = sld_tensor(&one, &one).unwrap();
        assert_eq!(
            two.to_exact().unwrap(),
            vec![rat(1, 4), rat(1, 2), rat(1, 4)]
        );
    }

    #[test]
    fn bell_triple_convolution_matches_dense() {
        let bell = family_enumerators(&StateFamily::BellPairs, 2).unwrap();
        let mut acc = bell.clone();
        for _ in 0..2 {
            acc = sld_tensor(&acc, &bell).unwrap();
        }
        let direct = family_enumerators(&StateFamily::BellPairs, 6).unwrap();
        assert_eq!(acc.to_exact().unwrap(), direct.to_exact().unwrap());
        // a_6 − 2^−6 > 0: the n-body criterion fires for three Bell pairs.
        assert!(acc.to_f64()[6] - 1.0 / 64.0 > 0.0);
    }

    #[test]
    fn ame6_is_three_uniform() {
        let v = family_enumerators(&StateFamily::Ame6, 6).unwrap();
        let f = v.to_f64();
        assert!((f[0] - 1.0 / 64.0).abs() < 1e-15);
        assert_eq!(&f[1..=3], &[0.0, 0.0, 0.0]);
        let total: f64 = f.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "pure state purity 1");
    }

    #[test]
    fn maximally_mixed_tpd_binomial() {
        let v = family_enumerators(&StateFamily::MaximallyMixed, 2).unwrap();
        assert_eq!(
            v.to_exact().unwrap(),
            vec![rat(1, 16), rat(6, 16), rat(9, 16)]
        );
    }

    #[test]
    fn circuits_match_groups_on_dense_oracle() {
        // The preparation circuits and the generator sets must describe the
        // same states: compare brute-force SLDs at small n.
        let cases: Vec<(StateFamily, usize)> = vec![
            (StateFamily::ProductZero, 3),
            (StateFamily::BellPairs, 4),
            (StateFamily::Ghz { entangled: 3 }, 5),
            (StateFamily::LineGraph, 4),
            (StateFamily::CycleGraph { entangled: 4 }, 5),
            (StateFamily::Ame6, 6),
        ];
        for (family, n) in cases {
            let circuit = family.preparation_circuit(n).unwrap();
            let dense = dense_from_circuit(&circuit).unwrap();
            let brute = sld_from_dense(&dense).unwrap();
            let analytic = family_enumerators(&family, n).unwrap();
            for (b, a) in brute.to_f64().iter().zip(analytic.to_f64()) {
                assert!((b - a).abs() < 1e-10, "{family:?} n={n}");
            }
        }
    }
}
