//! Dense density-matrix states and the brute-force enumerator oracles.
//!
//! Everything here is exponential in the qubit count and capped at
//! [`DENSE_QUBIT_CAP`]; this layer exists to cross-check the analytic and
//! sampled paths, not to scale.

use crate::error::{Error, Result};
use crate::sampler::circuit::{Circuit, Gate};
use crate::vector::{EnumeratorVector, VectorKind};
use num_complex::Complex64;
use rayon::prelude::*;

/// Hard cap on dense-state qubit count.
pub const DENSE_QUBIT_CAP: usize = 12;

/// A 2^n × 2^n density matrix, row-major; qubit q is bit q of a basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: usize,
    mat: Vec<Complex64>,
}

impl DenseState {
    pub fn new(n: usize, mat: Vec<Complex64>) -> Result<Self> {
        if n > DENSE_QUBIT_CAP {
            return Err(Error::resource(format!(
                "dense states are capped at {DENSE_QUBIT_CAP} qubits (requested {n})"
            )));
        }
        let dim = 1usize << n;
        if mat.len() != dim * dim {
            return Err(Error::contract(format!(
                "density matrix for n={n} needs {} entries, got {}",
                dim * dim,
                mat.len()
            )));
        }
        let state = DenseState { n, mat };
        state.validate()?;
        Ok(state)
    }

    /// Hermiticity and unit trace to 1e−12; diagonal entries must be
    /// non-negative up to 1e−10 (a cheap necessary condition for positivity).
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let mut trace = Complex64::new(0.0, 0.0);
        for a in 0..dim {
            trace += self.mat[a * dim + a];
            if self.mat[a * dim + a].re < -1e-10 {
                return Err(Error::contract("negative diagonal entry"));
            }
            for b in 0..=a {
                let upper = self.mat[b * dim + a];
                let lower = self.mat[a * dim + b];
                if (upper - lower.conj()).norm() > 1e-12 {
                    return Err(Error::contract("matrix is not Hermitian to 1e-12"));
                }
            }
        }
        if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::contract(format!("trace {} is not 1 to 1e-12", trace)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.mat[a * self.dim() + b]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.mat
    }

    /// ρ = |ψ⟩⟨ψ| from a normalized state vector.
    pub fn from_statevector(n: usize, psi: &[Complex64]) -> Result<Self> {
        let dim = 1usize << n;
        if psi.len() != dim {
            return Err(Error::contract("state vector has wrong dimension"));
        }
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::contract(format!("state vector norm² = {norm}, not 1")));
        }
        let mut mat = vec![Complex64::default(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                mat[a * dim + b] = psi[a] * psi[b].conj();
            }
        }
        DenseState::new(n, mat)
    }

    pub fn computational(n: usize, basis: usize) -> Result<Self> {
        let dim = 1usize << n;
        let mut psi = vec![Complex64::default(); dim];
        psi[basis] = Complex64::new(1.0, 0.0);
        Self::from_statevector(n, &psi)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = 1usize << n;
        let mut mat = vec![Complex64::default(); dim * dim];
        let p = 1.0 / dim as f64;
        for a in 0..dim {
            mat[a * dim + a] = Complex64::new(p, 0.0);
        }
        DenseState::new(n, mat)
    }

    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Convex combination Σ w_k ρ_k (weights must sum to 1).
    pub fn mixture(parts: &[(f64, &DenseState)]) -> Result<Self> {
        let n = parts
            .first()
            .ok_or_else(|| Error::contract("empty mixture"))?
            .1
            .n;
        let dim = 1usize << n;
        let mut mat = vec![Complex64::default(); dim * dim];
        for (w, state) in parts {
            if state.n != n {
                return Err(Error::contract("mixture parts have different n"));
            }
            for (o, e) in mat.iter_mut().zip(state.mat.iter()) {
                *o += *w * e;
            }
        }
        DenseState::new(n, mat)
    }
}

/// Run a Clifford circuit on |0…0⟩ as a dense state vector.
pub fn statevector_from_circuit(circuit: &Circuit) -> Result<Vec<Complex64>> {
    if circuit.n > DENSE_QUBIT_CAP {
        return Err(Error::resource(format!(
            "dense statevectors are capped at {DENSE_QUBIT_CAP} qubits"
        )));
    }
    circuit.validate()?;
    let dim = 1usize << circuit.n;
    let mut psi = vec![Complex64::default(); dim];
    psi[0] = Complex64::new(1.0, 0.0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for g in &circuit.gates {
        match *g {
            Gate::H(q) => {
                let bit = 1usize << q;
                for a in 0..dim {
                    if a & bit == 0 {
                        let lo = psi[a];
                        let hi = psi[a | bit];
                        psi[a] = (lo + hi) * inv_sqrt2;
                        psi[a | bit] = (lo - hi) * inv_sqrt2;
                    }
                }
            }
            Gate::S(q) => {
                let bit = 1usize << q;
                for (a, amp) in psi.iter_mut().enumerate() {
                    if a & bit != 0 {
                        *amp *= Complex64::new(0.0, 1.0);
                    }
                }
            }
            Gate::X(q) => {
                let bit = 1usize << q;
                for a in 0..dim {
                    if a & bit == 0 {
                        psi.swap(a, a | bit);
                    }
                }
            }
            Gate::Y(q) => {
                let bit = 1usize << q;
                for a in 0..dim {
                    if a & bit == 0 {
                        let lo = psi[a];
                        let hi = psi[a | bit];
                        psi[a] = Complex64::new(0.0, -1.0) * hi;
                        psi[a | bit] = Complex64::new(0.0, 1.0) * lo;
                    }
                }
            }
            Gate::Z(q) => {
                let bit = 1usize << q;
                for (a, amp) in psi.iter_mut().enumerate() {
                    if a & bit != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let cb = 1usize << c;
                let tb = 1usize << t;
                for a in 0..dim {
                    if a & cb != 0 && a & tb == 0 {
                        psi.swap(a, a | tb);
                    }
                }
            }
            Gate::Cz(p, q) => {
                let pb = 1usize << p;
                let qb = 1usize << q;
                for (a, amp) in psi.iter_mut().enumerate() {
                    if a & pb != 0 && a & qb != 0 {
                        *amp = -*amp;
                    }
                }
            }
        }
    }
    Ok(psi)
}

pub fn dense_from_circuit(circuit: &Circuit) -> Result<DenseState> {
    let psi = statevector_from_circuit(circuit)?;
    DenseState::from_statevector(circuit.n, &psi)
}

/// Pauli string digits: 0 = I, 1 = X, 2 = Y, 3 = Z on each qubit.
#[derive(Debug, Clone, Copy)]
struct PauliAction {
    flip: usize,
    yz_mask: usize,
    y_count: u32,
    weight: usize,
}

fn pauli_action(n: usize, index: usize) -> PauliAction {
    let mut flip = 0usize;
    let mut yz = 0usize;
    let mut y_count = 0u32;
    let mut weight = 0usize;
    let mut rest = index;
    for q in 0..n {
        let digit = rest & 3;
        rest >>= 2;
        match digit {
            0 => {}
            1 => {
                flip |= 1 << q;
                weight += 1;
            }
            2 => {
                flip |= 1 << q;
                yz |= 1 << q;
                y_count += 1;
                weight += 1;
            }
            _ => {
                yz |= 1 << q;
                weight += 1;
            }
        }
    }
    PauliAction {
        flip,
        yz_mask: yz,
        y_count,
        weight,
    }
}

// i^k for k mod 4
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Tr[ρP] for the Pauli string with the given base-4 index.
fn pauli_expectation(state: &DenseState, action: &PauliAction) -> f64 {
    let dim = state.dim();
    let mut acc = Complex64::default();
    for x in 0..dim {
        let sign = if ((x & action.yz_mask).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += state.entry(x, x ^ action.flip) * sign;
    }
    (acc * i_pow(action.y_count)).re
}

/// Shor-Laflamme distribution by brute force over all 4^n Pauli strings.
pub fn sld_from_dense(state: &DenseState) -> Result<EnumeratorVector> {
    let n = state.n;
    let total = 1usize << (2 * n);
    let chunk = 1usize << (2 * n.min(6)).min(16);
    let partials: Vec<Vec<f64>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0f64; n + 1];
            let start = c * chunk;
            for p in start..(start + chunk).min(total) {
                let action = pauli_action(n, p);
                let t = pauli_expectation(state, &action);
                acc[action.weight] += t * t;
            }
            acc
        })
        .collect();
    let scale = 1.0 / (1u64 << n) as f64;
    let mut out = vec![0.0f64; n + 1];
    for part in partials {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|v| *v *= scale);
    EnumeratorVector::float(n, VectorKind::Sld, out)
}

/// Spin-flipped state Y^⊗n ρᵀ Y^⊗n.
pub fn spin_flip(state: &DenseState) -> Result<DenseState> {
    let n = state.n;
    let dim = state.dim();
    let full = dim - 1;
    let mut mat = vec![Complex64::default(); dim * dim];
    for u in 0..dim {
        for v in 0..dim {
            let sign = if ((u.count_ones() + v.count_ones()) % 2) == 0 {
                1.0
            } else {
                -1.0
            };
            mat[u * dim + v] = state.entry(v ^ full, u ^ full) * sign;
        }
    }
    DenseState::new(n, mat)
}

/// Triplet probability distribution by brute force: ã_i = 2^−n Σ Tr[ρPρ̃P].
pub fn tpd_from_dense(state: &DenseState) -> Result<EnumeratorVector> {
    let n = state.n;
    let flipped = spin_flip(state)?;
    let dim = state.dim();
    let total = 1usize << (2 * n);
    let chunk = 1usize << (2 * n.min(5)).min(12);
    let partials: Vec<Vec<f64>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0f64; n + 1];
            let start = c * chunk;
            for p in start..(start + chunk).min(total) {
                let action = pauli_action(n, p);
                // Tr[ρPσP] = ±Σ_{a,c} (−1)^{|a∧yz|+|c∧yz|} ρ[a, c^f] σ[c, a^f]
                let mut sum = Complex64::default();
                for a in 0..dim {
                    let sa = ((a & action.yz_mask).count_ones() % 2) == 1;
                    for ci in 0..dim {
                        let sc = ((ci & action.yz_mask).count_ones() % 2) == 1;
                        let term = state.entry(a, ci ^ action.flip)
                            * flipped.entry(ci, a ^ action.flip);
                        if sa ^ sc {
                            sum -= term;
                        } else {
                            sum += term;
                        }
                    }
                }
                let sign = if action.y_count % 2 == 0 { 1.0 } else { -1.0 };
                acc[action.weight] += sign * sum.re;
            }
            acc
        })
        .collect();
    let scale = 1.0 / (1u64 << n) as f64;
    let mut out = vec![0.0f64; n + 1];
    for part in partials {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|v| *v *= scale);
    let sum: f64 = out.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "triplet distribution sums to {sum}, expected 1 within 1e-10"
        )));
    }
    EnumeratorVector::float(n, VectorKind::Tpd, out)
}

/// Reduced state on the qubits selected by `keep_mask`.
pub fn partial_trace(state: &DenseState, keep_mask: usize) -> Result<DenseState> {
    let n = state.n;
    if keep_mask >= (1usize << n) {
        return Err(Error::contract("keep mask addresses qubits beyond n"));
    }
    let kept: Vec<usize> = (0..n).filter(|q| keep_mask & (1 << q) != 0).collect();
    let dropped: Vec<usize> = (0..n).filter(|q| keep_mask & (1 << q) == 0).collect();
    let kd = kept.len();
    let dd = dropped.len();
    let kdim = 1usize << kd;
    let ddim = 1usize << dd;
    let expand = |bits: usize, positions: &[usize]| -> usize {
        positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &q)| acc | (((bits >> i) & 1) << q))
    };
    let mut mat = vec![Complex64::default(); kdim * kdim];
    for a in 0..kdim {
        let abase = expand(a, &kept);
        for b in 0..kdim {
            let bbase = expand(b, &kept);
            let mut acc = Complex64::default();
            for e in 0..ddim {
                let env = expand(e, &dropped);
                acc += state.entry(abase | env, bbase | env);
            }
            mat[a * kdim + b] = acc;
        }
    }
    DenseState::new(kd, mat)
}

fn subsystem_purity(state: &DenseState, keep_mask: usize) -> Result<f64> {
    Ok(partial_trace(state, keep_mask)?.purity())
}

/// Averaged purity distribution: entry i averages Tr[ρ_S²] over all size-i
/// subsystems.
pub fn apd_from_dense(state: &DenseState) -> Result<EnumeratorVector> {
    let n = state.n;
    let masks: Vec<usize> = (0..(1usize << n)).collect();
    let purities: Vec<(u32, f64)> = masks
        .par_iter()
        .map(|&m| Ok((m.count_ones(), subsystem_purity(state, m)?)))
        .collect::<Result<_>>()?;
    let mut sums = vec![0.0f64; n + 1];
    let mut counts = vec![0u64; n + 1];
    for (ones, p) in purities {
        sums[ones as usize] += p;
        counts[ones as usize] += 1;
    }
    let out: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    EnumeratorVector::float(n, VectorKind::Apd, out)
}

/// Single-qubit depolarizing channel with strength p applied to every qubit.
pub fn depolarize_dense(state: &DenseState, p: f64) -> Result<DenseState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("noise strength {p} outside [0,1]")));
    }
    let dim = state.dim();
    let mut mat = state.mat.clone();
    for q in 0..state.n {
        let bit = 1usize << q;
        let mut next = vec![Complex64::default(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let e = mat[a * dim + b];
                // (1 − 3p/4) ρ + p/4 (XρX + YρY + ZρZ)
                let x = mat[(a ^ bit) * dim + (b ^ bit)];
                let ys = if (a & bit != 0) ^ (b & bit != 0) { -1.0 } else { 1.0 };
                let y = x * ys;
                let z = e * ys;
                next[a * dim + b] = e * (1.0 - 0.75 * p) + (x + y + z) * (0.25 * p);
            }
        }
        mat = next;
    }
    DenseState::new(state.n, mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_pair() -> DenseState {
        let c = Circuit::new(2, vec![Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        dense_from_circuit(&c).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn sld_two_qubit_anchors() {
        let zero = DenseState::computational(2, 0).unwrap();
        close(&sld_from_dense(&zero).unwrap().to_f64(), &[0.25, 0.5, 0.25], 1e-12);
        close(&sld_from_dense(&bell_pair()).unwrap().to_f64(), &[0.25, 0.0, 0.75], 1e-12);
        let mixed = DenseState::maximally_mixed(1).unwrap();
        close(&sld_from_dense(&mixed).unwrap().to_f64(), &[0.5, 0.0], 1e-12);
    }

    #[test]
    fn apd_two_qubit_anchors() {
        let zero = DenseState::computational(2, 0).unwrap();
        close(&apd_from_dense(&zero).unwrap().to_f64(), &[1.0, 1.0, 1.0], 1e-12);
        close(&apd_from_dense(&bell_pair()).unwrap().to_f64(), &[1.0, 0.5, 1.0], 1e-12);
        let mixed = DenseState::maximally_mixed(2).unwrap();
        close(&apd_from_dense(&mixed).unwrap().to_f64(), &[1.0, 0.5, 0.25], 1e-12);
    }

    #[test]
    fn tpd_anchors() {
        close(
            &tpd_from_dense(&bell_pair()).unwrap().to_f64(),
            &[0.25, 0.0, 0.75],
            1e-12,
        );
        let zero3 = DenseState::computational(3, 0).unwrap();
        close(
            &tpd_from_dense(&zero3).unwrap().to_f64(),
            &[0.0, 0.0, 0.0, 1.0],
            1e-12,
        );
        let mixed = DenseState::maximally_mixed(2).unwrap();
        close(
            &tpd_from_dense(&mixed).unwrap().to_f64(),
            &[1.0 / 16.0, 6.0 / 16.0, 9.0 / 16.0],
            1e-12,
        );
    }

    #[test]
    fn spin_flip_bloch_inversion() {
        // |0⟩⟨0| has Bloch vector +z; the flipped state is |1⟩⟨1|.
        let zero = DenseState::computational(1, 0).unwrap();
        let flipped = spin_flip(&zero).unwrap();
        assert!((flipped.entry(1, 1).re - 1.0).abs() < 1e-14);

        let mixed = DenseState::maximally_mixed(3).unwrap();
        assert_eq!(spin_flip(&mixed).unwrap(), mixed);
    }

    #[test]
    fn depolarize_full_strength_gives_mixed() {
        let noisy = depolarize_dense(&bell_pair(), 1.0).unwrap();
        let mixed = DenseState::maximally_mixed(2).unwrap();
        for (a, b) in noisy.entries().iter().zip(mixed.entries()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn purity_decomposition() {
        let state = depolarize_dense(&bell_pair(), 0.13).unwrap();
        let sld = sld_from_dense(&state).unwrap();
        assert!((sld.sum_f64() - state.purity()).abs() < 1e-12);
    }
}
