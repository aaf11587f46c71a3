//! Aaronson-Gottesman stabilizer tableau with u64 row masks (≤ 64 qubits).

use crate::error::{Error, Result};
use crate::sampler::circuit::Gate;
use rand::Rng;

/// Destabilizer rows 0..n, stabilizer rows n..2n, one scratch row.
#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    // phase exponent of i: rows of real stabilizer states stay in {0, 2}
    r: Vec<u8>,
}

impl Tableau {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::resource(format!(
                "tableau masks support 1..=64 qubits, requested {n}"
            )));
        }
        let rows = 2 * n + 1;
        let mut t = Tableau {
            n,
            x: vec![0; rows],
            z: vec![0; rows],
            r: vec![0; rows],
        };
        for q in 0..n {
            t.x[q] = 1 << q; // destabilizer X_q
            t.z[n + q] = 1 << q; // stabilizer Z_q
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&mut self, gate: Gate) {
        match gate {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::X(q) => self.pauli(1 << q, 0),
            Gate::Y(q) => self.pauli(1 << q, 1 << q),
            Gate::Z(q) => self.pauli(0, 1 << q),
            Gate::Cnot(c, t) => self.cnot(c, t),
            Gate::Cz(a, b) => {
                self.h(b);
                self.cnot(a, b);
                self.h(b);
            }
        }
    }

    fn h(&mut self, q: usize) {
        let bit = 1u64 << q;
        for i in 0..2 * self.n {
            let xq = self.x[i] & bit;
            let zq = self.z[i] & bit;
            if xq != 0 && zq != 0 {
                self.r[i] = (self.r[i] + 2) & 3;
            }
            self.x[i] ^= xq ^ zq;
            self.z[i] ^= xq ^ zq;
        }
    }

    fn s(&mut self, q: usize) {
        let bit = 1u64 << q;
        for i in 0..2 * self.n {
            if self.x[i] & bit != 0 && self.z[i] & bit != 0 {
                self.r[i] = (self.r[i] + 2) & 3;
            }
            self.z[i] ^= self.x[i] & bit;
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let cb = 1u64 << c;
        let tb = 1u64 << t;
        for i in 0..2 * self.n {
            let xc = self.x[i] & cb != 0;
            let zt = self.z[i] & tb != 0;
            let xt = self.x[i] & tb != 0;
            let zc = self.z[i] & cb != 0;
            if xc && zt && (xt == zc) {
                self.r[i] = (self.r[i] + 2) & 3;
            }
            if xc {
                self.x[i] ^= tb;
            }
            if zt {
                self.z[i] ^= cb;
            }
        }
    }

    /// Conjugate rows by a Pauli with the given x/z masks (sign bookkeeping
    /// only; the masks themselves are unchanged).
    fn pauli(&mut self, px: u64, pz: u64) {
        for i in 0..2 * self.n {
            let flips =
                (self.x[i] & pz).count_ones() + (self.z[i] & px).count_ones();
            if flips % 2 == 1 {
                self.r[i] = (self.r[i] + 2) & 3;
            }
        }
    }

    // phase exponent of the product: row_b *= row_a
    fn row_mul(&mut self, a: usize, b: usize) {
        let mut exp: i32 = i32::from(self.r[a]) + i32::from(self.r[b]);
        let mut support = (self.x[a] | self.z[a]) & (self.x[b] | self.z[b]);
        while support != 0 {
            let q = support.trailing_zeros();
            support &= support - 1;
            let bit = 1u64 << q;
            let x1 = self.x[a] & bit != 0;
            let z1 = self.z[a] & bit != 0;
            let x2 = self.x[b] & bit != 0;
            let z2 = self.z[b] & bit != 0;
            // g(P1, P2): exponent of i picked up by single-qubit product
            exp += match (x1, z1) {
                (false, false) => 0,
                (true, true) => (z2 as i32) - (x2 as i32),
                (true, false) => (z2 as i32) * (2 * (x2 as i32) - 1),
                (false, true) => (x2 as i32) * (1 - 2 * (z2 as i32)),
            };
        }
        self.r[b] = exp.rem_euclid(4) as u8;
        self.x[b] ^= self.x[a];
        self.z[b] ^= self.z[a];
    }

    fn row_copy(&mut self, from: usize, to: usize) {
        self.x[to] = self.x[from];
        self.z[to] = self.z[from];
        self.r[to] = self.r[from];
    }

    /// Z-basis measurement of qubit q (the CHP procedure).
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        let n = self.n;
        let bit = 1u64 << q;
        let random_row = (n..2 * n).find(|&i| self.x[i] & bit != 0);
        match random_row {
            Some(p) => {
                for i in 0..2 * n {
                    if i != p && self.x[i] & bit != 0 {
                        self.row_mul(p, i);
                    }
                }
                self.row_copy(p, p - n);
                self.x[p] = 0;
                self.z[p] = bit;
                let outcome = rng.random::<bool>();
                self.r[p] = if outcome { 2 } else { 0 };
                outcome
            }
            None => {
                // deterministic: accumulate the stabilizer product indicated
                // by destabilizer x-bits into the scratch row
                let scratch = 2 * n;
                self.x[scratch] = 0;
                self.z[scratch] = 0;
                self.r[scratch] = 0;
                for i in 0..n {
                    if self.x[i] & bit != 0 {
                        self.row_mul(i + n, scratch);
                    }
                }
                self.r[scratch] == 2
            }
        }
    }

    /// X-basis measurement via a Hadamard and a Z measurement.
    pub fn measure_x<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        self.h(q);
        self.measure_z(q, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_state_measurements_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = Tableau::new(3).unwrap();
        for q in 0..3 {
            assert!(!t.measure_z(q, &mut rng));
        }
    }

    #[test]
    fn bell_pair_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut t = Tableau::new(2).unwrap();
            t.apply(Gate::H(0));
            t.apply(Gate::Cnot(0, 1));
            let a = t.measure_z(0, &mut rng);
            let b = t.measure_z(1, &mut rng);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn x_measurement_of_plus_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut t = Tableau::new(1).unwrap();
        t.apply(Gate::H(0));
        assert!(!t.measure_x(0, &mut rng));
    }

    #[test]
    fn pauli_flips_measurement() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut t = Tableau::new(2).unwrap();
        t.apply(Gate::X(1));
        assert!(!t.measure_z(0, &mut rng));
        assert!(t.measure_z(1, &mut rng));
    }

    #[test]
    fn cz_entangles_like_graph_state() {
        // CZ-linked plus states: measuring X on one qubit after Z on the
        // other is deterministic given the graph-state stabilizer X_0 Z_1.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let mut t = Tableau::new(2).unwrap();
            t.apply(Gate::H(0));
            t.apply(Gate::H(1));
            t.apply(Gate::Cz(0, 1));
            let z1 = t.measure_z(1, &mut rng);
            let x0 = t.measure_x(0, &mut rng);
            assert_eq!(x0, z1);
        }
    }
}
