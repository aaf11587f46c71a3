//! Binary-symplectic stabilizer groups and exact weight counting.
//!
//! Pauli signs are dropped throughout: weights and commutation relations
//! depend only on the (x, z) bitmask pair, which is all the enumerator
//! machinery needs.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest group rank enumerable for the stabilizer side.
pub const GROUP_ENUM_CAP: usize = 30;
/// Largest normalizer rank (n+k) enumerable for the dual/shadow side.
pub const NORMALIZER_ENUM_CAP: usize = 26;

/// A sign-free n-qubit Pauli string as x/z bitmasks (qubit q = bit q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub fn weight(self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Product in the sign-free group: bitwise XOR.
    pub fn mul(self, other: PauliString) -> PauliString {
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// Symplectic inner product: 0 if the operators commute, 1 otherwise.
    pub fn symplectic(self, other: PauliString) -> u8 {
        (((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2) as u8
    }

    pub fn from_text(s: &str) -> Result<(PauliString, usize)> {
        let body = s.trim().trim_start_matches(['+', '-']);
        let mut x = 0u64;
        let mut z = 0u64;
        let mut n = 0usize;
        for (q, ch) in body.chars().enumerate() {
            if q >= 64 {
                return Err(Error::resource("Pauli strings are capped at 64 qubits"));
            }
            match ch {
                'I' | 'i' | '_' | '.' => {}
                'X' | 'x' => x |= 1 << q,
                'Y' | 'y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                'Z' | 'z' => z |= 1 << q,
                _ => {
                    return Err(Error::Parse(format!(
                        "unexpected character {ch:?} in Pauli string {s:?}"
                    )))
                }
            }
            n = q + 1;
        }
        if n == 0 {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok((PauliString { x, z }, n))
    }

    pub fn to_text(self, n: usize) -> String {
        (0..n)
            .map(|q| match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }
}

/// An n-qubit stabilizer group given by n−k independent commuting generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
}

/// Exact integer weight counts of a code's stabilizer group, normalizer, and
/// shadow coset. `a[i]` counts weight-i stabilizers (Σ a = 2^{n−k});
/// `b` and `a_shadow` count normalizer and shadow elements (Σ = 2^{n+k}) and
/// are absent when the normalizer is too large to enumerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeEnumerators {
    pub n: usize,
    pub k: usize,
    pub a: Vec<u64>,
    pub b: Option<Vec<u64>>,
    pub a_shadow: Option<Vec<u64>>,
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::contract(format!("qubit count {n} outside 1..=64")));
        }
        if generators.len() > n {
            return Err(Error::contract(format!(
                "{} generators exceed {} qubits",
                generators.len(),
                n
            )));
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for g in &generators {
            if g.x & !mask != 0 || g.z & !mask != 0 {
                return Err(Error::contract("generator acts beyond qubit count"));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[..i] {
                if a.symplectic(*b) != 0 {
                    return Err(Error::contract(format!(
                        "generators {} and {} anticommute",
                        b.to_text(n),
                        a.to_text(n)
                    )));
                }
            }
        }
        if gf2_rank(&generators) != generators.len() {
            return Err(Error::contract("generators are dependent over GF(2)"));
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// One generator per line over {I, X, Y, Z}; optional sign prefixes are
    /// accepted and discarded.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut n: Option<usize> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (p, len) = PauliString::from_text(line)?;
            match n {
                None => n = Some(len),
                Some(expect) if expect != len => {
                    return Err(Error::Parse(format!(
                        "generator {line:?} has length {len}, expected {expect}"
                    )))
                }
                _ => {}
            }
            gens.push(p);
        }
        let n = n.ok_or_else(|| Error::Parse("no generators found".into()))?;
        StabilizerGroup::new(n, gens)
    }

    pub fn to_text(&self) -> String {
        self.generators
            .iter()
            .map(|g| g.to_text(self.n))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// The ⟦7,1,3⟧ color code (Steane) with its standard CSS generators.
    pub fn steane() -> StabilizerGroup {
        let gens = [
            "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
        ];
        let generators = gens
            .iter()
            .map(|s| PauliString::from_text(s).expect("static generator").0)
            .collect();
        StabilizerGroup::new(7, generators).expect("static group")
    }

    /// Weight histogram of all 2^{n−k} group elements (Gray-code walk).
    pub fn stabilizer_weights(&self) -> Result<Vec<u64>> {
        let r = self.generators.len();
        if r > GROUP_ENUM_CAP {
            return Err(Error::resource(format!(
                "stabilizer enumeration capped at rank {GROUP_ENUM_CAP}, group has {r}"
            )));
        }
        Ok(enumerate_span_weights(&self.generators, self.n))
    }

    /// Basis of the normalizer (all Paulis commuting with the group),
    /// obtained as the GF(2) kernel of the symplectically-swapped check
    /// matrix. The basis has n+k elements and contains the generators' span.
    pub fn normalizer_basis(&self) -> Vec<PauliString> {
        // Commutation with (x, z) is linear in the swapped vector (z | x).
        let rows: Vec<u128> = self
            .generators
            .iter()
            .map(|g| (g.z as u128) | ((g.x as u128) << self.n))
            .collect();
        let kernel = gf2_kernel(&rows, 2 * self.n);
        kernel
            .into_iter()
            .map(|v| PauliString {
                x: (v & ((1u128 << self.n) - 1)) as u64,
                z: (v >> self.n) as u64,
            })
            .collect()
    }

    /// A Pauli P with PS = (−1)^{wt(S)} SP for every group element S; the
    /// shadow is the coset P·(normalizer). Solves the linear system over the
    /// generators; identity iff all generators have even weight.
    pub fn shadow_element(&self) -> Result<PauliString> {
        let n = self.n;
        let rows: Vec<u128> = self
            .generators
            .iter()
            .map(|g| (g.z as u128) | ((g.x as u128) << n))
            .collect();
        let rhs: Vec<u8> = self
            .generators
            .iter()
            .map(|g| (g.weight() % 2) as u8)
            .collect();
        let v = gf2_solve(&rows, &rhs, 2 * n)
            .ok_or_else(|| Error::Numeric("shadow system is inconsistent".into()))?;
        Ok(PauliString {
            x: (v & ((1u128 << n) - 1)) as u64,
            z: (v >> n) as u64,
        })
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for StabilizerGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StabilizerGroup::from_text(s)
    }
}

/// JSON form with x/z bitmask arrays, mirroring the text format.
#[derive(Serialize, Deserialize)]
pub struct StabilizerGroupRepr {
    pub n: usize,
    pub x: Vec<u64>,
    pub z: Vec<u64>,
}

impl StabilizerGroup {
    pub fn to_repr(&self) -> StabilizerGroupRepr {
        StabilizerGroupRepr {
            n: self.n,
            x: self.generators.iter().map(|g| g.x).collect(),
            z: self.generators.iter().map(|g| g.z).collect(),
        }
    }

    pub fn from_repr(repr: &StabilizerGroupRepr) -> Result<Self> {
        if repr.x.len() != repr.z.len() {
            return Err(Error::Parse("x and z arrays differ in length".into()));
        }
        let generators = repr
            .x
            .iter()
            .zip(&repr.z)
            .map(|(&x, &z)| PauliString { x, z })
            .collect();
        StabilizerGroup::new(repr.n, generators)
    }
}

fn enumerate_span_weights(basis: &[PauliString], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let mut current = PauliString::default();
    hist[0] += 1;
    let total = 1u64 << basis.len();
    // Gray code: element g differs from g−1 by one basis vector.
    for g in 1..total {
        let flip = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
        let idx = flip.trailing_zeros() as usize;
        current = current.mul(basis[idx]);
        hist[current.weight()] += 1;
    }
    hist
}

/// Weight histogram of a coset offset·span(basis).
fn enumerate_coset_weights(offset: PauliString, basis: &[PauliString], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let mut current = offset;
    hist[current.weight()] += 1;
    let total = 1u64 << basis.len();
    for g in 1..total {
        let flip = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
        let idx = flip.trailing_zeros() as usize;
        current = current.mul(basis[idx]);
        hist[current.weight()] += 1;
    }
    hist
}

/// Exact weight enumerators of a stabilizer code: stabilizer counts A,
/// normalizer counts B, and shadow counts (a coset of the normalizer; equal
/// to B when all generators have even weight).
pub fn code_enumerators(group: &StabilizerGroup) -> Result<CodeEnumerators> {
    let n = group.n();
    let k = group.k();
    let a = group.stabilizer_weights()?;
    let (b, a_shadow) = if n + k <= NORMALIZER_ENUM_CAP {
        let basis = group.normalizer_basis();
        debug_assert_eq!(basis.len(), n + k);
        let b = enumerate_span_weights(&basis, n);
        let p = group.shadow_element()?;
        let shadow = if p.is_identity() {
            b.clone()
        } else {
            enumerate_coset_weights(p, &basis, n)
        };
        (Some(b), Some(shadow))
    } else {
        (None, None)
    };
    Ok(CodeEnumerators {
        n,
        k,
        a,
        b,
        a_shadow,
    })
}

fn gf2_rank(paulis: &[PauliString]) -> usize {
    let rows: Vec<u128> = paulis
        .iter()
        .map(|p| (p.x as u128) | ((p.z as u128) << 64))
        .collect();
    let mut rank = 0;
    let mut reduced: Vec<u128> = Vec::new();
    for &row in &rows {
        let mut r = row;
        for &b in &reduced {
            let pivot = 1u128 << (127 - b.leading_zeros());
            if r & pivot != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            reduced.push(r);
            rank += 1;
        }
    }
    rank
}

/// Kernel basis of the GF(2) matrix whose rows are `rows` over `cols` columns.
fn gf2_kernel(rows: &[u128], cols: usize) -> Vec<u128> {
    let mut mat: Vec<u128> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let bit = 1u128 << col;
        if let Some(r) = (rank..mat.len()).find(|&r| mat[r] & bit != 0) {
            mat.swap(rank, r);
            let pivot_row = mat[rank];
            for (idx, row) in mat.iter_mut().enumerate() {
                if idx != rank && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
    }
    let mut kernel = Vec::with_capacity(cols - rank);
    let is_pivot = |c: usize| pivot_cols.binary_search(&c).is_ok();
    for free in (0..cols).filter(|&c| !is_pivot(c)) {
        let mut v = 1u128 << free;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            if mat[r] & (1u128 << free) != 0 {
                v |= 1u128 << pc;
            }
        }
        kernel.push(v);
    }
    kernel
}

/// One solution v of rows·v = rhs over GF(2), if any.
fn gf2_solve(rows: &[u128], rhs: &[u8], cols: usize) -> Option<u128> {
    let mut mat: Vec<(u128, u8)> = rows.iter().copied().zip(rhs.iter().copied()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..cols {
        let bit = 1u128 << col;
        if let Some(r) = (rank..mat.len()).find(|&r| mat[r].0 & bit != 0) {
            mat.swap(rank, r);
            let (prow, pr) = mat[rank];
            for (idx, row) in mat.iter_mut().enumerate() {
                if idx != rank && row.0 & bit != 0 {
                    row.0 ^= prow;
                    row.1 ^= pr;
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
    }
    if mat[rank..].iter().any(|&(row, r)| row == 0 && r == 1) {
        return None;
    }
    let mut v = 0u128;
    for &(r, c) in &pivots {
        if mat[r].1 == 1 {
            v |= 1u128 << c;
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = StabilizerGroup::from_text("XXXXIII\nZZIIIII\n").unwrap();
        assert_eq!(g.n(), 7);
        assert_eq!(g.k(), 5);
        assert_eq!(g.generators()[0].to_text(7), "XXXXIII");
    }

    #[test]
    fn anticommuting_rejected() {
        assert!(StabilizerGroup::from_text("XI\nZI").is_err());
        assert!(StabilizerGroup::from_text("XX\nYY\nZZ").is_err()); // dependent
    }

    #[test]
    fn steane_weights() {
        let enums = code_enumerators(&StabilizerGroup::steane()).unwrap();
        assert_eq!(enums.a, vec![1, 0, 0, 0, 21, 0, 42, 0]);
        assert_eq!(
            enums.b.as_deref().unwrap(),
            &[1, 0, 0, 21, 21, 126, 42, 45]
        );
        // All generators have even weight, so the shadow is the normalizer.
        assert_eq!(enums.a_shadow, enums.b);
    }

    #[test]
    fn two_qubit_repetition_check() {
        // {II, ZZ}: brute force over all 16 two-qubit Paulis gives
        // A = (1,0,1) and B = (1,2,5).
        let g = StabilizerGroup::from_text("ZZ").unwrap();
        let enums = code_enumerators(&g).unwrap();
        assert_eq!(enums.k, 1);
        assert_eq!(enums.a, vec![1, 0, 1]);
        assert_eq!(enums.b.as_deref().unwrap(), &[1, 2, 5]);
        // ZZ has even weight: shadow equals normalizer.
        assert_eq!(enums.a_shadow, enums.b);
    }

    #[test]
    fn ghz3_group() {
        let g = StabilizerGroup::from_text("XXX\nZZI\nIZZ").unwrap();
        let enums = code_enumerators(&g).unwrap();
        assert_eq!(enums.a, vec![1, 0, 3, 4]);
        // k = 0: normalizer equals the group itself.
        assert_eq!(enums.b.as_deref().unwrap(), &[1, 0, 3, 4]);
    }

    #[test]
    fn odd_weight_generator_shifts_shadow() {
        // Single qubit stabilized by Z: shadow must anticommute with Z.
        let g = StabilizerGroup::from_text("Z").unwrap();
        let p = g.shadow_element().unwrap();
        assert_eq!(p.symplectic(PauliString { x: 0, z: 1 }), 1);
        let enums = code_enumerators(&g).unwrap();
        // Normalizer {I, Z}; shadow {X, Y}.
        assert_eq!(enums.b.as_deref().unwrap(), &[1, 1]);
        assert_eq!(enums.a_shadow.as_deref().unwrap(), &[0, 2]);
    }

    #[test]
    fn json_repr_round_trip() {
        let g = StabilizerGroup::steane();
        let repr = g.to_repr();
        let back = StabilizerGroup::from_repr(&repr).unwrap();
        assert_eq!(g, back);
    }
}
