//! The nine linear maps between the six enumerator families.
//!
//! All nine matrices act on ℝ^{n+1} and are derived from two integer
//! lattices (see [`crate::math`]) in O(n²) entry computations. In exact mode
//! every entry is an arbitrary-precision rational; float mode is available up
//! to a configured qubit limit beyond which entries leave the double range.
//!
//! Only the antidiagonal map and the diagonal sign map are well conditioned
//! together with the triplet-to-purity map; the remaining matrices have
//! exponentially large entries and amplify input errors, so exact mode is the
//! default wherever feasible.

use crate::error::{Error, Result};
use crate::math::{big_pow, macwilliams_lattice, rat_to_f64, tpd_to_apd_lattice, Binomials};
use crate::vector::{EnumeratorVector, Precision, Values, VectorKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Default qubit limit for float-mode construction; beyond this the largest
/// matrix entries overflow IEEE 754 doubles.
pub const FLOAT_N_LIMIT: usize = 1029;

/// Tags for the nine transform matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    /// MacWilliams transform in the sector-length basis.
    M,
    /// MacWilliams transform in the averaged-purity basis (antidiagonal).
    MPrime,
    /// MacWilliams transform in the triplet-probability basis (diagonal signs).
    MTilde,
    /// Sector lengths → averaged purities (lower triangular).
    TPrime,
    TPrimeInv,
    /// Sector lengths → triplet probabilities.
    TTilde,
    TTildeInv,
    /// Averaged purities → triplet probabilities.
    TTildePrime,
    /// Triplet probabilities → averaged purities; entries bounded by ±1.
    TTildePrimeInv,
}

impl TransformKind {
    pub const ALL: [TransformKind; 9] = [
        TransformKind::M,
        TransformKind::MPrime,
        TransformKind::MTilde,
        TransformKind::TPrime,
        TransformKind::TPrimeInv,
        TransformKind::TTilde,
        TransformKind::TTildeInv,
        TransformKind::TTildePrime,
        TransformKind::TTildePrimeInv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::M => "M",
            TransformKind::MPrime => "M_prime",
            TransformKind::MTilde => "M_tilde",
            TransformKind::TPrime => "T_prime",
            TransformKind::TPrimeInv => "T_prime_inv",
            TransformKind::TTilde => "T_tilde",
            TransformKind::TTildeInv => "T_tilde_inv",
            TransformKind::TTildePrime => "T_tilde_prime",
            TransformKind::TTildePrimeInv => "T_tilde_prime_inv",
        }
    }

    /// The fixed (source, target) vector kinds of this map. Each map equally
    /// carries the dual of its source to the dual of its target; the three
    /// MacWilliams involutions therefore also map duals back to primals.
    pub fn kind_map(self) -> (VectorKind, VectorKind) {
        match self {
            TransformKind::M => (VectorKind::Sld, VectorKind::DualSld),
            TransformKind::MPrime => (VectorKind::Apd, VectorKind::DualApd),
            TransformKind::MTilde => (VectorKind::Tpd, VectorKind::DualTpd),
            TransformKind::TPrime => (VectorKind::Sld, VectorKind::Apd),
            TransformKind::TPrimeInv => (VectorKind::Apd, VectorKind::Sld),
            TransformKind::TTilde => (VectorKind::Sld, VectorKind::Tpd),
            TransformKind::TTildeInv => (VectorKind::Tpd, VectorKind::Sld),
            TransformKind::TTildePrime => (VectorKind::Apd, VectorKind::Tpd),
            TransformKind::TTildePrimeInv => (VectorKind::Tpd, VectorKind::Apd),
        }
    }

    /// The single matrix mapping `source` to `target`, if one exists.
    pub fn between(source: VectorKind, target: VectorKind) -> Option<TransformKind> {
        TransformKind::ALL.into_iter().find(|k| {
            let (s, t) = k.kind_map();
            (s, t) == (source, target) || (s.dual(), t.dual()) == (source, target)
        })
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TransformKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown transform kind {s:?}")))
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum MatrixData {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// A dense (n+1)×(n+1) transform matrix, row-major, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix {
    n: usize,
    kind: TransformKind,
    data: MatrixData,
}

/// Build one of the nine transforms for `n` qubits.
///
/// Construction runs the O(n²) integer recurrences; the closed-form sums are
/// never evaluated here. In float mode, `n` must not exceed
/// [`FLOAT_N_LIMIT`] and any entry falling outside the double range is
/// reported as a precision error.
pub fn build_transform(
    kind: TransformKind,
    n: usize,
    precision: Precision,
) -> Result<TransformMatrix> {
    if n == 0 {
        return Err(Error::contract("transform matrices require n >= 1"));
    }
    if precision == Precision::Float64 && n > FLOAT_N_LIMIT {
        return Err(Error::Precision(format!(
            "float-mode transforms overflow doubles beyond n={FLOAT_N_LIMIT} (requested n={n})"
        )));
    }
    let entries = exact_entries(kind, n);
    let data = match precision {
        Precision::Exact => MatrixData::Exact(entries),
        Precision::Float64 => {
            let mut floats = Vec::with_capacity(entries.len());
            for e in &entries {
                let x = rat_to_f64(e);
                if !x.is_finite() {
                    return Err(Error::Precision(format!(
                        "entry of {} at n={n} is not representable as f64",
                        kind.name()
                    )));
                }
                floats.push(x);
            }
            MatrixData::Float(floats)
        }
    };
    Ok(TransformMatrix { n, kind, data })
}

fn exact_entries(kind: TransformKind, n: usize) -> Vec<BigRational> {
    let binom = Binomials::new(n);
    let dim = n + 1;
    let mut out = Vec::with_capacity(dim * dim);
    match kind {
        TransformKind::M | TransformKind::TTilde | TransformKind::TTildeInv => {
            let lat = macwilliams_lattice(n, &binom);
            let den = big_pow(2, n);
            for i in 0..dim {
                for j in 0..dim {
                    let mut num = lat[i][j].clone();
                    let flip = match kind {
                        TransformKind::TTilde => j % 2 == 1,
                        TransformKind::TTildeInv => i % 2 == 1,
                        _ => false,
                    };
                    if flip {
                        num = -num;
                    }
                    out.push(BigRational::new(num, den.clone()));
                }
            }
        }
        TransformKind::MPrime => {
            for i in 0..dim {
                for j in 0..dim {
                    out.push(if i == n - j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    });
                }
            }
        }
        TransformKind::MTilde => {
            for i in 0..dim {
                for j in 0..dim {
                    out.push(if i == j {
                        let sign = if (n + i) % 2 == 0 { 1 } else { -1 };
                        BigRational::from_integer(BigInt::from(sign))
                    } else {
                        BigRational::zero()
                    });
                }
            }
        }
        TransformKind::TPrime => {
            for i in 0..dim {
                for j in 0..dim {
                    let num = big_pow(2, n - i) * binom.c(n - j, n - i);
                    out.push(BigRational::new(num, binom.c(n, i)));
                }
            }
        }
        TransformKind::TPrimeInv => {
            for i in 0..dim {
                for j in 0..dim {
                    let mut num = binom.c(n, j) * binom.c(n - j, n - i);
                    if (i + j) % 2 == 1 {
                        num = -num;
                    }
                    out.push(BigRational::new(num, big_pow(2, n - j)));
                }
            }
        }
        TransformKind::TTildePrime | TransformKind::TTildePrimeInv => {
            let lat = tpd_to_apd_lattice(n, &binom);
            let den = big_pow(2, n);
            for i in 0..dim {
                for j in 0..dim {
                    if kind == TransformKind::TTildePrimeInv {
                        out.push(BigRational::new(lat[i][j].clone(), binom.c(n, i)));
                    } else {
                        let mut num = binom.c(n, j) * &lat[i][j];
                        if (i + j) % 2 == 1 {
                            num = -num;
                        }
                        out.push(BigRational::new(num, den.clone()));
                    }
                }
            }
        }
    }
    out
}

impl TransformMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn precision(&self) -> Precision {
        match self.data {
            MatrixData::Exact(_) => Precision::Exact,
            MatrixData::Float(_) => Precision::Float64,
        }
    }

    fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        match &self.data {
            MatrixData::Exact(e) => rat_to_f64(&e[i * self.dim() + j]),
            MatrixData::Float(e) => e[i * self.dim() + j],
        }
    }

    pub fn entry_exact(&self, i: usize, j: usize) -> Result<BigRational> {
        match &self.data {
            MatrixData::Exact(e) => Ok(e[i * self.dim() + j].clone()),
            MatrixData::Float(e) => BigRational::from_float(e[i * self.dim() + j])
                .ok_or_else(|| Error::Precision("non-finite matrix entry".into())),
        }
    }

    pub fn rows_exact(&self) -> Result<Vec<Vec<BigRational>>> {
        let dim = self.dim();
        (0..dim)
            .map(|i| (0..dim).map(|j| self.entry_exact(i, j)).collect())
            .collect()
    }

    pub fn rows_f64(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        (0..dim)
            .map(|i| (0..dim).map(|j| self.entry_f64(i, j)).collect())
            .collect()
    }

    /// Largest singular value (induced 2-norm), computed by power iteration
    /// on AᵀA to relative tolerance 1e-10.
    pub fn operator_norm(&self) -> Result<f64> {
        let dim = self.dim();
        let rows = self.rows_f64();
        for r in &rows {
            if r.iter().any(|x| !x.is_finite()) {
                return Err(Error::Precision(
                    "operator norm requires a float-representable matrix".into(),
                ));
            }
        }
        // v <- A^T (A v), repeatedly; sigma^2 is the Rayleigh quotient.
        let mut v: Vec<f64> = (0..dim)
            .map(|j| 1.0 + ((j.wrapping_mul(2654435761)) % 97) as f64 / 97.0)
            .collect();
        normalize(&mut v);
        let mut sigma2 = 0.0f64;
        let max_iter = 20_000;
        for _ in 0..max_iter {
            let av: Vec<f64> = rows
                .iter()
                .map(|row| row.iter().zip(&v).map(|(a, x)| a * x).sum())
                .collect();
            let mut atav = vec![0.0; dim];
            for (i, row) in rows.iter().enumerate() {
                let w = av[i];
                for (j, a) in row.iter().enumerate() {
                    atav[j] += a * w;
                }
            }
            let new_sigma2: f64 = v.iter().zip(&atav).map(|(x, y)| x * y).sum();
            let norm = normalize(&mut atav);
            if norm == 0.0 {
                return Ok(0.0);
            }
            v = atav;
            if (new_sigma2 - sigma2).abs() <= 1e-10 * new_sigma2.abs() {
                return Ok(new_sigma2.max(0.0).sqrt());
            }
            sigma2 = new_sigma2;
        }
        Err(Error::Numeric(format!(
            "operator norm power iteration did not converge in {max_iter} iterations"
        )))
    }

    /// CSV export: one row per line, shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let dim = self.dim();
        let mut s = String::new();
        for i in 0..dim {
            for j in 0..dim {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{}", self.entry_f64(i, j)));
            }
            s.push('\n');
        }
        s
    }
}

/// Compensated dot product (FMA two-product plus Neumaier summation). The
/// ill-conditioned transforms mix terms of widely different magnitude, and a
/// naive dot product loses several digits at n ≈ 20 already.
pub(crate) fn accurate_dot(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let add = |t: f64, sum: &mut f64, comp: &mut f64| {
        let fresh = *sum + t;
        if sum.abs() >= t.abs() {
            *comp += (*sum - fresh) + t;
        } else {
            *comp += (t - fresh) + *sum;
        }
        *sum = fresh;
    };
    for (a, x) in pairs {
        let p = a * x;
        let err = a.mul_add(x, -p);
        add(p, &mut sum, &mut comp);
        add(err, &mut sum, &mut comp);
    }
    sum + comp
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Apply a transform to an enumerator vector.
///
/// The vector kind must be the matrix's source kind or its dual; the result
/// carries the corresponding target kind. The antidiagonal and diagonal maps
/// use O(n) special-cased paths. The result is exact iff both operands are.
pub fn apply_transform(matrix: &TransformMatrix, vec: &EnumeratorVector) -> Result<EnumeratorVector> {
    if matrix.n != vec.n {
        return Err(Error::contract(format!(
            "transform for n={} applied to vector with n={}",
            matrix.n, vec.n
        )));
    }
    let (source, target) = matrix.kind.kind_map();
    let out_kind = if vec.kind == source {
        target
    } else if vec.kind == source.dual() {
        target.dual()
    } else {
        return Err(Error::contract(format!(
            "{} maps {source} vectors (or their duals); got {}",
            matrix.kind.name(),
            vec.kind
        )));
    };

    let n = matrix.n;
    match matrix.kind {
        TransformKind::MPrime => {
            // Antidiagonal: reverse the vector.
            let values = match &vec.values {
                Values::Exact(v) => Values::Exact(v.iter().rev().cloned().collect()),
                Values::Float(v) => Values::Float(v.iter().rev().cloned().collect()),
            };
            return Ok(EnumeratorVector {
                n,
                kind: out_kind,
                values,
            });
        }
        TransformKind::MTilde => {
            // Diagonal with entries (−1)^(n+i).
            let values = match &vec.values {
                Values::Exact(v) => Values::Exact(
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| if (n + i) % 2 == 0 { x.clone() } else { -x.clone() })
                        .collect(),
                ),
                Values::Float(v) => Values::Float(
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| if (n + i) % 2 == 0 { *x } else { -x })
                        .collect(),
                ),
            };
            return Ok(EnumeratorVector {
                n,
                kind: out_kind,
                values,
            });
        }
        _ => {}
    }

    let dim = n + 1;
    match (&matrix.data, &vec.values) {
        (MatrixData::Exact(m), Values::Exact(v)) => {
            let out: Vec<BigRational> = (0..dim)
                .map(|i| {
                    let mut acc = BigRational::zero();
                    for j in 0..dim {
                        let e = &m[i * dim + j];
                        if !e.is_zero() {
                            acc += e * &v[j];
                        }
                    }
                    acc
                })
                .collect();
            EnumeratorVector::exact(n, out_kind, out)
        }
        _ => {
            let v = vec.to_f64();
            let out: Vec<f64> = (0..dim)
                .map(|i| accurate_dot((0..dim).map(|j| (matrix.entry_f64(i, j), v[j]))))
                .collect();
            EnumeratorVector::float(n, out_kind, out)
        }
    }
}

/// Exact dense matrix product, parallelized over output rows.
pub fn multiply_exact(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner > 0 { b[0].len() } else { 0 };
    (0..rows)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![BigRational::zero(); cols];
            for k in 0..inner {
                let aik = &a[i][k];
                if aik.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    let bkj = &b[k][j];
                    if !bkj.is_zero() {
                        *cell += aik * bkj;
                    }
                }
            }
            row
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    kind: TransformKind,
    precision: Precision,
    rows: Vec<Vec<serde_json::Value>>,
}

impl Serialize for TransformMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| match &self.data {
                        MatrixData::Exact(e) => {
                            serde_json::Value::String(e[i * dim + j].to_string())
                        }
                        MatrixData::Float(e) => serde_json::json!(e[i * dim + j]),
                    })
                    .collect()
            })
            .collect();
        MatrixRepr {
            n: self.n,
            kind: self.kind,
            precision: self.precision(),
            rows,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TransformMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let dim = repr.n + 1;
        if repr.rows.len() != dim || repr.rows.iter().any(|r| r.len() != dim) {
            return Err(D::Error::custom("matrix rows have the wrong shape"));
        }
        let data = match repr.precision {
            Precision::Exact => {
                let mut out = Vec::with_capacity(dim * dim);
                for row in &repr.rows {
                    for v in row {
                        let s = v
                            .as_str()
                            .ok_or_else(|| D::Error::custom("exact entries must be strings"))?;
                        out.push(
                            BigRational::from_str(s)
                                .map_err(|e| D::Error::custom(format!("bad rational: {e}")))?,
                        );
                    }
                }
                MatrixData::Exact(out)
            }
            Precision::Float64 => {
                let mut out = Vec::with_capacity(dim * dim);
                for row in &repr.rows {
                    for v in row {
                        out.push(
                            v.as_f64()
                                .ok_or_else(|| D::Error::custom("float entries must be numbers"))?,
                        );
                    }
                }
                MatrixData::Float(out)
            }
        };
        Ok(TransformMatrix {
            n: repr.n,
            kind: repr.kind,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn macwilliams_n1_exact() {
        // Direct evaluation of the defining sum for all four entries.
        let m = build_transform(TransformKind::M, 1, Precision::Exact).unwrap();
        assert_eq!(m.entry_exact(0, 0).unwrap(), rat(1, 2));
        assert_eq!(m.entry_exact(0, 1).unwrap(), rat(1, 2));
        assert_eq!(m.entry_exact(1, 0).unwrap(), rat(3, 2));
        assert_eq!(m.entry_exact(1, 1).unwrap(), rat(-1, 2));
    }

    #[test]
    fn antidiagonal_n5() {
        let m = build_transform(TransformKind::MPrime, 5, Precision::Exact).unwrap();
        for i in 0..=5 {
            for j in 0..=5 {
                let expect = if i == 5 - j { 1.0 } else { 0.0 };
                assert_eq!(m.entry_f64(i, j), expect);
            }
        }
    }

    #[test]
    fn sld_to_tpd_n2() {
        // Odd columns of M negated.
        let t = build_transform(TransformKind::TTilde, 2, Precision::Exact).unwrap();
        let expect = [
            [rat(1, 4), rat(-1, 4), rat(1, 4)],
            [rat(3, 2), rat(-1, 2), rat(-1, 2)],
            [rat(9, 4), rat(3, 4), rat(1, 4)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.entry_exact(i, j).unwrap(), expect[i][j]);
            }
        }
    }

    #[test]
    fn apd_examples_from_bell_pair() {
        // T'·(1/4, 1/2, 1/4) = (1, 1, 1) and T'·(1/4, 0, 3/4) = (1, 1/2, 1).
        let t = build_transform(TransformKind::TPrime, 2, Precision::Exact).unwrap();
        let product = EnumeratorVector::exact(
            2,
            VectorKind::Sld,
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
        )
        .unwrap();
        let apd = apply_transform(&t, &product).unwrap();
        assert_eq!(apd.kind, VectorKind::Apd);
        assert_eq!(apd.to_exact().unwrap(), vec![rat(1, 1), rat(1, 1), rat(1, 1)]);

        let bell =
            EnumeratorVector::exact(2, VectorKind::Sld, vec![rat(1, 4), rat(0, 1), rat(3, 4)])
                .unwrap();
        let apd = apply_transform(&t, &bell).unwrap();
        assert_eq!(apd.to_exact().unwrap(), vec![rat(1, 1), rat(1, 2), rat(1, 1)]);
    }

    #[test]
    fn maximally_mixed_tpd_n2() {
        // T̃·(1/4, 0, 0) = (1/16, 6/16, 9/16).
        let t = build_transform(TransformKind::TTilde, 2, Precision::Exact).unwrap();
        let mixed =
            EnumeratorVector::exact(2, VectorKind::Sld, vec![rat(1, 4), rat(0, 1), rat(0, 1)])
                .unwrap();
        let tpd = apply_transform(&t, &mixed).unwrap();
        assert_eq!(tpd.kind, VectorKind::Tpd);
        assert_eq!(
            tpd.to_exact().unwrap(),
            vec![rat(1, 16), rat(6, 16), rat(9, 16)]
        );
    }

    #[test]
    fn kind_checks() {
        let t = build_transform(TransformKind::TPrime, 2, Precision::Exact).unwrap();
        let wrong =
            EnumeratorVector::float(2, VectorKind::Tpd, vec![0.0, 0.0, 1.0]).unwrap();
        assert!(apply_transform(&t, &wrong).is_err());

        // Dual source is accepted and mapped onto the dual target.
        let dual =
            EnumeratorVector::float(2, VectorKind::DualSld, vec![0.25, 0.5, 0.25]).unwrap();
        let out = apply_transform(&t, &dual).unwrap();
        assert_eq!(out.kind, VectorKind::DualApd);
    }

    #[test]
    fn between_lookup() {
        assert_eq!(
            TransformKind::between(VectorKind::Sld, VectorKind::Apd),
            Some(TransformKind::TPrime)
        );
        assert_eq!(
            TransformKind::between(VectorKind::DualSld, VectorKind::Sld),
            Some(TransformKind::M)
        );
        assert_eq!(TransformKind::between(VectorKind::Sld, VectorKind::DualApd), None);
    }

    #[test]
    fn float_limit_enforced() {
        let err = build_transform(TransformKind::M, FLOAT_N_LIMIT + 1, Precision::Float64);
        assert!(matches!(err, Err(Error::Precision(_))));
    }

    #[test]
    fn norm_of_sign_maps_is_one() {
        for kind in [TransformKind::MPrime, TransformKind::MTilde] {
            for n in [1usize, 5, 17] {
                let m = build_transform(kind, n, Precision::Float64).unwrap();
                assert_eq!(m.operator_norm().unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn round_trip_tpd_random() {
        // T̃⁻¹ (T̃ a) = a to 1e−12 in float mode for normalized non-negative a.
        let n = 20;
        let fwd = build_transform(TransformKind::TTilde, n, Precision::Float64).unwrap();
        let bwd = build_transform(TransformKind::TTildeInv, n, Precision::Float64).unwrap();
        let mut state = 0x12345678u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64 / 2.0) / 2.0
        };
        for _ in 0..10 {
            let mut a: Vec<f64> = (0..=n).map(|_| next()).collect();
            let s: f64 = a.iter().sum();
            a.iter_mut().for_each(|x| *x /= s);
            let vec = EnumeratorVector::float(n, VectorKind::Sld, a.clone()).unwrap();
            let there = apply_transform(&fwd, &vec).unwrap();
            let back = apply_transform(&bwd, &there).unwrap();
            for (x, y) in a.iter().zip(back.to_f64()) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn json_matrix_round_trip() {
        let m = build_transform(TransformKind::TPrimeInv, 3, Precision::Exact).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: TransformMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn big_ratio_to_f64() {
        let r = BigRational::new(big_pow(3, 400), big_pow(2, 400));
        let expect = 400.0 * (1.5f64).ln();
        assert!((rat_to_f64(&r).ln() - expect).abs() < 1e-9);
        assert!(BigRational::from_f64(0.1).is_some());
    }
}
