//! Exact integer/rational building blocks: binomial tables, the two integer
//! lattices behind the transform matrices, and float conversion helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Table of binomial coefficients C(m, k) for 0 ≤ k ≤ m ≤ n.
#[derive(Debug, Clone)]
pub struct Binomials {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl Binomials {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut row = vec![BigInt::one(); m + 1];
            for k in 1..m {
                row[k] = &rows[m - 1][k - 1] + &rows[m - 1][k];
            }
            rows.push(row);
        }
        Self { n, rows }
    }

    /// C(m, k); zero outside the Pascal triangle.
    pub fn c(&self, m: usize, k: usize) -> BigInt {
        if k > m || m > self.n {
            BigInt::zero()
        } else {
            self.rows[m][k].clone()
        }
    }

    pub fn c_ref(&self, m: usize, k: usize) -> Option<&BigInt> {
        if k > m || m > self.n {
            None
        } else {
            Some(&self.rows[m][k])
        }
    }

    pub fn c_f64(&self, m: usize, k: usize) -> f64 {
        self.c_ref(m, k).map_or(0.0, |b| big_to_f64(b))
    }
}

/// Integer lattice `L[i][j] = 2^n · M_{i,j}` for the weight-distribution
/// MacWilliams matrix, filled by the O(n²) recurrence: the first row is all
/// ones, the last column holds (−1)^i C(n,i), and interior entries satisfy
/// `L[i][j] = 3·L[i−1][j+1] + L[i−1][j] + L[i][j+1]`.
pub fn macwilliams_lattice(n: usize, binom: &Binomials) -> Vec<Vec<BigInt>> {
    let mut lat = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for j in 0..=n {
        lat[0][j] = BigInt::one();
    }
    for i in 1..=n {
        let mut last = binom.c(n, i);
        if i % 2 == 1 {
            last = -last;
        }
        lat[i][n] = last;
        for j in (0..n).rev() {
            let (above_rows, row) = lat.split_at_mut(i);
            let prev = &above_rows[i - 1];
            row[0][j] = 3 * &prev[j + 1] + &prev[j] + &row[0][j + 1];
        }
    }
    lat
}

/// Integer lattice `K[i][j] = C(n,i) · T̃'^{-1}_{i,j}` for the map from
/// triplet probabilities to averaged purities. First row all ones, first
/// column (−1)^i C(n,i), and each interior entry is the sum of its three
/// upper-left neighbors.
pub fn tpd_to_apd_lattice(n: usize, binom: &Binomials) -> Vec<Vec<BigInt>> {
    let mut lat = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for j in 0..=n {
        lat[0][j] = BigInt::one();
    }
    for i in 1..=n {
        let mut first = binom.c(n, i);
        if i % 2 == 1 {
            first = -first;
        }
        lat[i][0] = first;
        for j in 1..=n {
            let (above_rows, row) = lat.split_at_mut(i);
            let prev = &above_rows[i - 1];
            row[0][j] = &prev[j - 1] + &prev[j] + &row[0][j - 1];
        }
    }
    lat
}

pub fn big_pow(base: u32, exp: usize) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Lossy BigInt → f64. Values beyond the double range map to ±inf.
pub fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(if b.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = big_to_f64(r.numer());
        let d = big_to_f64(r.denom());
        n / d
    })
}

/// Exact f64 → rational conversion (every finite double is p/2^k).
pub fn f64_to_rat(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row_sums() {
        let b = Binomials::new(12);
        for m in 0..=12usize {
            let sum: BigInt = (0..=m).map(|k| b.c(m, k)).sum();
            assert_eq!(sum, big_pow(2, m));
        }
        assert_eq!(b.c(7, 3), BigInt::from(35));
        assert_eq!(b.c(3, 7), BigInt::zero());
    }

    #[test]
    fn macwilliams_lattice_matches_definition() {
        // 2^n M_{i,j} = Σ_l C(n−j, i−l) C(j, l) (−1)^l 3^{i−l}
        for n in 1..=9usize {
            let binom = Binomials::new(n);
            let lat = macwilliams_lattice(n, &binom);
            for i in 0..=n {
                for j in 0..=n {
                    let mut expect = BigInt::zero();
                    for l in 0..=i {
                        let term = binom.c(n - j, i - l) * binom.c(j, l) * big_pow(3, i - l);
                        if l % 2 == 0 {
                            expect += term;
                        } else {
                            expect -= term;
                        }
                    }
                    assert_eq!(lat[i][j], expect, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn tpd_to_apd_lattice_matches_definition() {
        // C(n,i) T̃'^{-1}_{i,j} = Σ_l C(n−j, i−l) C(j, l) (−1)^{i−l}
        for n in 1..=9usize {
            let binom = Binomials::new(n);
            let lat = tpd_to_apd_lattice(n, &binom);
            for i in 0..=n {
                for j in 0..=n {
                    let mut expect = BigInt::zero();
                    for l in 0..=i {
                        let term = binom.c(n - j, i - l) * binom.c(j, l);
                        if (i - l) % 2 == 0 {
                            expect += term;
                        } else {
                            expect -= term;
                        }
                    }
                    assert_eq!(lat[i][j], expect, "n={n} i={i} j={j}");
                }
            }
        }
    }
}
