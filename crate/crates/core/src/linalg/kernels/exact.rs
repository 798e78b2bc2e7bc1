//! Exact kernels over the Gaussian rationals.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{PsdReport, RankEvidence, RankReport};
use crate::linalg::Matrix;
use crate::scalar::{rational_to_f64, GaussRational};

type GaussInt = Complex<BigInt>;

/// Clears denominators row by row. Returns the integral rows and the product
/// of the row multipliers.
fn integerize(rows: &[Vec<GaussRational>]) -> (Vec<Vec<GaussInt>>, BigInt) {
    let mut scale = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
            scale *= &l;
            let lq = BigRational::from_integer(l);
            row.iter()
                .map(|z| Complex::new((&z.re * &lq).to_integer(), (&z.im * &lq).to_integer()))
                .collect()
        })
        .collect();
    (out, scale)
}

fn div_exact(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let norm = &b.re * &b.re + &b.im * &b.im;
    let num = a * b.conj();
    debug_assert!((&num.re % &norm).is_zero() && (&num.im % &norm).is_zero());
    Complex::new(num.re / &norm, num.im / norm)
}

/// Fraction-free (Bareiss) elimination over `Z[i]`. Returns the rank and, for
/// square input, the determinant.
fn bareiss(mut a: Vec<Vec<GaussInt>>) -> (usize, Option<GaussInt>) {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = GaussInt::one();
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                let t = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = div_exact(&t, &prev);
            }
            row[c] = GaussInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = (m == cols).then(|| {
        if r < m {
            GaussInt::zero()
        } else if negate {
            -prev
        } else {
            prev
        }
    });
    (r, det)
}

pub fn rank(rows: &[Vec<GaussRational>]) -> RankReport {
    let (ints, scale) = integerize(rows);
    let (rank, det) = bareiss(ints);
    let determinant = det.map(|d| {
        let s = BigRational::from_integer(scale);
        Complex::new(
            BigRational::from_integer(d.re) / &s,
            BigRational::from_integer(d.im) / s,
        )
    });
    RankReport {
        rank,
        evidence: RankEvidence::Exact { determinant },
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref(rows: &[Vec<GaussRational>]) -> (Vec<Vec<GaussRational>>, Vec<usize>) {
    let mut a: Vec<Vec<GaussRational>> = rows.to_vec();
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = GaussRational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn row_space(rows: &[Vec<GaussRational>]) -> Vec<Vec<GaussRational>> {
    rref(rows).0
}

pub fn null_space(rows: &[Vec<GaussRational>], width: usize) -> Vec<Vec<GaussRational>> {
    let (r, pivots) = rref(rows);
    let mut is_pivot = vec![false; width];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..width)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut y = vec![GaussRational::zero(); width];
            y[f] = GaussRational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                y[p] = -row[f].clone();
            }
            y
        })
        .collect()
}

/// Exact positive-semidefiniteness by LDL* elimination with diagonal pivoting.
///
/// A positive diagonal pivot is eliminated by a Schur complement; once no
/// positive diagonal entry remains, the matrix is PSD iff what is left is zero.
pub fn psd(m: &Matrix<GaussRational>) -> PsdReport {
    let hermitian = *m == m.adjoint();
    if !hermitian {
        return PsdReport {
            hermitian,
            psd: false,
            min_eigenvalue: None,
            violation: m.hermitian_residual(),
        };
    }
    let n = m.n();
    let mut a: Vec<Vec<GaussRational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        let pos = active.iter().position(|&k| a[k][k].re.is_positive());
        let Some(pos) = pos else {
            if let Some(&k) = active.iter().find(|&&k| a[k][k].re.is_negative()) {
                return PsdReport {
                    hermitian,
                    psd: false,
                    min_eigenvalue: None,
                    violation: -rational_to_f64(&a[k][k].re),
                };
            }
            let offending = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .map(|(i, j)| &a[i][j])
                .find(|z| !z.is_zero());
            return PsdReport {
                hermitian,
                psd: offending.is_none(),
                min_eigenvalue: None,
                violation: offending.map_or(0.0, |z| rational_to_f64(&z.norm_sqr())).sqrt(),
            };
        };
        let k = active.swap_remove(pos);
        let pivot = a[k][k].re.clone();
        for &i in &active {
            if a[i][k].is_zero() {
                continue;
            }
            let f = Complex::new(&a[i][k].re / &pivot, &a[i][k].im / &pivot);
            for &j in &active {
                let t = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss_ratio, Scalar};

    fn q(p: i64) -> GaussRational {
        GaussRational::from_ratio(p, 1)
    }

    #[test]
    fn determinant_of_small_matrix() {
        // [[1, 2], [3, 4]] has determinant -2; the 1/2 row scaling halves it
        let rows = vec![vec![gauss_ratio(1, 2, 0, 1), q(1)], vec![q(3), q(4)]];
        let r = rank(&rows);
        assert_eq!(r.rank, 2);
        let RankEvidence::Exact { determinant: Some(d) } = r.evidence else {
            panic!("square input must carry a determinant")
        };
        assert_eq!(d, q(-1));
    }

    #[test]
    fn complex_determinant() {
        // det [[i, 1], [1, i]] = -1 - 1 = -2
        let i = GaussRational::imag_unit();
        let rows = vec![vec![i.clone(), q(1)], vec![q(1), i]];
        let RankEvidence::Exact { determinant: Some(d) } = rank(&rows).evidence else {
            panic!()
        };
        assert_eq!(d, q(-2));
    }

    #[test]
    fn rank_skips_zero_columns() {
        let rows = vec![vec![q(0), q(1), q(2)], vec![q(0), q(2), q(4)], vec![q(0), q(0), q(1)]];
        assert_eq!(rank(&rows).rank, 2);
    }

    #[test]
    fn null_space_is_annihilated() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(7)]];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(q(0), |acc, (a, b)| acc + a.clone() * b.clone());
            assert_eq!(dot, q(0));
        }
    }

    #[test]
    fn psd_detects_zero_diagonal_with_nonzero_offdiagonal() {
        // [[0, 1], [1, 0]] has leading minors 0 and -1 hidden behind a zero pivot
        let m = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert!(!psd(&m).psd);
        let m = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(1)]]).unwrap();
        assert!(psd(&m).psd);
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(1)]]).unwrap();
        let r = psd(&m);
        assert!(!r.psd && r.violation > 0.0);
    }
}
