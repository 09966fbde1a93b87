use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Exact determinant by fraction-exact Gaussian elimination.
pub fn determinant_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn determinant_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_determinants() {
        let m = vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 3), rat(5, 1)]];
        assert_eq!(determinant_rational(&m), rat(-1, 6));
        assert_eq!(determinant_rational(&[]), rat(1, 1));
        let f = vec![vec![0.0, 0.5], vec![1.0 / 3.0, 5.0]];
        assert!((determinant_f64(&f) + 1.0 / 6.0).abs() < 1e-15);
        let singular = vec![vec![rat(1, 2), rat(1, 4)], vec![rat(1, 1), rat(1, 2)]];
        assert_eq!(determinant_rational(&singular), rat(0, 1));
    }
}
