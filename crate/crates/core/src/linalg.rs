//! Exact linear algebra over the integers and rationals.
//!
//! Rank uses fraction-free (Bareiss) elimination. Left systems `x · M = b`
//! are solved either over the rationals or over the integers; the integer
//! route keeps a unimodular companion matrix so that the left kernel comes
//! out as a genuine lattice basis, not just a rational spanning set.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::MatrixError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Rank over the rationals, computed with integer-only Bareiss elimination.
#[allow(clippy::needless_range_loop)]
pub fn row_rank<T: Scalar>(m: &Matrix<T>) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for i in rank + 1..rows {
            let lead = a[i][col].clone();
            for j in col + 1..cols {
                let v = pivot.clone() * a[i][j].clone() - lead.clone() * a[rank][j].clone();
                // exact by Sylvester's identity
                a[i][j] = v / prev.clone();
            }
            a[i][col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub(crate) fn rref<T: Scalar>(a: &mut [Vec<Ratio<T>>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..a[i].len() {
                    let v = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Some rational `x` with `x · m = b`, free coordinates set to zero, or
/// `None` when the system is inconsistent over the rationals.
pub fn rational_left_solve<T: Scalar>(
    m: &Matrix<T>,
    b: &[T],
) -> Result<Option<Vec<Ratio<T>>>, MatrixError> {
    if b.len() != m.cols() {
        return Err(MatrixError::Dimension {
            expected: m.cols(),
            found: b.len(),
        });
    }
    let n = m.rows();
    // x · M = b  <=>  Mᵀ xᵀ = bᵀ
    let mut aug: Vec<Vec<Ratio<T>>> = (0..m.cols())
        .map(|j| {
            let mut row: Vec<Ratio<T>> = (0..n)
                .map(|i| Ratio::from_integer(m.get(i, j).clone()))
                .collect();
            row.push(Ratio::from_integer(b[j].clone()));
            row
        })
        .collect();
    let pivots = rref(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Ratio::from_integer(T::zero()); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Ok(Some(x))
}

/// Integer row echelon form by extended-gcd row operations. Every operation
/// is unimodular and is mirrored on `companion` when given. Pivots are made
/// positive. Returns the pivot column of each nonzero leading row.
fn integer_echelon<T: Scalar>(
    a: &mut [Vec<T>],
    cols: usize,
    mut companion: Option<&mut [Vec<T>]>,
) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        if let Some(c) = companion.as_deref_mut() {
            c.swap(r, p);
        }
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let x0 = a[r][col].clone();
            let y0 = a[i][col].clone();
            let e = x0.extended_gcd(&y0);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (u, v) = (-(y0 / g.clone()), x0 / g);
            combine(a, r, i, &s, &t, &u, &v);
            if let Some(c) = companion.as_deref_mut() {
                combine(c, r, i, &s, &t, &u, &v);
            }
        }
        if a[r][col].is_negative() {
            negate(&mut a[r]);
            if let Some(c) = companion.as_deref_mut() {
                negate(&mut c[r]);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

// rows (r, i) <- (s·r + t·i, u·r + v·i) with s·v − t·u = 1
fn combine<T: Scalar>(a: &mut [Vec<T>], r: usize, i: usize, s: &T, t: &T, u: &T, v: &T) {
    for j in 0..a[r].len() {
        let (ar, ai) = (a[r][j].clone(), a[i][j].clone());
        a[r][j] = s.clone() * ar.clone() + t.clone() * ai.clone();
        a[i][j] = u.clone() * ar + v.clone() * ai;
    }
}

fn negate<T: Scalar>(row: &mut [T]) {
    for x in row.iter_mut() {
        *x = -x.clone();
    }
}

/// All integer solutions of `x · M = b`: `particular + Σ tᵢ·kernel[i]`,
/// `tᵢ ∈ ℤ`. The kernel rows form a basis of the left-kernel lattice and
/// are kept in row echelon form with positive pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolutions<T> {
    pub particular: Vec<T>,
    pub kernel: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> IntegerSolutions<T> {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    /// Pivot column of each kernel row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Every solution with all entries `>= 0` and entry sum `<= bound`,
    /// sorted by sum, then lexicographically.
    pub fn nonnegative_within(&self, bound: &T) -> Vec<Vec<T>> {
        let n = self.particular.len();
        let mut out = Vec::new();
        let first = self.pivots.first().copied().unwrap_or(n);
        let fixed = &self.particular[..first];
        if fixed.iter().any(|x| x.is_negative() || x > bound) {
            return out;
        }
        let partial: T = fixed.iter().cloned().fold(T::zero(), |a, b| a + b);
        if &partial > bound {
            return out;
        }
        self.descend(0, self.particular.clone(), partial, bound, &mut out);
        out.sort_by(|a, b| {
            let sa = a.iter().cloned().fold(T::zero(), |x, y| x + y);
            let sb = b.iter().cloned().fold(T::zero(), |x, y| x + y);
            sa.cmp(&sb).then_with(|| a.cmp(b))
        });
        out.dedup();
        out
    }

    // Level `level` chooses the coefficient of kernel row `level`; after that
    // choice, coordinates in [pivot(level), pivot(level + 1)) are final.
    fn descend(&self, level: usize, v: Vec<T>, partial: T, bound: &T, out: &mut Vec<Vec<T>>) {
        let n = v.len();
        if level == self.kernel.len() {
            out.push(v);
            return;
        }
        let row = &self.kernel[level];
        let c = self.pivots[level];
        let end = self.pivots.get(level + 1).copied().unwrap_or(n);
        let piv = row[c].clone();
        // 0 <= v[c] + t·piv <= bound
        let lo = (-v[c].clone()).div_ceil(&piv);
        let hi = (bound.clone() - v[c].clone()).div_floor(&piv);
        let mut t = lo;
        while t <= hi {
            let w: Vec<T> = v
                .iter()
                .zip(row)
                .map(|(a, b)| a.clone() + t.clone() * b.clone())
                .collect();
            let seg = &w[c..end];
            if seg.iter().all(|x| !x.is_negative() && x <= bound) {
                let s = seg.iter().cloned().fold(partial.clone(), |a, b| a + b);
                if &s <= bound {
                    self.descend(level + 1, w, s, bound, out);
                }
            }
            t = t + T::one();
        }
    }
}

/// Solve `x · m = b` over the integers. `None` means no integer solution.
pub fn integer_left_solutions<T: Scalar>(
    m: &Matrix<T>,
    b: &[T],
) -> Result<Option<IntegerSolutions<T>>, MatrixError> {
    if b.len() != m.cols() {
        return Err(MatrixError::Dimension {
            expected: m.cols(),
            found: b.len(),
        });
    }
    let n = m.rows();
    let mut h = m.to_rows();
    let mut u = Matrix::<T>::identity(n).to_rows();
    let pivots = integer_echelon(&mut h, m.cols(), Some(&mut u));
    let rank = pivots.len();

    // y · H = b, solved for the leading `rank` coordinates of y
    let mut y = vec![T::zero(); n];
    for (t, &c) in pivots.iter().enumerate() {
        let mut rhs = b[c].clone();
        for (i, yi) in y.iter().enumerate().take(t) {
            rhs = rhs - yi.clone() * h[i][c].clone();
        }
        let (q, rem) = rhs.div_rem(&h[t][c]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[t] = q;
    }
    let check = Matrix::from_rows(m.cols(), h)?.left_mul(&y)?;
    if check != b {
        return Ok(None);
    }
    let particular = Matrix::from_rows(n, u.clone())?.left_mul(&y)?;

    let mut kernel: Vec<Vec<T>> = u[rank..].to_vec();
    let kp = integer_echelon(&mut kernel, n, None);
    kernel.truncate(kp.len());
    Ok(Some(IntegerSolutions {
        particular,
        kernel,
        pivots: kp,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mat(cols: usize, rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(cols, rows).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(row_rank(&Matrix::<i64>::identity(3)), 3);
        assert_eq!(row_rank(&Matrix::<i64>::zeros(3, 4)), 0);
        assert_eq!(
            row_rank(&mat(3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]])),
            2
        );
        assert_eq!(row_rank(&Matrix::<i64>::zeros(0, 3)), 0);
    }

    #[test]
    fn rank_is_generic_over_bigint() {
        let m = Matrix::from_rows(
            2,
            vec![
                vec![BigInt::from(10).pow(30), BigInt::from(1)],
                vec![BigInt::from(10).pow(30) * 2, BigInt::from(2)],
            ],
        )
        .unwrap();
        assert_eq!(row_rank(&m), 1);
    }

    #[test]
    fn rational_solution_satisfies_system() {
        let m = mat(2, vec![vec![2, 0], vec![0, 3]]);
        let x = rational_left_solve(&m, &[1, 1]).unwrap().unwrap();
        assert_eq!(x, vec![Ratio::new(1, 2), Ratio::new(1, 3)]);
        let m = mat(2, vec![vec![1, 1], vec![2, 2]]);
        assert!(rational_left_solve(&m, &[1, 2]).unwrap().is_none());
    }

    #[test]
    fn integer_solver_detects_rational_only_systems() {
        let m = mat(1, vec![vec![2], vec![4]]);
        assert!(integer_left_solutions(&m, &[3]).unwrap().is_none());
        let s = integer_left_solutions(&m, &[6]).unwrap().unwrap();
        assert_eq!(s.dimension(), 1);
        let p = m.left_mul(&s.particular).unwrap();
        assert_eq!(p, vec![6]);
        assert_eq!(m.left_mul(&s.kernel[0]).unwrap(), vec![0]);
    }

    #[test]
    fn kernel_is_a_lattice_basis_not_a_sublattice() {
        // x·(2, 3)ᵀ = 0 has kernel generated by (3, -2); a rational basis
        // scaled carelessly would give (6, -4).
        let m = mat(1, vec![vec![2], vec![3]]);
        let s = integer_left_solutions(&m, &[0]).unwrap().unwrap();
        assert_eq!(s.kernel.len(), 1);
        let k = &s.kernel[0];
        assert_eq!(num_integer::gcd(k[0], k[1]), 1);
    }

    #[test]
    fn bounded_enumeration_matches_brute_force() {
        let m = mat(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = [2, 1];
        let s = integer_left_solutions(&m, &b).unwrap().unwrap();
        let got = s.nonnegative_within(&5);
        let mut want = Vec::new();
        for x in 0..=5i64 {
            for y in 0..=5 {
                for z in 0..=5 {
                    if x + y + z <= 5 && m.left_mul(&[x, y, z]).unwrap() == b {
                        want.push(vec![x, y, z]);
                    }
                }
            }
        }
        want.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
        assert_eq!(got, want);
    }
}
