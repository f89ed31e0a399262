//! Small dense linear algebra for embedding dimensions up to a handful.
//!
//! Everything here works on plain `&[f64]` slices; the state spaces in this
//! crate live in 2–4 affine coordinates and never justify a matrix library.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Convex combination `sum_i weights[i] * points[i]`.
pub fn mix(points: &[&[f64]], weights: &[f64]) -> Vec<f64> {
    assert_eq!(points.len(), weights.len());
    let dim = points[0].len();
    let mut out = vec![0.0; dim];
    for (p, &w) in points.iter().zip(weights) {
        for (o, &x) in out.iter_mut().zip(p.iter()) {
            *o += w * x;
        }
    }
    out
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular to working precision.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), n);

    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for col in row + 1..n {
            acc -= m[row][col] * x[col];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Least-squares solution of the (possibly overdetermined) system `a x = b`
/// via the normal equations; returns the solution together with the residual
/// norm `|a x - b|`. `None` when the normal matrix is singular.
pub fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let rows = a.len();
    assert_eq!(b.len(), rows);
    let cols = a[0].len();

    let mut ata = vec![vec![0.0; cols]; cols];
    let mut atb = vec![0.0; cols];
    for r in 0..rows {
        for i in 0..cols {
            atb[i] += a[r][i] * b[r];
            for j in 0..cols {
                ata[i][j] += a[r][i] * a[r][j];
            }
        }
    }

    let x = solve(&ata, &atb)?;
    let mut res_sq = 0.0;
    for r in 0..rows {
        let pred = dot(&a[r], &x);
        res_sq += (pred - b[r]) * (pred - b[r]);
    }
    Some((x, res_sq.sqrt()))
}

/// Slope of the least-squares line through `(x_i, y_i)`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solve_2x2() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[5.0, 10.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn solve_singular_is_none() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&a, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn least_squares_exact_system_has_zero_residual() {
        // weights (0.25, 0.75) mixing (1,1) and (-1,-1), plus the sum row
        let a = vec![
            vec![1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
        ];
        let b = [-0.5, -0.5, 1.0];
        let (x, res) = least_squares(&a, &b).unwrap();
        assert_abs_diff_eq!(x[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 0.75, epsilon = 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn fit_slope_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 0.5, 0.0, -0.5];
        assert_abs_diff_eq!(fit_slope(&xs, &ys).unwrap(), -0.5, epsilon = 1e-12);
    }
}
