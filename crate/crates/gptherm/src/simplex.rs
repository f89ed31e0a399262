//! Phase-1 simplex feasibility solver.
//!
//! The crate needs two kinds of linear feasibility answers: convex-hull
//! membership (nonnegative weights summing to one that reproduce a point) and
//! existence of valid effects subject to linear constraints. Both reduce to
//! "find x >= 0 with A x = b". Problem sizes are tiny (tens of rows and
//! columns), so a dense tableau with Bland's rule is plenty.

const PIVOT_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-7;

/// Finds `x >= 0` with `a x = b`, or `None` when infeasible.
///
/// Runs phase 1 of the two-phase simplex method: artificial variables are
/// added for every row and their sum is driven to zero. Bland's rule keeps
/// the pivoting cycle-free.
pub fn nonneg_solution(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    if m == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    assert!(a.iter().all(|row| row.len() == n));

    // Tableau columns: n structural, m artificial, 1 rhs.
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    // Objective: minimize the sum of artificials. With artificials basic the
    // reduced-cost row is minus the sum of the constraint rows.
    for j in 0..width {
        let col_sum: f64 = (0..m).map(|i| t[i][j]).sum();
        t[m][j] = -col_sum;
    }
    for i in 0..m {
        t[m][n + i] = 0.0;
    }

    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering column = lowest index with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            break;
        };
        // Ratio test, ties broken by lowest basis index (Bland again).
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                if ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded phase-1 objective cannot happen (bounded below by 0),
            // but bail out defensively rather than loop.
            return None;
        };

        let pivot = t[leave][enter];
        for j in 0..width {
            t[leave][j] /= pivot;
        }
        for i in 0..=m {
            if i != leave {
                let factor = t[i][enter];
                if factor != 0.0 {
                    for j in 0..width {
                        t[i][j] -= factor * t[leave][j];
                    }
                }
            }
        }
        basis[leave] = enter;
    }

    // Feasible iff all artificials were driven (numerically) to zero.
    let objective = -t[m][width - 1];
    if objective.abs() > FEAS_EPS {
        return None;
    }
    for (i, &var) in basis.iter().enumerate() {
        if var >= n && t[i][width - 1].abs() > FEAS_EPS {
            return None;
        }
    }

    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[i][width - 1].max(0.0);
        }
    }
    Some(x)
}

/// Feasibility problem over free (sign-unrestricted) variables with equality
/// and inequality rows. Internally the free variables are split into positive
/// and negative parts and inequalities get slack columns.
#[derive(Default)]
pub struct LinearFeasibility {
    n_free: usize,
    eq: Vec<(Vec<f64>, f64)>,
    ge: Vec<(Vec<f64>, f64)>,
    le: Vec<(Vec<f64>, f64)>,
}

impl LinearFeasibility {
    pub fn new(n_free: usize) -> Self {
        Self {
            n_free,
            ..Self::default()
        }
    }

    pub fn eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_free);
        self.eq.push((coeffs, rhs));
    }

    pub fn ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_free);
        self.ge.push((coeffs, rhs));
    }

    pub fn le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_free);
        self.le.push((coeffs, rhs));
    }

    /// Returns values for the free variables when the system is feasible.
    pub fn solve(&self) -> Option<Vec<f64>> {
        let n = self.n_free;
        let n_slack = self.ge.len() + self.le.len();
        let cols = 2 * n + n_slack;
        let mut a = Vec::new();
        let mut b = Vec::new();

        let mut slack = 2 * n;
        let mut push = |coeffs: &[f64], rhs: f64, slack_sign: f64, slack_col: Option<usize>| {
            let mut row = vec![0.0; cols];
            for (j, &c) in coeffs.iter().enumerate() {
                row[j] = c;
                row[n + j] = -c;
            }
            if let Some(sc) = slack_col {
                row[sc] = slack_sign;
            }
            a.push(row);
            b.push(rhs);
        };

        for (coeffs, rhs) in &self.eq {
            push(coeffs, *rhs, 0.0, None);
        }
        for (coeffs, rhs) in &self.ge {
            push(coeffs, *rhs, -1.0, Some(slack));
            slack += 1;
        }
        for (coeffs, rhs) in &self.le {
            push(coeffs, *rhs, 1.0, Some(slack));
            slack += 1;
        }

        let x = nonneg_solution(&a, &b)?;
        Some((0..n).map(|j| x[j] - x[n + j]).collect())
    }
}
