//! Small dense linear programming via two-phase simplex with Bland's rule.
//!
//! All variables are free; internally each is split into a difference of two
//! nonnegative variables and inequality rows receive a slack. Bland's rule
//! (smallest eligible index enters, smallest basic label leaves on ties)
//! guarantees termination on degenerate problems. Feasibility tolerance is
//! [`crate::num::EPS_LP`].

use nalgebra::DVector;

use crate::num::EPS_LP;

/// Outcome of an LP solve over free variables.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { point: DVector<f64>, value: f64 },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

/// minimize c.z  subject to  a.z <= b (ineqs) and a.z = b (eqs), z free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    num_vars: usize,
    ineqs: Vec<(DVector<f64>, f64)>,
    eqs: Vec<(DVector<f64>, f64)>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem { num_vars, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn leq(&mut self, a: DVector<f64>, b: f64) -> &mut Self {
        assert_eq!(a.len(), self.num_vars);
        self.ineqs.push((a, b));
        self
    }

    pub fn eq(&mut self, a: DVector<f64>, b: f64) -> &mut Self {
        assert_eq!(a.len(), self.num_vars);
        self.eqs.push((a, b));
        self
    }

    /// Feasibility check: minimizes the zero objective.
    pub fn feasible(&self) -> bool {
        self.minimize(&DVector::zeros(self.num_vars)).is_optimal()
    }

    pub fn minimize(&self, c: &DVector<f64>) -> LpOutcome {
        assert_eq!(c.len(), self.num_vars);
        Tableau::build(self, c).solve()
    }
}

struct Tableau {
    rows: usize,
    /// structural columns: 2*n split vars + one slack per inequality
    cols: usize,
    n: usize,
    /// rows x (cols + rows artificials + rhs)
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cost: Vec<f64>,
}

impl Tableau {
    fn build(p: &LpProblem, c: &DVector<f64>) -> Self {
        let n = p.num_vars;
        let m_ineq = p.ineqs.len();
        let rows = m_ineq + p.eqs.len();
        let cols = 2 * n + m_ineq;
        let width = cols + rows + 1;
        let mut t = vec![vec![0.0; width]; rows];

        let fill = |row: &mut Vec<f64>, a: &DVector<f64>, b: f64| {
            for j in 0..n {
                row[j] = a[j];
                row[n + j] = -a[j];
            }
            row[width - 1] = b;
        };
        for (i, (a, b)) in p.ineqs.iter().enumerate() {
            fill(&mut t[i], a, *b);
            t[i][2 * n + i] = 1.0;
        }
        for (i, (a, b)) in p.eqs.iter().enumerate() {
            fill(&mut t[m_ineq + i], a, *b);
        }

        // scale rows so the largest structural coefficient has magnitude 1,
        // then flip signs to make every rhs nonnegative
        for row in t.iter_mut() {
            let scale = row[..cols].iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            if scale > 1.0 {
                for v in row.iter_mut() {
                    *v /= scale;
                }
            }
            if row[width - 1] < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
        }
        // artificial basis
        let mut basis = Vec::with_capacity(rows);
        for (i, row) in t.iter_mut().enumerate() {
            row[cols + i] = 1.0;
            basis.push(cols + i);
        }

        let mut cost = vec![0.0; cols];
        for j in 0..n {
            cost[j] = c[j];
            cost[n + j] = -c[j];
        }

        Tableau { rows, cols, n, t, basis, cost }
    }

    fn solve(mut self) -> LpOutcome {
        let width = self.cols + self.rows + 1;

        // phase 1: minimize the sum of artificials
        let mut obj = vec![0.0; width];
        for i in 0..self.rows {
            for j in 0..width {
                obj[j] -= self.t[i][j];
            }
        }
        for i in 0..self.rows {
            obj[self.cols + i] = 0.0;
        }
        if !self.pivot_loop(&mut obj, self.cols + self.rows) {
            // phase 1 of a bounded-below objective cannot be unbounded
            return LpOutcome::Infeasible;
        }
        if -obj[width - 1] > 1e-7 {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis
        for i in 0..self.rows {
            if self.basis[i] >= self.cols {
                let col = (0..self.cols).find(|&j| self.t[i][j].abs() > EPS_LP);
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant row; blank it
                        for v in self.t[i].iter_mut() {
                            *v = 0.0;
                        }
                    }
                }
            }
        }

        // phase 2 objective expressed over the current basis
        let mut obj = vec![0.0; width];
        obj[..self.cols].copy_from_slice(&self.cost);
        for i in 0..self.rows {
            let b = self.basis[i];
            if b < self.cols && obj[b].abs() > 0.0 {
                let f = obj[b];
                for j in 0..width {
                    obj[j] -= f * self.t[i][j];
                }
            }
        }
        for i in 0..self.rows {
            obj[self.cols + i] = f64::INFINITY; // artificials never re-enter
        }
        if !self.pivot_loop(&mut obj, self.cols) {
            return LpOutcome::Unbounded;
        }

        let mut point = DVector::zeros(self.n);
        for i in 0..self.rows {
            let b = self.basis[i];
            let v = self.t[i][width - 1];
            if b < self.n {
                point[b] += v;
            } else if b < 2 * self.n {
                point[b - self.n] -= v;
            }
        }
        LpOutcome::Optimal { point, value: -obj[width - 1] }
    }

    /// Bland pivoting until optimal; false means unbounded.
    fn pivot_loop(&mut self, obj: &mut [f64], active_cols: usize) -> bool {
        let width = self.cols + self.rows + 1;
        loop {
            let entering = (0..active_cols).find(|&j| obj[j] < -EPS_LP);
            let e = match entering {
                Some(e) => e,
                None => return true,
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.t[i][e];
                if a > EPS_LP {
                    let ratio = self.t[i][width - 1] / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - EPS_LP
                                || (ratio < lr + EPS_LP && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (li, _) = match leave {
                Some(l) => l,
                None => return false,
            };
            self.pivot(li, e);
            let f = obj[e];
            if f.abs() > 0.0 {
                for j in 0..width {
                    obj[j] -= f * self.t[li][j];
                }
                obj[e] = 0.0;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.cols + self.rows + 1;
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        for i in 0..self.rows {
            if i != row {
                let f = self.t[i][col];
                if f.abs() > 0.0 {
                    for j in 0..width {
                        let d = self.t[row][j] * f;
                        self.t[i][j] -= d;
                    }
                    self.t[i][col] = 0.0;
                }
            }
        }
        self.basis[row] = col;
    }
}
