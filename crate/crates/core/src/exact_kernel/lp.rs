use num_traits::{One, Signed, Zero};

use super::{KernelError, Rational};

/// Equalities `row·x = rhs` and strict inequalities `row·x > rhs`.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub strict_inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, ..Default::default() }
    }

    pub fn eq(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.equalities.push((row, rhs));
    }

    pub fn gt(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.strict_inequalities.push((row, rhs));
    }

    /// Exact check of a candidate point.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let dot = |r: &[Rational]| r.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>();
        x.len() == self.num_vars
            && self.equalities.iter().all(|(r, b)| &dot(r) == b)
            && self.strict_inequalities.iter().all(|(r, b)| &dot(r) > b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub feasible: bool,
    pub witness: Option<Vec<Rational>>,
    /// Optimal common slack; positive exactly when feasible.
    pub slack: Option<Rational>,
}

/// Maximizes t subject to `eq`, `row·x >= rhs + t`, `t <= 1` and tests t* > 0.
pub fn lp_feasible(sys: &LinearSystem) -> Result<LpOutcome, KernelError> {
    let n = sys.num_vars;
    if n == 0 {
        return Err(KernelError::DimensionMismatch { expected: 1, found: 0 });
    }
    for (row, _) in sys.equalities.iter().chain(&sys.strict_inequalities) {
        if row.len() != n {
            return Err(KernelError::DimensionMismatch { expected: n, found: row.len() });
        }
    }
    let ne = sys.equalities.len();
    let ns = sys.strict_inequalities.len();
    // columns: x+ (n), x- (n), t, surplus (ns), slack for t <= 1
    let width = 2 * n + 1 + ns + 1;
    let t_col = 2 * n;
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(ne + ns + 1);
    let mut b: Vec<Rational> = Vec::with_capacity(ne + ns + 1);
    let split = |row: &[Rational]| {
        let mut r = vec![Rational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = v.clone();
            r[n + j] = -v;
        }
        r
    };
    for (row, rhs) in &sys.equalities {
        a.push(split(row));
        b.push(rhs.clone());
    }
    for (k, (row, rhs)) in sys.strict_inequalities.iter().enumerate() {
        let mut r = split(row);
        r[t_col] = -Rational::one();
        r[2 * n + 1 + k] = -Rational::one();
        a.push(r);
        b.push(rhs.clone());
    }
    let mut cap = vec![Rational::zero(); width];
    cap[t_col] = Rational::one();
    cap[width - 1] = Rational::one();
    a.push(cap);
    b.push(Rational::one());

    let mut c = vec![Rational::zero(); width];
    c[t_col] = Rational::one();
    let Some((value, z)) = simplex_max(a, b, &c) else {
        return Ok(LpOutcome { feasible: false, witness: None, slack: None });
    };
    let x: Vec<Rational> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    if value.is_positive() {
        debug_assert!(sys.satisfied_by(&x));
        Ok(LpOutcome { feasible: true, witness: Some(x), slack: Some(value) })
    } else {
        Ok(LpOutcome { feasible: false, witness: None, slack: Some(value) })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, pv) in self.cost.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Bland's rule; returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let e = &self.rows[i][col];
                if e.is_positive() {
                    let ratio = &self.rhs[i] / e;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn reset_cost(&mut self, c: &[Rational]) {
        let w = self.cost.len();
        self.cost = (0..w).map(|j| c.get(j).cloned().unwrap_or_else(Rational::zero)).collect();
        self.value = Rational::zero();
        for i in 0..self.rows.len() {
            let cb = c.get(self.basis[i]).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for j in 0..w {
                let v = &cb * &self.rows[i][j];
                self.cost[j] -= v;
            }
            self.value += &cb * &self.rhs[i];
        }
    }
}

/// max c·z s.t. a z = b, z >= 0. `None` when infeasible. Assumes boundedness.
fn simplex_max(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, c: &[Rational]) -> Option<(Rational, Vec<Rational>)> {
    let m = a.len();
    let n = c.len();
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    let mut rows = a;
    for (i, r) in rows.iter_mut().enumerate() {
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
    }
    let mut tab = Tableau {
        rows,
        rhs: b,
        basis: (n..n + m).collect(),
        cost: vec![Rational::zero(); n + m],
        value: Rational::zero(),
    };
    let mut phase1 = vec![Rational::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = -Rational::one();
    }
    tab.reset_cost(&phase1);
    tab.optimize(n + m);
    if tab.value.is_negative() {
        return None;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for r in tab.rows.iter_mut() {
        r.truncate(n);
    }
    tab.cost.truncate(n);
    tab.reset_cost(c);
    if !tab.optimize(n) {
        return None;
    }
    let mut z = vec![Rational::zero(); n];
    for (i, &j) in tab.basis.iter().enumerate() {
        z[j] = tab.rhs[i].clone();
    }
    Some((tab.value.clone(), z))
}
