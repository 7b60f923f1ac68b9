//! Dense two-phase primal simplex used for the feasibility and polishing
//! subproblems. Deterministic: Dantzig pricing with lowest-index tie breaks,
//! switching to Bland's rule if the objective stalls.

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

/// min c.x  s.t.  A x = b, x >= 0.  Rows of `a` must have length `c.len()`.
pub(crate) struct StandardLp {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub(crate) struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals y with reduced costs c_j - y.A_j >= 0 at optimality.
    pub duals: Vec<f64>,
}

struct Tableau {
    /// m x (n + m + 1): structural | artificial | rhs
    t: Vec<Vec<f64>>,
    z: Vec<f64>,
    basis: Vec<usize>,
    m: usize,
    n: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.n + self.m]
    }

    fn rebuild_z(&mut self, cost: &[f64]) {
        let w = self.n + self.m + 1;
        self.z = vec![0.0; w];
        for j in 0..w {
            let mut v = if j < cost.len() { cost[j] } else { 0.0 };
            for r in 0..self.m {
                let cb = if self.basis[r] < cost.len() {
                    cost[self.basis[r]]
                } else {
                    0.0
                };
                v -= cb * self.t[r][j];
            }
            self.z[j] = v;
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.n + self.m + 1;
        let p = self.t[r][e];
        for j in 0..w {
            self.t[r][j] /= p;
        }
        for i in 0..self.m {
            if i != r {
                let f = self.t[i][e];
                if f != 0.0 {
                    for j in 0..w {
                        self.t[i][j] -= f * self.t[r][j];
                    }
                }
            }
        }
        let f = self.z[e];
        if f != 0.0 {
            for j in 0..w {
                self.z[j] -= f * self.t[r][j];
            }
        }
        self.basis[r] = e;
    }

    /// Runs the simplex on the current z-row. `allow` limits entering columns.
    fn run(&mut self, cap: usize, allow_artificial: bool) -> LpStatus {
        let limit = self.n + if allow_artificial { self.m } else { 0 };
        let mut bland = false;
        let mut stall = 0usize;
        let mut last_obj = f64::INFINITY;
        for _ in 0..cap {
            let mut enter = None;
            if bland {
                for j in 0..limit {
                    if self.z[j] < -COST_TOL {
                        enter = Some(j);
                        break;
                    }
                }
            } else {
                let mut best = -COST_TOL;
                for j in 0..limit {
                    if self.z[j] < best {
                        best = self.z[j];
                        enter = Some(j);
                    }
                }
            }
            let e = match enter {
                Some(e) => e,
                None => return LpStatus::Optimal,
            };
            let mut leave = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..self.m {
                let a = self.t[r][e];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    if ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.map_or(true, |l: usize| self.basis[r] < self.basis[l]))
                    {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
            let r = match leave {
                Some(r) => r,
                None => return LpStatus::Unbounded,
            };
            self.pivot(r, e);
            let obj = -self.z[self.n + self.m];
            if (last_obj - obj).abs() <= 1e-15 * (1.0 + obj.abs()) {
                stall += 1;
                if stall > 200 {
                    bland = true;
                }
            } else {
                stall = 0;
            }
            last_obj = obj;
        }
        LpStatus::IterLimit
    }
}

pub(crate) fn solve_standard(lp: &StandardLp, cap: usize) -> LpSolution {
    let m = lp.b.len();
    let n = lp.c.len();
    let mut t = vec![vec![0.0; n + m + 1]; m];
    for (r, row) in lp.a.iter().enumerate() {
        debug_assert_eq!(row.len(), n);
        let flip = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[r][j] = flip * v;
        }
        t[r][n + r] = 1.0;
        t[r][n + m] = flip * lp.b[r];
    }
    let mut tab = Tableau {
        t,
        z: Vec::new(),
        basis: (n..n + m).collect(),
        m,
        n,
    };

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![0.0; n + m];
    for j in n..n + m {
        phase1_cost[j] = 1.0;
    }
    tab.rebuild_z(&phase1_cost);
    let st = tab.run(cap, true);
    let art_sum = -tab.z[tab.n + tab.m];
    if st == LpStatus::IterLimit {
        return LpSolution {
            status: LpStatus::IterLimit,
            x: vec![0.0; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
        };
    }
    if art_sum > 1e-7 {
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
        };
    }
    // Pivot lingering artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(e) = (0..n).find(|&j| tab.t[r][j].abs() > 1e-8) {
                tab.pivot(r, e);
            }
        }
    }

    // Phase 2.
    tab.rebuild_z(&lp.c);
    let st = tab.run(cap, false);
    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r);
        }
    }
    // Reduced cost of artificial i is -y_i (its phase-2 cost is zero).
    let duals: Vec<f64> = (0..m).map(|i| -tab.z[n + i]).collect();
    let objective = lp.c.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpSolution {
        status: st,
        x,
        objective,
        duals,
    }
}
