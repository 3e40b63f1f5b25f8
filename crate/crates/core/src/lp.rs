//! Exact rational linear programming: dense two-phase simplex with Bland's
//! rule, so it always terminates and never rounds.

use crate::exact::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// A linear program `max objective·x` over the given constraints. Variables
/// are nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct Lp {
    nvars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl Lp {
    pub fn new(nvars: usize) -> Lp {
        Lp { nvars, free: vec![false; nvars], constraints: Vec::new() }
    }

    /// All variables unrestricted in sign.
    pub fn new_free(nvars: usize) -> Lp {
        Lp { nvars, free: vec![true; nvars], constraints: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_free(&mut self, var: usize, free: bool) {
        self.free[var] = free;
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        assert_eq!(coeffs.len(), self.nvars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn add_int(&mut self, coeffs: &[i64], rel: Rel, rhs: Rat) {
        self.add(coeffs.iter().map(|&c| Rat::from_int(c)).collect(), rel, rhs);
    }

    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        match self.maximize(&vec![Rat::zero(); self.nvars]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn minimize(&self, objective: &[Rat]) -> LpOutcome {
        let neg: Vec<Rat> = objective.iter().map(|c| -c).collect();
        match self.maximize(&neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            o => o,
        }
    }

    pub fn maximize(&self, objective: &[Rat]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars);
        // column layout: for each original var, one column (plus a second,
        // negated one when free), then slacks, then artificials
        let mut col_of = Vec::with_capacity(self.nvars);
        let mut ncols = 0usize;
        for &f in &self.free {
            col_of.push((ncols, f));
            ncols += if f { 2 } else { 1 };
        }
        let nstruct = ncols;
        let m = self.constraints.len();
        let nslack = self.constraints.iter().filter(|c| c.rel != Rel::Eq).count();
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rat> = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        let mut slack_col = nstruct;
        let mut basis = vec![usize::MAX; m];
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); nstruct + nslack];
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (col, f) = col_of[v];
                row[col] = a.clone();
                if f {
                    row[col + 1] = -a;
                }
            }
            let mut b = c.rhs.clone();
            let mut rel = c.rel;
            if rel != Rel::Eq {
                row[slack_col] = if rel == Rel::Le { Rat::one() } else { -Rat::one() };
            }
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                b = -b;
                rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
            }
            if c.rel != Rel::Eq {
                if rel == Rel::Le {
                    basis[i] = slack_col;
                }
                slack_col += 1;
            }
            needs_art.push(basis[i] == usize::MAX);
            rows.push(row);
            rhs.push(b);
        }
        let nart = needs_art.iter().filter(|&&x| x).count();
        let total = nstruct + nslack + nart;
        let mut t = Tableau { rows: Vec::with_capacity(m), basis, ncols: total };
        let mut art = nstruct + nslack;
        for (i, mut row) in rows.into_iter().enumerate() {
            row.resize(total, Rat::zero());
            if needs_art[i] {
                row[art] = Rat::one();
                t.basis[i] = art;
                art += 1;
            }
            row.push(rhs[i].clone());
            t.rows.push(row);
        }
        let first_art = nstruct + nslack;

        // phase 1: minimize the sum of artificials
        if nart > 0 {
            let mut cost = vec![Rat::zero(); total];
            for c in cost.iter_mut().skip(first_art) {
                *c = Rat::one();
            }
            let mut obj = t.reduced_costs(&cost);
            let ok = t.run(&mut obj, total);
            debug_assert!(ok, "phase 1 cannot be unbounded");
            if obj[total].is_negative() {
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis
            let mut i = 0;
            while i < t.rows.len() {
                if t.basis[i] >= first_art {
                    match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                        Some(j) => {
                            t.pivot(i, j, None);
                            i += 1;
                        }
                        None => {
                            t.rows.remove(i);
                            t.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        // phase 2
        let mut cost = vec![Rat::zero(); total];
        for (v, c) in objective.iter().enumerate() {
            let (col, f) = col_of[v];
            cost[col] = -c;
            if f {
                cost[col + 1] = c.clone();
            }
        }
        let mut obj = t.reduced_costs(&cost);
        if !t.run(&mut obj, first_art) {
            return LpOutcome::Unbounded;
        }
        let mut colval = vec![Rat::zero(); total];
        for (i, &b) in t.basis.iter().enumerate() {
            colval[b] = t.rows[i][total].clone();
        }
        let x: Vec<Rat> = col_of
            .iter()
            .map(|&(col, f)| if f { &colval[col] - &colval[col + 1] } else { colval[col].clone() })
            .collect();
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    // Reduced costs for minimizing `cost`; the last entry is minus the
    // current objective value.
    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut obj: Vec<Rat> = cost.to_vec();
        obj.push(Rat::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, r) in obj.iter_mut().zip(&self.rows[i]) {
                if !r.is_zero() {
                    *o -= &(cb * r);
                }
            }
        }
        obj
    }

    fn pivot(&mut self, r: usize, c: usize, obj: Option<&mut Vec<Rat>>) {
        let p = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &p;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        if let Some(obj) = obj {
            if !obj[c].is_zero() {
                let f = obj[c].clone();
                for (x, y) in obj.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    // Bland's rule over columns `< limit`. Returns false when unbounded.
    fn run(&mut self, obj: &mut Vec<Rat>, limit: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, Some(obj));
        }
    }
}
