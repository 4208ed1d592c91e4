//! Exact rational linear programming.
//!
//! A dense bounded primal simplex over [`Rational`]. Every constraint row gets
//! an activity variable `s_i = a_i · x` whose bounds encode the row sense, so
//! the tableau always holds `B⁻¹ [A | −I]` and the initial basis is the
//! activities. Adding a row keeps the current basis (the new activity enters
//! it), which the lazy-constraint loop uses as a warm start.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> Self {
        Row { coeffs, sense, rhs }
    }

    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let a = self.activity(x);
        match self.sense {
            Sense::Ge => a >= self.rhs,
            Sense::Le => a <= self.rhs,
            Sense::Eq => a == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.activity(x) == self.rhs
    }
}

/// Minimization LP with finite lower bounds and optional upper bounds.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LpInstance {
    pub objective: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
    pub rows: Vec<Row>,
}

impl LpInstance {
    /// `n` variables with zero cost and bounds `[0, upper]`.
    pub fn new(n: usize, upper: Option<Rational>) -> Self {
        LpInstance {
            objective: vec![Rational::zero(); n],
            lower: vec![Rational::zero(); n],
            upper: vec![upper; n],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(domain("bound vectors do not match the objective length"));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if let Some((j, _)) = r.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(domain(format!("row {i} references undeclared variable {j}")));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Every row and bound holds at `x`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
            && self.rows.iter().all(|r| r.is_satisfied(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Constraints held at equality by a basic solution; exactly one per variable.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VertexCertificate {
    pub bounds: Vec<(usize, BoundSide)>,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicOptimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub certificate: VertexCertificate,
    pub pivots: usize,
}

/// Largest number of pivots a single solve may take.
pub const PIVOT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Simplex {
    nvar: usize,
    cost: Vec<Rational>,
    lo: Vec<Option<Rational>>,
    hi: Vec<Option<Rational>>,
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    status: Vec<Status>,
    xb: Vec<Rational>,
    pivots: usize,
}

fn row_bounds(r: &Row) -> (Option<Rational>, Option<Rational>) {
    match r.sense {
        Sense::Ge => (Some(r.rhs.clone()), None),
        Sense::Le => (None, Some(r.rhs.clone())),
        Sense::Eq => (Some(r.rhs.clone()), Some(r.rhs.clone())),
    }
}

impl Simplex {
    fn new(lp: &LpInstance) -> Result<Self> {
        lp.validate()?;
        let nvar = lp.num_vars();
        let mut s = Simplex {
            nvar,
            cost: lp.objective.clone(),
            lo: lp.lower.iter().cloned().map(Some).collect(),
            hi: lp.upper.clone(),
            t: Vec::new(),
            basis: Vec::new(),
            status: vec![Status::AtLower; nvar],
            xb: Vec::new(),
            pivots: 0,
        };
        for j in 0..nvar {
            if let Some(u) = &s.hi[j] {
                if *u < lp.lower[j] {
                    return Err(Error::Infeasible(format!("variable {j} has lower bound above upper")));
                }
            }
        }
        for r in &lp.rows {
            s.add_row(r);
        }
        s.refresh();
        Ok(s)
    }

    fn ncols(&self) -> usize {
        self.cost.len()
    }

    fn value(&self, j: usize) -> Rational {
        match self.status[j] {
            Status::Basic(i) => self.xb[i].clone(),
            Status::AtLower => self.lo[j].clone().expect("finite lower"),
            Status::AtUpper => self.hi[j].clone().expect("finite upper"),
        }
    }

    fn nonbasic_value(&self, j: usize) -> Rational {
        match self.status[j] {
            Status::AtLower => self.lo[j].clone().expect("finite lower"),
            Status::AtUpper => self.hi[j].clone().expect("finite upper"),
            Status::Basic(_) => unreachable!(),
        }
    }

    fn add_row(&mut self, r: &Row) {
        let col = self.ncols();
        for row in &mut self.t {
            row.push(Rational::zero());
        }
        let (lo, hi) = row_bounds(r);
        self.cost.push(Rational::zero());
        self.lo.push(lo);
        self.hi.push(hi);
        let mut new = vec![Rational::zero(); col + 1];
        for (j, a) in &r.coeffs {
            new[*j] -= a;
        }
        new[col] = Rational::one();
        for j in 0..self.nvar {
            if new[j].is_zero() {
                continue;
            }
            if let Status::Basic(i) = self.status[j] {
                let f = new[j].clone();
                for (k, tk) in self.t[i].iter().enumerate() {
                    if !tk.is_zero() {
                        new[k] -= &f * tk;
                    }
                }
            }
        }
        let i = self.t.len();
        self.t.push(new);
        self.basis.push(col);
        self.status.push(Status::Basic(i));
        self.xb.push(Rational::zero());
    }

    /// Recomputes basic values from the nonbasic ones.
    fn refresh(&mut self) {
        let nb: Vec<(usize, Rational)> = (0..self.ncols())
            .filter(|&j| !matches!(self.status[j], Status::Basic(_)))
            .map(|j| (j, self.nonbasic_value(j)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        for (i, row) in self.t.iter().enumerate() {
            let mut v = Rational::zero();
            for (j, x) in &nb {
                if !row[*j].is_zero() {
                    v -= &row[*j] * x;
                }
            }
            self.xb[i] = v;
        }
    }

    /// Phase-one gradient per basic row: −1 below its lower bound, +1 above
    /// its upper, 0 when feasible.
    fn infeasibility(&self) -> Vec<i8> {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if self.lo[b].as_ref().is_some_and(|l| self.xb[i] < *l) {
                    -1
                } else if self.hi[b].as_ref().is_some_and(|u| self.xb[i] > *u) {
                    1
                } else {
                    0
                }
            })
            .collect()
    }

    fn reduced_costs(&self, phase_one: Option<&[i8]>) -> Vec<Option<Rational>> {
        let n = self.ncols();
        let mut d: Vec<Option<Rational>> = (0..n)
            .map(|j| match self.status[j] {
                Status::Basic(_) => None,
                _ => Some(if phase_one.is_some() { Rational::zero() } else { self.cost[j].clone() }),
            })
            .collect();
        for (i, row) in self.t.iter().enumerate() {
            let cb = match phase_one {
                Some(g) => Rational::from(g[i] as i64),
                None => self.cost[self.basis[i]].clone(),
            };
            if cb.is_zero() {
                continue;
            }
            for (j, tij) in row.iter().enumerate() {
                if tij.is_zero() {
                    continue;
                }
                if let Some(dj) = d[j].as_mut() {
                    *dj -= &cb * tij;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, leaving_side: Status) {
        let piv = self.t[r][j].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &piv;
            }
        }
        let nz: Vec<usize> = (0..self.ncols()).filter(|&k| !self.t[r][k].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        self.t[r] = pivot_row;
        let leaving = self.basis[r];
        self.status[leaving] = leaving_side;
        self.basis[r] = j;
        self.status[j] = Status::Basic(r);
        self.pivots += 1;
    }

    fn run(&mut self) -> Result<()> {
        let mut bland = false;
        loop {
            if self.pivots > PIVOT_LIMIT {
                return Err(Error::IterationCap {
                    cap: PIVOT_LIMIT,
                    detail: "simplex pivots".into(),
                });
            }
            let g = self.infeasibility();
            let phase_one = g.iter().any(|&x| x != 0);
            let d = self.reduced_costs(phase_one.then_some(&g[..]));

            // Entering variable and direction.
            let mut enter: Option<(usize, i8)> = None;
            let mut best = Rational::zero();
            for (j, dj) in d.iter().enumerate() {
                let Some(dj) = dj else { continue };
                let fixed = self.lo[j].is_some() && self.lo[j] == self.hi[j];
                if fixed {
                    continue;
                }
                let dir = match self.status[j] {
                    Status::AtLower if dj.is_negative() => 1,
                    Status::AtUpper if dj.is_positive() => -1,
                    _ => continue,
                };
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                let mag = dj.abs();
                if mag > best {
                    best = mag;
                    enter = Some((j, dir));
                }
            }
            let Some((j, dir)) = enter else {
                if phase_one {
                    return Err(Error::Infeasible("LP has no feasible point".into()));
                }
                return Ok(());
            };

            // Ratio test. Infeasible basics may only move up to the bound
            // they violate.
            let mut limit: Option<(Rational, Option<(usize, Status)>)> = None;
            if let (Some(l), Some(u)) = (&self.lo[j], &self.hi[j]) {
                limit = Some((u - l, None));
            }
            for i in 0..self.t.len() {
                let tij = &self.t[i][j];
                if tij.is_zero() {
                    continue;
                }
                let alpha = if dir > 0 { -tij } else { tij.clone() };
                let b = self.basis[i];
                let (lo, hi, lo_side, hi_side) = match g[i] {
                    -1 => (None, self.lo[b].as_ref(), Status::AtLower, Status::AtLower),
                    1 => (self.hi[b].as_ref(), None, Status::AtUpper, Status::AtUpper),
                    _ => (self.lo[b].as_ref(), self.hi[b].as_ref(), Status::AtLower, Status::AtUpper),
                };
                let cand = if alpha.is_positive() {
                    hi.map(|h| ((h - &self.xb[i]) / &alpha, hi_side))
                } else {
                    lo.map(|l| ((&self.xb[i] - l) / -&alpha, lo_side))
                };
                let Some((step, side)) = cand else { continue };
                let better = match &limit {
                    None => true,
                    Some((cur, who)) => {
                        step < *cur
                            || (step == *cur
                                && who.is_some_and(|(r, _)| b < self.basis[r]))
                    }
                };
                if better {
                    limit = Some((step, Some((i, side))));
                }
            }
            let Some((step, who)) = limit else {
                if phase_one {
                    return Err(Error::Domain("phase one found no blocking variable".into()));
                }
                return Err(Error::Unbounded);
            };
            bland = step.is_zero();
            match who {
                None => {
                    self.status[j] = match self.status[j] {
                        Status::AtLower => Status::AtUpper,
                        _ => Status::AtLower,
                    };
                    self.pivots += 1;
                }
                Some((r, side)) => self.pivot(r, j, side),
            }
            self.refresh();
        }
    }

    fn optimum(&self) -> BasicOptimum {
        let point: Vec<Rational> = (0..self.nvar).map(|j| self.value(j)).collect();
        let value = self.cost[..self.nvar].iter().zip(&point).map(|(c, x)| c * x).sum();
        let mut cert = VertexCertificate::default();
        for j in 0..self.ncols() {
            let side = match self.status[j] {
                Status::Basic(_) => continue,
                Status::AtLower => BoundSide::Lower,
                Status::AtUpper => BoundSide::Upper,
            };
            if j < self.nvar {
                cert.bounds.push((j, side));
            } else {
                cert.rows.push(j - self.nvar);
            }
        }
        BasicOptimum {
            value,
            point,
            certificate: cert,
            pivots: self.pivots,
        }
    }
}

/// Optimal basic solution of `lp`, or `Infeasible` / `Unbounded`.
pub fn solve(lp: &LpInstance) -> Result<BasicOptimum> {
    let mut s = Simplex::new(lp)?;
    s.run()?;
    Ok(s.optimum())
}

/// Answer of a separation callback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Feasible,
    Violated(Row),
}

/// Cutting-plane loop: solve, ask `oracle` for a violated row, add it, and
/// re-solve from the current basis until the oracle accepts the point.
/// Added rows are appended to `lp.rows`.
pub fn solve_lazy<F>(lp: &mut LpInstance, mut oracle: F, max_rows: usize) -> Result<BasicOptimum>
where
    F: FnMut(&[Rational]) -> Result<OracleVerdict>,
{
    let mut s = Simplex::new(lp)?;
    let mut added = 0usize;
    loop {
        s.run()?;
        let opt = s.optimum();
        match oracle(&opt.point)? {
            OracleVerdict::Feasible => return Ok(opt),
            OracleVerdict::Violated(row) => {
                lp.validate_row(&row)?;
                if row.is_satisfied(&opt.point) {
                    return Err(domain("separation oracle returned a satisfied row"));
                }
                added += 1;
                if added > max_rows {
                    return Err(Error::IterationCap {
                        cap: max_rows,
                        detail: format!(
                            "lazy rows; relaxation has {} rows, value {}",
                            lp.rows.len(),
                            opt.value
                        ),
                    });
                }
                s.add_row(&row);
                s.refresh();
                lp.rows.push(row);
            }
        }
    }
}

impl LpInstance {
    fn validate_row(&self, r: &Row) -> Result<()> {
        match r.coeffs.iter().find(|(j, _)| *j >= self.num_vars()) {
            Some((j, _)) => Err(domain(format!("oracle row references undeclared variable {j}"))),
            None => Ok(()),
        }
    }

    /// Constraints tight at `x` as dense rows: rows at equality, then bounds.
    pub fn tight_system(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let n = self.num_vars();
        let mut out = Vec::new();
        for r in &self.rows {
            if r.is_tight(x) {
                let mut v = vec![Rational::zero(); n];
                for (j, a) in &r.coeffs {
                    v[*j] += a;
                }
                out.push(v);
            }
        }
        for j in 0..n {
            let at_bound = x[j] == self.lower[j] || self.upper[j].as_ref() == Some(&x[j]);
            if at_bound {
                let mut v = vec![Rational::zero(); n];
                v[j] = Rational::one();
                out.push(v);
            }
        }
        out
    }
}
