//! Exact rank and incremental independence tests over the rationals.

use crate::rational::Rational;

/// Span of the rows inserted so far, kept in semi-echelon form.
#[derive(Debug, Clone)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, row: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(row.len(), self.dim);
        let mut v = row.to_vec();
        for (p, b) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (vi, bi) in v.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *vi -= &f * bi;
                }
            }
        }
        v
    }

    /// Whether `row` lies in the current span.
    pub fn contains(&self, row: &[Rational]) -> bool {
        self.reduce(row).iter().all(Rational::is_zero)
    }

    /// Adds `row` if it is independent of the span; returns whether it was.
    pub fn insert(&mut self, row: &[Rational]) -> bool {
        let mut v = self.reduce(row);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push((p, v));
        true
    }
}

pub fn rank(rows: &[Vec<Rational>], dim: usize) -> usize {
    let mut space = RowSpace::new(dim);
    for r in rows {
        space.insert(r);
    }
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn detects_dependence() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&r(&[1, 1, 0])));
        assert!(s.insert(&r(&[0, 1, 1])));
        assert!(!s.insert(&r(&[1, 2, 1])));
        assert!(s.contains(&r(&[2, 1, -1])));
        assert!(s.insert(&r(&[0, 0, 5])));
        assert_eq!(s.rank(), 3);
        assert!(!s.insert(&r(&[0, 0, 0])));
    }

    #[test]
    fn rank_of_cycle_incidence() {
        // Unsigned incidence of a bipartite graph loses one rank.
        let rows = vec![r(&[1, 0, 0, 1]), r(&[1, 1, 0, 0]), r(&[0, 1, 1, 0]), r(&[0, 0, 1, 1])];
        assert_eq!(rank(&rows, 4), 3);
    }
}
