//! Exact Gaussian elimination over an ordered field.

use crate::scalar::Scalar;

/// Rows kept in reduced echelon form, grown one row at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon<S> {
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &[S]) -> Vec<S> {
        let mut row = row.to_vec();
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (entry, b) in row.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *entry = entry.clone() - factor.clone() * b.clone();
                }
            }
        }
        row
    }

    /// True when `row` lies in the span of the rows inserted so far.
    pub fn spans(&self, row: &[S]) -> bool {
        self.reduce(row).iter().all(|v| v.is_zero())
    }

    /// Adds `row` if it is independent of the current rows; reports whether
    /// the rank grew.
    pub fn insert(&mut self, row: &[S]) -> bool {
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let lead = row[p].clone();
        for entry in row.iter_mut() {
            *entry = entry.clone() / lead.clone();
        }
        for basis in self.rows.iter_mut() {
            if basis[p].is_zero() {
                continue;
            }
            let factor = basis[p].clone();
            for (entry, r) in basis.iter_mut().zip(&row) {
                *entry = entry.clone() - factor.clone() * r.clone();
            }
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut echelon = Echelon::new();
    for row in rows {
        echelon.insert(row);
    }
    echelon.rank()
}

/// Solves the square system `a·x = b`; `None` when `a` is singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let lead = m[col][col].clone();
        for entry in m[col].iter_mut() {
            *entry = entry.clone() / lead.clone();
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row.iter_mut().zip(&pivot_row) {
                *entry = entry.clone() - factor.clone() * p.clone();
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(rank(&rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&rows(&[&[1, 2], &[0, 1], &[3, 3]])), 2);
        assert_eq!(rank::<Rational>(&rows(&[&[0, 0]])), 0);
    }

    #[test]
    fn solve_recovers_the_unique_solution() {
        let a = rows(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4.into(), 5.into()), Rational::new(7.into(), 5.into())]);
        assert!(solve(&rows(&[&[1, 1], &[2, 2]]), &[q(1), q(2)]).is_none());
    }

    #[test]
    fn echelon_reports_span() {
        let mut e = Echelon::new();
        assert!(e.insert(&[q(1), q(1), q(0)]));
        assert!(!e.insert(&[q(2), q(2), q(0)]));
        assert!(e.insert(&[q(0), q(1), q(1)]));
        assert!(e.spans(&[q(1), q(2), q(1)]));
        assert!(!e.spans(&[q(0), q(0), q(1)]));
    }
}
