use num_traits::Zero;

use crate::exactnum::Rational;

/// Outcome of solving `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined { rank: usize, unknowns: usize },
}

impl LinearSolution {
    pub fn tag(&self) -> &'static str {
        match self {
            LinearSolution::Unique(_) => "UNIQUE",
            LinearSolution::Inconsistent => "INCONSISTENT",
            LinearSolution::Underdetermined { .. } => "UNDERDETERMINED",
        }
    }
}

/// Gauss-Jordan elimination over exact rationals for a possibly rectangular
/// system. Rows may outnumber unknowns; extra rows are consistency checks.
///
/// Inconsistency takes precedence over rank deficiency.
pub fn exact_linear_solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> LinearSolution {
    assert_eq!(matrix.len(), rhs.len(), "one right-hand side entry per row");
    let cols = matrix.first().map_or(0, Vec::len);
    assert!(matrix.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut rows: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::with_capacity(cols);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for x in rows[rank][col..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    if rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    if rank < cols {
        return LinearSolution::Underdetermined { rank, unknowns: cols };
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = rows[r][cols].clone();
    }
    LinearSolution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn identity_returns_rhs() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(exact_linear_solve(&a, &v(&[4, -5, 6])), LinearSolution::Unique(v(&[4, -5, 6])));
    }

    #[test]
    fn singular_consistent_is_underdetermined() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            exact_linear_solve(&a, &v(&[3, 6])),
            LinearSolution::Underdetermined { rank: 1, unknowns: 2 }
        );
    }

    #[test]
    fn singular_inconsistent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(exact_linear_solve(&a, &v(&[3, 7])), LinearSolution::Inconsistent);
    }

    #[test]
    fn overdetermined_consistent() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(
            exact_linear_solve(&a, &v(&[1, 0, 1])),
            LinearSolution::Unique(vec![rat(1, 2), rat(1, 2)])
        );
    }

    proptest! {
        #[test]
        fn recovers_planted_solution(
            entries in prop::collection::vec(-9i64..10, 16),
            sol in prop::collection::vec(-20i64..20, 4),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect();
            let x: Vec<Rational> = sol.iter().map(|&s| rat(s, 3)).collect();
            let b: Vec<Rational> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
            match exact_linear_solve(&a, &b) {
                LinearSolution::Unique(found) => prop_assert_eq!(found, x),
                LinearSolution::Underdetermined { rank, .. } => prop_assert!(rank < 4),
                LinearSolution::Inconsistent => prop_assert!(false, "planted system is consistent"),
            }
        }
    }
}
