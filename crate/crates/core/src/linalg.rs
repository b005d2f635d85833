//! Exact linear algebra over cyclotomic fields.
//!
//! Gauss-Jordan elimination with the first nonzero pivot in column order.
//! Every returned vector is re-substituted into the original system, so a
//! result that survives construction is exact by checking, not by trust.

use crate::cyclotomic::{CycError, CycNumber};

#[derive(Clone, Debug)]
pub struct LinearSystem {
    matrix: Vec<Vec<CycNumber>>,
    rhs: Vec<CycNumber>,
    cols: usize,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<CycNumber>>, rhs: Vec<CycNumber>) -> Result<Self, CycError> {
        if matrix.len() != rhs.len() {
            return Err(CycError::DimensionMismatch(format!(
                "{} rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        let cols = matrix.first().map(|r| r.len()).unwrap_or(0);
        if let Some(bad) = matrix.iter().position(|r| r.len() != cols) {
            return Err(CycError::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {cols}",
                matrix[bad].len()
            )));
        }
        Ok(LinearSystem { matrix, rhs, cols })
    }

    pub fn homogeneous(matrix: Vec<Vec<CycNumber>>) -> Result<Self, CycError> {
        let rhs = vec![CycNumber::zero(); matrix.len()];
        LinearSystem::new(matrix, rhs)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Affine solution set of a linear system: one particular solution when the
/// system is consistent, plus a basis of the homogeneous nullspace. Every
/// nullspace basis vector has a 1 in a distinct free column, which makes
/// linear independence structural.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub particular: Option<Vec<CycNumber>>,
    pub nullspace: Vec<Vec<CycNumber>>,
}

impl SolutionSpace {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    pub fn dimension(&self) -> usize {
        self.nullspace.len()
    }
}

pub fn solve_linear(sys: &LinearSystem) -> Result<SolutionSpace, CycError> {
    let rows = sys.rows();
    let cols = sys.cols();
    let mut a: Vec<Vec<CycNumber>> = sys
        .matrix
        .iter()
        .zip(sys.rhs.iter())
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, src);
        let inv = a[pivot_row][col].inv().expect("pivot is nonzero");
        for entry in a[pivot_row].iter_mut() {
            *entry = &*entry * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &a[pivot_row][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }

    let consistent = !(pivot_row..rows).any(|r| !a[r][cols].is_zero());

    let particular = if consistent {
        let mut x = vec![CycNumber::zero(); cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = a[r][cols].clone();
        }
        Some(x)
    } else {
        None
    };

    let mut nullspace = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![CycNumber::zero(); cols];
        v[free] = CycNumber::one();
        for (r, &c) in pivot_cols.iter().enumerate() {
            v[c] = -&a[r][free];
        }
        nullspace.push(v);
    }

    let space = SolutionSpace {
        particular,
        nullspace,
    };
    verify_solution_space(sys, &space);
    Ok(space)
}

/// Re-substitution check; a failure here is a solver bug, not bad input.
fn verify_solution_space(sys: &LinearSystem, space: &SolutionSpace) {
    let apply = |v: &[CycNumber]| -> Vec<CycNumber> {
        sys.matrix
            .iter()
            .map(|row| {
                let mut acc = CycNumber::zero();
                for (c, x) in row.iter().zip(v.iter()) {
                    if !c.is_zero() && !x.is_zero() {
                        acc = &acc + &(c * x);
                    }
                }
                acc
            })
            .collect()
    };
    if let Some(p) = &space.particular {
        let image = apply(p);
        assert!(
            image.iter().zip(sys.rhs.iter()).all(|(a, b)| a == b),
            "particular solution fails re-substitution"
        );
    }
    for v in &space.nullspace {
        assert!(
            apply(v).iter().all(|e| e.is_zero()),
            "nullspace vector fails re-substitution"
        );
    }
}

/// Rank of a matrix, by elimination.
pub fn rank(matrix: &[Vec<CycNumber>]) -> Result<usize, CycError> {
    if matrix.is_empty() {
        return Ok(0);
    }
    let sys = LinearSystem::homogeneous(matrix.to_vec())?;
    let space = solve_linear(&sys)?;
    Ok(sys.cols() - space.dimension())
}

/// Whether `v` is a linear combination of `basis` (vectors of equal length).
pub fn in_span(basis: &[Vec<CycNumber>], v: &[CycNumber]) -> Result<bool, CycError> {
    if basis.is_empty() {
        return Ok(v.iter().all(|e| e.is_zero()));
    }
    let n = v.len();
    if basis.iter().any(|b| b.len() != n) {
        return Err(CycError::DimensionMismatch(
            "span membership needs vectors of equal length".into(),
        ));
    }
    // columns are the basis vectors, unknowns are the combination weights
    let matrix: Vec<Vec<CycNumber>> = (0..n)
        .map(|r| basis.iter().map(|b| b[r].clone()).collect())
        .collect();
    let sys = LinearSystem::new(matrix, v.to_vec())?;
    Ok(solve_linear(&sys)?.is_consistent())
}

/// Span equality via mutual membership of the two generating sets.
pub fn spans_equal(a: &[Vec<CycNumber>], b: &[Vec<CycNumber>]) -> Result<bool, CycError> {
    for v in a {
        if !in_span(b, v)? {
            return Ok(false);
        }
    }
    for v in b {
        if !in_span(a, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(v: i64) -> CycNumber {
        CycNumber::from_integer(v)
    }

    fn row(vals: &[i64]) -> Vec<CycNumber> {
        vals.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let sys = LinearSystem::new(vec![row(&[1, 1]), row(&[1, -1])], vec![q(3), q(1)]).unwrap();
        let space = solve_linear(&sys).unwrap();
        assert_eq!(space.particular, Some(vec![q(2), q(1)]));
        assert!(space.nullspace.is_empty());
    }

    #[test]
    fn underdetermined_system_exposes_nullspace() {
        // x + y + z = 1 has a 2-dimensional nullspace
        let sys = LinearSystem::new(vec![row(&[1, 1, 1])], vec![q(1)]).unwrap();
        let space = solve_linear(&sys).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(space.is_consistent());
    }

    #[test]
    fn inconsistent_system_still_reports_nullspace() {
        let sys =
            LinearSystem::new(vec![row(&[1, 1]), row(&[2, 2])], vec![q(1), q(3)]).unwrap();
        let space = solve_linear(&sys).unwrap();
        assert!(space.particular.is_none());
        assert_eq!(space.dimension(), 1);
    }

    #[test]
    fn cyclotomic_coefficients_are_solved_exactly() {
        // (1+i) x = 2  =>  x = 1 - i
        let i = CycNumber::root_of_unity(1, 4).unwrap();
        let one_plus_i = &CycNumber::one() + &i;
        let sys = LinearSystem::new(vec![vec![one_plus_i]], vec![q(2)]).unwrap();
        let space = solve_linear(&sys).unwrap();
        let expected = &CycNumber::one() - &i;
        assert_eq!(space.particular, Some(vec![expected]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(LinearSystem::new(vec![row(&[1, 2]), row(&[1])], vec![q(0), q(0)]).is_err());
        assert!(LinearSystem::new(vec![row(&[1])], vec![]).is_err());
    }

    #[test]
    fn span_helpers() {
        let b = vec![row(&[1, 0, 1]), row(&[0, 1, 1])];
        assert!(in_span(&b, &row(&[2, 3, 5])).unwrap());
        assert!(!in_span(&b, &row(&[0, 0, 1])).unwrap());
        let b2 = vec![row(&[1, 1, 2]), row(&[1, -1, 0])];
        assert!(spans_equal(&b, &b2).unwrap());
        assert!(!spans_equal(&b, &[row(&[1, 0, 0])]).unwrap());
    }

    fn arb_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
                .prop_map(move |m| (m, c))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn rank_plus_nullity_equals_unknown_count((m, cols) in arb_matrix()) {
            let matrix: Vec<Vec<CycNumber>> =
                m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let rank = rank(&matrix).unwrap();
            let space = solve_linear(&LinearSystem::homogeneous(matrix).unwrap()).unwrap();
            prop_assert_eq!(rank + space.dimension(), cols);
        }

        #[test]
        fn random_rational_systems_verify((m, cols) in arb_matrix(), rhs_seed in -3i64..=3) {
            let matrix: Vec<Vec<CycNumber>> =
                m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let rhs: Vec<CycNumber> = (0..m.len())
                .map(|i| CycNumber::from_rational(
                    Rational::new(BigInt::from(rhs_seed + i as i64), BigInt::from(2))
                ))
                .collect();
            // solve_linear verifies by re-substitution internally; reaching
            // this point without a panic is the assertion.
            let space = solve_linear(&LinearSystem::new(matrix, rhs).unwrap()).unwrap();
            prop_assert!(space.dimension() <= cols);
        }
    }
}
