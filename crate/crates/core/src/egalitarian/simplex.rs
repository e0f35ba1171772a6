//! Dense two-phase primal simplex over exact rationals.
//!
//! Small and slow by design. The linear programs in this crate have at
//! most a few hundred variables, and exactness matters more than speed:
//! the solver's answers feed equality assertions downstream. Bland's
//! pivoting rule guarantees termination under degeneracy.

use num_traits::{One, Signed, Zero};

use crate::instance::Rational;

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum SimplexError {
    Infeasible,
    Unbounded,
}

/// Minimizes c.z subject to A z = b, z >= 0. Returns the optimal
/// objective value and a solution vector.
pub(crate) fn solve_min(
    a: &[Vec<Rational>],
    b: &[Rational],
    c: &[Rational],
) -> Result<(Rational, Vec<Rational>), SimplexError> {
    let rows = a.len();
    let cols = c.len();
    // Tableau layout: structural columns, one artificial per row, rhs.
    let width = cols + rows + 1;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row = vec![Rational::zero(); width];
        let flip = b[r].is_negative();
        for j in 0..cols {
            row[j] = if flip { -&a[r][j] } else { a[r][j].clone() };
        }
        row[cols + r] = Rational::one();
        row[width - 1] = if flip { -&b[r] } else { b[r].clone() };
        tab.push(row);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![Rational::zero(); cols + rows];
    for item in phase1.iter_mut().skip(cols) {
        *item = Rational::one();
    }
    run(&mut tab, &mut basis, &phase1, cols + rows)?;
    let infeasibility = objective(&tab, &basis, &phase1);
    if !infeasibility.is_zero() {
        return Err(SimplexError::Infeasible);
    }
    // Pivot leftover artificials out of the basis where possible; a row
    // with no structural pivot is redundant and its artificial stays
    // basic at zero, harmless because artificials never re-enter.
    for r in 0..rows {
        if basis[r] >= cols {
            if let Some(j) = (0..cols).find(|&j| !tab[r][j].is_zero()) {
                pivot(&mut tab, &mut basis, r, j);
            }
        }
    }

    // Phase 2 over the structural columns only.
    let mut full_cost = c.to_vec();
    full_cost.resize(cols + rows, Rational::zero());
    run(&mut tab, &mut basis, &full_cost, cols)?;

    let mut solution = vec![Rational::zero(); cols];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < cols {
            solution[bv] = tab[r][width - 1].clone();
        }
    }
    Ok((objective(&tab, &basis, &full_cost), solution))
}

fn objective(tab: &[Vec<Rational>], basis: &[usize], cost: &[Rational]) -> Rational {
    let width = tab.first().map_or(1, Vec::len);
    basis
        .iter()
        .enumerate()
        .map(|(r, &bv)| &cost[bv] * &tab[r][width - 1])
        .sum()
}

fn run(
    tab: &mut [Vec<Rational>],
    basis: &mut [usize],
    cost: &[Rational],
    enter_limit: usize,
) -> Result<(), SimplexError> {
    let rows = tab.len();
    let width = tab.first().map_or(1, Vec::len);
    loop {
        // Bland's rule: the lowest-index column with negative reduced cost.
        let mut entering = None;
        'cols: for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for r in 0..rows {
                if !tab[r][j].is_zero() {
                    reduced -= &cost[basis[r]] * &tab[r][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };
        // Ratio test; ties go to the lowest basic variable index.
        let mut leaving: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if tab[r][j].is_positive() {
                let ratio = &tab[r][width - 1] / &tab[r][j];
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio || (ratio == lratio && basis[r] < basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = leaving else {
            return Err(SimplexError::Unbounded);
        };
        pivot(tab, basis, r, j);
    }
}

fn pivot(tab: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize) {
    let width = tab.first().map_or(1, Vec::len);
    let factor = tab[r][j].clone();
    for item in tab[r].iter_mut() {
        *item /= &factor;
    }
    for other in 0..tab.len() {
        if other == r || tab[other][j].is_zero() {
            continue;
        }
        let scale = tab[other][j].clone();
        for k in 0..width {
            let delta = &scale * &tab[r][k];
            tab[other][k] -= delta;
        }
    }
    basis[r] = j;
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rats(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| rat(v, 1)).collect()
    }

    #[test]
    fn solves_a_basic_program() {
        // min x + 2y subject to x + y = 3, x - y = 1, x, y >= 0.
        let a = vec![rats(&[1, 1]), rats(&[1, -1])];
        let b = rats(&[3, 1]);
        let c = rats(&[1, 2]);
        let (obj, z) = solve_min(&a, &b, &c).unwrap();
        assert_eq!(z, rats(&[2, 1]));
        assert_eq!(obj, rat(4, 1));
    }

    #[test]
    fn picks_the_cheaper_vertex() {
        // min 3x + y subject to x + y = 2.
        let a = vec![rats(&[1, 1])];
        let b = rats(&[2]);
        let c = rats(&[3, 1]);
        let (obj, z) = solve_min(&a, &b, &c).unwrap();
        assert_eq!(z, rats(&[0, 2]));
        assert_eq!(obj, rat(2, 1));
    }

    #[test]
    fn fractional_optimum() {
        // min s subject to -x + s = 0 and -100y + s = 0 and x + y = 1:
        // balancing two unequal loads.
        let a = vec![
            vec![rat(-1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(-100, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
        ];
        let b = rats(&[0, 0, 1]);
        let c = rats(&[0, 0, 1]);
        let (obj, z) = solve_min(&a, &b, &c).unwrap();
        assert_eq!(obj, rat(100, 101));
        assert_eq!(z[0], rat(100, 101));
        assert_eq!(z[1], rat(1, 101));
    }

    #[test]
    fn detects_infeasibility() {
        // x = 1 and x = 2 cannot both hold.
        let a = vec![rats(&[1]), rats(&[1])];
        let b = rats(&[1, 2]);
        let c = rats(&[1]);
        assert_eq!(solve_min(&a, &b, &c), Err(SimplexError::Infeasible));
    }

    #[test]
    fn detects_unboundedness() {
        // min -x subject to x - y = 0: push both to infinity.
        let a = vec![rats(&[1, -1])];
        let b = rats(&[0]);
        let c = rats(&[-1, 0]);
        assert_eq!(solve_min(&a, &b, &c), Err(SimplexError::Unbounded));
    }

    #[test]
    fn handles_negative_rhs() {
        // -x = -2 written directly.
        let a = vec![rats(&[-1])];
        let b = rats(&[-2]);
        let c = rats(&[1]);
        let (obj, z) = solve_min(&a, &b, &c).unwrap();
        assert_eq!(z[0], rat(2, 1));
        assert_eq!(obj, rat(2, 1));
    }

    #[test]
    fn drops_redundant_rows() {
        // The same constraint twice.
        let a = vec![rats(&[1, 1]), rats(&[1, 1])];
        let b = rats(&[2, 2]);
        let c = rats(&[1, 3]);
        let (obj, z) = solve_min(&a, &b, &c).unwrap();
        assert_eq!(z, rats(&[2, 0]));
        assert_eq!(obj, rat(2, 1));
    }
}
