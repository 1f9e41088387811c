use super::gcd::{poly_gcd, poly_lcm};
use super::poly::Polynomial;
use super::ratfun::RationalFunction;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<RationalFunction>),
    Parametric {
        particular: Vec<RationalFunction>,
        nullspace: Vec<Vec<RationalFunction>>,
    },
    Unsolvable,
}

impl Solution {
    /// Some solution, if any exists.
    pub fn any(&self) -> Option<&[RationalFunction]> {
        match self {
            Solution::Unique(x) => Some(x),
            Solution::Parametric { particular, .. } => Some(particular),
            Solution::Unsolvable => None,
        }
    }
}

struct Echelon {
    rows: Vec<Vec<Polynomial>>,
    pivots: Vec<usize>,
    consistent: bool,
}

fn cost(p: &Polynomial) -> (usize, u32) {
    (p.len(), p.total_degree().unwrap_or(0))
}

/// Fraction-free elimination of an augmented polynomial matrix; pivots are
/// taken only among the first `ncols` columns.
fn echelon(mut m: Vec<Vec<Polynomial>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let width = m.first().map(|r| r.len()).unwrap_or(ncols);
    let mut den = Polynomial::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let best = (rank..nrows)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| cost(&m[r][c]));
        let Some(p) = best else { continue };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for i in rank + 1..nrows {
            let f = m[i][c].clone();
            for j in c..width {
                let v = &(&piv * &m[i][j]) - &(&f * &m[rank][j]);
                m[i][j] = v.div_exact(&den).expect("fraction-free step is exact");
            }
        }
        den = piv;
        pivots.push(c);
        rank += 1;
    }
    let consistent = width == ncols || m[rank..].iter().all(|row| row[ncols..].iter().all(|v| v.is_zero()));
    m.truncate(rank);
    let rows = m
        .into_iter()
        .map(|row| {
            let g = row.iter().fold(Polynomial::zero(), |g, v| poly_gcd(&g, v));
            if g.is_one() || g.is_zero() {
                row
            } else {
                row.iter().map(|v| v.div_exact(&g).expect("gcd divides")).collect()
            }
        })
        .collect();
    Echelon {
        rows,
        pivots,
        consistent,
    }
}

/// Back substitution with the given values for free columns and right-hand side column `rhs`.
fn back_substitute(
    e: &Echelon,
    ncols: usize,
    free_values: &[(usize, RationalFunction)],
    rhs: Option<usize>,
) -> Vec<RationalFunction> {
    let mut x = vec![RationalFunction::zero(); ncols];
    for (c, v) in free_values {
        x[*c] = v.clone();
    }
    for (r, &c) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[r];
        let mut acc = match rhs {
            Some(col) => RationalFunction::from_poly(row[col].clone()),
            None => RationalFunction::zero(),
        };
        for j in c + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc = &acc - &x[j].mul_poly(&row[j]);
            }
        }
        x[c] = acc.div_poly(&row[c]);
    }
    x
}

/// Multiplies every row by the lcm of its denominators.
fn clear_rows(a: &[Vec<RationalFunction>], b: Option<&[RationalFunction]>) -> Vec<Vec<Polynomial>> {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            let extra = b.map(|b| &b[i]);
            let l = row
                .iter()
                .chain(extra)
                .fold(Polynomial::one(), |l, v| poly_lcm(&l, v.denom()));
            row.iter()
                .chain(extra)
                .map(|v| {
                    v.numer() * &l.div_exact(v.denom()).expect("lcm is a multiple")
                })
                .collect()
        })
        .collect()
}

/// Exact Gaussian elimination over the field of rational functions.
pub fn linear_solve(a: &[Vec<RationalFunction>], b: &[RationalFunction]) -> Solution {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if a.is_empty() {
        return if ncols == 0 {
            Solution::Unique(Vec::new())
        } else {
            Solution::Unique(vec![RationalFunction::zero(); ncols])
        };
    }
    let m = clear_rows(a, Some(b));
    let e = echelon(m, ncols);
    if !e.consistent {
        return Solution::Unsolvable;
    }
    let particular = back_substitute(&e, ncols, &[], Some(ncols));
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    if free.is_empty() {
        return Solution::Unique(particular);
    }
    let nullspace = free
        .iter()
        .map(|&f| back_substitute(&e, ncols, &[(f, RationalFunction::one())], None))
        .collect();
    Solution::Parametric {
        particular,
        nullspace,
    }
}

/// Polynomial basis of the right nullspace of `a`; each vector has
/// polynomial entries with no common factor.
pub fn nullspace(a: &[Vec<Polynomial>], ncols: usize) -> Vec<Vec<Polynomial>> {
    let e = echelon(a.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let x = back_substitute(&e, ncols, &[(f, RationalFunction::one())], None);
            clear_vector(&x)
        })
        .collect()
}

/// Scales a vector of rational functions to coprime polynomials.
pub fn clear_vector(x: &[RationalFunction]) -> Vec<Polynomial> {
    let l = x.iter().fold(Polynomial::one(), |l, v| poly_lcm(&l, v.denom()));
    let v: Vec<Polynomial> = x
        .iter()
        .map(|v| v.numer() * &l.div_exact(v.denom()).expect("lcm is a multiple"))
        .collect();
    let g = v.iter().fold(Polynomial::zero(), |g, p| poly_gcd(&g, p));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::symbol::Symbol;

    fn rf(p: Polynomial) -> RationalFunction {
        RationalFunction::from_poly(p)
    }
    fn c(v: i64) -> RationalFunction {
        RationalFunction::from_int(v)
    }

    #[test]
    fn single_unknown() {
        let a = vec![vec![c(1)], vec![c(-1)]];
        let b = vec![c(1), c(-1)];
        assert_eq!(linear_solve(&a, &b), Solution::Unique(vec![c(1)]));
    }

    #[test]
    fn first_order_example() {
        let n = Polynomial::var(Symbol::n());
        let n1 = &n + &Polynomial::one();
        // unknowns s0, s1 with f0 = 1
        let a = vec![vec![rf(n1.clone()), c(1)], vec![c(-1), c(0)]];
        let b = vec![rf(n1.clone()), c(-2)];
        assert_eq!(
            linear_solve(&a, &b),
            Solution::Unique(vec![c(2), rf(-&n1)])
        );
    }

    #[test]
    fn inconsistent() {
        assert_eq!(linear_solve(&[vec![c(0)]], &[c(1)]), Solution::Unsolvable);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let n = Polynomial::var(Symbol::n());
        let one = Polynomial::one();
        let a = vec![
            vec![&n + &one, Polynomial::from_int(-2), n.clone()],
            vec![n.clone(), &n - &one, Polynomial::zero()],
        ];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s = row
                .iter()
                .zip(&ns[0])
                .fold(Polynomial::zero(), |s, (x, y)| &s + &(x * y));
            assert!(s.is_zero());
        }
    }
}
