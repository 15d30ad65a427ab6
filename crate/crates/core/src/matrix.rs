//! Two-player constant-sum games in normal form, solved exactly.
//!
//! Optimal mixed strategies are found by support enumeration over square
//! kernels: for each pair of equal-size supports the indifference equations
//! are solved in exact rationals, and a candidate is kept only if both sides
//! certify the same value against every pure strategy.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Largest number of rows or columns accepted by [`solve_constant_sum`].
pub const MAX_STRATEGIES: usize = 9;

/// The row player receives `payoff[i][j]`, the column player `sum − payoff[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGame {
    payoffs: Vec<Vec<Rational>>,
    sum: Rational,
}

impl MatrixGame {
    pub fn new(payoffs: Vec<Vec<Rational>>, sum: Rational) -> Result<Self> {
        let cols = payoffs.first().map_or(0, Vec::len);
        if payoffs.is_empty() || cols == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(row) = payoffs.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: row.len(),
            });
        }
        Ok(MatrixGame { payoffs, sum })
    }

    pub fn rows(&self) -> usize {
        self.payoffs.len()
    }

    pub fn cols(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn sum(&self) -> Rational {
        self.sum
    }

    pub fn payoffs(&self) -> &[Vec<Rational>] {
        &self.payoffs
    }

    /// The game seen from the column player: their payoffs, transposed.
    fn column_view(&self) -> Vec<Vec<Rational>> {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.sum - self.payoffs[i][j]).collect())
            .collect()
    }

    /// True when swapping roles leaves the game unchanged.
    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols() && self.column_view() == self.payoffs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Row,
    Column,
}

/// Optimal mixed strategies and the row player's value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedProfile {
    pub row: Vec<Rational>,
    pub column: Vec<Rational>,
    pub value: Rational,
}

impl fmt::Display for MixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        writeln!(f, "row:    ({})", show(&self.row))?;
        writeln!(f, "column: ({})", show(&self.column))?;
        write!(f, "value:  {}", self.value)
    }
}

/// Best payoff the `side` player can get with a pure strategy against
/// `opponent_mix`.
pub fn best_response_value(game: &MatrixGame, opponent_mix: &[Rational], side: Side) -> Result<Rational> {
    let matrix = match side {
        Side::Row => game.payoffs.clone(),
        Side::Column => game.column_view(),
    };
    check_distribution(opponent_mix, matrix[0].len())?;
    Ok(matrix
        .iter()
        .map(|row| expectation(row, opponent_mix))
        .max()
        .expect("at least one strategy"))
}

fn check_distribution(mix: &[Rational], len: usize) -> Result<()> {
    if mix.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: mix.len(),
        });
    }
    if mix.iter().any(Signed::is_negative) {
        return Err(Error::InvalidDistribution("negative probability".into()));
    }
    if mix.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::InvalidDistribution("probabilities do not sum to 1".into()));
    }
    Ok(())
}

fn expectation(payoffs: &[Rational], mix: &[Rational]) -> Rational {
    payoffs.iter().zip(mix).map(|(a, p)| a * p).sum()
}

/// Exact optimal strategies for both players.
pub fn solve_constant_sum(game: &MatrixGame) -> Result<MixedProfile> {
    if game.rows() > MAX_STRATEGIES || game.cols() > MAX_STRATEGIES {
        return Err(Error::TooLarge {
            rows: game.rows(),
            cols: game.cols(),
        });
    }
    let (row, value) = optimal_strategy(&game.payoffs);
    let (column, column_value) = optimal_strategy(&game.column_view());
    debug_assert_eq!(value + column_value, game.sum);
    Ok(MixedProfile { row, column, value })
}

/// Maximin strategy of the player choosing rows of `m` (they receive
/// `m[i][j]`), and the value it guarantees. Kernels are tried by size, then
/// row support, then column support, each in lexicographic order.
fn optimal_strategy(m: &[Vec<Rational>]) -> (Vec<Rational>, Rational) {
    let (rows, cols) = (m.len(), m[0].len());
    for k in 1..=rows.min(cols) {
        for support in combinations(rows, k) {
            for tight in combinations(cols, k) {
                if let Some(found) = kernel_solution(m, &support, &tight) {
                    return found;
                }
            }
        }
    }
    unreachable!("every finite constant-sum game has an optimal kernel")
}

fn kernel_solution(m: &[Vec<Rational>], support: &[usize], tight: &[usize]) -> Option<(Vec<Rational>, Rational)> {
    let (rows, cols) = (m.len(), m[0].len());
    let k = support.len();
    // x on `support` makes every column in `tight` pay exactly v.
    let system: Vec<Vec<Rational>> = tight
        .iter()
        .map(|&j| {
            let mut eq: Vec<_> = support.iter().map(|&i| m[i][j]).collect();
            eq.push(-Rational::one());
            eq
        })
        .chain(std::iter::once(ones_then_zero(k)))
        .collect();
    let sol = solve_linear(system, unit_last(k + 1))?;
    let (xs, v) = (&sol[..k], sol[k]);
    if xs.iter().any(Signed::is_negative) {
        return None;
    }
    let mut x = vec![Rational::zero(); rows];
    for (&i, &p) in support.iter().zip(xs) {
        x[i] = p;
    }
    if (0..cols).any(|j| (0..rows).map(|i| x[i] * m[i][j]).sum::<Rational>() < v) {
        return None;
    }
    // y on `tight` holds every row in `support` to exactly v.
    let system: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| {
            let mut eq: Vec<_> = tight.iter().map(|&j| m[i][j]).collect();
            eq.push(-Rational::one());
            eq
        })
        .chain(std::iter::once(ones_then_zero(k)))
        .collect();
    let sol = solve_linear(system, unit_last(k + 1))?;
    let (ys, w) = (&sol[..k], sol[k]);
    if w != v || ys.iter().any(Signed::is_negative) {
        return None;
    }
    let mut y = vec![Rational::zero(); cols];
    for (&j, &p) in tight.iter().zip(ys) {
        y[j] = p;
    }
    if m.iter().any(|row| expectation(row, &y) > v) {
        return None;
    }
    Some((x, v))
}

fn ones_then_zero(k: usize) -> Vec<Rational> {
    let mut eq = vec![Rational::one(); k];
    eq.push(Rational::zero());
    eq
}

fn unit_last(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n];
    b[n - 1] = Rational::one();
    b
}

/// Gauss–Jordan elimination; `None` if the system is singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in &mut a[col][col..] {
            *x *= inv;
        }
        b[col] *= inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * p;
                }
                let delta = factor * b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

/// k-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
