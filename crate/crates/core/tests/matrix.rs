use escalade::catalog::{matching_pennies, rock_paper_scissors, rock_paper_scissors_zero_sum};
use escalade::{best_response_value, solve_constant_sum, MatrixGame, MixedProfile, Rational, Side};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn certified(g: &MatrixGame, s: &MixedProfile) -> bool {
    best_response_value(g, &s.column, Side::Row).unwrap() == s.value
        && best_response_value(g, &s.row, Side::Column).unwrap() == g.sum() - s.value
}

fn is_distribution(v: &[Rational]) -> bool {
    v.iter().all(|p| !p.is_negative()) && v.iter().sum::<Rational>() == Rational::one()
}

#[test]
fn rock_paper_scissors_is_uniform() {
    let third = vec![r(1, 3); 3];
    for (g, value) in [
        (rock_paper_scissors(), r(1, 2)),
        (rock_paper_scissors_zero_sum(), Rational::zero()),
    ] {
        let s = solve_constant_sum(&g).unwrap();
        assert_eq!((&s.row, &s.column, s.value), (&third, &third, value));
        assert!(certified(&g, &s));
        // every pure row earns the value against the uniform column mix
        for row in g.payoffs() {
            assert_eq!(row.iter().sum::<Rational>() / Rational::from_integer(3), value);
        }
    }
}

#[test]
fn matching_pennies_is_a_coin_flip() {
    let g = matching_pennies();
    let s = solve_constant_sum(&g).unwrap();
    assert_eq!(s.row, [r(1, 2), r(1, 2)]);
    assert_eq!(s.column, [r(1, 2), r(1, 2)]);
    assert_eq!(s.value, r(1, 2));
    assert_eq!(best_response_value(&g, &s.column, Side::Row).unwrap(), r(1, 2));
}

fn matrix_strategy() -> impl Strategy<Value = MatrixGame> {
    (1usize..=4, 1usize..=4, -3i128..=3).prop_flat_map(|(rows, cols, sum)| {
        prop::collection::vec(prop::collection::vec(-5i128..=5, cols), rows).prop_map(move |m| {
            let payoffs = m
                .into_iter()
                .map(|row| row.into_iter().map(Rational::from_integer).collect())
                .collect();
            MatrixGame::new(payoffs, Rational::from_integer(sum)).unwrap()
        })
    })
}

fn symmetric_strategy() -> impl Strategy<Value = MatrixGame> {
    (1usize..=4, -4i128..=4).prop_flat_map(|(n, sum)| {
        prop::collection::vec(-6i128..=6, n * n).prop_map(move |cells| {
            let s = Rational::from_integer(sum);
            let mut m = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                m[i][i] = s / Rational::from_integer(2);
                for j in i + 1..n {
                    m[i][j] = Rational::from_integer(cells[i * n + j]);
                    m[j][i] = s - m[i][j];
                }
            }
            MatrixGame::new(m, s).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solutions_carry_certificates(g in matrix_strategy()) {
        let s = solve_constant_sum(&g).unwrap();
        prop_assert!(is_distribution(&s.row) && is_distribution(&s.column));
        prop_assert!(certified(&g, &s));
    }

    #[test]
    fn symmetric_games_get_symmetric_answers(g in symmetric_strategy()) {
        prop_assert!(g.is_symmetric());
        let s = solve_constant_sum(&g).unwrap();
        prop_assert_eq!(&s.row, &s.column);
        prop_assert_eq!(s.value, g.sum() / Rational::from_integer(2));
    }
}
