use draftopt::decision::{topsis, DecisionMatrix, Direction};
use proptest::prelude::*;

/// Textbook TOPSIS computed column by column with explicit loops.
fn oracle(values: &[Vec<f64>], weights: &[f64], dirs: &[Direction]) -> (Vec<f64>, Vec<usize>) {
    let n = values.len();
    let m = weights.len();
    let mut v = vec![vec![0.0; m]; n];
    for j in 0..m {
        let mut ss = 0.0;
        for row in values {
            ss += row[j] * row[j];
        }
        for i in 0..n {
            v[i][j] = weights[j] * values[i][j] / ss.sqrt();
        }
    }
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    for j in 0..m {
        let col: Vec<f64> = v.iter().map(|r| r[j]).collect();
        let mx = col.iter().cloned().fold(f64::MIN, f64::max);
        let mn = col.iter().cloned().fold(f64::MAX, f64::min);
        if dirs[j] == Direction::Benefit {
            plus[j] = mx;
            minus[j] = mn;
        } else {
            plus[j] = mn;
            minus[j] = mx;
        }
    }
    let mut c = Vec::new();
    for row in &v {
        let mut dp = 0.0;
        let mut dn = 0.0;
        for j in 0..m {
            dp += (row[j] - plus[j]).powi(2);
            dn += (row[j] - minus[j]).powi(2);
        }
        let (dp, dn) = (dp.sqrt(), dn.sqrt());
        c.push(if dp == 0.0 { 1.0 } else { dn / (dp + dn) });
    }
    // selection sort: highest closeness first, lowest index among equals
    let mut order = Vec::new();
    let mut used = vec![false; n];
    for _ in 0..n {
        let mut pick = usize::MAX;
        for i in 0..n {
            if !used[i] && (pick == usize::MAX || c[i] > c[pick]) {
                pick = i;
            }
        }
        used[pick] = true;
        order.push(pick);
    }
    (c, order)
}

fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<Direction>)> {
    (1usize..5).prop_flat_map(|m| {
        (
            prop::collection::vec(prop::collection::vec((1u8..6).prop_map(|v| v as f64 * 0.1), m), 1..100),
            prop::collection::vec(1u8..5, m),
            prop::collection::vec(any::<bool>().prop_map(|b| if b { Direction::Benefit } else { Direction::Cost }), m),
        )
            .prop_map(|(values, w, dirs)| {
                let total: f64 = w.iter().map(|&x| x as f64).sum();
                let mut weights: Vec<f64> = w.iter().map(|&x| x as f64 / total).collect();
                let rest: f64 = weights[1..].iter().sum();
                weights[0] = 1.0 - rest;
                (values, weights, dirs)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_oracle((values, weights, dirs) in instance()) {
        let m = DecisionMatrix::new(values.clone(), weights.clone(), dirs.clone()).unwrap();
        let r = topsis(&m).unwrap();
        let (c, order) = oracle(&values, &weights, &dirs);
        prop_assert_eq!(&r.closeness, &c);
        prop_assert_eq!(&r.order, &order);
        prop_assert!(c.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn column_scale_keeps_ranking((values, weights, dirs) in instance(), s in 0.5f64..4.0) {
        let a = topsis(&DecisionMatrix::new(values.clone(), weights.clone(), dirs.clone()).unwrap()).unwrap();
        let scaled: Vec<Vec<f64>> = values.iter().map(|r| { let mut r = r.clone(); r[0] *= s; r }).collect();
        let b = topsis(&DecisionMatrix::new(scaled, weights, dirs).unwrap()).unwrap();
        for (x, y) in a.closeness.iter().zip(&b.closeness) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn dominated_addition_keeps_ideal_winner(
        rows in prop::collection::vec((0.7f64..0.85, 0.11f64..0.2), 1..30),
        extra in (0.5f64..0.86, 0.1f64..0.6),
    ) {
        // the winner sits on the ideal point and stays there after the addition
        let mut values: Vec<Vec<f64>> = rows.iter().map(|&(a, b)| vec![a, b]).collect();
        values.push(vec![0.86, 0.1]);
        let w = vec![0.5, 0.5];
        let d = vec![Direction::Benefit, Direction::Cost];
        let before = topsis(&DecisionMatrix::new(values.clone(), w.clone(), d.clone()).unwrap()).unwrap();
        values.push(vec![extra.0, extra.1]);
        let after = topsis(&DecisionMatrix::new(values, w, d).unwrap()).unwrap();
        prop_assert_eq!(before.best(), rows.len());
        prop_assert_eq!(after.best(), rows.len());
    }

}

#[test]
fn dominant_alternative_ranks_first() {
    let values = vec![vec![0.80, 0.14], vec![0.85, 0.10], vec![0.82, 0.12]];
    let m = DecisionMatrix::new(values, vec![0.5, 0.5], vec![Direction::Benefit, Direction::Cost]).unwrap();
    let r = topsis(&m).unwrap();
    assert_eq!(r.best(), 1);
    assert_eq!(r.closeness[1], 1.0);
}

#[test]
fn rank_reversal_example() {
    // a dominated addition widens the cost range and flips the winner
    let base = vec![vec![0.8288630707100905, 0.1], vec![0.8679375144329805, 0.11341432091519248], vec![0.7, 0.1]];
    let w = vec![0.5, 0.5];
    let d = vec![Direction::Benefit, Direction::Cost];
    let before = topsis(&DecisionMatrix::new(base.clone(), w.clone(), d.clone()).unwrap()).unwrap();
    let mut more = base;
    more.push(vec![0.8288630707100905, 0.5578593814278977]);
    let after = topsis(&DecisionMatrix::new(more, w, d).unwrap()).unwrap();
    assert_eq!((before.best(), after.best()), (0, 1));
}
