//! The classic three-player envy-free procedure.
//!
//! Stage one: player one cuts three equal shares; player two trims the
//! piece they consider largest down to a tie with their second largest
//! (the trim is set aside); players pick in the order three, two, one,
//! with player two obliged to take the trimmed piece if still available.
//! Stage two: whichever of players two and three did not take the trimmed
//! piece divides the trim into three equal parts by their own measure;
//! picks run holder first, player one second, divider last. Every tie is
//! broken toward the lowest piece index, so runs are deterministic.

use num_traits::{One, Zero};

use crate::cake::Subcake;
use crate::error::Result;
use crate::protocols::{finish_division, oracle_for, Division};
use crate::rational::{rat, Rational};
use crate::valuation::Valuation;

pub fn selfridge_conway(
    first: &Valuation,
    second: &Valuation,
    third: &Valuation,
) -> Result<Division> {
    let valuations = vec![first.clone(), second.clone(), third.clone()];
    let mut oracle = oracle_for(&valuations);
    let unit = Subcake::unit();
    let zero = Rational::zero();
    let one = Rational::one();

    // stage one: three equal shares by player one
    let third_share = rat(1, 3);
    let c1 = oracle.cut(0, &zero, &third_share)?;
    let c2 = oracle.cut(0, &c1, &third_share)?;
    let mut bounds = vec![
        (zero.clone(), c1.clone()),
        (c1, c2.clone()),
        (c2, one.clone()),
    ];

    // player two sizes the pieces up and trims the largest to a tie
    let mut second_values: Vec<Rational> = Vec::with_capacity(3);
    for (lo, hi) in &bounds {
        second_values.push(oracle.subcake_eval(1, &unit, lo, hi)?);
    }
    let top = argmax(&second_values);
    let runner_up = argmax_excluding(&second_values, top);
    let mut trim: Option<(Rational, Rational)> = None;
    if second_values[top] > second_values[runner_up] {
        let surplus = &second_values[top] - &second_values[runner_up];
        let t = oracle.cut(1, &bounds[top].0, &surplus)?;
        trim = Some((bounds[top].0.clone(), t.clone()));
        bounds[top].0 = t;
        second_values[top] = second_values[runner_up].clone();
    }

    // picks: three, then two (obliged toward the trimmed piece), then one
    let mut taken: [Option<usize>; 3] = [None; 3]; // piece -> player
    let mut third_values: Vec<Rational> = Vec::with_capacity(3);
    for (lo, hi) in &bounds {
        third_values.push(oracle.subcake_eval(2, &unit, lo, hi)?);
    }
    let pick3 = argmax(&third_values);
    taken[pick3] = Some(2);
    let pick2 = match trim {
        Some(_) if taken[top].is_none() => top,
        _ => {
            let mut best: Option<usize> = None;
            for j in 0..3 {
                if taken[j].is_some() {
                    continue;
                }
                if best.is_none_or(|b| second_values[j] > second_values[b]) {
                    best = Some(j);
                }
            }
            best.expect("a piece is left for player two")
        }
    };
    taken[pick2] = Some(1);
    let pick1 = (0..3)
        .find(|j| taken[*j].is_none())
        .expect("a piece is left for player one");
    taken[pick1] = Some(0);

    let mut pieces: Vec<Subcake> = vec![Subcake::empty(); 3];
    for (j, (lo, hi)) in bounds.iter().enumerate() {
        let player = taken[j].expect("every piece is taken");
        pieces[player] = unit.intersect_window(lo, hi);
    }

    // stage two: divide the trim
    if let Some((trim_lo, trim_hi)) = trim {
        let holder = taken[top].expect("trimmed piece is taken");
        debug_assert!(holder == 1 || holder == 2);
        let divider = if holder == 2 { 1 } else { 2 };
        let trim_mass = oracle.subcake_eval(divider, &unit, &trim_lo, &trim_hi)?;
        let part_share = trim_mass / Rational::from_integer(3.into());
        let r1 = if part_share.is_zero() {
            trim_lo.clone()
        } else {
            oracle.subcake_cut(divider, &unit, &trim_lo, &part_share)?
        };
        let r2 = if part_share.is_zero() {
            trim_lo.clone()
        } else {
            oracle.subcake_cut(divider, &unit, &r1, &part_share)?
        };
        let parts = [
            (trim_lo.clone(), r1.clone()),
            (r1, r2.clone()),
            (r2, trim_hi.clone()),
        ];
        let mut part_taken: [Option<usize>; 3] = [None; 3];
        for &picker in &[holder, 0] {
            let mut values = Vec::with_capacity(3);
            for (lo, hi) in &parts {
                values.push(oracle.subcake_eval(picker, &unit, lo, hi)?);
            }
            let mut best: Option<usize> = None;
            for j in 0..3 {
                if part_taken[j].is_some() {
                    continue;
                }
                if best.is_none_or(|b| values[j] > values[b]) {
                    best = Some(j);
                }
            }
            part_taken[best.expect("a part remains")] = Some(picker);
        }
        let last = (0..3)
            .find(|j| part_taken[*j].is_none())
            .expect("one part remains for the divider");
        part_taken[last] = Some(divider);
        for (j, (lo, hi)) in parts.iter().enumerate() {
            let player = part_taken[j].expect("every part is taken");
            pieces[player] = pieces[player].union(&unit.intersect_window(lo, hi));
        }
    }

    let assigned = pieces.into_iter().map(Some).collect();
    finish_division(
        "selfridge-conway",
        &valuations,
        &unit,
        assigned,
        oracle.into_ledger(),
    )
}

fn argmax(values: &[Rational]) -> usize {
    let mut best = 0;
    for j in 1..values.len() {
        if values[j] > values[best] {
            best = j;
        }
    }
    best
}

fn argmax_excluding(values: &[Rational], skip: usize) -> usize {
    let mut best: Option<usize> = None;
    for j in 0..values.len() {
        if j == skip {
            continue;
        }
        if best.is_none_or(|b| values[j] > values[b]) {
            best = Some(j);
        }
    }
    best.expect("more than one value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cake::Interval;

    #[test]
    fn identical_players_split_into_exact_thirds() {
        let v = Valuation::lebesgue();
        let d = selfridge_conway(&v, &v, &v).unwrap();
        for value in &d.values {
            assert_eq!(*value, rat(1, 3));
        }
    }

    #[test]
    fn trim_occurs_and_stays_envy_free() {
        let concentrated = Valuation::new(vec![(
            Interval::new(rat(2, 3), rat(1, 1)).unwrap(),
            rat(3, 1),
        )])
        .unwrap();
        let vs = [Valuation::lebesgue(), concentrated.clone(), concentrated];
        let d = selfridge_conway(&vs[0], &vs[1], &vs[2]).unwrap();
        // all nine envy comparisons, exactly
        for (i, v) in vs.iter().enumerate() {
            for j in 0..3 {
                let own = &d.values[i];
                let other = v.measure(&d.pieces[j]);
                assert!(*own >= other, "player {i} envies {j}: {own} < {other}");
            }
        }
    }
}
