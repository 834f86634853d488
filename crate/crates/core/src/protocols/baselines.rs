//! The classic one-pass procedures: cut-and-choose, last diminisher, and
//! divide-and-conquer halving. All of them are deliberately order-dependent
//! where ties arise; the tie rules below are fixed so runs are reproducible.

use num_traits::{One, Zero};

use crate::cake::Subcake;
use crate::error::Result;
use crate::oracle::Oracle;
use crate::protocols::{finish_division, oracle_for, require_players, Division};
use crate::rational::{rat, Rational};
use crate::valuation::Valuation;

/// Two players: the first halves the cake by their own measure, the second
/// takes the weakly preferred half (ties go left), the first keeps the rest.
pub fn cut_and_choose(first: &Valuation, second: &Valuation) -> Result<Division> {
    let valuations = vec![first.clone(), second.clone()];
    let mut oracle = oracle_for(&valuations);
    let zero = Rational::zero();
    let one = Rational::one();
    let mid = oracle.cut(0, &zero, &rat(1, 2))?;
    let left_value = oracle.eval(1, &zero, &mid)?;
    let left = Subcake::unit().intersect_window(&zero, &mid);
    let right = Subcake::unit().intersect_window(&mid, &one);
    let pieces = if left_value >= rat(1, 2) {
        vec![Some(right), Some(left)]
    } else {
        vec![Some(left), Some(right)]
    };
    finish_division(
        "cut-and-choose",
        &valuations,
        &Subcake::unit(),
        pieces,
        oracle.into_ledger(),
    )
}

/// Banach-Knaster rounds: everyone still in play marks the point where the
/// piece starting at the current left edge reaches one n-th of the whole
/// cake for them; the smallest mark wins the piece (ties to the lowest
/// input index) and its owner leaves. The last player takes the remainder.
pub fn last_diminisher(valuations: &[Valuation]) -> Result<Division> {
    require_players("last-diminisher", valuations)?;
    let n = valuations.len();
    let share = rat(1, n as i64);
    let mut oracle = oracle_for(valuations);
    let mut out: Vec<Option<Subcake>> = vec![None; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut left = Rational::zero();
    while remaining.len() > 1 {
        let mut winner = 0usize;
        let mut best: Option<Rational> = None;
        for (pos, &p) in remaining.iter().enumerate() {
            let mark = oracle.cut(p, &left, &share)?;
            if best.as_ref().is_none_or(|b| mark < *b) {
                best = Some(mark);
                winner = pos;
            }
        }
        let mark = best.expect("at least one mark");
        let player = remaining.remove(winner);
        out[player] = Some(Subcake::unit().intersect_window(&left, &mark));
        left = mark;
    }
    let last = remaining[0];
    out[last] = Some(Subcake::unit().intersect_window(&left, &Rational::one()));
    finish_division(
        "last-diminisher",
        valuations,
        &Subcake::unit(),
        out,
        oracle.into_ledger(),
    )
}

/// Divide-and-conquer halving: every active player marks the point that
/// splits their value of the current interval in the ratio
/// `floor(k/2) : k - floor(k/2)`; players sorted by mark (ties in input
/// order) recurse left and right of the `floor(k/2)`-th smallest mark.
pub fn even_paz(valuations: &[Valuation]) -> Result<Division> {
    require_players("even-paz", valuations)?;
    let mut oracle = oracle_for(valuations);
    let mut out: Vec<Option<Subcake>> = vec![None; valuations.len()];
    let members: Vec<usize> = (0..valuations.len()).collect();
    halve(
        &mut oracle,
        &members,
        &Rational::zero(),
        &Rational::one(),
        &mut out,
    )?;
    finish_division(
        "even-paz",
        valuations,
        &Subcake::unit(),
        out,
        oracle.into_ledger(),
    )
}

fn halve(
    oracle: &mut Oracle<'_>,
    members: &[usize],
    lo: &Rational,
    hi: &Rational,
    out: &mut [Option<Subcake>],
) -> Result<()> {
    let k = members.len();
    if k == 1 {
        out[members[0]] = Some(Subcake::unit().intersect_window(lo, hi));
        return Ok(());
    }
    let h = k / 2;
    let unit = Subcake::unit();
    let mut marks: Vec<(Rational, usize, usize)> = Vec::with_capacity(k); // (mark, order, player)
    for (order, &p) in members.iter().enumerate() {
        let worth = oracle.subcake_eval(p, &unit, lo, hi)?;
        let target = worth * rat(h as i64, k as i64);
        let mark = oracle.cut(p, lo, &target)?;
        marks.push((mark, order, p));
    }
    marks.sort();
    let split = marks[h - 1].0.clone();
    // child groups keep the input order so deeper ties break the same way
    let mut left: Vec<usize> = marks[..h].iter().map(|&(_, _, p)| p).collect();
    let mut right: Vec<usize> = marks[h..].iter().map(|&(_, _, p)| p).collect();
    left.sort_unstable();
    right.sort_unstable();
    halve(oracle, &left, lo, &split, out)?;
    halve(oracle, &right, &split, hi, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cake::Interval;
    use crate::valuation::Valuation;

    fn back_loaded() -> Valuation {
        // density 2 on the right half
        Valuation::new(vec![(
            Interval::new(rat(1, 2), rat(1, 1)).unwrap(),
            rat(2, 1),
        )])
        .unwrap()
    }

    #[test]
    fn cut_and_choose_symmetric_instance() {
        let d = cut_and_choose(&Valuation::lebesgue(), &Valuation::lebesgue()).unwrap();
        assert_eq!(d.values, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(d.ledger.cut_count(), 1);
        assert_eq!(d.ledger.eval_count(), 1);
    }

    #[test]
    fn chooser_takes_the_better_half() {
        let d = cut_and_choose(&Valuation::lebesgue(), &back_loaded()).unwrap();
        assert_eq!(d.values[1], rat(1, 1));
        assert_eq!(d.values[0], rat(1, 2));
    }

    #[test]
    fn identical_players_split_evenly() {
        let v = back_loaded();
        let d = cut_and_choose(&v, &v).unwrap();
        assert_eq!(d.values, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn last_diminisher_uniform_order() {
        let vs = vec![Valuation::lebesgue(); 3];
        let d = last_diminisher(&vs).unwrap();
        let thirds = [
            Subcake::unit().intersect_window(&rat(0, 1), &rat(1, 3)),
            Subcake::unit().intersect_window(&rat(1, 3), &rat(2, 3)),
            Subcake::unit().intersect_window(&rat(2, 3), &rat(1, 1)),
        ];
        assert_eq!(d.pieces, thirds.to_vec());
    }

    #[test]
    fn last_diminisher_single_player() {
        let d = last_diminisher(&[Valuation::lebesgue()]).unwrap();
        assert_eq!(d.pieces[0], Subcake::unit());
        assert_eq!(d.ledger.total(), 0);
    }

    #[test]
    fn even_paz_uniform_quarters() {
        let vs = vec![Valuation::lebesgue(); 4];
        let d = even_paz(&vs).unwrap();
        for v in &d.values {
            assert_eq!(*v, rat(1, 4));
        }
        // deterministic tie-break: pieces in input order, left to right
        assert_eq!(
            d.pieces[0],
            Subcake::unit().intersect_window(&rat(0, 1), &rat(1, 4))
        );
    }

    #[test]
    fn last_diminisher_treats_twin_uniforms_unequally() {
        let inst = crate::instance::fixtures::last_diminisher_non_aristotelian();
        let d = last_diminisher(inst.valuations()).unwrap();
        assert_eq!(d.values[0], rat(1, 3));
        assert_eq!(d.values[1], rat(1, 2));
        assert_eq!(
            d.pieces[2],
            Subcake::unit().intersect_window(&rat(1, 3), &rat(1, 2))
        );
        assert_eq!(
            d.pieces[1],
            Subcake::unit().intersect_window(&rat(1, 2), &rat(1, 1))
        );
        // five primitive cuts: three marks in round one, two in round two
        assert_eq!(d.ledger.cut_count(), 5);
        assert_eq!(d.ledger.eval_count(), 0);
    }

    #[test]
    fn even_paz_treats_twin_uniforms_unequally() {
        let inst = crate::instance::fixtures::even_paz_non_aristotelian();
        let d = even_paz(inst.valuations()).unwrap();
        assert_eq!(d.values[0], rat(1, 4));
        assert_eq!(d.values[1], rat(1, 4));
        assert_eq!(d.values[2], rat(1, 4));
        assert_eq!(d.values[3], rat(49, 100));
        assert_eq!(
            d.pieces[2],
            Subcake::unit().intersect_window(&rat(1, 2), &rat(51, 100))
        );
    }

    #[test]
    fn even_paz_two_players_splits_at_first_sorted_mark() {
        let d = even_paz(&[Valuation::lebesgue(), back_loaded()]).unwrap();
        // marks: 1/2 for the uniform player, 3/4 for the back-loaded one
        assert_eq!(
            d.pieces[0],
            Subcake::unit().intersect_window(&rat(0, 1), &rat(1, 2))
        );
        assert_eq!(d.values[0], rat(1, 2));
        assert_eq!(d.values[1], rat(1, 1));
    }
}
