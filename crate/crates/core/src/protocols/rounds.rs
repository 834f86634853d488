//! One round of an allocation-based protocol: cut the current subcake into
//! equal-value pieces, collect everyone's evaluation grid, and build the
//! acceptability matrix.

use num_traits::Zero;

use crate::allocation::AcceptabilityMatrix;
use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::rational::Rational;

pub(crate) struct Round {
    pub pieces: Vec<Subcake>,
    pub totals: Vec<Rational>,
    pub values: Vec<Vec<Rational>>,
    pub matrix: AcceptabilityMatrix,
}

/// Boundary of an equal-value cut of `x` into `parts` pieces by one player:
/// `parts - 1` interior cut queries plus the fixed endpoints of the subcake.
/// The final boundary is pinned to the right end of the subcake so the
/// pieces always tile it; the last piece carries exactly one share of the
/// cutter's remaining mass by construction.
pub(crate) fn equal_cut_boundary(
    oracle: &mut Oracle<'_>,
    player: usize,
    x: &Subcake,
    parts: usize,
) -> Result<Vec<Rational>> {
    let min = x
        .min_point()
        .ok_or_else(|| Error::Internal("cutting an empty subcake".into()))?
        .clone();
    let max = x.max_point().expect("nonempty subcake").clone();
    let total = oracle.subcake_measure_cached(player, x)?;
    if total.is_zero() {
        return Err(Error::Internal(format!(
            "player {player} holds no mass on the current subcake"
        )));
    }
    let share = total / Rational::from_integer(parts.into());
    let mut boundary = Vec::with_capacity(parts + 1);
    boundary.push(min);
    for _ in 1..parts {
        let prev = boundary.last().expect("nonempty").clone();
        boundary.push(oracle.subcake_cut(player, x, &prev, &share)?);
    }
    boundary.push(max);
    Ok(boundary)
}

pub(crate) fn pieces_from_boundary(x: &Subcake, boundary: &[Rational]) -> Vec<Subcake> {
    boundary
        .windows(2)
        .map(|w| x.intersect_window(&w[0], &w[1]))
        .collect()
}

/// Evaluation grid, piece list and acceptability matrix for one round.
pub(crate) fn build_round(
    oracle: &mut Oracle<'_>,
    players: &[usize],
    x: &Subcake,
    boundary: Vec<Rational>,
) -> Result<Round> {
    let totals: Vec<Rational> = players
        .iter()
        .map(|&p| oracle.subcake_measure_cached(p, x))
        .collect::<Result<_>>()?;
    let pieces = pieces_from_boundary(x, &boundary);
    let mut values = Vec::with_capacity(players.len());
    for &p in players {
        let mut row = Vec::with_capacity(pieces.len());
        for w in boundary.windows(2) {
            row.push(oracle.subcake_eval(p, x, &w[0], &w[1])?);
        }
        values.push(row);
    }
    let matrix = AcceptabilityMatrix::build(values.clone(), &totals, players.len())?;
    if !matrix.every_row_accepts() {
        return Err(Error::Internal(
            "a player accepts no piece of an equal-share partition".into(),
        ));
    }
    Ok(Round {
        pieces,
        totals,
        values,
        matrix,
    })
}
