//! Proportional division with equal treatment of equals.
//!
//! Each round the first active player cuts the current subcake into equal
//! shares and a maximal allocation is computed. A matched player walks away
//! with their piece only when they value every matched piece exactly like
//! the cutter values one share; the other matched players are regrouped by
//! identical evaluation rows and split the union of their matched pieces
//! among themselves recursively, so players with one and the same measure
//! stay together until they are served at equal value. Unmatched players
//! split the unmatched remainder.

use num_traits::Zero;

use crate::allocation::find_maximal_allocation;
use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::protocols::rounds::{build_round, equal_cut_boundary};
use crate::protocols::{
    finish_division, group_by_evaluation_vector, oracle_for, require_players, Division,
};
use crate::rational::Rational;
use crate::valuation::Valuation;

pub fn aristo_prop(valuations: &[Valuation]) -> Result<Division> {
    aristo_prop_on(valuations, &Subcake::unit())
}

/// Run on an arbitrary subcake whose boundary structure is treated as
/// already known to the mediator.
pub fn aristo_prop_on(valuations: &[Valuation], ambient: &Subcake) -> Result<Division> {
    require_players("aristoprop", valuations)?;
    let mut oracle = oracle_for(valuations);
    oracle.prime_subcake_all(ambient);
    let players: Vec<usize> = (0..valuations.len()).collect();
    let mut out = vec![None; valuations.len()];
    recurse(&mut oracle, &players, ambient, &mut out)?;
    finish_division("aristoprop", valuations, ambient, out, oracle.into_ledger())
}

fn recurse(
    oracle: &mut Oracle<'_>,
    players: &[usize],
    x: &Subcake,
    out: &mut [Option<Subcake>],
) -> Result<()> {
    let n = players.len();
    if n == 1 {
        out[players[0]] = Some(x.clone());
        return Ok(());
    }
    let boundary = equal_cut_boundary(oracle, players[0], x, n)?;
    let round = build_round(oracle, players, x, boundary)?;
    let alloc = find_maximal_allocation(&round.matrix)?;
    if alloc.is_empty() {
        return Err(Error::Internal("no nonempty maximal allocation".into()));
    }
    // the cutter's value of any piece, the yardstick for serving now
    let reference = &round.totals[0] / Rational::from_integer(n.into());

    let mut matched = vec![false; n];
    let mut piece_used = vec![false; round.pieces.len()];
    let mut held_back: Vec<(usize, usize)> = Vec::new(); // (local, piece)
    for &(piece, local) in alloc.pairs() {
        matched[local] = true;
        piece_used[piece] = true;
        let uniform = alloc
            .pairs()
            .iter()
            .all(|&(j, _)| round.values[local][j] == reference);
        if uniform {
            out[players[local]] = Some(round.pieces[piece].clone());
        } else {
            held_back.push((local, piece));
        }
    }

    // regroup held-back players by identical evaluation rows; each group
    // shares the union of the pieces matched to its members
    let locals: Vec<usize> = held_back.iter().map(|&(l, _)| l).collect();
    let rows: Vec<Vec<Rational>> = locals.iter().map(|&l| round.values[l].clone()).collect();
    for group in group_by_evaluation_vector(&locals, &rows) {
        let subcake = group.iter().fold(Subcake::empty(), |acc, &l| {
            let piece = held_back
                .iter()
                .find(|&&(hl, _)| hl == l)
                .map(|&(_, p)| p)
                .expect("held-back member has a matched piece");
            acc.union(&round.pieces[piece])
        });
        let group_players: Vec<usize> = group.iter().map(|&l| players[l]).collect();
        recurse(oracle, &group_players, &subcake, out)?;
    }

    let rest: Vec<usize> = players
        .iter()
        .enumerate()
        .filter(|(local, _)| !matched[*local])
        .map(|(_, &p)| p)
        .collect();
    let remainder = round
        .pieces
        .iter()
        .enumerate()
        .filter(|(j, _)| !piece_used[*j])
        .fold(Subcake::empty(), |acc, (_, p)| acc.union(p));
    if rest.is_empty() {
        if !remainder.total_length().is_zero() {
            return Err(Error::Internal(
                "all players matched but cake is left over".into(),
            ));
        }
        return Ok(());
    }
    recurse(oracle, &rest, &remainder, out)
}
