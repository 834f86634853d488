//! Kuhn's allocation protocol: the first player cuts the current cake into
//! equal shares, a maximal allocation hands pieces to the players it
//! matches, and the rest of the cake goes to the unmatched players by the
//! same method.

use crate::allocation::find_maximal_allocation;
use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::protocols::rounds::{build_round, equal_cut_boundary};
use crate::protocols::{finish_division, oracle_for, require_players, Division};
use crate::valuation::Valuation;

pub fn kuhn(valuations: &[Valuation]) -> Result<Division> {
    require_players("kuhn", valuations)?;
    let ambient = Subcake::unit();
    let mut oracle = oracle_for(valuations);
    let players: Vec<usize> = (0..valuations.len()).collect();
    let mut out = vec![None; valuations.len()];
    recurse(&mut oracle, &players, &ambient, &mut out)?;
    finish_division("kuhn", valuations, &ambient, out, oracle.into_ledger())
}

fn recurse(
    oracle: &mut Oracle<'_>,
    players: &[usize],
    x: &Subcake,
    out: &mut [Option<Subcake>],
) -> Result<()> {
    if players.len() == 1 {
        out[players[0]] = Some(x.clone());
        return Ok(());
    }
    let boundary = equal_cut_boundary(oracle, players[0], x, players.len())?;
    let round = build_round(oracle, players, x, boundary)?;
    let alloc = find_maximal_allocation(&round.matrix)?;
    if alloc.is_empty() {
        return Err(Error::Internal("no nonempty maximal allocation".into()));
    }
    let mut matched = vec![false; players.len()];
    let mut piece_used = vec![false; round.pieces.len()];
    for &(piece, local) in alloc.pairs() {
        out[players[local]] = Some(round.pieces[piece].clone());
        matched[local] = true;
        piece_used[piece] = true;
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
        if !remainder.is_empty() {
            return Err(Error::Internal(
                "all players matched but cake is left over".into(),
            ));
        }
        return Ok(());
    }
    recurse(oracle, &rest, &remainder, out)
}
