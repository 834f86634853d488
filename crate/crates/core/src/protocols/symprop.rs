//! Symmetric proportional division.
//!
//! Every player cuts the current subcake into equal shares; the smallest
//! cut vector under the graded order fixes the round's pieces, so the
//! partition does not depend on the input order. All maximal allocations
//! are enumerated. Within an allocation, the players whose own cut vector
//! equals the chosen one form its served set; the allocation minimizing
//! the binary piece weight of that set is selected, and the binary support
//! of that minimum — which is unique even when several allocations attain
//! it — determines which pieces are handed out this round. Remaining
//! matched players are regrouped by identical evaluation rows exactly as
//! in the equal-treatment protocol, and unmatched players recurse on the
//! unmatched remainder.
//!
//! Among allocations with the same minimal weight the implementation picks
//! the smallest under a content key (matched pieces paired with the
//! matched players' evaluation rows). Two allocations that tie on that key
//! differ only by exchanging players with identical rows, who end up in
//! the same recursion group either way, so the per-player values are a
//! function of the multiset of measures alone.

use num_traits::Zero;

use crate::allocation::{enumerate_maximal_allocations, Allocation};
use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::orders::graded_compare;
use crate::protocols::rounds::{build_round, equal_cut_boundary, Round};
use crate::protocols::{
    finish_division, group_by_evaluation_vector, oracle_for, require_players, Division,
};
use crate::rational::Rational;
use crate::valuation::Valuation;

/// Matched pieces paired with their players' evaluation rows; the
/// order-independent tie-break key among minimal-weight allocations.
type ContentKey = Vec<(usize, Vec<Rational>)>;

/// What one recursion round saw and did; used by demos and diagnostics.
#[derive(Debug, Clone)]
pub struct SymRound {
    /// Original indices of the players active in this round.
    pub players: Vec<usize>,
    /// The chosen minimal cut vector, endpoints included.
    pub boundary: Vec<Rational>,
    /// Number of maximal allocations considered.
    pub allocation_count: usize,
    /// Number of distinct matched-piece subsets among them.
    pub piece_subset_count: usize,
    /// `(original player, round piece index)` pairs served now.
    pub served: Vec<(usize, usize)>,
    /// Matched players who value every piece at exactly one share but whose
    /// cut vector differs from the chosen one. They are not served this
    /// round; with leftmost cuts over vanishing density the two readings
    /// can genuinely disagree.
    pub value_vector_disagreement: Vec<usize>,
}

pub fn sym_prop(valuations: &[Valuation]) -> Result<Division> {
    sym_prop_on(valuations, &Subcake::unit())
}

pub fn sym_prop_on(valuations: &[Valuation], ambient: &Subcake) -> Result<Division> {
    run(valuations, ambient).map(|(d, _)| d)
}

/// As [`sym_prop`], additionally returning the per-round trace.
pub fn sym_prop_traced(valuations: &[Valuation]) -> Result<(Division, Vec<SymRound>)> {
    run(valuations, &Subcake::unit())
}

fn run(valuations: &[Valuation], ambient: &Subcake) -> Result<(Division, Vec<SymRound>)> {
    require_players("symprop", valuations)?;
    let mut oracle = oracle_for(valuations);
    oracle.prime_subcake_all(ambient);
    let players: Vec<usize> = (0..valuations.len()).collect();
    let mut out = vec![None; valuations.len()];
    let mut trace = Vec::new();
    recurse(&mut oracle, &players, ambient, &mut out, &mut trace)?;
    let division = finish_division("symprop", valuations, ambient, out, oracle.into_ledger())?;
    Ok((division, trace))
}

fn recurse(
    oracle: &mut Oracle<'_>,
    players: &[usize],
    x: &Subcake,
    out: &mut [Option<Subcake>],
    trace: &mut Vec<SymRound>,
) -> Result<()> {
    let n = players.len();
    if n == 1 {
        let boundary = vec![
            x.min_point()
                .ok_or_else(|| Error::Internal("serving an empty subcake".into()))?
                .clone(),
            x.max_point().expect("nonempty subcake").clone(),
        ];
        out[players[0]] = Some(x.clone());
        trace.push(SymRound {
            players: players.to_vec(),
            boundary,
            allocation_count: 1,
            piece_subset_count: 1,
            served: vec![(players[0], 0)],
            value_vector_disagreement: Vec::new(),
        });
        return Ok(());
    }

    let vectors: Vec<Vec<Rational>> = players
        .iter()
        .map(|&p| equal_cut_boundary(oracle, p, x, n))
        .collect::<Result<_>>()?;
    let boundary = vectors
        .iter()
        .min_by(|a, b| graded_compare(a, b))
        .expect("at least one vector")
        .clone();
    let round = build_round(oracle, players, x, boundary.clone())?;
    let set = enumerate_maximal_allocations(&round.matrix)?;
    if set.cardinality() == 0 {
        return Err(Error::Internal("no nonempty maximal allocation".into()));
    }

    let weight_of = |alloc: &Allocation| -> u64 {
        alloc
            .pairs()
            .iter()
            .filter(|&&(_, local)| vectors[local] == boundary)
            .map(|&(piece, _)| 1u64 << (piece + 1))
            .sum()
    };
    let min_weight = set
        .allocations()
        .iter()
        .map(weight_of)
        .min()
        .expect("nonempty allocation set");

    let content_key = |alloc: &Allocation| -> ContentKey {
        alloc
            .pairs()
            .iter()
            .map(|&(piece, local)| (piece, round.values[local].clone()))
            .collect()
    };
    let mut chosen: Option<(&Allocation, ContentKey)> = None;
    for alloc in set.allocations() {
        if weight_of(alloc) != min_weight {
            continue;
        }
        let key = content_key(alloc);
        match &chosen {
            Some((_, best)) if *best <= key => {}
            _ => chosen = Some((alloc, key)),
        }
    }
    let (chosen, _) = chosen.expect("some allocation attains the minimal weight");

    let mut matched = vec![false; n];
    let mut piece_used = vec![false; round.pieces.len()];
    let mut served = Vec::new();
    let mut held_back: Vec<(usize, usize)> = Vec::new();
    for &(piece, local) in chosen.pairs() {
        matched[local] = true;
        piece_used[piece] = true;
        if min_weight & (1u64 << (piece + 1)) != 0 {
            out[players[local]] = Some(round.pieces[piece].clone());
            served.push((players[local], piece));
        } else {
            held_back.push((local, piece));
        }
    }

    let disagreement = diagnose_value_vector_split(players, &vectors, &boundary, &round, chosen);
    trace.push(SymRound {
        players: players.to_vec(),
        boundary: boundary.clone(),
        allocation_count: set.len(),
        piece_subset_count: set.piece_subset_count(),
        served,
        value_vector_disagreement: disagreement,
    });

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
        recurse(oracle, &group_players, &subcake, out, trace)?;
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
    recurse(oracle, &rest, &remainder, out, trace)
}

fn diagnose_value_vector_split(
    players: &[usize],
    vectors: &[Vec<Rational>],
    boundary: &[Rational],
    round: &Round,
    chosen: &Allocation,
) -> Vec<usize> {
    let n = players.len();
    let mut out = Vec::new();
    for &(_, local) in chosen.pairs() {
        let share = &round.totals[local] / Rational::from_integer(n.into());
        let flat_values = round.values[local].iter().all(|v| *v == share);
        if flat_values && vectors[local] != boundary {
            out.push(players[local]);
        }
    }
    out
}
