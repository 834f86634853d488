//! Symmetrization of an envy-free procedure.
//!
//! The base procedure runs once per input permutation (the runs are
//! independent and execute in parallel); each run's pieces are credited
//! back to the original players, giving one candidate partition per
//! permutation. Among the candidates the minimal ones under the graded
//! order survive, then the minimal ones under the lexicographic word
//! order, and the first-computed survivor is returned. Envy-freeness of
//! the base makes every player indifferent between the survivors, which
//! is what makes the result independent of the input order.

use itertools::Itertools;
use rayon::prelude::*;

use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::QueryLedger;
use crate::orders::{select_minimal, Partition};
use crate::protocols::{cut_and_choose, finish_division, selfridge_conway, Division};
use crate::valuation::Valuation;

/// Symmetric and envy-free division with the stock bases: trivial for one
/// player, cut-and-choose for two, the three-player envy-free procedure
/// for three. Larger instances are refused.
pub fn symmetric_envy_free(valuations: &[Valuation]) -> Result<Division> {
    match valuations.len() {
        1 => symmetric_envy_free_with(valuations, |vs| {
            finish_division(
                "trivial",
                vs,
                &Subcake::unit(),
                vec![Some(Subcake::unit())],
                QueryLedger::new(),
            )
        }),
        2 => symmetric_envy_free_with(valuations, |vs| cut_and_choose(&vs[0], &vs[1])),
        3 => symmetric_envy_free_with(valuations, |vs| selfridge_conway(&vs[0], &vs[1], &vs[2])),
        n => Err(Error::Capability {
            algorithm: "sym-envy-free".into(),
            players: n,
        }),
    }
}

/// Symmetrize a caller-supplied deterministic envy-free procedure.
pub fn symmetric_envy_free_with<F>(valuations: &[Valuation], base: F) -> Result<Division>
where
    F: Fn(&[Valuation]) -> Result<Division> + Sync,
{
    let n = valuations.len();
    if n == 0 {
        return Err(Error::Capability {
            algorithm: "sym-envy-free".into(),
            players: 0,
        });
    }
    let permutations: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let runs: Vec<(Vec<usize>, Division)> = permutations
        .into_par_iter()
        .map(|perm| {
            let reordered: Vec<Valuation> = perm.iter().map(|&p| valuations[p].clone()).collect();
            let division = base(&reordered)?;
            if division.player_count() != n {
                return Err(Error::Internal(
                    "base procedure returned a wrong-sized division".into(),
                ));
            }
            Ok((perm, division))
        })
        .collect::<Result<_>>()?;

    let candidates: Vec<Partition> = runs
        .iter()
        .map(|(perm, division)| {
            let mut pieces = vec![Subcake::empty(); n];
            for (position, &original) in perm.iter().enumerate() {
                pieces[original] = division.pieces[position].clone();
            }
            Partition::new(pieces)
        })
        .collect();
    let survivors = select_minimal(&candidates)?;
    let winner = survivors[0];

    let mut ledger = QueryLedger::new();
    for (perm, division) in &runs {
        ledger.absorb_remapped(&division.ledger, perm);
    }
    let pieces = candidates[winner]
        .pieces()
        .iter()
        .cloned()
        .map(Some)
        .collect();
    finish_division(
        "sym-envy-free",
        valuations,
        &Subcake::unit(),
        pieces,
        ledger,
    )
}
