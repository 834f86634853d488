//! Division procedures.
//!
//! Every procedure consumes an ordered list of valuations (the order is
//! semantically significant: several baselines are deliberately
//! order-dependent), runs a sequence of mediated queries, and returns a
//! [`Division`]: one subcake per player, the exact value each player
//! assigns to their own piece, and the full query ledger.

mod aristo;
mod baselines;
mod kuhn;
mod rounds;
mod selfridge;
mod symprop;
mod wrapper;

pub use aristo::{aristo_prop, aristo_prop_on};
pub use baselines::{cut_and_choose, even_paz, last_diminisher};
pub use kuhn::kuhn;
pub use selfridge::selfridge_conway;
pub use symprop::{sym_prop, sym_prop_on, sym_prop_traced, SymRound};
pub use wrapper::{symmetric_envy_free, symmetric_envy_free_with};

use std::fmt;
use std::str::FromStr;

use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::oracle::{Oracle, QueryLedger};
use crate::rational::Rational;
use crate::valuation::Valuation;

/// Outcome of one protocol run: piece and exact self-value per input
/// position, plus the primitive-query ledger. Self-values are computed by
/// direct integration, outside the ledger.
#[derive(Debug, Clone)]
pub struct Division {
    pub algorithm: String,
    pub pieces: Vec<Subcake>,
    pub values: Vec<Rational>,
    pub ledger: QueryLedger,
}

impl Division {
    pub fn player_count(&self) -> usize {
        self.pieces.len()
    }

    /// Union of all pieces.
    pub fn ambient(&self) -> Subcake {
        self.pieces
            .iter()
            .fold(Subcake::empty(), |acc, p| acc.union(p))
    }
}

/// Check that the assigned pieces exactly tile the ambient subcake, then
/// package the division.
pub(crate) fn finish_division(
    algorithm: &str,
    valuations: &[Valuation],
    ambient: &Subcake,
    pieces: Vec<Option<Subcake>>,
    ledger: QueryLedger,
) -> Result<Division> {
    let mut assigned: Vec<Subcake> = Vec::with_capacity(pieces.len());
    for (i, piece) in pieces.into_iter().enumerate() {
        assigned.push(
            piece.ok_or_else(|| Error::Internal(format!("player {i} left without a piece")))?,
        );
    }
    let union = assigned
        .iter()
        .fold(Subcake::empty(), |acc, p| acc.union(p));
    if &union != ambient {
        return Err(Error::Internal("pieces do not tile the cake".into()));
    }
    // disjointness: lengths are exact, so any overlap would make the sum
    // of piece lengths exceed the union's length
    let length_sum = assigned
        .iter()
        .fold(Rational::from_integer(0.into()), |acc, p| {
            acc + p.total_length()
        });
    if length_sum != union.total_length() {
        return Err(Error::Internal("pieces overlap".into()));
    }
    let values = valuations
        .iter()
        .zip(&assigned)
        .map(|(v, p)| v.measure(p))
        .collect();
    Ok(Division {
        algorithm: algorithm.to_string(),
        pieces: assigned,
        values,
        ledger,
    })
}

/// Group player indices by exact equality of their full evaluation rows.
/// Groups are ordered by smallest member and keep member order.
pub fn group_by_evaluation_vector(players: &[usize], rows: &[Vec<Rational>]) -> Vec<Vec<usize>> {
    debug_assert_eq!(players.len(), rows.len());
    let mut groups: Vec<(&Vec<Rational>, Vec<usize>)> = Vec::new();
    for (&p, row) in players.iter().zip(rows) {
        match groups.iter_mut().find(|(r, _)| *r == row) {
            Some((_, members)) => members.push(p),
            None => groups.push((row, vec![p])),
        }
    }
    groups.sort_by_key(|(_, members)| *members.iter().min().expect("nonempty group"));
    groups.into_iter().map(|(_, members)| members).collect()
}

/// The division procedures exposed to callers and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    CutAndChoose,
    LastDiminisher,
    EvenPaz,
    SelfridgeConway,
    Kuhn,
    AristoProp,
    SymProp,
    SymEnvyFree,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::CutAndChoose,
        Algorithm::LastDiminisher,
        Algorithm::EvenPaz,
        Algorithm::SelfridgeConway,
        Algorithm::Kuhn,
        Algorithm::AristoProp,
        Algorithm::SymProp,
        Algorithm::SymEnvyFree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::CutAndChoose => "cut-and-choose",
            Algorithm::LastDiminisher => "last-diminisher",
            Algorithm::EvenPaz => "even-paz",
            Algorithm::SelfridgeConway => "selfridge-conway",
            Algorithm::Kuhn => "kuhn",
            Algorithm::AristoProp => "aristoprop",
            Algorithm::SymProp => "symprop",
            Algorithm::SymEnvyFree => "sym-envy-free",
        }
    }

    pub fn supports(&self, players: usize) -> bool {
        match self {
            Algorithm::CutAndChoose => players == 2,
            Algorithm::SelfridgeConway => players == 3,
            Algorithm::SymEnvyFree => (1..=3).contains(&players),
            _ => players >= 1,
        }
    }

    pub fn run(&self, valuations: &[Valuation]) -> Result<Division> {
        let n = valuations.len();
        if !self.supports(n) {
            return Err(Error::Capability {
                algorithm: self.name().to_string(),
                players: n,
            });
        }
        match self {
            Algorithm::CutAndChoose => cut_and_choose(&valuations[0], &valuations[1]),
            Algorithm::LastDiminisher => last_diminisher(valuations),
            Algorithm::EvenPaz => even_paz(valuations),
            Algorithm::SelfridgeConway => {
                selfridge_conway(&valuations[0], &valuations[1], &valuations[2])
            }
            Algorithm::Kuhn => kuhn(valuations),
            Algorithm::AristoProp => aristo_prop(valuations),
            Algorithm::SymProp => sym_prop(valuations),
            Algorithm::SymEnvyFree => symmetric_envy_free(valuations),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .iter()
            .find(|a| a.name() == s)
            .copied()
            .ok_or_else(|| Error::Schema(format!("unknown algorithm {s:?}")))
    }
}

/// Shared guard: a protocol run needs at least one player.
pub(crate) fn require_players(algorithm: &str, valuations: &[Valuation]) -> Result<()> {
    if valuations.is_empty() {
        return Err(Error::Capability {
            algorithm: algorithm.to_string(),
            players: 0,
        });
    }
    Ok(())
}

/// Fresh oracle over the given players.
pub(crate) fn oracle_for(valuations: &[Valuation]) -> Oracle<'_> {
    Oracle::new(valuations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn grouping_by_rows() {
        let rows = vec![
            vec![rat(1, 3), rat(1, 3), rat(1, 3)],
            vec![rat(1, 3), rat(1, 3), rat(1, 3)],
            vec![rat(1, 2), rat(1, 4), rat(1, 4)],
        ];
        let groups = group_by_evaluation_vector(&[0, 1, 2], &rows);
        assert_eq!(groups, vec![vec![0, 1], vec![2]]);

        let distinct = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 3), rat(2, 3)]];
        assert_eq!(
            group_by_evaluation_vector(&[5, 9], &distinct),
            vec![vec![5], vec![9]]
        );

        let same = vec![vec![rat(1, 1)], vec![rat(1, 1)]];
        assert_eq!(group_by_evaluation_vector(&[2, 7], &same), vec![vec![2, 7]]);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("moving-knife".parse::<Algorithm>().is_err());
    }
}
