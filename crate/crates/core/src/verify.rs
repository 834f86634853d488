//! Ground-truth fairness verifiers.
//!
//! Everything here works by direct integration of the valuations; no
//! verifier ever touches a query ledger, so checking a division cannot
//! perturb its accounting. All comparisons are exact.

use std::str::FromStr;

use rayon::prelude::*;

use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::protocols::{Algorithm, Division};
use crate::rational::Rational;
use crate::valuation::Valuation;
use itertools::Itertools;

/// A failed check always carries the two offending values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub player_a: usize,
    pub player_b: usize,
    pub value_a: Rational,
    pub value_b: Rational,
}

#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub property: Property,
    pub pass: bool,
    pub witness: Option<PairWitness>,
    pub detail: Option<String>,
}

impl PropertyCheck {
    fn pass(property: Property) -> Self {
        PropertyCheck {
            property,
            pass: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(property: Property, witness: PairWitness) -> Self {
        PropertyCheck {
            property,
            pass: false,
            witness: Some(witness),
            detail: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Proportional,
    EnvyFree,
    Equitable,
    Aristotelian,
    QueryBound,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Proportional,
        Property::EnvyFree,
        Property::Equitable,
        Property::Aristotelian,
        Property::QueryBound,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Proportional => "proportional",
            Property::EnvyFree => "envy-free",
            Property::Equitable => "equitable",
            Property::Aristotelian => "aristotelian",
            Property::QueryBound => "query-bound",
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| Error::Schema(format!("unknown property {s:?}")))
    }
}

fn check_shape(pieces: &[Subcake], valuations: &[Valuation]) -> Result<()> {
    if pieces.len() != valuations.len() {
        return Err(Error::Schema(format!(
            "{} pieces for {} players",
            pieces.len(),
            valuations.len()
        )));
    }
    Ok(())
}

/// Everyone gets at least a 1/n share of the whole divided cake by their
/// own measure.
pub fn check_proportional(pieces: &[Subcake], valuations: &[Valuation]) -> Result<PropertyCheck> {
    check_shape(pieces, valuations)?;
    let n = Rational::from_integer(pieces.len().into());
    let ambient = pieces.iter().fold(Subcake::empty(), |acc, p| acc.union(p));
    for (i, v) in valuations.iter().enumerate() {
        let own = v.measure(&pieces[i]);
        let share = v.measure(&ambient) / &n;
        if own < share {
            return Ok(PropertyCheck::fail(
                Property::Proportional,
                PairWitness {
                    player_a: i,
                    player_b: i,
                    value_a: own,
                    value_b: share,
                },
            ));
        }
    }
    Ok(PropertyCheck::pass(Property::Proportional))
}

/// Nobody values another player's piece above their own.
pub fn check_envy_free(pieces: &[Subcake], valuations: &[Valuation]) -> Result<PropertyCheck> {
    check_shape(pieces, valuations)?;
    for (i, v) in valuations.iter().enumerate() {
        let own = v.measure(&pieces[i]);
        for (j, piece) in pieces.iter().enumerate() {
            if i == j {
                continue;
            }
            let other = v.measure(piece);
            if own < other {
                return Ok(PropertyCheck::fail(
                    Property::EnvyFree,
                    PairWitness {
                        player_a: i,
                        player_b: j,
                        value_a: own,
                        value_b: other,
                    },
                ));
            }
        }
    }
    Ok(PropertyCheck::pass(Property::EnvyFree))
}

/// Everyone assigns the same value to their own piece.
pub fn check_equitable(pieces: &[Subcake], valuations: &[Valuation]) -> Result<PropertyCheck> {
    check_shape(pieces, valuations)?;
    let values: Vec<Rational> = valuations
        .iter()
        .zip(pieces)
        .map(|(v, p)| v.measure(p))
        .collect();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] != values[j] {
                return Ok(PropertyCheck::fail(
                    Property::Equitable,
                    PairWitness {
                        player_a: i,
                        player_b: j,
                        value_a: values[i].clone(),
                        value_b: values[j].clone(),
                    },
                ));
            }
        }
    }
    Ok(PropertyCheck::pass(Property::Equitable))
}

/// Players with structurally equal measures receive equal values. Measure
/// equality is decided on the normalized density representation.
pub fn check_aristotelian(pieces: &[Subcake], valuations: &[Valuation]) -> Result<PropertyCheck> {
    check_shape(pieces, valuations)?;
    let values: Vec<Rational> = valuations
        .iter()
        .zip(pieces)
        .map(|(v, p)| v.measure(p))
        .collect();
    for i in 0..valuations.len() {
        for j in i + 1..valuations.len() {
            if valuations[i] == valuations[j] && values[i] != values[j] {
                return Ok(PropertyCheck::fail(
                    Property::Aristotelian,
                    PairWitness {
                        player_a: i,
                        player_b: j,
                        value_a: values[i].clone(),
                        value_b: values[j].clone(),
                    },
                ));
            }
        }
    }
    Ok(PropertyCheck::pass(Property::Aristotelian))
}

/// Worst-case primitive-query bound for the equal-treatment protocol on n
/// players: the first round pays n^2, every later round with eta players
/// pays eta(eta + 1).
pub fn aristo_query_bound(n: u64) -> u64 {
    n * n + n * (n - 1) * (2 * n - 1) / 6 + n * (n - 1) / 2
}

/// Worst-case primitive-query bound for the symmetric protocol: a round
/// with eta players pays at most 2*eta^2 cuts plus eta(eta-1) evals, and
/// round sizes along any recursion chain sum to at most n.
pub fn sym_prop_query_bound(n: u64) -> u64 {
    (1..=n).map(|eta| 2 * eta * eta + eta * (eta - 1)).sum()
}

/// Compare a query total against the closed-form bound for an algorithm.
/// Only the two round-based procedures carry a bound.
pub fn check_query_bound_counts(
    algorithm: &str,
    players: usize,
    total: usize,
) -> Result<PropertyCheck> {
    let n = players as u64;
    let bound = match algorithm {
        "aristoprop" => aristo_query_bound(n),
        "symprop" => sym_prop_query_bound(n),
        other => {
            return Err(Error::Schema(format!(
                "no query bound is defined for {other:?}"
            )))
        }
    };
    let total = total as u64;
    let mut check = if total <= bound {
        PropertyCheck::pass(Property::QueryBound)
    } else {
        PropertyCheck::fail(
            Property::QueryBound,
            PairWitness {
                player_a: 0,
                player_b: 0,
                value_a: Rational::from_integer(total.into()),
                value_b: Rational::from_integer(bound.into()),
            },
        )
    };
    check.detail = Some(format!("{total} primitive queries, bound {bound}"));
    Ok(check)
}

pub fn check_query_bound(division: &Division) -> Result<PropertyCheck> {
    check_query_bound_counts(
        &division.algorithm,
        division.player_count(),
        division.ledger.total(),
    )
}

/// Exact per-player value table plus the verdicts for a set of properties.
#[derive(Debug, Clone)]
pub struct FairnessReport {
    pub values: Vec<Rational>,
    pub checks: Vec<PropertyCheck>,
    pub eval_count: usize,
    pub cut_count: usize,
}

impl FairnessReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn report(
    division: &Division,
    valuations: &[Valuation],
    properties: &[Property],
) -> Result<FairnessReport> {
    report_for_pieces(
        &division.algorithm,
        &division.pieces,
        valuations,
        division.ledger.eval_count(),
        division.ledger.cut_count(),
        properties,
    )
}

/// As [`report`], for divisions read back from files where only the query
/// counts survive.
pub fn report_for_pieces(
    algorithm: &str,
    pieces: &[Subcake],
    valuations: &[Valuation],
    eval_count: usize,
    cut_count: usize,
    properties: &[Property],
) -> Result<FairnessReport> {
    let mut checks = Vec::with_capacity(properties.len());
    for property in properties {
        let check = match property {
            Property::Proportional => check_proportional(pieces, valuations)?,
            Property::EnvyFree => check_envy_free(pieces, valuations)?,
            Property::Equitable => check_equitable(pieces, valuations)?,
            Property::Aristotelian => check_aristotelian(pieces, valuations)?,
            Property::QueryBound => {
                check_query_bound_counts(algorithm, pieces.len(), eval_count + cut_count)?
            }
        };
        checks.push(check);
    }
    let values = valuations
        .iter()
        .zip(pieces)
        .map(|(v, p)| v.measure(p))
        .collect();
    Ok(FairnessReport {
        values,
        checks,
        eval_count,
        cut_count,
    })
}

/// Guard for the factorial sweep below.
pub const DEFAULT_SYMMETRY_GUARD: usize = 7;

#[derive(Debug, Clone)]
pub struct SymmetryWitness {
    pub player: usize,
    pub permutation: Vec<usize>,
    pub baseline: Rational,
    pub observed: Rational,
}

/// The full permutation sweep: per input order, the exact value credited
/// back to each original player.
#[derive(Debug, Clone)]
pub struct SymmetryCheck {
    pub pass: bool,
    pub witness: Option<SymmetryWitness>,
    pub orders: Vec<(Vec<usize>, Vec<Rational>)>,
}

/// Run the algorithm on every input order and compare, per original
/// player, the exact value received. Orders run in parallel; the result
/// is aggregated in lexicographic permutation order.
pub fn check_symmetric(
    algorithm: Algorithm,
    valuations: &[Valuation],
    guard: usize,
) -> Result<SymmetryCheck> {
    let n = valuations.len();
    if n > guard {
        return Err(Error::Capability {
            algorithm: format!("symmetry sweep over {}", algorithm.name()),
            players: n,
        });
    }
    let permutations: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let orders: Vec<(Vec<usize>, Vec<Rational>)> = permutations
        .into_par_iter()
        .map(|perm| {
            let reordered: Vec<Valuation> = perm.iter().map(|&p| valuations[p].clone()).collect();
            let division = algorithm.run(&reordered)?;
            let mut credited = vec![Rational::from_integer(0.into()); n];
            for (position, &original) in perm.iter().enumerate() {
                credited[original] = division.values[position].clone();
            }
            Ok((perm, credited))
        })
        .collect::<Result<_>>()?;

    let baseline = &orders[0].1;
    for (perm, values) in &orders[1..] {
        for player in 0..n {
            if values[player] != baseline[player] {
                return Ok(SymmetryCheck {
                    pass: false,
                    witness: Some(SymmetryWitness {
                        player,
                        permutation: perm.clone(),
                        baseline: baseline[player].clone(),
                        observed: values[player].clone(),
                    }),
                    orders,
                });
            }
        }
    }
    Ok(SymmetryCheck {
        pass: true,
        witness: None,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn thirds() -> Vec<Subcake> {
        vec![
            Subcake::unit().intersect_window(&rat(0, 1), &rat(1, 3)),
            Subcake::unit().intersect_window(&rat(1, 3), &rat(2, 3)),
            Subcake::unit().intersect_window(&rat(2, 3), &rat(1, 1)),
        ]
    }

    #[test]
    fn proportional_pass_and_fail() {
        let vs = vec![Valuation::lebesgue(); 3];
        assert!(check_proportional(&thirds(), &vs).unwrap().pass);

        let starved = vec![Subcake::empty(), Subcake::unit()];
        let vs = vec![Valuation::lebesgue(); 2];
        let check = check_proportional(&starved, &vs).unwrap();
        assert!(!check.pass);
        let w = check.witness.unwrap();
        assert_eq!(w.player_a, 0);
        assert_eq!(w.value_a, rat(0, 1));
        assert_eq!(w.value_b, rat(1, 2));
    }

    #[test]
    fn envy_free_vacuous_for_one_player() {
        let vs = vec![Valuation::lebesgue()];
        let pieces = vec![Subcake::unit()];
        assert!(check_envy_free(&pieces, &vs).unwrap().pass);
    }

    #[test]
    fn aristotelian_vacuous_without_duplicates() {
        let vs = vec![
            Valuation::lebesgue(),
            Valuation::uniform_on(rat(0, 1), rat(1, 2)).unwrap(),
        ];
        let pieces = vec![
            Subcake::unit().intersect_window(&rat(1, 2), &rat(1, 1)),
            Subcake::unit().intersect_window(&rat(0, 1), &rat(1, 2)),
        ];
        assert!(check_aristotelian(&pieces, &vs).unwrap().pass);
    }

    #[test]
    fn bounds_evaluate_to_the_pinned_numbers() {
        assert_eq!(aristo_query_bound(3), 17);
        assert_eq!(aristo_query_bound(4), 36);
        assert_eq!(sym_prop_query_bound(1), 2);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let vs = vec![Valuation::lebesgue(); 2];
        assert!(check_proportional(&[Subcake::unit()], &vs).is_err());
    }
}
