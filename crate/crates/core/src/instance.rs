//! Named collections of valuations: validation, a deterministic seeded
//! generator, and the hand-built instances used by the demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cake::Interval;
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::valuation::Valuation;

/// One division problem: players in input order, each with a name and a
/// measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    names: Vec<String>,
    valuations: Vec<Valuation>,
}

impl Instance {
    pub fn new(players: Vec<(String, Valuation)>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Schema(
                "an instance needs at least one player".into(),
            ));
        }
        let mut names = Vec::with_capacity(players.len());
        let mut valuations = Vec::with_capacity(players.len());
        for (name, v) in players {
            if name.is_empty() {
                return Err(Error::Schema("empty player name".into()));
            }
            if names.contains(&name) {
                return Err(Error::Schema(format!("duplicate player name {name:?}")));
            }
            names.push(name);
            valuations.push(v);
        }
        Ok(Instance { names, valuations })
    }

    pub fn player_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn position_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Deterministic generator: `segments` density pieces with random rational
/// breakpoints of bounded denominator and small integer weights, normalized
/// to mass exactly 1. `duplicates >= 2` makes the first `duplicates`
/// players structurally identical copies of player one.
pub fn generate(n: usize, segments: usize, seed: u64, duplicates: usize) -> Result<Instance> {
    if n == 0 {
        return Err(Error::Schema("cannot generate an empty instance".into()));
    }
    if segments == 0 {
        return Err(Error::Schema("valuations need at least one segment".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut players = Vec::with_capacity(n);
    for i in 0..n {
        let v = random_valuation(&mut rng, segments);
        players.push((format!("p{}", i + 1), v));
    }
    let copies = duplicates.min(n);
    if copies >= 2 {
        let template = players[0].1.clone();
        for player in players.iter_mut().take(copies).skip(1) {
            player.1 = template.clone();
        }
    }
    Instance::new(players)
}

fn random_valuation(rng: &mut ChaCha8Rng, segments: usize) -> Valuation {
    let mut points: Vec<Rational> = Vec::new();
    while points.len() < segments - 1 {
        let q = rng.gen_range(2..=40i64);
        let p = rng.gen_range(1..q);
        let r = rat(p, q);
        if !points.contains(&r) {
            points.push(r);
        }
    }
    points.sort();
    let mut bounds = vec![rat(0, 1)];
    bounds.extend(points);
    bounds.push(rat(1, 1));

    let mut weights: Vec<i64> = (0..segments).map(|_| rng.gen_range(0..=8)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let total: Rational = bounds
        .windows(2)
        .zip(&weights)
        .map(|(w, &wt)| (&w[1] - &w[0]) * rat(wt, 1))
        .sum();
    let segments: Vec<(Interval, Rational)> = bounds
        .windows(2)
        .zip(&weights)
        .filter(|(_, &wt)| wt > 0)
        .map(|(w, &wt)| {
            (
                Interval::new(w[0].clone(), w[1].clone()).expect("bounds are ordered"),
                rat(wt, 1) / &total,
            )
        })
        .collect();
    Valuation::new(segments).expect("normalized by construction")
}

/// Hand-built instances with exactly pinned numbers.
pub mod fixtures {
    use super::*;

    #[allow(clippy::type_complexity)]
    fn piecewise(parts: &[((i64, i64), (i64, i64), (i64, i64))]) -> Valuation {
        Valuation::new(
            parts
                .iter()
                .map(|&(lo, hi, d)| {
                    (
                        Interval::new(rat(lo.0, lo.1), rat(hi.0, hi.1)).expect("fixture bounds"),
                        rat(d.0, d.1),
                    )
                })
                .collect(),
        )
        .expect("fixture densities normalize to 1")
    }

    /// Four players where the halving protocol treats the two identical
    /// uniform players (one and four) unequally: they end up with 1/4 and
    /// 49/100.
    pub fn even_paz_non_aristotelian() -> Instance {
        let uniform = Valuation::lebesgue();
        let two = piecewise(&[
            ((0, 1), (1, 2), (1, 1)),
            ((1, 2), (3, 4), (3, 2)),
            ((3, 4), (1, 1), (1, 2)),
        ]);
        let three = piecewise(&[
            ((0, 1), (1, 2), (1, 1)),
            ((1, 2), (51, 100), (25, 1)),
            ((51, 100), (1, 1), (25, 49)),
        ]);
        Instance::new(vec![
            ("p1".into(), uniform.clone()),
            ("p2".into(), two),
            ("p3".into(), three),
            ("p4".into(), uniform),
        ])
        .expect("valid fixture")
    }

    /// Three players where the last-diminisher rounds treat the two
    /// identical uniform players (one and two) unequally: 1/3 versus 1/2.
    pub fn last_diminisher_non_aristotelian() -> Instance {
        let uniform = Valuation::lebesgue();
        let three = piecewise(&[
            ((0, 1), (2, 5), (5, 6)),
            ((2, 5), (1, 2), (25, 9)),
            ((1, 2), (1, 1), (7, 9)),
        ]);
        Instance::new(vec![
            ("p1".into(), uniform.clone()),
            ("p2".into(), uniform),
            ("p3".into(), three),
        ])
        .expect("valid fixture")
    }

    /// Everyone uniform.
    pub fn all_lebesgue(n: usize) -> Instance {
        Instance::new(
            (0..n)
                .map(|i| (format!("p{}", i + 1), Valuation::lebesgue()))
                .collect(),
        )
        .expect("valid fixture")
    }

    /// `2n + 1` players: `n` uniform, `n + 1` with all mass concentrated
    /// uniformly on the last `1/(2n+1)` of the cake. The first round's
    /// allocation set has `C(2n, n)` distinct matched-piece subsets.
    pub fn lebesgue_with_concentrated(n: usize) -> Instance {
        let players = 2 * n + 1;
        let lo = rat(2 * n as i64, players as i64);
        let concentrated = Valuation::uniform_on(lo, rat(1, 1)).expect("nonempty support");
        let mut list = Vec::with_capacity(players);
        for i in 0..n {
            list.push((format!("p{}", i + 1), Valuation::lebesgue()));
        }
        for i in n..players {
            list.push((format!("p{}", i + 1), concentrated.clone()));
        }
        Instance::new(list).expect("valid fixture")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_instances() {
        assert!(Instance::new(vec![]).is_err());
        let v = Valuation::lebesgue();
        assert!(Instance::new(vec![("a".into(), v.clone()), ("a".into(), v.clone())]).is_err());
        assert!(Instance::new(vec![("".into(), v)]).is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate(4, 3, 17, 0).unwrap();
        let b = generate(4, 3, 17, 0).unwrap();
        assert_eq!(a, b);
        let c = generate(4, 3, 18, 0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_plants_exact_duplicates() {
        let inst = generate(4, 3, 5, 2).unwrap();
        let vs = inst.valuations();
        assert_eq!(vs[0], vs[1]);
        let equal_pairs = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i < j && vs[i] == vs[j])
            .count();
        assert_eq!(equal_pairs, 1);
    }

    #[test]
    fn fixture_numbers_through_the_oracle() {
        use crate::oracle::Oracle;

        let ep = fixtures::even_paz_non_aristotelian();
        let mut oracle = Oracle::new(ep.valuations());
        // the third player's sliver right of the midpoint
        assert_eq!(
            oracle.eval(2, &rat(1, 2), &rat(51, 100)).unwrap(),
            rat(1, 4)
        );

        let ld = fixtures::last_diminisher_non_aristotelian();
        let mut oracle = Oracle::new(ld.valuations());
        assert_eq!(oracle.cut(2, &rat(0, 1), &rat(1, 3)).unwrap(), rat(2, 5));
        assert_eq!(oracle.cut(2, &rat(1, 3), &rat(1, 3)).unwrap(), rat(1, 2));
        assert_eq!(oracle.ledger().cut_count(), 2);
    }

    #[test]
    fn concentrated_fixture_acceptability_rows() {
        use crate::allocation::AcceptabilityMatrix;

        let inst = fixtures::lebesgue_with_concentrated(2);
        let vs = inst.valuations();
        let bounds: Vec<Rational> = (0..=5).map(|k| rat(k, 5)).collect();
        let values: Vec<Vec<Rational>> = vs
            .iter()
            .map(|v| {
                bounds
                    .windows(2)
                    .map(|w| v.mass_between(&w[0], &w[1]))
                    .collect()
            })
            .collect();
        let totals = vec![rat(1, 1); 5];
        let m = AcceptabilityMatrix::build(values, &totals, 5).unwrap();
        for player in 0..2 {
            for piece in 0..5 {
                assert!(
                    m.accepts(player, piece),
                    "uniform players accept everything"
                );
            }
        }
        for player in 2..5 {
            for piece in 0..4 {
                assert!(!m.accepts(player, piece));
            }
            assert!(m.accepts(player, 4));
        }
    }

    #[test]
    fn fixture_masses_and_pinned_values() {
        let ep = fixtures::even_paz_non_aristotelian();
        assert_eq!(ep.valuations()[0], ep.valuations()[3]);
        // the third player's middle sliver carries a quarter of their mass
        assert_eq!(
            ep.valuations()[2].mass_between(&rat(1, 2), &rat(51, 100)),
            rat(1, 4)
        );

        let ld = fixtures::last_diminisher_non_aristotelian();
        assert_eq!(ld.valuations()[0], ld.valuations()[1]);
        assert_eq!(
            ld.valuations()[2].mass_between(&rat(0, 1), &rat(2, 5)),
            rat(1, 3)
        );
        assert_eq!(
            ld.valuations()[2].mass_between(&rat(1, 3), &rat(1, 2)),
            rat(1, 3)
        );

        let mixed = fixtures::lebesgue_with_concentrated(2);
        assert_eq!(mixed.player_count(), 5);
        assert_eq!(
            mixed.valuations()[4].mass_between(&rat(4, 5), &rat(1, 1)),
            rat(1, 1)
        );
    }
}
