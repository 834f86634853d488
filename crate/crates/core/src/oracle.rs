//! The query oracle: mediated eval/cut queries with exact accounting.
//!
//! Only primitive queries on the full cake are counted. A query relative to
//! a subcake is reduced to at most one primitive eval (for eval) or one
//! eval plus one cut (for cut) by reusing measures already learned during
//! earlier queries; the [`GapCache`] carries that knowledge.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cake::Subcake;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::valuation::{check_coordinate, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Eval,
    Cut,
}

/// One primitive query as issued to a player: `Eval(x, y)` or `Cut(x, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub kind: QueryKind,
    pub player: usize,
    pub from: Rational,
    pub arg: Rational,
}

/// Ordered trace of every primitive query, with per-kind counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    records: Vec<QueryRecord>,
    evals: usize,
    cuts: usize,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval_count(&self) -> usize {
        self.evals
    }

    pub fn cut_count(&self) -> usize {
        self.cuts
    }

    pub fn total(&self) -> usize {
        self.evals + self.cuts
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    fn record(&mut self, kind: QueryKind, player: usize, from: Rational, arg: Rational) {
        match kind {
            QueryKind::Eval => self.evals += 1,
            QueryKind::Cut => self.cuts += 1,
        }
        self.records.push(QueryRecord {
            kind,
            player,
            from,
            arg,
        });
    }

    /// Append another ledger, remapping its player positions through `map`.
    pub fn absorb_remapped(&mut self, other: &QueryLedger, map: &[usize]) {
        for r in &other.records {
            self.record(r.kind, map[r.player], r.from.clone(), r.arg.clone());
        }
    }
}

/// Per-player measure knowledge, stored as cumulative anchors:
/// `anchors[i][p]` is the exact mass of `[0, p]` under player i's measure.
/// Two anchored points give the measure of the interval between them, which
/// is how interval and gap measures from previous rounds are replayed
/// without new queries.
#[derive(Debug, Clone, Default)]
pub struct GapCache {
    anchors: Vec<BTreeMap<Rational, Rational>>,
}

impl GapCache {
    fn with_players(n: usize) -> Self {
        GapCache {
            anchors: vec![BTreeMap::new(); n],
        }
    }

    fn anchor(&mut self, player: usize, point: Rational, cumulative: Rational) {
        let map = &mut self.anchors[player];
        if let Some(existing) = map.get(&point) {
            debug_assert_eq!(existing, &cumulative, "inconsistent anchor at {point}");
            return;
        }
        map.insert(point, cumulative);
    }

    fn cumulative(&self, player: usize, point: &Rational) -> Option<&Rational> {
        self.anchors[player].get(point)
    }

    /// Measure of `[a, b]` when both endpoints are anchored.
    pub fn span(&self, player: usize, a: &Rational, b: &Rational) -> Option<Rational> {
        let fa = self.cumulative(player, a)?;
        let fb = self.cumulative(player, b)?;
        Some(fb - fa)
    }

    pub fn known_points(&self, player: usize) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.anchors[player].iter()
    }
}

/// Mediator-side oracle over a fixed list of players.
pub struct Oracle<'a> {
    valuations: &'a [Valuation],
    ledger: QueryLedger,
    cache: GapCache,
}

impl<'a> Oracle<'a> {
    /// Every measure is normalized, so the mass of the whole cake is known
    /// to the mediator up front and is never charged to the ledger.
    pub fn new(valuations: &'a [Valuation]) -> Self {
        let mut cache = GapCache::with_players(valuations.len());
        for i in 0..valuations.len() {
            cache.anchor(i, Rational::zero(), Rational::zero());
            cache.anchor(i, Rational::one(), Rational::one());
        }
        Oracle {
            valuations,
            ledger: QueryLedger::new(),
            cache,
        }
    }

    pub fn player_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuation(&self, player: usize) -> &Valuation {
        &self.valuations[player]
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn cache(&self) -> &GapCache {
        &self.cache
    }

    /// Primitive eval query: the exact mass of `[x, y]` for one player.
    /// Counts one eval in the ledger.
    pub fn eval(&mut self, player: usize, x: &Rational, y: &Rational) -> Result<Rational> {
        check_coordinate(x)?;
        check_coordinate(y)?;
        if x > y {
            return Err(Error::Domain(format!("eval window [{x}, {y}] is reversed")));
        }
        let v = self.valuations[player].mass_between(x, y);
        self.ledger
            .record(QueryKind::Eval, player, x.clone(), y.clone());
        match (
            self.cache.cumulative(player, x).cloned(),
            self.cache.cumulative(player, y).cloned(),
        ) {
            (Some(fx), None) => self.cache.anchor(player, y.clone(), fx + &v),
            (None, Some(fy)) => self.cache.anchor(player, x.clone(), fy - &v),
            (Some(fx), Some(fy)) => debug_assert_eq!(fy - fx, v),
            (None, None) => {}
        }
        Ok(v)
    }

    /// Primitive cut query: the smallest `y` with mass exactly `a` on
    /// `[x, y]`. Counts one cut in the ledger.
    pub fn cut(&mut self, player: usize, x: &Rational, a: &Rational) -> Result<Rational> {
        check_coordinate(x)?;
        let y = self.valuations[player].leftmost_cut(x, a)?;
        self.ledger
            .record(QueryKind::Cut, player, x.clone(), a.clone());
        match (
            self.cache.cumulative(player, x).cloned(),
            self.cache.cumulative(player, &y).cloned(),
        ) {
            (Some(fx), None) => self.cache.anchor(player, y.clone(), fx + a),
            (None, Some(fy)) => self.cache.anchor(player, x.clone(), fy - a),
            (Some(fx), Some(fy)) => debug_assert_eq!(fy - fx, *a),
            (None, None) => {}
        }
        Ok(y)
    }

    /// Eval relative to a subcake: the exact mass of `[x, y] ∩ X`.
    ///
    /// Needs the measures of X's gaps, which previous rounds anchored.
    /// Issues at most one primitive eval; zero when the answer is already
    /// determined by cached knowledge.
    pub fn subcake_eval(
        &mut self,
        player: usize,
        x: &Subcake,
        lo: &Rational,
        hi: &Rational,
    ) -> Result<Rational> {
        check_coordinate(lo)?;
        check_coordinate(hi)?;
        if lo > hi {
            return Err(Error::Domain(format!(
                "eval window [{lo}, {hi}] is reversed"
            )));
        }
        let (kx, snapped_lo) = match snap_up(x, lo) {
            Some(p) => p,
            None => return Ok(Rational::zero()),
        };
        let (ky, snapped_hi) = match snap_down(x, hi) {
            Some(p) => p,
            None => return Ok(Rational::zero()),
        };
        if snapped_lo >= snapped_hi {
            return Ok(Rational::zero());
        }
        let gaps = self.gap_mass(player, x, kx, ky)?;
        if let Some(direct) = self.cache.span(player, &snapped_lo, &snapped_hi) {
            return Ok(direct - gaps);
        }
        let v = self.eval(player, &snapped_lo, &snapped_hi)?;
        Ok(v - gaps)
    }

    /// Cut relative to a subcake: the smallest `y` with mass exactly `a`
    /// on `[x, y] ∩ X`.
    ///
    /// Locates the interval containing the cut point from cached interval
    /// measures (at most one primitive eval for the partial interval at the
    /// start), then issues one primitive cut inside it.
    pub fn subcake_cut(
        &mut self,
        player: usize,
        x: &Subcake,
        from: &Rational,
        a: &Rational,
    ) -> Result<Rational> {
        check_coordinate(from)?;
        if *a < Rational::zero() {
            return Err(Error::Domain(format!("cut target {a} is negative")));
        }
        if a.is_zero() {
            return Ok(from.clone());
        }
        let (k0, start) = match snap_up(x, from) {
            Some(p) => p,
            None => {
                return Err(Error::InfeasibleCut {
                    requested: a.to_string(),
                    available: "0".into(),
                })
            }
        };
        let intervals = x.intervals();
        let first_end = intervals[k0].hi().clone();
        let mut acc = match self.cache.span(player, &start, &first_end) {
            Some(v) => v,
            None => self.eval(player, &start, &first_end)?,
        };
        if acc >= *a {
            return self.cut(player, &start, a);
        }
        for iv in &intervals[k0 + 1..] {
            let mass =
                self.cache
                    .span(player, iv.lo(), iv.hi())
                    .ok_or_else(|| Error::CacheMiss {
                        player,
                        point: iv.lo().to_string(),
                    })?;
            if &acc + &mass >= *a {
                let inside = a - &acc;
                return self.cut(player, iv.lo(), &inside);
            }
            acc += mass;
        }
        Err(Error::InfeasibleCut {
            requested: a.to_string(),
            available: acc.to_string(),
        })
    }

    /// Mass of a whole subcake from cached knowledge only.
    pub fn subcake_measure_cached(&self, player: usize, x: &Subcake) -> Result<Rational> {
        let mut total = Rational::zero();
        for iv in x.intervals() {
            total += self
                .cache
                .span(player, iv.lo(), iv.hi())
                .ok_or_else(|| Error::CacheMiss {
                    player,
                    point: iv.lo().to_string(),
                })?;
        }
        Ok(total)
    }

    /// Anchor a player's knowledge at every interval bound of `x` by direct
    /// integration, outside the ledger. This models handing the mediator a
    /// subcake whose structure is already known (as it is for every subcake
    /// a protocol constructs); root calls on the full cake need nothing.
    pub fn prime_subcake(&mut self, player: usize, x: &Subcake) {
        for iv in x.intervals() {
            for p in [iv.lo(), iv.hi()] {
                let cumulative = self.valuations[player].mass_between(&Rational::zero(), p);
                self.cache.anchor(player, p.clone(), cumulative);
            }
        }
    }

    pub fn prime_subcake_all(&mut self, x: &Subcake) {
        for i in 0..self.valuations.len() {
            self.prime_subcake(i, x);
        }
    }

    fn gap_mass(&self, player: usize, x: &Subcake, from: usize, to: usize) -> Result<Rational> {
        let intervals = x.intervals();
        let mut total = Rational::zero();
        for j in from..to {
            let a = intervals[j].hi();
            let b = intervals[j + 1].lo();
            total += self
                .cache
                .span(player, a, b)
                .ok_or_else(|| Error::CacheMiss {
                    player,
                    point: a.to_string(),
                })?;
        }
        Ok(total)
    }
}

/// Smallest point of `closure(x)` at or after `p`, with its interval index.
fn snap_up(x: &Subcake, p: &Rational) -> Option<(usize, Rational)> {
    for (k, iv) in x.intervals().iter().enumerate() {
        if iv.hi() >= p {
            let q = if iv.lo() > p {
                iv.lo().clone()
            } else {
                p.clone()
            };
            return Some((k, q));
        }
    }
    None
}

/// Largest point of `closure(x)` at or before `p`, with its interval index.
fn snap_down(x: &Subcake, p: &Rational) -> Option<(usize, Rational)> {
    for (k, iv) in x.intervals().iter().enumerate().rev() {
        if iv.lo() <= p {
            let q = if iv.hi() < p {
                iv.hi().clone()
            } else {
                p.clone()
            };
            return Some((k, q));
        }
    }
    None
}
