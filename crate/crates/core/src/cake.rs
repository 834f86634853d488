//! The cake is the unit interval; pieces of it are finite disjoint unions
//! of subintervals.
//!
//! Intervals are stored half-open `[lo, hi)` so that disjointness of
//! adjacent pieces is syntactic. All measures are non-atomic, so the
//! endpoint convention never changes a value.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, Rational};

/// Half-open interval `[lo, hi)` inside the unit cake.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if !in_unit_interval(&lo) || !in_unit_interval(&hi) {
            return Err(Error::Domain(format!(
                "interval [{lo}, {hi}) leaves the unit cake"
            )));
        }
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}) is reversed")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }
}

/// A finite disjoint union of intervals, kept sorted and maximally merged:
/// no two stored intervals overlap or share an endpoint, and none is empty.
/// The empty subcake is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subcake {
    intervals: Vec<Interval>,
}

impl Subcake {
    pub fn empty() -> Self {
        Subcake {
            intervals: Vec::new(),
        }
    }

    /// The whole cake `[0, 1)`.
    pub fn unit() -> Self {
        Subcake {
            intervals: vec![Interval {
                lo: Rational::zero(),
                hi: Rational::one(),
            }],
        }
    }

    /// Build from arbitrary intervals; rejects overlapping input, merges
    /// touching intervals and drops empty ones.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Result<Self> {
        let mut ivs: Vec<Interval> = intervals.into_iter().filter(|iv| !iv.is_empty()).collect();
        ivs.sort();
        for pair in ivs.windows(2) {
            if pair[1].lo < pair[0].hi {
                return Err(Error::Domain(format!(
                    "overlapping intervals [{}, {}) and [{}, {})",
                    pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi
                )));
            }
        }
        Ok(Subcake {
            intervals: merge_sorted(ivs),
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Leftmost point of the subcake.
    pub fn min_point(&self) -> Option<&Rational> {
        self.intervals.first().map(|iv| &iv.lo)
    }

    /// Rightmost (closure) point of the subcake.
    pub fn max_point(&self) -> Option<&Rational> {
        self.intervals.last().map(|iv| &iv.hi)
    }

    pub fn total_length(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    /// Intersection with the window `[lo, hi)`.
    pub fn intersect_window(&self, lo: &Rational, hi: &Rational) -> Subcake {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let a = iv.lo.clone().max(lo.clone());
            let b = iv.hi.clone().min(hi.clone());
            if a < b {
                out.push(Interval { lo: a, hi: b });
            }
        }
        Subcake { intervals: out }
    }

    pub fn union(&self, other: &Subcake) -> Subcake {
        let mut ivs: Vec<Interval> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .cloned()
            .collect();
        ivs.sort();
        Subcake {
            intervals: merge_sorted_overlapping(ivs),
        }
    }

    pub fn difference(&self, other: &Subcake) -> Subcake {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let mut lo = iv.lo.clone();
            for cut in &other.intervals {
                if cut.hi <= lo {
                    continue;
                }
                if cut.lo >= iv.hi {
                    break;
                }
                if cut.lo > lo {
                    out.push(Interval {
                        lo: lo.clone(),
                        hi: cut.lo.clone().min(iv.hi.clone()),
                    });
                }
                lo = lo.max(cut.hi.clone());
                if lo >= iv.hi {
                    break;
                }
            }
            if lo < iv.hi {
                out.push(Interval {
                    lo,
                    hi: iv.hi.clone(),
                });
            }
        }
        Subcake { intervals: out }
    }

    /// Whether `[iv.lo, iv.hi)` lies inside a single stored interval.
    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.intervals
            .iter()
            .any(|own| own.lo <= iv.lo && iv.hi <= own.hi)
    }

    pub fn contains_point(&self, p: &Rational) -> bool {
        self.intervals.iter().any(|iv| iv.lo <= *p && *p < iv.hi)
    }
}

fn merge_sorted(ivs: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        match out.last_mut() {
            Some(last) if last.hi == iv.lo => last.hi = iv.hi,
            _ => out.push(iv),
        }
    }
    out
}

fn merge_sorted_overlapping(ivs: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        if iv.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
        Interval::new(rat(lo.0, lo.1), rat(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn construction_merges_touching_and_drops_empty() {
        let s = Subcake::from_intervals(vec![
            iv((1, 2), (3, 4)),
            iv((0, 1), (1, 4)),
            iv((1, 4), (1, 2)),
            iv((3, 4), (3, 4)),
        ])
        .unwrap();
        assert_eq!(
            s,
            Subcake::from_intervals(vec![iv((0, 1), (3, 4))]).unwrap()
        );
        assert_eq!(s.intervals().len(), 1);
    }

    #[test]
    fn construction_rejects_overlap() {
        assert!(Subcake::from_intervals(vec![iv((0, 1), (1, 2)), iv((1, 4), (3, 4))]).is_err());
    }

    #[test]
    fn window_intersection() {
        let s = Subcake::from_intervals(vec![iv((0, 1), (1, 4)), iv((1, 2), (3, 4))]).unwrap();
        let w = s.intersect_window(&rat(1, 8), &rat(5, 8));
        assert_eq!(
            w,
            Subcake::from_intervals(vec![iv((1, 8), (1, 4)), iv((1, 2), (5, 8))]).unwrap()
        );
        assert!(s.intersect_window(&rat(5, 16), &rat(7, 16)).is_empty());
    }

    #[test]
    fn union_and_difference_tile() {
        let a = Subcake::from_intervals(vec![iv((0, 1), (1, 3))]).unwrap();
        let b = Subcake::from_intervals(vec![iv((1, 3), (2, 3)), iv((5, 6), (1, 1))]).unwrap();
        let u = a.union(&b);
        assert_eq!(u.intervals().len(), 2);
        assert_eq!(u.difference(&b), a);
        assert_eq!(u.difference(&a), b);
        assert_eq!(
            Subcake::unit().difference(&Subcake::unit()),
            Subcake::empty()
        );
    }

    #[test]
    fn point_and_interval_containment() {
        let s = Subcake::from_intervals(vec![iv((1, 4), (1, 2))]).unwrap();
        assert!(s.contains_point(&rat(1, 4)));
        assert!(!s.contains_point(&rat(1, 2)));
        assert!(s.contains_interval(&iv((1, 4), (3, 8))));
        assert!(!s.contains_interval(&iv((1, 8), (3, 8))));
    }

    #[test]
    fn bounds_and_length() {
        let s = Subcake::from_intervals(vec![iv((0, 1), (1, 4)), iv((1, 2), (3, 4))]).unwrap();
        assert_eq!(s.min_point().unwrap(), &rat(0, 1));
        assert_eq!(s.max_point().unwrap(), &rat(3, 4));
        assert_eq!(s.total_length(), rat(1, 2));
        assert!(Subcake::empty().min_point().is_none());
    }
}
