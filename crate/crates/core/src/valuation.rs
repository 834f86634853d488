//! Player utilities: non-atomic probability measures on the unit cake,
//! represented as piecewise-constant densities with rational breakpoints.
//!
//! This class of measures is closed under eval and cut queries with exact
//! rational answers. Construction normalizes the representation (zero
//! segments dropped, equal-density neighbours merged), so structural
//! equality decides whether two players have the same measure.

use num_traits::{One, Zero};

use crate::cake::{Interval, Subcake};
use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, Rational};

/// A piecewise-constant density on `[0, 1]` with total mass exactly 1.
/// Gaps between segments mean density 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    segments: Vec<(Interval, Rational)>,
}

impl Valuation {
    /// Validates and normalizes a density. Rejects negative densities,
    /// overlapping segments and any total mass other than 1.
    pub fn new(segments: Vec<(Interval, Rational)>) -> Result<Self> {
        let mut segs: Vec<(Interval, Rational)> = segments
            .into_iter()
            .filter(|(iv, d)| !iv.is_empty() && !d.is_zero())
            .collect();
        for (iv, d) in &segs {
            if *d < Rational::zero() {
                return Err(Error::Schema(format!(
                    "negative density {d} on [{}, {})",
                    iv.lo(),
                    iv.hi()
                )));
            }
        }
        segs.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in segs.windows(2) {
            if pair[1].0.lo() < pair[0].0.hi() {
                return Err(Error::Schema("overlapping density segments".into()));
            }
        }
        // merge touching segments of equal density
        let mut merged: Vec<(Interval, Rational)> = Vec::with_capacity(segs.len());
        for (iv, d) in segs {
            match merged.last_mut() {
                Some((last, ld)) if last.hi() == iv.lo() && *ld == d => {
                    *last = Interval::new(last.lo().clone(), iv.hi().clone())?;
                }
                _ => merged.push((iv, d)),
            }
        }
        let mass: Rational = merged
            .iter()
            .fold(Rational::zero(), |acc, (iv, d)| acc + iv.length() * d);
        if mass != Rational::one() {
            return Err(Error::Schema(format!("total mass is {mass}, expected 1")));
        }
        Ok(Valuation { segments: merged })
    }

    /// The uniform (Lebesgue) measure on `[0, 1]`.
    pub fn lebesgue() -> Self {
        Valuation {
            segments: vec![(
                Interval::new(Rational::zero(), Rational::one()).unwrap(),
                Rational::one(),
            )],
        }
    }

    /// All mass spread uniformly over one interval.
    pub fn uniform_on(lo: Rational, hi: Rational) -> Result<Self> {
        let iv = Interval::new(lo, hi)?;
        if iv.is_empty() {
            return Err(Error::Schema(
                "cannot concentrate mass on an empty interval".into(),
            ));
        }
        let density = iv.length().recip();
        Ok(Valuation {
            segments: vec![(iv, density)],
        })
    }

    pub fn segments(&self) -> &[(Interval, Rational)] {
        &self.segments
    }

    /// Exact mass of `[a, b]` by direct integration. Assumes `a <= b`.
    pub fn mass_between(&self, a: &Rational, b: &Rational) -> Rational {
        debug_assert!(a <= b);
        let mut total = Rational::zero();
        for (iv, d) in &self.segments {
            if iv.hi() <= a {
                continue;
            }
            if iv.lo() >= b {
                break;
            }
            let lo = iv.lo().clone().max(a.clone());
            let hi = iv.hi().clone().min(b.clone());
            if lo < hi {
                total += (hi - lo) * d;
            }
        }
        total
    }

    /// Exact measure of a subcake by direct integration. This is the
    /// verification-side ground truth; it never touches a query ledger.
    pub fn measure(&self, x: &Subcake) -> Rational {
        x.intervals().iter().fold(Rational::zero(), |acc, iv| {
            acc + self.mass_between(iv.lo(), iv.hi())
        })
    }

    /// Smallest `y >= x` with mass exactly `a` on `[x, y]`.
    ///
    /// When the density vanishes there are infinitely many points carrying
    /// the same cumulative mass; this always returns the leftmost one, which
    /// makes the cut a total deterministic function on feasible inputs.
    pub fn leftmost_cut(&self, x: &Rational, a: &Rational) -> Result<Rational> {
        if *a < Rational::zero() {
            return Err(Error::Domain(format!("cut target {a} is negative")));
        }
        if a.is_zero() {
            return Ok(x.clone());
        }
        let mut acc = Rational::zero();
        for (iv, d) in &self.segments {
            if iv.hi() <= x {
                continue;
            }
            let lo = iv.lo().clone().max(x.clone());
            let seg_mass = (iv.hi() - &lo) * d;
            if &acc + &seg_mass >= *a {
                return Ok(lo + (a - acc) / d);
            }
            acc += seg_mass;
        }
        Err(Error::InfeasibleCut {
            requested: a.to_string(),
            available: acc.to_string(),
        })
    }
}

/// Validate that a point may serve as a query coordinate.
pub(crate) fn check_coordinate(p: &Rational) -> Result<()> {
    if in_unit_interval(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("coordinate {p} outside [0, 1]")))
    }
}
