//! Orders on partitions of the cake.
//!
//! A partition is compared first through its merged cut vector (the graded
//! order: more cuts is bigger, equal length falls back to entrywise
//! comparison) and then through the canonical word spelled by scanning its
//! elementary intervals left to right, relabelling pieces by first
//! appearance. Two partitions with the same cut vector and the same word
//! assign the same pieces up to a permutation of the players.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::cake::{Interval, Subcake};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Graded order on cut vectors: longer is greater; equal lengths compare
/// entrywise on the first difference.
pub fn graded_compare(a: &[Rational], b: &[Rational]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Canonical word of a partition: one letter per elementary interval,
/// letters numbered from 0 in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn letters(&self) -> &[usize] {
        &self.letters
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "a{}", l + 1)?;
            first = false;
        }
        Ok(())
    }
}

/// One piece of the unit cake per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pieces: Vec<Subcake>,
}

impl Partition {
    pub fn new(pieces: Vec<Subcake>) -> Self {
        Partition { pieces }
    }

    pub fn pieces(&self) -> &[Subcake] {
        &self.pieces
    }

    /// Interior boundaries of all pieces, merged and sorted; the implicit
    /// endpoints 0 and 1 are excluded.
    pub fn cut_vector(&self) -> Vec<Rational> {
        let mut bounds: BTreeSet<Rational> = BTreeSet::new();
        for piece in &self.pieces {
            for iv in piece.intervals() {
                bounds.insert(iv.lo().clone());
                bounds.insert(iv.hi().clone());
            }
        }
        bounds.remove(&Rational::zero());
        bounds.remove(&Rational::one());
        bounds.into_iter().collect()
    }

    /// The word spelled by the owners of the elementary intervals.
    ///
    /// Fails when some elementary interval is not covered by exactly one
    /// piece, which cannot happen for a genuine partition of the cake.
    pub fn word(&self) -> Result<Word> {
        let mut zs = vec![Rational::zero()];
        zs.extend(self.cut_vector());
        zs.push(Rational::one());
        let mut letter_of_piece: Vec<Option<usize>> = vec![None; self.pieces.len()];
        let mut next_letter = 0usize;
        let mut letters = Vec::with_capacity(zs.len() - 1);
        for pair in zs.windows(2) {
            if pair[0] == pair[1] {
                continue;
            }
            let elem = Interval::new(pair[0].clone(), pair[1].clone())?;
            let owner = self
                .pieces
                .iter()
                .position(|p| p.contains_interval(&elem))
                .ok_or_else(|| {
                    Error::MalformedPartition(format!(
                        "elementary interval [{}, {}) has no single owner",
                        elem.lo(),
                        elem.hi()
                    ))
                })?;
            let letter = match letter_of_piece[owner] {
                Some(l) => l,
                None => {
                    let l = next_letter;
                    letter_of_piece[owner] = Some(l);
                    next_letter += 1;
                    l
                }
            };
            letters.push(letter);
        }
        Ok(Word { letters })
    }
}

/// Lexicographic order on partitions through their words, with higher
/// letters greater.
pub fn lex_compare_partitions(p: &Partition, q: &Partition) -> Result<Ordering> {
    Ok(p.word()?.cmp(&q.word()?))
}

/// Indices of the partitions that are minimal first under the graded order
/// of their cut vectors, then under the lexicographic order of their words.
/// Survivors keep their input order.
pub fn select_minimal(partitions: &[Partition]) -> Result<Vec<usize>> {
    if partitions.is_empty() {
        return Err(Error::Domain("no partitions to select from".into()));
    }
    let vectors: Vec<Vec<Rational>> = partitions.iter().map(|p| p.cut_vector()).collect();
    let min_vector = vectors
        .iter()
        .min_by(|a, b| graded_compare(a, b))
        .expect("nonempty");
    let graded_survivors: Vec<usize> = (0..partitions.len())
        .filter(|&i| graded_compare(&vectors[i], min_vector) == Ordering::Equal)
        .collect();
    let words: Vec<Word> = graded_survivors
        .iter()
        .map(|&i| partitions[i].word())
        .collect::<Result<_>>()?;
    let min_word = words.iter().min().expect("nonempty");
    Ok(graded_survivors
        .iter()
        .zip(&words)
        .filter(|(_, w)| *w == min_word)
        .map(|(&i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[allow(clippy::type_complexity)]
    fn piece(ranges: &[((i64, i64), (i64, i64))]) -> Subcake {
        Subcake::from_intervals(
            ranges
                .iter()
                .map(|&(lo, hi)| Interval::new(rat(lo.0, lo.1), rat(hi.0, hi.1)).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn graded_order_examples() {
        let short = vec![rat(1, 2)];
        let long = vec![rat(1, 3), rat(2, 3)];
        assert_eq!(graded_compare(&short, &long), Ordering::Less);
        assert_eq!(
            graded_compare(&[rat(1, 3), rat(2, 3)], &[rat(1, 3), rat(1, 2)]),
            Ordering::Greater
        );
        assert_eq!(
            graded_compare(&[rat(1, 4), rat(3, 4)], &[rat(1, 4), rat(3, 4)]),
            Ordering::Equal
        );
    }

    #[test]
    fn words_scan_left_to_right() {
        let p = Partition::new(vec![piece(&[((0, 1), (1, 3))]), piece(&[((1, 3), (1, 1))])]);
        assert_eq!(p.word().unwrap().letters(), &[0, 1]);
        assert_eq!(p.word().unwrap().to_string(), "a1 a2");

        let comeback = Partition::new(vec![
            piece(&[((0, 1), (1, 3)), ((2, 3), (1, 1))]),
            piece(&[((1, 3), (2, 3))]),
        ]);
        assert_eq!(comeback.word().unwrap().to_string(), "a1 a2 a1");
    }

    #[test]
    fn relabeling_erases_player_identity() {
        // same shape, pieces listed in a different player order
        let p = Partition::new(vec![
            piece(&[((1, 3), (2, 3))]),
            piece(&[((0, 1), (1, 3))]),
            piece(&[((2, 3), (1, 1))]),
        ]);
        assert_eq!(p.word().unwrap().to_string(), "a1 a2 a3");
    }

    #[test]
    fn word_rejects_uncovered_intervals() {
        let p = Partition::new(vec![piece(&[((0, 1), (1, 2))])]);
        assert!(matches!(p.word(), Err(Error::MalformedPartition(_))));
    }

    #[test]
    fn select_minimal_prefers_fewer_cuts_then_smaller_words() {
        let two_cuts = Partition::new(vec![
            piece(&[((0, 1), (1, 3))]),
            piece(&[((1, 3), (2, 3))]),
            piece(&[((2, 3), (1, 1))]),
        ]);
        let one_cut = Partition::new(vec![
            piece(&[((0, 1), (1, 2))]),
            piece(&[((1, 2), (1, 1))]),
            Subcake::empty(),
        ]);
        let picked = select_minimal(&[two_cuts.clone(), one_cut.clone()]).unwrap();
        assert_eq!(picked, vec![1]);

        // identical cut vectors and identical words: both survive, in order
        let twin_a = Partition::new(vec![piece(&[((0, 1), (1, 2))]), piece(&[((1, 2), (1, 1))])]);
        let twin_b = Partition::new(vec![piece(&[((1, 2), (1, 1))]), piece(&[((0, 1), (1, 2))])]);
        assert_eq!(select_minimal(&[twin_a, twin_b]).unwrap(), vec![0, 1]);

        let single = Partition::new(vec![piece(&[((0, 1), (1, 1))])]);
        assert_eq!(select_minimal(&[single]).unwrap(), vec![0]);
        assert!(select_minimal(&[]).is_err());
    }

    #[test]
    fn equal_vector_and_word_means_pieces_permute() {
        let p = Partition::new(vec![piece(&[((0, 1), (1, 2))]), piece(&[((1, 2), (1, 1))])]);
        let q = Partition::new(vec![piece(&[((1, 2), (1, 1))]), piece(&[((0, 1), (1, 2))])]);
        assert_eq!(p.cut_vector(), q.cut_vector());
        assert_eq!(lex_compare_partitions(&p, &q).unwrap(), Ordering::Equal);
        // recover the permutation constructively
        let sigma: Vec<usize> = q
            .pieces()
            .iter()
            .map(|qp| p.pieces().iter().position(|pp| pp == qp).unwrap())
            .collect();
        assert_eq!(sigma, vec![1, 0]);
    }
}
