//! Acceptability matrices and maximal allocations.
//!
//! A piece is acceptable to a player when it is worth at least a 1/n share
//! of the current cake to them. An allocation matches players to pieces
//! injectively so that every matched player accepts their piece and every
//! unmatched player strictly rejects every matched piece; a maximal
//! allocation is one of maximum cardinality.
//!
//! The second condition forces the matched players to be exactly the
//! acceptors of the matched pieces, so enumeration walks piece subsets:
//! a subset `P` supports allocations precisely when its acceptor set has
//! size `|P|` and the acceptance graph restricted to it has a perfect
//! matching, and the allocations over `P` are that graph's perfect
//! matchings. This is exponential in the worst case (an all-true matrix
//! has n! maximal allocations), which is inherent to the problem; caps
//! below keep runaway instances from exhausting memory.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Player counts beyond this are refused by the enumerator.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;
/// Hard bound on how many allocations may be materialized.
pub const MAX_ALLOCATIONS: usize = 1_000_000;

/// Exact piece values per player, with per-player acceptability thresholds.
#[derive(Debug, Clone)]
pub struct AcceptabilityMatrix {
    values: Vec<Vec<Rational>>,
    thresholds: Vec<Rational>,
    accepts: Vec<Vec<bool>>,
}

impl AcceptabilityMatrix {
    /// Build from a player-by-piece value grid; player `i`'s threshold is
    /// `totals[i] / n`.
    pub fn build(values: Vec<Vec<Rational>>, totals: &[Rational], n: usize) -> Result<Self> {
        if values.len() != totals.len() {
            return Err(Error::Internal(
                "value grid and totals disagree on player count".into(),
            ));
        }
        if n == 0 {
            return Err(Error::Domain(
                "acceptability needs a positive divisor".into(),
            ));
        }
        let width = values.first().map(|r| r.len()).unwrap_or(0);
        if values.iter().any(|r| r.len() != width) {
            return Err(Error::Internal("ragged value grid".into()));
        }
        let divisor = Rational::from_integer(n.into());
        let thresholds: Vec<Rational> = totals.iter().map(|t| t / &divisor).collect();
        let accepts = values
            .iter()
            .zip(&thresholds)
            .map(|(row, thr)| row.iter().map(|v| v >= thr).collect())
            .collect();
        Ok(AcceptabilityMatrix {
            values,
            thresholds,
            accepts,
        })
    }

    pub fn player_count(&self) -> usize {
        self.values.len()
    }

    pub fn piece_count(&self) -> usize {
        self.values.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn accepts(&self, player: usize, piece: usize) -> bool {
        self.accepts[player][piece]
    }

    pub fn value(&self, player: usize, piece: usize) -> &Rational {
        &self.values[player][piece]
    }

    pub fn row(&self, player: usize) -> &[Rational] {
        &self.values[player]
    }

    pub fn threshold(&self, player: usize) -> &Rational {
        &self.thresholds[player]
    }

    /// Pigeonhole: when the pieces really partition the cake into n parts,
    /// every player accepts at least one piece.
    pub fn every_row_accepts(&self) -> bool {
        self.accepts.iter().all(|row| row.iter().any(|&b| b))
    }
}

/// An injective player-piece matching, stored as `(piece, player)` pairs
/// sorted by piece. The derived ordering is the canonical tie-break order
/// used everywhere a single allocation must be chosen.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Allocation {
    pairs: Vec<(usize, usize)>,
}

impl Allocation {
    pub fn empty() -> Self {
        Allocation { pairs: Vec::new() }
    }

    /// Build from `(player, piece)` matches.
    pub fn from_matches<I: IntoIterator<Item = (usize, usize)>>(matches: I) -> Self {
        let mut pairs: Vec<(usize, usize)> = matches.into_iter().map(|(i, j)| (j, i)).collect();
        pairs.sort();
        Allocation { pairs }
    }

    /// `(piece, player)` pairs sorted by piece.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn players(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(_, i)| i)
    }

    pub fn pieces(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(j, _)| j)
    }

    pub fn piece_of_player(&self, player: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|&&(_, i)| i == player)
            .map(|&(j, _)| j)
    }

    pub fn contains_player(&self, player: usize) -> bool {
        self.pairs.iter().any(|&(_, i)| i == player)
    }
}

/// Both defining clauses, checked literally: matched players accept their
/// piece, unmatched players strictly reject every matched piece.
pub fn is_allocation(m: &AcceptabilityMatrix, candidate: &Allocation) -> bool {
    let pairs = candidate.pairs();
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            return false;
        }
    }
    let mut seen_players = vec![false; m.player_count()];
    for &(piece, player) in pairs {
        if piece >= m.piece_count() || player >= m.player_count() {
            return false;
        }
        if seen_players[player] {
            return false;
        }
        seen_players[player] = true;
        if !m.accepts(player, piece) {
            return false;
        }
    }
    for (unmatched, &seen) in seen_players.iter().enumerate() {
        if seen {
            continue;
        }
        for &(piece, _) in pairs {
            if m.accepts(unmatched, piece) {
                return false;
            }
        }
    }
    true
}

/// Every valid allocation of maximum cardinality, in canonical order.
#[derive(Debug, Clone)]
pub struct AllocationSet {
    allocations: Vec<Allocation>,
}

impl AllocationSet {
    pub fn allocations(&self) -> &[Allocation] {
        &self.allocations
    }

    pub fn len(&self) -> usize {
        self.allocations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allocations.is_empty()
    }

    /// Size of each member allocation.
    pub fn cardinality(&self) -> usize {
        self.allocations.first().map(|a| a.len()).unwrap_or(0)
    }

    /// Number of distinct matched-piece subsets across the set.
    pub fn piece_subset_count(&self) -> usize {
        let mut masks: Vec<u64> = self
            .allocations
            .iter()
            .map(|a| a.pieces().fold(0u64, |m, j| m | (1 << j)))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        masks.len()
    }
}

pub fn enumerate_maximal_allocations(m: &AcceptabilityMatrix) -> Result<AllocationSet> {
    enumerate_maximal_allocations_capped(m, DEFAULT_ENUMERATION_CAP)
}

/// Exhaustive enumeration over piece subsets as described in the module
/// docs. When no piece can be matched at all, the set holds just the empty
/// allocation; protocol callers treat that as an internal error because a
/// genuine equal-cut partition always admits a nonempty allocation.
pub fn enumerate_maximal_allocations_capped(
    m: &AcceptabilityMatrix,
    cap: usize,
) -> Result<AllocationSet> {
    let pieces = m.piece_count();
    let players = m.player_count();
    if pieces > cap || players > cap {
        return Err(Error::ResourceCap(format!(
            "{players} players / {pieces} pieces exceed the enumeration cap of {cap}"
        )));
    }
    if pieces >= 64 {
        return Err(Error::ResourceCap(
            "piece masks limited to 63 pieces".into(),
        ));
    }

    // acceptor mask per piece
    let acceptors: Vec<u64> = (0..pieces)
        .map(|j| {
            (0..players)
                .filter(|&i| m.accepts(i, j))
                .fold(0u64, |mask, i| mask | (1 << i))
        })
        .collect();

    let mut feasible: Vec<u64> = Vec::new();
    let mut best = 0usize;
    for mask in 1u64..(1 << pieces) {
        let size = mask.count_ones() as usize;
        if size < best {
            continue;
        }
        let acc = (0..pieces)
            .filter(|&j| mask & (1 << j) != 0)
            .fold(0u64, |a, j| a | acceptors[j]);
        if acc.count_ones() as usize != size {
            continue;
        }
        let piece_list: Vec<usize> = (0..pieces).filter(|&j| mask & (1 << j) != 0).collect();
        let player_list: Vec<usize> = (0..players).filter(|&i| acc & (1 << i) != 0).collect();
        if !perfect_matching_exists(m, &piece_list, &player_list) {
            continue;
        }
        if size > best {
            best = size;
            feasible.clear();
        }
        feasible.push(mask);
    }

    if best == 0 {
        return Ok(AllocationSet {
            allocations: vec![Allocation::empty()],
        });
    }

    let mut allocations: Vec<Allocation> = Vec::new();
    for mask in feasible {
        let piece_list: Vec<usize> = (0..pieces).filter(|&j| mask & (1 << j) != 0).collect();
        let acc = piece_list.iter().fold(0u64, |a, &j| a | acceptors[j]);
        let player_list: Vec<usize> = (0..players).filter(|&i| acc & (1 << i) != 0).collect();
        enumerate_perfect_matchings(m, &piece_list, &player_list, &mut allocations)?;
    }
    allocations.sort();
    allocations.dedup();
    debug_assert!(allocations.iter().all(|a| is_allocation(m, a)));
    Ok(AllocationSet { allocations })
}

/// Canonically first maximal allocation.
pub fn find_maximal_allocation(m: &AcceptabilityMatrix) -> Result<Allocation> {
    let set = enumerate_maximal_allocations(m)?;
    Ok(set.allocations()[0].clone())
}

fn perfect_matching_exists(
    m: &AcceptabilityMatrix,
    piece_list: &[usize],
    player_list: &[usize],
) -> bool {
    if piece_list.len() != player_list.len() {
        return false;
    }
    let mut matched_player: Vec<Option<usize>> = vec![None; player_list.len()];
    let mut size = 0;
    for pk in 0..piece_list.len() {
        let mut visited = vec![false; player_list.len()];
        if try_augment(
            m,
            piece_list,
            player_list,
            pk,
            &mut visited,
            &mut matched_player,
        ) {
            size += 1;
        }
    }
    size == piece_list.len()
}

fn try_augment(
    m: &AcceptabilityMatrix,
    piece_list: &[usize],
    player_list: &[usize],
    pk: usize,
    visited: &mut [bool],
    matched_player: &mut [Option<usize>],
) -> bool {
    for (qk, &player) in player_list.iter().enumerate() {
        if visited[qk] || !m.accepts(player, piece_list[pk]) {
            continue;
        }
        visited[qk] = true;
        if matched_player[qk].is_none()
            || try_augment(
                m,
                piece_list,
                player_list,
                matched_player[qk].unwrap(),
                visited,
                matched_player,
            )
        {
            matched_player[qk] = Some(pk);
            return true;
        }
    }
    false
}

fn enumerate_perfect_matchings(
    m: &AcceptabilityMatrix,
    piece_list: &[usize],
    player_list: &[usize],
    out: &mut Vec<Allocation>,
) -> Result<()> {
    let mut assignment: Vec<usize> = Vec::with_capacity(piece_list.len());
    let mut used = vec![false; player_list.len()];
    descend(m, piece_list, player_list, &mut assignment, &mut used, out)
}

fn descend(
    m: &AcceptabilityMatrix,
    piece_list: &[usize],
    player_list: &[usize],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Allocation>,
) -> Result<()> {
    let depth = assignment.len();
    if depth == piece_list.len() {
        if out.len() >= MAX_ALLOCATIONS {
            return Err(Error::ResourceCap(format!(
                "more than {MAX_ALLOCATIONS} maximal allocations"
            )));
        }
        out.push(Allocation::from_matches(
            assignment
                .iter()
                .enumerate()
                .map(|(pk, &qk)| (player_list[qk], piece_list[pk])),
        ));
        return Ok(());
    }
    // prune branches whose remainder cannot be completed
    let remaining_pieces: Vec<usize> = piece_list[depth..].to_vec();
    let remaining_players: Vec<usize> = player_list
        .iter()
        .enumerate()
        .filter(|(qk, _)| !used[*qk])
        .map(|(_, &q)| q)
        .collect();
    if !perfect_matching_exists(m, &remaining_pieces, &remaining_players) {
        return Ok(());
    }
    for qk in 0..player_list.len() {
        if used[qk] || !m.accepts(player_list[qk], piece_list[depth]) {
            continue;
        }
        used[qk] = true;
        assignment.push(qk);
        descend(m, piece_list, player_list, assignment, used, out)?;
        assignment.pop();
        used[qk] = false;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn uniform_matrix(n: usize) -> AcceptabilityMatrix {
        let share = rat(1, n as i64);
        let values = vec![vec![share; n]; n];
        let totals = vec![int(1); n];
        AcceptabilityMatrix::build(values, &totals, n).unwrap()
    }

    fn diagonal_matrix(n: usize) -> AcceptabilityMatrix {
        let values: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { int(1) } else { rat(0, 1) })
                    .collect()
            })
            .collect();
        let totals = vec![int(1); n];
        AcceptabilityMatrix::build(values, &totals, n).unwrap()
    }

    #[test]
    fn build_thresholds_exactly() {
        let m = uniform_matrix(3);
        assert!(m.every_row_accepts());
        for i in 0..3 {
            for j in 0..3 {
                assert!(m.accepts(i, j), "equal share meets the threshold");
            }
        }
        let m = diagonal_matrix(1);
        assert!(m.accepts(0, 0));
    }

    #[test]
    fn allocation_predicate() {
        let m = uniform_matrix(3);
        let diag = Allocation::from_matches([(0, 0), (1, 1), (2, 2)]);
        assert!(is_allocation(&m, &diag));
        // a lone pair leaves players who accept the matched piece unmatched
        let lone = Allocation::from_matches([(0, 0)]);
        assert!(!is_allocation(&m, &lone));
        assert!(is_allocation(&m, &Allocation::empty()));
    }

    #[test]
    fn all_true_matrix_has_factorial_many() {
        let set = enumerate_maximal_allocations(&uniform_matrix(3)).unwrap();
        assert_eq!(set.len(), 6);
        assert_eq!(set.cardinality(), 3);
        assert_eq!(set.piece_subset_count(), 1);
        assert_eq!(
            enumerate_maximal_allocations(&uniform_matrix(4))
                .unwrap()
                .len(),
            24
        );
    }

    #[test]
    fn diagonal_matrix_has_single_maximal() {
        let set = enumerate_maximal_allocations(&diagonal_matrix(4)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(
            set.allocations()[0],
            Allocation::from_matches([(0, 0), (1, 1), (2, 2), (3, 3)])
        );
        let first = find_maximal_allocation(&diagonal_matrix(4)).unwrap();
        assert_eq!(first, set.allocations()[0].clone());
    }

    #[test]
    fn canonical_first_on_ties() {
        let first = find_maximal_allocation(&uniform_matrix(3)).unwrap();
        assert_eq!(first, Allocation::from_matches([(0, 0), (1, 1), (2, 2)]));
    }

    #[test]
    fn concentrated_instance_piece_subsets() {
        // two players accept everything at exactly the share, three accept
        // only the last piece
        let n = 5usize;
        let fifth = rat(1, 5);
        let mut values = vec![vec![fifth.clone(); n]; 2];
        for _ in 0..3 {
            let mut row = vec![rat(0, 1); n - 1];
            row.push(int(1));
            values.push(row);
        }
        let totals = vec![int(1); n];
        let m = AcceptabilityMatrix::build(values, &totals, n).unwrap();
        let set = enumerate_maximal_allocations(&m).unwrap();
        assert_eq!(set.cardinality(), 2);
        assert_eq!(set.piece_subset_count(), 6);
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn unmatchable_matrix_yields_empty_allocation() {
        // nobody accepts anything
        let values = vec![vec![rat(0, 1); 2]; 2];
        let totals = vec![int(1); 2];
        let m = AcceptabilityMatrix::build(values, &totals, 2).unwrap();
        let set = enumerate_maximal_allocations(&m).unwrap();
        assert_eq!(set.cardinality(), 0);
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let r = enumerate_maximal_allocations_capped(&uniform_matrix(4), 3);
        assert!(matches!(r, Err(Error::ResourceCap(_))));
    }
}
