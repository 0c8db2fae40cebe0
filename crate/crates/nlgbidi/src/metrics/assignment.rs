//! Minimum-cost assignment on a square cost matrix.
//!
//! Classic Hungarian algorithm with row/column potentials, O(n³). Used to
//! align predicted triples to gold triples so edit distance is invariant
//! under triple order.

/// Solves the square assignment problem, returning the minimum total cost
/// and, for each row, the column it is matched to.
///
/// `cost` must be square. Costs are `u64` to keep the potentials exact.
pub fn solve(cost: &[Vec<u64>]) -> (u64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0, Vec::new());
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));
    const INF: i64 = i64::MAX / 4;

    // 1-based potentials over rows (u) and columns (v); p[j] is the row
    // currently matched to column j, with column 0 as the staging slot.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] as i64 - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    let mut total = 0u64;
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
        total += cost[p[j] - 1][j - 1];
    }
    (total, row_to_col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn brute_force(cost: &[Vec<u64>]) -> u64 {
        let n = cost.len();
        (0..n)
            .permutations(n)
            .map(|perm| (0..n).map(|i| cost[i][perm[i]]).sum())
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn solves_a_known_matrix() {
        // Optimal is the anti-diagonal: 1 + 2 + 1 = 4.
        let cost = vec![vec![9, 7, 1], vec![8, 2, 9], vec![1, 9, 9]];
        let (total, rows) = solve(&cost);
        assert_eq!(total, 4);
        assert_eq!(rows, vec![2, 1, 0]);
    }

    #[test]
    fn empty_matrix_costs_nothing() {
        assert_eq!(solve(&[]), (0, vec![]));
    }

    #[test]
    fn single_cell() {
        assert_eq!(solve(&[vec![17]]), (17, vec![0]));
    }

    #[test]
    fn assignment_is_a_permutation() {
        let cost = vec![vec![3, 3, 3], vec![3, 3, 3], vec![3, 3, 3]];
        let (total, rows) = solve(&cost);
        assert_eq!(total, 9);
        let mut seen = rows.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn matches_brute_force_on_small_matrices(
            n in 1usize..=5,
            seed in proptest::collection::vec(0u64..1000, 25),
        ) {
            let cost: Vec<Vec<u64>> = (0..n)
                .map(|i| (0..n).map(|j| seed[i * 5 + j]).collect())
                .collect();
            let (total, rows) = solve(&cost);
            prop_assert_eq!(total, brute_force(&cost));
            let mut perm = rows.clone();
            perm.sort_unstable();
            prop_assert_eq!(perm, (0..n).collect::<Vec<_>>());
            let recomputed: u64 = rows.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
            prop_assert_eq!(recomputed, total);
        }
    }
}
