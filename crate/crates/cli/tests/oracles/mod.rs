//! Independent small-graph hitting-time oracles: a truncated-expectation
//! dynamic program and a hand-rolled Gauss-Jordan inversion. Neither
//! touches the production solve path.

use erwalk::{exact_hitting, ErGraph};

const TAIL_CUTOFF: f64 = 1e-15;
const STEP_CAP: usize = 1_000_000;

fn neighbor_table(g: &ErGraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).collect()).collect()
}

/// E[T_wv] = sum_{k >= 0} P(T_wv > k), iterating the survival mass of the
/// walk with the target removed and closing with a geometric tail estimate
/// once the mass drops below cutoff.
pub fn dp_hitting(g: &ErGraph, target: usize) -> Vec<f64> {
    let neigh = neighbor_table(g);
    let n = neigh.len();
    let mut expectations = vec![0.0; n];
    for w in 0..n {
        if w == target {
            continue;
        }
        let mut mass = vec![0.0; n];
        mass[w] = 1.0;
        let mut total = 1.0;
        let mut previous = f64::NAN;
        let mut expectation = 0.0;
        let mut steps = 0usize;
        while total > TAIL_CUTOFF && steps < STEP_CAP {
            expectation += total;
            let mut next = vec![0.0; n];
            for x in 0..n {
                if x == target || mass[x] == 0.0 {
                    continue;
                }
                let share = mass[x] / neigh[x].len() as f64;
                for &u in &neigh[x] {
                    if u != target {
                        next[u] += share;
                    }
                }
            }
            mass = next;
            previous = total;
            total = mass.iter().sum();
            steps += 1;
        }
        if total > 0.0 && previous > 0.0 {
            let ratio = (total / previous).min(0.999_999);
            expectation += total / (1.0 - ratio);
        }
        expectations[w] = expectation;
    }
    expectations
}

/// h = (I - Q)^{-1} 1 by explicit Gauss-Jordan inversion with partial
/// pivoting; the hitting times are the row sums of the inverse.
pub fn invert_hitting(g: &ErGraph, target: usize) -> Vec<f64> {
    let neigh = neighbor_table(g);
    let n = neigh.len();
    let m = n - 1;
    let index = |v: usize| if v < target { v } else { v - 1 };
    // augmented [I - Q | I]
    let mut a = vec![vec![0.0f64; 2 * m]; m];
    for (w, nb) in neigh.iter().enumerate() {
        if w == target {
            continue;
        }
        let iw = index(w);
        a[iw][iw] = 1.0;
        a[iw][m + iw] = 1.0;
        for &u in nb {
            if u != target {
                a[iw][index(u)] -= 1.0 / nb.len() as f64;
            }
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let scale = a[col][col];
        assert!(scale.abs() > 1e-14, "singular restricted system");
        for x in a[col].iter_mut() {
            *x /= scale;
        }
        let pivot_row = a[col].clone();
        for (row, target_row) in a.iter_mut().enumerate() {
            if row != col && target_row[col] != 0.0 {
                let factor = target_row[col];
                for (x, p) in target_row.iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
    }
    let mut h = vec![0.0; n];
    for w in 0..n {
        if w != target {
            h[w] = a[index(w)][m..].iter().sum();
        }
    }
    h
}

/// Worst disagreement between the production solver and both oracles over
/// every target of a connected graph.
pub fn max_oracle_defect(g: &ErGraph) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..g.n() {
        let solved = exact_hitting(g, v).unwrap();
        let dp = dp_hitting(g, v);
        let inverted = invert_hitting(g, v);
        for w in 0..g.n() {
            worst = worst.max((solved.value(w) - dp[w]).abs());
            worst = worst.max((solved.value(w) - inverted[w]).abs());
        }
    }
    worst
}
