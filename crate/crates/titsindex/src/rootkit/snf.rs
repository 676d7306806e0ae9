//! Smith normal form over the integers, tracking the left transform.

/// Result of `smith`: `left * m * right = diag(factors)`; only `left` is kept
/// because projections onto the quotient only need the row transform.
#[derive(Clone, Debug)]
pub struct Smith {
    pub factors: Vec<i64>,
    pub left: Vec<Vec<i64>>,
}

fn swap_cols(a: &mut [Vec<i64>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_row(a: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(src_row) {
        *x += k * y;
    }
}

fn add_col(a: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in a.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// Square integer matrix to Smith form. Invariant factors come out nondecreasing
/// under divisibility; zero factors (singular input) are reported as 0.
pub fn smith(m: &[Vec<i64>]) -> Smith {
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut left: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();

    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut a, t, pj);

            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t] / p;
                add_row(&mut a, i, t, -q);
                add_row(&mut left, i, t, -q);
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j] / p;
                add_col(&mut a, j, t, -q);
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match offender {
                Some(i) => {
                    add_row(&mut a, t, i, 1);
                    add_row(&mut left, t, i, 1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in left[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let factors = (0..n).map(|i| a[i][i]).collect();
    Smith { factors, left }
}
