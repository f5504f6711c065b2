//! How many independent deviators of each order appear in the decomposition
//! of a generic order-n tensor.

use crate::error::{Error, Result};

/// Coefficients of `x^s`, `s = -n..=n`, in `(1 + x + 1/x)^n`, built with the
/// three-term recurrence `[n+1, s] = [n, s-1] + [n, s] + [n, s+1]`.
pub fn trinomial_row(n: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![0u128; row.len() + 2];
        for (i, &c) in row.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
            next[i + 2] += c;
        }
        row = next;
    }
    row
}

/// Trinomial coefficient `[n, s]`: the coefficient of `x^s` in
/// `(1 + x + 1/x)^n`. Zero outside `-n..=n`.
pub fn trinomial(n: usize, s: i64) -> u128 {
    let n_i = n as i64;
    if s < -n_i || s > n_i {
        return 0;
    }
    trinomial_row(n)[(s + n_i) as usize]
}

/// `J_s^n = [n, s] - [n, s+1]`.
pub fn count_parts(n: usize, s: usize) -> Result<u128> {
    if s > n {
        return Err(Error::DeviatorOrderRange { n, s });
    }
    let row = trinomial_row(n);
    let at = |k: usize| row.get(k + n).copied().unwrap_or(0);
    Ok(at(s) - at(s + 1))
}

/// `[J_0^n, ..., J_n^n]`.
pub fn count_row(n: usize) -> Vec<u128> {
    (0..=n)
        .map(|s| count_parts(n, s).expect("s <= n"))
        .collect()
}

/// `sum_s (2s + 1) J_s^n`; equals `3^n`.
pub fn degrees_of_freedom(n: usize) -> u128 {
    count_row(n)
        .iter()
        .enumerate()
        .map(|(s, &j)| (2 * s as u128 + 1) * j)
        .sum()
}
