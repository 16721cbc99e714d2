//! Shared oracles for the integration suites: integer Smith form, exact
//! integer rank, and seeded randomness. These stay independent of the
//! library's own normal-form code paths.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x76616c72616e6b; // fixed default seed

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Diagonal of the integer Smith normal form, nonnegative, divisibility
/// chain enforced. Classic elimination over Z with i128 arithmetic.
pub fn integer_smith_divisors(mat: &[Vec<i128>]) -> Vec<i128> {
    let rows = mat.len();
    let cols = mat[0].len();
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // locate the minimal nonzero entry in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && pivot
                            .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish_divisors(&a, steps);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in t..rows {
                        a[i][j] -= q * a[i][t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    finish_divisors(&a, steps)
}

fn finish_divisors(a: &[Vec<i128>], steps: usize) -> Vec<i128> {
    let mut d: Vec<i128> = (0..steps).map(|i| a[i][i].abs()).collect();
    // enforce the divisibility chain with gcd/lcm swaps
    loop {
        let mut changed = false;
        for i in 0..steps.saturating_sub(1) {
            if d[i + 1] != 0 && (d[i] == 0 || d[i + 1] % d[i] != 0) {
                let g = gcd(d[i], d[i + 1]);
                let l = if g == 0 { 0 } else { d[i] / g * d[i + 1] };
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    d
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank of an integer matrix over Q by fraction-free elimination.
pub fn integer_rank(mat: &[Vec<i128>]) -> usize {
    let rows = mat.len();
    let cols = mat[0].len();
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        for r in row + 1..rows {
            if a[r][col] == 0 {
                continue;
            }
            let (p, q) = (a[row][col], a[r][col]);
            for j in col..cols {
                a[r][j] = a[r][j] * p - a[row][j] * q;
            }
            let g = a[r][col..].iter().fold(0, |acc, &x| gcd(acc, x));
            if g > 1 {
                for j in col..cols {
                    a[r][j] /= g;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Rank over F_p of a list of integer row vectors.
pub fn fp_rank(rows: &[Vec<i128>], p: i128) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..a.len()).find(|&r| a[r][col] % p != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = mod_inv(a[row][col], p);
        for j in 0..cols {
            a[row][j] = a[row][j] * inv % p;
        }
        for r in 0..a.len() {
            if r != row && a[r][col] % p != 0 {
                let f = a[r][col];
                for j in 0..cols {
                    a[r][j] = (a[r][j] - f * a[row][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == a.len() {
            break;
        }
    }
    rank
}

fn mod_inv(x: i128, p: i128) -> i128 {
    let mut result = 1i128;
    let mut base = x.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// p-adic valuation of a nonzero integer.
pub fn int_val(x: i128, p: i128) -> u32 {
    assert!(x != 0);
    let mut v = 0;
    let mut x = x.abs();
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod selftest {
    use super::*;

    #[test]
    fn smith_oracle_on_known_matrices() {
        assert_eq!(
            integer_smith_divisors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            vec![2, 2, 156]
        );
        assert_eq!(
            integer_smith_divisors(&[vec![2, 3], vec![3, 0]]),
            vec![1, 9]
        );
    }

    #[test]
    fn rank_oracle() {
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![2, 3], vec![3, 0]]), 2);
    }
}
