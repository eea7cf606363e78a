use super::integer::IntMatrix;

/// Mersenne prime 2^31 − 1.
pub const PRIME_A: u64 = 2_147_483_647;
/// Largest prime below 2^31 − 19; used when the first prime is unlucky.
pub const PRIME_B: u64 = 2_147_483_629;

fn reduce(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Rank of `m` over GF(p). `p` must be a prime below 2^32.
pub fn rank_mod(m: &IntMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| m.row(i).iter().map(|&x| reduce(x, p)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        let prow: Vec<u64> = a[rank][c..].iter().map(|&x| x * inv % p).collect();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for (x, &y) in row[c..].iter_mut().zip(&prow) {
                *x = (*x + g * y) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over GF(p) for an arbitrary small prime, as a `Vec<Vec<u64>>` already reduced.
pub fn rank_mod_rows(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        let prow: Vec<u64> = a[rank].iter().map(|&x| x * inv % p).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let g = p - row[c];
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x = (*x + g * y) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// A full rank modulo a prime certifies full rank over Q. Returns `None` when both
/// primes are inconclusive, in which case the caller must fall back to exact elimination.
pub fn certify_full_rank(m: &IntMatrix) -> Option<bool> {
    let full = m.rows().min(m.cols());
    for p in [PRIME_A, PRIME_B] {
        if rank_mod(m, p) == full {
            return Some(true);
        }
    }
    None
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_rank_small_cases() {
        let m = IntMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as i128);
        assert_eq!(rank_mod(&m, PRIME_A), 2);
        assert_eq!(rank_mod(&IntMatrix::identity(4), PRIME_B), 4);
        // 2 is singular mod 2 but not over Q
        let two = IntMatrix::from_fn(1, 1, |_, _| 2);
        assert_eq!(rank_mod(&two, 2), 0);
        assert_eq!(certify_full_rank(&two), Some(true));
        // rank deficient over Q is never certified
        assert_eq!(certify_full_rank(&m), None);
    }

    #[test]
    fn primes() {
        assert!(is_prime(PRIME_A));
        assert!(is_prime(PRIME_B));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
