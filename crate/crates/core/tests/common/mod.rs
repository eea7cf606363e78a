//! Brute-force oracles that share no code with the library's algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rank function tabulated over all subsets of the ground set.
pub struct Oracle {
    pub n: usize,
    pub rank: Vec<usize>,
}

fn gauss_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn gauss_rank_mod(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let inv = |a: i64| -> i64 {
        let mut result = 1i64;
        let mut base = a.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    };
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let ic = inv(rows[r][c]);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c] * ic % p;
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

fn members(s: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| s >> i & 1 == 1).collect()
}

fn parse_q(v: &Value) -> Q {
    match v {
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => Q::new(a.parse().unwrap(), b.parse().unwrap()),
            None => Q::from_integer(s.parse().unwrap()),
        },
        other => q(other.as_i64().unwrap()),
    }
}

impl Oracle {
    pub fn from_fn(n: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let rank = (0..1usize << n).map(|s| f(&members(s, n))).collect();
        Self { n, rank }
    }

    pub fn uniform(r: usize, n: usize) -> Self {
        Self::from_fn(n, |s| s.len().min(r))
    }

    pub fn graph(edges: &[(usize, usize)]) -> Self {
        Self::from_fn(edges.len(), |s| {
            let mut parent: Vec<usize> = (0..64).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut r = 0;
            for &e in s {
                let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
                if a != b {
                    parent[a] = b;
                    r += 1;
                }
            }
            r
        })
    }

    /// Column matroid over the rationals.
    pub fn columns(matrix: &[Vec<Q>]) -> Self {
        let n = matrix[0].len();
        Self::from_fn(n, |s| {
            gauss_rank(s.iter().map(|&j| matrix.iter().map(|row| row[j].clone()).collect()).collect())
        })
    }

    pub fn columns_mod(matrix: &[Vec<i64>], p: i64) -> Self {
        let n = matrix[0].len();
        Self::from_fn(n, |s| gauss_rank_mod(s.iter().map(|&j| matrix.iter().map(|row| row[j]).collect()).collect(), p))
    }

    /// Rank of a set is the rank of the smallest listed flat containing it, where a flat's
    /// rank is the length of the longest chain of listed flats below it.
    pub fn flats(n: usize, flats: &[Vec<usize>]) -> Self {
        let sets: Vec<usize> = flats.iter().map(|f| f.iter().fold(0, |a, &e| a | 1 << e)).collect();
        let mut order = sets.clone();
        order.sort_by_key(|s| s.count_ones());
        let mut height = std::collections::HashMap::new();
        for &f in &order {
            let h = order
                .iter()
                .filter(|&&g| g != f && g & f == g)
                .map(|g| height[g] + 1)
                .max()
                .unwrap_or(0);
            height.insert(f, h);
        }
        Self::from_fn(n, |s| {
            let bits = s.iter().fold(0usize, |a, &e| a | 1 << e);
            let smallest = sets.iter().filter(|&&f| f & bits == bits).min_by_key(|f| f.count_ones()).unwrap();
            height[smallest]
        })
    }

    pub fn dual(&self) -> Self {
        let full = (1usize << self.n) - 1;
        let r = self.rank[full];
        let rank = (0..=full)
            .map(|s| s.count_ones() as usize + self.rank[full & !s] - r)
            .collect();
        Self { n: self.n, rank }
    }

    /// Builds the oracle from a catalog matroid document.
    pub fn from_document(doc: &Value, resolve: &dyn Fn(&str) -> Value) -> Self {
        if let Some(base) = doc.get("dual_of").and_then(Value::as_str) {
            return Self::from_document(&resolve(base), resolve).dual();
        }
        let usize_of = |k: &str| doc[k].as_u64().unwrap() as usize;
        match doc["type"].as_str().unwrap() {
            "uniform" => Self::uniform(usize_of("r"), usize_of("n")),
            "graph" => {
                let edges: Vec<(usize, usize)> = doc["edges"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize))
                    .collect();
                Self::graph(&edges)
            }
            "linear" => {
                let m: Vec<Vec<Q>> = doc["matrix"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|r| r.as_array().unwrap().iter().map(parse_q).collect())
                    .collect();
                Self::columns(&m)
            }
            "gf" => {
                let m: Vec<Vec<i64>> = doc["matrix"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|r| r.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
                    .collect();
                Self::columns_mod(&m, doc["p"].as_i64().unwrap())
            }
            "flats" => {
                let flats: Vec<Vec<usize>> = doc["flats"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|f| f.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect())
                    .collect();
                Self::flats(usize_of("ground"), &flats)
            }
            other => panic!("unknown document type {other}"),
        }
    }

    pub fn full_rank(&self) -> usize {
        self.rank[(1 << self.n) - 1]
    }

    pub fn f_vector(&self) -> Vec<i64> {
        let mut f = vec![0; self.full_rank() + 1];
        for (s, &r) in self.rank.iter().enumerate() {
            if r == s.count_ones() as usize {
                f[r] += 1;
            }
        }
        f
    }

    pub fn is_closed(&self, s: usize) -> bool {
        (0..self.n).all(|e| s >> e & 1 == 1 || self.rank[s | 1 << e] > self.rank[s])
    }

    pub fn closed_sets(&self) -> Vec<usize> {
        (0..1usize << self.n).filter(|&s| self.is_closed(s)).collect()
    }

    pub fn w_vector(&self) -> Vec<i64> {
        let mut w = vec![0; self.full_rank() + 1];
        for s in self.closed_sets() {
            w[self.rank[s]] += 1;
        }
        w
    }

    /// χ(q) = Σ_S (−1)^{|S|} q^{r − rk S}, leading coefficient first.
    pub fn charpoly(&self) -> Vec<i64> {
        let mut c = vec![0; self.full_rank() + 1];
        for (s, &r) in self.rank.iter().enumerate() {
            c[r] += if s.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        c
    }

    /// μ(∅, F) by the defining recursion over closed sets.
    pub fn mobius_bottom(&self) -> Vec<(usize, i64)> {
        let mut flats = self.closed_sets();
        flats.sort_by_key(|&f| (self.rank[f], f));
        let mut mu: Vec<(usize, i64)> = Vec::new();
        for &f in &flats {
            let below: i64 = mu.iter().filter(|(g, _)| *g != f && g & f == *g).map(|x| x.1).sum();
            mu.push((f, if f == flats[0] { 1 } else { -below }));
        }
        mu
    }

    pub fn bases(&self) -> Vec<usize> {
        let r = self.full_rank();
        (0..1usize << self.n)
            .filter(|&s| s.count_ones() as usize == r && self.rank[s] == r)
            .collect()
    }
}

/// Unsigned coefficients of χ(q)/(q − 1), leading one first.
pub fn reduced(chi: &[i64]) -> Vec<i64> {
    let mut out = Vec::new();
    let mut carry = 0;
    for &c in &chi[..chi.len() - 1] {
        carry += c;
        out.push(carry.abs());
    }
    assert_eq!(carry + chi[chi.len() - 1], 0);
    out
}

pub fn naive_permanent(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Q::zero();
    loop {
        total += perm.iter().enumerate().fold(Q::one(), |acc, (i, &j)| acc * &m[i][j]);
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return total;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Proper colourings with `k` colours by exhaustive assignment.
pub fn count_colourings(vertices: usize, edges: &[(usize, usize)], k: usize) -> i64 {
    let mut count = 0;
    let total = k.pow(vertices as u32);
    for code in 0..total {
        let colour = |v: usize| code / k.pow(v as u32) % k;
        if edges.iter().all(|&(a, b)| colour(a) != colour(b)) {
            count += 1;
        }
    }
    count
}

/// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier, leading coefficient first.
pub fn char_poly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mul = |x: &[Vec<Q>], y: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum()).collect())
            .collect()
    };
    let mut coeffs = vec![Q::one()];
    let mut m: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    for k in 1..=n {
        let am = mul(a, &m);
        let trace: Q = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -trace / q(k as i64);
        for i in 0..n {
            m[i] = am[i].clone();
            m[i][i] += &c;
        }
        coeffs.push(c);
    }
    coeffs
}

fn sign_changes(c: &[Q]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia of a symmetric matrix from Descartes' rule, exact because every root is real.
pub fn descartes_inertia(a: &[Vec<Q>]) -> (usize, usize, usize) {
    let c = char_poly(a);
    let n = a.len();
    let zero = c.iter().rev().take_while(|x| x.is_zero()).count();
    let pos = sign_changes(&c);
    let negated: Vec<Q> = c
        .iter()
        .enumerate()
        .map(|(i, x)| if (n - i) % 2 == 1 { -x.clone() } else { x.clone() })
        .collect();
    (pos, sign_changes(&negated), zero)
}

pub fn k4_edges() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
}

/// The displayed 6×6 pair-count matrix of K4.
pub fn hr_k4_display() -> Vec<Vec<i64>> {
    vec![
        vec![0, 3, 3, 3, 3, 4],
        vec![3, 0, 3, 3, 4, 3],
        vec![3, 3, 0, 4, 3, 3],
        vec![3, 3, 4, 0, 3, 3],
        vec![3, 4, 3, 3, 0, 3],
        vec![4, 3, 3, 3, 3, 0],
    ]
}
