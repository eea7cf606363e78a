//! Matroids on small ground sets, stored as a full rank table over all subsets.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::modular::{is_prime, rank_mod_rows};
use crate::linalg::{rank, RationalMatrix};

/// Subsets of the ground set as bit masks.
pub type ElementSet = u32;

/// Exhaustive enumeration over 2^n subsets stops being desk-scale past this.
pub const MAX_GROUND: usize = 16;

pub fn elements(s: ElementSet) -> Vec<usize> {
    (0..32).filter(|&i| s >> i & 1 == 1).collect()
}

pub fn set_of(items: &[usize]) -> ElementSet {
    items.iter().fold(0, |acc, &i| acc | 1 << i)
}

fn full(n: usize) -> ElementSet {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Linear,
    Graphic,
    Uniform,
    Explicit,
    Minor,
    Dual,
}

#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    rank_table: Vec<u8>,
    flats: Vec<ElementSet>,
    flat_rank: Vec<usize>,
    flat_index: HashMap<ElementSet, usize>,
    by_rank: Vec<std::ops::Range<usize>>,
    provenance: Provenance,
    edges: Option<Vec<(usize, usize)>>,
}

/// Flats with their cover relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatLattice {
    pub flats: Vec<Vec<usize>>,
    pub rank_of: Vec<usize>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCounts {
    pub b: u64,
    pub b_i: Vec<u64>,
    /// Pair counts; the diagonal is left at zero.
    pub b_ij: Vec<Vec<u64>>,
}

impl Matroid {
    fn from_rank_table(n: usize, rank_table: Vec<u8>, provenance: Provenance) -> Result<Self> {
        for e in 0..n {
            if rank_table[1 << e] == 0 {
                return Err(Error::Loop {
                    element: e.to_string(),
                });
            }
        }
        let all = full(n);
        let mut flats: Vec<ElementSet> = (0..=all)
            .filter(|&s| {
                let r = rank_table[s as usize];
                (0..n).all(|e| s >> e & 1 == 1 || rank_table[(s | 1 << e) as usize] > r)
            })
            .collect();
        flats.sort_by_cached_key(|&f| (rank_table[f as usize], elements(f)));
        let rank = rank_table[all as usize] as usize;
        let flat_rank: Vec<usize> = flats.iter().map(|&f| rank_table[f as usize] as usize).collect();
        let flat_index = flats.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut by_rank = Vec::with_capacity(rank + 1);
        let mut start = 0;
        for k in 0..=rank {
            let end = start + flat_rank[start..].iter().take_while(|&&r| r == k).count();
            by_rank.push(start..end);
            start = end;
        }
        Ok(Self {
            n,
            rank,
            rank_table,
            flats,
            flat_rank,
            flat_index,
            by_rank,
            provenance,
            edges: None,
        })
    }

    fn check_ground(n: usize) -> Result<()> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        Ok(())
    }

    /// Column matroid of a rational matrix.
    pub fn from_linear(matrix: &RationalMatrix) -> Result<Self> {
        let n = matrix.cols();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Self::check_ground(n)?;
        for j in 0..n {
            if matrix.column(j).iter().all(num_traits::Zero::is_zero) {
                return Err(Error::Loop {
                    element: j.to_string(),
                });
            }
        }
        let mut table = vec![0u8; 1 << n];
        for s in 1..(1usize << n) {
            let cols = elements(s as ElementSet);
            let sub = RationalMatrix::from_fn(matrix.rows(), cols.len(), |i, j| {
                matrix[(i, cols[j])].clone()
            });
            table[s] = rank(&sub) as u8;
        }
        Self::from_rank_table(n, table, Provenance::Linear)
    }

    /// Column matroid of an integer matrix read over GF(p).
    pub fn from_linear_gf(matrix: &[Vec<i64>], p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        let rows = matrix.len();
        let n = matrix.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Self::check_ground(n)?;
        let red: Vec<Vec<u64>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
            .collect();
        for j in 0..n {
            if red.iter().all(|r| r[j] == 0) {
                return Err(Error::Loop {
                    element: j.to_string(),
                });
            }
        }
        let mut table = vec![0u8; 1 << n];
        for s in 1..(1usize << n) {
            let cols = elements(s as ElementSet);
            let sub: Vec<Vec<u64>> = (0..rows)
                .map(|i| cols.iter().map(|&j| red[i][j]).collect())
                .collect();
            table[s] = rank_mod_rows(sub, p) as u8;
        }
        Self::from_rank_table(n, table, Provenance::Linear)
    }

    /// Cycle matroid of a multigraph given by its edge list.
    pub fn from_graph(edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop { index, vertex: u });
            }
        }
        let n = edges.len();
        Self::check_ground(n)?;
        let vertices = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
        let mut table = vec![0u8; 1 << n];
        for (s, slot) in table.iter_mut().enumerate() {
            let mut dsu = Dsu::new(vertices);
            let mut r = 0;
            for e in elements(s as ElementSet) {
                if dsu.union(edges[e].0, edges[e].1) {
                    r += 1;
                }
            }
            *slot = r;
        }
        let mut m = Self::from_rank_table(n, table, Provenance::Graphic)?;
        m.edges = Some(edges.to_vec());
        Ok(m)
    }

    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::InvalidUniform { r, n });
        }
        Self::check_ground(n)?;
        let table = (0..1u32 << n)
            .map(|s| (s.count_ones() as usize).min(r) as u8)
            .collect();
        Self::from_rank_table(n, table, Provenance::Uniform)
    }

    /// Builds a matroid from its list of flats after checking the flat axioms.
    pub fn from_flats(n: usize, flats: &[Vec<usize>]) -> Result<Self> {
        Self::check_ground(n)?;
        let all = full(n);
        let mut set: Vec<ElementSet> = Vec::with_capacity(flats.len());
        for f in flats {
            if let Some(&e) = f.iter().find(|&&e| e >= n) {
                return Err(Error::AxiomViolation {
                    axiom: 0,
                    witness: format!("element {e} is outside the ground set 0..{n}"),
                });
            }
            set.push(set_of(f));
        }
        set.sort_unstable();
        set.dedup();
        let show = |s: ElementSet| format!("{:?}", elements(s));

        if !set.contains(&all) {
            return Err(Error::AxiomViolation {
                axiom: 1,
                witness: "the ground set is not listed as a flat".into(),
            });
        }
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                if set.binary_search(&(a & b)).is_err() {
                    return Err(Error::AxiomViolation {
                        axiom: 2,
                        witness: format!("{} ∩ {} = {} is not a flat", show(a), show(b), show(a & b)),
                    });
                }
            }
        }
        let covers = |f: ElementSet| -> Vec<ElementSet> {
            let above: Vec<ElementSet> =
                set.iter().copied().filter(|&g| g != f && g & f == f).collect();
            above
                .iter()
                .copied()
                .filter(|&g| !above.iter().any(|&h| h != g && h & g == h))
                .collect()
        };
        for &f in &set {
            let cov = covers(f);
            for e in elements(all & !f) {
                let hits = cov.iter().filter(|&&g| g >> e & 1 == 1).count();
                if hits != 1 {
                    return Err(Error::AxiomViolation {
                        axiom: 3,
                        witness: format!(
                            "element {e} lies in {hits} flats covering {}",
                            show(f)
                        ),
                    });
                }
            }
        }
        if !set.contains(&0) {
            return Err(Error::AxiomViolation {
                axiom: 4,
                witness: "the empty set is not a flat, so the matroid has loops".into(),
            });
        }

        // Rank of a flat is the length of its chains from ∅; all maximal chains must agree.
        let mut shortest: HashMap<ElementSet, usize> = HashMap::from([(0, 0)]);
        let mut longest: HashMap<ElementSet, usize> = HashMap::from([(0, 0)]);
        let mut order = set.clone();
        order.sort_by_key(|s| s.count_ones());
        for &f in &order {
            let lo = shortest[&f];
            let hi = longest[&f];
            for g in covers(f) {
                let s = shortest.entry(g).or_insert(usize::MAX);
                *s = (*s).min(lo + 1);
                let l = longest.entry(g).or_insert(0);
                *l = (*l).max(hi + 1);
            }
        }
        for &f in &set {
            if shortest[&f] != longest[&f] {
                return Err(Error::AxiomViolation {
                    axiom: 5,
                    witness: format!(
                        "maximal chains below {} have lengths {} and {}",
                        show(f),
                        shortest[&f],
                        longest[&f]
                    ),
                });
            }
        }
        let mut table = vec![0u8; 1 << n];
        for s in 0..=all {
            let cl = set.iter().copied().filter(|&f| f & s == s).fold(all, |a, f| a & f);
            table[s as usize] = shortest[&cl] as u8;
        }
        let m = Self::from_rank_table(n, table, Provenance::Explicit)?;
        if m.flats.len() != set.len() {
            return Err(Error::Internal("flat list is not closed under the derived rank".into()));
        }
        Ok(m)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Edge list when the matroid was built from a graph.
    pub fn graph_edges(&self) -> Option<&[(usize, usize)]> {
        self.edges.as_deref()
    }

    pub fn ground(&self) -> ElementSet {
        full(self.n)
    }

    pub fn rank_of(&self, s: ElementSet) -> usize {
        self.rank_table[s as usize] as usize
    }

    pub fn closure(&self, s: ElementSet) -> ElementSet {
        let r = self.rank_of(s);
        (0..self.n).fold(s, |acc, e| {
            if self.rank_of(s | 1 << e) == r {
                acc | 1 << e
            } else {
                acc
            }
        })
    }

    pub fn is_flat(&self, s: ElementSet) -> bool {
        self.flat_index.contains_key(&s)
    }

    /// All flats, sorted by rank and then lexicographically by element list.
    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    pub fn flat_rank(&self, index: usize) -> usize {
        self.flat_rank[index]
    }

    pub fn flat_index(&self, s: ElementSet) -> Option<usize> {
        self.flat_index.get(&s).copied()
    }

    pub fn flats_of_rank(&self, k: usize) -> &[ElementSet] {
        self.by_rank.get(k).map_or(&[], |r| &self.flats[r.clone()])
    }

    /// Index range of the flats of rank `k` in `flats()`.
    pub fn rank_range(&self, k: usize) -> std::ops::Range<usize> {
        self.by_rank.get(k).cloned().unwrap_or(0..0)
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        self.rank_of(s) == s.count_ones() as usize
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.rank_of(self.ground() & !(1 << e)) < self.rank
    }

    pub fn lattice(&self) -> FlatLattice {
        let mut covers = Vec::new();
        for (i, &f) in self.flats.iter().enumerate() {
            for j in self.rank_range(self.flat_rank[i] + 1) {
                if self.flats[j] & f == f {
                    covers.push((i, j));
                }
            }
        }
        FlatLattice {
            flats: self.flats.iter().map(|&f| elements(f)).collect(),
            rank_of: self.flat_rank.clone(),
            covers,
        }
    }

    /// Möbius function μ(F, G) on flat indices.
    pub fn mobius(&self, f: usize, g: usize) -> Result<i64> {
        let (fs, gs) = (self.flats[f], self.flats[g]);
        if fs & gs != fs {
            return Err(Error::Incomparable);
        }
        let interval: Vec<usize> = (f..=g)
            .filter(|&h| self.flats[h] & fs == fs && self.flats[h] & gs == self.flats[h])
            .collect();
        let mut mu: HashMap<usize, i64> = HashMap::new();
        for &h in &interval {
            let value = if h == f {
                1
            } else {
                let hs = self.flats[h];
                -interval
                    .iter()
                    .take_while(|&&k| k < h)
                    .filter(|&&k| self.flats[k] & hs == self.flats[k])
                    .map(|k| mu[k])
                    .sum::<i64>()
            };
            mu.insert(h, value);
        }
        Ok(mu[&g])
    }

    /// μ(∅, F) for every flat, in flat order.
    pub fn mobius_from_bottom(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.flats.len()];
        for h in 0..self.flats.len() {
            if h == 0 {
                mu[0] = 1;
                continue;
            }
            let hs = self.flats[h];
            mu[h] = -(0..h)
                .filter(|&k| self.flats[k] & hs == self.flats[k])
                .map(|k| mu[k])
                .sum::<i64>();
        }
        mu
    }

    /// Deletes `delete` and contracts `contract`; surviving elements are relabelled in order.
    pub fn minor(&self, delete: ElementSet, contract: ElementSet) -> Result<Self> {
        if delete & contract != 0 {
            return Err(Error::OverlappingMinor(elements(delete & contract)[0]));
        }
        let keep = elements(self.ground() & !delete & !contract);
        let n = keep.len();
        let rc = self.rank_of(contract);
        let mut table = vec![0u8; 1 << n];
        for (s, slot) in table.iter_mut().enumerate() {
            let orig = elements(s as ElementSet)
                .into_iter()
                .fold(contract, |acc, i| acc | 1 << keep[i]);
            *slot = (self.rank_of(orig) - rc) as u8;
        }
        for (i, &e) in keep.iter().enumerate() {
            if table[1 << i] == 0 {
                return Err(Error::MinorLoop { element: e });
            }
        }
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Self::from_rank_table(n, table, Provenance::Minor)
    }

    pub fn delete(&self, e: usize) -> Result<Self> {
        self.minor(1 << e, 0)
    }

    pub fn contract(&self, e: usize) -> Result<Self> {
        self.minor(0, 1 << e)
    }

    pub fn dual(&self) -> Result<Self> {
        if let Some(e) = (0..self.n).find(|&e| self.is_coloop(e)) {
            return Err(Error::Coloop { element: e });
        }
        let all = self.ground();
        let table = (0..=all)
            .map(|s| (s.count_ones() as usize + self.rank_of(all & !s) - self.rank) as u8)
            .collect();
        Self::from_rank_table(self.n, table, Provenance::Dual)
    }

    pub fn bases(&self) -> Vec<ElementSet> {
        (0..=self.ground())
            .filter(|&s| s.count_ones() as usize == self.rank && self.rank_of(s) == self.rank)
            .collect()
    }

    pub fn basis_statistics(&self) -> Result<BasisCounts> {
        if self.rank < 2 {
            return Err(Error::RankTooSmall {
                rank: self.rank,
                required: 2,
            });
        }
        let n = self.n;
        let mut counts = BasisCounts {
            b: 0,
            b_i: vec![0; n],
            b_ij: vec![vec![0; n]; n],
        };
        for basis in self.bases() {
            counts.b += 1;
            let es = elements(basis);
            for (x, &i) in es.iter().enumerate() {
                counts.b_i[i] += 1;
                for &j in &es[x + 1..] {
                    counts.b_ij[i][j] += 1;
                    counts.b_ij[j][i] += 1;
                }
            }
        }
        Ok(counts)
    }

    /// Relabels a matroid built from flats by the same lattice, used for equality tests.
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.n == other.n && self.flats == other.flats
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank_table == other.rank_table
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("provenance", &self.provenance)
            .field("flats", &self.flats.iter().map(|&s| elements(s)).collect::<Vec<_>>())
            .finish()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Number of connected components among the vertices touched by `edges`, plus isolated
/// vertices below the largest label.
pub fn graph_components(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut dsu = Dsu::new(vertices);
    let merged = edges.iter().filter(|&&(u, v)| dsu.union(u, v)).count();
    vertices - merged
}
