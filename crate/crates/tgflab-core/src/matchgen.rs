//! Dual graphs and exact matching generating functions.
//!
//! Two independent engines: a memoised backtracking search over perfect
//! matchings of the dual graph, and a sweep-line profile DP over the region.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num::{BigRational, BigUint};
use num_traits::{One, Zero};

use crate::lattice::UnitTriangle;
use crate::qlaurent::LaurentQ;
use crate::regions::Region;

/// Commutative semiring of edge weights.
pub trait Weight: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Weight for T {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph<W = LaurentQ> {
    pub up_vertices: Vec<UnitTriangle>,
    pub down_vertices: Vec<UnitTriangle>,
    /// `(up index, down index, weight)`.
    pub edges: Vec<(usize, usize, W)>,
}

impl<W> DualGraph<W> {
    pub fn vertex_count(&self) -> usize {
        self.up_vertices.len() + self.down_vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn dual_graph(r: &Region) -> DualGraph<LaurentQ> {
    dual_graph_with(r, |a, b| r.lozenge_weight(a, b))
}

pub fn dual_graph_with<W, F>(r: &Region, mut weight: F) -> DualGraph<W>
where
    F: FnMut(UnitTriangle, UnitTriangle) -> W,
{
    let (up_vertices, down_vertices): (Vec<_>, Vec<_>) =
        r.cells().iter().copied().partition(|t| t.is_up());
    let down_index: HashMap<UnitTriangle, usize> = down_vertices
        .iter()
        .enumerate()
        .map(|(k, t)| (*t, k))
        .collect();
    let mut edges = Vec::new();
    for (a, up) in up_vertices.iter().enumerate() {
        for n in up.neighbors() {
            if let Some(&b) = down_index.get(&n) {
                edges.push((a, b, weight(*up, n)));
            }
        }
    }
    DualGraph {
        up_vertices,
        down_vertices,
        edges,
    }
}

struct Search<'a, W> {
    adj: Vec<Vec<(usize, usize)>>,
    edges: &'a [(usize, usize, W)],
    memo: HashMap<Vec<u64>, W>,
}

impl<W: Weight> Search<'_, W> {
    fn live(rem: &[u64], v: usize) -> bool {
        rem[v / 64] >> (v % 64) & 1 == 1
    }

    fn flip(rem: &mut [u64], v: usize) {
        rem[v / 64] ^= 1 << (v % 64);
    }

    fn solve(&mut self, rem: &mut Vec<u64>) -> W {
        if rem.iter().all(|w| *w == 0) {
            return W::one();
        }
        if let Some(w) = self.memo.get(rem.as_slice()) {
            return w.clone();
        }
        let mut pick = None;
        let mut best = usize::MAX;
        for (word, &bits) in rem.iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let v = word * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let deg = self.adj[v]
                    .iter()
                    .filter(|(o, _)| Self::live(rem, *o))
                    .count();
                if deg < best {
                    best = deg;
                    pick = Some(v);
                    if deg <= 1 {
                        break;
                    }
                }
            }
            if best <= 1 {
                break;
            }
        }
        let v = pick.expect("nonempty remainder");
        let mut total = W::zero();
        if best > 0 {
            Self::flip(rem, v);
            for k in 0..self.adj[v].len() {
                let (o, e) = self.adj[v][k];
                if !Self::live(rem, o) {
                    continue;
                }
                Self::flip(rem, o);
                let sub = self.solve(rem);
                Self::flip(rem, o);
                if !sub.is_zero() {
                    total = total + self.edges[e].2.clone() * sub;
                }
            }
            Self::flip(rem, v);
        }
        self.memo.insert(rem.clone(), total.clone());
        total
    }
}

/// Sum over perfect matchings of the product of edge weights.
pub fn matching_gf<W: Weight>(g: &DualGraph<W>) -> W {
    let nu = g.up_vertices.len();
    if nu != g.down_vertices.len() {
        return W::zero();
    }
    let nv = 2 * nu;
    let mut adj = vec![Vec::new(); nv];
    for (e, (a, b, _)) in g.edges.iter().enumerate() {
        adj[*a].push((nu + b, e));
        adj[nu + b].push((*a, e));
    }
    let mut rem = vec![0u64; nv.div_ceil(64)];
    for v in 0..nv {
        Search::<W>::flip(&mut rem, v);
    }
    let mut search = Search {
        adj,
        edges: &g.edges,
        memo: HashMap::new(),
    };
    search.solve(&mut rem)
}

/// Sweep-line DP over cells in lattice order. Each cell has at most two
/// later neighbours, so the profile is the set of already covered future
/// cells, stored relative to the sweep position.
pub fn matching_gf_profile_with<W, F>(r: &Region, mut weight: F) -> W
where
    W: Weight,
    F: FnMut(UnitTriangle, UnitTriangle) -> W,
{
    let cells: Vec<UnitTriangle> = r.cells().iter().copied().collect();
    let index: HashMap<UnitTriangle, usize> =
        cells.iter().enumerate().map(|(k, t)| (*t, k)).collect();
    let forward: Vec<Vec<(u32, W)>> = cells
        .iter()
        .enumerate()
        .map(|(k, t)| {
            t.neighbors()
                .into_iter()
                .filter_map(|n| {
                    let &m = index.get(&n)?;
                    (m > k).then(|| {
                        let off = m - k;
                        assert!(off < 128, "profile offset {off} exceeds 127");
                        (off as u32, weight(*t, n))
                    })
                })
                .collect()
        })
        .collect();
    let mut states: HashMap<u128, W> = HashMap::from([(0u128, W::one())]);
    for fwd in &forward {
        let mut next: HashMap<u128, W> = HashMap::with_capacity(states.len());
        let mut push = |mask: u128, w: W| match next.get_mut(&mask) {
            Some(acc) => *acc = acc.clone() + w,
            None => {
                next.insert(mask, w);
            }
        };
        for (mask, w) in states {
            if mask & 1 == 1 {
                push(mask >> 1, w);
                continue;
            }
            for (off, lw) in fwd {
                let bit = 1u128 << off;
                if mask & bit == 0 {
                    push((mask | bit) >> 1, w.clone() * lw.clone());
                }
            }
        }
        states = next;
        if states.is_empty() {
            return W::zero();
        }
    }
    states.remove(&0).unwrap_or_else(W::zero)
}

pub fn matching_gf_profile(r: &Region) -> LaurentQ {
    matching_gf_profile_with(r, |a, b| r.lozenge_weight(a, b))
}

/// Number of tilings.
pub fn tiling_count(r: &Region) -> BigUint {
    matching_gf_profile_with(r, |_, _| BigUint::one())
}

/// `M(R)` at `q = 1`, computed directly from the lozenge weights at `q = 1`.
/// Under wt2 this is the sum over tilings of `2^-(axis vertical lozenges)`.
pub fn weighted_count_at_one(r: &Region) -> BigRational {
    matching_gf_profile_with(r, |a, b| r.lozenge_weight(a, b).eval_at_one())
}
