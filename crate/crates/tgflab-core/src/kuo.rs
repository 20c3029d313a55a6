//! Kuo condensation on dual graphs, and the region recurrences it yields.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::lattice::UnitTriangle;
use crate::matchgen::{dual_graph, matching_gf, matching_gf_profile, DualGraph};
use crate::qlaurent::{rational, LaurentQ};
use crate::regions::{build_region, Family, Region, RegionError, RegionSpec};
use crate::weights::symmetric_weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KuoError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Region(#[from] RegionError),
}

fn violated<T>(msg: impl Into<String>) -> Result<T, KuoError> {
    Err(KuoError::Precondition(msg.into()))
}

/// A vertex of a dual graph: an index into its up or down vertex list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Up(usize),
    Down(usize),
}

impl Vertex {
    fn is_up(&self) -> bool {
        matches!(self, Vertex::Up(_))
    }
}

fn cell(g: &DualGraph, v: Vertex) -> UnitTriangle {
    match v {
        Vertex::Up(k) => g.up_vertices[k],
        Vertex::Down(k) => g.down_vertices[k],
    }
}

fn vertex_of(g: &DualGraph, t: UnitTriangle) -> Option<Vertex> {
    if t.is_up() {
        g.up_vertices.iter().position(|c| *c == t).map(Vertex::Up)
    } else {
        g.down_vertices
            .iter()
            .position(|c| *c == t)
            .map(Vertex::Down)
    }
}

/// The graph with the given vertices deleted.
pub fn delete_vertices(g: &DualGraph, gone: &[Vertex]) -> DualGraph {
    let keep = |list: &[UnitTriangle], up: bool| -> (Vec<UnitTriangle>, Vec<Option<usize>>) {
        let mut kept = Vec::new();
        let mut map = Vec::with_capacity(list.len());
        for (k, t) in list.iter().enumerate() {
            let v = if up { Vertex::Up(k) } else { Vertex::Down(k) };
            if gone.contains(&v) {
                map.push(None);
            } else {
                map.push(Some(kept.len()));
                kept.push(*t);
            }
        }
        (kept, map)
    };
    let (up_vertices, up_map) = keep(&g.up_vertices, true);
    let (down_vertices, down_map) = keep(&g.down_vertices, false);
    let edges = g
        .edges
        .iter()
        .filter_map(|(a, b, w)| Some((up_map[*a]?, down_map[*b]?, w.clone())))
        .collect();
    DualGraph {
        up_vertices,
        down_vertices,
        edges,
    }
}

/// Face boundary walks of the plane embedding inherited from the lattice.
pub fn faces(g: &DualGraph) -> Vec<Vec<Vertex>> {
    let mut rotation: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    let present: HashMap<UnitTriangle, Vertex> = g
        .up_vertices
        .iter()
        .enumerate()
        .map(|(k, t)| (*t, Vertex::Up(k)))
        .chain(
            g.down_vertices
                .iter()
                .enumerate()
                .map(|(k, t)| (*t, Vertex::Down(k))),
        )
        .collect();
    let edge_set: BTreeSet<(usize, usize)> = g.edges.iter().map(|(a, b, _)| (*a, *b)).collect();
    let linked = |a: Vertex, b: Vertex| match (a, b) {
        (Vertex::Up(x), Vertex::Down(y)) | (Vertex::Down(y), Vertex::Up(x)) => {
            edge_set.contains(&(x, y))
        }
        _ => false,
    };
    for (&t, &v) in &present {
        let around: Vec<Vertex> = t
            .neighbors_ccw()
            .iter()
            .filter_map(|n| present.get(n).copied())
            .filter(|&n| linked(v, n))
            .collect();
        rotation.insert(v, around);
    }
    let mut seen: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut darts: Vec<(Vertex, Vertex)> = rotation
        .iter()
        .flat_map(|(&a, ns)| ns.iter().map(move |&b| (a, b)))
        .collect();
    darts.sort();
    let mut out = Vec::new();
    for start in darts {
        if seen.contains(&start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut dart = start;
        while seen.insert(dart) {
            walk.push(dart.0);
            let (a, b) = dart;
            let around = &rotation[&b];
            let pos = around
                .iter()
                .position(|&x| x == a)
                .expect("symmetric rotation");
            let next = around[(pos + around.len() - 1) % around.len()];
            dart = (b, next);
        }
        out.push(walk);
    }
    out
}

fn in_cyclic_order(walk: &[Vertex], order: &[Vertex; 4]) -> bool {
    let len = walk.len();
    (0..len).filter(|&k| walk[k] == order[0]).any(|start| {
        let mut want = 1;
        for step in 1..len {
            if want == 4 {
                break;
            }
            if walk[(start + step) % len] == order[want] {
                want += 1;
            }
        }
        want == 4
    })
}

/// Whether `u, v, w, s` appear in this cyclic order (either orientation)
/// on one face.
pub fn on_common_face(g: &DualGraph, quad: &[Vertex; 4]) -> bool {
    on_some_face(&faces(g), quad)
}

fn on_some_face(faces: &[Vec<Vertex>], quad: &[Vertex; 4]) -> bool {
    let reversed = [quad[3], quad[2], quad[1], quad[0]];
    faces
        .iter()
        .any(|f| in_cyclic_order(f, quad) || in_cyclic_order(f, &reversed))
}

fn distinct(quad: &[Vertex; 4]) -> bool {
    quad.iter().collect::<BTreeSet<_>>().len() == 4
}

fn m(g: &DualGraph, gone: &[Vertex]) -> LaurentQ {
    matching_gf(&delete_vertices(g, gone))
}

/// Both sides of the balanced identity
/// `M(G) M(G-uvws) = M(G-uv) M(G-ws) + M(G-us) M(G-vw)`.
pub fn kuo_balanced_sides(
    g: &DualGraph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    s: Vertex,
) -> Result<(LaurentQ, LaurentQ), KuoError> {
    let quad = [u, v, w, s];
    if g.up_vertices.len() != g.down_vertices.len() {
        return violated("classes differ in size");
    }
    if !distinct(&quad)
        || u.is_up() != w.is_up()
        || v.is_up() != s.is_up()
        || u.is_up() == v.is_up()
    {
        return violated("u, w must share a class opposite to v, s");
    }
    if !on_common_face(g, &quad) {
        return violated("u, v, w, s are not in cyclic order on a face");
    }
    let lhs = &m(g, &[]) * &m(g, &quad);
    let rhs = &(&m(g, &[u, v]) * &m(g, &[w, s])) + &(&m(g, &[u, s]) * &m(g, &[v, w]));
    Ok((lhs, rhs))
}

pub fn kuo_identity_balanced(
    g: &DualGraph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    s: Vertex,
) -> Result<bool, KuoError> {
    kuo_balanced_sides(g, u, v, w, s).map(|(a, b)| a == b)
}

/// Both sides of the unbalanced identity
/// `M(G-v) M(G-uws) = M(G-u) M(G-vws) + M(G-w) M(G-uvs)`.
pub fn kuo_unbalanced_sides(
    g: &DualGraph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    s: Vertex,
) -> Result<(LaurentQ, LaurentQ), KuoError> {
    let quad = [u, v, w, s];
    let (nu, nd) = (g.up_vertices.len(), g.down_vertices.len());
    let big_is_up = if nu == nd + 1 {
        true
    } else if nd == nu + 1 {
        false
    } else {
        return violated("classes must differ by exactly one");
    };
    if !distinct(&quad)
        || [u, v, w].iter().any(|x| x.is_up() != big_is_up)
        || s.is_up() == big_is_up
    {
        return violated("u, v, w must lie in the larger class and s in the smaller");
    }
    if !on_common_face(g, &quad) {
        return violated("u, v, w, s are not in cyclic order on a face");
    }
    let lhs = &m(g, &[v]) * &m(g, &[u, w, s]);
    let rhs = &(&m(g, &[u]) * &m(g, &[v, w, s])) + &(&m(g, &[w]) * &m(g, &[u, v, s]));
    Ok((lhs, rhs))
}

pub fn kuo_identity_unbalanced(
    g: &DualGraph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    s: Vertex,
) -> Result<bool, KuoError> {
    kuo_unbalanced_sides(g, u, v, w, s).map(|(a, b)| a == b)
}

/// Every admissible `(u, v, w, s)` on every face of `g`, without repeats.
pub fn face_quads(g: &DualGraph, balanced: bool) -> Vec<[Vertex; 4]> {
    let big_is_up = g.up_vertices.len() >= g.down_vertices.len();
    let mut out = BTreeSet::new();
    let all = faces(g);
    for f in &all {
        let mut cyc: Vec<Vertex> = Vec::new();
        for &v in f {
            if !cyc.contains(&v) {
                cyc.push(v);
            }
        }
        let k = cyc.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        let q = [cyc[a], cyc[b], cyc[c], cyc[d]];
                        let ok = if balanced {
                            q[0].is_up() == q[2].is_up()
                                && q[1].is_up() == q[3].is_up()
                                && q[0].is_up() != q[1].is_up()
                        } else {
                            q[..3].iter().all(|x| x.is_up() == big_is_up)
                                && q[3].is_up() != big_is_up
                        };
                        if ok {
                            out.insert(q);
                        }
                    }
                }
            }
        }
    }
    out.into_iter().filter(|q| on_some_face(&all, q)).collect()
}

/// Some tiling of `r`, as up/down pairs, found by randomised search.
pub fn random_tiling<R: Rng>(r: &Region, rng: &mut R) -> Option<Vec<(UnitTriangle, UnitTriangle)>> {
    fn go<R: Rng>(
        cells: &mut BTreeSet<UnitTriangle>,
        out: &mut Vec<(UnitTriangle, UnitTriangle)>,
        rng: &mut R,
    ) -> bool {
        let Some(t) = cells
            .iter()
            .min_by_key(|t| t.neighbors().iter().filter(|n| cells.contains(n)).count())
            .copied()
        else {
            return true;
        };
        let mut options: Vec<UnitTriangle> = t
            .neighbors()
            .into_iter()
            .filter(|n| cells.contains(n))
            .collect();
        options.shuffle(rng);
        cells.remove(&t);
        for n in options {
            cells.remove(&n);
            out.push((t, n));
            if go(cells, out, rng) {
                return true;
            }
            out.pop();
            cells.insert(n);
        }
        cells.insert(t);
        false
    }
    let mut cells = r.cells().clone();
    let mut out = Vec::new();
    go(&mut cells, &mut out, rng).then_some(out)
}

fn random_weight<R: Rng>(rng: &mut R) -> LaurentQ {
    let terms = rng.gen_range(1..=2);
    let mut w = LaurentQ::zero();
    for _ in 0..terms {
        let c = rational(rng.gen_range(1..=5), rng.gen_range(1..=3));
        w = &w + &LaurentQ::monomial(c, rng.gen_range(-3..=3));
    }
    w
}

/// Randomly weighted dual graph of a random tileable piece of a built region:
/// a random tiling is chosen and some of its lozenges are deleted.
pub fn random_subregion<R: Rng>(rng: &mut R) -> Region {
    loop {
        let spec = random_desk_spec(rng);
        let Ok(r) = build_region(&spec) else { continue };
        if r.len() < 8 {
            continue;
        }
        let Some(tiling) = random_tiling(&r, rng) else {
            continue;
        };
        let mut cells = r.cells().clone();
        for (a, b) in &tiling {
            if rng.gen_bool(0.25) {
                cells.remove(a);
                cells.remove(b);
            }
        }
        if cells.len() >= 6 {
            return r.with_cells(cells);
        }
    }
}

fn random_desk_spec<R: Rng>(rng: &mut R) -> RegionSpec {
    let x = rng.gen_range(0..=2);
    let pick =
        |rng: &mut R, top: i64| -> Vec<i64> { (1..=top).filter(|_| rng.gen_bool(0.5)).collect() };
    match rng.gen_range(0..5) {
        0 => RegionSpec::halved(rng.gen_bool(0.5), rng.gen_range(1..=3), x),
        1 => {
            let n = rng.gen_range(1..=3);
            let mut all: Vec<i64> = (1..=n + x).collect();
            all.shuffle(rng);
            let mut s: Vec<i64> = all[..n as usize].to_vec();
            s.sort();
            RegionSpec::quartered(rng.gen_range(1..=4), x, &s)
        }
        2 => {
            let d = rng.gen_range(1..=3);
            let l = pick(rng, d);
            if rng.gen_bool(0.5) {
                RegionSpec::type_a(x, d, &l)
            } else {
                RegionSpec::type_b(x, d, &l)
            }
        }
        3 => {
            let u = rng.gen_range(1..=3);
            let h = pick(rng, u);
            if rng.gen_bool(0.5) {
                RegionSpec::type_c(x, u, &h)
            } else {
                RegionSpec::type_d(x, u, &h)
            }
        }
        _ => {
            let (u, d) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let (l, h) = (pick(rng, d), pick(rng, u));
            if rng.gen_bool(0.5) {
                RegionSpec::type_s(x, u, d, &l, &h)
            } else {
                RegionSpec::type_t(x, u, d, &l, &h)
            }
        }
    }
}

/// A random weighted instance for the balanced (or unbalanced) identity.
pub fn random_instance<R: Rng>(rng: &mut R, balanced: bool) -> (DualGraph, [Vertex; 4]) {
    loop {
        let mut r = random_subregion(rng);
        if !balanced {
            let downs: Vec<UnitTriangle> =
                r.cells().iter().filter(|t| !t.is_up()).copied().collect();
            let Some(gone) = downs.choose(rng) else {
                continue;
            };
            r = r.without(&[*gone]);
        }
        let mut g = dual_graph(&r);
        for e in g.edges.iter_mut() {
            e.2 = random_weight(rng);
        }
        let quads = face_quads(&g, balanced);
        if let Some(q) = quads.choose(rng) {
            return (g, *q);
        }
    }
}

/// Convenience for callers holding cells rather than indices.
pub fn vertices_of(g: &DualGraph, cells: &[UnitTriangle; 4]) -> Option<[Vertex; 4]> {
    Some([
        vertex_of(g, cells[0])?,
        vertex_of(g, cells[1])?,
        vertex_of(g, cells[2])?,
        vertex_of(g, cells[3])?,
    ])
}

pub fn cells_of(g: &DualGraph, quad: &[Vertex; 4]) -> [UnitTriangle; 4] {
    quad.map(|v| cell(g, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recurrence {
    HalvedP,
    HalvedPprime,
    QuarteredR1,
    TypeACase1,
    TypeACase2,
    TypeB,
    TypeS,
}

impl Recurrence {
    pub const ALL: [Recurrence; 7] = [
        Recurrence::HalvedP,
        Recurrence::HalvedPprime,
        Recurrence::QuarteredR1,
        Recurrence::TypeACase1,
        Recurrence::TypeACase2,
        Recurrence::TypeB,
        Recurrence::TypeS,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Recurrence::HalvedP => "halvedP",
            Recurrence::HalvedPprime => "halvedPprime",
            Recurrence::QuarteredR1 => "quarteredR1",
            Recurrence::TypeACase1 => "typeA_case1",
            Recurrence::TypeACase2 => "typeA_case2",
            Recurrence::TypeB => "typeB",
            Recurrence::TypeS => "typeS",
        }
    }

    /// Family of the region the recurrence is stated for.
    pub fn family(&self) -> Family {
        match self {
            Recurrence::HalvedP => Family::P,
            Recurrence::HalvedPprime => Family::Pprime,
            Recurrence::QuarteredR1 => Family::R1,
            Recurrence::TypeACase1 | Recurrence::TypeACase2 => Family::A,
            Recurrence::TypeB => Family::B,
            Recurrence::TypeS => Family::S,
        }
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Recurrence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Recurrence::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown recurrence `{s}`"))
    }
}

fn tgf(spec: RegionSpec) -> Result<LaurentQ, KuoError> {
    Ok(matching_gf_profile(&build_region(&spec)?))
}

fn shift_down(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| x - 1).collect()
}

fn with(mut v: Vec<i64>, a: i64) -> Vec<i64> {
    v.push(a);
    v.sort();
    v
}

/// Both sides of a recurrence, every TGF taken from the enumerator.
pub fn recurrence_sides(
    which: Recurrence,
    spec: &RegionSpec,
) -> Result<(LaurentQ, LaurentQ), KuoError> {
    if spec.family != which.family() {
        return violated(format!("{which} is stated for family {}", which.family()));
    }
    spec.validate()?;
    let x = spec.x;
    if x < 1 {
        return violated("x >= 1 required");
    }
    match which {
        Recurrence::HalvedP | Recurrence::HalvedPprime => {
            let prime = which == Recurrence::HalvedPprime;
            let n = spec.n;
            if n < 2 {
                return violated("n >= 2 required");
            }
            let p = |n, x| tgf(RegionSpec::halved(prime, n, x));
            let c = 2 * x + n - i64::from(prime);
            let (lhs, r1, r2) = side3(
                p(n, x)?,
                p(n - 2, x)?,
                p(n - 1, x)?,
                p(n - 1, x)?,
                p(n - 2, x + 1)?,
                p(n, x - 1)?,
            );
            Ok((lhs, &(&symmetric_weight(c) * &r1) + &r2))
        }
        Recurrence::QuarteredR1 => {
            let s = &spec.s;
            let n = s.len();
            if n < 2 {
                return violated("n >= 2 required");
            }
            let mut ext = s.clone();
            ext.push(n as i64 + x + 1);
            let l = (1..=n + 1)
                .filter(|&i| !s.contains(&(ext[i - 1] - 1)))
                .max()
                .unwrap_or(0);
            if !(l > 1 && l <= n) {
                return violated("needs 1 < l <= n");
            }
            let alpha = ext[l - 1] - 1;
            let r1 = |x, s: Vec<i64>| tgf(RegionSpec::quartered(1, x, &s));
            let (lhs, r1v, r2v) = side3(
                r1(x, s.clone())?,
                r1(x, with(s[1..n - 1].to_vec(), alpha))?,
                r1(x, with(s[1..].to_vec(), alpha))?,
                r1(x, s[..n - 1].to_vec())?,
                r1(x + 1, s[1..].to_vec())?,
                r1(x - 1, with(s[..n - 1].to_vec(), alpha))?,
            );
            Ok((lhs, &r1v + &r2v))
        }
        Recurrence::TypeACase1 | Recurrence::TypeACase2 | Recurrence::TypeB => {
            let (d, l) = (spec.d, &spec.l);
            let m = l.len();
            if m == 0 || l[m - 1] != d {
                return violated("needs m >= 1 and l_m = d");
            }
            let a = |x, d, l: Vec<i64>| tgf(RegionSpec::type_a(x, d, &l));
            let b = |x, d, l: Vec<i64>| tgf(RegionSpec::type_b(x, d, &l));
            let mi = m as i64;
            match which {
                Recurrence::TypeACase1 => {
                    if m < 2 || l[0] != 1 {
                        return violated("needs m >= 2 and l_1 = 1");
                    }
                    let mid = shift_down(&l[1..m - 1]);
                    let (lhs, r1, r2) = side3(
                        a(x, d, l.clone())?,
                        a(x, d - 2, mid.clone())?,
                        a(x, d - 1, l[..m - 1].to_vec())?,
                        a(x, d - 1, shift_down(&l[1..]))?,
                        a(x + 1, d - 2, mid)?,
                        a(x - 1, d, l.clone())?,
                    );
                    Ok((lhs, &(&symmetric_weight(2 * x + 2 * d - mi) * &r1) + &r2))
                }
                Recurrence::TypeACase2 => {
                    if l[0] == 1 {
                        return violated("needs l_1 > 1");
                    }
                    let head = shift_down(&l[..m - 1]);
                    let (lhs, r1, r2) = side3(
                        a(x, d, l.clone())?,
                        b(x, d - 2, head.clone())?,
                        a(x, d - 1, l[..m - 1].to_vec())?,
                        b(x, d - 1, shift_down(l))?,
                        b(x + 1, d - 2, head)?,
                        a(x - 1, d, l.clone())?,
                    );
                    Ok((lhs, &(&symmetric_weight(2 * x + 2 * d - mi) * &r1) + &r2))
                }
                _ => {
                    let head = l[..m - 1].to_vec();
                    let (lhs, r1, r2) = side3(
                        b(x, d, l.clone())?,
                        a(x, d - 1, head.clone())?,
                        b(x, d - 1, head.clone())?,
                        a(x, d, l.clone())?,
                        a(x + 1, d - 1, head)?,
                        b(x - 1, d, l.clone())?,
                    );
                    Ok((
                        lhs,
                        &(&symmetric_weight(2 * x + 2 * d - mi + 1) * &r1) + &r2,
                    ))
                }
            }
        }
        Recurrence::TypeS => {
            let (u, d, l, h) = (spec.u, spec.d, &spec.l, &spec.h);
            let (m, n) = (l.len(), h.len());
            if m == 0 || n == 0 || l[m - 1] != d || h[n - 1] != u {
                return violated("needs m, n >= 1, l_m = d and h_n = u");
            }
            let st = |x, u, d, l: &[i64], h: &[i64]| tgf(RegionSpec::type_s(x, u, d, l, h));
            let (lt, ht) = (&l[..m - 1], &h[..n - 1]);
            let c = 2 * x + 2 * u + 2 * d - 2 * spec.e() - m as i64 - n as i64;
            let (lhs, r1, r2) = side3(
                st(x, u, d, l, h)?,
                st(x, u - 1, d - 1, lt, ht)?,
                st(x, u - 1, d, l, ht)?,
                st(x, u, d - 1, lt, h)?,
                st(x + 1, u - 1, d - 1, lt, ht)?,
                st(x - 1, u, d, l, h)?,
            );
            Ok((lhs, &(&symmetric_weight(c) * &r1) + &r2))
        }
    }
}

fn side3(
    a: LaurentQ,
    b: LaurentQ,
    c: LaurentQ,
    d: LaurentQ,
    e: LaurentQ,
    f: LaurentQ,
) -> (LaurentQ, LaurentQ, LaurentQ) {
    (&a * &b, &c * &d, &e * &f)
}

pub fn recurrence_check(which: Recurrence, spec: &RegionSpec) -> Result<bool, KuoError> {
    recurrence_sides(which, spec).map(|(l, r)| l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchgen::dual_graph_with;
    use crate::weights::WeightScheme;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hexagon_graph() -> DualGraph {
        let r = build_region(&RegionSpec::halved(false, 1, 1)).unwrap();
        dual_graph_with(&r, |_, _| LaurentQ::from_terms([(0, rational(1, 1))]))
    }

    #[test]
    fn unit_hexagon_faces() {
        let g = hexagon_graph();
        let f = faces(&g);
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|w| w.len() == 6));
    }

    #[test]
    fn six_cycle_balanced() {
        let g = hexagon_graph();
        let quads = face_quads(&g, true);
        assert!(!quads.is_empty());
        for q in quads {
            let (l, r) = kuo_balanced_sides(&g, q[0], q[1], q[2], q[3]).unwrap();
            assert_eq!(l, r);
            assert_eq!(l, LaurentQ::from_terms([(0, rational(2, 1))]));
        }
    }

    #[test]
    fn rejects_bad_classes_and_faces() {
        let g = hexagon_graph();
        let (u0, u1, d0, d1) = (
            Vertex::Up(0),
            Vertex::Up(1),
            Vertex::Down(0),
            Vertex::Down(1),
        );
        assert!(kuo_identity_balanced(&g, u0, u1, d0, d1).is_err());
        assert!(kuo_identity_unbalanced(&g, u0, u1, Vertex::Up(2), d0).is_err());
    }

    #[test]
    fn halved_hexagon_all_face_choices() {
        let r = build_region(&RegionSpec::halved(false, 2, 1)).unwrap();
        let g = dual_graph(&r);
        let quads = face_quads(&g, true);
        assert!(quads.len() > 10);
        for q in quads {
            assert!(
                kuo_identity_balanced(&g, q[0], q[1], q[2], q[3]).unwrap(),
                "{q:?}"
            );
        }
    }

    #[test]
    fn quartered_with_filled_dent() {
        let r = build_region(&RegionSpec::quartered(1, 1, &[1, 3])).unwrap();
        let filled = r.with_cells({
            let mut c = r.cells().clone();
            c.insert(UnitTriangle::up(1, 0));
            c
        });
        let g = dual_graph(&filled);
        let quads = face_quads(&g, false);
        assert!(!quads.is_empty());
        for q in quads {
            assert!(
                kuo_identity_unbalanced(&g, q[0], q[1], q[2], q[3]).unwrap(),
                "{q:?}"
            );
        }
    }

    #[test]
    fn random_instances_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for balanced in [true, false] {
            for _ in 0..5 {
                let (g, q) = random_instance(&mut rng, balanced);
                let ok = if balanced {
                    kuo_identity_balanced(&g, q[0], q[1], q[2], q[3])
                } else {
                    kuo_identity_unbalanced(&g, q[0], q[1], q[2], q[3])
                };
                assert!(ok.unwrap());
            }
        }
    }

    #[test]
    fn random_subregions_are_tileable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let r = random_subregion(&mut rng);
            assert!(r.is_balanced());
            assert!(random_tiling(&r, &mut rng).is_some());
            assert_ne!(r.scheme(), WeightScheme::Volume);
        }
    }

    #[test]
    fn recurrence_examples() {
        assert!(recurrence_check(Recurrence::HalvedP, &RegionSpec::halved(false, 2, 1)).unwrap());
        assert!(
            recurrence_check(Recurrence::HalvedPprime, &RegionSpec::halved(true, 2, 1)).unwrap()
        );
        assert!(recurrence_check(
            Recurrence::QuarteredR1,
            &RegionSpec::quartered(1, 1, &[1, 3])
        )
        .unwrap());
        assert!(
            recurrence_check(Recurrence::TypeS, &RegionSpec::type_s(1, 1, 1, &[1], &[1])).unwrap()
        );
        assert!(
            recurrence_check(Recurrence::TypeACase1, &RegionSpec::type_a(1, 2, &[1, 2])).unwrap()
        );
        assert!(recurrence_check(Recurrence::TypeACase2, &RegionSpec::type_a(1, 2, &[2])).unwrap());
        assert!(recurrence_check(Recurrence::TypeB, &RegionSpec::type_b(1, 2, &[2])).unwrap());
    }

    #[test]
    fn recurrence_preconditions() {
        assert!(recurrence_check(Recurrence::HalvedP, &RegionSpec::halved(false, 1, 1)).is_err());
        assert!(recurrence_check(Recurrence::HalvedP, &RegionSpec::halved(false, 2, 0)).is_err());
        assert!(recurrence_check(Recurrence::TypeACase1, &RegionSpec::type_a(1, 2, &[2])).is_err());
        assert!(recurrence_check(Recurrence::TypeS, &RegionSpec::type_a(1, 2, &[2])).is_err());
        assert_eq!(
            "typeA_case2".parse::<Recurrence>().unwrap(),
            Recurrence::TypeACase2
        );
    }
}
