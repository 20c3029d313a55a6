//! Region builders, balancedness, forced-lozenge reduction and region splitting.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{lozenge_of, UnitTriangle};
use crate::qlaurent::LaurentQ;
use crate::weights::{lozenge_weight, WeightScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    P,
    Pprime,
    R1,
    R2,
    R3,
    R4,
    A,
    B,
    C,
    D,
    S,
    T,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::P,
        Family::Pprime,
        Family::R1,
        Family::R2,
        Family::R3,
        Family::R4,
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::S,
        Family::T,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::P => "P",
            Family::Pprime => "Pprime",
            Family::R1 => "R1",
            Family::R2 => "R2",
            Family::R3 => "R3",
            Family::R4 => "R4",
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::S => "S",
            Family::T => "T",
        }
    }

    pub fn quartered_kind(&self) -> Option<u8> {
        match self {
            Family::R1 => Some(1),
            Family::R2 => Some(2),
            Family::R3 => Some(3),
            Family::R4 => Some(4),
            _ => None,
        }
    }

    pub fn quartered(kind: u8) -> Option<Family> {
        match kind {
            1 => Some(Family::R1),
            2 => Some(Family::R2),
            3 => Some(Family::R3),
            4 => Some(Family::R4),
            _ => None,
        }
    }

    pub fn scheme(&self) -> WeightScheme {
        match self {
            Family::P | Family::R1 | Family::R2 | Family::A | Family::B => WeightScheme::Symmetric,
            _ => WeightScheme::Halved,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "p'" | "pp" | "pprime" | "p-prime" => return Ok(Family::Pprime),
            _ => {}
        }
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(&lower))
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("not a subregion")]
    NotSubregion,
}

/// Family tag plus integer parameters.
///
/// `n` is the number of dents for R-families and the length of `h` for
/// C/D/S/T; for P/P' it is the size parameter. `m` is the length of `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionSpec {
    pub family: Family,
    pub x: i64,
    pub n: i64,
    pub d: i64,
    pub u: i64,
    pub m: i64,
    pub s: Vec<i64>,
    pub l: Vec<i64>,
    pub h: Vec<i64>,
}

impl RegionSpec {
    fn blank(family: Family, x: i64) -> Self {
        RegionSpec {
            family,
            x,
            n: 0,
            d: 0,
            u: 0,
            m: 0,
            s: Vec::new(),
            l: Vec::new(),
            h: Vec::new(),
        }
    }

    pub fn halved(prime: bool, n: i64, x: i64) -> Self {
        let family = if prime { Family::Pprime } else { Family::P };
        RegionSpec {
            n,
            ..Self::blank(family, x)
        }
    }

    pub fn quartered(kind: u8, x: i64, s: &[i64]) -> Self {
        let family = Family::quartered(kind).expect("quartered kind is 1..=4");
        RegionSpec {
            n: s.len() as i64,
            s: s.to_vec(),
            ..Self::blank(family, x)
        }
    }

    pub fn type_a(x: i64, d: i64, l: &[i64]) -> Self {
        Self::one_sided(Family::A, x, d, l)
    }

    pub fn type_b(x: i64, d: i64, l: &[i64]) -> Self {
        Self::one_sided(Family::B, x, d, l)
    }

    pub fn type_c(x: i64, u: i64, h: &[i64]) -> Self {
        Self::one_sided(Family::C, x, u, h)
    }

    pub fn type_d(x: i64, u: i64, h: &[i64]) -> Self {
        Self::one_sided(Family::D, x, u, h)
    }

    fn one_sided(family: Family, x: i64, size: i64, dents: &[i64]) -> Self {
        let base = Self::blank(family, x);
        match family {
            Family::A | Family::B => RegionSpec {
                d: size,
                m: dents.len() as i64,
                l: dents.to_vec(),
                ..base
            },
            _ => RegionSpec {
                u: size,
                n: dents.len() as i64,
                h: dents.to_vec(),
                ..base
            },
        }
    }

    pub fn type_s(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Self {
        Self::two_sided(Family::S, x, u, d, l, h)
    }

    pub fn type_t(x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Self {
        Self::two_sided(Family::T, x, u, d, l, h)
    }

    fn two_sided(family: Family, x: i64, u: i64, d: i64, l: &[i64], h: &[i64]) -> Self {
        RegionSpec {
            u,
            d,
            m: l.len() as i64,
            n: h.len() as i64,
            l: l.to_vec(),
            h: h.to_vec(),
            ..Self::blank(family, x)
        }
    }

    /// `min(u-n, d-m)`.
    pub fn e(&self) -> i64 {
        (self.u - self.n).min(self.d - self.m)
    }

    /// `min(u-n, d-m+1)`.
    pub fn e_prime(&self) -> i64 {
        (self.u - self.n).min(self.d - self.m + 1)
    }

    pub fn validate(&self) -> Result<(), RegionError> {
        let bad = |msg: String| Err(RegionError::InvalidParameters(msg));
        if self.x < 0 || self.n < 0 || self.d < 0 || self.u < 0 || self.m < 0 {
            return bad("negative size parameter".into());
        }
        check_increasing("s", &self.s)?;
        check_increasing("l", &self.l)?;
        check_increasing("h", &self.h)?;
        let uses_s = self.family.quartered_kind().is_some();
        let uses_l = matches!(self.family, Family::A | Family::B | Family::S | Family::T);
        let uses_h = matches!(self.family, Family::C | Family::D | Family::S | Family::T);
        if !uses_s && !self.s.is_empty() {
            return bad(format!("family {} takes no s-list", self.family));
        }
        if !uses_l && !self.l.is_empty() {
            return bad(format!("family {} takes no l-list", self.family));
        }
        if !uses_h && !self.h.is_empty() {
            return bad(format!("family {} takes no h-list", self.family));
        }
        if uses_s {
            if self.n != self.s.len() as i64 {
                return bad(format!("n={} but {} dents given", self.n, self.s.len()));
            }
            if let Some(&top) = self.s.last() {
                if top > self.n + self.x {
                    return bad(format!("dent {top} exceeds n+x={}", self.n + self.x));
                }
            }
        }
        if uses_l {
            if self.m != self.l.len() as i64 {
                return bad(format!("m={} but l has {} entries", self.m, self.l.len()));
            }
            if self.l.last().is_some_and(|&v| v > self.d) {
                return bad(format!("l entries must lie in [1,{}]", self.d));
            }
        }
        if uses_h {
            if self.n != self.h.len() as i64 {
                return bad(format!("n={} but h has {} entries", self.n, self.h.len()));
            }
            if self.h.last().is_some_and(|&v| v > self.u) {
                return bad(format!("h entries must lie in [1,{}]", self.u));
            }
        }
        Ok(())
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[i64]| {
            let parts: Vec<String> = v.iter().map(|k| k.to_string()).collect();
            format!("({})", parts.join(","))
        };
        let (fam, x) = (self.family, self.x);
        match fam {
            Family::P | Family::Pprime => write!(f, "{fam} n={} x={x}", self.n),
            Family::R1 | Family::R2 | Family::R3 | Family::R4 => {
                write!(f, "{fam} x={x} s={}", list(&self.s))
            }
            Family::A | Family::B => write!(f, "{fam} x={x} d={} l={}", self.d, list(&self.l)),
            Family::C | Family::D => write!(f, "{fam} x={x} u={} h={}", self.u, list(&self.h)),
            Family::S | Family::T => write!(
                f,
                "{fam} x={x} u={} d={} l={} h={}",
                self.u,
                self.d,
                list(&self.l),
                list(&self.h)
            ),
        }
    }
}

fn check_increasing(name: &str, v: &[i64]) -> Result<(), RegionError> {
    if v.first().is_some_and(|&a| a < 1) {
        return Err(RegionError::InvalidParameters(format!(
            "{name}-list entries must be positive"
        )));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RegionError::InvalidParameters(format!(
            "{name}-list must be strictly increasing"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    x: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<i64>>,
}

impl Serialize for RegionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use Family::*;
        let f = self.family;
        let repr = SpecRepr {
            family: f,
            x: self.x,
            n: matches!(f, P | Pprime | R1 | R2 | R3 | R4 | C | D | S | T).then_some(self.n),
            d: matches!(f, A | B | S | T).then_some(self.d),
            u: matches!(f, C | D | S | T).then_some(self.u),
            m: matches!(f, A | B | S | T).then_some(self.m),
            s: f.quartered_kind().map(|_| self.s.clone()),
            l: matches!(f, A | B | S | T).then(|| self.l.clone()),
            h: matches!(f, C | D | S | T).then(|| self.h.clone()),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RegionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = SpecRepr::deserialize(deserializer)?;
        let s = r.s.unwrap_or_default();
        let l = r.l.unwrap_or_default();
        let h = r.h.unwrap_or_default();
        let n = match r.family {
            Family::P | Family::Pprime => r.n.unwrap_or(0),
            Family::R1 | Family::R2 | Family::R3 | Family::R4 => r.n.unwrap_or(s.len() as i64),
            _ => r.n.unwrap_or(h.len() as i64),
        };
        Ok(RegionSpec {
            family: r.family,
            x: r.x,
            n,
            d: r.d.unwrap_or(0),
            u: r.u.unwrap_or(0),
            m: r.m.unwrap_or(l.len() as i64),
            s,
            l,
            h,
        })
    }
}

/// A finite set of unit triangles together with its weight scheme and the
/// `i`-coordinate of the j-axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    cells: BTreeSet<UnitTriangle>,
    scheme: WeightScheme,
    axis_offset: i64,
}

impl Region {
    pub fn new(cells: BTreeSet<UnitTriangle>, scheme: WeightScheme, axis_offset: i64) -> Self {
        Region {
            cells,
            scheme,
            axis_offset,
        }
    }

    pub fn empty(scheme: WeightScheme) -> Self {
        Region::new(BTreeSet::new(), scheme, 0)
    }

    pub fn cells(&self) -> &BTreeSet<UnitTriangle> {
        &self.cells
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn axis_offset(&self) -> i64 {
        self.axis_offset
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, t: &UnitTriangle) -> bool {
        self.cells.contains(t)
    }

    pub fn up_count(&self) -> usize {
        self.cells.iter().filter(|t| t.is_up()).count()
    }

    pub fn down_count(&self) -> usize {
        self.len() - self.up_count()
    }

    pub fn is_balanced(&self) -> bool {
        self.up_count() == self.down_count()
    }

    /// Same scheme and axis, different cells.
    pub fn with_cells(&self, cells: BTreeSet<UnitTriangle>) -> Region {
        Region::new(cells, self.scheme, self.axis_offset)
    }

    pub fn with_scheme(&self, scheme: WeightScheme) -> Region {
        Region::new(self.cells.clone(), scheme, self.axis_offset)
    }

    pub fn without(&self, removed: &[UnitTriangle]) -> Region {
        let mut cells = self.cells.clone();
        for t in removed {
            cells.remove(t);
        }
        self.with_cells(cells)
    }

    /// Weight of the lozenge formed by two adjacent cells.
    pub fn lozenge_weight(&self, a: UnitTriangle, b: UnitTriangle) -> LaurentQ {
        let loz = lozenge_of(a, b).expect("cells must be adjacent");
        lozenge_weight(self.scheme, &loz, self.axis_offset)
    }

    pub fn neighbors_in(&self, t: &UnitTriangle) -> impl Iterator<Item = UnitTriangle> + '_ {
        t.neighbors().into_iter().filter(|n| self.cells.contains(n))
    }

    /// One character per unit triangle: `^` up, `v` down, top row first.
    pub fn render(&self) -> String {
        let Some(min_i) = self.cells.iter().map(|t| t.i()).min() else {
            return String::new();
        };
        let row_of = |t: &UnitTriangle| if t.is_up() { t.j() } else { t.j() - 1 };
        let min_r = self.cells.iter().map(row_of).min().unwrap_or(0);
        let max_r = self.cells.iter().map(row_of).max().unwrap_or(0);
        let mut out = String::new();
        for r in (min_r..=max_r).rev() {
            let mut line: Vec<char> = Vec::new();
            for t in self.cells.iter().filter(|t| row_of(t) == r) {
                let col = (t.i() - min_i) as usize;
                if line.len() <= col {
                    line.resize(col + 1, ' ');
                }
                line[col] = if t.is_up() { '^' } else { 'v' };
            }
            out.extend(line);
            out.push('\n');
        }
        out
    }
}

/// Rows of a region bounded by a west and an east polyline, bottom row first.
/// `west[r]`/`east[r]` are the `i`-moves of the boundaries across row `r`;
/// the south-west corner sits at the origin.
fn stacked_rows(west: &[i64], east: &[i64], bottom: i64) -> BTreeSet<UnitTriangle> {
    assert_eq!(west.len(), east.len());
    let mut cells = BTreeSet::new();
    let (mut wl, mut er) = (0i64, 2 * bottom);
    for (r, (&w, &e)) in west.iter().zip(east).enumerate() {
        let r = r as i64;
        cells.extend((wl + 1..er).step_by(2).map(|i| UnitTriangle::up(i, r)));
        let (wl2, er2) = (wl + w, er + e);
        cells.extend(
            (wl2 + 1..er2)
                .step_by(2)
                .map(|i| UnitTriangle::down(i, r + 1)),
        );
        (wl, er) = (wl2, er2);
    }
    cells
}

/// `len` alternating moves starting with `first`.
fn zigzag(first: i64, len: i64) -> Vec<i64> {
    (0..len.max(0))
        .map(|r| if r % 2 == 0 { first } else { -first })
        .collect()
}

fn runs(parts: &[(i64, i64)]) -> Vec<i64> {
    parts
        .iter()
        .flat_map(|&(step, count)| std::iter::repeat_n(step, count.max(0) as usize))
        .collect()
}

pub fn build_region(spec: &RegionSpec) -> Result<Region, RegionError> {
    spec.validate()?;
    let scheme = spec.family.scheme();
    let region = |cells, axis| Ok(Region::new(cells, scheme, axis));
    let x = spec.x;
    match spec.family {
        Family::R1 | Family::R3 => {
            let n = spec.n;
            if n == 0 {
                return Ok(Region::empty(scheme));
            }
            let mut cells = stacked_rows(&zigzag(1, 2 * n - 1), &runs(&[(-1, 2 * n - 1)]), x + n);
            for &p in &spec.s {
                cells.remove(&UnitTriangle::up(2 * p - 1, 0));
            }
            region(cells, if spec.family == Family::R1 { 0 } else { 1 })
        }
        Family::R2 | Family::R4 => {
            let n = spec.n;
            let mut cells = stacked_rows(&zigzag(-1, 2 * n), &runs(&[(-1, 2 * n)]), x + n);
            for &p in &spec.s {
                cells.remove(&UnitTriangle::up(2 * p - 1, 0));
            }
            region(cells, if spec.family == Family::R2 { -1 } else { 0 })
        }
        Family::P | Family::Pprime => {
            let n = spec.n;
            let cells = stacked_rows(&zigzag(-1, 2 * n), &runs(&[(1, n), (-1, n)]), x);
            region(cells, if spec.family == Family::P { -1 } else { 0 })
        }
        Family::A | Family::C => {
            let (size, dents) = if spec.family == Family::A {
                (spec.d, &spec.l)
            } else {
                (spec.u, &spec.h)
            };
            let m = dents.len() as i64;
            let mut cells = stacked_rows(
                &zigzag(-1, 2 * size),
                &runs(&[(1, m), (-1, 2 * size - m)]),
                x + size - m,
            );
            for k in (1..=size).filter(|k| !dents.contains(k)) {
                cells.remove(&UnitTriangle::up(0, 2 * k - 1));
            }
            region(cells, if spec.family == Family::A { -1 } else { 0 })
        }
        Family::B | Family::D => {
            let (size, dents) = if spec.family == Family::B {
                (spec.d, &spec.l)
            } else {
                (spec.u, &spec.h)
            };
            let m = dents.len() as i64;
            let mut west = vec![-1];
            west.extend(zigzag(-1, 2 * size));
            let mut cells = stacked_rows(
                &west,
                &runs(&[(1, m), (-1, 2 * size - m + 1)]),
                x + size - m,
            );
            for k in (1..=size).filter(|k| !dents.contains(k)) {
                cells.remove(&UnitTriangle::up(-1, 2 * k));
            }
            region(cells, if spec.family == Family::B { -2 } else { -1 })
        }
        Family::S | Family::T => {
            let (u, d, m, n) = (spec.u, spec.d, spec.m, spec.n);
            let mut west = zigzag(-1, 2 * d);
            west.push(-1);
            west.extend(zigzag(-1, 2 * u));
            let (east, bottom) = if spec.family == Family::S {
                (
                    runs(&[(1, 2 * d - m + n), (-1, 2 * u + m - n + 1)]),
                    x + u - n - spec.e(),
                )
            } else {
                (
                    runs(&[(1, 2 * d - m + n + 1), (-1, 2 * u + m - n)]),
                    x + u - n - spec.e_prime(),
                )
            };
            let mut cells = stacked_rows(&west, &east, bottom);
            for b in 1..=d {
                if !spec.l.contains(&(d + 1 - b)) {
                    cells.remove(&UnitTriangle::down(0, 2 * b - 1));
                }
            }
            for k in (1..=u).filter(|k| !spec.h.contains(k)) {
                cells.remove(&UnitTriangle::up(-1, 2 * d + 2 * k));
            }
            if spec.family == Family::T {
                cells.remove(&UnitTriangle::down(0, 2 * d + 1));
            }
            region(cells, -1)
        }
    }
}

/// The hexagon with sides `a, b, c, a, b, c` listed counter-clockwise from
/// the north side (north `a`, north-west `b`, south-west `c`).
pub fn hexagon(a: i64, b: i64, c: i64, scheme: WeightScheme) -> Region {
    let west = runs(&[(-1, c), (1, b)]);
    let east = runs(&[(1, b), (-1, c)]);
    let cells = stacked_rows(&west, &east, a)
        .into_iter()
        .map(|t| t.translate(2 * c, 0))
        .collect();
    Region::new(cells, scheme, 0)
}

/// Strips forced lozenges until none remain. Returns the reduced region and
/// the product `W` of the removed weights, so `M(r) = W · M(reduced)`. An
/// isolated cell makes the region untileable: the result is `(empty, 0)`.
pub fn forced_reduce(r: &Region) -> (Region, LaurentQ) {
    let mut cells = r.cells.clone();
    let mut weight = LaurentQ::one();
    let mut queue: VecDeque<UnitTriangle> = cells.iter().copied().collect();
    while let Some(t) = queue.pop_front() {
        if !cells.contains(&t) {
            continue;
        }
        let nbrs: Vec<UnitTriangle> = t
            .neighbors()
            .into_iter()
            .filter(|n| cells.contains(n))
            .collect();
        match nbrs.as_slice() {
            [] => return (Region::empty(r.scheme), LaurentQ::zero()),
            [partner] => {
                let partner = *partner;
                weight = &weight * &r.lozenge_weight(t, partner);
                cells.remove(&t);
                cells.remove(&partner);
                for t2 in partner.neighbors() {
                    if cells.contains(&t2) {
                        queue.push_back(t2);
                    }
                }
            }
            _ => {}
        }
    }
    (r.with_cells(cells), weight)
}

/// Hypotheses of the region-splitting lemma for `q ⊆ r`.
pub fn split_check(r: &Region, q: &Region) -> Result<bool, RegionError> {
    if !q.cells.is_subset(&r.cells) {
        return Err(RegionError::NotSubregion);
    }
    if !r.is_balanced() || !q.is_balanced() {
        return Ok(false);
    }
    let mut seam = q
        .cells
        .iter()
        .filter(|t| {
            t.neighbors()
                .iter()
                .any(|n| r.contains(n) && !q.contains(n))
        })
        .map(|t| t.orientation);
    let first = seam.next();
    Ok(seam.all(|o| Some(o) == first))
}
