//! Triangular-lattice geometry.
//!
//! `i` counts half side-lengths horizontally and `j` counts triangle heights.
//! Lattice vertices have even `i + j`. A unit triangle is addressed by the
//! midpoint of its horizontal edge: `Up(i, j)` has base `(i-1, j)–(i+1, j)` and
//! apex `(i, j+1)`; `Down(i, j)` has top `(i-1, j)–(i+1, j)` and apex `(i, j-1)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriPoint {
    pub i: i64,
    pub j: i64,
}

impl TriPoint {
    pub const fn new(i: i64, j: i64) -> Self {
        TriPoint { i, j }
    }

    pub fn is_vertex(&self) -> bool {
        (self.i + self.j).rem_euclid(2) == 0
    }

    pub fn translate(&self, di: i64, dj: i64) -> Self {
        TriPoint::new(self.i + di, self.j + dj)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitTriangle {
    pub orientation: Orientation,
    pub anchor: TriPoint,
}

impl UnitTriangle {
    pub const fn up(i: i64, j: i64) -> Self {
        UnitTriangle {
            orientation: Orientation::Up,
            anchor: TriPoint::new(i, j),
        }
    }

    pub const fn down(i: i64, j: i64) -> Self {
        UnitTriangle {
            orientation: Orientation::Down,
            anchor: TriPoint::new(i, j),
        }
    }

    pub fn is_up(&self) -> bool {
        self.orientation == Orientation::Up
    }

    pub fn i(&self) -> i64 {
        self.anchor.i
    }

    pub fn j(&self) -> i64 {
        self.anchor.j
    }

    pub fn translate(&self, di: i64, dj: i64) -> Self {
        UnitTriangle {
            orientation: self.orientation,
            anchor: self.anchor.translate(di, dj),
        }
    }

    /// Left, right, then vertical neighbour.
    pub fn neighbors(&self) -> [UnitTriangle; 3] {
        let TriPoint { i, j } = self.anchor;
        match self.orientation {
            Orientation::Up => [
                UnitTriangle::down(i - 1, j + 1),
                UnitTriangle::down(i + 1, j + 1),
                UnitTriangle::down(i, j),
            ],
            Orientation::Down => [
                UnitTriangle::up(i - 1, j - 1),
                UnitTriangle::up(i + 1, j - 1),
                UnitTriangle::up(i, j),
            ],
        }
    }

    /// Neighbours in counter-clockwise angular order around the centroid.
    pub fn neighbors_ccw(&self) -> [UnitTriangle; 3] {
        let [l, r, v] = self.neighbors();
        match self.orientation {
            Orientation::Up => [r, l, v],
            Orientation::Down => [v, l, r],
        }
    }

    pub fn vertices(&self) -> [TriPoint; 3] {
        let TriPoint { i, j } = self.anchor;
        let apex = match self.orientation {
            Orientation::Up => j + 1,
            Orientation::Down => j - 1,
        };
        [
            TriPoint::new(i - 1, j),
            TriPoint::new(i + 1, j),
            TriPoint::new(i, apex),
        ]
    }

    pub fn is_adjacent(&self, other: &UnitTriangle) -> bool {
        self.neighbors().contains(other)
    }
}

/// Column-major sweep order: by `i`, then `j`, with a down triangle before the
/// up triangle sharing its anchor. Every cell has at most two later neighbours.
impl Ord for UnitTriangle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.anchor.i, self.anchor.j, self.orientation).cmp(&(
            other.anchor.i,
            other.anchor.j,
            other.orientation,
        ))
    }
}

impl PartialOrd for UnitTriangle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UnitTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.is_up() { "U" } else { "D" };
        write!(f, "{tag}({},{})", self.anchor.i, self.anchor.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LozengeKind {
    Vertical,
    LeftTilted,
    RightTilted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lozenge {
    pub up: UnitTriangle,
    pub down: UnitTriangle,
    pub kind: LozengeKind,
    /// Midpoint of the shared edge, in doubled coordinates.
    pub center2: TriPoint,
}

impl Lozenge {
    /// Center `i` of a vertical lozenge.
    pub fn vertical_center_i(&self) -> Option<i64> {
        (self.kind == LozengeKind::Vertical).then_some(self.up.anchor.i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("triangles {0} and {1} are not adjacent")]
    NotAdjacent(UnitTriangle, UnitTriangle),
}

pub fn lozenge_of(a: UnitTriangle, b: UnitTriangle) -> Result<Lozenge, LatticeError> {
    let (up, down) = match (a.orientation, b.orientation) {
        (Orientation::Up, Orientation::Down) => (a, b),
        (Orientation::Down, Orientation::Up) => (b, a),
        _ => return Err(LatticeError::NotAdjacent(a, b)),
    };
    let [left, right, below] = up.neighbors();
    let TriPoint { i, j } = up.anchor;
    let (kind, center2) = if down == below {
        (LozengeKind::Vertical, TriPoint::new(2 * i, 2 * j))
    } else if down == left {
        (LozengeKind::LeftTilted, TriPoint::new(2 * i - 1, 2 * j + 1))
    } else if down == right {
        (
            LozengeKind::RightTilted,
            TriPoint::new(2 * i + 1, 2 * j + 1),
        )
    } else {
        return Err(LatticeError::NotAdjacent(a, b));
    };
    Ok(Lozenge {
        up,
        down,
        kind,
        center2,
    })
}

/// The six triangles around a lattice vertex, counter-clockwise from east.
pub fn triangles_around(v: TriPoint) -> [UnitTriangle; 6] {
    let TriPoint { i: a, j: b } = v;
    [
        UnitTriangle::up(a + 1, b),
        UnitTriangle::down(a, b + 1),
        UnitTriangle::up(a - 1, b),
        UnitTriangle::down(a - 1, b),
        UnitTriangle::up(a, b - 1),
        UnitTriangle::down(a + 1, b),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn up_neighbors_are_left_right_below() {
        let t = UnitTriangle::up(1, 0);
        assert_eq!(
            t.neighbors(),
            [
                UnitTriangle::down(0, 1),
                UnitTriangle::down(2, 1),
                UnitTriangle::down(1, 0)
            ]
        );
    }

    #[test]
    fn down_neighbors_are_left_right_above() {
        let t = UnitTriangle::down(1, 1);
        assert_eq!(
            t.neighbors(),
            [
                UnitTriangle::up(0, 0),
                UnitTriangle::up(2, 0),
                UnitTriangle::up(1, 1)
            ]
        );
    }

    #[test]
    fn lozenge_kinds_and_centers() {
        let up = UnitTriangle::up(1, 2);
        let v = lozenge_of(up, UnitTriangle::down(1, 2)).unwrap();
        assert_eq!(v.kind, LozengeKind::Vertical);
        assert_eq!(v.vertical_center_i(), Some(1));
        assert_eq!(v.center2, TriPoint::new(2, 4));
        let l = lozenge_of(UnitTriangle::down(0, 3), up).unwrap();
        assert_eq!(l.kind, LozengeKind::LeftTilted);
        assert_eq!(l.vertical_center_i(), None);
        let r = lozenge_of(up, UnitTriangle::down(2, 3)).unwrap();
        assert_eq!(r.kind, LozengeKind::RightTilted);
        assert!(lozenge_of(up, UnitTriangle::down(5, 5)).is_err());
        assert!(lozenge_of(up, UnitTriangle::up(1, 3)).is_err());
    }

    #[test]
    fn shared_edges_have_common_vertices() {
        let up = UnitTriangle::up(3, 4);
        for n in up.neighbors() {
            let shared = up
                .vertices()
                .iter()
                .filter(|p| n.vertices().contains(p))
                .count();
            assert_eq!(shared, 2);
        }
    }

    #[test]
    fn triangles_around_vertex_touch_it() {
        let v = TriPoint::new(2, 0);
        assert!(v.is_vertex());
        let ring = triangles_around(v);
        for (k, t) in ring.iter().enumerate() {
            assert!(t.vertices().contains(&v));
            assert!(t.is_adjacent(&ring[(k + 1) % 6]));
            assert!(!t.anchor.is_vertex());
        }
    }

    #[test]
    fn sweep_order_gives_at_most_two_later_neighbors() {
        for t in [UnitTriangle::up(3, 2), UnitTriangle::down(3, 2)] {
            let later = t.neighbors().iter().filter(|n| **n > t).count();
            assert!(later <= 2);
        }
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric(i in -20i64..20, j in -20i64..20, up in any::<bool>()) {
            let t = if up { UnitTriangle::up(i, j) } else { UnitTriangle::down(i, j) };
            for n in t.neighbors() {
                prop_assert!(n.neighbors().contains(&t));
                prop_assert_ne!(n.orientation, t.orientation);
            }
        }

        #[test]
        fn translation_moves_centers(i in -10i64..10, j in -10i64..10, di in -5i64..5, dj in -5i64..5) {
            let up = UnitTriangle::up(i, j);
            for n in up.neighbors() {
                let a = lozenge_of(up, n).unwrap();
                let b = lozenge_of(up.translate(di, dj), n.translate(di, dj)).unwrap();
                prop_assert_eq!(b.center2, a.center2.translate(2 * di, 2 * dj));
                prop_assert_eq!(a.kind, b.kind);
            }
        }
    }
}
