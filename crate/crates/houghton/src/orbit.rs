//! Orbit classification by the escape radius.

use crate::element::EventualTranslation;
use crate::fsym::Point;

/// `max exceptional position + max |m_i|`; beyond it the motion on each ray is a plain translation.
pub fn escape_radius(g: &EventualTranslation) -> i64 {
    g.radius() + g.pi().iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// Finite cycle starting at the given point.
    Periodic(Vec<Point>),
    /// Infinite cycle; `points` runs from where the backward orbit leaves the
    /// ball of radius `radius` to where the forward orbit leaves it, and
    /// `start` indexes the queried point.
    Escaping {
        points: Vec<Point>,
        start: usize,
        source: usize,
        target: usize,
    },
}

impl Orbit {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Orbit::Periodic(_))
    }
}

/// Whether `y` has left the ball for good when moving forward (`dir = 1`) or backward.
fn escaped(g: &EventualTranslation, y: Point, radius: i64, dir: i64) -> bool {
    y.pos > radius && dir * g.pi()[y.ray - 1] > 0
}

/// Orbit of `x` under `⟨g⟩`, walked until it closes or escapes past `radius`
/// in both directions. `radius` must be at least [`escape_radius`].
pub fn orbit_within(g: &EventualTranslation, x: Point, radius: i64) -> Orbit {
    let mut fwd = vec![x];
    let mut y = x;
    loop {
        if escaped(g, y, radius, 1) {
            break;
        }
        y = g.apply(y);
        if y == x {
            return Orbit::Periodic(fwd);
        }
        fwd.push(y);
    }
    let mut back = Vec::new();
    let mut y = x;
    while !escaped(g, y, radius, -1) {
        y = g.apply_inverse(y);
        back.push(y);
    }
    let start = back.len();
    let source = back.last().map_or(x.ray, |p| p.ray);
    let target = fwd.last().map_or(x.ray, |p| p.ray);
    back.reverse();
    back.extend(fwd);
    Orbit::Escaping {
        points: back,
        start,
        source,
        target,
    }
}

pub fn orbit(g: &EventualTranslation, x: Point) -> Orbit {
    orbit_within(g, x, escape_radius(g).max(x.pos))
}
