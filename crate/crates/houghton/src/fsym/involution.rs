//! Combinatorics of pairs of involutions: commuting cores, squares, and the
//! ξ/χ incidence between transpositions of an order-3 product.

use std::collections::BTreeSet;

use super::{FinitePermutation, Point};
use crate::error::{Error, Result};

/// Walk `P -γ-> R -β-> S -γ-> Q -β-> P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub points: [Point; 4],
}

impl Square {
    pub fn closes(&self, beta: &FinitePermutation, gamma: &FinitePermutation) -> bool {
        let [p, r, s, q] = self.points;
        gamma.apply(p) == r && beta.apply(r) == s && gamma.apply(s) == q && beta.apply(q) == p
    }
}

/// Walk `P -β-> Q -γ-> Q1 -β-> Q2 -γ-> P2 -β-> P1 -γ-> P` around a transposition of `S_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hexagon {
    pub points: [Point; 6],
}

impl Hexagon {
    pub fn closes(&self, beta: &FinitePermutation, gamma: &FinitePermutation) -> bool {
        let distinct: BTreeSet<_> = self.points.iter().collect();
        distinct.len() == 6
            && (0..6).all(|j| {
                let g = if j % 2 == 0 { beta } else { gamma };
                g.apply(self.points[j]) == self.points[(j + 1) % 6]
            })
    }
}

#[derive(Clone, Debug)]
pub struct XiChiReport {
    /// Transpositions of β.
    pub s: Vec<(Point, Point)>,
    /// Transpositions of γ.
    pub t: Vec<(Point, Point)>,
    /// `xi[i]`: indices into `t` meeting `s[i]`.
    pub xi: Vec<Vec<usize>>,
    /// `chi[j]`: indices into `s` meeting `t[j]`.
    pub chi: Vec<Vec<usize>>,
    pub s1: Vec<usize>,
    pub t1: Vec<usize>,
    /// `(i, j)` with `xi[i] = {j}` and `chi[j] = {i}`.
    pub pairing: Vec<(usize, usize)>,
    pub hexagons: Vec<Hexagon>,
}

impl XiChiReport {
    pub fn cardinalities_ok(&self) -> bool {
        self.xi
            .iter()
            .chain(self.chi.iter())
            .all(|v| (1..=2).contains(&v.len()))
    }

    /// Checks `xi(τ)={τ'} ⇔ chi(τ')={τ}` and that the pairing is a bijection `S_1 ↔ T_1`.
    pub fn pairing_ok(&self) -> bool {
        let forward = self
            .s1
            .iter()
            .all(|&i| self.chi[self.xi[i][0]] == vec![i]);
        let backward = self
            .t1
            .iter()
            .all(|&j| self.xi[self.chi[j][0]] == vec![j]);
        let left: BTreeSet<_> = self.pairing.iter().map(|p| p.0).collect();
        let right: BTreeSet<_> = self.pairing.iter().map(|p| p.1).collect();
        forward
            && backward
            && left.len() == self.pairing.len()
            && right.len() == self.pairing.len()
            && left == self.s1.iter().copied().collect()
            && right == self.t1.iter().copied().collect()
    }
}

fn check_involution(p: &FinitePermutation, name: &str) -> Result<()> {
    if p.is_involution() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} is not an involution")))
    }
}

fn check_commuting(beta: &FinitePermutation, gamma: &FinitePermutation) -> Result<()> {
    check_involution(beta, "β")?;
    check_involution(gamma, "γ")?;
    if beta.compose(gamma)? != gamma.compose(beta)? {
        return Err(Error::Precondition("β and γ do not commute".into()));
    }
    Ok(())
}

/// Returns `I = supp β ∩ supp γ` and whether `(I)β = (I)γ = I`.
pub fn commuting_involution_core(
    beta: &FinitePermutation,
    gamma: &FinitePermutation,
) -> Result<(BTreeSet<Point>, bool)> {
    check_commuting(beta, gamma)?;
    let sb: BTreeSet<Point> = beta.support().collect();
    let core: BTreeSet<Point> = gamma.support().filter(|x| sb.contains(x)).collect();
    let ib: BTreeSet<Point> = core.iter().map(|&x| beta.apply(x)).collect();
    let ig: BTreeSet<Point> = core.iter().map(|&x| gamma.apply(x)).collect();
    let invariant = ib == core && ig == core;
    Ok((core, invariant))
}

/// One square per 4-point orbit of `⟨β, γ⟩` on which β and γ disagree.
pub fn find_squares(beta: &FinitePermutation, gamma: &FinitePermutation) -> Result<Vec<Square>> {
    let (core, _) = commuting_involution_core(beta, gamma)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &p in &core {
        if beta.apply(p) == gamma.apply(p) || seen.contains(&p) {
            continue;
        }
        let r = gamma.apply(p);
        let s = beta.apply(r);
        let q = gamma.apply(s);
        let sq = Square { points: [p, r, s, q] };
        seen.extend(sq.points);
        out.push(sq);
    }
    Ok(out)
}

/// The ξ/χ incidence between transpositions of β and γ, given `(βγ)³ = 1`.
pub fn xi_chi(beta: &FinitePermutation, gamma: &FinitePermutation) -> Result<XiChiReport> {
    check_involution(beta, "β")?;
    check_involution(gamma, "γ")?;
    let bg = beta.compose(gamma)?;
    if !bg.pow(3).is_identity() {
        return Err(Error::Precondition("(βγ)³ is not the identity".into()));
    }
    let s = beta.transpositions();
    let t = gamma.transpositions();
    let meets = |a: &(Point, Point), b: &(Point, Point)| {
        a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
    };
    let xi: Vec<Vec<usize>> = s
        .iter()
        .map(|a| (0..t.len()).filter(|&j| meets(a, &t[j])).collect())
        .collect();
    let chi: Vec<Vec<usize>> = t
        .iter()
        .map(|b| (0..s.len()).filter(|&i| meets(&s[i], b)).collect())
        .collect();
    let s1: Vec<usize> = (0..s.len()).filter(|&i| xi[i].len() == 1).collect();
    let t1: Vec<usize> = (0..t.len()).filter(|&j| chi[j].len() == 1).collect();
    let pairing = s1
        .iter()
        .filter(|&&i| chi[xi[i][0]] == vec![i])
        .map(|&i| (i, xi[i][0]))
        .collect();
    let mut hexagons = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, &(p, _)) in s.iter().enumerate() {
        if xi[i].len() != 2 || seen.contains(&p) {
            continue;
        }
        let mut pts = [p; 6];
        for j in 1..6 {
            let g = if j % 2 == 1 { beta } else { gamma };
            pts[j] = g.apply(pts[j - 1]);
        }
        let h = Hexagon { points: pts };
        seen.extend(h.points);
        hexagons.push(h);
    }
    Ok(XiChiReport {
        s,
        t,
        xi,
        chi,
        s1,
        t1,
        pairing,
        hexagons,
    })
}
