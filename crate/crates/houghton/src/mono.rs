//! Structure of monomorphism candidates: partial translations, diverging points,
//! expanding maps, labelled trees, stable thresholds and interval counts.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::element::{coordinate, EventualTranslation};
use crate::endo::{Endomorphism, KernelClass};
use crate::error::{Error, Result};
use crate::fsym::{FinitePermutation, Point};
use crate::orbit::{escape_radius, orbit_within, Orbit};

/// One infinite cycle of an eventual translation, indexed by `Z`.
///
/// `segment` runs from the last point of the backward tail that is still a plain
/// translation on `source` to the first such point on `target`; indices outside
/// it are extrapolated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTranslation {
    segment: Vec<Point>,
    /// Segment index carrying `[0]`.
    zero: usize,
    source: usize,
    target: usize,
    /// `|m_source|`.
    back_step: i64,
    /// `m_target`.
    fwd_step: i64,
    index: HashMap<Point, usize>,
}

impl PartialTranslation {
    fn from_orbit(g: &EventualTranslation, orbit: Orbit) -> Option<Self> {
        let Orbit::Escaping {
            points,
            start,
            source,
            target,
        } = orbit
        else {
            return None;
        };
        let index = points.iter().enumerate().map(|(j, &p)| (p, j)).collect();
        Some(PartialTranslation {
            zero: start,
            source,
            target,
            back_step: -g.pi()[source - 1],
            fwd_step: g.pi()[target - 1],
            segment: points,
            index,
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Segment indices covered explicitly, relative to `[0]`.
    pub fn explicit_range(&self) -> (i64, i64) {
        let z = self.zero as i64;
        (-z, self.segment.len() as i64 - 1 - z)
    }

    /// `[k]`.
    pub fn point(&self, k: i64) -> Point {
        let j = k + self.zero as i64;
        let last = self.segment.len() as i64 - 1;
        if j < 0 {
            let p = self.segment[0];
            Point::new(p.ray, p.pos + (-j) * self.back_step)
        } else if j > last {
            let p = self.segment[last as usize];
            Point::new(p.ray, p.pos + (j - last) * self.fwd_step)
        } else {
            self.segment[j as usize]
        }
    }

    /// `k` with `[k] = p`, if `p` lies on this cycle.
    pub fn index_of(&self, p: Point) -> Option<i64> {
        if let Some(&j) = self.index.get(&p) {
            return Some(j as i64 - self.zero as i64);
        }
        let first = self.segment[0];
        let last = *self.segment.last().expect("nonempty segment");
        if p.ray == first.ray && p.pos > first.pos && (p.pos - first.pos) % self.back_step == 0 {
            return Some(-((p.pos - first.pos) / self.back_step) - self.zero as i64);
        }
        if p.ray == last.ray && p.pos > last.pos && (p.pos - last.pos) % self.fwd_step == 0 {
            let j = self.segment.len() as i64 - 1 + (p.pos - last.pos) / self.fwd_step;
            return Some(j - self.zero as i64);
        }
        None
    }

    pub fn contains(&self, p: Point) -> bool {
        self.index_of(p).is_some()
    }

    /// Image of a point of the cycle.
    pub fn successor(&self, p: Point) -> Option<Point> {
        self.index_of(p).map(|k| self.point(k + 1))
    }

    /// Relabels so that `p` becomes `[0]`.
    pub fn rebase(&mut self, p: Point) -> Result<()> {
        let k = self
            .index_of(p)
            .ok_or_else(|| Error::Precondition(format!("{p} is not on this partial translation")))?;
        let j = k + self.zero as i64;
        if j < 0 || j >= self.segment.len() as i64 {
            return Err(Error::Precondition(format!(
                "{p} lies outside the explicit segment"
            )));
        }
        self.zero = j as usize;
        Ok(())
    }

    /// `[lo], ..., [hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Point> {
        (lo..=hi).map(|k| self.point(k)).collect()
    }
}

/// Partial translations of `g` whose orbits have been walked out to `radius`.
pub fn partial_translations_within(g: &EventualTranslation, radius: i64) -> Vec<PartialTranslation> {
    let mut out = Vec::new();
    for r in 1..=g.n() {
        let m = g.pi()[r - 1];
        if m >= 0 {
            continue;
        }
        for q in radius + 1..=radius - m {
            let o = orbit_within(g, Point::new(r, q), radius);
            out.extend(PartialTranslation::from_orbit(g, o));
        }
    }
    out
}

/// One partial translation per backward-escaping residue class; sorted by first segment point.
pub fn partial_translations(g: &EventualTranslation) -> Vec<PartialTranslation> {
    partial_translations_within(g, escape_radius(g))
}

/// Points with `pos ≤ window` lying on infinite orbits of `g`.
pub fn essential_points(g: &EventualTranslation, window: i64) -> BTreeSet<Point> {
    let pts = partial_translations(g);
    (1..=g.n())
        .flat_map(|r| (1..=window).map(move |p| Point::new(r, p)))
        .filter(|&x| pts.iter().any(|pt| pt.contains(x)))
        .collect()
}

/// Restriction of `g` to the moved points of its finite orbits.
pub fn finitary_part(g: &EventualTranslation) -> FinitePermutation {
    let pts = partial_translations(g);
    let pairs: Vec<(Point, Point)> = g
        .exceptions()
        .iter()
        .copied()
        .filter(|&(a, _)| !pts.iter().any(|pt| pt.contains(a)))
        .collect();
    FinitePermutation::from_pairs(g.n(), pairs).expect("finite orbits are closed")
}

/// Invariants of a monomorphism candidate.
#[derive(Clone, Debug)]
pub struct MonoProfile {
    pub n: usize,
    /// Eventual length `ℓ`.
    pub ell: i64,
    /// The common source ray.
    pub source: usize,
    /// `delta[r-1] = δ(r)`.
    pub delta: Vec<usize>,
    /// Order of `δ`.
    pub d: u32,
    /// `D_1, ..., D_ℓ`.
    pub diverging: Vec<Point>,
    /// `pt[l-1][i-2] = pt_{l,i}`, labelled so that `[0] = D_l`.
    pub pt: Vec<Vec<PartialTranslation>>,
    /// Transpositions of `φ(α)`.
    pub t_alpha: Vec<(Point, Point)>,
    /// Lemma clauses that failed to check; empty for a well-behaved candidate.
    pub violations: Vec<String>,
    radius: i64,
}

fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}

/// Order of a permutation of `1..=n` given as `p[r-1]`.
pub fn permutation_order(p: &[usize]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut order = 1u32;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u32;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] - 1;
            len += 1;
        }
        let g = gcd(order, len);
        order = order / g * len;
    }
    order
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn mono_profile(phi: &Endomorphism) -> Result<MonoProfile> {
    mono_profile_ordered(phi, None)
}

/// As [`mono_profile`], with `D_1, ..., D_ℓ` in the given order instead of [`Point`] order.
pub fn mono_profile_ordered(phi: &Endomorphism, order: Option<&[Point]>) -> Result<MonoProfile> {
    let n = phi.n();
    let class = phi.classify_kernel()?;
    if class != KernelClass::MonoCandidate {
        return Err(Error::Precondition(format!("φ is {class}, not a mono-candidate")));
    }
    let images: Vec<&EventualTranslation> = (2..=n).map(|i| phi.image(i)).collect();
    let mut violations = Vec::new();

    // translation structure: one common source, distinct targets
    let mut source = None;
    let mut ell = None;
    let mut delta = vec![0usize; n];
    for (k, g) in images.iter().enumerate() {
        let i = k + 2;
        let neg: Vec<usize> = (1..=n).filter(|&r| g.pi()[r - 1] < 0).collect();
        let pos: Vec<usize> = (1..=n).filter(|&r| g.pi()[r - 1] > 0).collect();
        if neg.len() != 1 || pos.len() != 1 {
            return Err(structure(format!(
                "φ(g{i}) has translation vector {:?}; expected one source and one target",
                g.pi()
            )));
        }
        let (s, t) = (neg[0], pos[0]);
        if *source.get_or_insert(s) != s {
            return Err(structure(format!("φ(g{i}) has source R_{s}, not the common source")));
        }
        let l = g.pi()[t - 1];
        if *ell.get_or_insert(l) != l || g.pi()[s - 1] != -l {
            return Err(structure(format!(
                "φ(g{i}) translates by {:?}; lengths must agree",
                g.pi()
            )));
        }
        delta[i - 1] = t;
    }
    let source = source.expect("n ≥ 2");
    let ell = ell.expect("n ≥ 2");
    delta[0] = source;
    let distinct: BTreeSet<usize> = delta.iter().copied().collect();
    if distinct.len() != n {
        return Err(structure(
            "targets of φ(g_i) and φ(g_j) share a ray, or meet the source",
        ));
    }
    let d = permutation_order(&delta);

    let a = phi.alpha_image();
    let radius = images
        .iter()
        .map(|g| escape_radius(g))
        .chain([a.radius()])
        .max()
        .unwrap_or(0);
    let mut pts: Vec<Vec<PartialTranslation>> = images
        .iter()
        .map(|g| partial_translations_within(g, radius))
        .collect();
    for (k, p) in pts.iter().enumerate() {
        if p.len() as i64 != ell {
            return Err(structure(format!(
                "φ(g{}) has {} partial translations, expected ℓ = {ell}",
                k + 2,
                p.len()
            )));
        }
    }
    let alpha_perm = a.to_fsym()?;
    let t_alpha = alpha_perm.transpositions();
    if !alpha_perm.is_involution() {
        violations.push("φ(α) is not an involution".into());
    }
    if t_alpha.len() as i64 != ell {
        violations.push(format!(
            "T_α has {} transpositions, expected ℓ = {ell}",
            t_alpha.len()
        ));
    }

    // diverging point of each partial translation
    let mut div: Vec<Vec<Point>> = vec![Vec::new(); n - 1];
    for i in 0..n - 1 {
        for pt in &pts[i] {
            let from_tau = tau_diverging(pt, &t_alpha);
            let mut found: Option<Point> = None;
            for j in 0..n - 1 {
                if j == i {
                    continue;
                }
                match diverging_against(pt, &pts[j]) {
                    Ok(p) => {
                        if found.is_some_and(|q| q != p) {
                            violations.push(format!(
                                "partial translation of φ(g{}) diverges at different points",
                                i + 2
                            ));
                        }
                        found.get_or_insert(p);
                    }
                    Err(e) => violations.push(e.to_string()),
                }
            }
            let point = match (found, from_tau) {
                (Some(p), Ok(q)) => {
                    if p != q {
                        violations.push(format!(
                            "τ_pt marks {q} but the partial translations of φ(g{}) diverge at {p}",
                            i + 2
                        ));
                    }
                    p
                }
                (Some(p), Err(e)) => {
                    violations.push(e.to_string());
                    p
                }
                (None, Ok(q)) => q,
                (None, Err(e)) => return Err(e),
            };
            div[i].push(point);
        }
    }
    let mut dset: BTreeSet<Point> = BTreeSet::new();
    for row in &div {
        let s: BTreeSet<Point> = row.iter().copied().collect();
        if s.len() as i64 != ell {
            return Err(structure("two partial translations of one φ(g_i) share a diverging point"));
        }
        if dset.is_empty() {
            dset = s;
        } else if dset != s {
            return Err(structure("diverging points differ between generators"));
        }
    }
    let diverging: Vec<Point> = match order {
        None => dset.iter().copied().collect(),
        Some(o) => {
            let given: BTreeSet<Point> = o.iter().copied().collect();
            if given != dset || o.len() != dset.len() {
                return Err(Error::Precondition(format!(
                    "requested order {o:?} is not an arrangement of the diverging points {dset:?}"
                )));
            }
            o.to_vec()
        }
    };
    let mut table: Vec<Vec<PartialTranslation>> = Vec::with_capacity(diverging.len());
    for &dl in &diverging {
        let mut row = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let j = div[i].iter().position(|&p| p == dl).expect("same set");
            let mut pt = pts[i][j].clone();
            pt.rebase(dl)?;
            row.push(pt);
        }
        table.push(row);
    }
    pts.clear();
    let profile = MonoProfile {
        n,
        ell,
        source,
        delta,
        d,
        diverging,
        pt: table,
        t_alpha,
        violations,
        radius,
    };
    Ok(profile.checked())
}

/// Diverging point of `pt` against the unique member of `others` sharing its backward tail.
fn diverging_against(pt: &PartialTranslation, others: &[PartialTranslation]) -> Result<Point> {
    let (lo, hi) = pt.explicit_range();
    let tail = pt.point(lo);
    let hits: Vec<&PartialTranslation> = others.iter().filter(|q| q.contains(tail)).collect();
    let [qt] = hits.as_slice() else {
        return Err(structure("no partial translation shares the backward tail"));
    };
    let mut k = lo;
    while k <= hi && qt.successor(pt.point(k)) == Some(pt.point(k + 1)) {
        k += 1;
    }
    if k > hi {
        return Err(structure("partial translations of distinct generators never diverge"));
    }
    let d = pt.point(k);
    let (qlo, qhi) = qt.explicit_range();
    let rejoins = (k + 1..=hi + 1).any(|m| qt.contains(pt.point(m)))
        || (qlo..=qhi + 1).any(|m| {
            let x = qt.point(m);
            pt.index_of(x).is_some_and(|j| j > k)
        });
    if rejoins {
        return Err(structure(format!(
            "partial translations meet again after diverging at {d}"
        )));
    }
    for other in others {
        if std::ptr::eq(other, *qt) {
            continue;
        }
        let (olo, ohi) = other.explicit_range();
        let meets = (lo..=hi + 1).any(|m| other.contains(pt.point(m)))
            || (olo..=ohi + 1).any(|m| pt.contains(other.point(m)));
        if meets {
            return Err(structure(
                "a partial translation meets two cycles of another generator",
            ));
        }
    }
    Ok(d)
}

/// The later point of the unique transposition of `T_α` that `pt` meets, which must swap two consecutive points.
fn tau_diverging(pt: &PartialTranslation, t_alpha: &[(Point, Point)]) -> Result<Point> {
    let hits: Vec<&(Point, Point)> = t_alpha
        .iter()
        .filter(|(a, b)| pt.contains(*a) || pt.contains(*b))
        .collect();
    let [&(a, b)] = hits.as_slice() else {
        return Err(structure(format!(
            "partial translation meets {} transpositions of φ(α), expected exactly one",
            hits.len()
        )));
    };
    match (pt.index_of(a), pt.index_of(b)) {
        (Some(x), Some(y)) if (x - y).abs() == 1 => Ok(if x > y { a } else { b }),
        _ => Err(structure(format!(
            "transposition ({a} {b}) does not swap consecutive points of its partial translation"
        ))),
    }
}

impl MonoProfile {
    /// Records the checkable Lemma clauses that fail.
    fn checked(mut self) -> Self {
        let n = self.n;
        let w = self.radius + 2 * self.ell;
        for l in 0..self.diverging.len() {
            for i in 0..n - 1 {
                let pt = &self.pt[l][i];
                for j in 0..n - 1 {
                    if i == j {
                        continue;
                    }
                    let qt = &self.pt[l][j];
                    let agree = (-w..=-1).all(|k| {
                        qt.index_of(pt.point(k)) == Some(k) && qt.point(k + 1) == pt.point(k + 1)
                    });
                    let split = pt.point(1) != qt.point(1);
                    if !agree || !split {
                        self.violations.push(format!(
                            "pt_{{{},{}}} and pt_{{{},{}}} do not share {{[k] : k ≤ 0}} and split at [0]",
                            l + 1,
                            i + 2,
                            l + 1,
                            j + 2
                        ));
                    }
                }
                let tau = (self.pt[l][i].point(-1), self.pt[l][i].point(0));
                let t = (tau.0.min(tau.1), tau.0.max(tau.1));
                if !self.t_alpha.contains(&t) {
                    self.violations.push(format!(
                        "τ for pt_{{{},{}}} is not ([−1], [0])",
                        l + 1,
                        i + 2
                    ));
                }
            }
        }
        self
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// `pt_{l,i}`, `1 ≤ l ≤ ℓ`, `2 ≤ i ≤ n`.
    pub fn partial(&self, l: usize, i: usize) -> &PartialTranslation {
        &self.pt[l - 1][i - 2]
    }

    /// `[m]_{l,i}`.
    pub fn bracket(&self, l: usize, i: usize, m: i64) -> Point {
        self.partial(l, i).point(m)
    }

    /// The expanding map `t̃p_l`: `[i,m] ↦ [m]_{l,i}`.
    pub fn expanding_map(&self, l: usize, p: Point) -> Result<Point> {
        if l < 1 || l > self.diverging.len() {
            return Err(Error::IndexOutOfRange {
                index: l,
                n: self.diverging.len(),
            });
        }
        p.check(self.n)?;
        let (i, m) = coordinate(p);
        Ok(self.bracket(l, i, m))
    }

    /// Whether `p` lies on some infinite orbit of some `φ(g_i)`.
    pub fn is_essential(&self, p: Point) -> bool {
        self.pt.iter().flatten().any(|pt| pt.contains(p))
    }

    /// The ray permutation as a matrix acting on `Z^{n-1}` in the basis `ḡ_2, ..., ḡ_n`:
    /// `ḡ_i ↦ ḡ_{δ(i)} - ḡ_{δ(1)}` with `ḡ_1 = 0`.
    pub fn delta_matrix(&self) -> crate::endo::AbelianizationMatrix {
        let n = self.n;
        let e = |r: usize| -> Vec<i64> {
            let mut v = vec![0i64; n - 1];
            if r >= 2 {
                v[r - 2] = 1;
            }
            v
        };
        let cols: Vec<Vec<i64>> = (2..=n)
            .map(|i| {
                let (a, b) = (e(self.delta[i - 1]), e(self.delta[0]));
                a.iter().zip(&b).map(|(x, y)| x - y).collect()
            })
            .collect();
        crate::endo::AbelianizationMatrix::from_columns(&cols)
    }

    /// Restriction of a finitary element to the essential points.
    pub fn essential_restriction(&self, g: &EventualTranslation) -> Result<FinitePermutation> {
        let f = g.to_fsym()?;
        let pairs = f.pairs().iter().copied().filter(|&(a, _)| self.is_essential(a));
        FinitePermutation::from_pairs(self.n, pairs)
    }

    pub fn stable_thresholds(&self) -> Result<Thresholds> {
        stable_thresholds(self)
    }

    pub fn build_tree(&self, root: Point, depth: usize) -> Result<LabeledTree> {
        build_tree(self, root, depth, DEFAULT_MAX_LEVEL)
    }

    /// `Π_ω (P_ω, Q_ω)` over `ω ∈ Ω_{ℓ,k}`.
    pub fn phi_tau_product(&self, p: Point, q: Point, k: usize) -> Result<FinitePermutation> {
        if p == q {
            return Err(Error::Degenerate(p));
        }
        for x in [p, q] {
            if !self.is_essential(x) {
                return Err(Error::Precondition(format!("{x} is not an essential point")));
            }
        }
        let limit = usize::MAX;
        let tp = build_tree(self, p, k, limit)?;
        let tq = build_tree(self, q, k, limit)?;
        let pairs = tp.levels[k]
            .iter()
            .zip(&tq.levels[k])
            .flat_map(|(&a, &b)| [(a, b), (b, a)]);
        FinitePermutation::from_pairs(self.n, pairs)
    }
}

/// Per-ray thresholds; `(i, p)` is stable when `p > s[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub s: Vec<i64>,
    /// `(k_{l,i}, m_{l,i})` for rays `i ≥ 2`, indexed `[l-1][i-2]`.
    pub target_data: Vec<Vec<(i64, i64)>>,
    /// `(k_l, m_l)` on `R_1`.
    pub source_data: Vec<(i64, i64)>,
}

impl Thresholds {
    pub fn max(&self) -> i64 {
        self.s.iter().copied().max().unwrap_or(0)
    }

    /// `A_0` for a stable root: `max_l (p - c_l)` rounded up, where `c_l` is
    /// the fixed point of the affine map `t̃p_l` on the root's ray.
    pub fn a0(&self, p: Point, ell: i64) -> Option<i64> {
        if !self.is_stable(p) {
            return None;
        }
        let num = |l: usize| -> i64 {
            if p.ray == 1 {
                let (k, m) = self.source_data[l];
                ell - ell * k - m
            } else {
                let (k, m) = self.target_data[l][p.ray - 2];
                ell * k - m
            }
        };
        (0..self.source_data.len())
            .map(|l| p.pos - (num(l)).div_euclid(ell - 1))
            .max()
    }

    pub fn is_stable(&self, p: Point) -> bool {
        p.pos > self.s[p.ray - 1]
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

pub fn stable_thresholds(profile: &MonoProfile) -> Result<Thresholds> {
    let ell = profile.ell;
    if ell < 2 {
        return Err(Error::Undefined(
            "stable thresholds need eventual length ℓ ≥ 2".into(),
        ));
    }
    if profile.delta.iter().enumerate().any(|(r, &t)| t != r + 1) {
        return Err(Error::Undefined(
            "stable thresholds need δ = id (targets φ(g_i) on R_i)".into(),
        ));
    }
    let n = profile.n;
    let lcount = profile.diverging.len();
    let mut s = vec![i64::MIN; n];
    let mut target_data = vec![vec![(0, 0); n - 1]; lcount];
    for l in 0..lcount {
        for i in 2..=n {
            let pt = &profile.pt[l][i - 2];
            let (_, hi) = pt.explicit_range();
            let on_line = |k: i64| {
                let (a, b) = (pt.point(k), pt.point(k + 1));
                a.ray == i && b.ray == i && b.pos == a.pos + ell
            };
            let mut k = hi.max(0);
            while k > 0 && on_line(k - 1) {
                k -= 1;
            }
            let m = pt.point(k);
            if m.ray != i {
                return Err(structure(format!("pt_{{{},{i}}} does not settle on R_{i}", l + 1)));
            }
            target_data[l][i - 2] = (k, m.pos);
            let v = ceil_div(ell * k - m.pos, ell - 1).max(k);
            s[i - 1] = s[i - 1].max(v);
        }
    }
    let mut source_data = vec![(0, 0); lcount];
    for l in 0..lcount {
        let pt = &profile.pt[l][0];
        let (lo, _) = pt.explicit_range();
        let on_line = |k: i64| {
            let (a, b) = (pt.point(k), pt.point(k - 1));
            a.ray == 1 && b.ray == 1 && b.pos == a.pos + ell
        };
        let mut k = lo.min(0);
        while k < 0 && on_line(k + 1) {
            k += 1;
        }
        let m = pt.point(k);
        if m.ray != 1 {
            return Err(structure(format!("pt_{{{},2}} does not settle on R_1", l + 1)));
        }
        source_data[l] = (k, m.pos);
        let v = ceil_div(ell - ell * k - m.pos, ell - 1).max(-k + 1);
        s[0] = s[0].max(v);
    }
    Ok(Thresholds {
        s,
        target_data,
        source_data,
    })
}

/// Largest level size a tree may reach by default; `ℓ = 2` gives depth 12.
pub const DEFAULT_MAX_LEVEL: usize = 4096;

/// Rooted `ℓ`-ary tree of iterated expanding-map images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    pub root: Point,
    pub ell: usize,
    /// `levels[k][Λ]`: label of the `Λ`-th vertex (lexicographic in `ω`) at level `k`.
    pub levels: Vec<Vec<Point>>,
}

pub fn build_tree(profile: &MonoProfile, root: Point, depth: usize, max_level: usize) -> Result<LabeledTree> {
    root.check(profile.n)?;
    let ell = profile.diverging.len();
    let size = (ell as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
    if size > max_level as u128 || (ell == 1 && depth > max_level) {
        return Err(Error::ResourceLimit {
            what: "tree level size",
            size: size.min(usize::MAX as u128) as usize,
            cap: max_level,
        });
    }
    let mut levels = vec![vec![root]];
    for k in 1..=depth {
        let prev = &levels[k - 1];
        let mut next = Vec::with_capacity(prev.len() * ell);
        for &v in prev {
            for l in 1..=ell {
                next.push(profile.expanding_map(l, v)?);
            }
        }
        let distinct: HashSet<Point> = next.iter().copied().collect();
        if distinct.len() != next.len() {
            return Err(structure(format!("labels repeat at level {k} of T_{root}")));
        }
        levels.push(next);
    }
    Ok(LabeledTree { root, ell, levels })
}

impl LabeledTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `ω` of the `idx`-th vertex at `level`, letters in `1..=ℓ`.
    pub fn omega(&self, level: usize, idx: usize) -> Vec<usize> {
        let mut w = vec![0; level];
        let mut x = idx;
        for j in (0..level).rev() {
            w[j] = x % self.ell + 1;
            x /= self.ell;
        }
        w
    }

    pub fn omega_string(&self, level: usize, idx: usize) -> String {
        if level == 0 {
            return "-".into();
        }
        let sep = if self.ell >= 10 { "." } else { "" };
        self.omega(level, idx)
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// One vertex per line, `level ω label=(ray,pos)`, by level then `Λ`; the root's `ω` prints as `-`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (k, level) in self.levels.iter().enumerate() {
            for (j, p) in level.iter().enumerate() {
                let _ = writeln!(out, "{k} {} label={p}", self.omega_string(k, j));
            }
        }
        out
    }

    /// Smallest `A` with every level-`k` label inside `B_{n, Aℓ^k + s}`.
    pub fn radius_constant(&self, s: i64) -> i64 {
        (1..self.levels.len())
            .map(|k| ceil_div(self.radius(k) - s, (self.ell as i64).pow(k as u32)))
            .max()
            .unwrap_or(0)
            .max(0)
    }

    /// Whether a non-root vertex carries the root label.
    pub fn is_recurrent(&self) -> bool {
        self.levels[1..].iter().flatten().any(|&p| p == self.root)
    }

    /// Whether all labels of the tree are distinct.
    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.levels.iter().flatten().all(|&p| seen.insert(p))
    }

    /// Largest position among the labels at `level`.
    pub fn radius(&self, level: usize) -> i64 {
        self.levels[level].iter().map(|p| p.pos).max().unwrap_or(0)
    }

    /// `N_P(k)`: fewest intervals covering level `k`, where the descendants at
    /// level `k` of a vertex form an interval when the vertex sits at level
    /// `k-1` or carries a stable label.
    pub fn interval_count(&self, th: &Thresholds, k: usize) -> u64 {
        fn cover(t: &LabeledTree, th: &Thresholds, level: usize, idx: usize, k: usize) -> u64 {
            if level + 1 >= k || th.is_stable(t.levels[level][idx]) {
                return 1;
            }
            (0..t.ell)
                .map(|l| cover(t, th, level + 1, idx * t.ell + l, k))
                .sum()
        }
        assert!(k <= self.depth(), "tree too shallow for level {k}");
        if k == 0 {
            return 1;
        }
        cover(self, th, 0, 0, k)
    }
}

/// Interval-count data for the non-stable essential roots.
#[derive(Clone, Debug)]
pub struct IntervalSurvey {
    pub depth: usize,
    /// `N_P(1..=depth)` per non-stable essential root.
    pub counts: BTreeMap<Point, Vec<u64>>,
    pub recurrent: BTreeSet<Point>,
    /// Max of `N_P(k)` over non-recurrent roots and `k ≤ depth`.
    pub a1: u64,
}

impl IntervalSurvey {
    /// Roots and levels where `N_P(k) > (k-1)(ℓ-1)A_1 + 1`.
    pub fn bound_violations(&self, ell: i64) -> Vec<(Point, usize, u64)> {
        let mut out = Vec::new();
        for (&p, v) in &self.counts {
            for (j, &c) in v.iter().enumerate() {
                let k = j as u64 + 1;
                if c > (k - 1) * (ell as u64 - 1) * self.a1 + 1 {
                    out.push((p, j + 1, c));
                }
            }
        }
        out
    }
}

/// Builds trees for every non-stable essential point and measures `A_1`.
pub fn interval_survey(profile: &MonoProfile, depth: usize) -> Result<IntervalSurvey> {
    let th = stable_thresholds(profile)?;
    let mut counts = BTreeMap::new();
    let mut recurrent = BTreeSet::new();
    let mut a1 = 1;
    for r in 1..=profile.n {
        for p in 1..=th.s[r - 1] {
            let root = Point::new(r, p);
            if !profile.is_essential(root) {
                continue;
            }
            let t = build_tree(profile, root, depth, usize::MAX)?;
            let v: Vec<u64> = (1..=depth).map(|k| t.interval_count(&th, k)).collect();
            if t.is_recurrent() {
                recurrent.insert(root);
            } else {
                a1 = a1.max(v.iter().copied().max().unwrap_or(1));
            }
            counts.insert(root, v);
        }
    }
    Ok(IntervalSurvey {
        depth,
        counts,
        recurrent,
        a1,
    })
}
