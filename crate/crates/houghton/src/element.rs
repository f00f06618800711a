//! Elements of `H_n` as eventual translations of `X_n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fsym::{FinitePermutation, Point};

/// Per-ray translation lengths `(m_1, ..., m_n)`.
pub type RayVector = Vec<i64>;

/// A bijection of `X_n` acting as `(k,p) ↦ (k,p+m_k)` off a finite exception table.
///
/// Exceptions are stored sorted by source and never agree with the default
/// translation, so equal elements have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventualTranslation {
    n: usize,
    m: RayVector,
    exc: Vec<(Point, Point)>,
    inv: Vec<(Point, Point)>,
}

impl EventualTranslation {
    pub fn identity(n: usize) -> Self {
        EventualTranslation {
            n,
            m: vec![0; n],
            exc: Vec::new(),
            inv: Vec::new(),
        }
    }

    /// Builds and verifies bijectivity.
    pub fn new<I>(n: usize, m: RayVector, exceptions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        if n < 1 || m.len() != n {
            return Err(Error::NotBijective(format!(
                "translation vector has length {} for H_{n}",
                m.len()
            )));
        }
        let mut map = BTreeMap::new();
        for (a, b) in exceptions {
            a.check(n)?;
            b.check(n)?;
            if map.insert(a, b).is_some_and(|old| old != b) {
                return Err(Error::NotBijective(format!("{a} has two images")));
            }
        }
        let g = Self::from_map_unchecked(n, m, map);
        g.verify()?;
        Ok(g)
    }

    fn from_map_unchecked(n: usize, m: RayVector, map: BTreeMap<Point, Point>) -> Self {
        let exc: Vec<(Point, Point)> = map
            .into_iter()
            .filter(|&(a, b)| b != Point::new(a.ray, a.pos + m[a.ray - 1]))
            .collect();
        let mut inv: Vec<(Point, Point)> = exc.iter().map(|&(a, b)| (b, a)).collect();
        inv.sort_unstable();
        EventualTranslation { n, m, exc, inv }
    }

    fn verify(&self) -> Result<()> {
        let n = self.n;
        if self.m.iter().sum::<i64>() != 0 {
            return Err(Error::NotBijective(format!(
                "translation lengths {:?} do not sum to zero",
                self.m
            )));
        }
        let dom: BTreeSet<Point> = self.exc.iter().map(|e| e.0).collect();
        for k in 1..=n {
            let mk = self.m[k - 1];
            for p in 1..=(-mk) {
                if !dom.contains(&Point::new(k, p)) {
                    return Err(Error::NotBijective(format!(
                        "({k},{p}) would leave the ray"
                    )));
                }
            }
        }
        let img: BTreeSet<Point> = self.exc.iter().map(|e| e.1).collect();
        if img.len() != self.exc.len() {
            return Err(Error::NotBijective("exceptions share an image".into()));
        }
        for &y in &img {
            let pre = Point::new(y.ray, y.pos - self.m[y.ray - 1]);
            if pre.pos >= 1 && !dom.contains(&pre) {
                return Err(Error::NotBijective(format!(
                    "{y} is hit by both {pre} and an exception"
                )));
            }
        }
        for k in 1..=n {
            let mk = self.m[k - 1];
            for q in 1..=mk {
                if !img.contains(&Point::new(k, q)) {
                    return Err(Error::NotBijective(format!("({k},{q}) is not hit")));
                }
            }
        }
        for &x in &dom {
            let y = Point::new(x.ray, x.pos + self.m[x.ray - 1]);
            if y.pos >= 1 && !img.contains(&y) {
                return Err(Error::NotBijective(format!("{y} is not hit")));
            }
        }
        Ok(())
    }

    /// The generator `g_i`: translation by one along `R_1 ∪ R_i` towards `R_i`.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if n < 2 || i < 2 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut m = vec![0; n];
        m[0] = -1;
        m[i - 1] = 1;
        Ok(EventualTranslation {
            n,
            m,
            exc: vec![(Point::new(1, 1), Point::new(i, 1))],
            inv: vec![(Point::new(i, 1), Point::new(1, 1))],
        })
    }

    /// The transposition of `(1,1)` and `(1,2)`.
    pub fn alpha(n: usize) -> Self {
        let a = Point::new(1, 1);
        let b = Point::new(1, 2);
        EventualTranslation {
            n,
            m: vec![0; n],
            exc: vec![(a, b), (b, a)],
            inv: vec![(a, b), (b, a)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pi(&self) -> &RayVector {
        &self.m
    }

    pub fn exceptions(&self) -> &[(Point, Point)] {
        &self.exc
    }

    pub fn num_exceptions(&self) -> usize {
        self.exc.len()
    }

    pub fn is_identity(&self) -> bool {
        self.exc.is_empty() && self.m.iter().all(|&x| x == 0)
    }

    pub fn is_finitary(&self) -> bool {
        self.m.iter().all(|&x| x == 0)
    }

    pub fn apply(&self, x: Point) -> Point {
        match self.exc.binary_search_by(|(a, _)| a.cmp(&x)) {
            Ok(j) => self.exc[j].1,
            Err(_) => Point::new(x.ray, x.pos + self.m[x.ray - 1]),
        }
    }

    pub fn apply_inverse(&self, y: Point) -> Point {
        match self.inv.binary_search_by(|(a, _)| a.cmp(&y)) {
            Ok(j) => self.inv[j].1,
            Err(_) => Point::new(y.ray, y.pos - self.m[y.ray - 1]),
        }
    }

    pub fn inverse(&self) -> Self {
        EventualTranslation {
            n: self.n,
            m: self.m.iter().map(|x| -x).collect(),
            exc: self.inv.clone(),
            inv: self.exc.clone(),
        }
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let m: RayVector = self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect();
        let mut cand: Vec<Point> = self.exc.iter().map(|e| e.0).collect();
        cand.extend(other.exc.iter().map(|e| self.apply_inverse(e.0)));
        cand.sort_unstable();
        cand.dedup();
        let exc: Vec<(Point, Point)> = cand
            .into_iter()
            .filter_map(|x| {
                let y = other.apply(self.apply(x));
                (y != Point::new(x.ray, x.pos + m[x.ray - 1])).then_some((x, y))
            })
            .collect();
        let mut inv: Vec<(Point, Point)> = exc.iter().map(|&(a, b)| (b, a)).collect();
        inv.sort_unstable();
        Ok(EventualTranslation {
            n: self.n,
            m,
            exc,
            inv,
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same ambient");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same ambient");
            }
        }
        acc
    }

    /// `g^h = h⁻¹ g h`.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        h.inverse().compose(self)?.compose(h)
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, h: &Self) -> Result<Self> {
        self.compose(h)?
            .compose(&self.inverse())?
            .compose(&h.inverse())
    }

    pub fn to_fsym(&self) -> Result<FinitePermutation> {
        if !self.is_finitary() {
            return Err(Error::NotFinitary(self.m.clone()));
        }
        Ok(FinitePermutation::from_sorted_unchecked(
            self.n,
            self.exc.clone(),
        ))
    }

    pub fn from_fsym(p: &FinitePermutation) -> Self {
        let exc = p.pairs().to_vec();
        let mut inv: Vec<(Point, Point)> = exc.iter().map(|&(a, b)| (b, a)).collect();
        inv.sort_unstable();
        EventualTranslation {
            n: p.n(),
            m: vec![0; p.n()],
            exc,
            inv,
        }
    }

    /// Largest position appearing in an exception source or image on each ray (index 0 is ray 1).
    pub fn exceptional_radii(&self) -> Vec<i64> {
        let mut r = vec![0; self.n];
        for &(a, b) in &self.exc {
            r[a.ray - 1] = r[a.ray - 1].max(a.pos);
            r[b.ray - 1] = r[b.ray - 1].max(b.pos);
        }
        r
    }

    /// Largest position touched by the exception table.
    pub fn radius(&self) -> i64 {
        self.exceptional_radii().into_iter().max().unwrap_or(0)
    }

    /// Image of `g` under the ray relabelling `(r,p) ↦ (σ(r),p)`, i.e. `σ⁻¹ g σ`.
    /// `sigma[r-1] = σ(r)`.
    pub fn relabel_rays(&self, sigma: &[usize]) -> Result<Self> {
        check_ray_permutation(self.n, sigma)?;
        let mut m = vec![0; self.n];
        for r in 1..=self.n {
            m[sigma[r - 1] - 1] = self.m[r - 1];
        }
        let s = |p: Point| Point::new(sigma[p.ray - 1], p.pos);
        let map: BTreeMap<Point, Point> = self.exc.iter().map(|&(a, b)| (s(a), s(b))).collect();
        Ok(Self::from_map_unchecked(self.n, m, map))
    }
}

pub(crate) fn check_ray_permutation(n: usize, sigma: &[usize]) -> Result<()> {
    let set: BTreeSet<usize> = sigma.iter().copied().collect();
    if sigma.len() != n || set.len() != n || set.iter().any(|&r| r < 1 || r > n) {
        return Err(Error::Precondition(format!(
            "{sigma:?} is not a permutation of 1..{n}"
        )));
    }
    Ok(())
}

impl fmt::Display for EventualTranslation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "pi=({}); exceptions=[", m.join(","))?;
        for (j, (a, b)) in self.exc.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("]")
    }
}

/// Bracket coordinates: `(1,p) ↦ [2, 1-p]` and `(j,p) ↦ [j,p]` for `j ≥ 2`.
pub fn coordinate(p: Point) -> (usize, i64) {
    if p.ray == 1 {
        (2, 1 - p.pos)
    } else {
        (p.ray, p.pos)
    }
}

/// Inverse of [`coordinate`]; `[2,m]` with `m ≤ 0` lies on `R_1`.
pub fn point_of(i: usize, m: i64) -> Result<Point> {
    if i < 2 {
        return Err(Error::Precondition(format!(
            "bracket coordinate [{i},{m}] needs i ≥ 2"
        )));
    }
    if i == 2 && m <= 0 {
        Ok(Point::new(1, 1 - m))
    } else if m >= 1 {
        Ok(Point::new(i, m))
    } else {
        Err(Error::Precondition(format!(
            "bracket coordinate [{i},{m}] is only defined for m ≥ 1 when i ≥ 3"
        )))
    }
}
