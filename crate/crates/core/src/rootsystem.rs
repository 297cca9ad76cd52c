//! The G₂ root system in the basis of simple roots α₁ (short) and α₂ (long).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `a·α₁ + b·α₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub a: i32,
    pub b: i32,
}

pub const ALPHA1: Root = Root { a: 1, b: 0 };
pub const ALPHA2: Root = Root { a: 0, b: 1 };

/// Positive roots in index order 1..6.
pub const POSITIVE_ROOTS: [Root; 6] = [
    Root { a: 1, b: 0 },
    Root { a: 0, b: 1 },
    Root { a: 1, b: 1 },
    Root { a: 2, b: 1 },
    Root { a: 3, b: 1 },
    Root { a: 3, b: 2 },
];

impl Root {
    pub const fn new(a: i32, b: i32) -> Self {
        Root { a, b }
    }

    pub fn is_root(&self) -> bool {
        POSITIVE_ROOTS.contains(self) || POSITIVE_ROOTS.contains(&-*self)
    }

    pub fn is_positive(&self) -> bool {
        self.a > 0 || (self.a == 0 && self.b > 0)
    }

    /// Squared length with (α₁,α₁) = 2.
    pub fn norm(&self) -> i32 {
        inner(*self, *self)
    }

    pub fn is_long(&self) -> bool {
        self.norm() == 6
    }

    pub fn is_short(&self) -> bool {
        self.norm() == 2
    }

    pub fn height(&self) -> i32 {
        self.a + self.b
    }

    /// Signed index in {±1..±6}.
    pub fn index(&self) -> Option<i32> {
        let pos = if self.is_positive() { *self } else { -*self };
        let i = POSITIVE_ROOTS.iter().position(|r| *r == pos)? as i32 + 1;
        Some(if self.is_positive() { i } else { -i })
    }

    pub fn from_index(i: i32) -> Result<Root> {
        if i == 0 || i.abs() > 6 {
            return Err(Error::InvalidRoot(i));
        }
        let r = POSITIVE_ROOTS[(i.unsigned_abs() - 1) as usize];
        Ok(if i > 0 { r } else { -r })
    }

    pub fn scale(&self, k: i32) -> Root {
        Root::new(k * self.a, k * self.b)
    }
}

impl std::ops::Add for Root {
    type Output = Root;
    fn add(self, o: Root) -> Root {
        Root::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for Root {
    type Output = Root;
    fn sub(self, o: Root) -> Root {
        Root::new(self.a - o.a, self.b - o.b)
    }
}

impl std::ops::Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root::new(-self.a, -self.b)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// All 12 roots: positives in index order, then their negatives.
pub fn all_roots() -> Vec<Root> {
    POSITIVE_ROOTS
        .iter()
        .copied()
        .chain(POSITIVE_ROOTS.iter().map(|&r| -r))
        .collect()
}

pub fn positive_roots() -> [Root; 6] {
    POSITIVE_ROOTS
}

/// Invariant form with (α₁,α₁)=2, (α₂,α₂)=6, (α₁,α₂)=−3.
pub fn inner(x: Root, y: Root) -> i32 {
    2 * x.a * y.a + 6 * x.b * y.b - 3 * (x.a * y.b + x.b * y.a)
}

/// `⟨β, α∨⟩ = 2(β,α)/(α,α)`. Works for any lattice vector `beta`.
pub fn pairing(beta: Root, alpha: Root) -> i32 {
    2 * inner(beta, alpha) / inner(alpha, alpha)
}

/// Reflection in the hyperplane orthogonal to `alpha`.
pub fn reflect(alpha: Root, beta: Root) -> Root {
    beta - alpha.scale(pairing(beta, alpha))
}

/// An element of W as an integer matrix on (a,b) coordinates (column action).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement(pub [[i32; 2]; 2]);

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement([[1, 0], [0, 1]]);

    pub fn reflection(alpha: Root) -> WeylElement {
        let c1 = reflect(alpha, ALPHA1);
        let c2 = reflect(alpha, ALPHA2);
        WeylElement([[c1.a, c2.a], [c1.b, c2.b]])
    }

    pub fn apply(&self, r: Root) -> Root {
        let m = self.0;
        Root::new(m[0][0] * r.a + m[0][1] * r.b, m[1][0] * r.a + m[1][1] * r.b)
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let (a, b) = (self.0, other.0);
        let mut out = [[0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        WeylElement(out)
    }
}

pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub longest: WeylElement,
}

/// Closure of ⟨s₁, s₂⟩ and its longest element.
pub fn weyl_group() -> WeylGroup {
    let gens = [WeylElement::reflection(ALPHA1), WeylElement::reflection(ALPHA2)];
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut length = Vec::new();
    let mut queue = VecDeque::from([(WeylElement::IDENTITY, 0usize)]);
    seen.insert(WeylElement::IDENTITY);
    while let Some((w, l)) = queue.pop_front() {
        order.push(w);
        length.push(l);
        for g in &gens {
            let nw = g.compose(&w);
            if seen.insert(nw) {
                queue.push_back((nw, l + 1));
            }
        }
    }
    let longest = order[length.iter().enumerate().max_by_key(|(_, l)| **l).unwrap().0];
    WeylGroup {
        elements: order,
        longest,
    }
}

/// The two maximal parabolics, named by the Levi simple root length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parabolic {
    /// J = {α₂}.
    Long,
    /// J = {α₁}.
    Short,
}

impl Parabolic {
    /// From a subset of simple roots given by index (1 = α₁, 2 = α₂).
    pub fn from_simple_subset(j: &[i32]) -> Result<Parabolic> {
        let mut j = j.to_vec();
        j.sort_unstable();
        j.dedup();
        match j.as_slice() {
            [2] => Ok(Parabolic::Long),
            [1] => Ok(Parabolic::Short),
            other => Err(Error::UnsupportedParabolic(format!("J = {other:?}"))),
        }
    }

    /// The simple root in J.
    pub fn levi_root(self) -> Root {
        match self {
            Parabolic::Long => ALPHA2,
            Parabolic::Short => ALPHA1,
        }
    }

    /// The simple root outside J.
    pub fn complement_root(self) -> Root {
        match self {
            Parabolic::Long => ALPHA1,
            Parabolic::Short => ALPHA2,
        }
    }

    pub fn in_levi(self, r: Root) -> bool {
        match self {
            Parabolic::Long => r.a == 0,
            Parabolic::Short => r.b == 0,
        }
    }

    /// Sum of the coefficients outside J.
    pub fn level(self, r: Root) -> i32 {
        match self {
            Parabolic::Long => r.a,
            Parabolic::Short => r.b,
        }
    }

    /// The part of `r` supported outside J.
    pub fn shape(self, r: Root) -> Root {
        match self {
            Parabolic::Long => Root::new(r.a, 0),
            Parabolic::Short => Root::new(0, r.b),
        }
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parabolic::Long => write!(f, "long"),
            Parabolic::Short => write!(f, "short"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootShapeData {
    pub index: i32,
    pub root: Root,
    pub height: i32,
    pub shape: Root,
    pub level: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelModule {
    pub level: i32,
    pub shapes: Vec<Root>,
    pub roots: Vec<Root>,
    pub dim: usize,
    /// ⟨β, α∨⟩ for β the highest root of the level and α the simple root in J.
    pub highweight: i32,
}

/// Height, shape and level of each positive root outside Φ_J.
pub fn shape_data(j: Parabolic) -> Vec<RootShapeData> {
    POSITIVE_ROOTS
        .iter()
        .filter(|r| !j.in_levi(**r))
        .map(|&r| RootShapeData {
            index: r.index().expect("positive root"),
            root: r,
            height: r.height(),
            shape: j.shape(r),
            level: j.level(r),
        })
        .collect()
}

/// Levels of the unipotent radical as Levi modules, ascending.
pub fn abs_filtration(j: Parabolic) -> Vec<LevelModule> {
    let data = shape_data(j);
    let mut levels: Vec<i32> = data.iter().map(|d| d.level).collect();
    levels.sort_unstable();
    levels.dedup();
    let alpha = j.levi_root();
    levels
        .into_iter()
        .map(|level| {
            let mut roots: Vec<Root> = data
                .iter()
                .filter(|d| d.level == level)
                .map(|d| d.root)
                .collect();
            roots.sort_by_key(|r| (r.height(), r.index()));
            let mut shapes: Vec<Root> = roots.iter().map(|&r| j.shape(r)).collect();
            shapes.dedup();
            let top = *roots.last().expect("levels are nonempty");
            LevelModule {
                level,
                shapes,
                dim: roots.len(),
                highweight: pairing(top, alpha),
                roots,
            }
        })
        .collect()
}

/// The unique root of maximal height in each shape class, if it is unique.
pub fn unique_top_roots(j: Parabolic) -> Vec<(Root, Option<Root>)> {
    let data = shape_data(j);
    let mut shapes: Vec<Root> = data.iter().map(|d| d.shape).collect();
    shapes.sort();
    shapes.dedup();
    shapes
        .into_iter()
        .map(|s| {
            let members: Vec<&RootShapeData> = data.iter().filter(|d| d.shape == s).collect();
            let max_h = members.iter().map(|d| d.height).max().unwrap_or(0);
            let tops: Vec<Root> = members
                .iter()
                .filter(|d| d.height == max_h)
                .map(|d| d.root)
                .collect();
            (s, if tops.len() == 1 { Some(tops[0]) } else { None })
        })
        .collect()
}
