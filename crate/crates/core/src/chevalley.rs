//! Root elements of G₂ acting on the 7-dimensional Weyl module.
//!
//! The ℤ-form is fixed once: the simple root vectors act on a weight basis
//! ordered by descending height, the remaining positive root vectors come
//! from normalized brackets, and each negative root vector is scaled so
//! that `[e_r, e_{-r}] = h_r`. Structure constants and commutator
//! coefficients are then read off this action, so every sign is internally
//! consistent by construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldRef};
use crate::linalg::Matrix;
use crate::rootsystem::{all_roots, pairing, Root, POSITIVE_ROOTS};

pub const DIM: usize = 7;

/// An element of G₂ in its 7-dimensional representation.
pub type RepElement = Matrix;

type IMat = [[i64; DIM]; DIM];

const ZERO: IMat = [[0; DIM]; DIM];

fn imat_identity() -> IMat {
    let mut m = ZERO;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let mut out = ZERO;
    for i in 0..DIM {
        for k in 0..DIM {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..DIM {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn imat_lin(a: &IMat, ca: i64, b: &IMat, cb: i64) -> IMat {
    let mut out = ZERO;
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = ca * a[i][j] + cb * b[i][j];
        }
    }
    out
}

fn bracket(a: &IMat, b: &IMat) -> IMat {
    imat_lin(&imat_mul(a, b), 1, &imat_mul(b, a), -1)
}

fn imat_div(a: &IMat, d: i64) -> IMat {
    let mut out = ZERO;
    for i in 0..DIM {
        for j in 0..DIM {
            assert_eq!(a[i][j] % d, 0, "ℤ-form is not closed under division by {d}");
            out[i][j] = a[i][j] / d;
        }
    }
    out
}

fn is_zero(a: &IMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// `c` with `a = c·b`, if one exists.
fn scalar_ratio(a: &IMat, b: &IMat) -> Option<i64> {
    let (i, j) = (0..DIM)
        .flat_map(|i| (0..DIM).map(move |j| (i, j)))
        .find(|&(i, j)| b[i][j] != 0)?;
    if a[i][j] % b[i][j] != 0 {
        return None;
    }
    let c = a[i][j] / b[i][j];
    (imat_lin(a, 1, b, -c) == ZERO).then_some(c)
}

fn from_entries(entries: &[(usize, usize, i64)]) -> IMat {
    let mut m = ZERO;
    for &(r, c, v) in entries {
        m[r][c] = v;
    }
    m
}

/// One factor `x_{ir+js}(C·(−t)^i·u^j)` of a commutator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommTerm {
    pub i: i32,
    pub j: i32,
    pub root: Root,
    pub coeff: i64,
}

/// The integral data: weights, root vectors, divided powers, structure
/// constants and commutator coefficients.
pub struct IntegerForm {
    pub weights: [Root; DIM],
    e: HashMap<Root, IMat>,
    divided: HashMap<Root, Vec<IMat>>,
    n: HashMap<(Root, Root), i64>,
    comm: HashMap<(Root, Root), Vec<CommTerm>>,
}

impl IntegerForm {
    fn build() -> IntegerForm {
        let weights = [
            Root::new(2, 1),
            Root::new(1, 1),
            Root::new(1, 0),
            Root::new(0, 0),
            Root::new(-1, 0),
            Root::new(-1, -1),
            Root::new(-2, -1),
        ];
        let e1 = from_entries(&[(0, 1, 1), (2, 3, 2), (3, 4, 1), (5, 6, 1)]);
        let f1 = from_entries(&[(1, 0, 1), (3, 2, 1), (4, 3, 2), (6, 5, 1)]);
        let e2 = from_entries(&[(1, 2, 1), (4, 5, 1)]);
        let f2 = from_entries(&[(2, 1, 1), (5, 4, 1)]);

        let mut e = HashMap::new();
        for (pos, neg, r) in [(e1, f1, Root::new(1, 0)), (e2, f2, Root::new(0, 1))] {
            e.insert(r, pos);
            e.insert(-r, neg);
        }
        let chain = |a: &IMat, b: &IMat, d: i64| imat_div(&bracket(a, b), d);
        let e3 = chain(&e1, &e2, 1);
        let e4 = chain(&e1, &e3, 2);
        let e5 = chain(&e1, &e4, 3);
        let e6 = chain(&e2, &e5, 1);
        let f3 = chain(&f1, &f2, 1);
        let f4 = chain(&f1, &f3, 2);
        let f5 = chain(&f1, &f4, 3);
        let f6 = chain(&f2, &f5, 1);
        for (pos, neg, r) in [
            (e3, f3, Root::new(1, 1)),
            (e4, f4, Root::new(2, 1)),
            (e5, f5, Root::new(3, 1)),
            (e6, f6, Root::new(3, 2)),
        ] {
            let h = coroot_matrix(&weights, r);
            let sign = scalar_ratio(&bracket(&pos, &neg), &h)
                .filter(|c| c.abs() == 1)
                .expect("bracket of opposite root vectors is ±h");
            e.insert(r, pos);
            e.insert(-r, imat_lin(&neg, sign, &ZERO, 0));
        }
        for r in all_roots() {
            let h = coroot_matrix(&weights, r);
            assert_eq!(bracket(&e[&r], &e[&-r]), h, "[e_r, e_-r] = h_r for {r}");
        }

        let mut divided = HashMap::new();
        for r in all_roots() {
            let mut powers = vec![e[&r]];
            let mut cur = e[&r];
            for m in 2..=DIM as i64 {
                cur = imat_div(&imat_mul(&cur, &e[&r]), m);
                if is_zero(&cur) {
                    break;
                }
                powers.push(cur);
            }
            divided.insert(r, powers);
        }

        let mut n = HashMap::new();
        for r in all_roots() {
            for s in all_roots() {
                if (r + s).is_root() {
                    let c = scalar_ratio(&bracket(&e[&r], &e[&s]), &e[&(r + s)])
                        .expect("bracket of root vectors is a multiple of the sum");
                    n.insert((r, s), c);
                }
            }
        }

        let mut form = IntegerForm {
            weights,
            e,
            divided,
            n,
            comm: HashMap::new(),
        };
        let mut comm = HashMap::new();
        for r in all_roots() {
            for s in all_roots() {
                if r != s && r != -s {
                    comm.insert((r, s), form.peel_commutator(r, s));
                }
            }
        }
        form.comm = comm;
        form
    }

    fn xint(&self, r: Root, c: i64) -> IMat {
        let mut m = imat_identity();
        let mut cp = 1i64;
        for d in &self.divided[&r] {
            cp *= c;
            m = imat_lin(&m, 1, d, cp);
        }
        m
    }

    /// Reads the coefficients of `[x_s(1), x_r(1)]` over ℤ by stripping
    /// factors in order of increasing `i+j`.
    fn peel_commutator(&self, r: Root, s: Root) -> Vec<CommTerm> {
        let xs = self.xint(s, 1);
        let xr = self.xint(r, 1);
        let xs_inv = self.xint(s, -1);
        let xr_inv = self.xint(r, -1);
        let mut m = imat_mul(&imat_mul(&imat_mul(&xs_inv, &xr_inv), &xs), &xr);
        let mut terms = Vec::new();
        for total in 2..=5 {
            for i in 1..total {
                let j = total - i;
                let root = r.scale(i) + s.scale(j);
                if !root.is_root() {
                    continue;
                }
                let er = &self.e[&root];
                let (a, b) = (0..DIM)
                    .flat_map(|a| (0..DIM).map(move |b| (a, b)))
                    .find(|&(a, b)| er[a][b] != 0)
                    .expect("root vectors are nonzero");
                let c = m[a][b] / er[a][b];
                assert_eq!(m[a][b] % er[a][b], 0);
                if c != 0 {
                    m = imat_mul(&self.xint(root, -c), &m);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    terms.push(CommTerm {
                        i,
                        j,
                        root,
                        coeff: c * sign,
                    });
                }
            }
        }
        assert_eq!(m, imat_identity(), "commutator of {r},{s} fully peeled");
        terms
    }

    pub fn root_vector(&self, r: Root) -> &IMat {
        &self.e[&r]
    }

    pub fn divided_powers(&self, r: Root) -> &[IMat] {
        &self.divided[&r]
    }

    /// `N_{r,s}` with `[e_r, e_s] = N_{r,s} e_{r+s}`; `None` if `r+s` is not a root.
    pub fn structure_constant(&self, r: Root, s: Root) -> Option<i64> {
        self.n.get(&(r, s)).copied()
    }

    pub fn commutator_terms(&self, r: Root, s: Root) -> Option<&[CommTerm]> {
        self.comm.get(&(r, s)).map(Vec::as_slice)
    }
}

fn coroot_matrix(weights: &[Root; DIM], r: Root) -> IMat {
    let mut h = ZERO;
    for (i, w) in weights.iter().enumerate() {
        h[i][i] = pairing(*w, r) as i64;
    }
    h
}

pub fn integer_form() -> &'static IntegerForm {
    static FORM: OnceLock<IntegerForm> = OnceLock::new();
    FORM.get_or_init(IntegerForm::build)
}

/// Chevalley commutator coefficients: `[x_s(u), x_r(t)] = Π x_{ir+js}(C·(−t)^i·u^j)`
/// with `[a,b] = a⁻¹b⁻¹ab`, the product taken in order of increasing `i+j`.
pub fn commutator_coeffs(r: Root, s: Root) -> Result<Vec<CommTerm>> {
    if !r.is_root() || !s.is_root() || r == s || r == -s {
        return Err(Error::Inconsistent(format!(
            "commutator coefficients need two roots r ≠ ±s, got {r} and {s}"
        )));
    }
    Ok(integer_form()
        .commutator_terms(r, s)
        .expect("table covers every pair")
        .to_vec())
}

pub fn structure_constant(r: Root, s: Root) -> Option<i64> {
    integer_form().structure_constant(r, s)
}

// ---- words ------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LetterKind {
    X,
    N,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub kind: LetterKind,
    pub i: i32,
    pub t: FieldElement,
}

impl Letter {
    pub fn x(i: i32, t: FieldElement) -> Self {
        Letter { kind: LetterKind::X, i, t }
    }

    pub fn n(i: i32, t: FieldElement) -> Self {
        Letter { kind: LetterKind::N, i, t }
    }

    pub fn h(i: i32, t: FieldElement) -> Self {
        Letter { kind: LetterKind::H, i, t }
    }

    pub fn inverse(&self) -> Result<Letter> {
        let t = match self.kind {
            LetterKind::X | LetterKind::N => -&self.t,
            LetterKind::H => self.t.inv().map_err(|_| Error::ZeroParameter)?,
        };
        Ok(Letter { kind: self.kind, i: self.i, t })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            LetterKind::X => 'x',
            LetterKind::N => 'n',
            LetterKind::H => 'h',
        };
        write!(f, "{k}{}({})", self.i, self.t)
    }
}

/// A formal product of letters, evaluated left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct LetterJson {
    kind: LetterKind,
    i: i32,
    t: Vec<u32>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupWord { letters }
    }

    pub fn inverse(&self) -> Result<GroupWord> {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(Letter::inverse)
            .collect::<Result<_>>()?;
        Ok(GroupWord { letters })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<LetterJson> = self
            .letters
            .iter()
            .map(|l| LetterJson {
                kind: l.kind,
                i: l.i,
                t: l.t.coeffs(),
            })
            .collect();
        serde_json::to_value(v).expect("letters serialize")
    }

    pub fn from_json(field: &FieldRef, value: &serde_json::Value) -> Result<GroupWord> {
        let raw: Vec<LetterJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let letters = raw
            .into_iter()
            .map(|l| {
                Root::from_index(l.i)?;
                Ok(Letter {
                    kind: l.kind,
                    i: l.i,
                    t: FieldElement::from_coeffs(field, &l.t)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(GroupWord { letters })
    }
}

impl GroupWord {
    /// Parses the display form, e.g. `h4(x)·x-2(1)`; `*` and whitespace also
    /// separate letters, and `1` is the empty word.
    pub fn parse(field: &FieldRef, s: &str) -> Result<GroupWord> {
        let bad = |t: &str| Error::Parse(format!("letter {t:?}"));
        let mut letters = Vec::new();
        let mut rest = s.trim();
        if rest == "1" {
            return Ok(GroupWord::empty());
        }
        while !rest.is_empty() {
            let close = rest.find(')').ok_or_else(|| bad(rest))?;
            let (tok, tail) = rest.split_at(close + 1);
            rest = tail.trim_start_matches(|c: char| c == '·' || c == '*' || c.is_whitespace());
            let (head, arg) = tok[..tok.len() - 1].split_once('(').ok_or_else(|| bad(tok))?;
            let mut chars = head.chars();
            let kind = match chars.next() {
                Some('x') => LetterKind::X,
                Some('n') => LetterKind::N,
                Some('h') => LetterKind::H,
                _ => return Err(bad(tok)),
            };
            let i: i32 = chars.as_str().parse().map_err(|_| bad(tok))?;
            Root::from_index(i)?;
            letters.push(Letter {
                kind,
                i,
                t: FieldElement::parse(field, arg)?,
            });
        }
        Ok(GroupWord { letters })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join("·"))
    }
}

// ---- representation over a field ---------------------------------------

/// Slot of a root index in per-root tables: 1..6 → 0..5, −1..−6 → 6..11.
fn slot(i: i32) -> Result<usize> {
    match i {
        1..=6 => Ok(i as usize - 1),
        -6..=-1 => Ok(5 + i.unsigned_abs() as usize),
        _ => Err(Error::InvalidRoot(i)),
    }
}

/// The representation context: the ℤ-form reduced modulo p.
pub struct Rep {
    field: FieldRef,
    /// Per root slot: (power m, flat position, coefficient of `e^(m)` mod p).
    terms: Vec<Vec<(u32, usize, u32)>>,
    /// Per root slot: a flat position whose `e_r` entry is a unit mod p, and its inverse.
    pivot: Vec<Option<(usize, u32)>>,
}

impl Rep {
    pub fn new(field: &FieldRef) -> Rep {
        let form = integer_form();
        let mut terms = vec![Vec::new(); 12];
        let mut pivot = vec![None; 12];
        for i in (-6..=6).filter(|&i| i != 0) {
            let r = Root::from_index(i).expect("valid index");
            let s = slot(i).expect("valid index");
            for (k, d) in form.divided_powers(r).iter().enumerate() {
                for a in 0..DIM {
                    for b in 0..DIM {
                        let c = field.from_int(d[a][b]);
                        if c != 0 {
                            terms[s].push((k as u32 + 1, a * DIM + b, c));
                        }
                    }
                }
            }
            let e = form.root_vector(r);
            pivot[s] = (0..DIM * DIM).find_map(|pos| {
                let c = field.from_int(e[pos / DIM][pos % DIM]);
                (c != 0).then(|| (pos, field.inv(c).expect("nonzero")))
            });
        }
        Rep {
            field: field.clone(),
            terms,
            pivot,
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn weights(&self) -> [Root; DIM] {
        integer_form().weights
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, DIM)
    }

    fn check(&self, t: &FieldElement) -> Result<()> {
        if **t.field() == *self.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// `x_i(t)` for a packed parameter.
    pub fn xmat_raw(&self, i: i32, t: u32) -> Result<Matrix> {
        let s = slot(i)?;
        let f = &*self.field;
        let mut data = vec![0u32; DIM * DIM];
        for k in 0..DIM {
            data[k * DIM + k] = 1;
        }
        if t != 0 {
            let mut powers = [1u32; DIM + 1];
            for m in 1..=DIM {
                powers[m] = f.mul(powers[m - 1], t);
            }
            for &(m, pos, c) in &self.terms[s] {
                data[pos] = f.add(data[pos], f.mul(c, powers[m as usize]));
            }
        }
        Ok(Matrix::from_raw(&self.field, DIM, DIM, data))
    }

    pub fn xmat(&self, i: i32, t: &FieldElement) -> Result<Matrix> {
        self.check(t)?;
        self.xmat_raw(i, t.raw())
    }

    /// `n_i(t) = x_i(t) x_{−i}(−t⁻¹) x_i(t)`.
    pub fn nmat(&self, i: i32, t: &FieldElement) -> Result<Matrix> {
        self.check(t)?;
        if t.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let x = self.xmat(i, t)?;
        let y = self.xmat(-i, &-t.inv()?)?;
        Ok(&(&x * &y) * &x)
    }

    /// `h_i(t) = n_i(t) n_i(−1)`.
    pub fn hmat(&self, i: i32, t: &FieldElement) -> Result<Matrix> {
        let minus_one = -FieldElement::one(&self.field);
        Ok(&self.nmat(i, t)? * &self.nmat(i, &minus_one)?)
    }

    pub fn letter(&self, l: &Letter) -> Result<Matrix> {
        match l.kind {
            LetterKind::X => self.xmat(l.i, &l.t),
            LetterKind::N => self.nmat(l.i, &l.t),
            LetterKind::H => self.hmat(l.i, &l.t),
        }
    }

    pub fn eval_word(&self, w: &GroupWord) -> Result<Matrix> {
        let mut m = self.identity();
        for l in &w.letters {
            m = &m * &self.letter(l)?;
        }
        Ok(m)
    }

    /// `Π x_{order[k]}(params[k])`.
    pub fn eval_normal_form(&self, order: &[i32], params: &[FieldElement]) -> Result<Matrix> {
        let mut m = self.identity();
        for (&i, t) in order.iter().zip(params) {
            m = &m * &self.xmat(i, t)?;
        }
        Ok(m)
    }

    /// Parameters `(t₁,…,t₆)` with `m = x₁(t₁)x₂(t₂)…x₆(t₆)`.
    pub fn unipotent_factorize(&self, m: &Matrix) -> Result<[FieldElement; 6]> {
        let v = self.factorize_ordered(m, &[1, 2, 3, 4, 5, 6])?;
        Ok(v.try_into().expect("six parameters"))
    }

    /// Parameters with `m = Π x_{order[k]}(t_k)`, reading each coordinate by
    /// left-stripping. `order` must list roots of one sign by nondecreasing
    /// height.
    pub fn factorize_ordered(&self, m: &Matrix, order: &[i32]) -> Result<Vec<FieldElement>> {
        if **m.field() != *self.field || m.rows() != DIM || m.cols() != DIM {
            return Err(Error::FieldMismatch);
        }
        let f = &*self.field;
        let mut cur = m.clone();
        let mut out = Vec::with_capacity(order.len());
        for &i in order {
            let (pos, inv) = self.pivot[slot(i)?].ok_or_else(|| {
                Error::NotUnipotent(format!("root {i} has no unit entry mod {}", f.p()))
            })?;
            let t = f.mul(cur.raw()[pos], inv);
            cur = &self.xmat_raw(i, f.neg(t))? * &cur;
            out.push(FieldElement::from_raw(&self.field, t));
        }
        if !cur.is_identity() {
            return Err(Error::NotUnipotent(
                "residual after stripping root factors is not the identity".into(),
            ));
        }
        Ok(out)
    }
}

/// Positive root indices in the normal-form order.
/// Whether `[x_s(u), x_r(t)]` equals the product given by [`commutator_coeffs`].
pub fn commutator_holds(rep: &Rep, r: Root, s: Root, t: &FieldElement, u: &FieldElement) -> Result<bool> {
    let f = rep.field();
    let ir = r.index().ok_or(Error::InvalidRoot(0))?;
    let is = s.index().ok_or(Error::InvalidRoot(0))?;
    let lhs = Matrix::commutator(&rep.xmat(is, u)?, &rep.xmat(ir, t)?)?;
    let mut rhs = rep.identity();
    for term in commutator_coeffs(r, s)? {
        let c = FieldElement::from_int(f, term.coeff) * (-t).pow(term.i as u64) * u.pow(term.j as u64);
        rhs = &rhs * &rep.xmat(term.root.index().expect("root"), &c)?;
    }
    Ok(lhs == rhs)
}

pub const POSITIVE_ORDER: [i32; 6] = [1, 2, 3, 4, 5, 6];
/// Negative root indices in the normal-form order.
pub const NEGATIVE_ORDER: [i32; 6] = [-1, -2, -3, -4, -5, -6];

pub fn build_rep(field: &FieldRef) -> Rep {
    Rep::new(field)
}

/// Index of a root in 1..6 / −1..−6.
pub fn root_index(r: Root) -> Result<i32> {
    r.index().ok_or(Error::InvalidRoot(0))
}

pub fn positive_root(i: usize) -> Root {
    POSITIVE_ROOTS[i - 1]
}

#[cfg(test)]
mod tests {
    #[test]
    fn word_parse_round_trips() {
        let f = crate::gf::Field::new(2, 3).unwrap();
        let w = GroupWord::parse(&f, "h4(x)·x-2(x^2+1) * n1(1) x6(0)").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(GroupWord::parse(&f, &w.to_string()).unwrap(), w);
        assert!(GroupWord::parse(&f, "1").unwrap().is_empty());
        assert!(GroupWord::parse(&f, "x7(1)").is_err());
        assert!(GroupWord::parse(&f, "y1(1)").is_err());
        assert!(GroupWord::parse(&f, "x1(1").is_err());
    }

    use super::*;
    use crate::gf::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fields() -> Vec<FieldRef> {
        [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]
            .iter()
            .map(|&(p, n)| Field::new(p, n).unwrap())
            .collect()
    }

    #[test]
    fn weights_are_zero_and_short_roots() {
        let form = integer_form();
        let mut w: Vec<Root> = form.weights.to_vec();
        w.sort();
        let mut expect: Vec<Root> = all_roots().into_iter().filter(|r| r.is_short()).collect();
        expect.push(Root::new(0, 0));
        expect.sort();
        assert_eq!(w, expect);
    }

    #[test]
    fn root_vectors_shift_weights() {
        let form = integer_form();
        for r in all_roots() {
            let e = form.root_vector(r);
            for a in 0..DIM {
                for b in 0..DIM {
                    if e[a][b] != 0 {
                        assert_eq!(form.weights[a], form.weights[b] + r);
                    }
                }
            }
        }
        // e_{α₂} moves exactly two weight vectors
        let e2 = form.root_vector(Root::new(0, 1));
        let nz: usize = e2.iter().flatten().filter(|&&x| x != 0).count();
        assert_eq!(nz, 2);
    }

    #[test]
    fn root_vectors_are_nilpotent() {
        let form = integer_form();
        for r in all_roots() {
            let e = form.root_vector(r);
            let mut m = *e;
            for _ in 1..7 {
                m = imat_mul(&m, e);
            }
            assert!(is_zero(&m));
            let len = form.divided_powers(r).len();
            assert_eq!(len, if r.is_short() { 2 } else { 1 }, "root {r}");
        }
    }

    #[test]
    fn structure_constants_have_string_magnitudes() {
        for r in all_roots() {
            for s in all_roots() {
                let Some(n) = structure_constant(r, s) else {
                    assert!(!(r + s).is_root());
                    continue;
                };
                let mut p = 0;
                while (s - r.scale(p + 1)).is_root() {
                    p += 1;
                }
                assert_eq!(n.abs(), p as i64 + 1, "N({r},{s})");
                assert_eq!(structure_constant(s, r), Some(-n));
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let t = commutator_coeffs(Root::new(1, 1), Root::new(2, 1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].root, Root::new(3, 2));
        assert_eq!(t[0].coeff.abs(), 3);
        let t = commutator_coeffs(Root::new(0, 1), Root::new(3, 1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].root, Root::new(3, 2));
        assert_eq!(t[0].coeff.abs(), 1);
        assert!(commutator_coeffs(Root::new(0, 1), Root::new(3, 2)).unwrap().is_empty());
        assert!(commutator_coeffs(Root::new(1, 0), Root::new(-1, 0)).is_err());
    }

    #[test]
    fn first_commutator_coefficient_is_structure_constant() {
        for r in all_roots() {
            for s in all_roots() {
                if r == s || r == -s {
                    continue;
                }
                let terms = commutator_coeffs(r, s).unwrap();
                let c11 = terms.iter().find(|t| t.i == 1 && t.j == 1).map(|t| t.coeff);
                assert_eq!(c11, structure_constant(r, s), "{r},{s}");
            }
        }
    }

    #[test]
    fn commutator_formula_holds_in_every_test_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for f in fields() {
            let rep = Rep::new(&f);
            for r in all_roots() {
                for s in all_roots() {
                    if r == s || r == -s {
                        continue;
                    }
                    let ir = r.index().unwrap();
                    let is = s.index().unwrap();
                    let terms = commutator_coeffs(r, s).unwrap();
                    for _ in 0..4 {
                        let t = FieldElement::random(&f, &mut rng);
                        let u = FieldElement::random(&f, &mut rng);
                        let lhs = Matrix::commutator(
                            &rep.xmat(is, &u).unwrap(),
                            &rep.xmat(ir, &t).unwrap(),
                        )
                        .unwrap();
                        let mut rhs = rep.identity();
                        for term in &terms {
                            let c = FieldElement::from_int(&f, term.coeff)
                                * (-&t).pow(term.i as u64)
                                * u.pow(term.j as u64);
                            rhs = &rhs * &rep.xmat(term.root.index().unwrap(), &c).unwrap();
                        }
                        assert_eq!(lhs, rhs, "{f} r={r} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn xmat_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in fields() {
            let rep = Rep::new(&f);
            for i in (-6..=6).filter(|&i| i != 0) {
                assert!(rep.xmat(i, &FieldElement::zero(&f)).unwrap().is_identity());
                let s = FieldElement::random(&f, &mut rng);
                let t = FieldElement::random(&f, &mut rng);
                assert_eq!(
                    &rep.xmat(i, &s).unwrap() * &rep.xmat(i, &t).unwrap(),
                    rep.xmat(i, &(&s + &t)).unwrap()
                );
                assert!(rep.xmat(i, &s).unwrap().det().is_one());
            }
        }
    }

    #[test]
    fn torus_acts_by_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in fields() {
            let rep = Rep::new(&f);
            for i in (-6..=6).filter(|&i| i != 0) {
                let r = Root::from_index(i).unwrap();
                let t = loop {
                    let t = FieldElement::random(&f, &mut rng);
                    if !t.is_zero() {
                        break t;
                    }
                };
                let u = loop {
                    let u = FieldElement::random(&f, &mut rng);
                    if !u.is_zero() {
                        break u;
                    }
                };
                let h = rep.hmat(i, &t).unwrap();
                for (k, w) in rep.weights().iter().enumerate() {
                    for c in 0..DIM {
                        let expect = if c == k {
                            t.pow_i(pairing(*w, r) as i64).unwrap()
                        } else {
                            FieldElement::zero(&f)
                        };
                        assert_eq!(h.entry(k, c), expect);
                    }
                }
                assert_eq!(
                    &h * &rep.hmat(i, &u).unwrap(),
                    rep.hmat(i, &(&t * &u)).unwrap()
                );
            }
        }
    }

    #[test]
    fn h2_on_weight_alpha1_is_inverse() {
        let f = Field::new(5, 1).unwrap();
        let rep = Rep::new(&f);
        let t = FieldElement::from_int(&f, 2);
        let h = rep.hmat(2, &t).unwrap();
        // v3 has weight (1,0)
        assert_eq!(h.entry(2, 2), t.inv().unwrap());
    }

    #[test]
    fn weyl_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for f in fields() {
            let rep = Rep::new(&f);
            for i in (-6..=6).filter(|&i| i != 0) {
                let t = loop {
                    let t = FieldElement::random(&f, &mut rng);
                    if !t.is_zero() {
                        break t;
                    }
                };
                let t1 = FieldElement::random(&f, &mut rng);
                let n = rep.nmat(i, &t).unwrap();
                let lhs = n.conjugate(&rep.xmat(i, &t1).unwrap()).unwrap();
                let param = -(t.pow_i(-2).unwrap() * &t1);
                assert_eq!(lhs, rep.xmat(-i, &param).unwrap());
            }
        }
    }

    #[test]
    fn n_and_h_reject_zero() {
        let f = Field::new(2, 2).unwrap();
        let rep = Rep::new(&f);
        assert!(matches!(
            rep.nmat(1, &FieldElement::zero(&f)),
            Err(Error::ZeroParameter)
        ));
    }

    #[test]
    fn short_root_matrices_are_quadratic() {
        // entries of x₁(t) are polynomials of degree ≤ 2: the third finite
        // difference over GF(7) vanishes entrywise
        let f = Field::new(7, 1).unwrap();
        let rep = Rep::new(&f);
        let ms: Vec<Matrix> = (0..4)
            .map(|k| rep.xmat(1, &FieldElement::from_int(&f, k)).unwrap())
            .collect();
        let d3 = &(&(&ms[3] - &ms[2]) - &(&ms[2] - &ms[1])) - &(&(&ms[2] - &ms[1]) - &(&ms[1] - &ms[0]));
        assert!(d3.is_zero());
    }

    #[test]
    fn word_evaluation() {
        let f = Field::new(2, 2).unwrap();
        let rep = Rep::new(&f);
        assert!(rep.eval_word(&GroupWord::empty()).unwrap().is_identity());
        let one = FieldElement::one(&f);
        for t in FieldElement::all(&f).skip(1) {
            let t2 = t.pow(2);
            let t2i = t2.inv().unwrap();
            let w = GroupWord::new(vec![
                Letter::x(2, t2.clone()),
                Letter::x(-2, t2i),
                Letter::x(2, t2.clone()),
                Letter::x(2, one.clone()),
                Letter::x(-2, one.clone()),
                Letter::x(2, one.clone()),
            ]);
            assert_eq!(rep.eval_word(&w).unwrap(), rep.hmat(2, &t2).unwrap());
            let a = GroupWord::new(vec![Letter::x(6, t.clone()), Letter::x(2, t2.clone())]);
            let b = GroupWord::new(vec![Letter::x(2, t2.clone()), Letter::x(6, t.clone())]);
            assert_eq!(rep.eval_word(&a).unwrap(), rep.eval_word(&b).unwrap());
            let ab = a.concat(&b);
            assert_eq!(
                rep.eval_word(&ab).unwrap(),
                &rep.eval_word(&a).unwrap() * &rep.eval_word(&b).unwrap()
            );
            let inv = rep.eval_word(&ab.inverse().unwrap()).unwrap();
            assert!((&inv * &rep.eval_word(&ab).unwrap()).is_identity());
        }
    }

    #[test]
    fn mixed_field_word_is_an_error() {
        let f = Field::new(2, 2).unwrap();
        let g = Field::new(2, 3).unwrap();
        let rep = Rep::new(&f);
        let w = GroupWord::new(vec![Letter::x(1, FieldElement::one(&g))]);
        assert!(matches!(rep.eval_word(&w), Err(Error::FieldMismatch)));
    }

    #[test]
    fn word_json_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let g = FieldElement::primitive(&f);
        let w = GroupWord::new(vec![Letter::x(2, g.clone()), Letter::h(-4, g)]);
        let j = w.to_json();
        assert_eq!(j[0]["kind"], "x");
        assert_eq!(j[0]["t"], serde_json::json!([0, 1]));
        assert_eq!(GroupWord::from_json(&f, &j).unwrap(), w);
    }

    #[test]
    fn factorization_examples() {
        let f = Field::new(3, 2).unwrap();
        let rep = Rep::new(&f);
        let zero = FieldElement::zero(&f);
        let id = rep.unipotent_factorize(&rep.identity()).unwrap();
        assert!(id.iter().all(FieldElement::is_zero));
        let a = FieldElement::primitive(&f);
        let b = &a + &FieldElement::one(&f);
        let m = &rep.xmat(1, &a).unwrap() * &rep.xmat(3, &b).unwrap();
        let t = rep.unipotent_factorize(&m).unwrap();
        assert_eq!(t, [a.clone(), zero.clone(), b.clone(), zero.clone(), zero.clone(), zero.clone()]);
        let swapped = &rep.xmat(3, &b).unwrap() * &rep.xmat(1, &a).unwrap();
        let t = rep.unipotent_factorize(&swapped).unwrap();
        assert_eq!(t[0], a);
        assert_eq!(t[2], b);
        assert!(t[3..].iter().any(|x| !x.is_zero()));
        assert_eq!(rep.eval_normal_form(&POSITIVE_ORDER, &t).unwrap(), swapped);
        let lower = rep.xmat(-1, &a).unwrap();
        assert!(rep.unipotent_factorize(&lower).is_err());
    }

    #[test]
    fn normal_form_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for f in fields() {
            let rep = Rep::new(&f);
            for order in [POSITIVE_ORDER, NEGATIVE_ORDER] {
                for _ in 0..10 {
                    let t: Vec<FieldElement> =
                        (0..6).map(|_| FieldElement::random(&f, &mut rng)).collect();
                    let m = rep.eval_normal_form(&order, &t).unwrap();
                    assert_eq!(rep.factorize_ordered(&m, &order).unwrap(), t);
                }
            }
        }
    }
}
