//! First cohomology of SL₂(q₀) from its Steinberg presentation, brute-force
//! complement counting, and the layer-by-layer conjugation of complements in
//! the long parabolic onto the standard families `X_{k,l}`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::chevalley::{GroupWord, Letter, Rep};
use crate::error::{Error, Result};
use crate::finitegroup::{enumerate_group, fixed_space, group_order, ElementStore};
use crate::gf::{Field, FieldElement, FieldRef};
use crate::linalg::{Matrix, Vector};
use crate::repanalysis::{level_action, level_roots, ModuleRep};
use crate::rootsystem::Parabolic;
use crate::subgroups::{subgroup_generators, A1Pair, SubgroupSpec, LEVI_Q_ORDER};

/// Largest number of candidate generator-value tuples searched.
pub const COMPLEMENT_LIMIT: u64 = 1 << 20;

/// A tensor product of Frobenius-twisted symmetric powers of the natural
/// SL₂(q₀)-module, named like `1x1t3` (`L(1) ⊗ L(1)` twisted by 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Module {
    pub field: FieldRef,
    /// `(a, N)`: `Sym^a` with entries raised to the `N`-th power.
    pub factors: Vec<(u32, u64)>,
}

impl Sl2Module {
    pub fn parse(field: &FieldRef, name: &str) -> Result<Sl2Module> {
        let p = field.p() as u64;
        let factors = name
            .split('x')
            .map(|part| {
                let (a, twist) = match part.split_once('t') {
                    Some((a, n)) => (a, n),
                    None => (part, "1"),
                };
                let a: u32 = a.trim().parse().map_err(|_| Error::Parse(format!("bad factor '{part}'")))?;
                let n: u64 = twist.trim().parse().map_err(|_| Error::Parse(format!("bad twist '{part}'")))?;
                if a > 2 {
                    return Err(Error::Parse(format!("factor weight {a} > 2")));
                }
                let mut m = n;
                while m > 1 && m.is_multiple_of(p) {
                    m /= p;
                }
                if n == 0 || m != 1 {
                    return Err(Error::Parse(format!("twist {n} is not a power of {p}")));
                }
                Ok((a, n))
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::Parse("empty module name".into()));
        }
        Ok(Sl2Module {
            field: field.clone(),
            factors,
        })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|&(a, _)| a as usize + 1).product()
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|&(a, n)| if n == 1 { a.to_string() } else { format!("{a}t{n}") })
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Names of the module twisted by each field automorphism; these are
    /// isomorphic as abstract modules for the finite group.
    pub fn automorphism_twists(&self) -> Vec<String> {
        let p = self.field.p() as u64;
        let q = self.field.order() as u64;
        let mut out: Vec<String> = (0..self.field.n())
            .map(|e| {
                let m = Sl2Module {
                    field: self.field.clone(),
                    factors: self
                        .factors
                        .iter()
                        .map(|&(a, n)| {
                            let mut t = n * p.pow(e);
                            while t >= q {
                                t /= q;
                            }
                            (a, t)
                        })
                        .collect(),
                };
                m.name()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Matrix of `x₊(t)` (`positive`) or `x₋(t)`.
    pub fn letter(&self, positive: bool, t: u32) -> Matrix {
        let f = &self.field;
        let mut out = Matrix::identity(f, 1);
        for &(a, n) in &self.factors {
            let s = f.pow(t, n);
            out = kron(&out, &sym_power(f, a as usize, positive, s));
        }
        out
    }
}

/// `Sym^a` of the natural module on the monomials `e₁^{a−j} e₂^j`.
fn sym_power(f: &FieldRef, a: usize, positive: bool, t: u32) -> Matrix {
    let mut m = Matrix::zeros(f, a + 1, a + 1);
    for j in 0..=a {
        if positive {
            // e₂ ↦ t e₁ + e₂
            for i in 0..=j {
                let c = f.mul(f.from_int(binom(j, i)), f.pow(t, (j - i) as u64));
                m.set(i, j, c);
            }
        } else {
            // e₁ ↦ e₁ + t e₂
            for k in 0..=a - j {
                let c = f.mul(f.from_int(binom(a - j, k)), f.pow(t, k as u64));
                m.set(j + k, j, c);
            }
        }
    }
    m
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(f, ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, f.mul(x, b.get(k, l)));
                }
            }
        }
    }
    out
}

/// A letter `x₊(t)` or `x₋(t)` of the presentation.
type Sym = (bool, u32);

/// The Steinberg relations of SL₂(q₀) as pairs of words.
pub fn sl2_relations(f: &Field) -> Vec<(Vec<Sym>, Vec<Sym>)> {
    let q = f.order();
    let neg = |t: u32| f.neg(t);
    let inv = |t: u32| f.inv(t).expect("nonzero");
    let n = |t: u32| vec![(true, t), (false, neg(inv(t))), (true, t)];
    let n_inv = |t: u32| vec![(true, neg(t)), (false, inv(t)), (true, neg(t))];
    let h = |t: u32| [n(t), n(neg(1))].concat();
    let mut rels = Vec::new();
    for t in 0..q {
        for u in 0..q {
            for s in [true, false] {
                rels.push((vec![(s, t), (s, u)], vec![(s, f.add(t, u))]));
            }
        }
    }
    for t in 1..q {
        for u in 1..q {
            rels.push(([h(t), h(u)].concat(), h(f.mul(t, u))));
        }
        let t2 = f.mul(t, t);
        for u in 0..q {
            rels.push((
                [n(t), vec![(true, u)], n_inv(t)].concat(),
                vec![(false, neg(f.mul(inv(t2), u)))],
            ));
            rels.push((
                [n(t), vec![(false, u)], n_inv(t)].concat(),
                vec![(true, neg(f.mul(t2, u)))],
            ));
        }
    }
    rels
}

fn eval_sym(m: &Sl2Module, w: &[Sym]) -> Matrix {
    w.iter()
        .fold(Matrix::identity(&m.field, m.dim()), |acc, &(s, t)| &acc * &m.letter(s, t))
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Result {
    pub q0: u32,
    pub module: String,
    pub dim: usize,
    pub dim_over_q0: usize,
    pub dim_prime_field: usize,
    pub z1: usize,
    pub b1: usize,
    pub fixed: usize,
    pub relations: usize,
    pub group_order: usize,
    /// Module names related by field automorphisms (same cohomology).
    pub automorphism_twists: Vec<String>,
}

/// `dim H¹(SL₂(q₀), V)`: cocycles are the solutions of the linearized
/// relations on the values at the letters `x±(t)`, `t ≠ 0`.
pub fn h1_dim(q0: u32, module: &str) -> Result<H1Result> {
    let f = field_of_order(q0)?;
    h1_module(&Sl2Module::parse(&f, module)?)
}

pub fn field_of_order(q: u32) -> Result<FieldRef> {
    for p in crate::gf::SUPPORTED_PRIMES {
        let mut n = 0;
        let mut x = q;
        while x > 1 && x.is_multiple_of(p) {
            x /= p;
            n += 1;
        }
        if x == 1 && n > 0 {
            return Field::new(p, n);
        }
    }
    Err(Error::UnsupportedField { p: q, n: 1 })
}

pub fn h1_module(m: &Sl2Module) -> Result<H1Result> {
    let f = &m.field;
    let q = f.order();
    let d = m.dim();
    let rels = sl2_relations(f);

    // the presented group is SL₂(q₀): its natural matrices satisfy the
    // relations and generate a group of the right order
    let natural = Sl2Module::parse(f, "1")?;
    let order = q as usize * (q as usize * q as usize - 1);
    let nat_gens: Vec<Matrix> = (1..q).flat_map(|t| [natural.letter(true, t), natural.letter(false, t)]).collect();
    let got = group_order(&nat_gens, order + 1)?;
    if got != order {
        return Err(Error::CertificateFailed(format!("natural matrices generate order {got}, not {order}")));
    }
    for (lhs, rhs) in &rels {
        if eval_sym(&natural, lhs) != eval_sym(&natural, rhs) {
            return Err(Error::CertificateFailed("relation fails on the natural module".into()));
        }
        if eval_sym(m, lhs) != eval_sym(m, rhs) {
            return Err(Error::CertificateFailed(format!("relation fails on {}", m.name())));
        }
    }

    // unknowns γ(x±(t)) for t ≠ 0, blocks of size d
    let slot = |(s, t): Sym| -> Option<usize> {
        (t != 0).then(|| (if s { 0 } else { q as usize - 1 } + t as usize - 1) * d)
    };
    let unknowns = 2 * (q as usize - 1) * d;
    let letter_mats: BTreeMap<Sym, Matrix> = [true, false]
        .iter()
        .flat_map(|&s| (0..q).map(move |t| (s, t)))
        .map(|k| (k, m.letter(k.0, k.1)))
        .collect();
    // γ(l₁⋯l_k) = Σ_j (l₁⋯l_{j−1}) γ(l_j)
    let expand = |w: &[Sym], sign: u32, rows: &mut [Vector]| {
        let mut prefix = Matrix::identity(f, d);
        for &l in w {
            if let Some(base) = slot(l) {
                for r in 0..d {
                    for c in 0..d {
                        let v = f.mul(sign, prefix.get(r, c));
                        rows[r][base + c] = f.add(rows[r][base + c], v);
                    }
                }
            }
            prefix = &prefix * &letter_mats[&l];
        }
    };
    let minus = f.neg(1);
    let mut system: Vec<Vector> = Vec::with_capacity(rels.len() * d);
    for (lhs, rhs) in &rels {
        let mut rows = vec![vec![0u32; unknowns]; d];
        expand(lhs, 1, &mut rows);
        expand(rhs, minus, &mut rows);
        system.extend(rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
    }
    let z1 = if system.is_empty() {
        unknowns
    } else {
        unknowns - Matrix::from_rows(f, &system).rank()
    };

    // coboundaries v ↦ (g ↦ v − g v)
    let mut cob = Matrix::zeros(f, unknowns, d);
    let gens: Vec<Matrix> = (1..q).flat_map(|t| [(true, t), (false, t)]).map(|k| letter_mats[&k].clone()).collect();
    for (k, mat) in letter_mats.iter().filter(|(k, _)| k.1 != 0) {
        let base = slot(*k).expect("nonzero letter");
        let diff = mat.minus_scalar(1).neg();
        for r in 0..d {
            for c in 0..d {
                cob.set(base + r, c, diff.get(r, c));
            }
        }
    }
    let b1 = cob.rank();
    let fixed = fixed_space(f, d, &gens).len();
    if b1 + fixed != d {
        return Err(Error::CertificateFailed(format!("dim B¹ = {b1} but dim V − dim V^X = {}", d - fixed)));
    }
    let h = z1 - b1;
    Ok(H1Result {
        q0: q,
        module: m.name(),
        dim: d,
        dim_over_q0: h,
        dim_prime_field: h * f.n() as usize,
        z1,
        b1,
        fixed,
        relations: rels.len(),
        group_order: order,
        automorphism_twists: m.automorphism_twists(),
    })
}

// ---- complements -----------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ComplementClasses {
    pub count: usize,
    /// Number of complements (cocycles on the generators).
    pub z1_size: usize,
    /// Size of each class (coboundaries on the generators).
    pub b1_size: usize,
    pub group_order: usize,
    /// One generator-value tuple per class, by canonical key.
    pub representatives: Vec<Vec<Vector>>,
    #[serde(skip)]
    coboundaries: Vec<Vec<Vector>>,
    #[serde(skip)]
    field: FieldRef,
}

impl ComplementClasses {
    fn key(&self, tuple: &[Vector]) -> Vec<Vector> {
        self.coboundaries
            .iter()
            .map(|b| add_tuples(&self.field, tuple, b))
            .min()
            .expect("zero coboundary")
    }

    /// Index of the class of a complement given by its generator values.
    pub fn class_of(&self, tuple: &[Vector]) -> Option<usize> {
        let k = self.key(tuple);
        self.representatives.iter().position(|r| *r == k)
    }
}

fn add_tuples(f: &FieldRef, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| f.add(u, v)).collect())
        .collect()
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let n = a.rows() + b.rows();
    let mut out = Matrix::zeros(f, n, n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set(a.rows() + i, a.cols() + j, b.get(i, j));
        }
    }
    out
}

/// `[[A, v], [0, 1]]`.
fn affine(a: &Matrix, v: &[u32]) -> Matrix {
    let f = a.field();
    let d = a.rows();
    let mut out = Matrix::identity(f, d + 1);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, a.get(i, j));
        }
        out.set(i, d, v[i]);
    }
    out
}

/// All vectors of a subspace given by a basis.
fn span_elements(f: &FieldRef, basis: &[Vector], dim: usize) -> Vec<Vector> {
    let q = f.order();
    let mut out = vec![vec![0u32; dim]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for v in &out {
            for c in 0..q {
                next.push(v.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect());
            }
        }
        out = next;
    }
    out
}

/// Conjugacy classes of complements to `V` in `V ⋊ X`, by exhaustive search
/// over generator values. `x_gens` is a faithful copy of `X`; `v.gens[i]` is
/// the action of `x_gens[i]` on `V`.
pub fn complement_classes(x_gens: &[Matrix], v: &ModuleRep) -> Result<ComplementClasses> {
    let f = &v.field;
    let d = v.dim;
    if x_gens.len() != v.gens.len() || x_gens.is_empty() {
        return Err(Error::Inconsistent("one module matrix per generator of X is required".into()));
    }
    let x_order = group_order(x_gens, 1_000_000)?;
    let paired: Vec<Matrix> = x_gens.iter().zip(&v.gens).map(|(x, a)| block_diag(x, a)).collect();
    if group_order(&paired, x_order + 1) != Ok(x_order) {
        return Err(Error::Inconsistent("the module matrices do not define an action of X".into()));
    }

    // g_i has the order of x_i, so its translation part lies in ker(1 + A + ⋯ + A^{o−1})
    let mut candidates = Vec::with_capacity(x_gens.len());
    for (x, a) in x_gens.iter().zip(&v.gens) {
        let o = group_order(std::slice::from_ref(x), x_order + 1)?;
        let mut s = Matrix::zeros(f, d, d);
        let mut pw = Matrix::identity(f, d);
        for _ in 0..o {
            s = &s + &pw;
            pw = &pw * a;
        }
        candidates.push(span_elements(f, &s.nullspace(), d));
    }
    let total: u64 = candidates.iter().map(|c| c.len() as u64).product();
    if total > COMPLEMENT_LIMIT {
        return Err(Error::CapExceeded {
            cap: COMPLEMENT_LIMIT as usize,
        });
    }
    let tuples: Vec<Vec<Vector>> = (0..total)
        .map(|mut idx| {
            candidates
                .iter()
                .map(|c| {
                    let v = c[(idx % c.len() as u64) as usize].clone();
                    idx /= c.len() as u64;
                    v
                })
                .collect()
        })
        .collect();
    let complements: Vec<Vec<Vector>> = tuples
        .into_par_iter()
        .filter(|t| {
            let gens: Vec<Matrix> = x_gens
                .iter()
                .zip(&v.gens)
                .zip(t)
                .map(|((x, a), w)| block_diag(x, &affine(a, w)))
                .collect();
            matches!(group_order(&gens, x_order + 1), Ok(o) if o == x_order)
        })
        .collect();

    // conjugating by the translation w sends v_i to v_i + (1 − A_i) w
    let mut coboundaries: Vec<Vec<Vector>> = span_elements(f, &Matrix::identity(f, d).row_vectors(), d)
        .iter()
        .map(|w| {
            v.gens
                .iter()
                .map(|a| {
                    let aw = a.mul_vec(w);
                    w.iter().zip(&aw).map(|(&x, &y)| f.sub(x, y)).collect()
                })
                .collect()
        })
        .collect();
    coboundaries.sort();
    coboundaries.dedup();

    let mut out = ComplementClasses {
        count: 0,
        z1_size: complements.len(),
        b1_size: coboundaries.len(),
        group_order: x_order,
        representatives: Vec::new(),
        coboundaries,
        field: f.clone(),
    };
    let keys: HashSet<Vec<Vector>> = complements.iter().map(|t| out.key(t)).collect();
    let mut reps: Vec<Vec<Vector>> = keys.into_iter().collect();
    reps.sort();
    out.count = reps.len();
    out.representatives = reps;
    Ok(out)
}

/// `SL₂(q)` acting on `Q/Q(2)` of the long parabolic, generated by
/// `x±(b)` for `b` in the prime-field basis. Returns the faithful 2×2 copy
/// of the Levi and the module.
pub fn long_level_one(f: &FieldRef) -> Result<(Vec<Matrix>, ModuleRep)> {
    let rep = Rep::new(f);
    let natural = Sl2Module::parse(f, "1")?;
    let roots = level_roots(Parabolic::Long, 1)?;
    let mut x_gens = Vec::new();
    let mut v_gens = Vec::new();
    for b in f.prime_basis_raw() {
        let be = FieldElement::from_raw(f, b);
        for (s, i) in [(true, 2), (false, -2)] {
            x_gens.push(natural.letter(s, b));
            v_gens.push(level_action(&rep, &rep.xmat(i, &be)?, &roots)?);
        }
    }
    Ok((x_gens, ModuleRep::new(f, roots.len(), v_gens)?))
}

/// Generator values of `X_{k,0}Q(2)/Q(2)` for [`long_level_one`]: the
/// Levi letter `x₂(b)` comes with `x₃(k√b)` and `x₋₂(b)` with `x₁(k√b)`,
/// written as translation parts `A·c` of affine matrices.
pub fn xkl_level_one_tuple(rep: &Rep, k: &FieldElement) -> Result<Vec<Vector>> {
    let f = rep.field().clone();
    let roots = level_roots(Parabolic::Long, 1)?;
    let mut out = Vec::new();
    for b in f.prime_basis_raw() {
        let be = FieldElement::from_raw(&f, b);
        let ks = (k * &be.frobenius(f.n() - 1)).raw();
        for (i, c) in [(2, vec![0, ks]), (-2, vec![ks, 0])] {
            let a = level_action(rep, &rep.xmat(i, &be)?, &roots)?;
            out.push(a.mul_vec(&c));
        }
    }
    Ok(out)
}

// ---- layered descent -------------------------------------------------------

/// Both one-parameter families of an A₁-type subgroup at every field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A1Families {
    pub field: FieldRef,
    pub pos: Vec<Matrix>,
    pub neg: Vec<Matrix>,
}

impl A1Families {
    pub fn from_pair(rep: &Rep, pair: &A1Pair) -> Result<A1Families> {
        let f = rep.field();
        Ok(A1Families {
            field: f.clone(),
            pos: FieldElement::all(f).map(|t| pair.x_pos(rep, &t)).collect::<Result<_>>()?,
            neg: FieldElement::all(f).map(|t| pair.x_neg(rep, &t)).collect::<Result<_>>()?,
        })
    }

    pub fn xkl(rep: &Rep, k: &FieldElement, l: &FieldElement) -> Result<A1Families> {
        let g = subgroup_generators(&SubgroupSpec::xkl(k, l)?)?;
        Self::from_pair(rep, &g.pairs[0])
    }

    /// `g·X·g⁻¹`.
    pub fn conjugate(&self, g: &Matrix) -> Result<A1Families> {
        let gi = g.inverse()?;
        let c = |m: &Matrix| &(g * m) * &gi;
        Ok(A1Families {
            field: self.field.clone(),
            pos: self.pos.iter().map(c).collect(),
            neg: self.neg.iter().map(c).collect(),
        })
    }

    fn coords(&self, rep: &Rep) -> Option<Vec<Vec<u32>>> {
        self.pos
            .iter()
            .chain(&self.neg)
            .map(|m| {
                rep.factorize_ordered(m, &LEVI_Q_ORDER)
                    .ok()
                    .map(|c| c.iter().map(FieldElement::raw).collect())
            })
            .collect()
    }
}

/// Whether coordinates agree on the first `upto` entries of [`LEVI_Q_ORDER`].
fn agree(a: &[Vec<u32>], b: &[Vec<u32>], upto: usize) -> bool {
    a.iter().zip(b).all(|(x, y)| x[..upto] == y[..upto])
}

#[derive(Clone, Debug, Serialize)]
pub struct Descent {
    pub k: String,
    pub l: String,
    #[serde(skip)]
    pub k_elem: FieldElement,
    #[serde(skip)]
    pub l_elem: FieldElement,
    #[serde(skip)]
    pub word: GroupWord,
    /// The conjugating word, as text.
    pub conjugator: String,
}

/// Conjugates a complement `X ≤ L̄₀Q` (given by its two families, with Levi
/// parts `x₂(t²)` and `x₋₂(t²)`) onto some `X_{k,l}` one level of `Q` at a
/// time: modulo `Q(2)` by `x₁(a)x₃(b)`, modulo `Q(3)` by `x₄(d)`, then
/// exactly by `x₅(e)x₆(f)`. Searches start at zero and backtrack, so the
/// answer depends only on the `Q`-class of `X`. For `k ≠ 0` the element
/// `x₄(l/k)` conjugates `X_{k,l}` onto `X_{k,0}`, so then `l = 0`. Over
/// GF(2) the same holds for `k = 0`: `X_{0,1}` is `Q`-conjugate to `X_{0,0}`.
pub fn layered_descent(rep: &Rep, x: &A1Families) -> Result<Descent> {
    let f = rep.field().clone();
    if f.p() != 2 {
        return Err(Error::IncompatibleCharacteristic("descent needs p = 2".into()));
    }
    let elems: Vec<FieldElement> = FieldElement::all(&f).collect();
    let zero = FieldElement::zero(&f);
    let conj = |fam: &A1Families, word: &[(i32, &FieldElement)]| -> Result<A1Families> {
        let mut g = rep.identity();
        for (i, t) in word {
            g = &g * &rep.xmat(*i, t)?;
        }
        fam.conjugate(&g)
    };
    if x.coords(rep).is_none() {
        return Err(Error::NotComplement("families do not lie in the long parabolic".into()));
    }
    let targets: BTreeMap<(u32, u32), Vec<Vec<u32>>> = elems
        .iter()
        .flat_map(|k| elems.iter().map(move |l| (k, l)))
        .map(|(k, l)| {
            let fam = A1Families::xkl(rep, k, l)?;
            Ok(((k.raw(), l.raw()), fam.coords(rep).expect("X_{k,l} lies in the parabolic")))
        })
        .collect::<Result<_>>()?;

    // backtracking, so the result is the least (k, l) whose X_{k,l} is
    // Q-conjugate to the input
    let mut found = None;
    'search: for k in &elems {
        let level_one = &targets[&(k.raw(), 0)];
        for a in &elems {
            for b in &elems {
                // level 1: Levi coordinates and roots 1, 3
                let y1 = conj(x, &[(1, a), (3, b)])?;
                if !y1.coords(rep).is_some_and(|c| agree(&c, level_one, 4)) {
                    continue;
                }
                for l in &elems {
                    let target = &targets[&(k.raw(), l.raw())];
                    for d in &elems {
                        // level 2: root 4
                        let y2 = conj(&y1, &[(4, d)])?;
                        if !y2.coords(rep).is_some_and(|c| agree(&c, target, 5)) {
                            continue;
                        }
                        for e in &elems {
                            for g in &elems {
                                // level 3: roots 5, 6
                                let y3 = conj(&y2, &[(5, e), (6, g)])?;
                                if y3.coords(rep).is_some_and(|c| agree(&c, target, 7)) {
                                    found = Some((k, l, a, b, d, e, g));
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let (k, l, a, b, d, e, g) = found.ok_or_else(|| Error::NotComplement("not Q-conjugate to any X_{k,l}".into()))?;
    let (k, l) = (k.clone(), l.clone());
    let word = GroupWord::new(
        [(5, e), (6, g), (4, d), (1, a), (3, b)]
            .into_iter()
            .filter(|(_, t)| **t != zero)
            .map(|(i, t)| Letter::x(i, t.clone()))
            .collect(),
    );
    let w = rep.eval_word(&word)?;
    if x.conjugate(&w)? != A1Families::xkl(rep, &k, &l)? {
        return Err(Error::Inconsistent("descent word does not conjugate onto X_{k,l}".into()));
    }
    Ok(Descent {
        k: k.to_string(),
        l: l.to_string(),
        k_elem: k,
        l_elem: l,
        conjugator: word.to_string(),
        word,
    })
}

/// Some `g` in the ambient group moving the families into the long
/// parabolic with Levi parts exactly `x₂(t²)`, `x₋₂(t²)`.
pub fn conjugate_into_long_parabolic(
    rep: &Rep,
    x: &A1Families,
    ambient: &ElementStore,
) -> Result<Option<Matrix>> {
    let f = rep.field();
    let levi_ok = |c: &[Vec<u32>]| {
        let n = c.len() / 2;
        FieldElement::all(f).enumerate().all(|(i, t)| {
            let s = t.pow(2).raw();
            c[i][0] == 0 && c[i][2] == s && c[n + i][0] == s && c[n + i][2] == 0
        })
    };
    let found = ambient.elements().par_iter().find_first(|g| {
        x.conjugate(g)
            .ok()
            .and_then(|y| y.coords(rep))
            .is_some_and(|c| levi_ok(&c))
    });
    Ok(found.cloned())
}

/// Ambient group store for `G₂(2)` from all `x_{±i}(1)`.
pub fn g2_two() -> Result<ElementStore> {
    let f = Field::new(2, 1)?;
    let rep = Rep::new(&f);
    let one = FieldElement::one(&f);
    let gens = (1..=6)
        .flat_map(|i| [i, -i])
        .map(|i| rep.xmat(i, &one))
        .collect::<Result<Vec<_>>>()?;
    enumerate_group(&gens, crate::finitegroup::DEFAULT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::{random_q_element, SubgroupName};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn module_letters_are_representations() {
        let f = Field::new(3, 2).unwrap();
        for name in ["1", "1t3", "2", "1x1t3", "0"] {
            let m = Sl2Module::parse(&f, name).unwrap();
            for (lhs, rhs) in sl2_relations(&f).iter().step_by(11) {
                assert_eq!(eval_sym(&m, lhs), eval_sym(&m, rhs), "{name}");
            }
        }
    }

    #[test]
    fn parse_errors() {
        let f = Field::new(2, 2).unwrap();
        assert!(Sl2Module::parse(&f, "1t3").is_err());
        assert!(Sl2Module::parse(&f, "5").is_err());
        assert!(Sl2Module::parse(&f, "").is_err());
        assert_eq!(Sl2Module::parse(&f, "1x1t2").unwrap().dim(), 4);
        assert_eq!(Sl2Module::parse(&f, "1").unwrap().automorphism_twists(), vec!["1", "1t2"]);
    }

    #[test]
    fn h1_values() {
        for (q, name, want) in [(4, "1", 1), (8, "1t2", 1), (9, "1x1t3", 2), (4, "1x1t2", 0), (4, "0", 0)] {
            let r = h1_dim(q, name).unwrap();
            assert_eq!(r.dim_over_q0, want, "q={q} {name}");
            assert_eq!(r.b1, r.dim - r.fixed);
        }
        assert_eq!(h1_dim(8, "1t2").unwrap().dim_prime_field, 3);
    }

    #[test]
    fn h1_of_trivial_vanishes_on_perfect_groups() {
        for q in [4, 5, 7, 8, 9] {
            assert_eq!(h1_dim(q, "0").unwrap().dim_over_q0, 0, "q={q}");
        }
    }

    #[test]
    fn h1_twists_agree() {
        // natural and its Frobenius twist are automorphism-equivalent
        assert_eq!(h1_dim(4, "1").unwrap().dim_over_q0, h1_dim(4, "1t2").unwrap().dim_over_q0);
        assert_eq!(h1_dim(9, "1").unwrap().dim_over_q0, 0);
    }

    #[test]
    fn complements_over_gf4() {
        let f = Field::new(2, 2).unwrap();
        let (x, v) = long_level_one(&f).unwrap();
        let c = complement_classes(&x, &v).unwrap();
        assert_eq!(c.count, 4);
        assert_eq!(c.z1_size, c.count * c.b1_size);
        let h = h1_dim(4, "1").unwrap();
        assert_eq!(c.count, 4usize.pow(h.dim_over_q0 as u32));
        let mut seen: Vec<usize> = FieldElement::all(&f)
            .map(|k| c.class_of(&xkl_level_one_tuple(&Rep::new(&f), &k).unwrap()).expect("X_{k,0} is a complement"))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn complements_over_gf2_and_trivial() {
        let f = Field::new(2, 1).unwrap();
        let (x, v) = long_level_one(&f).unwrap();
        assert_eq!(complement_classes(&x, &v).unwrap().count, 1);
        let f4 = Field::new(2, 2).unwrap();
        let (x, v) = long_level_one(&f4).unwrap();
        let triv = ModuleRep::new(&f4, 1, vec![Matrix::identity(&f4, 1); v.gens.len()]).unwrap();
        assert_eq!(complement_classes(&x, &triv).unwrap().count, 1);
    }

    #[test]
    fn complements_reject_non_actions() {
        let f = Field::new(2, 2).unwrap();
        let (x, v) = long_level_one(&f).unwrap();
        let mut bad = v.clone();
        bad.gens.reverse();
        assert!(matches!(complement_classes(&x, &bad), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn descent_fixes_standard_families() {
        let f = Field::new(2, 2).unwrap();
        let rep = Rep::new(&f);
        for k in FieldElement::all(&f) {
            for l in FieldElement::all(&f) {
                let x = A1Families::xkl(&rep, &k, &l).unwrap();
                let d = layered_descent(&rep, &x).unwrap();
                if k.is_zero() || l.is_zero() {
                    assert_eq!((d.k_elem.clone(), d.l_elem.clone()), (k.clone(), l.clone()));
                    assert!(d.word.is_empty());
                } else {
                    // x₄(l/k) is the only letter needed
                    assert_eq!(d.l_elem, FieldElement::zero(&f));
                    assert_eq!(d.word, GroupWord::new(vec![Letter::x(4, &l / &k)]));
                }
            }
        }
    }

    #[test]
    fn descent_round_trips_q_conjugates() {
        let f = Field::new(2, 2).unwrap();
        let rep = Rep::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let k = FieldElement::random(&f, &mut rng);
            let l = FieldElement::random(&f, &mut rng);
            let (_, u) = random_q_element(&rep, &mut rng).unwrap();
            let x = A1Families::xkl(&rep, &k, &l).unwrap().conjugate(&u).unwrap();
            let d = layered_descent(&rep, &x).unwrap();
            let l = if k.is_zero() { l } else { FieldElement::zero(&f) };
            assert_eq!((d.k_elem.clone(), d.l_elem.clone()), (k, l));
            // idempotent on its own output
            let y = x.conjugate(&rep.eval_word(&d.word).unwrap()).unwrap();
            let again = layered_descent(&rep, &y).unwrap();
            assert!(again.word.is_empty());
            assert_eq!(again.k, d.k);
        }
    }

    #[test]
    fn descent_of_z1_over_gf2() {
        let f = Field::new(2, 1).unwrap();
        let rep = Rep::new(&f);
        let g = subgroup_generators(&SubgroupSpec::new(SubgroupName::Z1, &f)).unwrap();
        let z1 = A1Families::from_pair(&rep, &g.pairs[0]).unwrap();
        let amb = g2_two().unwrap();
        assert_eq!(amb.len(), 12096);
        let c = conjugate_into_long_parabolic(&rep, &z1, &amb).unwrap().expect("Z1 lies in a parabolic");
        let d = layered_descent(&rep, &z1.conjugate(&c).unwrap()).unwrap();
        assert!(!(d.k_elem.is_zero() && d.l_elem.is_zero()), "{d:?}");
    }
}
