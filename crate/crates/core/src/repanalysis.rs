//! Submodules, composition factors and socle series of small modules, plus
//! weight labels for factors of A₁- and A₂-type groups.
//!
//! Composition factors come from a randomized MeatAxe: a singular element
//! `θ` of the group algebra either has a kernel vector generating a proper
//! submodule, or a kernel vector of `θᵀ` generating a proper submodule of
//! the dual, or the module is irreducible (Norton's criterion). Factors are
//! kept as sections `U/W` of the original module so group elements other
//! than the generators can be pushed down to them.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::Rep;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldRef};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::rootsystem::{abs_filtration, Parabolic};
use crate::subgroups::{subgroup_generators, GeneratorSet, SubgroupName, SubgroupSpec};

pub const DEFAULT_SEED: u64 = 0x6732_5355_4247;

/// Attempts at finding a decisive singular algebra element before falling
/// back to exhaustive line spinning.
const MEATAXE_TRIES: usize = 64;
/// Upper bound on kernel lines spun per attempt.
const LINE_BUDGET: usize = 5000;
/// Largest `q^d` for the exhaustive fallback.
const EXHAUSTIVE_LIMIT: u64 = 200_000;

#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub field: FieldRef,
    pub dim: usize,
    pub gens: Vec<Matrix>,
}

impl ModuleRep {
    pub fn new(field: &FieldRef, dim: usize, gens: Vec<Matrix>) -> Result<Self> {
        for g in &gens {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::Dimension(format!("generator is not {dim}x{dim}")));
            }
            if **g.field() != **field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(ModuleRep {
            field: field.clone(),
            dim,
            gens,
        })
    }

    pub fn trivial(field: &FieldRef, dim: usize) -> Self {
        ModuleRep {
            field: field.clone(),
            dim,
            gens: vec![Matrix::identity(field, dim)],
        }
    }

    /// The same module in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<ModuleRep> {
        let pinv = p.inverse()?;
        let gens = self.gens.iter().map(|g| &(&pinv * g) * p).collect();
        ModuleRep::new(&self.field, self.dim, gens)
    }

    pub fn transposed(&self) -> ModuleRep {
        ModuleRep {
            field: self.field.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(Matrix::transpose).collect(),
        }
    }
}

/// Smallest subspace containing `seeds` and invariant under `gens`.
pub fn spin_gens(field: &FieldRef, dim: usize, gens: &[Matrix], seeds: &[Vector]) -> Subspace {
    let mut s = Subspace::zero(field, dim);
    let mut queue: Vec<Vector> = Vec::new();
    for v in seeds {
        if s.insert(v) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(&v);
            if s.insert(&w) {
                queue.push(w);
            }
            if s.dim() == dim {
                return s;
            }
        }
    }
    s
}

pub fn spin(seeds: &[Vector], m: &ModuleRep) -> Subspace {
    spin_gens(&m.field, m.dim, &m.gens, seeds)
}

/// `W ⊂ U`, both invariant; the factor `U/W`.
#[derive(Clone, Debug)]
pub struct Section {
    pub lower: Subspace,
    pub upper: Subspace,
    p: Matrix,
    p_inv: Matrix,
}

impl Section {
    pub fn new(lower: Subspace, upper: Subspace) -> Self {
        let f = lower.field().clone();
        let n = lower.ambient_dim();
        let mut adapted = lower.clone();
        let mut cols: Vec<Vector> = lower.basis().to_vec();
        for v in upper.basis() {
            if adapted.insert(v) {
                cols.push(v.clone());
            }
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            if adapted.insert(&e) {
                cols.push(e);
            }
        }
        let p = Matrix::from_rows(&f, &cols).transpose();
        let p_inv = p.inverse().expect("adapted basis is a basis");
        Section {
            lower,
            upper,
            p,
            p_inv,
        }
    }

    pub fn whole(field: &FieldRef, dim: usize) -> Self {
        Self::new(Subspace::zero(field, dim), Subspace::full(field, dim))
    }

    pub fn dim(&self) -> usize {
        self.upper.dim() - self.lower.dim()
    }

    /// Action of `g` on `U/W` in the adapted basis.
    pub fn induced(&self, g: &Matrix) -> Matrix {
        let conj = &(&self.p_inv * g) * &self.p;
        let (lo, hi) = (self.lower.dim(), self.upper.dim());
        let mut out = Matrix::zeros(g.field(), hi - lo, hi - lo);
        for r in lo..hi {
            for c in lo..hi {
                out.set(r - lo, c - lo, conj.get(r, c));
            }
        }
        out
    }

    pub fn module(&self, gens: &[Matrix]) -> ModuleRep {
        ModuleRep {
            field: self.lower.field().clone(),
            dim: self.dim(),
            gens: gens.iter().map(|g| self.induced(g)).collect(),
        }
    }

    /// Preimage in the ambient space of a subspace of `U/W` (local coordinates).
    pub fn lift(&self, local: &Subspace) -> Subspace {
        let f = self.lower.field();
        let n = self.lower.ambient_dim();
        let lo = self.lower.dim();
        let mut out = self.lower.clone();
        for v in local.basis() {
            let mut full = vec![0u32; n];
            full[lo..lo + v.len()].copy_from_slice(v);
            out.insert(&self.p.mul_vec(&full));
        }
        debug_assert_eq!(out.field(), f);
        out
    }
}

// ---- MeatAxe ------------------------------------------------------------

fn random_algebra_element<R: Rng + ?Sized>(m: &ModuleRep, pool: &mut Vec<Matrix>, rng: &mut R) -> Matrix {
    let f = &m.field;
    if pool.len() < 12 {
        let a = pool.choose(rng).expect("nonempty pool").clone();
        let b = m.gens.choose(rng).expect("generators").clone();
        pool.push(&a * &b);
    }
    let mut theta = Matrix::zeros(f, m.dim, m.dim);
    let k = rng.gen_range(1..=pool.len().min(4));
    for a in pool.choose_multiple(rng, k) {
        theta = &theta + &a.scale(f.random_nonzero_raw(rng));
    }
    theta
}

/// Nonzero vectors of a small space, one per line, at most `budget`.
fn lines_of(field: &FieldRef, basis: &[Vector], dim: usize, budget: usize) -> Option<Vec<Vector>> {
    let q = field.order() as u128;
    let k = basis.len() as u32;
    let count = (q.pow(k) - 1) / (q - 1);
    if count > budget as u128 {
        return None;
    }
    Some(Subspace::spanned_by(field, dim, basis).lines())
}

/// A proper nonzero submodule, or `None` when the module is irreducible.
pub fn find_submodule<R: Rng + ?Sized>(m: &ModuleRep, rng: &mut R) -> Result<Option<Subspace>> {
    let f = &m.field;
    let d = m.dim;
    if d <= 1 {
        return Ok(None);
    }
    let dual = m.transposed();
    let mut pool = m.gens.clone();
    if pool.is_empty() {
        pool.push(Matrix::identity(f, d));
    }
    for _ in 0..MEATAXE_TRIES {
        let a = random_algebra_element(m, &mut pool, rng);
        let Some(theta) = FieldElement::all(f)
            .map(|lambda| a.minus_scalar(lambda.raw()))
            .find(|t| t.rank() < d)
        else {
            continue;
        };
        let kernel = theta.nullspace();
        let Some(lines) = lines_of(f, &kernel, d, LINE_BUDGET) else {
            continue;
        };
        for v in &lines {
            let s = spin(std::slice::from_ref(v), m);
            if s.dim() < d {
                return Ok(Some(s));
            }
        }
        let w = theta.transpose().nullspace().swap_remove(0);
        let ws = spin(&[w], &dual);
        if ws.dim() < d {
            // the annihilator of an invariant subspace of the dual
            let ann = Matrix::from_rows(f, ws.basis()).nullspace();
            return Ok(Some(Subspace::spanned_by(f, d, &ann)));
        }
        return Ok(None);
    }
    let size = (f.order() as u64).checked_pow(d as u32);
    match size {
        Some(s) if s <= EXHAUSTIVE_LIMIT => {
            for v in Subspace::full(f, d).lines() {
                let s = spin(&[v], m);
                if s.dim() < d {
                    return Ok(Some(s));
                }
            }
            Ok(None)
        }
        _ => Err(Error::ChopFailed(format!(
            "no decisive algebra element in {MEATAXE_TRIES} attempts (dim {d} over {f})"
        ))),
    }
}

/// Composition factors of a section, bottom first.
pub fn chop_section<R: Rng + ?Sized>(gens: &[Matrix], section: &Section, rng: &mut R) -> Result<Vec<Section>> {
    if section.dim() == 0 {
        return Ok(Vec::new());
    }
    let local = section.module(gens);
    match find_submodule(&local, rng)? {
        None => Ok(vec![section.clone()]),
        Some(sub) => {
            let mid = section.lift(&sub);
            let mut out = chop_section(gens, &Section::new(section.lower.clone(), mid.clone()), rng)?;
            out.extend(chop_section(gens, &Section::new(mid, section.upper.clone()), rng)?);
            Ok(out)
        }
    }
}

/// Composition factors as modules, bottom first.
pub fn chop(m: &ModuleRep, seed: u64) -> Result<Vec<ModuleRep>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sections = chop_section(&m.gens, &Section::whole(&m.field, m.dim), &mut rng)?;
    Ok(sections.iter().map(|s| s.module(&m.gens)).collect())
}

pub fn is_irreducible(m: &ModuleRep, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(find_submodule(m, &mut rng)?.is_none())
}

/// Basis of `Hom_G(S, V)` as `dim V × dim S` matrices.
pub fn hom_space(s: &ModuleRep, v: &ModuleRep) -> Result<Vec<Matrix>> {
    if s.gens.len() != v.gens.len() {
        return Err(Error::Dimension("modules for different generator lists".into()));
    }
    let f = &v.field;
    let (n, d) = (v.dim, s.dim);
    let unknowns = n * d;
    let mut rows: Vec<Vector> = Vec::new();
    for (a, b) in v.gens.iter().zip(&s.gens) {
        for i in 0..n {
            for j in 0..d {
                // (Aφ − φB)_{ij}
                let mut row = vec![0u32; unknowns];
                for k in 0..n {
                    let c = a.get(i, k);
                    if c != 0 {
                        row[k * d + j] = f.add(row[k * d + j], c);
                    }
                }
                for k in 0..d {
                    let c = b.get(k, j);
                    if c != 0 {
                        row[i * d + k] = f.sub(row[i * d + k], c);
                    }
                }
                rows.push(row);
            }
        }
    }
    let sys = if rows.is_empty() {
        Matrix::zeros(f, 1, unknowns)
    } else {
        Matrix::from_rows(f, &rows)
    };
    Ok(sys
        .nullspace()
        .into_iter()
        .map(|sol| Matrix::from_raw(f, n, d, sol))
        .collect())
}

/// Sum of all simple submodules, given the simple modules that can occur.
pub fn socle_from_factors(v: &ModuleRep, simples: &[ModuleRep]) -> Result<Subspace> {
    let mut soc = Subspace::zero(&v.field, v.dim);
    for s in simples {
        for phi in hom_space(s, v)? {
            for c in 0..phi.cols() {
                soc.insert(&phi.col(c));
            }
        }
    }
    Ok(soc)
}

/// Socle layers as sections, bottom first.
pub fn socle_sections(gens: &[Matrix], field: &FieldRef, dim: usize, seed: u64) -> Result<Vec<Section>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::new();
    let mut cur = Subspace::zero(field, dim);
    while cur.dim() < dim {
        let rest = Section::new(cur.clone(), Subspace::full(field, dim));
        let quotient = rest.module(gens);
        let simples: Vec<ModuleRep> = chop_section(gens, &rest, &mut rng)?
            .iter()
            .map(|s| s.module(gens))
            .collect();
        let soc_local = socle_from_factors(&quotient, &simples)?;
        if soc_local.dim() == 0 {
            return Err(Error::ChopFailed("empty socle of a nonzero module".into()));
        }
        let next = rest.lift(&soc_local);
        layers.push(Section::new(cur, next.clone()));
        cur = next;
    }
    Ok(layers)
}

/// Socle layer dimensions and per-layer factor modules, bottom first.
pub fn socle_series(m: &ModuleRep, seed: u64) -> Result<Vec<Vec<ModuleRep>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    socle_sections(&m.gens, &m.field, m.dim, seed)?
        .iter()
        .map(|layer| {
            Ok(chop_section(&m.gens, layer, &mut rng)?
                .iter()
                .map(|s| s.module(&m.gens))
                .collect())
        })
        .collect()
}

// ---- weight labels -------------------------------------------------------

/// Reduced degree of the polynomial map `t ↦ vecs[t]` over the field,
/// given values at every element (in [`FieldElement::all`] order).
pub fn reduced_degree(field: &FieldRef, values: &[Vector]) -> Option<usize> {
    let f = &**field;
    let q = f.order() as usize;
    assert_eq!(values.len(), q);
    let dim = values[0].len();
    let add_scaled = |acc: &mut Vector, v: &Vector, c: u32| {
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = f.add(*a, f.mul(c, x));
        }
    };
    // c_m = −Σ_{t≠0} f(t) t^{−m} for 0 < m < q−1, c_{q−1} = −Σ_{t≠0} f(t) − c_0
    let coeff = |m: usize| -> Vector {
        let mut acc = vec![0u32; dim];
        let e = if m == q - 1 { 0 } else { m };
        for t in 1..q as u32 {
            let w = f.pow(f.inv(t).expect("nonzero"), e as u64);
            add_scaled(&mut acc, &values[t as usize], f.neg(w));
        }
        if m == q - 1 {
            add_scaled(&mut acc, &values[0], f.neg(1));
        }
        acc
    };
    for m in (1..q).rev() {
        if coeff(m).iter().any(|&x| x != 0) {
            return Some(m);
        }
    }
    values[0].iter().any(|&x| x != 0).then_some(0)
}

/// Base-p digits of `lambda`, least significant first.
pub fn digits(lambda: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = lambda;
    while x > 0 {
        out.push(x % p);
        x /= p;
    }
    out
}

/// Name of the A₁ irreducible with highest weight `lambda`: its
/// Frobenius-twisted tensor factors, largest twist first.
pub fn a1_name(lambda: u64, p: u64) -> String {
    if lambda == 0 {
        return "0".into();
    }
    let parts: Vec<String> = digits(lambda, p)
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| {
            if i == 0 {
                d.to_string()
            } else {
                format!("{d}^({})", p.pow(i as u32))
            }
        })
        .collect();
    parts.join("⊗")
}

/// Torus weights of the A₁ irreducible `L(lambda)`.
pub fn a1_weights(lambda: u64, p: u64) -> Vec<i64> {
    let mut ws = vec![0i64];
    for (i, &d) in digits(lambda, p).iter().enumerate() {
        let scale = p.pow(i as u32) as i64;
        let factor: Vec<i64> = (0..=d as i64).map(|j| (d as i64 - 2 * j) * scale).collect();
        ws = ws
            .iter()
            .flat_map(|&a| factor.iter().map(move |&b| a + b))
            .collect();
    }
    ws.sort_unstable();
    ws
}

/// Exponents `k` (mod q−1) of the eigenvalues `ζ^k` of `h`, with
/// multiplicity; `None` if `h` is not diagonalizable over the field.
pub fn torus_exponents(h: &Matrix) -> Option<Vec<i64>> {
    let f = h.field();
    let m = f.order() as u64 - 1;
    let mut out = Vec::new();
    for k in 0..m {
        let z = f.exp(k);
        let nullity = h.rows() - h.minus_scalar(z).rank();
        out.extend(std::iter::repeat_n(k as i64, nullity));
    }
    (out.len() == h.rows()).then_some(out)
}

fn reduce_mod(ws: &[i64], m: i64) -> Vec<i64> {
    let mut out: Vec<i64> = ws.iter().map(|w| w.rem_euclid(m)).collect();
    out.sort_unstable();
    out
}

/// Matrices of one A₁ pair needed for labels.
#[derive(Clone, Debug)]
pub struct PairData {
    pub pos: Vec<Matrix>,
    /// `x₋(t)` for every `t`, in [`FieldElement::all`] order.
    pub neg_all: Vec<Matrix>,
    /// `h₊(ζ)` for the primitive element ζ.
    pub h_zeta: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LabelKind {
    /// One A₁; label `λ` in twisted form.
    A1,
    /// Two commuting A₁ factors (long, short); label `λ⊗μ~`.
    A1xA1,
    /// Two simple root pairs of a rank-2 group; label `ab`.
    Rank2,
}

#[derive(Clone, Debug)]
pub struct Labeler {
    pub kind: LabelKind,
    pub pairs: Vec<PairData>,
    /// Every positive-family matrix of the group (for highest weight vectors).
    pub positive: Vec<Matrix>,
}

impl Labeler {
    pub fn from_generators(rep: &Rep, g: &GeneratorSet) -> Result<Labeler> {
        let f = g.field();
        let zeta = FieldElement::primitive(f);
        let kind = match g.spec.name {
            SubgroupName::A1xA1short => LabelKind::A1xA1,
            SubgroupName::A2 | SubgroupName::A2short | SubgroupName::G2 => LabelKind::Rank2,
            _ => LabelKind::A1,
        };
        let chosen: Vec<usize> = match kind {
            LabelKind::A1 => vec![0],
            LabelKind::A1xA1 => vec![0, 1],
            LabelKind::Rank2 => g.simple.clone(),
        };
        let pairs = chosen
            .iter()
            .map(|&j| {
                let pair = &g.pairs[j];
                Ok(PairData {
                    pos: g
                        .sample_params()
                        .iter()
                        .map(|t| pair.x_pos(rep, t))
                        .collect::<Result<_>>()?,
                    neg_all: FieldElement::all(f)
                        .map(|t| pair.x_neg(rep, &t))
                        .collect::<Result<_>>()?,
                    h_zeta: pair.h(rep, &zeta)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Labeler {
            kind,
            pairs,
            positive: g.positive_matrices(rep)?,
        })
    }

    /// The same labeler after pushing every matrix through `f`.
    pub fn map(&self, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<Labeler> {
        let all = |ms: &[Matrix]| ms.iter().map(&f).collect::<Result<Vec<_>>>();
        Ok(Labeler {
            kind: self.kind,
            pairs: self
                .pairs
                .iter()
                .map(|pd| {
                    Ok(PairData {
                        pos: all(&pd.pos)?,
                        neg_all: all(&pd.neg_all)?,
                        h_zeta: f(&pd.h_zeta)?,
                    })
                })
                .collect::<Result<_>>()?,
            positive: all(&self.positive)?,
        })
    }

    /// Label of an irreducible section.
    pub fn label(&self, section: &Section) -> FactorLabel {
        let f = section.lower.field().clone();
        let d = section.dim();
        let p = f.p() as u64;
        let qm1 = f.order() as i64 - 1;
        let weights = torus_exponents(&section.induced(&self.pairs[0].h_zeta)).unwrap_or_default();

        let pos: Vec<Matrix> = self.positive.iter().map(|g| section.induced(g)).collect();
        let fixed = fixed_space_local(&f, d, &pos);
        let mut lambdas = Vec::new();
        let mut reason = None;
        if fixed.len() == 1 {
            let v = &fixed[0];
            for pd in &self.pairs {
                let values: Vec<Vector> = pd.neg_all.iter().map(|g| section.induced(g).mul_vec(v)).collect();
                let Some(lam) = reduced_degree(&f, &values) else {
                    reason = Some("zero orbit".to_string());
                    break;
                };
                // the highest weight vector is an eigenvector of h(ζ) for ζ^λ
                let hv = section.induced(&pd.h_zeta).mul_vec(v);
                let zl = f.exp(lam as u64);
                let expect: Vector = v.iter().map(|&x| f.mul(x, zl)).collect();
                if hv != expect {
                    reason = Some(format!("torus disagrees with degree {lam}"));
                    break;
                }
                lambdas.push(lam as u64);
            }
        } else {
            reason = Some(format!("{}-dimensional highest weight space", fixed.len()));
        }

        if reason.is_none() && self.kind != LabelKind::Rank2 {
            // compare the full weight multiset of each A₁ factor
            let dims: Vec<usize> = lambdas.iter().map(|&l| a1_weights(l, p).len()).collect();
            let total: usize = dims.iter().product();
            if total != d {
                reason = Some(format!("dimension {d} is not {total}"));
            } else {
                for (j, pd) in self.pairs.iter().enumerate() {
                    let got = torus_exponents(&section.induced(&pd.h_zeta));
                    let other = total / dims[j];
                    let mut expect: Vec<i64> = a1_weights(lambdas[j], p)
                        .into_iter()
                        .flat_map(|w| std::iter::repeat_n(w, other))
                        .collect();
                    expect = reduce_mod(&expect, qm1);
                    if got.as_deref() != Some(expect.as_slice()) {
                        reason = Some("torus weights do not match".into());
                        break;
                    }
                }
            }
        }

        let name = match (&reason, self.kind) {
            (None, LabelKind::A1) => a1_name(lambdas[0], p),
            (None, LabelKind::A1xA1) => format!("{}⊗{}~", a1_name(lambdas[0], p), a1_name(lambdas[1], p)),
            (None, LabelKind::Rank2) => format!("{}{}", lambdas[0], lambdas[1]),
            (Some(_), LabelKind::A1) => self.label_by_weights(d, &weights, p, qm1),
            (Some(r), _) => format!("unrecognized({r})"),
        };
        FactorLabel {
            dim: d,
            name,
            weights,
        }
    }

    /// Fallback: match dimension and torus weights against every
    /// `L(λ)` with `λ < q`.
    fn label_by_weights(&self, d: usize, weights: &[i64], p: u64, qm1: i64) -> String {
        let candidates: Vec<String> = (0..=qm1 as u64)
            .filter(|&lam| digits(lam, p).iter().all(|&x| x < p))
            .filter(|&lam| {
                let ws = a1_weights(lam, p);
                ws.len() == d && reduce_mod(&ws, qm1) == weights
            })
            .map(|lam| a1_name(lam, p))
            .collect();
        match candidates.len() {
            0 => "unrecognized".into(),
            1 => candidates[0].clone(),
            _ => format!("ambiguous({})", candidates.join("|")),
        }
    }
}

/// Label of an irreducible module for one A₁, given on the module itself:
/// the positive-family matrices, `x₋(t)` for every `t` and `h(ζ)`.
pub fn label_a1_factor(factor: &ModuleRep, pair: &PairData, positive: &[Matrix]) -> FactorLabel {
    let labeler = Labeler {
        kind: LabelKind::A1,
        pairs: vec![pair.clone()],
        positive: positive.to_vec(),
    };
    labeler.label(&Section::whole(&factor.field, factor.dim))
}

fn fixed_space_local(f: &FieldRef, d: usize, gens: &[Matrix]) -> Vec<Vector> {
    if gens.is_empty() {
        return Subspace::full(f, d).basis().to_vec();
    }
    let mut rows = Vec::new();
    for g in gens {
        rows.extend(g.minus_scalar(1).row_vectors());
    }
    Matrix::from_rows(f, &rows).nullspace()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorLabel {
    pub dim: usize,
    pub name: String,
    /// Exponents of the first torus on the factor, mod q−1.
    pub weights: Vec<i64>,
}

/// Factor multiset plus socle layers, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSignature {
    pub factors: Vec<FactorLabel>,
    pub socle: Vec<Vec<FactorLabel>>,
}

impl FactorSignature {
    pub fn factor_names(&self) -> Vec<String> {
        sorted(self.factors.iter().map(|f| f.name.clone()).collect())
    }

    pub fn socle_names(&self) -> Vec<Vec<String>> {
        self.socle
            .iter()
            .map(|layer| sorted(layer.iter().map(|f| f.name.clone()).collect()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    /// Comparison key: sorted factor names and sorted socle layers.
    pub fn key(&self) -> (Vec<String>, Vec<Vec<String>>) {
        (self.factor_names(), self.socle_names())
    }
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

/// Signature of `V₇` restricted to the group of `g`.
pub fn signature(rep: &Rep, g: &GeneratorSet, seed: u64) -> Result<FactorSignature> {
    let gens = g.matrices(rep)?;
    let labeler = Labeler::from_generators(rep, g)?;
    signature_with(&gens, g.field(), crate::chevalley::DIM, &labeler, seed)
}

/// Socle layers of the module on `gens`, each factor labeled.
pub fn signature_with(
    gens: &[Matrix],
    f: &FieldRef,
    dim: usize,
    labeler: &Labeler,
    seed: u64,
) -> Result<FactorSignature> {
    let layers = socle_sections(gens, f, dim, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut socle = Vec::new();
    let mut factors = Vec::new();
    for layer in &layers {
        let labels: Vec<FactorLabel> = chop_section(gens, layer, &mut rng)?
            .iter()
            .map(|s| labeler.label(s))
            .collect();
        factors.extend(labels.iter().cloned());
        socle.push(labels);
    }
    Ok(FactorSignature { factors, socle })
}

// ---- levels of the unipotent radical ---------------------------------------

/// Action of a Levi element on one level of a unipotent radical: column `j`
/// holds the level coordinates of `l·x_{r_j}(1)·l⁻¹`.
pub fn level_action(rep: &Rep, levi: &Matrix, roots: &[i32]) -> Result<Matrix> {
    let f = rep.field();
    let linv = levi.inverse()?;
    let one = FieldElement::one(f);
    let mut cols = Vec::with_capacity(roots.len());
    for &r in roots {
        let conj = &(levi * &rep.xmat(r, &one)?) * &linv;
        let coords = rep.unipotent_factorize(&conj)?;
        cols.push(roots.iter().map(|&s| coords[(s - 1) as usize].raw()).collect::<Vector>());
    }
    Ok(Matrix::from_rows(f, &cols).transpose())
}

/// Root indices at `level` of the radical of `j`, by height.
pub fn level_roots(j: Parabolic, level: i32) -> Result<Vec<i32>> {
    abs_filtration(j)
        .into_iter()
        .find(|m| m.level == level)
        .map(|m| m.roots.iter().map(|r| r.index().expect("positive root")).collect())
        .ok_or_else(|| Error::Dimension(format!("no level {level} in the {j} parabolic")))
}

/// The Levi A₁ of `j` as a subgroup family.
pub fn levi_subgroup(j: Parabolic, f: &FieldRef) -> SubgroupSpec {
    match j {
        Parabolic::Long => SubgroupSpec::new(SubgroupName::Lbar0, f),
        Parabolic::Short => SubgroupSpec::new(SubgroupName::Ltilde0, f),
    }
}

/// A level of the radical of `j` as a module for the Levi A₁, with its
/// labeled signature.
pub fn level_module(f: &FieldRef, j: Parabolic, level: i32, seed: u64) -> Result<(ModuleRep, FactorSignature)> {
    let rep = Rep::new(f);
    let roots = level_roots(j, level)?;
    let g = subgroup_generators(&levi_subgroup(j, f))?;
    let gens = g
        .matrices(&rep)?
        .iter()
        .map(|m| level_action(&rep, m, &roots))
        .collect::<Result<Vec<_>>>()?;
    let labeler = Labeler::from_generators(&rep, &g)?.map(|m| level_action(&rep, m, &roots))?;
    let sig = signature_with(&gens, f, roots.len(), &labeler, seed)?;
    Ok((ModuleRep::new(f, roots.len(), gens)?, sig))
}

// ---- expected rows ---------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedRow {
    pub row: &'static str,
    pub factors: Vec<String>,
    pub socle: Vec<Vec<String>>,
}

fn row(name: &'static str, socle: &[&[&str]]) -> ExpectedRow {
    let socle: Vec<Vec<String>> = socle
        .iter()
        .map(|l| sorted(l.iter().map(|s| s.to_string()).collect()))
        .collect();
    let factors = sorted(socle.iter().flatten().cloned().collect());
    ExpectedRow {
        row: name,
        factors,
        socle,
    }
}

/// The predicted restriction of `V₇` for a subgroup, where one is recorded.
pub fn expected_row(spec: &SubgroupSpec) -> Option<ExpectedRow> {
    let p = spec.field.p();
    let two = p == 2;
    let twist = |base: &str| -> String {
        // name of 1^(p)⊗1 at this p
        format!("{base}^({p})⊗1")
    };
    Some(match spec.name {
        SubgroupName::A2 => row("10 ⊕ 01 ⊕ 0", &[&["10", "01", "00"]]),
        SubgroupName::A2short if p == 3 => row("11", &[&["11"]]),
        SubgroupName::A1xA1short if two => row(
            "1⊗1~ ⊕ 0⊗W~(2)",
            &[&["0⊗0~", "1⊗1~"], &["0⊗1^(2)~"]],
        ),
        SubgroupName::A1xA1short => row("1⊗1~ ⊕ 0⊗W~(2)", &[&["1⊗1~", "0⊗2~"]]),
        SubgroupName::Lbar0 => row("1 ⊕ 1 ⊕ 0³", &[&["1", "1", "0", "0", "0"]]),
        SubgroupName::Ltilde0 if two => row("1 ⊕ 1 ⊕ W(2)", &[&["0", "1", "1"], &["1^(2)"]]),
        SubgroupName::Ltilde0 => row("1 ⊕ 1 ⊕ W(2)", &[&["1", "1", "2"]]),
        SubgroupName::Z1 if two => row("T(2) ⊕ W(2)", &[&["0", "0"], &["1^(2)", "1^(2)"], &["0"]]),
        SubgroupName::Z2 if two => row("W(2) ⊕ W(2)* ⊕ 0", &[&["0", "0", "1^(2)"], &["0", "1^(2)"]]),
        SubgroupName::TwistedDiag => match (spec.r, spec.s, two) {
            (0, 0, true) => row("T(2) ⊕ W(2)", &[&["0", "0"], &["1^(2)", "1^(2)"], &["0"]]),
            (0, 0, false) => row("2 ⊕ 2 ⊕ 0", &[&["2", "0", "2"]]),
            (1, 0, true) => {
                let t = twist("1");
                row("(1^(p)⊗1) ⊕ W(2)", &[&["0", t.as_str()], &["1^(2)"]])
            }
            (1, 0, false) => {
                let t = twist("1");
                row("(1^(p)⊗1) ⊕ W(2)", &[&[t.as_str(), "2"]])
            }
            _ => return None,
        },
        SubgroupName::IrredA1inA2 if p > 2 => row("2 ⊕ 2 ⊕ 0", &[&["2", "2", "0"]]),
        SubgroupName::PrincipalA1 if p >= 7 => row("6", &[&["6"]]),
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch(String),
    Unlisted,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub subgroup: String,
    pub field: String,
    pub seed: u64,
    pub factors: Vec<String>,
    pub socle: Vec<Vec<String>>,
    pub dims: Vec<usize>,
    pub expected: Option<ExpectedRow>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub signature: FactorSignature,
}

/// Computes `V₇↓X` and compares it with the recorded row.
pub fn restriction_report(spec: &SubgroupSpec, seed: u64) -> Result<RestrictionReport> {
    let rep = Rep::new(&spec.field);
    let g = subgroup_generators(spec)?;
    let sig = signature(&rep, &g, seed)?;
    let expected = expected_row(spec);
    let verdict = match &expected {
        None => Verdict::Unlisted,
        Some(e) => {
            let (fac, soc) = sig.key();
            if fac != e.factors {
                Verdict::Mismatch(format!("factors {fac:?}, expected {:?}", e.factors))
            } else if soc != e.socle {
                Verdict::Mismatch(format!("socle {soc:?}, expected {:?}", e.socle))
            } else {
                Verdict::Match
            }
        }
    };
    let mut dims: Vec<usize> = sig.factors.iter().map(|f| f.dim).collect();
    dims.sort_unstable();
    Ok(RestrictionReport {
        subgroup: spec.label(),
        field: spec.field.to_string(),
        seed,
        factors: sig.factor_names(),
        socle: sig.socle_names(),
        dims,
        expected,
        verdict,
        signature: sig,
    })
}

/// Field used for restriction checks at characteristic `p`: `GF(p²)`, so
/// every weight met, including `p + 1` for twisted diagonals, is below `q`.
pub fn table_field(p: u32) -> Result<FieldRef> {
    crate::gf::Field::new(p, 2)
}

/// Counts factors by name, for compact display.
pub fn tally(names: &[String]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for n in names {
        *out.entry(n.clone()).or_insert(0) += 1;
    }
    out
}
