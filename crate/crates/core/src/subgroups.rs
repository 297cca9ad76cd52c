//! Generator families for the reductive subgroups of G₂ studied here.
//!
//! Every A₁-type piece is a pair of one-parameter families `t ↦ x₊(t)` and
//! `t ↦ x₋(t)`. A family is either a product of root elements with
//! parameters `c·t^e`, or the truncated exponential of an integral
//! nilpotent element.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::chevalley::{integer_form, GroupWord, Letter, Rep, DIM};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldRef};
use crate::linalg::Matrix;
use crate::rootsystem::Root;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SubgroupName {
    A2,
    A2short,
    A1xA1short,
    Lbar0,
    Ltilde0,
    Z1,
    Z2,
    Xkl,
    TwistedDiag,
    IrredA1inA2,
    PrincipalA1,
    /// The whole group, generated by every root subgroup.
    G2,
}

impl SubgroupName {
    pub const ALL: [SubgroupName; 12] = [
        SubgroupName::A2,
        SubgroupName::A2short,
        SubgroupName::A1xA1short,
        SubgroupName::Lbar0,
        SubgroupName::Ltilde0,
        SubgroupName::Z1,
        SubgroupName::Z2,
        SubgroupName::Xkl,
        SubgroupName::TwistedDiag,
        SubgroupName::IrredA1inA2,
        SubgroupName::PrincipalA1,
        SubgroupName::G2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SubgroupName::A2 => "A2",
            SubgroupName::A2short => "A2short",
            SubgroupName::A1xA1short => "A1xA1short",
            SubgroupName::Lbar0 => "Lbar0",
            SubgroupName::Ltilde0 => "Ltilde0",
            SubgroupName::Z1 => "Z1",
            SubgroupName::Z2 => "Z2",
            SubgroupName::Xkl => "Xkl",
            SubgroupName::TwistedDiag => "TwistedDiag",
            SubgroupName::IrredA1inA2 => "IrredA1inA2",
            SubgroupName::PrincipalA1 => "PrincipalA1",
            SubgroupName::G2 => "G2",
        }
    }
}

impl fmt::Display for SubgroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubgroupName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SubgroupName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown subgroup {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub name: SubgroupName,
    pub field: FieldRef,
    pub k: FieldElement,
    pub l: FieldElement,
    pub r: u32,
    pub s: u32,
}

impl SubgroupSpec {
    pub fn new(name: SubgroupName, field: &FieldRef) -> Self {
        SubgroupSpec {
            name,
            field: field.clone(),
            k: FieldElement::zero(field),
            l: FieldElement::zero(field),
            r: 0,
            s: 0,
        }
    }

    pub fn xkl(k: &FieldElement, l: &FieldElement) -> Result<Self> {
        if k.field() != l.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(SubgroupSpec {
            k: k.clone(),
            l: l.clone(),
            ..Self::new(SubgroupName::Xkl, k.field())
        })
    }

    pub fn twisted(field: &FieldRef, r: u32, s: u32) -> Self {
        SubgroupSpec {
            r,
            s,
            ..Self::new(SubgroupName::TwistedDiag, field)
        }
    }

    /// Checks the characteristic requirements of the named construction.
    pub fn validate(&self) -> Result<()> {
        let p = self.field.p();
        let bad = |why: &str| Err(Error::IncompatibleCharacteristic(format!("{}: {why}", self.name)));
        match self.name {
            SubgroupName::A2short if p != 3 => bad("requires p = 3"),
            SubgroupName::Z1 | SubgroupName::Z2 if p != 2 => bad("requires p = 2"),
            SubgroupName::IrredA1inA2 if p == 2 => bad("requires p > 2"),
            SubgroupName::PrincipalA1 if p < 7 => bad("requires p ≥ 7"),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self.name {
            SubgroupName::Xkl => format!("X[{},{}]", self.k, self.l),
            SubgroupName::TwistedDiag => format!("TwistedDiag({},{})", self.r, self.s),
            n => n.to_string(),
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.label(), self.field)
    }
}

/// `x_root(coeff · t^exp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateLetter {
    pub root: i32,
    pub coeff: FieldElement,
    pub exp: u64,
}

#[derive(Clone, Debug)]
pub enum Family {
    Word(Vec<TemplateLetter>),
    /// `t ↦ I + Σ t^m N^m/m!`; entries are `N^m/m!` reduced mod p.
    Exp {
        label: String,
        powers: Vec<Matrix>,
    },
}

/// A one-parameter family evaluated at `t^(p^twist)`.
#[derive(Clone, Debug)]
pub struct OneParam {
    pub family: Family,
    pub twist: u32,
}

impl OneParam {
    pub fn word(letters: Vec<TemplateLetter>) -> Self {
        OneParam {
            family: Family::Word(letters),
            twist: 0,
        }
    }

    fn twisted_param(&self, t: &FieldElement) -> FieldElement {
        t.frobenius(self.twist)
    }

    /// The word `Π x_root(coeff·t^exp)`, if this is a word family.
    pub fn word_at(&self, t: &FieldElement) -> Option<GroupWord> {
        let Family::Word(letters) = &self.family else {
            return None;
        };
        let t = self.twisted_param(t);
        Some(GroupWord::new(
            letters
                .iter()
                .map(|l| Letter::x(l.root, &l.coeff * &t.pow(l.exp)))
                .collect(),
        ))
    }

    pub fn eval(&self, rep: &Rep, t: &FieldElement) -> Result<Matrix> {
        match &self.family {
            Family::Word(_) => rep.eval_word(&self.word_at(t).expect("word family")),
            Family::Exp { powers, .. } => {
                let t = self.twisted_param(t);
                let mut m = rep.identity();
                let mut tp = FieldElement::one(t.field());
                for pm in powers {
                    tp = &tp * &t;
                    m = &m + &pm.scale(tp.raw());
                }
                Ok(m)
            }
        }
    }

    pub fn describe(&self) -> String {
        let base = match &self.family {
            Family::Word(letters) if letters.iter().all(|l| l.coeff.is_zero()) => "1".to_string(),
            Family::Word(letters) => letters
                .iter()
                .filter(|l| !l.coeff.is_zero())
                .map(|l| {
                    let param = match (l.coeff.is_one(), l.exp) {
                        (true, 1) => "t".to_string(),
                        (true, e) => format!("t^{e}"),
                        (false, 1) => format!("({})t", l.coeff),
                        (false, e) => format!("({})t^{e}", l.coeff),
                    };
                    format!("x{}({param})", l.root)
                })
                .collect::<Vec<_>>()
                .join("·"),
            Family::Exp { label, .. } => format!("exp(t·({label}))"),
        };
        if self.twist == 0 {
            base
        } else {
            format!("{base} at t^(p^{})", self.twist)
        }
    }
}

/// A pair of opposite one-parameter families spanning an A₁-type subgroup.
#[derive(Clone, Debug)]
pub struct A1Pair {
    pub name: String,
    pub pos: OneParam,
    pub neg: OneParam,
}

impl A1Pair {
    pub fn x_pos(&self, rep: &Rep, t: &FieldElement) -> Result<Matrix> {
        self.pos.eval(rep, t)
    }

    pub fn x_neg(&self, rep: &Rep, t: &FieldElement) -> Result<Matrix> {
        self.neg.eval(rep, t)
    }

    /// `n₊(t) = x₊(t) x₋(−t⁻¹) x₊(t)`.
    pub fn n(&self, rep: &Rep, t: &FieldElement) -> Result<Matrix> {
        if t.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let x = self.x_pos(rep, t)?;
        Ok(&(&x * &self.x_neg(rep, &-t.inv()?)?) * &x)
    }

    /// `h₊(t) = n₊(t) n₊(−1)`.
    pub fn h(&self, rep: &Rep, t: &FieldElement) -> Result<Matrix> {
        let minus_one = -FieldElement::one(t.field());
        Ok(&self.n(rep, t)? * &self.n(rep, &minus_one)?)
    }

    fn twist(&mut self, r: u32) {
        self.pos.twist += r;
        self.neg.twist += r;
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub spec: SubgroupSpec,
    pub pairs: Vec<A1Pair>,
    /// Which pairs carry simple roots (for torus labels of A₂-type groups).
    pub simple: Vec<usize>,
    pub notes: Vec<String>,
}

impl GeneratorSet {
    pub fn field(&self) -> &FieldRef {
        &self.spec.field
    }

    /// Parameters at which families are sampled: an additive basis of the
    /// field together with the primitive element.
    pub fn sample_params(&self) -> Vec<FieldElement> {
        let f = self.field();
        let mut out: Vec<FieldElement> = f
            .prime_basis_raw()
            .into_iter()
            .map(|v| FieldElement::from_raw(f, v))
            .collect();
        let g = FieldElement::primitive(f);
        if !out.contains(&g) {
            out.push(g);
        }
        out
    }

    /// Matrix generators of the subgroup.
    pub fn matrices(&self, rep: &Rep) -> Result<Vec<Matrix>> {
        let mut out = Vec::new();
        for pair in &self.pairs {
            for t in self.sample_params() {
                for m in [pair.x_pos(rep, &t)?, pair.x_neg(rep, &t)?] {
                    if !m.is_identity() && !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
        if out.is_empty() {
            out.push(rep.identity());
        }
        Ok(out)
    }

    /// Positive-family matrices (a unipotent subgroup normalised by the torus).
    pub fn positive_matrices(&self, rep: &Rep) -> Result<Vec<Matrix>> {
        let mut out = Vec::new();
        for pair in &self.pairs {
            for t in self.sample_params() {
                out.push(pair.x_pos(rep, &t)?);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, rep: &Rep) -> Result<serde_json::Value> {
        let f = self.field();
        let g = FieldElement::primitive(f);
        let pairs: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "name": p.name,
                    "positive": p.pos.describe(),
                    "negative": p.neg.describe(),
                    "positive_word_at_1": p.pos.word_at(&FieldElement::one(f)).map(|w| w.to_json()),
                    "negative_word_at_1": p.neg.word_at(&FieldElement::one(f)).map(|w| w.to_json()),
                    "positive_word_at_g": p.pos.word_at(&g).map(|w| w.to_json()),
                    "negative_word_at_g": p.neg.word_at(&g).map(|w| w.to_json()),
                })
            })
            .collect();
        let mats: Vec<_> = self.matrices(rep)?.iter().map(Matrix::to_coeff_rows).collect();
        Ok(serde_json::json!({
            "subgroup": self.spec.label(),
            "field": f.to_string(),
            "p": f.p(),
            "n": f.n(),
            "families": pairs,
            "matrices": mats,
            "notes": self.notes,
        }))
    }
}

fn one(f: &FieldRef) -> FieldElement {
    FieldElement::one(f)
}

fn tl(root: i32, coeff: FieldElement, exp: u64) -> TemplateLetter {
    TemplateLetter { root, coeff, exp }
}

fn simple_pair(f: &FieldRef, i: i32) -> A1Pair {
    A1Pair {
        name: format!("x±{i}"),
        pos: OneParam::word(vec![tl(i, one(f), 1)]),
        neg: OneParam::word(vec![tl(-i, one(f), 1)]),
    }
}

/// Truncated exponential of the integral nilpotent `Σ cᵣ e_r`.
fn exp_family(f: &FieldRef, terms: &[(Root, i64)], label: &str) -> Result<OneParam> {
    let form = integer_form();
    let mut n = [[0i64; DIM]; DIM];
    for &(r, c) in terms {
        let e = form.root_vector(r);
        for a in 0..DIM {
            for b in 0..DIM {
                n[a][b] += c * e[a][b];
            }
        }
    }
    let mut powers = Vec::new();
    let mut cur = n;
    let mut fact = 1i64;
    for m in 1..=DIM as i64 {
        if m > 1 {
            let mut next = [[0i64; DIM]; DIM];
            for a in 0..DIM {
                for k in 0..DIM {
                    for b in 0..DIM {
                        next[a][b] += cur[a][k] * n[k][b];
                    }
                }
            }
            cur = next;
        }
        fact *= m;
        if cur.iter().flatten().all(|&x| x == 0) {
            break;
        }
        let inv = f.inv(f.from_int(fact)).map_err(|_| {
            Error::IncompatibleCharacteristic(format!("{m}! is not invertible mod {}", f.p()))
        })?;
        let ints: Vec<i64> = cur.iter().flatten().copied().collect();
        powers.push(Matrix::from_int(f, DIM, DIM, &ints).scale(inv));
    }
    Ok(OneParam {
        family: Family::Exp {
            label: label.to_string(),
            powers,
        },
        twist: 0,
    })
}

/// Generator families for a validated spec.
pub fn subgroup_generators(spec: &SubgroupSpec) -> Result<GeneratorSet> {
    spec.validate()?;
    subgroup_generators_unchecked(spec)
}

/// Generator families without the characteristic check, for experiments
/// such as the short-root subsystem away from p = 3.
pub fn subgroup_generators_unchecked(spec: &SubgroupSpec) -> Result<GeneratorSet> {
    let f = &spec.field;
    let o = one(f);
    let mut notes = Vec::new();
    let (pairs, simple) = match spec.name {
        SubgroupName::A2 => (vec![simple_pair(f, 2), simple_pair(f, 5), simple_pair(f, 6)], vec![0, 1]),
        SubgroupName::A2short => (vec![simple_pair(f, 1), simple_pair(f, 3), simple_pair(f, 4)], vec![0, 1]),
        SubgroupName::A1xA1short => (vec![simple_pair(f, 6), simple_pair(f, 1)], vec![0, 1]),
        SubgroupName::Lbar0 => (vec![simple_pair(f, 2)], vec![0]),
        SubgroupName::Ltilde0 => (vec![simple_pair(f, 1)], vec![0]),
        SubgroupName::G2 => ((1..=6).map(|i| simple_pair(f, i)).collect(), vec![0, 1]),
        SubgroupName::Z1 => (
            vec![A1Pair {
                name: "diag".into(),
                pos: OneParam::word(vec![tl(6, o.clone(), 1), tl(1, o.clone(), 1)]),
                neg: OneParam::word(vec![tl(-6, o.clone(), 1), tl(-1, o.clone(), 1)]),
            }],
            vec![0],
        ),
        SubgroupName::TwistedDiag => {
            let p = f.p() as u64;
            let (er, es) = (p.pow(spec.r), p.pow(spec.s));
            (
                vec![A1Pair {
                    name: format!("diag({},{})", spec.r, spec.s),
                    pos: OneParam::word(vec![tl(6, o.clone(), er), tl(1, o.clone(), es)]),
                    neg: OneParam::word(vec![tl(-6, o.clone(), er), tl(-1, o.clone(), es)]),
                }],
                vec![0],
            )
        }
        SubgroupName::Z2 => (
            vec![A1Pair {
                name: "sym2".into(),
                pos: OneParam::word(vec![tl(2, o.clone(), 1), tl(6, o.clone(), 2)]),
                neg: OneParam::word(vec![tl(-5, o.clone(), 1), tl(-6, o.clone(), 2)]),
            }],
            vec![0],
        ),
        SubgroupName::Xkl => {
            let (k, l) = (&spec.k, &spec.l);
            if k.is_zero() && l.is_zero() {
                notes.push("equals Lbar0".to_string());
            }
            let k3l = &k.pow(3) + l;
            (
                vec![A1Pair {
                    name: format!("X[{k},{l}]"),
                    pos: OneParam::word(vec![tl(2, o.clone(), 2), tl(3, k.clone(), 1), tl(6, k3l, 1)]),
                    neg: OneParam::word(vec![tl(-2, o.clone(), 2), tl(1, k.clone(), 1), tl(5, l.clone(), 1)]),
                }],
                vec![0],
            )
        }
        SubgroupName::IrredA1inA2 => {
            let pos = exp_family(f, &[(Root::new(0, 1), 1), (Root::new(3, 1), 2)], "e2 + 2e5")?;
            let neg = exp_family(f, &[(Root::new(0, -1), 2), (Root::new(-3, -1), 1)], "2f2 + f5")?;
            (
                vec![A1Pair {
                    name: "sym2".into(),
                    pos,
                    neg,
                }],
                vec![0],
            )
        }
        SubgroupName::PrincipalA1 => {
            let pos = exp_family(f, &[(Root::new(1, 0), 1), (Root::new(0, 1), 1)], "e1 + e2")?;
            let neg = exp_family(f, &[(Root::new(-1, 0), 6), (Root::new(0, -1), 10)], "6f1 + 10f2")?;
            (
                vec![A1Pair {
                    name: "principal".into(),
                    pos,
                    neg,
                }],
                vec![0],
            )
        }
    };
    Ok(GeneratorSet {
        spec: spec.clone(),
        pairs,
        simple,
        notes,
    })
}

/// Replaces every parameter `t` by `t^(p^r)`.
pub fn frobenius_twist_gens(g: &GeneratorSet, r: u32) -> GeneratorSet {
    let mut out = g.clone();
    for pair in &mut out.pairs {
        pair.twist(r);
    }
    out
}

// ---- relation checks ---------------------------------------------------

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

/// Parameter sets for relation checks: exhaustive up to `exhaustive_limit`
/// elements, otherwise `samples` random draws.
pub fn relation_params<R: Rng + ?Sized>(
    f: &FieldRef,
    exhaustive_limit: u32,
    samples: usize,
    rng: &mut R,
) -> (Vec<(FieldElement, FieldElement)>, bool) {
    if f.order() <= exhaustive_limit {
        let all: Vec<FieldElement> = FieldElement::all(f).collect();
        let pairs = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        (pairs, true)
    } else {
        let pairs = (0..samples)
            .map(|_| (FieldElement::random(f, rng), FieldElement::random(f, rng)))
            .collect();
        (pairs, false)
    }
}

/// The Steinberg relations for an A₁ pair:
/// (i) additivity of both families, (ii) `h₊(t)h₊(u) = h₊(tu)`,
/// (iii) `n₊(t)x₊(t₁)n₊(t)⁻¹ = x₋(−t⁻²t₁)` and its mirror
/// `n₊(t)x₋(u)n₊(t)⁻¹ = x₊(−t²u)`.
pub fn check_relations(
    rep: &Rep,
    pair: &A1Pair,
    params: &[(FieldElement, FieldElement)],
) -> Result<RelationReport> {
    let mut rep_out = RelationReport::default();
    for (a, b) in params {
        let lhs = &pair.x_pos(rep, a)? * &pair.x_pos(rep, b)?;
        rep_out.record(lhs == pair.x_pos(rep, &(a + b))?, || format!("(i) x+({a})x+({b})"));
        let lhs = &pair.x_neg(rep, a)? * &pair.x_neg(rep, b)?;
        rep_out.record(lhs == pair.x_neg(rep, &(a + b))?, || format!("(i) x-({a})x-({b})"));
        if a.is_zero() {
            continue;
        }
        let t = a;
        if !b.is_zero() {
            let lhs = &pair.h(rep, t)? * &pair.h(rep, b)?;
            rep_out.record(lhs == pair.h(rep, &(t * b))?, || format!("(ii) h+({t})h+({b})"));
        }
        let n = pair.n(rep, t)?;
        let ninv = n.inverse()?;
        let lhs = &(&n * &pair.x_pos(rep, b)?) * &ninv;
        let param = -(t.pow_i(-2)? * b);
        rep_out.record(lhs == pair.x_neg(rep, &param)?, || format!("(iii) n+({t}) x+({b})"));
        let lhs = &(&n * &pair.x_neg(rep, b)?) * &ninv;
        let param = -(t.pow(2) * b);
        rep_out.record(lhs == pair.x_pos(rep, &param)?, || format!("(iii') n+({t}) x-({b})"));
    }
    Ok(rep_out)
}

// ---- conjugators -------------------------------------------------------

/// A word `w` and target with `eval(w)·X_{k,l}·eval(w)⁻¹ = target`.
pub fn xkl_conjugator(k: &FieldElement, l: &FieldElement) -> Result<(GroupWord, SubgroupSpec)> {
    if k.field() != l.field() {
        return Err(Error::FieldMismatch);
    }
    let f = k.field();
    let one = FieldElement::one(f);
    let zero = FieldElement::zero(f);
    if k.is_zero() && l.is_zero() {
        return Err(Error::Inconsistent("X_{0,0} is the Levi factor itself".into()));
    }
    let mut w = GroupWord::empty();
    if !k.is_zero() {
        // x₄(l/k) clears l, then h₄(k)⁻¹ scales k to 1
        let kinv = k.inv()?;
        if !k.is_one() {
            w.push(Letter::h(4, kinv));
        }
        let c = l / k;
        if !c.is_zero() {
            w.push(Letter::x(4, c));
        }
        Ok((w, SubgroupSpec::xkl(&one, &zero)?))
    } else {
        let c = l.cube_root().map_err(|_| Error::NoRationalConjugator)?;
        if !c.is_one() {
            w.push(Letter::h(4, c.inv()?));
        }
        Ok((w, SubgroupSpec::xkl(&zero, &one)?))
    }
}

/// Numbered name of [`xkl_conjugator`], kept as a stable interface identifier.
pub use self::xkl_conjugator as conjugator_lemma36;

/// Coordinates of an element of `L₀Q` in the order `x₋₂ · x₁ … x₆`.
pub const LEVI_Q_ORDER: [i32; 7] = [-2, 1, 2, 3, 4, 5, 6];

/// Compares `g·family·g⁻¹` with the target family coordinate by coordinate.
pub fn conjugation_matches(
    rep: &Rep,
    g: &Matrix,
    source: &A1Pair,
    target: &A1Pair,
    params: &[FieldElement],
) -> Result<bool> {
    let ginv = g.inverse()?;
    for t in params {
        for (src, tgt) in [
            (source.x_pos(rep, t)?, target.x_pos(rep, t)?),
            (source.x_neg(rep, t)?, target.x_neg(rep, t)?),
        ] {
            let conj = &(g * &src) * &ginv;
            let lhs = rep.factorize_ordered(&conj, &LEVI_Q_ORDER);
            let rhs = rep.factorize_ordered(&tgt, &LEVI_Q_ORDER)?;
            match lhs {
                Ok(c) if c == rhs => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// A random element of the unipotent radical of the long parabolic.
pub fn random_q_element<R: Rng + ?Sized>(rep: &Rep, rng: &mut R) -> Result<(GroupWord, Matrix)> {
    let f = rep.field();
    let mut idx = vec![1, 3, 4, 5, 6];
    idx.shuffle(rng);
    let w = GroupWord::new(
        idx.into_iter()
            .map(|i| Letter::x(i, FieldElement::random(f, rng)))
            .collect(),
    );
    let m = rep.eval_word(&w)?;
    Ok((w, m))
}
