//! Bundled verification suites: each check pairs a stated claim with a
//! verdict and the data that decided it.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chevalley::{commutator_coeffs, commutator_holds, structure_constant, Rep};
use crate::cohomology::{
    complement_classes, conjugate_into_long_parabolic, g2_two, h1_dim, layered_descent, long_level_one,
    xkl_level_one_tuple, A1Families,
};
use crate::error::{Error, Result};
use crate::finitegroup::{conjugacy_search, fixed_space, ElementStore};
use crate::gf::{Field, FieldElement, FieldRef};
use crate::linalg::Matrix;
use crate::repanalysis::{level_module, restriction_report, table_field, ModuleRep, RestrictionReport, Verdict as RowVerdict, DEFAULT_SEED};
use crate::rootsystem::{abs_filtration, all_roots, Parabolic, Root};
use crate::subgroups::{
    check_relations, conjugation_matches, xkl_conjugator, relation_params, subgroup_generators,
    subgroup_generators_unchecked, SubgroupName, SubgroupSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Filtration,
    Commutators,
    Relations,
    Conjugators,
    Nonconjugacy,
    Table,
    H1,
    Complements,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 8] = [
        SuiteName::Filtration,
        SuiteName::Commutators,
        SuiteName::Relations,
        SuiteName::Conjugators,
        SuiteName::Nonconjugacy,
        SuiteName::Table,
        SuiteName::H1,
        SuiteName::Complements,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Filtration => "filtration",
            SuiteName::Commutators => "commutators",
            SuiteName::Relations => "relations",
            SuiteName::Conjugators => "conjugators",
            SuiteName::Nonconjugacy => "nonconjugacy",
            SuiteName::Table => "table",
            SuiteName::H1 => "h1",
            SuiteName::Complements => "complements",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    /// Accepts the descriptive names and the numbered aliases
    /// `lemma22`, `lemma31`, `lemma32`, `lemma36`, `lemma37`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "filtration" | "lemma22" => SuiteName::Filtration,
            "commutators" | "lemma31" => SuiteName::Commutators,
            "relations" | "lemma32" => SuiteName::Relations,
            "conjugators" | "lemma36" => SuiteName::Conjugators,
            "nonconjugacy" | "lemma37" => SuiteName::Nonconjugacy,
            "table" => SuiteName::Table,
            "h1" => SuiteName::H1,
            "complements" => SuiteName::Complements,
            "all" => SuiteName::All,
            _ => return Err(Error::UnknownSuite(s.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckVerdict {
    Pass,
    Fail,
    /// Not applicable for these parameters.
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub verdict: CheckVerdict,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub field: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub p: u32,
    pub n: u32,
    pub seed: u64,
    /// Restricts the relation suite to one `X_{k,l}` (raw field values).
    pub k: Option<u32>,
    pub l: Option<u32>,
}

impl SuiteParams {
    pub fn new(p: u32, n: u32) -> Self {
        SuiteParams {
            p,
            n,
            seed: DEFAULT_SEED,
            k: None,
            l: None,
        }
    }
}

struct Outcome {
    verdict: CheckVerdict,
    witness: Value,
}

impl Outcome {
    fn of(ok: bool, witness: Value) -> Self {
        Outcome {
            verdict: if ok { CheckVerdict::Pass } else { CheckVerdict::Fail },
            witness,
        }
    }

    fn skip(why: &str) -> Self {
        Outcome {
            verdict: CheckVerdict::Skip,
            witness: json!({ "reason": why }),
        }
    }
}

type Job<'a> = (String, String, Box<dyn Fn() -> Result<Outcome> + Send + Sync + 'a>);

fn job<'a>(id: impl Into<String>, anchor: &str, f: impl Fn() -> Result<Outcome> + Send + Sync + 'a) -> Job<'a> {
    (id.into(), anchor.to_string(), Box::new(f))
}

fn run_jobs(jobs: Vec<Job<'_>>) -> Vec<Check> {
    jobs.into_par_iter()
        .map(|(id, anchor, f)| {
            let (verdict, witness) = match f() {
                Ok(o) => (o.verdict, o.witness),
                Err(e) => (CheckVerdict::Fail, json!({ "error": e.to_string() })),
            };
            Check {
                id,
                anchor,
                verdict,
                witness,
            }
        })
        .collect()
}

/// Runs a suite. The result is deterministic given the parameters.
pub fn run_suite(name: SuiteName, params: &SuiteParams) -> Result<SuiteReport> {
    let f = Field::new(params.p, params.n)?;
    let checks = match name {
        SuiteName::All => {
            let mut out = Vec::new();
            for s in SuiteName::EACH {
                for mut c in suite_checks(s, &f, params)? {
                    c.id = format!("{s}/{}", c.id);
                    out.push(c);
                }
            }
            out
        }
        s => suite_checks(s, &f, params)?,
    };
    let pass = checks.iter().all(|c| c.verdict != CheckVerdict::Fail);
    Ok(SuiteReport {
        suite: name.to_string(),
        field: f.to_string(),
        seed: params.seed,
        checks,
        pass,
    })
}

fn suite_checks(name: SuiteName, f: &FieldRef, params: &SuiteParams) -> Result<Vec<Check>> {
    Ok(match name {
        SuiteName::Filtration => run_jobs(filtration(f)),
        SuiteName::Commutators => run_jobs(commutators(f, params.seed)),
        SuiteName::Relations => run_jobs(relations(f, params)?),
        SuiteName::Conjugators => run_jobs(conjugators(f)),
        SuiteName::Nonconjugacy => run_jobs(nonconjugacy(f, params.seed)),
        SuiteName::Table => table(f.p(), params.seed)?,
        SuiteName::H1 => run_jobs(h1()),
        SuiteName::Complements => run_jobs(complements(params.seed)),
        SuiteName::All => unreachable!("expanded by run_suite"),
    })
}

// ---- filtration --------------------------------------------------------------

/// Composition factor names of the short level-one module at characteristic `p`.
pub fn short_level_one_expected(p: u32) -> Vec<String> {
    match p {
        2 => vec!["1^(2)⊗1".into()],
        3 => vec!["1".into(), "1^(3)".into()],
        _ => vec!["3".into()],
    }
}

fn filtration(f: &FieldRef) -> Vec<Job<'static>> {
    let p = f.p();
    vec![
        job(
            "long-levels",
            "the radical of the long parabolic has three levels, of dimensions 2, 1, 2 and high weights 1, 0, 1",
            || {
                let lv = abs_filtration(Parabolic::Long);
                let dims: Vec<usize> = lv.iter().map(|m| m.dim).collect();
                let hw: Vec<i32> = lv.iter().map(|m| m.highweight).collect();
                Ok(Outcome::of(dims == [2, 1, 2] && hw == [1, 0, 1], json!({ "dims": dims, "highweights": hw })))
            },
        ),
        job(
            "short-levels",
            "the radical of the short parabolic has two levels, of dimensions 4 and 1 and high weights 3 and 0",
            || {
                let lv = abs_filtration(Parabolic::Short);
                let dims: Vec<usize> = lv.iter().map(|m| m.dim).collect();
                let hw: Vec<i32> = lv.iter().map(|m| m.highweight).collect();
                Ok(Outcome::of(dims == [4, 1] && hw == [3, 0], json!({ "dims": dims, "highweights": hw })))
            },
        ),
        job(
            "short-level-one-module",
            "in characteristic 2 the first short level is the twisted tensor product 1^(2)⊗1 for the Levi",
            move || {
                let tf = table_field(p)?;
                let (_, sig) = level_module(&tf, Parabolic::Short, 1, DEFAULT_SEED)?;
                let got = sig.factor_names();
                let want = short_level_one_expected(p);
                Ok(Outcome::of(got == want, json!({ "field": tf.to_string(), "factors": got, "expected": want })))
            },
        ),
        job(
            "long-level-modules",
            "the long levels are the natural, trivial and natural modules for the Levi",
            move || {
                let tf = table_field(p)?;
                let got = (1..=3)
                    .map(|l| Ok(level_module(&tf, Parabolic::Long, l, DEFAULT_SEED)?.1.factor_names()))
                    .collect::<Result<Vec<_>>>()?;
                let ok = got == [vec!["1".to_string()], vec!["0".into()], vec!["1".into()]];
                Ok(Outcome::of(ok, json!({ "field": tf.to_string(), "levels": got })))
            },
        ),
    ]
}

// ---- commutators ---------------------------------------------------------------

fn ordered_pairs() -> Vec<(Root, Root)> {
    let roots = all_roots();
    roots
        .iter()
        .flat_map(|&r| roots.iter().map(move |&s| (r, s)))
        .filter(|&(r, s)| r != s && r != -s)
        .collect()
}

fn commutators(f: &FieldRef, seed: u64) -> Vec<Job<'_>> {
    vec![
        job(
            "commutator-formula",
            "[x_s(u), x_r(t)] is the ordered product of x_{ir+js}(C_ij (−t)^i u^j) for all non-opposite roots",
            move || {
                let rep = Rep::new(f);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let params: Vec<(FieldElement, FieldElement)> = (0..20)
                    .map(|_| (FieldElement::random(f, &mut rng), FieldElement::random(f, &mut rng)))
                    .collect();
                let pairs = ordered_pairs();
                let mut failures = Vec::new();
                for &(r, s) in &pairs {
                    for (t, u) in &params {
                        if !commutator_holds(&rep, r, s, t, u)? {
                            failures.push(format!("r={r} s={s} t={t} u={u}"));
                        }
                    }
                }
                failures.truncate(10);
                Ok(Outcome::of(
                    failures.is_empty(),
                    json!({ "pairs": pairs.len(), "params": params.len(), "failures": failures }),
                ))
            },
        ),
        job(
            "structure-constants",
            "the (1,1) commutator coefficient is the structure constant N_{r,s}",
            || {
                let mut bad = Vec::new();
                for (r, s) in ordered_pairs() {
                    let c11 = commutator_coeffs(r, s)?
                        .iter()
                        .find(|t| t.i == 1 && t.j == 1)
                        .map(|t| t.coeff);
                    if c11 != structure_constant(r, s) {
                        bad.push(format!("{r},{s}"));
                    }
                }
                Ok(Outcome::of(bad.is_empty(), json!({ "mismatches": bad })))
            },
        ),
        job(
            "radical-levels-normal",
            "each Q(i) is normalized by the parabolic: conjugates of Q(i) have no coordinates below level i",
            move || {
                let rep = Rep::new(f);
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
                let mut bad = Vec::new();
                for j in [Parabolic::Long, Parabolic::Short] {
                    let levi = j.levi_root().index().expect("simple root");
                    let radical: Vec<Root> = crate::rootsystem::positive_roots()
                        .into_iter()
                        .filter(|r| !j.in_levi(*r))
                        .collect();
                    let top = radical.iter().map(|r| j.level(*r)).max().unwrap_or(0);
                    for i in 1..=top {
                        for _ in 0..8 {
                            let mut g = rep.identity();
                            for l in [levi, -levi, levi] {
                                g = &g * &rep.xmat(l, &FieldElement::random(f, &mut rng))?;
                            }
                            for r in &radical {
                                g = &g * &rep.xmat(r.index().expect("root"), &FieldElement::random(f, &mut rng))?;
                            }
                            let mut x = rep.identity();
                            for r in radical.iter().filter(|r| j.level(**r) >= i) {
                                x = &x * &rep.xmat(r.index().expect("root"), &FieldElement::random(f, &mut rng))?;
                            }
                            let c = rep.unipotent_factorize(&(&(&g * &x) * &g.inverse()?))?;
                            let low = crate::rootsystem::positive_roots()
                                .into_iter()
                                .enumerate()
                                .any(|(k, r)| (j.in_levi(r) || j.level(r) < i) && !c[k].is_zero());
                            if low {
                                bad.push(format!("{j} level {i}"));
                            }
                        }
                    }
                }
                Ok(Outcome::of(bad.is_empty(), json!({ "failures": bad })))
            },
        ),
    ]
}

// ---- relations -----------------------------------------------------------------

fn relations<'a>(f: &'a FieldRef, params: &SuiteParams) -> Result<Vec<Job<'a>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let elems: Vec<FieldElement> = FieldElement::all(f).collect();
    let pick = |raw: Option<u32>| -> Result<Option<FieldElement>> {
        raw.map(|v| {
            if v < f.order() {
                Ok(FieldElement::from_raw(f, v))
            } else {
                Err(Error::Parse(format!("parameter {v} is not in {f}")))
            }
        })
        .transpose()
    };
    let (k_fix, l_fix) = (pick(params.k)?, pick(params.l)?);
    let mut kl: Vec<(FieldElement, FieldElement)> = if k_fix.is_some() || l_fix.is_some() {
        let ks = k_fix.map_or(elems.clone(), |k| vec![k]);
        let ls = l_fix.map_or(elems.clone(), |l| vec![l]);
        ks.iter().flat_map(|k| ls.iter().map(move |l| (k.clone(), l.clone()))).collect()
    } else if f.order() <= 4 {
        elems.iter().flat_map(|k| elems.iter().map(move |l| (k.clone(), l.clone()))).collect()
    } else {
        (0..50)
            .map(|_| (FieldElement::random(f, &mut rng), FieldElement::random(f, &mut rng)))
            .collect()
    };
    kl.dedup();
    let (tu, exhaustive) = relation_params(f, 4, 50, &mut rng);
    let mut jobs = Vec::new();
    for (k, l) in kl {
        let tu = tu.clone();
        let (k2, l2) = (k.clone(), l.clone());
        jobs.push(job(
            format!("relations k={k} l={l}"),
            "x₊(t)=x₂(t²)x₃(kt)x₆((k³+l)t) and x₋(t)=x₋₂(t²)x₁(kt)x₅(lt) satisfy additivity, h₊(t)h₊(u)=h₊(tu) and n₊(t)x₊(u)n₊(t)⁻¹=x₋(−t⁻²u), which holds only when p = 2",
            move || {
                let rep = Rep::new(f);
                let spec = SubgroupSpec {
                    k: k.clone(),
                    l: l.clone(),
                    ..SubgroupSpec::new(SubgroupName::Xkl, f)
                };
                let g = subgroup_generators_unchecked(&spec)?;
                let r = check_relations(&rep, &g.pairs[0], &tu)?;
                let mut failures = r.failures.clone();
                failures.truncate(5);
                Ok(Outcome::of(
                    r.holds(),
                    json!({ "checked": r.checked, "exhaustive": exhaustive, "failures": failures }),
                ))
            },
        ));
        jobs.push(job(
            format!("closed-forms k={k2} l={l2}"),
            "n₊(t) = n₂(t²)x₄(k²) and h₊(t) = h₂(t²) for every t ≠ 0",
            move || {
                let rep = Rep::new(f);
                let spec = SubgroupSpec {
                    k: k2.clone(),
                    l: l2.clone(),
                    ..SubgroupSpec::new(SubgroupName::Xkl, f)
                };
                let pair = subgroup_generators_unchecked(&spec)?.pairs.remove(0);
                let mut bad = Vec::new();
                for t in FieldElement::all(f).skip(1) {
                    let t2 = t.pow(2);
                    let n = &rep.nmat(2, &t2)? * &rep.xmat(4, &k2.pow(2))?;
                    if pair.n(&rep, &t)? != n {
                        bad.push(format!("n({t})"));
                    }
                    if pair.h(&rep, &t)? != rep.hmat(2, &t2)? {
                        bad.push(format!("h({t})"));
                    }
                }
                Ok(Outcome::of(bad.is_empty(), json!({ "failures": bad })))
            },
        ));
    }
    Ok(jobs)
}

// ---- conjugators ---------------------------------------------------------------

fn conjugators(f: &FieldRef) -> Vec<Job<'_>> {
    let elems: Vec<FieldElement> = FieldElement::all(f).collect();
    let mut jobs = Vec::new();
    for k in &elems {
        for l in &elems {
            if k.is_zero() && l.is_zero() {
                continue;
            }
            let (k, l) = (k.clone(), l.clone());
            jobs.push(job(
                format!("conjugator k={k} l={l}"),
                "X_{k,l} is conjugate to X_{1,0} by h₄(k⁻¹)x₄(l/k) when k ≠ 0, and to X_{0,1} by h₄(l^{-1/3}) when k = 0",
                move || {
                    let rep = Rep::new(f);
                    let (w, target) = match xkl_conjugator(&k, &l) {
                        Ok(x) => x,
                        Err(Error::NoRationalConjugator) => {
                            return Ok(Outcome::skip("l has no cube root in this field"));
                        }
                        Err(e) => return Err(e),
                    };
                    let src = subgroup_generators(&SubgroupSpec::xkl(&k, &l)?)?;
                    let tgt = subgroup_generators(&target)?;
                    let all: Vec<FieldElement> = FieldElement::all(f).collect();
                    let ok = conjugation_matches(&rep, &rep.eval_word(&w)?, &src.pairs[0], &tgt.pairs[0], &all)?;
                    Ok(Outcome::of(ok, json!({ "word": w.to_string(), "target": target.label() })))
                },
            ));
        }
    }
    jobs
}

// ---- non-conjugacy -------------------------------------------------------------

fn g2_cached() -> Result<&'static ElementStore> {
    static STORE: OnceLock<std::result::Result<ElementStore, Error>> = OnceLock::new();
    STORE.get_or_init(g2_two).as_ref().map_err(Clone::clone)
}

fn gens2(name: SubgroupName) -> Result<Vec<Matrix>> {
    let f = Field::new(2, 1)?;
    subgroup_generators(&SubgroupSpec::new(name, &f))?.matrices(&Rep::new(&f))
}

fn xkl2(k: u32, l: u32) -> Result<Vec<Matrix>> {
    let f = Field::new(2, 1)?;
    let spec = SubgroupSpec::xkl(&FieldElement::from_raw(&f, k), &FieldElement::from_raw(&f, l))?;
    subgroup_generators(&spec)?.matrices(&Rep::new(&f))
}

fn conj_witness(c: &Option<crate::finitegroup::Conjugator>) -> Value {
    match c {
        Some(c) => json!({ "found": true, "word": c.word, "matrix": c.matrix.to_coeff_rows() }),
        None => json!({ "found": false }),
    }
}

fn report(name: SubgroupName, seed: u64) -> Result<RestrictionReport> {
    restriction_report(&SubgroupSpec::new(name, &Field::new(2, 2)?), seed)
}

fn nonconjugacy(f: &FieldRef, seed: u64) -> Vec<Job<'_>> {
    let mut jobs = vec![job(
        "fixed-space",
        "V₇ has a trivial submodule for G₂ exactly in characteristic 2",
        move || {
            let rep = Rep::new(f);
            let g = subgroup_generators(&SubgroupSpec::new(SubgroupName::G2, f))?.matrices(&rep)?;
            let d = fixed_space(f, 7, &g).len();
            let want = usize::from(f.p() == 2);
            Ok(Outcome::of(d == want, json!({ "dim": d, "expected": want })))
        },
    )];
    if f.p() != 2 {
        jobs.push(job("characteristic-two", "the remaining checks concern characteristic 2", || {
            Ok(Outcome::skip("p ≠ 2"))
        }));
        return jobs;
    }
    jobs.push(job("g2-order", "G₂(2) has order 12096", || {
        let n = g2_cached()?.len();
        Ok(Outcome::of(n == 12096, json!({ "order": n })))
    }));
    for (a, b) in [(SubgroupName::Z1, SubgroupName::Z2), (SubgroupName::Z1, SubgroupName::Lbar0)] {
        jobs.push(job(
            format!("{a}-vs-{b}"),
            "Z₁(2) is conjugate in G₂(2) to neither Z₂(2) nor L̄₀(2)",
            move || {
                let c = conjugacy_search(&gens2(a)?, &gens2(b)?, g2_cached()?)?;
                Ok(Outcome::of(c.is_none(), conj_witness(&c)))
            },
        ));
    }
    jobs.push(job(
        "Z2-vs-Lbar0",
        "Z₂(2) and L̄₀(2) are conjugate already in the long A₂(2) ≅ SL₃(2): the natural module of SL₂(2) is projective, so Sym² splits; the two are told apart only over larger fields",
        || {
            let a2 = crate::finitegroup::enumerate_group(&gens2(SubgroupName::A2)?, 1000)?;
            let c = conjugacy_search(&gens2(SubgroupName::Z2)?, &gens2(SubgroupName::Lbar0)?, &a2)?;
            let mut w = conj_witness(&c);
            w["ambient"] = json!("A2(2)");
            Ok(Outcome::of(c.is_some(), w))
        },
    ));
    for ((k, l), target) in [((1, 0), SubgroupName::Z1), ((0, 1), SubgroupName::Z2)] {
        jobs.push(job(
            format!("X{k}{l}-vs-{target}"),
            "X_{1,0} is conjugate to Z₁ and X_{0,1} to Z₂",
            move || {
                let c = conjugacy_search(&xkl2(k, l)?, &gens2(target)?, g2_cached()?)?;
                let mut w = conj_witness(&c);
                if c.is_some() {
                    return Ok(Outcome::of(true, w));
                }
                // the class may split over GF(2); fall back to signatures over GF(4)
                let f4 = Field::new(2, 2)?;
                let x = restriction_report(&SubgroupSpec::xkl(&FieldElement::from_raw(&f4, k), &FieldElement::from_raw(&f4, l))?, seed)?;
                let z = report(target, seed)?;
                let same = x.signature.key() == z.signature.key();
                w["split"] = json!(true);
                w["signatures_equal"] = json!(same);
                Ok(Outcome::of(same, w))
            },
        ));
    }
    jobs.push(job(
        "signatures",
        "over GF(4) the restrictions of V₇ to Z₁, Z₂ and L̄₀ are distinct, so no two are conjugate there; Z₁ and Z₂ differ in socle but not in composition factors",
        move || {
            let z1 = report(SubgroupName::Z1, seed)?;
            let z2 = report(SubgroupName::Z2, seed)?;
            let lb = report(SubgroupName::Lbar0, seed)?;
            let (k1, k2, k3) = (z1.signature.key(), z2.signature.key(), lb.signature.key());
            let ok = k1 != k2 && k1 != k3 && k2 != k3 && k1.0 == k2.0 && k1.1 != k2.1;
            Ok(Outcome::of(
                ok,
                json!({ "Z1": z1.socle, "Z2": z2.socle, "Lbar0": lb.socle }),
            ))
        },
    ));
    jobs.push(job(
        "z1-descent",
        "Z₁ lies in the long parabolic and is Q-conjugate there to some X_{k,l} with (k,l) ≠ (0,0)",
        || {
            let f2 = Field::new(2, 1)?;
            let rep = Rep::new(&f2);
            let g = subgroup_generators(&SubgroupSpec::new(SubgroupName::Z1, &f2))?;
            let z1 = A1Families::from_pair(&rep, &g.pairs[0])?;
            let Some(c) = conjugate_into_long_parabolic(&rep, &z1, g2_cached()?)? else {
                return Ok(Outcome::of(false, json!({ "parabolic": false })));
            };
            let d = layered_descent(&rep, &z1.conjugate(&c)?)?;
            let ok = !(d.k_elem.is_zero() && d.l_elem.is_zero());
            Ok(Outcome::of(ok, json!({ "k": d.k, "l": d.l, "conjugator": d.conjugator })))
        },
    ));
    jobs
}

// ---- restriction table -----------------------------------------------------------

/// Table rows checked at characteristic `p`.
pub fn table_rows(f: &FieldRef) -> Vec<SubgroupSpec> {
    let p = f.p();
    let mut rows = vec![
        SubgroupSpec::new(SubgroupName::A2, f),
        SubgroupSpec::new(SubgroupName::A1xA1short, f),
        SubgroupSpec::new(SubgroupName::Lbar0, f),
        SubgroupSpec::new(SubgroupName::Ltilde0, f),
    ];
    if p == 2 {
        rows.push(SubgroupSpec::new(SubgroupName::Z1, f));
        rows.push(SubgroupSpec::new(SubgroupName::Z2, f));
    } else {
        rows.push(SubgroupSpec::twisted(f, 0, 0));
        rows.push(SubgroupSpec::new(SubgroupName::IrredA1inA2, f));
    }
    rows.push(SubgroupSpec::twisted(f, 1, 0));
    if p == 3 {
        rows.push(SubgroupSpec::new(SubgroupName::A2short, f));
    }
    if p >= 7 {
        rows.push(SubgroupSpec::new(SubgroupName::PrincipalA1, f));
    }
    rows
}

/// Rows known to be conjugate, so equal rather than distinct signatures.
fn conjugate_rows(a: &SubgroupSpec, b: &SubgroupSpec) -> bool {
    let diag = |s: &SubgroupSpec| s.name == SubgroupName::TwistedDiag && s.r == s.s;
    let irred = |s: &SubgroupSpec| s.name == SubgroupName::IrredA1inA2;
    (diag(a) && irred(b)) || (irred(a) && diag(b))
}

fn table(p: u32, seed: u64) -> Result<Vec<Check>> {
    let f = table_field(p)?;
    let rows = table_rows(&f);
    let reports: Vec<Result<RestrictionReport>> = rows.par_iter().map(|s| restriction_report(s, seed)).collect();
    let mut checks = Vec::new();
    for (spec, r) in rows.iter().zip(&reports) {
        let (verdict, witness) = match r {
            Ok(r) => (
                if r.verdict == RowVerdict::Match { CheckVerdict::Pass } else { CheckVerdict::Fail },
                json!(r),
            ),
            Err(e) => (CheckVerdict::Fail, json!({ "error": e.to_string() })),
        };
        checks.push(Check {
            id: format!("row {}", spec.label()),
            anchor: "V₇ restricted to each subgroup in the table has the stated composition factors and submodule structure".into(),
            verdict,
            witness,
        });
    }
    let ok: Vec<(&SubgroupSpec, &RestrictionReport)> = rows
        .iter()
        .zip(&reports)
        .filter_map(|(s, r)| r.as_ref().ok().map(|r| (s, r)))
        .collect();
    let mut clashes = Vec::new();
    let mut equal_pairs = Vec::new();
    for i in 0..ok.len() {
        for j in i + 1..ok.len() {
            let same = ok[i].1.signature.key() == ok[j].1.signature.key();
            let pair = format!("{} / {}", ok[i].0.label(), ok[j].0.label());
            if conjugate_rows(ok[i].0, ok[j].0) {
                equal_pairs.push((pair, same));
            } else if same {
                clashes.push(pair);
            }
        }
    }
    checks.push(Check {
        id: "distinct".into(),
        anchor: "the restrictions of V₇ in the table are all distinct".into(),
        verdict: if clashes.is_empty() && ok.len() == rows.len() { CheckVerdict::Pass } else { CheckVerdict::Fail },
        witness: json!({ "rows": ok.len(), "clashes": clashes }),
    });
    for (pair, same) in equal_pairs {
        checks.push(Check {
            id: format!("conjugate {pair}"),
            anchor: "for p ≠ 2 the untwisted diagonal A₁ of A₁Ã₁ is conjugate to the irreducible A₁ of A₂, so both give 2 ⊕ 2 ⊕ 0".into(),
            verdict: if same { CheckVerdict::Pass } else { CheckVerdict::Fail },
            witness: json!({ "equal": same }),
        });
    }
    checks.push(Check {
        id: "field".into(),
        anchor: "restrictions are computed over GF(p²) so every weight met is below q".into(),
        verdict: CheckVerdict::Pass,
        witness: json!({ "field": f.to_string() }),
    });
    Ok(checks)
}

// ---- cohomology ------------------------------------------------------------------

/// `(q₀, module, expected dim over GF(q₀))`.
pub const H1_CASES: [(u32, &str, usize); 6] = [
    (4, "1", 1),
    (4, "1t2", 1),
    (8, "1t2", 1),
    (9, "1x1t3", 2),
    (4, "1x1t2", 0),
    (4, "0", 0),
];

fn h1() -> Vec<Job<'static>> {
    H1_CASES
        .iter()
        .map(|&(q, m, want)| {
            job(
                format!("h1 q0={q} V={m}"),
                "H¹(SL₂(q₀), L(λ)) is nonzero only for twists of (p−2)⊗1^(p), where it is one-dimensional, or two-dimensional when p = 3 and λ = 1⊗1^(3)",
                move || {
                    let r = h1_dim(q, m)?;
                    let ok = r.dim_over_q0 == want && r.b1 + r.fixed == r.dim;
                    Ok(Outcome::of(ok, json!(r)))
                },
            )
        })
        .collect()
}

// ---- complements -----------------------------------------------------------------

fn complements(seed: u64) -> Vec<Job<'static>> {
    vec![
        job(
            "level-one-gf4",
            "complements to Q/Q(2) in L̄₀Q/Q(2) over GF(4) form 4 classes, one for each X_{k,0}",
            || {
                let f = Field::new(2, 2)?;
                let rep = Rep::new(&f);
                let (x, v) = long_level_one(&f)?;
                let c = complement_classes(&x, &v)?;
                let mut classes = FieldElement::all(&f)
                    .map(|k| Ok(c.class_of(&xkl_level_one_tuple(&rep, &k)?)))
                    .collect::<Result<Vec<_>>>()?;
                classes.sort();
                let ok = c.count == 4 && classes == [Some(0), Some(1), Some(2), Some(3)];
                let h = h1_dim(4, "1")?;
                let agree = c.count == 4usize.pow(h.dim_over_q0 as u32);
                Ok(Outcome::of(
                    ok && agree,
                    json!({ "count": c.count, "z1": c.z1_size, "b1": c.b1_size, "xk0_classes": classes, "h1": h.dim_over_q0 }),
                ))
            },
        ),
        job(
            "level-one-gf2",
            "over GF(2) all complements to Q/Q(2) are conjugate",
            || {
                let f = Field::new(2, 1)?;
                let (x, v) = long_level_one(&f)?;
                let c = complement_classes(&x, &v)?;
                Ok(Outcome::of(c.count == 1, json!({ "count": c.count, "z1": c.z1_size, "b1": c.b1_size })))
            },
        ),
        job("trivial-module", "complements to a trivial module for a perfect group are all conjugate", || {
            let f = Field::new(2, 2)?;
            let (x, v) = long_level_one(&f)?;
            let triv = ModuleRep::new(&f, 1, vec![Matrix::identity(&f, 1); v.gens.len()])?;
            let c = complement_classes(&x, &triv)?;
            Ok(Outcome::of(c.count == 1, json!({ "count": c.count })))
        }),
        job(
            "descent-round-trip",
            "a complement of Q in L̄₀Q over GF(4) is Q-conjugate to some X_{k,l}; k is determined, and l too when k = 0",
            move || {
                let f = Field::new(2, 2)?;
                let rep = Rep::new(&f);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut cases = Vec::new();
                let mut ok = true;
                for _ in 0..16 {
                    let k = FieldElement::random(&f, &mut rng);
                    let l = FieldElement::random(&f, &mut rng);
                    let (w, u) = crate::subgroups::random_q_element(&rep, &mut rng)?;
                    let x = A1Families::xkl(&rep, &k, &l)?.conjugate(&u)?;
                    let d = layered_descent(&rep, &x)?;
                    let want_l = if k.is_zero() { l.clone() } else { FieldElement::zero(&f) };
                    let again = layered_descent(&rep, &x.conjugate(&rep.eval_word(&d.word)?)?)?;
                    let good = d.k_elem == k && d.l_elem == want_l && again.word.is_empty() && again.k == d.k && again.l == d.l;
                    ok &= good;
                    cases.push(json!({ "k": k.to_string(), "l": l.to_string(), "conjugated_by": w.to_string(), "found": [d.k, d.l], "word": d.conjugator, "ok": good }));
                }
                Ok(Outcome::of(ok, json!({ "cases": cases })))
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!("lemma36".parse::<SuiteName>().unwrap(), SuiteName::Conjugators);
        assert_eq!("TABLE".parse::<SuiteName>().unwrap(), SuiteName::Table);
        assert!(matches!("lemma99".parse::<SuiteName>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn conjugators_over_gf8_pass() {
        let r = run_suite(SuiteName::Conjugators, &SuiteParams::new(2, 3)).unwrap();
        assert!(r.pass);
        assert_eq!(r.checks.len(), 63);
        assert!(r.checks.iter().all(|c| c.verdict == CheckVerdict::Pass));
    }

    #[test]
    fn conjugators_over_gf4_skip_non_cubes() {
        let r = run_suite(SuiteName::Conjugators, &SuiteParams::new(2, 2)).unwrap();
        assert!(r.pass);
        let skipped = r.checks.iter().filter(|c| c.verdict == CheckVerdict::Skip).count();
        assert_eq!(skipped, 2);
    }

    #[test]
    fn relations_fail_in_characteristic_three() {
        let params = SuiteParams {
            k: Some(1),
            l: Some(0),
            ..SuiteParams::new(3, 1)
        };
        let r = run_suite(SuiteName::Relations, &params).unwrap();
        assert!(!r.pass);
        let rel = r.checks.iter().find(|c| c.id.starts_with("relations")).unwrap();
        assert_eq!(rel.verdict, CheckVerdict::Fail);
    }

    #[test]
    fn relations_hold_over_gf4() {
        let r = run_suite(SuiteName::Relations, &SuiteParams::new(2, 2)).unwrap();
        assert!(r.pass, "{:?}", r.checks.iter().filter(|c| c.verdict == CheckVerdict::Fail).collect::<Vec<_>>());
        assert_eq!(r.checks.len(), 32);
    }

    #[test]
    fn table_at_two_has_seven_rows() {
        let r = run_suite(SuiteName::Table, &SuiteParams::new(2, 2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.checks.iter().filter(|c| c.id.starts_with("row")).count(), 7);
    }

    #[test]
    fn report_is_deterministic_json() {
        let a = run_suite(SuiteName::Filtration, &SuiteParams::new(2, 2)).unwrap();
        let b = run_suite(SuiteName::Filtration, &SuiteParams::new(2, 2)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let v = serde_json::to_value(&a).unwrap();
        for key in ["suite", "field", "seed", "checks", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(a.pass);
    }
}
