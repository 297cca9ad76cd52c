use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use g2sub_core::chevalley::{GroupWord, Rep};
use g2sub_core::cohomology::h1_dim;
use g2sub_core::finitegroup::{conjugacy_search, enumerate_group, DEFAULT_CAP};
use g2sub_core::gf::{Field, FieldElement, FieldRef};
use g2sub_core::repanalysis::{level_module, restriction_report, table_field, Verdict, DEFAULT_SEED};
use g2sub_core::rootsystem::{abs_filtration, positive_roots, Parabolic};
use g2sub_core::subgroups::{subgroup_generators, SubgroupName, SubgroupSpec};
use g2sub_core::suites::{run_suite, CheckVerdict, SuiteName, SuiteParams};

#[derive(Parser, Debug)]
#[command(name = "g2sub", version, about = "Exact computations with A1 subgroups of G2 over finite fields")]
struct Cli {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Degree of the field over GF(p).
    #[arg(long, global = true, default_value_t = 1)]
    n: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Long,
    Short,
}

impl From<Which> for Parabolic {
    fn from(w: Which) -> Self {
        match w {
            Which::Long => Parabolic::Long,
            Which::Short => Parabolic::Short,
        }
    }
}

#[derive(clap::Args, Debug, Clone, Default)]
struct SubgroupArgs {
    /// k for Xkl.
    #[arg(long)]
    k: Option<String>,
    /// l for Xkl.
    #[arg(long)]
    l: Option<String>,
    /// First twist exponent for TwistedDiag.
    #[arg(long, default_value_t = 0)]
    r: u32,
    /// Second twist exponent for TwistedDiag.
    #[arg(long, default_value_t = 0)]
    s: u32,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Positive roots with their level and shape in a parabolic.
    Roots {
        #[arg(long, value_enum, default_value = "long")]
        parabolic: Which,
    },
    /// Levels of the unipotent radical and their Levi modules.
    Filtration {
        #[arg(long, value_enum, default_value = "long")]
        parabolic: Which,
    },
    /// Evaluates a word such as "h4(x)·x-2(1)" on V7.
    Element {
        #[arg(long)]
        word: String,
    },
    /// Generators of a named subgroup.
    Subgroup {
        #[arg(long)]
        name: SubgroupName,
        #[command(flatten)]
        args: SubgroupArgs,
    },
    /// Composition factors and socle series of V7 restricted to a subgroup.
    Restrict {
        #[arg(long)]
        subgroup: SubgroupName,
        #[command(flatten)]
        args: SubgroupArgs,
    },
    /// First cohomology of SL2(q0) with coefficients in a module such as "1x1t3".
    H1 {
        #[arg(long)]
        q0: u32,
        #[arg(long)]
        module: String,
    },
    /// Order of a subgroup by exhaustive enumeration.
    Enumerate {
        #[arg(long)]
        subgroup: SubgroupName,
        #[command(flatten)]
        args: SubgroupArgs,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Searches the ambient group for g with g<A>g^-1 = <B>.
    /// Subgroups are written NAME or NAME:a,b (Xkl:k,l or TwistedDiag:r,s).
    Conjsearch {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "G2")]
        ambient: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Runs a verification suite; exits nonzero if any check fails.
    Verify {
        /// filtration, commutators, relations, conjugators, nonconjugacy, table, h1, complements or all
        /// (lemma22, lemma31, lemma32, lemma36, lemma37 are accepted as aliases).
        suite: String,
        /// Restrict the relation suite to this k.
        #[arg(long)]
        k: Option<String>,
        /// Restrict the relation suite to this l.
        #[arg(long)]
        l: Option<String>,
    },
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn spec_for(f: &FieldRef, name: SubgroupName, args: &SubgroupArgs) -> Result<SubgroupSpec> {
    let elem = |s: &Option<String>| -> Result<FieldElement> {
        match s {
            Some(s) => Ok(FieldElement::parse(f, s)?),
            None => Ok(FieldElement::zero(f)),
        }
    };
    Ok(match name {
        SubgroupName::Xkl => SubgroupSpec::xkl(&elem(&args.k)?, &elem(&args.l)?)?,
        SubgroupName::TwistedDiag => SubgroupSpec::twisted(f, args.r, args.s),
        _ => SubgroupSpec::new(name, f),
    })
}

/// `NAME` or `NAME:a,b`.
fn parse_spec(f: &FieldRef, s: &str) -> Result<SubgroupSpec> {
    let (name, params) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    let name: SubgroupName = name.parse()?;
    let mut args = SubgroupArgs::default();
    if let Some(p) = params {
        let (a, b) = p.split_once(',').ok_or_else(|| anyhow!("expected two parameters in {s:?}"))?;
        match name {
            SubgroupName::Xkl => {
                args.k = Some(a.to_string());
                args.l = Some(b.to_string());
            }
            SubgroupName::TwistedDiag => {
                args.r = a.trim().parse().context("twist exponent")?;
                args.s = b.trim().parse().context("twist exponent")?;
            }
            _ => bail!("{name} takes no parameters"),
        }
    }
    spec_for(f, name, &args)
}

fn matrices(spec: &SubgroupSpec) -> Result<Vec<g2sub_core::linalg::Matrix>> {
    let rep = Rep::new(&spec.field);
    Ok(subgroup_generators(spec)?.matrices(&rep)?)
}

fn run(cli: &Cli) -> Result<Output> {
    let field = || -> Result<FieldRef> { Ok(Field::new(cli.p, cli.n)?) };
    let out = match &cli.cmd {
        Cmd::Roots { parabolic } => {
            let j = Parabolic::from(*parabolic);
            let rows: Vec<Value> = positive_roots()
                .iter()
                .map(|&r| {
                    let levi = j.in_levi(r);
                    json!({
                        "index": r.index(),
                        "coords": [r.a, r.b],
                        "long": r.is_long(),
                        "height": r.height(),
                        "level": if levi { Value::Null } else { json!(j.level(r)) },
                        "shape": if levi { Value::Null } else { json!([j.shape(r).a, j.shape(r).b]) },
                    })
                })
                .collect();
            let mut text = format!("parabolic {j}\n  i  root   long   level  shape\n");
            for &r in positive_roots().iter() {
                let (level, shape) = if j.in_levi(r) {
                    ("Levi".to_string(), "-".to_string())
                } else {
                    (j.level(r).to_string(), j.shape(r).to_string())
                };
                text += &format!(
                    "  {}  {:<6} {:<6} {:<6} {}\n",
                    r.index().unwrap_or(0),
                    r.to_string(),
                    r.is_long(),
                    level,
                    shape
                );
            }
            Output {
                json: json!({ "parabolic": j.to_string(), "roots": rows, "filtration": abs_filtration(j) }),
                text,
                ok: true,
            }
        }
        Cmd::Filtration { parabolic } => {
            let j = Parabolic::from(*parabolic);
            let tf = table_field(cli.p)?;
            let mut levels = Vec::new();
            let mut text = format!("parabolic {j}, Levi modules over {tf}\n");
            for m in abs_filtration(j) {
                let (_, sig) = level_module(&tf, j, m.level, cli.seed)?;
                let names = sig.factor_names();
                text += &format!(
                    "  level {}: dim {}, high weight {}, factors {}\n",
                    m.level,
                    m.dim,
                    m.highweight,
                    names.join(" ")
                );
                levels.push(json!({ "level": m.level, "dim": m.dim, "highweight": m.highweight, "roots": m.roots, "factors": names }));
            }
            Output {
                json: json!({ "parabolic": j.to_string(), "field": tf.to_string(), "levels": levels }),
                text,
                ok: true,
            }
        }
        Cmd::Element { word } => {
            let f = field()?;
            let rep = Rep::new(&f);
            let w = GroupWord::parse(&f, word)?;
            let m = rep.eval_word(&w)?;
            let unipotent = rep.unipotent_factorize(&m).ok().map(|c| c.iter().map(|e| e.to_string()).collect::<Vec<_>>());
            let mut text = format!("{w} over {f}\n{m}");
            if let Some(c) = &unipotent {
                text += &format!("\nunipotent coordinates x1..x6: {}", c.join(" "));
            }
            Output {
                json: json!({ "word": w.to_json(), "field": f.to_string(), "matrix": m.to_coeff_rows(), "unipotent": unipotent }),
                text,
                ok: true,
            }
        }
        Cmd::Subgroup { name, args } => {
            let f = field()?;
            let spec = spec_for(&f, *name, args)?;
            let g = subgroup_generators(&spec)?;
            let j = g.to_json(&Rep::new(&f))?;
            let mut text = format!("{} over {f}\n", spec.label());
            for p in &g.pairs {
                text += &format!("  {}: x+(t) = {}, x-(t) = {}\n", p.name, p.pos.describe(), p.neg.describe());
            }
            for note in &g.notes {
                text += &format!("  note: {note}\n");
            }
            Output { json: j, text, ok: true }
        }
        Cmd::Restrict { subgroup, args } => {
            let f = field()?;
            let spec = spec_for(&f, *subgroup, args)?;
            let r = restriction_report(&spec, cli.seed)?;
            let verdict = match &r.verdict {
                Verdict::Match => "match".to_string(),
                Verdict::Mismatch(d) => format!("mismatch ({d})"),
                Verdict::Unlisted => "not in the table".to_string(),
            };
            let socle: Vec<String> = r.socle.iter().map(|layer| layer.join(" + ")).collect();
            let text = format!(
                "V7 restricted to {} over {}\n  factors: {}\n  socle series: {}\n  verdict: {verdict}",
                r.subgroup,
                r.field,
                r.factors.join(" "),
                socle.join(" | ")
            );
            Output {
                ok: !matches!(r.verdict, Verdict::Mismatch(_)),
                json: json!(r),
                text,
            }
        }
        Cmd::H1 { q0, module } => {
            let r = h1_dim(*q0, module)?;
            let text = format!(
                "H1(SL2({}), {}): dim {} over GF({}), {} over the prime field (Z1 {}, B1 {})",
                r.q0, r.module, r.dim_over_q0, r.q0, r.dim_prime_field, r.z1, r.b1
            );
            Output { json: json!(r), text, ok: true }
        }
        Cmd::Enumerate { subgroup, args, cap } => {
            let f = field()?;
            let spec = spec_for(&f, *subgroup, args)?;
            let order = enumerate_group(&matrices(&spec)?, *cap)?.len();
            Output {
                json: json!({ "subgroup": spec.label(), "field": f.to_string(), "order": order }),
                text: format!("{order}"),
                ok: true,
            }
        }
        Cmd::Conjsearch { a, b, ambient, cap } => {
            let f = field()?;
            let (sa, sb, sc) = (parse_spec(&f, a)?, parse_spec(&f, b)?, parse_spec(&f, ambient)?);
            let store = enumerate_group(&matrices(&sc)?, *cap)?;
            let found = conjugacy_search(&matrices(&sa)?, &matrices(&sb)?, &store)?;
            let base = json!({ "a": sa.label(), "b": sb.label(), "ambient": sc.label(), "ambient_order": store.len() });
            match found {
                Some(c) => {
                    let word: Vec<String> = c.word.iter().map(|i| format!("g{i}")).collect();
                    let mut j = base;
                    j["conjugator"] = json!({ "word": c.word, "matrix": c.matrix.to_coeff_rows() });
                    Output {
                        json: j,
                        text: format!(
                            "conjugator in {} (order {}): {}\n{}",
                            sc.label(),
                            store.len(),
                            if word.is_empty() { "1".into() } else { word.join("·") },
                            c.matrix
                        ),
                        ok: true,
                    }
                }
                None => {
                    let mut j = base;
                    j["conjugator"] = Value::Null;
                    Output { json: j, text: "none".into(), ok: true }
                }
            }
        }
        Cmd::Verify { suite, k, l } => {
            let name: SuiteName = suite.parse()?;
            let f = field()?;
            let raw = |s: &Option<String>| -> Result<Option<u32>> {
                s.as_ref().map(|s| Ok(FieldElement::parse(&f, s)?.raw())).transpose()
            };
            let params = SuiteParams {
                p: cli.p,
                n: cli.n,
                seed: cli.seed,
                k: raw(k)?,
                l: raw(l)?,
            };
            let r = run_suite(name, &params)?;
            let mut text = String::new();
            for c in &r.checks {
                let v = match c.verdict {
                    CheckVerdict::Pass => "pass",
                    CheckVerdict::Fail => "FAIL",
                    CheckVerdict::Skip => "skip",
                };
                text += &format!("{v:<4}  {}\n", c.id);
                if c.verdict == CheckVerdict::Fail {
                    text += &format!("      claim: {}\n      witness: {}\n", c.anchor, c.witness);
                }
            }
            text += &format!("{} over {}: {}", r.suite, r.field, if r.pass { "pass" } else { "FAIL" });
            Output {
                ok: r.pass,
                json: json!(r),
                text,
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| {
        let body = if cli.json {
            serde_json::to_string_pretty(&o.json)?
        } else {
            o.text
        };
        match &cli.out {
            Some(path) => fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display()))?,
            None => println!("{body}"),
        }
        Ok(o.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
