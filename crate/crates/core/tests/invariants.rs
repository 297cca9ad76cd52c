use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use g2sub_core::chevalley::{GroupWord, Letter, Rep, POSITIVE_ORDER};
use g2sub_core::cohomology::{layered_descent, A1Families};
use g2sub_core::gf::{Field, FieldElement};
use g2sub_core::linalg::Matrix;
use g2sub_core::repanalysis::{signature, signature_with, Labeler};
use g2sub_core::subgroups::{random_q_element, subgroup_generators, SubgroupName, SubgroupSpec};

const FIELDS: [(u32, u32); 5] = [(2, 1), (2, 2), (2, 3), (3, 2), (7, 1)];

fn random_word(f: &std::sync::Arc<Field>, rng: &mut ChaCha8Rng, len: usize) -> GroupWord {
    let roots = [1, 2, 3, 4, 5, 6, -1, -2, -3, -4, -5, -6];
    GroupWord::new(
        (0..len)
            .map(|_| {
                let i = roots[rng.gen_range(0..roots.len())];
                let mut t = FieldElement::random(f, rng);
                if t.is_zero() {
                    t = FieldElement::one(f);
                }
                match rng.gen_range(0..3) {
                    0 => Letter::x(i, t),
                    1 => Letter::n(i, t),
                    _ => Letter::h(i, t),
                }
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn words_times_inverses_are_trivial(seed in any::<u64>(), fi in 0..FIELDS.len(), len in 0usize..8) {
        let f = Field::new(FIELDS[fi].0, FIELDS[fi].1).unwrap();
        let rep = Rep::new(&f);
        let w = random_word(&f, &mut ChaCha8Rng::seed_from_u64(seed), len);
        let m = &rep.eval_word(&w).unwrap() * &rep.eval_word(&w.inverse().unwrap()).unwrap();
        prop_assert!(m.is_identity());
        prop_assert_eq!(GroupWord::parse(&f, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn unipotent_normal_form_round_trips(seed in any::<u64>(), fi in 0..FIELDS.len()) {
        let f = Field::new(FIELDS[fi].0, FIELDS[fi].1).unwrap();
        let rep = Rep::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<FieldElement> = (0..6).map(|_| FieldElement::random(&f, &mut rng)).collect();
        let m = rep.eval_normal_form(&POSITIVE_ORDER, &coords).unwrap();
        prop_assert_eq!(rep.unipotent_factorize(&m).unwrap().to_vec(), coords);
    }

    #[test]
    fn descent_finds_the_canonical_member(seed in any::<u64>(), n in 1u32..=3) {
        let f = Field::new(2, n).unwrap();
        let rep = Rep::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = FieldElement::random(&f, &mut rng);
        let l = FieldElement::random(&f, &mut rng);
        let (_, u) = random_q_element(&rep, &mut rng).unwrap();
        let x = A1Families::xkl(&rep, &k, &l).unwrap().conjugate(&u).unwrap();
        let d = layered_descent(&rep, &x).unwrap();
        prop_assert_eq!(&d.k_elem, &k);
        // over GF(2) even X_{0,1} is Q-conjugate to X_{0,0}
        let want_l = if k.is_zero() && n > 1 { l } else { FieldElement::zero(&f) };
        prop_assert_eq!(&d.l_elem, &want_l);
    }
}

/// Conjugating the subgroup (and the labels with it) leaves the signature alone.
#[test]
fn signatures_are_conjugation_invariant() {
    let cases = [
        (SubgroupName::Z1, 2, 2),
        (SubgroupName::Z2, 2, 2),
        (SubgroupName::Ltilde0, 2, 2),
        (SubgroupName::A1xA1short, 3, 2),
        (SubgroupName::IrredA1inA2, 5, 2),
    ];
    for (i, (name, p, n)) in cases.into_iter().enumerate() {
        let f = Field::new(p, n).unwrap();
        let rep = Rep::new(&f);
        let g = subgroup_generators(&SubgroupSpec::new(name, &f)).unwrap();
        let base = signature(&rep, &g, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let c = rep.eval_word(&random_word(&f, &mut rng, 6)).unwrap();
        let ci = c.inverse().unwrap();
        let conj = |m: &Matrix| Ok(&(&c * m) * &ci);
        let gens: Vec<Matrix> = g.matrices(&rep).unwrap().iter().map(|m| conj(m).unwrap()).collect();
        let labeler = Labeler::from_generators(&rep, &g).unwrap().map(conj).unwrap();
        let moved = signature_with(&gens, &f, 7, &labeler, 11).unwrap();
        assert_eq!(base.key(), moved.key(), "{name} over {f}");
    }
}

#[test]
fn signatures_do_not_depend_on_the_seed() {
    let f = Field::new(2, 2).unwrap();
    let rep = Rep::new(&f);
    for name in [SubgroupName::Z1, SubgroupName::Z2, SubgroupName::Lbar0, SubgroupName::A2] {
        let g = subgroup_generators(&SubgroupSpec::new(name, &f)).unwrap();
        let keys: Vec<_> = (0..4).map(|s| signature(&rep, &g, s).unwrap().key()).collect();
        assert!(keys.windows(2).all(|w| w[0] == w[1]), "{name}");
    }
}
