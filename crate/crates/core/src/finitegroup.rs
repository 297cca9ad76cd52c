//! Exhaustive enumeration of small matrix groups and conjugacy search.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::FieldRef;
use crate::linalg::{Matrix, Vector};

/// Default enumeration cap; comfortably above |G₂(2)| = 12096.
pub const DEFAULT_CAP: usize = 200_000;

/// Every element of a finite matrix group, keyed by canonical byte encoding.
#[derive(Clone, Debug)]
pub struct ElementStore {
    field: FieldRef,
    dim: usize,
    gens: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Vec<u8>, usize>,
    /// `(parent, generator)` with `element = parent · gens[generator]`.
    parent: Vec<Option<(usize, usize)>>,
}

impl ElementStore {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> usize {
        self.len()
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn encode(m: &Matrix) -> Vec<u8> {
        m.encode()
    }

    pub fn decode(&self, bytes: &[u8]) -> Matrix {
        Matrix::decode(&self.field, self.dim, self.dim, bytes)
    }

    pub fn position(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&m.encode()).copied()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index.contains_key(&m.encode())
    }

    /// Generator indices whose left-to-right product is element `i`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, g)) = self.parent[i] {
            out.push(g);
            i = p;
        }
        out.reverse();
        out
    }

    /// Whether the stored set is closed under right multiplication by the generators.
    pub fn is_closed(&self) -> bool {
        self.elements
            .par_iter()
            .all(|e| self.gens.iter().all(|g| self.contains(&(e * g))))
    }
}

/// Breadth-first closure of `gens`, failing once more than `cap` elements appear.
pub fn enumerate_group(gens: &[Matrix], cap: usize) -> Result<ElementStore> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Dimension("no generators".into()))?;
    let field = first.field().clone();
    let dim = first.rows();
    let id = Matrix::identity(&field, dim);
    let mut store = ElementStore {
        field,
        dim,
        gens: gens.to_vec(),
        elements: vec![id.clone()],
        index: HashMap::from([(id.encode(), 0)]),
        parent: vec![None],
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let m = &store.elements[i] * g;
            let key = m.encode();
            if store.index.contains_key(&key) {
                continue;
            }
            if store.elements.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
            let idx = store.elements.len();
            store.index.insert(key, idx);
            store.elements.push(m);
            store.parent.push(Some((i, gi)));
            queue.push_back(idx);
        }
    }
    Ok(store)
}

pub fn group_order(gens: &[Matrix], cap: usize) -> Result<usize> {
    Ok(enumerate_group(gens, cap)?.len())
}

#[derive(Clone, Debug)]
pub struct Conjugator {
    /// Position of `g` in the ambient store.
    pub index: usize,
    pub matrix: Matrix,
    /// Ambient generator indices spelling `g`.
    pub word: Vec<usize>,
}

/// Some `g` in the ambient group with `g⟨H1⟩g⁻¹ = ⟨H2⟩` as element sets, or
/// `None` after exhausting the ambient group.
pub fn conjugacy_search(h1: &[Matrix], h2: &[Matrix], ambient: &ElementStore) -> Result<Option<Conjugator>> {
    let s1 = enumerate_group(h1, ambient.len() + 1)?;
    let s2 = enumerate_group(h2, ambient.len() + 1)?;
    if s1.len() != s2.len() {
        return Ok(None);
    }
    // equal orders, so g⟨H1⟩g⁻¹ ⊆ ⟨H2⟩ forces equality
    let found = ambient.elements().par_iter().enumerate().find_first(|(_, g)| {
        let Ok(ginv) = g.inverse() else { return false };
        h1.iter().all(|h| s2.contains(&(&(*g * h) * &ginv)))
    });
    Ok(found.map(|(i, g)| Conjugator {
        index: i,
        matrix: g.clone(),
        word: ambient.word(i),
    }))
}

/// Common fixed vectors of `gens`: the null space of the stacked `g − 1`.
pub fn fixed_space(field: &FieldRef, dim: usize, gens: &[Matrix]) -> Vec<Vector> {
    if gens.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                e
            })
            .collect();
    }
    let rows: Vec<Vector> = gens.iter().flat_map(|g| g.minus_scalar(1).row_vectors()).collect();
    Matrix::from_rows(field, &rows).nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::Rep;
    use crate::gf::Field;
    use crate::subgroups::{subgroup_generators, SubgroupName, SubgroupSpec};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gens(name: SubgroupName, p: u32, n: u32) -> Vec<Matrix> {
        let f = Field::new(p, n).unwrap();
        let rep = Rep::new(&f);
        subgroup_generators(&SubgroupSpec::new(name, &f))
            .unwrap()
            .matrices(&rep)
            .unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(group_order(&gens(SubgroupName::A2, 2, 1), DEFAULT_CAP).unwrap(), 168);
        assert_eq!(group_order(&gens(SubgroupName::A1xA1short, 2, 1), DEFAULT_CAP).unwrap(), 36);
        assert_eq!(group_order(&gens(SubgroupName::Lbar0, 2, 2), DEFAULT_CAP).unwrap(), 60);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_group(&gens(SubgroupName::A2, 2, 1), 100).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 100 });
    }

    #[test]
    fn generator_order_does_not_matter() {
        let mut g = gens(SubgroupName::A1xA1short, 2, 1);
        let a = enumerate_group(&g, DEFAULT_CAP).unwrap();
        g.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
        g.reverse();
        let b = enumerate_group(&g, DEFAULT_CAP).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(a.elements().iter().all(|m| b.contains(m)));
    }

    #[test]
    fn words_spell_elements() {
        let g = gens(SubgroupName::A2, 2, 1);
        let s = enumerate_group(&g, DEFAULT_CAP).unwrap();
        assert!(s.is_closed());
        for i in (0..s.len()).step_by(7) {
            let mut m = Matrix::identity(s.field(), 7);
            for &gi in &s.word(i) {
                m = &m * &g[gi];
            }
            assert_eq!(&m, s.get(i));
        }
    }

    #[test]
    fn self_conjugacy_is_identity() {
        let g = gens(SubgroupName::A2, 2, 1);
        let amb = enumerate_group(&g, DEFAULT_CAP).unwrap();
        let h = gens(SubgroupName::Lbar0, 2, 1);
        let c = conjugacy_search(&h, &h, &amb).unwrap().unwrap();
        assert!(c.matrix.is_identity());
        assert!(c.word.is_empty());
    }

    #[test]
    fn conjugacy_is_symmetric() {
        let amb = enumerate_group(&gens(SubgroupName::A2, 2, 1), DEFAULT_CAP).unwrap();
        let h = gens(SubgroupName::Lbar0, 2, 1);
        let g = amb.get(amb.len() / 2).clone();
        let gi = g.inverse().unwrap();
        let h2: Vec<Matrix> = h.iter().map(|x| &(&g * x) * &gi).collect();
        let conjugates = |c: &Conjugator, from: &[Matrix], to: &[Matrix]| {
            let target = enumerate_group(to, 100).unwrap();
            let ci = c.matrix.inverse().unwrap();
            from.iter().all(|x| target.contains(&(&(&c.matrix * x) * &ci)))
        };
        let ab = conjugacy_search(&h, &h2, &amb).unwrap().unwrap();
        let ba = conjugacy_search(&h2, &h, &amb).unwrap().unwrap();
        assert!(conjugates(&ab, &h, &h2));
        assert!(conjugates(&ba, &h2, &h));
        // and A2 is not conjugate to its own subgroup
        assert!(conjugacy_search(&h, &gens(SubgroupName::A2, 2, 1), &amb).unwrap().is_none());
    }

    #[test]
    fn fixed_spaces() {
        for (p, dim) in [(2, 1), (3, 0), (5, 0), (7, 0)] {
            let f = Field::new(p, 1).unwrap();
            let g = gens(SubgroupName::G2, p, 1);
            assert_eq!(fixed_space(&f, 7, &g).len(), dim, "p={p}");
        }
        let f = Field::new(3, 1).unwrap();
        assert_eq!(fixed_space(&f, 7, &[Matrix::identity(&f, 7)]).len(), 7);
        assert_eq!(fixed_space(&f, 7, &[]).len(), 7);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn encoding_round_trips(seed in any::<u64>(), q in prop::sample::select(vec![(2u32, 1u32), (3, 2), (2, 8), (13, 3)])) {
            let f = Field::new(q.0, q.1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::random(&f, 7, 7, &mut rng);
            let store = enumerate_group(&[Matrix::identity(&f, 7)], 2).unwrap();
            prop_assert_eq!(store.decode(&ElementStore::encode(&m)), m);
        }
    }
}
