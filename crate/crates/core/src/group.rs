//! The icosahedral group as permutations of the twelve dodecahedral faces.
//!
//! Faces are labelled 1..=12 in every public signature; storage is 0-based.
//! Composition is `(p q)(i) = p(q(i))`. The linear action on `R^12` moves the
//! coordinate of face `i` to face `p(i)`, i.e. `rho(p) e_i = e_{p(i)}`, which
//! makes `p -> rho(p)` a homomorphism for that composition rule.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Q5Matrix, Q5Scalar};

pub const NFACES: usize = 12;
pub const GROUP_ORDER: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("closure exceeded {limit} elements")]
    ClosureOverflow { limit: usize },
    #[error("relation {relation} fails for subgroup {subgroup}")]
    RelationFailed { subgroup: SubgroupName, relation: String },
    #[error("subgroup {subgroup} has order {found}, expected {expected}")]
    OrderMismatch { subgroup: SubgroupName, expected: usize, found: usize },
}

/// A bijection of the face labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation12 {
    images: [u8; NFACES],
}

impl Permutation12 {
    pub fn identity() -> Self {
        let mut images = [0u8; NFACES];
        for (i, v) in images.iter_mut().enumerate() {
            *v = i as u8;
        }
        Permutation12 { images }
    }

    /// From 1-based images: face `i` goes to `images[i - 1]`.
    pub fn from_images(images: [u8; NFACES]) -> Result<Self, GroupError> {
        let mut seen = [false; NFACES];
        let mut out = [0u8; NFACES];
        for (i, &f) in images.iter().enumerate() {
            if !(1..=NFACES as u8).contains(&f) || seen[(f - 1) as usize] {
                return Err(GroupError::InvalidPermutation(format!("{images:?} is not a bijection of 1..=12")));
            }
            seen[(f - 1) as usize] = true;
            out[i] = f - 1;
        }
        Ok(Permutation12 { images: out })
    }

    /// From disjoint cycles on 1-based labels, e.g. `&[&[1, 6], &[2, 5]]`.
    pub fn from_cycles(cycles: &[&[u8]]) -> Result<Self, GroupError> {
        let mut images = Self::identity().images;
        let mut touched = [false; NFACES];
        for cycle in cycles {
            for (k, &f) in cycle.iter().enumerate() {
                if !(1..=NFACES as u8).contains(&f) || touched[(f - 1) as usize] {
                    return Err(GroupError::InvalidPermutation(format!("bad cycle {cycle:?}")));
                }
                touched[(f - 1) as usize] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[(f - 1) as usize] = next - 1;
            }
        }
        Ok(Permutation12 { images })
    }

    /// Image of a 1-based face label.
    pub fn apply(&self, face: u8) -> u8 {
        self.images[(face - 1) as usize] + 1
    }

    /// 1-based image vector.
    pub fn images(&self) -> [u8; NFACES] {
        self.images.map(|v| v + 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut images = [0u8; NFACES];
        for (i, v) in images.iter_mut().enumerate() {
            *v = self.images[other.images[i] as usize];
        }
        Permutation12 { images }
    }

    pub fn inverse(&self) -> Self {
        let mut images = [0u8; NFACES];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Permutation12 { images }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn order(&self) -> u32 {
        let mut p = *self;
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Nontrivial cycles on 1-based labels, each starting at its smallest face.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; NFACES];
        let mut out = Vec::new();
        for start in 0..NFACES {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u8 + 1);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Permutation matrix with `rho(p) e_i = e_{p(i)}`.
    pub fn to_matrix(&self) -> Q5Matrix {
        let mut m = Q5Matrix::zeros(NFACES, NFACES);
        for i in 0..NFACES {
            m[(self.images[i] as usize, i)] = Q5Scalar::one();
        }
        m
    }

    /// `rho(p) x`: the coordinate of face `i` moves to face `p(i)`.
    pub fn act(&self, x: &[f64]) -> [f64; NFACES] {
        assert_eq!(x.len(), NFACES);
        let mut y = [0.0; NFACES];
        for i in 0..NFACES {
            y[self.images[i] as usize] = x[i];
        }
        y
    }
}

impl fmt::Display for Permutation12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(u8::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// Named rotations used as generators of the group and of its subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    G2,
    G2d,
    G3,
    G3d,
    G5,
    G5d,
}

impl Generator {
    pub const ALL: [Generator; 6] =
        [Generator::G2, Generator::G2d, Generator::G3, Generator::G3d, Generator::G5, Generator::G5d];

    pub fn name(self) -> &'static str {
        match self {
            Generator::G2 => "g2",
            Generator::G2d => "g2d",
            Generator::G3 => "g3",
            Generator::G3d => "g3d",
            Generator::G5 => "g5",
            Generator::G5d => "g5d",
        }
    }

    pub fn permutation(self) -> Permutation12 {
        let cycles: &[&[u8]] = match self {
            Generator::G2 => &[&[1, 6], &[2, 5], &[3, 9], &[4, 10], &[7, 12], &[8, 11]],
            Generator::G2d => &[&[1, 12], &[2, 8], &[3, 4], &[5, 11], &[6, 7], &[9, 10]],
            Generator::G3 => &[&[1, 2, 6], &[3, 5, 10], &[4, 9, 11], &[7, 8, 12]],
            Generator::G3d => &[&[1, 10, 2], &[3, 5, 12], &[4, 8, 7], &[6, 9, 11]],
            Generator::G5 => &[&[1, 2, 3, 4, 5], &[7, 8, 9, 10, 11]],
            Generator::G5d => &[&[1, 10, 11, 3, 6], &[4, 5, 9, 12, 7]],
        };
        Permutation12::from_cycles(cycles).expect("generator tables are valid permutations")
    }
}

/// Closure of `generators` under composition. Fails once more than `limit`
/// distinct elements appear. Elements come back in lexicographic order of
/// their image vectors.
pub fn generate(generators: &[Permutation12], limit: usize) -> Result<Vec<Permutation12>, GroupError> {
    Ok(generate_with_words(generators, limit)?.into_keys().collect())
}

/// Like [`generate`], also recording for each element a shortest word
/// `w` (indices into `generators`) with `element = w[0] ∘ w[1] ∘ ...`.
pub fn generate_with_words(
    generators: &[Permutation12],
    limit: usize,
) -> Result<BTreeMap<Permutation12, Vec<usize>>, GroupError> {
    let mut words = BTreeMap::new();
    let mut queue = VecDeque::new();
    let e = Permutation12::identity();
    words.insert(e, Vec::new());
    queue.push_back(e);
    while let Some(x) = queue.pop_front() {
        for (gi, g) in generators.iter().enumerate() {
            let y = x.compose(g);
            if words.contains_key(&y) {
                continue;
            }
            let mut w = words[&x].clone();
            w.push(gi);
            words.insert(y, w);
            if words.len() > limit {
                return Err(GroupError::ClosureOverflow { limit });
            }
            queue.push_back(y);
        }
    }
    Ok(words)
}

/// The five conjugacy classes, keyed by representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassId {
    E,
    G5,
    G5Sq,
    G2,
    G2G5,
}

impl ClassId {
    pub const ALL: [ClassId; 5] = [ClassId::E, ClassId::G5, ClassId::G5Sq, ClassId::G2, ClassId::G2G5];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            ClassId::E => "C(e)",
            ClassId::G5 => "C(g5)",
            ClassId::G5Sq => "C(g5^2)",
            ClassId::G2 => "C(g2)",
            ClassId::G2G5 => "C(g2g5)",
        }
    }

    pub fn representative(self) -> Permutation12 {
        let g2 = Generator::G2.permutation();
        let g5 = Generator::G5.permutation();
        match self {
            ClassId::E => Permutation12::identity(),
            ClassId::G5 => g5,
            ClassId::G5Sq => g5.pow(2),
            ClassId::G2 => g2,
            ClassId::G2G5 => g2.compose(&g5),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub id: ClassId,
    /// Indices into [`IcosahedralGroup::elements`].
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The 60 rotations generated by `g2` and `g5`.
#[derive(Clone, Debug)]
pub struct IcosahedralGroup {
    elements: Vec<Permutation12>,
    index: HashMap<Permutation12, usize>,
    // Words over [g2, g5].
    words: Vec<Vec<Generator>>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<ClassId>,
}

impl IcosahedralGroup {
    pub fn new() -> Result<Self, GroupError> {
        let gens = [Generator::G2, Generator::G5];
        let perms: Vec<Permutation12> = gens.iter().map(|g| g.permutation()).collect();
        let words_map = generate_with_words(&perms, GROUP_ORDER)?;
        let elements: Vec<Permutation12> = words_map.keys().copied().collect();
        let words = words_map.values().map(|w| w.iter().map(|&i| gens[i]).collect()).collect();
        let index: HashMap<Permutation12, usize> = elements.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let classes = conjugacy_classes(&elements, &index);
        let mut class_of = vec![ClassId::E; elements.len()];
        for c in &classes {
            for &m in &c.members {
                class_of[m] = c.id;
            }
        }
        Ok(IcosahedralGroup { elements, index, words, classes, class_of })
    }

    /// Shared instance, built on first use.
    pub fn get() -> &'static IcosahedralGroup {
        static GROUP: OnceLock<IcosahedralGroup> = OnceLock::new();
        GROUP.get_or_init(|| IcosahedralGroup::new().expect("g2 and g5 generate the icosahedral group"))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation12] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation12) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation12) -> bool {
        self.index.contains_key(p)
    }

    /// A shortest word in `g2`, `g5` spelling element `i`.
    pub fn word(&self, i: usize) -> &[Generator] {
        &self.words[i]
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> ClassId {
        self.class_of[i]
    }

    pub fn class(&self, id: ClassId) -> &ConjugacyClass {
        &self.classes[id.index()]
    }

    /// Faces reachable from `face` (1-based), sorted.
    pub fn orbit_of_face(&self, face: u8) -> Vec<u8> {
        let mut faces: Vec<u8> = self.elements.iter().map(|g| g.apply(face)).collect();
        faces.sort_unstable();
        faces.dedup();
        faces
    }
}

fn conjugacy_classes(elements: &[Permutation12], index: &HashMap<Permutation12, usize>) -> Vec<ConjugacyClass> {
    ClassId::ALL
        .iter()
        .map(|&id| {
            let r = id.representative();
            let mut members: Vec<usize> =
                elements.iter().map(|h| index[&h.compose(&r).compose(&h.inverse())]).collect();
            members.sort_unstable();
            members.dedup();
            ConjugacyClass { id, members }
        })
        .collect()
}

/// Subgroups of the icosahedral group used for the symmetry analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupName {
    T,
    D10,
    D6,
    Z5,
    D4,
    Z3,
    Z2,
}

impl SubgroupName {
    pub const ALL: [SubgroupName; 7] = [
        SubgroupName::T,
        SubgroupName::D10,
        SubgroupName::D6,
        SubgroupName::Z5,
        SubgroupName::D4,
        SubgroupName::Z3,
        SubgroupName::Z2,
    ];

    pub fn order(self) -> usize {
        match self {
            SubgroupName::T => 12,
            SubgroupName::D10 => 10,
            SubgroupName::D6 => 6,
            SubgroupName::Z5 => 5,
            SubgroupName::D4 => 4,
            SubgroupName::Z3 => 3,
            SubgroupName::Z2 => 2,
        }
    }

    pub fn generators(self) -> &'static [Generator] {
        use Generator::*;
        match self {
            SubgroupName::T => &[G2, G3d],
            SubgroupName::D10 => &[G2d, G5d],
            SubgroupName::D6 => &[G2d, G3],
            SubgroupName::Z5 => &[G5],
            SubgroupName::D4 => &[G2d, G2],
            SubgroupName::Z3 => &[G3],
            SubgroupName::Z2 => &[G2],
        }
    }

    /// Defining relations as `(word, exponent)`: `(w[0] w[1] ...)^exponent = e`.
    pub fn relations(self) -> &'static [(&'static [Generator], u32)] {
        use Generator::*;
        match self {
            SubgroupName::T => &[(&[G2], 2), (&[G3d], 3), (&[G2, G3d], 3)],
            SubgroupName::D10 => &[(&[G2d], 2), (&[G5d], 5), (&[G5d, G2d], 2)],
            SubgroupName::D6 => &[(&[G2d], 2), (&[G3], 3), (&[G3, G2d], 2)],
            SubgroupName::Z5 => &[(&[G5], 5)],
            SubgroupName::D4 => &[(&[G2d], 2), (&[G2], 2), (&[G2, G2d], 2)],
            SubgroupName::Z3 => &[(&[G3], 3)],
            SubgroupName::Z2 => &[(&[G2], 2)],
        }
    }

    /// The subgroup name for an order, if that order occurs among subgroups
    /// of the icosahedral group. Each such order fixes the conjugacy class.
    pub fn from_order(order: usize) -> Option<SubgroupName> {
        SubgroupName::ALL.into_iter().find(|s| s.order() == order)
    }
}

impl fmt::Display for SubgroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubgroupName::T => "T",
            SubgroupName::D10 => "D10",
            SubgroupName::D6 => "D6",
            SubgroupName::Z5 => "Z5",
            SubgroupName::D4 => "D4",
            SubgroupName::Z3 => "Z3",
            SubgroupName::Z2 => "Z2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SubgroupName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SubgroupName::ALL
            .into_iter()
            .find(|n| n.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown subgroup {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub name: SubgroupName,
    pub generators: Vec<Permutation12>,
    pub elements: Vec<Permutation12>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation12) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

fn word_product(word: &[Generator]) -> Permutation12 {
    word.iter().fold(Permutation12::identity(), |acc, g| acc.compose(&g.permutation()))
}

/// Generates the named subgroup and checks its relations and order.
pub fn make_subgroup(name: SubgroupName) -> Result<Subgroup, GroupError> {
    for (word, exp) in name.relations() {
        if !word_product(word).pow(*exp).is_identity() {
            let w: Vec<&str> = word.iter().map(|g| g.name()).collect();
            return Err(GroupError::RelationFailed { subgroup: name, relation: format!("({})^{exp}", w.join("")) });
        }
    }
    let generators: Vec<Permutation12> = name.generators().iter().map(|g| g.permutation()).collect();
    let elements = generate(&generators, GROUP_ORDER)?;
    if elements.len() != name.order() {
        return Err(GroupError::OrderMismatch { subgroup: name, expected: name.order(), found: elements.len() });
    }
    Ok(Subgroup { name, generators, elements })
}
