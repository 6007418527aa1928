//! Two groups glued along a common subgroup. The union is a partial group
//! whose domain consists of the words lying entirely inside one of the two
//! groups.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::partial::PartialGroup;
use crate::perm::Perm;
use crate::set::{Elem, ElemSet};

/// Two groups and an isomorphism between a subgroup of each.
#[derive(Clone, Debug)]
pub struct AmalgamSpec {
    pub left: FiniteGroup,
    pub right: FiniteGroup,
    /// Full pairing `(a, φ(a))` of the shared subgroup, sorted by `a`.
    pub identification: Vec<(Elem, Elem)>,
}

impl AmalgamSpec {
    /// Validates that `pairing` is an isomorphism between subgroups.
    pub fn new(left: FiniteGroup, right: FiniteGroup, mut pairing: Vec<(Elem, Elem)>) -> Result<Self> {
        pairing.sort();
        pairing.dedup();
        let phi: HashMap<Elem, Elem> = pairing.iter().copied().collect();
        if phi.len() != pairing.len() {
            return Err(Error::NotIsomorphism("an element is paired twice".into()));
        }
        let a = ElemSet::from_iter(left.order(), pairing.iter().map(|p| p.0));
        let b = ElemSet::from_iter(right.order(), pairing.iter().map(|p| p.1));
        if b.len() != pairing.len() {
            return Err(Error::NotIsomorphism("pairing is not injective".into()));
        }
        if !left.is_subgroup(&a) || !right.is_subgroup(&b) {
            return Err(Error::NotIsomorphism("paired sets are not subgroups".into()));
        }
        for (&x, &px) in &phi {
            for (&y, &py) in &phi {
                if phi[&left.mul(x, y)] != right.mul(px, py) {
                    return Err(Error::NotIsomorphism(format!(
                        "products not preserved at ({}, {})",
                        left.label(x),
                        left.label(y)
                    )));
                }
            }
        }
        Ok(AmalgamSpec { left, right, identification: pairing })
    }

    /// Extends a pairing of generators to the subgroups they generate.
    pub fn from_generator_pairs(left: FiniteGroup, right: FiniteGroup, gens: &[(Elem, Elem)]) -> Result<Self> {
        let mut phi: HashMap<Elem, Elem> = HashMap::from([(left.identity(), right.identity())]);
        let mut queue = vec![left.identity()];
        while let Some(x) = queue.pop() {
            let px = phi[&x];
            for &(g, pg) in gens {
                let y = left.mul(x, g);
                let py = right.mul(px, pg);
                match phi.get(&y) {
                    Some(&old) if old != py => {
                        return Err(Error::NotIsomorphism(format!(
                            "{} would map to both {} and {}",
                            left.label(y),
                            right.label(old),
                            right.label(py)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        phi.insert(y, py);
                        queue.push(y);
                    }
                }
            }
        }
        Self::new(left, right, phi.into_iter().collect())
    }

    pub fn shared_order(&self) -> usize {
        self.identification.len()
    }
}

/// The partial group `L = G1 ∪ G2` with `D = W(G1) ∪ W(G2)`.
///
/// Left elements come first in left-group order, followed by the right
/// elements outside the shared subgroup in right-group order.
#[derive(Clone, Debug)]
pub struct Amalgam {
    spec: AmalgamSpec,
    left_of: Vec<Option<Elem>>,
    right_of: Vec<Option<Elem>>,
    from_left: Vec<Elem>,
    from_right: Vec<Elem>,
    inv: Vec<Elem>,
}

const LEFT: u8 = 1;
const RIGHT: u8 = 2;

pub fn build_amalgam(spec: AmalgamSpec) -> Amalgam {
    let (nl, nr) = (spec.left.order(), spec.right.order());
    let right_to_left: HashMap<Elem, Elem> = spec.identification.iter().map(|&(a, b)| (b, a)).collect();
    let from_left: Vec<Elem> = (0..nl).map(Elem::from).collect();
    let mut left_of: Vec<Option<Elem>> = (0..nl).map(|i| Some(Elem::from(i))).collect();
    let mut right_of: Vec<Option<Elem>> = vec![None; nl];
    let mut from_right = Vec::with_capacity(nr);
    for b in spec.right.elements() {
        match right_to_left.get(&b) {
            Some(&a) => {
                right_of[a.idx()] = Some(b);
                from_right.push(a);
            }
            None => {
                from_right.push(Elem::from(left_of.len()));
                left_of.push(None);
                right_of.push(Some(b));
            }
        }
    }
    let inv = (0..left_of.len())
        .map(|i| match (left_of[i], right_of[i]) {
            (Some(a), _) => from_left[spec.left.inv(a).idx()],
            (None, Some(b)) => from_right[spec.right.inv(b).idx()],
            (None, None) => unreachable!(),
        })
        .collect();
    Amalgam { spec, left_of, right_of, from_left, from_right, inv }
}

impl Amalgam {
    pub fn spec(&self) -> &AmalgamSpec {
        &self.spec
    }

    pub fn left_part(&self) -> ElemSet {
        ElemSet::from_iter(self.size(), self.from_left.iter().copied())
    }

    pub fn right_part(&self) -> ElemSet {
        ElemSet::from_iter(self.size(), self.from_right.iter().copied())
    }

    pub fn shared(&self) -> ElemSet {
        self.left_part().intersection(&self.right_part())
    }

    /// True when the shared subgroup is all of one factor.
    pub fn is_degenerate(&self) -> bool {
        let s = self.spec.shared_order();
        s == self.spec.left.order() || s == self.spec.right.order()
    }

    pub fn embed_left(&self, a: Elem) -> Elem {
        self.from_left[a.idx()]
    }

    pub fn embed_right(&self, b: Elem) -> Elem {
        self.from_right[b.idx()]
    }

    pub fn left_index(&self, f: Elem) -> Option<Elem> {
        self.left_of[f.idx()]
    }

    pub fn right_index(&self, f: Elem) -> Option<Elem> {
        self.right_of[f.idx()]
    }

    pub fn find_left_perm(&self, p: &Perm) -> Option<Elem> {
        self.spec.left.find_perm(p).map(|a| self.embed_left(a))
    }

    pub fn find_right_perm(&self, p: &Perm) -> Option<Elem> {
        self.spec.right.find_perm(p).map(|b| self.embed_right(b))
    }

    /// Embeds a subset of the left group.
    pub fn embed_left_set(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.size(), s.iter().map(|a| self.embed_left(a)))
    }

    pub fn embed_right_set(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.size(), s.iter().map(|b| self.embed_right(b)))
    }

    fn sides(&self, f: Elem) -> u8 {
        (if self.left_of[f.idx()].is_some() { LEFT } else { 0 })
            | (if self.right_of[f.idx()].is_some() { RIGHT } else { 0 })
    }
}

impl PartialGroup for Amalgam {
    /// Current product and the sides the word read so far lies in.
    type State = (Elem, u8);

    fn size(&self) -> usize {
        self.left_of.len()
    }

    fn identity(&self) -> Elem {
        self.from_left[self.spec.left.identity().idx()]
    }

    fn inv(&self, f: Elem) -> Elem {
        self.inv[f.idx()]
    }

    fn start(&self) -> (Elem, u8) {
        (self.identity(), LEFT | RIGHT)
    }

    fn step(&self, &(cur, mask): &(Elem, u8), f: Elem) -> Option<(Elem, u8)> {
        let m = mask & self.sides(f);
        if m & LEFT != 0 {
            let a = self.spec.left.mul(self.left_of[cur.idx()]?, self.left_of[f.idx()]?);
            Some((self.from_left[a.idx()], m))
        } else if m & RIGHT != 0 {
            let b = self.spec.right.mul(self.right_of[cur.idx()]?, self.right_of[f.idx()]?);
            Some((self.from_right[b.idx()], m))
        } else {
            None
        }
    }

    fn value(&self, state: &(Elem, u8)) -> Elem {
        state.0
    }

    fn label(&self, f: Elem) -> String {
        match (self.left_of[f.idx()], self.right_of[f.idx()]) {
            (Some(a), _) => format!("left:{}", self.spec.left.label(a)),
            (None, Some(b)) => format!("right:{}", self.spec.right.label(b)),
            (None, None) => unreachable!(),
        }
    }

    fn subgroup_certificate(&self, h: &ElemSet) -> Option<String> {
        if h.is_subset(&self.left_part()) {
            Some("contained in the left factor".into())
        } else if h.is_subset(&self.right_part()) {
            Some("contained in the right factor".into())
        } else {
            None
        }
    }
}
