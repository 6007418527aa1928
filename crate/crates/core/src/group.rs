//! Finite groups as complete multiplication tables, with subgroup-lattice
//! enumeration and the landmarks (center, Frattini subgroup, normal
//! subgroups, Sylow subgroups) needed to set up partial groups and
//! localities.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::set::{Elem, ElemSet};

/// Closures larger than this are rejected by [`generate_group`].
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Tables up to this order are checked for associativity at construction
/// even when they come from permutations.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    identity: Elem,
    mult: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<Perm>>,
}

/// A subgroup of some [`FiniteGroup`], given by its member set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup(ElemSet);

impl Subgroup {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn members(&self) -> &ElemSet {
        &self.0
    }

    pub fn into_members(self) -> ElemSet {
        self.0
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.0.contains(e)
    }
}

/// Sorts by order first, then by member list.
pub fn canonical_sort(v: &mut [Subgroup]) {
    v.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.0.cmp(&b.0)));
}

#[derive(Clone, Debug)]
pub struct Landmarks {
    pub center: Subgroup,
    pub frattini: Subgroup,
    pub normal_subgroups: Vec<Subgroup>,
}

/// Closure of `generators` under composition, with the default order cap.
pub fn generate_group(generators: &[Perm]) -> Result<FiniteGroup> {
    generate_group_capped(generators, DEFAULT_ORDER_CAP)
}

pub fn generate_group_capped(generators: &[Perm], cap: usize) -> Result<FiniteGroup> {
    let degree = generators.iter().map(Perm::degree).max().unwrap_or(0);
    let gens: Vec<Perm> = generators.iter().map(|g| g.pad_to(degree)).collect();
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut elems = vec![id];
    let mut frontier = 0;
    while frontier < elems.len() {
        let x = elems[frontier].clone();
        frontier += 1;
        for g in &gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if elems.len() >= cap {
                    return Err(Error::SizeCap { cap });
                }
                elems.push(y);
            }
        }
    }
    elems.sort();
    FiniteGroup::from_perms(elems)
}

impl FiniteGroup {
    /// Builds the table of a set of permutations that is already closed under
    /// composition. Elements keep the given order.
    pub fn from_perms(elems: Vec<Perm>) -> Result<Self> {
        let index: HashMap<&Perm, u32> = elems.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let n = elems.len();
        let mut mult = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                let c = a.then(b);
                let &k = index.get(&c).ok_or_else(|| Error::Table("permutation set is not closed".into()))?;
                mult.push(k);
            }
        }
        let identity = elems
            .iter()
            .position(Perm::is_identity)
            .ok_or_else(|| Error::Table("identity permutation missing".into()))?;
        let inv = elems.iter().map(|p| index[&p.inverse()]).collect();
        let g = FiniteGroup { order: n, identity: Elem::from(identity), mult, inv, labels: Some(elems) };
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            g.check_associative()?;
        }
        Ok(g)
    }

    /// Builds a group from an explicit Cayley table, `rows[a][b] = ab`.
    pub fn from_table(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Table("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::Table(format!("table must be {n}x{n} with entries below {n}")));
        }
        let mult: Vec<u32> = rows.iter().flatten().copied().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] as usize == x && mult[x * n + e] as usize == x))
            .ok_or_else(|| Error::Table("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mult[a * n + b] as usize == identity && mult[b * n + a] as usize == identity)
                .ok_or_else(|| Error::Table(format!("element {a} has no inverse")))?;
            inv.push(b as u32);
        }
        let g = FiniteGroup { order: n, identity: Elem::from(identity), mult, inv, labels: None };
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mult[a * n + b] as usize;
                for c in 0..n {
                    let bc = self.mult[b * n + c] as usize;
                    if self.mult[ab * n + c] != self.mult[a * n + bc] {
                        return Err(Error::Table(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem::from)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mult[a.idx() * self.order + b.idx()])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inv[a.idx()])
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn perm(&self, e: Elem) -> Option<&Perm> {
        self.labels.as_ref().map(|l| &l[e.idx()])
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        self.labels.as_deref()
    }

    pub fn find_perm(&self, p: &Perm) -> Option<Elem> {
        let labels = self.labels.as_ref()?;
        let deg = labels.first().map_or(0, Perm::degree);
        if p.degree() > deg {
            return None;
        }
        let p = p.pad_to(deg);
        labels.binary_search(&p).ok().map(Elem::from)
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e.idx()].to_string(),
            None => format!("#{}", e.0),
        }
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.order)
    }

    pub fn elem_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Least subgroup containing `seed`.
    pub fn subgroup_closure(&self, seed: &ElemSet) -> Subgroup {
        self.generated(&seed.to_vec())
    }

    fn generated(&self, gens: &[Elem]) -> Subgroup {
        let mut set = ElemSet::singleton(self.order, self.identity);
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        Subgroup(set)
    }

    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        set.contains(self.identity)
            && set.iter().all(|a| set.contains(self.inv(a)) && set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// Wraps `set` as a subgroup after checking closure.
    pub fn subgroup(&self, set: ElemSet) -> Result<Subgroup> {
        if self.is_subgroup(&set) {
            Ok(Subgroup(set))
        } else {
            Err(Error::Argument("set is not a subgroup".into()))
        }
    }

    /// Every subgroup of the subgroup `within`, sorted canonically.
    ///
    /// Every subgroup is the join of the cyclic subgroups it contains, so
    /// joining cyclic subgroups to a fixpoint reaches all of them.
    pub fn subgroups_within(&self, within: &ElemSet) -> Vec<Subgroup> {
        let mut cyclic: Vec<(Elem, ElemSet)> = Vec::new();
        let mut seen_cyclic: HashSet<ElemSet> = HashSet::new();
        for x in within.iter() {
            let c = self.generated(&[x]).0;
            if seen_cyclic.insert(c.clone()) {
                cyclic.push((x, c));
            }
        }
        let mut known: HashMap<ElemSet, Vec<Elem>> = HashMap::new();
        let mut queue: Vec<ElemSet> = Vec::new();
        for (x, c) in &cyclic {
            let gens = if *x == self.identity { vec![] } else { vec![*x] };
            known.insert(c.clone(), gens);
            queue.push(c.clone());
        }
        while let Some(h) = queue.pop() {
            let gens = known[&h].clone();
            for (x, c) in &cyclic {
                if c.is_subset(&h) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*x);
                let j = self.generated(&g2).0;
                if !known.contains_key(&j) {
                    known.insert(j.clone(), g2);
                    queue.push(j);
                }
            }
        }
        let mut out: Vec<Subgroup> = known.into_keys().map(Subgroup).collect();
        canonical_sort(&mut out);
        out
    }

    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        self.subgroups_within(&self.full())
    }

    pub fn is_normal(&self, h: &ElemSet) -> bool {
        self.elements().all(|g| h.iter().all(|x| h.contains(self.conj(x, g))))
    }

    pub fn center(&self) -> Subgroup {
        let z = ElemSet::from_iter(
            self.order,
            self.elements().filter(|&g| self.elements().all(|x| self.mul(g, x) == self.mul(x, g))),
        );
        Subgroup(z)
    }

    pub fn landmarks(&self) -> Landmarks {
        let subs = self.all_subgroups();
        let n = self.order;
        let proper: Vec<&Subgroup> = subs.iter().filter(|h| h.order() < n).collect();
        let maximal: Vec<&Subgroup> = proper
            .iter()
            .copied()
            .filter(|h| !proper.iter().any(|k| k.order() > h.order() && h.0.is_subset(&k.0)))
            .collect();
        let frattini = maximal.iter().fold(self.full(), |acc, m| acc.intersection(&m.0));
        let normal_subgroups = subs.iter().filter(|h| self.is_normal(&h.0)).cloned().collect();
        Landmarks { center: self.center(), frattini: Subgroup(frattini), normal_subgroups }
    }

    /// A Sylow `p`-subgroup: the canonically least subgroup whose order is
    /// the full `p`-part of the group order.
    pub fn sylow(&self, p: u32) -> Subgroup {
        let target = p_part(self.order, p);
        if target == 1 {
            return Subgroup(ElemSet::singleton(self.order, self.identity));
        }
        self.all_subgroups()
            .into_iter()
            .find(|h| h.order() == target)
            .expect("Sylow's theorem guarantees a subgroup of full p-power order")
    }

    /// Sub-table of the members of `h`, in member order. The second component
    /// maps new indices back to indices of `self`.
    pub fn restrict(&self, h: &Subgroup) -> (FiniteGroup, Vec<Elem>) {
        let members = h.0.to_vec();
        let pos: HashMap<Elem, u32> = members.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let n = members.len();
        let mut mult = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                mult.push(pos[&self.mul(a, b)]);
            }
        }
        let inv = members.iter().map(|&a| pos[&self.inv(a)]).collect();
        let labels = self.labels.as_ref().map(|l| members.iter().map(|e| l[e.idx()].clone()).collect());
        let g = FiniteGroup { order: n, identity: Elem(pos[&self.identity]), mult, inv, labels };
        (g, members)
    }
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: u32) -> usize {
    let p = p as usize;
    let mut n = n;
    let mut part = 1;
    while p > 1 && n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

pub fn is_power_of(n: usize, p: u32) -> bool {
    p_part(n, p) == n
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
