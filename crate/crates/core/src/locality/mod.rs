//! Localities `(L, Δ, S)`.
//!
//! A [`Locality`] is stored as tables: inversion, the binary product where
//! defined, and for every `g` the partial map `s ↦ s^g` on `S_g`. A word
//! `w` lies in `D` iff `S_w ∈ Δ`, where `S_w` is computed by threading the
//! elements of `S` through `w`. Whether the tables really form a locality is
//! decided by [`check_locality`], never assumed.

mod build;
mod check;

pub use build::{delta_close, delta_min_order, locality_from_group, DeltaFamily};
pub use check::{check_locality, delta_conjugation_table, CHAIN_CHECK, MAXIMAL_S_CHECK, OVERGROUP_CHECK};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::partial::{classify_subset, subgroup_as_group, PartialGroup, SubsetHandle};
use crate::perm::Perm;
use crate::report::CheckReport;
use crate::set::{Elem, ElemSet};

/// Largest supported `|S|`; subsets of `S` are handled as `u32` masks.
pub const MAX_S: usize = 32;
const NO8: u8 = u8::MAX;
const NO32: u32 = u32::MAX;

/// Plain-data form of a locality, used for model files and round trips.
/// Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityTables {
    pub prime: u32,
    pub inv: Vec<u32>,
    pub mult: Vec<Vec<Option<u32>>>,
    pub s: Vec<u32>,
    pub delta: Vec<Vec<u32>>,
    /// `sconj[g][i]` is `s^g` for the `i`-th element `s` of `S`, when `s ∈ S_g`.
    pub sconj: Vec<Vec<Option<u32>>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Locality {
    prime: u32,
    inv: Vec<Elem>,
    mult: Vec<u32>,
    /// Products of pairs, read through the automaton once at construction.
    pairs: Vec<u32>,
    /// `conjugates[x * n + f]` is `x^f` when `(f⁻¹, x, f) ∈ D`.
    conjugates: Vec<u32>,
    s_set: ElemSet,
    s_elems: Vec<Elem>,
    s_local: Vec<u8>,
    delta: Vec<ElemSet>,
    delta_masks: Vec<u32>,
    sconj: Vec<u8>,
    labels: Vec<String>,
    perms: Option<Vec<Perm>>,
    delta_normalizers: Vec<ElemSet>,
}

/// Reading state: current product, and for each `s ∈ S` still threading, the
/// local index of its current image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocState {
    pub(crate) cur: Elem,
    /// `S_w` of the word read so far, over local indices of `S`.
    pub(crate) dom: u32,
    pub(crate) phi: [u8; MAX_S],
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

impl Locality {
    pub fn from_tables(t: &LocalityTables) -> Result<Self> {
        let n = t.inv.len();
        let bad = |m: &str| Err(Error::Table(m.to_string()));
        if n == 0 {
            return bad("empty element set");
        }
        if t.mult.len() != n || t.mult.iter().any(|r| r.len() != n) {
            return bad("product table must be n x n");
        }
        let k = t.s.len();
        if k == 0 || k > MAX_S {
            return Err(Error::Argument(format!("|S| must be between 1 and {MAX_S}")));
        }
        if !crate::group::is_prime(t.prime) {
            return bad("prime is not prime");
        }
        let in_range = |x: u32| (x as usize) < n;
        if !t.inv.iter().copied().all(in_range) || !t.s.iter().copied().all(in_range) {
            return bad("element index out of range");
        }
        if t.mult.iter().flatten().flatten().any(|&x| !in_range(x)) {
            return bad("product entry out of range");
        }
        let s_elems: Vec<Elem> = t.s.iter().map(|&x| Elem(x)).collect();
        let s_set = ElemSet::from_iter(n, s_elems.iter().copied());
        if s_set.len() != k || !s_set.contains(Elem(0)) {
            return bad("S must be duplicate-free and contain the identity 0");
        }
        let mut s_local = vec![NO8; n];
        for (i, s) in s_elems.iter().enumerate() {
            s_local[s.idx()] = i as u8;
        }
        if t.sconj.len() != n || t.sconj.iter().any(|r| r.len() != k) {
            return bad("conjugation table must be n x |S|");
        }
        let mut sconj = vec![NO8; n * k];
        for (g, row) in t.sconj.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    let j = s_local.get(*v as usize).copied().unwrap_or(NO8);
                    if j == NO8 {
                        return bad("conjugation table leaves S");
                    }
                    sconj[g * k + i] = j;
                }
            }
        }
        let mut delta = Vec::with_capacity(t.delta.len());
        for members in &t.delta {
            let set = ElemSet::from_iter(n, members.iter().map(|&x| Elem(x)));
            if !set.is_subset(&s_set) {
                return bad("member of Delta is not inside S");
            }
            delta.push(set);
        }
        delta.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        delta.dedup();
        let labels = if t.labels.len() == n { t.labels.clone() } else { (0..n).map(|i| format!("#{i}")).collect() };
        let mult = t.mult.iter().flatten().map(|v| v.unwrap_or(NO32)).collect();
        let mut loc = Locality {
            prime: t.prime,
            inv: t.inv.iter().map(|&x| Elem(x)).collect(),
            mult,
            pairs: Vec::new(),
            conjugates: Vec::new(),
            s_set,
            s_elems,
            s_local,
            delta_masks: Vec::new(),
            delta,
            sconj,
            labels,
            perms: None,
            delta_normalizers: Vec::new(),
        };
        let mut masks: Vec<u32> = loc.delta.iter().map(|p| loc.mask(p).unwrap_or(0)).collect();
        masks.sort_unstable();
        loc.delta_masks = masks;
        loc.pairs = (0..n * n)
            .map(|ab| loc.run(&[Elem::from(ab / n), Elem::from(ab % n)]).map_or(NO32, |st| st.cur.0))
            .collect();
        loc.conjugates = (0..n * n)
            .map(|xf| {
                let (x, f) = (Elem::from(xf / n), Elem::from(xf % n));
                loc.run(&[loc.inv(f), x, f]).map_or(NO32, |st| st.cur.0)
            })
            .collect();
        loc.delta_normalizers = loc.delta.iter().map(|p| normalizer(&loc, p)).collect();
        Ok(loc)
    }

    pub fn to_tables(&self) -> LocalityTables {
        let n = self.size();
        let k = self.s_elems.len();
        LocalityTables {
            prime: self.prime,
            inv: self.inv.iter().map(|e| e.0).collect(),
            mult: (0..n).map(|a| (0..n).map(|b| Some(self.mult[a * n + b]).filter(|&c| c != NO32)).collect()).collect(),
            s: self.s_elems.iter().map(|e| e.0).collect(),
            delta: self.delta.iter().map(|p| p.iter().map(|e| e.0).collect()).collect(),
            sconj: (0..n)
                .map(|g| (0..k).map(|i| self.sconj_local(Elem::from(g), i).map(|j| self.s_elems[j].0)).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub(crate) fn with_perms(mut self, perms: Vec<Perm>) -> Self {
        self.perms = Some(perms);
        self
    }

    pub fn perm(&self, f: Elem) -> Option<&Perm> {
        self.perms.as_ref().map(|p| &p[f.idx()])
    }

    pub fn find_perm(&self, p: &Perm) -> Option<Elem> {
        let perms = self.perms.as_ref()?;
        perms.iter().position(|q| q.images() == p.pad_to(q.degree()).images()).map(Elem::from)
    }

    pub fn find_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(Elem::from)
    }

    pub fn prime_p(&self) -> u32 {
        self.prime
    }

    pub fn s(&self) -> &ElemSet {
        &self.s_set
    }

    pub fn s_elems(&self) -> &[Elem] {
        &self.s_elems
    }

    pub fn delta(&self) -> &[ElemSet] {
        &self.delta
    }

    /// Bitmask of a subset of `S` over local indices.
    pub fn mask(&self, x: &ElemSet) -> Option<u32> {
        let mut m = 0;
        for e in x.iter() {
            let i = self.s_local[e.idx()];
            if i == NO8 {
                return None;
            }
            m |= 1 << i;
        }
        Some(m)
    }

    pub fn unmask(&self, m: u32) -> ElemSet {
        ElemSet::from_iter(self.size(), bits(m).map(|i| self.s_elems[i]))
    }

    fn delta_has_mask(&self, m: u32) -> bool {
        self.delta_masks.binary_search(&m).is_ok()
    }

    pub fn in_delta(&self, x: &ElemSet) -> bool {
        self.mask(x).is_some_and(|m| self.delta_has_mask(m))
    }

    fn sconj_local(&self, g: Elem, i: usize) -> Option<usize> {
        let j = self.sconj[g.idx() * self.s_elems.len() + i];
        (j != NO8).then_some(j as usize)
    }

    /// `s^g` as recorded in the conjugation table, for `s ∈ S_g`.
    pub fn sconj(&self, g: Elem, s: Elem) -> Option<Elem> {
        let i = self.s_local[s.idx()];
        if i == NO8 {
            return None;
        }
        self.sconj_local(g, i as usize).map(|j| self.s_elems[j])
    }

    /// The elements of `S` that survive conjugation along `w`, as a mask,
    /// together with their final images. `Δ` plays no role here.
    fn thread(&self, w: &[Elem]) -> (u32, [u8; MAX_S]) {
        let k = self.s_elems.len();
        let mut dom = full_mask(k);
        let mut phi = [NO8; MAX_S];
        for (i, p) in phi.iter_mut().enumerate().take(k) {
            *p = i as u8;
        }
        for &f in w {
            for i in bits(dom) {
                match self.sconj_local(f, phi[i] as usize) {
                    Some(j) => phi[i] = j as u8,
                    None => {
                        dom &= !(1 << i);
                        phi[i] = NO8;
                    }
                }
            }
        }
        (dom, phi)
    }

    /// Image of a subset of `S_g` (as a mask) under conjugation by `g`.
    pub fn image_mask(&self, m: u32, g: Elem) -> Option<u32> {
        let mut out = 0;
        for i in bits(m) {
            out |= 1 << self.sconj_local(g, i)?;
        }
        Some(out)
    }

    /// Masks of the members of `Δ`, in the order of [`Locality::delta`].
    pub fn delta_mask_list(&self) -> Vec<u32> {
        self.delta.iter().map(|p| self.mask(p).unwrap()).collect()
    }

    /// `S_w` as a mask over local indices of `S`.
    pub fn s_mask_of_word(&self, w: &[Elem]) -> u32 {
        self.thread(w).0
    }

    /// `S_w`: the `s ∈ S` that can be conjugated successively by the entries
    /// of `w` with every intermediate result in `S`.
    pub fn s_of_word(&self, w: &[Elem]) -> ElemSet {
        self.unmask(self.thread(w).0)
    }

    pub fn s_of(&self, g: Elem) -> ElemSet {
        self.s_of_word(&[g])
    }

    /// Image of a subset of `S_w` under conjugation along `w`.
    pub fn image_along(&self, x: &ElemSet, w: &[Elem]) -> Option<ElemSet> {
        let m = self.mask(x)?;
        let (dom, phi) = self.thread(w);
        (m & !dom == 0).then(|| ElemSet::from_iter(self.size(), bits(m).map(|i| self.s_elems[phi[i] as usize])))
    }

    /// A chain witnessing `w ∈ D`, starting at `P_0 = S_w`.
    pub fn domain_chain(&self, w: &[Elem]) -> Option<ConjChain> {
        let p0 = self.s_of_word(w);
        if !self.in_delta(&p0) {
            return None;
        }
        let mut stations = vec![p0];
        for &f in w {
            let next = self.image_along(stations.last().unwrap(), &[f])?;
            stations.push(next);
        }
        Some(ConjChain { word: w.to_vec(), stations })
    }

    pub fn conjugate_elem(&self, x: Elem, g: Elem) -> Option<Elem> {
        self.conj(x, g)
    }

    pub fn normalizer_in_l(&self, x: &ElemSet) -> Result<SubsetHandle> {
        if !x.is_subset(&self.s_set) {
            return Err(Error::Argument("X must be a subset of S".into()));
        }
        classify_subset(self, &normalizer(self, x))
    }

    /// `N_L(P)` for `P ∈ Δ` as a group, with the map back into `L`.
    pub fn normalizer_group(&self, p: &ElemSet) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.in_delta(p) {
            return Err(Error::Argument("P must be a member of Delta".into()));
        }
        subgroup_as_group(self, &normalizer(self, p))
    }

    /// Conjugation `c_g : N_L(P) → N_L(P^g)` for `P ∈ Δ` with `P ⊆ S_g`.
    pub fn conj_iso(&self, p: &ElemSet, g: Elem) -> Result<ConjIso> {
        if !self.in_delta(p) {
            return Err(Error::Argument("P must be a member of Delta".into()));
        }
        let q = self
            .image_along(p, &[g])
            .ok_or_else(|| Error::Argument(format!("P is not contained in S_g for g = {}", self.label(g))))?;
        let source = normalizer(self, p);
        let target = normalizer(self, &q);
        let map: Vec<(Elem, Option<Elem>)> = source.iter().map(|x| (x, self.conj(x, g))).collect();
        let image = ElemSet::from_iter(self.size(), map.iter().filter_map(|m| m.1));
        let bijective = map.iter().all(|m| m.1.is_some()) && image == target && image.len() == source.len();
        let lookup = |x: Elem| map.iter().find(|m| m.0 == x).and_then(|m| m.1);
        let homomorphism = bijective
            && source.iter().all(|x| {
                source.iter().all(|y| {
                    let xy = self.pi(&[x, y]);
                    let lhs = xy.and_then(lookup);
                    let rhs = self.pi(&[lookup(x).unwrap(), lookup(y).unwrap()]);
                    lhs.is_some() && lhs == rhs
                })
            });
        Ok(ConjIso {
            q_in_delta: self.in_delta(&q),
            p: p.clone(),
            g,
            q,
            source,
            target,
            map: map.into_iter().filter_map(|(x, y)| y.map(|y| (x, y))).collect(),
            bijective,
            homomorphism,
        })
    }

    /// Elements `x ∈ N_L(P_0)` for which conjugating by the entries of `w` one
    /// at a time differs from conjugating by `Π(w)`. Requires `w ∈ D` via a
    /// chain starting at `P_0`.
    pub fn conj_composition_failures(&self, w: &[Elem], p0: &ElemSet) -> Result<Vec<Elem>> {
        if !self.in_delta(p0) || !p0.is_subset(&self.s_of_word(w)) {
            return Err(Error::Argument("word is not in D via a chain from P0".into()));
        }
        let prod = self.pi(w).ok_or_else(|| Error::Argument("word is not in D".into()))?;
        let mut bad = Vec::new();
        for x in normalizer(self, p0).iter() {
            let stepwise = w.iter().try_fold(x, |y, &g| self.conj(y, g));
            if stepwise.is_none() || stepwise != self.conj(x, prod) {
                bad.push(x);
            }
        }
        Ok(bad)
    }

    pub fn check(&self, max_len: usize) -> Result<CheckReport> {
        check_locality(self, &self.s_set, &self.delta, self.prime, max_len)
    }

    /// Raw binary product table entry, bypassing the `Δ` test.
    pub fn table_product(&self, a: Elem, b: Elem) -> Option<Elem> {
        let c = self.mult[a.idx() * self.size() + b.idx()];
        (c != NO32).then_some(Elem(c))
    }
}

fn full_mask(k: usize) -> u32 {
    if k == 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// `N_L(X) = {f : X ⊆ D(f), X^f = X}`, with `D(f)` read off the product.
pub fn normalizer<P: PartialGroup + ?Sized>(pg: &P, x: &ElemSet) -> ElemSet {
    let members = x.to_vec();
    let keep = crate::par::map_range(pg.size(), |fi| {
        let f = Elem::from(fi);
        let mut image = ElemSet::empty(pg.size());
        for &m in &members {
            match pg.conj(m, f) {
                Some(c) if x.contains(c) => {
                    image.insert(c);
                }
                _ => return None,
            }
        }
        (image.len() == members.len()).then_some(f)
    });
    ElemSet::from_iter(pg.size(), keep.into_iter().flatten())
}

impl PartialGroup for Locality {
    type State = LocState;

    fn size(&self) -> usize {
        self.inv.len()
    }

    fn identity(&self) -> Elem {
        Elem(0)
    }

    fn product(&self, a: Elem, b: Elem) -> Option<Elem> {
        let c = self.pairs[a.idx() * self.size() + b.idx()];
        (c != NO32).then_some(Elem(c))
    }

    fn conj(&self, x: Elem, f: Elem) -> Option<Elem> {
        let c = self.conjugates[x.idx() * self.size() + f.idx()];
        (c != NO32).then_some(Elem(c))
    }

    fn inv(&self, f: Elem) -> Elem {
        self.inv[f.idx()]
    }

    fn start(&self) -> LocState {
        let k = self.s_elems.len();
        let mut phi = [NO8; MAX_S];
        for (i, p) in phi.iter_mut().enumerate().take(k) {
            *p = i as u8;
        }
        LocState { cur: Elem(0), dom: full_mask(k), phi }
    }

    fn step(&self, st: &LocState, f: Elem) -> Option<LocState> {
        let k = self.s_elems.len();
        let mut phi = [NO8; MAX_S];
        let mut dom = 0;
        for i in bits(st.dom) {
            let j = self.sconj[f.idx() * k + st.phi[i] as usize];
            if j != NO8 {
                phi[i] = j;
                dom |= 1 << i;
            }
        }
        if !self.delta_has_mask(dom) {
            return None;
        }
        let c = self.mult[st.cur.idx() * self.size() + f.idx()];
        (c != NO32).then_some(LocState { cur: Elem(c), dom, phi })
    }

    fn value(&self, st: &LocState) -> Elem {
        st.cur
    }

    fn prime(&self) -> Option<u32> {
        Some(self.prime)
    }

    fn label(&self, f: Elem) -> String {
        self.labels[f.idx()].clone()
    }

    fn subgroup_certificate(&self, h: &ElemSet) -> Option<String> {
        self.delta
            .iter()
            .zip(&self.delta_normalizers)
            .find(|(_, n)| h.is_subset(n))
            .map(|(p, _)| format!("contained in N_L(P) for P = {}", self.set_label(p)))
    }
}

/// `P_0, ..., P_n ∈ Δ` with `P_{i-1} ⊆ D(f_i)` and `P_{i-1}^{f_i} = P_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjChain {
    pub word: Vec<Elem>,
    pub stations: Vec<ElemSet>,
}

impl ConjChain {
    /// Re-checks every link using only the product of `pg`.
    pub fn is_valid<P: PartialGroup + ?Sized>(&self, pg: &P, delta: &[ElemSet]) -> bool {
        if self.stations.len() != self.word.len() + 1 || !self.stations.iter().all(|p| delta.contains(p)) {
            return false;
        }
        self.word.iter().zip(self.stations.windows(2)).all(|(&f, pq)| {
            let image: Option<Vec<Elem>> = pq[0].iter().map(|x| pg.conj(x, f)).collect();
            image.is_some_and(|im| ElemSet::from_iter(pg.size(), im) == pq[1])
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConjIso {
    pub p: ElemSet,
    pub g: Elem,
    pub q: ElemSet,
    pub q_in_delta: bool,
    pub source: ElemSet,
    pub target: ElemSet,
    pub map: Vec<(Elem, Elem)>,
    pub bijective: bool,
    pub homomorphism: bool,
}

impl ConjIso {
    pub fn passed(&self) -> bool {
        self.q_in_delta && self.bijective && self.homomorphism
    }
}
