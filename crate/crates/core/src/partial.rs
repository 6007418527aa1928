//! Partial groups: an inversion plus a product `pi` defined on a domain `D`
//! of words.
//!
//! Every partial group in this crate is presented as a deterministic word
//! automaton. Reading a word letter by letter either dies (the word is not in
//! `D`) or ends in a state whose value is the product. `D` is never
//! materialized. Because the state space is finite, questions such as
//! "is every word over `H` in `D`?" become reachability questions and can be
//! decided exactly.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup};
use crate::par;
use crate::report::{Check, CheckReport};
use crate::set::{Elem, ElemSet};

pub trait PartialGroup: Sync {
    type State: Clone + Eq + Hash + Send + Sync;

    fn size(&self) -> usize;
    fn identity(&self) -> Elem;
    fn inv(&self, f: Elem) -> Elem;

    /// State after reading the empty word.
    fn start(&self) -> Self::State;
    /// State after appending `f`, or `None` if the extended word leaves `D`.
    fn step(&self, state: &Self::State, f: Elem) -> Option<Self::State>;
    /// Product of the word read so far.
    fn value(&self, state: &Self::State) -> Elem;

    /// Prime for p-subgroup classification, when the structure carries one.
    fn prime(&self) -> Option<u32> {
        None
    }

    fn label(&self, f: Elem) -> String {
        format!("#{}", f.0)
    }

    /// An extra sufficient certificate that `h` is a subgroup, if the
    /// structure knows one.
    fn subgroup_certificate(&self, _h: &ElemSet) -> Option<String> {
        None
    }

    fn run(&self, w: &[Elem]) -> Option<Self::State> {
        let mut st = self.start();
        for &f in w {
            st = self.step(&st, f)?;
        }
        Some(st)
    }

    fn in_domain(&self, w: &[Elem]) -> bool {
        self.run(w).is_some()
    }

    fn pi(&self, w: &[Elem]) -> Option<Elem> {
        self.run(w).map(|s| self.value(&s))
    }

    /// `pi(a, b)`; structures with a pair table answer without reading.
    fn product(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.pi(&[a, b])
    }

    fn all(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    /// `x^f = pi(f⁻¹, x, f)`, when defined.
    fn conj(&self, x: Elem, f: Elem) -> Option<Elem> {
        self.pi(&[self.inv(f), x, f])
    }

    fn set_label(&self, x: &ElemSet) -> String {
        let parts: Vec<String> = x.iter().map(|f| self.label(f)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    fn word_label(&self, w: &[Elem]) -> String {
        let parts: Vec<String> = w.iter().map(|&f| self.label(f)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl PartialGroup for FiniteGroup {
    type State = Elem;

    fn size(&self) -> usize {
        self.order()
    }
    fn identity(&self) -> Elem {
        FiniteGroup::identity(self)
    }
    fn inv(&self, f: Elem) -> Elem {
        FiniteGroup::inv(self, f)
    }
    fn start(&self) -> Elem {
        FiniteGroup::identity(self)
    }
    fn step(&self, state: &Elem, f: Elem) -> Option<Elem> {
        Some(self.mul(*state, f))
    }
    fn value(&self, state: &Elem) -> Elem {
        *state
    }
    fn label(&self, f: Elem) -> String {
        FiniteGroup::label(self, f)
    }
}

/// Reverses a word and inverts each entry.
pub fn invert_word<P: PartialGroup + ?Sized>(pg: &P, w: &[Elem]) -> Vec<Elem> {
    w.iter().rev().map(|&f| pg.inv(f)).collect()
}

/// Calls `visit` on every word of length exactly `len` that starts with `first`.
fn for_words_starting<F: FnMut(&[Elem])>(n: usize, first: Elem, len: usize, visit: &mut F) {
    let mut w = vec![first; len];
    if len == 0 {
        return;
    }
    let mut digits = vec![0usize; len - 1];
    loop {
        for (k, &d) in digits.iter().enumerate() {
            w[k + 1] = Elem::from(d);
        }
        visit(&w);
        let mut i = digits.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Calls `visit` on every word of length `1..=max_len`, fanning out over the
/// first letter. Results are concatenated in first-letter order.
pub fn sweep_words<R, F>(n: usize, max_len: usize, visit: F) -> Vec<R>
where
    R: Send,
    F: Fn(&[Elem], &mut Vec<R>) + Sync + Send,
{
    par::flat_map_range(n, |a| {
        let mut out = Vec::new();
        for len in 1..=max_len {
            for_words_starting(n, Elem::from(a), len, &mut |w| visit(w, &mut out));
        }
        out
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub word: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_check_report<P: PartialGroup + ?Sized>(&self, pg: &P) -> CheckReport {
        let mut rep = CheckReport::new();
        for axiom in AXIOMS {
            let w: Vec<String> =
                self.violations.iter().filter(|v| v.axiom == axiom).map(|v| pg.word_label(&v.word)).collect();
            rep.push(Check::from_witnesses(format!("axiom {axiom} (words of length <= {})", self.max_len), w));
        }
        rep
    }
}

pub const AX_INVOLUTION: &str = "inversion is an involutory bijection";
pub const AX_EMPTY: &str = "empty word is in D with product 1";
pub const AX_SINGLE: &str = "length-1 words are in D with product f";
pub const AX_SPLIT: &str = "u.v in D implies u, v in D";
pub const AX_ASSOC: &str = "u.v.w in D implies u.(pi v).w in D with the same product";
pub const AX_INVERSE: &str = "w in D implies w^-1.w in D with product 1";
const AXIOMS: [&str; 6] = [AX_INVOLUTION, AX_EMPTY, AX_SINGLE, AX_SPLIT, AX_ASSOC, AX_INVERSE];

/// Checks the partial-group axioms on every word of length `<= max_len`.
pub fn check_axioms<P: PartialGroup + ?Sized>(pg: &P, max_len: usize) -> Result<AxiomReport> {
    if max_len < 2 {
        return Err(Error::Argument("max_len must be at least 2".into()));
    }
    let n = pg.size();
    let one = pg.identity();
    let mut violations = Vec::new();
    let mut image = ElemSet::empty(n);
    for f in (0..n).map(Elem::from) {
        let g = pg.inv(f);
        if g.idx() >= n || pg.inv(g) != f || !image.insert(g) {
            violations.push(AxiomViolation { axiom: AX_INVOLUTION, word: vec![f] });
        }
    }
    if pg.pi(&[]) != Some(one) {
        violations.push(AxiomViolation { axiom: AX_EMPTY, word: vec![] });
    }
    let found = sweep_words(n, max_len, |w, out: &mut Vec<AxiomViolation>| {
        let Some(prod) = pg.pi(w) else {
            if w.len() == 1 {
                out.push(AxiomViolation { axiom: AX_SINGLE, word: w.to_vec() });
            }
            return;
        };
        if w.len() == 1 && prod != w[0] {
            out.push(AxiomViolation { axiom: AX_SINGLE, word: w.to_vec() });
        }
        for k in 0..=w.len() {
            if !pg.in_domain(&w[..k]) || !pg.in_domain(&w[k..]) {
                out.push(AxiomViolation { axiom: AX_SPLIT, word: w.to_vec() });
                break;
            }
        }
        'assoc: for i in 0..=w.len() {
            for j in i..=w.len() {
                let inner = pg.pi(&w[i..j]);
                let ok = inner.is_some_and(|v| {
                    let mut folded = w[..i].to_vec();
                    folded.push(v);
                    folded.extend_from_slice(&w[j..]);
                    pg.pi(&folded) == Some(prod)
                });
                if !ok {
                    out.push(AxiomViolation { axiom: AX_ASSOC, word: w.to_vec() });
                    break 'assoc;
                }
            }
        }
        let mut iw = invert_word(pg, w);
        iw.extend_from_slice(w);
        if pg.pi(&iw) != Some(one) {
            out.push(AxiomViolation { axiom: AX_INVERSE, word: w.to_vec() });
        }
    });
    violations.extend(found);
    let words_checked = (1..=max_len).map(|l| n.pow(l as u32)).sum();
    Ok(AxiomReport { max_len, words_checked, violations })
}

/// `{ pi(n1, ..., nl) : ni in factors[i], (n1, ..., nl) in D }`, enumerated
/// word by word with states shared between words that reach the same state.
pub fn subset_product<P: PartialGroup + ?Sized>(pg: &P, factors: &[ElemSet]) -> ElemSet {
    let mut level: HashSet<P::State> = HashSet::from([pg.start()]);
    for factor in factors {
        let members = factor.to_vec();
        let states: Vec<P::State> = level.into_iter().collect();
        let next = par::map(&states, |st| members.iter().filter_map(|&f| pg.step(st, f)).collect::<Vec<_>>());
        level = next.into_iter().flatten().collect();
    }
    ElemSet::from_iter(pg.size(), level.iter().map(|s| pg.value(s)))
}

/// Least partial subgroup containing `seed`: closed under inversion and
/// under products of pairs in `D` (longer words then follow from the axioms).
pub fn partial_subgroup_closure<P: PartialGroup + ?Sized>(pg: &P, seed: &ElemSet) -> ElemSet {
    let one = ElemSet::singleton(pg.size(), pg.identity());
    extend_closure(pg, &one, seed.iter())
}

/// Closure of `closed ∪ extra`, where `closed` is already a partial subgroup.
fn extend_closure<P: PartialGroup + ?Sized>(pg: &P, closed: &ElemSet, extra: impl Iterator<Item = Elem>) -> ElemSet {
    let mut set = closed.clone();
    let mut queue: Vec<Elem> = extra.filter(|&x| set.insert(x)).collect();
    while let Some(y) = queue.pop() {
        let mut fresh = vec![pg.inv(y)];
        for c in set.iter() {
            fresh.extend(pg.product(c, y));
            fresh.extend(pg.product(y, c));
        }
        for z in fresh {
            if set.insert(z) {
                queue.push(z);
            }
        }
    }
    set
}

/// All partial subgroups containing `k`, sorted by size and then by members.
/// Each one is reached from the closure of `k` by adding one element at a
/// time. Fails with a size-cap error once more than `cap` are found.
pub fn partial_subgroups_containing<P: PartialGroup + ?Sized>(pg: &P, k: &ElemSet, cap: usize) -> Result<Vec<ElemSet>> {
    let base = partial_subgroup_closure(pg, k);
    let mut family: std::collections::BTreeSet<ElemSet> = std::collections::BTreeSet::from([base.clone()]);
    let mut fresh = vec![base];
    while !fresh.is_empty() {
        let grown = par::map(&fresh, |h| {
            let mut out: Vec<ElemSet> =
                pg.all().difference(h).iter().map(|e| extend_closure(pg, h, std::iter::once(e))).collect();
            out.sort();
            out.dedup();
            out
        });
        fresh = grown.into_iter().flatten().filter(|j| family.insert(j.clone())).collect();
        if family.len() > cap {
            return Err(Error::SizeCap { cap });
        }
    }
    let mut out: Vec<ElemSet> = family.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SubgroupCriterion {
    /// Every state reachable by reading letters of the set is alive.
    ReachableStates,
}

#[derive(Clone, Debug)]
pub struct SubgroupVerdict {
    pub is_subgroup: bool,
    pub criterion: SubgroupCriterion,
    /// A word over the set that is not in `D`, when the verdict is negative.
    pub counterexample: Option<Vec<Elem>>,
    /// Additional certificate offered by the structure (e.g. a normalizer).
    pub certificate: Option<String>,
}

/// Decides whether every word over `h` lies in `D` by exploring the states
/// reachable from the empty word through letters of `h`.
pub fn subgroup_verdict<P: PartialGroup + ?Sized>(pg: &P, h: &ElemSet) -> SubgroupVerdict {
    let letters = h.to_vec();
    let mut parent: HashMap<P::State, Option<(P::State, Elem)>> = HashMap::new();
    let start = pg.start();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut counterexample = None;
    'bfs: while let Some(st) = queue.pop_front() {
        for &f in &letters {
            match pg.step(&st, f) {
                Some(next) => {
                    if !parent.contains_key(&next) {
                        parent.insert(next.clone(), Some((st.clone(), f)));
                        queue.push_back(next);
                    }
                }
                None => {
                    let mut word = vec![f];
                    let mut cur = st.clone();
                    while let Some(Some((prev, g))) = parent.get(&cur) {
                        word.push(*g);
                        cur = prev.clone();
                    }
                    word.reverse();
                    counterexample = Some(word);
                    break 'bfs;
                }
            }
        }
    }
    let is_subgroup = counterexample.is_none();
    SubgroupVerdict {
        is_subgroup,
        criterion: SubgroupCriterion::ReachableStates,
        counterexample,
        certificate: if is_subgroup { pg.subgroup_certificate(h) } else { None },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetKind {
    NotClosed,
    PartialSubgroup,
    Subgroup,
    PSubgroup,
    PartialNormal,
}

/// A subset together with its classification.
#[derive(Clone, Debug)]
pub struct SubsetHandle {
    pub members: ElemSet,
    pub partial_subgroup: bool,
    pub subgroup: Option<SubgroupVerdict>,
    pub p_subgroup: bool,
    pub partial_normal: bool,
    /// A pair `(x, f)` with `x^f` defined and outside the set, when the set is
    /// a partial subgroup that is not partial normal.
    pub conjugation_witness: Option<(Elem, Elem)>,
}

impl SubsetHandle {
    pub fn is_subgroup(&self) -> bool {
        self.subgroup.as_ref().is_some_and(|v| v.is_subgroup)
    }

    /// Strongest applicable label; partial normality takes precedence.
    pub fn kind(&self) -> SubsetKind {
        if self.partial_normal {
            SubsetKind::PartialNormal
        } else if self.p_subgroup {
            SubsetKind::PSubgroup
        } else if self.is_subgroup() {
            SubsetKind::Subgroup
        } else if self.partial_subgroup {
            SubsetKind::PartialSubgroup
        } else {
            SubsetKind::NotClosed
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partial-subgroup test: nonempty, contains 1, closed under inversion and
/// under products of pairs in `D`.
pub fn is_partial_subgroup<P: PartialGroup + ?Sized>(pg: &P, x: &ElemSet) -> bool {
    !x.is_empty()
        && x.contains(pg.identity())
        && x.iter().all(|a| x.contains(pg.inv(a)) && x.iter().all(|b| pg.product(a, b).is_none_or(|c| x.contains(c))))
}

/// First `(x, f)` with `x in set`, `(f⁻¹, x, f) in D` and `x^f` outside the set.
pub fn conjugation_escape<P: PartialGroup + ?Sized>(pg: &P, x: &ElemSet) -> Option<(Elem, Elem)> {
    let members = x.to_vec();
    let found = par::map_range(pg.size(), |fi| {
        let f = Elem::from(fi);
        members.iter().find(|&&m| pg.conj(m, f).is_some_and(|c| !x.contains(c))).map(|&m| (m, f))
    });
    found.into_iter().flatten().next()
}

pub fn classify_subset<P: PartialGroup + ?Sized>(pg: &P, x: &ElemSet) -> Result<SubsetHandle> {
    if x.is_empty() {
        return Err(Error::Argument("cannot classify the empty subset".into()));
    }
    let partial_subgroup = is_partial_subgroup(pg, x);
    let subgroup = partial_subgroup.then(|| subgroup_verdict(pg, x));
    let is_sub = subgroup.as_ref().is_some_and(|v| v.is_subgroup);
    let p_subgroup = is_sub && pg.prime().is_some_and(|p| group::is_power_of(x.len(), p));
    let conjugation_witness = if partial_subgroup { conjugation_escape(pg, x) } else { None };
    Ok(SubsetHandle {
        members: x.clone(),
        partial_subgroup,
        subgroup,
        p_subgroup,
        partial_normal: partial_subgroup && conjugation_witness.is_none(),
        conjugation_witness,
    })
}

/// Groups a partial subgroup `h` with `W(h) ⊆ D` into a [`FiniteGroup`]. The
/// second component maps the group's indices back to `pg`.
pub fn subgroup_as_group<P: PartialGroup + ?Sized>(pg: &P, h: &ElemSet) -> Result<(FiniteGroup, Vec<Elem>)> {
    let members = h.to_vec();
    let pos: HashMap<Elem, u32> = members.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let mut rows = Vec::with_capacity(members.len());
    for &a in &members {
        let mut row = Vec::with_capacity(members.len());
        for &b in &members {
            let c = pg
                .pi(&[a, b])
                .and_then(|c| pos.get(&c).copied())
                .ok_or_else(|| Error::Argument("set is not closed under the product".into()))?;
            row.push(c);
        }
        rows.push(row);
    }
    Ok((FiniteGroup::from_table(&rows)?, members))
}

#[derive(Clone, Debug)]
pub struct DedekindReport {
    /// `A ∩ (HK)` versus `(A ∩ H)K`.
    pub right: (ElemSet, ElemSet),
    /// `A ∩ (KH)` versus `K(A ∩ H)`.
    pub left: (ElemSet, ElemSet),
}

impl DedekindReport {
    pub fn passed(&self) -> bool {
        self.right.0 == self.right.1 && self.left.0 == self.left.1
    }

    /// Elements in exactly one side of a failing identity.
    pub fn witnesses(&self) -> Vec<Elem> {
        let mut w: Vec<Elem> = Vec::new();
        for (a, b) in [&self.right, &self.left] {
            w.extend(a.difference(b).iter());
            w.extend(b.difference(a).iter());
        }
        w
    }
}

/// Checks `A ∩ (HK) = (A ∩ H)K` and `A ∩ (KH) = K(A ∩ H)` for a partial
/// subgroup `A` containing `K`.
pub fn dedekind_verify<P: PartialGroup + ?Sized>(
    pg: &P,
    a: &SubsetHandle,
    h: &ElemSet,
    k: &ElemSet,
) -> Result<DedekindReport> {
    if !a.partial_subgroup {
        return Err(Error::Argument("A must be a partial subgroup".into()));
    }
    if !k.is_subset(&a.members) {
        return Err(Error::Argument("K must be contained in A".into()));
    }
    let ah = a.members.intersection(h);
    let hk = subset_product(pg, &[h.clone(), k.clone()]);
    let kh = subset_product(pg, &[k.clone(), h.clone()]);
    Ok(DedekindReport {
        right: (a.members.intersection(&hk), subset_product(pg, &[ah.clone(), k.clone()])),
        left: (a.members.intersection(&kh), subset_product(pg, &[k.clone(), ah])),
    })
}
