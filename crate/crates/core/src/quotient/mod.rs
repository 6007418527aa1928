//! Quotients `L/K` of a locality by a partial normal subgroup `K`.
//!
//! Elements of the quotient are the maximal cosets of `K`. For `f` maximal
//! under the preorder `↑_K` on pairs `(f, P)` with `P ∈ Δ`, `P ≤ S_f`, the
//! coset `Kf` is maximal, and every maximal coset arises this way. The quotient product is computed from
//! `↑_K`-maximal representatives, and every property the construction relies
//! on is checked on the instance.

mod lemmas;

pub use lemmas::verify_quotient_lemmas;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::locality::{check_locality, Locality, LocalityTables};
use crate::normal::is_partial_normal;
use crate::par;
use crate::partial::PartialGroup;
use crate::report::{Check, CheckReport};
use crate::set::{Elem, ElemSet};

/// Shared precomputation for questions about `↑_K`.
pub struct UpContext<'a> {
    loc: &'a Locality,
    k: ElemSet,
    k_list: Vec<Elem>,
    s_masks: Vec<u32>,
    delta_masks: Vec<u32>,
}

impl<'a> UpContext<'a> {
    pub fn new(loc: &'a Locality, k: &ElemSet) -> Result<Self> {
        if k.universe() != loc.size() || !is_partial_normal(loc, k)?.is_partial_normal {
            return Err(Error::Argument("K is not a partial normal subgroup".into()));
        }
        Ok(UpContext {
            loc,
            k: k.clone(),
            k_list: k.to_vec(),
            s_masks: (0..loc.size()).map(|f| loc.s_mask_of_word(&[Elem::from(f)])).collect(),
            delta_masks: loc.delta_mask_list(),
        })
    }

    pub fn kernel(&self) -> &ElemSet {
        &self.k
    }

    fn transporter_mask(&self, p: u32, q: u32) -> impl Iterator<Item = Elem> + '_ {
        self.k_list.iter().copied().filter(move |&x| self.loc.image_mask(p, x).is_some_and(|im| im & !q == 0))
    }

    /// `N_K(P, Q) = {x ∈ K : P ⊆ D(x), P^x ≤ Q}` for `P, Q ≤ S`.
    pub fn transporter(&self, p: &ElemSet, q: &ElemSet) -> Result<ElemSet> {
        let (Some(pm), Some(qm)) = (self.loc.mask(p), self.loc.mask(q)) else {
            return Err(Error::Argument("P and Q must be subsets of S".into()));
        };
        Ok(ElemSet::from_iter(self.loc.size(), self.transporter_mask(pm, qm)))
    }

    fn is_pair(&self, f: Elem, p: u32) -> bool {
        self.delta_masks.contains(&p) && p & !self.s_masks[f.idx()] == 0
    }

    fn relates_mask(&self, f: Elem, p: u32, g: Elem, q: u32) -> Option<(Elem, Elem)> {
        let pf = self.loc.image_mask(p, f)?;
        let qg = self.loc.image_mask(q, g)?;
        for x in self.transporter_mask(p, q) {
            let Some(xg) = self.loc.pi(&[x, g]) else { continue };
            for y in self.transporter_mask(pf, qg) {
                if self.loc.pi(&[f, y]) == Some(xg) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// A witness `(x, y)` for `(f, P) ↑_K (g, Q)`, if there is one.
    pub fn up_relates(&self, f: Elem, p: &ElemSet, g: Elem, q: &ElemSet) -> Result<Option<(Elem, Elem)>> {
        let (Some(pm), Some(qm)) = (self.loc.mask(p), self.loc.mask(q)) else {
            return Err(Error::Argument("P and Q must be subsets of S".into()));
        };
        if !self.is_pair(f, pm) || !self.is_pair(g, qm) {
            return Err(Error::Argument("pairs must satisfy P in Delta and P <= S_f".into()));
        }
        Ok(self.relates_mask(f, pm, g, qm))
    }

    /// Whether `(g, Q) ↑_K (f, S_f)`, searching `x'` and solving for `y'`.
    fn returns_to(&self, g: Elem, q: u32, f: Elem) -> bool {
        let sf = self.s_masks[f.idx()];
        let Some(target) = self.loc.image_mask(sf, f) else { return false };
        let Some(qg) = self.loc.image_mask(q, g) else { return false };
        let g_inv = self.loc.inv(g);
        self.transporter_mask(q, sf).any(|x| {
            let Some(h) = self.loc.pi(&[x, f]) else { return false };
            let Some(y) = self.loc.pi(&[g_inv, h]) else { return false };
            self.k.contains(y)
                && self.loc.pi(&[g, y]) == Some(h)
                && self.loc.image_mask(qg, y).is_some_and(|im| im & !target == 0)
        })
    }

    /// `f` is `↑_K`-maximal if every `(g, Q)` above `(f, S_f)` is also below it.
    pub fn is_up_maximal(&self, f: Elem) -> bool {
        let loc = self.loc;
        let sf = self.s_masks[f.idx()];
        let Some(sff) = loc.image_mask(sf, f) else { return false };
        let mut cache: HashMap<(Elem, u32), bool> = HashMap::new();
        for &x in &self.k_list {
            let Some(sfx) = loc.image_mask(sf, x) else { continue };
            let x_inv = loc.inv(x);
            for &y in &self.k_list {
                let Some(sffy) = loc.image_mask(sff, y) else { continue };
                let Some(fy) = loc.pi(&[f, y]) else { continue };
                let Some(g) = loc.pi(&[x_inv, fy]) else { continue };
                if loc.pi(&[x, g]) != Some(fy) {
                    continue;
                }
                let sg = self.s_masks[g.idx()];
                for &q in &self.delta_masks {
                    if sfx & !q != 0 || q & !sg != 0 {
                        continue;
                    }
                    let Some(qg) = loc.image_mask(q, g) else { continue };
                    if sffy & !qg != 0 {
                        continue;
                    }
                    // Nothing in K conjugates a larger Q back into S_f.
                    if q.count_ones() > sf.count_ones() {
                        return false;
                    }
                    let back = *cache.entry((g, q)).or_insert_with(|| self.returns_to(g, q, f));
                    if !back {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `Kf = {kf : k ∈ K, (k, f) ∈ D}`.
    pub fn coset(&self, f: Elem) -> ElemSet {
        ElemSet::from_iter(self.loc.size(), self.k_list.iter().filter_map(|&k| self.loc.pi(&[k, f])))
    }

    /// `fK = {fk : k ∈ K, (f, k) ∈ D}`.
    pub fn left_coset(&self, f: Elem) -> ElemSet {
        ElemSet::from_iter(self.loc.size(), self.k_list.iter().filter_map(|&k| self.loc.pi(&[f, k])))
    }
}

pub fn transporter_in_k(loc: &Locality, k: &ElemSet, p: &ElemSet, q: &ElemSet) -> Result<ElemSet> {
    UpContext::new(loc, k)?.transporter(p, q)
}

pub fn up_relates(
    loc: &Locality,
    k: &ElemSet,
    a: (Elem, &ElemSet),
    b: (Elem, &ElemSet),
) -> Result<Option<(Elem, Elem)>> {
    UpContext::new(loc, k)?.up_relates(a.0, a.1, b.0, b.1)
}

pub fn is_up_maximal(loc: &Locality, k: &ElemSet, f: Elem) -> Result<bool> {
    Ok(UpContext::new(loc, k)?.is_up_maximal(f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRecord {
    /// Least element `f` with this coset equal to `Kf`.
    pub base: Elem,
    pub members: ElemSet,
    pub is_maximal: bool,
}

#[derive(Clone, Debug)]
pub struct CosetAnalysis {
    /// Maximal cosets, sorted by least member.
    pub cosets: Vec<CosetRecord>,
    /// Number of distinct cosets `Kf`, maximal or not.
    pub distinct_cosets: usize,
    pub up_maximal: ElemSet,
    pub report: CheckReport,
}

pub fn maximal_cosets(loc: &Locality, k: &ElemSet) -> Result<CosetAnalysis> {
    let ctx = UpContext::new(loc, k)?;
    Ok(analyse_cosets(&ctx))
}

fn analyse_cosets(ctx: &UpContext) -> CosetAnalysis {
    let loc = ctx.loc;
    let n = loc.size();
    let per_f = par::map_range(n, |f| {
        let f = Elem::from(f);
        (ctx.coset(f), ctx.is_up_maximal(f))
    });
    let mut distinct: Vec<(ElemSet, Elem)> = Vec::new();
    for (f, (c, _)) in per_f.iter().enumerate() {
        if !distinct.iter().any(|(d, _)| d == c) {
            distinct.push((c.clone(), Elem::from(f)));
        }
    }
    let maximal_set = |c: &ElemSet| !distinct.iter().any(|(d, _)| d != c && c.is_subset(d));
    let up_maximal = ElemSet::from_iter(n, per_f.iter().enumerate().filter(|(_, x)| x.1).map(|(f, _)| Elem::from(f)));
    let mut cosets: Vec<CosetRecord> = distinct
        .iter()
        .filter(|(c, _)| maximal_set(c))
        .map(|(c, f)| CosetRecord { base: *f, members: c.clone(), is_maximal: true })
        .collect();
    cosets.sort_by_key(|c| c.members.first());

    let mut report = CheckReport::new();
    let mut seen = ElemSet::empty(n);
    let mut overlaps = Vec::new();
    for c in &cosets {
        if !seen.is_disjoint(&c.members) {
            overlaps.push(format!("coset of {} overlaps an earlier one", loc.label(c.base)));
        }
        seen.union_with(&c.members);
    }
    for f in loc.all().difference(&seen).iter() {
        overlaps.push(format!("{} lies in no maximal coset", loc.label(f)));
    }
    report.push(Check::from_witnesses("maximal cosets partition L", overlaps).with_detail(format!(
        "{} maximal cosets among {} cosets",
        cosets.len(),
        distinct.len()
    )));
    let not_maximal: Vec<String> =
        up_maximal.iter().filter(|&f| !maximal_set(&per_f[f.idx()].0)).map(|f| loc.label(f)).collect();
    report.push(Check::from_witnesses("Kf is a maximal coset for up-maximal f", not_maximal));
    let unrepresented: Vec<String> = cosets
        .iter()
        .filter(|c| !c.members.iter().any(|f| up_maximal.contains(f) && per_f[f.idx()].0 == c.members))
        .map(|c| loc.set_label(&c.members))
        .collect();
    report.push(Check::from_witnesses("every maximal coset is Kf for some up-maximal f", unrepresented));
    let not_two_sided: Vec<String> =
        up_maximal.iter().filter(|&f| ctx.coset(f) != ctx.left_coset(f)).map(|f| loc.label(f)).collect();
    report.push(Check::from_witnesses("Kf = fK for up-maximal f", not_two_sided));
    CosetAnalysis { cosets, distinct_cosets: distinct.len(), up_maximal, report }
}

/// `L/K` together with the map `ρ` and the data it was built from.
#[derive(Clone, Debug)]
pub struct QuotientBundle {
    pub kernel: ElemSet,
    pub cosets: Vec<CosetRecord>,
    /// `rho[f]` is the index of the maximal coset containing `f`.
    pub rho: Vec<Elem>,
    /// Least `↑_K`-maximal element of each maximal coset.
    pub reps: Vec<Elem>,
    pub up_maximal: ElemSet,
    pub quotient: Locality,
    pub report: CheckReport,
}

impl QuotientBundle {
    pub fn bar(&self, f: Elem) -> Elem {
        self.rho[f.idx()]
    }

    pub fn bar_set(&self, x: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.quotient.size(), x.iter().map(|f| self.bar(f)))
    }

    pub fn bar_word(&self, w: &[Elem]) -> Vec<Elem> {
        w.iter().map(|&f| self.bar(f)).collect()
    }

    /// `{f ∈ L : f̄ ∈ X̄}`.
    pub fn preimage(&self, xbar: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.rho.len(), (0..self.rho.len()).map(Elem::from).filter(|&f| xbar.contains(self.bar(f))))
    }
}

/// Words of length `1..=max_len` over `0..n`, in lexicographic order.
fn words_up_to(n: usize, max_len: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    let mut layer: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |f| {
                    let mut v = w.clone();
                    v.push(Elem::from(f));
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Builds `L/K`. Fails with the full report if any check on the
/// construction fails.
pub fn build_quotient(loc: &Locality, k: &ElemSet) -> Result<QuotientBundle> {
    let ctx = UpContext::new(loc, k)?;
    let analysis = analyse_cosets(&ctx);
    let mut report = analysis.report.clone();
    if !report.passed() {
        return Err(Error::Quotient(Box::new(report)));
    }
    let n = loc.size();
    let cosets = analysis.cosets;
    let mut rho = vec![Elem(0); n];
    for (i, c) in cosets.iter().enumerate() {
        for f in c.members.iter() {
            rho[f.idx()] = Elem::from(i);
        }
    }
    let reps: Vec<Elem> =
        cosets.iter().map(|c| c.members.iter().find(|&f| analysis.up_maximal.contains(f)).unwrap_or(c.base)).collect();
    let m = cosets.len();
    let bar = |f: Elem| rho[f.idx()].0;
    let s_bar: Vec<u32> = {
        let mut v: Vec<u32> = loc.s().iter().map(bar).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut delta_bar: Vec<Vec<u32>> = loc
        .delta()
        .iter()
        .map(|p| {
            let mut v: Vec<u32> = p.iter().map(bar).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    delta_bar.sort();
    delta_bar.dedup();
    let inv: Vec<u32> = reps.iter().map(|&r| bar(loc.inv(r))).collect();
    let mult: Vec<Vec<Option<u32>>> =
        reps.iter().map(|&a| reps.iter().map(|&b| loc.pi(&[a, b]).map(bar)).collect()).collect();
    let sconj: Vec<Vec<Option<u32>>> = (0..m)
        .map(|g| {
            s_bar
                .iter()
                .map(|&s| {
                    let w = [reps[inv[g] as usize], reps[s as usize], reps[g]];
                    loc.pi(&w).map(bar).filter(|c| s_bar.binary_search(c).is_ok())
                })
                .collect()
        })
        .collect();
    let tables = LocalityTables {
        prime: loc.prime_p(),
        inv,
        mult,
        s: s_bar,
        delta: delta_bar,
        sconj,
        labels: reps.iter().map(|&r| format!("[{}]", loc.label(r))).collect(),
    };
    let quotient = Locality::from_tables(&tables)?;

    let kernel: Vec<String> =
        loc.all().iter().filter(|&f| (rho[f.idx()] == rho[0]) != k.contains(f)).map(|f| loc.label(f)).collect();
    report.push(Check::from_witnesses("ker(rho) = K", kernel));

    let words = words_up_to(n, 3);
    let hom = par::map(&words, |w| {
        let pv = loc.pi(w)?;
        let wb: Vec<Elem> = w.iter().map(|&f| rho[f.idx()]).collect();
        (quotient.pi(&wb) != Some(rho[pv.idx()])).then(|| loc.word_label(w))
    });
    report.push(Check::from_witnesses(
        "rho is a homomorphism on words of length <= 3",
        hom.into_iter().flatten().collect(),
    ));
    let qwords = words_up_to(m, 3);
    let lifts = par::map(&qwords, |wb| {
        let qb = quotient.pi(wb)?;
        let w: Vec<Elem> = wb.iter().map(|c| reps[c.idx()]).collect();
        (loc.pi(&w).map(|p| rho[p.idx()]) != Some(qb)).then(|| quotient.word_label(wb))
    });
    report.push(Check::from_witnesses(
        "words in the quotient domain lift to representatives in D",
        lifts.into_iter().flatten().collect(),
    ));
    report.extend(
        check_locality(&quotient, quotient.s(), quotient.delta(), quotient.prime_p(), 3)?.prefixed("quotient: "),
    );
    if !report.passed() {
        return Err(Error::Quotient(Box::new(report)));
    }
    Ok(QuotientBundle { kernel: k.clone(), cosets, rho, reps, up_maximal: analysis.up_maximal, quotient, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generate_group;
    use crate::locality::{delta_close, locality_from_group};
    use crate::normal::enumerate_partial_normals;
    use crate::perm::Perm;

    fn s4() -> Locality {
        let m = generate_group(&[Perm::parse("(1 2)", 4).unwrap(), Perm::parse("(1 2 3 4)", 4).unwrap()]).unwrap();
        let s = m.sylow(2).into_members();
        let v4 = m.subgroup_closure(&ElemSet::from_iter(
            24,
            ["(1 2)(3 4)", "(1 3)(2 4)"].iter().map(|g| m.find_perm(&Perm::parse(g, 4).unwrap()).unwrap()),
        ));
        locality_from_group(&m, 2, &delta_close(&m, &s, &[v4.into_members()]).unwrap()).unwrap()
    }

    fn cyclic(loc: &Locality, g: &str) -> ElemSet {
        let x = loc.find_perm(&Perm::parse(g, 4).unwrap()).unwrap();
        ElemSet::from_iter(24, [Elem(0), x])
    }

    #[test]
    fn transporters() {
        let loc = s4();
        let normals = enumerate_partial_normals(&loc).unwrap();
        let (one, v4, a4) = (&normals[0], &normals[1], &normals[2]);
        let p = cyclic(&loc, "(1 2)(3 4)");
        let q = cyclic(&loc, "(1 3)(2 4)");
        assert!(transporter_in_k(&loc, one, &p, &q).unwrap().is_empty());
        assert_eq!(transporter_in_k(&loc, one, &p, &p).unwrap().len(), 1);
        assert_eq!(transporter_in_k(&loc, v4, v4, v4).unwrap(), *v4);
        assert!(!transporter_in_k(&loc, a4, &p, &q).unwrap().is_empty());
    }

    #[test]
    fn up_relation_basics() {
        let loc = s4();
        let normals = enumerate_partial_normals(&loc).unwrap();
        let ctx = UpContext::new(&loc, &normals[1]).unwrap();
        for f in loc.all().iter() {
            let sf = loc.s_of(f);
            for p in loc.delta().iter().filter(|p| p.is_subset(&sf)) {
                assert_eq!(ctx.up_relates(f, p, f, p).unwrap(), Some((Elem(0), Elem(0))));
                assert!(ctx.up_relates(f, p, f, &sf).unwrap().is_some());
            }
        }
        for &s in loc.s_elems() {
            assert!(ctx.is_up_maximal(s));
        }
    }

    #[test]
    fn quotient_of_s4_by_v4() {
        let loc = s4();
        let normals = enumerate_partial_normals(&loc).unwrap();
        let q = build_quotient(&loc, &normals[1]).unwrap();
        assert_eq!(q.quotient.size(), 6);
        assert_eq!(q.quotient.s().len(), 2);
        for a in 0..6 {
            for b in 0..6 {
                assert!(q.quotient.in_domain(&[Elem(a), Elem(b)]));
            }
        }
        let two = build_quotient(&loc, &normals[2]).unwrap();
        assert_eq!(two.cosets.len(), 2);
        let same = build_quotient(&loc, &normals[0]).unwrap();
        assert_eq!(same.quotient.size(), 24);
        let all = build_quotient(&loc, &normals[3]).unwrap();
        assert_eq!(all.quotient.size(), 1);
    }

    #[test]
    fn maximal_coset_of_a_non_maximal_element() {
        // In S4 with K = A4 the odd coset is maximal, but a transposition f
        // outside S has S_f = V4, moves up to (g, S) for an odd g in S and
        // cannot come back.
        let loc = s4();
        let normals = enumerate_partial_normals(&loc).unwrap();
        let a4 = &normals[2];
        let ctx = UpContext::new(&loc, a4).unwrap();
        let f = ["(1 2)", "(1 3)", "(1 4)", "(2 3)", "(2 4)", "(3 4)"]
            .iter()
            .map(|t| loc.find_perm(&Perm::parse(t, 4).unwrap()).unwrap())
            .find(|&t| !loc.s().contains(t))
            .unwrap();
        let g = loc.s_elems().iter().copied().find(|&x| !a4.contains(x)).unwrap();
        assert_eq!(loc.s_of(f).len(), 4);
        assert_eq!(ctx.coset(f).len(), 12);
        assert_eq!(ctx.coset(f), ctx.coset(g));
        assert!(!ctx.is_up_maximal(f));
        assert!(ctx.is_up_maximal(g));
        let (sf, sg) = (loc.s_of(f), loc.s_of(g));
        assert!(ctx.up_relates(f, &sf, g, &sg).unwrap().is_some());
        assert!(ctx.up_relates(g, &sg, f, &sf).unwrap().is_none());
    }

    #[test]
    fn non_normal_kernels_are_rejected() {
        let loc = s4();
        assert!(build_quotient(&loc, &loc.s().clone()).is_err());
    }
}
