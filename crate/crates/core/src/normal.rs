//! Partial normal subgroups: closures, enumeration, `T = N ∩ S`, and
//! certificates for products of partial normal subgroups of a locality.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::is_power_of;
use crate::locality::Locality;
use crate::par;
use crate::partial::{
    conjugation_escape, is_partial_subgroup, partial_subgroup_closure, subgroup_verdict, subset_product, PartialGroup,
};
use crate::report::{Check, CheckReport};
use crate::set::{Elem, ElemSet};

/// Largest partial group for which all partial normal subgroups are listed.
pub const ENUMERATION_CAP: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityVerdict {
    pub partial_subgroup: bool,
    pub is_partial_normal: bool,
    /// `(x, f)` with `x^f` defined and outside the set.
    pub counterexample: Option<(Elem, Elem)>,
}

pub fn is_partial_normal<P: PartialGroup + ?Sized>(pg: &P, n: &ElemSet) -> Result<NormalityVerdict> {
    if n.is_empty() {
        return Err(Error::Argument("N must be nonempty".into()));
    }
    let partial_subgroup = is_partial_subgroup(pg, n);
    let counterexample = if partial_subgroup { conjugation_escape(pg, n) } else { None };
    Ok(NormalityVerdict {
        partial_subgroup,
        is_partial_normal: partial_subgroup && counterexample.is_none(),
        counterexample,
    })
}

/// Least partial normal subgroup containing `x`.
pub fn partial_normal_closure<P: PartialGroup + ?Sized>(pg: &P, x: &ElemSet) -> ElemSet {
    let one = pg.identity();
    let mut set = ElemSet::singleton(pg.size(), one);
    let mut queue = vec![one];
    for e in x.iter() {
        if set.insert(e) {
            queue.push(e);
        }
    }
    while let Some(y) = queue.pop() {
        let mut fresh = vec![pg.inv(y)];
        for c in set.iter() {
            fresh.extend(pg.product(c, y));
            fresh.extend(pg.product(y, c));
        }
        for f in (0..pg.size()).map(Elem::from) {
            fresh.extend(pg.conj(y, f));
        }
        for z in fresh {
            if set.insert(z) {
                queue.push(z);
            }
        }
    }
    set
}

/// All partial normal subgroups, sorted by size and then by members. Every
/// partial normal `N` is the join of the closures of its elements, so joining
/// singleton closures pairwise to a fixpoint finds them all.
pub fn enumerate_partial_normals<P: PartialGroup + ?Sized>(pg: &P) -> Result<Vec<ElemSet>> {
    if pg.size() > ENUMERATION_CAP {
        return Err(Error::SizeCap { cap: ENUMERATION_CAP });
    }
    let singles =
        par::map_range(pg.size(), |i| partial_normal_closure(pg, &ElemSet::singleton(pg.size(), Elem::from(i))));
    let mut family: BTreeSet<ElemSet> = singles.into_iter().collect();
    let mut fresh: Vec<ElemSet> = family.iter().cloned().collect();
    while !fresh.is_empty() {
        let current: Vec<ElemSet> = family.iter().cloned().collect();
        let joins = par::map(&fresh, |a| {
            current
                .iter()
                .filter(|b| !b.is_subset(a) && !a.is_subset(b))
                .map(|b| partial_normal_closure(pg, &a.union(b)))
                .collect::<Vec<_>>()
        });
        fresh = joins.into_iter().flatten().filter(|j| family.insert(j.clone())).collect();
    }
    let mut out: Vec<ElemSet> = family.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

fn require_partial_normal(loc: &Locality, n: &ElemSet, what: &str) -> Result<()> {
    if n.universe() != loc.size() || !is_partial_normal(loc, n)?.is_partial_normal {
        return Err(Error::Argument(format!("{what} is not a partial normal subgroup")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TReport {
    pub t: ElemSet,
    pub report: CheckReport,
}

/// Checks that `T = N ∩ S` is strongly closed, invariant under every `g` with
/// `T ⊆ S_g`, and maximal among the p-subgroups of `N`.
pub fn strongly_closed_and_t(loc: &Locality, n: &ElemSet) -> Result<TReport> {
    require_partial_normal(loc, n, "N")?;
    let t = n.intersection(loc.s());
    let p = loc.prime_p();
    let mut report = CheckReport::new();
    let mut not_closed = Vec::new();
    let mut not_invariant = Vec::new();
    for g in loc.all().iter() {
        let sg = loc.s_of(g);
        for x in t.intersection(&sg).iter() {
            if loc.sconj(g, x).is_none_or(|y| !t.contains(y)) {
                not_closed.push(format!("t = {}, g = {}", loc.label(x), loc.label(g)));
            }
        }
        if t.is_subset(&sg) && loc.image_along(&t, &[g]).as_ref() != Some(&t) {
            not_invariant.push(loc.label(g));
        }
    }
    report.push(Check::from_witnesses("T is strongly closed", not_closed));
    report.push(Check::from_witnesses("T^g = T whenever T is inside S_g", not_invariant));
    let bigger: Vec<String> = n
        .difference(&t)
        .iter()
        .filter_map(|f| {
            let mut seed = t.clone();
            seed.insert(f);
            let c = partial_subgroup_closure(loc, &seed);
            (c.is_subset(n) && is_power_of(c.len(), p) && subgroup_verdict(loc, &c).is_subgroup)
                .then(|| format!("T and {} generate a p-subgroup of order {}", loc.label(f), c.len()))
        })
        .collect();
    report.push(Check::from_witnesses("T is maximal among p-subgroups of N", bigger));
    Ok(TReport { t, report })
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub element: Elem,
    /// Least word in lexicographic order with the required properties.
    pub word: Vec<Elem>,
    /// Number of words over the factors in `D` with product `element` and
    /// `S_word = S_element`.
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductFlags {
    pub is_partial_normal: bool,
    pub commutes: bool,
    pub intersection_formula: bool,
    pub witnesses_complete: bool,
    pub bracketing: Option<bool>,
    pub permutations: Option<bool>,
    pub transpositions: Option<bool>,
}

impl ProductFlags {
    pub fn all_true(&self) -> bool {
        self.is_partial_normal
            && self.commutes
            && self.intersection_formula
            && self.witnesses_complete
            && self.bracketing != Some(false)
            && self.permutations != Some(false)
            && self.transpositions != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct ProductCertificate {
    pub factors: Vec<ElemSet>,
    pub product: ElemSet,
    pub witnesses: Vec<Witness>,
    pub unwitnessed: Vec<Elem>,
    pub normality_counterexample: Option<(Elem, Elem)>,
    /// Pairwise intersections of the factors are all trivial.
    pub trivial_intersection: bool,
    pub flags: ProductFlags,
}

impl ProductCertificate {
    pub fn passed(&self) -> bool {
        self.flags.all_true()
    }

    pub fn to_report(&self, loc: &Locality) -> CheckReport {
        let f = &self.flags;
        let mut rep = CheckReport::new();
        rep.push(Check::expect("product", true, format!("{} elements", self.product.len())));
        let ce = self
            .normality_counterexample
            .map(|(x, g)| format!("x = {}, f = {}", loc.label(x), loc.label(g)))
            .unwrap_or_default();
        rep.push(Check::expect("product is partial normal", f.is_partial_normal, ce));
        rep.push(Check::expect("product does not depend on factor order", f.commutes, ""));
        rep.push(Check::expect(
            "product meets S in the product of the intersections with S",
            f.intersection_formula,
            "",
        ));
        rep.push(Check::from_witnesses(
            "every element has a witness word w with S_g = S_w",
            self.unwitnessed.iter().map(|&g| loc.label(g)).collect(),
        ));
        if let Some(b) = f.bracketing {
            rep.push(Check::expect("every bracketing gives the same product", b, ""));
        }
        if let Some(b) = f.permutations {
            rep.push(Check::expect("every permutation of the factors gives the same product", b, ""));
        }
        if let Some(b) = f.transpositions {
            rep.push(Check::expect("adjacent transpositions preserve the product", b, ""));
        }
        rep.push(Check::expect(
            "trivial pairwise intersections",
            true,
            if self.trivial_intersection { "yes" } else { "no" },
        ));
        rep
    }
}

/// Depth-first walk over words `(n_1, ..., n_l)` with `n_i ∈ factors[i]` that
/// stay inside `D`, collecting `(product, S_w mask)` at full length.
fn walk_words(
    loc: &Locality,
    factors: &[Vec<Elem>],
    depth: usize,
    st: &<Locality as PartialGroup>::State,
    word: &mut Vec<Elem>,
    visit: &mut dyn FnMut(&[Elem], Elem, u32),
) {
    if depth == factors.len() {
        visit(word, st.cur, st.dom);
        return;
    }
    for &f in &factors[depth] {
        if let Some(next) = loc.step(st, f) {
            word.push(f);
            walk_words(loc, factors, depth + 1, &next, word, visit);
            word.pop();
        }
    }
}

fn find_witnesses(loc: &Locality, factors: &[ElemSet]) -> (Vec<Witness>, ElemSet) {
    let n = loc.size();
    let lists: Vec<Vec<Elem>> = factors.iter().map(|f| f.to_vec()).collect();
    let s_masks: Vec<u32> = (0..n).map(|g| loc.s_mask_of_word(&[Elem::from(g)])).collect();
    let first = lists[0].clone();
    let per_first = par::map(&first, |&a| {
        let mut found: Vec<Option<(Vec<Elem>, usize)>> = vec![None; n];
        let mut products = ElemSet::empty(n);
        if let Some(st) = loc.step(&loc.start(), a) {
            let mut word = vec![a];
            walk_words(loc, &lists, 1, &st, &mut word, &mut |w, g, dom| {
                products.insert(g);
                if dom == s_masks[g.idx()] {
                    match &mut found[g.idx()] {
                        Some((_, c)) => *c += 1,
                        slot => *slot = Some((w.to_vec(), 1)),
                    }
                }
            });
        }
        (found, products)
    });
    let mut merged: Vec<Option<(Vec<Elem>, usize)>> = vec![None; n];
    let mut products = ElemSet::empty(n);
    for (found, prods) in per_first {
        products.union_with(&prods);
        for (g, hit) in found.into_iter().enumerate() {
            if let Some((w, c)) = hit {
                match &mut merged[g] {
                    Some((_, total)) => *total += c,
                    slot => *slot = Some((w, c)),
                }
            }
        }
    }
    let witnesses = merged
        .into_iter()
        .enumerate()
        .filter_map(|(g, hit)| hit.map(|(word, count)| Witness { element: Elem::from(g), word, count }))
        .collect();
    (witnesses, products)
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    if l == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(l - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, l - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn certify(loc: &Locality, factors: &[ElemSet], extended: bool) -> Result<ProductCertificate> {
    for (i, f) in factors.iter().enumerate() {
        require_partial_normal(loc, f, &format!("factor {}", i + 1))?;
    }
    let l = factors.len();
    let product = subset_product(loc, factors);
    let verdict = is_partial_normal(loc, &product)?;
    let (witnesses, walked) = find_witnesses(loc, factors);
    let unwitnessed: Vec<Elem> = product.iter().filter(|g| !witnesses.iter().any(|w| w.element == *g)).collect();
    let s = loc.s();
    let s_parts: Vec<ElemSet> = factors.iter().map(|f| f.intersection(s)).collect();
    let intersection_formula = product.intersection(s) == subset_product(loc, &s_parts);
    let one = ElemSet::singleton(loc.size(), loc.identity());
    let trivial_intersection = (0..l).all(|i| (i + 1..l).all(|j| factors[i].intersection(&factors[j]) == one));

    let perms = permutations(l);
    let reorder = |p: &[usize]| -> Vec<ElemSet> { p.iter().map(|&i| factors[i].clone()).collect() };
    let all_perms = perms.iter().all(|p| subset_product(loc, &reorder(p)) == product);
    let mut flags = ProductFlags {
        is_partial_normal: verdict.is_partial_normal,
        commutes: if l == 2 {
            subset_product(loc, &[factors[1].clone(), factors[0].clone()]) == product
        } else {
            all_perms
        },
        intersection_formula,
        witnesses_complete: unwitnessed.is_empty() && walked == product,
        ..ProductFlags::default()
    };
    if extended {
        let sub = |r: std::ops::Range<usize>| {
            if r.is_empty() {
                one.clone()
            } else {
                subset_product(loc, &factors[r])
            }
        };
        flags.bracketing = Some((1..l).all(|k| subset_product(loc, &[sub(0..k), sub(k..l)]) == product));
        flags.permutations = Some(all_perms);
        flags.transpositions = Some((0..l - 1).all(|i| {
            let (a, b) = (sub(0..i), sub(i + 2..l));
            let pair = subset_product(loc, &factors[i..i + 2]);
            let swapped = subset_product(loc, &[factors[i + 1].clone(), factors[i].clone()]);
            let normal = [&a, &pair, &b].iter().all(|x| is_partial_normal(loc, x).is_ok_and(|v| v.is_partial_normal));
            normal
                && subset_product(loc, &[a.clone(), pair, b.clone()]) == product
                && subset_product(loc, &[a, swapped, b]) == product
        }));
    }
    Ok(ProductCertificate {
        factors: factors.to_vec(),
        product,
        witnesses,
        unwitnessed,
        normality_counterexample: verdict.counterexample,
        trivial_intersection,
        flags,
    })
}

/// Certificate for `MN`: partial normality, `MN = NM`, the intersection with
/// `S`, and a witness `(m, n)` with `S_g = S_(m,n)` for every `g ∈ MN`.
pub fn certify_pair_product(loc: &Locality, m: &ElemSet, n: &ElemSet) -> Result<ProductCertificate> {
    certify(loc, &[m.clone(), n.clone()], false)
}

/// Certificate for `N_1 ... N_l` with `2 <= l <= 4`, including bracketings
/// and reorderings of the factors.
pub fn certify_product(loc: &Locality, factors: &[ElemSet]) -> Result<ProductCertificate> {
    if !(2..=4).contains(&factors.len()) {
        return Err(Error::Argument("between 2 and 4 factors are supported".into()));
    }
    certify(loc, factors, true)
}
