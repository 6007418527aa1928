//! The construction `L_Δ(M)` from a finite group `M`.

use std::collections::BTreeSet;

use super::{Locality, LocalityTables, MAX_S};
use crate::error::{Error, Result};
use crate::group::{is_prime, p_part, FiniteGroup};
use crate::report::{Check, CheckReport};
use crate::set::{Elem, ElemSet};

/// A family of subgroups of `S`, indexed in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaFamily {
    pub ambient: ElemSet,
    /// Sorted by order, then by member list.
    pub members: Vec<ElemSet>,
}

impl DeltaFamily {
    pub fn contains(&self, p: &ElemSet) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Least family containing `seeds` that is closed under overgroups in `S`
/// and under `M`-conjugates landing in `S`.
pub fn delta_close(m: &FiniteGroup, s: &ElemSet, seeds: &[ElemSet]) -> Result<DeltaFamily> {
    if seeds.is_empty() {
        return Err(Error::Argument("Delta needs at least one seed".into()));
    }
    if !m.is_subgroup(s) {
        return Err(Error::Argument("S is not a subgroup".into()));
    }
    for seed in seeds {
        if !seed.is_subset(s) || !m.is_subgroup(seed) {
            return Err(Error::Argument("every seed must be a subgroup of S".into()));
        }
    }
    let subs: Vec<ElemSet> = m.subgroups_within(s).into_iter().map(|h| h.into_members()).collect();
    let mut members: BTreeSet<ElemSet> = BTreeSet::new();
    let mut work: Vec<ElemSet> = Vec::new();
    for seed in seeds {
        if members.insert(seed.clone()) {
            work.push(seed.clone());
        }
    }
    while let Some(p) = work.pop() {
        for g in m.elements() {
            let image = ElemSet::from_iter(m.order(), p.iter().map(|x| m.conj(x, g)));
            if !image.is_subset(s) {
                continue;
            }
            for q in subs.iter().filter(|q| image.is_subset(q)) {
                if members.insert(q.clone()) {
                    work.push(q.clone());
                }
            }
        }
    }
    let mut members: Vec<ElemSet> = members.into_iter().collect();
    members.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(DeltaFamily { ambient: s.clone(), members })
}

/// All subgroups of `S` of order at least `min_order`.
pub fn delta_min_order(m: &FiniteGroup, s: &ElemSet, min_order: usize) -> Result<DeltaFamily> {
    let seeds: Vec<ElemSet> =
        m.subgroups_within(s).into_iter().filter(|h| h.order() >= min_order).map(|h| h.into_members()).collect();
    if seeds.is_empty() {
        return Err(Error::Argument(format!("S has no subgroup of order >= {min_order}")));
    }
    delta_close(m, s, &seeds)
}

/// Builds `L = {g ∈ M : S ∩ S^{g⁻¹} ∈ Δ}` with the product of `M` restricted
/// to words admitting a `Δ`-chain, and checks the result.
pub fn locality_from_group(m: &FiniteGroup, p: u32, delta: &DeltaFamily) -> Result<Locality> {
    let s = &delta.ambient;
    if !is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    if !m.is_subgroup(s) || s.len() != p_part(m.order(), p) {
        return Err(Error::Argument(format!("S is not a Sylow {p}-subgroup")));
    }
    if s.len() > MAX_S {
        return Err(Error::Argument(format!("|S| = {} exceeds {MAX_S}", s.len())));
    }
    if delta.is_empty() || !delta.members.iter().all(|q| q.is_subset(s) && m.is_subgroup(q)) {
        return Err(Error::Argument("Delta must be a nonempty family of subgroups of S".into()));
    }
    let in_delta = |x: &ElemSet| delta.contains(x);
    // S^M_w: elements of S whose successive M-conjugates along w stay in S.
    let thread = |w: &[Elem]| {
        ElemSet::from_iter(
            m.order(),
            s.iter().filter(|&x| {
                let mut y = x;
                w.iter().all(|&f| {
                    y = m.conj(y, f);
                    s.contains(y)
                })
            }),
        )
    };

    let l: Vec<Elem> = m.elements().filter(|&g| in_delta(&thread(&[g]))).collect();
    let mut pos = vec![None; m.order()];
    for (i, g) in l.iter().enumerate() {
        pos[g.idx()] = Some(i as u32);
    }
    let n = l.len();
    let s_m: Vec<Elem> = s.to_vec();

    let mut inv = Vec::with_capacity(n);
    for &g in &l {
        inv.push(pos[m.inv(g).idx()].ok_or_else(|| Error::Table("L is not closed under inversion".into()))?);
    }
    let mult: Vec<Vec<Option<u32>>> = crate::par::map(&l, |&f| {
        l.iter().map(|&g| if in_delta(&thread(&[f, g])) { pos[m.mul(f, g).idx()] } else { None }).collect()
    });

    // S_g read off D, compared with S ∩ S^{g⁻¹} computed in M.
    let mut mismatches = Vec::new();
    let sconj: Vec<Vec<Option<u32>>> = l
        .iter()
        .map(|&g| {
            let direct = thread(&[g]);
            let row: Vec<Option<u32>> = s_m
                .iter()
                .map(|&x| {
                    let y = m.conj(x, g);
                    let in_d = in_delta(&thread(&[m.inv(g), x, g]));
                    (in_d && s.contains(y)).then(|| pos[y.idx()].unwrap())
                })
                .collect();
            let abstract_sg =
                ElemSet::from_iter(m.order(), s_m.iter().zip(&row).filter(|r| r.1.is_some()).map(|r| *r.0));
            if abstract_sg != direct {
                mismatches.push(m.label(g));
            }
            row
        })
        .collect();

    let tables = LocalityTables {
        prime: p,
        inv,
        mult,
        s: s_m.iter().map(|x| pos[x.idx()].unwrap()).collect(),
        delta: delta.members.iter().map(|q| q.iter().map(|x| pos[x.idx()].unwrap()).collect()).collect(),
        sconj,
        labels: l.iter().map(|&g| m.label(g)).collect(),
    };
    let mut loc = Locality::from_tables(&tables)?;
    if let Some(perms) = m.perms() {
        loc = loc.with_perms(l.iter().map(|g| perms[g.idx()].clone()).collect());
    }
    let mut report = CheckReport::new();
    report.push(Check::from_witnesses("S_g read from D equals S cap S^(g^-1)", mismatches));
    report.extend(loc.check(2)?);
    if !report.passed() {
        return Err(Error::Locality(Box::new(report)));
    }
    Ok(loc)
}
