//! Checking the locality axioms for an arbitrary partial group with a chosen
//! `S` and `Δ`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::is_power_of;
use crate::par;
use crate::partial::{
    is_partial_subgroup, partial_subgroup_closure, subgroup_as_group, subgroup_verdict, PartialGroup,
};
use crate::report::{Check, CheckReport, MAX_WITNESSES};
use crate::set::{Elem, ElemSet};

pub const MAXIMAL_S_CHECK: &str = "S is maximal among p-subgroups";
pub const CHAIN_CHECK: &str = "D is the set of words admitting a Delta-chain";
pub const OVERGROUP_CHECK: &str = "overgroups in S of Delta-conjugates lie in Delta";

/// `table[f][i]` is the index in `delta` of `P_i^f`, when `P_i ⊆ D(f)` and
/// the image is again a member of `delta`.
pub fn delta_conjugation_table<P: PartialGroup + ?Sized>(pg: &P, delta: &[ElemSet]) -> Vec<Vec<Option<usize>>> {
    let index: HashMap<&ElemSet, usize> = delta.iter().enumerate().map(|(i, p)| (p, i)).collect();
    par::map_range(pg.size(), |fi| {
        let f = Elem::from(fi);
        delta
            .iter()
            .map(|p| {
                let image: Option<Vec<Elem>> = p.iter().map(|x| pg.conj(x, f)).collect();
                image.and_then(|im| index.get(&ElemSet::from_iter(pg.size(), im)).copied())
            })
            .collect()
    })
}

#[derive(Default)]
struct Findings {
    count: usize,
    samples: Vec<String>,
}

impl Findings {
    fn add(&mut self, text: impl FnOnce() -> String) {
        self.count += 1;
        if self.samples.len() < MAX_WITNESSES {
            self.samples.push(text());
        }
    }

    fn merge(parts: Vec<Findings>) -> Findings {
        let mut all = Findings::default();
        for p in parts {
            all.count += p.count;
            all.samples.extend(p.samples);
        }
        all.samples.truncate(MAX_WITNESSES);
        all
    }

    fn into_check(self, name: &str, detail: String) -> Check {
        let mut c = Check::from_witnesses(name, self.samples).with_detail(detail);
        c.violations = self.count;
        c
    }
}

struct L2Sweep<'a, P: PartialGroup + ?Sized> {
    pg: &'a P,
    table: &'a [Vec<Option<usize>>],
    max_len: usize,
}

impl<P: PartialGroup + ?Sized> L2Sweep<'_, P> {
    fn visit(&self, word: &mut Vec<Elem>, state: Option<P::State>, stations: &ElemSet, out: &mut Findings) {
        let chain = !stations.is_empty();
        if state.is_some() != chain {
            out.add(|| {
                let why = if chain { "has a chain but is not in D" } else { "is in D without a chain" };
                format!("{} {why}", self.pg.word_label(word))
            });
        }
        if word.len() == self.max_len || (state.is_none() && !chain) {
            return;
        }
        for f in (0..self.pg.size()).map(Elem::from) {
            let next = state.as_ref().and_then(|st| self.pg.step(st, f));
            let row = &self.table[f.idx()];
            let reach =
                ElemSet::from_iter(stations.universe(), stations.iter().filter_map(|i| row[i.idx()].map(Elem::from)));
            word.push(f);
            self.visit(word, next, &reach, out);
            word.pop();
        }
    }
}

/// Checks that `(pg, delta, s)` is a locality for the prime `p`, with the chain condition
/// tested on every word of length `<= max_len`.
pub fn check_locality<P: PartialGroup + ?Sized>(
    pg: &P,
    s: &ElemSet,
    delta: &[ElemSet],
    p: u32,
    max_len: usize,
) -> Result<CheckReport> {
    if max_len < 2 {
        return Err(Error::Argument("max_len must be at least 2".into()));
    }
    let n = pg.size();
    let mut rep = CheckReport::new();

    let s_is_group = is_partial_subgroup(pg, s) && subgroup_verdict(pg, s).is_subgroup;
    rep.push(Check::expect(
        "S is a p-subgroup",
        s_is_group && is_power_of(s.len(), p),
        format!("|S| = {}, p = {p}", s.len()),
    ));
    let bad_members: Vec<String> =
        delta.iter().filter(|q| !q.is_subset(s) || !is_partial_subgroup(pg, q)).map(|q| format!("{q:?}")).collect();
    let mut family = Check::from_witnesses("Delta is a nonempty family of subgroups of S", bad_members);
    if delta.is_empty() {
        family = Check::expect(family.name, false, "Delta is empty");
    }
    rep.push(family);
    rep.push(Check::expect("S is a member of Delta", delta.contains(s), ""));

    let outside: Vec<Elem> = pg.all().difference(s).iter().collect();
    let larger_p_subgroups = par::map(&outside, |&f| {
        let mut seed = s.clone();
        seed.insert(f);
        let c = partial_subgroup_closure(pg, &seed);
        (is_power_of(c.len(), p) && subgroup_verdict(pg, &c).is_subgroup)
            .then(|| format!("S and {} generate a {p}-subgroup of order {}", pg.label(f), c.len()))
    });
    rep.push(Check::from_witnesses(MAXIMAL_S_CHECK, larger_p_subgroups.into_iter().flatten().collect()));

    let table = delta_conjugation_table(pg, delta);
    let sweep = L2Sweep { pg, table: &table, max_len };
    let all_stations = ElemSet::full(delta.len());
    // the empty word is in D and admits any one-station chain
    let mut root = Findings::default();
    if delta.is_empty() {
        root.add(|| "[] is in D without a chain".into());
    }
    let mut parts = vec![root];
    parts.extend(par::map_range(n, |a| {
        let mut out = Findings::default();
        let f = Elem::from(a);
        let reach =
            ElemSet::from_iter(delta.len(), all_stations.iter().filter_map(|i| table[a][i.idx()].map(Elem::from)));
        sweep.visit(&mut vec![f], pg.step(&pg.start(), f), &reach, &mut out);
        out
    }));
    rep.push(Findings::merge(parts).into_check(CHAIN_CHECK, format!("words of length <= {max_len}")));

    if s_is_group {
        let (sg, back) = subgroup_as_group(pg, s)?;
        let subs: Vec<ElemSet> = sg
            .all_subgroups()
            .into_iter()
            .map(|h| ElemSet::from_iter(n, h.members().iter().map(|e| back[e.idx()])))
            .collect();
        let overgroup_findings = par::map_range(n, |gi| {
            let g = Elem::from(gi);
            let mut out = Findings::default();
            for q in delta {
                let image: Option<Vec<Elem>> = q.iter().map(|x| pg.conj(x, g)).collect();
                let Some(image) = image.map(|im| ElemSet::from_iter(n, im)) else { continue };
                if !image.is_subset(s) {
                    continue;
                }
                for r in subs.iter().filter(|r| image.is_subset(r) && !delta.contains(r)) {
                    out.add(|| format!("P = {}, g = {}, Q = {}", pg.set_label(q), pg.label(g), pg.set_label(r)));
                }
            }
            out
        });
        rep.push(
            Findings::merge(overgroup_findings).into_check(OVERGROUP_CHECK, format!("{} subgroups of S", subs.len())),
        );
    } else {
        rep.push(Check::skipped(OVERGROUP_CHECK, "S is not a subgroup"));
    }
    Ok(rep)
}
