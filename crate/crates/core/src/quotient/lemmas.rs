//! Instance checks of the structural facts about `↑_K`, maximal cosets and
//! the quotient map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_quotient, QuotientBundle, UpContext};
use crate::error::{Error, Result};
use crate::locality::{normalizer, Locality};
use crate::normal::{enumerate_partial_normals, is_partial_normal, strongly_closed_and_t, ENUMERATION_CAP};
use crate::par;
use crate::partial::{partial_subgroups_containing, subgroup_as_group, subset_product, PartialGroup};
use crate::report::{Check, CheckReport};
use crate::set::{Elem, ElemSet};

/// Upper bound on the partial subgroups enumerated for the correspondence.
const SUBGROUP_CAP: usize = 4000;
/// Random subsets `X` tried per partial subgroup `H`.
const SAMPLES: usize = 100;

fn words(n: usize, max_len: usize) -> Vec<Vec<Elem>> {
    super::words_up_to(n, max_len)
}

/// Runs every check on `(loc, K)`. A quotient that cannot be built is
/// reported through the failing construction checks.
pub fn verify_quotient_lemmas(loc: &Locality, k: &ElemSet, seed: u64) -> Result<CheckReport> {
    if loc.size() > ENUMERATION_CAP {
        return Err(Error::SizeCap { cap: ENUMERATION_CAP });
    }
    let ctx = UpContext::new(loc, k)?;
    let bundle = match build_quotient(loc, k) {
        Ok(b) => b,
        Err(Error::Quotient(report)) => return Ok(report.prefixed("construction: ")),
        Err(e) => return Err(e),
    };
    let mut rep = bundle.report.clone().prefixed("construction: ");
    let n = loc.size();
    let up = &bundle.up_maximal;
    let t = k.intersection(loc.s());
    let lab = |f: Elem| loc.label(f);

    let nls = normalizer(loc, loc.s());
    rep.push(Check::from_witnesses("elements of N_L(S) are up-maximal", nls.difference(up).iter().map(lab).collect()));
    rep.push(Check::from_witnesses(
        "T <= S_f for up-maximal f",
        up.iter().filter(|&f| !t.is_subset(&loc.s_of(f))).map(lab).collect(),
    ));

    let mut split = Vec::new();
    for x in k.iter() {
        for f in up.iter() {
            if let Some(xf) = loc.pi(&[x, f]) {
                if loc.s_of_word(&[x, f]) != loc.s_of(xf) {
                    split.push(format!("x = {}, f = {}", lab(x), lab(f)));
                }
            }
        }
    }
    rep.push(Check::from_witnesses("splitting: S_(x,f) = S_xf for x in K and up-maximal f", split));

    let mut minus_one = Vec::new();
    for f in up.iter() {
        let kf = ctx.coset(f);
        for g in loc.all().iter() {
            if bundle.bar(g) == bundle.bar(f) && !kf.contains(g) {
                minus_one.push(format!("f = {}, g = {}", lab(f), lab(g)));
            }
        }
    }
    rep.push(Check::from_witnesses("g-bar = f-bar with f up-maximal implies g in Kf", minus_one));

    let up_list = up.to_vec();
    let up_words: Vec<Vec<Elem>> =
        words(up_list.len(), 3).into_iter().map(|w| w.iter().map(|i| up_list[i.idx()]).collect()).collect();
    let zero = par::map(&up_words, |w| {
        let wb = bundle.bar_word(w);
        let qb = bundle.quotient.pi(&wb)?;
        (loc.pi(w).map(|p| bundle.bar(p)) != Some(qb)).then(|| loc.word_label(w))
    });
    rep.push(Check::from_witnesses(
        "words of up-maximal elements with image in the quotient domain lie in D (length <= 3)",
        zero.into_iter().flatten().collect(),
    ));

    correspondence(loc, k, &bundle, seed, &mut rep)?;

    let s_group = subgroup_as_group(loc, loc.s())?;
    let subs_s: Vec<ElemSet> = s_group
        .0
        .all_subgroups()
        .into_iter()
        .map(|h| ElemSet::from_iter(n, h.members().iter().map(|e| s_group.1[e.idx()])))
        .collect();
    let mut pre0 = Vec::new();
    let mut pres = Vec::new();
    let qs = bundle.quotient.s();
    for r in &subs_s {
        let rb = bundle.bar_set(r);
        if bundle.preimage(&rb) != subset_product(loc, &[k.clone(), r.clone()]) {
            pre0.push(format!("R = {}", loc.set_label(r)));
        }
        if t.is_subset(r) {
            let back = bundle.preimage(&rb).intersection(loc.s());
            let ns = normalizer(loc, r).intersection(loc.s());
            let nsb = normalizer(&bundle.quotient, &rb).intersection(qs);
            if back != *r || nsb != bundle.bar_set(&ns) {
                pres.push(format!("R = {}", loc.set_label(r)));
            }
        }
    }
    rep.push(Check::from_witnesses("preimage of R-bar is KR for R <= S", pre0));
    rep.push(Check::from_witnesses(
        "for T <= R <= S: R is the preimage of R-bar in S and N_(S-bar)(R-bar) = N_S(R)-bar",
        pres,
    ));

    rep.push(Check::from_witnesses(
        "S_f-bar = S-bar_(f-bar) for up-maximal f",
        up.iter().filter(|&f| bundle.bar_set(&loc.s_of(f)) != bundle.quotient.s_of(bundle.bar(f))).map(lab).collect(),
    ));

    let mut find_max = Vec::new();
    for f in up.iter() {
        let sf = loc.s_of(f);
        for g in loc.all().iter() {
            if bundle.bar(g) == bundle.bar(f) && loc.s_of(g) == sf && (!up.contains(g) || ctx.coset(g) != ctx.coset(f))
            {
                find_max.push(format!("f = {}, g = {}", lab(f), lab(g)));
            }
        }
    }
    rep.push(Check::from_witnesses("f-bar = g-bar, S_f = S_g, f up-maximal imply g up-maximal and Kf = Kg", find_max));

    rep.extend(strongly_closed_and_t(loc, k)?.report.prefixed("T = K cap S: "));

    bridge(loc, k, &bundle, &mut rep)?;
    Ok(rep)
}

fn correspondence(
    loc: &Locality,
    k: &ElemSet,
    bundle: &QuotientBundle,
    seed: u64,
    rep: &mut CheckReport,
) -> Result<()> {
    let q = &bundle.quotient;
    let hs = partial_subgroups_containing(loc, k, SUBGROUP_CAP)?;
    let qhs = partial_subgroups_containing(q, &ElemSet::singleton(q.size(), q.identity()), SUBGROUP_CAP)?;
    let mut partition = Vec::new();
    let mut normality = Vec::new();
    let mut images = Vec::new();
    for h in &hs {
        let mut covered = ElemSet::empty(loc.size());
        for c in bundle.cosets.iter().filter(|c| c.members.is_subset(h)) {
            covered.union_with(&c.members);
        }
        if covered != *h {
            partition.push(loc.set_label(h));
        }
        let hb = bundle.bar_set(h);
        if is_partial_normal(loc, h)?.is_partial_normal != is_partial_normal(q, &hb)?.is_partial_normal {
            normality.push(loc.set_label(h));
        }
        images.push(hb);
    }
    rep.push(Check::from_witnesses("maximal cosets inside a partial subgroup H >= K partition H", partition));
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let mut expected = qhs.clone();
    expected.sort();
    let bijective = sorted.len() == images.len() && sorted == expected;
    rep.push(Check::expect(
        "H -> H-bar is a bijection onto the partial subgroups of the quotient",
        bijective,
        format!("{} partial subgroups above K, {} in the quotient", hs.len(), qhs.len()),
    ));
    rep.push(Check::from_witnesses("H is partial normal iff H-bar is", normality));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pre2 = Vec::new();
    for h in &hs {
        let hb = bundle.bar_set(h);
        for _ in 0..SAMPLES {
            let x = ElemSet::from_iter(loc.size(), loc.all().iter().filter(|_| rng.gen_bool(0.5)));
            if bundle.bar_set(&x).intersection(&hb) != bundle.bar_set(&x.intersection(h)) {
                pre2.push(format!("H = {}, X = {}", loc.set_label(h), loc.set_label(&x)));
            }
        }
    }
    rep.push(
        Check::from_witnesses("X-bar cap H-bar = (X cap H)-bar for sampled X", pre2)
            .with_detail(format!("{} samples per H", SAMPLES)),
    );
    Ok(())
}

/// For partial normal `M, N` with `M ∩ N = K`: the images meet trivially, and
/// every `f` with `f-bar ∈ M-bar N-bar` lies in `MN` via a pair `(m, n)` with
/// `S_f = S_(m,n)`.
fn bridge(loc: &Locality, k: &ElemSet, bundle: &QuotientBundle, rep: &mut CheckReport) -> Result<()> {
    let normals = enumerate_partial_normals(loc)?;
    let q = &bundle.quotient;
    let one = ElemSet::singleton(q.size(), q.identity());
    let mut pairs = 0;
    let mut meet = Vec::new();
    let mut split = Vec::new();
    for m in normals.iter().filter(|m| k.is_subset(m)) {
        for nn in normals.iter().filter(|nn| &m.intersection(nn) == k) {
            pairs += 1;
            let (mb, nb) = (bundle.bar_set(m), bundle.bar_set(nn));
            if mb.intersection(&nb) != one {
                meet.push(format!("M = {}, N = {}", loc.set_label(m), loc.set_label(nn)));
            }
            let target = bundle.preimage(&subset_product(q, &[mb, nb]));
            for f in target.iter() {
                let sf = loc.s_of(f);
                let found =
                    m.iter().any(|a| nn.iter().any(|b| loc.pi(&[a, b]) == Some(f) && loc.s_of_word(&[a, b]) == sf));
                if !found {
                    split.push(format!("f = {} for M = {}, N = {}", loc.label(f), loc.set_label(m), loc.set_label(nn)));
                }
            }
        }
    }
    let detail = format!("{pairs} pairs (M, N) with M cap N = K");
    rep.push(Check::from_witnesses("M-bar cap N-bar = 1 when M cap N = K", meet).with_detail(detail.clone()));
    rep.push(
        Check::from_witnesses("f-bar in M-bar N-bar implies f = mn with S_f = S_(m,n)", split).with_detail(detail),
    );
    Ok(())
}
