//! Side-by-side walks of the engine and the reference over every word up to
//! a given length.

use locality::normal::enumerate_partial_normals;
use locality::quotient::maximal_cosets;
use locality::{Elem, PartialGroup};

use super::oracle::{self, Naive, NaiveAmalgam, NaiveLocality, Set};
use super::Fixture;

const MAX_REPORTED: usize = 20;

#[derive(Default, Debug)]
pub struct SweepTally {
    pub words: usize,
    pub in_domain: usize,
    pub mismatches: Vec<String>,
}

impl SweepTally {
    fn miss(&mut self, msg: String) {
        if self.mismatches.len() < MAX_REPORTED {
            self.mismatches.push(msg);
        }
    }
}

/// Reference-side walk state: surviving `Δ`-stations, the product in `M`,
/// and the current image of each element of `S` (by engine-local index).
#[derive(Clone)]
struct Walk {
    stations: Vec<usize>,
    prod: usize,
    images: Vec<Option<usize>>,
}

/// Compares domain membership, products and `S_w` on every word of length
/// `1..=max_len`.
pub fn sweep_locality(fx: &Fixture<NaiveLocality>, max_len: usize) -> SweepTally {
    let loc = fx.loc();
    let nv = &fx.naive;
    let m = &nv.m;
    let n = fx.n();
    let station_step: Vec<Vec<Option<usize>>> = nv
        .delta
        .iter()
        .map(|p| {
            (0..n)
                .map(|f| {
                    let img: Set = p.iter().map(|&x| m.conj(x, nv.to_m(f))).collect();
                    nv.delta.iter().position(|q| *q == img)
                })
                .collect()
        })
        .collect();
    let s_m: Vec<usize> = loc.s_elems().iter().map(|&e| nv.to_m(fx.back(e))).collect();
    let start =
        Walk { stations: (0..nv.delta.len()).collect(), prod: m.id, images: s_m.iter().map(|&x| Some(x)).collect() };
    let mut tally = SweepTally::default();
    let mut word: Vec<usize> = Vec::with_capacity(max_len);
    let mut eword: Vec<Elem> = Vec::with_capacity(max_len);
    walk(fx, &station_step, &start, Some(loc.start()), max_len, &mut word, &mut eword, &mut tally);
    tally
}

#[allow(clippy::too_many_arguments)]
fn walk(
    fx: &Fixture<NaiveLocality>,
    station_step: &[Vec<Option<usize>>],
    st: &Walk,
    est: Option<<locality::Locality as PartialGroup>::State>,
    left: usize,
    word: &mut Vec<usize>,
    eword: &mut Vec<Elem>,
    tally: &mut SweepTally,
) {
    if left == 0 {
        return;
    }
    let loc = fx.loc();
    let nv = &fx.naive;
    let m = &nv.m;
    for f in 0..fx.n() {
        let g = nv.to_m(f);
        let mut stations: Vec<usize> = st.stations.iter().filter_map(|&d| station_step[d][f]).collect();
        stations.sort_unstable();
        stations.dedup();
        let images: Vec<Option<usize>> =
            st.images.iter().map(|y| y.map(|y| m.conj(y, g)).filter(|z| nv.s.contains(z))).collect();
        let next = Walk { stations, prod: m.mul(st.prod, g), images };
        let ef = fx.elem(f);
        let enext = est.as_ref().and_then(|s| loc.step(s, ef));
        word.push(f);
        eword.push(ef);
        tally.words += 1;
        let in_d = !next.stations.is_empty();
        if in_d != enext.is_some() {
            tally.miss(format!("{}: domain differs on {:?}", fx.name, word));
        }
        if in_d {
            tally.in_domain += 1;
            if let Some(es) = &enext {
                let want = nv.in_l(next.prod).map(|i| fx.elem(i));
                if want != Some(loc.value(es)) {
                    tally.miss(format!("{}: product differs on {:?}", fx.name, word));
                }
            }
        }
        let mask = next.images.iter().enumerate().filter(|(_, y)| y.is_some()).fold(0u32, |acc, (i, _)| acc | 1 << i);
        if mask != loc.s_mask_of_word(eword) {
            tally.miss(format!("{}: S_w differs on {:?}", fx.name, word));
        }
        walk(fx, station_step, &next, enext, left - 1, word, eword, tally);
        word.pop();
        eword.pop();
    }
}

/// Compares domain membership and products of the amalgam on every word of
/// length `1..=max_len`.
pub fn sweep_amalgam(fx: &Fixture<NaiveAmalgam>, max_len: usize) -> SweepTally {
    let am = fx.am();
    let mut tally = SweepTally::default();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..fx.n()).map(move |f| [w.as_slice(), &[f]].concat())).collect();
        for w in &layer {
            tally.words += 1;
            let want = fx.naive.product(w).map(|i| fx.elem(i));
            let got = am.pi(&fx.word(w));
            if want.is_some() {
                tally.in_domain += 1;
            }
            if want != got {
                tally.miss(format!("PG-AM20: {:?} gives {:?}, reference {:?}", w, got, want));
            }
        }
    }
    tally
}

/// Partial normal subgroups and the maximal-coset partition for every one
/// of them, engine against reference. Returns the mismatches.
pub fn compare_structure<N: Naive>(
    fx: &Fixture<N>,
    pg: &impl PartialGroup,
    with_cosets: Option<&locality::Locality>,
) -> Vec<String> {
    let mut out = Vec::new();
    let want = oracle::partial_normals(&fx.naive);
    let got: Vec<Set> = enumerate_partial_normals(pg).unwrap().iter().map(|x| fx.back_set(x)).collect();
    let mut got_sorted = got.clone();
    got_sorted.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    if got_sorted != want {
        out.push(format!("{}: partial normals differ ({} engine, {} reference)", fx.name, got.len(), want.len()));
    }
    if let Some(loc) = with_cosets {
        for k in &want {
            let mut expect = oracle::maximal_cosets(&fx.naive, k);
            expect.sort();
            let mut found: Vec<Set> =
                maximal_cosets(loc, &fx.set(k)).unwrap().cosets.iter().map(|c| fx.back_set(&c.members)).collect();
            found.sort();
            if found != expect {
                out.push(format!("{}: maximal cosets differ for |K| = {}", fx.name, k.len()));
            }
        }
    }
    out
}
