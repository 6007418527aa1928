#![allow(dead_code)]

pub mod oracle;
pub mod sweep;

use locality::amalgam::Amalgam;
use locality::model::Model;
use locality::{corpus, Elem, ElemSet, Locality, PartialGroup, Perm};
use oracle::{cycles, degree_of, DeltaRule, Naive, NaiveAmalgam, NaiveLocality, Set, P};

fn perms(texts: &[&str], degree: usize) -> Vec<P> {
    texts.iter().map(|t| cycles(t, degree)).collect()
}

fn to_engine_perm(p: &P) -> Perm {
    Perm::from_images(p.iter().map(|&x| x as u32).collect()).unwrap()
}

fn from_engine_perm(p: &Perm) -> P {
    p.images().iter().map(|&x| x as u8).collect()
}

/// A corpus object paired with its reference copy. `map[i]` is the engine
/// element matching reference element `i`.
pub struct Fixture<N> {
    pub name: &'static str,
    pub model: Model,
    pub naive: N,
    pub map: Vec<Elem>,
    back: Vec<usize>,
}

impl<N: Naive> Fixture<N> {
    fn finish(name: &'static str, model: Model, naive: N, map: Vec<Elem>) -> Self {
        let mut back = vec![usize::MAX; map.len()];
        for (i, e) in map.iter().enumerate() {
            assert_eq!(back[e.idx()], usize::MAX, "{name}: two reference elements share an engine element");
            back[e.idx()] = i;
        }
        Fixture { name, model, naive, map, back }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn elem(&self, i: usize) -> Elem {
        self.map[i]
    }

    pub fn word(&self, w: &[usize]) -> Vec<Elem> {
        w.iter().map(|&i| self.map[i]).collect()
    }

    pub fn set(&self, x: &Set) -> ElemSet {
        ElemSet::from_iter(self.n(), x.iter().map(|&i| self.map[i]))
    }

    pub fn back(&self, e: Elem) -> usize {
        self.back[e.idx()]
    }

    pub fn back_set(&self, x: &ElemSet) -> Set {
        x.iter().map(|e| self.back[e.idx()]).collect()
    }
}

impl Fixture<NaiveLocality> {
    pub fn loc(&self) -> &Locality {
        self.model.locality(self.name).unwrap()
    }
}

impl Fixture<NaiveAmalgam> {
    pub fn am(&self) -> &Amalgam {
        self.model.amalgam(self.name).unwrap()
    }
}

struct LocSpec {
    name: &'static str,
    gens: &'static [&'static str],
    prime: usize,
    seeds: Option<&'static [&'static str]>,
    min_order: usize,
}

const LOC_SPECS: [LocSpec; 3] = [
    LocSpec {
        name: "GRP-S4",
        gens: &["(1 2)", "(1 2 3 4)"],
        prime: 2,
        seeds: Some(&["(1 2)(3 4)", "(1 3)(2 4)"]),
        min_order: 0,
    },
    LocSpec { name: "GRP-C2xS4", gens: &["(1 2)", "(3 4)", "(3 4 5 6)"], prime: 2, seeds: None, min_order: 8 },
    LocSpec { name: "LOC-S5", gens: &["(1 2)", "(1 2 3 4 5)"], prime: 2, seeds: None, min_order: 2 },
];

/// Builds the engine locality from the built-in corpus and the reference
/// copy from the generators above. The engine's choice of `S` is handed to
/// the reference, which checks it is Sylow.
pub fn locality(name: &str) -> Fixture<NaiveLocality> {
    let spec = LOC_SPECS.iter().find(|s| s.name == name).expect("unknown locality");
    let model = corpus::builtin(name).unwrap();
    let loc = model.locality(name).unwrap();
    let deg = degree_of(spec.gens);
    let s: Vec<P> = loc.s().iter().map(|e| from_engine_perm(loc.perm(e).unwrap())).collect();
    let rule = match spec.seeds {
        Some(seeds) => DeltaRule::Seeds(vec![perms(seeds, deg)]),
        None => DeltaRule::MinOrder(spec.min_order),
    };
    let naive = NaiveLocality::new(&perms(spec.gens, deg), spec.prime, &s, &rule);
    let map: Vec<Elem> = (0..naive.size())
        .map(|i| loc.find_perm(&to_engine_perm(naive.perm(i))).expect("reference element missing from engine"))
        .collect();
    assert_eq!(map.len(), loc.size(), "{name}: |L| differs");
    Fixture::finish(spec.name, model, naive, map)
}

pub fn amalgam() -> Fixture<NaiveAmalgam> {
    let model = corpus::builtin("PG-AM20").unwrap();
    let am = model.amalgam("PG-AM20").unwrap();
    let left = ["(1 2)", "(3 4 5 6)"];
    let right = ["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"];
    let glue = [("(1 2)", "(2 8)(3 7)(4 6)"), ("(3 5)(4 6)", "(1 5)(2 6)(3 7)(4 8)")];
    let (d1, d2) = (degree_of(&left), degree_of(&right));
    let glue: Vec<(P, P)> = glue.iter().map(|(a, b)| (cycles(a, d1), cycles(b, d2))).collect();
    let naive = NaiveAmalgam::new(&perms(&left, d1), &perms(&right, d2), &glue);
    let map: Vec<Elem> = naive
        .elems
        .iter()
        .map(|e| match *e {
            (Some(a), _) => am.find_left_perm(&to_engine_perm(&naive.g1.elems[a])).unwrap(),
            (None, Some(b)) => am.find_right_perm(&to_engine_perm(&naive.g2.elems[b])).unwrap(),
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(map.len(), am.size(), "PG-AM20: |L| differs");
    Fixture::finish("PG-AM20", model, naive, map)
}

pub fn all_localities() -> Vec<Fixture<NaiveLocality>> {
    corpus::LOCALITIES.iter().map(|n| locality(n)).collect()
}

/// Reference element of the amalgam for a permutation of the left factor.
pub fn left(fx: &Fixture<NaiveAmalgam>, text: &str) -> usize {
    let p = cycles(text, fx.naive.g1.elems[0].len());
    fx.naive.of_left(fx.naive.g1.index[&p])
}

pub fn right(fx: &Fixture<NaiveAmalgam>, text: &str) -> usize {
    let p = cycles(text, fx.naive.g2.elems[0].len());
    fx.naive.of_right(fx.naive.g2.index[&p])
}
