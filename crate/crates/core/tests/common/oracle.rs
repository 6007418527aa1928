//! Brute-force reference implementation. Shares nothing with the library:
//! permutations are plain image vectors, the domain of a locality is decided
//! by searching for a chain of objects, and closures are iterated to a
//! fixpoint over all pairs.

use std::collections::{BTreeSet, HashMap};

pub type P = Vec<u8>;
pub type Set = BTreeSet<usize>;

/// `a` first, then `b`.
pub fn compose(a: &P, b: &P) -> P {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &P) -> P {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// Parses `"(1 2)(3 4 5)"` on points `1..=degree`; `"()"` is the identity.
pub fn cycles(text: &str, degree: usize) -> P {
    let mut p: P = (0..degree as u8).collect();
    for cyc in text.split('(').skip(1) {
        let pts: Vec<usize> = cyc
            .trim_end_matches(|c: char| c == ')' || c.is_whitespace())
            .split_whitespace()
            .map(|t| t.trim_end_matches(')').parse::<usize>().unwrap() - 1)
            .collect();
        for i in 0..pts.len() {
            p[pts[i]] = pts[(i + 1) % pts.len()] as u8;
        }
    }
    p
}

pub fn degree_of(texts: &[&str]) -> usize {
    texts
        .iter()
        .flat_map(|t| t.split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty()))
        .map(|s| s.parse::<usize>().unwrap())
        .max()
        .unwrap_or(1)
}

pub struct NaiveGroup {
    pub elems: Vec<P>,
    pub index: HashMap<P, usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    pub id: usize,
}

impl NaiveGroup {
    pub fn generate(gens: &[P]) -> Self {
        let deg = gens[0].len();
        let id: P = (0..deg as u8).collect();
        let mut set: BTreeSet<P> = BTreeSet::from([id.clone()]);
        loop {
            let mut grew = false;
            for x in set.clone() {
                for g in gens {
                    grew |= set.insert(compose(&x, g));
                }
            }
            if !grew {
                break;
            }
        }
        let elems: Vec<P> = set.into_iter().collect();
        let index: HashMap<P, usize> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elems.len();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let inv = elems.iter().map(|p| index[&inverse(p)]).collect();
        NaiveGroup { id: index[&id], elems, index, mul, inv }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g⁻¹ x g`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn closure(&self, seed: &Set) -> Set {
        let mut h: Set = seed.clone();
        h.insert(self.id);
        loop {
            let before = h.len();
            for a in h.clone() {
                for b in h.clone() {
                    h.insert(self.mul(a, b));
                }
            }
            if h.len() == before {
                return h;
            }
        }
    }

    /// Every subgroup inside the subgroup `within`, as joins of cyclic ones.
    pub fn subgroups_within(&self, within: &Set) -> Vec<Set> {
        let mut fam: BTreeSet<Set> = within.iter().map(|&x| self.closure(&Set::from([x]))).collect();
        loop {
            let before = fam.len();
            for a in fam.clone() {
                for b in fam.clone() {
                    fam.insert(self.closure(&a.union(&b).copied().collect()));
                }
            }
            if fam.len() == before {
                return fam.into_iter().collect();
            }
        }
    }
}

/// What every reference structure offers: elements `0..size`, inversion, and
/// a product computed from scratch on words.
pub trait Naive {
    fn size(&self) -> usize;
    fn identity(&self) -> usize;
    fn inv(&self, f: usize) -> usize;
    fn product(&self, w: &[usize]) -> Option<usize>;

    fn pair(&self, a: usize, b: usize) -> Option<usize> {
        self.product(&[a, b])
    }

    /// `x^f = Π(f⁻¹, x, f)`.
    fn conj(&self, x: usize, f: usize) -> Option<usize> {
        self.product(&[self.inv(f), x, f])
    }
}

pub enum DeltaRule {
    MinOrder(usize),
    Seeds(Vec<Vec<P>>),
}

pub struct NaiveLocality {
    pub m: NaiveGroup,
    /// `S` in `M`-indices.
    pub s: Set,
    pub delta: Vec<Set>,
    /// `L` in `M`-indices, increasing.
    pub l: Vec<usize>,
    pos: HashMap<usize, usize>,
    /// Pair products and conjugates, each found by a chain search.
    pairs: Vec<Option<usize>>,
    conjugates: Vec<Option<usize>>,
}

pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

impl NaiveLocality {
    /// Panics unless `s_gens` generate a Sylow `p`-subgroup of `<gens>`.
    pub fn new(gens: &[P], p: usize, s_elems: &[P], rule: &DeltaRule) -> Self {
        let m = NaiveGroup::generate(gens);
        let s: Set = s_elems.iter().map(|x| m.index[x]).collect();
        assert_eq!(m.closure(&s), s, "S is not a subgroup");
        assert_eq!(s.len(), p_part(m.order(), p), "S is not Sylow");
        let subs = m.subgroups_within(&s);
        let mut fam: BTreeSet<Set> = match rule {
            DeltaRule::MinOrder(k) => subs.iter().filter(|q| q.len() >= *k).cloned().collect(),
            DeltaRule::Seeds(seeds) => {
                seeds.iter().map(|g| m.closure(&g.iter().map(|x| m.index[x]).collect())).collect()
            }
        };
        loop {
            let before = fam.len();
            for q in fam.clone() {
                for g in 0..m.order() {
                    let img: Set = q.iter().map(|&x| m.conj(x, g)).collect();
                    if img.is_subset(&s) {
                        for r in subs.iter().filter(|r| img.is_subset(r)) {
                            fam.insert(r.clone());
                        }
                    }
                }
            }
            if fam.len() == before {
                break;
            }
        }
        let delta: Vec<Set> = fam.into_iter().collect();
        let mut out = NaiveLocality {
            m,
            s,
            delta,
            l: Vec::new(),
            pos: HashMap::new(),
            pairs: Vec::new(),
            conjugates: Vec::new(),
        };
        out.l = (0..out.m.order()).filter(|&g| out.chain_exists(&[g])).collect();
        out.pos = out.l.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = out.l.len();
        out.pairs = (0..n * n).map(|i| out.product(&[i / n, i % n])).collect();
        out.conjugates = (0..n * n).map(|i| out.product(&[out.inv(i % n), i / n, i % n])).collect();
        out
    }

    /// Is there `P_0 ∈ Δ` whose successive conjugates along `w` (in `M`)
    /// all lie in `Δ`?
    pub fn chain_exists(&self, w_m: &[usize]) -> bool {
        self.delta.iter().any(|p0| {
            let mut cur = p0.clone();
            w_m.iter().all(|&g| {
                cur = cur.iter().map(|&x| self.m.conj(x, g)).collect();
                self.delta.contains(&cur)
            })
        })
    }

    pub fn to_m(&self, f: usize) -> usize {
        self.l[f]
    }

    pub fn in_l(&self, g: usize) -> Option<usize> {
        self.pos.get(&g).copied()
    }

    pub fn perm(&self, f: usize) -> &P {
        &self.m.elems[self.l[f]]
    }

    /// `S` as `L`-indices.
    pub fn s_in_l(&self) -> Set {
        self.s.iter().map(|&x| self.pos[&x]).collect()
    }

    /// `S_w` as `L`-indices: elements of `S` whose conjugates along `w` stay
    /// in `S` at every step.
    pub fn s_of_word(&self, w: &[usize]) -> Set {
        self.s
            .iter()
            .copied()
            .filter(|&x| {
                let mut y = x;
                w.iter().all(|&f| {
                    y = self.m.conj(y, self.l[f]);
                    self.s.contains(&y)
                })
            })
            .map(|x| self.pos[&x])
            .collect()
    }

    pub fn is_delta(&self, x_l: &Set) -> bool {
        let x: Set = x_l.iter().map(|&f| self.l[f]).collect();
        self.delta.contains(&x)
    }
}

impl Naive for NaiveLocality {
    fn size(&self) -> usize {
        self.l.len()
    }
    fn identity(&self) -> usize {
        self.pos[&self.m.id]
    }
    fn inv(&self, f: usize) -> usize {
        self.pos[&self.m.inv(self.l[f])]
    }
    fn product(&self, w: &[usize]) -> Option<usize> {
        let wm: Vec<usize> = w.iter().map(|&f| self.l[f]).collect();
        if !self.chain_exists(&wm) {
            return None;
        }
        let g = wm.iter().fold(self.m.id, |acc, &x| self.m.mul(acc, x));
        Some(self.pos[&g])
    }
    fn pair(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs[a * self.l.len() + b]
    }
    fn conj(&self, x: usize, f: usize) -> Option<usize> {
        self.conjugates[x * self.l.len() + f]
    }
}

/// `G1 ∪ G2` glued along the subgroup generated by the given pairs. Elements
/// are `(left, right)` with at least one side present.
pub struct NaiveAmalgam {
    pub g1: NaiveGroup,
    pub g2: NaiveGroup,
    pub elems: Vec<(Option<usize>, Option<usize>)>,
    left: HashMap<usize, usize>,
    right: HashMap<usize, usize>,
}

impl NaiveAmalgam {
    pub fn new(gens1: &[P], gens2: &[P], glue: &[(P, P)]) -> Self {
        let g1 = NaiveGroup::generate(gens1);
        let g2 = NaiveGroup::generate(gens2);
        let pairs: Vec<(usize, usize)> = glue.iter().map(|(a, b)| (g1.index[a], g2.index[b])).collect();
        let mut phi: HashMap<usize, usize> = HashMap::from([(g1.id, g2.id)]);
        loop {
            let before = phi.len();
            for (x, y) in phi.clone() {
                for &(a, b) in &pairs {
                    let (xa, yb) = (g1.mul(x, a), g2.mul(y, b));
                    if let Some(&old) = phi.get(&xa) {
                        assert_eq!(old, yb, "gluing is not a map");
                    }
                    phi.insert(xa, yb);
                }
            }
            if phi.len() == before {
                break;
            }
        }
        let back: HashMap<usize, usize> = phi.iter().map(|(&a, &b)| (b, a)).collect();
        assert_eq!(back.len(), phi.len(), "gluing is not injective");
        let mut elems: Vec<(Option<usize>, Option<usize>)> =
            (0..g1.order()).map(|a| (Some(a), phi.get(&a).copied())).collect();
        elems.extend((0..g2.order()).filter(|b| !back.contains_key(b)).map(|b| (None, Some(b))));
        let left = elems.iter().enumerate().filter_map(|(i, e)| e.0.map(|a| (a, i))).collect();
        let right = elems.iter().enumerate().filter_map(|(i, e)| e.1.map(|b| (b, i))).collect();
        NaiveAmalgam { g1, g2, elems, left, right }
    }

    pub fn of_left(&self, a: usize) -> usize {
        self.left[&a]
    }

    pub fn of_right(&self, b: usize) -> usize {
        self.right[&b]
    }

    pub fn shared(&self) -> Set {
        (0..self.elems.len()).filter(|&i| self.elems[i].0.is_some() && self.elems[i].1.is_some()).collect()
    }
}

impl Naive for NaiveAmalgam {
    fn size(&self) -> usize {
        self.elems.len()
    }
    fn identity(&self) -> usize {
        self.left[&self.g1.id]
    }
    fn inv(&self, f: usize) -> usize {
        match self.elems[f] {
            (Some(a), _) => self.left[&self.g1.inv(a)],
            (None, Some(b)) => self.right[&self.g2.inv(b)],
            _ => unreachable!(),
        }
    }
    fn product(&self, w: &[usize]) -> Option<usize> {
        if w.iter().all(|&f| self.elems[f].0.is_some()) {
            let a = w.iter().fold(self.g1.id, |acc, &f| self.g1.mul(acc, self.elems[f].0.unwrap()));
            return Some(self.left[&a]);
        }
        if w.iter().all(|&f| self.elems[f].1.is_some()) {
            let b = w.iter().fold(self.g2.id, |acc, &f| self.g2.mul(acc, self.elems[f].1.unwrap()));
            return Some(self.right[&b]);
        }
        None
    }
}

/// Closed under inversion and under products of defined pairs.
pub fn partial_subgroup_closure<N: Naive>(pg: &N, seed: &Set) -> Set {
    let mut h = seed.clone();
    h.insert(pg.identity());
    loop {
        let before = h.len();
        for a in h.clone() {
            h.insert(pg.inv(a));
            for b in h.clone() {
                if let Some(c) = pg.pair(a, b) {
                    h.insert(c);
                }
            }
        }
        if h.len() == before {
            return h;
        }
    }
}

pub fn partial_normal_closure<N: Naive>(pg: &N, seed: &Set) -> Set {
    let mut h = seed.clone();
    loop {
        h = partial_subgroup_closure(pg, &h);
        let before = h.len();
        for x in h.clone() {
            for f in 0..pg.size() {
                if let Some(y) = pg.conj(x, f) {
                    h.insert(y);
                }
            }
        }
        if h.len() == before {
            return h;
        }
    }
}

pub fn is_partial_subgroup<N: Naive>(pg: &N, h: &Set) -> bool {
    partial_subgroup_closure(pg, h) == *h
}

pub fn is_partial_normal<N: Naive>(pg: &N, h: &Set) -> bool {
    partial_normal_closure(pg, h) == *h
}

/// Joins of closures of singletons, iterated until nothing new appears.
fn joins_to_fixpoint<N: Naive>(pg: &N, base: &Set, close: impl Fn(&Set) -> Set) -> Vec<Set> {
    let start = close(base);
    let mut fam: BTreeSet<Set> = (0..pg.size())
        .map(|f| {
            let mut x = start.clone();
            x.insert(f);
            close(&x)
        })
        .collect();
    fam.insert(start);
    loop {
        let before = fam.len();
        let cur: Vec<Set> = fam.iter().cloned().collect();
        for a in &cur {
            for b in &cur {
                fam.insert(close(&a.union(b).copied().collect()));
            }
        }
        if fam.len() == before {
            let mut out: Vec<Set> = fam.into_iter().collect();
            out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            return out;
        }
    }
}

pub fn partial_normals<N: Naive>(pg: &N) -> Vec<Set> {
    joins_to_fixpoint(pg, &Set::new(), |x| partial_normal_closure(pg, x))
}

pub fn partial_subgroups_containing<N: Naive>(pg: &N, k: &Set) -> Vec<Set> {
    joins_to_fixpoint(pg, k, |x| partial_subgroup_closure(pg, x))
}

/// `{Π(k, f) : k ∈ K, (k, f) ∈ D}`.
pub fn right_coset<N: Naive>(pg: &N, k: &Set, f: usize) -> Set {
    k.iter().filter_map(|&x| pg.pair(x, f)).collect()
}

/// The cosets `Kf` that are maximal under inclusion, sorted.
pub fn maximal_cosets<N: Naive>(pg: &N, k: &Set) -> Vec<Set> {
    let all: BTreeSet<Set> = (0..pg.size()).map(|f| right_coset(pg, k, f)).collect();
    all.iter().filter(|c| !all.iter().any(|d| d.len() > c.len() && c.is_subset(d))).cloned().collect()
}

/// Product of subsets: `{Π(x_1, ..., x_k) : x_i ∈ X_i, word in D}`.
pub fn subset_product<N: Naive>(pg: &N, factors: &[Set]) -> Set {
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for x in factors {
        words = words.iter().flat_map(|w| x.iter().map(move |&f| [w.clone(), vec![f]].concat())).collect();
    }
    words.iter().filter_map(|w| pg.product(w)).collect()
}
