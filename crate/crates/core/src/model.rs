//! Text model files: one definition per line, `#` starts a comment.
//!
//! ```text
//! group G1 = (1 2), (3 4 5 6)
//! group C3 = table 0 1 2 / 1 2 0 / 2 0 1
//! amalgam A = G1 * G2 along (1 2) -> (2 8)(3 7)(4 6), (3 5)(4 6) -> (1 5)(2 6)(3 7)(4 8)
//! locality L = S4 prime 2 sylow auto delta seeds <(1 2)(3 4), (1 3)(2 4)>
//! locality L5 = S5 prime 2 sylow auto delta min-order 2
//! subset V in L = <(1 2)(3 4), (1 3)(2 4)>
//! subset M in A = <left:(3 4 5 6)>
//! tlocality Q = {"prime": 2, ...}
//! ```
//!
//! `<...>` is the partial subgroup generated by the listed elements, `{...}`
//! the listed elements themselves.

use std::path::Path;

use crate::amalgam::{build_amalgam, Amalgam, AmalgamSpec};
use crate::error::Error;
use crate::group::{generate_group, FiniteGroup};
use crate::locality::{delta_close, delta_min_order, locality_from_group, Locality, LocalityTables};
use crate::partial::{partial_subgroup_closure, PartialGroup};
use crate::perm::Perm;
use crate::set::{Elem, ElemSet};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("no objects")]
    NoObjects,
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown name '{name}'")]
    UnknownName { line: usize, name: String },
    #[error("line {line}: duplicate name '{name}'")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: Box<Error> },
    #[error("unknown object '{0}'")]
    NoSuchObject(String),
    #[error("'{name}' is not {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, Debug)]
pub enum Object {
    Group(FiniteGroup),
    Amalgam(Box<Amalgam>),
    Locality(Box<Locality>),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Amalgam(_) => "amalgam",
            Object::Locality(_) => "locality",
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Object::Group(g) => g.order(),
            Object::Amalgam(a) => a.size(),
            Object::Locality(l) => l.size(),
        }
    }

    /// Resolves an element written as a permutation (prefixed `left:` or
    /// `right:` in an amalgam) or as an element label.
    pub fn element(&self, text: &str) -> Option<Elem> {
        let text = text.trim();
        match self {
            Object::Group(g) => {
                let deg = g.perm(Elem(0))?.degree();
                g.find_perm(&Perm::parse(text, deg).ok()?)
            }
            Object::Amalgam(a) => {
                if let Some(t) = text.strip_prefix("left:") {
                    let deg = a.spec().left.perm(Elem(0))?.degree();
                    a.find_left_perm(&Perm::parse(t, deg).ok()?)
                } else if let Some(t) = text.strip_prefix("right:") {
                    let deg = a.spec().right.perm(Elem(0))?.degree();
                    a.find_right_perm(&Perm::parse(t, deg).ok()?)
                } else {
                    None
                }
            }
            Object::Locality(l) => l.find_label(text).or_else(|| {
                let deg = l.perm(Elem(0))?.degree();
                l.find_perm(&Perm::parse(text, deg).ok()?)
            }),
        }
    }

    pub fn closure(&self, seed: &ElemSet) -> ElemSet {
        match self {
            Object::Group(g) => partial_subgroup_closure(g, seed),
            Object::Amalgam(a) => partial_subgroup_closure(a.as_ref(), seed),
            Object::Locality(l) => partial_subgroup_closure(l.as_ref(), seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedSubset {
    pub name: String,
    pub owner: String,
    pub members: ElemSet,
}

#[derive(Clone, Debug, Default)]
pub struct Model {
    objects: Vec<(String, Object)>,
    subsets: Vec<NamedSubset>,
}

/// Splits on commas that are not inside parentheses or braces.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
}

impl Model {
    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ModelError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut model = Model::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if body.is_empty() {
                continue;
            }
            model.parse_line(line, body)?;
        }
        if model.objects.is_empty() {
            return Err(ModelError::NoObjects);
        }
        Ok(model)
    }

    fn parse_line(&mut self, line: usize, body: &str) -> Result<(), ModelError> {
        let syntax = |msg: &str| ModelError::Syntax { line, msg: msg.to_string() };
        let invalid = |e: Error| ModelError::Invalid { line, source: Box::new(e) };
        let (head, rhs) = body.split_once('=').ok_or_else(|| syntax("expected '='"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let rhs = rhs.trim();
        match head.as_slice() {
            ["group", name] => {
                let g = if let Some(rows) = rhs.strip_prefix("table") {
                    let rows: Vec<Vec<u32>> = rows
                        .split('/')
                        .map(|r| r.split_whitespace().map(|x| x.parse::<u32>()).collect::<Result<_, _>>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| syntax("table entries must be integers"))?;
                    FiniteGroup::from_table(&rows).map_err(invalid)?
                } else {
                    let gens = split_top(rhs, ',');
                    let deg = gens
                        .iter()
                        .map(|g| Perm::max_point(g))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(invalid)?
                        .into_iter()
                        .max()
                        .unwrap_or(0)
                        .max(1);
                    let perms =
                        gens.iter().map(|g| Perm::parse(g, deg)).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
                    generate_group(&perms).map_err(invalid)?
                };
                self.add(line, name, Object::Group(g))
            }
            ["amalgam", name] => {
                let (factors, along) =
                    rhs.split_once(" along ").ok_or_else(|| syntax("expected 'G1 * G2 along ...'"))?;
                let (l, r) = factors.split_once('*').ok_or_else(|| syntax("expected 'G1 * G2'"))?;
                let left = self.group(line, l.trim())?.clone();
                let right = self.group(line, r.trim())?.clone();
                let mut pairs = Vec::new();
                for pair in split_top(along, ',') {
                    let (a, b) = pair.split_once("->").ok_or_else(|| syntax("expected 'a -> b'"))?;
                    let a = Object::Group(left.clone())
                        .element(a)
                        .ok_or_else(|| syntax(&format!("'{}' is not in {}", a.trim(), l.trim())))?;
                    let b = Object::Group(right.clone())
                        .element(b)
                        .ok_or_else(|| syntax(&format!("'{}' is not in {}", b.trim(), r.trim())))?;
                    pairs.push((a, b));
                }
                let spec = AmalgamSpec::from_generator_pairs(left, right, &pairs).map_err(invalid)?;
                self.add(line, name, Object::Amalgam(Box::new(build_amalgam(spec))))
            }
            ["locality", name] => {
                let loc = self.parse_locality(line, rhs)?;
                self.add(line, name, Object::Locality(Box::new(loc)))
            }
            ["tlocality", name] => {
                let tables: LocalityTables =
                    serde_json::from_str(rhs).map_err(|e| syntax(&format!("bad tables: {e}")))?;
                let loc = Locality::from_tables(&tables).map_err(invalid)?;
                self.add(line, name, Object::Locality(Box::new(loc)))
            }
            ["subset", name, "in", owner] => {
                if !is_name(name) {
                    return Err(syntax("bad subset name"));
                }
                if self.subsets.iter().any(|s| s.name == *name) {
                    return Err(ModelError::Duplicate { line, name: name.to_string() });
                }
                let obj =
                    self.lookup(owner).ok_or_else(|| ModelError::UnknownName { line, name: owner.to_string() })?;
                let (closure, inner) = if let Some(x) = rhs.strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
                    (true, x)
                } else if let Some(x) = rhs.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
                    (false, x)
                } else {
                    return Err(syntax("subset must be <generators> or {elements}"));
                };
                let mut set = ElemSet::empty(obj.size());
                for e in split_top(inner, ',') {
                    set.insert(obj.element(e).ok_or_else(|| syntax(&format!("'{e}' is not an element of {owner}")))?);
                }
                let members = if closure { obj.closure(&set) } else { set };
                self.subsets.push(NamedSubset { name: name.to_string(), owner: owner.to_string(), members });
                Ok(())
            }
            _ => Err(syntax("expected 'group', 'amalgam', 'locality', 'tlocality' or 'subset'")),
        }
    }

    fn parse_locality(&self, line: usize, rhs: &str) -> Result<Locality, ModelError> {
        let syntax = |msg: &str| ModelError::Syntax { line, msg: msg.to_string() };
        let invalid = |e: Error| ModelError::Invalid { line, source: Box::new(e) };
        let (gname, rest) =
            rhs.split_once(char::is_whitespace).ok_or_else(|| syntax("expected 'GROUP prime P ...'"))?;
        let m = self.group(line, gname)?;
        let rest = rest.trim().strip_prefix("prime").ok_or_else(|| syntax("expected 'prime'"))?.trim();
        let (p, rest) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax("expected 'sylow'"))?;
        let p: u32 = p.parse().map_err(|_| syntax("prime must be an integer"))?;
        let rest = rest.trim().strip_prefix("sylow").ok_or_else(|| syntax("expected 'sylow'"))?.trim();
        let (sylow, delta) = rest.split_once(" delta ").ok_or_else(|| syntax("expected 'delta'"))?;
        let mobj = Object::Group(m.clone());
        let gen_set = |text: &str| -> Result<ElemSet, ModelError> {
            let inner = text
                .trim()
                .strip_prefix('<')
                .and_then(|x| x.strip_suffix('>'))
                .ok_or_else(|| syntax("expected <generators>"))?;
            let mut set = ElemSet::empty(m.order());
            for e in split_top(inner, ',') {
                set.insert(mobj.element(e).ok_or_else(|| syntax(&format!("'{e}' is not an element of {gname}")))?);
            }
            Ok(m.subgroup_closure(&set).into_members())
        };
        let s = match sylow.trim() {
            "auto" => m.sylow(p).into_members(),
            other => gen_set(other)?,
        };
        let delta = delta.trim();
        let family = if let Some(n) = delta.strip_prefix("min-order") {
            let n: usize = n.trim().parse().map_err(|_| syntax("min-order takes an integer"))?;
            delta_min_order(m, &s, n).map_err(invalid)?
        } else if let Some(seeds) = delta.strip_prefix("seeds") {
            let seeds = split_top(seeds, ';').into_iter().map(gen_set).collect::<Result<Vec<_>, _>>()?;
            delta_close(m, &s, &seeds).map_err(invalid)?
        } else {
            return Err(syntax("delta must be 'min-order N' or 'seeds <..>; <..>'"));
        };
        locality_from_group(m, p, &family).map_err(invalid)
    }

    fn add(&mut self, line: usize, name: &str, obj: Object) -> Result<(), ModelError> {
        if !is_name(name) {
            return Err(ModelError::Syntax { line, msg: format!("bad name '{name}'") });
        }
        if self.lookup(name).is_some() {
            return Err(ModelError::Duplicate { line, name: name.to_string() });
        }
        self.objects.push((name.to_string(), obj));
        Ok(())
    }

    fn group(&self, line: usize, name: &str) -> Result<&FiniteGroup, ModelError> {
        match self.lookup(name) {
            Some(Object::Group(g)) => Ok(g),
            Some(_) => Err(ModelError::Syntax { line, msg: format!("'{name}' is not a group") }),
            None => Err(ModelError::UnknownName { line, name: name.to_string() }),
        }
    }

    fn lookup(&self, name: &str) -> Option<&Object> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn object(&self, name: &str) -> Result<&Object, ModelError> {
        self.lookup(name).ok_or_else(|| ModelError::NoSuchObject(name.to_string()))
    }

    pub fn objects(&self) -> impl Iterator<Item = (&str, &Object)> {
        self.objects.iter().map(|(n, o)| (n.as_str(), o))
    }

    /// The last non-group object, or the last object if all are groups.
    pub fn default_object(&self) -> Option<&str> {
        self.objects
            .iter()
            .rev()
            .find(|(_, o)| !matches!(o, Object::Group(_)))
            .or(self.objects.last())
            .map(|(n, _)| n.as_str())
    }

    pub fn locality(&self, name: &str) -> Result<&Locality, ModelError> {
        match self.object(name)? {
            Object::Locality(l) => Ok(l),
            _ => Err(ModelError::WrongKind { name: name.to_string(), expected: "a locality" }),
        }
    }

    pub fn amalgam(&self, name: &str) -> Result<&Amalgam, ModelError> {
        match self.object(name)? {
            Object::Amalgam(a) => Ok(a),
            _ => Err(ModelError::WrongKind { name: name.to_string(), expected: "an amalgam" }),
        }
    }

    pub fn subsets_of<'a>(&'a self, owner: &'a str) -> impl Iterator<Item = &'a NamedSubset> + 'a {
        self.subsets.iter().filter(move |s| s.owner == owner)
    }

    pub fn subset(&self, owner: &str, name: &str) -> Result<&NamedSubset, ModelError> {
        self.subsets
            .iter()
            .find(|s| s.owner == owner && s.name == name)
            .ok_or_else(|| ModelError::NoSuchObject(format!("{name} in {owner}")))
    }

    /// Adds an already built object, as done for the built-in corpus.
    pub fn insert(&mut self, name: &str, obj: Object) -> Result<(), ModelError> {
        self.add(0, name, obj)
    }

    pub fn insert_subset(&mut self, owner: &str, name: &str, members: ElemSet) {
        self.subsets.push(NamedSubset { name: name.to_string(), owner: owner.to_string(), members });
    }
}

/// One model line holding `loc` as explicit tables, followed by `subset`
/// lines for `subsets`.
pub fn emit_locality(name: &str, loc: &Locality, subsets: &[(&str, &ElemSet)]) -> String {
    let json = serde_json::to_string(&loc.to_tables()).expect("tables serialize");
    let mut out = format!("tlocality {name} = {json}\n");
    for (sname, set) in subsets {
        let items: Vec<String> = set.iter().map(|f| loc.label(f)).collect();
        out.push_str(&format!("subset {sname} in {name} = {{{}}}\n", items.join(", ")));
    }
    out
}

/// Parses `name` lists such as `V4,A4`.
pub fn name_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}
