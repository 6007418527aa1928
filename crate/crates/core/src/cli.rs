//! Command-line front end: model loading, command dispatch and reports.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus;
use crate::error::Error;
use crate::locality::check_locality;
use crate::model::{emit_locality, name_list, Model, ModelError, Object};
use crate::normal::{certify_pair_product, certify_product, enumerate_partial_normals, is_partial_normal};
use crate::partial::{check_axioms, classify_subset, subset_product, PartialGroup, SubsetKind};
use crate::quotient::{build_quotient, verify_quotient_lemmas};
use crate::report::{Check, CheckReport};
use crate::set::ElemSet;

/// Runs `$body` with `$pg` bound to the partial group inside `$obj`.
macro_rules! on_pg {
    ($obj:expr, |$pg:ident| $body:expr) => {
        match $obj {
            Object::Group(g) => {
                let $pg = g;
                $body
            }
            Object::Amalgam(a) => {
                let $pg = a.as_ref();
                $body
            }
            Object::Locality(l) => {
                let $pg = l.as_ref();
                $body
            }
        }
    };
}

#[derive(Parser, Debug)]
#[command(name = "locality", version, about = "Partial groups and localities: construction and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the partial-group axioms on all short words and classify named subsets.
    PgCheck(Common),
    /// Check the locality axioms.
    LocCheck(LocCheckArgs),
    /// Enumerate partial normal subgroups.
    Normals(Common),
    /// Product of named partial normal subgroups.
    Product(ProductArgs),
    /// Quotient by a partial normal subgroup.
    Quotient(QuotientArgs),
    /// Check the structural facts behind quotients.
    Lemmas(LemmasArgs),
    /// Show that the product of two partial normal subgroups of an amalgam can fail to be partial normal.
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in model name.
    #[arg(long, conflicts_with = "model")]
    pub builtin: Option<String>,
    /// Path to a model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Object inside the model; defaults to the last non-group object.
    #[arg(long, visible_aliases = ["locality", "amalgam"])]
    pub object: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub max_word_len: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Include per-check timings (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct LocCheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Prime used when the object is not a locality.
    #[arg(long, default_value_t = 2)]
    pub prime: u32,
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated subset names (`1`, `S`, `L` are built in).
    #[arg(long)]
    pub ideals: String,
    /// Also certify the product (partial normality, witnesses, reorderings).
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub kernel: String,
    /// Write the quotient as a model file.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LemmasArgs {
    #[command(flatten)]
    pub common: Common,
    /// Kernel name; all partial normal subgroups when omitted.
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "M")]
    pub first: String,
    #[arg(long, default_value = "N")]
    pub second: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub object: String,
    /// Descriptive lines that are not checks.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<String>,
    pub checks: CheckReport,
    pub overall: &'static str,
}

impl Report {
    fn new(command: &str, object: &str) -> Self {
        Report {
            command: command.into(),
            object: object.into(),
            info: Vec::new(),
            checks: CheckReport::new(),
            overall: "pass",
        }
    }

    fn finish(mut self, timing: bool) -> Self {
        if !timing {
            self.checks.strip_timing();
        }
        self.overall = if self.checks.passed() { "pass" } else { "fail" };
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut s = format!("{} on {}\n", self.command, self.object);
                for line in &self.info {
                    s.push_str(&format!("  {line}\n"));
                }
                s.push_str(&self.checks.to_string());
                s.push_str(&format!("overall: {}\n", self.overall));
                s
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {msg}")]
    Io { path: String, msg: String },
}

fn load(common: &Common) -> Result<(Model, String), CliError> {
    let (model, hint) = match (&common.builtin, &common.model) {
        (Some(b), _) => (corpus::builtin(b)?, corpus::canonical(b).map(str::to_string)),
        (None, Some(p)) => (Model::load(p)?, None),
        (None, None) => return Err(CliError::Usage("one of --builtin or --model is required".into())),
    };
    let name = match (&common.object, hint) {
        (Some(o), _) => o.clone(),
        (None, Some(h)) => h,
        (None, None) => model.default_object().map(str::to_string).ok_or(ModelError::NoObjects)?,
    };
    model.object(&name)?;
    Ok((model, name))
}

/// Resolves a subset name: a named subset, or `1`, `L`, `S`.
fn subset(model: &Model, owner: &str, name: &str) -> Result<ElemSet, CliError> {
    let obj = model.object(owner)?;
    let n = obj.size();
    match name {
        "1" => Ok(ElemSet::singleton(n, on_pg!(obj, |pg| pg.identity()))),
        "L" => Ok(ElemSet::full(n)),
        "S" => Ok(model.locality(owner)?.s().clone()),
        _ => Ok(model.subset(owner, name)?.members.clone()),
    }
}

fn kind_label(k: SubsetKind) -> &'static str {
    match k {
        SubsetKind::NotClosed => "not a partial subgroup",
        SubsetKind::PartialSubgroup => "partial subgroup",
        SubsetKind::Subgroup => "subgroup",
        SubsetKind::PSubgroup => "p-subgroup",
        SubsetKind::PartialNormal => "partial normal subgroup",
    }
}

fn pg_check(common: &Common) -> Result<Report, CliError> {
    let (model, name) = load(common)?;
    let obj = model.object(&name)?;
    let mut rep = Report::new("pg-check", &name);
    rep.info.push(format!("{} with {} elements", obj.kind(), obj.size()));
    let start = Instant::now();
    on_pg!(obj, |pg| {
        let ax = check_axioms(pg, common.max_word_len)?;
        rep.info.push(format!("{} words checked", ax.words_checked));
        let mut checks = ax.to_check_report(pg);
        if let Some(c) = checks.checks.last_mut() {
            *c = c.clone().timed(start);
        }
        rep.checks.extend(checks);
        for s in model.subsets_of(&name) {
            let h = classify_subset(pg, &s.members)?;
            rep.info.push(format!("subset {} ({} elements): {}", s.name, h.len(), kind_label(h.kind())));
        }
    });
    Ok(rep.finish(common.timing))
}

fn loc_check(args: &LocCheckArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let (model, name) = load(common)?;
    let mut rep = Report::new("loc-check", &name);
    let start = Instant::now();
    let checks = match model.object(&name)? {
        Object::Locality(loc) => {
            rep.info.push(format!("|L| = {}, |S| = {}, |Delta| = {}", loc.size(), loc.s().len(), loc.delta().len()));
            check_locality(loc.as_ref(), loc.s(), loc.delta(), loc.prime_p(), common.max_word_len)?
        }
        Object::Amalgam(a) => {
            // The right factor plays S, with Delta = {shared subgroup, right factor}.
            let s = a.right_part();
            let delta = vec![a.shared(), s.clone()];
            rep.info.push(format!(
                "amalgam read as a locality: S = right factor ({} elements), Delta = {{shared, S}}",
                s.len()
            ));
            check_locality(a.as_ref(), &s, &delta, args.prime, common.max_word_len)?
        }
        Object::Group(g) => {
            let s = g.sylow(args.prime).into_members();
            rep.info.push("group read as a locality with S Sylow and Delta = {S}".to_string());
            check_locality(g, &s, std::slice::from_ref(&s), args.prime, common.max_word_len)?
        }
    };
    let mut checks = checks;
    if let Some(c) = checks.checks.last_mut() {
        *c = c.clone().timed(start);
    }
    rep.checks.extend(checks);
    Ok(rep.finish(common.timing))
}

fn normals(common: &Common) -> Result<Report, CliError> {
    let (model, name) = load(common)?;
    let obj = model.object(&name)?;
    let mut rep = Report::new("normals", &name);
    let start = Instant::now();
    on_pg!(obj, |pg| {
        let all = enumerate_partial_normals(pg)?;
        rep.info.push(format!("{} partial normal subgroups", all.len()));
        let mut named = Vec::new();
        for (i, n) in all.iter().enumerate() {
            let names: Vec<&str> =
                model.subsets_of(&name).filter(|s| &s.members == n).map(|s| s.name.as_str()).collect();
            let tag = if names.is_empty() { String::new() } else { format!(" [{}]", names.join(", ")) };
            rep.info.push(format!("N{i}: order {}{tag} = {}", n.len(), pg.set_label(n)));
        }
        for s in model.subsets_of(&name) {
            let listed = all.contains(&s.members);
            let direct = is_partial_normal(pg, &s.members)?.is_partial_normal;
            if listed != direct {
                named.push(s.name.clone());
            }
        }
        rep.checks.push(
            Check::from_witnesses("enumeration agrees with the direct test on named subsets", named).timed(start),
        );
    });
    Ok(rep.finish(common.timing))
}

fn product(args: &ProductArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let (model, name) = load(common)?;
    let names = name_list(&args.ideals);
    if names.len() < 2 {
        return Err(CliError::Usage("--ideals needs at least two names".into()));
    }
    let factors = names.iter().map(|n| subset(&model, &name, n)).collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new("product", &name);
    rep.info.push(format!("factors: {}", names.join(" * ")));
    let obj = model.object(&name)?;
    let start = Instant::now();
    match obj {
        Object::Locality(loc) if args.verify => {
            let cert = if factors.len() == 2 {
                certify_pair_product(loc, &factors[0], &factors[1])?
            } else {
                certify_product(loc, &factors)?
            };
            rep.info.push(format!("product = {}", loc.set_label(&cert.product)));
            let mut checks = cert.to_report(loc);
            if let Some(c) = checks.checks.last_mut() {
                *c = c.clone().timed(start);
            }
            rep.checks.extend(checks);
        }
        _ => on_pg!(obj, |pg| {
            let prod = subset_product(pg, &factors);
            rep.info.push(format!("product = {}", pg.set_label(&prod)));
            let h = classify_subset(pg, &prod)?;
            rep.info.push(format!("product is a {}", kind_label(h.kind())));
            if args.verify {
                let ce = h
                    .conjugation_witness
                    .map(|(x, f)| format!("x = {}, f = {}", pg.label(x), pg.label(f)))
                    .unwrap_or_default();
                rep.checks.push(Check::expect("product is partial normal", h.partial_normal, ce).timed(start));
            }
        }),
    }
    Ok(rep.finish(common.timing))
}

fn quotient(args: &QuotientArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let (model, name) = load(common)?;
    let loc = model.locality(&name)?;
    let k = subset(&model, &name, &args.kernel)?;
    let mut rep = Report::new("quotient", &name);
    let start = Instant::now();
    let bundle = match build_quotient(loc, &k) {
        Ok(b) => b,
        Err(Error::Quotient(r)) => {
            rep.checks.extend(*r);
            return Ok(rep.finish(common.timing));
        }
        Err(e) => return Err(e.into()),
    };
    let q = &bundle.quotient;
    rep.info.push(format!("kernel {} of order {}", args.kernel, k.len()));
    rep.info.push(format!("|L/K| = {}, |S-bar| = {}, |Delta-bar| = {}", q.size(), q.s().len(), q.delta().len()));
    for (i, c) in bundle.cosets.iter().enumerate() {
        rep.info.push(format!("{} = {}", q.label(crate::set::Elem::from(i)), loc.set_label(&c.members)));
    }
    let mut checks = bundle.report.clone();
    if let Some(c) = checks.checks.last_mut() {
        *c = c.clone().timed(start);
    }
    rep.checks.extend(checks);
    if let Some(path) = &args.emit {
        let images: Vec<(String, ElemSet)> = model
            .subsets_of(&name)
            .filter(|s| k.is_subset(&s.members))
            .map(|s| (s.name.clone(), bundle.bar_set(&s.members)))
            .collect();
        let refs: Vec<(&str, &ElemSet)> = images.iter().map(|(n, s)| (n.as_str(), s)).collect();
        let qname = format!("{name}-mod-{}", args.kernel);
        std::fs::write(path, emit_locality(&qname, q, &refs))
            .map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        rep.info.push(format!("quotient written to {} as {qname}", path.display()));
    }
    Ok(rep.finish(common.timing))
}

fn lemmas(args: &LemmasArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let (model, name) = load(common)?;
    let loc = model.locality(&name)?;
    let kernels: Vec<(String, ElemSet)> = match &args.kernel {
        Some(k) => vec![(k.clone(), subset(&model, &name, k)?)],
        None => enumerate_partial_normals(loc)?.into_iter().enumerate().map(|(i, n)| (format!("N{i}"), n)).collect(),
    };
    let mut rep = Report::new("lemmas", &name);
    for (kname, k) in &kernels {
        let start = Instant::now();
        let mut r = verify_quotient_lemmas(loc, k, common.seed)?.prefixed(&format!("K = {kname}: "));
        if let Some(c) = r.checks.last_mut() {
            *c = c.clone().timed(start);
        }
        rep.info.push(format!("K = {kname} of order {}", k.len()));
        rep.checks.extend(r);
    }
    Ok(rep.finish(common.timing))
}

fn counterexample(args: &CounterexampleArgs) -> Result<Report, CliError> {
    let mut common = args.common.clone();
    if common.builtin.is_none() && common.model.is_none() {
        common.builtin = Some("PG-AM20".into());
    }
    let (model, name) = load(&common)?;
    let a = model.amalgam(&name)?;
    let m = subset(&model, &name, &args.first)?;
    let n = subset(&model, &name, &args.second)?;
    let mut rep = Report::new("counterexample", &name);
    rep.info.push(format!(
        "|L| = {}, left factor {}, right factor {}, shared {}",
        a.size(),
        a.left_part().len(),
        a.right_part().len(),
        a.shared().len()
    ));
    let start = Instant::now();
    let mv = is_partial_normal(a, &m)?;
    let nv = is_partial_normal(a, &n)?;
    rep.checks.push(Check::expect(
        format!("{} is partial normal", args.first),
        mv.is_partial_normal,
        format!("{} elements", m.len()),
    ));
    rep.checks.push(Check::expect(
        format!("{} is partial normal", args.second),
        nv.is_partial_normal,
        format!("{} elements", n.len()),
    ));
    let prod = subset_product(a, &[m.clone(), n.clone()]);
    let left = a.left_part();
    rep.checks.push(Check::expect(
        format!("{}{} is the left factor", args.first, args.second),
        prod == left,
        format!("{} elements", prod.len()),
    ));
    let pv = is_partial_normal(a, &prod)?;
    let found = pv.partial_subgroup && !pv.is_partial_normal;
    let detail = match pv.counterexample {
        Some((x, f)) => format!(
            "expected failure found: x = {}, f = {}, x^f = {}{}",
            a.label(x),
            a.label(f),
            a.conj(x, f).map(|c| a.label(c)).unwrap_or_default(),
            if a.right_part().contains(f) { ", f in the right factor" } else { "" }
        ),
        None => "product is partial normal; no counterexample".into(),
    };
    rep.checks.push(
        Check::expect(format!("{}{} is not partial normal (expected)", args.first, args.second), found, detail)
            .timed(start),
    );
    Ok(rep.finish(common.timing))
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::PgCheck(c) | Command::Normals(c) => c,
        Command::LocCheck(a) => &a.common,
        Command::Product(a) => &a.common,
        Command::Quotient(a) => &a.common,
        Command::Lemmas(a) => &a.common,
        Command::Counterexample(a) => &a.common,
    }
}

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::PgCheck(c) => pg_check(c),
        Command::LocCheck(a) => loc_check(a),
        Command::Normals(c) => normals(c),
        Command::Product(a) => product(a),
        Command::Quotient(a) => quotient(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Counterexample(a) => counterexample(a),
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code: 0 when every check passes, 1 when one fails, 2 on input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(rep) => {
            let _ = out.write_all(rep.render(common(&cli.command).format).as_bytes());
            if rep.overall == "pass" {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
