//! Line-based text formats and the on-disk result cache.
//!
//! Every file is ASCII with LF newlines. Monomials and divided monomials are
//! written as space-separated exponents; lines starting with `#` are comments
//! unless a format gives them meaning.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::action::Group;
use crate::dual::{DividedElement, DividedMonomial};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// One monomial per line; repeated lines cancel.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    content_lines(text).map(str::parse::<Monomial>).collect::<Result<Vec<_>>>().map(Polynomial::from_terms)
}

pub fn write_polynomial(f: &Polynomial) -> String {
    let mut s = String::new();
    for t in f.terms() {
        writeln!(s, "{t}").unwrap();
    }
    s
}

fn parse_divided_line(line: &str) -> Result<DividedMonomial> {
    line.parse::<Monomial>().map(|m| DividedMonomial(m.0))
}

fn header_fields<'a>(line: &'a str, magic: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let rest = line
        .strip_prefix(magic)
        .ok_or_else(|| Error::Parse(format!("expected header {magic:?}, found {line:?}")))?;
    rest.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field {kv:?}"))))
        .collect()
}

fn field<'a>(fields: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("header lacks {key}=")))
}

fn num<T: std::str::FromStr>(fields: &[(&str, &str)], key: &str) -> Result<T> {
    let v = field(fields, key)?;
    v.parse().map_err(|_| Error::Parse(format!("bad value {v:?} for {key}")))
}

fn check_arity(m: &Monomial, k: usize) -> Result<()> {
    if m.k() != k {
        return Err(Error::ArityMismatch { expected: k, found: m.k() });
    }
    Ok(())
}

/// Admissible monomials of `(QP_k)_n` in basis order, with the rank of the
/// hit subspace of `(P_k)_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFile {
    pub k: usize,
    pub n: u32,
    pub admissibles: Vec<Monomial>,
    pub hit_rank: usize,
}

impl BasisFile {
    const MAGIC: &'static str = "hitkit-basis v1";

    pub fn to_text(&self) -> String {
        let mut s = format!("{} k={} n={} dim={} order=weightlex\n", Self::MAGIC, self.k, self.n, self.admissibles.len());
        for m in &self.admissibles {
            writeln!(s, "{m}").unwrap();
        }
        writeln!(s, "#hit-rank {}", self.hit_rank).unwrap();
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let fields = header_fields(lines.next().unwrap_or(""), Self::MAGIC)?;
        if field(&fields, "order")? != "weightlex" {
            return Err(Error::Parse("unsupported monomial order".into()));
        }
        let (k, n, dim): (usize, u32, usize) = (num(&fields, "k")?, num(&fields, "n")?, num(&fields, "dim")?);
        let mut admissibles = Vec::with_capacity(dim);
        let mut hit_rank = None;
        for line in lines {
            if let Some(r) = line.strip_prefix("#hit-rank ") {
                hit_rank = Some(r.trim().parse().map_err(|_| Error::Parse(format!("bad hit rank {r:?}")))?);
            } else if !line.is_empty() && !line.starts_with('#') {
                let m: Monomial = line.parse()?;
                check_arity(&m, k)?;
                if m.degree() != n {
                    return Err(Error::DegreeMismatch { expected: n, found: m.degree() });
                }
                admissibles.push(m);
            }
        }
        if admissibles.len() != dim {
            return Err(Error::Parse(format!("header says dim={dim} but {} monomials follow", admissibles.len())));
        }
        let hit_rank = hit_rank.ok_or_else(|| Error::Parse("missing #hit-rank line".into()))?;
        Ok(BasisFile { k, n, admissibles, hit_rank })
    }
}

/// A basis of invariants, each element a sum of admissible monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFile {
    pub group: Group,
    pub k: usize,
    pub n: u32,
    pub elements: Vec<Polynomial>,
}

impl InvariantFile {
    const MAGIC: &'static str = "hitkit-inv v1";

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} group={} k={} n={} dim={}\n",
            Self::MAGIC,
            self.group.name(),
            self.k,
            self.n,
            self.elements.len()
        );
        for (i, f) in self.elements.iter().enumerate() {
            writeln!(s, "#element {}", i + 1).unwrap();
            s.push_str(&write_polynomial(f));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let fields = header_fields(lines.next().unwrap_or(""), Self::MAGIC)?;
        let group = field(&fields, "group")?.parse()?;
        let (k, n, dim): (usize, u32, usize) = (num(&fields, "k")?, num(&fields, "n")?, num(&fields, "dim")?);
        let mut elements: Vec<Vec<Monomial>> = Vec::new();
        for line in lines {
            if line.starts_with("#element") {
                elements.push(Vec::new());
            } else if !line.is_empty() && !line.starts_with('#') {
                let m: Monomial = line.parse()?;
                check_arity(&m, k)?;
                elements
                    .last_mut()
                    .ok_or_else(|| Error::Parse("monomial before the first #element line".into()))?
                    .push(m);
            }
        }
        if elements.len() != dim {
            return Err(Error::Parse(format!("header says dim={dim} but {} elements follow", elements.len())));
        }
        let elements = elements.into_iter().map(Polynomial::from_terms).collect();
        Ok(InvariantFile { group, k, n, elements })
    }
}

/// Elements of the divided power algebra; elements are separated by blank
/// lines and repeated lines within an element cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFile {
    pub k: usize,
    pub n: u32,
    pub elements: Vec<DividedElement>,
}

impl DualFile {
    const MAGIC: &'static str = "hitkit-dual v1";

    pub fn to_text(&self) -> String {
        let mut s = format!("{} k={} n={}\n", Self::MAGIC, self.k, self.n);
        for (i, u) in self.elements.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for t in u.terms() {
                writeln!(s, "{}", t.partner()).unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let fields = header_fields(lines.next().unwrap_or(""), Self::MAGIC)?;
        let (k, n): (usize, u32) = (num(&fields, "k")?, num(&fields, "n")?);
        let mut elements = Vec::new();
        let mut cur: Vec<DividedMonomial> = Vec::new();
        for line in lines.map(str::trim) {
            if line.is_empty() {
                if !cur.is_empty() {
                    elements.push(DividedElement::from_terms(std::mem::take(&mut cur)));
                }
            } else if !line.starts_with('#') {
                let m = parse_divided_line(line)?;
                check_arity(&m.partner(), k)?;
                if m.degree() != n {
                    return Err(Error::DegreeMismatch { expected: n, found: m.degree() });
                }
                cur.push(m);
            }
        }
        if !cur.is_empty() {
            elements.push(DividedElement::from_terms(cur));
        }
        Ok(DualFile { k, n, elements })
    }
}

/// Result files under a root directory, named `k<K>_n<N>_<kind>.txt`.
#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub const ENV: &'static str = "HITKIT_CACHE";
    pub const DEFAULT_ROOT: &'static str = ".hitkit-cache";

    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// Root from `HITKIT_CACHE`, else `./.hitkit-cache`.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(Self::ENV).map_or_else(|| PathBuf::from(Self::DEFAULT_ROOT), PathBuf::from))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, k: usize, n: u32, kind: &str) -> PathBuf {
        self.root.join(format!("k{k}_n{n}_{kind}.txt"))
    }

    /// The cached text, if present.
    pub fn read(&self, k: usize, n: u32, kind: &str) -> Result<Option<String>> {
        match fs::read_to_string(self.path(k, n, kind)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial file.
    pub fn write(&self, k: usize, n: u32, kind: &str, text: &str) -> Result<PathBuf> {
        let path = self.path(k, n, kind);
        write_atomic(&path, text)?;
        Ok(path)
    }
}

/// Writes `text` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}
