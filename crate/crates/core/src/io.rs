//! Canonical JSON and the on-disk enumeration cache.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enumerate::{Enumeration, Limits};
use crate::error::{Error, Result};
use crate::poset::{FinitePoset, PosetJson};
use crate::simplicial::{enumerate_hst, Triangulation};
use crate::subset::RawSubset;
use crate::zonotopal::{enumerate_bruhat, Cubillage};

/// Bumped whenever the layout of cached files changes.
pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "TAMARI_CACHE";

/// Compact JSON with object keys sorted, newline-terminated.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // serde_json::Map is a BTreeMap unless `preserve_order` is enabled
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string(&v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Bruhat,
    Hst,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Bruhat => "bruhat",
            Kind::Hst => "hst",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bruhat" => Ok(Kind::Bruhat),
            "hst" => Ok(Kind::Hst),
            _ => Err(Error::Parse(format!("unknown kind {s:?}, expected bruhat or hst"))),
        }
    }
}

/// An enumerated poset as stored on disk. `elements[i]` is the spectrum
/// (bruhat) or the simplex list (hst) of poset element `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationFile {
    pub format_version: u32,
    pub kind: Kind,
    pub n: usize,
    pub delta: usize,
    pub elements: Vec<Vec<RawSubset>>,
    pub poset: PosetJson,
}

fn raw(v: &[crate::subset::Subset]) -> Vec<RawSubset> {
    v.iter().map(|s| RawSubset(s.to_vec())).collect()
}

impl EnumerationFile {
    pub fn from_bruhat(e: &Enumeration<Cubillage>) -> Result<Self> {
        let first = e.elements.first().ok_or_else(|| Error::Internal("empty enumeration".into()))?;
        Ok(EnumerationFile {
            format_version: FORMAT_VERSION,
            kind: Kind::Bruhat,
            n: first.n(),
            delta: first.delta(),
            elements: e.elements.iter().map(|q| raw(q.spectrum())).collect(),
            poset: e.poset.to_json(),
        })
    }

    pub fn from_hst(e: &Enumeration<Triangulation>) -> Result<Self> {
        let first = e.elements.first().ok_or_else(|| Error::Internal("empty enumeration".into()))?;
        Ok(EnumerationFile {
            format_version: FORMAT_VERSION,
            kind: Kind::Hst,
            n: first.n(),
            delta: first.delta(),
            elements: e.elements.iter().map(|t| raw(t.simplices())).collect(),
            poset: e.poset.to_json(),
        })
    }

    fn check_header(&self, kind: Kind) -> Result<FinitePoset> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("format version {} (expected {FORMAT_VERSION})", self.format_version)));
        }
        if self.kind != kind {
            return Err(Error::Mismatch(format!("file holds {} but {kind} was requested", self.kind)));
        }
        if self.elements.len() != self.poset.elements.len() {
            return Err(Error::Parse("element and poset key counts differ".into()));
        }
        FinitePoset::from_json(self.poset.clone())
    }

    fn check_keys(&self, keys: impl Iterator<Item = String>) -> Result<()> {
        for (i, k) in keys.enumerate() {
            if k != self.poset.elements[i] {
                return Err(Error::Parse(format!("poset key {i} is {:?} but the element is {k:?}", self.poset.elements[i])));
            }
        }
        Ok(())
    }

    /// Rebuilds and revalidates every cubillage.
    pub fn to_bruhat(&self) -> Result<Enumeration<Cubillage>> {
        let poset = self.check_header(Kind::Bruhat)?;
        let elements = self
            .elements
            .iter()
            .map(|sp| {
                let s = sp.iter().map(|r| r.resolve(self.n)).collect::<Result<Vec<_>>>()?;
                Cubillage::new(self.n, self.delta + 1, s)
            })
            .collect::<Result<Vec<_>>>()?;
        self.check_keys(elements.iter().map(|q| q.key()))?;
        Ok(Enumeration { elements, poset })
    }

    /// Rebuilds and revalidates every triangulation.
    pub fn to_hst(&self) -> Result<Enumeration<Triangulation>> {
        let poset = self.check_header(Kind::Hst)?;
        let elements = self
            .elements
            .iter()
            .map(|sx| {
                let s = sx.iter().map(|r| r.resolve(self.n)).collect::<Result<Vec<_>>>()?;
                Triangulation::new(self.n, self.delta, s)
            })
            .collect::<Result<Vec<_>>>()?;
        self.check_keys(elements.iter().map(|t| t.key()))?;
        Ok(Enumeration { elements, poset })
    }
}

/// Directory of canonical enumeration files keyed by `(kind, n, δ, version)`.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: Kind, n: usize, delta: usize) -> PathBuf {
        self.dir.join(format!("{kind}-n{n}-d{delta}-v{FORMAT_VERSION}.json"))
    }

    pub fn load(&self, kind: Kind, n: usize, delta: usize) -> Result<Option<EnumerationFile>> {
        let p = self.path(kind, n, delta);
        match fs::read_to_string(&p) {
            Ok(s) => {
                let f: EnumerationFile = serde_json::from_str(&s)?;
                if (f.kind, f.n, f.delta) != (kind, n, delta) {
                    return Err(Error::Mismatch(format!("cache file {} has unexpected contents", p.display())));
                }
                Ok(Some(f))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes atomically (temp file then rename).
    pub fn store(&self, f: &EnumerationFile) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let p = self.path(f.kind, f.n, f.delta);
        let tmp = p.with_extension("json.tmp");
        fs::write(&tmp, canonical_json(f)?)?;
        fs::rename(&tmp, &p)?;
        Ok(p)
    }

    /// Cached `B(n, δ+1)`; the flag is true on a cache hit.
    pub fn bruhat(&self, n: usize, delta: usize, limits: &Limits) -> Result<(Enumeration<Cubillage>, bool)> {
        if let Some(f) = self.load(Kind::Bruhat, n, delta)? {
            return Ok((f.to_bruhat()?, true));
        }
        let e = enumerate_bruhat(n, delta + 1, limits)?;
        self.store(&EnumerationFile::from_bruhat(&e)?)?;
        Ok((e, false))
    }

    /// Cached `S(n, δ)`; the flag is true on a cache hit.
    pub fn hst(&self, n: usize, delta: usize, limits: &Limits) -> Result<(Enumeration<Triangulation>, bool)> {
        if let Some(f) = self.load(Kind::Hst, n, delta)? {
            return Ok((f.to_hst()?, true));
        }
        let e = enumerate_hst(n, delta, limits)?;
        self.store(&EnumerationFile::from_hst(&e)?)?;
        Ok((e, false))
    }
}
