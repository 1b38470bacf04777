//! Benchmark configuration (TOML).
//!
//! ```toml
//! [params]
//! slots = 8192
//! t = 65537
//! chunk_size = 8192
//! key_holder = "A"
//! value_scale = 1.0
//! vector_seed = 7
//!
//! [[matrix]]
//! name = "tiny"
//! path = "tiny.mtx"
//!
//! [[matrix]]
//! name = "rand-64"
//! synthetic = { rows = 64, cols = 64, nnz = 400, seed = 1 }
//!
//! [[matrix]]
//! suitesparse = "HB/arc130"   # read from the fetch cache only
//!
//! [scaling_suite]
//! points = 10
//! min_nnz = 100
//! max_nnz = 100000
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::synthetic::{ScalingSuite, SyntheticSpec};
use crate::error::{Error, Result};
use crate::he::HeParams;
use crate::pipeline::PartyRole;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeyHolder {
    A,
    B,
}

impl From<KeyHolder> for PartyRole {
    fn from(k: KeyHolder) -> Self {
        match k {
            KeyHolder::A => PartyRole::ClientA,
            KeyHolder::B => PartyRole::ClientB,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchParams {
    pub slots: usize,
    pub t: u64,
    /// Defaults to `slots`.
    pub chunk_size: Option<usize>,
    pub key_holder: KeyHolder,
    /// Real-valued entries are multiplied by this and rounded.
    pub value_scale: f64,
    pub vector_seed: u64,
    /// Run the diagonal baseline on square matrices that fit in the slots.
    pub baseline: bool,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            slots: 8192,
            t: 65537,
            chunk_size: None,
            key_holder: KeyHolder::A,
            value_scale: 1.0,
            vector_seed: 7,
            baseline: true,
        }
    }
}

impl BenchParams {
    pub fn he_params(&self) -> Result<HeParams> {
        HeParams::new(self.slots, self.t)
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size.unwrap_or(self.slots)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub name: Option<String>,
    pub path: Option<PathBuf>,
    pub synthetic: Option<SyntheticSpec>,
    /// `group/name` in the SuiteSparse collection.
    pub suitesparse: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    Path(PathBuf),
    Synthetic(SyntheticSpec),
    SuiteSparse { group: String, name: String },
}

impl MatrixEntry {
    pub fn source(&self) -> Result<MatrixSource> {
        match (&self.path, &self.synthetic, &self.suitesparse) {
            (Some(p), None, None) => Ok(MatrixSource::Path(p.clone())),
            (None, Some(s), None) => Ok(MatrixSource::Synthetic(s.clone())),
            (None, None, Some(id)) => {
                let (group, name) = id.split_once('/').ok_or_else(|| {
                    Error::Config(format!("suitesparse id {id:?} must be group/name"))
                })?;
                Ok(MatrixSource::SuiteSparse {
                    group: group.to_string(),
                    name: name.to_string(),
                })
            }
            _ => Err(Error::Config(
                "each [[matrix]] needs exactly one of path, synthetic, suitesparse".into(),
            )),
        }
    }

    pub fn display_name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match self.source() {
            Ok(MatrixSource::Path(p)) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            Ok(MatrixSource::Synthetic(s)) => {
                format!("synthetic-{}x{}-{}-s{}", s.rows, s.cols, s.nnz, s.seed)
            }
            Ok(MatrixSource::SuiteSparse { name, .. }) => name,
            Err(_) => "<invalid>".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub params: BenchParams,
    #[serde(rename = "matrix")]
    pub matrices: Vec<MatrixEntry>,
    pub scaling_suite: Option<ScalingSuite>,
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Read a config file; relative matrix paths resolve against its
    /// directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for m in &mut cfg.matrices {
            if let Some(p) = &mut m.path {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config() {
        let cfg = BenchConfig::parse(
            r#"
            [params]
            slots = 64
            key_holder = "B"

            [[matrix]]
            path = "m/tiny.mtx"

            [[matrix]]
            name = "r"
            synthetic = { rows = 4, cols = 4, nnz = 3, seed = 1 }

            [[matrix]]
            suitesparse = "HB/arc130"

            [scaling_suite]
            points = 3
            "#,
        )
        .unwrap();
        assert_eq!(cfg.params.slots, 64);
        assert_eq!(cfg.params.chunk_size(), 64);
        assert_eq!(cfg.params.t, 65537);
        assert_eq!(cfg.params.key_holder, KeyHolder::B);
        assert_eq!(cfg.matrices.len(), 3);
        assert_eq!(cfg.matrices[0].display_name(), "tiny");
        assert_eq!(cfg.matrices[1].display_name(), "r");
        assert_eq!(
            cfg.matrices[2].source().unwrap(),
            MatrixSource::SuiteSparse {
                group: "HB".into(),
                name: "arc130".into()
            }
        );
        let suite = cfg.scaling_suite.unwrap();
        assert_eq!(suite.points, 3);
        assert_eq!(suite.max_nnz, ScalingSuite::default().max_nnz);
    }

    #[test]
    fn empty_config_is_valid() {
        let cfg = BenchConfig::parse("").unwrap();
        assert!(cfg.matrices.is_empty());
        assert!(cfg.scaling_suite.is_none());
    }

    #[test]
    fn bad_entries() {
        assert!(BenchConfig::parse("[params]\nslotz = 3\n").is_err());
        let cfg = BenchConfig::parse("[[matrix]]\nname = \"x\"\n").unwrap();
        assert!(cfg.matrices[0].source().is_err());
        let cfg = BenchConfig::parse("[[matrix]]\nsuitesparse = \"arc130\"\n").unwrap();
        assert!(cfg.matrices[0].source().is_err());
    }
}
